use proptest::prelude::*;

use qtorus::gf2::{congruence, Gf2Matrix, Gf2Vector};
use qtorus::involution::{classify, involution_center};
use qtorus::normal_form::{h_matrix, product, reduce, verify_witness};
use qtorus::oracle::{generic_reduce, semilattice_axiom_check, window_points};
use qtorus::roots::{count_roots, generate_roots, EarsSpec, Stratum};
use qtorus::semilattice::{similar, CosetPattern};
use qtorus::torus::{
    apply_involution, commutation_sign, fixed_degree_form, multiply, pair_count, pair_index, transport_pair,
    ElementaryMatrix, Involution, Monomial, QuantumMatrix, SymbolicUnit,
};
use qtorus::unimodular::{integer_determinant, ColumnOp, IntUnimodularMatrix};

fn elementary(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = ElementaryMatrix> {
    n.prop_flat_map(|n| (Just(n), prop::collection::vec(any::<bool>(), pair_count(n))))
        .prop_map(|(n, bits)| {
            ElementaryMatrix::from_upper(n, |i, j| bits[pair_index(n, i, j)]).unwrap()
        })
}

fn invertible(n: usize) -> impl Strategy<Value = Gf2Matrix> {
    prop::collection::vec(0..(1u32 << n), n)
        .prop_map(move |rows| Gf2Matrix::from_rows(n, &rows).unwrap())
        .prop_filter("invertible", Gf2Matrix::is_invertible)
}

fn pair(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (ElementaryMatrix, Involution)> {
    elementary(n).prop_flat_map(|e| {
        let n = e.dim();
        (Just(e), 0..(1u32 << n)).prop_map(move |(e, m)| (e, Involution::new(n, m).unwrap()))
    })
}

fn symbolic(n: usize) -> impl Strategy<Value = SymbolicUnit> {
    let pairs = pair_count(n);
    (any::<bool>(), prop::collection::vec(-2i64..=2, pairs)).prop_map(move |(neg, exps)| {
        let mut c = SymbolicUnit::sign(n, neg);
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                c = c.mul(&SymbolicUnit::generator(n, i, j).pow(exps[k]).unwrap()).unwrap();
                k += 1;
            }
        }
        c
    })
}

fn monomial(n: usize) -> impl Strategy<Value = Monomial> {
    (symbolic(n), prop::collection::vec(-3i64..=3, n))
        .prop_map(|(c, d)| Monomial::new(c, d).unwrap())
}

fn signed_monomial(n: usize) -> impl Strategy<Value = Monomial> {
    (any::<bool>(), prop::collection::vec(-3i64..=3, n))
        .prop_map(move |(neg, d)| Monomial::new(SymbolicUnit::sign(n, neg), d).unwrap())
}

fn ops(n: usize) -> impl Strategy<Value = Vec<ColumnOp>> {
    let op = (0..n, 0..n, 0..3u8).prop_filter_map("distinct columns", |(i, j, k)| match k {
        0 if i != j => Some(ColumnOp::Swap { i, j }),
        1 if i != j => Some(ColumnOp::Add { from: i, to: j }),
        2 => Some(ColumnOp::Negate { i }),
        _ => None,
    });
    prop::collection::vec(op, 0..24)
}

fn pattern(n: usize) -> impl Strategy<Value = CosetPattern> {
    let size = 1u32 << n;
    prop::collection::vec(0..size, 0..size as usize)
        .prop_map(move |vals| CosetPattern::from_values(n, vals.into_iter().chain([0])).unwrap())
}

fn bits_to_degree(n: usize, v: u32) -> Vec<i64> {
    (0..n).map(|i| i64::from(v >> i & 1)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn congruence_composes(
        (e, p, q) in elementary(1..=6usize)
            .prop_flat_map(|e| { let n = e.dim(); (Just(e), invertible(n), invertible(n)) })
    ) {
        let lhs = congruence(&congruence(e.matrix(), &p).unwrap(), &q).unwrap();
        let rhs = congruence(e.matrix(), &p.mul(&q).unwrap()).unwrap();
        prop_assert_eq!(lhs.clone(), rhs);
        prop_assert_eq!(lhs.rank(), e.matrix().rank());
    }

    #[test]
    fn unimodular_values_are_consistent(n in 1usize..=6, ops in ops(6)) {
        let ops: Vec<ColumnOp> = ops.into_iter().filter(|op| match *op {
            ColumnOp::Swap { i, j } => i < n && j < n,
            ColumnOp::Add { from, to } => from < n && to < n,
            ColumnOp::Negate { i } => i < n,
        }).collect();
        let m = IntUnimodularMatrix::from_ops(n, &ops).unwrap();
        prop_assert!(m.is_consistent());
        prop_assert_eq!(integer_determinant(&m.rows()).unwrap().abs(), 1);
        prop_assert!(m.to_gf2().is_invertible());
        let inv = m.inverse().unwrap();
        prop_assert!(inv.is_consistent());
        prop_assert_eq!(m.compose(&inv).unwrap().rows(), IntUnimodularMatrix::identity(n).rows());
        let rebuilt = IntUnimodularMatrix::from_columns(&m.columns()).unwrap();
        prop_assert!(rebuilt.is_consistent());
        prop_assert_eq!(rebuilt.columns(), m.columns());
    }

    #[test]
    fn multiplication_is_associative(
        (x, y, z) in (1usize..=4).prop_flat_map(|n| (monomial(n), monomial(n), monomial(n)))
    ) {
        let q = QuantumMatrix::generic(x.dim()).unwrap();
        let lhs = multiply(&q, &multiply(&q, &x, &y).unwrap(), &z).unwrap();
        let rhs = multiply(&q, &x, &multiply(&q, &y, &z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn commutation_coherence(
        (e, x, y) in elementary(1..=8usize).prop_flat_map(|e| {
            let n = e.dim();
            (Just(e), signed_monomial(n), signed_monomial(n))
        })
    ) {
        let n = e.dim();
        let q = QuantumMatrix::from_elementary(&e);
        let xy = multiply(&q, &x, &y).unwrap();
        let yx = multiply(&q, &y, &x).unwrap();
        prop_assert_eq!(xy.degree(), yx.degree());
        let a = Gf2Vector::new(n, x.degree_mod2()).unwrap();
        let b = Gf2Vector::new(n, y.degree_mod2()).unwrap();
        let differ = xy.coeff().is_negative() != yx.coeff().is_negative();
        prop_assert_eq!(differ, commutation_sign(&e, &a, &b).unwrap());
    }

    #[test]
    fn commutation_sign_is_biadditive(e in elementary(1..=12usize), a in any::<u32>(), a2 in any::<u32>(), b in any::<u32>()) {
        let n = e.dim();
        let mask = (1u32 << n) - 1;
        let v = |w: u32| Gf2Vector::new(n, w & mask).unwrap();
        let lhs = commutation_sign(&e, &(v(a) + v(a2)), &v(b)).unwrap();
        let rhs = commutation_sign(&e, &v(a), &v(b)).unwrap() ^ commutation_sign(&e, &v(a2), &v(b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn involution_laws(
        ((e, tau), x, y) in pair(1..=6usize).prop_flat_map(|(e, t)| {
            let n = e.dim();
            (Just((e, t)), signed_monomial(n), signed_monomial(n))
        })
    ) {
        let q = QuantumMatrix::from_elementary(&e);
        let tx = apply_involution(&e, &tau, &x).unwrap();
        prop_assert_eq!(apply_involution(&e, &tau, &tx).unwrap(), x.clone());
        let lhs = apply_involution(&e, &tau, &multiply(&q, &x, &y).unwrap()).unwrap();
        let rhs = multiply(&q, &apply_involution(&e, &tau, &y).unwrap(), &tx).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn polarization((e, tau) in pair(1..=12usize), a in any::<u32>(), b in any::<u32>()) {
        let n = e.dim();
        let mask = (1u32 << n) - 1;
        let (a, b) = (a & mask, b & mask);
        let q = fixed_degree_form(&e, &tau).unwrap();
        prop_assert_eq!(q.evaluate(a ^ b), q.evaluate(a) ^ q.evaluate(b) ^ e.matrix().bilinear(a, b));
    }

    #[test]
    fn center_coherence(e in elementary(1..=10usize), a in any::<u32>()) {
        let n = e.dim();
        let a = Gf2Vector::new(n, a & ((1 << n) - 1)).unwrap();
        let in_kernel = e.matrix().mul_vec(&a).unwrap().is_zero();
        let commutes = (0..n).all(|i| !commutation_sign(&e, &a, &Gf2Vector::unit(n, i).unwrap()).unwrap());
        prop_assert_eq!(in_kernel, commutes);
    }

    #[test]
    fn center_consists_of_fixed_central_degrees((e, tau) in pair(1..=8usize)) {
        let n = e.dim();
        let center = involution_center(&e, &tau).unwrap();
        let q = fixed_degree_form(&e, &tau).unwrap();
        for v in 0..(1u32 << n) {
            let central = e.matrix().mul_word(v) == 0;
            prop_assert_eq!(center.residues().contains(v), central && !q.evaluate(v));
        }
    }

    #[test]
    fn fixed_set_coherence((e, tau) in pair(1..=10usize), v in any::<u32>()) {
        let n = e.dim();
        let v = v & ((1 << n) - 1);
        let x = Monomial::basis(bits_to_degree(n, v));
        let fixed = apply_involution(&e, &tau, &x).unwrap() == x;
        prop_assert_eq!(fixed, !fixed_degree_form(&e, &tau).unwrap().evaluate(v));
    }

    #[test]
    fn reduce_matches_rank_and_oracle(e in elementary(1..=12usize)) {
        let r = reduce(&e).unwrap();
        prop_assert_eq!(e.rank() % 2, 0);
        prop_assert_eq!(2 * r.l, e.rank());
        prop_assert_eq!(r.l, generic_reduce(&e).unwrap());
        prop_assert!(verify_witness(&e, &r));
    }

    #[test]
    fn reduce_is_congruence_invariant(
        (e, p) in elementary(1..=8usize).prop_flat_map(|e| { let n = e.dim(); (Just(e), invertible(n)) })
    ) {
        let moved = ElementaryMatrix::new(congruence(e.matrix(), &p).unwrap()).unwrap();
        prop_assert_eq!(reduce(&moved).unwrap().l, reduce(&e).unwrap().l);
    }

    #[test]
    fn reduce_is_additive_on_products(a in elementary(1..=6usize), b in elementary(1..=6usize)) {
        let ab = product(&a, &b).unwrap();
        prop_assert_eq!(reduce(&ab).unwrap().l, reduce(&a).unwrap().l + reduce(&b).unwrap().l);
    }

    #[test]
    fn reduce_fixes_normal_forms(n in 1usize..=12, l in 0usize..=6) {
        prop_assume!(2 * l <= n);
        let h = h_matrix(l, n).unwrap();
        let r = reduce(&h).unwrap();
        prop_assert_eq!(r.l, l);
        prop_assert_eq!(congruence(h.matrix(), &r.witness.to_gf2()).unwrap(), h.matrix().clone());
    }

    #[test]
    fn classification_is_transport_invariant(
        ((e, tau), p) in pair(1..=8usize).prop_flat_map(|(e, t)| { let n = e.dim(); (Just((e, t)), invertible(n)) })
    ) {
        let (e2, tau2) = transport_pair(&e, &tau, &p).unwrap();
        let a = classify(&e, &tau).unwrap();
        let b = classify(&e2, &tau2).unwrap();
        prop_assert_eq!((a.l, a.kind), (b.l, b.kind));
    }

    #[test]
    fn similarity_preserves_invariants(
        (p, g, sigma) in (1usize..=4).prop_flat_map(|n| (pattern(n), invertible(n), any::<u32>()))
    ) {
        let members: Vec<u32> = p.elements().collect();
        let sigma = members[sigma as usize % members.len()];
        let q = p.translate(sigma).map(&g).unwrap();
        let w = similar(&p, &q).unwrap();
        prop_assert!(w.is_some_and(|w| w.verify(&p, &q)));
        prop_assert_eq!(p.invariants(), q.invariants());
        prop_assert_eq!(p.translate(sigma).saturated_subgroup(), p.saturated_subgroup());
    }

    #[test]
    fn saturated_subgroup_is_intersection_of_translates(p in (1usize..=4).prop_flat_map(pattern)) {
        let n = p.rank();
        let all = (0..1u32 << n).filter(|&v| p.elements().all(|s| p.translate(s).contains(v)));
        let inter: Vec<u32> = all.collect();
        prop_assert_eq!(p.saturated_subgroup().elements(), inter);
    }

    #[test]
    fn index_bounds_for_spanning_patterns(p in (1usize..=5).prop_flat_map(pattern)) {
        let n = p.rank() as u64;
        if p.is_semilattice_in_lambda() {
            prop_assert!(n < p.index() && p.index() <= 1 << n);
        }
    }

    #[test]
    fn patterns_satisfy_raw_axioms(p in (1usize..=3).prop_flat_map(pattern)) {
        prop_assert!(semilattice_axiom_check(&window_points(&p, 2), 2));
    }

    #[test]
    fn root_strata_are_disjoint_and_monotone(
        r in 3usize..=4,
        p in (0usize..=2).prop_flat_map(pattern),
        b in 0u32..=1,
    ) {
        let spec = EarsSpec::new(r, p).unwrap();
        let small: Vec<_> = generate_roots(&spec, b).collect();
        let large: std::collections::HashSet<_> = generate_roots(&spec, b + 1).collect();
        prop_assert!(small.iter().all(|root| large.contains(root)));
        let keys: std::collections::HashSet<_> = small.iter().map(|x| (x.finite.clone(), x.lambda.clone())).collect();
        prop_assert_eq!(keys.len(), small.len());
        let count = |s: Stratum| small.iter().filter(|x| x.stratum == s).count() as u64;
        prop_assert_eq!(count_roots(&spec, b), (count(Stratum::Iso), count(Stratum::Short), count(Stratum::Long)));
    }
}
