//! Classification of graded involutions on elementary quantum tori.
//!
//! Every pair `(E, τ)` is carried by a change of generators to exactly one of
//! three canonical pairs on `h_{l,n}`: the main involution (all signs `+`),
//! `τ₁` (a single `-` right after the hyperbolic blocks, needs `n > 2l`) or
//! `τ₂` (`-` on both generators of the last hyperbolic block, needs `l ≥ 1`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, check_size, Error, Result};
use crate::gf2::{Subspace, MAX_DIM};
use crate::normal_form::{all_minus, h_matrix, product, Frame};
use crate::torus::{
    fixed_degree_form, transport_pair, ElementaryMatrix, GradedSubgroup, Involution,
    QuadraticForm,
};
use crate::unimodular::IntUnimodularMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InvolutionKind {
    Main,
    Tau1,
    Tau2,
}

impl InvolutionKind {
    pub const ALL: [InvolutionKind; 3] = [Self::Main, Self::Tau1, Self::Tau2];

    /// Whether `(kind, l, n)` names a canonical pair.
    pub fn check(self, l: usize, n: usize) -> Result<()> {
        check_dim(n, 1, MAX_DIM)?;
        let violation = match self {
            Self::Main if 2 * l > n => Some("main involution needs 2l <= n"),
            Self::Tau1 if 2 * l >= n => Some("tau1 needs n - 2l >= 1"),
            Self::Tau2 if l == 0 => Some("tau2 needs l >= 1"),
            Self::Tau2 if 2 * l > n => Some("tau2 needs 2l <= n"),
            _ => None,
        };
        match violation {
            Some(msg) => Err(Error::InvalidParameters(format!("{msg} (l = {l}, n = {n})"))),
            None => Ok(()),
        }
    }

    /// Admissible `l` values for rank `n`.
    pub fn l_range(self, n: usize) -> std::ops::RangeInclusive<usize> {
        match self {
            Self::Main => 0..=n / 2,
            Self::Tau1 => 0..=(n.saturating_sub(1)) / 2,
            Self::Tau2 => 1..=n / 2,
        }
    }

    /// Number of zeros of the canonical form on `GF(2)^n`.
    pub fn zero_count(self, l: usize, n: usize) -> u64 {
        let half = 1u64 << (n - 1);
        let skew = 1u64 << (n - l - 1);
        match self {
            Self::Main => half + skew,
            Self::Tau1 => half,
            Self::Tau2 => half - skew,
        }
    }
}

impl fmt::Display for InvolutionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Main => "Main",
            Self::Tau1 => "Tau1",
            Self::Tau2 => "Tau2",
        })
    }
}

impl FromStr for InvolutionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "main" | "*" => Ok(Self::Main),
            "tau1" => Ok(Self::Tau1),
            "tau2" => Ok(Self::Tau2),
            other => Err(Error::InvalidParameters(format!("unknown involution kind {other:?}"))),
        }
    }
}

/// The class of a pair together with a change of generators reaching the canonical pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvolutionClass {
    pub l: usize,
    pub kind: InvolutionKind,
    pub witness: IntUnimodularMatrix,
}

/// The canonical pair `(h_{l,n}, τ)` of the given kind.
pub fn canonical_involution(
    kind: InvolutionKind,
    l: usize,
    n: usize,
) -> Result<(ElementaryMatrix, Involution)> {
    kind.check(l, n)?;
    let minus = match kind {
        InvolutionKind::Main => 0,
        InvolutionKind::Tau1 => 1 << (2 * l),
        InvolutionKind::Tau2 => 0b11 << (2 * l - 2),
    };
    Ok((h_matrix(l, n)?, Involution::new(n, minus)?))
}

/// Kind read off from `l` and the number of zeros of the fixed-degree form.
pub fn kind_from_invariants(l: usize, n: usize, zeros: u64) -> Option<InvolutionKind> {
    InvolutionKind::ALL
        .into_iter()
        .find(|k| k.check(l, n).is_ok() && k.zero_count(l, n) == zeros)
}

/// Generator substitution that clears two `(-,-)` hyperbolic blocks:
/// `x1 = t1 t2 t4, x2 = t2 t4, x3 = t1 t3, x4 = t1 t3 t4`.
pub const DOUBLE_BLOCK_SUBSTITUTION: [[i64; 4]; 4] =
    [[1, 1, 0, 1], [0, 1, 0, 1], [1, 0, 1, 0], [1, 0, 1, 1]];

/// Generator substitution turning `(h × 1, (-,-,-))` into `(h × 1, (+,+,-))`:
/// `x1 = t1 t2 t3, x2 = t2 t3, x3 = t3`.
pub const BLOCK_TO_CENTER_SUBSTITUTION: [[i64; 3]; 3] = [[1, 1, 1], [0, 1, 1], [0, 0, 1]];

impl Frame {
    /// Applies the substitution whose `k`-th new generator has degree
    /// `columns[k]` in the generators at `positions`.
    fn substitute<const K: usize>(&mut self, positions: [usize; K], columns: &[[i64; K]; K]) -> Result<()> {
        let cols: Vec<Vec<i64>> = columns.iter().map(|c| c.to_vec()).collect();
        let local = IntUnimodularMatrix::from_columns(&cols)?;
        for &op in local.ops() {
            use crate::unimodular::ColumnOp::*;
            match op {
                Swap { i, j } => self.swap(positions[i], positions[j])?,
                Add { from, to } => self.add(positions[from], positions[to])?,
                Negate { i } => {
                    self.witness.apply(Negate { i: positions[i] })?;
                }
            }
        }
        Ok(())
    }
}

/// Classifies `(E, τ)`, returning `l`, the kind and a witness basis change.
pub fn classify(e: &ElementaryMatrix, tau: &Involution) -> Result<InvolutionClass> {
    let n = e.dim();
    check_size(n, tau.dim())?;
    let mut frame = Frame::new(e, tau.minus_mask());
    frame.reduce_from(0)?;
    let l = e.rank() / 2;

    // normalize each hyperbolic block to (+,+) or (-,-)
    let mut double_minus = Vec::new();
    for b in 0..l {
        let (x, y) = (2 * b, 2 * b + 1);
        match (frame.sign(x), frame.sign(y)) {
            (false, false) => {}
            (false, true) => frame.add(x, y)?,
            (true, false) => frame.add(y, x)?,
            (true, true) => double_minus.push(b),
        }
    }
    for pair in double_minus.chunks_exact(2) {
        let (b1, b2) = (pair[0], pair[1]);
        frame.substitute([2 * b1, 2 * b1 + 1, 2 * b2, 2 * b2 + 1], &DOUBLE_BLOCK_SUBSTITUTION)?;
    }
    let mut leftover = double_minus.len() % 2 == 1;
    if leftover {
        let b = *double_minus.last().expect("odd length");
        if b != l - 1 {
            frame.swap(2 * b, 2 * l - 2)?;
            frame.swap(2 * b + 1, 2 * l - 1)?;
        }
    }

    // commutative part: keep at most one minus, at position 2l
    let minus: Vec<usize> = (2 * l..n).filter(|&i| frame.sign(i)).collect();
    if let Some((&first, rest)) = minus.split_first() {
        for &k in rest {
            frame.add(first, k)?;
        }
        frame.swap(first, 2 * l)?;
        if leftover {
            frame.substitute([2 * l - 2, 2 * l - 1, 2 * l], &BLOCK_TO_CENTER_SUBSTITUTION)?;
            leftover = false;
        }
    }

    let kind = if leftover {
        InvolutionKind::Tau2
    } else if 2 * l < n && frame.sign(2 * l) {
        InvolutionKind::Tau1
    } else {
        InvolutionKind::Main
    };

    let zeros = fixed_degree_form(e, tau)?.zero_count();
    assert_eq!(
        kind_from_invariants(l, n, zeros),
        Some(kind),
        "constructed class disagrees with the zero-count invariant for {e} / {tau}"
    );
    let class = InvolutionClass {
        l,
        kind,
        witness: frame.witness,
    };
    debug_assert!(verify_class(e, tau, &class));
    Ok(class)
}

/// Whether the class witness transports `(E, τ)` onto the canonical pair.
pub fn verify_class(e: &ElementaryMatrix, tau: &Involution, class: &InvolutionClass) -> bool {
    let Ok(canonical) = canonical_involution(class.kind, class.l, e.dim()) else {
        return false;
    };
    class.witness.dim() == e.dim()
        && class.witness.is_consistent()
        && transport_pair(e, tau, &class.witness.to_gf2()).is_ok_and(|pair| pair == canonical)
}

/// Degrees of central monomials fixed by `τ`: `{α : E ᾱ = 0, Q(ᾱ) = 0}`.
pub fn involution_center(e: &ElementaryMatrix, tau: &Involution) -> Result<GradedSubgroup> {
    let q: QuadraticForm = fixed_degree_form(e, tau)?;
    let kernel: Vec<u32> = e.matrix().kernel().iter().map(|v| v.bits()).collect();
    // Q is additive on the kernel, so its zero set there is a subspace
    let odd = kernel.iter().copied().find(|&v| q.evaluate(v));
    let basis = kernel.iter().filter_map(|&v| match (q.evaluate(v), odd) {
        (false, _) => Some(v),
        (true, Some(o)) if o != v => Some(v ^ o),
        _ => None,
    });
    Ok(GradedSubgroup::from_residues(Subspace::span(e.dim(), basis)))
}

/// `h_{l-1,n-3} × m₃` for `τ₁`, `h_{l-2,n-4} × m₄` for `τ₂`: a matrix whose main
/// involution lies in the given class.
pub fn decomposition(kind: InvolutionKind, l: usize, n: usize) -> Result<ElementaryMatrix> {
    kind.check(l, n)?;
    let (drop_l, block) = match kind {
        InvolutionKind::Tau1 if l >= 1 => (1, 3),
        InvolutionKind::Tau2 if l >= 2 => (2, 4),
        _ => {
            return Err(Error::InvalidParameters(format!(
                "no main-involution decomposition for {kind} with l = {l}"
            )))
        }
    };
    let tail = all_minus(block)?;
    if n == block {
        return Ok(tail);
    }
    product(&h_matrix(l - drop_l, n - block)?, &tail)
}

/// Number of entries `2` in the center scale profile of a canonical pair.
pub fn canonical_center_twos(kind: InvolutionKind, l: usize) -> usize {
    match kind {
        InvolutionKind::Main | InvolutionKind::Tau2 => 2 * l,
        InvolutionKind::Tau1 => 2 * l + 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(e: &str, t: &str) -> (ElementaryMatrix, Involution) {
        (e.parse().unwrap(), t.parse().unwrap())
    }

    fn class_of(e: &str, t: &str) -> (usize, InvolutionKind) {
        let (e, t) = pair(e, t);
        let c = classify(&e, &t).unwrap();
        assert!(verify_class(&e, &t, &c));
        (c.l, c.kind)
    }

    #[test]
    fn golden_pairs() {
        assert_eq!(class_of("+--/-+-/--+", "+++"), (1, InvolutionKind::Tau1));
        assert_eq!(class_of("+---/-+--/--+-/---+", "++++"), (2, InvolutionKind::Tau2));
        assert_eq!(class_of("+++/+++/+++", "+++"), (0, InvolutionKind::Main));
        assert_eq!(class_of("+-/-+", "+-"), (1, InvolutionKind::Main));
        assert_eq!(class_of("++/++", "--"), (0, InvolutionKind::Tau1));
        assert_eq!(class_of("+", "-"), (0, InvolutionKind::Tau1));
        assert_eq!(class_of("+", "+"), (0, InvolutionKind::Main));
    }

    #[test]
    fn canonical_pair_is_fixed_with_identity_witness() {
        let (e, t) = pair("+++/+++/+++", "+++");
        assert_eq!(classify(&e, &t).unwrap().witness, IntUnimodularMatrix::identity(3));
    }

    #[test]
    fn canonical_examples() {
        let (e, t) = canonical_involution(InvolutionKind::Main, 1, 2).unwrap();
        assert_eq!((e.to_string(), t.to_string()), ("+-/-+".into(), "++".into()));
        let (e, t) = canonical_involution(InvolutionKind::Tau1, 0, 1).unwrap();
        assert_eq!((e.to_string(), t.to_string()), ("+".into(), "-".into()));
        assert!(canonical_involution(InvolutionKind::Tau2, 0, 2).is_err());
        assert!(canonical_involution(InvolutionKind::Tau1, 1, 2).is_err());
    }

    #[test]
    fn center_examples() {
        let (e, t) = canonical_involution(InvolutionKind::Tau1, 1, 3).unwrap();
        assert_eq!(involution_center(&e, &t).unwrap().scale_profile(), Some(vec![2, 2, 2]));
        let (e, t) = canonical_involution(InvolutionKind::Main, 0, 3).unwrap();
        assert_eq!(involution_center(&e, &t).unwrap().scale_profile(), Some(vec![1, 1, 1]));
        let (e, t) = canonical_involution(InvolutionKind::Tau2, 1, 2).unwrap();
        assert_eq!(involution_center(&e, &t).unwrap().scale_profile(), Some(vec![2, 2]));
    }

    #[test]
    fn decomposition_examples() {
        assert_eq!(decomposition(InvolutionKind::Tau1, 1, 3).unwrap(), all_minus(3).unwrap());
        assert_eq!(decomposition(InvolutionKind::Tau2, 2, 4).unwrap(), all_minus(4).unwrap());
        let d = decomposition(InvolutionKind::Tau1, 2, 5).unwrap();
        assert_eq!(d, product(&h_matrix(1, 2).unwrap(), &all_minus(3).unwrap()).unwrap());
        let c = classify(&d, &Involution::main(5).unwrap()).unwrap();
        assert_eq!((c.l, c.kind), (2, InvolutionKind::Tau1));
        assert!(decomposition(InvolutionKind::Tau1, 0, 3).is_err());
        assert!(decomposition(InvolutionKind::Tau2, 1, 4).is_err());
    }

    #[test]
    fn exhaustive_classification_is_certified() {
        for n in 1..=5 {
            for e in ElementaryMatrix::all(n).unwrap() {
                for t in Involution::all(n).unwrap() {
                    let c = classify(&e, &t).unwrap();
                    assert!(verify_class(&e, &t, &c), "{e} {t}");
                }
            }
        }
    }
}
