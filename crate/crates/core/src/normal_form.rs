//! Reduction of an elementary quantum matrix to the normal form `h_{l,n}`:
//! `l` hyperbolic blocks `h` followed by a commutative block.

use serde::Serialize;

use crate::error::{check_dim, check_size, Error, Result};
use crate::gf2::{self, Gf2Matrix, MAX_DIM};
use crate::torus::ElementaryMatrix;
use crate::unimodular::{ColumnOp, IntUnimodularMatrix};

/// `h_{l,n}`: `E_{2i,2i+1} = 1` for `i < l`, everything else zero.
pub fn h_matrix(l: usize, n: usize) -> Result<ElementaryMatrix> {
    check_dim(n, 1, MAX_DIM)?;
    if 2 * l > n {
        return Err(Error::InvalidParameters(format!(
            "h_{{l,n}} needs 2l <= n, got l = {l}, n = {n}"
        )));
    }
    ElementaryMatrix::from_upper(n, |i, j| j == i + 1 && i % 2 == 0 && i < 2 * l)
}

/// The matrix with every off-diagonal entry `-1`.
pub fn all_minus(n: usize) -> Result<ElementaryMatrix> {
    ElementaryMatrix::from_upper(n, |_, _| true)
}

/// Block-diagonal product: relations inside each block, generators of
/// different blocks commute.
pub fn product(a: &ElementaryMatrix, b: &ElementaryMatrix) -> Result<ElementaryMatrix> {
    let k = a.dim();
    ElementaryMatrix::from_upper(k + b.dim(), |i, j| {
        if j < k {
            a.get(i, j)
        } else if i >= k {
            b.get(i - k, j - k)
        } else {
            false
        }
    })
}

/// Relabels generators: the result has `E'_ij = E_{σ(i)σ(j)}`.
pub fn permute(e: &ElementaryMatrix, sigma: &[usize]) -> Result<(ElementaryMatrix, IntUnimodularMatrix)> {
    check_size(e.dim(), sigma.len())?;
    let p = IntUnimodularMatrix::permutation(sigma)?;
    let out = ElementaryMatrix::from_upper(e.dim(), |i, j| e.get(sigma[i], sigma[j]))?;
    debug_assert_eq!(gf2::congruence(e.matrix(), &p.to_gf2()).ok().as_ref(), Some(out.matrix()));
    Ok((out, p))
}

/// Replaces the generator `t_q` by `t_p t_q`, given `E_kp = E_kq = 1`.
/// Afterwards `t_k` commutes with the new `q`-th generator.
pub fn pivot_step(
    e: &ElementaryMatrix,
    k: usize,
    p: usize,
    q: usize,
) -> Result<(ElementaryMatrix, IntUnimodularMatrix)> {
    let n = e.dim();
    let applicable =
        k < n && p < n && q < n && k != p && k != q && p != q && e.get(k, p) && e.get(k, q);
    if !applicable {
        return Err(Error::PivotNotApplicable { k, p, q });
    }
    let mut frame = Frame::new(e, 0);
    frame.add(p, q)?;
    Ok((frame.elementary()?, frame.witness))
}

/// The normal form of an elementary matrix and a basis change reaching it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalFormResult {
    pub l: usize,
    /// Columns are the degrees of the new generators in the old basis.
    pub witness: IntUnimodularMatrix,
    #[serde(serialize_with = "crate::normal_form::serialize_display")]
    pub target: ElementaryMatrix,
}

pub(crate) fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(
    value: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(value)
}

/// Working state for a sequence of generator substitutions: the current
/// commutation matrix, the current involution signs and the accumulated witness.
pub(crate) struct Frame {
    pub rows: Vec<u32>,
    pub signs: u32,
    pub witness: IntUnimodularMatrix,
}

impl Frame {
    pub fn new(e: &ElementaryMatrix, signs: u32) -> Self {
        Self {
            rows: e.matrix().row_words().to_vec(),
            signs,
            witness: IntUnimodularMatrix::identity(e.dim()),
        }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn bit(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn sign(&self, i: usize) -> bool {
        self.signs >> i & 1 == 1
    }

    /// New generator `to` is the product of the current generators `from` and `to`.
    pub fn add(&mut self, from: usize, to: usize) -> Result<()> {
        // Q(x + y) = Q(x) + Q(y) + <x, y>_E
        let new_sign = self.sign(from) ^ self.sign(to) ^ self.bit(from, to);
        self.signs = (self.signs & !(1 << to)) | (u32::from(new_sign) << to);
        self.rows[to] ^= self.rows[from];
        for row in self.rows.iter_mut() {
            *row ^= (*row >> from & 1) << to;
        }
        self.witness.apply(ColumnOp::Add { from, to })
    }

    pub fn swap(&mut self, i: usize, j: usize) -> Result<()> {
        if i == j {
            return Ok(());
        }
        self.rows.swap(i, j);
        for row in self.rows.iter_mut() {
            let (bi, bj) = (*row >> i & 1, *row >> j & 1);
            *row = (*row & !(1 << i | 1 << j)) | bi << j | bj << i;
        }
        let (si, sj) = (self.signs >> i & 1, self.signs >> j & 1);
        self.signs = (self.signs & !(1 << i | 1 << j)) | si << j | sj << i;
        self.witness.apply(ColumnOp::Swap { i, j })
    }

    /// Moves generator `from` to position `to` (`from < to`), shifting the ones between down.
    pub fn rotate_to(&mut self, from: usize, to: usize) -> Result<()> {
        for i in from..to {
            self.swap(i, i + 1)?;
        }
        Ok(())
    }

    pub fn elementary(&self) -> Result<ElementaryMatrix> {
        ElementaryMatrix::new(Gf2Matrix::from_rows(self.n(), &self.rows)?)
    }

    /// Brings the generators from `s` on into the shape `h × ... × h × 1`.
    pub fn reduce_from(&mut self, s: usize) -> Result<()> {
        let n = self.n();
        if s + 1 >= n || self.rows[s..].iter().all(|&r| r == 0) {
            return Ok(());
        }
        let beyond = |row: u32, from: usize| row & !gf2::low_mask(from);
        if beyond(self.rows[s], s + 1) == 0 {
            self.reduce_from(s + 1)?;
            return self.rotate_to(s, n - 1);
        }
        // clear row s down to a single neighbour
        while beyond(self.rows[s], s + 1).count_ones() > 1 {
            let nbrs = beyond(self.rows[s], s + 1);
            let p = nbrs.trailing_zeros() as usize;
            let q = (nbrs & (nbrs - 1)).trailing_zeros() as usize;
            self.add(p, q)?;
        }
        let partner = beyond(self.rows[s], s + 1).trailing_zeros() as usize;
        self.swap(partner, s + 1)?;
        // clear row s + 1 using t_s
        while beyond(self.rows[s + 1], s + 2) != 0 {
            let q = beyond(self.rows[s + 1], s + 2).trailing_zeros() as usize;
            self.add(s, q)?;
        }
        self.reduce_from(s + 2)
    }
}

/// Reduces `E` to `h_{l,n}` with `l = rank(E) / 2`.
pub fn reduce(e: &ElementaryMatrix) -> Result<NormalFormResult> {
    let mut frame = Frame::new(e, 0);
    frame.reduce_from(0)?;
    let target = frame.elementary()?;
    let rank = e.rank();
    assert!(rank.is_multiple_of(2), "rank of an alternating form is even");
    let l = rank / 2;
    debug_assert_eq!(target, h_matrix(l, e.dim())?);
    Ok(NormalFormResult {
        l,
        witness: frame.witness,
        target,
    })
}

/// Checks that the witness is unimodular, replays to itself, and carries `E` to `h_{l,n}`.
pub fn verify_witness(e: &ElementaryMatrix, r: &NormalFormResult) -> bool {
    let n = e.dim();
    if r.witness.dim() != n || !r.witness.is_consistent() {
        return false;
    }
    let Ok(h) = h_matrix(r.l, n) else {
        return false;
    };
    r.target == h
        && gf2::congruence(e.matrix(), &r.witness.to_gf2()).is_ok_and(|m| &m == h.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> ElementaryMatrix {
        s.parse().unwrap()
    }

    #[test]
    fn h_matrix_examples() {
        assert_eq!(h_matrix(0, 3).unwrap(), ElementaryMatrix::trivial(3).unwrap());
        assert_eq!(h_matrix(1, 2).unwrap(), parse("+-/-+"));
        let h = parse("+-/-+");
        assert_eq!(h_matrix(2, 4).unwrap(), product(&h, &h).unwrap());
        assert!(h_matrix(2, 3).is_err());
    }

    #[test]
    fn product_examples() {
        let h = parse("+-/-+");
        let one = ElementaryMatrix::trivial(1).unwrap();
        assert_eq!(product(&h, &one).unwrap(), h_matrix(1, 3).unwrap());
        let z = product(&ElementaryMatrix::trivial(2).unwrap(), &ElementaryMatrix::trivial(3).unwrap())
            .unwrap();
        assert_eq!(z, ElementaryMatrix::trivial(5).unwrap());
    }

    #[test]
    fn permute_examples() {
        let h13 = h_matrix(1, 3).unwrap();
        let (same, p) = permute(&h13, &[0, 1, 2]).unwrap();
        assert_eq!(same, h13);
        assert_eq!(p, IntUnimodularMatrix::identity(3));
        let (moved, _) = permute(&h13, &[2, 1, 0]).unwrap();
        assert_eq!(moved, parse("+++/++-/+-+"));
        let (triv, _) = permute(&ElementaryMatrix::trivial(3).unwrap(), &[1, 2, 0]).unwrap();
        assert_eq!(triv, ElementaryMatrix::trivial(3).unwrap());
    }

    #[test]
    fn pivot_examples() {
        let m3 = all_minus(3).unwrap();
        let (eta, _) = pivot_step(&m3, 0, 1, 2).unwrap();
        assert_eq!(eta.to_string().split('/').next(), Some("+-+"));
        assert!(!eta.get(0, 2));

        let m4 = all_minus(4).unwrap();
        let (eta, _) = pivot_step(&m4, 1, 0, 2).unwrap();
        assert_eq!(eta.row(0), m4.row(0));

        assert_eq!(
            pivot_step(&h_matrix(1, 3).unwrap(), 0, 1, 2),
            Err(Error::PivotNotApplicable { k: 0, p: 1, q: 2 })
        );
        assert!(pivot_step(&m3, 0, 0, 2).is_err());
    }

    #[test]
    fn reduce_examples() {
        let r = reduce(&all_minus(3).unwrap()).unwrap();
        assert_eq!(r.l, 1);
        assert!(verify_witness(&all_minus(3).unwrap(), &r));
        let r = reduce(&all_minus(4).unwrap()).unwrap();
        assert_eq!(r.l, 2);
        let triv = ElementaryMatrix::trivial(4).unwrap();
        let r = reduce(&triv).unwrap();
        assert_eq!(r.l, 0);
        assert_eq!(r.witness, IntUnimodularMatrix::identity(4));
    }

    #[test]
    fn forged_witness_rejected() {
        let h = h_matrix(1, 2).unwrap();
        let forged = NormalFormResult {
            l: 0,
            witness: IntUnimodularMatrix::identity(2),
            target: ElementaryMatrix::trivial(2).unwrap(),
        };
        assert!(!verify_witness(&h, &forged));
        let triv = ElementaryMatrix::trivial(2).unwrap();
        assert!(verify_witness(&triv, &forged));
    }

    #[test]
    fn exhaustive_up_to_five() {
        for n in 1..=5 {
            for e in ElementaryMatrix::all(n).unwrap() {
                let r = reduce(&e).unwrap();
                assert!(verify_witness(&e, &r), "{e}");
                assert_eq!(2 * r.l, e.rank());
            }
        }
    }
}
