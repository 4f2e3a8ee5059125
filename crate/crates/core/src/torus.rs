//! Graded monomial calculus of a quantum torus.
//!
//! A quantum torus on `n` generators has relations `t_j t_i = q_ij t_i t_j`.
//! Coefficients are kept symbolically in `{±1} × Z^{n(n-1)/2}`: a sign times a
//! product of powers of formal generators `g_ij` (`i < j`), so every identity
//! is checked exactly without choosing a field.

use std::fmt;
use std::str::FromStr;

use crate::error::{check_dim, check_size, Error, Result};
use crate::gf2::{self, parity, Gf2Matrix, Gf2Vector, Subspace, MAX_DIM};

/// Position of the pair `(i, j)`, `i < j`, in the order `(0,1), (0,2), ..., (1,2), ...`.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// An element `±∏ g_ij^{k_ij}` of the coefficient group.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SymbolicUnit {
    negative: bool,
    exponents: Vec<i64>,
}

impl SymbolicUnit {
    pub fn one(n: usize) -> Self {
        Self {
            negative: false,
            exponents: vec![0; pair_count(n)],
        }
    }

    pub fn sign(n: usize, negative: bool) -> Self {
        Self {
            negative,
            ..Self::one(n)
        }
    }

    /// The formal generator `g_ij` (`i < j`).
    pub fn generator(n: usize, i: usize, j: usize) -> Self {
        let mut u = Self::one(n);
        u.exponents[pair_index(n, i, j)] = 1;
        u
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    /// Whether the unit is `±1`.
    pub fn is_sign(&self) -> bool {
        self.exponents.iter().all(|&k| k == 0)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_size(self.exponents.len(), other.exponents.len())?;
        let exponents = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(Self {
            negative: self.negative ^ other.negative,
            exponents,
        })
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let exponents = self
            .exponents
            .iter()
            .map(|a| a.checked_mul(k).ok_or(Error::Overflow))
            .collect::<Result<_>>()?;
        Ok(Self {
            negative: self.negative && k.rem_euclid(2) == 1,
            exponents,
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        self.pow(-1)
    }

    pub fn negate(&self) -> Self {
        Self {
            negative: !self.negative,
            exponents: self.exponents.clone(),
        }
    }
}

/// One entry of a quantum matrix as written in text: `+`, `-` or a formal symbol `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Entry {
    Plus,
    Minus,
    Symbol,
}

/// An `n x n` quantum matrix with `q_ii = 1` and `q_ji = q_ij^{-1}`.
///
/// Only the entries above the diagonal are stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuantumMatrix {
    n: usize,
    upper: Vec<SymbolicUnit>,
}

impl QuantumMatrix {
    /// The fully generic matrix with `q_ij = g_ij` for all `i < j`.
    pub fn generic(n: usize) -> Result<Self> {
        Self::from_entries(n, |_, _| Entry::Symbol)
    }

    /// Builds the matrix from its entries above the diagonal.
    pub fn from_entries(n: usize, entry: impl Fn(usize, usize) -> Entry) -> Result<Self> {
        check_dim(n, 1, MAX_DIM)?;
        let mut upper = Vec::with_capacity(pair_count(n));
        for i in 0..n {
            for j in i + 1..n {
                upper.push(match entry(i, j) {
                    Entry::Plus => SymbolicUnit::one(n),
                    Entry::Minus => SymbolicUnit::sign(n, true),
                    Entry::Symbol => SymbolicUnit::generator(n, i, j),
                });
            }
        }
        Ok(Self { n, upper })
    }

    pub fn from_elementary(e: &ElementaryMatrix) -> Self {
        Self::from_entries(e.dim(), |i, j| {
            if e.get(i, j) {
                Entry::Minus
            } else {
                Entry::Plus
            }
        })
        .expect("elementary matrices have valid dimension")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> Result<SymbolicUnit> {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => Ok(SymbolicUnit::one(self.n)),
            Less => Ok(self.upper[pair_index(self.n, i, j)].clone()),
            Greater => self.upper[pair_index(self.n, j, i)].inverse(),
        }
    }

    /// Parses rows of `+`, `-` and `q` joined by `/`.
    pub fn parse(text: &str) -> Result<Self> {
        let grid = parse_grid(text, &['+', '-', 'q'])?;
        let n = grid.len();
        for (i, row) in grid.iter().enumerate() {
            if row[i] != '+' {
                return Err(parse_error(i, i, "diagonal entries must be '+'"));
            }
            for j in 0..i {
                let expected = row[j];
                if grid[j][i] != expected {
                    return Err(parse_error(
                        i,
                        j,
                        &format!(
                            "entry does not match its transpose ({:?} vs {:?})",
                            expected, grid[j][i]
                        ),
                    ));
                }
            }
        }
        Self::from_entries(n, |i, j| match grid[i][j] {
            '+' => Entry::Plus,
            '-' => Entry::Minus,
            _ => Entry::Symbol,
        })
    }

    /// The GF(2) encoding if every entry is `±1`; `None` means no graded involution exists.
    pub fn is_elementary(&self) -> Option<ElementaryMatrix> {
        if !self.upper.iter().all(SymbolicUnit::is_sign) {
            return None;
        }
        let n = self.n;
        let e = Gf2Matrix::from_fn(n, n, |i, j| {
            i != j && self.upper[pair_index(n, i.min(j), i.max(j))].is_negative()
        })
        .ok()?;
        ElementaryMatrix::new(e).ok()
    }
}

/// An elementary quantum matrix, stored as the symmetric zero-diagonal GF(2)
/// matrix `E` with `E_ij = 1` exactly when `q_ij = -1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementaryMatrix {
    e: Gf2Matrix,
}

/// Largest size for which [`ElementaryMatrix::all`] enumerates.
pub const MAX_ELEMENTARY_SWEEP: usize = 8;

impl ElementaryMatrix {
    pub fn new(e: Gf2Matrix) -> Result<Self> {
        check_dim(e.rows(), 1, MAX_DIM)?;
        if !e.is_square() {
            return Err(Error::NotElementary("matrix is not square".into()));
        }
        if !e.is_symmetric() {
            return Err(Error::NotElementary("matrix is not symmetric".into()));
        }
        if !e.has_zero_diagonal() {
            return Err(Error::NotElementary("diagonal entries must be +1".into()));
        }
        Ok(Self { e })
    }

    /// The commutative torus: every entry `+1`.
    pub fn trivial(n: usize) -> Result<Self> {
        Self::new(Gf2Matrix::zero(n, n)?)
    }

    /// Sets `E_ij = E_ji = f(i, j)` for `i < j`.
    pub fn from_upper(n: usize, f: impl Fn(usize, usize) -> bool) -> Result<Self> {
        Self::new(Gf2Matrix::from_fn(n, n, |i, j| {
            i != j && f(i.min(j), i.max(j))
        })?)
    }

    /// Decodes bit `k` of `index` as the `k`-th pair in [`pair_index`] order.
    pub fn from_index(n: usize, index: u64) -> Result<Self> {
        Self::from_upper(n, |i, j| index.checked_shr(pair_index(n, i, j) as u32).is_some_and(|b| b & 1 == 1))
    }

    /// All `2^{n(n-1)/2}` elementary matrices of size `n`.
    pub fn all(n: usize) -> Result<impl Iterator<Item = ElementaryMatrix>> {
        check_dim(n, 1, MAX_ELEMENTARY_SWEEP)?;
        Ok((0..1u64 << pair_count(n)).map(move |k| Self::from_index(n, k).expect("n checked")))
    }

    pub fn dim(&self) -> usize {
        self.e.rows()
    }

    pub fn matrix(&self) -> &Gf2Matrix {
        &self.e
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.e.get(i, j)
    }

    pub fn row(&self, i: usize) -> u32 {
        self.e.row(i)
    }

    pub fn rank(&self) -> usize {
        self.e.rank()
    }

    /// `alpha^T E beta` on packed vectors.
    pub fn commutes_sign(&self, alpha: u32, beta: u32) -> bool {
        self.e.bilinear(alpha, beta)
    }
}

impl fmt::Display for ElementaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim();
        for i in 0..n {
            if i > 0 {
                f.write_str("/")?;
            }
            for j in 0..n {
                f.write_str(if self.get(i, j) { "-" } else { "+" })?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ElementaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ElementaryMatrix({self})")
    }
}

impl FromStr for ElementaryMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        QuantumMatrix::parse(s)?
            .is_elementary()
            .ok_or(Error::NoGradedInvolution)
    }
}

fn parse_error(row: usize, col: usize, message: &str) -> Error {
    Error::Parse {
        row: row + 1,
        col: col + 1,
        message: message.to_string(),
    }
}

/// Splits `text` into a square grid of allowed characters.
fn parse_grid(text: &str, allowed: &[char]) -> Result<Vec<Vec<char>>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(parse_error(0, 0, "empty matrix"));
    }
    let grid: Vec<Vec<char>> = text
        .split(['/', '\n'])
        .map(|r| r.trim().chars().collect())
        .collect();
    let n = grid.len();
    for (i, row) in grid.iter().enumerate() {
        if let Some((j, c)) = row.iter().enumerate().find(|(_, c)| !allowed.contains(c)) {
            return Err(parse_error(i, j, &format!("unexpected character {c:?}")));
        }
        if row.len() != n {
            return Err(parse_error(
                i,
                row.len().min(n),
                &format!("row has {} entries, expected {n} (matrix must be square)", row.len()),
            ));
        }
    }
    if n > MAX_DIM {
        return Err(Error::DimensionOutOfRange {
            dim: n,
            min: 1,
            max: MAX_DIM,
        });
    }
    Ok(grid)
}

/// A homogeneous element `c * t_1^{α_1} ... t_n^{α_n}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    coeff: SymbolicUnit,
    degree: Vec<i64>,
}

impl Monomial {
    pub fn new(coeff: SymbolicUnit, degree: Vec<i64>) -> Result<Self> {
        check_size(pair_count(degree.len()), coeff.exponents.len())?;
        Ok(Self { coeff, degree })
    }

    /// `t_α` with coefficient 1.
    pub fn basis(degree: Vec<i64>) -> Self {
        let n = degree.len();
        Self {
            coeff: SymbolicUnit::one(n),
            degree,
        }
    }

    pub fn unit(n: usize) -> Self {
        Self::basis(vec![0; n])
    }

    /// The generator `t_i` (0-based).
    pub fn generator(n: usize, i: usize) -> Self {
        let mut d = vec![0; n];
        d[i] = 1;
        Self::basis(d)
    }

    pub fn coeff(&self) -> &SymbolicUnit {
        &self.coeff
    }

    pub fn degree(&self) -> &[i64] {
        &self.degree
    }

    pub fn dim(&self) -> usize {
        self.degree.len()
    }

    /// Packed mod-2 reduction of the degree.
    pub fn degree_mod2(&self) -> u32 {
        degree_mod2(&self.degree)
    }

    pub fn negate(&self) -> Self {
        Self {
            coeff: self.coeff.negate(),
            degree: self.degree.clone(),
        }
    }

    pub fn scale(&self, c: &SymbolicUnit) -> Result<Self> {
        Ok(Self {
            coeff: self.coeff.mul(c)?,
            degree: self.degree.clone(),
        })
    }
}

pub fn degree_mod2(degree: &[i64]) -> u32 {
    degree
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &a)| acc | (((a & 1) as u32) << i))
}

/// `t_α t_β = ∏_{i<j} q_ij^{α_j β_i} t_{α+β}`, with coefficients multiplied exactly.
pub fn multiply(q: &QuantumMatrix, x: &Monomial, y: &Monomial) -> Result<Monomial> {
    let n = q.dim();
    check_size(n, x.dim())?;
    check_size(n, y.dim())?;
    let mut coeff = x.coeff.mul(&y.coeff)?;
    for i in 0..n {
        for j in i + 1..n {
            let k = x.degree[j].checked_mul(y.degree[i]).ok_or(Error::Overflow)?;
            if k != 0 {
                coeff = coeff.mul(&q.upper[pair_index(n, i, j)].pow(k)?)?;
            }
        }
    }
    let degree = x
        .degree
        .iter()
        .zip(&y.degree)
        .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
        .collect::<Result<_>>()?;
    Ok(Monomial { coeff, degree })
}

/// `α^T E β mod 2`: `true` when `t_α t_β = -t_β t_α`.
pub fn commutation_sign(e: &ElementaryMatrix, alpha: &Gf2Vector, beta: &Gf2Vector) -> Result<bool> {
    check_size(e.dim(), alpha.dim())?;
    check_size(e.dim(), beta.dim())?;
    Ok(e.commutes_sign(alpha.bits(), beta.bits()))
}

/// A graded involution of type `(a_1, ..., a_n)`, `τ(t_i) = a_i t_i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Involution {
    signs: Gf2Vector,
}

impl Involution {
    /// Bit `i` of `minus` set means `a_i = -1`.
    pub fn new(n: usize, minus: u32) -> Result<Self> {
        Ok(Self {
            signs: Gf2Vector::new(n, minus)?,
        })
    }

    /// The main involution `(1, ..., 1)`.
    pub fn main(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    pub fn from_signs(signs: Gf2Vector) -> Self {
        Self { signs }
    }

    pub fn dim(&self) -> usize {
        self.signs.dim()
    }

    pub fn minus_mask(&self) -> u32 {
        self.signs.bits()
    }

    pub fn signs(&self) -> Gf2Vector {
        self.signs
    }

    pub fn is_minus(&self, i: usize) -> bool {
        self.signs.get(i)
    }

    /// All `2^n` involutions of size `n`.
    pub fn all(n: usize) -> Result<impl Iterator<Item = Involution>> {
        Ok(Gf2Vector::all(n)?.map(|signs| Involution { signs }))
    }
}

impl fmt::Display for Involution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            f.write_str(if self.is_minus(i) { "-" } else { "+" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Involution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Involution({self})")
    }
}

impl FromStr for Involution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(parse_error(0, 0, "empty sign string"));
        }
        let mut minus = 0u32;
        for (i, c) in s.chars().enumerate() {
            match c {
                '+' => {}
                '-' => {
                    if i >= 32 {
                        break;
                    }
                    minus |= 1 << i;
                }
                other => return Err(parse_error(0, i, &format!("unexpected character {other:?}"))),
            }
        }
        let n = s.chars().count();
        check_dim(n, 1, MAX_DIM)?;
        Self::new(n, minus)
    }
}

/// A quadratic form `Q(v) = <a, v> + Σ_{i<j, E_ij=1} v_i v_j` over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadraticForm {
    n: usize,
    linear: u32,
    /// `upper[i]` holds the bits `j > i` with `E_ij = 1`.
    upper: Vec<u32>,
    polar: Gf2Matrix,
}

impl QuadraticForm {
    pub fn new(e: &ElementaryMatrix, linear: u32) -> Self {
        let n = e.dim();
        let upper = (0..n).map(|i| e.row(i) & !gf2::low_mask(i + 1)).collect();
        Self {
            n,
            linear: linear & gf2::low_mask(n),
            upper,
            polar: e.matrix().clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// The values `Q(e_i)`.
    pub fn linear_part(&self) -> u32 {
        self.linear
    }

    /// The bilinear form `Q(x+y) + Q(x) + Q(y)`.
    pub fn polar(&self) -> &Gf2Matrix {
        &self.polar
    }

    pub fn evaluate(&self, v: u32) -> bool {
        let mut acc = parity(self.linear & v);
        let mut bits = v;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            acc ^= parity(self.upper[i] & v);
            bits &= bits - 1;
        }
        acc
    }

    pub fn evaluate_degree(&self, degree: &[i64]) -> bool {
        self.evaluate(degree_mod2(degree))
    }

    /// Calls `f(v, Q(v))` for every `v` in `GF(2)^n`, in Gray-code order.
    pub fn for_each_value(&self, mut f: impl FnMut(u32, bool)) {
        let mut v = 0u32;
        let mut q = false;
        f(v, q);
        for step in 1u64..(1u64 << self.n) {
            let i = step.trailing_zeros() as usize;
            // Q(v + e_i) = Q(v) + Q(e_i) + (E v)_i
            q ^= (self.linear >> i & 1 == 1) ^ parity(self.polar.row(i) & v);
            v ^= 1 << i;
            f(v, q);
        }
    }

    /// `|{v : Q(v) = 0}|`.
    pub fn zero_count(&self) -> u64 {
        let mut count = 0;
        self.for_each_value(|_, q| count += u64::from(!q));
        count
    }

    /// The form `v ↦ Q(P v)` after the change of generators `P`.
    pub fn transport(&self, p: &Gf2Matrix) -> Result<QuadraticForm> {
        let e = ElementaryMatrix::new(gf2::congruence(&self.polar, p)?)?;
        let linear = (0..self.n).fold(0, |acc, i| {
            acc | (u32::from(self.evaluate(p.column(i))) << i)
        });
        Ok(QuadraticForm::new(&e, linear))
    }
}

/// The form whose zero set, lifted to `Z^n`, is the set of degrees fixed by `τ`.
pub fn fixed_degree_form(e: &ElementaryMatrix, tau: &Involution) -> Result<QuadraticForm> {
    check_size(e.dim(), tau.dim())?;
    Ok(QuadraticForm::new(e, tau.minus_mask()))
}

/// `τ(c t_α) = (-1)^{Q(ᾱ)} c t_α`.
pub fn apply_involution(e: &ElementaryMatrix, tau: &Involution, x: &Monomial) -> Result<Monomial> {
    check_size(e.dim(), x.dim())?;
    let q = fixed_degree_form(e, tau)?;
    Ok(if q.evaluate_degree(&x.degree) {
        x.negate()
    } else {
        x.clone()
    })
}

/// Transports `(E, τ)` along the change of generators `P` (columns are the new degrees).
pub fn transport_pair(
    e: &ElementaryMatrix,
    tau: &Involution,
    p: &Gf2Matrix,
) -> Result<(ElementaryMatrix, Involution)> {
    let q = fixed_degree_form(e, tau)?.transport(p)?;
    let e2 = ElementaryMatrix::new(q.polar().clone())?;
    let tau2 = Involution::new(e.dim(), q.linear_part())?;
    Ok((e2, tau2))
}

/// A subgroup `L` with `2Z^n ⊆ L ⊆ Z^n`, determined by its image `L / 2Z^n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GradedSubgroup {
    n: usize,
    residues: Subspace,
}

impl GradedSubgroup {
    pub fn from_residues(residues: Subspace) -> Self {
        Self {
            n: residues.ambient_dim(),
            residues,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn residues(&self) -> &Subspace {
        &self.residues
    }

    /// `[Z^n : L]`.
    pub fn index(&self) -> u64 {
        1 << (self.n - self.residues.rank())
    }

    pub fn contains(&self, degree: &[i64]) -> bool {
        degree.len() == self.n && self.residues.contains(degree_mod2(degree))
    }

    /// A Z-basis: lifts of the reduced residue basis plus `2 e_j` for the
    /// coordinates `j` that carry no pivot.
    pub fn generators(&self) -> Vec<Vec<i64>> {
        let mut pivots = 0u32;
        let mut out = Vec::with_capacity(self.n);
        for &b in self.residues.basis() {
            pivots |= b & b.wrapping_neg();
            out.push((0..self.n).map(|i| i64::from(b >> i & 1)).collect());
        }
        for j in (0..self.n).filter(|&j| pivots >> j & 1 == 0) {
            let mut v = vec![0; self.n];
            v[j] = 2;
            out.push(v);
        }
        out
    }

    /// `(d_1, ..., d_n)` with `L = ⊕ d_i Z σ_i`, when `L` has that shape.
    pub fn scale_profile(&self) -> Option<Vec<u8>> {
        let support = self.residues.coordinate_support()?;
        Some((0..self.n).map(|i| if support >> i & 1 == 1 { 1 } else { 2 }).collect())
    }
}

/// Degrees of central monomials: `{α : E ᾱ = 0}`.
pub fn center_grading_group(e: &ElementaryMatrix) -> GradedSubgroup {
    let kernel = e.matrix().kernel();
    GradedSubgroup::from_residues(Subspace::span(e.dim(), kernel.iter().map(Gf2Vector::bits)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h() -> ElementaryMatrix {
        "+-/-+".parse().unwrap()
    }

    fn m3() -> ElementaryMatrix {
        "+--/-+-/--+".parse().unwrap()
    }

    #[test]
    fn generic_product_picks_up_generator() {
        let q = QuantumMatrix::generic(2).unwrap();
        let t1 = Monomial::generator(2, 0);
        let t2 = Monomial::generator(2, 1);
        let p = multiply(&q, &t2, &t1).unwrap();
        assert_eq!(p.degree(), &[1, 1]);
        assert_eq!(p.coeff(), &SymbolicUnit::generator(2, 0, 1));
        let unit = Monomial::unit(2);
        assert_eq!(multiply(&q, &t2, &unit).unwrap(), t2);
    }

    #[test]
    fn hyperbolic_relation_signs() {
        let q = QuantumMatrix::from_elementary(&h());
        let t1 = Monomial::generator(2, 0);
        let t2 = Monomial::generator(2, 1);
        assert!(multiply(&q, &t2, &t1).unwrap().coeff().is_negative());
        assert!(!multiply(&q, &t1, &t2).unwrap().coeff().is_negative());
    }

    #[test]
    fn commutation_examples() {
        let e1 = Gf2Vector::unit(2, 0).unwrap();
        let e2 = Gf2Vector::unit(2, 1).unwrap();
        assert!(commutation_sign(&h(), &e1, &e2).unwrap());
        assert!(!commutation_sign(&h(), &e1, &Gf2Vector::zero(2).unwrap()).unwrap());
        let a: Gf2Vector = "100".parse().unwrap();
        let b: Gf2Vector = "011".parse().unwrap();
        assert!(!commutation_sign(&m3(), &a, &b).unwrap());
    }

    #[test]
    fn parse_and_display() {
        let h13: ElementaryMatrix = "+-+/-++/+++".parse().unwrap();
        assert_eq!(h13.to_string(), "+-+/-++/+++");
        assert!(h13.get(0, 1) && !h13.get(0, 2));
        assert!(matches!("+-/++".parse::<ElementaryMatrix>(), Err(Error::Parse { .. })));
        assert!(matches!("-+/++".parse::<ElementaryMatrix>(), Err(Error::Parse { .. })));
        assert!(matches!("++/+".parse::<ElementaryMatrix>(), Err(Error::Parse { .. })));
        assert!(matches!("+x/++".parse::<ElementaryMatrix>(), Err(Error::Parse { row: 1, col: 2, .. })));
        assert_eq!("+q/q+".parse::<ElementaryMatrix>(), Err(Error::NoGradedInvolution));
    }

    #[test]
    fn elementary_detection() {
        assert!(QuantumMatrix::generic(2).unwrap().is_elementary().is_none());
        let q = QuantumMatrix::from_entries(2, |_, _| Entry::Minus).unwrap();
        assert_eq!(q.is_elementary().unwrap(), h());
        let one = QuantumMatrix::from_entries(3, |_, _| Entry::Plus).unwrap();
        assert_eq!(one.is_elementary().unwrap(), ElementaryMatrix::trivial(3).unwrap());
    }

    #[test]
    fn quantum_matrix_inverse_entries() {
        let q = QuantumMatrix::generic(3).unwrap();
        let up = q.entry(0, 2).unwrap();
        let down = q.entry(2, 0).unwrap();
        assert_eq!(up.mul(&down).unwrap(), SymbolicUnit::one(3));
        assert_eq!(q.entry(1, 1).unwrap(), SymbolicUnit::one(3));
    }

    #[test]
    fn involution_examples() {
        let star = Involution::main(2).unwrap();
        let t1t2 = Monomial::basis(vec![1, 1]);
        assert_eq!(apply_involution(&h(), &star, &t1t2).unwrap(), t1t2.negate());
        let unit = Monomial::unit(2);
        assert_eq!(apply_involution(&h(), &star, &unit).unwrap(), unit);
        let h13: ElementaryMatrix = "+-+/-++/+++".parse().unwrap();
        let tau2: Involution = "--+".parse().unwrap();
        let t1 = Monomial::generator(3, 0);
        assert_eq!(apply_involution(&h13, &tau2, &t1).unwrap(), t1.negate());
    }

    #[test]
    fn fixed_degree_form_examples() {
        let q = fixed_degree_form(&h(), &Involution::main(2).unwrap()).unwrap();
        let values: Vec<bool> = (0..4).map(|v| q.evaluate(v)).collect();
        assert_eq!(values, vec![false, false, false, true]);

        let zero = ElementaryMatrix::trivial(3).unwrap();
        let q = fixed_degree_form(&zero, &Involution::main(3).unwrap()).unwrap();
        assert_eq!(q.zero_count(), 8);

        let one2 = ElementaryMatrix::trivial(2).unwrap();
        let q = fixed_degree_form(&one2, &"-+".parse().unwrap()).unwrap();
        assert_eq!((0..4).filter(|&v| !q.evaluate(v)).collect::<Vec<_>>(), vec![0, 2]);
    }

    #[test]
    fn gray_code_matches_direct_evaluation() {
        let e: ElementaryMatrix = "+--+/-+-+/--++/++++".parse().unwrap();
        let q = QuadraticForm::new(&e, 0b1010);
        q.for_each_value(|v, val| assert_eq!(val, q.evaluate(v), "v = {v:#b}"));
    }

    #[test]
    fn center_examples() {
        let h13: ElementaryMatrix = "+-+/-++/+++".parse().unwrap();
        let z = center_grading_group(&h13);
        assert_eq!(z.scale_profile(), Some(vec![2, 2, 1]));
        assert_eq!(z.index(), 4);
        let triv = center_grading_group(&ElementaryMatrix::trivial(3).unwrap());
        assert_eq!(triv.scale_profile(), Some(vec![1, 1, 1]));

        let z = center_grading_group(&m3());
        assert_eq!(z.index(), 4);
        for v in 0..8u32 {
            let central = (0..3).all(|i| !m3().commutes_sign(v, 1 << i));
            assert_eq!(central, z.residues().contains(v));
        }
    }

    #[test]
    fn generators_span_expected_index() {
        let z = center_grading_group(&m3());
        let gens = z.generators();
        let det = crate::unimodular::integer_determinant(
            &(0..3).map(|i| gens.iter().map(|g| g[i]).collect()).collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(det.unsigned_abs(), z.index());
        assert!(gens.iter().all(|g| z.contains(g)));
    }
}
