//! Semilattices `S ⊆ Z^n` with `2Z^n + S ⊆ S`, stored as coset patterns
//! `T = S / 2Z^n ⊆ GF(2)^n`, and their similarity classes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{check_dim, check_size, Error, Result};
use crate::gf2::{self, enumerate_invertible, Gf2Matrix, Gf2Vector, Subspace, MAX_DIM};
use crate::involution::{canonical_involution, classify, InvolutionKind};
use crate::normal_form::serialize_display;
use crate::torus::{fixed_degree_form, ElementaryMatrix, Involution};

/// Largest rank accepted by [`similar`] and [`census_involutive`].
pub const MAX_SIMILARITY_DIM: usize = 5;
/// Largest rank for the exhaustive census over all patterns.
pub const MAX_CENSUS_ALL_DIM: usize = 4;

/// A set of residues mod 2 containing zero; bit `v` of the bitset is the
/// residue whose coordinate `i` is bit `i` of `v`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetPattern {
    n: usize,
    words: Vec<u64>,
}

impl CosetPattern {
    fn empty(n: usize) -> Result<Self> {
        check_dim(n, 0, MAX_DIM)?;
        let bits = 1usize << n;
        Ok(Self {
            n,
            words: vec![0; bits.div_ceil(64)],
        })
    }

    /// Builds a pattern from residues given as packed words.
    pub fn from_values(n: usize, values: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut p = Self::empty(n)?;
        for v in values {
            if v & !gf2::low_mask(n) != 0 {
                return Err(Error::InvalidParameters(format!(
                    "residue {v:#b} exceeds rank {n}"
                )));
            }
            p.insert(v);
        }
        if !p.contains(0) {
            return Err(Error::MissingZero);
        }
        Ok(p)
    }

    /// Pattern of rank `n <= 6` from a bitmask over `GF(2)^n`.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        check_dim(n, 0, 6)?;
        let mut p = Self::empty(n)?;
        p.words[0] = mask & full_mask(n);
        if !p.contains(0) {
            return Err(Error::MissingZero);
        }
        Ok(p)
    }

    /// `S = Z^n`.
    pub fn full(n: usize) -> Result<Self> {
        let mut p = Self::empty(n)?;
        for v in 0..(1u64 << n) {
            p.insert(v as u32);
        }
        Ok(p)
    }

    fn insert(&mut self, v: u32) {
        self.words[(v >> 6) as usize] |= 1 << (v & 63);
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn contains(&self, v: u32) -> bool {
        (v as u64) < (1u64 << self.n) && self.words[(v >> 6) as usize] >> (v & 63) & 1 == 1
    }

    /// Residues in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                (bits != 0).then(|| {
                    let b = bits.trailing_zeros();
                    bits &= bits - 1;
                    (w as u32) << 6 | b
                })
            })
        })
    }

    /// Bitmask form, available for rank `<= 6`.
    pub fn mask(&self) -> Option<u64> {
        (self.n <= 6).then(|| self.words[0])
    }

    /// The number of cosets of `2Λ` in `S`.
    pub fn index(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// `T + σ`.
    pub fn translate(&self, sigma: u32) -> Self {
        let mut p = Self::empty(self.n).expect("rank already valid");
        for v in self.elements() {
            p.insert(v ^ sigma);
        }
        p
    }

    /// `g(T)` for an invertible `g`.
    pub fn map(&self, g: &Gf2Matrix) -> Result<Self> {
        check_size(self.n, g.rows())?;
        if !g.is_invertible() {
            return Err(Error::NotABasisChange);
        }
        let mut p = Self::empty(self.n)?;
        for v in self.elements() {
            p.insert(g.mul_word(v));
        }
        Ok(p)
    }

    /// GF(2)-span of the residues.
    pub fn span(&self) -> Subspace {
        let mut s = Subspace::zero(self.n);
        for v in self.elements() {
            s.insert(v);
            if s.rank() == self.n {
                break;
            }
        }
        s
    }

    /// Whether `S` spans `Λ`; since `2Λ ⊆ <S>`, this is spanning of `GF(2)^n` by `T`.
    pub fn is_semilattice_in_lambda(&self) -> bool {
        self.span().rank() == self.n
    }

    /// `n - dim span(T)`, i.e. `[Λ : <S>] = 2^t`.
    pub fn twist_number(&self) -> usize {
        self.n - self.span().rank()
    }

    fn closed_under(&self, t: u32) -> bool {
        self.elements().all(|s| self.contains(s ^ t))
    }

    /// `{t ∈ T : t + T = T}`.
    pub fn saturated_subgroup(&self) -> Subspace {
        let mut sigma = Subspace::zero(self.n);
        for t in self.elements() {
            if !sigma.contains(t) && self.closed_under(t) {
                sigma.insert(t);
            }
        }
        sigma
    }

    /// `s` with `[Λ : Σ(S)] = 2^s`.
    pub fn saturation_number(&self) -> usize {
        self.n - self.saturated_subgroup().rank()
    }

    /// The pattern of a subspace.
    pub fn from_subspace(s: &Subspace) -> Result<Self> {
        Self::from_values(s.ambient_dim(), s.elements())
    }

    /// `(index, saturation number, twist number)`; equal for similar patterns.
    pub fn invariants(&self) -> (u64, usize, usize) {
        (self.index(), self.saturation_number(), self.twist_number())
    }
}

fn full_mask(n: usize) -> u64 {
    if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1 << n)) - 1
    }
}

impl fmt::Display for CosetPattern {
    /// Comma-separated residues, coordinate 1 first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.elements().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            for i in 0..self.n {
                f.write_str(if v >> i & 1 == 1 { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CosetPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CosetPattern[{self}]")
    }
}

impl FromStr for CosetPattern {
    type Err = Error;

    /// Parses `"000,110,011"`; the empty string is the rank-0 pattern.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Self::from_values(0, [0]);
        }
        let mut n = None;
        let mut values = Vec::new();
        for (k, item) in s.split(',').enumerate() {
            let item = item.trim();
            let len = item.chars().count();
            if *n.get_or_insert(len) != len {
                return Err(Error::Parse {
                    row: 1,
                    col: k + 1,
                    message: format!("residue {item:?} has length {len}, expected {}", n.unwrap()),
                });
            }
            if len == 0 {
                return Err(Error::Parse {
                    row: 1,
                    col: k + 1,
                    message: "empty residue".into(),
                });
            }
            let v: Gf2Vector = item.parse().map_err(|e| match e {
                Error::Parse { message, .. } => Error::Parse {
                    row: 1,
                    col: k + 1,
                    message,
                },
                other => other,
            })?;
            values.push(v.bits());
        }
        Self::from_values(n.unwrap_or(0), values)
    }
}

/// `S(E, τ)`: residues of the degrees fixed by `τ`.
pub fn from_involution(e: &ElementaryMatrix, tau: &Involution) -> Result<CosetPattern> {
    let q = fixed_degree_form(e, tau)?;
    let mut p = CosetPattern::empty(e.dim())?;
    q.for_each_value(|v, val| {
        if !val {
            p.insert(v);
        }
    });
    Ok(p)
}

/// `Λ^(t) = 2Zσ_1 + ... + 2Zσ_t + Zσ_{t+1} + ... + Zσ_n`.
pub fn lambda_t(n: usize, t: usize) -> Result<CosetPattern> {
    if t > n {
        return Err(Error::InvalidParameters(format!("need t <= n, got t = {t}, n = {n}")));
    }
    let mut p = CosetPattern::empty(n)?;
    for v in (0..(1u64 << n) as u32).filter(|v| v & gf2::low_mask(t) == 0) {
        p.insert(v);
    }
    Ok(p)
}

/// Closed-form index of the canonical pattern `S(h_{l,n}, τ)`.
pub fn index_formula(kind: InvolutionKind, l: usize, n: usize) -> Result<u64> {
    kind.check(l, n)?;
    Ok(kind.zero_count(l, n))
}

/// The canonical pattern `S(h_{l,n}, τ)`.
pub fn canonical_pattern(kind: InvolutionKind, l: usize, n: usize) -> Result<CosetPattern> {
    let (e, t) = canonical_involution(kind, l, n)?;
    from_involution(&e, &t)
}

/// `g(T_p + translation) = T_q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimilarityWitness {
    #[serde(serialize_with = "serialize_display")]
    pub translation: Gf2Vector,
    #[serde(serialize_with = "serialize_columns")]
    pub map: Gf2Matrix,
}

fn serialize_columns<S: serde::Serializer>(m: &Gf2Matrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    let n = m.rows();
    let cols: Vec<String> = m
        .columns()
        .into_iter()
        .map(|c| Gf2Vector::new(n, c).map(|v| v.to_string()).unwrap_or_default())
        .collect();
    serde::Serialize::serialize(&cols, s)
}

impl SimilarityWitness {
    pub fn verify(&self, p: &CosetPattern, q: &CosetPattern) -> bool {
        p.contains(self.translation.bits())
            && p.translate(self.translation.bits()).map(&self.map).is_ok_and(|img| &img == q)
    }
}

/// Searches `σ ∈ T_p`, `g ∈ GL_n(GF(2))` with `g(T_p + σ) = T_q`.
pub fn similar(p: &CosetPattern, q: &CosetPattern) -> Result<Option<SimilarityWitness>> {
    check_size(p.rank(), q.rank())?;
    let n = p.rank();
    check_dim(n, 0, MAX_SIMILARITY_DIM)?;
    if p.invariants() != q.invariants() {
        return Ok(None);
    }
    let target = q.mask().expect("small rank");
    for sigma in p.elements() {
        let source = p.translate(sigma).mask().expect("small rank");
        if let Some(columns) = find_linear_map(n, source, target) {
            let map = if n == 0 {
                Gf2Matrix::zero(0, 0)?
            } else {
                Gf2Matrix::from_columns(n, &columns)?
            };
            let witness = SimilarityWitness {
                translation: Gf2Vector::from_raw(n, sigma),
                map,
            };
            debug_assert!(n == 0 || witness.verify(p, q));
            return Ok(Some(witness));
        }
    }
    Ok(None)
}

/// Backtracking over the images of `e_0, e_1, ...`: after fixing `k` columns,
/// every vector supported on the first `k` coordinates must satisfy
/// `v ∈ source ⇔ g(v) ∈ target`.
fn find_linear_map(n: usize, source: u64, target: u64) -> Option<Vec<u32>> {
    fn rec(
        n: usize,
        k: usize,
        source: u64,
        target: u64,
        images: &mut Vec<u32>,
        columns: &mut Vec<u32>,
    ) -> bool {
        if k == n {
            return true;
        }
        let used: u64 = images.iter().fold(0, |acc, &v| acc | 1 << v);
        let half = images.len();
        for c in 0..(1u32 << n) {
            if used >> c & 1 == 1 {
                continue;
            }
            let consistent = (0..half).all(|u| {
                let v = (1u32 << k) | u as u32;
                let img = c ^ images[u];
                (source >> v & 1) == (target >> img & 1)
            });
            if !consistent {
                continue;
            }
            for u in 0..half {
                images.push(c ^ images[u]);
            }
            columns.push(c);
            if rec(n, k + 1, source, target, images, columns) {
                return true;
            }
            columns.pop();
            images.truncate(half);
        }
        false
    }
    let mut images = vec![0u32];
    let mut columns = Vec::with_capacity(n);
    rec(n, 0, source, target, &mut images, &mut columns).then_some(columns)
}

/// Image tables `g[v]` for every `g ∈ GL_n(GF(2))`, `n <= 4`.
fn gl_tables(n: usize) -> &'static [Vec<u8>] {
    static TABLES: [OnceLock<Vec<Vec<u8>>>; MAX_CENSUS_ALL_DIM + 1] =
        [const { OnceLock::new() }; MAX_CENSUS_ALL_DIM + 1];
    TABLES[n].get_or_init(|| {
        if n == 0 {
            return vec![vec![0]];
        }
        enumerate_invertible(n)
            .expect("n within enumeration bounds")
            .map(|g| (0..1u32 << n).map(|v| g.mul_word(v) as u8).collect())
            .collect()
    })
}

fn translate_mask(n: usize, mask: u64, sigma: u32) -> u64 {
    let mut out = 0;
    let mut bits = mask;
    while bits != 0 {
        let v = bits.trailing_zeros();
        out |= 1 << (v ^ sigma);
        bits &= bits - 1;
    }
    debug_assert!(n <= 6);
    out
}

/// All images `g(T + σ)` of a rank `<= 4` pattern, as bitmasks.
fn orbit_masks(n: usize, mask: u64, mut visit: impl FnMut(u64)) {
    let mut bits = mask;
    while bits != 0 {
        let sigma = bits.trailing_zeros();
        bits &= bits - 1;
        let shifted = translate_mask(n, mask, sigma);
        for g in gl_tables(n) {
            let mut image = 0u64;
            let mut s = shifted;
            while s != 0 {
                let v = s.trailing_zeros() as usize;
                image |= 1 << g[v];
                s &= s - 1;
            }
            visit(image);
        }
    }
}

/// Minimum bitmask over the similarity class of a pattern of rank `<= 4`.
pub fn canonical_form(p: &CosetPattern) -> Result<CosetPattern> {
    let n = p.rank();
    check_dim(n, 0, MAX_CENSUS_ALL_DIM)?;
    let mut best = u64::MAX;
    orbit_masks(n, p.mask().expect("small rank"), |m| best = best.min(m));
    CosetPattern::from_mask(n, best)
}

/// One similarity class found by a census.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatternClass {
    #[serde(serialize_with = "serialize_display")]
    pub representative: CosetPattern,
    pub index: u64,
    pub saturation: usize,
    pub twist: usize,
    /// Number of distinct patterns in the class.
    pub size: u64,
}

/// Similarity classes of patterns of rank `n <= 4`: all patterns containing
/// zero, or only those spanning `GF(2)^n`. Representatives are the minimal
/// bitmasks of their classes; classes are listed in increasing order of them.
pub fn census_patterns(n: usize, spanning_only: bool) -> Result<Vec<PatternClass>> {
    check_dim(n, 1, MAX_CENSUS_ALL_DIM)?;
    let size = 1usize << n;
    let count = 1u64 << (size - 1);
    let mut seen = vec![false; count as usize];
    let mut classes = Vec::new();
    // bit 0 is always set; index by the remaining bits
    for rest in 0..count {
        if seen[rest as usize] {
            continue;
        }
        let mask = rest << 1 | 1;
        let p = CosetPattern::from_mask(n, mask)?;
        let mut members = 0u64;
        orbit_masks(n, mask, |m| {
            let slot = &mut seen[(m >> 1) as usize];
            if !*slot {
                *slot = true;
                members += 1;
            }
        });
        if spanning_only && !p.is_semilattice_in_lambda() {
            continue;
        }
        let (index, saturation, twist) = p.invariants();
        classes.push(PatternClass {
            representative: p,
            index,
            saturation,
            twist,
            size: members,
        });
    }
    Ok(classes)
}

/// Similarity classes of all semilattices in `Λ` of rank `n <= 4`.
pub fn census_all(n: usize) -> Result<Vec<PatternClass>> {
    census_patterns(n, true)
}

/// `2^n - n`, the stated lower bound for the number of classes of all semilattices.
pub fn census_all_lower_bound(n: usize) -> u64 {
    (1u64 << n) - n as u64
}

/// One similarity class of patterns `S(E, *)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvolutiveClass {
    pub kind: InvolutionKind,
    pub l: usize,
    pub index: u64,
    pub saturation: usize,
    #[serde(serialize_with = "serialize_display")]
    pub representative: CosetPattern,
    /// Matrices `E` whose main-involution pattern lies in this class.
    pub matrices: u64,
}

/// Similarity classes of `S(E, *)` over all elementary `E` of size `n <= 5`.
///
/// Each class is tagged with the involution class `(kind, l)` of `(E, *)` for
/// its first matrix in enumeration order; classes are sorted by `(kind, l)`.
pub fn census_involutive(n: usize) -> Result<Vec<InvolutiveClass>> {
    check_dim(n, 1, MAX_SIMILARITY_DIM)?;
    let star = Involution::main(n)?;
    // distinct patterns first, with the number of matrices and the first one
    let mut patterns: BTreeMap<CosetPattern, (u64, u64)> = BTreeMap::new();
    for (k, e) in ElementaryMatrix::all(n)?.enumerate() {
        let p = from_involution(&e, &star)?;
        patterns.entry(p).or_insert((0, k as u64)).0 += 1;
    }
    let mut classes: Vec<InvolutiveClass> = Vec::new();
    let mut first_matrix: Vec<u64> = Vec::new();
    for (p, (count, first)) in patterns {
        let existing = classes
            .iter()
            .position(|c| similar(&c.representative, &p).is_ok_and(|w| w.is_some()));
        match existing {
            Some(k) => {
                classes[k].matrices += count;
                first_matrix[k] = first_matrix[k].min(first);
            }
            None => {
                let (index, saturation, _) = p.invariants();
                first_matrix.push(first);
                classes.push(InvolutiveClass {
                    kind: InvolutionKind::Main,
                    l: 0,
                    index,
                    saturation,
                    representative: p,
                    matrices: count,
                });
            }
        }
    }
    for (class, &first) in classes.iter_mut().zip(&first_matrix) {
        let c = classify(&ElementaryMatrix::from_index(n, first)?, &star)?;
        class.kind = c.kind;
        class.l = c.l;
    }
    classes.sort_by_key(|c| (c.kind, c.l));
    Ok(classes)
}

/// The stated class count for `S(E, *)`: 1 for `n = 1`, 2 for `n = 2, 3`, `3⌊n/2⌋` beyond.
pub fn stated_involutive_census(n: usize) -> u64 {
    match n {
        0 => 0,
        1 => 1,
        2 | 3 => 2,
        _ => 3 * (n as u64 / 2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> CosetPattern {
        s.parse().unwrap()
    }

    #[test]
    fn literal_roundtrip() {
        let p = pat("000,110,011,101");
        assert_eq!(p.rank(), 3);
        assert_eq!(p.index(), 4);
        assert_eq!(p.to_string().parse::<CosetPattern>().unwrap(), p);
        assert!(p.contains(0b011));
        assert_eq!(pat("").rank(), 0);
        assert_eq!(pat("").index(), 1);
        assert_eq!("10,01".parse::<CosetPattern>(), Err(Error::MissingZero));
        assert!("00,1".parse::<CosetPattern>().is_err());
        assert!("00,1x".parse::<CosetPattern>().is_err());
    }

    #[test]
    fn from_involution_examples() {
        let h: ElementaryMatrix = "+-/-+".parse().unwrap();
        let p = from_involution(&h, &Involution::main(2).unwrap()).unwrap();
        assert_eq!(p, pat("00,10,01"));
        assert!(p.is_semilattice_in_lambda());
        let z = ElementaryMatrix::trivial(3).unwrap();
        assert_eq!(from_involution(&z, &Involution::main(3).unwrap()).unwrap(), CosetPattern::full(3).unwrap());
        let z2 = ElementaryMatrix::trivial(2).unwrap();
        let p = from_involution(&z2, &"-+".parse().unwrap()).unwrap();
        assert_eq!(p, pat("00,01"));
        assert_eq!(p, lambda_t(2, 1).unwrap());
        assert!(!p.is_semilattice_in_lambda());
    }

    #[test]
    fn index_examples() {
        use InvolutionKind::*;
        assert_eq!(canonical_pattern(Main, 1, 3).unwrap().index(), 6);
        assert_eq!(canonical_pattern(Tau1, 1, 3).unwrap().index(), 4);
        assert_eq!(canonical_pattern(Tau2, 2, 4).unwrap().index(), 6);
        assert_eq!(index_formula(Main, 0, 5).unwrap(), 32);
        assert_eq!(index_formula(Main, 2, 4).unwrap(), 10);
        assert_eq!(index_formula(Tau2, 1, 2).unwrap(), 1);
        assert!(index_formula(Tau2, 0, 2).is_err());
    }

    #[test]
    fn lambda_t_examples() {
        assert_eq!(lambda_t(3, 0).unwrap(), CosetPattern::full(3).unwrap());
        assert_eq!(lambda_t(3, 3).unwrap(), pat("000"));
        assert_eq!(lambda_t(2, 1).unwrap(), pat("00,01"));
        assert!(lambda_t(2, 3).is_err());
        assert_eq!(lambda_t(4, 2).unwrap().twist_number(), 2);
    }

    #[test]
    fn saturation_examples() {
        use InvolutionKind::*;
        for n in 1..=6 {
            for l in Tau1.l_range(n) {
                let p = canonical_pattern(Tau1, l, n).unwrap();
                let s = CosetPattern::from_subspace(&p.saturated_subgroup()).unwrap();
                assert_eq!(s, lambda_t(n, 2 * l + 1).unwrap());
            }
            for l in Main.l_range(n) {
                let p = canonical_pattern(Main, l, n).unwrap();
                assert_eq!(p.saturation_number(), 2 * l);
            }
        }
        assert_eq!(CosetPattern::full(3).unwrap().saturation_number(), 0);
        assert_eq!(canonical_pattern(Tau2, 2, 4).unwrap().saturation_number(), 4);
    }

    #[test]
    fn similarity_examples() {
        use InvolutionKind::*;
        let p = canonical_pattern(Main, 1, 4).unwrap();
        let w = similar(&p, &p).unwrap().unwrap();
        assert!(w.verify(&p, &p));
        let q = canonical_pattern(Tau2, 1, 4).unwrap();
        assert!(similar(&p, &q).unwrap().is_none());

        let m3 = crate::normal_form::all_minus(3).unwrap();
        let a = from_involution(&m3, &Involution::main(3).unwrap()).unwrap();
        let b = canonical_pattern(Tau1, 1, 3).unwrap();
        let w = similar(&a, &b).unwrap().unwrap();
        assert!(w.verify(&a, &b));

        let big = CosetPattern::full(6).unwrap();
        assert!(similar(&big, &big).is_err());
        assert!(similar(&p, &b).is_err());
    }

    #[test]
    fn similarity_agrees_with_canonical_form() {
        let n = 3;
        let patterns: Vec<CosetPattern> = (0..128u64)
            .map(|r| CosetPattern::from_mask(n, r << 1 | 1).unwrap())
            .collect();
        for p in patterns.iter().step_by(5) {
            for q in patterns.iter().step_by(3) {
                let by_search = similar(p, q).unwrap().is_some();
                let by_canon = canonical_form(p).unwrap() == canonical_form(q).unwrap();
                assert_eq!(by_search, by_canon, "{p} vs {q}");
            }
        }
    }

    #[test]
    fn small_censuses() {
        assert_eq!(census_all(1).unwrap().len(), 1);
        assert_eq!(census_involutive(1).unwrap().len(), 1);
        assert_eq!(census_involutive(2).unwrap().len(), 2);
        let total: u64 = census_patterns(2, false).unwrap().iter().map(|c| c.size).sum();
        assert_eq!(total, 8);
    }
}
