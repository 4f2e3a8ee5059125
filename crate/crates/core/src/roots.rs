//! Extended affine root systems of type `C_r` built from a lattice `Λ = Z^n`
//! and a semilattice `S`:
//! `R(Λ, S) = Λ ⊔ (Δ_sh + Λ) ⊔ (Δ_lg + S)`.

use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::involution::InvolutionKind;
use crate::semilattice::{
    canonical_form, canonical_pattern, census_patterns, lambda_t, similar, CosetPattern,
    MAX_CENSUS_ALL_DIM, MAX_SIMILARITY_DIM,
};

/// Largest nullity for which the class list can be built.
pub const MAX_NULLITY: usize = 20;

/// The finite root system of type `C_r` in `Z^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteRootSystemC {
    r: usize,
    short: Vec<Vec<i64>>,
    long: Vec<Vec<i64>>,
}

impl FiniteRootSystemC {
    /// Short roots `±e_i ± e_j` (`i < j`), long roots `±2 e_i`.
    pub fn new(r: usize) -> Result<Self> {
        if r < 3 {
            return Err(Error::InvalidParameters(format!("type C_r needs r >= 3, got r = {r}")));
        }
        let mut short = Vec::with_capacity(2 * r * (r - 1));
        let mut long = Vec::with_capacity(2 * r);
        for i in 0..r {
            for s in [1, -1] {
                let mut v = vec![0; r];
                v[i] = 2 * s;
                long.push(v);
            }
            for j in i + 1..r {
                for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    let mut v = vec![0; r];
                    v[i] = a;
                    v[j] = b;
                    short.push(v);
                }
            }
        }
        short.sort_unstable();
        long.sort_unstable();
        Ok(Self { r, short, long })
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn short_roots(&self) -> &[Vec<i64>] {
        &self.short
    }

    pub fn long_roots(&self) -> &[Vec<i64>] {
        &self.long
    }
}

/// The data `(r, n, S)` of a root system `R(Λ, S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EarsSpec {
    pub finite: FiniteRootSystemC,
    pub pattern: CosetPattern,
}

impl EarsSpec {
    pub fn new(r: usize, pattern: CosetPattern) -> Result<Self> {
        Ok(Self {
            finite: FiniteRootSystemC::new(r)?,
            pattern,
        })
    }

    /// The nullity, i.e. the rank of `Λ`.
    pub fn nullity(&self) -> usize {
        self.pattern.rank()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stratum {
    Iso,
    Short,
    Long,
}

/// A root `(finite part, Λ part)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Root {
    pub stratum: Stratum,
    pub finite: Vec<i64>,
    pub lambda: Vec<i64>,
}

/// All vectors of `Z^n` with max-norm at most `bound`, in lexicographic order.
fn box_points(n: usize, bound: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (2 * bound + 1) as u64;
    let total = side.pow(n as u32);
    (0..total).map(move |mut k| {
        let mut v = vec![0; n];
        for slot in v.iter_mut().rev() {
            *slot = (k % side) as i64 - bound;
            k /= side;
        }
        v
    })
}

/// Roots of `R(Λ, S)` whose `Λ` part has max-norm at most `bound`: the
/// isotropic stratum first, then the short stratum, then the long one.
pub fn generate_roots(spec: &EarsSpec, bound: u32) -> impl Iterator<Item = Root> + '_ {
    let n = spec.nullity();
    let b = i64::from(bound);
    let zero = vec![0; spec.finite.rank()];
    let iso = box_points(n, b).map(move |lambda| Root {
        stratum: Stratum::Iso,
        finite: zero.clone(),
        lambda,
    });
    let short = spec.finite.short.iter().flat_map(move |mu| {
        box_points(n, b).map(move |lambda| Root {
            stratum: Stratum::Short,
            finite: mu.clone(),
            lambda,
        })
    });
    let long = spec.finite.long.iter().flat_map(move |mu| {
        box_points(n, b)
            .filter(|lambda| spec.pattern.contains(crate::torus::degree_mod2(lambda)))
            .map(move |lambda| Root {
                stratum: Stratum::Long,
                finite: mu.clone(),
                lambda,
            })
    });
    iso.chain(short).chain(long)
}

/// Per-stratum root counts in the box, computed without listing the roots.
pub fn count_roots(spec: &EarsSpec, bound: u32) -> (u64, u64, u64) {
    let n = spec.nullity();
    let side = 2 * u64::from(bound) + 1;
    let lattice = side.pow(n as u32);
    let in_pattern = box_points(n, i64::from(bound))
        .filter(|l| spec.pattern.contains(crate::torus::degree_mod2(l)))
        .count() as u64;
    (
        lattice,
        spec.finite.short.len() as u64 * lattice,
        spec.finite.long.len() as u64 * in_pattern,
    )
}

/// `t` with `[Λ : <S>] = 2^t`.
pub fn twist_number(p: &CosetPattern) -> usize {
    p.twist_number()
}

/// Where a member of the class list comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "source")]
pub enum ClassSource {
    /// `S(h_{l,n}, τ)` for a canonical involution.
    Involution { kind: InvolutionKind, l: usize },
    /// `Λ^(3)`, present only for `r = 3`.
    Lambda3,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EalaClass {
    #[serde(flatten)]
    pub source: ClassSource,
    pub index: u64,
    pub saturation: usize,
    pub twist: usize,
    #[serde(serialize_with = "crate::normal_form::serialize_display")]
    pub pattern: CosetPattern,
}

/// The semilattices of root systems of extended affine Lie algebras of type
/// `C_r` with nullity `n`: `S(h_{l,n}, *)`, `S(h_{l,n}, τ₁)`, `S(h_{l,n}, τ₂)`
/// over their admissible `l`, plus `Λ^(3)` when `r = 3` and `n >= 3`.
pub fn eala_class_list(n: usize, r: usize) -> Result<Vec<EalaClass>> {
    check_dim(n, 1, MAX_NULLITY)?;
    FiniteRootSystemC::new(r)?;
    let mut out = Vec::new();
    for kind in InvolutionKind::ALL {
        for l in kind.l_range(n) {
            let pattern = canonical_pattern(kind, l, n)?;
            let (index, saturation, twist) = pattern.invariants();
            out.push(EalaClass {
                source: ClassSource::Involution { kind, l },
                index,
                saturation,
                twist,
                pattern,
            });
        }
    }
    if r == 3 && n >= 3 {
        let pattern = lambda_t(n, 3)?;
        let (index, saturation, twist) = pattern.invariants();
        out.push(EalaClass {
            source: ClassSource::Lambda3,
            index,
            saturation,
            twist,
            pattern,
        });
    }
    Ok(out)
}

/// Whether the members of a list are pairwise non-similar: by exhaustive
/// search for `n <= 5`, by the invariants `(index, saturation, twist)` beyond.
pub fn pairwise_non_similar(list: &[CosetPattern]) -> Result<bool> {
    for (i, p) in list.iter().enumerate() {
        for q in &list[i + 1..] {
            let distinct = if p.rank() <= MAX_SIMILARITY_DIM {
                similar(p, q)?.is_none()
            } else {
                p.invariants() != q.invariants()
            };
            if !distinct {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Number of isomorphism classes of root systems of extended affine Lie
/// algebras of type `C_r`, nullity `n`: the size of [`eala_class_list`] after
/// certifying that its members are pairwise non-similar.
pub fn count_eala_classes(n: usize, r: usize) -> Result<usize> {
    let list = eala_class_list(n, r)?;
    let patterns: Vec<CosetPattern> = list.into_iter().map(|c| c.pattern).collect();
    if !pairwise_non_similar(&patterns)? {
        return Err(Error::InvalidParameters(format!(
            "class list for n = {n}, r = {r} contains similar members"
        )));
    }
    Ok(patterns.len())
}

/// The stated class-count table: for `r >= 4`, `3⌊n/2⌋+2` (`n >= 4`), 4, 4, 2
/// for `n = 3, 2, 1`; for `r = 3`, `3⌊n/2⌋+3` (`n >= 4`), 5, 4, 2.
pub fn stated_eala_count(n: usize, r: usize) -> u64 {
    let half = n as u64 / 2;
    match (n, r == 3) {
        (0, _) => 0,
        (1, _) => 2,
        (2, _) => 4,
        (3, false) => 4,
        (3, true) => 5,
        (_, false) => 3 * half + 2,
        (_, true) => 3 * half + 3,
    }
}

/// Comparison of all root-system classes with twist `t` against those of
/// extended affine Lie algebras (`r = 3` list, which contains the `r >= 4` one).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassSetComparison {
    pub n: usize,
    pub t: usize,
    /// `|R_t|`, when the exhaustive census is feasible.
    pub all_classes: Option<usize>,
    /// `|LR_t|`.
    pub lie_classes: usize,
    pub lie_sources: Vec<ClassSource>,
    /// Whether every class of `LR_t` occurs in `R_t`.
    pub subset: Option<bool>,
    /// Whether `LR_t` misses some class of `R_t`.
    pub proper: Option<bool>,
    pub verdict: String,
}

/// Compares `LR_t` with `R_t` for nullity `n`; `R_t` is exhaustive for `n <= 4`.
pub fn compare_class_sets(n: usize, t: usize) -> Result<ClassSetComparison> {
    check_dim(n, 1, MAX_NULLITY)?;
    let lie: Vec<EalaClass> = if t > 3 {
        Vec::new()
    } else {
        eala_class_list(n, 3)?
            .into_iter()
            .filter(|c| c.twist == t)
            .collect()
    };
    let lie_sources = lie.iter().map(|c| c.source).collect();
    if n > MAX_CENSUS_ALL_DIM {
        let verdict = if t > 3 {
            "LR_t is empty for t > 3".to_string()
        } else {
            format!(
                "R_t not enumerated for n = {n}: the census covers 2^{} patterns; \
                 strictness for n >= 5 is not checked",
                (1u64 << n) - 1
            )
        };
        return Ok(ClassSetComparison {
            n,
            t,
            all_classes: None,
            lie_classes: lie.len(),
            lie_sources,
            subset: None,
            proper: None,
            verdict,
        });
    }
    let all: Vec<CosetPattern> = census_patterns(n, false)?
        .into_iter()
        .filter(|c| c.twist == t)
        .map(|c| c.representative)
        .collect();
    let subset = lie
        .iter()
        .map(|c| canonical_form(&c.pattern))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(|canon| all.contains(canon));
    let proper = subset && lie.len() < all.len();
    let verdict = match (t > 3, subset, proper) {
        (true, _, true) => "LR_t is empty for t > 3; R_t is not".to_string(),
        (true, _, false) => "LR_t and R_t are both empty".to_string(),
        (false, false, _) => "LR_t is not contained in R_t".to_string(),
        (false, true, true) => "LR_t is a proper subset of R_t".to_string(),
        (false, true, false) => "LR_t equals R_t".to_string(),
    };
    Ok(ClassSetComparison {
        n,
        t,
        all_classes: Some(all.len()),
        lie_classes: lie.len(),
        lie_sources,
        subset: Some(subset),
        proper: Some(proper),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_counts() {
        let c3 = FiniteRootSystemC::new(3).unwrap();
        assert_eq!((c3.short_roots().len(), c3.long_roots().len()), (12, 6));
        assert!(c3.short_roots().contains(&vec![1, -1, 0]));
        assert!(c3.long_roots().contains(&vec![2, 0, 0]));
        let c4 = FiniteRootSystemC::new(4).unwrap();
        assert_eq!((c4.short_roots().len(), c4.long_roots().len()), (24, 8));
        assert!(FiniteRootSystemC::new(2).is_err());
    }

    #[test]
    fn root_counts() {
        let full = EarsSpec::new(3, "0,1".parse().unwrap()).unwrap();
        assert_eq!(generate_roots(&full, 0).count(), 19);
        assert_eq!(generate_roots(&full, 1).count(), 57);
        let two = EarsSpec::new(3, "0".parse().unwrap()).unwrap();
        assert_eq!(generate_roots(&two, 1).count(), 45);
        let finite = EarsSpec::new(4, "".parse().unwrap()).unwrap();
        assert_eq!(generate_roots(&finite, 0).count(), 33);
        assert_eq!(count_roots(&two, 1), (3, 36, 6));
    }

    #[test]
    fn twist_examples() {
        assert_eq!(twist_number(&lambda_t(4, 1).unwrap()), 1);
        assert_eq!(twist_number(&lambda_t(4, 2).unwrap()), 2);
        assert_eq!(twist_number(&lambda_t(4, 3).unwrap()), 3);
    }

    #[test]
    fn lists_are_pairwise_non_similar() {
        for n in 1..=5 {
            for r in [3, 4] {
                let list = eala_class_list(n, r).unwrap();
                assert_eq!(count_eala_classes(n, r).unwrap(), list.len());
            }
        }
    }

    #[test]
    fn comparison_small() {
        let c = compare_class_sets(3, 3).unwrap();
        assert_eq!(c.lie_classes, 1);
        assert_eq!(c.lie_sources, vec![ClassSource::Lambda3]);
        assert_eq!(c.subset, Some(true));
        let c = compare_class_sets(4, 4).unwrap();
        assert_eq!(c.lie_classes, 0);
        let c = compare_class_sets(6, 1).unwrap();
        assert_eq!(c.all_classes, None);
    }
}
