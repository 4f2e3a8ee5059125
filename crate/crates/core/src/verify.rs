//! Oracle comparison suites behind `qtorus verify`.
//!
//! Each suite checks closed forms and fast algorithms against [`crate::oracle`]
//! and lists every disagreement. Sweeps run on the rayon pool; results are
//! collected in enumeration order so reports are deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{check_dim, Error, Result};
use crate::involution::{canonical_involution, classify, verify_class, InvolutionKind};
use crate::normal_form::{reduce, verify_witness};
use crate::oracle::{
    brute_index_count, generic_reduce, orbit_partition, MAX_INDEX_ORACLE_DIM, MAX_ORBIT_ORACLE_DIM,
};
use crate::semilattice::{
    canonical_form, census_all, census_all_lower_bound, census_involutive, from_involution,
    index_formula, similar, stated_involutive_census, MAX_CENSUS_ALL_DIM, MAX_SIMILARITY_DIM,
};
use crate::torus::{pair_count, ElementaryMatrix, Involution};

/// Seed for the randomized part of the reduce suite.
pub const DEFAULT_SEED: u64 = 0x5EED_2024;
/// Number of random matrices checked by the reduce suite.
pub const RANDOM_REDUCE_SAMPLES: usize = 10_000;
/// Largest `n` for random matrices in the reduce suite.
pub const MAX_REDUCE_DIM: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Index,
    Classify,
    Reduce,
    Census,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Self::Index, Self::Classify, Self::Reduce, Self::Census];

    pub fn max_dim(self) -> usize {
        match self {
            Self::Index => MAX_INDEX_ORACLE_DIM,
            Self::Classify => MAX_ORBIT_ORACLE_DIM,
            Self::Reduce => MAX_REDUCE_DIM,
            Self::Census => MAX_SIMILARITY_DIM,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Index => "index",
            Self::Classify => "classify",
            Self::Reduce => "reduce",
            Self::Census => "census",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|suite| suite.to_string() == s)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub input: String,
    pub expected: String,
    pub got: String,
}

impl Discrepancy {
    fn new(input: impl Into<String>, expected: impl fmt::Display, got: impl fmt::Display) -> Self {
        Self {
            input: input.into(),
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub max_n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checked: u64,
    pub discrepancies: Vec<Discrepancy>,
    pub notes: Vec<String>,
}

impl Report {
    fn new(suite: Suite, max_n: usize) -> Self {
        Self {
            suite,
            max_n,
            seed: None,
            checked: 0,
            discrepancies: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// Runs one suite for `1 <= n <= max_n`.
pub fn run(suite: Suite, max_n: usize) -> Result<Report> {
    check_dim(max_n, 1, suite.max_dim())?;
    match suite {
        Suite::Index => verify_index(max_n),
        Suite::Classify => verify_classify(max_n),
        Suite::Reduce => verify_reduce(max_n, DEFAULT_SEED),
        Suite::Census => verify_census(max_n),
    }
}

fn index_grid(max_n: usize) -> Vec<(InvolutionKind, usize, usize)> {
    (1..=max_n)
        .flat_map(|n| {
            InvolutionKind::ALL
                .into_iter()
                .flat_map(move |k| k.l_range(n).map(move |l| (k, l, n)))
        })
        .collect()
}

/// Closed-form index and the canonical pattern's index against monomial enumeration.
pub fn verify_index(max_n: usize) -> Result<Report> {
    check_dim(max_n, 1, MAX_INDEX_ORACLE_DIM)?;
    let grid = index_grid(max_n);
    let rows: Vec<Vec<Discrepancy>> = grid
        .par_iter()
        .map(|&(kind, l, n)| -> Result<Vec<Discrepancy>> {
            let brute = brute_index_count(kind, l, n)?;
            let formula = index_formula(kind, l, n)?;
            let (e, tau) = canonical_involution(kind, l, n)?;
            let pattern = from_involution(&e, &tau)?.index();
            let input = format!("index({kind}, l={l}, n={n})");
            let mut out = Vec::new();
            if formula != brute {
                out.push(Discrepancy::new(input.clone(), brute, formula));
            }
            if pattern != brute {
                out.push(Discrepancy::new(format!("pattern {input}"), brute, pattern));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut report = Report::new(Suite::Index, max_n);
    report.checked = grid.len() as u64;
    report.discrepancies = rows.into_iter().flatten().collect();
    Ok(report)
}

/// `classify` against the explicit orbit partition of all pairs.
pub fn verify_classify(max_n: usize) -> Result<Report> {
    check_dim(max_n, 1, MAX_ORBIT_ORACLE_DIM)?;
    let mut report = Report::new(Suite::Classify, max_n);
    for n in 1..=max_n {
        let orbits = orbit_partition(n)?;
        let labels: Vec<(usize, InvolutionKind, bool)> = (0..orbits.len())
            .into_par_iter()
            .map(|k| {
                let (e, tau) = pair_from_number(n, k)?;
                let c = classify(&e, &tau)?;
                Ok((c.l, c.kind, verify_class(&e, &tau, &c)))
            })
            .collect::<Result<_>>()?;
        report.checked += orbits.len() as u64;

        let mut label_of_orbit: BTreeMap<usize, (usize, InvolutionKind)> = BTreeMap::new();
        let mut orbit_of_label: BTreeMap<(usize, InvolutionKind), usize> = BTreeMap::new();
        for (k, (&orbit, &(l, kind, certified))) in orbits.iter().zip(&labels).enumerate() {
            let input = || pair_label(n, k);
            if !certified {
                report.discrepancies.push(Discrepancy::new(input(), "verified witness", "witness rejected"));
            }
            let label = *label_of_orbit.entry(orbit).or_insert((l, kind));
            if label != (l, kind) {
                report.discrepancies.push(Discrepancy::new(
                    input(),
                    format!("{} l={} (orbit {orbit})", label.1, label.0),
                    format!("{kind} l={l}"),
                ));
            }
            let owner = *orbit_of_label.entry((l, kind)).or_insert(orbit);
            if owner != orbit {
                report.discrepancies.push(Discrepancy::new(
                    input(),
                    format!("orbit {owner} for {kind} l={l}"),
                    format!("orbit {orbit}"),
                ));
            }
            let is_main = k & ((1 << n) - 1) == 0;
            let excluded = (kind == InvolutionKind::Tau1 && l == 0) || (kind == InvolutionKind::Tau2 && l < 2);
            if is_main && excluded {
                report
                    .discrepancies
                    .push(Discrepancy::new(input(), "main involution outside excluded classes", format!("{kind} l={l}")));
            }
        }
        let expected: usize = InvolutionKind::ALL.iter().map(|k| k.l_range(n).count()).sum();
        let found = label_of_orbit.len();
        if found != expected {
            report
                .discrepancies
                .push(Discrepancy::new(format!("orbit count n={n}"), expected, found));
        }
        report.notes.push(format!("n={n}: {found} orbits over {} pairs", orbits.len()));
    }
    Ok(report)
}

/// Decodes a pair number as used by [`orbit_partition`].
pub fn pair_from_number(n: usize, k: usize) -> Result<(ElementaryMatrix, Involution)> {
    let e = ElementaryMatrix::from_index(n, (k >> n) as u64)?;
    let tau = Involution::new(n, (k & ((1 << n) - 1)) as u32)?;
    Ok((e, tau))
}

fn pair_label(n: usize, k: usize) -> String {
    match pair_from_number(n, k) {
        Ok((e, tau)) => format!("({e}, {tau})"),
        Err(err) => err.to_string(),
    }
}

/// A uniformly random elementary matrix of size `n`.
pub fn random_elementary(rng: &mut impl Rng, n: usize) -> Result<ElementaryMatrix> {
    let bits: Vec<bool> = (0..pair_count(n)).map(|_| rng.gen()).collect();
    ElementaryMatrix::from_upper(n, |i, j| bits[crate::torus::pair_index(n, i, j)])
}

/// `reduce` against plain elimination: every matrix with `n <= 5`, then
/// random matrices with `6 <= n <= max_n`.
pub fn verify_reduce(max_n: usize, seed: u64) -> Result<Report> {
    check_dim(max_n, 1, MAX_REDUCE_DIM)?;
    let mut matrices = Vec::new();
    for n in 1..=max_n.min(5) {
        matrices.extend(ElementaryMatrix::all(n)?);
    }
    let mut report = Report::new(Suite::Reduce, max_n);
    if max_n >= 6 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..RANDOM_REDUCE_SAMPLES {
            let n = rng.gen_range(6..=max_n);
            matrices.push(random_elementary(&mut rng, n)?);
        }
        report.seed = Some(seed);
    }
    let rows: Vec<Option<Discrepancy>> = matrices
        .par_iter()
        .map(|e| -> Result<Option<Discrepancy>> {
            let r = reduce(e)?;
            let expected = generic_reduce(e)?;
            Ok(if !verify_witness(e, &r) {
                Some(Discrepancy::new(e.to_string(), "verified witness", "witness rejected"))
            } else if r.l != expected {
                Some(Discrepancy::new(e.to_string(), expected, r.l))
            } else {
                None
            })
        })
        .collect::<Result<_>>()?;
    report.checked = matrices.len() as u64;
    report.discrepancies = rows.into_iter().flatten().collect();
    Ok(report)
}

/// Class counts of `S(E, *)` against the stated piecewise formula, with
/// pairwise non-similarity re-certified and, for `n <= 4`, the count
/// recomputed from canonical forms.
pub fn verify_census(max_n: usize) -> Result<Report> {
    check_dim(max_n, 1, MAX_SIMILARITY_DIM)?;
    let mut report = Report::new(Suite::Census, max_n);
    for n in 1..=max_n {
        let classes = census_involutive(n)?;
        let stated = stated_involutive_census(n);
        report.checked += 1;
        if classes.len() as u64 != stated {
            report.discrepancies.push(Discrepancy::new(
                format!("involutive census n={n}"),
                stated,
                classes.len(),
            ));
        }
        for (i, a) in classes.iter().enumerate() {
            for b in &classes[i + 1..] {
                report.checked += 1;
                if similar(&a.representative, &b.representative)?.is_some() {
                    report.discrepancies.push(Discrepancy::new(
                        format!("classes {} and {} at n={n}", a.representative, b.representative),
                        "not similar",
                        "similar",
                    ));
                }
            }
        }
        if n <= MAX_CENSUS_ALL_DIM {
            let star = Involution::main(n)?;
            let mut forms = std::collections::BTreeSet::new();
            for e in ElementaryMatrix::all(n)? {
                forms.insert(canonical_form(&from_involution(&e, &star)?)?);
            }
            report.checked += 1;
            if forms.len() != classes.len() {
                report.discrepancies.push(Discrepancy::new(
                    format!("canonical-form recount n={n}"),
                    forms.len(),
                    classes.len(),
                ));
            }
            let all = census_all(n)?.len() as u64;
            let bound = census_all_lower_bound(n);
            report.checked += 1;
            if all < bound {
                report
                    .discrepancies
                    .push(Discrepancy::new(format!("all-pattern census n={n}"), format!(">= {bound}"), all));
            }
            report.notes.push(format!("n={n}: all-pattern census {all} (bound {bound})"));
        }
        report
            .notes
            .push(format!("n={n}: involutive census {} (stated {stated})", classes.len()));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        assert!(verify_index(6).unwrap().passed());
        assert!(verify_classify(3).unwrap().passed());
        assert!(verify_reduce(4, DEFAULT_SEED).unwrap().passed());
        assert!(verify_census(2).unwrap().passed());
    }

    #[test]
    fn suite_names_roundtrip() {
        for s in Suite::ALL {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
        assert!(run(Suite::Classify, 5).is_err());
    }

    #[test]
    fn random_sampling_is_reproducible() {
        let a = verify_reduce(7, 3).unwrap();
        let b = verify_reduce(7, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.seed, Some(3));
        assert_eq!(a.checked, 1 + 2 + 8 + 64 + 1024 + RANDOM_REDUCE_SAMPLES as u64);
    }
}
