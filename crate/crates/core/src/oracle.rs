//! Brute-force reference computations.
//!
//! Nothing here calls the closed forms it is meant to check: involution signs
//! come from reversing monomial products with [`multiply`], ranks from a local
//! elimination, orbits from explicit enumeration of `GL_n(GF(2))`.

use std::collections::HashSet;

use crate::error::{check_dim, check_size, Error, Result};
use crate::gf2::{enumerate_invertible, MAX_ENUM_DIM};
use crate::involution::{canonical_involution, InvolutionKind};
use crate::semilattice::CosetPattern;
use crate::torus::{multiply, pair_count, ElementaryMatrix, Involution, Monomial, QuantumMatrix, SymbolicUnit};

/// Largest `n` for [`brute_index_count`].
pub const MAX_INDEX_ORACLE_DIM: usize = 20;
/// Largest `n` for the orbit oracle.
pub const MAX_ORBIT_ORACLE_DIM: usize = 4;

/// `τ(t^κ)` for `κ ∈ {0,1}^n` (bit `i` of `kappa`), computed as the reversed
/// product `τ(t_n)^{κ_n} ⋯ τ(t_1)^{κ_1}` and renormalized by the multiplication rule.
pub fn involution_by_reversal(q: &QuantumMatrix, tau: &Involution, kappa: u32) -> Result<Monomial> {
    let n = q.dim();
    check_size(n, tau.dim())?;
    let mut acc = Monomial::unit(n);
    for i in (0..n).rev().filter(|&i| kappa >> i & 1 == 1) {
        let image = Monomial::generator(n, i).scale(&SymbolicUnit::sign(n, tau.is_minus(i)))?;
        acc = multiply(q, &acc, &image)?;
    }
    Ok(acc)
}

/// Whether `τ(t^κ) = -t^κ`, by reversal.
fn reversal_flips(q: &QuantumMatrix, tau: &Involution, kappa: u32) -> Result<bool> {
    let m = involution_by_reversal(q, tau, kappa)?;
    if !m.coeff().is_sign() {
        return Err(Error::NoGradedInvolution);
    }
    Ok(m.coeff().is_negative())
}

/// `|{κ ∈ {0,1}^n : τ(t^κ) = +t^κ}|` for the canonical pair of the given kind.
pub fn brute_index_count(kind: InvolutionKind, l: usize, n: usize) -> Result<u64> {
    check_dim(n, 1, MAX_INDEX_ORACLE_DIM)?;
    let (e, tau) = canonical_involution(kind, l, n)?;
    brute_fixed_count(&e, &tau)
}

/// Fixed monomial count of an arbitrary pair, by reversal.
pub fn brute_fixed_count(e: &ElementaryMatrix, tau: &Involution) -> Result<u64> {
    check_dim(e.dim(), 1, MAX_INDEX_ORACLE_DIM)?;
    let q = QuantumMatrix::from_elementary(e);
    let mut count = 0;
    for kappa in 0..(1u32 << e.dim()) {
        if !reversal_flips(&q, tau, kappa)? {
            count += 1;
        }
    }
    Ok(count)
}

/// `t^u t^v = ± t^v t^u`, read off from the two products.
fn anticommute(q: &QuantumMatrix, u: u32, v: u32) -> Result<bool> {
    let n = q.dim();
    let deg = |w: u32| (0..n).map(|i| i64::from(w >> i & 1)).collect::<Vec<_>>();
    let x = Monomial::basis(deg(u));
    let y = Monomial::basis(deg(v));
    let xy = multiply(q, &x, &y)?;
    let yx = multiply(q, &y, &x)?;
    let ratio = xy.coeff().mul(&yx.coeff().inverse()?)?;
    debug_assert!(ratio.is_sign());
    Ok(ratio.is_negative())
}

/// Monomially computed tables for one pair over `{0,1}^n`:
/// `anti[u][v]` commutation signs and `flips[u]` involution signs.
struct PairTables {
    anti: Vec<Vec<bool>>,
    flips: Vec<bool>,
}

impl PairTables {
    fn new(e: &ElementaryMatrix, tau: &Involution) -> Result<Self> {
        let n = e.dim();
        let q = QuantumMatrix::from_elementary(e);
        let size = 1u32 << n;
        let anti = (0..size)
            .map(|u| (0..size).map(|v| anticommute(&q, u, v)).collect())
            .collect::<Result<_>>()?;
        let flips = (0..size).map(|k| reversal_flips(&q, tau, k)).collect::<Result<_>>()?;
        Ok(Self { anti, flips })
    }

    /// The pair seen through new generators with degrees `columns` (mod 2 lifts in `{0,1}^n`).
    fn transported(&self, n: usize, columns: &[u32]) -> (u64, u32) {
        let mut upper = 0u64;
        for i in 0..n {
            for j in i + 1..n {
                if self.anti[columns[i] as usize][columns[j] as usize] {
                    upper |= 1 << crate::torus::pair_index(n, i, j);
                }
            }
        }
        let signs = (0..n).fold(0u32, |acc, i| acc | (u32::from(self.flips[columns[i] as usize]) << i));
        (upper, signs)
    }
}

/// Whether some change of generators carries pair `a` onto pair `b`.
pub fn brute_orbit_equivalent(
    a: (&ElementaryMatrix, &Involution),
    b: (&ElementaryMatrix, &Involution),
) -> Result<bool> {
    let n = a.0.dim();
    check_size(n, b.0.dim())?;
    check_dim(n, 1, MAX_ORBIT_ORACLE_DIM)?;
    let tables = PairTables::new(a.0, a.1)?;
    let target = (upper_index(b.0), b.1.minus_mask());
    for g in enumerate_invertible(n)? {
        if tables.transported(n, &g.columns()) == target {
            return Ok(true);
        }
    }
    Ok(false)
}

fn upper_index(e: &ElementaryMatrix) -> u64 {
    let n = e.dim();
    let mut k = 0u64;
    for i in 0..n {
        for j in i + 1..n {
            if e.get(i, j) {
                k |= 1 << crate::torus::pair_index(n, i, j);
            }
        }
    }
    k
}

/// Orbits of all pairs `(E, τ)` of size `n <= 4` under changes of generators.
///
/// Pairs are numbered `upper_index(E) << n | minus_mask(τ)`; the result maps
/// each pair number to the number of its orbit, orbits numbered in order of
/// their smallest member.
pub fn orbit_partition(n: usize) -> Result<Vec<usize>> {
    check_dim(n, 1, MAX_ORBIT_ORACLE_DIM.min(MAX_ENUM_DIM))?;
    let group: Vec<Vec<u32>> = enumerate_invertible(n)?.map(|g| g.columns()).collect();
    let pairs = 1usize << (pair_count(n) + n);
    let mut orbit = vec![usize::MAX; pairs];
    let mut next = 0;
    for start in 0..pairs {
        if orbit[start] != usize::MAX {
            continue;
        }
        let e = ElementaryMatrix::from_index(n, (start >> n) as u64)?;
        let tau = Involution::new(n, (start & ((1 << n) - 1)) as u32)?;
        let tables = PairTables::new(&e, &tau)?;
        for cols in &group {
            let (upper, signs) = tables.transported(n, cols);
            orbit[(upper as usize) << n | signs as usize] = next;
        }
        next += 1;
    }
    Ok(orbit)
}

/// `rank(E) / 2` by plain Gaussian elimination on a boolean table.
pub fn generic_reduce(e: &ElementaryMatrix) -> Result<usize> {
    let n = e.dim();
    let mut rows: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| e.get(i, j)).collect()).collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..n).find(|&r| rows[r][col]) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] {
                for (x, &v) in row.iter_mut().zip(&pivot) {
                    *x ^= v;
                }
            }
        }
        rank += 1;
    }
    if rank % 2 == 1 {
        return Err(Error::OddRank(rank));
    }
    Ok(rank / 2)
}

/// Lattice points of `S` with max-norm at most `radius`.
pub fn window_points(pattern: &CosetPattern, radius: i64) -> Vec<Vec<i64>> {
    let n = pattern.rank();
    let side = 2 * radius + 1;
    let total = (side as u64).pow(n as u32);
    (0..total)
        .map(|mut k| {
            let mut v = vec![0; n];
            for slot in v.iter_mut() {
                *slot = (k % side as u64) as i64 - radius;
                k /= side as u64;
            }
            v
        })
        .filter(|v| pattern.contains(crate::torus::degree_mod2(v)))
        .collect()
}

/// Checks `0 ∈ S` and `σ - 2σ' ∈ S` on an explicit point set, for every pair
/// whose result stays inside the window of the given radius.
pub fn semilattice_axiom_check(points: &[Vec<i64>], radius: i64) -> bool {
    let set: HashSet<&[i64]> = points.iter().map(Vec::as_slice).collect();
    let Some(n) = points.first().map(Vec::len) else {
        return false;
    };
    if !set.contains(vec![0; n].as_slice()) {
        return false;
    }
    for s in points {
        for t in points {
            let d: Vec<i64> = s.iter().zip(t).map(|(a, b)| a - 2 * b).collect();
            if d.iter().all(|x| x.abs() <= radius) && !set.contains(d.as_slice()) {
                return false;
            }
        }
    }
    true
}
