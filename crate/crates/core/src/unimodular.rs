//! Integer basis changes of `Z^n` with a replayable log of column operations.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_size, Error, Result};
use crate::gf2::Gf2Matrix;

/// An elementary column operation. Indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum ColumnOp {
    /// Exchange columns `i` and `j`.
    Swap { i: usize, j: usize },
    /// Column `to` += column `from`.
    Add { from: usize, to: usize },
    /// Column `i` := -column `i`.
    Negate { i: usize },
}

impl ColumnOp {
    fn check(&self, n: usize) -> Result<()> {
        let ok = match *self {
            ColumnOp::Swap { i, j } => i < n && j < n,
            ColumnOp::Add { from, to } => from < n && to < n && from != to,
            ColumnOp::Negate { i } => i < n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameters(format!(
                "column operation {self} invalid for dimension {n}"
            )))
        }
    }

    /// Operations that undo `self` when applied in order.
    fn inverse(self) -> Vec<ColumnOp> {
        match self {
            ColumnOp::Add { from, to } => vec![
                ColumnOp::Negate { i: from },
                ColumnOp::Add { from, to },
                ColumnOp::Negate { i: from },
            ],
            other => vec![other],
        }
    }
}

impl fmt::Display for ColumnOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ColumnOp::Swap { i, j } => write!(f, "swap({}, {})", i + 1, j + 1),
            ColumnOp::Add { from, to } => write!(f, "add({} -> {})", from + 1, to + 1),
            ColumnOp::Negate { i } => write!(f, "negate({})", i + 1),
        }
    }
}

/// A square integer matrix of determinant `±1` together with the column
/// operations that build it from the identity.
///
/// Column `j` is the degree of the `j`-th new generator in old coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntUnimodularMatrix {
    n: usize,
    /// Row-major entries.
    entries: Vec<i64>,
    log: Vec<ColumnOp>,
}

impl IntUnimodularMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Self {
            n,
            entries,
            log: Vec::new(),
        }
    }

    /// Replays `ops` starting from the identity.
    pub fn from_ops(n: usize, ops: &[ColumnOp]) -> Result<Self> {
        let mut m = Self::identity(n);
        for &op in ops {
            m.apply(op)?;
        }
        Ok(m)
    }

    /// The permutation matrix whose column `i` is `e_{sigma(i)}`.
    pub fn permutation(sigma: &[usize]) -> Result<Self> {
        let n = sigma.len();
        let mut seen = vec![false; n];
        for &s in sigma {
            if s >= n || std::mem::replace(&mut seen[s], true) {
                return Err(Error::InvalidParameters(format!(
                    "{sigma:?} is not a permutation"
                )));
            }
        }
        // selection sort on a working copy, recording swaps
        let mut current: Vec<usize> = (0..n).collect();
        let mut m = Self::identity(n);
        for i in 0..n {
            if current[i] != sigma[i] {
                let j = (i + 1..n)
                    .find(|&j| current[j] == sigma[i])
                    .expect("target value lies to the right");
                current.swap(i, j);
                m.apply(ColumnOp::Swap { i, j })?;
            }
        }
        Ok(m)
    }

    /// Builds the matrix with the given columns, recovering an operation log
    /// by integer column reduction.
    pub fn from_columns(columns: &[Vec<i64>]) -> Result<Self> {
        let n = columns.len();
        for c in columns {
            check_size(n, c.len())?;
        }
        // work[j] is column j; reduce to the identity, recording ops
        let mut work: Vec<Vec<i64>> = columns.to_vec();
        let mut ops: Vec<ColumnOp> = Vec::new();
        let mut act = |work: &mut Vec<Vec<i64>>, op: ColumnOp| -> Result<()> {
            apply_to_columns(work, op)?;
            ops.push(op);
            Ok(())
        };
        for row in 0..n {
            // Euclid on row `row` across columns row..n
            loop {
                let nonzero: Vec<usize> = (row..n).filter(|&j| work[j][row] != 0).collect();
                if nonzero.is_empty() {
                    return Err(Error::NotUnimodular);
                }
                let &piv = nonzero
                    .iter()
                    .min_by_key(|&&j| (work[j][row].unsigned_abs(), j))
                    .expect("nonempty");
                if nonzero.len() == 1 {
                    if piv != row {
                        act(&mut work, ColumnOp::Swap { i: piv, j: row })?;
                    }
                    break;
                }
                for &j in nonzero.iter().filter(|&&j| j != piv) {
                    subtract_multiple(&mut work, &mut act, piv, j, row)?;
                }
            }
            match work[row][row] {
                1 => {}
                -1 => act(&mut work, ColumnOp::Negate { i: row })?,
                _ => return Err(Error::NotUnimodular),
            }
            for j in 0..row {
                subtract_multiple(&mut work, &mut act, row, j, row)?;
            }
        }
        let log: Vec<ColumnOp> = ops.into_iter().rev().flat_map(ColumnOp::inverse).collect();
        let m = Self::from_ops(n, &log)?;
        debug_assert!((0..n).all(|j| m.column(j) == columns[j]));
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn ops(&self) -> &[ColumnOp] {
        &self.log
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.n).map(|j| self.column(j)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n.max(1)).take(self.n).map(<[i64]>::to_vec).collect()
    }

    /// Packed mod-2 reduction of column `j`.
    pub fn column_mod2(&self, j: usize) -> u32 {
        (0..self.n).fold(0, |acc, i| acc | (((self.get(i, j) & 1) as u32) << i))
    }

    pub fn to_gf2(&self) -> Gf2Matrix {
        Gf2Matrix::from_fn(self.n, self.n, |i, j| self.get(i, j) & 1 == 1)
            .expect("dimension already validated")
    }

    /// Applies one column operation, i.e. right-multiplies by its elementary matrix.
    pub fn apply(&mut self, op: ColumnOp) -> Result<()> {
        op.check(self.n)?;
        let n = self.n;
        match op {
            ColumnOp::Swap { i, j } => {
                for r in 0..n {
                    self.entries.swap(r * n + i, r * n + j);
                }
            }
            ColumnOp::Add { from, to } => {
                for r in 0..n {
                    let v = self.entries[r * n + to]
                        .checked_add(self.entries[r * n + from])
                        .ok_or(Error::Overflow)?;
                    self.entries[r * n + to] = v;
                }
            }
            ColumnOp::Negate { i } => {
                for r in 0..n {
                    let v = self.entries[r * n + i].checked_neg().ok_or(Error::Overflow)?;
                    self.entries[r * n + i] = v;
                }
            }
        }
        self.log.push(op);
        Ok(())
    }

    /// `self * other`; the log is the concatenation of both logs.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_size(self.n, other.n)?;
        let mut out = self.clone();
        for &op in &other.log {
            out.apply(op)?;
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Result<Self> {
        let ops: Vec<ColumnOp> = self.log.iter().rev().flat_map(|&op| op.inverse()).collect();
        Self::from_ops(self.n, &ops)
    }

    /// `M v` for an integer vector.
    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>> {
        check_size(self.n, v.len())?;
        (0..self.n)
            .map(|i| {
                (0..self.n).try_fold(0i64, |acc, j| {
                    self.get(i, j)
                        .checked_mul(v[j])
                        .and_then(|p| acc.checked_add(p))
                        .ok_or(Error::Overflow)
                })
            })
            .collect()
    }

    /// Exact determinant by fraction-free elimination.
    pub fn determinant(&self) -> Result<i64> {
        integer_determinant(&self.rows())
    }

    /// Whether the stored entries have determinant `±1` and the log replays to them.
    pub fn is_consistent(&self) -> bool {
        matches!(self.determinant(), Ok(1) | Ok(-1))
            && Self::from_ops(self.n, &self.log).is_ok_and(|m| m.entries == self.entries)
    }
}

fn apply_to_columns(work: &mut [Vec<i64>], op: ColumnOp) -> Result<()> {
    match op {
        ColumnOp::Swap { i, j } => work.swap(i, j),
        ColumnOp::Add { from, to } => {
            let source = work[from].clone();
            for (x, &v) in work[to].iter_mut().zip(&source) {
                *x = x.checked_add(v).ok_or(Error::Overflow)?;
            }
        }
        ColumnOp::Negate { i } => {
            for x in work[i].iter_mut() {
                *x = x.checked_neg().ok_or(Error::Overflow)?;
            }
        }
    }
    Ok(())
}

/// Makes `work[target][row]` the remainder of division by `work[pivot][row]`
/// using repeated additions of `±column pivot`.
fn subtract_multiple(
    work: &mut Vec<Vec<i64>>,
    act: &mut impl FnMut(&mut Vec<Vec<i64>>, ColumnOp) -> Result<()>,
    pivot: usize,
    target: usize,
    row: usize,
) -> Result<()> {
    let p = work[pivot][row];
    let q = work[target][row].div_euclid(p);
    if q == 0 {
        return Ok(());
    }
    // adding -q copies of the pivot column; negate the pivot when q > 0
    let flip = q > 0;
    if flip {
        act(work, ColumnOp::Negate { i: pivot })?;
    }
    for _ in 0..q.unsigned_abs() {
        act(work, ColumnOp::Add { from: pivot, to: target })?;
    }
    if flip {
        act(work, ColumnOp::Negate { i: pivot })?;
    }
    Ok(())
}

/// Serialized as `{"rows": [[...]], "ops": [...]}`.
impl Serialize for IntUnimodularMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("IntUnimodularMatrix", 2)?;
        st.serialize_field("rows", &self.rows())?;
        st.serialize_field("ops", &self.log)?;
        st.end()
    }
}

/// Determinant of a square integer matrix (Bareiss elimination in `i128`).
pub fn integer_determinant(rows: &[Vec<i64>]) -> Result<i64> {
    let n = rows.len();
    if n == 0 {
        return Ok(1);
    }
    for r in rows {
        check_size(n, r.len())?;
    }
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| i128::from(x)).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j]
                    .checked_mul(a[k][k])
                    .zip(a[i][k].checked_mul(a[k][j]))
                    .and_then(|(x, y)| x.checked_sub(y))
                    .ok_or(Error::Overflow)?;
                a[i][j] = num / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    i64::try_from(sign * a[n - 1][n - 1]).map_err(|_| Error::Overflow)
}

impl fmt::Debug for IntUnimodularMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntUnimodularMatrix")
            .field("rows", &self.rows())
            .field("ops", &self.log.len())
            .finish()
    }
}
