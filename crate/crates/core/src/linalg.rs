//! Sparse integer matrices with rank and Smith normal form computations.
//!
//! Elimination runs in two phases. A sparse phase repeatedly pivots on unit
//! entries (±1 over ℤ, any nonzero over F_p) chosen to limit fill-in; each
//! step is a Schur complement by a unit, so it changes neither the rank nor
//! the nontrivial invariant factors. Whatever is left is then handled by a
//! dense exact routine.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::LinalgError;

/// Default cap on the number of stored nonzeros.
pub const DEFAULT_MAX_ENTRIES: usize = 20_000_000;
/// Default cap on the size (rows × columns) of the dense remainder.
pub const DEFAULT_MAX_DENSE: usize = 4_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_entries: usize,
    pub max_dense: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_entries: DEFAULT_MAX_ENTRIES, max_dense: DEFAULT_MAX_DENSE }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Rationals,
    /// A prime below 2³¹.
    Prime(u64),
}

impl Field {
    pub const GF2: Field = Field::Prime(2);
}

/// Row-major sparse matrix; each row is sorted by column with no zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    ncols: usize,
    rows: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix { ncols, rows: Vec::new() }
    }

    /// Add a row given as (column, value) pairs. Repeated columns are summed.
    pub fn push_row(&mut self, entries: impl IntoIterator<Item = (usize, i64)>) {
        let mut row: Vec<(u32, i64)> = entries.into_iter().map(|(c, v)| {
            assert!(c < self.ncols, "column {c} out of range");
            (c as u32, v)
        }).collect();
        row.sort_unstable_by_key(|e| e.0);
        let mut out: Vec<(u32, i64)> = Vec::with_capacity(row.len());
        for (c, v) in row {
            match out.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => out.push((c, v)),
            }
        }
        out.retain(|e| e.1 != 0);
        self.rows.push(out);
    }

    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, i64)]) -> Self {
        let mut by_row: Vec<Vec<(usize, i64)>> = vec![Vec::new(); nrows];
        for &(r, c, v) in triplets {
            by_row[r].push((c, v));
        }
        let mut m = SparseMatrix::new(ncols);
        for row in by_row {
            m.push_row(row);
        }
        m
    }

    /// (row, column, value) for every stored nonzero.
    pub fn triplets(&self) -> Vec<(usize, usize, i64)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c as usize, v)))
            .collect()
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(u32, i64)] {
        &self.rows[r]
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        self.rows
            .iter()
            .map(|row| {
                let mut d = vec![0; self.ncols];
                for &(c, v) in row {
                    d[c as usize] = v;
                }
                d
            })
            .collect()
    }
}

/// Outcome of the sparse phase.
struct Reduced {
    pivots: usize,
    /// Remaining nonzero rows, columns compressed.
    rest: Vec<Vec<(u32, i64)>>,
    rest_cols: usize,
}

#[derive(Clone, Copy)]
enum Ring {
    Z,
    Fp(i64),
}

impl Ring {
    fn is_unit(self, v: i64) -> bool {
        match self {
            Ring::Z => v == 1 || v == -1,
            Ring::Fp(_) => v != 0,
        }
    }

    fn normalize(self, v: i64) -> i64 {
        match self {
            Ring::Z => v,
            Ring::Fp(p) => v.rem_euclid(p),
        }
    }

    fn inverse(self, v: i64) -> i64 {
        match self {
            Ring::Z => v,
            Ring::Fp(p) => pow_mod(v, p - 2, p),
        }
    }

    /// a - f*b
    fn sub_mul(self, a: i64, f: i64, b: i64) -> Result<i64, LinalgError> {
        match self {
            Ring::Z => f
                .checked_mul(b)
                .and_then(|x| a.checked_sub(x))
                .ok_or(LinalgError::Overflow),
            Ring::Fp(p) => Ok((a as i128 - (f as i128) * (b as i128)).rem_euclid(p as i128) as i64),
        }
    }
}

fn pow_mod(mut b: i64, mut e: i64, p: i64) -> i64 {
    let mut r: i64 = 1;
    b = b.rem_euclid(p);
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as i128 * b as i128) % p as i128) as i64;
        }
        b = ((b as i128 * b as i128) % p as i128) as i64;
        e >>= 1;
    }
    r
}

fn check_entries(m: &SparseMatrix, limits: Limits) -> Result<(), LinalgError> {
    let nnz = m.nnz();
    if nnz > limits.max_entries {
        return Err(LinalgError::ResourceLimit { entries: nnz, cap: limits.max_entries });
    }
    Ok(())
}

/// Pivot on unit entries until none are left. Rows are taken shortest
/// first; within a row the unit whose column is sparsest wins.
fn sparse_phase(m: &SparseMatrix, ring: Ring, limits: Limits) -> Result<Reduced, LinalgError> {
    let ncols = m.ncols;
    let mut rows: Vec<Vec<(u32, i64)>> = m
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|&(c, v)| (c, ring.normalize(v)))
                .filter(|e| e.1 != 0)
                .collect()
        })
        .collect();
    let mut active = vec![true; rows.len()];
    let mut col_count = vec![0usize; ncols];
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    let mut nnz = 0usize;
    for (r, row) in rows.iter().enumerate() {
        for &(c, _) in row {
            col_count[c as usize] += 1;
            col_rows[c as usize].push(r as u32);
        }
        nnz += row.len();
    }
    let mut heap: BinaryHeap<Reverse<(usize, u32)>> =
        rows.iter().enumerate().map(|(r, row)| Reverse((row.len(), r as u32))).collect();
    let mut pivots = 0;
    let mut scratch: Vec<(u32, i64)> = Vec::new();

    while let Some(Reverse((len, r))) = heap.pop() {
        let r = r as usize;
        if !active[r] || rows[r].len() != len {
            continue;
        }
        if len == 0 {
            active[r] = false;
            continue;
        }
        let Some(&(pc, pv)) = rows[r]
            .iter()
            .filter(|e| ring.is_unit(e.1))
            .min_by_key(|e| col_count[e.0 as usize])
        else {
            // parked until an update gives it a unit
            continue;
        };
        let inv = ring.inverse(pv);
        let pivot_row = std::mem::take(&mut rows[r]);
        active[r] = false;
        for &(c, _) in &pivot_row {
            col_count[c as usize] -= 1;
        }
        nnz -= pivot_row.len();
        let targets = std::mem::take(&mut col_rows[pc as usize]);
        for s in targets {
            let s = s as usize;
            if !active[s] {
                continue;
            }
            let Ok(idx) = rows[s].binary_search_by_key(&pc, |e| e.0) else { continue };
            let factor = match ring {
                Ring::Z => rows[s][idx].1 * inv,
                Ring::Fp(p) => ((rows[s][idx].1 as i128 * inv as i128) % p as i128) as i64,
            };
            // rows[s] -= factor * pivot_row, merged
            scratch.clear();
            let old = std::mem::take(&mut rows[s]);
            let (mut i, mut j) = (0, 0);
            while i < old.len() || j < pivot_row.len() {
                let take_old = j >= pivot_row.len() || (i < old.len() && old[i].0 < pivot_row[j].0);
                let take_piv = i >= old.len() || (j < pivot_row.len() && pivot_row[j].0 < old[i].0);
                if take_old {
                    scratch.push(old[i]);
                    i += 1;
                } else if take_piv {
                    let (c, v) = pivot_row[j];
                    let nv = ring.sub_mul(0, factor, v)?;
                    scratch.push((c, nv));
                    col_count[c as usize] += 1;
                    col_rows[c as usize].push(s as u32);
                    j += 1;
                } else {
                    let (c, a) = old[i];
                    let nv = ring.sub_mul(a, factor, pivot_row[j].1)?;
                    if nv == 0 {
                        col_count[c as usize] -= 1;
                    } else {
                        scratch.push((c, nv));
                    }
                    i += 1;
                    j += 1;
                }
            }
            nnz = nnz + scratch.len() - old.len();
            if nnz > limits.max_entries {
                return Err(LinalgError::ResourceLimit { entries: nnz, cap: limits.max_entries });
            }
            rows[s] = scratch.clone();
            heap.push(Reverse((rows[s].len(), s as u32)));
        }
        pivots += 1;
    }

    let mut col_map = vec![u32::MAX; ncols];
    let mut rest_cols = 0u32;
    let mut rest = Vec::new();
    for (r, row) in rows.into_iter().enumerate() {
        if !active[r] || row.is_empty() {
            continue;
        }
        let mapped = row
            .into_iter()
            .map(|(c, v)| {
                if col_map[c as usize] == u32::MAX {
                    col_map[c as usize] = rest_cols;
                    rest_cols += 1;
                }
                (col_map[c as usize], v)
            })
            .collect::<Vec<_>>();
        rest.push(mapped);
    }
    let mut rest_sorted = rest;
    for row in &mut rest_sorted {
        row.sort_unstable_by_key(|e| e.0);
    }
    Ok(Reduced { pivots, rest: rest_sorted, rest_cols: rest_cols as usize })
}

fn check_dense(red: &Reduced, limits: Limits) -> Result<(), LinalgError> {
    let size = red.rest.len().saturating_mul(red.rest_cols);
    if size > limits.max_dense {
        return Err(LinalgError::ResourceLimit { entries: size, cap: limits.max_dense });
    }
    Ok(())
}

pub fn rank(m: &SparseMatrix, field: Field) -> Result<usize, LinalgError> {
    rank_with_limits(m, field, Limits::default())
}

pub fn rank_with_limits(m: &SparseMatrix, field: Field, limits: Limits) -> Result<usize, LinalgError> {
    check_entries(m, limits)?;
    match field {
        Field::Rationals => {
            let red = sparse_phase(m, Ring::Z, limits)?;
            check_dense(&red, limits)?;
            let dense = densify(&red, BigInt::from);
            Ok(red.pivots + dense::bareiss_rank(dense))
        }
        Field::Prime(2) => {
            let red = sparse_phase(m, Ring::Fp(2), limits)?;
            check_dense(&red, limits)?;
            let words = red.rest_cols.div_ceil(64);
            let bits = red
                .rest
                .iter()
                .map(|row| {
                    let mut b = vec![0u64; words];
                    for &(c, _) in row {
                        b[c as usize / 64] |= 1 << (c % 64);
                    }
                    b
                })
                .collect();
            Ok(red.pivots + dense::gf2_rank(bits))
        }
        Field::Prime(p) => {
            assert!(p < (1 << 31), "prime too large");
            let red = sparse_phase(m, Ring::Fp(p as i64), limits)?;
            check_dense(&red, limits)?;
            let dense = densify(&red, |v| v as u64);
            Ok(red.pivots + dense::rank_mod_p(dense, p))
        }
    }
}

fn densify<T: Clone + Zero>(red: &Reduced, f: impl Fn(i64) -> T) -> Vec<Vec<T>> {
    red.rest
        .iter()
        .map(|row| {
            let mut d = vec![T::zero(); red.rest_cols];
            for &(c, v) in row {
                d[c as usize] = f(v);
            }
            d
        })
        .collect()
}

/// Diagonal of the Smith normal form over ℤ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Number of invariant factors equal to 1.
    pub ones: usize,
    /// Invariant factors greater than 1, in divisibility order.
    pub torsion: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.ones + self.torsion.len()
    }

    /// Number of invariant factors divisible by `p`.
    pub fn divisible_by(&self, p: u64) -> usize {
        let p = BigInt::from(p);
        self.torsion.iter().filter(|d| (*d % &p).is_zero()).count()
    }
}

pub fn smith_normal_form(m: &SparseMatrix) -> Result<SmithForm, LinalgError> {
    smith_normal_form_with_limits(m, Limits::default())
}

pub fn smith_normal_form_with_limits(m: &SparseMatrix, limits: Limits) -> Result<SmithForm, LinalgError> {
    check_entries(m, limits)?;
    let red = sparse_phase(m, Ring::Z, limits)?;
    check_dense(&red, limits)?;
    let diag = dense::smith_diagonal(densify(&red, BigInt::from));
    let ones = red.pivots + diag.iter().filter(|d| d.is_one()).count();
    let torsion = diag.into_iter().filter(|d| !d.is_one()).collect();
    Ok(SmithForm { ones, torsion })
}

/// Dense exact routines.
pub mod dense {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_rational::BigRational;
    use num_traits::{One, Signed, Zero};

    /// Rank over ℚ by fraction-free (Bareiss) elimination.
    pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
        let nrows = a.len();
        let ncols = a.first().map_or(0, Vec::len);
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..ncols {
            if r == nrows {
                break;
            }
            let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, p);
            for i in r + 1..nrows {
                for j in c + 1..ncols {
                    let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                    a[i][j] = v;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[r][c].clone();
            r += 1;
        }
        r
    }

    pub fn rank_mod_p(mut a: Vec<Vec<u64>>, p: u64) -> usize {
        let nrows = a.len();
        let ncols = a.first().map_or(0, Vec::len);
        let mul = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
        let inv = |x: u64| {
            let (mut b, mut e, mut r) = (x, p - 2, 1u64);
            while e > 0 {
                if e & 1 == 1 {
                    r = mul(r, b);
                }
                b = mul(b, b);
                e >>= 1;
            }
            r
        };
        let mut r = 0;
        for c in 0..ncols {
            if r == nrows {
                break;
            }
            let Some(piv) = (r..nrows).find(|&i| !a[i][c].is_multiple_of(p)) else { continue };
            a.swap(r, piv);
            let iv = inv(a[r][c] % p);
            for j in c..ncols {
                a[r][j] = mul(a[r][j], iv);
            }
            for i in r + 1..nrows {
                let f = a[i][c] % p;
                if f == 0 {
                    continue;
                }
                for j in c..ncols {
                    a[i][j] = (a[i][j] % p + p - mul(f, a[r][j])) % p;
                }
            }
            r += 1;
        }
        r
    }

    /// Rank over GF(2) of bit-packed rows.
    pub fn gf2_rank(mut rows: Vec<Vec<u64>>) -> usize {
        let words = rows.first().map_or(0, Vec::len);
        let mut r = 0;
        for w in 0..words {
            for bit in 0..64 {
                let mask = 1u64 << bit;
                let Some(p) = (r..rows.len()).find(|&i| rows[i][w] & mask != 0) else { continue };
                rows.swap(r, p);
                let (head, tail) = rows.split_at_mut(r + 1);
                let pivot = &head[r];
                for row in tail.iter_mut() {
                    if row[w] & mask != 0 {
                        for k in w..words {
                            row[k] ^= pivot[k];
                        }
                    }
                }
                r += 1;
            }
        }
        r
    }

    /// Nonzero diagonal entries of the Smith normal form, each dividing the next.
    pub fn smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
        let m = a.len();
        let n = a.first().map_or(0, Vec::len);
        let mut diag = Vec::new();
        let mut t = 0;
        while t < m.min(n) {
            // smallest nonzero entry in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                        if a[i][j].abs().is_one() {
                            break;
                        }
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let mut done = true;
            // clear column t
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..n {
                    let v = &a[i][j] - &q * &a[t][j];
                    a[i][j] = v;
                }
                if !a[i][t].is_zero() {
                    done = false;
                }
            }
            // clear row t
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for i in t..m {
                    let v = &a[i][j] - &q * &a[i][t];
                    a[i][j] = v;
                }
                if !a[t][j].is_zero() {
                    done = false;
                }
            }
            if !done {
                continue;
            }
            // divisibility: fold an offending row into row t and retry
            let piv = a[t][t].clone();
            if let Some(i) = (t + 1..m).find(|&i| a[i][t + 1..].iter().any(|x| !(x % &piv).is_zero())) {
                for j in t..n {
                    let v = &a[t][j] + &a[i][j];
                    a[t][j] = v;
                }
                continue;
            }
            diag.push(piv.abs());
            t += 1;
        }
        diag
    }

    #[derive(Clone, Debug, PartialEq, Eq)]
    pub enum Solution {
        Unique(Vec<BigRational>),
        /// 0-based index of an equation that cannot be satisfied.
        Inconsistent { row: usize },
        Underdetermined { rank: usize },
    }

    /// Solve `a · x = b` by Gauss–Jordan elimination over ℚ.
    pub fn solve_rational(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Solution {
        let m = a.len();
        let n = a.first().map_or(0, Vec::len);
        let mut origin: Vec<usize> = (0..m).collect();
        let mut r = 0;
        let mut pivot_cols = Vec::new();
        for c in 0..n {
            let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, p);
            b.swap(r, p);
            origin.swap(r, p);
            let inv = a[r][c].recip();
            for j in c..n {
                a[r][j] = &a[r][j] * &inv;
            }
            b[r] = &b[r] * &inv;
            for i in 0..m {
                if i == r || a[i][c].is_zero() {
                    continue;
                }
                let f = a[i][c].clone();
                for j in c..n {
                    let v = &a[i][j] - &f * &a[r][j];
                    a[i][j] = v;
                }
                let v = &b[i] - &f * &b[r];
                b[i] = v;
            }
            pivot_cols.push(c);
            r += 1;
            if r == m {
                break;
            }
        }
        if let Some(i) = (r..m).find(|&i| !b[i].is_zero()) {
            return Solution::Inconsistent { row: origin[i] };
        }
        if r < n {
            return Solution::Underdetermined { rank: r };
        }
        Solution::Unique(b.into_iter().take(n).collect())
    }
}
