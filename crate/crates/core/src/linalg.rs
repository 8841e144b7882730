//! Exact rank of sparse integer matrices.
//!
//! Rows are split into independent blocks by the columns they touch. Over the
//! rationals each block is first reduced sparsely on entries equal to `±1`,
//! which keeps every entry an integer, and whatever remains is reduced by
//! fraction-free (Bareiss) elimination with pivots taken as the first nonzero
//! entry in row-major order. Elimination runs in `i128` and restarts with
//! `BigInt` entries if an intermediate value overflows.

use num_bigint::BigInt;
use num_traits::Zero;

/// Coefficient field for rank computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Rational,
    Prime(u64),
}

/// Row-sparse integer matrix.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    ncols: usize,
    rows: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// Appends a row; repeated columns are summed.
    pub fn push_row(&mut self, mut entries: Vec<(usize, i64)>) {
        entries.sort_unstable_by_key(|e| e.0);
        let mut merged: Vec<(usize, i64)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            assert!(c < self.ncols, "column {c} out of range {}", self.ncols);
            match merged.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|e| e.1 != 0);
        self.rows.push(merged);
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = SparseMatrix::new(ncols);
        for r in rows {
            m.push_row(r.iter().copied().enumerate().filter(|e| e.1 != 0).collect());
        }
        m
    }

    pub fn rank(&self, field: Field) -> usize {
        self.blocks()
            .into_iter()
            .map(|block| match field {
                Field::Rational => rank_rational(block),
                Field::Prime(p) => rank_mod_p(block, p),
            })
            .sum()
    }

    /// Dense blocks whose ranks add up to the rank of the matrix.
    fn blocks(&self) -> Vec<Vec<Vec<i64>>> {
        let mut parent: Vec<usize> = (0..self.ncols).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for row in &self.rows {
            if let Some(&(c0, _)) = row.first() {
                for &(c, _) in &row[1..] {
                    let a = find(&mut parent, c0);
                    let b = find(&mut parent, c);
                    if a != b {
                        parent[b] = a;
                    }
                }
            }
        }
        let mut block_of_root: Vec<Option<usize>> = vec![None; self.ncols];
        let mut local_col: Vec<usize> = vec![0; self.ncols];
        let mut widths: Vec<usize> = Vec::new();
        for c in 0..self.ncols {
            let r = find(&mut parent, c);
            let b = *block_of_root[r].get_or_insert_with(|| {
                widths.push(0);
                widths.len() - 1
            });
            local_col[c] = widths[b];
            widths[b] += 1;
        }
        let mut blocks: Vec<Vec<Vec<i64>>> = vec![Vec::new(); widths.len()];
        for row in &self.rows {
            if let Some(&(c0, _)) = row.first() {
                let b = block_of_root[find(&mut parent, c0)].expect("assigned");
                let mut dense = vec![0i64; widths[b]];
                for &(c, v) in row {
                    dense[local_col[c]] = v;
                }
                blocks[b].push(dense);
            }
        }
        blocks.retain(|b| !b.is_empty());
        blocks
    }
}

fn rank_rational(block: Vec<Vec<i64>>) -> usize {
    if let Some(r) = unit_pivot_rank(&block) {
        return r;
    }
    dense_rank_rational(
        block
            .iter()
            .map(|r| r.iter().map(|&v| v as i128).collect())
            .collect(),
    )
}

fn dense_rank_rational(small: Vec<Vec<i128>>) -> usize {
    let big: Vec<Vec<BigInt>> = small
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    match bareiss_i128(small) {
        Some(r) => r,
        None => bareiss_big(big),
    }
}

/// Sparse elimination on `±1` pivots, then dense elimination of the rest.
/// Returns `None` if an entry overflows `i128`.
fn unit_pivot_rank(block: &[Vec<i64>]) -> Option<usize> {
    let ncols = block.first().map_or(0, |r| r.len());
    let mut rows: Vec<Option<Vec<(usize, i128)>>> = block
        .iter()
        .map(|r| {
            let sparse: Vec<(usize, i128)> = r
                .iter()
                .enumerate()
                .filter(|e| *e.1 != 0)
                .map(|(c, &v)| (c, v as i128))
                .collect();
            (!sparse.is_empty()).then_some(sparse)
        })
        .collect();
    let mut col_rows: Vec<std::collections::BTreeSet<usize>> =
        vec![Default::default(); ncols];
    for (i, r) in rows.iter().enumerate() {
        for &(c, _) in r.iter().flatten() {
            col_rows[c].insert(i);
        }
    }
    let mut rank = 0;
    loop {
        // sparsest row with a unit entry, then its sparsest unit column
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, r) in rows.iter().enumerate() {
            let Some(r) = r else { continue };
            if best.is_some_and(|b| r.len() >= b.0) {
                continue;
            }
            let col = r
                .iter()
                .filter(|e| e.1 == 1 || e.1 == -1)
                .min_by_key(|e| col_rows[e.0].len())
                .map(|e| e.0);
            if let Some(c) = col {
                best = Some((r.len(), i, c));
            }
        }
        let Some((_, pi, pc)) = best else { break };
        let pivot = rows[pi].take().expect("alive pivot row");
        for &(c, _) in &pivot {
            col_rows[c].remove(&pi);
        }
        let pv = pivot.iter().find(|e| e.0 == pc).expect("pivot entry").1;
        let targets: Vec<usize> = col_rows[pc].iter().copied().collect();
        for ti in targets {
            let row = rows[ti].take().expect("alive target row");
            let a = row.iter().find(|e| e.0 == pc).expect("target entry").1;
            // row - (a / pv) * pivot, exact because pv = ±1
            let factor = a.checked_mul(pv)?;
            let mut merged = Vec::with_capacity(row.len() + pivot.len());
            let (mut x, mut y) = (0, 0);
            while x < row.len() || y < pivot.len() {
                let take_row = y == pivot.len() || (x < row.len() && row[x].0 < pivot[y].0);
                let take_piv = x == row.len() || (y < pivot.len() && pivot[y].0 < row[x].0);
                let (c, v) = if take_row {
                    x += 1;
                    row[x - 1]
                } else if take_piv {
                    y += 1;
                    (pivot[y - 1].0, factor.checked_mul(pivot[y - 1].1)?.checked_neg()?)
                } else {
                    let v = row[x].1.checked_sub(factor.checked_mul(pivot[y].1)?)?;
                    x += 1;
                    y += 1;
                    (row[x - 1].0, v)
                };
                if v != 0 {
                    merged.push((c, v));
                }
            }
            for &(c, _) in &row {
                col_rows[c].remove(&ti);
            }
            for &(c, _) in &merged {
                col_rows[c].insert(ti);
            }
            if !merged.is_empty() {
                rows[ti] = Some(merged);
            }
        }
        rank += 1;
    }
    let rest: Vec<Vec<(usize, i128)>> = rows.into_iter().flatten().collect();
    if rest.is_empty() {
        return Some(rank);
    }
    let used: std::collections::BTreeSet<usize> =
        rest.iter().flat_map(|r| r.iter().map(|e| e.0)).collect();
    let local: std::collections::HashMap<usize, usize> =
        used.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let dense: Vec<Vec<i128>> = rest
        .iter()
        .map(|r| {
            let mut d = vec![0i128; used.len()];
            for &(c, v) in r {
                d[local[&c]] = v;
            }
            d
        })
        .collect();
    Some(rank + dense_rank_rational(dense))
}

fn first_pivot<T: PartialEq>(rows: &[Vec<T>], zero: &T) -> Option<(usize, usize)> {
    rows.iter()
        .enumerate()
        .find_map(|(r, row)| row.iter().position(|v| v != zero).map(|c| (r, c)))
}

fn bareiss_i128(mut rows: Vec<Vec<i128>>) -> Option<usize> {
    let mut prev: i128 = 1;
    let mut rank = 0;
    rows.retain(|r| r.iter().any(|&v| v != 0));
    while let Some((r, c)) = first_pivot(&rows, &0) {
        let pivot_row = rows.remove(r);
        let piv = pivot_row[c];
        for row in rows.iter_mut() {
            let a = row[c];
            for k in 0..row.len() {
                let lhs = piv.checked_mul(row[k])?;
                let rhs = a.checked_mul(pivot_row[k])?;
                row[k] = lhs.checked_sub(rhs)? / prev;
            }
        }
        rows.retain(|r| r.iter().any(|&v| v != 0));
        prev = piv;
        rank += 1;
    }
    Some(rank)
}

fn bareiss_big(mut rows: Vec<Vec<BigInt>>) -> usize {
    let zero = BigInt::zero();
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    rows.retain(|r| r.iter().any(|v| !v.is_zero()));
    while let Some((r, c)) = first_pivot(&rows, &zero) {
        let pivot_row = rows.remove(r);
        let piv = pivot_row[c].clone();
        for row in rows.iter_mut() {
            let a = row[c].clone();
            for k in 0..row.len() {
                let v = (&piv * &row[k] - &a * &pivot_row[k]) / &prev;
                row[k] = v;
            }
        }
        rows.retain(|r| r.iter().any(|v| !v.is_zero()));
        prev = piv;
        rank += 1;
    }
    rank
}

fn rank_mod_p(block: Vec<Vec<i64>>, p: u64) -> usize {
    let red = |v: i64| -> u64 { (v as i128).rem_euclid(p as i128) as u64 };
    let mut rows: Vec<Vec<u64>> = block
        .iter()
        .map(|r| r.iter().map(|&v| red(v)).collect())
        .collect();
    let inv = |a: u64| -> u64 { pow_mod(a, p - 2, p) };
    let mut rank = 0;
    rows.retain(|r| r.iter().any(|&v| v != 0));
    while let Some((r, c)) = first_pivot(&rows, &0) {
        let pivot_row = rows.remove(r);
        let pinv = inv(pivot_row[c]);
        for row in rows.iter_mut() {
            let a = row[c];
            if a == 0 {
                continue;
            }
            let factor = (a as u128 * pinv as u128 % p as u128) as u64;
            for k in 0..row.len() {
                let sub = (factor as u128 * pivot_row[k] as u128 % p as u128) as u64;
                row[k] = (row[k] + p - sub) % p;
            }
        }
        rows.retain(|r| r.iter().any(|&v| v != 0));
        rank += 1;
    }
    rank
}

fn pow_mod(a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let m = p as u128;
    let mut base = a as u128 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_ranks() {
        let m = SparseMatrix::from_dense(&[vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(m.rank(Field::Rational), 2);
        let m = SparseMatrix::from_dense(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(m.rank(Field::Rational), 2);
        assert_eq!(m.rank(Field::Prime(2)), 0);
        assert_eq!(m.rank(Field::Prime(3)), 2);
        assert_eq!(SparseMatrix::new(4).rank(Field::Rational), 0);
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = 1i64 << 40;
        let rows: Vec<Vec<i64>> = (0..6)
            .map(|i| (0..6).map(|j| if i == j { big } else { (i * 7 + j) as i64 }).collect())
            .collect();
        let m = SparseMatrix::from_dense(&rows);
        assert_eq!(m.rank(Field::Rational), 6);
    }

    /// Rank by elimination over the rationals using exact fractions
    /// represented as (numerator, denominator) BigInt pairs.
    fn rank_by_fractions(rows: &[Vec<i64>]) -> usize {
        let mut m: Vec<Vec<(BigInt, BigInt)>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| (BigInt::from(v), BigInt::from(1))).collect())
            .collect();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..ncols {
            let Some(p) = (rank..m.len()).find(|&r| !m[r][c].0.is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let (pn, pd) = m[rank][c].clone();
            for r in 0..m.len() {
                if r == rank || m[r][c].0.is_zero() {
                    continue;
                }
                let (an, ad) = m[r][c].clone();
                // factor = a / piv
                let fnum = &an * &pd;
                let fden = &ad * &pn;
                for k in 0..ncols {
                    let (bn, bd) = m[rank][k].clone();
                    let (xn, xd) = m[r][k].clone();
                    // x - factor * b
                    let tn = &fnum * &bn;
                    let td = &fden * &bd;
                    let nn = &xn * &td - &tn * &xd;
                    let nd = &xd * &td;
                    let g = num_integer::Integer::gcd(&nn, &nd);
                    m[r][k] = if nn.is_zero() {
                        (BigInt::zero(), BigInt::from(1))
                    } else {
                        (nn / &g, nd / &g)
                    };
                }
            }
            rank += 1;
        }
        rank
    }

    proptest! {
        #[test]
        fn bareiss_matches_fraction_elimination(
            rows in prop::collection::vec(prop::collection::vec(-3i64..4, 5), 0..7)
        ) {
            let m = SparseMatrix::from_dense(&rows);
            prop_assert_eq!(m.rank(Field::Rational), rank_by_fractions(&rows));
        }

        #[test]
        fn prime_rank_bounded_by_rational(
            rows in prop::collection::vec(prop::collection::vec(-3i64..4, 4), 0..6)
        ) {
            let m = SparseMatrix::from_dense(&rows);
            prop_assert!(m.rank(Field::Prime(5)) <= m.rank(Field::Rational));
            prop_assert_eq!(m.rank(Field::Prime(1_000_003)), m.rank(Field::Rational));
        }
    }
}
