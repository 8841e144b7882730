//! Graded enveloping algebra with generators `y_j, z_j, h_j` subject to
//! `z_j y_j = y_j z_j - h_j`, `h_j` central and distinct indices commuting,
//! truncated below degree `n <= 3`; and the Tor computation over it.
//!
//! `y_j, z_j` have degree one and `h_j` degree two. Normal-ordered
//! monomials list all `y`, then all `z`, then all `h`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Field, SparseMatrix};
use crate::series::binomial;
use crate::weights::{t_kinds, Context, Symbol, TKind};

/// Largest truncation degree supported.
pub const MAX_TRUNCATION: u32 = 3;

/// A generator: kind `0 = y`, `1 = z`, `2 = h`, and its index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gen {
    pub kind: u8,
    pub j: usize,
}

impl Gen {
    pub fn y(j: usize) -> Self {
        Gen { kind: 0, j }
    }
    pub fn z(j: usize) -> Self {
        Gen { kind: 1, j }
    }
    pub fn h(j: usize) -> Self {
        Gen { kind: 2, j }
    }
}

/// Normal-ordered monomial: exponents `[y_0.., z_0.., h_0..]`.
pub type PbwMonomial = Vec<u32>;

/// Linear combination of normal-ordered monomials.
pub type PbwElement = BTreeMap<PbwMonomial, BigInt>;

pub fn monomial_degree(m: &[u32]) -> u32 {
    let f = m.len() / 3;
    m[..2 * f].iter().sum::<u32>() + 2 * m[2 * f..].iter().sum::<u32>()
}

/// Character offset: `+1` per `y_j`, `-1` per `z_j`.
pub fn monomial_offset(m: &[u32]) -> Vec<i64> {
    let f = m.len() / 3;
    (0..f).map(|j| m[j] as i64 - m[f + j] as i64).collect()
}

fn word_of(m: &[u32]) -> Vec<Gen> {
    let f = m.len() / 3;
    let mut w = Vec::new();
    for kind in 0..3u8 {
        for j in 0..f {
            for _ in 0..m[kind as usize * f + j] {
                w.push(Gen { kind, j });
            }
        }
    }
    w
}

fn monomial_of(f: usize, w: &[Gen]) -> PbwMonomial {
    let mut m = vec![0; 3 * f];
    for g in w {
        m[g.kind as usize * f + g.j] += 1;
    }
    m
}

/// Which out-of-order adjacent pair is rewritten first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteOrder {
    Leftmost,
    Rightmost,
}

/// Normal form of a word in the generators, without truncation.
pub fn normal_form(f: usize, word: &[Gen], order: RewriteOrder) -> PbwElement {
    let mut pending: Vec<(Vec<Gen>, BigInt)> = vec![(word.to_vec(), BigInt::from(1))];
    let mut out = PbwElement::new();
    while let Some((w, c)) = pending.pop() {
        let inversions = (0..w.len().saturating_sub(1)).filter(|&i| w[i] > w[i + 1]);
        let pos = match order {
            RewriteOrder::Leftmost => inversions.min(),
            RewriteOrder::Rightmost => inversions.max(),
        };
        let Some(i) = pos else {
            add_term(&mut out, monomial_of(f, &w), c);
            continue;
        };
        let (a, b) = (w[i], w[i + 1]);
        let mut swapped = w.clone();
        swapped.swap(i, i + 1);
        if a.kind == 1 && b.kind == 0 && a.j == b.j {
            // z_j y_j = y_j z_j - h_j
            let mut reduced = w[..i].to_vec();
            reduced.push(Gen::h(a.j));
            reduced.extend_from_slice(&w[i + 2..]);
            pending.push((reduced, -c.clone()));
        }
        pending.push((swapped, c));
    }
    out
}

fn add_term(e: &mut PbwElement, m: PbwMonomial, c: BigInt) {
    let slot = e.entry(m.clone()).or_insert_with(BigInt::zero);
    *slot += c;
    if slot.is_zero() {
        e.remove(&m);
    }
}

/// The quotient by all monomials of degree at least `n`.
#[derive(Clone, Debug)]
pub struct TruncatedAlgebra {
    f: usize,
    n: u32,
    basis: Vec<PbwMonomial>,
    index: HashMap<PbwMonomial, usize>,
}

impl TruncatedAlgebra {
    pub fn new(f: usize, n: u32) -> Result<Self> {
        if n > MAX_TRUNCATION {
            return Err(Error::SizeLimit(format!(
                "truncation degree {n} exceeds {MAX_TRUNCATION}"
            )));
        }
        if f == 0 {
            return Err(Error::InvalidArgument("f must be positive".into()));
        }
        let mut basis = Vec::new();
        let mut cur = vec![0u32; 3 * f];
        fn rec(pos: usize, budget: u32, cur: &mut Vec<u32>, f: usize, out: &mut Vec<PbwMonomial>) {
            if pos == cur.len() {
                out.push(cur.clone());
                return;
            }
            let w = if pos >= 2 * f { 2 } else { 1 };
            let mut e = 0;
            while e * w <= budget {
                cur[pos] = e;
                rec(pos + 1, budget - e * w, cur, f, out);
                e += 1;
            }
            cur[pos] = 0;
        }
        if n > 0 {
            rec(0, n - 1, &mut cur, f, &mut basis);
        }
        basis.sort_by_key(|m| (monomial_degree(m), std::cmp::Reverse(m.clone())));
        let index = basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Ok(TruncatedAlgebra { f, n, basis, index })
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn basis(&self) -> &[PbwMonomial] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, m: &PbwMonomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn generator(&self, g: Gen) -> PbwElement {
        self.truncate(normal_form(self.f, &[g], RewriteOrder::Leftmost))
    }

    pub fn truncate(&self, mut e: PbwElement) -> PbwElement {
        e.retain(|m, _| monomial_degree(m) < self.n);
        e
    }

    pub fn mul(&self, a: &PbwElement, b: &PbwElement) -> PbwElement {
        let mut out = PbwElement::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                if monomial_degree(ma) + monomial_degree(mb) >= self.n {
                    continue;
                }
                let mut w = word_of(ma);
                w.extend(word_of(mb));
                for (m, c) in normal_form(self.f, &w, RewriteOrder::Leftmost) {
                    add_term(&mut out, m, c * ca * cb);
                }
            }
        }
        self.truncate(out)
    }

    pub fn basis_element(&self, i: usize) -> PbwElement {
        PbwElement::from([(self.basis[i].clone(), BigInt::from(1))])
    }
}

/// Whether coefficients multiply basis elements from the right or the left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Right,
    Left,
}

/// Basis of the middle term of each single-index resolution. `Involuted`
/// applies `(a, b) -> (-a - b, b)` at indices where `t_j = y_j z_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResolutionForm {
    Normalized,
    Involuted,
}

/// Dimensions in the truncated Tor computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrTor {
    pub dim_im_d1: usize,
    pub dim_ker_d1: usize,
    pub dim_im_d2: usize,
    pub tor1: usize,
}

/// `4f^3 + (6 - 4k) f^2 + (2k^2 - 2k + 1) f - k(k-1)(2k-1)/6`.
pub fn gr_formula(f: usize, k: usize) -> BigInt {
    let fb = BigInt::from(f);
    let kb = BigInt::from(k);
    let f2 = &fb * &fb;
    BigInt::from(4) * &f2 * &fb + (BigInt::from(6) - 4 * &kb) * &f2
        + (2 * &kb * &kb - 2 * &kb + 1) * &fb
        - &kb * (&kb - 1) * (2 * &kb - 1) / 6
}

/// Closed forms for `(dim im d1, dim ker d1, dim im d2, tor1)`.
pub fn gr_expected(f: usize, k: usize) -> [BigInt; 4] {
    let fb = BigInt::from(f);
    let kb = BigInt::from(k);
    let ck2 = binomial(k as u64, 2);
    let ck13 = binomial(k as u64 + 1, 3);
    let im1 = 2 * &fb * (&kb + 1) - &ck2;
    let ker1 = 4 * &fb * &fb * &fb + 8 * &fb * &fb - 2 * &kb * &fb + &ck2;
    let im2 = 2 * &fb * &fb * (2 * &kb + 1) - &fb * (2 * &kb * &kb + 1) + 2 * ck13;
    [im1, ker1, im2, gr_formula(f, k)]
}

pub fn tor1_gr(
    ctx: &Context,
    lambda: &[Symbol],
    side: Side,
    form: ResolutionForm,
) -> Result<GrTor> {
    tor1_gr_kinds(&t_kinds(ctx, lambda)?, side, form)
}

/// Dimensions of `A ⊗ G` in homological degree one, where `A` is the
/// algebra truncated below degree 3 and `G` is the tensor product over `j`
/// of the complexes `A -(-h_j, t_j)-> A^2 -(t_j, h_j)-> A`.
pub fn tor1_gr_kinds(kinds: &[TKind], side: Side, form: ResolutionForm) -> Result<GrTor> {
    let f = kinds.len();
    let alg = TruncatedAlgebra::new(f, 3)?;
    let dim = alg.dim();
    let t: Vec<PbwElement> = kinds
        .iter()
        .enumerate()
        .map(|(j, k)| match k {
            TKind::Y => alg.generator(Gen::y(j)),
            TKind::Z => alg.generator(Gen::z(j)),
            TKind::YZ => alg.mul(&alg.generator(Gen::y(j)), &alg.generator(Gen::z(j))),
        })
        .collect();
    let h: Vec<PbwElement> = (0..f).map(|j| alg.generator(Gen::h(j))).collect();
    let neg = |e: &PbwElement| -> PbwElement { e.iter().map(|(m, c)| (m.clone(), -c)).collect() };
    let sub = |a: &PbwElement, b: &PbwElement| -> PbwElement {
        let mut out = a.clone();
        for (m, c) in b {
            add_term(&mut out, m.clone(), -c.clone());
        }
        out
    };
    // d1 coefficients c[j] = [alpha, beta], d2 self-generator g[j]
    let mut c: Vec<[PbwElement; 2]> = Vec::with_capacity(f);
    let mut g: Vec<[PbwElement; 2]> = Vec::with_capacity(f);
    for j in 0..f {
        if form == ResolutionForm::Involuted && kinds[j] == TKind::YZ {
            c.push([neg(&t[j]), sub(&h[j], &t[j])]);
            g.push([sub(&h[j], &t[j]), t[j].clone()]);
        } else {
            c.push([t[j].clone(), h[j].clone()]);
            g.push([neg(&h[j]), t[j].clone()]);
        }
    }
    let act = |x: usize, coef: &PbwElement| -> PbwElement {
        let xb = alg.basis_element(x);
        match side {
            Side::Right => alg.mul(&xb, coef),
            Side::Left => alg.mul(coef, &xb),
        }
    };
    let entries = |e: &PbwElement, base: usize, sign: i64, row: &mut Vec<(usize, i64)>| {
        for (m, coef) in e {
            let idx = alg.index_of(m).expect("truncated monomial");
            let v = coef.to_i64().expect("small coefficient") * sign;
            row.push((base + idx, v));
        }
    };
    let col = |j: usize, a: usize| (2 * j + a) * dim;

    let mut d1 = SparseMatrix::new(dim);
    for cj in &c {
        for coef in cj {
            for x in 0..dim {
                let mut row = Vec::new();
                entries(&act(x, coef), 0, 1, &mut row);
                d1.push_row(row);
            }
        }
    }
    let g1 = 2 * f * dim;
    let mut d2 = SparseMatrix::new(g1);
    for x in 0..dim {
        for j in 0..f {
            let mut row = Vec::new();
            for a in 0..2 {
                entries(&act(x, &g[j][a]), col(j, a), 1, &mut row);
            }
            d2.push_row(row);
        }
        for i in 0..f {
            for j in i + 1..f {
                for a in 0..2 {
                    for b in 0..2 {
                        let mut row = Vec::new();
                        entries(&act(x, &c[i][a]), col(j, b), 1, &mut row);
                        entries(&act(x, &c[j][b]), col(i, a), -1, &mut row);
                        d2.push_row(row);
                    }
                }
            }
        }
    }
    let im1 = d1.rank(Field::Rational);
    let ker1 = g1 - im1;
    let im2 = d2.rank(Field::Rational);
    Ok(GrTor {
        dim_im_d1: im1,
        dim_ker_d1: ker1,
        dim_im_d2: im2,
        tor1: ker1 - im2,
    })
}
