//! Numerical predictions assembled from profiles and their ideals: Hilbert
//! series, graded subquotients, invariant and socle index sets, lattice
//! filtrations, the semisimple comparison and character counts.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideals::{
    a_lambda, bigraded_quotient, degree, ideal_of_kinds, offset, p_monomial, MonomialIdeal,
};
use crate::pbw::{gr_formula, monomial_degree, monomial_offset, TruncatedAlgebra};
use crate::series::{binomial, BigradedSeries, CharOffset, IntPoly, RationalSeries};
use crate::weights::{
    bits, enumerate, is_member, j_lambda, stats, submasks, t_kinds, weight_subsets, Case,
    Context, Profile, Symbol, TKind, Which,
};

/// Closed form and enumeration of the same generating function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertComparison {
    pub closed: RationalSeries,
    pub enumerated: RationalSeries,
    pub agree: bool,
}

fn comparison(closed: RationalSeries, enumerated: RationalSeries) -> HilbertComparison {
    let agree = closed == enumerated;
    HilbertComparison {
        closed,
        enumerated: enumerated.reduced(),
        agree,
    }
}

/// Numerator of the closed-form Hilbert series over `(1 - t)^f`.
pub fn hilbert_pi_closed(ctx: &Context) -> RationalSeries {
    let f = ctx.f as u32;
    let three_t = IntPoly::linear(3, 1);
    let one_minus = IntPoly::linear(1, -1);
    let num = match ctx.case {
        Case::Irreducible => &three_t.pow(f) - &one_minus.pow(f),
        Case::Split => &three_t.pow(f) + &one_minus.pow(f),
        Case::Nonsplit => {
            let d = ctx.d() as u32;
            let two = BigInt::from(2).pow(f - d);
            (&IntPoly::linear(1, 1).pow(f - d) * &three_t.pow(d)).scale(&two)
        }
    };
    RationalSeries::new(num, f)
}

/// Hilbert series of the graded object, by closed form and by summing
/// Hilbert series of the ideals over the profile set.
///
/// The irreducible case is summed over the counting model, with weight
/// `2^{f-s} * 2 C(f, s)` on `(1 + t)^s` for odd `s`.
pub fn hilbert_pi(ctx: &Context) -> Result<HilbertComparison> {
    let closed = hilbert_pi_closed(ctx);
    let enumerated = match ctx.case {
        Case::Irreducible => {
            let f = ctx.f as u64;
            let mut num = IntPoly::zero();
            for s in (1..=f).step_by(2) {
                let w = BigInt::from(2).pow((f - s) as u32) * 2 * binomial(f, s);
                num = &num + &IntPoly::linear(1, 1).pow(s as u32).scale(&w);
            }
            RationalSeries::new(num, ctx.f as u32)
        }
        _ => {
            let mut acc = RationalSeries::zero();
            for lam in enumerate(ctx, Which::P)? {
                acc = &acc + &a_lambda(ctx, &lam)?.hilbert()?;
            }
            acc
        }
    };
    Ok(comparison(closed, enumerated))
}

/// Closed form `2 sum_s C(f, 2s) C(f - 2s, i - s) (1 + t)^{2s} / (1 - t)^f`.
pub fn hilbert_ni_closed(f: usize, i: usize) -> RationalSeries {
    let mut num = IntPoly::zero();
    for s in 0..=f / 2 {
        if i < s || i - s > f - 2 * s {
            continue;
        }
        let w = 2 * binomial(f as u64, 2 * s as u64) * binomial((f - 2 * s) as u64, (i - s) as u64);
        num = &num + &IntPoly::linear(1, 1).pow(2 * s as u32).scale(&w);
    }
    RationalSeries::new(num, f as u32)
}

/// Hilbert series of the summand indexed by `|J_lambda| = i` in the split
/// case.
pub fn hilbert_ni(ctx: &Context, i: usize) -> Result<HilbertComparison> {
    if ctx.case != Case::Split {
        return Err(Error::UnsupportedCase(
            "the graded pieces N_i are defined for the split case".into(),
        ));
    }
    if i > ctx.f {
        return Err(Error::InvalidWindow(format!("i = {i} exceeds f = {}", ctx.f)));
    }
    let mut acc = RationalSeries::zero();
    for lam in enumerate(ctx, Which::P)? {
        if j_lambda(&lam).count_ones() as usize == i {
            acc = &acc + &a_lambda(ctx, &lam)?.hilbert()?;
        }
    }
    Ok(comparison(hilbert_ni_closed(ctx.f, i), acc))
}

fn check_window(f: usize, i0: i64, i0p: i64) -> Result<()> {
    if !(-1 <= i0 && i0 < i0p && i0p <= f as i64) {
        return Err(Error::InvalidWindow(format!(
            "need -1 <= i0 < i0' <= {f}, got ({i0}, {i0p})"
        )));
    }
    Ok(())
}

/// Bigraded table of `R / a(lambda)` up to degree `trunc`.
pub fn bigraded_of_ideal(ideal: &MonomialIdeal, trunc: u32) -> BigradedSeries {
    let mut out = BigradedSeries::new(trunc);
    for m in MonomialIdeal::unit(ideal.nvars()).monomials_outside(ideal, trunc) {
        out.insert(degree(&m), offset(&m), 1)
            .expect("degree within truncation");
    }
    out
}

/// Per-profile bigraded data of the graded subquotient for the window
/// `(i0, i0p)`.
///
/// In the split case each profile with `i0 < |J_lambda| <= i0p` contributes
/// all of `R / a(lambda)` and the others contribute nothing.
pub fn gr_subquotient(
    ctx: &Context,
    i0: i64,
    i0p: i64,
    trunc: u32,
) -> Result<Vec<(Profile, BigradedSeries)>> {
    check_window(ctx.f, i0, i0p)?;
    let mut out = Vec::new();
    for lam in enumerate(ctx, Which::P)? {
        let table = if ctx.case == Case::Split {
            let size = j_lambda(&lam).count_ones() as i64;
            if i0 < size && size <= i0p {
                bigraded_of_ideal(&a_lambda(ctx, &lam)?, trunc)
            } else {
                BigradedSeries::new(trunc)
            }
        } else {
            bigraded_quotient(ctx, &lam, i0, i0p, trunc)?
        };
        out.push((lam, table));
    }
    Ok(out)
}

/// Profiles indexing the invariants of the window `(i0, i0p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct I1Set {
    /// Profiles in the context with `i0 < |J_lambda| <= i0p`.
    pub in_p: Vec<Profile>,
    /// Semisimple profiles outside the context with `|J_lambda| = i0 + 1`.
    pub outside_p: Vec<Profile>,
}

impl I1Set {
    pub fn len(&self) -> usize {
        self.in_p.len() + self.outside_p.len()
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn i1_invariants(ctx: &Context, i0: i64, i0p: i64) -> Result<I1Set> {
    check_window(ctx.f, i0, i0p)?;
    let size = |l: &Profile| j_lambda(l).count_ones() as i64;
    let in_p = enumerate(ctx, Which::P)?
        .into_iter()
        .filter(|l| i0 < size(l) && size(l) <= i0p)
        .collect();
    let mut outside_p = Vec::new();
    for l in enumerate(ctx, Which::Pss)? {
        if size(&l) == i0 + 1 && !is_member(ctx, Which::P, &l)? {
            outside_p.push(l);
        }
    }
    Ok(I1Set { in_p, outside_p })
}

/// Profiles attached to the degree-zero part of the graded subquotient: a
/// profile whose piece has the unit as a degree-zero element contributes
/// itself, and every degree-zero generator `p_{J'}` contributes the shifted
/// profile `lambda'(J')`. The result is sorted.
pub fn degree0_profiles(ctx: &Context, i0: i64, i0p: i64) -> Result<Vec<Profile>> {
    check_window(ctx.f, i0, i0p)?;
    let mut out = Vec::new();
    for lam in enumerate(ctx, Which::P)? {
        if ctx.case == Case::Split {
            let size = j_lambda(&lam).count_ones() as i64;
            if i0 < size && size <= i0p {
                out.push(lam);
            }
            continue;
        }
        let st = stats(ctx, &lam)?;
        let d = st.d_for(i0) as u32;
        let lower = crate::ideals::a1(ctx, &lam, i0)?;
        let upper = crate::ideals::a1(ctx, &lam, i0p)?;
        for m in lower.monomials_outside(&upper, d) {
            if degree(&m) != d {
                continue;
            }
            let jp = (0..ctx.f)
                .filter(|&j| m[2 * j] + m[2 * j + 1] > 0)
                .fold(0u64, |acc, j| acc | 1 << j);
            out.push(shifted_profile(&lam, st.j1_mask(), jp));
        }
    }
    out.sort();
    Ok(out)
}

/// Subsets indexing the socle of the window: weights of the context with
/// `i0 < |J| <= i0p`, and other subsets with `|J| = i0 + 1`.
pub fn socle(ctx: &Context, i0: i64, i0p: i64) -> Result<Vec<u64>> {
    check_window(ctx.f, i0, i0p)?;
    let w: BTreeSet<u64> = weight_subsets(ctx)?.into_iter().collect();
    let mut out: Vec<u64> = (0..=crate::weights::full_mask(ctx.f))
        .filter(|js| {
            let s = js.count_ones() as i64;
            if w.contains(js) {
                i0 < s && s <= i0p
            } else {
                s == i0 + 1
            }
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// `sum_{i0 < i <= i0p} C(f, i)`.
pub fn k1_cycle(f: usize, i0: i64, i0p: i64) -> Result<BigInt> {
    check_window(f, i0, i0p)?;
    Ok(((i0 + 1).max(0)..=i0p)
        .map(|i| binomial(f as u64, i as u64))
        .sum())
}

/// Number of subsets `J` with `i0 < |J| <= i0p`, counted directly.
pub fn k1_cycle_enumerated(f: usize, i0: i64, i0p: i64) -> Result<usize> {
    check_window(f, i0, i0p)?;
    Ok((0..=crate::weights::full_mask(f))
        .filter(|js| {
            let s = js.count_ones() as i64;
            i0 < s && s <= i0p
        })
        .count())
}

/// Lattice model of the Jordan–Hölder factors of a profile's summand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaLattice {
    pub d: usize,
    /// Offsets `l` allowed by the generator types with `|l| < n`.
    pub jh_tau: Vec<CharOffset>,
    /// For each `i < n`, the offsets with `|l| >= i`.
    pub jh_m: Vec<Vec<CharOffset>>,
    /// Offsets with at least `d` coordinates of the sign used by `p`.
    pub jh_theta: Vec<CharOffset>,
    pub chain_ok: bool,
    pub greedy_ok: bool,
}

fn norm1(l: &[i64]) -> i64 {
    l.iter().map(|v| v.abs()).sum()
}

fn lattice_points(kinds: &[TKind], max_norm: i64) -> Vec<CharOffset> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; kinds.len()];
    fn rec(kinds: &[TKind], pos: usize, budget: i64, cur: &mut Vec<i64>, out: &mut Vec<CharOffset>) {
        if pos == kinds.len() {
            out.push(cur.clone());
            return;
        }
        let (lo, hi) = match kinds[pos] {
            TKind::Y => (-budget, 0),
            TKind::Z => (0, budget),
            TKind::YZ => (-budget, budget),
        };
        for v in lo..=hi {
            cur[pos] = v;
            rec(kinds, pos + 1, budget - v.abs(), cur, out);
        }
        cur[pos] = 0;
    }
    rec(kinds, 0, max_norm, &mut cur, &mut out);
    out.sort_by_key(|l| (norm1(l), l.clone()));
    out
}

fn step_down(l: &[i64], j: usize) -> CharOffset {
    let mut m = l.to_vec();
    m[j] -= m[j].signum();
    m
}

pub fn theta_lattice(ctx: &Context, lambda: &[Symbol], n: usize, i0: i64) -> Result<ThetaLattice> {
    if i0 < -1 || i0 > ctx.f as i64 {
        return Err(Error::InvalidWindow(format!("level {i0} outside -1..={}", ctx.f)));
    }
    let st = stats(ctx, lambda)?;
    let d = st.d_for(i0);
    let (j1, j2) = (st.j1_mask(), st.j2_mask());
    let active = |l: &[i64]| -> usize {
        (0..l.len())
            .filter(|&j| (j1 >> j & 1 == 1 && l[j] > 0) || (j2 >> j & 1 == 1 && l[j] < 0))
            .count()
    };
    let tau = if n == 0 {
        Vec::new()
    } else {
        lattice_points(&st.t, n as i64 - 1)
    };
    let jh_m = (0..n)
        .map(|i| tau.iter().filter(|l| norm1(l) >= i as i64).cloned().collect())
        .collect();
    let theta: Vec<CharOffset> = tau.iter().filter(|l| active(l) >= d).cloned().collect();
    let in_theta: BTreeSet<&CharOffset> = theta.iter().collect();

    // longest descending path inside theta, by increasing norm
    let mut longest: HashMap<&CharOffset, i64> = HashMap::new();
    for l in &theta {
        let best = (0..l.len())
            .filter(|&j| l[j] != 0)
            .filter_map(|j| {
                let m = step_down(l, j);
                in_theta.get(&m).map(|key| longest[*key] + 1)
            })
            .max()
            .unwrap_or(0);
        longest.insert(l, best);
    }
    let chain_ok = theta.iter().all(|l| longest[l] >= norm1(l) - d as i64);

    let e = j1 | j2;
    let greedy_ok = theta.iter().all(|start| {
        let mut l = start.clone();
        while norm1(&l) > d as i64 {
            let outside = (0..l.len()).find(|&j| e >> j & 1 == 0 && l[j] != 0);
            let j = outside.unwrap_or_else(|| {
                (0..l.len())
                    .filter(|&j| l[j] != 0)
                    .min_by_key(|&j| (l[j].abs(), j))
                    .expect("nonzero coordinate")
            });
            l = step_down(&l, j);
            if !in_theta.contains(&l) {
                return false;
            }
        }
        true
    });
    Ok(ThetaLattice {
        d,
        jh_tau: tau,
        jh_m,
        jh_theta: theta,
        chain_ok,
        greedy_ok,
    })
}

/// Outcome of comparing graded pieces with semisimple data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchReport {
    pub pairs: usize,
    pub bijection_ok: bool,
    pub hilbert_ok: bool,
    pub mismatched: Vec<Profile>,
}

impl MatchReport {
    pub fn ok(&self) -> bool {
        self.bijection_ok && self.hilbert_ok
    }
}

/// Profile obtained by placing `p-3-x` on `J' ∩ J1` and `x+2` on `J' ∩ J2`.
pub fn shifted_profile(lambda: &[Symbol], j1: u64, jp: u64) -> Profile {
    lambda
        .iter()
        .enumerate()
        .map(|(j, &s)| {
            if jp >> j & 1 == 0 {
                s
            } else if j1 >> j & 1 == 1 {
                Symbol::P3
            } else {
                Symbol::X2
            }
        })
        .collect()
}

/// Compares `(a1^{i0} / a1^{i0+1})(-d)` for every profile with the sum over
/// `J'` of `R / a^ss(lambda')` twisted by the offset of `p_{J'}`, and checks
/// that `lambda' = lambda'(J')` is a bijection onto the semisimple profiles
/// with `|J_lambda'| = i0 + 1`.
pub fn semisimple_match(ctx: &Context, i0: i64, trunc: u32) -> Result<MatchReport> {
    if i0 < -1 || i0 >= ctx.f as i64 {
        return Err(Error::InvalidWindow(format!(
            "need -1 <= i0 < {}, got {i0}",
            ctx.f
        )));
    }
    let f = ctx.f;
    let split = Context::split(f);
    let mut images: Vec<Profile> = Vec::new();
    let mut mismatched = Vec::new();
    for lam in enumerate(ctx, Which::P)? {
        let st = stats(ctx, &lam)?;
        let lhs = bigraded_quotient(ctx, &lam, i0, i0 + 1, trunc)?;
        let mut rhs = BigradedSeries::new(trunc);
        let need = i0 + 1 - st.j_lambda.len() as i64;
        if need >= 0 {
            let (j1, j2) = (st.j1_mask(), st.j2_mask());
            for jp in submasks(j1 | j2) {
                if jp.count_ones() as i64 != need {
                    continue;
                }
                let lp = shifted_profile(&lam, j1, jp);
                let ideal = ideal_of_kinds(&t_kinds(&split, &lp)?);
                let twist = offset(&p_monomial(f, j1, j2, jp));
                rhs = rhs.sum(&bigraded_of_ideal(&ideal, trunc).shift_twist(0, &twist)?)?;
                images.push(lp);
            }
        }
        if lhs != rhs {
            mismatched.push(lam);
        }
    }
    let pairs = images.len();
    let unique: BTreeSet<Profile> = images.into_iter().collect();
    let target: BTreeSet<Profile> = enumerate(ctx, Which::Pss)?
        .into_iter()
        .filter(|l| j_lambda(l).count_ones() as i64 == i0 + 1)
        .collect();
    Ok(MatchReport {
        pairs,
        bijection_ok: unique.len() == pairs && unique == target,
        hilbert_ok: mismatched.is_empty(),
        mismatched,
    })
}

/// Counts of characters first meeting the invariants at depth `i` exactly
/// in the character of the profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XCounts {
    pub k: usize,
    pub counts: [usize; 3],
    #[serde(with = "crate::series::dec_array")]
    pub expected: [BigInt; 3],
    pub trivial_multiplicity: usize,
}

impl XCounts {
    pub fn ok(&self) -> bool {
        self.counts
            .iter()
            .zip(&self.expected)
            .all(|(c, e)| BigInt::from(*c) == *e)
    }
}

/// Closed form `(1, 2f - k, 2f^2 - 2kf + C(k+1, 2))`.
pub fn x_counts_expected(f: usize, k: usize) -> [BigInt; 3] {
    let fb = BigInt::from(f);
    let kb = BigInt::from(k);
    [
        BigInt::from(1),
        2 * &fb - &kb,
        2 * &fb * &fb - 2 * &kb * &fb + binomial(k as u64 + 1, 2),
    ]
}

pub fn x_counts(ctx: &Context, lambda: &[Symbol]) -> Result<XCounts> {
    let st = stats(ctx, lambda)?;
    let f = ctx.f;
    let alg = TruncatedAlgebra::new(f, 3)?;
    let mut layer: [BTreeSet<CharOffset>; 3] = Default::default();
    let mut trivial = 0;
    for m in alg.basis() {
        let deg = monomial_degree(m) as usize;
        let o = monomial_offset(m);
        if deg == 2 && o.iter().all(|&v| v == 0) {
            trivial += 1;
        }
        layer[deg].insert(o);
    }
    let member = |c: &[i64]| -> bool {
        (0..f).all(|j| c[j] == 0 || (st.eps[j] != 0 && c[j] == st.eps[j] as i64))
    };
    let zero = vec![0i64; f];
    let mut counts = [0usize; 3];
    for c in lattice_points(&vec![TKind::YZ; f], 2) {
        for (i, offsets) in layer.iter().enumerate() {
            let hits: BTreeSet<CharOffset> = offsets
                .iter()
                .map(|o| c.iter().zip(o).map(|(a, b)| a + b).collect::<CharOffset>())
                .filter(|v| member(v))
                .collect();
            if hits.is_empty() {
                continue;
            }
            if hits.len() == 1 && hits.contains(&zero) {
                counts[i] += 1;
            }
            break;
        }
    }
    Ok(XCounts {
        k: st.k,
        counts,
        expected: x_counts_expected(f, st.k),
        trivial_multiplicity: trivial,
    })
}

/// Two expressions for the dimension of the first graded Tor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneratesCheck {
    #[serde(with = "crate::series::dec")]
    pub step1: BigInt,
    #[serde(with = "crate::series::dec")]
    pub step2: BigInt,
    pub equal: bool,
}

/// Compares the closed form with the aggregate
/// `(2f^2 + f + C(k+1,3)) + (2f - k)(2f + C(k,2)) + (2f^2 - 2kf + C(k+1,2)) 2f`.
pub fn degenerates_check(f: usize, k: usize) -> Result<DegeneratesCheck> {
    if k > f {
        return Err(Error::InvalidArgument(format!("need k <= f, got k = {k}, f = {f}")));
    }
    let fb = BigInt::from(f);
    let [_, x1, x2] = x_counts_expected(f, k);
    let step2 = crate::tor::ext1_lower_bound(f, k)
        + x1 * (2 * &fb + binomial(k as u64, 2))
        + x2 * 2 * &fb;
    let step1 = gr_formula(f, k);
    Ok(DegeneratesCheck {
        equal: step1 == step2,
        step1,
        step2,
    })
}

/// Subsets as sorted index lists, for display.
pub fn subsets_as_lists(masks: &[u64]) -> Vec<Vec<usize>> {
    masks.iter().map(|&m| bits(m)).collect()
}
