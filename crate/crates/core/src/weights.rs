//! Serre weight profiles and the combinatorial sets and statistics built
//! from them.
//!
//! A profile is a cyclic word of length `f` in six affine symbols of the
//! variable `x`. Subsets of `{0, .., f-1}` are `u64` bitmasks.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::binomial_u64;

/// Largest embedding degree accepted by [`Context::new`].
pub const MAX_F: usize = 32;

/// One entry of a profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Symbol {
    /// `x`
    X0,
    /// `x + 1`
    X1,
    /// `x + 2`
    X2,
    /// `p - 3 - x`
    P3,
    /// `p - 2 - x`
    P2,
    /// `p - 1 - x`
    P1,
}

pub const ALL_SYMBOLS: [Symbol; 6] = [
    Symbol::X0,
    Symbol::X1,
    Symbol::X2,
    Symbol::P3,
    Symbol::P2,
    Symbol::P1,
];

impl Symbol {
    fn is_x_side(self) -> bool {
        matches!(self, Symbol::X0 | Symbol::X1 | Symbol::X2)
    }

    /// Whether `next` may follow `self` cyclically in a semisimple profile.
    pub fn allows_next(self, next: Symbol) -> bool {
        use Symbol::*;
        if self.is_x_side() {
            matches!(next, X0 | X2 | P2)
        } else {
            matches!(next, X1 | P3 | P1)
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Symbol::X0 => "X0",
            Symbol::X1 => "X1",
            Symbol::X2 => "X2",
            Symbol::P3 => "P3",
            Symbol::P2 => "P2",
            Symbol::P1 => "P1",
        }
    }

    pub fn affine(self) -> AffineWeight {
        match self {
            Symbol::X0 => AffineWeight::Plus(0),
            Symbol::X1 => AffineWeight::Plus(1),
            Symbol::X2 => AffineWeight::Plus(2),
            Symbol::P3 => AffineWeight::Minus(-1),
            Symbol::P2 => AffineWeight::Minus(0),
            Symbol::P1 => AffineWeight::Minus(1),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.affine())
    }
}

impl FromStr for Symbol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        ALL_SYMBOLS
            .iter()
            .copied()
            .find(|sym| sym.tag().eq_ignore_ascii_case(t) || sym.to_string() == t)
            .ok_or_else(|| Error::InvalidProfile(format!("unknown symbol '{t}'")))
    }
}

/// Entry `x + c` or `p - 2 - x + c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AffineWeight {
    Plus(i32),
    Minus(i32),
}

impl AffineWeight {
    pub fn symbol(self) -> Option<Symbol> {
        ALL_SYMBOLS.iter().copied().find(|s| s.affine() == self)
    }
}

impl fmt::Display for AffineWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AffineWeight::Plus(0) => write!(f, "x"),
            AffineWeight::Plus(c) if c > 0 => write!(f, "x+{c}"),
            AffineWeight::Plus(c) => write!(f, "x-{}", -c),
            AffineWeight::Minus(c) => {
                let k = 2 - c;
                if k >= 0 {
                    write!(f, "p-{k}-x")
                } else {
                    write!(f, "p+{}-x", -k)
                }
            }
        }
    }
}

/// Profiles are stored as plain symbol vectors.
pub type Profile = Vec<Symbol>;

/// Parses `X0,P2,..` or a JSON array of tags.
pub fn parse_profile(s: &str) -> Result<Profile> {
    let t = s.trim();
    if t.starts_with('[') {
        return serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()));
    }
    t.split(',').map(Symbol::from_str).collect()
}

pub fn profile_string(lambda: &[Symbol]) -> String {
    let parts: Vec<String> = lambda.iter().map(|s| s.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Shape of the two-dimensional representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    Irreducible,
    Split,
    Nonsplit,
}

impl FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "irreducible" => Ok(Case::Irreducible),
            "split" => Ok(Case::Split),
            "nonsplit" => Ok(Case::Nonsplit),
            other => Err(Error::InvalidContext(format!("unknown case '{other}'"))),
        }
    }
}

/// Embedding degree, case and the index set `J_rho`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Context {
    pub f: usize,
    pub case: Case,
    pub jrho: u64,
}

pub fn full_mask(f: usize) -> u64 {
    if f >= 64 {
        u64::MAX
    } else {
        (1u64 << f) - 1
    }
}

pub fn bits(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

pub fn mask_of(indices: &[usize]) -> u64 {
    indices.iter().fold(0, |m, &i| m | 1 << i)
}

fn popcount(m: u64) -> usize {
    m.count_ones() as usize
}

/// All submasks of `m`, in increasing numeric order.
pub fn submasks(m: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(1 << popcount(m));
    let mut s: u64 = 0;
    loop {
        out.push(s);
        if s == m {
            break;
        }
        s = (s.wrapping_sub(m)) & m;
    }
    out
}

impl Context {
    /// Validates the case against `jrho`: split needs every index, nonsplit
    /// a proper subset. For the irreducible case `jrho` is ignored.
    pub fn new(f: usize, case: Case, jrho: u64) -> Result<Self> {
        if f == 0 || f > MAX_F {
            return Err(Error::InvalidContext(format!(
                "f must lie in 1..={MAX_F}, got {f}"
            )));
        }
        let full = full_mask(f);
        match case {
            Case::Irreducible => Ok(Context { f, case, jrho: 0 }),
            _ if jrho & !full != 0 => Err(Error::InvalidContext(format!(
                "jrho {jrho:#b} has bits outside 0..{f}"
            ))),
            Case::Split if jrho != full => Err(Error::InvalidContext(
                "the split case requires jrho = all indices".into(),
            )),
            Case::Nonsplit if jrho == full => Err(Error::InvalidContext(
                "the nonsplit case requires a proper subset jrho".into(),
            )),
            _ => Ok(Context { f, case, jrho }),
        }
    }

    pub fn split(f: usize) -> Self {
        Self::new(f, Case::Split, full_mask(f)).expect("valid split context")
    }

    pub fn nonsplit(f: usize, jrho: u64) -> Result<Self> {
        Self::new(f, Case::Nonsplit, jrho)
    }

    pub fn is_reducible(&self) -> bool {
        self.case != Case::Irreducible
    }

    pub fn in_jrho(&self, j: usize) -> bool {
        self.jrho >> j & 1 == 1
    }

    /// Size of `J_rho`.
    pub fn d(&self) -> usize {
        popcount(self.jrho)
    }

    fn require_reducible(&self, what: &str) -> Result<()> {
        if self.is_reducible() {
            Ok(())
        } else {
            Err(Error::UnsupportedCase(format!(
                "{what} is only available for reducible contexts"
            )))
        }
    }

    /// Every reducible context of embedding degree `f`.
    pub fn all_reducible(f: usize) -> Vec<Context> {
        let mut out = vec![Context::split(f)];
        for jrho in 0..full_mask(f) {
            out.push(Context::nonsplit(f, jrho).expect("proper subset"));
        }
        out
    }
}

/// Which set of profiles to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Which {
    /// Semisimple profiles.
    Pss,
    /// Semisimple Serre weights.
    Dss,
    /// Profiles of the context.
    P,
    /// Serre weights of the context.
    D,
    /// The reduced index set used for counting in the nonsplit case.
    Pbar,
}

impl FromStr for Which {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "P" | "p" => Ok(Which::P),
            "Pss" | "pss" => Ok(Which::Pss),
            "D" | "d" => Ok(Which::D),
            "Dss" | "dss" => Ok(Which::Dss),
            "Pbar" | "pbar" => Ok(Which::Pbar),
            other => Err(Error::InvalidArgument(format!("unknown set '{other}'"))),
        }
    }
}

pub fn check_profile(ctx: &Context, lambda: &[Symbol]) -> Result<()> {
    if lambda.len() != ctx.f {
        return Err(Error::InvalidProfile(format!(
            "profile has length {} but f = {}",
            lambda.len(),
            ctx.f
        )));
    }
    Ok(())
}

/// Cyclic adjacency condition for semisimple profiles.
pub fn in_pss(lambda: &[Symbol]) -> bool {
    let f = lambda.len();
    f > 0 && (0..f).all(|j| lambda[j].allows_next(lambda[(j + 1) % f]))
}

pub fn in_dss(lambda: &[Symbol]) -> bool {
    in_pss(lambda)
        && lambda
            .iter()
            .all(|s| matches!(s, Symbol::X0 | Symbol::X1 | Symbol::P3 | Symbol::P2))
}

fn local_ok(ctx: &Context, which: Which, j: usize, s: Symbol) -> bool {
    use Symbol::*;
    let inj = ctx.in_jrho(j);
    match which {
        Which::Pss => true,
        Which::Dss => matches!(s, X0 | X1 | P3 | P2),
        Which::P => inj || !matches!(s, X2 | P3),
        Which::D => matches!(s, X0 | X1 | P3 | P2) && (inj || !matches!(s, X1 | P3)),
        Which::Pbar => match s {
            X2 => false,
            P3 => inj,
            P1 => !inj,
            _ => true,
        },
    }
}

/// Membership of `lambda` in the chosen set.
pub fn is_member(ctx: &Context, which: Which, lambda: &[Symbol]) -> Result<bool> {
    check_profile(ctx, lambda)?;
    if matches!(which, Which::P | Which::D | Which::Pbar) {
        ctx.require_reducible("this profile set")?;
    }
    Ok(in_pss(lambda)
        && lambda
            .iter()
            .enumerate()
            .all(|(j, &s)| local_ok(ctx, which, j, s)))
}

/// Enumerates a profile set in lexicographic order of symbols
/// `X0 < X1 < X2 < P3 < P2 < P1`.
pub fn enumerate(ctx: &Context, which: Which) -> Result<Vec<Profile>> {
    if matches!(which, Which::P | Which::D | Which::Pbar) {
        ctx.require_reducible("enumeration of this profile set")?;
    }
    let f = ctx.f;
    let mut out = Vec::new();
    let mut cur: Vec<Symbol> = Vec::with_capacity(f);
    fn rec(
        ctx: &Context,
        which: Which,
        cur: &mut Vec<Symbol>,
        out: &mut Vec<Profile>,
    ) {
        let j = cur.len();
        if j == ctx.f {
            if cur[j - 1].allows_next(cur[0]) {
                out.push(cur.clone());
            }
            return;
        }
        for s in ALL_SYMBOLS {
            if j > 0 && !cur[j - 1].allows_next(s) {
                continue;
            }
            if !local_ok(ctx, which, j, s) {
                continue;
            }
            cur.push(s);
            rec(ctx, which, cur, out);
            cur.pop();
        }
    }
    rec(ctx, which, &mut cur, &mut out);
    Ok(out)
}

/// `J_lambda`: indices carrying `x+1`, `x+2` or `p-3-x`.
pub fn j_lambda(lambda: &[Symbol]) -> u64 {
    lambda
        .iter()
        .enumerate()
        .filter(|(_, s)| matches!(s, Symbol::X1 | Symbol::X2 | Symbol::P3))
        .fold(0, |m, (j, _)| m | 1 << j)
}

/// Generator type of the ideal at one index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TKind {
    Y,
    Z,
    YZ,
}

pub fn t_kinds(ctx: &Context, lambda: &[Symbol]) -> Result<Vec<TKind>> {
    check_profile(ctx, lambda)?;
    ctx.require_reducible("the ideal of a profile")?;
    Ok(lambda
        .iter()
        .enumerate()
        .map(|(j, s)| {
            if !ctx.in_jrho(j) {
                return TKind::YZ;
            }
            match s {
                Symbol::X0 | Symbol::P3 => TKind::Z,
                Symbol::X2 | Symbol::P1 => TKind::Y,
                _ => TKind::YZ,
            }
        })
        .collect())
}

/// Derived statistics of a profile in a context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileStats {
    pub profile: Profile,
    pub j_lambda: Vec<usize>,
    pub t: Vec<TKind>,
    pub a_set: Vec<usize>,
    pub k: usize,
    pub j1: Vec<usize>,
    pub j2: Vec<usize>,
    /// `-1` where `t_j = y_j`, `+1` where `t_j = z_j`, `0` otherwise.
    pub eps: Vec<i8>,
}

impl ProfileStats {
    pub fn j_lambda_mask(&self) -> u64 {
        mask_of(&self.j_lambda)
    }
    pub fn j1_mask(&self) -> u64 {
        mask_of(&self.j1)
    }
    pub fn j2_mask(&self) -> u64 {
        mask_of(&self.j2)
    }
    /// Indices `j` with `t_j` a single variable.
    pub fn j_mask(&self) -> u64 {
        full_mask(self.t.len()) & !mask_of(&self.a_set)
    }
    /// `max(i + 1 - |J_lambda|, 0)`.
    pub fn d_for(&self, i: i64) -> usize {
        (i + 1 - self.j_lambda.len() as i64).max(0) as usize
    }
}

pub fn stats(ctx: &Context, lambda: &[Symbol]) -> Result<ProfileStats> {
    let t = t_kinds(ctx, lambda)?;
    let a_set: Vec<usize> = (0..ctx.f).filter(|&j| t[j] == TKind::YZ).collect();
    let pick = |sym: Symbol| -> Vec<usize> {
        (0..ctx.f)
            .filter(|&j| !ctx.in_jrho(j) && lambda[j] == sym)
            .collect()
    };
    Ok(ProfileStats {
        profile: lambda.to_vec(),
        j_lambda: bits(j_lambda(lambda)),
        k: ctx.f - a_set.len(),
        a_set,
        j1: pick(Symbol::P1),
        j2: pick(Symbol::X0),
        eps: t
            .iter()
            .map(|k| match k {
                TKind::Y => -1,
                TKind::Z => 1,
                TKind::YZ => 0,
            })
            .collect(),
        t,
    })
}

/// Distribution of `|A|` over the counting index set, together with the
/// distribution over the full profile set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountByA {
    pub index_set: Which,
    pub enumerated: Option<BTreeMap<usize, u64>>,
    pub closed: BTreeMap<usize, u64>,
    pub p_level_enumerated: Option<BTreeMap<usize, u64>>,
    pub p_level_closed: BTreeMap<usize, u64>,
}

impl CountByA {
    pub fn consistent(&self) -> bool {
        self.enumerated.as_ref().is_none_or(|e| *e == self.closed)
            && self
                .p_level_enumerated
                .as_ref()
                .is_none_or(|e| *e == self.p_level_closed)
    }
}

fn histogram(ctx: &Context, profiles: &[Profile]) -> Result<BTreeMap<usize, u64>> {
    let mut h = BTreeMap::new();
    for lam in profiles {
        let st = stats(ctx, lam)?;
        *h.entry(st.a_set.len()).or_insert(0) += 1;
    }
    Ok(h)
}

/// Closed-form and (where available) enumerated counts of profiles by `|A|`.
///
/// The irreducible case has no explicit profile set here and only the
/// closed-form counting model is returned.
pub fn count_by_a(ctx: &Context) -> Result<CountByA> {
    let f = ctx.f as u64;
    let mut closed = BTreeMap::new();
    let mut p_closed = BTreeMap::new();
    match ctx.case {
        Case::Irreducible | Case::Split => {
            let parity = if ctx.case == Case::Irreducible { 1 } else { 0 };
            for s in (0..=f).filter(|s| s % 2 == parity) {
                let c = 2 * binomial_u64(f, s);
                closed.insert(s as usize, c);
                p_closed.insert(s as usize, c << (f - s));
            }
        }
        Case::Nonsplit => {
            let d = ctx.d() as u64;
            for s in 0..=d {
                let c = binomial_u64(d, s) << (f - d);
                let a = (f - d + s) as usize;
                closed.insert(a, c);
                p_closed.insert(a, c << (d - s));
            }
        }
    }
    let (index_set, enumerated, p_enum) = match ctx.case {
        Case::Irreducible => (Which::D, None, None),
        Case::Split => (
            Which::D,
            Some(histogram(ctx, &enumerate(ctx, Which::D)?)?),
            Some(histogram(ctx, &enumerate(ctx, Which::P)?)?),
        ),
        Case::Nonsplit => (
            Which::Pbar,
            Some(histogram(ctx, &enumerate(ctx, Which::Pbar)?)?),
            Some(histogram(ctx, &enumerate(ctx, Which::P)?)?),
        ),
    };
    Ok(CountByA {
        index_set,
        enumerated,
        closed,
        p_level_enumerated: p_enum,
        p_level_closed: p_closed,
    })
}

/// All `J'` with `Js ∩ Jt ⊆ J' ⊆ Js ∪ Jt`, in increasing mask order.
pub fn jh_interval(js: u64, jt: u64) -> Vec<u64> {
    let lo = js & jt;
    let delta = js ^ jt;
    let mut out: Vec<u64> = submasks(delta).into_iter().map(|s| lo | s).collect();
    out.sort_unstable();
    out
}

/// Whether the two weights are adjacent, i.e. differ in exactly one index.
pub fn ext1_nonzero(js: u64, jt: u64) -> bool {
    popcount(js ^ jt) == 1
}

/// `J Δ {j}`.
pub fn mu_shift(js: u64, j: usize) -> u64 {
    js ^ (1 << j)
}

/// How a subset is turned into a profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Flavor {
    Modular,
    PrincipalSeries,
}

/// Profile attached to a subset `J ⊆ {0, .., f-1}`.
pub fn profile_from_subset(f: usize, js: u64, flavor: Flavor) -> Vec<AffineWeight> {
    (0..f)
        .map(|j| {
            let delta = (js >> j & 1) as i32;
            let next_in = js >> ((j + 1) % f) & 1 == 1;
            match (flavor, next_in) {
                (Flavor::Modular, false) => AffineWeight::Plus(delta),
                (Flavor::Modular, true) => AffineWeight::Minus(-delta),
                (Flavor::PrincipalSeries, false) => AffineWeight::Plus(-delta),
                (Flavor::PrincipalSeries, true) => AffineWeight::Minus(delta),
            }
        })
        .collect()
}

/// Modular profile of a subset as symbols.
pub fn modular_profile(f: usize, js: u64) -> Profile {
    profile_from_subset(f, js, Flavor::Modular)
        .into_iter()
        .map(|a| a.symbol().expect("modular entries are among the six symbols"))
        .collect()
}

/// Index sets describing the Serre weights near a profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuzzatiWindow {
    pub j_min: Vec<usize>,
    pub j_max: Vec<usize>,
    pub j_dd: Vec<usize>,
    /// Subsets `J ⊆ J_rho` with `|(J \ J'') Δ J'_min| <= 1`, as bitmasks.
    pub v_chi: Vec<u64>,
}

pub fn buzzati_window(ctx: &Context, lambda: &[Symbol]) -> Result<BuzzatiWindow> {
    check_profile(ctx, lambda)?;
    ctx.require_reducible("the weight window")?;
    let sel = |pred: &dyn Fn(Symbol) -> bool| -> u64 {
        (0..ctx.f)
            .filter(|&j| ctx.in_jrho(j) && pred(lambda[j]))
            .fold(0, |m, j| m | 1 << j)
    };
    let jmin = sel(&|s| matches!(s, Symbol::X2 | Symbol::P3));
    let jmax = sel(&|s| !matches!(s, Symbol::X0 | Symbol::P1));
    let jdd = sel(&|s| matches!(s, Symbol::X1 | Symbol::P2));
    let v_chi = submasks(ctx.jrho)
        .into_iter()
        .filter(|&js| popcount((js & !jdd) ^ jmin) <= 1)
        .collect();
    Ok(BuzzatiWindow {
        j_min: bits(jmin),
        j_max: bits(jmax),
        j_dd: bits(jdd),
        v_chi,
    })
}

/// The same window assembled as a union of intervals
/// `[J'_min Δ K, (J'_min Δ K) ∪ J'']` over `K ⊆ J_rho \ J''` with `|K| <= 1`.
pub fn buzzati_union(ctx: &Context, lambda: &[Symbol]) -> Result<Vec<u64>> {
    let w = buzzati_window(ctx, lambda)?;
    let jmin = mask_of(&w.j_min);
    let jdd = mask_of(&w.j_dd);
    let free = ctx.jrho & !jdd;
    let mut ks = vec![0u64];
    ks.extend(bits(free).into_iter().map(|j| 1u64 << j));
    let mut out: Vec<u64> = Vec::new();
    for k in ks {
        let lo = jmin ^ k;
        out.extend(jh_interval(lo, lo | jdd));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Index sets `J_lambda` for the Serre weights of the context.
pub fn weight_subsets(ctx: &Context) -> Result<Vec<u64>> {
    let mut out: Vec<u64> = enumerate(ctx, Which::D)?
        .iter()
        .map(|l| j_lambda(l))
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// A semisimple profile outside the context's profile set with
/// `|J_lambda| = k`, if one exists.
pub fn pss_outside_p_witness(ctx: &Context, k: usize) -> Result<Option<Profile>> {
    for lam in enumerate(ctx, Which::Pss)? {
        if popcount(j_lambda(&lam)) == k && !is_member(ctx, Which::P, &lam)? {
            return Ok(Some(lam));
        }
    }
    Ok(None)
}
