//! Monomial ideals in a polynomial ring over a field, and the ideals indexed
//! by weight profiles.
//!
//! For a context of degree `f` the ring has `2f` variables ordered
//! `y_0 < z_0 < y_1 < z_1 < ..`, so `y_j` has index `2j` and `z_j` index
//! `2j + 1`. The character offset of a monomial has `j`-th entry
//! `deg_{y_j} - deg_{z_j}`.

use std::cmp::Reverse;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Field, SparseMatrix};
use crate::series::{BigradedSeries, CharOffset, IntPoly, RationalSeries};
use crate::weights::{bits, stats, submasks, Context, ProfileStats, Symbol, TKind};

pub type Monomial = Vec<u32>;

/// Largest generator count accepted by [`MonomialIdeal::hilbert`].
pub const MAX_HILBERT_GENS: usize = 24;

pub fn degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn mul(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Character offset of a monomial in the `2f` variables `y_j, z_j`.
pub fn offset(m: &[u32]) -> CharOffset {
    m.chunks(2).map(|c| c[0] as i64 - c[1] as i64).collect()
}

/// Monomial ideal stored by its minimal generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialIdeal {
    nvars: usize,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    /// Builds the ideal generated by `gens`, keeping only minimal ones in
    /// graded order (degree first, then exponent vectors descending).
    pub fn new(nvars: usize, gens: Vec<Monomial>) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.len() != nvars) {
            return Err(Error::InvalidArgument(format!(
                "generator of length {} in a ring with {nvars} variables",
                g.len()
            )));
        }
        Ok(Self::from_valid(nvars, gens))
    }

    fn from_valid(nvars: usize, mut gens: Vec<Monomial>) -> Self {
        gens.sort_by_key(|g| (degree(g), Reverse(g.clone())));
        gens.dedup();
        let mut minimal: Vec<Monomial> = Vec::with_capacity(gens.len());
        for g in gens {
            if !minimal.iter().any(|h| divides(h, &g)) {
                minimal.push(g);
            }
        }
        MonomialIdeal {
            nvars,
            gens: minimal,
        }
    }

    pub fn unit(nvars: usize) -> Self {
        MonomialIdeal {
            nvars,
            gens: vec![vec![0; nvars]],
        }
    }

    pub fn zero(nvars: usize) -> Self {
        MonomialIdeal {
            nvars,
            gens: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(|g| degree(g) == 0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.gens.iter().all(|g| g.iter().all(|&e| e <= 1))
    }

    pub fn contains(&self, m: &[u32]) -> bool {
        self.gens.iter().any(|g| divides(g, m))
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Self::from_valid(self.nvars, gens)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(lcm(a, b));
            }
        }
        Self::from_valid(self.nvars, gens)
    }

    /// Image under a permutation of variables: variable `i` goes to `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let mut out = vec![0; self.nvars];
                for (i, &e) in g.iter().enumerate() {
                    out[perm[i]] = e;
                }
                out
            })
            .collect();
        Self::from_valid(self.nvars, gens)
    }

    /// Hilbert series of `R / I` by inclusion–exclusion over generator
    /// subsets, with denominator `(1 - t)^nvars`.
    pub fn hilbert(&self) -> Result<RationalSeries> {
        if self.gens.len() > MAX_HILBERT_GENS {
            return Err(Error::SizeLimit(format!(
                "{} generators exceeds the limit {MAX_HILBERT_GENS}",
                self.gens.len()
            )));
        }
        let mut coeffs: Vec<BigInt> = vec![BigInt::from(0); 1];
        fn rec(gens: &[Monomial], start: usize, cur: &Monomial, sign: i32, acc: &mut Vec<BigInt>) {
            let d = degree(cur) as usize;
            if acc.len() <= d {
                acc.resize(d + 1, BigInt::from(0));
            }
            acc[d] += sign;
            for i in start..gens.len() {
                let next = lcm(cur, &gens[i]);
                rec(gens, i + 1, &next, -sign, acc);
            }
        }
        rec(&self.gens, 0, &vec![0; self.nvars], 1, &mut coeffs);
        Ok(RationalSeries::new(IntPoly::new(coeffs), self.nvars as u32))
    }

    /// Monomials of degree at most `max_deg` lying in `self` but not in
    /// `upper`, in lexicographic order of exponent vectors.
    pub fn monomials_outside(&self, upper: &Self, max_deg: u32) -> Vec<Monomial> {
        assert_eq!(self.nvars, upper.nvars);
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.nvars];
        self.collect(upper, 0, max_deg, &mut cur, &mut out);
        out
    }

    fn reachable(&self, cur: &[u32], pos: usize, budget: u32) -> bool {
        self.gens.iter().any(|g| {
            g[..pos].iter().zip(&cur[..pos]).all(|(a, b)| a <= b)
                && g[pos..].iter().sum::<u32>() <= budget
        })
    }

    fn collect(
        &self,
        upper: &Self,
        pos: usize,
        budget: u32,
        cur: &mut Monomial,
        out: &mut Vec<Monomial>,
    ) {
        if pos == self.nvars {
            if self.contains(cur) {
                out.push(cur.clone());
            }
            return;
        }
        for e in 0..=budget {
            cur[pos] = e;
            if upper.contains(cur) {
                break;
            }
            if self.reachable(cur, pos + 1, budget - e) {
                self.collect(upper, pos + 1, budget - e, cur, out);
            }
        }
        cur[pos] = 0;
    }
}

/// Variable names `y0, z0, ..` for ideals in `2f` variables.
pub fn yz_names(f: usize) -> Vec<String> {
    (0..f)
        .flat_map(|j| [format!("y{j}"), format!("z{j}")])
        .collect()
}

pub fn monomial_string(m: &[u32], names: &[String]) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                names[i].clone()
            } else {
                format!("{}^{e}", names[i])
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = if self.nvars.is_multiple_of(2) {
            yz_names(self.nvars / 2)
        } else {
            (0..self.nvars).map(|i| format!("x{i}")).collect()
        };
        let parts: Vec<String> = self
            .gens
            .iter()
            .map(|g| monomial_string(g, &names))
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn var(f: usize, idx: usize) -> Monomial {
    let mut m = vec![0; 2 * f];
    m[idx] = 1;
    m
}

fn t_generator(f: usize, j: usize, kind: TKind) -> Monomial {
    let mut m = vec![0; 2 * f];
    match kind {
        TKind::Y => m[2 * j] = 1,
        TKind::Z => m[2 * j + 1] = 1,
        TKind::YZ => {
            m[2 * j] = 1;
            m[2 * j + 1] = 1;
        }
    }
    m
}

/// Ideal generated by `t_0, .., t_{f-1}` for the given generator types.
pub fn ideal_of_kinds(kinds: &[TKind]) -> MonomialIdeal {
    let f = kinds.len();
    MonomialIdeal::from_valid(
        2 * f,
        kinds
            .iter()
            .enumerate()
            .map(|(j, &k)| t_generator(f, j, k))
            .collect(),
    )
}

/// The ideal attached to a profile.
pub fn a_lambda(ctx: &Context, lambda: &[Symbol]) -> Result<MonomialIdeal> {
    Ok(ideal_of_kinds(&stats(ctx, lambda)?.t))
}

/// Product `p_{J'}`: `y_j` for `j ∈ J' ∩ J1`, `z_j` for `j ∈ J' ∩ J2`.
pub fn p_monomial(f: usize, j1: u64, j2: u64, jp: u64) -> Monomial {
    let mut m = vec![0; 2 * f];
    for j in bits(jp & j1) {
        m[2 * j] = 1;
    }
    for j in bits(jp & j2) {
        m[2 * j + 1] = 1;
    }
    m
}

/// Ideal generated by the `p_{J'}` with `|J'| = d`.
///
/// It is the unit ideal for `d = 0` and zero for `d > |J1 ⊔ J2|`.
pub fn i_ideal(f: usize, j1: u64, j2: u64, d: usize) -> MonomialIdeal {
    let e = j1 | j2;
    let gens = submasks(e)
        .into_iter()
        .filter(|s| s.count_ones() as usize == d)
        .map(|s| p_monomial(f, j1, j2, s))
        .collect();
    MonomialIdeal::from_valid(2 * f, gens)
}

fn check_level(f: usize, i: i64) -> Result<()> {
    if i < -1 || i > f as i64 {
        return Err(Error::InvalidWindow(format!(
            "level {i} outside -1..={f}"
        )));
    }
    Ok(())
}

fn a1_from_stats(f: usize, st: &ProfileStats, i: i64) -> MonomialIdeal {
    let d = st.d_for(i);
    i_ideal(f, st.j1_mask(), st.j2_mask(), d).sum(&ideal_of_kinds(&st.t))
}

/// The ideal `I(J1, J2, d) + a(lambda)` with `d = max(i + 1 - |J_lambda|, 0)`.
pub fn a1(ctx: &Context, lambda: &[Symbol], i: i64) -> Result<MonomialIdeal> {
    check_level(ctx.f, i)?;
    Ok(a1_from_stats(ctx.f, &stats(ctx, lambda)?, i))
}

/// Bigraded multiplicities of `a1^{i0} / a1^{i0p}`, with degrees lowered by
/// `d_lambda = max(i0 + 1 - |J_lambda|, 0)` and truncated at `trunc`.
pub fn bigraded_quotient(
    ctx: &Context,
    lambda: &[Symbol],
    i0: i64,
    i0p: i64,
    trunc: u32,
) -> Result<BigradedSeries> {
    check_level(ctx.f, i0)?;
    check_level(ctx.f, i0p)?;
    if i0 >= i0p {
        return Err(Error::InvalidWindow(format!(
            "need i0 < i0' but got ({i0}, {i0p})"
        )));
    }
    let st = stats(ctx, lambda)?;
    let lower = a1_from_stats(ctx.f, &st, i0);
    let upper = a1_from_stats(ctx.f, &st, i0p);
    let d = st.d_for(i0) as u32;
    let mut out = BigradedSeries::new(trunc);
    for m in lower.monomials_outside(&upper, trunc + d) {
        let deg = degree(&m);
        if deg < d {
            return Err(Error::Truncation(format!(
                "monomial of degree {deg} below the shift {d}"
            )));
        }
        out.insert(deg - d, offset(&m), 1)?;
    }
    Ok(out)
}

/// Outcome of the patched-intersection check for one profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchedCheck {
    /// Variables `X_j, Y_j` for `j ∈ J_rho` followed by the `Z_m`.
    pub names: Vec<String>,
    pub computed: Vec<String>,
    pub expected: Vec<String>,
    pub matches: bool,
    pub prenormalized_matches: bool,
}

impl PatchedCheck {
    pub fn ok(&self) -> bool {
        self.matches && self.prenormalized_matches
    }
}

/// Intersects the linear ideals `(X_j : j ∈ J) + (Y_j : j ∈ J_rho \ J) + (Z)`
/// over the window of the profile and compares with the expected minimal
/// generators `X_j Y_j`, `Y_i Y_j` (`i < j` outside `J''`) and the `Z_m`.
pub fn patched_intersection_check(ctx: &Context, lambda: &[Symbol]) -> Result<PatchedCheck> {
    let w = crate::weights::buzzati_window(ctx, lambda)?;
    let jr = bits(ctx.jrho);
    let l = jr.len();
    let nz = 2 * ctx.f - l;
    let n = 2 * l + nz;
    let mut names: Vec<String> = Vec::with_capacity(n);
    for &j in &jr {
        names.push(format!("X{j}"));
        names.push(format!("Y{j}"));
    }
    for m in 0..nz {
        names.push(format!("Z{m}"));
    }
    let unit = |i: usize| -> Monomial {
        let mut m = vec![0; n];
        m[i] = 1;
        m
    };
    let z_gens: Vec<Monomial> = (0..nz).map(|m| unit(2 * l + m)).collect();
    let prime = |js: u64| -> MonomialIdeal {
        let mut gens = z_gens.clone();
        for (pos, &j) in jr.iter().enumerate() {
            gens.push(unit(2 * pos + if js >> j & 1 == 1 { 0 } else { 1 }));
        }
        MonomialIdeal::from_valid(n, gens)
    };
    let intersect_all = |sets: &[u64]| -> MonomialIdeal {
        sets.iter()
            .map(|&s| prime(s))
            .reduce(|a, b| a.intersect(&b))
            .unwrap_or_else(|| MonomialIdeal::unit(n))
    };
    let jdd = crate::weights::mask_of(&w.j_dd);
    let jmin = crate::weights::mask_of(&w.j_min);
    let normalized_sets: Vec<u64> = submasks(ctx.jrho)
        .into_iter()
        .filter(|&js| (js & !jdd).count_ones() <= 1)
        .collect();
    let computed = intersect_all(&normalized_sets);

    let mut expected_gens = z_gens.clone();
    for pos in 0..l {
        expected_gens.push(mul(&unit(2 * pos), &unit(2 * pos + 1)));
    }
    let free: Vec<usize> = (0..l).filter(|&p| jdd >> jr[p] & 1 == 0).collect();
    for (a, &p) in free.iter().enumerate() {
        for &q in &free[a + 1..] {
            expected_gens.push(mul(&unit(2 * p + 1), &unit(2 * q + 1)));
        }
    }
    let expected = MonomialIdeal::from_valid(n, expected_gens);

    let raw = intersect_all(&w.v_chi);
    let mut perm: Vec<usize> = (0..n).collect();
    for (pos, &j) in jr.iter().enumerate() {
        if jmin >> j & 1 == 1 {
            perm.swap(2 * pos, 2 * pos + 1);
        }
    }
    let renamed = raw.permute(&perm);

    let show = |i: &MonomialIdeal| -> Vec<String> {
        i.gens().iter().map(|g| monomial_string(g, &names)).collect()
    };
    Ok(PatchedCheck {
        computed: show(&computed),
        expected: show(&expected),
        matches: computed == expected,
        prenormalized_matches: renamed == computed,
        names,
    })
}

/// Per-degree comparison of the kernel of a presentation with the span of
/// the expected relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyzygyCheck {
    pub generators: usize,
    /// `(degree, kernel dimension, dimension spanned by the relations)`.
    pub degrees: Vec<(u32, usize, usize)>,
    pub relations_in_kernel: bool,
}

impl SyzygyCheck {
    pub fn ok(&self) -> bool {
        self.relations_in_kernel && self.degrees.iter().all(|(_, k, r)| k == r)
    }
}

/// Checks that the module `a1^{i0} / a(lambda)`, generated by the `p_{J'}`
/// with `|J'| = d`, has its relations generated in degree one by
///
/// * `w'_i p_I = 0` for `i ∈ I`, where `w'_i` is the variable of index `i`
///   not used by `p`;
/// * `w_i p_{I \ i} = w_j p_{I \ j}` for `i, j ∈ I`, `|I| = d + 1`.
///
/// The kernel is computed by linear algebra degree by degree up to `max_deg`.
pub fn presentation_check(
    ctx: &Context,
    lambda: &[Symbol],
    i0: i64,
    max_deg: u32,
) -> Result<SyzygyCheck> {
    check_level(ctx.f, i0)?;
    let f = ctx.f;
    let st = stats(ctx, lambda)?;
    let a = ideal_of_kinds(&st.t);
    let (j1, j2) = (st.j1_mask(), st.j2_mask());
    let e = j1 | j2;
    let d = st.d_for(i0);
    let gens: Vec<u64> = submasks(e)
        .into_iter()
        .filter(|s| s.count_ones() as usize == d)
        .collect();
    let gen_index = |s: u64| gens.iter().position(|&g| g == s).expect("generator");
    let std_mons = MonomialIdeal::unit(2 * f).monomials_outside(&a, max_deg + d as u32);
    let by_deg = |t: u32| -> Vec<&Monomial> { std_mons.iter().filter(|m| degree(m) == t).collect() };
    let used_var = |i: usize| if j1 >> i & 1 == 1 { 2 * i } else { 2 * i + 1 };
    let other_var = |i: usize| used_var(i) ^ 1;

    // relations as lists of (coefficient, variable, generator)
    let mut relations: Vec<Vec<(i64, usize, usize)>> = Vec::new();
    for &g in &gens {
        for i in bits(g) {
            relations.push(vec![(1, other_var(i), gen_index(g))]);
        }
    }
    for big in submasks(e)
        .into_iter()
        .filter(|s| s.count_ones() as usize == d + 1)
    {
        let idx = bits(big);
        for (x, &i) in idx.iter().enumerate() {
            for &j in &idx[x + 1..] {
                relations.push(vec![
                    (1, used_var(i), gen_index(big & !(1 << i))),
                    (-1, used_var(j), gen_index(big & !(1 << j))),
                ]);
            }
        }
    }

    let p_of = |g: usize| p_monomial(f, j1, j2, gens[g]);
    let mut relations_in_kernel = true;
    for rel in &relations {
        let mut image: std::collections::BTreeMap<Monomial, i64> = Default::default();
        for &(c, v, g) in rel {
            let m = mul(&var(f, v), &p_of(g));
            if !a.contains(&m) {
                *image.entry(m).or_insert(0) += c;
            }
        }
        if image.values().any(|&c| c != 0) {
            relations_in_kernel = false;
        }
    }

    let mut degrees = Vec::new();
    for t in 1..=max_deg {
        let domain = by_deg(t);
        let target = by_deg(t + d as u32);
        let col_of = |m: &Monomial, target: &[&Monomial]| target.iter().position(|x| *x == m);
        // presentation map in degree t
        let mut phi = SparseMatrix::new(target.len().max(1));
        for g in 0..gens.len() {
            for m in &domain {
                let prod = mul(m, &p_of(g));
                let row = if a.contains(&prod) {
                    vec![]
                } else {
                    vec![(col_of(&prod, &target).expect("standard monomial"), 1)]
                };
                phi.push_row(row);
            }
        }
        let free_dim = gens.len() * domain.len();
        let kernel = free_dim - phi.rank(Field::Rational);
        // relations times monomials of degree t - 1
        let fcol = |m: &Monomial, g: usize| -> Option<usize> {
            col_of(m, &domain).map(|c| g * domain.len() + c)
        };
        let mut span = SparseMatrix::new(free_dim.max(1));
        for rel in &relations {
            for m in by_deg(t - 1) {
                let mut row = Vec::new();
                for &(c, v, g) in rel {
                    let prod = mul(m, &var(f, v));
                    if !a.contains(&prod) {
                        row.push((fcol(&prod, g).expect("standard monomial"), c));
                    }
                }
                span.push_row(row);
            }
        }
        degrees.push((t, kernel, span.rank(Field::Rational)));
    }
    Ok(SyzygyCheck {
        generators: gens.len(),
        degrees,
        relations_in_kernel,
    })
}
