//! Tor of monomial quotients, computed from reduced homology of induced
//! subcomplexes (Hochster's formula) or from the Taylor complex, plus the
//! closed forms for the Stanley–Reisner ideals that arise from profiles.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideals::{lcm, Monomial, MonomialIdeal};
use crate::linalg::{Field, SparseMatrix};
use crate::series::binomial;

/// Largest vertex count accepted by [`hochster_tor`].
pub const MAX_HOCHSTER_VARS: usize = 20;
/// Largest generator count accepted by [`taylor_tor`].
pub const MAX_TAYLOR_GENS: usize = 22;

/// Simplicial complex on vertices `0..nverts`, given by its minimal
/// non-faces as bitmasks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialComplex {
    pub nverts: usize,
    pub min_nonfaces: Vec<u64>,
}

impl SimplicialComplex {
    pub fn new(nverts: usize, min_nonfaces: Vec<u64>) -> Self {
        SimplicialComplex {
            nverts,
            min_nonfaces,
        }
    }

    /// Stanley–Reisner complex of a squarefree monomial ideal.
    pub fn from_ideal(ideal: &MonomialIdeal) -> Result<Self> {
        if !ideal.is_squarefree() {
            return Err(Error::NotSquarefree(ideal.to_string()));
        }
        let nonfaces = ideal
            .gens()
            .iter()
            .map(|g| {
                g.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .fold(0u64, |m, (i, _)| m | 1 << i)
            })
            .collect();
        Ok(Self::new(ideal.nvars(), nonfaces))
    }

    pub fn is_face(&self, s: u64) -> bool {
        !self.min_nonfaces.iter().any(|&n| n & s == n)
    }

    /// Faces contained in `within`, grouped by cardinality.
    pub fn faces_within(&self, within: u64) -> Vec<Vec<u64>> {
        let mut by_size: Vec<Vec<u64>> = Vec::new();
        if !self.is_face(0) {
            return by_size;
        }
        let verts: Vec<usize> = (0..self.nverts).filter(|v| within >> v & 1 == 1).collect();
        fn rec(cx: &SimplicialComplex, verts: &[usize], start: usize, cur: u64, size: usize, out: &mut Vec<Vec<u64>>) {
            if out.len() <= size {
                out.resize(size + 1, Vec::new());
            }
            out[size].push(cur);
            for i in start..verts.len() {
                let next = cur | 1 << verts[i];
                if cx.is_face(next) {
                    rec(cx, verts, i + 1, next, size + 1, out);
                }
            }
        }
        rec(self, &verts, 0, 0, 0, &mut by_size);
        for v in &mut by_size {
            v.sort_unstable();
        }
        by_size
    }

    /// Induced subcomplex on the vertex set `w`.
    pub fn induced(&self, w: u64) -> SimplicialComplex {
        let nonfaces = self
            .min_nonfaces
            .iter()
            .copied()
            .filter(|&n| n & w == n)
            .collect();
        SimplicialComplex::new(self.nverts, nonfaces).restricted_to(w)
    }

    fn restricted_to(mut self, w: u64) -> Self {
        // vertices outside w become non-faces
        for v in 0..self.nverts {
            if w >> v & 1 == 0 {
                self.min_nonfaces.push(1 << v);
            }
        }
        self
    }

    /// Reduced homology dimensions, indexed from dimension `-1`.
    ///
    /// The complex `{∅}` has `H_{-1}` of dimension one; the void complex
    /// (no faces at all) has no homology.
    pub fn reduced_homology_dims(&self, field: Field) -> Vec<usize> {
        homology_of_faces(&self.faces_within(full(self.nverts)), field)
    }
}

fn full(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Reduced homology from faces grouped by cardinality; entry `k + 1` is
/// `dim H_k`.
fn homology_of_faces(faces: &[Vec<u64>], field: Field) -> Vec<usize> {
    if faces.is_empty() {
        return Vec::new();
    }
    // ranks[s] = rank of the boundary from faces of size s to size s - 1
    let mut ranks = vec![0usize; faces.len() + 1];
    for s in 1..faces.len() {
        let index: HashMap<u64, usize> = faces[s - 1]
            .iter()
            .enumerate()
            .map(|(i, &f)| (f, i))
            .collect();
        let mut m = SparseMatrix::new(faces[s - 1].len());
        for &face in &faces[s] {
            let mut row = Vec::with_capacity(s);
            let mut sign = 1i64;
            for v in 0..64 {
                if face >> v & 1 == 1 {
                    row.push((index[&(face & !(1 << v))], sign));
                    sign = -sign;
                }
            }
            m.push_row(row);
        }
        ranks[s] = m.rank(field);
    }
    (0..faces.len())
        .map(|s| faces[s].len() - ranks[s] - ranks[s + 1])
        .collect()
}

/// `dim Tor_i(R/I, k)` for `0 <= i <= max_i` by Hochster's formula:
/// the sum over vertex subsets `W` of `dim H_{|W| - i - 1}(Δ_W)`.
pub fn hochster_tor(ideal: &MonomialIdeal, max_i: usize, field: Field) -> Result<Vec<usize>> {
    let cx = SimplicialComplex::from_ideal(ideal)?;
    if cx.nverts > MAX_HOCHSTER_VARS {
        return Err(Error::SizeLimit(format!(
            "{} variables exceeds the limit {MAX_HOCHSTER_VARS}",
            cx.nverts
        )));
    }
    let mut tor = vec![0usize; max_i + 1];
    for w in 0..=full(cx.nverts) {
        let h = homology_of_faces(&cx.faces_within(w), field);
        let size = w.count_ones() as i64;
        for (idx, &dim) in h.iter().enumerate() {
            if dim == 0 {
                continue;
            }
            // homological degree k = idx - 1 contributes to i = |W| - k - 1
            let i = size - idx as i64;
            if i >= 0 && (i as usize) <= max_i {
                tor[i as usize] += dim;
            }
        }
    }
    Ok(tor)
}

/// `dim Tor_i(R/I, k)` for `0 <= i <= max_i` from the Taylor complex.
///
/// After tensoring with the residue field the differential keeps only the
/// faces `S \ {g}` with the same lcm as `S`, so the complex splits by lcm.
pub fn taylor_tor(ideal: &MonomialIdeal, max_i: usize, field: Field) -> Result<Vec<usize>> {
    let gens = ideal.gens();
    let g = gens.len();
    if g > MAX_TAYLOR_GENS {
        return Err(Error::SizeLimit(format!(
            "{g} generators exceeds the Taylor limit {MAX_TAYLOR_GENS}"
        )));
    }
    let n = 1usize << g;
    let mut lcms: Vec<Monomial> = Vec::with_capacity(n);
    lcms.push(vec![0; ideal.nvars()]);
    for s in 1..n {
        let low = s.trailing_zeros() as usize;
        lcms.push(lcm(&lcms[s & (s - 1)], &gens[low]));
    }
    let mut groups: HashMap<&Monomial, Vec<usize>> = HashMap::new();
    for (s, m) in lcms.iter().enumerate() {
        groups.entry(m).or_default().push(s);
    }
    let mut tor = vec![0usize; max_i + 1];
    let mut keys: Vec<&&Monomial> = groups.keys().collect();
    keys.sort();
    for key in keys {
        let members = &groups[*key];
        let mut by_size: Vec<Vec<usize>> = vec![Vec::new(); g + 2];
        for &s in members {
            by_size[s.count_ones() as usize].push(s);
        }
        let rank_between = |hi: usize| -> usize {
            if hi == 0 || hi > g || by_size[hi].is_empty() || by_size[hi - 1].is_empty() {
                return 0;
            }
            let index: HashMap<usize, usize> = by_size[hi - 1]
                .iter()
                .enumerate()
                .map(|(i, &s)| (s, i))
                .collect();
            let mut m = SparseMatrix::new(by_size[hi - 1].len());
            for &s in &by_size[hi] {
                let mut row = Vec::new();
                let mut sign = 1i64;
                for b in 0..g {
                    if s >> b & 1 == 1 {
                        if let Some(&c) = index.get(&(s & !(1 << b))) {
                            row.push((c, sign));
                        }
                        sign = -sign;
                    }
                }
                m.push_row(row);
            }
            m.rank(field)
        };
        for (i, slot) in tor.iter_mut().enumerate() {
            if i > g || by_size[i].is_empty() {
                continue;
            }
            *slot += by_size[i].len() - rank_between(i) - rank_between(i + 1);
        }
    }
    Ok(tor)
}

/// Which oracle to use for Tor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TorMethod {
    Hochster,
    Taylor,
}

pub fn tor_dims(ideal: &MonomialIdeal, max_i: usize, method: TorMethod) -> Result<Vec<usize>> {
    match method {
        TorMethod::Hochster => hochster_tor(ideal, max_i, Field::Rational),
        TorMethod::Taylor => taylor_tor(ideal, max_i, Field::Rational),
    }
}

/// `(X_j Y_j : j < k) + (Y_i Y_j : i < j < k)` in variables
/// `X_0, Y_0, X_1, Y_1, ..`.
pub fn sr_ideal(k: usize) -> MonomialIdeal {
    padded_ideal_raw(k, k, k)
}

/// Closed form `dim Tor_i` of [`sr_ideal`]: `1` for `i = 0`, else
/// `i * C(k + 1, i + 1)`.
pub fn sr_tor_closed(k: usize, i: usize) -> BigInt {
    if i == 0 {
        BigInt::from(1)
    } else {
        BigInt::from(i) * binomial(k as u64 + 1, i as u64 + 1)
    }
}

fn padded_ideal_raw(k: usize, ell: usize, nz_total: usize) -> MonomialIdeal {
    // nz_total counts X_jY_j pairs plus Z variables: 2f = ell + #Z
    let nz = nz_total.saturating_sub(ell);
    let n = 2 * ell + nz;
    let mut gens = Vec::new();
    let unit2 = |a: usize, b: usize| -> Monomial {
        let mut m = vec![0; n];
        m[a] = 1;
        m[b] = 1;
        m
    };
    for j in 0..ell {
        gens.push(unit2(2 * j, 2 * j + 1));
    }
    for i in 0..k {
        for j in i + 1..k {
            gens.push(unit2(2 * i + 1, 2 * j + 1));
        }
    }
    for m in 0..nz {
        let mut g = vec![0; n];
        g[2 * ell + m] = 1;
        gens.push(g);
    }
    MonomialIdeal::new(n, gens).expect("consistent lengths")
}

/// `(X_j Y_j : j < ell) + (Y_i Y_j : i < j < k) + (Z_m : ell <= m < 2f)`.
pub fn padded_ideal(f: usize, k: usize, ell: usize) -> Result<MonomialIdeal> {
    if k > ell || ell > f {
        return Err(Error::InvalidArgument(format!(
            "need k <= ell <= f, got k = {k}, ell = {ell}, f = {f}"
        )));
    }
    Ok(padded_ideal_raw(k, ell, 2 * f))
}

fn check_k(f: usize, k: usize) -> Result<()> {
    if k > f {
        return Err(Error::InvalidArgument(format!("need k <= f, got k = {k}, f = {f}")));
    }
    Ok(())
}

/// Closed forms for `dim Ext^i`, `i = 0, 1, 2`:
/// `1`, `2f + C(k,2)` and `2f^2 + (k^2 - k - 1) f - C(k+1,3)`.
pub fn ext_dims(f: usize, k: usize) -> Result<[BigInt; 3]> {
    check_k(f, k)?;
    let fb = BigInt::from(f);
    let kb = BigInt::from(k);
    let e1 = BigInt::from(2 * f) + binomial(k as u64, 2);
    let e2 = BigInt::from(2) * &fb * &fb + (&kb * &kb - &kb - 1) * &fb
        - binomial(k as u64 + 1, 3);
    Ok([BigInt::from(1), e1, e2])
}

/// The same numbers as a Koszul product:
/// `sum_j C(2f - k, i - j) * dim Tor_j` of [`sr_ideal`]`(k)`.
pub fn ext_dims_product(f: usize, k: usize) -> Result<[BigInt; 3]> {
    check_k(f, k)?;
    let pad = (2 * f - k) as u64;
    let e = |i: usize| -> BigInt {
        (0..=i)
            .map(|j| binomial(pad, (i - j) as u64) * sr_tor_closed(k, j))
            .sum()
    };
    Ok([e(0), e(1), e(2)])
}

/// `dim Tor_i` for `i <= 2` of the padded ideal computed by an oracle.
pub fn ext_dims_oracle(f: usize, k: usize, ell: usize, method: TorMethod) -> Result<[usize; 3]> {
    let t = tor_dims(&padded_ideal(f, k, ell)?, 2, method)?;
    Ok([t[0], t[1], t[2]])
}

/// `2f^2 + f + C(k+1, 3)`.
pub fn ext1_lower_bound(f: usize, k: usize) -> BigInt {
    BigInt::from(2 * f * f + f) + binomial(k as u64 + 1, 3)
}

/// Whether the lower bound equals `2f * dim Ext^1 - dim Ext^2`.
pub fn ext1_bound_identity(f: usize, k: usize) -> Result<bool> {
    let [_, e1, e2] = ext_dims(f, k)?;
    Ok(ext1_lower_bound(f, k) == BigInt::from(2 * f) * e1 - e2)
}
