//! Graded dimensions of `HY`, `H_KR`, specializations, normalization,
//! splitting-map images and the q↔t symmetry diagnostic.

use crate::algebra::linalg::{collect_vec, kernel, rank, ColMat, SparseVec};
use crate::algebra::{Floor, GradedDims, Mono, PolyMat, Rat, SeriesError, SeriesWindow, TriDeg};
use crate::braid::{BraidWord, ClosureInfo};
use crate::complex::BComplex;
use crate::soergel::Bimodule;
use crate::hochschild::{assemble_cy, induced_map, monomials, theta_action, CYData, HHComplex};
use crate::yify::{fy, splitting_composite, YComplex, YMap, YifyError};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HomologyError {
    #[error(transparent)]
    Window(#[from] SeriesError),
    #[error("normalization parity violated: e={0}, n={1}, r={2}")]
    Parity(i64, usize, usize),
    #[error("expected {0} coefficients (one per component), got {1}")]
    ComponentCount(usize, usize),
    #[error("braid closure is not pure")]
    NotPure,
    #[error(transparent)]
    Yify(#[from] YifyError),
    #[error("no cell of the window could be validated")]
    EmptyWindow,
}

/// Runs `f` on a pool with the given number of threads (0 = rayon default).
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    if threads == 0 {
        return f();
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
    pool.install(f)
}

/// One summand `HH^{(Q+2|ν|, A)}(chain k) · y^ν` of a CY cell.
#[derive(Clone, Debug)]
struct Block {
    k: i32,
    nu: Mono,
    q: i32,
    offset: usize,
}

#[derive(Clone, Debug)]
struct CellSpace {
    blocks: Vec<Block>,
    index: HashMap<(i32, Mono), usize>,
    dim: usize,
}

fn candidate_blocks(data: &CYData, q: i32, a: i32, t: i32) -> Vec<(i32, Mono, i32)> {
    let mut out = Vec::new();
    if a < 0 || a as usize > data.n {
        return out;
    }
    for k in data.k_min..=data.k_max() {
        let rest = t - k;
        if rest < 0 || rest % 2 != 0 {
            continue;
        }
        let d = (rest / 2) as u32;
        if data.r == 0 && d > 0 {
            continue;
        }
        for nu in monomials(data.r, d) {
            out.push((k, nu, q + 2 * d as i32));
        }
    }
    out
}

fn cell_space(data: &CYData, c: TriDeg) -> CellSpace {
    let mut blocks = Vec::new();
    let mut index = HashMap::new();
    let mut off = 0;
    for (k, nu, q) in candidate_blocks(data, c.q, c.a, c.t) {
        let dim = data.hh_dim(k, q, c.a as usize);
        if dim == 0 {
            continue;
        }
        index.insert((k, nu), blocks.len());
        blocks.push(Block { k, nu, q, offset: off });
        off += dim;
    }
    CellSpace { blocks, index, dim: off }
}

/// The differential `CY(Q,A,T) → CY(Q,A,T+1)` as columns; `weight` gives the
/// scalar multiplying component `ci` (1 for the y-ified complex).
fn differential(data: &CYData, a: i32, src: &CellSpace, tgt: &CellSpace, weight: &dyn Fn(usize) -> Option<Rat>) -> ColMat {
    let mut cols: Vec<Vec<(u32, Rat)>> = vec![Vec::new(); src.dim];
    for b in &src.blocks {
        for (ci, comp) in data.comps.iter().enumerate() {
            if comp.k != b.k {
                continue;
            }
            let Some(w) = weight(ci) else { continue };
            let Some(&ti) = tgt.index.get(&(comp.target_k(), b.nu.mul(comp.nu))) else { continue };
            let tb = &tgt.blocks[ti];
            let m = data.induced(ci, b.q, a as usize).expect("induced map computed");
            for (j, col) in m.cols.iter().enumerate() {
                for (i, x) in col {
                    cols[b.offset + j].push((tb.offset as u32 + i, x * &w));
                }
            }
        }
    }
    ColMat { nrows: tgt.dim, cols: cols.into_iter().map(collect_vec).collect() }
}

/// Ensures every HH cell and induced map needed for the given `(Q,A,T)` cells
/// and their outgoing differentials.
fn prepare(data: &mut CYData, cells: &BTreeSet<TriDeg>) {
    let mut want = BTreeSet::new();
    for c in cells {
        for (k, _, q) in candidate_blocks(data, c.q, c.a, c.t) {
            want.insert((k, q, c.a as usize));
        }
    }
    data.ensure_cells(&want);
    let mut maps = BTreeSet::new();
    for c in cells {
        if !cells.contains(&TriDeg::new(c.q, c.a, c.t + 1)) {
            continue;
        }
        for (k, _, q) in candidate_blocks(data, c.q, c.a, c.t) {
            if data.hh_dim(k, q, c.a as usize) == 0 {
                continue;
            }
            for (ci, comp) in data.comps.iter().enumerate() {
                if comp.k == k && data.hh_dim(comp.target_k(), q + 2 * comp.nu.degree() as i32, c.a as usize) > 0 {
                    maps.insert((ci, q, c.a as usize));
                }
            }
        }
    }
    data.ensure_maps(&maps);
}

/// Graded dimensions of the homology of `CY` on a window of raw cells.
pub fn cy_dims(data: &mut CYData, window: &SeriesWindow) -> GradedDims {
    let floor = data.floor();
    let targets: Vec<TriDeg> = window.cells().into_iter().filter(|c| !floor.below(*c) && c.a as usize <= data.n).collect();
    let mut needed = BTreeSet::new();
    for c in &targets {
        for dt in -1..=1 {
            needed.insert(TriDeg::new(c.q, c.a, c.t + dt));
        }
    }
    prepare(data, &needed);
    let data = &*data;
    let spaces: BTreeMap<TriDeg, CellSpace> = needed.par_iter().map(|c| (*c, cell_space(data, *c))).collect();
    let one = |_: usize| Some(Rat::one());
    let trans: Vec<TriDeg> = needed.iter().filter(|c| spaces.contains_key(&TriDeg::new(c.q, c.a, c.t + 1))).copied().collect();
    let diffs: BTreeMap<TriDeg, ColMat> = trans
        .par_iter()
        .map(|c| {
            let tgt = &spaces[&TriDeg::new(c.q, c.a, c.t + 1)];
            (*c, differential(data, c.a, &spaces[c], tgt, &one))
        })
        .collect();
    let ranks: BTreeMap<TriDeg, usize> = diffs.par_iter().map(|(c, m)| (*c, m.rank())).collect();
    targets.par_iter().for_each(|c| {
        let lo = TriDeg::new(c.q, c.a, c.t - 1);
        if let (Some(d0), Some(d1)) = (diffs.get(&lo), diffs.get(c)) {
            assert!(d1.mul(d0).is_zero(), "induced differential does not square to zero at {c}");
        }
    });
    let mut out = GradedDims::new(*window, floor);
    for c in window.cells() {
        if floor.below(c) || c.a as usize > data.n {
            out.set(c, 0);
            continue;
        }
        let dim = spaces[&c].dim;
        let r_out = ranks[&c];
        let r_in = ranks[&TriDeg::new(c.q, c.a, c.t - 1)];
        out.set(c, (dim - r_out - r_in) as i64);
    }
    out
}

/// `HY` of a curved complex on a raw window.
pub fn hy_complex(y: &YComplex, window: &SeriesWindow) -> GradedDims {
    let mut data = assemble_cy(y, true);
    cy_dims(&mut data, window)
}

/// `HY(β)` on a raw window (no normalization).
pub fn hy(b: &BraidWord, window: &SeriesWindow) -> GradedDims {
    hy_complex(&fy(b), window)
}

/// `H_KR(β) = HY(β)|_{y=0}` on a raw window.
pub fn hkr(b: &BraidWord, window: &SeriesWindow) -> GradedDims {
    hkr_complex(&fy(b), window)
}

pub fn hkr_complex(y: &YComplex, window: &SeriesWindow) -> GradedDims {
    let mut data = assemble_cy(y, false);
    cy_dims(&mut data, window)
}

/// Collapsed cell `(s, a)` stored as the raw cell with doubled `q`-exponent `s` and `t = 0`.
pub fn collapsed_cell(s: i32, a: i32) -> TriDeg {
    TriDeg::from_doubled_qta(s, 0, a)
}

/// Homology with `y_c` specialized to `nu[c]` (one value per closure component),
/// graded by `(s, a)` with `s = Q + T + 2A`. Computes `s_min ≤ s ≤ s_max`.
pub fn hy_with_coeffs(b: &BraidWord, nu: &[Rat], s_min: i32, s_max: i32, a_max: i32) -> Result<GradedDims, HomologyError> {
    hy_with_coeffs_complex(&fy(b), nu, s_min, s_max, a_max)
}

/// [`hy_with_coeffs`] for an already built curved complex.
pub fn hy_with_coeffs_complex(y: &YComplex, nu: &[Rat], s_min: i32, s_max: i32, a_max: i32) -> Result<GradedDims, HomologyError> {
    let mut seen = vec![false; y.n];
    let mut components = 0;
    for s in 0..y.n {
        let mut j = s;
        if !seen[s] {
            components += 1;
        }
        while !seen[j] {
            seen[j] = true;
            j = y.w[j];
        }
    }
    if nu.len() != components {
        return Err(HomologyError::ComponentCount(components, nu.len()));
    }
    let mut data = assemble_cy(y, true);
    let a_max = a_max.min(y.n as i32);
    let weights: Vec<Option<Rat>> = data
        .comps
        .iter()
        .map(|c| {
            let mut w = Rat::one();
            for (i, v) in nu.iter().enumerate() {
                w = &w * &v.pow(c.nu.exp(i));
            }
            (!w.is_zero()).then_some(w)
        })
        .collect();
    let ks: Vec<i32> = (data.k_min..=data.k_max()).collect();
    // A collapsed cell (s, a) is ⊕_k HH^{(s − k − 2a, a)}(chain k).
    let space = |data: &CYData, s: i32, a: i32| -> Vec<(i32, i32, usize, usize)> {
        let mut v = Vec::new();
        let mut off = 0;
        for &k in &ks {
            let q = s - k - 2 * a;
            let d = data.hh_dim(k, q, a as usize);
            if d > 0 {
                v.push((k, q, d, off));
                off += d;
            }
        }
        v
    };
    let mut want = BTreeSet::new();
    for s in s_min - 1..=s_max + 1 {
        for a in 0..=a_max {
            for &k in &ks {
                want.insert((k, s - k - 2 * a, a as usize));
            }
        }
    }
    data.ensure_cells(&want);
    let mut maps = BTreeSet::new();
    for (k, q, a) in &want {
        for (ci, c) in data.comps.iter().enumerate() {
            if c.k == *k && weights[ci].is_some() && data.hh_dim(*k, *q, *a) > 0 {
                let tq = q + 2 * c.nu.degree() as i32;
                if data.hh_cell(c.target_k(), tq, *a).is_none() {
                    continue;
                }
                maps.insert((ci, *q, *a));
            }
        }
    }
    data.ensure_maps(&maps);
    let data = &data;
    let rank_at = |s: i32, a: i32| -> usize {
        let src = space(data, s, a);
        let tgt = space(data, s + 1, a);
        let tdim: usize = tgt.iter().map(|b| b.2).sum();
        let sdim: usize = src.iter().map(|b| b.2).sum();
        let mut cols: Vec<Vec<(u32, Rat)>> = vec![Vec::new(); sdim];
        for &(k, q, _, off) in &src {
            for (ci, c) in data.comps.iter().enumerate() {
                let Some(w) = &weights[ci] else { continue };
                if c.k != k {
                    continue;
                }
                let Some(&(_, _, _, toff)) = tgt.iter().find(|b| b.0 == c.target_k()) else { continue };
                let m = data.induced(ci, q, a as usize).expect("induced map computed");
                for (j, col) in m.cols.iter().enumerate() {
                    for (i, x) in col {
                        cols[off + j].push((toff as u32 + i, x * w));
                    }
                }
            }
        }
        rank(tdim, cols.into_iter().map(collect_vec))
    };
    let cells: Vec<(i32, i32)> = (s_min - 1..=s_max).flat_map(|s| (0..=a_max).map(move |a| (s, a))).collect();
    let ranks: BTreeMap<(i32, i32), usize> = cells.par_iter().map(|&(s, a)| ((s, a), rank_at(s, a))).collect();
    let window = SeriesWindow { q_min: s_min, q_max: s_max, a_min: 0, a_max, t_min: 0, t_max: 0 };
    let mut out = GradedDims::new(window, Floor::NONE);
    for s in s_min..=s_max {
        for a in 0..=a_max {
            let dim: usize = space(data, s, a).iter().map(|b| b.2).sum();
            out.set(collapsed_cell(s, a), (dim - ranks[&(s, a)] - ranks[&(s - 1, a)]) as i64);
        }
    }
    Ok(out)
}

/// Sums a table over `t` into collapsed cells `(s = Q + T + 2A, a)`. A collapsed
/// cell is valid when every cell of the window contributing to it is known.
pub fn collapse(g: &GradedDims) -> GradedDims {
    let w = g.window;
    let cw = SeriesWindow { q_min: w.q_min, q_max: w.q_max, a_min: w.a_min, a_max: w.a_max, t_min: 0, t_max: 0 };
    let mut out = GradedDims::new(cw, Floor { q2: g.floor.q2, t2: 0, a: g.floor.a });
    for s in w.q_min..=w.q_max {
        for a in w.a_min..=w.a_max {
            let mut acc = 0;
            let mut known = true;
            for t2 in w.t_min..=w.t_max {
                match g.get(TriDeg::from_doubled_qta(s, t2, a)) {
                    Some(v) => acc += v,
                    None => known = false,
                }
            }
            if known {
                out.set(collapsed_cell(s, a), acc);
            }
        }
    }
    out
}

/// Shift of a collapsed table by the collapsed image of `d`.
pub fn shift_collapsed(g: &GradedDims, d: TriDeg) -> GradedDims {
    let (q2, _, _) = d.doubled_qta();
    let mut out = GradedDims::new(
        SeriesWindow { q_min: g.window.q_min + q2, q_max: g.window.q_max + q2, a_min: g.window.a_min + d.a, a_max: g.window.a_max + d.a, t_min: 0, t_max: 0 },
        Floor { q2: g.floor.q2 + q2, t2: 0, a: g.floor.a + d.a },
    );
    for c in &g.valid {
        let (s, _, _) = c.doubled_qta();
        out.set(collapsed_cell(s + q2, c.a + d.a), g.get(*c).unwrap());
    }
    out
}

/// Normalization data of a closure: writhe `e`, strands `n`, components `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    pub e: i64,
    pub n: usize,
    pub r: usize,
}

impl Normalization {
    pub fn of(info: &ClosureInfo, n: usize) -> Normalization {
        Normalization { e: info.writhe, n, r: info.components() }
    }

    /// The relabeling `(Q, A, T) ↦ (Q − e + 2n − 2r, A + (e − n + r)/2, T + (−e − n + r)/2)`.
    pub fn shift(&self) -> Result<TriDeg, HomologyError> {
        let (e, n, r) = (self.e, self.n as i64, self.r as i64);
        if (e - n + r).rem_euclid(2) != 0 {
            return Err(HomologyError::Parity(self.e, self.n, self.r));
        }
        Ok(TriDeg::new((-e + 2 * n - 2 * r) as i32, ((e - n + r) / 2) as i32, ((-e - n + r) / 2) as i32))
    }
}

/// Applies the normalization shift.
pub fn normalize(g: &GradedDims, norm: &Normalization) -> Result<GradedDims, HomologyError> {
    Ok(g.shift(norm.shift()?))
}

/// The raw window whose normalization is `window`.
pub fn raw_window(window: &SeriesWindow, norm: &Normalization) -> Result<SeriesWindow, HomologyError> {
    Ok(window.shifted(-norm.shift()?))
}

/// Multiplies by `(1 − q)(1 − t)` and divides by `(1 + a)`: the ratio to the unknot.
pub fn reduced_ratio(g: &GradedDims) -> GradedDims {
    let q = TriDeg::from_qta(1, 0, 0);
    let t = TriDeg::from_qta(0, 1, 0);
    let poly = [(TriDeg::ZERO, 1), (q, -1), (t, -1), (q + t, 1)];
    g.mul_poly(&poly).div_one_plus(TriDeg::from_qta(0, 0, 1))
}

/// `H_KR`-level ratio: multiplies by `(1 − q)` and divides by `(1 + a)`.
pub fn reduced_ratio_hkr(g: &GradedDims) -> GradedDims {
    let q = TriDeg::from_qta(1, 0, 0);
    g.mul_poly(&[(TriDeg::ZERO, 1), (q, -1)]).div_one_plus(TriDeg::from_qta(0, 0, 1))
}

/// Groups the components of a map of curved complexes by cycle monomial.
fn group_map(f: &YMap, comp_of: &[usize]) -> Vec<(Mono, i32, PolyMat)> {
    let mut grouped: BTreeMap<(Mono, i32), PolyMat> = BTreeMap::new();
    for ((m, k), mat) in &f.comps {
        let mut nu = Mono::ONE;
        for (i, &c) in comp_of.iter().enumerate() {
            let e = m.exp(i);
            if e > 0 {
                nu = nu.with_exp(c, nu.exp(c) + e);
            }
        }
        match grouped.get_mut(&(nu, *k)) {
            Some(acc) => *acc = acc.add(mat),
            None => {
                grouped.insert((nu, *k), mat.clone());
            }
        }
    }
    grouped.into_iter().filter(|(_, m)| !m.is_zero()).map(|((nu, k), m)| (nu, k, m)).collect()
}

/// Dimensions of the image of `HY(β) → HY(1)` under the composite of
/// crossing-change maps at `flips` (the second half of `u·reverse(u)` by default).
pub fn splitting_image_dims(b: &BraidWord, flips: Option<&[usize]>, window: &SeriesWindow) -> Result<GradedDims, HomologyError> {
    let info = b.closure();
    if !info.is_pure() {
        return Err(HomologyError::NotPure);
    }
    let flips: Vec<usize> = match flips {
        Some(f) => f.to_vec(),
        None => crate::yify::default_flips(b)
            .ok_or_else(|| YifyError::Invalid("no default flip set; pass the crossings to change".into()))?,
    };
    let phi = splitting_composite(b, &flips)?;
    let comp_of: Vec<usize> = (0..b.n).collect();
    let mut src = assemble_cy(&phi.source, true);
    let mut tgt = assemble_cy(&phi.target, true);
    let floor = src.floor();
    let targets: Vec<TriDeg> = window.cells().into_iter().filter(|c| !floor.below(*c) && c.a as usize <= b.n).collect();
    let mut needed = BTreeSet::new();
    for c in &targets {
        needed.insert(*c);
        needed.insert(TriDeg::new(c.q, c.a, c.t + 1));
    }
    prepare(&mut src, &needed);
    prepare(&mut tgt, &targets.iter().copied().collect());
    let parts = group_map(&phi, &comp_of);
    let mut out = GradedDims::new(*window, floor);
    for c in window.cells() {
        if floor.below(c) || c.a as usize > b.n {
            out.set(c, 0);
        }
    }
    let (src, tgt) = (&src, &tgt);
    let one = |_: usize| Some(Rat::one());
    let results: Vec<(TriDeg, i64)> = targets
        .par_iter()
        .map(|c| {
            let s = cell_space(src, *c);
            let s1 = cell_space(src, TriDeg::new(c.q, c.a, c.t + 1));
            let t = cell_space(tgt, *c);
            let d = differential(src, c.a, &s, &s1, &one);
            let cycles = kernel(s1.dim, &d.cols);
            let mut cols: Vec<Vec<(u32, Rat)>> = vec![Vec::new(); s.dim];
            for blk in &s.blocks {
                let hs = src.hh_cell(blk.k, blk.q, c.a as usize).unwrap();
                for (nu, k, mat) in &parts {
                    if *k != blk.k {
                        continue;
                    }
                    let tk = k - 2 * nu.degree() as i32;
                    let Some(&ti) = t.index.get(&(tk, blk.nu.mul(*nu))) else { continue };
                    let tb = &t.blocks[ti];
                    let ht = tgt.hh_cell(tb.k, tb.q, c.a as usize).unwrap();
                    let m = induced_map(mat, &hs, &ht);
                    for (j, col) in m.cols.iter().enumerate() {
                        for (i, x) in col {
                            cols[blk.offset + j].push((tb.offset as u32 + i, x.clone()));
                        }
                    }
                }
            }
            let phi_mat = ColMat { nrows: t.dim, cols: cols.into_iter().map(collect_vec).collect() };
            let img: Vec<SparseVec> = cycles.iter().map(|z| phi_mat.apply(z)).collect();
            (*c, rank(t.dim, img) as i64)
        })
        .collect();
    for (c, v) in results {
        out.set(c, v);
    }
    Ok(out)
}

fn degree_basis(m: &Bimodule, q: i32) -> Vec<(u32, Mono)> {
    let mut out = Vec::new();
    for (p, &s) in m.shifts.iter().enumerate() {
        let d2 = q - s;
        if d2 >= 0 && d2 % 2 == 0 {
            out.extend(monomials(m.n, (d2 / 2) as u32).into_iter().map(|mu| (p as u32, mu)));
        }
    }
    out
}

fn degree_map(d: &PolyMat, src: &Bimodule, tgt: &Bimodule, q: i32) -> ColMat {
    let sb = degree_basis(src, q);
    let tb = degree_basis(tgt, q);
    let index: HashMap<(u32, Mono), u32> = tb.iter().enumerate().map(|(i, k)| (*k, i as u32)).collect();
    let mut by_col: Vec<Vec<(u32, Vec<(Mono, Rat)>)>> = vec![Vec::new(); d.cols];
    for (r, c, f) in d.iter() {
        by_col[c].push((r as u32, f.terms().to_vec()));
    }
    let cols = sb
        .iter()
        .map(|(p, mu)| {
            let mut v = Vec::new();
            for (r, terms) in &by_col[*p as usize] {
                for (nu, c) in terms {
                    v.push((index[&(*r, mu.mul(*nu))], c.clone()));
                }
            }
            collect_vec(v)
        })
        .collect();
    ColMat { nrows: tb.len(), cols }
}

/// Dimensions of `H^k` of a complex of bimodules in internal degree `q`, as left
/// `ℚ[x]`-modules, for `q_min ≤ q ≤ q_max`. Keys are `(k, q)`; zeros are omitted.
pub fn degreewise_homology(c: &BComplex, q_min: i32, q_max: i32) -> BTreeMap<(i32, i32), usize> {
    let mut out = BTreeMap::new();
    for q in q_min..=q_max {
        let mut ranks = BTreeMap::new();
        for (k, d) in &c.d {
            let m = degree_map(d, c.at(*k).unwrap(), c.at(k + 1).unwrap(), q);
            ranks.insert(*k, m.rank());
        }
        for (i, b) in c.chain.iter().enumerate() {
            let k = c.k_min + i as i32;
            let dim = degree_basis(b, q).len();
            let h = dim - ranks.get(&k).copied().unwrap_or(0) - ranks.get(&(k - 1)).copied().unwrap_or(0);
            if h > 0 {
                out.insert((k, q), h);
            }
        }
    }
    out
}

/// Checks `κ² = 0` and that the induced `θ_j` square to zero and anticommute, on the
/// cells `q_min ≤ q ≤ q_max` of one bimodule. Returns the number of cells checked.
pub fn check_hochschild(m: &Bimodule, q_min: i32, q_max: i32) -> Result<usize, String> {
    let hh = HHComplex::new(m);
    let n = m.n;
    let mut checked = 0;
    for q in q_min..=q_max {
        for a in 0..n {
            if !hh.kappa(q, a + 1).mul(&hh.kappa(q, a)).is_zero() {
                return Err(format!("κ² ≠ 0 at q={q}, a={a}"));
            }
            checked += 1;
        }
        for a in 0..n.saturating_sub(1) {
            let c0 = hh.cell(q, a);
            let c1 = hh.cell(q - 2, a + 1);
            let c2 = hh.cell(q - 4, a + 2);
            for i in 0..n {
                for j in i..n {
                    let ti0 = theta_action(i, &c0, &c1);
                    let tj1 = theta_action(j, &c1, &c2);
                    let tj0 = theta_action(j, &c0, &c1);
                    let ti1 = theta_action(i, &c1, &c2);
                    let s = tj1.mul(&ti0).add(&ti1.mul(&tj0));
                    if !s.is_zero() {
                        return Err(format!("θ_{} θ_{} + θ_{} θ_{} ≠ 0 at q={q}, a={a}", j + 1, i + 1, i + 1, j + 1));
                    }
                }
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Checks that the induced `CY` differential squares to zero on every cell of `window`.
pub fn check_cy_square(y: &YComplex, window: &SeriesWindow) -> Result<usize, TriDeg> {
    let mut data = assemble_cy(y, true);
    let mut needed = BTreeSet::new();
    for c in window.cells() {
        for dt in 0..=2 {
            needed.insert(TriDeg::new(c.q, c.a, c.t + dt));
        }
    }
    prepare(&mut data, &needed);
    let one = |_: usize| Some(Rat::one());
    let mut checked = 0;
    for c in window.cells() {
        let s0 = cell_space(&data, c);
        let s1 = cell_space(&data, TriDeg::new(c.q, c.a, c.t + 1));
        let s2 = cell_space(&data, TriDeg::new(c.q, c.a, c.t + 2));
        let d0 = differential(&data, c.a, &s0, &s1, &one);
        let d1 = differential(&data, c.a, &s1, &s2, &one);
        if !d1.mul(&d0).is_zero() {
            return Err(c);
        }
        checked += 1;
    }
    Ok(checked)
}

/// Result of comparing a table with its q↔t reflection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    pub checked: usize,
    pub violations: Vec<(TriDeg, i64, i64)>,
}

impl SymmetryReport {
    pub fn symmetric(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `rev(Q, A, T) = (−Q − 4A, A, Q + 2A + T)`: exchanges the `q` and `t` exponents.
pub fn rev(c: TriDeg) -> TriDeg {
    TriDeg::new(-c.q - 4 * c.a, c.a, c.q + 2 * c.a + c.t)
}

/// Compares `dims(c)` with `dims(rev(c))` wherever both are known.
pub fn qt_symmetry_report(g: &GradedDims) -> SymmetryReport {
    let mut checked = 0;
    let mut violations = Vec::new();
    for c in &g.valid {
        let r = rev(*c);
        if let (Some(x), Some(y)) = (g.get(*c), g.get(r)) {
            checked += 1;
            if x != y && *c < r {
                violations.push((*c, x, y));
            }
        }
    }
    SymmetryReport { checked, violations }
}

/// Reporting basis of a [`PoincareReport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    /// Integral exponents of `q, t, a`.
    #[serde(rename = "qta")]
    Qta,
    /// Raw `(Q, A, T)` degrees.
    #[serde(rename = "QAT")]
    Raw,
}

/// A table ready for printing, with its provenance.
#[derive(Clone, Debug)]
pub struct PoincareReport {
    pub label: String,
    pub dims: GradedDims,
    pub normalization: Option<Normalization>,
    pub reduced: bool,
    /// Overall monomial factored out of `dims`.
    pub factor: Option<TriDeg>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    label: &'a str,
    basis: Basis,
    normalization: Option<Normalization>,
    reduced: bool,
    factor: Option<TriDeg>,
    window: SeriesWindow,
    valid_cells: usize,
    cells: Vec<[i64; 4]>,
}

fn mono_latex(out: &mut String, vars: &[(&str, i32)]) -> bool {
    let mut any = false;
    for (v, e) in vars {
        match *e {
            0 => {}
            1 => {
                let _ = write!(out, "{v}");
                any = true;
            }
            e => {
                let _ = write!(out, "{v}^{{{e}}}");
                any = true;
            }
        }
    }
    any
}

impl PoincareReport {
    pub fn new(label: impl Into<String>, dims: GradedDims) -> PoincareReport {
        PoincareReport { label: label.into(), dims, normalization: None, reduced: false, factor: None }
    }

    pub fn basis(&self) -> Basis {
        if self.dims.cells.keys().all(|c| c.qta().is_some()) {
            Basis::Qta
        } else {
            Basis::Raw
        }
    }

    /// Nonzero cells as `(i, j, k, dim)`: `(n_q, n_t, n_a)` or `(Q, A, T)`.
    pub fn entries(&self) -> Vec<[i64; 4]> {
        let basis = self.basis();
        let mut v: Vec<[i64; 4]> = self
            .dims
            .cells
            .iter()
            .map(|(c, d)| match basis {
                Basis::Qta => {
                    let (q, t, a) = c.qta().unwrap();
                    [q as i64, t as i64, a as i64, *d]
                }
                Basis::Raw => [c.q as i64, c.a as i64, c.t as i64, *d],
            })
            .collect();
        v.sort();
        v
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {}", self.label);
        match self.basis() {
            Basis::Qta => {
                let _ = writeln!(s, "# cells q^i t^j a^k: i j k dim");
            }
            Basis::Raw => {
                let _ = writeln!(s, "# cells Q^i A^j T^k: i j k dim");
            }
        }
        if let Some(n) = &self.normalization {
            let _ = writeln!(s, "# normalized: e={} n={} r={}", n.e, n.n, n.r);
        }
        if self.reduced {
            let _ = writeln!(s, "# reduced");
        }
        if let Some(m) = self.factor {
            let _ = writeln!(s, "# overall factor Q^{} A^{} T^{}", m.q, m.a, m.t);
        }
        let _ = writeln!(s, "# valid cells: {}", self.dims.valid.len());
        for [i, j, k, d] in self.entries() {
            let _ = writeln!(s, "{i} {j} {k} {d}");
        }
        s
    }

    pub fn to_json(&self) -> String {
        let j = ReportJson {
            label: &self.label,
            basis: self.basis(),
            normalization: self.normalization,
            reduced: self.reduced,
            factor: self.factor,
            window: self.dims.window,
            valid_cells: self.dims.valid.len(),
            cells: self.entries(),
        };
        serde_json::to_string_pretty(&j).expect("report serializes")
    }

    /// The truncated series as one polynomial expression.
    pub fn to_latex(&self) -> String {
        let basis = self.basis();
        let mut terms = self.entries();
        terms.sort_by_key(|e| (e[0] + e[1] + e[2], e[2], e[1], e[0]));
        let mut s = String::new();
        for [i, j, k, d] in terms {
            if d == 0 {
                continue;
            }
            let mut mono = String::new();
            let has = match basis {
                Basis::Qta => mono_latex(&mut mono, &[("q", i as i32), ("t", j as i32), ("a", k as i32)]),
                Basis::Raw => mono_latex(&mut mono, &[("Q", i as i32), ("A", j as i32), ("T", k as i32)]),
            };
            let sign = if d < 0 { "-" } else { "+" };
            if s.is_empty() {
                if d < 0 {
                    s.push('-');
                }
            } else {
                let _ = write!(s, " {sign} ");
            }
            let c = d.abs();
            if !has {
                let _ = write!(s, "{c}");
            } else if c == 1 {
                s.push_str(&mono);
            } else {
                let _ = write!(s, "{c}{mono}");
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        if let Some(m) = self.factor.filter(|m| *m != TriDeg::ZERO) {
            let mut mono = String::new();
            mono_latex(&mut mono, &[("Q", m.q), ("A", m.a), ("T", m.t)]);
            s = format!("{mono}\\left({s}\\right)");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{expand_closed_form, RatFn};
    use crate::braid::parse_braid;

    fn unknot() -> RatFn {
        RatFn::poly(&[(1, 0, 0, 0), (1, 0, 0, 1)]).over((1, 0, 0), 1).over((0, 1, 0), 1)
    }

    #[test]
    fn unknot_series() {
        let w = SeriesWindow::qta(4, 1);
        let g = hy(&parse_braid("").unwrap(), &w);
        let e = expand_closed_form(&unknot(), &w).unwrap();
        assert!(g.compare(&e).unwrap() > 20);
    }

    #[test]
    fn rev_swaps_q_and_t() {
        let c = TriDeg::from_qta(2, 5, 1);
        assert_eq!(rev(c), TriDeg::from_qta(5, 2, 1));
        assert_eq!(rev(rev(c)), c);
    }

    #[test]
    fn latex_output() {
        let w = SeriesWindow::qta(1, 1);
        let e = expand_closed_form(&unknot(), &w).unwrap();
        let r = PoincareReport::new("unknot", e);
        assert_eq!(r.to_latex(), "1 + q + t + a + qt + qa + ta + qta");
        assert!(r.to_json().contains("\"basis\": \"qta\""));
    }
}
