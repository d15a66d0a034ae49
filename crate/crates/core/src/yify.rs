//! Curved complexes over `R[y]`: y-ified crossings, tensor products,
//! curvature checks, curved elimination and crossing-change maps.

use crate::algebra::{MPoly, Mono, PolyMat, VarSet};
use crate::braid::BraidWord;
use crate::complex::elim;
use crate::complex::{BComplex, Layout};
use crate::soergel::{bs_generator, dot_maps, id_tensor, tensor_id, unit_bimodule, Bimodule};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector of `y_1..y_n` packed in slots `0..n`.
pub type YExp = Mono;

/// `y_i` (0-based) as a [`YExp`].
pub fn y_var(i: usize) -> YExp {
    Mono::var(i)
}

/// A curved complex `(C[y], Δ)` with `Δ = Σ_m Δ_m ⊗ y^m`.
///
/// `delta[(m, k)]` is `Δ_m : chain(k) → chain(k + 1 − 2|m|)`; `Δ_0` is the
/// underlying differential. The curvature is `Z_w = Σ_i (x_{w(i)} − x'_i) y_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YComplex {
    pub n: usize,
    pub w: Vec<usize>,
    pub k_min: i32,
    pub chain: Vec<Bimodule>,
    pub delta: BTreeMap<(YExp, i32), PolyMat>,
}

/// A morphism of curved complexes with components `f_m : C^k → D^{k + t_shift − 2|m|}`,
/// each of bimodule degree `q_shift + 2|m|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YMap {
    pub source: YComplex,
    pub target: YComplex,
    pub q_shift: i32,
    pub t_shift: i32,
    pub comps: BTreeMap<(YExp, i32), PolyMat>,
}

/// Where a symbolic identity fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub y_exp: Vec<u32>,
    pub k: i32,
    pub row: usize,
    pub col: usize,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "y-multidegree {:?}, source degree {}, entry ({},{}): expected {}, found {}",
            self.y_exp, self.k, self.row, self.col, self.expected, self.found
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum YifyError {
    #[error("strand mismatch: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("letter {0} has the wrong sign for this direction")]
    SignMismatch(usize),
    #[error("letter index {0} out of range")]
    LetterOutOfRange(usize),
    #[error("{0}")]
    Invalid(String),
}

impl YComplex {
    pub fn vars(&self) -> VarSet {
        VarSet::x(self.n)
    }

    pub fn k_max(&self) -> i32 {
        self.k_min + self.chain.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.k_min..=self.k_max()
    }

    pub fn at(&self, k: i32) -> Option<&Bimodule> {
        if k < self.k_min {
            return None;
        }
        self.chain.get((k - self.k_min) as usize)
    }

    pub fn rank_at(&self, k: i32) -> usize {
        self.at(k).map_or(0, |b| b.rank())
    }

    pub fn total_rank(&self) -> usize {
        self.chain.iter().map(|b| b.rank()).sum()
    }

    /// The trivial braid: `R` in degree 0 with zero connection.
    pub fn unit(n: usize) -> YComplex {
        YComplex { n, w: (0..n).collect(), k_min: 0, chain: vec![unit_bimodule(n)], delta: BTreeMap::new() }
    }

    /// Builds from a plain complex with no y-components.
    pub fn from_base(c: &BComplex, w: Vec<usize>) -> YComplex {
        let delta = c.d.iter().map(|(k, m)| ((Mono::ONE, *k), m.clone())).collect();
        YComplex { n: c.n, w, k_min: c.k_min, chain: c.chain.clone(), delta }
    }

    /// The specialization `y = 0`.
    pub fn base(&self) -> BComplex {
        let d = self.delta.iter().filter(|((m, _), _)| *m == Mono::ONE).map(|((_, k), m)| (*k, m.clone())).collect();
        BComplex { n: self.n, k_min: self.k_min, chain: self.chain.clone(), d }
    }

    /// `Δ_m = 0` for `|m| ≥ 2`.
    pub fn is_strict(&self) -> bool {
        self.delta.keys().all(|(m, _)| m.degree() <= 1)
    }

    /// `Σ_i Δ_{e_i} = 0`.
    pub fn is_balanced(&self) -> bool {
        for k in self.degrees() {
            let mut sum = PolyMat::zero(self.vars(), self.rank_at(k - 1), self.rank_at(k));
            for i in 0..self.n {
                if let Some(m) = self.delta.get(&(y_var(i), k)) {
                    sum = sum.add(m);
                }
            }
            if !sum.is_zero() {
                return false;
            }
        }
        true
    }

    /// `h_i h_j + h_j h_i = 0` for all `i, j` (including `h_i² = 0`).
    pub fn h_relations_hold(&self) -> bool {
        for k in self.degrees() {
            for i in 0..self.n {
                for j in i..self.n {
                    let hij = self.compose_at(y_var(i), y_var(j), k);
                    let hji = self.compose_at(y_var(j), y_var(i), k);
                    let s = match (hij, hji) {
                        (Some(a), Some(b)) => a.add(&b),
                        (Some(a), None) | (None, Some(a)) => a,
                        (None, None) => continue,
                    };
                    if !s.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `Δ_{m1} ∘ Δ_{m2}` starting in degree `k`.
    fn compose_at(&self, m1: YExp, m2: YExp, k: i32) -> Option<PolyMat> {
        let f = self.delta.get(&(m2, k))?;
        let k2 = k + 1 - 2 * m2.degree() as i32;
        let g = self.delta.get(&(m1, k2))?;
        Some(g.mul(f))
    }

    fn target_degree(m: YExp, k: i32) -> i32 {
        k + 1 - 2 * m.degree() as i32
    }

    /// Recomputes `Δ²` and compares with `Z_w · Id`.
    pub fn check_curvature(&self) -> Result<(), Discrepancy> {
        let vs = self.vars();
        let mut sq: BTreeMap<(YExp, i32), PolyMat> = BTreeMap::new();
        for ((m2, k), f) in &self.delta {
            let k2 = Self::target_degree(*m2, *k);
            for ((m1, kk), g) in self.delta.range((Mono::ONE, i32::MIN)..) {
                if *kk != k2 {
                    continue;
                }
                let prod = g.mul(f);
                let key = (m1.mul(*m2), *k);
                match sq.get_mut(&key) {
                    Some(acc) => *acc = acc.add(&prod),
                    None => {
                        sq.insert(key, prod);
                    }
                }
            }
        }
        let mut expect: BTreeMap<(YExp, i32), PolyMat> = BTreeMap::new();
        for k in self.degrees() {
            let b = self.at(k).unwrap();
            if b.rank() == 0 {
                continue;
            }
            for i in 0..self.n {
                let z = PolyMat::scalar(vs, b.rank(), &MPoly::x(vs, self.w[i])).sub(&b.right_x[i]);
                if !z.is_zero() {
                    expect.insert((y_var(i), k), z);
                }
            }
        }
        let keys: std::collections::BTreeSet<(YExp, i32)> = sq.keys().chain(expect.keys()).copied().collect();
        for key in keys {
            let (m, k) = key;
            let tk = k + 2 - 2 * m.degree() as i32;
            let zero = PolyMat::zero(vs, self.rank_at(tk), self.rank_at(k));
            let got = sq.get(&key).unwrap_or(&zero);
            let want = expect.get(&key).unwrap_or(&zero);
            if got != want {
                let diff = got.sub(want);
                let (r, c, _) = diff.iter().next().unwrap();
                return Err(Discrepancy {
                    y_exp: m.exps(self.n),
                    k,
                    row: r,
                    col: c,
                    expected: want.entry(r, c).to_string(),
                    found: got.entry(r, c).to_string(),
                });
            }
        }
        Ok(())
    }

    /// Checks curvature, bimodule invariants, homogeneity and intertwining of all components.
    pub fn validate(&self) -> Result<(), String> {
        if self.w.len() != self.n {
            return Err("permutation has wrong length".into());
        }
        let mut seen = vec![false; self.n];
        for &j in &self.w {
            if j >= self.n || seen[j] {
                return Err("w is not a permutation".into());
            }
            seen[j] = true;
        }
        for b in &self.chain {
            if b.n != self.n {
                return Err("chain object has wrong strand count".into());
            }
            b.validate().map_err(|e| e.to_string())?;
        }
        for ((m, k), f) in &self.delta {
            let tk = Self::target_degree(*m, *k);
            let (src, tgt) = match (self.at(*k), self.at(tk)) {
                (Some(s), Some(t)) => (s, t),
                _ => return Err(format!("component ({:?},{k}) leaves the support", m.exps(self.n))),
            };
            if f.shape() != (tgt.rank(), src.rank()) {
                return Err(format!("component at degree {k} has wrong shape"));
            }
            let map = crate::soergel::BimoduleMap {
                source: src.clone(),
                target: tgt.clone(),
                matrix: f.clone(),
                degree: 2 * m.degree() as i32,
            };
            map.validate().map_err(|e| format!("component ({:?},{k}): {e}", m.exps(self.n)))?;
        }
        self.check_curvature().map_err(|d| format!("curvature fails at {d}"))
    }

    /// Homological shift `[s]`: `C[s]^k = C^{k+s}`, connection multiplied by `(−1)^s`.
    pub fn hshift(&self, s: i32) -> YComplex {
        let sign = if s.rem_euclid(2) == 1 { -1 } else { 1 };
        YComplex {
            n: self.n,
            w: self.w.clone(),
            k_min: self.k_min - s,
            chain: self.chain.clone(),
            delta: self
                .delta
                .iter()
                .map(|((m, k), f)| ((*m, k - s), if sign < 0 { f.neg() } else { f.clone() }))
                .collect(),
        }
    }

    /// Quantum shift `(s)` on every chain object.
    pub fn qshift(&self, s: i32) -> YComplex {
        let mut c = self.clone();
        c.chain = c.chain.iter().map(|b| b.shift(s)).collect();
        c
    }
}

/// The y-ified crossing `FY(σ_i^{±1})` on `n` strands (`i` is 1-based).
///
/// Positive: `B_i → R(1)` by `b` in degrees 0, 1 with back-arrow
/// `−b*⊗(y_i − y_{i+1})`. Negative: `R(−1) → B_i` by `b*` in degrees −1, 0
/// with back-arrow `−b⊗(y_i − y_{i+1})`.
pub fn fy_crossing(n: usize, i: usize, sign: i8) -> YComplex {
    let (b, bs) = dot_maps(n, i).expect("generator index in range");
    let bi = bs_generator(n, i).unwrap();
    let r = unit_bimodule(n);
    let mut w: Vec<usize> = (0..n).collect();
    w.swap(i - 1, i);
    let mut delta = BTreeMap::new();
    let (yi, yj) = (y_var(i - 1), y_var(i));
    if sign > 0 {
        delta.insert((Mono::ONE, 0), b.matrix.clone());
        delta.insert((yi, 1), bs.matrix.neg());
        delta.insert((yj, 1), bs.matrix.clone());
        YComplex { n, w, k_min: 0, chain: vec![bi, r.shift(1)], delta }
    } else {
        delta.insert((Mono::ONE, -1), bs.matrix.clone());
        delta.insert((yi, 0), b.matrix.neg());
        delta.insert((yj, 0), b.matrix.clone());
        YComplex { n, w, k_min: -1, chain: vec![r.shift(-1), bi], delta }
    }
}

/// Relabels y-exponents of the left factor: `y_s ↦ y_{perm[s]}`.
fn reindex(m: YExp, perm: &[usize]) -> YExp {
    let mut out = Mono::ONE;
    for (s, &t) in perm.iter().enumerate() {
        let e = m.exp(s);
        if e > 0 {
            out = out.with_exp(t, e);
        }
    }
    out
}

fn inverse_perm(w: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; w.len()];
    for (i, &j) in w.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// `C ⊗ D` with permutation `w_C ∘ w_D`. The left factor's `y_s` becomes
/// `y_{w_D⁻¹(s)}`; the right factor's connection carries the Koszul sign `(−1)^i`.
pub fn tensor_y(c: &YComplex, d: &YComplex) -> Result<YComplex, YifyError> {
    if c.n != d.n {
        return Err(YifyError::StrandMismatch(c.n, d.n));
    }
    let n = c.n;
    let vs = c.vars();
    let lay = Layout::new(&c.chain, c.k_min, &d.chain, d.k_min);
    let perm = inverse_perm(&d.w);
    let w: Vec<usize> = (0..n).map(|s| c.w[d.w[s]]).collect();
    let mut delta: BTreeMap<(YExp, i32), PolyMat> = BTreeMap::new();
    let mut put = |key: (YExp, i32), r0: usize, c0: usize, block: &PolyMat, rows: usize, cols: usize| {
        let mat = delta.entry(key).or_insert_with(|| PolyMat::zero(vs, rows, cols));
        mat.add_block(r0, c0, block);
    };
    for ((m, i), f) in &c.delta {
        let m2 = reindex(*m, &perm);
        let ti = i + 1 - 2 * m.degree() as i32;
        for j in d.degrees() {
            let rn = d.rank_at(j);
            if rn == 0 {
                continue;
            }
            let block = tensor_id(f, rn);
            let (k, tk) = (i + j, ti + j);
            put((m2, k), lay.offset(tk, ti), lay.offset(k, *i), &block, lay.rank(tk), lay.rank(k));
        }
    }
    for ((m, j), g) in &d.delta {
        let tj = j + 1 - 2 * m.degree() as i32;
        for i in c.degrees() {
            let ci = c.at(i).unwrap();
            if ci.rank() == 0 {
                continue;
            }
            let mut block = id_tensor(ci, g);
            if i.rem_euclid(2) == 1 {
                block = block.neg();
            }
            let (k, tk) = (i + j, i + tj);
            put((*m, k), lay.offset(tk, i), lay.offset(k, i), &block, lay.rank(tk), lay.rank(k));
        }
    }
    delta.retain(|_, m| !m.is_zero());
    let chain = lay.chain_objects(&c.chain, c.k_min, &d.chain, d.k_min);
    let out = YComplex { n, w, k_min: lay.k_min, chain, delta };
    debug_assert!(out.check_curvature().is_ok());
    Ok(out)
}

/// Curved Gaussian elimination to a smaller homotopy-equivalent complex.
pub fn curved_gaussian_eliminate(c: &YComplex) -> YComplex {
    let (r, _) = elim::eliminate(c, false);
    debug_assert!(r.check_curvature().is_ok());
    r
}

/// Elimination with the projection `π : C → C_min` and inclusion `ι : C_min → C`.
pub fn curved_gaussian_eliminate_tracked(c: &YComplex) -> (YComplex, YMap, YMap) {
    let (r, t) = elim::eliminate(c, true);
    let (iota, pi) = t.unwrap();
    (r, pi, iota)
}

/// `FY(β)`: tensor of y-ified crossings with elimination after every step.
pub fn fy(b: &BraidWord) -> YComplex {
    let mut c = YComplex::unit(b.n);
    for &(i, s) in &b.letters {
        c = curved_gaussian_eliminate(&tensor_y(&c, &fy_crossing(b.n, i, s)).unwrap());
    }
    c
}

/// `FY(β)` without elimination.
pub fn fy_unminimized(b: &BraidWord) -> YComplex {
    let mut c = YComplex::unit(b.n);
    for &(i, s) in &b.letters {
        c = tensor_y(&c, &fy_crossing(b.n, i, s)).unwrap();
    }
    c
}

/// Minimized `FY(β)` together with `π : U → FY(β)` and `ι : FY(β) → U`,
/// where `U` is [`fy_unminimized`].
pub fn fy_tracked(b: &BraidWord) -> (YComplex, YMap, YMap) {
    let mut m = YComplex::unit(b.n);
    let mut u = YComplex::unit(b.n);
    let mut pi = YMap::identity(&m);
    let mut iota = YMap::identity(&m);
    for &(i, s) in &b.letters {
        let x = fy_crossing(b.n, i, s);
        let mx = tensor_y(&m, &x).unwrap();
        let (m2, pi_j, iota_j) = curved_gaussian_eliminate_tracked(&mx);
        let u2 = tensor_y(&u, &x).unwrap();
        let pi_up = pi.tensor_id(&x, &u2, &mx);
        let iota_up = iota.tensor_id(&x, &mx, &u2);
        pi = pi_j.compose(&pi_up);
        iota = iota_up.compose(&iota_j);
        m = m2;
        u = u2;
    }
    (m, pi, iota)
}

impl YMap {
    pub fn identity(c: &YComplex) -> YMap {
        let vs = c.vars();
        let comps = c
            .degrees()
            .filter(|k| c.rank_at(*k) > 0)
            .map(|k| ((Mono::ONE, k), PolyMat::identity(vs, c.rank_at(k))))
            .collect();
        YMap { source: c.clone(), target: c.clone(), q_shift: 0, t_shift: 0, comps }
    }

    fn target_degree(&self, m: YExp, k: i32) -> i32 {
        k + self.t_shift - 2 * m.degree() as i32
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &YMap) -> YMap {
        let vs = self.source.vars();
        let mut comps: BTreeMap<(YExp, i32), PolyMat> = BTreeMap::new();
        for ((m2, k), f) in &first.comps {
            let k2 = first.target_degree(*m2, *k);
            for ((m1, kk), g) in &self.comps {
                if *kk != k2 {
                    continue;
                }
                let prod = g.mul(f);
                let key = (m1.mul(*m2), *k);
                match comps.get_mut(&key) {
                    Some(acc) => *acc = acc.add(&prod),
                    None => {
                        comps.insert(key, prod);
                    }
                }
            }
        }
        comps.retain(|_, m| !m.is_zero());
        let _ = vs;
        YMap {
            source: first.source.clone(),
            target: self.target.clone(),
            q_shift: self.q_shift + first.q_shift,
            t_shift: self.t_shift + first.t_shift,
            comps,
        }
    }

    /// `f ⊗ Id_X : C ⊗ X → C' ⊗ X`; `src` and `tgt` are the tensor complexes.
    pub fn tensor_id(&self, x: &YComplex, src: &YComplex, tgt: &YComplex) -> YMap {
        let vs = self.source.vars();
        let ls = Layout::new(&self.source.chain, self.source.k_min, &x.chain, x.k_min);
        let lt = Layout::new(&self.target.chain, self.target.k_min, &x.chain, x.k_min);
        let perm = inverse_perm(&x.w);
        let mut comps: BTreeMap<(YExp, i32), PolyMat> = BTreeMap::new();
        for ((m, i), f) in &self.comps {
            let m2 = reindex(*m, &perm);
            let ti = self.target_degree(*m, *i);
            for j in x.degrees() {
                let rn = x.rank_at(j);
                if rn == 0 {
                    continue;
                }
                let block = tensor_id(f, rn);
                let (k, tk) = (i + j, ti + j);
                let mat = comps.entry((m2, k)).or_insert_with(|| PolyMat::zero(vs, lt.rank(tk), ls.rank(k)));
                mat.add_block(lt.offset(tk, ti), ls.offset(k, *i), &block);
            }
        }
        comps.retain(|_, m| !m.is_zero());
        YMap { source: src.clone(), target: tgt.clone(), q_shift: self.q_shift, t_shift: self.t_shift, comps }
    }

    /// `Id_C ⊗ g : C ⊗ D → C ⊗ D'`; `src` and `tgt` are the tensor complexes.
    pub fn id_tensor(c: &YComplex, g: &YMap, src: &YComplex, tgt: &YComplex) -> YMap {
        let vs = c.vars();
        let ls = Layout::new(&c.chain, c.k_min, &g.source.chain, g.source.k_min);
        let lt = Layout::new(&c.chain, c.k_min, &g.target.chain, g.target.k_min);
        let mut comps: BTreeMap<(YExp, i32), PolyMat> = BTreeMap::new();
        for ((m, j), gm) in &g.comps {
            let tj = g.target_degree(*m, *j);
            for i in c.degrees() {
                let ci = c.at(i).unwrap();
                if ci.rank() == 0 {
                    continue;
                }
                let block = id_tensor(ci, gm);
                let (k, tk) = (i + j, i + tj);
                let mat = comps.entry((*m, k)).or_insert_with(|| PolyMat::zero(vs, lt.rank(tk), ls.rank(k)));
                mat.add_block(lt.offset(tk, i), ls.offset(k, i), &block);
            }
        }
        comps.retain(|_, m| !m.is_zero());
        YMap { source: src.clone(), target: tgt.clone(), q_shift: g.q_shift, t_shift: g.t_shift, comps }
    }

    /// Checks `Δ_tgt ∘ f = (−1)^t f ∘ Δ_src` componentwise, `t` the homological shift.
    pub fn check_chain_map(&self) -> Result<(), Discrepancy> {
        let mut lhs: BTreeMap<(YExp, i32), PolyMat> = BTreeMap::new();
        let add = |map: &mut BTreeMap<(YExp, i32), PolyMat>, key, prod: PolyMat| match map.get_mut(&key) {
            Some(acc) => *acc = acc.add(&prod),
            None => {
                map.insert(key, prod);
            }
        };
        for ((m2, k), f) in &self.comps {
            let k2 = self.target_degree(*m2, *k);
            for ((m1, kk), d) in &self.target.delta {
                if *kk == k2 {
                    add(&mut lhs, (m1.mul(*m2), *k), d.mul(f));
                }
            }
        }
        let odd = self.t_shift.rem_euclid(2) == 1;
        for ((m1, k), d) in &self.source.delta {
            let k2 = k + 1 - 2 * m1.degree() as i32;
            for ((m2, kk), f) in &self.comps {
                if *kk == k2 {
                    let p = f.mul(d);
                    add(&mut lhs, (m1.mul(*m2), *k), if odd { p } else { p.neg() });
                }
            }
        }
        for ((m, k), v) in &lhs {
            if !v.is_zero() {
                let (r, c, e) = v.iter().next().unwrap();
                return Err(Discrepancy {
                    y_exp: m.exps(self.source.n),
                    k: *k,
                    row: r,
                    col: c,
                    expected: "0".into(),
                    found: e.to_string(),
                });
            }
        }
        Ok(())
    }
}

/// Direction of a crossing change.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    PosToNeg,
    NegToPos,
}

/// The crossing-change map on a single crossing `σ_i^{±1}`.
///
/// `PosToNeg`: `FY(σ_i) → FY(σ_i⁻¹)`, identity on `B_i` and `−Id⊗(y_i − y_{i+1})`
/// from `R(1)` to `R(−1)`. `NegToPos`: `FY(σ_i⁻¹) → FY(σ_i)(−2)[2]`,
/// `Id⊗(y_i − y_{i+1})` on `B_i` and `−Id` from `R(−1)` to `R(1)`.
pub fn crossing_change(n: usize, i: usize, dir: Direction) -> YMap {
    let vs = VarSet::x(n);
    let pos = fy_crossing(n, i, 1);
    let neg = fy_crossing(n, i, -1);
    let (yi, yj) = (y_var(i - 1), y_var(i));
    let id2 = PolyMat::identity(vs, 2);
    let id1 = PolyMat::identity(vs, 1);
    let mut comps = BTreeMap::new();
    match dir {
        Direction::PosToNeg => {
            comps.insert((Mono::ONE, 0), id2);
            comps.insert((yi, 1), id1.neg());
            comps.insert((yj, 1), id1);
            YMap { source: pos, target: neg, q_shift: 0, t_shift: 0, comps }
        }
        Direction::NegToPos => {
            comps.insert((yi, 0), id2.clone());
            comps.insert((yj, 0), id2.neg());
            comps.insert((Mono::ONE, -1), id1.neg());
            YMap { source: neg, target: pos, q_shift: -2, t_shift: 2, comps }
        }
    }
    .checked()
}

impl YMap {
    fn checked(self) -> YMap {
        debug_assert!(self.check_chain_map().is_ok());
        self
    }
}

/// The crossing-change map at letter `letter_index` of `b`, on unminimized
/// complexes: `FY(β) → FY(β')` where `β'` has that letter inverted.
pub fn splitting_map(b: &BraidWord, letter_index: usize, dir: Direction) -> Result<YMap, YifyError> {
    let &(i, s) = b.letters.get(letter_index).ok_or(YifyError::LetterOutOfRange(letter_index))?;
    let want = if dir == Direction::PosToNeg { 1 } else { -1 };
    if s != want {
        return Err(YifyError::SignMismatch(letter_index));
    }
    let flipped = b.flip(&[letter_index]);
    let local = crossing_change(b.n, i, dir);
    let mut f: Option<YMap> = None;
    let mut src = YComplex::unit(b.n);
    let mut tgt = YComplex::unit(b.n);
    for (p, (&(li, ls), &(_, lt))) in b.letters.iter().zip(&flipped.letters).enumerate() {
        let xs = fy_crossing(b.n, li, ls);
        let xt = fy_crossing(b.n, li, lt);
        let src2 = tensor_y(&src, &xs)?;
        let tgt2 = tensor_y(&tgt, &xt)?;
        let cur = match f.take() {
            None if p == letter_index => YMap::id_tensor(&src, &local, &src2, &tgt2),
            None => YMap::identity(&src2),
            Some(prev) if p == letter_index => {
                // (prev ⊗ Id) ∘ (Id ⊗ ψ) with prev : src → tgt.
                let mid = tensor_y(&src, &xt)?;
                let a = YMap::id_tensor(&src, &local, &src2, &mid);
                prev.tensor_id(&xt, &mid, &tgt2).compose(&a)
            }
            Some(prev) => prev.tensor_id(&xs, &src2, &tgt2),
        };
        f = Some(cur);
        src = src2;
        tgt = tgt2;
    }
    Ok(f.unwrap_or_else(|| YMap::identity(&src)))
}

/// Letters to flip so that `β` becomes freely trivial: the second half when
/// `β = u · reverse(u)` with `u` positive.
pub fn default_flips(b: &BraidWord) -> Option<Vec<usize>> {
    let len = b.letters.len();
    if len % 2 != 0 || b.letters.iter().any(|l| l.1 < 0) {
        return None;
    }
    let h = len / 2;
    let flips: Vec<usize> = (h..len).collect();
    b.flip(&flips).freely_trivial().then_some(flips)
}

/// The composite `FY(β) → FY(1)`: `ι` into the unminimized tensor, the
/// crossing changes at `flips`, then `π` onto the minimized flipped complex.
/// The flipped word must be freely trivial.
pub fn splitting_composite(b: &BraidWord, flips: &[usize]) -> Result<YMap, YifyError> {
    let flipped = b.flip(flips);
    if !flipped.freely_trivial() {
        return Err(YifyError::Invalid("flipped word does not reduce to the identity".into()));
    }
    for &p in flips {
        if b.letters.get(p).map(|l| l.1) != Some(1) {
            return Err(YifyError::SignMismatch(p));
        }
    }
    let (_, _, iota) = fy_tracked(b);
    let (_, pi_minus, _) = fy_tracked(&flipped);
    let mut psi: Option<YMap> = None;
    let mut src = YComplex::unit(b.n);
    let mut tgt = YComplex::unit(b.n);
    for (p, (&(li, ls), &(_, lt))) in b.letters.iter().zip(&flipped.letters).enumerate() {
        let xs = fy_crossing(b.n, li, ls);
        let xt = fy_crossing(b.n, li, lt);
        let src2 = tensor_y(&src, &xs)?;
        let tgt2 = tensor_y(&tgt, &xt)?;
        let prev = psi.take().unwrap_or_else(|| YMap::identity(&src));
        let next = if flips.contains(&p) {
            let local = crossing_change(b.n, li, Direction::PosToNeg);
            let mid = tensor_y(&src, &xt)?;
            let a = YMap::id_tensor(&src, &local, &src2, &mid);
            prev.tensor_id(&xt, &mid, &tgt2).compose(&a)
        } else {
            prev.tensor_id(&xs, &src2, &tgt2)
        };
        psi = Some(next);
        src = src2;
        tgt = tgt2;
    }
    let psi = psi.unwrap_or_else(|| YMap::identity(&src));
    Ok(pi_minus.compose(&psi).compose(&iota))
}

/// Mapping cone `C[1] ⊕ D` of `f : C → D` (with `t_shift = 0`), connection `[[−Δ_C, 0], [f, Δ_D]]`.
pub fn cone_y(f: &YMap) -> Result<YComplex, YifyError> {
    if f.t_shift != 0 || f.q_shift != 0 {
        return Err(YifyError::Invalid("cone needs a degree-zero map".into()));
    }
    let c1 = f.source.hshift(1);
    let d = &f.target;
    if c1.w != d.w {
        return Err(YifyError::Invalid("source and target permutations differ".into()));
    }
    let vs = d.vars();
    let k_min = c1.k_min.min(d.k_min);
    let k_max = c1.k_max().max(d.k_max());
    let mut chain = Vec::new();
    for k in k_min..=k_max {
        let parts: Vec<&Bimodule> = [c1.at(k), d.at(k)].into_iter().flatten().collect();
        chain.push(if parts.is_empty() { Bimodule::zero(d.n) } else { Bimodule::direct_sum(&parts) });
    }
    let rank = |k: i32| chain.get((k - k_min) as usize).map_or(0, |b: &Bimodule| b.rank());
    let mut delta: BTreeMap<(YExp, i32), PolyMat> = BTreeMap::new();
    let mut put = |key: (YExp, i32), tk: i32, r0: usize, c0: usize, block: &PolyMat| {
        let mat = delta.entry(key).or_insert_with(|| PolyMat::zero(vs, rank(tk), rank(key.1)));
        mat.add_block(r0, c0, block);
    };
    for ((m, k), g) in &c1.delta {
        let tk = k + 1 - 2 * m.degree() as i32;
        put((*m, *k), tk, 0, 0, g);
    }
    for ((m, k), g) in &d.delta {
        let tk = k + 1 - 2 * m.degree() as i32;
        put((*m, *k), tk, c1.rank_at(tk), c1.rank_at(*k), g);
    }
    for ((m, k), g) in &f.comps {
        // f_m : C^k → D^{k−2|m|}; in the cone C^k sits in degree k − 1.
        let tk = k - 2 * m.degree() as i32;
        put((*m, k - 1), tk, c1.rank_at(tk), 0, g);
    }
    delta.retain(|_, m| !m.is_zero());
    Ok(YComplex { n: d.n, w: d.w.clone(), k_min, chain, delta })
}

/// Adds a free strand on the right.
pub fn include_strand_y(c: &YComplex) -> YComplex {
    let vs = VarSet::x(c.n + 1);
    let mut w = c.w.clone();
    w.push(c.n);
    YComplex {
        n: c.n + 1,
        w,
        k_min: c.k_min,
        chain: c.chain.iter().map(crate::soergel::include_strand).collect(),
        delta: c.delta.iter().map(|(k, m)| (*k, m.with_vars(vs))).collect(),
    }
}

#[derive(Serialize, Deserialize)]
struct YComplexRepr {
    n: usize,
    w: Vec<usize>,
    k_min: i32,
    chain: Vec<Bimodule>,
    delta: Vec<(Vec<u32>, i32, PolyMat)>,
}

impl Serialize for YComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        YComplexRepr {
            n: self.n,
            w: self.w.clone(),
            k_min: self.k_min,
            chain: self.chain.clone(),
            delta: self.delta.iter().map(|((m, k), f)| (m.exps(self.n), *k, f.clone())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for YComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<YComplex, D::Error> {
        let r = YComplexRepr::deserialize(d)?;
        let mut delta = BTreeMap::new();
        for (e, k, f) in r.delta {
            if e.len() != r.n || e.iter().any(|&x| x > 255) {
                return Err(serde::de::Error::custom("bad y-exponent"));
            }
            delta.insert((Mono::from_exps(&e), k), f);
        }
        Ok(YComplex { n: r.n, w: r.w, k_min: r.k_min, chain: r.chain, delta })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_braid;

    #[test]
    fn crossings_are_curved() {
        for s in [1, -1] {
            let c = fy_crossing(3, 1, s);
            assert!(c.validate().is_ok(), "{:?}", c.validate());
            assert!(c.is_strict() && c.is_balanced() && c.h_relations_hold());
        }
    }

    #[test]
    fn tensor_and_eliminate_preserve_curvature() {
        for w in ["s1^2", "s1 s2 s1", "s1 s2^-1 s1", "s2 s1^-1 s2 s1"] {
            let b = parse_braid(w).unwrap();
            let u = fy_unminimized(&b);
            assert!(u.validate().is_ok(), "{w}");
            let m = fy(&b);
            assert!(m.validate().is_ok(), "{w}: {:?}", m.validate());
            assert_eq!(m.base().total_rank(), crate::complex::rouquier(&b).total_rank(), "{w}");
            assert_eq!(m.w, b.closure().w);
        }
    }

    #[test]
    fn double_crossing_minimizes_to_three_terms() {
        let m = fy(&parse_braid("s1^2").unwrap());
        let ranks: Vec<usize> = m.chain.iter().map(|b| b.rank()).collect();
        assert_eq!(ranks, vec![2, 2, 1]);
    }

    #[test]
    fn inverse_pair_reduces_to_unit() {
        let m = fy(&parse_braid("s1 s1^-1").unwrap());
        assert_eq!(m.total_rank(), 1);
        assert!(m.delta.is_empty());
    }

    #[test]
    fn tracked_maps_are_chain_maps() {
        let b = parse_braid("s1 s2 s1^-1").unwrap();
        let (m, pi, iota) = fy_tracked(&b);
        assert!(pi.check_chain_map().is_ok());
        assert!(iota.check_chain_map().is_ok());
        let id = pi.compose(&iota);
        assert_eq!(id.comps, YMap::identity(&m).comps);
    }

    #[test]
    fn crossing_changes_are_chain_maps() {
        for d in [Direction::PosToNeg, Direction::NegToPos] {
            assert!(crossing_change(2, 1, d).check_chain_map().is_ok());
        }
        let b = parse_braid("s1 s2 s1").unwrap();
        let f = splitting_map(&b, 1, Direction::PosToNeg).unwrap();
        assert!(f.check_chain_map().is_ok());
    }

    #[test]
    fn cone_of_crossing_change_is_small() {
        let f = crossing_change(2, 1, Direction::PosToNeg);
        let c = cone_y(&f).unwrap();
        assert!(c.validate().is_ok());
        let r = curved_gaussian_eliminate(&c);
        assert_eq!(r.total_rank(), 2);
        assert!(r.validate().is_ok());
        assert_eq!((r.k_min, r.rank_at(-1), r.rank_at(0)), (-1, 1, 1));
        let vs = VarSet::x(2);
        let d0 = &r.delta[&(Mono::ONE, -1)];
        assert_eq!(d0.entry(0, 0).scale(&d0.entry(0, 0).coeff(Mono::var(0)).inv()), &MPoly::x(vs, 0) - &MPoly::x(vs, 1));
        let back: Vec<_> = r.delta.keys().filter(|k| k.0 != Mono::ONE).collect();
        assert_eq!(back.len(), 2);
    }

    #[test]
    fn splitting_composite_on_full_twist() {
        let b = parse_braid("s1^2").unwrap();
        let flips = default_flips(&b).unwrap();
        assert_eq!(flips, vec![1]);
        let phi = splitting_composite(&b, &flips).unwrap();
        assert!(phi.check_chain_map().is_ok());
        assert_eq!(phi.target.total_rank(), 1);
    }

    #[test]
    fn serde_round_trip() {
        let m = fy(&parse_braid("s1 s2^-1").unwrap());
        let s = serde_json::to_string(&m).unwrap();
        let back: YComplex = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
