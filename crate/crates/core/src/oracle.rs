//! Independent ground truth: the `f_v` recursion, the dinv lattice sum,
//! brute-force dimensions of the ideals `J_n^k` and `𝒥_n^k`, and closed forms.
//!
//! Nothing here touches the complex or homology layers.

use crate::algebra::linalg::{collect_vec, Echelon, SparseVec};
use crate::algebra::{expand_closed_form, Floor, GradedDims, Mono, Rat, RatFn, SeriesError, SeriesWindow, TriDeg};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("unknown closed form `{0}`")]
    UnknownForm(String),
    #[error("{0}")]
    Params(String),
    #[error(transparent)]
    Window(#[from] SeriesError),
}

/// Polynomial in `t, a` with integer coefficients.
type TA = BTreeMap<(i32, i32), i64>;

fn ta_add(acc: &mut TA, p: &TA, shift_t: i32, shift_a: i32) {
    for (&(t, a), &c) in p {
        let e = acc.entry((t + shift_t, a + shift_a)).or_default();
        *e += c;
        if *e == 0 {
            acc.remove(&(t + shift_t, a + shift_a));
        }
    }
}

struct FRec {
    k: u8,
    memo: HashMap<(u32, Vec<u8>), TA>,
}

impl FRec {
    /// Coefficient of `q^d` in `f_v`. Each rule either shortens `v`, lowers the
    /// entry sum, or lowers `d`, so the recursion terminates.
    fn coef(&mut self, d: u32, v: &[u8]) -> TA {
        if let Some(p) = self.memo.get(&(d, v.to_vec())) {
            return p.clone();
        }
        let k = self.k;
        let mut out = TA::new();
        match v.split_first() {
            None => {
                if d == 0 {
                    out.insert((0, 0), 1);
                }
            }
            Some((&0, rest)) => {
                let c = rest.iter().filter(|&&x| x < k).count() as i32;
                let f = self.coef(d, rest);
                ta_add(&mut out, &f, c, 0);
                ta_add(&mut out, &f, 0, 1);
            }
            Some((&j, rest)) if j < k => {
                let c = rest.iter().filter(|&&x| x < j).count() as i32;
                let mut w = rest.to_vec();
                w.push(j - 1);
                let f = self.coef(d, &w);
                ta_add(&mut out, &f, c, 0);
            }
            Some((_, rest)) => {
                let mut w = rest.to_vec();
                w.push(k - 1);
                let f = self.coef(d, &w);
                ta_add(&mut out, &f, 0, 0);
                if d > 0 {
                    let mut w = rest.to_vec();
                    w.push(k);
                    let f = self.coef(d - 1, &w);
                    ta_add(&mut out, &f, 0, 0);
                }
            }
        }
        self.memo.insert((d, v.to_vec()), out.clone());
        out
    }
}

fn exact_table(window: &SeriesWindow, value: impl Fn(i32, i32, i32) -> i64) -> GradedDims {
    let mut out = GradedDims::new(*window, Floor { q2: 0, t2: 0, a: 0 });
    for c in window.integral_cells() {
        let (q, t, a) = c.qta().unwrap();
        out.set(c, if q < 0 || t < 0 || a < 0 { 0 } else { value(q, t, a) });
    }
    out
}

/// `f_{k,…,k}` (`n` copies), expanded on the integral cells of `window`.
pub fn f_recursion(n: usize, k: usize, window: &SeriesWindow) -> Result<GradedDims, OracleError> {
    if n == 0 || k == 0 || k > u8::MAX as usize {
        return Err(OracleError::Params("f_recursion needs n ≥ 1 and 1 ≤ k ≤ 255".into()));
    }
    let mut rec = FRec { k: k as u8, memo: HashMap::new() };
    let v = vec![k as u8; n];
    let dmax = window.q_max.div_euclid(2).max(0) as u32;
    let coefs: Vec<TA> = (0..=dmax).map(|d| rec.coef(d, &v)).collect();
    Ok(exact_table(window, |q, t, a| coefs.get(q as usize).and_then(|p| p.get(&(t, a))).copied().unwrap_or(0)))
}

/// `dinv(e) = #{i < j : e_i = e_j or e_i + 1 = e_j}`.
pub fn dinv(e: &[u32]) -> u32 {
    let mut c = 0;
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            if e[i] == e[j] || e[i] + 1 == e[j] {
                c += 1;
            }
        }
    }
    c
}

/// `Σ_{e ∈ ℤ_{≥0}^n} q^{Σe} t^{dinv(e)}` on the `a = 0` integral cells of `window`
/// (other `a`-degrees are zero).
pub fn dinv_sum(n: usize, window: &SeriesWindow) -> GradedDims {
    let dmax = window.q_max.div_euclid(2).max(0) as u32;
    let mut counts: BTreeMap<(u32, u32), i64> = BTreeMap::new();
    let mut e = vec![0u32; n];
    fn walk(e: &mut Vec<u32>, i: usize, left: u32, total: u32, counts: &mut BTreeMap<(u32, u32), i64>) {
        if i == e.len() {
            *counts.entry((total, dinv(e))).or_default() += 1;
            return;
        }
        for v in 0..=left {
            e[i] = v;
            walk(e, i + 1, left - v, total + v, counts);
        }
        e[i] = 0;
    }
    walk(&mut e, 0, dmax, 0, &mut counts);
    exact_table(window, |q, t, a| if a != 0 { 0 } else { counts.get(&(q as u32, t as u32)).copied().unwrap_or(0) })
}

/// Which ideal [`ideal_dims`] measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// `J_n ⊂ ℚ[x, y]`, generated by the alternating polynomials.
    J,
    /// `𝒥_n ⊂ ℚ[x, y, θ]`, generated by the antisymmetric polynomials.
    CalJ,
}

/// How powers of `𝒥_n` are formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recipe {
    /// `𝒥_n · 𝒥_n^{k−1}`, with `𝒥_n` generated by alternations of all monomials.
    Direct,
    /// `𝒥_n · J_n^{k−1}`, with `𝒥_n` generated by `Alt(g(x_{l+1..n}, y_{l+1..n}) θ_1⋯θ_l)`.
    Product,
}

/// Element of `ℚ[x_1..x_n, y_1..y_n] ⊗ Λ[θ_1..θ_n]`: x in slots `0..n`,
/// y in slots `n..2n`, θ as a bit mask.
type Key = (Mono, u8);
type Poly = BTreeMap<Key, Rat>;

fn theta_mul(s: u8, t: u8) -> Option<(u8, bool)> {
    if s & t != 0 {
        return None;
    }
    // Sign of moving each θ of `t` past the larger θs of `s`.
    let mut swaps = 0;
    for j in 0..8 {
        if t >> j & 1 == 1 {
            swaps += (s >> (j + 1)).count_ones();
        }
    }
    Some((s | t, swaps % 2 == 1))
}

fn poly_mul(p: &Poly, q: &Poly) -> Poly {
    let mut out = Poly::new();
    for ((m1, s1), c1) in p {
        for ((m2, s2), c2) in q {
            let Some((s, neg)) = theta_mul(*s1, *s2) else { continue };
            let c = c1 * c2;
            let e = out.entry((m1.mul(*m2), s)).or_insert_with(Rat::zero);
            *e = if neg { &*e - &c } else { &*e + &c };
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    if n == 0 {
        return vec![(vec![], false)];
    }
    let mut out = Vec::new();
    for (p, odd) in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push((q, odd ^ ((p.len() - pos) % 2 == 1)));
        }
    }
    out
}

/// `Σ_σ sign(σ) σ(m θ_S)` with `σ` permuting the indices of x, y and θ together.
fn alternate(n: usize, m: Mono, s: u8, perms: &[(Vec<usize>, bool)]) -> Poly {
    let mut out = Poly::new();
    for (p, odd) in perms {
        let mut pm = Mono::ONE;
        for i in 0..n {
            pm = pm.with_exp(p[i], m.exp(i)).with_exp(n + p[i], m.exp(n + i));
        }
        // θ_{i1}⋯θ_{ik} ↦ θ_{p(i1)}⋯θ_{p(ik)}; reorder into increasing order.
        let mut acc: Option<(u8, bool)> = Some((0, *odd));
        for i in 0..n {
            if s >> i & 1 == 1 {
                acc = acc.and_then(|(mask, neg)| theta_mul(mask, 1 << p[i]).map(|(m2, n2)| (m2, neg ^ n2)));
            }
        }
        let (mask, neg) = acc.expect("distinct θ stay distinct");
        let e = out.entry((pm, mask)).or_insert_with(Rat::zero);
        *e = if neg { &*e - &Rat::one() } else { &*e + &Rat::one() };
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Monomials of total degree `d` in the `nvars` slots starting at `offset`.
fn monomials_of(nvars: usize, offset: usize, d: u32) -> Vec<Mono> {
    fn rec(i: usize, nvars: usize, offset: usize, left: u32, m: Mono, out: &mut Vec<Mono>) {
        if i + 1 >= nvars {
            if nvars == 0 {
                if left == 0 {
                    out.push(m);
                }
            } else {
                out.push(m.with_exp(offset + i, left));
            }
            return;
        }
        for e in 0..=left {
            rec(i + 1, nvars, offset, left - e, m.with_exp(offset + i, e), out);
        }
    }
    let mut out = Vec::new();
    rec(0, nvars, offset, d, Mono::ONE, &mut out);
    out.sort();
    out
}

/// Degree cell `(x-degree, y-degree, θ-degree)`.
type Cell = (u32, u32, u32);

fn cell_basis(n: usize, c: Cell) -> Vec<Key> {
    let mut out = Vec::new();
    let xs = monomials_of(n, 0, c.0);
    let ys = monomials_of(n, n, c.1);
    let masks: Vec<u8> = (0..1u16 << n).map(|m| m as u8).filter(|m| m.count_ones() == c.2).collect();
    for x in &xs {
        for y in &ys {
            for &s in &masks {
                out.push((x.mul(*y), s));
            }
        }
    }
    out.sort();
    out
}

struct Ring {
    n: usize,
    bases: BTreeMap<Cell, (Vec<Key>, HashMap<Key, u32>)>,
}

impl Ring {
    fn new(n: usize, top: Cell) -> Ring {
        let mut bases = BTreeMap::new();
        for i in 0..=top.0 {
            for j in 0..=top.1 {
                for l in 0..=top.2.min(n as u32) {
                    let b = cell_basis(n, (i, j, l));
                    let idx = b.iter().enumerate().map(|(k, key)| (*key, k as u32)).collect();
                    bases.insert((i, j, l), (b, idx));
                }
            }
        }
        Ring { n, bases }
    }

    fn coords(&self, c: Cell, p: &Poly) -> SparseVec {
        let idx = &self.bases[&c].1;
        collect_vec(p.iter().map(|(k, v)| (idx[k], v.clone())).collect())
    }

    fn poly(&self, c: Cell, v: &SparseVec) -> Poly {
        let b = &self.bases[&c].0;
        v.iter().map(|(i, x)| (b[*i as usize], x.clone())).collect()
    }
}

/// Spanning sets of an ideal, cell by cell.
type Spans = BTreeMap<Cell, Vec<Poly>>;

/// Generators of `J_n` (`theta = false`) or `𝒥_n` per cell: the span of the
/// alternations, reduced to a basis.
fn generators(ring: &Ring, theta: bool, leading_thetas: bool) -> Spans {
    let n = ring.n;
    let perms = permutations(n);
    let cells: Vec<Cell> = ring.bases.keys().copied().filter(|c| theta || c.2 == 0).collect();
    cells
        .par_iter()
        .map(|&c| {
            let mut ech = Echelon::new(ring.bases[&c].0.len());
            let mut gens = Vec::new();
            let keys: Vec<Key> = if leading_thetas && c.2 > 0 {
                // Alt(m(x_{l+1..n}, y_{l+1..n}) θ_1⋯θ_l)
                let l = c.2 as usize;
                let mut ks = Vec::new();
                for x in monomials_of(n - l, l, c.0) {
                    for y in monomials_of(n - l, n + l, c.1) {
                        ks.push((x.mul(y), ((1u16 << l) - 1) as u8));
                    }
                }
                ks
            } else {
                ring.bases[&c].0.clone()
            };
            for (m, s) in keys {
                let p = alternate(n, m, s, &perms);
                if p.is_empty() {
                    continue;
                }
                let v = ring.coords(c, &p);
                if ech.insert(v.clone()) {
                    gens.push(p);
                }
            }
            (c, gens)
        })
        .filter(|(_, g)| !g.is_empty())
        .collect()
}

fn sub_cell(c: Cell, d: Cell) -> Option<Cell> {
    Some((c.0.checked_sub(d.0)?, c.1.checked_sub(d.1)?, c.2.checked_sub(d.2)?))
}

/// `G · I` cell by cell, where `I` is given by bases per cell (`None` = whole ring).
fn multiply(ring: &Ring, gens: &Spans, ideal: Option<&Spans>) -> Spans {
    let cells: Vec<Cell> = ring.bases.keys().copied().collect();
    cells
        .par_iter()
        .map(|&c| {
            let mut ech = Echelon::new(ring.bases[&c].0.len());
            let mut basis = Vec::new();
            for (gc, gs) in gens {
                let Some(rest) = sub_cell(c, *gc) else { continue };
                let others: Vec<Poly> = match ideal {
                    None => ring.bases[&rest].0.iter().map(|k| Poly::from([(*k, Rat::one())])).collect(),
                    Some(i) => i.get(&rest).cloned().unwrap_or_default(),
                };
                for g in gs {
                    for h in &others {
                        let p = poly_mul(g, h);
                        if p.is_empty() {
                            continue;
                        }
                        if ech.insert(ring.coords(c, &p)) {
                            basis.push(p);
                        }
                    }
                }
            }
            (c, basis)
        })
        .filter(|(_, b)| !b.is_empty())
        .collect()
}

fn top_cell(n: usize, window: &SeriesWindow, theta: bool) -> Cell {
    let q = window.q_max.div_euclid(2).max(0) as u32;
    let t = window.t_max.div_euclid(2).max(0) as u32;
    let a = if theta { window.a_max.clamp(0, n as i32) as u32 } else { 0 };
    (q, t, a)
}

fn ideal_spans(n: usize, k: usize, variant: Variant, recipe: Recipe, top: Cell) -> (Ring, Spans) {
    let ring = Ring::new(n, top);
    let j = generators(&ring, false, false);
    let mut acc: Option<Spans> = None;
    let steps = match variant {
        Variant::J => k,
        Variant::CalJ => k.saturating_sub(1),
    };
    let cal = match (variant, recipe) {
        (Variant::CalJ, Recipe::Direct) => Some(generators(&ring, true, false)),
        (Variant::CalJ, Recipe::Product) => Some(generators(&ring, true, true)),
        _ => None,
    };
    for _ in 0..steps {
        let g = if variant == Variant::CalJ && recipe == Recipe::Direct { cal.as_ref().unwrap() } else { &j };
        acc = Some(multiply(&ring, g, acc.as_ref()));
    }
    if let Some(cal) = &cal {
        if k > 0 {
            acc = Some(multiply(&ring, cal, acc.as_ref()));
        }
    }
    let spans = acc.unwrap_or_else(|| ring.bases.iter().map(|(c, (b, _))| (*c, b.iter().map(|k| Poly::from([(*k, Rat::one())])).collect())).collect());
    (ring, spans)
}

fn spans_table(window: &SeriesWindow, spans: &Spans) -> GradedDims {
    exact_table(window, |q, t, a| spans.get(&(q as u32, t as u32, a as u32)).map_or(0, |b| b.len() as i64))
}

/// Graded dimensions of `J_n^k` or `𝒥_n^k`, `x ↦ q`, `y ↦ t`, `θ ↦ a`, on the
/// integral cells of `window`. Exact: a cell of degree `D` only sees generators of
/// degree at most `D`, all of which are produced.
pub fn ideal_dims(n: usize, k: usize, variant: Variant, recipe: Recipe, window: &SeriesWindow) -> Result<GradedDims, OracleError> {
    if n == 0 || n > 4 {
        return Err(OracleError::Params("ideal_dims supports 1 ≤ n ≤ 4".into()));
    }
    let (_, spans) = ideal_spans(n, k, variant, recipe, top_cell(n, window, variant == Variant::CalJ));
    Ok(spans_table(window, &spans))
}

/// Graded dimensions of `I / (y_1, …, y_n) I` for `I = J_n^k` or `𝒥_n^k`.
pub fn ideal_mod_y_dims(n: usize, k: usize, variant: Variant, window: &SeriesWindow) -> Result<GradedDims, OracleError> {
    if n == 0 || n > 4 {
        return Err(OracleError::Params("ideal_dims supports 1 ≤ n ≤ 4".into()));
    }
    let top = top_cell(n, window, variant == Variant::CalJ);
    let (ring, spans) = ideal_spans(n, k, variant, Recipe::Product, top);
    let ys: Spans = [((0, 1, 0), (0..n).map(|i| Poly::from([((Mono::var(n + i), 0u8), Rat::one())])).collect())].into();
    let yi = multiply(&ring, &ys, Some(&spans));
    Ok(exact_table(window, |q, t, a| {
        let c = (q as u32, t as u32, a as u32);
        let full = spans.get(&c).map_or(0, |b| b.len());
        let sub = yi.get(&c).map_or(0, |b| b.len());
        (full - sub) as i64
    }))
}

/// Evaluates a span basis back to polynomials (used by tests to spot-check generators).
pub fn ideal_cell_basis(n: usize, k: usize, variant: Variant, cell: (u32, u32, u32)) -> Vec<BTreeMap<(Vec<u32>, u8), Rat>> {
    let (ring, spans) = ideal_spans(n, k, variant, Recipe::Product, cell);
    let Some(b) = spans.get(&cell) else { return Vec::new() };
    b.iter()
        .map(|p| {
            let v = ring.coords(cell, p);
            ring.poly(cell, &v).into_iter().map(|((m, s), c)| ((m.exps(2 * n), s), c)).collect()
        })
        .collect()
}

/// Named closed-form series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    /// `(1 + a) / ((1 − q)(1 − t))`
    Unknot,
    /// `(q + t − qt) / ((1 − q)²(1 − t)²)`
    HopfA0,
    /// `(1 + a)(q + t − qt + a)^{n−1} / ((1 − q)^n (1 − t)^n)`
    Jm(usize),
    /// Dimensions of `(x_1 − x_2, y_1 − y_2, θ_1 − θ_2)^k` read off from the
    /// change of variables to differences and sums.
    Ft2(usize),
    /// Product of series.
    SplitProduct(Vec<ClosedForm>),
}

impl ClosedForm {
    /// Parses `unknot`, `hopf_a0`, `jm(n)`, `ft2(k)` or `split_product(f, g, …)`.
    pub fn parse(s: &str) -> Result<ClosedForm, OracleError> {
        let s = s.trim();
        let bad = || OracleError::UnknownForm(s.to_string());
        let arg = |prefix: &str| -> Option<&str> { s.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')') };
        match s {
            "unknot" => return Ok(ClosedForm::Unknot),
            "hopf_a0" => return Ok(ClosedForm::HopfA0),
            _ => {}
        }
        if let Some(a) = arg("jm") {
            let n: usize = a.trim().parse().map_err(|_| bad())?;
            return if n >= 1 { Ok(ClosedForm::Jm(n)) } else { Err(bad()) };
        }
        if let Some(a) = arg("ft2") {
            return Ok(ClosedForm::Ft2(a.trim().parse().map_err(|_| bad())?));
        }
        if let Some(a) = arg("split_product") {
            let mut parts = Vec::new();
            let mut depth = 0;
            let mut start = 0;
            for (i, ch) in a.char_indices() {
                match ch {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    ',' if depth == 0 => {
                        parts.push(ClosedForm::parse(&a[start..i])?);
                        start = i + 1;
                    }
                    _ => {}
                }
            }
            parts.push(ClosedForm::parse(&a[start..])?);
            return Ok(ClosedForm::SplitProduct(parts));
        }
        Err(bad())
    }

    pub fn ratfn(&self) -> RatFn {
        let f = RatFn::poly(&[(1, 1, 0, 0), (1, 0, 1, 0), (-1, 1, 1, 0), (1, 0, 0, 1)]);
        let one_a = RatFn::poly(&[(1, 0, 0, 0), (1, 0, 0, 1)]);
        match self {
            ClosedForm::Unknot => one_a.over((1, 0, 0), 1).over((0, 1, 0), 1),
            ClosedForm::HopfA0 => RatFn::poly(&[(1, 1, 0, 0), (1, 0, 1, 0), (-1, 1, 1, 0)]).over((1, 0, 0), 2).over((0, 1, 0), 2),
            ClosedForm::Jm(n) => one_a.mul(&f.pow(n - 1)).over((1, 0, 0), *n).over((0, 1, 0), *n),
            ClosedForm::Ft2(k) => {
                // m^k + a m^{k−1} with m = (u, v) ⊂ ℚ[u, v]: 1/((1−q)(1−t)) minus the
                // monomials of total degree below k, times the free (1+a)/((1−q)(1−t)).
                let low = |k: usize| -> BTreeMap<(i32, i32, i32), i64> {
                    let mut p = BTreeMap::new();
                    p.insert((0, 0, 0), 1);
                    for i in 0..k as i32 {
                        for j in 0..k as i32 - i {
                            // −(1−q)(1−t) q^i t^j
                            for (dq, dt, c) in [(0, 0, -1), (1, 0, 1), (0, 1, 1), (1, 1, -1)] {
                                *p.entry((i + dq, j + dt, 0)).or_default() += c;
                            }
                        }
                    }
                    p
                };
                let mut num = low(*k);
                if *k >= 1 {
                    for ((q, t, _), c) in low(k - 1) {
                        *num.entry((q, t, 1)).or_default() += c;
                    }
                } else {
                    // 𝒥^0 is the whole ring: θ part is free as well.
                    *num.entry((0, 0, 1)).or_default() += 1;
                }
                let m = RatFn { num: num.into_iter().filter(|e| e.1 != 0).collect(), den: vec![(1, 0, 0), (0, 1, 0)] };
                m.mul(&one_a.over((1, 0, 0), 1).over((0, 1, 0), 1))
            }
            ClosedForm::SplitProduct(parts) => parts.iter().fold(RatFn::one(), |acc, p| acc.mul(&p.ratfn())),
        }
    }
}

pub fn closed_form(form: &ClosedForm, window: &SeriesWindow) -> Result<GradedDims, OracleError> {
    Ok(expand_closed_form(&form.ratfn(), window)?)
}

/// The cell of `q^i t^j a^k`.
pub fn qta_cell(i: i32, j: i32, k: i32) -> TriDeg {
    TriDeg::from_qta(i, j, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dinv_examples() {
        assert_eq!(dinv(&[0, 0]), 1);
        assert_eq!(dinv(&[0, 1]), 1);
        assert_eq!(dinv(&[1, 0]), 0);
        let g = dinv_sum(2, &SeriesWindow::qta(2, 0));
        let expect = [((0, 1), 1), ((1, 0), 1), ((1, 1), 1), ((2, 0), 2), ((2, 1), 1), ((0, 0), 0)];
        for ((q, t), v) in expect {
            assert_eq!(g.at_qta(q, t, 0), Some(v));
        }
    }

    #[test]
    fn dinv_one_strand() {
        let g = dinv_sum(1, &SeriesWindow::qta(3, 0));
        for q in 0..=3 {
            assert_eq!(g.at_qta(q, 0, 0), Some(1));
            assert_eq!(g.at_qta(q, 1, 0), Some(0));
        }
    }

    #[test]
    fn f_one_strand_is_unknot_times_one_minus_t() {
        let w = SeriesWindow::qta(4, 1);
        let f = f_recursion(1, 1, &w).unwrap();
        let e = expand_closed_form(&RatFn::poly(&[(1, 0, 0, 0), (1, 0, 0, 1)]).over((1, 0, 0), 1), &w).unwrap();
        assert_eq!(f.compare(&e).unwrap(), 25 * 2);
    }

    #[test]
    fn f_two_strands_is_hopf_numerator() {
        let w = SeriesWindow::qta(4, 2);
        let f = f_recursion(2, 1, &w).unwrap();
        let jm = ClosedForm::Jm(2).ratfn().mul(&RatFn::poly(&[(1, 0, 0, 0), (-2, 0, 1, 0), (1, 0, 2, 0)]));
        let e = expand_closed_form(&jm, &w).unwrap();
        f.compare(&e).unwrap();
    }

    #[test]
    fn j2_lowest_cells() {
        let w = SeriesWindow::qta(2, 2);
        let g = ideal_dims(2, 1, Variant::J, Recipe::Product, &w).unwrap();
        assert_eq!(g.at_qta(0, 0, 0), Some(0));
        assert_eq!(g.at_qta(1, 0, 0), Some(1));
        assert_eq!(g.at_qta(0, 1, 0), Some(1));
        let h = ideal_dims(2, 1, Variant::CalJ, Recipe::Product, &w).unwrap();
        assert_eq!(h.at_qta(0, 0, 1), Some(1));
        let b = ideal_cell_basis(2, 1, Variant::CalJ, (0, 0, 1));
        assert_eq!(b.len(), 1);
        let p = &b[0];
        assert_eq!(p.len(), 2);
        assert_eq!(p[&(vec![0, 0, 0, 0], 1)], -p[&(vec![0, 0, 0, 0], 2)].clone());
    }

    #[test]
    fn recipes_agree() {
        let w = SeriesWindow::qta(3, 2);
        for k in 1..=2 {
            let a = ideal_dims(2, k, Variant::CalJ, Recipe::Direct, &w).unwrap();
            let b = ideal_dims(2, k, Variant::CalJ, Recipe::Product, &w).unwrap();
            a.compare(&b).unwrap();
        }
    }

    #[test]
    fn calj2_matches_change_of_variables() {
        let w = SeriesWindow::qta(4, 2);
        for k in 0..=3 {
            let a = ideal_dims(2, k, Variant::CalJ, Recipe::Product, &w).unwrap();
            let e = closed_form(&ClosedForm::Ft2(k), &w).unwrap();
            a.compare(&e).unwrap_or_else(|m| panic!("k={k}: {m}"));
        }
    }

    #[test]
    fn j2_swap_symmetric() {
        let g = ideal_dims(2, 2, Variant::J, Recipe::Product, &SeriesWindow::qta(4, 0)).unwrap();
        for q in 0..=4 {
            for t in 0..=4 {
                assert_eq!(g.at_qta(q, t, 0), g.at_qta(t, q, 0));
            }
        }
    }

    #[test]
    fn parse_forms() {
        assert_eq!(ClosedForm::parse("jm(3)").unwrap(), ClosedForm::Jm(3));
        assert_eq!(
            ClosedForm::parse("split_product(unknot, unknot)").unwrap(),
            ClosedForm::SplitProduct(vec![ClosedForm::Unknot, ClosedForm::Unknot])
        );
        assert!(ClosedForm::parse("nope").is_err());
    }

    #[test]
    fn split_product_of_unknots() {
        let w = SeriesWindow::qta(3, 2);
        let a = closed_form(&ClosedForm::parse("split_product(unknot,unknot)").unwrap(), &w).unwrap();
        let b = expand_closed_form(&ClosedForm::Unknot.ratfn().pow(2), &w).unwrap();
        a.compare(&b).unwrap();
    }
}
