//! Truncated trigraded series: windows, dimension tables, closed-form expansion.
//!
//! Windows and floors are expressed in doubled reporting exponents
//! `(2n_q, 2n_t, n_a)` so half-integral cells of unnormalized invariants stay exact.

use super::tridegree::TriDeg;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Box of cells `q_min ≤ 2n_q ≤ q_max`, `t_min ≤ 2n_t ≤ t_max`, `a_min ≤ n_a ≤ a_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeriesWindow {
    pub q_min: i32,
    pub q_max: i32,
    pub a_min: i32,
    pub a_max: i32,
    pub t_min: i32,
    pub t_max: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("invalid window: {0}")]
    Window(String),
    #[error("denominator factor (1 - q^{0} t^{1} a^{2}) cannot be expanded in the window")]
    NonExpandable(i32, i32, i32),
    #[error("cell {0} has non-integral (q,t,a) exponents")]
    NonIntegral(TriDeg),
}

impl SeriesWindow {
    /// Integral exponents `0 ≤ n_q, n_t ≤ w`, `0 ≤ n_a ≤ a_max`.
    pub fn qta(w: i32, a_max: i32) -> SeriesWindow {
        SeriesWindow { q_min: 0, q_max: 2 * w, a_min: 0, a_max, t_min: 0, t_max: 2 * w }
    }

    pub fn validate(&self, n: usize) -> Result<(), SeriesError> {
        if self.q_min > self.q_max || self.t_min > self.t_max {
            return Err(SeriesError::Window(format!("empty range in {self:?}")));
        }
        if self.a_min != 0 || self.a_max < 0 || self.a_max > n as i32 {
            return Err(SeriesError::Window(format!("a-range must be 0..=a_max with a_max ≤ {n}")));
        }
        Ok(())
    }

    pub fn contains(&self, c: TriDeg) -> bool {
        let (q2, t2, _) = c.doubled_qta();
        (self.q_min..=self.q_max).contains(&q2) && (self.t_min..=self.t_max).contains(&t2) && (self.a_min..=self.a_max).contains(&c.a)
    }

    /// All cells of the window in canonical order.
    pub fn cells(&self) -> Vec<TriDeg> {
        let mut v = Vec::new();
        for a in self.a_min..=self.a_max {
            for t2 in self.t_min..=self.t_max {
                for q2 in self.q_min..=self.q_max {
                    v.push(TriDeg::from_doubled_qta(q2, t2, a));
                }
            }
        }
        v.sort();
        v
    }

    /// Cells with integral reporting exponents.
    pub fn integral_cells(&self) -> Vec<TriDeg> {
        self.cells().into_iter().filter(|c| c.qta().is_some()).collect()
    }

    pub fn shifted(&self, d: TriDeg) -> SeriesWindow {
        let (q2, t2, _) = d.doubled_qta();
        SeriesWindow {
            q_min: self.q_min + q2,
            q_max: self.q_max + q2,
            a_min: self.a_min + d.a,
            a_max: self.a_max + d.a,
            t_min: self.t_min + t2,
            t_max: self.t_max + t2,
        }
    }

    pub fn intersect(&self, o: &SeriesWindow) -> SeriesWindow {
        SeriesWindow {
            q_min: self.q_min.max(o.q_min),
            q_max: self.q_max.min(o.q_max),
            a_min: self.a_min.max(o.a_min),
            a_max: self.a_max.min(o.a_max),
            t_min: self.t_min.max(o.t_min),
            t_max: self.t_max.min(o.t_max),
        }
    }
}

/// Region known to vanish: every cell with `2n_q < q2`, `2n_t < t2` or `n_a < a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Floor {
    pub q2: i32,
    pub t2: i32,
    pub a: i32,
}

impl Floor {
    pub const NONE: Floor = Floor { q2: i32::MIN / 4, t2: i32::MIN / 4, a: i32::MIN / 4 };

    pub fn below(&self, c: TriDeg) -> bool {
        let (q2, t2, _) = c.doubled_qta();
        q2 < self.q2 || t2 < self.t2 || c.a < self.a
    }

    pub fn shifted(&self, d: TriDeg) -> Floor {
        let (q2, t2, _) = d.doubled_qta();
        Floor { q2: self.q2 + q2, t2: self.t2 + t2, a: self.a + d.a }
    }
}

/// A coefficient table over a window. `valid` lists the cells whose value is
/// known; cells under `floor` are known to vanish; all other cells are unknown.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedDims {
    pub window: SeriesWindow,
    pub cells: BTreeMap<TriDeg, i64>,
    pub valid: BTreeSet<TriDeg>,
    pub floor: Floor,
}

/// First disagreement found by [`GradedDims::compare`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub cell: TriDeg,
    pub left: i64,
    pub right: i64,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cell {} ", self.cell)?;
        if let Some((q, t, a)) = self.cell.qta() {
            write!(f, "[q^{q} t^{t} a^{a}] ")?;
        }
        write!(f, "differs: {} vs {}", self.left, self.right)
    }
}

impl GradedDims {
    pub fn new(window: SeriesWindow, floor: Floor) -> GradedDims {
        GradedDims { window, cells: BTreeMap::new(), valid: BTreeSet::new(), floor }
    }

    pub fn set(&mut self, c: TriDeg, v: i64) {
        self.valid.insert(c);
        if v != 0 {
            self.cells.insert(c, v);
        } else {
            self.cells.remove(&c);
        }
    }

    pub fn get(&self, c: TriDeg) -> Option<i64> {
        if self.valid.contains(&c) {
            Some(self.cells.get(&c).copied().unwrap_or(0))
        } else if self.floor.below(c) {
            Some(0)
        } else {
            None
        }
    }

    pub fn at_qta(&self, nq: i32, nt: i32, na: i32) -> Option<i64> {
        self.get(TriDeg::from_qta(nq, nt, na))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.cells.values().all(|v| *v >= 0)
    }

    /// Cells known in both tables (explicitly valid in at least one).
    pub fn common_cells(&self, o: &GradedDims) -> Vec<TriDeg> {
        self.valid
            .union(&o.valid)
            .copied()
            .filter(|c| self.get(*c).is_some() && o.get(*c).is_some())
            .collect()
    }

    /// Compares on the common known region; returns the number of cells compared.
    pub fn compare(&self, o: &GradedDims) -> Result<usize, Mismatch> {
        let cells = self.common_cells(o);
        for c in &cells {
            let (l, r) = (self.get(*c).unwrap(), o.get(*c).unwrap());
            if l != r {
                return Err(Mismatch { cell: *c, left: l, right: r });
            }
        }
        Ok(cells.len())
    }

    /// Multiplies by the finite series `Σ coef·X^deg`; a cell stays valid when
    /// every contributing cell is known.
    pub fn mul_poly(&self, poly: &[(TriDeg, i64)]) -> GradedDims {
        let mut floor = self.floor;
        if let Some(lo) = poly.iter().map(|(d, _)| d.doubled_qta()).reduce(|a, b| (a.0.min(b.0), a.1.min(b.1), a.2.min(b.2))) {
            floor = Floor { q2: floor.q2 + lo.0, t2: floor.t2 + lo.1, a: floor.a + lo.2 / 2 };
        }
        let mut out = GradedDims::new(self.window, floor);
        for c in self.window.cells() {
            let mut acc = 0i64;
            let mut known = true;
            for (d, k) in poly {
                match self.get(c - *d) {
                    Some(v) => acc += k * v,
                    None => {
                        known = false;
                        break;
                    }
                }
            }
            if known {
                out.set(c, acc);
            }
        }
        out
    }

    /// Divides by `(1 + X^m)` for a monomial `m` of positive `a`-degree
    /// (coefficientwise recursion from the floor upward).
    pub fn div_one_plus(&self, m: TriDeg) -> GradedDims {
        assert!(m.a > 0, "division needs a positive a-step");
        let mut out = GradedDims::new(self.window, self.floor);
        let mut cells = self.window.cells();
        cells.sort_by_key(|c| c.a);
        for c in cells {
            let prev = c - m;
            let pv = if out.valid.contains(&prev) {
                Some(out.get(prev).unwrap())
            } else if self.floor.below(prev) {
                Some(0)
            } else {
                None
            };
            if let (Some(p), Some(v)) = (pv, self.get(c)) {
                out.set(c, v - p);
            }
        }
        out
    }

    /// Relabels every cell `c ↦ c + d`.
    pub fn shift(&self, d: TriDeg) -> GradedDims {
        GradedDims {
            window: self.window.shifted(d),
            cells: self.cells.iter().map(|(c, v)| (*c + d, *v)).collect(),
            valid: self.valid.iter().map(|c| *c + d).collect(),
            floor: self.floor.shifted(d),
        }
    }

    /// Restricts known cells to `w`.
    pub fn restrict(&self, w: &SeriesWindow) -> GradedDims {
        let mut out = GradedDims::new(self.window.intersect(w), self.floor);
        for c in &self.valid {
            if w.contains(*c) {
                out.set(*c, self.get(*c).unwrap());
            }
        }
        out
    }

    /// Keeps only cells with the given `a`-degree.
    pub fn a_part(&self, a: i32) -> GradedDims {
        let mut w = self.window;
        w.a_min = a.max(w.a_min);
        w.a_max = a.min(w.a_max);
        self.restrict(&w)
    }

    /// Keeps the cells satisfying `f`.
    pub fn filter(&self, f: impl Fn(TriDeg) -> bool) -> GradedDims {
        let mut out = GradedDims::new(self.window, self.floor);
        for c in &self.valid {
            if f(*c) {
                out.set(*c, self.get(*c).unwrap());
            }
        }
        out
    }

    /// `(n_q, n_t, n_a) ↦ dim` for all nonzero cells; errors on half-integral cells.
    pub fn qta_table(&self) -> Result<BTreeMap<(i32, i32, i32), i64>, SeriesError> {
        let mut m = BTreeMap::new();
        for (c, v) in &self.cells {
            let e = c.qta().ok_or(SeriesError::NonIntegral(*c))?;
            m.insert(e, *v);
        }
        Ok(m)
    }

    pub fn total(&self) -> i64 {
        self.cells.values().sum()
    }
}

/// A rational function `N / Π(1 − q^i t^j a^k)^{m}` with integer numerator.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RatFn {
    pub num: Vec<((i32, i32, i32), i64)>,
    pub den: Vec<(i32, i32, i32)>,
}

impl RatFn {
    pub fn one() -> RatFn {
        RatFn { num: vec![((0, 0, 0), 1)], den: vec![] }
    }

    /// Numerator given as `(coef, n_q, n_t, n_a)` terms.
    pub fn poly(terms: &[(i64, i32, i32, i32)]) -> RatFn {
        RatFn { num: terms.iter().map(|&(c, q, t, a)| ((q, t, a), c)).collect(), den: vec![] }
    }

    pub fn over(mut self, factor: (i32, i32, i32), power: usize) -> RatFn {
        for _ in 0..power {
            self.den.push(factor);
        }
        self
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        let mut num: BTreeMap<(i32, i32, i32), i64> = BTreeMap::new();
        for (e1, c1) in &self.num {
            for (e2, c2) in &o.num {
                *num.entry((e1.0 + e2.0, e1.1 + e2.1, e1.2 + e2.2)).or_default() += c1 * c2;
            }
        }
        let mut den = self.den.clone();
        den.extend(o.den.iter().copied());
        RatFn { num: num.into_iter().filter(|e| e.1 != 0).collect(), den }
    }

    pub fn pow(&self, k: usize) -> RatFn {
        (0..k).fold(RatFn::one(), |acc, _| acc.mul(self))
    }
}

/// Expands `f` on the integral cells of `window`. Exact: every integral cell of
/// the window is valid and cells with negative exponents are known zeros.
pub fn expand_closed_form(f: &RatFn, window: &SeriesWindow) -> Result<GradedDims, SeriesError> {
    for &(i, j, k) in &f.den {
        if i < 0 || j < 0 || k < 0 || (i, j, k) == (0, 0, 0) {
            return Err(SeriesError::NonExpandable(i, j, k));
        }
    }
    let nq = (window.q_max.div_euclid(2)).max(0) as usize;
    let nt = (window.t_max.div_euclid(2)).max(0) as usize;
    let na = window.a_max.max(0) as usize;
    let min_e = f.num.iter().map(|(e, _)| e.0.min(e.1).min(e.2)).min().unwrap_or(0);
    if min_e < 0 {
        return Err(SeriesError::Window("numerator exponents must be nonnegative".into()));
    }
    let idx = |q: usize, t: usize, a: usize| (q * (nt + 1) + t) * (na + 1) + a;
    let mut arr = vec![0i64; (nq + 1) * (nt + 1) * (na + 1)];
    for ((q, t, a), c) in &f.num {
        let (q, t, a) = (*q as usize, *t as usize, *a as usize);
        if q <= nq && t <= nt && a <= na {
            arr[idx(q, t, a)] += c;
        }
    }
    for &(i, j, k) in &f.den {
        let (i, j, k) = (i as usize, j as usize, k as usize);
        for q in 0..=nq {
            for t in 0..=nt {
                for a in 0..=na {
                    if q >= i && t >= j && a >= k {
                        let prev = arr[idx(q - i, t - j, a - k)];
                        arr[idx(q, t, a)] += prev;
                    }
                }
            }
        }
    }
    let mut out = GradedDims::new(*window, Floor { q2: 0, t2: 0, a: 0 });
    for c in window.integral_cells() {
        let (q, t, a) = c.qta().unwrap();
        let v = if q < 0 || t < 0 || a < 0 { 0 } else { arr[idx(q as usize, t as usize, a as usize)] };
        out.set(c, v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unknot() -> RatFn {
        RatFn::poly(&[(1, 0, 0, 0), (1, 0, 0, 1)]).over((1, 0, 0), 1).over((0, 1, 0), 1)
    }

    #[test]
    fn unknot_coefficients() {
        let g = expand_closed_form(&unknot(), &SeriesWindow::qta(3, 1)).unwrap();
        assert_eq!(g.at_qta(0, 0, 0), Some(1));
        assert_eq!(g.at_qta(3, 2, 1), Some(1));
        assert_eq!(g.at_qta(-1, 0, 0), Some(0));
    }

    #[test]
    fn hopf_a0_coefficient() {
        let f = RatFn::poly(&[(1, 1, 0, 0), (1, 0, 1, 0), (-1, 1, 1, 0)]).over((1, 0, 0), 2).over((0, 1, 0), 2);
        let g = expand_closed_form(&f, &SeriesWindow::qta(2, 0)).unwrap();
        assert_eq!(g.at_qta(1, 1, 0), Some(3));
    }

    #[test]
    fn geometric_series() {
        let f = RatFn::one().over((1, 0, 0), 1);
        let g = expand_closed_form(&f, &SeriesWindow::qta(5, 0)).unwrap();
        for i in 0..=5 {
            assert_eq!(g.at_qta(i, 0, 0), Some(1));
        }
    }

    #[test]
    fn rejects_bad_denominator() {
        let f = RatFn::one().over((0, 0, 0), 1);
        assert!(expand_closed_form(&f, &SeriesWindow::qta(1, 0)).is_err());
    }

    #[test]
    fn division_inverts_multiplication() {
        let g = expand_closed_form(&unknot(), &SeriesWindow::qta(3, 1)).unwrap();
        let ratio = g.mul_poly(&[(TriDeg::ZERO, 1), (TriDeg::from_qta(1, 0, 0), -1)]);
        let ratio = ratio.mul_poly(&[(TriDeg::ZERO, 1), (TriDeg::from_qta(0, 1, 0), -1)]);
        let ratio = ratio.div_one_plus(TriDeg::from_qta(0, 0, 1));
        assert_eq!(ratio.cells.len(), 1);
        assert_eq!(ratio.at_qta(0, 0, 0), Some(1));
    }
}
