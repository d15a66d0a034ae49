//! Sparse matrices with polynomial entries. Entry `(r, c)` is the coefficient
//! of basis element `r` in the image of basis element `c`.

use super::poly::{MPoly, Mono, VarSet};
use super::rat::Rat;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "PolyMatRepr", try_from = "PolyMatRepr")]
pub struct PolyMat {
    pub vars: VarSet,
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(u32, u32), MPoly>,
}

#[derive(Serialize, Deserialize)]
struct PolyMatRepr {
    vars: VarSet,
    rows: usize,
    cols: usize,
    entries: Vec<(u32, u32, MPoly)>,
}

impl From<PolyMat> for PolyMatRepr {
    fn from(m: PolyMat) -> PolyMatRepr {
        let entries = m.entries.into_iter().map(|((r, c), p)| (r, c, p)).collect();
        PolyMatRepr { vars: m.vars, rows: m.rows, cols: m.cols, entries }
    }
}

impl TryFrom<PolyMatRepr> for PolyMat {
    type Error = String;
    fn try_from(r: PolyMatRepr) -> Result<PolyMat, String> {
        let mut m = PolyMat::zero(r.vars, r.rows, r.cols);
        for (i, j, p) in r.entries {
            if i as usize >= r.rows || j as usize >= r.cols || p.vars() != r.vars {
                return Err(format!("bad matrix entry ({i},{j})"));
            }
            m.set(i as usize, j as usize, p);
        }
        Ok(m)
    }
}

impl PolyMat {
    pub fn zero(vars: VarSet, rows: usize, cols: usize) -> PolyMat {
        PolyMat { vars, rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(vars: VarSet, n: usize) -> PolyMat {
        PolyMat::scalar(vars, n, &MPoly::one(vars))
    }

    pub fn scalar(vars: VarSet, n: usize, p: &MPoly) -> PolyMat {
        let mut m = PolyMat::zero(vars, n, n);
        for i in 0..n {
            m.set(i, i, p.clone());
        }
        m
    }

    pub fn from_rows(vars: VarSet, rows: Vec<Vec<MPoly>>) -> PolyMat {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        let mut m = PolyMat::zero(vars, nr, nc);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), nc, "ragged rows");
            for (j, p) in row.into_iter().enumerate() {
                m.set(i, j, p);
            }
        }
        m
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&MPoly> {
        self.entries.get(&(r as u32, c as u32))
    }

    pub fn entry(&self, r: usize, c: usize) -> MPoly {
        self.get(r, c).cloned().unwrap_or_else(|| MPoly::zero(self.vars))
    }

    pub fn set(&mut self, r: usize, c: usize, p: MPoly) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        debug_assert_eq!(p.vars(), self.vars);
        if p.is_zero() {
            self.entries.remove(&(r as u32, c as u32));
        } else {
            self.entries.insert((r as u32, c as u32), p);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, p: &MPoly) {
        if p.is_zero() {
            return;
        }
        let s = match self.get(r, c) {
            Some(q) => q + p,
            None => p.clone(),
        };
        self.set(r, c, s);
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &MPoly)> {
        self.entries.iter().map(|((r, c), p)| (*r as usize, *c as usize, p))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, &MPoly)> {
        self.entries.range((r as u32, 0)..(r as u32 + 1, 0)).map(|((_, c), p)| (*c as usize, p))
    }

    pub fn add(&self, o: &PolyMat) -> PolyMat {
        assert_eq!(self.shape(), o.shape(), "shape mismatch");
        let mut m = self.clone();
        for (r, c, p) in o.iter() {
            m.add_to(r, c, p);
        }
        m
    }

    pub fn sub(&self, o: &PolyMat) -> PolyMat {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> PolyMat {
        self.map(|p| p.neg())
    }

    pub fn scale(&self, c: &Rat) -> PolyMat {
        self.map(|p| p.scale(c))
    }

    pub fn mul_poly(&self, q: &MPoly) -> PolyMat {
        self.map(|p| p * q)
    }

    pub fn map(&self, f: impl Fn(&MPoly) -> MPoly) -> PolyMat {
        let mut m = PolyMat::zero(self.vars, self.rows, self.cols);
        for (r, c, p) in self.iter() {
            m.set(r, c, f(p));
        }
        m
    }

    /// Matrix product `self · o`.
    pub fn mul(&self, o: &PolyMat) -> PolyMat {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let mut acc: BTreeMap<(u32, u32), Vec<(Mono, Rat)>> = BTreeMap::new();
        for (&(i, k), a) in &self.entries {
            for (j, b) in o.row(k as usize) {
                let prod = a * b;
                acc.entry((i, j as u32)).or_default().extend(prod.terms().iter().cloned());
            }
        }
        let mut m = PolyMat::zero(self.vars, self.rows, o.cols);
        for ((i, j), terms) in acc {
            m.set(i as usize, j as usize, MPoly::from_terms(self.vars, terms));
        }
        m
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> PolyMat {
        let col_pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut m = PolyMat::zero(self.vars, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (c, p) in self.row(r) {
                if let Some(&j) = col_pos.get(&c) {
                    m.set(i, j, p.clone());
                }
            }
        }
        m
    }

    /// Places `block` at offset `(r0, c0)`, adding to existing entries.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &PolyMat) {
        for (r, c, p) in block.iter() {
            self.add_to(r0 + r, c0 + c, p);
        }
    }

    pub fn with_vars(&self, vars: VarSet) -> PolyMat {
        let mut m = PolyMat::zero(vars, self.rows, self.cols);
        for (r, c, p) in self.iter() {
            m.set(r, c, p.with_vars(vars));
        }
        m
    }

    /// `true` if every entry is a constant.
    pub fn is_constant(&self) -> bool {
        self.entries.values().all(|p| p.is_constant())
    }

    pub fn transpose(&self) -> PolyMat {
        let mut m = PolyMat::zero(self.vars, self.cols, self.rows);
        for (r, c, p) in self.iter() {
            m.set(c, r, p.clone());
        }
        m
    }
}

/// Evaluates `p(x_1..x_n)` with `x_j` replaced by the commuting matrices `mats[j]`.
/// `cache` memoizes monomials across calls on the same matrices.
pub fn eval_at_matrices(p: &MPoly, mats: &[PolyMat], cache: &mut BTreeMap<Mono, PolyMat>) -> PolyMat {
    let dim = mats[0].rows;
    let vars = mats[0].vars;
    let mut acc = PolyMat::zero(vars, dim, dim);
    for (m, c) in p.terms() {
        let mm = mono_at_matrices(*m, mats, cache);
        acc = acc.add(&mm.scale(c));
    }
    acc
}

fn mono_at_matrices(m: Mono, mats: &[PolyMat], cache: &mut BTreeMap<Mono, PolyMat>) -> PolyMat {
    if let Some(r) = cache.get(&m) {
        return r.clone();
    }
    let dim = mats[0].rows;
    let res = if m == Mono::ONE {
        PolyMat::identity(mats[0].vars, dim)
    } else {
        let slot = (0..mats.len()).find(|&s| m.exp(s) > 0).expect("monomial outside x variables");
        let rest = Mono(m.0 - Mono::var(slot).0);
        mats[slot].mul(&mono_at_matrices(rest, mats, cache))
    };
    cache.insert(m, res.clone());
    res
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_identity() {
        let vs = VarSet::x(2);
        let x1 = MPoly::x(vs, 0);
        let a = PolyMat::from_rows(vs, vec![vec![x1.clone(), MPoly::one(vs)], vec![MPoly::zero(vs), x1.clone()]]);
        let i = PolyMat::identity(vs, 2);
        assert_eq!(a.mul(&i), a);
        let sq = a.mul(&a);
        assert_eq!(sq.entry(0, 1), x1.scale(&Rat::from_int(2)));
    }
}
