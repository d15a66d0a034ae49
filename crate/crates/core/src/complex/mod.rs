//! Bounded complexes of Bott–Samelson bimodules, Rouquier complexes, tensor
//! products and Gaussian elimination.

pub(crate) mod elim;

use crate::algebra::PolyMat;
use crate::braid::BraidWord;
use crate::soergel::{bs_generator, dot_maps, id_tensor, tensor_bimodule, tensor_id, unit_bimodule, Bimodule, BimoduleMap};
use crate::yify::YComplex;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A bounded complex `C^{k_min} → ⋯`; `d[k] : chain(k) → chain(k+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BComplex {
    pub n: usize,
    pub k_min: i32,
    pub chain: Vec<Bimodule>,
    pub d: BTreeMap<i32, PolyMat>,
}

/// A degree-zero chain map given by its components `f[k] : C^k → D^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub source: BComplex,
    pub target: BComplex,
    pub f: BTreeMap<i32, PolyMat>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("strand mismatch: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("d∘d ≠ 0 at degree {0}")]
    NotAComplex(i32),
    #[error("{0}")]
    Invalid(String),
}

/// Block layout of `⊕_{i+j=k} C_i ⊗ D_j`, ordered by `i` ascending.
pub(crate) struct Layout {
    pub k_min: i32,
    blocks: BTreeMap<i32, Vec<(i32, usize, usize)>>,
}

impl Layout {
    pub fn new(c: &[Bimodule], ck: i32, d: &[Bimodule], dk: i32) -> Layout {
        let mut blocks: BTreeMap<i32, Vec<(i32, usize, usize)>> = BTreeMap::new();
        let k_min = ck + dk;
        let k_max = ck + c.len() as i32 - 1 + dk + d.len() as i32 - 1;
        for k in k_min..=k_max {
            let mut off = 0;
            let mut v = Vec::new();
            for (ci, cb) in c.iter().enumerate() {
                let i = ck + ci as i32;
                let j = k - i;
                if j < dk || j >= dk + d.len() as i32 {
                    continue;
                }
                let r = cb.rank() * d[(j - dk) as usize].rank();
                v.push((i, off, r));
                off += r;
            }
            blocks.insert(k, v);
        }
        Layout { k_min, blocks }
    }

    pub fn offset(&self, k: i32, i: i32) -> usize {
        self.blocks[&k].iter().find(|b| b.0 == i).map(|b| b.1).expect("block in layout")
    }

    pub fn rank(&self, k: i32) -> usize {
        self.blocks.get(&k).map_or(0, |v| v.iter().map(|b| b.2).sum())
    }

    pub fn chain_objects(&self, c: &[Bimodule], ck: i32, d: &[Bimodule], dk: i32) -> Vec<Bimodule> {
        let n = c.first().map_or(1, |b| b.n);
        self.blocks
            .iter()
            .map(|(k, v)| {
                let parts: Vec<Bimodule> = v
                    .iter()
                    .map(|(i, _, _)| {
                        let cb = &c[(i - ck) as usize];
                        let db = &d[(k - i - dk) as usize];
                        tensor_bimodule(cb, db).expect("matching strands")
                    })
                    .collect();
                let refs: Vec<&Bimodule> = parts.iter().collect();
                if refs.is_empty() {
                    Bimodule::zero(n)
                } else {
                    Bimodule::direct_sum(&refs)
                }
            })
            .collect()
    }
}

impl BComplex {
    pub fn k_max(&self) -> i32 {
        self.k_min + self.chain.len() as i32 - 1
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

    /// `R` in degree 0.
    pub fn unit(n: usize) -> BComplex {
        BComplex { n, k_min: 0, chain: vec![unit_bimodule(n)], d: BTreeMap::new() }
    }

    /// Checks the objects, the maps and `d∘d = 0`.
    pub fn validate(&self) -> Result<(), ComplexError> {
        for b in &self.chain {
            b.validate().map_err(|e| ComplexError::Invalid(e.to_string()))?;
        }
        for (k, m) in &self.d {
            let (s, t) = match (self.at(*k), self.at(k + 1)) {
                (Some(s), Some(t)) => (s, t),
                _ => return Err(ComplexError::Invalid(format!("differential at {k} leaves the support"))),
            };
            BimoduleMap::new(s.clone(), t.clone(), m.clone(), 0).map_err(|e| ComplexError::Invalid(e.to_string()))?;
            if let Some(next) = self.d.get(&(k + 1)) {
                if !next.mul(m).is_zero() {
                    return Err(ComplexError::NotAComplex(*k));
                }
            }
        }
        Ok(())
    }

    /// `[s]`: `C[s]^k = C^{k+s}` with differential `(−1)^s d`.
    pub fn shift(&self, s: i32) -> BComplex {
        let odd = s.rem_euclid(2) == 1;
        BComplex {
            n: self.n,
            k_min: self.k_min - s,
            chain: self.chain.clone(),
            d: self.d.iter().map(|(k, m)| (k - s, if odd { m.neg() } else { m.clone() })).collect(),
        }
    }

    /// Quantum shift `(s)` of every object.
    pub fn qshift(&self, s: i32) -> BComplex {
        let mut c = self.clone();
        c.chain = c.chain.iter().map(|b| b.shift(s)).collect();
        c
    }

    /// Adds a free strand on the right.
    pub fn include_strand(&self) -> BComplex {
        let vs = crate::algebra::VarSet::x(self.n + 1);
        BComplex {
            n: self.n + 1,
            k_min: self.k_min,
            chain: self.chain.iter().map(crate::soergel::include_strand).collect(),
            d: self.d.iter().map(|(k, m)| (*k, m.with_vars(vs))).collect(),
        }
    }

    fn as_y(&self) -> YComplex {
        YComplex::from_base(self, (0..self.n).collect())
    }
}

/// The Rouquier complex of a single crossing (`i` is 1-based).
///
/// `σ_i`: `B_i → R(1)` in degrees 0, 1. `σ_i⁻¹`: `R(−1) → B_i` in degrees −1, 0.
pub fn crossing(n: usize, i: usize, sign: i8) -> BComplex {
    let (b, bs) = dot_maps(n, i).expect("generator index in range");
    let bi = bs_generator(n, i).unwrap();
    let r = unit_bimodule(n);
    let mut d = BTreeMap::new();
    if sign > 0 {
        d.insert(0, b.matrix);
        BComplex { n, k_min: 0, chain: vec![bi, r.shift(1)], d }
    } else {
        d.insert(-1, bs.matrix);
        BComplex { n, k_min: -1, chain: vec![r.shift(-1), bi], d }
    }
}

/// `C ⊗ D` with the Koszul sign `(−1)^i` on `Id_{C_i} ⊗ d_D`.
pub fn tensor_complex(c: &BComplex, d: &BComplex) -> Result<BComplex, ComplexError> {
    if c.n != d.n {
        return Err(ComplexError::StrandMismatch(c.n, d.n));
    }
    let vs = crate::algebra::VarSet::x(c.n);
    let lay = Layout::new(&c.chain, c.k_min, &d.chain, d.k_min);
    let mut out: BTreeMap<i32, PolyMat> = BTreeMap::new();
    let mut put = |k: i32, r0: usize, c0: usize, block: &PolyMat| {
        let m = out.entry(k).or_insert_with(|| PolyMat::zero(vs, lay.rank(k + 1), lay.rank(k)));
        m.add_block(r0, c0, block);
    };
    for (i, f) in &c.d {
        for j in d.k_min..=d.k_max() {
            let rn = d.rank_at(j);
            if rn > 0 {
                put(i + j, lay.offset(i + j + 1, i + 1), lay.offset(i + j, *i), &tensor_id(f, rn));
            }
        }
    }
    for (j, g) in &d.d {
        for i in c.k_min..=c.k_max() {
            let ci = c.at(i).unwrap();
            if ci.rank() == 0 {
                continue;
            }
            let mut block = id_tensor(ci, g);
            if i.rem_euclid(2) == 1 {
                block = block.neg();
            }
            put(i + j, lay.offset(i + j + 1, i), lay.offset(i + j, i), &block);
        }
    }
    out.retain(|_, m| !m.is_zero());
    let chain = lay.chain_objects(&c.chain, c.k_min, &d.chain, d.k_min);
    Ok(BComplex { n: c.n, k_min: lay.k_min, chain, d: out })
}

/// Gaussian elimination along invertible components of the differential.
pub fn gaussian_eliminate(c: &BComplex) -> BComplex {
    let (r, _) = elim::eliminate(&c.as_y(), false);
    r.base()
}

/// The Rouquier complex `F(β)`, minimized after each letter.
pub fn rouquier(b: &BraidWord) -> BComplex {
    let mut c = BComplex::unit(b.n);
    for &(i, s) in &b.letters {
        c = gaussian_eliminate(&tensor_complex(&c, &crossing(b.n, i, s)).unwrap());
    }
    c
}

/// `F(β)` without elimination.
pub fn rouquier_unminimized(b: &BraidWord) -> BComplex {
    let mut c = BComplex::unit(b.n);
    for &(i, s) in &b.letters {
        c = tensor_complex(&c, &crossing(b.n, i, s)).unwrap();
    }
    c
}

impl ChainMap {
    /// Checks `d_D f = f d_C`.
    pub fn validate(&self) -> Result<(), ComplexError> {
        let vs = crate::algebra::VarSet::x(self.source.n);
        let lo = self.source.k_min.min(self.target.k_min);
        let hi = self.source.k_max().max(self.target.k_max());
        for k in lo..=hi {
            let (rs, rt, rt1) = (self.source.rank_at(k), self.target.rank_at(k + 1), self.source.rank_at(k + 1));
            let zero_f = |a: usize, b: usize| PolyMat::zero(vs, a, b);
            let fk = self.f.get(&k).cloned().unwrap_or_else(|| zero_f(self.target.rank_at(k), rs));
            let fk1 = self.f.get(&(k + 1)).cloned().unwrap_or_else(|| zero_f(rt, rt1));
            let dt = self.target.d.get(&k).cloned().unwrap_or_else(|| zero_f(rt, self.target.rank_at(k)));
            let ds = self.source.d.get(&k).cloned().unwrap_or_else(|| zero_f(rt1, rs));
            if dt.mul(&fk) != fk1.mul(&ds) {
                return Err(ComplexError::Invalid(format!("not a chain map at degree {k}")));
            }
        }
        Ok(())
    }
}

/// Mapping cone `C[1] ⊕ D` with differential `[[−d_C, 0], [f, d_D]]`.
pub fn cone(f: &ChainMap) -> BComplex {
    let c1 = f.source.shift(1);
    let d = &f.target;
    let vs = crate::algebra::VarSet::x(d.n);
    let k_min = c1.k_min.min(d.k_min);
    let k_max = c1.k_max().max(d.k_max());
    let chain: Vec<Bimodule> = (k_min..=k_max)
        .map(|k| {
            let parts: Vec<&Bimodule> = [c1.at(k), d.at(k)].into_iter().flatten().collect();
            if parts.is_empty() {
                Bimodule::zero(d.n)
            } else {
                Bimodule::direct_sum(&parts)
            }
        })
        .collect();
    let rank = |k: i32| chain.get((k - k_min) as usize).map_or(0, |b| b.rank());
    let mut out: BTreeMap<i32, PolyMat> = BTreeMap::new();
    let mut put = |k: i32, r0: usize, c0: usize, block: &PolyMat| {
        let m = out.entry(k).or_insert_with(|| PolyMat::zero(vs, rank(k + 1), rank(k)));
        m.add_block(r0, c0, block);
    };
    for (k, g) in &c1.d {
        put(*k, 0, 0, g);
    }
    for (k, g) in &d.d {
        put(*k, c1.rank_at(k + 1), c1.rank_at(*k), g);
    }
    for (k, g) in &f.f {
        put(k - 1, c1.rank_at(*k), 0, g);
    }
    out.retain(|_, m| !m.is_zero());
    BComplex { n: d.n, k_min, chain, d: out }
}

/// Homotopy-invariant size: total rank after elimination.
pub fn minimal_rank(c: &BComplex) -> usize {
    gaussian_eliminate(c).total_rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_braid;

    #[test]
    fn crossings_are_complexes() {
        for s in [1, -1] {
            assert!(crossing(3, 2, s).validate().is_ok());
        }
    }

    #[test]
    fn inverse_pair_reduces_to_unit() {
        for w in ["s1 s1^-1", "s1^-1 s1", "s2 s1 s2^-1 s1^-1 s1 s2 s1^-1 s2^-1"] {
            let b = parse_braid(w).unwrap();
            let c = rouquier(&b);
            assert!(c.validate().is_ok());
            assert_eq!(c.total_rank(), 1, "{w}");
            assert_eq!(c.k_min, 0);
            assert_eq!(c.chain[0].shifts, vec![0]);
        }
    }

    #[test]
    fn double_crossing_has_three_terms() {
        let c = rouquier(&parse_braid("s1^2").unwrap());
        assert!(c.validate().is_ok());
        let ranks: Vec<usize> = c.chain.iter().map(|b| b.rank()).collect();
        assert_eq!(ranks, vec![2, 2, 1]);
    }

    #[test]
    fn unminimized_tensor_is_complex() {
        let c = rouquier_unminimized(&parse_braid("s1 s2 s1^-1").unwrap());
        assert!(c.validate().is_ok());
        assert_eq!(c.total_rank(), 27);
    }

    #[test]
    fn cone_of_identity_is_contractible() {
        let c = crossing(2, 1, 1);
        let f: BTreeMap<i32, PolyMat> = (c.k_min..=c.k_max())
            .map(|k| (k, PolyMat::identity(crate::algebra::VarSet::x(2), c.rank_at(k))))
            .collect();
        let m = ChainMap { source: c.clone(), target: c, f };
        assert!(m.validate().is_ok());
        let cn = cone(&m);
        assert!(cn.validate().is_ok());
        assert_eq!(minimal_rank(&cn), 0);
    }
}
