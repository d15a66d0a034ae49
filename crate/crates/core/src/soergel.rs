//! Bott–Samelson bimodules as free left `R`-modules with right-action matrices.

use crate::algebra::polymat::eval_at_matrices;
use crate::algebra::{MPoly, Mono, PolyMat, Rat, VarSet};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A graded `(R,R)`-bimodule free as a left module.
///
/// `shifts[p]` is the degree of the `p`-th left generator; `right_x[j]` is
/// right multiplication by `x_{j+1}`, with entry `(p, q)` the coefficient of
/// generator `p` in `e_q · x_{j+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bimodule {
    pub n: usize,
    pub shifts: Vec<i32>,
    pub right_x: Vec<PolyMat>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SoergelError {
    #[error("generator index {0} out of range for {1} strands")]
    IndexOutOfRange(usize, usize),
    #[error("strand mismatch: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Bimodule {
    pub fn vars(&self) -> VarSet {
        VarSet::x(self.n)
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    /// Checks commutation, homogeneity and balance of the right action.
    pub fn validate(&self) -> Result<(), SoergelError> {
        let r = self.rank();
        if self.right_x.len() != self.n {
            return Err(SoergelError::Invariant("wrong number of right-action matrices".into()));
        }
        for (j, x) in self.right_x.iter().enumerate() {
            if x.shape() != (r, r) {
                return Err(SoergelError::Invariant(format!("right_x[{j}] has wrong shape")));
            }
            for (p, q, e) in x.iter() {
                let want = 2 + self.shifts[q] - self.shifts[p];
                if e.homogeneous_degree().map(|d| d.q) != Some(want) {
                    return Err(SoergelError::Invariant(format!("right_x[{j}] entry ({p},{q}) not of degree {want}")));
                }
            }
        }
        for j in 0..self.n {
            for k in j + 1..self.n {
                if self.right_x[j].mul(&self.right_x[k]) != self.right_x[k].mul(&self.right_x[j]) {
                    return Err(SoergelError::Invariant(format!("right_x[{j}] and right_x[{k}] do not commute")));
                }
            }
        }
        let vs = self.vars();
        let mut sum = PolyMat::zero(vs, r, r);
        let mut e1 = MPoly::zero(vs);
        for j in 0..self.n {
            sum = sum.add(&self.right_x[j]);
            e1 = &e1 + &MPoly::x(vs, j);
        }
        if sum != PolyMat::scalar(vs, r, &e1) {
            return Err(SoergelError::Invariant("right actions are not balanced".into()));
        }
        Ok(())
    }

    /// The same bimodule with every generator degree lowered by `s` (the grading shift `(s)`).
    pub fn shift(&self, s: i32) -> Bimodule {
        Bimodule { n: self.n, shifts: self.shifts.iter().map(|d| d - s).collect(), right_x: self.right_x.clone() }
    }

    pub fn zero(n: usize) -> Bimodule {
        let vs = VarSet::x(n);
        Bimodule { n, shifts: vec![], right_x: (0..n).map(|_| PolyMat::zero(vs, 0, 0)).collect() }
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(parts: &[&Bimodule]) -> Bimodule {
        let n = parts.first().map_or(1, |b| b.n);
        let vs = VarSet::x(n);
        let r: usize = parts.iter().map(|b| b.rank()).sum();
        let mut shifts = Vec::with_capacity(r);
        let mut right_x: Vec<PolyMat> = (0..n).map(|_| PolyMat::zero(vs, r, r)).collect();
        let mut off = 0;
        for b in parts {
            assert_eq!(b.n, n, "strand mismatch in direct sum");
            shifts.extend(b.shifts.iter().copied());
            for j in 0..n {
                right_x[j].add_block(off, off, &b.right_x[j]);
            }
            off += b.rank();
        }
        Bimodule { n, shifts, right_x }
    }

    /// Restriction to the generators `idx`, which must span a sub-bimodule.
    pub fn restrict(&self, idx: &[usize]) -> Bimodule {
        Bimodule {
            n: self.n,
            shifts: idx.iter().map(|&i| self.shifts[i]).collect(),
            right_x: self.right_x.iter().map(|x| x.select(idx, idx)).collect(),
        }
    }
}

/// The identity bimodule `R` on `n` strands.
pub fn unit_bimodule(n: usize) -> Bimodule {
    assert!(n >= 1);
    let vs = VarSet::x(n);
    Bimodule { n, shifts: vec![0], right_x: (0..n).map(|j| PolyMat::scalar(vs, 1, &MPoly::x(vs, j))).collect() }
}

/// `B_i = R ⊗_{R^{s_i}} R(1)` with left basis `{1⊗1, 1⊗x_{i+1}}` in degrees `{-1, 1}`.
pub fn bs_generator(n: usize, i: usize) -> Result<Bimodule, SoergelError> {
    if i == 0 || i >= n {
        return Err(SoergelError::IndexOutOfRange(i, n));
    }
    let vs = VarSet::x(n);
    let (a, b) = (MPoly::x(vs, i - 1), MPoly::x(vs, i));
    let e1 = &a + &b;
    let e2 = &a * &b;
    let zero = MPoly::zero(vs);
    let one = MPoly::one(vs);
    let mut right_x: Vec<PolyMat> = (0..n).map(|j| PolyMat::scalar(vs, 2, &MPoly::x(vs, j))).collect();
    // 1⊗x_{i+1}^2 = -x_i x_{i+1}(1⊗1) + (x_i + x_{i+1})(1⊗x_{i+1}).
    right_x[i] = PolyMat::from_rows(vs, vec![vec![zero.clone(), e2.neg()], vec![one.clone(), e1.clone()]]);
    // 1⊗x_i = (x_i + x_{i+1})(1⊗1) - 1⊗x_{i+1}.
    right_x[i - 1] = PolyMat::from_rows(vs, vec![vec![e1.clone(), e2.clone()], vec![one.neg(), zero]]);
    let m = Bimodule { n, shifts: vec![-1, 1], right_x };
    debug_assert!(m.validate().is_ok());
    Ok(m)
}

/// `M ⊗_R N`; generator `(p, q)` has index `p·rank(N) + q`.
pub fn tensor_bimodule(m: &Bimodule, n: &Bimodule) -> Result<Bimodule, SoergelError> {
    if m.n != n.n {
        return Err(SoergelError::StrandMismatch(m.n, n.n));
    }
    let (rm, rn) = (m.rank(), n.rank());
    let vs = m.vars();
    let mut shifts = Vec::with_capacity(rm * rn);
    for p in 0..rm {
        for q in 0..rn {
            shifts.push(m.shifts[p] + n.shifts[q]);
        }
    }
    let mut cache = BTreeMap::new();
    let mut right_x = Vec::with_capacity(m.n);
    for j in 0..m.n {
        right_x.push(id_tensor_matrix(m, &n.right_x[j], rn, &mut cache, vs));
    }
    let out = Bimodule { n: m.n, shifts, right_x };
    debug_assert!(out.validate().is_ok());
    Ok(out)
}

/// Matrix of `Id_M ⊗ g` where `g` has matrix `gm` (`rows × cols` over `R`)
/// and `cols = rank` of the source second factor.
fn id_tensor_matrix(m: &Bimodule, gm: &PolyMat, _cols: usize, cache: &mut BTreeMap<Mono, PolyMat>, vs: VarSet) -> PolyMat {
    let rm = m.rank();
    let (gr, gc) = gm.shape();
    let mut out = PolyMat::zero(vs, rm * gr, rm * gc);
    if rm == 0 {
        return out;
    }
    for (q2, q, g) in gm.iter() {
        let block = eval_at_matrices(g, &m.right_x, cache);
        for (p2, p, e) in block.iter() {
            out.set(p2 * gr + q2, p * gc + q, e.clone());
        }
    }
    out
}

/// A degree-`degree` bimodule map; `matrix` is `rank(target) × rank(source)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BimoduleMap {
    pub source: Bimodule,
    pub target: Bimodule,
    pub matrix: PolyMat,
    pub degree: i32,
}

impl BimoduleMap {
    pub fn new(source: Bimodule, target: Bimodule, matrix: PolyMat, degree: i32) -> Result<BimoduleMap, SoergelError> {
        let f = BimoduleMap { source, target, matrix, degree };
        f.validate()?;
        Ok(f)
    }

    pub fn identity(m: &Bimodule) -> BimoduleMap {
        BimoduleMap { source: m.clone(), target: m.clone(), matrix: PolyMat::identity(m.vars(), m.rank()), degree: 0 }
    }

    pub fn zero(source: &Bimodule, target: &Bimodule, degree: i32) -> BimoduleMap {
        BimoduleMap {
            source: source.clone(),
            target: target.clone(),
            matrix: PolyMat::zero(source.vars(), target.rank(), source.rank()),
            degree,
        }
    }

    /// Checks homogeneity and that the map intertwines the right actions.
    pub fn validate(&self) -> Result<(), SoergelError> {
        if self.matrix.shape() != (self.target.rank(), self.source.rank()) {
            return Err(SoergelError::Invariant("map matrix has wrong shape".into()));
        }
        for (p, q, e) in self.matrix.iter() {
            let want = self.degree + self.source.shifts[q] - self.target.shifts[p];
            if e.homogeneous_degree().map(|d| d.q) != Some(want) {
                return Err(SoergelError::Invariant(format!("map entry ({p},{q}) not of degree {want}")));
            }
        }
        for j in 0..self.source.n {
            if self.matrix.mul(&self.source.right_x[j]) != self.target.right_x[j].mul(&self.matrix) {
                return Err(SoergelError::Invariant(format!("map does not intertwine right_x[{j}]")));
            }
        }
        Ok(())
    }

    pub fn compose(&self, first: &BimoduleMap) -> BimoduleMap {
        BimoduleMap {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&first.matrix),
            degree: self.degree + first.degree,
        }
    }
}

/// Matrix of `Id_M ⊗ g : M⊗N → M⊗N'` for a matrix `g` of a map `N → N'`.
pub fn id_tensor(m: &Bimodule, g: &PolyMat) -> PolyMat {
    let mut cache = BTreeMap::new();
    id_tensor_matrix(m, g, g.cols, &mut cache, m.vars())
}

/// Matrix of `f ⊗ Id_N : M⊗N → M'⊗N` for a matrix `f` of a map `M → M'`.
pub fn tensor_id(f: &PolyMat, n_rank: usize) -> PolyMat {
    let (fr, fc) = f.shape();
    let mut out = PolyMat::zero(f.vars, fr * n_rank, fc * n_rank);
    for (p2, p, e) in f.iter() {
        for q in 0..n_rank {
            out.set(p2 * n_rank + q, p * n_rank + q, e.clone());
        }
    }
    out
}

/// The dot maps `b : B_i → R(1)` and `b* : R(-1) → B_i`.
///
/// Both have degree 0 between the shifted objects, equivalently degree 1 as
/// maps `B_i → R` and `R → B_i`.
pub fn dot_maps(n: usize, i: usize) -> Result<(BimoduleMap, BimoduleMap), SoergelError> {
    let b_i = bs_generator(n, i)?;
    let vs = b_i.vars();
    let r = unit_bimodule(n);
    let b = PolyMat::from_rows(vs, vec![vec![MPoly::one(vs), MPoly::x(vs, i)]]);
    let bstar = PolyMat::from_rows(vs, vec![vec![MPoly::x(vs, i - 1)], vec![MPoly::one(vs).neg()]]);
    let b = BimoduleMap::new(b_i.clone(), r.shift(1), b, 0)?;
    let bstar = BimoduleMap::new(r.shift(-1), b_i, bstar, 0)?;
    Ok((b, bstar))
}

/// `M ⊔ 1`: adds a free strand on the right.
pub fn include_strand(m: &Bimodule) -> Bimodule {
    let vs = VarSet::x(m.n + 1);
    let mut right_x: Vec<PolyMat> = m.right_x.iter().map(|x| x.with_vars(vs)).collect();
    right_x.push(PolyMat::scalar(vs, m.rank(), &MPoly::x(vs, m.n)));
    Bimodule { n: m.n + 1, shifts: m.shifts.clone(), right_x }
}

/// Multiplication by a rational constant as a degree-0 endomorphism.
pub fn scalar_map(m: &Bimodule, c: &Rat) -> BimoduleMap {
    BimoduleMap {
        source: m.clone(),
        target: m.clone(),
        matrix: PolyMat::identity(m.vars(), m.rank()).scale(c),
        degree: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_matrices() {
        let b = bs_generator(2, 1).unwrap();
        assert!(b.validate().is_ok());
        let vs = b.vars();
        let (x1, x2) = (MPoly::x(vs, 0), MPoly::x(vs, 1));
        assert_eq!(b.right_x[0].entry(0, 0), &x1 + &x2);
        assert_eq!(b.right_x[0].entry(0, 1), &x1 * &x2);
        assert_eq!(b.right_x[0].entry(1, 0), MPoly::one(vs).neg());
        assert!(b.right_x[0].entry(1, 1).is_zero());
    }

    #[test]
    fn tensor_ranks_and_unit_law() {
        let b = bs_generator(2, 1).unwrap();
        let bb = tensor_bimodule(&b, &b).unwrap();
        let mut s = bb.shifts.clone();
        s.sort();
        assert_eq!(s, vec![-2, 0, 0, 2]);
        assert!(bb.validate().is_ok());
        assert_eq!(tensor_bimodule(&unit_bimodule(2), &b).unwrap(), b);
        assert_eq!(tensor_bimodule(&b, &unit_bimodule(2)).unwrap(), b);
    }

    #[test]
    fn dot_map_composites() {
        let (b, bs) = dot_maps(2, 1).unwrap();
        let vs = VarSet::x(2);
        let (x1, x2) = (MPoly::x(vs, 0), MPoly::x(vs, 1));
        let bbs = b.compose(&bs);
        assert_eq!(bbs.matrix, PolyMat::scalar(vs, 1, &(&x1 - &x2)));
        let bsb = bs.compose(&b);
        let want = PolyMat::scalar(vs, 2, &x1).sub(&b.source.right_x[1]);
        assert_eq!(bsb.matrix, want);
    }

    #[test]
    fn associativity() {
        let b1 = bs_generator(3, 1).unwrap();
        let b2 = bs_generator(3, 2).unwrap();
        let l = tensor_bimodule(&tensor_bimodule(&b1, &b2).unwrap(), &b1).unwrap();
        let r = tensor_bimodule(&b1, &tensor_bimodule(&b2, &b1).unwrap()).unwrap();
        // Index (p,q,r) is p·4 + q·2 + r under both bracketings.
        assert_eq!(l, r);
    }

    #[test]
    fn include_strand_of_unit() {
        assert_eq!(include_strand(&unit_bimodule(1)), unit_bimodule(2));
    }
}
