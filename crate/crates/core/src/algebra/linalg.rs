//! Sparse exact linear algebra over `Rat`: echelon forms, kernels, ranks.

use super::rat::Rat;

/// Sparse vector: strictly increasing indices, no zero entries.
pub type SparseVec = Vec<(u32, Rat)>;

/// `v + c·w`.
pub fn axpy(v: &[(u32, Rat)], c: &Rat, w: &[(u32, Rat)]) -> SparseVec {
    if c.is_zero() {
        return v.to_vec();
    }
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < w.len() {
        if j == w.len() || (i < v.len() && v[i].0 < w[j].0) {
            out.push(v[i].clone());
            i += 1;
        } else if i == v.len() || w[j].0 < v[i].0 {
            out.push((w[j].0, c * &w[j].1));
            j += 1;
        } else {
            let s = &v[i].1 + &(c * &w[j].1);
            if !s.is_zero() {
                out.push((v[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale_vec(v: &[(u32, Rat)], c: &Rat) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x * c)).collect()
}

/// Builds a sparse vector from unsorted entries, summing duplicates.
pub fn collect_vec(mut entries: Vec<(u32, Rat)>) -> SparseVec {
    entries.sort_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(entries.len());
    for (i, c) in entries {
        match out.last_mut() {
            Some((j, d)) if *j == i => *d += &c,
            _ => out.push((i, c)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

pub fn get(v: &[(u32, Rat)], i: u32) -> Rat {
    match v.binary_search_by_key(&i, |e| e.0) {
        Ok(k) => v[k].1.clone(),
        Err(_) => Rat::zero(),
    }
}

const NONE: u32 = u32::MAX;

/// Row-echelon form keyed by leading index. Every row is normalized so its
/// pivot entry is 1 and has no entries left of the pivot.
#[derive(Clone, Debug)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    pivot_row: Vec<u32>,
}

impl Echelon {
    pub fn new(dim: usize) -> Echelon {
        Echelon { rows: Vec::new(), pivot_row: vec![NONE; dim] }
    }

    pub fn dim(&self) -> usize {
        self.pivot_row.len()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn is_pivot(&self, col: u32) -> bool {
        self.pivot_row[col as usize] != NONE
    }

    pub fn pivot_col(&self, row: usize) -> u32 {
        self.rows[row][0].0
    }

    fn row_for(&self, col: u32) -> Option<usize> {
        let r = self.pivot_row[col as usize];
        (r != NONE).then_some(r as usize)
    }

    /// Reduces until the leading index is not a pivot (or the vector vanishes).
    pub fn reduce_leading(&self, mut v: SparseVec) -> SparseVec {
        while let Some((c, x)) = v.first() {
            match self.row_for(*c) {
                Some(r) => {
                    let f = -x;
                    v = axpy(&v, &f, &self.rows[r]);
                }
                None => break,
            }
        }
        v
    }

    /// Reduces every pivot coordinate to zero. Two vectors with the same
    /// class modulo the row span reduce to the same result.
    pub fn reduce_full(&self, mut v: SparseVec) -> SparseVec {
        let mut pos = 0;
        while pos < v.len() {
            let (c, x) = (v[pos].0, v[pos].1.clone());
            match self.row_for(c) {
                Some(r) => {
                    v = axpy(&v, &(-&x), &self.rows[r]);
                }
                None => pos += 1,
            }
        }
        v
    }

    /// Adds `v` to the span; returns `true` if it was independent.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let v = self.reduce_leading(v);
        if v.is_empty() {
            return false;
        }
        let inv = v[0].1.inv();
        let v = scale_vec(&v, &inv);
        self.pivot_row[v[0].0 as usize] = self.rows.len() as u32;
        self.rows.push(v);
        true
    }

    /// Writes `v` as a combination of the stored rows, if it lies in their span.
    pub fn decompose(&self, mut v: SparseVec) -> Option<Vec<(usize, Rat)>> {
        let mut coeffs = Vec::new();
        while let Some((c, x)) = v.first() {
            let r = self.row_for(*c)?;
            let x = x.clone();
            v = axpy(&v, &(-&x), &self.rows[r]);
            coeffs.push((r, x));
        }
        Some(coeffs)
    }
}

/// Rank of a family of vectors in a space of dimension `dim`.
pub fn rank(dim: usize, vectors: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Echelon::new(dim);
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// A basis of relations `Σ c_i v_i = 0` among `vectors` (living in dimension `dim`).
/// Each relation is a sparse vector over the indices of `vectors`.
pub fn kernel(dim: usize, vectors: &[SparseVec]) -> Vec<SparseVec> {
    let mut pivot_row = vec![NONE; dim];
    let mut rows: Vec<(SparseVec, SparseVec)> = Vec::new();
    let mut out = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let mut v = v.clone();
        let mut track: SparseVec = vec![(i as u32, Rat::one())];
        while let Some((c, x)) = v.first() {
            let r = pivot_row[*c as usize];
            if r == NONE {
                break;
            }
            let f = -x;
            let (row, rt) = &rows[r as usize];
            v = axpy(&v, &f, row);
            track = axpy(&track, &f, rt);
        }
        if v.is_empty() {
            out.push(track);
        } else {
            let inv = v[0].1.inv();
            pivot_row[v[0].0 as usize] = rows.len() as u32;
            rows.push((scale_vec(&v, &inv), scale_vec(&track, &inv)));
        }
    }
    out
}

/// Sparse matrix stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColMat {
    pub nrows: usize,
    pub cols: Vec<SparseVec>,
}

impl ColMat {
    pub fn zero(nrows: usize, ncols: usize) -> ColMat {
        ColMat { nrows, cols: vec![Vec::new(); ncols] }
    }

    pub fn identity(n: usize) -> ColMat {
        ColMat { nrows: n, cols: (0..n).map(|i| vec![(i as u32, Rat::one())]).collect() }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn apply(&self, v: &[(u32, Rat)]) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (j, x) in v {
            acc = axpy(&acc, x, &self.cols[*j as usize]);
        }
        acc
    }

    /// `self · o`.
    pub fn mul(&self, o: &ColMat) -> ColMat {
        assert_eq!(self.ncols(), o.nrows, "dimension mismatch");
        ColMat { nrows: self.nrows, cols: o.cols.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn add(&self, o: &ColMat) -> ColMat {
        assert_eq!((self.nrows, self.ncols()), (o.nrows, o.ncols()));
        ColMat {
            nrows: self.nrows,
            cols: self.cols.iter().zip(&o.cols).map(|(a, b)| axpy(a, &Rat::one(), b)).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> ColMat {
        ColMat { nrows: self.nrows, cols: self.cols.iter().map(|v| scale_vec(v, c)).collect() }
    }

    pub fn rank(&self) -> usize {
        rank(self.nrows, self.cols.iter().cloned())
    }

    pub fn entry(&self, i: usize, j: usize) -> Rat {
        get(&self.cols[j], i as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rat {
        Rat::from_int(n)
    }

    fn dense(v: &[i64]) -> SparseVec {
        v.iter().enumerate().filter(|e| *e.1 != 0).map(|(i, x)| (i as u32, r(*x))).collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        let vs = vec![dense(&[1, 2, 3]), dense(&[2, 4, 6]), dense(&[0, 1, 1]), dense(&[1, 3, 4])];
        assert_eq!(rank(3, vs), 2);
    }

    #[test]
    fn kernel_relations_vanish() {
        let vs = vec![dense(&[1, 2, 3]), dense(&[2, 4, 6]), dense(&[0, 1, 1]), dense(&[1, 3, 4])];
        let k = kernel(3, &vs);
        assert_eq!(k.len(), 2);
        for rel in &k {
            let mut acc = Vec::new();
            for (i, c) in rel {
                acc = axpy(&acc, c, &vs[*i as usize]);
            }
            assert!(acc.is_empty());
        }
    }

    #[test]
    fn full_reduction_is_canonical() {
        let mut e = Echelon::new(3);
        e.insert(dense(&[1, 1, 0]));
        let a = e.reduce_full(dense(&[0, 1, 5]));
        let b = e.reduce_full(dense(&[2, 3, 5]));
        assert_eq!(a, b);
        assert!(!e.is_pivot(1));
    }

    #[test]
    fn decompose_recovers_coefficients() {
        let mut e = Echelon::new(3);
        e.insert(dense(&[1, 0, 2]));
        e.insert(dense(&[0, 1, 1]));
        let c = e.decompose(dense(&[3, -1, 5])).unwrap();
        assert_eq!(c, vec![(0, r(3)), (1, r(-1))]);
        assert!(e.decompose(dense(&[0, 0, 1])).is_none());
    }
}
