//! Curved Gaussian elimination on complexes whose connection has components
//! indexed by y-multidegree.
//!
//! A pivot is a pair of X-support components `S ⊂ C^k`, `T ⊂ C^{k+1}` such that
//! `Δ_0[T,S] = ζ` is an isomorphism. The complement `A` keeps
//! `Δ_AA − Δ_AS ζ⁻¹ Δ_TA`; optional tracking records the projection
//! `π = (Id_A, 0, −Δ_AS ζ⁻¹)` and inclusion `ι = Id_A − ζ⁻¹Δ_TA`.

use crate::algebra::{MPoly, Mono, PolyMat, Rat, VarSet};
use crate::soergel::Bimodule;
use crate::yify::{YComplex, YMap};
use std::collections::{BTreeMap, BTreeSet};

/// A polynomial in `y` with coefficients in `R`: sorted `(y-exponent, coefficient)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub(crate) struct YPoly(pub Vec<(Mono, MPoly)>);

impl YPoly {
    pub fn single(m: Mono, p: MPoly) -> YPoly {
        if p.is_zero() {
            YPoly(vec![])
        } else {
            YPoly(vec![(m, p)])
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn part(&self, m: Mono) -> Option<&MPoly> {
        self.0.iter().find(|e| e.0 == m).map(|e| &e.1)
    }

    pub fn add(&self, o: &YPoly) -> YPoly {
        let mut map: BTreeMap<Mono, MPoly> = self.0.iter().cloned().collect();
        for (m, p) in &o.0 {
            let s = match map.get(m) {
                Some(q) => q + p,
                None => p.clone(),
            };
            if s.is_zero() {
                map.remove(m);
            } else {
                map.insert(*m, s);
            }
        }
        YPoly(map.into_iter().collect())
    }

    pub fn neg(&self) -> YPoly {
        YPoly(self.0.iter().map(|(m, p)| (*m, p.neg())).collect())
    }

    pub fn mul(&self, o: &YPoly) -> YPoly {
        let mut map: BTreeMap<Mono, MPoly> = BTreeMap::new();
        for (m1, p1) in &self.0 {
            for (m2, p2) in &o.0 {
                let m = m1.mul(*m2);
                let pr = p1 * p2;
                let s = match map.get(&m) {
                    Some(q) => q + &pr,
                    None => pr,
                };
                map.insert(m, s);
            }
        }
        YPoly(map.into_iter().filter(|e| !e.1.is_zero()).collect())
    }
}

#[derive(Clone, Debug)]
struct Gen {
    k: i32,
    shift: i32,
    local: usize,
    comp: usize,
    alive: bool,
}

/// Sparse matrix with `YPoly` entries keyed by global generator indices.
#[derive(Clone, Debug, Default)]
pub(crate) struct YSparse {
    rows: BTreeMap<u32, BTreeMap<u32, YPoly>>,
}

impl YSparse {
    fn add_to(&mut self, r: u32, c: u32, v: &YPoly) {
        if v.is_zero() {
            return;
        }
        let row = self.rows.entry(r).or_default();
        let s = match row.get(&c) {
            Some(old) => old.add(v),
            None => v.clone(),
        };
        if s.is_zero() {
            row.remove(&c);
        } else {
            row.insert(c, s);
        }
    }
}

pub(crate) struct Engine {
    n: usize,
    vars: VarSet,
    w: Vec<usize>,
    k_min: i32,
    chain: Vec<Bimodule>,
    gens: Vec<Gen>,
    /// Offsets of each chain object in the global index.
    offsets: Vec<usize>,
    rows: Vec<BTreeMap<u32, YPoly>>,
    cols: Vec<BTreeSet<u32>>,
    comps: Vec<Vec<u32>>,
    /// Inclusion: current generator → original vector.
    iota: Option<Vec<BTreeMap<u32, YPoly>>>,
    /// Projection: current generator → row over original generators.
    pi: Option<Vec<BTreeMap<u32, YPoly>>>,
    pub eliminated_pairs: usize,
}

fn union_find(parent: &mut [usize], a: usize) -> usize {
    let mut r = a;
    while parent[r] != r {
        r = parent[r];
    }
    let mut x = a;
    while parent[x] != r {
        let nx = parent[x];
        parent[x] = r;
        x = nx;
    }
    r
}

impl Engine {
    pub fn new(c: &YComplex, track: bool) -> Engine {
        let vars = VarSet::x(c.n);
        let mut gens = Vec::new();
        let mut offsets = Vec::new();
        let mut comps: Vec<Vec<u32>> = Vec::new();
        for (bi, b) in c.chain.iter().enumerate() {
            let k = c.k_min + bi as i32;
            let off = gens.len();
            offsets.push(off);
            let r = b.rank();
            let mut parent: Vec<usize> = (0..r).collect();
            for x in &b.right_x {
                for (p, q, _) in x.iter() {
                    if p != q {
                        let (a, bb) = (union_find(&mut parent, p), union_find(&mut parent, q));
                        if a != bb {
                            parent[a.max(bb)] = a.min(bb);
                        }
                    }
                }
            }
            let mut root_comp: BTreeMap<usize, usize> = BTreeMap::new();
            for p in 0..r {
                let root = union_find(&mut parent, p);
                let id = *root_comp.entry(root).or_insert_with(|| {
                    comps.push(Vec::new());
                    comps.len() - 1
                });
                comps[id].push((off + p) as u32);
                gens.push(Gen { k, shift: b.shifts[p], local: p, comp: id, alive: true });
            }
        }
        let total = gens.len();
        let mut rows: Vec<BTreeMap<u32, YPoly>> = vec![BTreeMap::new(); total];
        let mut cols: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); total];
        for ((m, k), mat) in &c.delta {
            let src = (*k - c.k_min) as usize;
            let tk = *k + 1 - 2 * m.degree() as i32;
            let tgt = (tk - c.k_min) as usize;
            for (p, q, e) in mat.iter() {
                let r = (offsets[tgt] + p) as u32;
                let cc = (offsets[src] + q) as u32;
                let add = YPoly::single(*m, e.clone());
                let s = match rows[r as usize].get(&cc) {
                    Some(old) => old.add(&add),
                    None => add,
                };
                if s.is_zero() {
                    rows[r as usize].remove(&cc);
                    cols[cc as usize].remove(&r);
                } else {
                    rows[r as usize].insert(cc, s);
                    cols[cc as usize].insert(r);
                }
            }
        }
        let ident = |i: usize| -> BTreeMap<u32, YPoly> {
            let mut m = BTreeMap::new();
            m.insert(i as u32, YPoly::single(Mono::ONE, MPoly::one(vars)));
            m
        };
        let (iota, pi) = if track {
            (Some((0..total).map(ident).collect()), Some((0..total).map(ident).collect()))
        } else {
            (None, None)
        };
        Engine {
            n: c.n,
            vars,
            w: c.w.clone(),
            k_min: c.k_min,
            chain: c.chain.clone(),
            gens,
            offsets,
            rows,
            cols,
            comps,
            iota,
            pi,
            eliminated_pairs: 0,
        }
    }

    fn set_entry(&mut self, r: u32, c: u32, v: YPoly) {
        if v.is_zero() {
            self.rows[r as usize].remove(&c);
            self.cols[c as usize].remove(&r);
        } else {
            self.rows[r as usize].insert(c, v);
            self.cols[c as usize].insert(r);
        }
    }

    /// Inverse of `ζ = Δ_0[T,S]` as an `|S|×|T|` matrix, or `None` if `ζ` is
    /// not invertible over `R`. Entries between generators of equal degree are
    /// constants; ζ is block triangular for the degree order, so
    /// `ζ⁻¹ = Σ_i (−D⁻¹N)^i D⁻¹` with `D` the diagonal blocks.
    fn invert(&self, s: &[u32], t: &[u32]) -> Option<PolyMat> {
        let vs = self.vars;
        let dim = s.len();
        let mut zeta = PolyMat::zero(vs, dim, dim);
        for (i, &ti) in t.iter().enumerate() {
            for (j, &sj) in s.iter().enumerate() {
                if let Some(v) = self.rows[ti as usize].get(&sj) {
                    if v.0.len() != 1 || v.0[0].0 != Mono::ONE {
                        return None;
                    }
                    zeta.set(i, j, v.0[0].1.clone());
                }
            }
        }
        let mut d = PolyMat::zero(vs, dim, dim);
        let mut nil = PolyMat::zero(vs, dim, dim);
        for (i, j, e) in zeta.iter() {
            if self.gens[t[i] as usize].shift == self.gens[s[j] as usize].shift {
                d.set(i, j, e.clone());
            } else {
                nil.set(i, j, e.clone());
            }
        }
        let dinv = invert_constant(&d)?;
        let step = dinv.mul(&nil).neg();
        let mut term = dinv.clone();
        let mut acc = dinv.clone();
        for _ in 0..dim {
            term = step.mul(&term);
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term);
        }
        if zeta.mul(&acc) != PolyMat::identity(vs, dim) {
            return None;
        }
        Some(acc)
    }

    fn try_pivot(&mut self, sc: usize, tc: usize) -> bool {
        let s = self.comps[sc].clone();
        let t = self.comps[tc].clone();
        if s.len() != t.len() || s.is_empty() {
            return false;
        }
        let mut ss: Vec<i32> = s.iter().map(|&g| self.gens[g as usize].shift).collect();
        let mut ts: Vec<i32> = t.iter().map(|&g| self.gens[g as usize].shift).collect();
        ss.sort();
        ts.sort();
        if ss != ts {
            return false;
        }
        let h = match self.invert(&s, &t) {
            Some(h) => h,
            None => return false,
        };
        let s_set: BTreeSet<u32> = s.iter().copied().collect();
        let t_set: BTreeSet<u32> = t.iter().copied().collect();
        // Δ_AS h : rows a, columns t (as YPoly).
        let mut ash: BTreeMap<u32, BTreeMap<usize, YPoly>> = BTreeMap::new();
        for (j, &sg) in s.iter().enumerate() {
            for &a in &self.cols[sg as usize] {
                if t_set.contains(&a) {
                    continue;
                }
                debug_assert!(!s_set.contains(&a));
                let das = &self.rows[a as usize][&sg];
                for (ti, _) in t.iter().enumerate() {
                    if let Some(hv) = h.get(j, ti) {
                        let prod = das.mul(&YPoly::single(Mono::ONE, hv.clone()));
                        let e = ash.entry(a).or_default().entry(ti).or_default();
                        *e = e.add(&prod);
                    }
                }
            }
        }
        // h Δ_TA : rows s, columns a.
        let mut hta: BTreeMap<u32, BTreeMap<usize, YPoly>> = BTreeMap::new();
        for (ti, &tg) in t.iter().enumerate() {
            for (&a, dta) in &self.rows[tg as usize] {
                if s_set.contains(&a) {
                    continue;
                }
                debug_assert!(!t_set.contains(&a));
                for (j, _) in s.iter().enumerate() {
                    if let Some(hv) = h.get(j, ti) {
                        let prod = YPoly::single(Mono::ONE, hv.clone()).mul(dta);
                        let e = hta.entry(a).or_default().entry(j).or_default();
                        *e = e.add(&prod);
                    }
                }
            }
        }
        // Δ_AA −= (Δ_AS h) Δ_TA.
        let mut dta_cols: BTreeMap<u32, Vec<(usize, YPoly)>> = BTreeMap::new();
        for (ti, &tg) in t.iter().enumerate() {
            for (&a, v) in &self.rows[tg as usize] {
                if !s_set.contains(&a) {
                    dta_cols.entry(a).or_default().push((ti, v.clone()));
                }
            }
        }
        let mut updates = YSparse::default();
        for (&a, row) in &ash {
            for (&a2, col) in &dta_cols {
                let mut acc = YPoly::default();
                for (ti, v) in col {
                    if let Some(x) = row.get(ti) {
                        acc = acc.add(&x.mul(v));
                    }
                }
                updates.add_to(a, a2, &acc.neg());
            }
        }
        for (r, row) in std::mem::take(&mut updates.rows) {
            for (c, v) in row {
                let s = match self.rows[r as usize].get(&c) {
                    Some(old) => old.add(&v),
                    None => v,
                };
                self.set_entry(r, c, s);
            }
        }
        if let Some(iota) = self.iota.as_mut() {
            // ι(a) ← ι(a) − Σ_s ι(s)·(hΔ_TA)[s,a]
            for (&a, col) in &hta {
                let mut cur = std::mem::take(&mut iota[a as usize]);
                for (j, coef) in col {
                    let c = coef.neg();
                    for (o, v) in &iota[s[*j] as usize] {
                        let add = v.mul(&c);
                        let e = cur.entry(*o).or_default();
                        *e = e.add(&add);
                    }
                }
                cur.retain(|_, v| !v.is_zero());
                iota[a as usize] = cur;
            }
        }
        if let Some(pi) = self.pi.as_mut() {
            // π(a) ← π(a) − Σ_t (Δ_AS h)[a,t]·π(t)
            for (&a, row) in &ash {
                let mut cur = std::mem::take(&mut pi[a as usize]);
                for (ti, coef) in row {
                    let c = coef.neg();
                    for (o, v) in &pi[t[*ti] as usize] {
                        let add = c.mul(v);
                        let e = cur.entry(*o).or_default();
                        *e = e.add(&add);
                    }
                }
                cur.retain(|_, v| !v.is_zero());
                pi[a as usize] = cur;
            }
        }
        for &g in s.iter().chain(t.iter()) {
            let gi = g as usize;
            self.gens[gi].alive = false;
            for c in std::mem::take(&mut self.rows[gi]).keys() {
                self.cols[*c as usize].remove(&g);
            }
            for r in std::mem::take(&mut self.cols[gi]) {
                self.rows[r as usize].remove(&g);
            }
            if let Some(iota) = self.iota.as_mut() {
                iota[gi].clear();
            }
            if let Some(pi) = self.pi.as_mut() {
                pi[gi].clear();
            }
        }
        self.comps[sc].clear();
        self.comps[tc].clear();
        self.eliminated_pairs += 1;
        true
    }

    /// Eliminates until no admissible pivot remains. Candidates are scanned in
    /// `(k, column, row)` order.
    pub fn run(&mut self) {
        loop {
            let mut progress = false;
            for c in 0..self.gens.len() {
                if !self.gens[c].alive {
                    continue;
                }
                let cands: Vec<u32> = self.cols[c]
                    .iter()
                    .copied()
                    .filter(|&r| {
                        let v = &self.rows[r as usize][&(c as u32)];
                        self.gens[r as usize].shift == self.gens[c].shift
                            && v.part(Mono::ONE).is_some_and(|p| p.is_constant())
                    })
                    .collect();
                for r in cands {
                    if !self.gens[r as usize].alive || !self.gens[c].alive {
                        continue;
                    }
                    let (sc, tc) = (self.gens[c].comp, self.gens[r as usize].comp);
                    if self.try_pivot(sc, tc) {
                        progress = true;
                        break;
                    }
                }
            }
            if !progress {
                break;
            }
        }
    }

    /// Current generators grouped by chain degree: `(k, global indices)`.
    fn alive_layout(&self) -> Vec<(i32, Vec<u32>)> {
        let mut out = Vec::new();
        for (bi, _) in self.chain.iter().enumerate() {
            let k = self.k_min + bi as i32;
            let off = self.offsets[bi];
            let r = self.chain[bi].rank();
            let idx: Vec<u32> = (off..off + r).filter(|&g| self.gens[g].alive).map(|g| g as u32).collect();
            out.push((k, idx));
        }
        out
    }

    /// The reduced complex.
    pub fn result(&self) -> YComplex {
        let layout = self.alive_layout();
        let first = layout.iter().position(|(_, v)| !v.is_empty());
        let last = layout.iter().rposition(|(_, v)| !v.is_empty());
        let (first, last) = match (first, last) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return YComplex {
                    n: self.n,
                    w: self.w.clone(),
                    k_min: 0,
                    chain: vec![Bimodule::zero(self.n)],
                    delta: BTreeMap::new(),
                }
            }
        };
        let mut pos: BTreeMap<u32, (i32, usize)> = BTreeMap::new();
        let mut chain = Vec::new();
        for (bi, (k, idx)) in layout.iter().enumerate().take(last + 1).skip(first) {
            let local: Vec<usize> = idx.iter().map(|&g| self.gens[g as usize].local).collect();
            chain.push(self.chain[bi].restrict(&local));
            for (p, &g) in idx.iter().enumerate() {
                pos.insert(g, (*k, p));
            }
        }
        let k_min = layout[first].0;
        let mut delta: BTreeMap<(Mono, i32), PolyMat> = BTreeMap::new();
        for (&r, &(rk, rp)) in &pos {
            for (c, v) in &self.rows[r as usize] {
                let (ck, cp) = pos[c];
                for (m, p) in &v.0 {
                    debug_assert_eq!(rk, ck + 1 - 2 * m.degree() as i32);
                    let src = &chain[(ck - k_min) as usize];
                    let tgt = &chain[(rk - k_min) as usize];
                    let mat = delta.entry((*m, ck)).or_insert_with(|| PolyMat::zero(self.vars, tgt.rank(), src.rank()));
                    mat.set(rp, cp, p.clone());
                }
            }
        }
        YComplex { n: self.n, w: self.w.clone(), k_min, chain, delta }
    }

    /// Tracked inclusion `result → original` and projection `original → result`.
    pub fn tracking(&self, original: &YComplex, reduced: &YComplex) -> Option<(YMap, YMap)> {
        let (iota, pi) = (self.iota.as_ref()?, self.pi.as_ref()?);
        let layout = self.alive_layout();
        let mut pos: BTreeMap<u32, (i32, usize)> = BTreeMap::new();
        for (k, idx) in &layout {
            for (p, &g) in idx.iter().enumerate() {
                pos.insert(g, (*k, p));
            }
        }
        let orig_pos = |g: u32| -> (i32, usize) {
            let g = g as usize;
            (self.gens[g].k, self.gens[g].local)
        };
        let mut icomps: BTreeMap<(Mono, i32), PolyMat> = BTreeMap::new();
        let mut pcomps: BTreeMap<(Mono, i32), PolyMat> = BTreeMap::new();
        for (&g, &(k, p)) in &pos {
            for (o, v) in &iota[g as usize] {
                let (ok, op) = orig_pos(*o);
                for (m, poly) in &v.0 {
                    debug_assert_eq!(ok, k - 2 * m.degree() as i32);
                    let mat = icomps.entry((*m, k)).or_insert_with(|| {
                        PolyMat::zero(self.vars, original.rank_at(ok), reduced.rank_at(k))
                    });
                    mat.set(op, p, poly.clone());
                }
            }
            for (o, v) in &pi[g as usize] {
                let (ok, op) = orig_pos(*o);
                for (m, poly) in &v.0 {
                    debug_assert_eq!(k, ok - 2 * m.degree() as i32);
                    let mat = pcomps.entry((*m, ok)).or_insert_with(|| {
                        PolyMat::zero(self.vars, reduced.rank_at(k), original.rank_at(ok))
                    });
                    mat.set(p, op, poly.clone());
                }
            }
        }
        let iota_map = YMap { source: reduced.clone(), target: original.clone(), q_shift: 0, t_shift: 0, comps: icomps };
        let pi_map = YMap { source: original.clone(), target: reduced.clone(), q_shift: 0, t_shift: 0, comps: pcomps };
        Some((iota_map, pi_map))
    }
}

/// Inverse of a matrix with constant entries, if it exists.
fn invert_constant(d: &PolyMat) -> Option<PolyMat> {
    let n = d.rows;
    let vs = d.vars;
    let mut a: Vec<Vec<Rat>> = vec![vec![Rat::zero(); 2 * n]; n];
    for i in 0..n {
        a[i][n + i] = Rat::one();
    }
    for (i, j, e) in d.iter() {
        a[i][j] = e.as_constant()?;
    }
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].inv();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let sub = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &sub;
                }
            }
        }
    }
    let mut out = PolyMat::zero(vs, n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, MPoly::constant(vs, a[i][n + j].clone()));
        }
    }
    Some(out)
}

/// Eliminates and returns the reduced complex, plus tracking maps if requested.
pub(crate) fn eliminate(c: &YComplex, track: bool) -> (YComplex, Option<(YMap, YMap)>) {
    let mut e = Engine::new(c, track);
    e.run();
    let r = e.result();
    let t = if track { e.tracking(c, &r) } else { None };
    (r, t)
}
