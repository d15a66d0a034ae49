//! Sparse multivariate polynomials over `Rat` in the even variables `x`, `x'`, `y`.

use super::rat::Rat;
use super::tridegree::TriDeg;
use serde::{Deserialize, Serialize};
use std::fmt;

pub const MAX_SLOTS: usize = 16;

/// A monomial as sixteen packed 8-bit exponents; slot 0 is most significant so
/// numeric order is lexicographic order on exponent vectors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono(pub u128);

const HIGH_BITS: u128 = 0x8080_8080_8080_8080_8080_8080_8080_8080;

impl Mono {
    pub const ONE: Mono = Mono(0);

    fn shift(slot: usize) -> u32 {
        debug_assert!(slot < MAX_SLOTS);
        (8 * (MAX_SLOTS - 1 - slot)) as u32
    }

    pub fn var(slot: usize) -> Mono {
        Mono(1u128 << Mono::shift(slot))
    }

    pub fn from_exps(exps: &[u32]) -> Mono {
        assert!(exps.len() <= MAX_SLOTS);
        let mut m = 0u128;
        for (i, &e) in exps.iter().enumerate() {
            assert!(e < 256, "exponent overflow");
            m |= (e as u128) << Mono::shift(i);
        }
        Mono(m)
    }

    pub fn exp(self, slot: usize) -> u32 {
        ((self.0 >> Mono::shift(slot)) & 0xff) as u32
    }

    pub fn exps(self, len: usize) -> Vec<u32> {
        (0..len).map(|i| self.exp(i)).collect()
    }

    pub fn degree(self) -> u32 {
        (0..MAX_SLOTS).map(|i| self.exp(i)).sum()
    }

    pub fn mul(self, o: Mono) -> Mono {
        if (self.0 | o.0) & HIGH_BITS != 0 {
            for i in 0..MAX_SLOTS {
                assert!(self.exp(i) + o.exp(i) < 256, "exponent overflow");
            }
        }
        Mono(self.0 + o.0)
    }

    pub fn divides(self, o: Mono) -> bool {
        (0..MAX_SLOTS).all(|i| self.exp(i) <= o.exp(i))
    }

    /// `o / self`; caller guarantees divisibility.
    pub fn div_of(self, o: Mono) -> Mono {
        debug_assert!(self.divides(o));
        Mono(o.0 - self.0)
    }

    pub fn with_exp(self, slot: usize, e: u32) -> Mono {
        assert!(e < 256);
        let s = Mono::shift(slot);
        Mono((self.0 & !(0xffu128 << s)) | ((e as u128) << s))
    }
}

/// A variable of the ambient ring; indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X(usize),
    XP(usize),
    Y(usize),
}

impl Var {
    pub fn tridegree(self) -> TriDeg {
        match self {
            Var::X(_) | Var::XP(_) => TriDeg::X,
            Var::Y(_) => TriDeg::Y,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{}", i + 1),
            Var::XP(i) => write!(f, "x{}'", i + 1),
            Var::Y(i) => write!(f, "y{}", i + 1),
        }
    }
}

/// Which variables are live. Layout: `x_i` in slot `i`, `x'_i` in slot `n+i`,
/// `y_j` in slot `2n+j` (the `x'` slots are reserved even when not live).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarSet {
    pub n: u8,
    pub primed: bool,
    pub ny: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("variable set mismatch: {0:?} vs {1:?}")]
    VarSetMismatch(VarSet, VarSet),
    #[error("unknown variable {0}")]
    UnknownVariable(Var),
}

impl VarSet {
    pub fn x(n: usize) -> VarSet {
        VarSet::new(n, false, 0)
    }

    pub fn new(n: usize, primed: bool, ny: usize) -> VarSet {
        assert!(2 * n + ny <= MAX_SLOTS, "too many variables");
        VarSet { n: n as u8, primed, ny: ny as u8 }
    }

    pub fn slots(self) -> usize {
        2 * self.n as usize + self.ny as usize
    }

    pub fn contains(self, v: Var) -> bool {
        match v {
            Var::X(i) => i < self.n as usize,
            Var::XP(i) => self.primed && i < self.n as usize,
            Var::Y(j) => j < self.ny as usize,
        }
    }

    pub fn slot(self, v: Var) -> Result<usize, PolyError> {
        if !self.contains(v) {
            return Err(PolyError::UnknownVariable(v));
        }
        Ok(match v {
            Var::X(i) => i,
            Var::XP(i) => self.n as usize + i,
            Var::Y(j) => 2 * self.n as usize + j,
        })
    }

    pub fn var_at(self, slot: usize) -> Var {
        let n = self.n as usize;
        if slot < n {
            Var::X(slot)
        } else if slot < 2 * n {
            Var::XP(slot - n)
        } else {
            Var::Y(slot - 2 * n)
        }
    }

    pub fn live_vars(self) -> Vec<Var> {
        let n = self.n as usize;
        let mut v: Vec<Var> = (0..n).map(Var::X).collect();
        if self.primed {
            v.extend((0..n).map(Var::XP));
        }
        v.extend((0..self.ny as usize).map(Var::Y));
        v
    }

    pub fn mono_degree(self, m: Mono) -> TriDeg {
        let mut d = TriDeg::ZERO;
        for s in 0..self.slots() {
            let e = m.exp(s) as i32;
            if e != 0 {
                d += self.var_at(s).tridegree().scale(e);
            }
        }
        d
    }
}

/// A polynomial: terms sorted by monomial, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    vars: VarSet,
    terms: Vec<(Mono, Rat)>,
}

/// Image of a variable under [`MPoly::substitute`].
#[derive(Clone, Debug)]
pub enum Image {
    Var(Var),
    Const(Rat),
}

impl MPoly {
    pub fn zero(vars: VarSet) -> MPoly {
        MPoly { vars, terms: Vec::new() }
    }

    pub fn constant(vars: VarSet, c: Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(vars);
        }
        MPoly { vars, terms: vec![(Mono::ONE, c)] }
    }

    pub fn one(vars: VarSet) -> MPoly {
        MPoly::constant(vars, Rat::one())
    }

    pub fn var(vars: VarSet, v: Var) -> MPoly {
        let s = vars.slot(v).expect("variable not in varset");
        MPoly { vars, terms: vec![(Mono::var(s), Rat::one())] }
    }

    pub fn x(vars: VarSet, i: usize) -> MPoly {
        MPoly::var(vars, Var::X(i))
    }

    pub fn monomial(vars: VarSet, m: Mono, c: Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(vars);
        }
        MPoly { vars, terms: vec![(m, c)] }
    }

    /// Builds from arbitrary terms, combining duplicates.
    pub fn from_terms(vars: VarSet, mut terms: Vec<(Mono, Rat)>) -> MPoly {
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Mono, Rat)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += &c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        MPoly { vars, terms: out }
    }

    pub fn vars(&self) -> VarSet {
        self.vars
    }

    pub fn terms(&self) -> &[(Mono, Rat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0 == Mono::ONE)
    }

    /// The constant value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(Rat::zero()),
            [(m, c)] if *m == Mono::ONE => Some(c.clone()),
            _ => None,
        }
    }

    pub fn constant_term(&self) -> Rat {
        match self.terms.first() {
            Some((m, c)) if *m == Mono::ONE => c.clone(),
            _ => Rat::zero(),
        }
    }

    pub fn coeff(&self, m: Mono) -> Rat {
        match self.terms.binary_search_by(|t| t.0.cmp(&m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    /// Reinterprets the polynomial in a larger variable set with the same `n`
    /// layout, or with more strands when only `x` variables occur.
    pub fn with_vars(&self, vars: VarSet) -> MPoly {
        if vars == self.vars {
            return self.clone();
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut out = Mono::ONE;
            for s in 0..self.vars.slots() {
                let e = m.exp(s);
                if e > 0 {
                    let v = self.vars.var_at(s);
                    let t = vars.slot(v).expect("variable missing in target varset");
                    out = out.with_exp(t, e);
                }
            }
            terms.push((out, c.clone()));
        }
        MPoly::from_terms(vars, terms)
    }

    fn check(&self, o: &MPoly) -> Result<(), PolyError> {
        if self.vars != o.vars {
            return Err(PolyError::VarSetMismatch(self.vars, o.vars));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &MPoly) -> Result<MPoly, PolyError> {
        self.check(o)?;
        Ok(self.merge(o, false))
    }

    pub fn try_sub(&self, o: &MPoly) -> Result<MPoly, PolyError> {
        self.check(o)?;
        Ok(self.merge(o, true))
    }

    pub fn try_mul(&self, o: &MPoly) -> Result<MPoly, PolyError> {
        self.check(o)?;
        Ok(self.mul_unchecked(o))
    }

    fn merge(&self, o: &MPoly, negate: bool) -> MPoly {
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            } else {
                let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        MPoly { vars: self.vars, terms: out }
    }

    fn mul_unchecked(&self, o: &MPoly) -> MPoly {
        if self.is_zero() || o.is_zero() {
            return MPoly::zero(self.vars);
        }
        if o.terms.len() == 1 {
            return self.mul_term(o.terms[0].0, &o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.mul_term(self.terms[0].0, &self.terms[0].1);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                terms.push((m1.mul(*m2), c1 * c2));
            }
        }
        MPoly::from_terms(self.vars, terms)
    }

    /// Product with a single term; order is preserved because monomial
    /// multiplication is monotone.
    pub fn mul_term(&self, m: Mono, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.vars);
        }
        let terms = self.terms.iter().map(|(m1, c1)| (m1.mul(m), c1 * c)).collect();
        MPoly { vars: self.vars, terms }
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        self.mul_term(Mono::ONE, c)
    }

    pub fn neg(&self) -> MPoly {
        MPoly { vars: self.vars, terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one(self.vars);
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    /// The common tridegree of all terms, if homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<TriDeg> {
        let mut it = self.terms.iter().map(|(m, _)| self.vars.mono_degree(*m));
        let d = it.next()?;
        if it.all(|e| e == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Largest total exponent among terms (0 for the zero polynomial).
    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    /// Ring homomorphism into `target` sending each live variable to a
    /// variable or a rational constant; `None` keeps the variable itself.
    pub fn substitute(&self, target: VarSet, f: impl Fn(Var) -> Option<Image>) -> Result<MPoly, PolyError> {
        let mut images: Vec<(usize, Image)> = Vec::new();
        for s in 0..self.vars.slots() {
            let v = self.vars.var_at(s);
            if !self.vars.contains(v) {
                continue;
            }
            let im = f(v).unwrap_or(Image::Var(v));
            if let Image::Var(w) = im {
                target.slot(w)?;
            }
            images.push((s, im));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut out = Mono::ONE;
            let mut coef = c.clone();
            for (s, im) in &images {
                let e = m.exp(*s);
                if e == 0 {
                    continue;
                }
                match im {
                    Image::Var(w) => {
                        let t = target.slot(*w)?;
                        out = out.with_exp(t, out.exp(t) + e);
                    }
                    Image::Const(r) => coef = &coef * &r.pow(e),
                }
            }
            terms.push((out, coef));
        }
        Ok(MPoly::from_terms(target, terms))
    }

    /// Evaluates every variable at a rational value.
    pub fn eval(&self, f: impl Fn(Var) -> Rat) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for s in 0..self.vars.slots() {
                let e = m.exp(s);
                if e > 0 {
                    t = &t * &f(self.vars.var_at(s)).pow(e);
                }
            }
            acc += &t;
        }
        acc
    }
}

impl std::ops::Add for &MPoly {
    type Output = MPoly;
    fn add(self, o: &MPoly) -> MPoly {
        self.try_add(o).expect("varset mismatch")
    }
}

impl std::ops::Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, o: &MPoly) -> MPoly {
        self.try_sub(o).expect("varset mismatch")
    }
}

impl std::ops::Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, o: &MPoly) -> MPoly {
        self.try_mul(o).expect("varset mismatch")
    }
}

impl std::ops::Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly::neg(self)
    }
}

impl fmt::Display for MPoly {
    /// Canonical text: terms in decreasing monomial order, `x1^2*x2'` style.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.signum() < 0;
            let abs = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut factors = Vec::new();
            for s in 0..self.vars.slots() {
                let e = m.exp(s);
                if e == 1 {
                    factors.push(self.vars.var_at(s).to_string());
                } else if e > 1 {
                    factors.push(format!("{}^{}", self.vars.var_at(s), e));
                }
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    vars: VarSet,
    terms: Vec<(Vec<u32>, Rat)>,
}

impl Serialize for MPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let len = self.vars.slots();
        PolyRepr { vars: self.vars, terms: self.terms.iter().map(|(m, c)| (m.exps(len), c.clone())).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<MPoly, D::Error> {
        let r = PolyRepr::deserialize(d)?;
        let len = r.vars.slots();
        let mut terms = Vec::with_capacity(r.terms.len());
        for (e, c) in r.terms {
            if e.len() != len || e.iter().any(|&x| x > 255) {
                return Err(serde::de::Error::custom("bad exponent vector"));
            }
            terms.push((Mono::from_exps(&e), c));
        }
        Ok(MPoly::from_terms(r.vars, terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v() -> VarSet {
        VarSet::new(2, true, 2)
    }

    #[test]
    fn difference_of_squares() {
        let vs = v();
        let (x1, x2) = (MPoly::x(vs, 0), MPoly::x(vs, 1));
        let lhs = &(&x1 - &x2) * &(&x1 + &x2);
        let rhs = &(&x1 * &x1) - &(&x2 * &x2);
        assert_eq!(lhs, rhs);
        assert_eq!(rhs.to_string(), "x1^2 - x2^2");
    }

    #[test]
    fn degree_of_x_times_y() {
        let vs = v();
        let p = &MPoly::x(vs, 0) * &MPoly::var(vs, Var::Y(0));
        assert_eq!(p.homogeneous_degree(), Some(TriDeg::new(0, 0, 2)));
    }

    #[test]
    fn substitutions() {
        let vs = v();
        let y = &MPoly::var(vs, Var::Y(0)) - &MPoly::var(vs, Var::Y(1));
        let ident = y.substitute(vs, |w| if w == Var::Y(1) { Some(Image::Var(Var::Y(0))) } else { None }).unwrap();
        assert!(ident.is_zero());
        let nu = y
            .substitute(vs, |w| match w {
                Var::Y(0) => Some(Image::Const(Rat::zero())),
                Var::Y(1) => Some(Image::Const(Rat::one())),
                _ => None,
            })
            .unwrap();
        assert_eq!(nu.as_constant(), Some(Rat::from_int(-1)));
        let d = &MPoly::x(vs, 0) - &MPoly::var(vs, Var::XP(1));
        let diag = d.substitute(vs, |w| if let Var::XP(i) = w { Some(Image::Var(Var::X(i))) } else { None }).unwrap();
        assert_eq!(diag, &MPoly::x(vs, 0) - &MPoly::x(vs, 1));
    }

    #[test]
    fn mismatch_and_unknown_variable() {
        let a = MPoly::x(VarSet::x(2), 0);
        let b = MPoly::x(VarSet::x(3), 0);
        assert!(matches!(a.try_add(&b), Err(PolyError::VarSetMismatch(..))));
        let r = a.substitute(VarSet::x(2), |_| Some(Image::Var(Var::Y(0))));
        assert!(matches!(r, Err(PolyError::UnknownVariable(_))));
    }

    #[test]
    fn json_round_trip() {
        let vs = v();
        let p = &(&MPoly::x(vs, 0) * &MPoly::var(vs, Var::Y(1))).scale(&Rat::new(3, 2)) - &MPoly::one(vs);
        let s = serde_json::to_string(&p).unwrap();
        let q: MPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
    }
}
