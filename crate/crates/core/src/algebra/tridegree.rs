use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

/// Integer tridegree `(deg_Q, deg_A, deg_T)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TriDeg {
    pub q: i32,
    pub a: i32,
    pub t: i32,
}

impl TriDeg {
    pub const ZERO: TriDeg = TriDeg { q: 0, a: 0, t: 0 };
    pub const X: TriDeg = TriDeg { q: 2, a: 0, t: 0 };
    pub const Y: TriDeg = TriDeg { q: -2, a: 0, t: 2 };
    pub const THETA: TriDeg = TriDeg { q: -2, a: 1, t: 0 };

    pub const fn new(q: i32, a: i32, t: i32) -> TriDeg {
        TriDeg { q, a, t }
    }

    pub fn scale(self, k: i32) -> TriDeg {
        TriDeg::new(self.q * k, self.a * k, self.t * k)
    }

    /// Exponents `(n_q, n_t, n_a)` in the reporting basis `q = Q^2, t = T^2 Q^-2, a = A Q^-2`,
    /// doubled so that half-integral exponents stay exact.
    pub fn doubled_qta(self) -> (i32, i32, i32) {
        (self.q + self.t + 2 * self.a, self.t, 2 * self.a)
    }

    /// Integral `(n_q, n_t, n_a)` exponents, if they exist.
    pub fn qta(self) -> Option<(i32, i32, i32)> {
        let (q2, t2, _) = self.doubled_qta();
        if q2 % 2 != 0 || t2 % 2 != 0 {
            return None;
        }
        Some((q2 / 2, t2 / 2, self.a))
    }

    /// The cell carrying `q^nq t^nt a^na`.
    pub fn from_qta(nq: i32, nt: i32, na: i32) -> TriDeg {
        TriDeg::new(2 * nq - 2 * nt - 2 * na, na, 2 * nt)
    }

    /// Same as [`TriDeg::from_qta`] with doubled (possibly odd) `q` and `t` exponents.
    pub fn from_doubled_qta(nq2: i32, nt2: i32, na: i32) -> TriDeg {
        TriDeg::new(nq2 - nt2 - 2 * na, na, nt2)
    }
}

impl Add for TriDeg {
    type Output = TriDeg;
    fn add(self, o: TriDeg) -> TriDeg {
        TriDeg::new(self.q + o.q, self.a + o.a, self.t + o.t)
    }
}

impl AddAssign for TriDeg {
    fn add_assign(&mut self, o: TriDeg) {
        *self = *self + o;
    }
}

impl Sub for TriDeg {
    type Output = TriDeg;
    fn sub(self, o: TriDeg) -> TriDeg {
        TriDeg::new(self.q - o.q, self.a - o.a, self.t - o.t)
    }
}

impl Neg for TriDeg {
    type Output = TriDeg;
    fn neg(self) -> TriDeg {
        TriDeg::new(-self.q, -self.a, -self.t)
    }
}

impl fmt::Display for TriDeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.q, self.a, self.t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reporting_basis_round_trip() {
        for nq in -3..4 {
            for nt in -3..4 {
                for na in 0..3 {
                    let c = TriDeg::from_qta(nq, nt, na);
                    assert_eq!(c.qta(), Some((nq, nt, na)));
                }
            }
        }
        assert_eq!(TriDeg::X.qta(), Some((1, 0, 0)));
        assert_eq!(TriDeg::Y.qta(), Some((0, 1, 0)));
        assert_eq!(TriDeg::THETA.qta(), Some((0, 0, 1)));
        assert_eq!(TriDeg::new(1, 0, 1).qta(), None);
    }
}
