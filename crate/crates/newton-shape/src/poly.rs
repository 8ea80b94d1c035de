//! Sparse exact arithmetic in `L^(l) = Q[x^(1/l), x^(-1/l), y]`.
//!
//! Elements are finite maps from exponent points to nonzero rational
//! coefficients. The x-exponent is an arbitrary rational (stored reduced, so
//! the ramification index `l` is derived on demand), the y-exponent a
//! nonnegative integer. The zero polynomial is the empty map and every
//! operation returns a canonical result with no stored zero coefficients, so
//! structural equality coincides with mathematical equality.

use crate::rational::{q_is_integer, qi, PlanePoint, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// An exponent point `(i/l, j)` of the support: `x`-exponent rational,
/// `y`-exponent a nonnegative integer.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExpPoint {
    pub xexp: Q,
    pub yexp: u32,
}

impl ExpPoint {
    pub fn new(xexp: Q, yexp: u32) -> Self {
        ExpPoint { xexp, yexp }
    }

    pub fn from_ints(xexp: i64, yexp: u32) -> Self {
        ExpPoint::new(qi(xexp), yexp)
    }

    pub fn plane(&self) -> PlanePoint {
        PlanePoint::new(self.xexp.clone(), qi(self.yexp as i64))
    }
}

impl fmt::Debug for ExpPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.xexp, self.yexp)
    }
}

/// Sparse Laurent polynomial over `Q` with rational x-exponents and
/// nonnegative integer y-exponents.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<ExpPoint, Q>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(qi(1))
    }

    pub fn constant(c: Q) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(ExpPoint::new(Q::zero(), 0), c);
        p
    }

    /// The monomial `c * x^xexp * y^yexp`.
    pub fn monomial(c: Q, xexp: Q, yexp: u32) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(ExpPoint::new(xexp, yexp), c);
        p
    }

    /// `x^k` for integer `k` (negative allowed).
    pub fn xpow(k: i64) -> Self {
        LaurentPoly::monomial(qi(1), qi(k), 0)
    }

    pub fn var_x() -> Self {
        LaurentPoly::xpow(1)
    }

    pub fn var_y() -> Self {
        LaurentPoly::monomial(qi(1), Q::zero(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Nonzero constant of `K^x`, i.e. a single term with exponent (0,0).
    pub fn as_constant(&self) -> Option<Q> {
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            if e.xexp.is_zero() && e.yexp == 0 {
                return Some(c.clone());
            }
        }
        if self.is_zero() {
            return Some(Q::zero());
        }
        None
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpPoint, &Q)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &ExpPoint> {
        self.terms.keys()
    }

    pub fn coeff(&self, e: &ExpPoint) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    /// Adds `c` to the coefficient at `e`, dropping the term if it cancels.
    pub fn add_term(&mut self, e: ExpPoint, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                *old += c;
                if old.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn scale(&self, c: &Q) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        let mut out = LaurentPoly::zero();
        for (e, a) in &self.terms {
            out.terms.insert(e.clone(), a * c);
        }
        out
    }

    /// Multiplies by the monomial `x^dx * y^dy`; `dy` may be negative as long
    /// as every y-exponent stays nonnegative (panics otherwise, which only a
    /// caller bug can trigger).
    pub fn mul_monomial(&self, c: &Q, dx: &Q, dy: i64) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        if c.is_zero() {
            return out;
        }
        for (e, a) in &self.terms {
            let y = e.yexp as i64 + dy;
            assert!(y >= 0, "negative y-exponent in mul_monomial");
            out.terms
                .insert(ExpPoint::new(&e.xexp + dx, y as u32), a * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> LaurentPoly {
        let mut acc = LaurentPoly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to `x`: `d/dx x^a = a x^(a-1)`
    /// for rational `a`.
    pub fn dx(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e, c) in &self.terms {
            if e.xexp.is_zero() {
                continue;
            }
            out.add_term(ExpPoint::new(&e.xexp - &qi(1), e.yexp), c * &e.xexp);
        }
        out
    }

    /// Formal partial derivative with respect to `y`.
    pub fn dy(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e, c) in &self.terms {
            if e.yexp == 0 {
                continue;
            }
            out.add_term(
                ExpPoint::new(e.xexp.clone(), e.yexp - 1),
                c * &qi(e.yexp as i64),
            );
        }
        out
    }

    /// Least `l >= 1` such that every x-exponent lies in `(1/l)Z`; the least
    /// common multiple of the denominators of the x-exponents. Returns 1 for
    /// the zero polynomial.
    pub fn ramification_index(&self) -> BigInt {
        let mut l = BigInt::one();
        for e in self.terms.keys() {
            l = l.lcm(e.xexp.denom());
        }
        l
    }

    /// True when every term lies in `L = K[x, y]`: integer x-exponents, none
    /// negative.
    pub fn is_in_l(&self) -> bool {
        self.terms
            .keys()
            .all(|e| q_is_integer(&e.xexp) && !e.xexp.is_negative())
    }

    /// Substitutes `y -> g` where `g` must itself be a Laurent polynomial;
    /// used by automorphism application. Exact, no truncation: y-exponents
    /// are finite nonnegative integers.
    pub fn substitute_y(&self, g: &LaurentPoly) -> LaurentPoly {
        // Group by y-exponent and evaluate powers of g once each.
        let max_y = self.terms.keys().map(|e| e.yexp).max().unwrap_or(0);
        let mut gpow: Vec<LaurentPoly> = Vec::with_capacity(max_y as usize + 1);
        gpow.push(LaurentPoly::one());
        for _ in 0..max_y {
            gpow.push(&gpow[gpow.len() - 1] * g);
        }
        let mut out = LaurentPoly::zero();
        for (e, c) in &self.terms {
            let part = gpow[e.yexp as usize].mul_monomial(c, &e.xexp, 0);
            out = &out + &part;
        }
        out
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(
                    ExpPoint::new(&ea.xexp + &eb.xexp, ea.yexp + eb.yexp),
                    ca * cb,
                );
            }
        }
        out
    }
}

// Debug goes through the canonical text rendering so test failures read well.
impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::render_poly(self))
    }
}

/// The Jacobian bracket `[P,Q] = dP/dx dQ/dy - dP/dy dQ/dx`.
pub fn bracket(p: &LaurentPoly, q: &LaurentPoly) -> LaurentPoly {
    &(&p.dx() * &q.dy()) - &(&p.dy() * &q.dx())
}

/// Whether `(P,Q)` is a Jacobian pair, i.e. `[P,Q]` is a nonzero constant;
/// returns the constant as witness.
pub fn is_jacobian_pair(p: &LaurentPoly, q: &LaurentPoly) -> Option<Q> {
    let b = bracket(p, q);
    match b.as_constant() {
        Some(c) if !c.is_zero() => Some(c),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn xp(k: i64) -> LaurentPoly {
        LaurentPoly::xpow(k)
    }

    #[test]
    fn additive_inverse_cancels() {
        let x = LaurentPoly::var_x();
        assert!((&x + &(-&x)).is_zero());
    }

    #[test]
    fn fractional_exponents_multiply() {
        let h = LaurentPoly::monomial(qi(1), q(1, 2), 0);
        assert_eq!(&h * &h, xp(1));
    }

    #[test]
    fn laurent_cancellation() {
        let xy = &xp(1) * &LaurentPoly::var_y();
        assert_eq!(&xy * &xp(-1), LaurentPoly::var_y());
    }

    #[test]
    fn power_rule_on_fractional_exponent() {
        let h = LaurentPoly::monomial(qi(1), q(1, 2), 0);
        assert_eq!(h.dx(), LaurentPoly::monomial(q(1, 2), q(-1, 2), 0));
    }

    #[test]
    fn dy_drops_constant_in_y() {
        let p = LaurentPoly::monomial(qi(1), qi(2), 1);
        assert_eq!(p.dy(), xp(2));
        assert!(LaurentPoly::constant(qi(3)).dx().is_zero());
    }

    #[test]
    fn bracket_of_coordinates_is_one() {
        let b = bracket(&LaurentPoly::var_x(), &LaurentPoly::var_y());
        assert_eq!(b.as_constant(), Some(qi(1)));
    }

    #[test]
    fn bracket_direct_evaluation() {
        // [x^2 y, x^-1] = 1
        let p = LaurentPoly::monomial(qi(1), qi(2), 1);
        let b = bracket(&p, &xp(-1));
        assert_eq!(b.as_constant(), Some(qi(1)));
    }

    #[test]
    fn ramification_index_examples() {
        let p = &LaurentPoly::monomial(qi(1), q(1, 3), 1) + &xp(1);
        assert_eq!(p.ramification_index(), BigInt::from(3));
        let q2 = &(&xp(2) * &LaurentPoly::var_y()) + &LaurentPoly::var_y().pow(3);
        assert_eq!(q2.ramification_index(), BigInt::from(1));
        let r =
            &LaurentPoly::monomial(qi(1), q(1, 2), 0) + &LaurentPoly::monomial(qi(1), q(1, 3), 0);
        assert_eq!(r.ramification_index(), BigInt::from(6));
    }

    #[test]
    fn jacobian_pair_witness() {
        assert_eq!(
            is_jacobian_pair(&LaurentPoly::var_x(), &LaurentPoly::var_y()),
            Some(qi(1))
        );
        assert_eq!(
            is_jacobian_pair(&LaurentPoly::var_x(), &LaurentPoly::var_x()),
            None
        );
    }
}
