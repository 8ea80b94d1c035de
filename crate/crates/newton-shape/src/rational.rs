//! Exact rational scalars and plane points.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator (guaranteed by the underlying representation).
pub type Q = BigRational;

/// `n` as a rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `n/d` as a rational (`d != 0`).
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `p` or `p/q`, never as a float.
pub fn q_str(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A point of the exponent plane with both coordinates rational.
///
/// Support points of polynomials have integer y-coordinate; corner data such
/// as `A^(1) = (7/4, 3)` does not, so the geometry layer works over `Q^2`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanePoint {
    pub x: Q,
    pub y: Q,
}

impl PlanePoint {
    pub fn new(x: Q, y: Q) -> Self {
        PlanePoint { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        PlanePoint::new(qi(x), qi(y))
    }

    /// Cross product `self.x * other.y - self.y * other.x`.
    pub fn cross(&self, other: &PlanePoint) -> Q {
        &self.x * &other.y - &self.y * &other.x
    }

    /// Whether the two vectors are aligned (cross product zero).
    pub fn aligned(&self, other: &PlanePoint) -> bool {
        self.cross(other).is_zero()
    }

    pub fn scale(&self, c: &Q) -> PlanePoint {
        PlanePoint::new(&self.x * c, &self.y * c)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl Add for &PlanePoint {
    type Output = PlanePoint;
    fn add(self, rhs: &PlanePoint) -> PlanePoint {
        PlanePoint::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl Sub for &PlanePoint {
    type Output = PlanePoint;
    fn sub(self, rhs: &PlanePoint) -> PlanePoint {
        PlanePoint::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl Neg for &PlanePoint {
    type Output = PlanePoint;
    fn neg(self) -> PlanePoint {
        PlanePoint::new(-self.x.clone(), -self.y.clone())
    }
}

impl Mul<&Q> for &PlanePoint {
    type Output = PlanePoint;
    fn mul(self, rhs: &Q) -> PlanePoint {
        self.scale(rhs)
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", q_str(&self.x), q_str(&self.y))
    }
}

impl fmt::Debug for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Floor of a rational as a big integer.
pub fn q_floor(x: &Q) -> BigInt {
    x.floor().to_integer()
}

/// True when `x` is a (possibly negative) integer.
pub fn q_is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

/// Sign of a rational: -1, 0 or 1.
pub fn q_sign(x: &Q) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Exact `n`-th root in `Q`, when one exists.
pub fn q_nth_root(x: &Q, n: u32) -> Option<Q> {
    if n == 0 {
        return None;
    }
    if n == 1 {
        return Some(x.clone());
    }
    if x.is_negative() && n.is_multiple_of(2) {
        return None;
    }
    let num = x.numer().nth_root(n);
    let den = x.denom().nth_root(n);
    let root = Q::new(num, den);
    let mut p = Q::one();
    for _ in 0..n {
        p *= &root;
    }
    if &p == x {
        Some(root)
    } else {
        None
    }
}
