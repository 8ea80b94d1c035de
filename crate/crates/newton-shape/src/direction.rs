//! Directions `(rho, sigma)` with `gcd(rho, sigma) = 1` and the exact
//! counterclockwise order on them.
//!
//! The circular order is only well defined on intervals of the direction
//! circle, so every comparison here is anchored: `cmp_ccw(anchor, a, b)`
//! compares angular offsets from `anchor`, measured counterclockwise in
//! `[0, 2pi)` and computed exactly from half-plane classification plus cross
//! product signs. Restricted to an interval containing no closed half
//! circle this agrees with `cross(a, b) > 0`.

use crate::rational::{PlanePoint, Q};
use num_integer::Integer;
use serde::Serialize;
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DirectionError {
    #[error("the zero vector is not a direction")]
    ZeroVector,
    #[error("point lies on the diagonal Q(1,1); dir() is undefined")]
    OnDiagonal,
}

/// A primitive integer direction `(rho, sigma)`, `gcd = 1`, not both zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Direction {
    pub rho: i64,
    pub sigma: i64,
}

impl Direction {
    /// Builds a direction, normalizing by the (positive) gcd.
    pub fn new(rho: i64, sigma: i64) -> Result<Self, DirectionError> {
        if rho == 0 && sigma == 0 {
            return Err(DirectionError::ZeroVector);
        }
        let g = rho.gcd(&sigma);
        Ok(Direction {
            rho: rho / g,
            sigma: sigma / g,
        })
    }

    /// Shorthand for directions known statically to be nonzero.
    pub fn of(rho: i64, sigma: i64) -> Self {
        Direction::new(rho, sigma).expect("nonzero direction")
    }

    pub fn antipode(&self) -> Direction {
        Direction {
            rho: -self.rho,
            sigma: -self.sigma,
        }
    }

    /// `rho + sigma > 0`, membership in the open upper half circle `V_{>0}`.
    pub fn is_positive(&self) -> bool {
        self.rho + self.sigma > 0
    }

    /// Membership in `I = ](1,-1), (1,0)]`.
    pub fn in_interval_i(&self) -> bool {
        cross((1, -1), (self.rho, self.sigma)) > 0 && self.sigma <= 0
    }

    /// The valuation `v_{rho,sigma}(p) = rho * p.x + sigma * p.y`.
    pub fn v_point(&self, p: &PlanePoint) -> Q {
        &p.x * &crate::rational::qi(self.rho) + &p.y * &crate::rational::qi(self.sigma)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.rho, self.sigma)
    }
}

impl fmt::Debug for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Integer cross product `a1*b2 - a2*b1`, widened to avoid overflow.
pub fn cross(a: (i64, i64), b: (i64, i64)) -> i128 {
    a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128
}

/// Dot product, widened.
pub fn dot(a: (i64, i64), b: (i64, i64)) -> i128 {
    a.0 as i128 * b.0 as i128 + a.1 as i128 * b.1 as i128
}

fn pair(d: Direction) -> (i64, i64) {
    (d.rho, d.sigma)
}

/// Angular offset class of `v` from `anchor`, counterclockwise:
/// 0 for `v = anchor`, 1 for offsets in `(0, pi)`, 2 for the antipode,
/// 3 for offsets in `(pi, 2pi)`.
fn offset_class(anchor: Direction, v: Direction) -> u8 {
    if v == anchor {
        return 0;
    }
    if v == anchor.antipode() {
        return 2;
    }
    if cross(pair(anchor), pair(v)) > 0 {
        1
    } else {
        3
    }
}

/// Compares the counterclockwise angular offsets from `anchor` of `a` and
/// `b`, exactly (quadrant class plus cross sign, no floating point).
pub fn cmp_ccw(anchor: Direction, a: Direction, b: Direction) -> Ordering {
    let (ca, cb) = (offset_class(anchor, a), offset_class(anchor, b));
    match ca.cmp(&cb) {
        Ordering::Equal => {
            if a == b {
                Ordering::Equal
            } else {
                // Same open half circle relative to the anchor: plain cross.
                if cross(pair(a), pair(b)) > 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
        other => other,
    }
}

/// True when `a`'s angular offset from `anchor` is strictly smaller than
/// `b`'s.
pub fn ccw_less(a: Direction, b: Direction, anchor: Direction) -> bool {
    cmp_ccw(anchor, a, b) == Ordering::Less
}

/// Order on the interval `V_{>0} = ](1,-1),(-1,1)[` (and any other interval
/// free of a closed half circle): `a < b  iff  cross(a,b) > 0`.
pub fn lt_in_halfcircle(a: Direction, b: Direction) -> bool {
    cross(pair(a), pair(b)) > 0
}

/// The unique `(rho, sigma)` in `V_{>0}` with `v_{rho,sigma}(p) = 0`, for a
/// point off the diagonal `Q(1,1)`.
pub fn dir_of(p: &PlanePoint) -> Result<Direction, DirectionError> {
    if p.x == p.y {
        // Covers the zero vector as well.
        return Err(DirectionError::OnDiagonal);
    }
    // Clear denominators to a primitive integer vector (a, b) ~ p.
    let den_lcm = p.x.denom().lcm(p.y.denom());
    let a_big = p.x.numer() * (&den_lcm / p.x.denom());
    let b_big = p.y.numer() * (&den_lcm / p.y.denom());
    let g = a_big.gcd(&b_big);
    let a: i64 = (&a_big / &g)
        .try_into()
        .expect("exponent coordinates fit in i64");
    let b: i64 = (&b_big / &g)
        .try_into()
        .expect("exponent coordinates fit in i64");
    // Want rho*a + sigma*b = 0 with rho + sigma > 0: (b,-a) up to sign.
    if b - a > 0 {
        Ok(Direction::of(b, -a))
    } else {
        Ok(Direction::of(-b, a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use num_traits::Zero;

    #[test]
    fn cross_examples() {
        assert_eq!(cross((1, 0), (0, 1)), 1);
        assert_eq!(cross((1, -1), (4, -1)), 3);
        assert_eq!(cross((2, 4), (1, 2)), 0);
    }

    #[test]
    fn construction_normalizes_and_rejects_zero() {
        assert_eq!(Direction::of(2, -4), Direction { rho: 1, sigma: -2 });
        assert_eq!(Direction::new(0, 0), Err(DirectionError::ZeroVector));
    }

    #[test]
    fn dir_of_examples() {
        assert_eq!(
            dir_of(&PlanePoint::from_ints(1, 3)).unwrap(),
            Direction::of(3, -1)
        );
        assert_eq!(
            dir_of(&PlanePoint::from_ints(3, 12)).unwrap(),
            Direction::of(4, -1)
        );
        // (f1,f2) = (2,4): dir(f1-1, f2-1) = (3,-1)
        assert_eq!(
            dir_of(&PlanePoint::from_ints(1, 3)).unwrap(),
            Direction::of(3, -1)
        );
        assert_eq!(
            dir_of(&PlanePoint::from_ints(2, 2)),
            Err(DirectionError::OnDiagonal)
        );
        // Rational input.
        assert_eq!(
            dir_of(&PlanePoint::new(q(1, 2), q(3, 2))).unwrap(),
            Direction::of(3, -1)
        );
    }

    #[test]
    fn dir_of_zero_valuation_holds() {
        let p = PlanePoint::from_ints(1, 3);
        let d = dir_of(&p).unwrap();
        assert!(d.v_point(&p).is_zero());
        assert!(d.is_positive());
    }

    #[test]
    fn ccw_less_examples() {
        let a = Direction::of(1, 0);
        assert!(ccw_less(Direction::of(1, 0), Direction::of(1, 1), a));
        assert!(ccw_less(
            Direction::of(1, -1),
            Direction::of(4, -1),
            Direction::of(1, -1)
        ));
        assert!(ccw_less(
            Direction::of(4, -1),
            Direction::of(1, 0),
            Direction::of(1, -1)
        ));
    }

    #[test]
    fn interval_i_membership() {
        assert!(Direction::of(1, 0).in_interval_i());
        assert!(Direction::of(4, -1).in_interval_i());
        assert!(Direction::of(2, -1).in_interval_i());
        assert!(!Direction::of(1, -1).in_interval_i());
        assert!(!Direction::of(1, 1).in_interval_i());
        assert!(!Direction::of(-1, 1).in_interval_i());
        assert!(!Direction::of(0, -1).in_interval_i());
    }
}
