//! Regular corners of `(m,n)`-pairs: detection on concrete pairs, the set
//! `A(P)`, and the starting triple.

use crate::direction::Direction;
use crate::geom::{directions_of, endpoints, GeomError};
use crate::homog::{classify_case, CornerCase, HomogError};
use crate::poly::LaurentPoly;
use crate::rational::{q_is_integer, qi, PlanePoint, Q};
use num_traits::Signed;

/// A regular corner `(A, (rho,sigma))` of an `(m,n)`-pair: `A` has
/// `b >= 1`, `b > a/l`, the direction lies in `I = ](1,-1),(1,0)]` and
/// `A = en_d(P)/m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularCorner {
    pub point: PlanePoint,
    pub dir: Direction,
    pub case: Option<CornerCase>,
}

/// The starting triple `(A0, A0', (rho,sigma))` of a standard pair: the
/// unique regular corner whose direction is not in `A(P)`, with
/// `A0' = st_d(P)/m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StartingTriple {
    pub a0: PlanePoint,
    pub a0_prime: PlanePoint,
    pub dir: Direction,
}

/// Output of corner detection.
#[derive(Clone, Debug)]
pub struct CornerReport {
    /// Regular corners sorted by direction (counterclockwise within `I`).
    pub corners: Vec<RegularCorner>,
    /// `A(P)`: directions of `Dir(P) & I` whose start point satisfies
    /// `v_{0,-1}(st) < -1` and `v_{1,-1}(st) < 0`.
    pub a_set: Vec<Direction>,
    pub starting_triple: Option<StartingTriple>,
}

fn in_a_set(p: &LaurentPoly, d: Direction) -> Result<bool, GeomError> {
    let (s, _) = endpoints(p, d)?;
    // v_{0,-1}(st) < -1 and v_{1,-1}(st) < 0
    Ok(-s.y.clone() < qi(-1) && &s.x - &s.y < qi(0))
}

/// Detects every regular corner of `(P, Q)` per the support conditions; the
/// Jacobian condition is not re-verified here.
pub fn regular_corners_of_pair(
    p: &LaurentPoly,
    _q: &LaurentPoly,
    m: i64,
    _n: i64,
) -> Result<CornerReport, GeomError> {
    if p.is_zero() {
        return Err(GeomError::ZeroPolynomial);
    }
    let dirs = directions_of(p)?;
    let mut corners = Vec::new();
    let mut a_set = Vec::new();
    for d in dirs.iter().copied().filter(Direction::in_interval_i) {
        let (_, e) = endpoints(p, d)?;
        let a = e.scale(&qi(m).recip());
        // A in (1/l)Z x N0 with b >= 1 and b > a/l.
        let b_ok = q_is_integer(&a.y) && a.y >= qi(1) && a.y > a.x;
        if b_ok {
            corners.push(RegularCorner {
                point: a,
                dir: d,
                case: None,
            });
        }
        if in_a_set(p, d)? {
            a_set.push(d);
        }
    }
    // Counterclockwise within I == ascending cross order anchored at the
    // interval start.
    corners.sort_by(|a, b| crate::direction::cmp_ccw(Direction::of(1, -1), a.dir, b.dir));
    a_set.sort_by(|a, b| crate::direction::cmp_ccw(Direction::of(1, -1), *a, *b));
    let starting_triple = corners
        .iter()
        .find(|c| !a_set.contains(&c.dir))
        .map(|c| -> Result<StartingTriple, GeomError> {
            let (s, _) = endpoints(p, c.dir)?;
            Ok(StartingTriple {
                a0: c.point.clone(),
                a0_prime: s.scale(&qi(m).recip()),
                dir: c.dir,
            })
        })
        .transpose()?;
    Ok(CornerReport {
        corners,
        a_set,
        starting_triple,
    })
}

/// Case label of a detected corner, via the leading forms of the pair.
pub fn classify_corner(
    p: &LaurentPoly,
    q: &LaurentPoly,
    c: &RegularCorner,
) -> Result<CornerCase, HomogError> {
    let pl = crate::geom::leading_form(p, c.dir);
    let ql = crate::geom::leading_form(q, c.dir);
    classify_case(&pl, &ql, c.dir)
}

/// `v_{1,-1}` of a plane point, the diagonal defect used throughout the
/// corner conditions.
pub fn v11_defect(a: &PlanePoint) -> Q {
    &a.x - &a.y
}

/// True when a corner point violates `b > a/l` (kept for the explicit
/// exclusion tests).
pub fn violates_above_diagonal(a: &PlanePoint) -> bool {
    !(&a.y - &a.x).is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_poly;

    fn p(s: &str) -> LaurentPoly {
        parse_poly(s).unwrap()
    }

    /// Synthetic witness with the minimal-corner hull shape: leading form
    /// `(x(xy^4 - 1)^3)^m` at `(4,-1)`, `(y(xy^2 - 1))^(4m)` at `(-2,1)`,
    /// and a constant term closing the hull.
    fn witness(m: u32) -> LaurentPoly {
        let r0 = p("x^4*y^12 - 3*x^3*y^8 + 3*x^2*y^4 - x");
        let r1 = p("x*y^3 - y"); // y (x y^2 - 1)
        let top = LaurentPoly::monomial(
            crate::rational::qi(1),
            crate::rational::qi(4 * m as i64),
            12 * m,
        );
        &(&(&r0.pow(m) + &r1.pow(4 * m)) - &top) + &LaurentPoly::one()
    }

    #[test]
    fn detects_the_minimal_corner() {
        let pw = witness(2);
        let qw = witness(3);
        // The witness carries the normal-form hull: its direction set is
        // exactly {(4,-1), (-2,1), (-1,0), (0,-1)}.
        let mut dirs = crate::geom::directions_of(&pw).unwrap();
        dirs.sort_by_key(|d| (d.rho, d.sigma));
        let mut expected = vec![
            Direction::of(4, -1),
            Direction::of(-2, 1),
            Direction::of(-1, 0),
            Direction::of(0, -1),
        ];
        expected.sort_by_key(|d| (d.rho, d.sigma));
        assert_eq!(dirs, expected);
        let rep = regular_corners_of_pair(&pw, &qw, 2, 3).unwrap();
        let c = rep
            .corners
            .iter()
            .find(|c| c.dir == Direction::of(4, -1))
            .expect("corner at (4,-1)");
        assert_eq!(c.point, PlanePoint::from_ints(4, 12));
        let st = rep.starting_triple.expect("starting triple");
        assert_eq!(st.a0, PlanePoint::from_ints(4, 12));
        assert_eq!(st.a0_prime, PlanePoint::from_ints(1, 0));
        assert_eq!(st.dir, Direction::of(4, -1));
    }

    #[test]
    fn classifies_the_detected_corner() {
        let pw = witness(2);
        let qw = witness(3);
        let rep = regular_corners_of_pair(&pw, &qw, 2, 3).unwrap();
        let c = rep
            .corners
            .iter()
            .find(|c| c.dir == Direction::of(4, -1))
            .unwrap();
        assert_eq!(
            classify_corner(&pw, &qw, c).unwrap(),
            crate::homog::CornerCase::IIb
        );
    }

    #[test]
    fn monomial_has_no_corners() {
        let rep = regular_corners_of_pair(&p("x^3*y^5"), &p("x"), 2, 3);
        assert!(rep.unwrap().corners.is_empty());
    }

    #[test]
    fn below_diagonal_endpoint_is_excluded() {
        // en_{1,0}(P) = (3,2) fails b > a/l, so no corner at (1,0).
        let f = p("x^3*y^2 + x^3*y + 1");
        let rep = regular_corners_of_pair(&f, &f, 1, 2).unwrap();
        assert!(rep.corners.iter().all(|c| c.dir != Direction::of(1, 0)));
    }
}
