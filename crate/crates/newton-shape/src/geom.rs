//! `(rho,sigma)`-degrees, leading forms, Newton polygons, edge endpoints
//! `st`/`en`, and the direction set `Dir(P)`.

use crate::direction::{cmp_ccw, dir_of, Direction, DirectionError};
use crate::poly::{ExpPoint, LaurentPoly};
use crate::rational::{qi, PlanePoint, Q};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeomError {
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("operation undefined on a monomial")]
    MonomialInput,
    #[error("{0} is not an edge direction of the polygon")]
    NotAnEdge(Direction),
    #[error("internal geometric invariant failed: {0}")]
    AssertionFailure(String),
    #[error(transparent)]
    Direction(#[from] DirectionError),
}

/// `v_{rho,sigma}(P)`, with `-infinity` represented explicitly for `P = 0`.
#[derive(Clone, PartialEq, Eq)]
pub enum DegreeValue {
    NegInfinity,
    Finite(Q),
}

impl std::fmt::Display for DegreeValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DegreeValue::NegInfinity => write!(f, "-inf"),
            DegreeValue::Finite(v) => write!(f, "{}", crate::rational::q_str(v)),
        }
    }
}

impl std::fmt::Debug for DegreeValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

impl DegreeValue {
    pub fn finite(self) -> Option<Q> {
        match self {
            DegreeValue::Finite(v) => Some(v),
            DegreeValue::NegInfinity => None,
        }
    }

    pub fn expect_finite(self) -> Q {
        self.finite().expect("degree of the zero polynomial")
    }
}

impl PartialOrd for DegreeValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DegreeValue {
    fn cmp(&self, other: &Self) -> Ordering {
        use DegreeValue::*;
        match (self, other) {
            (NegInfinity, NegInfinity) => Ordering::Equal,
            (NegInfinity, Finite(_)) => Ordering::Less,
            (Finite(_), NegInfinity) => Ordering::Greater,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

/// The `(rho,sigma)`-degree: max of `rho * i/l + sigma * j` over the support.
pub fn v_degree(p: &LaurentPoly, d: Direction) -> DegreeValue {
    p.support()
        .map(|e| d.v_point(&e.plane()))
        .max()
        .map_or(DegreeValue::NegInfinity, DegreeValue::Finite)
}

/// The `(rho,sigma)`-leading form: the sum of terms attaining `v_degree`.
/// `l(0) = 0`.
pub fn leading_form(p: &LaurentPoly, d: Direction) -> LaurentPoly {
    let vmax = match v_degree(p, d) {
        DegreeValue::NegInfinity => return LaurentPoly::zero(),
        DegreeValue::Finite(v) => v,
    };
    let mut out = LaurentPoly::zero();
    for (e, c) in p.terms() {
        if d.v_point(&e.plane()) == vmax {
            out.add_term(e.clone(), c.clone());
        }
    }
    out
}

/// Whether all support points share one `v`-value (true for 0).
pub fn is_homogeneous(p: &LaurentPoly, d: Direction) -> bool {
    let mut vals = p.support().map(|e| d.v_point(&e.plane()));
    match vals.next() {
        None => true,
        Some(first) => vals.all(|v| v == first),
    }
}

/// Splits `P` into `(rho,sigma)`-homogeneous components of strictly
/// descending degree; their sum is `P`.
pub fn homogeneous_decomposition(
    p: &LaurentPoly,
    d: Direction,
) -> Result<Vec<(Q, LaurentPoly)>, GeomError> {
    if p.is_zero() {
        return Err(GeomError::ZeroPolynomial);
    }
    let mut groups: Vec<(Q, LaurentPoly)> = Vec::new();
    for (e, c) in p.terms() {
        let v = d.v_point(&e.plane());
        match groups.iter_mut().find(|(w, _)| *w == v) {
            Some((_, comp)) => comp.add_term(e.clone(), c.clone()),
            None => {
                let mut comp = LaurentPoly::zero();
                comp.add_term(e.clone(), c.clone());
                groups.push((v, comp));
            }
        }
    }
    groups.sort_by(|a, b| b.0.cmp(&a.0));
    Ok(groups)
}

/// An edge as its `(st, en)` endpoint pair.
pub type EdgeEndpoints = (PlanePoint, PlanePoint);

/// The endpoints `st` and `en` of the edge `Supp(l_d(P))`: the two extreme
/// points of that (collinear) support, oriented so that
/// `cross(d, en - st) >= 0`, with equality exactly for a monomial leading
/// form (then `st = en`).
pub fn endpoints(p: &LaurentPoly, d: Direction) -> Result<EdgeEndpoints, GeomError> {
    if p.is_zero() {
        return Err(GeomError::ZeroPolynomial);
    }
    let lf = leading_form(p, d);
    let pts: Vec<PlanePoint> = lf.support().map(ExpPoint::plane).collect();
    let mut a = pts[0].clone();
    let mut b = pts[0].clone();
    for q in &pts[1..] {
        if (q.x.clone(), q.y.clone()) < (a.x.clone(), a.y.clone()) {
            a = q.clone();
        }
        if (q.x.clone(), q.y.clone()) > (b.x.clone(), b.y.clone()) {
            b = q.clone();
        }
    }
    if a == b {
        return Ok((a, b));
    }
    let dvec = PlanePoint::new(qi(d.rho), qi(d.sigma));
    let diff = &b - &a;
    if dvec.cross(&diff).is_positive() {
        Ok((a, b))
    } else {
        Ok((b, a))
    }
}

pub fn st(p: &LaurentPoly, d: Direction) -> Result<PlanePoint, GeomError> {
    endpoints(p, d).map(|(s, _)| s)
}

pub fn en(p: &LaurentPoly, d: Direction) -> Result<PlanePoint, GeomError> {
    endpoints(p, d).map(|(_, e)| e)
}

/// The Newton polygon: extreme points of the convex hull of the support in
/// counterclockwise order, starting at the lexicographically smallest
/// vertex. Degenerate hulls are a single point or a two-point segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<PlanePoint>,
}

fn turn(o: &PlanePoint, a: &PlanePoint, b: &PlanePoint) -> Q {
    (a - o).cross(&(b - o))
}

/// Exact convex hull (monotone chain over rational coordinates); collinear
/// interior points of edges are not vertices.
pub fn newton_polygon(p: &LaurentPoly) -> Result<NewtonPolygon, GeomError> {
    if p.is_zero() {
        return Err(GeomError::ZeroPolynomial);
    }
    let mut pts: Vec<PlanePoint> = p.support().map(ExpPoint::plane).collect();
    pts.sort();
    pts.dedup();
    if pts.len() == 1 {
        return Ok(NewtonPolygon { vertices: pts });
    }
    let mut lower: Vec<PlanePoint> = Vec::new();
    for q in &pts {
        while lower.len() >= 2
            && !turn(&lower[lower.len() - 2], &lower[lower.len() - 1], q).is_positive()
        {
            lower.pop();
        }
        lower.push(q.clone());
    }
    let mut upper: Vec<PlanePoint> = Vec::new();
    for q in pts.iter().rev() {
        while upper.len() >= 2
            && !turn(&upper[upper.len() - 2], &upper[upper.len() - 1], q).is_positive()
        {
            upper.pop();
        }
        upper.push(q.clone());
    }
    lower.pop();
    upper.pop();
    let mut vertices = lower;
    vertices.extend(upper);
    if vertices.is_empty() {
        // All points collinear: keep the two extremes.
        vertices = vec![pts[0].clone(), pts[pts.len() - 1].clone()];
    }
    Ok(NewtonPolygon { vertices })
}

impl NewtonPolygon {
    pub fn is_point(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn is_segment(&self) -> bool {
        self.vertices.len() == 2
    }

    /// Whether `q` lies inside or on the hull.
    pub fn contains(&self, q: &PlanePoint) -> bool {
        match self.vertices.len() {
            1 => &self.vertices[0] == q,
            2 => {
                let (a, b) = (&self.vertices[0], &self.vertices[1]);
                if !turn(a, b, q).is_zero() {
                    return false;
                }
                let ab = b - a;
                let aq = q - a;
                let t = &ab.x * &aq.x + &ab.y * &aq.y;
                let len2 = &ab.x * &ab.x + &ab.y * &ab.y;
                !t.is_negative() && t <= len2
            }
            _ => {
                let n = self.vertices.len();
                (0..n)
                    .all(|i| !turn(&self.vertices[i], &self.vertices[(i + 1) % n], q).is_negative())
            }
        }
    }
}

fn primitive_direction(x: &Q, y: &Q) -> Direction {
    let den = x.denom().lcm(y.denom());
    let a = x.numer() * (&den / x.denom());
    let b = y.numer() * (&den / y.denom());
    let g = a.gcd(&b);
    let rho: i64 = (&a / &g).try_into().expect("direction fits in i64");
    let sigma: i64 = (&b / &g).try_into().expect("direction fits in i64");
    Direction::of(rho, sigma)
}

/// All directions whose leading form has more than one term: the outward
/// edge normals of the Newton polygon, in counterclockwise order anchored
/// at `(1,0)`. Empty exactly for monomials.
pub fn directions_of(p: &LaurentPoly) -> Result<Vec<Direction>, GeomError> {
    let hull = newton_polygon(p)?;
    let mut dirs: Vec<Direction> = Vec::new();
    match hull.vertices.len() {
        1 => {}
        2 => {
            let e = &hull.vertices[1] - &hull.vertices[0];
            let n = primitive_direction(&e.y, &(-e.x.clone()));
            dirs.push(n);
            dirs.push(n.antipode());
        }
        k => {
            for i in 0..k {
                let e = &hull.vertices[(i + 1) % k] - &hull.vertices[i];
                dirs.push(primitive_direction(&e.y, &(-e.x.clone())));
            }
        }
    }
    let anchor = Direction::of(1, 0);
    dirs.sort_by(|a, b| cmp_ccw(anchor, *a, *b));
    Ok(dirs)
}

/// The first element of `Dir(P)` met running counterclockwise (`succ`) or
/// clockwise (`pred`) from `d`, excluding `d` as a start; for a
/// `d`-homogeneous non-monomial both are the antipode of `d`.
pub fn succ_pred(p: &LaurentPoly, d: Direction, succ: bool) -> Result<Direction, GeomError> {
    let dirs = directions_of(p)?;
    if dirs.is_empty() {
        return Err(GeomError::MonomialInput);
    }
    // Offset rank from d in (0, 2pi]: d itself counts as a full turn.
    let best = dirs
        .iter()
        .copied()
        .min_by(|a, b| {
            let full_a = *a == d;
            let full_b = *b == d;
            match (full_a, full_b) {
                (true, true) => Ordering::Equal,
                (true, false) => Ordering::Greater,
                (false, true) => Ordering::Less,
                (false, false) => {
                    if succ {
                        cmp_ccw(d, *a, *b)
                    } else {
                        cmp_ccw(d, *a, *b).reverse()
                    }
                }
            }
        })
        .unwrap();
    Ok(best)
}

pub fn succ(p: &LaurentPoly, d: Direction) -> Result<Direction, GeomError> {
    succ_pred(p, d, true)
}

pub fn pred(p: &LaurentPoly, d: Direction) -> Result<Direction, GeomError> {
    succ_pred(p, d, false)
}

///`dir(en - st)` for an edge direction `d` of `P`, asserting the self-check
/// identity that it reproduces `d`.
pub fn edge_direction(p: &LaurentPoly, d: Direction) -> Result<Direction, GeomError> {
    if !d.is_positive() {
        return Err(GeomError::NotAnEdge(d));
    }
    let dirs = directions_of(p)?;
    if !dirs.contains(&d) {
        return Err(GeomError::NotAnEdge(d));
    }
    let (s, e) = endpoints(p, d)?;
    let rec = dir_of(&(&e - &s))?;
    if rec != d {
        return Err(GeomError::AssertionFailure(format!(
            "dir(en - st) = {rec} but the edge direction is {d}"
        )));
    }
    Ok(rec)
}

/// Aligned test on plane points (cross product over the rationals is zero).
pub fn aligned(a: &PlanePoint, b: &PlanePoint) -> bool {
    a.aligned(b)
}

/// Convenience: `v_degree` of a nonzero polynomial as a rational.
pub fn v_of(p: &LaurentPoly, d: Direction) -> Q {
    v_degree(p, d).expect_finite()
}

/// True when `first < d < second` never wraps: membership of `d` in the open
/// interval from `a` to `b` counterclockwise.
pub fn between_ccw(a: Direction, d: Direction, b: Direction) -> bool {
    if d == a || d == b {
        return false;
    }
    cmp_ccw(a, d, b) == Ordering::Less
}

pub use crate::direction::ccw_less;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::text::parse_poly;

    fn p(s: &str) -> LaurentPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn v_degree_examples() {
        let f = p("x^2 + y^3 + 1");
        assert_eq!(
            v_degree(&f, Direction::of(1, 1)),
            DegreeValue::Finite(qi(3))
        );
        assert_eq!(
            v_degree(&LaurentPoly::zero(), Direction::of(1, 0)),
            DegreeValue::NegInfinity
        );
    }

    #[test]
    fn leading_form_examples() {
        let f = p("x^2*y + x");
        assert_eq!(leading_form(&f, Direction::of(1, 1)), p("x^2*y"));
        // l_{4,-1}(x(xy^4-1)^3 + 1) drops the constant.
        let g = p("x^4*y^12 - 3*x^3*y^8 + 3*x^2*y^4 - x + 1");
        assert_eq!(
            leading_form(&g, Direction::of(4, -1)),
            p("x^4*y^12 - 3*x^3*y^8 + 3*x^2*y^4 - x")
        );
    }

    #[test]
    fn homogeneity_examples() {
        assert!(is_homogeneous(&p("x^2*y"), Direction::of(7, 3)));
        assert!(is_homogeneous(&p("x^2*y^4 - x"), Direction::of(4, -1)));
        assert!(!is_homogeneous(&p("x + y"), Direction::of(1, 0)));
    }

    #[test]
    fn decomposition_examples() {
        let f = p("x^2*y + x + y^2");
        let comps = homogeneous_decomposition(&f, Direction::of(1, 1)).unwrap();
        assert_eq!(comps.len(), 3);
        assert_eq!(comps[0], (qi(3), p("x^2*y")));
        assert_eq!(comps[1], (qi(2), p("y^2")));
        assert_eq!(comps[2], (qi(1), p("x")));
        let g = p("x + y");
        let comps = homogeneous_decomposition(&g, Direction::of(1, -1)).unwrap();
        assert_eq!(comps[0].0, qi(1));
        assert_eq!(comps[1].0, qi(-1));
    }

    #[test]
    fn endpoints_examples() {
        // monomial
        let m = p("x^3*y^5");
        let (s, e) = endpoints(&m, Direction::of(2, -1)).unwrap();
        assert_eq!(s, PlanePoint::from_ints(3, 5));
        assert_eq!(s, e);
        // x(xy^4 - 1)^3 at (4,-1): st (1,0), en (4,12)
        let r = p("x^4*y^12 - 3*x^3*y^8 + 3*x^2*y^4 - x");
        let (s, e) = endpoints(&r, Direction::of(4, -1)).unwrap();
        assert_eq!(s, PlanePoint::from_ints(1, 0));
        assert_eq!(e, PlanePoint::from_ints(4, 12));
    }

    #[test]
    fn hull_and_directions() {
        let f = p("x^2 + y^3 + 1");
        let hull = newton_polygon(&f).unwrap();
        assert_eq!(
            hull.vertices,
            vec![
                PlanePoint::from_ints(0, 0),
                PlanePoint::from_ints(2, 0),
                PlanePoint::from_ints(0, 3)
            ]
        );
        let dirs = directions_of(&f).unwrap();
        assert_eq!(
            dirs,
            vec![
                Direction::of(3, 2),
                Direction::of(-1, 0),
                Direction::of(0, -1)
            ]
        );
        assert!(directions_of(&p("x^3*y^5")).unwrap().is_empty());
    }

    #[test]
    fn succ_pred_examples() {
        let f = p("x^2 + y^3 + 1");
        assert_eq!(succ(&f, Direction::of(1, 0)).unwrap(), Direction::of(3, 2));
        assert_eq!(pred(&f, Direction::of(1, 0)).unwrap(), Direction::of(0, -1));
        // homogeneous non-monomial: both are the antipode
        let h = p("x^2*y^4 - x");
        let d = Direction::of(4, -1);
        assert_eq!(succ(&h, d).unwrap(), d.antipode());
        assert_eq!(pred(&h, d).unwrap(), d.antipode());
    }

    #[test]
    fn edge_direction_examples() {
        let r = p("x^4*y^12 - 3*x^3*y^8 + 3*x^2*y^4 - x");
        assert_eq!(
            edge_direction(&r, Direction::of(4, -1)).unwrap(),
            Direction::of(4, -1)
        );
        let f = p("x^2 + y^3 + 1");
        assert_eq!(
            edge_direction(&f, Direction::of(3, 2)).unwrap(),
            Direction::of(3, 2)
        );
        assert_eq!(
            edge_direction(&p("x + y"), Direction::of(1, 1)).unwrap(),
            Direction::of(1, 1)
        );
        assert!(matches!(
            edge_direction(&f, Direction::of(5, 1)),
            Err(GeomError::NotAnEdge(_))
        ));
    }

    #[test]
    fn aligned_examples() {
        assert!(aligned(
            &PlanePoint::from_ints(2, 4),
            &PlanePoint::from_ints(1, 2)
        ));
        assert!(!aligned(
            &PlanePoint::from_ints(1, 1),
            &PlanePoint::from_ints(1, 2)
        ));
        assert!(aligned(
            &PlanePoint::from_ints(0, 0),
            &PlanePoint::from_ints(5, 7)
        ));
    }

    #[test]
    fn endpoints_of_reference_pair_leading_form() {
        // l_{1,-2}(P) for P = x^2 y + x^6 y^2 (1 + 6x^2 y + 9 x^4 y^2):
        // st (6,2), en (10,4).
        let lp = p("x^6*y^2 + 6*x^8*y^3 + 9*x^10*y^4");
        let (s, e) = endpoints(&lp, Direction::of(1, -2)).unwrap();
        assert_eq!(s, PlanePoint::from_ints(6, 2));
        assert_eq!(e, PlanePoint::from_ints(10, 4));
    }

    #[test]
    fn fractional_exponent_homogeneity() {
        let f = &p("x^2*y^4") - &p("x");
        assert!(is_homogeneous(&f, Direction::of(4, -1)));
        let g = LaurentPoly::monomial(q(1, 2), q(-1, 2), 3);
        assert!(is_homogeneous(&g, Direction::of(1, 1)));
    }
}
