//! End-to-end facts about the reference Jacobian pair in `L^(1)` whose
//! `(1,-2)` leading form admits no `F` element.

use newton_shape::direction::Direction;
use newton_shape::geom::{endpoints, leading_form, v_degree, DegreeValue};
use newton_shape::homog::{check_pavadass, slice, solve_f};
use newton_shape::pipeline::certify_no_f;
use newton_shape::poly::{bracket, is_jacobian_pair, LaurentPoly};
use newton_shape::rational::{qi, PlanePoint};
use newton_shape::text::parse_poly;
use newton_shape::unipoly::UniPoly;

fn reference_pair() -> (LaurentPoly, LaurentPoly) {
    let p = parse_poly("x^2*y + x^6*y^2 + 6*x^8*y^3 + 9*x^10*y^4").unwrap();
    let q = parse_poly(
        "x^-1 + 2*x^3*y + 18*x^5*y^2 + 36*x^7*y^3 \
         + 8*x^9*y^3 + 72*x^11*y^4 + 216*x^13*y^5 + 216*x^15*y^6",
    )
    .unwrap();
    (p, q)
}

#[test]
fn bracket_is_exactly_one() {
    let (p, q) = reference_pair();
    assert_eq!(bracket(&p, &q), LaurentPoly::one());
    assert_eq!(is_jacobian_pair(&p, &q), Some(qi(1)));
}

#[test]
fn degree_at_one_minus_two_is_two() {
    let (p, _) = reference_pair();
    assert_eq!(
        v_degree(&p, Direction::of(1, -2)),
        DegreeValue::Finite(qi(2))
    );
}

#[test]
fn leading_form_and_endpoints() {
    let (p, _) = reference_pair();
    let d = Direction::of(1, -2);
    let lf = leading_form(&p, d);
    assert_eq!(lf, parse_poly("x^6*y^2 + 6*x^8*y^3 + 9*x^10*y^4").unwrap());
    let (s, e) = endpoints(&p, d).unwrap();
    assert_eq!(s, PlanePoint::from_ints(6, 2));
    assert_eq!(e, PlanePoint::from_ints(10, 4));
    // l = x^6 y^2 (1 + 3 x^2 y)^2: slice data.
    let sl = slice(&lf, d).unwrap();
    assert_eq!(sl.xshift, qi(6));
    assert_eq!(sl.yshift, 2);
    assert_eq!(sl.poly, UniPoly::from_coeffs(vec![qi(1), qi(3)]).pow(2));
}

#[test]
fn no_f_below_the_bound() {
    let (p, _) = reference_pair();
    let d = Direction::of(1, -2);
    let lf = leading_form(&p, d);
    let sols = solve_f(&lf, d, 20).unwrap();
    assert!(sols.is_empty());
    assert!(sols.as_list().is_empty());
    // Trivially empty at bound zero as well.
    let sols = solve_f(&lf, d, 0).unwrap();
    assert!(sols.is_empty());
    // Certificate wrapper.
    let cert = certify_no_f(&p, d, 20).unwrap();
    assert!(cert.solutions.is_empty());
    assert_eq!(cert.max_ydeg, 20);
}

#[test]
fn positive_control_has_a_unique_f() {
    // [F, x^3 (y-2)^2] = x^3 (y-2)^2 with F = -x(y-2), unique below the
    // bound; the structure report passes all clauses.
    let phom = parse_poly("x^3*y^2 - 4*x^3*y + 4*x^3").unwrap();
    let d = Direction::of(1, 0);
    let sols = solve_f(&phom, d, 5).unwrap();
    let f = sols.unique().expect("unique F").clone();
    assert_eq!(f, parse_poly("-x*y + 2*x").unwrap());
    assert_eq!(bracket(&f, &phom), phom);
    let rep = check_pavadass(&phom, &f, d).unwrap();
    assert!(rep.all_pass(), "{rep:?}");
}
