//! Elementary automorphisms `y -> y + lambda x^(k/l)` of `L^(l)`, the flips
//! `psi1/psi2/psi3`, their action on directions and supports, and a
//! generator of genuine Jacobian pairs for property testing.

use crate::direction::Direction;
use crate::poly::{ExpPoint, LaurentPoly};
use crate::rational::{q_is_integer, qi, PlanePoint, Q};
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MorphError {
    #[error("lambda must be nonzero")]
    ZeroLambda,
    #[error("{0} requires integer x-exponents{1}")]
    NotInL(Flip, &'static str),
    #[error("term budget of {0} exceeded while generating a tame pair")]
    BudgetExceeded(usize),
}

/// The automorphism `x^(1/l) -> x^(1/l)`, `y -> y + lambda x^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryAuto {
    pub lambda: Q,
    pub exponent: Q,
}

impl ElementaryAuto {
    pub fn new(lambda: Q, exponent: Q) -> Result<Self, MorphError> {
        if lambda.is_zero() {
            return Err(MorphError::ZeroLambda);
        }
        Ok(ElementaryAuto { lambda, exponent })
    }

    /// The direction `(rho, sigma)` with `sigma/rho = exponent` and
    /// `rho > 0`, along which the automorphism is homogeneous.
    pub fn direction(&self) -> Direction {
        let rho: i64 = self
            .exponent
            .denom()
            .try_into()
            .expect("exponent denominator fits in i64");
        let sigma: i64 = self
            .exponent
            .numer()
            .try_into()
            .expect("exponent numerator fits in i64");
        Direction::of(rho, sigma)
    }
}

/// Applies `y -> y + lambda x^(k/l)` with exact binomial expansion.
pub fn apply_elementary(p: &LaurentPoly, a: &ElementaryAuto) -> LaurentPoly {
    let g = &LaurentPoly::var_y() + &LaurentPoly::monomial(a.lambda.clone(), a.exponent.clone(), 0);
    p.substitute_y(&g)
}

/// The three flip automorphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flip {
    /// `x -> y`, `y -> -x`; defined on `L` only.
    Psi1,
    /// `x -> -x^(-1)`, `y -> x^2 y`; defined on `L^(1)`.
    Psi2,
    /// `x -> x^(-1)`, `y -> x^3 y`.
    Psi3,
}

impl std::fmt::Display for Flip {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Flip::Psi1 => "psi1",
            Flip::Psi2 => "psi2",
            Flip::Psi3 => "psi3",
        };
        write!(f, "{s}")
    }
}

/// Applies a flip. `psi1` rejects genuinely Laurent input; `psi2` needs
/// integer x-exponents for the sign `(-1)^i` to make sense.
pub fn apply_flip(p: &LaurentPoly, f: Flip) -> Result<LaurentPoly, MorphError> {
    let mut out = LaurentPoly::zero();
    match f {
        Flip::Psi1 => {
            if !p.is_in_l() {
                return Err(MorphError::NotInL(f, ", none negative"));
            }
            for (e, c) in p.terms() {
                // x^i y^j -> y^i (-x)^j = (-1)^j x^j y^i
                let i: u32 = e
                    .xexp
                    .to_integer()
                    .try_into()
                    .expect("checked nonnegative integer");
                let sign = if e.yexp % 2 == 1 {
                    -c.clone()
                } else {
                    c.clone()
                };
                out.add_term(ExpPoint::from_ints(e.yexp as i64, i), sign);
            }
        }
        Flip::Psi2 => {
            for (e, c) in p.terms() {
                if !q_is_integer(&e.xexp) {
                    return Err(MorphError::NotInL(f, ""));
                }
                // x^i y^j -> (-1)^i x^(2j - i) y^j
                let i = e.xexp.to_integer();
                let sign = if i.is_odd() { -c.clone() } else { c.clone() };
                let newx = qi(2 * e.yexp as i64) - e.xexp.clone();
                out.add_term(ExpPoint::new(newx, e.yexp), sign);
            }
        }
        Flip::Psi3 => {
            for (e, c) in p.terms() {
                // x^i y^j -> x^(3j - i) y^j, also for fractional i
                let newx = qi(3 * e.yexp as i64) - e.xexp.clone();
                out.add_term(ExpPoint::new(newx, e.yexp), c.clone());
            }
        }
    }
    Ok(out)
}

use num_integer::Integer as _;

/// The images of `x` and `y` under a flip, as polynomials.
pub fn flip_images(f: Flip) -> (LaurentPoly, LaurentPoly) {
    match f {
        Flip::Psi1 => (LaurentPoly::var_y(), -&LaurentPoly::var_x()),
        Flip::Psi2 => (
            LaurentPoly::monomial(qi(-1), qi(-1), 0),
            LaurentPoly::monomial(qi(1), qi(2), 1),
        ),
        Flip::Psi3 => (
            LaurentPoly::xpow(-1),
            LaurentPoly::monomial(qi(1), qi(3), 1),
        ),
    }
}

/// Pushforward of a direction under a flip:
/// `psi1: (rho,sigma) -> (sigma,rho)`, `psi2: -> (-rho, 2rho+sigma)`,
/// `psi3: -> (-rho, 3rho+sigma)`.
pub fn pushforward_direction(d: Direction, f: Flip) -> Direction {
    match f {
        Flip::Psi1 => Direction::of(d.sigma, d.rho),
        Flip::Psi2 => Direction::of(-d.rho, 2 * d.rho + d.sigma),
        Flip::Psi3 => Direction::of(-d.rho, 3 * d.rho + d.sigma),
    }
}

/// The support map of `psi3`: `(i, j) -> (-i + 3j, j)`; linear, so it maps
/// convex hulls to convex hulls.
pub fn psi3_support_map(p: &PlanePoint) -> PlanePoint {
    PlanePoint::new(&qi(3) * &p.y - p.x.clone(), p.y.clone())
}

/// A random Jacobian pair with bracket exactly 1, deterministic in `seed`:
/// the image of `(x, y)` under a random composition of elementary
/// automorphisms of `L` and sign-fixed coordinate swaps.
pub fn random_tame_pair(
    seed: u64,
    steps: u32,
    size_budget: usize,
) -> Result<(LaurentPoly, LaurentPoly), MorphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = LaurentPoly::var_x();
    let mut q = LaurentPoly::var_y();
    for _ in 0..steps {
        if rng.gen_range(0..10) < 7 {
            let lambda = qi(*[-2, -1, 1, 2].get(rng.gen_range(0..4)).unwrap());
            let k = rng.gen_range(0..=2u32);
            // Composition with y -> y + lambda x^k maps the pair
            // (phi(x), phi(y)) to (phi(x), phi(y) + lambda phi(x)^k).
            q = &q + &p.pow(k).scale(&lambda);
        } else {
            // Composition with psi1 maps (P, Q) to (Q, -P); Jacobian 1.
            let tmp = p;
            p = q;
            q = -&tmp;
        }
        if p.term_count() + q.term_count() > size_budget {
            return Err(MorphError::BudgetExceeded(size_budget));
        }
    }
    Ok((p, q))
}

/// An arbitrary morphism assembled from elementary automorphisms and flips,
/// tracked together with the images of `x` and `y`.
#[derive(Clone, Debug)]
pub enum MorphStep {
    Elementary(ElementaryAuto),
    FlipStep(Flip),
}

/// Applies a composition of steps (leftmost applied first) to a polynomial.
pub fn apply_steps(p: &LaurentPoly, steps: &[MorphStep]) -> Result<LaurentPoly, MorphError> {
    let mut out = p.clone();
    for s in steps {
        out = match s {
            MorphStep::Elementary(a) => apply_elementary(&out, a),
            MorphStep::FlipStep(f) => apply_flip(&out, *f)?,
        };
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::bracket;
    use crate::rational::q;
    use crate::text::parse_poly;

    fn p(s: &str) -> LaurentPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn elementary_shift_examples() {
        let a = ElementaryAuto::new(qi(1), Q::zero()).unwrap();
        assert_eq!(apply_elementary(&p("x*y"), &a), p("x*y + x"));
        let a = ElementaryAuto::new(qi(2), qi(-1)).unwrap();
        assert_eq!(
            apply_elementary(&p("y^2"), &a),
            p("y^2 + 4*x^-1*y + 4*x^-2")
        );
    }

    #[test]
    fn elementary_shift_kills_single_root_form() {
        // mu x^(k/l) (z - lambda)^r with z = x^(-sigma/rho) y shifts to the
        // monomial mu x^(k/l - sigma r / rho) y^r; here (rho,sigma) = (1,0),
        // lambda = 1, r = 4: x^3 (y-1)^4 -> x^3 y^4.
        let f = p("x^3*y^4 - 4*x^3*y^3 + 6*x^3*y^2 - 4*x^3*y + x^3");
        let a = ElementaryAuto::new(qi(1), Q::zero()).unwrap();
        assert_eq!(apply_elementary(&f, &a), p("x^3*y^4"));
    }

    #[test]
    fn flip_examples() {
        assert_eq!(apply_flip(&p("x"), Flip::Psi1).unwrap(), p("y"));
        assert_eq!(apply_flip(&p("x"), Flip::Psi2).unwrap(), p("-x^-1"));
        // psi3(x^8 y^3 (x^4 y + lambda)) = y^3 (y + lambda x); lambda = 5.
        let f = p("x^12*y^4 + 5*x^8*y^3");
        assert_eq!(apply_flip(&f, Flip::Psi3).unwrap(), p("y^4 + 5*x*y^3"));
        assert!(matches!(
            apply_flip(&p("x^-1"), Flip::Psi1),
            Err(MorphError::NotInL(Flip::Psi1, _))
        ));
    }

    #[test]
    fn pushforward_examples() {
        let d = pushforward_direction(Direction::of(2, -1), Flip::Psi1);
        assert_eq!(d, Direction::of(-1, 2));
        assert_eq!(pushforward_direction(d, Flip::Psi2), Direction::of(1, 0));
        assert_eq!(
            pushforward_direction(
                pushforward_direction(Direction::of(3, -1), Flip::Psi1),
                Flip::Psi2
            ),
            Direction::of(1, 1)
        );
        assert_eq!(
            pushforward_direction(Direction::of(-1, 4), Flip::Psi3),
            Direction::of(1, 1)
        );
    }

    #[test]
    fn flip_jacobians() {
        // psi1 and psi2 preserve Jacobian pairs; psi3 picks up -x.
        for f in [Flip::Psi1, Flip::Psi2] {
            let (fx, fy) = flip_images(f);
            let b = bracket(&fx, &fy);
            assert_eq!(b.as_constant(), Some(qi(1)), "flip {f}");
        }
        let (fx, fy) = flip_images(Flip::Psi3);
        assert_eq!(bracket(&fx, &fy), p("-x"));
    }

    #[test]
    fn tame_pair_generator() {
        let (x, y) = random_tame_pair(7, 0, 100).unwrap();
        assert_eq!(x, p("x"));
        assert_eq!(y, p("y"));
        for seed in 0..20 {
            let (a, b) = random_tame_pair(seed, 12, 4000).unwrap();
            assert_eq!(bracket(&a, &b).as_constant(), Some(qi(1)), "seed {seed}");
            let (a2, b2) = random_tame_pair(seed, 12, 4000).unwrap();
            assert_eq!(a, a2);
            assert_eq!(b, b2);
        }
    }

    #[test]
    fn tame_pair_budget_guard() {
        assert!(matches!(
            random_tame_pair(3, 40, 1),
            Err(MorphError::BudgetExceeded(1))
        ));
    }

    #[test]
    fn fractional_exponent_shift() {
        let a = ElementaryAuto::new(q(1, 1), q(1, 2)).unwrap();
        assert_eq!(a.direction(), Direction::of(2, 1));
        let f = apply_elementary(&p("y"), &a);
        assert_eq!(f, &p("y") + &LaurentPoly::monomial(qi(1), q(1, 2), 0));
    }
}
