//! The degree-reduction pipeline for the minimal-corner configuration, as
//! composable, assumption-checked stages, plus the single-corner
//! normalization moves and the no-`F` certification harness.
//!
//! The pipeline is a falsifier harness: it never assumes its input is a
//! genuine counterexample. Every claim that depends on `[P,Q]` being a
//! nonzero constant is a named runtime check; no pair completing all
//! stages is known, so the expected outcome on any honest input is a
//! violation with a precise diagnostic.

use crate::direction::{cmp_ccw, Direction};
use crate::geom::{
    directions_of, endpoints, leading_form, newton_polygon, pred, succ, v_degree, DegreeValue,
};
use crate::homog::{common_power_base, power_decompose, slice_any_rho, HomogError};
use crate::morphisms::{
    apply_elementary, apply_flip, flip_images, psi3_support_map, ElementaryAuto, Flip,
};
use crate::poly::{bracket, LaurentPoly};
use crate::rational::{q_str, qi, PlanePoint, Q};
use crate::unipoly::rational_roots;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("corner is not of case III")]
    NotCaseIII,
    #[error("rho = {0} does not divide l = {1}")]
    RhoDoesNotDivideL(i64, BigInt),
    #[error("required root is not rational: {0}")]
    IrrationalRoot(String),
    #[error("no root reaches the diagonal multiplicity bound {0}")]
    MultiplicityTooLow(String),
    #[error("assumption violated at stage {stage}: {assertion} — {diagnostic}")]
    AssumptionViolated {
        stage: &'static str,
        assertion: String,
        diagnostic: String,
        log: Vec<StageReport>,
    },
    #[error(transparent)]
    Homog(#[from] HomogError),
    #[error(transparent)]
    Geom(#[from] crate::geom::GeomError),
    #[error(transparent)]
    Morph(#[from] crate::morphisms::MorphError),
}

/// Whether a checked fact depends on the Jacobian hypothesis or is a pure
/// consequence of the input shape and the applied substitutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum CheckKind {
    Unconditional,
    BracketDependent,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CheckRecord {
    pub assertion: String,
    pub kind: CheckKind,
    pub pass: bool,
    pub diagnostic: String,
}

/// Log of one pipeline stage: every assertion checked, in order; a failed
/// stage carries the first violated assertion verbatim.
#[derive(Clone, Debug, serde::Serialize)]
pub struct StageReport {
    pub stage: &'static str,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

/// Pipeline state: the current pair, the degree pair `(m, n)`, and the
/// derived `j` with `m = 3j + 1`, `n = 2j + 1` once established.
#[derive(Clone, Debug)]
pub struct PipelineState {
    pub p: LaurentPoly,
    pub q: LaurentPoly,
    pub m: i64,
    pub n: i64,
    pub j: Option<i64>,
    pub lambda0: Q,
    pub lambda1: Q,
    pub lambda_p: Q,
    pub lambda_q: Q,
    pub mu: [Q; 4],
    pub shift_count: u32,
    pub stage_log: Vec<StageReport>,
}

struct StageCtx<'a> {
    name: &'static str,
    checks: Vec<CheckRecord>,
    log: &'a mut Vec<StageReport>,
}

impl<'a> StageCtx<'a> {
    fn new(name: &'static str, log: &'a mut Vec<StageReport>) -> Self {
        StageCtx {
            name,
            checks: Vec::new(),
            log,
        }
    }

    fn check(
        &mut self,
        kind: CheckKind,
        assertion: &str,
        pass: bool,
        diagnostic: String,
    ) -> Result<(), PipelineError> {
        self.checks.push(CheckRecord {
            assertion: assertion.to_string(),
            kind,
            pass,
            diagnostic: diagnostic.clone(),
        });
        if pass {
            return Ok(());
        }
        let mut log = std::mem::take(self.log);
        log.push(StageReport {
            stage: self.name,
            checks: self.checks.clone(),
            pass: false,
        });
        Err(PipelineError::AssumptionViolated {
            stage: self.name,
            assertion: assertion.to_string(),
            diagnostic,
            log,
        })
    }

    fn finish(self) {
        self.log.push(StageReport {
            stage: self.name,
            checks: self.checks,
            pass: true,
        });
    }
}

fn dir_set(p: &LaurentPoly) -> Result<Vec<Direction>, PipelineError> {
    let mut d = directions_of(p)?;
    d.sort_by_key(|d| (d.rho, d.sigma));
    Ok(d)
}

fn sorted(dirs: &[Direction]) -> Vec<Direction> {
    let mut d = dirs.to_vec();
    d.sort_by_key(|d| (d.rho, d.sigma));
    d
}

fn en_point(p: &LaurentPoly, d: Direction) -> Result<PlanePoint, PipelineError> {
    Ok(endpoints(p, d)?.1)
}

fn st_point(p: &LaurentPoly, d: Direction) -> Result<PlanePoint, PipelineError> {
    Ok(endpoints(p, d)?.0)
}

/// The expected input shape of the reduction: `Dir(P) = Dir(Q) =
/// {(-1,4), (1,-2), (0,-1), (-1,0)}` with leading forms powers of
/// `R0 = y(x^4 y - lambda0)^3` and `R1 = x(x^2 y - lambda1)`.
fn stage0_shape_guard(st: &mut PipelineState) -> Result<(), PipelineError> {
    let mut ctx = StageCtx::new("shape-guard", &mut st.stage_log);
    let expected = sorted(&[
        Direction::of(-1, 4),
        Direction::of(1, -2),
        Direction::of(0, -1),
        Direction::of(-1, 0),
    ]);
    let dp = dir_set(&st.p)?;
    ctx.check(
        CheckKind::Unconditional,
        "Dir(P) = {(-1,4),(1,-2),(0,-1),(-1,0)}",
        dp == expected,
        format!("Dir(P) = {dp:?}"),
    )?;
    let dq = dir_set(&st.q)?;
    ctx.check(
        CheckKind::Unconditional,
        "Dir(Q) = {(-1,4),(1,-2),(0,-1),(-1,0)}",
        dq == expected,
        format!("Dir(Q) = {dq:?}"),
    )?;
    ctx.check(
        CheckKind::Unconditional,
        "m > n > 1 coprime",
        st.m > st.n && st.n > 1 && st.m.gcd(&st.n) == 1,
        format!("(m, n) = ({}, {})", st.m, st.n),
    )?;
    // l_{-1,4} forms: lambda_P R0^m, lambda_Q R0^n.
    let d14 = Direction::of(-1, 4);
    let lp14 = leading_form(&st.p, d14);
    let lq14 = leading_form(&st.q, d14);
    let commute = bracket(&lp14, &lq14).is_zero();
    ctx.check(
        CheckKind::Unconditional,
        "leading forms at (-1,4) commute",
        commute,
        String::new(),
    )?;
    let cpb = common_power_base(&lp14, &lq14, d14)?;
    ctx.check(
        CheckKind::Unconditional,
        "l_(-1,4)(P) = lambda_P R0^m, l_(-1,4)(Q) = lambda_Q R0^n",
        (cpb.m, cpb.n) == (st.m, st.n),
        format!("power ratio ({}, {})", cpb.m, cpb.n),
    )?;
    let sl = slice_any_rho(&cpb.base, d14)?;
    let roots = rational_roots(&sl.poly);
    let r0_ok = sl.yshift == 1
        && sl.xshift.is_zero()
        && sl.poly.degree() == 3
        && roots.len() == 1
        && roots[0].1 == 3
        && !roots[0].0.is_zero();
    ctx.check(
        CheckKind::Unconditional,
        "R0 = y (x^4 y - lambda0)^3",
        r0_ok,
        format!("base slice {:?}", sl.poly),
    )?;
    st.lambda0 = roots[0].0.clone();
    st.lambda_p = cpb.lambda_p.clone();
    st.lambda_q = cpb.lambda_q.clone();
    // l_{1,-2} forms: lambda_P R1^(4m), lambda_Q R1^(4n).
    let d12 = Direction::of(1, -2);
    let lp12 = leading_form(&st.p, d12);
    let lq12 = leading_form(&st.q, d12);
    let cpb1 = common_power_base(&lp12, &lq12, d12)?;
    ctx.check(
        CheckKind::Unconditional,
        "l_(1,-2)(P) = lambda_P R1^(4m), l_(1,-2)(Q) = lambda_Q R1^(4n)",
        (cpb1.m, cpb1.n) == (st.m, st.n) || (cpb1.m, cpb1.n) == (4 * st.m, 4 * st.n),
        format!("power ratio ({}, {})", cpb1.m, cpb1.n),
    )?;
    // The base of the 4m-th power: R1 itself when the ratio is (m, n) the
    // base is R1^4; reduce it.
    let r1 = if (cpb1.m, cpb1.n) == (st.m, st.n) {
        let dec = power_decompose(&cpb1.base, d12)?;
        ctx.check(
            CheckKind::Unconditional,
            "l_(1,-2) base is a 4th power",
            dec.dmax % 4 == 0,
            format!("dmax = {}", dec.dmax),
        )?;
        dec.base.pow(dec.dmax / 4).scale(&dec.lambda_residual)
    } else {
        cpb1.base.clone()
    };
    let sl1 = slice_any_rho(&r1, d12)?;
    let roots1 = rational_roots(&sl1.poly);
    let r1_ok = sl1.yshift == 0
        && sl1.xshift == qi(1)
        && sl1.poly.degree() == 1
        && roots1.len() == 1
        && !roots1[0].0.is_zero();
    ctx.check(
        CheckKind::Unconditional,
        "R1 = x (x^2 y - lambda1)",
        r1_ok,
        format!("base slice {:?}", sl1.poly),
    )?;
    st.lambda1 = roots1[0].0.clone();
    ctx.check(
        CheckKind::Unconditional,
        "lambda_P consistent across the two edges",
        cpb1.lambda_p == st.lambda_p && cpb1.lambda_q == st.lambda_q,
        format!(
            "(-1,4) gives ({}, {}), (1,-2) gives ({}, {})",
            q_str(&st.lambda_p),
            q_str(&st.lambda_q),
            q_str(&cpb1.lambda_p),
            q_str(&cpb1.lambda_q)
        ),
    )?;
    ctx.finish();
    Ok(())
}

/// Chain-rule identity for a substitution with unit Jacobian, checked on
/// the concrete input.
fn check_chain_rule(
    ctx: &mut StageCtx,
    before: (&LaurentPoly, &LaurentPoly),
    after: (&LaurentPoly, &LaurentPoly),
    image_of_bracket: &LaurentPoly,
) -> Result<(), PipelineError> {
    let lhs = bracket(after.0, after.1);
    ctx.check(
        CheckKind::Unconditional,
        "chain rule [phi P, phi Q] = phi([P,Q]) [phi x, phi y]",
        lhs == *image_of_bracket,
        String::new(),
    )?;
    let _ = before;
    Ok(())
}

/// Stage `phi1`: `y -> y + lambda1 x^(-2)` straightens the `(1,-2)` edge.
fn stage1_phi1(st: &mut PipelineState) -> Result<(), PipelineError> {
    let phi = ElementaryAuto::new(st.lambda1.clone(), qi(-2)).expect("lambda1 != 0");
    let p1 = apply_elementary(&st.p, &phi);
    let q1 = apply_elementary(&st.q, &phi);
    let d14 = Direction::of(-1, 4);
    let mut ctx = StageCtx::new("phi1", &mut st.stage_log);
    let br_image = apply_elementary(&bracket(&st.p, &st.q), &phi);
    check_chain_rule(&mut ctx, (&st.p, &st.q), (&p1, &q1), &br_image)?;
    ctx.check(
        CheckKind::Unconditional,
        "l_(-1,4)(P1) = l_(-1,4)(P)",
        leading_form(&p1, d14) == leading_form(&st.p, d14)
            && leading_form(&q1, d14) == leading_form(&st.q, d14),
        String::new(),
    )?;
    ctx.check(
        CheckKind::Unconditional,
        "v_(1,1) preserved",
        v_degree(&p1, Direction::of(1, 1)) == v_degree(&st.p, Direction::of(1, 1))
            && v_degree(&q1, Direction::of(1, 1)) == v_degree(&st.q, Direction::of(1, 1)),
        String::new(),
    )?;
    let d_12 = Direction::of(-1, 2);
    ctx.check(
        CheckKind::Unconditional,
        "l_(-1,2)(P1) = phi1(l_(-1,2)(P))",
        leading_form(&p1, d_12) == apply_elementary(&leading_form(&st.p, d_12), &phi),
        String::new(),
    )?;
    // Bracket-dependent squeeze facts.
    let v13p = v_degree(&p1, Direction::of(1, -3));
    ctx.check(
        CheckKind::BracketDependent,
        "v_(1,-3)(P1) = 0",
        v13p == DegreeValue::Finite(Q::zero()),
        format!("v_(1,-3)(P1) = {v13p:?}"),
    )?;
    let v13q = v_degree(&q1, Direction::of(1, -3));
    ctx.check(
        CheckKind::BracketDependent,
        "v_(1,-3)(Q1) = 0",
        v13q == DegreeValue::Finite(Q::zero()),
        format!("v_(1,-3)(Q1) = {v13q:?}"),
    )?;
    let expected = sorted(&[
        Direction::of(-1, 4),
        Direction::of(-1, 2),
        Direction::of(0, -1),
        Direction::of(1, -3),
    ]);
    let dp1 = dir_set(&p1)?;
    ctx.check(
        CheckKind::BracketDependent,
        "Dir(P1) = {(-1,4),(-1,2),(0,-1),(1,-3)}",
        dp1 == expected,
        format!("Dir(P1) = {dp1:?}"),
    )?;
    let dq1 = dir_set(&q1)?;
    ctx.check(
        CheckKind::BracketDependent,
        "Dir(Q1) = {(-1,4),(-1,2),(0,-1),(1,-3)}",
        dq1 == expected,
        format!("Dir(Q1) = {dq1:?}"),
    )?;
    ctx.finish();
    st.p = p1;
    st.q = q1;
    Ok(())
}

/// The counterclockwise minimum of two successors seen from `anchor`.
fn ccw_min(anchor: Direction, a: Direction, b: Direction) -> Direction {
    if cmp_ccw(anchor, a, b) == Ordering::Greater {
        b
    } else {
        a
    }
}

/// Stage `corner-normalization` (the `phi_a`/`phi_b` moves): shifts
/// `y -> y + lambda0 x^(-4)` and, in the aligned case, `y -> y + mu x^(-3)`,
/// landing on the non-aligned end configuration with its forced `j`.
fn stage2_corner_normalization(st: &mut PipelineState) -> Result<(), PipelineError> {
    let d14 = Direction::of(-1, 4);
    let phia = ElementaryAuto::new(st.lambda0.clone(), qi(-4)).expect("lambda0 != 0");
    let mut p2 = apply_elementary(&st.p, &phia);
    let mut q2 = apply_elementary(&st.q, &phia);
    let mut ctx = StageCtx::new("corner-normalization", &mut st.stage_log);
    let br_image = apply_elementary(&bracket(&st.p, &st.q), &phia);
    check_chain_rule(&mut ctx, (&st.p, &st.q), (&p2, &q2), &br_image)?;
    // l_{-1,4}(P2) = lambda_P x^(8m) y^(3m) (x^4 y + lambda0)^m, exact,
    // since phia(R0) = x^8 y^3 (x^4 y + lambda0).
    let shifted_base = &LaurentPoly::monomial(qi(1), qi(12), 4)
        + &LaurentPoly::monomial(st.lambda0.clone(), qi(8), 3);
    let expect_p = shifted_base.pow(st.m as u32).scale(&st.lambda_p);
    ctx.check(
        CheckKind::Unconditional,
        "l_(-1,4)(P2) = lambda_P x^(8m) y^(3m) (x^4 y + lambda0)^m",
        leading_form(&p2, d14) == expect_p,
        String::new(),
    )?;
    let en_p = en_point(&p2, d14)?;
    ctx.check(
        CheckKind::Unconditional,
        "en_(-1,4)(P2) = m (8,3)",
        en_p == PlanePoint::from_ints(8 * st.m, 3 * st.m),
        format!("en = {en_p}"),
    )?;
    // Successor analysis; possibly one aligned round through phi_b.
    for round in 0..2 {
        let sp = succ(&p2, d14)?;
        let sq = succ(&q2, d14)?;
        let dprime = ccw_min(d14, sp, sq);
        let en_p = en_point(&p2, dprime)?;
        let en_q = en_point(&q2, dprime)?;
        if !en_p.aligned(&en_q) {
            break;
        }
        ctx.check(
            CheckKind::BracketDependent,
            "aligned successor is (-1,3)",
            dprime == Direction::of(-1, 3) && round == 0,
            format!("successor {dprime} with aligned ends, round {round}"),
        )?;
        // l_{-1,3}(P2) = mu_P x^(-m) (x^3 y - mu)^(3m): extract mu.
        let lp = leading_form(&p2, dprime);
        let lq = leading_form(&q2, dprime);
        ctx.check(
            CheckKind::BracketDependent,
            "leading forms at (-1,3) commute",
            bracket(&lp, &lq).is_zero(),
            String::new(),
        )?;
        let cpb = common_power_base(&lp, &lq, dprime)?;
        let dec = power_decompose(&cpb.base, dprime)?;
        let sl = slice_any_rho(&dec.base, dprime)?;
        let roots = rational_roots(&sl.poly);
        let has_root = sl.poly.degree() == 1 && roots.len() == 1;
        ctx.check(
            CheckKind::BracketDependent,
            "l_(-1,3) base has the linear slice x^-1 (x^3 y - mu)",
            has_root,
            format!("slice {:?}", sl.poly),
        )?;
        let mu = roots[0].0.clone();
        if mu.is_zero() {
            // Already a pure power of x^-1 z: nothing to shift.
            break;
        }
        let phib = ElementaryAuto::new(mu, qi(-3)).expect("mu != 0");
        let br_image = apply_elementary(&bracket(&p2, &q2), &phib);
        let p2b = apply_elementary(&p2, &phib);
        let q2b = apply_elementary(&q2, &phib);
        check_chain_rule(&mut ctx, (&p2, &q2), (&p2b, &q2b), &br_image)?;
        p2 = p2b;
        q2 = q2b;
        ctx.check(
            CheckKind::Unconditional,
            "l_(-1,4) preserved by phi_b",
            leading_form(&p2, d14) == expect_p,
            String::new(),
        )?;
    }
    let sp = succ(&p2, d14)?;
    let sq = succ(&q2, d14)?;
    let dprime = ccw_min(d14, sp, sq);
    let en_p = en_point(&p2, dprime)?;
    let en_q = en_point(&q2, dprime)?;
    ctx.check(
        CheckKind::BracketDependent,
        "en points at the successor are not aligned",
        !en_p.aligned(&en_q),
        format!("en(P2) = {en_p}, en(Q2) = {en_q} at {dprime}"),
    )?;
    ctx.check(
        CheckKind::BracketDependent,
        "{en(P2), en(Q2)} = {(-1,0), (2,1)}",
        (en_p == PlanePoint::from_ints(-1, 0) && en_q == PlanePoint::from_ints(2, 1))
            || (en_q == PlanePoint::from_ints(-1, 0) && en_p == PlanePoint::from_ints(2, 1)),
        format!("en(P2) = {en_p}, en(Q2) = {en_q}"),
    )?;
    ctx.check(
        CheckKind::BracketDependent,
        "en(P2) = (-1,0) (so m = 3j+1, n = 2j+1)",
        en_p == PlanePoint::from_ints(-1, 0),
        format!("en(P2) = {en_p}"),
    )?;
    let st_p = st_point(&p2, dprime)?;
    let st_q = st_point(&q2, dprime)?;
    ctx.check(
        CheckKind::BracketDependent,
        "st(P2) = m(8,3) and st(Q2) = n(8,3)",
        st_p == PlanePoint::from_ints(8 * st.m, 3 * st.m)
            && st_q == PlanePoint::from_ints(8 * st.n, 3 * st.n),
        format!("st(P2) = {st_p}, st(Q2) = {st_q}"),
    )?;
    let j = (st.m - 1) / 3;
    ctx.check(
        CheckKind::BracketDependent,
        "m = 3j+1 and n = 2j+1",
        st.m == 3 * j + 1 && st.n == 2 * j + 1 && j >= 1,
        format!("(m, n) = ({}, {})", st.m, st.n),
    )?;
    ctx.check(
        CheckKind::BracketDependent,
        "successor direction is (-3j-1, 8j+3)",
        dprime == Direction::of(-3 * j - 1, 8 * j + 3),
        format!("successor {dprime}, j = {j}"),
    )?;
    ctx.finish();
    st.p = p2;
    st.q = q2;
    st.j = Some(j);
    Ok(())
}

/// Stage `psi3`: `x -> x^(-1)`, `y -> x^3 y`; brackets pick up the factor
/// `-x`, supports transform by `(i,j) -> (-i+3j, j)`.
fn stage3_psi3(st: &mut PipelineState) -> Result<(), PipelineError> {
    let j = st.j.expect("j established by stage 2");
    let hull_before = newton_polygon(&st.p)?;
    let p3 = apply_flip(&st.p, Flip::Psi3)?;
    let q3 = apply_flip(&st.q, Flip::Psi3)?;
    let mut ctx = StageCtx::new("psi3", &mut st.stage_log);
    // Chain rule with [psi3(x), psi3(y)] = -x.
    let (fx, fy) = flip_images(Flip::Psi3);
    let jac = bracket(&fx, &fy);
    let br_image = &apply_flip(&bracket(&st.p, &st.q), Flip::Psi3)? * &jac;
    check_chain_rule(&mut ctx, (&st.p, &st.q), (&p3, &q3), &br_image)?;
    // Hull equivariance.
    let hull_after = newton_polygon(&p3)?;
    let mut mapped: Vec<PlanePoint> = hull_before.vertices.iter().map(psi3_support_map).collect();
    mapped.sort();
    let mut got = hull_after.vertices.clone();
    got.sort();
    ctx.check(
        CheckKind::Unconditional,
        "hull vertices transform by psi3~",
        mapped == got,
        String::new(),
    )?;
    let d2 = Direction::of(3 * j + 1, -j);
    ctx.check(
        CheckKind::Unconditional,
        "l_(1,1)(P3) = psi3(l_(-1,4)(P2))",
        leading_form(&p3, Direction::of(1, 1))
            == apply_flip(&leading_form(&st.p, Direction::of(-1, 4)), Flip::Psi3)?,
        String::new(),
    )?;
    // l_(1,1)(P3) = lambda_p R3^m with R3 = y^3 (y + lambda x).
    let r3 = apply_flip(
        &(&LaurentPoly::monomial(qi(1), qi(12), 4)
            + &LaurentPoly::monomial(st.lambda0.clone(), qi(8), 3)),
        Flip::Psi3,
    )?;
    let expected_r3 = &LaurentPoly::monomial(qi(1), Q::zero(), 4)
        + &LaurentPoly::monomial(st.lambda0.clone(), qi(1), 3);
    ctx.check(
        CheckKind::Unconditional,
        "R3 = y^3 (y + lambda x)",
        r3 == expected_r3,
        format!("psi3 image {r3:?}"),
    )?;
    ctx.check(
        CheckKind::Unconditional,
        "l_(1,1)(P3) = lambda_p R3^m",
        leading_form(&p3, Direction::of(1, 1)) == r3.pow(st.m as u32).scale(&st.lambda_p),
        String::new(),
    )?;
    let en_p = en_point(&p3, d2)?;
    let st_p = st_point(&p3, d2)?;
    let en_q = en_point(&q3, d2)?;
    let st_q = st_point(&q3, d2)?;
    ctx.check(
        CheckKind::BracketDependent,
        "en(P3) = m(1,3), st(P3) = (1,0), en(Q3) = n(1,3), st(Q3) = (1,1)",
        en_p == PlanePoint::from_ints(st.m, 3 * st.m)
            && st_p == PlanePoint::from_ints(1, 0)
            && en_q == PlanePoint::from_ints(st.n, 3 * st.n)
            && st_q == PlanePoint::from_ints(1, 1),
        format!("st(P3) = {st_p}, en(P3) = {en_p}, st(Q3) = {st_q}, en(Q3) = {en_q}"),
    )?;
    ctx.check(
        CheckKind::BracketDependent,
        "P3 and Q3 lie in L",
        p3.is_in_l() && q3.is_in_l(),
        String::new(),
    )?;
    let br = bracket(&p3, &q3);
    let zeta_ok = br.is_monomial()
        && br
            .terms()
            .next()
            .map(|(e, _)| e.xexp == qi(1) && e.yexp == 0)
            .unwrap_or(false);
    ctx.check(
        CheckKind::BracketDependent,
        "[P3, Q3] = zeta x",
        zeta_ok,
        format!("bracket has {} terms", br.term_count()),
    )?;
    ctx.finish();
    st.p = p3;
    st.q = q3;
    Ok(())
}

/// Stage `constant-normalization`: rescales so that `l_(1,-1)(P4) = x` and
/// `l_(1,-1)(Q4) = -xy`.
fn stage4_normalize(st: &mut PipelineState) -> Result<(), PipelineError> {
    let d = Direction::of(1, -1);
    let mut ctx = StageCtx::new("constant-normalization", &mut st.stage_log);
    let lp = leading_form(&st.p, d);
    let mu_p_ok = lp.is_monomial()
        && lp
            .terms()
            .next()
            .map(|(e, _)| e.xexp == qi(1) && e.yexp == 0)
            .unwrap_or(false);
    ctx.check(
        CheckKind::BracketDependent,
        "l_(1,-1)(P3) = mu_P x",
        mu_p_ok,
        format!("l_(1,-1)(P3) = {lp:?}"),
    )?;
    let mu_p = lp.terms().next().unwrap().1.clone();
    let lq = leading_form(&st.q, d);
    let xy = crate::poly::ExpPoint::from_ints(1, 1);
    let mu_q = lq.coeff(&xy);
    let support_ok = !mu_q.is_zero()
        && lq
            .support()
            .all(|e| (e.xexp == qi(1) && e.yexp == 1) || (e.xexp.is_zero() && e.yexp == 0));
    ctx.check(
        CheckKind::BracketDependent,
        "l_(1,-1)(Q3) = mu_Q xy + xi",
        support_ok,
        format!("l_(1,-1)(Q3) = {lq:?}"),
    )?;
    let xi = lq.coeff(&crate::poly::ExpPoint::from_ints(0, 0));
    let p4 = st.p.scale(&mu_p.clone().recip());
    let q4 = (&st.q - &LaurentPoly::constant(xi)).scale(&(-mu_q.clone().recip()));
    ctx.check(
        CheckKind::Unconditional,
        "l_(1,-1)(P4) = x",
        leading_form(&p4, d) == LaurentPoly::var_x(),
        String::new(),
    )?;
    ctx.check(
        CheckKind::Unconditional,
        "l_(1,-1)(Q4) = -xy",
        leading_form(&q4, d) == LaurentPoly::monomial(qi(-1), qi(1), 1),
        String::new(),
    )?;
    ctx.check(
        CheckKind::BracketDependent,
        "[P4, Q4] = -x",
        bracket(&p4, &q4) == LaurentPoly::monomial(qi(-1), qi(1), 0),
        String::new(),
    )?;
    ctx.finish();
    st.p = p4;
    st.q = q4;
    Ok(())
}

/// Stage `four-shift`: applies `psi1` and then at most four elementary
/// shifts `y -> y + mu_(4-k) x^(k-3)`, stopping once the predecessor of
/// `(rho3, sigma3)` has dropped to `(1,-3)` or below.
fn stage5_four_shift(st: &mut PipelineState) -> Result<(), PipelineError> {
    let j = st.j.expect("j established");
    let d3 = Direction::of(-j, 3 * j + 1);
    let mut p5 = apply_flip(&st.p, Flip::Psi1)?;
    let mut q5 = apply_flip(&st.q, Flip::Psi1)?;
    let mut ctx = StageCtx::new("four-shift", &mut st.stage_log);
    // [psi1 P, psi1 Q] = psi1([P,Q]) (unit Jacobian): -x maps to -y.
    let br_image = apply_flip(&bracket(&st.p, &st.q), Flip::Psi1)?;
    check_chain_rule(&mut ctx, (&st.p, &st.q), (&p5, &q5), &br_image)?;
    let mut mu = [Q::zero(), Q::zero(), Q::zero(), Q::zero()];
    let mut shifts = 0u32;
    let mut last_k = 5i64;
    loop {
        let pp = pred(&p5, d3)?;
        let pq = pred(&q5, d3)?;
        // max = first met running clockwise from d3.
        let dbar = if cmp_ccw(d3, pp, pq) == Ordering::Greater {
            pp
        } else {
            pq
        };
        let above = cmp_ccw(d3, dbar, Direction::of(1, -3)) == Ordering::Greater;
        if !above {
            break;
        }
        ctx.check(
            CheckKind::BracketDependent,
            "predecessor during the shift loop is (1, k-3), k in 1..=4",
            dbar.rho == 1 && (-2..=1).contains(&dbar.sigma) && dbar.sigma + 3 < last_k,
            format!("predecessor {dbar}"),
        )?;
        let k = dbar.sigma + 3;
        last_k = k;
        let lp = leading_form(&p5, dbar);
        let lq = leading_form(&q5, dbar);
        ctx.check(
            CheckKind::BracketDependent,
            "leading forms at the shift direction commute",
            bracket(&lp, &lq).is_zero(),
            format!("at {dbar}"),
        )?;
        let cpb = common_power_base(&lp, &lq, dbar)?;
        let dec = power_decompose(&cpb.base, dbar)?;
        let sl = slice_any_rho(&dec.base, dbar)?;
        let roots = rational_roots(&sl.poly);
        let shape_ok = sl.poly.degree() == 1 && roots.len() == 1 && !roots[0].0.is_zero();
        // Base R = x^3 (y - mu x^(k-3)) = x^k (z - mu): xshift k, yshift 0.
        ctx.check(
            CheckKind::BracketDependent,
            "l at the shift direction is a power of x^3 (y - mu x^(k-3))",
            shape_ok && sl.yshift == 0 && sl.xshift == qi(k),
            format!("base slice {:?} with xshift {}", sl.poly, q_str(&sl.xshift)),
        )?;
        let mu_k = roots[0].0.clone();
        if shifts == 0 {
            ctx.check(
                CheckKind::BracketDependent,
                "first shift constant is mu0 = 1/lambda",
                mu_k == st.lambda0.clone().recip(),
                format!("mu0 = {}", q_str(&mu_k)),
            )?;
        }
        mu[(4 - k) as usize] = mu_k.clone();
        let phi = ElementaryAuto::new(mu_k, qi(k - 3)).expect("mu != 0");
        let br_image = apply_elementary(&bracket(&p5, &q5), &phi);
        let p5n = apply_elementary(&p5, &phi);
        let q5n = apply_elementary(&q5, &phi);
        check_chain_rule(&mut ctx, (&p5, &q5), (&p5n, &q5n), &br_image)?;
        p5 = p5n;
        q5 = q5n;
        shifts += 1;
        ctx.check(
            CheckKind::BracketDependent,
            "at most four shifts are needed",
            shifts <= 4,
            format!("shift count {shifts}"),
        )?;
    }
    // Post-shape assertions of the shifted pair.
    let en_p = en_point(&p5, d3)?;
    let en_q = en_point(&q5, d3)?;
    let st_p = st_point(&p5, d3)?;
    let st_q = st_point(&q5, d3)?;
    ctx.check(
        CheckKind::BracketDependent,
        "en(P5) = (0,1), en(Q5) = (1,1), st(P5) = m(3,1), st(Q5) = n(3,1)",
        en_p == PlanePoint::from_ints(0, 1)
            && en_q == PlanePoint::from_ints(1, 1)
            && st_p == PlanePoint::from_ints(3 * st.m, st.m)
            && st_q == PlanePoint::from_ints(3 * st.n, st.n),
        format!("st(P5) = {st_p}, en(P5) = {en_p}, st(Q5) = {st_q}, en(Q5) = {en_q}"),
    )?;
    let en13_p = en_point(&p5, Direction::of(1, -3))?;
    let en13_q = en_point(&q5, Direction::of(1, -3))?;
    ctx.check(
        CheckKind::BracketDependent,
        "en_(1,-3)(P5) = m(3,1) and en_(1,-3)(Q5) = n(3,1)",
        en13_p == PlanePoint::from_ints(3 * st.m, st.m)
            && en13_q == PlanePoint::from_ints(3 * st.n, st.n),
        format!("en_(1,-3)(P5) = {en13_p}, en_(1,-3)(Q5) = {en13_q}"),
    )?;
    // [P5, Q5] = -(y + mu0 x + mu1 + mu2 x^-1 + mu3 x^-2)
    let shift_poly = &(&(&LaurentPoly::var_y() + &LaurentPoly::monomial(mu[0].clone(), qi(1), 0))
        + &LaurentPoly::constant(mu[1].clone()))
        + &(&LaurentPoly::monomial(mu[2].clone(), qi(-1), 0)
            + &LaurentPoly::monomial(mu[3].clone(), qi(-2), 0));
    ctx.check(
        CheckKind::BracketDependent,
        "[P5, Q5] = -(y + mu0 x + mu1 + mu2 x^-1 + mu3 x^-2)",
        bracket(&p5, &q5) == -&shift_poly,
        String::new(),
    )?;
    let l12p = leading_form(&p5, Direction::of(-1, 2));
    let l12q = leading_form(&q5, Direction::of(-1, 2));
    let expect_p = &LaurentPoly::var_y() + &LaurentPoly::monomial(mu[3].clone(), qi(-2), 0);
    let expect_q =
        &LaurentPoly::monomial(qi(1), qi(1), 1) + &LaurentPoly::monomial(mu[3].clone(), qi(-1), 0);
    ctx.check(
        CheckKind::BracketDependent,
        "l_(-1,2)(P5) = y + mu3 x^-2 and l_(-1,2)(Q5) = xy + mu3 x^-1",
        l12p == expect_p && l12q == expect_q,
        format!("l_(-1,2)(P5) = {l12p:?}, l_(-1,2)(Q5) = {l12q:?}"),
    )?;
    ctx.finish();
    st.p = p5;
    st.q = q5;
    st.mu = mu;
    st.shift_count = shifts;
    Ok(())
}

/// Stage `final-psi3`: the last flip; the bracket becomes the quartic
/// residue `x^4 y + mu0 + mu1 x + mu2 x^2 + mu3 x^3`.
fn stage6_final_psi3(st: &mut PipelineState) -> Result<(), PipelineError> {
    let j = st.j.expect("j established");
    let hull_before = newton_polygon(&st.p)?;
    let p6 = apply_flip(&st.p, Flip::Psi3)?;
    let q6 = apply_flip(&st.q, Flip::Psi3)?;
    let mut ctx = StageCtx::new("final-psi3", &mut st.stage_log);
    let (fx, fy) = flip_images(Flip::Psi3);
    let jac = bracket(&fx, &fy);
    let br_image = &apply_flip(&bracket(&st.p, &st.q), Flip::Psi3)? * &jac;
    check_chain_rule(&mut ctx, (&st.p, &st.q), (&p6, &q6), &br_image)?;
    let hull_after = newton_polygon(&p6)?;
    let mut mapped: Vec<PlanePoint> = hull_before.vertices.iter().map(psi3_support_map).collect();
    mapped.sort();
    let mut got = hull_after.vertices.clone();
    got.sort();
    ctx.check(
        CheckKind::Unconditional,
        "hull vertices transform by psi3~",
        mapped == got,
        String::new(),
    )?;
    ctx.check(
        CheckKind::BracketDependent,
        "P6 and Q6 lie in L",
        p6.is_in_l() && q6.is_in_l(),
        String::new(),
    )?;
    let dj = Direction::of(j, 1);
    let (st_p, en_p) = endpoints(&p6, dj)?;
    let (st_q, en_q) = endpoints(&q6, dj)?;
    ctx.check(
        CheckKind::BracketDependent,
        "st_(j,1)(P6) = (3,1), st_(j,1)(Q6) = (2,1), en_(j,1)(P6) = (0,m), en_(j,1)(Q6) = (0,n)",
        st_p == PlanePoint::from_ints(3, 1)
            && st_q == PlanePoint::from_ints(2, 1)
            && en_p == PlanePoint::from_ints(0, st.m)
            && en_q == PlanePoint::from_ints(0, st.n),
        format!("st(P6) = {st_p}, en(P6) = {en_p}, st(Q6) = {st_q}, en(Q6) = {en_q}"),
    )?;
    let pos_p: Vec<Direction> = directions_of(&p6)?
        .into_iter()
        .filter(Direction::is_positive)
        .collect();
    let pos_q: Vec<Direction> = directions_of(&q6)?
        .into_iter()
        .filter(Direction::is_positive)
        .collect();
    ctx.check(
        CheckKind::BracketDependent,
        "Dir(P6) and Dir(Q6) meet the upper half circle only in (j,1)",
        pos_p == vec![dj] && pos_q == vec![dj],
        format!("positive directions {pos_p:?} and {pos_q:?}"),
    )?;
    let l11p = leading_form(&p6, Direction::of(1, -1));
    let l11q = leading_form(&q6, Direction::of(1, -1));
    let expect_p = &LaurentPoly::monomial(qi(1), qi(3), 1)
        + &LaurentPoly::monomial(st.mu[3].clone(), qi(2), 0);
    let expect_q = &LaurentPoly::monomial(qi(1), qi(2), 1)
        + &LaurentPoly::monomial(st.mu[3].clone(), qi(1), 0);
    ctx.check(
        CheckKind::BracketDependent,
        "l_(1,-1)(P6) = x^3 y + mu3 x^2 and l_(1,-1)(Q6) = x^2 y + mu3 x",
        l11p == expect_p && l11q == expect_q,
        format!("l_(1,-1)(P6) = {l11p:?}"),
    )?;
    let residue = &(&(&LaurentPoly::monomial(qi(1), qi(4), 1)
        + &LaurentPoly::constant(st.mu[0].clone()))
        + &LaurentPoly::monomial(st.mu[1].clone(), qi(1), 0))
        + &(&LaurentPoly::monomial(st.mu[2].clone(), qi(2), 0)
            + &LaurentPoly::monomial(st.mu[3].clone(), qi(3), 0));
    ctx.check(
        CheckKind::BracketDependent,
        "[P6, Q6] = x^4 y + mu0 + mu1 x + mu2 x^2 + mu3 x^3",
        bracket(&p6, &q6) == residue,
        String::new(),
    )?;
    ctx.check(
        CheckKind::BracketDependent,
        "mu0 != 0",
        !st.mu[0].is_zero(),
        String::new(),
    )?;
    ctx.finish();
    st.p = p6;
    st.q = q6;
    Ok(())
}

/// Runs the full reduction. On any input that is not a genuine
/// counterexample this fails with [`PipelineError::AssumptionViolated`]
/// naming the first violated assertion; the accumulated stage log rides
/// along in the error.
pub fn b16_reduce(
    p: &LaurentPoly,
    q: &LaurentPoly,
    m: i64,
    n: i64,
) -> Result<PipelineState, PipelineError> {
    let mut st = PipelineState {
        p: p.clone(),
        q: q.clone(),
        m,
        n,
        j: None,
        lambda0: Q::zero(),
        lambda1: Q::zero(),
        lambda_p: Q::zero(),
        lambda_q: Q::zero(),
        mu: [Q::zero(), Q::zero(), Q::zero(), Q::zero()],
        shift_count: 0,
        stage_log: Vec::new(),
    };
    stage0_shape_guard(&mut st)?;
    stage1_phi1(&mut st)?;
    stage2_corner_normalization(&mut st)?;
    stage3_psi3(&mut st)?;
    stage4_normalize(&mut st)?;
    stage5_four_shift(&mut st)?;
    stage6_final_psi3(&mut st)?;
    Ok(st)
}

/// Builds a leading-form witness pair in the post-flip convention of the
/// reduction input: leading forms are genuine powers of
/// `R0 = y(x^4 y - lambda0)^3` and `R1 = x(x^2 y - lambda1)` glued on the
/// quadrilateral hull, with a free constant term. Not a Jacobian pair.
pub fn b16_witness(
    m: u32,
    n: u32,
    lambda0: &Q,
    lambda1: &Q,
    lambda_p: &Q,
    lambda_q: &Q,
) -> (LaurentPoly, LaurentPoly) {
    let build = |k: u32, lam: &Q| -> LaurentPoly {
        let r0 = &LaurentPoly::monomial(qi(1), Q::zero(), 1)
            * &(&LaurentPoly::monomial(qi(1), qi(4), 1) - &LaurentPoly::constant(lambda0.clone()))
                .pow(3);
        let r1 = &LaurentPoly::var_x()
            * &(&LaurentPoly::monomial(qi(1), qi(2), 1) - &LaurentPoly::constant(lambda1.clone()));
        let top = LaurentPoly::monomial(qi(1), qi(12 * k as i64), 4 * k);
        let shape = &(&r0.pow(k) + &r1.pow(4 * k)) - &top;
        &shape.scale(lam) + &LaurentPoly::one()
    };
    (build(m, lambda_p), build(n, lambda_q))
}

/// The case-III normalization move `y -> y + lambda x^(sigma/rho)` at a
/// regular corner whose slice is a single shifted power; returns the new
/// pair and the new corner direction.
pub fn case_iii_shift(
    p: &LaurentPoly,
    q: &LaurentPoly,
    corner: &crate::corners::RegularCorner,
    m: i64,
) -> Result<(LaurentPoly, LaurentPoly, Direction), PipelineError> {
    let d = corner.dir;
    let l = p.ramification_index().lcm(&q.ramification_index());
    if !l.is_multiple_of(&BigInt::from(d.rho)) {
        return Err(PipelineError::RhoDoesNotDivideL(d.rho, l));
    }
    let lp = leading_form(p, d);
    let lq = leading_form(q, d);
    let case = crate::homog::classify_case(&lp, &lq, d)?;
    if case != crate::homog::CornerCase::III {
        return Err(PipelineError::NotCaseIII);
    }
    let sl = slice_any_rho(&lp, d)?;
    let roots = rational_roots(&sl.poly);
    let Some((lambda, _)) = roots
        .iter()
        .find(|(r, mult)| !r.is_zero() && *mult as usize == sl.poly.degree())
    else {
        return Err(PipelineError::IrrationalRoot(format!(
            "slice {:?} is not a rational power (z - lambda)^r",
            sl.poly
        )));
    };
    let phi = ElementaryAuto::new(
        lambda.clone(),
        Q::new(BigInt::from(d.sigma), BigInt::from(d.rho)),
    )
    .expect("lambda != 0");
    let p2 = apply_elementary(p, &phi);
    let q2 = apply_elementary(q, &phi);
    // Shape checks: en preserved, higher-interval leading forms
    // unchanged, the shifted leading form is the forced monomial.
    let en_before = en_point(p, d)?;
    let en_after = en_point(&p2, d)?;
    if en_before != en_after {
        return Err(PipelineError::AssumptionViolated {
            stage: "case-iii-shift",
            assertion: "en_d(phi(P)) = en_d(P)".to_string(),
            diagnostic: format!("before {en_before}, after {en_after}"),
            log: vec![],
        });
    }
    let lf = leading_form(&p2, d);
    if !lf.is_monomial() {
        return Err(PipelineError::AssumptionViolated {
            stage: "case-iii-shift",
            assertion: "l_d(phi(P)) is the monomial mu x^(k/l - sigma r/rho) y^r".to_string(),
            diagnostic: format!("got {lf:?}"),
            log: vec![],
        });
    }
    // Leading forms strictly between d and -d are untouched.
    let mut between: Vec<Direction> = directions_of(p)?;
    between.extend(directions_of(&p2)?);
    between.retain(|dd| crate::geom::between_ccw(d, *dd, d.antipode()));
    for dd in between {
        if leading_form(p, dd) != leading_form(&p2, dd)
            || leading_form(q, dd) != leading_form(&q2, dd)
        {
            return Err(PipelineError::AssumptionViolated {
                stage: "case-iii-shift",
                assertion: "l_d'' unchanged for d < d'' < -d".to_string(),
                diagnostic: format!("changed at {dd}"),
                log: vec![],
            });
        }
    }
    let _ = m;
    let new_dir = pred(&p2, d)?;
    Ok((p2, q2, new_dir))
}

/// The cut-above-the-diagonal move for a case-II corner: shifts by the
/// maximal-multiplicity rational root and returns the new pair together
/// with `A^(1) = st_d(phi(P)) / m`.
pub fn cut_above_diagonal(
    p: &LaurentPoly,
    q: &LaurentPoly,
    corner: &crate::corners::RegularCorner,
    m: i64,
) -> Result<(LaurentPoly, LaurentPoly, PlanePoint), PipelineError> {
    let d = corner.dir;
    let lp = leading_form(p, d);
    let sl = slice_any_rho(&lp, d)?;
    // Diagonal bound: m_lambda >= (m/l)(a rho + b l sigma)/(rho+sigma)
    //               = m * v_d(corner) / (rho + sigma).
    let bound = crate::homog::diagonal_lambda(&corner.point, m, d);
    let roots = rational_roots(&sl.poly);
    let best = roots
        .iter()
        .filter(|(r, _)| !r.is_zero())
        .max_by_key(|(_, mult)| *mult);
    let Some((lambda, mult)) = best else {
        return Err(PipelineError::IrrationalRoot(
            "slice has no nonzero rational root".to_string(),
        ));
    };
    if qi(*mult as i64) < bound {
        return Err(PipelineError::MultiplicityTooLow(format!(
            "max rational multiplicity {mult} < bound {}",
            q_str(&bound)
        )));
    }
    let phi = ElementaryAuto::new(
        lambda.clone(),
        Q::new(BigInt::from(d.sigma), BigInt::from(d.rho)),
    )
    .expect("lambda != 0");
    let p2 = apply_elementary(p, &phi);
    let q2 = apply_elementary(q, &phi);
    // st(phi P) = (k/l, 0) + m_lambda (-sigma/rho, 1) and m | m_lambda,
    // where l_d(P) = x^(k/l) p_full(z) with k/l = xshift + s sigma/rho.
    let k_over_l =
        &sl.xshift + &(Q::new(BigInt::from(d.sigma), BigInt::from(d.rho)) * qi(sl.yshift as i64));
    let expected_st = PlanePoint::new(
        &k_over_l + &(Q::new(BigInt::from(-d.sigma), BigInt::from(d.rho)) * qi(*mult as i64)),
        qi(*mult as i64),
    );
    let st_after = st_point(&p2, d)?;
    if st_after != expected_st {
        return Err(PipelineError::AssumptionViolated {
            stage: "cut-above-diagonal",
            assertion: "st_d(phi(P)) = (k/l, 0) + m_lambda (-sigma/rho, 1)".to_string(),
            diagnostic: format!("expected {expected_st}, got {st_after}"),
            log: vec![],
        });
    }
    if *mult as i64 % m != 0 {
        return Err(PipelineError::MultiplicityTooLow(format!(
            "m = {m} does not divide m_lambda = {mult}"
        )));
    }
    let en_before = en_point(p, d)?;
    let en_after = en_point(&p2, d)?;
    if en_before != en_after {
        return Err(PipelineError::AssumptionViolated {
            stage: "cut-above-diagonal",
            assertion: "en_d(phi(P)) = en_d(P)".to_string(),
            diagnostic: format!("before {en_before}, after {en_after}"),
            log: vec![],
        });
    }
    let a1 = st_after.scale(&qi(m).recip());
    Ok((p2, q2, a1))
}

/// Certificate for the bounded `F` search.
#[derive(Clone, Debug, serde::Serialize)]
pub struct NoFCertificate {
    pub dir: Direction,
    pub max_ydeg: u32,
    /// Rendered solutions; empty certifies nonexistence below the bound.
    pub solutions: Vec<String>,
}

/// Wraps the bounded `F` search into a certificate: either exhibits the
/// solutions or records the bound under which none exists.
pub fn certify_no_f(
    p: &LaurentPoly,
    d: Direction,
    max_ydeg: u32,
) -> Result<NoFCertificate, PipelineError> {
    let lf = leading_form(p, d);
    if v_degree(&lf, d) == DegreeValue::Finite(Q::zero()) {
        return Err(HomogError::DegreeZero(d).into());
    }
    let sols = crate::homog::solve_f(&lf, d, max_ydeg)?;
    Ok(NoFCertificate {
        dir: d,
        max_ydeg,
        solutions: sols
            .as_list()
            .iter()
            .map(crate::text::render_poly)
            .collect(),
    })
}
