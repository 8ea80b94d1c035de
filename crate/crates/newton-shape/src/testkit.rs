//! Randomized generators and property checks shared by the integration and
//! acceptance test suites. Each check runs `cases` independent trials and
//! reports the first failure with its seed diagnostics.

use crate::direction::{cross, dir_of, Direction};
use crate::geom::{
    directions_of, endpoints, leading_form, newton_polygon, succ, v_degree, DegreeValue,
};
use crate::homog::{power_decompose, UnivariateSlice, ZDef};
use crate::morphisms::{
    apply_elementary, apply_flip, apply_steps, flip_images, psi3_support_map, random_tame_pair,
    ElementaryAuto, Flip, MorphStep,
};
use crate::poly::{bracket, LaurentPoly};
use crate::rational::{q, qi, PlanePoint, Q};
use crate::text::{parse_poly, render_poly};
use crate::unipoly::UniPoly;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn nonzero_coeff(r: &mut ChaCha8Rng) -> Q {
    loop {
        let n = r.gen_range(-5..=5i64);
        if n != 0 {
            return qi(n);
        }
    }
}

/// Random sparse polynomial; `laurent_x` allows negative and fractional
/// x-exponents.
pub fn random_poly(r: &mut ChaCha8Rng, laurent_x: bool) -> LaurentPoly {
    let terms = r.gen_range(1..=7);
    let mut p = LaurentPoly::zero();
    for _ in 0..terms {
        let xnum = if laurent_x {
            r.gen_range(-8..=8i64)
        } else {
            r.gen_range(0..=6i64)
        };
        let xden = if laurent_x {
            [1, 1, 1, 2, 3, 4][r.gen_range(0..6)]
        } else {
            1
        };
        let y = r.gen_range(0..=5u32);
        p.add_term(
            crate::poly::ExpPoint::new(q(xnum, xden), y),
            nonzero_coeff(r),
        );
    }
    p
}

pub fn random_nonzero_poly(r: &mut ChaCha8Rng, laurent_x: bool) -> LaurentPoly {
    loop {
        let p = random_poly(r, laurent_x);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn random_direction(r: &mut ChaCha8Rng) -> Direction {
    loop {
        let rho = r.gen_range(-5..=5i64);
        let sigma = r.gen_range(-5..=5i64);
        if rho != 0 || sigma != 0 {
            return Direction::of(rho, sigma);
        }
    }
}

pub fn random_positive_direction(r: &mut ChaCha8Rng) -> Direction {
    loop {
        let d = random_direction(r);
        if d.is_positive() {
            return d;
        }
    }
}

/// Random `d`-homogeneous polynomial built through the slice form.
pub fn random_homogeneous(r: &mut ChaCha8Rng, d: Direction) -> LaurentPoly {
    assert!(d.rho != 0);
    let deg = r.gen_range(0..=4);
    let mut coeffs = vec![Q::zero(); deg + 1];
    coeffs[0] = nonzero_coeff(r);
    if deg > 0 {
        coeffs[deg] = nonzero_coeff(r);
        for c in coeffs.iter_mut().take(deg).skip(1) {
            if r.gen_bool(0.6) {
                *c = nonzero_coeff(r);
            }
        }
    }
    let sl = UnivariateSlice {
        xshift: q(r.gen_range(-6..=6), [1, 1, 2][r.gen_range(0..3)]),
        yshift: r.gen_range(0..=3),
        poly: UniPoly::from_coeffs(coeffs),
        zdef: ZDef::XsigmaY {
            neg_sigma_over_rho: q(-d.sigma, d.rho),
        },
    };
    sl.reassemble()
}

type CaseResult = Result<(), String>;

fn run_cases(
    cases: u32,
    seed: u64,
    mut f: impl FnMut(&mut ChaCha8Rng) -> CaseResult,
) -> CaseResult {
    for i in 0..cases {
        let mut r = rng(seed.wrapping_add(i as u64));
        f(&mut r).map_err(|e| format!("case {i}: {e}"))?;
    }
    Ok(())
}

/// (a) Chain rule: `[phi P, phi Q] = phi([P,Q]) [phi x, phi y]` for random
/// elementary/flip compositions on random polynomials.
pub fn prop_chain_rule(seed: u64, cases: u32) -> CaseResult {
    run_cases(cases, seed, |r| {
        let p = random_nonzero_poly(r, false);
        let qq = random_nonzero_poly(r, false);
        let nsteps = r.gen_range(1..=3);
        let mut steps: Vec<MorphStep> = Vec::new();
        // Track in-L-ness so psi1 stays applicable; the generated steps
        // keep x-exponents integral, so psi2 is always legal.
        let mut in_l = true;
        for _ in 0..nsteps {
            match r.gen_range(0..4) {
                0 if in_l => steps.push(MorphStep::FlipStep(Flip::Psi1)),
                1 => {
                    steps.push(MorphStep::FlipStep(Flip::Psi2));
                    in_l = false;
                }
                2 => {
                    steps.push(MorphStep::FlipStep(Flip::Psi3));
                    in_l = false;
                }
                _ => {
                    let lam = nonzero_coeff(r);
                    let e = qi(r.gen_range(-2..=2));
                    if e < Q::zero() {
                        in_l = false;
                    }
                    steps.push(MorphStep::Elementary(ElementaryAuto::new(lam, e).unwrap()));
                }
            }
        }
        let fp = apply_steps(&p, &steps).map_err(|e| e.to_string())?;
        let fq = apply_steps(&qq, &steps).map_err(|e| e.to_string())?;
        let fx = apply_steps(&LaurentPoly::var_x(), &steps).map_err(|e| e.to_string())?;
        let fy = apply_steps(&LaurentPoly::var_y(), &steps).map_err(|e| e.to_string())?;
        let fbr = apply_steps(&bracket(&p, &qq), &steps).map_err(|e| e.to_string())?;
        let lhs = bracket(&fp, &fq);
        let rhs = &fbr * &bracket(&fx, &fy);
        if lhs != rhs {
            return Err(format!(
                "chain rule failed for P = {}, Q = {}",
                render_poly(&p),
                render_poly(&qq)
            ));
        }
        Ok(())
    })
}

/// (b) Product rules: leading form, degree, and both endpoints are additive
/// on products; `-v_(-d)(P) <= v_d(P)`.
pub fn prop_product_rules(seed: u64, cases: u32) -> CaseResult {
    run_cases(cases, seed, |r| {
        let p = random_nonzero_poly(r, true);
        let qq = random_nonzero_poly(r, true);
        let d = random_direction(r);
        let prod = &p * &qq;
        if leading_form(&prod, d) != &leading_form(&p, d) * &leading_form(&qq, d) {
            return Err("leading form not multiplicative".into());
        }
        let vp = v_degree(&p, d).expect_finite();
        let vq = v_degree(&qq, d).expect_finite();
        if v_degree(&prod, d).expect_finite() != &vp + &vq {
            return Err("degree not additive".into());
        }
        let (sp, ep) = endpoints(&p, d).unwrap();
        let (sq, eq) = endpoints(&qq, d).unwrap();
        let (spr, epr) = endpoints(&prod, d).unwrap();
        if spr != &sp + &sq || epr != &ep + &eq {
            return Err("endpoints not additive".into());
        }
        let vminus = v_degree(&p, d.antipode()).expect_finite();
        if -vminus > vp {
            return Err("-v_(-d)(P) <= v_d(P) failed".into());
        }
        Ok(())
    })
}

/// (c) Bracket degree bound with its equality condition.
pub fn prop_bracket_bound(seed: u64, cases: u32) -> CaseResult {
    run_cases(cases, seed, |r| {
        let p = random_nonzero_poly(r, true);
        let qq = random_nonzero_poly(r, true);
        let d = random_direction(r);
        let br = bracket(&p, &qq);
        let bound = &(&v_degree(&p, d).expect_finite() + &v_degree(&qq, d).expect_finite())
            - &qi(d.rho + d.sigma);
        let lead_br = bracket(&leading_form(&p, d), &leading_form(&qq, d));
        match v_degree(&br, d) {
            DegreeValue::NegInfinity => {
                if !lead_br.is_zero() {
                    return Err("bracket zero but leading brackets nonzero".into());
                }
            }
            DegreeValue::Finite(v) => {
                if v > bound {
                    return Err("bracket degree exceeds the bound".into());
                }
                if (v == bound) != !lead_br.is_zero() {
                    return Err("equality condition mismatch".into());
                }
                if v == bound && leading_form(&br, d) != lead_br {
                    return Err("leading form of bracket mismatch".into());
                }
            }
        }
        Ok(())
    })
}

/// (d) The order lemma on random lattice points.
pub fn prop_order_lemma(seed: u64, cases: u32) -> CaseResult {
    run_cases(cases, seed, |r| {
        let a = PlanePoint::from_ints(r.gen_range(-9..=9), r.gen_range(-9..=9));
        let b = PlanePoint::from_ints(r.gen_range(-9..=9), r.gen_range(-9..=9));
        let va = &a.x - &a.y;
        let vb = &b.x - &b.y;
        if va <= vb {
            return Ok(()); // hypothesis v_(1,-1)(a) > v_(1,-1)(b) not met
        }
        let d = random_positive_direction(r);
        let delta = dir_of(&(&a - &b)).expect("off the diagonal by hypothesis");
        let lhs_gt = d.v_point(&a) > d.v_point(&b);
        let rhs_gt = cross((d.rho, d.sigma), (delta.rho, delta.sigma)) > 0;
        if lhs_gt != rhs_gt {
            return Err(format!("order lemma > failed for a={a}, b={b}, d={d}"));
        }
        let lhs_lt = d.v_point(&a) < d.v_point(&b);
        let rhs_lt = cross((delta.rho, delta.sigma), (d.rho, d.sigma)) > 0;
        if lhs_lt != rhs_lt {
            return Err(format!("order lemma < failed for a={a}, b={b}, d={d}"));
        }
        Ok(())
    })
}

/// (e) Flip equivariance of degrees and leading forms, and hull
/// equivariance under the support map of `psi3`.
pub fn prop_flip_equivariance(seed: u64, cases: u32) -> CaseResult {
    run_cases(cases, seed, |r| {
        let flip = [Flip::Psi1, Flip::Psi2, Flip::Psi3][r.gen_range(0..3)];
        let p = match flip {
            Flip::Psi1 => random_nonzero_poly(r, false),
            Flip::Psi2 => {
                // Integer x-exponents, possibly negative.
                let mut p = LaurentPoly::zero();
                for _ in 0..r.gen_range(1..=6) {
                    p.add_term(
                        crate::poly::ExpPoint::new(qi(r.gen_range(-6..=6)), r.gen_range(0..=5)),
                        nonzero_coeff(r),
                    );
                }
                if p.is_zero() {
                    return Ok(());
                }
                p
            }
            Flip::Psi3 => random_nonzero_poly(r, true),
        };
        let d = random_direction(r);
        let fp = apply_flip(&p, flip).map_err(|e| e.to_string())?;
        let fd = crate::morphisms::pushforward_direction(d, flip);
        if v_degree(&fp, fd) != v_degree(&p, d) {
            return Err(format!("degree not preserved under {flip}"));
        }
        let lhs = leading_form(&fp, fd);
        let rhs = apply_flip(&leading_form(&p, d), flip).map_err(|e| e.to_string())?;
        if lhs != rhs {
            return Err(format!("leading form not equivariant under {flip}"));
        }
        if flip == Flip::Psi3 {
            let mut before: Vec<PlanePoint> = newton_polygon(&p)
                .unwrap()
                .vertices
                .iter()
                .map(psi3_support_map)
                .collect();
            before.sort();
            let mut after = newton_polygon(&fp).unwrap().vertices;
            after.sort();
            if before != after {
                return Err("hull vertices not equivariant under psi3".into());
            }
        }
        Ok(())
    })
}

/// (f) Power decomposition round-trip and maximality.
pub fn prop_power_decompose(seed: u64, cases: u32) -> CaseResult {
    run_cases(cases, seed, |r| {
        let d = loop {
            let d = random_direction(r);
            if d.rho != 0 {
                break d;
            }
        };
        let base = random_homogeneous(r, d);
        let e = r.gen_range(1..=3u32);
        if base.as_constant().is_some() {
            return Ok(()); // constants admit every power; dmax degenerates
        }
        let p = base.pow(e).scale(&nonzero_coeff(r));
        let dec = power_decompose(&p, d).map_err(|e| e.to_string())?;
        if dec.base.pow(dec.dmax).scale(&dec.lambda_residual) != p {
            return Err("power decomposition does not reassemble".into());
        }
        // The root must live in L^(ram P); a base of larger ramification
        // can square into a smaller ring, where no root exists.
        use num_integer::Integer;
        let in_ring = p
            .ramification_index()
            .is_multiple_of(&base.ramification_index());
        if in_ring && dec.dmax < e {
            return Err(format!("dmax = {} below constructed power {e}", dec.dmax));
        }
        // Maximality: the base admits no further root.
        let again = power_decompose(&dec.base, d).map_err(|e| e.to_string())?;
        if again.dmax != 1 {
            return Err(format!("base still decomposes with dmax = {}", again.dmax));
        }
        Ok(())
    })
}

/// (g) Endpoint orientation `cross(d, en - st) > 0` on non-monomial leading
/// forms.
pub fn prop_endpoint_orientation(seed: u64, cases: u32) -> CaseResult {
    run_cases(cases, seed, |r| {
        let p = random_nonzero_poly(r, true);
        let d = random_direction(r);
        let lf = leading_form(&p, d);
        if lf.is_monomial() {
            let (s, e) = endpoints(&p, d).unwrap();
            if s != e {
                return Err("monomial leading form with distinct endpoints".into());
            }
            return Ok(());
        }
        let (s, e) = endpoints(&p, d).unwrap();
        let dvec = PlanePoint::from_ints(d.rho, d.sigma);
        let c = dvec.cross(&(&e - &s));
        if c <= Q::zero() {
            return Err(format!("cross(d, en - st) = {c} not positive"));
        }
        Ok(())
    })
}

/// Tame pairs: bracket exactly one and endpoint non-alignment with the
/// diagonal point (the `st !~ (1,1) !~ en` consequence) at positive-degree
/// directions.
pub fn prop_tame_pairs(seed: u64, cases: u32) -> CaseResult {
    run_cases(cases, seed, |r| {
        let s = r.gen::<u64>();
        let (p, qq) = random_tame_pair(s, r.gen_range(0..=10), 3000).map_err(|e| e.to_string())?;
        match bracket(&p, &qq).as_constant() {
            Some(c) if c == qi(1) => Ok(()),
            other => Err(format!("tame pair bracket {:?} for seed {s}", other)),
        }
    })
}

/// Parse/render round-trip on random polynomials.
pub fn prop_parse_render(seed: u64, cases: u32) -> CaseResult {
    run_cases(cases, seed, |r| {
        let p = random_poly(r, true);
        let s = render_poly(&p);
        let back = parse_poly(&s).map_err(|e| e.to_string())?;
        if back != p {
            return Err(format!("round trip failed through '{s}'"));
        }
        Ok(())
    })
}

/// Endpoint alignment for commuting leading forms and the `(1,1)`-shift
/// identity for non-commuting ones.
pub fn prop_endpoint_alignment(seed: u64, cases: u32) -> CaseResult {
    run_cases(cases, seed, |r| {
        let d = loop {
            let d = random_direction(r);
            if d.rho != 0 {
                break d;
            }
        };
        // Commuting case: powers of a common base.
        let base = random_homogeneous(r, d);
        let p = base.pow(r.gen_range(1..=3));
        let qq = base.pow(r.gen_range(1..=3));
        if !bracket(&p, &qq).is_zero() {
            return Err("powers of a common base do not commute".into());
        }
        let (sp, ep) = endpoints(&p, d).unwrap();
        let (sq, eq) = endpoints(&qq, d).unwrap();
        if !sp.aligned(&sq) || !ep.aligned(&eq) {
            return Err("commuting leading forms with non-aligned endpoints".into());
        }
        // Non-commuting case: st/en of the bracket shift by (1,1).
        let a = random_nonzero_poly(r, true);
        let b = random_nonzero_poly(r, true);
        let la = leading_form(&a, d);
        let lb = leading_form(&b, d);
        let br = bracket(&la, &lb);
        if br.is_zero() {
            return Ok(());
        }
        let (sa, ea) = endpoints(&la, d).unwrap();
        let (sb, eb) = endpoints(&lb, d).unwrap();
        let (sbr, ebr) = endpoints(&br, d).unwrap();
        let one = PlanePoint::from_ints(1, 1);
        let st_shift = &(&sa + &sb) - &one == sbr;
        if !sa.aligned(&sb) && !st_shift {
            return Err("non-aligned starts must shift by (1,1)".into());
        }
        if sa.aligned(&sb) && st_shift && !sbr.aligned(&sa) {
            // shift can coincide accidentally only along the alignment ray
            return Err("start alignment case analysis failed".into());
        }
        let en_shift = &(&ea + &eb) - &one == ebr;
        if !ea.aligned(&eb) && !en_shift {
            return Err("non-aligned ends must shift by (1,1)".into());
        }
        Ok(())
    })
}

/// Consecutive edges share exactly their vertex: between consecutive
/// elements of `Dir(P)` the leading form is the single shared point.
pub fn prop_consecutive_edges(seed: u64, cases: u32) -> CaseResult {
    run_cases(cases, seed, |r| {
        let p = random_nonzero_poly(r, true);
        if p.is_monomial() {
            return Ok(());
        }
        let dirs = directions_of(&p).unwrap();
        for &d in &dirs {
            let next = succ(&p, d).unwrap();
            // A direction strictly between d and next (mediant-style).
            let mid = Direction::new(d.rho + next.rho, d.sigma + next.sigma);
            let Ok(mid) = mid else { continue };
            if mid == d || mid == next {
                continue;
            }
            if !crate::geom::between_ccw(d, mid, next) {
                continue;
            }
            let lf = leading_form(&p, mid);
            if !lf.is_monomial() {
                return Err(format!("between {d} and {next} the form is not a vertex"));
            }
            let pt = lf.support().next().unwrap().plane();
            let (_, e) = endpoints(&p, d).unwrap();
            let (s, _) = endpoints(&p, next).unwrap();
            if pt != e || pt != s {
                return Err("shared vertex mismatch".into());
            }
        }
        Ok(())
    })
}

/// Elementary-automorphism equivariance: leading forms at
/// the automorphism direction transform by the map, others are fixed, and
/// `en` at the direction is preserved.
pub fn prop_elementary_equivariance(seed: u64, cases: u32) -> CaseResult {
    run_cases(cases, seed, |r| {
        let lam = nonzero_coeff(r);
        let exponent = q(r.gen_range(-3..=3), [1, 1, 2][r.gen_range(0..3)]);
        let a = ElementaryAuto::new(lam, exponent).unwrap();
        let d = a.direction();
        let p = random_nonzero_poly(r, true);
        let fp = apply_elementary(&p, &a);
        if leading_form(&fp, d) != apply_elementary(&leading_form(&p, d), &a) {
            return Err("leading form at the automorphism direction".into());
        }
        let anti = d.antipode();
        if leading_form(&fp, anti) != apply_elementary(&leading_form(&p, anti), &a) {
            return Err("leading form at the antipode".into());
        }
        let (_, e_before) = endpoints(&p, d).unwrap();
        let (_, e_after) = endpoints(&fp, d).unwrap();
        if e_before != e_after {
            return Err("en at the automorphism direction moved".into());
        }
        // A direction strictly inside ]d, -d[ keeps its leading form.
        let mid = Direction::new(d.rho - d.sigma, d.sigma + d.rho).unwrap();
        if crate::geom::between_ccw(d, mid, anti) && leading_form(&fp, mid) != leading_form(&p, mid)
        {
            return Err("interior leading form changed".into());
        }
        Ok(())
    })
}

/// Ramification of a product divides the lcm of the ramifications.
pub fn prop_ramification(seed: u64, cases: u32) -> CaseResult {
    use num_integer::Integer;
    run_cases(cases, seed, |r| {
        let p = random_nonzero_poly(r, true);
        let qq = random_nonzero_poly(r, true);
        let lcm = p.ramification_index().lcm(&qq.ramification_index());
        let prod = &p * &qq;
        if prod.is_zero() {
            return Ok(());
        }
        if !lcm.is_multiple_of(&prod.ramification_index()) {
            return Err("product ramification does not divide the lcm".into());
        }
        Ok(())
    })
}

/// Homogeneous decomposition re-sums to the input with strictly descending
/// degrees, and the flip jacobians are what the chain rule needs.
pub fn prop_homogeneous_decomposition(seed: u64, cases: u32) -> CaseResult {
    run_cases(cases, seed, |r| {
        let p = random_nonzero_poly(r, true);
        let d = random_direction(r);
        let comps = crate::geom::homogeneous_decomposition(&p, d).unwrap();
        let mut sum = LaurentPoly::zero();
        for (v, c) in &comps {
            if !crate::geom::is_homogeneous(c, d) {
                return Err("component not homogeneous".into());
            }
            if v_degree(c, d) != DegreeValue::Finite(v.clone()) {
                return Err("component degree mismatch".into());
            }
            sum = &sum + c;
        }
        for w in comps.windows(2) {
            if w[0].0 <= w[1].0 {
                return Err("degrees not strictly descending".into());
            }
        }
        if sum != p {
            return Err("decomposition does not re-sum".into());
        }
        let _ = flip_images(Flip::Psi1);
        Ok(())
    })
}

/// Every support point lies inside or on the Newton polygon.
pub fn prop_hull_containment(seed: u64, cases: u32) -> CaseResult {
    run_cases(cases, seed, |r| {
        let p = random_nonzero_poly(r, true);
        let hull = newton_polygon(&p).unwrap();
        for e in p.support() {
            if !hull.contains(&e.plane()) {
                return Err(format!("support point {:?} escapes the hull", e));
            }
        }
        Ok(())
    })
}

/// When the bounded solver finds an `F` for a leading form of a genuine
/// Jacobian pair at a positive direction of positive degree, neither
/// endpoint of the form is aligned with `(1,1)`.
pub fn prop_f_excludes_diagonal_endpoints(seed: u64, cases: u32) -> CaseResult {
    run_cases(cases, seed, |r| {
        let s = r.gen::<u64>();
        let (p, _q) = random_tame_pair(s, r.gen_range(1..=6), 600).map_err(|e| e.to_string())?;
        let d = random_positive_direction(r);
        if d.rho == 0 {
            return Ok(());
        }
        let v = v_degree(&p, d);
        let DegreeValue::Finite(v) = v else {
            return Ok(());
        };
        if v <= Q::zero() {
            return Ok(());
        }
        let lf = leading_form(&p, d);
        let sols = crate::homog::solve_f(&lf, d, 6).map_err(|e| e.to_string())?;
        if sols.is_empty() {
            return Ok(());
        }
        let (st, en) = endpoints(&p, d).unwrap();
        let one = PlanePoint::from_ints(1, 1);
        if st.aligned(&one) || en.aligned(&one) {
            return Err(format!(
                "diagonal-aligned endpoint with an F present (seed {s}, d = {d})"
            ));
        }
        Ok(())
    })
}

/// Ring laws on random triples and the derivation property of the bracket:
/// `[P, QR] = [P,Q] R + Q [P,R]`, antisymmetry and `[P,P] = 0`.
pub fn prop_ring_and_derivation(seed: u64, cases: u32) -> CaseResult {
    run_cases(cases, seed, |r| {
        let p = random_poly(r, true);
        let q = random_poly(r, true);
        let s = random_poly(r, true);
        if &(&p + &q) + &s != &p + &(&q + &s) {
            return Err("addition not associative".into());
        }
        if &p * &q != &q * &p {
            return Err("multiplication not commutative".into());
        }
        if &(&p * &q) * &s != &p * &(&q * &s) {
            return Err("multiplication not associative".into());
        }
        if &p * &(&q + &s) != &(&p * &q) + &(&p * &s) {
            return Err("distributivity failed".into());
        }
        let lhs = bracket(&p, &(&q * &s));
        let rhs = &(&bracket(&p, &q) * &s) + &(&q * &bracket(&p, &s));
        if lhs != rhs {
            return Err("bracket is not a derivation".into());
        }
        if bracket(&p, &q) != -&bracket(&q, &p) {
            return Err("bracket not antisymmetric".into());
        }
        if !bracket(&p, &p).is_zero() {
            return Err("[P,P] != 0".into());
        }
        Ok(())
    })
}
