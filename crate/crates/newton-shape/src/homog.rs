//! Structure of `(rho,sigma)`-homogeneous elements: univariate slices,
//! squarefree data, maximal power decomposition, the common power base of
//! commuting leading forms, the bounded search for the `F` element with
//! `[F, P] = P`, and the five-way corner case classification.

use crate::direction::Direction;
use crate::geom::{aligned, endpoints, is_homogeneous, v_degree, v_of, DegreeValue, GeomError};
use crate::linsolve;
use crate::poly::{bracket, ExpPoint, LaurentPoly};
use crate::rational::{q_is_integer, q_sign, qi, PlanePoint, Q};
use crate::unipoly::{self, SquarefreeDecomposition, UniPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomogError {
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("input is not {0}-homogeneous")]
    NotHomogeneous(Direction),
    #[error("slice requires rho >= 0, got {0}")]
    UnsupportedDirection(Direction),
    #[error("bracket of the inputs is nonzero")]
    BracketNonzero,
    #[error("both degrees vanish; no canonical common base exists")]
    BothDegreesZero,
    #[error("decomposition requires a root outside Q: {0}")]
    RequiresExtensionField(String),
    #[error("inputs are not proportional powers: {0}")]
    NotProportional(String),
    #[error("the {0}-degree is zero")]
    DegreeZero(Direction),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("v_{{1,-1}}(st) = 0; classification is undefined")]
    DegenerateStart,
    #[error("leading form is a monomial; no corner case applies")]
    MonomialLeadingForm,
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// How the slice variable `z` is defined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZDef {
    /// `z = x^(-sigma/rho) y` (for `rho != 0`).
    XsigmaY { neg_sigma_over_rho: Q },
    /// `z = x^(1/l)` (for `rho = 0`).
    XRoot { l: BigInt },
}

/// Exact decomposition of a homogeneous element as
/// `x^xshift * y^yshift * p(z)` with `p(0) != 0`.
#[derive(Clone, Debug)]
pub struct UnivariateSlice {
    pub xshift: Q,
    pub yshift: u32,
    pub poly: UniPoly,
    pub zdef: ZDef,
}

impl UnivariateSlice {
    /// Rebuilds the homogeneous element the slice came from.
    pub fn reassemble(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        match &self.zdef {
            ZDef::XsigmaY { neg_sigma_over_rho } => {
                for (k, c) in self.poly.coeffs().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let x = &self.xshift + &(neg_sigma_over_rho * &qi(k as i64));
                    out.add_term(ExpPoint::new(x, self.yshift + k as u32), c.clone());
                }
            }
            ZDef::XRoot { l } => {
                for (k, c) in self.poly.coeffs().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let x = &self.xshift + &Q::new(BigInt::from(k), l.clone());
                    out.add_term(ExpPoint::new(x, self.yshift), c.clone());
                }
            }
        }
        out
    }
}

/// Internal slice for any `rho != 0`: anchored at the minimal-y support
/// point, so `p(0) != 0` always holds.
pub(crate) fn slice_any_rho(p: &LaurentPoly, d: Direction) -> Result<UnivariateSlice, HomogError> {
    if p.is_zero() {
        return Err(HomogError::ZeroPolynomial);
    }
    if !is_homogeneous(p, d) {
        return Err(HomogError::NotHomogeneous(d));
    }
    assert!(d.rho != 0);
    let step = Q::new(BigInt::from(-d.sigma), BigInt::from(d.rho));
    let base = p.support().min_by_key(|e| e.yexp).expect("nonzero").clone();
    let ymax = p.support().map(|e| e.yexp).max().unwrap();
    let deg = (ymax - base.yexp) as usize;
    let mut coeffs = vec![Q::zero(); deg + 1];
    for (e, c) in p.terms() {
        let k = (e.yexp - base.yexp) as usize;
        let expected_x = &base.xexp + &(&step * &qi(k as i64));
        if e.xexp != expected_x {
            // Cannot happen for a genuinely homogeneous element.
            return Err(HomogError::NotHomogeneous(d));
        }
        coeffs[k] = c.clone();
    }
    Ok(UnivariateSlice {
        xshift: base.xexp,
        yshift: base.yexp,
        poly: UniPoly::from_coeffs(coeffs),
        zdef: ZDef::XsigmaY {
            neg_sigma_over_rho: step,
        },
    })
}

/// Decomposes a `d`-homogeneous element as `x^(r/l) y^s p(z)` with
/// `p(0) != 0`, `z = x^(-sigma/rho) y` for `rho > 0` and `z = x^(1/l)` for
/// `rho = 0`.
pub fn slice(p: &LaurentPoly, d: Direction) -> Result<UnivariateSlice, HomogError> {
    if d.rho < 0 {
        return Err(HomogError::UnsupportedDirection(d));
    }
    if d.rho > 0 {
        return slice_any_rho(p, d);
    }
    // rho = 0: homogeneous means a single y-exponent; slice in x^(1/l).
    if p.is_zero() {
        return Err(HomogError::ZeroPolynomial);
    }
    if !is_homogeneous(p, d) {
        return Err(HomogError::NotHomogeneous(d));
    }
    let l = p.ramification_index();
    let s = p.support().next().unwrap().yexp;
    let xmin = p.support().map(|e| e.xexp.clone()).min().unwrap();
    let degq = p
        .support()
        .map(|e| (&e.xexp - &xmin) * Q::from_integer(l.clone()))
        .max()
        .unwrap();
    let deg: usize = degq.to_integer().try_into().expect("desk-scale degree");
    let mut coeffs = vec![Q::zero(); deg + 1];
    for (e, c) in p.terms() {
        let k: usize = ((&e.xexp - &xmin) * Q::from_integer(l.clone()))
            .to_integer()
            .try_into()
            .unwrap();
        coeffs[k] = c.clone();
    }
    Ok(UnivariateSlice {
        xshift: xmin,
        yshift: s,
        poly: UniPoly::from_coeffs(coeffs),
        zdef: ZDef::XRoot { l },
    })
}

/// Squarefree structure of a univariate polynomial: the squarefree part and
/// the multiset of (factor degree over `Q`, multiplicity) pairs from the
/// Yun decomposition. The distinct-root count over the algebraic closure is
/// the degree of the squarefree part.
#[derive(Clone, Debug)]
pub struct SquarefreeData {
    pub squarefree_part: UniPoly,
    pub profile: Vec<(usize, u32)>,
    pub decomposition: SquarefreeDecomposition,
}

pub fn squarefree_data(p: &UniPoly) -> Result<SquarefreeData, HomogError> {
    if p.is_zero() {
        return Err(HomogError::ZeroPolynomial);
    }
    let decomposition = unipoly::squarefree_decomposition(p);
    let profile = decomposition
        .factors
        .iter()
        .map(|f| (f.factor.degree(), f.multiplicity))
        .collect();
    Ok(SquarefreeData {
        squarefree_part: decomposition.squarefree_part(),
        profile,
        decomposition,
    })
}

/// Number of distinct irreducible factors of the full slice
/// `z^s p(z)` over the algebraic closure.
pub fn factor_count(sl: &UnivariateSlice) -> Result<usize, HomogError> {
    let sf = squarefree_data(&sl.poly)?;
    Ok(sf.squarefree_part.degree() + usize::from(sl.yshift > 0))
}

/// Result of the maximal power decomposition `P = lambda * R^dmax`.
#[derive(Clone, Debug)]
pub struct PowerDecomposition {
    pub base: LaurentPoly,
    pub dmax: u32,
    pub lambda_residual: Q,
}

/// Largest `e` with `P = lambda R^e` for `R` in the same `L^(l)`; `lambda`
/// is surfaced because it need not be an `e`-th power in `Q`.
pub fn power_decompose(p: &LaurentPoly, d: Direction) -> Result<PowerDecomposition, HomogError> {
    if p.is_zero() {
        return Err(HomogError::ZeroPolynomial);
    }
    if !is_homogeneous(p, d) {
        return Err(HomogError::NotHomogeneous(d));
    }
    let l = p.ramification_index();
    if p.is_monomial() {
        // P = c x^(a/l) y^s: dmax = gcd(a, s), no polynomial part.
        let (e, c) = p.terms().next().unwrap();
        let a = (&e.xexp * Q::from_integer(l.clone())).to_integer();
        let g_big = a.gcd(&BigInt::from(e.yexp));
        let dmax: u32 = if g_big.is_zero() {
            // The constant monomial: only e = 1 is meaningful.
            1
        } else {
            g_big.try_into().unwrap_or(1)
        };
        let base = LaurentPoly::monomial(qi(1), &e.xexp / &qi(dmax as i64), e.yexp / dmax);
        return Ok(PowerDecomposition {
            base,
            dmax,
            lambda_residual: c.clone(),
        });
    }
    let (sl, from_rho_zero) = if d.rho != 0 {
        (slice_any_rho(p, d)?, false)
    } else {
        (slice(p, d)?, true)
    };
    let sf = squarefree_data(&sl.poly)?;
    let mult_gcd = sf.decomposition.multiplicity_gcd();
    let a = (&sl.xshift * Q::from_integer(l.clone())).to_integer();
    let mut e_cap = mult_gcd;
    if !a.is_zero() {
        e_cap = gcd_u32(e_cap, &a);
    }
    if sl.yshift != 0 {
        e_cap = e_cap.gcd(&sl.yshift);
    }
    if from_rho_zero {
        // yshift is the common y-exponent, not part of the z-lattice; for
        // rho = 0 the base keeps the full y power only if e divides it.
        // (Handled above via the same yshift gcd.)
    }
    if e_cap == 0 {
        e_cap = 1;
    }
    // Try divisors of e_cap in descending order; the ramification of the
    // candidate base must still divide l.
    let mut divs = divisors_desc(e_cap);
    if divs.is_empty() {
        divs.push(1);
    }
    for e in divs {
        if let Some(dec) = try_power(p, &sl, &sf, e, &l) {
            return Ok(dec);
        }
    }
    unreachable!("e = 1 always succeeds");
}

fn gcd_u32(a: u32, b: &BigInt) -> u32 {
    let m = BigInt::from(a).gcd(&b.abs());
    m.try_into().unwrap_or(1)
}

fn divisors_desc(n: u32) -> Vec<u32> {
    let mut out: Vec<u32> = (1..=n).filter(|k| n.is_multiple_of(*k)).collect();
    out.reverse();
    out
}

fn try_power(
    p: &LaurentPoly,
    sl: &UnivariateSlice,
    sf: &SquarefreeData,
    e: u32,
    l: &BigInt,
) -> Option<PowerDecomposition> {
    // Root of the monic part of the slice polynomial.
    let mut q = UniPoly::one();
    for f in &sf.decomposition.factors {
        if !f.multiplicity.is_multiple_of(e) {
            return None;
        }
        q = &q * &f.factor.pow(f.multiplicity / e);
    }
    let base_slice = UnivariateSlice {
        xshift: &sl.xshift / &qi(e as i64),
        yshift: sl.yshift / e,
        poly: q,
        zdef: sl.zdef.clone(),
    };
    let base = base_slice.reassemble();
    if !l.is_multiple_of(&base.ramification_index()) {
        return None;
    }
    let powered = base.pow(e);
    // lambda = ratio at any common support point.
    let (e0, c0) = powered.terms().next()?;
    let lambda = &p.coeff(e0) / c0;
    if lambda.is_zero() {
        return None;
    }
    if powered.scale(&lambda) != *p {
        return None;
    }
    // Absorb lambda into the base when it is an exact e-th power in Q, so
    // powers of integral bases round-trip with residual 1.
    if let Some(mu) = crate::rational::q_nth_root(&lambda, e) {
        return Some(PowerDecomposition {
            base: base.scale(&mu),
            dmax: e,
            lambda_residual: qi(1),
        });
    }
    Some(PowerDecomposition {
        base,
        dmax: e,
        lambda_residual: lambda,
    })
}

/// Outcome of `common_power_base`: `P = lambda_p R^m`, `Q = lambda_q R^n`.
#[derive(Clone, Debug)]
pub struct CommonPowerBase {
    pub base: LaurentPoly,
    pub m: i64,
    pub n: i64,
    pub lambda_p: Q,
    pub lambda_q: Q,
}

/// The common power base of two commuting homogeneous elements
/// (`[P,Q] = 0`, `(v(Q), v(P)) != (0,0)`): coprime `m, n` with
/// `n v(P) = m v(Q)` and `P = lambda_p R^m`, `Q = lambda_q R^n`.
pub fn common_power_base(
    p: &LaurentPoly,
    q: &LaurentPoly,
    d: Direction,
) -> Result<CommonPowerBase, HomogError> {
    if p.is_zero() || q.is_zero() {
        return Err(HomogError::ZeroPolynomial);
    }
    for f in [p, q] {
        if !is_homogeneous(f, d) {
            return Err(HomogError::NotHomogeneous(d));
        }
    }
    if !bracket(p, q).is_zero() {
        return Err(HomogError::BracketNonzero);
    }
    let tau = v_of(p, d);
    let mu = v_of(q, d);
    if tau.is_zero() && mu.is_zero() {
        return Err(HomogError::BothDegreesZero);
    }
    // Coprime m, n with n*tau = m*mu: (m, n) ~ (tau, mu).
    let (m, n) = proportional_pair(&tau, &mu);
    if mu.clone() * tau.clone() < Q::zero() {
        // Pure x-monomials; R = x^(r/(l m)).
        let (ep, cp) = single_term(p)?;
        let (eq, cq) = single_term(q)?;
        if ep.yexp != 0 || eq.yexp != 0 {
            return Err(HomogError::NotProportional(
                "mu*tau < 0 but inputs are not x-monomials".into(),
            ));
        }
        let r_exp = &ep.xexp / &qi(m);
        let base = LaurentPoly::monomial(qi(1), r_exp.clone(), 0);
        if &r_exp * &qi(n) != eq.xexp {
            return Err(HomogError::NotProportional(
                "exponents do not match the degree ratio".into(),
            ));
        }
        return Ok(CommonPowerBase {
            base,
            m,
            n,
            lambda_p: cp,
            lambda_q: cq,
        });
    }
    // mu*tau >= 0: choose m, n >= 0.
    let (m, n) = if m < 0 || (m == 0 && n < 0) {
        (-m, -n)
    } else {
        (m, n)
    };
    let sl_p = generic_slice(p, d)?;
    let sl_q = generic_slice(q, d)?;
    // h with f = lp h^m, g = lq h^n (unique factorization argument).
    let h = if m == 0 {
        extract_root(&sl_q.poly, n as u32)?
    } else {
        extract_root(&sl_p.poly, m as u32)?
    };
    // Base point (a/l, b) = c (r/l, s) + dd (u/l, v) with c m + dd n = 1.
    let bez = Integer::extended_gcd(&BigInt::from(m), &BigInt::from(n));
    let (c, dd) = (bez.x, bez.y);
    let cq_: Q = Q::from_integer(c);
    let dq_: Q = Q::from_integer(dd);
    let ax = &(&sl_p.xshift * &cq_) + &(&sl_q.xshift * &dq_);
    let ay = &(qi(sl_p.yshift as i64) * &cq_) + &(qi(sl_q.yshift as i64) * &dq_);
    if !q_is_integer(&ay) || ay.is_negative() {
        return Err(HomogError::NotProportional(format!(
            "base y-exponent {ay} is not a nonnegative integer"
        )));
    }
    let b: u32 = ay.to_integer().try_into().unwrap();
    let base_slice = UnivariateSlice {
        xshift: ax,
        yshift: b,
        poly: h,
        zdef: sl_p.zdef.clone(),
    };
    let base = base_slice.reassemble();
    // Verify and extract the residual constants.
    let bp = base.pow(m as u32);
    let bq = base.pow(n as u32);
    let lambda_p = ratio(p, &bp)?;
    let lambda_q = ratio(q, &bq)?;
    Ok(CommonPowerBase {
        base,
        m,
        n,
        lambda_p,
        lambda_q,
    })
}

fn generic_slice(p: &LaurentPoly, d: Direction) -> Result<UnivariateSlice, HomogError> {
    if d.rho != 0 {
        slice_any_rho(p, d)
    } else {
        slice(p, d)
    }
}

fn proportional_pair(tau: &Q, mu: &Q) -> (i64, i64) {
    // Coprime (m, n) with n tau = m mu, i.e. (m, n) ~ (tau, mu).
    let dt = tau.denom().lcm(mu.denom());
    let a = tau.numer() * (&dt / tau.denom());
    let b = mu.numer() * (&dt / mu.denom());
    let g = a.gcd(&b);
    let m: i64 = (&a / &g).try_into().expect("small degree ratio");
    let n: i64 = (&b / &g).try_into().expect("small degree ratio");
    (m, n)
}

fn single_term(p: &LaurentPoly) -> Result<(ExpPoint, Q), HomogError> {
    if p.is_monomial() {
        let (e, c) = p.terms().next().unwrap();
        Ok((e.clone(), c.clone()))
    } else {
        Err(HomogError::NotProportional(
            "expected a monomial".to_string(),
        ))
    }
}

fn extract_root(f: &UniPoly, m: u32) -> Result<UniPoly, HomogError> {
    if m == 0 {
        return Ok(UniPoly::one());
    }
    if m == 1 {
        return Ok(f.monic());
    }
    let sf = unipoly::squarefree_decomposition(f);
    let mut h = UniPoly::one();
    for fac in &sf.factors {
        if fac.multiplicity % m != 0 {
            return Err(HomogError::RequiresExtensionField(format!(
                "slice polynomial is not an exact {m}-th power over Q \
                 (factor multiplicity {})",
                fac.multiplicity
            )));
        }
        h = &h * &fac.factor.pow(fac.multiplicity / m);
    }
    Ok(h)
}

fn ratio(p: &LaurentPoly, base: &LaurentPoly) -> Result<Q, HomogError> {
    let (e0, c0) = base.terms().next().ok_or(HomogError::ZeroPolynomial)?;
    let lambda = &p.coeff(e0) / c0;
    if base.scale(&lambda) == *p {
        Ok(lambda)
    } else {
        Err(HomogError::NotProportional(
            "power reconstruction mismatch".to_string(),
        ))
    }
}

/// Solution set of `[F, P] = P` over the degree line, relative to a
/// y-degree bound.
#[derive(Clone, Debug)]
pub struct FSolutions {
    /// A particular solution, when the system is solvable within the bound.
    pub particular: Option<LaurentPoly>,
    /// Basis of homogeneous solutions `[R, P] = 0` on the same degree line
    /// (with the same y-bound); nonempty means the solution is not unique.
    pub kernel: Vec<LaurentPoly>,
    pub max_ydeg: u32,
}

impl FSolutions {
    /// The solutions as a list: empty, a unique element, or representatives
    /// `particular` and `particular + k` for each kernel element.
    pub fn as_list(&self) -> Vec<LaurentPoly> {
        match &self.particular {
            None => vec![],
            Some(f) => {
                let mut out = vec![f.clone()];
                for k in &self.kernel {
                    out.push(f + k);
                }
                out
            }
        }
    }

    pub fn unique(&self) -> Option<&LaurentPoly> {
        match (&self.particular, self.kernel.is_empty()) {
            (Some(f), true) => Some(f),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.particular.is_none()
    }
}

/// Finds all `d`-homogeneous `F` with `v_d(F) = rho + sigma`,
/// `[F, P] = P` and y-degree at most `max_ydeg`, by solving one exact
/// linear system over the support line. An empty result certifies
/// nonexistence below the bound.
pub fn solve_f(phom: &LaurentPoly, d: Direction, max_ydeg: u32) -> Result<FSolutions, HomogError> {
    if phom.is_zero() {
        return Err(HomogError::ZeroPolynomial);
    }
    if !is_homogeneous(phom, d) {
        return Err(HomogError::NotHomogeneous(d));
    }
    if v_degree(phom, d) == DegreeValue::Finite(Q::zero()) {
        return Err(HomogError::DegreeZero(d));
    }
    if d.rho == 0 {
        return Err(HomogError::UnsupportedDirection(d));
    }
    // Admissible support: v_d = rho + sigma, 0 <= y <= max_ydeg,
    // x in (1/l)Z with l = lcm(ram(P), rho).
    let l = phom.ramification_index().lcm(&BigInt::from(d.rho.abs()));
    let target = qi(d.rho + d.sigma);
    let mut points: Vec<ExpPoint> = Vec::new();
    for t in 0..=max_ydeg {
        let x = (&target - &qi(d.sigma * t as i64)) / qi(d.rho);
        if (&x * Q::from_integer(l.clone())).is_integer() {
            points.push(ExpPoint::new(x, t));
        }
    }
    if points.is_empty() {
        return Ok(FSolutions {
            particular: None,
            kernel: vec![],
            max_ydeg,
        });
    }
    // Row space: monomials of [F, P] and of P.
    let mut row_index: Vec<ExpPoint> = Vec::new();
    let index_of = |e: ExpPoint, rows: &mut Vec<ExpPoint>| -> usize {
        match rows.iter().position(|r| *r == e) {
            Some(i) => i,
            None => {
                rows.push(e);
                rows.len() - 1
            }
        }
    };
    let mut entries: Vec<(usize, usize, Q)> = Vec::new();
    for (j, fpt) in points.iter().enumerate() {
        for (ppt, pc) in phom.terms() {
            // [x^a y^t, x^b y^s] = (a s - b t) x^(a+b-1) y^(t+s-1)
            let coeff = &(&fpt.xexp * &qi(ppt.yexp as i64)) - &(&ppt.xexp * &qi(fpt.yexp as i64));
            if coeff.is_zero() {
                continue;
            }
            if fpt.yexp + ppt.yexp == 0 {
                continue; // d/dy of a y-free product contributes nothing
            }
            let e = ExpPoint::new(&(&fpt.xexp + &ppt.xexp) - &qi(1), fpt.yexp + ppt.yexp - 1);
            let r = index_of(e, &mut row_index);
            entries.push((r, j, coeff * pc));
        }
    }
    let mut rhs_entries: Vec<(usize, Q)> = Vec::new();
    for (ppt, pc) in phom.terms() {
        let r = index_of(ppt.clone(), &mut row_index);
        rhs_entries.push((r, pc.clone()));
    }
    let nrows = row_index.len();
    let ncols = points.len();
    let mut a = vec![vec![Q::zero(); ncols]; nrows];
    for (r, c, v) in entries {
        let cur = &a[r][c] + &v;
        a[r][c] = cur;
    }
    let mut b = vec![Q::zero(); nrows];
    for (r, v) in rhs_entries {
        let cur = &b[r] + &v;
        b[r] = cur;
    }
    let Some(sol) = linsolve::solve(&a, &b, ncols) else {
        return Ok(FSolutions {
            particular: None,
            kernel: vec![],
            max_ydeg,
        });
    };
    let to_poly = |coeffs: &[Q]| -> LaurentPoly {
        let mut f = LaurentPoly::zero();
        for (j, c) in coeffs.iter().enumerate() {
            f.add_term(points[j].clone(), c.clone());
        }
        f
    };
    let particular = to_poly(&sol.particular);
    debug_assert_eq!(bracket(&particular, phom), *phom);
    let kernel: Vec<LaurentPoly> = sol
        .kernel_basis
        .iter()
        .map(|v| to_poly(v))
        .filter(|k| !k.is_zero())
        .collect();
    Ok(FSolutions {
        particular: Some(particular),
        kernel,
        max_ydeg,
    })
}

/// Outcome of one clause of the `[F,P] = P` structure report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Clause {
    Pass(String),
    Vacuous(String),
    Fail(String),
}

impl Clause {
    pub fn failed(&self) -> bool {
        matches!(self, Clause::Fail(_))
    }
}

/// Structure report for a pair `(P, F)` with `[F, l_d(P)] = l_d(P)`:
/// separability and divisibility of the slices, endpoint growth,
/// `z^k`-contracted statements, and the equal-multiplicity consequence.
#[derive(Clone, Debug)]
pub struct PavadassReport {
    pub separability: Clause,
    pub endpoint_growth: Clause,
    pub contracted: Clause,
    pub equal_multiplicities: Clause,
}

impl PavadassReport {
    pub fn all_pass(&self) -> bool {
        !(self.separability.failed()
            || self.endpoint_growth.failed()
            || self.contracted.failed()
            || self.equal_multiplicities.failed())
    }
}

pub fn check_pavadass(
    phom: &LaurentPoly,
    f: &LaurentPoly,
    d: Direction,
) -> Result<PavadassReport, HomogError> {
    if d.rho <= 0 {
        return Err(HomogError::PreconditionFailed(format!(
            "rho > 0 required, direction is {d}"
        )));
    }
    for g in [phom, f] {
        if g.is_zero() {
            return Err(HomogError::ZeroPolynomial);
        }
        if !is_homogeneous(g, d) {
            return Err(HomogError::NotHomogeneous(d));
        }
    }
    if bracket(f, phom) != *phom {
        return Err(HomogError::PreconditionFailed("[F, P] != P".to_string()));
    }
    let sp = slice_any_rho(phom, d)?;
    let sfp = squarefree_data(&sp.poly)?;
    let sf = slice_any_rho(f, d)?;
    // (1) f separable, squarefree part of p divides f.
    let separability = if !sf.poly.is_separable() {
        Clause::Fail("slice of F is not separable".to_string())
    } else if !sfp.squarefree_part.divides(&sf.poly) {
        Clause::Fail("squarefree part of p does not divide f".to_string())
    } else {
        Clause::Pass("f separable; rad(p) | f".to_string())
    };
    // (2) deg p > 0 implies v_{0,1}(st F) < v_{0,1}(en F).
    let endpoint_growth = if sp.poly.is_constant() {
        Clause::Vacuous("deg p = 0".to_string())
    } else {
        let (s, e) = endpoints(f, d)?;
        if s.y < e.y {
            Clause::Pass(format!("st_y = {} < en_y = {}", s.y, e.y))
        } else {
            Clause::Fail(format!("st_y = {} >= en_y = {}", s.y, e.y))
        }
    };
    // (3) the z^k-contracted statement when both slices lie in Q[z^k].
    let kp = sp.poly.exponent_gcd();
    let kf = sf.poly.exponent_gcd();
    let k = kp.gcd(&kf);
    let contracted = if k <= 1 {
        Clause::Vacuous("slices have no common z^k structure".to_string())
    } else {
        let pbar = sp.poly.contract(k).unwrap();
        let fbar = sf.poly.contract(k).unwrap();
        let sf_pbar = squarefree_data(&pbar)?;
        if !fbar.is_separable() {
            Clause::Fail(format!("contracted f (k = {k}) is not separable"))
        } else if !sf_pbar.squarefree_part.divides(&fbar) {
            Clause::Fail(format!("rad(pbar) does not divide fbar (k = {k})"))
        } else {
            Clause::Pass(format!("contracted statement holds with k = {k}"))
        }
    };
    // (4) P, F in L and en_y(F) - st_y(F) = rho: every linear-factor
    // multiplicity of p equals deg(p)/rho.
    let equal_multiplicities = if !(phom.is_in_l() && f.is_in_l()) {
        Clause::Vacuous("inputs are not both in L".to_string())
    } else {
        let (sfs, sfe) = endpoints(f, d)?;
        let gap = &sfe.y - &sfs.y;
        if gap != qi(d.rho) {
            Clause::Vacuous(format!("y-gap of F is {gap}, not rho = {}", d.rho))
        } else if sp.poly.is_constant() {
            Clause::Vacuous("p is constant".to_string())
        } else {
            let expected = qi(sp.poly.degree() as i64) / qi(d.rho);
            let uniform = sfp
                .profile
                .iter()
                .all(|(_, mult)| qi(*mult as i64) == expected);
            if uniform {
                Clause::Pass(format!("all multiplicities equal deg(p)/rho = {expected}"))
            } else {
                Clause::Fail(format!(
                    "multiplicity profile {:?} not uniformly deg(p)/rho = {expected}",
                    sfp.profile
                ))
            }
        }
    };
    Ok(PavadassReport {
        separability,
        endpoint_growth,
        contracted,
        equal_multiplicities,
    })
}

/// The five mutually exclusive corner cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum CornerCase {
    Ia,
    Ib,
    IIa,
    IIb,
    III,
}

impl std::fmt::Display for CornerCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CornerCase::Ia => "I.a",
            CornerCase::Ib => "I.b",
            CornerCase::IIa => "II.a",
            CornerCase::IIb => "II.b",
            CornerCase::III => "III",
        };
        write!(f, "{s}")
    }
}

/// Classifies a corner from the two leading forms: case I by bracket and
/// start alignment, case III when the slice is a single shifted power
/// `mu (z - lambda)^r` with `lambda != 0`, case II otherwise split by the
/// sign of `v_{1,-1}(st(P))`.
pub fn classify_case(
    pl: &LaurentPoly,
    ql: &LaurentPoly,
    d: Direction,
) -> Result<CornerCase, HomogError> {
    for g in [pl, ql] {
        if g.is_zero() {
            return Err(HomogError::ZeroPolynomial);
        }
        if !is_homogeneous(g, d) {
            return Err(HomogError::NotHomogeneous(d));
        }
    }
    let (st_p, _) = endpoints(pl, d)?;
    let v11 = &st_p.x - &st_p.y;
    if v11.is_zero() {
        return Err(HomogError::DegenerateStart);
    }
    let br = bracket(pl, ql);
    if !br.is_zero() {
        let (st_q, _) = endpoints(ql, d)?;
        return Ok(if aligned(&st_p, &st_q) {
            CornerCase::Ia
        } else {
            CornerCase::Ib
        });
    }
    if d.rho <= 0 {
        return Err(HomogError::UnsupportedDirection(d));
    }
    let sl = slice_any_rho(pl, d)?;
    if sl.poly.is_constant() {
        // l_d(P) a monomial: outside the five-case trichotomy.
        return Err(HomogError::MonomialLeadingForm);
    }
    let sf = squarefree_data(&sl.poly)?;
    let is_single_power = sl.yshift == 0 && sf.squarefree_part.degree() == 1;
    if is_single_power {
        // p = mu (z - lambda)^r with lambda in Q automatically (and != 0
        // because p(0) != 0).
        return Ok(CornerCase::III);
    }
    Ok(match q_sign(&v11) {
        -1 => CornerCase::IIa,
        1 => CornerCase::IIb,
        _ => unreachable!(),
    })
}

/// Diagonal intersection ordinate of the line through `Supp(l_d(P))` when
/// the corner is `(a/l, b)` with multiplier `m`:
/// `lambda = (m/l) (a rho + b l sigma) / (rho + sigma)`.
pub fn diagonal_lambda(corner: &PlanePoint, m: i64, d: Direction) -> Q {
    let v = d.v_point(corner);
    &(&v * &qi(m)) / &qi(d.rho + d.sigma)
}
