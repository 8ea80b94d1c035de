//! Corner-candidate enumeration with a pluggable filter ladder.
//!
//! Each admissible primitive corner `A0 = (u,v)` spawns one candidate row
//! per scaled end point `(f1,f2)` of the `F` element. Filters are
//! individually addressable strategies behind [`CandidateFilter`],
//! registered by name and selected at runtime through a [`FilterProfile`],
//! so each elimination records which rule fired and why.

use crate::direction::{cross, dir_of, Direction};
use crate::rational::{q, q_floor, q_str, qi, PlanePoint};
use num_integer::Integer;

use serde::Serialize;
use std::fmt;

/// One `(A0', gamma)` resolution of a candidate, with the induced next
/// corner `A^(1)`.
#[derive(Clone, Debug, Serialize)]
pub struct CandidateBranch {
    pub a0_prime: (i64, i64),
    pub gamma: i64,
    /// `A^(1) = A0' + (gamma - s')(-sigma/rho, 1)`, coordinates over
    /// `l' = rho`.
    pub a1_num: i64,
    pub a1_den: i64,
    pub a1_y: i64,
    /// `l' - a'/b'`, the criterion quantity for `A^(1)`.
    pub lprime_minus_ab: String,
    /// Set when the corner's leading form is certified to be at most an
    /// `m`-th power, so the criterion at `A^(1)` must hold through its
    /// type-I clause alone.
    pub requires_type_i: bool,
    /// Whether the branch passed every enabled filter.
    pub alive: bool,
    /// Name of the filter that killed the branch, if any.
    pub killed_by: Option<String>,
}

impl CandidateBranch {
    pub fn a1(&self) -> PlanePoint {
        PlanePoint::new(q(self.a1_num, self.a1_den), qi(self.a1_y))
    }
}

/// Verdict of one filter on one candidate row.
#[derive(Clone, Debug, Serialize)]
pub struct FilterVerdict {
    pub filter: String,
    pub pass: bool,
    pub detail: String,
}

/// One enumeration record, mirroring a table row.
#[derive(Clone, Debug, Serialize)]
pub struct CandidateCorner {
    pub a0: (i64, i64),
    pub f_end: (i64, i64),
    /// `mu = f1/u` in lowest terms.
    pub mu: String,
    pub dir: Direction,
    pub a0_prime_options: Vec<(i64, i64)>,
    /// `d = gcd(f1 - 1, f2 - 1)`.
    pub dgcd: i64,
    pub gamma_options: Vec<i64>,
    pub branches: Vec<CandidateBranch>,
    pub verdicts: Vec<FilterVerdict>,
    pub survives: bool,
}

impl CandidateCorner {
    pub fn q0(&self) -> i64 {
        let g = self.f_end.0.gcd(&self.a0.0);
        self.a0.0 / g
    }
}

/// Profile selecting which filters run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FilterProfile {
    /// The first-bound ladder: `v > u > 2`, `gcd(u,v) > 1`, existence of
    /// `A0'`, the forced `gamma`, and the `A^(1)` criterion.
    Table1,
    /// The full ladder: `3 < u < v <= u(u-1)`, `gcd(u,v) > 2`, plus the
    /// direction bound, `q0 != 2`, the impossible-direction rule, and the
    /// type-II second stage.
    Full,
}

impl FilterProfile {
    pub fn name(&self) -> &'static str {
        match self {
            FilterProfile::Table1 => "table1",
            FilterProfile::Full => "full",
        }
    }

    pub fn parse(s: &str) -> Option<FilterProfile> {
        match s {
            "table1" => Some(FilterProfile::Table1),
            "full" => Some(FilterProfile::Full),
            _ => None,
        }
    }

    /// Admissibility of the base pair `(u, v)` under this profile.
    fn admits_uv(&self, u: i64, v: i64, sum_min: i64, sum_max: i64) -> bool {
        let sum = u + v;
        if sum < sum_min || sum > sum_max || u >= v {
            return false;
        }
        match self {
            FilterProfile::Table1 => u > 2 && v.gcd(&u) > 1,
            FilterProfile::Full => u > 3 && v <= u * (u - 1) && v.gcd(&u) > 2,
        }
    }
}

/// A named, individually addressable elimination rule. Filters run in
/// registry order; each appends a verdict and may kill row branches.
pub trait CandidateFilter: Sync {
    fn name(&self) -> &'static str;
    fn apply(&self, cand: &mut CandidateCorner);
}

/// The filter registry for a profile, in ladder order.
pub fn filter_registry(profile: FilterProfile) -> Vec<Box<dyn CandidateFilter>> {
    let mut ladder: Vec<Box<dyn CandidateFilter>> = Vec::new();
    if profile == FilterProfile::Full {
        ladder.push(Box::new(RhoAtMostU));
        ladder.push(Box::new(QZeroNotTwo));
    }
    ladder.push(Box::new(A0PrimeExists));
    if profile == FilterProfile::Full {
        ladder.push(Box::new(GammaPrimeGuard));
        ladder.push(Box::new(PowerCertification));
    }
    ladder.push(Box::new(GammaExists));
    ladder.push(Box::new(Condition8));
    if profile == FilterProfile::Full {
        ladder.push(Box::new(Impossibles));
        ladder.push(Box::new(TypeIiMuStage));
    }
    ladder
}

fn push_verdict(cand: &mut CandidateCorner, name: &str, pass: bool, detail: String) {
    cand.verdicts.push(FilterVerdict {
        filter: name.to_string(),
        pass,
        detail,
    });
    if !pass {
        cand.survives = false;
    }
}

/// `rho <= u` (the direction of the F-edge cannot exceed the corner width).
struct RhoAtMostU;

impl CandidateFilter for RhoAtMostU {
    fn name(&self) -> &'static str {
        "rho-le-u"
    }
    fn apply(&self, cand: &mut CandidateCorner) {
        let pass = cand.dir.rho <= cand.a0.0;
        push_verdict(
            cand,
            self.name(),
            pass,
            format!("rho = {} vs u = {}", cand.dir.rho, cand.a0.0),
        );
    }
}

/// `q0 != 2` where `mu = p0/q0` in lowest terms.
struct QZeroNotTwo;

impl CandidateFilter for QZeroNotTwo {
    fn name(&self) -> &'static str {
        "q0-ne-2"
    }
    fn apply(&self, cand: &mut CandidateCorner) {
        let q0 = cand.q0();
        push_verdict(cand, self.name(), q0 != 2, format!("q0 = {q0}"));
    }
}

/// Existence of `A0' = (r', s')` with `0 <= s' < r' < u` and
/// `v_d(A0') = v_d(A0)`.
struct A0PrimeExists;

impl CandidateFilter for A0PrimeExists {
    fn name(&self) -> &'static str {
        "a0prime-exists"
    }
    fn apply(&self, cand: &mut CandidateCorner) {
        let pass = !cand.a0_prime_options.is_empty();
        push_verdict(
            cand,
            self.name(),
            pass,
            if pass {
                format!("options {:?}", cand.a0_prime_options)
            } else {
                "no (r',s') with s' < r' < u on the corner line".to_string()
            },
        );
    }
}

/// The prime-guard cut: when `A0 = (1,0) + r (1, rho)` with `sigma = -1`,
/// `A0' = (1,0)` and (`gcd(r, rho) = 1` or `rho` prime), the leading form
/// is at most an `m`-th power, forcing `gamma (rho - 2) > rho`.
struct GammaPrimeGuard;

impl CandidateFilter for GammaPrimeGuard {
    fn name(&self) -> &'static str {
        "gamma-prime-guard"
    }
    fn apply(&self, cand: &mut CandidateCorner) {
        let (u, v) = cand.a0;
        let (rho, sigma) = (cand.dir.rho, cand.dir.sigma);
        let r = u - 1;
        let guard = sigma == -1 && r >= 1 && v == r * rho && (r.gcd(&rho) == 1 || is_prime(rho));
        if !guard {
            push_verdict(cand, self.name(), true, "guard shape not met".to_string());
            return;
        }
        let mut any = cand.branches.is_empty();
        let mut killed = Vec::new();
        for br in cand.branches.iter_mut().filter(|b| b.alive) {
            if br.a0_prime == (1, 0) && br.gamma * (rho - 2) <= rho {
                br.alive = false;
                br.killed_by = Some(self.name().to_string());
                killed.push(br.gamma);
            } else {
                any = true;
            }
        }
        push_verdict(
            cand,
            self.name(),
            any,
            format!("gamma(rho-2) > rho required; killed gamma {killed:?}"),
        );
    }
}

/// Certifies, from the corner data alone, that the leading form can be at
/// most an `m`-th power: any higher root `R = c S^e` with `e = d > 1` must
/// satisfy `d | v`, `d | s'` (when `s' > 0`), `d | rho r'`, `d | rho u` and
/// `d | (v - s')/rho`, and is excluded outright when `v_d(A0)` divides
/// `d (rho + sigma)` (a commuting element of degree `rho + sigma` would
/// exist, contradicting the uniqueness of `F`). With no admissible `d`,
/// the criterion at `A^(1)` must hold through its type-I clause.
struct PowerCertification;

impl CandidateFilter for PowerCertification {
    fn name(&self) -> &'static str {
        "power-certification"
    }
    fn apply(&self, cand: &mut CandidateCorner) {
        let (u, v) = cand.a0;
        let (rho, sigma) = (cand.dir.rho, cand.dir.sigma);
        let v_a0 = rho * u + sigma * v;
        let mut details = Vec::new();
        for br in cand.branches.iter_mut().filter(|b| b.alive) {
            let (rp, sp) = br.a0_prime;
            if (v - sp) % rho != 0 {
                continue;
            }
            let mut cap = v.gcd(&(rho * rp)).gcd(&(rho * u)).gcd(&((v - sp) / rho));
            if sp > 0 {
                cap = cap.gcd(&sp);
            }
            let admissible: Vec<i64> = (2..=cap)
                .filter(|d| cap % d == 0 && (d * (rho + sigma)) % v_a0 != 0)
                .collect();
            if admissible.is_empty() {
                br.requires_type_i = true;
                details.push(format!(
                    "A0'=({rp},{sp}): cap {cap}, certified at most an m-th power"
                ));
            } else {
                details.push(format!("A0'=({rp},{sp}): roots {admissible:?} possible"));
            }
        }
        push_verdict(cand, self.name(), true, details.join("; "));
    }
}

/// Existence of an admissible `gamma` branch (after the forced value for
/// `d = 1` and the strict diagonal bound).
struct GammaExists;

impl CandidateFilter for GammaExists {
    fn name(&self) -> &'static str {
        "gamma-exists"
    }
    fn apply(&self, cand: &mut CandidateCorner) {
        let pass = cand.branches.iter().any(|b| b.alive);
        push_verdict(
            cand,
            self.name(),
            pass,
            if pass {
                format!("gamma options {:?}", cand.gamma_options)
            } else {
                "no admissible multiplicity gamma".to_string()
            },
        );
    }
}

/// The `A^(1)` criterion: `l' - a'/b' > 1` or `gcd(a', b') > 1`.
struct Condition8;

impl CandidateFilter for Condition8 {
    fn name(&self) -> &'static str {
        "condition-8"
    }
    fn apply(&self, cand: &mut CandidateCorner) {
        let mut any = false;
        let mut details = Vec::new();
        for br in cand.branches.iter_mut().filter(|b| b.alive) {
            let type_i = qi(br.a1_den) - q(br.a1_num, br.a1_y) > qi(1);
            let ok = if br.requires_type_i {
                type_i
            } else {
                check_condition8(br.a1_num, br.a1_y, br.a1_den)
            };
            if !ok {
                br.alive = false;
                br.killed_by = Some(self.name().to_string());
            }
            any |= ok;
            details.push(format!(
                "A1=({}/{},{}): {}{}",
                br.a1_num,
                br.a1_den,
                br.a1_y,
                if ok { "pass" } else { "fail" },
                if br.requires_type_i {
                    " (type-I clause forced)"
                } else {
                    ""
                }
            ));
        }
        push_verdict(cand, self.name(), any, details.join("; "));
    }
}

/// Passes iff `l' - a'/b' > 1` or `gcd(a', b') > 1`, for
/// `A^(1) = (a'/l', b')`.
pub fn check_condition8(a_num: i64, b: i64, lprime: i64) -> bool {
    assert!(b >= 1);
    let crit = qi(lprime) - q(a_num, b);
    crit > qi(1) || a_num.gcd(&b) > 1
}

/// The impossible-direction rule: fail iff `d = (2,-1)` and
/// (`v_{2,-1}(A0) <= 3` or `A0 = (8,12)`).
struct Impossibles;

impl CandidateFilter for Impossibles {
    fn name(&self) -> &'static str {
        "impossibles"
    }
    fn apply(&self, cand: &mut CandidateCorner) {
        let (pass, detail) = filter_impossibles(cand.a0, cand.dir);
        push_verdict(cand, self.name(), pass, detail);
    }
}

/// Standalone form of the impossible-direction rule.
pub fn filter_impossibles(a0: (i64, i64), d: Direction) -> (bool, String) {
    if d != Direction::of(2, -1) {
        return (true, "direction is not (2,-1)".to_string());
    }
    let v = 2 * a0.0 - a0.1;
    if v <= 3 {
        return (false, format!("v_(2,-1)(A0) = {v} <= 3"));
    }
    if a0 == (8, 12) {
        return (false, "A0 = (8,12) at (2,-1)".to_string());
    }
    (true, format!("v_(2,-1)(A0) = {v}"))
}

/// Second stage for branches that pass the criterion only through the gcd
/// clause: the corner at `A^(1)` would have to be of type II, which forces
/// the `mu` enumeration and the follow-up start-corner criterion.
struct TypeIiMuStage;

impl CandidateFilter for TypeIiMuStage {
    fn name(&self) -> &'static str {
        "type-ii-mu"
    }
    fn apply(&self, cand: &mut CandidateCorner) {
        let mut any = false;
        let mut details = Vec::new();
        let mut touched = false;
        let q0 = cand.q0();
        let (u0, v0) = cand.a0;
        let rho0 = cand.dir.rho;
        for br in cand.branches.iter_mut().filter(|b| b.alive) {
            let lprime = br.a1_den;
            let crit = qi(lprime) - q(br.a1_num, br.a1_y);
            if crit > qi(1) {
                // Type I possible at A^(1): no mu stage for this branch.
                any = true;
                continue;
            }
            touched = true;
            let d1_cap = (rho0 * u0).gcd(&v0).gcd(&br.a1_num.gcd(&br.a1_y));
            match typeii_mu_with_chain(br.a1_num, br.a1_y, lprime, q0, d1_cap) {
                Ok(rep) => {
                    details.push(format!(
                        "A1=({}/{},{}): {}",
                        br.a1_num, br.a1_den, br.a1_y, rep.summary
                    ));
                    if rep.pass {
                        any = true;
                    } else {
                        br.alive = false;
                        br.killed_by = Some(self.name().to_string());
                    }
                }
                Err(e) => {
                    // gcd(a,b) = 1 cannot reach this stage: condition 8
                    // already failed. Record defensively.
                    details.push(format!("unexpected: {e}"));
                    br.alive = false;
                    br.killed_by = Some(self.name().to_string());
                }
            }
        }
        if !touched && any {
            push_verdict(
                cand,
                self.name(),
                true,
                "no branch required mu stage".into(),
            );
        } else {
            push_verdict(cand, self.name(), any, details.join("; "));
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MuStageError {
    #[error("gcd(a,b) = 1: the corner cannot be of type II")]
    NotTypeIICandidate,
}

/// Report of the type-II `mu` enumeration at a hypothesized corner
/// `(a/l', b)`.
#[derive(Clone, Debug)]
pub struct MuStageReport {
    /// Candidate `mu` values (`d` does not divide `mu`,
    /// `mu <= floor(l'(b l' - a) + 1/b_bar)`).
    pub mu_candidates: Vec<i64>,
    /// Per-`mu` trail: `(mu, rho1/gcd(rho1,l'), survived-first-stage,
    /// follow-up corners that pass the criterion)`.
    pub trail: Vec<MuTrail>,
    pub pass: bool,
    pub summary: String,
}

#[derive(Clone, Debug)]
pub struct MuTrail {
    pub mu: i64,
    pub dir1: Direction,
    pub rho1_reduced: i64,
    pub first_stage_ok: bool,
    pub followup_corners: Vec<(i64, i64)>,
    pub followup_pass: bool,
}

/// Enumerates admissible `mu` for a type-II corner at `(a/l', b)` and runs
/// the forced start-corner criterion for each survivor; follow-up corners
/// that pass the criterion only through the gcd clause are themselves
/// forced type-II corners and recurse, with strictly decreasing `b`.
pub fn filter_typeii_mu(a: i64, b: i64, lprime: i64) -> Result<MuStageReport, MuStageError> {
    filter_typeii_mu_fuel(a, b, lprime, MU_STAGE_DEPTH)
}

/// Depth-limited form: `fuel` counts the remaining nested `mu` stages; at
/// zero the follow-up criterion alone decides.
pub fn filter_typeii_mu_fuel(
    a: i64,
    b: i64,
    lprime: i64,
    fuel: u32,
) -> Result<MuStageReport, MuStageError> {
    if a.gcd(&b) <= 1 {
        return Err(MuStageError::NotTypeIICandidate);
    }
    let (mu_candidates, trail) = mu_stage(a, b, lprime, fuel);
    let pass = trail.iter().any(|t| t.first_stage_ok && t.followup_pass);
    let summary = format!(
        "mu candidates {:?}; survivors {:?}",
        mu_candidates,
        trail
            .iter()
            .filter(|t| t.first_stage_ok && t.followup_pass)
            .map(|t| t.mu)
            .collect::<Vec<_>>()
    );
    Ok(MuStageReport {
        mu_candidates,
        trail,
        pass,
        summary,
    })
}

/// Number of nested `mu` stages the full ladder runs before falling back
/// to the bare criterion.
pub const MU_STAGE_DEPTH: u32 = 2;

/// Divisibility data of the once-cut pair's two-corner chain
/// `(A^(1), (rho',sigma')) < (A0, (rho,sigma))`: the `F` denominator `q0`
/// carried over from the primitive corner, and
/// `D1 = gcd(a1, b1, a0, b0)` over the cut ambient.
#[derive(Clone, Copy)]
struct ChainCtx {
    q0: i64,
    d1_cap: i64,
}

/// One level of the `mu` enumeration at a type-II corner point.
fn mu_stage(a: i64, b: i64, lprime: i64, fuel: u32) -> (Vec<i64>, Vec<MuTrail>) {
    mu_stage_chained(a, b, lprime, fuel, None)
}

fn mu_stage_chained(
    a: i64,
    b: i64,
    lprime: i64,
    fuel: u32,
    chain: Option<ChainCtx>,
) -> (Vec<i64>, Vec<MuTrail>) {
    let d = a.gcd(&b);
    let abar = a / d;
    let bbar = b / d;
    let bound = q_floor(&(qi(lprime) * qi(b * lprime - a) + q(1, bbar)));
    let bound: i64 = (&bound).try_into().unwrap_or(0);
    let mut mu_candidates = Vec::new();
    for mu in 1..=bound.max(0) {
        if mu % d != 0 {
            mu_candidates.push(mu);
        }
    }
    if let Some(ctx) = chain {
        // en(F~0) = (mu/d) A^(1) reduced: the denominator q~0 = d/gcd(mu,d)
        // must not be a multiple of q~1 = q0, and must divide some
        // d~1 | D1 (with Omega(d~1) >= 1).
        mu_candidates.retain(|mu| {
            let qt0 = d / mu.gcd(&d);
            qt0 % ctx.q0 != 0 && ctx.d1_cap % qt0 == 0
        });
    }
    let mut trail = Vec::new();
    for &mu in &mu_candidates {
        // (rho1, sigma1) = dir(mu*abar - l', mu*bbar*l' - l')
        let px = mu * abar - lprime;
        let py = mu * bbar * lprime - lprime;
        let d1 = match dir_of(&PlanePoint::from_ints(px, py)) {
            Ok(d1) => d1,
            Err(_) => continue,
        };
        let rho1_reduced = d1.rho / d1.rho.gcd(&lprime);
        let first_stage_ok = rho1_reduced <= b && d1.in_interval_i();
        let mut followup_corners = Vec::new();
        let mut followup_pass = false;
        if first_stage_ok {
            // The hypothesized corner forces a regular corner at
            // st_{d1}(P)/m: a point (a''/l', b'') on the same d1-line with
            // 1 <= b'' < b and b'' > a''/l', over the pair's own ambient.
            let v_scaled = d1.rho * a + d1.sigma * b * lprime;
            for b2 in 1..b {
                let num = v_scaled - d1.sigma * b2 * lprime;
                if num % d1.rho != 0 {
                    continue;
                }
                let a2 = num / d1.rho;
                if qi(b2) <= q(a2, lprime) {
                    continue;
                }
                followup_corners.push((a2, b2));
                if corner_point_viable(a2, b2, lprime, fuel.saturating_sub(1)) {
                    followup_pass = true;
                }
            }
        }
        trail.push(MuTrail {
            mu,
            dir1: d1,
            rho1_reduced,
            first_stage_ok,
            followup_corners,
            followup_pass,
        });
    }
    (mu_candidates, trail)
}

/// The first criterion at a corner point `(a/l, b)`, with the type-II
/// branch expanded recursively: a type-I corner needs `l - a/b > 1`, a
/// type-II corner needs `gcd(a,b) > 1` and some admissible `mu` whose
/// forced next corner is itself viable. Recursion terminates because the
/// y-coordinate strictly decreases.
fn corner_point_viable(a: i64, b: i64, l: i64, fuel: u32) -> bool {
    if qi(l) - q(a, b) > qi(1) {
        return true;
    }
    if a.gcd(&b) <= 1 {
        return false;
    }
    if fuel == 0 {
        return true;
    }
    let (_, trail) = mu_stage(a, b, l, fuel);
    trail.iter().any(|t| t.first_stage_ok && t.followup_pass)
}

/// The full-ladder form of the second stage, with the two-corner chain
/// divisibility of the cut pair enforced on `mu`.
pub(crate) fn typeii_mu_with_chain(
    a: i64,
    b: i64,
    lprime: i64,
    q0: i64,
    d1_cap: i64,
) -> Result<MuStageReport, MuStageError> {
    if a.gcd(&b) <= 1 {
        return Err(MuStageError::NotTypeIICandidate);
    }
    let (mu_candidates, trail) =
        mu_stage_chained(a, b, lprime, MU_STAGE_DEPTH, Some(ChainCtx { q0, d1_cap }));
    let pass = trail.iter().any(|t| t.first_stage_ok && t.followup_pass);
    let summary = format!(
        "mu candidates {:?}; survivors {:?}",
        mu_candidates,
        trail
            .iter()
            .filter(|t| t.first_stage_ok && t.followup_pass)
            .map(|t| t.mu)
            .collect::<Vec<_>>()
    );
    Ok(MuStageReport {
        mu_candidates,
        trail,
        pass,
        summary,
    })
}

/// Builds the raw candidate row for `(u, v)` and `(f1, f2)`, resolving
/// `A0'` options, `gamma` options and `A^(1)` per branch. Filters are not
/// yet applied.
fn build_candidate(u: i64, v: i64, f1: i64, f2: i64) -> CandidateCorner {
    let g = (f1 - 1).gcd(&(f2 - 1));
    let dir = Direction::of((f2 - 1) / g, (1 - f1) / g);
    let (rho, sigma) = (dir.rho, dir.sigma);
    let vdeg = rho * u + sigma * v;
    // A0' options: 0 <= s' < r' < u on the line rho r' + sigma s' = vdeg.
    let mut a0_prime_options = Vec::new();
    for rp in 1..u {
        let rem = vdeg - rho * rp;
        if sigma == 0 {
            continue;
        }
        if rem % sigma != 0 {
            continue;
        }
        let sp = rem / sigma;
        if sp >= 0 && sp < rp {
            a0_prime_options.push((rp, sp));
        }
    }
    let dgcd = g;
    // Diagonal bound: gamma > (u rho + v sigma) / (rho + sigma), strictly.
    let diag = q(vdeg, rho + sigma);
    let mut branches = Vec::new();
    let mut gamma_options = Vec::new();
    for &(rp, sp) in &a0_prime_options {
        let gammas: Vec<i64> = if dgcd == 1 {
            // gamma = (v - s')/rho exactly, provided it is an integer.
            if (v - sp) % rho == 0 {
                vec![(v - sp) / rho]
            } else {
                vec![]
            }
        } else {
            let hi = (v - sp).div_euclid(rho);
            (1..=hi).collect()
        };
        for gamma in gammas {
            if qi(gamma) <= diag {
                continue;
            }
            if !gamma_options.contains(&gamma) {
                gamma_options.push(gamma);
            }
            // A^(1) = (r', s') + (gamma - s')(-sigma/rho, 1)
            //       = ((rho r' - sigma (gamma - s'))/rho, gamma)
            let a1_num = rho * rp - sigma * (gamma - sp);
            let lab = qi(rho) - q(a1_num, gamma); // l' - a'/b'
            branches.push(CandidateBranch {
                a0_prime: (rp, sp),
                gamma,
                a1_num,
                a1_den: rho,
                a1_y: gamma,
                lprime_minus_ab: q_str(&lab),
                requires_type_i: false,
                alive: true,
                killed_by: None,
            });
        }
    }
    let mug = f1.gcd(&u);
    let mu = format!("{}/{}", f1 / mug, u / mug);
    CandidateCorner {
        a0: (u, v),
        f_end: (f1, f2),
        mu,
        dir,
        a0_prime_options,
        dgcd,
        gamma_options,
        branches,
        verdicts: Vec::new(),
        survives: true,
    }
}

fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Runs the registry over one candidate row.
fn run_filters(cand: &mut CandidateCorner, ladder: &[Box<dyn CandidateFilter>]) {
    for f in ladder {
        f.apply(cand);
    }
    // A candidate survives only if some branch stayed alive through every
    // branch-level filter as well.
    if cand.survives && !cand.branches.is_empty() {
        cand.survives = cand.branches.iter().any(|b| b.alive);
    }
}

/// Enumerates all candidate rows with `sum_min <= u + v <= sum_max` under
/// the profile's ladder, in `(u, v, f1)` order. Parallel across `(u, v)`
/// pairs with a deterministic merge; `NEWTON_SHAPE_THREADS` caps the worker
/// count.
pub fn enumerate_candidates(
    sum_min: i64,
    sum_max: i64,
    profile: FilterProfile,
) -> Vec<CandidateCorner> {
    let mut pairs: Vec<(i64, i64)> = Vec::new();
    for u in 3..=sum_max {
        for v in (u + 1)..=(sum_max - u) {
            if profile.admits_uv(u, v, sum_min, sum_max) {
                pairs.push((u, v));
            }
        }
    }
    let workers = thread_count().min(pairs.len().max(1));
    let mut rows: Vec<CandidateCorner> = if workers <= 1 {
        pairs
            .iter()
            .flat_map(|&(u, v)| candidate_rows(u, v, profile))
            .collect()
    } else {
        let chunks: Vec<&[(i64, i64)]> = pairs.chunks(pairs.len().div_ceil(workers)).collect();
        let mut out: Vec<Vec<CandidateCorner>> = Vec::new();
        std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .into_iter()
                .map(|chunk| {
                    scope.spawn(move || {
                        chunk
                            .iter()
                            .flat_map(|&(u, v)| candidate_rows(u, v, profile))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                out.push(h.join().expect("search worker panicked"));
            }
        });
        out.into_iter().flatten().collect()
    };
    rows.sort_by_key(|c| (c.a0.0, c.a0.1, c.f_end.0));
    rows
}

fn candidate_rows(u: i64, v: i64, profile: FilterProfile) -> Vec<CandidateCorner> {
    let ladder = filter_registry(profile);
    let mut out = Vec::new();
    for f1 in 2..u {
        if (f1 * v) % u != 0 {
            continue;
        }
        let f2 = f1 * v / u;
        let mut cand = build_candidate(u, v, f1, f2);
        run_filters(&mut cand, &ladder);
        out.push(cand);
    }
    out
}

fn thread_count() -> usize {
    if let Ok(s) = std::env::var("NEWTON_SHAPE_THREADS") {
        if let Ok(n) = s.parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Survivor summary of an enumeration: distinct `A0` values with at least
/// one surviving row.
pub fn survivors(rows: &[CandidateCorner]) -> Vec<(i64, i64)> {
    let mut out: Vec<(i64, i64)> = rows.iter().filter(|c| c.survives).map(|c| c.a0).collect();
    out.sort();
    out.dedup();
    out
}

/// The admissible-corner list: all `A0 = (u,v)` with `u + v <= sum_bound`
/// surviving the full ladder, ascending.
pub fn xlist(sum_bound: i64) -> Vec<(i64, i64)> {
    let rows = enumerate_candidates(3, sum_bound, FilterProfile::Full);
    survivors(&rows)
}

/// One candidate extension of the corner chain.
#[derive(Clone, Debug, Serialize)]
pub struct ChainCandidate {
    pub a1: (i64, i64),
    pub dir: Direction,
    /// Killed by the no-vertical-edge rule (`a1 = u` with `u = q0`).
    pub rejected_vertical: bool,
    /// Witnesses `(d1, q1)` satisfying the divisibility constraints, when
    /// the extension is admissible.
    pub divisibility_witness: Option<(i64, i64)>,
}

/// Feasibility report for extending the chain beyond `A0`.
#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub a0: (i64, i64),
    pub q0: i64,
    pub dir0: Direction,
    pub candidates: Vec<ChainCandidate>,
    /// True when no admissible extension exists: `A0` must be the last
    /// corner and `B = u + v` for this configuration.
    pub last_corner: bool,
}

impl fmt::Display for ChainReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "chain analysis for A0 = ({},{}), q0 = {}, direction {}:",
            self.a0.0, self.a0.1, self.q0, self.dir0
        )?;
        for c in &self.candidates {
            if c.rejected_vertical {
                writeln!(
                    f,
                    "  A1 = ({},{}) at {}: rejected (vertical edge at a1 = q0)",
                    c.a1.0, c.a1.1, c.dir
                )?;
            } else {
                writeln!(
                    f,
                    "  A1 = ({},{}) at {}: admissible extension {:?}",
                    c.a1.0, c.a1.1, c.dir, c.divisibility_witness
                )?;
            }
        }
        if self.last_corner {
            writeln!(
                f,
                "  A0 must be the last corner: B = {}",
                self.a0.0 + self.a0.1
            )?;
        }
        Ok(())
    }
}

/// Decides whether any further regular corner is consistent with the
/// divisibility chain and the no-vertical-edge rule, for a given starting
/// corner and `q0`. The direction is recomputed from the `mu = p0/q0`
/// branch of the corner.
pub fn chain_filter(a0: (i64, i64), q0: i64, sum_bound: i64) -> Vec<ChainReport> {
    let (u, v) = a0;
    let mut reports = Vec::new();
    // Each f1 with mu = f1/u reduced denominator q0 spawns one report.
    for f1 in 2..u {
        if (f1 * v) % u != 0 {
            continue;
        }
        let g = f1.gcd(&u);
        if u / g != q0 {
            continue;
        }
        let f2 = f1 * v / u;
        let dg = (f1 - 1).gcd(&(f2 - 1));
        let dir0 = Direction::of((f2 - 1) / dg, (1 - f1) / dg);
        reports.push(chain_filter_at(a0, q0, dir0, sum_bound));
    }
    reports
}

/// Chain feasibility for a fixed starting corner direction.
pub fn chain_filter_at(a0: (i64, i64), q0: i64, dir0: Direction, sum_bound: i64) -> ChainReport {
    let (u, v) = a0;
    let v0 = dir0.rho * u + dir0.sigma * v;
    let mut candidates = Vec::new();
    for a1 in u..=sum_bound {
        for b1 in (a1 + 1)..=(sum_bound - a1) {
            if (a1, b1) == (u, v) {
                continue;
            }
            if a1 % q0 != 0 || b1 % q0 != 0 {
                continue;
            }
            // v_{d0}(A1) <= v_{d0}(A0) and the edge direction lies in
            // ](d0, (1,0)].
            if dir0.rho * a1 + dir0.sigma * b1 > v0 {
                continue;
            }
            let Ok(d1) = dir_of(&PlanePoint::from_ints(a1 - u, b1 - v)) else {
                continue;
            };
            let after_d0 = cross((dir0.rho, dir0.sigma), (d1.rho, d1.sigma)) > 0;
            let upto_10 = cross((d1.rho, d1.sigma), (1, 0)) >= 0;
            if !(after_d0 && upto_10) {
                continue;
            }
            if a1 == u {
                // Vertical edge: forbidden when the corner width equals q0.
                let rejected = u == q0;
                candidates.push(ChainCandidate {
                    a1: (a1, b1),
                    dir: d1,
                    rejected_vertical: rejected,
                    divisibility_witness: if rejected {
                        None
                    } else {
                        divisibility_witness(a0, (a1, b1), q0)
                    },
                });
                continue;
            }
            candidates.push(ChainCandidate {
                a1: (a1, b1),
                dir: d1,
                rejected_vertical: false,
                divisibility_witness: divisibility_witness(a0, (a1, b1), q0),
            });
        }
    }
    // Prune inadmissible non-vertical candidates (no divisibility witness).
    candidates.retain(|c| c.rejected_vertical || c.divisibility_witness.is_some());
    let last_corner = candidates.iter().all(|c| c.rejected_vertical);
    ChainReport {
        a0,
        q0,
        dir0,
        candidates,
        last_corner,
    }
}

/// Searches for `(d1, q1)` with `q0 | d1`, `d1 | gcd(a1,b1,u,v)`,
/// `Omega(d1) >= 1`, `q1 | gcd(a1,b1)`, `q1 > 1`, `q1` dividing neither
/// `d1` nor `q0`.
fn divisibility_witness(a0: (i64, i64), a1: (i64, i64), q0: i64) -> Option<(i64, i64)> {
    let dd = a1.0.gcd(&a1.1).gcd(&a0.0.gcd(&a0.1));
    let g1 = a1.0.gcd(&a1.1);
    for d1 in 1..=dd {
        if dd % d1 != 0 || d1 % q0 != 0 || d1 < 2 {
            continue;
        }
        for q1 in 2..=g1 {
            if g1 % q1 != 0 {
                continue;
            }
            if d1 % q1 == 0 || q0 % q1 == 0 {
                continue;
            }
            return Some((d1, q1));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_admissible_pairs() {
        let rows = enumerate_candidates(3, 8, FilterProfile::Table1);
        assert!(rows.is_empty());
        // (3,6) with (f1,f2) = (2,4) is the first admissible row.
        let rows = enumerate_candidates(3, 9, FilterProfile::Table1);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].a0, (3, 6));
        // The full ladder starts later: gcd > 2 and u > 3.
        let rows = enumerate_candidates(3, 15, FilterProfile::Full);
        assert!(rows.iter().all(|r| !r.survives));
    }

    #[test]
    fn table1_row_data() {
        let rows = enumerate_candidates(3, 15, FilterProfile::Table1);
        assert_eq!(rows.len(), 13);
        let with_prime: Vec<_> = rows
            .iter()
            .filter(|r| !r.a0_prime_options.is_empty())
            .collect();
        assert_eq!(with_prime.len(), 5);
        assert!(rows.iter().all(|r| !r.survives));
        // First row: (3,6), (2,4), (3,-1), A0'=(1,0), d=1, gamma=2,
        // A1=(5/3,2).
        let r = &rows[0];
        assert_eq!(r.a0, (3, 6));
        assert_eq!(r.f_end, (2, 4));
        assert_eq!(r.dir, Direction::of(3, -1));
        assert_eq!(r.a0_prime_options, vec![(1, 0)]);
        assert_eq!(r.dgcd, 1);
        assert_eq!(r.gamma_options, vec![2]);
        assert_eq!(r.branches[0].a1_num, 5);
        assert_eq!(r.branches[0].a1_den, 3);
        assert_eq!(r.branches[0].a1_y, 2);
    }

    #[test]
    fn condition8_examples() {
        assert!(!check_condition8(5, 2, 3));
        assert!(check_condition8(7, 3, 4));
        assert!(!check_condition8(13, 3, 5));
    }

    #[test]
    fn impossibles_examples() {
        assert!(!filter_impossibles((8, 12), Direction::of(2, -1)).0);
        assert!(filter_impossibles((4, 12), Direction::of(4, -1)).0);
        assert!(!filter_impossibles((6, 9), Direction::of(2, -1)).0);
    }

    #[test]
    fn mu_stage_on_the_6_12_corner() {
        // A^(1) = (10/3, 4), l' = 3: candidates mu in {1,3,5}; all die.
        let rep = filter_typeii_mu(10, 4, 3).unwrap();
        assert_eq!(rep.mu_candidates, vec![1, 3, 5]);
        assert!(!rep.pass);
        let t1 = rep.trail.iter().find(|t| t.mu == 1).unwrap();
        assert!(t1.first_stage_ok);
        assert_eq!(t1.dir1, Direction::of(3, -2));
        assert_eq!(t1.followup_corners, vec![(8, 3)]);
        assert!(!t1.followup_pass);
        let t3 = rep.trail.iter().find(|t| t.mu == 3).unwrap();
        assert_eq!(t3.rho1_reduced, 5);
        assert!(!t3.first_stage_ok);
        let t5 = rep.trail.iter().find(|t| t.mu == 5).unwrap();
        assert_eq!(t5.rho1_reduced, 9);
        assert!(!t5.first_stage_ok);
        assert!(matches!(
            filter_typeii_mu(13, 3, 5),
            Err(MuStageError::NotTypeIICandidate)
        ));
    }

    #[test]
    fn chain_filter_on_the_minimal_corner() {
        let reports = chain_filter((4, 12), 4, 20);
        assert_eq!(reports.len(), 1);
        let rep = &reports[0];
        assert_eq!(rep.dir0, Direction::of(4, -1));
        assert_eq!(rep.candidates.len(), 1);
        assert_eq!(rep.candidates[0].a1, (4, 16));
        assert!(rep.candidates[0].rejected_vertical);
        assert!(rep.last_corner);
        // Tighter bound: no candidates at all.
        let reports = chain_filter((4, 12), 4, 15);
        assert!(reports[0].candidates.is_empty());
        assert!(reports[0].last_corner);
    }
}
