//! Dense univariate polynomials over `Q`, with the classical (characteristic
//! zero) squarefree decomposition and exact rational root extraction.

use crate::rational::{qi, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficients in ascending degree order; no trailing zeros, the zero
/// polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<Q>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly::default()
    }

    pub fn one() -> Self {
        UniPoly::constant(qi(1))
    }

    pub fn constant(c: Q) -> Self {
        UniPoly::from_coeffs(vec![c])
    }

    pub fn from_coeffs(coeffs: Vec<Q>) -> Self {
        let mut p = UniPoly { coeffs };
        p.normalize();
        p
    }

    /// `z - lambda`.
    pub fn linear(lambda: &Q) -> Self {
        UniPoly::from_coeffs(vec![-lambda.clone(), qi(1)])
    }

    fn normalize(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * qi(i as i64 + 1))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Q) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        self.scale(&self.leading().recip())
    }

    pub fn pow(&self, n: u32) -> UniPoly {
        let mut acc = UniPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Quotient and remainder; divisor must be nonzero.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut rem = self.clone();
        if rem.degree() < d.degree() || rem.is_zero() {
            return (UniPoly::zero(), rem);
        }
        let mut quot = vec![Q::zero(); rem.degree() - d.degree() + 1];
        let dlead = d.leading();
        while !rem.is_zero() && rem.degree() >= d.degree() {
            let k = rem.degree() - d.degree();
            let c = rem.leading() / dlead.clone();
            quot[k] = c.clone();
            for (i, dc) in d.coeffs.iter().enumerate() {
                let idx = i + k;
                let v = &rem.coeffs[idx] - &(dc * &c);
                rem.coeffs[idx] = v;
            }
            rem.normalize();
        }
        (UniPoly::from_coeffs(quot), rem)
    }

    pub fn divides(&self, other: &UniPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Substitute `z -> z + lambda`.
    pub fn shift(&self, lambda: &Q) -> UniPoly {
        let mut acc = UniPoly::zero();
        let base = UniPoly::from_coeffs(vec![lambda.clone(), qi(1)]);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &base) + &UniPoly::constant(c.clone());
        }
        acc
    }

    /// Largest `k` such that only exponents divisible by `k` occur
    /// (0 for constants, by convention).
    pub fn exponent_gcd(&self) -> usize {
        let mut g: usize = 0;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() && i > 0 {
                g = g.gcd(&i);
            }
        }
        g
    }

    /// When `p(z) = q(z^k)`, returns `q`.
    pub fn contract(&self, k: usize) -> Option<UniPoly> {
        if k == 0 {
            return None;
        }
        let mut out = vec![Q::zero(); self.degree() / k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i % k != 0 {
                return None;
            }
            out[i / k] = c.clone();
        }
        Some(UniPoly::from_coeffs(out))
    }

    /// `p(z^k)`.
    pub fn expand(&self, k: usize) -> UniPoly {
        let mut out = vec![Q::zero(); self.degree() * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k] = c.clone();
        }
        UniPoly::from_coeffs(out)
    }

    /// Whether `gcd(p, p') = 1`.
    pub fn is_separable(&self) -> bool {
        if self.is_constant() {
            return true;
        }
        self.gcd(&self.derivative()).is_constant()
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let v = &out[i + j] + &(a * b);
                out[i + j] = v;
            }
        }
        UniPoly::from_coeffs(out)
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// One squarefree factor together with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeFactor {
    pub factor: UniPoly,
    pub multiplicity: u32,
}

/// Yun's squarefree decomposition: `p = unit * prod factor_i^multiplicity_i`
/// with the factors monic, squarefree and pairwise coprime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub unit: Q,
    pub factors: Vec<SquarefreeFactor>,
}

impl SquarefreeDecomposition {
    /// The product of the distinct factors, i.e. `p / gcd(p, p')` up to a
    /// unit. Its degree counts the distinct roots over the algebraic
    /// closure.
    pub fn squarefree_part(&self) -> UniPoly {
        let mut out = UniPoly::one();
        for f in &self.factors {
            out = &out * &f.factor;
        }
        out
    }

    pub fn distinct_root_count(&self) -> usize {
        self.factors.iter().map(|f| f.factor.degree()).sum()
    }

    /// Gcd of the multiplicities present (0 for a constant input).
    pub fn multiplicity_gcd(&self) -> u32 {
        let mut g = 0u32;
        for f in &self.factors {
            g = g.gcd(&f.multiplicity);
        }
        g
    }

    pub fn reassemble(&self) -> UniPoly {
        let mut out = UniPoly::constant(self.unit.clone());
        for f in &self.factors {
            out = &out * &f.factor.pow(f.multiplicity);
        }
        out
    }
}

/// Classical Yun algorithm (characteristic zero).
pub fn squarefree_decomposition(p: &UniPoly) -> SquarefreeDecomposition {
    assert!(!p.is_zero(), "squarefree decomposition of zero");
    let unit = p.leading();
    let p = p.monic();
    if p.is_constant() {
        return SquarefreeDecomposition {
            unit,
            factors: vec![],
        };
    }
    let dp = p.derivative();
    let mut factors = Vec::new();
    let g = p.gcd(&dp);
    let mut c = p.div_rem(&g).0;
    let mut d = &dp.div_rem(&g).0 - &c.derivative();
    let mut i = 1u32;
    while !c.is_constant() {
        let a = c.gcd(&d);
        if !a.is_constant() {
            factors.push(SquarefreeFactor {
                factor: a.clone(),
                multiplicity: i,
            });
        }
        c = c.div_rem(&a).0;
        d = &d.div_rem(&a).0 - &c.derivative();
        i += 1;
    }
    SquarefreeDecomposition { unit, factors }
}

/// All rational roots with multiplicities, found by the rational root test
/// on a primitive integer model and verified by exact division.
pub fn rational_roots(p: &UniPoly) -> Vec<(Q, u32)> {
    if p.is_zero() || p.is_constant() {
        return vec![];
    }
    let mut out: Vec<(Q, u32)> = Vec::new();
    let mut work = p.clone();
    // Factor out z^k first.
    let mut zmult = 0u32;
    while work.coeff(0).is_zero() && !work.is_zero() {
        work = work
            .div_rem(&UniPoly::from_coeffs(vec![Q::zero(), qi(1)]))
            .0;
        zmult += 1;
    }
    if zmult > 0 {
        out.push((Q::zero(), zmult));
    }
    if work.is_constant() {
        return out;
    }
    // Integer model: clear denominators.
    let mut den = BigInt::one();
    for c in work.coeffs() {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = work
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    let a0 = ints[0].clone();
    let an = ints[ints.len() - 1].clone();
    let mut candidates: Vec<Q> = Vec::new();
    for r in divisors(&a0.abs()) {
        for s in divisors(&an.abs()) {
            let c = Q::new(r.clone(), s.clone());
            if !candidates.contains(&c) {
                candidates.push(c.clone());
            }
            let c = -c;
            if !candidates.contains(&c) {
                candidates.push(c);
            }
        }
    }
    for cand in candidates {
        if !work.eval(&cand).is_zero() {
            continue;
        }
        let lin = UniPoly::linear(&cand);
        let mut mult = 0u32;
        loop {
            let (q, r) = work.div_rem(&lin);
            if r.is_zero() {
                work = q;
                mult += 1;
            } else {
                break;
            }
        }
        out.push((cand, mult));
        if work.is_constant() {
            break;
        }
    }
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![BigInt::zero()];
    }
    let mut out = Vec::new();
    let mut d = BigInt::one();
    loop {
        let d2 = &d * &d;
        if &d2 > n {
            break;
        }
        if (n % &d).is_zero() {
            out.push(d.clone());
            let other = n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn zpoly(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(coeffs.iter().map(|&c| qi(c)).collect())
    }

    #[test]
    fn div_rem_and_gcd() {
        let p = zpoly(&[-1, 0, 0, 0, 1]); // z^4 - 1
        let d = zpoly(&[-1, 1]); // z - 1
        let (quot, rem) = p.div_rem(&d);
        assert!(rem.is_zero());
        assert_eq!(&quot * &d, p);
        let g = p.gcd(&p.derivative());
        assert!(g.is_constant());
    }

    #[test]
    fn yun_on_cube_of_quartic() {
        // (z^4 - 1)^3: squarefree part z^4 - 1, single multiplicity 3.
        let base = zpoly(&[-1, 0, 0, 0, 1]);
        let p = base.pow(3);
        let d = squarefree_decomposition(&p);
        assert_eq!(d.factors.len(), 1);
        assert_eq!(d.factors[0].multiplicity, 3);
        assert_eq!(d.factors[0].factor, base);
        assert_eq!(d.distinct_root_count(), 4);
        assert_eq!(d.reassemble(), p);
    }

    #[test]
    fn yun_simple_cases() {
        // (z-2)^5
        let p = UniPoly::linear(&qi(2)).pow(5);
        let d = squarefree_decomposition(&p);
        assert_eq!(d.factors.len(), 1);
        assert_eq!(d.factors[0].multiplicity, 5);
        assert_eq!(d.factors[0].factor, UniPoly::linear(&qi(2)));
        // z^2 + 1 already squarefree
        let p = zpoly(&[1, 0, 1]);
        let d = squarefree_decomposition(&p);
        assert_eq!(d.factors.len(), 1);
        assert_eq!(d.factors[0].multiplicity, 1);
        assert_eq!(d.squarefree_part(), p);
    }

    #[test]
    fn yun_mixed_multiplicities() {
        // (z-1)^2 (z+3)^5 (z^2+1)
        let p = &(&UniPoly::linear(&qi(1)).pow(2) * &UniPoly::linear(&qi(-3)).pow(5))
            * &zpoly(&[1, 0, 1]);
        let d = squarefree_decomposition(&p);
        let mut mults: Vec<u32> = d.factors.iter().map(|f| f.multiplicity).collect();
        mults.sort();
        assert_eq!(mults, vec![1, 2, 5]);
        assert_eq!(d.reassemble(), p);
        assert_eq!(d.distinct_root_count(), 4);
    }

    #[test]
    fn rational_root_extraction() {
        // 6(z - 1/2)(z + 3)^2 z
        let p = &(&UniPoly::linear(&q(1, 2)) * &UniPoly::linear(&qi(-3)).pow(2))
            * &UniPoly::from_coeffs(vec![Q::zero(), qi(6)]);
        let mut roots = rational_roots(&p);
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        assert_eq!(roots, vec![(qi(-3), 2), (Q::zero(), 1), (q(1, 2), 1)]);
    }

    #[test]
    fn contraction_and_expansion() {
        let p = zpoly(&[-1, 0, 0, 0, 1]); // z^4 - 1
        assert_eq!(p.exponent_gcd(), 4);
        let c = p.contract(4).unwrap();
        assert_eq!(c, zpoly(&[-1, 1]));
        assert_eq!(c.expand(4), p);
        assert_eq!(zpoly(&[1, 1]).contract(2), None);
    }

    #[test]
    fn shift_substitution() {
        // p(z) = z^2, p(z+1) = z^2 + 2z + 1
        assert_eq!(zpoly(&[0, 0, 1]).shift(&qi(1)), zpoly(&[1, 2, 1]));
    }
}
