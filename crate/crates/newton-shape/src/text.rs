//! Text grammar for Laurent polynomials and the canonical renderer.
//!
//! ```text
//! poly   := [sign] term (('+'|'-') term)*
//! term   := [coeff '*'] factor ('*' factor)* | coeff
//! coeff  := [sign] integer ['/' positive-integer]
//! factor := 'x' ['^' xexp] | 'y' ['^' nonneg-integer]
//! xexp   := [sign] integer | '(' [sign] integer '/' positive-integer ')'
//! ```
//!
//! Whitespace is ignored; repeated variables in a term multiply (exponents
//! add). `render_poly` emits terms in descending `v_{1,1}` order with ties
//! broken by descending y-exponent, and `parse(render(P)) = P`.

use crate::poly::{ExpPoint, LaurentPoly};
use crate::rational::{q_str, qi, Q};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at byte {offset}: expected {expected}")]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
}

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(s: &'a str) -> Self {
        Scanner {
            bytes: s.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&mut self, expected: &str) -> ParseError {
        self.skip_ws();
        ParseError {
            offset: self.pos,
            expected: expected.to_string(),
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("integer"));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(BigInt::from_str(s).unwrap())
    }

    fn signed_integer(&mut self) -> Result<BigInt, ParseError> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let n = self.integer()?;
        Ok(if neg { -n } else { n })
    }
}

fn parse_coeff(sc: &mut Scanner) -> Result<Q, ParseError> {
    let num = sc.signed_integer()?;
    if sc.eat(b'/') {
        let den = sc.integer()?;
        if den.is_zero() {
            return Err(sc.err("positive denominator"));
        }
        Ok(Q::new(num, den))
    } else {
        Ok(Q::from_integer(num))
    }
}

fn parse_xexp(sc: &mut Scanner) -> Result<Q, ParseError> {
    if sc.eat(b'(') {
        let num = sc.signed_integer()?;
        if !sc.eat(b'/') {
            return Err(sc.err("'/'"));
        }
        let den = sc.integer()?;
        if den.is_zero() {
            return Err(sc.err("positive denominator"));
        }
        if !sc.eat(b')') {
            return Err(sc.err("')'"));
        }
        Ok(Q::new(num, den))
    } else {
        Ok(Q::from_integer(sc.signed_integer()?))
    }
}

/// One `x`/`y` factor; returns the exponent contribution.
fn parse_factor(sc: &mut Scanner) -> Result<(Q, i64), ParseError> {
    match sc.peek() {
        Some(b'x') => {
            sc.bump();
            if sc.eat(b'^') {
                Ok((parse_xexp(sc)?, 0))
            } else {
                Ok((qi(1), 0))
            }
        }
        Some(b'y') => {
            sc.bump();
            if sc.eat(b'^') {
                let j = sc.integer()?;
                let j: i64 = (&j).try_into().map_err(|_| sc.err("small y-exponent"))?;
                Ok((Q::zero(), j))
            } else {
                Ok((Q::zero(), 1))
            }
        }
        _ => Err(sc.err("'x' or 'y'")),
    }
}

fn parse_term(sc: &mut Scanner) -> Result<(Q, Q, i64), ParseError> {
    let mut coeff = qi(1);
    let mut xexp = Q::zero();
    let mut yexp: i64 = 0;
    // A sign opens a coefficient only when a digit follows; otherwise the
    // error points at the sign itself.
    let leading_coeff = match sc.peek() {
        Some(c) if c.is_ascii_digit() => true,
        Some(b'-') | Some(b'+') => {
            let save = sc.pos;
            sc.pos += 1;
            let digit = matches!(sc.peek(), Some(c) if c.is_ascii_digit());
            sc.pos = save;
            digit
        }
        _ => false,
    };
    if leading_coeff {
        coeff = parse_coeff(sc)?;
        if !sc.eat(b'*') {
            return Ok((coeff, xexp, yexp)); // bare coefficient term
        }
    }
    let (dx, dy) = parse_factor(sc)?;
    xexp += dx;
    yexp += dy;
    while sc.eat(b'*') {
        let (dx, dy) = parse_factor(sc)?;
        xexp += dx;
        yexp += dy;
    }
    Ok((coeff, xexp, yexp))
}

/// Parses the polynomial grammar, producing a canonical `LaurentPoly`.
pub fn parse_poly(s: &str) -> Result<LaurentPoly, ParseError> {
    let mut sc = Scanner::new(s);
    let mut out = LaurentPoly::zero();
    let mut negate = false;
    if sc.eat(b'-') {
        negate = true;
    } else {
        sc.eat(b'+');
    }
    loop {
        let (c, xe, ye) = parse_term(&mut sc)?;
        if ye < 0 {
            return Err(sc.err("nonnegative y-exponent"));
        }
        let c = if negate { -c } else { c };
        out.add_term(ExpPoint::new(xe, ye as u32), c);
        match sc.peek() {
            None => break,
            Some(b'+') => {
                sc.bump();
                negate = false;
            }
            Some(b'-') => {
                sc.bump();
                negate = true;
            }
            Some(_) => return Err(sc.err("'+', '-' or end of input")),
        }
    }
    Ok(out)
}

fn render_xexp(e: &Q) -> String {
    if e.denom().is_one() {
        format!("x^{}", e.numer())
    } else {
        format!("x^({}/{})", e.numer(), e.denom())
    }
}

fn render_term(e: &ExpPoint, c: &Q) -> String {
    let mut pieces: Vec<String> = Vec::new();
    if !c.is_one() || (e.xexp.is_zero() && e.yexp == 0) {
        pieces.push(q_str(c));
    }
    if !e.xexp.is_zero() {
        if e.xexp.is_one() {
            pieces.push("x".to_string());
        } else {
            pieces.push(render_xexp(&e.xexp));
        }
    }
    if e.yexp == 1 {
        pieces.push("y".to_string());
    } else if e.yexp > 1 {
        pieces.push(format!("y^{}", e.yexp));
    }
    pieces.join("*")
}

/// Deterministic rendering: terms descending by `v_{1,1}`, ties broken by
/// ascending y-exponent; negative coefficients fold into `-` separators.
pub fn render_poly(p: &LaurentPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<(&ExpPoint, &Q)> = p.terms().collect();
    terms.sort_by(|(ea, _), (eb, _)| {
        let va = &ea.xexp + &qi(ea.yexp as i64);
        let vb = &eb.xexp + &qi(eb.yexp as i64);
        vb.cmp(&va).then(ea.yexp.cmp(&eb.yexp))
    });
    let mut out = String::new();
    for (i, (e, c)) in terms.iter().enumerate() {
        let mag = c.abs();
        if i == 0 {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&render_term(e, &mag));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::bracket;
    use crate::rational::q;

    #[test]
    fn parses_the_reference_polynomial() {
        let p = parse_poly("x^2*y + x^6*y^2 + 6*x^8*y^3 + 9*x^10*y^4").unwrap();
        assert_eq!(p.term_count(), 4);
        assert_eq!(p.coeff(&ExpPoint::from_ints(8, 3)), qi(6));
    }

    #[test]
    fn parses_fractional_exponents() {
        let p = parse_poly("x^(-1/3)").unwrap();
        assert_eq!(p, LaurentPoly::monomial(qi(1), q(-1, 3), 0));
    }

    #[test]
    fn rejects_double_plus() {
        let e = parse_poly("x + + y").unwrap_err();
        assert_eq!(e.offset, 4);
    }

    #[test]
    fn renders_zero_and_simple_sums() {
        assert_eq!(render_poly(&LaurentPoly::zero()), "0");
        let p = parse_poly("x + y").unwrap();
        assert_eq!(render_poly(&p), "x + y");
        let q = parse_poly("y + x").unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn round_trips_a_reference_pair_bracket() {
        let p = parse_poly("x^2*y + x^6*y^2 + 6*x^8*y^3 + 9*x^10*y^4").unwrap();
        let q = parse_poly(
            "x^-1 + 2*x^3*y + 18*x^5*y^2 + 36*x^7*y^3 \
             + 8*x^9*y^3 + 72*x^11*y^4 + 216*x^13*y^5 + 216*x^15*y^6",
        )
        .unwrap();
        let b = bracket(&p, &q);
        assert_eq!(parse_poly(&render_poly(&b)).unwrap(), b);
    }

    #[test]
    fn round_trips_negative_leading_term() {
        let p = parse_poly("-x^2 + 3/2*y - 1").unwrap();
        assert_eq!(parse_poly(&render_poly(&p)).unwrap(), p);
    }

    #[test]
    fn repeated_variables_multiply() {
        assert_eq!(
            parse_poly("x*x^2*y*y^3").unwrap(),
            parse_poly("x^3*y^4").unwrap()
        );
    }
}
