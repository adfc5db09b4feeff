//! Text grammar for polynomials and parameter bindings.
//!
//! ```text
//! poly    := sign? term (('+' | '-') term)*
//! term    := factor ('*'? factor)*      // '*' optional only after a number
//! factor  := int ('/' int)? | ident ('^' '-'? int)?
//! ```
//!
//! Whitespace is ignored between tokens. Negative exponents are accepted on
//! parameters only.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::monomial::{Monomial, MAX_EXPONENT};
use super::poly::{Poly, Rational};
use super::symbol::{is_identifier, Param, Var};
use crate::error::{Error, Result};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_nonws(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek_nonws() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { position: self.pos, message: message.into() })
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(&self.src[start..self.pos])
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn exponent(&mut self) -> Result<i32> {
        let neg = self.eat('-');
        let at = self.pos;
        let text = self.digits()?;
        let mag: u32 = match text.parse() {
            Ok(v) if v <= MAX_EXPONENT => v,
            _ => {
                return Err(Error::Parse {
                    position: at,
                    message: format!("exponent exceeds {MAX_EXPONENT}"),
                })
            }
        };
        Ok(if neg { -(mag as i32) } else { mag as i32 })
    }

    /// One factor; returns (coefficient, monomial, was_number).
    fn factor(&mut self) -> Result<(Rational, Monomial, bool)> {
        match self.peek_nonws() {
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits()?.parse().expect("digits");
                let mut value = Rational::from_integer(num);
                if self.eat('/') {
                    let at = self.pos;
                    let den: BigInt = self.digits()?.parse().expect("digits");
                    if den.is_zero() {
                        return Err(Error::Parse { position: at, message: "zero denominator".into() });
                    }
                    value /= Rational::from_integer(den);
                }
                Ok((value, Monomial::one(), true))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let name = self.ident();
                let exp = if self.eat('^') { self.exponent()? } else { 1 };
                let mono = match Var::from_name(name) {
                    Some(v) => {
                        if exp < 0 {
                            return Err(Error::Parse {
                                position: start,
                                message: format!("negative exponent on variable `{name}`"),
                            });
                        }
                        Monomial::var(v, exp as u32)
                    }
                    None => Monomial::param(Param::new(name), exp),
                };
                Ok((Rational::one(), mono, false))
            }
            Some(c) => self.err(format!("unexpected character `{c}`")),
            None => self.err("unexpected end of input"),
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let (mut coeff, mut mono, mut last_num) = self.factor()?;
        loop {
            let explicit = self.eat('*');
            let implicit = !explicit
                && last_num
                && matches!(self.peek_nonws(), Some(c) if c.is_ascii_alphabetic());
            if !explicit && !implicit {
                break;
            }
            let at = self.pos;
            let (c, m, num) = self.factor()?;
            coeff *= c;
            mono = mono.checked_mul(&m).ok_or(Error::Parse {
                position: at,
                message: format!("exponent exceeds {MAX_EXPONENT}"),
            })?;
            last_num = num;
        }
        Ok(Poly::term(coeff, mono))
    }

    fn poly(&mut self) -> Result<Poly> {
        let mut acc = Poly::zero();
        let mut negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            let t = self.term()?;
            acc = if negate { acc.try_sub(&t)? } else { acc.try_add(&t)? };
            if self.eat('+') {
                negate = false;
            } else if self.eat('-') {
                negate = true;
            } else {
                break;
            }
        }
        if self.peek_nonws().is_some() {
            return self.err("expected `+`, `-` or `*`");
        }
        Ok(acc)
    }
}

/// Parses a polynomial in the text grammar.
pub fn parse_poly(src: &str) -> Result<Poly> {
    Cursor::new(src).poly()
}

/// Parses an exact decimal literal such as `-0.125` or `3`.
pub fn parse_decimal(src: &str) -> Option<Rational> {
    let s = src.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = Rational::new(num, den);
    Some(if neg { -value } else { value })
}

fn split_binding(src: &str) -> Result<(Param, &str)> {
    let (name, value) = src.split_once('=').ok_or(Error::Parse {
        position: 0,
        message: "expected `name=value`".into(),
    })?;
    let name = name.trim();
    if !is_identifier(name) || Var::from_name(name).is_some() {
        return Err(Error::Parse { position: 0, message: format!("`{name}` is not a parameter name") });
    }
    Ok((Param::new(name), value))
}

/// Parses `k=v` for symbolic substitution. The value is a polynomial in the
/// text grammar; plain decimals are converted exactly.
pub fn parse_binding(src: &str) -> Result<(Param, Poly)> {
    let (param, value) = split_binding(src)?;
    let offset = src.len() - value.len();
    if let Some(r) = parse_decimal(value) {
        return Ok((param, Poly::constant(r)));
    }
    let poly = parse_poly(value).map_err(|e| match e {
        Error::Parse { position, message } => Error::Parse { position: position + offset, message },
        other => other,
    })?;
    Ok((param, poly))
}

/// Parses `k=v` for numeric work: a float literal or `p/q`.
pub fn parse_numeric_binding(src: &str) -> Result<(Param, f64)> {
    let (param, value) = split_binding(src)?;
    let offset = src.len() - value.len();
    let value = value.trim();
    let parsed = match value.split_once('/') {
        Some((n, d)) => match (n.trim().parse::<f64>(), d.trim().parse::<f64>()) {
            (Ok(n), Ok(d)) if d != 0.0 => Some(n / d),
            _ => None,
        },
        None => value.parse::<f64>().ok(),
    };
    match parsed {
        Some(v) if v.is_finite() => Ok((param, v)),
        _ => Err(Error::Parse { position: offset, message: format!("`{value}` is not a number") }),
    }
}

/// Parses a comma separated point `a,b,c`.
pub fn parse_point(src: &str) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    let mut count = 0;
    let mut offset = 0;
    for part in src.split(',') {
        if count == 3 {
            return Err(Error::Parse { position: offset, message: "expected exactly three coordinates".into() });
        }
        match part.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => out[count] = v,
            _ => {
                return Err(Error::Parse {
                    position: offset,
                    message: format!("`{}` is not a finite number", part.trim()),
                })
            }
        }
        count += 1;
        offset += part.len() + 1;
    }
    if count != 3 {
        return Err(Error::Parse { position: src.len(), message: "expected exactly three coordinates".into() });
    }
    Ok(out)
}

/// Collects several `k=v` bindings into a substitution map.
pub fn parse_bindings<'a, I: IntoIterator<Item = &'a str>>(items: I) -> Result<HashMap<Param, Poly>> {
    items.into_iter().map(parse_binding).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfield::symbol::names::*;

    #[test]
    fn parses_documented_example() {
        let p = parse_poly("2*z^2 - 1/2*g*z").unwrap();
        let expected = &(&Poly::int(2) * &Poly::z().pow(2)) - &(&Poly::rat(1, 2) * &(&Poly::param(gamma()) * &Poly::z()));
        assert_eq!(p, expected);
    }

    #[test]
    fn implicit_star_after_coefficient() {
        assert_eq!(parse_poly("2z^2").unwrap(), parse_poly("2*z^2").unwrap());
        assert_eq!(parse_poly("-3/4 x y").unwrap_err(), Error::Parse { position: 7, message: "expected `+`, `-` or `*`".into() });
    }

    #[test]
    fn negative_exponents_only_on_parameters() {
        assert_eq!(parse_poly("y*a^-1").unwrap(), &Poly::y() * &Poly::param_pow(alpha(), -1));
        let err = parse_poly("x^-1").unwrap_err();
        assert!(matches!(err, Error::Parse { position: 0, .. }), "{err:?}");
    }

    #[test]
    fn reports_positions() {
        assert_eq!(parse_poly("x + ").unwrap_err(), Error::Parse { position: 4, message: "unexpected end of input".into() });
        assert_eq!(parse_poly("x + $").unwrap_err(), Error::Parse { position: 4, message: "unexpected character `$`".into() });
        assert!(matches!(parse_poly("1/0").unwrap_err(), Error::Parse { position: 2, .. }));
        assert!(matches!(parse_poly("").unwrap_err(), Error::Parse { position: 0, .. }));
    }

    #[test]
    fn exponent_limits() {
        assert!(parse_poly("x^99999999999").is_err());
        assert!(parse_poly("x^1048576*x^1").is_err());
    }

    #[test]
    fn bindings() {
        assert_eq!(parse_binding("g=3/5").unwrap(), (gamma(), Poly::rat(3, 5)));
        assert_eq!(parse_binding("g=0.25").unwrap(), (gamma(), Poly::rat(1, 4)));
        assert_eq!(parse_binding("b=g").unwrap(), (beta(), Poly::param(gamma())));
        assert!(parse_binding("x=1").is_err());
        assert!(parse_binding("g").is_err());
        assert_eq!(parse_numeric_binding("a=35").unwrap(), (alpha(), 35.0));
        assert_eq!(parse_numeric_binding("a=8/3").unwrap().1, 8.0 / 3.0);
        assert!(parse_numeric_binding("a=nan").is_err());
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("1, 2.5,-3").unwrap(), [1.0, 2.5, -3.0]);
        assert!(parse_point("1,2").is_err());
        assert!(parse_point("1,2,3,4").is_err());
        assert!(parse_point("1,inf,3").is_err());
    }

    #[test]
    fn decimals() {
        assert_eq!(parse_decimal("-0.125"), Some(Rational::new((-1).into(), 8.into())));
        assert_eq!(parse_decimal("."), None);
        assert_eq!(parse_decimal("1e3"), None);
    }
}
