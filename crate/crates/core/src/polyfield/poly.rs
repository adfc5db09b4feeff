use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::monomial::{Monomial, MAX_EXPONENT};
use super::symbol::{Param, Symbol, Var};
use super::vec3::PolyVec3;
use crate::error::{Error, Result};

/// Exact coefficient field.
pub type Rational = num_rational::BigRational;

/// Operations refuse to build polynomials with more terms than this.
pub const MAX_TERMS: usize = 1_000_000;

/// Symbol bindings for evaluation.
pub type Env<T> = HashMap<Symbol, T>;

/// Exact polynomial in x, y, z with rational coefficients and Laurent
/// parameter symbols.
///
/// The term map never stores a zero coefficient, so structural equality is
/// polynomial equality.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(int(n))
    }

    pub fn rat(n: i64, d: i64) -> Self {
        Self::constant(rat(n, d))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(v: Var) -> Self {
        Self::term(Rational::one(), Monomial::var(v, 1))
    }

    pub fn x() -> Self {
        Self::var(Var::X)
    }

    pub fn y() -> Self {
        Self::var(Var::Y)
    }

    pub fn z() -> Self {
        Self::var(Var::Z)
    }

    pub fn param(p: Param) -> Self {
        Self::term(Rational::one(), Monomial::param(p, 1))
    }

    pub fn param_pow(p: Param, exp: i32) -> Self {
        Self::term(Rational::one(), Monomial::param(p, exp))
    }

    pub fn symbol(s: Symbol) -> Self {
        match s {
            Symbol::Var(v) => Self::var(v),
            Symbol::Param(p) => Self::param(p),
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// A plain rational number (no variables, no parameters).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// True when no term involves x, y or z.
    pub fn is_free_of_vars(&self) -> bool {
        self.terms.keys().all(|m| !m.has_vars())
    }

    /// Single nonzero term without x, y, z: invertible in the parameter ring.
    pub fn as_invertible_monomial(&self) -> Option<(Rational, Monomial)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        (!m.has_vars()).then(|| (c.clone(), m.clone()))
    }

    /// Multiplicative inverse of an invertible monomial.
    pub fn inverse_monomial(&self) -> Option<Poly> {
        let (c, m) = self.as_invertible_monomial()?;
        Some(Poly::term(c.recip(), m.param_inverse()?))
    }

    pub fn params(&self) -> BTreeSet<Param> {
        self.terms
            .keys()
            .flat_map(|m| m.params().iter().map(|&(p, _)| p))
            .collect()
    }

    pub fn max_var_degree(&self) -> u64 {
        self.terms.keys().map(Monomial::var_degree).max().unwrap_or(0)
    }

    /// Groups terms by their x,y,z power product; each value is a polynomial
    /// in the parameters only.
    pub fn coefficients_in_vars(&self) -> BTreeMap<[u32; 3], Poly> {
        let mut out: BTreeMap<[u32; 3], Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.var_exponents())
                .or_default()
                .add_term(m.param_part(), c.clone());
        }
        out
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out.guard()
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out.guard()
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1
                    .checked_mul(m2)
                    .ok_or(Error::ExponentOverflow { limit: MAX_EXPONENT })?;
                out.add_term(m, c1 * c2);
                if out.terms.len() > MAX_TERMS {
                    return Err(Error::TooManyTerms { limit: MAX_TERMS });
                }
            }
        }
        Ok(out)
    }

    fn guard(self) -> Result<Poly> {
        if self.terms.len() > MAX_TERMS {
            Err(Error::TooManyTerms { limit: MAX_TERMS })
        } else {
            Ok(self)
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative by a dynamical variable.
    pub fn diff(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.var_exp(v);
            if e > 0 {
                out.add_term(m.lowered(v), c * int(e as i64));
            }
        }
        out
    }

    /// Differentiation by an arbitrary symbol; parameters are rejected.
    pub fn diff_symbol(&self, s: Symbol) -> Result<Poly> {
        match s {
            Symbol::Var(v) => Ok(self.diff(v)),
            Symbol::Param(p) => Err(Error::DiffByParameter(p.name().to_owned())),
        }
    }

    pub fn grad(&self) -> PolyVec3 {
        PolyVec3::new(self.diff(Var::X), self.diff(Var::Y), self.diff(Var::Z))
    }

    /// Euler (dilatation) operator x∂x + y∂y + z∂z.
    pub fn euler_operator(&self) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * int(m.var_degree() as i64));
        }
        out
    }

    /// Exact evaluation. Every occurring symbol must be bound.
    pub fn eval_exact(&self, env: &Env<Rational>) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in Var::ALL {
                let e = m.var_exp(v);
                if e > 0 {
                    let val = env
                        .get(&Symbol::Var(v))
                        .ok_or_else(|| Error::Unbound(v.name().to_owned()))?;
                    t *= num_traits::pow(val.clone(), e as usize);
                }
            }
            for &(p, e) in m.params() {
                let val = env
                    .get(&Symbol::Param(p))
                    .ok_or_else(|| Error::Unbound(p.name().to_owned()))?;
                if e < 0 && val.is_zero() {
                    return Err(Error::ZeroDenominator(p.name().to_owned()));
                }
                let base = if e < 0 { val.recip() } else { val.clone() };
                t *= num_traits::pow(base, e.unsigned_abs() as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Double-precision evaluation with compensated summation.
    pub fn eval_f64(&self, env: &Env<f64>) -> Result<f64> {
        let mut sum = super::compiled::NeumaierSum::default();
        for (m, c) in &self.terms {
            let mut t = c.to_f64().unwrap_or(f64::NAN);
            for v in Var::ALL {
                let e = m.var_exp(v);
                if e > 0 {
                    let val = env
                        .get(&Symbol::Var(v))
                        .ok_or_else(|| Error::Unbound(v.name().to_owned()))?;
                    t *= val.powi(e as i32);
                }
            }
            for &(p, e) in m.params() {
                let val = *env
                    .get(&Symbol::Param(p))
                    .ok_or_else(|| Error::Unbound(p.name().to_owned()))?;
                if e < 0 && val == 0.0 {
                    return Err(Error::ZeroDenominator(p.name().to_owned()));
                }
                t *= val.powi(e);
            }
            sum.add(t);
        }
        Ok(sum.total())
    }

    /// Replaces parameters by polynomials. A parameter occurring with a
    /// negative exponent may only be replaced by an invertible monomial.
    pub fn substitute(&self, bindings: &HashMap<Param, Poly>) -> Result<Poly> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut factor = Poly::term(c.clone(), m.var_part());
            for &(p, e) in m.params() {
                let base = match bindings.get(&p) {
                    None => Poly::param_pow(p, e),
                    Some(rep) if e >= 0 => rep.pow(e as u32),
                    Some(rep) => {
                        if rep.is_zero() {
                            return Err(Error::ZeroDenominator(p.name().to_owned()));
                        }
                        let inv = rep.inverse_monomial().ok_or_else(|| {
                            Error::NonInvertibleSubstitution {
                                param: p.name().to_owned(),
                                replacement: rep.to_string(),
                            }
                        })?;
                        inv.pow(e.unsigned_abs())
                    }
                };
                factor = factor.try_mul(&base)?;
            }
            out = out.try_add(&factor)?;
        }
        Ok(out)
    }

    pub fn substitute_one(&self, p: Param, value: &Poly) -> Result<Poly> {
        self.substitute(&HashMap::from([(p, value.clone())]))
    }

    /// Rewrites every power `s^e` with `e ≥ 2` using `s² = square`, leaving
    /// at most a linear occurrence of `s`. Negative powers of `s` are left
    /// untouched.
    pub fn reduce_square(&self, s: Param, square: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_param(s);
            if e < 2 {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            let linear = Poly::param_pow(s, e % 2);
            let t = &(&Poly::term(c.clone(), rest) * &square.pow((e / 2) as u32)) * &linear;
            out = &out + &t;
        }
        out
    }

    /// Terms sorted in display order.
    pub fn display_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.display_cmp(b.0));
        v
    }
}

impl fmt::Display for Poly {
    /// Canonical text form of the polynomial grammar (no spaces).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.display_terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            if neg {
                f.write_str("-")?;
            } else if i > 0 {
                f.write_str("+")?;
            }
            let mag = c.abs();
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl std::str::FromStr for Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        super::parse::parse_poly(s)
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Self {
        Poly::constant(c)
    }
}

impl From<i64> for Poly {
    fn from(n: i64) -> Self {
        Poly::int(n)
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Self {
        Poly::var(v)
    }
}

impl From<Param> for Poly {
    fn from(p: Param) -> Self {
        Poly::param(p)
    }
}

// Operator impls panic on the term/exponent guards; fallible callers use the
// `try_*` methods.
impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("polynomial size guard")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("polynomial size guard")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("polynomial size guard")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfield::symbol::names::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let prod = &(Poly::x() + Poly::y()) * &(Poly::x() - Poly::y());
        assert_eq!(prod, p("x^2-y^2"));
    }

    #[test]
    fn additive_identity() {
        let q = p("2*z^2-1/2*z*g");
        assert_eq!(&q + &Poly::zero(), q);
    }

    #[test]
    fn three_wave_factor_expansion() {
        let lhs = &p("2*y-d") * &(-Poly::param(gamma()));
        assert_eq!(lhs, p("-2*y*g+d*g"));
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let q = p("x*a+y") - p("x*a");
        assert_eq!(q.len(), 1);
        assert_eq!(q, Poly::y());
        assert!((p("x") - p("x")).is_zero());
    }

    #[test]
    fn derivatives() {
        assert_eq!(p("x^2+y^2+z").diff(Var::X), p("2*x"));
        assert_eq!(p("2*z^2-1/2*g*z").diff(Var::Z), p("4*z-1/2*g"));
        assert!(p("1/2*g*d").diff(Var::Y).is_zero());
    }

    #[test]
    fn differentiating_by_parameter_is_rejected() {
        let err = p("a*x").diff_symbol(Symbol::Param(alpha())).unwrap_err();
        assert_eq!(err, Error::DiffByParameter("a".into()));
    }

    #[test]
    fn exact_evaluation() {
        let env: Env<Rational> = [
            (Symbol::Var(Var::X), int(1)),
            (Symbol::Var(Var::Y), int(1)),
            (Symbol::Var(Var::Z), int(1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(p("x^2+y^2+z").eval_exact(&env).unwrap(), int(3));
        assert_eq!(Poly::zero().eval_exact(&Env::new()).unwrap(), int(0));

        let chen_div = p("-a-b+g");
        let env: Env<Rational> = [(alpha(), 35), (beta(), 3), (gamma(), 28)]
            .into_iter()
            .map(|(k, v)| (Symbol::Param(k), int(v)))
            .collect();
        assert_eq!(chen_div.eval_exact(&env).unwrap(), int(-10));
    }

    #[test]
    fn unbound_symbol_is_named() {
        let err = p("x*q").eval_exact(&Env::new()).unwrap_err();
        assert_eq!(err, Error::Unbound("x".into()));
        let env: Env<f64> = [(Symbol::Var(Var::X), 1.0)].into_iter().collect();
        assert_eq!(p("x*q").eval_f64(&env).unwrap_err(), Error::Unbound("q".into()));
    }

    #[test]
    fn zero_denominator_is_an_error() {
        let env: Env<f64> = [(Symbol::Param(alpha()), 0.0), (Symbol::Var(Var::Y), 1.0)]
            .into_iter()
            .collect();
        assert_eq!(p("y*a^-1").eval_f64(&env).unwrap_err(), Error::ZeroDenominator("a".into()));
    }

    #[test]
    fn substitution_into_laurent_terms() {
        let q = p("y*g*a^-1+b");
        let out = q.substitute(&HashMap::from([(alpha(), p("-2*g"))])).unwrap();
        assert_eq!(out, p("-1/2*y+b"));
        let err = q.substitute(&HashMap::from([(alpha(), p("g+1"))])).unwrap_err();
        assert!(matches!(err, Error::NonInvertibleSubstitution { .. }));
        let err = q.substitute(&HashMap::from([(alpha(), Poly::zero())])).unwrap_err();
        assert_eq!(err, Error::ZeroDenominator("a".into()));
    }

    #[test]
    fn square_reduction() {
        let s = radical();
        let one_minus = p("1-D^2");
        assert_eq!(p("s^2+D^2").reduce_square(s, &one_minus), Poly::one());
        assert_eq!(p("x*s^3").reduce_square(s, &one_minus), p("x*s-x*s*D^2"));
    }

    #[test]
    fn euler_operator_scales_homogeneous_parts() {
        assert_eq!(p("x^2+y^2").euler_operator(), p("2*x^2+2*y^2"));
        assert_eq!(p("x*y*z-a*z").euler_operator(), p("3*x*y*z-a*z"));
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(p("g - a - b").to_string(), "-a-b+g");
        assert_eq!(p("1/2*x^2 - a*z").to_string(), "1/2*x^2-z*a");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(p("-3/4").to_string(), "-3/4");
        assert_eq!(p("y*g*a^-1").to_string(), "y*a^-1*g");
    }

    #[test]
    fn term_guard() {
        // (1 + x + ... + x^999) * (1 + y + ... + y^1000) would exceed the guard.
        let a = Poly::from_terms((0..1000).map(|i| (Monomial::var(Var::X, i), int(1))));
        let b = Poly::from_terms((0..1001).map(|i| (Monomial::var(Var::Y, i), int(1))));
        assert_eq!(a.try_mul(&b).unwrap_err(), Error::TooManyTerms { limit: MAX_TERMS });
    }
}
