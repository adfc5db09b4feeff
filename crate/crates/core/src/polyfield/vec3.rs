use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Index, Sub};

use super::poly::{Env, Poly, Rational};
use super::symbol::{Param, Var};
use crate::error::Result;

/// A 3-vector of polynomials (Poisson vectors **J**, **N**, vector fields).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PolyVec3(pub [Poly; 3]);

impl PolyVec3 {
    pub fn new(x: Poly, y: Poly, z: Poly) -> Self {
        PolyVec3([x, y, z])
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// The Euler (dilatation) field (x, y, z).
    pub fn position() -> Self {
        Self::new(Poly::x(), Poly::y(), Poly::z())
    }

    pub fn x(&self) -> &Poly {
        &self.0[0]
    }

    pub fn y(&self) -> &Poly {
        &self.0[1]
    }

    pub fn z(&self) -> &Poly {
        &self.0[2]
    }

    pub fn components(&self) -> &[Poly; 3] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Poly::is_zero)
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> PolyVec3 {
        PolyVec3([f(&self.0[0]), f(&self.0[1]), f(&self.0[2])])
    }

    pub fn try_map(&self, f: impl Fn(&Poly) -> Result<Poly>) -> Result<PolyVec3> {
        Ok(PolyVec3([f(&self.0[0])?, f(&self.0[1])?, f(&self.0[2])?]))
    }

    pub fn scale(&self, c: &Poly) -> PolyVec3 {
        self.map(|p| p * c)
    }

    pub fn scale_rational(&self, c: &Rational) -> PolyVec3 {
        self.map(|p| p.scale(c))
    }

    pub fn dot(&self, other: &PolyVec3) -> Poly {
        let [a, b, c] = &self.0;
        let [u, v, w] = &other.0;
        &(&(a * u) + &(b * v)) + &(c * w)
    }

    pub fn cross(&self, other: &PolyVec3) -> PolyVec3 {
        let [a, b, c] = &self.0;
        let [u, v, w] = &other.0;
        PolyVec3::new(b * w - c * v, c * u - a * w, a * v - b * u)
    }

    pub fn curl(&self) -> PolyVec3 {
        let [fx, fy, fz] = &self.0;
        PolyVec3::new(
            fz.diff(Var::Y) - fy.diff(Var::Z),
            fx.diff(Var::Z) - fz.diff(Var::X),
            fy.diff(Var::X) - fx.diff(Var::Y),
        )
    }

    pub fn divergence(&self) -> Poly {
        let [fx, fy, fz] = &self.0;
        &(&fx.diff(Var::X) + &fy.diff(Var::Y)) + &fz.diff(Var::Z)
    }

    pub fn substitute(&self, bindings: &HashMap<Param, Poly>) -> Result<PolyVec3> {
        self.try_map(|p| p.substitute(bindings))
    }

    pub fn reduce_square(&self, s: Param, square: &Poly) -> PolyVec3 {
        self.map(|p| p.reduce_square(s, square))
    }

    pub fn eval_f64(&self, env: &Env<f64>) -> Result<[f64; 3]> {
        Ok([self.0[0].eval_f64(env)?, self.0[1].eval_f64(env)?, self.0[2].eval_f64(env)?])
    }
}

impl Index<usize> for PolyVec3 {
    type Output = Poly;
    fn index(&self, i: usize) -> &Poly {
        &self.0[i]
    }
}

impl Add for &PolyVec3 {
    type Output = PolyVec3;
    fn add(self, rhs: &PolyVec3) -> PolyVec3 {
        PolyVec3::new(&self.0[0] + &rhs.0[0], &self.0[1] + &rhs.0[1], &self.0[2] + &rhs.0[2])
    }
}

impl Sub for &PolyVec3 {
    type Output = PolyVec3;
    fn sub(self, rhs: &PolyVec3) -> PolyVec3 {
        PolyVec3::new(&self.0[0] - &rhs.0[0], &self.0[1] - &rhs.0[1], &self.0[2] - &rhs.0[2])
    }
}

impl fmt::Display for PolyVec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// J·(∇×J). The zero polynomial certifies the Jacobi identity of the
/// Poisson structure with vector J.
pub fn jacobi_residual(j: &PolyVec3) -> Poly {
    j.dot(&j.curl())
}

/// (J·(∇×J̄), J̄·(∇×J)); both zero certifies compatibility of the pair.
pub fn compatibility_residuals(j: &PolyVec3, jbar: &PolyVec3) -> (Poly, Poly) {
    (j.dot(&jbar.curl()), jbar.dot(&j.curl()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn v(a: &str, b: &str, c: &str) -> PolyVec3 {
        PolyVec3::new(p(a), p(b), p(c))
    }

    #[test]
    fn gradients() {
        assert_eq!(p("x^2+y^2+z").grad(), v("2*x", "2*y", "1"));
        assert_eq!(p("1/2*x^2-a*z").grad(), v("x", "0", "-a"));
        assert!(p("a*b+7").grad().is_zero());
    }

    #[test]
    fn curls() {
        assert!(v("0", "-y", "-z").curl().is_zero());
        let n = v("1/2*k2*x+1/2*k3*x", "1/2*q*x", "1/2*x*y");
        assert_eq!(n.curl(), v("1/2*x", "-1/2*y", "1/2*q"));
    }

    #[test]
    fn cross_products() {
        let j = v("0", "z", "y-1/2*d");
        let gh = v("2*x", "2*y", "1");
        assert_eq!(j.cross(&gh), v("z-2*y^2+d*y", "2*x*y-d*x", "-2*x*z"));
        assert!(j.cross(&j).is_zero());
    }

    #[test]
    fn jacobi_residuals() {
        assert!(jacobi_residual(&v("0", "z", "y-1/2*d")).is_zero());
        let modified_lu = v("0", "-y-1/2*y*z*a^-1", "-z");
        assert!(!modified_lu.curl().is_zero());
        assert!(jacobi_residual(&modified_lu).is_zero());
        assert_eq!(jacobi_residual(&v("y", "x*z", "0")), p("-x*y"));
    }

    #[test]
    fn compatibility() {
        let n = v("0", "2*z^2-1/2*g*z", "-g*y+1/2*g*d");
        // The multiplier of this N is not constant, so grad(G) alone is not a
        // compatible partner.
        let (a, b) = compatibility_residuals(&n, &p("x^2+y^2+z").grad());
        assert!(a.is_zero());
        assert_eq!(b, p("-x*g-8*x*z"));
        // Lü with β = γ has M = 1 and an irrotational N.
        let lu = v("0", "-a*y+2*b*y*z*a^-1", "-a*z+b*y^2*a^-1");
        let (a, b) = compatibility_residuals(&lu, &p("1/2*x^2-a*z").grad());
        assert!(a.is_zero() && b.is_zero());
        let (a, b) = compatibility_residuals(&v("0", "0", "x*y"), &v("z^2", "0", "0"));
        assert!(!(a.is_zero() && b.is_zero()));
    }
}
