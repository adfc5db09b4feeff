use std::collections::HashMap;
use std::fmt;

use super::poly::{Poly, Rational};
use super::symbol::Param;
use super::vec3::PolyVec3;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    General,
    Skew,
    Symmetric,
}

/// 3×3 matrix of polynomials. The `Skew`/`Symmetric` tags are only ever set
/// after the structure has been checked entry by entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMat3 {
    entries: [[Poly; 3]; 3],
    kind: MatrixKind,
}

impl PolyMat3 {
    pub fn general(entries: [[Poly; 3]; 3]) -> Self {
        PolyMat3 { entries, kind: MatrixKind::General }
    }

    pub fn skew(entries: [[Poly; 3]; 3]) -> Result<Self> {
        let m = Self::general(entries);
        if !m.is_skew() {
            return Err(Error::NotSkew);
        }
        Ok(PolyMat3 { kind: MatrixKind::Skew, ..m })
    }

    pub fn symmetric(entries: [[Poly; 3]; 3]) -> Result<Self> {
        let m = Self::general(entries);
        if !m.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(PolyMat3 { kind: MatrixKind::Symmetric, ..m })
    }

    /// Symmetric matrix from its diagonal (r1, r2, r3) and off-diagonal
    /// (a, b, c) = (m01, m02, m12).
    pub fn symmetric_from_parts(diag: [Poly; 3], off: [Poly; 3]) -> Self {
        let [r1, r2, r3] = diag;
        let [a, b, c] = off;
        PolyMat3 {
            entries: [
                [r1, a.clone(), b.clone()],
                [a, r2, c.clone()],
                [b, c, r3],
            ],
            kind: MatrixKind::Symmetric,
        }
    }

    pub fn zero() -> Self {
        PolyMat3 { entries: Default::default(), kind: MatrixKind::Symmetric }
    }

    pub fn identity() -> Self {
        Self::scalar(Poly::one())
    }

    pub fn scalar(c: Poly) -> Self {
        let z = Poly::zero;
        PolyMat3 {
            entries: [[c.clone(), z(), z()], [z(), c.clone(), z()], [z(), z(), c]],
            kind: MatrixKind::Symmetric,
        }
    }

    /// Skew matrix of a Poisson vector:
    /// `[[0, -Jz, Jy], [Jz, 0, -Jx], [-Jy, Jx, 0]]`.
    pub fn from_poisson_vector(v: &PolyVec3) -> Self {
        let [jx, jy, jz] = v.components();
        let z = Poly::zero;
        PolyMat3 {
            entries: [
                [z(), -jz, jy.clone()],
                [jz.clone(), z(), -jx],
                [-jy, jx.clone(), z()],
            ],
            kind: MatrixKind::Skew,
        }
    }

    /// Inverse of [`PolyMat3::from_poisson_vector`]; fails unless skew.
    pub fn poisson_vector(&self) -> Result<PolyVec3> {
        if self.kind != MatrixKind::Skew && !self.is_skew() {
            return Err(Error::NotSkew);
        }
        let e = &self.entries;
        Ok(PolyVec3::new(-&e[1][2], e[0][2].clone(), -&e[0][1]))
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[[Poly; 3]; 3] {
        &self.entries
    }

    pub fn is_skew(&self) -> bool {
        (0..3).all(|i| {
            self.entries[i][i].is_zero()
                && (i + 1..3).all(|j| (&self.entries[i][j] + &self.entries[j][i]).is_zero())
        })
    }

    pub fn is_symmetric(&self) -> bool {
        (0..3).all(|i| (i + 1..3).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Poly::is_zero)
    }

    /// Re-derives the structural tag from the entries.
    pub fn certified(self) -> Self {
        let kind = if self.is_skew() {
            MatrixKind::Skew
        } else if self.is_symmetric() {
            MatrixKind::Symmetric
        } else {
            MatrixKind::General
        };
        PolyMat3 { kind, ..self }
    }

    fn build(f: impl Fn(usize, usize) -> Poly) -> [[Poly; 3]; 3] {
        std::array::from_fn(|i| std::array::from_fn(|j| f(i, j)))
    }

    pub fn mul(&self, other: &PolyMat3) -> PolyMat3 {
        Self::general(Self::build(|i, j| {
            (0..3).fold(Poly::zero(), |acc, k| &acc + &(&self.entries[i][k] * &other.entries[k][j]))
        }))
    }

    pub fn mul_vec(&self, v: &PolyVec3) -> PolyVec3 {
        let row = |i: usize| (0..3).fold(Poly::zero(), |acc, k| &acc + &(&self.entries[i][k] * &v[k]));
        PolyVec3::new(row(0), row(1), row(2))
    }

    pub fn add(&self, other: &PolyMat3) -> PolyMat3 {
        let kind = if self.kind == other.kind { self.kind } else { MatrixKind::General };
        PolyMat3 { entries: Self::build(|i, j| &self.entries[i][j] + &other.entries[i][j]), kind }
    }

    pub fn sub(&self, other: &PolyMat3) -> PolyMat3 {
        let kind = if self.kind == other.kind { self.kind } else { MatrixKind::General };
        PolyMat3 { entries: Self::build(|i, j| &self.entries[i][j] - &other.entries[i][j]), kind }
    }

    pub fn scale(&self, c: &Poly) -> PolyMat3 {
        PolyMat3 { entries: Self::build(|i, j| &self.entries[i][j] * c), kind: self.kind }
    }

    pub fn scale_rational(&self, c: &Rational) -> PolyMat3 {
        PolyMat3 { entries: Self::build(|i, j| self.entries[i][j].scale(c)), kind: self.kind }
    }

    pub fn transpose(&self) -> PolyMat3 {
        PolyMat3 { entries: Self::build(|i, j| self.entries[j][i].clone()), kind: self.kind }
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> PolyMat3 {
        PolyMat3 { entries: Self::build(|i, j| f(&self.entries[i][j])), kind: MatrixKind::General }.certified()
    }

    pub fn substitute(&self, bindings: &HashMap<Param, Poly>) -> Result<PolyMat3> {
        let mut entries: [[Poly; 3]; 3] = Default::default();
        for (i, row) in entries.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = self.entries[i][j].substitute(bindings)?;
            }
        }
        // Substitution preserves both structures.
        Ok(PolyMat3 { entries, kind: self.kind })
    }

    pub fn reduce_square(&self, s: Param, square: &Poly) -> PolyMat3 {
        self.map(|p| p.reduce_square(s, square))
    }
}

impl fmt::Display for PolyMat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "[{},{},{}]", row[0], row[1], row[2])?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn m(rows: [[&str; 3]; 3]) -> [[Poly; 3]; 3] {
        rows.map(|r| r.map(p))
    }

    #[test]
    fn chen_matrix_to_vector() {
        let j = PolyMat3::skew(m([["0", "z", "-y"], ["-z", "0", "0"], ["y", "0", "0"]])).unwrap();
        assert_eq!(j.poisson_vector().unwrap(), PolyVec3::new(p("0"), p("-y"), p("-z")));
    }

    #[test]
    fn three_wave_matrix_to_vector() {
        let j = PolyMat3::skew(m([["0", "-y+1/2*d", "z"], ["y-1/2*d", "0", "0"], ["-z", "0", "0"]])).unwrap();
        assert_eq!(j.poisson_vector().unwrap(), PolyVec3::new(p("0"), p("z"), p("y-1/2*d")));
    }

    #[test]
    fn non_skew_rejected() {
        let g = PolyMat3::general(m([["1", "0", "0"], ["0", "0", "0"], ["0", "0", "0"]]));
        assert_eq!(g.poisson_vector().unwrap_err(), Error::NotSkew);
        assert_eq!(PolyMat3::skew(m([["0", "x", "0"], ["x", "0", "0"], ["0", "0", "0"]])).unwrap_err(), Error::NotSkew);
        assert_eq!(PolyMat3::symmetric(m([["0", "x", "0"], ["-x", "0", "0"], ["0", "0", "0"]])).unwrap_err(), Error::NotSymmetric);
    }

    #[test]
    fn matrix_vector_matches_cross_product() {
        let v = PolyVec3::new(p("x*y"), p("a-z"), p("y^2"));
        let h = p("x^3+y*z-2*a*x");
        let lhs = PolyMat3::from_poisson_vector(&v).mul_vec(&h.grad());
        assert_eq!(lhs, v.cross(&h.grad()));
    }

    #[test]
    fn display() {
        let j = PolyMat3::from_poisson_vector(&PolyVec3::new(p("x"), p("0"), p("0")));
        assert_eq!(j.to_string(), "[[0,0,0],[0,0,-x],[0,x,0]]");
    }
}
