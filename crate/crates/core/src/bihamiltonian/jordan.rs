use num_traits::{One, Signed, Zero};

use super::jordan_anticommutator;
use crate::error::{Error, Result};
use crate::polyfield::{names, Param, Poly, PolyMat3, PolyVec3, Rational};

/// Orthogonal 3×3 matrix, possibly over an adjoined radical `s` with
/// `s² = square`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthoMat3 {
    m: PolyMat3,
    radical: Option<(Param, Poly)>,
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if *q < Rational::zero() {
        return None;
    }
    let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

impl OrthoMat3 {
    /// Fails with [`Error::NotOrthogonal`] unless TᵀT reduces to the identity.
    pub fn new(m: PolyMat3, radical: Option<(Param, Poly)>) -> Result<Self> {
        let t = OrthoMat3 { m, radical };
        let product = t.reduce(&t.m.transpose().mul(&t.m));
        if product.entries() != PolyMat3::identity().entries() {
            return Err(Error::NotOrthogonal(product.to_string()));
        }
        Ok(t)
    }

    pub fn identity() -> Self {
        OrthoMat3 { m: PolyMat3::identity(), radical: None }
    }

    /// `[[1,0,0],[0,Δ,−s],[0,s,Δ]]` with s = √(1−Δ²).
    pub fn delta_rotation() -> Self {
        let (d, s) = (Poly::param(names::big_delta()), Poly::param(names::radical()));
        let z = Poly::zero;
        let m = PolyMat3::general([
            [Poly::one(), z(), z()],
            [z(), d.clone(), -&s],
            [z(), s, d.clone()],
        ]);
        let square = &Poly::one() - &(&d * &d);
        OrthoMat3::new(m, Some((names::radical(), square))).expect("rotation is orthogonal")
    }

    /// Fixes Δ. When 1−Δ² is a rational square the radical is eliminated.
    pub fn with_delta(&self, delta: &Rational) -> Result<Self> {
        if delta.abs() > Rational::one() {
            return Err(Error::InvalidConfig(format!("delta={delta} outside [-1,1]")));
        }
        let big_delta = names::big_delta();
        let mut bindings = std::collections::HashMap::from([(big_delta, Poly::constant(delta.clone()))]);
        let radical = match &self.radical {
            Some((s, square)) => {
                let square = square.substitute(&bindings)?;
                match square.as_constant().and_then(|q| rational_sqrt(&q)) {
                    Some(root) => {
                        bindings.insert(*s, Poly::constant(root));
                        None
                    }
                    None => Some((*s, square)),
                }
            }
            None => None,
        };
        OrthoMat3::new(self.m.substitute(&bindings)?, radical)
    }

    pub fn matrix(&self) -> &PolyMat3 {
        &self.m
    }

    pub fn radical(&self) -> Option<&(Param, Poly)> {
        self.radical.as_ref()
    }

    pub fn is_identity(&self) -> bool {
        self.m.entries() == PolyMat3::identity().entries()
    }

    fn reduce(&self, a: &PolyMat3) -> PolyMat3 {
        match &self.radical {
            Some((s, square)) => a.reduce_square(*s, square),
            None => a.clone(),
        }
    }

    pub fn reduce_vec(&self, v: &PolyVec3) -> PolyVec3 {
        match &self.radical {
            Some((s, square)) => v.reduce_square(*s, square),
            None => v.clone(),
        }
    }

    /// T A Tᵀ.
    pub fn conjugate(&self, a: &PolyMat3) -> PolyMat3 {
        self.reduce(&self.m.mul(a).mul(&self.m.transpose()))
    }

    pub fn apply(&self, v: &PolyVec3) -> PolyVec3 {
        self.reduce_vec(&self.m.mul_vec(v))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transformed {
    pub jp: PolyMat3,
    pub rp: PolyMat3,
    pub np: PolyMat3,
}

/// 𝒥′ = T𝒥Tᵀ, ℛ′ = TℛTᵀ and 𝒩′ = 𝒥′ℛ′ + ℛ′𝒥′, cross-checked against T𝒩Tᵀ.
pub fn jordan_transform(j: &PolyMat3, r: &PolyMat3, t: &OrthoMat3) -> Result<Transformed> {
    let jp = PolyMat3::skew(t.conjugate(j).entries().clone())?;
    let rp = PolyMat3::symmetric(t.conjugate(r).entries().clone())?;
    let np = t.reduce(&jordan_anticommutator(&jp, &rp)?);
    let direct = t.conjugate(&jordan_anticommutator(j, r)?);
    if np.entries() != direct.entries() {
        return Err(Error::Internal(format!("transformed N {np} differs from T N Tt {direct}")));
    }
    let np = PolyMat3::skew(np.entries().clone())?;
    Ok(Transformed { jp, rp, np })
}

/// Both readings of the Jordan-like identities
/// (JR)(JJ) = J(R(JJ)) and (RJ)(RR) = R(J(RR)).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JordanIdentityReport {
    /// Juxtaposition read as the matrix product.
    pub matrix: [bool; 2],
    /// Juxtaposition read as a∘b = ab + ba.
    pub jordan: [bool; 2],
}

impl JordanIdentityReport {
    pub fn holds(&self) -> bool {
        self.matrix.iter().chain(&self.jordan).all(|&b| b)
    }
}

pub fn jordan_identity_check(j: &PolyMat3, r: &PolyMat3) -> JordanIdentityReport {
    let eq = |a: &PolyMat3, b: &PolyMat3| a.entries() == b.entries();
    let circ = |a: &PolyMat3, b: &PolyMat3| a.mul(b).add(&b.mul(a));
    let identity = |a: &PolyMat3, b: &PolyMat3, prod: &dyn Fn(&PolyMat3, &PolyMat3) -> PolyMat3| {
        let aa = prod(a, a);
        eq(&prod(&prod(a, b), &aa), &prod(a, &prod(b, &aa)))
    };
    let matrix = |a: &PolyMat3, b: &PolyMat3| a.mul(b);
    JordanIdentityReport {
        matrix: [identity(j, r, &matrix), identity(r, j, &matrix)],
        jordan: [identity(j, r, &circ), identity(r, j, &circ)],
    }
}

/// Skew J and symmetric R whose nine independent entries are parameters.
pub fn generic_pair() -> (PolyMat3, PolyMat3) {
    let p = |n: &str| Poly::param(Param::new(n));
    let j = PolyMat3::from_poisson_vector(&PolyVec3::new(p("j1"), p("j2"), p("j3")));
    let r = PolyMat3::symmetric_from_parts([p("r1"), p("r2"), p("r3")], [p("ra"), p("rb"), p("rc")]);
    (j, r)
}
