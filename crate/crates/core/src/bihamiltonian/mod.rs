//! Jordan-product Poisson matrices 𝒩 = 𝒥ℛ + ℛ𝒥 and the bi-Hamiltonian
//! systems M ẋ = ∇Ḡ × ∇G they generate.

mod classify;
mod closed_form;
mod jordan;

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::polyfield::{compatibility_residuals, jacobi_residual, names, Param, Poly, PolyMat3, PolyVec3};
use crate::systems::ResistiveSystem;

pub use classify::{n_jacobi_residual, n_jacobi_checks, PoissonCondition};
pub use closed_form::{
    exactness_checks, halton_samples, last_multiplier_residual, lu_potential, three_wave_potential, verify_exactness, ClosedForm, Expr, ExactnessReport,
    ThreeWavePotential,
};
pub use jordan::{generic_pair, jordan_identity_check, jordan_transform, JordanIdentityReport, OrthoMat3, Transformed};

/// 𝒥ℛ + ℛ𝒥, certified skew.
pub fn jordan_anticommutator(j: &PolyMat3, r: &PolyMat3) -> Result<PolyMat3> {
    let n = j.mul(r).add(&r.mul(j));
    PolyMat3::skew(n.entries().clone())
        .map_err(|_| Error::Internal(format!("anticommutator of skew and symmetric is not skew: {n}")))
}

/// Poisson vector of 𝒥ℛ + ℛ𝒥 from the component formulas, with ℛ split into
/// diagonal (R₁, R₂, R₃) and off-diagonal (A, B, C).
pub fn n_components(j: &PolyVec3, r: &PolyMat3) -> PolyVec3 {
    let [jx, jy, jz] = j.components();
    let (r1, r2, r3) = (r.entry(0, 0), r.entry(1, 1), r.entry(2, 2));
    let (a, b, c) = (r.entry(0, 1), r.entry(0, 2), r.entry(1, 2));
    PolyVec3::new(
        &(&(jx * &(r2 + r3)) - &(jy * a)) - &(jz * b),
        &(&(jy * &(r1 + r3)) - &(jx * a)) - &(jz * c),
        &(&(jz * &(r1 + r2)) - &(jx * b)) - &(jy * c),
    )
}

/// N × ∇G, cross-checked against the matrix route.
pub fn generate_biham(n: &PolyVec3, g: &Poly) -> Result<PolyVec3> {
    let residual = jacobi_residual(n);
    if !residual.is_zero() {
        return Err(Error::NotPoisson(residual.to_string()));
    }
    let grad = g.grad();
    let rhs = n.cross(&grad);
    let via_matrix = PolyMat3::from_poisson_vector(n).mul_vec(&grad);
    if rhs != via_matrix {
        return Err(Error::Internal(format!("cross product {rhs} differs from matrix product {via_matrix}")));
    }
    Ok(rhs)
}

/// {F, Ḡ, G} = (1/M) ∇F·(∇Ḡ × ∇G) for a constant multiplier M.
pub fn nambu_bracket(f: &Poly, gbar: &Poly, g: &Poly, m: &Poly) -> Result<Poly> {
    let m = match m.as_constant() {
        Some(c) if c != num_traits::Zero::zero() => c,
        _ => return Err(Error::NonConstantMultiplier(m.to_string())),
    };
    let triple = f.grad().dot(&gbar.grad().cross(&g.grad()));
    Ok(triple.scale(&m.recip()))
}

/// True iff N = 𝒥ℛ + ℛ𝒥 exactly.
pub fn factorize_check(n: &PolyMat3, j: &PolyMat3, r: &PolyMat3) -> bool {
    match jordan_anticommutator(j, r) {
        Ok(product) => product.entries() == n.entries(),
        Err(_) => false,
    }
}

/// Ḡ or M of a derived system.
#[derive(Clone, Debug)]
pub enum Potential {
    Poly(Poly),
    Closed(ClosedForm),
    Unknown,
}

impl std::fmt::Display for Potential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Potential::Poly(p) => write!(f, "{p}"),
            Potential::Closed(c) => write!(f, "{c}"),
            Potential::Unknown => f.write_str("unknown"),
        }
    }
}

/// A conservative system ẋ = N × ∇G with N Poisson.
#[derive(Clone, Debug)]
pub struct DerivedBiHamiltonian {
    pub source: String,
    pub n: PolyVec3,
    pub g: Poly,
    pub gbar: Potential,
    pub m: Potential,
    pub rhs: PolyVec3,
}

impl DerivedBiHamiltonian {
    pub fn new(source: impl Into<String>, n: PolyVec3, g: Poly) -> Result<Self> {
        let rhs = generate_biham(&n, &g)?;
        Ok(DerivedBiHamiltonian {
            source: source.into(),
            n,
            g,
            gbar: Potential::Unknown,
            m: Potential::Unknown,
            rhs,
        })
    }

    pub fn with_potentials(self, gbar: Potential, m: Potential) -> Self {
        DerivedBiHamiltonian { gbar, m, ..self }
    }

    /// ∇G·ẋ, zero by construction.
    pub fn g_rate(&self) -> Poly {
        self.g.grad().dot(&self.rhs)
    }

    /// ∇Ḡ·ẋ when Ḡ is polynomial.
    pub fn gbar_rate(&self) -> Option<Poly> {
        match &self.gbar {
            Potential::Poly(p) => Some(p.grad().dot(&self.rhs)),
            _ => None,
        }
    }

    /// Compatibility residuals of N and ∇G, when Ḡ is polynomial.
    pub fn compatibility(&self) -> Option<(Poly, Poly)> {
        matches!(self.gbar, Potential::Poly(_)).then(|| compatibility_residuals(&self.n, &self.g.grad()))
    }

    /// Comment header followed by one `d?/dt = …` line per coordinate.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# source={}", self.source);
        let _ = writeln!(out, "# N={}", self.n);
        let _ = writeln!(out, "# G={}", self.g);
        let _ = writeln!(out, "# Gbar={}", self.gbar);
        let _ = writeln!(out, "# M={}", self.m);
        for (name, c) in ["x", "y", "z"].iter().zip(self.rhs.components()) {
            let _ = writeln!(out, "d{name}/dt = {c}");
        }
        out
    }
}

/// Ḡ and M for the systems whose potentials are known in closed form, kept
/// only when M·N = ∇Ḡ holds for the given N.
fn known_potentials(sys: &ResistiveSystem, n: &PolyVec3, bindings: &HashMap<Param, Poly>) -> Result<(Potential, Potential)> {
    match sys.name.as_str() {
        "reduced_three_wave" => {
            let pot = three_wave_potential(Poly::param(names::lambda()));
            Ok((Potential::Closed(pot.gbar.substitute(bindings)?), Potential::Closed(pot.m.substitute(bindings)?)))
        }
        "lu" => {
            let (gbar, m) = lu_potential();
            let gbar = gbar.substitute(bindings)?;
            if gbar.grad() == n.scale(&m) {
                Ok((Potential::Poly(gbar), Potential::Poly(m)))
            } else {
                Ok((Potential::Unknown, Potential::Unknown))
            }
        }
        _ => Ok((Potential::Unknown, Potential::Unknown)),
    }
}

/// ẋ = N × ∇G for N = 𝒥ℛ + ℛ𝒥 of `sys` after `bindings`. G defaults to the
/// system's Hamiltonian.
pub fn derive_biham(sys: &ResistiveSystem, g: Option<&Poly>, bindings: &HashMap<Param, Poly>) -> Result<DerivedBiHamiltonian> {
    let bound = sys.substitute(bindings)?;
    let n = jordan_anticommutator(&bound.poisson, &bound.resistance)?.poisson_vector()?;
    let g = g.cloned().unwrap_or_else(|| bound.hamiltonian.clone());
    let (gbar, m) = known_potentials(sys, &n, bindings)?;
    Ok(DerivedBiHamiltonian::new(sys.name.clone(), n, g)?.with_potentials(gbar, m))
}

/// As [`derive_biham`] with N replaced by the Jordan-transformed N′. An
/// identity T reproduces [`derive_biham`] exactly.
pub fn derive_jordan(
    sys: &ResistiveSystem,
    g: Option<&Poly>,
    bindings: &HashMap<Param, Poly>,
    t: &OrthoMat3,
) -> Result<DerivedBiHamiltonian> {
    if t.is_identity() {
        return derive_biham(sys, g, bindings);
    }
    let bound = sys.substitute(bindings)?;
    let out = jordan_transform(&bound.poisson, &bound.resistance, t)?;
    let n = out.np.poisson_vector()?;
    let residual = jacobi_residual(&n);
    let residual = match t.radical() {
        Some((s, square)) => residual.reduce_square(*s, square),
        None => residual,
    };
    if !residual.is_zero() {
        return Err(Error::NotPoisson(residual.to_string()));
    }
    let g = g.cloned().unwrap_or_else(|| bound.hamiltonian.clone());
    let rhs = t.reduce_vec(&n.cross(&g.grad()));
    Ok(DerivedBiHamiltonian {
        source: sys.name.clone(),
        n,
        g,
        gbar: Potential::Unknown,
        m: Potential::Unknown,
        rhs,
    })
}
