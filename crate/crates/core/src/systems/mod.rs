//! Resistive- and port-Hamiltonian systems ẋ = (𝒥 − ℛ)∇H + 𝒱 and the
//! registry of built-in examples.

mod registry;

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::checks::{CheckOutcome, Status};
use crate::error::{Error, Result};
use crate::polyfield::{jacobi_residual, MatrixKind, Param, Poly, PolyMat3, PolyVec3, Rational};

pub use registry::Registry;

#[derive(Clone, Debug, PartialEq)]
pub struct ParamSpec {
    pub param: Param,
    pub default: Option<Rational>,
}

/// Known closed forms for each system, compared against the computed
/// ones by [`verify_system`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StatedValues {
    /// 𝒳_H(H) with the source switched off.
    pub energy_rate: Option<Poly>,
    pub divergence: Option<Poly>,
    /// Whether ∇×**J** = 0 is asserted.
    pub irrotational: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResistiveSystem {
    pub name: String,
    pub dimension: u8,
    pub poisson: PolyMat3,
    pub resistance: PolyMat3,
    pub hamiltonian: Poly,
    pub source: PolyVec3,
    pub params: Vec<ParamSpec>,
    pub reference_rhs: PolyVec3,
    pub stated: StatedValues,
}

impl ResistiveSystem {
    /// Checks the structural invariants: 𝒥 skew and Poisson, ℛ symmetric,
    /// and the assembled field equal to the reference right-hand side.
    pub fn validate(&self) -> Result<()> {
        let j = self.poisson.poisson_vector()?;
        let residual = jacobi_residual(&j);
        if !residual.is_zero() {
            return Err(Error::NotPoisson(residual.to_string()));
        }
        if self.resistance.kind() != MatrixKind::Symmetric && !self.resistance.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let rhs = self.assemble();
        if rhs != self.reference_rhs {
            return Err(Error::Internal(format!(
                "{}: assembled field {rhs} differs from reference {}",
                self.name, self.reference_rhs
            )));
        }
        Ok(())
    }

    pub fn poisson_vector(&self) -> PolyVec3 {
        self.poisson.poisson_vector().expect("registry matrices are skew")
    }

    /// (𝒥 − ℛ)∇H + 𝒱.
    pub fn assemble(&self) -> PolyVec3 {
        let grad_h = self.hamiltonian.grad();
        let conservative = self.poisson.mul_vec(&grad_h);
        let resistive = self.resistance.mul_vec(&grad_h);
        &(&conservative - &resistive) + &self.source
    }

    /// The two halves 𝒥∇H and −ℛ∇H separately.
    pub fn split_field(&self) -> (PolyVec3, PolyVec3) {
        let grad_h = self.hamiltonian.grad();
        let resistive = self.resistance.mul_vec(&grad_h);
        (self.poisson.mul_vec(&grad_h), &PolyVec3::zero() - &resistive)
    }

    /// 𝒳_H(H) = ∇H·(𝒥 − ℛ)∇H. Only defined without a source term.
    pub fn energy_rate(&self) -> Result<Poly> {
        if !self.source.is_zero() {
            return Err(Error::SourceTermPresent(self.source.to_string()));
        }
        Ok(self.hamiltonian.grad().dot(&self.assemble()))
    }

    /// −(∇H)ᵀℛ∇H.
    pub fn dissipation(&self) -> Poly {
        let grad_h = self.hamiltonian.grad();
        -grad_h.dot(&self.resistance.mul_vec(&grad_h))
    }

    pub fn field_divergence(&self) -> Poly {
        self.assemble().divergence()
    }

    pub fn without_source(&self) -> ResistiveSystem {
        ResistiveSystem { source: PolyVec3::zero(), ..self.clone() }
    }

    /// Applies parameter substitutions everywhere, including the stated
    /// values. Parameters that were bound disappear from the parameter list.
    pub fn substitute(&self, bindings: &HashMap<Param, Poly>) -> Result<ResistiveSystem> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let opt = |p: &Option<Poly>| p.as_ref().map(|q| q.substitute(bindings)).transpose();
        Ok(ResistiveSystem {
            name: self.name.clone(),
            dimension: self.dimension,
            poisson: self.poisson.substitute(bindings)?,
            resistance: self.resistance.substitute(bindings)?,
            hamiltonian: self.hamiltonian.substitute(bindings)?,
            source: self.source.substitute(bindings)?,
            params: self
                .params
                .iter()
                .filter(|p| !bindings.contains_key(&p.param))
                .cloned()
                .collect(),
            reference_rhs: self.reference_rhs.substitute(bindings)?,
            stated: StatedValues {
                energy_rate: opt(&self.stated.energy_rate)?,
                divergence: opt(&self.stated.divergence)?,
                irrotational: self.stated.irrotational,
            },
        })
    }

    /// Default numeric values for every parameter that has one.
    pub fn default_values(&self) -> HashMap<Param, f64> {
        use num_traits::ToPrimitive;
        self.params
            .iter()
            .filter_map(|p| Some((p.param, p.default.as_ref()?.to_f64()?)))
            .collect()
    }

    /// One field per line, in the polynomial text grammar.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        let params: Vec<String> = self
            .params
            .iter()
            .map(|p| match &p.default {
                Some(v) => format!("{}={}", p.param, v),
                None => p.param.to_string(),
            })
            .collect();
        let _ = writeln!(out, "name: {}", self.name);
        let _ = writeln!(out, "dimension: {}", self.dimension);
        let _ = writeln!(out, "params: {}", params.join(" "));
        let _ = writeln!(out, "H: {}", self.hamiltonian);
        let _ = writeln!(out, "J: {}", self.poisson);
        let _ = writeln!(out, "R: {}", self.resistance);
        let _ = writeln!(out, "V: {}", self.source);
        let _ = writeln!(out, "rhs: {}", self.reference_rhs);
        out
    }
}

/// {f, g} = (∇f)ᵀ 𝒥 (∇g).
pub fn poisson_bracket(f: &Poly, g: &Poly, j: &PolyMat3) -> Poly {
    f.grad().dot(&j.mul_vec(&g.grad()))
}

/// (f, g) = (∇f)ᵀ ℛ (∇g), the symmetric Leibniz bracket of a resistance
/// matrix.
pub fn symmetric_bracket(f: &Poly, g: &Poly, r: &PolyMat3) -> Poly {
    f.grad().dot(&r.mul_vec(&g.grad()))
}

/// Structural and stated-value checks for one system. Failures are report
/// entries, never errors.
pub fn verify_system(sys: &ResistiveSystem) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    out.push(CheckOutcome::pass_if(sys.poisson.is_skew(), "skew.J", ""));
    out.push(CheckOutcome::pass_if(sys.resistance.is_symmetric(), "symmetric.R", ""));

    match sys.poisson.poisson_vector() {
        Ok(j) => {
            let residual = jacobi_residual(&j);
            out.push(CheckOutcome::pass_if(residual.is_zero(), "jacobi.J", format!("residual={residual}")));
            let irrotational = j.curl().is_zero();
            match sys.stated.irrotational {
                Some(stated) => out.push(CheckOutcome::pass_if(
                    stated == irrotational,
                    "curl.J",
                    format!("irrotational={irrotational}"),
                )),
                None => out.push(CheckOutcome::info("curl.J", format!("irrotational={irrotational}"))),
            }
        }
        Err(_) => out.push(CheckOutcome::new(Status::Fail, "jacobi.J", "J is not skew")),
    }

    let rhs = sys.assemble();
    if rhs == sys.reference_rhs {
        out.push(CheckOutcome::new(Status::Pass, "rhs.match", ""));
    } else {
        let diff = &rhs - &sys.reference_rhs;
        out.push(CheckOutcome::new(Status::Fail, "rhs.match", format!("difference={diff}")));
    }

    let unsourced = sys.without_source();
    let rate = unsourced.energy_rate().expect("source removed");
    let note = if sys.source.is_zero() { "" } else { " (V=0)" };
    match &sys.stated.energy_rate {
        Some(expected) => out.push(CheckOutcome::pass_if(
            &rate == expected && rate == unsourced.dissipation(),
            "energyrate.match",
            format!("value={rate}{note}"),
        )),
        None => out.push(CheckOutcome::info("energyrate.match", format!("value={rate}{note}"))),
    }

    let div = sys.field_divergence();
    match &sys.stated.divergence {
        Some(expected) => out.push(CheckOutcome::pass_if(&div == expected, "div.match", format!("value={div}"))),
        None => out.push(CheckOutcome::info("div.match", format!("value={div}"))),
    }
    let (cons, res) = sys.split_field();
    out.push(CheckOutcome::info(
        "div.split",
        format!("J-part={} R-part={}", cons.divergence(), res.divergence()),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::all_passed;
    use crate::polyfield::names::*;

    fn p(s: &str) -> Poly {
        s.parse().unwrap()
    }

    fn v(a: &str, b: &str, c: &str) -> PolyVec3 {
        PolyVec3::new(p(a), p(b), p(c))
    }

    fn reg() -> &'static Registry {
        Registry::builtin()
    }

    #[test]
    fn assembles_reference_equations() {
        let chen = reg().get("chen").unwrap();
        assert_eq!(chen.assemble(), v("a*y-a*x", "g*x-a*x+g*y-x*z", "x*y-b*z"));
        let rab = reg().get("rabinovich").unwrap();
        assert_eq!(rab.assemble(), v("q*y-k1*x+y*z", "q*x-k2*y-x*z", "-k3*z+x*y"));
        let rlc = reg().get("rlc_circuit").unwrap().without_source();
        assert_eq!(rlc.assemble(), v("y", "-R*y*L^-1-x*L^-1*C^-1", "0"));
    }

    #[test]
    fn energy_rates() {
        assert_eq!(reg().get("reduced_three_wave").unwrap().energy_rate().unwrap(), p("2*g*x^2+2*g*y^2-2*z"));
        assert_eq!(
            reg().get("rabinovich").unwrap().energy_rate().unwrap(),
            p("-k1*x^2-k2*y^2-k3*z^2+2*q*x*y+x*y*z")
        );
        assert_eq!(reg().get("qi").unwrap().energy_rate().unwrap(), p("-a*x^2+a*b*z+x*y*z"));
    }

    #[test]
    fn energy_rate_refuses_sources() {
        let rlc = reg().get("rlc_circuit").unwrap();
        assert!(matches!(rlc.energy_rate(), Err(Error::SourceTermPresent(_))));
        assert_eq!(rlc.without_source().energy_rate().unwrap(), p("-R*y^2*L^-1"));
    }

    #[test]
    fn divergences() {
        assert_eq!(reg().get("rabinovich").unwrap().field_divergence(), p("-k1-k2-k3"));
        assert_eq!(reg().get("qi").unwrap().field_divergence(), p("-a-b-1"));
        assert_eq!(reg().get("lu").unwrap().field_divergence(), p("-a-b+g"));
    }

    #[test]
    fn brackets() {
        let chen = reg().get("chen").unwrap();
        assert_eq!(poisson_bracket(&Poly::x(), &chen.hamiltonian, &chen.poisson), p("a*y"));
        let canonical = PolyMat3::from_poisson_vector(&v("0", "0", "-1"));
        assert_eq!(poisson_bracket(&Poly::x(), &Poly::y(), &canonical), Poly::int(1));

        let rab = reg().get("rabinovich").unwrap();
        let h = &rab.hamiltonian;
        assert_eq!(
            symmetric_bracket(h, h, &rab.resistance),
            p("k1*x^2+k2*y^2+k3*z^2-2*q*x*y-x*y*z")
        );
    }

    #[test]
    fn rlc_energy_rate_is_non_positive() {
        let rate = reg().get("rlc_circuit").unwrap().without_source().energy_rate().unwrap();
        for (r, l, i) in [(0.5, 1.0, 3.0), (2.0, 0.1, -1.5), (1e-3, 7.0, 0.0)] {
            let env = [
                (crate::polyfield::Symbol::Param(Param::new("R")), r),
                (crate::polyfield::Symbol::Param(Param::new("L")), l),
                (crate::polyfield::Symbol::Var(crate::polyfield::Var::Y), i),
            ]
            .into_iter()
            .collect();
            assert!(rate.eval_f64(&env).unwrap() <= 0.0);
        }
    }

    #[test]
    fn verify_reports() {
        let chen = verify_system(reg().get("chen").unwrap());
        assert!(all_passed(&chen), "{chen:?}");
        assert!(chen.iter().any(|o| o.id == "curl.J" && o.detail == "irrotational=true"));
        assert!(chen.iter().any(|o| o.id == "div.match" && o.detail == "value=-a-b+g"));

        let mlu = verify_system(reg().get("modified_lu").unwrap());
        assert!(all_passed(&mlu));
        assert!(mlu.iter().any(|o| o.id == "curl.J" && o.detail == "irrotational=false"));
    }

    #[test]
    fn corrupted_reference_fails() {
        let mut chen = reg().get("chen").unwrap().clone();
        chen.reference_rhs.0[2] = p("x*y");
        let report = verify_system(&chen);
        let rhs = report.iter().find(|o| o.id == "rhs.match").unwrap();
        assert_eq!(rhs.status, Status::Fail);
        assert_eq!(rhs.detail, "difference=(0,0,-z*b)");
        assert!(chen.validate().is_err());
    }

    #[test]
    fn substitution_drops_bound_parameters() {
        let chen = reg().get("chen").unwrap();
        let sub = chen.substitute(&HashMap::from([(gamma(), Poly::param(alpha()))])).unwrap();
        assert!(sub.params.iter().all(|p| p.param != gamma()));
        assert_eq!(sub.field_divergence(), p("-b"));
        sub.validate().unwrap();
    }

    #[test]
    fn describe_is_line_per_field() {
        let text = reg().get("chen").unwrap().describe();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "name: chen");
        assert_eq!(lines[2], "params: a=35 b=3 g=28");
        assert_eq!(lines[3], "H: 1/2*x^2-z*a");
        assert_eq!(lines[4], "J: [[0,z,-y],[-z,0,0],[y,0,0]]");
        assert_eq!(lines[7], "rhs: (-x*a+y*a,-x*z-x*a+x*g+y*g,x*y-z*b)");
        assert_eq!(lines.len(), 8);
    }
}
