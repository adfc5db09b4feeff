//! Conformal Hamiltonian fields X = 𝐉 × ∇H + a·(x, y, z).

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::checks::CheckOutcome;
use crate::error::{Error, Result};
use crate::polyfield::{jacobi_residual, Param, Poly, PolyVec3};
use crate::systems::ResistiveSystem;

#[derive(Clone, Debug, PartialEq)]
pub struct ConformalDecomposition {
    pub system: String,
    pub j: PolyVec3,
    pub h: Poly,
    pub a: Poly,
    /// Substitutions under which the field equals the registry system.
    pub constraint: Vec<(Param, Poly)>,
}

fn p(s: &str) -> Poly {
    s.parse().expect("literal polynomial")
}

impl ConformalDecomposition {
    /// Checks that 𝐉 is Poisson and that 𝐉 × ∇H is divergence-free.
    pub fn new(system: &str, j: PolyVec3, h: Poly, a: Poly, constraint: Vec<(Param, Poly)>) -> Result<Self> {
        let residual = jacobi_residual(&j);
        if !residual.is_zero() {
            return Err(Error::NotPoisson(residual.to_string()));
        }
        let div = j.cross(&h.grad()).divergence();
        if !div.is_zero() {
            return Err(Error::VolumeNotPreserved(div.to_string()));
        }
        Ok(ConformalDecomposition { system: system.to_string(), j, h, a, constraint })
    }

    pub fn builtin(system: &str) -> Option<ConformalDecomposition> {
        let param = Param::new;
        let v = |a: &str, b: &str, c: &str| PolyVec3::new(p(a), p(b), p(c));
        let alpha_constraint = || vec![(param("b"), p("a")), (param("g"), p("-a"))];
        let d = match system {
            "reduced_three_wave" | "three_wave" => Self::new(
                "reduced_three_wave",
                v("0", "z", "y-1/2*d"),
                p("x^2+y^2+z"),
                p("-2"),
                vec![(param("g"), p("-2"))],
            ),
            "chen" => Self::new("chen", v("-x", "-y", "g-z"), p("1/2*x^2-a*z"), p("-a"), alpha_constraint()),
            "lu" => Self::new("lu", v("0", "-y", "-z"), p("1/2*x^2-a*z"), p("-a"), alpha_constraint()),
            _ => return None,
        };
        Some(d.expect("built-in decompositions are valid"))
    }

    pub fn constraint_map(&self) -> HashMap<Param, Poly> {
        self.constraint.iter().cloned().collect()
    }

    pub fn substitute(&self, bindings: &HashMap<Param, Poly>) -> Result<ConformalDecomposition> {
        Ok(ConformalDecomposition {
            system: self.system.clone(),
            j: self.j.substitute(bindings)?,
            h: self.h.substitute(bindings)?,
            a: self.a.substitute(bindings)?,
            constraint: self.constraint.clone(),
        })
    }

    /// The decomposition with its own constraint and then `bindings` applied.
    pub fn constrained(&self, bindings: &HashMap<Param, Poly>) -> Result<ConformalDecomposition> {
        self.substitute(&self.constraint_map())?.substitute(bindings)
    }

    pub fn describe_constraint(&self) -> String {
        self.constraint.iter().map(|(p, v)| format!("{p}={v}")).collect::<Vec<_>>().join(",")
    }

    /// Header and field lines in the same layout as derived bi-Hamiltonian
    /// systems.
    pub fn render(&self) -> Result<String> {
        let field = conformal_field(self)?;
        let mut out = String::new();
        let _ = writeln!(out, "# source={}", self.system);
        let _ = writeln!(out, "# J={}", self.j);
        let _ = writeln!(out, "# H={}", self.h);
        let _ = writeln!(out, "# a={}", self.a);
        let _ = writeln!(out, "# constraint={}", self.describe_constraint());
        for (name, c) in ["x", "y", "z"].iter().zip(field.components()) {
            let _ = writeln!(out, "d{name}/dt = {c}");
        }
        Ok(out)
    }
}

/// 𝐉 × ∇H + a·(x, y, z).
pub fn conformal_field(d: &ConformalDecomposition) -> Result<PolyVec3> {
    let conservative = d.j.cross(&d.h.grad());
    let div = conservative.divergence();
    if !div.is_zero() {
        return Err(Error::VolumeNotPreserved(div.to_string()));
    }
    Ok(&conservative + &PolyVec3::position().scale(&d.a))
}

/// a·Γ(H), cross-checked against ∇H·X.
pub fn euler_energy_rate(d: &ConformalDecomposition) -> Result<Poly> {
    let rate = &d.a * &d.h.euler_operator();
    let direct = d.h.grad().dot(&conformal_field(d)?);
    if rate != direct {
        return Err(Error::Internal(format!("a*Gamma(H)={rate} but grad(H).X={direct}")));
    }
    Ok(rate)
}

/// `conformal.match` and `conformal.div3a` for a registry system. `sys` is
/// the unsubstituted registry entry; `bindings` are applied after the
/// decomposition's own constraint.
pub fn verify_decomposition(
    sys: &ResistiveSystem,
    d: Option<&ConformalDecomposition>,
    bindings: &HashMap<Param, Poly>,
) -> Vec<CheckOutcome> {
    let Some(d) = d else {
        return vec![CheckOutcome::info("conformal.match", "no decomposition registered")];
    };
    let constraint = d.describe_constraint();
    let result = (|| -> Result<Vec<CheckOutcome>> {
        let target = sys.substitute(&d.constraint_map())?.substitute(bindings)?;
        let dc = d.constrained(bindings)?;
        let field = conformal_field(&dc)?;
        let rhs = target.assemble();
        let matched = if field == rhs {
            CheckOutcome::pass_if(true, "conformal.match", format!("constraint={constraint}"))
        } else {
            CheckOutcome::pass_if(false, "conformal.match", format!("constraint={constraint} difference={}", &field - &rhs))
        };
        let three_a = dc.a.scale(&crate::polyfield::int(3));
        let div = field.divergence();
        let conservative = dc.j.cross(&dc.h.grad()).divergence();
        let original = target.field_divergence();
        let div_ok = div == three_a && conservative.is_zero() && original == three_a;
        let div3a = CheckOutcome::pass_if(
            div_ok,
            "conformal.div3a",
            format!("value={div} 3a={three_a} conservative={conservative} system={original}"),
        );
        Ok(vec![matched, div3a])
    })();
    result.unwrap_or_else(|e| vec![CheckOutcome::pass_if(false, "conformal.match", e.to_string())])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::{all_passed, Status};
    use crate::systems::Registry;

    fn v(a: &str, b: &str, c: &str) -> PolyVec3 {
        PolyVec3::new(p(a), p(b), p(c))
    }

    #[test]
    fn chen_field() {
        let d = ConformalDecomposition::builtin("chen").unwrap();
        assert_eq!(conformal_field(&d).unwrap(), v("a*y-a*x", "g*x-a*x-x*z-a*y", "x*y-a*z"));
    }

    #[test]
    fn trivial_fields() {
        let d = ConformalDecomposition::builtin("lu").unwrap();
        let zero_a = ConformalDecomposition { a: Poly::zero(), ..d.clone() };
        assert_eq!(conformal_field(&zero_a).unwrap(), d.j.cross(&d.h.grad()));
        let constant_h = ConformalDecomposition { h: Poly::int(5), ..d };
        assert_eq!(conformal_field(&constant_h).unwrap(), PolyVec3::position().scale(&p("-a")));
    }

    #[test]
    fn volume_hypothesis_is_enforced() {
        let err = ConformalDecomposition::new("t", v("0", "0", "1"), p("x*y+z^2*x"), Poly::zero(), vec![]);
        assert!(err.is_ok());
        let bad = ConformalDecomposition::new("t", v("z", "0", "0"), p("y"), Poly::zero(), vec![]);
        assert_eq!(bad, Err(Error::VolumeNotPreserved("1".into())));
        let d = ConformalDecomposition { j: v("z", "0", "0"), h: p("y"), ..ConformalDecomposition::builtin("lu").unwrap() };
        assert!(matches!(conformal_field(&d), Err(Error::VolumeNotPreserved(_))));
    }

    #[test]
    fn builtins_verify() {
        let reg = Registry::builtin();
        for name in ["reduced_three_wave", "chen", "lu"] {
            let d = ConformalDecomposition::builtin(name);
            let report = verify_decomposition(reg.get(name).unwrap(), d.as_ref(), &HashMap::new());
            assert_eq!(report.len(), 2);
            assert!(all_passed(&report), "{name}: {report:?}");
        }
        let tw = verify_decomposition(
            reg.get("reduced_three_wave").unwrap(),
            ConformalDecomposition::builtin("three_wave").as_ref(),
            &HashMap::new(),
        );
        assert_eq!(tw[1].detail, "value=-6 3a=-6 conservative=0 system=-6");
    }

    #[test]
    fn unconstrained_chen_fails() {
        let reg = Registry::builtin();
        let d = ConformalDecomposition { constraint: vec![], ..ConformalDecomposition::builtin("chen").unwrap() };
        let report = verify_decomposition(reg.get("chen").unwrap(), Some(&d), &HashMap::new());
        assert_eq!(report[0].status, Status::Fail);
        assert!(report[0].detail.contains("difference="));
    }

    #[test]
    fn unregistered() {
        let reg = Registry::builtin();
        let report = verify_decomposition(reg.get("qi").unwrap(), ConformalDecomposition::builtin("qi").as_ref(), &HashMap::new());
        assert_eq!(report, vec![CheckOutcome::info("conformal.match", "no decomposition registered")]);
    }

    #[test]
    fn energy_rate_is_degree_times_a() {
        let d = ConformalDecomposition::new("t", v("0", "0", "1"), p("x^2+y^2"), p("-2"), vec![]).unwrap();
        assert_eq!(euler_energy_rate(&d).unwrap(), p("-4*x^2-4*y^2"));
        let zero = ConformalDecomposition { a: Poly::zero(), ..d };
        assert!(euler_energy_rate(&zero).unwrap().is_zero());
        let chen = ConformalDecomposition::builtin("chen").unwrap();
        assert_eq!(euler_energy_rate(&chen).unwrap(), p("-a*x^2+a^2*z"));
    }
}
