use std::collections::HashMap;

use super::jordan_anticommutator;
use crate::checks::CheckOutcome;
use crate::polyfield::{jacobi_residual, Param, Poly, Rational};
use crate::systems::ResistiveSystem;

/// When the anticommutator 𝒩 of a registry system satisfies the Jacobi
/// identity.
#[derive(Clone, Debug, PartialEq)]
pub enum PoissonCondition {
    Always,
    /// Poisson once `constraint` is imposed; not Poisson at `violation`.
    When {
        constraint: Vec<(Param, Poly)>,
        violation: Vec<(Param, Rational)>,
    },
    Never,
}

impl PoissonCondition {
    pub fn for_system(name: &str) -> Option<PoissonCondition> {
        let p = Param::new;
        let r = |n: i64| Rational::from_integer(n.into());
        Some(match name {
            "reduced_three_wave" | "lu" => PoissonCondition::Always,
            "rabinovich" => PoissonCondition::When {
                constraint: vec![(p("k2"), -Poly::param(p("k3")))],
                violation: vec![(p("k2"), r(1)), (p("k3"), r(1))],
            },
            "chen" => PoissonCondition::When {
                constraint: vec![(p("g"), Poly::param(p("a")))],
                violation: vec![(p("a"), r(2)), (p("g"), r(1))],
            },
            "modified_lu" | "qi" => PoissonCondition::Never,
            _ => return None,
        })
    }
}

/// J_N·(∇×J_N) for 𝒩 = 𝒥ℛ + ℛ𝒥, symbolic in every parameter.
pub fn n_jacobi_residual(sys: &ResistiveSystem) -> Poly {
    let n = jordan_anticommutator(&sys.poisson, &sys.resistance).expect("registry pairs are skew/symmetric");
    jacobi_residual(&n.poisson_vector().expect("certified skew"))
}

/// A coordinate monomial whose coefficient is a single term with only
/// non-positive parameter powers, e.g. −1/(4α³). Such a coefficient is
/// nonzero wherever it is defined, so the residual never vanishes.
fn nonvanishing_witness(residual: &Poly) -> Option<String> {
    residual.coefficients_in_vars().into_iter().find_map(|(exps, coeff)| {
        let (_, mono) = coeff.as_invertible_monomial()?;
        if mono.params().iter().any(|&(_, e)| e > 0) {
            return None;
        }
        let mono: Vec<String> = ["x", "y", "z"]
            .iter()
            .zip(exps)
            .filter(|(_, e)| *e > 0)
            .map(|(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        let mono = if mono.is_empty() { "1".to_string() } else { mono.join("*") };
        Some(format!("{mono}:{coeff}"))
    })
}

fn describe_bindings<T: std::fmt::Display>(list: &[(Param, T)]) -> String {
    list.iter().map(|(p, v)| format!("{p}={v}")).collect::<Vec<_>>().join(",")
}

/// The `n.jacobi` entries for one system.
pub fn n_jacobi_checks(sys: &ResistiveSystem) -> Vec<CheckOutcome> {
    let residual = n_jacobi_residual(sys);
    let condition = PoissonCondition::for_system(&sys.name);
    let mut out = Vec::new();
    if residual.is_zero() {
        let ok = condition != Some(PoissonCondition::Never);
        out.push(CheckOutcome::pass_if(ok, "n.jacobi", "residual=0"));
        return out;
    }
    out.push(CheckOutcome::info("n.jacobi", format!("nonzero residual={residual}")));
    match condition {
        None => {}
        Some(PoissonCondition::Always) => {
            out.push(CheckOutcome::pass_if(false, "n.jacobi", "classification=always expected zero residual"));
        }
        Some(PoissonCondition::When { constraint, violation }) => {
            let imposed: HashMap<Param, Poly> = constraint.iter().cloned().collect();
            let collapses = residual.substitute(&imposed).map(|r| r.is_zero()).unwrap_or(false);
            let at: HashMap<Param, Poly> =
                violation.iter().map(|(p, v)| (*p, Poly::constant(v.clone()))).collect();
            let violated = residual.substitute(&at).map(|r| !r.is_zero()).unwrap_or(false);
            out.push(CheckOutcome::pass_if(
                collapses && violated,
                "n.jacobi",
                format!(
                    "classification=conditional constraint={} nonzero-at={}",
                    describe_bindings(&constraint),
                    describe_bindings(&violation)
                ),
            ));
        }
        Some(PoissonCondition::Never) => {
            let witness = nonvanishing_witness(&residual);
            let defaults: HashMap<Param, Poly> = sys
                .params
                .iter()
                .filter_map(|p| Some((p.param, Poly::constant(p.default.clone()?))))
                .collect();
            let generic = residual.substitute(&defaults).map(|r| !r.is_zero()).unwrap_or(false);
            out.push(CheckOutcome::pass_if(
                witness.is_some() && generic,
                "n.jacobi",
                format!("classification=never witness={}", witness.unwrap_or_else(|| "none".into())),
            ));
        }
    }
    out
}
