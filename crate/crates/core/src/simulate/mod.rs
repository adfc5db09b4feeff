//! Numerical integration of polynomial vector fields with invariant
//! monitoring.

mod output;
mod stepper;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::bihamiltonian::ClosedForm;
use crate::error::{Error, Result};
use crate::polyfield::{CompiledPoly, CompiledVec3, Param, Poly, PolyVec3};

/// Integration stops once the state norm exceeds this.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Rk4,
    Rk45,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Rk4 => "rk4",
            Method::Rk45 => "rk45",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rk4" => Ok(Method::Rk4),
            "rk45" => Ok(Method::Rk45),
            other => Err(Error::InvalidConfig(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub method: Method,
    /// Fixed step for rk4, initial step for rk45.
    pub step: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub param_bindings: HashMap<Param, f64>,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            method: Method::Rk4,
            step: 1e-3,
            t_start: 0.0,
            t_end: 10.0,
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            param_bindings: HashMap::new(),
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if !(self.t_start.is_finite() && self.t_end.is_finite()) || self.t_end <= self.t_start {
            return bad("t_end must be finite and greater than t_start");
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return bad("step must be positive");
        }
        if self.method == Method::Rk45 && !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return bad("tolerances must be positive");
        }
        if let Some((p, _)) = self.param_bindings.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidConfig(format!("parameter {p} is not finite")));
        }
        Ok(())
    }
}

/// A scalar monitored along a trajectory.
#[derive(Clone, Debug)]
pub enum Quantity {
    Poly(Poly),
    Closed(ClosedForm),
}

/// A field together with the quantities to monitor.
#[derive(Clone, Debug)]
pub struct Simulation {
    pub rhs: PolyVec3,
    pub hamiltonian: Poly,
    pub g: Option<Poly>,
    pub gbar: Option<Quantity>,
}

impl Simulation {
    pub fn new(rhs: PolyVec3, hamiltonian: Poly) -> Self {
        Simulation { rhs, hamiltonian, g: None, gbar: None }
    }

    pub fn with_g(self, g: Poly) -> Self {
        Simulation { g: Some(g), ..self }
    }

    pub fn with_gbar(self, gbar: Quantity) -> Self {
        Simulation { gbar: Some(gbar), ..self }
    }

    pub fn integrate(&self, x0: [f64; 3], cfg: &IntegratorConfig) -> Result<Trajectory> {
        cfg.validate()?;
        if x0.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidConfig("initial point must be finite".into()));
        }
        let params = &cfg.param_bindings;
        let field = CompiledVec3::new(&self.rhs, params)?;
        let h = CompiledPoly::new(&self.hamiltonian, params)?;
        let rate = CompiledPoly::new(&self.hamiltonian.grad().dot(&self.rhs), params)?;
        let div = CompiledPoly::new(&self.rhs.divergence(), params)?;
        let g = self.g.as_ref().map(|g| CompiledPoly::new(g, params)).transpose()?;
        let gbar = match &self.gbar {
            Some(Quantity::Poly(p)) => Some(Ok(CompiledPoly::new(p, params)?)),
            Some(Quantity::Closed(c)) => {
                let unbound = closed_form_params(c).into_iter().find(|p| !params.contains_key(p));
                if let Some(p) = unbound {
                    return Err(Error::Unbound(p.name().to_string()));
                }
                Some(Err(c))
            }
            None => None,
        };

        let run = stepper::run(|x| field.eval(x), x0, cfg);
        let n = run.times.len();
        let mut channels: Vec<(String, Vec<f64>)> = Vec::new();
        let h_values: Vec<f64> = run.states.iter().map(|x| h.eval(x)).collect();
        channels.push(("H".into(), h_values.clone()));
        if let Some(g) = &g {
            channels.push(("G".into(), run.states.iter().map(|x| g.eval(x)).collect()));
        }
        if let Some(gbar) = &gbar {
            let values = run
                .states
                .iter()
                .map(|x| match gbar {
                    Ok(p) => p.eval(x),
                    Err(c) => c.eval(params, x).unwrap_or(f64::NAN),
                })
                .collect();
            channels.push(("Gbar".into(), values));
        }
        channels.push(("div".into(), run.states.iter().map(|x| div.eval(x)).collect()));
        let slope = derivative(&run.times, &h_values);
        let residual = (0..n).map(|i| (slope[i] - rate.eval(&run.states[i])).abs()).collect();
        channels.push(("energy_rate_residual".into(), residual));

        Ok(Trajectory {
            times: run.times,
            states: run.states,
            channels,
            diverged: run.diverged,
            config: cfg.clone(),
        })
    }
}

fn closed_form_params(c: &ClosedForm) -> Vec<Param> {
    use crate::bihamiltonian::Expr;
    fn walk(e: &Expr, out: &mut Vec<Param>) {
        match e {
            Expr::Poly(p) => out.extend(p.params()),
            Expr::Sum(v) | Expr::Product(v) => v.iter().for_each(|e| walk(e, out)),
            Expr::Quotient(a, b) | Expr::Power(a, b) => {
                walk(a, out);
                walk(b, out);
            }
        }
    }
    let mut out = Vec::new();
    walk(c.expr(), &mut out);
    out
}

/// Integrates `rhs` and monitors `hamiltonian`.
pub fn integrate(rhs: &PolyVec3, hamiltonian: &Poly, x0: [f64; 3], cfg: &IntegratorConfig) -> Result<Trajectory> {
    Simulation::new(rhs.clone(), hamiltonian.clone()).integrate(x0, cfg)
}

/// dQ/dt from the three-point Lagrange interpolant: centred in the interior,
/// one-sided second order at the ends.
fn derivative(t: &[f64], q: &[f64]) -> Vec<f64> {
    let n = t.len();
    match n {
        0 => return Vec::new(),
        1 => return vec![0.0],
        2 => {
            let s = (q[1] - q[0]) / (t[1] - t[0]);
            return vec![s, s];
        }
        _ => {}
    }
    // Derivative at t[at] of the parabola through points i, i+1, i+2.
    let lagrange = |i: usize, at: usize| {
        let (t0, t1, t2) = (t[i], t[i + 1], t[i + 2]);
        let x = t[at];
        let l0 = ((x - t1) + (x - t2)) / ((t0 - t1) * (t0 - t2));
        let l1 = ((x - t0) + (x - t2)) / ((t1 - t0) * (t1 - t2));
        let l2 = ((x - t0) + (x - t1)) / ((t2 - t0) * (t2 - t1));
        l0 * q[i] + l1 * q[i + 1] + l2 * q[i + 2]
    };
    (0..n)
        .map(|k| match k {
            0 => lagrange(0, 0),
            k if k == n - 1 => lagrange(n - 3, n - 1),
            k => lagrange(k - 1, k),
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<[f64; 3]>,
    /// In output order: H, then G and Gbar when monitored, div,
    /// energy_rate_residual.
    pub channels: Vec<(String, Vec<f64>)>,
    /// Set when integration stopped early on a blow-up.
    pub diverged: bool,
    pub config: IntegratorConfig,
}

impl Trajectory {
    pub fn channel(&self, name: &str) -> Result<&[f64]> {
        self.channels
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
            .ok_or_else(|| Error::UnknownChannel(name.to_string()))
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// max over t of |Q(t) − Q(t₀)|.
pub fn conservation_report(traj: &Trajectory, quantity: &str) -> Result<f64> {
    let values = traj.channel(quantity)?;
    let Some(&first) = values.first() else { return Ok(0.0) };
    Ok(values.iter().fold(0.0f64, |m, v| m.max((v - first).abs())))
}
