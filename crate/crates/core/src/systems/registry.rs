use std::sync::OnceLock;

use super::{ParamSpec, ResistiveSystem, StatedValues};
use crate::error::{Error, Result};
use crate::polyfield::{Param, Poly, PolyMat3, PolyVec3, Rational};

fn p(text: &str) -> Poly {
    text.parse().unwrap_or_else(|e| panic!("registry polynomial {text:?}: {e}"))
}

fn vec3(c: [&str; 3]) -> PolyVec3 {
    PolyVec3::new(p(c[0]), p(c[1]), p(c[2]))
}

fn rows(r: [[&str; 3]; 3]) -> [[Poly; 3]; 3] {
    r.map(|row| row.map(p))
}

fn skew(r: [[&str; 3]; 3]) -> PolyMat3 {
    PolyMat3::skew(rows(r)).expect("registry J is skew")
}

/// `prefactor · [[..]]`, the usual way resistance matrices are written.
fn symmetric(prefactor: &str, r: [[&str; 3]; 3]) -> PolyMat3 {
    let pre = p(prefactor);
    PolyMat3::symmetric(rows(r).map(|row| row.map(|e| &pre * &e))).expect("registry R is symmetric")
}

fn params(list: &[(&str, i64, i64)]) -> Vec<ParamSpec> {
    list.iter()
        .map(|&(name, n, d)| ParamSpec {
            param: Param::new(name),
            default: Some(Rational::new(n.into(), d.into())),
        })
        .collect()
}

fn stated(energy_rate: Option<&str>, divergence: Option<&str>, irrotational: Option<bool>) -> StatedValues {
    StatedValues {
        energy_rate: energy_rate.map(p),
        divergence: divergence.map(p),
        irrotational,
    }
}

const ZERO: [&str; 3] = ["0", "0", "0"];

fn reduced_three_wave() -> ResistiveSystem {
    ResistiveSystem {
        name: "reduced_three_wave".into(),
        dimension: 3,
        poisson: skew([["0", "-y+1/2*d", "z"], ["y-1/2*d", "0", "0"], ["-z", "0", "0"]]),
        resistance: symmetric("1", [["-1/2*g", "0", "0"], ["0", "-1/2*g", "0"], ["0", "0", "2*z"]]),
        hamiltonian: p("x^2+y^2+z"),
        source: vec3(ZERO),
        params: params(&[("d", 1, 1), ("g", 1, 1)]),
        reference_rhs: vec3(["-2*y^2+g*x+z+d*y", "2*x*y+g*y-d*x", "-2*x*z-2*z"]),
        stated: stated(Some("2*g*x^2+2*g*y^2-2*z"), Some("2*g-2"), Some(true)),
    }
}

fn rabinovich() -> ResistiveSystem {
    ResistiveSystem {
        name: "rabinovich".into(),
        dimension: 3,
        poisson: skew([["0", "0", "0"], ["0", "0", "-1/2*x"], ["0", "1/2*x", "0"]]),
        resistance: symmetric("1", [["k1", "-q", "-y"], ["-q", "k2", "1/2*x"], ["-y", "1/2*x", "k3"]]),
        hamiltonian: p("1/2*x^2+1/2*y^2+1/2*z^2"),
        source: vec3(ZERO),
        params: params(&[("q", 1, 1), ("k1", 1, 1), ("k2", 1, 1), ("k3", 1, 1)]),
        reference_rhs: vec3(["q*y-k1*x+y*z", "q*x-k2*y-x*z", "-k3*z+x*y"]),
        stated: stated(Some("-k1*x^2-k2*y^2-k3*z^2+2*q*x*y+x*y*z"), Some("-k1-k2-k3"), Some(true)),
    }
}

fn chen() -> ResistiveSystem {
    ResistiveSystem {
        name: "chen".into(),
        dimension: 3,
        poisson: skew([["0", "z", "-y"], ["-z", "0", "0"], ["y", "0", "0"]]),
        resistance: symmetric("a^-1", [["a^2", "a^2-a*g", "0"], ["a^2-a*g", "0", "g*y"], ["0", "g*y", "-b*z"]]),
        hamiltonian: p("1/2*x^2-a*z"),
        source: vec3(ZERO),
        params: params(&[("a", 35, 1), ("b", 3, 1), ("g", 28, 1)]),
        reference_rhs: vec3(["a*y-a*x", "g*x-a*x+g*y-x*z", "x*y-b*z"]),
        stated: stated(Some("-a*x^2+a*b*z"), Some("-a-b+g"), Some(true)),
    }
}

fn lu() -> ResistiveSystem {
    ResistiveSystem {
        name: "lu".into(),
        dimension: 3,
        poisson: skew([["0", "z", "-y"], ["-z", "0", "0"], ["y", "0", "0"]]),
        resistance: symmetric("a^-1", [["a^2", "0", "0"], ["0", "0", "g*y"], ["0", "g*y", "-b*z"]]),
        hamiltonian: p("1/2*x^2-a*z"),
        source: vec3(ZERO),
        params: params(&[("a", 36, 1), ("b", 3, 1), ("g", 20, 1)]),
        reference_rhs: vec3(["a*y-a*x", "g*y-x*z", "x*y-b*z"]),
        stated: stated(Some("-a*x^2+a*b*z"), Some("-a-b+g"), Some(true)),
    }
}

fn modified_lu() -> ResistiveSystem {
    ResistiveSystem {
        name: "modified_lu".into(),
        dimension: 3,
        poisson: skew([
            ["0", "z", "-y-1/2*y*z*a^-1"],
            ["-z", "0", "0"],
            ["y+1/2*y*z*a^-1", "0", "0"],
        ]),
        resistance: symmetric(
            "a^-1",
            [["a^2", "0", "1/2*y*z"], ["0", "0", "g*y"], ["1/2*y*z", "g*y", "-b*z"]],
        ),
        hamiltonian: p("1/2*x^2-a*z"),
        source: vec3(ZERO),
        params: params(&[("a", 36, 1), ("b", 3, 1), ("g", 20, 1)]),
        reference_rhs: vec3(["a*y-a*x+y*z", "g*y-x*z", "x*y-b*z"]),
        stated: stated(Some("-a*x^2+a*b*z+x*y*z"), Some("-a-b+g"), Some(false)),
    }
}

fn qi() -> ResistiveSystem {
    ResistiveSystem {
        name: "qi".into(),
        dimension: 3,
        poisson: skew([
            ["0", "z", "-y-1/2*y*z*a^-1"],
            ["-z", "0", "0"],
            ["y+1/2*y*z*a^-1", "0", "0"],
        ]),
        resistance: symmetric(
            "a^-1",
            [["a^2", "-a*g", "1/2*y*z"], ["-a*g", "0", "-y"], ["1/2*y*z", "-y", "-b*z"]],
        ),
        hamiltonian: p("1/2*x^2-a*z"),
        source: vec3(ZERO),
        params: params(&[("a", 10, 1), ("b", 8, 3), ("g", 28, 1)]),
        reference_rhs: vec3(["a*y-a*x+y*z", "g*x-x*z-y", "x*y-b*z"]),
        stated: stated(Some("-a*x^2+a*b*z+x*y*z"), Some("-a-b-1"), Some(false)),
    }
}

/// Series RLC circuit with charge x and current y.
fn rlc_circuit() -> ResistiveSystem {
    ResistiveSystem {
        name: "rlc_circuit".into(),
        dimension: 2,
        poisson: skew([["0", "1", "0"], ["-1", "0", "0"], ["0", "0", "0"]]),
        resistance: symmetric("1", [["0", "0", "0"], ["0", "R*L^-1", "0"], ["0", "0", "0"]]),
        hamiltonian: p("1/2*y^2+1/2*x^2*L^-1*C^-1"),
        source: vec3(["0", "V*L^-1", "0"]),
        params: params(&[("R", 1, 2), ("L", 1, 1), ("C", 1, 1), ("V", 1, 1)]),
        reference_rhs: vec3(["y", "-R*y*L^-1-x*L^-1*C^-1+V*L^-1", "0"]),
        stated: stated(Some("-R*y^2*L^-1"), None, None),
    }
}

fn euler_rotor() -> ResistiveSystem {
    ResistiveSystem {
        name: "euler_rotor".into(),
        dimension: 3,
        poisson: PolyMat3::from_poisson_vector(&PolyVec3::position()),
        resistance: symmetric("1", [ZERO, ZERO, ZERO]),
        hamiltonian: p("1/2*x^2*Ix^-1+1/2*y^2*Iy^-1+1/2*z^2*Iz^-1"),
        source: vec3(ZERO),
        params: params(&[("Ix", 1, 1), ("Iy", 2, 1), ("Iz", 3, 1)]),
        reference_rhs: vec3(["y*z*Iz^-1-y*z*Iy^-1", "x*z*Ix^-1-x*z*Iz^-1", "x*y*Iy^-1-x*y*Ix^-1"]),
        stated: stated(Some("0"), None, Some(true)),
    }
}

fn euler_rotor_dissipative() -> ResistiveSystem {
    ResistiveSystem {
        name: "euler_rotor_dissipative".into(),
        dimension: 3,
        poisson: PolyMat3::from_poisson_vector(&PolyVec3::position()),
        resistance: symmetric("1/2", [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]),
        hamiltonian: p("1/2*x^2*Ix^-1+1/2*y^2*Iy^-1+1/2*z^2*Iz^-1"),
        source: vec3(ZERO),
        params: params(&[("Ix", 1, 1), ("Iy", 2, 1), ("Iz", 3, 1)]),
        reference_rhs: vec3([
            "y*z*Iz^-1-y*z*Iy^-1-1/2*x*Ix^-1",
            "x*z*Ix^-1-x*z*Iz^-1-1/2*y*Iy^-1",
            "x*y*Iy^-1-x*y*Ix^-1-1/2*z*Iz^-1",
        ]),
        stated: stated(Some("-1/2*x^2*Ix^-2-1/2*y^2*Iy^-2-1/2*z^2*Iz^-2"), None, Some(true)),
    }
}

/// The built-in systems, validated on construction.
#[derive(Clone, Debug)]
pub struct Registry {
    systems: Vec<ResistiveSystem>,
}

impl Registry {
    pub fn load() -> Result<Registry> {
        let systems = vec![
            reduced_three_wave(),
            rabinovich(),
            chen(),
            lu(),
            modified_lu(),
            qi(),
            rlc_circuit(),
            euler_rotor(),
            euler_rotor_dissipative(),
        ];
        for s in &systems {
            s.validate().map_err(|e| Error::InvalidConfig(format!("{}: {e}", s.name)))?;
        }
        Ok(Registry { systems })
    }

    /// Process-wide copy of [`Registry::load`].
    pub fn builtin() -> &'static Registry {
        static REGISTRY: OnceLock<Registry> = OnceLock::new();
        REGISTRY.get_or_init(|| Registry::load().expect("built-in registry is valid"))
    }

    /// Looks a system up by name; `three_wave` is accepted as an alias.
    pub fn get(&self, name: &str) -> Result<&ResistiveSystem> {
        let name = if name == "three_wave" { "reduced_three_wave" } else { name };
        self.systems
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::UnknownSystem(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.systems.iter().map(|s| s.name.as_str())
    }

    pub fn iter(&self) -> impl Iterator<Item = &ResistiveSystem> {
        self.systems.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_entries_validate() {
        let reg = Registry::load().unwrap();
        assert_eq!(reg.names().count(), 9);
    }

    #[test]
    fn lookup() {
        let reg = Registry::builtin();
        assert_eq!(reg.get("three_wave").unwrap().name, "reduced_three_wave");
        assert_eq!(reg.get("nope"), Err(Error::UnknownSystem("nope".into())));
    }
}
