use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use super::{Method, Trajectory};

impl Trajectory {
    /// `t,x,y,z,<channels>` with one row per accepted step, 17 significant
    /// digits, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,y,z");
        for (name, _) in &self.channels {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (i, (t, x)) in self.times.iter().zip(&self.states).enumerate() {
            let _ = write!(out, "{t:.16e},{:.16e},{:.16e},{:.16e}", x[0], x[1], x[2]);
            for (_, values) in &self.channels {
                let _ = write!(out, ",{:.16e}", values[i]);
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let channels: Map<String, Value> = self.channels.iter().map(|(n, v)| (n.clone(), json!(v))).collect();
        let params: Map<String, Value> =
            self.config.param_bindings.iter().map(|(p, v)| (p.name().to_string(), json!(v))).collect();
        let mut config = json!({
            "method": self.config.method.to_string(),
            "step": self.config.step,
            "t_start": self.config.t_start,
            "t_end": self.config.t_end,
            "params": params,
            "diverged": self.diverged,
        });
        if self.config.method == Method::Rk45 {
            config["abs_tol"] = json!(self.config.abs_tol);
            config["rel_tol"] = json!(self.config.rel_tol);
        }
        json!({
            "times": self.times,
            "states": self.states,
            "channels": channels,
            "config": config,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::{integrate, IntegratorConfig};
    use crate::polyfield::{Poly, PolyVec3};

    fn small() -> super::Trajectory {
        let rhs = PolyVec3::new("y".parse().unwrap(), "-x".parse().unwrap(), Poly::zero());
        let cfg = IntegratorConfig { step: 0.5, t_end: 1.0, ..Default::default() };
        integrate(&rhs, &"1/2*x^2+1/2*y^2".parse().unwrap(), [1.0, 0.0, 0.0], &cfg).unwrap()
    }

    #[test]
    fn csv_layout() {
        let csv = small().to_csv();
        let lines: Vec<&str> = csv.split('\n').collect();
        assert_eq!(lines[0], "t,x,y,z,H,div,energy_rate_residual");
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[4], "");
        assert!(lines[1].starts_with("0.0000000000000000e0,1.0000000000000000e0,"));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn json_keys() {
        let v = small().to_json();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["channels", "config", "states", "times"]);
        assert_eq!(v["states"][0], serde_json::json!([1.0, 0.0, 0.0]));
        assert_eq!(v["channels"]["H"].as_array().unwrap().len(), 3);
        assert_eq!(v["config"]["method"], "rk4");
    }
}
