//! Double-precision evaluation of polynomials with parameters bound.

use std::collections::HashMap;

use num_traits::ToPrimitive;

use super::poly::Poly;
use super::symbol::Param;
use super::vec3::PolyVec3;
use crate::error::{Error, Result};

/// Neumaier's variant of Kahan compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// A polynomial flattened to `coefficient · x^i y^j z^k` terms after binding
/// every parameter to a float.
#[derive(Clone, Debug, PartialEq)]
pub struct CompiledPoly {
    terms: Vec<(f64, [i32; 3])>,
}

impl CompiledPoly {
    pub fn new(p: &Poly, params: &HashMap<Param, f64>) -> Result<Self> {
        let mut terms = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let mut coeff = c.to_f64().unwrap_or(f64::NAN);
            for &(param, e) in m.params() {
                let v = *params
                    .get(&param)
                    .ok_or_else(|| Error::Unbound(param.name().to_owned()))?;
                if e < 0 && v == 0.0 {
                    return Err(Error::ZeroDenominator(param.name().to_owned()));
                }
                coeff *= v.powi(e);
            }
            let [i, j, k] = m.var_exponents();
            terms.push((coeff, [i as i32, j as i32, k as i32]));
        }
        Ok(CompiledPoly { terms })
    }

    pub fn eval(&self, p: &[f64; 3]) -> f64 {
        let mut sum = NeumaierSum::default();
        for &(c, [i, j, k]) in &self.terms {
            sum.add(c * p[0].powi(i) * p[1].powi(j) * p[2].powi(k));
        }
        sum.total()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompiledVec3(pub [CompiledPoly; 3]);

impl CompiledVec3 {
    pub fn new(v: &PolyVec3, params: &HashMap<Param, f64>) -> Result<Self> {
        Ok(CompiledVec3([
            CompiledPoly::new(v.x(), params)?,
            CompiledPoly::new(v.y(), params)?,
            CompiledPoly::new(v.z(), params)?,
        ]))
    }

    pub fn eval(&self, p: &[f64; 3]) -> [f64; 3] {
        [self.0[0].eval(p), self.0[1].eval(p), self.0[2].eval(p)]
    }
}
