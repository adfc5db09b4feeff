use std::cmp::Ordering;
use std::fmt;

use super::symbol::{Param, Var};

/// Largest exponent magnitude any symbol may carry.
pub const MAX_EXPONENT: u32 = 1 << 20;

/// Power product x^i y^j z^k · Π pₙ^eₙ.
///
/// Variable exponents are non-negative; parameter exponents are signed
/// (parameters live in a Laurent ring so 1/α is exact). `params` is sorted by
/// name and never holds a zero exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    vars: [u32; 3],
    params: Vec<(Param, i32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: Var, exp: u32) -> Self {
        let mut vars = [0; 3];
        vars[v.index()] = exp;
        Monomial { vars, params: Vec::new() }
    }

    pub fn param(p: Param, exp: i32) -> Self {
        let params = if exp == 0 { Vec::new() } else { vec![(p, exp)] };
        Monomial { vars: [0; 3], params }
    }

    pub fn is_one(&self) -> bool {
        self.vars == [0; 3] && self.params.is_empty()
    }

    pub fn var_exponents(&self) -> [u32; 3] {
        self.vars
    }

    pub fn var_exp(&self, v: Var) -> u32 {
        self.vars[v.index()]
    }

    pub fn params(&self) -> &[(Param, i32)] {
        &self.params
    }

    pub fn param_exp(&self, p: Param) -> i32 {
        self.params
            .iter()
            .find(|(q, _)| *q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn has_vars(&self) -> bool {
        self.vars != [0; 3]
    }

    pub fn var_degree(&self) -> u64 {
        self.vars.iter().map(|&e| e as u64).sum()
    }

    /// Degree over every symbol, parameters included (negative powers count
    /// negatively).
    pub fn total_degree(&self) -> i64 {
        self.var_degree() as i64 + self.params.iter().map(|&(_, e)| e as i64).sum::<i64>()
    }

    /// The x,y,z part alone.
    pub fn var_part(&self) -> Monomial {
        Monomial { vars: self.vars, params: Vec::new() }
    }

    /// The parameter part alone.
    pub fn param_part(&self) -> Monomial {
        Monomial { vars: [0; 3], params: self.params.clone() }
    }

    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        let mut vars = [0u32; 3];
        for (i, slot) in vars.iter_mut().enumerate() {
            let e = self.vars[i].checked_add(other.vars[i])?;
            if e > MAX_EXPONENT {
                return None;
            }
            *slot = e;
        }
        let mut params = Vec::with_capacity(self.params.len() + other.params.len());
        let (mut i, mut j) = (0, 0);
        while i < self.params.len() || j < other.params.len() {
            let next = match (self.params.get(i), other.params.get(j)) {
                (Some(&(p, e)), Some(&(q, f))) => match p.cmp(&q) {
                    Ordering::Less => {
                        i += 1;
                        (p, e)
                    }
                    Ordering::Greater => {
                        j += 1;
                        (q, f)
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (p, e.checked_add(f)?)
                    }
                },
                (Some(&pe), None) => {
                    i += 1;
                    pe
                }
                (None, Some(&qf)) => {
                    j += 1;
                    qf
                }
                (None, None) => unreachable!(),
            };
            if next.1.unsigned_abs() > MAX_EXPONENT {
                return None;
            }
            if next.1 != 0 {
                params.push(next);
            }
        }
        Some(Monomial { vars, params })
    }

    /// Inverse in the Laurent parameter ring; `None` if x, y or z occur.
    pub fn param_inverse(&self) -> Option<Monomial> {
        if self.has_vars() {
            return None;
        }
        Some(Monomial {
            vars: [0; 3],
            params: self.params.iter().map(|&(p, e)| (p, -e)).collect(),
        })
    }

    /// Lowers the exponent of `v` by one. Caller guarantees it is positive.
    pub(crate) fn lowered(&self, v: Var) -> Monomial {
        let mut m = self.clone();
        m.vars[v.index()] -= 1;
        m
    }

    /// Drops parameter `p`, returning its exponent and the remainder.
    pub(crate) fn split_param(&self, p: Param) -> (i32, Monomial) {
        let mut rest = self.clone();
        let mut exp = 0;
        rest.params.retain(|&(q, e)| {
            if q == p {
                exp = e;
                false
            } else {
                true
            }
        });
        (exp, rest)
    }

    /// Graded lexicographic display order: larger total degree first, then
    /// lexicographic with x > y > z > parameters alphabetically.
    pub fn display_cmp(&self, other: &Monomial) -> Ordering {
        other
            .total_degree()
            .cmp(&self.total_degree())
            .then_with(|| other.vars.cmp(&self.vars))
            .then_with(|| {
                // Walk the union of parameter names alphabetically; the
                // first differing exponent decides (larger first).
                let (mut i, mut j) = (0, 0);
                loop {
                    let a = self.params.get(i);
                    let b = other.params.get(j);
                    let (ea, eb) = match (a, b) {
                        (None, None) => return Ordering::Equal,
                        (Some(&(p, e)), None) => {
                            i += 1;
                            let _ = p;
                            (e, 0)
                        }
                        (None, Some(&(_, f))) => {
                            j += 1;
                            (0, f)
                        }
                        (Some(&(p, e)), Some(&(q, f))) => match p.cmp(&q) {
                            Ordering::Less => {
                                i += 1;
                                (e, 0)
                            }
                            Ordering::Greater => {
                                j += 1;
                                (0, f)
                            }
                            Ordering::Equal => {
                                i += 1;
                                j += 1;
                                (e, f)
                            }
                        },
                    };
                    if ea != eb {
                        return eb.cmp(&ea);
                    }
                }
            })
    }
}

impl fmt::Display for Monomial {
    /// Factors joined by `*`, in the order x, y, z, parameters; `1` when empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            Ok(())
        };
        for v in Var::ALL {
            match self.vars[v.index()] {
                0 => {}
                1 => {
                    sep(f)?;
                    write!(f, "{v}")?;
                }
                e => {
                    sep(f)?;
                    write!(f, "{v}^{e}")?;
                }
            }
        }
        for &(p, e) in &self.params {
            sep(f)?;
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}
