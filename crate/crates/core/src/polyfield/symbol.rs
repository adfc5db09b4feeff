use std::collections::HashSet;
use std::fmt;
use std::sync::{Mutex, OnceLock};

/// Dynamical variable of the three-dimensional phase space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        match name {
            "x" => Some(Var::X),
            "y" => Some(Var::Y),
            "z" => Some(Var::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A symbolic parameter (α, k₁, I_x, ...), stored under its ASCII spelling.
///
/// Names are interned, so a `Param` is a cheap `Copy` handle and compares
/// alphabetically by name.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Param(&'static str);

fn interner() -> &'static Mutex<HashSet<&'static str>> {
    static POOL: OnceLock<Mutex<HashSet<&'static str>>> = OnceLock::new();
    POOL.get_or_init(|| Mutex::new(HashSet::new()))
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Param {
    /// Interns `name`. Panics on `x`, `y`, `z` or a malformed identifier;
    /// use [`Symbol::parse`] for untrusted input.
    pub fn new(name: &str) -> Param {
        assert!(
            is_identifier(name) && Var::from_name(name).is_none(),
            "`{name}` is not a valid parameter name"
        );
        let mut pool = interner().lock().unwrap_or_else(|e| e.into_inner());
        if let Some(&interned) = pool.get(name) {
            return Param(interned);
        }
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        pool.insert(leaked);
        Param(leaked)
    }

    pub fn name(self) -> &'static str {
        self.0
    }

    /// Conventional mathematical spelling, when the name is in the fixed table.
    pub fn display_name(self) -> &'static str {
        match self.0 {
            "a" => "α",
            "b" => "β",
            "g" => "γ",
            "d" => "δ",
            "D" => "Δ",
            "lam" => "λ",
            "k1" => "k₁",
            "k2" => "k₂",
            "k3" => "k₃",
            "Ix" => "I_x",
            "Iy" => "I_y",
            "Iz" => "I_z",
            "s" => "√(1−Δ²)",
            other => other,
        }
    }
}

impl fmt::Debug for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Param({})", self.0)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Var(Var),
    Param(Param),
}

impl Symbol {
    pub fn parse(name: &str) -> Option<Symbol> {
        if let Some(v) = Var::from_name(name) {
            Some(Symbol::Var(v))
        } else if is_identifier(name) {
            Some(Symbol::Param(Param::new(name)))
        } else {
            None
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Symbol::Var(v) => v.name(),
            Symbol::Param(p) => p.name(),
        }
    }
}

impl From<Var> for Symbol {
    fn from(v: Var) -> Self {
        Symbol::Var(v)
    }
}

impl From<Param> for Symbol {
    fn from(p: Param) -> Self {
        Symbol::Param(p)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Fixed ASCII spellings used by the text grammar and the CLI.
pub mod names {
    use super::Param;

    pub fn alpha() -> Param {
        Param::new("a")
    }
    pub fn beta() -> Param {
        Param::new("b")
    }
    pub fn gamma() -> Param {
        Param::new("g")
    }
    pub fn delta() -> Param {
        Param::new("d")
    }
    pub fn big_delta() -> Param {
        Param::new("D")
    }
    /// √(1−Δ²), adjoined with the rewrite s² → 1−Δ².
    pub fn radical() -> Param {
        Param::new("s")
    }
    pub fn lambda() -> Param {
        Param::new("lam")
    }
    pub fn q() -> Param {
        Param::new("q")
    }
    pub fn k1() -> Param {
        Param::new("k1")
    }
    pub fn k2() -> Param {
        Param::new("k2")
    }
    pub fn k3() -> Param {
        Param::new("k3")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_stable() {
        let a = Param::new("alpha_1");
        let b = Param::new("alpha_1");
        assert_eq!(a, b);
        assert!(std::ptr::eq(a.name(), b.name()));
    }

    #[test]
    fn parse_routes_variables() {
        assert_eq!(Symbol::parse("y"), Some(Symbol::Var(Var::Y)));
        assert_eq!(Symbol::parse("k1"), Some(Symbol::Param(Param::new("k1"))));
        assert_eq!(Symbol::parse("1k"), None);
        assert_eq!(Symbol::parse(""), None);
    }

    #[test]
    #[should_panic]
    fn variable_name_is_not_a_parameter() {
        Param::new("z");
    }
}
