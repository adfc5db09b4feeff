//! Exact polynomial ring over x, y, z with Laurent parameter symbols, and the
//! 3D vector calculus built on it.

pub mod compiled;
pub mod mat3;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod symbol;
pub mod vec3;

pub use compiled::{CompiledPoly, CompiledVec3, NeumaierSum};
pub use mat3::{MatrixKind, PolyMat3};
pub use monomial::Monomial;
pub use parse::{parse_binding, parse_bindings, parse_decimal, parse_numeric_binding, parse_point, parse_poly};
pub use poly::{int, rat, Env, Poly, Rational, MAX_TERMS};
pub use symbol::{names, Param, Symbol, Var};
pub use vec3::{compatibility_residuals, jacobi_residual, PolyVec3};
