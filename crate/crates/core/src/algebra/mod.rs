//! Exact rational arithmetic: polynomials, rational functions and their
//! antiderivatives with explicit logarithmic parts.

pub mod antideriv;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod series;

pub use antideriv::{antiderivative, Antiderivative, LogTerm, SplitValue};
pub use num_rational::BigRational;
pub use parse::{parse_expression, parse_ratfunc, parse_rational, Expression};
pub use poly::{rat, Poly};
pub use ratfunc::{ArithKind, RatFunc};
