//! Congruence automata and linear p-schemes for sequences given as constant
//! terms of Laurent-polynomial powers, with log-time evaluation modulo prime
//! powers and CRT composition for composite moduli.

pub mod arith;
pub mod ctdef;
pub mod evaluator;
pub mod expr;
pub mod laurent;
pub mod scheme_auto;
pub mod scheme_file;
pub mod scheme_linear;
pub mod span;

pub use arith::{crt_combine, digits_lsb_first, ArithError, BigIndex, Modulus};
pub use ctdef::{bin_to_ct, binsum_direct, catalog, ct_direct, ct_prefix, BinomialSumSpec, CtDefError, CtPair};
pub use evaluator::{
    cfinite_eval, eval_auto, eval_crt, eval_linear, fib_doubling, seq_auto, seq_linear, CFiniteSpec, EvalError,
};
pub use expr::{format_int, format_mod, parse_laurent, parse_with_vars, ExprError, ExprSource};
pub use laurent::{ExponentVector, IntLaurentPoly, LaurentError, ModLaurentPoly};
pub use scheme_auto::{generate_auto, AutoScheme, GenerateError, Target};
pub use scheme_file::{load_scheme, save_scheme, Scheme, SchemeFile, SchemeFileError};
pub use scheme_linear::{generate_linear, LinearScheme};
pub use span::{span_solve, SpanBasis};
