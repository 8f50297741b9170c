//! GF(2^r) arithmetic, the powering construction of small-bias matrices,
//! the functions `F` and `B_{n,k}` built on them, and correlation profiles.

mod biased;
mod field;
mod functions;

pub use biased::{
    bias_of, bias_of_rows, build_biased_matrix, correlation_profile, fwht, walsh_at, Bias,
    BiasedMatrix, Profile, Search, MAX_EXHAUSTIVE_COLUMNS, MAX_MATRIX_WORDS,
};
pub use field::{is_irreducible, BinaryField};
pub use functions::{b_eval, f_eval, BFunction};
