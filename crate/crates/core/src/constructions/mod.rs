//! Evaluators for the multiplexer, Andreev's function and PARITY, and
//! circuit builders for the explicit constructions.
//!
//! | builder | class | gates |
//! |---|---|---|
//! | [`andreev_tc03_circuit`] | depth-3 threshold | `n + 1` |
//! | [`andreev_ltf2_circuit`] | depth-2 LTF | `2^{2k} + 2^{3k-1} + 1` |
//! | [`andreev_pdt`] | parity decision tree | depth `k + 1` |
//! | [`andreev_mod3mod2`] | MOD3 of MOD2 | `n^2 / 4` parities |
//! | [`parity_approx_circuit`] | MAJ of MAJ | `O(sqrt n)` |

mod andreev;
mod functions;
mod mod3mod2;
mod parity_approx;
mod pdt;

pub use andreev::{
    andreev_ltf2_circuit, andreev_ltf2_parts, andreev_tc03_circuit, Ltf2Circuit, ParityPart,
    LTF2_MAX_GATES,
};
pub use functions::{andreev_eval, multiplexer_eval, mux_index, parity, AndreevLayout};
pub use mod3mod2::{andreev_f3_polynomial, andreev_mod3mod2, F3Poly};
pub use parity_approx::{
    in_parity_band, parity_approx_circuit, parity_band_levels, ratio_f64, symmetric_agreement,
};
pub use pdt::{andreev_pdt, ParityDecisionTree, PdtNode};
