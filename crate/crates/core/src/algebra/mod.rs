//! Exact linear algebra over GF(2) and the integers, cellular (co)homology,
//! cup products and induced maps.

mod chain;
mod cup;
mod gf2;
mod homology;
mod induced;
mod snf;
mod sparse;

pub use chain::{chain_complex_of, AnyComplex, ChainComplexData, Coeff};
pub use cup::{coboundary, cup_pairing, cup_product, evaluate_top, is_cocycle, Cochain, CupOutput};
pub use gf2::GF2Matrix;
pub use homology::{homology, integral_classes, ClassBasis, HomologyReport, IntegralClasses, Variance};
pub use induced::{cell_inclusion, induced_from_bases, induced_map};
pub use snf::{invariant_factors, smith_normal_form, IntMatrix, SnfResult};
pub use sparse::{gf2_rank, SparseIntMatrix};
