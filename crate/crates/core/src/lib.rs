//! Multicritical Schur measures on integer partitions.
//!
//! The crate computes the same finite-size quantities along several
//! independent routes: partition enumeration with Jacobi–Trudi weights,
//! discrete Fredholm determinants of the correlation kernel, and Toeplitz
//! determinants of the associated symbols. In the edge scaling limit these
//! approach the higher-order Tracy–Widom laws `F(2n+1; s)`, computed here as
//! continuous Fredholm determinants of the higher-order Airy kernels.
//!
//! Half-integers `k ∈ ℤ + 1/2` are stored everywhere as integers `m = k - 1/2`.

pub mod airy;
pub mod coeffs;
pub mod error;
pub mod fredholm;
pub mod kernel;
pub mod limit_shape;
pub mod linalg;
pub mod measure;
pub mod multicritical;
pub mod oracle;
pub mod quadrature;
pub mod partition;
pub mod sampler;
pub mod specialization;
pub mod toeplitz;
pub mod verify;

pub use airy::{ai, airy_kernel, AiryEvaluator, KernelRepresentation};
pub use coeffs::{symbol_coeffs, Family, LaurentCoefficients};
pub use error::{Error, Result};
pub use fredholm::{tracy_widom, FredholmValue, TracyWidom};
pub use kernel::{
    cdf_range, edge_scaled_cdf, gap_probability, length_cdf, EdgeScaling, GapValue, KappaTable,
    ScalingConvention, Statistic,
};
pub use limit_shape::{Density, DensityProfile};
pub use measure::{probability, MeasureTable};
pub use multicritical::{parse_decimal, MeasureKind, MulticriticalParams};
pub use partition::{enumerate_partitions, FermionicSet, Partition};
pub use sampler::{sample, sample_in_window, SampleBatch};
pub use specialization::{schur_value, schur_value_exact, Specialization};
pub use toeplitz::{normalized_toeplitz_det, toeplitz_det, ToeplitzSpec};
