//! Exponent selection, frequency regions, kernel bounds and the sampling
//! probes behind the bilinear estimate.

pub mod exponents;
pub mod kernels;
pub mod paraproduct;
pub mod probe;
pub mod regions;
pub mod strichartz;

pub use exponents::{
    admissibility_report, select_exponents, ConditionId, ConditionResult, ExponentSet,
};
pub use kernels::{kernel_value, KernelId, KernelPoint};
pub use paraproduct::{paraproduct, paraproduct_space_time};
pub use probe::{boundedness_probe, boundedness_probe_unchecked, ProbeReport};
pub use regions::{classify_region, RegionTag};
pub use strichartz::{bilinear_ratio_probe, strichartz_ratio_probe, DoublingReport, RatioTable};
