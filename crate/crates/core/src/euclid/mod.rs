//! The restricted k-plane transform on `R^n`: planes `τ(θ, s; x'')` with
//! `θ ∈ S^k ⊂ R^{k+1}` and the remaining `n-k-1` coordinates held fixed.

mod dual;
mod field;
mod forward;
mod scan;
pub(crate) mod slice;
mod sinogram;

pub use dual::{
    dual_transform, invert_dual_formula_k1, DualInversion, DualInversionOptions, DualValue, OffsetRange,
    SliceProfiles,
};
pub use field::{BoxAxis, FieldRn, SampledBox, ScalarFieldRn};
pub use forward::{forward_restricted, plane_integral, truncated_integrals, ForwardOptions};
pub use scan::{default_scan_plane, divergence_scan, divergence_scan_f0, ScanReport};
pub use sinogram::{PlaneParam, RestrictedSinogram, SinogramGrid};
pub use slice::{invert_fourier_slice, SliceInversionOptions};
