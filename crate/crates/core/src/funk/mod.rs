//! The restricted Funk transform on `S^n` over great k-spheres lying in
//! `Rv ⊕ R^{k+1}`: forward evaluation, the duality identity, harmonic
//! inversion on `S^2` slices, pointwise reconstruction and the `L^p`
//! sharpness scan.

mod duality;
mod field;
mod forward;
mod invert;
mod scan;

pub use crate::rotation::{make_block_rotation, BlockRotation};
pub use duality::{duality_identity_check, DualityCheck, DualityOrders};
pub use field::{SphereField, SphereFieldKind};
pub use forward::{funk_forward_restricted, funk_forward_rotated, funk_slice, SphericalComplexElement};
pub use invert::{funk_invert_slice, reconstruct_from_field, reconstruct_point, ReconstructOptions, ODD_CONTENT_TOL};
pub use scan::{counterexample_scan_ftilde, funk_truncation_scan, FtildeScanReport};
