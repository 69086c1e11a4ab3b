//! The restricted totally geodesic Radon transform on the hyperboloid model
//! of `H^n`: Lorentz geometry, polar quadratures, forward evaluation over
//! k-geodesics inside `H^{k+1}_v`, and checks of the integral identities.

mod field;
mod forward;
mod identities;
mod lorentz;
mod quadrature;

pub use field::{HField, HFieldKind};
pub use forward::{hradon_forward_restricted, hradon_hyperplane, HyperbolicComplexElement};
pub use identities::{
    duality_identity_h, measure_decompositions, reconstruct_coordinates, slice_identity_check, HDualityCheck,
    HIdentityCheck, HSliceCoordinates, MeasureCheck,
};
pub use lorentz::{geodesic_distance, lorentz_inner, HPoint, OneSheetPoint};
pub use quadrature::{hpolar_quadrature, HIntegral, HOrders, HPolarQuadrature};
