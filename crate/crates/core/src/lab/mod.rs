//! Enumeration of tilting data over representation-finite algebras and
//! end-to-end checks of the correspondences induced by a tilting module.

pub mod catalog;
pub mod cert;
pub mod enumerate;
pub mod subcat;
pub mod verify;

pub use catalog::Catalog;
pub use cert::{replay, replay_json, CertEntry, Certificate, ReplayReport};
pub use enumerate::{enumerate_partial_tilting, enumerate_t_tilting, enumerate_tilting};
pub use subcat::{
    approximation_contract, enumerate_t_resolving, is_t_contravariantly_finite, is_t_resolving,
    self_orthogonal_part, subcat_of_t_tilting, ResolvingReport, SubcategorySpec,
};
pub use verify::{
    gorenstein_probe, verify_in, verify_theorem, AlgebraClass, Setting, VerifyConfig,
};
