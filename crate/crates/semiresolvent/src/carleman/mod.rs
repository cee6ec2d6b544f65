//! Carleman weights, certificate matrices, the conjugated operator and the
//! empirical global Carleman inequality.

mod certificate;
mod conjugate;
mod inequality;
mod weight;

pub use certificate::{
    carleman_certificate, certificate_matrix, effective_potential, optimize_weight,
    CarlemanCertificate, SearchBudget, WeightSearch,
};
pub use conjugate::conjugated_operator;
pub use inequality::{
    carleman_inequality_test, carleman_ratio, functional_l_check, gaussian_suite, FunctionalReport,
    GaussianPacket, InequalityReport, Quadrature,
};
pub use weight::{build_weight, m_weight, WeightFunction, WeightRecord, WeightShape};
