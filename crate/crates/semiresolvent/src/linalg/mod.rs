//! Dense and banded complex linear algebra.

mod band;
mod cmat;
mod schur;

pub use band::{relative_residual, BandLu, BandMatrix};
pub use cmat::{hermitian_eigen, hermitian_eigenvalues, CMat};
pub use schur::{eig, eig_hessenberg, schur, Schur};
