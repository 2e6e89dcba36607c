//! Galerkin truncations of strongly indefinite even functionals.
//!
//! A problem lives on `E = Y ⊕ Z` with `Y = span{θ_j}` finite and `Z`
//! truncated to `span{e_0, …, e_{M−1}}`. Coordinates are ordered
//! `(θ_0, …, θ_{dim_y−1}, e_0, …, e_{dim_z−1})`. On top of that the crate
//! provides
//!
//! * τ-norms and the filtration `Y_k`, `Z_k` ([`spaces`]),
//! * Brouwer degree for maps on balls and polytopes ([`degree`]),
//! * a symmetrized pseudo-gradient deformation `η(t, u)` ([`deformation`]),
//! * the fountain geometry `β_k, r_k, ρ_k, a_k, b_k, d_k` and a minimax
//!   descent producing a sequence of critical points ([`fountain`]),
//! * two concrete problems, a periodic Schrödinger equation
//!   ([`schrodinger`]) and a Dirichlet Hamiltonian system ([`elliptic`]),
//!   plus a diagonal model with closed-form data ([`synthetic`]).
//!
//! Everything numerical is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases below pin the common choice.
//!
//! ```
//! use fountain_core::{GalerkinSpace, Vector64};
//!
//! let space = GalerkinSpace::new(2, 3).unwrap();
//! let u = Vector64::from_f64(&[0.0, 0.0, 3.0, 0.0, 4.0]);
//! assert!((space.tau_norm(u.as_slice()) - 5.0).abs() < 1e-12);
//! ```

pub mod degree;
pub mod deformation;
pub mod elliptic;
pub mod fountain;
pub mod functional;
pub mod linalg;
pub mod ode;
pub mod optim;
pub mod sampling;
pub mod scalar;
pub mod schrodinger;
pub mod spaces;
pub mod synthetic;

pub use deformation::{DeformationParams, DeformationStage, PointCloud};
pub use degree::{brouwer_degree, winding_number_2d, DegreeOptions, FiniteMap, Region};
pub use elliptic::{DirichletProblem, EllipticConfig, HModel};
pub use fountain::{
    compute_geometry, find_critical_sequence, CriticalSequence, FountainConfig, FountainProblem,
    GeometryReport,
};
pub use functional::{grad_check, Functional, IndefiniteFunctional, Nonlinearity};
pub use linalg::Matrix;
pub use scalar::Scalar;
pub use schrodinger::{SchrodingerConfig, SchrodingerProblem};
pub use spaces::{Filtration, GalerkinSpace, LinkingSets, Subspace, Vector};
pub use synthetic::{SyntheticConfig, SyntheticProblem};

pub type Vector64 = Vector<f64>;
pub type Matrix64 = Matrix<f64>;
pub type IndefiniteFunctional64 = IndefiniteFunctional<f64>;
pub type SchrodingerProblem64 = SchrodingerProblem<f64>;
pub type DirichletProblem64 = DirichletProblem<f64>;
pub type SyntheticProblem64 = SyntheticProblem<f64>;
pub type GeometryReport64 = GeometryReport<f64>;
pub type CriticalSequence64 = CriticalSequence<f64>;
