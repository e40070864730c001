//! Numerical backend: grids, quadrature, discretized Hamiltonians and
//! non-Hermitian eigen-solvers.

pub mod eigen;
pub mod grid;
pub mod hamiltonian;
pub mod quadrature;

pub use eigen::Solver;
pub use grid::Grid;
pub use hamiltonian::{discretize, discretize_fn, milne_count, spectrum, DiscreteHamiltonian, MilneCount, ReferenceMatch, SpectralReport};
pub use quadrature::{adaptive_simpson, integrate, integrate_real, CumulativeIntegral, QuadResult};
