//! Numerical toolkit for the classical (large-N) limit of mean-field quantum
//! spin chains via coherent-state quantization of the Bloch sphere.
//!
//! The pieces, bottom to top:
//!
//! - [`poly`] — sparse polynomial algebra on ℝ³ restricted to S², with the
//!   sphere Poisson bracket and canonical reduction modulo x²+y²+z² = 1;
//! - [`extrema`] — range, sup-norm and critical points of real polynomials
//!   on the sphere (lattice bracketing + Newton on tangent charts);
//! - [`dicke`] — the symmetric subspace Sym^N(ℂ²) in the Dicke basis and
//!   spin coherent states;
//! - [`quantize`](mod@quantize) — the coherent-state quantization map Q(p) by exact
//!   product quadrature, Husimi masses, and the Beta-integral reference
//!   oracle;
//! - [`bargmann`] — the isometry onto holomorphic polynomials with the
//!   (1+|z|²)^{-(N+2)} weighted inner product;
//! - [`models`] — collective spin operators and the Curie-Weiss / LMG
//!   Hamiltonians restricted to the symmetric subspace, their classical
//!   symbols, and the 1/N-correction fit;
//! - [`spectral`] — banded Hermitian eigensolvers (implicit-shift QL with
//!   Givens band reduction), spectrum-to-range distance, ground states;
//! - [`semiclassics`] — classical-limit expectations, limit-state
//!   prediction from critical points, commutator/product defect studies,
//!   Z₂ symmetry checks, symmetry-breaking reports and forbidden-region
//!   masses.

pub mod acceptance;
pub mod bargmann;
pub mod dicke;
pub mod error;
pub mod extrema;
pub mod linalg;
pub mod models;
pub mod operator;
pub mod poly;
pub mod quad;
pub mod quantize;
pub mod semiclassics;
pub mod spectral;
pub mod sphere;
pub mod util;

pub use dicke::{coherent_state, husimi_density, overlap, DickeVector};
pub use error::{Error, Result};
pub use extrema::{critical_points, range, sup_norm, RealInterval};
pub use operator::QuantizedOperator;
pub use poly::{Monomial, SpherePolynomial};
pub use quantize::{berezin_transform, husimi_mass, quantize};
pub use sphere::SpherePoint;
