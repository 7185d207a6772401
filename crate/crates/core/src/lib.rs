//! Exact computations on tropical matroid Schubert varieties `Y_M`: the
//! stratification by admissible pairs, tropical cohomology of the cell
//! complex, the rank spectral sequence, and the comparison with Chow rings
//! of augmented Bergman fans and the graded Möbius algebra.
//!
//! Everything is finite exact linear algebra over the rationals.

pub mod algebra;
pub mod bergman;
pub mod catalog;
pub mod cohomology;
pub mod fan;
pub mod linalg;
pub mod matroid;
pub mod pipeline;
pub mod schubert;
pub mod spectral;
