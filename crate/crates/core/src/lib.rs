//! Virtual Khovanov homology of virtual tangles.
//!
//! Diagrams are resolved into a cube whose saddles carry decorations;
//! the deformed Frobenius algebra `A_t = R[X]/(X^2 = t)` turns the cube
//! into a chain complex over an exact ring, and homology comes from
//! certified Smith normal forms. Circuit diagrams glue tangle cubes.

pub mod circuit;
pub mod closures;
pub mod cobordism;
pub mod cube;
pub mod diagram;
pub mod euler;
pub mod homology;
pub mod lee;
pub mod matrix;
pub mod moves;
pub mod random;
pub mod ring;
pub mod snf;
pub mod tqft;

pub use circuit::{check_nt_morphism, glue_complexes, operate_diagrams, parse_circuit, CircuitDiagram};
pub use cube::{CubeOptions, GeometricComplex};
pub use diagram::{parse_diagram, ClosureKind, State, VTangleDiagram};
pub use homology::{homology, homology_over, HomologySummary};
pub use ring::{Ring, RingTag, Zhalf, Zp};
pub use tqft::apply_tqft;

/// The integers.
pub type Z = num_bigint::BigInt;
/// The rationals.
pub type Q = num_rational::BigRational;
