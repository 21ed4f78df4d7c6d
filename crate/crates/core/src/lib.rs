//! Abelian sandpile model on finite graph approximations of post-critically
//! finite fractals: Sierpinski gasket (vertex and cell graphs), hexagasket,
//! pentagasket and the Mitsubishi gasket.
//!
//! The crate is split by concern:
//!
//! * [`graph`] builds the sinked graphs and answers metric/cut queries.
//! * [`sandpile`] holds configurations, the stabilization engine and the
//!   recurrent-group operations (⊕, `Id_f`, identity element).
//! * [`group`] computes sandpile group structure with exact integer algebra.
//! * [`experiments`] runs growth, periodicity and identity studies.
//! * [`io`] covers file formats, run manifests and PPM rendering.

pub mod experiments;
pub mod graph;
pub mod group;
pub mod io;
pub mod sandpile;

pub use graph::{Boundary, Family, FamilySpec, GraphError, SinkedGraph, VertexId};
pub use group::{IntegerMatrix, InvariantFactors, PrimaryDecomposition};
pub use sandpile::{Configuration, Odometer, SandpileError, StabilizationResult};
