//! Arnold-type strangeness invariants of cooriented plane curves (`St(1)`)
//! and of immersed surfaces presented as slice movies (`St(2)`), together
//! with local sheet-arrangement models of the codimension-one events and the
//! checks that tie them together.

pub mod arrangement;
pub mod canon;
pub mod constructions;
pub mod diagram;
pub mod error;
pub mod geometry;
pub mod ids;
pub mod movie;
pub mod numbering;
pub mod omega3;
pub mod rational;
pub mod render;
pub mod report;
mod slicing;
pub mod text;
pub mod verify;

pub use diagram::{Coorient, Diagram, Face, FreeCircle, Host, RegionId, Side, ValidationReport, Violation};
pub use error::{Error, Result};
pub use ids::{CircleId, DartId, VertexId};
pub use numbering::{RegionNumbering, TriangleKind};
pub use rational::Rational;
pub use text::{parse_diagram, serialize_diagram};
