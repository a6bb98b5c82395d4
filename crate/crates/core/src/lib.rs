//! Finite ray categories presented by quivers with relations.

pub mod classify;
pub mod cleaving;
pub mod contours;
pub mod error;
pub mod morphology;
pub mod presentation;
pub mod raycore;
pub mod reductions;
pub mod templates;

pub use error::{Error, Result};
pub use presentation::{parse_presentation, print_presentation, ArrowDecl, PathExpr, Presentation, Quiver, Relation};
pub use raycore::{build_ray_category, verify_axioms, MorId, RayCategory, RayMorphism, DEFAULT_CAP};
