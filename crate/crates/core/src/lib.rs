//! Exhaustive, witness-producing computations on small finite rings:
//! regular and unit-regular elements, special clean decompositions,
//! direct summands of `R_R`, the summand sum property and internal
//! cancellation.

pub mod cache;
pub mod catalog;
pub mod classify;
pub mod construct;
pub mod element;
pub mod error;
pub mod hom;
pub mod hunt;
pub mod ideal;
pub mod report;
pub mod ring;
pub mod shape;
pub mod suite;

pub use classify::{CancellationOutcome, ProductVerdict, RingProfile, Verdict, Witness};
pub use construct::{ConstructionTrace, TraceReport};
pub use element::{CleanDecomposition, ElementClassification, RegularityWitness};
pub use error::{Error, Result};
pub use hom::ModuleHom;
pub use ideal::RightIdeal;
pub use ring::{Elem, FiniteRing, UnitSet};
pub use suite::{theorem_suite, RingAnalysis, Suite, SuiteReport, SuiteStatus};
