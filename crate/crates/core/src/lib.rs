//! Decide whether a finite automaton reading integers in base `b`, least
//! significant digit first, accepts an ultimately periodic set.

pub mod arith;
pub mod automaton;
pub mod decision;
pub mod error;
pub mod isomorphism;
pub mod minimize;
pub mod numeration;
pub mod oracle;
pub mod pascal;
pub mod scc;
pub mod text;

pub use automaton::{Automaton, Dfa, DfaBuilder, StateId};
pub use decision::{
    check_conditions, decide, decide_with, Condition, Conditions, DecisionResult, ExtractionCaps,
    Failure,
};
pub use error::{Error, Result};
pub use isomorphism::{isomorphic, isomorphism};
pub use minimize::minimize;
pub use numeration::{
    build_atomic_explicit, build_minimal_automaton, canonicalize, representation, value,
    CharacteristicProfile, UpSet,
};
pub use pascal::{is_pascal_quotient, PascalParams, Rejection};
pub use scc::{condensation, Condensation, SccId, SccType};
pub use text::{parse_dfa, write_dfa};
