//! Lifting databases into multi-context systems.

pub mod deductive;
pub mod distributed;
pub mod p2p;
pub mod relational;

pub use deductive::{deductive_db_to_mcs, extensional_only_check, DeductiveDb, EXTENSIONAL, INTENSIONAL};
pub use distributed::{distributed_db, exclusion_constraints, Site};
pub use p2p::{
    interpretation_to_state, p2p_ground_program, p2p_minimal_model, p2p_reduced_program, p2p_to_mcs, p2p_weak_models,
    state_to_interpretation, GroundProgram, GroundPeerRule, Interpretation, MappingRule, Peer,
};
pub use relational::{ctx_of_db, denial_to_ic, parse_denial, Denial};
