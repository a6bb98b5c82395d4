//! Independent oracles, the bundled corpus and the acceptance criteria.

pub mod closure;
pub mod corpus;
pub mod criteria;
pub mod graphs;
