pub mod arith;
pub mod buildings;
pub mod bundle;
pub mod chern;
pub mod cli;
pub mod polyhedral;
pub mod ppoly;
pub mod sampling;
