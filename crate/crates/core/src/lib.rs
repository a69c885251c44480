pub mod arith;
pub mod aut;
pub mod bianchi;
pub mod genus;
pub mod gluing;
pub mod lattice;
pub mod matrix;
pub mod serial;
