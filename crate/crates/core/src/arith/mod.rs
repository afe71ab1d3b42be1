pub mod algebra;
pub mod int;
pub mod lattice;
