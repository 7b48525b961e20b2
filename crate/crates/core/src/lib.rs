//! Exact computations with additive polynomial dynamics over finite fields
//! and their characteristic-zero lifts.

pub mod addpoly;
pub mod budget;
pub mod cyclotomic;
pub mod dynsys;
pub mod ff;
pub mod gmlift;
pub mod moduli;
pub mod monodromy;
pub mod field;
pub mod poly;
