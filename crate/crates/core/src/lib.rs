//! Exact computations with standard-graded Artinian algebras over GF(p).

pub mod exactla;
pub mod generator;
pub mod gradedring;
pub mod koszul;
pub mod resolve;
pub mod series;
