#![allow(dead_code)]

pub mod dpll;
pub mod goldens;
pub mod terms;
