//! Discrete semiclassical linear functionals of class at most two.

pub mod catalog;
pub mod equation;
pub mod exact;
pub mod functional;
pub mod hyper;
pub mod orthopoly;
pub mod transforms;
