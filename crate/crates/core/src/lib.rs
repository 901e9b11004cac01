//! Constructive fractal geometry around Jordan arcs of prescribed conformal
//! dimension.
//!
//! * [`cantor`]: ratio-sequence Cantor sets `E`, self-similar sets `K_b`, products.
//! * [`measure`]: the natural measure on `E` and its mass-distribution bounds.
//! * [`arc`]: the cell/connector/parameter-tree construction of the arc
//!   approximations `Γ_k` through `E × Y`.
//! * [`metric`]: snowflaked intervals and rug spaces with the max metric.
//! * [`dimension`]: box counting, greedy nets, and log-log regression.

pub mod arc;
pub mod cantor;
pub mod dimension;
pub mod geometry;
pub mod measure;
pub mod metric;
pub mod rational;

pub use rational::Rational;
