//! Counting Tait colorings of planar triangulations through an exact sum of
//! F3 Gaussian-sum weights, with brute-force oracles for every step.

pub mod alpharep;
pub mod gf3linalg;
pub mod oracles;
pub mod triangulation;
pub mod verify;

pub use alpharep::{tait0_alpha, tait0_alpha_with, AlphaOptions, AlphaOutcome};
pub use gf3linalg::{SymF3Matrix, F3};
pub use triangulation::{generate, parse_rotation_system, Family, Triangulation};
