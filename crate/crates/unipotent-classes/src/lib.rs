//! Unipotent conjugacy classes of Sp(2n) and SO(2n+1) over residue fields.
//!
//! Classes are named by a partition with discriminant bits on the
//! form-carrying parts. The crate enumerates the admissible labels for a
//! group over F_q, classifies a given unipotent element by Cayley transform
//! and twisted Gram discriminants, and provides brute-force conjugacy
//! orbits as an independent ground truth.

pub mod classify;
pub mod label;
pub mod orbits;

pub use classify::{classify, classify_detailed, residue_grid, ClassifyDetail, ClassifyError};
pub use label::{
    enumerate_class_labels, form_carrying, jordan_matrix, partitions, UnipotentClassLabel,
};
pub use orbits::{conjugacy_orbits, unipotent_conjugacy_orbits};
