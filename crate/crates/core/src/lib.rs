//! Representation-theoretic Fourier analysis on finite groups, functional
//! folding, smooth UFG label cover, gadget reductions to Max-3-LIN over a
//! group, and solvers for the resulting instances.

pub mod catalog;
pub mod domain;
pub mod error;
pub mod folding;
pub mod group;
pub mod harness;
pub mod labelcover;
pub mod reduction;
pub mod rep;
pub mod seed;
pub mod solvers;

pub use error::{Error, Result};
pub use group::{Elem, Group};
