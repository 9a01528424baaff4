#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod coadjoint;
pub mod dh;
pub mod json;
pub mod lattice;
pub mod local_model;
pub mod rep;
