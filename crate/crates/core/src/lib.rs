//! Certificates for Galois realizations over Q whose nontrivial inertia
//! groups all have order 2.

pub mod cli;
pub mod dec;
pub mod galois_id;
pub mod gate;
pub mod groups;
pub mod inertia;
pub mod intarith;
pub mod intersective;
pub mod modp;
pub mod presets;
pub mod report;
pub mod reproduce;
pub mod zpoly;
