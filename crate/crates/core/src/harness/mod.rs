//! Drivers behind the command-line front end: convergence tables, benchmark
//! runs, scheme comparisons and Schlieren images.

pub mod accuracy;
pub mod compare;
pub mod schlieren;
pub mod solve;
