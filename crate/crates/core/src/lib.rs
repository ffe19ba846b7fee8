//! Survivable optical network design with XOR network coding.
//!
//! Every demand is carried twice (1+1 protection) over a working and an
//! edge-disjoint protection path. Demands ending at the same node can XOR their
//! signals on links their paths share, and the linear power model then charges
//! those links once.
//!
//! ```
//! use xorprot::{coding, model, power, routing};
//!
//! let ring = model::generate_ring(5, 20.0).unwrap();
//! let paths = routing::route_all(&ring).unwrap();
//! let osh = coding::select_pairs_osh(&ring, &paths, 8).unwrap();
//! let report = power::eval_with_coding(&ring, &osh.routing, &osh.assignment).unwrap();
//! assert_eq!(report.p_total, 37555.0);
//! ```

pub mod bounds;
pub mod cli;
pub mod coding;
pub mod error;
pub mod evaluate;
mod matching;
pub mod model;
pub mod oracle;
pub mod power;
pub mod repro;
pub mod routing;

pub use error::{Error, Result};
