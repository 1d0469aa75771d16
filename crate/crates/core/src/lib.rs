//! Generalized lacunary chaos.
//!
//! Index sets of signed `l`-wise sums of lacunary sequences, Khintchine-type
//! norm bounds for trigonometric and Walsh chaos, exact inverse Parseval
//! checks on interval sets, Walsh chaos coefficient recovery, and a
//! projected-gradient search for extremal `L^p / L^2` ratios.
//!
//! Inner loops (enumeration, grid norms, Monte Carlo suites, restarts) run on
//! rayon when the `parallel` feature is enabled; see [`par`].

pub mod error;
pub mod extremal;
pub mod lacunary;
pub mod measure;
pub mod par;
pub mod parseval;
pub mod trig;
pub mod walsh;

pub use error::{Error, Result};
