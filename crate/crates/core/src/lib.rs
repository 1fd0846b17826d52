//! Stochastic simulation of the Brane Calculus.
//!
//! Terms are parsed by [`syntax`], given a reference stochastic semantics
//! by [`oracle`], and executed by encoding them into the generic
//! copy-on-write machine of [`gsam`] via [`encoding`]. [`sim`] drives runs
//! and writes CSV output; [`adequacy`] cross-checks machine and oracle.

pub mod adequacy;
pub mod encoding;
pub mod gsam;
pub mod oracle;
pub mod rates;
pub mod sim;
pub mod syntax;
