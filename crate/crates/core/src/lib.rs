// SPDX-License-Identifier: Apache-2.0

//! Behavioral models for a CNTFET-based capacitive-divider minority gate.
//!
//! The crate is organized bottom-up:
//!
//! * [`device`] derives tube geometry and threshold voltage from chirality.
//! * [`logic`] holds the pure boolean minority function, SOP cost accounting
//!   and NAND/NOR bindings built by tying inputs to a rail.
//! * [`analog`] composes a weighted capacitive divider with a threshold
//!   inverter and checks it against the boolean reference.
//! * [`transient`] is a first-order RC delay/energy model plus the bundled
//!   reference tables in [`reference`].
//! * [`variation`] runs Monte Carlo yield analysis over tube diameter spread.

pub mod analog;
pub mod device;
mod error;
pub mod logic;
pub mod reference;
pub mod transient;
pub mod variation;

pub use error::{Error, Result};
