//! Countable groups with proper left-invariant metrics, coarse equivalences
//! between them, and exact verifiers for the certificates those equivalences carry.

pub mod analysis;
pub mod asdim;
pub mod coarse;
pub mod error;
pub mod factorize;
pub mod groups;
pub mod metrics;
pub mod quotients;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Coord, Distance, Real};

use num_bigint::BigInt;

pub type Integers = groups::FreeAbelian<i64>;
pub type Heisenberg64 = groups::Heisenberg<i64>;
pub type BigHeisenberg = groups::Heisenberg<BigInt>;
pub type Rationals = groups::QmodZ<i64>;
pub type Descriptor64 = groups::DescriptorGroup<i64>;
pub type BigDescriptor = groups::DescriptorGroup<BigInt>;
