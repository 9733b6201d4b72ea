//! Inverse systems of finite group actions: limits, orbit spaces, and
//! verified commutation of the orbit map with the inverse limit.
//!
//! The crate is organized in layers:
//! - [`algebra`]: finite groups, homomorphisms, actions, orbits, transporters
//! - [`systems`]: directed indices, towers of spaces/groups, equivariant towers
//! - [`limits`]: threads, nonemptiness, the universal property, limit groups
//! - [`commutation`]: orbit towers, the map ψ, certificates, stabilized checks
//! - [`search`]: seeded random tower generation and bulk verification

pub mod algebra;
pub mod commutation;
pub mod limits;
pub mod search;
pub mod systems;
