//! Entanglement, Bell nonlocality and channel capacities of bosonic and
//! fermionic field modes seen by a static observer in de Sitter space,
//! for the one-parameter family of α-vacua.

pub mod bosonic;
pub mod channels;
pub mod error;
pub mod fermionic;
pub mod linalg;
pub mod params;

pub use error::{Error, Result};
pub use params::{Alpha, ModeParams, Scale};
