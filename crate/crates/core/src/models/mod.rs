//! Concrete gyrogroup models.

mod cayley;
mod mobius;
mod search;

pub use cayley::CayleyGyrogroup;
pub use mobius::{mobius_oplus, MobiusDiskModel};
pub use search::{cayley_search, SearchResult};
