//! Peer-node engine for MMM landscapes.

pub mod activities;
pub mod error;
pub mod explorer;
pub mod graph;
pub mod id;
pub mod landscape;
pub mod model;
pub mod permissions;
pub mod serial;
pub mod sim;
pub mod store;
pub mod sync;
pub mod territory;
pub mod topography;

pub use error::{Error, Result};
pub use id::{ContentKey, IdGenerator, LandmarkId};
pub use landscape::{Area, Landscape};
pub use model::{
    AbstractKind, Authorship, ConcreteType, ContractTerms, Contribution, Draft, Mark, Payload, Status, Tag,
};
pub use serial::{canonical_digest, parse_landscape, serialize_landscape, LandscapeDigest};
pub use territory::Territory;
