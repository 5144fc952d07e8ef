pub mod basechange;
pub mod error;
pub mod exactalg;
pub mod globalfield;
pub mod lgroup;
pub mod localfactors;
pub mod rootdata;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
