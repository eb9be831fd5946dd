pub mod aut;
pub mod canon;
pub mod closure;
pub mod cyclotomy;
pub mod deza;
pub mod dimension;
pub mod error;
pub mod families;
pub mod group;
pub mod par;
pub mod sring;
pub mod survey;
pub mod tables;

pub use error::{Error, Result};
