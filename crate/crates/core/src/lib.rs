pub mod acceptance;
pub mod algebra;
pub mod cli;
pub mod concentration;
pub mod error;
pub mod known_order;
pub mod nisan;
pub mod roabp;

pub use error::{Error, Result};
