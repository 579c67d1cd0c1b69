pub mod catalog;
pub mod error;
pub mod exalg;
pub mod g2;
pub mod linalg;
pub mod model;
pub mod regression;
pub mod report;
pub mod ring;
pub mod stable;
pub mod su3;

pub use error::{Error, Result};
pub use exalg::{Blade, Form, Frame};
pub use ring::{Rational, RingElement};
