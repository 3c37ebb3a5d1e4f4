pub mod algebra;
pub mod becher;
pub mod certificate;
pub mod error;
pub mod field;
pub mod involution;
pub mod linalg;
pub mod poly;
pub mod quaternion;
pub mod serial;
pub mod splitting;
pub mod wedderburn;

pub use error::{Error, Result};
pub use field::{Elem, Field, FieldElem, Inversion, ZeroDivisor};
pub use poly::Poly;
