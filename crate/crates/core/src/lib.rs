//! String diagrams for formal grammars.
//!
//! The crate builds syntax in free categories (arrows, operad trees,
//! monoidal, biclosed, rigid and hypergraph diagrams) and interprets it with
//! functors into semantic categories: tensors over semirings, functions on
//! value tuples and multiplicative weights.

pub mod biclosed;
pub mod cat;
pub mod dependency;
pub mod error;
pub mod formats;
pub mod function;
pub mod hypergraph;
pub mod monoidal;
pub mod operad;
pub mod pregroup;
pub mod rigid;
pub mod tensor;
mod text;

pub use error::{Error, Result};
pub use num_complex;
