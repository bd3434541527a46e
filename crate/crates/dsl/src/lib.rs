//! A small BUGS-style model language.
//!
//! ```text
//! model {
//!   p ~ dbeta(1, 1)
//!   y ~ dbin(p, 12)
//! }
//! ```
//!
//! Scripts are parsed to a [`ModelAst`], compiled against a [`DataSet`] into a
//! [`ModelGraph`] (loops unrolled, identifiers resolved, cycles rejected) and
//! sampled with [`sample_graph`]. `dnorm` takes a standard deviation, not a
//! precision.

pub mod ast;
pub mod data;
mod error;
pub mod graph;
mod lexer;
mod parser;
pub mod sampler;

pub use ast::ModelAst;
pub use data::{DataSet, DataValue};
pub use error::{DslError, Result, Span};
pub use graph::{compile, ModelGraph, NodeId};
pub use parser::parse;
pub use sampler::{sample_graph, SamplerOptions};
