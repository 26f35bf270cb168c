//! Modular LF: a kernel for a dependently typed logical framework with
//! signatures, signature morphisms, structures, views, and morphism
//! variables, together with a translator from a simplified Isabelle
//! language (theories, locales, type classes) into modular LF.

pub mod error;
pub mod expr;
pub mod flatten;
pub mod graph;
pub mod isabelle;
pub mod kernel;
pub mod morvar;
pub mod pure;
pub mod render;
pub mod syntax;
pub mod translate;

pub use error::{KernelError, Result};
pub use expr::{Context, Expr, InstEntry, Morphism, QualifiedId, SigRef};
pub use graph::{SigDef, SourceGraph, ViewDef};
pub use kernel::{check_graph, CheckOptions, CheckedGraph, GraphBuilder, TypingResult};
