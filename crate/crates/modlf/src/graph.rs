//! Source-level signature graphs: the toplevel declarations fed to the
//! checker. The checked, immutable form lives in [`crate::kernel`].

use crate::expr::{Expr, InstEntry, Name, SigRef};

/// A source position, for diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Span {
        Span { line, col }
    }
}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// An ordered list of toplevel declarations: signatures and views.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SourceGraph {
    pub decls: Vec<TopDecl>,
}

impl SourceGraph {
    pub fn new() -> SourceGraph {
        SourceGraph::default()
    }
    pub fn push_sig(&mut self, sig: SigDef) {
        self.decls.push(TopDecl::Sig(sig));
    }
    pub fn push_view(&mut self, view: ViewDef) {
        self.decls.push(TopDecl::View(view));
    }
    /// Concatenate another graph's declarations after this one's.
    pub fn extend(&mut self, other: SourceGraph) {
        self.decls.extend(other.decls);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TopDecl {
    Sig(SigDef),
    View(ViewDef),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigDef {
    pub name: Name,
    pub body: Vec<SigDecl>,
    pub span: Option<Span>,
}

impl SigDef {
    pub fn new(name: impl Into<String>) -> SigDef {
        SigDef {
            name: name.into(),
            body: Vec::new(),
            span: None,
        }
    }
    pub fn with(mut self, decl: SigDecl) -> SigDef {
        self.body.push(decl);
        self
    }
    pub fn include(self, sig: impl Into<String>) -> SigDef {
        self.with(SigDecl::Include {
            sig: SigRef::new(sig),
            span: None,
        })
    }
    pub fn constant(self, name: impl Into<String>, classifier: Expr) -> SigDef {
        self.with(SigDecl::Const(ConstDecl {
            name: name.into(),
            classifier,
            def: None,
            span: None,
        }))
    }
    pub fn defined(self, name: impl Into<String>, classifier: Expr, def: Expr) -> SigDef {
        self.with(SigDecl::Const(ConstDecl {
            name: name.into(),
            classifier,
            def: Some(def),
            span: None,
        }))
    }
    pub fn structure(
        self,
        name: impl Into<String>,
        domain: impl Into<String>,
        entries: Vec<InstEntry>,
    ) -> SigDef {
        self.with(SigDecl::Struct(StructDecl {
            name: name.into(),
            domain: SigRef::new(domain),
            entries,
            span: None,
        }))
    }
    pub fn nested(self, sig: SigDef) -> SigDef {
        self.with(SigDecl::Nested(sig))
    }
}

/// One declaration inside a signature body. Constants and type families
/// share `Const`; the classifier's shape (kind vs type) tells them apart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SigDecl {
    Nested(SigDef),
    Include { sig: SigRef, span: Option<Span> },
    Const(ConstDecl),
    Struct(StructDecl),
    Fixity(FixityDecl),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstDecl {
    pub name: Name,
    pub classifier: Expr,
    pub def: Option<Expr>,
    pub span: Option<Span>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructDecl {
    pub name: Name,
    pub domain: SigRef,
    pub entries: Vec<InstEntry>,
    pub span: Option<Span>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViewDef {
    pub name: Name,
    pub domain: SigRef,
    pub codomain: SigRef,
    pub entries: Vec<InstEntry>,
    pub span: Option<Span>,
}

impl ViewDef {
    pub fn new(
        name: impl Into<String>,
        domain: impl Into<String>,
        codomain: impl Into<String>,
        entries: Vec<InstEntry>,
    ) -> ViewDef {
        ViewDef {
            name: name.into(),
            domain: SigRef::new(domain),
            codomain: SigRef::new(codomain),
            entries,
            span: None,
        }
    }
}

/// Operator fixity pragma, Twelf-style: `%infix right 0 ⇛.`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixityDecl {
    pub fixity: Fixity,
    pub assoc: Assoc,
    pub prec: u32,
    pub symbol: Name,
    pub span: Option<Span>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fixity {
    Infix,
    Prefix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Assoc {
    Left,
    Right,
    None,
}
