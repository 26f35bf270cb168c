//! Surface AST for the LF concrete syntax. Names stay unresolved here;
//! morphism and term positions are disambiguated during lowering.

use crate::graph::{Assoc, Fixity, Span};

#[derive(Clone, Debug)]
pub struct SGraph {
    pub decls: Vec<SDecl>,
}

#[derive(Clone, Debug)]
pub enum SDecl {
    Sig {
        name: String,
        body: Vec<SDecl>,
        span: Span,
    },
    View {
        name: String,
        domain: SName,
        codomain: SName,
        entries: Vec<SInst>,
        span: Span,
    },
    Include {
        name: SName,
        span: Span,
    },
    Struct {
        name: String,
        domain: SName,
        entries: Vec<SInst>,
        span: Span,
    },
    Const {
        name: String,
        classifier: SExpr,
        def: Option<SExpr>,
        span: Span,
    },
    Fixity {
        fixity: Fixity,
        assoc: Assoc,
        prec: u32,
        symbol: String,
        span: Span,
    },
}

/// A (possibly dotted) name with its position.
#[derive(Clone, Debug)]
pub struct SName {
    pub segments: Vec<String>,
    pub span: Span,
}

impl SName {
    pub fn joined(&self) -> String {
        self.segments.join(".")
    }
}

#[derive(Clone, Debug)]
pub enum SInst {
    Symbol { name: SName, rhs: SExpr },
    Struct { name: SName, rhs: SExpr },
}

#[derive(Clone, Debug)]
pub enum SExpr {
    Name(SName),
    /// The kind `type`.
    TypeKw(Span),
    /// `_`
    Hole(Span),
    /// `S?x` (a structure path when used as a morphism) or `S?c⟨μ⟩`.
    Qualified {
        sig: SName,
        symbol: SName,
        via: Option<Box<SExpr>>,
        span: Span,
    },
    /// `id` / `incl` morphism atoms.
    IdMor(Span),
    InclMor(Span),
    Arrow(Box<SExpr>, Box<SExpr>),
    /// `{x : A} B` — a Π or, when `A` names a signature, a morphism Π.
    Pi {
        var: String,
        annot: Box<SExpr>,
        body: Box<SExpr>,
        span: Span,
    },
    /// `[x : A] t`
    Lam {
        var: String,
        annot: Box<SExpr>,
        body: Box<SExpr>,
        span: Span,
    },
    App(Box<SExpr>, Box<SExpr>),
    /// `{σ : S -> T}` anonymous morphism literal.
    Anon {
        entries: Vec<SInst>,
        domain: SName,
        codomain: SName,
        span: Span,
    },
}

impl SExpr {
    pub fn span(&self) -> Span {
        match self {
            SExpr::Name(n) => n.span,
            SExpr::TypeKw(s)
            | SExpr::Hole(s)
            | SExpr::IdMor(s)
            | SExpr::InclMor(s) => *s,
            SExpr::Qualified { span, .. }
            | SExpr::Pi { span, .. }
            | SExpr::Lam { span, .. }
            | SExpr::Anon { span, .. } => *span,
            SExpr::Arrow(a, _) | SExpr::App(a, _) => a.span(),
        }
    }
}
