//! Error types for the kernel and module system.

use thiserror::Error;

use crate::graph::Span;

pub type Result<T> = std::result::Result<T, KernelError>;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum KernelError {
    #[error("unbound identifier `{0}`")]
    UnboundIdentifier(String),
    #[error("unknown symbol `{symbol}` in signature `{sig}`")]
    UnknownSymbol { sig: String, symbol: String },
    #[error("unknown signature `{0}`")]
    UnknownSignature(String),
    #[error("ambiguous signature reference `{0}` (qualify with its parent)")]
    AmbiguousSignature(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("kind mismatch: expected {expected}, found {actual}")]
    KindMismatch { expected: String, actual: String },
    #[error("type mismatch: expected {expected}, found {actual}")]
    TypeMismatch { expected: String, actual: String },
    #[error("kind syntax is not allowed in this position: {0}")]
    IllegalKindPosition(String),
    #[error("expected a function, found `{found}` of classifier {classifier}")]
    NotAFunction { found: String, classifier: String },
    #[error("unknown view `{0}`")]
    UnknownView(String),
    #[error("unknown structure `{structure}` in signature `{sig}`")]
    UnknownStructure { sig: String, structure: String },
    #[error("morphism composition mismatch: {0}")]
    CompositionMismatch(String),
    #[error("signature `{target}` must include `{missing}` (required by a morphism out of `{origin}`)")]
    IncludeConditionViolated {
        origin: String,
        target: String,
        missing: String,
    },
    #[error("view or morphism from `{sig}` is missing an assignment for `{symbol}`")]
    MissingAssignment { sig: String, symbol: String },
    #[error("assignment for `{symbol}` has the wrong classifier: expected {expected}, found {actual}")]
    AssignmentTypeMismatch {
        symbol: String,
        expected: String,
        actual: String,
    },
    #[error("assignment for defined symbol `{symbol}` clashes with its translated definition")]
    DefinitionClash { symbol: String },
    #[error("instantiation for `{symbol}` has the wrong classifier: expected {expected}, found {actual}")]
    InstantiationTypeMismatch {
        symbol: String,
        expected: String,
        actual: String,
    },
    #[error("instantiated symbol `{symbol}` does not exist in signature `{sig}`")]
    UnknownInstantiatedSymbol { sig: String, symbol: String },
    #[error("cannot instantiate `{symbol}`: it is included from `{origin}` and morphisms are the identity on included symbols")]
    CannotInstantiateIncluded { symbol: String, origin: String },
    #[error("morphism variables may not range over `{sig}`: it declares type family `{family}` outside an include")]
    TypeFamilyRestrictionViolated { sig: String, family: String },
    #[error("morphism variables may not range over `{sig}`: declaration `{decl}` uses morphism abstraction")]
    MorphismDomainUnsupported { sig: String, decl: String },
    #[error("morphism domain mismatch: expected a morphism out of `{expected}`, found one out of `{actual}`")]
    MorphismDomainMismatch { expected: String, actual: String },
    #[error("morphism codomain mismatch: expected a morphism into `{expected}`, found one into `{actual}`")]
    MorphismCodomainMismatch { expected: String, actual: String },
    #[error("the morphism-variable extension is disabled (re-run with it enabled)")]
    MorphismVarsDisabled,
    #[error("unsupported morphism shape in identifier: {0}")]
    UnsupportedMorphismShape(String),
    #[error("cannot infer the endpoints of `{0}` in this position")]
    UnderdeterminedMorphism(String),
    #[error("expected a term variable, index {0} is bound as a morphism variable")]
    ExpectedTermVariable(u32),
    #[error("expected a morphism variable, index {0} is bound as a term variable")]
    ExpectedMorphismVariable(u32),
    #[error("variable index {0} is out of range for the context")]
    VariableOutOfRange(u32),
    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<KernelError>,
    },
    #[error("at {span}: {source}")]
    At {
        span: Span,
        #[source]
        source: Box<KernelError>,
    },
}

impl KernelError {
    pub fn ctx(self, context: impl Into<String>) -> KernelError {
        KernelError::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }
    pub fn at(self, span: Option<Span>) -> KernelError {
        match span {
            Some(span) => KernelError::At {
                span,
                source: Box::new(self),
            },
            None => self,
        }
    }
    /// The innermost error, unwrapping context layers.
    pub fn root(&self) -> &KernelError {
        match self {
            KernelError::Context { source, .. } | KernelError::At { source, .. } => source.root(),
            other => other,
        }
    }
    /// The span closest to the root error, if any.
    pub fn span(&self) -> Option<Span> {
        match self {
            KernelError::At { span, source } => source.span().or(Some(*span)),
            KernelError::Context { source, .. } => source.span(),
            _ => None,
        }
    }
}
