//! Expression syntax for modular LF: kinds, type families, terms, and the
//! morphism composition language.
//!
//! Bound variables are de Bruijn indices counting *all* enclosing binders,
//! term binders and morphism binders alike. A `Var` index must point at a
//! term binder and a `Morphism::Var` index at a morphism binder; the checker
//! enforces this. Alpha equivalence is therefore plain structural equality:
//! name hints are carried for printing only and compare equal to everything.

use std::fmt;

pub type Name = String;

/// Printing hint for a binder or variable. Ignored by all comparisons.
#[derive(Clone, Debug, Default)]
pub struct Hint(pub String);

impl Hint {
    pub fn new(s: impl Into<String>) -> Hint {
        Hint(s.into())
    }
    pub fn as_str(&self) -> &str {
        if self.0.is_empty() {
            "_"
        } else {
            &self.0
        }
    }
}

impl PartialEq for Hint {
    fn eq(&self, _: &Hint) -> bool {
        true
    }
}
impl Eq for Hint {}

impl fmt::Display for Hint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Reference to a signature by (possibly qualified) name. Nested signatures
/// have dotted paths (`Pure.Type`); the checker resolves bare names against
/// an alias table, so `Type` and `Pure.Type` denote the same signature.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SigRef(pub String);

impl SigRef {
    pub fn new(s: impl Into<String>) -> SigRef {
        SigRef(s.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SigRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A symbol identifier `S?c⟨μ⟩`: symbol `c` declared (or induced) in
/// signature `S`, used through the morphism `μ` out of `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QualifiedId {
    pub sig: SigRef,
    pub symbol: Name,
    pub via: Morphism,
}

impl QualifiedId {
    pub fn local(sig: impl Into<String>, symbol: impl Into<String>) -> QualifiedId {
        QualifiedId {
            sig: SigRef::new(sig),
            symbol: symbol.into(),
            via: Morphism::Id,
        }
    }
    pub fn included(sig: impl Into<String>, symbol: impl Into<String>) -> QualifiedId {
        QualifiedId {
            sig: SigRef::new(sig),
            symbol: symbol.into(),
            via: Morphism::Incl,
        }
    }
}

/// A term or morphism binder at the expression level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binder {
    pub hint: Hint,
    pub domain: Expr,
    pub body: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorBinder {
    pub hint: Hint,
    pub domain: SigRef,
    pub body: Expr,
}

/// Unified expression tree covering kinds, type families, and terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// The kind `type`.
    Type,
    /// Non-dependent kind arrow `A -> K`.
    KindArrow(Box<Expr>, Box<Expr>),
    /// Bound variable (de Bruijn index over all binders).
    Var(u32, Hint),
    /// Symbol identifier `S?c⟨μ⟩`.
    Sym(Box<QualifiedId>),
    /// Dependent function type `{x:A} B`.
    Pi(Box<Binder>),
    /// Abstraction `[x:A] t`.
    Lam(Box<Binder>),
    /// Application.
    App(Box<Expr>, Box<Expr>),
    /// Morphism-dependent type `{X:S} A`.
    MorPi(Box<MorBinder>),
    /// Abstraction over a morphism `[X:S] t`.
    MorLam(Box<MorBinder>),
    /// Application of a term to a morphism.
    MorApp(Box<Expr>, Box<Morphism>),
    /// An inference hole, used only by the concrete-syntax elaborator for
    /// omitted implicit arguments. Rejected by the kernel.
    Hole(u32),
}

impl Expr {
    pub fn sym(qid: QualifiedId) -> Expr {
        Expr::Sym(Box::new(qid))
    }
    pub fn local(sig: impl Into<String>, symbol: impl Into<String>) -> Expr {
        Expr::sym(QualifiedId::local(sig, symbol))
    }
    pub fn included(sig: impl Into<String>, symbol: impl Into<String>) -> Expr {
        Expr::sym(QualifiedId::included(sig, symbol))
    }
    pub fn var(index: u32, hint: impl Into<String>) -> Expr {
        Expr::Var(index, Hint::new(hint))
    }
    pub fn pi(hint: impl Into<String>, domain: Expr, body: Expr) -> Expr {
        Expr::Pi(Box::new(Binder {
            hint: Hint::new(hint),
            domain,
            body,
        }))
    }
    pub fn lam(hint: impl Into<String>, domain: Expr, body: Expr) -> Expr {
        Expr::Lam(Box::new(Binder {
            hint: Hint::new(hint),
            domain,
            body,
        }))
    }
    pub fn app(f: Expr, a: Expr) -> Expr {
        Expr::App(Box::new(f), Box::new(a))
    }
    pub fn apps(f: Expr, args: impl IntoIterator<Item = Expr>) -> Expr {
        args.into_iter().fold(f, Expr::app)
    }
    /// Non-dependent function type `A -> B` (a `Pi` whose body ignores the
    /// bound variable).
    pub fn arrow(domain: Expr, body: Expr) -> Expr {
        Expr::pi("", domain, shift_expr(&body, 0, 1))
    }
    pub fn kind_arrow(domain: Expr, codomain: Expr) -> Expr {
        Expr::KindArrow(Box::new(domain), Box::new(codomain))
    }
    pub fn mor_pi(hint: impl Into<String>, domain: SigRef, body: Expr) -> Expr {
        Expr::MorPi(Box::new(MorBinder {
            hint: Hint::new(hint),
            domain,
            body,
        }))
    }
    pub fn mor_lam(hint: impl Into<String>, domain: SigRef, body: Expr) -> Expr {
        Expr::MorLam(Box::new(MorBinder {
            hint: Hint::new(hint),
            domain,
            body,
        }))
    }
    pub fn mor_app(f: Expr, mu: Morphism) -> Expr {
        Expr::MorApp(Box::new(f), Box::new(mu))
    }

    /// True if the expression is a kind (`type` or an arrow into a kind).
    pub fn is_kind(&self) -> bool {
        match self {
            Expr::Type => true,
            Expr::KindArrow(_, k) => k.is_kind(),
            _ => false,
        }
    }

    /// Decompose an application spine: `((h a) b)` yields `(h, [a, b])`
    /// where morphism applications appear as `Arg::Mor`.
    pub fn spine(&self) -> (&Expr, Vec<Arg<'_>>) {
        let mut args = Vec::new();
        let mut head = self;
        loop {
            match head {
                Expr::App(f, a) => {
                    args.push(Arg::Term(a));
                    head = f;
                }
                Expr::MorApp(f, m) => {
                    args.push(Arg::Mor(m));
                    head = f;
                }
                _ => break,
            }
        }
        args.reverse();
        (head, args)
    }

    /// Whether any of the §3 morphism-variable constructs occur in the tree.
    pub fn uses_morphism_constructs(&self) -> bool {
        match self {
            Expr::Type | Expr::Var(..) | Expr::Hole(_) => false,
            Expr::KindArrow(a, b) => a.uses_morphism_constructs() || b.uses_morphism_constructs(),
            Expr::Sym(qid) => morphism_uses_var_or_binderish(&qid.via),
            Expr::Pi(b) | Expr::Lam(b) => {
                b.domain.uses_morphism_constructs() || b.body.uses_morphism_constructs()
            }
            Expr::App(f, a) => f.uses_morphism_constructs() || a.uses_morphism_constructs(),
            Expr::MorPi(_) | Expr::MorLam(_) | Expr::MorApp(..) => true,
        }
    }
}

fn morphism_uses_var_or_binderish(m: &Morphism) -> bool {
    match m {
        Morphism::Var(..) => true,
        Morphism::Seq(ms) => ms.iter().any(morphism_uses_var_or_binderish),
        Morphism::Anon(a) => a.entries.iter().any(|e| match e {
            InstEntry::Symbol { rhs, .. } => rhs.uses_morphism_constructs(),
            InstEntry::Struct { rhs, .. } => morphism_uses_var_or_binderish(rhs),
        }),
        _ => false,
    }
}

#[derive(Clone, Copy, Debug)]
pub enum Arg<'a> {
    Term(&'a Expr),
    Mor(&'a Morphism),
}

/// Morphism composition language. `Seq` is composition in diagram order:
/// `Seq([μ, μ'])` applies `μ` first, matching the paper's juxtaposition
/// `μ μ'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Morphism {
    Id,
    Incl,
    /// Structure path `T?s`.
    Struct(SigRef, Name),
    /// Named view.
    View(Name),
    /// Anonymous morphism `{σ : S -> T}`.
    Anon(Box<AnonMorphism>),
    /// Morphism variable (de Bruijn index over all binders).
    Var(u32, Hint),
    /// Composition, first component applied first.
    Seq(Vec<Morphism>),
}

impl Morphism {
    pub fn struct_path(sig: impl Into<String>, name: impl Into<String>) -> Morphism {
        Morphism::Struct(SigRef::new(sig), name.into())
    }
    pub fn view(name: impl Into<String>) -> Morphism {
        Morphism::View(name.into())
    }
    pub fn var(index: u32, hint: impl Into<String>) -> Morphism {
        Morphism::Var(index, Hint::new(hint))
    }
    pub fn anon(domain: SigRef, codomain: SigRef, entries: Vec<InstEntry>) -> Morphism {
        Morphism::Anon(Box::new(AnonMorphism {
            domain,
            codomain,
            entries,
        }))
    }
    /// Composition `self` then `other`, flattening nested sequences and
    /// dropping identity units.
    pub fn then(self, other: Morphism) -> Morphism {
        let mut atoms = Vec::new();
        self.push_atoms(&mut atoms);
        other.push_atoms(&mut atoms);
        match atoms.len() {
            0 => Morphism::Id,
            1 => atoms.pop().unwrap(),
            _ => Morphism::Seq(atoms),
        }
    }
    pub fn compose(first: Morphism, then: Morphism) -> Morphism {
        first.then(then)
    }
    fn push_atoms(self, out: &mut Vec<Morphism>) {
        match self {
            Morphism::Seq(ms) => ms.into_iter().for_each(|m| m.push_atoms(out)),
            Morphism::Id => {}
            m => out.push(m),
        }
    }
    /// The flattened atom list, in application (diagram) order.
    pub fn atoms(&self) -> Vec<&Morphism> {
        fn walk<'a>(m: &'a Morphism, out: &mut Vec<&'a Morphism>) {
            match m {
                Morphism::Seq(ms) => ms.iter().for_each(|m| walk(m, out)),
                m => out.push(m),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

/// Anonymous morphism `{σ : S -> T}` with an explicit instantiation list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnonMorphism {
    pub domain: SigRef,
    pub codomain: SigRef,
    pub entries: Vec<InstEntry>,
}

/// One instantiation inside a structure, view, or anonymous morphism.
/// `Symbol` covers both constants (`c := t`) and type families (`a := A`);
/// the checker tells them apart by looking up the symbol. Names may be
/// dotted to target induced symbols (`o.≤ := …`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstEntry {
    Symbol { name: Name, rhs: Expr },
    Struct { name: Name, rhs: Morphism },
}

impl InstEntry {
    pub fn symbol(name: impl Into<String>, rhs: Expr) -> InstEntry {
        InstEntry::Symbol {
            name: name.into(),
            rhs,
        }
    }
    pub fn structure(name: impl Into<String>, rhs: Morphism) -> InstEntry {
        InstEntry::Struct {
            name: name.into(),
            rhs,
        }
    }
}

/// A typing context: ordered term and morphism bindings, outermost first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    pub entries: Vec<CtxEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CtxEntry {
    Term { hint: Hint, ty: Expr },
    Mor { hint: Hint, sig: SigRef },
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }
    pub fn len(&self) -> u32 {
        self.entries.len() as u32
    }
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
    pub fn push_term(&mut self, hint: impl Into<String>, ty: Expr) {
        self.entries.push(CtxEntry::Term {
            hint: Hint::new(hint),
            ty,
        });
    }
    pub fn push_mor(&mut self, hint: impl Into<String>, sig: SigRef) {
        self.entries.push(CtxEntry::Mor {
            hint: Hint::new(hint),
            sig,
        });
    }
    /// Look up a de Bruijn index (0 = innermost binding).
    pub fn lookup(&self, index: u32) -> Option<&CtxEntry> {
        let n = self.entries.len();
        let i = index as usize;
        if i < n {
            Some(&self.entries[n - 1 - i])
        } else {
            None
        }
    }
    /// The type of term variable `index`, shifted into the full context.
    pub fn term_type(&self, index: u32) -> Option<Expr> {
        match self.lookup(index)? {
            CtxEntry::Term { ty, .. } => Some(shift_expr(ty, 0, index + 1)),
            CtxEntry::Mor { .. } => None,
        }
    }
    pub fn mor_domain(&self, index: u32) -> Option<&SigRef> {
        match self.lookup(index)? {
            CtxEntry::Term { .. } => None,
            CtxEntry::Mor { sig, .. } => Some(sig),
        }
    }
}

// ---------------------------------------------------------------------------
// Shifting and substitution
// ---------------------------------------------------------------------------

/// Shift all variable indices `>= cutoff` by `amount`.
pub fn shift_expr(e: &Expr, cutoff: u32, amount: u32) -> Expr {
    if amount == 0 {
        return e.clone();
    }
    match e {
        Expr::Type => Expr::Type,
        Expr::Hole(i) => Expr::Hole(*i),
        Expr::KindArrow(a, k) => Expr::kind_arrow(
            shift_expr(a, cutoff, amount),
            shift_expr(k, cutoff, amount),
        ),
        Expr::Var(i, h) => {
            if *i >= cutoff {
                Expr::Var(i + amount, h.clone())
            } else {
                e.clone()
            }
        }
        Expr::Sym(qid) => Expr::Sym(Box::new(QualifiedId {
            sig: qid.sig.clone(),
            symbol: qid.symbol.clone(),
            via: shift_morphism(&qid.via, cutoff, amount),
        })),
        Expr::Pi(b) => Expr::Pi(Box::new(shift_binder(b, cutoff, amount))),
        Expr::Lam(b) => Expr::Lam(Box::new(shift_binder(b, cutoff, amount))),
        Expr::App(f, a) => Expr::app(shift_expr(f, cutoff, amount), shift_expr(a, cutoff, amount)),
        Expr::MorPi(b) => Expr::MorPi(Box::new(shift_mor_binder(b, cutoff, amount))),
        Expr::MorLam(b) => Expr::MorLam(Box::new(shift_mor_binder(b, cutoff, amount))),
        Expr::MorApp(f, m) => Expr::mor_app(
            shift_expr(f, cutoff, amount),
            shift_morphism(m, cutoff, amount),
        ),
    }
}

fn shift_binder(b: &Binder, cutoff: u32, amount: u32) -> Binder {
    Binder {
        hint: b.hint.clone(),
        domain: shift_expr(&b.domain, cutoff, amount),
        body: shift_expr(&b.body, cutoff + 1, amount),
    }
}

fn shift_mor_binder(b: &MorBinder, cutoff: u32, amount: u32) -> MorBinder {
    MorBinder {
        hint: b.hint.clone(),
        domain: b.domain.clone(),
        body: shift_expr(&b.body, cutoff + 1, amount),
    }
}

pub fn shift_morphism(m: &Morphism, cutoff: u32, amount: u32) -> Morphism {
    if amount == 0 {
        return m.clone();
    }
    match m {
        Morphism::Id | Morphism::Incl | Morphism::Struct(..) | Morphism::View(_) => m.clone(),
        Morphism::Var(i, h) => {
            if *i >= cutoff {
                Morphism::Var(i + amount, h.clone())
            } else {
                m.clone()
            }
        }
        Morphism::Anon(a) => Morphism::Anon(Box::new(AnonMorphism {
            domain: a.domain.clone(),
            codomain: a.codomain.clone(),
            entries: a
                .entries
                .iter()
                .map(|e| shift_entry(e, cutoff, amount))
                .collect(),
        })),
        Morphism::Seq(ms) => {
            Morphism::Seq(ms.iter().map(|m| shift_morphism(m, cutoff, amount)).collect())
        }
    }
}

fn shift_entry(e: &InstEntry, cutoff: u32, amount: u32) -> InstEntry {
    match e {
        InstEntry::Symbol { name, rhs } => InstEntry::Symbol {
            name: name.clone(),
            rhs: shift_expr(rhs, cutoff, amount),
        },
        InstEntry::Struct { name, rhs } => InstEntry::Struct {
            name: name.clone(),
            rhs: shift_morphism(rhs, cutoff, amount),
        },
    }
}

/// What to substitute for a variable: a term or a morphism.
#[derive(Clone, Debug)]
pub enum Subst<'a> {
    Term(&'a Expr),
    Mor(&'a Morphism),
}

/// Substitute `value` for variable `index` (relative to the outside of the
/// expression) and lower all variables above it by one. This is the β step
/// for both `App(Lam …)` and `MorApp(MorLam …)`.
pub fn subst_expr(e: &Expr, index: u32, value: Subst<'_>) -> Expr {
    match e {
        Expr::Type => Expr::Type,
        Expr::Hole(i) => Expr::Hole(*i),
        Expr::KindArrow(a, k) => {
            Expr::kind_arrow(subst_expr(a, index, value.clone()), subst_expr(k, index, value))
        }
        Expr::Var(i, h) => {
            if *i == index {
                match value {
                    Subst::Term(t) => shift_expr(t, 0, index),
                    // ill-typed input; the checker rejects this shape first
                    Subst::Mor(_) => Expr::Var(*i, h.clone()),
                }
            } else if *i > index {
                Expr::Var(i - 1, h.clone())
            } else {
                e.clone()
            }
        }
        Expr::Sym(qid) => Expr::Sym(Box::new(QualifiedId {
            sig: qid.sig.clone(),
            symbol: qid.symbol.clone(),
            via: subst_morphism(&qid.via, index, value),
        })),
        Expr::Pi(b) => Expr::Pi(Box::new(subst_binder(b, index, value))),
        Expr::Lam(b) => Expr::Lam(Box::new(subst_binder(b, index, value))),
        Expr::App(f, a) => Expr::app(
            subst_expr(f, index, value.clone()),
            subst_expr(a, index, value),
        ),
        Expr::MorPi(b) => Expr::MorPi(Box::new(subst_mor_binder(b, index, value))),
        Expr::MorLam(b) => Expr::MorLam(Box::new(subst_mor_binder(b, index, value))),
        Expr::MorApp(f, m) => Expr::mor_app(
            subst_expr(f, index, value.clone()),
            subst_morphism(m, index, value),
        ),
    }
}

fn subst_binder(b: &Binder, index: u32, value: Subst<'_>) -> Binder {
    Binder {
        hint: b.hint.clone(),
        domain: subst_expr(&b.domain, index, value.clone()),
        body: subst_expr(&b.body, index + 1, value),
    }
}

fn subst_mor_binder(b: &MorBinder, index: u32, value: Subst<'_>) -> MorBinder {
    MorBinder {
        hint: b.hint.clone(),
        domain: b.domain.clone(),
        body: subst_expr(&b.body, index + 1, value),
    }
}

pub fn subst_morphism(m: &Morphism, index: u32, value: Subst<'_>) -> Morphism {
    match m {
        Morphism::Id | Morphism::Incl | Morphism::Struct(..) | Morphism::View(_) => m.clone(),
        Morphism::Var(i, h) => {
            if *i == index {
                match value {
                    Subst::Mor(mu) => shift_morphism(mu, 0, index),
                    Subst::Term(_) => Morphism::Var(*i, h.clone()),
                }
            } else if *i > index {
                Morphism::Var(i - 1, h.clone())
            } else {
                m.clone()
            }
        }
        Morphism::Anon(a) => Morphism::Anon(Box::new(AnonMorphism {
            domain: a.domain.clone(),
            codomain: a.codomain.clone(),
            entries: a
                .entries
                .iter()
                .map(|e| match e {
                    InstEntry::Symbol { name, rhs } => InstEntry::Symbol {
                        name: name.clone(),
                        rhs: subst_expr(rhs, index, value.clone()),
                    },
                    InstEntry::Struct { name, rhs } => InstEntry::Struct {
                        name: name.clone(),
                        rhs: subst_morphism(rhs, index, value.clone()),
                    },
                })
                .collect(),
        })),
        Morphism::Seq(ms) => Morphism::Seq(
            ms.iter()
                .map(|m| subst_morphism(m, index, value.clone()))
                .collect(),
        ),
    }
}

/// β-reduce a redex: substitute `arg` for the bound variable of `body`.
pub fn open_with_term(body: &Expr, arg: &Expr) -> Expr {
    subst_expr(body, 0, Subst::Term(arg))
}

pub fn open_with_morphism(body: &Expr, mu: &Morphism) -> Expr {
    subst_expr(body, 0, Subst::Mor(mu))
}

/// True if variable `index` occurs (as term or morphism var) in `e`.
pub fn occurs(e: &Expr, index: u32) -> bool {
    match e {
        Expr::Type | Expr::Hole(_) => false,
        Expr::KindArrow(a, k) => occurs(a, index) || occurs(k, index),
        Expr::Var(i, _) => *i == index,
        Expr::Sym(qid) => occurs_morphism(&qid.via, index),
        Expr::Pi(b) | Expr::Lam(b) => occurs(&b.domain, index) || occurs(&b.body, index + 1),
        Expr::App(f, a) => occurs(f, index) || occurs(a, index),
        Expr::MorPi(b) | Expr::MorLam(b) => occurs(&b.body, index + 1),
        Expr::MorApp(f, m) => occurs(f, index) || occurs_morphism(m, index),
    }
}

pub fn occurs_morphism(m: &Morphism, index: u32) -> bool {
    match m {
        Morphism::Id | Morphism::Incl | Morphism::Struct(..) | Morphism::View(_) => false,
        Morphism::Var(i, _) => *i == index,
        Morphism::Anon(a) => a.entries.iter().any(|e| match e {
            InstEntry::Symbol { rhs, .. } => occurs(rhs, index),
            InstEntry::Struct { rhs, .. } => occurs_morphism(rhs, index),
        }),
        Morphism::Seq(ms) => ms.iter().any(|m| occurs_morphism(m, index)),
    }
}

/// Construction of expressions with named binders, resolving names to de
/// Bruijn indices. Innermost binding wins; unknown names panic, so this is
/// for trusted construction sites (the bundled Pure signature, the
/// translator, tests), not user input.
pub mod build {
    use super::*;

    #[derive(Default)]
    pub struct Scope {
        names: Vec<String>,
    }

    impl Scope {
        pub fn new() -> Scope {
            Scope::default()
        }

        pub fn var(&self, name: &str) -> Expr {
            let index = self
                .names
                .iter()
                .rev()
                .position(|n| n == name)
                .unwrap_or_else(|| panic!("unbound variable `{name}` in builder"));
            Expr::var(index as u32, name)
        }

        pub fn mor_var(&self, name: &str) -> Morphism {
            let index = self
                .names
                .iter()
                .rev()
                .position(|n| n == name)
                .unwrap_or_else(|| panic!("unbound morphism variable `{name}` in builder"));
            Morphism::var(index as u32, name)
        }

        pub fn pi(&mut self, name: &str, domain: Expr, f: impl FnOnce(&mut Scope) -> Expr) -> Expr {
            self.names.push(name.to_string());
            let body = f(self);
            self.names.pop();
            Expr::pi(name, domain, body)
        }

        pub fn lam(
            &mut self,
            name: &str,
            domain: Expr,
            f: impl FnOnce(&mut Scope) -> Expr,
        ) -> Expr {
            self.names.push(name.to_string());
            let body = f(self);
            self.names.pop();
            Expr::lam(name, domain, body)
        }

        pub fn mor_pi(
            &mut self,
            name: &str,
            domain: SigRef,
            f: impl FnOnce(&mut Scope) -> Expr,
        ) -> Expr {
            self.names.push(name.to_string());
            let body = f(self);
            self.names.pop();
            Expr::mor_pi(name, domain, body)
        }

        pub fn mor_lam(
            &mut self,
            name: &str,
            domain: SigRef,
            f: impl FnOnce(&mut Scope) -> Expr,
        ) -> Expr {
            self.names.push(name.to_string());
            let body = f(self);
            self.names.pop();
            Expr::mor_lam(name, domain, body)
        }

        /// Non-dependent function type `a -> b` at the type level.
        pub fn arrow(&mut self, a: Expr, b: Expr) -> Expr {
            Expr::arrow(a, b)
        }
    }

    /// Build a closed expression with named binders.
    pub fn closed(f: impl FnOnce(&mut Scope) -> Expr) -> Expr {
        f(&mut Scope::new())
    }
}
