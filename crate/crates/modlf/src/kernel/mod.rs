//! The checked, immutable form of a signature graph, plus the incremental
//! builder used both by [`check_graph`] and by the translator.
//!
//! A [`CheckedGraph`] is append-only while under construction and immutable
//! afterwards; all queries on it are read-only, so finished graphs can be
//! shared freely across threads.

mod morphism;
mod sigcheck;
mod typing;

pub use morphism::Reduced;

/// Raw homomorphic morphism application (no validation), exposed for the
/// flattening and elaboration passes.
pub(crate) fn apply_morphism_fn(
    e: &crate::expr::Expr,
    mu: &crate::expr::Morphism,
    depth: u32,
) -> crate::expr::Expr {
    morphism::apply_morphism(e, mu, depth)
}

use std::collections::HashMap;

use crate::error::{KernelError, Result};
use crate::expr::{Context, Expr, InstEntry, Morphism, Name, QualifiedId, SigRef};
use crate::graph::{FixityDecl, SigDef, SourceGraph, Span, TopDecl, ViewDef};

/// Kernel options. `morphism_vars` gates the morphism-variable extension:
/// with it off, `MorPi`/`MorLam`/`MorApp` and morphism context bindings are
/// rejected outright.
#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    pub morphism_vars: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            morphism_vars: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SigId(pub(crate) u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ViewId(pub(crate) u32);

/// Whether a symbol is a typed constant or a kinded type family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymKind {
    Const,
    Fam,
}

/// The result of checking an expression: its classifier (a type for terms,
/// a kind for families) and its βη-normal form. Both components are in
/// normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypingResult {
    pub classifier: Expr,
    pub normal_form: Expr,
}

/// One local (or induced) symbol of a signature. `name` is the dotted local
/// name (`⊓`, `o.≤`, …); `hops` is the chain of structure steps leading from
/// the declaring signature into this one, in application order.
#[derive(Clone, Debug)]
pub struct FlatEntry {
    pub name: String,
    pub home_sig: SigId,
    pub home_symbol: Name,
    pub hops: Vec<(SigId, Name)>,
    pub kind: SymKind,
    pub classifier: Expr,
    pub def: Option<Expr>,
}

impl FlatEntry {
    /// The canonical identifier for this symbol, valid in its own signature
    /// and in any signature that includes it.
    pub fn canonical_id(&self, graph: &CheckedGraph, ambient: SigId) -> QualifiedId {
        let mut atoms: Vec<Morphism> = self
            .hops
            .iter()
            .map(|(sig, s)| Morphism::Struct(SigRef::new(graph.sig_path(*sig)), s.clone()))
            .collect();
        let location = self.hops.last().map(|(s, _)| *s).unwrap_or(self.home_sig);
        if atoms.is_empty() {
            let via = if location == ambient {
                Morphism::Id
            } else {
                Morphism::Incl
            };
            return QualifiedId {
                sig: SigRef::new(graph.sig_path(self.home_sig)),
                symbol: self.home_symbol.clone(),
                via,
            };
        }
        if location != ambient {
            atoms.push(Morphism::Incl);
        }
        let via = if atoms.len() == 1 {
            atoms.pop().unwrap()
        } else {
            Morphism::Seq(atoms)
        };
        QualifiedId {
            sig: SigRef::new(graph.sig_path(self.home_sig)),
            symbol: self.home_symbol.clone(),
            via,
        }
    }
}

/// Local symbol table of a signature (declared constants/families plus the
/// declarations induced by structures), in declaration order.
#[derive(Clone, Debug, Default)]
pub struct FlatTable {
    pub entries: Vec<FlatEntry>,
    pub by_name: HashMap<String, usize>,
}

impl FlatTable {
    pub fn get(&self, name: &str) -> Option<&FlatEntry> {
        self.by_name.get(name).map(|&i| &self.entries[i])
    }
    pub fn push(&mut self, entry: FlatEntry) {
        self.by_name.insert(entry.name.clone(), self.entries.len());
        self.entries.push(entry);
    }
}

#[derive(Clone, Debug)]
pub struct StructInfo {
    pub name: Name,
    pub domain: SigId,
    /// Checked instantiations keyed by the flat name of the domain symbol,
    /// with wholesale `struct r := μ` entries expanded symbol-wise.
    pub assignments: HashMap<String, Expr>,
    pub span: Option<Span>,
}

/// A checked declaration, kept in source order for printing and re-export.
#[derive(Clone, Debug)]
pub enum CheckedDecl {
    Nested(SigId),
    Include(SigId),
    Const {
        name: Name,
        kind: SymKind,
        classifier: Expr,
        def: Option<Expr>,
    },
    Struct {
        name: Name,
        domain: SigId,
        entries: Vec<InstEntry>,
    },
    Fixity(FixityDecl),
}

#[derive(Clone, Debug)]
pub struct SigInfo {
    pub path: String,
    pub name: Name,
    pub parent: Option<SigId>,
    pub decls: Vec<CheckedDecl>,
    pub includes_direct: Vec<SigId>,
    /// All signatures whose symbols are identity-visible here: transitive
    /// includes, nested signatures of those, and (for nested signatures)
    /// the enclosing signature.
    pub include_closure: Vec<SigId>,
    pub flat: FlatTable,
    pub structs: HashMap<Name, StructInfo>,
    pub nested: HashMap<Name, SigId>,
    /// Names visible unqualified or via includes, mapped to the declaring
    /// (signature, dotted name) pair; used to reject flat-name collisions.
    pub visible: HashMap<String, (SigId, String)>,
    pub open: bool,
}

#[derive(Clone, Debug)]
pub struct ViewInfo {
    pub name: Name,
    pub domain: SigId,
    pub codomain: SigId,
    /// Checked instantiations keyed by flat names of the domain.
    pub assignments: HashMap<String, Expr>,
    /// Source-shaped entries for printing.
    pub entries: Vec<InstEntry>,
    pub span: Option<Span>,
}

#[derive(Clone, Debug)]
pub enum TopEntry {
    Sig(SigId),
    View(ViewId),
}

#[derive(Clone, Debug)]
enum Alias {
    Unique(SigId),
    Ambiguous,
}

/// A checked signature graph.
#[derive(Clone, Debug)]
pub struct CheckedGraph {
    pub(crate) options: CheckOptions,
    pub(crate) sigs: Vec<SigInfo>,
    pub(crate) by_path: HashMap<String, SigId>,
    alias: HashMap<String, Alias>,
    pub(crate) views: Vec<ViewInfo>,
    pub(crate) view_by_name: HashMap<Name, ViewId>,
    pub(crate) toplevel: Vec<TopEntry>,
    pub(crate) fixities: HashMap<Name, FixityDecl>,
}

impl CheckedGraph {
    fn empty(options: CheckOptions) -> CheckedGraph {
        CheckedGraph {
            options,
            sigs: Vec::new(),
            by_path: HashMap::new(),
            alias: HashMap::new(),
            views: Vec::new(),
            view_by_name: HashMap::new(),
            toplevel: Vec::new(),
            fixities: HashMap::new(),
        }
    }

    pub fn options(&self) -> CheckOptions {
        self.options
    }

    pub fn sig_path(&self, id: SigId) -> &str {
        &self.sigs[id.0 as usize].path
    }

    pub fn sig_info(&self, id: SigId) -> &SigInfo {
        &self.sigs[id.0 as usize]
    }

    pub(crate) fn sig_mut(&mut self, id: SigId) -> &mut SigInfo {
        &mut self.sigs[id.0 as usize]
    }

    pub fn view_info(&self, id: ViewId) -> &ViewInfo {
        &self.views[id.0 as usize]
    }

    pub fn toplevel(&self) -> &[TopEntry] {
        &self.toplevel
    }

    pub fn fixities(&self) -> &HashMap<Name, FixityDecl> {
        &self.fixities
    }

    pub fn has_sig(&self, name: &str) -> bool {
        self.resolve_sig(&SigRef::new(name)).is_ok()
    }

    /// Resolve a signature reference, accepting full paths and unambiguous
    /// bare names of nested signatures.
    pub fn resolve_sig(&self, r: &SigRef) -> Result<SigId> {
        if let Some(&id) = self.by_path.get(&r.0) {
            return Ok(id);
        }
        match self.alias.get(&r.0) {
            Some(Alias::Unique(id)) => Ok(*id),
            Some(Alias::Ambiguous) => Err(KernelError::AmbiguousSignature(r.0.clone())),
            None => Err(KernelError::UnknownSignature(r.0.clone())),
        }
    }

    pub fn resolve_view(&self, name: &str) -> Result<ViewId> {
        self.view_by_name
            .get(name)
            .copied()
            .ok_or_else(|| KernelError::UnknownView(name.to_string()))
    }

    pub fn same_sig(&self, a: &SigRef, b: &SigRef) -> Result<bool> {
        Ok(self.resolve_sig(a)? == self.resolve_sig(b)?)
    }

    /// Whether the symbols of `inner` are identity-visible in `outer`.
    pub(crate) fn included_in(&self, inner: SigId, outer: SigId) -> bool {
        inner == outer || self.sig_info(outer).include_closure.contains(&inner)
    }

    /// Look up a flat-local symbol of a signature.
    pub fn flat_entry(&self, sig: SigId, name: &str) -> Option<&FlatEntry> {
        self.sig_info(sig).flat.get(name)
    }

    /// The flat-local entries of a signature, in declaration order.
    pub fn flat_entries(&self, sig: SigId) -> &[FlatEntry] {
        &self.sig_info(sig).flat.entries
    }

    pub(crate) fn struct_info(&self, sig: SigId, name: &str) -> Result<&StructInfo> {
        self.sig_info(sig).structs.get(name).ok_or_else(|| {
            KernelError::UnknownStructure {
                sig: self.sig_path(sig).to_string(),
                structure: name.to_string(),
            }
        })
    }

    fn register_alias(&mut self, bare: &str, id: SigId) {
        match self.alias.get(bare) {
            None => {
                self.alias.insert(bare.to_string(), Alias::Unique(id));
            }
            Some(Alias::Unique(existing)) if *existing == id => {}
            Some(_) => {
                self.alias.insert(bare.to_string(), Alias::Ambiguous);
            }
        }
    }

    // -- public operations (spec surface) ----------------------------------

    /// Type-check an expression over a signature and context, returning its
    /// classifier and βη-normal form (both normalized).
    pub fn check_expr(&self, sig: &SigRef, ctx: &Context, expr: &Expr) -> Result<TypingResult> {
        let id = self.resolve_sig(sig)?;
        self.check_expr_at(id, ctx, expr)
    }

    /// βη-convertibility of two well-typed expressions of the same classifier.
    pub fn equal_exprs(&self, sig: &SigRef, ctx: &Context, a: &Expr, b: &Expr) -> Result<bool> {
        let id = self.resolve_sig(sig)?;
        self.equal(id, ctx, a, b)
    }

    /// The βη-normal form, with definitions unfolded eagerly.
    pub fn normalize(&self, sig: &SigRef, ctx: &Context, expr: &Expr) -> Result<Expr> {
        let id = self.resolve_sig(sig)?;
        self.normalize_at(id, ctx, expr)
    }

    /// Check a morphism written in (ambient) signature `sig`, returning its
    /// domain and codomain.
    pub fn check_morphism(
        &self,
        sig: &SigRef,
        ctx: &Context,
        mu: &Morphism,
    ) -> Result<(SigRef, SigRef)> {
        let ambient = self.resolve_sig(sig)?;
        let (d, c) = self.check_morphism_at(ambient, ctx, mu, None, None)?;
        Ok((
            SigRef::new(self.sig_path(d)),
            SigRef::new(self.sig_path(c)),
        ))
    }

    /// Homomorphic application of a checked morphism to a well-typed
    /// expression over its domain.
    pub fn apply_morphism(
        &self,
        _sig: &SigRef,
        _ctx: &Context,
        mu: &Morphism,
        expr: &Expr,
    ) -> Result<Expr> {
        Ok(morphism::apply_morphism(expr, mu, 0))
    }

    /// Resolve an identifier `S?c⟨μ⟩` used in signature `sig`: its classifier
    /// and (if defined or instantiated along the morphism) its definition.
    pub fn resolve_identifier(
        &self,
        sig: &SigRef,
        id: &QualifiedId,
    ) -> Result<(Expr, Option<Expr>)> {
        let ambient = self.resolve_sig(sig)?;
        self.resolve_identifier_at(ambient, &Context::new(), id)
    }

    /// The declarations induced by a structure, plus the induced morphism
    /// `T?s`.
    pub fn induced_declarations(
        &self,
        sig: &SigRef,
        struct_name: &str,
    ) -> Result<(Vec<FlatEntry>, Morphism)> {
        let id = self.resolve_sig(sig)?;
        self.struct_info(id, struct_name)?;
        let prefix = format!("{struct_name}.");
        let decls = self
            .flat_entries(id)
            .iter()
            .filter(|e| e.name.starts_with(&prefix))
            .cloned()
            .collect();
        Ok((
            decls,
            Morphism::Struct(SigRef::new(self.sig_path(id)), struct_name.to_string()),
        ))
    }

    /// Functor application: given a view `F : T -> F0` where `F0` declares a
    /// structure `s : S`, and a morphism `μ : S -> D`, produce the morphism
    /// `F {struct s := μ : F0 -> D} : T -> D`.
    pub fn functor_apply(
        &self,
        view: &str,
        struct_name: &str,
        ambient: &SigRef,
        ctx: &Context,
        mu: &Morphism,
    ) -> Result<Morphism> {
        let v = self.view_info(self.resolve_view(view)?);
        let f0 = v.codomain;
        let sinfo = self.struct_info(f0, struct_name)?;
        let ambient_id = self.resolve_sig(ambient)?;
        let (dom, cod) = self.check_morphism_at(ambient_id, ctx, mu, None, None)?;
        if dom != sinfo.domain {
            return Err(KernelError::MorphismDomainMismatch {
                expected: self.sig_path(sinfo.domain).to_string(),
                actual: self.sig_path(dom).to_string(),
            });
        }
        let anon = Morphism::anon(
            SigRef::new(self.sig_path(f0)),
            SigRef::new(self.sig_path(cod)),
            vec![InstEntry::structure(struct_name, mu.clone())],
        );
        let composed = Morphism::view(&v.name).then(anon);
        self.check_morphism_at(ambient_id, ctx, &composed, None, None)?;
        Ok(composed)
    }

    /// Check a context over a signature: each entry well-formed relative to
    /// its prefix.
    pub fn check_context(&self, sig: &SigRef, ctx: &Context) -> Result<()> {
        let id = self.resolve_sig(sig)?;
        self.check_context_at(id, ctx)
    }

    /// Reconstruct the source form of the graph (used by the printer and by
    /// flatten's recheck).
    pub fn to_source(&self) -> SourceGraph {
        let mut g = SourceGraph::new();
        for entry in &self.toplevel {
            match entry {
                TopEntry::Sig(id) => g.push_sig(self.sig_to_source(*id)),
                TopEntry::View(id) => {
                    let v = self.view_info(*id);
                    g.push_view(ViewDef {
                        name: v.name.clone(),
                        domain: SigRef::new(self.sig_path(v.domain)),
                        codomain: SigRef::new(self.sig_path(v.codomain)),
                        entries: v.entries.clone(),
                        span: v.span,
                    });
                }
            }
        }
        g
    }

    pub fn sig_to_source(&self, id: SigId) -> SigDef {
        let info = self.sig_info(id);
        let mut def = SigDef::new(&info.name);
        for d in &info.decls {
            match d {
                CheckedDecl::Nested(n) => def.body.push(crate::graph::SigDecl::Nested(
                    self.sig_to_source(*n),
                )),
                CheckedDecl::Include(s) => def.body.push(crate::graph::SigDecl::Include {
                    sig: SigRef::new(self.sig_path(*s)),
                    span: None,
                }),
                CheckedDecl::Const {
                    name,
                    classifier,
                    def: d,
                    ..
                } => def.body.push(crate::graph::SigDecl::Const(
                    crate::graph::ConstDecl {
                        name: name.clone(),
                        classifier: classifier.clone(),
                        def: d.clone(),
                        span: None,
                    },
                )),
                CheckedDecl::Struct {
                    name,
                    domain,
                    entries,
                } => def.body.push(crate::graph::SigDecl::Struct(
                    crate::graph::StructDecl {
                        name: name.clone(),
                        domain: SigRef::new(self.sig_path(*domain)),
                        entries: entries.clone(),
                        span: None,
                    },
                )),
                CheckedDecl::Fixity(f) => {
                    def.body.push(crate::graph::SigDecl::Fixity(f.clone()))
                }
            }
        }
        def
    }
}

/// Check a source graph in declaration order, producing the immutable
/// checked graph.
pub fn check_graph(source: &SourceGraph, options: CheckOptions) -> Result<CheckedGraph> {
    let mut b = GraphBuilder::new(options);
    b.add_source(source)?;
    b.finish()
}

/// Incremental graph construction with immediate checking. The translator
/// drives this directly so it can ask semantic questions about the prefix
/// it has already emitted.
pub struct GraphBuilder {
    pub(crate) graph: CheckedGraph,
    stack: Vec<SigId>,
}

impl GraphBuilder {
    pub fn new(options: CheckOptions) -> GraphBuilder {
        GraphBuilder {
            graph: CheckedGraph::empty(options),
            stack: Vec::new(),
        }
    }

    pub fn graph(&self) -> &CheckedGraph {
        &self.graph
    }

    pub fn current_sig(&self) -> Option<SigId> {
        self.stack.last().copied()
    }

    pub fn add_source(&mut self, source: &SourceGraph) -> Result<()> {
        for decl in &source.decls {
            match decl {
                TopDecl::Sig(def) => self.add_sig_def(def)?,
                TopDecl::View(def) => self.add_view(def.clone())?,
            }
        }
        Ok(())
    }

    pub fn add_sig_def(&mut self, def: &SigDef) -> Result<()> {
        self.begin_sig(&def.name, def.span)?;
        for d in &def.body {
            match d {
                crate::graph::SigDecl::Nested(n) => self.add_sig_def(n)?,
                crate::graph::SigDecl::Include { sig, span } => self.add_include(sig, *span)?,
                crate::graph::SigDecl::Const(c) => {
                    self.add_const(&c.name, c.classifier.clone(), c.def.clone(), c.span)?
                }
                crate::graph::SigDecl::Struct(s) => {
                    self.add_struct(&s.name, &s.domain, s.entries.clone(), s.span)?
                }
                crate::graph::SigDecl::Fixity(f) => self.add_fixity(f.clone()),
            }
        }
        self.end_sig()?;
        Ok(())
    }

    pub fn add_fixity(&mut self, f: FixityDecl) {
        self.graph.fixities.insert(f.symbol.clone(), f.clone());
        if let Some(&sig) = self.stack.last() {
            self.graph.sig_mut(sig).decls.push(CheckedDecl::Fixity(f));
        }
    }

    pub fn finish(self) -> Result<CheckedGraph> {
        if let Some(&open) = self.stack.last() {
            return Err(KernelError::Context {
                context: format!(
                    "signature `{}` was left open",
                    self.graph.sig_path(open)
                ),
                source: Box::new(KernelError::UnknownSignature(String::new())),
            });
        }
        Ok(self.graph)
    }

    pub(crate) fn stack_mut(&mut self) -> &mut Vec<SigId> {
        &mut self.stack
    }
}
