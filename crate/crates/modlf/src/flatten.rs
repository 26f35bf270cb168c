//! Elaboration of modular signatures into non-modular ones: structures are
//! replaced by their induced constant declarations, includes are inlined.
//! Symbols included from toplevel signatures keep their plain names;
//! symbols of nested signatures are qualified by the nested path
//! (`Type.tclass`), matching how they are referenced from outside.

use std::collections::HashMap;

use crate::error::{KernelError, Result};
use crate::expr::{Context, Expr, InstEntry, Morphism, QualifiedId, SigRef};
use crate::graph::{ConstDecl, SigDecl, SigDef, SourceGraph, TopDecl};
use crate::kernel::{check_graph, CheckedGraph, Reduced, SigId};

/// A declaration of the flattened signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatDecl {
    pub name: String,
    pub is_family: bool,
    pub classifier: Expr,
    pub def: Option<Expr>,
    /// Whether the declaration came in through an include (as opposed to
    /// being local to the flattened signature).
    pub included: bool,
}

/// Flatten a checked signature into a plain declaration list. All
/// identifiers are rewritten to refer to the flat names.
pub fn flatten_signature(graph: &CheckedGraph, sig: &SigRef) -> Result<Vec<FlatDecl>> {
    let id = graph.resolve_sig(sig)?;
    let renamer = FlatRenamer::new(graph, id);
    let mut out = Vec::new();
    for inc in &graph.sig_info(id).include_closure {
        for entry in graph.flat_entries(*inc) {
            let name = renamer.flat_name(*inc, &entry.name);
            if out.iter().any(|d: &FlatDecl| d.name == name) {
                continue;
            }
            out.push(FlatDecl {
                name,
                is_family: entry.kind == crate::kernel::SymKind::Fam,
                classifier: renamer.rewrite(&entry.classifier)?,
                def: entry.def.as_ref().map(|d| renamer.rewrite(d)).transpose()?,
                included: true,
            });
        }
    }
    for entry in graph.flat_entries(id) {
        out.push(FlatDecl {
            name: entry.name.clone(),
            is_family: entry.kind == crate::kernel::SymKind::Fam,
            classifier: renamer.rewrite(&entry.classifier)?,
            def: entry.def.as_ref().map(|d| renamer.rewrite(d)).transpose()?,
            included: false,
        });
    }
    Ok(out)
}

/// The flattened symbol map of a morphism: for every flat symbol of the
/// domain, its image expression over the codomain.
pub fn flatten_morphism(
    graph: &CheckedGraph,
    ambient: &SigRef,
    ctx: &Context,
    mu: &Morphism,
) -> Result<Vec<(String, Expr)>> {
    let ambient_id = graph.resolve_sig(ambient)?;
    let (dom, _cod) = graph.check_morphism(ambient, ctx, mu).map(|(d, c)| {
        (
            graph.resolve_sig(&d).unwrap(),
            graph.resolve_sig(&c).unwrap(),
        )
    })?;
    let _ = ambient_id;
    let mut out = Vec::new();
    // included symbols map to themselves
    for inc in &graph.sig_info(dom).include_closure {
        for entry in graph.flat_entries(*inc) {
            let id = Expr::sym(entry.canonical_id(graph, *inc));
            let name = qualified_name(graph, *inc, &entry.name);
            if out.iter().any(|(n, _): &(String, Expr)| n == &name) {
                continue;
            }
            out.push((name, id));
        }
    }
    for entry in graph.flat_entries(dom) {
        let id = Expr::sym(entry.canonical_id(graph, dom));
        let image = graph.apply_morphism(ambient, ctx, mu, &id)?;
        out.push((entry.name.clone(), image));
    }
    Ok(out)
}

/// Two checked morphisms are equal iff they agree on every flat symbol of
/// their (shared) domain up to βη.
pub fn morphisms_agree(
    graph: &CheckedGraph,
    ambient: &SigRef,
    ctx: &Context,
    m1: &Morphism,
    m2: &Morphism,
) -> Result<bool> {
    let id = graph.resolve_sig(ambient)?;
    graph.morphisms_equal_public(id, ctx, m1, m2)
}

/// Render a flat declaration list as a standalone source signature named
/// `name`. Self-references inside the declarations point at the original
/// signature's path and are renamed to the new name.
pub fn flat_to_sig_def(name: &str, original: &SigRef, decls: &[FlatDecl]) -> SigDef {
    let mut def = SigDef::new(name);
    for d in decls {
        def.body.push(SigDecl::Const(ConstDecl {
            name: d.name.clone(),
            classifier: rename_sig_refs(&d.classifier, original, name),
            def: d
                .def
                .as_ref()
                .map(|e| rename_sig_refs(e, original, name)),
            span: None,
        }));
    }
    def
}

/// Rename self-references when re-registering a signature's declarations
/// under a new name. Descends into morphism values (structure paths,
/// anonymous-morphism endpoints).
pub fn rename_sig_refs(e: &Expr, from: &SigRef, to: &str) -> Expr {
    let ren = |r: &SigRef| {
        if r == from {
            SigRef::new(to)
        } else {
            r.clone()
        }
    };
    match e {
        Expr::Type | Expr::Var(..) | Expr::Hole(_) => e.clone(),
        Expr::KindArrow(a, k) => Expr::kind_arrow(
            rename_sig_refs(a, from, to),
            rename_sig_refs(k, from, to),
        ),
        Expr::Sym(qid) => Expr::sym(QualifiedId {
            sig: ren(&qid.sig),
            symbol: qid.symbol.clone(),
            via: rename_in_morphism(&qid.via, from, to),
        }),
        Expr::Pi(b) => Expr::pi(
            b.hint.0.clone(),
            rename_sig_refs(&b.domain, from, to),
            rename_sig_refs(&b.body, from, to),
        ),
        Expr::Lam(b) => Expr::lam(
            b.hint.0.clone(),
            rename_sig_refs(&b.domain, from, to),
            rename_sig_refs(&b.body, from, to),
        ),
        Expr::App(f, a) => Expr::app(
            rename_sig_refs(f, from, to),
            rename_sig_refs(a, from, to),
        ),
        Expr::MorPi(b) => Expr::mor_pi(
            b.hint.0.clone(),
            b.domain.clone(),
            rename_sig_refs(&b.body, from, to),
        ),
        Expr::MorLam(b) => Expr::mor_lam(
            b.hint.0.clone(),
            b.domain.clone(),
            rename_sig_refs(&b.body, from, to),
        ),
        Expr::MorApp(f, m) => Expr::mor_app(
            rename_sig_refs(f, from, to),
            rename_in_morphism(m, from, to),
        ),
    }
}

fn rename_in_morphism(m: &Morphism, from: &SigRef, to: &str) -> Morphism {
    let ren = |r: &SigRef| {
        if r == from {
            SigRef::new(to)
        } else {
            r.clone()
        }
    };
    match m {
        Morphism::Id | Morphism::Incl | Morphism::View(_) | Morphism::Var(..) => m.clone(),
        Morphism::Struct(sig, s) => Morphism::Struct(ren(sig), s.clone()),
        Morphism::Anon(a) => Morphism::anon(
            ren(&a.domain),
            ren(&a.codomain),
            a.entries
                .iter()
                .map(|e| match e {
                    InstEntry::Symbol { name, rhs } => InstEntry::Symbol {
                        name: name.clone(),
                        rhs: rename_sig_refs(rhs, from, to),
                    },
                    InstEntry::Struct { name, rhs } => InstEntry::Struct {
                        name: name.clone(),
                        rhs: rename_in_morphism(rhs, from, to),
                    },
                })
                .collect(),
        ),
        Morphism::Seq(ms) => Morphism::Seq(
            ms.iter()
                .map(|m| rename_in_morphism(m, from, to))
                .collect(),
        ),
    }
}

/// Reparse-level check that a flattened signature is well-formed plain LF:
/// the flat declarations are appended to the graph's source under a fresh
/// name and the whole graph is re-checked. The fresh signature contains no
/// includes and no structures; morphism-Π types may still reference graph
/// signatures, which is why the original graph rides along.
pub fn recheck_flat(graph: &CheckedGraph, sig: &SigRef, decls: &[FlatDecl]) -> Result<()> {
    let mut source: SourceGraph = graph.to_source();
    let fresh = "flat$check".to_string();
    let original = graph.canonical_sig_ref_public(sig)?;
    source
        .decls
        .push(TopDecl::Sig(flat_to_sig_def(&fresh, &original, decls)));
    check_graph(&source, graph.options())?;
    Ok(())
}

fn qualified_name(graph: &CheckedGraph, sig: SigId, name: &str) -> String {
    let path = graph.sig_path(sig);
    match path.split_once('.') {
        Some((_, rest)) => format!("{rest}.{name}"),
        None => name.to_string(),
    }
}

/// Rewrites identifiers of a signature's expressions into references to the
/// flat signature's local names.
struct FlatRenamer<'a> {
    graph: &'a CheckedGraph,
    sig: SigId,
    flat_sig: SigRef,
}

impl<'a> FlatRenamer<'a> {
    fn new(graph: &'a CheckedGraph, sig: SigId) -> FlatRenamer<'a> {
        FlatRenamer {
            graph,
            sig,
            flat_sig: SigRef::new(graph.sig_path(sig)),
        }
    }

    fn flat_name(&self, origin: SigId, name: &str) -> String {
        if origin == self.sig {
            name.to_string()
        } else {
            qualified_name(self.graph, origin, name)
        }
    }

    fn rewrite(&self, e: &Expr) -> Result<Expr> {
        self.rewrite_at(e, &Context::new())
    }

    fn rewrite_at(&self, e: &Expr, ctx: &Context) -> Result<Expr> {
        match e {
            Expr::Type | Expr::Var(..) | Expr::Hole(_) => Ok(e.clone()),
            Expr::KindArrow(a, k) => Ok(Expr::kind_arrow(
                self.rewrite_at(a, ctx)?,
                self.rewrite_at(k, ctx)?,
            )),
            Expr::Sym(qid) => {
                let reduced = self.graph.reduce_ident_public(self.sig, ctx, qid)?;
                match reduced {
                    Reduced::Expr(inner) => self.rewrite_at(&inner, ctx),
                    r @ Reduced::Canonical { var: Some(_), .. } => {
                        // identifiers through a morphism variable stay as
                        // they are: the variable's domain is a graph
                        // signature that survives flattening
                        Ok(r.into_expr(self.graph, self.sig))
                    }
                    r @ Reduced::Canonical { .. } => {
                        let location = r.location().unwrap();
                        let flat = r.flat_name().unwrap();
                        let name = self.flat_name(location, &flat);
                        Ok(Expr::sym(QualifiedId {
                            sig: self.flat_sig.clone(),
                            symbol: name,
                            via: Morphism::Id,
                        }))
                    }
                }
            }
            Expr::Pi(b) => {
                let mut inner = ctx.clone();
                inner.push_term(b.hint.0.clone(), b.domain.clone());
                Ok(Expr::Pi(Box::new(crate::expr::Binder {
                    hint: b.hint.clone(),
                    domain: self.rewrite_at(&b.domain, ctx)?,
                    body: self.rewrite_at(&b.body, &inner)?,
                })))
            }
            Expr::Lam(b) => {
                let mut inner = ctx.clone();
                inner.push_term(b.hint.0.clone(), b.domain.clone());
                Ok(Expr::Lam(Box::new(crate::expr::Binder {
                    hint: b.hint.clone(),
                    domain: self.rewrite_at(&b.domain, ctx)?,
                    body: self.rewrite_at(&b.body, &inner)?,
                })))
            }
            Expr::App(f, a) => Ok(Expr::app(
                self.rewrite_at(f, ctx)?,
                self.rewrite_at(a, ctx)?,
            )),
            Expr::MorPi(b) => {
                let mut inner = ctx.clone();
                inner.push_mor(b.hint.0.clone(), b.domain.clone());
                Ok(Expr::MorPi(Box::new(crate::expr::MorBinder {
                    hint: b.hint.clone(),
                    domain: b.domain.clone(),
                    body: self.rewrite_at(&b.body, &inner)?,
                })))
            }
            Expr::MorLam(b) => {
                let mut inner = ctx.clone();
                inner.push_mor(b.hint.0.clone(), b.domain.clone());
                Ok(Expr::MorLam(Box::new(crate::expr::MorBinder {
                    hint: b.hint.clone(),
                    domain: b.domain.clone(),
                    body: self.rewrite_at(&b.body, &inner)?,
                })))
            }
            Expr::MorApp(f, m) => Ok(Expr::mor_app(self.rewrite_at(f, ctx)?, (**m).clone())),
        }
    }
}

impl CheckedGraph {
    /// Canonical (full-path) form of a signature reference.
    pub fn canonical_sig_ref_public(&self, r: &SigRef) -> Result<SigRef> {
        self.canonical_sig_ref(r)
    }

    /// Resolve all view/anonymous-morphism identifiers in an expression.
    pub fn resolve_all_idents_public(
        &self,
        sig: SigId,
        ctx: &Context,
        e: &Expr,
    ) -> Result<Expr> {
        self.resolve_all_idents(sig, ctx, e)
    }

    /// Public handle to identifier reduction (used by flattening).
    pub fn reduce_ident_public(
        &self,
        sig: SigId,
        ctx: &Context,
        qid: &QualifiedId,
    ) -> Result<Reduced> {
        self.reduce_ident(sig, ctx, qid)
    }

    pub fn morphisms_equal_public(
        &self,
        sig: SigId,
        ctx: &Context,
        m1: &Morphism,
        m2: &Morphism,
    ) -> Result<bool> {
        self.morphisms_equal(sig, ctx, m1, m2)
    }

    /// Raw homomorphic application (no checking), used by the elaborator.
    pub(crate) fn apply_morphism_raw(e: &Expr, mu: &Morphism) -> Expr {
        crate::kernel::apply_morphism_fn(e, mu, 0)
    }

    /// Resolve a signature id by reference (public helper).
    pub fn sig_id(&self, r: &SigRef) -> Result<SigId> {
        self.resolve_sig(r)
    }
}

/// Name collisions inside a flat declaration list (should be impossible on
/// checked input; used by tests).
pub fn flat_name_collisions(decls: &[FlatDecl]) -> Vec<String> {
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    for d in decls {
        if seen.insert(d.name.clone(), ()).is_some() {
            out.push(d.name.clone());
        }
    }
    out
}

/// Convenience: the undefined non-included names of a flat signature (the
/// "parameters" of the signature).
pub fn undefined_locals(decls: &[FlatDecl]) -> Vec<String> {
    decls
        .iter()
        .filter(|d| !d.included && d.def.is_none())
        .map(|d| d.name.clone())
        .collect()
}

/// KernelError alias re-export for downstream matching.
pub type FlattenError = KernelError;
