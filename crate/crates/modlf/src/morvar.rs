//! Morphism variables: the context-binding restriction and the elaboration
//! of morphism abstraction into plain LF.
//!
//! A binding `X:S` is admissible only when every type family visible in `S`
//! comes in through an include — neither `S` nor any signature it
//! instantiates may declare type families of its own. Elaboration replaces
//! `[X:S] t` by a λ-telescope over the undefined local constants of `S`
//! (definitions expanded), `{X:S} A` by the corresponding Π-telescope, and
//! `t μ` by applications of `t` to the images `μ(S?c)`.

use crate::error::{KernelError, Result};
use crate::expr::{
    shift_expr, subst_expr, Context, CtxEntry, Expr, Hint, InstEntry, Morphism, SigRef, Subst,
};
use crate::kernel::{CheckedGraph, SigId, SymKind};

/// Check the §3 restriction for a context binding `X:S` in ambient
/// signature `ambient`.
pub(crate) fn check_mor_binding_at(
    graph: &CheckedGraph,
    ambient: SigId,
    domain: SigId,
) -> Result<()> {
    // include condition: everything included into S is included into T
    for inc in &graph.sig_info(domain).include_closure {
        if !graph.included_in(*inc, ambient) {
            return Err(KernelError::IncludeConditionViolated {
                origin: graph.sig_path(domain).to_string(),
                target: graph.sig_path(ambient).to_string(),
                missing: graph.sig_path(*inc).to_string(),
            });
        }
    }
    for entry in graph.flat_entries(domain) {
        if entry.kind == SymKind::Fam {
            return Err(KernelError::TypeFamilyRestrictionViolated {
                sig: graph.sig_path(domain).to_string(),
                family: entry.name.clone(),
            });
        }
        if entry.classifier.uses_morphism_constructs() {
            return Err(KernelError::MorphismDomainUnsupported {
                sig: graph.sig_path(domain).to_string(),
                decl: entry.name.clone(),
            });
        }
    }
    Ok(())
}

/// Public form of the binding check: validates `X:S` over `sig` and returns
/// the extended context.
pub fn check_mor_binding(
    graph: &CheckedGraph,
    sig: &SigRef,
    ctx: &Context,
    hint: impl Into<String>,
    domain: &SigRef,
) -> Result<Context> {
    let ambient = graph.resolve_sig(sig)?;
    let dom = graph.resolve_sig(domain)?;
    check_mor_binding_at(graph, ambient, dom)?;
    let mut out = ctx.clone();
    out.push_mor(hint, SigRef::new(graph.sig_path(dom)));
    Ok(out)
}

/// The telescope of a signature for elaboration: its undefined flat-local
/// constants, in declaration order.
pub fn telescope(graph: &CheckedGraph, domain: SigId) -> Vec<(String, Expr)> {
    graph
        .flat_entries(domain)
        .iter()
        .filter(|e| e.def.is_none())
        .map(|e| (e.name.clone(), e.classifier.clone()))
        .collect()
}

/// Eliminate all morphism-variable constructs from a well-typed expression,
/// yielding a plain modular-LF expression.
pub fn elaborate_mor_abstraction(
    graph: &CheckedGraph,
    sig: &SigRef,
    ctx: &Context,
    expr: &Expr,
) -> Result<Expr> {
    let ambient = graph.resolve_sig(sig)?;
    let out = elab(graph, ambient, ctx, expr)?;
    // the substitution left behind reducible identifiers (the replacement
    // morphisms); resolve them so `S?c⟨X⟩` occurrences become variables
    graph.resolve_all_idents_public(ambient, ctx, &out)
}

/// Elaborate a whole signature: every classifier and definition is freed of
/// morphism-variable constructs, and self-references are renamed so the
/// result can be registered under `new_name` next to the original. The
/// output, together with the rest of the graph, checks with the extension
/// disabled.
pub fn elaborate_signature(
    graph: &CheckedGraph,
    sig: &SigRef,
    new_name: &str,
) -> Result<crate::graph::SigDef> {
    use crate::flatten::rename_sig_refs;
    use crate::graph::{ConstDecl, SigDecl, SigDef};
    use crate::kernel::CheckedDecl;

    let id = graph.resolve_sig(sig)?;
    let original = SigRef::new(graph.sig_path(id));
    let ctx = Context::new();
    let elab = |e: &Expr| -> Result<Expr> {
        let out = elab(graph, id, &ctx, e)?;
        graph.resolve_all_idents_public(id, &ctx, &out)
    };
    let mut def = SigDef::new(new_name);
    for d in &graph.sig_info(id).decls {
        match d {
            CheckedDecl::Include(s) => {
                def = def.include(graph.sig_path(*s));
            }
            CheckedDecl::Const {
                name,
                classifier,
                def: body,
                ..
            } => {
                let classifier = elab(classifier)?;
                let body = body.as_ref().map(|b| elab(b)).transpose()?;
                def.body.push(SigDecl::Const(ConstDecl {
                    name: name.clone(),
                    classifier: rename_sig_refs(&classifier, &original, new_name),
                    def: body.map(|b| rename_sig_refs(&b, &original, new_name)),
                    span: None,
                }));
            }
            CheckedDecl::Struct {
                name,
                domain,
                entries,
            } => {
                let entries = entries
                    .iter()
                    .map(|e| match e {
                        InstEntry::Symbol { name, rhs } => {
                            let rhs = elab(rhs)?;
                            Ok(InstEntry::Symbol {
                                name: name.clone(),
                                rhs: rename_sig_refs(&rhs, &original, new_name),
                            })
                        }
                        InstEntry::Struct { .. } => Ok(e.clone()),
                    })
                    .collect::<Result<Vec<_>>>()?;
                def.body.push(SigDecl::Struct(crate::graph::StructDecl {
                    name: name.clone(),
                    domain: SigRef::new(graph.sig_path(*domain)),
                    entries,
                    span: None,
                }));
            }
            CheckedDecl::Nested(_) | CheckedDecl::Fixity(_) => {}
        }
    }
    Ok(def)
}

fn elab(graph: &CheckedGraph, ambient: SigId, ctx: &Context, e: &Expr) -> Result<Expr> {
    match e {
        Expr::Type | Expr::Var(..) | Expr::Hole(_) => Ok(e.clone()),
        Expr::KindArrow(a, k) => Ok(Expr::kind_arrow(
            elab(graph, ambient, ctx, a)?,
            elab(graph, ambient, ctx, k)?,
        )),
        Expr::Sym(_) => Ok(e.clone()),
        Expr::Pi(b) => {
            let mut inner = ctx.clone();
            inner.entries.push(CtxEntry::Term {
                hint: b.hint.clone(),
                ty: b.domain.clone(),
            });
            Ok(Expr::Pi(Box::new(crate::expr::Binder {
                hint: b.hint.clone(),
                domain: elab(graph, ambient, ctx, &b.domain)?,
                body: elab(graph, ambient, &inner, &b.body)?,
            })))
        }
        Expr::Lam(b) => {
            let mut inner = ctx.clone();
            inner.entries.push(CtxEntry::Term {
                hint: b.hint.clone(),
                ty: b.domain.clone(),
            });
            Ok(Expr::Lam(Box::new(crate::expr::Binder {
                hint: b.hint.clone(),
                domain: elab(graph, ambient, ctx, &b.domain)?,
                body: elab(graph, ambient, &inner, &b.body)?,
            })))
        }
        Expr::App(f, a) => Ok(Expr::app(
            elab(graph, ambient, ctx, f)?,
            elab(graph, ambient, ctx, a)?,
        )),
        Expr::MorPi(b) => elab_binder(graph, ambient, ctx, b, true),
        Expr::MorLam(b) => elab_binder(graph, ambient, ctx, b, false),
        Expr::MorApp(f, mu) => {
            let f = elab(graph, ambient, ctx, f)?;
            let (dom, _) = graph.morphism_endpoints(ambient, ctx, mu, None, None, false)?;
            let mut out = f;
            for entry in graph.flat_entries(dom) {
                if entry.def.is_some() {
                    continue;
                }
                let id = Expr::sym(entry.canonical_id(graph, dom));
                let image = graph.apply_morphism(
                    &SigRef::new(graph.sig_path(ambient)),
                    ctx,
                    mu,
                    &id,
                )?;
                let image = elab(graph, ambient, ctx, &image)?;
                out = Expr::app(out, image);
            }
            Ok(out)
        }
    }
}

/// Elaborate `{X:S} A` / `[X:S] t` into a Π- or λ-telescope over the
/// undefined locals of `S`.
fn elab_binder(
    graph: &CheckedGraph,
    ambient: SigId,
    ctx: &Context,
    b: &crate::expr::MorBinder,
    is_pi: bool,
) -> Result<Expr> {
    let dom = graph.resolve_sig(&b.domain)?;
    let locals: Vec<(String, Expr)> = telescope(graph, dom);
    let n = locals.len() as u32;

    // elaborate the body first (it may contain nested abstractions), under
    // the original morphism binding
    let mut inner = ctx.clone();
    inner.entries.push(CtxEntry::Mor {
        hint: b.hint.clone(),
        sig: b.domain.clone(),
    });
    let body = elab(graph, ambient, &inner, &b.body)?;

    // replacement for X in the body: each undefined local c_i maps to the
    // telescope variable x_i; defined symbols fall back to their (translated)
    // definitions during reduction
    let replacement = |upto: u32| -> Morphism {
        let entries = locals
            .iter()
            .take(upto as usize)
            .enumerate()
            .map(|(j, (name, _))| {
                InstEntry::symbol(name.clone(), Expr::Var(upto - 1 - j as u32, Hint::new(name)))
            })
            .collect();
        Morphism::anon(
            SigRef::new(graph.sig_path(dom)),
            SigRef::new(graph.sig_path(ambient)),
            entries,
        )
    };

    // body: shift variables above X up by n, then substitute X
    let shifted = shift_expr(&body, 1, n);
    let mut out = subst_expr(&shifted, 0, Subst::Mor(&replacement(n)));

    // wrap binders innermost-first
    for (i, (name, classifier)) in locals.iter().enumerate().rev() {
        let i = i as u32;
        // the classifier of c_i lives over S and may mention c_j (j < i);
        // translate it under i enclosing telescope binders
        let translated = crate::kernel::CheckedGraph::apply_morphism_raw(
            classifier,
            &replacement(i),
        );
        let binder = crate::expr::Binder {
            hint: Hint::new(name),
            domain: translated,
            body: out,
        };
        out = if is_pi {
            Expr::Pi(Box::new(binder))
        } else {
            Expr::Lam(Box::new(binder))
        };
    }
    Ok(out)
}
