//! Type checking, definitional equality, and normalization.
//!
//! Equality is weak-head normalization with untyped η-expansion on binder
//! mismatch and lazy definition unfolding (definitions are expanded only
//! when the heads of two neutral spines disagree, or when their spines
//! differ). `normalize` produces β-normal η-long forms with definitions
//! expanded eagerly.

use crate::error::{KernelError, Result};
use crate::expr::{
    open_with_morphism, open_with_term, shift_expr, Arg, Context, CtxEntry, Expr, Hint, Morphism,
    SigRef,
};
use crate::render;

use super::morphism::{apply_morphism, normalize_morphism, Reduced};
use super::{CheckedGraph, SigId, SymKind, TypingResult};

/// What an expression is: a kind, a type family (with its kind), or a term
/// (with its type).
#[derive(Clone, Debug)]
pub(crate) enum Level {
    Kind,
    Fam(Expr),
    Term(Expr),
}

fn extend_term(ctx: &Context, hint: &Hint, ty: &Expr) -> Context {
    let mut c = ctx.clone();
    c.entries.push(CtxEntry::Term {
        hint: hint.clone(),
        ty: ty.clone(),
    });
    c
}

fn extend_mor(ctx: &Context, hint: &Hint, sig: &SigRef) -> Context {
    let mut c = ctx.clone();
    c.entries.push(CtxEntry::Mor {
        hint: hint.clone(),
        sig: sig.clone(),
    });
    c
}

impl CheckedGraph {
    pub(crate) fn check_expr_at(
        &self,
        sig: SigId,
        ctx: &Context,
        expr: &Expr,
    ) -> Result<TypingResult> {
        match self.classify(sig, ctx, expr)? {
            Level::Kind => Err(KernelError::IllegalKindPosition(render::expr(expr))),
            Level::Fam(k) => Ok(TypingResult {
                classifier: self.nf_kind(sig, ctx, &k)?,
                normal_form: self.nf_fam(sig, ctx, expr)?,
            }),
            Level::Term(ty) => Ok(TypingResult {
                classifier: self.nf_fam(sig, ctx, &ty)?,
                normal_form: self.nf_term(sig, ctx, expr, &ty)?,
            }),
        }
    }

    pub(crate) fn check_context_at(&self, sig: SigId, ctx: &Context) -> Result<()> {
        let mut seen: Vec<&str> = Vec::new();
        let mut prefix = Context::new();
        for entry in &ctx.entries {
            match entry {
                CtxEntry::Term { hint, ty } => {
                    if !hint.0.is_empty() && seen.contains(&hint.0.as_str()) {
                        return Err(KernelError::DuplicateName(hint.0.clone()).ctx("context"));
                    }
                    seen.push(hint.0.as_str());
                    match self.classify(sig, &prefix, ty)? {
                        Level::Fam(k) if self.equal(sig, &prefix, &k, &Expr::Type)? => {}
                        _ => {
                            return Err(KernelError::KindMismatch {
                                expected: "type".into(),
                                actual: render::expr(ty),
                            })
                        }
                    }
                }
                CtxEntry::Mor { hint, sig: dom } => {
                    if !hint.0.is_empty() && seen.contains(&hint.0.as_str()) {
                        return Err(KernelError::DuplicateName(hint.0.clone()).ctx("context"));
                    }
                    seen.push(hint.0.as_str());
                    let dom_id = self.resolve_sig(dom)?;
                    crate::morvar::check_mor_binding_at(self, sig, dom_id)?;
                }
            }
            prefix.entries.push(entry.clone());
        }
        Ok(())
    }

    /// Synthesize the level (and classifier) of an expression.
    pub(crate) fn classify(&self, sig: SigId, ctx: &Context, e: &Expr) -> Result<Level> {
        match e {
            Expr::Type => Ok(Level::Kind),
            Expr::Hole(_) => Err(KernelError::IllegalKindPosition(
                "unsolved inference hole".into(),
            )),
            Expr::KindArrow(a, k) => {
                self.expect_type_family(sig, ctx, a)?;
                match self.classify(sig, ctx, k)? {
                    Level::Kind => Ok(Level::Kind),
                    _ => Err(KernelError::IllegalKindPosition(render::expr(k))),
                }
            }
            Expr::Var(i, _) => match ctx.lookup(*i) {
                Some(CtxEntry::Term { .. }) => Ok(Level::Term(ctx.term_type(*i).unwrap())),
                Some(CtxEntry::Mor { .. }) => Err(KernelError::ExpectedTermVariable(*i)),
                None => Err(KernelError::VariableOutOfRange(*i)),
            },
            Expr::Sym(qid) => {
                let home = self.resolve_sig(&qid.sig)?;
                let (classifier, _) = self.resolve_identifier_at(sig, ctx, qid)?;
                let entry = self.flat_entry(home, &qid.symbol).ok_or_else(|| {
                    KernelError::UnknownSymbol {
                        sig: self.sig_path(home).to_string(),
                        symbol: qid.symbol.clone(),
                    }
                })?;
                match entry.kind {
                    SymKind::Const => Ok(Level::Term(classifier)),
                    SymKind::Fam => Ok(Level::Fam(classifier)),
                }
            }
            Expr::Pi(b) => {
                self.expect_type_family(sig, ctx, &b.domain)?;
                let inner = extend_term(ctx, &b.hint, &b.domain);
                match self.classify(sig, &inner, &b.body)? {
                    Level::Fam(k) => {
                        if self.equal(sig, &inner, &k, &Expr::Type)? {
                            Ok(Level::Fam(Expr::Type))
                        } else {
                            Err(KernelError::KindMismatch {
                                expected: "type".into(),
                                actual: render::expr(&k),
                            })
                        }
                    }
                    Level::Kind => Err(KernelError::IllegalKindPosition(render::expr(&b.body))),
                    Level::Term(_) => Err(KernelError::KindMismatch {
                        expected: "a type family".into(),
                        actual: render::expr(&b.body),
                    }),
                }
            }
            Expr::Lam(b) => {
                self.expect_type_family(sig, ctx, &b.domain)?;
                let inner = extend_term(ctx, &b.hint, &b.domain);
                match self.classify(sig, &inner, &b.body)? {
                    Level::Term(ty) => Ok(Level::Term(Expr::Pi(Box::new(crate::expr::Binder {
                        hint: b.hint.clone(),
                        domain: b.domain.clone(),
                        body: ty,
                    })))),
                    _ => Err(KernelError::KindMismatch {
                        expected: "a term".into(),
                        actual: render::expr(&b.body),
                    }),
                }
            }
            Expr::App(f, a) => match self.classify(sig, ctx, f)? {
                Level::Term(fty) => {
                    let fty = self.whnf(sig, ctx, fty.clone(), true)?;
                    match fty {
                        Expr::Pi(b) => {
                            self.check_term_against(sig, ctx, a, &b.domain)?;
                            Ok(Level::Term(open_with_term(&b.body, a)))
                        }
                        Expr::MorPi(_) => Err(KernelError::TypeMismatch {
                            expected: "a morphism argument".into(),
                            actual: render::expr(a),
                        }),
                        other => Err(KernelError::NotAFunction {
                            found: render::expr(f),
                            classifier: render::expr(&other),
                        }),
                    }
                }
                Level::Fam(k) => match self.whnf(sig, ctx, k, true)? {
                    Expr::KindArrow(dom, k2) => {
                        self.check_term_against(sig, ctx, a, &dom)?;
                        Ok(Level::Fam(*k2))
                    }
                    other => Err(KernelError::NotAFunction {
                        found: render::expr(f),
                        classifier: render::expr(&other),
                    }),
                },
                Level::Kind => Err(KernelError::IllegalKindPosition(render::expr(f))),
            },
            Expr::MorPi(b) => {
                self.require_morphism_vars()?;
                let dom = self.resolve_sig(&b.domain)?;
                crate::morvar::check_mor_binding_at(self, sig, dom)?;
                let inner = extend_mor(ctx, &b.hint, &b.domain);
                match self.classify(sig, &inner, &b.body)? {
                    Level::Fam(k) => {
                        if self.equal(sig, &inner, &k, &Expr::Type)? {
                            Ok(Level::Fam(Expr::Type))
                        } else {
                            Err(KernelError::KindMismatch {
                                expected: "type".into(),
                                actual: render::expr(&k),
                            })
                        }
                    }
                    _ => Err(KernelError::KindMismatch {
                        expected: "a type family".into(),
                        actual: render::expr(&b.body),
                    }),
                }
            }
            Expr::MorLam(b) => {
                self.require_morphism_vars()?;
                let dom = self.resolve_sig(&b.domain)?;
                crate::morvar::check_mor_binding_at(self, sig, dom)?;
                let inner = extend_mor(ctx, &b.hint, &b.domain);
                match self.classify(sig, &inner, &b.body)? {
                    Level::Term(ty) => {
                        Ok(Level::Term(Expr::MorPi(Box::new(crate::expr::MorBinder {
                            hint: b.hint.clone(),
                            domain: b.domain.clone(),
                            body: ty,
                        }))))
                    }
                    _ => Err(KernelError::KindMismatch {
                        expected: "a term".into(),
                        actual: render::expr(&b.body),
                    }),
                }
            }
            Expr::MorApp(f, m) => {
                self.require_morphism_vars()?;
                match self.classify(sig, ctx, f)? {
                    Level::Term(fty) => {
                        let fty = self.whnf(sig, ctx, fty, true)?;
                        match fty {
                            Expr::MorPi(b) => {
                                let dom = self.resolve_sig(&b.domain)?;
                                self.check_morphism_at(sig, ctx, m, Some(dom), Some(sig))?;
                                Ok(Level::Term(open_with_morphism(&b.body, m)))
                            }
                            other => Err(KernelError::NotAFunction {
                                found: render::expr(f),
                                classifier: render::expr(&other),
                            }),
                        }
                    }
                    _ => Err(KernelError::KindMismatch {
                        expected: "a term".into(),
                        actual: render::expr(f),
                    }),
                }
            }
        }
    }

    fn require_morphism_vars(&self) -> Result<()> {
        if self.options.morphism_vars {
            Ok(())
        } else {
            Err(KernelError::MorphismVarsDisabled)
        }
    }

    /// Require `e` to be a type family of kind `type`.
    pub(crate) fn expect_type_family(&self, sig: SigId, ctx: &Context, e: &Expr) -> Result<()> {
        match self.classify(sig, ctx, e)? {
            Level::Fam(k) => {
                if self.equal(sig, ctx, &k, &Expr::Type)? {
                    Ok(())
                } else {
                    Err(KernelError::KindMismatch {
                        expected: "type".into(),
                        actual: render::expr(&k),
                    })
                }
            }
            Level::Kind => Err(KernelError::IllegalKindPosition(render::expr(e))),
            Level::Term(ty) => Err(KernelError::KindMismatch {
                expected: "a type family".into(),
                actual: format!("a term of type {}", render::expr(&ty)),
            }),
        }
    }

    /// Check a well-formed kind expression.
    pub(crate) fn check_kind(&self, sig: SigId, ctx: &Context, k: &Expr) -> Result<()> {
        match k {
            Expr::Type => Ok(()),
            Expr::KindArrow(a, k2) => {
                self.expect_type_family(sig, ctx, a)?;
                self.check_kind(sig, ctx, k2)
            }
            other => Err(KernelError::IllegalKindPosition(render::expr(other))),
        }
    }

    /// Check a term against an expected type (or a family against an
    /// expected kind).
    pub(crate) fn check_term_against(
        &self,
        sig: SigId,
        ctx: &Context,
        e: &Expr,
        expected: &Expr,
    ) -> Result<()> {
        match self.classify(sig, ctx, e)? {
            Level::Term(ty) => {
                if self.equal(sig, ctx, &ty, expected)? {
                    Ok(())
                } else {
                    Err(KernelError::TypeMismatch {
                        expected: render::expr(&self.nf_fam(sig, ctx, expected).unwrap_or_else(
                            |_| expected.clone(),
                        )),
                        actual: render::expr(
                            &self.nf_fam(sig, ctx, &ty).unwrap_or_else(|_| ty.clone()),
                        ),
                    })
                }
            }
            Level::Fam(k) => {
                if self.equal(sig, ctx, &k, expected)? {
                    Ok(())
                } else {
                    Err(KernelError::KindMismatch {
                        expected: render::expr(expected),
                        actual: render::expr(&k),
                    })
                }
            }
            Level::Kind => Err(KernelError::IllegalKindPosition(render::expr(e))),
        }
    }

    /// Weak-head normalization. With `delta`, defined symbols in head
    /// position are unfolded; without, they are left in place (lazy).
    pub(crate) fn whnf(&self, sig: SigId, ctx: &Context, e: Expr, delta: bool) -> Result<Expr> {
        let mut e = e;
        loop {
            match e {
                Expr::App(f, a) => {
                    let f = self.whnf(sig, ctx, *f, delta)?;
                    match f {
                        Expr::Lam(b) => {
                            e = open_with_term(&b.body, &a);
                        }
                        f => return Ok(Expr::App(Box::new(f), a)),
                    }
                }
                Expr::MorApp(f, m) => {
                    let f = self.whnf(sig, ctx, *f, delta)?;
                    match f {
                        Expr::MorLam(b) => {
                            e = open_with_morphism(&b.body, &m);
                        }
                        f => return Ok(Expr::MorApp(Box::new(f), m)),
                    }
                }
                Expr::Sym(ref qid) => {
                    match self.reduce_ident(sig, ctx, qid)? {
                        Reduced::Expr(e2) => {
                            e = e2;
                        }
                        r @ Reduced::Canonical { .. } => {
                            if delta {
                                if let Some(def) = self.canonical_def(&r)? {
                                    e = def;
                                    continue;
                                }
                            }
                            return Ok(r.into_expr(self, sig));
                        }
                    }
                }
                other => return Ok(other),
            }
        }
    }

    /// Definition of a symbol in canonical reduced form, if any.
    fn canonical_def(&self, r: &Reduced) -> Result<Option<Expr>> {
        match r {
            Reduced::Expr(_) => Ok(None),
            Reduced::Canonical {
                home, hops, var, ..
            } => {
                let location = hops.last().map(|(s, _)| *s).unwrap_or(*home);
                let flat = r.flat_name().unwrap();
                let entry =
                    self.flat_entry(location, &flat)
                        .ok_or_else(|| KernelError::UnknownSymbol {
                            sig: self.sig_path(location).to_string(),
                            symbol: flat.clone(),
                        })?;
                match (&entry.def, var) {
                    (None, _) => Ok(None),
                    (Some(d), None) => Ok(Some(d.clone())),
                    (Some(d), Some((v, h))) => {
                        Ok(Some(apply_morphism(d, &Morphism::Var(*v, h.clone()), 0)))
                    }
                }
            }
        }
    }

    /// βη-convertibility (assumes both sides are well-typed with the same
    /// classifier).
    pub(crate) fn equal(&self, sig: SigId, ctx: &Context, a: &Expr, b: &Expr) -> Result<bool> {
        let a = self.whnf(sig, ctx, a.clone(), false)?;
        let b = self.whnf(sig, ctx, b.clone(), false)?;
        match (&a, &b) {
            (Expr::Type, Expr::Type) => Ok(true),
            (Expr::KindArrow(a1, k1), Expr::KindArrow(a2, k2)) => {
                Ok(self.equal(sig, ctx, a1, a2)? && self.equal(sig, ctx, k1, k2)?)
            }
            (Expr::Pi(b1), Expr::Pi(b2)) => {
                if !self.equal(sig, ctx, &b1.domain, &b2.domain)? {
                    return Ok(false);
                }
                let inner = extend_term(ctx, &b1.hint, &b1.domain);
                self.equal(sig, &inner, &b1.body, &b2.body)
            }
            (Expr::MorPi(b1), Expr::MorPi(b2)) => {
                if !self.same_sig(&b1.domain, &b2.domain)? {
                    return Ok(false);
                }
                let inner = extend_mor(ctx, &b1.hint, &b1.domain);
                self.equal(sig, &inner, &b1.body, &b2.body)
            }
            (Expr::Lam(b1), Expr::Lam(b2)) => {
                let inner = extend_term(ctx, &b1.hint, &b1.domain);
                self.equal(sig, &inner, &b1.body, &b2.body)
            }
            (Expr::MorLam(b1), Expr::MorLam(b2)) => {
                if !self.same_sig(&b1.domain, &b2.domain)? {
                    return Ok(false);
                }
                let inner = extend_mor(ctx, &b1.hint, &b1.domain);
                self.equal(sig, &inner, &b1.body, &b2.body)
            }
            (Expr::Lam(b1), other) => {
                let inner = extend_term(ctx, &b1.hint, &b1.domain);
                let expanded = Expr::app(shift_expr(other, 0, 1), Expr::Var(0, b1.hint.clone()));
                self.equal(sig, &inner, &b1.body, &expanded)
            }
            (other, Expr::Lam(b2)) => {
                let inner = extend_term(ctx, &b2.hint, &b2.domain);
                let expanded = Expr::app(shift_expr(other, 0, 1), Expr::Var(0, b2.hint.clone()));
                self.equal(sig, &inner, &expanded, &b2.body)
            }
            (Expr::MorLam(b1), other) => {
                let inner = extend_mor(ctx, &b1.hint, &b1.domain);
                let expanded = Expr::mor_app(
                    shift_expr(other, 0, 1),
                    Morphism::Var(0, b1.hint.clone()),
                );
                self.equal(sig, &inner, &b1.body, &expanded)
            }
            (other, Expr::MorLam(b2)) => {
                let inner = extend_mor(ctx, &b2.hint, &b2.domain);
                let expanded = Expr::mor_app(
                    shift_expr(other, 0, 1),
                    Morphism::Var(0, b2.hint.clone()),
                );
                self.equal(sig, &inner, &expanded, &b2.body)
            }
            _ => self.equal_neutral(sig, ctx, a.clone(), b.clone()),
        }
    }

    /// Equality of weak-head-normal neutral spines, unfolding definitions on
    /// disagreement.
    fn equal_neutral(&self, sig: SigId, ctx: &Context, a: Expr, b: Expr) -> Result<bool> {
        let mut a = a;
        let mut b = b;
        loop {
            let (ha, spa) = a.spine();
            let (hb, spb) = b.spine();
            let heads_equal = match (ha, hb) {
                (Expr::Var(i, _), Expr::Var(j, _)) => i == j,
                (Expr::Sym(q1), Expr::Sym(q2)) => self.sym_keys_equal(sig, ctx, q1, q2)?,
                (Expr::Type, Expr::Type) => true,
                _ => false,
            };
            if heads_equal && spa.len() == spb.len() {
                let mut all = true;
                for (x, y) in spa.iter().zip(spb.iter()) {
                    if !super::morphism::args_same_shape(x, y) {
                        all = false;
                        break;
                    }
                    match (x, y) {
                        (Arg::Term(t1), Arg::Term(t2)) => {
                            if !self.equal(sig, ctx, t1, t2)? {
                                all = false;
                                break;
                            }
                        }
                        (Arg::Mor(m1), Arg::Mor(m2)) => {
                            if !self.morphisms_equal(sig, ctx, m1, m2)? {
                                all = false;
                                break;
                            }
                        }
                        _ => unreachable!(),
                    }
                }
                if all {
                    return Ok(true);
                }
            }
            // disagreement: unfold a defined head and retry
            let ua = self.unfold_head(sig, ctx, &a)?;
            let ub = self.unfold_head(sig, ctx, &b)?;
            match (ua, ub) {
                (None, None) => return Ok(false),
                (na, nb) => {
                    if let Some(na) = na {
                        a = self.whnf(sig, ctx, na, false)?;
                    }
                    if let Some(nb) = nb {
                        b = self.whnf(sig, ctx, nb, false)?;
                    }
                    // after unfolding, shapes can change away from neutral
                    if !(matches!(a, Expr::App(..) | Expr::MorApp(..) | Expr::Sym(_) | Expr::Var(..))
                        && matches!(
                            b,
                            Expr::App(..) | Expr::MorApp(..) | Expr::Sym(_) | Expr::Var(..)
                        ))
                    {
                        return self.equal(sig, ctx, &a, &b);
                    }
                }
            }
        }
    }

    /// Whether two canonical identifiers denote the same flat symbol.
    fn sym_keys_equal(
        &self,
        sig: SigId,
        ctx: &Context,
        q1: &crate::expr::QualifiedId,
        q2: &crate::expr::QualifiedId,
    ) -> Result<bool> {
        let r1 = self.reduce_ident(sig, ctx, q1)?;
        let r2 = self.reduce_ident(sig, ctx, q2)?;
        match (&r1, &r2) {
            (
                Reduced::Canonical {
                    home: h1,
                    hops: hops1,
                    var: v1,
                    ..
                },
                Reduced::Canonical {
                    home: h2,
                    hops: hops2,
                    var: v2,
                    ..
                },
            ) => {
                let loc1 = hops1.last().map(|(s, _)| *s).unwrap_or(*h1);
                let loc2 = hops2.last().map(|(s, _)| *s).unwrap_or(*h2);
                let var1 = v1.as_ref().map(|(i, _)| *i);
                let var2 = v2.as_ref().map(|(i, _)| *i);
                Ok(loc1 == loc2 && var1 == var2 && r1.flat_name() == r2.flat_name())
            }
            _ => Ok(false),
        }
    }

    /// Replace a defined head symbol by its definition. Returns `None` when
    /// the head is not an unfoldable symbol.
    fn unfold_head(&self, sig: SigId, ctx: &Context, e: &Expr) -> Result<Option<Expr>> {
        fn rebuild(e: &Expr, new_head: Expr) -> Expr {
            match e {
                Expr::App(f, a) => Expr::app(rebuild(f, new_head), (**a).clone()),
                Expr::MorApp(f, m) => Expr::mor_app(rebuild(f, new_head), (**m).clone()),
                _ => new_head,
            }
        }
        let (head, _) = e.spine();
        if let Expr::Sym(qid) = head {
            let r = self.reduce_ident(sig, ctx, qid)?;
            if let Some(def) = self.canonical_def(&r)? {
                return Ok(Some(rebuild(e, def)));
            }
        }
        Ok(None)
    }

    /// Semantic morphism equality: fast structural comparison of normalized
    /// compositions, falling back to pointwise comparison of symbol images
    /// over the shared domain.
    pub(crate) fn morphisms_equal(
        &self,
        sig: SigId,
        ctx: &Context,
        m1: &Morphism,
        m2: &Morphism,
    ) -> Result<bool> {
        let n1 = normalize_morphism(m1);
        let n2 = normalize_morphism(m2);
        if n1 == n2 {
            return Ok(true);
        }
        let e1 = self.morphism_endpoints(sig, ctx, m1, None, None, false);
        let e2 = self.morphism_endpoints(sig, ctx, m2, None, None, false);
        let (dom, _cod) = match (e1, e2) {
            (Ok(p), _) => p,
            (_, Ok(p)) => p,
            (Err(e), _) => return Err(e),
        };
        for entry in self.flat_entries(dom) {
            let id = Expr::sym(entry.canonical_id(self, dom));
            let i1 = apply_morphism(&id, m1, 0);
            let i2 = apply_morphism(&id, m2, 0);
            if !self.equal(sig, ctx, &i1, &i2)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    // -- normalization ------------------------------------------------------

    pub(crate) fn normalize_at(&self, sig: SigId, ctx: &Context, e: &Expr) -> Result<Expr> {
        match self.classify(sig, ctx, e)? {
            Level::Kind => self.nf_kind(sig, ctx, e),
            Level::Fam(_) => self.nf_fam(sig, ctx, e),
            Level::Term(ty) => self.nf_term(sig, ctx, e, &ty),
        }
    }

    pub(crate) fn nf_kind(&self, sig: SigId, ctx: &Context, k: &Expr) -> Result<Expr> {
        match k {
            Expr::Type => Ok(Expr::Type),
            Expr::KindArrow(a, k2) => Ok(Expr::kind_arrow(
                self.nf_fam(sig, ctx, a)?,
                self.nf_kind(sig, ctx, k2)?,
            )),
            other => Err(KernelError::IllegalKindPosition(render::expr(other))),
        }
    }

    /// Normal form of a type family (no η at the family level: LF has no
    /// family abstraction).
    pub(crate) fn nf_fam(&self, sig: SigId, ctx: &Context, a: &Expr) -> Result<Expr> {
        let a = self.whnf(sig, ctx, a.clone(), true)?;
        match a {
            Expr::Pi(b) => {
                let dom = self.nf_fam(sig, ctx, &b.domain)?;
                let inner = extend_term(ctx, &b.hint, &b.domain);
                let body = self.nf_fam(sig, &inner, &b.body)?;
                Ok(Expr::Pi(Box::new(crate::expr::Binder {
                    hint: b.hint.clone(),
                    domain: dom,
                    body,
                })))
            }
            Expr::MorPi(b) => {
                let inner = extend_mor(ctx, &b.hint, &b.domain);
                let body = self.nf_fam(sig, &inner, &b.body)?;
                Ok(Expr::MorPi(Box::new(crate::expr::MorBinder {
                    hint: b.hint.clone(),
                    domain: self.canonical_sig_ref(&b.domain)?,
                    body,
                })))
            }
            neutral => self.nf_spine(sig, ctx, neutral),
        }
    }

    /// η-long β-normal form of a term at the given type.
    pub(crate) fn nf_term(&self, sig: SigId, ctx: &Context, e: &Expr, ty: &Expr) -> Result<Expr> {
        let ty_wh = self.whnf(sig, ctx, ty.clone(), true)?;
        match ty_wh {
            Expr::Pi(b) => {
                let dom_nf = self.nf_fam(sig, ctx, &b.domain)?;
                let inner = extend_term(ctx, &b.hint, &b.domain);
                let applied = Expr::app(shift_expr(e, 0, 1), Expr::Var(0, b.hint.clone()));
                let body = self.nf_term(sig, &inner, &applied, &b.body)?;
                Ok(Expr::Lam(Box::new(crate::expr::Binder {
                    hint: b.hint.clone(),
                    domain: dom_nf,
                    body,
                })))
            }
            Expr::MorPi(b) => {
                let inner = extend_mor(ctx, &b.hint, &b.domain);
                let applied = Expr::mor_app(shift_expr(e, 0, 1), Morphism::Var(0, b.hint.clone()));
                let body = self.nf_term(sig, &inner, &applied, &b.body)?;
                Ok(Expr::MorLam(Box::new(crate::expr::MorBinder {
                    hint: b.hint.clone(),
                    domain: self.canonical_sig_ref(&b.domain)?,
                    body,
                })))
            }
            _ => {
                let e = self.whnf(sig, ctx, e.clone(), true)?;
                self.nf_spine(sig, ctx, e)
            }
        }
    }

    /// Normalize a neutral spine, normalizing arguments at their expected
    /// types (this is where η-expansion of higher-order arguments happens).
    fn nf_spine(&self, sig: SigId, ctx: &Context, e: Expr) -> Result<Expr> {
        let (head, args) = e.spine();
        let mut head_ty = match head {
            Expr::Var(i, _) => match ctx.lookup(*i) {
                Some(CtxEntry::Term { .. }) => ctx.term_type(*i).unwrap(),
                _ => return Err(KernelError::VariableOutOfRange(*i)),
            },
            Expr::Sym(qid) => self.resolve_identifier_at(sig, ctx, qid)?.0,
            Expr::Type => {
                if args.is_empty() {
                    return Ok(Expr::Type);
                }
                return Err(KernelError::IllegalKindPosition("type".into()));
            }
            other => {
                // fully applied β-redexes were removed by whnf; a binder in
                // head position can only mean the spine is empty
                debug_assert!(args.is_empty());
                return Ok(other.clone());
            }
        };
        let head_nf = match head {
            Expr::Sym(qid) => self
                .reduce_ident(sig, ctx, qid)?
                .into_expr(self, sig),
            other => other.clone(),
        };
        let mut out = head_nf;
        for arg in args {
            head_ty = self.whnf(sig, ctx, head_ty, true)?;
            match arg {
                Arg::Term(t) => match head_ty {
                    Expr::Pi(b) => {
                        let t_nf = self.nf_term(sig, ctx, t, &b.domain)?;
                        head_ty = open_with_term(&b.body, &t_nf);
                        out = Expr::app(out, t_nf);
                    }
                    Expr::KindArrow(dom, k2) => {
                        let t_nf = self.nf_term(sig, ctx, t, &dom)?;
                        head_ty = *k2;
                        out = Expr::app(out, t_nf);
                    }
                    other => {
                        return Err(KernelError::NotAFunction {
                            found: render::expr(&out),
                            classifier: render::expr(&other),
                        })
                    }
                },
                Arg::Mor(m) => match head_ty {
                    Expr::MorPi(b) => {
                        let m_nf = normalize_morphism(m);
                        head_ty = open_with_morphism(&b.body, m);
                        out = Expr::mor_app(out, m_nf);
                    }
                    other => {
                        return Err(KernelError::NotAFunction {
                            found: render::expr(&out),
                            classifier: render::expr(&other),
                        })
                    }
                },
            }
        }
        Ok(out)
    }

    /// Replace a signature reference by its full path.
    pub(crate) fn canonical_sig_ref(&self, r: &SigRef) -> Result<SigRef> {
        let id = self.resolve_sig(r)?;
        Ok(SigRef::new(self.sig_path(id)))
    }
}
