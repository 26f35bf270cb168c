//! Morphism endpoints, identifier reduction, and homomorphic application.
//!
//! Identifiers are kept as written; `reduce_ident` brings a `S?c⟨μ⟩` into
//! canonical form on demand. A canonical identifier's morphism part is a
//! chain of structure steps optionally followed by a single morphism
//! variable; views and anonymous morphisms are applied away during
//! reduction, which may turn the identifier into an arbitrary expression.

use crate::error::{KernelError, Result};
use crate::expr::{
    shift_expr, shift_morphism, Arg, Context, Expr, InstEntry, Morphism, QualifiedId, SigRef,
};
use crate::render;

use super::{CheckedGraph, SigId};

/// Result of reducing an identifier.
#[derive(Clone, Debug)]
pub enum Reduced {
    /// Canonical identifier: home signature, symbol, structure hops
    /// (application order), optional trailing morphism variable.
    Canonical {
        home: SigId,
        symbol: String,
        hops: Vec<(SigId, String)>,
        var: Option<(u32, crate::expr::Hint)>,
    },
    /// The identifier was instantiated by a view or anonymous morphism.
    Expr(Expr),
}

impl Reduced {
    /// The signature the (canonical) symbol lives in after all hops.
    pub fn location(&self) -> Option<SigId> {
        match self {
            Reduced::Canonical {
                home, hops, var, ..
            } => {
                if var.is_some() {
                    None
                } else {
                    Some(hops.last().map(|(s, _)| *s).unwrap_or(*home))
                }
            }
            Reduced::Expr(_) => None,
        }
    }

    /// Dotted flat name of the canonical symbol (`s.r.c`).
    pub fn flat_name(&self) -> Option<String> {
        match self {
            Reduced::Canonical { symbol, hops, .. } => {
                let mut parts: Vec<&str> = hops.iter().rev().map(|(_, n)| n.as_str()).collect();
                parts.push(symbol);
                Some(parts.join("."))
            }
            Reduced::Expr(_) => None,
        }
    }

    /// Rebuild an expression from the reduced form, canonicalizing the
    /// morphism part.
    pub fn into_expr(self, graph: &CheckedGraph, ambient: SigId) -> Expr {
        match self {
            Reduced::Expr(e) => e,
            Reduced::Canonical {
                home,
                symbol,
                hops,
                var,
            } => {
                let mut atoms: Vec<Morphism> = hops
                    .iter()
                    .map(|(sig, s)| {
                        Morphism::Struct(SigRef::new(graph.sig_path(*sig)), s.clone())
                    })
                    .collect();
                let location = hops.last().map(|(s, _)| *s).unwrap_or(home);
                match var {
                    Some((i, h)) => atoms.push(Morphism::Var(i, h)),
                    None => {
                        if atoms.is_empty() {
                            let via = if location == ambient {
                                Morphism::Id
                            } else {
                                Morphism::Incl
                            };
                            return Expr::sym(QualifiedId {
                                sig: SigRef::new(graph.sig_path(home)),
                                symbol,
                                via,
                            });
                        }
                        if location != ambient {
                            atoms.push(Morphism::Incl);
                        }
                    }
                }
                let via = if atoms.len() == 1 {
                    atoms.pop().unwrap()
                } else {
                    Morphism::Seq(atoms)
                };
                Expr::sym(QualifiedId {
                    sig: SigRef::new(graph.sig_path(home)),
                    symbol,
                    via,
                })
            }
        }
    }
}

impl CheckedGraph {
    /// Intrinsic endpoints of an atomic morphism, where determinable without
    /// hints. The ambient signature is the codomain of morphism variables.
    fn atom_endpoints(
        &self,
        ambient: SigId,
        ctx: &Context,
        m: &Morphism,
    ) -> Result<(Option<SigId>, Option<SigId>)> {
        match m {
            Morphism::Id | Morphism::Incl => Ok((None, None)),
            Morphism::Struct(sig, s) => {
                let t = self.resolve_sig(sig)?;
                let info = self.struct_info(t, s)?;
                Ok((Some(info.domain), Some(t)))
            }
            Morphism::View(v) => {
                let v = self.view_info(self.resolve_view(v)?);
                Ok((Some(v.domain), Some(v.codomain)))
            }
            Morphism::Anon(a) => Ok((
                Some(self.resolve_sig(&a.domain)?),
                Some(self.resolve_sig(&a.codomain)?),
            )),
            Morphism::Var(i, _) => {
                let dom = match ctx.lookup(*i) {
                    Some(crate::expr::CtxEntry::Mor { sig, .. }) => self.resolve_sig(sig)?,
                    Some(crate::expr::CtxEntry::Term { .. }) => {
                        return Err(KernelError::ExpectedMorphismVariable(*i))
                    }
                    None => return Err(KernelError::VariableOutOfRange(*i)),
                };
                Ok((Some(dom), Some(ambient)))
            }
            Morphism::Seq(_) => unreachable!("atoms are flat"),
        }
    }

    /// Infer and validate the endpoints of a morphism, with optional
    /// expected endpoints. When `check_bodies` is set, anonymous morphism
    /// bodies are checked for totality and type preservation.
    pub(crate) fn morphism_endpoints(
        &self,
        ambient: SigId,
        ctx: &Context,
        m: &Morphism,
        expect_dom: Option<SigId>,
        expect_cod: Option<SigId>,
        check_bodies: bool,
    ) -> Result<(SigId, SigId)> {
        let atoms = m.atoms();
        if atoms.is_empty() {
            // empty composition is the identity
            return match expect_dom.or(expect_cod) {
                Some(s) => Ok((s, s)),
                None => Err(KernelError::UnderdeterminedMorphism(render::morphism(m))),
            };
        }
        let n = atoms.len();
        // boundary[i] is the signature between atoms i-1 and i
        let mut boundary: Vec<Option<SigId>> = vec![None; n + 1];
        boundary[0] = expect_dom;
        boundary[n] = expect_cod;
        let mut fill = |slot: &mut Option<SigId>, v: SigId, what: &Morphism| match slot {
            None => {
                *slot = Some(v);
                Ok(())
            }
            Some(existing) if *existing == v => Ok(()),
            Some(existing) => Err(KernelError::CompositionMismatch(format!(
                "`{}` connects `{}` where `{}` was expected",
                render::morphism(what),
                self.sig_path(v),
                self.sig_path(*existing),
            ))),
        };
        for (i, atom) in atoms.iter().enumerate() {
            let (d, c) = self.atom_endpoints(ambient, ctx, atom)?;
            if let Some(d) = d {
                fill(&mut boundary[i], d, atom)?;
            }
            if let Some(c) = c {
                fill(&mut boundary[i + 1], c, atom)?;
            }
        }
        // runs of id/incl between known boundaries inherit the left end
        let mut last_known: Option<SigId> = None;
        for i in 0..=n {
            match boundary[i] {
                Some(s) => last_known = Some(s),
                None => boundary[i] = last_known,
            }
        }
        // anything still unknown gets the nearest right end
        let mut next_known: Option<SigId> = None;
        for i in (0..=n).rev() {
            match boundary[i] {
                Some(s) => next_known = Some(s),
                None => boundary[i] = next_known,
            }
        }
        // a bare identity/inclusion chain with no information anywhere
        // defaults to the ambient signature
        for b in boundary.iter_mut() {
            if b.is_none() {
                *b = Some(ambient);
            }
        }
        // validation
        for (i, atom) in atoms.iter().enumerate() {
            let d = boundary[i].unwrap();
            let c = boundary[i + 1].unwrap();
            match atom {
                Morphism::Id => {
                    if d != c {
                        return Err(KernelError::CompositionMismatch(format!(
                            "`id` used between `{}` and `{}`",
                            self.sig_path(d),
                            self.sig_path(c)
                        )));
                    }
                }
                Morphism::Incl => {
                    if !self.included_in(d, c) {
                        return Err(KernelError::IncludeConditionViolated {
                            origin: self.sig_path(d).to_string(),
                            target: self.sig_path(c).to_string(),
                            missing: self.sig_path(d).to_string(),
                        });
                    }
                }
                Morphism::Anon(a) if check_bodies => {
                    self.check_anon(ambient, ctx, a)?;
                }
                _ => {}
            }
        }
        Ok((boundary[0].unwrap(), boundary[n].unwrap()))
    }

    /// Check a morphism in ambient signature `ambient`: endpoints plus the
    /// include condition, with anonymous bodies fully checked.
    pub(crate) fn check_morphism_at(
        &self,
        ambient: SigId,
        ctx: &Context,
        m: &Morphism,
        expect_dom: Option<SigId>,
        expect_cod: Option<SigId>,
    ) -> Result<(SigId, SigId)> {
        let (d, c) = self.morphism_endpoints(ambient, ctx, m, expect_dom, expect_cod, true)?;
        // global condition: the codomain includes everything the domain includes
        for inc in &self.sig_info(d).include_closure {
            if !self.included_in(*inc, c) {
                return Err(KernelError::IncludeConditionViolated {
                    origin: self.sig_path(d).to_string(),
                    target: self.sig_path(c).to_string(),
                    missing: self.sig_path(*inc).to_string(),
                });
            }
        }
        Ok((d, c))
    }

    /// Check an anonymous morphism: totality on the domain's undefined local
    /// symbols and type preservation of every assignment.
    fn check_anon(
        &self,
        ambient: SigId,
        ctx: &Context,
        anon: &crate::expr::AnonMorphism,
    ) -> Result<()> {
        let dom = self.resolve_sig(&anon.domain)?;
        let cod = self.resolve_sig(&anon.codomain)?;
        for inc in &self.sig_info(dom).include_closure {
            if !self.included_in(*inc, cod) {
                return Err(KernelError::IncludeConditionViolated {
                    origin: self.sig_path(dom).to_string(),
                    target: self.sig_path(cod).to_string(),
                    missing: self.sig_path(*inc).to_string(),
                });
            }
        }
        let assignments = self.expand_entries(ambient, ctx, dom, cod, &anon.entries)?;
        self.check_assignment_map(cod, ctx, dom, &assignments, &|name| {
            anon_lookup(self, anon, name)
        })?;
        Ok(())
    }

    /// Image of a flat domain symbol under a view-like assignment map:
    /// explicit assignment, wholesale structure assignment, or (for defined
    /// symbols) the translated definition.
    pub(crate) fn view_like_image(
        &self,
        dom: SigId,
        flat_name: &str,
        lookup: &dyn Fn(&str) -> Option<ImageSource>,
        whole: &Morphism,
    ) -> Result<Expr> {
        if let Some(src) = lookup(flat_name) {
            match src {
                ImageSource::Expr(e) => return Ok(e),
                ImageSource::Struct(prefix, mu) => {
                    // `struct r := μ`: map `r.rest` to `μ(rest)`
                    let rest = &flat_name[prefix.len() + 1..];
                    let entry = self.flat_entry(dom, flat_name).ok_or_else(|| {
                        KernelError::UnknownSymbol {
                            sig: self.sig_path(dom).to_string(),
                            symbol: flat_name.to_string(),
                        }
                    })?;
                    // resolve `rest` in the structure's domain signature
                    let sinfo = self.struct_info(dom, &prefix)?;
                    let inner = self.flat_entry(sinfo.domain, rest).ok_or_else(|| {
                        KernelError::UnknownInstantiatedSymbol {
                            sig: self.sig_path(sinfo.domain).to_string(),
                            symbol: rest.to_string(),
                        }
                    })?;
                    let _ = entry;
                    let id = inner.canonical_id(self, sinfo.domain);
                    return Ok(apply_morphism(&Expr::sym(id), &mu, 0));
                }
            }
        }
        let entry = self
            .flat_entry(dom, flat_name)
            .ok_or_else(|| KernelError::UnknownSymbol {
                sig: self.sig_path(dom).to_string(),
                symbol: flat_name.to_string(),
            })?;
        match &entry.def {
            Some(def) => Ok(apply_morphism(def, whole, 0)),
            None => Err(KernelError::MissingAssignment {
                sig: self.sig_path(dom).to_string(),
                symbol: flat_name.to_string(),
            }),
        }
    }

    /// Reduce an identifier to canonical form, applying views and anonymous
    /// morphisms along the way.
    pub(crate) fn reduce_ident(
        &self,
        ambient: SigId,
        ctx: &Context,
        qid: &QualifiedId,
    ) -> Result<Reduced> {
        let home = self.resolve_sig(&qid.sig)?;
        // the declared symbol must be a flat-local of its home signature
        if self.flat_entry(home, &qid.symbol).is_none() {
            return Err(KernelError::UnknownSymbol {
                sig: self.sig_path(home).to_string(),
                symbol: qid.symbol.clone(),
            });
        }
        let mut hops: Vec<(SigId, String)> = Vec::new();
        let mut symbol = qid.symbol.clone();
        let mut home_sig = home;
        let atoms: Vec<Morphism> = qid.via.atoms().into_iter().cloned().collect();
        let mut i = 0usize;
        while i < atoms.len() {
            let atom = &atoms[i];
            i += 1;
            let location = hops.last().map(|(s, _)| *s).unwrap_or(home_sig);
            match atom {
                Morphism::Id | Morphism::Incl => {}
                Morphism::Struct(sig, s) => {
                    let t = self.resolve_sig(sig)?;
                    let info = self.struct_info(t, s)?;
                    if self.included_in(location, info.domain) && location != info.domain {
                        // included symbols are untouched
                        continue;
                    }
                    hops.push((t, s.clone()));
                }
                Morphism::View(_) | Morphism::Anon(_) => {
                    let dom = match atom {
                        Morphism::View(v) => self.view_info(self.resolve_view(v)?).domain,
                        Morphism::Anon(a) => self.resolve_sig(&a.domain)?,
                        _ => unreachable!(),
                    };
                    if self.included_in(location, dom) && location != dom {
                        continue;
                    }
                    let flat_name = {
                        let mut parts: Vec<&str> =
                            hops.iter().rev().map(|(_, n)| n.as_str()).collect();
                        parts.push(&symbol);
                        parts.join(".")
                    };
                    let image = match atom {
                        Morphism::View(v) => {
                            let info = self.view_info(self.resolve_view(v)?);
                            self.view_like_image(
                                dom,
                                &flat_name,
                                &|n| info.assignments.get(n).cloned().map(ImageSource::Expr),
                                atom,
                            )?
                        }
                        Morphism::Anon(a) => self.view_like_image(
                            dom,
                            &flat_name,
                            &|n| anon_lookup(self, a, n),
                            atom,
                        )?,
                        _ => unreachable!(),
                    };
                    // apply the remaining composition to the image
                    let rest = Morphism::Seq(atoms[i..].to_vec());
                    let translated = apply_morphism(&image, &rest, 0);
                    return Ok(Reduced::Expr(translated));
                }
                Morphism::Var(v, h) => {
                    let dom = match ctx.lookup(*v) {
                        Some(crate::expr::CtxEntry::Mor { sig, .. }) => self.resolve_sig(sig)?,
                        Some(crate::expr::CtxEntry::Term { .. }) => {
                            return Err(KernelError::ExpectedMorphismVariable(*v))
                        }
                        None => return Err(KernelError::VariableOutOfRange(*v)),
                    };
                    if self.included_in(location, dom) && location != dom {
                        continue;
                    }
                    if i != atoms.len() {
                        return Err(KernelError::UnsupportedMorphismShape(format!(
                            "composition continues after morphism variable in `{}`",
                            render::morphism(&qid.via)
                        )));
                    }
                    return Ok(Reduced::Canonical {
                        home: home_sig,
                        symbol,
                        hops,
                        var: Some((*v, h.clone())),
                    });
                }
                Morphism::Seq(_) => unreachable!("atoms are flat"),
            }
            let _ = &mut symbol;
            let _ = &mut home_sig;
        }
        let _ = ambient;
        Ok(Reduced::Canonical {
            home: home_sig,
            symbol,
            hops,
            var: None,
        })
    }

    /// Classifier and definition of an identifier used in `ambient`.
    pub(crate) fn resolve_identifier_at(
        &self,
        ambient: SigId,
        ctx: &Context,
        qid: &QualifiedId,
    ) -> Result<(Expr, Option<Expr>)> {
        let home = self.resolve_sig(&qid.sig)?;
        self.check_morphism_at(ambient, ctx, &qid.via, Some(home), Some(ambient))?;
        let entry = self
            .flat_entry(home, &qid.symbol)
            .ok_or_else(|| KernelError::UnknownSymbol {
                sig: self.sig_path(home).to_string(),
                symbol: qid.symbol.clone(),
            })?;
        let classifier = apply_morphism(&entry.classifier, &qid.via, 0);
        let def = self.ident_definition(ambient, ctx, qid)?;
        Ok((classifier, def))
    }

    /// Definition of an identifier, if it is defined at home or instantiated
    /// along the morphism.
    pub(crate) fn ident_definition(
        &self,
        ambient: SigId,
        ctx: &Context,
        qid: &QualifiedId,
    ) -> Result<Option<Expr>> {
        match self.reduce_ident(ambient, ctx, qid)? {
            Reduced::Expr(e) => Ok(Some(e)),
            r @ Reduced::Canonical { .. } => {
                let flat = r.flat_name().unwrap();
                match &r {
                    Reduced::Canonical { var: Some((v, _)), home, hops, .. } => {
                        // symbol lives in the variable's domain signature
                        let location = hops.last().map(|(s, _)| *s).unwrap_or(*home);
                        let entry = self.flat_entry(location, &flat).ok_or_else(|| {
                            KernelError::UnknownSymbol {
                                sig: self.sig_path(location).to_string(),
                                symbol: flat.clone(),
                            }
                        })?;
                        Ok(entry.def.as_ref().map(|d| {
                            apply_morphism(
                                d,
                                &Morphism::Var(*v, crate::expr::Hint::default()),
                                0,
                            )
                        }))
                    }
                    _ => {
                        let location = r.location().unwrap();
                        let entry = self.flat_entry(location, &flat).ok_or_else(|| {
                            KernelError::UnknownSymbol {
                                sig: self.sig_path(location).to_string(),
                                symbol: flat.clone(),
                            }
                        })?;
                        Ok(entry.def.clone())
                    }
                }
            }
        }
    }

    /// Expand instantiation entries into a flat-name-keyed assignment map,
    /// expanding wholesale `struct r := μ` entries symbol-wise. Entries are
    /// not type-checked here.
    pub(crate) fn expand_entries(
        &self,
        ambient: SigId,
        ctx: &Context,
        dom: SigId,
        cod: SigId,
        entries: &[InstEntry],
    ) -> Result<std::collections::HashMap<String, Expr>> {
        let mut map = std::collections::HashMap::new();
        let mut insert = |name: String, e: Expr| -> Result<()> {
            if map.insert(name.clone(), e).is_some() {
                return Err(KernelError::DuplicateName(name).ctx("multiple instantiations"));
            }
            Ok(())
        };
        for entry in entries {
            match entry {
                InstEntry::Symbol { name, rhs } => {
                    let flat = self.flat_entry(dom, name).ok_or_else(|| {
                        self.unknown_inst_symbol(dom, name)
                    })?;
                    let _ = flat;
                    insert(name.clone(), rhs.clone())?;
                }
                InstEntry::Struct { name, rhs } => {
                    // the named structure must exist (possibly nested, dotted)
                    let sdom = self.resolve_struct_path(dom, name)?;
                    self.check_morphism_at(ambient, ctx, rhs, Some(sdom), Some(cod))?;
                    let prefix = format!("{name}.");
                    for inner in self.flat_entries(sdom) {
                        let id = inner.canonical_id(self, sdom);
                        let image = apply_morphism(&Expr::sym(id), rhs, 0);
                        insert(format!("{prefix}{}", inner.name), image)?;
                    }
                }
            }
        }
        Ok(map)
    }

    fn unknown_inst_symbol(&self, dom: SigId, name: &str) -> KernelError {
        KernelError::UnknownInstantiatedSymbol {
            sig: self.sig_path(dom).to_string(),
            symbol: name.to_string(),
        }
    }

    /// The domain signature of a (possibly dotted) structure path inside
    /// `sig`: `r` or `r.q`.
    pub(crate) fn resolve_struct_path(&self, sig: SigId, path: &str) -> Result<SigId> {
        let mut current = sig;
        for seg in path.split('.') {
            let info = self.struct_info(current, seg)?;
            current = info.domain;
        }
        Ok(current)
    }
}

/// How a view-like morphism maps one symbol.
pub(crate) enum ImageSource {
    Expr(Expr),
    /// The symbol is covered by a wholesale structure assignment with the
    /// given prefix and morphism.
    Struct(String, Morphism),
}

/// Look up a flat name in an anonymous morphism's entry list, considering
/// wholesale structure entries by prefix.
pub(crate) fn anon_lookup(
    _graph: &CheckedGraph,
    anon: &crate::expr::AnonMorphism,
    flat_name: &str,
) -> Option<ImageSource> {
    for entry in &anon.entries {
        match entry {
            InstEntry::Symbol { name, rhs } if name == flat_name => {
                return Some(ImageSource::Expr(rhs.clone()));
            }
            InstEntry::Struct { name, rhs } => {
                if let Some(rest) = flat_name.strip_prefix(name.as_str()) {
                    if let Some(stripped) = rest.strip_prefix('.') {
                        let _ = stripped;
                        return Some(ImageSource::Struct(name.clone(), rhs.clone()));
                    }
                }
            }
            _ => {}
        }
    }
    None
}

/// Homomorphic application of a morphism to an expression. Purely
/// syntactic: identifiers get the morphism appended to their composition
/// (unless they end in a morphism variable, which re-targets with the
/// translated context); reduction happens lazily during normalization.
/// `depth` is the number of binders between the expression and the context
/// the morphism was written in.
pub(crate) fn apply_morphism(e: &Expr, mu: &Morphism, depth: u32) -> Expr {
    match e {
        Expr::Type => Expr::Type,
        Expr::Hole(i) => Expr::Hole(*i),
        Expr::KindArrow(a, k) => {
            Expr::kind_arrow(apply_morphism(a, mu, depth), apply_morphism(k, mu, depth))
        }
        Expr::Var(i, h) => Expr::Var(*i, h.clone()),
        Expr::Sym(qid) => Expr::sym(QualifiedId {
            sig: qid.sig.clone(),
            symbol: qid.symbol.clone(),
            via: compose_for_ident(&qid.via, mu, depth),
        }),
        Expr::Pi(b) => Expr::Pi(Box::new(crate::expr::Binder {
            hint: b.hint.clone(),
            domain: apply_morphism(&b.domain, mu, depth),
            body: apply_morphism(&b.body, mu, depth + 1),
        })),
        Expr::Lam(b) => Expr::Lam(Box::new(crate::expr::Binder {
            hint: b.hint.clone(),
            domain: apply_morphism(&b.domain, mu, depth),
            body: apply_morphism(&b.body, mu, depth + 1),
        })),
        Expr::App(f, a) => Expr::app(apply_morphism(f, mu, depth), apply_morphism(a, mu, depth)),
        Expr::MorPi(b) => Expr::MorPi(Box::new(crate::expr::MorBinder {
            hint: b.hint.clone(),
            domain: b.domain.clone(),
            body: apply_morphism(&b.body, mu, depth + 1),
        })),
        Expr::MorLam(b) => Expr::MorLam(Box::new(crate::expr::MorBinder {
            hint: b.hint.clone(),
            domain: b.domain.clone(),
            body: apply_morphism(&b.body, mu, depth + 1),
        })),
        Expr::MorApp(f, m) => Expr::mor_app(
            apply_morphism(f, mu, depth),
            compose_for_ident(m, mu, depth),
        ),
    }
}

/// Compose a morphism value with the applied morphism: append unless the
/// value ends in a morphism variable (variables re-target to the new
/// ambient signature together with their binding).
fn compose_for_ident(value: &Morphism, mu: &Morphism, depth: u32) -> Morphism {
    let ends_in_var = matches!(value.atoms().last(), Some(Morphism::Var(..)));
    let value = apply_inside_morphism(value, mu, depth);
    if ends_in_var {
        value
    } else {
        value.then(shift_morphism(mu, 0, depth))
    }
}

/// Push the applied morphism into anonymous bodies nested in a morphism
/// value whose own target is being translated. Only anonymous morphisms
/// that target the old ambient signature contain expressions that must be
/// rewritten; those are exactly the ones followed by nothing, and they are
/// handled compositionally by appending instead. Entries therefore stay
/// untouched; only sequences are cloned.
fn apply_inside_morphism(value: &Morphism, _mu: &Morphism, _depth: u32) -> Morphism {
    value.clone()
}

impl CheckedGraph {
    /// Resolve every reducible identifier in an expression: views and
    /// anonymous morphisms in identifier positions are applied away,
    /// leaving only canonical identifiers (structure hops, inclusions,
    /// trailing morphism variables). Used by the §3 elaborator so that
    /// substituted identifiers reduce to plain variables.
    pub(crate) fn resolve_all_idents(
        &self,
        ambient: SigId,
        ctx: &Context,
        e: &Expr,
    ) -> Result<Expr> {
        match e {
            Expr::Type | Expr::Var(..) | Expr::Hole(_) => Ok(e.clone()),
            Expr::KindArrow(a, k) => Ok(Expr::kind_arrow(
                self.resolve_all_idents(ambient, ctx, a)?,
                self.resolve_all_idents(ambient, ctx, k)?,
            )),
            Expr::Sym(qid) => match self.reduce_ident(ambient, ctx, qid)? {
                Reduced::Expr(inner) => self.resolve_all_idents(ambient, ctx, &inner),
                r @ Reduced::Canonical { .. } => Ok(r.into_expr(self, ambient)),
            },
            Expr::Pi(b) => {
                let mut inner = ctx.clone();
                inner.entries.push(crate::expr::CtxEntry::Term {
                    hint: b.hint.clone(),
                    ty: b.domain.clone(),
                });
                Ok(Expr::Pi(Box::new(crate::expr::Binder {
                    hint: b.hint.clone(),
                    domain: self.resolve_all_idents(ambient, ctx, &b.domain)?,
                    body: self.resolve_all_idents(ambient, &inner, &b.body)?,
                })))
            }
            Expr::Lam(b) => {
                let mut inner = ctx.clone();
                inner.entries.push(crate::expr::CtxEntry::Term {
                    hint: b.hint.clone(),
                    ty: b.domain.clone(),
                });
                Ok(Expr::Lam(Box::new(crate::expr::Binder {
                    hint: b.hint.clone(),
                    domain: self.resolve_all_idents(ambient, ctx, &b.domain)?,
                    body: self.resolve_all_idents(ambient, &inner, &b.body)?,
                })))
            }
            Expr::App(f, a) => Ok(Expr::app(
                self.resolve_all_idents(ambient, ctx, f)?,
                self.resolve_all_idents(ambient, ctx, a)?,
            )),
            Expr::MorPi(b) => {
                let mut inner = ctx.clone();
                inner.entries.push(crate::expr::CtxEntry::Mor {
                    hint: b.hint.clone(),
                    sig: b.domain.clone(),
                });
                Ok(Expr::MorPi(Box::new(crate::expr::MorBinder {
                    hint: b.hint.clone(),
                    domain: b.domain.clone(),
                    body: self.resolve_all_idents(ambient, &inner, &b.body)?,
                })))
            }
            Expr::MorLam(b) => {
                let mut inner = ctx.clone();
                inner.entries.push(crate::expr::CtxEntry::Mor {
                    hint: b.hint.clone(),
                    sig: b.domain.clone(),
                });
                Ok(Expr::MorLam(Box::new(crate::expr::MorBinder {
                    hint: b.hint.clone(),
                    domain: b.domain.clone(),
                    body: self.resolve_all_idents(ambient, &inner, &b.body)?,
                })))
            }
            Expr::MorApp(f, m) => Ok(Expr::mor_app(
                self.resolve_all_idents(ambient, ctx, f)?,
                self.resolve_idents_in_morphism(ambient, ctx, m)?,
            )),
        }
    }

    fn resolve_idents_in_morphism(
        &self,
        ambient: SigId,
        ctx: &Context,
        m: &Morphism,
    ) -> Result<Morphism> {
        match m {
            Morphism::Id
            | Morphism::Incl
            | Morphism::Struct(..)
            | Morphism::View(_)
            | Morphism::Var(..) => Ok(m.clone()),
            Morphism::Anon(a) => {
                let entries = a
                    .entries
                    .iter()
                    .map(|entry| match entry {
                        InstEntry::Symbol { name, rhs } => Ok(InstEntry::Symbol {
                            name: name.clone(),
                            rhs: self.resolve_all_idents(ambient, ctx, rhs)?,
                        }),
                        InstEntry::Struct { name, rhs } => Ok(InstEntry::Struct {
                            name: name.clone(),
                            rhs: self.resolve_idents_in_morphism(ambient, ctx, rhs)?,
                        }),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Morphism::Anon(Box::new(crate::expr::AnonMorphism {
                    domain: a.domain.clone(),
                    codomain: a.codomain.clone(),
                    entries,
                })))
            }
            Morphism::Seq(ms) => Ok(Morphism::Seq(
                ms.iter()
                    .map(|m| self.resolve_idents_in_morphism(ambient, ctx, m))
                    .collect::<Result<Vec<_>>>()?,
            )),
        }
    }
}

/// Apply a morphism to every entry of a context (for translating contexts
/// alongside expressions).
pub(crate) fn apply_morphism_ctx(ctx: &Context, mu: &Morphism) -> Context {
    let mut out = Context::new();
    for (i, entry) in ctx.entries.iter().enumerate() {
        let depth = i as u32;
        match entry {
            crate::expr::CtxEntry::Term { hint, ty } => {
                out.entries.push(crate::expr::CtxEntry::Term {
                    hint: hint.clone(),
                    ty: apply_morphism(ty, mu, depth),
                });
            }
            crate::expr::CtxEntry::Mor { hint, sig } => {
                out.entries.push(crate::expr::CtxEntry::Mor {
                    hint: hint.clone(),
                    sig: sig.clone(),
                });
            }
        }
    }
    out
}

/// Drop identity atoms and collapse inclusion runs; the normal form of a
/// morphism for printing and fast equality.
pub(crate) fn normalize_morphism(m: &Morphism) -> Morphism {
    let mut atoms: Vec<Morphism> = Vec::new();
    for a in m.atoms() {
        match a {
            Morphism::Id => {}
            Morphism::Incl => {
                if !matches!(atoms.last(), Some(Morphism::Incl)) {
                    atoms.push(Morphism::Incl);
                }
            }
            other => atoms.push(other.clone()),
        }
    }
    match atoms.len() {
        0 => Morphism::Id,
        1 => atoms.pop().unwrap(),
        _ => Morphism::Seq(atoms),
    }
}

/// Spine-argument comparison helper: classify an argument pair.
pub(crate) fn args_same_shape(a: &Arg<'_>, b: &Arg<'_>) -> bool {
    matches!(
        (a, b),
        (Arg::Term(_), Arg::Term(_)) | (Arg::Mor(_), Arg::Mor(_))
    )
}

/// Shift helper re-exported for the elaborator.
pub(crate) fn shifted(e: &Expr, amount: u32) -> Expr {
    shift_expr(e, 0, amount)
}
