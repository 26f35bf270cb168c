//! Declaration checking: signatures, includes, constants, structures, and
//! views, in declaration order. Structure declarations are expanded into
//! their induced declarations as they are checked, so the flat symbol table
//! of a signature always reflects exactly the declarations seen so far.

use std::collections::HashMap;

use crate::error::{KernelError, Result};
use crate::expr::{Context, Expr, InstEntry, Morphism, Name, SigRef};
use crate::graph::{Span, ViewDef};

use super::morphism::{anon_lookup, apply_morphism, ImageSource};
use super::typing::Level;
use super::{
    CheckedDecl, CheckedGraph, FlatEntry, GraphBuilder, SigId, SigInfo, StructInfo, SymKind,
    TopEntry, ViewId, ViewInfo,
};

impl GraphBuilder {
    pub fn begin_sig(&mut self, name: &str, span: Option<Span>) -> Result<SigId> {
        if name.contains('.') || name.contains('?') {
            return Err(KernelError::DuplicateName(name.to_string())
                .ctx("signature names may not contain '.' or '?'"));
        }
        let parent = self.current_sig();
        let path = match parent {
            Some(p) => format!("{}.{}", self.graph.sig_path(p), name),
            None => name.to_string(),
        };
        match parent {
            None => {
                if self.graph.by_path.contains_key(&path)
                    || self.graph.view_by_name.contains_key(name)
                {
                    return Err(KernelError::DuplicateName(name.to_string()).at(span));
                }
            }
            Some(p) => {
                let info = self.graph.sig_info(p);
                if info.nested.contains_key(name)
                    || info.structs.contains_key(name)
                    || info.flat.get(name).is_some()
                {
                    return Err(KernelError::DuplicateName(name.to_string()).at(span));
                }
            }
        }
        let mut closure = Vec::new();
        let mut visible = HashMap::new();
        if let Some(p) = parent {
            closure.push(p);
            for inc in &self.graph.sig_info(p).include_closure {
                if !closure.contains(inc) {
                    closure.push(*inc);
                }
            }
            // the parent's prefix (and everything it sees) is in scope
            visible = self.graph.sig_info(p).visible.clone();
            for entry in &self.graph.sig_info(p).flat.entries {
                visible.insert(entry.name.clone(), (p, entry.name.clone()));
            }
        }
        let id = SigId(self.graph.sigs.len() as u32);
        self.graph.sigs.push(SigInfo {
            path: path.clone(),
            name: name.to_string(),
            parent,
            decls: Vec::new(),
            includes_direct: Vec::new(),
            include_closure: closure,
            flat: Default::default(),
            structs: HashMap::new(),
            nested: HashMap::new(),
            visible,
            open: true,
        });
        self.graph.by_path.insert(path, id);
        if parent.is_some() {
            self.graph.register_alias(name, id);
        }
        self.stack_mut().push(id);
        Ok(id)
    }

    pub fn end_sig(&mut self) -> Result<SigId> {
        let id = self
            .stack_mut()
            .pop()
            .ok_or_else(|| KernelError::UnknownSignature("no open signature".into()))?;
        self.graph.sig_mut(id).open = false;
        if let Some(&parent) = self.stack_mut().last() {
            let (name, entries): (String, Vec<(String, String)>) = {
                let info = self.graph.sig_info(id);
                (
                    info.name.clone(),
                    info.flat
                        .entries
                        .iter()
                        .map(|e| (e.name.clone(), e.name.clone()))
                        .collect(),
                )
            };
            // the nested signature becomes part of the parent: its symbols
            // are visible qualified by the nested name, and anything that
            // includes the parent includes it too
            let qualifier = self.nested_qualifier(id);
            for (ename, _) in entries {
                let qualified = format!("{qualifier}.{ename}");
                if let Some((other, _)) =
                    self.graph.sig_info(parent).visible.get(&qualified)
                {
                    if *other != id {
                        return Err(KernelError::DuplicateName(qualified));
                    }
                }
                self.graph
                    .sig_mut(parent)
                    .visible
                    .insert(qualified.clone(), (id, ename));
            }
            let pinfo = self.graph.sig_mut(parent);
            pinfo.nested.insert(name, id);
            if !pinfo.include_closure.contains(&id) {
                pinfo.include_closure.push(id);
            }
            pinfo.decls.push(CheckedDecl::Nested(id));
        } else {
            self.graph.toplevel.push(TopEntry::Sig(id));
            let name = self.graph.sig_info(id).name.clone();
            self.graph.register_alias(&name, id);
        }
        Ok(id)
    }

    /// The qualifier under which a nested signature's symbols appear when
    /// the enclosing toplevel signature is included: the path without its
    /// toplevel root (`Pure.Type` -> `Type`).
    fn nested_qualifier(&self, id: SigId) -> String {
        let path = self.graph.sig_path(id);
        match path.split_once('.') {
            Some((_, rest)) => rest.to_string(),
            None => path.to_string(),
        }
    }

    fn open_sig(&self) -> Result<SigId> {
        self.current_sig()
            .ok_or_else(|| KernelError::UnknownSignature("no open signature".into()))
    }

    pub fn add_include(&mut self, sig: &SigRef, span: Option<Span>) -> Result<()> {
        let ambient = self.open_sig()?;
        let target = self.graph.resolve_sig(sig).map_err(|e| e.at(span))?;
        if self.graph.sig_info(target).open {
            return Err(KernelError::UnknownSignature(sig.0.clone())
                .ctx("cannot include a signature that is still open")
                .at(span));
        }
        // bring the target and its closure into scope, checking for
        // flat-name collisions
        let mut incoming = vec![target];
        for inc in &self.graph.sig_info(target).include_closure {
            if !incoming.contains(inc) {
                incoming.push(*inc);
            }
        }
        for inc in &incoming {
            let names: Vec<(String, String)> = {
                let qualifier = if self.graph.sig_info(*inc).parent.is_some() {
                    Some(self.nested_qualifier(*inc))
                } else {
                    None
                };
                self.graph
                    .sig_info(*inc)
                    .flat
                    .entries
                    .iter()
                    .map(|e| {
                        let visible_name = match &qualifier {
                            Some(q) => format!("{q}.{}", e.name),
                            None => e.name.clone(),
                        };
                        (visible_name, e.name.clone())
                    })
                    .collect()
            };
            for (visible_name, flat_name) in names {
                if let Some((other, _)) = self.graph.sig_info(ambient).visible.get(&visible_name)
                {
                    if *other != *inc {
                        return Err(KernelError::DuplicateName(visible_name)
                            .ctx(format!(
                                "included from both `{}` and `{}`",
                                self.graph.sig_path(*other),
                                self.graph.sig_path(*inc)
                            ))
                            .at(span));
                    }
                }
                self.graph
                    .sig_mut(ambient)
                    .visible
                    .insert(visible_name, (*inc, flat_name));
            }
        }
        {
            let info = self.graph.sig_mut(ambient);
            if !info.includes_direct.contains(&target) {
                info.includes_direct.push(target);
            }
            for inc in incoming {
                if !info.include_closure.contains(&inc) {
                    info.include_closure.push(inc);
                }
            }
            info.decls.push(CheckedDecl::Include(target));
        }
        Ok(())
    }

    pub fn add_const(
        &mut self,
        name: &str,
        classifier: Expr,
        def: Option<Expr>,
        span: Option<Span>,
    ) -> Result<()> {
        let ambient = self.open_sig()?;
        // dotted names are legal here: flattening declares induced symbols
        // (`o.≤`) as plain constants
        if name.contains('?') {
            return Err(KernelError::DuplicateName(name.to_string())
                .ctx("declared names may not contain '?'")
                .at(span));
        }
        self.check_fresh_local(ambient, name, span)?;
        let ctx = Context::new();
        let err_here = |e: KernelError| e.ctx(format!("in declaration of `{name}`")).at(span);
        let kind = if classifier.is_kind() {
            self.graph
                .check_kind(ambient, &ctx, &classifier)
                .map_err(err_here)?;
            SymKind::Fam
        } else {
            self.graph
                .expect_type_family(ambient, &ctx, &classifier)
                .map_err(err_here)?;
            SymKind::Const
        };
        if let Some(d) = &def {
            self.graph
                .check_term_against(ambient, &ctx, d, &classifier)
                .map_err(|e| e.ctx(format!("in definition of `{name}`")).at(span))?;
        }
        let info = self.graph.sig_mut(ambient);
        info.flat.push(FlatEntry {
            name: name.to_string(),
            home_sig: ambient,
            home_symbol: name.to_string(),
            hops: Vec::new(),
            kind,
            classifier: classifier.clone(),
            def: def.clone(),
        });
        info.visible
            .insert(name.to_string(), (ambient, name.to_string()));
        info.decls.push(CheckedDecl::Const {
            name: name.to_string(),
            kind,
            classifier,
            def,
        });
        Ok(())
    }

    fn check_fresh_local(&self, ambient: SigId, name: &str, span: Option<Span>) -> Result<()> {
        let info = self.graph.sig_info(ambient);
        if info.flat.get(name).is_some()
            || info.structs.contains_key(name)
            || info.nested.contains_key(name)
        {
            return Err(KernelError::DuplicateName(name.to_string()).at(span));
        }
        if let Some((origin, _)) = info.visible.get(name) {
            if *origin != ambient {
                return Err(KernelError::DuplicateName(name.to_string())
                    .ctx(format!(
                        "collides with a symbol included from `{}`",
                        self.graph.sig_path(*origin)
                    ))
                    .at(span));
            }
        }
        Ok(())
    }

    pub fn add_struct(
        &mut self,
        name: &str,
        domain: &SigRef,
        entries: Vec<InstEntry>,
        span: Option<Span>,
    ) -> Result<()> {
        let ambient = self.open_sig()?;
        if name.contains('.') || name.contains('?') {
            return Err(KernelError::DuplicateName(name.to_string())
                .ctx("structure names may not contain '.' or '?'")
                .at(span));
        }
        self.check_fresh_local(ambient, name, span)?;
        let dom = self.graph.resolve_sig(domain).map_err(|e| e.at(span))?;
        if self.graph.sig_info(dom).open {
            return Err(KernelError::UnknownSignature(domain.0.clone())
                .ctx("cannot instantiate a signature that is still open")
                .at(span));
        }
        // the ambient signature must include everything the domain includes
        for inc in self.graph.sig_info(dom).include_closure.clone() {
            if !self.graph.included_in(inc, ambient) {
                return Err(KernelError::IncludeConditionViolated {
                    origin: self.graph.sig_path(dom).to_string(),
                    target: self.graph.sig_path(ambient).to_string(),
                    missing: self.graph.sig_path(inc).to_string(),
                }
                .at(span));
            }
        }
        let ctx = Context::new();
        let assignments = self
            .graph
            .expand_entries(ambient, &ctx, dom, ambient, &entries)
            .map_err(|e| e.ctx(format!("in structure `{name}`")).at(span))?;
        // classify assigned expressions against the prefix (before any of
        // this structure's induced declarations exist), so assignments
        // cannot refer forward into the structure itself
        let mut assigned_types: HashMap<String, Level> = HashMap::new();
        for (key, rhs) in &assignments {
            let level = self
                .graph
                .classify(ambient, &ctx, rhs)
                .map_err(|e| e.ctx(format!("in instantiation of `{key}`")).at(span))?;
            assigned_types.insert(key.clone(), level);
        }
        // validate that assigned symbols exist and are local to the domain
        for key in assignments.keys() {
            if self.graph.flat_entry(dom, key).is_none() {
                return Err(KernelError::UnknownInstantiatedSymbol {
                    sig: self.graph.sig_path(dom).to_string(),
                    symbol: key.clone(),
                }
                .at(span));
            }
        }
        // register the structure, then push the induced declarations
        let hop = Morphism::Struct(
            SigRef::new(self.graph.sig_path(ambient)),
            name.to_string(),
        );
        self.graph.sig_mut(ambient).structs.insert(
            name.to_string(),
            StructInfo {
                name: name.to_string(),
                domain: dom,
                assignments: assignments.clone(),
                span,
            },
        );
        let domain_entries: Vec<FlatEntry> = self.graph.flat_entries(dom).to_vec();
        let mut induced_names = Vec::new();
        for f in &domain_entries {
            let induced_name = format!("{name}.{}", f.name);
            if self.graph.sig_info(ambient).visible.contains_key(&induced_name) {
                return Err(KernelError::DuplicateName(induced_name).at(span));
            }
            let classifier = apply_morphism(&f.classifier, &hop, 0);
            let def = match assignments.get(&f.name) {
                Some(rhs) => Some(rhs.clone()),
                None => f.def.as_ref().map(|d| apply_morphism(d, &hop, 0)),
            };
            let mut hops = f.hops.clone();
            hops.push((ambient, name.to_string()));
            let info = self.graph.sig_mut(ambient);
            info.flat.push(FlatEntry {
                name: induced_name.clone(),
                home_sig: f.home_sig,
                home_symbol: f.home_symbol.clone(),
                hops,
                kind: f.kind,
                classifier,
                def,
            });
            info.visible
                .insert(induced_name.clone(), (ambient, induced_name.clone()));
            induced_names.push(induced_name);
        }
        // now the full ambient table exists: check assignment classifiers
        // and definition compatibility
        for f in &domain_entries {
            let Some(rhs) = assignments.get(&f.name) else {
                continue;
            };
            let induced_name = format!("{name}.{}", f.name);
            let expected = self
                .graph
                .flat_entry(ambient, &induced_name)
                .unwrap()
                .classifier
                .clone();
            let ok = match (&assigned_types[&f.name], f.kind) {
                (Level::Term(ty), SymKind::Const) => {
                    self.graph.equal(ambient, &ctx, ty, &expected).map_err(|e| e.at(span))?
                }
                (Level::Fam(k), SymKind::Fam) => {
                    self.graph.equal(ambient, &ctx, k, &expected).map_err(|e| e.at(span))?
                }
                _ => false,
            };
            if !ok {
                let actual = match &assigned_types[&f.name] {
                    Level::Term(ty) | Level::Fam(ty) => crate::render::expr(ty),
                    Level::Kind => "a kind".to_string(),
                };
                return Err(KernelError::InstantiationTypeMismatch {
                    symbol: f.name.clone(),
                    expected: crate::render::expr(&expected),
                    actual,
                }
                .at(span));
            }
            if f.def.is_some() {
                let translated = self
                    .graph
                    .flat_entry(ambient, &induced_name)
                    .and_then(|e| e.def.clone());
                // the stored def is the assignment itself here; compare the
                // assignment with the translated original definition instead
                let original = apply_morphism(f.def.as_ref().unwrap(), &hop, 0);
                let _ = translated;
                if !self
                    .graph
                    .equal(ambient, &ctx, rhs, &original)
                    .map_err(|e| e.at(span))?
                {
                    return Err(KernelError::DefinitionClash {
                        symbol: f.name.clone(),
                    }
                    .at(span));
                }
            }
        }
        self.graph.sig_mut(ambient).decls.push(CheckedDecl::Struct {
            name: name.to_string(),
            domain: dom,
            entries,
        });
        Ok(())
    }

    pub fn add_view(&mut self, def: ViewDef) -> Result<()> {
        let span = def.span;
        if self.current_sig().is_some() {
            return Err(
                KernelError::UnknownSignature(def.name.clone())
                    .ctx("views are toplevel declarations")
                    .at(span),
            );
        }
        if self.graph.by_path.contains_key(&def.name)
            || self.graph.view_by_name.contains_key(&def.name)
        {
            return Err(KernelError::DuplicateName(def.name.clone()).at(span));
        }
        let dom = self.graph.resolve_sig(&def.domain).map_err(|e| e.at(span))?;
        let cod = self.graph.resolve_sig(&def.codomain).map_err(|e| e.at(span))?;
        for inc in self.graph.sig_info(dom).include_closure.clone() {
            if !self.graph.included_in(inc, cod) {
                return Err(KernelError::IncludeConditionViolated {
                    origin: self.graph.sig_path(dom).to_string(),
                    target: self.graph.sig_path(cod).to_string(),
                    missing: self.graph.sig_path(inc).to_string(),
                }
                .at(span));
            }
        }
        let ctx = Context::new();
        let assignments = self
            .graph
            .expand_entries(cod, &ctx, dom, cod, &def.entries)
            .map_err(|e| e.ctx(format!("in view `{}`", def.name)).at(span))?;
        let translator = Morphism::anon(
            SigRef::new(self.graph.sig_path(dom)),
            SigRef::new(self.graph.sig_path(cod)),
            def.entries.clone(),
        );
        self.graph
            .check_view_like(cod, &ctx, dom, &assignments, &translator)
            .map_err(|e| e.ctx(format!("in view `{}`", def.name)).at(span))?;
        let id = ViewId(self.graph.views.len() as u32);
        self.graph.views.push(ViewInfo {
            name: def.name.clone(),
            domain: dom,
            codomain: cod,
            assignments,
            entries: def.entries.clone(),
            span,
        });
        self.graph.view_by_name.insert(def.name.clone(), id);
        self.graph.toplevel.push(TopEntry::View(id));
        Ok(())
    }
}

impl CheckedGraph {
    /// Shared checking for views and anonymous morphisms: walk the domain's
    /// flat symbols in order; every undefined one must be assigned, every
    /// assignment must check at the translated classifier, and assignments
    /// to defined symbols must agree with the translated definition.
    pub(crate) fn check_view_like(
        &self,
        cod: SigId,
        ctx: &Context,
        dom: SigId,
        assignments: &HashMap<String, Expr>,
        translator: &Morphism,
    ) -> Result<()> {
        for f in self.flat_entries(dom) {
            let expected = apply_morphism(&f.classifier, translator, 0);
            match assignments.get(&f.name) {
                Some(rhs) => {
                    let err = |e: KernelError| e.ctx(format!("in assignment for `{}`", f.name));
                    match (self.classify(cod, ctx, rhs).map_err(err)?, f.kind) {
                        (Level::Term(ty), SymKind::Const) => {
                            if !self.equal(cod, ctx, &ty, &expected)? {
                                return Err(KernelError::AssignmentTypeMismatch {
                                    symbol: f.name.clone(),
                                    expected: crate::render::expr(&expected),
                                    actual: crate::render::expr(&ty),
                                });
                            }
                        }
                        (Level::Fam(k), SymKind::Fam) => {
                            if !self.equal(cod, ctx, &k, &expected)? {
                                return Err(KernelError::AssignmentTypeMismatch {
                                    symbol: f.name.clone(),
                                    expected: crate::render::expr(&expected),
                                    actual: crate::render::expr(&k),
                                });
                            }
                        }
                        _ => {
                            return Err(KernelError::AssignmentTypeMismatch {
                                symbol: f.name.clone(),
                                expected: crate::render::expr(&expected),
                                actual: crate::render::expr(rhs),
                            })
                        }
                    }
                    if let Some(d) = &f.def {
                        let translated = apply_morphism(d, translator, 0);
                        if !self.equal(cod, ctx, rhs, &translated)? {
                            return Err(KernelError::DefinitionClash {
                                symbol: f.name.clone(),
                            });
                        }
                    }
                }
                None => {
                    if f.def.is_none() {
                        return Err(KernelError::MissingAssignment {
                            sig: self.sig_path(dom).to_string(),
                            symbol: f.name.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Totality/type checking of an assignment map against a lookup
    /// function (used by anonymous morphisms inside expressions).
    pub(crate) fn check_assignment_map(
        &self,
        cod: SigId,
        ctx: &Context,
        dom: SigId,
        assignments: &HashMap<String, Expr>,
        _lookup: &dyn Fn(&str) -> Option<ImageSource>,
    ) -> Result<()> {
        let translator = Morphism::anon(
            SigRef::new(self.sig_path(dom)),
            SigRef::new(self.sig_path(cod)),
            assignments
                .iter()
                .map(|(k, v)| InstEntry::symbol(k.clone(), v.clone()))
                .collect(),
        );
        self.check_view_like(cod, ctx, dom, assignments, &translator)
    }

    /// Image of a symbol under a named view, considering explicit
    /// assignments and translated definitions.
    pub(crate) fn view_symbol_image(&self, view: &str, flat_name: &str) -> Result<Expr> {
        let info = self.view_info(self.resolve_view(view)?);
        self.view_like_image(
            info.domain,
            flat_name,
            &|n| info.assignments.get(n).cloned().map(ImageSource::Expr),
            &Morphism::view(view),
        )
    }

    pub(crate) fn anon_symbol_image(
        &self,
        anon: &crate::expr::AnonMorphism,
        flat_name: &str,
    ) -> Result<Expr> {
        let dom = self.resolve_sig(&anon.domain)?;
        self.view_like_image(
            dom,
            flat_name,
            &|n| anon_lookup(self, anon, n),
            &Morphism::Anon(Box::new(anon.clone())),
        )
    }
}

/// Names appearing in an instantiation entry list (for diagnostics).
pub fn entry_names(entries: &[InstEntry]) -> Vec<&Name> {
    entries
        .iter()
        .map(|e| match e {
            InstEntry::Symbol { name, .. } => name,
            InstEntry::Struct { name, .. } => name,
        })
        .collect()
}
