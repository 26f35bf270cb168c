//! Deterministic generation of small random signatures, morphisms, and
//! well-typed terms for property tests. Types are first-order over a single
//! base family `o` declared in a shared `Base` signature; view assignments
//! are synthesized so that every generated view is total and well-typed by
//! construction (the properties under test are preservation laws, not
//! checker rejection).

#![allow(dead_code)]

use modlf::expr::QualifiedId;
use modlf::graph::SigDecl;
use modlf::{Expr, InstEntry, Morphism, SigDef, SigRef, SourceGraph, ViewDef};

pub const BASE: &str = "Base";

/// Simple first-order types over the base family `o`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ty {
    O,
    Arrow(Box<Ty>, Box<Ty>),
}

impl Ty {
    pub fn arrow(a: Ty, b: Ty) -> Ty {
        Ty::Arrow(Box::new(a), Box::new(b))
    }

    pub fn to_expr(&self) -> Expr {
        match self {
            Ty::O => Expr::included(BASE, "o"),
            Ty::Arrow(a, b) => Expr::arrow(a.to_expr(), b.to_expr()),
        }
    }
}

/// A tiny splitmix-style generator so term synthesis is deterministic in
/// the proptest seed.
pub struct Rng(pub u64);

impl Rng {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 11
    }
    pub fn below(&mut self, n: usize) -> usize {
        (self.next() % n.max(1) as u64) as usize
    }
    pub fn flip(&mut self) -> bool {
        self.next() % 2 == 0
    }
}

pub fn gen_ty(rng: &mut Rng, depth: u32) -> Ty {
    if depth == 0 || rng.below(3) == 0 {
        Ty::O
    } else {
        Ty::arrow(gen_ty(rng, depth - 1), gen_ty(rng, depth - 1))
    }
}

/// Base signature with the single family `o : type`.
pub fn base_sig() -> SigDef {
    SigDef::new(BASE).with(SigDecl::Const(modlf::graph::ConstDecl {
        name: "o".into(),
        classifier: Expr::Type,
        def: None,
        span: None,
    }))
}

#[derive(Clone, Debug)]
pub struct GenSig {
    pub name: String,
    pub consts: Vec<(String, Ty)>,
}

impl GenSig {
    pub fn to_def(&self) -> SigDef {
        let mut def = SigDef::new(&self.name).include(BASE);
        for (n, ty) in &self.consts {
            def = def.constant(n, ty.to_expr());
        }
        def
    }
}

/// Generate a signature with `n` constants; the first always has type `o`
/// so that ground terms exist.
pub fn gen_sig(rng: &mut Rng, name: &str, n: usize) -> GenSig {
    let mut consts = vec![("c0".to_string(), Ty::O)];
    for i in 1..n {
        consts.push((format!("c{i}"), gen_ty(rng, 2)));
    }
    GenSig {
        name: name.to_string(),
        consts,
    }
}

/// Synthesize a closed-or-contextual term of the given type over a
/// signature, using its constants and the enclosing binder types.
pub fn synth_term(
    rng: &mut Rng,
    sig: &str,
    consts: &[(String, Ty)],
    ctx: &mut Vec<Ty>,
    ty: &Ty,
    fuel: u32,
) -> Expr {
    // candidate heads of exactly the target type
    let exact_vars: Vec<usize> = ctx
        .iter()
        .enumerate()
        .filter(|(_, t)| *t == ty)
        .map(|(i, _)| i)
        .collect();
    let exact_consts: Vec<&str> = consts
        .iter()
        .filter(|(_, t)| t == ty)
        .map(|(n, _)| n.as_str())
        .collect();

    if fuel > 0 {
        match rng.below(4) {
            // λ-abstraction when the type is an arrow
            0 => {
                if let Ty::Arrow(a, b) = ty {
                    ctx.push((**a).clone());
                    let body = synth_term(rng, sig, consts, ctx, b, fuel - 1);
                    ctx.pop();
                    return Expr::lam("x", a.to_expr(), body);
                }
            }
            // application of a constant or variable of type a -> ty
            1 => {
                let mut heads: Vec<(Expr, Ty)> = Vec::new();
                for (i, t) in ctx.iter().enumerate() {
                    if let Ty::Arrow(a, b) = t {
                        if **b == *ty {
                            let index = (ctx.len() - 1 - i) as u32;
                            heads.push((Expr::var(index, format!("v{i}")), (**a).clone()));
                        }
                    }
                }
                for (n, t) in consts {
                    if let Ty::Arrow(a, b) = t {
                        if **b == *ty {
                            heads.push((Expr::local(sig, n), (**a).clone()));
                        }
                    }
                }
                if !heads.is_empty() {
                    let (head, arg_ty) = heads[rng.below(heads.len())].clone();
                    let arg = synth_term(rng, sig, consts, ctx, &arg_ty, fuel - 1);
                    return Expr::app(head, arg);
                }
            }
            // β-redex around a recursive synthesis
            2 => {
                if rng.flip() {
                    let aux = gen_ty(rng, 1);
                    let arg = synth_term(rng, sig, consts, ctx, &aux, fuel.saturating_sub(2));
                    ctx.push(aux.clone());
                    let body = synth_term(rng, sig, consts, ctx, ty, fuel - 1);
                    ctx.pop();
                    return Expr::app(Expr::lam("y", aux.to_expr(), body), arg);
                }
            }
            _ => {}
        }
    }

    // base cases
    if !exact_vars.is_empty() && rng.flip() {
        let i = exact_vars[rng.below(exact_vars.len())];
        let index = (ctx.len() - 1 - i) as u32;
        return Expr::var(index, format!("v{i}"));
    }
    if !exact_consts.is_empty() {
        let n = exact_consts[rng.below(exact_consts.len())];
        return Expr::local(sig, n);
    }
    match ty {
        // no head available: build an abstraction or fall back through c0
        Ty::Arrow(a, b) => {
            ctx.push((**a).clone());
            let body = synth_term(rng, sig, consts, ctx, b, 0);
            ctx.pop();
            Expr::lam("x", a.to_expr(), body)
        }
        Ty::O => Expr::local(sig, "c0"),
    }
}

/// A generated scenario: signatures S and T, a total view `v : S -> T`, a
/// user signature U with structures over S, and a batch of well-typed
/// S-expressions.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub source: SourceGraph,
    pub s: GenSig,
    pub t: GenSig,
    pub exprs: Vec<(Expr, Ty)>,
}

pub fn gen_scenario(seed: u64, n_decls: usize, n_exprs: usize) -> Scenario {
    let mut rng = Rng(seed | 1);
    let s = gen_sig(&mut rng, "S", n_decls.clamp(1, 6));
    // T mirrors S's constants (so a total view always exists) plus extras
    let mut t = GenSig {
        name: "T".into(),
        consts: s
            .consts
            .iter()
            .map(|(n, ty)| (format!("m_{n}"), ty.clone()))
            .collect(),
    };
    for i in 0..rng.below(3) {
        t.consts.push((format!("extra{i}"), gen_ty(&mut rng, 2)));
    }

    let mut source = SourceGraph::new();
    source.push_sig(base_sig());
    source.push_sig(s.to_def());
    source.push_sig(t.to_def());

    // view v : S -> T; each assignment is either the mirror constant or a
    // synthesized term of the right type
    let entries: Vec<InstEntry> = s
        .consts
        .iter()
        .map(|(n, ty)| {
            let rhs = if rng.flip() {
                Expr::local("T", &format!("m_{n}"))
            } else {
                synth_term(&mut rng, "T", &t.consts, &mut Vec::new(), ty, 3)
            };
            InstEntry::symbol(n.clone(), rhs)
        })
        .collect();
    source.push_view(ViewDef::new("v", "S", "T", entries));

    // U instantiates S twice: plainly and with a partial instantiation
    let mut partial: Vec<InstEntry> = Vec::new();
    for (n, ty) in &s.consts {
        if rng.flip() {
            continue;
        }
        let rhs = synth_term(
            &mut rng,
            "U",
            &[("u0".into(), Ty::O)],
            &mut Vec::new(),
            ty,
            2,
        );
        partial.push(InstEntry::symbol(n.clone(), rhs));
    }
    source.push_sig(
        SigDef::new("U")
            .include(BASE)
            .constant("u0", Ty::O.to_expr())
            .structure("p", "S", vec![])
            .structure("q", "S", partial),
    );

    let mut exprs = Vec::new();
    for _ in 0..n_exprs {
        let ty = gen_ty(&mut rng, 2);
        let e = synth_term(&mut rng, "S", &s.consts, &mut Vec::new(), &ty, 4);
        exprs.push((e, ty));
    }

    Scenario {
        source,
        s,
        t,
        exprs,
    }
}

/// The morphisms out of S available in a scenario, with the ambient
/// signature each is used from.
pub fn scenario_morphisms() -> Vec<(Morphism, &'static str)> {
    vec![
        (Morphism::view("v"), "T"),
        (Morphism::struct_path("U", "p"), "U"),
        (Morphism::struct_path("U", "q"), "U"),
    ]
}

/// Canonical identifier for an S-symbol.
pub fn s_sym(name: &str) -> Expr {
    Expr::sym(QualifiedId {
        sig: SigRef::new("S"),
        symbol: name.into(),
        via: Morphism::Id,
    })
}
