//! Shared fixtures: the order/semlat/lat signature graph, built directly
//! against the kernel API with the structure names used in the printed
//! encoding (`o`, `inf`, `sup`).

#![allow(dead_code)]

pub mod gen;

use modlf::expr::QualifiedId;
use modlf::graph::{SigDecl, StructDecl};
use modlf::kernel::check_graph;
use modlf::pure::PURE;
use modlf::{CheckOptions, CheckedGraph, Expr, InstEntry, Morphism, SigDef, SourceGraph};

pub fn tp() -> Expr {
    Expr::included(PURE, "tp")
}

pub fn tm(a: Expr) -> Expr {
    Expr::app(Expr::included(PURE, "tm"), a)
}

pub fn fun(a: Expr, b: Expr) -> Expr {
    Expr::apps(Expr::included(PURE, "⇛"), [a, b])
}

pub fn prop() -> Expr {
    Expr::included(PURE, "prop")
}

pub fn thm(phi: Expr) -> Expr {
    Expr::app(Expr::included(PURE, "⊢"), phi)
}

pub fn eq(a: Expr, x: Expr, y: Expr) -> Expr {
    Expr::apps(Expr::included(PURE, "≡"), [a, x, y])
}

pub fn obj_lam(a: Expr, b: Expr, f: Expr) -> Expr {
    Expr::apps(Expr::included(PURE, "λ"), [a, b, f])
}

pub fn obj_app(a: Expr, b: Expr, f: Expr, x: Expr) -> Expr {
    Expr::apps(Expr::included(PURE, "@"), [a, b, f, x])
}

/// `sig order = { include Pure. tclass : tp. ≤ : tm (tclass ⇛ tclass ⇛ prop). }`
pub fn order_sig() -> SigDef {
    let tclass = Expr::local("order", "tclass");
    SigDef::new("order")
        .include(PURE)
        .constant("tclass", tp())
        .constant("≤", tm(fun(tclass.clone(), fun(tclass, prop()))))
}

/// `sig semlat = { include Pure. tclass : tp. struct o : order = {tclass := tclass}. ⊓ : … }`
pub fn semlat_sig() -> SigDef {
    let tclass = Expr::local("semlat", "tclass");
    SigDef::new("semlat")
        .include(PURE)
        .constant("tclass", tp())
        .structure(
            "o",
            "order",
            vec![InstEntry::symbol("tclass", tclass.clone())],
        )
        .constant("⊓", tm(fun(tclass.clone(), fun(tclass.clone(), tclass))))
}

/// The ordering of the `sup` instance flipped through `inf`:
/// `λ [x] λ [y] inf.o.≤ @ y @ x`, fully explicit.
pub fn sup_le_assignment() -> Expr {
    let a = inf_tclass();
    let le = Expr::sym(QualifiedId {
        sig: modlf::SigRef::new("semlat"),
        symbol: "o.≤".into(),
        via: Morphism::struct_path("lat", "inf"),
    });
    let b = fun(a.clone(), prop());
    let inner = |x: Expr, y: Expr| {
        obj_app(
            a.clone(),
            prop(),
            obj_app(a.clone(), fun(a.clone(), prop()), le.clone(), y),
            x,
        )
    };
    obj_lam(
        a.clone(),
        b,
        Expr::lam(
            "x",
            tm(a.clone()),
            obj_lam(
                a.clone(),
                prop(),
                Expr::lam(
                    "y",
                    tm(a.clone()),
                    inner(Expr::var(1, "x"), Expr::var(0, "y")),
                ),
            ),
        ),
    )
}

pub fn inf_tclass() -> Expr {
    Expr::sym(QualifiedId {
        sig: modlf::SigRef::new("semlat"),
        symbol: "tclass".into(),
        via: Morphism::struct_path("lat", "inf"),
    })
}

/// `sig lat = { include Pure. struct inf : semlat. struct sup : semlat = {…} }`
pub fn lat_sig() -> SigDef {
    SigDef::new("lat")
        .include(PURE)
        .with(SigDecl::Struct(StructDecl {
            name: "inf".into(),
            domain: modlf::SigRef::new("semlat"),
            entries: vec![],
            span: None,
        }))
        .with(SigDecl::Struct(StructDecl {
            name: "sup".into(),
            domain: modlf::SigRef::new("semlat"),
            entries: vec![
                InstEntry::symbol("tclass", inf_tclass()),
                InstEntry::symbol("o.≤", sup_le_assignment()),
            ],
            span: None,
        }))
}

pub fn example1_source() -> SourceGraph {
    let mut g = modlf::pure::pure_source();
    g.push_sig(order_sig());
    g.push_sig(semlat_sig());
    g.push_sig(lat_sig());
    g
}

pub fn example1_graph() -> CheckedGraph {
    check_graph(&example1_source(), CheckOptions::default()).expect("example 1 graph must check")
}

/// Local `tclass` of a class-like signature.
pub fn tclass_of(sig: &str) -> Expr {
    Expr::local(sig, "tclass")
}
