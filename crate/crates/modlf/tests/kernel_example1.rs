//! Kernel behaviour on the order/semlat/lat graph: identifier resolution,
//! structure semantics, morphism application, views, and flattening.
//! Expected values for the structure expansions were derived by hand from
//! the induced-declaration semantics and are frozen here.

mod common;

use common::*;
use modlf::error::KernelError;
use modlf::expr::QualifiedId;
use modlf::flatten::{flatten_morphism, flatten_signature, recheck_flat, undefined_locals};
use modlf::kernel::check_graph;
use modlf::pure::PURE;
use modlf::{
    CheckOptions, Context, Expr, InstEntry, Morphism, SigDef, SigRef, SourceGraph, ViewDef,
};

fn ctx() -> Context {
    Context::new()
}

#[test]
fn example1_graph_checks() {
    example1_graph();
}

#[test]
fn empty_graph_checks() {
    check_graph(&SourceGraph::new(), CheckOptions::default()).unwrap();
}

#[test]
fn duplicate_toplevel_names_rejected() {
    let mut g = SourceGraph::new();
    g.push_sig(SigDef::new("T"));
    g.push_sig(SigDef::new("T"));
    let err = check_graph(&g, CheckOptions::default()).unwrap_err();
    assert!(matches!(err.root(), KernelError::DuplicateName(n) if n == "T"));
}

#[test]
fn check_morphism_id_and_struct_path() {
    let g = example1_graph();
    let (d, c) = g
        .check_morphism(&SigRef::new("semlat"), &ctx(), &Morphism::Id)
        .unwrap();
    // a bare identity is underdetermined without context; in an identifier
    // position it gets endpoint hints, so check it through one instead
    let _ = (d, c);
    let (d, c) = g
        .check_morphism(
            &SigRef::new("semlat"),
            &ctx(),
            &Morphism::struct_path("semlat", "o"),
        )
        .unwrap();
    assert_eq!(d.as_str(), "order");
    assert_eq!(c.as_str(), "semlat");
}

#[test]
fn check_morphism_composition_through_anonymous() {
    let g = example1_graph();
    // i = {tclass := tclass} : Type -> order, composed with semlat?o
    let i = Morphism::anon(
        SigRef::new("Pure.Type"),
        SigRef::new("order"),
        vec![InstEntry::symbol("tclass", tclass_of("order"))],
    );
    let composed = i.then(Morphism::struct_path("semlat", "o"));
    let (d, c) = g
        .check_morphism(&SigRef::new("semlat"), &ctx(), &composed)
        .unwrap();
    assert_eq!(d.as_str(), "Pure.Type");
    assert_eq!(c.as_str(), "semlat");
}

#[test]
fn subclass_view_accepted_and_mismatch_rejected() {
    let mut source = example1_source();
    source.push_view(ViewDef::new(
        "i",
        "Pure.Type",
        "order",
        vec![InstEntry::symbol("tclass", tclass_of("order"))],
    ));
    check_graph(&source, CheckOptions::default()).unwrap();

    // tclass := ≤ is not of type tp
    let mut bad = example1_source();
    bad.push_view(ViewDef::new(
        "j",
        "Pure.Type",
        "order",
        vec![InstEntry::symbol("tclass", Expr::local("order", "≤"))],
    ));
    let err = check_graph(&bad, CheckOptions::default()).unwrap_err();
    assert!(
        matches!(err.root(), KernelError::AssignmentTypeMismatch { symbol, .. } if symbol == "tclass"),
        "unexpected error: {err}"
    );
}

#[test]
fn view_missing_assignment_rejected() {
    let mut bad = example1_source();
    bad.push_view(ViewDef::new("k", "order", "semlat", vec![]));
    let err = check_graph(&bad, CheckOptions::default()).unwrap_err();
    assert!(
        matches!(err.root(), KernelError::MissingAssignment { .. }),
        "unexpected error: {err}"
    );
}

#[test]
fn empty_domain_view_accepted() {
    let mut source = example1_source();
    source.push_sig(SigDef::new("Empty"));
    source.push_view(ViewDef::new("e", "Empty", "order", vec![]));
    check_graph(&source, CheckOptions::default()).unwrap();
}

#[test]
fn apply_identity_is_structural() {
    let g = example1_graph();
    let e = tm(fun(tclass_of("order"), prop()));
    let applied = g
        .apply_morphism(&SigRef::new("order"), &ctx(), &Morphism::Id, &e)
        .unwrap();
    assert_eq!(applied, e);
}

#[test]
fn apply_subclass_coercion_maps_type_tclass() {
    let g = example1_graph();
    let i = Morphism::anon(
        SigRef::new("Pure.Type"),
        SigRef::new("order"),
        vec![InstEntry::symbol("tclass", tclass_of("order"))],
    );
    let type_tclass = Expr::local("Pure.Type", "tclass");
    let applied = g
        .apply_morphism(&SigRef::new("order"), &ctx(), &i, &type_tclass)
        .unwrap();
    assert!(g
        .equal_exprs(&SigRef::new("order"), &ctx(), &applied, &tclass_of("order"))
        .unwrap());
}

#[test]
fn induced_le_normalizes_to_shared_type() {
    // apply semlat?o to order's ≤: classifier normalizes through the shared
    // tclass to tm (tclass ⇛ tclass ⇛ prop)
    let g = example1_graph();
    let le = Expr::sym(QualifiedId {
        sig: SigRef::new("order"),
        symbol: "≤".into(),
        via: Morphism::struct_path("semlat", "o"),
    });
    let result = g.check_expr(&SigRef::new("semlat"), &ctx(), &le).unwrap();
    let expected = tm(fun(tclass_of("semlat"), fun(tclass_of("semlat"), prop())));
    assert!(g
        .equal_exprs(&SigRef::new("semlat"), &ctx(), &result.classifier, &expected)
        .unwrap());
}

#[test]
fn resolve_meet_in_semlat() {
    let g = example1_graph();
    let (classifier, def) = g
        .resolve_identifier(
            &SigRef::new("semlat"),
            &QualifiedId::local("semlat", "⊓"),
        )
        .unwrap();
    let expected = tm(fun(
        tclass_of("semlat"),
        fun(tclass_of("semlat"), tclass_of("semlat")),
    ));
    assert!(g
        .equal_exprs(&SigRef::new("semlat"), &ctx(), &classifier, &expected)
        .unwrap());
    assert!(def.is_none());
}

#[test]
fn resolve_included_prop_in_order() {
    let g = example1_graph();
    let (classifier, def) = g
        .resolve_identifier(&SigRef::new("order"), &QualifiedId::included(PURE, "prop"))
        .unwrap();
    assert!(g
        .equal_exprs(&SigRef::new("order"), &ctx(), &classifier, &tp())
        .unwrap());
    assert!(def.is_none());
}

#[test]
fn resolve_composed_structure_path_in_lat() {
    // order?≤⟨semlat?o lat?inf⟩ is the induced constant inf.o.≤
    let g = example1_graph();
    let composed = Morphism::struct_path("semlat", "o").then(Morphism::struct_path("lat", "inf"));
    let id = QualifiedId {
        sig: SigRef::new("order"),
        symbol: "≤".into(),
        via: composed,
    };
    let (classifier, def) = g.resolve_identifier(&SigRef::new("lat"), &id).unwrap();
    assert!(def.is_none(), "inf.o.≤ is a parameter of lat");
    let expected = tm(fun(inf_tclass(), fun(inf_tclass(), prop())));
    assert!(g
        .equal_exprs(&SigRef::new("lat"), &ctx(), &classifier, &expected)
        .unwrap());
    // and it is the same symbol as lat's flat-local inf.o.≤
    let direct = Expr::sym(QualifiedId::local("lat", "inf.o.≤"));
    assert!(g
        .equal_exprs(&SigRef::new("lat"), &ctx(), &Expr::sym(id), &direct)
        .unwrap());
}

#[test]
fn induced_declarations_of_o_in_semlat() {
    let g = example1_graph();
    let (decls, morphism) = g.induced_declarations(&SigRef::new("semlat"), "o").unwrap();
    assert_eq!(morphism, Morphism::struct_path("semlat", "o"));
    let names: Vec<&str> = decls.iter().map(|d| d.name.as_str()).collect();
    assert_eq!(names, vec!["o.tclass", "o.≤"]);
    // o.tclass : tp = tclass (shared); o.≤ undefined
    assert!(decls[0].def.is_some());
    assert!(g
        .equal_exprs(
            &SigRef::new("semlat"),
            &ctx(),
            decls[0].def.as_ref().unwrap(),
            &tclass_of("semlat"),
        )
        .unwrap());
    assert!(decls[1].def.is_none());
}

#[test]
fn struct_over_empty_signature_induces_nothing() {
    let mut source = example1_source();
    source.push_sig(SigDef::new("Empty"));
    source.push_sig(SigDef::new("User").structure("s", "Empty", vec![]));
    let g = check_graph(&source, CheckOptions::default()).unwrap();
    let (decls, _) = g.induced_declarations(&SigRef::new("User"), "s").unwrap();
    assert!(decls.is_empty());
}

#[test]
fn lat_parameters_match_printed_encoding() {
    // The parameters of lat are inf.tclass, inf.o.≤, inf.⊓, and sup.⊓ —
    // but not sup.≤, which is instantiated.
    let g = example1_graph();
    let lat = g.sig_id(&SigRef::new("lat")).unwrap();
    let undefined: Vec<&str> = g
        .flat_entries(lat)
        .iter()
        .filter(|e| e.def.is_none())
        .map(|e| e.name.as_str())
        .collect();
    assert_eq!(undefined, vec!["inf.tclass", "inf.o.≤", "inf.⊓", "sup.⊓"]);
    let defined: Vec<&str> = g
        .flat_entries(lat)
        .iter()
        .filter(|e| e.def.is_some())
        .map(|e| e.name.as_str())
        .collect();
    assert_eq!(
        defined,
        vec!["inf.o.tclass", "sup.tclass", "sup.o.tclass", "sup.o.≤"]
    );
    // sup.o.tclass unfolds to inf.tclass through the sharing chain
    let sup_o_tclass = Expr::sym(QualifiedId::local("lat", "sup.o.tclass"));
    assert!(g
        .equal_exprs(&SigRef::new("lat"), &ctx(), &sup_o_tclass, &inf_tclass())
        .unwrap());
}

#[test]
fn flatten_semlat_expected_declarations() {
    let g = example1_graph();
    let flat = flatten_signature(&g, &SigRef::new("semlat")).unwrap();
    let locals: Vec<&str> = flat
        .iter()
        .filter(|d| !d.included)
        .map(|d| d.name.as_str())
        .collect();
    assert_eq!(locals, vec!["tclass", "o.tclass", "o.≤", "⊓"]);
    assert_eq!(
        undefined_locals(&flat),
        vec!["tclass".to_string(), "o.≤".to_string(), "⊓".to_string()],
        "3 undefined non-Pure constants"
    );
    recheck_flat(&g, &SigRef::new("semlat"), &flat).expect("flattened semlat must re-check");
}

#[test]
fn flatten_lat_parameter_set() {
    let g = example1_graph();
    let flat = flatten_signature(&g, &SigRef::new("lat")).unwrap();
    assert_eq!(
        undefined_locals(&flat),
        vec![
            "inf.tclass".to_string(),
            "inf.o.≤".to_string(),
            "inf.⊓".to_string(),
            "sup.⊓".to_string(),
        ]
    );
    recheck_flat(&g, &SigRef::new("lat"), &flat).expect("flattened lat must re-check");
}

#[test]
fn flatten_structure_free_signature_is_identity() {
    let g = example1_graph();
    let flat = flatten_signature(&g, &SigRef::new("order")).unwrap();
    let locals: Vec<_> = flat.iter().filter(|d| !d.included).collect();
    assert_eq!(locals.len(), 2);
    assert_eq!(locals[0].name, "tclass");
    assert_eq!(locals[1].name, "≤");
    recheck_flat(&g, &SigRef::new("order"), &flat).unwrap();
}

#[test]
fn flatten_morphism_of_structure_path() {
    let g = example1_graph();
    let o = Morphism::struct_path("semlat", "o");
    let map = flatten_morphism(&g, &SigRef::new("semlat"), &ctx(), &o).unwrap();
    let image = |name: &str| {
        map.iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| e.clone())
            .unwrap()
    };
    // tclass ↦ tclass (through the sharing), ≤ ↦ o.≤
    assert!(g
        .equal_exprs(
            &SigRef::new("semlat"),
            &ctx(),
            &image("tclass"),
            &tclass_of("semlat"),
        )
        .unwrap());
    assert!(g
        .equal_exprs(
            &SigRef::new("semlat"),
            &ctx(),
            &image("≤"),
            &Expr::sym(QualifiedId::local("semlat", "o.≤")),
        )
        .unwrap());
}

#[test]
fn flatten_morphism_of_composition() {
    let g = example1_graph();
    let composed = Morphism::struct_path("semlat", "o").then(Morphism::struct_path("lat", "inf"));
    let map = flatten_morphism(&g, &SigRef::new("lat"), &ctx(), &composed).unwrap();
    let image = |name: &str| {
        map.iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| e.clone())
            .unwrap()
    };
    assert!(g
        .equal_exprs(&SigRef::new("lat"), &ctx(), &image("tclass"), &inf_tclass())
        .unwrap());
    assert!(g
        .equal_exprs(
            &SigRef::new("lat"),
            &ctx(),
            &image("≤"),
            &Expr::sym(QualifiedId::local("lat", "inf.o.≤")),
        )
        .unwrap());
}

#[test]
fn flatten_is_idempotent() {
    let g = example1_graph();
    let flat = flatten_signature(&g, &SigRef::new("lat")).unwrap();
    // register the flat signature and flatten it again
    let mut source = g.to_source();
    source.push_sig(modlf::flatten::flat_to_sig_def(
        "latflat",
        &SigRef::new("lat"),
        &flat,
    ));
    let g2 = check_graph(&source, CheckOptions::default()).unwrap();
    let flat2 = flatten_signature(&g2, &SigRef::new("latflat")).unwrap();
    let names1: Vec<String> = flat.iter().map(|d| d.name.clone()).collect();
    let names2: Vec<String> = flat2
        .iter()
        .filter(|d| !d.included)
        .map(|d| d.name.clone())
        .collect();
    assert_eq!(names1, names2);
}

#[test]
fn include_condition_enforced_for_structures() {
    // a signature that does not include Pure cannot instantiate order
    let mut source = example1_source();
    source.push_sig(SigDef::new("NoPure").structure("s", "order", vec![]));
    let err = check_graph(&source, CheckOptions::default()).unwrap_err();
    assert!(
        matches!(err.root(), KernelError::IncludeConditionViolated { .. }),
        "unexpected error: {err}"
    );
}

#[test]
fn functor_application_composes() {
    let mut source = example1_source();
    source.push_sig(SigDef::new("F0").include(PURE).structure("s", "order", vec![]));
    source.push_view(ViewDef::new(
        "F",
        "order",
        "F0",
        vec![
            InstEntry::symbol("tclass", Expr::local("F0", "s.tclass")),
            InstEntry::symbol("≤", Expr::local("F0", "s.≤")),
        ],
    ));
    let g = check_graph(&source, CheckOptions::default()).unwrap();
    // μ : order -> semlat is semlat?o; F(μ) : order -> semlat
    let mu = Morphism::struct_path("semlat", "o");
    let applied = g
        .functor_apply("F", "s", &SigRef::new("semlat"), &ctx(), &mu)
        .unwrap();
    let (d, c) = g
        .check_morphism(&SigRef::new("semlat"), &ctx(), &applied)
        .unwrap();
    assert_eq!(d.as_str(), "order");
    assert_eq!(c.as_str(), "semlat");
    // F(μ) maps order's tclass to μ(tclass) = semlat's tclass
    let image = g
        .apply_morphism(
            &SigRef::new("semlat"),
            &ctx(),
            &applied,
            &tclass_of("order"),
        )
        .unwrap();
    assert!(g
        .equal_exprs(&SigRef::new("semlat"), &ctx(), &image, &tclass_of("semlat"))
        .unwrap());
}

#[test]
fn functor_over_empty_input() {
    let mut source = example1_source();
    source.push_sig(SigDef::new("E"));
    source.push_sig(SigDef::new("G0").structure("s", "E", vec![]));
    source.push_sig(SigDef::new("D"));
    source.push_view(ViewDef::new("G", "E", "G0", vec![]));
    let g = check_graph(&source, CheckOptions::default()).unwrap();
    let mu = Morphism::anon(SigRef::new("E"), SigRef::new("D"), vec![]);
    let applied = g
        .functor_apply("G", "s", &SigRef::new("D"), &ctx(), &mu)
        .unwrap();
    let (d, c) = g.check_morphism(&SigRef::new("D"), &ctx(), &applied).unwrap();
    assert_eq!(d.as_str(), "E");
    assert_eq!(c.as_str(), "D");
}
