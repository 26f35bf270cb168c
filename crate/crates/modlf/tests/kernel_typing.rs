//! Expression-level checking, equality, and normalization, plus the
//! morphism-variable extension: binding restriction, β/η for morphism
//! application, and elaboration into plain LF.

mod common;

use common::*;
use modlf::error::KernelError;
use modlf::expr::{build, QualifiedId};
use modlf::kernel::check_graph;
use modlf::morvar::{check_mor_binding, elaborate_mor_abstraction, elaborate_signature};
use modlf::pure::PURE;
use modlf::{CheckOptions, Context, Expr, InstEntry, Morphism, SigDef, SigRef, SourceGraph};

fn ctx() -> Context {
    Context::new()
}

fn order_ref() -> SigRef {
    SigRef::new("order")
}

#[test]
fn identity_function_checks() {
    // [x : tm tclass] x  over `order` has type {x : tm tclass} tm tclass
    let g = example1_graph();
    let e = Expr::lam("x", tm(tclass_of("order")), Expr::var(0, "x"));
    let result = g.check_expr(&order_ref(), &ctx(), &e).unwrap();
    let expected = Expr::pi("x", tm(tclass_of("order")), tm(tclass_of("order")));
    assert!(g
        .equal_exprs(&order_ref(), &ctx(), &result.classifier, &expected)
        .unwrap());
}

#[test]
fn le_has_its_declared_type() {
    let g = example1_graph();
    let result = g
        .check_expr(&order_ref(), &ctx(), &Expr::local("order", "≤"))
        .unwrap();
    let expected = tm(fun(tclass_of("order"), fun(tclass_of("order"), prop())));
    assert!(g
        .equal_exprs(&order_ref(), &ctx(), &result.classifier, &expected)
        .unwrap());
}

#[test]
fn beta_step_by_hand() {
    // ([x : tm A] x) ≤  where A = tclass ⇛ tclass ⇛ prop: type tm A, normal
    // form ≤ — the one-step β-reduction done by hand
    let g = example1_graph();
    let a = fun(tclass_of("order"), fun(tclass_of("order"), prop()));
    let le = Expr::local("order", "≤");
    let e = Expr::app(Expr::lam("x", tm(a.clone()), Expr::var(0, "x")), le.clone());
    let result = g.check_expr(&order_ref(), &ctx(), &e).unwrap();
    assert!(g
        .equal_exprs(&order_ref(), &ctx(), &result.classifier, &tm(a))
        .unwrap());
    assert!(g
        .equal_exprs(&order_ref(), &ctx(), &result.normal_form, &le)
        .unwrap());
}

#[test]
fn ill_typed_application_rejected() {
    let g = example1_graph();
    // tclass is not a function
    let e = Expr::app(tclass_of("order"), tclass_of("order"));
    let err = g.check_expr(&order_ref(), &ctx(), &e).unwrap_err();
    assert!(matches!(err.root(), KernelError::NotAFunction { .. }));
}

#[test]
fn unbound_symbol_rejected() {
    let g = example1_graph();
    let e = Expr::local("order", "nonsense");
    let err = g.check_expr(&order_ref(), &ctx(), &e).unwrap_err();
    assert!(matches!(err.root(), KernelError::UnknownSymbol { .. }));
}

#[test]
fn kind_positions_are_rejected_in_check_expr() {
    let g = example1_graph();
    let err = g.check_expr(&order_ref(), &ctx(), &Expr::Type).unwrap_err();
    assert!(matches!(err.root(), KernelError::IllegalKindPosition(_)));
}

#[test]
fn equality_beta_eta_constants() {
    let g = example1_graph();
    let le = Expr::local("order", "≤");
    let a = fun(tclass_of("order"), fun(tclass_of("order"), prop()));
    // (λx. x) ≤ ≡ ≤
    let redex = Expr::app(Expr::lam("x", tm(a.clone()), Expr::var(0, "x")), le.clone());
    assert!(g.equal_exprs(&order_ref(), &ctx(), &redex, &le).unwrap());
    // distinct constants differ
    assert!(!g
        .equal_exprs(&order_ref(), &ctx(), &le, &tclass_of("order"))
        .unwrap());
}

#[test]
fn equality_eta_with_context_variable() {
    // f : tm tclass -> tm tclass ⊢ [x] f x ≡ f
    let g = example1_graph();
    let mut c = Context::new();
    c.push_term(
        "f",
        Expr::arrow(tm(tclass_of("order")), tm(tclass_of("order"))),
    );
    let lhs = Expr::lam(
        "x",
        tm(tclass_of("order")),
        Expr::app(Expr::var(1, "f"), Expr::var(0, "x")),
    );
    let rhs = Expr::var(0, "f");
    assert!(g.equal_exprs(&order_ref(), &c, &lhs, &rhs).unwrap());
}

#[test]
fn equality_is_an_equivalence_on_samples() {
    let g = example1_graph();
    let le = Expr::local("order", "≤");
    let a = fun(tclass_of("order"), fun(tclass_of("order"), prop()));
    let redex = Expr::app(Expr::lam("x", tm(a.clone()), Expr::var(0, "x")), le.clone());
    let exprs = [le.clone(), redex, tclass_of("order"), tm(a)];
    for e in &exprs {
        assert!(g.equal_exprs(&order_ref(), &ctx(), e, e).unwrap(), "refl");
    }
    for e1 in &exprs {
        for e2 in &exprs {
            let ab = g.equal_exprs(&order_ref(), &ctx(), e1, e2).unwrap();
            let ba = g.equal_exprs(&order_ref(), &ctx(), e2, e1).unwrap();
            assert_eq!(ab, ba, "symmetry");
            if ab {
                for e3 in &exprs {
                    let bc = g.equal_exprs(&order_ref(), &ctx(), e2, e3).unwrap();
                    let ac = g.equal_exprs(&order_ref(), &ctx(), e1, e3).unwrap();
                    assert!(!bc || ac, "transitivity");
                }
            }
        }
    }
}

#[test]
fn normalize_unfolds_definitions() {
    // c : tm tclass-arrow = ≤ normalizes to ≤'s normal form
    let mut source = example1_source();
    let a = fun(tclass_of("T"), fun(tclass_of("T"), prop()));
    source.push_sig(
        SigDef::new("T")
            .include(PURE)
            .constant("tclass", tp())
            .constant("le", tm(a.clone()))
            .defined("c", tm(a.clone()), Expr::local("T", "le")),
    );
    let g = check_graph(&source, CheckOptions::default()).unwrap();
    let nf = g
        .normalize(&SigRef::new("T"), &ctx(), &Expr::local("T", "c"))
        .unwrap();
    let nf_le = g
        .normalize(&SigRef::new("T"), &ctx(), &Expr::local("T", "le"))
        .unwrap();
    assert_eq!(nf, nf_le);
}

#[test]
fn normalize_nested_beta() {
    // ([x] [y] y) a b  ~>  b
    let g = example1_graph();
    let t = tm(tclass_of("semlat"));
    // a, b : tm tclass via ⊓ applied? use variables instead
    let mut c = Context::new();
    c.push_term("a", t.clone());
    c.push_term("b", t.clone());
    let e = Expr::apps(
        Expr::lam(
            "x",
            t.clone(),
            Expr::lam("y", t.clone(), Expr::var(0, "y")),
        ),
        [Expr::var(1, "a"), Expr::var(0, "b")],
    );
    let nf = g.normalize(&SigRef::new("semlat"), &c, &e).unwrap();
    assert_eq!(nf, Expr::var(0, "b"));
}

#[test]
fn normalize_is_eta_long() {
    // f : tm tclass -> tm tclass normalizes to [x] f x
    let g = example1_graph();
    let mut c = Context::new();
    c.push_term(
        "f",
        Expr::arrow(tm(tclass_of("order")), tm(tclass_of("order"))),
    );
    let nf = g
        .normalize(&order_ref(), &c, &Expr::var(0, "f"))
        .unwrap();
    let expected = Expr::lam(
        "x",
        tm(tclass_of("order")),
        Expr::app(Expr::var(1, "f"), Expr::var(0, "x")),
    );
    assert_eq!(nf, expected);
}

#[test]
fn eta_long_oracle_first_order_types() {
    // independent η-expansion oracle for first-order types: expand a
    // neutral head at type (t1 -> … -> tn -> base) to its full λ-form,
    // then compare with normalize
    fn eta_expand_oracle(head: Expr, arg_types: &[Expr]) -> Expr {
        let n = arg_types.len() as u32;
        let mut body = modlf::expr::shift_expr(&head, 0, n);
        for (j, _) in arg_types.iter().enumerate() {
            body = Expr::app(body, Expr::var(n - 1 - j as u32, format!("x{j}")));
        }
        let mut out = body;
        for (i, ty) in arg_types.iter().enumerate().rev() {
            // the domain at position i sees i enclosing binders; our types
            // here are closed, so no adjustment is needed
            let _ = i;
            out = Expr::lam("x", ty.clone(), out);
        }
        out
    }
    let g = example1_graph();
    let t = tm(tclass_of("order"));
    let two = Expr::arrow(t.clone(), Expr::arrow(t.clone(), t.clone()));
    let mut c = Context::new();
    c.push_term("g", two.clone());
    let nf = g.normalize(&order_ref(), &c, &Expr::var(0, "g")).unwrap();
    let oracle = eta_expand_oracle(Expr::var(0, "g"), &[t.clone(), t.clone()]);
    assert_eq!(nf, oracle);
}

#[test]
fn normalize_idempotent() {
    let g = example1_graph();
    let le = Expr::sym(QualifiedId {
        sig: order_ref(),
        symbol: "≤".into(),
        via: Morphism::struct_path("semlat", "o"),
    });
    let sl = SigRef::new("semlat");
    let nf = g.normalize(&sl, &ctx(), &le).unwrap();
    let nf2 = g.normalize(&sl, &ctx(), &nf).unwrap();
    assert_eq!(nf, nf2);
}

#[test]
fn subject_reduction_on_samples() {
    let g = example1_graph();
    let a = fun(tclass_of("order"), fun(tclass_of("order"), prop()));
    let le = Expr::local("order", "≤");
    let samples = [
        Expr::app(Expr::lam("x", tm(a.clone()), Expr::var(0, "x")), le.clone()),
        le,
        obj_lam(
            tclass_of("order"),
            prop(),
            Expr::lam("x", tm(tclass_of("order")), {
                // ≤ @ x @ x : tm prop
                let x = Expr::var(0, "x");
                obj_app(
                    tclass_of("order"),
                    prop(),
                    obj_app(
                        tclass_of("order"),
                        fun(tclass_of("order"), prop()),
                        Expr::local("order", "≤"),
                        x.clone(),
                    ),
                    x,
                )
            }),
        ),
    ];
    for e in &samples {
        let r = g.check_expr(&order_ref(), &ctx(), e).unwrap();
        let r2 = g.check_expr(&order_ref(), &ctx(), &r.normal_form).unwrap();
        assert!(g
            .equal_exprs(&order_ref(), &ctx(), &r.classifier, &r2.classifier)
            .unwrap());
    }
}

// ---------------------------------------------------------------------------
// Morphism variables (§3 extension)
// ---------------------------------------------------------------------------

/// `sig Thy = { include Pure. struct ord : order. min : {X : order} tm (X.tclass ⇛ X.tclass ⇛ X.tclass) }`
fn thy_with_min() -> SourceGraph {
    let mut source = example1_source();
    let min_ty = build::closed(|s| {
        s.mor_pi("X", order_ref(), |s| {
            let xt = || {
                Expr::sym(QualifiedId {
                    sig: order_ref(),
                    symbol: "tclass".into(),
                    via: s.mor_var("X"),
                })
            };
            tm(fun(xt(), fun(xt(), xt())))
        })
    });
    source.push_sig(
        SigDef::new("Thy")
            .include(PURE)
            .structure("ord", "order", vec![])
            .constant("min", min_ty),
    );
    source
}

#[test]
fn mor_binding_over_order_accepted() {
    let g = example1_graph();
    let extended =
        check_mor_binding(&g, &order_ref(), &ctx(), "X", &order_ref()).unwrap();
    assert_eq!(extended.len(), 1);
}

#[test]
fn mor_binding_over_pure_rejected() {
    // Pure locally declares the family tp : type
    let g = example1_graph();
    let err = check_mor_binding(&g, &order_ref(), &ctx(), "X", &SigRef::new(PURE)).unwrap_err();
    assert!(
        matches!(err.root(), KernelError::TypeFamilyRestrictionViolated { family, .. } if family == "tp")
    );
}

#[test]
fn mor_binding_over_empty_sig_accepted() {
    let mut source = example1_source();
    source.push_sig(SigDef::new("Empty"));
    let g = check_graph(&source, CheckOptions::default()).unwrap();
    check_mor_binding(&g, &order_ref(), &ctx(), "X", &SigRef::new("Empty")).unwrap();
}

#[test]
fn min_checks_and_applies() {
    let g = check_graph(&thy_with_min(), CheckOptions::default()).unwrap();
    let thy = SigRef::new("Thy");
    // min itself
    g.check_expr(&thy, &ctx(), &Expr::local("Thy", "min")).unwrap();
    // min applied to the ord instance: type instantiates to ord.tclass
    let applied = Expr::mor_app(
        Expr::local("Thy", "min"),
        Morphism::struct_path("Thy", "ord"),
    );
    let result = g.check_expr(&thy, &ctx(), &applied).unwrap();
    let ot = || Expr::local("Thy", "ord.tclass");
    let expected = tm(fun(ot(), fun(ot(), ot())));
    assert!(g
        .equal_exprs(&thy, &ctx(), &result.classifier, &expected)
        .unwrap());
}

#[test]
fn morphism_beta_projects_assignment() {
    // ([X : order] X.tclass) i ≡ ord.tclass for i mapping tclass to ord.tclass
    let g = check_graph(&thy_with_min(), CheckOptions::default()).unwrap();
    let thy = SigRef::new("Thy");
    let body = Expr::sym(QualifiedId {
        sig: order_ref(),
        symbol: "tclass".into(),
        via: Morphism::var(0, "X"),
    });
    let lam = Expr::mor_lam("X", order_ref(), body);
    let i = Morphism::anon(
        order_ref(),
        thy.clone(),
        vec![
            InstEntry::symbol("tclass", Expr::local("Thy", "ord.tclass")),
            InstEntry::symbol("≤", Expr::local("Thy", "ord.≤")),
        ],
    );
    let applied = Expr::mor_app(lam, i);
    assert!(g
        .equal_exprs(&thy, &ctx(), &applied, &Expr::local("Thy", "ord.tclass"))
        .unwrap());
}

#[test]
fn morphism_eta_holds() {
    // [X : order] min X ≡ min
    let g = check_graph(&thy_with_min(), CheckOptions::default()).unwrap();
    let thy = SigRef::new("Thy");
    let min = Expr::local("Thy", "min");
    let expanded = Expr::mor_lam(
        "X",
        order_ref(),
        Expr::mor_app(min.clone(), Morphism::var(0, "X")),
    );
    assert!(g.equal_exprs(&thy, &ctx(), &expanded, &min).unwrap());
}

#[test]
fn extension_disabled_rejects_mor_constructs() {
    let options = CheckOptions {
        morphism_vars: false,
    };
    let err = check_graph(&thy_with_min(), options).unwrap_err();
    assert!(matches!(err.root(), KernelError::MorphismVarsDisabled));
}

#[test]
fn elaborate_mor_lam_telescope() {
    // [X : order] X.tclass elaborates to
    //   [tclass : tp] [≤ : tm (tclass ⇛ tclass ⇛ prop)] tclass
    let g = example1_graph();
    let body = Expr::sym(QualifiedId {
        sig: order_ref(),
        symbol: "tclass".into(),
        via: Morphism::var(0, "X"),
    });
    let lam = Expr::mor_lam("X", order_ref(), body);
    let elaborated = elaborate_mor_abstraction(&g, &order_ref(), &ctx(), &lam).unwrap();
    let expected = Expr::lam(
        "tclass",
        tp(),
        Expr::lam(
            "≤",
            tm(fun(Expr::var(0, "tclass"), fun(Expr::var(0, "tclass"), prop()))),
            Expr::var(1, "tclass"),
        ),
    );
    assert_eq!(elaborated, expected);
}

#[test]
fn elaborate_over_empty_signature_is_identity() {
    let mut source = example1_source();
    source.push_sig(SigDef::new("Empty"));
    let g = check_graph(&source, CheckOptions::default()).unwrap();
    let t = tm(tclass_of("order"));
    let mut c = Context::new();
    c.push_term("a", t.clone());
    let lam = Expr::mor_lam("X", SigRef::new("Empty"), Expr::var(1, "a"));
    let elaborated = elaborate_mor_abstraction(&g, &order_ref(), &c, &lam).unwrap();
    assert_eq!(elaborated, Expr::var(0, "a"));
}

#[test]
fn elaborate_mor_app_spreads_images() {
    // min (Thy?ord) elaborates to min ord.tclass ord.≤ — two plain
    // applications, one per undefined local of order
    let g = check_graph(&thy_with_min(), CheckOptions::default()).unwrap();
    let thy = SigRef::new("Thy");
    let applied = Expr::mor_app(
        Expr::local("Thy", "min"),
        Morphism::struct_path("Thy", "ord"),
    );
    let elaborated = elaborate_mor_abstraction(&g, &thy, &ctx(), &applied).unwrap();
    let (head, args) = elaborated.spine();
    assert_eq!(head, &Expr::local("Thy", "min"));
    assert_eq!(args.len(), 2);
}

#[test]
fn conservativity_on_min_signature() {
    // the elaborated signature checks with the extension disabled, and the
    // elaborated application normalizes consistently with the original
    let g = check_graph(&thy_with_min(), CheckOptions::default()).unwrap();
    let elaborated_sig = elaborate_signature(&g, &SigRef::new("Thy"), "ThyElab").unwrap();
    let mut source = thy_with_min();
    source.push_sig(elaborated_sig);
    // full graph (with both) still checks with the extension on
    let g2 = check_graph(&source, CheckOptions::default()).unwrap();

    // the elaborated min has a Π-telescope of length 2
    let thye = SigRef::new("ThyElab");
    let r = g2
        .check_expr(&thye, &ctx(), &Expr::local("ThyElab", "min"))
        .unwrap();
    let mut pis = 0;
    let mut t = &r.classifier;
    while let Expr::Pi(b) = t {
        pis += 1;
        t = &b.body;
    }
    assert_eq!(pis, 2);

    // elaboration commutes with β: elaborate (min ord) then check; its
    // classifier equals the elaboration of the original classifier
    let applied = Expr::mor_app(
        Expr::local("Thy", "min"),
        Morphism::struct_path("Thy", "ord"),
    );
    let original = g2.check_expr(&SigRef::new("Thy"), &ctx(), &applied).unwrap();
    let elaborated_use = {
        let e = elaborate_mor_abstraction(&g2, &SigRef::new("Thy"), &ctx(), &applied).unwrap();
        modlf::flatten::rename_sig_refs(&e, &SigRef::new("Thy"), "ThyElab")
    };
    let elaborated_result = g2.check_expr(&thye, &ctx(), &elaborated_use).unwrap();
    let expected_classifier = {
        let e =
            elaborate_mor_abstraction(&g2, &SigRef::new("Thy"), &ctx(), &original.classifier)
                .unwrap();
        modlf::flatten::rename_sig_refs(&e, &SigRef::new("Thy"), "ThyElab")
    };
    assert!(g2
        .equal_exprs(
            &thye,
            &ctx(),
            &elaborated_result.classifier,
            &expected_classifier,
        )
        .unwrap());
}

#[test]
fn no_mor_constructs_survive_when_disabled() {
    // plain Example 1 checks fine without the extension
    let options = CheckOptions {
        morphism_vars: false,
    };
    check_graph(&example1_source(), options).unwrap();
}
