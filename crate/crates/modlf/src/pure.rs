//! The bundled `Pure` signature: the meta-logic the Isabelle translation
//! targets, with its nested `Type` subsignature. Loaded into every graph.
//!
//! Upper-case argument variables of the printed form are elaborated here to
//! explicit leading Π-bindings; [`implicit_args`] records how many leading
//! arguments the concrete syntax may omit for each constant (`subs` keeps
//! its function argument explicit, following its braces).

use crate::error::Result;
use crate::expr::{build, Expr, SigRef};
use crate::graph::{Assoc, ConstDecl, Fixity, FixityDecl, SigDecl, SigDef, SourceGraph};
use crate::kernel::{check_graph, CheckOptions, CheckedGraph};

pub const PURE: &str = "Pure";
pub const TYPE_SIG: &str = "Pure.Type";

/// Names of all Pure declarations (including the nested `Type`), in order.
pub const PURE_DECLS: [&str; 20] = [
    "tp", "⇛", "tm", "λ", "@", "prop", "⋀", "⟹", "≡", "⊢", "⋀I", "⋀E", "⟹I", "⟹E", "refl",
    "subs", "exten", "beta", "eta", "Type",
];

fn sym(name: &str) -> Expr {
    Expr::local(PURE, name)
}

fn tp() -> Expr {
    sym("tp")
}

fn tm(a: Expr) -> Expr {
    Expr::app(sym("tm"), a)
}

fn fun(a: Expr, b: Expr) -> Expr {
    Expr::apps(sym("⇛"), [a, b])
}

fn prop() -> Expr {
    sym("prop")
}

fn thm(phi: Expr) -> Expr {
    Expr::app(sym("⊢"), phi)
}

fn eq(a: Expr, x: Expr, y: Expr) -> Expr {
    Expr::apps(sym("≡"), [a, x, y])
}

fn imp(a: Expr, b: Expr) -> Expr {
    Expr::apps(sym("⟹"), [a, b])
}

fn obj_lam(a: Expr, b: Expr, f: Expr) -> Expr {
    Expr::apps(sym("λ"), [a, b, f])
}

fn obj_app(a: Expr, b: Expr, f: Expr, x: Expr) -> Expr {
    Expr::apps(sym("@"), [a, b, f, x])
}

fn fixity(fixity: Fixity, assoc: Assoc, prec: u32, symbol: &str) -> SigDecl {
    SigDecl::Fixity(FixityDecl {
        fixity,
        assoc,
        prec,
        symbol: symbol.to_string(),
        span: None,
    })
}

fn decl(name: &str, classifier: Expr) -> SigDecl {
    SigDecl::Const(ConstDecl {
        name: name.to_string(),
        classifier,
        def: None,
        span: None,
    })
}

/// The source definition of the `Pure` signature.
pub fn pure_sig_def() -> SigDef {
    use build::closed;
    let mut body: Vec<SigDecl> = Vec::new();

    body.push(decl("tp", Expr::Type));
    body.push(decl(
        "⇛",
        closed(|s| {
            let t2 = s.arrow(tp(), tp());
            s.arrow(tp(), t2)
        }),
    ));
    body.push(fixity(Fixity::Infix, Assoc::Right, 0, "⇛"));
    body.push(decl("tm", Expr::kind_arrow(tp(), Expr::Type)));
    body.push(fixity(Fixity::Prefix, Assoc::None, 0, "tm"));
    body.push(decl(
        "λ",
        closed(|s| {
            s.pi("A", tp(), |s| {
                s.pi("B", tp(), |s| {
                    let dom = Expr::arrow(tm(s.var("A")), tm(s.var("B")));
                    let cod = tm(fun(s.var("A"), s.var("B")));
                    Expr::arrow(dom, cod)
                })
            })
        }),
    ));
    body.push(decl(
        "@",
        closed(|s| {
            s.pi("A", tp(), |s| {
                s.pi("B", tp(), |s| {
                    let t = Expr::arrow(tm(s.var("A")), tm(s.var("B")));
                    Expr::arrow(tm(fun(s.var("A"), s.var("B"))), t)
                })
            })
        }),
    ));
    body.push(fixity(Fixity::Infix, Assoc::Left, 1000, "@"));
    body.push(decl("prop", tp()));
    body.push(decl(
        "⋀",
        closed(|s| {
            s.pi("A", tp(), |s| {
                Expr::arrow(Expr::arrow(tm(s.var("A")), tm(prop())), tm(prop()))
            })
        }),
    ));
    body.push(decl(
        "⟹",
        Expr::arrow(tm(prop()), Expr::arrow(tm(prop()), tm(prop()))),
    ));
    body.push(fixity(Fixity::Infix, Assoc::Right, 1, "⟹"));
    body.push(decl(
        "≡",
        closed(|s| {
            s.pi("A", tp(), |s| {
                Expr::arrow(tm(s.var("A")), Expr::arrow(tm(s.var("A")), tm(prop())))
            })
        }),
    ));
    body.push(fixity(Fixity::Infix, Assoc::None, 2, "≡"));
    body.push(decl("⊢", Expr::kind_arrow(tm(prop()), Expr::Type)));
    body.push(fixity(Fixity::Prefix, Assoc::None, 0, "⊢"));
    body.push(decl(
        "⋀I",
        closed(|s| {
            s.pi("A", tp(), |s| {
                s.pi("B", Expr::arrow(tm(s.var("A")), tm(prop())), |s| {
                    let premise = s.pi("x", tm(s.var("A")), |s| {
                        thm(Expr::app(s.var("B"), s.var("x")))
                    });
                    let body_lam =
                        s.lam("x", tm(s.var("A")), |s| Expr::app(s.var("B"), s.var("x")));
                    let all = Expr::apps(sym("⋀"), [s.var("A"), body_lam]);
                    Expr::arrow(premise, thm(all))
                })
            })
        }),
    ));
    body.push(decl(
        "⋀E",
        closed(|s| {
            s.pi("A", tp(), |s| {
                s.pi("B", Expr::arrow(tm(s.var("A")), tm(prop())), |s| {
                    let body_lam =
                        s.lam("x", tm(s.var("A")), |s| Expr::app(s.var("B"), s.var("x")));
                    let all = Expr::apps(sym("⋀"), [s.var("A"), body_lam]);
                    let conclusion = s.pi("x", tm(s.var("A")), |s| {
                        thm(Expr::app(s.var("B"), s.var("x")))
                    });
                    Expr::arrow(thm(all), conclusion)
                })
            })
        }),
    ));
    body.push(decl(
        "⟹I",
        closed(|s| {
            s.pi("A", tm(prop()), |s| {
                s.pi("B", tm(prop()), |s| {
                    Expr::arrow(
                        Expr::arrow(thm(s.var("A")), thm(s.var("B"))),
                        thm(imp(s.var("A"), s.var("B"))),
                    )
                })
            })
        }),
    ));
    body.push(decl(
        "⟹E",
        closed(|s| {
            s.pi("A", tm(prop()), |s| {
                s.pi("B", tm(prop()), |s| {
                    Expr::arrow(
                        thm(imp(s.var("A"), s.var("B"))),
                        Expr::arrow(thm(s.var("A")), thm(s.var("B"))),
                    )
                })
            })
        }),
    ));
    body.push(decl(
        "refl",
        closed(|s| {
            s.pi("A", tp(), |s| {
                s.pi("X", tm(s.var("A")), |s| {
                    thm(eq(s.var("A"), s.var("X"), s.var("X")))
                })
            })
        }),
    ));
    body.push(decl(
        "subs",
        closed(|s| {
            s.pi("A", tp(), |s| {
                s.pi("B", tp(), |s| {
                    s.pi("X", tm(s.var("A")), |s| {
                        s.pi("Y", tm(s.var("A")), |s| {
                            s.pi("F", Expr::arrow(tm(s.var("A")), tm(s.var("B"))), |s| {
                                Expr::arrow(
                                    thm(eq(s.var("A"), s.var("X"), s.var("Y"))),
                                    thm(eq(
                                        s.var("B"),
                                        Expr::app(s.var("F"), s.var("X")),
                                        Expr::app(s.var("F"), s.var("Y")),
                                    )),
                                )
                            })
                        })
                    })
                })
            })
        }),
    ));
    body.push(decl(
        "exten",
        closed(|s| {
            s.pi("A", tp(), |s| {
                s.pi("B", tp(), |s| {
                    s.pi("F", Expr::arrow(tm(s.var("A")), tm(s.var("B"))), |s| {
                        s.pi("G", Expr::arrow(tm(s.var("A")), tm(s.var("B"))), |s| {
                            let premise = s.pi("x", tm(s.var("A")), |s| {
                                thm(eq(
                                    s.var("B"),
                                    Expr::app(s.var("F"), s.var("x")),
                                    Expr::app(s.var("G"), s.var("x")),
                                ))
                            });
                            let conclusion = thm(eq(
                                fun(s.var("A"), s.var("B")),
                                obj_lam(s.var("A"), s.var("B"), s.var("F")),
                                obj_lam(s.var("A"), s.var("B"), s.var("G")),
                            ));
                            Expr::arrow(premise, conclusion)
                        })
                    })
                })
            })
        }),
    ));
    body.push(decl(
        "beta",
        closed(|s| {
            s.pi("A", tp(), |s| {
                s.pi("B", tp(), |s| {
                    s.pi("F", Expr::arrow(tm(s.var("A")), tm(s.var("B"))), |s| {
                        s.pi("X", tm(s.var("A")), |s| {
                            let eta_f =
                                s.lam("x", tm(s.var("A")), |s| Expr::app(s.var("F"), s.var("x")));
                            let lam_f = obj_lam(s.var("A"), s.var("B"), eta_f);
                            thm(eq(
                                s.var("B"),
                                obj_app(s.var("A"), s.var("B"), lam_f, s.var("X")),
                                Expr::app(s.var("F"), s.var("X")),
                            ))
                        })
                    })
                })
            })
        }),
    ));
    body.push(decl(
        "eta",
        closed(|s| {
            s.pi("A", tp(), |s| {
                s.pi("B", tp(), |s| {
                    s.pi("F", tm(fun(s.var("A"), s.var("B"))), |s| {
                        let eta_body = s.lam("x", tm(s.var("A")), |s| {
                            obj_app(s.var("A"), s.var("B"), s.var("F"), s.var("x"))
                        });
                        let expanded = obj_lam(s.var("A"), s.var("B"), eta_body);
                        thm(eq(fun(s.var("A"), s.var("B")), expanded, s.var("F")))
                    })
                })
            })
        }),
    ));
    body.push(SigDecl::Nested(SigDef::new("Type").constant(
        "tclass",
        Expr::included(PURE, "tp"),
    )));

    SigDef {
        name: PURE.to_string(),
        body,
        span: None,
    }
}

/// A source graph containing only `Pure`.
pub fn pure_source() -> SourceGraph {
    let mut g = SourceGraph::new();
    g.push_sig(pure_sig_def());
    g
}

/// Load the bundled `Pure` signature into a fresh checked graph.
pub fn load_pure(options: CheckOptions) -> Result<CheckedGraph> {
    check_graph(&pure_source(), options)
}

/// Number of leading implicit arguments of a Pure constant, for the
/// concrete syntax (insertion of inference holes on input, argument
/// dropping on output). Unknown names have no implicits.
pub fn implicit_args(name: &str) -> u32 {
    match name {
        "λ" | "@" => 2,
        "⋀" | "≡" => 1,
        "⋀I" | "⋀E" | "⟹I" | "⟹E" | "refl" => 2,
        "subs" | "exten" | "beta" => 4,
        "eta" => 3,
        _ => 0,
    }
}

/// Reference to Pure's `Type` subsignature.
pub fn type_sig_ref() -> SigRef {
    SigRef::new(TYPE_SIG)
}
