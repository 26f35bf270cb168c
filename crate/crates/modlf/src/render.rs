//! Compact, dependency-free rendering of expressions for error messages.
//! The full pretty printer (fixities, implicit dropping) lives in
//! [`crate::syntax::print`]; this one is deliberately plain so the kernel
//! can report errors without a fixity table.

use crate::expr::{Arg, Expr, InstEntry, Morphism};

pub fn expr(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(e, false, &mut s);
    s
}

pub fn morphism(m: &Morphism) -> String {
    let mut s = String::new();
    write_morphism(m, &mut s);
    s
}

fn write_expr(e: &Expr, atom: bool, out: &mut String) {
    match e {
        Expr::Type => out.push_str("type"),
        Expr::Hole(_) => out.push('_'),
        Expr::KindArrow(a, k) => {
            wrap(atom, out, |out| {
                write_expr(a, true, out);
                out.push_str(" -> ");
                write_expr(k, false, out);
            });
        }
        Expr::Var(i, h) => {
            out.push_str(h.as_str());
            out.push('/');
            out.push_str(&i.to_string());
        }
        Expr::Sym(qid) => {
            if matches!(qid.via, Morphism::Id | Morphism::Incl) {
                out.push_str(&qid.symbol);
            } else {
                out.push_str(&qid.sig.0);
                out.push('?');
                out.push_str(&qid.symbol);
                out.push('⟨');
                write_morphism(&qid.via, out);
                out.push('⟩');
            }
        }
        Expr::Pi(b) => wrap(atom, out, |out| {
            out.push('{');
            out.push_str(b.hint.as_str());
            out.push_str(" : ");
            write_expr(&b.domain, false, out);
            out.push_str("} ");
            write_expr(&b.body, false, out);
        }),
        Expr::Lam(b) => wrap(atom, out, |out| {
            out.push('[');
            out.push_str(b.hint.as_str());
            out.push_str(" : ");
            write_expr(&b.domain, false, out);
            out.push_str("] ");
            write_expr(&b.body, false, out);
        }),
        Expr::MorPi(b) => wrap(atom, out, |out| {
            out.push('{');
            out.push_str(b.hint.as_str());
            out.push_str(" : ");
            out.push_str(&b.domain.0);
            out.push_str("} ");
            write_expr(&b.body, false, out);
        }),
        Expr::MorLam(b) => wrap(atom, out, |out| {
            out.push('[');
            out.push_str(b.hint.as_str());
            out.push_str(" : ");
            out.push_str(&b.domain.0);
            out.push_str("] ");
            write_expr(&b.body, false, out);
        }),
        Expr::App(..) | Expr::MorApp(..) => wrap(atom, out, |out| {
            let (head, args) = e.spine();
            write_expr(head, true, out);
            for a in args {
                out.push(' ');
                match a {
                    Arg::Term(t) => write_expr(t, true, out),
                    Arg::Mor(m) => {
                        out.push('(');
                        write_morphism(m, out);
                        out.push(')');
                    }
                }
            }
        }),
    }
}

fn wrap(atom: bool, out: &mut String, f: impl FnOnce(&mut String)) {
    if atom {
        out.push('(');
        f(out);
        out.push(')');
    } else {
        f(out);
    }
}

fn write_morphism(m: &Morphism, out: &mut String) {
    match m {
        Morphism::Id => out.push_str("id"),
        Morphism::Incl => out.push_str("incl"),
        Morphism::Struct(sig, s) => {
            out.push_str(&sig.0);
            out.push('?');
            out.push_str(s);
        }
        Morphism::View(v) => out.push_str(v),
        Morphism::Var(i, h) => {
            out.push_str(h.as_str());
            out.push('/');
            out.push_str(&i.to_string());
        }
        Morphism::Anon(a) => {
            out.push('{');
            for (i, e) in a.entries.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                match e {
                    InstEntry::Symbol { name, rhs } => {
                        out.push_str(name);
                        out.push_str(" := ");
                        write_expr(rhs, false, out);
                        out.push('.');
                    }
                    InstEntry::Struct { name, rhs } => {
                        out.push_str("struct ");
                        out.push_str(name);
                        out.push_str(" := ");
                        write_morphism(rhs, out);
                        out.push('.');
                    }
                }
            }
            out.push_str(" : ");
            out.push_str(&a.domain.0);
            out.push_str(" -> ");
            out.push_str(&a.codomain.0);
            out.push('}');
        }
        Morphism::Seq(ms) => {
            for (i, m) in ms.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                write_morphism(m, out);
            }
        }
    }
}
