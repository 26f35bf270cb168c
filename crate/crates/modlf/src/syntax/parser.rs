//! Recursive-descent parser for the LF surface syntax, with a Pratt
//! expression parser driven by the fixity table. The table grows as
//! `%infix`/`%prefix` pragmas are parsed, so operators are usable after
//! their pragma within the same run.

use std::collections::HashMap;

use crate::graph::{Assoc, Fixity, Span};

use super::ast::{SDecl, SExpr, SGraph, SInst, SName};
use super::lexer::{lex, Lexed, Tok};
use super::ParseError;

#[derive(Clone, Copy, Debug)]
pub struct OpInfo {
    pub fixity: Fixity,
    pub assoc: Assoc,
    pub prec: u32,
}

/// Operator table, shared between parser and printer.
#[derive(Clone, Debug, Default)]
pub struct OpTable {
    pub ops: HashMap<String, OpInfo>,
}

impl OpTable {
    pub fn from_fixities<'a>(
        fixities: impl IntoIterator<Item = &'a crate::graph::FixityDecl>,
    ) -> OpTable {
        let mut t = OpTable::default();
        for f in fixities {
            t.ops.insert(
                f.symbol.clone(),
                OpInfo {
                    fixity: f.fixity,
                    assoc: f.assoc,
                    prec: f.prec,
                },
            );
        }
        t
    }
}

const BP_ARROW: i64 = -1;
const BP_APP: i64 = 1_000_000;

pub struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
    pub ops: OpTable,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    pub fn new(input: &str, ops: OpTable) -> PResult<Parser> {
        let toks = lex(input).map_err(|e| ParseError {
            span: e.span,
            message: e.message,
        })?;
        Ok(Parser { toks, pos: 0, ops })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|l| &l.tok)
    }

    fn span(&self) -> Span {
        self.toks
            .get(self.pos)
            .map(|l| l.span)
            .unwrap_or_else(|| {
                self.toks
                    .last()
                    .map(|l| l.span)
                    .unwrap_or_default()
            })
    }

    fn bump(&mut self) -> Option<Lexed> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: &Tok) -> PResult<Span> {
        match self.toks.get(self.pos) {
            Some(l) if &l.tok == tok => {
                let span = l.span;
                self.pos += 1;
                Ok(span)
            }
            Some(l) => Err(ParseError {
                span: l.span,
                message: format!("expected {}, found {}", tok.describe(), l.tok.describe()),
            }),
            None => Err(ParseError {
                span: self.span(),
                message: format!("expected {}, found end of input", tok.describe()),
            }),
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError {
            span: self.span(),
            message: message.into(),
        })
    }

    fn name(&mut self) -> PResult<SName> {
        match self.bump() {
            Some(Lexed {
                tok: Tok::Ident(segments),
                span,
            }) => Ok(SName { segments, span }),
            Some(l) => Err(ParseError {
                span: l.span,
                message: format!("expected a name, found {}", l.tok.describe()),
            }),
            None => self.err("expected a name, found end of input"),
        }
    }

    fn simple_name(&mut self) -> PResult<(String, Span)> {
        let n = self.name()?;
        if n.segments.len() != 1 {
            return Err(ParseError {
                span: n.span,
                message: format!("expected an unqualified name, found `{}`", n.joined()),
            });
        }
        Ok((n.segments.into_iter().next().unwrap(), n.span))
    }

    // -- toplevel -----------------------------------------------------------

    pub fn graph(&mut self) -> PResult<SGraph> {
        let mut decls = Vec::new();
        while self.peek().is_some() {
            decls.push(self.toplevel_decl()?);
        }
        Ok(SGraph { decls })
    }

    fn toplevel_decl(&mut self) -> PResult<SDecl> {
        match self.peek() {
            Some(Tok::KwSig) => self.sig_decl(),
            Some(Tok::KwView) => self.view_decl(),
            _ => self.err("expected `sig` or `view`"),
        }
    }

    fn sig_decl(&mut self) -> PResult<SDecl> {
        let span = self.expect(&Tok::KwSig)?;
        let (name, _) = self.simple_name()?;
        self.expect(&Tok::Equals)?;
        self.expect(&Tok::LBrace)?;
        let mut body = Vec::new();
        while !matches!(self.peek(), Some(Tok::RBrace)) {
            body.push(self.sig_body_decl()?);
        }
        self.expect(&Tok::RBrace)?;
        self.expect(&Tok::Dot)?;
        Ok(SDecl::Sig { name, body, span })
    }

    fn view_decl(&mut self) -> PResult<SDecl> {
        let span = self.expect(&Tok::KwView)?;
        let (name, _) = self.simple_name()?;
        self.expect(&Tok::Colon)?;
        let domain = self.name()?;
        self.expect(&Tok::Arrow)?;
        let codomain = self.name()?;
        self.expect(&Tok::Equals)?;
        self.expect(&Tok::LBrace)?;
        let entries = self.inst_list()?;
        self.expect(&Tok::RBrace)?;
        self.expect(&Tok::Dot)?;
        Ok(SDecl::View {
            name,
            domain,
            codomain,
            entries,
            span,
        })
    }

    fn sig_body_decl(&mut self) -> PResult<SDecl> {
        match self.peek() {
            Some(Tok::KwInclude) => {
                let span = self.expect(&Tok::KwInclude)?;
                let name = self.name()?;
                self.expect(&Tok::Dot)?;
                Ok(SDecl::Include { name, span })
            }
            Some(Tok::KwSig) => self.sig_decl(),
            Some(Tok::KwStruct) => {
                let span = self.expect(&Tok::KwStruct)?;
                let (name, _) = self.simple_name()?;
                self.expect(&Tok::Colon)?;
                let domain = self.name()?;
                let entries = if matches!(self.peek(), Some(Tok::Equals)) {
                    self.bump();
                    self.expect(&Tok::LBrace)?;
                    let e = self.inst_list()?;
                    self.expect(&Tok::RBrace)?;
                    e
                } else {
                    Vec::new()
                };
                self.expect(&Tok::Dot)?;
                Ok(SDecl::Struct {
                    name,
                    domain,
                    entries,
                    span,
                })
            }
            Some(Tok::PragmaInfix) => {
                let span = self.expect(&Tok::PragmaInfix)?;
                let (assoc_name, aspan) = self.simple_name()?;
                let assoc = match assoc_name.as_str() {
                    "left" => Assoc::Left,
                    "right" => Assoc::Right,
                    "none" => Assoc::None,
                    other => {
                        return Err(ParseError {
                            span: aspan,
                            message: format!(
                                "expected `left`, `right`, or `none`, found `{other}`"
                            ),
                        })
                    }
                };
                let prec = self.number()?;
                let (symbol, _) = self.simple_name()?;
                self.expect(&Tok::Dot)?;
                self.ops.ops.insert(
                    symbol.clone(),
                    OpInfo {
                        fixity: Fixity::Infix,
                        assoc,
                        prec,
                    },
                );
                Ok(SDecl::Fixity {
                    fixity: Fixity::Infix,
                    assoc,
                    prec,
                    symbol,
                    span,
                })
            }
            Some(Tok::PragmaPrefix) => {
                let span = self.expect(&Tok::PragmaPrefix)?;
                let prec = self.number()?;
                let (symbol, _) = self.simple_name()?;
                self.expect(&Tok::Dot)?;
                self.ops.ops.insert(
                    symbol.clone(),
                    OpInfo {
                        fixity: Fixity::Prefix,
                        assoc: Assoc::None,
                        prec,
                    },
                );
                Ok(SDecl::Fixity {
                    fixity: Fixity::Prefix,
                    assoc: Assoc::None,
                    prec,
                    symbol,
                    span,
                })
            }
            Some(Tok::Ident(_)) => {
                let name = self.name()?;
                if name.segments.len() != 1 {
                    // dotted declaration names occur in flattened output
                }
                let span = name.span;
                self.expect(&Tok::Colon)?;
                let classifier = self.expr(BP_ARROW)?;
                let def = if matches!(self.peek(), Some(Tok::Equals)) {
                    self.bump();
                    Some(self.expr(BP_ARROW)?)
                } else {
                    None
                };
                self.expect(&Tok::Dot)?;
                Ok(SDecl::Const {
                    name: name.joined(),
                    classifier,
                    def,
                    span,
                })
            }
            Some(other) => {
                let other = other.describe();
                self.err(format!("expected a declaration, found {other}"))
            }
            None => self.err("unexpected end of input inside a signature body"),
        }
    }

    fn number(&mut self) -> PResult<u32> {
        match self.bump() {
            Some(Lexed {
                tok: Tok::Num(n), ..
            }) => Ok(n),
            Some(l) => Err(ParseError {
                span: l.span,
                message: format!("expected a number, found {}", l.tok.describe()),
            }),
            None => self.err("expected a number, found end of input"),
        }
    }

    fn inst_list(&mut self) -> PResult<Vec<SInst>> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::RBrace) | Some(Tok::Colon) | None => break,
                Some(Tok::KwStruct) => {
                    self.bump();
                    let name = self.name()?;
                    self.expect(&Tok::ColonEq)?;
                    let rhs = self.expr(BP_ARROW)?;
                    self.expect(&Tok::Dot)?;
                    out.push(SInst::Struct { name, rhs });
                }
                Some(Tok::Ident(_)) => {
                    let name = self.name()?;
                    self.expect(&Tok::ColonEq)?;
                    let rhs = self.expr(BP_ARROW)?;
                    self.expect(&Tok::Dot)?;
                    out.push(SInst::Symbol { name, rhs });
                }
                Some(other) => {
                    let d = other.describe();
                    return self.err(format!("expected an instantiation, found {d}"));
                }
            }
        }
        Ok(out)
    }

    // -- expressions --------------------------------------------------------

    /// Pratt parser: `min_bp` is exclusive (operators bind only when their
    /// precedence is strictly greater).
    pub fn expr(&mut self, min_bp: i64) -> PResult<SExpr> {
        let mut lhs = self.expr_prefix()?;
        loop {
            match self.peek() {
                Some(Tok::Arrow) => {
                    if BP_ARROW <= min_bp {
                        break;
                    }
                    self.bump();
                    // right associative: parse at one below its own level
                    let rhs = self.expr(BP_ARROW - 1)?;
                    lhs = SExpr::Arrow(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Ident(segments)) if segments.len() == 1 => {
                    let op = segments[0].clone();
                    if let Some(info) = self.ops.ops.get(&op).copied() {
                        if info.fixity == Fixity::Infix {
                            let lbp = info.prec as i64;
                            if lbp <= min_bp {
                                break;
                            }
                            let op_span = self.span();
                            self.bump();
                            let rbp = match info.assoc {
                                Assoc::Right => lbp - 1,
                                Assoc::Left | Assoc::None => lbp,
                            };
                            let rhs = self.expr(rbp)?;
                            if info.assoc == Assoc::None {
                                // reject chained non-associative operators
                                if let Some(Tok::Ident(next)) = self.peek() {
                                    if next.len() == 1 && next[0] == op {
                                        return Err(ParseError {
                                            span: self.span(),
                                            message: format!(
                                                "operator `{op}` is not associative"
                                            ),
                                        });
                                    }
                                }
                            }
                            let opname = SExpr::Name(SName {
                                segments: vec![op],
                                span: op_span,
                            });
                            lhs = SExpr::App(
                                Box::new(SExpr::App(Box::new(opname), Box::new(lhs))),
                                Box::new(rhs),
                            );
                            continue;
                        }
                    }
                    // plain application
                    if BP_APP <= min_bp {
                        break;
                    }
                    let arg = self.expr_atom()?;
                    lhs = SExpr::App(Box::new(lhs), Box::new(arg));
                }
                Some(tok) if Self::starts_atom(tok) => {
                    if BP_APP <= min_bp {
                        break;
                    }
                    let arg = self.expr_atom()?;
                    lhs = SExpr::App(Box::new(lhs), Box::new(arg));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn starts_atom(tok: &Tok) -> bool {
        matches!(
            tok,
            Tok::Ident(_)
                | Tok::LParen
                | Tok::LBrace
                | Tok::LBracket
                | Tok::KwType
                | Tok::KwId
                | Tok::KwIncl
                | Tok::Underscore
        )
    }

    /// A prefix position: binders, prefix operators, atoms.
    fn expr_prefix(&mut self) -> PResult<SExpr> {
        if let Some(Tok::Ident(segments)) = self.peek() {
            if segments.len() == 1 {
                let name = segments[0].clone();
                if let Some(info) = self.ops.ops.get(&name).copied() {
                    if info.fixity == Fixity::Prefix {
                        let span = self.span();
                        self.bump();
                        let arg = self.expr(info.prec as i64)?;
                        let head = SExpr::Name(SName {
                            segments: vec![name],
                            span,
                        });
                        return Ok(SExpr::App(Box::new(head), Box::new(arg)));
                    }
                }
            }
        }
        self.expr_atom()
    }

    fn expr_atom(&mut self) -> PResult<SExpr> {
        let span = self.span();
        match self.peek() {
            Some(Tok::KwType) => {
                self.bump();
                Ok(SExpr::TypeKw(span))
            }
            Some(Tok::Underscore) => {
                self.bump();
                Ok(SExpr::Hole(span))
            }
            Some(Tok::KwId) => {
                self.bump();
                Ok(SExpr::IdMor(span))
            }
            Some(Tok::KwIncl) => {
                self.bump();
                Ok(SExpr::InclMor(span))
            }
            Some(Tok::LParen) => {
                self.bump();
                let e = self.expr(BP_ARROW - 1)?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::LBracket) => {
                self.bump();
                let (var, _) = self.simple_name_or_underscore()?;
                self.expect(&Tok::Colon)?;
                let annot = self.expr(BP_ARROW - 1)?;
                self.expect(&Tok::RBracket)?;
                let body = self.expr(BP_ARROW - 1)?;
                Ok(SExpr::Lam {
                    var,
                    annot: Box::new(annot),
                    body: Box::new(body),
                    span,
                })
            }
            Some(Tok::LBrace) => {
                self.bump();
                // `{x : A} B` binder vs `{σ : S -> T}` anonymous morphism:
                // a binder has IDENT `:`; an anonymous morphism starts with
                // `:`, `struct`, or IDENT `:=`
                let is_binder = match (self.peek(), self.peek2()) {
                    (Some(Tok::Ident(_)), Some(Tok::Colon)) => true,
                    (Some(Tok::Underscore), Some(Tok::Colon)) => true,
                    _ => false,
                };
                if is_binder {
                    let (var, _) = self.simple_name_or_underscore()?;
                    self.expect(&Tok::Colon)?;
                    let annot = self.expr(BP_ARROW - 1)?;
                    self.expect(&Tok::RBrace)?;
                    let body = self.expr(BP_ARROW - 1)?;
                    Ok(SExpr::Pi {
                        var,
                        annot: Box::new(annot),
                        body: Box::new(body),
                        span,
                    })
                } else {
                    let entries = self.inst_list()?;
                    self.expect(&Tok::Colon)?;
                    let domain = self.name()?;
                    self.expect(&Tok::Arrow)?;
                    let codomain = self.name()?;
                    self.expect(&Tok::RBrace)?;
                    Ok(SExpr::Anon {
                        entries,
                        domain,
                        codomain,
                        span,
                    })
                }
            }
            Some(Tok::Ident(_)) => {
                let name = self.name()?;
                if matches!(self.peek(), Some(Tok::Question)) {
                    self.bump();
                    let symbol = self.name()?;
                    let via = if matches!(self.peek(), Some(Tok::LAngle)) {
                        self.bump();
                        let m = self.expr(BP_ARROW - 1)?;
                        self.expect(&Tok::RAngle)?;
                        Some(Box::new(m))
                    } else {
                        None
                    };
                    Ok(SExpr::Qualified {
                        sig: name,
                        symbol,
                        via,
                        span,
                    })
                } else {
                    Ok(SExpr::Name(name))
                }
            }
            Some(other) => {
                let d = other.describe();
                self.err(format!("expected an expression, found {d}"))
            }
            None => self.err("expected an expression, found end of input"),
        }
    }

    fn simple_name_or_underscore(&mut self) -> PResult<(String, Span)> {
        if matches!(self.peek(), Some(Tok::Underscore)) {
            let span = self.span();
            self.bump();
            return Ok((String::new(), span));
        }
        self.simple_name()
    }
}

/// Parse a source file into the surface AST, starting from the given
/// operator table (the bundled Pure fixities, usually).
pub fn parse_graph(input: &str, ops: OpTable) -> Result<(SGraph, OpTable), ParseError> {
    let mut p = Parser::new(input, ops)?;
    let g = p.graph()?;
    Ok((g, p.ops))
}

/// Parse a standalone expression (tests, diagnostics).
pub fn parse_expr(input: &str, ops: OpTable) -> Result<SExpr, ParseError> {
    let mut p = Parser::new(input, ops)?;
    let e = p.expr(i64::MIN)?;
    if p.peek().is_some() {
        return Err(ParseError {
            span: p.span(),
            message: "trailing input after expression".into(),
        });
    }
    Ok(e)
}
