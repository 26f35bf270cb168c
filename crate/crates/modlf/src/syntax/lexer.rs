//! Lexer for the LF surface syntax. Identifiers are runs of non-reserved
//! characters and may be dotted (`s.r.c`, `Pure.Type`); a `.` ends the run
//! when not immediately followed by another identifier character, which is
//! how declaration terminators are told apart from qualified names. ASCII
//! aliases are canonicalized at lexing time (`=>` to `⇛`, `==` to `≡`, …).

use crate::graph::Span;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    /// Possibly dotted identifier (segments).
    Ident(Vec<String>),
    Num(u32),
    KwSig,
    KwView,
    KwStruct,
    KwInclude,
    KwType,
    KwId,
    KwIncl,
    PragmaInfix,
    PragmaPrefix,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    LAngle,
    RAngle,
    Colon,
    ColonEq,
    Equals,
    Dot,
    Arrow,
    Question,
    Underscore,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(segs) => format!("identifier `{}`", segs.join(".")),
            Tok::Num(n) => format!("number `{n}`"),
            Tok::KwSig => "`sig`".into(),
            Tok::KwView => "`view`".into(),
            Tok::KwStruct => "`struct`".into(),
            Tok::KwInclude => "`include`".into(),
            Tok::KwType => "`type`".into(),
            Tok::KwId => "`id`".into(),
            Tok::KwIncl => "`incl`".into(),
            Tok::PragmaInfix => "`%infix`".into(),
            Tok::PragmaPrefix => "`%prefix`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LAngle => "`⟨`".into(),
            Tok::RAngle => "`⟩`".into(),
            Tok::Colon => "`:`".into(),
            Tok::ColonEq => "`:=`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Question => "`?`".into(),
            Tok::Underscore => "`_`".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Lexed {
    pub tok: Tok,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub struct LexError {
    pub span: Span,
    pub message: String,
}

const RESERVED: &[char] = &[
    '{', '}', '[', ']', '(', ')', ':', '.', '?', '⟨', '⟩', '<', '>', ',', '%', '"',
];

fn ident_char(c: char) -> bool {
    !c.is_whitespace() && !RESERVED.contains(&c)
}

/// ASCII alias table (LF side). Unicode forms are canonical.
fn canonicalize(s: &str) -> &str {
    match s {
        "=>" => "⇛",
        "==>" => "⟹",
        "==" => "≡",
        "!!" => "⋀",
        "|-" => "⊢",
        "lam" => "λ",
        other => other,
    }
}

pub fn lex(input: &str) -> Result<Vec<Lexed>, LexError> {
    let mut out = Vec::new();
    let chars: Vec<char> = input.chars().collect();
    let mut i = 0usize;
    let mut line = 1u32;
    let mut col = 1u32;

    let n = chars.len();
    while i < n {
        let c = chars[i];
        let span = Span::new(line, col);
        let mut advance = |i: &mut usize, line: &mut u32, col: &mut u32, by: usize| {
            for k in 0..by {
                if chars[*i + k] == '\n' {
                    *line += 1;
                    *col = 1;
                } else {
                    *col += 1;
                }
            }
            *i += by;
        };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        if c == '%' {
            // pragma or comment
            let rest: String = chars[i..].iter().take(8).collect();
            if rest.starts_with("%infix") {
                out.push(Lexed {
                    tok: Tok::PragmaInfix,
                    span,
                });
                advance(&mut i, &mut line, &mut col, 6);
                continue;
            }
            if rest.starts_with("%prefix") {
                out.push(Lexed {
                    tok: Tok::PragmaPrefix,
                    span,
                });
                advance(&mut i, &mut line, &mut col, 7);
                continue;
            }
            // line comment
            while i < n && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
            continue;
        }
        if c == '-' && i + 1 < n && chars[i + 1] == '>' {
            out.push(Lexed {
                tok: Tok::Arrow,
                span,
            });
            advance(&mut i, &mut line, &mut col, 2);
            continue;
        }
        let single = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '⟨' | '<' => Some(Tok::LAngle),
            '⟩' | '>' => Some(Tok::RAngle),
            '?' => Some(Tok::Question),
            '.' => Some(Tok::Dot),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Lexed { tok, span });
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        if c == ':' {
            if i + 1 < n && chars[i + 1] == '=' {
                out.push(Lexed {
                    tok: Tok::ColonEq,
                    span,
                });
                advance(&mut i, &mut line, &mut col, 2);
            } else {
                out.push(Lexed {
                    tok: Tok::Colon,
                    span,
                });
                advance(&mut i, &mut line, &mut col, 1);
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut j = i;
            while j < n && chars[j].is_ascii_digit() {
                j += 1;
            }
            // a digit run followed by ident chars is an identifier (x1)
            if j < n && ident_char(chars[j]) {
                // fall through to identifier lexing below
            } else {
                let text: String = chars[i..j].iter().collect();
                let value: u32 = text.parse().map_err(|_| LexError {
                    span,
                    message: format!("number out of range: {text}"),
                })?;
                out.push(Lexed {
                    tok: Tok::Num(value),
                    span,
                });
                advance(&mut i, &mut line, &mut col, j - i);
                continue;
            }
        }
        if ident_char(c) {
            // identifier run; dots join segments when followed by another
            // identifier character
            let mut segments: Vec<String> = Vec::new();
            let mut current = String::new();
            let mut j = i;
            loop {
                while j < n && ident_char(chars[j]) {
                    current.push(chars[j]);
                    j += 1;
                }
                if j + 1 < n && chars[j] == '.' && ident_char(chars[j + 1]) && !current.is_empty()
                {
                    segments.push(std::mem::take(&mut current));
                    j += 1; // consume the dot
                    continue;
                }
                break;
            }
            if current.is_empty() {
                return Err(LexError {
                    span,
                    message: format!("unexpected character `{c}`"),
                });
            }
            segments.push(current);
            let raw_len: usize = segments.iter().map(|s| s.chars().count()).sum::<usize>()
                + segments.len()
                - 1;
            // canonicalize aliases segment-wise; whole-token special forms
            let segments: Vec<String> = segments
                .into_iter()
                .map(|s| canonicalize(&s).to_string())
                .collect();
            let tok = if segments.len() == 1 {
                match segments[0].as_str() {
                    "sig" => Tok::KwSig,
                    "view" => Tok::KwView,
                    "struct" => Tok::KwStruct,
                    "include" => Tok::KwInclude,
                    "type" => Tok::KwType,
                    "id" => Tok::KwId,
                    "incl" => Tok::KwIncl,
                    "→" => Tok::Arrow,
                    "=" => Tok::Equals,
                    "_" => Tok::Underscore,
                    _ => Tok::Ident(segments),
                }
            } else {
                Tok::Ident(segments)
            };
            out.push(Lexed { tok, span });
            advance(&mut i, &mut line, &mut col, raw_len);
            continue;
        }
        return Err(LexError {
            span,
            message: format!("unexpected character `{c}`"),
        });
    }
    Ok(out)
}
