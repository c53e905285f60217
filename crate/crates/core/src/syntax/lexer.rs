//! Tokenizer shared by every textual format.

use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    /// Lower-case identifier: a function symbol or a keyword.
    Ident(String),
    /// Upper-case identifier: a fixed-point variable.
    UIdent(String),
    /// `?name`: a term variable.
    Var(String),
    Nat(usize),
    /// `[]` or `□`.
    Hole,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Lt,
    Gt,
    Comma,
    Dot,
    Semi,
    Plus,
    At,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::UIdent(s) => format!("`{s}`"),
            Tok::Var(s) => format!("`?{s}`"),
            Tok::Nat(n) => format!("`{n}`"),
            Tok::Hole => "`[]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Plus => "`+`".into(),
            Tok::At => "`@`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

/// Splits `src` into tokens. `allow_reserved` admits `#` inside upper-case
/// identifiers, which is how engine-generated variables such as `Z#0` are spelled.
pub(crate) fn tokenize(src: &str, allow_reserved: bool) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, message: String| ParseError {
        line,
        column,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ']' => Some(Tok::RBracket),
            '<' => Some(Tok::Lt),
            '>' => Some(Tok::Gt),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            ';' => Some(Tok::Semi),
            '+' | '⊕' => Some(Tok::Plus),
            '@' => Some(Tok::At),
            '□' => Some(Tok::Hole),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Spanned {
                tok,
                line: tl,
                column: tc,
            });
            advance(1, &mut i, &mut col);
            continue;
        }
        if c == '[' {
            let tok = if chars.get(i + 1) == Some(&']') {
                advance(2, &mut i, &mut col);
                Tok::Hole
            } else {
                advance(1, &mut i, &mut col);
                Tok::LBracket
            };
            out.push(Spanned {
                tok,
                line: tl,
                column: tc,
            });
            continue;
        }
        let ident_end = |start: usize, extra: bool| {
            let mut j = start;
            while j < chars.len()
                && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || (extra && chars[j] == '#'))
            {
                j += 1;
            }
            j
        };
        if c == '?' {
            let j = ident_end(i + 1, false);
            if j == i + 1 || !chars[i + 1].is_ascii_alphabetic() {
                return Err(err(tl, tc, "expected a variable name after `?`".into()));
            }
            let name: String = chars[i + 1..j].iter().collect();
            advance(j - i, &mut i, &mut col);
            out.push(Spanned {
                tok: Tok::Var(name),
                line: tl,
                column: tc,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let text: String = chars[i..j].iter().collect();
            let n = text
                .parse::<usize>()
                .map_err(|_| err(tl, tc, format!("number `{text}` is too large")))?;
            advance(j - i, &mut i, &mut col);
            out.push(Spanned {
                tok: Tok::Nat(n),
                line: tl,
                column: tc,
            });
            continue;
        }
        if c.is_ascii_alphabetic() {
            let upper = c.is_ascii_uppercase();
            let j = ident_end(i, upper);
            let name: String = chars[i..j].iter().collect();
            if upper && name.contains('#') && !allow_reserved {
                return Err(err(
                    tl,
                    tc,
                    format!("`{name}`: `#` is reserved for engine-generated variables"),
                ));
            }
            advance(j - i, &mut i, &mut col);
            out.push(Spanned {
                tok: if upper { Tok::UIdent(name) } else { Tok::Ident(name) },
                line: tl,
                column: tc,
            });
            continue;
        }
        return Err(err(tl, tc, format!("unexpected character `{c}`")));
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}
