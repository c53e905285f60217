//! Concrete syntax for terms, contexts, positions, strategies and
//! position-based strategies.
//!
//! ```text
//! term     := "?" ident | ident | ident "(" term ("," term)* ")"
//! context  := a term with exactly one "[]"
//! position := "eps" | nat ("." nat)*
//! strat    := unary ("+" unary)*
//! unary    := "mu" UIdent "." strat | "if" strat "then" strat
//!           | term ";" unary | "@" position "." unary | atom
//! atom     := "fail" | UIdent | "ins" "<" context ">" | "most" "(" strat ")"
//!           | "[" "@" position "." strat ("," "@" position "." strat)* "]"
//!           | "(" strat ")"
//! posce    := "fail" | "[" "@" position "." "<" context ">" ("," …)* "]"
//! ```
//!
//! Function symbols are lower-case, fixed-point variables upper-case and term
//! variables carry a `?` prefix. `@p.S` with a multi-index `p` is sugar for
//! nested single-index jumps.

mod lexer;

use lexer::{tokenize, Spanned, Tok};

use crate::error::ParseError;
use crate::pos::PosCe;
use crate::strategy::{Entry, Index, Strategy};
use crate::term::{Context, Frame, Name, Position, Signature, Term};

const KEYWORDS: &[&str] = &["fail", "ins", "mu", "most", "if", "then", "eps"];

/// Term-shaped tree that may contain holes.
enum Raw {
    Var(Name),
    App(Name, Vec<Raw>),
    Hole,
}

impl Raw {
    fn holes(&self) -> usize {
        match self {
            Raw::Hole => 1,
            Raw::Var(_) => 0,
            Raw::App(_, args) => args.iter().map(Raw::holes).sum(),
        }
    }

    fn into_term(self) -> Term {
        match self {
            Raw::Var(x) => Term::Var(x),
            Raw::App(f, args) => Term::App(f, args.into_iter().map(Raw::into_term).collect()),
            Raw::Hole => unreachable!("callers check for holes first"),
        }
    }

    fn into_context(self) -> Context {
        let mut frames = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Raw::Hole => break,
                Raw::Var(_) => unreachable!("callers check for exactly one hole"),
                Raw::App(f, args) => {
                    let k = args.iter().position(|a| a.holes() == 1).expect("one hole");
                    let mut left = Vec::new();
                    let mut right = Vec::new();
                    let mut next = None;
                    for (j, a) in args.into_iter().enumerate() {
                        match j.cmp(&k) {
                            std::cmp::Ordering::Less => left.push(a.into_term()),
                            std::cmp::Ordering::Equal => next = Some(a),
                            std::cmp::Ordering::Greater => right.push(a.into_term()),
                        }
                    }
                    frames.push(Frame {
                        symbol: f,
                        left,
                        right,
                    });
                    cur = next.expect("hole child");
                }
            }
        }
        Context::from_frames(frames)
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn new(src: &str, lenient: bool) -> PResult<Parser> {
        Ok(Parser {
            toks: tokenize(src, lenient)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            column: s.column,
            message: message.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        self.error_here(format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<()> {
        if self.is_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    /// Consumes a `,` (returning true) or the closing token (returning false).
    fn separator(&mut self, close: Tok) -> PResult<bool> {
        if *self.peek() == Tok::Comma {
            self.bump();
            Ok(true)
        } else if *self.peek() == close {
            self.bump();
            Ok(false)
        } else {
            Err(self.unexpected(&format!("`,` or {}", close.describe())))
        }
    }

    fn finish(&self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    fn raw(&mut self, in_strategy: bool) -> PResult<Raw> {
        match self.peek().clone() {
            Tok::Var(x) => {
                self.bump();
                Ok(Raw::Var(Name::from(x.as_str())))
            }
            Tok::Hole => {
                self.bump();
                Ok(Raw::Hole)
            }
            Tok::Ident(f) => {
                if in_strategy && KEYWORDS.contains(&f.as_str()) {
                    return Err(self.error_here(format!("keyword `{f}` cannot be a function symbol here")));
                }
                self.bump();
                let mut args = Vec::new();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    loop {
                        args.push(self.raw(in_strategy)?);
                        if !self.separator(Tok::RParen)? {
                            break;
                        }
                    }
                }
                Ok(Raw::App(Name::from(f.as_str()), args))
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    fn term(&mut self, in_strategy: bool) -> PResult<Term> {
        let start = self.pos;
        let r = self.raw(in_strategy)?;
        if r.holes() > 0 {
            self.pos = start;
            return Err(self.error_here("a term cannot contain a hole `[]`"));
        }
        Ok(r.into_term())
    }

    fn context(&mut self, in_strategy: bool) -> PResult<Context> {
        let start = self.pos;
        let r = self.raw(in_strategy)?;
        let n = r.holes();
        if n != 1 {
            self.pos = start;
            return Err(self.error_here(format!("a context needs exactly one hole `[]`, found {n}")));
        }
        Ok(r.into_context())
    }

    fn position(&mut self) -> PResult<Position> {
        if self.is_keyword("eps") {
            self.bump();
            return Ok(Position::root());
        }
        let mut idx = Vec::new();
        loop {
            match self.peek() {
                Tok::Nat(0) => return Err(self.error_here("position indices start at 1")),
                Tok::Nat(n) => {
                    idx.push(*n);
                    self.bump();
                }
                _ => return Err(self.unexpected("a position")),
            }
            if *self.peek() == Tok::Dot && matches!(self.peek_at(1), Tok::Nat(_)) {
                self.bump();
            } else {
                break;
            }
        }
        Ok(Position::new(idx).expect("indices checked"))
    }

    fn strategy(&mut self) -> PResult<Strategy> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let rhs = self.unary()?;
            acc = Strategy::choice(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> PResult<Strategy> {
        match self.peek().clone() {
            Tok::Ident(k) if k == "mu" => {
                self.bump();
                let Tok::UIdent(x) = self.peek().clone() else {
                    return Err(self.unexpected("an upper-case fixed-point variable"));
                };
                self.bump();
                self.expect(Tok::Dot)?;
                let body = self.strategy()?;
                Ok(Strategy::mu(&x, body))
            }
            Tok::Ident(k) if k == "if" => {
                self.bump();
                let cond = self.strategy()?;
                self.expect_keyword("then")?;
                let body = self.strategy()?;
                Ok(Strategy::if_then(cond, body))
            }
            Tok::At => {
                self.bump();
                let p = self.position()?;
                self.expect(Tok::Dot)?;
                let body = self.unary()?;
                Ok(Strategy::at_path(p.indices(), body))
            }
            Tok::Var(_) => self.guard(),
            Tok::Ident(k) if !KEYWORDS.contains(&k.as_str()) => self.guard(),
            _ => self.atom(),
        }
    }

    fn guard(&mut self) -> PResult<Strategy> {
        let u = self.term(true)?;
        self.expect(Tok::Semi)?;
        let body = self.unary()?;
        Ok(Strategy::guard(u, body))
    }

    fn atom(&mut self) -> PResult<Strategy> {
        let here = self.pos;
        match self.bump() {
            Tok::Ident(k) if k == "fail" => Ok(Strategy::fail()),
            Tok::Ident(k) if k == "ins" => {
                self.expect(Tok::Lt)?;
                let c = self.context(true)?;
                self.expect(Tok::Gt)?;
                Ok(Strategy::insert(c))
            }
            Tok::Ident(k) if k == "most" => {
                self.expect(Tok::LParen)?;
                let body = self.strategy()?;
                self.expect(Tok::RParen)?;
                Ok(Strategy::most(body))
            }
            Tok::UIdent(x) => Ok(Strategy::var(&x)),
            Tok::LParen => {
                let s = self.strategy()?;
                self.expect(Tok::RParen)?;
                Ok(s)
            }
            Tok::LBracket => {
                let start = here;
                let mut entries: Vec<Entry> = Vec::new();
                loop {
                    self.expect(Tok::At)?;
                    let p = self.position()?;
                    self.expect(Tok::Dot)?;
                    let body = self.strategy()?;
                    entries.push(match p.split_first() {
                        None => Entry::new(Index::Eps, body),
                        Some((i, rest)) => Entry::nat(i, Strategy::at_path_nonroot(rest.indices(), body)),
                    });
                    if !self.separator(Tok::RBracket)? {
                        break;
                    }
                }
                if let Err(reason) = crate::strategy::check_conjunction(&entries) {
                    self.pos = start;
                    return Err(self.error_here(format!("ill-formed conjunction: {reason}")));
                }
                Ok(Strategy::conj(entries))
            }
            _ => {
                self.pos = here;
                Err(self.unexpected("a strategy"))
            }
        }
    }

    fn pos_ce(&mut self) -> PResult<PosCe> {
        if self.is_keyword("fail") {
            self.bump();
            return Ok(PosCe::Fail);
        }
        self.expect(Tok::LBracket)?;
        let mut entries = Vec::new();
        loop {
            self.expect(Tok::At)?;
            let p = self.position()?;
            self.expect(Tok::Dot)?;
            self.expect(Tok::Lt)?;
            let c = self.context(false)?;
            self.expect(Tok::Gt)?;
            entries.push((p, c));
            if !self.separator(Tok::RBracket)? {
                break;
            }
        }
        Ok(PosCe::List(entries))
    }
}

fn run<T>(src: &str, lenient: bool, f: impl FnOnce(&mut Parser) -> PResult<T>) -> PResult<T> {
    let mut p = Parser::new(src, lenient)?;
    let v = f(&mut p)?;
    p.finish()?;
    Ok(v)
}

/// Parses a term such as `g(f(?x), b)`.
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    run(src, false, |p| p.term(false))
}

/// Parses a context such as `list([], i)`.
pub fn parse_context(src: &str) -> Result<Context, ParseError> {
    run(src, false, |p| p.context(false))
}

/// Parses `eps` or a dotted index sequence such as `1.2`.
pub fn parse_position(src: &str) -> Result<Position, ParseError> {
    run(src, false, Parser::position)
}

/// Parses a strategy. Upper-case identifiers containing `#` are rejected.
pub fn parse_strategy(src: &str) -> Result<Strategy, ParseError> {
    run(src, false, Parser::strategy)
}

/// Parses a strategy, also accepting engine-generated variable names such as `Z#3`.
pub fn parse_strategy_lenient(src: &str) -> Result<Strategy, ParseError> {
    run(src, true, Parser::strategy)
}

/// Parses a position-based strategy such as `[@1.<f([])>, @eps.<[]>]`.
pub fn parse_pos_ce(src: &str) -> Result<PosCe, ParseError> {
    run(src, false, Parser::pos_ce)
}

fn sig_error(e: crate::error::SignatureError) -> ParseError {
    ParseError {
        line: 1,
        column: 1,
        message: e.to_string(),
    }
}

/// Parses a term and checks it against `sig`, extending `sig` with new symbols.
pub fn parse_term_in(src: &str, sig: &mut Signature) -> Result<Term, ParseError> {
    let t = parse_term(src)?;
    sig.absorb_term(&t).map_err(sig_error)?;
    Ok(t)
}

/// Parses a strategy and checks its patterns and contexts against `sig`,
/// extending `sig` with new symbols.
pub fn parse_strategy_in(src: &str, sig: &mut Signature) -> Result<Strategy, ParseError> {
    let s = parse_strategy(src)?;
    absorb_strategy(sig, &s).map_err(sig_error)?;
    Ok(s)
}

/// Adds every symbol used by `s` to `sig`, failing on an arity clash.
pub fn absorb_strategy(sig: &mut Signature, s: &Strategy) -> Result<(), crate::error::SignatureError> {
    use crate::strategy::Kind;
    match s.kind() {
        Kind::Insert(c) => sig.absorb_context(c)?,
        Kind::Guard(u, _) => sig.absorb_term(u)?,
        _ => {}
    }
    for c in s.children() {
        absorb_strategy(sig, c)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terms_and_contexts() {
        let t = parse_term("g(f(?x), b)").unwrap();
        assert_eq!(t.to_string(), "g(f(?x), b)");
        let c = parse_context("list(list([], j), i)").unwrap();
        assert_eq!(c.hole_position(), Position::new(vec![1, 1]).unwrap());
        assert_eq!(c.to_string(), "list(list([], j), i)");
        assert!(parse_context("f(a)").is_err());
        assert!(parse_context("g([], [])").is_err());
        assert!(parse_term("f([])").is_err());
    }

    #[test]
    fn positions() {
        assert_eq!(parse_position("eps").unwrap(), Position::root());
        assert_eq!(parse_position("1.2").unwrap().indices(), &[1, 2]);
        assert!(parse_position("0").is_err());
    }

    #[test]
    fn multi_index_jumps_desugar() {
        let s = parse_strategy("@1.2.fail").unwrap();
        assert_eq!(s, Strategy::at(1, Strategy::at(2, Strategy::fail())));
        let l = parse_strategy("[@1.2.fail, @3.fail]").unwrap();
        assert_eq!(l.to_string(), "[@1.@2.fail, @3.fail]");
    }

    #[test]
    fn unclosed_argument_lists_point_past_the_input() {
        let e = parse_term("g(a").unwrap_err();
        assert_eq!((e.line, e.column), (1, 4));
        assert!(e.message.contains("end of input"), "{}", e.message);
    }

    #[test]
    fn errors_carry_line_and_column() {
        let e = parse_strategy("mu X.\n  @1.X +").unwrap_err();
        assert_eq!((e.line, e.column), (2, 9));
        let e = parse_term("f(a,,b)").unwrap_err();
        assert_eq!((e.line, e.column), (1, 5));
    }

    #[test]
    fn reserved_variable_prefix() {
        assert!(parse_strategy("mu Z#0. @1.Z#0").is_err());
        assert!(parse_strategy_lenient("mu Z#0. @1.Z#0").is_ok());
    }

    #[test]
    fn ill_formed_conjunctions_are_rejected() {
        assert!(parse_strategy("[@1.fail, @1.fail]").is_err());
        assert!(parse_strategy("[@eps.ins <[]>, @1.fail]").is_err());
        assert!(parse_strategy("[@1.fail, @eps.fail]").is_err());
        assert!(parse_strategy("[@1.fail, @eps.ins <[]>]").is_ok());
    }

    #[test]
    fn pos_ce_text() {
        let e = parse_pos_ce("[@1.<list([], idx(i))>, @eps.<list([], idx(j))>]").unwrap();
        assert_eq!(e.to_string(), "[@1.<list([], idx(i))>, @eps.<list([], idx(j))>]");
        assert_eq!(parse_pos_ce("fail").unwrap(), PosCe::Fail);
    }
}
