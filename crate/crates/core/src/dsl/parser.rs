// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

use super::ast::*;
use super::diagnostic::Diagnostic;
use super::lexer::{lex, Tok, Token};

/// Nesting limit for expressions.
const MAX_NESTING: usize = 96;

/// Words with a fixed grammatical role; they cannot name variables.
pub const KEYWORDS: &[&str] = &[
    "scaled",
    "xscaled",
    "yscaled",
    "xyscaled",
    "rotated",
    "shifted",
    "slanted",
    "withpen",
    "withcolor",
    "of",
    "and",
    "controls",
    "cycle",
    "tension",
    "curl",
    "atleast",
    "vardef",
    "def",
    "enddef",
    "expr",
    "beginfig",
    "endfig",
    "end",
    "input",
    "numeric",
    "pair",
    "path",
    "pen",
    "pickup",
    "draw",
    "fill",
    "unfill",
    "pen_stroke",
    "glyph",
    "for",
    "forever",
    "endfor",
    "if",
    "fi",
];

/// Operators applied to a following primary: `dir 30`, `length p`.
pub const PREFIX_OPS: &[&str] = &[
    "dir",
    "angle",
    "length",
    "xpart",
    "ypart",
    "reverse",
    "sqrt",
    "sind",
    "cosd",
    "abs",
    "round",
    "floor",
    "ceiling",
    "unitvector",
];

/// Functions taking a parenthesised argument list.
pub const CALLS: &[&str] = &["fix_nib", "max", "min"];

/// `name t of p` built-ins.
pub const OF_OPS: &[&str] = &["point", "direction"];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

type PResult<T> = Result<T, Diagnostic>;

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
}

/// Parses a main source file.
pub fn parse(src: &str) -> Result<Program, Vec<Diagnostic>> {
    let stmts = parse_stmts(src, 0)?;
    Ok(Program {
        stmts,
        files: vec![String::new()],
    })
}

/// Parses a source whose spans are tagged with `file`.
pub fn parse_stmts(src: &str, file: u16) -> Result<Vec<Stmt>, Vec<Diagnostic>> {
    let toks = lex(src, file).map_err(|e| vec![Diagnostic::error(e.message, e.span)])?;
    let mut p = Parser {
        src,
        toks,
        pos: 0,
        depth: 0,
    };
    let mut stmts = Vec::new();
    let mut diags = Vec::new();
    while !p.at(&Tok::Eof) {
        match p.statement() {
            Ok(Some(s)) => stmts.push(s),
            Ok(None) => {}
            Err(d) => {
                diags.push(d);
                p.recover();
            }
        }
    }
    if diags.is_empty() {
        Ok(stmts)
    } else {
        Err(diags)
    }
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn prev_span(&self) -> Span {
        self.toks[self.pos.saturating_sub(1)].span
    }

    fn at(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.at_word(w) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        Diagnostic::error(format!("expected {wanted}, found {}", self.peek().describe()), self.span())
    }

    fn expect(&mut self, t: Tok) -> PResult<Span> {
        if self.at(&t) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&format!("`{}`", t.symbol())))
        }
    }

    fn expect_word(&mut self, w: &str) -> PResult<Span> {
        if self.at_word(w) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&format!("`{w}`")))
        }
    }

    fn name(&mut self) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                let sp = self.bump().span;
                Ok((s, sp))
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn end_stmt(&mut self) -> PResult<()> {
        if self.eat(&Tok::Semi) || self.at(&Tok::Eof) {
            Ok(())
        } else {
            Err(self.unexpected("`;`"))
        }
    }

    fn recover(&mut self) {
        while !self.at(&Tok::Eof) {
            if self.bump().tok == Tok::Semi {
                break;
            }
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            Err(Diagnostic::error("expression nested too deeply", self.span()))
        } else {
            Ok(())
        }
    }

    fn statement(&mut self) -> PResult<Option<Stmt>> {
        let start = self.span();
        let word = match self.peek() {
            Tok::Ident(s) => s.clone(),
            Tok::Semi => {
                self.bump();
                return Ok(None);
            }
            _ => String::new(),
        };
        let kind = match word.as_str() {
            "beginfig" => {
                self.bump();
                if self.eat(&Tok::LParen) {
                    self.expression()?;
                    self.expect(Tok::RParen)?;
                }
                self.end_stmt()?;
                return Ok(None);
            }
            "endfig" | "end" => {
                self.bump();
                self.end_stmt()?;
                return Ok(None);
            }
            "input" => {
                let kw = self.bump().span;
                let path = if let Tok::Str(s) = self.peek().clone() {
                    self.bump();
                    self.end_stmt()?;
                    s
                } else {
                    let path = self.raw_path(kw)?;
                    self.eat(&Tok::Semi);
                    path
                };
                StmtKind::Include(path)
            }
            "vardef" | "def" => self.vardef()?,
            "numeric" | "pair" | "path" | "pen" => {
                self.bump();
                let ty = match word.as_str() {
                    "numeric" => DeclType::Numeric,
                    "pair" => DeclType::Pair,
                    "path" => DeclType::Path,
                    _ => DeclType::Pen,
                };
                let mut names = Vec::new();
                loop {
                    let (name, _) = self.name()?;
                    let array = if self.eat(&Tok::LBracket) {
                        self.expect(Tok::RBracket)?;
                        true
                    } else {
                        false
                    };
                    names.push(Declared { name, array });
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.end_stmt()?;
                StmtKind::Declare { ty, names }
            }
            "pickup" => {
                self.bump();
                let e = self.expression()?;
                self.end_stmt()?;
                StmtKind::Pickup(e)
            }
            "draw" | "fill" | "unfill" => {
                self.bump();
                let path = self.expression()?;
                let mut options = Vec::new();
                loop {
                    if self.eat_word("withpen") {
                        options.push(DrawOption::WithPen(self.expression()?));
                    } else if self.eat_word("withcolor") {
                        options.push(DrawOption::WithColor(self.expression()?));
                    } else {
                        break;
                    }
                }
                self.end_stmt()?;
                match word.as_str() {
                    "draw" => StmtKind::Draw { path, options },
                    "fill" => StmtKind::Fill { path, options },
                    _ => StmtKind::Unfill { path, options },
                }
            }
            "pen_stroke" => self.pen_stroke()?,
            "glyph" => {
                self.bump();
                let name = match self.peek().clone() {
                    Tok::Str(s) => {
                        self.bump();
                        s
                    }
                    _ => return Err(self.unexpected("a glyph name string")),
                };
                let unicode = if self.eat_word("unicode") {
                    match self.peek().clone() {
                        Tok::Str(s) => {
                            self.bump();
                            Some(s)
                        }
                        _ => return Err(self.unexpected("a code point string such as \"0D31\"")),
                    }
                } else {
                    None
                };
                let advance = if self.eat_word("advance") {
                    Some(self.expression()?)
                } else {
                    None
                };
                self.end_stmt()?;
                StmtKind::Glyph { name, unicode, advance }
            }
            "for" | "forever" | "if" => {
                return Err(Diagnostic::error(format!("`{word}` is not supported"), start));
            }
            _ => {
                let first = self.expression()?;
                if self.at(&Tok::Assign) {
                    let op = self.bump().span;
                    let target = match first.kind {
                        ExprKind::Var(name) => name,
                        _ => return Err(Diagnostic::error("left side of `:=` must be a name", op)),
                    };
                    let value = self.expression()?;
                    self.end_stmt()?;
                    StmtKind::Assign { target, value }
                } else if self.at(&Tok::Eq) {
                    let mut exprs = vec![first];
                    while self.eat(&Tok::Eq) {
                        exprs.push(self.expression()?);
                    }
                    self.end_stmt()?;
                    StmtKind::Equation(exprs)
                } else {
                    return Err(self.unexpected("`=` or `:=`"));
                }
            }
        };
        Ok(Some(Stmt {
            kind,
            span: start.to(self.prev_span()),
        }))
    }

    /// Takes the text after `input` up to `;` or end of line as a path.
    fn raw_path(&mut self, kw: Span) -> PResult<String> {
        let from = kw.end as usize;
        let rest = &self.src[from..];
        let stop = rest.find([';', '\n', '%']).unwrap_or(rest.len());
        let path = rest[..stop].trim().to_string();
        if path.is_empty() {
            return Err(Diagnostic::error("`input` needs a file name", kw));
        }
        let end = (from + stop) as u32;
        while !self.at(&Tok::Eof) && self.span().start < end {
            self.bump();
        }
        Ok(path)
    }

    fn vardef(&mut self) -> PResult<StmtKind> {
        self.bump();
        let (name, _) = self.name()?;
        let params = if self.eat_word("expr") {
            let (t, _) = self.name()?;
            self.expect_word("of")?;
            let (p, _) = self.name()?;
            Some((t, p))
        } else {
            None
        };
        self.expect(Tok::Eq)?;
        let body = self.expression()?;
        self.expect_word("enddef")?;
        self.eat(&Tok::Semi);
        Ok(StmtKind::VarDef { name, params, body })
    }

    fn expr_list(&mut self) -> PResult<Vec<Expr>> {
        self.expect(Tok::LParen)?;
        let mut out = Vec::new();
        if !self.at(&Tok::RParen) {
            loop {
                out.push(self.expression()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(Tok::RParen)?;
        Ok(out)
    }

    fn pen_stroke(&mut self) -> PResult<StmtKind> {
        self.bump();
        self.expect(Tok::LParen)?;
        let mut options = Vec::new();
        loop {
            while self.eat(&Tok::Semi) || self.eat(&Tok::Comma) {}
            if self.eat(&Tok::RParen) {
                break;
            }
            let span = self.span();
            let kind = if self.eat_word("nib") {
                self.expect(Tok::LParen)?;
                let nib = self.expression()?;
                self.expect(Tok::RParen)?;
                StrokeOptionKind::Nib(nib)
            } else if self.eat_word("cut") {
                self.expect(Tok::LParen)?;
                let nib = self.expression()?;
                self.expect(Tok::Comma)?;
                let relative = self.eat_word("rel");
                let angle = self.expression()?;
                self.expect(Tok::RParen)?;
                StrokeOptionKind::Cut { nib, relative, angle }
            } else if self.eat_word("tip") {
                StrokeOptionKind::Tip(self.expr_list()?)
            } else if self.eat_word("ignore_directions") {
                StrokeOptionKind::IgnoreDirections
            } else {
                return Err(self.unexpected("`nib`, `cut`, `tip` or `ignore_directions`"));
            };
            let nodes = self.expr_list()?;
            options.push(StrokeOption {
                kind,
                nodes,
                span: span.to(self.prev_span()),
            });
        }
        self.expect(Tok::LParen)?;
        let path = self.expression()?;
        self.expect(Tok::RParen)?;
        self.expect(Tok::LParen)?;
        let (result, _) = self.name()?;
        self.expect(Tok::RParen)?;
        self.end_stmt()?;
        Ok(StmtKind::PenStroke { options, path, result })
    }

    fn join(&mut self) -> PResult<Option<Join>> {
        let j = match self.peek() {
            Tok::Curve => {
                self.bump();
                if self.at_word("tension") {
                    return Err(Diagnostic::error("`tension` is not supported", self.span()));
                }
                if self.eat_word("controls") {
                    let a = self.tertiary()?;
                    let b = if self.eat_word("and") { self.tertiary()? } else { a.clone() };
                    self.expect(Tok::Curve)?;
                    Join::Controls(Box::new(a), Box::new(b))
                } else {
                    Join::Curve
                }
            }
            Tok::Tense => {
                self.bump();
                Join::Tense
            }
            Tok::Line => {
                self.bump();
                Join::Line
            }
            Tok::SmoothLine => {
                self.bump();
                Join::SmoothLine
            }
            _ => return Ok(None),
        };
        Ok(Some(j))
    }

    fn direction(&mut self) -> PResult<Option<Expr>> {
        if !self.eat(&Tok::LBrace) {
            return Ok(None);
        }
        if self.at_word("curl") {
            return Err(Diagnostic::error("`curl` is not supported", self.span()));
        }
        let e = self.expression()?;
        self.expect(Tok::RBrace)?;
        Ok(Some(e))
    }

    pub fn expression(&mut self) -> PResult<Expr> {
        self.enter()?;
        let r = self.path_expression();
        self.depth -= 1;
        r
    }

    fn path_expression(&mut self) -> PResult<Expr> {
        let start = self.span();
        let point = self.tertiary()?;
        let dir_out = self.direction()?;
        let Some(mut join) = self.join()? else {
            if dir_out.is_some() {
                return Err(self.unexpected("a path join such as `..`"));
            }
            return Ok(point);
        };
        let mut knots = vec![KnotExpr {
            dir_in: None,
            point,
            dir_out,
        }];
        let mut joins = Vec::new();
        let mut cyclic = false;
        let mut cycle_dir = None;
        loop {
            joins.push(join);
            let dir_in = self.direction()?;
            if self.eat_word("cycle") {
                cyclic = true;
                cycle_dir = dir_in.map(Box::new);
                break;
            }
            let point = self.tertiary()?;
            let dir_out = self.direction()?;
            knots.push(KnotExpr { dir_in, point, dir_out });
            match self.join()? {
                Some(j) => join = j,
                None => break,
            }
        }
        Ok(Expr::new(
            ExprKind::Path {
                knots,
                joins,
                cyclic,
                cycle_dir,
            },
            start.to(self.prev_span()),
        ))
    }

    fn tertiary(&mut self) -> PResult<Expr> {
        let mut e = self.secondary()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.secondary()?;
            let span = e.span.to(rhs.span);
            e = Expr::new(ExprKind::Binary(op, Box::new(e), Box::new(rhs)), span);
        }
        Ok(e)
    }

    fn secondary(&mut self) -> PResult<Expr> {
        let mut e = self.primary()?;
        loop {
            let kind = match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.primary()?;
                    ExprKind::Binary(BinOp::Mul, Box::new(e.clone()), Box::new(rhs))
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.primary()?;
                    ExprKind::Binary(BinOp::Div, Box::new(e.clone()), Box::new(rhs))
                }
                Tok::Ident(w) => match TransformOp::from_keyword(w) {
                    Some(op) => {
                        self.bump();
                        let rhs = self.primary()?;
                        ExprKind::Transform(op, Box::new(e.clone()), Box::new(rhs))
                    }
                    None => break,
                },
                _ => break,
            };
            e = Expr::new(kind, e.span.to(self.prev_span()));
        }
        Ok(e)
    }

    fn starts_primary(&self) -> bool {
        match self.peek() {
            Tok::Number(_) | Tok::LParen => true,
            Tok::Ident(s) => !is_keyword(s),
            _ => false,
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        self.enter()?;
        let r = self.primary_inner();
        self.depth -= 1;
        r
    }

    fn primary_inner(&mut self) -> PResult<Expr> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                let e = self.primary()?;
                let span = start.to(e.span);
                Ok(Expr::new(ExprKind::Neg(Box::new(e)), span))
            }
            Tok::Plus => {
                self.bump();
                self.primary()
            }
            Tok::Number(n) => {
                self.bump();
                let num = Expr::new(ExprKind::Number(n), start);
                if self.starts_primary() {
                    let rhs = self.atom()?;
                    let span = start.to(rhs.span);
                    Ok(Expr::new(ExprKind::Binary(BinOp::Mul, Box::new(num), Box::new(rhs)), span))
                } else {
                    Ok(num)
                }
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> PResult<Expr> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Number(n) => {
                self.bump();
                Ok(Expr::new(ExprKind::Number(n), start))
            }
            Tok::LParen => {
                self.bump();
                let a = self.expression()?;
                let kind = if self.eat(&Tok::Comma) {
                    let b = self.expression()?;
                    if self.eat(&Tok::Comma) {
                        let c = self.expression()?;
                        ExprKind::Triple(Box::new([a, b, c]))
                    } else {
                        ExprKind::Pair(Box::new(a), Box::new(b))
                    }
                } else {
                    self.expect(Tok::RParen)?;
                    return Ok(a);
                };
                self.expect(Tok::RParen)?;
                Ok(Expr::new(kind, start.to(self.prev_span())))
            }
            Tok::Ident(name) => {
                if is_keyword(&name) {
                    return Err(self.unexpected("an expression"));
                }
                self.bump();
                if CALLS.contains(&name.as_str()) && self.at(&Tok::LParen) {
                    let args = self.expr_list()?;
                    return Ok(Expr::new(ExprKind::Call(name, args), start.to(self.prev_span())));
                }
                if PREFIX_OPS.contains(&name.as_str()) {
                    let arg = self.primary()?;
                    let span = start.to(arg.span);
                    return Ok(Expr::new(ExprKind::Prefix(name, Box::new(arg)), span));
                }
                if OF_OPS.contains(&name.as_str()) || self.starts_primary() {
                    let arg = self.tertiary()?;
                    self.expect_word("of")?;
                    let of = self.primary()?;
                    let span = start.to(of.span);
                    return Ok(Expr::new(ExprKind::Of(name, Box::new(arg), Box::new(of)), span));
                }
                Ok(Expr::new(ExprKind::Var(name), start))
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}
