use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::ast::*;
use super::diagnostic::Diagnostic;
use super::lexer::{tokenize, Tok, Token};

/// Nesting limit for parentheses, calls and operator chains.
pub const MAX_DEPTH: usize = 128;

/// Words that cannot be bound by declarations.
pub const RESERVED: &[&str] = &[
    "space", "map", "bundle", "on", "kcycle", "print", "assert", "point", "id", "const", "incl",
    "ident", "O", "eps", "T", "N", "clutch", "line", "dual", "pull",
];

pub fn parse(source: &str) -> Result<Script, Diagnostic> {
    let tokens = tokenize(source)?;
    let mut p = Parser { source, tokens, pos: 0, depth: 0 };
    let mut statements = Vec::new();
    while p.peek() != &Tok::Eof {
        statements.push(p.statement()?);
    }
    Ok(Script { statements })
}

struct Parser<'a> {
    source: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.tokens[(self.pos + k).min(self.tokens.len() - 1)].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn prev_span(&self) -> Span {
        self.tokens[self.pos.saturating_sub(1)].span
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, span: Span, message: impl Into<String>) -> Diagnostic {
        Diagnostic::new(self.source, span, message)
    }

    fn unexpected(&self, expected: &str) -> Diagnostic {
        let found = self.peek().describe();
        let msg = if self.peek() == &Tok::Eof {
            format!("unexpected end of input, expected {expected}")
        } else {
            format!("expected {expected}, found {found}")
        };
        self.error(self.span(), msg)
    }

    fn expect(&mut self, tok: Tok) -> PResult<Span> {
        if self.peek() == &tok {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&format!("`{}`", tok.text())))
        }
    }

    fn is_ident(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == word)
    }

    fn is_call(&self, word: &str) -> bool {
        self.is_ident(word) && self.peek_at(1) == &Tok::LParen
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error(self.span(), "expression nested too deeply"));
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    // operator chains deepen the left spine of the tree
    fn chain_step(&self, n: usize) -> PResult<()> {
        if self.depth + n > MAX_DEPTH {
            return Err(self.error(self.span(), "expression nested too deeply"));
        }
        Ok(())
    }

    fn name(&mut self) -> PResult<Name> {
        match self.peek().clone() {
            Tok::Ident(text) => {
                let span = self.bump().span;
                Ok(Name { text, span })
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn binding_name(&mut self) -> PResult<Name> {
        let n = self.name()?;
        if RESERVED.contains(&n.text.as_str()) {
            return Err(self.error(n.span, format!("`{}` is a reserved word", n.text)));
        }
        Ok(n)
    }

    fn int_text(&mut self) -> PResult<(String, Span)> {
        match self.peek().clone() {
            Tok::Int(s) => Ok((s, self.bump().span)),
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn u32_lit(&mut self) -> PResult<u32> {
        let (s, span) = self.int_text()?;
        s.parse().map_err(|_| self.error(span, format!("integer `{s}` is out of range")))
    }

    fn i64_lit(&mut self) -> PResult<i64> {
        let neg = if self.peek() == &Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let (s, span) = self.int_text()?;
        let text = if neg { format!("-{s}") } else { s };
        text.parse().map_err(|_| self.error(span, format!("integer `{text}` is out of range")))
    }

    fn statement(&mut self) -> PResult<Statement> {
        let start = self.span();
        let kind = match self.peek() {
            Tok::Ident(w) if w == "space" => {
                self.bump();
                let name = self.binding_name()?;
                self.expect(Tok::Assign)?;
                let value = self.space_expr()?;
                StatementKind::Space { name, value }
            }
            Tok::Ident(w) if w == "map" => {
                self.bump();
                let name = self.binding_name()?;
                self.expect(Tok::Colon)?;
                let source = self.space_expr()?;
                self.expect(Tok::Arrow)?;
                let target = self.space_expr()?;
                self.expect(Tok::Assign)?;
                let value = self.map_expr()?;
                StatementKind::Map { name, source, target, value }
            }
            Tok::Ident(w) if w == "bundle" => {
                self.bump();
                let name = self.binding_name()?;
                if !self.is_ident("on") {
                    return Err(self.unexpected("`on`"));
                }
                self.bump();
                let base = self.space_expr()?;
                self.expect(Tok::Assign)?;
                let value = self.bundle()?;
                StatementKind::Bundle { name, base, value }
            }
            Tok::Ident(w) if w == "kcycle" => {
                self.bump();
                let name = self.binding_name()?;
                self.expect(Tok::Assign)?;
                self.expect(Tok::LBracket)?;
                let manifold = self.space_expr()?;
                self.expect(Tok::Semi)?;
                let class = self.bundle()?;
                self.expect(Tok::Semi)?;
                let map = self.map_expr()?;
                self.expect(Tok::RBracket)?;
                StatementKind::KCycle { name, manifold, class, map }
            }
            Tok::Ident(w) if w == "print" => {
                self.bump();
                StatementKind::Print(self.expr()?)
            }
            Tok::Ident(w) if w == "assert" => {
                self.bump();
                let left = self.expr()?;
                self.expect(Tok::EqEq)?;
                let right = self.expr()?;
                StatementKind::Assert(left, right)
            }
            _ => return Err(self.unexpected("a statement (space, map, bundle, kcycle, print or assert)")),
        };
        let end = self.expect(Tok::Semi)?;
        Ok(Statement { kind, span: start.to(end) })
    }

    fn space_expr(&mut self) -> PResult<SpaceExpr> {
        self.enter()?;
        let mut left = self.space_primary()?;
        let mut n = 0;
        while self.peek() == &Tok::Star {
            n += 1;
            self.chain_step(n)?;
            self.bump();
            let right = self.space_primary()?;
            let span = left.span.to(right.span);
            left = SpaceExpr { kind: SpaceAst::Product(Box::new(left), Box::new(right)), span };
        }
        self.leave();
        Ok(left)
    }

    fn space_primary(&mut self) -> PResult<SpaceExpr> {
        let start = self.span();
        let sized = |p: &mut Self| -> PResult<u32> {
            p.bump();
            p.expect(Tok::LParen)?;
            let n = p.u32_lit()?;
            p.expect(Tok::RParen)?;
            Ok(n)
        };
        let kind = if self.is_ident("point") {
            self.bump();
            SpaceAst::Point
        } else if self.is_call("S") {
            SpaceAst::Sphere(sized(self)?)
        } else if self.is_call("CP") {
            SpaceAst::ComplexProjective(sized(self)?)
        } else if self.is_call("T") {
            SpaceAst::Torus(sized(self)?)
        } else if self.peek() == &Tok::LParen {
            self.bump();
            let inner = self.space_expr()?;
            self.expect(Tok::RParen)?;
            return Ok(inner);
        } else if matches!(self.peek(), Tok::Ident(_)) {
            SpaceAst::Name(self.name()?.text)
        } else {
            return Err(self.unexpected("a space"));
        };
        Ok(SpaceExpr { kind, span: start.to(self.prev_span()) })
    }

    fn map_expr(&mut self) -> PResult<MapExpr> {
        self.enter()?;
        let mut left = self.map_primary()?;
        let mut n = 0;
        while self.peek() == &Tok::Dot {
            n += 1;
            self.chain_step(n)?;
            self.bump();
            let right = self.map_primary()?;
            let span = left.span.to(right.span);
            left = MapExpr { kind: MapAst::Compose(Box::new(left), Box::new(right)), span };
        }
        self.leave();
        Ok(left)
    }

    fn index_list(&mut self) -> PResult<Vec<u32>> {
        self.bump();
        self.expect(Tok::LParen)?;
        let mut v = Vec::new();
        loop {
            let span = self.span();
            let i = self.u32_lit()?;
            if i == 0 {
                return Err(self.error(span, "factor positions start at 1"));
            }
            v.push(i);
            if v.len() > MAX_DEPTH {
                return Err(self.error(span, "too many factor positions"));
            }
            if self.peek() == &Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        self.expect(Tok::RParen)?;
        Ok(v)
    }

    fn map_primary(&mut self) -> PResult<MapExpr> {
        let start = self.span();
        let kind = match self.peek() {
            Tok::Ident(w) if w == "id" => {
                self.bump();
                MapAst::Id
            }
            Tok::Ident(w) if w == "const" => {
                self.bump();
                MapAst::Const
            }
            Tok::Ident(w) if w == "incl" => {
                self.bump();
                MapAst::Incl
            }
            Tok::Ident(w) if w == "ident" => {
                self.bump();
                MapAst::Ident
            }
            _ if self.is_call("deg") => {
                self.bump();
                self.expect(Tok::LParen)?;
                let d = self.i64_lit()?;
                self.expect(Tok::RParen)?;
                MapAst::Deg(d)
            }
            _ if self.is_call("slice") => MapAst::Slice(self.index_list()?),
            _ if self.is_call("proj") => MapAst::Proj(self.index_list()?),
            Tok::LParen => {
                self.bump();
                let inner = self.map_expr()?;
                self.expect(Tok::RParen)?;
                return Ok(inner);
            }
            Tok::Ident(_) => MapAst::Name(self.name()?.text),
            _ => return Err(self.unexpected("a map")),
        };
        Ok(MapExpr { kind, span: start.to(self.prev_span()) })
    }

    fn bundle(&mut self) -> PResult<BundleAst> {
        self.enter()?;
        let mut left = self.bundle_sum()?;
        let mut n = 0;
        while self.peek() == &Tok::Minus {
            n += 1;
            self.chain_step(n)?;
            self.bump();
            let right = self.bundle_sum()?;
            let span = left.span.to(right.span);
            left = BundleAst { kind: BundleKind::Diff(Box::new(left), Box::new(right)), span };
        }
        self.leave();
        Ok(left)
    }

    fn infix(&self, middle: &Tok) -> bool {
        self.peek() == &Tok::LParen && self.peek_at(1) == middle && self.peek_at(2) == &Tok::RParen
    }

    fn bundle_sum(&mut self) -> PResult<BundleAst> {
        let mut left = self.bundle_tensor()?;
        let mut n = 0;
        while self.infix(&Tok::Plus) {
            n += 1;
            self.chain_step(n)?;
            self.bump();
            self.bump();
            self.bump();
            let right = self.bundle_tensor()?;
            let span = left.span.to(right.span);
            left = BundleAst { kind: BundleKind::Sum(Box::new(left), Box::new(right)), span };
        }
        Ok(left)
    }

    fn bundle_tensor(&mut self) -> PResult<BundleAst> {
        let mut left = self.bundle_primary()?;
        let mut n = 0;
        while self.infix(&Tok::Ident("x".into())) {
            n += 1;
            self.chain_step(n)?;
            self.bump();
            self.bump();
            self.bump();
            let right = self.bundle_primary()?;
            let span = left.span.to(right.span);
            left = BundleAst { kind: BundleKind::Tensor(Box::new(left), Box::new(right)), span };
        }
        Ok(left)
    }

    fn bundle_primary(&mut self) -> PResult<BundleAst> {
        self.enter()?;
        let start = self.span();
        let call = |p: &mut Self| -> PResult<()> {
            p.bump();
            p.expect(Tok::LParen).map(|_| ())
        };
        let kind = if self.is_call("O") {
            call(self)?;
            BundleKind::O(self.i64_lit()?)
        } else if self.is_call("eps") {
            call(self)?;
            BundleKind::Eps(self.u32_lit()?)
        } else if self.is_call("T") {
            call(self)?;
            BundleKind::Tangent(self.space_expr()?)
        } else if self.is_call("N") {
            call(self)?;
            BundleKind::Normal(self.name()?)
        } else if self.is_call("clutch") {
            call(self)?;
            BundleKind::Clutch(self.u32_lit()?)
        } else if self.is_call("line") {
            call(self)?;
            BundleKind::Line(self.class_text()?)
        } else if self.is_call("dual") {
            call(self)?;
            BundleKind::Dual(Box::new(self.bundle()?))
        } else if self.is_call("pull") {
            call(self)?;
            let f = self.name()?;
            self.expect(Tok::Comma)?;
            BundleKind::Pull(f, Box::new(self.bundle()?))
        } else if self.peek() == &Tok::LParen {
            self.bump();
            let inner = self.bundle()?;
            self.expect(Tok::RParen)?;
            self.leave();
            return Ok(inner);
        } else if matches!(self.peek(), Tok::Ident(_)) {
            let n = self.name()?;
            self.leave();
            return Ok(BundleAst { kind: BundleKind::Name(n.text), span: n.span });
        } else {
            return Err(self.unexpected("a bundle expression"));
        };
        self.expect(Tok::RParen)?;
        self.leave();
        Ok(BundleAst { kind, span: start.to(self.prev_span()) })
    }

    // Cohomology-class text up to the closing parenthesis, respaced.
    fn class_text(&mut self) -> PResult<String> {
        let mut out = String::new();
        let mut count = 0;
        loop {
            let piece = match self.peek() {
                Tok::RParen => break,
                Tok::Plus | Tok::Minus if out.is_empty() => self.peek().text().to_string(),
                Tok::Plus | Tok::Minus => format!(" {} ", self.peek().text()),
                Tok::Ident(_) | Tok::Int(_) | Tok::Star | Tok::Slash | Tok::Caret => {
                    self.peek().text().to_string()
                }
                _ => return Err(self.unexpected("a cohomology class")),
            };
            count += 1;
            if count > 4 * MAX_DEPTH {
                return Err(self.error(self.span(), "class text is too long"));
            }
            out.push_str(&piece);
            self.bump();
        }
        if out.is_empty() {
            return Err(self.unexpected("a cohomology class"));
        }
        Ok(out)
    }

    fn expr(&mut self) -> PResult<Expr> {
        self.enter()?;
        let mut left = self.term()?;
        let mut n = 0;
        loop {
            let add = match self.peek() {
                Tok::Plus => true,
                Tok::Minus => false,
                _ => break,
            };
            n += 1;
            self.chain_step(n)?;
            self.bump();
            let right = self.term()?;
            let span = left.span.to(right.span);
            let (l, r) = (Box::new(left), Box::new(right));
            left = Expr { kind: if add { ExprKind::Add(l, r) } else { ExprKind::Sub(l, r) }, span };
        }
        self.leave();
        Ok(left)
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut left = self.unary()?;
        let mut n = 0;
        while self.peek() == &Tok::Star {
            n += 1;
            self.chain_step(n)?;
            self.bump();
            let right = self.unary()?;
            let span = left.span.to(right.span);
            left = Expr { kind: ExprKind::Mul(Box::new(left), Box::new(right)), span };
        }
        Ok(left)
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.peek() == &Tok::Minus {
            let start = self.bump().span;
            self.enter()?;
            let inner = self.unary()?;
            self.leave();
            let span = start.to(inner.span);
            return Ok(Expr { kind: ExprKind::Neg(Box::new(inner)), span });
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Expr> {
        self.enter()?;
        let start = self.span();
        let call = |p: &mut Self| -> PResult<()> {
            p.bump();
            p.expect(Tok::LParen).map(|_| ())
        };
        let kind = match self.peek().clone() {
            Tok::Int(s) => {
                let span = self.bump().span;
                let num: BigInt = s.parse().expect("digits");
                let den: BigInt = if self.peek() == &Tok::Slash {
                    self.bump();
                    let (d, dspan) = self.int_text()?;
                    let d: BigInt = d.parse().expect("digits");
                    if d.is_zero() {
                        return Err(self.error(span.to(dspan), "zero denominator"));
                    }
                    d
                } else {
                    BigInt::from(1)
                };
                let r = BigRational::new(num, den);
                let (num, den) = (r.numer().clone(), r.denom().clone());
                self.leave();
                return Ok(Expr { kind: ExprKind::Number(num, den), span: start.to(self.prev_span()) });
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                self.leave();
                return Ok(inner);
            }
            Tok::Ident(w) if self.peek_at(1) == &Tok::LParen => match w.as_str() {
                "ch" | "td" | "ahat" => {
                    call(self)?;
                    let b = self.bundle()?;
                    match w.as_str() {
                        "ch" => ExprKind::Ch(b),
                        "td" => ExprKind::Td(b),
                        _ => ExprKind::Ahat(b),
                    }
                }
                "c" | "p" => {
                    call(self)?;
                    let k = self.u32_lit()?;
                    self.expect(Tok::Comma)?;
                    let b = self.bundle()?;
                    if w == "c" { ExprKind::Chern(k, b) } else { ExprKind::Pontryagin(k, b) }
                }
                "integrate" => {
                    call(self)?;
                    ExprKind::Integrate(Box::new(self.expr()?))
                }
                "homchern" => {
                    call(self)?;
                    ExprKind::HomChern(self.name()?)
                }
                "kgroup" => {
                    call(self)?;
                    let n = self.name()?;
                    self.expect(Tok::Comma)?;
                    ExprKind::KGroup(n, self.i64_lit()?)
                }
                "parity" => {
                    call(self)?;
                    ExprKind::Parity(self.name()?)
                }
                "tachyon" => {
                    call(self)?;
                    ExprKind::Tachyon(self.name()?)
                }
                _ => {
                    return Err(self.error(self.span(), format!("unknown function `{w}`")));
                }
            },
            Tok::Ident(_) => {
                let n = self.name()?;
                self.leave();
                return Ok(Expr { kind: ExprKind::Name(n.text), span: n.span });
            }
            _ => return Err(self.unexpected("an expression")),
        };
        self.expect(Tok::RParen)?;
        self.leave();
        Ok(Expr { kind, span: start.to(self.prev_span()) })
    }
}
