use crate::ast::*;
use crate::error::{DslError, Result, Span};
use crate::lexer::{tokenize, Tok, Token};

const KEYWORDS: [&str; 3] = ["model", "for", "in"];

pub fn parse(src: &str) -> Result<ModelAst> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0 };
    p.expect_keyword("model")?;
    p.expect(Tok::LBrace)?;
    let stmts = p.block()?;
    if p.peek() != &Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(ModelAst { stmts })
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> DslError {
        DslError::syntax(self.span(), format!("expected {expected}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, tok: Tok) -> Result<Span> {
        if *self.peek() == tok {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&format!("`{}`", tok.symbol())))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<Span> {
        match self.peek() {
            Tok::Ident(s) if s == kw => Ok(self.bump().span),
            _ => Err(self.unexpected(&format!("`{kw}`"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Span)> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => Ok((s, self.bump().span)),
            _ => Err(self.unexpected(what)),
        }
    }

    /// Statements up to and including the closing brace.
    fn block(&mut self) -> Result<Vec<Stmt>> {
        let mut out = Vec::new();
        loop {
            while *self.peek() == Tok::Semi {
                self.bump();
            }
            if *self.peek() == Tok::RBrace {
                self.bump();
                return Ok(out);
            }
            if *self.peek() == Tok::Eof {
                return Err(self.unexpected("`}`"));
            }
            out.push(self.statement()?);
        }
    }

    fn statement(&mut self) -> Result<Stmt> {
        let span = self.span();
        if matches!(self.peek(), Tok::Ident(s) if s == "for") {
            self.bump();
            self.expect(Tok::LParen)?;
            let (var, _) = self.ident("loop variable")?;
            self.expect_keyword("in")?;
            let from = self.bound()?;
            self.expect(Tok::Colon)?;
            let to = self.bound()?;
            self.expect(Tok::RParen)?;
            self.expect(Tok::LBrace)?;
            let body = self.block()?;
            return Ok(Stmt { span, kind: StmtKind::Loop { var, from, to, body } });
        }
        let (name, tspan) = self.ident("a statement")?;
        let index = if *self.peek() == Tok::LBracket {
            self.bump();
            let e = self.expr()?;
            self.expect(Tok::RBracket)?;
            Some(e)
        } else {
            None
        };
        let target = Target { span: tspan, name, index };
        match self.peek() {
            Tok::Tilde => {
                self.bump();
                let dist = self.dist_call()?;
                Ok(Stmt { span, kind: StmtKind::Stochastic { target, dist } })
            }
            Tok::Arrow => {
                self.bump();
                let expr = self.expr()?;
                Ok(Stmt { span, kind: StmtKind::Deterministic { target, expr } })
            }
            _ => Err(self.unexpected(&format!("`~` or `<-` after `{target}`"))),
        }
    }

    fn bound(&mut self) -> Result<Bound> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Number(v) if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => {
                self.bump();
                Ok(Bound::Int(v as u64))
            }
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(Bound::Name(s))
            }
            other => Err(DslError::syntax(
                span,
                format!("loop bound must be a positive integer or a data name, found {}", other.describe()),
            )),
        }
    }

    fn dist_call(&mut self) -> Result<DistCall> {
        let (name, span) = self.ident("a distribution")?;
        let kind = DistKind::from_name(&name).ok_or_else(|| {
            let all: Vec<_> = DistKind::ALL.iter().map(|d| d.name()).collect();
            DslError::syntax(span, format!("unknown distribution `{name}` (supported: {})", all.join(", ")))
        })?;
        let args = self.call_args()?;
        if args.len() != kind.arity() {
            return Err(DslError::syntax(
                span,
                format!("{} expects {} arguments, found {}", kind.name(), kind.arity(), args.len()),
            ));
        }
        Ok(DistCall { span, kind, args })
    }

    fn call_args(&mut self) -> Result<Vec<Expr>> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if *self.peek() == Tok::RParen {
            self.bump();
            return Ok(args);
        }
        loop {
            args.push(self.expr()?);
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => {
                    self.bump();
                    return Ok(args);
                }
                _ => return Err(self.unexpected("`,` or `)`")),
            }
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::new(lhs.span, ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::new(lhs.span, ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            let span = self.bump().span;
            let e = self.unary()?;
            return Ok(Expr::new(span, ExprKind::Neg(Box::new(e))));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Number(v) => {
                self.bump();
                Ok(Expr::new(span, ExprKind::Num(v)))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                self.bump();
                match self.peek() {
                    Tok::LParen => {
                        let func = Func::from_name(&name).ok_or_else(|| {
                            if DistKind::from_name(&name).is_some() {
                                DslError::syntax(span, format!("distribution `{name}` can only follow `~`"))
                            } else {
                                DslError::syntax(span, format!("unknown function `{name}`"))
                            }
                        })?;
                        let args = self.call_args()?;
                        if args.len() != func.arity() {
                            return Err(DslError::syntax(
                                span,
                                format!("{name} expects {} argument(s), found {}", func.arity(), args.len()),
                            ));
                        }
                        Ok(Expr::new(span, ExprKind::Call(func, args)))
                    }
                    Tok::LBracket => {
                        self.bump();
                        let i = self.expr()?;
                        self.expect(Tok::RBracket)?;
                        Ok(Expr::new(span, ExprKind::Index(name, Box::new(i))))
                    }
                    _ => Ok(Expr::new(span, ExprKind::Var(name))),
                }
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_script() {
        let ast = parse("model { p ~ dbeta(1,1)  y ~ dbin(p, 12) }").unwrap();
        assert_eq!(ast.stmts.len(), 2);
        assert!(ast.stmts.iter().all(|s| matches!(s.kind, StmtKind::Stochastic { .. })));
    }

    #[test]
    fn loop_statement() {
        let ast = parse("model { for (i in 1:3) { y[i] ~ dnorm(mu, 1) } mu ~ dnorm(0, 10) }").unwrap();
        match &ast.stmts[0].kind {
            StmtKind::Loop { var, from, to, body } => {
                assert_eq!(var, "i");
                assert_eq!((from, to), (&Bound::Int(1), &Bound::Int(3)));
                assert!(matches!(&body[0].kind, StmtKind::Stochastic { target, .. } if target.index.is_some()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn arity_error_names_distribution() {
        let e = parse("model { p ~ dbeta(1) }").unwrap_err();
        assert_eq!(e.to_string(), "1:13: dbeta expects 2 arguments, found 1");
    }

    #[test]
    fn precedence() {
        let ast = parse("model { a <- 1 - 2 * -b / c }").unwrap();
        let StmtKind::Deterministic { expr, .. } = &ast.stmts[0].kind else { panic!() };
        assert_eq!(expr.to_string(), "1 - 2 * -b / c");
        let StmtKind::Deterministic { expr, .. } = &parse("model { a <- (1 - 2) - (3 - 4) }").unwrap().stmts[0].kind.clone() else {
            panic!()
        };
        assert_eq!(expr.to_string(), "1 - 2 - (3 - 4)");
    }

    #[test]
    fn printer_round_trip() {
        let src = "model { for (i in 1:N) { logit_p[i] <- b0 + b1 * x[i]; y[i] ~ dbin(ilogit(logit_p[i]), 1) }\n b0 ~ dnorm(0, 10) b1 ~ dnorm(0, 10) }";
        let a = parse(src).unwrap();
        let b = parse(&a.to_string()).unwrap();
        assert_eq!(a.without_spans(), b.without_spans());
    }
}
