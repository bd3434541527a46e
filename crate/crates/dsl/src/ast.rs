//! Syntax tree and canonical printer.

use std::fmt::{self, Write as _};

use crate::error::Span;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DistKind {
    Beta,
    Norm,
    Bin,
    Gamma,
    Unif,
}

impl DistKind {
    pub const ALL: [DistKind; 5] = [DistKind::Beta, DistKind::Norm, DistKind::Bin, DistKind::Gamma, DistKind::Unif];

    pub fn name(self) -> &'static str {
        match self {
            DistKind::Beta => "dbeta",
            DistKind::Norm => "dnorm",
            DistKind::Bin => "dbin",
            DistKind::Gamma => "dgamma",
            DistKind::Unif => "dunif",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.name() == s)
    }

    pub fn arity(self) -> usize {
        2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
    Logit,
    Ilogit,
    Pow,
}

impl Func {
    pub const ALL: [Func; 6] = [Func::Exp, Func::Log, Func::Sqrt, Func::Logit, Func::Ilogit, Func::Pow];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Logit => "logit",
            Func::Ilogit => "ilogit",
            Func::Pow => "pow",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }

    pub fn arity(self) -> usize {
        if self == Func::Pow {
            2
        } else {
            1
        }
    }

    pub fn apply(self, args: &[f64]) -> f64 {
        let x = args[0];
        match self {
            Func::Exp => x.exp(),
            Func::Log => x.ln(),
            Func::Sqrt => x.sqrt(),
            Func::Logit => (x / (1.0 - x)).ln(),
            Func::Ilogit => 1.0 / (1.0 + (-x).exp()),
            Func::Pow => x.powf(args[1]),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }

    pub fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            BinOp::Add => a + b,
            BinOp::Sub => a - b,
            BinOp::Mul => a * b,
            BinOp::Div => a / b,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub span: Span,
    pub kind: ExprKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Num(f64),
    Var(String),
    Index(String, Box<Expr>),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

impl Expr {
    pub fn new(span: Span, kind: ExprKind) -> Self {
        Expr { span, kind }
    }

    fn precedence(&self) -> u8 {
        match &self.kind {
            ExprKind::Binary(op, ..) => op.precedence(),
            ExprKind::Neg(_) => 3,
            _ => 4,
        }
    }

    fn strip(&mut self) {
        self.span = Span::default();
        match &mut self.kind {
            ExprKind::Num(_) | ExprKind::Var(_) => {}
            ExprKind::Index(_, e) | ExprKind::Neg(e) => e.strip(),
            ExprKind::Binary(_, a, b) => {
                a.strip();
                b.strip();
            }
            ExprKind::Call(_, args) => args.iter_mut().for_each(Expr::strip),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Num(v) => write!(f, "{v}"),
            ExprKind::Var(name) => f.write_str(name),
            ExprKind::Index(name, i) => write!(f, "{name}[{i}]"),
            ExprKind::Neg(e) => {
                if e.precedence() < 3 {
                    write!(f, "-({e})")
                } else {
                    write!(f, "-{e}")
                }
            }
            ExprKind::Binary(op, a, b) => {
                let p = op.precedence();
                if a.precedence() < p {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                write!(f, " {} ", op.symbol())?;
                // left-associative grammar: equal precedence on the right needs parentheses
                if b.precedence() <= p {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            ExprKind::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                write_list(f, args)?;
                f.write_char(')')
            }
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, args: &[Expr]) -> fmt::Result {
    for (k, a) in args.iter().enumerate() {
        if k > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

/// Assignment target: `name` or `name[index]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Target {
    pub span: Span,
    pub name: String,
    pub index: Option<Expr>,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.index {
            Some(i) => write!(f, "{}[{i}]", self.name),
            None => f.write_str(&self.name),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistCall {
    pub span: Span,
    pub kind: DistKind,
    pub args: Vec<Expr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    Int(u64),
    Name(String),
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Int(v) => write!(f, "{v}"),
            Bound::Name(n) => f.write_str(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Stmt {
    pub span: Span,
    pub kind: StmtKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StmtKind {
    Stochastic { target: Target, dist: DistCall },
    Deterministic { target: Target, expr: Expr },
    Loop { var: String, from: Bound, to: Bound, body: Vec<Stmt> },
}

impl Stmt {
    fn strip(&mut self) {
        self.span = Span::default();
        match &mut self.kind {
            StmtKind::Stochastic { target, dist } => {
                strip_target(target);
                dist.span = Span::default();
                dist.args.iter_mut().for_each(Expr::strip);
            }
            StmtKind::Deterministic { target, expr } => {
                strip_target(target);
                expr.strip();
            }
            StmtKind::Loop { body, .. } => body.iter_mut().for_each(Stmt::strip),
        }
    }

    fn write_indented(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        match &self.kind {
            StmtKind::Stochastic { target, dist } => {
                let args: Vec<String> = dist.args.iter().map(|a| a.to_string()).collect();
                let _ = writeln!(out, "{pad}{target} ~ {}({})", dist.kind.name(), args.join(", "));
            }
            StmtKind::Deterministic { target, expr } => {
                let _ = writeln!(out, "{pad}{target} <- {expr}");
            }
            StmtKind::Loop { var, from, to, body } => {
                let _ = writeln!(out, "{pad}for ({var} in {from}:{to}) {{");
                for s in body {
                    s.write_indented(out, depth + 1);
                }
                let _ = writeln!(out, "{pad}}}");
            }
        }
    }
}

fn strip_target(t: &mut Target) {
    t.span = Span::default();
    if let Some(i) = &mut t.index {
        i.strip();
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelAst {
    pub stmts: Vec<Stmt>,
}

impl ModelAst {
    /// Copy with every span reset, for structural comparison.
    pub fn without_spans(&self) -> ModelAst {
        let mut m = self.clone();
        m.stmts.iter_mut().for_each(Stmt::strip);
        m
    }
}

/// Canonical form: one statement per line, two-space indentation.
impl fmt::Display for ModelAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::from("model {\n");
        for s in &self.stmts {
            s.write_indented(&mut out, 1);
        }
        out.push_str("}\n");
        f.write_str(&out)
    }
}
