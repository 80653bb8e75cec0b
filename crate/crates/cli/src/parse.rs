//! Recursive-descent parser for rational expressions in `x`, `y`, `z` (the
//! root of unity `ζ_N`) and `l` (the radical `ℓ`).
//!
//! Precedence, tightest first: `^`, unary `-`, `* /`, `+ -`; binary
//! operators associate to the left. Exponents are integer literals,
//! optionally negative or parenthesized.

use std::sync::Arc;

use integrabilis_core::{CycloField, CycloNumber, Error, ExtDescriptor, ExtElem, RatFn, Rat, Var};
use num_bigint::BigInt;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symbol {
    X,
    Y,
    Z,
    L,
}

impl Symbol {
    fn name(self) -> char {
        match self {
            Symbol::X => 'x',
            Symbol::Y => 'y',
            Symbol::Z => 'z',
            Symbol::L => 'l',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Sym(Symbol, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// The column of the `/` is kept for error reports.
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, i64, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Sym(Symbol),
    Op(char),
    Open,
    Close,
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, CliError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push((Tok::Int(digits.parse().expect("ascii digits")), col));
                continue;
            }
            'x' => out.push((Tok::Sym(Symbol::X), col)),
            'y' => out.push((Tok::Sym(Symbol::Y), col)),
            'z' => out.push((Tok::Sym(Symbol::Z), col)),
            'l' => out.push((Tok::Sym(Symbol::L), col)),
            '+' | '-' | '*' | '/' | '^' => out.push((Tok::Op(c), col)),
            '(' => out.push((Tok::Open, col)),
            ')' => out.push((Tok::Close, col)),
            _ => return Err(CliError::syntax(col, format!("unexpected character '{c}'"))),
        }
        i += 1;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect_close(&mut self) -> Result<(), CliError> {
        match self.bump() {
            (Tok::Close, _) => Ok(()),
            (_, col) => Err(CliError::syntax(col, "expected ')'")),
        }
    }

    fn expr(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Op('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, CliError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Op('/') => {
                    let col = self.bump().1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), col);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, CliError> {
        if self.peek() == &Tok::Op('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, CliError> {
        let base = self.atom()?;
        if self.peek() != &Tok::Op('^') {
            return Ok(base);
        }
        let col = self.bump().1;
        let paren = self.peek() == &Tok::Open;
        if paren {
            self.bump();
        }
        let neg = self.peek() == &Tok::Op('-');
        if neg {
            self.bump();
        }
        let e = match self.bump() {
            (Tok::Int(n), c) => i64::try_from(n).map_err(|_| CliError::syntax(c, "exponent too large"))?,
            (_, c) => return Err(CliError::syntax(c, "exponent must be an integer literal")),
        };
        if paren {
            self.expect_close()?;
        }
        Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }, col))
    }

    fn atom(&mut self) -> Result<Expr, CliError> {
        match self.bump() {
            (Tok::Int(n), _) => Ok(Expr::Int(n)),
            (Tok::Sym(s), col) => Ok(Expr::Sym(s, col)),
            (Tok::Open, _) => {
                let e = self.expr()?;
                self.expect_close()?;
                Ok(e)
            }
            (Tok::End, col) => Err(CliError::syntax(col, "unexpected end of input")),
            (t, col) => Err(CliError::syntax(col, format!("unexpected {}", describe(&t)))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("number {n}"),
        Tok::Sym(s) => format!("symbol '{}'", s.name()),
        Tok::Op(c) => format!("operator '{c}'"),
        Tok::Open => "'('".into(),
        Tok::Close => "')'".into(),
        Tok::End => "end of input".into(),
    }
}

/// Parses `src` into a syntax tree without interpreting symbols.
pub fn parse_syntax(src: &str) -> Result<Expr, CliError> {
    if src.trim().is_empty() {
        return Err(CliError::syntax(1, "empty expression"));
    }
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    match p.peek() {
        Tok::End => Ok(e),
        t => {
            let msg = format!("unexpected {}", describe(t));
            Err(CliError::syntax(p.col(), msg))
        }
    }
}

/// Where an expression is interpreted, which fixes its allowed symbols.
#[derive(Clone, Debug)]
pub enum Context {
    /// `Q(ζ_N)`: `z` only.
    Constants(Arc<CycloField>),
    /// `K = Q(ζ_N)(x, y)`: `x`, `y`, `z`.
    K(Arc<CycloField>),
    /// `L = K(ℓ)`: all symbols.
    L(Arc<ExtDescriptor>),
}

/// The value an expression elaborates to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Const(CycloNumber),
    K(RatFn),
    L(ExtElem),
}

/// Arithmetic shared by the three value domains.
trait Domain: Sized + Clone {
    fn int(&self, n: &BigInt) -> Self;
    fn sym(&self, s: Symbol, col: usize) -> Result<Self, CliError>;
    fn add(&self, a: &Self, b: &Self) -> Result<Self, Error>;
    fn sub(&self, a: &Self, b: &Self) -> Result<Self, Error>;
    fn mul(&self, a: &Self, b: &Self) -> Result<Self, Error>;
    fn div(&self, a: &Self, b: &Self) -> Result<Self, Error>;
    fn neg(&self, a: &Self) -> Self;
    fn pow(&self, a: &Self, e: i64) -> Result<Self, Error>;
}

fn rat_of(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

fn context_error(s: Symbol, col: usize, ctx: &str) -> CliError {
    CliError::Context { symbol: s.name(), column: col, context: ctx.to_string() }
}

impl Domain for CycloNumber {
    fn int(&self, n: &BigInt) -> Self {
        self.field().from_rat(rat_of(n))
    }
    fn sym(&self, s: Symbol, col: usize) -> Result<Self, CliError> {
        match s {
            Symbol::Z => Ok(self.field().zeta()),
            _ => Err(context_error(s, col, "constants")),
        }
    }
    fn add(&self, a: &Self, b: &Self) -> Result<Self, Error> {
        a.try_add(b)
    }
    fn sub(&self, a: &Self, b: &Self) -> Result<Self, Error> {
        a.try_sub(b)
    }
    fn mul(&self, a: &Self, b: &Self) -> Result<Self, Error> {
        a.try_mul(b)
    }
    fn div(&self, a: &Self, b: &Self) -> Result<Self, Error> {
        a.try_div(b)
    }
    fn neg(&self, a: &Self) -> Self {
        -a
    }
    fn pow(&self, a: &Self, e: i64) -> Result<Self, Error> {
        a.pow(e)
    }
}

impl Domain for RatFn {
    fn int(&self, n: &BigInt) -> Self {
        RatFn::from_rat(self.field(), rat_of(n))
    }
    fn sym(&self, s: Symbol, col: usize) -> Result<Self, CliError> {
        let f = self.field();
        match s {
            Symbol::X => Ok(RatFn::var(f, Var::X)),
            Symbol::Y => Ok(RatFn::var(f, Var::Y)),
            Symbol::Z => Ok(RatFn::constant(f.zeta())),
            Symbol::L => Err(context_error(s, col, "K")),
        }
    }
    fn add(&self, a: &Self, b: &Self) -> Result<Self, Error> {
        a.try_add(b)
    }
    fn sub(&self, a: &Self, b: &Self) -> Result<Self, Error> {
        a.try_sub(b)
    }
    fn mul(&self, a: &Self, b: &Self) -> Result<Self, Error> {
        a.try_mul(b)
    }
    fn div(&self, a: &Self, b: &Self) -> Result<Self, Error> {
        a.try_div(b)
    }
    fn neg(&self, a: &Self) -> Self {
        -a
    }
    fn pow(&self, a: &Self, e: i64) -> Result<Self, Error> {
        a.pow(e)
    }
}

impl Domain for ExtElem {
    fn int(&self, n: &BigInt) -> Self {
        ExtElem::from_base(self.desc(), RatFn::from_rat(self.desc().field(), rat_of(n)))
    }
    fn sym(&self, s: Symbol, col: usize) -> Result<Self, CliError> {
        let d = self.desc();
        match s {
            Symbol::L => Ok(ExtElem::ell(d)),
            _ => Ok(ExtElem::from_base(d, RatFn::zero(d.field()).sym(s, col)?)),
        }
    }
    fn add(&self, a: &Self, b: &Self) -> Result<Self, Error> {
        a.try_add(b)
    }
    fn sub(&self, a: &Self, b: &Self) -> Result<Self, Error> {
        a.try_sub(b)
    }
    fn mul(&self, a: &Self, b: &Self) -> Result<Self, Error> {
        a.try_mul(b)
    }
    fn div(&self, a: &Self, b: &Self) -> Result<Self, Error> {
        a.try_div(b)
    }
    fn neg(&self, a: &Self) -> Self {
        -a
    }
    fn pow(&self, a: &Self, e: i64) -> Result<Self, Error> {
        if e >= 0 {
            a.pow(e as u32)
        } else {
            a.inv()?.pow(e.unsigned_abs() as u32)
        }
    }
}

fn eval<D: Domain>(proto: &D, e: &Expr) -> Result<D, CliError> {
    Ok(match e {
        Expr::Int(n) => proto.int(n),
        Expr::Sym(s, col) => proto.sym(*s, *col)?,
        Expr::Neg(a) => proto.neg(&eval(proto, a)?),
        Expr::Add(a, b) => proto.add(&eval(proto, a)?, &eval(proto, b)?)?,
        Expr::Sub(a, b) => proto.sub(&eval(proto, a)?, &eval(proto, b)?)?,
        Expr::Mul(a, b) => proto.mul(&eval(proto, a)?, &eval(proto, b)?)?,
        Expr::Div(a, b, _) => proto.div(&eval(proto, a)?, &eval(proto, b)?)?,
        Expr::Pow(a, k, _) => proto.pow(&eval(proto, a)?, *k)?,
    })
}

/// Parses and interprets `src` in `ctx`.
pub fn parse_expr(src: &str, ctx: &Context) -> Result<Value, CliError> {
    let e = parse_syntax(src)?;
    Ok(match ctx {
        Context::Constants(f) => Value::Const(eval(&f.zero(), &e)?),
        Context::K(f) => Value::K(eval(&RatFn::zero(f), &e)?),
        Context::L(d) => Value::L(eval(&ExtElem::zero(d), &e)?),
    })
}

pub fn parse_constant(src: &str, field: &Arc<CycloField>) -> Result<CycloNumber, CliError> {
    match parse_expr(src, &Context::Constants(field.clone()))? {
        Value::Const(c) => Ok(c),
        _ => unreachable!("constants context"),
    }
}

pub fn parse_k(src: &str, field: &Arc<CycloField>) -> Result<RatFn, CliError> {
    match parse_expr(src, &Context::K(field.clone()))? {
        Value::K(r) => Ok(r),
        _ => unreachable!("K context"),
    }
}

pub fn parse_l(src: &str, desc: &Arc<ExtDescriptor>) -> Result<ExtElem, CliError> {
    match parse_expr(src, &Context::L(desc.clone()))? {
        Value::L(e) => Ok(e),
        _ => unreachable!("L context"),
    }
}
