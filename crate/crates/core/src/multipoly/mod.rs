//! Polynomials in `x`, `y` over `Q(ζ_N)`.

mod gcd;
mod modgcd;
mod modp;

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalars::{rat, CycloField, CycloNumber, Rat};

pub use gcd::{content_in, gcd, squarefree_decompose, SquarefreeDecomposition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

/// Exponent pair `x^x * y^y`, ordered graded then lexicographic with `x > y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0 };

    pub fn new(x: u32, y: u32) -> Self {
        Monomial { x, y }
    }

    pub fn degree(self) -> u32 {
        self.x + self.y
    }

    pub fn exp(self, var: Var) -> u32 {
        match var {
            Var::X => self.x,
            Var::Y => self.y,
        }
    }

    fn mul(self, o: Monomial) -> Monomial {
        Monomial::new(self.x + o.x, self.y + o.y)
    }

    fn checked_div(self, o: Monomial) -> Option<Monomial> {
        if o.x <= self.x && o.y <= self.y {
            Some(Monomial::new(self.x - o.x, self.y - o.y))
        } else {
            None
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.x.cmp(&other.x))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
    ExactDiv,
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Clone)]
pub struct MPoly {
    field: Arc<CycloField>,
    terms: BTreeMap<Monomial, CycloNumber>,
}

impl MPoly {
    pub fn zero(field: &Arc<CycloField>) -> Self {
        MPoly {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: &Arc<CycloField>) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: CycloNumber) -> Self {
        let field = c.field().clone();
        Self::monomial(&field, Monomial::ONE, c)
    }

    pub fn from_int(field: &Arc<CycloField>, n: i64) -> Self {
        Self::constant(field.from_int(n))
    }

    pub fn var(field: &Arc<CycloField>, v: Var) -> Self {
        let m = match v {
            Var::X => Monomial::new(1, 0),
            Var::Y => Monomial::new(0, 1),
        };
        Self::monomial(field, m, field.one())
    }

    pub fn monomial(field: &Arc<CycloField>, m: Monomial, c: CycloNumber) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly {
            field: field.clone(),
            terms,
        }
    }

    /// Sums the given terms; repeated monomials are combined.
    pub fn from_terms(
        field: &Arc<CycloField>,
        terms: impl IntoIterator<Item = (Monomial, CycloNumber)>,
    ) -> Self {
        let mut p = Self::zero(field);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: &CycloNumber) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                *e = &*e + c;
                if e.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial::ONE)
    }

    pub fn constant_value(&self) -> Option<CycloNumber> {
        if self.is_zero() {
            Some(self.field.zero())
        } else if self.is_constant() {
            self.terms.get(&Monomial::ONE).cloned()
        } else {
            None
        }
    }

    pub fn coeff(&self, m: Monomial) -> CycloNumber {
        self.terms
            .get(&m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &CycloNumber)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Leading term in canonical order.
    pub fn leading(&self) -> Option<(Monomial, &CycloNumber)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.leading().map(|(m, _)| m.degree())
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    pub fn is_rational(&self) -> bool {
        self.terms.values().all(|c| c.as_rational().is_some())
    }

    pub fn scale(&self, c: &CycloNumber) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field);
        }
        MPoly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        if r.is_zero() {
            return Self::zero(&self.field);
        }
        MPoly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(m, a)| (*m, a.scale(r))).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divides by the leading coefficient; returns the monic polynomial and
    /// the coefficient removed. Zero stays zero with unit 1.
    pub fn monic(&self) -> (Self, CycloNumber) {
        match self.leading() {
            None => (self.clone(), self.field.one()),
            Some((_, lc)) if lc.is_one() => (self.clone(), self.field.one()),
            Some((_, lc)) => {
                let lc = lc.clone();
                let inv = lc.inv().expect("nonzero leading coefficient");
                (self.scale(&inv), lc)
            }
        }
    }

    pub fn partial(&self, v: Var) -> Self {
        let mut out = Self::zero(&self.field);
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let nm = match v {
                Var::X => Monomial::new(m.x - 1, m.y),
                Var::Y => Monomial::new(m.x, m.y - 1),
            };
            out.terms.insert(nm, c.scale(&rat(e as i64)));
        }
        out
    }

    /// Quotient `q` with `self = q * b`, or `NotDivisible`.
    pub fn exact_div(&self, b: &MPoly) -> Result<MPoly> {
        let (mb, cb) = b.leading().ok_or(Error::DivisionByZero)?;
        if self.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        for v in [Var::X, Var::Y] {
            if self.degree_in(v) < b.degree_in(v) {
                return Err(Error::NotDivisible);
            }
        }
        let cb_inv = cb.inv()?;
        let mut r = self.terms.clone();
        let mut q = BTreeMap::new();
        while let Some((&mr, cr)) = r.iter().next_back() {
            let mq = mr.checked_div(mb).ok_or(Error::NotDivisible)?;
            let cq = cr * &cb_inv;
            for (m, c) in &b.terms {
                let key = m.mul(mq);
                let t = c * &cq;
                let remove = match r.get_mut(&key) {
                    Some(e) => {
                        *e = &*e - &t;
                        e.is_zero()
                    }
                    None => {
                        r.insert(key, -t);
                        false
                    }
                };
                if remove {
                    r.remove(&key);
                }
            }
            q.insert(mq, cq);
        }
        Ok(MPoly {
            field: self.field.clone(),
            terms: q,
        })
    }

    /// Exchanges the roles of `x` and `y`.
    pub fn swap_vars(&self) -> Self {
        MPoly {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.y, m.x), c.clone()))
                .collect(),
        }
    }

    /// Substitutes constants for both variables.
    pub fn eval(&self, x: &CycloNumber, y: &CycloNumber) -> CycloNumber {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let t = c * &x.pow(m.x as i64).expect("nonnegative power");
            acc = &acc + &(&t * &y.pow(m.y as i64).expect("nonnegative power"));
        }
        acc
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field.order() != other.field.order() {
            Err(Error::OrderMismatch {
                left: self.field.order(),
                right: other.field.order(),
            })
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let (big, small) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(*m, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, &-c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(&self.field);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        let (big, small) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        for (m, c) in &small.terms {
            for (mm, cc) in &big.terms {
                out.add_term(m.mul(*mm), &(c * cc));
            }
        }
        Ok(out)
    }
}

/// Ring operations with explicit error reporting.
pub fn poly_arith(a: &MPoly, b: &MPoly, op: PolyOp) -> Result<MPoly> {
    match op {
        PolyOp::Add => a.try_add(b),
        PolyOp::Sub => a.try_sub(b),
        PolyOp::Mul => a.try_mul(b),
        PolyOp::ExactDiv => {
            a.check(b)?;
            a.exact_div(b)
        }
    }
}

pub fn partial_derivative(a: &MPoly, v: Var) -> MPoly {
    a.partial(v)
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        self.field.order() == other.field.order() && self.terms == other.terms
    }
}

impl Eq for MPoly {}

macro_rules! poly_binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl<'a> $tr<&'a MPoly> for &'a MPoly {
            type Output = MPoly;
            fn $m(self, rhs: &'a MPoly) -> MPoly {
                self.$imp(rhs).expect("cyclotomic order mismatch")
            }
        }
        impl $tr for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                (&self).$imp(&rhs).expect("cyclotomic order mismatch")
            }
        }
    };
}

poly_binop!(Add, add, try_add);
poly_binop!(Sub, sub, try_sub);
poly_binop!(Mul, mul, try_mul);

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

/// How a coefficient prints in front of a monomial.
enum CoeffForm {
    /// Sign and magnitude of a single-term coefficient.
    Simple(bool, CycloNumber),
    Compound,
}

fn coeff_form(c: &CycloNumber) -> CoeffForm {
    let mut nz = c.coords().iter().enumerate().filter(|(_, v)| !v.is_zero());
    match (nz.next(), nz.next()) {
        (Some((_, v)), None) => {
            if v.is_negative() {
                CoeffForm::Simple(true, -c)
            } else {
                CoeffForm::Simple(false, c.clone())
            }
        }
        _ => CoeffForm::Compound,
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: Monomial) -> fmt::Result {
    let mut first = true;
    for (name, e) in [("x", m.x), ("y", m.y)] {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(name)?;
        if e > 1 {
            write!(f, "^{}", e)?;
        }
    }
    Ok(())
}

impl fmt::Display for MPoly {
    /// Canonical form, terms in descending graded-lex order, e.g.
    /// `(1/2)*x^2*y + z*x - 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, body) = match coeff_form(c) {
                CoeffForm::Simple(neg, abs) => (neg, Some(abs)),
                CoeffForm::Compound => (false, None),
            };
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let constant = *m == Monomial::ONE;
            match body {
                Some(abs) => {
                    if constant {
                        write!(f, "{}", abs)?;
                    } else if abs.is_one() {
                        // bare monomial
                    } else if abs.is_simple_integer_term() {
                        write!(f, "{}*", abs)?;
                    } else {
                        write!(f, "({})*", abs)?;
                    }
                }
                None => {
                    write!(f, "({})", c)?;
                    if !constant {
                        f.write_str("*")?;
                    }
                }
            }
            if !constant {
                write_monomial(f, *m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({})", self)
    }
}

/// Builds a polynomial with rational coefficients from `(coeff, ex, ey)`
/// triples. Mostly a convenience for tests and examples.
pub fn mpoly_from_ints(field: &Arc<CycloField>, terms: &[(i64, u32, u32)]) -> MPoly {
    MPoly::from_terms(
        field,
        terms
            .iter()
            .map(|&(c, ex, ey)| (Monomial::new(ex, ey), field.from_int(c))),
    )
}

/// All monomials of total degree in `lo..=hi`, ascending canonical order.
pub fn monomials_up_to(lo: u32, hi: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in lo..=hi {
        for x in 0..=d {
            out.push(Monomial::new(x, d - x));
        }
    }
    out
}
