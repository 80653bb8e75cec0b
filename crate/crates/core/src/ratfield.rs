//! The differential field `K` of rational functions in `x`, `y`.

use alloc::string::ToString;
use alloc::sync::Arc;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::multipoly::{content_in, gcd, MPoly, Var};
use crate::scalars::{ArithOp, CycloField, CycloNumber, Rat};

/// Reduced fraction `num / den`: coprime parts, `den` monic in canonical
/// order, zero stored as `0/1`. Equality is therefore structural.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFn {
    num: MPoly,
    den: MPoly,
}

impl RatFn {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            let one = MPoly::one(num.field());
            return RatFn { num, den: one };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (
                    num.exact_div(&g).expect("gcd divides numerator"),
                    den.exact_div(&g).expect("gcd divides denominator"),
                )
            }
        };
        Self::normalize_den(num, den)
    }

    fn normalize_den(num: MPoly, den: MPoly) -> Self {
        let (den, lc) = den.monic();
        if lc.is_one() {
            RatFn { num, den }
        } else {
            let inv = lc.inv().expect("nonzero leading coefficient");
            RatFn {
                num: num.scale(&inv),
                den,
            }
        }
    }

    pub fn from_poly(p: MPoly) -> Self {
        let den = MPoly::one(p.field());
        RatFn { num: p, den }
    }

    pub fn zero(field: &Arc<CycloField>) -> Self {
        Self::from_poly(MPoly::zero(field))
    }

    pub fn one(field: &Arc<CycloField>) -> Self {
        Self::from_poly(MPoly::one(field))
    }

    pub fn constant(c: CycloNumber) -> Self {
        Self::from_poly(MPoly::constant(c))
    }

    pub fn from_int(field: &Arc<CycloField>, n: i64) -> Self {
        Self::from_poly(MPoly::from_int(field, n))
    }

    pub fn from_rat(field: &Arc<CycloField>, r: Rat) -> Self {
        Self::constant(field.from_rat(r))
    }

    pub fn var(field: &Arc<CycloField>, v: Var) -> Self {
        Self::from_poly(MPoly::var(field, v))
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn field(&self) -> &Arc<CycloField> {
        self.num.field()
    }

    pub fn zero_like(&self) -> Self {
        Self::zero(self.field())
    }

    pub fn one_like(&self) -> Self {
        Self::one(self.field())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// True iff both partial derivatives vanish.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<CycloNumber> {
        if self.is_constant() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.den == other.den {
            let num = self.num.try_add(&other.num)?;
            return Ok(Self::reduce(num, self.den.clone()));
        }
        let g = gcd(&self.den, &other.den);
        if g.is_one() {
            let num = &(&self.num * &other.den) + &(&other.num * &self.den);
            let den = &self.den * &other.den;
            return Ok(Self::normalize_den(num, den));
        }
        let d1 = self.den.exact_div(&g)?;
        let d2 = other.den.exact_div(&g)?;
        let num = &(&self.num * &d2) + &(&other.num * &d1);
        // gcd(num, d1*d2) = 1 already; only g can share factors with num
        let den = &(&d1 * &d2) * &g;
        if num.is_zero() {
            return Ok(self.zero_like());
        }
        let h = gcd(&num, &g);
        if h.is_one() {
            Ok(Self::normalize_den(num, den))
        } else {
            Ok(Self::normalize_den(num.exact_div(&h)?, den.exact_div(&h)?))
        }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            if self.field().order() != other.field().order() {
                return Err(Error::OrderMismatch {
                    left: self.field().order(),
                    right: other.field().order(),
                });
            }
            return Ok(self.zero_like());
        }
        if let Some(c) = self.constant_value() {
            return Ok(other.scale(&c));
        }
        if let Some(c) = other.constant_value() {
            return Ok(self.scale(&c));
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.exact_div(&g1)?;
        let d2 = other.den.exact_div(&g1)?;
        let n2 = other.num.exact_div(&g2)?;
        let d1 = self.den.exact_div(&g2)?;
        Ok(Self::normalize_den(n1.try_mul(&n2)?, d1.try_mul(&d2)?))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize_den(self.den.clone(), self.num.clone()))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.inv()?)
    }

    pub fn scale(&self, c: &CycloNumber) -> Self {
        if c.is_zero() {
            return self.zero_like();
        }
        RatFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        self.scale(&self.field().from_rat(r.clone()))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs() as u32;
        Ok(RatFn {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// Partial derivative by the quotient rule.
    pub fn d_partial(&self, v: Var) -> Self {
        let dn = self.num.partial(v);
        if self.den.is_one() {
            return Self::from_poly(dn);
        }
        let dd = self.den.partial(v);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        let g = gcd(&self.den, &dd);
        let d_red = self.den.exact_div(&g).expect("gcd divides");
        let dd_red = dd.exact_div(&g).expect("gcd divides");
        let num = &(&dn * &d_red) - &(&self.num * &dd_red);
        if num.is_zero() {
            return self.zero_like();
        }
        // pole orders along factors involving v rise by exactly one, so only
        // the v-free part of the denominator can cancel
        let den = &self.den * &d_red;
        let c = content_in(&self.den, v);
        let h = if c.is_constant() { c } else { gcd(&num, &c) };
        if h.is_one() {
            Self::normalize_den(num, den)
        } else {
            Self::normalize_den(
                num.exact_div(&h).expect("gcd divides"),
                den.exact_div(&h).expect("gcd divides"),
            )
        }
    }
}

/// Field operations with explicit error reporting.
pub fn ratfn_arith(a: &RatFn, b: &RatFn, op: ArithOp) -> Result<RatFn> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
        ArithOp::Div => a.try_div(b),
    }
}

pub fn d_partial(a: &RatFn, v: Var) -> RatFn {
    a.d_partial(v)
}

/// `(u_x / u, u_y / u)`.
pub fn dlog_components(u: &RatFn) -> Result<(RatFn, RatFn)> {
    let inv = u.inv()?;
    Ok((
        u.d_partial(Var::X).try_mul(&inv)?,
        u.d_partial(Var::Y).try_mul(&inv)?,
    ))
}

macro_rules! ratfn_binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl<'a> $tr<&'a RatFn> for &'a RatFn {
            type Output = RatFn;
            fn $m(self, rhs: &'a RatFn) -> RatFn {
                self.$imp(rhs).expect("cyclotomic order mismatch")
            }
        }
        impl $tr for RatFn {
            type Output = RatFn;
            fn $m(self, rhs: RatFn) -> RatFn {
                (&self).$imp(&rhs).expect("cyclotomic order mismatch")
            }
        }
    };
}

ratfn_binop!(Add, add, try_add);
ratfn_binop!(Sub, sub, try_sub);
ratfn_binop!(Mul, mul, try_mul);

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        -&self
    }
}

impl From<MPoly> for RatFn {
    fn from(p: MPoly) -> Self {
        RatFn::from_poly(p)
    }
}

fn write_part(f: &mut fmt::Formatter<'_>, p: &MPoly) -> fmt::Result {
    if p.num_terms() > 1 {
        write!(f, "({})", p)
    } else {
        write!(f, "{}", p)
    }
}

impl fmt::Display for RatFn {
    /// `num / den`, the numerator parenthesized when it has several terms and
    /// the denominator unless it is a bare power product; the denominator is
    /// omitted when it is 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        write_part(f, &self.num)?;
        f.write_str(" / ")?;
        let den = self.den.to_string();
        if self.den.num_terms() > 1 || den.contains('*') {
            write!(f, "({})", den)
        } else {
            f.write_str(&den)
        }
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({})", self)
    }
}
