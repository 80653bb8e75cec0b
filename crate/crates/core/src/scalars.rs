//! Rationals and the cyclotomic constant field `Q(ζ_N)`.
//!
//! Constants of first integrals are taken in `Q(ζ_N)` so that rational
//! linear dependence is decidable by exact linear algebra. Elements are
//! coordinate vectors over `Q` in the power basis `1, ζ, …, ζ^(φ(N)−1)`,
//! always fully reduced modulo the `N`-th cyclotomic polynomial.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// The field `Q(ζ_N)` together with its defining cyclotomic polynomial.
pub struct CycloField {
    order: u32,
    /// `Φ_N`, monic, coefficients from low to high degree.
    modulus: Vec<Rat>,
    /// Primes `p ≡ 1 (mod N)` with an image of `ζ_N` in `F_p`.
    reductions: Vec<(u64, u64)>,
}

impl CycloField {
    pub fn new(order: u32) -> Result<Arc<Self>> {
        if order == 0 {
            return Err(Error::InvalidArgument("cyclotomic order must be positive"));
        }
        let modulus = cyclotomic_polynomial(order)
            .into_iter()
            .map(Rat::from_integer)
            .collect();
        let reductions = reduction_primes(order).take(3).collect();
        Ok(Arc::new(CycloField {
            order,
            modulus,
            reductions,
        }))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Euler's totient of the order, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[Rat] {
        &self.modulus
    }

    /// Pairs `(p, w)` where `w` is a primitive `N`-th root of unity mod `p`,
    /// so `ζ ↦ w` is a ring map from the `p`-integral elements onto `F_p`.
    pub(crate) fn reductions(&self) -> &[(u64, u64)] {
        &self.reductions
    }

    pub fn zero(self: &Arc<Self>) -> CycloNumber {
        CycloNumber {
            field: self.clone(),
            coords: vec![Rat::zero(); self.degree()],
        }
    }

    pub fn one(self: &Arc<Self>) -> CycloNumber {
        self.from_rat(Rat::one())
    }

    pub fn from_rat(self: &Arc<Self>, r: Rat) -> CycloNumber {
        let mut c = self.zero();
        c.coords[0] = r;
        c
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> CycloNumber {
        self.from_rat(rat(n))
    }

    /// Builds an element from an arbitrary polynomial in `ζ`, reducing it.
    pub fn from_poly(self: &Arc<Self>, coeffs: Vec<Rat>) -> CycloNumber {
        CycloNumber {
            field: self.clone(),
            coords: self.reduce(coeffs),
        }
    }

    /// The generator `ζ_N`.
    pub fn zeta(self: &Arc<Self>) -> CycloNumber {
        self.zeta_pow(1)
    }

    /// `ζ_N^e` for any integer `e`.
    pub fn zeta_pow(self: &Arc<Self>, e: i64) -> CycloNumber {
        let e = e.rem_euclid(self.order as i64) as usize;
        let mut p = vec![Rat::zero(); e + 1];
        p[e] = Rat::one();
        self.from_poly(p)
    }

    /// The primitive `n`-th root of unity `ζ_N^(N/n)`; requires `n | N`.
    pub fn primitive_root(self: &Arc<Self>, n: u32) -> Result<CycloNumber> {
        if n == 0 || !self.order.is_multiple_of(n) {
            return Err(Error::OrderIncompatible {
                n,
                order: self.order,
            });
        }
        Ok(self.zeta_pow((self.order / n) as i64))
    }

    fn reduce(&self, mut p: Vec<Rat>) -> Vec<Rat> {
        let deg = self.degree();
        if p.len() > deg {
            for i in (deg..p.len()).rev() {
                if p[i].is_zero() {
                    continue;
                }
                let c = core::mem::replace(&mut p[i], Rat::zero());
                for j in 0..deg {
                    if !self.modulus[j].is_zero() {
                        let t = &c * &self.modulus[j];
                        p[i - deg + j] -= t;
                    }
                }
            }
        }
        p.resize(deg, Rat::zero());
        p
    }
}

impl fmt::Debug for CycloField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.order)
    }
}

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Eq for CycloField {}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for b in BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for b in BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Primes `p ≡ 1 (mod order)` below `2^62`, descending, each paired with a
/// primitive `order`-th root of unity mod `p`.
pub(crate) fn reduction_primes(order: u32) -> impl Iterator<Item = (u64, u64)> {
    let n = order as u64;
    let qs = prime_divisors(n);
    let mut p = ((1u64 << 62) - 1) / n * n + 1;
    core::iter::from_fn(move || loop {
        p -= n;
        if p < (1 << 40) {
            return None;
        }
        if !is_prime_u64(p) {
            continue;
        }
        let root = (2..)
            .map(|g| pow_mod(g, (p - 1) / n, p))
            .find(|&w| qs.iter().all(|&q| pow_mod(w, n / q, p) != 1));
        return root.map(|w| (p, w));
    })
}

fn to_u64(n: &BigInt) -> u64 {
    n.iter_u64_digits().next().unwrap_or(0)
}

/// Integer coefficients of `Φ_n`, from the Möbius product formula.
fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    let mut num = vec![BigInt::one()];
    let mut den = vec![BigInt::one()];
    for d in 1..=n {
        if !n.is_multiple_of(d) {
            continue;
        }
        let mut f = vec![BigInt::zero(); d as usize + 1];
        f[0] = -BigInt::one();
        f[d as usize] = BigInt::one();
        match mobius(n / d) {
            1 => num = int_poly_mul(&num, &f),
            -1 => den = int_poly_mul(&den, &f),
            _ => {}
        }
    }
    int_poly_exact_div(num, &den)
}

fn mobius(mut n: u32) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

fn int_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a polynomial with leading coefficient ±1.
fn int_poly_exact_div(mut num: Vec<BigInt>, den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let lead = &den[dd];
    let mut q = vec![BigInt::zero(); num.len() - dd];
    for i in (0..q.len()).rev() {
        let c = &num[i + dd] / lead;
        for j in 0..=dd {
            num[i + j] -= &c * &den[j];
        }
        q[i] = c;
    }
    debug_assert!(num.iter().all(Zero::is_zero));
    q
}

/// An element of `Q(ζ_N)`.
#[derive(Clone)]
pub struct CycloNumber {
    field: Arc<CycloField>,
    coords: Vec<Rat>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl CycloNumber {
    pub fn field(&self) -> &Arc<CycloField> {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// The rational value if the element lies in `Q`.
    /// Image under `ζ ↦ w` in `F_p`, if `p` divides no denominator.
    pub(crate) fn reduce_mod(&self, p: u64, w: u64) -> Option<u64> {
        let mut acc = 0u64;
        let mut wi = 1u64;
        for c in &self.coords {
            if !c.is_zero() {
                let big_p = BigInt::from(p);
                let den = c.denom().mod_floor(&big_p);
                if den.is_zero() {
                    return None;
                }
                let num = c.numer().mod_floor(&big_p);
                let (num, den) = (to_u64(&num), to_u64(&den));
                let v = mul_mod(num, pow_mod(den, p - 2, p), p);
                acc = (acc + mul_mod(v, wi, p)) % p;
            }
            wi = mul_mod(wi, w, p);
        }
        Some(acc)
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    pub fn zero_like(&self) -> Self {
        self.field.zero()
    }

    pub fn one_like(&self) -> Self {
        self.field.one()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field.order != other.field.order {
            Err(Error::OrderMismatch {
                left: self.field.order,
                right: other.field.order,
            })
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycloNumber {
            field: self.field.clone(),
            coords,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycloNumber {
            field: self.field.clone(),
            coords,
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if let Some(r) = self.as_rational() {
            return Ok(other.scale(r));
        }
        if let Some(r) = other.as_rational() {
            return Ok(self.scale(r));
        }
        let n = self.coords.len();
        let mut prod = vec![Rat::zero(); 2 * n - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(self.field.from_poly(prod))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        self.try_mul(&other.inv()?)
    }

    /// Multiplicative inverse by extended Euclid against `Φ_N`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(self.field.from_rat(r.recip()));
        }
        let s = qpoly_inverse_mod(&self.coords, self.field.modulus());
        Ok(self.field.from_poly(s))
    }

    pub fn scale(&self, r: &Rat) -> Self {
        CycloNumber {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.one_like();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// True if the element has a single nonzero coordinate with an integer
    /// value, i.e. it prints without a `+`/`-` between terms or a fraction bar.
    pub(crate) fn is_simple_integer_term(&self) -> bool {
        let mut nz = self.coords.iter().filter(|c| !c.is_zero());
        match (nz.next(), nz.next()) {
            (Some(c), None) => c.is_integer(),
            _ => false,
        }
    }
}

/// The four field operations with explicit error reporting.
pub fn cyclo_arith(a: &CycloNumber, b: &CycloNumber, op: ArithOp) -> Result<CycloNumber> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
        ArithOp::Div => a.try_div(b),
    }
}

/// Inverse of `a` modulo the irreducible `m` over `Q`.
fn qpoly_inverse_mod(a: &[Rat], m: &[Rat]) -> Vec<Rat> {
    // invariant: s_i * a ≡ r_i (mod m)
    let mut r0 = qpoly_trim(m.to_vec());
    let mut r1 = qpoly_trim(a.to_vec());
    let mut s0: Vec<Rat> = Vec::new();
    let mut s1: Vec<Rat> = vec![Rat::one()];
    while r1.len() > 1 {
        let (q, r) = qpoly_divrem(&r0, &r1);
        let qs = qpoly_mul(&q, &s1);
        let s2 = qpoly_sub(&s0, &qs);
        r0 = core::mem::replace(&mut r1, r);
        s0 = core::mem::replace(&mut s1, s2);
    }
    // r1 is a nonzero constant since m is irreducible and a ≢ 0
    let c = r1[0].recip();
    s1.iter().map(|x| x * &c).collect()
}

fn qpoly_trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn qpoly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    qpoly_trim(out)
}

fn qpoly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let mut out = vec![Rat::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    qpoly_trim(out)
}

fn qpoly_divrem(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() <= db {
        return (Vec::new(), qpoly_trim(r));
    }
    let lead_inv = b[db].recip();
    let mut q = vec![Rat::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for j in 0..=db {
            let t = &c * &b[j];
            r[i + j] -= t;
        }
        q[i] = c;
    }
    r.truncate(db);
    (qpoly_trim(q), qpoly_trim(r))
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coords == other.coords
    }
}

impl Eq for CycloNumber {}

impl fmt::Display for CycloNumber {
    /// Polynomial in `z` with ascending powers, e.g. `1/2 + 3*z^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", abs)?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{}*", abs)?;
                    }
                    if i == 1 {
                        f.write_str("z")?;
                    } else {
                        write!(f, "z^{}", i)?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]_{}", self, self.field.order)
    }
}

macro_rules! cyclo_binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl<'a> $tr<&'a CycloNumber> for &'a CycloNumber {
            type Output = CycloNumber;
            fn $m(self, rhs: &'a CycloNumber) -> CycloNumber {
                self.$imp(rhs).expect("cyclotomic order mismatch")
            }
        }
        impl $tr for CycloNumber {
            type Output = CycloNumber;
            fn $m(self, rhs: CycloNumber) -> CycloNumber {
                (&self).$imp(&rhs).expect("cyclotomic order mismatch")
            }
        }
    };
}

cyclo_binop!(Add, add, try_add);
cyclo_binop!(Sub, sub, try_sub);
cyclo_binop!(Mul, mul, try_mul);

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        -&self
    }
}

/// Outcome of a rational linear-dependence test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearDependence {
    Independent,
    /// Integer relation with gcd 1 and positive leading entry.
    Dependent(Vec<Rat>),
}

/// Decides whether the constants satisfy a nontrivial relation `Σ r_i c_i = 0`
/// with rational `r_i`.
pub fn q_linear_dependence(cs: &[CycloNumber]) -> Result<LinearDependence> {
    let first = cs
        .first()
        .ok_or(Error::InvalidArgument("empty constant list"))?;
    for c in cs {
        first.check(c)?;
    }
    let dim = first.field.degree();
    let rows: Vec<Vec<Rat>> = (0..dim)
        .map(|i| cs.iter().map(|c| c.coords[i].clone()).collect())
        .collect();
    let kernel = linalg::rational_kernel(&rows, cs.len());
    Ok(match kernel.into_iter().next() {
        Some(rel) => LinearDependence::Dependent(rel),
        None => LinearDependence::Independent,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    /// `c_1..c_m, ζc_1..ζc_m` are dependent; the relation is over that list.
    Obstructed(Vec<Rat>),
    Unobstructed,
}

/// Tests whether `c_1, …, c_m, ζc_1, …, ζc_m` are linearly dependent over `Q`
/// for the primitive `n`-th root of unity `ζ = ζ_N^(N/n)`.
///
/// `Unobstructed` excludes an exceptional field with cyclic extension degree
/// `n` whose log-term constants are `cs`.
pub fn degree_obstruction(cs: &[CycloNumber], n: u32) -> Result<Obstruction> {
    if n < 2 {
        return Err(Error::InvalidArgument("extension degree must be at least 2"));
    }
    let first = cs
        .first()
        .ok_or(Error::InvalidArgument("empty constant list"))?;
    let zeta = first.field.primitive_root(n)?;
    let mut all: Vec<CycloNumber> = cs.to_vec();
    for c in cs {
        all.push(zeta.try_mul(c)?);
    }
    Ok(match q_linear_dependence(&all)? {
        LinearDependence::Dependent(rel) => Obstruction::Obstructed(rel),
        LinearDependence::Independent => Obstruction::Unobstructed,
    })
}

/// Lcm of the denominators of a slice of rationals.
pub(crate) fn denominator_lcm<'a>(rs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    rs.into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}
