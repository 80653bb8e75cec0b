//! Cyclic Kummer extensions `L = K(ℓ)` with `ℓⁿ = k`.
//!
//! Elements are coordinate vectors over `K` in the basis `1, ℓ, …, ℓⁿ⁻¹`.
//! The generator `τ` of the Galois group acts by `τ(ℓ) = ζℓ` for the
//! primitive root `ζ` fixed in the descriptor.
//!
//! Irreducibility of `Xⁿ − k` is not checked up front. A reducible
//! polynomial shows up as [`Error::ZeroDivisor`] when inverting.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::multipoly::{squarefree_decompose, Var};
use crate::ratfield::{dlog_components, RatFn};
use crate::scalars::{rat, rat_frac, CycloField, CycloNumber};

/// `n`, `k` and the primitive root `ζ` defining `L = K(ⁿ√k)`.
pub struct ExtDescriptor {
    n: u32,
    k: RatFn,
    zeta: CycloNumber,
    dlog_k: (RatFn, RatFn),
}

impl ExtDescriptor {
    pub fn new(n: u32, k: RatFn, zeta: CycloNumber) -> Result<Arc<Self>> {
        if n < 2 {
            return Err(Error::InvalidArgument("extension degree must be at least 2"));
        }
        if k.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if zeta.order() != k.field().order() {
            return Err(Error::OrderMismatch {
                left: zeta.order(),
                right: k.field().order(),
            });
        }
        if !zeta.pow(n as i64)?.is_one() || (1..n).any(|j| zeta.pow(j as i64).map_or(true, |p| p.is_one())) {
            return Err(Error::InvalidArgument("zeta is not a primitive n-th root of unity"));
        }
        let dlog_k = dlog_components(&k)?;
        Ok(Arc::new(ExtDescriptor { n, k, zeta, dlog_k }))
    }

    /// Uses `ζ = ζ_N^(N/n)`, which needs `n | N`.
    pub fn with_default_root(n: u32, k: RatFn) -> Result<Arc<Self>> {
        let zeta = k.field().primitive_root(n)?;
        Self::new(n, k, zeta)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> &RatFn {
        &self.k
    }

    pub fn zeta(&self) -> &CycloNumber {
        &self.zeta
    }

    pub fn field(&self) -> &Arc<CycloField> {
        self.k.field()
    }

    /// `∂k / k` for the given variable.
    pub fn dlog_k(&self, v: Var) -> &RatFn {
        match v {
            Var::X => &self.dlog_k.0,
            Var::Y => &self.dlog_k.1,
        }
    }

    /// Exponent-gcd minimality heuristic.
    ///
    /// Takes the squarefree multiplicities of the numerator and denominator
    /// of `k` and returns `Some(d)` when `d = gcd(n, multiplicities) > 1`.
    /// Then `k` is a `d`-th power up to a constant and `[L:K] ≤ n/d`.
    /// `None` does not certify irreducibility of `Xⁿ − k`.
    pub fn minimality_warning(&self) -> Option<u32> {
        let mut d = self.n;
        for p in [self.k.num(), self.k.den()] {
            if p.is_constant() {
                continue;
            }
            for (_, m) in squarefree_decompose(p).factors {
                d = d.gcd(&m);
            }
        }
        if d > 1 && !self.k.is_constant() {
            Some(d)
        } else {
            None
        }
    }
}

impl PartialEq for ExtDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.zeta == other.zeta && self.k == other.k
    }
}

impl fmt::Debug for ExtDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ExtDescriptor {{ n: {}, k: {}, zeta: {}, N: {} }}",
            self.n,
            self.k,
            self.zeta,
            self.zeta.order()
        )
    }
}

fn same_desc(a: &Arc<ExtDescriptor>, b: &Arc<ExtDescriptor>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// An element `Σ cᵢ ℓⁱ` of `L`.
#[derive(Clone)]
pub struct ExtElem {
    desc: Arc<ExtDescriptor>,
    coords: Vec<RatFn>,
}

impl ExtElem {
    pub fn new(desc: &Arc<ExtDescriptor>, coords: Vec<RatFn>) -> Result<Self> {
        if coords.len() != desc.n as usize {
            return Err(Error::InvalidArgument("coordinate count must equal n"));
        }
        Ok(ExtElem {
            desc: desc.clone(),
            coords,
        })
    }

    pub fn zero(desc: &Arc<ExtDescriptor>) -> Self {
        let z = RatFn::zero(desc.field());
        ExtElem {
            desc: desc.clone(),
            coords: vec![z; desc.n as usize],
        }
    }

    pub fn one(desc: &Arc<ExtDescriptor>) -> Self {
        Self::from_base(desc, RatFn::one(desc.field()))
    }

    /// Embeds an element of `K`.
    pub fn from_base(desc: &Arc<ExtDescriptor>, r: RatFn) -> Self {
        let mut e = Self::zero(desc);
        e.coords[0] = r;
        e
    }

    /// `r · ℓⁱ` for `i < n`.
    pub fn monomial(desc: &Arc<ExtDescriptor>, i: usize, r: RatFn) -> Self {
        let mut e = Self::zero(desc);
        e.coords[i] = r;
        e
    }

    /// The generator `ℓ`.
    pub fn ell(desc: &Arc<ExtDescriptor>) -> Self {
        Self::monomial(desc, 1, RatFn::one(desc.field()))
    }

    pub fn desc(&self) -> &Arc<ExtDescriptor> {
        &self.desc
    }

    pub fn coords(&self) -> &[RatFn] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &RatFn {
        &self.coords[i]
    }

    pub fn zero_like(&self) -> Self {
        Self::zero(&self.desc)
    }

    pub fn one_like(&self) -> Self {
        Self::one(&self.desc)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(RatFn::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(RatFn::is_zero)
    }

    /// The coordinate in `K` when all higher coordinates vanish.
    pub fn as_base(&self) -> Option<&RatFn> {
        if self.coords[1..].iter().all(RatFn::is_zero) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    /// Constant iff both partial derivatives vanish.
    pub fn is_constant(&self) -> bool {
        self.d_partial(Var::X).is_zero() && self.d_partial(Var::Y).is_zero()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_desc(&self.desc, &other.desc) {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<_>>()?;
        Ok(ExtElem {
            desc: self.desc.clone(),
            coords,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    /// Product in `K[X]/(Xⁿ − k)`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if let Some(r) = self.as_base() {
            return Ok(other.scale_base(r));
        }
        if let Some(r) = other.as_base() {
            return Ok(self.scale_base(r));
        }
        let n = self.desc.n as usize;
        let zero = RatFn::zero(self.desc.field());
        let mut low = vec![zero.clone(); n];
        let mut high = vec![zero; n];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = a.try_mul(b)?;
                if i + j < n {
                    low[i + j] = low[i + j].try_add(&t)?;
                } else {
                    high[i + j - n] = high[i + j - n].try_add(&t)?;
                }
            }
        }
        for (s, h) in high.iter().enumerate() {
            if !h.is_zero() {
                low[s] = low[s].try_add(&h.try_mul(&self.desc.k)?)?;
            }
        }
        Ok(ExtElem {
            desc: self.desc.clone(),
            coords: low,
        })
    }

    pub fn scale_base(&self, r: &RatFn) -> Self {
        ExtElem {
            desc: self.desc.clone(),
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
    }

    pub fn scale(&self, c: &CycloNumber) -> Self {
        ExtElem {
            desc: self.desc.clone(),
            coords: self.coords.iter().map(|r| r.scale(c)).collect(),
        }
    }

    /// Inverse by extended Euclid of `Σ cᵢXⁱ` against `Xⁿ − k` in `K[X]`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_base() {
            return Ok(Self::from_base(&self.desc, r.inv()?));
        }
        let n = self.desc.n as usize;
        let field = self.desc.field();
        let mut modulus = vec![RatFn::zero(field); n + 1];
        modulus[0] = -&self.desc.k;
        modulus[n] = RatFn::one(field);
        let mut r0 = modulus;
        let mut r1 = kx_trim(self.coords.clone());
        let mut s0: Vec<RatFn> = Vec::new();
        let mut s1: Vec<RatFn> = vec![RatFn::one(field)];
        while r1.len() > 1 {
            let (q, r) = kx_divrem(&r0, &r1)?;
            let s2 = kx_sub(&s0, &kx_mul(&q, &s1)?)?;
            r0 = core::mem::replace(&mut r1, r);
            s0 = core::mem::replace(&mut s1, s2);
        }
        if r1.is_empty() {
            return Err(Error::ZeroDivisor);
        }
        let c = r1[0].inv()?;
        let mut coords: Vec<RatFn> = s1.iter().map(|s| s * &c).collect();
        coords.resize(n, RatFn::zero(field));
        Ok(ExtElem {
            desc: self.desc.clone(),
            coords,
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = self.one_like();
        for _ in 0..e {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// `τʲ`: coordinate `i` is multiplied by `ζ^(i·j)`.
    pub fn tau(&self, j: i64) -> Self {
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i == 0 || c.is_zero() {
                    c.clone()
                } else {
                    let z = self.desc.zeta.pow(i as i64 * j).expect("root of unity");
                    c.scale(&z)
                }
            })
            .collect();
        ExtElem {
            desc: self.desc.clone(),
            coords,
        }
    }

    /// `Σ_{j<n} τʲ(a)`.
    pub fn trace(&self) -> RatFn {
        // coordinate i of the orbit sum is (Σ_j ζ^(ij)) · cᵢ
        let n = self.desc.n as i64;
        let mut result = None;
        for (i, c) in self.coords.iter().enumerate() {
            let mut s = self.desc.zeta.zero_like();
            for j in 0..n {
                s = &s + &self.desc.zeta.pow(i as i64 * j).expect("root of unity");
            }
            if i == 0 {
                result = Some(c.scale(&s));
            } else {
                assert!(s.is_zero(), "orbit sum of a nontrivial root of unity must vanish");
            }
        }
        result.expect("n >= 2")
    }

    /// `Π_{j<n} τʲ(a)`, which lies in `K`.
    pub fn norm(&self) -> Result<RatFn> {
        let mut acc = self.clone();
        for j in 1..self.desc.n as i64 {
            acc = acc.try_mul(&self.tau(j))?;
        }
        match acc.as_base() {
            Some(r) => Ok(r.clone()),
            None => Err(Error::InternalInvariantViolation("norm left K")),
        }
    }

    /// Derivation extending `∂` on `K` by `∂ℓ = (1/n)(∂k/k)ℓ`.
    pub fn d_partial(&self, v: Var) -> Self {
        let n = self.desc.n as i64;
        let dk = self.desc.dlog_k(v);
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let dc = c.d_partial(v);
                if i == 0 || c.is_zero() || dk.is_zero() {
                    dc
                } else {
                    let t = (dk * c).scale_rat(&rat_frac(i as i64, n));
                    &dc + &t
                }
            })
            .collect();
        ExtElem {
            desc: self.desc.clone(),
            coords,
        }
    }
}

fn kx_trim(mut p: Vec<RatFn>) -> Vec<RatFn> {
    while p.last().is_some_and(RatFn::is_zero) {
        p.pop();
    }
    p
}

fn kx_mul(a: &[RatFn], b: &[RatFn]) -> Result<Vec<RatFn>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = vec![a[0].zero_like(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if !x.is_zero() && !y.is_zero() {
                out[i + j] = out[i + j].try_add(&x.try_mul(y)?)?;
            }
        }
    }
    Ok(kx_trim(out))
}

fn kx_sub(a: &[RatFn], b: &[RatFn]) -> Result<Vec<RatFn>> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i);
        let y = b.get(i);
        out.push(match (x, y) {
            (Some(x), Some(y)) => x.try_sub(y)?,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => -y,
            (None, None) => unreachable!(),
        });
    }
    Ok(kx_trim(out))
}

fn kx_divrem(a: &[RatFn], b: &[RatFn]) -> Result<(Vec<RatFn>, Vec<RatFn>)> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    if r.len() <= db {
        return Ok((Vec::new(), kx_trim(r)));
    }
    let lead_inv = b[db].inv()?;
    let mut q = vec![b[0].zero_like(); r.len() - db];
    for i in (0..q.len()).rev() {
        if r[i + db].is_zero() {
            continue;
        }
        let c = r[i + db].try_mul(&lead_inv)?;
        for j in 0..=db {
            if !b[j].is_zero() {
                r[i + j] = r[i + j].try_sub(&c.try_mul(&b[j])?)?;
            }
        }
        q[i] = c;
    }
    r.truncate(db);
    Ok((kx_trim(q), kx_trim(r)))
}

impl PartialEq for ExtElem {
    fn eq(&self, other: &Self) -> bool {
        same_desc(&self.desc, &other.desc) && self.coords == other.coords
    }
}

impl Eq for ExtElem {}

macro_rules! ext_binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl<'a> $tr<&'a ExtElem> for &'a ExtElem {
            type Output = ExtElem;
            fn $m(self, rhs: &'a ExtElem) -> ExtElem {
                self.$imp(rhs).expect("extension descriptor mismatch")
            }
        }
        impl $tr for ExtElem {
            type Output = ExtElem;
            fn $m(self, rhs: ExtElem) -> ExtElem {
                (&self).$imp(&rhs).expect("extension descriptor mismatch")
            }
        }
    };
}

ext_binop!(Add, add, try_add);
ext_binop!(Sub, sub, try_sub);
ext_binop!(Mul, mul, try_mul);

impl Neg for &ExtElem {
    type Output = ExtElem;
    fn neg(self) -> ExtElem {
        ExtElem {
            desc: self.desc.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for ExtElem {
    type Output = ExtElem;
    fn neg(self) -> ExtElem {
        -&self
    }
}

impl fmt::Display for ExtElem {
    /// `(c0) + (c1)*l + (c2)*l^2`, zero coordinates omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            match i {
                0 => {}
                1 => f.write_str("*l")?,
                _ => write!(f, "*l^{}", i)?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtElem({})", self)
    }
}

pub fn ext_mul(a: &ExtElem, b: &ExtElem) -> Result<ExtElem> {
    a.try_mul(b)
}

pub fn ext_inv(a: &ExtElem) -> Result<ExtElem> {
    a.inv()
}

pub fn tau_apply(a: &ExtElem, j: i64) -> ExtElem {
    a.tau(j)
}

pub fn trace(a: &ExtElem) -> RatFn {
    a.trace()
}

pub fn norm(a: &ExtElem) -> Result<RatFn> {
    a.norm()
}

pub fn ext_d_partial(a: &ExtElem, v: Var) -> ExtElem {
    a.d_partial(v)
}

/// `w − trace(w)/n`, an element of trace zero.
pub fn trace_zero_from(w: &ExtElem) -> ExtElem {
    let n = w.desc.n as i64;
    let t = w.trace().scale_rat(&rat_frac(1, n));
    w - &ExtElem::from_base(&w.desc, t)
}

/// `τ(w)/w`, an element of norm one.
pub fn norm_one_from(w: &ExtElem) -> Result<ExtElem> {
    w.tau(1).try_div(w)
}

/// `(g²+k)/(g²−k) + (2g/(g²−k))ℓ` in a quadratic extension; its norm
/// `a² − kb²` is 1.
pub fn quadratic_norm_one(g: &RatFn, desc: &Arc<ExtDescriptor>) -> Result<ExtElem> {
    if desc.n != 2 {
        return Err(Error::InvalidArgument("quadratic_norm_one needs n = 2"));
    }
    let g2 = g * g;
    let den = g2.try_sub(&desc.k)?;
    if den.is_zero() {
        return Err(Error::DegenerateG);
    }
    let a = g2.try_add(&desc.k)?.try_div(&den)?;
    let b = g.scale_rat(&rat(2)).try_div(&den)?;
    ExtElem::new(desc, vec![a, b])
}
