//! Truncated Puiseux series in descending powers of `t^(1/ram)`.
//!
//! A series stores its nonzero coefficients by exponent together with a
//! bound: every coefficient at an exponent `≥ bound` is known, everything
//! below is unknown. Operations only ever claim coefficients the inputs
//! determine.
//!
//! Coefficients live in a [`DiffField`], by default `K`. A tower step gives
//! `t` a derivative: `dt = t·dR` for an exponential, `dt = dR/R` for a
//! logarithm.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::diffforms::{differential, dlog, wedge, DiffField, OneForm};
use crate::error::{Error, Result};
use crate::multipoly::Var;
use crate::ratfield::RatFn;
use crate::scalars::{CycloNumber, Rat};

/// `Σ c_e t^(e/ram)` known for `e ≥ bound`.
#[derive(Clone, PartialEq, Debug)]
pub struct PSeries<C = RatFn> {
    ram: u32,
    /// Exponent numerators over `ram`, nonzero coefficients only.
    terms: BTreeMap<i64, C>,
    bound: i64,
    zero: C,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    Exponential,
    Logarithmic,
}

/// One tower step: `dt/t = dR` or `dt = dR/R`.
#[derive(Clone, Debug, PartialEq)]
pub struct TowerStep {
    kind: StepKind,
    r: RatFn,
}

impl TowerStep {
    pub fn new(kind: StepKind, r: RatFn) -> Result<Self> {
        if kind == StepKind::Logarithmic && r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(TowerStep { kind, r })
    }

    pub fn kind(&self) -> StepKind {
        self.kind
    }

    pub fn r(&self) -> &RatFn {
        &self.r
    }

    /// `δt` as a coefficient times `t^shift`: `(δR, 1)` or `(δR/R, 0)`.
    fn dt<C: DiffField>(&self, like: &C, v: Var) -> Result<C> {
        let r = like.embed(&self.r);
        let dr = r.d_partial(v);
        match self.kind {
            StepKind::Exponential => Ok(dr),
            StepKind::Logarithmic => dr.try_div(&r),
        }
    }

    /// `dR` or `dR/R`, the form `dt/t` resp. `dt`.
    fn form<C: DiffField>(&self, like: &C) -> Result<OneForm<C>> {
        let r = like.embed(&self.r);
        match self.kind {
            StepKind::Exponential => Ok(differential(&r)),
            StepKind::Logarithmic => dlog(&r),
        }
    }
}

/// `a = alpha·t^r + lower order`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadingData<C = RatFn> {
    pub alpha: C,
    pub r: Rat,
}

fn key_of(e: &Rat, ram: u32) -> Result<i64> {
    let k = e * Rat::from_integer(BigInt::from(ram));
    if !k.is_integer() {
        return Err(Error::InvalidArgument("exponent denominator must divide ram"));
    }
    k.to_integer()
        .to_i64()
        .ok_or(Error::InvalidArgument("exponent out of range"))
}

fn rat_of(k: i64, ram: u32) -> Rat {
    Rat::new(BigInt::from(k), BigInt::from(ram))
}

impl<C: DiffField> PSeries<C> {
    /// Builds from `(numerator, coefficient)` pairs in units of `1/ram`.
    pub fn from_keys(ram: u32, terms: impl IntoIterator<Item = (i64, C)>, bound: i64, zero: C) -> Result<Self> {
        if ram == 0 {
            return Err(Error::InvalidArgument("ramification index must be positive"));
        }
        let mut map: BTreeMap<i64, C> = BTreeMap::new();
        for (k, c) in terms {
            if k < bound {
                continue;
            }
            let sum = match map.remove(&k) {
                Some(prev) => prev.try_add(&c)?,
                None => c,
            };
            if !sum.is_zero() {
                map.insert(k, sum);
            }
        }
        Ok(PSeries {
            ram,
            terms: map,
            bound,
            zero: zero.zero_like(),
        })
    }

    /// Builds from rational exponents.
    pub fn new(ram: u32, terms: Vec<(Rat, C)>, bound: &Rat, zero: C) -> Result<Self> {
        if ram == 0 {
            return Err(Error::InvalidArgument("ramification index must be positive"));
        }
        let keyed = terms
            .into_iter()
            .map(|(e, c)| Ok((key_of(&e, ram)?, c)))
            .collect::<Result<Vec<_>>>()?;
        // a bound between grid points rounds up to the next one
        let b = bound * Rat::from_integer(BigInt::from(ram));
        let bound = b.ceil().to_integer().to_i64().ok_or(Error::InvalidArgument("bound out of range"))?;
        Self::from_keys(ram, keyed, bound, zero)
    }

    pub fn zero(ram: u32, bound: &Rat, like: &C) -> Result<Self> {
        Self::new(ram, Vec::new(), bound, like.zero_like())
    }

    pub fn constant(c: C, bound: &Rat) -> Result<Self> {
        let z = c.zero_like();
        Self::new(1, alloc::vec![(Rat::zero(), c)], bound, z)
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    pub fn bound(&self) -> Rat {
        rat_of(self.bound, self.ram)
    }

    pub fn zero_coeff(&self) -> &C {
        &self.zero
    }

    /// Known nonzero terms, highest exponent first.
    pub fn terms(&self) -> impl Iterator<Item = (Rat, &C)> + '_ {
        self.terms.iter().rev().map(move |(k, c)| (rat_of(*k, self.ram), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn top(&self) -> Option<Rat> {
        self.terms.keys().next_back().map(|&k| rat_of(k, self.ram))
    }

    /// Coefficient of `t^e`; `InsufficientTruncation` below the bound.
    pub fn coeff(&self, e: &Rat) -> Result<C> {
        let k = e * Rat::from_integer(BigInt::from(self.ram));
        if k < Rat::from_integer(BigInt::from(self.bound)) {
            return Err(Error::InsufficientTruncation("coefficient below the truncation bound"));
        }
        if !k.is_integer() {
            return Ok(self.zero.clone());
        }
        let k = k.to_integer().to_i64().ok_or(Error::InvalidArgument("exponent out of range"))?;
        Ok(self.terms.get(&k).cloned().unwrap_or_else(|| self.zero.clone()))
    }

    /// Same series over a finer grid `1/ram`, `ram` a multiple of the
    /// current one.
    pub fn lift(&self, ram: u32) -> Result<Self> {
        if !ram.is_multiple_of(self.ram) {
            return Err(Error::InvalidArgument("ram must be a multiple"));
        }
        let f = (ram / self.ram) as i64;
        Ok(PSeries {
            ram,
            terms: self.terms.iter().map(|(k, c)| (k * f, c.clone())).collect(),
            bound: (self.bound - 1) * f + 1,
            zero: self.zero.clone(),
        })
    }

    /// Raises the bound, dropping terms below it.
    pub fn truncate(&self, bound: &Rat) -> Result<Self> {
        let b = (bound * Rat::from_integer(BigInt::from(self.ram)))
            .ceil()
            .to_integer()
            .to_i64()
            .ok_or(Error::InvalidArgument("bound out of range"))?;
        let b = b.max(self.bound);
        Ok(PSeries {
            ram: self.ram,
            terms: self.terms.range(b..).map(|(k, c)| (*k, c.clone())).collect(),
            bound: b,
            zero: self.zero.clone(),
        })
    }

    fn aligned(&self, other: &Self) -> Result<(Self, Self)> {
        let ram = self.ram.lcm(&other.ram);
        Ok((self.lift(ram)?, other.lift(ram)?))
    }

    /// Top key of the whole series, known part or unknown tail.
    fn top_eff(&self) -> i64 {
        self.terms.keys().next_back().copied().unwrap_or(self.bound - 1)
    }

    pub fn neg(&self) -> Self {
        PSeries {
            ram: self.ram,
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
            bound: self.bound,
            zero: self.zero.clone(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let bound = a.bound.max(b.bound);
        let terms = a.terms.into_iter().chain(b.terms);
        Self::from_keys(a.ram, terms, bound, a.zero)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let bound = (a.bound + b.top_eff()).max(b.bound + a.top_eff());
        let mut out: BTreeMap<i64, C> = BTreeMap::new();
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                let k = ka + kb;
                if k < bound {
                    continue;
                }
                let p = ca.try_mul(cb)?;
                let s = match out.remove(&k) {
                    Some(prev) => prev.try_add(&p)?,
                    None => p,
                };
                out.insert(k, s);
            }
        }
        Self::from_keys(a.ram, out, bound, a.zero)
    }

    /// Coefficientwise product with `c`.
    pub fn scale(&self, c: &C) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(k, x)| Ok((*k, x.try_mul(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_keys(self.ram, terms, self.bound, self.zero.clone())
    }

    pub fn scale_const(&self, c: &CycloNumber) -> Result<Self> {
        let terms = self.terms.iter().map(|(k, x)| (*k, x.scale_const(c)));
        Self::from_keys(self.ram, terms, self.bound, self.zero.clone())
    }

    /// Exact product with `c·t^e`.
    pub fn mul_monomial(&self, c: &C, e: &Rat) -> Result<Self> {
        let den = e.denom().to_u32().ok_or(Error::InvalidArgument("exponent out of range"))?;
        let a = self.lift(self.ram.lcm(&den))?;
        let shift = key_of(e, a.ram)?;
        let terms = a
            .terms
            .iter()
            .map(|(k, x)| Ok((k + shift, x.try_mul(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_keys(a.ram, terms, a.bound + shift, a.zero)
    }

    /// Whether both series agree on every exponent both of them know.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let Ok((a, b)) = self.aligned(other) else {
            return false;
        };
        let bound = a.bound.max(b.bound);
        let keys: alloc::collections::BTreeSet<i64> =
            a.terms.range(bound..).chain(b.terms.range(bound..)).map(|(k, _)| *k).collect();
        keys.into_iter().all(|k| a.terms.get(&k) == b.terms.get(&k))
    }
}

impl<C: DiffField> fmt::Display for PSeries<C> {
    /// `(c1)*t^(e1) + (c2)*t^(e2) + O(t^(b))`, with `t^(b)` the first
    /// unknown grid point below the bound.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, c) in self.terms() {
            write!(f, "({})*t^({}) + ", c, e)?;
        }
        write!(f, "O(t^({}))", rat_of(self.bound - 1, self.ram))
    }
}

pub fn ps_arith<C: DiffField>(a: &PSeries<C>, b: &PSeries<C>, op: SeriesOp) -> Result<PSeries<C>> {
    match op {
        SeriesOp::Add => a.try_add(b),
        SeriesOp::Sub => a.try_sub(b),
        SeriesOp::Mul => a.try_mul(b),
    }
}

/// Inverse of a nonzero series, from the leading-term recurrence.
pub fn ps_inv_unit<C: DiffField>(a: &PSeries<C>) -> Result<PSeries<C>> {
    let (&top, a0) = a.terms.iter().next_back().ok_or(Error::ZeroLeading)?;
    let a0_inv = a0.inv()?;
    let depth = top - a.bound;
    let coeff = |j: i64| a.terms.get(&(top - j));
    let mut b: Vec<C> = Vec::with_capacity(depth as usize + 1);
    b.push(a0_inv.clone());
    for i in 1..=depth {
        let mut s = a.zero.clone();
        for j in 1..=i {
            if let Some(aj) = coeff(j) {
                let bij = &b[(i - j) as usize];
                if !bij.is_zero() {
                    s = s.try_add(&aj.try_mul(bij)?)?;
                }
            }
        }
        b.push(s.try_mul(&a0_inv)?.neg());
    }
    let terms = b.into_iter().enumerate().map(|(i, c)| (-top - i as i64, c));
    PSeries::from_keys(a.ram, terms, -top - depth, a.zero.clone())
}

/// `λ = log z = Σ (−1)^(k+1) wᵏ/k` for `z = 1 + w`, `w` of negative order.
pub fn ps_log_unit<C: DiffField>(z: &PSeries<C>) -> Result<PSeries<C>> {
    if z.bound > 0 || z.terms.range(1..).next().is_some() {
        return Err(Error::NotAUnitOfRequiredForm);
    }
    match z.terms.get(&0) {
        Some(c) if c.is_one() => {}
        _ => return Err(Error::NotAUnitOfRequiredForm),
    }
    let w = PSeries::from_keys(
        z.ram,
        z.terms.range(..0).map(|(k, c)| (*k, c.clone())),
        z.bound,
        z.zero.clone(),
    )?;
    let mut lambda = PSeries::from_keys(z.ram, Vec::new(), z.bound, z.zero.clone())?;
    let mut power = w.clone();
    let mut k: i64 = 1;
    while !power.is_zero() {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let term = power.scale_rat(&Rat::new(sign.into(), k.into()));
        lambda = lambda.try_add(&term)?;
        // products of negative-order series are known below z's bound;
        // λ is only claimed down to that bound anyway
        power = power.try_mul(&w)?.truncate(&z.bound())?;
        k += 1;
    }
    Ok(lambda)
}

impl<C: DiffField> PSeries<C> {
    fn scale_rat(&self, r: &Rat) -> Self {
        PSeries {
            ram: self.ram,
            terms: self.terms.iter().map(|(k, c)| (*k, c.scale_rat(r))).collect(),
            bound: self.bound,
            zero: self.zero.clone(),
        }
    }
}

/// The derivation `δ` for one variable, extended to `t` by the step.
///
/// Exponential: `δ(c tᵉ) = (δc + e·c·δR) tᵉ`. Logarithmic:
/// `δ(c tᵉ) = δc tᵉ + e·c·(δR/R) tᵉ⁻¹`. The bound is unchanged either way.
pub fn ps_derive<C: DiffField>(a: &PSeries<C>, step: &TowerStep, var: Var) -> Result<PSeries<C>> {
    let dt = step.dt(&a.zero, var)?;
    let ram = a.ram as i64;
    let mut out: Vec<(i64, C)> = Vec::with_capacity(2 * a.terms.len());
    for (&k, c) in &a.terms {
        out.push((k, c.d_partial(var)));
        if dt.is_zero() {
            continue;
        }
        let e = rat_of(k, a.ram);
        let t = c.try_mul(&dt)?.scale_rat(&e);
        match step.kind {
            StepKind::Exponential => out.push((k, t)),
            StepKind::Logarithmic => out.push((k - ram, t)),
        }
    }
    PSeries::from_keys(a.ram, out, a.bound, a.zero.clone())
}

/// `d a` as a pair of series `(δx a, δy a)`.
pub fn ps_differential<C: DiffField>(a: &PSeries<C>, step: &TowerStep) -> Result<(PSeries<C>, PSeries<C>)> {
    Ok((ps_derive(a, step, Var::X)?, ps_derive(a, step, Var::Y)?))
}

pub fn leading_data<C: DiffField>(a: &PSeries<C>) -> Result<LeadingData<C>> {
    match a.terms.iter().next_back() {
        Some((&k, c)) => Ok(LeadingData {
            alpha: c.clone(),
            r: rat_of(k, a.ram),
        }),
        None => Err(Error::ZeroSeries),
    }
}

fn scale_form<C: DiffField>(w: &OneForm<C>, r: &Rat) -> OneForm<C> {
    OneForm::new(w.a.scale_rat(r), w.b.scale_rat(r))
}

/// The candidate forms of one descent step, in the order the case analysis
/// tests them.
///
/// With `s` the top exponent of `v`, `βⱼ` its coefficients and
/// `uᵢ = αᵢ t^(rᵢ) + …`, write `Z` for the degree-zero form:
/// `Σ cᵢ(dαᵢ/αᵢ + rᵢ dR) + dβ₀` (exponential) or
/// `Σ cᵢ dαᵢ/αᵢ + dβ₀ + β₁ dR/R` (logarithmic).
///
/// * exponential, `s > 0`: `[dβ_s/β_s + s dR]`;
/// * logarithmic, `s > 0`: `dβ_s`, then `dβ_(s−1) + sβ_s dR/R` if `β_s` is
///   constant and `s ≠ 1`, or `Z` if `s = 1`;
/// * otherwise (`v = 0` or `s ≤ 0`): `[Z]`.
///
/// Candidates may be zero; [`select_candidate`] picks the first usable one.
pub fn descent_candidates<C: DiffField>(
    step: &TowerStep,
    us: &[(CycloNumber, PSeries<C>)],
    v: &PSeries<C>,
) -> Result<Vec<OneForm<C>>> {
    let like = v.zero_coeff();
    let zero = Rat::zero();
    let one = Rat::one();
    if v.bound() > zero {
        return Err(Error::InsufficientTruncation("degree-zero coefficient of v is unknown"));
    }
    let mut leads = Vec::with_capacity(us.len());
    for (c, u) in us {
        leads.push((c.clone(), leading_data(u)?));
    }
    let dr = step.form(like)?;
    let mut out = Vec::new();
    if let Some(s) = v.top().filter(|s| s.is_positive()) {
        let beta_s = v.coeff(&s)?;
        match step.kind {
            StepKind::Exponential => {
                out.push(dlog(&beta_s)?.try_add(&scale_form(&dr, &s))?);
                return Ok(out);
            }
            StepKind::Logarithmic => {
                out.push(differential(&beta_s));
                if s != one {
                    if beta_s.is_constant() {
                        let beta_prev = v.coeff(&(&s - &one))?;
                        let t = dr.scale(&beta_s)?;
                        out.push(differential(&beta_prev).try_add(&scale_form(&t, &s))?);
                    }
                    return Ok(out);
                }
            }
        }
    }
    let beta0 = v.coeff(&zero)?;
    let mut w = differential(&beta0);
    for (c, ld) in &leads {
        let mut term = dlog(&ld.alpha)?;
        if step.kind == StepKind::Exponential {
            term = term.try_add(&scale_form(&dr, &ld.r))?;
        }
        w = w.try_add(&term.scale_const(c))?;
    }
    if step.kind == StepKind::Logarithmic {
        let beta1 = v.coeff(&one)?;
        w = w.try_add(&dr.scale(&beta1)?)?;
    }
    out.push(w);
    Ok(out)
}

/// First nonzero candidate with `candidate ∧ Ω = 0`.
pub fn select_candidate<C: DiffField>(candidates: &[OneForm<C>], omega: &OneForm<C>) -> Result<Option<OneForm<C>>> {
    for c in candidates {
        if !c.is_zero() && wedge(c, omega)?.is_zero() {
            return Ok(Some(c.clone()));
        }
    }
    Ok(None)
}

/// The normalized data `ûᵢ = uᵢ/(αᵢ t^(rᵢ))` and `v̂ = v − β₀`, minus also
/// `β₁ t` for a logarithmic step, on which the descent continues.
#[allow(clippy::type_complexity)]
pub fn hatted<C: DiffField>(
    step: &TowerStep,
    us: &[(CycloNumber, PSeries<C>)],
    v: &PSeries<C>,
) -> Result<(Vec<(CycloNumber, PSeries<C>)>, PSeries<C>)> {
    let mut hat_us = Vec::with_capacity(us.len());
    for (c, u) in us {
        let ld = leading_data(u)?;
        hat_us.push((c.clone(), u.mul_monomial(&ld.alpha.inv()?, &-ld.r)?));
    }
    let zero = Rat::zero();
    let mut drop = alloc::vec![(zero.clone(), v.coeff(&zero)?)];
    if step.kind == StepKind::Logarithmic {
        drop.push((Rat::one(), v.coeff(&Rat::one())?));
    }
    let sub = PSeries::new(1, drop, &v.bound(), v.zero_coeff().clone())?;
    Ok((hat_us, v.try_sub(&sub)?))
}
