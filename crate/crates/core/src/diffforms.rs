//! One-forms `A dx + B dy` over `K` and `L`, and the planar vector field
//! attached to a form over `K`.
//!
//! A form `ω = P dx + Q dy` and the field `𝒳 = −Q ∂x + P ∂y` are two views
//! of one [`PlaneField`] value.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::cyclicext::{ExtDescriptor, ExtElem};
use crate::error::{Error, Result};
use crate::multipoly::Var;
use crate::ratfield::RatFn;
use crate::scalars::{rat_frac, CycloNumber, Rat};

/// A differential field of characteristic zero with the two partial
/// derivations `∂x`, `∂y`, containing `K`.
pub trait DiffField: Clone + PartialEq + fmt::Display + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn try_add(&self, other: &Self) -> Result<Self>;
    fn try_sub(&self, other: &Self) -> Result<Self>;
    fn try_mul(&self, other: &Self) -> Result<Self>;
    fn inv(&self) -> Result<Self>;
    fn neg(&self) -> Self;
    fn d_partial(&self, v: Var) -> Self;
    fn scale_const(&self, c: &CycloNumber) -> Self;
    fn scale_rat(&self, r: &Rat) -> Self;
    /// Embeds an element of `K` alongside `self`.
    fn embed(&self, r: &RatFn) -> Self;

    fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.inv()?)
    }

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    /// Constant iff both partial derivatives vanish.
    fn is_constant(&self) -> bool {
        self.d_partial(Var::X).is_zero() && self.d_partial(Var::Y).is_zero()
    }
}

impl DiffField for RatFn {
    fn zero_like(&self) -> Self {
        RatFn::zero_like(self)
    }
    fn one_like(&self) -> Self {
        RatFn::one_like(self)
    }
    fn is_zero(&self) -> bool {
        RatFn::is_zero(self)
    }
    fn try_add(&self, other: &Self) -> Result<Self> {
        RatFn::try_add(self, other)
    }
    fn try_sub(&self, other: &Self) -> Result<Self> {
        RatFn::try_sub(self, other)
    }
    fn try_mul(&self, other: &Self) -> Result<Self> {
        RatFn::try_mul(self, other)
    }
    fn inv(&self) -> Result<Self> {
        RatFn::inv(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn d_partial(&self, v: Var) -> Self {
        RatFn::d_partial(self, v)
    }
    fn scale_const(&self, c: &CycloNumber) -> Self {
        RatFn::scale(self, c)
    }
    fn scale_rat(&self, r: &Rat) -> Self {
        RatFn::scale_rat(self, r)
    }
    fn embed(&self, r: &RatFn) -> Self {
        r.clone()
    }
    fn is_constant(&self) -> bool {
        RatFn::is_constant(self)
    }
}

impl DiffField for ExtElem {
    fn zero_like(&self) -> Self {
        ExtElem::zero_like(self)
    }
    fn one_like(&self) -> Self {
        ExtElem::one_like(self)
    }
    fn is_zero(&self) -> bool {
        ExtElem::is_zero(self)
    }
    fn try_add(&self, other: &Self) -> Result<Self> {
        ExtElem::try_add(self, other)
    }
    fn try_sub(&self, other: &Self) -> Result<Self> {
        ExtElem::try_sub(self, other)
    }
    fn try_mul(&self, other: &Self) -> Result<Self> {
        ExtElem::try_mul(self, other)
    }
    fn inv(&self) -> Result<Self> {
        ExtElem::inv(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn d_partial(&self, v: Var) -> Self {
        ExtElem::d_partial(self, v)
    }
    fn scale_const(&self, c: &CycloNumber) -> Self {
        ExtElem::scale(self, c)
    }
    fn scale_rat(&self, r: &Rat) -> Self {
        let c = self.desc().field().from_rat(r.clone());
        ExtElem::scale(self, &c)
    }
    fn embed(&self, r: &RatFn) -> Self {
        ExtElem::from_base(self.desc(), r.clone())
    }
    fn is_constant(&self) -> bool {
        ExtElem::is_constant(self)
    }
}

/// The form `a dx + b dy`.
#[derive(Clone, PartialEq, Debug)]
pub struct OneForm<C> {
    pub a: C,
    pub b: C,
}

pub type KOneForm = OneForm<RatFn>;
pub type LOneForm = OneForm<ExtElem>;

impl<C: DiffField> OneForm<C> {
    pub fn new(a: C, b: C) -> Self {
        OneForm { a, b }
    }

    /// `dx` with coefficients alongside `like`.
    pub fn dx(like: &C) -> Self {
        OneForm::new(like.one_like(), like.zero_like())
    }

    pub fn dy(like: &C) -> Self {
        OneForm::new(like.zero_like(), like.one_like())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn zero_like(&self) -> Self {
        OneForm::new(self.a.zero_like(), self.b.zero_like())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(OneForm::new(self.a.try_add(&other.a)?, self.b.try_add(&other.b)?))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        Ok(OneForm::new(self.a.try_sub(&other.a)?, self.b.try_sub(&other.b)?))
    }

    /// `f·ω`.
    pub fn scale(&self, f: &C) -> Result<Self> {
        Ok(OneForm::new(f.try_mul(&self.a)?, f.try_mul(&self.b)?))
    }

    pub fn scale_const(&self, c: &CycloNumber) -> Self {
        OneForm::new(self.a.scale_const(c), self.b.scale_const(c))
    }

    pub fn neg(&self) -> Self {
        OneForm::new(self.a.neg(), self.b.neg())
    }
}

impl KOneForm {
    /// The same form with coefficients in `L`.
    pub fn lift(&self, desc: &Arc<ExtDescriptor>) -> LOneForm {
        OneForm::new(
            ExtElem::from_base(desc, self.a.clone()),
            ExtElem::from_base(desc, self.b.clone()),
        )
    }
}

impl LOneForm {
    pub fn desc(&self) -> &Arc<ExtDescriptor> {
        self.a.desc()
    }
}

impl<C: fmt::Display> fmt::Display for OneForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) dx + ({}) dy", self.a, self.b)
    }
}

/// `df = ∂x f dx + ∂y f dy`.
pub fn differential<C: DiffField>(f: &C) -> OneForm<C> {
    OneForm::new(f.d_partial(Var::X), f.d_partial(Var::Y))
}

/// The `dx∧dy` coefficient `A₁B₂ − A₂B₁`.
pub fn wedge<C: DiffField>(w1: &OneForm<C>, w2: &OneForm<C>) -> Result<C> {
    w1.a.try_mul(&w2.b)?.try_sub(&w2.a.try_mul(&w1.b)?)
}

/// `dω = (∂x B − ∂y A) dx∧dy`.
pub fn exterior_derivative<C: DiffField>(w: &OneForm<C>) -> C {
    w.b.d_partial(Var::X)
        .try_sub(&w.a.d_partial(Var::Y))
        .expect("components share a context")
}

/// `du/u`.
pub fn dlog<C: DiffField>(u: &C) -> Result<OneForm<C>> {
    let inv = u.inv()?;
    differential(u).scale(&inv)
}

/// `ψ = v + Σ cᵢ log uᵢ` over `L`.
#[derive(Clone, PartialEq, Debug)]
pub struct LogSum {
    desc: Arc<ExtDescriptor>,
    v: ExtElem,
    terms: Vec<(CycloNumber, ExtElem)>,
}

impl LogSum {
    pub fn new(v: ExtElem, terms: Vec<(CycloNumber, ExtElem)>) -> Result<Self> {
        let desc = v.desc().clone();
        for (c, u) in &terms {
            if u.is_zero() {
                return Err(Error::DivisionByZero);
            }
            if u.desc() != &desc && **u.desc() != *desc {
                return Err(Error::DescriptorMismatch);
            }
            if c.order() != desc.field().order() {
                return Err(Error::OrderMismatch {
                    left: c.order(),
                    right: desc.field().order(),
                });
            }
        }
        Ok(LogSum { desc, v, terms })
    }

    pub fn desc(&self) -> &Arc<ExtDescriptor> {
        &self.desc
    }

    pub fn v(&self) -> &ExtElem {
        &self.v
    }

    pub fn terms(&self) -> &[(CycloNumber, ExtElem)] {
        &self.terms
    }

    pub fn constants(&self) -> Vec<CycloNumber> {
        self.terms.iter().map(|(c, _)| c.clone()).collect()
    }
}

/// `γ = dv + Σ cᵢ duᵢ/uᵢ`.
pub fn logsum_gamma(psi: &LogSum) -> Result<LOneForm> {
    let mut gamma = differential(&psi.v);
    for (c, u) in &psi.terms {
        gamma = gamma.try_add(&dlog(u)?.scale_const(c))?;
    }
    Ok(gamma)
}

/// `(1/n) Σ_j ζ^(−j) τʲ(a)`, the element-level projection onto `ℓK`.
pub fn pr_element(a: &ExtElem) -> ExtElem {
    let desc = a.desc();
    let n = desc.n() as i64;
    let mut acc = a.zero_like();
    for j in 0..n {
        let w = desc.zeta().pow(-j).expect("root of unity");
        acc = &acc + &a.tau(j).scale(&w);
    }
    DiffField::scale_rat(&acc, &rat_frac(1, n))
}

/// `Pr(ξ) = (1/n) Σ_j ζ^(−j) τʲ(ξ)`, applied componentwise.
pub fn pr_project(xi: &LOneForm) -> LOneForm {
    OneForm::new(pr_element(&xi.a), pr_element(&xi.b))
}

/// `ω` with `ξ = ℓ·ω`; fails unless only the `ℓ¹` coordinates are nonzero.
pub fn ell_extract(xi: &LOneForm) -> Result<KOneForm> {
    let on_line = |e: &ExtElem| {
        e.coords()
            .iter()
            .enumerate()
            .all(|(i, c)| i == 1 || c.is_zero())
    };
    if !on_line(&xi.a) || !on_line(&xi.b) {
        return Err(Error::NotInEllLine);
    }
    Ok(OneForm::new(xi.a.coord(1).clone(), xi.b.coord(1).clone()))
}

/// `ℓ·ω` for `ω` over `K`.
pub fn ell_times(desc: &Arc<ExtDescriptor>, w: &KOneForm) -> LOneForm {
    OneForm::new(
        ExtElem::monomial(desc, 1, w.a.clone()),
        ExtElem::monomial(desc, 1, w.b.clone()),
    )
}

/// The form `P dx + Q dy`, viewed also as `𝒳 = −Q ∂x + P ∂y`.
#[derive(Clone, PartialEq, Debug)]
pub struct PlaneField {
    p: RatFn,
    q: RatFn,
}

impl PlaneField {
    pub fn new(p: RatFn, q: RatFn) -> Result<Self> {
        if p.is_zero() && q.is_zero() {
            return Err(Error::InvalidArgument("vector field is zero"));
        }
        if p.field().order() != q.field().order() {
            return Err(Error::OrderMismatch {
                left: p.field().order(),
                right: q.field().order(),
            });
        }
        Ok(PlaneField { p, q })
    }

    /// The field `h₁ ∂x + h₂ ∂y`, i.e. `P = h₂`, `Q = −h₁`.
    pub fn from_vector(h1: RatFn, h2: RatFn) -> Result<Self> {
        Self::new(h2, -h1)
    }

    pub fn from_form(w: &KOneForm) -> Result<Self> {
        Self::new(w.a.clone(), w.b.clone())
    }

    pub fn p(&self) -> &RatFn {
        &self.p
    }

    pub fn q(&self) -> &RatFn {
        &self.q
    }

    /// Components `(−Q, P)` of `𝒳` in the basis `∂x, ∂y`.
    pub fn vector(&self) -> (RatFn, RatFn) {
        (-&self.q, self.p.clone())
    }

    pub fn omega(&self) -> KOneForm {
        OneForm::new(self.p.clone(), self.q.clone())
    }
}

/// `𝒳 f = −Q ∂x f + P ∂y f`.
pub fn apply_field<C: DiffField>(x: &PlaneField, f: &C) -> C {
    let p = f.embed(&x.p);
    let q = f.embed(&x.q);
    let fx = f.d_partial(Var::X);
    let fy = f.d_partial(Var::Y);
    p.try_mul(&fy)
        .and_then(|a| a.try_sub(&q.try_mul(&fx)?))
        .expect("components share a context")
}
