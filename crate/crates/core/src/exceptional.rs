//! Construction and verification of candidate exceptional vector fields.
//!
//! Two constructions are provided. [`build_quadratic`] evaluates the closed
//! form for `n = 2`. [`build_cyclic`] projects a log-sum over a general
//! cyclic extension onto the `ℓ`-line. Both return `ω` over `K` together
//! with a log-sum `ψ` satisfying `dψ = ℓ·ω`.
//!
//! The searches here are bounded by total degree. They never claim that no
//! rational first integral exists in general.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{ToPrimitive, Zero};

use crate::cyclicext::{norm_one_from, quadratic_norm_one, trace_zero_from, ExtDescriptor, ExtElem};
use crate::diffforms::{
    ell_extract, ell_times, exterior_derivative, logsum_gamma, pr_element, pr_project, wedge,
    KOneForm, LogSum, OneForm, PlaneField,
};
use crate::error::{Error, Result};
use crate::linalg::{cyclo_kernel, normalize_integer_vector, rational_kernel};
use crate::multipoly::{gcd, monomials_up_to, mpoly_from_ints, squarefree_decompose, MPoly, Monomial, Var};
use crate::ratfield::RatFn;
use crate::scalars::{q_linear_dependence, rat, rat_frac, CycloNumber, LinearDependence, Rat};

/// Input of the quadratic construction: `v = hℓ`, `uᵢ` the norm-one element
/// attached to `gᵢ`, with `ℓ² = k`.
#[derive(Clone, Debug)]
pub struct QuadraticSpec {
    pub k: RatFn,
    pub h: RatFn,
    pub terms: Vec<(CycloNumber, RatFn)>,
}

#[derive(Clone, Debug)]
pub struct QuadraticOutput {
    pub desc: Arc<ExtDescriptor>,
    /// `(H₁, H₂)`, the field `H₁ ∂x + H₂ ∂y`.
    pub h_field: (RatFn, RatFn),
    /// `H₂ dx − H₁ dy`.
    pub omega: KOneForm,
    pub psi: LogSum,
}

/// Input of the general construction: `v` and `uᵢ` are derived from `w_v`
/// and `w_uᵢ` as a trace-zero and a norm-one element.
#[derive(Clone, Debug)]
pub struct CyclicSpec {
    pub desc: Arc<ExtDescriptor>,
    pub w_v: ExtElem,
    pub terms: Vec<(CycloNumber, ExtElem)>,
}

#[derive(Clone, Debug)]
pub struct CyclicOutput {
    pub omega: KOneForm,
    pub psi: LogSum,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub gamma_nonzero: bool,
    pub wedge_zero: bool,
    pub trace_zero: bool,
    pub norm_one: Vec<bool>,
    pub integrating_factor_ok: bool,
    pub constants_independent: bool,
}

impl VerificationReport {
    pub fn all_ok(&self) -> bool {
        self.gamma_nonzero
            && self.wedge_zero
            && self.trace_zero
            && self.norm_one.iter().all(|&b| b)
            && self.integrating_factor_ok
            && self.constants_independent
    }
}

/// Result of testing `f | 𝒳 f`.
#[derive(Clone, Debug, PartialEq)]
pub enum Darboux {
    Yes(MPoly),
    No,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RfiVerdict {
    /// `A/B` is a verified non-constant first integral.
    Found(MPoly, MPoly),
    NoneUpTo(u32),
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Proportionality {
    /// `X₁ = ratio · X₂`.
    Yes(RatFn),
    No,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exceptionality {
    CandidateExceptional,
    DarbouxReducible,
    Unknown,
}

/// The closed-form field `H` for `n = 2`, together with `ω` and `ψ`.
pub fn build_quadratic(spec: &QuadraticSpec) -> Result<QuadraticOutput> {
    let k = &spec.k;
    if k.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let field = k.field();
    let desc = ExtDescriptor::new(2, k.clone(), field.from_int(-1))?;
    let (kx, ky) = (k.d_partial(Var::X), k.d_partial(Var::Y));
    let kx_k = kx.try_div(k)?;
    let ky_k = ky.try_div(k)?;
    let half = rat_frac(1, 2);
    let h = &spec.h;

    let mut h1 = -&(&h.d_partial(Var::Y) + &(h * &ky_k).scale_rat(&half));
    let mut h2 = &h.d_partial(Var::X) + &(h * &kx_k).scale_rat(&half);
    let mut terms = Vec::with_capacity(spec.terms.len());
    for (c, g) in &spec.terms {
        let g2 = g * g;
        let den = g2.try_sub(k)?;
        if den.is_zero() {
            return Err(Error::DegenerateG);
        }
        let den2 = &den * &den;
        let (gx, gy) = (g.d_partial(Var::X), g.d_partial(Var::Y));
        let g_g2k = g * &g2.try_add(k)?;
        // −2(−g²g_y + k g_y − g k_y) − g(g²+k)k_y/k
        let a1 = &(&(k * &gy) - &(&g2 * &gy)) - &(g * &ky);
        let inner1 = &a1.scale_rat(&rat(-2)) - &(&g_g2k * &ky_k);
        // 2(−g²g_x + k g_x − g k_x) + g(g²+k)k_x/k
        let a2 = &(&(k * &gx) - &(&g2 * &gx)) - &(g * &kx);
        let inner2 = &a2.scale_rat(&rat(2)) + &(&g_g2k * &kx_k);
        h1 = h1.try_add(&inner1.try_div(&den2)?.scale(c))?;
        h2 = h2.try_add(&inner2.try_div(&den2)?.scale(c))?;
        terms.push((c.clone(), quadratic_norm_one(g, &desc)?));
    }
    if h1.is_zero() && h2.is_zero() {
        return Err(Error::GammaZero);
    }
    let omega = OneForm::new(h2.clone(), -&h1);
    let v = ExtElem::monomial(&desc, 1, h.clone());
    let psi = LogSum::new(v, terms)?;
    Ok(QuadraticOutput {
        desc,
        h_field: (h1, h2),
        omega,
        psi,
    })
}

/// The matching input for [`build_cyclic`]: `w_v = hℓ` and `w_u = g − ℓ`.
///
/// With `u := τ(w)/w`, the choice `w = g − ℓ` gives
/// `u = (g + ℓ)/(g − ℓ) = ((g² + k) + 2gℓ)/(g² − k)`, the quadratic norm-one
/// element of `g`. The choice `w = g + ℓ` would give its inverse.
pub fn quadratic_to_cyclic(spec: &QuadraticSpec) -> Result<CyclicSpec> {
    let field = spec.k.field();
    let desc = ExtDescriptor::new(2, spec.k.clone(), field.from_int(-1))?;
    let w_v = ExtElem::monomial(&desc, 1, spec.h.clone());
    let terms = spec
        .terms
        .iter()
        .map(|(c, g)| {
            let w = ExtElem::new(&desc, vec![g.clone(), RatFn::from_int(field, -1)])?;
            Ok((c.clone(), w))
        })
        .collect::<Result<_>>()?;
    Ok(CyclicSpec { desc, w_v, terms })
}

/// Projects `γ̃ = dṽ + Σ cᵢ dũᵢ/ũᵢ` onto the `ℓ`-line and reads off `ω`.
///
/// When `γ̃` already lies on the `ℓ`-line, `ψ` holds `ṽ` and `(cᵢ, ũᵢ)`.
/// Otherwise `ψ` is the projected log-sum `Pr(ṽ)` with terms
/// `(cᵢζ^(−j)/n, τʲ(ũᵢ))`, so `dψ = ℓ·ω` holds in both cases.
pub fn build_cyclic(spec: &CyclicSpec) -> Result<CyclicOutput> {
    let desc = &spec.desc;
    let v = trace_zero_from(&spec.w_v);
    let mut terms = Vec::with_capacity(spec.terms.len());
    for (c, w) in &spec.terms {
        if w.desc() != desc && **w.desc() != **desc {
            return Err(Error::DescriptorMismatch);
        }
        terms.push((c.clone(), norm_one_from(w)?));
    }
    let psi = LogSum::new(v, terms)?;
    let gamma_tilde = logsum_gamma(&psi)?;
    let gamma = pr_project(&gamma_tilde);
    if gamma.is_zero() {
        return Err(Error::GammaZero);
    }
    let omega = ell_extract(&gamma)?;
    if gamma == gamma_tilde {
        return Ok(CyclicOutput { omega, psi });
    }
    let n = desc.n() as i64;
    let mut orbit_terms = Vec::new();
    for (c, u) in psi.terms() {
        for j in 0..n {
            let w = desc.zeta().pow(-j)?.scale(&rat_frac(1, n));
            orbit_terms.push((c * &w, u.tau(j)));
        }
    }
    let psi = LogSum::new(pr_element(psi.v()), orbit_terms)?;
    Ok(CyclicOutput { omega, psi })
}

/// Checks `(dv + Σ cᵢ duᵢ/uᵢ) ∧ ω = 0` and the side conditions.
pub fn verify_elem_integral(omega: &KOneForm, psi: &LogSum) -> Result<VerificationReport> {
    let desc = psi.desc();
    let gamma = logsum_gamma(psi)?;
    let wedge_zero = wedge(&gamma, &omega.lift(desc))?.is_zero();
    let trace_zero = psi.v().trace().is_zero();
    let norm_one = psi
        .terms()
        .iter()
        .map(|(_, u)| u.norm().map(|r| r.is_one()))
        .collect::<Result<Vec<_>>>()?;
    let constants = psi.constants();
    let constants_independent = constants.is_empty()
        || matches!(q_linear_dependence(&constants)?, LinearDependence::Independent);
    Ok(VerificationReport {
        gamma_nonzero: !gamma.is_zero(),
        wedge_zero,
        trace_zero,
        norm_one,
        integrating_factor_ok: check_integrating_factor(omega, desc),
        constants_independent,
    })
}

/// `d(ℓω) = 0`, equivalently `dω = −(dℓ/ℓ)∧ω`.
pub fn check_integrating_factor(omega: &KOneForm, desc: &Arc<ExtDescriptor>) -> bool {
    exterior_derivative(&ell_times(desc, omega)).is_zero()
}

/// `(P·D, Q·D)` with `D` the monic lcm of the denominators.
fn cleared(x: &PlaneField) -> (MPoly, MPoly) {
    let (dp, dq) = (x.p().den(), x.q().den());
    let g = gcd(dp, dq);
    let l = (dp * dq).exact_div(&g).expect("gcd divides");
    let p = (x.p() * &RatFn::from_poly(l.clone())).num().clone();
    let q = (x.q() * &RatFn::from_poly(l)).num().clone();
    (p, q)
}

fn apply_poly(p: &MPoly, q: &MPoly, f: &MPoly) -> MPoly {
    &(p * &f.partial(Var::Y)) - &(q * &f.partial(Var::X))
}

/// Sort key: total degree, then the descending term list.
fn canon_key(p: &MPoly) -> (u32, Vec<(Monomial, String)>) {
    (
        p.total_degree().unwrap_or(0),
        p.terms().rev().map(|(m, c)| (*m, c.to_string())).collect(),
    )
}

/// Basis of the non-constant polynomial first integrals of degree `≤ d`,
/// each monic, sorted by degree then canonical order.
pub fn poly_first_integrals(x: &PlaneField, d: u32) -> Vec<MPoly> {
    let (p, q) = cleared(x);
    let field = p.field().clone();
    let cols = monomials_up_to(1, d);
    let images: Vec<MPoly> = cols
        .iter()
        .map(|&m| apply_poly(&p, &q, &MPoly::monomial(&field, m, field.one())))
        .collect();
    let row_index: BTreeSet<Monomial> = images.iter().flat_map(|im| im.terms().map(|(m, _)| *m)).collect();
    let zero = field.zero();
    let rows: Vec<Vec<CycloNumber>> = row_index
        .iter()
        .map(|&m| images.iter().map(|im| im.coeff(m)).collect())
        .collect();
    let mut basis: Vec<MPoly> = cyclo_kernel(rows, cols.len(), &zero)
        .into_iter()
        .map(|v| MPoly::from_terms(&field, cols.iter().copied().zip(v)).monic().0)
        .collect();
    basis.sort_by_cached_key(canon_key);
    basis
}

/// `Yes(κ)` when `𝒳 f = κ f`, for the field with cleared denominators.
pub fn is_darboux(x: &PlaneField, f: &MPoly) -> Darboux {
    if f.is_constant() {
        return Darboux::No;
    }
    let (p, q) = cleared(x);
    match apply_poly(&p, &q, f).exact_div(f) {
        Ok(k) => Darboux::Yes(k),
        Err(_) => Darboux::No,
    }
}

/// Refines `p` into the pairwise coprime `basis`.
fn insert_coprime(basis: &mut Vec<MPoly>, p: MPoly) {
    if p.is_constant() {
        return;
    }
    for i in 0..basis.len() {
        let g = gcd(&p, &basis[i]);
        if !g.is_constant() {
            let b = basis.remove(i);
            let rest_b = b.exact_div(&g).expect("gcd divides");
            let rest_p = p.exact_div(&g).expect("gcd divides");
            insert_coprime(basis, g);
            insert_coprime(basis, rest_b.monic().0);
            insert_coprime(basis, rest_p.monic().0);
            return;
        }
    }
    basis.push(p);
}

fn seeds(field: &Arc<crate::scalars::CycloField>) -> Vec<MPoly> {
    [
        &[(1, 1, 0)][..],
        &[(1, 0, 1)],
        &[(1, 1, 0), (1, 0, 1)],
        &[(1, 1, 0), (-1, 0, 1)],
        &[(1, 1, 0), (1, 0, 0)],
        &[(1, 1, 0), (-1, 0, 0)],
        &[(1, 0, 1), (1, 0, 0)],
        &[(1, 0, 1), (-1, 0, 0)],
    ]
    .iter()
    .map(|t| mpoly_from_ints(field, t))
    .collect()
}

fn power_product(field: &Arc<crate::scalars::CycloField>, fs: &[MPoly], exps: &[i64]) -> MPoly {
    let mut acc = MPoly::one(field);
    for (f, &e) in fs.iter().zip(exps) {
        if e > 0 {
            acc = &acc * &f.pow(e as u32);
        }
    }
    acc
}

/// `B·𝒳(A) − A·𝒳(B)`.
pub fn rfi_residual(x: &PlaneField, a: &MPoly, b: &MPoly) -> MPoly {
    let (p, q) = cleared(x);
    &(b * &apply_poly(&p, &q, a)) - &(a * &apply_poly(&p, &q, b))
}

/// Bounded search for a rational first integral `A/B` with
/// `max(deg A, deg B) ≤ d`.
///
/// Stage one is the exhaustive polynomial search of degree `≤ d`. Stage two
/// harvests Darboux polynomials from the squarefree factors of `P`, `Q`,
/// their denominators and a few linear seeds, keeping `gcd(f, 𝒳f)` of each.
/// A coprime basis of the harvest is formed and integer relations among the
/// cofactors give `A/B`.
///
/// A found pair is oriented so that `A` exceeds `B` in degree, then in
/// canonical order.
///
/// `NoneUpTo(d)` means stage one found nothing and the harvested cofactors
/// admit no integer relation at all. `Unknown` covers relations that exceed
/// the degree bound.
pub fn rational_fi_search(x: &PlaneField, d: u32) -> RfiVerdict {
    let field = x.p().field().clone();
    if let Some(f) = poly_first_integrals(x, d).into_iter().next() {
        return RfiVerdict::Found(f, MPoly::one(&field));
    }
    let (p, q) = cleared(x);
    let mut sources: Vec<MPoly> = vec![p.clone(), q.clone()];
    for r in [x.p(), x.q()] {
        sources.push(r.num().clone());
        sources.push(r.den().clone());
    }
    sources.extend(seeds(&field));
    let mut basis: Vec<MPoly> = Vec::new();
    for s in sources.iter().filter(|s| !s.is_constant()) {
        for (f, _) in squarefree_decompose(s).factors {
            let image = apply_poly(&p, &q, &f);
            let g = gcd(&f, &image);
            insert_coprime(&mut basis, g);
        }
    }
    let mut darboux: Vec<(MPoly, MPoly)> = Vec::new();
    for f in basis {
        if let Ok(k) = apply_poly(&p, &q, &f).exact_div(&f) {
            darboux.push((f, k));
        }
    }
    if darboux.is_empty() {
        return RfiVerdict::NoneUpTo(d);
    }
    let support: BTreeSet<Monomial> = darboux
        .iter()
        .flat_map(|(_, k)| k.terms().map(|(m, _)| *m))
        .collect();
    let dim = field.degree();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for &m in &support {
        for t in 0..dim {
            rows.push(darboux.iter().map(|(_, k)| k.coeff(m).coords()[t].clone()).collect());
        }
    }
    let kernel = rational_kernel(&rows, darboux.len());
    if kernel.is_empty() {
        return RfiVerdict::NoneUpTo(d);
    }
    let mut candidates: Vec<Vec<Rat>> = kernel.clone();
    for i in 0..kernel.len() {
        for j in i + 1..kernel.len() {
            for sign in [1, -1] {
                let v: Vec<Rat> = kernel[i]
                    .iter()
                    .zip(&kernel[j])
                    .map(|(a, b)| a + b * Rat::from_integer(sign.into()))
                    .collect();
                if v.iter().any(|e| !e.is_zero()) {
                    candidates.push(normalize_integer_vector(v));
                }
            }
        }
    }
    let fs: Vec<MPoly> = darboux.into_iter().map(|(f, _)| f).collect();
    let mut best: Option<((u32, Vec<(Monomial, String)>, Vec<(Monomial, String)>), MPoly, MPoly)> = None;
    for v in candidates {
        let Some(exps) = v.iter().map(|e| e.to_integer().to_i64()).collect::<Option<Vec<i64>>>() else {
            continue;
        };
        let deg_of = |sign: i64| -> i64 {
            fs.iter()
                .zip(&exps)
                .filter(|(_, &e)| e.signum() == sign)
                .map(|(f, &e)| e.abs() * f.total_degree().unwrap_or(0) as i64)
                .sum()
        };
        let deg = deg_of(1).max(deg_of(-1));
        if deg > d as i64 {
            continue;
        }
        let neg: Vec<i64> = exps.iter().map(|e| -e).collect();
        let (mut a, mut b) = (power_product(&field, &fs, &exps), power_product(&field, &fs, &neg));
        if canon_key(&a) < canon_key(&b) {
            core::mem::swap(&mut a, &mut b);
        }
        if a.is_constant() && b.is_constant() {
            continue;
        }
        if !rfi_residual(x, &a, &b).is_zero() {
            continue;
        }
        let key = (deg as u32, canon_key(&a).1, canon_key(&b).1);
        if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
            best = Some((key, a, b));
        }
    }
    match best {
        Some((_, a, b)) => RfiVerdict::Found(a, b),
        None => RfiVerdict::Unknown,
    }
}

/// Tests `P₁Q₂ − P₂Q₁ = 0`.
pub fn proportional(x1: &PlaneField, x2: &PlaneField) -> Proportionality {
    let cross = &(x1.p() * x2.q()) - &(x2.p() * x1.q());
    if !cross.is_zero() {
        return Proportionality::No;
    }
    let ratio = if !x2.p().is_zero() {
        x1.p().try_div(x2.p())
    } else {
        x1.q().try_div(x2.q())
    };
    match ratio {
        Ok(r) => Proportionality::Yes(r),
        Err(_) => Proportionality::No,
    }
}

/// Three-valued exceptionality verdict for `ω` with the relation `ψ`.
///
/// A trace of `v` or a norm of some `uᵢ` that is not constant yields a
/// relation over `K`, as does a rational first integral found up to
/// degree `d`.
pub fn classify(omega: &KOneForm, psi: &LogSum, d: u32) -> Result<Exceptionality> {
    let report = verify_elem_integral(omega, psi)?;
    if !report.gamma_nonzero || !report.wedge_zero {
        return Ok(Exceptionality::Unknown);
    }
    if !psi.v().trace().is_constant() {
        return Ok(Exceptionality::DarbouxReducible);
    }
    for (_, u) in psi.terms() {
        if !u.norm()?.is_constant() {
            return Ok(Exceptionality::DarbouxReducible);
        }
    }
    Ok(match rational_fi_search(&PlaneField::from_form(omega)?, d) {
        RfiVerdict::Found(..) => Exceptionality::DarbouxReducible,
        RfiVerdict::NoneUpTo(_) => Exceptionality::CandidateExceptional,
        RfiVerdict::Unknown => Exceptionality::Unknown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffforms::differential;
    use crate::scalars::CycloField;

    fn field() -> Arc<CycloField> {
        CycloField::new(12).unwrap()
    }

    fn poly(f: &Arc<CycloField>, t: &[(i64, u32, u32)]) -> RatFn {
        RatFn::from_poly(mpoly_from_ints(f, t))
    }

    fn worked(f: &Arc<CycloField>) -> QuadraticSpec {
        QuadraticSpec {
            k: poly(f, &[(1, 1, 0)]),
            h: RatFn::zero(f),
            terms: vec![(f.one(), poly(f, &[(1, 0, 1)]))],
        }
    }

    #[test]
    fn worked_example() {
        let f = field();
        let out = build_quadratic(&worked(&f)).unwrap();
        let x = poly(&f, &[(1, 1, 0)]);
        let y = poly(&f, &[(1, 0, 1)]);
        let den = &(&y * &y) - &x;
        let h1 = RatFn::from_int(&f, 2).try_div(&den).unwrap();
        let h2 = y.try_div(&(&x * &den)).unwrap();
        assert_eq!(out.h_field, (h1.clone(), h2.clone()));
        assert_eq!(logsum_gamma(&out.psi).unwrap(), ell_times(&out.desc, &out.omega));
        let report = verify_elem_integral(&out.omega, &out.psi).unwrap();
        assert!(report.all_ok(), "{:?}", report);
        let hx = PlaneField::from_vector(h1, h2).unwrap();
        let two_x_y = PlaneField::from_vector(x.scale_rat(&rat(2)), y.clone()).unwrap();
        assert_eq!(proportional(&two_x_y, &hx), Proportionality::Yes(&x * &den));
        assert_eq!(
            rational_fi_search(&two_x_y, 2),
            RfiVerdict::Found(mpoly_from_ints(&f, &[(1, 0, 2)]), mpoly_from_ints(&f, &[(1, 1, 0)]))
        );
        assert_eq!(
            classify(&out.omega, &out.psi, 2).unwrap(),
            Exceptionality::DarbouxReducible
        );
    }

    #[test]
    fn quadratic_edge_cases() {
        let f = field();
        let x = poly(&f, &[(1, 1, 0)]);
        let spec = QuadraticSpec {
            k: x.clone(),
            h: RatFn::one(&f),
            terms: vec![],
        };
        let out = build_quadratic(&spec).unwrap();
        let half_x = RatFn::one(&f).try_div(&x.scale_rat(&rat(2))).unwrap();
        assert_eq!(out.omega, OneForm::new(half_x, RatFn::zero(&f)));
        let spec = QuadraticSpec {
            k: x.clone(),
            h: RatFn::zero(&f),
            terms: vec![],
        };
        assert_eq!(build_quadratic(&spec).err(), Some(Error::GammaZero));
        let spec = QuadraticSpec {
            k: &x * &x,
            h: RatFn::zero(&f),
            terms: vec![(f.one(), x.clone())],
        };
        assert_eq!(build_quadratic(&spec).err(), Some(Error::DegenerateG));
        let spec = QuadraticSpec {
            k: RatFn::zero(&f),
            h: RatFn::zero(&f),
            terms: vec![],
        };
        assert_eq!(build_quadratic(&spec).err(), Some(Error::DivisionByZero));
    }

    #[test]
    fn pipelines_agree() {
        let f = field();
        let spec = QuadraticSpec {
            k: poly(&f, &[(1, 1, 0), (1, 0, 2)]),
            h: poly(&f, &[(1, 0, 1)]),
            terms: vec![
                (f.one(), poly(&f, &[(1, 0, 1), (2, 0, 0)])),
                (f.zeta(), poly(&f, &[(1, 1, 1)])),
            ],
        };
        let q = build_quadratic(&spec).unwrap();
        let c = build_cyclic(&quadratic_to_cyclic(&spec).unwrap()).unwrap();
        assert_eq!(q.omega, c.omega);
        assert_eq!(q.psi, c.psi);
        assert!(check_integrating_factor(&c.omega, &q.desc));
    }

    #[test]
    fn cyclic_examples() {
        let f = field();
        let x = poly(&f, &[(1, 1, 0)]);
        let d = ExtDescriptor::with_default_root(3, x.clone()).unwrap();
        let spec = CyclicSpec {
            desc: d.clone(),
            w_v: ExtElem::ell(&d),
            terms: vec![],
        };
        let out = build_cyclic(&spec).unwrap();
        let third_x = RatFn::one(&f).try_div(&x.scale_rat(&rat(3))).unwrap();
        assert_eq!(out.omega, OneForm::new(third_x, RatFn::zero(&f)));
        assert_eq!(out.psi.v(), &ExtElem::ell(&d));
        let spec = CyclicSpec {
            desc: d.clone(),
            w_v: ExtElem::from_base(&d, x.clone()),
            terms: vec![],
        };
        assert_eq!(build_cyclic(&spec).err(), Some(Error::GammaZero));

        // n = 3 with a log term: ψ is the projected orbit log-sum
        let y = poly(&f, &[(1, 0, 1)]);
        let w = ExtElem::new(&d, vec![y.clone(), RatFn::one(&f), RatFn::zero(&f)]).unwrap();
        let spec = CyclicSpec {
            desc: d.clone(),
            w_v: ExtElem::zero(&d),
            terms: vec![(f.one(), w)],
        };
        let out = build_cyclic(&spec).unwrap();
        assert_eq!(logsum_gamma(&out.psi).unwrap(), ell_times(&d, &out.omega));
        assert!(check_integrating_factor(&out.omega, &d));
        let r = verify_elem_integral(&out.omega, &out.psi).unwrap();
        assert!(r.wedge_zero && r.trace_zero && r.gamma_nonzero);
        assert!(r.norm_one.iter().all(|&b| b));
    }

    #[test]
    fn verification_flags() {
        let f = field();
        let x = poly(&f, &[(1, 1, 0)]);
        let d = ExtDescriptor::with_default_root(2, x.clone()).unwrap();
        let psi = LogSum::new(ExtElem::zero(&d), vec![(f.one(), ExtElem::from_base(&d, x.clone()))]).unwrap();
        let dy = OneForm::dy(&x);
        let r = verify_elem_integral(&dy, &psi).unwrap();
        assert!(!r.wedge_zero);
        assert_eq!(r.norm_one, vec![false]);
        assert!(r.trace_zero && r.gamma_nonzero);
    }

    #[test]
    fn integrating_factor_examples() {
        let f = field();
        let x = poly(&f, &[(1, 1, 0)]);
        let y = poly(&f, &[(1, 0, 1)]);
        let dy_k = ExtDescriptor::with_default_root(2, y.clone()).unwrap();
        assert!(!check_integrating_factor(&OneForm::dx(&x), &dy_k));
        let dx_k = ExtDescriptor::with_default_root(2, x.clone()).unwrap();
        assert!(check_integrating_factor(&OneForm::dx(&x), &dx_k));
        let c = ExtDescriptor::with_default_root(2, RatFn::from_int(&f, 3)).unwrap();
        assert!(check_integrating_factor(&differential(&(&x * &y)), &c));
    }

    #[test]
    fn polynomial_first_integrals() {
        let f = field();
        let x = poly(&f, &[(1, 1, 0)]);
        let y = poly(&f, &[(1, 0, 1)]);
        let ddx = PlaneField::new(RatFn::zero(&f), RatFn::from_int(&f, -1)).unwrap();
        assert_eq!(
            poly_first_integrals(&ddx, 2),
            vec![mpoly_from_ints(&f, &[(1, 0, 1)]), mpoly_from_ints(&f, &[(1, 0, 2)])]
        );
        let two_x_y = PlaneField::from_vector(x.scale_rat(&rat(2)), y.clone()).unwrap();
        assert!(poly_first_integrals(&two_x_y, 2).is_empty());
        let radial = PlaneField::new(x.clone(), y.clone()).unwrap();
        assert_eq!(
            poly_first_integrals(&radial, 2),
            vec![mpoly_from_ints(&f, &[(1, 2, 0), (1, 0, 2)])]
        );
        assert_eq!(
            rational_fi_search(&ddx, 1),
            RfiVerdict::Found(mpoly_from_ints(&f, &[(1, 0, 1)]), MPoly::one(&f))
        );
    }

    #[test]
    fn darboux_examples() {
        let f = field();
        let x = poly(&f, &[(1, 1, 0)]);
        let y = poly(&f, &[(1, 0, 1)]);
        let two_x_y = PlaneField::from_vector(x.scale_rat(&rat(2)), y.clone()).unwrap();
        let two = MPoly::from_int(&f, 2);
        assert_eq!(is_darboux(&two_x_y, &mpoly_from_ints(&f, &[(1, 0, 2)])), Darboux::Yes(two.clone()));
        assert_eq!(is_darboux(&two_x_y, &mpoly_from_ints(&f, &[(1, 1, 0)])), Darboux::Yes(two));
        let ddx = PlaneField::new(RatFn::zero(&f), RatFn::from_int(&f, -1)).unwrap();
        assert_eq!(is_darboux(&ddx, &mpoly_from_ints(&f, &[(1, 1, 0), (1, 0, 0)])), Darboux::No);
    }

    #[test]
    fn proportionality() {
        let f = field();
        let x = poly(&f, &[(1, 1, 0)]);
        let y = poly(&f, &[(1, 0, 1)]);
        let a = PlaneField::new(x.clone(), y.clone()).unwrap();
        assert_eq!(proportional(&a, &a), Proportionality::Yes(RatFn::one(&f)));
        let dx = PlaneField::new(RatFn::one(&f), RatFn::zero(&f)).unwrap();
        let dy = PlaneField::new(RatFn::zero(&f), RatFn::one(&f)).unwrap();
        assert_eq!(proportional(&dx, &dy), Proportionality::No);
    }
}
