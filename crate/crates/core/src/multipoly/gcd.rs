//! Greatest common divisors and squarefree decomposition.
//!
//! Bivariate polynomials are viewed as polynomials in `x` whose coefficients
//! are dense univariate polynomials in `y` over `Q(ζ_N)`. Contents are taken
//! with Euclid over the field. Primitive parts go through evaluation of `y`
//! at integers, univariate Euclid in `x` and Newton interpolation, with the
//! result certified by exact division. The main path is multimodular; the
//! evaluation algorithm over `Q(ζ_N)` is the fallback. Coprime inputs, the
//! common case, are recognized first by a modular certificate.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::{modgcd, modp, MPoly, Monomial, Var};
use num_traits::One;

use crate::scalars::{CycloField, CycloNumber, Rat};

/// Dense polynomial in `y`, low degree first, no trailing zeros.
type UPoly = Vec<CycloNumber>;
/// Dense polynomial in `x` with `UPoly` coefficients, no trailing zeros.
type BPoly = Vec<UPoly>;

fn up_trim(mut p: UPoly) -> UPoly {
    while p.last().is_some_and(CycloNumber::is_zero) {
        p.pop();
    }
    p
}

fn up_one(field: &Arc<CycloField>) -> UPoly {
    vec![field.one()]
}

fn up_is_one(p: &UPoly) -> bool {
    p.len() == 1 && p[0].is_one()
}

fn up_mul(a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if up_is_one(a) {
        return b.clone();
    }
    if up_is_one(b) {
        return a.clone();
    }
    let z = a[0].zero_like();
    let mut out = vec![z; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    up_trim(out)
}

fn up_scale(a: &UPoly, c: &CycloNumber) -> UPoly {
    up_trim(a.iter().map(|x| x * c).collect())
}

/// Division with remainder over the field.
fn up_divrem(a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.clone());
    }
    let lead_inv = b[db].inv().expect("nonzero divisor");
    let mut r = a.clone();
    let z = a[0].zero_like();
    let mut q = vec![z; a.len() - db];
    for i in (0..q.len()).rev() {
        if r[i + db].is_zero() {
            continue;
        }
        let c = &r[i + db] * &lead_inv;
        for j in 0..=db {
            if !b[j].is_zero() {
                r[i + j] = &r[i + j] - &(&c * &b[j]);
            }
        }
        q[i] = c;
    }
    r.truncate(db);
    (up_trim(q), up_trim(r))
}

fn up_exact_div(a: &UPoly, b: &UPoly) -> UPoly {
    if up_is_one(b) {
        return a.clone();
    }
    let (q, r) = up_divrem(a, b);
    debug_assert!(r.is_empty(), "inexact univariate division");
    q
}

fn up_monic(a: UPoly) -> UPoly {
    match a.last() {
        Some(lc) if !lc.is_one() => {
            let inv = lc.inv().expect("nonzero");
            up_scale(&a, &inv)
        }
        _ => a,
    }
}

/// Monic gcd by Euclid over `Q(ζ_N)`.
fn up_gcd(a: &UPoly, b: &UPoly) -> UPoly {
    if modp::certify_coprime_dense(a, b) {
        return up_one(a[0].field());
    }
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    while !r1.is_empty() {
        if r1.len() == 1 {
            return up_one(&r1[0].field().clone());
        }
        let (_, r) = up_divrem(&r0, &r1);
        r0 = core::mem::replace(&mut r1, r);
    }
    up_monic(r0)
}

fn to_dense(p: &MPoly) -> BPoly {
    let dx = p.degree_in(Var::X).unwrap_or(0) as usize;
    let z = p.field().zero();
    let mut out: BPoly = vec![Vec::new(); dx + 1];
    for (m, c) in p.terms() {
        let row = &mut out[m.x as usize];
        if row.len() <= m.y as usize {
            row.resize(m.y as usize + 1, z.clone());
        }
        row[m.y as usize] = c.clone();
    }
    while out.last().is_some_and(Vec::is_empty) {
        out.pop();
    }
    out
}

fn from_dense(field: &Arc<CycloField>, d: &BPoly) -> MPoly {
    MPoly::from_terms(
        field,
        d.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(j, c)| (Monomial::new(i as u32, j as u32), c.clone()))
        }),
    )
}

fn bp_content(p: &BPoly) -> UPoly {
    let mut g: UPoly = Vec::new();
    for c in p {
        if c.is_empty() {
            continue;
        }
        g = if g.is_empty() {
            up_monic(c.clone())
        } else {
            up_gcd(&g, c)
        };
        if g.len() == 1 {
            break;
        }
    }
    g
}

fn bp_div_scalar(p: &BPoly, c: &UPoly) -> BPoly {
    p.iter().map(|a| up_exact_div(a, c)).collect()
}

fn bp_lc(p: &BPoly) -> &UPoly {
    p.last().expect("nonzero polynomial")
}

fn up_eval(p: &UPoly, a: &Rat, field: &Arc<CycloField>) -> CycloNumber {
    let mut acc = match p.last() {
        Some(c) => c.clone(),
        None => return field.zero(),
    };
    for c in p.iter().rev().skip(1) {
        acc = &acc.scale(a) + c;
    }
    acc
}

fn up_degree(p: &UPoly) -> usize {
    p.len().saturating_sub(1)
}

fn bp_degree_y(p: &BPoly) -> usize {
    p.iter().map(up_degree).max().unwrap_or(0)
}

/// Newton interpolation through `(nodes[i], values[i])`.
fn newton_interp(nodes: &[Rat], values: &[CycloNumber], field: &Arc<CycloField>) -> UPoly {
    let m = nodes.len();
    let mut coef: Vec<CycloNumber> = values.to_vec();
    for j in 1..m {
        for i in (j..m).rev() {
            let diff = &coef[i] - &coef[i - 1];
            let step = Rat::one() / (&nodes[i] - &nodes[i - j]);
            coef[i] = diff.scale(&step);
        }
    }
    let mut out: UPoly = Vec::new();
    for i in (0..m).rev() {
        // out = out·(y − nodes[i]) + coef[i]
        let mut next = vec![field.zero(); out.len() + 1];
        for (k, c) in out.iter().enumerate() {
            next[k + 1] = &next[k + 1] + c;
            next[k] = &next[k] - &c.scale(&nodes[i]);
        }
        next[0] = &next[0] + &coef[i];
        out = up_trim(next);
    }
    out
}

fn bp_divides(field: &Arc<CycloField>, g: &BPoly, a: &BPoly) -> bool {
    from_dense(field, a).exact_div(&from_dense(field, g)).is_ok()
}

/// Gcd of two primitive polynomials of positive `x`-degree, as a primitive
/// polynomial, by evaluating `y` at integers, univariate gcds in `x` and
/// interpolation. Each candidate is certified by exact division.
fn interp_gcd(a: &BPoly, b: &BPoly, field: &Arc<CycloField>) -> BPoly {
    let gamma = up_gcd(bp_lc(a), bp_lc(b));
    let bound = up_degree(&gamma) + bp_degree_y(a).min(bp_degree_y(b)) + 1;
    let mut nodes: Vec<Rat> = Vec::new();
    let mut images: Vec<UPoly> = Vec::new();
    let mut need = bound;
    let mut next_node: i64 = 0;
    loop {
        let node = Rat::from_integer(next_node.into());
        next_node = if next_node > 0 { -next_node } else { 1 - next_node };
        let gv = up_eval(&gamma, &node, field);
        if gv.is_zero() {
            continue;
        }
        let ea: UPoly = up_trim(a.iter().map(|c| up_eval(c, &node, field)).collect());
        let eb: UPoly = up_trim(b.iter().map(|c| up_eval(c, &node, field)).collect());
        if ea.len() != a.len() || eb.len() != b.len() {
            continue;
        }
        let g = up_gcd(&ea, &eb);
        if g.len() == 1 {
            return vec![up_one(field)];
        }
        match images.first().map(|f| f.len()) {
            Some(d) if g.len() > d => continue,
            Some(d) if g.len() < d => {
                nodes.clear();
                images.clear();
                need = bound;
            }
            _ => {}
        }
        nodes.push(node);
        images.push(up_scale(&g, &gv));
        if nodes.len() < need {
            continue;
        }
        let dx = images[0].len();
        let h: BPoly = (0..dx)
            .map(|i| {
                let vals: Vec<CycloNumber> = images.iter().map(|im| im[i].clone()).collect();
                newton_interp(&nodes, &vals, field)
            })
            .collect();
        let c = bp_content(&h);
        let pp = bp_div_scalar(&h, &c);
        if bp_divides(field, &pp, a) && bp_divides(field, &pp, b) {
            return pp;
        }
        need += 2;
    }
}

fn trivial_divisor(a: &MPoly, b: &MPoly) -> Option<MPoly> {
    if b.num_terms() <= a.num_terms() && a.exact_div(b).is_ok() {
        return Some(b.monic().0);
    }
    if a.num_terms() <= b.num_terms() && b.exact_div(a).is_ok() {
        return Some(a.monic().0);
    }
    None
}

/// Greatest common divisor normalized so its leading coefficient in
/// canonical term order is 1. `gcd(0, 0)` is `0`.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    let field = a.field().clone();
    if a.is_zero() {
        return b.monic().0;
    }
    if b.is_zero() {
        return a.monic().0;
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one(&field);
    }
    if modp::certify_coprime(a, b) {
        return MPoly::one(&field);
    }
    if let Some(g) = trivial_divisor(a, b) {
        return g;
    }
    if let Some(g) = modgcd::modular_gcd(a, b) {
        return g;
    }
    exact_gcd(a, b)
}

/// Evaluation/interpolation gcd over `Q(ζ_N)` for nonconstant inputs.
fn exact_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    let field = a.field().clone();
    let da = to_dense(a);
    let db = to_dense(b);
    let ca = bp_content(&da);
    let cb = bp_content(&db);
    let c = up_gcd(&ca, &cb);
    let pa = bp_div_scalar(&da, &ca);
    let pb = bp_div_scalar(&db, &cb);
    let g = if pa.len() == 1 || pb.len() == 1 {
        vec![up_one(&field)]
    } else {
        interp_gcd(&pa, &pb, &field)
    };
    let g: BPoly = g.iter().map(|row| up_mul(row, &c)).collect();
    from_dense(&field, &g).monic().0
}

/// Content with respect to `x` (a polynomial in `y` only) and primitive part.
fn content_x(p: &MPoly) -> (MPoly, MPoly) {
    let field = p.field().clone();
    let d = to_dense(p);
    let c = bp_content(&d);
    let pp = bp_div_scalar(&d, &c);
    (from_dense(&field, &vec![c]), from_dense(&field, &pp))
}

/// Monic content of `p` as a polynomial in `v`: the product of its factors
/// free of `v`.
pub fn content_in(p: &MPoly, v: Var) -> MPoly {
    match v {
        Var::X => content_x(p).0.monic().0,
        Var::Y => content_x(&p.swap_vars()).0.swap_vars().monic().0,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub unit: CycloNumber,
    /// Monic, squarefree, pairwise coprime factors with distinct
    /// multiplicities, highest multiplicity first.
    pub factors: Vec<(MPoly, u32)>,
}

impl SquarefreeDecomposition {
    pub fn expand(&self) -> MPoly {
        self.factors
            .iter()
            .fold(MPoly::constant(self.unit.clone()), |acc, (f, m)| {
                &acc * &f.pow(*m)
            })
    }
}

/// Yun's algorithm for a polynomial all of whose irreducible factors depend
/// on `v`.
fn yun(p: &MPoly, v: Var) -> Vec<(MPoly, u32)> {
    let mut out = Vec::new();
    if p.is_constant() {
        return out;
    }
    let dp = p.partial(v);
    let a0 = gcd(p, &dp);
    let mut b = p.exact_div(&a0).expect("gcd divides");
    let mut c = dp.exact_div(&a0).expect("gcd divides");
    let mut d = &c - &b.partial(v);
    let mut i = 1;
    while !b.is_constant() {
        let a = gcd(&b, &d);
        if !a.is_constant() {
            out.push((a.clone(), i));
        }
        b = b.exact_div(&a).expect("gcd divides");
        c = d.exact_div(&a).expect("gcd divides");
        d = &c - &b.partial(v);
        i += 1;
    }
    out
}

/// `a = unit · Π fᵢ^mᵢ` with squarefree, pairwise coprime, monic `fᵢ`.
pub fn squarefree_decompose(a: &MPoly) -> SquarefreeDecomposition {
    let (monic, unit) = a.monic();
    let (content, prim) = content_x(&monic);
    // the content is a polynomial in y alone
    let mut parts = yun(&prim, Var::X);
    parts.extend(yun(&content, Var::Y));
    let mut merged: Vec<(MPoly, u32)> = Vec::new();
    for (f, m) in parts {
        match merged.iter_mut().find(|(_, mm)| *mm == m) {
            Some(entry) => entry.0 = &entry.0 * &f,
            None => merged.push((f, m)),
        }
    }
    for entry in merged.iter_mut() {
        entry.0 = entry.0.monic().0;
    }
    merged.sort_by(|x, y| y.1.cmp(&x.1));
    SquarefreeDecomposition {
        unit,
        factors: merged,
    }
}
