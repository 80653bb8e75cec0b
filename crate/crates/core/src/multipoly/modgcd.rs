//! Multimodular gcd over `Q(ζ_N)`.
//!
//! For each prime `p ≡ 1 (mod N)` the inputs are mapped to `F_p[x, y]`
//! under every embedding `ζ ↦ w^k`, `gcd(k, N) = 1`. The images' monic gcds
//! determine the coordinates of the monic gcd mod `p` through the inverse
//! Vandermonde matrix of the embeddings. Coordinates are lifted by CRT and
//! rational reconstruction, and a candidate is accepted only after it
//! divides both inputs exactly.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{MPoly, Monomial};
use crate::scalars::{mul_mod, pow_mod, reduction_primes, Rat};

const MAX_PRIMES: usize = 64;

type Up = Vec<u64>;
/// Dense `[x][y]` over `F_p`.
type Bp = Vec<Up>;

fn trim(mut a: Up) -> Up {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

fn up_mul(a: &Up, b: &Up, p: u64) -> Up {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(out)
}

fn up_scale(a: &Up, c: u64, p: u64) -> Up {
    trim(a.iter().map(|&x| mul_mod(x, c, p)).collect())
}

fn up_divrem(a: &Up, b: &Up, p: u64) -> (Up, Up) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.clone());
    }
    let li = inv(b[db], p);
    let mut r = a.clone();
    let mut q = vec![0; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = mul_mod(r[i + db], li, p);
        if c == 0 {
            continue;
        }
        for j in 0..=db {
            r[i + j] = sub(r[i + j], mul_mod(c, b[j], p), p);
        }
        q[i] = c;
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn up_monic(a: Up, p: u64) -> Up {
    match a.last() {
        Some(&lc) if lc != 1 => up_scale(&a, inv(lc, p), p),
        _ => a,
    }
}

fn up_gcd(a: &Up, b: &Up, p: u64) -> Up {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    while !r1.is_empty() {
        let (_, r) = up_divrem(&r0, &r1, p);
        r0 = core::mem::replace(&mut r1, r);
    }
    up_monic(r0, p)
}

fn up_eval(a: &Up, t: u64, p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| (mul_mod(acc, t, p) + c) % p)
}

/// Newton interpolation through distinct nodes.
fn interp(nodes: &[u64], vals: &[u64], p: u64) -> Up {
    let m = nodes.len();
    let mut coef = vals.to_vec();
    for j in 1..m {
        for i in (j..m).rev() {
            let num = sub(coef[i], coef[i - 1], p);
            coef[i] = mul_mod(num, inv(sub(nodes[i], nodes[i - j], p), p), p);
        }
    }
    let mut out: Up = Vec::new();
    for i in (0..m).rev() {
        let mut next = vec![0; out.len() + 1];
        for (k, &c) in out.iter().enumerate() {
            next[k + 1] = (next[k + 1] + c) % p;
            next[k] = sub(next[k], mul_mod(c, nodes[i], p), p);
        }
        next[0] = (next[0] + coef[i]) % p;
        out = trim(next);
    }
    out
}

fn content(a: &Bp, p: u64) -> Up {
    let mut g: Up = Vec::new();
    for row in a.iter().filter(|r| !r.is_empty()) {
        g = if g.is_empty() { up_monic(row.clone(), p) } else { up_gcd(&g, row, p) };
        if g.len() == 1 {
            break;
        }
    }
    g
}

fn div_content(a: &Bp, c: &Up, p: u64) -> Bp {
    a.iter().map(|r| if r.is_empty() { Vec::new() } else { up_divrem(r, c, p).0 }).collect()
}

/// Gcd in `F_p[x, y]` up to a unit; `None` if evaluation points run out.
fn bgcd(a: &Bp, b: &Bp, p: u64) -> Option<Bp> {
    let (ca, cb) = (content(a, p), content(b, p));
    let c = up_gcd(&ca, &cb, p);
    let (pa, pb) = (div_content(a, &ca, p), div_content(b, &cb, p));
    if pa.len() == 1 || pb.len() == 1 {
        return Some(vec![c]);
    }
    let (la, lb) = (pa.last()?, pb.last()?);
    let gamma = up_gcd(la, lb, p);
    let deg_y = |x: &Bp| x.iter().map(|r| r.len().saturating_sub(1)).max().unwrap_or(0);
    let need = gamma.len() - 1 + deg_y(&pa).min(deg_y(&pb)) + 1;
    let mut nodes: Vec<u64> = Vec::new();
    let mut images: Vec<Up> = Vec::new();
    for t in 1..(need as u64 + 64) {
        let gt = up_eval(&gamma, t, p);
        if gt == 0 || up_eval(la, t, p) == 0 || up_eval(lb, t, p) == 0 {
            continue;
        }
        let ea = trim(pa.iter().map(|r| up_eval(r, t, p)).collect());
        let eb = trim(pb.iter().map(|r| up_eval(r, t, p)).collect());
        let g = up_gcd(&ea, &eb, p);
        if g.len() == 1 {
            return Some(vec![c]);
        }
        match images.first().map(Vec::len) {
            Some(d) if g.len() > d => continue,
            Some(d) if g.len() < d => {
                nodes.clear();
                images.clear();
            }
            _ => {}
        }
        nodes.push(t);
        images.push(up_scale(&g, gt, p));
        if nodes.len() == need {
            let h: Bp = (0..images[0].len())
                .map(|i| {
                    let vals: Vec<u64> = images.iter().map(|im| im[i]).collect();
                    interp(&nodes, &vals, p)
                })
                .collect();
            let hc = content(&h, p);
            let h = div_content(&h, &hc, p);
            return Some(h.iter().map(|r| up_mul(r, &c, p)).collect());
        }
    }
    None
}

/// Canonical leading monomial: highest total degree, then highest `x`.
fn leading(g: &Bp) -> Option<(u32, u32)> {
    let mut best: Option<(u32, u32)> = None;
    for (i, r) in g.iter().enumerate() {
        if let Some(j) = r.len().checked_sub(1) {
            let m = (i as u32, j as u32);
            let key = |m: (u32, u32)| (m.0 + m.1, m.0);
            if best.is_none_or(|b| key(m) > key(b)) {
                best = Some(m);
            }
        }
    }
    best
}

fn image(a: &MPoly, p: u64, w: u64) -> Option<Bp> {
    let dx = a.degree_in(super::Var::X)? as usize;
    let mut out: Bp = vec![Vec::new(); dx + 1];
    for (m, c) in a.terms() {
        let v = c.reduce_mod(p, w)?;
        let row = &mut out[m.x as usize];
        if row.len() <= m.y as usize {
            row.resize(m.y as usize + 1, 0);
        }
        row[m.y as usize] = v;
    }
    let mut out: Bp = out.into_iter().map(trim).collect();
    while out.last().is_some_and(Vec::is_empty) {
        out.pop();
    }
    Some(out)
}

fn unit_exponents(n: u32) -> Vec<u64> {
    (1..=n.max(1)).filter(|k| k.gcd(&n) == 1 || n == 1).map(u64::from).collect()
}

/// Inverse of `V[j][i] = r_j^i` mod `p`.
fn vandermonde_inverse(roots: &[u64], p: u64) -> Vec<Vec<u64>> {
    let n = roots.len();
    let mut m: Vec<Vec<u64>> = roots
        .iter()
        .enumerate()
        .map(|(j, &r)| {
            let mut row: Vec<u64> = (0..n).map(|i| pow_mod(r, i as u64, p)).collect();
            row.extend((0..n).map(|k| u64::from(k == j)));
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| m[r][c] != 0).expect("distinct roots");
        m.swap(c, piv);
        let ic = inv(m[c][c], p);
        for e in m[c].iter_mut() {
            *e = mul_mod(*e, ic, p);
        }
        for r in 0..n {
            if r != c && m[r][c] != 0 {
                let f = m[r][c];
                for k in 0..2 * n {
                    let t = mul_mod(f, m[c][k], p);
                    m[r][k] = sub(m[r][k], t, p);
                }
            }
        }
    }
    m.into_iter().map(|row| row[n..].to_vec()).collect()
}

fn rational_reconstruct(u: &BigInt, m: &BigInt) -> Option<Rat> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = core::mem::replace(&mut r1, r2);
        t0 = core::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rat::new(r1, t1))
}

/// Monic gcd of two nonzero, nonconstant polynomials, or `None` if the
/// prime budget runs out.
pub(super) fn modular_gcd(a: &MPoly, b: &MPoly) -> Option<MPoly> {
    let field = a.field().clone();
    let order = field.order();
    let phi = field.degree();
    let exps = unit_exponents(order);
    debug_assert_eq!(exps.len(), phi);
    let (la, lb) = (a.leading()?.0, b.leading()?.0);
    // accumulated coordinates mod `modulus`, for the smallest degree seen
    let mut best: Option<(u32, BigInt, BTreeMap<Monomial, Vec<BigInt>>)> = None;
    let mut last: Option<MPoly> = None;
    for (p, w) in reduction_primes(order).take(MAX_PRIMES) {
        let roots: Vec<u64> = exps.iter().map(|&k| pow_mod(w, k, p)).collect();
        let mut gs: Vec<Bp> = Vec::with_capacity(phi);
        let mut ok = true;
        for &r in &roots {
            let (Some(ia), Some(ib)) = (image(a, p, r), image(b, p, r)) else {
                ok = false;
                break;
            };
            let keeps = |img: &Bp, m: Monomial| {
                img.get(m.x as usize).and_then(|row| row.get(m.y as usize)).is_some_and(|&c| c != 0)
            };
            if !keeps(&ia, la) || !keeps(&ib, lb) {
                ok = false;
                break;
            }
            match bgcd(&ia, &ib, p) {
                Some(g) => gs.push(g),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let leads: Vec<Option<(u32, u32)>> = gs.iter().map(leading).collect();
        if leads.iter().any(|l| *l != leads[0]) {
            continue;
        }
        let Some((lx, ly)) = leads[0] else { continue };
        let deg = lx + ly;
        if deg == 0 {
            // leading terms survive, so a common factor would survive too
            return Some(MPoly::one(&field));
        }
        let mut vals: BTreeMap<Monomial, Vec<u64>> = BTreeMap::new();
        for (j, g) in gs.iter().enumerate() {
            let li = inv(g[lx as usize][ly as usize], p);
            for (i, row) in g.iter().enumerate() {
                for (k, &c) in row.iter().enumerate() {
                    if c != 0 {
                        vals.entry(Monomial::new(i as u32, k as u32)).or_insert_with(|| vec![0; phi])[j] =
                            mul_mod(c, li, p);
                    }
                }
            }
        }
        let vinv = vandermonde_inverse(&roots, p);
        let coords: BTreeMap<Monomial, Vec<u64>> = vals
            .into_iter()
            .map(|(m, v)| {
                let c = (0..phi)
                    .map(|i| (0..phi).fold(0, |acc, j| (acc + mul_mod(vinv[i][j], v[j], p)) % p))
                    .collect();
                (m, c)
            })
            .collect();
        let bp = BigInt::from(p);
        best = match best.take() {
            Some((d, _, _)) if deg < d => Some((deg, bp, lift_fresh(coords))),
            Some(cur @ (d, _, _)) if deg > d => Some(cur),
            Some((d, m, acc)) => Some((d, &m * &bp, crt(acc, &m, coords, p, phi))),
            None => Some((deg, bp, lift_fresh(coords))),
        };
        let (_, m, acc) = best.as_ref().expect("set above");
        let mut terms = Vec::new();
        let mut failed = false;
        for (mono, cs) in acc {
            let mut rs = Vec::with_capacity(phi);
            for c in cs {
                match rational_reconstruct(c, m) {
                    Some(r) => rs.push(r),
                    None => {
                        failed = true;
                        break;
                    }
                }
            }
            if failed {
                break;
            }
            terms.push((*mono, field.from_poly(rs)));
        }
        if failed {
            continue;
        }
        let cand = MPoly::from_terms(&field, terms);
        if last.as_ref() == Some(&cand) && a.exact_div(&cand).is_ok() && b.exact_div(&cand).is_ok() {
            return Some(cand);
        }
        last = Some(cand);
    }
    None
}

fn lift_fresh(coords: BTreeMap<Monomial, Vec<u64>>) -> BTreeMap<Monomial, Vec<BigInt>> {
    coords.into_iter().map(|(m, v)| (m, v.into_iter().map(BigInt::from).collect())).collect()
}

fn crt(
    mut acc: BTreeMap<Monomial, Vec<BigInt>>,
    m: &BigInt,
    new: BTreeMap<Monomial, Vec<u64>>,
    p: u64,
    phi: usize,
) -> BTreeMap<Monomial, Vec<BigInt>> {
    let bp = BigInt::from(p);
    let m_mod_p = m.mod_floor(&bp);
    let m_inv = BigInt::from(inv(low_u64(&m_mod_p), p));
    let monos: Vec<Monomial> = acc.keys().chain(new.keys()).copied().collect();
    for mono in monos {
        let old = acc.entry(mono).or_insert_with(|| vec![BigInt::zero(); phi]);
        let fresh = new.get(&mono);
        for i in 0..phi {
            let r = fresh.map_or(0, |v| v[i]);
            // x = old + m·((r − old)·m⁻¹ mod p)
            let diff = (BigInt::from(r) - &old[i]).mod_floor(&bp);
            let k = (diff * &m_inv).mod_floor(&bp);
            old[i] = &old[i] + m * k;
        }
    }
    acc
}

fn low_u64(n: &BigInt) -> u64 {
    n.iter_u64_digits().next().unwrap_or(0)
}
