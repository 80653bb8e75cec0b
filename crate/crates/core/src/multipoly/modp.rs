//! Coprimality certificates through reduction to `F_p`.
//!
//! With `p ≡ 1 (mod N)` and `w` a primitive `N`-th root of unity mod `p`,
//! `ζ ↦ w` maps the `p`-integral elements of `Q(ζ_N)` onto `F_p`. If `A`
//! and `B` have `p`-integral coefficients and a common factor `G` of positive
//! degree in `v`, Gauss's lemma gives `A = G·H` with `G`, `H` integral, so
//! whenever the image of `lc_v A` survives, the images of `A` and `B` still
//! share a factor of positive degree. A coprime image therefore proves that
//! no common factor involves `v`.

use alloc::vec::Vec;

use super::{MPoly, Var};
use crate::scalars::{mul_mod, pow_mod, CycloNumber};

/// Dense polynomial over `F_p`, low degree first, no trailing zeros.
type Fp = Vec<u64>;

fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn fp_rem(mut a: Fp, b: &Fp, p: u64) -> Fp {
    let db = b.len() - 1;
    let inv = pow_mod(b[db], p - 2, p);
    while a.len() > db {
        let top = a.len() - 1;
        let c = mul_mod(a[top], inv, p);
        if c != 0 {
            let shift = top - db;
            for (j, bj) in b.iter().enumerate() {
                let t = mul_mod(c, *bj, p);
                a[shift + j] = (a[shift + j] + p - t) % p;
            }
        }
        a.pop();
        a = trim(a);
    }
    a
}

/// Degree of `gcd(a, b)` for nonzero inputs.
fn fp_gcd_degree(a: Fp, b: Fp, p: u64) -> usize {
    let (mut r0, mut r1) = (a, b);
    while !r1.is_empty() {
        let r = fp_rem(r0, &r1, p);
        r0 = core::mem::replace(&mut r1, r);
    }
    r0.len() - 1
}

/// Image of `a` as a polynomial in `v`, the other variable set to `t`.
fn image(a: &MPoly, v: Var, t: u64, p: u64, w: u64) -> Option<Fp> {
    let deg = a.degree_in(v)? as usize;
    let other = match v {
        Var::X => Var::Y,
        Var::Y => Var::X,
    };
    let mut out = alloc::vec![0u64; deg + 1];
    for (m, c) in a.terms() {
        let c = c.reduce_mod(p, w)?;
        let val = mul_mod(c, pow_mod(t, m.exp(other) as u64, p), p);
        let k = m.exp(v) as usize;
        out[k] = (out[k] + val) % p;
    }
    Some(out)
}

/// True if some reduction proves `a` and `b` have no common factor of
/// positive degree in `v`. `false` means "not certified".
fn coprime_in(a: &MPoly, b: &MPoly, v: Var) -> bool {
    let (da, db) = match (a.degree_in(v), b.degree_in(v)) {
        (Some(da), Some(db)) => (da as usize, db as usize),
        _ => return false,
    };
    if da == 0 || db == 0 {
        return true;
    }
    for &(p, w) in a.field().reductions() {
        for t in [3u64, 7, 12_345, 987_654_321] {
            let (ia, ib) = match (image(a, v, t, p, w), image(b, v, t, p, w)) {
                (Some(ia), Some(ib)) => (ia, ib),
                _ => break,
            };
            if ia[da] == 0 || ib[db] == 0 {
                continue;
            }
            return fp_gcd_degree(ia, ib, p) == 0;
        }
    }
    false
}

/// Certifies `gcd(a, b) = 1` for nonzero `a`, `b`.
pub(crate) fn certify_coprime(a: &MPoly, b: &MPoly) -> bool {
    coprime_in(a, b, Var::X) && coprime_in(a, b, Var::Y)
}

/// Univariate variant for dense coefficient lists.
pub(crate) fn certify_coprime_dense(a: &[CycloNumber], b: &[CycloNumber]) -> bool {
    let (Some(la), Some(_)) = (a.last(), b.last()) else {
        return false;
    };
    if a.len() == 1 || b.len() == 1 {
        return true;
    }
    for &(p, w) in la.field().reductions() {
        let ia: Option<Fp> = a.iter().map(|c| c.reduce_mod(p, w)).collect();
        let ib: Option<Fp> = b.iter().map(|c| c.reduce_mod(p, w)).collect();
        let (Some(ia), Some(ib)) = (ia, ib) else {
            continue;
        };
        if ia.last() == Some(&0) || ib.last() == Some(&0) {
            continue;
        }
        return fp_gcd_degree(ia, ib, p) == 0;
    }
    false
}
