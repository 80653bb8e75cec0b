//! Exact kernels of small dense matrices.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalars::{denominator_lcm, CycloNumber, Rat};

/// Row echelon form of an integer matrix by Bareiss fraction-free
/// elimination. Returns the echelon rows and their pivot columns.
fn bareiss_echelon(mut m: Vec<Vec<BigInt>>, ncols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        for i in r + 1..nrows {
            let factor = m[i][c].clone();
            for j in c + 1..ncols {
                let v = &m[r][c] * &m[i][j] - &factor * &m[r][j];
                debug_assert!((&v % &prev).is_zero());
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// Basis of the right kernel of a rational matrix given by rows.
///
/// Each basis vector has integer entries with gcd 1 and a positive first
/// nonzero entry; one vector per free column, in column order.
pub fn rational_kernel(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let int_rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let l = denominator_lcm(row.iter());
            row.iter()
                .map(|x| (x * Rat::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    let (ech, pivots) = bareiss_echelon(int_rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut x = vec![Rat::zero(); ncols];
        x[fc] = Rat::one();
        for (i, &pc) in pivots.iter().enumerate().rev() {
            let mut s = Rat::zero();
            for j in pc + 1..ncols {
                if !x[j].is_zero() && !ech[i][j].is_zero() {
                    s += Rat::from_integer(ech[i][j].clone()) * &x[j];
                }
            }
            x[pc] = -s / Rat::from_integer(ech[i][pc].clone());
        }
        basis.push(normalize_integer_vector(x));
    }
    basis
}

/// Rank of a rational matrix.
pub fn rational_rank(rows: &[Vec<Rat>], ncols: usize) -> usize {
    ncols - rational_kernel(rows, ncols).len()
}

/// Scales a nonzero rational vector to coprime integers with positive lead.
pub fn normalize_integer_vector(x: Vec<Rat>) -> Vec<Rat> {
    let l = denominator_lcm(x.iter());
    let ints: Vec<BigInt> = x
        .iter()
        .map(|v| (v * Rat::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() {
        return x;
    }
    let sign = match ints.iter().find(|v| !v.is_zero()) {
        Some(v) if v.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter()
        .map(|v| Rat::from_integer(v / &g * &sign))
        .collect()
}

/// Basis of the right kernel of a matrix over `Q(ζ_N)` by Gauss–Jordan
/// elimination. Each basis vector has a 1 at its free column and zeros at
/// the other free columns.
pub fn cyclo_kernel(rows: Vec<Vec<CycloNumber>>, ncols: usize, zero: &CycloNumber) -> Vec<Vec<CycloNumber>> {
    let mut m = rows;
    let nrows = m.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for j in c..ncols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..nrows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone();
            for j in c..ncols {
                if !m[r][j].is_zero() {
                    let t = &factor * &m[r][j];
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![zero.clone(); ncols];
            x[fc] = zero.one_like();
            for (i, &pc) in pivots.iter().enumerate() {
                x[pc] = -&m[i][fc];
            }
            x
        })
        .collect()
}
