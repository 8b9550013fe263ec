//! Univariate polynomial helpers over an abstract finite field, used to pick
//! irreducible moduli and to invert extension-field elements.
//!
//! Polynomials are coefficient vectors, lowest degree first, with no trailing
//! zeros (the zero polynomial is the empty vector).

use crate::gf::Field;

pub(crate) fn trim<F: Field>(f: &F, p: &mut Vec<F::Elem>) {
    while p.last().is_some_and(|c| f.is_zero(c)) {
        p.pop();
    }
}

pub(crate) fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, &mut out);
    out
}

pub(crate) fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(|| f.zero());
        let y = b.get(i).cloned().unwrap_or_else(|| f.zero());
        out.push(f.sub(&x, &y));
    }
    trim(f, &mut out);
    out
}

/// Euclidean division `a = quo * b + rem`. `b` must be nonzero.
pub(crate) fn div_rem<F: Field>(
    f: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> (Vec<F::Elem>, Vec<F::Elem>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut rem = a.to_vec();
    trim(f, &mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead_inv = f.inv(b.last().unwrap()).expect("nonzero leading coefficient");
    let mut quo = vec![f.zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = f.mul(rem.last().unwrap(), &lead_inv);
        for (j, bj) in b.iter().enumerate() {
            rem[shift + j] = f.sub(&rem[shift + j], &f.mul(&c, bj));
        }
        quo[shift] = c;
        trim(f, &mut rem);
    }
    trim(f, &mut quo);
    (quo, rem)
}

pub(crate) fn rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    div_rem(f, a, b).1
}

pub(crate) fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(f, &mut x);
    trim(f, &mut y);
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    x
}

/// Inverse of `a` modulo `modulus`, if `gcd(a, modulus)` is a unit.
pub(crate) fn inv_mod<F: Field>(
    f: &F,
    a: &[F::Elem],
    modulus: &[F::Elem],
) -> Option<Vec<F::Elem>> {
    // Invariant: s_i * a = r_i (mod modulus).
    let mut r0 = modulus.to_vec();
    let mut r1 = rem(f, a, modulus);
    let mut s0: Vec<F::Elem> = Vec::new();
    let mut s1 = vec![f.one()];
    while !r1.is_empty() {
        let (qt, r2) = div_rem(f, &r0, &r1);
        let s2 = sub(f, &s0, &mul(f, &qt, &s1));
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if r0.len() != 1 {
        return None;
    }
    let c = f.inv(&r0[0])?;
    let mut out: Vec<F::Elem> = s0.iter().map(|x| f.mul(x, &c)).collect();
    trim(f, &mut out);
    Some(rem(f, &out, modulus))
}

fn mul_mod<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem], m: &[F::Elem]) -> Vec<F::Elem> {
    rem(f, &mul(f, a, b), m)
}

fn pow_mod<F: Field>(f: &F, base: &[F::Elem], mut e: u64, m: &[F::Elem]) -> Vec<F::Elem> {
    let mut acc = vec![f.one()];
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(f, &acc, &b, m);
        }
        e >>= 1;
        if e > 0 {
            b = mul_mod(f, &b, &b, m);
        }
    }
    acc
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic `poly` over a field of `order` elements.
pub(crate) fn is_irreducible<F: Field>(f: &F, poly: &[F::Elem], order: u64) -> bool {
    let d = poly.len().saturating_sub(1);
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let x = vec![f.zero(), f.one()];
    // frob[i] = x^(order^i) mod poly
    let mut frob = vec![rem(f, &x, poly)];
    for i in 1..=d {
        let next = pow_mod(f, &frob[i - 1], order, poly);
        frob.push(next);
    }
    if sub(f, &frob[d], &x).iter().any(|c| !f.is_zero(c)) {
        return false;
    }
    prime_factors(d as u64).into_iter().all(|r| {
        let h = sub(f, &frob[d / r as usize], &x);
        gcd(f, &h, poly).len() == 1
    })
}
