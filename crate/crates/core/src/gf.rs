//! Finite-field arithmetic: the base field F_q, its degree-m extension
//! F_{q^m}, and F_q-bases of the extension (the γ-expansion).
//!
//! Base-field elements are `u16` values whose base-p digits are the
//! coefficients of the element in the polynomial basis of the base modulus.
//! Extension elements are stored in the power basis of a fixed monic
//! irreducible modulus: the lexicographically least one, where candidates are
//! ordered by the integer whose base-q digits are their coefficients
//! (constant term least significant).

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::MatFq;
use crate::poly;

/// Minimal field interface shared by F_q and F_{q^m}, used by the generic
/// elimination and polynomial code.
pub trait Field {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), a)
    }
}

/// Prime field F_p, only used while building F_{p^e}.
struct PrimeField(u32);

impl Field for PrimeField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        (a + b) % self.0
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        (a + self.0 - b) % self.0
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.0 as u64) as u32
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        // Fermat; p is small.
        let (mut acc, mut b, mut e) = (1u64, *a as u64, self.0 as u64 - 2);
        let p = self.0 as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        Some(acc as u32)
    }
}

/// Lexicographically least monic irreducible polynomial of `degree` over a
/// field with `order` elements; `elem(i)` maps digit `i < order` to an element.
fn least_irreducible<F: Field>(
    f: &F,
    order: u64,
    degree: usize,
    elem: impl Fn(u64) -> F::Elem,
) -> Vec<F::Elem> {
    let mut idx: u64 = 0;
    loop {
        let mut coeffs = Vec::with_capacity(degree + 1);
        let mut v = idx;
        for _ in 0..degree {
            coeffs.push(elem(v % order));
            v /= order;
        }
        if v == 0 {
            coeffs.push(f.one());
            if poly::is_irreducible(f, &coeffs, order) {
                return coeffs;
            }
        }
        idx += 1;
    }
}

struct BaseInner {
    q: u32,
    p: u32,
    degree: u32,
    modulus: Vec<u32>,
    exp: Vec<u16>,
    log: Vec<u32>,
}

/// The base field F_q, q a prime power up to 2^16.
#[derive(Clone)]
pub struct BaseField(Arc<BaseInner>);

impl fmt::Debug for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

impl PartialEq for BaseField {
    fn eq(&self, other: &Self) -> bool {
        self.0.q == other.0.q
    }
}

impl Eq for BaseField {}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let factors = poly::prime_factors(q as u64);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0] as u32;
    let mut e = 0;
    let mut v = q;
    while v > 1 {
        v /= p;
        e += 1;
    }
    Some((p, e))
}

impl BaseField {
    pub fn new(q: u32) -> Result<Self> {
        let (p, e) = prime_power(q)
            .filter(|_| q <= 1 << 16)
            .ok_or_else(|| Error::InvalidField(format!("q = {q} is not a prime power <= 2^16")))?;
        let fp = PrimeField(p);
        let modulus = least_irreducible(&fp, p as u64, e as usize, |i| i as u32);

        // Slow digit-wise multiplication, only used to build the tables.
        let slow_mul = |a: u32, b: u32| -> u32 {
            let digits = |mut v: u32| {
                let mut d = Vec::with_capacity(e as usize);
                for _ in 0..e {
                    d.push(v % p);
                    v /= p;
                }
                d
            };
            let prod = poly::rem(&fp, &poly::mul(&fp, &digits(a), &digits(b)), &modulus);
            prod.iter().rev().fold(0, |acc, &c| acc * p + c)
        };

        let order = q - 1;
        let exps: Vec<u64> = poly::prime_factors(order as u64)
            .into_iter()
            .map(|r| order as u64 / r)
            .collect();
        let pow = |g: u32, mut k: u64| {
            let (mut acc, mut b) = (1u32, g);
            while k > 0 {
                if k & 1 == 1 {
                    acc = slow_mul(acc, b);
                }
                b = slow_mul(b, b);
                k >>= 1;
            }
            acc
        };
        let generator = (1..q)
            .find(|&g| exps.iter().all(|&k| pow(g, k) != 1) && (q == 2 || g != 1))
            .expect("multiplicative group is cyclic");

        let mut exp = vec![0u16; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..order as usize {
            exp[i] = x as u16;
            exp[i + order as usize] = x as u16;
            log[x as usize] = i as u32;
            x = slow_mul(x, generator);
        }
        Ok(BaseField(Arc::new(BaseInner {
            q,
            p,
            degree: e,
            modulus,
            exp,
            log,
        })))
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn is_binary(&self) -> bool {
        self.0.q == 2
    }

    /// Coefficients of the modulus defining F_q over F_p (lowest first).
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// Bits used by one serialized element.
    pub fn bits_per_elem(&self) -> u32 {
        32 - (self.0.q - 1).leading_zeros()
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        let p = self.0.p;
        if p == 2 {
            return a ^ b;
        }
        if self.0.degree == 1 {
            return ((a as u32 + b as u32) % p) as u16;
        }
        let (mut a, mut b) = (a as u32, b as u32);
        let (mut out, mut scale) = (0u32, 1u32);
        for _ in 0..self.0.degree {
            out += ((a % p + b % p) % p) * scale;
            a /= p;
            b /= p;
            scale *= p;
        }
        out as u16
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        let mut a = a as u32;
        let (mut out, mut scale) = (0u32, 1u32);
        for _ in 0..self.0.degree {
            out += ((p - a % p) % p) * scale;
            a /= p;
            scale *= p;
        }
        out as u16
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        if self.0.p == 2 {
            a ^ b
        } else {
            self.add(a, self.neg(b))
        }
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        let inner = &*self.0;
        inner.exp[(inner.log[a as usize] + inner.log[b as usize]) as usize]
    }

    #[inline]
    pub fn inv(&self, a: u16) -> Option<u16> {
        if a == 0 {
            return None;
        }
        let inner = &*self.0;
        let order = inner.q - 1;
        Some(inner.exp[((order - inner.log[a as usize]) % order) as usize])
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u16 {
        rng.gen_range(0..self.0.q) as u16
    }
}

impl Field for BaseField {
    type Elem = u16;

    fn zero(&self) -> u16 {
        0
    }
    fn one(&self) -> u16 {
        1
    }
    fn is_zero(&self, a: &u16) -> bool {
        *a == 0
    }
    fn add(&self, a: &u16, b: &u16) -> u16 {
        BaseField::add(self, *a, *b)
    }
    fn sub(&self, a: &u16, b: &u16) -> u16 {
        BaseField::sub(self, *a, *b)
    }
    fn mul(&self, a: &u16, b: &u16) -> u16 {
        BaseField::mul(self, *a, *b)
    }
    fn inv(&self, a: &u16) -> Option<u16> {
        BaseField::inv(self, *a)
    }
    fn neg(&self, a: &u16) -> u16 {
        BaseField::neg(self, *a)
    }
}

/// An element of F_{q^m}: its m coordinates in the power basis of the modulus.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtElem(Vec<u16>);

impl ExtElem {
    pub fn coeffs(&self) -> &[u16] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<u16> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtElem{:?}", self.0)
    }
}

struct ExtInner {
    base: BaseField,
    m: usize,
    modulus: Vec<u16>,
    /// `frob_images[i] = (y^i)^q`.
    frob_images: Vec<ExtElem>,
    /// Bit-packed modulus for q = 2, m <= 64.
    packed_modulus: Option<u128>,
    packed_frob: Option<Vec<u64>>,
}

/// The extension F_{q^m} in the power basis of its modulus.
#[derive(Clone)]
pub struct ExtField(Arc<ExtInner>);

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.0.base.q(), self.0.m)
    }
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        self.0.base == other.0.base && self.0.modulus == other.0.modulus
    }
}

impl Eq for ExtField {}

impl ExtField {
    /// F_{q^m} with the lexicographically least monic irreducible modulus.
    pub fn new(base: BaseField, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidField("extension degree must be positive".into()));
        }
        let modulus = least_irreducible(&base, base.q() as u64, m, |i| i as u16);
        Self::with_modulus(base, modulus)
    }

    /// F_{q^m} with an explicit monic modulus (lowest coefficient first),
    /// checked for irreducibility.
    pub fn with_modulus(base: BaseField, modulus: Vec<u16>) -> Result<Self> {
        let m = modulus.len().saturating_sub(1);
        if m == 0 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidField("modulus must be monic of positive degree".into()));
        }
        if modulus.iter().any(|&c| c as u32 >= base.q()) {
            return Err(Error::InvalidField("modulus coefficient out of range".into()));
        }
        if !poly::is_irreducible(&base, &modulus, base.q() as u64) {
            return Err(Error::InvalidField(format!("modulus {modulus:?} is reducible")));
        }
        let packed_modulus = (base.is_binary() && m <= 64)
            .then(|| modulus.iter().enumerate().fold(0u128, |acc, (i, &c)| acc | ((c as u128) << i)));
        let mut inner = ExtInner {
            base,
            m,
            modulus,
            frob_images: Vec::new(),
            packed_modulus,
            packed_frob: None,
        };
        // (y^i)^q, computed with the plain multiplication before the table exists.
        let field = ExtField(Arc::new(inner));
        let mut y = vec![0u16; m];
        if m > 1 {
            y[1] = 1;
        } else {
            y[0] = field.base_ref().inv(field.0.modulus[0]).map_or(0, |c| field.base_ref().neg(c));
        }
        let y = ExtElem(y);
        let yq = field.pow_u64(&y, field.base_ref().q() as u64);
        let mut images = Vec::with_capacity(m);
        let mut acc = field.one();
        for _ in 0..m {
            images.push(acc.clone());
            acc = field.mul(&acc, &yq);
        }
        inner = Arc::try_unwrap(field.0).ok().expect("unique");
        inner.packed_frob = inner
            .packed_modulus
            .map(|_| images.iter().map(|e| pack_bits(&e.0) as u64).collect());
        inner.frob_images = images;
        Ok(ExtField(Arc::new(inner)))
    }

    fn base_ref(&self) -> &BaseField {
        &self.0.base
    }

    pub fn base(&self) -> &BaseField {
        &self.0.base
    }

    /// Extension degree m.
    pub fn degree(&self) -> usize {
        self.0.m
    }

    pub fn q(&self) -> u32 {
        self.0.base.q()
    }

    /// Monic modulus, lowest coefficient first.
    pub fn modulus(&self) -> &[u16] {
        &self.0.modulus
    }

    pub fn zero(&self) -> ExtElem {
        ExtElem(vec![0; self.0.m])
    }

    pub fn one(&self) -> ExtElem {
        let mut v = vec![0; self.0.m];
        v[0] = 1;
        ExtElem(v)
    }

    /// Embeds a base-field scalar.
    pub fn scalar(&self, c: u16) -> ExtElem {
        let mut v = vec![0; self.0.m];
        v[0] = c;
        ExtElem(v)
    }

    /// The generator y of the power basis (y = root of the modulus).
    pub fn generator(&self) -> ExtElem {
        let mut v = vec![0u16; self.0.m];
        if self.0.m > 1 {
            v[1] = 1;
            ExtElem(v)
        } else {
            v[0] = self.0.base.neg(self.0.modulus[0]);
            ExtElem(v)
        }
    }

    /// Element from power-basis coordinates; validates length and range.
    pub fn elem(&self, coeffs: Vec<u16>) -> Result<ExtElem> {
        if coeffs.len() != self.0.m || coeffs.iter().any(|&c| c as u32 >= self.q()) {
            return Err(Error::FieldMismatch);
        }
        Ok(ExtElem(coeffs))
    }

    pub fn contains(&self, a: &ExtElem) -> bool {
        a.0.len() == self.0.m && a.0.iter().all(|&c| (c as u32) < self.q())
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> ExtElem {
        ExtElem((0..self.0.m).map(|_| self.0.base.random(rng)).collect())
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let base = &self.0.base;
        ExtElem(a.0.iter().zip(&b.0).map(|(&x, &y)| base.add(x, y)).collect())
    }

    pub fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        let base = &self.0.base;
        ExtElem(a.0.iter().zip(&b.0).map(|(&x, &y)| base.sub(x, y)).collect())
    }

    pub fn neg(&self, a: &ExtElem) -> ExtElem {
        let base = &self.0.base;
        ExtElem(a.0.iter().map(|&x| base.neg(x)).collect())
    }

    /// Multiplication by a base-field scalar.
    pub fn scale(&self, c: u16, a: &ExtElem) -> ExtElem {
        let base = &self.0.base;
        ExtElem(a.0.iter().map(|&x| base.mul(c, x)).collect())
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        if let Some(modulus) = self.0.packed_modulus {
            let prod = clmul64(pack_bits(&a.0) as u64, pack_bits(&b.0) as u64);
            return ExtElem(unpack_bits(reduce_packed(prod, modulus, self.0.m), self.0.m));
        }
        let base = &self.0.base;
        let m = self.0.m;
        let mut prod = vec![0u16; 2 * m - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] = base.add(prod[i + j], base.mul(x, y));
            }
        }
        // Reduce with the monic modulus: y^m = -sum_{i<m} c_i y^i.
        for d in (m..2 * m - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..m {
                let t = base.mul(c, self.0.modulus[i]);
                prod[d - m + i] = base.sub(prod[d - m + i], t);
            }
        }
        prod.truncate(m);
        ExtElem(prod)
    }

    /// Checked multiplication: both operands must belong to this field.
    pub fn try_mul(&self, a: &ExtElem, b: &ExtElem) -> Result<ExtElem> {
        if !self.contains(a) || !self.contains(b) {
            return Err(Error::FieldMismatch);
        }
        Ok(self.mul(a, b))
    }

    pub fn square(&self, a: &ExtElem) -> ExtElem {
        self.mul(a, a)
    }

    pub fn pow_u64(&self, a: &ExtElem, mut e: u64) -> ExtElem {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        acc
    }

    pub fn inv(&self, a: &ExtElem) -> Option<ExtElem> {
        if a.is_zero() {
            return None;
        }
        let base = &self.0.base;
        let mut av = a.0.clone();
        poly::trim(base, &mut av);
        let inv = poly::inv_mod(base, &av, &self.0.modulus)?;
        let mut out = vec![0u16; self.0.m];
        out[..inv.len()].copy_from_slice(&inv);
        Some(ExtElem(out))
    }

    /// a^q.
    pub fn frobenius1(&self, a: &ExtElem) -> ExtElem {
        if let Some(images) = &self.0.packed_frob {
            let mut acc = 0u64;
            for (i, &c) in a.0.iter().enumerate() {
                if c != 0 {
                    acc ^= images[i];
                }
            }
            return ExtElem(unpack_bits(acc as u128, self.0.m));
        }
        let base = &self.0.base;
        let mut out = vec![0u16; self.0.m];
        for (i, &c) in a.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &v) in out.iter_mut().zip(&self.0.frob_images[i].0) {
                *o = base.add(*o, base.mul(c, v));
            }
        }
        ExtElem(out)
    }

    /// a^{q^i}; exponents are taken modulo m.
    pub fn frobenius(&self, a: &ExtElem, i: usize) -> ExtElem {
        let mut out = a.clone();
        for _ in 0..i % self.0.m {
            out = self.frobenius1(&out);
        }
        out
    }

    /// Inverse Frobenius a^{q^{-i}} = a^{q^{m-i}}.
    pub fn frobenius_inv(&self, a: &ExtElem, i: usize) -> ExtElem {
        let m = self.0.m;
        self.frobenius(a, (m - i % m) % m)
    }

    /// Tr(a) = sum_{i<m} a^{q^i}, an element of F_q.
    pub fn trace(&self, a: &ExtElem) -> u16 {
        let mut acc = a.clone();
        let mut cur = a.clone();
        for _ in 1..self.0.m {
            cur = self.frobenius1(&cur);
            acc = self.add(&acc, &cur);
        }
        debug_assert!(acc.0[1..].iter().all(|&c| c == 0), "trace must lie in F_q");
        acc.0[0]
    }

    /// Enumerates all q^m elements (small fields only).
    pub fn elements(&self) -> impl Iterator<Item = ExtElem> + '_ {
        let q = self.q() as u64;
        let m = self.0.m;
        let total = q.checked_pow(m as u32).expect("field too large to enumerate");
        (0..total).map(move |mut idx| {
            let mut v = Vec::with_capacity(m);
            for _ in 0..m {
                v.push((idx % q) as u16);
                idx /= q;
            }
            ExtElem(v)
        })
    }
}

impl Field for ExtField {
    type Elem = ExtElem;

    fn zero(&self) -> ExtElem {
        ExtField::zero(self)
    }
    fn one(&self) -> ExtElem {
        ExtField::one(self)
    }
    fn is_zero(&self, a: &ExtElem) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtField::add(self, a, b)
    }
    fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtField::sub(self, a, b)
    }
    fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        ExtField::mul(self, a, b)
    }
    fn inv(&self, a: &ExtElem) -> Option<ExtElem> {
        ExtField::inv(self, a)
    }
    fn neg(&self, a: &ExtElem) -> ExtElem {
        ExtField::neg(self, a)
    }
}

fn pack_bits(c: &[u16]) -> u128 {
    c.iter().enumerate().fold(0u128, |acc, (i, &b)| acc | ((b as u128 & 1) << i))
}

fn unpack_bits(v: u128, m: usize) -> Vec<u16> {
    (0..m).map(|i| ((v >> i) & 1) as u16).collect()
}

#[inline]
fn clmul64(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let a = a as u128;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        let tz = b.trailing_zeros();
        shift += tz;
        acc ^= a << shift;
        b >>= tz;
        b &= !1;
    }
    acc
}

#[inline]
fn reduce_packed(mut v: u128, modulus: u128, m: usize) -> u128 {
    let top = 2 * m - 1;
    for d in (m..top).rev() {
        if (v >> d) & 1 == 1 {
            v ^= modulus << (d - m);
        }
    }
    v
}

/// An F_q-basis γ = (γ_1, …, γ_m) of F_{q^m}.
#[derive(Clone, Debug, PartialEq)]
pub struct Basis {
    ext: ExtField,
    elems: Vec<ExtElem>,
    /// Column i holds the power-basis coordinates of γ_i.
    to_power: MatFq,
    /// Inverse of `to_power`.
    from_power: MatFq,
}

impl Basis {
    /// Builds a basis, rejecting dependent families.
    pub fn new(ext: &ExtField, elems: Vec<ExtElem>) -> Result<Self> {
        let m = ext.degree();
        if elems.len() != m || !elems.iter().all(|e| ext.contains(e)) {
            return Err(Error::DimensionMismatch(format!("a basis needs {m} field elements")));
        }
        let mut to_power = MatFq::zeros(ext.base(), m, m);
        for (j, e) in elems.iter().enumerate() {
            for (i, &c) in e.coeffs().iter().enumerate() {
                to_power.set(i, j, c);
            }
        }
        let from_power = to_power.invert()?;
        Ok(Basis {
            ext: ext.clone(),
            elems,
            to_power,
            from_power,
        })
    }

    /// The power basis (1, y, …, y^{m-1}).
    pub fn power(ext: &ExtField) -> Self {
        let m = ext.degree();
        let elems = (0..m)
            .map(|i| {
                let mut v = vec![0u16; m];
                v[i] = 1;
                ExtElem(v)
            })
            .collect();
        Basis::new(ext, elems).expect("power basis is a basis")
    }

    /// Uniform random basis by rejection sampling of the change-of-basis matrix.
    pub fn random<R: Rng + ?Sized>(ext: &ExtField, rng: &mut R) -> Self {
        Self::random_counted(ext, rng).0
    }

    /// Like [`Basis::random`], also reporting how many matrices were sampled.
    pub fn random_counted<R: Rng + ?Sized>(ext: &ExtField, rng: &mut R) -> (Self, usize) {
        let m = ext.degree();
        let mut attempts = 0;
        loop {
            attempts += 1;
            let c = MatFq::random(ext.base(), m, m, rng);
            if let Ok(inv) = c.invert() {
                let elems = (0..m).map(|j| ExtElem(c.col(j))).collect();
                return (
                    Basis {
                        ext: ext.clone(),
                        elems,
                        to_power: c,
                        from_power: inv,
                    },
                    attempts,
                );
            }
        }
    }

    pub fn field(&self) -> &ExtField {
        &self.ext
    }

    pub fn elems(&self) -> &[ExtElem] {
        &self.elems
    }

    /// Change-of-basis matrix whose columns are the γ_i in the power basis.
    pub fn matrix(&self) -> &MatFq {
        &self.to_power
    }

    /// Coordinates of `x` in this basis (the γ-expansion).
    pub fn expand(&self, x: &ExtElem) -> Vec<u16> {
        self.from_power.mul_vec(x.coeffs())
    }

    /// Inverse of [`Basis::expand`].
    pub fn contract(&self, v: &[u16]) -> ExtElem {
        ExtElem(self.to_power.mul_vec(v))
    }

    /// The trace-dual basis γ' with Tr(γ_i γ'_j) = δ_ij.
    pub fn dual(&self) -> Self {
        let ext = &self.ext;
        let m = ext.degree();
        let power: Vec<ExtElem> = Basis::power(ext).elems;
        let mut gram = MatFq::zeros(ext.base(), m, m);
        for a in 0..m {
            for b in a..m {
                let t = ext.trace(&ext.mul(&power[a], &power[b]));
                gram.set(a, b, t);
                gram.set(b, a, t);
            }
        }
        // Need Cᵗ·T·D = I, so D = (Cᵗ·T)^{-1}.
        let d = self
            .to_power
            .transpose()
            .mul(&gram)
            .invert()
            .expect("trace form is non-degenerate");
        let elems = (0..m).map(|j| ExtElem(d.col(j))).collect();
        Basis::new(ext, elems).expect("dual family is a basis")
    }
}
