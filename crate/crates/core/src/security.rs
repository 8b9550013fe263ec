//! Attack-cost estimates (log2 of the operation count), Singleton-bound
//! quantities and the registry of named parameter sets.
//!
//! Support-minors conventions: the MinRank instance has K = km matrices of
//! size m' × n' (m' = m+ℓ1, n' = m+ℓ2). The estimate minimizes over the
//! number of kept columns n'' ∈ [r+1, n']; for each n'' it takes the
//! smallest admissible degree b (N_b > 0 and N_b ≥ M_b − 1) and costs
//! log2 N_b + (ω−1)·log2 M_b, with
//! M_b = C(n'', r)·C(K+b−1, b) and
//! N_b = Σ_{i=1}^{b} (−1)^{i+1} C(n'', r+i)·C(K+b−i−1, b−i)·C(m'+i−1, i).

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::egmc::EgmcParams;
use crate::error::{Error, Result};

/// Default linear-algebra exponent.
pub const OMEGA: f64 = 2.0;
/// Default search range for the support-minors degree b.
pub const B_RANGE: RangeInclusive<usize> = 1..=40;

fn log2_q(p: &EgmcParams) -> f64 {
    (p.q as f64).log2()
}

fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        let v: u64 = x.iter_u64_digits().next().unwrap_or(0);
        return (v as f64).log2();
    }
    let shift = bits - 64;
    let top: u64 = (x >> shift).iter_u64_digits().next().unwrap_or(0);
    (top as f64).log2() + shift as f64
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Gaussian binomial [n; k]_q.
pub fn gaussian_binomial(n: u64, k: u64, q: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let qb = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= qb.pow((n - i) as u32) - 1u32;
        den *= qb.pow((i + 1) as u32) - 1u32;
    }
    num / den
}

/// Õ exponent of recovering the F_{q^m}-linear structure: (mℓ1 + (k+1)ℓ2)·log2 q.
pub fn cost_structural(p: &EgmcParams) -> f64 {
    (p.m * p.l1 + (p.k + 1) * p.l2) as f64 * log2_q(p)
}

/// Kernel attack: ⌈r·⌈K/(m+ℓ1)⌉·log2 q + ω·log2 K⌉ with K = km, ω = 2.
pub fn cost_kernel(p: &EgmcParams) -> f64 {
    let kk = p.big_k();
    let rows = p.m + p.l1;
    (p.r as f64 * kk.div_ceil(rows) as f64 * log2_q(p) + OMEGA * (kk as f64).log2()).ceil()
}

/// One support-minors evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SupportMinorsCost {
    pub bits: f64,
    pub b: usize,
    /// Number of columns kept (n'').
    pub cols: usize,
}

/// (N_b, M_b) for `k` matrices of size `rows × cols`, target rank `r`.
/// N_b may be negative.
pub fn minors_counts(rows: usize, cols: usize, k: usize, r: usize, b: usize) -> (BigInt, BigUint) {
    let (rows, cols, k, r, b) = (rows as u64, cols as u64, k as u64, r as u64, b as u64);
    let mut nb = BigInt::zero();
    for i in 1..=b {
        let term = binomial(cols, r + i) * binomial(k + b - i - 1, b - i) * binomial(rows + i - 1, i);
        let term = BigInt::from_biguint(Sign::Plus, term);
        if i % 2 == 1 {
            nb += term;
        } else {
            nb -= term;
        }
    }
    (nb, binomial(cols, r) * binomial(k + b - 1, b))
}

/// Support-minors cost for a MinRank instance with `k` matrices of size
/// `rows × cols` and target rank `r`.
pub fn support_minors(
    rows: usize,
    cols: usize,
    k: usize,
    r: usize,
    omega: f64,
    b_range: RangeInclusive<usize>,
) -> Result<SupportMinorsCost> {
    if b_range.is_empty() || k == 0 {
        return Err(Error::NoAdmissibleDegree);
    }
    let b_max = *b_range.end();
    // C(K+j−1, j) for j = 0..=b_max.
    let mut kbin = vec![BigUint::one()];
    for j in 1..=b_max {
        let prev = kbin[j - 1].clone();
        kbin.push(prev * (k + j - 1) / j);
    }
    let mbin: Vec<BigUint> = (0..=b_max).map(|i| binomial((rows + i).saturating_sub(1) as u64, i as u64)).collect();
    let mut best: Option<SupportMinorsCost> = None;
    for n2 in r + 1..=cols {
        let nbin: Vec<BigUint> = (0..=b_max).map(|i| binomial(n2 as u64, (r + i) as u64)).collect();
        for b in b_range.clone() {
            let mut nb = BigInt::zero();
            for i in 1..=b {
                let term = BigInt::from_biguint(Sign::Plus, &nbin[i] * &kbin[b - i] * &mbin[i]);
                if i % 2 == 1 {
                    nb += term;
                } else {
                    nb -= term;
                }
            }
            let mb = &nbin[0] * &kbin[b];
            let Some(nb) = nb.to_biguint().filter(|v| !v.is_zero()) else {
                continue;
            };
            if nb < mb.clone() - 1u32 {
                continue;
            }
            let bits = log2_big(&nb) + (omega - 1.0) * log2_big(&mb);
            if best.is_none_or(|c| bits < c.bits) {
                best = Some(SupportMinorsCost { bits, b, cols: n2 });
            }
            break;
        }
    }
    best.ok_or(Error::NoAdmissibleDegree)
}

/// Support-minors cost of the message-recovery MinRank instance.
pub fn cost_support_minors(p: &EgmcParams, omega: f64, b_range: RangeInclusive<usize>) -> Result<SupportMinorsCost> {
    support_minors(p.m + p.l1, p.m + p.l2, p.big_k(), p.r, omega, b_range)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HybridCost {
    pub bits: f64,
    pub a: usize,
    pub inner: SupportMinorsCost,
}

/// min over a ≥ 0 of a·r·log2 q + SM(m', n'−a, K−a·m', r); `a_max` caps a.
pub fn cost_hybrid_capped(
    p: &EgmcParams,
    omega: f64,
    b_range: RangeInclusive<usize>,
    a_max: Option<usize>,
) -> Result<HybridCost> {
    let (rows, cols, kk) = (p.m + p.l1, p.m + p.l2, p.big_k());
    let mut best: Option<HybridCost> = None;
    for a in 0..cols {
        if a_max.is_some_and(|cap| a > cap) || a * rows >= kk {
            break;
        }
        let Ok(sm) = support_minors(rows, cols - a, kk - a * rows, p.r, omega, b_range.clone()) else {
            continue;
        };
        let bits = (a * p.r) as f64 * log2_q(p) + sm.bits;
        if best.is_none_or(|c| bits < c.bits) {
            best = Some(HybridCost { bits, a, inner: sm });
        }
    }
    best.ok_or(Error::NoAdmissibleDegree)
}

pub fn cost_hybrid(p: &EgmcParams, omega: f64, b_range: RangeInclusive<usize>) -> Result<HybridCost> {
    cost_hybrid_capped(p, omega, b_range, None)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MrdQuantities {
    /// Singleton-type bound d0 = m − k + 1 + ℓ2 + ⌊kℓ1/(m+ℓ1)⌋.
    pub d0: usize,
    /// log2 of the lower bound on the expected number of rank d0−1 codewords.
    pub log2_n_lower: f64,
    /// Exponent of the approximation q^{m+(m−k−ℓ1)(k−1)−1}.
    pub approx_exponent: i64,
    /// The bound is the adapted one (ℓ2 = 0), valid when kℓ1 ≥ m+ℓ1.
    pub adapted: bool,
}

pub fn mrd_quantities(p: &EgmcParams) -> MrdQuantities {
    let (m, k, l1, l2) = (p.m as i64, p.k as i64, p.l1 as i64, p.l2 as i64);
    let d0 = (m - k + 1 + l2 + (k * l1) / (m + l1)) as usize;
    let q = p.q as u64;
    let gb = gaussian_binomial(p.m as u64, (p.m - p.k + 1) as u64, q);
    let qm1 = BigUint::from(q).pow(p.m as u32) - 1u32;
    let log2_n_lower = log2_big(&gb) + log2_big(&qm1) + ((l1 + 1) * (1 - k) - 1) as f64 * log2_q(p);
    MrdQuantities {
        d0,
        log2_n_lower,
        approx_exponent: m + (m - k - l1) * (k - 1) - 1,
        adapted: p.l2 == 0,
    }
}

/// Largest b with b < k + 1 − (n/m)ℓ1 − ℓ2 − ℓ1ℓ2/m, or `None` when no
/// positive b qualifies (the dual distinguisher does not apply).
pub fn dual_attack_threshold(p: &EgmcParams) -> Option<usize> {
    let (m, n, k, l1, l2) = (p.m as i64, p.n as i64, p.k as i64, p.l1 as i64, p.l2 as i64);
    // b < num/m.
    let num = (k + 1 - l2) * m - n * l1 - l1 * l2;
    let b = (num - 1).div_euclid(m);
    (b >= 1).then_some(b as usize)
}

/// All estimator outputs for one parameter set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AttackCostReport {
    pub structural_bits: f64,
    pub kernel_bits: f64,
    pub support_minors_bits: f64,
    pub hybrid_bits: f64,
    pub b_opt: usize,
    pub sm_cols: usize,
    pub a_opt: usize,
    pub hybrid_b: usize,
    pub hybrid_cols: usize,
}

pub fn estimate(p: &EgmcParams) -> Result<AttackCostReport> {
    let sm = cost_support_minors(p, OMEGA, B_RANGE)?;
    let hy = cost_hybrid(p, OMEGA, B_RANGE)?;
    Ok(AttackCostReport {
        structural_bits: cost_structural(p),
        kernel_bits: cost_kernel(p),
        support_minors_bits: sm.bits,
        hybrid_bits: hy.bits,
        b_opt: sm.b,
        sm_cols: sm.cols,
        a_opt: hy.a,
        hybrid_b: hy.inner.b,
        hybrid_cols: hy.inner.cols,
    })
}

/// Niederreiter public-key size in bits: km·(N − km)·log2 q.
pub fn pk_bits(p: &EgmcParams) -> f64 {
    let (kk, nn) = (p.big_k(), p.big_n());
    (kk * (nn - kk)) as f64 * log2_q(p)
}

/// Niederreiter ciphertext size in bits: (N − km)·log2 q.
pub fn ct_bits(p: &EgmcParams) -> f64 {
    (p.big_n() - p.big_k()) as f64 * log2_q(p)
}

/// Serialized payload bytes: ⌈log2 q⌉ bits per element, rounded up.
pub fn pk_payload_bytes(p: &EgmcParams) -> usize {
    let (kk, nn) = (p.big_k(), p.big_n());
    (kk * (nn - kk) * bits_per_elem(p.q)).div_ceil(8)
}

pub fn ct_payload_bytes(p: &EgmcParams) -> usize {
    ((p.big_n() - p.big_k()) * bits_per_elem(p.q)).div_ceil(8)
}

fn bits_per_elem(q: u32) -> usize {
    (32 - (q - 1).leading_zeros()) as usize
}

/// Which published table a set comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Table {
    /// ℓ1 = ℓ2 over F_2.
    Main,
    /// ℓ1 = 0, ℓ2 = 0 or q > 2.
    Alternative,
}

/// Published columns of a parameter set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Claimed {
    pub alg: u32,
    pub hyb: u32,
    pub comb: u32,
    pub struc: u32,
    pub pk_kb: u32,
    pub ct_b: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ParameterSet {
    pub name: &'static str,
    pub security: u32,
    pub table: Table,
    pub params: EgmcParams,
    pub claimed: Claimed,
}

const fn set(
    name: &'static str,
    security: u32,
    table: Table,
    [q, k, m, l1, l2, r]: [usize; 6],
    [alg, hyb, comb, struc, pk_kb, ct_b]: [u32; 6],
) -> ParameterSet {
    ParameterSet {
        name,
        security,
        table,
        params: EgmcParams {
            q: q as u32,
            m,
            n: m,
            k,
            l1,
            l2,
            r,
        },
        claimed: Claimed {
            alg,
            hyb,
            comb,
            struc,
            pk_kb,
            ct_b,
        },
    }
}

use Table::{Alternative as Alt, Main};

/// Columns: q, k, m, ℓ1, ℓ2, r | Alg., Hyb., Comb., Struc., pk (kB), ct (B).
static REGISTRY: [ParameterSet; 16] = [
    set("egmc128a", 128, Main, [2, 35, 43, 2, 2, 4], [158, 145, 158, 158, 98, 65]),
    set("egmc128b", 128, Main, [2, 17, 37, 3, 3, 10], [193, 170, 179, 165, 76, 121]),
    set("egmc128c", 128, Main, [2, 25, 37, 3, 3, 6], [168, 150, 164, 189, 78, 84]),
    set("egmc128d", 128, Main, [2, 47, 53, 2, 2, 3], [158, 147, 161, 202, 166, 66]),
    set("egmc192a", 192, Main, [2, 51, 59, 2, 2, 4], [222, 209, 224, 222, 268, 89]),
    set("egmc256a", 256, Main, [2, 23, 47, 3, 3, 12], [302, 271, 285, 284, 191, 177]),
    set("egmc256b", 256, Main, [2, 37, 53, 3, 2, 8], [315, 290, 310, 273, 274, 139]),
    set("egmc256c", 256, Main, [2, 71, 79, 2, 2, 4], [303, 289, 305, 302, 667, 119]),
    set("egmc128e", 128, Alt, [2, 17, 37, 4, 0, 10], [181, 168, 179, 148, 70, 111]),
    set("egmc128f", 128, Alt, [16, 13, 23, 1, 1, 5], [236, 273, 282, 148, 41, 138]),
    set("egmc128g", 128, Alt, [16, 7, 23, 0, 5, 8], [172, 262, 276, 160, 33, 207]),
    set("egmc192b", 192, Alt, [2, 23, 43, 5, 0, 10], [239, 220, 230, 215, 133, 134]),
    set("egmc192c", 192, Alt, [2, 33, 47, 5, 0, 7], [238, 221, 232, 235, 173, 111]),
    set("egmc192d", 192, Alt, [2, 41, 53, 4, 0, 6], [258, 240, 257, 212, 230, 106]),
    set("egmc256d", 256, Alt, [16, 9, 29, 2, 1, 10], [310, 373, 382, 272, 87, 334]),
    set("egmc256e", 256, Alt, [16, 17, 29, 2, 1, 8], [357, 399, 408, 304, 107, 218]),
];

pub fn registry() -> &'static [ParameterSet] {
    &REGISTRY
}

pub fn find_set(name: &str) -> Result<&'static ParameterSet> {
    REGISTRY
        .iter()
        .find(|s| s.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownParameterSet(name.to_string()))
}

/// A registry row with recomputed columns.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegistryRow {
    pub set: ParameterSet,
    pub report: AttackCostReport,
    pub pk_bytes: usize,
    pub ct_bytes: usize,
}

pub fn recompute(set: &ParameterSet) -> Result<RegistryRow> {
    Ok(RegistryRow {
        set: *set,
        report: estimate(&set.params)?,
        pk_bytes: pk_payload_bytes(&set.params),
        ct_bytes: ct_payload_bytes(&set.params),
    })
}

pub fn recompute_all() -> Result<Vec<RegistryRow>> {
    REGISTRY.iter().map(recompute).collect()
}

/// Whether a printed size matches `x` under floor or nearest rounding.
pub fn matches_printed(x: f64, printed: u32) -> bool {
    x.floor() as u32 == printed || x.round() as u32 == printed
}

pub const CSV_HEADER: &str = "name,q,k,m,l1,l2,r,Alg,Hyb,Comb,Struc,pk_bytes,ct_bytes";

pub fn table_csv(rows: &[RegistryRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let (p, c) = (&row.set.params, &row.report);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{:.1},{:.1},{:.0},{:.0},{},{}",
            row.set.name,
            p.q,
            p.k,
            p.m,
            p.l1,
            p.l2,
            p.r,
            c.support_minors_bits,
            c.hybrid_bits,
            c.kernel_bits,
            c.structural_bits,
            row.pk_bytes,
            row.ct_bytes
        );
    }
    out
}

pub fn table_text(rows: &[RegistryRow]) -> String {
    let mut out = format!(
        "{:<9} {:>3} {:>3} {:>3} {:>3} {:>3} {:>3} {:>7} {:>7} {:>5} {:>5} {:>9} {:>6}\n",
        "name", "q", "k", "m", "l1", "l2", "r", "Alg", "Hyb", "Comb", "Struc", "pk_bytes", "ct_B"
    );
    for row in rows {
        let (p, c) = (&row.set.params, &row.report);
        let _ = writeln!(
            out,
            "{:<9} {:>3} {:>3} {:>3} {:>3} {:>3} {:>3} {:>7.1} {:>7.1} {:>5.0} {:>5.0} {:>9} {:>6}",
            row.set.name,
            p.q,
            p.k,
            p.m,
            p.l1,
            p.l2,
            p.r,
            c.support_minors_bits,
            c.hybrid_bits,
            c.kernel_bits,
            c.structural_bits,
            row.pk_bytes,
            row.ct_bytes
        );
    }
    out
}
