//! One PASS/FAIL line per acceptance criterion, written straight to stderr so
//! the lines show up without `--nocapture`. The test fails if any criterion
//! fails.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use egmc::egmc::{dual_structure_check, sample_egmc};
use egmc::matrixcode::{
    dual_code, expand_code, frobenius_sum, left_stabilizer, overbeck_codim_check, psi, right_stabilizer,
};
use egmc::pke::{keygen, mce_decrypt, mce_encrypt, mce_encrypt_with_error, nied_decrypt, nied_encrypt_random};
use egmc::security::{
    cost_hybrid, cost_kernel, cost_structural, cost_support_minors, ct_bits, ct_payload_bytes, find_set,
    matches_printed, pk_bits, pk_payload_bytes, registry, B_RANGE, OMEGA,
};
use egmc::{
    wrank, BaseField, Basis, Ciphertext, EgmcParams, ExtElem, ExtField, GabidulinCode, MatExt, MatFq,
    MatrixCodeBasis,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ext(q: u32, m: usize) -> ExtField {
    ExtField::new(BaseField::new(q).unwrap(), m).unwrap()
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    if t > limit {
        return Err(format!("{what} took {t:.2?} (limit {limit:?})"));
    }
    Ok(())
}

fn failures(list: Vec<String>) -> Result<(), String> {
    if list.is_empty() {
        Ok(())
    } else {
        Err(list.join("; "))
    }
}

fn c1_sizes() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for s in registry() {
        let p = &s.params;
        let (kk, nn) = (p.big_k() as f64, p.big_n() as f64);
        let lq = (p.q as f64).log2();
        if pk_bits(p) != kk * (nn - kk) * lq || ct_bits(p) != (nn - kk) * lq {
            bad.push(format!("{}: bit formula", s.name));
        }
        if pk_payload_bytes(p) != (pk_bits(p) / 8.0).ceil() as usize
            || ct_payload_bytes(p) != (ct_bits(p) / 8.0).ceil() as usize
        {
            bad.push(format!("{}: payload bytes", s.name));
        }
        let pk_kb = pk_bits(p) / 8000.0;
        let ct_b = ct_bits(p) / 8.0;
        if !matches_printed(pk_kb, s.claimed.pk_kb) || !matches_printed(ct_b, s.claimed.ct_b) {
            bad.push(format!(
                "{}: {pk_kb:.3} kB & {ct_b:.3} B vs printed {} kB & {} B",
                s.name, s.claimed.pk_kb, s.claimed.ct_b
            ));
        }
    }
    within(start, Duration::from_secs(1), "size table")?;
    failures(bad)?;
    Ok(format!("{} rows", registry().len()))
}

fn c2_structural() -> Outcome {
    let start = Instant::now();
    let bad: Vec<String> = registry()
        .iter()
        .filter(|s| cost_structural(&s.params) != s.claimed.struc as f64)
        .map(|s| format!("{}: {} vs printed {}", s.name, cost_structural(&s.params), s.claimed.struc))
        .collect();
    within(start, Duration::from_secs(1), "structural column")?;
    failures(bad)?;
    Ok("all rows exact".into())
}

fn c3_kernel() -> Outcome {
    let mut bad = Vec::new();
    for (name, anchor) in [("egmc128b", 179.0), ("egmc128c", 164.0), ("egmc128a", 158.0)] {
        let got = cost_kernel(&find_set(name).unwrap().params);
        if got != anchor {
            bad.push(format!("anchor {name}: {got} vs {anchor}"));
        }
    }
    for s in registry() {
        let got = cost_kernel(&s.params);
        if (got - s.claimed.comb as f64).abs() > 1.0 {
            bad.push(format!("{}: {got} vs printed {}", s.name, s.claimed.comb));
        }
    }
    failures(bad)?;
    Ok("anchors exact, all rows within 1 bit".into())
}

fn c4_hybrid_algebraic() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    for s in registry() {
        let p = &s.params;
        let sm = cost_support_minors(p, OMEGA, B_RANGE).map_err(|e| format!("{}: {e}", s.name))?;
        let hy = cost_hybrid(p, OMEGA, B_RANGE).map_err(|e| format!("{}: {e}", s.name))?;
        let (da, dh) = (sm.bits - s.claimed.alg as f64, hy.bits - s.claimed.hyb as f64);
        worst = worst.max(da.abs()).max(dh.abs());
        if da.abs() > 8.0 {
            bad.push(format!("{} Alg {:.1} vs {}", s.name, sm.bits, s.claimed.alg));
        }
        if dh.abs() > 8.0 {
            bad.push(format!("{} Hyb {:.1} vs {}", s.name, hy.bits, s.claimed.hyb));
        }
    }
    within(start, Duration::from_secs(30), "estimators")?;
    failures(bad)?;
    Ok(format!("max deviation {worst:.1} bits"))
}

fn c5_full_roundtrip() -> Outcome {
    let params = find_set("egmc128a").unwrap().params;
    let mut slowest = Duration::ZERO;
    for i in 0..10u8 {
        let start = Instant::now();
        let mut seed = [0u8; 32];
        seed[0] = i;
        seed[31] = 0xa5;
        let kp = keygen(&params, seed).map_err(|e| e.to_string())?;
        let mut rng = ChaCha20Rng::seed_from_u64(i as u64);
        let (mu, ct) = nied_encrypt_random(&kp.pk_nied, &mut rng).map_err(|e| e.to_string())?;
        let f = kp.pk_nied.t.field().clone();
        let payload = ct.payload(&f).len();
        if payload != 65 {
            return Err(format!("seed {i}: payload {payload} B"));
        }
        let back = Ciphertext::from_bytes(&params, &ct.to_bytes(&f)).map_err(|e| e.to_string())?;
        let got = nied_decrypt(&kp.sk, &kp.pk_nied, &back).map_err(|e| format!("seed {i}: {e}"))?;
        if got != mu {
            return Err(format!("seed {i}: wrong plaintext"));
        }
        slowest = slowest.max(start.elapsed());
        within(start, Duration::from_secs(60), "one cycle")?;
    }
    Ok(format!("10 seeds, slowest cycle {slowest:.2?}, ct payload 65 B"))
}

fn random_rank_vec<R: Rng>(f: &ExtField, n: usize, r: usize, rng: &mut R) -> Vec<ExtElem> {
    let m = MatFq::random_rank(f.base(), f.degree(), n, r, rng).unwrap();
    (0..n).map(|j| f.elem(m.col(j)).unwrap()).collect()
}

fn add(f: &ExtField, a: &[ExtElem], b: &[ExtElem]) -> Vec<ExtElem> {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

fn all_pairs(f: &ExtField) -> Vec<Vec<ExtElem>> {
    let e: Vec<ExtElem> = f.elements().collect();
    e.iter().flat_map(|a| e.iter().map(move |b| vec![a.clone(), b.clone()])).collect()
}

fn c6_decoder() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(6);
    let f = ext(2, 12);
    let code = GabidulinCode::random(&f, 12, 4, &mut rng).unwrap();
    for trial in 0..500 {
        let msg: Vec<ExtElem> = (0..4).map(|_| f.random(&mut rng)).collect();
        let e = random_rank_vec(&f, 12, rng.gen_range(0..=4), &mut rng);
        let y = add(&f, &code.encode(&msg).unwrap(), &e);
        match code.decode(&y) {
            Ok(d) if d.message == msg && d.error == e => {}
            _ => return Err(format!("planted trial {trial} not recovered")),
        }
    }
    let f4 = ext(2, 4);
    let small = GabidulinCode::random(&f4, 4, 2, &mut rng).unwrap();
    let words: Vec<(Vec<ExtElem>, Vec<ExtElem>)> =
        all_pairs(&f4).into_iter().map(|m| (small.encode(&m).unwrap(), m)).collect();
    let dmin = words.iter().filter(|(w, _)| w.iter().any(|x| !x.is_zero())).map(|(w, _)| wrank(&f4, w)).min();
    if dmin != Some(3) {
        return Err(format!("minimum distance {dmin:?}, expected 3"));
    }
    for trial in 0..50 {
        let y: Vec<ExtElem> = (0..4).map(|_| f4.random(&mut rng)).collect();
        let (dist, best) = words
            .iter()
            .map(|(w, m)| (wrank(&f4, &add(&f4, &y, w)), m))
            .min_by_key(|x| x.0)
            .unwrap();
        let ok = match small.decode(&y) {
            Ok(d) => dist <= 1 && &d.message == best,
            Err(_) => dist > 1,
        };
        if !ok {
            return Err(format!("nearest-codeword trial {trial} disagrees"));
        }
    }
    within(start, Duration::from_secs(60), "decoder suite")?;
    Ok("500/500 planted, d = 3, 50/50 brute-force".into())
}

fn toy() -> EgmcParams {
    EgmcParams::new(2, 6, 2, 1, 1, 2).unwrap()
}

fn c7_distinguishers() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    for (m, k) in [(4, 2), (6, 2), (6, 3)] {
        let f = ext(2, m);
        for _ in 0..10 {
            let code = GabidulinCode::random(&f, m, k, &mut rng).unwrap();
            let c = expand_code(&Basis::random(&f, &mut rng), &code.generator()).unwrap();
            let (l, r) = (left_stabilizer(&c).dim, right_stabilizer(&c).dim);
            if l < m || r < m {
                return Err(format!("Ψ(Gab) at m={m}, k={k}: stabilizer dims {l}, {r}"));
            }
        }
    }
    let (mut masked, mut random) = (0, 0);
    for _ in 0..20 {
        let (pk, _) = sample_egmc(&toy(), &mut rng).unwrap();
        if left_stabilizer(&pk.code).dim == 1 && right_stabilizer(&pk.code).dim == 1 {
            masked += 1;
        }
        let rc = MatrixCodeBasis::random(pk.code.field(), 7, 7, 12, &mut rng).unwrap();
        if left_stabilizer(&rc).dim == 1 && right_stabilizer(&rc).dim == 1 {
            random += 1;
        }
    }
    if masked < 18 || random < 18 {
        return Err(format!("trivial stabilizers: masked {masked}/20, random {random}/20"));
    }
    let f = ext(2, 8);
    let (n, k) = (8, 2);
    let mut rand_ok = 0;
    for _ in 0..20 {
        let g = GabidulinCode::random(&f, n, k, &mut rng).unwrap().generator();
        for fr in 0..=6 {
            if frobenius_sum(&g, fr) != n.min(k + fr) {
                return Err(format!("Gabidulin Λ_{fr} has dim {}", frobenius_sum(&g, fr)));
            }
        }
        let r: MatExt = MatExt::random(&f, k, n, &mut rng);
        if (0..=4).all(|fr| frobenius_sum(&r, fr) == n.min(k * (fr + 1))) {
            rand_ok += 1;
        }
    }
    if rand_ok < 18 {
        return Err(format!("random Frobenius sums generic in {rand_ok}/20"));
    }
    within(start, Duration::from_secs(120), "distinguisher suite")?;
    Ok(format!("masked {masked}/20, random {random}/20, random Λ_f generic {rand_ok}/20"))
}

fn c8_structure() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    for (m, k) in [(4, 2), (6, 2), (6, 4)] {
        let f = ext(2, m);
        for _ in 0..5 {
            let code = GabidulinCode::random(&f, m, k, &mut rng).unwrap();
            let gamma = Basis::random(&f, &mut rng);
            let c = expand_code(&gamma, &code.generator()).unwrap();
            let d = expand_code(&gamma.dual(), &code.dual().unwrap().generator()).unwrap();
            if !dual_code(&c).same_code(&d) {
                return Err(format!("dual identity fails at m={m}, k={k}"));
            }
        }
    }
    for _ in 0..20 {
        let (pk, sk) = sample_egmc(&toy(), &mut rng).unwrap();
        let s = dual_structure_check(&pk, &sk).map_err(|e| e.to_string())?;
        if !s.holds() {
            return Err(format!("dual decomposition: {s:?}"));
        }
    }
    let f = ext(2, 6);
    for pair in 0..50 {
        let gamma = Basis::random(&f, &mut rng);
        let code = GabidulinCode::random(&f, 6, 2, &mut rng).unwrap();
        let target = expand_code(&gamma, &GabidulinCode::new(&f, 3, code.points().to_vec()).unwrap().generator())
            .unwrap();
        let left = GabidulinCode::new(&f, 2, gamma.elems().to_vec()).unwrap();
        let msg = |rng: &mut ChaCha20Rng| -> Vec<ExtElem> { (0..2).map(|_| f.random(rng)).collect() };
        let mm = psi(&gamma, &left.encode(&msg(&mut rng)).unwrap());
        let cm = psi(&gamma, &code.encode(&msg(&mut rng)).unwrap());
        if !target.contains(&mm.mul(&cm)) {
            return Err(format!("product membership fails for pair {pair}"));
        }
    }
    let mut fills = 0;
    for _ in 0..20 {
        let (pk, sk) = sample_egmc(&toy(), &mut rng).unwrap();
        if !overbeck_codim_check(&pk.code, &sk).map_err(|e| e.to_string())? {
            return Err("codimension < m for a masked code".into());
        }
        let rc = MatrixCodeBasis::random(pk.code.field(), 7, 7, 12, &mut rng).unwrap();
        if !overbeck_codim_check(&rc, &sk).map_err(|e| e.to_string())? {
            fills += 1;
        }
    }
    if fills < 18 {
        return Err(format!("random control fills the ambient space in {fills}/20"));
    }
    within(start, Duration::from_secs(120), "structural suite")?;
    Ok(format!("all identities hold, random control fills {fills}/20"))
}

fn c9_tamper() -> Outcome {
    let params = EgmcParams::new(2, 16, 4, 1, 1, 2).unwrap();
    let beyond = params.r + params.t() + 1;
    let kp = keygen(&params, [9; 32]).map_err(|e| e.to_string())?;
    let f = kp.pk_mce.code.field().clone();
    let (rows, cols) = (params.rows(), params.cols());
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    let mut rejected = [0usize; 4];
    for _ in 0..50 {
        let mu: Vec<u16> = (0..params.big_k()).map(|_| rng.gen_range(0..2)).collect();
        let mut bytes = mce_encrypt(&kp.pk_mce, &mu, &mut rng).unwrap().to_bytes(&f);
        let bit = rng.gen_range(0..params.big_n());
        bytes[5 + bit / 8] ^= 1 << (bit % 8);
        let ct = Ciphertext::from_bytes(&params, &bytes).unwrap();
        rejected[0] += mce_decrypt(&kp.sk, &kp.pk_mce, &ct).is_err() as usize;

        let (_, nct) = nied_encrypt_random(&kp.pk_nied, &mut rng).unwrap();
        let mut bytes = nct.to_bytes(&f);
        let bit = rng.gen_range(0..params.big_n() - params.big_k());
        bytes[5 + bit / 8] ^= 1 << (bit % 8);
        let ct = Ciphertext::from_bytes(&params, &bytes).unwrap();
        rejected[1] += nied_decrypt(&kp.sk, &kp.pk_nied, &ct).is_err() as usize;

        let e = MatFq::random_rank(&f, rows, cols, beyond, &mut rng).unwrap();
        let ct = mce_encrypt_with_error(&kp.pk_mce, &mu, &e).unwrap();
        rejected[2] += mce_decrypt(&kp.sk, &kp.pk_mce, &ct).is_err() as usize;

        let heavy = MatFq::random_rank(&f, rows, cols, beyond, &mut rng).unwrap().unfold();
        let ct = Ciphertext::Niederreiter(kp.pk_nied.syndrome(&heavy).unwrap());
        rejected[3] += nied_decrypt(&kp.sk, &kp.pk_nied, &ct).is_err() as usize;
    }
    let summary = format!(
        "bit flips {}/50 + {}/50, rank-{beyond} errors {}/50 + {}/50 rejected",
        rejected[0], rejected[1], rejected[2], rejected[3]
    );
    if rejected.iter().all(|&r| r == 50) {
        Ok(summary)
    } else {
        Err(summary)
    }
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("size reproduction", c1_sizes),
        ("structural-cost column", c2_structural),
        ("kernel-cost column", c3_kernel),
        ("hybrid/algebraic columns", c4_hybrid_algebraic),
        ("full-parameter roundtrip", c5_full_roundtrip),
        ("decoder suite", c6_decoder),
        ("distinguisher suite", c7_distinguishers),
        ("structural-identity suite", c8_structure),
        ("tamper rejection", c9_tamper),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr().lock();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        let line = match &outcome {
            Ok(detail) => format!("PASS {} {name} ({t:.2?}): {detail}", i + 1),
            Err(detail) => {
                failed.push(i + 1);
                format!("FAIL {} {name} ({t:.2?}): {detail}", i + 1)
            }
        };
        writeln!(err, "{line}").unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
