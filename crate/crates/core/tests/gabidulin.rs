use std::collections::HashSet;

use egmc::gabidulin::expansion;
use egmc::{wrank, BaseField, Error, ExtElem, ExtField, GabidulinCode, MatFq, QPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn ext(m: usize) -> ExtField {
    ExtField::new(BaseField::new(2).unwrap(), m).unwrap()
}

/// Vector whose power-basis expansion is a random m×n matrix of rank `r`.
fn random_error<R: Rng>(f: &ExtField, n: usize, r: usize, rng: &mut R) -> Vec<ExtElem> {
    let mat = MatFq::random_rank(f.base(), f.degree(), n, r, rng).unwrap();
    (0..n).map(|j| f.elem(mat.col(j)).unwrap()).collect()
}

fn add(f: &ExtField, a: &[ExtElem], b: &[ExtElem]) -> Vec<ExtElem> {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

fn sub(f: &ExtField, a: &[ExtElem], b: &[ExtElem]) -> Vec<ExtElem> {
    a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
}

fn all_messages(f: &ExtField, k: usize) -> Vec<Vec<ExtElem>> {
    let elems: Vec<ExtElem> = f.elements().collect();
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|m| {
                elems.iter().map(move |e| {
                    let mut m2 = m.clone();
                    m2.push(e.clone());
                    m2
                })
            })
            .collect();
    }
    out
}

#[test]
fn construction_checks() {
    let f = ext(4);
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let a = f.random(&mut rng);
    assert!(matches!(GabidulinCode::new(&f, 1, vec![a.clone(), a.clone()]), Err(Error::InvalidParams(_))));
    assert!(GabidulinCode::random(&f, 5, 2, &mut rng).is_err());
    assert!(GabidulinCode::random(&f, 3, 4, &mut rng).is_err());
    let c = GabidulinCode::random(&f, 4, 2, &mut rng).unwrap();
    assert_eq!(wrank(&f, c.points()), 4);
    assert_eq!(c.t(), 1);
}

#[test]
fn generator_rows() {
    let f = ext(6);
    let mut rng = ChaCha20Rng::seed_from_u64(2);
    let c = GabidulinCode::random(&f, 6, 1, &mut rng).unwrap();
    assert_eq!(c.generator().row(0), c.points());
    let c = GabidulinCode::random(&f, 6, 4, &mut rng).unwrap();
    let g = c.generator();
    assert_eq!(g.rank(), 4);
    for i in 0..4 {
        let xi = QPoly::monomial(&f, f.one(), i);
        let expected: Vec<ExtElem> = c.points().iter().map(|x| xi.eval(x)).collect();
        assert_eq!(g.row(i), expected.as_slice());
    }
}

#[test]
fn generator_span_matches_evaluation_exhaustively() {
    let f = ext(6);
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let c = GabidulinCode::random(&f, 6, 3, &mut rng).unwrap();
    let g = c.generator();
    let mut seen = HashSet::new();
    for msg in all_messages(&f, 3) {
        let mut via_gen = vec![f.zero(); 6];
        for (i, mi) in msg.iter().enumerate() {
            for (j, slot) in via_gen.iter_mut().enumerate() {
                *slot = f.add(slot, &f.mul(mi, g.get(i, j)));
            }
        }
        let p = QPoly::from_coeffs(&f, msg.clone());
        let via_poly: Vec<ExtElem> = c.points().iter().map(|x| p.eval(x)).collect();
        assert_eq!(via_gen, via_poly);
        assert_eq!(c.encode(&msg).unwrap(), via_poly);
        seen.insert(via_poly.iter().map(|e| e.coeffs().to_vec()).collect::<Vec<_>>());
    }
    assert_eq!(seen.len(), 1 << 18);
}

#[test]
fn encode_basics() {
    let f = ext(8);
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    let c = GabidulinCode::random(&f, 8, 3, &mut rng).unwrap();
    assert!(c.encode(&[f.zero(), f.zero(), f.zero()]).unwrap().iter().all(|x| x.is_zero()));
    assert_eq!(c.encode(&[f.one(), f.zero(), f.zero()]).unwrap(), c.points());
    assert!(c.encode(&[f.one()]).is_err());
    for _ in 0..100 {
        let msg: Vec<ExtElem> = (0..3).map(|_| f.random(&mut rng)).collect();
        let d = c.decode(&c.encode(&msg).unwrap()).unwrap();
        assert_eq!(d.message, msg);
        assert!(d.error.iter().all(|x| x.is_zero()));
    }
}

#[test]
fn decode_planted_errors() {
    let f = ext(12);
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let c = GabidulinCode::random(&f, 12, 4, &mut rng).unwrap();
    assert_eq!(c.t(), 4);
    for trial in 0..200 {
        let msg: Vec<ExtElem> = (0..4).map(|_| f.random(&mut rng)).collect();
        let r = if trial < 150 { 4 } else { trial % 4 };
        let e = random_error(&f, 12, r, &mut rng);
        assert_eq!(wrank(&f, &e), r);
        let y = add(&f, &c.encode(&msg).unwrap(), &e);
        let d = c.decode(&y).unwrap();
        assert_eq!(d.message, msg);
        assert_eq!(d.error, e);
        assert_eq!(add(&f, &d.codeword, &d.error), y);
    }
}

#[test]
fn decode_rejects_beyond_radius_or_stays_within_it() {
    let f = ext(6);
    let mut rng = ChaCha20Rng::seed_from_u64(6);
    let c = GabidulinCode::random(&f, 6, 2, &mut rng).unwrap();
    let mut failures = 0;
    for _ in 0..300 {
        let y: Vec<ExtElem> = (0..6).map(|_| f.random(&mut rng)).collect();
        match c.decode(&y) {
            Ok(d) => {
                assert_eq!(c.encode(&d.message).unwrap(), d.codeword);
                assert!(wrank(&f, &sub(&f, &y, &d.codeword)) <= c.t());
            }
            Err(Error::Decode { radius }) => {
                assert_eq!(radius, 2);
                failures += 1;
            }
            Err(e) => panic!("unexpected {e}"),
        }
    }
    assert!(failures > 0);
}

#[test]
fn decode_agrees_with_brute_force() {
    let f = ext(4);
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let c = GabidulinCode::random(&f, 4, 2, &mut rng).unwrap();
    let words: Vec<(Vec<ExtElem>, Vec<ExtElem>)> =
        all_messages(&f, 2).into_iter().map(|m| (c.encode(&m).unwrap(), m)).collect();
    let mut decoded = 0;
    for trial in 0..50 {
        let y: Vec<ExtElem> = if trial % 2 == 0 {
            (0..4).map(|_| f.random(&mut rng)).collect()
        } else {
            let w = &words[rng.gen_range(0..words.len())].0;
            add(&f, w, &random_error(&f, 4, 1, &mut rng))
        };
        let mut best: Vec<(usize, &Vec<ExtElem>)> = words
            .iter()
            .map(|(w, m)| (wrank(&f, &sub(&f, &y, w)), m))
            .collect();
        best.sort_by_key(|b| b.0);
        match c.decode(&y) {
            Ok(d) => {
                assert!(best[0].0 <= c.t());
                assert_eq!(&d.message, best[0].1);
                decoded += 1;
            }
            Err(_) => assert!(best[0].0 > c.t()),
        }
    }
    assert!(decoded >= 25);
}

#[test]
fn minimum_distance_exhaustive() {
    let f = ext(4);
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    for _ in 0..3 {
        let c = GabidulinCode::random(&f, 4, 2, &mut rng).unwrap();
        let d = all_messages(&f, 2)
            .into_iter()
            .filter(|m| m.iter().any(|x| !x.is_zero()))
            .map(|m| wrank(&f, &c.encode(&m).unwrap()))
            .min()
            .unwrap();
        assert_eq!(d, 3);
    }
}

#[test]
fn decode_is_shift_equivariant() {
    let f = ext(10);
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    let c = GabidulinCode::random(&f, 10, 4, &mut rng).unwrap();
    for _ in 0..50 {
        let msg: Vec<ExtElem> = (0..4).map(|_| f.random(&mut rng)).collect();
        let shift: Vec<ExtElem> = (0..4).map(|_| f.random(&mut rng)).collect();
        let e = random_error(&f, 10, 3, &mut rng);
        let y = add(&f, &c.encode(&msg).unwrap(), &e);
        let y2 = add(&f, &y, &c.encode(&shift).unwrap());
        let (d1, d2) = (c.decode(&y).unwrap(), c.decode(&y2).unwrap());
        assert_eq!(d2.message, add(&f, &d1.message, &shift));
        assert_eq!(d1.error, d2.error);
    }
}

#[test]
fn general_length_codes() {
    let f = ext(9);
    let mut rng = ChaCha20Rng::seed_from_u64(10);
    let c = GabidulinCode::random(&f, 7, 3, &mut rng).unwrap();
    let msg: Vec<ExtElem> = (0..3).map(|_| f.random(&mut rng)).collect();
    let e = random_error(&f, 7, 2, &mut rng);
    assert_eq!(c.decode(&add(&f, &c.encode(&msg).unwrap(), &e)).unwrap().message, msg);
    assert_eq!(expansion(&f, c.points()).rank(), 7);
}

#[test]
fn dual_is_orthogonal() {
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    for (m, n, k) in [(4, 4, 2), (6, 6, 2), (8, 6, 3), (7, 7, 5)] {
        let f = ext(m);
        let c = GabidulinCode::random(&f, n, k, &mut rng).unwrap();
        let d = c.dual().unwrap();
        assert_eq!((d.n(), d.k()), (n, n - k));
        let (g, h) = (c.generator(), d.generator());
        for i in 0..k {
            for j in 0..n - k {
                let dot = (0..n).fold(f.zero(), |acc, l| f.add(&acc, &f.mul(g.get(i, l), h.get(j, l))));
                assert!(dot.is_zero());
            }
        }
    }
}
