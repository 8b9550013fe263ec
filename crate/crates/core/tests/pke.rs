use egmc::pke::{
    keygen, mce_decrypt, mce_encrypt, mce_encrypt_with_error, nied_decrypt, nied_encrypt, nied_encrypt_random,
    peek_params, rng_from_seed, secret_key_from_bytes, secret_key_to_bytes, KeyKind, Scheme,
};
use egmc::{Ciphertext, EgmcParams, Error, KeyPair, MatFq, McEliecePublicKey, NiederreiterPublicKey};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn toy() -> EgmcParams {
    EgmcParams::new(2, 6, 2, 1, 1, 2).unwrap()
}

fn seed(i: u8) -> [u8; 32] {
    [i; 32]
}

fn random_mu<R: Rng>(kp: &KeyPair, rng: &mut R) -> Vec<u16> {
    (0..kp.pk_mce.params.big_k()).map(|_| rng.gen_range(0..kp.pk_mce.params.q as u16)).collect()
}

#[test]
fn keygen_is_deterministic() {
    let a = keygen(&toy(), seed(1)).unwrap();
    let b = keygen(&toy(), seed(1)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.pk_mce, keygen(&toy(), seed(2)).unwrap().pk_mce);
}

#[test]
fn toy_niederreiter_block_shape() {
    let kp = keygen(&toy(), seed(3)).unwrap();
    assert_eq!((kp.pk_nied.t.rows(), kp.pk_nied.t.cols()), (37, 12));
    assert_eq!(kp.pk_nied.payload_len(), (37 * 12usize).div_ceil(8));
    assert!(kp.pk_nied.to_code().unwrap().same_code(&kp.pk_mce.code));
    // H̄ annihilates every public basis element.
    for b in kp.pk_mce.code.basis() {
        assert!(kp.pk_nied.syndrome(&b.unfold()).unwrap().iter().all(|&x| x == 0));
    }
}

#[test]
fn mceliece_roundtrip_toy() {
    let mut rng = ChaCha20Rng::seed_from_u64(4);
    for i in 0..100u8 {
        let kp = keygen(&toy(), seed(i)).unwrap();
        let mu = random_mu(&kp, &mut rng);
        let ct = mce_encrypt(&kp.pk_mce, &mu, &mut rng).unwrap();
        let Ciphertext::McEliece(y) = &ct else { panic!() };
        assert_eq!(y.sub(&kp.pk_mce.code.combine(&mu).unwrap()).rank(), 2);
        assert_eq!(mce_decrypt(&kp.sk, &kp.pk_mce, &ct).unwrap(), mu);
    }
}

#[test]
fn mceliece_zero_error() {
    let kp = keygen(&toy(), seed(5)).unwrap();
    let f = kp.pk_mce.code.field().clone();
    let zero = MatFq::zeros(&f, 7, 7);
    let ct = mce_encrypt_with_error(&kp.pk_mce, &[0; 12], &zero).unwrap();
    assert_eq!(ct, Ciphertext::McEliece(zero.clone()));
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let mu = random_mu(&kp, &mut rng);
    let ct = mce_encrypt_with_error(&kp.pk_mce, &mu, &zero).unwrap();
    assert_eq!(mce_decrypt(&kp.sk, &kp.pk_mce, &ct).unwrap(), mu);
    assert!(mce_encrypt(&kp.pk_mce, &[0; 11], &mut rng).is_err());
    assert!(mce_encrypt(&kp.pk_mce, &[2; 12], &mut rng).is_err());
}

#[test]
fn mceliece_rejects_beyond_capacity() {
    let kp = keygen(&toy(), seed(6)).unwrap();
    let f = kp.pk_mce.code.field().clone();
    let mut rng = ChaCha20Rng::seed_from_u64(6);
    for _ in 0..20 {
        let mu = random_mu(&kp, &mut rng);
        // r + t + 1 = 5.
        let e = MatFq::random_rank(&f, 7, 7, 5, &mut rng).unwrap();
        let ct = mce_encrypt_with_error(&kp.pk_mce, &mu, &e).unwrap();
        let err = mce_decrypt(&kp.sk, &kp.pk_mce, &ct).unwrap_err();
        assert!(matches!(err, Error::Decode { .. } | Error::Verify(_)), "{err}");
    }
}

#[test]
fn niederreiter_roundtrip_toy() {
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    for i in 0..100u8 {
        let kp = keygen(&toy(), seed(i)).unwrap();
        let (mu, ct) = nied_encrypt_random(&kp.pk_nied, &mut rng).unwrap();
        assert_eq!(MatFq::fold(kp.pk_nied.t.field(), &mu, 7).unwrap().rank(), 2);
        assert_eq!(nied_decrypt(&kp.sk, &kp.pk_nied, &ct).unwrap(), mu);
    }
}

#[test]
fn niederreiter_basics() {
    let kp = keygen(&toy(), seed(8)).unwrap();
    let f = kp.pk_nied.t.field().clone();
    let zero = nied_encrypt(&kp.pk_nied, &[0; 49]).unwrap();
    assert_eq!(zero, Ciphertext::Niederreiter(vec![0; 37]));
    assert_eq!(nied_decrypt(&kp.sk, &kp.pk_nied, &zero).unwrap(), vec![0; 49]);
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    let high = MatFq::random_rank(&f, 7, 7, 3, &mut rng).unwrap().unfold();
    assert!(matches!(nied_encrypt(&kp.pk_nied, &high), Err(Error::RankTooLarge { rank: 3, max: 2 })));
    for _ in 0..20 {
        let a = MatFq::random_rank(&f, 7, 7, 1, &mut rng).unwrap().unfold();
        let b = MatFq::random_rank(&f, 7, 7, 1, &mut rng).unwrap().unfold();
        let sum: Vec<u16> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let syn = |v: &[u16]| kp.pk_nied.syndrome(v).unwrap();
        let lin: Vec<u16> = syn(&a).iter().zip(syn(&b)).map(|(x, y)| x ^ y).collect();
        assert_eq!(syn(&sum), lin);
    }
}

#[test]
fn schemes_share_key_material() {
    let kp = keygen(&toy(), seed(9)).unwrap();
    let rebuilt = NiederreiterPublicKey::from_mceliece(&McEliecePublicKey {
        params: kp.pk_nied.params,
        code: kp.pk_nied.to_code().unwrap(),
    })
    .unwrap();
    assert!(rebuilt.to_code().unwrap().same_code(&kp.pk_mce.code));
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    let (mu, ct) = nied_encrypt_random(&rebuilt, &mut rng).unwrap();
    assert_eq!(nied_decrypt(&kp.sk, &rebuilt, &ct).unwrap(), mu);
}

#[test]
fn wrong_scheme_is_rejected() {
    let kp = keygen(&toy(), seed(10)).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(10);
    let (_, nct) = nied_encrypt_random(&kp.pk_nied, &mut rng).unwrap();
    assert!(matches!(mce_decrypt(&kp.sk, &kp.pk_mce, &nct), Err(Error::Malformed(_))));
    let mct = mce_encrypt(&kp.pk_mce, &random_mu(&kp, &mut rng), &mut rng).unwrap();
    assert!(matches!(nied_decrypt(&kp.sk, &kp.pk_nied, &mct), Err(Error::Malformed(_))));
}

#[test]
fn other_field_sizes_roundtrip() {
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    for params in [EgmcParams::new(16, 7, 3, 1, 2, 2).unwrap(), EgmcParams::new(3, 5, 1, 2, 0, 2).unwrap()] {
        for i in 0..5u8 {
            let kp = keygen(&params, seed(i)).unwrap();
            let mu: Vec<u16> = (0..params.big_k()).map(|_| rng.gen_range(0..params.q as u16)).collect();
            let ct = mce_encrypt(&kp.pk_mce, &mu, &mut rng).unwrap();
            assert_eq!(mce_decrypt(&kp.sk, &kp.pk_mce, &ct).unwrap(), mu);
            let (mu, ct) = nied_encrypt_random(&kp.pk_nied, &mut rng).unwrap();
            assert_eq!(nied_decrypt(&kp.sk, &kp.pk_nied, &ct).unwrap(), mu);
        }
    }
}

#[test]
fn serialization_roundtrips() {
    let kp = keygen(&toy(), seed(12)).unwrap();
    let f = kp.pk_mce.code.field().clone();
    let bytes = kp.pk_mce.to_bytes().unwrap();
    assert_eq!(&bytes[..4], b"EGMC");
    assert_eq!(bytes.len(), 19 + (12 * 49usize).div_ceil(8));
    assert_eq!(McEliecePublicKey::from_bytes(&bytes).unwrap(), kp.pk_mce);
    assert_eq!(peek_params(&bytes).unwrap(), (KeyKind::McEliecePublic, toy()));

    let bytes = kp.pk_nied.to_bytes().unwrap();
    assert_eq!(NiederreiterPublicKey::from_bytes(&bytes).unwrap(), kp.pk_nied);
    assert_eq!(peek_params(&bytes).unwrap().0, KeyKind::NiederreiterPublic);

    let bytes = secret_key_to_bytes(&kp.sk).unwrap();
    assert_eq!(secret_key_from_bytes(&bytes).unwrap(), kp.sk);
    assert_eq!(peek_params(&bytes).unwrap().0, KeyKind::Secret);

    let mut rng = ChaCha20Rng::seed_from_u64(12);
    let mct = mce_encrypt(&kp.pk_mce, &random_mu(&kp, &mut rng), &mut rng).unwrap();
    let (_, nct) = nied_encrypt_random(&kp.pk_nied, &mut rng).unwrap();
    for ct in [mct, nct] {
        let bytes = ct.to_bytes(&f);
        assert_eq!(bytes[4], ct.scheme() as u8);
        assert_eq!(Ciphertext::from_bytes(&toy(), &bytes).unwrap(), ct);
    }
    assert_eq!(Scheme::Niederreiter as u8, 2);
}

#[test]
fn permuted_niederreiter_key_roundtrips() {
    // Find a key whose first K coordinates are not an information set.
    let kp = (0..=255u8)
        .map(|i| keygen(&toy(), seed(i)).unwrap())
        .find(|kp| kp.pk_nied.perm.is_some())
        .expect("some key needs a permutation");
    let bytes = kp.pk_nied.to_bytes().unwrap();
    assert_eq!(bytes.len(), 19 + 1 + 2 * 49 + kp.pk_nied.payload_len());
    assert_eq!(NiederreiterPublicKey::from_bytes(&bytes).unwrap(), kp.pk_nied);
    let mut rng = ChaCha20Rng::seed_from_u64(13);
    let (mu, ct) = nied_encrypt_random(&kp.pk_nied, &mut rng).unwrap();
    assert_eq!(nied_decrypt(&kp.sk, &kp.pk_nied, &ct).unwrap(), mu);
}

#[test]
fn malformed_inputs_are_rejected() {
    let kp = keygen(&toy(), seed(14)).unwrap();
    let good = kp.pk_mce.to_bytes().unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(14);
    for _ in 0..200 {
        let mut bad = good.clone();
        let pos = rng.gen_range(0..19);
        let old = bad[pos];
        bad[pos] = loop {
            let v = rng.gen();
            if v != old {
                break v;
            }
        };
        assert!(McEliecePublicKey::from_bytes(&bad).is_err(), "header byte {pos} accepted");
    }
    assert!(matches!(McEliecePublicKey::from_bytes(&good[..good.len() - 1]), Err(Error::Truncated { .. })));
    let mut long = good.clone();
    long.push(0);
    assert!(McEliecePublicKey::from_bytes(&long).is_err());
    assert!(NiederreiterPublicKey::from_bytes(&good).is_err());
    assert!(secret_key_from_bytes(&good).is_err());
    assert!(peek_params(&good[..10]).is_err());

    let f = kp.pk_mce.code.field().clone();
    let ct = mce_encrypt(&kp.pk_mce, &random_mu(&kp, &mut rng), &mut rng).unwrap().to_bytes(&f);
    let mut bad = ct.clone();
    bad[0] = b'X';
    assert!(Ciphertext::from_bytes(&toy(), &bad).is_err());
    let mut bad = ct.clone();
    bad[4] = 7;
    assert!(Ciphertext::from_bytes(&toy(), &bad).is_err());
    assert!(Ciphertext::from_bytes(&toy(), &ct[..ct.len() - 1]).is_err());
}

#[test]
fn bit_flips_are_rejected() {
    // A flip keeps the error rank ≤ r with probability about 2(q^r − 1)/q^(m+ℓ),
    // here below 1e-4 per trial.
    let params = EgmcParams::new(2, 16, 4, 1, 1, 2).unwrap();
    let kp = keygen(&params, seed(15)).unwrap();
    let f = kp.pk_mce.code.field().clone();
    let mut rng = ChaCha20Rng::seed_from_u64(15);
    for _ in 0..50 {
        let mu: Vec<u16> = (0..params.big_k()).map(|_| rng.gen_range(0..2)).collect();
        let mut bytes = mce_encrypt(&kp.pk_mce, &mu, &mut rng).unwrap().to_bytes(&f);
        let bit = rng.gen_range(0..params.big_n());
        bytes[5 + bit / 8] ^= 1 << (bit % 8);
        let ct = Ciphertext::from_bytes(&params, &bytes).unwrap();
        assert!(mce_decrypt(&kp.sk, &kp.pk_mce, &ct).is_err());

        let (_, nct) = nied_encrypt_random(&kp.pk_nied, &mut rng).unwrap();
        let mut bytes = nct.to_bytes(&f);
        let bit = rng.gen_range(0..params.big_n() - params.big_k());
        bytes[5 + bit / 8] ^= 1 << (bit % 8);
        let ct = Ciphertext::from_bytes(&params, &bytes).unwrap();
        assert!(nied_decrypt(&kp.sk, &kp.pk_nied, &ct).is_err());
    }
}

#[test]
fn full_size_keys_match_published_sizes() {
    let params = EgmcParams::new(2, 43, 35, 2, 2, 4).unwrap();
    let kp = keygen(&params, seed(16)).unwrap();
    assert_eq!(kp.pk_nied.payload_len(), 97_825);
    let mut rng = rng_from_seed(seed(17));
    let (mu, ct) = nied_encrypt_random(&kp.pk_nied, &mut rng).unwrap();
    let f = kp.pk_nied.t.field().clone();
    assert_eq!(ct.payload(&f).len(), 65);
    assert_eq!(ct.to_bytes(&f).len(), 70);
    assert_eq!(nied_decrypt(&kp.sk, &kp.pk_nied, &ct).unwrap(), mu);
    let m: Vec<u16> = (0..params.big_k()).map(|_| rng.gen_range(0..2)).collect();
    let mct = mce_encrypt(&kp.pk_mce, &m, &mut rng).unwrap();
    assert_eq!(mce_decrypt(&kp.sk, &kp.pk_mce, &mct).unwrap(), m);
}

#[test]
fn flips_inside_the_error_support_stay_valid() {
    // Adding E_ij with e_i in the column space of the error keeps its rank:
    // such a ciphertext is an honest encryption of the same μ.
    let kp = keygen(&toy(), seed(18)).unwrap();
    let f = kp.pk_mce.code.field().clone();
    let mut rng = ChaCha20Rng::seed_from_u64(18);
    let mu = random_mu(&kp, &mut rng);
    // Error of rank 2 whose column space contains e_0.
    let e = loop {
        let mut e = MatFq::random_rank(&f, 7, 7, 1, &mut rng).unwrap();
        for j in 0..7 {
            e.set(0, j, rng.gen_range(0..2));
        }
        if e.rank() == 2 {
            break e;
        }
    };
    let (i, j) = (0, 3);
    let Ciphertext::McEliece(mut y) = mce_encrypt_with_error(&kp.pk_mce, &mu, &e).unwrap() else { panic!() };
    y.set(i, j, y.get(i, j) ^ 1);
    assert_eq!(mce_decrypt(&kp.sk, &kp.pk_mce, &Ciphertext::McEliece(y)).unwrap(), mu);
}
