//! EGMC-McEliece and EGMC-Niederreiter encryption, with byte formats.
//!
//! Every serialized key starts with the header
//! `"EGMC" | version | kind | prf | q:u16 | m,k,ℓ1,ℓ2,r:u16` (little-endian,
//! n = m). Ciphertexts are `"EGMC" | scheme | payload`. Payloads use the
//! packing of [`crate::codec`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::codec::{pack, packed_len, unpack, Reader};
use crate::egmc::{sample_egmc, EgmcParams, EgmcSecretKey};
use crate::error::{Error, Result};
use crate::gabidulin::GabidulinCode;
use crate::gf::{BaseField, Basis, ExtElem};
use crate::linalg::MatFq;
use crate::matrixcode::{psi, psi_inv, MatrixCodeBasis};

pub const MAGIC: &[u8; 4] = b"EGMC";
pub const FORMAT_VERSION: u8 = 1;
/// Seed expansion: ChaCha20 keyed with the 32-byte seed.
pub const PRF_CHACHA20: u8 = 1;
const HEADER_LEN: usize = 19;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum KeyKind {
    McEliecePublic = 1,
    NiederreiterPublic = 2,
    Secret = 3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum Scheme {
    McEliece = 1,
    Niederreiter = 2,
}

/// Deterministic RNG for a 32-byte seed.
pub fn rng_from_seed(seed: [u8; 32]) -> ChaCha20Rng {
    ChaCha20Rng::from_seed(seed)
}

fn write_header(out: &mut Vec<u8>, kind: KeyKind, p: &EgmcParams) -> Result<()> {
    if p.n != p.m {
        return Err(Error::InvalidParams("only n = m can be serialized".into()));
    }
    let q = u16::try_from(p.q).map_err(|_| Error::InvalidParams("q does not fit in 16 bits".into()))?;
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&[FORMAT_VERSION, kind as u8, PRF_CHACHA20]);
    out.extend_from_slice(&q.to_le_bytes());
    for v in [p.m, p.k, p.l1, p.l2, p.r] {
        let v = u16::try_from(v).map_err(|_| Error::InvalidParams("parameter exceeds 16 bits".into()))?;
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(())
}

fn read_header(rd: &mut Reader<'_>, kind: KeyKind) -> Result<EgmcParams> {
    if rd.take(4)? != MAGIC {
        return Err(Error::Malformed("bad magic".into()));
    }
    let version = rd.u8()?;
    if version != FORMAT_VERSION {
        return Err(Error::Malformed(format!("unsupported version {version}")));
    }
    let k = rd.u8()?;
    if k != kind as u8 {
        return Err(Error::Malformed(format!("expected key kind {}, found {k}", kind as u8)));
    }
    let prf = rd.u8()?;
    if prf != PRF_CHACHA20 {
        return Err(Error::Malformed(format!("unknown seed expansion {prf}")));
    }
    let q = rd.u16()? as u32;
    let mut v = [0usize; 5];
    for x in &mut v {
        *x = rd.u16()? as usize;
    }
    let [m, k, l1, l2, r] = v;
    EgmcParams::new(q, m, k, l1, l2, r).map_err(|e| Error::Malformed(e.to_string()))
}

/// Parameters of any serialized key.
pub fn peek_params(bytes: &[u8]) -> Result<(KeyKind, EgmcParams)> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Truncated {
            expected: HEADER_LEN,
            got: bytes.len(),
        });
    }
    let kind = match bytes[5] {
        1 => KeyKind::McEliecePublic,
        2 => KeyKind::NiederreiterPublic,
        3 => KeyKind::Secret,
        k => return Err(Error::Malformed(format!("unknown key kind {k}"))),
    };
    Ok((kind, read_header(&mut Reader::new(bytes), kind)?))
}

/// McEliece public key: the km basis matrices M_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McEliecePublicKey {
    pub params: EgmcParams,
    pub code: MatrixCodeBasis,
}

/// Niederreiter public key: H̄ = [T | I_{N−K}] acting on permuted coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiederreiterPublicKey {
    pub params: EgmcParams,
    /// `perm[j]` is the unfolded index sent to position j; `None` is the identity.
    pub perm: Option<Vec<u16>>,
    /// The (N−K)×K block T.
    pub t: MatFq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KeyPair {
    pub sk: EgmcSecretKey,
    pub pk_mce: McEliecePublicKey,
    pub pk_nied: NiederreiterPublicKey,
}

/// Generates both public keys and the secret key from a seed.
pub fn keygen(params: &EgmcParams, seed: [u8; 32]) -> Result<KeyPair> {
    if params.n != params.m {
        return Err(Error::InvalidParams("the schemes use n = m".into()));
    }
    let mut rng = rng_from_seed(seed);
    let (public, sk) = sample_egmc(params, &mut rng)?;
    let pk_mce = McEliecePublicKey {
        params: *params,
        code: public.code,
    };
    let pk_nied = NiederreiterPublicKey::from_mceliece(&pk_mce)?;
    Ok(KeyPair { sk, pk_mce, pk_nied })
}

impl McEliecePublicKey {
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        write_header(&mut out, KeyKind::McEliecePublic, &self.params)?;
        let mut all = Vec::with_capacity(self.code.dim() * self.params.big_n());
        for b in self.code.basis() {
            all.extend_from_slice(b.data());
        }
        out.extend(pack(self.code.field(), &all));
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut rd = Reader::new(bytes);
        let params = read_header(&mut rd, KeyKind::McEliecePublic)?;
        let f = params.base_field()?;
        let (kk, nn) = (params.big_k(), params.big_n());
        let payload = rd.take(packed_len(&f, kk * nn))?;
        rd.finish()?;
        let all = unpack(&f, payload, kk * nn)?;
        let basis = all
            .chunks(nn)
            .map(|c| MatFq::from_vec(&f, params.rows(), params.cols(), c.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        let code = MatrixCodeBasis::new(&f, params.rows(), params.cols(), basis)
            .map_err(|e| Error::Malformed(e.to_string()))?;
        Ok(McEliecePublicKey { params, code })
    }
}

impl NiederreiterPublicKey {
    /// Systematic parity check of the McEliece code, permuting columns when
    /// the first K unfolded positions are not an information set.
    pub fn from_mceliece(pk: &McEliecePublicKey) -> Result<Self> {
        let p = pk.params;
        let (kk, nn) = (p.big_k(), p.big_n());
        let f = pk.code.field().clone();
        let mut g = pk.code.generator_matrix();
        let pivots = g.rref();
        if pivots.len() != kk {
            return Err(Error::Singular);
        }
        let identity = pivots.iter().enumerate().all(|(i, &c)| i == c);
        let order: Vec<usize> = if identity {
            (0..nn).collect()
        } else {
            let mut is_pivot = vec![false; nn];
            for &c in &pivots {
                is_pivot[c] = true;
            }
            pivots.iter().copied().chain((0..nn).filter(|&c| !is_pivot[c])).collect()
        };
        // Permuted generator is [I_K | A]; then T = −Aᵗ.
        let mut t = MatFq::zeros(&f, nn - kk, kk);
        for i in 0..kk {
            for (j, &c) in order[kk..].iter().enumerate() {
                t.set(j, i, f.neg(g.get(i, c)));
            }
        }
        let perm = (!identity).then(|| order.iter().map(|&c| c as u16).collect());
        Ok(NiederreiterPublicKey { params: p, perm, t })
    }

    /// The McEliece code recovered from H̄ (a different basis of the same code).
    pub fn to_code(&self) -> Result<MatrixCodeBasis> {
        let p = self.params;
        let (kk, nn) = (p.big_k(), p.big_n());
        let f = self.t.field().clone();
        let basis = (0..kk)
            .map(|i| {
                let mut v = vec![0u16; nn];
                v[self.index(i)] = 1;
                for j in 0..nn - kk {
                    v[self.index(kk + j)] = f.neg(self.t.get(j, i));
                }
                MatFq::fold(&f, &v, p.rows())
            })
            .collect::<Result<Vec<_>>>()?;
        MatrixCodeBasis::new(&f, p.rows(), p.cols(), basis)
    }

    #[inline]
    fn index(&self, j: usize) -> usize {
        self.perm.as_ref().map_or(j, |p| p[j] as usize)
    }

    /// H̄ applied to the permuted vector: c = T·x_π[..K] + x_π[K..].
    pub fn syndrome(&self, x: &[u16]) -> Result<Vec<u16>> {
        let (kk, nn) = (self.params.big_k(), self.params.big_n());
        if x.len() != nn {
            return Err(Error::DimensionMismatch(format!("vector of length {} for N = {nn}", x.len())));
        }
        let f = self.t.field();
        let head: Vec<u16> = (0..kk).map(|j| x[self.index(j)]).collect();
        let mut c = self.t.mul_vec(&head);
        for (j, cj) in c.iter_mut().enumerate() {
            *cj = f.add(*cj, x[self.index(kk + j)]);
        }
        Ok(c)
    }

    /// H̄·X for a matrix of N-vectors stored as columns.
    fn syndrome_matrix(&self, x: &MatFq) -> MatFq {
        let (kk, nn) = (self.params.big_k(), self.params.big_n());
        let f = self.t.field();
        let mut head = MatFq::zeros(f, kk, x.cols());
        let mut tail = MatFq::zeros(f, nn - kk, x.cols());
        for j in 0..nn {
            let src = self.index(j);
            let (dst, row) = if j < kk { (&mut head, j) } else { (&mut tail, j - kk) };
            for c in 0..x.cols() {
                dst.set(row, c, x.get(src, c));
            }
        }
        self.t.mul(&head).add(&tail)
    }

    /// Any ȳ with H̄·ȳ = c, namely (0_K | c) before permutation.
    fn preimage(&self, c: &[u16]) -> Vec<u16> {
        let (kk, nn) = (self.params.big_k(), self.params.big_n());
        let mut y = vec![0u16; nn];
        for (j, &v) in c.iter().enumerate() {
            y[self.index(kk + j)] = v;
        }
        y
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        write_header(&mut out, KeyKind::NiederreiterPublic, &self.params)?;
        match &self.perm {
            None => out.push(0),
            Some(p) => {
                out.push(1);
                for &i in p {
                    out.extend_from_slice(&i.to_le_bytes());
                }
            }
        }
        out.extend(pack(self.t.field(), self.t.data()));
        Ok(out)
    }

    /// Size in bytes of the packed block T alone.
    pub fn payload_len(&self) -> usize {
        packed_len(self.t.field(), self.t.rows() * self.t.cols())
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut rd = Reader::new(bytes);
        let params = read_header(&mut rd, KeyKind::NiederreiterPublic)?;
        let f = params.base_field()?;
        let (kk, nn) = (params.big_k(), params.big_n());
        let perm = match rd.u8()? {
            0 => None,
            1 => {
                let mut p = Vec::with_capacity(nn);
                let mut seen = vec![false; nn];
                for _ in 0..nn {
                    let i = rd.u16()?;
                    if i as usize >= nn || std::mem::replace(&mut seen[i as usize], true) {
                        return Err(Error::Malformed("invalid column permutation".into()));
                    }
                    p.push(i);
                }
                Some(p)
            }
            b => return Err(Error::Malformed(format!("invalid permutation flag {b}"))),
        };
        let count = (nn - kk) * kk;
        let payload = rd.take(packed_len(&f, count))?;
        rd.finish()?;
        let t = MatFq::from_vec(&f, nn - kk, kk, unpack(&f, payload, count)?)?;
        Ok(NiederreiterPublicKey { params, perm, t })
    }
}

/// A ciphertext of either scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ciphertext {
    /// Y = Σ μ_i M_i + E.
    McEliece(MatFq),
    /// Syndrome c = H̄·μ.
    Niederreiter(Vec<u16>),
}

impl Ciphertext {
    pub fn scheme(&self) -> Scheme {
        match self {
            Ciphertext::McEliece(_) => Scheme::McEliece,
            Ciphertext::Niederreiter(_) => Scheme::Niederreiter,
        }
    }

    /// Packed payload without the framing bytes.
    pub fn payload(&self, field: &BaseField) -> Vec<u8> {
        match self {
            Ciphertext::McEliece(y) => pack(field, y.data()),
            Ciphertext::Niederreiter(c) => pack(field, c),
        }
    }

    pub fn to_bytes(&self, field: &BaseField) -> Vec<u8> {
        let mut out = MAGIC.to_vec();
        out.push(self.scheme() as u8);
        out.extend(self.payload(field));
        out
    }

    pub fn from_bytes(params: &EgmcParams, bytes: &[u8]) -> Result<Self> {
        let f = params.base_field()?;
        let mut rd = Reader::new(bytes);
        if rd.take(4)? != MAGIC {
            return Err(Error::Malformed("bad magic".into()));
        }
        let scheme = rd.u8()?;
        let (count, is_mce) = match scheme {
            1 => (params.big_n(), true),
            2 => (params.big_n() - params.big_k(), false),
            s => return Err(Error::Malformed(format!("unknown scheme {s}"))),
        };
        let payload = rd.take(packed_len(&f, count))?;
        rd.finish()?;
        let v = unpack(&f, payload, count)?;
        Ok(if is_mce {
            Ciphertext::McEliece(MatFq::from_vec(&f, params.rows(), params.cols(), v)?)
        } else {
            Ciphertext::Niederreiter(v)
        })
    }
}

fn check_message(f: &BaseField, mu: &[u16], len: usize) -> Result<()> {
    if mu.len() != len {
        return Err(Error::DimensionMismatch(format!("message of length {} instead of {len}", mu.len())));
    }
    if mu.iter().any(|&v| v as u32 >= f.q()) {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

/// Y = Σ μ_i M_i + E with E of rank exactly r.
pub fn mce_encrypt<R: Rng + ?Sized>(pk: &McEliecePublicKey, mu: &[u16], rng: &mut R) -> Result<Ciphertext> {
    let p = pk.params;
    let e = MatFq::random_rank(pk.code.field(), p.rows(), p.cols(), p.r, rng)?;
    mce_encrypt_with_error(pk, mu, &e)
}

/// Encryption with a caller-chosen error matrix.
pub fn mce_encrypt_with_error(pk: &McEliecePublicKey, mu: &[u16], e: &MatFq) -> Result<Ciphertext> {
    check_message(pk.code.field(), mu, pk.params.big_k())?;
    if e.rows() != pk.params.rows() || e.cols() != pk.params.cols() {
        return Err(Error::DimensionMismatch("error matrix shape".into()));
    }
    Ok(Ciphertext::McEliece(pk.code.combine(mu)?.add(e)))
}

struct Unmasked {
    p_inv: MatFq,
    q_inv: MatFq,
}

impl Unmasked {
    fn new(sk: &EgmcSecretKey) -> Result<Self> {
        Ok(Unmasked {
            p_inv: sk.p().invert()?,
            q_inv: sk.q().invert()?,
        })
    }

    /// Decodes the top-left m×n block of P^{-1}·Y·Q^{-1}.
    fn decode(&self, sk: &EgmcSecretKey, y: &MatFq) -> Result<crate::gabidulin::Decoded> {
        let p = sk.params();
        let yp = self.p_inv.mul(y).mul(&self.q_inv);
        let word = psi_inv(sk.gamma(), &yp.submatrix(0, 0, p.m, p.n));
        sk.code().decode(&word)
    }
}

/// μ from the message polynomial: μ_{im+j} is the j-th γ-coordinate of f_i.
fn message_to_mu(gamma: &Basis, message: &[ExtElem]) -> Vec<u16> {
    message.iter().flat_map(|f| gamma.expand(f)).collect()
}

pub fn mce_decrypt(sk: &EgmcSecretKey, pk: &McEliecePublicKey, ct: &Ciphertext) -> Result<Vec<u16>> {
    let Ciphertext::McEliece(y) = ct else {
        return Err(Error::Malformed("not a McEliece ciphertext".into()));
    };
    let p = sk.params();
    if pk.params != *p || y.rows() != p.rows() || y.cols() != p.cols() {
        return Err(Error::DimensionMismatch("ciphertext does not match the key".into()));
    }
    let decoded = Unmasked::new(sk)?.decode(sk, y)?;
    let mu = message_to_mu(sk.gamma(), &decoded.message);
    let residual = y.sub(&pk.code.combine(&mu)?);
    let rank = residual.rank();
    if rank > p.r {
        return Err(Error::Verify(format!("residual error has rank {rank} > {}", p.r)));
    }
    Ok(mu)
}

/// c = H̄·μ for a plaintext with rank(Fold(μ)) ≤ r.
pub fn nied_encrypt(pk: &NiederreiterPublicKey, mu: &[u16]) -> Result<Ciphertext> {
    let p = pk.params;
    let f = pk.t.field();
    check_message(f, mu, p.big_n())?;
    let rank = MatFq::fold(f, mu, p.rows())?.rank();
    if rank > p.r {
        return Err(Error::RankTooLarge { rank, max: p.r });
    }
    Ok(Ciphertext::Niederreiter(pk.syndrome(mu)?))
}

/// Samples a rank-r plaintext and encrypts it.
pub fn nied_encrypt_random<R: Rng + ?Sized>(pk: &NiederreiterPublicKey, rng: &mut R) -> Result<(Vec<u16>, Ciphertext)> {
    let p = pk.params;
    let mu = MatFq::random_rank(pk.t.field(), p.rows(), p.cols(), p.r, rng)?.unfold();
    let ct = nied_encrypt(pk, &mu)?;
    Ok((mu, ct))
}

pub fn nied_decrypt(sk: &EgmcSecretKey, pk: &NiederreiterPublicKey, ct: &Ciphertext) -> Result<Vec<u16>> {
    let Ciphertext::Niederreiter(c) = ct else {
        return Err(Error::Malformed("not a Niederreiter ciphertext".into()));
    };
    let p = *sk.params();
    if pk.params != p || c.len() != p.big_n() - p.big_k() {
        return Err(Error::DimensionMismatch("ciphertext does not match the key".into()));
    }
    let f = pk.t.field().clone();
    let (rows, cols, m, n) = (p.rows(), p.cols(), p.m, p.n);
    let y = MatFq::fold(&f, &pk.preimage(c), rows)?;
    let decoded = Unmasked::new(sk)?.decode(sk, &y)?;

    // E'' = P^{-1}·E·Q^{-1}; its top-left block is the decoded error.
    let mut e2 = MatFq::zeros(&f, rows, cols);
    e2.set_block(0, 0, &psi(sk.gamma(), &decoded.error));
    let (pm, qm) = (sk.p(), sk.q());
    let known = pm.mul(&e2).mul(qm).unfold();
    let known_syn = pk.syndrome(&known)?;
    let rhs: Vec<u16> = c.iter().zip(&known_syn).map(|(&a, &b)| f.sub(a, b)).collect();

    let unknowns: Vec<(usize, usize)> = (0..rows)
        .flat_map(|i| (0..cols).map(move |j| (i, j)))
        .filter(|&(i, j)| i >= m || j >= n)
        .collect();
    // Column u: unfold(P[:, i]·Q[j, :]) for unknown (i, j).
    let mut x = MatFq::zeros(&f, p.big_n(), unknowns.len());
    for (u, &(i, j)) in unknowns.iter().enumerate() {
        for jj in 0..cols {
            let qv = qm.get(j, jj);
            if qv == 0 {
                continue;
            }
            for ii in 0..rows {
                x.set(jj * rows + ii, u, f.mul(pm.get(ii, i), qv));
            }
        }
    }
    let sys = pk.syndrome_matrix(&x);
    let sol = sys.solve(&rhs).map_err(|_| Error::Verify("syndrome is inconsistent with the decoded block".into()))?;
    for (&(i, j), &v) in unknowns.iter().zip(&sol.particular) {
        e2.set(i, j, v);
    }
    let mu = pm.mul(&e2).mul(qm);
    let rank = mu.rank();
    if rank > p.r {
        return Err(Error::Verify(format!("recovered plaintext has rank {rank} > {}", p.r)));
    }
    let mu = mu.unfold();
    if pk.syndrome(&mu)? != *c {
        return Err(Error::Verify("syndrome mismatch".into()));
    }
    Ok(mu)
}

/// Secret key: header, γ (m elements), g (n elements), then P and Q.
pub fn secret_key_to_bytes(sk: &EgmcSecretKey) -> Result<Vec<u8>> {
    let p = sk.params();
    let mut out = Vec::new();
    write_header(&mut out, KeyKind::Secret, p)?;
    let f = sk.p().field();
    let gamma: Vec<u16> = sk.gamma().elems().iter().flat_map(|e| e.coeffs().to_vec()).collect();
    let g: Vec<u16> = sk.code().points().iter().flat_map(|e| e.coeffs().to_vec()).collect();
    out.extend(pack(f, &gamma));
    out.extend(pack(f, &g));
    out.extend(sk.p().to_bytes());
    out.extend(sk.q().to_bytes());
    Ok(out)
}

pub fn secret_key_from_bytes(bytes: &[u8]) -> Result<EgmcSecretKey> {
    let mut rd = Reader::new(bytes);
    let params = read_header(&mut rd, KeyKind::Secret)?;
    let ext = params.ext_field()?;
    let f = ext.base().clone();
    let m = params.m;
    let read_elems = |rd: &mut Reader<'_>, count: usize| -> Result<Vec<ExtElem>> {
        let raw = unpack(&f, rd.take(packed_len(&f, count * m))?, count * m)?;
        raw.chunks(m).map(|c| ext.elem(c.to_vec())).collect()
    };
    let gamma = read_elems(&mut rd, m)?;
    let g = read_elems(&mut rd, params.n)?;
    let rest = rd.rest();
    let (pm, used) = MatFq::from_bytes(&f, rest)?;
    let (qm, used2) = MatFq::from_bytes(&f, &rest[used..])?;
    if used + used2 != rest.len() {
        return Err(Error::Malformed("trailing bytes after secret key".into()));
    }
    let bad = |e: Error| Error::Malformed(e.to_string());
    let gamma = Basis::new(&ext, gamma).map_err(bad)?;
    let code = GabidulinCode::new(&ext, params.k, g).map_err(bad)?;
    EgmcSecretKey::new(params, gamma, code, pm, qm).map_err(bad)
}
