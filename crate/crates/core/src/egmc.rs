//! The random-rows-and-columns masking and the EGMC key distribution.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gabidulin::GabidulinCode;
use crate::gf::{BaseField, Basis, ExtField};
use crate::linalg::{MatFq, RowSpace};
use crate::matrixcode::{dual_code, expand_code, psi, MatrixCodeBasis};

/// Scheme integers. Published sets use n = m.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EgmcParams {
    pub q: u32,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub l1: usize,
    pub l2: usize,
    pub r: usize,
}

impl EgmcParams {
    /// Parameters with n = m, validated.
    pub fn new(q: u32, m: usize, k: usize, l1: usize, l2: usize, r: usize) -> Result<Self> {
        let p = EgmcParams {
            q,
            m,
            n: m,
            k,
            l1,
            l2,
            r,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if self.m == 0 || self.k == 0 {
            return bad("m and k must be positive".into());
        }
        if self.k > self.n || self.n > self.m {
            return bad(format!("need k <= n <= m, got k={}, n={}, m={}", self.k, self.n, self.m));
        }
        if self.r > self.t() {
            return bad(format!(
                "error rank r={} exceeds the decoding radius {}",
                self.r,
                self.t()
            ));
        }
        if self.q < 2 || self.q > 1 << 16 {
            return bad(format!("q={} out of range", self.q));
        }
        if self.m > u16::MAX as usize || self.l1 > 1024 || self.l2 > 1024 {
            return bad("dimensions too large".into());
        }
        Ok(())
    }

    /// Decoding radius ⌊(n−k)/2⌋.
    pub fn t(&self) -> usize {
        (self.n - self.k) / 2
    }

    /// Rows of the ambient matrix space, m + ℓ1.
    pub fn rows(&self) -> usize {
        self.m + self.l1
    }

    /// Columns of the ambient matrix space, n + ℓ2.
    pub fn cols(&self) -> usize {
        self.n + self.l2
    }

    /// Ambient dimension N = (m+ℓ1)(n+ℓ2).
    pub fn big_n(&self) -> usize {
        self.rows() * self.cols()
    }

    /// Code dimension K = km.
    pub fn big_k(&self) -> usize {
        self.k * self.m
    }

    pub fn base_field(&self) -> Result<BaseField> {
        BaseField::new(self.q)
    }

    pub fn ext_field(&self) -> Result<ExtField> {
        ExtField::new(self.base_field()?, self.m)
    }
}

/// Trapdoor (γ, G, P, Q).
#[derive(Clone, Debug, PartialEq)]
pub struct EgmcSecretKey {
    params: EgmcParams,
    gamma: Basis,
    code: GabidulinCode,
    p: MatFq,
    q: MatFq,
}

impl EgmcSecretKey {
    pub fn new(params: EgmcParams, gamma: Basis, code: GabidulinCode, p: MatFq, q: MatFq) -> Result<Self> {
        params.validate()?;
        let m = params.m;
        if gamma.field().degree() != m || code.field() != gamma.field() {
            return Err(Error::FieldMismatch);
        }
        if code.n() != params.n || code.k() != params.k {
            return Err(Error::DimensionMismatch("Gabidulin code does not match the parameters".into()));
        }
        if p.rows() != params.rows() || p.cols() != params.rows() || q.rows() != params.cols() || q.cols() != params.cols() {
            return Err(Error::DimensionMismatch("masking matrices have the wrong size".into()));
        }
        if p.rank() != p.rows() || q.rank() != q.rows() {
            return Err(Error::Singular);
        }
        Ok(EgmcSecretKey {
            params,
            gamma,
            code,
            p,
            q,
        })
    }

    pub fn params(&self) -> &EgmcParams {
        &self.params
    }

    pub fn gamma(&self) -> &Basis {
        &self.gamma
    }

    pub fn code(&self) -> &GabidulinCode {
        &self.code
    }

    pub fn p(&self) -> &MatFq {
        &self.p
    }

    pub fn q(&self) -> &MatFq {
        &self.q
    }

    /// Ψ_γ(G) before masking.
    pub fn inner_code(&self) -> Result<MatrixCodeBasis> {
        expand_code(&self.gamma, &self.code.generator())
    }
}

/// Public matrix code of dimension km in F_q^{(m+ℓ1)×(n+ℓ2)}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EgmcPublicCode {
    pub params: EgmcParams,
    pub code: MatrixCodeBasis,
}

/// Random blocks attached to one basis element: R (m×ℓ2), R' (ℓ1×n), R'' (ℓ1×ℓ2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RrcBlocks {
    pub r: MatFq,
    pub r1: MatFq,
    pub r2: MatFq,
}

impl RrcBlocks {
    pub fn random<R: Rng + ?Sized>(field: &BaseField, m: usize, n: usize, l1: usize, l2: usize, rng: &mut R) -> Self {
        RrcBlocks {
            r: MatFq::random(field, m, l2, rng),
            r1: MatFq::random(field, l1, n, rng),
            r2: MatFq::random(field, l1, l2, rng),
        }
    }
}

/// Maps basis element A_i to P·[[A_i, R_i], [R'_i, R''_i]]·Q. Blocks are
/// sampled fresh per element when `blocks` is `None`.
pub fn rrc_transform<R: Rng + ?Sized>(
    inner: &MatrixCodeBasis,
    l1: usize,
    l2: usize,
    p: &MatFq,
    q: &MatFq,
    blocks: Option<&[RrcBlocks]>,
    rng: &mut R,
) -> Result<MatrixCodeBasis> {
    let (m, n) = (inner.rows(), inner.cols());
    let f = inner.field();
    if p.rows() != m + l1 || p.cols() != m + l1 || q.rows() != n + l2 || q.cols() != n + l2 {
        return Err(Error::DimensionMismatch("masking matrices have the wrong size".into()));
    }
    if let Some(b) = blocks {
        if b.len() != inner.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} block triples for dimension {}",
                b.len(),
                inner.dim()
            )));
        }
        let ok = b.iter().all(|t| {
            (t.r.rows(), t.r.cols(), t.r1.rows(), t.r1.cols(), t.r2.rows(), t.r2.cols()) == (m, l2, l1, n, l1, l2)
        });
        if !ok {
            return Err(Error::DimensionMismatch("random block shapes".into()));
        }
    }
    let mut out = Vec::with_capacity(inner.dim());
    for (i, a) in inner.basis().iter().enumerate() {
        let owned;
        let t = match blocks {
            Some(b) => &b[i],
            None => {
                owned = RrcBlocks::random(f, m, n, l1, l2, rng);
                &owned
            }
        };
        let big = MatFq::from_blocks(a, &t.r, &t.r1, &t.r2)?;
        out.push(p.mul(&big).mul(q));
    }
    Ok(MatrixCodeBasis::new_unchecked(f, m + l1, n + l2, out))
}

/// Samples a key pair of the EGMC distribution.
pub fn sample_egmc<R: Rng + ?Sized>(params: &EgmcParams, rng: &mut R) -> Result<(EgmcPublicCode, EgmcSecretKey)> {
    params.validate()?;
    let ext = params.ext_field()?;
    let base = ext.base().clone();
    let code = GabidulinCode::random(&ext, params.n, params.k, rng)?;
    let gamma = Basis::random(&ext, rng);
    let p = MatFq::random_gl(&base, params.rows(), rng);
    let q = MatFq::random_gl(&base, params.cols(), rng);
    let inner = expand_code(&gamma, &code.generator())?;
    let public = rrc_transform(&inner, params.l1, params.l2, &p, &q, None, rng)?;
    let sk = EgmcSecretKey {
        params: *params,
        gamma,
        code,
        p,
        q,
    };
    Ok((
        EgmcPublicCode {
            params: *params,
            code: public,
        },
        sk,
    ))
}

/// Outcome of [`dual_structure_check`], one flag per verified property.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DualStructure {
    /// Every conjugated, zero-extended element of Ψ_γ'(G^⊥) lies in the dual.
    pub contains_dual_gabidulin: bool,
    /// dim dual = m(n−k) + nℓ1 + mℓ2 + ℓ1ℓ2.
    pub dimension_matches: bool,
    /// The unmasked dual meets the top-left block space in exactly Ψ_γ'(G^⊥).
    pub complement_ok: bool,
}

impl DualStructure {
    pub fn holds(&self) -> bool {
        self.contains_dual_gabidulin && self.dimension_matches && self.complement_ok
    }
}

/// Verifies the decomposition dual(pk) = (Pᵗ)^{-1}·(Ψ_γ'(G^⊥) ⊕ W)·(Qᵗ)^{-1},
/// with W meeting the top-left-supported matrices trivially.
pub fn dual_structure_check(pk: &EgmcPublicCode, sk: &EgmcSecretKey) -> Result<DualStructure> {
    let p = sk.params();
    if pk.params != *p || pk.code.rows() != p.rows() || pk.code.cols() != p.cols() {
        return Err(Error::DimensionMismatch("public code does not match the key".into()));
    }
    let (m, n, k, l1, l2) = (p.m, p.n, p.k, p.l1, p.l2);
    let base = pk.code.field().clone();
    let dual = dual_code(&pk.code);
    let dual_space = dual.row_space();

    let pt_inv = sk.p.transpose().invert()?;
    let qt_inv = sk.q.transpose().invert()?;
    let gamma_dual = sk.gamma.dual();
    let mut contains = true;
    let mut gab_dual_dim = 0;
    if k < n {
        let gd = sk.code.dual()?;
        let gens = gd.generator();
        for i in 0..gens.rows() {
            for g in gamma_dual.elems() {
                let v: Vec<_> = gens.row(i).iter().map(|x| gamma_dual.field().mul(g, x)).collect();
                let mut z = MatFq::zeros(&base, m + l1, n + l2);
                z.set_block(0, 0, &psi(&gamma_dual, &v));
                let conj = pt_inv.mul(&z).mul(&qt_inv);
                contains &= dual_space.contains(&conj.unfold());
                gab_dual_dim += 1;
            }
        }
    }
    let dimension_matches = dual.dim() == m * (n - k) + n * l1 + m * l2 + l1 * l2 && gab_dual_dim == m * (n - k);

    let unmasked = dual.transform(&sk.p.transpose(), &sk.q.transpose())?;
    let v_space = RowSpace::new(
        &base,
        p.big_n(),
        &(0..m)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| {
                let mut e = MatFq::zeros(&base, m + l1, n + l2);
                e.set(i, j, 1);
                e.unfold()
            })
            .collect::<Vec<_>>(),
    );
    let complement_ok = unmasked.row_space().intersection_dim(&v_space) == m * (n - k);
    Ok(DualStructure {
        contains_dual_gabidulin: contains,
        dimension_matches,
        complement_ok,
    })
}
