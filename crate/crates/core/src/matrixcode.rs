//! Matrix codes over F_q: γ-expansion of vector codes, trace duals,
//! stabilizer algebras and the product spans behind the distinguishers.

use crate::codec::Reader;
use crate::egmc::EgmcSecretKey;
use crate::error::{Error, Result};
use crate::gabidulin::GabidulinCode;
use crate::gf::{BaseField, Basis, ExtElem};
use crate::linalg::{MatExt, MatFq, RowSpace};

/// Ψ_γ(x): column j is the γ-expansion of x_j.
pub fn psi(gamma: &Basis, x: &[ExtElem]) -> MatFq {
    let m = gamma.field().degree();
    let mut out = MatFq::zeros(gamma.field().base(), m, x.len());
    for (j, xj) in x.iter().enumerate() {
        for (i, c) in gamma.expand(xj).into_iter().enumerate() {
            out.set(i, j, c);
        }
    }
    out
}

/// Inverse of [`psi`].
pub fn psi_inv(gamma: &Basis, mat: &MatFq) -> Vec<ExtElem> {
    (0..mat.cols()).map(|j| gamma.contract(&mat.col(j))).collect()
}

/// An F_q-basis (M_1, …, M_K) of a rows×cols matrix code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixCodeBasis {
    field: BaseField,
    rows: usize,
    cols: usize,
    basis: Vec<MatFq>,
}

/// Dimension and basis of a stabilizer algebra.
#[derive(Clone, Debug)]
pub struct Stabilizer {
    pub dim: usize,
    pub basis: Vec<MatFq>,
}

impl MatrixCodeBasis {
    /// Rejects dependent families and mismatched shapes.
    pub fn new(field: &BaseField, rows: usize, cols: usize, basis: Vec<MatFq>) -> Result<Self> {
        if basis.iter().any(|b| b.rows() != rows || b.cols() != cols) {
            return Err(Error::DimensionMismatch(format!(
                "basis matrices must all be {rows}x{cols}"
            )));
        }
        if basis.iter().any(|b| b.field() != field) {
            return Err(Error::FieldMismatch);
        }
        let code = MatrixCodeBasis {
            field: field.clone(),
            rows,
            cols,
            basis,
        };
        if code.generator_matrix().rank() != code.basis.len() {
            return Err(Error::InvalidParams("basis matrices are linearly dependent".into()));
        }
        Ok(code)
    }

    pub(crate) fn new_unchecked(field: &BaseField, rows: usize, cols: usize, basis: Vec<MatFq>) -> Self {
        MatrixCodeBasis {
            field: field.clone(),
            rows,
            cols,
            basis,
        }
    }

    /// Code spanned by arbitrary matrices, reduced to a basis.
    pub fn span(field: &BaseField, rows: usize, cols: usize, gens: &[MatFq]) -> Self {
        let vecs: Vec<Vec<u16>> = gens.iter().map(MatFq::unfold).collect();
        let space = RowSpace::new(field, rows * cols, &vecs);
        Self::from_row_space(field, rows, cols, &space)
    }

    fn from_row_space(field: &BaseField, rows: usize, cols: usize, space: &RowSpace) -> Self {
        let b = space.basis();
        let basis = (0..b.rows())
            .map(|i| MatFq::fold(field, b.row(i), rows).expect("length rows*cols"))
            .collect();
        Self::new_unchecked(field, rows, cols, basis)
    }

    /// Uniformly random code of dimension `dim`.
    pub fn random<R: rand::Rng + ?Sized>(
        field: &BaseField,
        rows: usize,
        cols: usize,
        dim: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if dim > rows * cols {
            return Err(Error::RankTooLarge {
                rank: dim,
                max: rows * cols,
            });
        }
        loop {
            let basis: Vec<MatFq> = (0..dim).map(|_| MatFq::random(field, rows, cols, rng)).collect();
            if let Ok(c) = Self::new(field, rows, cols, basis) {
                return Ok(c);
            }
        }
    }

    pub fn field(&self) -> &BaseField {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[MatFq] {
        &self.basis
    }

    /// K×(rows·cols) matrix whose rows are the unfolded basis elements.
    pub fn generator_matrix(&self) -> MatFq {
        let n = self.rows * self.cols;
        let mut g = MatFq::zeros(&self.field, self.basis.len(), n);
        for (i, b) in self.basis.iter().enumerate() {
            for (j, v) in b.unfold().into_iter().enumerate() {
                g.set(i, j, v);
            }
        }
        g
    }

    pub fn row_space(&self) -> RowSpace {
        RowSpace::from_matrix(self.generator_matrix())
    }

    /// Σ μ_i M_i.
    pub fn combine(&self, mu: &[u16]) -> Result<MatFq> {
        if mu.len() != self.basis.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for dimension {}",
                mu.len(),
                self.basis.len()
            )));
        }
        let mut acc = MatFq::zeros(&self.field, self.rows, self.cols);
        for (c, b) in mu.iter().zip(&self.basis) {
            acc.add_scaled(*c, b);
        }
        Ok(acc)
    }

    pub fn contains(&self, x: &MatFq) -> bool {
        x.rows() == self.rows && x.cols() == self.cols && self.row_space().contains(&x.unfold())
    }

    /// Whether both bases span the same code.
    pub fn same_code(&self, other: &MatrixCodeBasis) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.row_space().same_space(&other.row_space())
    }

    pub fn intersection_dim(&self, other: &MatrixCodeBasis) -> usize {
        self.row_space().intersection_dim(&other.row_space())
    }

    /// `{A·X·B : X in self}`.
    pub fn transform(&self, a: &MatFq, b: &MatFq) -> Result<MatrixCodeBasis> {
        if a.cols() != self.rows || b.rows() != self.cols {
            return Err(Error::DimensionMismatch("transform shapes".into()));
        }
        let basis = self.basis.iter().map(|x| a.mul(x).mul(b)).collect();
        Ok(Self::new_unchecked(&self.field, a.rows(), b.cols(), basis))
    }

    /// Count K, rows, cols as 4-byte LE, then each basis matrix.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&(self.basis.len() as u32).to_le_bytes());
        out.extend_from_slice(&(self.rows as u32).to_le_bytes());
        out.extend_from_slice(&(self.cols as u32).to_le_bytes());
        for b in &self.basis {
            out.extend(b.to_bytes());
        }
        out
    }

    pub fn from_bytes(field: &BaseField, bytes: &[u8]) -> Result<Self> {
        let mut rd = Reader::new(bytes);
        let mut word = || -> Result<usize> {
            Ok(u32::from_le_bytes(rd.take(4)?.try_into().unwrap()) as usize)
        };
        let (k, rows, cols) = (word()?, word()?, word()?);
        let mut rest = rd.rest();
        let mut basis = Vec::new();
        for _ in 0..k {
            let (m, used) = MatFq::from_bytes(field, rest)?;
            rest = &rest[used..];
            basis.push(m);
        }
        if !rest.is_empty() {
            return Err(Error::Malformed(format!("{} trailing bytes", rest.len())));
        }
        Self::new(field, rows, cols, basis)
    }
}

/// Ψ_γ(C) for the vector code with generator `gen`: the basis
/// Ψ_γ(γ_j·v_i), ordered with i major.
pub fn expand_code(gamma: &Basis, gen: &MatExt) -> Result<MatrixCodeBasis> {
    let f = gamma.field();
    if gen.field() != f {
        return Err(Error::FieldMismatch);
    }
    let m = f.degree();
    let mut basis = Vec::with_capacity(gen.rows() * m);
    for i in 0..gen.rows() {
        for gj in gamma.elems() {
            let v: Vec<ExtElem> = gen.row(i).iter().map(|x| f.mul(gj, x)).collect();
            basis.push(psi(gamma, &v));
        }
    }
    MatrixCodeBasis::new(f.base(), m, gen.cols(), basis)
}

/// Dual under ⟨X, Y⟩ = Tr(X·Yᵗ).
pub fn dual_code(c: &MatrixCodeBasis) -> MatrixCodeBasis {
    let ker = c.generator_matrix().null_space();
    let basis = ker
        .iter()
        .map(|v| MatFq::fold(&c.field, v, c.rows).expect("length rows*cols"))
        .collect();
    MatrixCodeBasis::new_unchecked(&c.field, c.rows, c.cols, basis)
}

/// Parity checks of `c` as rows of unfolded dual matrices.
fn parity_rows(c: &MatrixCodeBasis) -> Vec<Vec<u16>> {
    c.generator_matrix().null_space()
}

/// The algebra {P : P·C ⊆ C}.
pub fn left_stabilizer(c: &MatrixCodeBasis) -> Stabilizer {
    let (rows, cols) = (c.rows, c.cols);
    let h = parity_rows(c);
    // Unknown P_{ab}: (E_ab·A)[a][j] = A[b][j], unfolded at j·rows + a.
    let n_eq = h.len() * c.dim();
    let mut sys = MatFq::zeros(&c.field, n_eq, rows * rows);
    let f = &c.field;
    for (ai, a_mat) in c.basis.iter().enumerate() {
        for (hi, hrow) in h.iter().enumerate() {
            let eq = ai * h.len() + hi;
            for a in 0..rows {
                for b in 0..rows {
                    let mut s = 0u16;
                    for j in 0..cols {
                        s = f.add(s, f.mul(hrow[j * rows + a], a_mat.get(b, j)));
                    }
                    sys.set(eq, a * rows + b, s);
                }
            }
        }
    }
    stabilizer_from(f, &sys, rows, rows)
}

/// The algebra {Q : C·Q ⊆ C}.
pub fn right_stabilizer(c: &MatrixCodeBasis) -> Stabilizer {
    let (rows, cols) = (c.rows, c.cols);
    let h = parity_rows(c);
    // Unknown Q_{ab}: (A·E_ab)[r][b] = A[r][a], unfolded at b·rows + r.
    let n_eq = h.len() * c.dim();
    let mut sys = MatFq::zeros(&c.field, n_eq, cols * cols);
    let f = &c.field;
    for (ai, a_mat) in c.basis.iter().enumerate() {
        for (hi, hrow) in h.iter().enumerate() {
            let eq = ai * h.len() + hi;
            for a in 0..cols {
                for b in 0..cols {
                    let mut s = 0u16;
                    for r in 0..rows {
                        s = f.add(s, f.mul(hrow[b * rows + r], a_mat.get(r, a)));
                    }
                    sys.set(eq, a * cols + b, s);
                }
            }
        }
    }
    stabilizer_from(f, &sys, cols, cols)
}

fn stabilizer_from(f: &BaseField, sys: &MatFq, rows: usize, cols: usize) -> Stabilizer {
    let ker = if sys.rows() == 0 {
        (0..rows * cols)
            .map(|i| {
                let mut v = vec![0u16; rows * cols];
                v[i] = 1;
                v
            })
            .collect()
    } else {
        sys.null_space()
    };
    let basis: Vec<MatFq> = ker
        .iter()
        .map(|v| MatFq::from_vec(f, rows, cols, v.clone()).expect("row-major square"))
        .collect();
    Stabilizer {
        dim: basis.len(),
        basis,
    }
}

/// dim Λ_f(C) = dim (C + C^{[1]} + … + C^{[f]}) over F_{q^m}.
pub fn frobenius_sum(gen: &MatExt, f: usize) -> usize {
    let mut acc = gen.clone();
    for i in 1..=f {
        acc = acc.stack(&gen.frobenius(i));
    }
    acc.rank()
}

/// dim (C ∩ C^{[1]}) for a vector code.
pub fn frobenius_intersection_dim(gen: &MatExt) -> usize {
    let k = gen.rank();
    2 * k - frobenius_sum(gen, 1)
}

/// Span of all products D_i·C_j.
pub fn product_span(d: &MatrixCodeBasis, c: &MatrixCodeBasis) -> Result<MatrixCodeBasis> {
    if d.cols != c.rows {
        return Err(Error::DimensionMismatch(format!(
            "cannot multiply {}x{} by {}x{} matrices",
            d.rows, d.cols, c.rows, c.cols
        )));
    }
    let n = d.rows * c.cols;
    let mut space = RowSpace::new(&c.field, n, &[]);
    let mut pending: Vec<Vec<u16>> = Vec::new();
    for di in &d.basis {
        for cj in &c.basis {
            pending.push(di.mul(cj).unfold());
            if pending.len() >= n {
                pending.extend((0..space.dim()).map(|i| space.basis().row(i).to_vec()));
                space = RowSpace::new(&c.field, n, &pending);
                pending.clear();
                if space.dim() == n {
                    return Ok(MatrixCodeBasis::from_row_space(&c.field, d.rows, c.cols, &space));
                }
            }
        }
    }
    pending.extend((0..space.dim()).map(|i| space.basis().row(i).to_vec()));
    let space = RowSpace::new(&c.field, n, &pending);
    Ok(MatrixCodeBasis::from_row_space(&c.field, d.rows, c.cols, &space))
}

/// The code D = { [[B, 0], [T1, T2]] } with B ∈ Ψ_γ(G_γ(m, n−k, m)).
pub fn overbeck_d_code(sk: &EgmcSecretKey) -> Result<MatrixCodeBasis> {
    let p = sk.params();
    let gamma = sk.gamma();
    let f = gamma.field();
    let base = f.base();
    let (m, l1) = (p.m, p.l1);
    let dim_b = p.n - p.k;
    let mut basis = Vec::new();
    if dim_b > 0 {
        let inner = GabidulinCode::new(f, dim_b, gamma.elems().to_vec())?;
        for b in expand_code(gamma, &inner.generator())?.basis() {
            let mut d = MatFq::zeros(base, m + l1, m + l1);
            d.set_block(0, 0, b);
            basis.push(d);
        }
    }
    for i in m..m + l1 {
        for j in 0..m + l1 {
            let mut d = MatFq::zeros(base, m + l1, m + l1);
            d.set(i, j, 1);
            basis.push(d);
        }
    }
    MatrixCodeBasis::new(base, m + l1, m + l1, basis)
}

/// Checks dim span{D'·C_pub} ≤ (m+ℓ1)(n+ℓ2) − m for D' = P·D·P^{-1}.
pub fn overbeck_codim_check(pub_code: &MatrixCodeBasis, sk: &EgmcSecretKey) -> Result<bool> {
    let p = sk.params();
    let (rows, cols) = (p.m + p.l1, p.n + p.l2);
    if pub_code.rows() != rows || pub_code.cols() != cols {
        return Err(Error::DimensionMismatch("public code does not match the key".into()));
    }
    let d = overbeck_d_code(sk)?;
    let pinv = sk.p().invert()?;
    let d_conj = d.transform(sk.p(), &pinv)?;
    let span = product_span(&d_conj, pub_code)?;
    Ok(span.dim() + p.m <= rows * cols)
}
