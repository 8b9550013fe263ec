//! Gabidulin codes G_g(n, k, m) = { P(g) : deg_q P < k } and their
//! bounded-distance decoder.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{ExtElem, ExtField};
use crate::linalg::{MatExt, MatFq};
use crate::qpoly::QPoly;

/// m×n matrix whose column j holds the power-basis coordinates of `v[j]`.
pub fn expansion(field: &ExtField, v: &[ExtElem]) -> MatFq {
    let m = field.degree();
    let mut out = MatFq::zeros(field.base(), m, v.len());
    for (j, x) in v.iter().enumerate() {
        for (i, &c) in x.coeffs().iter().enumerate() {
            out.set(i, j, c);
        }
    }
    out
}

/// Rank weight: dimension of the F_q-span of the coordinates.
pub fn wrank(field: &ExtField, v: &[ExtElem]) -> usize {
    expansion(field, v).rank()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GabidulinCode {
    ext: ExtField,
    k: usize,
    g: Vec<ExtElem>,
}

/// Output of a successful decoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    /// Coefficients f_0, …, f_{k-1} of the message polynomial.
    pub message: Vec<ExtElem>,
    pub codeword: Vec<ExtElem>,
    pub error: Vec<ExtElem>,
}

impl GabidulinCode {
    /// Code of dimension `k` evaluated at `g`; the entries of `g` must be
    /// F_q-independent and `k ≤ n ≤ m`.
    pub fn new(ext: &ExtField, k: usize, g: Vec<ExtElem>) -> Result<Self> {
        let n = g.len();
        let m = ext.degree();
        if k > n || n > m {
            return Err(Error::InvalidParams(format!(
                "Gabidulin code needs k <= n <= m, got k={k}, n={n}, m={m}"
            )));
        }
        if g.iter().any(|x| !ext.contains(x)) {
            return Err(Error::FieldMismatch);
        }
        if wrank(ext, &g) != n {
            return Err(Error::InvalidParams(
                "evaluation points are not F_q-linearly independent".into(),
            ));
        }
        Ok(GabidulinCode {
            ext: ext.clone(),
            k,
            g,
        })
    }

    /// Random evaluation vector, rejection-sampled until independent.
    pub fn random<R: Rng + ?Sized>(ext: &ExtField, n: usize, k: usize, rng: &mut R) -> Result<Self> {
        if k > n || n > ext.degree() {
            return Err(Error::InvalidParams(format!(
                "Gabidulin code needs k <= n <= m, got k={k}, n={n}, m={}",
                ext.degree()
            )));
        }
        loop {
            let g: Vec<ExtElem> = (0..n).map(|_| ext.random(rng)).collect();
            if wrank(ext, &g) == n {
                return Self::new(ext, k, g);
            }
        }
    }

    pub fn field(&self) -> &ExtField {
        &self.ext
    }

    pub fn n(&self) -> usize {
        self.g.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &[ExtElem] {
        &self.g
    }

    /// Unique-decoding radius ⌊(n−k)/2⌋.
    pub fn t(&self) -> usize {
        (self.n() - self.k) / 2
    }

    /// k×n generator with rows g^{[i]}.
    pub fn generator(&self) -> MatExt {
        let rows = (0..self.k)
            .map(|i| self.g.iter().map(|x| self.ext.frobenius(x, i)).collect())
            .collect();
        MatExt::from_rows(&self.ext, rows).expect("rows have length n")
    }

    pub fn encode(&self, message: &[ExtElem]) -> Result<Vec<ExtElem>> {
        if message.len() != self.k {
            return Err(Error::DimensionMismatch(format!(
                "message of length {} for dimension {}",
                message.len(),
                self.k
            )));
        }
        let p = QPoly::from_coeffs(&self.ext, message.to_vec());
        Ok(self.g.iter().map(|x| p.eval(x)).collect())
    }

    /// Welch–Berlekamp style decoding up to rank t.
    ///
    /// Solves V(y_i) = N(g_i) with deg_q V ≤ t and deg_q N < k + t, then
    /// recovers f from N = V∘f.
    pub fn decode(&self, y: &[ExtElem]) -> Result<Decoded> {
        let n = self.n();
        let (k, t) = (self.k, self.t());
        if y.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "received word of length {} for length {n}",
                y.len()
            )));
        }
        let f = &self.ext;
        let fail = Error::Decode { radius: t };
        let cols = t + 1 + k + t;
        let mut sys = MatExt::zeros(f, n, cols);
        for i in 0..n {
            let mut yp = y[i].clone();
            for j in 0..=t {
                if j > 0 {
                    yp = f.frobenius1(&yp);
                }
                sys.set(i, j, yp.clone());
            }
            let mut gp = self.g[i].clone();
            for j in 0..k + t {
                if j > 0 {
                    gp = f.frobenius1(&gp);
                }
                sys.set(i, t + 1 + j, f.neg(&gp));
            }
        }
        let kernel = sys.null_space();
        // A nonzero N with V = 0 would vanish on n independent points with
        // degree below n, so every kernel vector has V ≠ 0.
        let sol = kernel
            .into_iter()
            .find(|v| v[..=t].iter().any(|c| !c.is_zero()))
            .ok_or(fail.clone())?;
        let v = QPoly::from_coeffs(f, sol[..=t].to_vec());
        let nn = QPoly::from_coeffs(f, sol[t + 1..].to_vec());
        let (fpoly, rem) = nn.divide_left_factor(&v)?;
        if !rem.is_zero() || fpoly.degree().is_some_and(|d| d >= k) {
            return Err(fail);
        }
        let mut message = fpoly.coeffs().to_vec();
        message.resize(k, f.zero());
        let codeword: Vec<ExtElem> = self.g.iter().map(|x| fpoly.eval(x)).collect();
        let error: Vec<ExtElem> = y.iter().zip(&codeword).map(|(a, b)| f.sub(a, b)).collect();
        if wrank(f, &error) > t {
            return Err(fail);
        }
        Ok(Decoded {
            message,
            codeword,
            error,
        })
    }

    /// The dual code, itself Gabidulin of dimension n−k.
    pub fn dual(&self) -> Result<GabidulinCode> {
        let (n, k) = (self.n(), self.k);
        if k == 0 || k == n {
            return Err(Error::InvalidParams("dual of a trivial code".into()));
        }
        let f = &self.ext;
        // h spans the kernel of the rows g^{[i]}, k−n+1 ≤ i ≤ k−1.
        let rows: Vec<Vec<ExtElem>> = (0..n - 1)
            .map(|s| {
                self.g
                    .iter()
                    .map(|x| {
                        if s + 1 >= n - k {
                            f.frobenius(x, s + 1 - (n - k))
                        } else {
                            f.frobenius_inv(x, n - k - 1 - s)
                        }
                    })
                    .collect()
            })
            .collect();
        let ker = MatExt::from_rows(f, rows)?.null_space();
        let h = ker.into_iter().next().ok_or(Error::Singular)?;
        GabidulinCode::new(f, n - k, h)
    }
}
