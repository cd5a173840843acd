//! Maximal subgroups in sum-zero form, the shape the encoder handles:
//!
//! `S = { s_{a,b} = w(a^T D a) U_a V_{Ta + b} : a in C, b in C^perp }`
//!
//! with `C = { a : sum a_i = 0 }`, `C^perp = span(1)`, `D` upper triangular
//! and `T = D + D^T`. Characters are `chi_{c,d}(s_{a,b}) = w(a.c + b.d)`, and
//! the common eigenvector for `chi_{c,d}` is
//!
//! `phi_{c,d} = q^{-(n-1)/2} sum_{x in C} w(Q(x + d) - x.c) |x + d>`
//!
//! with `Q(y) = y^T D y`.

use crate::galois::{linear_solve, FieldMatrix, FieldVector, PrimeField};
use crate::gottesman::GottesmanSpec;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodableForm {
    upper: FieldMatrix,
}

impl EncodableForm {
    /// `upper` must be square and upper triangular, with `n >= 1`.
    pub fn new(upper: FieldMatrix) -> Result<Self> {
        let n = upper.rows();
        if n == 0 || upper.cols() != n {
            return Err(Error::NotEncodable(format!(
                "phase matrix must be square and nonempty, got {}x{}",
                n,
                upper.cols()
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if upper.get(i, j) != 0 {
                    return Err(Error::NotEncodable(format!(
                        "phase matrix has nonzero entry below the diagonal at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(EncodableForm { upper })
    }

    /// The form whose `T = D + D^T` equals the symmetric matrix `sym`.
    /// Over GF(2) the diagonal of `sym` must vanish.
    pub fn from_symmetric(sym: &FieldMatrix) -> Result<Self> {
        if !sym.is_symmetric() {
            return Err(Error::NotEncodable("matrix is not symmetric".into()));
        }
        let f = sym.field();
        let n = sym.rows();
        let mut upper = FieldMatrix::zeros(f, n, n);
        for i in 0..n {
            let diag = sym.get(i, i);
            if diag != 0 {
                let half = f.inv(2 % f.modulus()).ok_or_else(|| {
                    Error::NotEncodable("nonzero diagonal over GF(2)".into())
                })?;
                upper.set(i, i, f.mul(diag, half) as i64);
            }
            for j in i + 1..n {
                upper.set(i, j, sym.get(i, j) as i64);
            }
        }
        Self::new(upper)
    }

    pub fn field(&self) -> PrimeField {
        self.upper.field()
    }

    pub fn q(&self) -> u32 {
        self.upper.modulus()
    }

    pub fn n(&self) -> usize {
        self.upper.rows()
    }

    pub fn upper(&self) -> &FieldMatrix {
        &self.upper
    }

    /// `T = D + D^T`.
    pub fn symmetric(&self) -> FieldMatrix {
        self.upper
            .add(&self.upper.transpose())
            .expect("square matrix")
    }

    /// `Q(y) = y^T D y mod q` for a reduced word.
    pub fn quadratic(&self, y: &[u32]) -> u32 {
        let f = self.field();
        let dy = self.upper.mul_raw(y);
        crate::galois::dot_raw(f, y, &dy)
    }

    /// The spec with `L` having columns `e_i - e_n` (`i < n`) then `0`, and
    /// `M = T L + J`, so that `s_v` has `a = Lv in C` and
    /// `b = T a + (sum v) 1`.
    pub fn to_spec(&self) -> Result<GottesmanSpec> {
        let f = self.field();
        let n = self.n();
        let mut l = FieldMatrix::zeros(f, n, n);
        for i in 0..n - 1 {
            l.set(i, i, 1);
            l.set(n - 1, i, -1);
        }
        let t = self.symmetric();
        let mut m = t.mul(&l)?;
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, m.get(i, j) as i64 + 1);
            }
        }
        // rho(v) = 2 Q(Lv) in units of 2 pi / 2q
        let ldl = l.transpose().mul(&self.upper)?.mul(&l)?;
        let d = ldl
            .to_rows()
            .into_iter()
            .map(|row| row.into_iter().map(|v| 2 * v as i64).collect())
            .collect();
        GottesmanSpec::new(l, m, d)
    }

    /// Whether `spec` describes exactly this form's subgroup: maximal, and
    /// every generator is `s_{a,b}` with `a in C`, `b in C^perp` and phase
    /// `w(a^T D a)`.
    pub fn matches(&self, spec: &GottesmanSpec) -> bool {
        if spec.q() != self.q() || spec.n() != self.n() || spec.r() != self.n() {
            return false;
        }
        if !spec.validate().is_empty() {
            return false;
        }
        let f = self.field();
        let t = self.symmetric();
        spec.generators().iter().all(|g| {
            let sum = g.a.iter().fold(0, |acc, &v| f.add(acc, v));
            let ta = t.mul_raw(&g.a);
            let rest: Vec<u32> = g.b.iter().zip(&ta).map(|(&b, &x)| f.sub(b, x)).collect();
            sum == 0
                && rest.iter().all(|&v| v == rest[0])
                && g.phase == 2 * self.quadratic(&g.a)
        })
    }

    /// Message `(c, d)` with `c_n = 0` and `d = delta e_n` whose character
    /// `chi_{c,d}` is the spec character `chi_u`.
    pub fn message_for(
        &self,
        spec: &GottesmanSpec,
        u: &FieldVector,
    ) -> Result<(FieldVector, FieldVector)> {
        if !self.matches(spec) {
            return Err(Error::NotEncodable(
                "spec does not describe this sum-zero form".into(),
            ));
        }
        let f = self.field();
        let n = self.n();
        if u.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: u.len(),
            });
        }
        // u_i = a_i . c + b_i . d for every generator i
        let t = self.symmetric();
        let rows: Vec<Vec<i64>> = spec
            .generators()
            .iter()
            .map(|g| {
                let ta = t.mul_raw(&g.a);
                g.a.iter()
                    .map(|&v| v as i64)
                    .chain(g.b.iter().zip(&ta).map(|(&b, &x)| f.sub(b, x) as i64))
                    .collect()
            })
            .collect();
        let sys = FieldMatrix::from_rows(f, 2 * n, &rows)?;
        let sol = linear_solve(&sys, u)?
            .ok_or_else(|| Error::NotEncodable("character has no message preimage".into()))?;
        let x = sol.particular.entries();
        let cn = x[n - 1];
        let c = FieldVector::new(f, x[..n].iter().map(|&v| f.sub(v, cn) as i64));
        let delta = x[n..].iter().fold(0, |acc, &v| f.add(acc, v));
        let mut d = FieldVector::zeros(f, n);
        d.set(n - 1, delta as i64);
        Ok((c, d))
    }
}
