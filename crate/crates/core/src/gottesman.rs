//! Gottesman subgroups over GF(q) in `(L, M, rho)` form:
//! `S = { w(rho(a)) U_{La} V_{Ma} : a in GF(q)^r }`.
//!
//! Characters of `S` are indexed by `u in GF(q)^r` through `chi_u(s_a) =
//! w(u . a)`. An error `g = U_x V_y` acts on the character index of an
//! eigenvector by the shift `L^T y - M^T x`, which is what the forbidden set
//! collects.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::galois::{dot_raw, is_prime, FieldMatrix, FieldVector, PrimeField, RowReduction};
use crate::limits::Limits;
use crate::weyl::{WeylElement, WeylGroup};
use crate::{Error, Result};

/// A reason a spec fails to describe a Gottesman subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Shape(String),
    /// `L^T M` differs from its transpose at `(i, j)`.
    NotSymmetric { i: usize, j: usize },
    /// Basis elements `s_{e_i}` and `s_{e_j}` do not commute.
    NotAbelian { i: usize, j: usize },
    /// `a -> (La, Ma)` has rank below `r`.
    NotInjective { rank: usize, r: usize },
    /// `rho(v1 + v2) - rho(v1) - rho(v2) != v2^T L^T M v1` (as phases).
    Cocycle { v1: Vec<u32>, v2: Vec<u32> },
    /// A nontrivial scalar lies in `S`.
    Scalar { a: Vec<u32>, phase: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape(s) => write!(f, "shape: {s}"),
            Violation::NotSymmetric { i, j } => write!(f, "L^T M not symmetric at ({i}, {j})"),
            Violation::NotAbelian { i, j } => {
                write!(f, "generators {i} and {j} do not commute")
            }
            Violation::NotInjective { rank, r } => {
                write!(f, "a -> (La, Ma) has rank {rank} < {r}")
            }
            Violation::Cocycle { v1, v2 } => {
                write!(f, "phase table breaks closure on {v1:?} + {v2:?}")
            }
            Violation::Scalar { a, phase } => {
                write!(f, "element {a:?} is the scalar with phase exponent {phase}")
            }
        }
    }
}

/// `(L, M, D)` with `rho(a) = a^T D a` on canonical integer lifts, as a
/// phase exponent mod `P = 2q`.
#[derive(Debug, Clone)]
pub struct GottesmanSpec {
    field: PrimeField,
    n: usize,
    r: usize,
    l: FieldMatrix,
    m: FieldMatrix,
    d: Vec<Vec<u32>>,
    group: WeylGroup,
    lt: FieldMatrix,
    mt: FieldMatrix,
    image: RowReduction,
}

/// Serialized form of a [`GottesmanSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecDocument {
    pub q: u32,
    pub n: usize,
    pub r: usize,
    #[serde(rename = "L")]
    pub l: Vec<Vec<u32>>,
    #[serde(rename = "M")]
    pub m: Vec<Vec<u32>>,
    #[serde(rename = "D")]
    pub d: Vec<Vec<u32>>,
    pub phase_denominator: u32,
}

/// Minimum weight of a nonscalar centralizer element, or a lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purity {
    Exact(usize),
    AtLeast(usize),
}

impl Purity {
    pub fn is_pure(self, d: usize) -> bool {
        match self {
            Purity::Exact(w) => w >= d,
            Purity::AtLeast(w) => w >= d,
        }
    }
}

impl fmt::Display for Purity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Purity::Exact(w) => write!(f, "{w}"),
            Purity::AtLeast(w) => write!(f, ">= {w}"),
        }
    }
}

/// `F_d(S)`: character shifts produced by errors of weight below `d` that lie
/// outside the closure of `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenSet {
    pub d: usize,
    pub members: BTreeSet<FieldVector>,
}

impl ForbiddenSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, u: &FieldVector) -> bool {
        self.members.contains(u)
    }
}

impl GottesmanSpec {
    /// Builds a spec after shape checks only; call [`validate`](Self::validate)
    /// or [`ensure_valid`](Self::ensure_valid) before relying on group laws.
    pub fn new(l: FieldMatrix, m: FieldMatrix, d: Vec<Vec<i64>>) -> Result<Self> {
        let q = l.modulus();
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if m.modulus() != q {
            return Err(Error::ModulusMismatch(q, m.modulus()));
        }
        let (n, r) = (l.rows(), l.cols());
        if m.rows() != n || m.cols() != r {
            return Err(Error::InvalidSpec(vec![Violation::Shape(format!(
                "L is {n}x{r} but M is {}x{}",
                m.rows(),
                m.cols()
            ))]));
        }
        if d.len() != r || d.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidSpec(vec![Violation::Shape(format!(
                "phase table must be {r}x{r}"
            ))]));
        }
        let p = 2 * q as i64;
        let d = d
            .iter()
            .map(|row| row.iter().map(|&v| v.rem_euclid(p) as u32).collect())
            .collect();
        let field = PrimeField::new(q)?;
        let image = l.vstack(&m)?.row_reduce();
        Ok(GottesmanSpec {
            field,
            n,
            r,
            lt: l.transpose(),
            mt: m.transpose(),
            l,
            m,
            d,
            group: WeylGroup::cyclic(q, n)?,
            image,
        })
    }

    /// Spec with the phase table `D = (q + 1) (L^T M mod q)`, which closes the
    /// subgroup whenever `L^T M` is symmetric (for odd `q` it realizes
    /// `w(a^T L^T M a / 2)`; for `q = 2` it supplies the needed `i` phases).
    pub fn with_synthesized_phase(l: FieldMatrix, m: FieldMatrix) -> Result<Self> {
        let q = l.modulus() as i64;
        let ltm = l.transpose().mul(&m)?;
        let d = ltm
            .to_rows()
            .into_iter()
            .map(|row| row.into_iter().map(|v| (q + 1) * v as i64).collect())
            .collect();
        Self::new(l, m, d)
    }

    pub fn from_document(doc: &SpecDocument) -> Result<Self> {
        if doc.phase_denominator != 2 * doc.q {
            return Err(Error::InvalidArgument(format!(
                "phase_denominator {} must equal 2q = {}",
                doc.phase_denominator,
                2 * doc.q
            )));
        }
        let field = PrimeField::new(doc.q)?;
        let to_i64 = |rows: &[Vec<u32>]| -> Vec<Vec<i64>> {
            rows.iter()
                .map(|r| r.iter().map(|&v| v as i64).collect())
                .collect()
        };
        let l = FieldMatrix::from_rows(field, doc.r, &to_i64(&doc.l))?;
        let m = FieldMatrix::from_rows(field, doc.r, &to_i64(&doc.m))?;
        if l.rows() != doc.n {
            return Err(Error::DimensionMismatch {
                expected: doc.n,
                found: l.rows(),
            });
        }
        let spec = Self::new(l, m, to_i64(&doc.d))?;
        if doc.d.iter().flatten().any(|&v| v >= doc.phase_denominator) {
            return Err(Error::InvalidArgument(
                "phase table entries must be reduced mod phase_denominator".into(),
            ));
        }
        Ok(spec)
    }

    pub fn to_document(&self) -> SpecDocument {
        SpecDocument {
            q: self.q(),
            n: self.n,
            r: self.r,
            l: self.l.to_rows(),
            m: self.m.to_rows(),
            d: self.d.clone(),
            phase_denominator: self.phase_denominator(),
        }
    }

    pub fn q(&self) -> u32 {
        self.field.modulus()
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn l(&self) -> &FieldMatrix {
        &self.l
    }

    pub fn m(&self) -> &FieldMatrix {
        &self.m
    }

    pub fn phase_table(&self) -> &[Vec<u32>] {
        &self.d
    }

    pub fn group(&self) -> &WeylGroup {
        &self.group
    }

    pub fn phase_denominator(&self) -> u32 {
        2 * self.q()
    }

    /// `#S = q^r == q^n`.
    pub fn is_maximal(&self) -> bool {
        self.r == self.n
    }

    /// `rho(a)` for a reduced vector `a`.
    pub(crate) fn rho_raw(&self, a: &[u32]) -> u32 {
        let p = self.phase_denominator() as u64;
        let mut acc = 0u64;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &aj) in a.iter().enumerate() {
                if aj != 0 {
                    acc = (acc + ai as u64 * self.d[i][j] as u64 % p * aj as u64) % p;
                }
            }
        }
        acc as u32
    }

    pub(crate) fn element_raw(&self, a: &[u32]) -> WeylElement {
        WeylElement {
            phase: self.rho_raw(a),
            a: self.l.mul_raw(a),
            b: self.m.mul_raw(a),
        }
    }

    /// `s_a = w(rho(a)) U_{La} V_{Ma}`.
    pub fn element(&self, a: &FieldVector) -> Result<WeylElement> {
        self.check_index(a)?;
        Ok(self.element_raw(a.entries()))
    }

    /// `s_{e_1}, ..., s_{e_r}`.
    pub fn generators(&self) -> Vec<WeylElement> {
        (0..self.r)
            .map(|i| {
                let mut e = vec![0; self.r];
                e[i] = 1;
                self.element_raw(&e)
            })
            .collect()
    }

    fn check_index(&self, a: &FieldVector) -> Result<()> {
        if a.modulus() != self.q() {
            return Err(Error::ModulusMismatch(self.q(), a.modulus()));
        }
        if a.len() != self.r {
            return Err(Error::DimensionMismatch {
                expected: self.r,
                found: a.len(),
            });
        }
        Ok(())
    }

    /// Phase exponent (mod `P`) of `chi_u(s_a) = w(u . a)`.
    pub fn character(&self, u: &FieldVector, a: &FieldVector) -> Result<u32> {
        self.check_index(u)?;
        self.check_index(a)?;
        Ok(self.character_raw(u.entries(), a.entries()))
    }

    pub(crate) fn character_raw(&self, u: &[u32], a: &[u32]) -> u32 {
        2 * dot_raw(self.field, u, a)
    }

    /// The `a` with `(La, Ma) = (x, y)`, if any.
    pub(crate) fn preimage_raw(&self, x: &[u32], y: &[u32]) -> Option<Vec<u32>> {
        let mut xy = Vec::with_capacity(2 * self.n);
        xy.extend_from_slice(x);
        xy.extend_from_slice(y);
        self.image.solve_raw(&xy)
    }

    /// `L^T y - M^T x`, the character shift caused by `U_x V_y`.
    pub(crate) fn shift_raw(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let f = self.field;
        self.lt
            .mul_raw(y)
            .into_iter()
            .zip(self.mt.mul_raw(x))
            .map(|(a, b)| f.sub(a, b))
            .collect()
    }

    /// Every violated Gottesman-subgroup condition (empty when valid).
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let (r, q) = (self.r, self.q());
        let ltm = self.lt.mul(&self.m).expect("shapes checked at construction");
        for i in 0..r {
            for j in i + 1..r {
                if ltm.get(i, j) != ltm.get(j, i) {
                    out.push(Violation::NotSymmetric { i, j });
                }
            }
        }
        let gens = self.generators();
        for i in 0..r {
            for j in i + 1..r {
                if self.group.gamma_unchecked(&gens[i], &gens[j]) != 0 {
                    out.push(Violation::NotAbelian { i, j });
                }
            }
        }
        let rank = self.image.rank();
        if rank < r {
            out.push(Violation::NotInjective { rank, r });
        }

        let unit = |i: usize, k: u32| {
            let mut e = vec![0u32; r];
            e[i] = k;
            e
        };
        let mut pairs = Vec::new();
        for i in 0..r {
            for j in i + 1..r {
                pairs.push((unit(i, 1), unit(j, 1)));
            }
            for k in 1..q {
                pairs.push((unit(i, 1), unit(i, k)));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..64.min(16 * r.max(1)) {
            let v1: Vec<u32> = (0..r).map(|_| rng.random_range(0..q)).collect();
            let v2: Vec<u32> = (0..r).map(|_| rng.random_range(0..q)).collect();
            pairs.push((v1, v2));
        }
        for (v1, v2) in pairs {
            if !self.cocycle_holds(&v1, &v2) {
                out.push(Violation::Cocycle { v1, v2 });
            }
        }

        // With injectivity and closure, s_a is scalar only for a = 0; still
        // check that every generator has order q.
        if out.is_empty() {
            for (i, g) in gens.iter().enumerate() {
                let mut acc = self.group.identity();
                for _ in 0..q {
                    acc = self.group.compose_unchecked(&acc, g);
                }
                if acc.phase != 0 {
                    out.push(Violation::Scalar {
                        a: unit(i, q),
                        phase: acc.phase,
                    });
                }
            }
        }
        out
    }

    fn cocycle_holds(&self, v1: &[u32], v2: &[u32]) -> bool {
        let s1 = self.element_raw(v1);
        let s2 = self.element_raw(v2);
        let sum: Vec<u32> = v1.iter().zip(v2).map(|(&a, &b)| self.field.add(a, b)).collect();
        self.group.compose_unchecked(&s1, &s2) == self.element_raw(&sum)
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSpec(v))
        }
    }

    /// Minimum weight of a nonscalar element of the centralizer `Z(S)` when it
    /// is below `cutoff`, otherwise `AtLeast(cutoff)`.
    pub fn purity_radius(&self, cutoff: usize, limits: &Limits) -> Result<Purity> {
        if cutoff == 0 {
            return Ok(Purity::AtLeast(0));
        }
        for g in self.group.enumerate_bounded(cutoff - 1, limits)? {
            if self.shift_raw(&g.a, &g.b).iter().all(|&v| v == 0) {
                return Ok(Purity::Exact(self.group.weight(&g)));
            }
        }
        Ok(Purity::AtLeast(cutoff))
    }

    /// `F_d(S) = { L^T y - M^T x : 1 <= wt(x, y) < d, (x, y) not in the image
    /// of a -> (La, Ma) }`.
    pub fn forbidden_set(&self, d: usize, limits: &Limits) -> Result<ForbiddenSet> {
        let mut members = BTreeSet::new();
        if d > 0 {
            for g in self.group.enumerate_bounded(d - 1, limits)? {
                if self.preimage_raw(&g.a, &g.b).is_some() {
                    continue;
                }
                let u = self.shift_raw(&g.a, &g.b);
                members.insert(FieldVector::from_reduced(self.field, u)?);
            }
        }
        Ok(ForbiddenSet { d, members })
    }

    /// The `(a, s_a)` with `1 <= wt(s_a) <= w`, in error enumeration order.
    pub fn low_weight_members(
        &self,
        w: usize,
        limits: &Limits,
    ) -> Result<Vec<(FieldVector, WeylElement)>> {
        let mut out = Vec::new();
        for g in self.group.enumerate_bounded(w, limits)? {
            if let Some(a) = self.preimage_raw(&g.a, &g.b) {
                let el = self.element_raw(&a);
                out.push((FieldVector::from_reduced(self.field, a)?, el));
            }
        }
        Ok(out)
    }
}
