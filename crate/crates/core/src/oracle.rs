//! Explicit-state verification.
//!
//! Everything here works on amplitudes over the computational basis of
//! `(C^q)^{(x) n}` and shares nothing with the algebraic distance check
//! beyond the definition of the subgroup elements `s_a`. Basis words are
//! stored by index `sum_i x_i q^i`.
//!
//! Codewords come from the projections `P_u = (1/#S) sum_a conj(chi_u(s_a)) s_a`
//! applied to basis words. The support of `P_u |x>` is `x + im(L)`, so one
//! representative per coset of `im(L)` gives an orthogonal basis of the range
//! of `P_u` (rank one for maximal specs).

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encodable::EncodableForm;
use crate::fourier_code::FourierDescription;
use crate::galois::FieldVector;
use crate::gottesman::GottesmanSpec;
use crate::limits::Limits;
use crate::weyl::{WeylElement, WeylGroup};
use crate::{Error, Result};

const PRUNE: f64 = 1e-14;
pub const KL_TOLERANCE: f64 = 1e-9;
pub const ORTHONORMAL_TOLERANCE: f64 = 1e-10;

/// `e^{2 pi i k / p}` with exact values at multiples of a quarter turn.
pub(crate) fn root(k: u32, p: u32) -> Complex64 {
    let k = k % p;
    if (4 * k).is_multiple_of(p) {
        return match 4 * k / p {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    crate::weyl::root_of_unity(k, p)
}

pub(crate) fn roots(p: u32) -> Vec<Complex64> {
    (0..p).map(|k| root(k, p)).collect()
}

pub(crate) fn state_dim(q: u32, n: usize) -> Result<u64> {
    (q as u64).checked_pow(n as u32).ok_or_else(|| {
        Error::InvalidArgument(format!("{q}^{n} basis words do not fit in 64-bit indices"))
    })
}

/// A state vector over `GF(q)^n` with only nonzero amplitudes stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseState {
    q: u32,
    n: usize,
    amps: BTreeMap<u64, Complex64>,
    norm_sqr: f64,
}

impl SparseState {
    pub fn zero(q: u32, n: usize) -> Result<Self> {
        state_dim(q, n)?;
        Ok(SparseState {
            q,
            n,
            amps: BTreeMap::new(),
            norm_sqr: 0.0,
        })
    }

    /// `|x>` for a word of reduced letters.
    pub fn basis(q: u32, n: usize, word: &[u32]) -> Result<Self> {
        Self::from_amplitudes(q, n, [(word.to_vec(), Complex64::new(1.0, 0.0))])
    }

    /// Sums the given `(word, amplitude)` terms.
    pub fn from_amplitudes<I>(q: u32, n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Complex64)>,
    {
        state_dim(q, n)?;
        let mut amps = BTreeMap::new();
        for (w, c) in terms {
            let idx = word_index_checked(q, n, &w)?;
            *amps.entry(idx).or_insert_with(Complex64::zero) += c;
        }
        Ok(Self::from_map(q, n, amps))
    }

    pub fn from_dense(q: u32, n: usize, amps: &[Complex64]) -> Result<Self> {
        let dim = state_dim(q, n)?;
        if amps.len() as u64 != dim {
            return Err(Error::DimensionMismatch {
                expected: dim as usize,
                found: amps.len(),
            });
        }
        Ok(Self::from_map(
            q,
            n,
            amps.iter().enumerate().map(|(i, &c)| (i as u64, c)).collect(),
        ))
    }

    pub(crate) fn from_map(q: u32, n: usize, mut amps: BTreeMap<u64, Complex64>) -> Self {
        amps.retain(|_, c| c.norm() >= PRUNE);
        let norm_sqr = amps.values().map(|c| c.norm_sqr()).sum();
        SparseState {
            q,
            n,
            amps,
            norm_sqr,
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored (nonzero) amplitudes.
    pub fn support_len(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.norm_sqr
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr.sqrt()
    }

    pub fn word(&self, index: u64) -> Vec<u32> {
        let mut w = Vec::with_capacity(self.n);
        let mut i = index;
        for _ in 0..self.n {
            w.push((i % self.q as u64) as u32);
            i /= self.q as u64;
        }
        w
    }

    pub fn index(&self, word: &[u32]) -> Result<u64> {
        word_index_checked(self.q, self.n, word)
    }

    pub fn amplitude(&self, word: &[u32]) -> Complex64 {
        self.index(word)
            .ok()
            .and_then(|i| self.amps.get(&i).copied())
            .unwrap_or_else(Complex64::zero)
    }

    /// `(index, amplitude)` in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.amps.iter().map(|(&i, &c)| (i, c))
    }

    pub fn scaled(&self, c: Complex64) -> SparseState {
        Self::from_map(self.q, self.n, self.amps.iter().map(|(&i, &a)| (i, a * c)).collect())
    }

    pub fn normalized(&self) -> Result<SparseState> {
        if self.norm_sqr < PRUNE * PRUNE {
            return Err(Error::InvalidArgument("cannot normalize the zero state".into()));
        }
        Ok(self.scaled(Complex64::new(1.0 / self.norm(), 0.0)))
    }

    /// `<self | other>`.
    pub fn inner(&self, other: &SparseState) -> Result<Complex64> {
        self.check_same(other)?;
        let (small, large, flip) = if self.amps.len() <= other.amps.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Complex64::zero();
        for (i, a) in &small.amps {
            if let Some(b) = large.amps.get(i) {
                acc += if flip { b.conj() * a } else { a.conj() * b };
            }
        }
        Ok(acc)
    }

    /// `|<self | other>|` for unit vectors.
    pub fn fidelity(&self, other: &SparseState) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    /// Dense amplitude vector, limited to `cap` entries.
    pub fn to_dense(&self, cap: u64) -> Result<Vec<Complex64>> {
        let dim = state_dim(self.q, self.n)?;
        if dim > cap {
            return Err(Error::CapExceeded {
                what: "dense state dimension",
                required: dim.to_string(),
                cap,
            });
        }
        let mut v = vec![Complex64::zero(); dim as usize];
        for (&i, &c) in &self.amps {
            v[i as usize] = c;
        }
        Ok(v)
    }

    pub(crate) fn get(&self, index: u64) -> Option<Complex64> {
        self.amps.get(&index).copied()
    }

    pub(crate) fn check_same(&self, other: &SparseState) -> Result<()> {
        if self.q != other.q {
            return Err(Error::ModulusMismatch(self.q, other.q));
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }
}

fn word_index_checked(q: u32, n: usize, word: &[u32]) -> Result<u64> {
    if word.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: word.len(),
        });
    }
    let mut idx = 0u64;
    for &x in word.iter().rev() {
        if x >= q {
            return Err(Error::InvalidArgument(format!("letter {x} is not reduced mod {q}")));
        }
        idx = idx * q as u64 + x as u64;
    }
    Ok(idx)
}

/// `w^phase U_a V_b` acting on basis indices: `|x> -> w(phase + b.x) |x + a>`,
/// phases in units of `2 pi / 2q`.
#[derive(Debug, Clone)]
pub(crate) struct Action {
    q: u32,
    phase: u32,
    a: Vec<u32>,
    b: Vec<u32>,
    masks: Option<(u64, u64)>,
}

impl Action {
    pub(crate) fn new(q: u32, n: usize, g: &WeylElement) -> Result<Self> {
        let p = 2 * q;
        if g.a.len() != n || g.b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.a.len().max(g.b.len()),
            });
        }
        if g.phase >= p || g.a.iter().chain(&g.b).any(|&v| v >= q) {
            return Err(Error::InvalidArgument(format!(
                "error operator is not reduced for q = {q}"
            )));
        }
        let masks = (q == 2 && n < 64).then(|| {
            let m = |w: &[u32]| w.iter().rev().fold(0u64, |acc, &v| (acc << 1) | v as u64);
            (m(&g.a), m(&g.b))
        });
        Ok(Action {
            q,
            phase: g.phase,
            a: g.a.clone(),
            b: g.b.clone(),
            masks,
        })
    }

    pub(crate) fn map(&self, x: u64) -> (u64, u32) {
        let p = 2 * self.q;
        if let Some((am, bm)) = self.masks {
            let sign = ((bm & x).count_ones() & 1) * 2;
            return (x ^ am, (self.phase + sign) % p);
        }
        let q = self.q as u64;
        let mut rest = x;
        let mut out = 0u64;
        let mut scale = 1u64;
        let mut dot = 0u64;
        for (&ai, &bi) in self.a.iter().zip(&self.b) {
            let xi = rest % q;
            rest /= q;
            dot += bi as u64 * xi;
            out += ((xi + ai as u64) % q) * scale;
            scale *= q;
        }
        (out, (self.phase + 2 * (dot % q) as u32) % p)
    }
}

/// `g |psi>` for `g = w^phase U_a V_b` with `U_a |x> = |x + a>` and
/// `V_b |x> = w(b.x) |x>`.
pub fn apply(g: &WeylElement, state: &SparseState) -> Result<SparseState> {
    let act = Action::new(state.q, state.n, g)?;
    let table = roots(2 * state.q);
    let amps = state
        .amps
        .iter()
        .map(|(&x, &c)| {
            let (y, k) = act.map(x);
            (y, c * table[k as usize])
        })
        .collect();
    Ok(SparseState {
        q: state.q,
        n: state.n,
        amps,
        norm_sqr: state.norm_sqr,
    })
}

/// One basis vector of the code: a unit vector in the range of `P_u`.
#[derive(Debug, Clone)]
pub struct Codeword {
    pub u: FieldVector,
    pub state: SparseState,
}

/// All `(rho(a), La, Ma)` of the subgroup, with `La` as a basis index.
struct Elements {
    q: u32,
    n: usize,
    list: Vec<(Vec<u32>, u32, u64, Vec<u32>)>,
}

impl Elements {
    fn new(spec: &GottesmanSpec, limits: &Limits) -> Result<Self> {
        let size = BigUint::from(spec.q()).pow(spec.r() as u32);
        let size = Limits::check("subgroup size q^r", &size, limits.max_group)?;
        state_dim(spec.q(), spec.n())?;
        let index_group = WeylGroup::cyclic(spec.q(), spec.r())?;
        let list = (0..size)
            .map(|ai| {
                let a = index_group.word_from_index(ai);
                let s = spec.element_raw(&a);
                let la = word_index_checked(spec.q(), spec.n(), &s.a).expect("reduced");
                (a, s.phase, la, s.b)
            })
            .collect();
        Ok(Elements {
            q: spec.q(),
            n: spec.n(),
            list,
        })
    }

    /// `P_u |x>`, unnormalized.
    fn project(&self, u: &[u32], x: u64) -> SparseState {
        let q = self.q;
        let p = 2 * q;
        let xw = digits(q, self.n, x);
        let table = roots(p);
        let mut acc: HashMap<u64, Vec<u64>> = HashMap::new();
        for (a, rho, la, mb) in &self.list {
            let ua = dot_mod(q, u, a);
            let mx = dot_mod(q, mb, &xw);
            let k = (p - 2 * ua + rho + 2 * mx) % p;
            let target = add_index(q, self.n, x, *la);
            acc.entry(target).or_insert_with(|| vec![0; p as usize])[k as usize] += 1;
        }
        let inv = 1.0 / self.list.len() as f64;
        let amps = acc
            .into_iter()
            .map(|(y, counts)| {
                let c: Complex64 = counts
                    .iter()
                    .zip(&table)
                    .map(|(&m, &w)| w * m as f64)
                    .sum();
                (y, c * inv)
            })
            .collect();
        SparseState::from_map(q, self.n, amps)
    }
}

fn digits(q: u32, n: usize, mut x: u64) -> Vec<u32> {
    (0..n)
        .map(|_| {
            let d = (x % q as u64) as u32;
            x /= q as u64;
            d
        })
        .collect()
}

fn add_index(q: u32, n: usize, x: u64, y: u64) -> u64 {
    if q == 2 {
        return x ^ y;
    }
    let (q, mut x, mut y) = (q as u64, x, y);
    let mut out = 0;
    let mut scale = 1;
    for _ in 0..n {
        out += ((x % q + y % q) % q) * scale;
        x /= q;
        y /= q;
        scale *= q;
    }
    out
}

fn dot_mod(q: u32, x: &[u32], y: &[u32]) -> u32 {
    (x.iter()
        .zip(y)
        .map(|(&a, &b)| a as u64 * b as u64)
        .sum::<u64>()
        % q as u64) as u32
}

/// Representatives of the cosets of `im(L)`: words supported on the
/// non-pivot coordinates of the row-reduced `L^T`.
fn coset_representatives(spec: &GottesmanSpec, limits: &Limits) -> Result<Vec<u64>> {
    let rr = spec.l().transpose().row_reduce();
    let free: Vec<usize> = (0..spec.n()).filter(|j| !rr.pivots().contains(j)).collect();
    let count = BigUint::from(spec.q()).pow(free.len() as u32);
    let count = Limits::check("cosets of im(L)", &count, limits.max_state_dim)?;
    let q = spec.q() as u64;
    Ok((0..count)
        .map(|mut c| {
            let mut idx = 0u64;
            for &j in &free {
                idx += (c % q) * q.pow(j as u32);
                c /= q;
            }
            idx
        })
        .collect())
}

fn eigenspace_basis(
    elements: &Elements,
    reps: &[u64],
    u: &FieldVector,
) -> Vec<SparseState> {
    reps.iter()
        .filter_map(|&x| {
            let v = elements.project(u.entries(), x);
            // a nonzero P_u|x> has squared norm at least 1/#S
            (v.norm_sqr() * elements.list.len() as f64 > 0.5)
                .then(|| v.normalized().expect("nonzero"))
        })
        .collect()
}

/// The codeword `phi_u` of a maximal spec.
pub fn codeword(b: &FourierDescription, u: &FieldVector, limits: &Limits) -> Result<SparseState> {
    let spec = b.spec();
    if !spec.is_maximal() {
        return Err(Error::InvalidArgument(
            "single codewords exist only for maximal specs; use code_basis".into(),
        ));
    }
    if !b.members().contains(u) {
        return Err(Error::InvalidArgument("u is not a member of B".into()));
    }
    let elements = Elements::new(spec, limits)?;
    let reps = coset_representatives(spec, limits)?;
    eigenspace_basis(&elements, &reps, u)
        .into_iter()
        .next()
        .ok_or_else(|| Error::ZeroProjection(u.entries().to_vec()))
}

/// An orthonormal basis of the code: for each `u in B` (in order), an
/// orthonormal basis of the range of `P_u`.
pub fn code_basis(b: &FourierDescription, limits: &Limits) -> Result<Vec<Codeword>> {
    let spec = b.spec();
    let elements = Elements::new(spec, limits)?;
    let reps = coset_representatives(spec, limits)?;
    let work = BigUint::from(reps.len()) * elements.list.len() * b.len();
    Limits::check("projection terms", &work, limits.max_errors.max(limits.max_state_dim))?;
    let members: Vec<&FieldVector> = b.members().iter().collect();
    let per_u: Vec<Vec<SparseState>> = members
        .par_iter()
        .map(|u| eigenspace_basis(&elements, &reps, u))
        .collect();
    let mut out = Vec::new();
    for (u, states) in members.into_iter().zip(per_u) {
        if states.is_empty() {
            return Err(Error::ZeroProjection(u.entries().to_vec()));
        }
        out.extend(states.into_iter().map(|state| Codeword {
            u: u.clone(),
            state,
        }));
    }
    Ok(out)
}

/// `phi_{c,d} = q^{-(n-1)/2} sum_{x in C} w(Q(x + d) - x.c) |x + d>`, with
/// `w = e^{2 pi i / q}` and `C` the sum-zero words.
pub fn closed_form_codeword(
    form: &EncodableForm,
    c: &FieldVector,
    d: &FieldVector,
    limits: &Limits,
) -> Result<SparseState> {
    let q = form.q();
    let n = form.n();
    for v in [c, d] {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.len(),
            });
        }
        if v.modulus() != q {
            return Err(Error::ModulusMismatch(q, v.modulus()));
        }
    }
    let count = BigUint::from(q).pow(n as u32 - 1);
    let count = Limits::check("sum-zero words", &count, limits.max_state_dim)?;
    let scale = 1.0 / (count as f64).sqrt();
    let terms = (0..count).map(|i| {
        let mut x = digits(q, n - 1, i);
        let s = x.iter().map(|&v| v as u64).sum::<u64>() % q as u64;
        x.push(((q as u64 - s) % q as u64) as u32);
        let y: Vec<u32> = x
            .iter()
            .zip(d.entries())
            .map(|(&a, &b)| (a + b) % q)
            .collect();
        let k = (form.quadratic(&y) + q - dot_mod(q, &x, c.entries())) % q;
        (y, root(k, q) * scale)
    });
    SparseState::from_amplitudes(q, n, terms)
}

/// First violation of the Knill-Laflamme conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KlFailure {
    pub error: WeylElement,
    /// Basis positions of the offending pair (`bra`, `ket`) and their labels.
    pub i: usize,
    pub j: usize,
    pub u: Vec<u32>,
    pub v: Vec<u32>,
    pub value: [f64; 2],
    pub expected: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KlReport {
    pub pass: bool,
    pub d: usize,
    pub errors_checked: usize,
    pub codewords: usize,
    pub pairs: usize,
    /// Largest deviation seen over all checked entries.
    pub max_deviation: f64,
    pub failure: Option<KlFailure>,
}

enum Lookup {
    Dense(Vec<Complex64>),
    Sparse(HashMap<u64, Complex64>),
}

impl Lookup {
    fn get(&self, i: u64) -> Complex64 {
        match self {
            Lookup::Dense(v) => v[i as usize],
            Lookup::Sparse(m) => m.get(&i).copied().unwrap_or_else(Complex64::zero),
        }
    }
}

/// Checks `<phi_i | g | phi_j> = c(g) delta_ij` for every phase-free error
/// `g` with `1 <= wt(g) <= d - 1`, on the orthonormal basis from
/// [`code_basis`].
pub fn kl_check(b: &FourierDescription, d: usize, limits: &Limits) -> Result<KlReport> {
    let basis = code_basis(b, limits)?;
    kl_check_basis(&basis, d, limits)
}

/// [`kl_check`] on an explicit orthonormal family of states.
pub fn kl_check_basis(basis: &[Codeword], d: usize, limits: &Limits) -> Result<KlReport> {
    let first = basis
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty codeword list".into()))?;
    let (q, n) = (first.state.q, first.state.n);
    for c in basis {
        first.state.check_same(&c.state)?;
    }
    let group = WeylGroup::cyclic(q, n)?;
    let errors: Vec<WeylElement> = group
        .enumerate_bounded(d.saturating_sub(1), limits)?
        .collect();
    let dim = state_dim(q, n)?;
    let dense = dim <= limits.max_state_dim && dim.saturating_mul(basis.len() as u64) <= 1 << 26;
    let lookups: Vec<Lookup> = basis
        .iter()
        .map(|c| {
            if dense {
                Lookup::Dense(c.state.to_dense(dim).expect("within cap"))
            } else {
                Lookup::Sparse(c.state.amps.iter().map(|(&i, &a)| (i, a)).collect())
            }
        })
        .collect();
    let table = roots(2 * q);
    let k = basis.len();

    let results: Vec<(f64, Option<KlFailure>)> = errors
        .par_iter()
        .map(|g| {
            let act = Action::new(q, n, g).expect("enumerated errors are reduced");
            let mut m = vec![Complex64::zero(); k * k];
            for (j, cj) in basis.iter().enumerate() {
                for (&x, &amp) in &cj.state.amps {
                    let (y, ph) = act.map(x);
                    let moved = amp * table[ph as usize];
                    for (i, li) in lookups.iter().enumerate() {
                        let bra = li.get(y);
                        if bra != Complex64::zero() {
                            m[i * k + j] += bra.conj() * moved;
                        }
                    }
                }
            }
            let expected = m[0];
            let mut worst = 0.0f64;
            let mut failure = None;
            for i in 0..k {
                for j in 0..k {
                    let target = if i == j { expected } else { Complex64::zero() };
                    let dev = (m[i * k + j] - target).norm();
                    worst = worst.max(dev);
                    if dev > KL_TOLERANCE && failure.is_none() {
                        failure = Some(KlFailure {
                            error: g.clone(),
                            i,
                            j,
                            u: basis[i].u.entries().to_vec(),
                            v: basis[j].u.entries().to_vec(),
                            value: [m[i * k + j].re, m[i * k + j].im],
                            expected: [target.re, target.im],
                        });
                    }
                }
            }
            (worst, failure)
        })
        .collect();

    let max_deviation = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let failure = results.into_iter().find_map(|r| r.1);
    Ok(KlReport {
        pass: failure.is_none(),
        d,
        errors_checked: errors.len(),
        codewords: k,
        pairs: k * k,
        max_deviation,
        failure,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthonormalityReport {
    pub pass: bool,
    pub max_deviation: f64,
    /// First pair (row-major) off by more than the tolerance.
    pub pair: Option<(usize, usize)>,
}

/// Gram matrix of the states against the identity.
pub fn orthonormality_check(states: &[SparseState]) -> Result<OrthonormalityReport> {
    let mut worst = 0.0f64;
    let mut pair = None;
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate() {
            let g = a.inner(b)?;
            let target = if i == j { 1.0 } else { 0.0 };
            let dev = (g - target).norm();
            worst = worst.max(dev);
            if dev > ORTHONORMAL_TOLERANCE && pair.is_none() {
                pair = Some((i, j));
            }
        }
    }
    Ok(OrthonormalityReport {
        pass: pair.is_none(),
        max_deviation: worst,
        pair,
    })
}

/// `Tr T` for `T = sum_a T_a s_a`, summing the diagonal of every `s_a`
/// over all basis words. Limited to `#S q^n <= max_state_dim`.
pub fn projection_trace(b: &FourierDescription, limits: &Limits) -> Result<f64> {
    let spec = b.spec();
    let coeffs = b.projection_coefficients(limits)?;
    let dim = state_dim(spec.q(), spec.n())?;
    let work = BigUint::from(dim) * coeffs.len();
    Limits::check("trace terms", &work, limits.max_state_dim)?;
    let elements = Elements::new(spec, limits)?;
    let q = spec.q();
    let table = roots(2 * q);
    let mut trace = Complex64::zero();
    for ((_, rho, la, mb), t) in elements.list.iter().zip(&coeffs) {
        if *la != 0 {
            continue;
        }
        let mut tr = Complex64::zero();
        for x in 0..dim {
            let xw = digits(q, spec.n(), x);
            tr += table[((rho + 2 * dot_mod(q, mb, &xw)) % (2 * q)) as usize];
        }
        trace += t * tr;
    }
    Ok(trace.re)
}
