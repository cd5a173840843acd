//! The Weyl error group on `n` sites over a finite abelian alphabet
//! `A = Z_{n_1} x ... x Z_{n_k}`.
//!
//! An element `w^i U_a V_b` is stored symbolically as an integer phase
//! exponent together with the two words `a`, `b`. Phases are counted in units
//! of `2*pi / P` with `P = 2N`, `N` the exponent of `A`; the extra factor of
//! two makes room for the quarter phase `i` that closes subgroups containing
//! `U_1 V_1`-type elements over GF(2).
//!
//! Conventions: `U_a |x> = |x + a>`, `V_b |x> = <b, x> |x>`, and
//! `U_a V_b` applies `V_b` first.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::galois::error_sphere_count;
use crate::limits::Limits;
use crate::{Error, Result};

/// `A = Z_{n_1} x ... x Z_{n_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlphabetGroup {
    orders: Vec<u32>,
    exponent: u32,
}

impl AlphabetGroup {
    pub fn new(orders: Vec<u32>) -> Result<Self> {
        if orders.is_empty() || orders.iter().any(|&o| o < 2) {
            return Err(Error::InvalidArgument(format!(
                "cyclic orders must be >= 2, got {orders:?}"
            )));
        }
        let exponent = orders.iter().fold(1u32, |acc, &o| acc.lcm(&o));
        Ok(AlphabetGroup { orders, exponent })
    }

    /// `Z_n` with a single cyclic factor (for GF(p), `n = p`).
    pub fn cyclic(n: u32) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    /// Number of cyclic factors `k`.
    pub fn components(&self) -> usize {
        self.orders.len()
    }

    /// `#A`.
    pub fn size(&self) -> u64 {
        self.orders.iter().map(|&o| o as u64).product()
    }

    /// `N = lcm(n_i)`, the least `N` with `N a = 0` for all `a`.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// `P = 2N`.
    pub fn phase_denominator(&self) -> u32 {
        2 * self.exponent
    }

    /// Components of the letter with mixed-radix index `index`.
    pub fn letter(&self, mut index: u64) -> Vec<u32> {
        self.orders
            .iter()
            .map(|&o| {
                let c = (index % o as u64) as u32;
                index /= o as u64;
                c
            })
            .collect()
    }

    pub fn letter_index(&self, letter: &[u32]) -> u64 {
        let mut idx = 0u64;
        for (c, &o) in letter.iter().zip(&self.orders).rev() {
            idx = idx * o as u64 + *c as u64;
        }
        idx
    }

    /// Exponent (in units of `2*pi/P`) of the canonical bicharacter of two
    /// letters.
    fn letter_pairing(&self, x: &[u32], y: &[u32]) -> u64 {
        let p = self.phase_denominator() as u64;
        x.iter()
            .zip(y)
            .zip(&self.orders)
            .map(|((&a, &b), &o)| (a as u64 * b as u64 % o as u64) * (p / o as u64))
            .sum::<u64>()
            % p
    }
}

/// `e^{2 pi i exponent / denominator}`.
pub fn root_of_unity(exponent: u32, denominator: u32) -> Complex64 {
    Complex64::from_polar(
        1.0,
        2.0 * std::f64::consts::PI * exponent as f64 / denominator as f64,
    )
}

/// `w^phase U_a V_b`. Words are flattened: component `j` of site `i` lives at
/// index `i * k + j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeylElement {
    pub phase: u32,
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

impl WeylElement {
    /// Number of sites where `(a_i, b_i) != (0, 0)`, for an alphabet with `k`
    /// components per letter. Ignores the phase.
    pub fn weight_with(&self, k: usize) -> usize {
        self.a
            .chunks(k)
            .zip(self.b.chunks(k))
            .filter(|(x, y)| x.iter().any(|&v| v != 0) || y.iter().any(|&v| v != 0))
            .count()
    }

    /// True for `w^i I`.
    pub fn is_scalar(&self) -> bool {
        self.a.iter().all(|&v| v == 0) && self.b.iter().all(|&v| v == 0)
    }
}

/// The error group on `n` sites over `alphabet`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylGroup {
    alphabet: AlphabetGroup,
    n: usize,
}

impl WeylGroup {
    pub fn new(alphabet: AlphabetGroup, n: usize) -> Self {
        WeylGroup { alphabet, n }
    }

    /// The error group over GF(p)^n (or `Z_p` for non-prime `p`).
    pub fn cyclic(p: u32, n: usize) -> Result<Self> {
        Ok(Self::new(AlphabetGroup::cyclic(p)?, n))
    }

    pub fn alphabet(&self) -> &AlphabetGroup {
        &self.alphabet
    }

    pub fn sites(&self) -> usize {
        self.n
    }

    pub fn phase_denominator(&self) -> u32 {
        self.alphabet.phase_denominator()
    }

    fn word_len(&self) -> usize {
        self.n * self.alphabet.components()
    }

    pub fn identity(&self) -> WeylElement {
        WeylElement {
            phase: 0,
            a: vec![0; self.word_len()],
            b: vec![0; self.word_len()],
        }
    }

    pub fn scalar(&self, phase: i64) -> WeylElement {
        WeylElement {
            phase: phase.rem_euclid(self.phase_denominator() as i64) as u32,
            ..self.identity()
        }
    }

    /// Builds an element, reducing the phase mod `P` and every word component
    /// mod its cyclic order.
    pub fn element(&self, phase: i64, a: &[i64], b: &[i64]) -> Result<WeylElement> {
        let a = self.reduce_word(a)?;
        let b = self.reduce_word(b)?;
        Ok(WeylElement {
            phase: phase.rem_euclid(self.phase_denominator() as i64) as u32,
            a,
            b,
        })
    }

    pub fn reduce_word(&self, w: &[i64]) -> Result<Vec<u32>> {
        if w.len() != self.word_len() {
            return Err(Error::DimensionMismatch {
                expected: self.word_len(),
                found: w.len(),
            });
        }
        let k = self.alphabet.components();
        Ok(w.iter()
            .enumerate()
            .map(|(i, &v)| v.rem_euclid(self.alphabet.orders[i % k] as i64) as u32)
            .collect())
    }

    fn check_word(&self, w: &[u32]) -> Result<()> {
        if w.len() != self.word_len() {
            return Err(Error::DimensionMismatch {
                expected: self.word_len(),
                found: w.len(),
            });
        }
        let k = self.alphabet.components();
        if let Some((i, &v)) = w
            .iter()
            .enumerate()
            .find(|(i, &v)| v >= self.alphabet.orders[i % k])
        {
            return Err(Error::InvalidArgument(format!(
                "word entry {v} at position {i} is not reduced"
            )));
        }
        Ok(())
    }

    pub fn check(&self, g: &WeylElement) -> Result<()> {
        self.check_word(&g.a)?;
        self.check_word(&g.b)?;
        if g.phase >= self.phase_denominator() {
            return Err(Error::InvalidArgument(format!(
                "phase {} not reduced mod {}",
                g.phase,
                self.phase_denominator()
            )));
        }
        Ok(())
    }

    /// Exponent `e` with `<a, b> = e^{2 pi i e / P}`.
    pub fn bicharacter(&self, a: &[u32], b: &[u32]) -> Result<u32> {
        self.check_word(a)?;
        self.check_word(b)?;
        Ok(self.bicharacter_unchecked(a, b))
    }

    fn bicharacter_unchecked(&self, a: &[u32], b: &[u32]) -> u32 {
        let k = self.alphabet.components();
        let p = self.phase_denominator() as u64;
        (a.chunks(k)
            .zip(b.chunks(k))
            .map(|(x, y)| self.alphabet.letter_pairing(x, y))
            .sum::<u64>()
            % p) as u32
    }

    fn add_words(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let k = self.alphabet.components();
        x.iter()
            .zip(y)
            .enumerate()
            .map(|(i, (&u, &v))| (u + v) % self.alphabet.orders[i % k])
            .collect()
    }

    fn neg_word(&self, x: &[u32]) -> Vec<u32> {
        let k = self.alphabet.components();
        x.iter()
            .enumerate()
            .map(|(i, &u)| {
                let o = self.alphabet.orders[i % k];
                (o - u) % o
            })
            .collect()
    }

    /// `w^i U_a V_b * w^j U_c V_d = w^{i+j} <b, c> U_{a+c} V_{b+d}`.
    pub fn compose(&self, g: &WeylElement, h: &WeylElement) -> Result<WeylElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.compose_unchecked(g, h))
    }

    pub(crate) fn compose_unchecked(&self, g: &WeylElement, h: &WeylElement) -> WeylElement {
        let p = self.phase_denominator();
        let twist = self.bicharacter_unchecked(&g.b, &h.a);
        WeylElement {
            phase: ((g.phase as u64 + h.phase as u64 + twist as u64) % p as u64) as u32,
            a: self.add_words(&g.a, &h.a),
            b: self.add_words(&g.b, &h.b),
        }
    }

    /// `(w^i U_a V_b)^{-1} = w^{-i} <a, b> U_{-a} V_{-b}`.
    pub fn inverse(&self, g: &WeylElement) -> Result<WeylElement> {
        self.check(g)?;
        let p = self.phase_denominator();
        let ab = self.bicharacter_unchecked(&g.a, &g.b);
        Ok(WeylElement {
            phase: ((p - g.phase) % p + ab) % p,
            a: self.neg_word(&g.a),
            b: self.neg_word(&g.b),
        })
    }

    /// Number of sites where `(a_i, b_i) != (0, 0)`.
    pub fn weight(&self, g: &WeylElement) -> usize {
        g.weight_with(self.alphabet.components())
    }

    /// Commutator phase: `g h g^{-1} h^{-1} = gamma(g, h) I` with
    /// `gamma(g, h) = <b, c> conj(<a, d>)` for `g ~ U_a V_b`, `h ~ U_c V_d`.
    pub fn gamma(&self, g: &WeylElement, h: &WeylElement) -> Result<u32> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.gamma_unchecked(g, h))
    }

    pub(crate) fn gamma_unchecked(&self, g: &WeylElement, h: &WeylElement) -> u32 {
        let p = self.phase_denominator();
        let bc = self.bicharacter_unchecked(&g.b, &h.a);
        let ad = self.bicharacter_unchecked(&g.a, &h.b);
        (bc + p - ad) % p
    }

    /// `(#A)^n`.
    pub fn hilbert_dim(&self) -> Option<u64> {
        self.alphabet.size().checked_pow(self.n as u32)
    }

    /// Basis index of a word: site 0 is the least significant digit.
    pub fn word_index(&self, w: &[u32]) -> u64 {
        let k = self.alphabet.components();
        let m = self.alphabet.size();
        w.chunks(k)
            .rev()
            .fold(0u64, |acc, letter| acc * m + self.alphabet.letter_index(letter))
    }

    pub fn word_from_index(&self, mut index: u64) -> Vec<u32> {
        let m = self.alphabet.size();
        let mut w = Vec::with_capacity(self.word_len());
        for _ in 0..self.n {
            w.extend(self.alphabet.letter(index % m));
            index /= m;
        }
        w
    }

    /// The monomial matrix of `g` on `L^2(A)^{(x) n}`, restricted to
    /// dimensions of at most 4096.
    pub fn dense_matrix(&self, g: &WeylElement) -> Result<DMatrix<Complex64>> {
        const CAP: u64 = 4096;
        self.check(g)?;
        let dim = match self.hilbert_dim() {
            Some(d) if d <= CAP => d as usize,
            _ => {
                return Err(Error::CapExceeded {
                    what: "dense Weyl matrix dimension",
                    required: format!("{}^{}", self.alphabet.size(), self.n),
                    cap: CAP,
                })
            }
        };
        let p = self.phase_denominator();
        let mut m = DMatrix::from_element(dim, dim, Complex64::zero());
        for col in 0..dim {
            let x = self.word_from_index(col as u64);
            let phase = (g.phase + self.bicharacter_unchecked(&g.b, &x)) % p;
            let row = self.word_index(&self.add_words(&x, &g.a)) as usize;
            m[(row, col)] = root_of_unity(phase, p);
        }
        Ok(m)
    }

    /// All phase-free `U_a V_b` with `1 <= wt(a, b) <= max_weight`, ordered by
    /// weight, then support (lexicographic), then the per-site letter pairs
    /// (lexicographic, `(0, 0)` skipped).
    pub fn enumerate_bounded(&self, max_weight: usize, limits: &Limits) -> Result<BoundedErrors> {
        let m = self.alphabet.size();
        let required = error_sphere_count(self.n as u32, m as u32, max_weight as u32);
        Limits::check("error sphere", &required, limits.max_errors)?;
        Ok(BoundedErrors::new(self.clone(), max_weight.min(self.n)))
    }
}

/// Iterator returned by [`WeylGroup::enumerate_bounded`].
#[derive(Debug, Clone)]
pub struct BoundedErrors {
    group: WeylGroup,
    max_weight: usize,
    weight: usize,
    support: Vec<usize>,
    values: Vec<u64>,
    done: bool,
}

impl BoundedErrors {
    fn new(group: WeylGroup, max_weight: usize) -> Self {
        let mut it = BoundedErrors {
            group,
            max_weight,
            weight: 0,
            support: Vec::new(),
            values: Vec::new(),
            done: false,
        };
        it.start_weight(1);
        it
    }

    fn start_weight(&mut self, w: usize) {
        if w > self.max_weight || w == 0 && self.max_weight == 0 {
            self.done = true;
            return;
        }
        self.weight = w;
        self.support = (0..w).collect();
        self.values = vec![0; w];
    }

    fn advance(&mut self) {
        let pairs = self.group.alphabet.size().pow(2) - 1;
        for i in (0..self.weight).rev() {
            if self.values[i] + 1 < pairs {
                self.values[i] += 1;
                return;
            }
            self.values[i] = 0;
        }
        // next support combination
        let n = self.group.n;
        let w = self.weight;
        for i in (0..w).rev() {
            if self.support[i] < n - w + i {
                self.support[i] += 1;
                for j in i + 1..w {
                    self.support[j] = self.support[j - 1] + 1;
                }
                return;
            }
        }
        self.start_weight(w + 1);
    }

    fn current(&self) -> WeylElement {
        let alphabet = &self.group.alphabet;
        let k = alphabet.components();
        let m = alphabet.size();
        let mut el = self.group.identity();
        for (&site, &v) in self.support.iter().zip(&self.values) {
            let pair = v + 1;
            let (ai, bi) = (pair / m, pair % m);
            el.a[site * k..(site + 1) * k].copy_from_slice(&alphabet.letter(ai));
            el.b[site * k..(site + 1) * k].copy_from_slice(&alphabet.letter(bi));
        }
        el
    }
}

impl Iterator for BoundedErrors {
    type Item = WeylElement;

    fn next(&mut self) -> Option<WeylElement> {
        if self.done {
            return None;
        }
        let el = self.current();
        self.advance();
        Some(el)
    }
}
