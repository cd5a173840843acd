//! Explicit code families.
//!
//! Index conventions, used everywhere in this module: positions are
//! `1..=n` and position `p` is vector index `p - 1`. The vector `e_0` is the
//! unit vector at position `n` (index `n - 1`), and index arithmetic for the
//! circulant `T` is mod `n`. For odd `n = 2m + 1`, `T e_j = e_{j+m} +
//! e_{j+m+1}`, i.e. `T_{ij} = 1` iff `i - j in {m, m + 1} (mod n)`; `T` is
//! symmetric with zero diagonal.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::encodable::EncodableForm;
use crate::fourier_code::FourierDescription;
use crate::galois::{gaussian_binomial, is_prime, FieldMatrix, FieldVector, PrimeField};
use crate::gottesman::GottesmanSpec;
use crate::limits::Limits;
use crate::{Error, Result};

/// A family of distinct subsets of `{1, ..., universe}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    universe: usize,
    members: Vec<BTreeSet<usize>>,
}

impl SetFamily {
    pub fn new(universe: usize, members: Vec<BTreeSet<usize>>) -> Result<Self> {
        for s in &members {
            if let Some(&bad) = s.iter().find(|&&p| p == 0 || p > universe) {
                return Err(Error::InvalidArgument(format!(
                    "element {bad} outside 1..={universe}"
                )));
            }
        }
        if let Some((i, j)) = first_duplicate(&members) {
            return Err(Error::InvalidArgument(format!(
                "members {i} and {j} are the same set"
            )));
        }
        Ok(SetFamily { universe, members })
    }

    pub fn from_lists(universe: usize, lists: &[Vec<usize>]) -> Result<Self> {
        Self::new(
            universe,
            lists.iter().map(|l| l.iter().copied().collect()).collect(),
        )
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn members(&self) -> &[BTreeSet<usize>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The set of `#(S1 \ S2) + #(S2 \ S1)` over distinct pairs.
    pub fn symmetric_difference_sizes(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for (i, a) in self.members.iter().enumerate() {
            for b in &self.members[i + 1..] {
                out.insert(a.symmetric_difference(b).count());
            }
        }
        out
    }

    /// First pair (in index order) whose symmetric difference size is in
    /// `sizes`.
    pub fn first_pair_with_difference_in(
        &self,
        sizes: &BTreeSet<usize>,
    ) -> Option<(usize, usize, usize)> {
        for (i, a) in self.members.iter().enumerate() {
            for (j, b) in self.members.iter().enumerate().skip(i + 1) {
                let s = a.symmetric_difference(b).count();
                if sizes.contains(&s) {
                    return Some((i, j, s));
                }
            }
        }
        None
    }
}

fn first_duplicate(members: &[BTreeSet<usize>]) -> Option<(usize, usize)> {
    let mut seen = std::collections::BTreeMap::new();
    for (j, s) in members.iter().enumerate() {
        if let Some(&i) = seen.get(s) {
            return Some((i, j));
        }
        seen.insert(s.clone(), j);
    }
    None
}

impl Serialize for SetFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let lists: Vec<Vec<usize>> = self
            .members
            .iter()
            .map(|s| s.iter().copied().collect())
            .collect();
        lists.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SetFamily {
    /// The universe of a deserialized family is its largest element.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let lists = Vec::<Vec<usize>>::deserialize(deserializer)?;
        let universe = lists.iter().flatten().copied().max().unwrap_or(0);
        SetFamily::from_lists(universe, &lists).map_err(serde::de::Error::custom)
    }
}

fn check_odd(n: usize) -> Result<usize> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "length must be odd and at least 3, got {n}"
        )));
    }
    Ok((n - 1) / 2)
}

/// The symmetric circulant `T` with `T e_j = e_{j+m} + e_{j+m+1}`.
pub fn circulant(n: usize, q: u32) -> Result<FieldMatrix> {
    let m = check_odd(n)?;
    let f = PrimeField::new(q)?;
    let mut t = FieldMatrix::zeros(f, n, n);
    for j in 0..n {
        t.set((j + m) % n, j, 1);
        t.set((j + m + 1) % n, j, 1);
    }
    Ok(t)
}

/// The sum-zero form behind both the distance-2 family and the Laflamme
/// spec: `D` is the strict upper triangle of the circulant.
pub fn distance2_form(n: usize, q: u32) -> Result<EncodableForm> {
    EncodableForm::from_symmetric(&circulant(n, q)?)
}

/// `L` with rows `[I_{n-1} | 0]` and last row `[-1 ... -1 | 0]`,
/// `M = T L + J`, and the phase table of the sum-zero form.
pub fn distance2_spec(n: usize, q: u32) -> Result<GottesmanSpec> {
    let spec = distance2_form(n, q)?.to_spec()?;
    spec.ensure_valid()?;
    Ok(spec)
}

/// The `((n, 1 + n(q - 1), 2))_q` code:
/// `B = {0} u {alpha e_0} u {e_0 + alpha u_j}` with
/// `u_j = sum_{i=1}^{n-1} e_i - e_j`, `alpha != 0`, `1 <= j <= n - 1`.
/// Over GF(2) this is `e_0 + sum e_i - e_j`.
pub fn distance2_family(n: usize, q: u32) -> Result<FourierDescription> {
    let spec = distance2_spec(n, q)?;
    let f = spec.field();
    let e0 = n - 1;
    let mut members = vec![FieldVector::zeros(f, n)];
    for alpha in 1..q {
        let mut v = FieldVector::zeros(f, n);
        v.set(e0, alpha as i64);
        members.push(v);
    }
    for alpha in 1..q as i64 {
        for j in 0..n - 1 {
            let mut v = FieldVector::zeros(f, n);
            v.set(e0, 1);
            for i in 0..n - 1 {
                v.set(i, if i == j { 0 } else { alpha });
            }
            members.push(v);
        }
    }
    FourierDescription::new(spec, members)
}

/// The generalized Laflamme stabilizer group over GF(2), `M = T L + J`.
pub fn laflamme_spec(n: usize) -> Result<GottesmanSpec> {
    distance2_spec(n, 2)
}

/// The eight subsets of `{1..15}` behind the `((15, 8, 3))` code.
pub fn code_15_8_3_family() -> SetFamily {
    SetFamily::from_lists(
        15,
        &[
            vec![1, 2, 3, 4, 13],
            vec![5, 6, 7, 8, 13],
            vec![9, 10, 11, 12, 13],
            vec![1, 2, 5, 6, 9, 10],
            vec![1, 2, 7, 8, 11, 12],
            vec![3, 4, 7, 8, 9, 10],
            vec![3, 4, 5, 6, 11, 12],
            vec![14, 15],
        ],
    )
    .expect("fixed family is valid")
}

pub fn code_15_8_3(limits: &Limits) -> Result<FourierDescription> {
    family_to_b(&code_15_8_3_family(), 15, limits)
}

/// Weights of the members of `F_3` of the Laflamme spec.
pub fn laflamme_forbidden_weights(spec: &GottesmanSpec, limits: &Limits) -> Result<BTreeSet<usize>> {
    Ok(spec
        .forbidden_set(3, limits)?
        .members
        .iter()
        .map(|u| u.weight())
        .collect())
}

/// `B = { sum_{i in S} e_i : S in family }` over `laflamme_spec(n)`, after
/// checking that no symmetric difference has a forbidden weight.
pub fn family_to_b(family: &SetFamily, n: usize, limits: &Limits) -> Result<FourierDescription> {
    if family.universe() > n {
        return Err(Error::InvalidArgument(format!(
            "family universe {} does not fit in length {n}",
            family.universe()
        )));
    }
    let spec = laflamme_spec(n)?;
    let weights = laflamme_forbidden_weights(&spec, limits)?;
    if let Some((first, second, size)) = family.first_pair_with_difference_in(&weights) {
        return Err(Error::ForbiddenWeight {
            first,
            second,
            size,
        });
    }
    let f = spec.field();
    let members = family.members().iter().map(|s| {
        let mut v = FieldVector::zeros(f, n);
        for &p in s {
            v.set(p - 1, 1);
        }
        v
    });
    FourierDescription::new(spec, members)
}

/// Point sets of all `r`-dimensional subspaces of GF(q)^m. A vector `v`
/// becomes position `1 + sum_i v_i q^i`; subspaces come in order of their
/// reduced echelon bases (pivot columns lexicographic, then free entries).
pub fn subspace_family(m: usize, r: usize, q: u32, limits: &Limits) -> Result<SetFamily> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let count = gaussian_binomial(m as u32, q, r as u32)?;
    Limits::check("subspace family", &count, limits.max_subsets)?;
    let universe = (q as usize).pow(m as u32);
    let mut members = Vec::new();
    for pivots in combinations(m, r) {
        // free slots: (row i, column j) with j > pivot_i and j not a pivot
        let free: Vec<(usize, usize)> = (0..r)
            .flat_map(|i| {
                let pivots = &pivots;
                (pivots[i] + 1..m)
                    .filter(move |j| !pivots.contains(j))
                    .map(move |j| (i, j))
            })
            .collect();
        let total = (q as u64).pow(free.len() as u32);
        for code in 0..total {
            let mut basis = vec![vec![0u32; m]; r];
            for (i, &p) in pivots.iter().enumerate() {
                basis[i][p] = 1;
            }
            let mut c = code;
            for &(i, j) in &free {
                basis[i][j] = (c % q as u64) as u32;
                c /= q as u64;
            }
            members.push(span_positions(&basis, m, q));
        }
    }
    SetFamily::new(universe, members)
}

fn span_positions(basis: &[Vec<u32>], m: usize, q: u32) -> BTreeSet<usize> {
    let r = basis.len();
    let mut out = BTreeSet::new();
    for code in 0..(q as u64).pow(r as u32) {
        let mut v = vec![0u32; m];
        let mut c = code;
        for row in basis {
            let coef = (c % q as u64) as u32;
            c /= q as u64;
            for (x, &b) in v.iter_mut().zip(row) {
                *x = (*x + coef * b) % q;
            }
        }
        let idx = v.iter().rev().fold(0usize, |acc, &x| acc * q as usize + x as usize);
        out.insert(idx + 1);
    }
    out
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.clone());
        let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
            return out;
        };
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// Removes position `coordinate` from the universe and from every member,
/// renumbering higher positions down by one.
pub fn puncture(family: &SetFamily, coordinate: usize) -> Result<SetFamily> {
    if coordinate == 0 || coordinate > family.universe() {
        return Err(Error::InvalidArgument(format!(
            "coordinate {coordinate} outside 1..={}",
            family.universe()
        )));
    }
    let members: Vec<BTreeSet<usize>> = family
        .members()
        .iter()
        .map(|s| {
            s.iter()
                .filter(|&&p| p != coordinate)
                .map(|&p| if p > coordinate { p - 1 } else { p })
                .collect()
        })
        .collect();
    if let Some((i, j)) = first_duplicate(&members) {
        return Err(Error::Collapse(vec![i, j]));
    }
    SetFamily::new(family.universe() - 1, members)
}

/// Which clause of the alpha-good definition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaCondition {
    /// (i) column sums too light.
    ColumnsLight,
    /// (ii) row sums too light.
    RowsLight,
    /// (iii) column sums too heavy.
    ColumnsHeavy,
    /// (iv) row sums too heavy.
    RowsHeavy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaGoodReport {
    pub pass: bool,
    /// `floor(alpha n)`.
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<AlphaFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaFailure {
    pub condition: AlphaCondition,
    /// 0-based row or column indices whose sum violates the condition.
    pub indices: Vec<usize>,
    pub weight: usize,
}

/// Checks conditions (i)-(iv): every sum of `floor(alpha n)` columns (rows)
/// of `R` has weight in `[alpha n, (1 - alpha) n]`.
pub fn alpha_good(r: &FieldMatrix, alpha: Rational64, limits: &Limits) -> Result<AlphaGoodReport> {
    let n = r.rows();
    if r.modulus() != 2 || r.cols() != n || n == 0 {
        return Err(Error::InvalidArgument(
            "alpha-good matrices are square and binary".into(),
        ));
    }
    if *alpha.numer() <= 0 || alpha >= Rational64::from_integer(1) {
        return Err(Error::InvalidArgument(format!("alpha {alpha} not in (0, 1)")));
    }
    let an = alpha * Rational64::from_integer(n as i64);
    let k = an.floor().to_integer() as usize;
    if k == 0 {
        return Err(Error::InvalidArgument(format!(
            "floor(alpha n) = 0 for alpha = {alpha}, n = {n}"
        )));
    }
    let subsets = num_integer::binomial(BigUint::from(n), BigUint::from(k));
    Limits::check("alpha-good subsets", &subsets, limits.max_subsets)?;
    let hi = Rational64::from_integer(n as i64) - an;
    let rows = r.to_rows();
    let cols = r.transpose().to_rows();
    let sum_weight = |vecs: &[Vec<u32>], idx: &[usize]| -> usize {
        (0..n)
            .filter(|&j| idx.iter().fold(0, |acc, &i| acc ^ vecs[i][j]) != 0)
            .count()
    };
    let combos = combinations(n, k);
    let checks: [(AlphaCondition, &[Vec<u32>], bool); 4] = [
        (AlphaCondition::ColumnsLight, &cols, true),
        (AlphaCondition::RowsLight, &rows, true),
        (AlphaCondition::ColumnsHeavy, &cols, false),
        (AlphaCondition::RowsHeavy, &rows, false),
    ];
    for (condition, vecs, light) in checks {
        for idx in &combos {
            let w = sum_weight(vecs, idx);
            let wq = Rational64::from_integer(w as i64);
            let bad = if light { wq < an } else { wq > hi };
            if bad {
                return Ok(AlphaGoodReport {
                    pass: false,
                    k,
                    failure: Some(AlphaFailure {
                        condition,
                        indices: idx.clone(),
                        weight: w,
                    }),
                });
            }
        }
    }
    Ok(AlphaGoodReport {
        pass: true,
        k,
        failure: None,
    })
}

/// The sum-zero form on `2n` qubits with `T = [[0, R], [R^T, 0]]` and `D`
/// its strict upper triangle.
pub fn alpha_good_form(r: &FieldMatrix) -> Result<EncodableForm> {
    let n = r.rows();
    if r.modulus() != 2 || r.cols() != n {
        return Err(Error::InvalidArgument(
            "alpha-good matrices are square and binary".into(),
        ));
    }
    let mut t = FieldMatrix::zeros(r.field(), 2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let v = r.get(i, j) as i64;
            t.set(i, n + j, v);
            t.set(n + j, i, v);
        }
    }
    EncodableForm::from_symmetric(&t)
}

/// The maximal Gottesman subgroup on `2n` qubits attached to `R`.
pub fn alpha_good_spec(r: &FieldMatrix) -> Result<GottesmanSpec> {
    let spec = alpha_good_form(r)?.to_spec()?;
    spec.ensure_valid()?;
    Ok(spec)
}

/// Outcome of a seeded random search for an alpha-good matrix.
#[derive(Debug, Clone)]
pub struct AlphaSearch {
    pub found: Option<FieldMatrix>,
    pub attempts: usize,
}

/// Samples uniformly random `n x n` binary matrices until one is alpha-good
/// or `max_attempts` is reached.
pub fn random_alpha_good_search(
    n: usize,
    alpha: Rational64,
    seed: u64,
    max_attempts: usize,
    limits: &Limits,
) -> Result<AlphaSearch> {
    let f = PrimeField::new(2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=max_attempts {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.random_range(0..2)).collect())
            .collect();
        let r = FieldMatrix::from_rows(f, n, &rows)?;
        if alpha_good(&r, alpha, limits)?.pass {
            return Ok(AlphaSearch {
                found: Some(r),
                attempts: attempt,
            });
        }
    }
    Ok(AlphaSearch {
        found: None,
        attempts: max_attempts,
    })
}
