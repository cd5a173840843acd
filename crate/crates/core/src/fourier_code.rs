//! Codes given by Fourier descriptions `B` of a Gottesman subgroup `S`.
//!
//! The code is the range of `P = sum_{u in B} P_u` with
//! `P_u = (1/#S) sum_a conj(chi_u(s_a)) s_a`, the projection onto the common
//! eigenspace `{ psi : s psi = chi_u(s) psi }`. Its dimension is
//! `q^n #B / #S`.
//!
//! Distance convention: `verify_distance(d)` checks every error of weight at
//! most `d - 1` (i.e. `F_d`). The bounds in [`bounds`] take the number `t` of
//! correctable errors instead.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::galois::{error_sphere_count, FieldVector};
use crate::gottesman::{GottesmanSpec, Purity};
use crate::limits::Limits;
use crate::weyl::{root_of_unity, WeylElement};
use crate::{Error, Result};

/// A spec together with a nonempty set `B` of character indices.
#[derive(Debug, Clone)]
pub struct FourierDescription {
    spec: GottesmanSpec,
    members: BTreeSet<FieldVector>,
}

/// `((n, K, d))_q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: usize,
    #[serde(rename = "K", with = "decimal")]
    pub k: BigUint,
    pub d: usize,
    pub q: u32,
}

/// `K` as a decimal string, since it can exceed any fixed-width integer.
mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(k: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(k)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

impl std::fmt::Display for CodeParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(({},{},{}))_{}", self.n, self.k, self.d, self.q)
    }
}

/// Why a description fails the distance test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistanceWitness {
    /// `s_a` has low weight but `chi_{u1}(s_a) != chi_{u2}(s_a)`.
    LowWeightMember {
        a: Vec<u32>,
        element: WeylElement,
        u1: Vec<u32>,
        u2: Vec<u32>,
    },
    /// `u1 - u2` lies in the forbidden set.
    Forbidden {
        difference: Vec<u32>,
        u1: Vec<u32>,
        u2: Vec<u32>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<DistanceWitness>,
    pub d: usize,
    pub low_weight_members: usize,
    pub forbidden_set_size: usize,
}

/// Enumeration order for the greedy construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GreedyOrder {
    /// By Hamming weight, then lexicographically; `0` comes first.
    WeightLex,
    /// Lexicographic on the entries.
    Lex,
    /// An explicit candidate list.
    Custom(Vec<FieldVector>),
}

#[derive(Debug, Clone)]
pub struct GreedyResult {
    pub description: FourierDescription,
    pub forbidden_set_size: usize,
    /// `floor(#S / #F_d)` (`#S` when `F_d` is empty).
    pub floor_guarantee: BigUint,
    /// `ceil(#S / (#F_d + 1))`, what the packing argument actually ensures.
    pub packing_guarantee: BigUint,
}

/// Exact `(lower, upper)` bounds on the dimension of a `t`-error-correcting
/// code of length `n` over GF(q): `q^n / N(n, q, 2t)` and `q^n / N(n, q, t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub lower: BigRational,
    pub upper: BigRational,
}

pub fn bounds(n: usize, q: u32, t: usize) -> Bounds {
    let total = BigUint::from(q).pow(n as u32);
    let frac = |den: BigUint| {
        BigRational::new(
            num_bigint::BigInt::from(total.clone()),
            num_bigint::BigInt::from(den),
        )
    };
    Bounds {
        lower: frac(error_sphere_count(n as u32, q, 2 * t as u32)),
        upper: frac(error_sphere_count(n as u32, q, t as u32)),
    }
}

impl FourierDescription {
    pub fn new<I: IntoIterator<Item = FieldVector>>(spec: GottesmanSpec, members: I) -> Result<Self> {
        let members: BTreeSet<FieldVector> = members.into_iter().collect();
        if members.is_empty() {
            return Err(Error::InvalidArgument("Fourier description is empty".into()));
        }
        for u in &members {
            if u.modulus() != spec.q() {
                return Err(Error::ModulusMismatch(spec.q(), u.modulus()));
            }
            if u.len() != spec.r() {
                return Err(Error::DimensionMismatch {
                    expected: spec.r(),
                    found: u.len(),
                });
            }
        }
        Ok(FourierDescription { spec, members })
    }

    /// Builds a description from raw (possibly unreduced) integer vectors.
    pub fn from_rows(spec: GottesmanSpec, rows: &[Vec<i64>]) -> Result<Self> {
        let f = spec.field();
        let members: Vec<FieldVector> = rows
            .iter()
            .map(|r| FieldVector::new(f, r.iter().copied()))
            .collect();
        Self::new(spec, members)
    }

    pub fn spec(&self) -> &GottesmanSpec {
        &self.spec
    }

    pub fn members(&self) -> &BTreeSet<FieldVector> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.members.iter().map(|u| u.entries().to_vec()).collect()
    }

    /// `q^n #B / #S = #B q^{n - r}`.
    pub fn code_dimension(&self) -> Result<BigUint> {
        self.spec.ensure_valid()?;
        let extra = self.spec.n() - self.spec.r();
        Ok(BigUint::from(self.len()) * BigUint::from(self.spec.q()).pow(extra as u32))
    }

    pub fn params(&self, d: usize) -> Result<CodeParams> {
        Ok(CodeParams {
            n: self.spec.n(),
            k: self.code_dimension()?,
            d,
            q: self.spec.q(),
        })
    }

    /// Checks both conditions of the distance theorem for errors of weight
    /// below `d`: every low-weight `s_a` has the same character value on all
    /// of `B`, and `B - B` avoids `F_d`.
    pub fn verify_distance(&self, d: usize, limits: &Limits) -> Result<DistanceReport> {
        self.spec.ensure_valid()?;
        let w = d.saturating_sub(1);
        let low = self.spec.low_weight_members(w, limits)?;
        let forbidden = self.spec.forbidden_set(d, limits)?;
        let mut report = DistanceReport {
            pass: true,
            witness: None,
            d,
            low_weight_members: low.len(),
            forbidden_set_size: forbidden.len(),
        };
        let first = self.members.iter().next().expect("nonempty");
        'low: for (a, element) in &low {
            let base = first.dot(a)?;
            for u in &self.members {
                if u.dot(a)? != base {
                    report.witness = Some(DistanceWitness::LowWeightMember {
                        a: a.entries().to_vec(),
                        element: element.clone(),
                        u1: first.entries().to_vec(),
                        u2: u.entries().to_vec(),
                    });
                    break 'low;
                }
            }
        }
        if report.witness.is_none() {
            let nb = self.members.len();
            if nb <= forbidden.len() {
                'pairs: for u1 in &self.members {
                    for u2 in &self.members {
                        let diff = u1.sub(u2)?;
                        if forbidden.contains(&diff) {
                            report.witness = Some(DistanceWitness::Forbidden {
                                difference: diff.into_entries(),
                                u1: u1.entries().to_vec(),
                                u2: u2.entries().to_vec(),
                            });
                            break 'pairs;
                        }
                    }
                }
            } else {
                'scan: for u1 in &self.members {
                    for x in &forbidden.members {
                        let u2 = u1.sub(x)?;
                        if self.members.contains(&u2) {
                            report.witness = Some(DistanceWitness::Forbidden {
                                difference: x.entries().to_vec(),
                                u1: u1.entries().to_vec(),
                                u2: u2.into_entries(),
                            });
                            break 'scan;
                        }
                    }
                }
            }
        }
        report.pass = report.witness.is_none();
        Ok(report)
    }

    /// Coefficients `T_a = (1/#S) sum_{u in B} conj(w(u . a))` of the code
    /// projection `T = sum_a T_a s_a`, indexed by the word index of `a`.
    pub fn projection_coefficients(&self, limits: &Limits) -> Result<Vec<Complex64>> {
        let size = group_size(&self.spec, limits)?;
        let group = crate::weyl::WeylGroup::cyclic(self.spec.q(), self.spec.r())?;
        let p = self.spec.phase_denominator();
        let inv = 1.0 / size as f64;
        Ok((0..size)
            .map(|ai| {
                let a = group.word_from_index(ai);
                self.members
                    .iter()
                    .map(|u| root_of_unity((p - self.spec.character_raw(u.entries(), &a)) % p, p))
                    .sum::<Complex64>()
                    * inv
            })
            .collect())
    }
}

fn group_size(spec: &GottesmanSpec, limits: &Limits) -> Result<u64> {
    let size = BigUint::from(spec.q()).pow(spec.r() as u32);
    Limits::check("subgroup size q^r", &size, limits.max_group)
}

/// Largest deviation of `T` from being an orthogonal projection in the group
/// algebra: `max |(T*T)_a - T_a|` and `max |conj(T_a) - T_{-a}|`.
pub fn projection_defect(spec: &GottesmanSpec, coeffs: &[Complex64]) -> Result<f64> {
    const CAP: usize = 1 << 12;
    let q = spec.q();
    let r = spec.r();
    let group = crate::weyl::WeylGroup::cyclic(q, r)?;
    let size = (q as usize).pow(r as u32);
    if coeffs.len() != size {
        return Err(Error::DimensionMismatch {
            expected: size,
            found: coeffs.len(),
        });
    }
    if size > CAP {
        return Err(Error::CapExceeded {
            what: "group algebra convolution",
            required: size.to_string(),
            cap: CAP as u64,
        });
    }
    let words: Vec<Vec<u32>> = (0..size as u64).map(|i| group.word_from_index(i)).collect();
    let index = |w: &[u32]| group.word_index(w) as usize;
    let sub = |x: &[u32], y: &[u32]| -> Vec<u32> {
        x.iter().zip(y).map(|(&a, &b)| (a + q - b) % q).collect()
    };
    let zero = vec![0u32; r];
    let mut worst: f64 = 0.0;
    for (ai, a) in words.iter().enumerate() {
        let mut conv = Complex64::zero();
        for (bi, b) in words.iter().enumerate() {
            conv += coeffs[bi] * coeffs[index(&sub(a, b))];
        }
        worst = worst.max((conv - coeffs[ai]).norm());
        let neg = index(&sub(&zero, a));
        worst = worst.max((coeffs[ai].conj() - coeffs[neg]).norm());
    }
    Ok(worst)
}

/// Greedy packing: walk the candidates in `order`, keep every
/// candidate still available and discard all `v` with `u - v in F_d`.
pub fn greedy_construct(
    spec: &GottesmanSpec,
    d: usize,
    order: &GreedyOrder,
    limits: &Limits,
) -> Result<GreedyResult> {
    spec.ensure_valid()?;
    if let Purity::Exact(weight) = spec.purity_radius(d, limits)? {
        return Err(Error::NotPure { d, weight });
    }
    let size = group_size(spec, limits)?;
    let forbidden = spec.forbidden_set(d, limits)?;
    let q = spec.q();
    let r = spec.r();
    let f = spec.field();
    let group = crate::weyl::WeylGroup::cyclic(q, r)?;
    let candidates: Vec<FieldVector> = match order {
        GreedyOrder::Custom(list) => {
            for u in list {
                if u.len() != r || u.modulus() != q {
                    return Err(Error::DimensionMismatch {
                        expected: r,
                        found: u.len(),
                    });
                }
            }
            list.clone()
        }
        GreedyOrder::Lex | GreedyOrder::WeightLex => {
            let mut all: Vec<Vec<u32>> = (0..size).map(|i| group.word_from_index(i)).collect();
            all.sort_by(|x, y| {
                let key = |w: &Vec<u32>| {
                    let weight = if *order == GreedyOrder::WeightLex {
                        w.iter().filter(|&&v| v != 0).count()
                    } else {
                        0
                    };
                    (weight, w.clone())
                };
                key(x).cmp(&key(y))
            });
            all.into_iter()
                .map(|w| FieldVector::from_reduced(f, w))
                .collect::<Result<_>>()?
        }
    };
    let mut alive = vec![true; size as usize];
    let mut chosen = Vec::new();
    for u in candidates {
        let ui = group.word_index(u.entries()) as usize;
        if !alive[ui] {
            continue;
        }
        alive[ui] = false;
        for x in &forbidden.members {
            let v = u.sub(x)?;
            alive[group.word_index(v.entries()) as usize] = false;
        }
        chosen.push(u);
    }
    let total = BigUint::from(size);
    let nf = forbidden.len();
    let floor_guarantee = if nf == 0 {
        total.clone()
    } else {
        &total / BigUint::from(nf)
    };
    let den = BigUint::from(nf + 1);
    let packing_guarantee = (&total + &den - BigUint::one()) / den;
    Ok(GreedyResult {
        description: FourierDescription::new(spec.clone(), chosen)?,
        forbidden_set_size: nf,
        floor_guarantee,
        packing_guarantee,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::{FieldMatrix, PrimeField};
    use num_bigint::BigInt;

    fn ring(n: usize, q: u32) -> GottesmanSpec {
        let f = PrimeField::new(q).unwrap();
        let l = FieldMatrix::identity(f, n);
        let mut m = FieldMatrix::zeros(f, n, n);
        for i in 0..n {
            m.set(i, (i + 1) % n, 1);
            m.set((i + 1) % n, i, 1);
        }
        GottesmanSpec::with_synthesized_phase(l, m).unwrap()
    }

    #[test]
    fn bounds_examples() {
        let b = bounds(5, 2, 1);
        assert_eq!(b.upper, BigRational::from_integer(BigInt::from(2)));
        let b = bounds(4, 3, 0);
        assert_eq!(b.upper, BigRational::from_integer(BigInt::from(81)));
        assert_eq!(b.lower, BigRational::from_integer(BigInt::from(81)));
        let b = bounds(15, 2, 1);
        assert_eq!(
            b.lower,
            BigRational::new(BigInt::from(32768), BigInt::from(991))
        );
    }

    #[test]
    fn rejects_empty_and_misshapen() {
        let spec = ring(3, 2);
        assert!(FourierDescription::new(spec.clone(), vec![]).is_err());
        assert!(FourierDescription::from_rows(spec, &[vec![1, 0]]).is_err());
    }

    #[test]
    fn stabilizer_dimension_and_coefficients() {
        let spec = ring(5, 2);
        let b = FourierDescription::from_rows(spec, &[vec![0; 5]]).unwrap();
        assert_eq!(b.code_dimension().unwrap(), BigUint::from(1u32));
        let lim = Limits::default();
        let t = b.projection_coefficients(&lim).unwrap();
        assert!(t.iter().all(|c| (c - Complex64::new(1.0 / 32.0, 0.0)).norm() < 1e-15));
        assert!(projection_defect(b.spec(), &t).unwrap() < 1e-12);
    }

    #[test]
    fn single_member_coefficients_have_uniform_modulus() {
        let spec = ring(3, 3);
        let b = FourierDescription::from_rows(spec, &[vec![1, 2, 0]]).unwrap();
        let t = b.projection_coefficients(&Limits::default()).unwrap();
        assert!(t.iter().all(|c| (c.norm() - 1.0 / 27.0).abs() < 1e-15));
        assert!(projection_defect(b.spec(), &t).unwrap() < 1e-12);
    }

    #[test]
    fn distance_one_is_trivial_and_greedy_takes_everything() {
        let spec = ring(3, 2);
        let lim = Limits::default();
        let g = greedy_construct(&spec, 1, &GreedyOrder::WeightLex, &lim).unwrap();
        assert_eq!(g.description.len(), 8);
        assert!(g.description.verify_distance(1, &lim).unwrap().pass);
    }

    #[test]
    fn full_group_fails_at_distance_two() {
        let spec = ring(5, 2);
        let lim = Limits::default();
        let rows: Vec<Vec<i64>> = (0..32)
            .map(|i: i64| (0..5).map(|k| (i >> k) & 1).collect())
            .collect();
        let b = FourierDescription::from_rows(spec, &rows).unwrap();
        let rep = b.verify_distance(2, &lim).unwrap();
        assert!(!rep.pass);
        assert!(matches!(rep.witness, Some(DistanceWitness::Forbidden { .. })));
    }

    #[test]
    fn low_weight_member_witness() {
        // S = <Z_1> on two qubits, B = {0, 1}: Z_1 separates the two codewords
        let f = PrimeField::new(2).unwrap();
        let l = FieldMatrix::from_rows(f, 1, &[vec![0], vec![0]]).unwrap();
        let m = FieldMatrix::from_rows(f, 1, &[vec![1], vec![0]]).unwrap();
        let spec = GottesmanSpec::with_synthesized_phase(l, m).unwrap();
        let b = FourierDescription::from_rows(spec, &[vec![0], vec![1]]).unwrap();
        let rep = b.verify_distance(2, &Limits::default()).unwrap();
        assert!(matches!(
            rep.witness,
            Some(DistanceWitness::LowWeightMember { .. })
        ));
        assert_eq!(b.code_dimension().unwrap(), BigUint::from(4u32));
        assert!(matches!(
            greedy_construct(b.spec(), 2, &GreedyOrder::WeightLex, &Limits::default()),
            Err(Error::NotPure { d: 2, weight: 1 })
        ));
    }

    #[test]
    fn greedy_orders_are_deterministic_and_verified() {
        let spec = ring(5, 2);
        let lim = Limits::default();
        for order in [GreedyOrder::WeightLex, GreedyOrder::Lex] {
            let a = greedy_construct(&spec, 2, &order, &lim).unwrap();
            let b = greedy_construct(&spec, 2, &order, &lim).unwrap();
            assert_eq!(a.description.to_rows(), b.description.to_rows());
            assert!(a.description.verify_distance(2, &lim).unwrap().pass);
            assert!(BigUint::from(a.description.len()) >= a.packing_guarantee);
        }
    }

    #[test]
    fn report_serializes() {
        let spec = ring(3, 2);
        let b = FourierDescription::from_rows(spec, &[vec![0; 3]]).unwrap();
        let rep = b.verify_distance(2, &Limits::default()).unwrap();
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["pass"], true);
        assert!(json.get("witness").is_none());
    }
}
