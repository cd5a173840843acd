//! Syndrome extraction and correction for codes with a Fourier description.
//!
//! If `phi` is a codeword in the range of `P_u` and `g` an error, then
//! `s_i g phi = gamma(s_i, g) chi_u(s_i) g phi` for every generator `s_i`,
//! where `g h = gamma(g, h) h g`. The syndrome is the list of these
//! eigenvalues, read off exactly from the simulated state.

use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fourier_code::FourierDescription;
use crate::galois::FieldVector;
use crate::gottesman::GottesmanSpec;
use crate::limits::Limits;
use crate::oracle::{apply, roots, Action, SparseState};
use crate::weyl::WeylElement;
use crate::{Error, Result};

pub const EIGENVALUE_TOLERANCE: f64 = 1e-9;

/// States with at most this many basis words are scanned through a dense copy.
const DENSE_LOOKUP: u64 = 1 << 20;

/// Eigenvalue exponents (units of `2 pi / P`), one per generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syndrome {
    pub phases: Vec<u32>,
}

/// Eigenvalue of every generator on `state`, snapped to the nearest `P`-th
/// root of unity. The ratio is taken at the first supported word and must
/// agree on the whole support.
pub fn measure_syndrome(state: &SparseState, spec: &GottesmanSpec) -> Result<Syndrome> {
    if state.q() != spec.q() {
        return Err(Error::ModulusMismatch(spec.q(), state.q()));
    }
    if state.n() != spec.n() {
        return Err(Error::DimensionMismatch {
            expected: spec.n(),
            found: state.n(),
        });
    }
    let (x0, a0) = state
        .iter()
        .next()
        .ok_or_else(|| Error::InvalidArgument("zero state has no syndrome".into()))?;
    let p = spec.phase_denominator();
    let table = roots(p);
    let dense = state.to_dense(DENSE_LOOKUP).ok();
    let amp = |y: u64| match &dense {
        Some(v) => v[y as usize],
        None => state.get(y).unwrap_or_else(Complex64::zero),
    };
    let mut phases = Vec::with_capacity(spec.r());
    for (i, s) in spec.generators().iter().enumerate() {
        let act = Action::new(state.q(), state.n(), s)?;
        // s|x0> lands on y0; the eigenvalue is <y0|s psi> / <y0|psi>
        let (y0, k0) = act.map(x0);
        let b0 = amp(y0);
        if b0 == Complex64::zero() {
            return Err(Error::NotEigenvector { generator: i });
        }
        let ratio = a0 * table[k0 as usize] / b0;
        let consistent = state.iter().all(|(x, a)| {
            let (y, k) = act.map(x);
            (a * table[k as usize] - ratio * amp(y)).norm() <= EIGENVALUE_TOLERANCE
        });
        let turns = ratio.arg() / (2.0 * std::f64::consts::PI) * p as f64;
        let k = (turns.round() as i64).rem_euclid(p as i64) as u32;
        if !consistent || (ratio - table[k as usize]).norm() > EIGENVALUE_TOLERANCE {
            return Err(Error::NotEigenvector { generator: i });
        }
        phases.push(k);
    }
    Ok(Syndrome { phases })
}

/// The syndrome `gamma(s_i, g) + chi_u(s_i)` predicted for error `g` on the
/// codeword `u`.
pub fn expected_syndrome(spec: &GottesmanSpec, g: &WeylElement, u: &FieldVector) -> Result<Syndrome> {
    spec.group().check(g)?;
    if u.len() != spec.r() || u.modulus() != spec.q() {
        return Err(Error::DimensionMismatch {
            expected: spec.r(),
            found: u.len(),
        });
    }
    let p = spec.phase_denominator();
    let phases = spec
        .generators()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let gamma = spec.group().gamma_unchecked(s, g);
            (gamma + 2 * u.entries()[i]) % p
        })
        .collect();
    Ok(Syndrome { phases })
}

/// A solution `(g, u)` of the syndrome equations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correction {
    pub error: WeylElement,
    pub u: FieldVector,
}

/// Tries the identity, then every error of weight `1..=t` in weight-lex
/// order, and returns the first `(g, u in B)` whose predicted syndrome
/// matches.
pub fn search_error(
    syn: &Syndrome,
    b: &FourierDescription,
    t: usize,
    limits: &Limits,
) -> Result<Correction> {
    let spec = b.spec();
    if syn.phases.len() != spec.r() {
        return Err(Error::DimensionMismatch {
            expected: spec.r(),
            found: syn.phases.len(),
        });
    }
    let p = spec.phase_denominator();
    // chi_u(s_i) = w(u_i), i.e. 2 u_i in units of 2 pi / P
    let by_character: HashMap<Vec<u32>, &FieldVector> = b
        .members()
        .iter()
        .map(|u| (u.entries().iter().map(|&v| 2 * v).collect(), u))
        .collect();
    let generators = spec.generators();
    let group = spec.group();
    let solve = |g: &WeylElement| -> Option<Correction> {
        let chi: Vec<u32> = generators
            .iter()
            .zip(&syn.phases)
            .map(|(s, &alpha)| (alpha + p - group.gamma_unchecked(s, g)) % p)
            .collect();
        by_character.get(&chi).map(|&u| Correction {
            error: g.clone(),
            u: u.clone(),
        })
    };
    if let Some(c) = solve(&group.identity()) {
        return Ok(c);
    }
    let errors: Vec<WeylElement> = group.enumerate_bounded(t, limits)?.collect();
    errors
        .par_iter()
        .find_map_first(solve)
        .ok_or(Error::NoSolution { t })
}

#[derive(Debug, Clone)]
pub struct Decoded {
    pub correction: Correction,
    pub syndrome: Syndrome,
    pub state: SparseState,
}

/// Measures the syndrome, searches for the error and applies its inverse.
pub fn decode(
    state: &SparseState,
    b: &FourierDescription,
    t: usize,
    limits: &Limits,
) -> Result<Decoded> {
    let syndrome = measure_syndrome(state, b.spec())?;
    let correction = search_error(&syndrome, b, t, limits)?;
    let inv = b.spec().group().inverse(&correction.error)?;
    Ok(Decoded {
        state: apply(&inv, state)?,
        correction,
        syndrome,
    })
}
