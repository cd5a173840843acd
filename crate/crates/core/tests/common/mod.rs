//! Helpers shared by the integration test targets.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use weylcode::encodable::EncodableForm;
use weylcode::fourier_code::{greedy_construct, FourierDescription, GreedyOrder};
use weylcode::galois::{linear_solve, FieldMatrix, FieldVector, PrimeField};
use weylcode::gottesman::GottesmanSpec;
use weylcode::Limits;

/// A random valid spec over GF(2): a sum-zero form spec, scrambled by local
/// symplectic moves and a site permutation, then restricted to `r`
/// independent combinations of its generators.
pub fn random_spec(rng: &mut ChaCha8Rng) -> GottesmanSpec {
    let f = PrimeField::new(2).unwrap();
    let n = rng.random_range(2..=7usize);
    let mut t = FieldMatrix::zeros(f, n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.random_range(0..2i64);
            t.set(i, j, v);
            t.set(j, i, v);
        }
    }
    let base = EncodableForm::from_symmetric(&t).unwrap().to_spec().unwrap();
    let mut l = base.l().to_rows();
    let mut m = base.m().to_rows();
    for i in 0..n {
        match rng.random_range(0..3) {
            0 => std::mem::swap(&mut l[i], &mut m[i]),
            1 => {
                let li = l[i].clone();
                m[i].iter_mut().zip(&li).for_each(|(y, x)| *y = (*y + x) % 2);
            }
            _ => {}
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let to_i64 = |rows: &Vec<Vec<u32>>| -> Vec<Vec<i64>> {
        perm.iter()
            .map(|&p| rows[p].iter().map(|&v| v as i64).collect())
            .collect()
    };
    let l = FieldMatrix::from_rows(f, n, &to_i64(&l)).unwrap();
    let m = FieldMatrix::from_rows(f, n, &to_i64(&m)).unwrap();
    let r = rng.random_range(1..=n);
    let g = loop {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..r).map(|_| rng.random_range(0..2)).collect())
            .collect();
        let g = FieldMatrix::from_rows(f, r, &rows).unwrap();
        if g.rank() == r {
            break g;
        }
    };
    let spec =
        GottesmanSpec::with_synthesized_phase(l.mul(&g).unwrap(), m.mul(&g).unwrap()).unwrap();
    assert!(spec.validate().is_empty(), "{:?}", spec.validate());
    spec
}

/// `F_d` by running over all `4^n` pairs `(x, y)` directly.
pub fn brute_forbidden(spec: &GottesmanSpec, d: usize) -> BTreeSet<FieldVector> {
    let f = spec.field();
    let n = spec.n();
    let lm = spec.l().vstack(spec.m()).unwrap();
    let mut out = BTreeSet::new();
    for bits in 1u64..(1 << (2 * n)) {
        let x: Vec<i64> = (0..n).map(|i| (bits >> i & 1) as i64).collect();
        let y: Vec<i64> = (0..n).map(|i| (bits >> (n + i) & 1) as i64).collect();
        let wt = (0..n).filter(|&i| x[i] != 0 || y[i] != 0).count();
        if wt >= d {
            continue;
        }
        let xy = FieldVector::new(f, x.iter().chain(&y).copied());
        if linear_solve(&lm, &xy).unwrap().is_some() {
            continue;
        }
        let ly = spec.l().transpose().mul_vec(&FieldVector::new(f, y)).unwrap();
        let mx = spec.m().transpose().mul_vec(&FieldVector::new(f, x)).unwrap();
        out.insert(ly.sub(&mx).unwrap());
    }
    out
}

pub fn random_description(spec: &GottesmanSpec, rng: &mut ChaCha8Rng, d: usize) -> FourierDescription {
    let lim = Limits::default();
    let f = spec.field();
    let r = spec.r();
    match rng.random_range(0..3) {
        0 => greedy_construct(spec, d, &GreedyOrder::WeightLex, &lim)
            .map(|g| g.description)
            .unwrap_or_else(|_| FourierDescription::new(spec.clone(), [FieldVector::zeros(f, r)]).unwrap()),
        _ => {
            let size = 1u64 << r;
            let count = rng.random_range(1..=size.min(6));
            let members: BTreeSet<FieldVector> = (0..count)
                .map(|_| {
                    let w = rng.random_range(0..size);
                    FieldVector::new(f, (0..r).map(|i| (w >> i & 1) as i64))
                })
                .collect();
            FourierDescription::new(spec.clone(), members).unwrap()
        }
    }
}

/// Number of `r`-dimensional subspaces of `GF(q)^m`, counted as distinct
/// spans of `r`-tuples of vectors.
pub fn brute_subspace_count(m: usize, r: usize, q: u32) -> usize {
    let size = (q as usize).pow(m as u32);
    let add = |x: usize, y: usize| -> usize {
        let (mut x, mut y, mut out, mut scale) = (x, y, 0, 1);
        for _ in 0..m {
            out += ((x % q as usize + y % q as usize) % q as usize) * scale;
            x /= q as usize;
            y /= q as usize;
            scale *= q as usize;
        }
        out
    };
    let mut spans = BTreeSet::new();
    let tuples = size.pow(r as u32);
    for t in 0..tuples {
        let mut span = BTreeSet::from([0usize]);
        let mut rest = t;
        for _ in 0..r {
            let v = rest % size;
            rest /= size;
            let current: Vec<usize> = span.iter().copied().collect();
            let mut multiple = 0;
            for _ in 1..q {
                multiple = add(multiple, v);
                for &w in &current {
                    span.insert(add(w, multiple));
                }
            }
        }
        if span.len() == (q as usize).pow(r as u32) {
            spans.insert(span.into_iter().collect::<Vec<_>>());
        }
    }
    spans.len()
}
