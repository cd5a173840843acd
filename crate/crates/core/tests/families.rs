use std::collections::BTreeSet;

use num_bigint::BigUint;
use weylcode::families::{
    code_15_8_3, code_15_8_3_family, distance2_family, distance2_spec, family_to_b,
    laflamme_spec, puncture, subspace_family, SetFamily,
};
use weylcode::galois::{gaussian_binomial, FieldVector, PrimeField};
use weylcode::gottesman::Purity;
use weylcode::{Error, Limits};

/// Vector index of `e_k` (k mod n, `e_0` at position n).
fn idx(k: usize, n: usize) -> usize {
    (k % n + n - 1) % n
}

fn vec_from(f: PrimeField, n: usize, terms: &[(usize, i64)], all: i64) -> FieldVector {
    let mut v = vec![all; n];
    for &(k, c) in terms {
        v[idx(k, n)] += c;
    }
    FieldVector::new(f, v)
}

/// `R_1 .. R_4` from the proof of the distance-2 theorem.
fn analytic_f2(n: usize, q: u32) -> BTreeSet<FieldVector> {
    let f = PrimeField::new(q).unwrap();
    let m = (n - 1) / 2;
    let mut out = BTreeSet::new();
    for a in 0..q as i64 {
        for b in 0..q as i64 {
            if a == 0 && b == 0 {
                continue;
            }
            out.insert(vec_from(f, n, &[(m, a), (m + 1, a), (0, b)], a - b));
            out.insert(vec_from(f, n, &[(0, a), (1, a), (m + 1, b)], 0));
            out.insert(vec_from(f, n, &[(0, a), (n - 1, a), (m, b)], 0));
            for j in 1..n {
                if j == m || j == m + 1 {
                    continue;
                }
                out.insert(vec_from(f, n, &[(j + m, a), (j + m + 1, a), (j, b)], a));
            }
        }
    }
    out
}

/// `A_1 .. A_4`, the nonzero differences of the distance-2 description.
fn analytic_differences(n: usize, q: u32) -> BTreeSet<FieldVector> {
    let f = PrimeField::new(q).unwrap();
    let u = |i: usize, c: i64| -> Vec<(usize, i64)> {
        (1..n).map(|j| (j, if j == i { 0 } else { c })).collect()
    };
    let mut out = BTreeSet::new();
    for alpha in 0..q as i64 {
        if alpha != 0 {
            out.insert(vec_from(f, n, &[(0, alpha)], 0));
        }
        for i in 1..n {
            if alpha != 0 {
                let mut t = u(i, alpha);
                t.push((0, 1));
                out.insert(vec_from(f, n, &t, 0));
            }
            for beta in 1..q as i64 {
                if alpha != q as i64 - 1 {
                    let mut t = u(i, beta);
                    t.push((0, alpha));
                    out.insert(vec_from(f, n, &t, 0));
                }
                if alpha == 0 {
                    continue;
                }
                for j in 1..n {
                    if alpha == beta && i == j {
                        continue;
                    }
                    let mut t = u(i, alpha);
                    t.extend(u(j, beta));
                    out.insert(vec_from(f, n, &t, 0));
                }
            }
        }
    }
    out.remove(&FieldVector::zeros(f, n));
    // the case split lists one sign of each difference
    let negated: Vec<FieldVector> = out.iter().map(|v| v.neg()).collect();
    out.extend(negated);
    out
}

#[test]
fn distance2_forbidden_set_matches_case_split() {
    let lim = Limits::default();
    for (n, q) in [(3, 2), (5, 2), (7, 2), (5, 3)] {
        let spec = distance2_spec(n, q).unwrap();
        let f2 = spec.forbidden_set(2, &lim).unwrap();
        assert_eq!(f2.members, analytic_f2(n, q), "n={n} q={q}");
        if n == 3 {
            // R_1 .. R_3 overlap when m + 1 = n - 1, and the description
            // cannot avoid them: K = 1 + 3(q - 1) > q breaks the Singleton
            // bound K <= q^{n - 2(d - 1)}.
            assert!(f2.len() < n * (q as usize * q as usize - 1));
            assert!(!distance2_family(n, q).unwrap().verify_distance(2, &lim).unwrap().pass);
            continue;
        }
        assert_eq!(f2.len(), n * (q as usize * q as usize - 1), "n={n} q={q}");

        let b = distance2_family(n, q).unwrap();
        let diffs: BTreeSet<FieldVector> = b
            .members()
            .iter()
            .flat_map(|x| b.members().iter().map(move |y| x.sub(y).unwrap()))
            .filter(|v| !v.is_zero())
            .collect();
        assert_eq!(diffs, analytic_differences(n, q), "n={n} q={q}");
        assert!(diffs.is_disjoint(&f2.members));
    }
}

#[test]
fn distance2_family_verifies() {
    let lim = Limits::default();
    for (n, q) in [(5, 2), (7, 2), (9, 2), (5, 3), (7, 3), (5, 5)] {
        let spec = distance2_spec(n, q).unwrap();
        assert_eq!(spec.purity_radius(2, &lim).unwrap(), Purity::AtLeast(2));
        let b = distance2_family(n, q).unwrap();
        assert_eq!(b.len(), 1 + n * (q as usize - 1));
        let rep = b.verify_distance(2, &lim).unwrap();
        assert!(rep.pass, "n={n} q={q}: {rep:?}");
    }
}

#[test]
fn laflamme_weight_sets() {
    let lim = Limits::default();
    for n in [7usize, 9, 11, 13, 15] {
        let spec = laflamme_spec(n).unwrap();
        let w1: BTreeSet<usize> = spec
            .forbidden_set(2, &lim)
            .unwrap()
            .members
            .iter()
            .map(|u| u.weight())
            .collect();
        assert_eq!(w1, BTreeSet::from([1, 2, 3, n - 3, n - 2, n - 1]), "n={n}");
        let w2: BTreeSet<usize> = spec
            .forbidden_set(3, &lim)
            .unwrap()
            .members
            .iter()
            .map(|u| u.weight())
            .collect();
        let allowed: BTreeSet<usize> = (1..=6).chain(n.saturating_sub(6)..n).collect();
        assert!(w2.is_subset(&allowed), "n={n}: {w2:?}");
        assert_eq!(spec.purity_radius(3, &lim).unwrap(), Purity::AtLeast(3));
    }
}

#[test]
fn laflamme_forbidden_sets_add_up() {
    let lim = Limits::default();
    let spec = laflamme_spec(7).unwrap();
    let f = spec.field();
    let zero = FieldVector::zeros(f, 7);
    let mut f2 = spec.forbidden_set(2, &lim).unwrap().members;
    f2.insert(zero.clone());
    let sums: BTreeSet<FieldVector> = f2
        .iter()
        .flat_map(|x| f2.iter().map(move |y| x.add(y).unwrap()))
        .collect();
    let mut f3 = spec.forbidden_set(3, &lim).unwrap().members;
    assert!(!f3.contains(&zero));
    f3.insert(zero);
    assert_eq!(f3, sums);
}

#[test]
fn laflamme_f2_is_span_of_columns() {
    let lim = Limits::default();
    let n = 9;
    let spec = laflamme_spec(n).unwrap();
    let lt = spec.l().transpose();
    let mt = spec.m().transpose();
    let mut expected = BTreeSet::new();
    for i in 0..n {
        let (l, m) = (lt.column(i), mt.column(i));
        expected.insert(l.clone());
        expected.insert(m.clone());
        expected.insert(l.add(&m).unwrap());
    }
    assert_eq!(spec.forbidden_set(2, &lim).unwrap().members, expected);
}

#[test]
fn fifteen_eight_three() {
    let lim = Limits::default();
    let b = code_15_8_3(&lim).unwrap();
    assert_eq!(b.code_dimension().unwrap(), BigUint::from(8u32));
    assert!(b.verify_distance(3, &lim).unwrap().pass);
    for s in code_15_8_3_family().members() {
        let mut v = vec![0i64; 15];
        for &p in s {
            v[p - 1] = 1;
        }
        assert!(b.members().contains(&FieldVector::new(b.spec().field(), v)));
    }
}

#[test]
fn subspace_family_structure() {
    let lim = Limits::default();
    let fam = subspace_family(5, 3, 2, &lim).unwrap();
    assert_eq!(fam.len(), 155);
    assert_eq!(fam.universe(), 32);
    assert!(fam.members().iter().all(|s| s.len() == 8));
    assert_eq!(fam.symmetric_difference_sizes(), BTreeSet::from([8, 12]));
    // pairwise intersections are subspaces (positions p encode vectors p - 1)
    for (i, a) in fam.members().iter().enumerate() {
        for b in &fam.members()[i + 1..] {
            let inter: Vec<usize> = a.intersection(b).map(|p| p - 1).collect();
            for &x in &inter {
                for &y in &inter {
                    assert!(inter.contains(&(x ^ y)));
                }
            }
        }
    }
}

#[test]
fn subspace_counts_match_brute_force() {
    let lim = Limits::default();
    for (q, max_m) in [(2u32, 5usize), (3, 3)] {
        for m in 0..=max_m {
            for r in 0..=m {
                let fam = subspace_family(m, r, q, &lim).unwrap();
                let expect = gaussian_binomial(m as u32, q, r as u32).unwrap();
                assert_eq!(BigUint::from(fam.len()), expect, "m={m} r={r} q={q}");
            }
        }
    }
}

#[test]
fn thirty_three_and_thirty_one() {
    let lim = Limits::default();
    let fam = subspace_family(5, 3, 2, &lim).unwrap();
    let b33 = family_to_b(&fam, 33, &lim).unwrap();
    assert_eq!(b33.code_dimension().unwrap(), BigUint::from(155u32));
    assert!(b33.verify_distance(3, &lim).unwrap().pass);

    let punctured = puncture(&fam, 1).unwrap();
    assert_eq!(punctured.len(), 155);
    assert_eq!(punctured.universe(), 31);
    let sizes = punctured.symmetric_difference_sizes();
    assert!(sizes.iter().all(|s| (7..=13).contains(s)));
    let b31 = family_to_b(&punctured, 31, &lim).unwrap();
    assert!(b31.verify_distance(3, &lim).unwrap().pass);
}

#[test]
fn forbidden_symmetric_difference_rejected() {
    let lim = Limits::default();
    let fam = SetFamily::from_lists(15, &[vec![1, 2], vec![3, 4]]).unwrap();
    assert!(matches!(
        family_to_b(&fam, 15, &lim),
        Err(Error::ForbiddenWeight {
            first: 0,
            second: 1,
            size: 4
        })
    ));
    let fam = SetFamily::from_lists(16, &[vec![16]]).unwrap();
    assert!(family_to_b(&fam, 15, &lim).is_err());
}
