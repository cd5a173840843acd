use std::collections::HashMap;

use weylcode::decoder::{decode, expected_syndrome, measure_syndrome, search_error};
use weylcode::families::code_15_8_3;
use weylcode::oracle::{apply, code_basis, Codeword};
use weylcode::weyl::WeylElement;
use weylcode::{Error, Limits};

fn setup() -> (weylcode::fourier_code::FourierDescription, Vec<Codeword>) {
    let lim = Limits::default();
    let b = code_15_8_3(&lim).unwrap();
    let basis = code_basis(&b, &lim).unwrap();
    (b, basis)
}

#[test]
fn every_single_error_is_corrected() {
    let lim = Limits::default();
    let (b, basis) = setup();
    let group = b.spec().group();
    let errors: Vec<WeylElement> = group.enumerate_bounded(1, &lim).unwrap().collect();
    assert_eq!(errors.len(), 45);
    assert_eq!(basis.len(), 8);
    for cw in &basis {
        for g in &errors {
            let hit = apply(g, &cw.state).unwrap();
            let syn = measure_syndrome(&hit, b.spec()).unwrap();
            assert_eq!(syn, expected_syndrome(b.spec(), g, &cw.u).unwrap());
            let out = decode(&hit, &b, 1, &lim).unwrap();
            assert_eq!(out.correction.u, cw.u);
            let fid = out.state.fidelity(&cw.state).unwrap();
            assert!(fid >= 1.0 - 1e-9, "g={g:?}: {fid}");
        }
    }
}

#[test]
fn colliding_errors_differ_by_a_code_phase() {
    let lim = Limits::default();
    let (b, basis) = setup();
    let group = b.spec().group();
    let mut seen: HashMap<(usize, Vec<u32>), WeylElement> = HashMap::new();
    let mut collisions = 0;
    for (k, cw) in basis.iter().enumerate() {
        for g in group.enumerate_bounded(1, &lim).unwrap() {
            let syn = expected_syndrome(b.spec(), &g, &cw.u).unwrap();
            match seen.get(&(k, syn.phases.clone())) {
                None => {
                    seen.insert((k, syn.phases), g);
                }
                Some(first) => {
                    collisions += 1;
                    let diff = group
                        .compose(&group.inverse(first).unwrap(), &g)
                        .unwrap();
                    for other in &basis {
                        let moved = apply(&diff, &other.state).unwrap();
                        assert!((moved.fidelity(&other.state).unwrap() - 1.0).abs() < 1e-9);
                    }
                }
            }
        }
    }
    // distinct weight-1 errors differ by weight <= 2 < d, so no collisions
    assert_eq!(collisions, 0);
}

#[test]
fn some_double_error_has_no_solution() {
    let lim = Limits::default();
    let (b, basis) = setup();
    let group = b.spec().group();
    let cw = &basis[0];
    let found = group
        .enumerate_bounded(2, &lim)
        .unwrap()
        .filter(|g| group.weight(g) == 2)
        .find_map(|g| {
            let hit = apply(&g, &cw.state).unwrap();
            let syn = measure_syndrome(&hit, b.spec()).unwrap();
            match search_error(&syn, &b, 1, &lim) {
                Err(Error::NoSolution { t: 1 }) => Some(g),
                _ => None,
            }
        });
    let g = found.expect("a weight-2 error outside every correctable syndrome");
    let hit = apply(&g, &cw.state).unwrap();
    assert!(matches!(
        decode(&hit, &b, 1, &lim),
        Err(Error::NoSolution { t: 1 })
    ));
}
