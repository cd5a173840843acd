use num_rational::Rational64;
use serde::Serialize;
use serde_json::{json, Value};
use weylcode::circuits::encode;
use weylcode::decoder::decode;
use weylcode::families::{
    alpha_good, alpha_good_spec, code_15_8_3, distance2_family, distance2_form, family_to_b,
    puncture, random_alpha_good_search, subspace_family,
};
use weylcode::fourier_code::{bounds, greedy_construct, FourierDescription, GreedyOrder};
use weylcode::galois::FieldVector;
use weylcode::gottesman::{GottesmanSpec, Purity};
use weylcode::oracle::{apply, closed_form_codeword, codeword, kl_check};
use weylcode::{Error, Limits};

use crate::bundle::{CodeBundle, Loaded};
use crate::{CliError, FamilyName, Order, Outcome};

fn render<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// Rounds to 12 decimals so that printed amplitudes do not carry
/// last-digit noise or negative zeros.
fn tidy(x: f64) -> f64 {
    (x * 1e12).round() / 1e12 + 0.0
}

fn build(name: FamilyName, n: usize, q: u32, lim: &Limits) -> Result<CodeBundle, CliError> {
    let (b, d, provenance, length) = match name {
        FamilyName::D2 => (
            distance2_family(n, q)?,
            2,
            format!("distance-2 family, n = {n}, q = {q}"),
            n,
        ),
        FamilyName::Fifteen => (
            code_15_8_3(lim)?,
            3,
            "eight subsets of {1..15} over the Laflamme spec".to_string(),
            15,
        ),
        FamilyName::Subspace33 => {
            let fam = subspace_family(5, 3, 2, lim)?;
            (
                family_to_b(&fam, 33, lim)?,
                3,
                "2-dimensional subspaces of GF(3)^5 as subsets of {1..33}".to_string(),
                33,
            )
        }
        FamilyName::Subspace31 => {
            let fam = puncture(&subspace_family(5, 3, 2, lim)?, 1)?;
            (
                family_to_b(&fam, 31, lim)?,
                3,
                "subspace family punctured at the zero vector".to_string(),
                31,
            )
        }
    };
    let q = match name {
        FamilyName::D2 => q,
        _ => 2,
    };
    let form = distance2_form(length, q)?;
    CodeBundle::new(&b, d, provenance, Some(&form))
}

pub fn family(name: FamilyName, n: usize, q: u32, lim: &Limits) -> Result<String, CliError> {
    Ok(render(&build(name, n, q, lim)?))
}

fn load(text: &str) -> Result<Result<Loaded, Outcome>, CliError> {
    Ok(CodeBundle::parse(text)?.load()?.map_err(|witness| Outcome {
        output: render(&json!({ "pass": false, "witness": witness })),
        pass: false,
    }))
}

pub fn verify(text: &str, d: Option<usize>, lim: &Limits) -> Result<Outcome, CliError> {
    let loaded = match load(text)? {
        Ok(l) => l,
        Err(out) => return Ok(out),
    };
    let d = d.unwrap_or(loaded.bundle.claimed.d);
    let report = loaded.description.verify_distance(d, lim)?;
    Ok(Outcome {
        output: render(&json!({
            "pass": report.pass,
            "params": loaded.description.params(d)?,
            "report": report,
        })),
        pass: report.pass,
    })
}

pub fn oracle(text: &str, d: Option<usize>, lim: &Limits) -> Result<Outcome, CliError> {
    let loaded = match load(text)? {
        Ok(l) => l,
        Err(out) => return Ok(out),
    };
    let d = d.unwrap_or(loaded.bundle.claimed.d);
    let report = kl_check(&loaded.description, d, lim)?;
    Ok(Outcome {
        output: render(&report),
        pass: report.pass,
    })
}

pub fn greedy(text: &str, d: usize, order: Order, lim: &Limits) -> Result<String, CliError> {
    let bundle = CodeBundle::parse(text)?;
    let spec = GottesmanSpec::from_document(&bundle.spec)?;
    let (order, label) = match order {
        Order::WeightLex => (GreedyOrder::WeightLex, "weight-lex"),
        Order::Lex => (GreedyOrder::Lex, "lex"),
    };
    let g = greedy_construct(&spec, d, &order, lim)?;
    let provenance = format!(
        "greedy packing at d = {d} in {label} order; #F_d = {}, floor guarantee {}, packing guarantee {}",
        g.forbidden_set_size, g.floor_guarantee, g.packing_guarantee
    );
    let form = bundle.form.as_ref().map(|_| bundle.encodable_form()).transpose()?;
    Ok(render(&CodeBundle::new(
        &g.description,
        d,
        provenance,
        form.as_ref(),
    )?))
}

fn member(description: &FourierDescription, u: &[i64]) -> Result<FieldVector, CliError> {
    let spec = description.spec();
    if u.len() != spec.r() {
        return Err(CliError::Usage(format!(
            "u has {} entries, the spec has r = {}",
            u.len(),
            spec.r()
        )));
    }
    Ok(FieldVector::new(spec.field(), u.iter().copied()))
}

#[derive(Serialize)]
struct Amplitude {
    word: Vec<u32>,
    re: f64,
    im: f64,
}

pub fn encode_sim(text: &str, u: &[i64], top: usize, lim: &Limits) -> Result<String, CliError> {
    let loaded = match load(text)? {
        Ok(l) => l,
        Err(out) => return Err(CliError::Usage(out.output)),
    };
    let form = loaded.bundle.encodable_form()?;
    let spec = loaded.description.spec();
    let u = member(&loaded.description, u)?;
    let (c, d) = form.message_for(spec, &u)?;
    let out = encode(&form, &c, &d)?;
    let closed = closed_form_codeword(&form, &c, &d, lim)?;
    let fidelity = out.fidelity(&closed)?;
    let mut amps: Vec<(u64, f64, f64)> = out.iter().map(|(i, a)| (i, a.re, a.im)).collect();
    // largest modulus first, ties by basis index
    amps.sort_by(|x, y| {
        let (nx, ny) = (x.1.hypot(x.2), y.1.hypot(y.2));
        ny.total_cmp(&nx).then(x.0.cmp(&y.0))
    });
    let amplitudes: Vec<Amplitude> = amps
        .into_iter()
        .take(top)
        .map(|(i, re, im)| Amplitude {
            word: out.word(i),
            re: tidy(re),
            im: tidy(im),
        })
        .collect();
    Ok(render(&json!({
        "u": u.entries(),
        "c": c.entries(),
        "d": d.entries(),
        "support": out.support_len(),
        "fidelity_to_closed_form": tidy(fidelity),
        "amplitudes": amplitudes,
    })))
}

pub fn decode_sim(
    text: &str,
    u: &[i64],
    a: &[i64],
    b: &[i64],
    phase: i64,
    t: Option<usize>,
    lim: &Limits,
) -> Result<Outcome, CliError> {
    let loaded = match load(text)? {
        Ok(l) => l,
        Err(out) => return Ok(out),
    };
    let desc = &loaded.description;
    let group = desc.spec().group();
    let n = desc.spec().n();
    let pad = |v: &[i64]| -> Vec<i64> {
        if v.is_empty() {
            vec![0; n]
        } else {
            v.to_vec()
        }
    };
    let error = group.element(phase, &pad(a), &pad(b))?;
    let t = t.unwrap_or((loaded.bundle.claimed.d.max(1) - 1) / 2);
    let u = member(desc, u)?;
    let original = codeword(desc, &u, lim)?;
    let hit = apply(&error, &original)?;
    match decode(&hit, desc, t, lim) {
        Ok(out) => {
            let fidelity = out.state.fidelity(&original)?;
            let pass = out.correction.u == u && fidelity >= 1.0 - 1e-9;
            Ok(Outcome {
                output: render(&json!({
                    "pass": pass,
                    "recovered_u": out.correction.u.entries(),
                    "identified_error": out.correction.error,
                    "applied_correction": group.inverse(&out.correction.error)?,
                    "syndrome": out.syndrome.phases,
                    "fidelity": tidy(fidelity),
                })),
                pass,
            })
        }
        Err(Error::NoSolution { t }) => Ok(Outcome {
            output: render(&json!({
                "pass": false,
                "recovered_u": Value::Null,
                "witness": { "kind": "no_solution", "t": t, "error": error },
            })),
            pass: false,
        }),
        Err(e) => Err(e.into()),
    }
}

pub fn table(lim: &Limits) -> Result<String, CliError> {
    let rows = [
        (FamilyName::D2, 3, 2, "d2"),
        (FamilyName::D2, 5, 2, "d2"),
        (FamilyName::D2, 7, 2, "d2"),
        (FamilyName::D2, 5, 3, "d2"),
        (FamilyName::Fifteen, 15, 2, "15_8_3"),
        (FamilyName::Subspace33, 33, 2, "subspace33"),
        (FamilyName::Subspace31, 31, 2, "subspace31"),
    ];
    let mut out = String::from("n,q,K,d,lower_bound,upper_bound,source\n");
    for (name, n, q, source) in rows {
        let p = build(name, n, q, lim)?.claimed;
        let bd = bounds(p.n, p.q, (p.d - 1) / 2);
        out.push_str(&format!(
            "{},{},{},{},{},{},{source}\n",
            p.n, p.q, p.k, p.d, bd.lower, bd.upper
        ));
    }
    Ok(out)
}

pub fn alpha_search(
    n: usize,
    alpha: &str,
    seed: u64,
    attempts: usize,
    lim: &Limits,
) -> Result<String, CliError> {
    let alpha: Rational64 = alpha
        .parse()
        .map_err(|e| CliError::Usage(format!("alpha {alpha:?}: {e}")))?;
    let search = random_alpha_good_search(n, alpha, seed, attempts, lim)?;
    let Some(r) = search.found else {
        return Ok(render(&json!({
            "found": false,
            "attempts": search.attempts,
        })));
    };
    let report = alpha_good(&r, alpha, lim)?;
    let spec = alpha_good_spec(&r)?;
    let purity = match spec.purity_radius(report.k + 1, lim)? {
        Purity::Exact(w) => json!({ "exact": w }),
        Purity::AtLeast(w) => json!({ "at_least": w }),
    };
    Ok(render(&json!({
        "found": true,
        "attempts": search.attempts,
        "R": r.to_rows(),
        "k": report.k,
        "purity_radius": purity,
        "spec": spec.to_document(),
    })))
}
