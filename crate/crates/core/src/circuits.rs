//! Gates over GF(q), circuits, and the encoder for sum-zero form codes.
//!
//! Each register holds one GF(q) digit; register `r` is digit `r` of the
//! basis index used by [`SparseState`]. Gates:
//!
//! - `inverter`: `|a> -> |-a>`
//! - `c-u`: `|a>|b> -> |a>|a + b>`
//! - `c-v`: `|a>|b> -> w(ab) |a>|b>`
//! - `cc-u`: `|a, b, c> -> |a, b, c + ab>`
//! - `cc-v`: `|a, b, c> -> w(abc) |a, b, c>`
//! - `fourier`: `|a> -> q^{-1/2} sum_x w(ax) |x>`
//! - `prepare-zero`: asserts the register is `|0>` on the whole support
//!
//! with `w = e^{2 pi i / q}`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::encodable::EncodableForm;
use crate::galois::FieldVector;
use crate::oracle::{root, state_dim, SparseState};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GateKind {
    Inverter,
    #[serde(rename = "c-u")]
    CU,
    #[serde(rename = "c-v")]
    CV,
    #[serde(rename = "cc-u")]
    CCU,
    #[serde(rename = "cc-v")]
    CCV,
    Fourier,
    PrepareZero,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Inverter | GateKind::Fourier | GateKind::PrepareZero => 1,
            GateKind::CU | GateKind::CV => 2,
            GateKind::CCU | GateKind::CCV => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGate")]
pub struct Gate {
    kind: GateKind,
    operands: Vec<usize>,
}

#[derive(Deserialize)]
struct RawGate {
    kind: GateKind,
    operands: Vec<usize>,
}

impl TryFrom<RawGate> for Gate {
    type Error = Error;

    fn try_from(raw: RawGate) -> Result<Self> {
        Gate::new(raw.kind, raw.operands)
    }
}

impl Gate {
    /// Operands must match the arity and be pairwise distinct.
    pub fn new(kind: GateKind, operands: Vec<usize>) -> Result<Self> {
        if operands.len() != kind.arity() {
            return Err(Error::InvalidArgument(format!(
                "{kind:?} takes {} operands, got {}",
                kind.arity(),
                operands.len()
            )));
        }
        for (i, a) in operands.iter().enumerate() {
            if operands[i + 1..].contains(a) {
                return Err(Error::InvalidArgument(format!(
                    "{kind:?} uses register {a} twice"
                )));
            }
        }
        Ok(Gate { kind, operands })
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn operands(&self) -> &[usize] {
        &self.operands
    }

    pub fn inverter(r: usize) -> Gate {
        Gate::new(GateKind::Inverter, vec![r]).expect("arity")
    }

    pub fn fourier(r: usize) -> Gate {
        Gate::new(GateKind::Fourier, vec![r]).expect("arity")
    }

    pub fn prepare_zero(r: usize) -> Gate {
        Gate::new(GateKind::PrepareZero, vec![r]).expect("arity")
    }

    pub fn cu(control: usize, target: usize) -> Result<Gate> {
        Gate::new(GateKind::CU, vec![control, target])
    }

    pub fn cv(a: usize, b: usize) -> Result<Gate> {
        Gate::new(GateKind::CV, vec![a, b])
    }

    pub fn ccu(a: usize, b: usize, target: usize) -> Result<Gate> {
        Gate::new(GateKind::CCU, vec![a, b, target])
    }

    pub fn ccv(a: usize, b: usize, c: usize) -> Result<Gate> {
        Gate::new(GateKind::CCV, vec![a, b, c])
    }
}

/// An ordered gate list on `registers` GF(q) digits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCircuit")]
pub struct Circuit {
    q: u32,
    registers: usize,
    gates: Vec<Gate>,
}

#[derive(Deserialize)]
struct RawCircuit {
    q: u32,
    registers: usize,
    gates: Vec<Gate>,
}

impl TryFrom<RawCircuit> for Circuit {
    type Error = Error;

    fn try_from(raw: RawCircuit) -> Result<Self> {
        let mut c = Circuit::new(raw.q, raw.registers)?;
        c.extend(raw.gates)?;
        Ok(c)
    }
}

impl Circuit {
    pub fn new(q: u32, registers: usize) -> Result<Self> {
        crate::galois::PrimeField::new(q)?;
        Ok(Circuit {
            q,
            registers,
            gates: Vec::new(),
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn registers(&self) -> usize {
        self.registers
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Some(&r) = gate.operands.iter().find(|&&r| r >= self.registers) {
            return Err(Error::RegisterOutOfRange {
                register: r,
                registers: self.registers,
            });
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<()> {
        gates.into_iter().try_for_each(|g| self.push(g))
    }

    /// Runs the gates in order on `input`.
    pub fn simulate(&self, input: &SparseState) -> Result<SparseState> {
        if input.q() != self.q {
            return Err(Error::ModulusMismatch(self.q, input.q()));
        }
        if input.n() != self.registers {
            return Err(Error::DimensionMismatch {
                expected: self.registers,
                found: input.n(),
            });
        }
        let mut state = input.clone();
        for g in &self.gates {
            state = self.apply_gate(g, &state)?;
        }
        Ok(state)
    }

    fn apply_gate(&self, gate: &Gate, state: &SparseState) -> Result<SparseState> {
        let q = self.q as u64;
        let n = self.registers;
        let place: Vec<u64> = gate.operands.iter().map(|&r| q.pow(r as u32)).collect();
        let digit = |x: u64, k: usize| (x / place[k]) % q;
        let set = |x: u64, k: usize, v: u64| x - digit(x, k) * place[k] + v * place[k];
        let w = |k: u64| root((k % q) as u32, self.q);
        let mut out: BTreeMap<u64, Complex64> = BTreeMap::new();
        let mut put = |y: u64, c: Complex64| *out.entry(y).or_insert_with(Complex64::zero) += c;
        for (x, c) in state.iter() {
            match gate.kind {
                GateKind::Inverter => put(set(x, 0, (q - digit(x, 0)) % q), c),
                GateKind::CU => put(set(x, 1, (digit(x, 0) + digit(x, 1)) % q), c),
                GateKind::CV => put(x, c * w(digit(x, 0) * digit(x, 1))),
                GateKind::CCU => {
                    let v = (digit(x, 2) + digit(x, 0) * digit(x, 1)) % q;
                    put(set(x, 2, v), c)
                }
                GateKind::CCV => put(x, c * w(digit(x, 0) * digit(x, 1) % q * digit(x, 2))),
                GateKind::Fourier => {
                    let a = digit(x, 0);
                    let s = c / (q as f64).sqrt();
                    for v in 0..q {
                        put(set(x, 0, v), s * w(a * v));
                    }
                }
                GateKind::PrepareZero => {
                    if digit(x, 0) != 0 {
                        return Err(Error::InvalidArgument(format!(
                            "register {} is not |0> before prepare-zero",
                            gate.operands[0]
                        )));
                    }
                    put(x, c)
                }
            }
        }
        state_dim(self.q, n)?;
        Ok(SparseState::from_map(self.q, n, out))
    }
}

/// `C-U_n`: `target_i += control_i` for each `i`.
pub fn cu_n(control: &[usize], target: &[usize]) -> Result<Vec<Gate>> {
    pairwise(control, target, Gate::cu)
}

/// `C-V_n`: phase `w(a . b)`.
pub fn cv_n(a: &[usize], b: &[usize]) -> Result<Vec<Gate>> {
    pairwise(a, b, Gate::cv)
}

fn pairwise(a: &[usize], b: &[usize], f: fn(usize, usize) -> Result<Gate>) -> Result<Vec<Gate>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}

/// `CC-V` on `(a, b, c)` from `CC-U` and `C-V`, borrowing a zero ancilla:
/// `anc += ab`, phase `w(anc c)`, then `anc += ab` another `q - 1` times.
pub fn ccv_decomposition(q: u32, a: usize, b: usize, c: usize, anc: usize) -> Result<Vec<Gate>> {
    let mut gates = vec![Gate::ccu(a, b, anc)?, Gate::cv(anc, c)?];
    for _ in 1..q {
        gates.push(Gate::ccu(a, b, anc)?);
    }
    Ok(gates)
}

/// Maps `|0^n>` to `q^{-(n-1)/2} sum_{x in C} |x>` with `C` the sum-zero
/// words: Fourier on the first `n - 1` digits, then `x_n = -(x_1 + ... +
/// x_{n-1})`.
pub fn uniform_over_c(n: usize, q: u32) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one register".into()));
    }
    let mut c = Circuit::new(q, n)?;
    let regs: Vec<usize> = (0..n).collect();
    c.extend(uniform_gates(&regs)?)?;
    Ok(c)
}

fn uniform_gates(regs: &[usize]) -> Result<Vec<Gate>> {
    let (&last, rest) = regs.split_last().expect("nonempty");
    let mut gates: Vec<Gate> = rest.iter().map(|&r| Gate::fourier(r)).collect();
    for &r in rest {
        gates.push(Gate::cu(r, last)?);
    }
    gates.push(Gate::inverter(last));
    Ok(gates)
}

/// Register layout of the encoder: `[c | d | x | ancilla]`, `n` digits each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncoderLayout {
    pub n: usize,
}

impl EncoderLayout {
    pub fn registers(&self) -> usize {
        4 * self.n
    }

    pub fn c(&self) -> Vec<usize> {
        (0..self.n).collect()
    }

    pub fn d(&self) -> Vec<usize> {
        (self.n..2 * self.n).collect()
    }

    pub fn x(&self) -> Vec<usize> {
        (2 * self.n..3 * self.n).collect()
    }

    pub fn ancilla(&self) -> Vec<usize> {
        (3 * self.n..4 * self.n).collect()
    }
}

/// The encoder `|c, d>|0^n>|0^n> -> |c, d> phi_{c,d} |0^n>`:
///
/// 1. uniform superposition over `C` on `x`
/// 2. phase `w(-c . x)` (inverters around `C-V_n`)
/// 3. `x += d`
/// 4. `anc = D x` by repeated `C-U`
/// 5. phase `w(x . anc) = w(Q(x))`
/// 6. `anc -= D x`
pub fn build_encoder(form: &EncodableForm) -> Result<Circuit> {
    let n = form.n();
    let q = form.q();
    let layout = EncoderLayout { n };
    let (c, d, x, anc) = (layout.c(), layout.d(), layout.x(), layout.ancilla());
    let mut circ = Circuit::new(q, layout.registers())?;
    circ.extend(x.iter().chain(&anc).map(|&r| Gate::prepare_zero(r)))?;
    circ.extend(uniform_gates(&x)?)?;
    circ.extend(c.iter().map(|&r| Gate::inverter(r)))?;
    circ.extend(cv_n(&c, &x)?)?;
    circ.extend(c.iter().map(|&r| Gate::inverter(r)))?;
    circ.extend(cu_n(&d, &x)?)?;
    let dx = |times: &dyn Fn(u32) -> u32| -> Result<Vec<Gate>> {
        let mut gates = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = form.upper().get(i, j);
                if v == 0 {
                    continue;
                }
                for _ in 0..times(v) {
                    gates.push(Gate::cu(x[j], anc[i])?);
                }
            }
        }
        Ok(gates)
    };
    circ.extend(dx(&|v| v)?)?;
    circ.extend(cv_n(&x, &anc)?)?;
    circ.extend(dx(&|v| q - v)?)?;
    circ.extend(anc.iter().map(|&r| Gate::prepare_zero(r)))?;
    Ok(circ)
}

/// `|c, d>|0^n>|0^n>`.
pub fn encoder_input(c: &FieldVector, d: &FieldVector) -> Result<SparseState> {
    let n = c.len();
    if d.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: d.len(),
        });
    }
    if c.modulus() != d.modulus() {
        return Err(Error::ModulusMismatch(c.modulus(), d.modulus()));
    }
    let mut word: Vec<u32> = c.entries().iter().chain(d.entries()).copied().collect();
    word.resize(4 * n, 0);
    SparseState::basis(c.modulus(), 4 * n, &word)
}

/// The data register of an encoder output, after checking that the message
/// registers still hold `(c, d)` and the ancillas are exactly zero on the
/// whole support.
pub fn data_register(
    output: &SparseState,
    c: &FieldVector,
    d: &FieldVector,
) -> Result<SparseState> {
    let n = c.len();
    let layout = EncoderLayout { n };
    if output.n() != layout.registers() {
        return Err(Error::DimensionMismatch {
            expected: layout.registers(),
            found: output.n(),
        });
    }
    let mut terms = Vec::with_capacity(output.support_len());
    for (i, amp) in output.iter() {
        let w = output.word(i);
        if w[..n] != *c.entries() || w[n..2 * n] != *d.entries() {
            return Err(Error::InvalidArgument(
                "encoder changed the message registers".into(),
            ));
        }
        if w[3 * n..].iter().any(|&v| v != 0) {
            return Err(Error::InvalidArgument("ancillas not returned to zero".into()));
        }
        terms.push((w[2 * n..3 * n].to_vec(), amp));
    }
    SparseState::from_amplitudes(output.q(), n, terms)
}

/// Runs the encoder on the message `(c, d)` and returns the data register.
pub fn encode(form: &EncodableForm, c: &FieldVector, d: &FieldVector) -> Result<SparseState> {
    let circ = build_encoder(form)?;
    let out = circ.simulate(&encoder_input(c, d)?)?;
    data_register(&out, c, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(q: u32, w: &[u32]) -> SparseState {
        SparseState::basis(q, w.len(), w).unwrap()
    }

    fn single(q: u32, registers: usize, g: Gate) -> Circuit {
        let mut c = Circuit::new(q, registers).unwrap();
        c.push(g).unwrap();
        c
    }

    #[test]
    fn cu_is_cnot_over_gf2() {
        let c = single(2, 2, Gate::cu(0, 1).unwrap());
        for (input, output) in [([0, 0], [0, 0]), ([0, 1], [0, 1]), ([1, 0], [1, 1]), ([1, 1], [1, 0])] {
            let out = c.simulate(&basis(2, &input)).unwrap();
            assert_eq!(out.amplitude(&output), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn fourier_is_hadamard_over_gf2() {
        let c = single(2, 1, Gate::fourier(0));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let out = c.simulate(&basis(2, &[0])).unwrap();
        assert!((out.amplitude(&[0]) - h).norm() < 1e-15);
        assert!((out.amplitude(&[1]) - h).norm() < 1e-15);
        let out = c.simulate(&basis(2, &[1])).unwrap();
        assert!((out.amplitude(&[1]) + h).norm() < 1e-15);
    }

    #[test]
    fn ccv_decomposition_matches_direct_gate() {
        for q in [2u32, 3, 5] {
            let direct = single(q, 4, Gate::ccv(0, 1, 2).unwrap());
            let mut built = Circuit::new(q, 4).unwrap();
            built.extend(ccv_decomposition(q, 0, 1, 2, 3).unwrap()).unwrap();
            for a in 0..q {
                for b in 0..q {
                    for c in 0..q {
                        let s = basis(q, &[a, b, c, 0]);
                        let x = direct.simulate(&s).unwrap();
                        let y = built.simulate(&s).unwrap();
                        assert!((x.inner(&y).unwrap() - 1.0).norm() < 1e-12);
                        let k = (a * b * c) % q;
                        let expect = root(k, q);
                        assert!((x.amplitude(&[a, b, c, 0]) - expect).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn uniform_superposition() {
        let out = uniform_over_c(2, 2).unwrap().simulate(&basis(2, &[0, 0])).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(out.support_len(), 2);
        assert!((out.amplitude(&[0, 0]) - h).norm() < 1e-15);
        assert!((out.amplitude(&[1, 1]) - h).norm() < 1e-15);
        let one = uniform_over_c(1, 3).unwrap().simulate(&basis(3, &[0])).unwrap();
        assert_eq!(one, basis(3, &[0]));
        for (n, q) in [(3usize, 3u32), (4, 2), (3, 5)] {
            let out = uniform_over_c(n, q)
                .unwrap()
                .simulate(&basis(q, &vec![0; n]))
                .unwrap();
            assert_eq!(out.support_len(), (q as usize).pow(n as u32 - 1));
            let amp = 1.0 / ((q as f64).powi(n as i32 - 1)).sqrt();
            for (i, a) in out.iter() {
                assert!((a - amp).norm() < 1e-12);
                assert_eq!(out.word(i).iter().sum::<u32>() % q, 0);
            }
        }
    }

    #[test]
    fn arity_and_range_checks() {
        assert!(Gate::new(GateKind::CU, vec![0]).is_err());
        assert!(Gate::new(GateKind::CCU, vec![0, 1, 1]).is_err());
        let mut c = Circuit::new(2, 2).unwrap();
        assert!(matches!(
            c.push(Gate::inverter(2)),
            Err(Error::RegisterOutOfRange { register: 2, registers: 2 })
        ));
        let prep = single(3, 1, Gate::prepare_zero(0));
        assert!(prep.simulate(&basis(3, &[1])).is_err());
        assert!(Circuit::new(4, 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let form = crate::families::distance2_form(3, 3).unwrap();
        let c = build_encoder(&form).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.contains("\"kind\":\"c-u\""));
        let back: Circuit = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        let bad = r#"{"q":2,"registers":1,"gates":[{"kind":"c-u","operands":[0,1]}]}"#;
        assert!(serde_json::from_str::<Circuit>(bad).is_err());
    }
}
