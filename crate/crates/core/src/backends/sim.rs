use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution as _};

use super::ParameterStore;
use crate::ansatz::{Angle, Circuit, Gate};
use crate::error::{Error, Result};

const ZERO_NORM: f64 = 1e-12;

type Mat2 = [[Complex64; 2]; 2];

/// Amplitudes over `2^n` basis states; qubit 0 is the least significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub n_qubits: usize,
    pub amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(n_qubits: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector { n_qubits, amps }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn apply_1q(&mut self, q: usize, m: &Mat2) {
        let bit = 1 << q;
        for block in self.amps.chunks_exact_mut(2 * bit) {
            let (lo, hi) = block.split_at_mut(bit);
            for (x, y) in lo.iter_mut().zip(hi) {
                let (a, b) = (*x, *y);
                *x = m[0][0] * a + m[0][1] * b;
                *y = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    fn apply_crz(&mut self, ctrl: usize, tgt: usize, theta: f64) {
        let lo = Complex64::from_polar(1.0, -theta / 2.0);
        let hi = Complex64::from_polar(1.0, theta / 2.0);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i >> ctrl & 1 == 1 {
                *a *= if i >> tgt & 1 == 1 { hi } else { lo };
            }
        }
    }

    fn apply_cx(&mut self, ctrl: usize, tgt: usize) {
        let t = 1 << tgt;
        for i in 0..self.amps.len() {
            if i >> ctrl & 1 == 1 && i & t == 0 {
                self.amps.swap(i, i | t);
            }
        }
    }

    fn apply(&mut self, g: &Gate, ps: &ParameterStore) -> Result<()> {
        match g {
            Gate::H(q) => self.apply_1q(*q, &hadamard()),
            Gate::Rx(q, a) => self.apply_1q(*q, &rx(angle(a, ps)?)),
            Gate::Rz(q, a) => self.apply_1q(*q, &rz(angle(a, ps)?)),
            Gate::CRz(c, t, a) => self.apply_crz(*c, *t, angle(a, ps)?),
            Gate::CX(c, t) => self.apply_cx(*c, *t),
        }
        Ok(())
    }
}

fn angle(a: &Angle, ps: &ParameterStore) -> Result<f64> {
    match a {
        Angle::Const(x) => Ok(*x),
        Angle::Sym(name) => ps.scalar(name),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn hadamard() -> Mat2 {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]
}

fn rx(theta: f64) -> Mat2 {
    let (s, co) = libm::sincos(theta / 2.0);
    [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
}

fn rz(theta: f64) -> Mat2 {
    let zero = c(0.0, 0.0);
    [[Complex64::from_polar(1.0, -theta / 2.0), zero], [zero, Complex64::from_polar(1.0, theta / 2.0)]]
}

fn pauli(k: u8) -> Mat2 {
    let (o, i, z) = (c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0));
    match k {
        1 => [[z, o], [o, z]],
        2 => [[z, -i], [i, z]],
        _ => [[o, z], [z, -o]],
    }
}

/// Runs the gates on `|0…0⟩`; postselection is not applied.
pub fn statevector(circuit: &Circuit, ps: &ParameterStore) -> Result<StateVector> {
    run(circuit, ps, &[])
}

/// Pauli insertions `(gate index, qubit, 1=X 2=Y 3=Z)` after two-qubit gates.
fn run(circuit: &Circuit, ps: &ParameterStore, errors: &[(usize, usize, u8)]) -> Result<StateVector> {
    circuit.validate()?;
    resume(circuit, ps, StateVector::zero(circuit.n_qubits), 0, errors)
}

/// Continues from `sv`, the state before gate `from`.
fn resume(
    circuit: &Circuit,
    ps: &ParameterStore,
    mut sv: StateVector,
    from: usize,
    errors: &[(usize, usize, u8)],
) -> Result<StateVector> {
    let mut next = errors.iter().peekable();
    for (i, g) in circuit.ops.iter().enumerate().skip(from) {
        sv.apply(g, ps)?;
        while let Some(&&(at, q, k)) = next.peek() {
            if at != i {
                break;
            }
            sv.apply_1q(q, &pauli(k));
            next.next();
        }
    }
    Ok(sv)
}

/// Outcome probabilities over the open qubits; bit `j` of an index is the
/// reading of `open[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub probs: Vec<f64>,
    pub n_open: usize,
}

impl Distribution {
    /// Probability that open qubit `j` reads 1.
    pub fn marginal_one(&self, j: usize) -> f64 {
        self.probs.iter().enumerate().filter(|(i, _)| i >> j & 1 == 1).map(|(_, p)| p).sum()
    }

    /// Keys are bitstrings whose `j`-th character is open qubit `j`.
    pub fn to_map(&self) -> BTreeMap<String, f64> {
        (0..self.probs.len()).map(|i| (bitstring(i, self.n_open), self.probs[i])).collect()
    }
}

fn bitstring(i: usize, n: usize) -> String {
    (0..n).map(|j| if i >> j & 1 == 1 { '1' } else { '0' }).collect()
}

/// Maps a basis index to its open-qubit index, or `None` when it violates
/// postselection.
fn outcome(circuit: &Circuit, basis: usize) -> Option<usize> {
    if circuit.postselect.iter().any(|&(q, b)| (basis >> q & 1) as u8 != b) {
        return None;
    }
    Some(circuit.open.iter().enumerate().fold(0, |acc, (j, &q)| acc | (basis >> q & 1) << j))
}

/// Exact postselected and normalised distribution over the open qubits.
pub fn evaluate(circuit: &Circuit, ps: &ParameterStore) -> Result<Distribution> {
    let sv = statevector(circuit, ps)?;
    let n_open = circuit.open.len();
    let mut probs = vec![0.0; 1 << n_open];
    for (basis, a) in sv.amps.iter().enumerate() {
        if let Some(o) = outcome(circuit, basis) {
            probs[o] += a.norm_sqr();
        }
    }
    let total: f64 = probs.iter().sum();
    if total < ZERO_NORM {
        return Err(Error::ZeroNorm(total));
    }
    probs.iter_mut().for_each(|p| *p /= total);
    Ok(Distribution { probs, n_open })
}

/// Shot counts over the open qubits, indexed like [`Distribution::probs`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counts {
    pub counts: Vec<u64>,
    pub n_open: usize,
    pub discarded: u64,
}

impl Counts {
    pub fn kept(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let kept = self.kept().max(1) as f64;
        self.counts.iter().map(|&k| k as f64 / kept).collect()
    }

    /// Fraction of kept shots in which open qubit `j` read 1.
    pub fn marginal_one(&self, j: usize) -> f64 {
        let ones: u64 = self.counts.iter().enumerate().filter(|(i, _)| i >> j & 1 == 1).map(|(_, k)| k).sum();
        ones as f64 / self.kept().max(1) as f64
    }

    pub fn to_map(&self) -> BTreeMap<String, u64> {
        (0..self.counts.len()).map(|i| (bitstring(i, self.n_open), self.counts[i])).collect()
    }
}

/// Probabilities of each kept outcome followed by the discard probability.
/// Readout bits in `flip` are inverted.
fn classes(circuit: &Circuit, sv: &StateVector, flip: usize) -> Vec<f64> {
    let kept = 1 << circuit.open.len();
    let mut probs = vec![0.0; kept + 1];
    for (basis, a) in sv.amps.iter().enumerate() {
        probs[outcome(circuit, basis ^ flip).unwrap_or(kept)] += a.norm_sqr();
    }
    probs
}

/// Adds a multinomial draw of `n` trials over `probs` into `into`.
fn multinomial(n: u64, probs: &[f64], rng: &mut ChaCha8Rng, into: &mut [u64]) {
    let mut left = n;
    let mut mass: f64 = probs.iter().sum();
    for (k, &p) in probs.iter().enumerate() {
        if left == 0 {
            break;
        }
        let share = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 0.0 };
        let take = if k + 1 == probs.len() || share >= 1.0 {
            left
        } else {
            binomial(left, share, rng)
        };
        into[k] += take;
        left -= take;
        mass -= p;
    }
}

fn binomial(n: u64, p: f64, rng: &mut ChaCha8Rng) -> u64 {
    if p <= 0.0 {
        return 0;
    }
    Binomial::new(n, p).expect("probability in [0, 1]").sample(rng)
}

/// Moves Pauli `k` on qubit `q` past `ops`. Returns the readout bits it
/// flips, or `None` when some gate does not map it to a Pauli.
fn push_to_end(ops: &[Gate], q: usize, k: u8) -> Option<usize> {
    let (mut x, mut z): (usize, usize) = (0, 0);
    if k != 3 {
        x |= 1 << q;
    }
    if k != 1 {
        z |= 1 << q;
    }
    for g in ops {
        match *g {
            Gate::H(a) => {
                let (xa, za) = (x >> a & 1, z >> a & 1);
                x = (x & !(1 << a)) | za << a;
                z = (z & !(1 << a)) | xa << a;
            }
            Gate::CX(c, t) => {
                x ^= (x >> c & 1) << t;
                z ^= (z >> t & 1) << c;
            }
            Gate::Rz(a, _) if x >> a & 1 == 1 => return None,
            Gate::Rx(a, _) if z >> a & 1 == 1 => return None,
            Gate::CRz(c, t, _) if (x >> c | x >> t) & 1 == 1 => return None,
            _ => {}
        }
    }
    Some(x)
}

/// Number of fault-free slots before the next fault, conditioned on the
/// gap being below `limit` when `within` is set.
fn gap(rng: &mut ChaCha8Rng, p: f64, within: Option<usize>) -> usize {
    if p >= 1.0 {
        return 0;
    }
    let log_q = libm::log1p(-p);
    let mut u: f64 = rng.random();
    if let Some(limit) = within {
        u *= 1.0 - libm::exp(log_q * limit as f64);
    }
    let g = libm::floor(libm::log1p(-u) / log_q);
    if g.is_finite() && g < usize::MAX as f64 {
        g as usize
    } else {
        usize::MAX
    }
}

/// Gate index, qubit and Pauli (1 = X, 2 = Y, 3 = Z) of a fault that must be simulated.
type Fault = (usize, usize, u8);

/// Samples `n_shots` measurements, discarding shots that fail
/// postselection. With `noise = Some(p)`, each qubit touched by a two-qubit
/// gate suffers a uniformly random Pauli error with probability `p`.
pub fn sample(circuit: &Circuit, ps: &ParameterStore, n_shots: u64, seed: u64, noise: Option<f64>) -> Result<Counts> {
    if n_shots == 0 {
        return Err(Error::InvalidConfig("at least one shot is required".into()));
    }
    let p = noise.unwrap_or(0.0);
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidConfig(format!("noise probability {p} is outside [0, 1]")));
    }
    circuit.validate()?;
    if circuit.n_qubits >= usize::BITS as usize {
        return Err(Error::InvalidConfig(format!("{} qubits cannot be simulated", circuit.n_qubits)));
    }
    // prefix[i] is the clean state after gate i.
    let mut prefix = Vec::with_capacity(circuit.ops.len());
    let mut clean = StateVector::zero(circuit.n_qubits);
    for g in &circuit.ops {
        clean.apply(g, ps)?;
        if p > 0.0 {
            prefix.push(clean.clone());
        }
    }
    let slots: Vec<(usize, usize)> = circuit
        .ops
        .iter()
        .enumerate()
        .filter(|(_, g)| g.qubits().len() == 2)
        .flat_map(|(i, g)| g.qubits().into_iter().map(move |q| (i, q)))
        .collect();

    let mut shots = ChaCha8Rng::seed_from_u64(seed);
    let mut faults = ChaCha8Rng::seed_from_u64(seed);
    faults.set_stream(1);
    let n_faulty = if p > 0.0 && !slots.is_empty() {
        let none = libm::exp(libm::log1p(-p) * slots.len() as f64);
        binomial(n_shots, 1.0 - none, &mut faults)
    } else {
        0
    };

    // Faults that commute to the end of the circuit only flip readout bits.
    let flips: Vec<[Option<usize>; 3]> = slots
        .iter()
        .map(|&(i, q)| [1u8, 2, 3].map(|k| push_to_end(&circuit.ops[i + 1..], q, k)))
        .collect();
    let mut patterns: BTreeMap<(Vec<Fault>, usize), u64> = BTreeMap::new();
    for _ in 0..n_faulty {
        let mut hard = Vec::new();
        let mut mask = 0;
        let mut at = gap(&mut faults, p, Some(slots.len())).min(slots.len() - 1);
        while at < slots.len() {
            let (i, q) = slots[at];
            let k = faults.random_range(1..=3u8);
            match flips[at][k as usize - 1] {
                Some(m) => mask ^= m,
                None => hard.push((i, q, k)),
            }
            at = at.saturating_add(1).saturating_add(gap(&mut faults, p, None));
        }
        *patterns.entry((hard, mask)).or_insert(0) += 1;
    }

    let kept = 1 << circuit.open.len();
    let mut tally = vec![0u64; kept + 1];
    multinomial(n_shots - n_faulty, &classes(circuit, &clean, 0), &mut shots, &mut tally);
    let mut finals: BTreeMap<Vec<(usize, usize, u8)>, StateVector> = BTreeMap::new();
    for ((hard, mask), n) in patterns {
        let sv = match hard.first() {
            None => &clean,
            Some(&(at, q, k)) => {
                if !finals.contains_key(&hard) {
                    let mut sv = prefix[at].clone();
                    sv.apply_1q(q, &pauli(k));
                    let sv = resume(circuit, ps, sv, at + 1, &hard[1..])?;
                    finals.insert(hard.clone(), sv);
                }
                &finals[&hard]
            }
        };
        multinomial(n, &classes(circuit, sv, mask), &mut shots, &mut tally);
    }
    let discarded = tally.pop().unwrap_or(0);
    let counts = Counts { counts: tally, n_open: circuit.open.len(), discarded };
    if counts.kept() == 0 {
        return Err(Error::AllShotsDiscarded(n_shots as usize));
    }
    Ok(counts)
}
