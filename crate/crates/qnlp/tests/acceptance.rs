//! End-to-end acceptance checks. Prints one line per criterion and exits
//! non-zero if any fails.

use std::collections::{BTreeSet, HashMap};
use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qnlp_core::ansatz::{
    iqp_ansatz, tensor_ansatz, Angle, AnsatzConfig, Circuit, Compiled, DimMap, Endpoint, Gate, NodeKind, QubitMap,
    TensorNetwork,
};
use qnlp_core::backends::{contract, contract_grad, evaluate, sample, statevector, ParameterStore, Tensor};
use qnlp_core::ccg::{parse_auto_entries, parse_derivation, tree_to_diagram, Category};
use qnlp_core::readers::{cups_read, Sentence};
use qnlp_core::rewrite::{Rewriter, WordLists};
use qnlp_core::training::{
    compile_dataset, dataset_derivation, generate_dataset, settled_at, train, AdamConfig, Backend, Optimizer,
    Record, SpsaConfig, TrainConfig, TrainResult,
};
use qnlp_core::{AtomicType, Diagram, Generator, PType, TypeSeq};

const FLOWER: &str = r"(<T S[dcl] 0 2> (<L NP NNP NNP John NP>) (<T S[dcl]\NP 0 2> (<T (S[dcl]\NP)/NP 0 2> (<L ((S[dcl]\NP)/NP)/NP VBD VBD gave ((S[dcl]\NP)/NP)/NP>) (<L NP NNP NNP Mary NP>) ) (<T NP 0 2> (<L NP/N DT DT a NP/N>) (<L N NN NN flower N>) ) ) )";
const BARE_FLOWER: &str = r"(<T S[dcl] 0 2> (<L NP NNP NNP John NP>) (<T S[dcl]\NP 0 2> (<T (S[dcl]\NP)/NP 0 2> (<L ((S[dcl]\NP)/NP)/NP VBD VBD gave ((S[dcl]\NP)/NP)/NP>) (<L NP NNP NNP Mary NP>) ) (<T NP 0 1> (<L N NN NN flower N>) ) ) )";
const PARK: &str = r"(<T S[dcl] 0 2> (<L NP NNP NNP John NP>) (<T S[dcl]\NP 0 2> (<L S[dcl]\NP VBZ VBZ walks S[dcl]\NP>) (<T (S\NP)\(S\NP) 0 2> (<L ((S\NP)\(S\NP))/NP IN IN in ((S\NP)\(S\NP))/NP>) (<T NP 0 2> (<L NP[nb]/N DT DT the NP[nb]/N>) (<L N NN NN park N>) ) ) ) )";
const TYPE_RAISED: &str = r"(<T S[dcl]/NP 0 2> (<T S/(S\NP) 0 1> (<L NP NNP NNP John NP>) ) (<L (S[dcl]\NP)/NP VBZ VBZ likes (S[dcl]\NP)/NP>) )";
const FIXTURE: &str = include_str!("../fixtures/section00.auto");

/// Quantum runs: iterations per run, shots per sentence and noise level.
const QUANTUM_ITERS: usize = 2000;
const SHOTS: u64 = 8192;
const NOISE: f64 = 0.01;
const SEEDS: [u64; 3] = [0, 1, 2];
/// Settling window and tolerance band on the development accuracy.
const WINDOW: usize = 50;
const BAND: f64 = 0.05;
/// Records over which early fluctuation is measured.
const EARLY: usize = 100;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn diagram(line: &str) -> Diagram {
    tree_to_diagram(&parse_derivation(line, 1).unwrap()).unwrap()
}

fn random_params(symbols: Vec<qnlp_core::ansatz::Symbol>, r: &mut ChaCha8Rng) -> ParameterStore {
    let mut ps = ParameterStore::new();
    ps.extend_with(symbols, |s| (0..s.size()).map(|_| r.random_range(-1.0..1.0)).collect()).unwrap();
    ps
}

fn max_abs_diff(a: &Tensor, b: &Tensor) -> f64 {
    assert_eq!(a.shape, b.shape);
    a.data.iter().zip(&b.data).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

// ---------------------------------------------------------------- 1

type Atom = (bool, i32);

fn cancels(a: Atom, b: Atom) -> bool {
    a.0 == b.0 && a.1 + 1 == b.1
}

/// Every sequence reachable by adjacent-pair deletions.
fn reachable(seq: &[Atom], memo: &mut HashMap<Vec<Atom>, BTreeSet<Vec<Atom>>>) -> BTreeSet<Vec<Atom>> {
    if let Some(hit) = memo.get(seq) {
        return hit.clone();
    }
    let mut out = BTreeSet::from([seq.to_vec()]);
    for i in 0..seq.len().saturating_sub(1) {
        if cancels(seq[i], seq[i + 1]) {
            let mut rest = seq[..i].to_vec();
            rest.extend_from_slice(&seq[i + 2..]);
            out.extend(reachable(&rest, memo));
        }
    }
    memo.insert(seq.to_vec(), out.clone());
    out
}

fn irreducible(seq: &[Atom]) -> bool {
    seq.windows(2).all(|w| !cancels(w[0], w[1]))
}

fn to_seq(atoms: &[Atom]) -> TypeSeq {
    TypeSeq(atoms.iter().map(|&(is_n, z)| PType::new(if is_n { AtomicType::n() } else { AtomicType::s() }, z)).collect())
}

fn random_sequence(r: &mut ChaCha8Rng, grammatical: bool) -> Vec<Atom> {
    if grammatical {
        // s with cancelling pairs spliced in
        let mut seq = vec![(false, 0)];
        for _ in 0..r.random_range(0..=4) {
            let z = r.random_range(-2..=1);
            let a = r.random_bool(0.5);
            let at = r.random_range(0..=seq.len());
            seq.splice(at..at, [(a, z), (a, z + 1)]);
        }
        seq
    } else {
        (0..r.random_range(0..=10)).map(|_| (r.random_bool(0.5), r.random_range(-2..=2))).collect()
    }
}

fn criterion_1() -> Outcome {
    let d = diagram(FLOWER);
    let typed = d.words().fold(TypeSeq::unit(), |acc, w| acc.concat(&w.cod()));
    let s = TypeSeq::of(PType::s());
    let flower_ok = typed.len() == 9 && typed.reduce() == s && typed.reduces_to(&s) && d.cod() == &s;

    let mut r = rng(1);
    let mut memo = HashMap::new();
    let (mut disagreements, mut grammatical, mut greedy_missed) = (0, 0, 0);
    for i in 0..1000 {
        let atoms = random_sequence(&mut r, i % 2 == 0);
        let seq = to_seq(&atoms);
        let reach = reachable(&atoms, &mut memo);
        let forms: BTreeSet<TypeSeq> = reach.iter().filter(|f| irreducible(f)).map(|f| to_seq(f)).collect();
        let greedy = seq.reduce();
        let s_reachable = reach.contains(&vec![(false, 0)]);
        let agree = forms.contains(&greedy)
            && (forms.len() > 1 || forms.first() == Some(&greedy))
            && seq.reduces_to(&s) == s_reachable
            && seq.reduces_to(&TypeSeq::unit()) == reach.contains(&Vec::new())
            && forms.iter().all(|f| seq.reduces_to(f));
        disagreements += usize::from(!agree);
        grammatical += usize::from(s_reachable);
        greedy_missed += usize::from(s_reachable && greedy != s);
    }
    check(
        flower_ok && disagreements == 0 && grammatical >= 500,
        format!(
            "flower reduces to s: {flower_ok}; {disagreements}/1000 disagreements; \
             {grammatical} grammatical, {greedy_missed} where the stack scan stops short of s"
        ),
    )
}

// ---------------------------------------------------------------- 2

fn word_order(d: &Diagram, token: &str) -> Option<usize> {
    d.words().find_map(|g| match g {
        Generator::Word { token: t, cod, .. } if t == token => Some(cod.len()),
        _ => None,
    })
}

fn criterion_2() -> Outcome {
    let d = diagram(PARK);
    let pp = Rewriter::from_names(&["prepositional_phrase"], &WordLists::default()).unwrap();
    let rewritten = pp.apply(&d);
    let before = word_order(&d, "in");
    let after = word_order(&rewritten, "in");
    let caps = rewritten.count_kind("cap") - d.count_kind("cap");
    let frame = rewritten.dom() == d.dom() && rewritten.cod() == d.cod();
    let order_ok = before == Some(5) && after == Some(3) && caps == 1 && frame;

    let mut r = rng(2);
    let det = Rewriter::from_names(&["determiner"], &WordLists::default()).unwrap();
    let with_det = det.apply(&diagram(FLOWER));
    let dm = DimMap::ns(3, 2).unwrap();
    let a = tensor_ansatz(&with_det, &dm).unwrap();
    let b = tensor_ansatz(&diagram(BARE_FLOWER), &dm).unwrap();
    let mut err: f64 = 0.0;
    for _ in 0..10 {
        let ps = random_params(a.symbols(), &mut r);
        err = err.max(max_abs_diff(&contract(&a, &ps).unwrap(), &contract(&b, &ps).unwrap()));
    }
    check(
        order_ok && err < 1e-10,
        format!("preposition order {before:?} -> {after:?} with {caps} cap, frame kept: {frame}; determiner identity error {err:.1e}"),
    )
}

// ---------------------------------------------------------------- 3

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let p = AtomicType::new("p");
    let dm = DimMap::ns(3, 2).unwrap().with(p.clone(), 4).unwrap();
    let mut err: f64 = 0.0;
    let mut straightened = true;
    for base in [AtomicType::n(), AtomicType::s(), p] {
        for z in -2..=2 {
            let t = PType::new(base.clone(), z);
            let mut left = Diagram::generator(Generator::word("w", TypeSeq(vec![t.clone()])));
            left.push(Generator::cap(base.clone(), z), 1).unwrap();
            left.push(Generator::cup(base.clone(), z), 0).unwrap();
            let mut right = Diagram::generator(Generator::word("w", TypeSeq(vec![t.r()])));
            right.push(Generator::cap(base.clone(), z), 0).unwrap();
            right.push(Generator::cup(base.clone(), z), 1).unwrap();
            for d in [left, right] {
                let nf = d.normal_form();
                straightened &= nf.len() == 1;
                let bent = tensor_ansatz(&d, &dm).unwrap();
                let ps = random_params(bent.symbols(), &mut r);
                let straight = tensor_ansatz(&nf, &dm).unwrap();
                err = err.max(max_abs_diff(&contract(&bent, &ps).unwrap(), &contract(&straight, &ps).unwrap()));
            }
        }
    }
    let raised = diagram(TYPE_RAISED);
    let nf = raised.normal_form();
    let dm = DimMap::ns(3, 2).unwrap();
    let (a, b) = (tensor_ansatz(&raised, &dm).unwrap(), tensor_ansatz(&nf, &dm).unwrap());
    let ps = random_params(a.symbols(), &mut r);
    let sentence_err = max_abs_diff(&contract(&a, &ps).unwrap(), &contract(&b, &ps).unwrap());
    let yanked = raised.count_kind("cap") > 0 && nf.count_kind("cap") == 0;
    check(
        straightened && yanked && err < 1e-10 && sentence_err < 1e-10,
        format!("snakes on n, s, p with z in -2..=2: error {err:.1e}; yanked sentence error {sentence_err:.1e}"),
    )
}

// ---------------------------------------------------------------- 4

/// Connected network of `n` parameter nodes with loops and open legs.
fn random_network(r: &mut ChaCha8Rng, n: usize) -> (TensorNetwork, ParameterStore) {
    let mut legs: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut edges = Vec::new();
    let extra = r.random_range(0..n);
    for k in 0..n - 1 + extra {
        let (a, b) = if k < n - 1 {
            (k, k + 1)
        } else {
            let a = r.random_range(0..n);
            let b = (a + r.random_range(1..n)) % n;
            (a, b)
        };
        let d = r.random_range(1..4);
        legs[a].push(d);
        legs[b].push(d);
        edges.push((a, legs[a].len() - 1, b, legs[b].len() - 1));
    }
    let mut open = Vec::new();
    for _ in 0..r.random_range(0..3) {
        let a = r.random_range(0..n);
        legs[a].push(r.random_range(1..4));
        open.push(Endpoint::new(a, legs[a].len() - 1));
    }
    let mut tn = TensorNetwork::new();
    for (i, shape) in legs.into_iter().enumerate() {
        tn.add(NodeKind::Param(format!("t{i}")), shape);
    }
    for (a, la, b, lb) in edges {
        tn.connect(Endpoint::new(a, la), Endpoint::new(b, lb)).unwrap();
    }
    tn.open = open;
    let ps = random_params(tn.symbols(), r);
    (tn, ps)
}

fn gradient_error(tn: &TensorNetwork, ps: &ParameterStore, r: &mut ChaCha8Rng) -> f64 {
    let out = contract(tn, ps).unwrap();
    let size = out.data.len();
    let g = Tensor::new(out.shape.clone(), (0..size).map(|_| r.random_range(-1.0..1.0)).collect()).unwrap();
    let grad = contract_grad(tn, ps, &g).unwrap();
    let f = |p: &ParameterStore| -> f64 {
        contract(tn, p).unwrap().data.iter().zip(&g.data).map(|(a, b)| a * b).sum()
    };
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    for i in 0..ps.len() {
        let mut plus = ps.values().to_vec();
        plus[i] += h;
        let mut minus = ps.values().to_vec();
        minus[i] -= h;
        let fd = (f(&ps.with_values(plus).unwrap()) - f(&ps.with_values(minus).unwrap())) / (2.0 * h);
        let scale = grad[i].abs().max(fd.abs()).max(1e-6);
        worst = worst.max((grad[i] - fd).abs() / scale);
    }
    worst
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let mut r = rng(4);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = r.random_range(2..7);
        let (tn, ps) = random_network(&mut r, n);
        worst = worst.max(gradient_error(&tn, &ps, &mut r));
    }
    let elapsed = t.elapsed();
    check(
        worst < 1e-5 && elapsed < Duration::from_secs(30),
        format!("50 networks, max relative error {worst:.1e}"),
    )
}

// ---------------------------------------------------------------- 5

type CMat = DMatrix<Complex64>;

fn cm(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Operator acting as `ops[q]` on qubit `q`, qubit 0 least significant.
fn kron_all(ops: &[CMat]) -> CMat {
    ops.iter().fold(CMat::identity(1, 1), |acc, op| op.kronecker(&acc))
}

fn single(n: usize, q: usize, u: CMat) -> CMat {
    kron_all(&(0..n).map(|k| if k == q { u.clone() } else { CMat::identity(2, 2) }).collect::<Vec<_>>())
}

fn controlled(n: usize, ctrl: usize, tgt: usize, u: CMat) -> CMat {
    let p0 = CMat::from_row_slice(2, 2, &[cm(1.0, 0.0), cm(0.0, 0.0), cm(0.0, 0.0), cm(0.0, 0.0)]);
    let p1 = CMat::from_row_slice(2, 2, &[cm(0.0, 0.0), cm(0.0, 0.0), cm(0.0, 0.0), cm(1.0, 0.0)]);
    let id = CMat::identity(2, 2);
    let off: Vec<CMat> = (0..n).map(|k| if k == ctrl { p0.clone() } else { id.clone() }).collect();
    let on: Vec<CMat> =
        (0..n).map(|k| if k == ctrl { p1.clone() } else if k == tgt { u.clone() } else { id.clone() }).collect();
    kron_all(&off) + kron_all(&on)
}

fn gate_matrix(n: usize, g: &Gate) -> CMat {
    let theta = |a: &Angle| match a {
        Angle::Const(x) => *x,
        Angle::Sym(_) => unreachable!(),
    };
    let rz = |t: f64| {
        CMat::from_row_slice(
            2,
            2,
            &[Complex64::from_polar(1.0, -t / 2.0), cm(0.0, 0.0), cm(0.0, 0.0), Complex64::from_polar(1.0, t / 2.0)],
        )
    };
    let r = FRAC_1_SQRT_2;
    match g {
        Gate::H(q) => single(n, *q, CMat::from_row_slice(2, 2, &[cm(r, 0.0), cm(r, 0.0), cm(r, 0.0), cm(-r, 0.0)])),
        Gate::Rx(q, a) => {
            let (c, s) = ((theta(a) / 2.0).cos(), (theta(a) / 2.0).sin());
            single(n, *q, CMat::from_row_slice(2, 2, &[cm(c, 0.0), cm(0.0, -s), cm(0.0, -s), cm(c, 0.0)]))
        }
        Gate::Rz(q, a) => single(n, *q, rz(theta(a))),
        Gate::CRz(c, t, a) => controlled(n, *c, *t, rz(theta(a))),
        Gate::CX(c, t) => {
            controlled(n, *c, *t, CMat::from_row_slice(2, 2, &[cm(0.0, 0.0), cm(1.0, 0.0), cm(1.0, 0.0), cm(0.0, 0.0)]))
        }
    }
}

fn random_circuit(r: &mut ChaCha8Rng, n: usize, len: usize) -> Circuit {
    let ops = (0..len)
        .map(|_| {
            let q = r.random_range(0..n);
            let th = Angle::Const(r.random_range(-4.0..4.0));
            let other = if n > 1 { (q + r.random_range(1..n)) % n } else { q };
            match r.random_range(0..if n == 1 { 3 } else { 5 }) {
                0 => Gate::H(q),
                1 => Gate::Rx(q, th),
                2 => Gate::Rz(q, th),
                3 => Gate::CRz(q, other, th),
                _ => Gate::CX(q, other),
            }
        })
        .collect();
    Circuit { n_qubits: n, ops, postselect: Vec::new(), open: (0..n).collect() }
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let empty = ParameterStore::new();
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let n = 1 + i % 3;
        let c = random_circuit(&mut r, n, 12);
        let sv = statevector(&c, &empty).unwrap();
        let mut psi = DVector::from_element(1 << n, cm(0.0, 0.0));
        psi[0] = cm(1.0, 0.0);
        for g in &c.ops {
            psi = gate_matrix(n, g) * psi;
        }
        worst = sv.amps.iter().zip(psi.iter()).fold(worst, |w, (a, b)| w.max((a - b).norm()));
    }

    let d = cups_read(&Sentence::parse("chef prepares tasty meal").unwrap());
    let c = iqp_ansatz(&d, &QubitMap::ns(1, 1).unwrap(), 1).unwrap();
    let mut ps = ParameterStore::new();
    ps.extend_with(c.symbols(), |_| vec![r.random_range(0.0..TAU)]).unwrap();
    let exact = evaluate(&c, &ps).unwrap();
    let tv_of = |noise| {
        let counts = sample(&c, &ps, 100_000, 6, noise).unwrap();
        exact.probs.iter().zip(counts.frequencies()).map(|(p, q)| (p - q).abs()).sum::<f64>() / 2.0
    };
    let (tv, tv_p0) = (tv_of(None), tv_of(Some(0.0)));
    check(
        worst < 1e-12 && tv < 0.02 && tv_p0 < 0.02,
        format!("100 circuits, max amplitude error {worst:.1e}; TV at 1e5 shots {tv:.4} (p=0: {tv_p0:.4})"),
    )
}

// ---------------------------------------------------------------- 6 to 9

struct Run {
    result: TrainResult,
    elapsed: Duration,
}

impl Run {
    fn settled(&self) -> Option<usize> {
        settled_at(&self.result.history, WINDOW, BAND)
    }

    /// Settled with at least a quarter of the run left to spare.
    fn converged(&self) -> bool {
        self.settled().is_some_and(|s| s * 4 <= self.result.history.len() * 3)
    }

    /// Mean absolute change of the development loss over the first records.
    fn early_fluctuation(&self) -> f64 {
        let h: &[Record] = &self.result.history[..EARLY.min(self.result.history.len())];
        h.windows(2).map(|w| (w[1].dev_loss - w[0].dev_loss).abs()).sum::<f64>() / (h.len() - 1) as f64
    }

    fn summary(&self) -> String {
        format!("test {:.3}, settled at {:?}, {:.0?}", self.result.test_acc, self.settled(), self.elapsed)
    }
}

fn run(ansatz: &AnsatzConfig, seed: u64, optimizer: Optimizer, iterations: usize, backend: Backend) -> Run {
    let t = Instant::now();
    let ds = generate_dataset(seed);
    let models: Vec<Compiled> =
        compile_dataset(&ds, |_, text| tree_to_diagram(&dataset_derivation(text)?), ansatz).unwrap();
    let cfg = TrainConfig { optimizer, iterations, seed, backend };
    let result = train(&models, &ds, &cfg).unwrap();
    Run { result, elapsed: t.elapsed() }
}

fn classical() -> Run {
    let ansatz = AnsatzConfig::Spider { dims: DimMap::ns(2, 2).unwrap(), max_order: 2 };
    run(&ansatz, 0, Optimizer::Adam(AdamConfig::default()), 100, Backend::Exact)
}

fn quantum(seed: u64, backend: Backend) -> Run {
    let ansatz = AnsatzConfig::Iqp { qubits: QubitMap::ns(1, 1).unwrap(), layers: 1 };
    let spsa = SpsaConfig { a: 2.0, c: 0.2, big_a: 0.01 * QUANTUM_ITERS as f64, ..SpsaConfig::for_iterations(QUANTUM_ITERS) };
    run(&ansatz, seed, Optimizer::Spsa(spsa), QUANTUM_ITERS, backend)
}

fn criterion_6(c: &Run) -> Outcome {
    check(
        c.result.test_acc >= 0.9 && c.elapsed < Duration::from_secs(300),
        format!("spider d=2, adam, 100 iterations: {}", c.summary()),
    )
}

fn criterion_7(exact: &Run, classical: &Run) -> Outcome {
    let slower = matches!((exact.settled(), classical.settled()), (Some(q), Some(c)) if q > c);
    check(
        exact.converged() && exact.result.test_acc >= 0.9 && slower && exact.elapsed < Duration::from_secs(900),
        format!("iqp, spsa: {}; classical settled at {:?}", exact.summary(), classical.settled()),
    )
}

fn criterion_8(shots: &[Run], exact: &[Run]) -> Outcome {
    let good = shots.iter().filter(|r| r.result.test_acc >= 0.8).count();
    let converged = shots.iter().all(Run::converged);
    let fluctuating = shots.iter().zip(exact).all(|(s, e)| s.early_fluctuation() >= 2.0 * e.early_fluctuation());
    let elapsed: Duration = shots.iter().map(|r| r.elapsed).sum();
    let per_seed: Vec<String> = shots
        .iter()
        .zip(exact)
        .map(|(s, e)| format!("[{}; early |d loss| {:.3} vs exact {:.3}]", s.summary(), s.early_fluctuation(), e.early_fluctuation()))
        .collect();
    check(
        good >= 2 && converged && fluctuating && elapsed < Duration::from_secs(2700),
        format!("{SHOTS} shots, {good}/3 seeds at >= 0.8: {}", per_seed.join(" ")),
    )
}

fn criterion_9(noisy: &Run, shots: &Run) -> Outcome {
    let later = matches!((noisy.settled(), shots.settled()), (Some(n), Some(s)) if n >= s);
    check(
        later && noisy.result.test_acc >= 0.7,
        format!("p={NOISE}: {}; noiseless shots settled at {:?}", noisy.summary(), shots.settled()),
    )
}

// ---------------------------------------------------------------- 10

fn criterion_10() -> Outcome {
    let entries = parse_auto_entries(FIXTURE);
    let s = TypeSeq::of(PType::s());
    let (mut converted, mut sentences, mut reduced) = (0, 0, 0);
    for e in &entries {
        let Ok(tree) = &e.result else { continue };
        let Ok(d) = tree_to_diagram(tree) else { continue };
        converted += 1;
        if tree.category().matches(&Category::atom("S")) {
            sentences += 1;
            reduced += usize::from(d.cod().reduces_to(&s));
        }
    }
    check(
        entries.len() >= 20 && converted == entries.len() && reduced == sentences,
        format!("{converted}/{} derivations converted; {reduced}/{sentences} sentence codomains reduce to s", entries.len()),
    )
}

fn main() {
    let mut failed = 0;
    let mut report = |n: usize, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        println!("criterion {n:>2} {}: {name}: {} ({:.1?})", if o.pass { "PASS" } else { "FAIL" }, o.detail, t.elapsed());
        failed += usize::from(!o.pass);
    };

    report(1, "grammar reduction", &mut criterion_1);
    report(2, "rewrite", &mut criterion_2);
    report(3, "snake equations", &mut criterion_3);
    report(4, "gradients", &mut criterion_4);
    report(5, "simulator", &mut criterion_5);

    let classical = classical();
    report(6, "classical pipeline", &mut || criterion_6(&classical));
    let exact: Vec<Run> = SEEDS.iter().map(|&s| quantum(s, Backend::Exact)).collect();
    report(7, "exact quantum pipeline", &mut || criterion_7(&exact[0], &classical));
    let shots: Vec<Run> = SEEDS.iter().map(|&s| quantum(s, Backend::Shots { n_shots: SHOTS, noise: None })).collect();
    report(8, "shot-based pipeline", &mut || criterion_8(&shots, &exact));
    let noisy = quantum(SEEDS[0], Backend::Shots { n_shots: SHOTS, noise: Some(NOISE) });
    report(9, "noisy shot-based pipeline", &mut || criterion_9(&noisy, &shots[0]));
    report(10, "AUTO fixture", &mut criterion_10);

    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}
