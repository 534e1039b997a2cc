//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.
//!
//! Runs as a plain binary (`harness = false`) so the lines appear in order
//! under `cargo test`.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use hypersack::automata::{acyclic_membership, parikh_image, Depth2Params, ParikhNFA, WordNFA};
use hypersack::groups::{ConstantsConfig, FiniteTable, Group, GroupSpec, Letter, Order, Word};
use hypersack::knapsack::{
    quasigeodesify, solve_depth1, solve_depth2, ExponentExpression, Factor, KnapsackExpression, Route, Solver,
};
use hypersack::oracle::{brute_solve, verify};
use hypersack::semilinear::SemilinearSet;
use hypersack_cli::{bench, corpus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn z2(name: &str) -> GroupSpec {
    GroupSpec::finite(name, FiniteTable::cyclic(2, &["e", name]).unwrap())
}

fn dihedral() -> Group {
    Group::new(z2("a").free_product(z2("b"))).unwrap()
}

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("{what} took {elapsed:.2?}, limit {limit:?}"))
    }
}

fn binomial_counts() -> Outcome {
    let g = Group::free(1);
    let solver = Solver::new(g.clone());
    let mut detail = Vec::new();
    for (n, want) in [(3usize, 10usize), (4, 35)] {
        let text = (1..=n).map(|i| format!("a^x{i}")).collect::<Vec<_>>().join(" ") + &format!(" a^-{n}");
        let e = KnapsackExpression::parse(&g, &text).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let set = solver.solve(&e).map_err(|e| e.to_string())?;
        let count = set.enumerate_box(n as u64).len();
        let elapsed = start.elapsed();
        within(elapsed, Duration::from_secs(2), &format!("n = {n}"))?;
        if count != want {
            return Err(format!("n = {n}: {count} solutions, expected {want}"));
        }
        detail.push(format!("n={n}: {count} in {elapsed:.0?}"));
    }
    Ok(detail.join(", "))
}

fn corpus_matches_oracle() -> Outcome {
    let c = corpus::load(&corpus_dir()).map_err(|e| format!("{e:#}"))?;
    let start = Instant::now();
    let report = bench::run(&c, &[], ConstantsConfig::default(), 8, None).map_err(|e| format!("{e:#}"))?;
    within(start.elapsed(), Duration::from_secs(300), "corpus")?;
    if c.instances.len() < 50 {
        return Err(format!("only {} instances", c.instances.len()));
    }
    let mut groups = BTreeSet::new();
    for (inst, row) in c.instances.iter().zip(&report.rows) {
        if row.depth > 4 || row.size > 14 {
            return Err(format!("{}: depth {} / size {} out of range", row.origin, row.depth, row.size));
        }
        if row.verdict != bench::Verdict::Agree {
            return Err(format!("{}: {:?} {}", row.origin, row.verdict, row.detail.clone().unwrap_or_default()));
        }
        groups.insert(inst.group.clone());
    }
    if groups.len() < 5 {
        return Err(format!("corpus covers {} groups, expected 5", groups.len()));
    }
    Ok(format!(
        "{} instances over {} groups in {:.1} s",
        c.instances.len(),
        groups.len(),
        report.total_ms / 1e3
    ))
}

/// `(x1, x2) ∈ [0, b]²` with `v1 u1^x1 = u2^x2 v2`.
fn brute_depth2(g: &Group, w: &[Word; 4], b: u64) -> BTreeSet<Vec<u64>> {
    let [v1, u1, u2, v2] = w;
    let mut out = BTreeSet::new();
    for x1 in 0..=b {
        for x2 in 0..=b {
            let mut word = v1.clone();
            word.extend(u1.repeat(x1 as usize));
            word.extend(g.inverse_word(v2));
            word.extend(g.inverse_word(&u2.repeat(x2 as usize)));
            if g.is_one(&word) {
                out.insert(vec![x1, x2]);
            }
        }
    }
    out
}

const QUADRUPLES: [[&str; 4]; 20] = [
    ["", "a", "a", ""],
    ["b", "a", "b a b^-1", "b"],
    ["a", "a b", "a b", "a"],
    ["", "a a", "a a a", ""],
    ["b", "a", "a", ""],
    ["a a", "a", "a", ""],
    ["", "a", "a", "a a a"],
    ["b", "a b", "b a", "b"],
    ["a b", "a", "b", ""],
    ["", "a b", "a b a b", ""],
    ["a", "b", "a b a^-1", "a"],
    ["a^-1", "a b", "b a", "a^-1"],
    ["", "a b^-1", "a b^-1", "a b^-1"],
    ["b a", "a", "b", "b a a"],
    ["", "a a b", "a a b", ""],
    ["a", "b a", "a b", ""],
    ["a b", "a b", "a b", ""],
    ["", "b", "a", ""],
    ["b b", "b^-1", "b", ""],
    ["a^-1 b", "a", "b a", "a^-1"],
];

fn depth_two_quadruples() -> Outcome {
    let g = Group::free(2);
    let k = g.constants().map_err(|e| e.to_string())?;
    let params = Depth2Params {
        lambda: k.lambda,
        epsilon: k.epsilon,
        delta: k.delta,
        kappa: k.kappa,
        gamma: k.gamma,
    };
    let start = Instant::now();
    let mut nonempty = 0;
    for q in QUADRUPLES {
        let w = q.map(|s| g.parse_word(s).unwrap());
        let set = solve_depth2(&g, &w[0], &w[1], &w[2], &w[3], ["x1", "x2"], &params).map_err(|e| e.to_string())?;
        let got = set.enumerate_box_vectors(15);
        let want = brute_depth2(&g, &w, 15);
        if got != want {
            return Err(format!("{q:?}: got {} points, oracle {}", got.len(), want.len()));
        }
        nonempty += usize::from(!want.is_empty());
    }
    within(start.elapsed(), Duration::from_secs(60), "quadruples")?;
    Ok(format!(
        "{} quadruples ({nonempty} solvable) with λ={}, ε={} in {:.1?}",
        QUADRUPLES.len(),
        k.lambda,
        k.epsilon,
        start.elapsed()
    ))
}

fn random_count_nfa(rng: &mut ChaCha8Rng) -> ParikhNFA {
    let n = rng.gen_range(1..=6);
    let dim = rng.gen_range(1..=3);
    let mut finals: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    if finals.is_empty() {
        finals.push(rng.gen_range(0..n));
    }
    let mut nfa = ParikhNFA::new(n, 0, finals, dim);
    for _ in 0..rng.gen_range(1..=2 * n + 1) {
        let label = (0..dim).map(|_| rng.gen_range(0..3)).collect();
        nfa.add_transition(rng.gen_range(0..n), label, rng.gen_range(0..n));
    }
    nfa
}

fn parikh_images() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let start = Instant::now();
    let mut points = 0;
    for i in 0..200 {
        let nfa = random_count_nfa(&mut rng);
        let vars: Vec<String> = (0..nfa.dim).map(|j| format!("c{j}")).collect();
        let set = parikh_image(&nfa, &vars).map_err(|e| e.to_string())?;
        let got = set.enumerate_box_vectors(12);
        let want = nfa.box_image(12);
        if got != want {
            return Err(format!("automaton #{i} ({} states): {} vs {} points", nfa.states, got.len(), want.len()));
        }
        points += want.len();
    }
    within(start.elapsed(), Duration::from_secs(60), "Parikh images")?;
    Ok(format!("200 automata, {points} points in box 12, {:.1?}", start.elapsed()))
}

fn random_acyclic(rng: &mut ChaCha8Rng, alphabet: usize) -> WordNFA {
    let n = rng.gen_range(2..=12);
    let mut nfa = WordNFA::new(n, 0, vec![n - 1]);
    if rng.gen_bool(0.3) {
        nfa.finals.push(rng.gen_range(0..n));
    }
    for from in 0..n {
        for to in from + 1..n {
            if rng.gen_bool(0.3) {
                let len = rng.gen_range(0..=3);
                nfa.add_transition(from, (0..len).map(|_| rng.gen_range(0..alphabet) as Letter).collect(), to);
            }
        }
    }
    nfa
}

fn acyclic_membership_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut accepted = 0;
    for g in [Group::free(2), dihedral()] {
        for i in 0..100 {
            let nfa = random_acyclic(&mut rng, g.alphabet_size());
            let words = nfa.accepted_words().map_err(|e| e.to_string())?;
            let want = words.iter().any(|w| g.is_one(w));
            let got = acyclic_membership(&g, &nfa).map_err(|e| e.to_string())?;
            if got.is_some() != want {
                return Err(format!("{}: automaton #{i}: got {}, enumeration {want}", g.spec(), got.is_some()));
            }
            if let Some(w) = got {
                if !g.is_one(&w.word) || !words.contains(&w.word) {
                    return Err(format!("{}: automaton #{i}: bad witness", g.spec()));
                }
            }
            accepted += usize::from(want);
        }
    }
    let timing = bench::membership_timing(1000).map_err(|e| format!("{e:#}"))?;
    if timing.states < 1000 {
        return Err(format!("grid automaton has only {} states", timing.states));
    }
    within(Duration::from_secs_f64(timing.ms / 1e3), Duration::from_secs(5), "1000-state membership")?;
    Ok(format!(
        "200 automata ({accepted} accept 1); {}-state grid decided in {:.0} ms",
        timing.states, timing.ms
    ))
}

/// Depth-1…3 expressions whose powers are torsion or not cyclically reduced.
fn normalization_instance(rng: &mut ChaCha8Rng, g: &Group, free: bool) -> KnapsackExpression {
    let letter = |rng: &mut ChaCha8Rng| rng.gen_range(0..g.alphabet_size()) as Letter;
    loop {
        let k = rng.gen_range(1..=3);
        let mut e = ExponentExpression::default();
        for i in 0..k {
            let core: Word = (0..rng.gen_range(1..=2)).map(|_| letter(rng)).collect();
            let u = if free {
                let w = vec![letter(rng)];
                let mut u = w.clone();
                u.extend(&core);
                u.extend(g.inverse_word(&w));
                g.shlex(&u)
            } else {
                let mut u = core.clone();
                u.extend((0..rng.gen_range(0..=2)).map(|_| letter(rng)));
                g.shlex(&u)
            };
            let v = g.shlex(&(0..rng.gen_range(0..=2)).map(|_| letter(rng)).collect::<Word>());
            e.factors.push(Factor { u, var: format!("x{}", i + 1), v });
        }
        if e.factors.iter().any(|f| f.u.is_empty()) {
            continue;
        }
        let awkward = e.factors.iter().any(|f| {
            let cyclically_reduced = g.shlex(&[&f.u[..], &f.u[..]].concat()).len() == 2 * f.u.len();
            !cyclically_reduced || g.order_of(&f.u).map(|o| o != Order::Infinite).unwrap_or(false)
        });
        if !awkward || e.size() > 12 {
            continue;
        }
        // Plant a solution half of the time so that many instances are solvable.
        if rng.gen_bool(0.5) {
            let nu = e.variables().into_iter().map(|x| (x, rng.gen_range(0..=3u64))).collect();
            let value = g.shlex(&e.substitute(&nu).unwrap());
            let last = e.factors.last_mut().unwrap();
            last.v.extend(g.inverse_word(&value));
            last.v = g.shlex(&last.v);
        }
        return KnapsackExpression::new(e).unwrap();
    }
}

fn normalization_reassembles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut branches = 0;
    let mut solvable = 0;
    for i in 0..50 {
        let (g, free) = if i % 2 == 0 { (Group::free(2), true) } else { (dihedral(), false) };
        let e = normalization_instance(&mut rng, &g, free);
        let shown = e.display(&g);
        let solver = Solver::new(g.clone());
        let parts = quasigeodesify(&g, &e).map_err(|err| format!("{shown}: {err}"))?;
        for b in &parts {
            for f in b.normalized.expr.factors() {
                if g.order_of(&f.u).map_err(|e| e.to_string())? != Order::Infinite {
                    return Err(format!("{shown}: torsion power survives normalization"));
                }
            }
        }
        let sets = parts
            .iter()
            .map(|b| solver.solve_branch_full(b))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|err| format!("{shown}: {err}"))?;
        let mut vars = e.variables();
        vars.sort();
        let union = SemilinearSet::union_all(&vars, &sets).map_err(|err| err.to_string())?;
        let got = union.enumerate_box(8);
        let want = brute_solve(&g, e.expr(), 8).map_err(|err| err.to_string())?;
        if got != want {
            return Err(format!("{} {shown}: {} points, oracle {}", g.spec(), got.len(), want.len()));
        }
        branches += parts.len();
        solvable += usize::from(!want.is_empty());
    }
    Ok(format!("50 instances ({solvable} solvable), {branches} branches"))
}

fn depth_one_bound() -> Outcome {
    // Every depth-1 call checks its solution against the bound; a run over
    // the corpus must make such calls without tripping the check.
    let c = corpus::load(&corpus_dir()).map_err(|e| format!("{e:#}"))?;
    let mut calls = 0;
    for inst in &c.instances {
        let (g, e) = inst.load(&c.dir, ConstantsConfig::default()).map_err(|e| format!("{e:#}"))?;
        let solver = Solver::new(g);
        if solver.supports_solve() {
            solver.decide(&e, Route::Semilinear, None).map_err(|e| e.to_string())?;
            calls += solver.stats().depth1_calls;
        }
    }
    if calls == 0 {
        return Err("no depth-1 calls were made".into());
    }
    // With constants too small for a non-geodesic power the check must fire.
    let g = Group::free(2);
    let u = g.parse_word("a b").unwrap();
    let v = g.parse_word("b^-1 a^-1 b^-1 a^-1 b^-1 a^-1").unwrap();
    let fired = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| solve_depth1(&g, &u, &v, "x", 1, 0))).is_err();
    let u_bad: Word = vec![0, 2, 3];
    let fired_bad = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
        let _ = solve_depth1(&g, &u_bad, &g.parse_word("a^-2").unwrap(), "x", 1, 0);
    }))
    .is_err();
    if fired {
        return Err("check fired on a geodesic power".into());
    }
    if !fired_bad {
        return Err("check did not fire on a violating instance".into());
    }
    Ok(format!("{calls} depth-1 calls within the bound; violation detected"))
}

fn routes_agree() -> Outcome {
    let c = corpus::load(&corpus_dir()).map_err(|e| format!("{e:#}"))?;
    let mut compared = 0;
    for inst in &c.instances {
        let (g, e) = inst.load(&c.dir, ConstantsConfig::default()).map_err(|e| format!("{e:#}"))?;
        let solver = Solver::new(g.clone());
        if !solver.supports_solve() {
            continue;
        }
        let a = solver.decide(&e, Route::Semilinear, None).map_err(|e| e.to_string())?;
        let b = solver.decide(&e, Route::Grid, None).map_err(|e| e.to_string())?;
        let p = b.bound.unwrap_or(0);
        if p != a.magnitude.unwrap_or(0) + 1 {
            return Err(format!("{}: grid bound {p} is not magnitude + 1", inst.origin));
        }
        if a.answer != b.answer {
            return Err(format!("{}: solve says {}, grid says {}", inst.origin, a.answer, b.answer));
        }
        for w in a.witness.iter().chain(&b.witness) {
            if !verify(&g, e.expr(), w).map_err(|e| e.to_string())? {
                return Err(format!("{}: witness {w} does not verify", inst.origin));
            }
        }
        compared += 1;
    }
    Ok(format!("{compared} corpus instances"))
}

fn main() {
    std::panic::set_hook(Box::new(|_| {}));
    let criteria: [Criterion; 8] = [
        ("binomial counts over Z", binomial_counts),
        ("corpus agrees with the oracle in box 8", corpus_matches_oracle),
        ("depth-2 quadruples over F2 in box 15", depth_two_quadruples),
        ("Parikh images of 200 count automata in box 12", parikh_images),
        ("grid route with p = magnitude + 1 agrees with solve", routes_agree),
        ("acyclic identity membership over F2 and D∞", acyclic_membership_check),
        ("normalization branches reassemble the solution set", normalization_reassembles),
        ("depth-1 exponent bound", depth_one_bound),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS  {}. {name} — {detail} [{elapsed:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {}. {name} — {detail} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
