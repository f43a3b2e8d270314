//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::time::Instant;

use dsgm_core::divergence::{neg_grad_split, appendix_table_neg_grad};
use dsgm_core::gradcheck::{check_neg_grad, random_pair};
use dsgm_core::invariance::{nominal_stationarity_residual, InvarianceFactor};
use dsgm_core::linear::InverseProblem;
use dsgm_core::solver::{iterate_multiplicative, solve, ConvergenceTrace, Mode, SolverConfig, Status};
use dsgm_core::synth::{generate, SynthConfig, SynthProblem};
use dsgm_core::{DivergenceSpec, EntropyFamily, FactorChoice, Form, Variant};

fn families() -> Vec<EntropyFamily> {
    use EntropyFamily::*;
    vec![
        Shannon,
        Tsallis { t: 0.5 },
        Tsallis { t: 1.7 },
        Kaniadakis { k: 0.3 },
        Kaniadakis { k: -0.6 },
        Abe { z: 1.4 },
        Abe { z: 0.6 },
        Gamma { g: 0.2 },
        Gamma { g: -0.3 },
        Kls { k: 0.4, r: 0.1 },
        Kls { k: 0.3, r: -0.2 },
        GeneralAb { a: 1.5, b: 0.5 },
        GeneralAb { a: 0.3, b: 2.2 },
        Newton,
        Alpha { alpha: 0.4 },
        Alpha { alpha: -0.25 },
    ]
}

fn plain_specs() -> Vec<DivergenceSpec> {
    let mut out = Vec::new();
    for fam in families() {
        for form in Form::ALL {
            if let Ok(s) = DivergenceSpec::plain(fam, form) {
                out.push(s);
            }
        }
    }
    out
}

fn invariant_specs() -> Vec<DivergenceSpec> {
    let mut out = Vec::new();
    for fam in families() {
        for form in Form::ALL {
            if let Ok(s) = DivergenceSpec::invariant(fam, form, FactorChoice::Reference) {
                out.push(s);
            }
        }
    }
    for t in [0.5, 1.7, 2.0, 3.0] {
        for form in Form::ALL {
            out.push(DivergenceSpec::invariant(EntropyFamily::Tsallis { t }, form, FactorChoice::Nominal).unwrap());
        }
    }
    out
}

fn inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let specs: Vec<_> = plain_specs().into_iter().chain(invariant_specs()).collect();
    let mut worst = (0.0f64, String::new());
    let mut failures = 0;
    for spec in &specs {
        for seed in 1..=20u64 {
            let (p, q) = random_pair(seed, 6, 0.1, 10.0);
            let g = spec.neg_grad(&p, &q).unwrap();
            let r = check_neg_grad(|y| spec.value(&p, y), &g, &q).unwrap();
            if r.max_rel_err > 1e-5 {
                failures += 1;
            }
            if r.max_rel_err > worst.0 {
                worst = (r.max_rel_err, format!("{spec} seed {seed}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: failures == 0 && secs < 10.0,
        detail: format!(
            "{} specs x 20 inputs, worst rel err {:.2e} ({}), {failures} over 1e-5, {secs:.2}s",
            specs.len(),
            worst.0,
            worst.1
        ),
    }
}

fn ac2() -> Outcome {
    let mut worst = 0.0f64;
    let mut count = 0;
    for spec in plain_specs() {
        if matches!(spec.family(), EntropyFamily::Alpha { .. }) {
            continue;
        }
        count += 1;
        for seed in 1..=20u64 {
            let (p, q) = random_pair(seed, 6, 0.1, 10.0);
            let table = appendix_table_neg_grad(&spec, &p, &q).unwrap();
            let general = spec.neg_grad(&p, &q).unwrap();
            let scale = inf(&general).max(1.0);
            let err = table.iter().zip(&general).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())) / scale;
            worst = worst.max(err);
        }
    }
    Outcome {
        pass: worst <= 1e-12,
        detail: format!("{count} specs x 20 inputs, worst scaled difference {worst:.2e}"),
    }
}

fn ac3() -> Outcome {
    let mut worst_v = 0.0f64;
    let mut worst_g = 0.0f64;
    let specs: Vec<_> = plain_specs().into_iter().chain(invariant_specs()).collect();
    for spec in &specs {
        for seed in 1..=20u64 {
            let (p, _) = random_pair(seed, 6, 0.1, 10.0);
            worst_v = worst_v.max(spec.value(&p, &p).unwrap().abs());
            worst_g = worst_g.max(inf(&spec.neg_grad(&p, &p).unwrap()));
        }
    }
    Outcome {
        pass: worst_v <= 1e-12 && worst_g <= 1e-10,
        detail: format!("{} specs, max |D(p‖p)| {worst_v:.2e}, max |grad| {worst_g:.2e}", specs.len()),
    }
}

fn ac4() -> Outcome {
    use EntropyFamily::*;
    let e = 1e-6;
    let near = [
        Tsallis { t: 1.0 + e },
        Tsallis { t: 1.0 - e },
        Kaniadakis { k: e },
        Kaniadakis { k: -e },
        Abe { z: 1.0 + e },
        Abe { z: 1.0 - e },
        Gamma { g: e },
        Gamma { g: -e },
        Kls { k: e, r: 0.0 },
    ];
    let p = [0.7, 2.5, 1.2, 4.0, 0.3];
    let q = [1.1, 1.9, 2.2, 3.1, 0.9];
    let mut worst = 0.0f64;
    for form in Form::ALL {
        let kl = DivergenceSpec::plain(Shannon, form).unwrap().value(&p, &q).unwrap();
        for fam in near {
            let v = DivergenceSpec::plain(fam, form).unwrap().value(&p, &q).unwrap();
            worst = worst.max((v - kl).abs() / kl.abs());
        }
    }
    Outcome {
        pass: worst <= 1e-4,
        detail: format!("{} families x 4 forms, worst rel deviation from KL {worst:.2e}", near.len()),
    }
}

fn ac5() -> Outcome {
    let mut worst_scale = 0.0f64;
    let mut worst_euler = 0.0f64;
    let specs = invariant_specs();
    for spec in &specs {
        for seed in 1..=20u64 {
            let (p, q) = random_pair(seed, 6, 0.1, 10.0);
            let d = spec.value(&p, &q).unwrap();
            for lambda in [1e-3, 0.5, 7.0, 1e3] {
                let lq: Vec<f64> = q.iter().map(|x| lambda * x).collect();
                let dl = spec.value(&p, &lq).unwrap();
                worst_scale = worst_scale.max((dl - d).abs() / d.abs());
            }
            let g = spec.neg_grad(&p, &q).unwrap();
            let euler: f64 = q.iter().zip(&g).map(|(q, g)| q * g).sum();
            let scale: f64 = q.iter().zip(&g).map(|(q, g)| (q * g).abs()).sum();
            worst_euler = worst_euler.max(euler.abs() / scale);
        }
    }
    Outcome {
        pass: worst_scale <= 1e-12 && worst_euler <= 1e-10,
        detail: format!(
            "{} specs, worst scale deviation {worst_scale:.2e}, worst Euler residual {worst_euler:.2e}",
            specs.len()
        ),
    }
}

fn ac6() -> Outcome {
    let mut worst_res = 0.0f64;
    let mut worst_one = 0.0f64;
    for t in [0.3, 0.5, 1.7, 2.0, 3.0] {
        for form in Form::ALL {
            let kind = InvarianceFactor::nominal(form, t).unwrap();
            let base = DivergenceSpec::plain(EntropyFamily::Tsallis { t }, form).unwrap();
            for seed in 1..=20u64 {
                let (p, q) = random_pair(seed, 6, 0.1, 10.0);
                let res = nominal_stationarity_residual(kind, &p, &q).unwrap();
                let k0 = kind.evaluate(&p, &q).unwrap();
                let kq: Vec<f64> = q.iter().map(|x| k0 * x).collect();
                let s = neg_grad_split(&base, &p, &kq).unwrap();
                let scale: f64 = q.iter().enumerate().map(|(j, q)| q * (s.u[j] + s.v[j])).sum();
                worst_res = worst_res.max(res.abs() / scale);
                worst_one = worst_one.max((kind.evaluate(&p, &p).unwrap() - 1.0).abs());
            }
        }
    }
    let mut violations = 0;
    for seed in 0..100u64 {
        let t = 0.25 + 0.05 * (seed % 50) as f64;
        if (t - 1.0).abs() < 1e-9 {
            continue;
        }
        let fam = EntropyFamily::Tsallis { t };
        let (p, q) = random_pair(1000 + seed, 6, 0.1, 10.0);
        let nominal = DivergenceSpec::invariant(fam, Form::Csiszar, FactorChoice::Nominal).unwrap();
        let reference = DivergenceSpec::invariant(fam, Form::Csiszar, FactorChoice::Reference).unwrap();
        let (vn, vr) = (nominal.value(&p, &q).unwrap(), reference.value(&p, &q).unwrap());
        if vn > vr + 1e-12 * vr.abs() {
            violations += 1;
        }
    }
    Outcome {
        pass: worst_res <= 1e-9 && worst_one <= 1e-14 && violations == 0,
        detail: format!(
            "worst scaled stationarity residual {worst_res:.2e}, max |K0(p,p) - 1| {worst_one:.2e}, \
             nominal > reference on {violations}/100 inputs"
        ),
    }
}

fn synth_problem() -> (SynthProblem, InverseProblem) {
    let s = generate(&SynthConfig { n: 32, seed: 1, kernel_width: 5, ..SynthConfig::default() }).unwrap();
    let prob = InverseProblem::new(Box::new(s.operator().unwrap()), s.measurement.clone(), None).unwrap();
    (s, prob)
}

fn monotone(trace: &ConvergenceTrace) -> bool {
    trace.records.windows(2).all(|w| w[1].value <= w[0].value + 1e-12 * w[0].value.abs())
}

fn min_x(traces: &[&ConvergenceTrace]) -> f64 {
    traces
        .iter()
        .flat_map(|t| t.records.iter().map(|r| r.min_x))
        .fold(f64::INFINITY, f64::min)
}

fn ac7(traces: &mut Vec<ConvergenceTrace>) -> Outcome {
    let (s, prob) = synth_problem();

    let kl = DivergenceSpec::plain(EntropyFamily::Shannon, Form::Csiszar).unwrap();
    let mut cfg = SolverConfig::new(Mode::Multiplicative, kl);
    cfg.max_iters = 5000;
    let start = Instant::now();
    let (_, t1) = solve(&cfg, &prob, &s.x0).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let kl_ok = t1.last().value <= 1e-8 && t1.iterations() <= 5000 && secs < 5.0;

    let ab = DivergenceSpec::plain(EntropyFamily::GeneralAb { a: 1.5, b: 0.5 }, Form::Csiszar).unwrap();
    let mut cfg = SolverConfig::new(Mode::Additive, ab);
    cfg.max_iters = 10_000;
    cfg.grad_tol = 1e-6;
    let (_, t2) = solve(&cfg, &prob, &s.x0).unwrap();
    let ab_ok = monotone(&t2) && t2.last().grad_norm <= 1e-6;

    let detail = format!(
        "KL multiplicative: D = {:.2e} after {} iters ({}, {secs:.2}s); \
         AB(1.5,0.5) additive: monotone = {}, gradnorm = {:.2e} after {} iters ({})",
        t1.last().value,
        t1.iterations(),
        t1.status,
        monotone(&t2),
        t2.last().grad_norm,
        t2.iterations(),
        t2.status
    );
    traces.push(t1);
    traces.push(t2);
    Outcome { pass: kl_ok && ab_ok, detail }
}

fn ac8(traces: &mut Vec<ConvergenceTrace>) -> Outcome {
    let (s, prob) = synth_problem();
    let c: f64 = s.x0.iter().sum();

    let mut worst_add = 0.0f64;
    let mut runs = 0;
    for spec in invariant_specs() {
        let mut cfg = SolverConfig::new(Mode::Additive, spec);
        cfg.max_iters = 200;
        cfg.sum_constraint = Some(c);
        let (_, t) = solve(&cfg, &prob, &s.x0).unwrap();
        for w in t.records.windows(2) {
            worst_add = worst_add.max((w[1].sum_x - w[0].sum_x).abs() / w[0].sum_x);
        }
        runs += 1;
        traces.push(t);
    }

    // Normalization neutrality is a relative statement about D. On noiseless data D
    // tends to zero while the rounding of C·x̃/Σx̃ perturbs it by about ε·Σ|p - Hx|, so
    // the ratio eventually measures rounding alone. The check therefore uses the
    // Poisson-noisy version of the same problem, where min D is of order one; the
    // noiseless figure is printed for reference.
    let noisy = generate(&SynthConfig { poisson: true, ..SynthConfig::default() }).unwrap();
    let noisy_prob =
        InverseProblem::new(Box::new(noisy.operator().unwrap()), noisy.measurement.clone(), None).unwrap();
    let mut worst_sum = 0.0f64;
    let mut worst_neutral = 0.0f64;
    let mut noiseless_neutral = 0.0f64;
    for fam in [EntropyFamily::Shannon, EntropyFamily::GeneralAb { a: 1.5, b: 0.5 }, EntropyFamily::Tsallis { t: 2.0 }] {
        let spec = DivergenceSpec::new(fam, Form::Csiszar, Variant::Invariant, FactorChoice::Reference).unwrap();
        let mut cfg = SolverConfig::new(Mode::Multiplicative, spec);
        cfg.sum_constraint = Some(c);
        for (problem, worst) in [(&noisy_prob, &mut worst_neutral), (&prob, &mut noiseless_neutral)] {
            let mut x = s.x0.clone();
            for _ in 0..200 {
                let step = iterate_multiplicative(&cfg, problem, &x).unwrap();
                let raw = step.before_normalization.as_ref().unwrap();
                let before = problem.value(&spec, raw).unwrap();
                let after = problem.value(&spec, &step.x).unwrap();
                *worst = worst.max((before - after).abs() / after.abs());
                let sum: f64 = step.x.iter().sum();
                worst_sum = worst_sum.max((sum - c).abs() / c);
                x = step.x;
            }
        }
        cfg.max_iters = 200;
        let (_, t) = solve(&cfg, &prob, &s.x0).unwrap();
        traces.push(t);
    }
    Outcome {
        pass: worst_add <= 1e-12 && worst_sum <= 1e-14 && worst_neutral <= 1e-12,
        detail: format!(
            "additive ({runs} invariant specs) worst Σx drift {worst_add:.2e}; \
             multiplicative |Σx - C|/C {worst_sum:.2e}, normalization value change {worst_neutral:.2e} \
             (noiseless data, D -> 0: {noiseless_neutral:.2e})"
        ),
    }
}

fn ac9(traces: &[ConvergenceTrace]) -> Outcome {
    let refs: Vec<&ConvergenceTrace> = traces.iter().collect();
    let m = min_x(&refs);
    let degenerate = traces.iter().filter(|t| t.status == Status::Degenerate).count();
    Outcome {
        pass: m > 0.0,
        detail: format!("{} runs, min x over all iterates {m:.3e} (step_safety 0.99), {degenerate} degenerate", traces.len()),
    }
}

fn main() {
    let mut traces = Vec::new();
    let results = [
        ("AC1 gradient oracle", ac1()),
        ("AC2 path agreement", ac2()),
        ("AC3 identity", ac3()),
        ("AC4 limit consistency", ac4()),
        ("AC5 invariance", ac5()),
        ("AC6 nominal factors", ac6()),
        ("AC7 solver reconstruction", ac7(&mut traces)),
        ("AC8 constraints", ac8(&mut traces)),
        ("AC9 non-negativity", ac9(&traces)),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!("{} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
