//! Acceptance suite: every core capability gets one numbered check with a
//! single pass/fail line, a measured worst defect, and a runtime budget.
//! The suite runs everything and reports all lines before failing, so a red
//! check never hides the state of the others.
//!
//! Run with: cargo test --test acceptance -- --nocapture

use fracpart::cli::{self, Cli, Command};
use fracpart::config::RunConfig;
use fracpart::solver::{
    continuation_segregate, default_sweep_grid, energy_system, grad_system, nehari_project,
    partition_sweep, sign_change_obstruction, solve_dirichlet_interval, CouplingSpec,
    SegregationRun,
};
use fracpart::special::JacobiParams;
use fracpart::spectral::{
    dirichlet_form_direct, holder_partial_sums, symbol, symbol_asymptotics, Problem, QuadSpec,
    SpectralField,
};
use fracpart::ProblemParams;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::time::Instant;

const N_GRID: [usize; 3] = [3, 4, 5];
const S_GRID: [f64; 4] = [0.55, 0.6, 0.75, 0.9];

struct Outcome {
    name: &'static str,
    detail: Result<String, String>,
    seconds: f64,
    budget: f64,
}

impl Outcome {
    fn passed(&self) -> bool {
        self.detail.is_ok() && self.seconds <= self.budget
    }

    fn line(&self) -> String {
        let (verdict, text) = match &self.detail {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        let verdict = if self.seconds > self.budget {
            "FAIL"
        } else {
            verdict
        };
        let over = if self.seconds > self.budget {
            format!(" [over budget {:.0}s]", self.budget)
        } else {
            String::new()
        };
        format!(
            "{} {:<28} {} ({:.2}s{}) {}",
            verdict, self.name, if self.detail.is_ok() { " " } else { "!" }, self.seconds, over, text
        )
    }
}

fn run(
    name: &'static str,
    budget: f64,
    body: impl FnOnce() -> Result<String, String>,
) -> Outcome {
    let start = Instant::now();
    let detail = body();
    Outcome {
        name,
        detail,
        seconds: start.elapsed().as_secs_f64(),
        budget,
    }
}

/// The continuation artifacts shared by the checks that follow it.
struct BigRun {
    pr: Problem,
    run: SegregationRun,
    c0: f64,
}

#[test]
fn acceptance() {
    let mut outcomes: Vec<Outcome> = Vec::new();

    outcomes.push(run("01 symbol identities", 1.0, symbol_identities));
    outcomes.push(run("02 weight mass", 1.0, weight_mass));
    outcomes.push(run("03 orthonormality+parseval", 5.0, orthonormality_parseval));
    outcomes.push(run("04 symbol asymptotics", 1.0, asymptotics));
    outcomes.push(run("05 bilinear direct route", 600.0, bilinear_direct));
    outcomes.push(run("06 gradient consistency", 30.0, gradient_consistency));
    outcomes.push(run("07 nehari projection", 10.0, nehari_contract));

    let mut big: Option<BigRun> = None;
    outcomes.push(run("08 segregation continuation", 600.0, || {
        let (result, state) = segregation_continuation()?;
        big = Some(state);
        Ok(result)
    }));
    outcomes.push(run("09 two-route partition", 1800.0, || match &big {
        Some(b) => two_route(b),
        None => Err("prerequisite 08 failed".into()),
    }));
    outcomes.push(run("10 hoelder tail", 120.0, hoelder_tail));
    outcomes.push(run("11 sign-change obstruction", 1.0, || match &big {
        Some(b) => sign_change(b),
        None => Err("prerequisite 08 failed".into()),
    }));
    outcomes.push(run("12 byte determinism", 900.0, determinism));

    let mut report = String::new();
    for o in &outcomes {
        writeln!(report, "{}", o.line()).unwrap();
    }
    println!("\n{report}");
    let failed: Vec<&Outcome> = outcomes.iter().filter(|o| !o.passed()).collect();
    assert!(
        failed.is_empty(),
        "{} acceptance check(s) failed:\n{report}",
        failed.len()
    );
}

// ---------------------------------------------------------------------------
// 01: the symbol at zero and the half-order closed form
// ---------------------------------------------------------------------------

fn symbol_identities() -> Result<String, String> {
    let mut worst_zero = 0.0f64;
    for &big_n in &N_GRID {
        for &s in &S_GRID {
            let p = ProblemParams::new(2, big_n - 1, s).map_err(|e| e.to_string())?;
            let defect = (symbol(&p, 0.0).map_err(|e| e.to_string())? - p.a_ns).abs() / p.a_ns;
            worst_zero = worst_zero.max(defect);
        }
    }
    if worst_zero > 1e-12 {
        return Err(format!("phi(0) defect {worst_zero:.3e} exceeds 1e-12"));
    }
    let mut worst_half = 0.0f64;
    for &big_n in &N_GRID {
        let p = ProblemParams::new(2, big_n - 1, 0.5).map_err(|e| e.to_string())?;
        let c = (big_n as f64 - 1.0) / 2.0;
        for i in 0..11 {
            let lam = 2.0 * i as f64 * (2.0 * i as f64 + big_n as f64 - 1.0);
            let want = (lam + c * c).sqrt();
            let defect = (symbol(&p, lam).map_err(|e| e.to_string())? - want).abs() / want;
            worst_half = worst_half.max(defect);
        }
    }
    if worst_half > 1e-10 {
        return Err(format!("half-order defect {worst_half:.3e} exceeds 1e-10"));
    }
    Ok(format!(
        "phi(0) defect {worst_zero:.1e}, half-order defect {worst_half:.1e}"
    ))
}

// ---------------------------------------------------------------------------
// 02: quadrature weight mass = sphere volume for every block split
// ---------------------------------------------------------------------------

fn weight_mass() -> Result<String, String> {
    let mut worst = 0.0f64;
    let mut count = 0;
    for m in 2..=5usize {
        for n in 2..=5usize {
            if m + n - 1 > 6 {
                continue;
            }
            let p = ProblemParams::new(m, n, 0.75).map_err(|e| e.to_string())?;
            let pr = Problem::new(p, 8, 32).map_err(|e| e.to_string())?;
            let mass: f64 = pr.basis.weights().iter().sum();
            let vol = p.sphere_volume();
            worst = worst.max((mass - vol).abs() / vol);
            count += 1;
        }
    }
    if worst > 1e-10 {
        return Err(format!("mass defect {worst:.3e} exceeds 1e-10"));
    }
    Ok(format!("{count} block splits, worst defect {worst:.1e}"))
}

// ---------------------------------------------------------------------------
// 03: orthonormality through the quadrature and Parseval on random fields
// ---------------------------------------------------------------------------

fn orthonormality_parseval() -> Result<String, String> {
    let p = ProblemParams::new(2, 2, 0.75).map_err(|e| e.to_string())?;
    let pr = Problem::new(p, 128, 256).map_err(|e| e.to_string())?;
    let mut worst_orth = 0.0f64;
    for i in 0..128usize {
        for j in i..128usize {
            let dot: f64 = (0..pr.q())
                .map(|r| {
                    pr.basis.weights()[r]
                        * pr.basis.mode_at_node(i, r)
                        * pr.basis.mode_at_node(j, r)
                })
                .sum();
            let want = if i == j { 1.0 } else { 0.0 };
            worst_orth = worst_orth.max((dot - want).abs());
        }
    }
    if worst_orth > 1e-10 {
        return Err(format!("orthonormality defect {worst_orth:.3e} exceeds 1e-10"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_pars = 0.0f64;
    for _ in 0..100 {
        let coeffs: Vec<f64> = (0..pr.k()).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        let sum_sq: f64 = coeffs.iter().map(|c| c * c).sum();
        let values = pr.basis.synthesize(&coeffs);
        let mass = pr.lp_integral(&values, 2.0).map_err(|e| e.to_string())?;
        worst_pars = worst_pars.max((mass - sum_sq).abs() / sum_sq);
    }
    if worst_pars > 1e-10 {
        return Err(format!("Parseval defect {worst_pars:.3e} exceeds 1e-10"));
    }
    Ok(format!(
        "orthonormality {worst_orth:.1e}, Parseval {worst_pars:.1e}"
    ))
}

// ---------------------------------------------------------------------------
// 04: symbol growth ratios r_i = phi(b_i)/b_i^s
// ---------------------------------------------------------------------------

fn asymptotics() -> Result<String, String> {
    let imax = 10_000;
    let mut worst_far = 0.0f64;
    let mut ratio_lo = f64::INFINITY;
    let mut ratio_hi = 0.0f64;
    for &big_n in &N_GRID {
        for &s in &S_GRID {
            let p = ProblemParams::new(2, big_n - 1, s).map_err(|e| e.to_string())?;
            let ratios = symbol_asymptotics(&p, imax).map_err(|e| e.to_string())?;
            worst_far = worst_far.max((ratios[imax - 1] - 1.0).abs());
            for &r in &ratios[9..] {
                ratio_lo = ratio_lo.min(r);
                ratio_hi = ratio_hi.max(r);
            }
        }
    }
    if worst_far >= 0.01 {
        return Err(format!("|r - 1| = {worst_far:.3e} at i = {imax}, need < 0.01"));
    }
    if ratio_lo < 0.5 || ratio_hi > 2.0 {
        return Err(format!(
            "ratio range [{ratio_lo:.3}, {ratio_hi:.3}] leaves [0.5, 2] for i >= 10"
        ));
    }
    Ok(format!(
        "|r-1| = {worst_far:.1e} at i = {imax}, range [{ratio_lo:.3}, {ratio_hi:.3}] for i >= 10"
    ))
}

// ---------------------------------------------------------------------------
// 05: the singular double integral reproduces the diagonal symbol
// ---------------------------------------------------------------------------

fn bilinear_direct() -> Result<String, String> {
    let p = ProblemParams::new(2, 2, 0.75).map_err(|e| e.to_string())?;
    let pr = Problem::new(p, 8, 16).map_err(|e| e.to_string())?;
    let spec = QuadSpec::default();
    let gate = 0.02;
    let phi2 = pr.phi(2);
    let mut worst_diag = 0.0f64;
    let mut worst_off = 0.0f64;
    for i in 0..3usize {
        for j in i..3usize {
            let mut ci = vec![0.0; 8];
            ci[i] = 1.0;
            let mut cj = vec![0.0; 8];
            cj[j] = 1.0;
            let v = dirichlet_form_direct(
                &pr,
                &SpectralField::from_coeffs(ci),
                &SpectralField::from_coeffs(cj),
                &spec,
            )
            .map_err(|e| e.to_string())?;
            if i == j {
                worst_diag = worst_diag.max((v - pr.phi(i)).abs() / pr.phi(i));
            } else {
                worst_off = worst_off.max(v.abs());
            }
        }
    }
    if worst_diag > gate {
        return Err(format!("diagonal defect {worst_diag:.3e} exceeds {gate}"));
    }
    if worst_off > gate * phi2 {
        return Err(format!(
            "off-diagonal {worst_off:.3e} exceeds {:.3e}",
            gate * phi2
        ));
    }
    Ok(format!(
        "diagonal rel {worst_diag:.1e}, off-diagonal {worst_off:.1e} (gate {:.2e})",
        gate * phi2
    ))
}

// ---------------------------------------------------------------------------
// 06: analytic gradient vs central differences across the (l, eta) matrix
// ---------------------------------------------------------------------------

fn gradient_consistency() -> Result<String, String> {
    let p = ProblemParams::new(2, 2, 0.75).map_err(|e| e.to_string())?;
    let pr = Problem::new(p, 24, 48).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for ell in [1usize, 2, 3] {
        for eta in [-1.0, -100.0] {
            let coupling =
                CouplingSpec::symmetric(ell, eta, p.two_star).map_err(|e| e.to_string())?;
            let base: Vec<Vec<f64>> = (0..ell)
                .map(|_| (0..pr.k()).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect())
                .collect();
            let fields: Vec<SpectralField> = base
                .iter()
                .map(|c| SpectralField::from_coeffs(c.clone()))
                .collect();
            let grad = grad_system(&pr, &coupling, &fields).map_err(|e| e.to_string())?;
            for _ in 0..20 {
                let dirs: Vec<Vec<f64>> = (0..ell)
                    .map(|_| (0..pr.k()).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect())
                    .collect();
                let slope: f64 = grad
                    .iter()
                    .zip(&dirs)
                    .flat_map(|(g, d)| g.iter().zip(d).map(|(a, b)| a * b))
                    .sum();
                let h = 1e-5;
                let eval = |sign: f64| -> Result<f64, String> {
                    let shifted: Vec<SpectralField> = base
                        .iter()
                        .zip(&dirs)
                        .map(|(c, d)| {
                            SpectralField::from_coeffs(
                                c.iter().zip(d).map(|(a, b)| a + sign * h * b).collect(),
                            )
                        })
                        .collect();
                    energy_system(&pr, &coupling, &shifted).map_err(|e| e.to_string())
                };
                let fd = (eval(1.0)? - eval(-1.0)?) / (2.0 * h);
                worst = worst.max((fd - slope).abs() / slope.abs().max(1e-300));
            }
        }
    }
    if worst >= 1e-6 {
        return Err(format!("gradient/FD defect {worst:.3e} exceeds 1e-6"));
    }
    Ok(format!("worst relative defect {worst:.1e} over 6 configurations x 20 directions"))
}

// ---------------------------------------------------------------------------
// 07: Nehari projection residuals, closed form, scaling invariance
// ---------------------------------------------------------------------------

fn bumps(pr: &Problem, centers: &[f64], sigma: f64) -> Vec<SpectralField> {
    centers
        .iter()
        .map(|&c| {
            let values: Vec<f64> = pr
                .basis
                .theta_nodes()
                .iter()
                .map(|&th| (-((th - c) / sigma).powi(2)).exp())
                .collect();
            SpectralField::from_coeffs(pr.basis.analyze_to(&values, pr.k()))
        })
        .collect()
}

fn nehari_contract() -> Result<String, String> {
    let p = ProblemParams::new(2, 2, 0.75).map_err(|e| e.to_string())?;
    let pr = Problem::new(p, 64, 128).map_err(|e| e.to_string())?;
    let two_star = p.two_star;

    // Residuals of a coupled projection.
    let coupling = CouplingSpec::symmetric(2, -10.0, two_star).map_err(|e| e.to_string())?;
    let fields = bumps(&pr, &[1.0, 2.2], 0.4);
    let proj = nehari_project(&pr, &coupling, &fields).map_err(|e| e.to_string())?;
    let worst_res = proj.residuals.iter().fold(0.0f64, |m, r| m.max(*r));
    if worst_res > 1e-10 {
        return Err(format!("residual {worst_res:.3e} exceeds 1e-10"));
    }

    // Single component against the closed form.
    let single = CouplingSpec::symmetric(1, -1.0, two_star).map_err(|e| e.to_string())?;
    let u = &bumps(&pr, &[1.4], 0.5)[0];
    let pu = nehari_project(&pr, &single, std::slice::from_ref(u)).map_err(|e| e.to_string())?;
    let a = pr.sobolev_norm2(u).map_err(|e| e.to_string())?;
    let q = pr
        .lp_integral(&pr.basis.synthesize(u.coeffs()), two_star)
        .map_err(|e| e.to_string())?;
    let want = (a / q).powf(1.0 / (two_star - 2.0));
    let closed = (pu.t[0] - want).abs() / want;
    if closed > 1e-12 {
        return Err(format!("closed-form defect {closed:.3e} exceeds 1e-12"));
    }

    // Componentwise positive rescaling moves the scales, not the argpoint.
    let scales = [2.7, 0.3];
    let rescaled: Vec<SpectralField> = fields
        .iter()
        .zip(&scales)
        .map(|(f, &c)| SpectralField::from_coeffs(f.coeffs().iter().map(|x| c * x).collect()))
        .collect();
    let proj2 = nehari_project(&pr, &coupling, &rescaled).map_err(|e| e.to_string())?;
    let mut worst_inv = 0.0f64;
    for i in 0..2 {
        let num: f64 = proj.fields[i]
            .coeffs()
            .iter()
            .zip(proj2.fields[i].coeffs())
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        let den: f64 = proj.fields[i].coeffs().iter().map(|a| a * a).sum();
        worst_inv = worst_inv.max((num / den).sqrt());
        worst_inv = worst_inv.max((proj2.t[i] * scales[i] - proj.t[i]).abs() / proj.t[i]);
    }
    if worst_inv > 1e-10 {
        return Err(format!("rescaling defect {worst_inv:.3e} exceeds 1e-10"));
    }
    Ok(format!(
        "residuals {worst_res:.1e}, closed form {closed:.1e}, rescaling {worst_inv:.1e}"
    ))
}

// ---------------------------------------------------------------------------
// 08: the production continuation run
// ---------------------------------------------------------------------------

fn segregation_continuation() -> Result<(String, BigRun), String> {
    let cfg = RunConfig::default();
    let pr = cfg.build_problem().map_err(|e| e.to_string())?;
    let opts = cfg.solve_options();

    // The two-cell reference energy c_0 bounds every stage from above.
    let left = solve_dirichlet_interval(&pr, 0.0, FRAC_PI_2, &opts).map_err(|e| e.to_string())?;
    let right = solve_dirichlet_interval(&pr, FRAC_PI_2, PI, &opts).map_err(|e| e.to_string())?;
    let c0 = left.c_u + right.c_u;

    let template = cfg.coupling(cfg.eta_schedule[0]).map_err(|e| e.to_string())?;
    let run = continuation_segregate(&pr, &template, &cfg.eta_schedule, &opts)
        .map_err(|e| e.to_string())?;

    let couplings: Vec<f64> = run.stages.iter().map(|s| s.coupling_integral).collect();
    for w in couplings.windows(2) {
        if !(w[1] < w[0]) {
            return Err(format!("coupling integral not strictly decreasing: {couplings:?}"));
        }
    }
    let shrink = couplings.last().unwrap() / couplings[0];
    if shrink >= 0.02 {
        return Err(format!("coupling shrank only to {shrink:.3e} x initial, need < 0.02"));
    }
    for st in &run.stages {
        if st.energy > c0 {
            return Err(format!(
                "stage eta = {} energy {:.6} exceeds two-cell bound {:.6}",
                st.eta, st.energy, c0
            ));
        }
    }
    let detail = format!(
        "coupling {:.2e} -> {:.2e} ({:.1e} x), energies <= c_0 = {:.6}",
        couplings[0],
        couplings.last().unwrap(),
        shrink,
        c0
    );
    Ok((detail, BigRun { pr, run, c0 }))
}

// ---------------------------------------------------------------------------
// 09: segregation interface vs the independent sweep
// ---------------------------------------------------------------------------

fn two_route(big: &BigRun) -> Result<String, String> {
    let cfg = RunConfig::default();
    let opts = cfg.solve_options();
    let grid = default_sweep_grid();
    let sweep = partition_sweep(&big.pr, &grid, &opts).map_err(|e| e.to_string())?;

    if big.run.partition.angles.len() != 1 {
        return Err(format!(
            "expected exactly 1 interface, found {:?}",
            big.run.partition.angles
        ));
    }
    let seg_angle = big.run.partition.angles[0];
    let sweep_angle = sweep.partition.angles[0];
    let gap = (seg_angle - sweep_angle).abs();
    if gap > 0.04 {
        return Err(format!(
            "routes disagree: segregation {seg_angle:.4} vs sweep {sweep_angle:.4} (gap {gap:.4} > 0.04)"
        ));
    }

    // Equal blocks: the sweep curve is symmetric about pi/2. The grid mirrors
    // onto itself, so compare each point with its reflection.
    let mut worst_sym = 0.0f64;
    let n = sweep.points.len();
    for (i, p) in sweep.points.iter().enumerate() {
        let q = &sweep.points[n - 1 - i];
        worst_sym = worst_sym.max((p.total - q.total).abs() / p.total);
    }
    if worst_sym > 0.01 {
        return Err(format!("sweep curve asymmetric: {worst_sym:.3e} > 1%"));
    }
    Ok(format!(
        "interface gap {gap:.2e} rad (grid 0.02), curve symmetry {worst_sym:.1e}, c_0 sweep min {:.6} vs two-cell {:.6}",
        sweep.partition.total, big.c0
    ))
}

// ---------------------------------------------------------------------------
// 10: the weighted Hoelder series diagnostic
// ---------------------------------------------------------------------------

fn hoelder_tail() -> Result<String, String> {
    let params = JacobiParams::from_block_dims(2, 2).map_err(|e| e.to_string())?;
    let sums = holder_partial_sums(params, 0.75, 0.1, 2048, 1001).map_err(|e| e.to_string())?;
    let tail = (sums[2048] - sums[1024]) / sums[2048];
    if tail >= 0.05 {
        return Err(format!(
            "tail fraction (1024, 2048] = {tail:.4e} >= 5e-2 (S_1024 = {:.6}, S_2048 = {:.6})",
            sums[1024], sums[2048]
        ));
    }
    Ok(format!("tail fraction (1024, 2048] = {tail:.4e} < 5e-2"))
}

// ---------------------------------------------------------------------------
// 11: the nonlocal sign-change obstruction on the segregated pair
// ---------------------------------------------------------------------------

fn sign_change(big: &BigRun) -> Result<String, String> {
    let state = big.run.states.last().expect("stages are nonempty");
    let report = sign_change_obstruction(&big.pr, &state.fields[0], &state.fields[1])
        .map_err(|e| e.to_string())?;
    let floor = 1e-6 * report.v_norm2;
    if report.inner <= floor {
        return Err(format!(
            "<v-, v+> = {:.4e} not above the margin {:.4e}",
            report.inner, floor
        ));
    }
    Ok(format!(
        "<v-, v+> = {:.4e} > {:.1e} margin (|v|^2 = {:.4})",
        report.inner, floor, report.v_norm2
    ))
}

// ---------------------------------------------------------------------------
// 12: byte-identical artifacts for identical config + seed
// ---------------------------------------------------------------------------

fn determinism() -> Result<String, String> {
    let dirs: Vec<tempfile::TempDir> = (0..2)
        .map(|_| tempfile::tempdir().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    for d in &dirs {
        cli::run(Cli {
            command: Command::Segregate,
            config: None,
            out: d.path().to_path_buf(),
            seed: None,
        })
        .map_err(|e| e.to_string())?;
    }
    let mut names: Vec<String> = std::fs::read_dir(dirs[0].path())
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    if names.is_empty() {
        return Err("no artifacts produced".into());
    }
    let mut bytes = 0usize;
    for name in &names {
        let a = std::fs::read(dirs[0].path().join(name)).map_err(|e| e.to_string())?;
        let b = std::fs::read(dirs[1].path().join(name)).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("{name} differs between identical runs"));
        }
        bytes += a.len();
    }
    Ok(format!(
        "{} artifacts byte-identical across runs ({bytes} bytes): {}",
        names.len(),
        names.join(", ")
    ))
}
