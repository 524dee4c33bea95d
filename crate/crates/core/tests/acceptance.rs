//! Acceptance suite: one pass/fail line per criterion.

use std::fs;
use std::path::Path;
use std::sync::OnceLock;
use std::time::Instant;

use vkg_core::diagnostics::{fit_decay_exponent, period_average, scattering_limits, KG_PERIOD};
use vkg_core::driver::report::{default_window, fit_records};
use vkg_core::driver::{run, run_check, ArchiveWriter, CheckReport, RunConfig, RunOptions, RunOutput};
use vkg_core::kg::{lambda, FieldState, Sign};
use vkg_core::oscillation::split_field;
use vkg_core::spectral::norms::lp_norm;
use vkg_core::spectral::{BoxGrid, SpectralField};
use vkg_core::transport::{CharacteristicBundle, FieldHistory, RunHistory, ZeroField};
use vkg_core::Point;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self { passed, detail: detail.into() }
    }
}

struct Reference {
    output: RunOutput,
    seconds: f64,
    archive: tempfile::TempDir,
}

fn reference() -> &'static Reference {
    static REF: OnceLock<Reference> = OnceLock::new();
    REF.get_or_init(|| {
        let config = RunConfig::default();
        let archive = tempfile::tempdir().expect("tempdir");
        let mut writer = ArchiveWriter::create(archive.path(), &config).expect("archive");
        let start = Instant::now();
        let output = run(&config, RunOptions { keep_history: true, record_norms: true }, &mut [&mut writer])
            .expect("reference run");
        Reference { output, seconds: start.elapsed().as_secs_f64(), archive }
    })
}

fn uncoupled() -> &'static RunOutput {
    static OUT: OnceLock<RunOutput> = OnceLock::new();
    OUT.get_or_init(|| {
        let c = RunConfig { coupling: false, ..RunConfig::default() };
        run(&c, RunOptions { keep_history: false, record_norms: true }, &mut []).expect("uncoupled run")
    })
}

fn fit(out: &RunOutput, quantity: &str, norm: &str) -> f64 {
    fit_records(&out.norms, &out.config, quantity, norm, default_window(&out.config))
        .map(|r| r.exponent)
        .unwrap_or(f64::NAN)
}

fn within(x: f64, target: f64, tol: f64) -> bool {
    (x - target).abs() <= tol
}

fn check_line(r: &CheckReport) -> String {
    r.items.iter().map(|i| format!("{} {:.3e} ({})", i.name, i.value, i.condition)).collect::<Vec<_>>().join("; ")
}

fn suite(name: &str) -> (bool, String) {
    match run_check(name) {
        Ok(r) => (r.passed(), check_line(&r)),
        Err(e) => (false, format!("{name}: {e}")),
    }
}

/// 9 × 9 phase-space probes around the bulk of the data.
fn probes() -> Vec<(Point, Point)> {
    let mut p = Vec::new();
    for i in 0..9 {
        for j in 0..9 {
            let x = -3.0 + 0.75 * i as f64;
            let v = -0.7 + 0.175 * j as f64;
            p.push(([x, 0.0, 0.0], [v, 0.0, 0.0]));
        }
    }
    p
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (ok, detail) = suite("green");
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(ok && secs < 10.0, format!("{detail}; {secs:.2}s < 10s"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let (ok, detail) = suite("keyint");
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(ok && secs < 30.0, format!("{detail}; {secs:.2}s < 30s"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let out = uncoupled();
    let (linf, l2) = (fit(out, "rho", "Linf"), fit(out, "rho", "L2"));
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(
        within(linf, -1.0, 0.1) && within(l2, -0.5, 0.1) && secs < 60.0,
        format!("free-streaming rho: Linf exponent {linf:.4} (-1 +- 0.1), L2 exponent {l2:.4} (-0.5 +- 0.1); {secs:.1}s < 60s"),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let out = uncoupled();
    let phi = fit(out, "phi", "Linf");
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(
        within(phi, -0.5, 0.1) && secs < 60.0,
        format!("linear Klein-Gordon phi: Linf exponent {phi:.4} (-0.5 +- 0.1); {secs:.1}s (shared run) < 60s"),
    )
}

/// `Ê = Σ± e^{λ±t} B̂±` with constant profiles.
fn pure_wave_remainder() -> f64 {
    let g = BoxGrid::new(1, 16.0, 128).expect("grid");
    let phi0 = SpectralField::sample(g, |x| (-x[0] * x[0]).exp());
    let phi1 = SpectralField::sample(g, |x| x[0] * (-x[0] * x[0]).exp());
    let s0 = FieldState::new(phi0, phi1).expect("state");
    let mut h = RunHistory::new(g);
    for n in 0..=40 {
        let t = 0.25 * n as f64;
        let b = [s0.profile(Sign::Plus).clone(), s0.profile(Sign::Minus).clone()];
        let mut e = SpectralField::zeros(g, 1);
        for sign in Sign::BOTH {
            let osc = b[sign.index()].map_coefficients(|_, k, z| z * (lambda(sign, k) * t).exp());
            e = e.add(&osc).expect("add");
        }
        h.push(t, e, b, SpectralField::zeros(g, 1));
    }
    let split = split_field(&h);
    (0..=40).map(|n| lp_norm(&split.remainder(0.25 * n as f64).expect("remainder"), f64::INFINITY)).fold(0.0, f64::max)
}

fn criterion_5() -> Outcome {
    let er = pure_wave_remainder();
    let out = &reference().output;
    let (osc, s) = (fit(out, "E_osc_plus", "Linf"), fit(out, "rho", "Linf"));
    Outcome::new(
        er <= 1e-10 && within(osc, -0.5, 0.15) && within(s, -1.0, 0.15),
        format!(
            "pure wave max ||E_r||inf {er:.2e} (<= 1e-10); reference E_osc Linf exponent {osc:.4} (-0.5 +- 0.15), S Linf exponent {s:.4} (-1 +- 0.15)"
        ),
    )
}

fn criterion_6() -> Outcome {
    let (ok, detail) = suite("decomp");
    Outcome::new(ok, detail)
}

fn criterion_7() -> Outcome {
    let (ok, detail) = suite("duhamel");
    Outcome::new(ok, detail)
}

fn max_det_defect(history: &dyn FieldHistory, t: f64, s: f64, dtau: f64) -> Result<f64, String> {
    let b = CharacteristicBundle::backward(history, &probes(), t, s, dtau).map_err(|e| e.to_string())?;
    let js = b.jacobians(history, dtau, 1e-2).map_err(|e| e.to_string())?;
    Ok(js.iter().map(|j| (j.det_x - 1.0).abs()).fold(0.0, f64::max))
}

fn criterion_8() -> Outcome {
    let r = reference();
    let c = &r.output.config;
    let h = r.output.history.as_ref().expect("history");
    let (mut free, mut coupled) = (0.0_f64, 0.0_f64);
    for t in [10.0, 20.0, 30.0] {
        for s in [0.0, 0.5 * t] {
            match (max_det_defect(&ZeroField { dim: 1 }, t, s, c.dt), max_det_defect(h, t, s, c.dt)) {
                (Ok(a), Ok(b)) => {
                    free = free.max(a);
                    coupled = coupled.max(b);
                }
                (Err(e), _) | (_, Err(e)) => return Outcome::new(false, e),
            }
        }
    }
    let bound = 10.0 * c.epsilon0;
    Outcome::new(
        free <= 1e-12 && coupled <= bound,
        format!(
            "free streaming max |det-1| {free:.2e} (<= 1e-12); reference max |det-1| {coupled:.2e} (<= {bound:e}) over 81 probes, t in {{10,20,30}}, s in {{0,t/2}}"
        ),
    )
}

/// Period-averaged `‖V(t) − V∞‖∞`, its octave samples and the fitted exponent.
fn reference_scattering() -> Result<(bool, f64, Vec<(f64, f64)>), String> {
    let r = reference();
    let c = &r.output.config;
    let h = r.output.history.as_ref().expect("history");
    let split = split_field(h);
    let rep = scattering_limits(&split, &probes(), 1.875, c.horizon, c.dt, 1.0).map_err(|e| e.to_string())?;
    let (t, v): (Vec<f64>, Vec<f64>) = rep.convergence.iter().filter(|(t, _)| *t > 0.0).copied().unzip();
    let (ta, va) = period_average(&t, &v, KG_PERIOD);
    let (gamma, _) = fit_decay_exponent(&ta, &va, (KG_PERIOD, c.horizon)).map_err(|e| e.to_string())?;
    let nearest = |target: f64| {
        let i = ta
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - target).abs().total_cmp(&(b.1 - target).abs()))
            .map(|(i, _)| i)
            .expect("samples");
        (ta[i], va[i])
    };
    let mut octaves = Vec::new();
    let mut tm = c.horizon / 2.0;
    while tm >= ta[0] {
        octaves.push(nearest(tm));
        tm /= 2.0;
    }
    octaves.reverse();
    octaves.push((ta[ta.len() - 1], va[va.len() - 1]));
    let monotone = octaves.windows(2).all(|w| w[1].1 < w[0].1);
    Ok((monotone, gamma, octaves))
}

fn criterion_9() -> Outcome {
    let (frozen_ok, frozen) = suite("scatter");
    match reference_scattering() {
        Ok((monotone, gamma, octaves)) => {
            let oct: Vec<String> = octaves.iter().map(|(t, v)| format!("{t:.2}:{v:.3e}")).collect();
            Outcome::new(
                frozen_ok && monotone && within(gamma, -0.5, 0.15),
                format!(
                    "{frozen}; reference ||V-V_inf||inf octaves [{}] monotone {monotone}, exponent {gamma:.4} (-0.5 +- 0.15)",
                    oct.join(", ")
                ),
            )
        }
        Err(e) => Outcome::new(false, format!("{frozen}; reference scattering: {e}")),
    }
}

fn criterion_10() -> Outcome {
    let (ok, detail) = suite("bernstein");
    Outcome::new(ok, detail)
}

fn files(root: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir).expect("read_dir") {
            let p = entry.expect("entry").path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push(p.strip_prefix(root).expect("prefix").to_path_buf());
            }
        }
    }
    out.sort();
    out
}

fn criterion_11() -> Outcome {
    let r = reference();
    let c = &r.output.config;
    let second = tempfile::tempdir().expect("tempdir");
    let mut writer = ArchiveWriter::create(second.path(), c).expect("archive");
    if let Err(e) = run(c, RunOptions { keep_history: false, record_norms: true }, &mut [&mut writer]) {
        return Outcome::new(false, format!("second run: {e}"));
    }
    let (a, b) = (files(r.archive.path()), files(second.path()));
    let differing =
        a.iter().filter(|f| fs::read(r.archive.path().join(f)).ok() != fs::read(second.path().join(f)).ok()).count();
    let identical = a == b && differing == 0;
    Outcome::new(
        identical && r.seconds < 300.0,
        format!(
            "{} archive files, {differing} differ, same file set {}; reference run {:.1}s < 300s",
            a.len(),
            a == b,
            r.seconds
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("Green-function identities and energy drift", criterion_1),
        ("integrated-oscillation identity", criterion_2),
        ("free transport decay", criterion_3),
        ("linear Klein-Gordon dispersion", criterion_4),
        ("oscillation extraction", criterion_5),
        ("velocity and straightening decompositions", criterion_6),
        ("Duhamel decoupling identity", criterion_7),
        ("characteristic Jacobians", criterion_8),
        ("scattering", criterion_9),
        ("Littlewood-Paley suite", criterion_10),
        ("reproducibility and performance", criterion_11),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let n = i + 1;
        if !filter.is_empty() && !filter.iter().any(|a| a == &n.to_string()) {
            continue;
        }
        let start = Instant::now();
        let o = f();
        failed += usize::from(!o.passed);
        println!(
            "criterion {n:2} {}: {name} [{:.1}s] {}",
            if o.passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
