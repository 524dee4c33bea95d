//! Decay fits over archived norms and the `report` directory.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;

use super::archive::RunArchive;
use super::config::RunConfig;
use super::run::{series_of, NormRecord};
use crate::diagnostics::{bootstrap_monitor, fit_decay, DecayReport, Ledger, LedgerFrame, KG_PERIOD};
use crate::kg::Sign;
use crate::oscillation::ResolventKernel;
use crate::spectral::SpectralField;
use crate::{Error, Result};

/// Quantity/norm pairs fitted by `report`.
pub const STANDARD_FITS: [(&str, &str); 10] = [
    ("rho", "L1"),
    ("rho", "L2"),
    ("rho", "Linf"),
    ("E", "L2"),
    ("E", "Linf"),
    ("E_osc_plus", "L2"),
    ("E_osc_plus", "Linf"),
    ("E_osc_minus", "Linf"),
    ("E_r", "Linf"),
    ("phi", "Linf"),
];

/// Series that carry the Klein-Gordon oscillation and are fitted on their
/// period-averaged envelope.
pub fn is_oscillatory(quantity: &str) -> bool {
    matches!(quantity, "E" | "phi" | "E_osc_plus" | "E_osc_minus")
}

/// `[2π, T]`: after one Klein-Gordon period, up to the horizon.
pub fn default_window(config: &RunConfig) -> (f64, f64) {
    (KG_PERIOD, config.horizon)
}

/// Parses `t0:t1`.
pub fn parse_window(s: &str) -> Result<(f64, f64)> {
    let (a, b) = s.split_once(':').ok_or_else(|| Error::Config(format!("window '{s}' is not of the form t0:t1")))?;
    let parse = |x: &str| x.trim().parse::<f64>().map_err(|_| Error::Config(format!("bad window bound '{x}'")));
    let w = (parse(a)?, parse(b)?);
    if !(w.0 > 0.0 && w.1 > w.0) {
        return Err(Error::Config(format!("window {s} must satisfy 0 < t0 < t1")));
    }
    Ok(w)
}

/// Fits one recorded norm series.
pub fn fit_records(
    records: &[NormRecord],
    config: &RunConfig,
    quantity: &str,
    norm: &str,
    window: (f64, f64),
) -> Result<DecayReport> {
    let (t, v) = series_of(records, quantity, norm)?;
    let avg = is_oscillatory(quantity).then_some(KG_PERIOD);
    fit_decay(quantity, norm, &t, &v, window, config.wrap_time(), avg)
}

pub fn fit_archive(archive: &RunArchive, quantity: &str, norm: &str, window: (f64, f64)) -> Result<DecayReport> {
    fit_records(&archive.norms()?, &archive.config, quantity, norm, window)
}

/// Ledger frames rebuilt from the archived `rho`, `E_r` and `E_osc±` snapshots.
pub fn frames_from_archive(archive: &RunArchive) -> Result<Vec<LedgerFrame>> {
    let grid = archive.config.x_grid()?;
    let rho = archive.snapshots("rho")?;
    let e_r = archive.snapshots("E_r")?;
    let plus = archive.snapshots("E_osc_plus")?;
    let minus = archive.snapshots("E_osc_minus")?;
    if [e_r.len(), plus.len(), minus.len()].iter().any(|&n| n != rho.len()) {
        return Err(Error::Format("snapshot counts differ between quantities".into()));
    }
    let mut frames = Vec::with_capacity(rho.len());
    for i in 0..rho.len() {
        let complex = |s: &super::archive::Snapshot| -> Result<SpectralField> { s.to_complex_field(grid) };
        frames.push(LedgerFrame {
            time: rho[i].time,
            s: rho[i].to_real_field(grid)?,
            e_r: complex(&e_r[i])?,
            e_osc: [complex(&plus[i])?, complex(&minus[i])?],
        });
    }
    Ok(frames)
}

/// Truncated-series resolvent kernel against the exact symbol on the run grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRow {
    pub sign: Sign,
    pub order: u32,
    pub speed: f64,
    pub terms: usize,
    /// Max relative deviation over all grid wavevectors.
    pub deviation: f64,
    pub bound: f64,
}

impl SeriesRow {
    pub fn passed(&self) -> bool {
        self.deviation <= self.bound * (1.0 + 1e-9) + 1e-15
    }
}

/// Series kernels of order 1..=3 at `series_order` terms, for speeds up to `v_radius`.
pub fn resolvent_series_check(config: &RunConfig) -> Result<Vec<SeriesRow>> {
    let grid = config.x_grid()?;
    let mut rows = Vec::new();
    for sign in Sign::BOTH {
        for order in 1..=3 {
            for frac in [0.25, 0.5, 1.0] {
                let speed = frac * config.v_radius;
                let kernel = ResolventKernel::new(sign, order, [speed, 0.0, 0.0]);
                let deviation = (0..grid.len())
                    .map(|i| {
                        let k = grid.wavevector(i);
                        let exact = kernel.exact_symbol(&k);
                        (kernel.series_symbol(&k, config.series_order) - exact).norm() / exact.norm()
                    })
                    .fold(0.0, f64::max);
                let bound = kernel.tail_bound(config.series_order);
                rows.push(SeriesRow { sign, order, speed, terms: config.series_order, deviation, bound });
            }
        }
    }
    Ok(rows)
}

fn write_series(path: &Path, rows: &[SeriesRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["sign", "order", "speed", "terms", "deviation", "bound", "status"])?;
    for r in rows {
        w.write_record([
            r.sign.label().to_string(),
            r.order.to_string(),
            format!("{:?}", r.speed),
            r.terms.to_string(),
            format!("{:?}", r.deviation),
            format!("{:?}", r.bound),
            if r.passed() { "pass" } else { "fail" }.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// What `write_report` produced.
#[derive(Debug)]
pub struct ReportSummary {
    pub dir: PathBuf,
    pub ledger: Ledger,
    pub fits: Vec<DecayReport>,
    pub series: Vec<SeriesRow>,
    pub files: Vec<PathBuf>,
}

fn write_wide_norms(path: &Path, records: &[NormRecord]) -> Result<()> {
    let mut columns: BTreeMap<String, BTreeMap<u64, f64>> = BTreeMap::new();
    let mut times: BTreeMap<u64, f64> = BTreeMap::new();
    for r in records {
        let key = r.time.to_bits();
        times.insert(key, r.time);
        columns.entry(format!("{}:{}", r.quantity, r.norm)).or_default().insert(key, r.value);
    }
    let mut order: Vec<(u64, f64)> = times.into_iter().collect();
    order.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["time".to_string()];
    header.extend(columns.keys().cloned());
    w.write_record(&header)?;
    for (key, t) in order {
        let mut row = vec![format!("{t:?}")];
        for col in columns.values() {
            row.push(col.get(&key).map(|v| format!("{v:?}")).unwrap_or_default());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `<archive>/report/`: the bootstrap ledger, the standard decay fits,
/// one series file per fit, all norms in wide form and the resolvent series check.
pub fn write_report(archive: &RunArchive) -> Result<ReportSummary> {
    let dir = archive.dir.join("report");
    fs::create_dir_all(dir.join("fits"))?;
    let mut files = Vec::new();

    let ledger = bootstrap_monitor(&frames_from_archive(archive)?, archive.config.alpha0);
    let path = dir.join("ledger.csv");
    ledger.write_csv(&path)?;
    files.push(path);

    let records = archive.norms()?;
    let path = dir.join("norms_wide.csv");
    write_wide_norms(&path, &records)?;
    files.push(path);

    let series = resolvent_series_check(&archive.config)?;
    let path = dir.join("resolvent_series.csv");
    write_series(&path, &series)?;
    files.push(path);

    let window = default_window(&archive.config);
    let mut fits = Vec::new();
    let mut w = csv::Writer::from_path(dir.join("fits.csv"))?;
    w.write_record(["quantity", "norm", "t0", "t1", "exponent", "residual", "samples", "period_averaged", "status"])?;
    for (q, n) in STANDARD_FITS {
        match fit_records(&records, &archive.config, q, n, window) {
            Ok(fit) => {
                let path = dir.join("fits").join(format!("{q}_{n}.csv"));
                fit.write_csv(&path)?;
                files.push(path);
                w.write_record([
                    q.to_string(),
                    n.to_string(),
                    format!("{:?}", fit.window.0),
                    format!("{:?}", fit.window.1),
                    format!("{:?}", fit.exponent),
                    format!("{:?}", fit.residual),
                    fit.samples.to_string(),
                    fit.period_averaged.to_string(),
                    "ok".into(),
                ])?;
                fits.push(fit);
            }
            Err(e) => {
                warn!("fit {q} {n}: {e}");
                let (a, b) = (format!("{:?}", window.0), format!("{:?}", window.1));
                let status = e.to_string().replace(',', ";");
                w.write_record([q, n, &a, &b, "NaN", "NaN", "0", &is_oscillatory(q).to_string(), &status])?;
            }
        }
    }
    w.flush()?;
    files.push(dir.join("fits.csv"));
    Ok(ReportSummary { dir, ledger, fits, series, files })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driver::archive::ArchiveWriter;
    use crate::driver::run::{run, RunOptions};

    #[test]
    fn windows_parse() {
        assert_eq!(parse_window("2:10.5").unwrap(), (2.0, 10.5));
        assert!(parse_window("10:2").is_err());
        assert!(parse_window("0:2").is_err());
        assert!(parse_window("3").is_err());
    }

    #[test]
    fn report_from_small_archive() {
        let dir = std::env::temp_dir().join(format!("vkg-report-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        let c = RunConfig {
            half_length: 20.0,
            grid_points: 64,
            velocity_points: 64,
            dt: 0.1,
            horizon: 12.0,
            output_every: 10,
            alpha0: 4,
            ..RunConfig::default()
        };
        let mut w = ArchiveWriter::create(&dir, &c).unwrap();
        run(&c, RunOptions { keep_history: false, record_norms: true }, &mut [&mut w]).unwrap();
        let a = RunArchive::open(&dir).unwrap();
        let s = write_report(&a).unwrap();
        assert!(s.files.iter().all(|f| f.exists()));
        assert_eq!(s.series.len(), 18);
        assert!(s.series.iter().all(SeriesRow::passed));
        assert_eq!(frames_from_archive(&a).unwrap().len(), 13);
        let rho = s.fits.iter().find(|f| f.quantity == "rho" && f.norm == "Linf").unwrap();
        assert!(rho.exponent < -0.5, "{}", rho.exponent);
        assert!(matches!(fit_archive(&a, "nope", "Linf", (1.0, 5.0)), Err(Error::Lookup(_))));
        fs::remove_dir_all(&dir).unwrap();
    }
}
