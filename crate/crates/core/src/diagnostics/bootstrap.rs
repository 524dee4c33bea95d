use std::fmt;

use crate::kg::Sign;
use crate::oscillation::split_field;
use crate::spectral::norms::{derivative_norm, h_norm, lp_norm, spectral_tail_fraction, BESOV_TAIL_TOLERANCE};
use crate::spectral::SpectralField;
use crate::transport::RunHistory;
use crate::{par, Result};

/// Fields entering the ledger at one time.
#[derive(Debug, Clone)]
pub struct LedgerFrame {
    pub time: f64,
    pub s: SpectralField,
    pub e_r: SpectralField,
    pub e_osc: [SpectralField; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    Skipped,
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowStatus::Ok => "ok",
            RowStatus::Skipped => "skipped",
        })
    }
}

/// Smallest `ε` with `value(t) ≤ ε⟨t⟩^{−rate}` over the run.
#[derive(Debug, Clone, PartialEq)]
pub struct LedgerRow {
    pub name: String,
    pub norm: String,
    pub order: u32,
    pub rate: f64,
    pub epsilon: f64,
    pub worst_time: f64,
    pub status: RowStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ledger {
    pub dim: usize,
    pub alpha0: usize,
    pub rows: Vec<LedgerRow>,
}

type Value = Box<dyn Fn(&LedgerFrame) -> f64 + Send + Sync>;
type Probe = Box<dyn Fn(&LedgerFrame) -> Vec<(&SpectralField, f64)> + Send + Sync>;

struct RowSpec {
    name: String,
    norm: String,
    order: u32,
    rate: f64,
    value: Value,
    /// Fields and derivative orders whose resolution the row relies on.
    needs: Probe,
}

fn p_label(p: f64) -> String {
    if p.is_infinite() {
        "Linf".into()
    } else {
        format!("L{p}")
    }
}

fn gradient_magnitude_norm(f: &SpectralField, p: f64) -> f64 {
    derivative_norm(f, 1, p)
}

fn row_specs(dim: usize, alpha0: usize) -> Vec<RowSpec> {
    let d = dim as f64;
    let mut rows = Vec::new();
    let lps = [1.0, 2.0, f64::INFINITY];
    for &p in &lps {
        rows.push(RowSpec {
            name: "S + dS".into(),
            norm: p_label(p),
            order: 1,
            rate: d * (1.0 - 1.0 / p),
            value: Box::new(move |f| lp_norm(&f.s, p) + gradient_magnitude_norm(&f.s, p)),
            needs: Box::new(|f| vec![(&f.s, 1.0)]),
        });
        rows.push(RowSpec {
            name: "E_r".into(),
            norm: p_label(p),
            order: 0,
            rate: d * (1.0 - 1.0 / p),
            value: Box::new(move |f| lp_norm(&f.e_r, p)),
            needs: Box::new(|f| vec![(&f.e_r, 0.0)]),
        });
    }
    for sign in Sign::BOTH {
        for &p in &lps[1..] {
            let i = sign.index();
            rows.push(RowSpec {
                name: format!("E_osc_{}", sign.label()),
                norm: p_label(p),
                order: 0,
                rate: d * (0.5 - 1.0 / p),
                value: Box::new(move |f| lp_norm(&f.e_osc[i], p)),
                needs: Box::new(move |f| vec![(&f.e_osc[i], 0.0)]),
            });
        }
    }
    let span = (alpha0 - 1) as f64;
    for m in 1..alpha0 as u32 {
        let delta = m as f64 / span;
        for &p in &lps {
            rows.push(RowSpec {
                name: format!("D^{m} S"),
                norm: p_label(p),
                order: m,
                rate: d * (1.0 - 1.0 / p) - delta,
                value: Box::new(move |f| derivative_norm(&f.s, m, p)),
                needs: Box::new(move |f| vec![(&f.s, m as f64)]),
            });
            rows.push(RowSpec {
                name: format!("D^{m} E_r"),
                norm: p_label(p),
                order: m,
                rate: d * (1.0 - 1.0 / p) - delta,
                value: Box::new(move |f| derivative_norm(&f.e_r, m, p)),
                needs: Box::new(move |f| vec![(&f.e_r, m as f64)]),
            });
        }
        rows.push(RowSpec {
            name: format!("D^{} E_r", m + 1),
            norm: "L2".into(),
            order: m + 1,
            rate: d / 2.0 - delta,
            value: Box::new(move |f| derivative_norm(&f.e_r, m + 1, 2.0)),
            needs: Box::new(move |f| vec![(&f.e_r, (m + 1) as f64)]),
        });
    }
    let a = alpha0 as f64;
    rows.push(RowSpec {
        name: "E_osc".into(),
        norm: format!("H{alpha0}"),
        order: alpha0 as u32,
        rate: 0.0,
        value: Box::new(move |f| h_norm(&f.e_osc[0], a) + h_norm(&f.e_osc[1], a)),
        needs: Box::new(move |f| vec![(&f.e_osc[0], a), (&f.e_osc[1], a)]),
    });
    rows.push(RowSpec {
        name: format!("E_osc H{} + E_r H{} + S H{alpha0}", alpha0 + 1, alpha0 + 1),
        norm: "H".into(),
        order: alpha0 as u32 + 1,
        rate: -1.0 / span,
        value: Box::new(move |f| {
            h_norm(&f.e_osc[0], a + 1.0) + h_norm(&f.e_osc[1], a + 1.0) + h_norm(&f.e_r, a + 1.0) + h_norm(&f.s, a)
        }),
        needs: Box::new(move |f| vec![(&f.e_osc[0], a + 1.0), (&f.e_osc[1], a + 1.0), (&f.e_r, a + 1.0), (&f.s, a)]),
    });
    rows
}

fn bracket(t: f64) -> f64 {
    (1.0 + t * t).sqrt()
}

/// Evaluates every implemented decay and boundedness inequality with
/// dimension-adjusted exponents. Rows whose derivative order the grid cannot
/// resolve at some frame are marked skipped with `ε = NaN`.
pub fn bootstrap_monitor(frames: &[LedgerFrame], alpha0: usize) -> Ledger {
    let dim = frames.first().map(|f| f.s.grid().dim()).unwrap_or(1);
    let specs = row_specs(dim, alpha0);
    let rows = par::map_indexed(specs.len(), |r| {
        let spec = &specs[r];
        let resolved = frames.iter().all(|f| {
            (spec.needs)(f).iter().all(|(field, s)| spectral_tail_fraction(field, *s) <= BESOV_TAIL_TOLERANCE)
        });
        let (mut eps, mut worst) = (0.0_f64, frames.first().map_or(0.0, |f| f.time));
        if resolved {
            for f in frames {
                let e = (spec.value)(f) * bracket(f.time).powf(spec.rate);
                if e > eps {
                    eps = e;
                    worst = f.time;
                }
            }
        }
        LedgerRow {
            name: spec.name.clone(),
            norm: spec.norm.clone(),
            order: spec.order,
            rate: spec.rate,
            epsilon: if resolved { eps } else { f64::NAN },
            worst_time: worst,
            status: if resolved { RowStatus::Ok } else { RowStatus::Skipped },
        }
    });
    Ledger { dim, alpha0, rows }
}

/// Frames at every `every`-th stored step (and the last one).
pub fn frames_from_history(history: &RunHistory, every: usize) -> Result<Vec<LedgerFrame>> {
    let split = split_field(history);
    let times = history.times();
    let mut idx: Vec<usize> = (0..times.len()).step_by(every.max(1)).collect();
    if idx.last() != Some(&(times.len() - 1)) {
        idx.push(times.len() - 1);
    }
    idx.into_iter()
        .map(|i| {
            let t = times[i];
            Ok(LedgerFrame {
                time: t,
                s: history.density.fields()[i].clone(),
                e_r: split.remainder(t)?,
                e_osc: [split.oscillatory(Sign::Plus, t)?, split.oscillatory(Sign::Minus, t)?],
            })
        })
        .collect()
}

impl Ledger {
    pub fn row(&self, name: &str, norm: &str) -> Option<&LedgerRow> {
        self.rows.iter().find(|r| r.name == name && r.norm == norm)
    }

    pub fn skipped(&self) -> usize {
        self.rows.iter().filter(|r| r.status == RowStatus::Skipped).count()
    }

    pub fn write_csv(&self, path: &std::path::Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["row", "norm", "derivative_order", "rate", "epsilon", "worst_time", "status"])?;
        for r in &self.rows {
            w.write_record([
                r.name.clone(),
                r.norm.clone(),
                r.order.to_string(),
                format!("{:?}", r.rate),
                format!("{:?}", r.epsilon),
                format!("{:?}", r.worst_time),
                r.status.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}
