use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use log::info;
use num_complex::Complex64;

use super::config::RunConfig;
use super::run::{remainder_field, NormRecord, RunOutput, StepContext, StepObserver};
use crate::kg::Sign;
use crate::spectral::{BoxGrid, SpectralField};
use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"VKG1";
pub const FORMAT_VERSION: u32 = 1;

/// A dense array of real components on a row-major lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub axes: Vec<usize>,
    pub components: Vec<Vec<f64>>,
}

impl Snapshot {
    pub fn len(&self) -> usize {
        self.axes.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn from_real(time: f64, field: &SpectralField) -> Result<Self> {
        let g = field.grid();
        Ok(Self { time, axes: vec![g.points(); g.dim()], components: field.to_real()? })
    }

    /// Real parts of all components followed by imaginary parts.
    pub fn from_complex(time: f64, field: &SpectralField) -> Self {
        let g = field.grid();
        let c = field.to_complex();
        let mut components: Vec<Vec<f64>> = c.iter().map(|v| v.iter().map(|z| z.re).collect()).collect();
        components.extend(c.iter().map(|v| v.iter().map(|z| z.im).collect::<Vec<f64>>()));
        Self { time, axes: vec![g.points(); g.dim()], components }
    }

    fn check_grid(&self, grid: &BoxGrid) -> Result<()> {
        if self.axes != vec![grid.points(); grid.dim()] {
            return Err(Error::Dimension(format!("snapshot axes {:?} do not match the grid", self.axes)));
        }
        Ok(())
    }

    pub fn to_real_field(&self, grid: BoxGrid) -> Result<SpectralField> {
        self.check_grid(&grid)?;
        let refs: Vec<&[f64]> = self.components.iter().map(|c| c.as_slice()).collect();
        SpectralField::from_real_components(grid, &refs)
    }

    pub fn to_complex_field(&self, grid: BoxGrid) -> Result<SpectralField> {
        self.check_grid(&grid)?;
        let m = self.components.len();
        if !m.is_multiple_of(2) {
            return Err(Error::Format("complex snapshot needs an even component count".into()));
        }
        let comps = (0..m / 2)
            .map(|c| {
                let samples: Vec<Complex64> = self.components[c]
                    .iter()
                    .zip(&self.components[c + m / 2])
                    .map(|(&re, &im)| Complex64::new(re, im))
                    .collect();
                crate::spectral::fft::forward(&grid, &samples)
            })
            .collect();
        SpectralField::from_coefficients(grid, comps)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(32 + 8 * self.len() * self.components.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&(self.axes.len() as u32).to_le_bytes());
        for n in &self.axes {
            out.extend_from_slice(&(*n as u32).to_le_bytes());
        }
        out.extend_from_slice(&(self.components.len() as u32).to_le_bytes());
        out.extend_from_slice(&self.time.to_le_bytes());
        for c in &self.components {
            for v in c {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut pos = 0usize;
        let mut take = |n: usize| -> Result<&[u8]> {
            let s = bytes.get(pos..pos + n).ok_or_else(|| Error::Format("snapshot truncated".into()))?;
            pos += n;
            Ok(s)
        };
        if take(4)? != MAGIC {
            return Err(Error::Format("bad snapshot magic".into()));
        }
        let u32_at = |s: &[u8]| u32::from_le_bytes(s.try_into().expect("4 bytes")) as usize;
        let version = u32_at(take(4)?);
        if version != FORMAT_VERSION as usize {
            return Err(Error::Format(format!("unsupported snapshot version {version}")));
        }
        let d = u32_at(take(4)?);
        if d == 0 || d > 8 {
            return Err(Error::Format(format!("implausible axis count {d}")));
        }
        let mut axes = Vec::with_capacity(d);
        for _ in 0..d {
            axes.push(u32_at(take(4)?));
        }
        let m = u32_at(take(4)?);
        let time = f64::from_le_bytes(take(8)?.try_into().expect("8 bytes"));
        let n: usize = axes.iter().product();
        let mut components = Vec::with_capacity(m);
        for _ in 0..m {
            let raw = take(8 * n)?;
            components.push(raw.chunks_exact(8).map(|b| f64::from_le_bytes(b.try_into().expect("8 bytes"))).collect());
        }
        if take(1).is_ok() {
            return Err(Error::Format("trailing bytes after snapshot payload".into()));
        }
        Ok(Self { time, axes, components })
    }
}

pub fn write_snapshot(path: &Path, snap: &Snapshot) -> Result<()> {
    let mut f = BufWriter::new(fs::File::create(path)?);
    f.write_all(&snap.to_bytes())?;
    f.flush()?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let mut bytes = Vec::new();
    fs::File::open(path)?.read_to_end(&mut bytes)?;
    Snapshot::from_bytes(&bytes)
}

pub fn write_norms(path: &Path, records: &[NormRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["time", "quantity", "norm", "value"])?;
    for r in records {
        w.write_record([format!("{:?}", r.time), r.quantity.clone(), r.norm.clone(), format!("{:?}", r.value)])?;
    }
    w.flush()?;
    Ok(())
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse().map_err(|_| Error::Format(format!("not a number: '{s}'")))
}

pub fn read_norms(path: &Path) -> Result<Vec<NormRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for row in r.records() {
        let row = row?;
        if row.len() != 4 {
            return Err(Error::Format("norms.csv rows need four fields".into()));
        }
        out.push(NormRecord {
            time: parse_f64(&row[0])?,
            quantity: row[1].to_string(),
            norm: row[2].to_string(),
            value: parse_f64(&row[3])?,
        });
    }
    Ok(out)
}

/// One row of `manifest.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub file: String,
    pub quantity: String,
    pub step: usize,
    pub time: f64,
    pub axes: Vec<usize>,
    pub components: usize,
    pub config_hash: String,
}

/// Quantities written at each output time.
pub const SNAPSHOT_QUANTITIES: [&str; 7] = ["rho", "E", "phi", "E_osc_plus", "E_osc_minus", "E_r", "f"];

/// Streams snapshots to disk during a run and writes the CSVs at the end.
pub struct ArchiveWriter {
    dir: PathBuf,
    hash: String,
    every: usize,
    manifest: Vec<ManifestEntry>,
}

impl ArchiveWriter {
    /// Creates `dir` and writes `config.conf`. Refuses to touch an existing archive.
    pub fn create(dir: &Path, config: &RunConfig) -> Result<Self> {
        if dir.join("manifest.csv").exists() || dir.join("config.conf").exists() {
            return Err(Error::Io(std::io::Error::new(
                std::io::ErrorKind::AlreadyExists,
                format!("{} already holds an archive", dir.display()),
            )));
        }
        fs::create_dir_all(dir.join("snapshots"))?;
        fs::write(dir.join("config.conf"), config.to_text())?;
        Ok(Self { dir: dir.to_path_buf(), hash: config.hash(), every: config.output_every, manifest: Vec::new() })
    }

    fn put(&mut self, quantity: &str, step: usize, snap: Snapshot) -> Result<()> {
        let file = format!("snapshots/{quantity}_{step:07}.vkg");
        write_snapshot(&self.dir.join(&file), &snap)?;
        self.manifest.push(ManifestEntry {
            file,
            quantity: quantity.to_string(),
            step,
            time: snap.time,
            axes: snap.axes.clone(),
            components: snap.components.len(),
            config_hash: self.hash.clone(),
        });
        Ok(())
    }

    fn write_manifest(&self) -> Result<()> {
        let mut w = csv::Writer::from_path(self.dir.join("manifest.csv"))?;
        w.write_record(["file", "quantity", "step", "time", "axes", "components", "config_hash"])?;
        for e in &self.manifest {
            let axes: Vec<String> = e.axes.iter().map(|n| n.to_string()).collect();
            w.write_record([
                e.file.clone(),
                e.quantity.clone(),
                e.step.to_string(),
                format!("{:?}", e.time),
                axes.join("x"),
                e.components.to_string(),
                e.config_hash.clone(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `f` as a lattice with x axes first, then v axes.
fn distribution_snapshot(ctx: &StepContext<'_>) -> Option<Snapshot> {
    let values = ctx.dist.values()?;
    let x = ctx.dist.x_grid();
    let v = ctx.dist.v_grid()?;
    let (nx, nv) = (x.len(), v.len());
    let mut data = vec![0.0; nx * nv];
    for iv in 0..nv {
        for ix in 0..nx {
            data[ix * nv + iv] = values[iv * nx + ix];
        }
    }
    let mut axes = vec![x.points(); x.dim()];
    axes.extend(vec![v.points(); v.dim()]);
    Some(Snapshot { time: ctx.time, axes, components: vec![data] })
}

impl StepObserver for ArchiveWriter {
    fn observe(&mut self, ctx: &StepContext<'_>) -> Result<()> {
        if !ctx.step.is_multiple_of(self.every) && !ctx.is_final {
            return Ok(());
        }
        let (t, st) = (ctx.time, ctx.state);
        self.put("rho", ctx.step, Snapshot::from_real(t, ctx.density)?)?;
        self.put("E", ctx.step, Snapshot::from_real(t, &st.electric_field())?)?;
        self.put("phi", ctx.step, Snapshot::from_real(t, st.phi())?)?;
        for sign in Sign::BOTH {
            let q = format!("E_osc_{}", sign.label());
            self.put(&q, ctx.step, Snapshot::from_complex(t, &st.oscillatory_field(sign)))?;
        }
        self.put("E_r", ctx.step, Snapshot::from_complex(t, &remainder_field(st)?))?;
        if let Some(f) = distribution_snapshot(ctx) {
            self.put("f", ctx.step, f)?;
        }
        Ok(())
    }

    fn finish(&mut self, output: &RunOutput) -> Result<()> {
        write_norms(&self.dir.join("norms.csv"), &output.norms)?;
        self.write_manifest()?;
        info!("archive written to {} ({} snapshots)", self.dir.display(), self.manifest.len());
        Ok(())
    }
}

/// A finished archive opened for reading.
#[derive(Debug, Clone)]
pub struct RunArchive {
    pub dir: PathBuf,
    pub config: RunConfig,
    pub manifest: Vec<ManifestEntry>,
}

impl RunArchive {
    pub fn open(dir: &Path) -> Result<Self> {
        let config = RunConfig::load(&dir.join("config.conf"))?;
        let mut r = csv::Reader::from_path(dir.join("manifest.csv"))?;
        let mut manifest = Vec::new();
        for row in r.records() {
            let row = row?;
            if row.len() != 7 {
                return Err(Error::Format("manifest rows need seven fields".into()));
            }
            let axes = row[4]
                .split('x')
                .map(|s| s.parse().map_err(|_| Error::Format(format!("bad axes '{}'", &row[4]))))
                .collect::<Result<Vec<usize>>>()?;
            manifest.push(ManifestEntry {
                file: row[0].to_string(),
                quantity: row[1].to_string(),
                step: row[2].parse().map_err(|_| Error::Format("bad step".into()))?,
                time: parse_f64(&row[3])?,
                axes,
                components: row[5].parse().map_err(|_| Error::Format("bad component count".into()))?,
                config_hash: row[6].to_string(),
            });
        }
        let hash = config.hash();
        if let Some(e) = manifest.iter().find(|e| e.config_hash != hash) {
            return Err(Error::Format(format!("{} was written by a different config", e.file)));
        }
        Ok(Self { dir: dir.to_path_buf(), config, manifest })
    }

    pub fn norms(&self) -> Result<Vec<NormRecord>> {
        read_norms(&self.dir.join("norms.csv"))
    }

    /// All snapshots of one quantity, in time order.
    pub fn snapshots(&self, quantity: &str) -> Result<Vec<Snapshot>> {
        let entries: Vec<&ManifestEntry> = self.manifest.iter().filter(|e| e.quantity == quantity).collect();
        if entries.is_empty() {
            return Err(Error::Lookup(format!("archive has no '{quantity}' snapshots")));
        }
        entries.iter().map(|e| read_snapshot(&self.dir.join(&e.file))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driver::run::{run, RunOptions};

    #[test]
    fn snapshot_bytes_round_trip_and_layout() {
        let s = Snapshot { time: 1.5, axes: vec![2, 3], components: vec![(0..6).map(f64::from).collect()] };
        let b = s.to_bytes();
        assert_eq!(&b[0..4], b"VKG1");
        assert_eq!(u32::from_le_bytes(b[4..8].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(b[8..12].try_into().unwrap()), 2);
        assert_eq!(f64::from_le_bytes(b[24..32].try_into().unwrap()), 1.5);
        assert_eq!(f64::from_le_bytes(b[40..48].try_into().unwrap()), 1.0);
        assert_eq!(b.len(), 32 + 48);
        assert_eq!(Snapshot::from_bytes(&b).unwrap(), s);
        assert!(Snapshot::from_bytes(&b[..b.len() - 1]).is_err());
        let mut bad = b.clone();
        bad[0] = b'X';
        assert!(Snapshot::from_bytes(&bad).is_err());
    }

    #[test]
    fn complex_snapshot_round_trips_field() {
        let g = BoxGrid::new(1, 5.0, 16).unwrap();
        let f = SpectralField::sample(g, |x| (-x[0] * x[0]).exp())
            .map_coefficients(|_, k, z| z * Complex64::new(0.3, k[0]));
        let back = Snapshot::from_complex(0.0, &f).to_complex_field(g).unwrap();
        assert!(back.sub(&f).unwrap().max_coefficient() < 1e-15);
    }

    #[test]
    fn archive_write_read_and_append_only() {
        let dir = std::env::temp_dir().join(format!("vkg-archive-test-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        let c = RunConfig {
            half_length: 16.0,
            grid_points: 32,
            velocity_points: 32,
            dt: 0.25,
            horizon: 1.0,
            output_every: 2,
            ..RunConfig::default()
        };
        let mut w = ArchiveWriter::create(&dir, &c).unwrap();
        let out = run(&c, RunOptions::default(), &mut [&mut w]).unwrap();
        let a = RunArchive::open(&dir).unwrap();
        assert_eq!(a.config, c);
        assert_eq!(a.norms().unwrap(), out.norms);
        let rho = a.snapshots("rho").unwrap();
        assert_eq!(rho.len(), 3);
        assert_eq!(rho[2].time, 1.0);
        let f = a.snapshots("f").unwrap();
        assert_eq!(f[0].axes, vec![32, 32]);
        let field = rho[2].to_real_field(c.x_grid().unwrap()).unwrap();
        assert!(field.sub(&out.dist.density().unwrap()).unwrap().max_coefficient() < 1e-15);
        assert!(a.snapshots("nope").is_err());
        assert!(ArchiveWriter::create(&dir, &c).is_err());
        fs::remove_dir_all(&dir).unwrap();
    }
}
