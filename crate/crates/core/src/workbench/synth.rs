//! Deterministic synthetic signature corpus.
//!
//! Each subject owns a parametric pen trajectory: a few cursive strokes,
//! each a Catmull-Rom spline through control points that advance left to
//! right while oscillating about a baseline, with per-point pen pressure.
//! Genuine samples re-render the trajectory with small control-point
//! jitter, a random similarity transform, pen-width and ink-intensity
//! variation. A skilled forgery is written by another subject: the target's
//! control points under much larger jitter, with the forger's own pen and
//! pressure habits.
//!
//! All randomness is ChaCha8 seeded from the single dataset seed; subject
//! `i` draws from stream `i`, so subjects are independent of each other and
//! of rendering order.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::{pgm, GrayImage};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthParams {
    pub n_subjects: usize,
    pub genuine_per_subject: usize,
    pub forgeries_per_subject: usize,
    /// Genuine samples used for enrollment; the rest are test queries.
    pub enroll_per_subject: usize,
    pub seed: u64,
    pub canvas_width: usize,
    pub canvas_height: usize,
    /// Control-point jitter (pixels, one standard deviation) between genuine samples.
    pub genuine_jitter: f64,
    /// Control-point jitter of a forger imitating the target.
    pub forgery_jitter: f64,
    /// Relative scale jitter of genuine samples.
    pub scale_jitter: f64,
    /// Rotation jitter in degrees.
    pub rotation_jitter: f64,
    /// Translation jitter in pixels.
    pub shift_jitter: f64,
    /// Ink gray-level jitter between sessions (pen pressure).
    pub ink_jitter: f64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            n_subjects: 40,
            genuine_per_subject: 9,
            forgeries_per_subject: 3,
            enroll_per_subject: 6,
            seed: 42,
            canvas_width: 360,
            canvas_height: 150,
            genuine_jitter: 2.5,
            forgery_jitter: 6.0,
            scale_jitter: 0.04,
            rotation_jitter: 2.0,
            shift_jitter: 4.0,
            ink_jitter: 10.0,
        }
    }
}

impl SynthParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_subjects == 0 || self.genuine_per_subject == 0 {
            return Err(Error::BadParameter("need at least one subject and one genuine sample".into()));
        }
        if self.forgeries_per_subject > 0 && self.n_subjects < 2 {
            return Err(Error::BadParameter("forgeries need at least two subjects".into()));
        }
        if self.enroll_per_subject == 0 || self.enroll_per_subject >= self.genuine_per_subject {
            return Err(Error::BadParameter(format!(
                "enroll_per_subject must lie in 1..{}, got {}",
                self.genuine_per_subject, self.enroll_per_subject
            )));
        }
        if self.canvas_width < 32 || self.canvas_height < 16 {
            return Err(Error::BadParameter("canvas too small".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForgeryEntry {
    pub file: String,
    /// Subject who wrote the forgery.
    pub forger: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubjectEntry {
    pub id: String,
    /// Genuine files used for enrollment.
    pub enroll: Vec<String>,
    /// Genuine files held out as test queries.
    pub test: Vec<String>,
    /// Skilled forgeries targeting this subject.
    pub forgeries: Vec<ForgeryEntry>,
}

/// Index of a dataset. Paths are relative to the manifest's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub root: PathBuf,
    pub generator: Option<SynthParams>,
    pub subjects: Vec<SubjectEntry>,
}

impl DatasetManifest {
    pub const FILE_NAME: &'static str = "manifest.json";

    pub fn n_files(&self) -> usize {
        self.subjects
            .iter()
            .map(|s| s.enroll.len() + s.test.len() + s.forgeries.len())
            .sum()
    }

    pub fn n_genuine(&self) -> usize {
        self.subjects.iter().map(|s| s.enroll.len() + s.test.len()).sum()
    }

    /// Every file the manifest references, relative to its root.
    pub fn files(&self) -> impl Iterator<Item = &str> {
        self.subjects.iter().flat_map(|s| {
            s.enroll
                .iter()
                .chain(&s.test)
                .map(String::as_str)
                .chain(s.forgeries.iter().map(|f| f.file.as_str()))
        })
    }

    /// Check the split invariants and that every listed file exists and parses.
    pub fn audit(&self, dir: &Path) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for s in &self.subjects {
            if s.enroll.is_empty() {
                return Err(Error::NoTemplates(s.id.clone()));
            }
            if let Some(g) = &self.generator {
                if s.enroll.len() != g.enroll_per_subject
                    || s.test.len() != g.genuine_per_subject - g.enroll_per_subject
                {
                    return Err(Error::BadParameter(format!("subject {} split sizes disagree with generator", s.id)));
                }
            }
            if s.enroll.iter().any(|f| s.test.contains(f)) {
                return Err(Error::BadParameter(format!("subject {} enrollment and test overlap", s.id)));
            }
        }
        for f in self.files() {
            if !seen.insert(f) {
                return Err(Error::BadParameter(format!("file {f} listed twice")));
            }
            pgm::read_image(dir.join(&self.root).join(f))?;
        }
        Ok(())
    }
}

fn subject_id(i: usize) -> String {
    format!("s{i:03}")
}

/// The manifest `synth_dataset` would write, without rendering anything.
pub fn plan_dataset(params: &SynthParams) -> Result<DatasetManifest> {
    params.validate()?;
    let subjects = (0..params.n_subjects)
        .map(|i| {
            let id = subject_id(i);
            let genuine: Vec<String> = (0..params.genuine_per_subject)
                .map(|k| format!("{id}/g{k:02}.pgm"))
                .collect();
            let forgeries = (0..params.forgeries_per_subject)
                .map(|k| ForgeryEntry {
                    file: format!("{id}/f{k:02}.pgm"),
                    forger: subject_id(forger_of(i, k, params.n_subjects)),
                })
                .collect();
            SubjectEntry {
                id,
                enroll: genuine[..params.enroll_per_subject].to_vec(),
                test: genuine[params.enroll_per_subject..].to_vec(),
                forgeries,
            }
        })
        .collect();
    Ok(DatasetManifest {
        root: PathBuf::from("."),
        generator: Some(params.clone()),
        subjects,
    })
}

/// Forger `k` of subject `i`: a fixed, distinct other subject.
fn forger_of(i: usize, k: usize, n: usize) -> usize {
    let n = n.max(2);
    (i + 1 + (k * 7) % (n - 1)) % n
}

/// Render the whole corpus under `out_dir` and write `manifest.json` there.
pub fn synth_dataset(params: &SynthParams, out_dir: &Path) -> Result<DatasetManifest> {
    let manifest = plan_dataset(params)?;
    let styles: Vec<Style> = (0..params.n_subjects)
        .map(|i| Style::random(&mut subject_rng(params.seed, i), params))
        .collect();

    manifest
        .subjects
        .par_iter()
        .enumerate()
        .try_for_each(|(i, entry)| -> Result<()> {
            // stream i, after the draws spent on the style
            let mut rng = subject_rng(params.seed, i);
            let _ = Style::random(&mut rng, params);
            for file in entry.enroll.iter().chain(&entry.test) {
                let img = render_genuine(&styles[i], params, &mut rng);
                pgm::write_pgm(out_dir.join(file), &img)?;
            }
            for (k, f) in entry.forgeries.iter().enumerate() {
                let forger = &styles[forger_of(i, k, params.n_subjects)];
                let img = render_forgery(&styles[i], forger, params, &mut rng);
                pgm::write_pgm(out_dir.join(&f.file), &img)?;
            }
            Ok(())
        })?;

    crate::workbench::persist::save(&manifest, out_dir.join(DatasetManifest::FILE_NAME))?;
    Ok(manifest)
}

fn subject_rng(seed: u64, subject: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(subject as u64);
    rng
}

#[derive(Debug, Clone)]
struct Stroke {
    points: Vec<[f64; 2]>,
    pressure: Vec<f64>,
}

#[derive(Debug, Clone)]
struct Style {
    strokes: Vec<Stroke>,
    pen_width: f64,
    ink: f64,
    slant: f64,
    baseline: f64,
}

impl Style {
    fn random(rng: &mut ChaCha8Rng, p: &SynthParams) -> Self {
        let (w, h) = (p.canvas_width as f64, p.canvas_height as f64);
        let baseline = h * rng.random_range(0.5..0.65);
        let n_strokes = rng.random_range(2..=4);
        let left = w * 0.08;
        let usable = w * 0.84;
        let gap = usable * 0.05;
        let widths: Vec<f64> = (0..n_strokes).map(|_| rng.random_range(0.6..1.4)).collect();
        let total: f64 = widths.iter().sum();
        let mut x0 = left;
        let mut strokes = Vec::with_capacity(n_strokes + 1);
        for &sw in &widths {
            let span = (usable - gap * (n_strokes - 1) as f64) * sw / total;
            let n_pts = rng.random_range(6..=11);
            let amp = h * rng.random_range(0.12..0.3);
            let mut points = Vec::with_capacity(n_pts);
            let mut pressure = Vec::with_capacity(n_pts);
            for k in 0..n_pts {
                let t = k as f64 / (n_pts - 1) as f64;
                let x = x0 + span * t + rng.random_range(-0.06..0.06) * span;
                let phase = if k % 2 == 0 { -1.0 } else { 1.0 };
                let y = baseline + phase * amp * rng.random_range(0.3..1.0) + rng.random_range(-4.0..4.0);
                points.push([x, y.clamp(6.0, h - 6.0)]);
                pressure.push(rng.random_range(0.55..1.0));
            }
            strokes.push(Stroke { points, pressure });
            x0 += span + gap;
        }
        if rng.random_bool(0.5) {
            // underline flourish
            let y = (baseline + h * rng.random_range(0.15..0.25)).min(h - 8.0);
            let xa = left + rng.random_range(0.0..0.2) * usable;
            let xb = left + rng.random_range(0.6..1.0) * usable;
            let points = (0..4)
                .map(|k| {
                    let t = k as f64 / 3.0;
                    [xa + (xb - xa) * t, y + rng.random_range(-5.0..5.0)]
                })
                .collect();
            let pressure = (0..4).map(|_| rng.random_range(0.5..0.9)).collect();
            strokes.push(Stroke { points, pressure });
        }
        Self {
            strokes,
            pen_width: rng.random_range(2.0..3.6),
            ink: rng.random_range(15.0..70.0),
            slant: rng.random_range(-0.35..0.35),
            baseline,
        }
    }
}

fn normal(rng: &mut ChaCha8Rng, sd: f64) -> f64 {
    if sd <= 0.0 {
        0.0
    } else {
        Normal::new(0.0, sd).expect("finite sd").sample(rng)
    }
}

struct Variation {
    jitter: f64,
    scale: f64,
    rotation: f64,
    shift: [f64; 2],
    slant: f64,
    pen_width: f64,
    ink: f64,
    pressure_jitter: f64,
}

fn render_genuine(style: &Style, p: &SynthParams, rng: &mut ChaCha8Rng) -> GrayImage {
    let v = Variation {
        jitter: p.genuine_jitter,
        scale: 1.0 + normal(rng, p.scale_jitter),
        rotation: normal(rng, p.rotation_jitter).to_radians(),
        shift: [normal(rng, p.shift_jitter), normal(rng, p.shift_jitter)],
        slant: style.slant + normal(rng, 0.03),
        pen_width: style.pen_width * (1.0 + normal(rng, 0.06)),
        ink: style.ink + normal(rng, p.ink_jitter),
        pressure_jitter: 0.05,
    };
    render(style, &v, p, rng)
}

fn render_forgery(target: &Style, forger: &Style, p: &SynthParams, rng: &mut ChaCha8Rng) -> GrayImage {
    let v = Variation {
        jitter: p.forgery_jitter,
        scale: 1.0 + normal(rng, p.scale_jitter * 1.5),
        rotation: normal(rng, p.rotation_jitter * 1.5).to_radians(),
        shift: [normal(rng, p.shift_jitter), normal(rng, p.shift_jitter)],
        slant: target.slant + normal(rng, 0.1),
        pen_width: forger.pen_width * (1.0 + normal(rng, 0.06)),
        ink: forger.ink + normal(rng, p.ink_jitter),
        pressure_jitter: 0.15,
    };
    render(target, &v, p, rng)
}

fn catmull_rom(p0: [f64; 2], p1: [f64; 2], p2: [f64; 2], p3: [f64; 2], t: f64) -> [f64; 2] {
    let t2 = t * t;
    let t3 = t2 * t;
    let f = |a: f64, b: f64, c: f64, d: f64| {
        0.5 * (2.0 * b + (-a + c) * t + (2.0 * a - 5.0 * b + 4.0 * c - d) * t2 + (-a + 3.0 * b - 3.0 * c + d) * t3)
    };
    [f(p0[0], p1[0], p2[0], p3[0]), f(p0[1], p1[1], p2[1], p3[1])]
}

fn render(style: &Style, v: &Variation, p: &SynthParams, rng: &mut ChaCha8Rng) -> GrayImage {
    let (w, h) = (p.canvas_width, p.canvas_height);
    let (cx, cy) = (w as f64 / 2.0, h as f64 / 2.0);
    let (sin, cos) = v.rotation.sin_cos();
    let transform = |pt: [f64; 2]| -> [f64; 2] {
        let x = pt[0] + v.slant * (style.baseline - pt[1]);
        let (dx, dy) = ((x - cx) * v.scale, (pt[1] - cy) * v.scale);
        [cx + dx * cos - dy * sin + v.shift[0], cy + dx * sin + dy * cos + v.shift[1]]
    };

    let mut canvas: Vec<f64> = (0..w * h)
        .map(|_| (242.0 + normal(rng, 3.0)).clamp(200.0, 255.0))
        .collect();
    let bg = 242.0;
    let ink_level = v.ink.clamp(0.0, 140.0);

    for stroke in &style.strokes {
        let pts: Vec<[f64; 2]> = stroke
            .points
            .iter()
            .map(|&q| transform([q[0] + normal(rng, v.jitter), q[1] + normal(rng, v.jitter)]))
            .collect();
        let pressure: Vec<f64> = stroke
            .pressure
            .iter()
            .map(|&q| (q + normal(rng, v.pressure_jitter)).clamp(0.3, 1.0))
            .collect();
        let n = pts.len();
        for seg in 0..n - 1 {
            let p0 = pts[seg.saturating_sub(1)];
            let (p1, p2) = (pts[seg], pts[seg + 1]);
            let p3 = pts[(seg + 2).min(n - 1)];
            let len = ((p2[0] - p1[0]).powi(2) + (p2[1] - p1[1]).powi(2)).sqrt();
            let steps = (len * 2.0).ceil().max(2.0) as usize;
            for s in 0..=steps {
                let t = s as f64 / steps as f64;
                let [x, y] = catmull_rom(p0, p1, p2, p3, t);
                let pr = pressure[seg] * (1.0 - t) + pressure[seg + 1] * t;
                let radius = 0.5 * v.pen_width * (0.6 + 0.4 * pr) + 0.3;
                let dark = ink_level + (1.0 - pr) * 70.0;
                stamp(&mut canvas, w, h, x, y, radius, bg, dark);
            }
        }
    }

    let pixels = canvas
        .into_iter()
        .map(|v| {
            // sparse salt-and-pepper from the scanner
            let r: f64 = rng.random();
            if r < 2e-4 {
                0
            } else if r < 4e-4 {
                255
            } else {
                v.round().clamp(0.0, 255.0) as u8
            }
        })
        .collect();
    GrayImage::new(w, h, pixels).expect("canvas dimensions are positive")
}

#[allow(clippy::too_many_arguments)]
fn stamp(canvas: &mut [f64], w: usize, h: usize, x: f64, y: f64, r: f64, bg: f64, dark: f64) {
    let x0 = (x - r - 1.0).floor().max(0.0) as usize;
    let y0 = (y - r - 1.0).floor().max(0.0) as usize;
    let x1 = ((x + r + 1.0).ceil() as usize).min(w.saturating_sub(1));
    let y1 = ((y + r + 1.0).ceil() as usize).min(h.saturating_sub(1));
    if x + r + 1.0 < 0.0 || y + r + 1.0 < 0.0 {
        return;
    }
    for py in y0..=y1 {
        for px in x0..=x1 {
            let d = ((px as f64 + 0.5 - x).powi(2) + (py as f64 + 0.5 - y).powi(2)).sqrt();
            let coverage = (r + 0.5 - d).clamp(0.0, 1.0);
            if coverage > 0.0 {
                let val = bg - coverage * (bg - dark);
                let cell = &mut canvas[py * w + px];
                if val < *cell {
                    *cell = val;
                }
            }
        }
    }
}

/// Render a single genuine sample of subject `subject` without touching
/// the filesystem. Handy for examples and tests.
pub fn render_subject_sample(params: &SynthParams, subject: usize, sample: u64) -> GrayImage {
    let mut rng = subject_rng(params.seed, subject);
    let style = Style::random(&mut rng, params);
    let mut srng = ChaCha8Rng::seed_from_u64(rng.random::<u64>() ^ sample);
    render_genuine(&style, params, &mut srng)
}
