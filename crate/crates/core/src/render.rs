//! Orbit classification and the escape/cycle raster renderer.

use crate::combinatorics::{cycle_decomposition, gamma_power, CycleDecomposition};
use crate::dynamics::{apply_f, COORD_GUARD};
use crate::error::Error;
use crate::geometry::{in_i_pair, sector_pair, SectorPair};
use crate::limits::estimate_h;
use crate::params::Params;
use crate::point::ComplexPair;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Series tolerance used for the per-pixel limit-direction estimate.
const CLASSIFY_H_TOL: f64 = 1e-12;

/// Tiles are square blocks of this many pixels per side.
const TILE: u32 = 64;

/// How raster coordinates map into C^2.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub enum SliceMode {
    /// (u, v) -> (u + i v, w) with the second coordinate pinned.
    ZPlane { w: Complex64 },
    /// (u, v) -> (u, v) over the real points of C^2.
    RealPlane,
    /// (u, v) -> base + (u + i v) dir, a complex line through base.
    Line { base: ComplexPair, dir: ComplexPair },
}

/// A rectangular window onto a two-real-dimensional slice of C^2. The
/// window spans `extent` horizontally around `center`; the vertical span
/// is scaled by height/width so pixels are square.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SliceSpec {
    pub mode: SliceMode,
    pub center: Complex64,
    pub extent: f64,
    pub width: u32,
    pub height: u32,
}

impl SliceSpec {
    fn validate(&self) -> Result<(), Error> {
        if !(self.extent > 0.0 && self.extent.is_finite()) {
            return Err(Error::Param(format!("extent {} must be positive and finite", self.extent)));
        }
        if !self.center.is_finite() {
            return Err(Error::Param("slice center must be finite".into()));
        }
        if self.width == 0 || self.height == 0 || self.width > 1 << 14 || self.height > 1 << 14 {
            return Err(Error::Param(format!(
                "raster size {}x{} out of range",
                self.width, self.height
            )));
        }
        match self.mode {
            SliceMode::ZPlane { w } if !w.is_finite() => {
                Err(Error::Param("pinned second coordinate must be finite".into()))
            }
            SliceMode::Line { base, dir } => {
                if !base.is_finite() || !dir.is_finite() {
                    Err(Error::Param("line base and direction must be finite".into()))
                } else if dir.z.norm_sqr() == 0.0 && dir.w.norm_sqr() == 0.0 {
                    Err(Error::Param("line direction must be nonzero".into()))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Center of pixel (ix, iy); the top row has the largest v.
    pub fn point_at(&self, ix: u32, iy: u32) -> ComplexPair {
        let ex = self.extent;
        let ey = self.extent * self.height as f64 / self.width as f64;
        let u = self.center.re + ex * ((ix as f64 + 0.5) / self.width as f64 - 0.5);
        let v = self.center.im + ey * (0.5 - (iy as f64 + 0.5) / self.height as f64);
        match self.mode {
            SliceMode::ZPlane { w } => ComplexPair::new(Complex64::new(u, v), w),
            SliceMode::RealPlane => ComplexPair::from_re(u, v),
            SliceMode::Line { base, dir } => {
                let t = Complex64::new(u, v);
                ComplexPair::new(base.z + t * dir.z, base.w + t * dir.w)
            }
        }
    }
}

/// What an orbit resolved to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassKind {
    /// Sector pairs locked onto a walk cycle while both coordinates stayed
    /// absorbed, for two full periods.
    Cycle { representative: SectorPair, period: usize },
    /// Budget exhausted with some sector pair seen along the way.
    Unresolved,
    /// Coordinates left binary64 range (or the 1e300 guard) before the
    /// cycle test concluded.
    OverflowEscape,
    /// Budget exhausted without both coordinates ever sitting in sectors
    /// simultaneously.
    NonSector,
}

impl ClassKind {
    /// Stable text label, used in metadata and CLI output.
    pub fn label(&self) -> String {
        match self {
            ClassKind::Cycle { representative, period } => {
                format!("cycle-{representative}-period-{period}")
            }
            ClassKind::Unresolved => "unresolved".into(),
            ClassKind::OverflowEscape => "overflow-escape".into(),
            ClassKind::NonSector => "non-sector".into(),
        }
    }
}

/// Classification of one starting point.
#[derive(Clone, Copy, Debug)]
pub struct Classification {
    pub kind: ClassKind,
    /// Iterations consumed up to the decision.
    pub iterations_used: usize,
    /// Direction of the even-ratio limit at the first absorbed point of
    /// the confirming run, when the estimate succeeds.
    pub h1_arg: Option<f64>,
}

/// Shared state for classifying many points under one parameter set.
pub struct ClassifyContext {
    params: Params,
    decomposition: CycleDecomposition,
    budget: usize,
    c_abs: f64,
}

impl ClassifyContext {
    pub fn new(params: Params, budget: usize, c_abs: f64) -> Result<Self, Error> {
        if budget == 0 {
            return Err(Error::Param("iteration budget must be positive".into()));
        }
        if !(c_abs >= 1.0 && c_abs.is_finite()) {
            return Err(Error::Param(format!("absorbing radius {c_abs} must be >= 1")));
        }
        Ok(ClassifyContext {
            params,
            decomposition: cycle_decomposition(params.m()),
            budget,
            c_abs,
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn decomposition(&self) -> &CycleDecomposition {
        &self.decomposition
    }

    /// Track the orbit until its sector pairs follow one walk cycle for two
    /// full periods while both coordinates stay absorbed, or until the
    /// budget or binary64 range runs out.
    pub fn classify(&self, pt: ComplexPair) -> Classification {
        let m = self.params.m();
        let mut points = Vec::with_capacity(self.budget + 1);
        points.push(pt);
        let mut any_sector = false;
        let mut run_start: Option<(usize, SectorPair)> = None;
        let mut cur = pt;
        for n in 0..=self.budget {
            let pair = if cur.is_finite() { sector_pair(&cur, m) } else { None };
            if pair.is_some() {
                any_sector = true;
            }
            match pair {
                Some(q) if in_i_pair(&cur, m, self.c_abs) => match run_start {
                    Some((s, first)) if gamma_power(first, (n - s) as u32, m) == q => {}
                    _ => run_start = Some((n, q)),
                },
                _ => run_start = None,
            }
            if let Some((s, first)) = run_start {
                // first is already in some cycle: pairs are only produced
                // by sector_pair with both indices below m.
                let cycle = self.decomposition.cycle_of(first).expect("pair in range");
                if n - s >= 2 * cycle.period() {
                    let h1_arg = estimate_h(points[s], &self.params, CLASSIFY_H_TOL)
                        .ok()
                        .and_then(|e| e.h1.arg());
                    return Classification {
                        kind: ClassKind::Cycle {
                            representative: cycle.representative(),
                            period: cycle.period(),
                        },
                        iterations_used: n,
                        h1_arg,
                    };
                }
            }
            if n == self.budget {
                break;
            }
            match apply_f(cur, &self.params) {
                Ok(step) if step.point.norm_max() <= COORD_GUARD => {
                    cur = step.point;
                    points.push(cur);
                }
                _ => {
                    return Classification {
                        kind: ClassKind::OverflowEscape,
                        iterations_used: n,
                        h1_arg: None,
                    };
                }
            }
        }
        Classification {
            kind: if any_sector { ClassKind::Unresolved } else { ClassKind::NonSector },
            iterations_used: self.budget,
            h1_arg: None,
        }
    }
}

/// One-off classification of a single point.
pub fn classify(
    pt: ComplexPair,
    p: &Params,
    budget: usize,
    c_abs: f64,
) -> Result<Classification, Error> {
    Ok(ClassifyContext::new(*p, budget, c_abs)?.classify(pt))
}

fn hsv_to_rgb(h: f64, s: f64, v: f64) -> [u8; 3] {
    let h = h.rem_euclid(360.0);
    let c = v * s;
    let x = c * (1.0 - ((h / 60.0) % 2.0 - 1.0).abs());
    let (r, g, b) = match (h / 60.0) as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let base = v - c;
    let to_byte = |t: f64| ((t + base) * 255.0).round().clamp(0.0, 255.0) as u8;
    [to_byte(r), to_byte(g), to_byte(b)]
}

/// Pixel color for a classification: cycles get one hue each (by cycle
/// index), shaded by the limit direction; the other classes are fixed
/// grays.
pub fn color_for(
    class: &Classification,
    decomposition: &CycleDecomposition,
) -> [u8; 3] {
    match class.kind {
        ClassKind::Cycle { representative, .. } => {
            let idx = decomposition
                .cycle_index_of(representative)
                .unwrap_or(0);
            let total = decomposition.cycles().len().max(1);
            let hue = 360.0 * idx as f64 / total as f64;
            let t = class
                .h1_arg
                .map(|a| (a + std::f64::consts::PI) / std::f64::consts::TAU)
                .unwrap_or(0.5);
            hsv_to_rgb(hue, 0.9, 0.55 + 0.45 * t.clamp(0.0, 1.0))
        }
        ClassKind::Unresolved => [64, 64, 64],
        ClassKind::OverflowEscape => [0, 0, 0],
        ClassKind::NonSector => [255, 255, 255],
    }
}

/// A rendered classification raster.
#[derive(Clone, Debug)]
pub struct Raster {
    width: u32,
    height: u32,
    pixels: Vec<[u8; 3]>,
    class_counts: Vec<(ClassKind, u64)>,
}

impl Raster {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixel(&self, ix: u32, iy: u32) -> [u8; 3] {
        self.pixels[(iy * self.width + ix) as usize]
    }

    /// Row-major RGB bytes.
    pub fn rgb_bytes(&self) -> Vec<u8> {
        self.pixels.iter().flatten().copied().collect()
    }

    /// Pixel tallies per class: cycles first (by representative), then
    /// unresolved, overflow-escape, non-sector.
    pub fn class_counts(&self) -> &[(ClassKind, u64)] {
        &self.class_counts
    }
}

struct TileOut {
    index: usize,
    pixels: Vec<[u8; 3]>,
    counts: HashMap<ClassKind, u64>,
}

/// Render a slice by classifying every pixel center. The output is
/// byte-identical for any worker count: tiles are classified independently
/// and merged in a fixed order.
pub fn render(
    slice: &SliceSpec,
    p: &Params,
    budget: usize,
    c_abs: f64,
    threads: usize,
) -> Result<Raster, Error> {
    slice.validate()?;
    let ctx = ClassifyContext::new(*p, budget, c_abs)?;
    let tiles_x = slice.width.div_ceil(TILE);
    let tiles_y = slice.height.div_ceil(TILE);
    let tile_count = (tiles_x * tiles_y) as usize;
    let workers = threads.clamp(1, tile_count.max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<TileOut>>> = Mutex::new((0..tile_count).map(|_| None).collect());

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let index = next.fetch_add(1, Ordering::Relaxed);
                if index >= tile_count {
                    break;
                }
                let tx = index as u32 % tiles_x;
                let ty = index as u32 / tiles_x;
                let x0 = tx * TILE;
                let y0 = ty * TILE;
                let x1 = (x0 + TILE).min(slice.width);
                let y1 = (y0 + TILE).min(slice.height);
                let mut pixels = Vec::with_capacity(((x1 - x0) * (y1 - y0)) as usize);
                let mut counts: HashMap<ClassKind, u64> = HashMap::new();
                for iy in y0..y1 {
                    for ix in x0..x1 {
                        let class = ctx.classify(slice.point_at(ix, iy));
                        *counts.entry(class.kind).or_insert(0) += 1;
                        pixels.push(color_for(&class, &ctx.decomposition));
                    }
                }
                slots.lock().unwrap()[index] = Some(TileOut { index, pixels, counts });
            });
        }
    });

    let mut raster = vec![[0u8; 3]; (slice.width * slice.height) as usize];
    let mut merged: HashMap<ClassKind, u64> = HashMap::new();
    for slot in slots.into_inner().unwrap() {
        let tile = slot.expect("every tile rendered");
        let tx = tile.index as u32 % tiles_x;
        let ty = tile.index as u32 / tiles_x;
        let x0 = tx * TILE;
        let y0 = ty * TILE;
        let x1 = (x0 + TILE).min(slice.width);
        let tile_w = (x1 - x0) as usize;
        for (row, chunk) in tile.pixels.chunks(tile_w).enumerate() {
            let gy = y0 as usize + row;
            let start = gy * slice.width as usize + x0 as usize;
            raster[start..start + tile_w].copy_from_slice(chunk);
        }
        for (kind, c) in tile.counts {
            *merged.entry(kind).or_insert(0) += c;
        }
    }
    let mut class_counts: Vec<(ClassKind, u64)> = merged.into_iter().collect();
    class_counts.sort_by_key(|(kind, _)| match *kind {
        ClassKind::Cycle { representative, .. } => (0u8, representative.b, representative.a),
        ClassKind::Unresolved => (1, 0, 0),
        ClassKind::OverflowEscape => (2, 0, 0),
        ClassKind::NonSector => (3, 0, 0),
    });
    Ok(Raster { width: slice.width, height: slice.height, pixels: raster, class_counts })
}

/// Binary PPM (P6) encoding.
pub fn encode_ppm(raster: &Raster) -> Vec<u8> {
    let mut out = Vec::with_capacity(20 + raster.pixels.len() * 3);
    let _ = write!(out, "P6\n{} {}\n255\n", raster.width, raster.height);
    out.extend(raster.rgb_bytes());
    out
}

pub fn write_ppm(path: &Path, raster: &Raster) -> Result<(), Error> {
    std::fs::write(path, encode_ppm(raster))?;
    Ok(())
}

pub fn write_png(path: &Path, raster: &Raster) -> Result<(), Error> {
    let img = image::RgbImage::from_raw(raster.width, raster.height, raster.rgb_bytes())
        .expect("raster buffer matches dimensions");
    img.save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    Ok(())
}

/// Sidecar description of a render, written next to the image.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RenderMetadata {
    pub slice: SliceSpec,
    pub m: u32,
    pub delta: f64,
    pub c_abs: f64,
    pub budget: usize,
    /// Label -> pixel count, in class order.
    pub class_counts: Vec<(String, u64)>,
}

impl RenderMetadata {
    pub fn new(
        slice: &SliceSpec,
        p: &Params,
        budget: usize,
        c_abs: f64,
        raster: &Raster,
    ) -> Self {
        RenderMetadata {
            slice: *slice,
            m: p.m(),
            delta: p.delta(),
            c_abs,
            budget,
            class_counts: raster
                .class_counts()
                .iter()
                .map(|(kind, c)| (kind.label(), *c))
                .collect(),
        }
    }

    /// Path of the sidecar for an image at `path`: the same name with
    /// ".json" appended.
    pub fn sidecar_path(path: &Path) -> PathBuf {
        let mut os = path.as_os_str().to_owned();
        os.push(".json");
        PathBuf::from(os)
    }

    pub fn write(&self, image_path: &Path) -> Result<(), Error> {
        let body = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
        std::fs::write(Self::sidecar_path(image_path), body)?;
        Ok(())
    }
}
