//! Phase-space sweeps: where does mutual exclusivity win?
//!
//! A sweep evaluates `Delta` over a grid whose x axis is always `lambda` in
//! `[0, 1]` and whose y axis is one model parameter ([`YParam`]). Vertex-
//! capped sweeps take the link count or the bias exponent as y; counterpart-
//! capped sweeps sit on top of a power-law degree sequence and can vary the
//! target degree `mu_k`, the Zipf exponent `alpha`, the number of forms, or
//! the bias.
//!
//! Counterpart-capped cells are *masked* (recorded as `None`) when the
//! requested target degree exceeds the largest degree the sequence can
//! offer, `mu_k > (n-1)^{alpha/(phi+1)}`. Rendering distinguishes three
//! regimes: red for `Delta < 0` (mutual exclusivity cheaper), blue for
//! `Delta > 0`, gray for masked cells, lighter shades meaning larger
//! magnitude.
//!
//! [`boundary`] extracts the `Delta = 0` curve one row at a time from the
//! closed form's linearity in `lambda`, verifying every root by direct
//! evaluation; [`bisect`] is the fallback for root finding along the y
//! direction, where nothing is linear.

use rayon::prelude::*;

use crate::delta::{
    delta_counterpart_capped, delta_vertex_capped, CounterpartCappedInputs, LinearDelta,
    VertexCappedInputs,
};
use crate::error::{Error, Result};
use crate::fmt::g17;
use crate::zipf::{self, DegreeMode};

pub const DEFAULT_X_RES: usize = 201;
pub const DEFAULT_Y_RES: usize = 200;
/// Residual tolerance when a boundary root is re-checked by evaluation.
pub const BOUNDARY_TOLERANCE: f64 = 1e-8;

/// Which closed-form family the sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepClass {
    VertexCapped,
    CounterpartCapped,
}

/// The parameter on the y axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YParam {
    /// Link count `M` (vertex-capped).
    Links,
    /// Bias exponent `phi`.
    Phi,
    /// Target degree `mu_k` (counterpart-capped).
    MuK,
    /// Zipf exponent `alpha` (counterpart-capped).
    Alpha,
    /// Number of forms `n` (counterpart-capped, log-sampled integers).
    Forms,
}

impl YParam {
    /// Column tag used in CSV headers.
    pub fn tag(self) -> &'static str {
        match self {
            YParam::Links => "m",
            YParam::Phi => "phi",
            YParam::MuK => "mu_k",
            YParam::Alpha => "alpha",
            YParam::Forms => "n",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisScale {
    Linear,
    Log,
}

/// Full description of a sweep. The constructors fill in the defaults
/// (201 x 200 cells, linear y axis except for form counts); fields stay
/// public so callers can adjust resolutions before running.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub class: SweepClass,
    pub y_param: YParam,
    pub y_min: f64,
    pub y_max: f64,
    pub x_res: usize,
    pub y_res: usize,
    pub y_scale: AxisScale,
    /// Bias exponent, when not on the y axis.
    pub phi: Option<f64>,
    /// Link count for vertex-capped sweeps with `phi` on the y axis.
    pub links: Option<f64>,
    /// Target degree for counterpart-capped sweeps, when not on the y axis.
    pub mu_k: Option<f64>,
    /// Zipf exponent, when not on the y axis.
    pub alpha: Option<f64>,
    /// Number of forms, when not on the y axis.
    pub forms: Option<usize>,
    /// Degree rounding for the underlying sequences.
    pub mode: DegreeMode,
}

impl GridSpec {
    fn base(class: SweepClass, y_param: YParam, y_min: f64, y_max: f64) -> GridSpec {
        GridSpec {
            class,
            y_param,
            y_min,
            y_max,
            x_res: DEFAULT_X_RES,
            y_res: DEFAULT_Y_RES,
            y_scale: if y_param == YParam::Forms {
                AxisScale::Log
            } else {
                AxisScale::Linear
            },
            phi: None,
            links: None,
            mu_k: None,
            alpha: None,
            forms: None,
            mode: DegreeMode::Continuous,
        }
    }

    /// Vertex-capped, `M` on the y axis.
    pub fn vertex_links(phi: f64, m_min: f64, m_max: f64) -> GridSpec {
        let mut s = GridSpec::base(SweepClass::VertexCapped, YParam::Links, m_min, m_max);
        s.phi = Some(phi);
        s
    }

    /// Vertex-capped, `phi` on the y axis.
    pub fn vertex_phi(links: f64, phi_min: f64, phi_max: f64) -> GridSpec {
        let mut s = GridSpec::base(SweepClass::VertexCapped, YParam::Phi, phi_min, phi_max);
        s.links = Some(links);
        s
    }

    /// Counterpart-capped, `mu_k` on the y axis.
    pub fn counterpart_mu_k(phi: f64, n: usize, alpha: f64, mu_min: f64, mu_max: f64) -> GridSpec {
        let mut s = GridSpec::base(SweepClass::CounterpartCapped, YParam::MuK, mu_min, mu_max);
        s.phi = Some(phi);
        s.forms = Some(n);
        s.alpha = Some(alpha);
        s
    }

    /// Counterpart-capped, `alpha` on the y axis.
    pub fn counterpart_alpha(phi: f64, n: usize, mu_k: f64, a_min: f64, a_max: f64) -> GridSpec {
        let mut s = GridSpec::base(SweepClass::CounterpartCapped, YParam::Alpha, a_min, a_max);
        s.phi = Some(phi);
        s.forms = Some(n);
        s.mu_k = Some(mu_k);
        s
    }

    /// Counterpart-capped, number of forms on the y axis (log-sampled).
    pub fn counterpart_forms(
        phi: f64,
        alpha: f64,
        mu_k: f64,
        n_min: usize,
        n_max: usize,
    ) -> GridSpec {
        let mut s = GridSpec::base(
            SweepClass::CounterpartCapped,
            YParam::Forms,
            n_min as f64,
            n_max as f64,
        );
        s.phi = Some(phi);
        s.alpha = Some(alpha);
        s.mu_k = Some(mu_k);
        s
    }

    /// Counterpart-capped, `phi` on the y axis.
    pub fn counterpart_phi(n: usize, alpha: f64, mu_k: f64, phi_min: f64, phi_max: f64) -> GridSpec {
        let mut s = GridSpec::base(SweepClass::CounterpartCapped, YParam::Phi, phi_min, phi_max);
        s.forms = Some(n);
        s.alpha = Some(alpha);
        s.mu_k = Some(mu_k);
        s
    }

    fn require(&self, value: Option<f64>, what: &str) -> Result<f64> {
        value.ok_or_else(|| Error::grid(format!("{what} must be fixed for this sweep")))
    }

    fn require_forms(&self) -> Result<usize> {
        self.forms
            .ok_or_else(|| Error::grid("the number of forms must be fixed for this sweep"))
    }

    pub fn validate(&self) -> Result<()> {
        if self.x_res < 2 || self.y_res < 2 {
            return Err(Error::grid(format!(
                "grid needs at least 2 samples per axis, got {}x{}",
                self.x_res, self.y_res
            )));
        }
        if !self.y_min.is_finite() || !self.y_max.is_finite() || self.y_min >= self.y_max {
            return Err(Error::grid(format!(
                "y range [{}, {}] is not an increasing finite interval",
                self.y_min, self.y_max
            )));
        }
        if self.y_scale == AxisScale::Log && self.y_min <= 0.0 {
            return Err(Error::grid(
                "log-scaled y axis requires a positive lower bound".to_string(),
            ));
        }
        let check_min = |min: f64, what: &str| -> Result<()> {
            if self.y_min < min {
                return Err(Error::grid(format!(
                    "{what} axis must start at {min} or above, got {}",
                    self.y_min
                )));
            }
            Ok(())
        };
        match (self.class, self.y_param) {
            (SweepClass::VertexCapped, YParam::Links) => {
                check_min(1.0, "link count")?;
                self.require(self.phi, "phi")?;
            }
            (SweepClass::VertexCapped, YParam::Phi) => {
                check_min(0.0, "bias")?;
                let links = self.require(self.links, "the link count")?;
                if links < 1.0 {
                    return Err(Error::grid(format!("link count must be >= 1, got {links}")));
                }
            }
            (SweepClass::CounterpartCapped, YParam::MuK) => {
                check_min(1.0, "target degree")?;
                self.require(self.phi, "phi")?;
                self.require(self.alpha, "alpha")?;
                self.require_forms()?;
            }
            (SweepClass::CounterpartCapped, YParam::Alpha) => {
                check_min(0.0, "alpha")?;
                self.require(self.phi, "phi")?;
                self.require(self.mu_k, "mu_k")?;
                self.require_forms()?;
            }
            (SweepClass::CounterpartCapped, YParam::Forms) => {
                check_min(2.0, "form count")?;
                self.require(self.phi, "phi")?;
                self.require(self.mu_k, "mu_k")?;
                self.require(self.alpha, "alpha")?;
            }
            (SweepClass::CounterpartCapped, YParam::Phi) => {
                check_min(0.0, "bias")?;
                self.require(self.mu_k, "mu_k")?;
                self.require(self.alpha, "alpha")?;
                self.require_forms()?;
            }
            (class, y) => {
                return Err(Error::grid(format!(
                    "{y:?} is not a valid y axis for {class:?} sweeps"
                )));
            }
        }
        for (v, lo, what) in [
            (self.phi, 0.0, "phi"),
            (self.links, 1.0, "link count"),
            (self.mu_k, 1.0, "mu_k"),
            (self.alpha, 0.0, "alpha"),
        ] {
            if let Some(v) = v {
                if !v.is_finite() || v < lo {
                    return Err(Error::grid(format!("{what} must be finite and >= {lo}, got {v}")));
                }
            }
        }
        if let Some(n) = self.forms {
            if n < 2 {
                return Err(Error::grid(format!("form count must be >= 2, got {n}")));
            }
        }
        Ok(())
    }

    /// The y-axis sample values, ascending. Form counts are rounded to
    /// integers (duplicates kept, so the row count stays `y_res`).
    pub fn y_axis(&self) -> Vec<f64> {
        let raw = match self.y_scale {
            AxisScale::Linear => linspace(self.y_min, self.y_max, self.y_res),
            AxisScale::Log => linspace(self.y_min.ln(), self.y_max.ln(), self.y_res)
                .into_iter()
                .map(f64::exp)
                .collect(),
        };
        if self.y_param == YParam::Forms {
            raw.into_iter().map(|v| v.round().max(2.0)).collect()
        } else {
            raw
        }
    }

    /// The lambda samples: `x_res` points spanning `[0, 1]`.
    pub fn x_axis(&self) -> Vec<f64> {
        linspace(0.0, 1.0, self.x_res)
    }
}

fn linspace(a: f64, b: f64, k: usize) -> Vec<f64> {
    let step = (b - a) / (k - 1) as f64;
    (0..k)
        .map(|t| if t == k - 1 { b } else { a + step * t as f64 })
        .collect()
}

/// One resolved grid row: everything needed to evaluate `Delta(lambda)`.
enum Row {
    Vertex {
        phi: f64,
        links: f64,
    },
    Counterpart {
        phi: f64,
        mu_k: f64,
        x_sr: f64,
        m_phi: f64,
    },
    Masked,
}

fn resolve_row(spec: &GridSpec, y: f64) -> Result<Row> {
    match spec.class {
        SweepClass::VertexCapped => {
            let (phi, links) = match spec.y_param {
                YParam::Links => (spec.require(spec.phi, "phi")?, y),
                YParam::Phi => (y, spec.require(spec.links, "the link count")?),
                _ => unreachable!("validated"),
            };
            Ok(Row::Vertex { phi, links })
        }
        SweepClass::CounterpartCapped => {
            let phi = match spec.y_param {
                YParam::Phi => y,
                _ => spec.require(spec.phi, "phi")?,
            };
            let alpha = match spec.y_param {
                YParam::Alpha => y,
                _ => spec.require(spec.alpha, "alpha")?,
            };
            let n = match spec.y_param {
                YParam::Forms => y as usize,
                _ => spec.require_forms()?,
            };
            let mu_k = match spec.y_param {
                YParam::MuK => y,
                _ => spec.require(spec.mu_k, "mu_k")?,
            };
            if mu_k > zipf::degree_cap(n, alpha, phi) {
                return Ok(Row::Masked);
            }
            let seq = zipf::generate(n, alpha, phi, spec.mode)?;
            let (x_sr, m_phi) = seq.sufficient_stats();
            Ok(Row::Counterpart {
                phi,
                mu_k,
                x_sr,
                m_phi,
            })
        }
    }
}

fn row_cells(spec: &GridSpec, y: f64, xs: &[f64]) -> Result<Vec<Option<f64>>> {
    match resolve_row(spec, y)? {
        Row::Masked => Ok(vec![None; xs.len()]),
        Row::Vertex { phi, links } => Ok(xs
            .iter()
            .map(|&lambda| {
                Some(delta_vertex_capped(VertexCappedInputs { lambda, phi, links }).0)
            })
            .collect()),
        Row::Counterpart {
            phi,
            mu_k,
            x_sr,
            m_phi,
        } => xs
            .iter()
            .map(|&lambda| {
                delta_counterpart_capped(CounterpartCappedInputs {
                    lambda,
                    phi,
                    mu_k,
                    x_sr,
                    m_phi,
                })
                .map(|(v, _)| Some(v))
            })
            .collect(),
    }
}

fn row_linear(spec: &GridSpec, y: f64) -> Result<Option<(LinearDelta<f64>, RowEval)>> {
    match resolve_row(spec, y)? {
        Row::Masked => Ok(None),
        Row::Vertex { phi, links } => {
            let (_, lin) = delta_vertex_capped(VertexCappedInputs {
                lambda: 0.0,
                phi,
                links,
            });
            Ok(Some((lin, RowEval::Vertex { phi, links })))
        }
        Row::Counterpart {
            phi,
            mu_k,
            x_sr,
            m_phi,
        } => {
            let (_, lin) = delta_counterpart_capped(CounterpartCappedInputs {
                lambda: 0.0,
                phi,
                mu_k,
                x_sr,
                m_phi,
            })?;
            Ok(Some((
                lin,
                RowEval::Counterpart {
                    phi,
                    mu_k,
                    x_sr,
                    m_phi,
                },
            )))
        }
    }
}

/// Re-evaluation handle for verifying roots independently of the linear
/// coefficients.
enum RowEval {
    Vertex { phi: f64, links: f64 },
    Counterpart { phi: f64, mu_k: f64, x_sr: f64, m_phi: f64 },
}

impl RowEval {
    fn eval(&self, lambda: f64) -> f64 {
        match *self {
            RowEval::Vertex { phi, links } => {
                delta_vertex_capped(VertexCappedInputs { lambda, phi, links }).0
            }
            RowEval::Counterpart {
                phi,
                mu_k,
                x_sr,
                m_phi,
            } => {
                delta_counterpart_capped(CounterpartCappedInputs {
                    lambda,
                    phi,
                    mu_k,
                    x_sr,
                    m_phi,
                })
                .expect("row already evaluated once")
                .0
            }
        }
    }
}

/// A completed sweep. `cells` is row-major with the y index outermost:
/// `cells[yi * xs.len() + xi]`, `ys[0]` being the smallest y value. `None`
/// marks masked (infeasible) cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    pub class: SweepClass,
    pub y_param: YParam,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub cells: Vec<Option<f64>>,
    /// True when every cell is masked; callers should warn on this.
    pub fully_masked: bool,
}

/// Evaluate the grid, rows in parallel.
pub fn sweep(spec: &GridSpec) -> Result<Heatmap> {
    spec.validate()?;
    let xs = spec.x_axis();
    let ys = spec.y_axis();
    let rows: Vec<Vec<Option<f64>>> = ys
        .par_iter()
        .map(|&y| row_cells(spec, y, &xs))
        .collect::<Result<_>>()?;
    let mut cells = Vec::with_capacity(xs.len() * ys.len());
    for row in rows {
        cells.extend(row);
    }
    let fully_masked = cells.iter().all(Option::is_none);
    Ok(Heatmap {
        class: spec.class,
        y_param: spec.y_param,
        xs,
        ys,
        cells,
        fully_masked,
    })
}

impl Heatmap {
    pub fn width(&self) -> usize {
        self.xs.len()
    }

    pub fn height(&self) -> usize {
        self.ys.len()
    }

    pub fn get(&self, xi: usize, yi: usize) -> Option<f64> {
        self.cells[yi * self.xs.len() + xi]
    }

    /// CSV rendering: `x_lambda,y_<tag>,delta,feasible` with one line per
    /// cell, y-outer. Masked cells leave the delta field empty.
    pub fn to_csv(&self) -> String {
        let mut out = format!("x_lambda,y_{},delta,feasible\n", self.y_param.tag());
        for (yi, &y) in self.ys.iter().enumerate() {
            for (xi, &x) in self.xs.iter().enumerate() {
                let cell = self.cells[yi * self.xs.len() + xi];
                out.push_str(&g17(x));
                out.push(',');
                out.push_str(&g17(y));
                out.push(',');
                match cell {
                    Some(v) => out.push_str(&g17(v)),
                    None => {}
                }
                out.push(',');
                out.push_str(if cell.is_some() { "true" } else { "false" });
                out.push('\n');
            }
        }
        out
    }

    /// Binary PPM (P6) rendering. Pixel row 0 is the smallest y. Red for
    /// negative cells, blue for positive, lighter meaning larger magnitude;
    /// exact zeros are white and masked cells gray.
    pub fn to_ppm(&self) -> Vec<u8> {
        let w = self.width();
        let h = self.height();
        let mut out = format!("P6\n{w} {h}\n255\n").into_bytes();
        let scale = self
            .cells
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, v| acc.max(v.abs()));
        let scale = if scale > 0.0 { scale } else { 1.0 };
        for cell in &self.cells {
            out.extend_from_slice(&pixel(*cell, scale));
        }
        out
    }

    /// Number of 4-connected components of cells with `Delta > 0`.
    pub fn positive_regions(&self) -> usize {
        let w = self.width();
        let h = self.height();
        let positive =
            |xi: usize, yi: usize| matches!(self.cells[yi * w + xi], Some(v) if v > 0.0);
        let mut seen = vec![false; w * h];
        let mut regions = 0;
        let mut queue = Vec::new();
        for yi in 0..h {
            for xi in 0..w {
                if seen[yi * w + xi] || !positive(xi, yi) {
                    continue;
                }
                regions += 1;
                seen[yi * w + xi] = true;
                queue.push((xi, yi));
                while let Some((cx, cy)) = queue.pop() {
                    let mut visit = |nx: usize, ny: usize| {
                        if !seen[ny * w + nx] && positive(nx, ny) {
                            seen[ny * w + nx] = true;
                            queue.push((nx, ny));
                        }
                    };
                    if cx > 0 {
                        visit(cx - 1, cy);
                    }
                    if cx + 1 < w {
                        visit(cx + 1, cy);
                    }
                    if cy > 0 {
                        visit(cx, cy - 1);
                    }
                    if cy + 1 < h {
                        visit(cx, cy + 1);
                    }
                }
            }
        }
        regions
    }

    /// Number of unmasked cells with `Delta > 0`.
    pub fn positive_cells(&self) -> usize {
        self.cells
            .iter()
            .filter(|c| matches!(c, Some(v) if *v > 0.0))
            .count()
    }
}

fn pixel(v: Option<f64>, scale: f64) -> [u8; 3] {
    match v {
        None => [128, 128, 128],
        Some(v) if v == 0.0 => [255, 255, 255],
        Some(v) => {
            let t = (v.abs() / scale).min(1.0);
            let g = (55.0 + 180.0 * t).round() as u8;
            if v < 0.0 {
                [255, g, g]
            } else {
                [g, g, 255]
            }
        }
    }
}

/// The `Delta = 0` curve of a sweep: one `(lambda*, y)` point for each row
/// whose sign change lies inside `[0, 1]`. Rows that cannot contribute are
/// listed in `skipped` with a reason.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pub y_param: YParam,
    pub points: Vec<(f64, f64)>,
    pub skipped: Vec<(f64, String)>,
}

impl BoundaryCurve {
    pub fn to_csv(&self) -> String {
        let mut out = format!("x_lambda,y_{}\n", self.y_param.tag());
        for &(x, y) in &self.points {
            out.push_str(&g17(x));
            out.push(',');
            out.push_str(&g17(y));
            out.push('\n');
        }
        out
    }
}

/// Extract the boundary curve row by row from the linear form, verifying
/// each root by direct evaluation at [`BOUNDARY_TOLERANCE`].
pub fn boundary(spec: &GridSpec) -> Result<BoundaryCurve> {
    spec.validate()?;
    let ys = spec.y_axis();
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    for &y in &ys {
        match row_linear(spec, y)? {
            None => skipped.push((y, "infeasible: mu_k exceeds the degree cap".to_string())),
            Some((lin, eval)) => {
                if lin.slope == 0.0 && lin.intercept == 0.0 {
                    skipped.push((y, "delta is identically zero on this row".to_string()));
                    continue;
                }
                if let Some(r) = lin.root_in_unit() {
                    let residual = eval.eval(r);
                    if residual.abs() < BOUNDARY_TOLERANCE {
                        points.push((r, y));
                    } else {
                        skipped.push((
                            y,
                            format!("root {r} failed verification, residual {residual:e}"),
                        ));
                    }
                }
            }
        }
    }
    Ok(BoundaryCurve {
        y_param: spec.y_param,
        points,
        skipped,
    })
}

/// Bisection root finder for the y direction, where `Delta` is not linear.
/// Requires a sign change over `[lo, hi]`; returns the midpoint of the
/// final bracket.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> Option<f64> {
    let flo = f(lo);
    if flo == 0.0 {
        return Some(lo);
    }
    let fhi = f(hi);
    if fhi == 0.0 {
        return Some(hi);
    }
    if (flo > 0.0) == (fhi > 0.0) {
        return None;
    }
    for _ in 0..max_iter {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
