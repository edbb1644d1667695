//! Parameter sweeps, figure presets, and scalar minimization of g²(0).
//!
//! A [`SweepSpec`] names one or two axes over the physical parameters,
//! [`run_sweep`] evaluates the observables on the grid (in parallel, with a
//! deterministic row-major gather so the worker count never changes the
//! output), and [`to_csv`] renders the rows with full-precision floats so
//! two runs of the same spec are bit-identical.
//!
//! [`figure_preset`] returns the frozen parameter sets of the twelve named
//! panels `fig2a` … `fig7b` (the b-panels of figures 2, 6 and 7 plot a
//! different observable from the same grid as their a-panel, so those pairs
//! share one spec).
//!
//! [`minimize_g2`] locates antibunching optima: a coarse grid scan (≥ 64
//! points) brackets the global minimum of the multi-modal g²(0) landscape,
//! then golden-section refinement narrows the bracket below the requested
//! tolerance. [`find_dips`] lists all strict local minima of a 1D sweep,
//! deepest first.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::model::SystemParams;
use crate::solver::{converged_g2, observables};
use crate::weakdrive::observables_weakdrive;
use crate::Error;

const PI: f64 = std::f64::consts::PI;

/// Parameters a sweep axis or the optimizer may vary. `Delta` moves both
/// detunings together and `E` both drive amplitudes, matching how the
/// operating points are explored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    Delta,
    G,
    J,
    Theta,
    E,
    #[serde(rename = "e_a")]
    EA,
    #[serde(rename = "e_b")]
    EB,
}

impl SweepParam {
    /// Serialized / CSV-header name.
    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::Delta => "delta",
            SweepParam::G => "g",
            SweepParam::J => "j",
            SweepParam::Theta => "theta",
            SweepParam::E => "e",
            SweepParam::EA => "e_a",
            SweepParam::EB => "e_b",
        }
    }
}

impl std::str::FromStr for SweepParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "delta" => SweepParam::Delta,
            "g" => SweepParam::G,
            "j" => SweepParam::J,
            "theta" => SweepParam::Theta,
            "e" => SweepParam::E,
            "e_a" => SweepParam::EA,
            "e_b" => SweepParam::EB,
            other => {
                return Err(Error::SpecError(format!(
                    "unknown sweep parameter '{other}' (expected delta, g, j, theta, e, e_a or e_b)"
                )))
            }
        })
    }
}

/// One sweep axis: `points` evenly spaced values from `from` to `to`
/// inclusive. A collapsed axis (`from == to`) repeats one value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub param: SweepParam,
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl Axis {
    fn grid(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                // pin the final point so both endpoints are hit exactly
                if i == n - 1 {
                    self.to
                } else {
                    self.from + (self.to - self.from) * (i as f64) / ((n - 1) as f64)
                }
            })
            .collect()
    }
}

/// Which solver evaluates the grid points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Master-equation steady state.
    Full,
    /// Two-excitation amplitude hierarchy.
    Weakdrive,
}

/// A sweep request: base parameters, one or two axes, the engine, and the
/// truncation policy (`convergence_tol` = 0 evaluates at the base cutoffs;
/// a positive value runs the cutoff ladder of
/// [`converged_g2`] at every point).
///
/// Unknown keys in a serialized spec are rejected so typos in hand-written
/// sweep files fail loudly instead of silently using defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub base: SystemParams,
    pub axes: Vec<Axis>,
    pub engine: Engine,
    #[serde(default)]
    pub convergence_tol: f64,
}

impl SweepSpec {
    fn validate(&self) -> Result<(), Error> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::SpecError(format!(
                "need 1 or 2 axes, got {}",
                self.axes.len()
            )));
        }
        for ax in &self.axes {
            if ax.points < 2 {
                return Err(Error::SpecError(format!(
                    "axis {} needs at least 2 points, got {}",
                    ax.param.name(),
                    ax.points
                )));
            }
            if !(ax.from <= ax.to) {
                return Err(Error::SpecError(format!(
                    "axis {}: from = {} must be <= to = {}",
                    ax.param.name(),
                    ax.from,
                    ax.to
                )));
            }
        }
        if !(self.convergence_tol >= 0.0 && self.convergence_tol <= 0.1) {
            return Err(Error::SpecError(format!(
                "convergence_tol = {} must be 0 (fixed cutoff) or in (0, 0.1]",
                self.convergence_tol
            )));
        }
        self.base.validated()?;
        Ok(())
    }
}

/// One grid point of a sweep. Failed points carry NaN observables and
/// `converged = false`; they never abort the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// Axis values in spec order (slow axis first).
    pub axis_values: Vec<f64>,
    pub g2: f64,
    pub n_a: f64,
    pub n_b: f64,
    pub p_e: f64,
    pub converged: bool,
}

/// Provenance of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub base: SystemParams,
    pub axes: Vec<Axis>,
    pub engine: Engine,
    pub convergence_tol: f64,
    /// Unix seconds at evaluation time (kept out of the CSV so results stay
    /// bit-identical across runs).
    pub timestamp: u64,
    pub code_version: String,
}

/// Grid results in row-major axis order plus metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub metadata: SweepMetadata,
}

/// Set one swept parameter on a copy of `base`.
pub fn apply_axis(mut p: SystemParams, param: SweepParam, value: f64) -> SystemParams {
    match param {
        SweepParam::Delta => {
            p.delta_a = value;
            p.delta_b = value;
        }
        SweepParam::G => p.g = value,
        SweepParam::J => p.j = value,
        SweepParam::Theta => p.theta = value,
        SweepParam::E => {
            p.e_a = value;
            p.e_b = value;
        }
        SweepParam::EA => p.e_a = value,
        SweepParam::EB => p.e_b = value,
    }
    p
}

fn eval_point(spec: &SweepSpec, axis_values: &[f64]) -> SweepRow {
    let mut p = spec.base;
    for (ax, &v) in spec.axes.iter().zip(axis_values) {
        p = apply_axis(p, ax.param, v);
    }
    let report = match spec.engine {
        Engine::Full => {
            if spec.convergence_tol > 0.0 {
                converged_g2(&p, spec.convergence_tol)
            } else {
                observables(&p)
            }
        }
        Engine::Weakdrive => observables_weakdrive(&p),
    };
    match report {
        Ok(r) => SweepRow {
            axis_values: axis_values.to_vec(),
            g2: r.g2_a,
            n_a: r.n_a,
            n_b: r.n_b,
            p_e: r.p_e,
            converged: r.converged,
        },
        Err(_) => SweepRow {
            axis_values: axis_values.to_vec(),
            g2: f64::NAN,
            n_a: f64::NAN,
            n_b: f64::NAN,
            p_e: f64::NAN,
            converged: false,
        },
    }
}

/// Evaluate the grid. Points are independent and computed in parallel on the
/// current rayon pool; rows are gathered back into row-major order (slow
/// axis = first axis), so results are identical for any worker count.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult, Error> {
    spec.validate()?;
    let grids: Vec<Vec<f64>> = spec.axes.iter().map(|a| a.grid()).collect();
    let points: Vec<Vec<f64>> = match grids.len() {
        1 => grids[0].iter().map(|&x| vec![x]).collect(),
        _ => {
            let mut pts = Vec::with_capacity(grids[0].len() * grids[1].len());
            for &x in &grids[0] {
                for &y in &grids[1] {
                    pts.push(vec![x, y]);
                }
            }
            pts
        }
    };
    let rows: Vec<SweepRow> = points
        .par_iter()
        .map(|vals| eval_point(spec, vals))
        .collect();
    let timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(SweepResult {
        rows,
        metadata: SweepMetadata {
            base: spec.base,
            axes: spec.axes.clone(),
            engine: spec.engine,
            convergence_tol: spec.convergence_tol,
            timestamp,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
        },
    })
}

/// Render a sweep as CSV: a header naming the axes and observables, then
/// one full-precision scientific row per grid point.
pub fn to_csv(result: &SweepResult) -> String {
    let mut out = String::new();
    for ax in &result.metadata.axes {
        out.push_str(ax.param.name());
        out.push(',');
    }
    out.push_str("g2,n_a,n_b,p_e,converged\n");
    for row in &result.rows {
        for v in &row.axis_values {
            out.push_str(&format!("{v:.17e},"));
        }
        out.push_str(&format!(
            "{:.17e},{:.17e},{:.17e},{:.17e},{}\n",
            row.g2, row.n_a, row.n_b, row.p_e, row.converged
        ));
    }
    out
}

/// All figure-preset names, in paper order.
pub fn figure_names() -> [&'static str; 12] {
    [
        "fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b", "fig6a", "fig6b",
        "fig7a", "fig7b",
    ]
}

/// The frozen sweep behind a named figure panel.
///
/// Single-drive panels (figures 2 and 3) drive cavity a only with
/// E_a = 0.0625κ; double-drive panels (figures 4–7) drive both cavities
/// equally. 1D panels use cutoff 6, the 2D heatmaps cutoff 4, and the
/// strong-drive figure 7 cutoff 8.
pub fn figure_preset(name: &str) -> Result<SweepSpec, Error> {
    let single = SystemParams::default(); // g=1, j=3, e_a=0.0625, e_b=0
    let double = SystemParams {
        e_b: 0.0625,
        ..single
    };
    let axis = |param, from, to, points| Axis {
        param,
        from,
        to,
        points,
    };
    let spec = |base, axes| SweepSpec {
        base,
        axes,
        engine: Engine::Full,
        convergence_tol: 0.0,
    };
    match name {
        // g²(0) (a) and photon number (b) vs detuning for J = 1, 2, 3κ
        "fig2a" | "fig2b" => Ok(spec(
            single,
            vec![
                axis(SweepParam::J, 1.0, 3.0, 3),
                axis(SweepParam::Delta, -5.0, 5.0, 201),
            ],
        )),
        // g²(0) vs QD coupling for J = 1, 2, 3κ
        "fig3a" => Ok(spec(
            single,
            vec![
                axis(SweepParam::J, 1.0, 3.0, 3),
                axis(SweepParam::G, 0.1, 3.5, 201),
            ],
        )),
        // photon number and g²(0) vs drive strength at the g = 1.1κ optimum
        "fig3b" => Ok(spec(
            SystemParams {
                g: 1.1,
                ..single
            },
            vec![axis(SweepParam::EA, 0.01, 0.4, 201)],
        )),
        // double drive: g²(0) heatmap over phase × detuning at J = κ
        "fig4a" => Ok(spec(
            SystemParams {
                j: 1.0,
                n_max_a: 4,
                n_max_b: 4,
                ..double
            },
            vec![
                axis(SweepParam::Theta, 0.0, 2.0 * PI, 101),
                axis(SweepParam::Delta, -5.0, 5.0, 101),
            ],
        )),
        // cuts of the same landscape at θ = 0, π/2, π, 3π/2
        "fig4b" => Ok(spec(
            SystemParams { j: 1.0, ..double },
            vec![
                axis(SweepParam::Theta, 0.0, 1.5 * PI, 4),
                axis(SweepParam::Delta, -5.0, 5.0, 201),
            ],
        )),
        // g²(0) vs phase for J = 1, 2, 3κ
        "fig5a" => Ok(spec(
            double,
            vec![
                axis(SweepParam::J, 1.0, 3.0, 3),
                axis(SweepParam::Theta, 0.0, 2.0 * PI, 201),
            ],
        )),
        // g²(0) vs tunneling at θ = 1.5π (0.015κ spacing hits J = 0.9κ)
        "fig5b" => Ok(spec(
            SystemParams {
                theta: 1.5 * PI,
                ..double
            },
            vec![axis(SweepParam::J, 0.015, 3.0, 200)],
        )),
        // antibunching region over coupling × tunneling at θ = 1.5π
        "fig6a" | "fig6b" => Ok(spec(
            SystemParams {
                theta: 1.5 * PI,
                n_max_a: 4,
                n_max_b: 4,
                ..double
            },
            vec![
                axis(SweepParam::G, 0.0, 3.0, 101),
                axis(SweepParam::J, 0.0, 3.0, 101),
            ],
        )),
        // photon number and g²(0) vs drive at the J = 0.9κ, θ = 1.5π optimum
        "fig7a" => Ok(spec(
            SystemParams {
                j: 0.9,
                theta: 1.5 * PI,
                n_max_a: 8,
                n_max_b: 8,
                ..double
            },
            vec![axis(SweepParam::E, 0.005, 0.35, 70)],
        )),
        "fig7b" => Ok(spec(
            SystemParams {
                j: 0.9,
                theta: 1.5 * PI,
                n_max_a: 8,
                n_max_b: 8,
                ..double
            },
            vec![axis(SweepParam::E, 0.02, 1.1, 55)],
        )),
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}

/// Minimize g²(0) over one parameter at the base truncation.
///
/// A 65-point grid scan brackets the global minimum (the landscapes are
/// multi-modal, so pure local refinement would be wrong), then
/// golden-section refinement narrows the bracket to below `tol`. Ties break
/// toward the smaller parameter value, and the returned minimum is never
/// above the best grid value. Points where the solver fails count as +∞;
/// if every point fails the optimization fails.
pub fn minimize_g2(
    base: &SystemParams,
    var: SweepParam,
    bounds: (f64, f64),
    tol: f64,
) -> Result<(f64, f64), Error> {
    let (lo, hi) = bounds;
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::SpecError(format!(
            "minimize_g2 needs lo < hi and tol > 0, got [{lo}, {hi}] and {tol}"
        )));
    }
    let objective = |x: f64| -> f64 {
        match observables(&apply_axis(*base, var, x)) {
            Ok(r) if r.g2_a.is_finite() => r.g2_a,
            _ => f64::INFINITY,
        }
    };
    const GRID: usize = 65;
    let xs: Vec<f64> = (0..GRID)
        .map(|i| lo + (hi - lo) * (i as f64) / ((GRID - 1) as f64))
        .collect();
    let fs: Vec<f64> = xs.par_iter().map(|&x| objective(x)).collect();
    let mut best = (xs[0], fs[0]);
    let mut best_idx = 0;
    for (i, (&x, &f)) in xs.iter().zip(&fs).enumerate() {
        if f < best.1 {
            best = (x, f);
            best_idx = i;
        }
    }
    if !best.1.is_finite() {
        return Err(Error::OptimizationFailed(
            "g²(0) was non-finite across the whole range".into(),
        ));
    }
    let mut a = xs[best_idx.saturating_sub(1)];
    let mut b = xs[(best_idx + 1).min(GRID - 1)];
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let mut fc = objective(c);
    let mut fd = objective(d);
    let consider = |x: f64, f: f64, best: &mut (f64, f64)| {
        if f < best.1 || (f == best.1 && x < best.0) {
            *best = (x, f);
        }
    };
    consider(c, fc, &mut best);
    consider(d, fd, &mut best);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = objective(c);
            consider(c, fc, &mut best);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = objective(d);
            consider(d, fd, &mut best);
        }
    }
    Ok(best)
}

/// Strict local minima of a 1D sweep, deepest first. Rows with non-finite
/// g²(0) are ignored.
pub fn find_dips(result: &SweepResult) -> Result<Vec<(f64, f64)>, Error> {
    if result.metadata.axes.len() != 1 {
        return Err(Error::SpecError(format!(
            "find_dips needs a 1D sweep, got {} axes",
            result.metadata.axes.len()
        )));
    }
    let rows = &result.rows;
    let mut dips = Vec::new();
    for i in 1..rows.len().saturating_sub(1) {
        let (prev, here, next) = (rows[i - 1].g2, rows[i].g2, rows[i + 1].g2);
        if here.is_finite()
            && prev.is_finite()
            && next.is_finite()
            && here < prev
            && here < next
        {
            dips.push((rows[i].axis_values[0], here));
        }
    }
    dips.sort_by(|a, b| a.1.total_cmp(&b.1));
    Ok(dips)
}
