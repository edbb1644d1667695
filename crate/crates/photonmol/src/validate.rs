//! Runtime self-verification: module invariants and the acceptance suite.
//!
//! [`invariant_checks`] re-runs the structural and numerical invariants of
//! the library at runtime — operator algebra, Hermiticity and trace
//! preservation on random parameter draws, independent fixed-point
//! residuals, integrator-vs-linear-solve consistency, weak-drive limits,
//! optimizer sanity and sweep determinism.
//!
//! [`acceptance_checks`] reproduces the benchmark operating points of the
//! photonic molecule: the single-drive baseline, the coupling / phase /
//! tunneling optima, the strong-drive point, the weak-coupling antibunching
//! threshold, and an always-on property suite. Every check reports honest
//! pass/fail against the frozen target windows; nothing is clamped or
//! retried to force a pass.
//!
//! Both return [`Check`] records. The CLI `validate` subcommand renders
//! them one line per check and exits nonzero if any gated check fails; the
//! integration tests consume the same records and additionally lock the
//! measured values against pinned regression baselines.

use ndarray::Array2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::hilbert::{add, annihilation_a, dagger, make_space, matmul, scale, sigma_minus};
use crate::model::{hamiltonian, liouvillian, vec_density, SystemParams};
use crate::solver::{
    converged_g2, evolve, observables, stable_dt, steady_state, steady_state_structured,
    DensityMatrix,
};
use crate::sweep::{
    apply_axis, find_dips, minimize_g2, run_sweep, to_csv, Axis, Engine, SweepParam, SweepSpec,
};
use crate::weakdrive::{g2_weakdrive, path_decomposition, steady_amplitudes};
use crate::{Complex, Error};

const PI: f64 = std::f64::consts::PI;

/// Cutoff-ladder tolerance used by the acceptance points.
const LADDER_TOL: f64 = 0.01;

// Target windows of the acceptance suite. Point criteria quote prose
// values, so their windows are loose; property-suite thresholds are exact.
const C1_G2: (f64, f64) = (2e-4, 8e-4);
const C1_NA: (f64, f64) = (4e-3, 8e-3);
const C2_ARGMIN: (f64, f64) = (1.05, 1.15);
const C2_G2_MAX: f64 = 3e-4;
const C2_DIP2: (f64, f64) = (2.6, 2.8);
const C3_NA: (f64, f64) = (0.04, 0.06);
const C3_G2: (f64, f64) = (1e-3, 4e-3);
const C4_ARGMIN: (f64, f64) = (1.48 * PI, 1.52 * PI);
const C4_G2: (f64, f64) = (0.0245, 0.0455);
const C5_ARGMIN: (f64, f64) = (0.85, 0.95);
const C5_G2: (f64, f64) = (1e-3, 4e-3);
const C6_NA: (f64, f64) = (0.08, 0.12);
const C6_G2: (f64, f64) = (0.063, 0.117);
const C7_G2_MAX: f64 = 1.0;
const C8_COHERENCE_TOL: f64 = 1e-3;
const C8_CAVITY_TOL: f64 = 1e-6;
const C8_RESIDUAL_TOL: f64 = 1e-9;
const C8_EVOLVE_TOL: f64 = 1e-6;
const C8_WEAKDRIVE_REL: f64 = 0.05;
const C8_WEAKDRIVE_FLOOR: f64 = 1e-6;

/// One self-check: a name, a verdict, human-readable clause lines, and the
/// measured values keyed for regression tests.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Vec<String>,
    pub measured: Vec<(&'static str, f64)>,
}

impl Check {
    /// Look up a measured value by key.
    pub fn value(&self, key: &str) -> Option<f64> {
        self.measured
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
    }
}

/// Clause accumulator for building a [`Check`].
struct Clauses {
    detail: Vec<String>,
    ok: bool,
    measured: Vec<(&'static str, f64)>,
}

impl Clauses {
    fn new() -> Self {
        Clauses {
            detail: Vec::new(),
            ok: true,
            measured: Vec::new(),
        }
    }

    fn record(&mut self, key: &'static str, value: f64) {
        self.measured.push((key, value));
    }

    fn clause(&mut self, ok: bool, text: String) {
        self.ok &= ok;
        self.detail
            .push(format!("{text} -> {}", if ok { "ok" } else { "FAIL" }));
    }

    fn note(&mut self, text: String) {
        self.detail.push(text);
    }

    fn finish(self, name: &str) -> Check {
        Check {
            name: name.to_string(),
            passed: self.ok,
            detail: self.detail,
            measured: self.measured,
        }
    }
}

fn run_check(name: &str, body: impl FnOnce(&mut Clauses) -> Result<(), Error>) -> Check {
    let mut cl = Clauses::new();
    if let Err(e) = body(&mut cl) {
        cl.clause(false, format!("aborted: {e}"));
    }
    cl.finish(name)
}

fn in_window(x: f64, (lo, hi): (f64, f64)) -> bool {
    x.is_finite() && lo <= x && x <= hi
}

fn window_text(label: &str, x: f64, (lo, hi): (f64, f64)) -> String {
    format!("{label} = {x:.6e}, window [{lo:.6e}, {hi:.6e}]")
}

/// Render checks as one `[PASS]`/`[FAIL]` line each, clauses indented.
pub fn render(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        out.push_str(&format!(
            "[{}] {}\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.name
        ));
        for line in &c.detail {
            out.push_str("       ");
            out.push_str(line);
            out.push('\n');
        }
    }
    out
}

/// True iff every gated check passed.
pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// Random operating point used by the draw-based invariants: couplings and
/// tunneling in [0, 3]κ, common detuning in [−3, 3]κ, any phase, both
/// drives weak but nonzero (0.005–0.1κ) so photon statistics are defined.
fn draw_params(rng: &mut ChaCha8Rng) -> SystemParams {
    let delta = rng.gen_range(-3.0..3.0);
    SystemParams {
        delta_a: delta,
        delta_b: delta,
        g: rng.gen_range(0.0..3.0),
        j: rng.gen_range(0.0..3.0),
        theta: rng.gen_range(0.0..2.0 * PI),
        e_a: rng.gen_range(0.005..0.1),
        e_b: rng.gen_range(0.005..0.1),
        ..Default::default()
    }
}

fn mat_inf_norm(m: &Array2<Complex>) -> f64 {
    let mut worst = 0.0f64;
    for row in m.rows() {
        let s: f64 = row.iter().map(|z| z.norm()).sum();
        worst = worst.max(s);
    }
    worst
}

fn max_abs(m: &Array2<Complex>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// shared heavy computations
// ---------------------------------------------------------------------------

/// Worst independent fixed-point residual max|L vec(ρ)| / ‖L‖∞ over random
/// draws at cutoff (3, 3): the steady state comes from the structured
/// solver, the Liouvillian is rebuilt densely, so the two paths check each
/// other.
fn worst_fixed_point_residual(n_draws: usize, seed: u64) -> Result<f64, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<SystemParams> = (0..n_draws)
        .map(|_| draw_params(&mut rng).with_cutoffs(3, 3))
        .collect();
    let residuals: Result<Vec<f64>, Error> = draws
        .par_iter()
        .map(|p| {
            let rho = steady_state_structured(p)?;
            let l = liouvillian(p, rho.space)?;
            let lv = l.matrix.dot(&vec_density(&rho.matrix));
            let r = lv.iter().map(|z| z.norm()).fold(0.0, f64::max);
            Ok(r / mat_inf_norm(&l.matrix))
        })
        .collect();
    Ok(residuals?.into_iter().fold(0.0, f64::max))
}

/// Trace distance between RK4 relaxation from vacuum and the direct
/// linear-solve steady state, both on the same dense generator.
fn evolve_vs_steady(p: &SystemParams, t_final: f64) -> Result<f64, Error> {
    let space = p.space()?;
    let l = liouvillian(p, space)?;
    let steady = steady_state(&l)?;
    let evolved = evolve(&DensityMatrix::vacuum(space), &l, t_final, stable_dt(&l))?;
    evolved.trace_distance(&steady)
}

/// Weakdrive-vs-full agreement over the 5×5 grid (g, J) ∈ [0.5, 3]² at
/// Δ = 0, single drive e_a = 0.01κ. Returns (worst relative deviation,
/// g, J and full-solver g² at the worst point). Points with
/// g² ≤ 10⁻⁶ are outside the comparison floor and skipped.
fn weakdrive_grid_worst() -> Result<(f64, f64, f64, f64), Error> {
    let mut points = Vec::new();
    for i in 0..5 {
        for k in 0..5 {
            let g = 0.5 + 2.5 * (i as f64) / 4.0;
            let j = 0.5 + 2.5 * (k as f64) / 4.0;
            points.push((g, j));
        }
    }
    let rows: Result<Vec<(f64, f64, f64, f64)>, Error> = points
        .par_iter()
        .map(|&(g, j)| {
            let p = SystemParams {
                g,
                j,
                e_a: 0.01,
                e_b: 0.0,
                n_max_a: 4,
                n_max_b: 4,
                ..Default::default()
            };
            let full = observables(&p)?.g2_a;
            let weak = g2_weakdrive(&steady_amplitudes(&p)?)?;
            let rel = if full > C8_WEAKDRIVE_FLOOR {
                (weak - full).abs() / full
            } else {
                0.0
            };
            Ok((rel, g, j, full))
        })
        .collect();
    let mut worst = (0.0, f64::NAN, f64::NAN, f64::NAN);
    for row in rows? {
        if row.0 > worst.0 {
            worst = row;
        }
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// invariant suite
// ---------------------------------------------------------------------------

fn check_ladder_algebra() -> Check {
    run_check("hilbert: ladder algebra and index round-trip", |cl| {
        let space = make_space(5, 5)?;
        let a = annihilation_a(space);
        let ad = dagger(&a);
        let comm = add(
            &matmul(&a, &ad)?,
            &scale(Complex::new(-1.0, 0.0), &matmul(&ad, &a)?),
        )?;
        let mut comm_dev = 0.0f64;
        for i in 0..space.dim {
            let (m, _, _) = space.state_of(i);
            if m < 5 {
                comm_dev = comm_dev.max((comm.matrix[[i, i]] - 1.0).norm());
            }
        }
        cl.record("commutator_dev", comm_dev);
        cl.clause(
            comm_dev < 1e-14,
            format!("max |[a, a†] − 1| below cutoff = {comm_dev:.2e} < 1e-14"),
        );
        let sm = sigma_minus(space);
        let sm2 = max_abs(&matmul(&sm, &sm)?.matrix);
        cl.clause(sm2 == 0.0, format!("σ⁻σ⁻ = 0 exactly (max {sm2:.1e})"));
        let a_back = dagger(&dagger(&a));
        cl.clause(
            a_back.matrix == a.matrix,
            "dagger is an involution (bit-identical)".into(),
        );
        let round_trip = (0..space.dim).all(|i| {
            let (m, n, x) = space.state_of(i);
            space.index_of(m, n, x) == i
        });
        cl.clause(round_trip, "index ↔ state round-trip for all states".into());
        Ok(())
    })
}

fn check_hamiltonian_hermiticity() -> Check {
    run_check("model: Hamiltonian hermiticity on 100 random draws", |cl| {
        let mut rng = ChaCha8Rng::seed_from_u64(0x11);
        let space = make_space(4, 4)?;
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let mut p = draw_params(&mut rng);
            p.e_a = rng.gen_range(0.0..0.5);
            p.e_b = rng.gen_range(0.0..0.5);
            let h = hamiltonian(&p, space)?;
            let dev = max_abs(&add(&h, &scale(Complex::new(-1.0, 0.0), &dagger(&h)))?.matrix);
            worst = worst.max(dev);
        }
        cl.record("hermiticity_dev", worst);
        cl.clause(worst < 1e-12, format!("max |H − H†| = {worst:.2e} < 1e-12"));
        Ok(())
    })
}

fn check_liouvillian_trace() -> Check {
    run_check(
        "model: Liouvillian trace preservation and vacuum dark state",
        |cl| {
            let mut rng = ChaCha8Rng::seed_from_u64(0x22);
            let mut worst = 0.0f64;
            for _ in 0..5 {
                let p = draw_params(&mut rng).with_cutoffs(3, 3);
                let space = p.space()?;
                let l = liouvillian(&p, space)?;
                for _ in 0..4 {
                    let mut m = Array2::zeros((space.dim, space.dim));
                    for z in m.iter_mut() {
                        *z = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    }
                    let lm = l.apply(&m)?;
                    let tr: Complex = (0..space.dim).map(|i| lm[[i, i]]).sum();
                    worst = worst.max(tr.norm());
                }
            }
            cl.record("trace_dev", worst);
            cl.clause(
                worst < 1e-10,
                format!("max |tr L(M)| over 20 random matrices = {worst:.2e} < 1e-10"),
            );
            // undriven system: the vacuum is an exact dark state
            let undriven = SystemParams {
                e_a: 0.0,
                e_b: 0.0,
                ..Default::default()
            }
            .with_cutoffs(3, 3);
            let space = undriven.space()?;
            let l = liouvillian(&undriven, space)?;
            let lv = l.apply(&DensityMatrix::vacuum(space).matrix)?;
            let dark = max_abs(&lv);
            cl.record("vacuum_residual", dark);
            cl.clause(
                dark < 1e-14,
                format!("undriven vacuum residual = {dark:.2e} < 1e-14"),
            );
            Ok(())
        },
    )
}

fn check_weak_drive_scaling() -> Check {
    run_check("solver: weak-drive occupation scaling", |cl| {
        let p1 = SystemParams {
            e_a: 0.01,
            ..Default::default()
        }
        .with_cutoffs(4, 4);
        let p2 = SystemParams {
            e_a: 0.005,
            ..p1
        };
        let r1 = observables(&p1)?;
        let r2 = observables(&p2)?;
        let ratio = r1.n_a / r2.n_a;
        let g2_change = (r1.g2_a - r2.g2_a).abs() / r2.g2_a;
        cl.record("occupation_ratio", ratio);
        cl.record("g2_change", g2_change);
        cl.clause(
            (ratio - 4.0).abs() < 0.04,
            format!("n_a(2e)/n_a(e) = {ratio:.6} within 1% of 4"),
        );
        cl.clause(
            g2_change < 0.02,
            format!("g² drive-independence: relative change {g2_change:.2e} < 2%"),
        );
        Ok(())
    })
}

fn check_reported_state_quality() -> Check {
    run_check(
        "solver: reported states are positive, unit-trace, Hermitian",
        |cl| {
            let mut rng = ChaCha8Rng::seed_from_u64(0x33);
            let draws: Vec<SystemParams> = (0..10)
                .map(|_| draw_params(&mut rng).with_cutoffs(3, 3))
                .collect();
            let mut min_eig = f64::INFINITY;
            let mut trace_dev = 0.0f64;
            let mut herm_dev = 0.0f64;
            for p in &draws {
                let rho = steady_state_structured(p)?;
                min_eig = min_eig.min(rho.min_eigenvalue()?);
                let tr: Complex = (0..rho.space.dim).map(|i| rho.matrix[[i, i]]).sum();
                trace_dev = trace_dev.max((tr - 1.0).norm());
                let adj = rho.matrix.t().mapv(|z| z.conj());
                herm_dev = herm_dev.max(max_abs(&(&rho.matrix - &adj)));
            }
            cl.record("min_eigenvalue", min_eig);
            cl.record("trace_dev", trace_dev);
            cl.clause(
                min_eig >= -1e-12,
                format!("smallest eigenvalue over 10 draws = {min_eig:.2e} ≥ −1e-12"),
            );
            cl.clause(
                trace_dev < 1e-12,
                format!("max |tr ρ − 1| = {trace_dev:.2e} < 1e-12"),
            );
            cl.clause(
                herm_dev < 1e-12,
                format!("max |ρ − ρ†| = {herm_dev:.2e} < 1e-12"),
            );
            Ok(())
        },
    )
}

fn check_weakdrive_scaling_exact() -> Check {
    run_check("weakdrive: amplitudes scale exactly with drive order", |cl| {
        let p = SystemParams {
            e_a: 0.004,
            e_b: 0.002,
            theta: 0.8,
            ..Default::default()
        };
        let doubled = SystemParams {
            e_a: 0.008,
            e_b: 0.004,
            ..p
        };
        let a1 = steady_amplitudes(&p)?;
        let a2 = steady_amplitudes(&doubled)?;
        let lin = (a2.c[1].norm() / a1.c[1].norm() - 2.0).abs();
        let quad = (a2.c[4].norm() / a1.c[4].norm() - 4.0).abs();
        cl.record("linear_dev", lin);
        cl.record("quadratic_dev", quad);
        cl.clause(
            lin < 1e-12,
            format!("one-photon amplitude doubles: dev {lin:.2e} < 1e-12"),
        );
        cl.clause(
            quad < 1e-12,
            format!("two-photon amplitude quadruples: dev {quad:.2e} < 1e-12"),
        );
        Ok(())
    })
}

fn check_weakdrive_coupling_optimum() -> Check {
    run_check("weakdrive: antibunching optimum near g = 1.1κ", |cl| {
        let mut best = (f64::NAN, f64::INFINITY);
        for i in 0..=200 {
            let g = 0.5 + 2.5 * (i as f64) / 200.0;
            let p = SystemParams {
                g,
                e_a: 0.01,
                e_b: 0.0,
                ..Default::default()
            };
            let g2 = g2_weakdrive(&steady_amplitudes(&p)?)?;
            if g2 < best.1 {
                best = (g, g2);
            }
        }
        cl.record("argmin_g", best.0);
        cl.record("g2_min", best.1);
        cl.clause(
            (best.0 - 1.1).abs() <= 0.1,
            format!("argmin over g ∈ [0.5, 3] = {:.4}, within 0.1 of 1.1", best.0),
        );
        Ok(())
    })
}

fn check_path_identity() -> Check {
    run_check("weakdrive: path decomposition sums to the total", |cl| {
        let points = [
            SystemParams::default(),
            SystemParams {
                j: 0.9,
                theta: 1.5 * PI,
                e_b: 0.0625,
                ..Default::default()
            },
            SystemParams {
                g: 1.1,
                delta_a: 0.7,
                delta_b: 0.7,
                theta: 2.5,
                e_b: 0.03,
                ..Default::default()
            },
        ];
        let mut worst = 0.0f64;
        for p in &points {
            let rep = path_decomposition(p)?;
            let sum = rep.direct_drive + rep.tunneling_mediated;
            let scale = rep.direct_drive.norm() + rep.tunneling_mediated.norm() + 1e-300;
            worst = worst.max((sum - rep.two_photon_total).norm() / scale);
        }
        cl.record("identity_dev", worst);
        cl.clause(
            worst < 1e-12,
            format!("max relative |direct + tunneling − total| = {worst:.2e} < 1e-12"),
        );
        Ok(())
    })
}

fn check_optimizer_bound() -> Check {
    run_check("sweep: refined minimum never exceeds the grid scan", |cl| {
        let base = SystemParams {
            j: 0.9,
            e_b: 0.0625,
            n_max_a: 3,
            n_max_b: 3,
            ..Default::default()
        };
        let (argmin, val) = minimize_g2(&base, SweepParam::Theta, (0.0, 2.0 * PI), 1e-3)?;
        let mut grid_min = f64::INFINITY;
        for i in 0..65 {
            let x = 2.0 * PI * (i as f64) / 64.0;
            grid_min = grid_min.min(observables(&apply_axis(base, SweepParam::Theta, x))?.g2_a);
        }
        cl.record("refined_min", val);
        cl.record("grid_min", grid_min);
        cl.clause(
            val <= grid_min,
            format!("refined {val:.6e} ≤ grid {grid_min:.6e} (argmin θ = {argmin:.4})"),
        );
        Ok(())
    })
}

fn check_sweep_determinism() -> Check {
    run_check("sweep: repeat-run and collapsed-axis determinism", |cl| {
        let spec = SweepSpec {
            base: SystemParams::default().with_cutoffs(2, 2),
            axes: vec![Axis {
                param: SweepParam::Delta,
                from: -1.0,
                to: 1.0,
                points: 5,
            }],
            engine: Engine::Full,
            convergence_tol: 0.0,
        };
        let a = to_csv(&run_sweep(&spec)?);
        let b = to_csv(&run_sweep(&spec)?);
        cl.clause(a == b, "two runs of the same spec are bit-identical".into());
        let collapsed = SweepSpec {
            axes: vec![Axis {
                param: SweepParam::G,
                from: 1.0,
                to: 1.0,
                points: 2,
            }],
            ..spec
        };
        let rows = run_sweep(&collapsed)?.rows;
        cl.clause(
            rows[0] == rows[1],
            "collapsed axis repeats one value identically".into(),
        );
        Ok(())
    })
}

/// Both symmetry checks share one g² table on a 21×21 (θ, Δ) grid at the
/// double-drive point g = J = κ. The grid is closed under θ → π − θ,
/// θ → −θ and Δ → −Δ, so mapped points are table lookups.
fn symmetry_checks() -> Vec<Check> {
    let build = || -> Result<Vec<Vec<f64>>, Error> {
        let base = SystemParams {
            j: 1.0,
            e_b: 0.0625,
            n_max_a: 3,
            n_max_b: 3,
            ..Default::default()
        };
        (0..21usize)
            .into_par_iter()
            .map(|k| {
                let theta = 2.0 * PI * (k as f64) / 20.0;
                (0..21usize)
                    .map(|d| {
                        let delta = -5.0 + 0.5 * (d as f64);
                        let mut p = apply_axis(base, SweepParam::Theta, theta);
                        p = apply_axis(p, SweepParam::Delta, delta);
                        Ok(observables(&p)?.g2_a)
                    })
                    .collect()
            })
            .collect()
    };
    let table = match build() {
        Ok(t) => t,
        Err(e) => {
            let mut cl = Clauses::new();
            cl.clause(false, format!("aborted: {e}"));
            return vec![cl.finish("symmetry: g² table construction")];
        }
    };
    let max_dev = |map_k: &dyn Fn(usize) -> usize| -> f64 {
        let mut worst = 0.0f64;
        for k in 0..21 {
            for d in 0..21 {
                let mapped = table[map_k(k)][20 - d];
                let dev = (table[k][d] - mapped).abs() / table[k][d].abs().max(1e-300);
                worst = worst.max(dev);
            }
        }
        worst
    };
    // mirror: (Δ, θ) → (−Δ, π − θ); grid index k ↦ (10 − k) mod 20
    let mirror_dev = max_dev(&|k: usize| (30 - k) % 20);
    let mut mirror = Clauses::new();
    mirror.record("mirror_dev", mirror_dev);
    mirror.clause(
        mirror_dev < 0.01,
        format!("max relative deviation over 21×21 grid = {mirror_dev:.2e} < 1%"),
    );
    let mirror = mirror.finish("symmetry: g²(Δ, θ) = g²(−Δ, π − θ) on the double-drive landscape");
    // reported diagnostic: the map (Δ, θ) → (−Δ, −θ); k ↦ (20 − k) mod 20.
    // Measured deviations are order unity, so this map is NOT a symmetry of
    // the landscape and is reported without gating the suite.
    let anti_dev = max_dev(&|k: usize| (20 - k) % 20);
    let mut anti = Clauses::new();
    anti.record("antisymmetry_dev", anti_dev);
    anti.note(format!(
        "diagnostic only (not gated): max relative deviation under (Δ, θ) → (−Δ, −θ) \
         is {anti_dev:.3}; the map that does hold exactly is (−Δ, π − θ) above"
    ));
    let anti = anti.finish("symmetry: (−Δ, −θ) antisymmetry diagnostic (reported, non-gating)");
    vec![mirror, anti]
}

fn check_antibunching_region_member() -> Check {
    run_check(
        "sweep: weak-coupling point sits inside the g² < 0.1 region",
        |cl| {
            let p = SystemParams {
                g: 0.18,
                j: 0.48,
                theta: 1.5 * PI,
                e_b: 0.0625,
                n_max_a: 4,
                n_max_b: 4,
                ..Default::default()
            };
            let r = observables(&p)?;
            cl.record("g2", r.g2_a);
            cl.clause(
                r.g2_a < 0.1,
                format!(
                    "g²(0) at (g, J) = (0.18, 0.48), θ = 1.5π is {:.4e} < 0.1",
                    r.g2_a
                ),
            );
            Ok(())
        },
    )
}

/// The module invariant suites, re-run at runtime.
pub fn invariant_checks() -> Vec<Check> {
    let mut checks = vec![
        check_ladder_algebra(),
        check_hamiltonian_hermiticity(),
        check_liouvillian_trace(),
        check_weak_drive_scaling(),
        check_reported_state_quality(),
        check_weakdrive_scaling_exact(),
        check_weakdrive_coupling_optimum(),
        check_path_identity(),
        check_optimizer_bound(),
        check_sweep_determinism(),
        check_antibunching_region_member(),
    ];
    checks.extend(symmetry_checks());
    checks
}

// ---------------------------------------------------------------------------
// acceptance suite
// ---------------------------------------------------------------------------

fn criterion_1() -> Check {
    run_check("acceptance 1/8: single-drive baseline point", |cl| {
        let r = converged_g2(&SystemParams::default(), LADDER_TOL)?;
        cl.record("g2", r.g2_a);
        cl.record("n_a", r.n_a);
        cl.clause(in_window(r.g2_a, C1_G2), window_text("g2", r.g2_a, C1_G2));
        cl.clause(in_window(r.n_a, C1_NA), window_text("n_a", r.n_a, C1_NA));
        cl.clause(r.converged, "cutoff ladder converged".into());
        Ok(())
    })
}

fn criterion_2() -> Check {
    run_check("acceptance 2/8: coupling optimum and second dip", |cl| {
        let base = SystemParams::default();
        let (argmin, g2_min) = minimize_g2(&base, SweepParam::G, (0.5, 2.0), 1e-4)?;
        cl.record("argmin_g", argmin);
        cl.record("g2_min", g2_min);
        cl.clause(
            in_window(argmin, C2_ARGMIN),
            window_text("argmin over g ∈ [0.5, 2]", argmin, C2_ARGMIN),
        );
        cl.clause(
            g2_min <= C2_G2_MAX,
            format!("g2 at optimum = {g2_min:.6e} ≤ {C2_G2_MAX:.0e}"),
        );
        let sweep = run_sweep(&SweepSpec {
            base,
            axes: vec![Axis {
                param: SweepParam::G,
                from: 0.1,
                to: 3.5,
                points: 201,
            }],
            engine: Engine::Full,
            convergence_tol: 0.0,
        })?;
        let dips = find_dips(&sweep)?;
        cl.record("n_dips", dips.len() as f64);
        if dips.len() < 2 {
            cl.clause(false, format!("expected two dips, found {}", dips.len()));
        } else {
            let h = (3.5 - 0.1) / 200.0;
            let (dip2, dip2_g2) =
                minimize_g2(&base, SweepParam::G, (dips[1].0 - 2.0 * h, dips[1].0 + 2.0 * h), 1e-4)?;
            cl.record("dip2_g", dip2);
            cl.record("dip2_g2", dip2_g2);
            cl.clause(
                in_window(dip2, C2_DIP2),
                window_text("second dip location", dip2, C2_DIP2),
            );
        }
        Ok(())
    })
}

fn criterion_3() -> Check {
    run_check("acceptance 3/8: balanced-drive operating point", |cl| {
        let p = SystemParams {
            g: 1.1,
            e_a: 0.4,
            ..Default::default()
        };
        let r = converged_g2(&p, LADDER_TOL)?;
        cl.record("g2", r.g2_a);
        cl.record("n_a", r.n_a);
        cl.clause(in_window(r.n_a, C3_NA), window_text("n_a", r.n_a, C3_NA));
        cl.clause(in_window(r.g2_a, C3_G2), window_text("g2", r.g2_a, C3_G2));
        cl.clause(r.converged, "cutoff ladder converged".into());
        Ok(())
    })
}

fn criterion_4() -> Check {
    run_check("acceptance 4/8: drive-phase optimum", |cl| {
        let base = SystemParams {
            j: 1.0,
            e_b: 0.0625,
            ..Default::default()
        };
        let (argmin, g2_min) = minimize_g2(&base, SweepParam::Theta, (0.0, 2.0 * PI), 1e-4)?;
        cl.record("argmin_theta", argmin);
        cl.record("g2_min", g2_min);
        cl.clause(
            in_window(argmin, C4_ARGMIN),
            format!(
                "argmin over θ = {:.6} = {:.5}π, window 1.5π ± 0.02π",
                argmin,
                argmin / PI
            ),
        );
        cl.clause(in_window(g2_min, C4_G2), window_text("g2", g2_min, C4_G2));
        // θ = −0.5π names the same phase: normalization folds it onto 1.5π
        let pos = observables(&apply_axis(base, SweepParam::Theta, 1.5 * PI))?;
        let neg = observables(&apply_axis(base, SweepParam::Theta, -0.5 * PI))?;
        let alias_dev = (pos.g2_a - neg.g2_a).abs() / pos.g2_a;
        cl.record("alias_dev", alias_dev);
        cl.clause(
            alias_dev < 1e-10,
            format!("θ = −0.5π aliases 1.5π: relative g² difference {alias_dev:.2e}"),
        );
        Ok(())
    })
}

fn criterion_5() -> Check {
    run_check("acceptance 5/8: tunneling optimum", |cl| {
        let base = SystemParams {
            theta: 1.5 * PI,
            e_b: 0.0625,
            ..Default::default()
        };
        let (argmin, g2_min) = minimize_g2(&base, SweepParam::J, (0.1, 3.0), 1e-4)?;
        cl.record("argmin_j", argmin);
        cl.record("g2_min", g2_min);
        cl.clause(
            in_window(argmin, C5_ARGMIN),
            window_text("argmin over J ∈ [0.1, 3]", argmin, C5_ARGMIN),
        );
        cl.clause(in_window(g2_min, C5_G2), window_text("g2", g2_min, C5_G2));
        Ok(())
    })
}

fn criterion_6() -> Check {
    run_check("acceptance 6/8: strong-drive antibunching point", |cl| {
        let p = SystemParams {
            j: 0.9,
            theta: 1.5 * PI,
            e_a: 0.21875,
            e_b: 0.21875,
            ..Default::default()
        };
        let r = converged_g2(&p, LADDER_TOL)?;
        cl.record("g2", r.g2_a);
        cl.record("n_a", r.n_a);
        cl.clause(in_window(r.n_a, C6_NA), window_text("n_a", r.n_a, C6_NA));
        cl.clause(in_window(r.g2_a, C6_G2), window_text("g2", r.g2_a, C6_G2));
        cl.clause(r.converged, "cutoff ladder converged".into());
        Ok(())
    })
}

fn criterion_7() -> Check {
    run_check("acceptance 7/8: weak-coupling antibunching threshold", |cl| {
        let p = SystemParams {
            g: 0.18,
            j: 0.48,
            theta: 1.5 * PI,
            e_b: 0.0625,
            ..Default::default()
        };
        let r = converged_g2(&p, LADDER_TOL)?;
        cl.record("g2", r.g2_a);
        cl.clause(
            r.g2_a < C7_G2_MAX,
            format!("g2 = {:.6e} < {C7_G2_MAX}", r.g2_a),
        );
        cl.clause(r.converged, "cutoff ladder converged".into());
        Ok(())
    })
}

fn criterion_8() -> Check {
    run_check("acceptance 8/8: property suite", |cl| {
        // linear-system coherence: with g = 0 the model is a driven pair of
        // linear cavities, whose steady state is coherent → g² = 1
        let mut rng = ChaCha8Rng::seed_from_u64(0x44);
        let draws: Vec<SystemParams> = (0..20)
            .map(|_| {
                let mut p = draw_params(&mut rng);
                p.g = 0.0;
                p
            })
            .collect();
        let devs: Result<Vec<f64>, Error> = draws
            .par_iter()
            .map(|p| Ok((observables(p)?.g2_a - 1.0).abs()))
            .collect();
        let coherence_dev = devs?.into_iter().fold(0.0, f64::max);
        cl.record("coherence_dev", coherence_dev);
        cl.clause(
            coherence_dev < C8_COHERENCE_TOL,
            format!("g = 0 coherence: max |g² − 1| over 20 draws = {coherence_dev:.2e} < 1e-3"),
        );
        // analytic single cavity: n = E²/(Δ² + κ²/4)
        let mut cavity_dev = 0.0f64;
        for delta in [0.0, 0.5, -1.2] {
            let p = SystemParams {
                delta_a: delta,
                delta_b: delta,
                g: 0.0,
                j: 0.0,
                n_max_a: 8,
                n_max_b: 1,
                ..Default::default()
            };
            let exact = p.e_a * p.e_a / (delta * delta + 0.25);
            cavity_dev = cavity_dev.max((observables(&p)?.n_a - exact).abs());
        }
        cl.record("cavity_dev", cavity_dev);
        cl.clause(
            cavity_dev < C8_CAVITY_TOL,
            format!("analytic cavity occupation: max |n_a − E²/(Δ²+κ²/4)| = {cavity_dev:.2e} < 1e-6"),
        );
        // independent fixed-point residual and integrator consistency
        let residual = worst_fixed_point_residual(50, 0x55)?;
        cl.record("residual", residual);
        cl.clause(
            residual < C8_RESIDUAL_TOL,
            format!("max relative residual over 50 draws = {residual:.2e} < 1e-9"),
        );
        let d1 = evolve_vs_steady(&SystemParams::default().with_cutoffs(1, 1), 150.0)?;
        let strong = SystemParams {
            j: 0.9,
            theta: 1.5 * PI,
            e_a: 0.21875,
            e_b: 0.21875,
            ..Default::default()
        };
        let d2 = evolve_vs_steady(&strong.with_cutoffs(1, 1), 150.0)?;
        let evolve_dist = d1.max(d2);
        cl.record("evolve_dist", evolve_dist);
        cl.clause(
            evolve_dist < C8_EVOLVE_TOL,
            format!("evolve-vs-steady trace distance at two points = {evolve_dist:.2e} < 1e-6"),
        );
        // weak-drive oracle agreement on the 5×5 grid
        let (rel, g, j, full) = weakdrive_grid_worst()?;
        cl.record("weakdrive_rel", rel);
        cl.clause(
            rel < C8_WEAKDRIVE_REL,
            format!(
                "weakdrive-vs-full on 5×5 (g, J) ∈ [0.5, 3]² at e_a = 0.01: worst {:.2}% at \
                 (g = {g}, J = {j}, g²_full = {full:.3e}) < 5%",
                100.0 * rel
            ),
        );
        // deterministic parallel sweeps
        let spec = SweepSpec {
            base: SystemParams::default().with_cutoffs(2, 2),
            axes: vec![Axis {
                param: SweepParam::Delta,
                from: -2.0,
                to: 2.0,
                points: 8,
            }],
            engine: Engine::Full,
            convergence_tol: 0.0,
        };
        let pool1 = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .map_err(|e| Error::SolveFailed(format!("thread pool: {e}")))?;
        let pool4 = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .map_err(|e| Error::SolveFailed(format!("thread pool: {e}")))?;
        let csv1 = to_csv(&pool1.install(|| run_sweep(&spec))?);
        let csv4 = to_csv(&pool4.install(|| run_sweep(&spec))?);
        cl.clause(
            csv1 == csv4,
            "1-worker and 4-worker sweep CSVs are bit-identical".into(),
        );
        Ok(())
    })
}

/// Evaluate one acceptance criterion (1–8).
///
/// # Panics
/// If `n` is outside 1..=8.
pub fn acceptance_check(n: usize) -> Check {
    match n {
        1 => criterion_1(),
        2 => criterion_2(),
        3 => criterion_3(),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        other => panic!("no acceptance criterion {other}"),
    }
}

/// The acceptance suite: the benchmark operating points plus the always-on
/// property clauses, one [`Check`] per criterion.
pub fn acceptance_checks() -> Vec<Check> {
    (1..=8).map(acceptance_check).collect()
}
