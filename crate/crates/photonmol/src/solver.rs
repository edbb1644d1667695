//! Steady states, time evolution and photon-statistics observables.
//!
//! Two independent steady-state routes are provided:
//!
//! 1. [`steady_state`] — the direct route: solve the dim²-row linear system
//!    L·vec(ρ) = 0 with one row replaced by the trace constraint tr ρ = 1,
//!    using a single LU factorization. Deterministic and exact, but the
//!    dense superoperator limits it to small truncations
//!    (see [`crate::model::MAX_DENSE_DIM`]).
//!
//! 2. [`steady_state_structured`] — a matrix-free splitting that never forms
//!    the dim²×dim² generator. Write L = S + K with
//!
//!    ```text
//!    S(ρ) = −i(H_eff ρ − ρ H_eff†) − s·ρ ,   H_eff = H − (i/2) Σ rate·c†c
//!    K(ρ) = Σ rate·c ρ c† + s·ρ
//!    ```
//!
//!    for any shift s > 0. In the eigenbasis H_eff = V Λ V⁻¹ the map S is
//!    diagonal with factors −i(λ_i − λ̄_j) − s, whose real parts are
//!    ≤ −s because every Im λ ≤ 0 — so S is always invertible. The steady
//!    state is the fixed point of ρ ↦ −S⁻¹K(ρ) with eigenvalue 1 (for every
//!    s), and the remaining spectrum of that map is contracting at the
//!    operating points of interest, so trace-normalized power iteration
//!    converges in a few dozen steps. Convergence is *verified*, never
//!    assumed: the final residual ‖L(ρ)‖ is checked against the same bound
//!    as the direct route, and a non-contracting case fails loudly.
//!
//! Both routes check the raw residual before any cosmetic cleanup of the
//! returned matrix (Hermitization and clipping of O(10⁻¹⁶) negative
//! eigenvalues), so the cleanup can never mask a solver failure.
//!
//! [`evolve`] integrates ρ̇ = L(ρ) with a fixed-step 4th-order Runge–Kutta
//! scheme purely as a validation oracle for the steady-state solvers.
//!
//! The observable of interest is the zero-delay second-order correlation of
//! the emitting cavity, g²(0) = ⟨a†a†aa⟩/⟨a†a⟩², together with the mode
//! occupations. [`converged_g2`] wraps the evaluation in a Fock-cutoff
//! ladder (4, 6, 8, 12 photons per mode) and reports whether the value is
//! truncation-converged.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::hilbert::{
    annihilation_a, annihilation_b, dagger, matmul, sigma_minus, HilbertSpace, Operator,
};
use crate::linalg;
use crate::model::{hamiltonian, unvec_density, vec_density, Superoperator, SystemParams};
use crate::{Complex, Error};

/// Square cutoffs tried by [`converged_g2`], in order.
pub const CONVERGENCE_LADDER: [usize; 4] = [4, 6, 8, 12];

/// Residual bound for both steady-state routes, relative to a norm estimate
/// of the generator.
const STEADY_RESIDUAL_TOL: f64 = 1e-9;
/// Max |ρ − ρ†| element allowed on a raw solution.
const HERMITICITY_TOL: f64 = 1e-10;
/// |tr ρ − 1| allowed on a raw steady-state solution.
const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue tolerated before a solution is rejected.
const MIN_EIG_FLOOR: f64 = -1e-8;
/// Trace drift allowed over a whole RK4 run.
const TRACE_DRIFT_LIMIT: f64 = 1e-8;
/// ⟨a†a⟩ below this is treated as an unpopulated mode.
const PHOTON_FLOOR: f64 = 1e-30;
/// Relative imaginary residue allowed in the g²(0) traces.
const IMAG_RESIDUE_TOL: f64 = 1e-10;
/// Splitting shift as a fraction of κ_a. Any positive value is exact; 0.1κ
/// gives the fastest contraction over the explored parameter ranges.
const SPLIT_SHIFT_FRACTION: f64 = 0.1;
/// Power-iteration stop: max elementwise change between iterates.
const SPLIT_DELTA_TOL: f64 = 1e-13;
const SPLIT_MAX_ITERS: usize = 2000;

/// State of the open system: Hermitian, unit-trace, positive semidefinite
/// (up to the documented numerical tolerances) matrix on a [`HilbertSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    /// Space the state lives on.
    pub space: HilbertSpace,
    /// dim×dim matrix in the frozen basis ordering.
    pub matrix: Array2<Complex>,
}

impl DensityMatrix {
    /// Projector onto a single basis state.
    pub fn pure(space: HilbertSpace, index: usize) -> Result<Self, Error> {
        if index >= space.dim {
            return Err(Error::SpaceMismatch {
                expected: space.dim,
                found: index + 1,
            });
        }
        let mut matrix = Array2::zeros((space.dim, space.dim));
        matrix[[index, index]] = Complex::new(1.0, 0.0);
        Ok(DensityMatrix { space, matrix })
    }

    /// Projector onto |0, 0, g⟩.
    pub fn vacuum(space: HilbertSpace) -> Self {
        Self::pure(space, 0).expect("dim >= 1")
    }

    /// Expectation value tr(ρ·op).
    pub fn expectation(&self, op: &Operator) -> Result<Complex, Error> {
        if op.space != self.space {
            return Err(Error::SpaceMismatch {
                expected: self.space.dim,
                found: op.space.dim,
            });
        }
        let mut acc = Complex::new(0.0, 0.0);
        for ((i, j), r) in self.matrix.indexed_iter() {
            acc += r * op.matrix[[j, i]];
        }
        Ok(acc)
    }

    /// Trace distance ½‖ρ − σ‖₁ (sum of absolute eigenvalues of the
    /// difference).
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64, Error> {
        if other.space != self.space {
            return Err(Error::SpaceMismatch {
                expected: self.space.dim,
                found: other.space.dim,
            });
        }
        let diff = &self.matrix - &other.matrix;
        let vals = linalg::eigvalsh(&diff)?;
        Ok(0.5 * vals.iter().map(|x| x.abs()).sum::<f64>())
    }

    /// Smallest eigenvalue (diagnostic for positivity).
    pub fn min_eigenvalue(&self) -> Result<f64, Error> {
        Ok(linalg::eigvalsh(&self.matrix)?[0])
    }
}

/// Steady-state observables at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservableReport {
    /// Intracavity photon number ⟨a†a⟩ of the emitting cavity.
    pub n_a: f64,
    /// ⟨b†b⟩.
    pub n_b: f64,
    /// QD excited-state population ⟨σ†σ⟩.
    pub p_e: f64,
    /// Zero-delay second-order correlation of mode a.
    pub g2_a: f64,
    /// Fock cutoffs the report was computed at.
    pub cutoff_used: (usize, usize),
    /// For [`converged_g2`]: whether the cutoff ladder met its tolerance.
    /// Fixed-cutoff evaluations report `true` on solver success.
    pub converged: bool,
}

fn trace(m: &Array2<Complex>) -> Complex {
    (0..m.nrows()).map(|i| m[[i, i]]).sum()
}

fn max_abs(m: &Array2<Complex>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn adjoint(m: &Array2<Complex>) -> Array2<Complex> {
    m.t().mapv(|z| z.conj())
}

/// Max absolute row sum (∞-norm).
fn inf_norm(m: &Array2<Complex>) -> f64 {
    m.outer_iter()
        .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Validate a raw solver output and turn it into a reportable state:
/// check Hermiticity, trace and positivity *first*, then Hermitize,
/// renormalize and clip roundoff-scale negative eigenvalues.
fn finish_density(
    space: HilbertSpace,
    raw: &Array2<Complex>,
    trace_tol: f64,
) -> Result<DensityMatrix, Error> {
    let dev = max_abs(&(raw - &adjoint(raw)));
    if dev > HERMITICITY_TOL {
        return Err(Error::SolveFailed(format!(
            "solution deviates from Hermiticity by {dev:.3e}"
        )));
    }
    let herm = (raw + &adjoint(raw)).mapv(|z| 0.5 * z);
    let tr = trace(&herm);
    if (tr.re - 1.0).abs() > trace_tol {
        return Err(Error::SolveFailed(format!(
            "trace {:.12} deviates from 1 beyond {trace_tol:.1e}",
            tr.re
        )));
    }
    let herm = herm.mapv(|z| z / tr.re);
    let (vals, vecs) = linalg::eigh(&herm)?;
    let min_eig = vals[0];
    if min_eig < MIN_EIG_FLOOR {
        return Err(Error::SolveFailed(format!(
            "solution has negative eigenvalue {min_eig:.3e}"
        )));
    }
    let matrix = if min_eig < 0.0 {
        // clip the sub-tolerance negative noise so reported expectation
        // values (g² in particular) stay exactly nonnegative
        let clipped = vals.mapv(|x| x.max(0.0));
        let total: f64 = clipped.sum();
        let lam = Array2::from_diag(&clipped.mapv(|x| Complex::new(x / total, 0.0)));
        vecs.dot(&lam).dot(&adjoint(&vecs))
    } else {
        herm
    };
    Ok(DensityMatrix { space, matrix })
}

/// Steady state of a dense generator by trace-row replacement.
///
/// Solves L·vec(ρ) = 0 with row 0 replaced by the trace-normalization row,
/// then validates the raw solution: residual max |L(ρ)| < 10⁻⁹·‖L‖∞ and the
/// state invariants. A system whose kernel is more than one-dimensional
/// makes the replaced matrix exactly singular and is reported as
/// [`Error::DegenerateSteadyState`].
pub fn steady_state(l: &Superoperator) -> Result<DensityMatrix, Error> {
    let d = l.space.dim;
    let n = d * d;
    let mut a = l.matrix.clone();
    for col in 0..n {
        a[[0, col]] = Complex::new(0.0, 0.0);
    }
    for i in 0..d {
        a[[0, i + d * i]] = Complex::new(1.0, 0.0);
    }
    let mut b = Array1::zeros(n);
    b[0] = Complex::new(1.0, 0.0);
    let x = linalg::solve(&a, &b).map_err(|e| match e {
        Error::SingularMatrix { .. } => Error::DegenerateSteadyState,
        other => other,
    })?;
    let residual = l.matrix.dot(&x).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let scale = inf_norm(&l.matrix).max(1.0);
    if residual > STEADY_RESIDUAL_TOL * scale {
        return Err(Error::SolveFailed(format!(
            "steady-state residual {residual:.3e} exceeds {:.1e}·‖L‖",
            STEADY_RESIDUAL_TOL
        )));
    }
    finish_density(l.space, &unvec_density(&x, d), TRACE_TOL)
}

/// One collapse channel: jump operator, its adjoint, c†c and the rate.
struct CollapseChannel {
    c: Array2<Complex>,
    cd: Array2<Complex>,
    cdc: Array2<Complex>,
    rate: f64,
}

/// Matrix-free splitting solver state (see the module docs for the math).
struct SplitSolver {
    space: HilbertSpace,
    h: Array2<Complex>,
    collapse: Vec<CollapseChannel>,
    /// Eigenvectors of H_eff, their inverse, and the two adjoints.
    v: Array2<Complex>,
    vd: Array2<Complex>,
    w: Array2<Complex>,
    wd: Array2<Complex>,
    /// −i(λ_i − λ̄_j) − s, the diagonal action of S in the eigenbasis.
    denom: Array2<Complex>,
    shift: f64,
    /// ∞-norm upper bound of the generator, for the relative residual.
    lscale: f64,
}

impl SplitSolver {
    fn new(params: &SystemParams) -> Result<Self, Error> {
        let p = params.validated()?;
        let space = p.space()?;
        let h = hamiltonian(&p, space)?.matrix;
        let mut heff = h.clone();
        let mut collapse = Vec::new();
        let mut lscale = 2.0 * inf_norm(&h);
        for (c, rate) in [
            (annihilation_a(space).matrix, p.kappa_a),
            (annihilation_b(space).matrix, p.kappa_b),
            (sigma_minus(space).matrix, p.gamma),
        ] {
            let cd = adjoint(&c);
            let cdc = cd.dot(&c);
            heff = heff - cdc.mapv(|z| z * Complex::new(0.0, 0.5 * rate));
            lscale += 2.0 * rate * inf_norm(&cdc);
            collapse.push(CollapseChannel { c, cd, cdc, rate });
        }
        let (lam, v) = linalg::eig(&heff)?;
        let w = linalg::inv(&v).map_err(|e| match e {
            Error::SingularMatrix { .. } => {
                Error::SolveFailed("effective Hamiltonian is defective (eigenbasis singular)".into())
            }
            other => other,
        })?;
        let shift = SPLIT_SHIFT_FRACTION * p.kappa_a;
        let d = space.dim;
        let denom = Array2::from_shape_fn((d, d), |(i, j)| {
            Complex::new(0.0, -1.0) * (lam[i] - lam[j].conj()) - shift
        });
        Ok(SplitSolver {
            space,
            vd: adjoint(&v),
            wd: adjoint(&w),
            v,
            w,
            denom,
            shift,
            lscale: lscale.max(1.0),
            h,
            collapse,
        })
    }

    /// L(ρ) applied directly from the operator pieces (no dim² matrix).
    fn apply_liouvillian(&self, rho: &Array2<Complex>) -> Array2<Complex> {
        let minus_i = Complex::new(0.0, -1.0);
        let mut out = (self.h.dot(rho) - rho.dot(&self.h)).mapv(|z| minus_i * z);
        for ch in &self.collapse {
            if ch.rate == 0.0 {
                continue;
            }
            let jump = ch.c.dot(rho).dot(&ch.cd);
            let anti = ch.cdc.dot(rho) + rho.dot(&ch.cdc);
            out = out + jump.mapv(|z| z * ch.rate) - anti.mapv(|z| z * (0.5 * ch.rate));
        }
        out
    }

    /// Power iteration on ρ ↦ −S⁻¹K(ρ) from the vacuum, trace-normalized
    /// each step. Returns the raw (uncleaned) steady state after the
    /// residual check.
    fn solve(&self) -> Result<Array2<Complex>, Error> {
        let d = self.space.dim;
        let mut rho: Array2<Complex> = Array2::zeros((d, d));
        rho[[0, 0]] = Complex::new(1.0, 0.0);
        let mut settled = false;
        for _ in 0..SPLIT_MAX_ITERS {
            // K(ρ) = Σ rate·cρc† + s·ρ
            let mut y = rho.mapv(|z| z * self.shift);
            for ch in &self.collapse {
                if ch.rate > 0.0 {
                    y = y + ch.c.dot(&rho).dot(&ch.cd).mapv(|z| z * ch.rate);
                }
            }
            // −S⁻¹ y via the eigenbasis of H_eff
            let yt = self.w.dot(&y).dot(&self.wd);
            let xt = Array2::from_shape_fn((d, d), |(i, j)| -yt[[i, j]] / self.denom[[i, j]]);
            let mut next = self.v.dot(&xt).dot(&self.vd);
            let tr = trace(&next);
            if tr.norm() < 1e-300 {
                return Err(Error::SolveFailed("power iteration lost the trace".into()));
            }
            next.mapv_inplace(|z| z / tr);
            let delta = max_abs(&(&next - &rho));
            rho = next;
            if delta < SPLIT_DELTA_TOL {
                settled = true;
                break;
            }
        }
        if !settled {
            return Err(Error::SolveFailed(format!(
                "power iteration did not settle within {SPLIT_MAX_ITERS} steps"
            )));
        }
        let residual = max_abs(&self.apply_liouvillian(&rho));
        if residual > STEADY_RESIDUAL_TOL * self.lscale {
            return Err(Error::SolveFailed(format!(
                "splitting residual {residual:.3e} exceeds {:.1e}·‖L‖",
                STEADY_RESIDUAL_TOL
            )));
        }
        Ok(rho)
    }
}

/// Steady state without forming the dense superoperator; the only route for
/// truncations beyond [`crate::model::MAX_DENSE_DIM`]. Agrees with
/// [`steady_state`] to solver precision wherever both apply.
pub fn steady_state_structured(params: &SystemParams) -> Result<DensityMatrix, Error> {
    let solver = SplitSolver::new(params)?;
    let rho = solver.solve()?;
    finish_density(solver.space, &rho, TRACE_TOL)
}

/// Conservative RK4 step size for this generator: 0.01/‖L‖∞ (the ∞-norm
/// bounds the spectral radius).
pub fn stable_dt(l: &Superoperator) -> f64 {
    0.01 / inf_norm(&l.matrix).max(1e-300)
}

/// Fixed-step RK4 integration of ρ̇ = L(ρ) for `t_final` (units of 1/κ).
///
/// The step count is ⌈t_final/dt⌉ with the step size adjusted to land
/// exactly on `t_final`. The trace is monitored every step; drifting beyond
/// 10⁻⁸ aborts with [`Error::IntegrationUnstable`]. Callers should keep
/// dt ≤ [`stable_dt`].
pub fn evolve(
    rho0: &DensityMatrix,
    l: &Superoperator,
    t_final: f64,
    dt: f64,
) -> Result<DensityMatrix, Error> {
    if rho0.space != l.space {
        return Err(Error::SpaceMismatch {
            expected: l.space.dim,
            found: rho0.space.dim,
        });
    }
    if !(t_final > 0.0) || !(dt > 0.0) {
        return Err(Error::InvalidParams(format!(
            "evolve needs t_final > 0 and dt > 0, got {t_final} and {dt}"
        )));
    }
    let d = l.space.dim;
    let steps = (t_final / dt).ceil().max(1.0) as usize;
    let h = t_final / steps as f64;
    let mut v = vec_density(&rho0.matrix);
    let vec_trace =
        |v: &Array1<Complex>| -> Complex { (0..d).map(|i| v[i + d * i]).sum() };
    for _ in 0..steps {
        let k1 = l.matrix.dot(&v);
        let k2 = l.matrix.dot(&(&v + &k1.mapv(|z| z * (h / 2.0))));
        let k3 = l.matrix.dot(&(&v + &k2.mapv(|z| z * (h / 2.0))));
        let k4 = l.matrix.dot(&(&v + &k3.mapv(|z| z * h)));
        let sum = k1 + k2.mapv(|z| z * 2.0) + k3.mapv(|z| z * 2.0) + k4;
        v = v + sum.mapv(|z| z * (h / 6.0));
        let drift = (vec_trace(&v) - 1.0).norm();
        if drift > TRACE_DRIFT_LIMIT {
            return Err(Error::IntegrationUnstable {
                drift,
                limit: TRACE_DRIFT_LIMIT,
            });
        }
    }
    finish_density(l.space, &unvec_density(&v, d), TRACE_DRIFT_LIMIT)
}

/// g²(0) = tr(ρ a†a†aa)/tr(ρ a†a)² of mode a.
///
/// The two traces must be real up to a 10⁻¹⁰ relative imaginary residue;
/// an unpopulated mode (⟨a†a⟩ ≤ 10⁻³⁰) is [`Error::NoPhotons`].
pub fn g2_zero(rho: &DensityMatrix) -> Result<f64, Error> {
    let space = rho.space;
    let a = annihilation_a(space);
    let ad = dagger(&a);
    let den = rho.expectation(&matmul(&ad, &a)?)?;
    if !(den.re > PHOTON_FLOOR) {
        return Err(Error::NoPhotons(den.re));
    }
    let num_op = matmul(&matmul(&ad, &ad)?, &matmul(&a, &a)?)?;
    let num = rho.expectation(&num_op)?;
    for z in [num, den] {
        if z.norm() > 0.0 && z.im.abs() > IMAG_RESIDUE_TOL * z.norm() {
            return Err(Error::SolveFailed(format!(
                "imaginary residue {:.3e} in a g²(0) trace",
                z.im
            )));
        }
    }
    // ρ is positive semidefinite after cleanup, so the numerator
    // tr(ρ (aa)†(aa)) can only dip below zero by roundoff
    Ok(num.re.max(0.0) / (den.re * den.re))
}

fn report_from(rho: &DensityMatrix, converged: bool) -> Result<ObservableReport, Error> {
    let space = rho.space;
    let a = annihilation_a(space);
    let b = annihilation_b(space);
    let sm = sigma_minus(space);
    let n_a = rho.expectation(&matmul(&dagger(&a), &a)?)?.re;
    let n_b = rho.expectation(&matmul(&dagger(&b), &b)?)?.re;
    let p_e = rho.expectation(&matmul(&dagger(&sm), &sm)?)?.re;
    let g2_a = g2_zero(rho)?;
    Ok(ObservableReport {
        n_a: n_a.max(0.0),
        n_b: n_b.max(0.0),
        p_e: p_e.clamp(0.0, 1.0),
        g2_a,
        cutoff_used: (space.n_max_a, space.n_max_b),
        converged,
    })
}

/// Steady-state observables at the parameter set's own cutoffs.
pub fn observables(params: &SystemParams) -> Result<ObservableReport, Error> {
    let rho = steady_state_structured(params)?;
    report_from(&rho, true)
}

/// Observables with truncation control: re-evaluate at square cutoffs
/// 4, 6, 8, 12 until g²(0) changes by less than `rel_tol` between successive
/// rungs. Reports the last evaluation with `converged=false` if even the
/// 12-photon cutoff does not settle; that is a report, not an error.
pub fn converged_g2(params: &SystemParams, rel_tol: f64) -> Result<ObservableReport, Error> {
    if !(rel_tol > 0.0 && rel_tol <= 0.1) {
        return Err(Error::InvalidTolerance(rel_tol));
    }
    let p = params.validated()?;
    let mut prev: Option<f64> = None;
    let mut last: Option<ObservableReport> = None;
    for n in CONVERGENCE_LADDER {
        let rep = observables(&p.with_cutoffs(n, n))?;
        if let Some(pg) = prev {
            let denom = rep.g2_a.abs().max(f64::MIN_POSITIVE);
            if (rep.g2_a - pg).abs() / denom < rel_tol {
                return Ok(ObservableReport {
                    converged: true,
                    ..rep
                });
            }
        }
        prev = Some(rep.g2_a);
        last = Some(rep);
    }
    Ok(ObservableReport {
        converged: false,
        ..last.expect("ladder is non-empty")
    })
}
