//! Physical parameters, rotating-frame Hamiltonian, and the Lindblad
//! generator of the photonic molecule.
//!
//! The Hamiltonian (in the frame rotating at the common drive frequency, all
//! energies in units of the cavity decay rate κ ≡ κ_a) is
//!
//! ```text
//! H = Δ_a a†a + Δ_b b†b + Δ_b σ†σ
//!   + g (σ† b + b† σ) + J (a† b + b† a)
//!   + E_a (a† e^{-iθ} + a e^{iθ}) + E_b (b† + b)
//! ```
//!
//! and the density matrix obeys ρ̇ = −i[H, ρ] + Σ_c (rate_c/2)·(2 cρc† −
//! c†cρ − ρc†c) with collapse operators a (rate κ_a), b (rate κ_b) and σ⁻
//! (rate γ).
//!
//! # Vectorization convention
//!
//! Superoperators act on column-stacked density matrices: the vector index of
//! element ρ[i, j] is v = i + dim·j. Under this convention
//! vec(AρB) = (Bᵀ ⊗ A)·vec(ρ) with the ordinary Kronecker product, so
//!
//! ```text
//! L = −i (I⊗H − Hᵀ⊗I)ᵀ-convention  →  coded as
//! L = −i (kron(I, H) − kron(Hᵀ, I))
//!   + Σ_c rate·kron(conj(c), c) − (rate/2)(kron(I, c†c) + kron((c†c)ᵀ, I))
//! ```
//!
//! where `kron`'s *first* factor indexes the slow (column-of-ρ) digit.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::hilbert::{
    add, annihilation_a, annihilation_b, dagger, matmul, scale, sigma_minus, HilbertSpace,
    Operator,
};
use crate::{Complex, Error};

/// Largest Hilbert-space dimension for which dense dim²×dim² superoperator
/// matrices are built (80 → at most 6400² complex entries ≈ 0.7 GB).
/// Larger systems must use the matrix-free steady-state path in `solver`.
pub const MAX_DENSE_DIM: usize = 80;

/// Full parameter set of the photonic molecule, all rates and energies in
/// units of κ ≡ κ_a.
///
/// Defaults reproduce the headline operating point of the strongly coupled
/// molecule: resonant drive on cavity `a` only, g = κ, J = 3κ,
/// E_a = 0.0625κ and γ = 0.0625κ (i.e. E_a/2π = γ/2π = 1 GHz for
/// κ/2π = 16 GHz).
/// Serialization is a flat JSON object. Omitted fields take the defaults
/// above; unknown keys are rejected so typos fail loudly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemParams {
    /// Cavity-a–laser detuning Δ_a.
    pub delta_a: f64,
    /// Cavity-b/QD–laser detuning Δ_b (the dot is resonant with cavity b).
    pub delta_b: f64,
    /// QD–cavity-b coupling strength g.
    pub g: f64,
    /// Intercavity tunneling strength J.
    pub j: f64,
    /// Drive amplitude on cavity a.
    pub e_a: f64,
    /// Drive amplitude on cavity b.
    pub e_b: f64,
    /// Relative phase θ between the two drives, radians in [0, 2π).
    pub theta: f64,
    /// Decay rate of cavity a (1 by definition of the unit system).
    pub kappa_a: f64,
    /// Decay rate of cavity b.
    pub kappa_b: f64,
    /// QD spontaneous-emission rate γ.
    pub gamma: f64,
    /// Fock cutoff of mode a.
    pub n_max_a: usize,
    /// Fock cutoff of mode b.
    pub n_max_b: usize,
}

impl Default for SystemParams {
    fn default() -> Self {
        SystemParams {
            delta_a: 0.0,
            delta_b: 0.0,
            g: 1.0,
            j: 3.0,
            e_a: 0.0625,
            e_b: 0.0,
            theta: 0.0,
            kappa_a: 1.0,
            kappa_b: 1.0,
            gamma: 0.0625,
            n_max_a: 6,
            n_max_b: 6,
        }
    }
}

impl SystemParams {
    /// Check the parameter invariants and normalize θ into [0, 2π).
    ///
    /// Every public computation in this crate funnels its parameters through
    /// here, so out-of-range inputs are caught at the boundary and the phase
    /// is always canonical.
    pub fn validated(mut self) -> Result<Self, Error> {
        if !(self.kappa_a > 0.0) {
            return Err(Error::InvalidParams(format!(
                "kappa_a = {} must be > 0",
                self.kappa_a
            )));
        }
        if !(self.kappa_b > 0.0) {
            return Err(Error::InvalidParams(format!(
                "kappa_b = {} must be > 0",
                self.kappa_b
            )));
        }
        for (name, v) in [
            ("gamma", self.gamma),
            ("e_a", self.e_a),
            ("e_b", self.e_b),
            ("g", self.g),
            ("j", self.j),
        ] {
            if !(v >= 0.0) {
                return Err(Error::InvalidParams(format!("{name} = {v} must be >= 0")));
            }
        }
        if !self.theta.is_finite() {
            return Err(Error::InvalidParams(format!(
                "theta = {} must be finite",
                self.theta
            )));
        }
        let tau = 2.0 * std::f64::consts::PI;
        self.theta = self.theta.rem_euclid(tau);
        // rem_euclid can return exactly 2π when the input is a tiny negative
        // number; fold that back to 0.
        if self.theta >= tau {
            self.theta = 0.0;
        }
        // The space constructor re-checks, but failing early gives the
        // caller the right error before any allocation.
        if self.n_max_a < 1 {
            return Err(Error::InvalidTruncation(self.n_max_a));
        }
        if self.n_max_b < 1 {
            return Err(Error::InvalidTruncation(self.n_max_b));
        }
        Ok(self)
    }

    /// The Hilbert space at this parameter set's cutoffs.
    pub fn space(&self) -> Result<HilbertSpace, Error> {
        crate::hilbert::make_space(self.n_max_a, self.n_max_b)
    }

    /// Copy of `self` with both cutoffs replaced (used by the convergence
    /// ladder).
    pub fn with_cutoffs(mut self, n_max_a: usize, n_max_b: usize) -> Self {
        self.n_max_a = n_max_a;
        self.n_max_b = n_max_b;
        self
    }
}

/// Rotating-frame Hamiltonian on the given space.
///
/// The space's cutoffs may differ from `params.n_max_a/b`; the space wins
/// (this is how the convergence ladder re-evaluates one parameter set at
/// several truncations). The returned matrix is Hermitian to machine
/// precision by construction.
pub fn hamiltonian(params: &SystemParams, space: HilbertSpace) -> Result<Operator, Error> {
    let p = params.validated()?;
    let a = annihilation_a(space);
    let b = annihilation_b(space);
    let sm = sigma_minus(space);
    let ad = dagger(&a);
    let bd = dagger(&b);
    let smd = dagger(&sm);

    let re = |x: f64| Complex::new(x, 0.0);
    let mut h = scale(re(p.delta_a), &matmul(&ad, &a)?);
    h = add(&h, &scale(re(p.delta_b), &matmul(&bd, &b)?))?;
    h = add(&h, &scale(re(p.delta_b), &matmul(&smd, &sm)?))?;
    h = add(
        &h,
        &scale(re(p.g), &add(&matmul(&smd, &b)?, &matmul(&bd, &sm)?)?),
    )?;
    h = add(
        &h,
        &scale(re(p.j), &add(&matmul(&ad, &b)?, &matmul(&bd, &a)?)?),
    )?;
    let phase = Complex::new(0.0, -p.theta).exp();
    h = add(
        &h,
        &add(
            &scale(re(p.e_a) * phase, &ad),
            &scale(re(p.e_a) * phase.conj(), &a),
        )?,
    )?;
    h = add(&h, &scale(re(p.e_b), &add(&bd, &b)?))?;
    Ok(h)
}

/// Superoperator: dense dim²×dim² matrix acting on column-stacked density
/// matrices (see the module docs for the convention).
#[derive(Debug, Clone)]
pub struct Superoperator {
    /// Underlying Hilbert space.
    pub space: HilbertSpace,
    /// dim²×dim² generator matrix.
    pub matrix: Array2<Complex>,
}

impl Superoperator {
    /// Apply to a density matrix: unvec(L · vec(ρ)).
    pub fn apply(&self, rho: &Array2<Complex>) -> Result<Array2<Complex>, Error> {
        let d = self.space.dim;
        if rho.nrows() != d || rho.ncols() != d {
            return Err(Error::SpaceMismatch {
                expected: d,
                found: rho.nrows(),
            });
        }
        let v = self.matrix.dot(&vec_density(rho));
        Ok(unvec_density(&v, d))
    }

    /// Conjugate transpose (the Heisenberg-picture generator).
    pub fn adjoint(&self) -> Superoperator {
        Superoperator {
            space: self.space,
            matrix: self.matrix.t().mapv(|z| z.conj()),
        }
    }
}

/// Column-stack a density matrix: out[i + dim·j] = ρ[i, j].
pub fn vec_density(rho: &Array2<Complex>) -> Array1<Complex> {
    let d = rho.nrows();
    Array1::from_shape_fn(d * d, |v| rho[[v % d, v / d]])
}

/// Inverse of [`vec_density`].
pub fn unvec_density(v: &Array1<Complex>, dim: usize) -> Array2<Complex> {
    Array2::from_shape_fn((dim, dim), |(i, j)| v[i + dim * j])
}

/// Kronecker product; the first factor indexes the slow digit of the
/// composite index (row = x_row·ny + y_row).
pub(crate) fn kron(x: &Array2<Complex>, y: &Array2<Complex>) -> Array2<Complex> {
    let (nx, mx) = x.dim();
    let (ny, my) = y.dim();
    let mut out = Array2::zeros((nx * ny, mx * my));
    for ((xr, xc), xv) in x.indexed_iter() {
        if xv.norm_sqr() == 0.0 {
            continue;
        }
        for ((yr, yc), yv) in y.indexed_iter() {
            out[[xr * ny + yr, xc * my + yc]] = xv * yv;
        }
    }
    out
}

fn check_dense_budget(space: HilbertSpace) -> Result<(), Error> {
    if space.dim > MAX_DENSE_DIM {
        return Err(Error::DimensionTooLarge {
            dim: space.dim,
            max: MAX_DENSE_DIM,
        });
    }
    Ok(())
}

/// Lindblad dissipator for collapse operator `c`:
/// (rate/2)·(2 cρc† − c†cρ − ρc†c) as a dense superoperator.
pub fn dissipator(c: &Operator, rate: f64) -> Result<Superoperator, Error> {
    if !(rate >= 0.0) {
        return Err(Error::InvalidRate(rate));
    }
    check_dense_budget(c.space)?;
    let d = c.space.dim;
    let eye = Array2::<Complex>::eye(d);
    let cd_c = matmul(&dagger(c), c)?.matrix;
    let jump = kron(&c.matrix.mapv(|z| z.conj()), &c.matrix);
    let anti = &kron(&eye, &cd_c) + &kron(&cd_c.t().to_owned(), &eye);
    let matrix = jump.mapv(|z| z * rate) - anti.mapv(|z| z * (rate / 2.0));
    Ok(Superoperator {
        space: c.space,
        matrix,
    })
}

/// Full Lindblad generator: −i[H, ·] plus photon loss on both cavities and
/// QD spontaneous emission.
pub fn liouvillian(params: &SystemParams, space: HilbertSpace) -> Result<Superoperator, Error> {
    let p = params.validated()?;
    check_dense_budget(space)?;
    let d = space.dim;
    let eye = Array2::<Complex>::eye(d);
    let h = hamiltonian(&p, space)?.matrix;
    let minus_i = Complex::new(0.0, -1.0);
    let mut matrix =
        (&kron(&eye, &h) - &kron(&h.t().to_owned(), &eye)).mapv(|z| minus_i * z);
    for (c, rate) in [
        (annihilation_a(space), p.kappa_a),
        (annihilation_b(space), p.kappa_b),
        (sigma_minus(space), p.gamma),
    ] {
        matrix = matrix + dissipator(&c, rate)?.matrix;
    }
    Ok(Superoperator { space, matrix })
}
