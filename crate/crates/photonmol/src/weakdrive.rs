//! Weak-drive amplitude hierarchy: an independent oracle for the full
//! master-equation solver, and the microscope for the interference mechanism
//! behind the antibunching.
//!
//! At weak driving the system stays close to |0,0,g⟩ and the state can be
//! expanded on the basis truncated at two total excitations,
//!
//! ```text
//! index:  0        1        2        3        4        5        6        7        8
//! state:  |0,0,g⟩  |1,0,g⟩  |0,1,g⟩  |0,0,e⟩  |2,0,g⟩  |1,1,g⟩  |0,2,g⟩  |1,0,e⟩  |0,1,e⟩
//! ```
//!
//! with amplitudes C₀…C₈. Dissipation enters through the non-Hermitian
//! effective Hamiltonian H_eff = H − (i/2)(κ_a a†a + κ_b b†b + γ σ†σ).
//! Projecting the stationary Schrödinger equation onto each basis state and
//! keeping the leading order in the drive (each excitation manifold is fed
//! only from the one below; back-action of higher manifolds is dropped)
//! gives two small linear systems. With the complex detunings
//!
//! ```text
//! δ_a = Δ_a − iκ_a/2,   δ_b = Δ_b − iκ_b/2,   δ_σ = Δ_b − iγ/2,
//! E_a' = E_a e^{−iθ}
//! ```
//!
//! the one-excitation block reads
//!
//! ```text
//! ⎡δ_a  J   0 ⎤ ⎡C₁⎤     ⎡E_a'⎤
//! ⎢J    δ_b g ⎥ ⎢C₂⎥ = − ⎢E_b ⎥
//! ⎣0    g   δ_σ⎦ ⎣C₃⎦     ⎣0  ⎦
//! ```
//!
//! and the two-excitation block (order C₄, C₅, C₆, C₇, C₈)
//!
//! ```text
//! ⎡2δ_a  √2J      0     0      0    ⎤⎡C₄⎤     ⎡√2 E_a' C₁     ⎤
//! ⎢√2J   δ_a+δ_b  √2J   g      0    ⎥⎢C₅⎥     ⎢E_a' C₂ + E_b C₁⎥
//! ⎢0     √2J      2δ_b  0      √2g  ⎥⎢C₆⎥ = − ⎢√2 E_b C₂      ⎥
//! ⎢0     g        0     δ_a+δ_σ J   ⎥⎢C₇⎥     ⎢E_a' C₃        ⎥
//! ⎣0     0        √2g   J      δ_b+δ_σ⎦⎣C₈⎦   ⎣E_b C₃         ⎦
//! ```
//!
//! # Gauge and sign convention
//!
//! C₀ is fixed to exactly 1 (the state is *not* normalized); all other
//! amplitudes carry the drive order explicitly. The global sign/phase is
//! pinned by the single-mode case g = J = E_b = 0, Δ = 0, where the
//! equations give C₁ = −E_a'/δ_a = −2i·E_a·e^{−iθ}/κ, i.e.
//! |C₁|² = (2E_a/κ)² — the classic driven-damped-cavity amplitude.
//!
//! In this gauge g²(0) ≈ 2|C₄|²/|C₁|⁴, and the suppression of C₄ by
//! destructive interference between the excitation paths that feed |2,0,g⟩
//! (direct drive |1,0,g⟩ → |2,0,g⟩ vs tunneling |1,1,g⟩ → |2,0,g⟩) is the
//! unconventional-blockade mechanism; [`path_decomposition`] splits C₄ into
//! exactly those two contributions.

use ndarray::{array, Array1, Array2};
use serde::Serialize;

use crate::model::SystemParams;
use crate::solver::ObservableReport;
use crate::{linalg, Complex, Error};

/// Human-readable labels of the two-excitation basis, in amplitude order.
pub const BASIS_LABELS: [&str; 9] = [
    "|0,0,g>", "|1,0,g>", "|0,1,g>", "|0,0,e>", "|2,0,g>", "|1,1,g>", "|0,2,g>", "|1,0,e>",
    "|0,1,e>",
];

/// Stationary amplitudes on the two-excitation basis, C₀ gauge-fixed to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeVector {
    /// Amplitudes indexed as in [`BASIS_LABELS`].
    pub c: [Complex; 9],
}

/// Interference report: the nine amplitudes and the split of the two-photon
/// amplitude C₄ into its feeding paths.
#[derive(Debug, Clone, Serialize)]
pub struct PathReport {
    /// Basis labels, same order as `amplitudes`.
    pub basis: [&'static str; 9],
    /// The stationary amplitudes.
    pub amplitudes: [Complex; 9],
    /// C₄ contribution from the drive acting on |1,0,g⟩.
    pub direct_drive: Complex,
    /// C₄ contribution from a photon tunneling out of |1,1,g⟩.
    pub tunneling_mediated: Complex,
    /// Total two-photon amplitude (= direct + tunneling).
    pub two_photon_total: Complex,
    /// g²(0) in the weak-drive approximation.
    pub g2: f64,
}

struct ComplexDetunings {
    da: Complex,
    db: Complex,
    ds: Complex,
    ea: Complex,
    eb: Complex,
    g: Complex,
    j: Complex,
}

fn detunings(p: &SystemParams) -> ComplexDetunings {
    let i = Complex::new(0.0, 1.0);
    ComplexDetunings {
        da: Complex::new(p.delta_a, 0.0) - i * (0.5 * p.kappa_a),
        db: Complex::new(p.delta_b, 0.0) - i * (0.5 * p.kappa_b),
        ds: Complex::new(p.delta_b, 0.0) - i * (0.5 * p.gamma),
        ea: Complex::new(p.e_a, 0.0) * (Complex::new(0.0, -p.theta)).exp(),
        eb: Complex::new(p.e_b, 0.0),
        g: Complex::new(p.g, 0.0),
        j: Complex::new(p.j, 0.0),
    }
}

fn manifold_solve(m: &Array2<Complex>, rhs: &Array1<Complex>) -> Result<Array1<Complex>, Error> {
    linalg::solve(m, rhs).map_err(|e| match e {
        Error::SingularMatrix { .. } => Error::DegenerateManifold,
        other => other,
    })
}

/// Solve the hierarchy: one-excitation amplitudes from C₀ = 1, then
/// two-excitation amplitudes from the one-excitation block.
pub fn steady_amplitudes(params: &SystemParams) -> Result<AmplitudeVector, Error> {
    let p = params.validated()?;
    let d = detunings(&p);
    let zero = Complex::new(0.0, 0.0);
    let sq2 = Complex::new(2.0f64.sqrt(), 0.0);

    let m1 = array![
        [d.da, d.j, zero],
        [d.j, d.db, d.g],
        [zero, d.g, d.ds]
    ];
    let rhs1 = array![-d.ea, -d.eb, zero];
    let one = manifold_solve(&m1, &rhs1)?;
    let (c1, c2, c3) = (one[0], one[1], one[2]);

    let m2 = array![
        [2.0 * d.da, sq2 * d.j, zero, zero, zero],
        [sq2 * d.j, d.da + d.db, sq2 * d.j, d.g, zero],
        [zero, sq2 * d.j, 2.0 * d.db, zero, sq2 * d.g],
        [zero, d.g, zero, d.da + d.ds, d.j],
        [zero, zero, sq2 * d.g, d.j, d.db + d.ds]
    ];
    let rhs2 = array![
        -sq2 * d.ea * c1,
        -(d.ea * c2 + d.eb * c1),
        -sq2 * d.eb * c2,
        -d.ea * c3,
        -d.eb * c3
    ];
    let two = manifold_solve(&m2, &rhs2)?;

    Ok(AmplitudeVector {
        c: [
            Complex::new(1.0, 0.0),
            c1,
            c2,
            c3,
            two[0],
            two[1],
            two[2],
            two[3],
            two[4],
        ],
    })
}

/// g²(0) ≈ 2|C₄|²/|C₁|⁴ in the C₀ = 1 gauge.
pub fn g2_weakdrive(amps: &AmplitudeVector) -> Result<f64, Error> {
    let c1_sq = amps.c[1].norm_sqr();
    if !(c1_sq > 1e-30) {
        return Err(Error::NoPhotons(c1_sq));
    }
    Ok(2.0 * amps.c[4].norm_sqr() / (c1_sq * c1_sq))
}

/// The two-photon amplitude C₄ — the quantity whose interference zero the
/// optimizers chase.
pub fn two_photon_amplitude(params: &SystemParams) -> Result<Complex, Error> {
    Ok(steady_amplitudes(params)?.c[4])
}

/// Split C₄ into its two feeding paths using the |2,0,g⟩ projection
/// 2δ_a·C₄ + √2J·C₅ + √2E_a'·C₁ = 0.
pub fn path_decomposition(params: &SystemParams) -> Result<PathReport, Error> {
    let p = params.validated()?;
    let amps = steady_amplitudes(&p)?;
    let d = detunings(&p);
    let sq2 = 2.0f64.sqrt();
    let direct = -sq2 * d.ea * amps.c[1] / (2.0 * d.da);
    let tunneling = -sq2 * d.j * amps.c[5] / (2.0 * d.da);
    Ok(PathReport {
        basis: BASIS_LABELS,
        amplitudes: amps.c,
        direct_drive: direct,
        tunneling_mediated: tunneling,
        two_photon_total: amps.c[4],
        g2: g2_weakdrive(&amps)?,
    })
}

/// Observables evaluated on the (normalized) two-excitation state; the
/// weak-drive counterpart of the full solver's report. `cutoff_used` is
/// labeled (2, 2) for the two-excitation manifold.
pub fn observables_weakdrive(params: &SystemParams) -> Result<ObservableReport, Error> {
    let amps = steady_amplitudes(params)?;
    let w: Vec<f64> = amps.c.iter().map(|z| z.norm_sqr()).collect();
    let norm: f64 = w.iter().sum();
    let n_a = (w[1] + 2.0 * w[4] + w[5] + w[7]) / norm;
    let n_b = (w[2] + w[5] + 2.0 * w[6] + w[8]) / norm;
    let p_e = (w[3] + w[7] + w[8]) / norm;
    Ok(ObservableReport {
        n_a,
        n_b,
        p_e,
        g2_a: g2_weakdrive(&amps)?,
        cutoff_used: (2, 2),
        converged: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::converged_g2;
    use approx::assert_abs_diff_eq;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn test_no_drive_leaves_only_vacuum() {
        let p = SystemParams {
            e_a: 0.0,
            e_b: 0.0,
            ..Default::default()
        };
        let amps = steady_amplitudes(&p).unwrap();
        assert_eq!(amps.c[0], Complex::new(1.0, 0.0));
        for z in &amps.c[1..] {
            assert_eq!(z.norm_sqr(), 0.0);
        }
    }

    #[test]
    fn test_single_mode_phase_convention() {
        // g = J = E_b = 0, Δ = 0: C₁ = −2i·E_a·e^{−iθ}/κ and the coherent
        // two-photon ratio C₄ = C₁²/√2, hence g² = 1.
        let p = SystemParams {
            g: 0.0,
            j: 0.0,
            e_a: 0.02,
            e_b: 0.0,
            theta: 0.7,
            ..Default::default()
        };
        let amps = steady_amplitudes(&p).unwrap();
        let want = Complex::new(0.0, -2.0 * 0.02) * Complex::new(0.0, -0.7).exp();
        assert_abs_diff_eq!(amps.c[1].re, want.re, epsilon = 1e-15);
        assert_abs_diff_eq!(amps.c[1].im, want.im, epsilon = 1e-15);
        assert_abs_diff_eq!(amps.c[1].norm_sqr(), (2.0 * 0.02f64).powi(2), epsilon = 1e-15);
        let coherent = amps.c[1] * amps.c[1] / 2.0f64.sqrt();
        assert_abs_diff_eq!(amps.c[4].re, coherent.re, epsilon = 1e-15);
        assert_abs_diff_eq!(amps.c[4].im, coherent.im, epsilon = 1e-15);
        assert_abs_diff_eq!(g2_weakdrive(&amps).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn test_vacuum_dominates_at_weak_drive() {
        let p = SystemParams {
            e_a: 0.01,
            ..Default::default()
        };
        let amps = steady_amplitudes(&p).unwrap();
        let norm: f64 = amps.c.iter().map(|z| z.norm_sqr()).sum();
        assert!(amps.c[0].norm_sqr() / norm > 0.99);
    }

    #[test]
    fn test_drive_scaling_orders_exact() {
        let base = SystemParams {
            e_a: 0.01,
            e_b: 0.007,
            theta: 1.1,
            j: 1.3,
            ..Default::default()
        };
        let doubled = SystemParams {
            e_a: 0.02,
            e_b: 0.014,
            ..base
        };
        let a1 = steady_amplitudes(&base).unwrap();
        let a2 = steady_amplitudes(&doubled).unwrap();
        for k in 1..=3 {
            let ratio = a2.c[k] / a1.c[k];
            assert_abs_diff_eq!(ratio.re, 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(ratio.im, 0.0, epsilon = 1e-12);
        }
        for k in 4..9 {
            let ratio = a2.c[k] / a1.c[k];
            assert_abs_diff_eq!(ratio.re, 4.0, epsilon = 1e-12);
            assert_abs_diff_eq!(ratio.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn test_phase_periodicity_and_single_drive_phase_invariance() {
        let p = SystemParams {
            theta: 0.8,
            e_b: 0.05,
            ..Default::default()
        };
        let q = SystemParams {
            theta: 0.8 + 2.0 * PI,
            ..p
        };
        let ap = steady_amplitudes(&p).unwrap();
        let aq = steady_amplitudes(&q).unwrap();
        for k in 0..9 {
            assert!((ap.c[k] - aq.c[k]).norm() <= 1e-12 * ap.c[k].norm().max(1.0));
        }
        // single drive: θ is a global phase, g² cannot depend on it
        let s0 = SystemParams {
            e_b: 0.0,
            theta: 0.0,
            ..Default::default()
        };
        let s1 = SystemParams {
            theta: 1.234,
            ..s0
        };
        let g0 = g2_weakdrive(&steady_amplitudes(&s0).unwrap()).unwrap();
        let g1 = g2_weakdrive(&steady_amplitudes(&s1).unwrap()).unwrap();
        assert!((g0 - g1).abs() <= 1e-12 * g0);
    }

    #[test]
    fn test_drive_on_b_only_without_tunneling() {
        // J = 0 and drive on b only: mode a can never populate...
        let p = SystemParams {
            j: 0.0,
            e_a: 0.0,
            e_b: 0.05,
            ..Default::default()
        };
        let amps = steady_amplitudes(&p).unwrap();
        for k in [1usize, 4, 5, 7] {
            assert_eq!(amps.c[k].norm_sqr(), 0.0, "C{k} should vanish");
        }
        assert!(amps.c[2].norm_sqr() > 0.0);
        assert!(matches!(g2_weakdrive(&amps), Err(Error::NoPhotons(_))));
        // ...until tunneling is switched on
        let q = SystemParams { j: 1.0, ..p };
        let amps_j = steady_amplitudes(&q).unwrap();
        assert!(amps_j.c[1].norm_sqr() > 0.0);
    }

    #[test]
    fn test_degenerate_manifold_reported() {
        // δ_σ = 0 with g = 0 makes the one-excitation block exactly singular
        let p = SystemParams {
            g: 0.0,
            gamma: 0.0,
            delta_b: 0.0,
            e_a: 0.1,
            ..Default::default()
        };
        assert!(matches!(
            steady_amplitudes(&p),
            Err(Error::DegenerateManifold)
        ));
    }

    #[test]
    fn test_coupling_sweep_minimum_near_interference_zero() {
        // strong-coupling single-drive landscape: the antibunching optimum
        // sits near g = 1.1κ (J = 3κ, Δ = 0)
        let mut best = (f64::INFINITY, 0.0);
        let mut g = 0.5;
        while g <= 3.0 {
            let p = SystemParams {
                g,
                e_a: 0.01,
                ..Default::default()
            };
            let val = g2_weakdrive(&steady_amplitudes(&p).unwrap()).unwrap();
            if val < best.0 {
                best = (val, g);
            }
            g += 0.01;
        }
        assert!(
            (best.1 - 1.1).abs() <= 0.1,
            "argmin g = {:.3} too far from 1.1",
            best.1
        );
        assert!(best.0 < 1e-4);
    }

    #[test]
    fn test_phase_sweep_minimum_at_three_half_pi() {
        // double drive, J = 0.9κ: the two-photon amplitude dips at θ = 1.5π
        let mut best = (f64::INFINITY, 0.0);
        for k in 0..720 {
            let theta = 2.0 * PI * (k as f64) / 720.0;
            let p = SystemParams {
                j: 0.9,
                theta,
                e_a: 0.01,
                e_b: 0.01,
                ..Default::default()
            };
            let c4 = two_photon_amplitude(&p).unwrap();
            if c4.norm() < best.0 {
                best = (c4.norm(), theta);
            }
        }
        assert!(
            (best.1 - 1.5 * PI).abs() <= 0.05 * PI,
            "argmin θ = {:.4} not at 1.5π",
            best.1
        );
    }

    #[test]
    fn test_path_decomposition_sums_to_total() {
        let p = SystemParams {
            j: 0.9,
            theta: 1.5 * PI,
            e_a: 0.01,
            e_b: 0.01,
            ..Default::default()
        };
        let rep = path_decomposition(&p).unwrap();
        let sum = rep.direct_drive + rep.tunneling_mediated;
        assert!((sum - rep.two_photon_total).norm() < 1e-15);
        // near the interference zero the individual paths dwarf their sum
        assert!(rep.direct_drive.norm() > 5.0 * rep.two_photon_total.norm());
    }

    #[test]
    fn test_agrees_with_full_solver_at_weak_drive() {
        let p = SystemParams {
            e_a: 0.01,
            n_max_a: 4,
            n_max_b: 4,
            ..Default::default()
        };
        let weak = g2_weakdrive(&steady_amplitudes(&p).unwrap()).unwrap();
        let full = crate::solver::observables(&p).unwrap().g2_a;
        let rel = (weak - full).abs() / full;
        assert!(rel < 0.05, "weak {weak:.4e} vs full {full:.4e}: {rel:.3}");
    }

    #[test]
    fn test_weakdrive_report_matches_full_occupations() {
        let p = SystemParams {
            e_a: 0.01,
            n_max_a: 4,
            n_max_b: 4,
            ..Default::default()
        };
        let weak = observables_weakdrive(&p).unwrap();
        let full = crate::solver::observables(&p).unwrap();
        assert!((weak.n_a - full.n_a).abs() / full.n_a < 0.02);
        assert!((weak.p_e - full.p_e).abs() / full.p_e < 0.02);
        assert_eq!(weak.cutoff_used, (2, 2));
    }

    #[test]
    fn test_converged_ladder_against_weakdrive_after_rescaling() {
        // the two oracles approach each other as the drive is scaled down;
        // at the default operating point the residual offset is percent-level
        let p = SystemParams::default();
        let full = converged_g2(&p, 0.01).unwrap();
        let weak = g2_weakdrive(&steady_amplitudes(&p).unwrap()).unwrap();
        let rel = (weak - full.g2_a).abs() / full.g2_a;
        assert!(rel < 0.2, "rel = {rel:.3}");
    }
}
