//! Truncated composite Hilbert space and elementary operators.
//!
//! The space is Fock(a) ⊗ Fock(b) ⊗ qubit with photon cutoffs `n_max_a`,
//! `n_max_b`. Basis states |m, n, x⟩ carry m photons in cavity `a`, n photons
//! in cavity `b`, and qubit state x (0 = ground, 1 = excited). The flattened
//! index is frozen as
//!
//! ```text
//! index = ((m·(n_max_b+1)) + n)·2 + x
//! ```
//!
//! i.e. the qubit index varies fastest and the `a` photon number slowest.
//! Every operator in this crate, and every serialized matrix, uses this
//! ordering.
//!
//! All matrices are dense complex double precision: the dimensions needed
//! here (≤ a few hundred) make sparse machinery pointless, and the physics
//! involves interference cancellations down to ~10⁻⁴ of the individual
//! amplitudes, which double precision absorbs comfortably.

use ndarray::Array2;
use serde_json::json;

use crate::{Complex, Error};

/// Truncated Fock ⊗ Fock ⊗ qubit space.
///
/// Immutable after construction; cheap to copy and safe to share across
/// threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HilbertSpace {
    /// Photon-number cutoff of mode `a` (states 0..=n_max_a are kept).
    pub n_max_a: usize,
    /// Photon-number cutoff of mode `b`.
    pub n_max_b: usize,
    /// Total dimension, (n_max_a+1)·(n_max_b+1)·2.
    pub dim: usize,
}

impl HilbertSpace {
    /// Flattened index of the basis state |m, n, x⟩.
    ///
    /// Callers must keep m ≤ n_max_a, n ≤ n_max_b, x ≤ 1; this is a pure
    /// arithmetic helper and does not bounds-check.
    pub fn index_of(&self, m: usize, n: usize, x: usize) -> usize {
        (m * (self.n_max_b + 1) + n) * 2 + x
    }

    /// Inverse of [`index_of`](Self::index_of): (m, n, x) of basis index `i`.
    pub fn state_of(&self, i: usize) -> (usize, usize, usize) {
        let x = i % 2;
        let rest = i / 2;
        let n = rest % (self.n_max_b + 1);
        let m = rest / (self.n_max_b + 1);
        (m, n, x)
    }
}

/// Build the composite space. Cutoffs below 1 are rejected because g²(0)
/// requires at least two-photon states in each mode.
pub fn make_space(n_max_a: usize, n_max_b: usize) -> Result<HilbertSpace, Error> {
    if n_max_a < 1 {
        return Err(Error::InvalidTruncation(n_max_a));
    }
    if n_max_b < 1 {
        return Err(Error::InvalidTruncation(n_max_b));
    }
    Ok(HilbertSpace {
        n_max_a,
        n_max_b,
        dim: (n_max_a + 1) * (n_max_b + 1) * 2,
    })
}

/// Dense operator on a [`HilbertSpace`].
///
/// Immutable in practice: all algebra below returns fresh operators, so
/// instances can be shared freely between sweep workers.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    /// The space this operator acts on.
    pub space: HilbertSpace,
    /// dim×dim matrix in the frozen basis ordering.
    pub matrix: Array2<Complex>,
}

impl Operator {
    /// Zero operator.
    pub fn zeros(space: HilbertSpace) -> Operator {
        Operator {
            space,
            matrix: Array2::zeros((space.dim, space.dim)),
        }
    }

    /// Identity operator.
    pub fn identity(space: HilbertSpace) -> Operator {
        Operator {
            space,
            matrix: Array2::eye(space.dim),
        }
    }

    /// Debug dump as JSON: dimensions, the basis-ordering tag, and the list
    /// of nonzero entries as (row, col, re, im).
    pub fn debug_json(&self) -> serde_json::Value {
        let mut nonzeros = Vec::new();
        for ((r, c), z) in self.matrix.indexed_iter() {
            if z.norm_sqr() != 0.0 {
                nonzeros.push(json!([r, c, z.re, z.im]));
            }
        }
        json!({
            "dims": {
                "n_max_a": self.space.n_max_a,
                "n_max_b": self.space.n_max_b,
                "dim": self.space.dim,
            },
            "ordering": "index = ((m*(n_max_b+1)) + n)*2 + x; x: 0=ground, 1=excited",
            "nonzeros": nonzeros,
        })
    }
}

fn check_same_space(lhs: &Operator, rhs: &Operator) -> Result<(), Error> {
    if lhs.space != rhs.space {
        return Err(Error::SpaceMismatch {
            expected: lhs.space.dim,
            found: rhs.space.dim,
        });
    }
    Ok(())
}

/// Photon annihilation operator of mode `a`:
/// ⟨m−1, n, x| a |m, n, x⟩ = √m.
pub fn annihilation_a(space: HilbertSpace) -> Operator {
    let mut op = Operator::zeros(space);
    for m in 1..=space.n_max_a {
        for n in 0..=space.n_max_b {
            for x in 0..2 {
                let row = space.index_of(m - 1, n, x);
                let col = space.index_of(m, n, x);
                op.matrix[[row, col]] = Complex::new((m as f64).sqrt(), 0.0);
            }
        }
    }
    op
}

/// Photon annihilation operator of mode `b`:
/// ⟨m, n−1, x| b |m, n, x⟩ = √n.
pub fn annihilation_b(space: HilbertSpace) -> Operator {
    let mut op = Operator::zeros(space);
    for m in 0..=space.n_max_a {
        for n in 1..=space.n_max_b {
            for x in 0..2 {
                let row = space.index_of(m, n - 1, x);
                let col = space.index_of(m, n, x);
                op.matrix[[row, col]] = Complex::new((n as f64).sqrt(), 0.0);
            }
        }
    }
    op
}

/// Quantum-dot lowering operator σ⁻: |m, n, e⟩ → |m, n, g⟩.
pub fn sigma_minus(space: HilbertSpace) -> Operator {
    let mut op = Operator::zeros(space);
    for m in 0..=space.n_max_a {
        for n in 0..=space.n_max_b {
            let row = space.index_of(m, n, 0);
            let col = space.index_of(m, n, 1);
            op.matrix[[row, col]] = Complex::new(1.0, 0.0);
        }
    }
    op
}

/// Conjugate transpose.
pub fn dagger(op: &Operator) -> Operator {
    Operator {
        space: op.space,
        matrix: op.matrix.t().mapv(|z| z.conj()),
    }
}

/// Elementwise sum. Fails with [`Error::SpaceMismatch`] if the operands live
/// on different spaces.
pub fn add(lhs: &Operator, rhs: &Operator) -> Result<Operator, Error> {
    check_same_space(lhs, rhs)?;
    Ok(Operator {
        space: lhs.space,
        matrix: &lhs.matrix + &rhs.matrix,
    })
}

/// Scalar multiple c·op.
pub fn scale(c: Complex, op: &Operator) -> Operator {
    Operator {
        space: op.space,
        matrix: op.matrix.mapv(|z| c * z),
    }
}

/// Matrix product lhs·rhs. Fails with [`Error::SpaceMismatch`] if the
/// operands live on different spaces.
pub fn matmul(lhs: &Operator, rhs: &Operator) -> Result<Operator, Error> {
    check_same_space(lhs, rhs)?;
    Ok(Operator {
        space: lhs.space,
        matrix: lhs.matrix.dot(&rhs.matrix),
    })
}

/// Matrix element ⟨i| op |j⟩ in the frozen basis ordering. Out-of-range
/// indices are reported as a space mismatch against the operator's dimension.
pub fn expectation_matrix_element(op: &Operator, i: usize, j: usize) -> Result<Complex, Error> {
    let dim = op.space.dim;
    if i >= dim || j >= dim {
        return Err(Error::SpaceMismatch {
            expected: dim,
            found: i.max(j) + 1,
        });
    }
    Ok(op.matrix[[i, j]])
}
