//! Quantum states: the pure-state families used throughout, density matrices
//! with validated invariants, marginals, von Neumann entropy, and seeded
//! random-state generators for property tests.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{self, ComplexMatrix};
use crate::{Error, Result};

/// Norm tolerance for a pure state's amplitude vector.
pub const PURE_NORM_TOL: f64 = 1e-12;

/// How far user-supplied weight vectors may be from Σλ² = 1 before they are
/// rejected instead of rescaled.
const WEIGHT_INPUT_TOL: f64 = 1e-9;

/// Unit-norm state vector over a tensor product of subsystems.
#[derive(Clone, Debug)]
pub struct PureState {
    dims: Vec<usize>,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(dims: Vec<usize>, amplitudes: Vec<Complex64>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidParameter {
                name: "dims",
                reason: "subsystem dimensions must be positive".into(),
            });
        }
        if amplitudes.len() != total {
            return Err(Error::BadTensorSize {
                size: amplitudes.len(),
                expected: total,
            });
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFiniteEntries);
        }
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr.sqrt() - 1.0).abs() > PURE_NORM_TOL {
            return Err(Error::NonNormalizable {
                reason: format!("amplitude norm is {}, expected 1", norm_sqr.sqrt()),
            });
        }
        Ok(Self { dims, amplitudes })
    }

    /// Normalizes the given amplitudes; rejects vectors of negligible norm.
    pub fn normalized(dims: Vec<usize>, amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::NonNormalizable {
                reason: "amplitude vector has zero norm".into(),
            });
        }
        let scaled = amplitudes.into_iter().map(|z| z / norm).collect();
        Self::new(dims, scaled)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Projector |ψ⟩⟨ψ| as a density matrix.
    pub fn to_density(&self) -> DensityMatrix {
        let n = self.amplitudes.len();
        let m = ComplexMatrix::from_fn(n, n, |i, j| {
            self.amplitudes[i] * self.amplitudes[j].conj()
        });
        DensityMatrix::new(self.dims.clone(), m)
            .expect("projector of a unit vector is a valid density matrix")
    }

    /// Tensor product with `other`, subsystems concatenated in order.
    pub fn kron(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            dims,
            amplitudes: linalg::kron_vec(&self.amplitudes, &other.amplitudes),
        }
    }

    /// Reorders subsystems so that output site k is input site `perm[k]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let n = self.dims.len();
        if perm.len() != n {
            return Err(Error::DimensionMismatch {
                left: perm.len(),
                right: n,
            });
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n {
                return Err(Error::SubsystemOutOfRange { index: p, count: n });
            }
            if seen[p] {
                return Err(Error::DuplicateSubsystem { index: p });
            }
            seen[p] = true;
        }
        let out_dims: Vec<usize> = perm.iter().map(|&p| self.dims[p]).collect();
        let mut in_stride = vec![1usize; n];
        for s in (0..n.saturating_sub(1)).rev() {
            in_stride[s] = in_stride[s + 1] * self.dims[s + 1];
        }
        let total = self.amplitudes.len();
        let mut out = vec![Complex64::ZERO; total];
        for (flat_out, slot) in out.iter_mut().enumerate() {
            let mut rem = flat_out;
            let mut flat_in = 0;
            for k in (0..n).rev() {
                let digit = rem % out_dims[k];
                rem /= out_dims[k];
                flat_in += digit * in_stride[perm[k]];
            }
            *slot = self.amplitudes[flat_in];
        }
        Ok(Self {
            dims: out_dims,
            amplitudes: out,
        })
    }
}

/// Trace-one positive Hermitian operator over a tensor product of subsystems.
///
/// Construction validates Hermiticity (1e−10 entrywise), unit trace (1e−10),
/// and positivity (smallest eigenvalue ≥ −1e−9).
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidParameter {
                name: "dims",
                reason: "subsystem dimensions must be positive".into(),
            });
        }
        if !matrix.is_square() || matrix.rows() != total {
            return Err(Error::BadTensorSize {
                size: matrix.rows(),
                expected: total,
            });
        }
        if !matrix.all_finite() {
            return Err(Error::NonFiniteEntries);
        }
        let herm = matrix.hermiticity_deviation();
        if herm > 1e-10 {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("not Hermitian: deviation {herm:.3e} exceeds 1e-10"),
            });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("trace is {trace}, expected 1"),
            });
        }
        let decomposition = linalg::eigh(&matrix)?;
        let min_eig = decomposition
            .eigenvalues
            .first()
            .copied()
            .unwrap_or_default();
        if min_eig < -1e-9 {
            return Err(Error::InvalidDensityMatrix {
                reason: format!("smallest eigenvalue {min_eig:.3e} below -1e-9"),
            });
        }
        Ok(Self { dims, matrix })
    }

    /// Convex mixture Σ wᵢ |ψᵢ⟩⟨ψᵢ| of pure states on identical subsystems.
    pub fn mixture(weights: &[f64], states: &[PureState]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::InvalidParameter {
                name: "weights",
                reason: "need one weight per state and at least one state".into(),
            });
        }
        let dims = states[0].dims().to_vec();
        let total = states[0].total_dim();
        if states.iter().any(|s| s.dims() != dims.as_slice()) {
            return Err(Error::InvalidParameter {
                name: "states",
                reason: "all mixture components must share subsystem dimensions".into(),
            });
        }
        if weights.iter().any(|&w| !w.is_finite() || w < 0.0) {
            return Err(Error::InvalidParameter {
                name: "weights",
                reason: "weights must be finite and nonnegative".into(),
            });
        }
        let mut m = ComplexMatrix::zeros(total, total);
        for (w, s) in weights.iter().zip(states) {
            let amp = s.amplitudes();
            for i in 0..total {
                for j in 0..total {
                    let v = m.get(i, j) + amp[i] * amp[j].conj() * *w;
                    m.set(i, j, v);
                }
            }
        }
        Self::new(dims, m)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Reduced state over `keep`, in the order given.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let reduced = linalg::partial_trace(&self.matrix, &self.dims, keep)?;
        let dims = keep.iter().map(|&s| self.dims[s]).collect();
        // Re-validate: the contraction preserves all density-matrix invariants.
        DensityMatrix::new(dims, reduced)
    }

    /// Single-site marginal.
    pub fn marginal(&self, site: usize) -> Result<DensityMatrix> {
        self.partial_trace(&[site])
    }
}

/// The pure-state families studied here, keyed by their defining parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum StateFamilySpec {
    /// (|00⟩ + |11⟩)/√2.
    BellPhiPlus,
    /// ε|00⟩ + √(1−ε²)|11⟩ on two qubits.
    EpsFamily { eps: f64 },
    /// Σᵢ λᵢ|ii⟩ on two qudits with d = λ.len().
    QuditSchmidt { lambdas: Vec<f64> },
    /// λ₀|000⟩ + √(1−λ₀²)|111⟩.
    Ghz { lambda0: f64 },
    /// λ₀|000⟩ + λ₂|101⟩ + λ₃|110⟩ with λ₃ = √(1−λ₀²−λ₂²).
    W { lambda0: f64, lambda2: f64 },
    /// λ₀|000⟩ + λ₁e^{iφ}|100⟩ + λ₂|101⟩ + λ₃|110⟩ + λ₄|111⟩.
    ThreeQubitGeneral { lambdas: [f64; 5], phi: f64 },
}

fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || !(0.0..=1.0).contains(&value) {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("{value} is outside [0, 1]"),
        });
    }
    Ok(())
}

/// Builds the pure state described by `spec`.
///
/// Derived weights (λ₄ for the GHZ family, λ₃ for the W family) are computed
/// from the normalization constraint; fully specified weight vectors must
/// satisfy Σλ² = 1 within 1e−9 and are rescaled to unit norm.
pub fn make_state(spec: &StateFamilySpec) -> Result<PureState> {
    match spec {
        StateFamilySpec::BellPhiPlus => make_state(&StateFamilySpec::EpsFamily {
            eps: std::f64::consts::FRAC_1_SQRT_2,
        }),
        StateFamilySpec::EpsFamily { eps } => {
            check_unit_interval("eps", *eps)?;
            let other = (1.0 - eps * eps).max(0.0).sqrt();
            let mut amp = vec![Complex64::ZERO; 4];
            amp[0] = Complex64::new(*eps, 0.0);
            amp[3] = Complex64::new(other, 0.0);
            PureState::new(vec![2, 2], amp)
        }
        StateFamilySpec::QuditSchmidt { lambdas } => {
            let d = lambdas.len();
            if d < 2 {
                return Err(Error::InvalidParameter {
                    name: "lambdas",
                    reason: "need at least two Schmidt coefficients".into(),
                });
            }
            let mut sum = 0.0;
            for &l in lambdas {
                check_unit_interval("lambdas", l)?;
                sum += l * l;
            }
            if (sum - 1.0).abs() > WEIGHT_INPUT_TOL {
                return Err(Error::NonNormalizable {
                    reason: format!("Schmidt weights sum to {sum}, expected 1"),
                });
            }
            let mut amp = vec![Complex64::ZERO; d * d];
            for (i, &l) in lambdas.iter().enumerate() {
                amp[i * d + i] = Complex64::new(l, 0.0);
            }
            PureState::normalized(vec![d, d], amp)
        }
        StateFamilySpec::Ghz { lambda0 } => {
            check_unit_interval("lambda0", *lambda0)?;
            let lambda4 = (1.0 - lambda0 * lambda0).max(0.0).sqrt();
            let mut amp = vec![Complex64::ZERO; 8];
            amp[0b000] = Complex64::new(*lambda0, 0.0);
            amp[0b111] = Complex64::new(lambda4, 0.0);
            PureState::new(vec![2, 2, 2], amp)
        }
        StateFamilySpec::W { lambda0, lambda2 } => {
            check_unit_interval("lambda0", *lambda0)?;
            check_unit_interval("lambda2", *lambda2)?;
            let rest = 1.0 - lambda0 * lambda0 - lambda2 * lambda2;
            if rest < -WEIGHT_INPUT_TOL {
                return Err(Error::NonNormalizable {
                    reason: format!(
                        "lambda0^2 + lambda2^2 = {} exceeds 1",
                        lambda0 * lambda0 + lambda2 * lambda2
                    ),
                });
            }
            let lambda3 = rest.max(0.0).sqrt();
            let mut amp = vec![Complex64::ZERO; 8];
            amp[0b000] = Complex64::new(*lambda0, 0.0);
            amp[0b101] = Complex64::new(*lambda2, 0.0);
            amp[0b110] = Complex64::new(lambda3, 0.0);
            PureState::normalized(vec![2, 2, 2], amp)
        }
        StateFamilySpec::ThreeQubitGeneral { lambdas, phi } => {
            if !phi.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "phi",
                    reason: "phase must be finite".into(),
                });
            }
            let mut sum = 0.0;
            for &l in lambdas {
                check_unit_interval("lambdas", l)?;
                sum += l * l;
            }
            if (sum - 1.0).abs() > WEIGHT_INPUT_TOL {
                return Err(Error::NonNormalizable {
                    reason: format!("weights sum to {sum}, expected 1"),
                });
            }
            let mut amp = vec![Complex64::ZERO; 8];
            amp[0b000] = Complex64::new(lambdas[0], 0.0);
            amp[0b100] = Complex64::from_polar(lambdas[1], *phi);
            amp[0b101] = Complex64::new(lambdas[2], 0.0);
            amp[0b110] = Complex64::new(lambdas[3], 0.0);
            amp[0b111] = Complex64::new(lambdas[4], 0.0);
            PureState::normalized(vec![2, 2, 2], amp)
        }
    }
}

/// Von Neumann entropy S(ρ) = −Σᵢ λᵢ log₂ λᵢ in bits.
///
/// Eigenvalues are clamped to [0, 1] before the logarithm; values below 1e−14
/// are treated as exact zeros.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let decomposition =
        linalg::eigh(rho.matrix()).expect("density matrix is Hermitian by construction");
    let clamped: Vec<f64> = decomposition
        .eigenvalues
        .iter()
        .map(|l| l.clamp(0.0, 1.0))
        .collect();
    crate::entropy::entropy_bits(&clamped)
}

/// Random-state generators used by the soundness property tests.
#[derive(Clone, Debug)]
pub enum RandomStateKind {
    /// Haar-random pure state as a density matrix.
    Pure { dims: Vec<usize> },
    /// Convex mixture of `terms` products of independent Haar-random pure
    /// subsystem states, with uniform-simplex weights.
    Separable { dims: Vec<usize>, terms: usize },
    /// Mixture of `terms` three-qubit states, each pure and product across a
    /// randomly chosen bipartition (A|BC, B|AC, or C|AB).
    Biseparable3Qubit { terms: usize },
}

/// Deterministic random state for a fixed seed.
pub fn random_state(kind: &RandomStateKind, seed: u64) -> Result<DensityMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        RandomStateKind::Pure { dims } => Ok(random_pure(dims, &mut rng)?.to_density()),
        RandomStateKind::Separable { dims, terms } => {
            if *terms == 0 {
                return Err(Error::InvalidParameter {
                    name: "terms",
                    reason: "need at least one mixture term".into(),
                });
            }
            let weights = simplex_weights(*terms, &mut rng);
            let mut components = Vec::with_capacity(*terms);
            for _ in 0..*terms {
                let mut product = random_pure(&dims[..1], &mut rng)?;
                for site in 1..dims.len() {
                    product = product.kron(&random_pure(&dims[site..site + 1], &mut rng)?);
                }
                components.push(product);
            }
            DensityMatrix::mixture(&weights, &components)
        }
        RandomStateKind::Biseparable3Qubit { terms } => {
            if *terms == 0 {
                return Err(Error::InvalidParameter {
                    name: "terms",
                    reason: "need at least one mixture term".into(),
                });
            }
            let weights = simplex_weights(*terms, &mut rng);
            let mut components = Vec::with_capacity(*terms);
            for _ in 0..*terms {
                let single = random_pure(&[2], &mut rng)?;
                let pair = random_pure(&[2, 2], &mut rng)?;
                let joined = single.kron(&pair);
                // joined is ordered (single, pair.0, pair.1); reorder so the
                // singled-out party sits at its bipartition slot.
                let state = match rng.random_range(0..3u8) {
                    0 => joined,                        // A | BC
                    1 => joined.permute(&[1, 0, 2])?,   // B | AC
                    _ => joined.permute(&[1, 2, 0])?,   // C | AB
                };
                components.push(state);
            }
            DensityMatrix::mixture(&weights, &components)
        }
    }
}

/// Haar-random pure state: normalized vector of standard complex Gaussians.
pub fn random_pure(dims: &[usize], rng: &mut impl Rng) -> Result<PureState> {
    let total: usize = dims.iter().product();
    loop {
        let amp: Vec<Complex64> = (0..total)
            .map(|_| {
                Complex64::new(
                    StandardNormal.sample(rng),
                    StandardNormal.sample(rng),
                )
            })
            .collect();
        let norm_sqr: f64 = amp.iter().map(|z| z.norm_sqr()).sum();
        if norm_sqr > 1e-12 {
            return PureState::normalized(dims.to_vec(), amp);
        }
    }
}

/// Uniform draw from the probability simplex (symmetric Dirichlet(1)),
/// realized as normalized Exp(1) variates.
fn simplex_weights(terms: usize, rng: &mut impl Rng) -> Vec<f64> {
    if terms == 1 {
        return vec![1.0];
    }
    let mut w: Vec<f64> = (0..terms)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let sum: f64 = w.iter().sum();
    for x in &mut w {
        *x /= sum;
    }
    w
}
