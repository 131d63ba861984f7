//! Born-rule outcome distributions and Shannon entropies (joint, marginal,
//! conditional) of product measurements.

use num_complex::Complex64;

use crate::linalg;
use crate::observables::MeasurementBasis;
use crate::states::{DensityMatrix, PureState};
use crate::{Error, Result};

/// Probabilities below this are treated as exact zeros before the logarithm.
pub const PROBABILITY_FLOOR: f64 = 1e-14;

/// Distribution over tuples of measurement outcomes, stored row-major over
/// the per-site outcome counts.
#[derive(Clone, Debug)]
pub struct ProbabilityDistribution {
    outcome_shape: Vec<usize>,
    probabilities: Vec<f64>,
}

impl ProbabilityDistribution {
    /// Clamps tiny negative entries (≥ −1e−12) to zero and checks the total.
    pub fn new(outcome_shape: Vec<usize>, probabilities: Vec<f64>) -> Result<Self> {
        let total: usize = outcome_shape.iter().product();
        if probabilities.len() != total {
            return Err(Error::InvalidDistribution {
                reason: format!(
                    "{} probabilities for outcome shape {:?}",
                    probabilities.len(),
                    outcome_shape
                ),
            });
        }
        let mut clamped = probabilities;
        for p in &mut clamped {
            if !p.is_finite() {
                return Err(Error::InvalidDistribution {
                    reason: "probabilities must be finite".into(),
                });
            }
            if *p < 0.0 {
                if *p < -1e-12 {
                    return Err(Error::InvalidDistribution {
                        reason: format!("negative probability {p:.3e}"),
                    });
                }
                *p = 0.0;
            }
        }
        let sum: f64 = clamped.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidDistribution {
                reason: format!("probabilities sum to {sum}, expected 1"),
            });
        }
        Ok(Self {
            outcome_shape,
            probabilities: clamped,
        })
    }

    pub fn outcome_shape(&self) -> &[usize] {
        &self.outcome_shape
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Marginal over the selected sites, in the order given, obtained by
    /// summing the joint distribution.
    pub fn marginal(&self, keep_sites: &[usize]) -> Result<ProbabilityDistribution> {
        let n = self.outcome_shape.len();
        if keep_sites.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        let mut seen = vec![false; n];
        for &s in keep_sites {
            if s >= n {
                return Err(Error::SubsystemOutOfRange { index: s, count: n });
            }
            if seen[s] {
                return Err(Error::DuplicateSubsystem { index: s });
            }
            seen[s] = true;
        }
        let mut stride = vec![1usize; n];
        for s in (0..n.saturating_sub(1)).rev() {
            stride[s] = stride[s + 1] * self.outcome_shape[s + 1];
        }
        let kept_shape: Vec<usize> = keep_sites.iter().map(|&s| self.outcome_shape[s]).collect();
        let kept_total: usize = kept_shape.iter().product();
        let mut out = vec![0.0f64; kept_total];
        for (flat, &p) in self.probabilities.iter().enumerate() {
            let mut idx = 0;
            for (k, &site) in keep_sites.iter().enumerate() {
                let digit = (flat / stride[site]) % self.outcome_shape[site];
                idx = idx * kept_shape[k] + digit;
            }
            out[idx] += p;
        }
        ProbabilityDistribution::new(kept_shape, out)
    }
}

/// −Σ p log₂ p over raw probabilities, with the [`PROBABILITY_FLOOR`] cutoff.
pub(crate) fn entropy_bits(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > PROBABILITY_FLOOR)
        .map(|&p| -p * p.log2())
        .sum()
}

fn check_site_dims(state_dims: &[usize], bases: &[&MeasurementBasis]) -> Result<()> {
    if state_dims.len() != bases.len() {
        return Err(Error::DimensionMismatch {
            left: state_dims.len(),
            right: bases.len(),
        });
    }
    for (site, (&d, basis)) in state_dims.iter().zip(bases).enumerate() {
        if basis.dim() != d {
            return Err(Error::InvalidScenario {
                reason: format!(
                    "basis `{}` on site {site} has dimension {}, state has {d}",
                    basis.label(),
                    basis.dim()
                ),
            });
        }
    }
    Ok(())
}

/// Born-rule distribution p(j₁,…,jₙ) = ⟨j₁…jₙ|ρ|j₁…jₙ⟩ for one measurement
/// basis per site.
pub fn born_distribution(
    state: &DensityMatrix,
    bases: &[&MeasurementBasis],
) -> Result<ProbabilityDistribution> {
    check_site_dims(state.dims(), bases)?;
    let shape: Vec<usize> = bases.iter().map(|b| b.dim()).collect();
    let total: usize = shape.iter().product();
    let rho = state.matrix();

    let mut probs = Vec::with_capacity(total);
    let mut outcome = vec![0usize; bases.len()];
    for _ in 0..total {
        let v = product_vector(bases, &outcome);
        // p = v† ρ v
        let mut p = 0.0;
        for (i, vi) in v.iter().enumerate() {
            let mut row = Complex64::ZERO;
            for (j, vj) in v.iter().enumerate() {
                row += rho.get(i, j) * vj;
            }
            p += (vi.conj() * row).re;
        }
        probs.push(p);
        advance(&mut outcome, &shape);
    }
    ProbabilityDistribution::new(shape, probs)
}

/// Born-rule distribution of a pure state, p(j₁,…,jₙ) = |⟨j₁…jₙ|ψ⟩|².
pub fn born_distribution_pure(
    state: &PureState,
    bases: &[&MeasurementBasis],
) -> Result<ProbabilityDistribution> {
    check_site_dims(state.dims(), bases)?;
    let shape: Vec<usize> = bases.iter().map(|b| b.dim()).collect();
    let total: usize = shape.iter().product();
    let amp = state.amplitudes();

    let mut probs = Vec::with_capacity(total);
    let mut outcome = vec![0usize; bases.len()];
    for _ in 0..total {
        let v = product_vector(bases, &outcome);
        let overlap: Complex64 = v.iter().zip(amp).map(|(x, a)| x.conj() * a).sum();
        probs.push(overlap.norm_sqr());
        advance(&mut outcome, &shape);
    }
    ProbabilityDistribution::new(shape, probs)
}

fn product_vector(bases: &[&MeasurementBasis], outcome: &[usize]) -> Vec<Complex64> {
    let mut v = bases[0].vector(outcome[0]).to_vec();
    for (basis, &k) in bases.iter().zip(outcome).skip(1) {
        v = linalg::kron_vec(&v, basis.vector(k));
    }
    v
}

fn advance(outcome: &mut [usize], shape: &[usize]) {
    for site in (0..outcome.len()).rev() {
        outcome[site] += 1;
        if outcome[site] < shape[site] {
            return;
        }
        outcome[site] = 0;
    }
}

/// Shannon entropy of a distribution, in bits, with 0·log 0 := 0.
pub fn shannon_entropy(p: &ProbabilityDistribution) -> f64 {
    entropy_bits(p.probabilities())
}

/// H of the joint outcome distribution of one basis per site.
pub fn joint_entropy(state: &DensityMatrix, bases: &[&MeasurementBasis]) -> Result<f64> {
    Ok(shannon_entropy(&born_distribution(state, bases)?))
}

/// Pure-state fast path for [`joint_entropy`].
pub fn joint_entropy_pure(state: &PureState, bases: &[&MeasurementBasis]) -> Result<f64> {
    Ok(shannon_entropy(&born_distribution_pure(state, bases)?))
}

/// Conditional entropy H(target | given) = H(all) − H(given), both terms
/// computed from the same joint distribution.
///
/// `target_sites` and `given_sites` must partition the state's sites.
pub fn conditional_entropy(
    state: &DensityMatrix,
    target_sites: &[usize],
    given_sites: &[usize],
    bases: &[&MeasurementBasis],
) -> Result<f64> {
    let n = state.dims().len();
    let mut covered = vec![false; n];
    for &s in target_sites.iter().chain(given_sites) {
        if s >= n {
            return Err(Error::SubsystemOutOfRange { index: s, count: n });
        }
        if covered[s] {
            return Err(Error::DuplicateSubsystem { index: s });
        }
        covered[s] = true;
    }
    if covered.iter().any(|&c| !c) {
        return Err(Error::InvalidScenario {
            reason: "conditioned and conditioning sites must cover every subsystem".into(),
        });
    }
    let joint = born_distribution(state, bases)?;
    let h_all = shannon_entropy(&joint);
    let h_given = shannon_entropy(&joint.marginal(given_sites)?);
    Ok(h_all - h_given)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::{standard_bases, StandardBasisKind};
    use crate::states::{make_state, StateFamilySpec};

    fn pauli(kind: StandardBasisKind) -> MeasurementBasis {
        standard_bases(2, kind).unwrap()
    }

    fn bell() -> DensityMatrix {
        make_state(&StateFamilySpec::BellPhiPlus).unwrap().to_density()
    }

    #[test]
    fn born_bell_in_zz() {
        let z = pauli(StandardBasisKind::PauliZ);
        let p = born_distribution(&bell(), &[&z, &z]).unwrap();
        let want = [0.5, 0.0, 0.0, 0.5];
        for (got, want) in p.probabilities().iter().zip(want) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn born_product_state_in_xx_is_uniform() {
        let zero = make_state(&StateFamilySpec::EpsFamily { eps: 1.0 }).unwrap();
        let x = pauli(StandardBasisKind::PauliX);
        let p = born_distribution_pure(&zero, &[&x, &x]).unwrap();
        for &q in p.probabilities() {
            assert!((q - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn born_ghz_in_zzz() {
        let ghz = make_state(&StateFamilySpec::Ghz {
            lambda0: std::f64::consts::FRAC_1_SQRT_2,
        })
        .unwrap()
        .to_density();
        let z = pauli(StandardBasisKind::PauliZ);
        let p = born_distribution(&ghz, &[&z, &z, &z]).unwrap();
        assert!((p.probabilities()[0] - 0.5).abs() < 1e-12);
        assert!((p.probabilities()[7] - 0.5).abs() < 1e-12);
        assert!(p.probabilities()[1..7].iter().all(|&q| q.abs() < 1e-12));
    }

    #[test]
    fn born_rejects_dim_mismatch() {
        let z = pauli(StandardBasisKind::PauliZ);
        let f3 = standard_bases(3, StandardBasisKind::Fourier).unwrap();
        assert!(born_distribution(&bell(), &[&z, &f3]).is_err());
        assert!(born_distribution(&bell(), &[&z]).is_err());
    }

    #[test]
    fn shannon_entropy_examples() {
        let half = ProbabilityDistribution::new(vec![2], vec![0.5, 0.5]).unwrap();
        assert!((shannon_entropy(&half) - 1.0).abs() < 1e-15);

        let point = ProbabilityDistribution::new(vec![4], vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(shannon_entropy(&point).abs() < 1e-15);

        for d in [2usize, 3, 5] {
            let n = d * d;
            let uniform =
                ProbabilityDistribution::new(vec![d, d], vec![1.0 / n as f64; n]).unwrap();
            let h = shannon_entropy(&uniform);
            assert!((h - 2.0 * (d as f64).log2()).abs() < 1e-12, "d={d}");
        }
    }

    #[test]
    fn joint_entropy_examples() {
        let x = pauli(StandardBasisKind::PauliX);
        let z = pauli(StandardBasisKind::PauliZ);
        let y = pauli(StandardBasisKind::PauliY);

        assert!((joint_entropy(&bell(), &[&x, &x]).unwrap() - 1.0).abs() < 1e-12);

        let zero_zero = make_state(&StateFamilySpec::EpsFamily { eps: 1.0 })
            .unwrap()
            .to_density();
        assert!(joint_entropy(&zero_zero, &[&z, &z]).unwrap().abs() < 1e-12);

        let ghz = make_state(&StateFamilySpec::Ghz {
            lambda0: std::f64::consts::FRAC_1_SQRT_2,
        })
        .unwrap()
        .to_density();
        assert!((joint_entropy(&ghz, &[&y, &y, &y]).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn conditional_entropy_examples() {
        let z = pauli(StandardBasisKind::PauliZ);
        let x = pauli(StandardBasisKind::PauliX);

        // Perfect correlation: H(B|A) = 0 for the Bell state in (Z, Z).
        let h = conditional_entropy(&bell(), &[1], &[0], &[&z, &z]).unwrap();
        assert!(h.abs() < 1e-12);

        // Unbiased pair: H(B|A) = 1 for (Z on A, X on B).
        let h = conditional_entropy(&bell(), &[1], &[0], &[&z, &x]).unwrap();
        assert!((h - 1.0).abs() < 1e-12);

        // Product state: conditioning is vacuous, H(B|A) = H(B).
        let psi = make_state(&StateFamilySpec::EpsFamily { eps: 1.0 }).unwrap();
        let rho = psi.to_density();
        let joint = born_distribution(&rho, &[&z, &x]).unwrap();
        let h_b = shannon_entropy(&joint.marginal(&[1]).unwrap());
        let h_cond = conditional_entropy(&rho, &[1], &[0], &[&z, &x]).unwrap();
        assert!((h_cond - h_b).abs() < 1e-12);
    }

    #[test]
    fn conditional_entropy_requires_partition() {
        let z = pauli(StandardBasisKind::PauliZ);
        assert!(conditional_entropy(&bell(), &[0], &[0], &[&z, &z]).is_err());
        assert!(conditional_entropy(&bell(), &[1], &[], &[&z, &z]).is_err());
    }

    #[test]
    fn chain_rule_and_subadditivity_spot_checks() {
        use crate::states::{random_state, RandomStateKind};
        let z = pauli(StandardBasisKind::PauliZ);
        let y = pauli(StandardBasisKind::PauliY);
        for seed in 0..25u64 {
            let rho = random_state(
                &RandomStateKind::Separable {
                    dims: vec![2, 2],
                    terms: 3,
                },
                seed,
            )
            .unwrap();
            let joint = born_distribution(&rho, &[&z, &y]).unwrap();
            let h_ab = shannon_entropy(&joint);
            let h_a = shannon_entropy(&joint.marginal(&[0]).unwrap());
            let h_b = shannon_entropy(&joint.marginal(&[1]).unwrap());
            let h_b_given_a = conditional_entropy(&rho, &[1], &[0], &[&z, &y]).unwrap();
            let h_a_given_b = conditional_entropy(&rho, &[0], &[1], &[&z, &y]).unwrap();

            assert!((h_ab - (h_a + h_b_given_a)).abs() < 1e-10);
            assert!((h_a + h_b_given_a - (h_b + h_a_given_b)).abs() < 1e-10);
            assert!(h_ab <= h_a + h_b + 1e-10);
            assert!((0.0..=2.0 + 1e-10).contains(&h_ab));
        }
    }

    #[test]
    fn distribution_constructor_guards() {
        assert!(ProbabilityDistribution::new(vec![2], vec![0.6, 0.6]).is_err());
        assert!(ProbabilityDistribution::new(vec![2], vec![1.1, -0.1]).is_err());
        // A tiny negative is clamped.
        let p = ProbabilityDistribution::new(vec![2], vec![1.0, -1e-13]).unwrap();
        assert_eq!(p.probabilities()[1], 0.0);
    }

    #[test]
    fn marginal_orders_sites_as_requested() {
        let probs = vec![0.1, 0.2, 0.3, 0.4];
        let p = ProbabilityDistribution::new(vec![2, 2], probs).unwrap();
        let swapped = p.marginal(&[1, 0]).unwrap();
        // p(b, a) = p(a, b) transposed.
        assert!((swapped.probabilities()[1] - 0.3).abs() < 1e-15);
        assert!((swapped.probabilities()[2] - 0.2).abs() < 1e-15);
    }
}
