//! Lower bounds on sums of measurement entropies: Maassen–Uffink, pairwise
//! composition for L observables, the registry of known tight values,
//! Ballester–Wehner, per-scenario constants F₁/F₂, and numerical tightness
//! certification by derivative-free minimization over pure states.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::entropy::joint_entropy_pure;
use crate::observables::{is_mutually_unbiased, max_overlap, MeasurementBasis};
use crate::states::{random_pure, PureState};
use crate::{Error, Result};

/// Tolerance used when deciding whether a basis pair counts as unbiased for
/// registry and Ballester–Wehner eligibility.
const MUB_TOL: f64 = 1e-10;

/// Where a bound value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundProvenance {
    MaassenUffink,
    PairwiseComposition,
    RegistryQubit3,
    RegistryQutrit3,
    RegistryQutrit4,
    BallesterWehner,
    CertifiedNumerical,
}

impl BoundProvenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::MaassenUffink => "maassen_uffink",
            Self::PairwiseComposition => "pairwise_composition",
            Self::RegistryQubit3 => "registry_qubit3",
            Self::RegistryQutrit3 => "registry_qutrit3",
            Self::RegistryQutrit4 => "registry_qutrit4",
            Self::BallesterWehner => "ballester_wehner",
            Self::CertifiedNumerical => "certified_numerical",
        }
    }
}

/// A lower bound on an entropy sum, in bits, with its tightness status.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoundValue {
    pub value: f64,
    pub tight: bool,
    pub provenance: BoundProvenance,
}

/// Maassen–Uffink bound q_MU = −2 log₂ c for a pair of observables, where c
/// is the maximum overlap of their eigenbases. Tight when the pair is
/// mutually unbiased.
pub fn maassen_uffink(b1: &MeasurementBasis, b2: &MeasurementBasis) -> Result<BoundValue> {
    let c = max_overlap(b1, b2)?;
    let value = (-2.0 * c.log2()).max(0.0);
    Ok(BoundValue {
        value,
        tight: is_mutually_unbiased(b1, b2, MUB_TOL)?,
        provenance: BoundProvenance::MaassenUffink,
    })
}

fn all_pairs_mub(bases: &[MeasurementBasis]) -> Result<bool> {
    for i in 0..bases.len() {
        for j in (i + 1)..bases.len() {
            if !is_mutually_unbiased(&bases[i], &bases[j], MUB_TOL)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn exact_square_root(d: usize) -> Option<usize> {
    let r = (d as f64).sqrt().round() as usize;
    (r * r == d).then_some(r)
}

/// Best known lower bound on Σᵢ H(Aᵢ) for L ≥ 2 observables on one system.
///
/// Candidates, best value wins (ties resolved toward a tight provenance):
/// the registry of known tight values (qubit with 3 pairwise-unbiased bases
/// → 2; qutrit with 3 MUBs → 3; qutrit with 4 MUBs → 4), Ballester–Wehner
/// for square dimension d = r² with L ≤ r pairwise-unbiased bases
/// → (L/2)·log₂ d, and the pairwise composition (1/(L−1))·Σ_{pairs} q_MU,
/// which is not tight in general.
pub fn multi_observable_bound(bases: &[MeasurementBasis]) -> Result<BoundValue> {
    let l = bases.len();
    if l < 2 {
        return Err(Error::TooFewObservables { min: 2, got: l });
    }
    let d = bases[0].dim();
    for b in bases {
        if b.dim() != d {
            return Err(Error::DimensionMismatch {
                left: b.dim(),
                right: d,
            });
        }
    }
    if l == 2 {
        return maassen_uffink(&bases[0], &bases[1]);
    }

    let mut pair_sum = 0.0;
    for i in 0..l {
        for j in (i + 1)..l {
            pair_sum += maassen_uffink(&bases[i], &bases[j])?.value;
        }
    }
    let mut best = BoundValue {
        value: pair_sum / (l as f64 - 1.0),
        tight: false,
        provenance: BoundProvenance::PairwiseComposition,
    };

    if all_pairs_mub(bases)? {
        let mut candidates: Vec<BoundValue> = Vec::new();
        if d == 2 && l == 3 {
            candidates.push(BoundValue {
                value: 2.0,
                tight: true,
                provenance: BoundProvenance::RegistryQubit3,
            });
        }
        if d == 3 && l == 3 {
            candidates.push(BoundValue {
                value: 3.0,
                tight: true,
                provenance: BoundProvenance::RegistryQutrit3,
            });
        }
        if d == 3 && l == 4 {
            candidates.push(BoundValue {
                value: 4.0,
                tight: true,
                provenance: BoundProvenance::RegistryQutrit4,
            });
        }
        if let Some(r) = exact_square_root(d) {
            if l <= r {
                candidates.push(BoundValue {
                    value: (l as f64 / 2.0) * (d as f64).log2(),
                    tight: true,
                    provenance: BoundProvenance::BallesterWehner,
                });
            }
        }
        for cand in candidates {
            let strictly_better = cand.value > best.value + 1e-12;
            let tie_break = (cand.value - best.value).abs() <= 1e-12 && cand.tight && !best.tight;
            if strictly_better || tie_break {
                best = cand;
            }
        }
    }
    Ok(best)
}

/// F₁/F₂ constants for a symmetric multi-party scenario where every site
/// measures the same `bases` list.
#[derive(Clone, Debug, Serialize)]
pub struct ScenarioBounds {
    /// Single-system bound: Σⱼ H(Vⱼ) ≥ F₁.
    pub f1: BoundValue,
    /// Two-system bound: Σⱼ H(Vⱼ, Wⱼ) ≥ F₂.
    pub f2: BoundValue,
    /// Number of settings L.
    pub num_settings: usize,
}

/// Computes F₁ from the single-site bound and F₂ from the two-system
/// registry when available.
///
/// The only two-system value known tight is the qubit scenario with three
/// pairwise-unbiased bases, where the minimum 3 is attained by Bell states.
/// Everywhere else F₂ falls back to the additive value 2·F₁, flagged not
/// tight so the criteria built on it stay conservative.
pub fn scenario_bounds(bases: &[MeasurementBasis]) -> Result<ScenarioBounds> {
    let f1 = multi_observable_bound(bases)?;
    let d = bases[0].dim();
    let l = bases.len();
    let f2 = if d == 2 && l == 3 && all_pairs_mub(bases)? {
        BoundValue {
            value: 3.0,
            tight: true,
            provenance: BoundProvenance::RegistryQubit3,
        }
    } else {
        BoundValue {
            value: 2.0 * f1.value,
            tight: false,
            provenance: BoundProvenance::PairwiseComposition,
        }
    };
    debug_assert!(f2.value >= f1.value && f1.value >= 0.0);
    Ok(ScenarioBounds {
        f1,
        f2,
        num_settings: l,
    })
}

/// Outcome of a numerical minimization of an entropy sum over pure states.
#[derive(Clone, Debug)]
pub struct TightnessCertificate {
    /// Smallest entropy sum found across all restarts.
    pub min_found: f64,
    /// State attaining `min_found`.
    pub argmin: PureState,
    /// The bound the search was asked to probe.
    pub claimed_bound: f64,
    /// min_found − claimed_bound; ≈ 0 certifies the claim as tight, a clearly
    /// positive gap means no tighter state was found.
    pub gap: f64,
    /// True when the best restart stopped at the iteration cap rather than
    /// at the simplex-diameter tolerance.
    pub hit_iteration_cap: bool,
}

/// Minimizes Σᵢ H over pure states of the joint system, where setting i
/// measures `per_site_bases[s][i]` on site s (a single site list gives the
/// plain single-system objective).
///
/// The search runs Nelder–Mead on the hyperspherical parameterization of the
/// state vector (first amplitude real and nonnegative, 2D−2 parameters) from
/// `restarts` Haar-random starting points. Deterministic for a fixed seed.
/// `claimed_bound` is echoed into the certificate's gap; the search itself
/// does not use it.
pub fn certify_tightness(
    per_site_bases: &[Vec<MeasurementBasis>],
    claimed_bound: f64,
    restarts: usize,
    seed: u64,
) -> Result<TightnessCertificate> {
    if restarts == 0 {
        return Err(Error::InvalidParameter {
            name: "restarts",
            reason: "need at least one restart".into(),
        });
    }
    if per_site_bases.is_empty() || per_site_bases.iter().any(|list| list.is_empty()) {
        return Err(Error::InvalidScenario {
            reason: "need at least one site with at least one basis".into(),
        });
    }
    let settings = per_site_bases[0].len();
    if per_site_bases.iter().any(|list| list.len() != settings) {
        return Err(Error::InvalidScenario {
            reason: "all sites must list the same number of bases".into(),
        });
    }
    let dims: Vec<usize> = per_site_bases.iter().map(|list| list[0].dim()).collect();

    let objective = |x: &[f64]| -> f64 {
        let psi = params_to_state(x, &dims);
        (0..settings)
            .map(|i| {
                let setting: Vec<&MeasurementBasis> =
                    per_site_bases.iter().map(|list| &list[i]).collect();
                joint_entropy_pure(&psi, &setting).expect("dims match by construction")
            })
            .sum()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Vec<f64>, bool)> = None;
    for _ in 0..restarts {
        let start_state = random_pure(&dims, &mut rng)?;
        let x0 = state_to_params(&start_state);
        let outcome = nelder_mead(&objective, &x0);
        let replace = best
            .as_ref()
            .map(|(value, _, _)| outcome.value < *value)
            .unwrap_or(true);
        if replace {
            best = Some((outcome.value, outcome.point, outcome.hit_cap));
        }
    }
    let (min_found, point, hit_iteration_cap) = best.expect("restarts >= 1");
    Ok(TightnessCertificate {
        min_found,
        argmin: params_to_state(&point, &dims),
        claimed_bound,
        gap: min_found - claimed_bound,
        hit_iteration_cap,
    })
}

/// Hyperspherical parameterization: x = [θ₁..θ_{D−1}, φ₁..φ_{D−1}] with
/// a₀ = cos θ₁ real and a_k = e^{iφ_k} cos θ_{k+1} Π_{j≤k} sin θ_j.
fn params_to_state(x: &[f64], dims: &[usize]) -> PureState {
    let total: usize = dims.iter().product();
    if total == 1 {
        return PureState::new(dims.to_vec(), vec![Complex64::ONE]).expect("unit scalar");
    }
    let (thetas, phis) = x.split_at(total - 1);
    let mut amp = vec![Complex64::ZERO; total];
    let mut sin_prod = 1.0;
    for k in 0..total {
        let magnitude = if k < total - 1 {
            let m = sin_prod * thetas[k].cos();
            sin_prod *= thetas[k].sin();
            m
        } else {
            sin_prod
        };
        // Magnitudes can go negative for unconstrained angles; the norm stays
        // exactly one, which is all the Born rule needs.
        amp[k] = if k == 0 {
            Complex64::new(magnitude, 0.0)
        } else {
            Complex64::from_polar(magnitude, phis[k - 1])
        };
    }
    PureState::new(dims.to_vec(), amp).expect("hyperspherical amplitudes are unit norm")
}

/// Inverse of [`params_to_state`] up to gauge, used to seed restarts.
fn state_to_params(state: &PureState) -> Vec<f64> {
    let amp = state.amplitudes();
    let total = amp.len();
    if total == 1 {
        return Vec::new();
    }
    let gauge = amp[0].arg();
    let mut thetas = Vec::with_capacity(2 * total - 2);
    let mut phis = Vec::with_capacity(total - 1);
    let mut sin_prod: f64 = 1.0;
    for (k, a) in amp.iter().enumerate().take(total - 1) {
        let m = a.norm();
        let cosine = if sin_prod > 1e-12 {
            (m / sin_prod).clamp(-1.0, 1.0)
        } else {
            0.0
        };
        let theta = cosine.acos();
        thetas.push(theta);
        sin_prod *= theta.sin();
        if k > 0 {
            phis.push(a.arg() - gauge);
        }
    }
    phis.push(amp[total - 1].arg() - gauge);
    thetas.extend(phis);
    thetas
}

struct SearchOutcome {
    value: f64,
    point: Vec<f64>,
    hit_cap: bool,
}

/// Nelder–Mead with reflection 1, expansion 2, contraction ½, shrink ½.
/// Stops when the simplex diameter drops below 1e−9 or after 5000 iterations.
fn nelder_mead(objective: &dyn Fn(&[f64]) -> f64, x0: &[f64]) -> SearchOutcome {
    const EXPANSION: f64 = 2.0;
    const CONTRACTION: f64 = 0.5;
    const SHRINK: f64 = 0.5;
    const DIAMETER_TOL: f64 = 1e-9;
    const MAX_ITERATIONS: usize = 5000;
    const INITIAL_STEP: f64 = 0.25;

    let n = x0.len();
    if n == 0 {
        return SearchOutcome {
            value: objective(x0),
            point: Vec::new(),
            hit_cap: false,
        };
    }

    let mut simplex: Vec<(f64, Vec<f64>)> = Vec::with_capacity(n + 1);
    simplex.push((objective(x0), x0.to_vec()));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += INITIAL_STEP;
        simplex.push((objective(&x), x));
    }

    let mut hit_cap = true;
    for _ in 0..MAX_ITERATIONS {
        simplex.sort_by(|a, b| a.0.total_cmp(&b.0));

        let diameter = simplex[1..]
            .iter()
            .map(|(_, x)| {
                x.iter()
                    .zip(&simplex[0].1)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0f64, f64::max);
        if diameter < DIAMETER_TOL {
            hit_cap = false;
            break;
        }

        let worst = simplex[n].clone();
        let second_worst_value = simplex[n - 1].0;
        let best_value = simplex[0].0;

        let mut centroid = vec![0.0; n];
        for (_, x) in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / n as f64;
            }
        }
        // Point at parameter t along the line from `from` through `toward`.
        let blend = |from: &[f64], toward: &[f64], t: f64| -> Vec<f64> {
            from.iter()
                .zip(toward)
                .map(|(a, b)| a + t * (b - a))
                .collect()
        };

        // Reflection coefficient 1: mirror image of the worst vertex.
        let reflected = blend(&worst.1, &centroid, 2.0);
        let f_reflected = objective(&reflected);

        if f_reflected < best_value {
            let expanded = blend(&worst.1, &centroid, 1.0 + EXPANSION);
            let f_expanded = objective(&expanded);
            simplex[n] = if f_expanded < f_reflected {
                (f_expanded, expanded)
            } else {
                (f_reflected, reflected)
            };
        } else if f_reflected < second_worst_value {
            simplex[n] = (f_reflected, reflected);
        } else {
            let (anchor, f_anchor) = if f_reflected < worst.0 {
                (reflected, f_reflected)
            } else {
                (worst.1.clone(), worst.0)
            };
            let contracted = blend(&anchor, &centroid, CONTRACTION);
            let f_contracted = objective(&contracted);
            if f_contracted < f_anchor {
                simplex[n] = (f_contracted, contracted);
            } else {
                let best_point = simplex[0].1.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let shrunk = blend(&entry.1, &best_point, SHRINK);
                    *entry = (objective(&shrunk), shrunk);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (value, point) = simplex.swap_remove(0);
    SearchOutcome {
        value,
        point,
        hit_cap,
    }
}
