//! Entanglement and steering criteria built on joint-entropy EURs.
//!
//! Each criterion compares a sum of joint Shannon entropies against a
//! threshold assembled from single- and two-system EUR bounds, optionally
//! strengthened by von Neumann entropies of the marginals. A left-hand side
//! strictly below the threshold (margin < −1e−9) is a detection: the state
//! cannot be separable at the level the criterion tests.

use serde::Serialize;

use crate::bounds::{multi_observable_bound, scenario_bounds};
use crate::entropy::{conditional_entropy, joint_entropy};
use crate::observables::ObservableScenario;
use crate::states::{von_neumann_entropy, DensityMatrix};
use crate::{Error, Result};

/// Margins below −VERDICT_TOL count as violations; the guard keeps
/// boundary-attaining separable states from being flagged by rounding.
pub const VERDICT_TOL: f64 = 1e-9;

/// Identifier of one of the implemented criteria.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionId {
    /// Bipartite, state-independent: Σ H(Aᵢ,Bᵢ) ≥ f(𝒜,L) + f(ℬ,L).
    Prop1,
    /// Bipartite, plus max(S(ρ_A), S(ρ_B)).
    Prop2,
    /// Full separability, state-independent: Σ H(V₁..Vₙ) ≥ Σᵢ f(𝒱ᵢ,L).
    Prop3,
    /// Full separability, plus max_i S(ρᵢ).
    Prop4,
    /// Biseparability (3 parties): Σ H ≥ (5/3)F₁ + (1/3)F₂.
    Prop5,
    /// Biseparability, plus (1/3)Σ_X S(ρ_X).
    Prop6,
    /// Steering A→B: Σ H(Bᵢ|Aᵢ) ≥ f(ℬ,L).
    SteerAToB,
    /// Steering B→A: Σ H(Aᵢ|Bᵢ) ≥ f(𝒜,L).
    SteerBToA,
}

impl CriterionId {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Prop1 => "prop1",
            Self::Prop2 => "prop2",
            Self::Prop3 => "prop3",
            Self::Prop4 => "prop4",
            Self::Prop5 => "prop5",
            Self::Prop6 => "prop6",
            Self::SteerAToB => "steer_a_to_b",
            Self::SteerBToA => "steer_b_to_a",
        }
    }

    pub fn parse(token: &str) -> Option<Self> {
        Some(match token {
            "prop1" => Self::Prop1,
            "prop2" => Self::Prop2,
            "prop3" => Self::Prop3,
            "prop4" => Self::Prop4,
            "prop5" => Self::Prop5,
            "prop6" => Self::Prop6,
            "steer_a_to_b" => Self::SteerAToB,
            "steer_b_to_a" => Self::SteerBToA,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The inequality fails: the state is detected.
    Violated,
    /// The inequality holds: no conclusion.
    Satisfied,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Violated => "violated",
            Self::Satisfied => "satisfied",
        }
    }
}

/// Named sub-quantity of a criterion evaluation (one H(·), S(ρ_X), f, F₁, F₂).
#[derive(Clone, Debug, Serialize)]
pub struct Component {
    pub name: String,
    pub value: f64,
}

/// Outcome of evaluating one criterion on one state.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub criterion_id: CriterionId,
    pub lhs: f64,
    pub threshold: f64,
    pub margin: f64,
    pub verdict: Verdict,
    pub components: Vec<Component>,
}

impl CriterionReport {
    fn new(
        criterion_id: CriterionId,
        lhs: f64,
        threshold: f64,
        components: Vec<Component>,
    ) -> Self {
        let margin = lhs - threshold;
        let verdict = if margin < -VERDICT_TOL {
            Verdict::Violated
        } else {
            Verdict::Satisfied
        };
        Self {
            criterion_id,
            lhs,
            threshold,
            margin,
            verdict,
            components,
        }
    }
}

fn site_letter(site: usize) -> String {
    if site < 26 {
        char::from(b'A' + site as u8).to_string()
    } else {
        format!("{}", site + 1)
    }
}

fn check_state_matches_scenario(
    state: &DensityMatrix,
    scenario: &ObservableScenario,
) -> Result<()> {
    if state.dims() != scenario.dims() {
        return Err(Error::InvalidScenario {
            reason: format!(
                "state dimensions {:?} do not match scenario dimensions {:?}",
                state.dims(),
                scenario.dims()
            ),
        });
    }
    Ok(())
}

/// Sum of joint entropies Σᵢ H over all settings, plus each term.
fn entropy_sum(state: &DensityMatrix, scenario: &ObservableScenario) -> Result<(f64, Vec<f64>)> {
    let mut terms = Vec::with_capacity(scenario.num_settings());
    for i in 0..scenario.num_settings() {
        terms.push(joint_entropy(state, &scenario.setting(i))?);
    }
    Ok((terms.iter().sum(), terms))
}

fn marginal_entropies(state: &DensityMatrix) -> Result<Vec<f64>> {
    (0..state.dims().len())
        .map(|site| Ok(von_neumann_entropy(&state.marginal(site)?)))
        .collect()
}

/// Bipartite criterion (state-independent or with the max-marginal term).
///
/// Violation certifies entanglement; by the symmetric decomposition of the
/// joint entropy it equally certifies two-way steerability.
pub fn bipartite_criterion(
    state: &DensityMatrix,
    scenario: &ObservableScenario,
    state_dependent: bool,
) -> Result<CriterionReport> {
    if state.dims().len() != 2 {
        return Err(Error::SiteCount {
            expected: 2,
            got: state.dims().len(),
        });
    }
    check_state_matches_scenario(state, scenario)?;

    let (lhs, terms) = entropy_sum(state, scenario)?;
    let f_a = multi_observable_bound(scenario.site_bases(0))?;
    let f_b = multi_observable_bound(scenario.site_bases(1))?;

    let mut components: Vec<Component> = terms
        .iter()
        .enumerate()
        .map(|(i, &h)| Component {
            name: format!("H_{}", i + 1),
            value: h,
        })
        .collect();
    components.push(Component {
        name: "f_A".into(),
        value: f_a.value,
    });
    components.push(Component {
        name: "f_B".into(),
        value: f_b.value,
    });

    let mut threshold = f_a.value + f_b.value;
    let id = if state_dependent {
        let marginals = marginal_entropies(state)?;
        for (site, &s) in marginals.iter().enumerate() {
            components.push(Component {
                name: format!("S_{}", site_letter(site)),
                value: s,
            });
        }
        threshold += marginals.iter().copied().fold(0.0, f64::max);
        CriterionId::Prop2
    } else {
        CriterionId::Prop1
    };
    Ok(CriterionReport::new(id, lhs, threshold, components))
}

/// Full-separability criterion for n ≥ 2 parties.
///
/// Violation certifies that the state is not fully separable.
pub fn full_separability_criterion(
    state: &DensityMatrix,
    scenario: &ObservableScenario,
    state_dependent: bool,
) -> Result<CriterionReport> {
    let n = state.dims().len();
    if n < 2 {
        return Err(Error::SiteCount {
            expected: 2,
            got: n,
        });
    }
    check_state_matches_scenario(state, scenario)?;

    let (lhs, terms) = entropy_sum(state, scenario)?;
    let mut components: Vec<Component> = terms
        .iter()
        .enumerate()
        .map(|(i, &h)| Component {
            name: format!("H_{}", i + 1),
            value: h,
        })
        .collect();

    let mut threshold = 0.0;
    for site in 0..n {
        let f = multi_observable_bound(scenario.site_bases(site))?;
        threshold += f.value;
        components.push(Component {
            name: format!("f_{}", site_letter(site)),
            value: f.value,
        });
    }

    let id = if state_dependent {
        let marginals = marginal_entropies(state)?;
        for (site, &s) in marginals.iter().enumerate() {
            components.push(Component {
                name: format!("S_{}", site_letter(site)),
                value: s,
            });
        }
        threshold += marginals.iter().copied().fold(0.0, f64::max);
        CriterionId::Prop4
    } else {
        CriterionId::Prop3
    };
    Ok(CriterionReport::new(id, lhs, threshold, components))
}

/// Genuine-multipartite-entanglement criterion for exactly three parties.
///
/// Requires the symmetry the proof uses: equal site dimensions and identical
/// per-site measurement lists. Violation certifies the state is not
/// biseparable, i.e. genuinely multipartite entangled.
pub fn gme_criterion(
    state: &DensityMatrix,
    scenario: &ObservableScenario,
    state_dependent: bool,
) -> Result<CriterionReport> {
    let n = state.dims().len();
    if n != 3 {
        return Err(Error::SiteCount {
            expected: 3,
            got: n,
        });
    }
    check_state_matches_scenario(state, scenario)?;
    let d = state.dims()[0];
    if state.dims().iter().any(|&dim| dim != d) {
        return Err(Error::InvalidScenario {
            reason: "genuine-multipartite criterion requires equal site dimensions".into(),
        });
    }
    if !scenario.sites_identical(1e-12) {
        return Err(Error::InvalidScenario {
            reason: "genuine-multipartite criterion requires identical measurements on all sites"
                .into(),
        });
    }

    let (lhs, terms) = entropy_sum(state, scenario)?;
    let sb = scenario_bounds(scenario.site_bases(0))?;
    let mut threshold = (5.0 / 3.0) * sb.f1.value + sb.f2.value / 3.0;

    let mut components: Vec<Component> = terms
        .iter()
        .enumerate()
        .map(|(i, &h)| Component {
            name: format!("H_{}", i + 1),
            value: h,
        })
        .collect();
    components.push(Component {
        name: "F1".into(),
        value: sb.f1.value,
    });
    components.push(Component {
        name: "F2".into(),
        value: sb.f2.value,
    });

    let id = if state_dependent {
        let marginals = marginal_entropies(state)?;
        for (site, &s) in marginals.iter().enumerate() {
            components.push(Component {
                name: format!("S_{}", site_letter(site)),
                value: s,
            });
        }
        threshold += marginals.iter().sum::<f64>() / 3.0;
        CriterionId::Prop6
    } else {
        CriterionId::Prop5
    };
    Ok(CriterionReport::new(id, lhs, threshold, components))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SteeringDirection {
    /// Tests Σᵢ H(Bᵢ|Aᵢ) ≥ f(ℬ,L); violation ⇒ steerable from A to B.
    AToB,
    /// Tests Σᵢ H(Aᵢ|Bᵢ) ≥ f(𝒜,L); violation ⇒ steerable from B to A.
    BToA,
}

/// Conditional-entropy steering criterion on a bipartite state.
pub fn steering_criterion(
    state: &DensityMatrix,
    scenario: &ObservableScenario,
    direction: SteeringDirection,
) -> Result<CriterionReport> {
    if state.dims().len() != 2 {
        return Err(Error::SiteCount {
            expected: 2,
            got: state.dims().len(),
        });
    }
    check_state_matches_scenario(state, scenario)?;

    let (conditioned, conditioning, id) = match direction {
        SteeringDirection::AToB => (1usize, 0usize, CriterionId::SteerAToB),
        SteeringDirection::BToA => (0, 1, CriterionId::SteerBToA),
    };

    let mut lhs = 0.0;
    let mut components = Vec::with_capacity(scenario.num_settings() + 1);
    for i in 0..scenario.num_settings() {
        let h = conditional_entropy(state, &[conditioned], &[conditioning], &scenario.setting(i))?;
        components.push(Component {
            name: format!(
                "H_{}({}|{})",
                i + 1,
                site_letter(conditioned),
                site_letter(conditioning)
            ),
            value: h,
        });
        lhs += h;
    }
    let f = multi_observable_bound(scenario.site_bases(conditioned))?;
    components.push(Component {
        name: format!("f_{}", site_letter(conditioned)),
        value: f.value,
    });
    Ok(CriterionReport::new(id, lhs, f.value, components))
}
