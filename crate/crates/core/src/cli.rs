//! Library side of the command-line harness: basis and criterion tokens,
//! single-state checks, bound queries, tightness certification, grid scans
//! written as CSV, and the CSV self-consistency checker.
//!
//! Scans are deterministic: a fixed config (and seed) produces a byte
//! identical file. Grid rows are computed in parallel and written in
//! lexicographic grid order; `EURLAB_THREADS` caps the worker count.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::bounds::{
    certify_tightness, multi_observable_bound, scenario_bounds, BoundValue, TightnessCertificate,
};
use crate::criteria::{
    bipartite_criterion, full_separability_criterion, gme_criterion, steering_criterion,
    CriterionReport, SteeringDirection, Verdict,
};
use crate::entropy::joint_entropy;
use crate::observables::{
    mub_set, standard_bases, wootters_fields_basis, MeasurementBasis, ObservableScenario,
    StandardBasisKind,
};
use crate::states::{make_state, von_neumann_entropy, DensityMatrix, StateFamilySpec};
use crate::{Error, Result};

/// Formats a float with 9 significant digits (CSV cell convention).
pub fn fmt_float(x: f64) -> String {
    format!("{x:.8e}")
}

fn fmt_fixed9(x: f64) -> String {
    format!("{x:.9}")
}

/// Resolves a basis token (`Z`, `X`, `Y`, `comp`, `fourier`, `mub:r`) for a
/// site of dimension `dim`.
pub fn parse_basis_token(token: &str, dim: usize) -> Result<MeasurementBasis> {
    match token {
        "Z" | "z" => standard_bases(dim, StandardBasisKind::PauliZ),
        "X" | "x" => standard_bases(dim, StandardBasisKind::PauliX),
        "Y" | "y" => standard_bases(dim, StandardBasisKind::PauliY),
        "comp" => standard_bases(dim, StandardBasisKind::Computational),
        "fourier" => standard_bases(dim, StandardBasisKind::Fourier),
        _ => {
            if let Some(r) = token.strip_prefix("mub:") {
                let r: usize = r.parse().map_err(|_| {
                    Error::Config(format!(
                        "bad basis token `{token}`: index must be an integer"
                    ))
                })?;
                if dim == 2 {
                    let mut set = mub_set(2, 3)?;
                    if r >= set.len() {
                        return Err(Error::Config(format!(
                            "bad basis token `{token}`: a qubit has only 3 MUBs"
                        )));
                    }
                    return Ok(set.swap_remove(r));
                }
                wootters_fields_basis(dim, r)
            } else {
                Err(Error::Config(format!(
                    "unknown basis token `{token}` (expected Z, X, Y, comp, fourier, or mub:r)"
                )))
            }
        }
    }
}

/// Splits a comma-separated token list and resolves each basis.
pub fn parse_basis_list(list: &str, dim: usize) -> Result<Vec<MeasurementBasis>> {
    let tokens: Vec<&str> = list
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .collect();
    if tokens.is_empty() {
        return Err(Error::Config("basis list is empty".into()));
    }
    tokens
        .into_iter()
        .map(|t| parse_basis_token(t, dim))
        .collect()
}

/// Same basis token list on every site of the state.
pub fn scenario_from_tokens(dims: &[usize], list: &str) -> Result<ObservableScenario> {
    let per_site = dims
        .iter()
        .map(|&d| parse_basis_list(list, d))
        .collect::<Result<Vec<_>>>()?;
    ObservableScenario::new(per_site)
}

/// Evaluates a criterion token against a state.
///
/// `prop1`..`prop6` and the steering tokens run on `scenario`; the appendix
/// aliases carry their own fixed measurement sets: `criterio1` (two qubits,
/// {Z,X}, state-dependent), `criterio2`/`criterio3` (two qubits, Paulis,
/// state-independent/-dependent), `multi_ent1`/`multi_ent2` and
/// `gen_ent1`/`gen_ent2` (three qubits, Paulis), and `qudit` (computational
/// plus Fourier with the marginal-entropy term). A missing `scenario` is an
/// error only for the tokens that consume it.
pub fn evaluate_criterion_token(
    token: &str,
    state: &DensityMatrix,
    scenario: Option<&ObservableScenario>,
) -> Result<CriterionReport> {
    let need = || {
        scenario.ok_or_else(|| {
            Error::Config(format!(
                "criterion `{token}` needs a basis list compatible with the state dimensions"
            ))
        })
    };
    let two_qubit =
        |count: usize| -> Result<ObservableScenario> { ObservableScenario::uniform(2, mub_set(2, count)?) };
    let three_qubit_paulis =
        || -> Result<ObservableScenario> { ObservableScenario::uniform(3, mub_set(2, 3)?) };
    match token {
        "prop1" => bipartite_criterion(state, need()?, false),
        "prop2" => bipartite_criterion(state, need()?, true),
        "prop3" => full_separability_criterion(state, need()?, false),
        "prop4" => full_separability_criterion(state, need()?, true),
        "prop5" => gme_criterion(state, need()?, false),
        "prop6" => gme_criterion(state, need()?, true),
        "steer_a_to_b" => steering_criterion(state, need()?, SteeringDirection::AToB),
        "steer_b_to_a" => steering_criterion(state, need()?, SteeringDirection::BToA),
        "criterio1" => bipartite_criterion(state, &two_qubit(2)?, true),
        "criterio2" => bipartite_criterion(state, &two_qubit(3)?, false),
        "criterio3" => bipartite_criterion(state, &two_qubit(3)?, true),
        "multi_ent1" => full_separability_criterion(state, &three_qubit_paulis()?, false),
        "multi_ent2" => full_separability_criterion(state, &three_qubit_paulis()?, true),
        "gen_ent1" => gme_criterion(state, &three_qubit_paulis()?, false),
        "gen_ent2" => gme_criterion(state, &three_qubit_paulis()?, true),
        "qudit" => {
            let d = state.dims().first().copied().unwrap_or(2);
            let pair = vec![
                standard_bases(d, StandardBasisKind::Computational)?,
                standard_bases(d, StandardBasisKind::Fourier)?,
            ];
            bipartite_criterion(state, &ObservableScenario::uniform(2, pair)?, true)
        }
        _ => Err(Error::Config(format!("unknown criterion token `{token}`"))),
    }
}

fn split_tokens(list: &str) -> Vec<String> {
    list.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

/// One `check` invocation: a state family, a basis list, criterion tokens.
#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub family: StateFamilySpec,
    pub bases: String,
    pub criteria: String,
}

/// Evaluates every requested criterion, returning (token, report) pairs.
pub fn run_check(config: &CheckConfig) -> Result<Vec<(String, CriterionReport)>> {
    let state = make_state(&config.family)?.to_density();
    // The basis list may be inapplicable to this state (Pauli tokens on a
    // qudit, say); that only matters if some requested criterion uses it,
    // so defer the error to the tokens that do.
    let scenario = match scenario_from_tokens(state.dims(), &config.bases) {
        Ok(s) => Some(s),
        Err(err) => {
            let tokens = split_tokens(&config.criteria);
            if tokens.iter().any(|t| {
                matches!(t.as_str(), "prop1" | "prop2" | "prop3" | "prop4" | "prop5" | "prop6")
                    || t.starts_with("steer_")
            }) {
                return Err(err);
            }
            None
        }
    };
    let tokens = split_tokens(&config.criteria);
    if tokens.is_empty() {
        return Err(Error::Config("no criteria requested".into()));
    }
    tokens
        .into_iter()
        .map(|t| {
            let report = evaluate_criterion_token(&t, &state, scenario.as_ref())?;
            Ok((t, report))
        })
        .collect()
}

/// Renders a report as the one-line text format used on stdout.
pub fn format_report_line(token: &str, report: &CriterionReport) -> String {
    format!(
        "{token}: lhs {} threshold {} {} margin {}",
        fmt_fixed9(report.lhs),
        fmt_fixed9(report.threshold),
        match report.verdict {
            Verdict::Violated => "VIOLATED",
            Verdict::Satisfied => "SATISFIED",
        },
        fmt_fixed9(report.margin),
    )
}

/// Scan identifiers accepted by the `scan` subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanId {
    EpsFamily,
    Ghz,
    WPlane,
    Custom,
}

impl ScanId {
    pub fn parse(token: &str) -> Result<Self> {
        Ok(match token {
            "eps_family" => Self::EpsFamily,
            "ghz" => Self::Ghz,
            "w_plane" => Self::WPlane,
            "custom" => Self::Custom,
            _ => {
                return Err(Error::Config(format!(
                    "unknown scan id `{token}` (expected eps_family, ghz, w_plane, or custom)"
                )))
            }
        })
    }

    fn default_family(&self) -> Option<ScanFamily> {
        match self {
            Self::EpsFamily => Some(ScanFamily::Eps),
            Self::Ghz => Some(ScanFamily::Ghz),
            Self::WPlane => Some(ScanFamily::W),
            Self::Custom => None,
        }
    }

    pub fn default_criteria(&self) -> &'static str {
        match self {
            Self::EpsFamily => "criterio1,criterio2,criterio3",
            _ => "multi_ent1,multi_ent2,gen_ent1,gen_ent2",
        }
    }
}

/// State family a scan sweeps over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanFamily {
    Eps,
    Ghz,
    W,
}

impl ScanFamily {
    pub fn parse(token: &str) -> Result<Self> {
        Ok(match token {
            "eps" => Self::Eps,
            "ghz" => Self::Ghz,
            "w" => Self::W,
            _ => {
                return Err(Error::Config(format!(
                    "unknown scan family `{token}` (expected eps, ghz, or w)"
                )))
            }
        })
    }

    fn parameters(&self) -> &'static [&'static str] {
        match self {
            Self::Eps => &["eps"],
            Self::Ghz => &["l0"],
            Self::W => &["l0", "l2"],
        }
    }

    fn site_dims(&self) -> Vec<usize> {
        match self {
            Self::Eps => vec![2, 2],
            Self::Ghz | Self::W => vec![2, 2, 2],
        }
    }

    /// Family spec at one grid point; `None` marks an infeasible combination
    /// (outside the W normalization triangle λ₀² + λ₂² < 1).
    fn spec_at(&self, values: &[f64]) -> Option<StateFamilySpec> {
        match self {
            Self::Eps => Some(StateFamilySpec::EpsFamily { eps: values[0] }),
            Self::Ghz => Some(StateFamilySpec::Ghz { lambda0: values[0] }),
            Self::W => {
                let (l0, l2) = (values[0], values[1]);
                (l0 * l0 + l2 * l2 < 1.0).then_some(StateFamilySpec::W {
                    lambda0: l0,
                    lambda2: l2,
                })
            }
        }
    }
}

/// One scanned parameter: `steps` interior points of (min, max).
#[derive(Clone, Debug)]
pub struct GridAxis {
    pub param: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridAxis {
    fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::Config(format!(
                "grid axis `{}`: steps must be at least 2",
                self.param
            )));
        }
        if !self.min.is_finite() || !self.max.is_finite() || self.min >= self.max {
            return Err(Error::Config(format!(
                "grid axis `{}`: need finite min < max",
                self.param
            )));
        }
        Ok(())
    }

    /// The families live on open intervals, so grid points exclude the exact
    /// endpoints: value_i = min + (max−min)·i/(steps+1), i = 1..=steps.
    fn value(&self, i: usize) -> f64 {
        self.min + (self.max - self.min) * (i + 1) as f64 / (self.steps + 1) as f64
    }
}

/// Full description of a scan run.
#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub scan_id: ScanId,
    /// Family for `custom` scans; ignored otherwise.
    pub family: Option<ScanFamily>,
    /// Explicit axes; when empty, defaults derive from the scan id and `steps`.
    pub grid: Vec<GridAxis>,
    /// Interior points per default axis.
    pub steps: usize,
    /// Basis tokens for the per-setting entropy columns and `prop*` tokens.
    pub bases: String,
    pub criteria: String,
    pub output_path: PathBuf,
    pub seed: u64,
}

/// Per-criterion tallies returned by [`run_scan`].
#[derive(Clone, Debug)]
pub struct ScanSummary {
    pub rows: usize,
    pub feasible: usize,
    pub infeasible: usize,
    pub violated_counts: Vec<(String, usize)>,
}

struct RowData {
    params: Vec<f64>,
    feasible: bool,
    settings: Vec<f64>,
    marginals: Vec<f64>,
    reports: Vec<CriterionReport>,
}

/// Rayon pool honoring the `EURLAB_THREADS` cap.
fn scan_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var("EURLAB_THREADS") {
        let n: usize = raw.trim().parse().map_err(|_| {
            Error::Config(format!(
                "EURLAB_THREADS must be a nonnegative integer (got `{raw}`)"
            ))
        })?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| Error::Config(format!("failed to build thread pool: {e}")))
}

/// Runs the scan and writes the CSV file.
///
/// Row order is the lexicographic order of the grid (first axis slowest).
/// Infeasible points keep their parameter cells and carry `infeasible` in the
/// status column with the numeric cells left empty.
pub fn run_scan(config: &ScanConfig) -> Result<ScanSummary> {
    let family = match config.scan_id.default_family() {
        Some(f) => f,
        None => config
            .family
            .ok_or_else(|| Error::Config("custom scans require the `family` option".into()))?,
    };

    let axes: Vec<GridAxis> = if config.grid.is_empty() {
        family
            .parameters()
            .iter()
            .map(|p| GridAxis {
                param: (*p).to_string(),
                min: 0.0,
                max: 1.0,
                steps: config.steps,
            })
            .collect()
    } else {
        let expected = family.parameters();
        if config.grid.len() != expected.len()
            || config
                .grid
                .iter()
                .zip(expected)
                .any(|(axis, want)| axis.param != *want)
        {
            return Err(Error::Config(format!(
                "grid axes must match the family parameters {expected:?} in order"
            )));
        }
        config.grid.clone()
    };
    for axis in &axes {
        axis.validate()?;
    }

    let criteria = split_tokens(&config.criteria);
    if criteria.is_empty() {
        return Err(Error::Config("no criteria requested".into()));
    }
    let dims = family.site_dims();
    let scenario = scenario_from_tokens(&dims, &config.bases)?;

    let shape: Vec<usize> = axes.iter().map(|a| a.steps).collect();
    let total: usize = shape.iter().product();

    let pool = scan_pool()?;
    let rows = pool.install(|| -> Result<Vec<RowData>> {
        (0..total)
            .into_par_iter()
            .map(|flat| {
                let mut rem = flat;
                let mut indices = vec![0usize; axes.len()];
                for k in (0..axes.len()).rev() {
                    indices[k] = rem % shape[k];
                    rem /= shape[k];
                }
                let params: Vec<f64> = indices
                    .iter()
                    .zip(&axes)
                    .map(|(&i, axis)| axis.value(i))
                    .collect();
                compute_row(family, &params, &scenario, &criteria)
            })
            .collect()
    })?;

    let header = scan_header(&axes, &scenario, &dims, &criteria);
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in &rows {
        out.push_str(&render_row(row, header.len()));
        out.push('\n');
    }
    if let Some(parent) = config.output_path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(&config.output_path, out)?;

    let mut violated_counts: Vec<(String, usize)> =
        criteria.iter().map(|t| (t.clone(), 0)).collect();
    let mut feasible = 0usize;
    for row in &rows {
        if !row.feasible {
            continue;
        }
        feasible += 1;
        for (slot, report) in violated_counts.iter_mut().zip(&row.reports) {
            if report.verdict == Verdict::Violated {
                slot.1 += 1;
            }
        }
    }
    Ok(ScanSummary {
        rows: rows.len(),
        feasible,
        infeasible: rows.len() - feasible,
        violated_counts,
    })
}

fn scan_header(
    axes: &[GridAxis],
    scenario: &ObservableScenario,
    dims: &[usize],
    criteria: &[String],
) -> Vec<String> {
    let mut header: Vec<String> = axes.iter().map(|a| a.param.clone()).collect();
    header.push("status".into());
    for i in 0..scenario.num_settings() {
        header.push(format!("h_{}", i + 1));
    }
    for site in 0..dims.len() {
        header.push(format!("s_{}", char::from(b'a' + site as u8)));
    }
    for token in criteria {
        header.push(format!("{token}_lhs"));
        header.push(format!("{token}_threshold"));
        header.push(format!("{token}_margin"));
        header.push(format!("{token}_verdict"));
    }
    header
}

fn compute_row(
    family: ScanFamily,
    params: &[f64],
    scenario: &ObservableScenario,
    criteria: &[String],
) -> Result<RowData> {
    let Some(spec) = family.spec_at(params) else {
        return Ok(RowData {
            params: params.to_vec(),
            feasible: false,
            settings: Vec::new(),
            marginals: Vec::new(),
            reports: Vec::new(),
        });
    };
    let state = make_state(&spec)?.to_density();
    let settings = (0..scenario.num_settings())
        .map(|i| joint_entropy(&state, &scenario.setting(i)))
        .collect::<Result<Vec<_>>>()?;
    let marginals = (0..state.dims().len())
        .map(|site| Ok(von_neumann_entropy(&state.marginal(site)?)))
        .collect::<Result<Vec<_>>>()?;
    let reports = criteria
        .iter()
        .map(|t| evaluate_criterion_token(t, &state, Some(scenario)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RowData {
        params: params.to_vec(),
        feasible: true,
        settings,
        marginals,
        reports,
    })
}

fn render_row(row: &RowData, columns: usize) -> String {
    let mut cells: Vec<String> = row.params.iter().map(|&v| fmt_float(v)).collect();
    if row.feasible {
        cells.push("ok".into());
        cells.extend(row.settings.iter().map(|&v| fmt_float(v)));
        cells.extend(row.marginals.iter().map(|&v| fmt_float(v)));
        for report in &row.reports {
            cells.push(fmt_float(report.lhs));
            cells.push(fmt_float(report.threshold));
            cells.push(fmt_float(report.margin));
            cells.push(report.verdict.as_str().to_string());
        }
    } else {
        cells.push("infeasible".into());
        cells.resize(columns, String::new());
    }
    cells.join(",")
}

/// A `bound` query: either the first `count` MUBs in dimension `d`, or an
/// explicit basis token list.
#[derive(Clone, Debug)]
pub enum BoundQuery {
    Mubs { dim: usize, count: usize },
    Bases { dim: usize, tokens: String },
}

impl BoundQuery {
    fn bases(&self) -> Result<Vec<MeasurementBasis>> {
        match self {
            Self::Mubs { dim, count } => mub_set(*dim, *count),
            Self::Bases { dim, tokens } => parse_basis_list(tokens, *dim),
        }
    }
}

pub fn run_bound(query: &BoundQuery) -> Result<BoundValue> {
    multi_observable_bound(&query.bases()?)
}

/// Renders a bound as `value tight|not_tight provenance`.
pub fn format_bound(bound: &BoundValue) -> String {
    format!(
        "{} {} {}",
        fmt_fixed9(bound.value),
        if bound.tight { "tight" } else { "not_tight" },
        bound.provenance.as_str()
    )
}

/// A `minimize` run: one measurement set applied to `sites` subsystems.
#[derive(Clone, Debug)]
pub struct MinimizeConfig {
    pub query: BoundQuery,
    pub sites: usize,
    pub restarts: usize,
    pub seed: u64,
}

#[derive(Debug)]
pub struct MinimizeOutcome {
    pub certificate: TightnessCertificate,
    /// Registry/composition bound the minimum is compared against.
    pub reference: f64,
    pub gap: f64,
}

pub fn run_minimize(config: &MinimizeConfig) -> Result<MinimizeOutcome> {
    if config.sites == 0 {
        return Err(Error::Config("sites must be at least 1".into()));
    }
    let bases = config.query.bases()?;
    let reference = match config.sites {
        1 => multi_observable_bound(&bases)?.value,
        2 => scenario_bounds(&bases)?.f2.value,
        // Beyond two sites the best registry value is the fully separable
        // threshold n·F1.
        n => multi_observable_bound(&bases)?.value * n as f64,
    };
    let per_site = vec![bases; config.sites];
    let certificate = certify_tightness(&per_site, reference, config.restarts, config.seed)?;
    Ok(MinimizeOutcome {
        gap: certificate.gap,
        reference,
        certificate,
    })
}

pub fn format_minimize(outcome: &MinimizeOutcome) -> String {
    let mut text = String::new();
    let _ = writeln!(
        text,
        "min_found {}",
        fmt_fixed9(outcome.certificate.min_found)
    );
    let _ = writeln!(text, "reference {}", fmt_fixed9(outcome.reference));
    let _ = writeln!(text, "gap {}", fmt_fixed9(outcome.gap));
    let _ = writeln!(text, "converged {}", !outcome.certificate.hit_iteration_cap);
    let amps: Vec<String> = outcome
        .certificate
        .argmin
        .amplitudes()
        .iter()
        .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
        .collect();
    let _ = write!(text, "argmin [{}]", amps.join(", "));
    text
}

/// Parsed CSV: header plus raw cell rows.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::CsvCheck("file is empty".into()))?
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    Ok((header, rows))
}

/// Re-derives every verdict from its own lhs/threshold/margin columns.
///
/// Slack of one part in 1e−7 absorbs the 9-significant-digit rounding of the
/// printed cells; any genuine inconsistency is far larger.
pub fn verify_csv(path: &Path) -> Result<(usize, usize)> {
    let (header, rows) = read_csv(path)?;
    let find = |name: &str| header.iter().position(|h| h == name);

    let mut groups: Vec<(String, [usize; 4])> = Vec::new();
    for (idx, name) in header.iter().enumerate() {
        if let Some(prefix) = name.strip_suffix("_lhs") {
            let threshold = find(&format!("{prefix}_threshold"));
            let margin = find(&format!("{prefix}_margin"));
            let verdict = find(&format!("{prefix}_verdict"));
            if let (Some(t), Some(m), Some(v)) = (threshold, margin, verdict) {
                groups.push((prefix.to_string(), [idx, t, m, v]));
            }
        }
    }
    if groups.is_empty() {
        return Err(Error::CsvCheck(
            "no lhs/threshold/margin/verdict column groups found".into(),
        ));
    }
    let status_col = find("status");

    for (line, row) in rows.iter().enumerate() {
        if row.len() != header.len() {
            return Err(Error::CsvCheck(format!(
                "row {}: {} cells, header has {}",
                line + 2,
                row.len(),
                header.len()
            )));
        }
        if let Some(s) = status_col {
            if row[s] == "infeasible" {
                continue;
            }
        }
        for (prefix, [lhs_col, thr_col, margin_col, verdict_col]) in &groups {
            let parse = |col: usize| -> Result<f64> {
                row[col].parse::<f64>().map_err(|_| {
                    Error::CsvCheck(format!(
                        "row {}: `{}` is not a float in column {}",
                        line + 2,
                        row[col],
                        header[col]
                    ))
                })
            };
            let lhs = parse(*lhs_col)?;
            let threshold = parse(*thr_col)?;
            let margin = parse(*margin_col)?;
            if ((lhs - threshold) - margin).abs() > 1e-7 {
                return Err(Error::CsvCheck(format!(
                    "row {}: {prefix} margin {margin} does not match lhs - threshold = {}",
                    line + 2,
                    lhs - threshold
                )));
            }
            let verdict = &row[*verdict_col];
            let consistent = match verdict.as_str() {
                "violated" => margin < -0.5e-9,
                "satisfied" => margin > -2e-9,
                other => {
                    return Err(Error::CsvCheck(format!(
                        "row {}: unknown verdict `{other}`",
                        line + 2
                    )))
                }
            };
            if !consistent {
                return Err(Error::CsvCheck(format!(
                    "row {}: {prefix} verdict `{verdict}` inconsistent with margin {margin}",
                    line + 2
                )));
            }
        }
    }
    Ok((rows.len(), groups.len()))
}

/// Reads a flat `key=value` config file; `#` starts a comment line.
pub fn load_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path)?;
    let mut map = BTreeMap::new();
    for (number, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config(format!(
                "{}:{}: expected key=value",
                path.display(),
                number + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}
