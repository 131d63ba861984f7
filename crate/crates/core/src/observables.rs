//! Measurement bases: computational, Fourier, Pauli eigenbases, and
//! Wootters–Fields MUB sets for prime dimensions.
//!
//! A basis stands in for a non-degenerate observable; the entropies computed
//! elsewhere depend only on the eigenbasis, never on the spectrum.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// Entrywise tolerance on the Gram matrix of a basis.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;

/// Orthonormal basis of a d-dimensional complex space.
#[derive(Clone, Debug)]
pub struct MeasurementBasis {
    dim: usize,
    vectors: Vec<Vec<Complex64>>,
    label: String,
}

impl MeasurementBasis {
    /// Validates that the vectors form an orthonormal basis (Gram matrix equal
    /// to the identity within [`ORTHONORMALITY_TOL`] entrywise).
    pub fn new(vectors: Vec<Vec<Complex64>>, label: impl Into<String>) -> Result<Self> {
        let dim = vectors.len();
        if dim == 0 {
            return Err(Error::InvalidScenario {
                reason: "basis must contain at least one vector".into(),
            });
        }
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: v.len(),
                    right: dim,
                });
            }
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFiniteEntries);
            }
        }
        let mut deviation: f64 = 0.0;
        for j in 0..dim {
            for k in 0..dim {
                let gram = inner(&vectors[j], &vectors[k]);
                let target = if j == k { Complex64::ONE } else { Complex64::ZERO };
                deviation = deviation.max((gram - target).norm());
            }
        }
        if deviation > ORTHONORMALITY_TOL {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(Self {
            dim,
            vectors,
            label: label.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> &[Complex64] {
        &self.vectors[k]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Entrywise comparison of basis vectors, phases included.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim
            && self
                .vectors
                .iter()
                .zip(&other.vectors)
                .all(|(a, b)| a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol))
    }
}

/// ⟨a|b⟩ with the convention that the first argument is conjugated.
pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardBasisKind {
    Computational,
    Fourier,
    PauliX,
    PauliY,
    PauliZ,
}

/// Builds one of the named bases.
///
/// The Fourier basis uses ω = e^{+2πi/d} with v_k[j] = ω^{jk}/√d; Pauli
/// eigenbases list the +1 eigenvector first. Conventions are fixed so that
/// outcome orderings (and hence CSV columns) are reproducible.
pub fn standard_bases(dim: usize, kind: StandardBasisKind) -> Result<MeasurementBasis> {
    if dim == 0 {
        return Err(Error::InvalidParameter {
            name: "dim",
            reason: "dimension must be positive".into(),
        });
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match kind {
        StandardBasisKind::Computational => {
            let vectors = (0..dim)
                .map(|k| {
                    let mut v = vec![Complex64::ZERO; dim];
                    v[k] = Complex64::ONE;
                    v
                })
                .collect();
            MeasurementBasis::new(vectors, "comp")
        }
        StandardBasisKind::Fourier => {
            let norm = 1.0 / (dim as f64).sqrt();
            let vectors = (0..dim)
                .map(|k| {
                    (0..dim)
                        .map(|j| {
                            let phase = 2.0 * PI * ((j * k) % dim) as f64 / dim as f64;
                            Complex64::from_polar(norm, phase)
                        })
                        .collect()
                })
                .collect();
            MeasurementBasis::new(vectors, "fourier")
        }
        StandardBasisKind::PauliZ | StandardBasisKind::PauliX | StandardBasisKind::PauliY => {
            if dim != 2 {
                return Err(Error::PauliDimension { dim });
            }
            let (vectors, label): (Vec<Vec<Complex64>>, &str) = match kind {
                StandardBasisKind::PauliZ => (
                    vec![
                        vec![Complex64::ONE, Complex64::ZERO],
                        vec![Complex64::ZERO, Complex64::ONE],
                    ],
                    "Z",
                ),
                StandardBasisKind::PauliX => (
                    vec![
                        vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
                        vec![Complex64::new(s, 0.0), Complex64::new(-s, 0.0)],
                    ],
                    "X",
                ),
                StandardBasisKind::PauliY => (
                    vec![
                        vec![Complex64::new(s, 0.0), Complex64::new(0.0, s)],
                        vec![Complex64::new(s, 0.0), Complex64::new(0.0, -s)],
                    ],
                    "Y",
                ),
                _ => unreachable!(),
            };
            MeasurementBasis::new(vectors, label)
        }
    }
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Set of `count` pairwise mutually unbiased bases in prime dimension `dim`.
///
/// For d = 2 these are the Pauli Z, X, Y eigenbases. For odd prime d the set
/// is the computational basis followed by the Wootters–Fields bases
/// v_k[j] = ω^{r j² + k j}/√d for r = 0..d−1 (r = 0 is the Fourier basis).
pub fn mub_set(dim: usize, count: usize) -> Result<Vec<MeasurementBasis>> {
    if !is_prime(dim) {
        return Err(Error::NonPrimeDimension { dim });
    }
    if count < 2 {
        return Err(Error::TooFewObservables { min: 2, got: count });
    }
    if count > dim + 1 {
        return Err(Error::TooManyBases {
            requested: count,
            max: dim + 1,
            dim,
        });
    }
    if dim == 2 {
        let all = [
            standard_bases(2, StandardBasisKind::PauliZ)?,
            standard_bases(2, StandardBasisKind::PauliX)?,
            standard_bases(2, StandardBasisKind::PauliY)?,
        ];
        return Ok(all.into_iter().take(count).collect());
    }

    let mut bases = Vec::with_capacity(count);
    bases.push(standard_bases(dim, StandardBasisKind::Computational)?);
    for r in 0..dim {
        if bases.len() == count {
            break;
        }
        bases.push(wootters_fields_basis(dim, r)?);
    }
    Ok(bases)
}

/// Wootters–Fields basis r for odd prime d: v_k[j] = ω^{r j² + k j}/√d.
pub fn wootters_fields_basis(dim: usize, r: usize) -> Result<MeasurementBasis> {
    if !is_prime(dim) || dim == 2 {
        return Err(Error::NonPrimeDimension { dim });
    }
    if r >= dim {
        return Err(Error::InvalidParameter {
            name: "r",
            reason: format!("phase index must be below the dimension {dim}"),
        });
    }
    let norm = 1.0 / (dim as f64).sqrt();
    let label = if r == 0 {
        "fourier".to_string()
    } else {
        format!("mub:{r}")
    };
    let vectors = (0..dim)
        .map(|k| {
            (0..dim)
                .map(|j| {
                    let exponent = (r * j * j + k * j) % dim;
                    let phase = 2.0 * PI * exponent as f64 / dim as f64;
                    Complex64::from_polar(norm, phase)
                })
                .collect()
        })
        .collect();
    MeasurementBasis::new(vectors, label)
}

/// Maximum eigenstate overlap c = max_{j,k} |⟨a_j|b_k⟩|.
pub fn max_overlap(b1: &MeasurementBasis, b2: &MeasurementBasis) -> Result<f64> {
    if b1.dim() != b2.dim() {
        return Err(Error::DimensionMismatch {
            left: b1.dim(),
            right: b2.dim(),
        });
    }
    let mut c: f64 = 0.0;
    for a in b1.vectors() {
        for b in b2.vectors() {
            c = c.max(inner(a, b).norm());
        }
    }
    Ok(c)
}

/// True iff every cross overlap |⟨a_j|b_k⟩| is within `tol` of 1/√d.
pub fn is_mutually_unbiased(
    b1: &MeasurementBasis,
    b2: &MeasurementBasis,
    tol: f64,
) -> Result<bool> {
    if b1.dim() != b2.dim() {
        return Err(Error::DimensionMismatch {
            left: b1.dim(),
            right: b2.dim(),
        });
    }
    let target = 1.0 / (b1.dim() as f64).sqrt();
    for a in b1.vectors() {
        for b in b2.vectors() {
            if (inner(a, b).norm() - target).abs() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Per-site lists of measurement settings: site s measures
/// `per_site_bases[s][i]` in joint setting i.
#[derive(Clone, Debug)]
pub struct ObservableScenario {
    dims: Vec<usize>,
    per_site_bases: Vec<Vec<MeasurementBasis>>,
}

impl ObservableScenario {
    /// Every site must provide the same number of settings, and each basis
    /// must match its site's dimension.
    pub fn new(per_site_bases: Vec<Vec<MeasurementBasis>>) -> Result<Self> {
        if per_site_bases.is_empty() {
            return Err(Error::InvalidScenario {
                reason: "scenario needs at least one site".into(),
            });
        }
        let settings = per_site_bases[0].len();
        if settings == 0 {
            return Err(Error::InvalidScenario {
                reason: "scenario needs at least one measurement setting".into(),
            });
        }
        let mut dims = Vec::with_capacity(per_site_bases.len());
        for (site, list) in per_site_bases.iter().enumerate() {
            if list.len() != settings {
                return Err(Error::InvalidScenario {
                    reason: format!(
                        "site {site} has {} settings, expected {settings}",
                        list.len()
                    ),
                });
            }
            let d = list[0].dim();
            if list.iter().any(|b| b.dim() != d) {
                return Err(Error::InvalidScenario {
                    reason: format!("site {site} mixes basis dimensions"),
                });
            }
            dims.push(d);
        }
        Ok(Self {
            dims,
            per_site_bases,
        })
    }

    /// Same basis list on every one of `sites` subsystems.
    pub fn uniform(sites: usize, bases: Vec<MeasurementBasis>) -> Result<Self> {
        Self::new(vec![bases; sites])
    }

    pub fn num_sites(&self) -> usize {
        self.dims.len()
    }

    /// Number of joint measurement settings L.
    pub fn num_settings(&self) -> usize {
        self.per_site_bases[0].len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn site_bases(&self, site: usize) -> &[MeasurementBasis] {
        &self.per_site_bases[site]
    }

    /// The bases measured jointly in setting i, one per site.
    pub fn setting(&self, i: usize) -> Vec<&MeasurementBasis> {
        self.per_site_bases.iter().map(|list| &list[i]).collect()
    }

    /// True iff all sites use the same settings (entrywise, phases included).
    pub fn sites_identical(&self, tol: f64) -> bool {
        let first = &self.per_site_bases[0];
        self.per_site_bases[1..]
            .iter()
            .all(|list| list.iter().zip(first).all(|(a, b)| a.approx_eq(b, tol)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli(kind: StandardBasisKind) -> MeasurementBasis {
        standard_bases(2, kind).unwrap()
    }

    #[test]
    fn pauli_bases_have_expected_vectors() {
        let z = pauli(StandardBasisKind::PauliZ);
        assert_eq!(z.vector(0), &[Complex64::ONE, Complex64::ZERO]);
        assert_eq!(z.vector(1), &[Complex64::ZERO, Complex64::ONE]);

        let x = pauli(StandardBasisKind::PauliX);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((x.vector(0)[0].re - s).abs() < 1e-15);
        assert!((x.vector(0)[1].re - s).abs() < 1e-15);
        assert!((x.vector(1)[1].re + s).abs() < 1e-15);

        // +1 eigenvector of sigma_y first: sigma_y (1, i)/sqrt(2) = +(1, i)/sqrt(2).
        let y = pauli(StandardBasisKind::PauliY);
        assert!((y.vector(0)[1] - Complex64::new(0.0, s)).norm() < 1e-15);
    }

    #[test]
    fn pauli_kind_rejects_other_dimensions() {
        assert!(matches!(
            standard_bases(3, StandardBasisKind::PauliX),
            Err(Error::PauliDimension { dim: 3 })
        ));
    }

    #[test]
    fn fourier_is_unbiased_to_computational() {
        for d in [2usize, 3, 4, 5, 6] {
            let comp = standard_bases(d, StandardBasisKind::Computational).unwrap();
            let four = standard_bases(d, StandardBasisKind::Fourier).unwrap();
            assert!(is_mutually_unbiased(&comp, &four, 1e-10).unwrap(), "d={d}");
            let c = max_overlap(&comp, &four).unwrap();
            assert!((c - 1.0 / (d as f64).sqrt()).abs() < 1e-12, "d={d}");
        }
    }

    #[test]
    fn mub_set_qubit_is_pauli_triple() {
        let set = mub_set(2, 3).unwrap();
        assert_eq!(set.len(), 3);
        assert_eq!(set[0].label(), "Z");
        assert_eq!(set[1].label(), "X");
        assert_eq!(set[2].label(), "Y");
        for i in 0..3 {
            for j in (i + 1)..3 {
                let c = max_overlap(&set[i], &set[j]).unwrap();
                assert!((c - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mub_sets_are_pairwise_unbiased() {
        for (d, count) in [(3usize, 4usize), (5, 6)] {
            let set = mub_set(d, count).unwrap();
            assert_eq!(set.len(), count);
            let target = 1.0 / (d as f64).sqrt();
            for i in 0..set.len() {
                for j in (i + 1)..set.len() {
                    assert!(
                        is_mutually_unbiased(&set[i], &set[j], 1e-12).unwrap(),
                        "d={d} pair ({i},{j})"
                    );
                    for a in set[i].vectors() {
                        for b in set[j].vectors() {
                            let overlap = inner(a, b).norm();
                            assert!((overlap - target).abs() < 1e-12, "d={d} overlap {overlap}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn mub_set_rejects_bad_inputs() {
        assert!(matches!(
            mub_set(4, 3),
            Err(Error::NonPrimeDimension { dim: 4 })
        ));
        assert!(matches!(
            mub_set(6, 3),
            Err(Error::NonPrimeDimension { dim: 6 })
        ));
        assert!(matches!(mub_set(3, 5), Err(Error::TooManyBases { .. })));
        assert!(matches!(mub_set(3, 1), Err(Error::TooFewObservables { .. })));
    }

    #[test]
    fn max_overlap_examples() {
        let z = pauli(StandardBasisKind::PauliZ);
        assert!((max_overlap(&z, &z).unwrap() - 1.0).abs() < 1e-15);

        let x = pauli(StandardBasisKind::PauliX);
        assert!((max_overlap(&z, &x).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);

        // Rotated real basis at angle pi/8 against the computational basis.
        let t = PI / 8.0;
        let rotated = MeasurementBasis::new(
            vec![
                vec![Complex64::new(t.cos(), 0.0), Complex64::new(t.sin(), 0.0)],
                vec![Complex64::new(-t.sin(), 0.0), Complex64::new(t.cos(), 0.0)],
            ],
            "rot",
        )
        .unwrap();
        assert!((max_overlap(&z, &rotated).unwrap() - t.cos()).abs() < 1e-12);
    }

    #[test]
    fn max_overlap_is_symmetric() {
        let set = mub_set(5, 6).unwrap();
        for i in 0..set.len() {
            for j in 0..set.len() {
                let ab = max_overlap(&set[i], &set[j]).unwrap();
                let ba = max_overlap(&set[j], &set[i]).unwrap();
                assert!((ab - ba).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn is_mutually_unbiased_cases() {
        let comp4 = standard_bases(4, StandardBasisKind::Computational).unwrap();
        let four4 = standard_bases(4, StandardBasisKind::Fourier).unwrap();
        assert!(is_mutually_unbiased(&comp4, &four4, 1e-10).unwrap());
        assert!(!is_mutually_unbiased(&comp4, &comp4, 1e-10).unwrap());

        let x = pauli(StandardBasisKind::PauliX);
        let y = pauli(StandardBasisKind::PauliY);
        assert!(is_mutually_unbiased(&x, &y, 1e-10).unwrap());

        let z = pauli(StandardBasisKind::PauliZ);
        assert!(matches!(
            is_mutually_unbiased(&z, &comp4, 1e-10),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn basis_constructor_rejects_non_orthonormal() {
        let bad = MeasurementBasis::new(
            vec![
                vec![Complex64::ONE, Complex64::ZERO],
                vec![Complex64::new(0.9, 0.0), Complex64::new(0.1, 0.0)],
            ],
            "bad",
        );
        assert!(matches!(bad, Err(Error::NotOrthonormal { .. })));
    }

    #[test]
    fn scenario_validates_shape() {
        let z = pauli(StandardBasisKind::PauliZ);
        let x = pauli(StandardBasisKind::PauliX);
        let scenario = ObservableScenario::uniform(2, vec![z.clone(), x.clone()]).unwrap();
        assert_eq!(scenario.num_sites(), 2);
        assert_eq!(scenario.num_settings(), 2);
        assert_eq!(scenario.dims(), &[2, 2]);
        assert!(scenario.sites_identical(1e-12));

        let ragged = ObservableScenario::new(vec![vec![z.clone(), x.clone()], vec![z.clone()]]);
        assert!(ragged.is_err());

        let mixed = ObservableScenario::new(vec![
            vec![z.clone()],
            vec![standard_bases(3, StandardBasisKind::Fourier).unwrap()],
        ])
        .unwrap();
        assert!(!mixed.sites_identical(1e-12));
    }
}
