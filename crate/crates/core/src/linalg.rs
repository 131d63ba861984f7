//! Dense complex linear algebra: Hermitian eigendecomposition (cyclic Jacobi),
//! Kronecker products, and partial traces.
//!
//! Everything here operates on small matrices (a few hundred entries at most),
//! so plain row-major storage and O(n³) algorithms are the right trade-off.

use num_complex::Complex64;

use crate::{Error, Result};

/// Entrywise tolerance for the Hermiticity check in [`eigh`].
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Off-diagonal Frobenius norm at which a Jacobi sweep is considered converged.
const JACOBI_OFF_TOL: f64 = 1e-13;

/// Safety cap on Jacobi sweeps; tiny Hermitian matrices converge in far fewer.
const JACOBI_MAX_SWEEPS: usize = 100;

/// Dense complex matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    /// Builds a matrix from a callback over (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self { rows, cols, entries }
    }

    /// Builds a matrix from nested row slices; rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    left: row.len(),
                    right: c,
                });
            }
        }
        Ok(Self {
            rows: r,
            cols: c,
            entries: rows.iter().flatten().copied().collect(),
        })
    }

    /// Column vector from a slice of amplitudes.
    pub fn column(v: &[Complex64]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            entries: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn all_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                left: self.entries.len(),
                right: other.entries.len(),
            });
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a += b;
        }
        Ok(out)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for a in &mut out.entries {
            *a *= factor;
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise deviation from Hermiticity, max |A[i,j] − conj(A[j,i])|.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Eigendecomposition of a Hermitian matrix: A = V Λ V†.
///
/// Eigenvalues are sorted ascending; the k-th column of `eigenvectors` is the
/// unit eigenvector for `eigenvalues[k]`.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// The input must be square and Hermitian within [`HERMITICITY_TOL`] entrywise;
/// it is symmetrized as (A + A†)/2 before the sweeps. Sweeps run until the
/// off-diagonal Frobenius norm drops below 1e−13.
pub fn eigh(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    if !a.all_finite() {
        return Err(Error::NonFiniteEntries);
    }
    let dev = a.hermiticity_deviation();
    if dev > HERMITICITY_TOL {
        return Err(Error::NotHermitian {
            deviation: dev,
            tol: HERMITICITY_TOL,
        });
    }

    let n = a.rows;
    // Symmetrize so the diagonal is exactly real and off-diagonal pairs conjugate.
    let mut m = ComplexMatrix::from_fn(n, n, |i, j| (a.get(i, j) + a.get(j, i).conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);

    let mut converged = false;
    let mut last_off = 0.0;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let off = off_diagonal_norm(&m);
        last_off = off;
        if off <= JACOBI_OFF_TOL {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&m) > JACOBI_OFF_TOL {
        return Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
            off: last_off,
        });
    }

    // Sort eigenvalues ascending, carrying eigenvector columns along.
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += m.get(i, j).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// One complex Jacobi rotation annihilating the (p,q) entry.
///
/// With a_pq = r·e^{iα}, the unitary G = diag-phase × real rotation has
/// G_pp = c·e^{iα}, G_pq = s·e^{iα}, G_qp = −s, G_qq = c, and A ← G†AG zeroes
/// the target entry while V ← VG accumulates eigenvectors.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m.get(p, q);
    let r = apq.norm();
    if r < 1e-300 {
        return;
    }
    let phase = apq / r;
    let app = m.get(p, p).re;
    let aqq = m.get(q, q).re;

    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + (1.0 + theta * theta).sqrt())
    } else {
        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let n = m.rows();
    let gp = phase * c; // G_pp
    let gq = phase * s; // G_pq

    // Columns: B = A·G.
    for k in 0..n {
        let akp = m.get(k, p);
        let akq = m.get(k, q);
        m.set(k, p, akp * gp - akq * s);
        m.set(k, q, akp * gq + akq * c);
    }
    // Rows: A' = G†·B.
    for k in 0..n {
        let bpk = m.get(p, k);
        let bqk = m.get(q, k);
        m.set(p, k, bpk * gp.conj() - bqk * s);
        m.set(q, k, bpk * gq.conj() + bqk * c);
    }
    // Pin the annihilated pair and keep the diagonal exactly real.
    m.set(p, q, Complex64::ZERO);
    m.set(q, p, Complex64::ZERO);
    let dpp = m.get(p, p).re;
    let dqq = m.get(q, q).re;
    m.set(p, p, Complex64::new(dpp, 0.0));
    m.set(q, q, Complex64::new(dqq, 0.0));

    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * gp - vkq * s);
        v.set(k, q, vkp * gq + vkq * c);
    }
}

/// Kronecker product A ⊗ B.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a.get(i, j);
            if aij == Complex64::ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out.set(i * br + k, j * bc + l, aij * b.get(k, l));
                }
            }
        }
    }
    out
}

/// Kronecker product of amplitude vectors.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(x * y);
        }
    }
    out
}

/// Partial trace of a matrix over a tensor-product space.
///
/// `dims` gives the subsystem dimensions (row-major tensor index order) and
/// `keep` the subsystems to retain, in the order they should appear in the
/// result. Selecting every subsystem in permuted order reorders the tensor
/// factors without tracing anything out.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() != total {
        return Err(Error::BadTensorSize {
            size: m.rows(),
            expected: total,
        });
    }
    if keep.is_empty() {
        return Err(Error::EmptyKeepSet);
    }
    let mut seen = vec![false; dims.len()];
    for &s in keep {
        if s >= dims.len() {
            return Err(Error::SubsystemOutOfRange {
                index: s,
                count: dims.len(),
            });
        }
        if seen[s] {
            return Err(Error::DuplicateSubsystem { index: s });
        }
        seen[s] = true;
    }

    let traced: Vec<usize> = (0..dims.len()).filter(|s| !seen[*s]).collect();
    // Row-major strides: subsystem s advances the flat index by prod(dims[s+1..]).
    let mut stride = vec![1usize; dims.len()];
    for s in (0..dims.len().saturating_sub(1)).rev() {
        stride[s] = stride[s + 1] * dims[s + 1];
    }

    let kept_dims: Vec<usize> = keep.iter().map(|&s| dims[s]).collect();
    let kept_total: usize = kept_dims.iter().product();
    let traced_dims: Vec<usize> = traced.iter().map(|&s| dims[s]).collect();
    let traced_total = traced_dims.iter().product::<usize>().max(1);

    // Flat index contribution of a multi-index over the given subsystems.
    let offset = |subsystems: &[usize], sub_dims: &[usize], mut flat: usize| -> usize {
        let mut off = 0;
        for k in (0..subsystems.len()).rev() {
            let d = sub_dims[k];
            off += (flat % d) * stride[subsystems[k]];
            flat /= d;
        }
        off
    };

    let mut out = ComplexMatrix::zeros(kept_total, kept_total);
    for a in 0..kept_total {
        let row_base = offset(keep, &kept_dims, a);
        for b in 0..kept_total {
            let col_base = offset(keep, &kept_dims, b);
            let mut sum = Complex64::ZERO;
            for t in 0..traced_total {
                let t_off = offset(&traced, &traced_dims, t);
                sum += m.get(row_base + t_off, col_base + t_off);
            }
            out.set(a, b, sum);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-1.0, 0.0)],
        ])
        .unwrap()
    }

    #[test]
    fn eigh_identity() {
        let d = eigh(&ComplexMatrix::identity(2)).unwrap();
        assert!((d.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((d.eigenvalues[1] - 1.0).abs() < 1e-12);
        let vtv = d.eigenvectors.adjoint().matmul(&d.eigenvectors).unwrap();
        assert!(vtv.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-10);
    }

    #[test]
    fn eigh_pauli_z_ascending() {
        let d = eigh(&pauli_z()).unwrap();
        assert!((d.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((d.eigenvalues[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigh_rejects_non_square_and_non_hermitian() {
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(eigh(&rect), Err(Error::NotSquare { .. })));

        let mut m = ComplexMatrix::identity(2);
        m.set(0, 1, c(0.5, 0.0));
        assert!(matches!(eigh(&m), Err(Error::NotHermitian { .. })));
    }

    /// Counts eigenvalues of a Hermitian matrix below `x` via the inertia of
    /// A − xI under symmetric elimination (Sylvester's law). Independent of
    /// the Jacobi path.
    fn eigs_below(a: &ComplexMatrix, x: f64) -> usize {
        let n = a.rows();
        let mut m = a.clone();
        for i in 0..n {
            let d = m.get(i, i) - c(x, 0.0);
            m.set(i, i, d);
        }
        let mut negatives = 0;
        let mut work = m;
        for k in 0..n {
            let pivot = work.get(k, k).re;
            if pivot < 0.0 {
                negatives += 1;
            }
            if pivot.abs() < 1e-300 {
                continue;
            }
            for i in (k + 1)..n {
                let factor = work.get(i, k) / c(pivot, 0.0);
                for j in k..n {
                    let v = work.get(i, j) - factor * work.get(k, j);
                    work.set(i, j, v);
                }
            }
        }
        negatives
    }

    /// Bisection on the inertia count brackets each eigenvalue independently.
    fn oracle_eigenvalues(a: &ComplexMatrix) -> Vec<f64> {
        let n = a.rows();
        // Gershgorin bound on the spectrum.
        let mut radius: f64 = 0.0;
        for i in 0..n {
            let mut row = 0.0;
            for j in 0..n {
                row += a.get(i, j).norm();
            }
            radius = radius.max(row);
        }
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let (mut lo, mut hi) = (-radius - 1.0, radius + 1.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if eigs_below(a, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        out
    }

    #[test]
    fn eigh_matches_inertia_bisection_oracle() {
        // Fixed pseudo-random 4x4 Hermitian matrix.
        let mut seed = 0x2545F4914F6CDD1Du64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut m = ComplexMatrix::zeros(4, 4);
        for i in 0..4 {
            m.set(i, i, c(next() * 4.0, 0.0));
            for j in (i + 1)..4 {
                let z = c(next() * 2.0, next() * 2.0);
                m.set(i, j, z);
                m.set(j, i, z.conj());
            }
        }
        let d = eigh(&m).unwrap();
        let expected = oracle_eigenvalues(&m);
        for (got, want) in d.eigenvalues.iter().zip(&expected) {
            assert!(
                (got - want).abs() < 1e-8,
                "eigenvalue mismatch: {got} vs oracle {want}"
            );
        }
    }

    #[test]
    fn eigh_reconstruction_and_trace() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(0.7, 0.0), c(0.1, 0.2), c(0.0, -0.3)],
            vec![c(0.1, -0.2), c(-0.4, 0.0), c(0.25, 0.0)],
            vec![c(0.0, 0.3), c(0.25, 0.0), c(1.1, 0.0)],
        ])
        .unwrap();
        let d = eigh(&m).unwrap();

        let lambda_sum: f64 = d.eigenvalues.iter().sum();
        assert!((lambda_sum - m.trace().re).abs() < 1e-10);

        let v = &d.eigenvectors;
        let mut lam = ComplexMatrix::zeros(3, 3);
        for i in 0..3 {
            lam.set(i, i, c(d.eigenvalues[i], 0.0));
        }
        let rebuilt = v.matmul(&lam).unwrap().matmul(&v.adjoint()).unwrap();
        assert!(rebuilt.max_abs_diff(&m) < 1e-10);

        let vtv = v.adjoint().matmul(v).unwrap();
        assert!(vtv.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-10);
    }

    #[test]
    fn eigh_holds_tolerances_at_working_sizes() {
        // Largest matrices in practice are 27x27 (three qutrits).
        let mut seed = 0x9E3779B97F4A7C15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for n in [9usize, 16, 27] {
            let mut m = ComplexMatrix::zeros(n, n);
            for i in 0..n {
                m.set(i, i, c(next() * 2.0, 0.0));
                for j in (i + 1)..n {
                    let z = c(next(), next());
                    m.set(i, j, z);
                    m.set(j, i, z.conj());
                }
            }
            let d = eigh(&m).unwrap();

            let lambda_sum: f64 = d.eigenvalues.iter().sum();
            assert!((lambda_sum - m.trace().re).abs() < 1e-10, "n={n}");
            assert!(
                d.eigenvalues.windows(2).all(|w| w[0] <= w[1]),
                "n={n}: eigenvalues not ascending"
            );

            let v = &d.eigenvectors;
            let vtv = v.adjoint().matmul(v).unwrap();
            assert!(
                vtv.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-10,
                "n={n}: eigenvectors not orthonormal"
            );
            let mut lam = ComplexMatrix::zeros(n, n);
            for i in 0..n {
                lam.set(i, i, c(d.eigenvalues[i], 0.0));
            }
            let rebuilt = v.matmul(&lam).unwrap().matmul(&v.adjoint()).unwrap();
            assert!(rebuilt.max_abs_diff(&m) < 1e-10, "n={n}: residual too large");
        }
    }

    #[test]
    fn kron_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));

        let zz = kron(&pauli_z(), &pauli_z());
        for (i, want) in [1.0, -1.0, -1.0, 1.0].into_iter().enumerate() {
            assert_eq!(zz.get(i, i), c(want, 0.0));
        }

        let zero = [c(1.0, 0.0), c(0.0, 0.0)];
        let one = [c(0.0, 0.0), c(1.0, 0.0)];
        assert_eq!(
            kron_vec(&zero, &one),
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]
        );
    }

    #[test]
    fn partial_trace_product_state_and_bell() {
        // rho_A ⊗ rho_B, keep A.
        let rho_a = ComplexMatrix::from_rows(&[
            vec![c(0.25, 0.0), c(0.1, 0.05)],
            vec![c(0.1, -0.05), c(0.75, 0.0)],
        ])
        .unwrap();
        let rho_b = ComplexMatrix::from_rows(&[
            vec![c(0.5, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.5, 0.0)],
        ])
        .unwrap();
        let joint = kron(&rho_a, &rho_b);
        let back = partial_trace(&joint, &[2, 2], &[0]).unwrap();
        assert!(back.max_abs_diff(&rho_a) < 1e-12);

        // |phi+><phi+| marginal is maximally mixed.
        let amp = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]
            .map(|z| z / 2.0f64.sqrt());
        let psi = ComplexMatrix::column(&amp);
        let rho = psi.matmul(&psi.adjoint()).unwrap();
        let marginal = partial_trace(&rho, &[2, 2], &[0]).unwrap();
        assert!(marginal.max_abs_diff(&ComplexMatrix::identity(2).scale(c(0.5, 0.0))) < 1e-12);
    }

    /// Naive contraction oracle: out[a,b] = Σ_t ρ[(a,t),(b,t)] written with
    /// explicit digit arithmetic, no shared stride helpers.
    fn contract_keep_first(m: &ComplexMatrix, d0: usize, rest: usize) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(d0, d0);
        for a in 0..d0 {
            for b in 0..d0 {
                let mut sum = C::ZERO;
                for t in 0..rest {
                    sum += m.get(a * rest + t, b * rest + t);
                }
                out.set(a, b, sum);
            }
        }
        out
    }

    #[test]
    fn partial_trace_ghz_matches_contraction_oracle() {
        let l0 = 0.6f64;
        let l4 = (1.0 - l0 * l0).sqrt();
        let mut amp = vec![C::ZERO; 8];
        amp[0] = c(l0, 0.0);
        amp[7] = c(l4, 0.0);
        let psi = ComplexMatrix::column(&amp);
        let rho = psi.matmul(&psi.adjoint()).unwrap();

        let got = partial_trace(&rho, &[2, 2, 2], &[0]).unwrap();
        let want = contract_keep_first(&rho, 2, 4);
        assert!(got.max_abs_diff(&want) < 1e-12);
        assert!((got.get(0, 0).re - l0 * l0).abs() < 1e-12);
        assert!((got.get(1, 1).re - (1.0 - l0 * l0)).abs() < 1e-12);
        assert!((got.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_keep() {
        let m = ComplexMatrix::identity(4).scale(c(0.25, 0.0));
        assert!(matches!(
            partial_trace(&m, &[2, 2], &[]),
            Err(Error::EmptyKeepSet)
        ));
        assert!(matches!(
            partial_trace(&m, &[2, 2], &[5]),
            Err(Error::SubsystemOutOfRange { .. })
        ));
        assert!(matches!(
            partial_trace(&m, &[2, 2], &[0, 0]),
            Err(Error::DuplicateSubsystem { .. })
        ));
    }

    #[test]
    fn partial_trace_orders_result_by_keep() {
        let rho_a = ComplexMatrix::from_rows(&[
            vec![c(0.9, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.1, 0.0)],
        ])
        .unwrap();
        let rho_b = ComplexMatrix::from_rows(&[
            vec![c(0.3, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.7, 0.0)],
        ])
        .unwrap();
        let joint = kron(&rho_a, &rho_b);
        // keep = [1, 0] swaps the factors.
        let swapped = partial_trace(&joint, &[2, 2], &[1, 0]).unwrap();
        assert!(swapped.max_abs_diff(&kron(&rho_b, &rho_a)) < 1e-12);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        /// Dyadic-rational entries keep complex products exact in f64, so the
        /// associativity assertion below can demand bitwise equality.
        fn dyadic_matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
            proptest::collection::vec((-8i32..=8, -8i32..=8), rows * cols).prop_map(
                move |pairs| {
                    let entries = pairs
                        .into_iter()
                        .map(|(re, im)| C::new(re as f64 / 8.0, im as f64 / 8.0))
                        .collect();
                    ComplexMatrix {
                        rows,
                        cols,
                        entries,
                    }
                },
            )
        }

        proptest! {
            #[test]
            fn kron_is_associative(
                a in dyadic_matrix(2, 2),
                b in dyadic_matrix(2, 3),
                m in dyadic_matrix(3, 2),
            ) {
                prop_assert_eq!(kron(&kron(&a, &b), &m), kron(&a, &kron(&b, &m)));
            }

            #[test]
            fn partial_trace_commutes_on_three_parties(
                h in dyadic_matrix(8, 8),
            ) {
                // Hermitize so both routes stay numerically symmetric.
                let herm = ComplexMatrix::from_fn(8, 8, |i, j| {
                    (h.get(i, j) + h.get(j, i).conj()) * 0.5
                });
                let bc_first = partial_trace(
                    &partial_trace(&herm, &[2, 2, 2], &[0, 2]).unwrap(),
                    &[2, 2],
                    &[0],
                ).unwrap();
                let cb_first = partial_trace(
                    &partial_trace(&herm, &[2, 2, 2], &[0, 1]).unwrap(),
                    &[2, 2],
                    &[0],
                ).unwrap();
                prop_assert!(bc_first.max_abs_diff(&cb_first) < 1e-12);
                let direct = partial_trace(&herm, &[2, 2, 2], &[0]).unwrap();
                prop_assert!(bc_first.max_abs_diff(&direct) < 1e-12);
            }
        }
    }
}
