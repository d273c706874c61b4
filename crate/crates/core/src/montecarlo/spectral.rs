use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::{self, ComputeEigenvectors};
use faer::traits::ComplexField;
use faer::diag::Diag;
use faer::{c64, Mat, MatRef, Par};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hermitian check and clamping tolerance, relative to the largest entry.
pub const SPECTRAL_TOL: f64 = 1e-10;

/// Matrix entries handled here: `f64` and `c64`.
pub(crate) trait Entry:
    ComplexField<Real = f64>
    + Copy
    + num_traits::Zero
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Mul<f64, Output = Self>
{
    fn re(self) -> f64;
}

impl Entry for f64 {
    fn re(self) -> f64 {
        self
    }
}

impl Entry for c64 {
    fn re(self) -> f64 {
        self.re
    }
}

/// Eigenvalues of a self-adjoint matrix, descending, computed sequentially.
pub(crate) fn eigvalsh<T: Entry>(a: MatRef<'_, T>) -> Result<Vec<f64>> {
    let n = a.nrows();
    let mut s = Diag::<T>::zeros(n);
    let scratch = evd::self_adjoint_evd_scratch::<T>(n, ComputeEigenvectors::No, Par::Seq, Default::default());
    evd::self_adjoint_evd(
        a,
        s.as_mut(),
        None,
        Par::Seq,
        MemStack::new(&mut MemBuffer::new(scratch)),
        Default::default(),
    )
    .map_err(|e| Error::Numerical(format!("eigensolver: {e:?}")))?;
    let mut out: Vec<f64> = s.column_vector().iter().map(|x| x.re()).collect();
    out.reverse();
    Ok(out)
}

/// `a a*`, or `a* a` when that is the smaller side.
pub(crate) fn small_gram<T: Entry>(a: MatRef<'_, T>) -> Mat<T> {
    if a.nrows() <= a.ncols() {
        a * a.adjoint()
    } else {
        a.adjoint() * a
    }
}

fn clamp(mut eigs: Vec<f64>, scale: f64) -> Vec<f64> {
    for x in &mut eigs {
        if *x < 0.0 && *x >= -SPECTRAL_TOL * scale {
            *x = 0.0;
        }
    }
    eigs
}

fn check_square(rows: usize, cols: usize) -> Result<()> {
    if rows != cols {
        return Err(Error::SizeMismatch { left: rows, right: cols });
    }
    Ok(())
}

/// Eigenvalues of a Hermitian matrix, descending. Values in
/// `[-10⁻¹⁰ ‖H‖, 0)` are set to 0; more negative ones are kept.
pub fn spectrum(h: MatRef<'_, c64>) -> Result<Vec<f64>> {
    check_square(h.nrows(), h.ncols())?;
    let n = h.nrows();
    let mut scale = 0f64;
    let mut skew = 0f64;
    for j in 0..n {
        for i in 0..=j {
            scale = scale.max(h[(i, j)].norm());
            skew = skew.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    if skew > SPECTRAL_TOL * scale.max(1.0) {
        return Err(Error::NotHermitian(skew));
    }
    Ok(clamp(eigvalsh(h)?, scale.max(1.0)))
}

/// [`spectrum`] for a real symmetric matrix.
pub fn spectrum_real(h: MatRef<'_, f64>) -> Result<Vec<f64>> {
    check_square(h.nrows(), h.ncols())?;
    let n = h.nrows();
    let mut scale = 0f64;
    let mut skew = 0f64;
    for j in 0..n {
        for i in 0..=j {
            scale = scale.max(h[(i, j)].abs());
            skew = skew.max((h[(i, j)] - h[(j, i)]).abs());
        }
    }
    if skew > SPECTRAL_TOL * scale.max(1.0) {
        return Err(Error::NotHermitian(skew));
    }
    Ok(clamp(eigvalsh(h)?, scale.max(1.0)))
}

/// `-Σ λ log λ` in nats with `0 log 0 = 0`.
pub fn vn_entropy(eigs: &[f64]) -> Result<f64> {
    if let Some(&bad) = eigs.iter().find(|&&x| x < -SPECTRAL_TOL) {
        return Err(Error::NegativeEigenvalue(bad));
    }
    let terms: Vec<f64> = eigs.iter().map(|&x| if x > 0.0 { -x * x.ln() } else { 0.0 }).collect();
    Ok(crate::numeric::pairwise_sum(&terms))
}

/// Spectrum of `QZQ` with `Q = I - E` and `E` the maximally entangled state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QzqSpectrum {
    /// The `n² - 1` eigenvalues on the complement of `E`, descending.
    pub bulk: Vec<f64>,
    /// `⟨e, Z e⟩`: the weight of `Z` along `E`, whose direction is in the
    /// kernel of `QZQ`.
    pub bell_weight: f64,
}

/// Householder vector `v = ω - e_0` for the unit vector `ω = Σ_a e_{aa}/√n`
/// (coordinates given by `bell`), and `‖v‖²`.
fn householder(bell: &[f64]) -> (Vec<f64>, f64) {
    let mut v = bell.to_vec();
    v[0] -= 1.0;
    let s = v.iter().map(|x| x * x).sum();
    (v, s)
}

/// Compresses `z` to the orthogonal complement of the real unit vector
/// `bell` via the reflection `H` sending it to `e_0`: the block of `HZH`
/// without row and column 0. Returns it with `⟨bell, Z bell⟩`.
fn compress<T: Entry>(z: MatRef<'_, T>, bell: &[f64]) -> (Mat<T>, f64) {
    let n = z.nrows();
    let (v, s) = householder(bell);
    let zero = T::zero();
    // zv = Z v, vz = v* Z, vzv = v* Z v (v real).
    let zv: Vec<T> = (0..n).map(|i| (0..n).fold(zero, |acc, j| acc + z[(i, j)] * v[j])).collect();
    let vz: Vec<T> = (0..n).map(|j| (0..n).fold(zero, |acc, i| acc + z[(i, j)] * v[i])).collect();
    let vzv = (0..n).fold(zero, |acc, i| acc + zv[i] * v[i]);
    let weight = (0..n).fold(0.0, |acc, i| {
        acc + (0..n).fold(zero, |a, j| a + z[(i, j)] * bell[j]).re() * bell[i]
    });
    let (a, b) = (2.0 / s, 4.0 / (s * s));
    let out = Mat::<T>::from_fn(n - 1, n - 1, |i, j| {
        let (i, j) = (i + 1, j + 1);
        z[(i, j)] - vz[j] * (a * v[i]) - zv[i] * (a * v[j]) + vzv * (b * v[i] * v[j])
    });
    (out, weight)
}

fn bell_vector(n: usize) -> Vec<f64> {
    let mut e = vec![0.0; n * n];
    for a in 0..n {
        e[a * n + a] = 1.0 / (n as f64).sqrt();
    }
    e
}

/// Spectrum of `(I - E) Z (I - E)` for an `n² × n²` output `Z` in the
/// product basis `|ab⟩ ↦ a n + b`. The kernel direction along `E` is dropped
/// from the list and reported through `bell_weight`.
pub fn qzq_spectrum(z: MatRef<'_, c64>, n: usize) -> Result<QzqSpectrum> {
    if z.nrows() != n * n || z.ncols() != n * n {
        return Err(Error::SizeMismatch { left: z.nrows(), right: n * n });
    }
    if n == 1 {
        return Ok(QzqSpectrum { bulk: Vec::new(), bell_weight: z[(0, 0)].re });
    }
    let (block, bell_weight) = compress(z, &bell_vector(n));
    Ok(QzqSpectrum { bulk: spectrum(block.as_ref())?, bell_weight })
}

/// [`qzq_spectrum`] for a real symmetric `Z` written in a basis where `E`
/// has the real coordinates `bell`.
pub(crate) fn qzq_spectrum_real(z: MatRef<'_, f64>, bell: &[f64]) -> Result<QzqSpectrum> {
    if bell.len() == 1 {
        return Ok(QzqSpectrum { bulk: Vec::new(), bell_weight: z[(0, 0)] });
    }
    let (block, bell_weight) = compress(z, bell);
    Ok(QzqSpectrum { bulk: spectrum_real(block.as_ref())?, bell_weight })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::sampling::{sample_ginibre, sample_rng};

    #[test]
    fn trivial_spectra() {
        let id = Mat::<c64>::from_fn(4, 4, |i, j| if i == j { c64::new(0.25, 0.0) } else { c64::new(0.0, 0.0) });
        assert!(spectrum(id.as_ref()).unwrap().iter().all(|x| (x - 0.25).abs() < 1e-15));
        let d = Mat::<c64>::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c64::new(0.3, 0.0),
            (1, 1) => c64::new(0.7, 0.0),
            _ => c64::new(0.0, 0.0),
        });
        let s = spectrum(d.as_ref()).unwrap();
        assert!((s[0] - 0.7).abs() < 1e-15 && (s[1] - 0.3).abs() < 1e-15);
        let bad = Mat::<c64>::from_fn(2, 2, |i, j| c64::new((i + 2 * j) as f64, 0.0));
        assert!(matches!(spectrum(bad.as_ref()), Err(Error::NotHermitian(_))));
    }

    /// Real roots of the characteristic cubic by the trigonometric formula.
    fn cubic_roots(h: &Mat<c64>) -> Vec<f64> {
        let m = |i: usize, j: usize| h[(i, j)];
        let tr = (m(0, 0) + m(1, 1) + m(2, 2)).re;
        let minors = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2)
            - m(1, 2) * m(2, 1))
        .re;
        let det = (m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)))
        .re;
        // λ³ - tr λ² + minors λ - det; shift λ = x + tr/3.
        let q = tr / 3.0;
        let p = minors - tr * tr / 3.0;
        let r = -2.0 * q.powi(3) + minors * q - det;
        let amp = 2.0 * (-p / 3.0).sqrt();
        let phi = ((3.0 * r / (p * amp)).clamp(-1.0, 1.0)).acos() / 3.0;
        let mut roots: Vec<f64> =
            (0..3).map(|j| q + amp * (phi - 2.0 * std::f64::consts::PI * j as f64 / 3.0).cos()).collect();
        roots.sort_by(|a, b| b.total_cmp(a));
        roots
    }

    #[test]
    fn matches_cubic_roots() {
        let mut rng = sample_rng(2, 0);
        for _ in 0..50 {
            let g = sample_ginibre(3, 3, &mut rng);
            let h = Mat::<c64>::from_fn(3, 3, |i, j| (g[(i, j)] + g[(j, i)].conj()) * 0.5);
            let s = spectrum(h.as_ref()).unwrap();
            for (a, b) in s.iter().zip(cubic_roots(&h)) {
                assert!((a - b).abs() < 1e-8, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn entropy_edge_cases() {
        let n = 5;
        let uniform = vec![1.0 / (n * n) as f64; n * n];
        assert!((vn_entropy(&uniform).unwrap() - 2.0 * (n as f64).ln()).abs() < 1e-13);
        assert_eq!(vn_entropy(&[1.0, 0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(vn_entropy(&[1.0, -1e-12]).unwrap(), 0.0);
        assert!(matches!(vn_entropy(&[1.0, -1e-6]), Err(Error::NegativeEigenvalue(_))));
    }

    #[test]
    fn qzq_interlaces_and_kills_bell_state() {
        let n = 3;
        let mut rng = sample_rng(9, 0);
        let g = sample_ginibre(n * n, 4, &mut rng);
        let z = &g * g.adjoint();
        let full = spectrum(z.as_ref()).unwrap();
        let q = qzq_spectrum(z.as_ref(), n).unwrap();
        assert_eq!(q.bulk.len(), n * n - 1);
        for i in 0..n * n - 1 {
            assert!(full[i] + 1e-10 >= q.bulk[i] && q.bulk[i] + 1e-10 >= full[i + 1]);
        }
        // Direct construction of (I-E)Z(I-E) has the same nonzero spectrum
        // plus one exact zero along E.
        let e = bell_vector(n);
        let proj = Mat::<c64>::from_fn(n * n, n * n, |i, j| {
            c64::new(if i == j { 1.0 } else { 0.0 } - e[i] * e[j], 0.0)
        });
        let direct = spectrum((&proj * &z * &proj).as_ref()).unwrap();
        let mut merged = q.bulk.clone();
        merged.push(0.0);
        merged.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in merged.iter().zip(&direct) {
            assert!((a - b).abs() < 1e-10);
        }
        let ez: c64 = (0..n * n).flat_map(|i| (0..n * n).map(move |j| (i, j))).map(|(i, j)| z[(i, j)] * e[i] * e[j]).sum();
        assert!((q.bell_weight - ez.re).abs() < 1e-12);
    }
}
