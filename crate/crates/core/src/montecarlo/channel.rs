use faer::{c64, Mat, MatRef};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::sampling::{sample_ginibre, sample_haar_isometry};
use super::spectral::{eigvalsh, qzq_spectrum_real, small_gram, QzqSpectrum};
use crate::error::{Error, Result};

/// Default cap on `n` for bi-channel outputs (an `n² × n²` eigenproblem).
pub const BI_CHANNEL_MAX_N: usize = 80;

/// `Φ(X) = Tr_k[U (X ⊗ Y) U*]` with `Y` the projector on the first
/// environment vector. Tensor indices are `|i⟩ ⊗ |j⟩ ↦ i k + j`.
pub fn channel_apply(u: MatRef<'_, c64>, x: MatRef<'_, c64>, k: usize) -> Result<Mat<c64>> {
    let n = x.nrows();
    if x.ncols() != n {
        return Err(Error::SizeMismatch { left: x.nrows(), right: x.ncols() });
    }
    if u.nrows() != n * k || u.ncols() != n * k {
        return Err(Error::SizeMismatch { left: u.nrows(), right: n * k });
    }
    // Columns (i, 0) of U form the isometry V: C^n → C^n ⊗ C^k.
    let v = Mat::<c64>::from_fn(n * k, n, |r, i| u[(r, i * k)]);
    let big = &v * x * v.adjoint();
    Ok(Mat::<c64>::from_fn(n, n, |a, b| (0..k).map(|j| big[(a * k + j, b * k + j)]).sum()))
}

/// Reshapes a vector of `C^n ⊗ C^k` into the `n × k` matrix `A` with
/// `Tr_k |ψ⟩⟨ψ| = A A*`.
fn reshape(psi: MatRef<'_, c64>, n: usize, k: usize) -> Mat<c64> {
    Mat::<c64>::from_fn(n, k, |a, j| psi[(a * k + j, 0)])
}

/// Spectrum of `A A*`, descending, padded with zeros to length `rows(A)`.
fn gram_spectrum(a: MatRef<'_, c64>) -> Result<Vec<f64>> {
    let mut eigs = eigvalsh(small_gram(a).as_ref())?;
    eigs.resize(a.nrows(), 0.0);
    for x in &mut eigs {
        *x = x.max(0.0);
    }
    Ok(eigs)
}

/// Output of a Haar channel on a pure input: the image of a Haar isometry
/// applied to `|0⟩`, partially traced over the environment.
pub fn rank_one_output(n: usize, k: usize, rng: &mut impl Rng) -> Mat<c64> {
    let psi = sample_haar_isometry(n * k, 1, rng);
    let a = reshape(psi.as_ref(), n, k);
    &a * a.adjoint()
}

/// Normalized Wishart matrix `W / Tr W`, `W = G G*` with `G` of size `n × k`.
pub fn normalized_wishart(n: usize, k: usize, rng: &mut impl Rng) -> Mat<c64> {
    let g = sample_ginibre(n, k, rng);
    let w = &g * g.adjoint();
    let tr: f64 = (0..n).map(|i| w[(i, i)].re).sum();
    Mat::<c64>::from_fn(n, n, |i, j| w[(i, j)] / tr)
}

/// Spectrum of [`rank_one_output`] without forming the `n × n` output.
pub(crate) fn rank_one_spectrum(n: usize, k: usize, rng: &mut impl Rng) -> Result<Vec<f64>> {
    let psi = sample_haar_isometry(n * k, 1, rng);
    gram_spectrum(reshape(psi.as_ref(), n, k).as_ref())
}

/// Spectrum of [`normalized_wishart`] without forming the output.
pub(crate) fn wishart_spectrum(n: usize, k: usize, rng: &mut impl Rng) -> Result<Vec<f64>> {
    let g = sample_ginibre(n, k, rng);
    let mut eigs = gram_spectrum(g.as_ref())?;
    let tr: f64 = crate::numeric::pairwise_sum(&eigs);
    for x in &mut eigs {
        *x /= tr;
    }
    Ok(eigs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BiChannelMode {
    /// `U` and `V` independent Haar unitaries.
    Independent,
    /// `V` the entrywise conjugate of `U`.
    Conjugate,
}

fn guard(n: usize, max_n: usize) -> Result<()> {
    if n > max_n {
        return Err(Error::Capacity { what: "bi-channel output dimension n", p: n, cap: max_n });
    }
    Ok(())
}

/// The two isometries `V_U`, `V_V` of the product channel.
fn isometries(mode: BiChannelMode, n: usize, k: usize, rng: &mut impl Rng) -> (Mat<c64>, Mat<c64>) {
    let vu = sample_haar_isometry(n * k, n, rng);
    let vv = match mode {
        BiChannelMode::Independent => sample_haar_isometry(n * k, n, rng),
        BiChannelMode::Conjugate => Mat::<c64>::from_fn(n * k, n, |i, j| vu[(i, j)].conj()),
    };
    (vu, vv)
}

/// `M[(a,c),(x,y)] = Σ_i V_U[(a,x),i] V_V[(c,y),i]`, so that the output is
/// `Z = M M* / n`.
fn bell_factor(vu: &Mat<c64>, vv: &Mat<c64>, n: usize, k: usize) -> Mat<c64> {
    let p = vu * vv.transpose();
    Mat::<c64>::from_fn(n * n, k * k, |r, s| p[((r / n) * k + s / k, (r % n) * k + s % k)])
}

/// `Z = (Φ_U ⊗ Φ_V)(E_n)` with `E_n` the maximally entangled state, as an
/// `n² × n²` matrix in the basis `|ac⟩ ↦ a n + c`.
pub fn bi_channel_output(mode: BiChannelMode, n: usize, k: usize, rng: &mut impl Rng) -> Result<Mat<c64>> {
    bi_channel_output_capped(mode, n, k, rng, BI_CHANNEL_MAX_N)
}

pub fn bi_channel_output_capped(
    mode: BiChannelMode,
    n: usize,
    k: usize,
    rng: &mut impl Rng,
    max_n: usize,
) -> Result<Mat<c64>> {
    guard(n, max_n)?;
    let (vu, vv) = isometries(mode, n, k, rng);
    let m = bell_factor(&vu, &vv, n, k);
    let scale = 1.0 / n as f64;
    let z = &m * m.adjoint();
    Ok(Mat::<c64>::from_fn(n * n, n * n, |i, j| z[(i, j)] * scale))
}

/// Orthonormal basis of `C^d ⊗ C^d` in which the swap acts as complex
/// conjugation: `|aa⟩`, `(|ab⟩ + |ba⟩)/√2` and `i(|ab⟩ - |ba⟩)/√2`, `a < b`.
/// Each vector has at most two nonzero coordinates.
fn swap_real_basis(d: usize) -> Vec<[(usize, c64); 2]> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let zero = c64::new(0.0, 0.0);
    let mut basis = Vec::with_capacity(d * d);
    for a in 0..d {
        basis.push([(a * d + a, c64::new(1.0, 0.0)), (a * d + a, zero)]);
        for b in a + 1..d {
            basis.push([(a * d + b, c64::new(h, 0.0)), (b * d + a, c64::new(h, 0.0))]);
            basis.push([(a * d + b, c64::new(0.0, h)), (b * d + a, c64::new(0.0, -h))]);
        }
    }
    basis
}

/// Real form of the conjugate-mode factor: `M' = T_out* M T_env` in the
/// swap-real bases of both sides. Since `M̄ = F M F` for the swaps `F`, every
/// entry of `M'` is real, and `Z` is unitarily equivalent to `M' M'ᵀ / n`.
/// Also returns the coordinates of the Bell vector in the output basis.
fn conjugate_real_factor(vu: &Mat<c64>, n: usize, k: usize) -> (Mat<f64>, Vec<f64>) {
    let p = vu * vu.adjoint();
    let m = |r: usize, s: usize| p[((r / n) * k + s / k, (r % n) * k + s % k)];
    let out = swap_real_basis(n);
    let env = swap_real_basis(k);
    let real = Mat::<f64>::from_fn(n * n, k * k, |r, s| {
        let mut acc = c64::new(0.0, 0.0);
        for &(x, wx) in &out[r] {
            if wx.re == 0.0 && wx.im == 0.0 {
                continue;
            }
            for &(y, wy) in &env[s] {
                if wy.re == 0.0 && wy.im == 0.0 {
                    continue;
                }
                acc += wx.conj() * m(x, y) * wy;
            }
        }
        acc.re
    });
    let inv = 1.0 / (n as f64).sqrt();
    let bell = out.iter().map(|v| if v[0].0 == v[1].0 { inv } else { 0.0 }).collect();
    (real, bell)
}

/// Descending spectrum of the bi-channel output, padded with zeros to
/// length `n²`. Uses the smaller Gram matrix of the `n² × k²` factor, in
/// real arithmetic for the conjugate mode.
pub fn bi_channel_spectrum(mode: BiChannelMode, n: usize, k: usize, rng: &mut impl Rng) -> Result<Vec<f64>> {
    guard(n, BI_CHANNEL_MAX_N)?;
    let (vu, vv) = isometries(mode, n, k, rng);
    let scale = 1.0 / n as f64;
    let mut eigs = match mode {
        BiChannelMode::Independent => eigvalsh(small_gram(bell_factor(&vu, &vv, n, k).as_ref()).as_ref())?,
        BiChannelMode::Conjugate => eigvalsh(small_gram(conjugate_real_factor(&vu, n, k).0.as_ref()).as_ref())?,
    };
    eigs.resize(n * n, 0.0);
    for x in &mut eigs {
        *x = (*x * scale).max(0.0);
    }
    Ok(eigs)
}

/// Spectra of `Z` and of `QZQ` for the conjugate bi-channel, in real
/// arithmetic.
pub fn conjugate_qzq_spectrum(n: usize, k: usize, rng: &mut impl Rng) -> Result<(Vec<f64>, QzqSpectrum)> {
    guard(n, BI_CHANNEL_MAX_N)?;
    let (vu, _) = isometries(BiChannelMode::Conjugate, n, k, rng);
    let (m, bell) = conjugate_real_factor(&vu, n, k);
    let scale = 1.0 / n as f64;
    let mut z = &m * m.transpose();
    for j in 0..n * n {
        for i in 0..n * n {
            z[(i, j)] *= scale;
        }
    }
    let full = super::spectral::spectrum_real(z.as_ref())?;
    Ok((full, qzq_spectrum_real(z.as_ref(), &bell)?))
}
