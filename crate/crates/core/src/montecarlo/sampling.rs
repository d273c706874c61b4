use faer::{c64, Mat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Generator for sample `index` under `master`: ChaCha8 keyed by the master
/// seed, on stream `index`. Streams never overlap, so a sample's draws do
/// not depend on which worker produced it or in what order.
pub fn sample_rng(master: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

/// Standard complex Gaussian matrix, `E|G_ij|² = 1` (variance ½ per part).
pub fn sample_ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> Mat<c64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    // Column-major fill order so the stream layout is fixed.
    let mut g = Mat::<c64>::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            g[(i, j)] = c64::new(s * re, s * im);
        }
    }
    g
}

/// Multiplies column `j` of `q` by the phase of `r_jj`, which makes the QR
/// factor of a Ginibre matrix exactly Haar distributed.
fn fix_phases(q: &mut Mat<c64>, r_diag: impl Iterator<Item = c64>) {
    for (j, r) in r_diag.enumerate() {
        let norm = r.norm();
        let phase = if norm == 0.0 { c64::new(1.0, 0.0) } else { r / norm };
        for i in 0..q.nrows() {
            q[(i, j)] *= phase;
        }
    }
}

/// Haar-distributed `m × m` unitary.
pub fn sample_haar_unitary(m: usize, rng: &mut impl Rng) -> Mat<c64> {
    let g = sample_ginibre(m, m, rng);
    let qr = g.qr();
    let mut q = qr.compute_Q();
    let r = qr.R();
    fix_phases(&mut q, (0..m).map(|j| r[(j, j)]));
    q
}

/// Haar-distributed isometry `C^cols → C^rows`: the first `cols` columns of
/// a Haar unitary, sampled without forming the full unitary.
pub fn sample_haar_isometry(rows: usize, cols: usize, rng: &mut impl Rng) -> Mat<c64> {
    assert!(cols <= rows, "isometry needs cols <= rows");
    let g = sample_ginibre(rows, cols, rng);
    let qr = g.qr();
    let mut q = qr.compute_thin_Q();
    let r = qr.thin_R();
    fix_phases(&mut q, (0..cols).map(|j| r[(j, j)]));
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio_to_f64;
    use crate::symgroup::Permutation;
    use crate::weingarten::wg_value;

    fn mean_se(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, (v / n).sqrt())
    }

    #[test]
    fn ginibre_covariance() {
        let mut rng = sample_rng(11, 0);
        let draws: Vec<c64> = (0..100_000).map(|_| sample_ginibre(1, 1, &mut rng)[(0, 0)]).collect();
        let (m, se) = mean_se(&draws.iter().map(|z| z.norm_sqr()).collect::<Vec<_>>());
        assert!((m - 1.0).abs() < 3.0 * se, "{m} ± {se}");
        let (m, se) = mean_se(&draws.iter().map(|z| z.re).collect::<Vec<_>>());
        assert!(m.abs() < 3.0 * se);
        let (m, se) = mean_se(&draws.iter().map(|z| z.im).collect::<Vec<_>>());
        assert!(m.abs() < 3.0 * se);

        let traces: Vec<f64> = (0..2000)
            .map(|_| sample_ginibre(8, 8, &mut rng).col_iter().flat_map(|c| c.iter().map(|z| z.norm_sqr()).collect::<Vec<_>>()).sum())
            .collect();
        let (m, se) = mean_se(&traces);
        assert!((m - 64.0).abs() < 3.0 * se, "{m} ± {se}");
    }

    #[test]
    fn haar_is_unitary() {
        let mut rng = sample_rng(3, 0);
        for m in [1, 2, 5, 17] {
            let u = sample_haar_unitary(m, &mut rng);
            let uu = &u * u.adjoint();
            for i in 0..m {
                for j in 0..m {
                    let target = if i == j { 1.0 } else { 0.0 };
                    assert!((uu[(i, j)] - c64::new(target, 0.0)).norm() < 1e-10);
                }
            }
        }
        let v = sample_haar_isometry(12, 3, &mut rng);
        let vv = v.adjoint() * &v;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((vv[(i, j)] - c64::new(target, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn haar_low_degree_moments_match_weingarten() {
        let m = 6usize;
        let mut rng = sample_rng(5, 0);
        let mut second = Vec::new();
        let mut fourth = Vec::new();
        for _ in 0..100_000 {
            let u = sample_haar_unitary(m, &mut rng);
            second.push(u[(0, 0)].norm_sqr());
            fourth.push(u[(0, 0)].norm_sqr() * u[(1, 1)].norm_sqr());
        }
        let (m2, se2) = mean_se(&second);
        assert!((m2 - 1.0 / m as f64).abs() < 3.0 * se2, "{m2} ± {se2}");
        // Distinct row and column indices leave only σ = τ = id: Wg(m, id).
        let target = ratio_to_f64(&wg_value(m as u64, &Permutation::identity(2)).unwrap());
        let (m4, se4) = mean_se(&fourth);
        assert!((m4 - target).abs() < 3.0 * se4, "{m4} vs {target} ± {se4}");
    }

    #[test]
    fn plain_qr_is_not_haar() {
        // Without the phase fix, diag(R) > 0 biases U_11 towards the positive
        // real axis; the fixed version has E[U_11] = 0.
        let mut rng = sample_rng(8, 0);
        let mut fixed = Vec::new();
        let mut plain = Vec::new();
        for _ in 0..20_000 {
            let g = sample_ginibre(3, 3, &mut rng);
            let q = g.qr().compute_Q();
            plain.push(q[(0, 0)].re);
            fixed.push(sample_haar_unitary(3, &mut rng)[(0, 0)].re);
        }
        let (mf, sf) = mean_se(&fixed);
        let (mp, sp) = mean_se(&plain);
        assert!(mf.abs() < 3.0 * sf);
        assert!(mp.abs() > 10.0 * sp);
    }

    #[test]
    fn streams_are_reproducible() {
        let a = sample_ginibre(3, 2, &mut sample_rng(1, 4));
        let b = sample_ginibre(3, 2, &mut sample_rng(1, 4));
        let c = sample_ginibre(3, 2, &mut sample_rng(1, 5));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
