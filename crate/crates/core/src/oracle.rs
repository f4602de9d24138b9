//! Theory-free reference route: implicit-shift QL eigensolver for symmetric
//! tridiagonal matrices and spectral time evolution built on it. Shares no
//! numeric code with the polynomial machinery; everything here works from
//! the raw diagonal/off-diagonal arrays of a chain.

use crate::chain::{self, JacobiChain};
use crate::matrix::Matrix;
use crate::polyfam::Family;
use crate::Error;
use num_complex::Complex64;

const MAX_SWEEPS: usize = 30;

/// Full spectrum of a symmetric tridiagonal matrix: ascending eigenvalues
/// and the orthogonal matrix of eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct DenseSpectrum {
    pub eigenvalues: Vec<f64>,
    pub vectors: Matrix,
}

/// Implicit-shift QL with Wilkinson shifts (EISPACK tql2 lineage).
/// `d` is the diagonal, `e` the off-diagonal (signed).
fn tql2(d: &mut [f64], e: &mut [f64], v: &mut Matrix) -> Result<(), Error> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    // shift the off-diagonal into e[0..n-1] with a zero sentinel at the end
    let mut sub = vec![0.0f64; n];
    sub[..n - 1].copy_from_slice(&e[..n - 1]);

    for l in 0..n {
        let mut iter = 0;
        loop {
            // find a negligible off-diagonal element
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if sub[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(Error::ConvergenceFailure(l));
            }
            // Wilkinson shift
            let mut g = (d[l + 1] - d[l]) / (2.0 * sub[l]);
            let mut r = g.hypot(1.0);
            if g < 0.0 {
                r = -r;
            }
            g = d[m] - d[l] + sub[l] / (g + r);
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            for i in (l..m).rev() {
                let mut f = s * sub[i];
                let b = c * sub[i];
                r = f.hypot(g);
                sub[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    sub[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    f = v.get(k, i + 1);
                    v.set(k, i + 1, s * v.get(k, i) + c * f);
                    v.set(k, i, c * v.get(k, i) - s * f);
                }
            }
            if r == 0.0 && m > l + 1 {
                continue;
            }
            d[l] -= p;
            sub[l] = g;
            sub[m] = 0.0;
        }
    }
    Ok(())
}

/// Full spectrum of a chain, eigenvalues ascending, eigenvector sign fixed
/// by making the first nonzero component positive.
pub fn eig_tridiagonal(chain: &JacobiChain) -> Result<DenseSpectrum, Error> {
    let n = chain.size();
    let mut d = chain.diagonal().to_vec();
    let mut e = chain.signed_offdiagonal();
    let mut v = Matrix::identity(n);
    tql2(&mut d, &mut e, &mut v)?;

    // sort ascending, carrying columns along
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap());
    let eigenvalues: Vec<f64> = idx.iter().map(|&i| d[i]).collect();
    let mut vectors = Matrix::zeros(n);
    for (col_new, &col_old) in idx.iter().enumerate() {
        let mut flip = 0.0;
        for row in 0..n {
            let val = v.get(row, col_old);
            if flip == 0.0 && val != 0.0 {
                flip = if val > 0.0 { 1.0 } else { -1.0 };
            }
        }
        if flip == 0.0 {
            flip = 1.0;
        }
        for row in 0..n {
            vectors.set(row, col_new, flip * v.get(row, col_old));
        }
    }
    Ok(DenseSpectrum { eigenvalues, vectors })
}

/// Column s of exp(-i t M): V exp(-i t Lambda) V^T e_s.
pub fn evolve_oracle(chain: &JacobiChain, s: usize, t: f64) -> Result<Vec<Complex64>, Error> {
    let n = chain.size();
    if s >= n {
        return Err(Error::OutOfSupport { index: s, max: n - 1 });
    }
    let spec = eig_tridiagonal(chain)?;
    Ok(evolve_with(&spec, s, t))
}

/// Evolution from a precomputed spectrum; amp_r = sum_j V_rj e^{-it l_j} V_sj.
pub fn evolve_with(spec: &DenseSpectrum, s: usize, t: f64) -> Vec<Complex64> {
    let n = spec.vectors.size();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        let phase = Complex64::from_polar(1.0, -t * spec.eigenvalues[j]);
        let proj = spec.vectors.get(s, j);
        for (r, o) in out.iter_mut().enumerate() {
            *o += spec.vectors.get(r, j) * proj * phase;
        }
    }
    out
}

/// Evolve truncations of an infinite chain at each size in `k_list`,
/// returning the (r, s) amplitude per truncation. Convergence across the
/// list is the caller's check.
pub fn truncation_sweep(
    spec: &Family,
    r: usize,
    s: usize,
    t: f64,
    k_list: &[usize],
) -> Result<Vec<Complex64>, Error> {
    if spec.is_finite() {
        return Err(Error::InvalidSpec(format!(
            "truncation sweep applies to the infinite families, not {}",
            spec.kind_name()
        )));
    }
    let mut out = Vec::with_capacity(k_list.len());
    for &k in k_list {
        if r > k || s > k {
            return Err(Error::OutOfSupport { index: r.max(s), max: k });
        }
        let chain = chain::build_chain_truncated(spec, k)?;
        let col = evolve_oracle(&chain, s, t)?;
        out.push(col[r]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{build_chain, SignConvention};
    use approx::assert_relative_eq;

    fn residual(chain: &JacobiChain, spec: &DenseSpectrum) -> f64 {
        // max |M v - lambda v| over all pairs
        let n = chain.size();
        let m = chain.to_dense();
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for r in 0..n {
                let mut mv = 0.0;
                for k in 0..n {
                    mv += m.get(r, k) * spec.vectors.get(k, j);
                }
                worst = worst.max((mv - spec.eigenvalues[j] * spec.vectors.get(r, j)).abs());
            }
        }
        worst
    }

    #[test]
    fn single_site() {
        let chain = JacobiChain::new(vec![2.5], vec![], SignConvention::MinusJ);
        let spec = eig_tridiagonal(&chain).unwrap();
        assert_eq!(spec.eigenvalues, vec![2.5]);
        assert_eq!(spec.vectors.get(0, 0), 1.0);
    }

    #[test]
    fn two_site_analytic() {
        // h = [0,0], J = [1]: eigenvalues -1, +1 for either sign convention
        let chain = JacobiChain::new(vec![0.0, 0.0], vec![1.0], SignConvention::PlusJ);
        let spec = eig_tridiagonal(&chain).unwrap();
        assert_relative_eq!(spec.eigenvalues[0], -1.0, max_relative = 1e-14);
        assert_relative_eq!(spec.eigenvalues[1], 1.0, max_relative = 1e-14);
        assert!(residual(&chain, &spec) < 1e-14);
    }

    #[test]
    fn krawtchouk_integer_spectrum() {
        let f = Family::krawtchouk(4, 0.5).unwrap();
        let chain = build_chain(&f).unwrap();
        let spec = eig_tridiagonal(&chain).unwrap();
        for (j, &ev) in spec.eigenvalues.iter().enumerate() {
            assert!((ev - j as f64).abs() < 1e-11, "eig {j} = {ev}");
        }
        assert!(residual(&chain, &spec) < 1e-11);
        assert!(spec.vectors.orthogonality_defect() < 1e-11);
    }

    #[test]
    fn random_chain_residuals() {
        // deterministic pseudo-random chains, no polynomial structure
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for n in [2usize, 5, 16, 40] {
            let h: Vec<f64> = (0..n).map(|_| 4.0 * next() - 2.0).collect();
            let j: Vec<f64> = (0..n - 1).map(|_| next() + 0.05).collect();
            let chain = JacobiChain::new(h, j, SignConvention::MinusJ);
            let spec = eig_tridiagonal(&chain).unwrap();
            let radius = spec.eigenvalues.iter().fold(1.0f64, |a, &b| a.max(b.abs()));
            assert!(residual(&chain, &spec) < 1e-11 * radius, "n={n}");
            assert!(spec.vectors.orthogonality_defect() < 1e-11, "n={n}");
            // ascending order
            for w in spec.eigenvalues.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn evolution_basics() {
        let f = Family::krawtchouk(6, 0.4).unwrap();
        let chain = build_chain(&f).unwrap();
        // t = 0 returns the basis vector
        let col = evolve_oracle(&chain, 2, 0.0).unwrap();
        for (r, v) in col.iter().enumerate() {
            let expect = if r == 2 { 1.0 } else { 0.0 };
            assert!((v - expect).norm() < 1e-12);
        }
        // norm preservation
        let col = evolve_oracle(&chain, 3, 1.7).unwrap();
        let norm: f64 = col.iter().map(|v| v.norm_sqr()).sum();
        assert_relative_eq!(norm, 1.0, max_relative = 1e-11);
    }

    #[test]
    fn group_property() {
        // exp(-i(t1+t2)M) e_s = exp(-it1 M) exp(-it2 M) e_s
        let f = Family::dual_hahn(8, 0.5, 1.5).unwrap();
        let chain = build_chain(&f).unwrap();
        let spec = eig_tridiagonal(&chain).unwrap();
        let (t1, t2, s) = (0.9, 1.43, 3usize);
        let step2 = evolve_with(&spec, s, t2);
        // apply exp(-i t1 M) to step2 via the spectral basis
        let n = chain.size();
        let mut combined = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            let phase = Complex64::from_polar(1.0, -t1 * spec.eigenvalues[j]);
            let mut proj = Complex64::new(0.0, 0.0);
            for k in 0..n {
                proj += spec.vectors.get(k, j) * step2[k];
            }
            for (r, c) in combined.iter_mut().enumerate() {
                *c += spec.vectors.get(r, j) * proj * phase;
            }
        }
        let direct = evolve_with(&spec, s, t1 + t2);
        for (a, b) in combined.iter().zip(&direct) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn truncation_sweep_deterministic_and_convergent() {
        let f = Family::charlier_truncated(1.0, 60).unwrap();
        let twice = truncation_sweep(&f, 0, 0, std::f64::consts::PI, &[40, 40]).unwrap();
        assert_eq!(twice[0], twice[1]);
        // |f_00(pi)| converges to e^{-2 alpha} = e^{-2}
        let vals = truncation_sweep(&f, 0, 0, std::f64::consts::PI, &[20, 40, 60]).unwrap();
        let target = (-2.0f64).exp();
        let errs: Vec<f64> = vals.iter().map(|v| (v.norm() - target).abs()).collect();
        assert!(errs[2] < 1e-10, "converged value off: {}", errs[2]);
        assert!(errs[0] >= errs[2]);
    }

    #[test]
    fn flip_preserves_eigenvalues() {
        let f = Family::hahn(9, 0.5, 2.0).unwrap();
        let chain = build_chain(&f).unwrap();
        let a = eig_tridiagonal(&chain).unwrap();
        let b = eig_tridiagonal(&chain::flip_sign(&chain)).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!((x - y).abs() < 1e-11);
        }
    }
}
