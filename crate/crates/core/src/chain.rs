//! Construction of the single-excitation Jacobi matrix for a family, its
//! exact spectral decomposition from the orthonormal polynomial values, and
//! the sign-flip / affine equivalence transforms.

use crate::matrix::Matrix;
use crate::polyfam::{orthonormal_value, recurrence_coeffs, Family};
use crate::Error;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Default relative tolerance for the mirror-periodicity predicate.
pub const MIRROR_TOL: f64 = 1e-12;

/// Sign convention of the off-diagonal couplings.
///
/// `MinusJ` is the polynomial-lemma convention (off-diagonal entries -J_k);
/// `PlusJ` is the physical Hamiltonian. The two are related entrywise by
/// M'_{jk} = (-1)^{j+k} M_{jk} and share the same spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignConvention {
    PlusJ,
    MinusJ,
}

/// Real symmetric tridiagonal chain: diagonal h[0..=N], couplings J[0..N],
/// all J_k > 0, with the off-diagonal sign carried by the convention flag.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiChain {
    h: Vec<f64>,
    j: Vec<f64>,
    sign: SignConvention,
}

impl JacobiChain {
    pub fn new(h: Vec<f64>, j: Vec<f64>, sign: SignConvention) -> Self {
        assert_eq!(h.len(), j.len() + 1, "need one more diagonal entry than couplings");
        assert!(j.iter().all(|&v| v > 0.0), "couplings must be positive");
        JacobiChain { h, j, sign }
    }

    pub fn size(&self) -> usize {
        self.h.len()
    }

    /// Chain order N (sites 0..=N).
    pub fn order(&self) -> usize {
        self.h.len() - 1
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.h
    }

    pub fn couplings(&self) -> &[f64] {
        &self.j
    }

    pub fn sign_convention(&self) -> SignConvention {
        self.sign
    }

    /// Off-diagonal entries with the convention sign applied.
    pub fn signed_offdiagonal(&self) -> Vec<f64> {
        let s = match self.sign {
            SignConvention::PlusJ => 1.0,
            SignConvention::MinusJ => -1.0,
        };
        self.j.iter().map(|&v| s * v).collect()
    }

    pub fn to_dense(&self) -> Matrix {
        let n = self.size();
        let mut m = Matrix::zeros(n);
        let e = self.signed_offdiagonal();
        for i in 0..n {
            m.set(i, i, self.h[i]);
            if i + 1 < n {
                m.set(i, i + 1, e[i]);
                m.set(i + 1, i, e[i]);
            }
        }
        m
    }

    pub fn to_record(&self, family: &Family) -> ChainRecord {
        ChainRecord {
            kind: family.kind_name().to_string(),
            n: self.order(),
            params: family.params_map(),
            h: self.h.clone(),
            j: self.j.clone(),
            sign: match self.sign {
                SignConvention::PlusJ => "plus".to_string(),
                SignConvention::MinusJ => "minus".to_string(),
            },
        }
    }
}

/// JSON-serializable chain description consumed by the CLI and fixtures.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainRecord {
    pub kind: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub params: BTreeMap<String, f64>,
    pub h: Vec<f64>,
    #[serde(rename = "J")]
    pub j: Vec<f64>,
    pub sign: String,
}

/// Build the chain from the family's recurrence coefficients:
/// h_n = -(a_n + c_n), J_n = sqrt(a_n c_{n+1}), off-diagonals -J (MinusJ).
/// This reproduces the printed coupling formulas of every family that has
/// them and extends to Racah, where none are printed.
pub fn build_chain(spec: &Family) -> Result<JacobiChain, Error> {
    spec.validate()?;
    build_truncated(spec, spec.order())
}

/// Chain for the leading (k_max+1)-site block; used to study truncation
/// convergence of the infinite families.
pub fn build_chain_truncated(spec: &Family, k_max: usize) -> Result<JacobiChain, Error> {
    spec.validate()?;
    if spec.is_finite() && k_max > spec.order() {
        return Err(Error::OutOfSupport { index: k_max, max: spec.order() });
    }
    build_truncated(spec, k_max)
}

fn build_truncated(spec: &Family, order: usize) -> Result<JacobiChain, Error> {
    let mut h = Vec::with_capacity(order + 1);
    let mut j = Vec::with_capacity(order);
    let mut prev = recurrence_coeffs(spec, 0);
    for n in 0..=order {
        h.push(-(prev.0 + prev.1));
        if n < order {
            let next = recurrence_coeffs(spec, n + 1);
            let prod = prev.0 * next.1;
            debug_assert!(prod > 0.0, "a_n c_(n+1) must be positive, got {prod} at n={n}");
            j.push(prod.sqrt());
            prev = next;
        }
    }
    Ok(JacobiChain::new(h, j, SignConvention::MinusJ))
}

/// Exact spectral data of a finite chain, with U filled from the orthonormal
/// polynomial values and the eigenvalues read off the spectral lattice.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralSource {
    AnalyticPolynomial,
    NumericalSolver,
}

#[derive(Debug, Clone)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    pub u: Matrix,
    pub source: SpectralSource,
}

impl SpectralData {
    /// Transfer amplitude f_{r,s}(t) = sum_j U_{rj} U_{sj} exp(-i t eps_j).
    pub fn amplitude(&self, r: usize, s: usize, t: f64) -> num_complex::Complex64 {
        let n = self.u.size();
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for jj in 0..n {
            let phase = num_complex::Complex64::from_polar(1.0, -t * self.eigenvalues[jj]);
            acc += self.u.get(r, jj) * self.u.get(s, jj) * phase;
        }
        acc
    }

    /// Spectral data of the sign-flipped chain: U'_{jk} = (-1)^{j+k} U_{jk}
    /// with unchanged eigenvalues.
    pub fn flipped(&self) -> SpectralData {
        let n = self.u.size();
        let mut u = Matrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                let s = if (r + c) % 2 == 0 { 1.0 } else { -1.0 };
                u.set(r, c, s * self.u.get(r, c));
            }
        }
        SpectralData { eigenvalues: self.eigenvalues.clone(), u, source: self.source.clone() }
    }
}

/// Eigenvalues eps_j = lattice(j) and eigenvectors U_{kj} = P~_k(j) for a
/// finite family. Infinite families must go through the truncated oracle.
pub fn spectral_data(spec: &Family) -> Result<SpectralData, Error> {
    spec.validate()?;
    if !spec.is_finite() {
        return Err(Error::InvalidSpec(format!(
            "{} has no finite analytic spectral decomposition; use the truncated oracle",
            spec.kind_name()
        )));
    }
    let size = spec.size();
    let eigenvalues: Vec<f64> = (0..size).map(|j| spec.lattice(j)).collect();
    let mut u = Matrix::zeros(size);
    for site in 0..size {
        for eig in 0..size {
            u.set(site, eig, orthonormal_value(spec, site, eig)?);
        }
    }
    Ok(SpectralData { eigenvalues, u, source: SpectralSource::AnalyticPolynomial })
}

/// Toggle the off-diagonal sign convention; spectrum invariant.
pub fn flip_sign(chain: &JacobiChain) -> JacobiChain {
    JacobiChain {
        h: chain.h.clone(),
        j: chain.j.clone(),
        sign: match chain.sign {
            SignConvention::PlusJ => SignConvention::MinusJ,
            SignConvention::MinusJ => SignConvention::PlusJ,
        },
    }
}

/// M' = lambda M + mu I. Couplings stay positive: a negative lambda flips
/// the sign convention instead of the stored J values.
pub fn affine_transform(chain: &JacobiChain, lambda: f64, mu: f64) -> Result<JacobiChain, Error> {
    if lambda == 0.0 {
        return Err(Error::ZeroScale);
    }
    let h = chain.h.iter().map(|&v| lambda * v + mu).collect();
    let j = chain.j.iter().map(|&v| lambda.abs() * v).collect();
    let sign = if lambda > 0.0 {
        chain.sign
    } else {
        match chain.sign {
            SignConvention::PlusJ => SignConvention::MinusJ,
            SignConvention::MinusJ => SignConvention::PlusJ,
        }
    };
    Ok(JacobiChain { h, j, sign })
}

/// h_n = h_{N-n} and J_n = J_{N-1-n} within tol * (largest entry magnitude).
pub fn is_mirror_periodic(chain: &JacobiChain, tol: f64) -> bool {
    assert!(tol > 0.0);
    let n = chain.order();
    let scale = chain
        .h
        .iter()
        .chain(chain.j.iter())
        .fold(0.0f64, |acc, &v| acc.max(v.abs()));
    let mut worst: f64 = 0.0;
    for k in 0..=n {
        worst = worst.max((chain.h[k] - chain.h[n - k]).abs());
    }
    for k in 0..n {
        worst = worst.max((chain.j[k] - chain.j[n - 1 - k]).abs());
    }
    worst <= tol * scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn krawtchouk_chain_entries() {
        let f = Family::krawtchouk(2, 0.5).unwrap();
        let chain = build_chain(&f).unwrap();
        assert_eq!(chain.diagonal(), &[1.0, 1.0, 1.0]);
        let root_half = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(chain.couplings()[0], root_half, max_relative = 1e-13);
        assert_relative_eq!(chain.couplings()[1], root_half, max_relative = 1e-13);
        assert_eq!(chain.sign_convention(), SignConvention::MinusJ);
    }

    #[test]
    fn krawtchouk_chain_matches_printed_formulas() {
        // J_n = sqrt(p(1-p)) sqrt((n+1)(N-n)), h_n = Np + (1-2p)n
        for &(n_ord, p) in &[(5usize, 0.3), (9, 0.5), (12, 0.77)] {
            let f = Family::krawtchouk(n_ord, p).unwrap();
            let chain = build_chain(&f).unwrap();
            let nn = n_ord as f64;
            for k in 0..=n_ord {
                assert_relative_eq!(
                    chain.diagonal()[k],
                    nn * p + (1.0 - 2.0 * p) * k as f64,
                    max_relative = 1e-12
                );
            }
            for k in 0..n_ord {
                let expect = (p * (1.0 - p)).sqrt() * (((k + 1) as f64) * (nn - k as f64)).sqrt();
                assert_relative_eq!(chain.couplings()[k], expect, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn hahn_chain_matches_printed_formulas() {
        for &(n_ord, alpha, beta) in &[(6usize, 0.5, 1.5), (10, 2.0, 0.1), (8, 1.0, 1.0)] {
            let f = Family::hahn(n_ord, alpha, beta).unwrap();
            let chain = build_chain(&f).unwrap();
            let nn = n_ord as f64;
            for k in 0..=n_ord {
                let kf = k as f64;
                let expect = nn / 2.0
                    + (alpha - beta)
                        * ((alpha + beta) * (nn - 2.0 * kf) - 2.0 * kf * (kf + 1.0))
                        / (2.0 * (2.0 * kf + alpha + beta) * (2.0 * kf + alpha + beta + 2.0));
                assert_relative_eq!(chain.diagonal()[k], expect, max_relative = 1e-11);
            }
            for k in 0..n_ord {
                let kf = k as f64;
                let expect = ((kf + 1.0)
                    * (kf + alpha + 1.0)
                    * (kf + beta + 1.0)
                    * (kf + alpha + beta + 1.0)
                    * (kf + alpha + beta + nn + 2.0)
                    * (nn - kf)
                    / ((2.0 * kf + alpha + beta + 2.0).powi(2)
                        * (2.0 * kf + alpha + beta + 1.0)
                        * (2.0 * kf + alpha + beta + 3.0)))
                    .sqrt();
                assert_relative_eq!(chain.couplings()[k], expect, max_relative = 1e-11);
            }
        }
    }

    #[test]
    fn hahn_equal_parameters_constant_field() {
        let f = Family::hahn(8, 1.3, 1.3).unwrap();
        let chain = build_chain(&f).unwrap();
        for &h in chain.diagonal() {
            assert_relative_eq!(h, 4.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn dual_hahn_chain_matches_printed_formulas() {
        let f = Family::dual_hahn(1, 0.5, 0.5).unwrap();
        let chain = build_chain(&f).unwrap();
        assert_relative_eq!(chain.diagonal()[0], 1.5, max_relative = 1e-13);
        assert_relative_eq!(chain.diagonal()[1], 1.5, max_relative = 1e-13);
        assert_relative_eq!(chain.couplings()[0], 1.5, max_relative = 1e-13);

        for &(n_ord, gamma, delta) in &[(7usize, 0.5, 1.25), (11, 2.0, 0.3)] {
            let f = Family::dual_hahn(n_ord, gamma, delta).unwrap();
            let chain = build_chain(&f).unwrap();
            let nn = n_ord as f64;
            for k in 0..=n_ord {
                let kf = k as f64;
                let expect = (kf + gamma + 1.0) * (nn - kf) + kf * (delta + nn - kf + 1.0);
                assert_relative_eq!(chain.diagonal()[k], expect, max_relative = 1e-12);
            }
            for k in 0..n_ord {
                let kf = k as f64;
                let expect = ((kf + 1.0) * (kf + gamma + 1.0) * (nn - kf) * (delta + nn - kf))
                    .sqrt();
                assert_relative_eq!(chain.couplings()[k], expect, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn charlier_meixner_chain_formulas() {
        let f = Family::charlier_truncated(1.7, 12).unwrap();
        let chain = build_chain(&f).unwrap();
        for k in 0..=12 {
            assert_relative_eq!(chain.diagonal()[k], 1.7 + k as f64, max_relative = 1e-13);
        }
        for k in 0..12 {
            assert_relative_eq!(
                chain.couplings()[k],
                (1.7 * (k as f64 + 1.0)).sqrt(),
                max_relative = 1e-13
            );
        }
        let (b, c) = (1.5, 0.4);
        let f = Family::meixner_truncated(b, c, 10).unwrap();
        let chain = build_chain(&f).unwrap();
        for k in 0..=10 {
            let kf = k as f64;
            assert_relative_eq!(
                chain.diagonal()[k],
                (kf + c * (kf + b)) / (1.0 - c),
                max_relative = 1e-13
            );
        }
        for k in 0..10 {
            let kf = k as f64;
            assert_relative_eq!(
                chain.couplings()[k],
                (c * (kf + 1.0) * (kf + b)).sqrt() / (1.0 - c),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn spectral_eigenvalues() {
        let f = Family::krawtchouk(3, 0.4).unwrap();
        let sd = spectral_data(&f).unwrap();
        assert_eq!(sd.eigenvalues, vec![0.0, 1.0, 2.0, 3.0]);
        let f = Family::dual_hahn(2, 0.5, 0.5).unwrap();
        let sd = spectral_data(&f).unwrap();
        assert_eq!(sd.eigenvalues, vec![0.0, 3.0, 8.0]);
    }

    #[test]
    fn spectral_reconstructs_chain() {
        // U D U^T must reproduce the tridiagonal matrix entrywise
        let specs = vec![
            Family::krawtchouk(12, 0.3).unwrap(),
            Family::hahn(10, 0.5, 2.0).unwrap(),
            Family::dual_hahn(9, 1.5, 0.25).unwrap(),
            Family::racah(8, 20.0, 0.5, 1.0).unwrap(),
        ];
        for f in specs {
            let chain = build_chain(&f).unwrap();
            let sd = spectral_data(&f).unwrap();
            assert!(sd.u.orthogonality_defect() < 1e-10, "{}", f.kind_name());
            let n = f.size();
            let dense = chain.to_dense();
            let mut recon = Matrix::zeros(n);
            for r in 0..n {
                for c in 0..n {
                    let mut acc = 0.0;
                    for j in 0..n {
                        acc += sd.u.get(r, j) * sd.eigenvalues[j] * sd.u.get(c, j);
                    }
                    recon.set(r, c, acc);
                }
            }
            let scale = sd.eigenvalues.iter().fold(1.0f64, |a, &b| a.max(b.abs()));
            assert!(
                dense.max_abs_diff(&recon) < 1e-9 * scale,
                "{}: reconstruction defect {}",
                f.kind_name(),
                dense.max_abs_diff(&recon)
            );
        }
    }

    #[test]
    fn flip_is_involution() {
        let f = Family::krawtchouk(5, 0.3).unwrap();
        let chain = build_chain(&f).unwrap();
        assert_eq!(flip_sign(&flip_sign(&chain)), chain);
    }

    #[test]
    fn affine_identity_and_scaling() {
        let f = Family::krawtchouk(5, 0.3).unwrap();
        let chain = build_chain(&f).unwrap();
        assert_eq!(affine_transform(&chain, 1.0, 0.0).unwrap(), chain);
        assert!(matches!(affine_transform(&chain, 0.0, 1.0), Err(Error::ZeroScale)));
        let scaled = affine_transform(&chain, -2.0, 1.0).unwrap();
        assert_eq!(scaled.sign_convention(), SignConvention::PlusJ);
        assert_relative_eq!(scaled.diagonal()[0], -2.0 * chain.diagonal()[0] + 1.0);
        assert_relative_eq!(scaled.couplings()[0], 2.0 * chain.couplings()[0]);
    }

    #[test]
    fn mirror_periodicity() {
        let f = Family::krawtchouk(8, 0.5).unwrap();
        assert!(is_mirror_periodic(&build_chain(&f).unwrap(), MIRROR_TOL));
        let f = Family::krawtchouk(8, 0.3).unwrap();
        assert!(!is_mirror_periodic(&build_chain(&f).unwrap(), MIRROR_TOL));
        let f = Family::dual_hahn(7, 0.75, 0.75).unwrap();
        assert!(is_mirror_periodic(&build_chain(&f).unwrap(), MIRROR_TOL));
        let f = Family::dual_hahn(7, 0.75, 1.75).unwrap();
        assert!(!is_mirror_periodic(&build_chain(&f).unwrap(), MIRROR_TOL));
        // Hahn with alpha != beta is not mirror-periodic
        let f = Family::hahn(6, 0.5, 2.5).unwrap();
        assert!(!is_mirror_periodic(&build_chain(&f).unwrap(), MIRROR_TOL));
    }

    #[test]
    fn racah_chain_approaches_dual_hahn() {
        // beta -> infinity turns the Racah chain into the dual Hahn chain
        // with the same gamma, delta; no further normalization is required.
        let (n_ord, gamma, delta) = (6usize, 0.5, 1.25);
        let dh = build_chain(&Family::dual_hahn(n_ord, gamma, delta).unwrap()).unwrap();
        let racah = build_chain(
            &Family::racah(n_ord, 1.0e6, gamma, delta).unwrap(),
        )
        .unwrap();
        for k in 0..=n_ord {
            assert_relative_eq!(
                racah.diagonal()[k],
                dh.diagonal()[k],
                max_relative = 1e-3
            );
        }
        for k in 0..n_ord {
            assert_relative_eq!(
                racah.couplings()[k],
                dh.couplings()[k],
                max_relative = 1e-3
            );
        }
    }

    #[test]
    fn chain_record_round_trip() {
        let f = Family::dual_hahn(3, 0.5, 1.5).unwrap();
        let chain = build_chain(&f).unwrap();
        let rec = chain.to_record(&f);
        assert_eq!(rec.kind, "dualhahn");
        assert_eq!(rec.n, 3);
        assert_eq!(rec.sign, "minus");
        let json = serde_json::to_string(&rec).unwrap();
        assert!(json.contains("\"N\":3"), "{json}");
        assert!(json.contains("\"J\":["), "{json}");
        let back: ChainRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.h, rec.h);
        assert_eq!(back.j, rec.j);
        assert_eq!(back.params["gamma"], 0.5);
    }
}
