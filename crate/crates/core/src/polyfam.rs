//! The six discrete orthogonal polynomial families: parameter validation,
//! weights and norms in signed log form, point evaluation by terminating
//! hypergeometric series and by three-term recurrence, and the orthonormal
//! matrix entries U_{n,x} = sqrt(w(x)/d_n) P_n(x).

use crate::hypergeom::{
    eval_phq, ln_factorial, log_binomial, log_binomial_real, log_pochhammer, HypSeriesSpec,
    SignedLog,
};
use crate::Error;
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Tail mass threshold for the default truncation of the infinite families.
const TRUNCATION_TAIL: f64 = 1e-16;
const TRUNCATION_CAP: usize = 100_000;

/// One polynomial family with its parameters.
///
/// Finite families carry the chain order `n` (chain of n+1 sites); the
/// infinite Charlier and Meixner families carry a truncation index `k_max`.
/// Racah is the alpha = -N-1 case, so beta, gamma, delta remain free.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Krawtchouk { n: usize, p: f64 },
    Hahn { n: usize, alpha: f64, beta: f64 },
    DualHahn { n: usize, gamma: f64, delta: f64 },
    Racah { n: usize, beta: f64, gamma: f64, delta: f64 },
    Charlier { alpha: f64, k_max: usize },
    Meixner { b: f64, c: f64, k_max: usize },
}

impl Family {
    pub fn krawtchouk(n: usize, p: f64) -> Result<Self, Error> {
        let f = Family::Krawtchouk { n, p };
        f.validate()?;
        Ok(f)
    }

    pub fn hahn(n: usize, alpha: f64, beta: f64) -> Result<Self, Error> {
        let f = Family::Hahn { n, alpha, beta };
        f.validate()?;
        Ok(f)
    }

    pub fn dual_hahn(n: usize, gamma: f64, delta: f64) -> Result<Self, Error> {
        let f = Family::DualHahn { n, gamma, delta };
        f.validate()?;
        Ok(f)
    }

    pub fn racah(n: usize, beta: f64, gamma: f64, delta: f64) -> Result<Self, Error> {
        let f = Family::Racah { n, beta, gamma, delta };
        f.validate()?;
        Ok(f)
    }

    /// Charlier with the default tail-rule truncation.
    pub fn charlier(alpha: f64) -> Result<Self, Error> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidSpec(format!("charlier requires alpha > 0, got {alpha}")));
        }
        let k_max = charlier_truncation(alpha);
        Ok(Family::Charlier { alpha, k_max })
    }

    pub fn charlier_truncated(alpha: f64, k_max: usize) -> Result<Self, Error> {
        let f = Family::Charlier { alpha, k_max };
        f.validate()?;
        Ok(f)
    }

    /// Meixner with the default tail-rule truncation.
    pub fn meixner(b: f64, c: f64) -> Result<Self, Error> {
        if !(b > 0.0) || !(c > 0.0 && c < 1.0) {
            return Err(Error::InvalidSpec(format!(
                "meixner requires b > 0 and 0 < c < 1, got b={b}, c={c}"
            )));
        }
        let k_max = meixner_truncation(b, c);
        Ok(Family::Meixner { b, c, k_max })
    }

    pub fn meixner_truncated(b: f64, c: f64, k_max: usize) -> Result<Self, Error> {
        let f = Family::Meixner { b, c, k_max };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), Error> {
        match *self {
            Family::Krawtchouk { p, .. } => {
                if !(p > 0.0 && p < 1.0) {
                    return Err(Error::InvalidSpec(format!(
                        "krawtchouk requires 0 < p < 1, got p={p}"
                    )));
                }
            }
            Family::Hahn { alpha, beta, .. } => {
                // only the alpha,beta > -1 orthogonality branch is supported
                if !(alpha > -1.0 && beta > -1.0) {
                    return Err(Error::InvalidSpec(format!(
                        "hahn requires alpha > -1 and beta > -1, got alpha={alpha}, beta={beta}"
                    )));
                }
            }
            Family::DualHahn { gamma, delta, .. } => {
                if !(gamma > -1.0 && delta > -1.0) {
                    return Err(Error::InvalidSpec(format!(
                        "dualhahn requires gamma > -1 and delta > -1, got gamma={gamma}, delta={delta}"
                    )));
                }
            }
            Family::Racah { n, beta, gamma, delta } => {
                if !(gamma + 1.0 > 0.0 && delta + 1.0 > 0.0 && beta > gamma + n as f64) {
                    return Err(Error::InvalidSpec(format!(
                        "racah requires gamma+1 > 0, delta+1 > 0 and beta > gamma+N, \
                         got beta={beta}, gamma={gamma}, delta={delta}, N={n}"
                    )));
                }
            }
            Family::Charlier { alpha, k_max } => {
                if !(alpha > 0.0) {
                    return Err(Error::InvalidSpec(format!(
                        "charlier requires alpha > 0, got {alpha}"
                    )));
                }
                if k_max == 0 {
                    return Err(Error::InvalidSpec("charlier truncation must be positive".into()));
                }
            }
            Family::Meixner { b, c, k_max } => {
                if !(b > 0.0) || !(c > 0.0 && c < 1.0) {
                    return Err(Error::InvalidSpec(format!(
                        "meixner requires b > 0 and 0 < c < 1, got b={b}, c={c}"
                    )));
                }
                if k_max == 0 {
                    return Err(Error::InvalidSpec("meixner truncation must be positive".into()));
                }
            }
        }
        Ok(())
    }

    /// Chain order: N for finite families, the truncation index otherwise.
    pub fn order(&self) -> usize {
        match *self {
            Family::Krawtchouk { n, .. }
            | Family::Hahn { n, .. }
            | Family::DualHahn { n, .. }
            | Family::Racah { n, .. } => n,
            Family::Charlier { k_max, .. } | Family::Meixner { k_max, .. } => k_max,
        }
    }

    /// Number of sites, order + 1.
    pub fn size(&self) -> usize {
        self.order() + 1
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, Family::Charlier { .. } | Family::Meixner { .. })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Family::Krawtchouk { .. } => "krawtchouk",
            Family::Hahn { .. } => "hahn",
            Family::DualHahn { .. } => "dualhahn",
            Family::Racah { .. } => "racah",
            Family::Charlier { .. } => "charlier",
            Family::Meixner { .. } => "meixner",
        }
    }

    pub fn params_map(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        match *self {
            Family::Krawtchouk { p, .. } => {
                m.insert("p".into(), p);
            }
            Family::Hahn { alpha, beta, .. } => {
                m.insert("alpha".into(), alpha);
                m.insert("beta".into(), beta);
            }
            Family::DualHahn { gamma, delta, .. } => {
                m.insert("gamma".into(), gamma);
                m.insert("delta".into(), delta);
            }
            Family::Racah { beta, gamma, delta, .. } => {
                m.insert("beta".into(), beta);
                m.insert("gamma".into(), gamma);
                m.insert("delta".into(), delta);
            }
            Family::Charlier { alpha, .. } => {
                m.insert("alpha".into(), alpha);
            }
            Family::Meixner { b, c, .. } => {
                m.insert("b".into(), b);
                m.insert("c".into(), c);
            }
        }
        m
    }

    /// Spectral lattice: the eigenvalue attached to support point x.
    /// Linear (= x) for Krawtchouk/Hahn/Charlier/Meixner, quadratic
    /// x(x + gamma + delta + 1) for dual Hahn and Racah.
    pub fn lattice(&self, x: usize) -> f64 {
        let xf = x as f64;
        match *self {
            Family::DualHahn { gamma, delta, .. } | Family::Racah { gamma, delta, .. } => {
                xf * (xf + gamma + delta + 1.0)
            }
            _ => xf,
        }
    }

    fn check_support(&self, x: usize) -> Result<(), Error> {
        if self.is_finite() && x > self.order() {
            return Err(Error::OutOfSupport { index: x, max: self.order() });
        }
        Ok(())
    }
}

/// Smallest K with Poisson tail mass below the threshold.
fn charlier_truncation(alpha: f64) -> usize {
    // w(x) = alpha^x e^-alpha / x!; ratio w(x+1)/w(x) = alpha/(x+1)
    let mut w = (-alpha).exp();
    let mut total = w;
    for x in 0..TRUNCATION_CAP {
        let next = w * alpha / (x as f64 + 1.0);
        let q = alpha / (x as f64 + 2.0);
        if q < 1.0 {
            let tail_bound = next / (1.0 - q);
            if tail_bound < TRUNCATION_TAIL * total {
                return x + 1;
            }
        }
        w = next;
        total += w;
    }
    TRUNCATION_CAP
}

/// Smallest K with negative-binomial tail mass below the threshold.
fn meixner_truncation(b: f64, c: f64) -> usize {
    // w(x) = (b)_x c^x / x!; ratio w(x+1)/w(x) = c (x+b)/(x+1)
    let mut w = 1.0f64;
    let mut total = w;
    for x in 0..TRUNCATION_CAP {
        let xf = x as f64;
        let next = w * c * (xf + b) / (xf + 1.0);
        // the ratio decreases toward c once x+1 > b-ish; bound the tail
        // geometrically by the current ratio when it is already below 1
        let q = (c * (xf + 1.0 + b) / (xf + 2.0)).max(c);
        if q < 1.0 {
            let tail_bound = next / (1.0 - q);
            if tail_bound < TRUNCATION_TAIL * total {
                return x + 1;
            }
        }
        w = next;
        total += w;
    }
    TRUNCATION_CAP
}

/// Orthogonality weight w(x) in signed log form.
pub fn weight(spec: &Family, x: usize) -> Result<SignedLog, Error> {
    spec.validate()?;
    spec.check_support(x)?;
    let xf = x as f64;
    Ok(match *spec {
        Family::Krawtchouk { n, p } => {
            let nn = n as f64;
            log_binomial(n, x as i64)
                * SignedLog::new(1, xf * p.ln() + (nn - xf) * (1.0 - p).ln())
        }
        Family::Hahn { n, alpha, beta } => {
            log_binomial_real(alpha + xf, x) * log_binomial_real(beta + (n - x) as f64, n - x)
        }
        Family::DualHahn { n, gamma, delta } => {
            // (2x+g+d+1)(g+1)_x (-N)_x N! / ((-1)^x (x+g+d+1)_{N+1} (d+1)_x x!)
            // The scalar 2x+g+d+1 equals the j=x factor of (x+g+d+1)_{N+1},
            // so it is cancelled exactly rather than divided out.
            let nn = n as f64;
            let mut denom = SignedLog::ONE;
            for j in 0..=n {
                if j == x {
                    continue;
                }
                denom = denom * SignedLog::from_f64(xf + gamma + delta + 1.0 + j as f64);
            }
            let num = log_pochhammer(gamma + 1.0, x)
                * log_pochhammer(-nn, x)
                * SignedLog::new(1, ln_factorial(n));
            let sign_x = SignedLog::new(if x % 2 == 0 { 1 } else { -1 }, 0.0);
            num / (sign_x * denom * log_pochhammer(delta + 1.0, x) * SignedLog::new(1, ln_factorial(x)))
        }
        Family::Racah { n, beta, gamma, delta } => {
            let alpha = -(n as f64) - 1.0;
            let gd1 = gamma + delta + 1.0;
            // (gd+1)_x / ((gd+1)/2)_x computed factor-wise; the i=0 pair is
            // exactly 2 for every gd (including the removable gd+1 = 0 case)
            let mut ratio = SignedLog::ONE;
            if x >= 1 {
                ratio = SignedLog::from_f64(2.0);
                for i in 1..x {
                    ratio = ratio * SignedLog::from_f64(gd1 + i as f64)
                        / SignedLog::from_f64(gd1 / 2.0 + i as f64);
                }
            }
            ratio
                * log_pochhammer((gamma + delta + 3.0) / 2.0, x)
                * log_pochhammer(alpha + 1.0, x)
                * log_pochhammer(beta + delta + 1.0, x)
                * log_pochhammer(gamma + 1.0, x)
                / (SignedLog::new(1, ln_factorial(x))
                    * log_pochhammer(gamma + delta - alpha + 1.0, x)
                    * log_pochhammer(gamma - beta + 1.0, x)
                    * log_pochhammer(delta + 1.0, x))
        }
        Family::Charlier { alpha, .. } => {
            SignedLog::new(1, xf * alpha.ln() - alpha - ln_factorial(x))
        }
        Family::Meixner { b, c, .. } => {
            log_pochhammer(b, x) * SignedLog::new(1, xf * c.ln() - ln_factorial(x))
        }
    })
}

/// Squared norm d_n in signed log form.
pub fn norm_d(spec: &Family, n_deg: usize) -> Result<SignedLog, Error> {
    spec.validate()?;
    spec.check_support(n_deg)?;
    let nf = n_deg as f64;
    Ok(match *spec {
        Family::Krawtchouk { n: _, p } => {
            let ratio = (1.0 - p) / p;
            log_binomial(spec.order(), n_deg as i64).recip()
                * SignedLog::new(1, nf * ratio.ln())
        }
        Family::Hahn { n, alpha, beta } => {
            let fact = SignedLog::new(
                1,
                ln_factorial(n_deg) + ln_factorial(n - n_deg) - 2.0 * ln_factorial(n),
            );
            fact * log_pochhammer(nf + alpha + beta + 1.0, n + 1)
                * log_pochhammer(beta + 1.0, n_deg)
                / (SignedLog::from_f64(2.0 * nf + alpha + beta + 1.0)
                    * log_pochhammer(alpha + 1.0, n_deg))
        }
        Family::DualHahn { n, gamma, delta } => {
            (log_binomial_real(gamma + nf, n_deg) * log_binomial_real(delta + (n - n_deg) as f64, n - n_deg))
                .recip()
        }
        Family::Racah { n, beta, gamma, delta } => {
            let alpha = -(n as f64) - 1.0;
            let m = log_pochhammer(-beta, n) * log_pochhammer(gamma + delta + 2.0, n)
                / (log_pochhammer(-beta + gamma + 1.0, n) * log_pochhammer(delta + 1.0, n));
            m * log_pochhammer(nf + alpha + beta + 1.0, n_deg)
                * log_pochhammer(alpha + beta - gamma + 1.0, n_deg)
                * log_pochhammer(alpha - delta + 1.0, n_deg)
                * log_pochhammer(beta + 1.0, n_deg)
                * SignedLog::new(1, ln_factorial(n_deg))
                / (log_pochhammer(alpha + beta + 2.0, 2 * n_deg)
                    * log_pochhammer(alpha + 1.0, n_deg)
                    * log_pochhammer(beta + delta + 1.0, n_deg)
                    * log_pochhammer(gamma + 1.0, n_deg))
        }
        Family::Charlier { alpha, .. } => {
            SignedLog::new(1, ln_factorial(n_deg) - nf * alpha.ln())
        }
        Family::Meixner { b, c, .. } => {
            SignedLog::new(1, ln_factorial(n_deg) - nf * c.ln())
                / (log_pochhammer(b, n_deg) * SignedLog::new(1, b * (1.0 - c).ln()))
        }
    })
}

/// Weights and norms tabulated over the whole support.
#[derive(Debug, Clone)]
pub struct WeightTable {
    pub family: Family,
    pub w: Vec<SignedLog>,
    pub d: Vec<SignedLog>,
}

impl WeightTable {
    pub fn new(family: &Family) -> Result<Self, Error> {
        family.validate()?;
        let size = family.size();
        let w = (0..size).map(|x| weight(family, x)).collect::<Result<_, _>>()?;
        let d = (0..size).map(|n| norm_d(family, n)).collect::<Result<_, _>>()?;
        Ok(WeightTable { family: family.clone(), w, d })
    }
}

/// The defining terminating hypergeometric series of P_n at support point x.
fn series_spec(spec: &Family, n_deg: usize, x: usize) -> HypSeriesSpec {
    let nf = n_deg as f64;
    let xf = x as f64;
    let c = |v: f64| Complex64::new(v, 0.0);
    match *spec {
        Family::Krawtchouk { n, p } => HypSeriesSpec::new(
            vec![c(-xf), c(-nf)],
            vec![c(-(n as f64))],
            c(1.0 / p),
        ),
        Family::Hahn { n, alpha, beta } => HypSeriesSpec::new(
            vec![c(-nf), c(nf + alpha + beta + 1.0), c(-xf)],
            vec![c(alpha + 1.0), c(-(n as f64))],
            c(1.0),
        ),
        Family::DualHahn { n, gamma, delta } => HypSeriesSpec::new(
            vec![c(-nf), c(-xf), c(xf + gamma + delta + 1.0)],
            vec![c(gamma + 1.0), c(-(n as f64))],
            c(1.0),
        ),
        Family::Racah { n, beta, gamma, delta } => {
            let alpha = -(n as f64) - 1.0;
            HypSeriesSpec::new(
                vec![c(-nf), c(nf + alpha + beta + 1.0), c(-xf), c(xf + gamma + delta + 1.0)],
                vec![c(alpha + 1.0), c(beta + delta + 1.0), c(gamma + 1.0)],
                c(1.0),
            )
        }
        Family::Charlier { alpha, .. } => {
            HypSeriesSpec::new(vec![c(-nf), c(-xf)], vec![], c(-1.0 / alpha))
        }
        Family::Meixner { b, c: cpar, .. } => HypSeriesSpec::new(
            vec![c(-nf), c(-xf)],
            vec![c(b)],
            c(1.0 - 1.0 / cpar),
        ),
    }
}

/// Polynomial value P_n(x) (or P_n(lambda(x)) on the quadratic lattices)
/// from the defining terminating hypergeometric series.
pub fn poly_eval(spec: &Family, n_deg: usize, x: usize) -> Result<f64, Error> {
    spec.validate()?;
    spec.check_support(x)?;
    if spec.is_finite() {
        spec.check_support(n_deg)?;
    }
    Ok(eval_phq(&series_spec(spec, n_deg, x))?.re)
}

/// Three-term recurrence coefficients in the normalized form
/// eps(x) P_n = a_n P_{n+1} - (a_n + c_n) P_n + c_n P_{n-1},
/// where eps(x) is the spectral lattice of the family.
pub fn recurrence_coeffs(spec: &Family, n_deg: usize) -> (f64, f64) {
    let nf = n_deg as f64;
    match *spec {
        Family::Krawtchouk { n, p } => {
            let nn = n as f64;
            (-p * (nn - nf), -nf * (1.0 - p))
        }
        Family::Hahn { n, alpha, beta } => {
            let nn = n as f64;
            // the (n+a+b+1)/(2n+a+b+1) pair cancels at n=0; written out to
            // stay finite when alpha+beta approaches -1
            let a = if n_deg == 0 {
                (alpha + 1.0) * nn / (alpha + beta + 2.0)
            } else {
                (nf + alpha + beta + 1.0) * (nf + alpha + 1.0) * (nn - nf)
                    / ((2.0 * nf + alpha + beta + 1.0) * (2.0 * nf + alpha + beta + 2.0))
            };
            let c = if n_deg == 0 {
                0.0
            } else {
                nf * (nf + alpha + beta + nn + 1.0) * (nf + beta)
                    / ((2.0 * nf + alpha + beta) * (2.0 * nf + alpha + beta + 1.0))
            };
            (-a, -c)
        }
        Family::DualHahn { n, gamma, delta } => {
            let nn = n as f64;
            ((nf + gamma + 1.0) * (nf - nn), nf * (nf - delta - nn - 1.0))
        }
        Family::Racah { n, beta, gamma, delta } => {
            racah_ac(-(n as f64) - 1.0, beta, gamma, delta, n_deg)
        }
        Family::Charlier { alpha, .. } => (-alpha, -nf),
        Family::Meixner { b, c, .. } => ((c * (nf + b)) / (c - 1.0), nf / (c - 1.0)),
    }
}

fn run_recurrence(eps: f64, n_deg: usize, coeffs: impl Fn(usize) -> (f64, f64)) -> f64 {
    let mut prev = 1.0;
    if n_deg == 0 {
        return prev;
    }
    let (a0, c0) = coeffs(0);
    let mut cur = (eps + a0 + c0) / a0;
    for m in 1..n_deg {
        let (a, c) = coeffs(m);
        let next = ((eps + a + c) * cur - c * prev) / a;
        prev = cur;
        cur = next;
    }
    cur
}

/// Racah recurrence coefficients for arbitrary parameter roles, used for the
/// dual-index evaluation; the n = 0 case is written with the exact
/// (n+a+b+1)/(2n+a+b+1) cancellation applied.
fn racah_ac(alpha: f64, beta: f64, gamma: f64, delta: f64, m: usize) -> (f64, f64) {
    let mf = m as f64;
    let a = if m == 0 {
        (alpha + 1.0) * (beta + delta + 1.0) * (gamma + 1.0) / (alpha + beta + 2.0)
    } else {
        (mf + alpha + 1.0) * (mf + alpha + beta + 1.0) * (mf + beta + delta + 1.0)
            * (mf + gamma + 1.0)
            / ((2.0 * mf + alpha + beta + 1.0) * (2.0 * mf + alpha + beta + 2.0))
    };
    let c = if m == 0 {
        0.0
    } else {
        mf * (mf + beta) * (mf + alpha + beta - gamma) * (mf + alpha - delta)
            / ((2.0 * mf + alpha + beta) * (2.0 * mf + alpha + beta + 1.0))
    };
    (a, c)
}

/// Polynomial value by upward three-term recurrence from P_0 = 1,
/// independent of the series route in `poly_eval`.
///
/// The defining series is symmetric under the degree/point swap (self-dual
/// for Krawtchouk, Charlier, Meixner and Racah; Hahn and dual Hahn swap
/// into each other), so the value can be computed by recursing in either
/// index. Recursing to a high degree is unstable when the evaluation point
/// sits at the edge of the support, so the index is chosen to keep the
/// degree low or the point interior.
pub fn poly_eval_recurrence(spec: &Family, n_deg: usize, x: usize) -> Result<f64, Error> {
    spec.validate()?;
    spec.check_support(x)?;
    if spec.is_finite() {
        spec.check_support(n_deg)?;
    }
    let order = spec.order();
    let edge = |idx: usize| -> f64 {
        if spec.is_finite() {
            1.0 + idx.min(order - idx) as f64
        } else {
            1.0 + idx as f64
        }
    };
    // cost of recursing to the given degree, evaluated at the given point
    let badness_native = n_deg as f64 / edge(x);
    let badness_dual = x as f64 / edge(n_deg);
    if badness_native <= badness_dual {
        return Ok(run_recurrence(spec.lattice(x), n_deg, |m| recurrence_coeffs(spec, m)));
    }
    // evaluate the dual polynomial of degree x at point n instead
    Ok(match *spec {
        Family::Krawtchouk { .. } | Family::Charlier { .. } | Family::Meixner { .. } => {
            run_recurrence(spec.lattice(n_deg), x, |m| recurrence_coeffs(spec, m))
        }
        Family::Hahn { n, alpha, beta } => {
            let dual = Family::DualHahn { n, gamma: alpha, delta: beta };
            run_recurrence(dual.lattice(n_deg), x, |m| recurrence_coeffs(&dual, m))
        }
        Family::DualHahn { n, gamma, delta } => {
            let dual = Family::Hahn { n, alpha: gamma, beta: delta };
            run_recurrence(n_deg as f64, x, |m| recurrence_coeffs(&dual, m))
        }
        Family::Racah { n, beta, gamma, delta } => {
            let alpha = -(n as f64) - 1.0;
            // swapped roles (gamma, delta, alpha, beta); dual lattice
            // m(m + alpha + beta + 1)
            let eps = n_deg as f64 * (n_deg as f64 + alpha + beta + 1.0);
            run_recurrence(eps, x, |m| racah_ac(gamma, delta, alpha, beta, m))
        }
    })
}

/// Internal evaluator tuned for assembling the orthogonal matrix: take the
/// series value when its largest term shows no cancellation (edges, short
/// sums), otherwise the recurrence value (stable in the oscillatory bulk).
fn poly_eval_accurate(spec: &Family, n_deg: usize, x: usize) -> Result<f64, Error> {
    let series = series_spec(spec, n_deg, x);
    let (value, max_term) = crate::hypergeom::eval_phq_tracked(&series)?;
    if max_term <= 8.0 * value.re.abs().max(f64::MIN_POSITIVE) {
        return Ok(value.re);
    }
    poly_eval_recurrence(spec, n_deg, x)
}

/// Orthonormal function value sqrt(w(x)/d_n) P_n(x), the (n, x) entry of the
/// orthogonal matrix diagonalizing the chain. Weights and norms stay in log
/// form until the end.
pub fn orthonormal_value(spec: &Family, n_deg: usize, x: usize) -> Result<f64, Error> {
    spec.validate()?;
    spec.check_support(x)?;
    if spec.is_finite() {
        spec.check_support(n_deg)?;
    }
    let p = poly_eval_accurate(spec, n_deg, x)?;
    let w = weight(spec, x)?;
    let d = norm_d(spec, n_deg)?;
    let scale = (w / d).sqrt();
    Ok((SignedLog::from_f64(p) * scale).value())
}
