//! Overflow-safe special-function kernels: signed log-domain arithmetic,
//! Pochhammer symbols, binomials and terminating generalized hypergeometric
//! series pFq at real or complex argument.

use num_complex::Complex64;
use thiserror::Error;

/// Tolerance for deciding that a real parameter is a non-positive integer.
/// Parameters meant as exact integers must be passed as such by callers;
/// near-integers (e.g. Hahn's beta = N(1-c)/c) stay non-integer.
pub const INT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HypError {
    /// No numerator parameter is a non-positive integer.
    #[error("series does not terminate: no non-positive-integer numerator parameter")]
    NonTerminating,
    /// A denominator Pochhammer vanishes before the series terminates.
    #[error("denominator parameter {param} hits a pole at term {index} before termination")]
    DenominatorPole { param: usize, index: usize },
}

/// A real number stored as sign and natural log of magnitude.
///
/// `sign == 0` encodes exact zero; `logmag` is meaningless in that case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    pub sign: i8,
    pub logmag: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog { sign: 0, logmag: f64::NEG_INFINITY };
    pub const ONE: SignedLog = SignedLog { sign: 1, logmag: 0.0 };

    pub fn new(sign: i8, logmag: f64) -> Self {
        debug_assert!(sign == -1 || sign == 0 || sign == 1);
        if sign == 0 {
            Self::ZERO
        } else {
            SignedLog { sign, logmag }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            SignedLog { sign: if x > 0.0 { 1 } else { -1 }, logmag: x.abs().ln() }
        }
    }

    pub fn value(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.logmag.exp(),
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        SignedLog { sign: self.sign.abs(), logmag: self.logmag }
    }

    /// Square root; requires a non-negative value.
    pub fn sqrt(self) -> Self {
        debug_assert!(self.sign >= 0, "sqrt of negative SignedLog");
        if self.sign == 0 {
            Self::ZERO
        } else {
            SignedLog { sign: 1, logmag: 0.5 * self.logmag }
        }
    }

    pub fn recip(self) -> Self {
        debug_assert!(self.sign != 0, "reciprocal of zero SignedLog");
        SignedLog { sign: self.sign, logmag: -self.logmag }
    }

    pub fn powi(self, k: i32) -> Self {
        if self.sign == 0 {
            return if k == 0 { Self::ONE } else { Self::ZERO };
        }
        let sign = if k % 2 == 0 { 1 } else { self.sign };
        SignedLog { sign, logmag: f64::from(k) * self.logmag }
    }
}

impl std::ops::Mul for SignedLog {
    type Output = SignedLog;
    fn mul(self, rhs: SignedLog) -> SignedLog {
        if self.sign == 0 || rhs.sign == 0 {
            SignedLog::ZERO
        } else {
            SignedLog { sign: self.sign * rhs.sign, logmag: self.logmag + rhs.logmag }
        }
    }
}

impl std::ops::Div for SignedLog {
    type Output = SignedLog;
    fn div(self, rhs: SignedLog) -> SignedLog {
        debug_assert!(rhs.sign != 0, "division by zero SignedLog");
        if self.sign == 0 {
            SignedLog::ZERO
        } else {
            SignedLog { sign: self.sign * rhs.sign, logmag: self.logmag - rhs.logmag }
        }
    }
}

// Lanczos approximation of ln Gamma (g = 10.900511, 11 terms; Pugh 2004).
// Accurate to ~16 significant digits for x > 0.
const LANCZOS_R: f64 = 10.900511;
const LANCZOS_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];
const LN_2_SQRT_E_OVER_PI: f64 = 0.6207822376352452223455184457816472122518527279025978;

/// Natural log of Gamma(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0, "ln_gamma requires x > 0, got {x}");
    if x < 0.5 {
        // recurrence ln G(x) = ln G(x+1) - ln x avoids the reflection branch
        return ln_gamma(x + 1.0) - x.ln();
    }
    let mut s = LANCZOS_DK[0];
    for (i, dk) in LANCZOS_DK.iter().enumerate().skip(1) {
        s += dk / (x + i as f64 - 1.0);
    }
    s.ln() + LN_2_SQRT_E_OVER_PI + (x - 0.5) * ((x - 0.5 + LANCZOS_R) / std::f64::consts::E).ln()
}

/// ln Gamma with sign, valid for any non-pole real argument.
/// Returns sign 0 at the poles x = 0, -1, -2, ...
pub fn signed_ln_gamma(x: f64) -> SignedLog {
    if x > 0.0 {
        return SignedLog::new(1, ln_gamma(x));
    }
    if (x - x.round()).abs() < f64::EPSILON && x.round() <= 0.0 {
        return SignedLog::ZERO;
    }
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    let s = (std::f64::consts::PI * x).sin();
    let logmag = std::f64::consts::PI.ln() - s.abs().ln() - ln_gamma(1.0 - x);
    let sign = if s > 0.0 { 1 } else { -1 };
    SignedLog::new(sign, logmag)
}

/// ln(n!)
pub fn ln_factorial(n: usize) -> f64 {
    // table covers the sizes that dominate inner loops
    const TABLE: [f64; 21] = [
        0.0,
        0.0,
        0.6931471805599453,
        1.791759469228055,
        3.1780538303479458,
        4.787491742782046,
        6.579251212010101,
        8.525161361065415,
        10.60460290274525,
        12.801827480081469,
        15.104412573075516,
        17.502307845873887,
        19.987214495661885,
        22.552163853123425,
        25.19122118273868,
        27.89927138384089,
        30.671860106080672,
        33.50507345013689,
        36.39544520803305,
        39.339884187199495,
        42.335616460753485,
    ];
    if n < TABLE.len() {
        TABLE[n]
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// Rising factorial (a)_n = a (a+1) ... (a+n-1), with (a)_0 = 1 exactly.
pub fn pochhammer(a: Complex64, n: usize) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for i in 0..n {
        acc *= a + i as f64;
    }
    acc
}

/// Rising factorial of a real argument in plain arithmetic.
pub fn pochhammer_f64(a: f64, n: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..n {
        acc *= a + i as f64;
    }
    acc
}

/// (a)_n in sign/log form, exact about zero factors, safe for any real a.
pub fn log_pochhammer(a: f64, n: usize) -> SignedLog {
    if n == 0 {
        return SignedLog::ONE;
    }
    let ar = a.round();
    if (a - ar).abs() < f64::EPSILON && ar <= 0.0 {
        // integer base: the product hits zero iff it reaches the factor 0
        let m = -ar; // = |a|
        if m < n as f64 {
            return SignedLog::ZERO;
        }
        // all factors negative: |(a)_n| = m (m-1) ... (m-n+1) = Gamma(m+1)/Gamma(m-n+1)
        let logmag = ln_gamma(m + 1.0) - ln_gamma(m - n as f64 + 1.0);
        let sign = if n % 2 == 0 { 1 } else { -1 };
        return SignedLog::new(sign, logmag);
    }
    if a > 0.0 {
        SignedLog::new(1, ln_gamma(a + n as f64) - ln_gamma(a))
    } else {
        signed_ln_gamma(a + n as f64) / signed_ln_gamma(a)
    }
}

/// ln C(n, k) with sign 0 outside 0 <= k <= n.
pub fn log_binomial(n: usize, k: i64) -> SignedLog {
    if k < 0 || k as usize > n {
        return SignedLog::ZERO;
    }
    let k = k as usize;
    SignedLog::new(1, ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k))
}

/// Binomial C(a, k) with real upper argument: (a-k+1)_k / k!.
pub fn log_binomial_real(a: f64, k: usize) -> SignedLog {
    log_pochhammer(a - k as f64 + 1.0, k) / SignedLog::new(1, ln_factorial(k))
}

/// A terminating generalized hypergeometric series
/// pFq(a_1..a_p; b_1..b_q; z) = sum_k [prod (a_i)_k / prod (b_j)_k] z^k / k!.
#[derive(Debug, Clone)]
pub struct HypSeriesSpec {
    pub numerator_params: Vec<Complex64>,
    pub denominator_params: Vec<Complex64>,
    pub argument: Complex64,
}

impl HypSeriesSpec {
    pub fn new(
        numerator_params: Vec<Complex64>,
        denominator_params: Vec<Complex64>,
        argument: Complex64,
    ) -> Self {
        HypSeriesSpec { numerator_params, denominator_params, argument }
    }
}

/// If `a` is a non-positive integer within `INT_TOL`, return -a.
fn as_nonpositive_int(a: Complex64) -> Option<usize> {
    if a.im.abs() > INT_TOL {
        return None;
    }
    let r = a.re.round();
    if (a.re - r).abs() <= INT_TOL && r <= 0.0 {
        Some((-r) as usize)
    } else {
        None
    }
}

/// Termination index: min over non-positive-integer numerator parameters.
pub fn termination_index(spec: &HypSeriesSpec) -> Result<usize, HypError> {
    spec.numerator_params
        .iter()
        .filter_map(|&a| as_nonpositive_int(a))
        .min()
        .ok_or(HypError::NonTerminating)
}

/// Evaluate a terminating pFq by the term-ratio recurrence
/// term_{k+1} = term_k * prod(a_i + k) / prod(b_j + k) * z / (k+1).
///
/// A denominator parameter that is a non-positive integer is legal only when
/// a numerator parameter truncates the series at or before the pole index.
pub fn eval_phq(spec: &HypSeriesSpec) -> Result<Complex64, HypError> {
    eval_phq_tracked(spec).map(|(v, _)| v)
}

/// As `eval_phq`, additionally returning the largest term magnitude seen.
/// The ratio of that magnitude to the result bounds the cancellation error
/// and lets callers decide whether the value is trustworthy.
pub fn eval_phq_tracked(spec: &HypSeriesSpec) -> Result<(Complex64, f64), HypError> {
    let t = termination_index(spec)?;
    for (j, &b) in spec.denominator_params.iter().enumerate() {
        if let Some(m) = as_nonpositive_int(b) {
            // (b)_k first vanishes in the ratio at step k = m; illegal if m < t
            if m < t {
                return Err(HypError::DenominatorPole { param: j, index: m });
            }
        }
    }
    let mut sum = Complex64::new(1.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut max_term = 1.0f64;
    for k in 0..t {
        let kf = k as f64;
        let mut ratio = spec.argument / (kf + 1.0);
        for &a in &spec.numerator_params {
            ratio *= a + kf;
        }
        for &b in &spec.denominator_params {
            ratio /= b + kf;
        }
        term *= ratio;
        max_term = max_term.max(term.norm());
        // compensated accumulation
        let y = term - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    Ok((sum, max_term))
}

/// Euler's transformation of 2F1: returns (c-a, c-b, c, z) and the prefactor
/// (1-z)^(c-a-b) such that 2F1(a,b;c;z) = pref * 2F1(c-a,c-b;c;z).
pub fn euler_2f1_transform(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z: Complex64,
) -> (Complex64, Complex64, Complex64, Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    let prefactor = (one - z).powc(c - a - b);
    (c - a, c - b, c, z, prefactor)
}
