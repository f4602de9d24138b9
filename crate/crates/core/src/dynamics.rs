//! Transfer amplitudes by spectral sum and closed form; PST detection.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    SpectralSum,
    ClosedForm,
    Oracle,
}

#[derive(Debug, Clone)]
pub struct PstEvent {
    pub t: f64,
    pub fidelity: f64,
}

#[derive(Debug, Clone)]
pub struct AmplitudeGrid {
    pub sites: Vec<(usize, usize)>,
    pub times: Vec<f64>,
    pub values: Vec<Complex64>,
    pub method: Method,
}
