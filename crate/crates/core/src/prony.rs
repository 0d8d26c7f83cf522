//! Prony analysis of damped complex exponentials.
//!
//! A signal `s_k = sum_j c_j z_j^k`, `z_j = exp(lambda_j T)`, obeys a linear
//! prediction recurrence of order `N >= p`. Stacking `M` instances of the
//! recurrence gives the Hankel system `A x = b` with `A[i][j] = s_{i+j}` and
//! `b[i] = -s_{N+i}` (0-based). The predictor coefficients `x = (a_0 .. a_{N-1})`
//! define the monic characteristic polynomial
//! `a_0 + a_1 t + ... + a_{N-1} t^{N-1} + t^N`, whose roots are the `z_j`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::fitting::{FitError, FitProblem};
use crate::numerics::text::{content_lines, fmt_f64, parse_f64, parse_usize, FormatError};
use crate::numerics::{poly_roots, CMatrix, CVector, LinalgError};

#[derive(Debug, thiserror::Error)]
pub enum PronyError {
    #[error("need at least {needed} samples, have {available}")]
    InsufficientSamples { needed: usize, available: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, PronyError>;

/// One damped exponential `c exp(lambda t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub lambda: Complex64,
    pub amplitude: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PronyParams {
    pub modes: Vec<Mode>,
    /// Sample interval.
    pub t: f64,
}

/// Damping and frequency of each conjugate pair of the 12-mode benchmark.
const VANBLARICUM12: [(f64, f64); 6] = [
    (-0.082, 0.926),
    (-0.147, 2.874),
    (-0.188, 4.835),
    (-0.220, 6.800),
    (-0.247, 8.767),
    (-0.270, 10.733),
];

impl PronyParams {
    pub fn new(modes: Vec<Mode>, t: f64) -> Result<Self> {
        if modes.is_empty() {
            return Err(PronyError::InvalidParameter("at least one mode required".into()));
        }
        if !(t.is_finite() && t > 0.0) {
            return Err(PronyError::InvalidParameter(format!(
                "sample interval T = {t} must be positive"
            )));
        }
        Ok(Self { modes, t })
    }

    /// Twelve unit-amplitude modes in six conjugate pairs, `T = 0.2`.
    pub fn vanblaricum12() -> Self {
        let modes = VANBLARICUM12
            .iter()
            .flat_map(|&(re, im)| {
                [im, -im].map(|w| Mode {
                    lambda: Complex64::new(re, w),
                    amplitude: Complex64::new(1.0, 0.0),
                })
            })
            .collect();
        Self { modes, t: 0.2 }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "vanblaricum12" => Some(Self::vanblaricum12()),
            _ => None,
        }
    }

    /// Mode count `p`.
    pub fn p(&self) -> usize {
        self.modes.len()
    }

    /// `z_j = exp(lambda_j T)`.
    pub fn roots(&self) -> Vec<Complex64> {
        self.modes.iter().map(|m| (m.lambda * self.t).exp()).collect()
    }

    /// Parses `T <value>` followed by one `re(lambda) im(lambda) re(c) im(c)` line per mode.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (lno, first) = lines.next().ok_or(FormatError::Parse {
            line: 1,
            msg: "missing `T <value>` line".into(),
        })?;
        let t = match first.split_whitespace().collect::<Vec<_>>()[..] {
            ["T", v] => parse_f64(v, lno)?,
            _ => {
                return Err(FormatError::Parse {
                    line: lno,
                    msg: "first line must be `T <value>`".into(),
                }
                .into())
            }
        };
        let mut modes = Vec::new();
        for (lno, line) in lines {
            let tok: Vec<&str> = line.split_whitespace().collect();
            if tok.len() != 4 {
                return Err(FormatError::Parse {
                    line: lno,
                    msg: format!("expected 4 numbers, found {}", tok.len()),
                }
                .into());
            }
            let v: Vec<f64> = tok
                .iter()
                .map(|s| parse_f64(s, lno))
                .collect::<std::result::Result<_, _>>()?;
            modes.push(Mode {
                lambda: Complex64::new(v[0], v[1]),
                amplitude: Complex64::new(v[2], v[3]),
            });
        }
        Self::new(modes, t)
    }

    pub fn write(&self) -> String {
        let mut out = format!("T {}\n", fmt_f64(self.t));
        for m in &self.modes {
            out.push_str(&format!(
                "{} {} {} {}\n",
                fmt_f64(m.lambda.re),
                fmt_f64(m.lambda.im),
                fmt_f64(m.amplitude.re),
                fmt_f64(m.amplitude.im)
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignalSeries {
    pub samples: Vec<Complex64>,
}

impl SignalSeries {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn max_imag(&self) -> f64 {
        self.samples.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// `K` on the first line, then `re im` per sample. `#` comments allowed.
    pub fn write(&self, comments: &[String]) -> String {
        let mut out = String::new();
        for c in comments {
            out.push_str(&format!("# {c}\n"));
        }
        out.push_str(&format!("{}\n", self.len()));
        for z in &self.samples {
            out.push_str(&format!("{} {}\n", fmt_f64(z.re), fmt_f64(z.im)));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (lno, head) = lines.next().ok_or(FormatError::Parse {
            line: 1,
            msg: "missing sample count".into(),
        })?;
        let k = parse_usize(head, lno)?;
        let mut samples = Vec::with_capacity(k);
        for (lno, line) in lines {
            let tok: Vec<&str> = line.split_whitespace().collect();
            if tok.len() != 2 {
                return Err(FormatError::Parse {
                    line: lno,
                    msg: "expected `re im`".into(),
                }
                .into());
            }
            samples.push(Complex64::new(parse_f64(tok[0], lno)?, parse_f64(tok[1], lno)?));
        }
        if samples.len() != k {
            return Err(FormatError::Parse {
                line: lno,
                msg: format!("header announces {k} samples, found {}", samples.len()),
            }
            .into());
        }
        Ok(Self { samples })
    }
}

/// `s_k = sum_j c_j exp(lambda_j T k)` for `k = 0 .. count - 1`.
pub fn gen_signal(params: &PronyParams, count: usize) -> SignalSeries {
    let samples = (0..count)
        .map(|k| {
            let tk = params.t * k as f64;
            params.modes.iter().map(|m| m.amplitude * (m.lambda * tk).exp()).sum()
        })
        .collect();
    SignalSeries { samples }
}

/// The `M x N` Hankel prediction system `A[i][j] = s_{i+j}`, `b[i] = -s_{N+i}`.
pub fn build_lp_system(s: &SignalSeries, n: usize, m: usize) -> Result<FitProblem> {
    if n == 0 || m <= n {
        return Err(PronyError::InvalidParameter(format!(
            "need M > N >= 1, got N = {n}, M = {m}"
        )));
    }
    if s.len() < n + m {
        return Err(PronyError::InsufficientSamples {
            needed: n + m,
            available: s.len(),
        });
    }
    let a = CMatrix::from_fn(m, n, |i, j| s.samples[i + j]);
    let b = CVector::new((0..m).map(|i| -s.samples[n + i]).collect())?;
    Ok(FitProblem::new(a, b)?)
}

/// Adds independent zero-mean Gaussian noise of standard deviation `sigma`
/// to every entry of `A` and `b`. Real problems get real noise; complex
/// problems get circular noise with `sigma^2 / 2` in each component.
pub fn add_noise(p: &FitProblem, sigma: f64, seed: u64) -> Result<FitProblem> {
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(PronyError::InvalidParameter(format!(
            "noise sigma = {sigma} must be nonnegative"
        )));
    }
    if sigma == 0.0 {
        return Ok(p.clone());
    }
    let complex = !p.is_real();
    let component = if complex {
        sigma * std::f64::consts::FRAC_1_SQRT_2
    } else {
        sigma
    };
    let normal = Normal::new(0.0, component).expect("finite positive deviation");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |z: Complex64| {
        let re = normal.sample(&mut rng);
        let im = if complex { normal.sample(&mut rng) } else { 0.0 };
        z + Complex64::new(re, im)
    };
    let a = CMatrix::from_fn(p.rows(), p.unknowns(), |i, j| draw(p.a()[(i, j)]));
    let b = CVector::new(p.b().iter().map(|&z| draw(z)).collect())?;
    Ok(FitProblem::new(a, b)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveredMode {
    pub z: Complex64,
    /// `ln(z) / T` on the principal branch.
    pub lambda: Complex64,
}

/// Roots of the characteristic polynomial of predictor `x`, with their
/// continuous-time exponents.
pub fn recover_modes(x: &CVector, t: f64) -> Result<Vec<RecoveredMode>> {
    if !(t.is_finite() && t > 0.0) {
        return Err(PronyError::InvalidParameter(format!(
            "sample interval T = {t} must be positive"
        )));
    }
    let mut coeffs = x.as_slice().to_vec();
    coeffs.push(Complex64::new(1.0, 0.0));
    let roots = poly_roots(&coeffs)?;
    Ok(roots
        .into_iter()
        .map(|z| RecoveredMode {
            z,
            lambda: principal_log(z) / t,
        })
        .collect())
}

/// `ln z` with imaginary part in `(-pi, pi]`; a negative real `z` carrying
/// a signed zero imaginary part still maps to `+i pi`.
fn principal_log(z: Complex64) -> Complex64 {
    let mut arg = z.arg();
    if arg <= -std::f64::consts::PI {
        arg = std::f64::consts::PI;
    }
    Complex64::new(z.norm().ln(), arg)
}
