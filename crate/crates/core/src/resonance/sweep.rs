use rayon::prelude::*;

use super::{evolve_with, QuantumState, ResonanceError, Result};
use crate::hamiltonian::{ResonanceSystem, MAX_COUPLING};
use crate::numerics::text::fmt_f64;
use crate::numerics::{CVector, SpectralPropagator};

/// Samples at or above this decay probability count as resonant.
pub const PEAK_THRESHOLD: f64 = 0.5;

/// Frequency grid `omega_k = omega_min + k * delta`, `k = 0 .. points - 1`,
/// with `delta = (omega_max - omega_min) / points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPlan {
    pub omega_min: f64,
    pub omega_max: f64,
    pub points: usize,
    pub epsilon0: f64,
    pub coupling: f64,
    pub time: f64,
}

impl SweepPlan {
    pub fn new(omega_min: f64, omega_max: f64, points: usize, epsilon0: f64, coupling: f64, time: f64) -> Result<Self> {
        let plan = Self {
            omega_min,
            omega_max,
            points,
            epsilon0,
            coupling,
            time,
        };
        plan.validate()?;
        Ok(plan)
    }

    /// Grid covering eigenvalues `[lambda_lo, lambda_hi]` of `D`, shifted to
    /// probe frequencies by `-epsilon0`.
    pub fn for_eigenvalues(
        lambda_lo: f64,
        lambda_hi: f64,
        points: usize,
        epsilon0: f64,
        coupling: f64,
        time: f64,
    ) -> Result<Self> {
        Self::new(
            lambda_lo - epsilon0,
            lambda_hi - epsilon0,
            points,
            epsilon0,
            coupling,
            time,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(ResonanceError::InvalidPlan(msg));
        for (name, v) in [
            ("omega_min", self.omega_min),
            ("omega_max", self.omega_max),
            ("epsilon0", self.epsilon0),
            ("coupling", self.coupling),
            ("time", self.time),
        ] {
            if !v.is_finite() {
                return bad(format!("{name} is not finite"));
            }
        }
        if self.omega_max < self.omega_min {
            return bad(format!("omega_max {} < omega_min {}", self.omega_max, self.omega_min));
        }
        if self.points == 0 {
            return bad("points must be at least 1".into());
        }
        if !(0.0..=MAX_COUPLING).contains(&self.coupling) {
            return bad(format!("coupling {} outside [0, {MAX_COUPLING}]", self.coupling));
        }
        if self.time < 0.0 {
            return bad(format!("negative evolution time {}", self.time));
        }
        Ok(())
    }

    pub fn delta(&self) -> f64 {
        (self.omega_max - self.omega_min) / self.points as f64
    }

    pub fn omegas(&self) -> Vec<f64> {
        let d = self.delta();
        (0..self.points).map(|k| self.omega_min + k as f64 * d).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSample {
    pub omega: f64,
    pub p_decay: f64,
}

/// A local maximum of the sampled spectrum above [`PEAK_THRESHOLD`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub index: usize,
    /// Quadratically interpolated position.
    pub omega: f64,
    pub lambda: f64,
    pub p_decay: f64,
}

/// A contiguous run of samples at or above [`PEAK_THRESHOLD`] that holds
/// at least one peak. Detuned Rabi oscillation splits one resonance into
/// several symmetric side maxima, so the run's probability-weighted
/// centroid locates the line center more reliably than any single peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    pub first: usize,
    pub last: usize,
    pub omega: f64,
    pub lambda: f64,
    pub max_p: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub samples: Vec<SweepSample>,
    pub epsilon0: f64,
    pub delta: f64,
    pub peaks: Vec<Peak>,
    pub resonances: Vec<Resonance>,
}

impl SweepResult {
    pub fn from_samples(samples: Vec<SweepSample>, epsilon0: f64, delta: f64) -> Self {
        let peaks = find_peaks(&samples, epsilon0, delta);
        let resonances = find_resonances(&samples, &peaks, epsilon0);
        Self {
            samples,
            epsilon0,
            delta,
            peaks,
            resonances,
        }
    }

    /// The resonance containing the largest sample.
    pub fn dominant(&self) -> Option<&Resonance> {
        let (imax, _) = self
            .samples
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.p_decay.total_cmp(&b.1.p_decay))?;
        self.resonances.iter().find(|r| (r.first..=r.last).contains(&imax))
    }

    pub fn max_p(&self) -> f64 {
        self.samples.iter().map(|s| s.p_decay).fold(0.0, f64::max)
    }
}

#[allow(clippy::needless_range_loop)]
fn find_peaks(samples: &[SweepSample], epsilon0: f64, delta: f64) -> Vec<Peak> {
    let n = samples.len();
    let p = |i: usize| samples[i].p_decay;
    let mut peaks = Vec::new();
    for i in 0..n {
        let left_ok = i == 0 || p(i) > p(i - 1);
        // a flat top of two equal samples is reported once, at its left end
        let right_ok = i + 1 == n || p(i) >= p(i + 1);
        if !(left_ok && right_ok && p(i) >= PEAK_THRESHOLD) {
            continue;
        }
        let mut omega = samples[i].omega;
        if i > 0 && i + 1 < n {
            let (y0, y1, y2) = (p(i - 1), p(i), p(i + 1));
            let curv = y0 - 2.0 * y1 + y2;
            if curv < 0.0 {
                omega += (0.5 * (y0 - y2) / curv).clamp(-0.5, 0.5) * delta;
            }
        }
        peaks.push(Peak {
            index: i,
            omega,
            lambda: omega + epsilon0,
            p_decay: p(i),
        });
    }
    peaks
}

fn find_resonances(samples: &[SweepSample], peaks: &[Peak], epsilon0: f64) -> Vec<Resonance> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < samples.len() {
        if samples[i].p_decay < PEAK_THRESHOLD {
            i += 1;
            continue;
        }
        let first = i;
        while i + 1 < samples.len() && samples[i + 1].p_decay >= PEAK_THRESHOLD {
            i += 1;
        }
        let last = i;
        i += 1;
        if !peaks.iter().any(|pk| (first..=last).contains(&pk.index)) {
            continue;
        }
        let run = &samples[first..=last];
        let weight: f64 = run.iter().map(|s| s.p_decay).sum();
        let omega = run.iter().map(|s| s.omega * s.p_decay).sum::<f64>() / weight;
        out.push(Resonance {
            first,
            last,
            omega,
            lambda: omega + epsilon0,
            max_p: run.iter().map(|s| s.p_decay).fold(0.0, f64::max),
        });
    }
    out
}

fn run_sweep<F>(plan: &SweepPlan, point: F) -> Result<SweepResult>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    plan.validate()?;
    let samples = plan
        .omegas()
        .into_par_iter()
        .map(|omega| point(omega).map(|p_decay| SweepSample { omega, p_decay }))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult::from_samples(samples, plan.epsilon0, plan.delta()))
}

/// Decay probability of `|1>|psi>` after `plan.time` under the algorithm 1
/// Hamiltonian, at every grid frequency.
pub fn sweep_algorithm1(system: &ResonanceSystem, plan: &SweepPlan, psi: &CVector) -> Result<SweepResult> {
    let start = QuantumState::excited(psi)?;
    run_sweep(plan, |omega| {
        let model = system.h1(omega, plan.epsilon0, plan.coupling, psi)?;
        let prop = SpectralPropagator::new(&model.h)?;
        Ok(evolve_with(&prop, &start, plan.time)?.probe_decay_probability())
    })
}

/// Same as [`sweep_algorithm1`] with the algorithm 2 Hamiltonian and
/// reference `phi0`.
pub fn sweep_algorithm2(system: &ResonanceSystem, plan: &SweepPlan, phi0: &CVector) -> Result<SweepResult> {
    let start = QuantumState::excited(phi0)?;
    run_sweep(plan, |omega| {
        let model = system.h2(omega, plan.epsilon0, plan.coupling)?;
        let prop = SpectralPropagator::new(&model.h)?;
        Ok(evolve_with(&prop, &start, plan.time)?.probe_decay_probability())
    })
}

/// `omega,p_decay` table with `#` comment lines before the header and a
/// peak report after the rows.
pub fn write_csv(result: &SweepResult, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str(&format!("# {c}\n"));
    }
    out.push_str("omega,p_decay\n");
    for s in &result.samples {
        out.push_str(&format!("{},{}\n", fmt_f64(s.omega), fmt_f64(s.p_decay)));
    }
    for pk in &result.peaks {
        out.push_str(&format!(
            "# peak omega={} lambda={} p_decay={}\n",
            fmt_f64(pk.omega),
            fmt_f64(pk.lambda),
            fmt_f64(pk.p_decay)
        ));
    }
    for r in &result.resonances {
        out.push_str(&format!(
            "# resonance omega={} lambda={} max_p={} first={} last={}\n",
            fmt_f64(r.omega),
            fmt_f64(r.lambda),
            fmt_f64(r.max_p),
            r.first,
            r.last
        ));
    }
    if let Some(d) = result.dominant() {
        out.push_str(&format!(
            "# dominant omega={} lambda={}\n",
            fmt_f64(d.omega),
            fmt_f64(d.lambda)
        ));
    }
    out
}

/// Reads the sample rows back from [`write_csv`] output.
pub fn parse_csv(text: &str) -> std::result::Result<Vec<SweepSample>, String> {
    let mut rows = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    match rows.next() {
        Some("omega,p_decay") => {}
        other => return Err(format!("expected header omega,p_decay, found {other:?}")),
    }
    rows.map(|line| {
        let (a, b) = line.split_once(',').ok_or_else(|| format!("malformed row {line:?}"))?;
        let omega = a.trim().parse().map_err(|_| format!("bad omega in {line:?}"))?;
        let p_decay = b.trim().parse().map_err(|_| format!("bad p_decay in {line:?}"))?;
        Ok(SweepSample { omega, p_decay })
    })
    .collect()
}
