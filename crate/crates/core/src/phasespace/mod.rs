//! Exact Gaussian-state simulation of linear optical circuits by classical
//! sampling of the Wigner function.
//!
//! Every state prepared here is Gaussian and every circuit element acts
//! linearly on quadratures, so the Wigner function stays Gaussian and
//! evolves classically: a register of modes is represented by per-shot
//! samples of all quadratures, and an element pushes each sample through
//! its symplectic map. Means and (symmetrized) covariances of the sampled
//! ensemble then agree exactly with the quantum state, which makes homodyne
//! statistics exact.
//!
//! Quadratures use ħ = 1 throughout: a vacuum mode has variance 1/2 per
//! quadrature and the complex amplitude of a mode is a = (x + ip)/√2.

mod element;
mod moments;

pub use element::{parse_circuit, Circuit, Distributor, GaussianElement};
pub use moments::GaussianState;

use crate::error::{Error, Result};
use crate::numeric;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use std::io::Write;

/// Vacuum variance per quadrature (ħ = 1).
pub const VACUUM_VARIANCE: f64 = 0.5;

/// Which quadrature of a mode to address.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    X,
    P,
}

/// Initial Gaussian preparation of a single mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preparation {
    Vacuum,
    /// Displaced vacuum with mean quadratures (x, p); ψ = (x + ip)/√2.
    Coherent { mean_x: f64, mean_p: f64 },
    /// General Gaussian with independent quadratures. With `pure` set the
    /// variance pair must satisfy var_x · var_p = 1/4 (minimum uncertainty).
    Squeezed {
        mean_x: f64,
        mean_p: f64,
        var_x: f64,
        var_p: f64,
        pure: bool,
    },
}

impl Preparation {
    /// Coherent state of complex amplitude ψ: mean x = √2 Re ψ, mean p = √2 Im ψ.
    pub fn coherent_amplitude(re: f64, im: f64) -> Self {
        Preparation::Coherent {
            mean_x: numeric::SQRT_2 * re,
            mean_p: numeric::SQRT_2 * im,
        }
    }

    /// Pure squeezed state with x-variance `var_x`; var_p = 1/(4 var_x).
    pub fn pure_squeezed(mean_x: f64, mean_p: f64, var_x: f64) -> Self {
        Preparation::Squeezed {
            mean_x,
            mean_p,
            var_x,
            var_p: 0.25 / var_x,
            pure: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Preparation::Squeezed {
            var_x, var_p, pure, ..
        } = self
        {
            if !(*var_x > 0.0) || !(*var_p > 0.0) {
                return Err(Error::invalid(format!(
                    "squeezing variances must be positive, got ({var_x}, {var_p})"
                )));
            }
            if *pure && (4.0 * var_x * var_p - 1.0).abs() > 1e-9 {
                return Err(Error::invalid(format!(
                    "pure squeezed preparation requires var_x*var_p = 1/4, got {}",
                    var_x * var_p
                )));
            }
        }
        Ok(())
    }

    /// (mean_x, mean_p, var_x, var_p).
    pub fn moments(&self) -> (f64, f64, f64, f64) {
        match *self {
            Preparation::Vacuum => (0.0, 0.0, VACUUM_VARIANCE, VACUUM_VARIANCE),
            Preparation::Coherent { mean_x, mean_p } => {
                (mean_x, mean_p, VACUUM_VARIANCE, VACUUM_VARIANCE)
            }
            Preparation::Squeezed {
                mean_x,
                mean_p,
                var_x,
                var_p,
                ..
            } => (mean_x, mean_p, var_x, var_p),
        }
    }
}

/// Monte Carlo register: `shots` × `modes` table of quadrature samples.
///
/// Deterministic given (seed, shots, modes, circuit): each shot draws from
/// its own counter-indexed RNG stream, so results do not depend on
/// evaluation order and shots may be evaluated in parallel.
#[derive(Debug, Clone)]
pub struct ShotEnsemble {
    shots: usize,
    modes: usize,
    /// Row-major: index = shot * modes + mode.
    xs: Vec<f64>,
    ps: Vec<f64>,
    seed: u64,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn chacha_key(seed: u64) -> [u8; 32] {
    let mut state = seed;
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    key
}

/// Per-shot RNG stream `shot` of the generator family keyed by `seed`.
pub(crate) fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(chacha_key(seed));
    rng.set_stream(shot);
    rng
}

/// Draw an ensemble with the requested per-mode preparations; modes not
/// listed are vacuum.
pub fn sample_input(
    modes: usize,
    shots: usize,
    seed: u64,
    preparations: &[(usize, Preparation)],
) -> Result<ShotEnsemble> {
    if shots == 0 {
        return Err(Error::invalid("shots must be >= 1"));
    }
    if modes == 0 {
        return Err(Error::invalid("mode count must be >= 1"));
    }
    let mut per_mode = vec![Preparation::Vacuum; modes];
    for (mode, prep) in preparations {
        if *mode >= modes {
            return Err(Error::ModeIndex {
                index: *mode,
                modes,
            });
        }
        prep.validate()?;
        per_mode[*mode] = *prep;
    }
    let mode_moments: Vec<(f64, f64, f64, f64)> =
        per_mode.iter().map(Preparation::moments).collect();

    let mut xs = vec![0.0; shots * modes];
    let mut ps = vec![0.0; shots * modes];
    xs.par_chunks_mut(modes)
        .zip(ps.par_chunks_mut(modes))
        .enumerate()
        .for_each(|(shot, (xrow, prow))| {
            let mut rng = shot_rng(seed, shot as u64);
            for (mode, &(mx, mp, vx, vp)) in mode_moments.iter().enumerate() {
                let zx: f64 = StandardNormal.sample(&mut rng);
                let zp: f64 = StandardNormal.sample(&mut rng);
                xrow[mode] = mx + vx.sqrt() * zx;
                prow[mode] = mp + vp.sqrt() * zp;
            }
        });
    Ok(ShotEnsemble {
        shots,
        modes,
        xs,
        ps,
        seed,
    })
}

impl ShotEnsemble {
    pub fn shots(&self) -> usize {
        self.shots
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn x(&self, shot: usize, mode: usize) -> f64 {
        self.xs[shot * self.modes + mode]
    }

    pub fn p(&self, shot: usize, mode: usize) -> f64 {
        self.ps[shot * self.modes + mode]
    }

    /// Apply one element in place to every shot.
    pub fn apply(&mut self, element: &GaussianElement) -> Result<()> {
        element.validate(self.modes)?;
        let modes = self.modes;
        self.xs
            .par_chunks_mut(modes)
            .zip(self.ps.par_chunks_mut(modes))
            .for_each(|(xrow, prow)| element.apply_to_shot(xrow, prow));
        Ok(())
    }

    /// Samples of one quadrature column.
    pub fn measure_quadrature(&self, mode: usize, which: Quadrature) -> Result<Vec<f64>> {
        if mode >= self.modes {
            return Err(Error::ModeIndex {
                index: mode,
                modes: self.modes,
            });
        }
        let src = match which {
            Quadrature::X => &self.xs,
            Quadrature::P => &self.ps,
        };
        Ok((0..self.shots)
            .map(|s| src[s * self.modes + mode])
            .collect())
    }

    /// Per-shot total mean photon number Σ_j (|a_j|² − 1/2) summed over modes.
    pub fn shot_photon_number(&self, shot: usize) -> f64 {
        let base = shot * self.modes;
        (0..self.modes)
            .map(|m| 0.5 * (self.xs[base + m].powi(2) + self.ps[base + m].powi(2)) - 0.5)
            .sum()
    }

    /// CSV rows `shot,mode,x,p` with a header line.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "shot,mode,x,p")?;
        for shot in 0..self.shots {
            for mode in 0..self.modes {
                writeln!(
                    w,
                    "{},{},{:.17e},{:.17e}",
                    shot,
                    mode,
                    self.x(shot, mode),
                    self.p(shot, mode)
                )?;
            }
        }
        Ok(())
    }
}

/// Functional wrapper: returns a transformed copy.
pub fn apply_element(ensemble: &ShotEnsemble, element: &GaussianElement) -> Result<ShotEnsemble> {
    let mut out = ensemble.clone();
    out.apply(element)?;
    Ok(out)
}

/// Run all elements of a circuit in order over a copy of the ensemble.
pub fn run_circuit(ensemble: &ShotEnsemble, circuit: &Circuit) -> Result<ShotEnsemble> {
    if ensemble.modes != circuit.mode_count() {
        return Err(Error::ShapeMismatch(format!(
            "ensemble has {} modes, circuit expects {}",
            ensemble.modes,
            circuit.mode_count()
        )));
    }
    let mut out = ensemble.clone();
    for element in circuit.elements() {
        out.apply(element)?;
    }
    Ok(out)
}

/// Sample means, covariances and standard errors of an ensemble.
///
/// Quadratures are indexed interleaved: q = 2·mode for x, 2·mode + 1 for p.
#[derive(Debug, Clone)]
pub struct MomentEstimate {
    modes: usize,
    shots: usize,
    /// Length 2·modes, interleaved (x0, p0, x1, p1, ...).
    pub means: Vec<f64>,
    /// Row-major symmetric (2·modes)² matrix, same interleaved indexing.
    pub covariances: Vec<f64>,
    /// Standard errors of the means.
    pub mean_errors: Vec<f64>,
    /// Standard errors of the covariance entries (Gaussian formula).
    pub covariance_errors: Vec<f64>,
}

impl MomentEstimate {
    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn shots(&self) -> usize {
        self.shots
    }

    pub fn dim(&self) -> usize {
        2 * self.modes
    }

    pub fn mean_x(&self, mode: usize) -> f64 {
        self.means[2 * mode]
    }

    pub fn mean_p(&self, mode: usize) -> f64 {
        self.means[2 * mode + 1]
    }

    pub fn cov(&self, qa: usize, qb: usize) -> f64 {
        self.covariances[qa * self.dim() + qb]
    }

    pub fn cov_error(&self, qa: usize, qb: usize) -> f64 {
        self.covariance_errors[qa * self.dim() + qb]
    }

    pub fn var_x(&self, mode: usize) -> f64 {
        self.cov(2 * mode, 2 * mode)
    }

    pub fn var_p(&self, mode: usize) -> f64 {
        self.cov(2 * mode + 1, 2 * mode + 1)
    }
}

/// Unbiased sample means and covariances over all quadratures.
pub fn estimate_moments(ensemble: &ShotEnsemble) -> Result<MomentEstimate> {
    let n = ensemble.shots;
    if n < 2 {
        return Err(Error::invalid("moment estimation requires shots >= 2"));
    }
    let modes = ensemble.modes;
    let dim = 2 * modes;
    let mut means = vec![0.0; dim];
    for shot in 0..n {
        for m in 0..modes {
            means[2 * m] += ensemble.x(shot, m);
            means[2 * m + 1] += ensemble.p(shot, m);
        }
    }
    for v in &mut means {
        *v /= n as f64;
    }
    let mut cov = vec![0.0; dim * dim];
    let mut row = vec![0.0; dim];
    for shot in 0..n {
        for m in 0..modes {
            row[2 * m] = ensemble.x(shot, m) - means[2 * m];
            row[2 * m + 1] = ensemble.p(shot, m) - means[2 * m + 1];
        }
        for a in 0..dim {
            for b in a..dim {
                cov[a * dim + b] += row[a] * row[b];
            }
        }
    }
    for a in 0..dim {
        for b in a..dim {
            let v = cov[a * dim + b] / (n as f64 - 1.0);
            cov[a * dim + b] = v;
            cov[b * dim + a] = v;
        }
    }
    let mean_errors = (0..dim)
        .map(|a| (cov[a * dim + a] / n as f64).sqrt())
        .collect();
    // SE of a covariance entry for Gaussian data: sqrt((Γaa Γbb + Γab²)/n).
    let covariance_errors = (0..dim * dim)
        .map(|idx| {
            let (a, b) = (idx / dim, idx % dim);
            ((cov[a * dim + a] * cov[b * dim + b] + cov[a * dim + b].powi(2)) / n as f64).sqrt()
        })
        .collect();
    Ok(MomentEstimate {
        modes,
        shots: n,
        means,
        covariances: cov,
        mean_errors,
        covariance_errors,
    })
}
