//! Exact first/second-moment propagation through Gaussian circuits.
//!
//! This is the matrix-based counterpart of the Monte Carlo engine: the
//! state is (mean vector, covariance matrix) over all quadratures, and an
//! element acts as μ → Sμ, Γ → SΓSᵀ with its symplectic matrix S. It is
//! kept independent of the sampling path so the two can cross-check each
//! other.

use crate::error::Result;
use crate::phasespace::{Circuit, GaussianElement, Preparation};

/// Exact Gaussian state: mean and covariance over interleaved quadratures
/// (x0, p0, x1, p1, ...).
#[derive(Debug, Clone)]
pub struct GaussianState {
    modes: usize,
    mean: Vec<f64>,
    cov: Vec<f64>,
}

impl GaussianState {
    /// State with the given per-mode preparations; unlisted modes are vacuum.
    pub fn from_preparations(modes: usize, preparations: &[(usize, Preparation)]) -> Result<Self> {
        let dim = 2 * modes;
        let mut mean = vec![0.0; dim];
        let mut cov = vec![0.0; dim * dim];
        for m in 0..modes {
            cov[(2 * m) * dim + 2 * m] = 0.5;
            cov[(2 * m + 1) * dim + 2 * m + 1] = 0.5;
        }
        for (mode, prep) in preparations {
            prep.validate()?;
            let (mx, mp, vx, vp) = prep.moments();
            mean[2 * mode] = mx;
            mean[2 * mode + 1] = mp;
            cov[(2 * mode) * dim + 2 * mode] = vx;
            cov[(2 * mode + 1) * dim + 2 * mode + 1] = vp;
        }
        Ok(GaussianState { modes, mean, cov })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn mean_x(&self, mode: usize) -> f64 {
        self.mean[2 * mode]
    }

    pub fn mean_p(&self, mode: usize) -> f64 {
        self.mean[2 * mode + 1]
    }

    /// Covariance between quadratures qa and qb (interleaved indexing).
    pub fn cov(&self, qa: usize, qb: usize) -> f64 {
        self.cov[qa * 2 * self.modes + qb]
    }

    pub fn var_x(&self, mode: usize) -> f64 {
        self.cov(2 * mode, 2 * mode)
    }

    pub fn var_p(&self, mode: usize) -> f64 {
        self.cov(2 * mode + 1, 2 * mode + 1)
    }

    /// Symplectic matrix of one element over the full register.
    fn symplectic_of(&self, element: &GaussianElement) -> Vec<f64> {
        let dim = 2 * self.modes;
        let mut s = vec![0.0; dim * dim];
        for i in 0..dim {
            s[i * dim + i] = 1.0;
        }
        let xi = |m: usize| 2 * m;
        let pi = |m: usize| 2 * m + 1;
        match element {
            GaussianElement::BeamSplitter { a, b, transmittance } => {
                let (ct, cr) = (transmittance.sqrt(), (1.0 - transmittance).sqrt());
                for (ia, ib) in [(xi(*a), xi(*b)), (pi(*a), pi(*b))] {
                    s[ia * dim + ia] = ct;
                    s[ia * dim + ib] = cr;
                    s[ib * dim + ia] = cr;
                    s[ib * dim + ib] = -ct;
                }
            }
            GaussianElement::TwoModeAmp { signal, idler, gain } => {
                let (cg, cm) = (gain.sqrt(), (gain - 1.0).sqrt());
                let (ia, ib) = (xi(*signal), xi(*idler));
                s[ia * dim + ia] = cg;
                s[ia * dim + ib] = cm;
                s[ib * dim + ia] = cm;
                s[ib * dim + ib] = cg;
                let (ia, ib) = (pi(*signal), pi(*idler));
                s[ia * dim + ia] = cg;
                s[ia * dim + ib] = -cm;
                s[ib * dim + ia] = -cm;
                s[ib * dim + ib] = cg;
            }
            GaussianElement::SumGate { control, target, sign } => {
                s[xi(*target) * dim + xi(*control)] = *sign;
                s[pi(*control) * dim + pi(*target)] = -sign;
            }
            GaussianElement::Squeezer { mode, factor } => {
                s[xi(*mode) * dim + xi(*mode)] = *factor;
                s[pi(*mode) * dim + pi(*mode)] = 1.0 / factor;
            }
            GaussianElement::Distributor(d) => {
                let k = d.modes().len();
                for row in 0..k {
                    let mr = d.modes()[row];
                    s[xi(mr) * dim + xi(mr)] = 0.0;
                    s[pi(mr) * dim + pi(mr)] = 0.0;
                    for col in 0..k {
                        let mc = d.modes()[col];
                        let u = d.applied_entry(row, col);
                        // z' = U z with z = x + ip:
                        // x' = Re(U)x − Im(U)p, p' = Im(U)x + Re(U)p.
                        s[xi(mr) * dim + xi(mc)] += u.re;
                        s[xi(mr) * dim + pi(mc)] += -u.im;
                        s[pi(mr) * dim + xi(mc)] += u.im;
                        s[pi(mr) * dim + pi(mc)] += u.re;
                    }
                }
            }
        }
        s
    }

    /// Apply one element exactly: μ → Sμ, Γ → SΓSᵀ.
    pub fn apply(&mut self, element: &GaussianElement) -> Result<()> {
        element.validate(self.modes)?;
        let dim = 2 * self.modes;
        let s = self.symplectic_of(element);
        let mut new_mean = vec![0.0; dim];
        for i in 0..dim {
            let mut acc = 0.0;
            for j in 0..dim {
                acc += s[i * dim + j] * self.mean[j];
            }
            new_mean[i] = acc;
        }
        // tmp = S Γ
        let mut tmp = vec![0.0; dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                let sik = s[i * dim + k];
                if sik == 0.0 {
                    continue;
                }
                for j in 0..dim {
                    tmp[i * dim + j] += sik * self.cov[k * dim + j];
                }
            }
        }
        // Γ' = tmp Sᵀ
        let mut new_cov = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = 0.0;
                for k in 0..dim {
                    acc += tmp[i * dim + k] * s[j * dim + k];
                }
                new_cov[i * dim + j] = acc;
            }
        }
        self.mean = new_mean;
        self.cov = new_cov;
        Ok(())
    }

    pub fn run(&mut self, circuit: &Circuit) -> Result<()> {
        for element in circuit.elements() {
            self.apply(element)?;
        }
        Ok(())
    }
}
