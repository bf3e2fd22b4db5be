//! Phase-conjugated-inputs (PCI) cloning machines: from N replicas of a
//! coherent state ψ and N′ replicas of its conjugate ψ*, produce M clones
//! and M′ anticlones (with M′ − M = N′ − N) using mode concentration, a
//! phase-insensitive amplification stage, and mode distribution.

use crate::cloners::fidelity as standard_fidelity;
use crate::error::{Error, Result};
use crate::numeric;
use crate::phasespace::{Circuit, Distributor, GaussianElement, Preparation};

/// Integer PCI cloner specification. `m_prime` is fixed by the balance
/// constraint M′ = M + N′ − N.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PciSpec {
    pub n: u32,
    pub n_prime: u32,
    pub m: u32,
    pub m_prime: u32,
}

impl PciSpec {
    pub fn new(n: u32, n_prime: u32, m: u32) -> Result<Self> {
        if n + n_prime < 1 {
            return Err(Error::invalid("PCI cloner needs at least one input"));
        }
        if m < 1 {
            return Err(Error::invalid("PCI cloner must produce at least one clone"));
        }
        if m < n {
            // The amplification stage cannot reduce the mean amplitude, so
            // the mean-preservation constraint has no solution for M < N.
            return Err(Error::invalid(format!(
                "PCI cloner requires M >= N, got N={n}, M={m}"
            )));
        }
        let m_prime = m + n_prime - n;
        Ok(PciSpec {
            n,
            n_prime,
            m,
            m_prime,
        })
    }

    pub fn gain(&self) -> f64 {
        gain(self.n, self.n_prime, self.m).expect("validated spec")
    }

    pub fn stats(&self) -> PciStats {
        pci_stats(*self)
    }
}

/// Gain, thermal photon numbers and fidelities of a PCI cloner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PciStats {
    pub gain: f64,
    /// Added noise per clone quadrature: (G − 1)/M.
    pub n_th_clone: f64,
    /// Added noise per anticlone quadrature: (G − 1)/M′ (absent if M′ = 0).
    pub n_th_anticlone: Option<f64>,
    pub clone_fidelity: f64,
    pub anticlone_fidelity: Option<f64>,
}

/// Amplification gain of the PCI cloner:
/// √G = (√(N′M′) − √(NM))/(N′ − N), with the balanced limit
/// G = (M + N)²/(4MN) when N = N′.
pub fn gain(n: u32, n_prime: u32, m: u32) -> Result<f64> {
    let spec_check = PciSpec::new(n, n_prime, m)?;
    let m_prime = spec_check.m_prime;
    let (nf, npf, mf, mpf) = (n as f64, n_prime as f64, m as f64, m_prime as f64);
    if n == n_prime {
        return Ok((mf + nf).powi(2) / (4.0 * mf * nf));
    }
    let sqrt_g = ((npf * mpf).sqrt() - (nf * mf).sqrt()) / (npf - nf);
    Ok(sqrt_g * sqrt_g)
}

/// Fill [`PciStats`] from the gain.
pub fn pci_stats(spec: PciSpec) -> PciStats {
    let g = spec.gain();
    let n_th_clone = (g - 1.0) / spec.m as f64;
    let clone_fidelity = 1.0 / (1.0 + n_th_clone);
    let (n_th_anticlone, anticlone_fidelity) = if spec.m_prime > 0 {
        let nth = (g - 1.0) / spec.m_prime as f64;
        (Some(nth), Some(1.0 / (1.0 + nth)))
    } else {
        (None, None)
    };
    PciStats {
        gain: g,
        n_th_clone,
        n_th_anticlone,
        clone_fidelity,
        anticlone_fidelity,
    }
}

/// Gain as a function of the phase-conjugate fraction a = N′/n for fixed
/// total inputs n and clone count M (continuous relaxation):
///
///   G(a) = (√a·√(M/n + 2a − 1) − √(M/n)·√(1 − a))² / (2a − 1)²
///
/// The a = 1/2 singularity is removable and evaluated by the balanced
/// closed form; a = 1 gives G = M/n + 1 exactly.
pub fn gain_vs_fraction(a: f64, n: u32, m: u32) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::invalid(format!("fraction a={a} outside [0, 1]")));
    }
    if n < 1 || m < 1 {
        return Err(Error::invalid("need n >= 1 and M >= 1"));
    }
    let r = m as f64 / n as f64;
    if a < 0.5 && r < 1.0 - 2.0 * a {
        return Err(Error::invalid(format!(
            "M/n = {r} below domain bound 1 - 2a = {}",
            1.0 - 2.0 * a
        )));
    }
    if (2.0 * a - 1.0).abs() < 1e-9 {
        // Balanced limit N = N' = n/2: G = (M + n/2)²/(4M·n/2).
        let nn = 0.5 * n as f64;
        let mf = m as f64;
        return Ok((mf + nn).powi(2) / (4.0 * mf * nn));
    }
    if a == 1.0 {
        return Ok(r + 1.0);
    }
    let num = a.sqrt() * (r + (2.0 * a - 1.0)).sqrt() - r.sqrt() * (1.0 - a).sqrt();
    Ok((num / (2.0 * a - 1.0)).powi(2))
}

/// Clone noise (G(a) − 1)/M along the fraction curve.
pub fn noise_vs_fraction(a: f64, n: u32, m: u32) -> Result<f64> {
    Ok((gain_vs_fraction(a, n, m)? - 1.0) / m as f64)
}

/// Sampled curve of (a, G(a), √n_th(a)) for plotting.
#[derive(Debug, Clone)]
pub struct FractionCurve {
    pub n: u32,
    pub m: u32,
    pub samples: Vec<(f64, f64, f64)>,
}

pub fn sample_fraction_curve(n: u32, m: u32, points: usize) -> Result<FractionCurve> {
    if points < 2 {
        return Err(Error::invalid("curve needs at least two points"));
    }
    let mut samples = Vec::with_capacity(points);
    for i in 0..points {
        let a = i as f64 / (points - 1) as f64;
        match gain_vs_fraction(a, n, m) {
            Ok(g) => samples.push((a, g, ((g - 1.0) / m as f64).max(0.0).sqrt())),
            Err(_) => continue, // outside the domain for M < n
        }
    }
    Ok(FractionCurve { n, m, samples })
}

/// Minimizer of the clone noise over a ∈ [0, 1]: dense grid (step 1e-3)
/// bracketing followed by golden-section refinement to 1e-9 on a.
/// Returns (a*, n_th(a*)).
pub fn optimal_fraction(n: u32, m: u32) -> Result<(f64, f64)> {
    if m < n {
        return Err(Error::invalid(format!(
            "optimal_fraction requires M >= n, got n={n}, M={m}"
        )));
    }
    let f = |a: f64| noise_vs_fraction(a, n, m).unwrap_or(f64::INFINITY);
    let (a_star, nth) = numeric::grid_then_golden_min(f, 0.0, 1.0, 1e-3, 1e-9);
    // Snap to the endpoints when the interior refinement lands within
    // tolerance of them (the M = n optimum sits exactly at a = 0).
    let a_star = if a_star < 1e-9 {
        0.0
    } else if a_star > 1.0 - 1e-9 {
        1.0
    } else {
        a_star
    };
    Ok((a_star, noise_vs_fraction(a_star, n, m)?))
}

/// Side-by-side figures for the balanced (N,N) → M PCI cloner against the
/// standard 2N → M cloner.
#[derive(Debug, Clone, Copy)]
pub struct StandardComparison {
    pub n: u32,
    pub m: u32,
    pub pci_clone_fidelity: f64,
    pub std_clone_fidelity: f64,
    pub pci_clone_noise: f64,
    pub std_clone_noise: f64,
    /// The PCI cloner yields M anticlones; the standard cloner M − 2N.
    pub pci_anticlones: u32,
    pub std_anticlones: u32,
    pub pci_anticlone_fidelity: f64,
    /// 2N/(2N + 1), the optimal-measurement fidelity from 2N replicas.
    pub std_anticlone_fidelity: f64,
}

/// Compare the balanced (N,N) → M PCI cloner with the standard 2N → M
/// cloner. Requires M ≥ 2N so the standard machine exists.
pub fn compare_standard(n: u32, m: u32) -> Result<StandardComparison> {
    if m < 2 * n {
        return Err(Error::invalid(format!(
            "comparison requires M >= 2N, got N={n}, M={m}"
        )));
    }
    let spec = PciSpec::new(n, n, m)?;
    let stats = spec.stats();
    let two_n = 2 * n;
    let std_noise = 1.0 / two_n as f64 - 1.0 / m as f64;
    Ok(StandardComparison {
        n,
        m,
        pci_clone_fidelity: stats.clone_fidelity,
        std_clone_fidelity: standard_fidelity(two_n, m)?,
        pci_clone_noise: stats.n_th_clone,
        std_clone_noise: std_noise,
        pci_anticlones: spec.m_prime,
        std_anticlones: m - two_n,
        pci_anticlone_fidelity: stats.anticlone_fidelity.expect("M' = M >= 1"),
        std_anticlone_fidelity: two_n as f64 / (two_n as f64 + 1.0),
    })
}

/// Measuring ψ from N replicas and N′ conjugate replicas is as accurate as
/// measuring (√N + √N′)² identical replicas; returns that effective count.
pub fn measurement_equivalent_replicas(n: u32, n_prime: u32) -> Result<f64> {
    if n + n_prime < 1 {
        return Err(Error::invalid("need at least one replica"));
    }
    let s = (n as f64).sqrt() + (n_prime as f64).sqrt();
    Ok(s * s)
}

/// P-function of a clone: P(ξ) = exp(−|ξ − ψ|²/⟨n_th⟩)/(π⟨n_th⟩), a
/// normalized density over the complex plane.
pub fn p_function(xi_re: f64, xi_im: f64, psi_re: f64, psi_im: f64, n_th: f64) -> Result<f64> {
    if !(n_th > 0.0) {
        return Err(Error::invalid(format!(
            "P-function requires n_th > 0 (got {n_th}); n_th = 0 is a Dirac distribution"
        )));
    }
    let d2 = (xi_re - psi_re).powi(2) + (xi_im - psi_im).powi(2);
    Ok((-d2 / n_th).exp() / (std::f64::consts::PI * n_th))
}

/// PCI circuit with its mode roles.
#[derive(Debug, Clone)]
pub struct PciCircuit {
    pub spec: PciSpec,
    pub circuit: Circuit,
    /// Modes initially carrying ψ.
    pub input_modes: Vec<usize>,
    /// Modes initially carrying ψ*.
    pub conj_input_modes: Vec<usize>,
    pub clone_modes: Vec<usize>,
    pub anticlone_modes: Vec<usize>,
}

impl PciCircuit {
    /// Preparations placing ψ = (x̄ + i p̄)/√2-mean coherent states on the
    /// inputs and ψ* on the conjugate inputs.
    pub fn preparations(&self, mean_x: f64, mean_p: f64) -> Vec<(usize, Preparation)> {
        let mut preps = Vec::new();
        for &mode in &self.input_modes {
            preps.push((mode, Preparation::Coherent { mean_x, mean_p }));
        }
        for &mode in &self.conj_input_modes {
            preps.push((
                mode,
                Preparation::Coherent {
                    mean_x,
                    mean_p: -mean_p,
                },
            ));
        }
        preps
    }
}

/// Build the concentration / PCIA / distribution circuit for a spec.
///
/// Mode layout: ψ inputs first (the concentrated signal stays in mode 0),
/// then ψ* inputs (concentrated into the amplifier idler), then M − 1
/// clone-distribution vacua, then M′ − 1 anticlone vacua. When N (or N′)
/// is zero a single vacuum mode stands in for the missing block.
pub fn build_pci_circuit(spec: PciSpec) -> Result<PciCircuit> {
    let n = spec.n as usize;
    let np = spec.n_prime as usize;
    let m = spec.m as usize;
    let mp = spec.m_prime as usize;

    let sig_block = n.max(1);
    let idler = sig_block; // first mode of the conjugate block
    let conj_block = np.max(1);
    let clone_vacua_start = sig_block + conj_block;
    let anti_vacua_start = clone_vacua_start + (m - 1);
    let mode_count = anti_vacua_start + mp.saturating_sub(1);

    let mut circuit = Circuit::new(mode_count);
    if n > 1 {
        circuit.push(GaussianElement::Distributor(Distributor::dft_adjoint(
            (0..n).collect(),
        )?))?;
    }
    if np > 1 {
        circuit.push(GaussianElement::Distributor(Distributor::dft_adjoint(
            (idler..idler + np).collect(),
        )?))?;
    }
    circuit.push(GaussianElement::TwoModeAmp {
        signal: 0,
        idler,
        gain: spec.gain(),
    })?;
    let mut clone_modes = vec![0usize];
    clone_modes.extend(clone_vacua_start..clone_vacua_start + (m - 1));
    if m > 1 {
        circuit.push(GaussianElement::Distributor(Distributor::dft(
            clone_modes.clone(),
        )?))?;
    }
    let mut anticlone_modes = Vec::new();
    if mp >= 1 {
        anticlone_modes.push(idler);
        anticlone_modes.extend(anti_vacua_start..anti_vacua_start + (mp - 1));
        if mp > 1 {
            circuit.push(GaussianElement::Distributor(Distributor::dft(
                anticlone_modes.clone(),
            )?))?;
        }
    }
    Ok(PciCircuit {
        spec,
        circuit,
        input_modes: (0..n).collect(),
        conj_input_modes: (idler..idler + np).collect(),
        clone_modes,
        anticlone_modes,
    })
}
