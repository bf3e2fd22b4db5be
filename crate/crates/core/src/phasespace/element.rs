//! Gaussian circuit elements and ordered circuits over a fixed mode count.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Passive redistribution of one mode over a set of modes by a unitary
/// whose first column has uniform modulus 1/√K. Output moments depend only
/// on that column, so the default is the standard K-point discrete Fourier
/// matrix. With `adjoint` set the inverse map concentrates the set back
/// into the first listed mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Distributor {
    modes: Vec<usize>,
    /// Row-major K×K unitary.
    matrix: Vec<Complex64>,
    adjoint: bool,
}

impl Distributor {
    /// Standard K-point DFT matrix: U_jk = exp(2πi·jk/K)/√K.
    fn dft_matrix(k: usize) -> Vec<Complex64> {
        let norm = 1.0 / (k as f64).sqrt();
        let mut m = Vec::with_capacity(k * k);
        for j in 0..k {
            for l in 0..k {
                let phase = 2.0 * std::f64::consts::PI * (j * l % k) as f64 / k as f64;
                m.push(Complex64::from_polar(norm, phase));
            }
        }
        m
    }

    /// Distribute `modes[0]` over all listed modes with the DFT matrix;
    /// the remaining listed modes act as ancilla inputs.
    pub fn dft(modes: Vec<usize>) -> Result<Self> {
        let k = modes.len();
        Self::with_matrix(modes, Self::dft_matrix(k), false)
    }

    /// Concentrate the listed modes into `modes[0]` (adjoint DFT).
    pub fn dft_adjoint(modes: Vec<usize>) -> Result<Self> {
        let k = modes.len();
        Self::with_matrix(modes, Self::dft_matrix(k), true)
    }

    /// Build from an arbitrary matrix; rejects non-unitary matrices and
    /// first columns that are not uniform-modulus 1/√K (to 1e-12).
    pub fn with_matrix(modes: Vec<usize>, matrix: Vec<Complex64>, adjoint: bool) -> Result<Self> {
        let k = modes.len();
        if k == 0 {
            return Err(Error::invalid("distributor needs at least one mode"));
        }
        if matrix.len() != k * k {
            return Err(Error::ShapeMismatch(format!(
                "distributor matrix must be {k}x{k}"
            )));
        }
        // Unitarity: U U† = I.
        for i in 0..k {
            for j in 0..k {
                let mut dot = Complex64::new(0.0, 0.0);
                for l in 0..k {
                    dot += matrix[i * k + l] * matrix[j * k + l].conj();
                }
                let target = if i == j { 1.0 } else { 0.0 };
                if (dot - target).norm() > 1e-12 {
                    return Err(Error::invalid(format!(
                        "distributor matrix is not unitary (row {i}·row {j} = {dot})"
                    )));
                }
            }
        }
        let want = 1.0 / (k as f64).sqrt();
        for j in 0..k {
            let m = matrix[j * k].norm();
            if (m - want).abs() > 1e-12 {
                return Err(Error::invalid(format!(
                    "distributor first column entry {j} has modulus {m}, want {want}"
                )));
            }
        }
        let mut seen = std::collections::HashSet::new();
        if !modes.iter().all(|m| seen.insert(*m)) {
            return Err(Error::invalid("distributor modes must be distinct"));
        }
        Ok(Distributor {
            modes,
            matrix,
            adjoint,
        })
    }

    pub fn modes(&self) -> &[usize] {
        &self.modes
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn is_adjoint(&self) -> bool {
        self.adjoint
    }

    /// Effective matrix entry of the applied map (handles the adjoint).
    pub fn applied_entry(&self, row: usize, col: usize) -> Complex64 {
        let k = self.modes.len();
        if self.adjoint {
            self.matrix[col * k + row].conj()
        } else {
            self.matrix[row * k + col]
        }
    }
}

/// One Gaussian optical element.
#[derive(Debug, Clone, PartialEq)]
pub enum GaussianElement {
    /// Two-mode mixing: a' = √t a + √(1−t) b, b' = √(1−t) a − √t b.
    BeamSplitter { a: usize, b: usize, transmittance: f64 },
    /// Phase-insensitive amplifier (two-mode squeezer):
    /// a' = √G a + √(G−1) b*, b' = √(G−1) a* + √G b.
    TwoModeAmp { signal: usize, idler: usize, gain: f64 },
    /// x_target += sign·x_control, p_control −= sign·p_target.
    SumGate { control: usize, target: usize, sign: f64 },
    /// Single-mode squeezer: x → s·x, p → p/s.
    Squeezer { mode: usize, factor: f64 },
    Distributor(Distributor),
}

impl GaussianElement {
    pub fn validate(&self, mode_count: usize) -> Result<()> {
        let check = |idx: usize| -> Result<()> {
            if idx >= mode_count {
                Err(Error::ModeIndex {
                    index: idx,
                    modes: mode_count,
                })
            } else {
                Ok(())
            }
        };
        match self {
            GaussianElement::BeamSplitter { a, b, transmittance } => {
                check(*a)?;
                check(*b)?;
                if a == b {
                    return Err(Error::invalid("beam splitter modes must differ"));
                }
                if !(0.0..=1.0).contains(transmittance) {
                    return Err(Error::invalid(format!(
                        "transmittance {transmittance} outside [0, 1]"
                    )));
                }
            }
            GaussianElement::TwoModeAmp { signal, idler, gain } => {
                check(*signal)?;
                check(*idler)?;
                if signal == idler {
                    return Err(Error::invalid("amplifier modes must differ"));
                }
                if !(*gain >= 1.0) {
                    return Err(Error::invalid(format!("amplifier gain {gain} below 1")));
                }
            }
            GaussianElement::SumGate { control, target, sign } => {
                check(*control)?;
                check(*target)?;
                if control == target {
                    return Err(Error::invalid("sum gate modes must differ"));
                }
                if sign.abs() != 1.0 {
                    return Err(Error::invalid(format!("sum gate sign {sign} must be ±1")));
                }
            }
            GaussianElement::Squeezer { mode, factor } => {
                check(*mode)?;
                if !(*factor > 0.0) {
                    return Err(Error::invalid(format!(
                        "squeezer factor {factor} must be positive"
                    )));
                }
            }
            GaussianElement::Distributor(d) => {
                for m in &d.modes {
                    check(*m)?;
                }
            }
        }
        Ok(())
    }

    /// Push one shot's quadrature row through the element's symplectic map.
    pub(crate) fn apply_to_shot(&self, xs: &mut [f64], ps: &mut [f64]) {
        match self {
            GaussianElement::BeamSplitter { a, b, transmittance } => {
                let (ct, cr) = (transmittance.sqrt(), (1.0 - transmittance).sqrt());
                let (xa, xb) = (xs[*a], xs[*b]);
                xs[*a] = ct * xa + cr * xb;
                xs[*b] = cr * xa - ct * xb;
                let (pa, pb) = (ps[*a], ps[*b]);
                ps[*a] = ct * pa + cr * pb;
                ps[*b] = cr * pa - ct * pb;
            }
            GaussianElement::TwoModeAmp { signal, idler, gain } => {
                let (cg, cm) = (gain.sqrt(), (gain - 1.0).sqrt());
                let (xa, xb) = (xs[*signal], xs[*idler]);
                xs[*signal] = cg * xa + cm * xb;
                xs[*idler] = cm * xa + cg * xb;
                let (pa, pb) = (ps[*signal], ps[*idler]);
                ps[*signal] = cg * pa - cm * pb;
                ps[*idler] = -cm * pa + cg * pb;
            }
            GaussianElement::SumGate { control, target, sign } => {
                xs[*target] += sign * xs[*control];
                ps[*control] -= sign * ps[*target];
            }
            GaussianElement::Squeezer { mode, factor } => {
                xs[*mode] *= factor;
                ps[*mode] /= factor;
            }
            GaussianElement::Distributor(d) => {
                let k = d.modes.len();
                let mut z: Vec<Complex64> = d
                    .modes
                    .iter()
                    .map(|&m| Complex64::new(xs[m], ps[m]))
                    .collect();
                let mut out = vec![Complex64::new(0.0, 0.0); k];
                for (row, o) in out.iter_mut().enumerate() {
                    for (col, zi) in z.iter().enumerate() {
                        *o += d.applied_entry(row, col) * zi;
                    }
                }
                z.copy_from_slice(&out);
                for (i, &m) in d.modes.iter().enumerate() {
                    xs[m] = z[i].re;
                    ps[m] = z[i].im;
                }
            }
        }
    }

    /// True for elements that conserve total photon number shot-wise
    /// (orthogonal/unitary mixing of amplitudes).
    pub fn is_passive(&self) -> bool {
        matches!(
            self,
            GaussianElement::BeamSplitter { .. } | GaussianElement::Distributor(_)
        )
    }
}

/// Ordered sequence of elements over a fixed mode count.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    mode_count: usize,
    elements: Vec<GaussianElement>,
}

impl Circuit {
    pub fn new(mode_count: usize) -> Self {
        Circuit {
            mode_count,
            elements: Vec::new(),
        }
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn elements(&self) -> &[GaussianElement] {
        &self.elements
    }

    pub fn push(&mut self, element: GaussianElement) -> Result<()> {
        element.validate(self.mode_count)?;
        self.elements.push(element);
        Ok(())
    }

    pub fn is_passive(&self) -> bool {
        self.elements.iter().all(GaussianElement::is_passive)
    }
}

/// Parse a plain-text circuit description: a `modes N` line followed by one
/// element per line (`#` starts a comment).
///
/// ```text
/// modes 3
/// amp 0 2 2.0        # two-mode amplifier, gain 2
/// bs 0 1 0.5         # beam splitter, transmittance 1/2
/// sum 0 1 +1
/// sq 1 0.8
/// dft 0 1 2          # distribute mode 0 over modes 0,1,2
/// conc 0 1           # concentrate modes 0,1 into mode 0
/// ```
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let kind = parts.next().unwrap();
        let rest: Vec<&str> = parts.collect();
        let parse_err = |message: String| Error::Parse {
            line: lineno + 1,
            message,
        };
        let usize_at = |i: usize| -> Result<usize> {
            rest.get(i)
                .ok_or_else(|| parse_err(format!("missing argument {i} for `{kind}`")))?
                .parse::<usize>()
                .map_err(|e| parse_err(format!("bad index: {e}")))
        };
        let f64_at = |i: usize| -> Result<f64> {
            rest.get(i)
                .ok_or_else(|| parse_err(format!("missing argument {i} for `{kind}`")))?
                .parse::<f64>()
                .map_err(|e| parse_err(format!("bad number: {e}")))
        };
        if kind == "modes" {
            if circuit.is_some() {
                return Err(parse_err("duplicate `modes` line".into()));
            }
            circuit = Some(Circuit::new(usize_at(0)?));
            continue;
        }
        let c = circuit
            .as_mut()
            .ok_or_else(|| parse_err("`modes N` must come first".into()))?;
        let element = match kind {
            "bs" => GaussianElement::BeamSplitter {
                a: usize_at(0)?,
                b: usize_at(1)?,
                transmittance: f64_at(2)?,
            },
            "amp" => GaussianElement::TwoModeAmp {
                signal: usize_at(0)?,
                idler: usize_at(1)?,
                gain: f64_at(2)?,
            },
            "sum" => GaussianElement::SumGate {
                control: usize_at(0)?,
                target: usize_at(1)?,
                sign: match rest.get(2).copied() {
                    Some("+") | Some("+1") | None => 1.0,
                    Some("-") | Some("-1") => -1.0,
                    Some(other) => {
                        return Err(parse_err(format!("bad sum-gate sign `{other}`")));
                    }
                },
            },
            "sq" => GaussianElement::Squeezer {
                mode: usize_at(0)?,
                factor: f64_at(1)?,
            },
            "dft" | "conc" => {
                let modes: Vec<usize> = (0..rest.len())
                    .map(usize_at)
                    .collect::<Result<Vec<_>>>()?;
                let d = if kind == "dft" {
                    Distributor::dft(modes)
                } else {
                    Distributor::dft_adjoint(modes)
                }?;
                GaussianElement::Distributor(d)
            }
            other => {
                return Err(parse_err(format!("unknown element kind `{other}`")));
            }
        };
        c.push(element)
            .map_err(|e| parse_err(format!("invalid element: {e}")))?;
    }
    circuit.ok_or_else(|| Error::Parse {
        line: 0,
        message: "empty circuit description".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phasespace::{estimate_moments, sample_input, run_circuit, Preparation};

    #[test]
    fn dft_matrix_is_unitary_with_uniform_first_column() {
        for k in 1..=6 {
            let d = Distributor::dft((0..k).collect()).unwrap();
            // Constructor already enforces both properties to 1e-12; spot
            // check the 50:50 case reduces to the Hadamard mix.
            if k == 2 {
                let m = d.matrix();
                let r = 1.0 / 2f64.sqrt();
                assert!((m[0].re - r).abs() < 1e-15 && m[0].im.abs() < 1e-15);
                assert!((m[3].re + r).abs() < 1e-15 && m[3].im.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rejects_bad_distributor_matrices() {
        let bad = vec![Complex64::new(1.0, 0.0); 4];
        assert!(Distributor::with_matrix(vec![0, 1], bad, false).is_err());
        // Identity is unitary but its first column is not uniform-modulus.
        let id = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        assert!(Distributor::with_matrix(vec![0, 1], id, false).is_err());
    }

    #[test]
    fn beam_splitter_on_two_vacua_stays_vacuum() {
        let ens = sample_input(2, 200_000, 5, &[]).unwrap();
        let mut circuit = Circuit::new(2);
        circuit
            .push(GaussianElement::BeamSplitter {
                a: 0,
                b: 1,
                transmittance: 0.5,
            })
            .unwrap();
        let out = run_circuit(&ens, &circuit).unwrap();
        let m = estimate_moments(&out).unwrap();
        for mode in 0..2 {
            assert!((m.var_x(mode) - 0.5).abs() < 5.0 * m.cov_error(2 * mode, 2 * mode));
            assert!(m.mean_x(mode).abs() < 5.0 * m.mean_errors[2 * mode]);
        }
    }

    #[test]
    fn amplifier_gain_two_moments() {
        // Coherent ψ with vacuum idler: mean √2·ψ, variance 3/2.
        let psi = Preparation::coherent_amplitude(1.0, -0.5);
        let ens = sample_input(2, 400_000, 8, &[(0, psi)]).unwrap();
        let mut ens = ens;
        ens.apply(&GaussianElement::TwoModeAmp {
            signal: 0,
            idler: 1,
            gain: 2.0,
        })
        .unwrap();
        let m = estimate_moments(&ens).unwrap();
        let sqrt2 = std::f64::consts::SQRT_2;
        assert!((m.mean_x(0) - sqrt2 * sqrt2 * 1.0).abs() < 5.0 * m.mean_errors[0]);
        assert!((m.mean_p(0) - sqrt2 * sqrt2 * -0.5).abs() < 5.0 * m.mean_errors[1]);
        assert!((m.var_x(0) - 1.5).abs() < 5.0 * m.cov_error(0, 0));
        assert!((m.var_p(0) - 1.5).abs() < 5.0 * m.cov_error(1, 1));
    }

    #[test]
    fn sum_gate_moves_means() {
        let ens = sample_input(
            2,
            200_000,
            4,
            &[(0, Preparation::Coherent { mean_x: 1.0, mean_p: 0.0 })],
        )
        .unwrap();
        let mut ens = ens;
        ens.apply(&GaussianElement::SumGate {
            control: 0,
            target: 1,
            sign: 1.0,
        })
        .unwrap();
        let m = estimate_moments(&ens).unwrap();
        assert!((m.mean_x(1) - 1.0).abs() < 5.0 * m.mean_errors[2]);
        assert!(m.mean_p(1).abs() < 5.0 * m.mean_errors[3]);
    }

    #[test]
    fn passive_circuit_conserves_photon_number_shotwise() {
        let ens = sample_input(
            3,
            256,
            21,
            &[(0, Preparation::Coherent { mean_x: 2.0, mean_p: 1.0 })],
        )
        .unwrap();
        let mut circuit = Circuit::new(3);
        circuit
            .push(GaussianElement::BeamSplitter { a: 0, b: 1, transmittance: 0.3 })
            .unwrap();
        circuit
            .push(GaussianElement::Distributor(
                Distributor::dft(vec![0, 1, 2]).unwrap(),
            ))
            .unwrap();
        assert!(circuit.is_passive());
        let out = run_circuit(&ens, &circuit).unwrap();
        for shot in 0..ens.shots() {
            let before = ens.shot_photon_number(shot);
            let after = out.shot_photon_number(shot);
            assert!(
                (before - after).abs() < 1e-12 * (1.0 + before.abs()),
                "shot {shot}: {before} vs {after}"
            );
        }
    }

    #[test]
    fn element_validation_errors() {
        let mut c = Circuit::new(2);
        assert!(c
            .push(GaussianElement::TwoModeAmp { signal: 0, idler: 2, gain: 2.0 })
            .is_err());
        assert!(c
            .push(GaussianElement::TwoModeAmp { signal: 0, idler: 1, gain: 0.5 })
            .is_err());
        assert!(c
            .push(GaussianElement::BeamSplitter { a: 0, b: 1, transmittance: 1.5 })
            .is_err());
        assert!(c
            .push(GaussianElement::Squeezer { mode: 0, factor: 0.0 })
            .is_err());
    }

    #[test]
    fn parse_round_trip() {
        let text = "
# a 1->2 cloner
modes 3
amp 0 2 2.0
bs 0 1 0.5
";
        let c = parse_circuit(text).unwrap();
        assert_eq!(c.mode_count(), 3);
        assert_eq!(c.elements().len(), 2);
        assert!(matches!(
            c.elements()[0],
            GaussianElement::TwoModeAmp { signal: 0, idler: 2, .. }
        ));
        assert!(parse_circuit("bs 0 1 0.5").is_err());
        assert!(parse_circuit("modes 2\nbogus 0 1").is_err());
        assert!(parse_circuit("modes 2\nbs 0 5 0.5").is_err());
    }
}
