//! Symmetric N→M and asymmetric 1→2 Gaussian cloning machines: analytic
//! added variances and coherent-state fidelities, plus circuit builders
//! realizing them with amplifiers, beam splitters, sum gates and squeezers.

use crate::error::{Error, Result};
use crate::numeric;
use crate::phasespace::{
    estimate_moments, run_circuit, sample_input, Circuit, Distributor, GaussianElement,
    Preparation, Quadrature, ShotEnsemble,
};

/// Symmetric Gaussian cloner taking N identical inputs to M clones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetricClonerSpec {
    pub n: u32,
    pub m: u32,
}

impl SymmetricClonerSpec {
    pub fn new(n: u32, m: u32) -> Result<Self> {
        if n < 1 || m < n {
            return Err(Error::invalid(format!(
                "cloner requires M >= N >= 1, got N={n}, M={m}"
            )));
        }
        Ok(SymmetricClonerSpec { n, m })
    }

    pub fn stats(&self) -> CloneStats {
        let v = added_variance(self.n, self.m).expect("validated spec");
        CloneStats {
            added_variance_x: v,
            added_variance_p: v,
            fidelity: fidelity(self.n, self.m).expect("validated spec"),
        }
    }
}

/// Asymmetric 1→2 cloner parametrized by the clone-asymmetry ratio χ and
/// the x/p-asymmetry ratio λ. The family saturates the cloning uncertainty
/// product σ²_{B,x}·σ²_{E,p} = σ²_{B,p}·σ²_{E,x} = 1/4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymmetricClonerSpec {
    pub chi: f64,
    pub lambda: f64,
}

impl AsymmetricClonerSpec {
    pub fn new(chi: f64, lambda: f64) -> Result<Self> {
        if !(chi > 0.0) || !(lambda > 0.0) {
            return Err(Error::invalid(format!(
                "asymmetric cloner requires chi, lambda > 0, got ({chi}, {lambda})"
            )));
        }
        Ok(AsymmetricClonerSpec { chi, lambda })
    }

    pub fn variances(&self) -> AsymmetricVariances {
        asymmetric_variances(self.chi, self.lambda).expect("validated spec")
    }

    /// Per-clone stats (first entry is the χ-side clone "B").
    pub fn stats(&self) -> (CloneStats, CloneStats) {
        let v = self.variances();
        (
            CloneStats {
                added_variance_x: v.bob_x,
                added_variance_p: v.bob_p,
                fidelity: fidelity_from_added_variances(v.bob_x, v.bob_p).expect("nonnegative"),
            },
            CloneStats {
                added_variance_x: v.eve_x,
                added_variance_p: v.eve_p,
                fidelity: fidelity_from_added_variances(v.eve_x, v.eve_p).expect("nonnegative"),
            },
        )
    }
}

/// Cloning-induced noise and coherent-state fidelity of one clone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CloneStats {
    pub added_variance_x: f64,
    pub added_variance_p: f64,
    pub fidelity: f64,
}

/// The four added variances of the asymmetric cloner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymmetricVariances {
    pub bob_x: f64,
    pub bob_p: f64,
    pub eve_x: f64,
    pub eve_p: f64,
}

/// Optimal added variance of the N→M cloner: 1/N − 1/M per quadrature.
pub fn added_variance(n: u32, m: u32) -> Result<f64> {
    if n < 1 || m < n {
        return Err(Error::invalid(format!(
            "added_variance requires M >= N >= 1, got N={n}, M={m}"
        )));
    }
    Ok(1.0 / n as f64 - 1.0 / m as f64)
}

/// Optimal N→M coherent-state fidelity MN/(MN + M − N).
pub fn fidelity(n: u32, m: u32) -> Result<f64> {
    if n < 1 || m < n {
        return Err(Error::invalid(format!(
            "fidelity requires M >= N >= 1, got N={n}, M={m}"
        )));
    }
    let (n, m) = (n as f64, m as f64);
    Ok(m * n / (m * n + m - n))
}

/// Coherent-state fidelity of a clone with independent Gaussian added noise
/// (σ²_x, σ²_p): 1/√((1 + σ²_x)(1 + σ²_p)).
pub fn fidelity_from_added_variances(var_x: f64, var_p: f64) -> Result<f64> {
    if var_x < 0.0 || var_p < 0.0 {
        return Err(Error::invalid(format!(
            "added variances must be nonnegative, got ({var_x}, {var_p})"
        )));
    }
    Ok(1.0 / ((1.0 + var_x) * (1.0 + var_p)).sqrt())
}

/// Added variances (σ²_{B,x}, σ²_{B,p}, σ²_{E,x}, σ²_{E,p}) of the
/// asymmetric cloner: (χλ/2, χ/2λ, λ/2χ, 1/2χλ).
pub fn asymmetric_variances(chi: f64, lambda: f64) -> Result<AsymmetricVariances> {
    if !(chi > 0.0) || !(lambda > 0.0) {
        return Err(Error::invalid(format!(
            "asymmetric_variances requires chi, lambda > 0, got ({chi}, {lambda})"
        )));
    }
    Ok(AsymmetricVariances {
        bob_x: 0.5 * chi * lambda,
        bob_p: 0.5 * chi / lambda,
        eve_x: 0.5 * lambda / chi,
        eve_p: 0.5 / (chi * lambda),
    })
}

/// A circuit together with its mode roles.
#[derive(Debug, Clone)]
pub struct ClonerCircuit {
    pub circuit: Circuit,
    pub input_modes: Vec<usize>,
    pub clone_modes: Vec<usize>,
    pub anticlone_modes: Vec<usize>,
}

impl ClonerCircuit {
    /// Sample `shots` runs of the circuit with the same coherent state ψ on
    /// every input mode.
    pub fn run_coherent(
        &self,
        mean_x: f64,
        mean_p: f64,
        shots: usize,
        seed: u64,
    ) -> Result<ShotEnsemble> {
        let preps: Vec<(usize, Preparation)> = self
            .input_modes
            .iter()
            .map(|&m| (m, Preparation::Coherent { mean_x, mean_p }))
            .collect();
        let ens = sample_input(self.circuit.mode_count(), shots, seed, &preps)?;
        run_circuit(&ens, &self.circuit)
    }
}

/// Fig.-1 style 1→2 cloner: phase-insensitive amplifier of gain 2 followed
/// by a 50:50 beam splitter. Modes: 0 = input and first clone, 1 = second
/// clone, 2 = amplifier idler (anticlone).
pub fn build_12_circuit() -> ClonerCircuit {
    let mut circuit = Circuit::new(3);
    circuit
        .push(GaussianElement::TwoModeAmp {
            signal: 0,
            idler: 2,
            gain: 2.0,
        })
        .expect("static circuit");
    circuit
        .push(GaussianElement::BeamSplitter {
            a: 0,
            b: 1,
            transmittance: 0.5,
        })
        .expect("static circuit");
    ClonerCircuit {
        circuit,
        input_modes: vec![0],
        clone_modes: vec![0, 1],
        anticlone_modes: vec![2],
    }
}

/// The same 1→2 cloner built from sum gates realizing the three factors of
/// the canonical cloning unitary
/// exp(−i(x̂₃−x̂₂)p̂₁)·exp(−ix̂₁(p̂₂+p̂₃))·exp(−ix̂₂p̂₃)
/// applied right to left. Moment-equivalent to [`build_12_circuit`].
pub fn build_canonical_12_circuit() -> ClonerCircuit {
    let mut circuit = Circuit::new(3);
    let gates = [
        (1usize, 2usize, 1.0), // exp(−i x̂₂ p̂₃)
        (0, 1, 1.0),           // exp(−i x̂₁ p̂₂)
        (0, 2, 1.0),           // exp(−i x̂₁ p̂₃)
        (2, 0, 1.0),           // exp(−i x̂₃ p̂₁)
        (1, 0, -1.0),          // exp(+i x̂₂ p̂₁)
    ];
    for (control, target, sign) in gates {
        circuit
            .push(GaussianElement::SumGate {
                control,
                target,
                sign,
            })
            .expect("static circuit");
    }
    ClonerCircuit {
        circuit,
        input_modes: vec![0],
        clone_modes: vec![0, 1],
        anticlone_modes: vec![2],
    }
}

/// N→M cloner: concentrate the N inputs into one mode with an adjoint DFT,
/// amplify with gain G = M/N against a vacuum idler, and distribute over M
/// modes with a DFT. Yields added variance 1/N − 1/M per clone quadrature.
///
/// Mode layout: 0..N-1 inputs, N amplifier idler (anticlone),
/// N+1..N+M-1 distribution vacua; clones are mode 0 plus the vacua.
pub fn build_nm_circuit(n: u32, m: u32) -> Result<ClonerCircuit> {
    if n < 1 || m < n {
        return Err(Error::invalid(format!(
            "build_nm_circuit requires M >= N >= 1, got N={n}, M={m}"
        )));
    }
    let (nu, mu) = (n as usize, m as usize);
    let mode_count = nu + mu;
    let mut circuit = Circuit::new(mode_count);
    if nu > 1 {
        circuit.push(GaussianElement::Distributor(Distributor::dft_adjoint(
            (0..nu).collect(),
        )?))?;
    }
    circuit.push(GaussianElement::TwoModeAmp {
        signal: 0,
        idler: nu,
        gain: m as f64 / n as f64,
    })?;
    let mut clone_modes = vec![0usize];
    clone_modes.extend(nu + 1..nu + mu);
    if mu > 1 {
        circuit.push(GaussianElement::Distributor(Distributor::dft(
            clone_modes.clone(),
        )?))?;
    }
    Ok(ClonerCircuit {
        circuit,
        input_modes: (0..nu).collect(),
        clone_modes,
        anticlone_modes: vec![nu],
    })
}

/// Asymmetric 1→2 cloner circuit: a pre-amplifier beam splitter diverts
/// part of the input around a phase-insensitive amplifier and a second
/// beam splitter recombines the paths, with
///
///   G = 1 + (χ + 1/χ)/2,  t = 2χ/(1 + χ²),  u = χ²/(1 + χ²)
///
/// so that both clones keep the input mean while the added variances come
/// out as `asymmetric_variances(chi, 1)`. The x/p asymmetry λ is realized
/// by squeezing the input before the cloner and unsqueezing both clones
/// after it. Modes: 0 = clone B, 1 = clone E, 2 = anticlone.
pub fn build_asymmetric_12_circuit(chi: f64, lambda: f64) -> Result<ClonerCircuit> {
    if !(chi > 0.0) || !(lambda > 0.0) {
        return Err(Error::invalid(format!(
            "asymmetric circuit requires chi, lambda > 0, got ({chi}, {lambda})"
        )));
    }
    // The two-beam-splitter solution exists for the branch chi <= 1; the
    // mirrored cloner swaps the two clone roles.
    let (chi_eff, swapped) = if chi <= 1.0 { (chi, false) } else { (1.0 / chi, true) };
    let gain = 1.0 + 0.5 * (chi_eff + 1.0 / chi_eff);
    let t = 2.0 * chi_eff / (1.0 + chi_eff * chi_eff);
    let u = chi_eff * chi_eff / (1.0 + chi_eff * chi_eff);

    let mut circuit = Circuit::new(3);
    let sqrt_lambda = lambda.sqrt();
    if lambda != 1.0 {
        circuit.push(GaussianElement::Squeezer {
            mode: 0,
            factor: 1.0 / sqrt_lambda,
        })?;
    }
    if (t - 1.0).abs() > 1e-15 {
        circuit.push(GaussianElement::BeamSplitter {
            a: 0,
            b: 1,
            transmittance: t,
        })?;
    }
    circuit.push(GaussianElement::TwoModeAmp {
        signal: 0,
        idler: 2,
        gain,
    })?;
    circuit.push(GaussianElement::BeamSplitter {
        a: 0,
        b: 1,
        transmittance: u,
    })?;
    if lambda != 1.0 {
        for mode in [0, 1] {
            circuit.push(GaussianElement::Squeezer {
                mode,
                factor: sqrt_lambda,
            })?;
        }
    }
    let clone_modes = if swapped { vec![1, 0] } else { vec![0, 1] };
    Ok(ClonerCircuit {
        circuit,
        input_modes: vec![0],
        clone_modes,
        anticlone_modes: vec![2],
    })
}

/// Result of jointly measuring x on one clone and p on another.
#[derive(Debug, Clone, Copy)]
pub struct JointMeasurement {
    /// Mean squared error of the x samples about the input mean.
    pub sigma2_x: f64,
    /// Mean squared error of the p samples about the input mean.
    pub sigma2_p: f64,
    pub product: f64,
}

/// Measure x on clone 1 and p on clone 2 of a cloner over `shots` runs with
/// the same coherent input ψ on every input mode, and return the total
/// error variances about the input means. For any cloner the product obeys
/// the simultaneous-measurement bound Σ²_x·Σ²_p ≥ 1; the optimal symmetric
/// 1→2 cloner saturates it.
pub fn joint_measurement_check(
    cloner: &ClonerCircuit,
    mean_x: f64,
    mean_p: f64,
    shots: usize,
    seed: u64,
) -> Result<JointMeasurement> {
    if cloner.clone_modes.len() < 2 {
        return Err(Error::invalid(
            "joint measurement needs at least two clone modes",
        ));
    }
    let out = cloner.run_coherent(mean_x, mean_p, shots, seed)?;
    let xs = out.measure_quadrature(cloner.clone_modes[0], Quadrature::X)?;
    let ps = out.measure_quadrature(cloner.clone_modes[1], Quadrature::P)?;
    let sigma2_x = numeric::mean_sq_about(&xs, mean_x);
    let sigma2_p = numeric::mean_sq_about(&ps, mean_p);
    Ok(JointMeasurement {
        sigma2_x,
        sigma2_p,
        product: sigma2_x * sigma2_p,
    })
}

/// Monte Carlo estimate of the coherent-state fidelity of a clone from its
/// Wigner quadrature samples: F = E[2·exp(−(x−x̄)² − (p−p̄)²)] where
/// (x̄, p̄) is the input mean. Returns (estimate, standard error).
pub fn coherent_fidelity_mc(xs: &[f64], ps: &[f64], mean_x: f64, mean_p: f64) -> (f64, f64) {
    assert_eq!(xs.len(), ps.len());
    let n = xs.len() as f64;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for (x, p) in xs.iter().zip(ps) {
        let v = 2.0 * (-(x - mean_x).powi(2) - (p - mean_p).powi(2)).exp();
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    (mean, (var / n).sqrt())
}

/// Per-clone Monte Carlo statistics of a cloner circuit run on a coherent
/// input: added variances (about the known input means) and MC fidelity.
pub fn mc_clone_stats(
    cloner: &ClonerCircuit,
    mean_x: f64,
    mean_p: f64,
    shots: usize,
    seed: u64,
) -> Result<Vec<CloneStats>> {
    let out = cloner.run_coherent(mean_x, mean_p, shots, seed)?;
    let mut stats = Vec::with_capacity(cloner.clone_modes.len());
    for &mode in &cloner.clone_modes {
        let xs = out.measure_quadrature(mode, Quadrature::X)?;
        let ps = out.measure_quadrature(mode, Quadrature::P)?;
        let var_x = numeric::mean_sq_about(&xs, mean_x) - 0.5;
        let var_p = numeric::mean_sq_about(&ps, mean_p) - 0.5;
        let (f, _) = coherent_fidelity_mc(&xs, &ps, mean_x, mean_p);
        stats.push(CloneStats {
            added_variance_x: var_x,
            added_variance_p: var_p,
            fidelity: f,
        });
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::integrate;
    use crate::phasespace::GaussianState;
    use proptest::prelude::*;

    #[test]
    fn added_variance_reference_values() {
        assert_eq!(added_variance(1, 2).unwrap(), 0.5);
        assert_eq!(added_variance(3, 3).unwrap(), 0.0);
        assert!((added_variance(2, 3).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert!(added_variance(3, 2).is_err());
        assert!(added_variance(0, 2).is_err());
    }

    #[test]
    fn fidelity_reference_values() {
        assert!((fidelity(1, 2).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(fidelity(4, 4).unwrap(), 1.0);
        assert!((fidelity(2, 3).unwrap() - 6.0 / 7.0).abs() < 1e-15);
        assert!(fidelity(3, 2).is_err());
    }

    #[test]
    fn fidelity_equals_inverse_one_plus_variance() {
        for n in 1..=6u32 {
            for m in n..=8u32 {
                let f = fidelity(n, m).unwrap();
                let v = added_variance(n, m).unwrap();
                assert!((f - 1.0 / (1.0 + v)).abs() < 1e-14, "N={n} M={m}");
            }
        }
    }

    #[test]
    fn fidelity_from_variances_reference_values() {
        assert!((fidelity_from_added_variances(0.5, 0.5).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(fidelity_from_added_variances(0.0, 0.0).unwrap(), 1.0);
        assert!(
            (fidelity_from_added_variances(0.25, 1.0).unwrap() - 1.0 / 2.5f64.sqrt()).abs()
                < 1e-15
        );
        assert!(fidelity_from_added_variances(-0.1, 0.5).is_err());
    }

    #[test]
    fn fidelity_matches_wigner_overlap_quadrature() {
        // Oracle: F = 2π ∫∫ W_clone·W_input dx dp with centered Gaussian
        // Wigner functions, done as nested 1-D quadratures.
        let overlap = |sx: f64, sp: f64| -> f64 {
            let (vx, vp) = (0.5 + sx, 0.5 + sp);
            let gauss = |v: f64| {
                move |q: f64| {
                    let w_clone =
                        (-(q * q) / (2.0 * v)).exp() / (2.0 * std::f64::consts::PI * v).sqrt();
                    let w_in = (-q * q).exp() / std::f64::consts::PI.sqrt();
                    w_clone * w_in
                }
            };
            // The 2-D overlap integral of product Gaussians factorizes;
            // evaluate each factor by adaptive quadrature.
            let ix = integrate(gauss(vx), -12.0, 12.0, 1e-12).unwrap();
            let ip = integrate(gauss(vp), -12.0, 12.0, 1e-12).unwrap();
            // W normalization: each factor above used the 1-D marginals of
            // (1/2πσ²)·exp(−(x²+p²)/2σ²) and (1/π)·exp(−x²−p²).
            2.0 * std::f64::consts::PI * ix * ip
        };
        for (sx, sp) in [(0.5, 0.5), (0.0, 0.0), (0.25, 1.0), (0.1, 0.7)] {
            let closed = fidelity_from_added_variances(sx, sp).unwrap();
            assert!(
                (closed - overlap(sx, sp)).abs() < 1e-9,
                "({sx},{sp}): {closed} vs {}",
                overlap(sx, sp)
            );
        }
    }

    #[test]
    fn asymmetric_variances_reference_values() {
        let v = asymmetric_variances(1.0, 1.0).unwrap();
        assert_eq!((v.bob_x, v.bob_p, v.eve_x, v.eve_p), (0.5, 0.5, 0.5, 0.5));
        let v = asymmetric_variances(2.0, 1.0).unwrap();
        assert_eq!((v.bob_x, v.bob_p, v.eve_x, v.eve_p), (1.0, 1.0, 0.25, 0.25));
        assert!(asymmetric_variances(0.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn uncertainty_product_saturated(
            chi in 0.05f64..20.0,
            lambda in 0.05f64..20.0,
        ) {
            let v = asymmetric_variances(chi, lambda).unwrap();
            prop_assert!((v.bob_x * v.eve_p - 0.25).abs() < 1e-15);
            prop_assert!((v.bob_p * v.eve_x - 0.25).abs() < 1e-15);
        }

        #[test]
        fn nm_fidelity_monotone_in_m(n in 1u32..4, extra in 0u32..6) {
            let m = n + extra;
            let f = fidelity(n, m).unwrap();
            let f_next = fidelity(n, m + 1).unwrap();
            prop_assert!(f_next <= f + 1e-15);
        }
    }

    #[test]
    fn fig1_circuit_exact_moments() {
        let cloner = build_12_circuit();
        let mut st = GaussianState::from_preparations(
            3,
            &[(0, Preparation::Coherent { mean_x: 0.6, mean_p: 1.1 })],
        )
        .unwrap();
        st.run(&cloner.circuit).unwrap();
        for &c in &cloner.clone_modes {
            assert!((st.mean_x(c) - 0.6).abs() < 1e-12);
            assert!((st.mean_p(c) - 1.1).abs() < 1e-12);
            assert!((st.var_x(c) - 1.0).abs() < 1e-12);
            assert!((st.var_p(c) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn canonical_circuit_matches_amplifier_circuit_exactly() {
        // Full 6x6 covariance and mean agreement under exact propagation.
        let prep = [(0usize, Preparation::Coherent { mean_x: -0.4, mean_p: 0.9 })];
        let mut a = GaussianState::from_preparations(3, &prep).unwrap();
        a.run(&build_12_circuit().circuit).unwrap();
        let mut b = GaussianState::from_preparations(3, &prep).unwrap();
        b.run(&build_canonical_12_circuit().circuit).unwrap();
        for q in 0..6 {
            assert!(
                (a.cov(q, q) - b.cov(q, q)).abs() < 1e-12,
                "var q={q}: {} vs {}",
                a.cov(q, q),
                b.cov(q, q)
            );
            for r in 0..6 {
                assert!((a.cov(q, r) - b.cov(q, r)).abs() < 1e-12, "cov ({q},{r})");
            }
        }
        for m in 0..3 {
            assert!((a.mean_x(m) - b.mean_x(m)).abs() < 1e-12);
            assert!((a.mean_p(m) - b.mean_p(m)).abs() < 1e-12);
        }
    }

    #[test]
    fn canonical_circuit_vacuum_clone_variance() {
        let cloner = build_canonical_12_circuit();
        let mut st = GaussianState::from_preparations(3, &[]).unwrap();
        st.run(&cloner.circuit).unwrap();
        for &c in &cloner.clone_modes {
            assert!((st.var_x(c) - 1.0).abs() < 1e-12);
            assert!((st.var_p(c) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn nm_circuit_exact_added_variance() {
        for (n, m) in [(1u32, 2u32), (2, 3), (3, 3), (2, 5), (3, 4)] {
            let cloner = build_nm_circuit(n, m).unwrap();
            let preps: Vec<(usize, Preparation)> = cloner
                .input_modes
                .iter()
                .map(|&i| (i, Preparation::Coherent { mean_x: 0.7, mean_p: -0.2 }))
                .collect();
            let mut st =
                GaussianState::from_preparations(cloner.circuit.mode_count(), &preps).unwrap();
            st.run(&cloner.circuit).unwrap();
            let expect = 0.5 + added_variance(n, m).unwrap();
            for &c in &cloner.clone_modes {
                assert!(
                    (st.var_x(c) - expect).abs() < 1e-12,
                    "N={n} M={m} clone {c}: {} vs {expect}",
                    st.var_x(c)
                );
                assert!((st.var_p(c) - expect).abs() < 1e-12);
                assert!((st.mean_x(c) - 0.7).abs() < 1e-12);
                assert!((st.mean_p(c) + 0.2).abs() < 1e-12);
            }
        }
        assert!(build_nm_circuit(3, 2).is_err());
    }

    #[test]
    fn asymmetric_circuit_realizes_target_variances() {
        for (chi, lambda) in [
            (1.0, 1.0),
            (0.5, 1.0),
            (2.0, 1.0),
            (0.8, 1.6),
            (1.7, 0.4),
            (3.0, 2.5),
            (0.25, 0.3),
        ] {
            let cloner = build_asymmetric_12_circuit(chi, lambda).unwrap();
            let mut st = GaussianState::from_preparations(
                3,
                &[(0, Preparation::Coherent { mean_x: 1.0, mean_p: 2.0 })],
            )
            .unwrap();
            st.run(&cloner.circuit).unwrap();
            let v = asymmetric_variances(chi, lambda).unwrap();
            let (b, e) = (cloner.clone_modes[0], cloner.clone_modes[1]);
            assert!((st.mean_x(b) - 1.0).abs() < 1e-12, "chi={chi} lambda={lambda}");
            assert!((st.mean_p(b) - 2.0).abs() < 1e-12);
            assert!((st.mean_x(e) - 1.0).abs() < 1e-12);
            assert!((st.mean_p(e) - 2.0).abs() < 1e-12);
            assert!(
                (st.var_x(b) - 0.5 - v.bob_x).abs() < 1e-12,
                "chi={chi} lambda={lambda}: var_x(B) {} vs {}",
                st.var_x(b),
                0.5 + v.bob_x
            );
            assert!((st.var_p(b) - 0.5 - v.bob_p).abs() < 1e-12);
            assert!((st.var_x(e) - 0.5 - v.eve_x).abs() < 1e-12);
            assert!((st.var_p(e) - 0.5 - v.eve_p).abs() < 1e-12);
        }
    }

    #[test]
    fn joint_measurement_saturates_bound_for_optimal_cloner() {
        let cloner = build_12_circuit();
        let jm = joint_measurement_check(&cloner, 0.9, -0.3, 400_000, 17).unwrap();
        assert!((jm.sigma2_x - 1.0).abs() < 0.02);
        assert!((jm.sigma2_p - 1.0).abs() < 0.02);
        assert!((jm.product - 1.0).abs() < 0.03);
    }

    #[test]
    fn joint_measurement_product_exceeds_one_for_suboptimal() {
        // Inject extra x-noise on clone 0 and p-noise on clone 1 through
        // squeezed vacuum ancillas and sum gates.
        let base = build_12_circuit();
        let mut circuit = Circuit::new(5);
        for e in base.circuit.elements() {
            circuit.push(e.clone()).unwrap();
        }
        let s = 1.4;
        circuit
            .push(GaussianElement::Squeezer { mode: 3, factor: s })
            .unwrap();
        circuit
            .push(GaussianElement::SumGate { control: 3, target: 0, sign: 1.0 })
            .unwrap();
        circuit
            .push(GaussianElement::Squeezer { mode: 4, factor: 1.0 / s })
            .unwrap();
        circuit
            .push(GaussianElement::SumGate { control: 1, target: 4, sign: 1.0 })
            .unwrap();
        let noisy = ClonerCircuit {
            circuit,
            input_modes: vec![0],
            clone_modes: vec![0, 1],
            anticlone_modes: vec![2],
        };
        let jm = joint_measurement_check(&noisy, 0.2, 0.5, 200_000, 3).unwrap();
        assert!(jm.product > 1.5, "product {}", jm.product);

        // Randomized asymmetric cloners never dip below the bound.
        for (i, (chi, lambda)) in [(0.6, 1.9), (1.4, 0.7), (2.3, 2.0), (0.4, 0.5)]
            .iter()
            .enumerate()
        {
            let c = build_asymmetric_12_circuit(*chi, *lambda).unwrap();
            let jm = joint_measurement_check(&c, 0.0, 0.0, 150_000, 100 + i as u64).unwrap();
            assert!(jm.product > 1.0 - 0.02, "chi={chi} lambda={lambda}: {}", jm.product);
        }
    }

    #[test]
    fn mc_fidelity_of_fig1_converges() {
        let cloner = build_12_circuit();
        let stats = mc_clone_stats(&cloner, 1.5, -0.8, 500_000, 23).unwrap();
        for s in &stats {
            assert!((s.fidelity - 2.0 / 3.0).abs() < 0.004, "{}", s.fidelity);
            assert!((s.added_variance_x - 0.5).abs() < 0.01);
            assert!((s.added_variance_p - 0.5).abs() < 0.01);
        }
    }
}
