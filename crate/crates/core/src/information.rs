//! Reduced density matrices of one and two z-bonds, entropies, and mutual
//! information.
//!
//! Both RDMs are diagonal in the computational basis. One bond carries
//! eigenvalues (1 ± c2)/4 twice each; two bonds carry
//!   (1 − c4)/16   with multiplicity 8,
//!   (1 − 2c2 + c4)/16 and (1 + 2c2 + c4)/16 with multiplicity 4 each,
//! where c2 = ⟨σᶻσᶻ⟩ and c4 = ⟨σᶻσᶻσᶻσᶻ⟩. Every single site reduces to I/2,
//! so mutual information needs no separate marginal bookkeeping.
//!
//! The two-bond mutual information vanishes quadratically in the connected
//! part c4c = c4 − c2². At large bond separation c4c is tiny (1e-6 .. 1e-13)
//! and the closed-form expression cancels to nothing in f64, so
//! [`mutual_info_two_bond_connected`] switches to a series in c4c below a
//! documented crossover.

use serde::Serialize;

use crate::{Error, Result};

const SLACK: f64 = 1e-12;
const LN2: f64 = std::f64::consts::LN_2;

/// Crossover for the connected-part series: below this |c4c| the closed
/// form has lost ~8 digits to cancellation while the cubic series is still
/// accurate to ~1e-8 relative, so the two paths overlap safely.
pub const CONNECTED_SERIES_CROSSOVER: f64 = 1e-4;

/// H(x) = −x log₂ x, the entropy contribution of one eigenvalue.
///
/// Exactly zero at x = 0 and x = 1; inputs within 1e−12 outside [0, 1] are
/// clamped (eigenvalues arrive from floating-point sums).
pub fn entropy_term(x: f64) -> Result<f64> {
    if !(-SLACK..=1.0 + SLACK).contains(&x) || x.is_nan() {
        return Err(Error::EntropyDomain(x));
    }
    let x = x.clamp(0.0, 1.0);
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.log2())
}

fn entropy_term_clamped(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    if x == 0.0 || x == 1.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// A density matrix that is diagonal in the computational basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalRdm {
    diagonal: Vec<f64>,
}

impl DiagonalRdm {
    /// Validates trace one and nonnegativity (entries within −1e−12 are
    /// clamped to zero, anything lower is rejected).
    pub fn new(diagonal: Vec<f64>) -> Result<Self> {
        let mut d = diagonal;
        for v in &mut d {
            if *v < -SLACK {
                return Err(Error::InvalidRdm(format!("negative eigenvalue {v}")));
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let trace: f64 = d.iter().sum();
        if (trace - 1.0).abs() > SLACK * d.len() as f64 {
            return Err(Error::InvalidRdm(format!("trace {trace} != 1")));
        }
        Ok(Self { diagonal: d })
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn trace(&self) -> f64 {
        self.diagonal.iter().sum()
    }

    /// Von Neumann entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        self.diagonal.iter().map(|&x| entropy_term_clamped(x)).sum()
    }
}

/// Eigenvalues with multiplicities of a diagonal RDM.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RdmSpectrum {
    pub entries: Vec<(f64, u32)>,
}

impl RdmSpectrum {
    pub fn trace(&self) -> f64 {
        self.entries.iter().map(|&(v, m)| v * m as f64).sum()
    }

    pub fn entropy_bits(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(v, m)| m as f64 * entropy_term_clamped(v))
            .sum()
    }
}

fn check_c2(c2: f64) -> Result<()> {
    if c2.abs() > 1.0 + SLACK || c2.is_nan() {
        return Err(Error::CorrelatorOutOfRange(c2));
    }
    Ok(())
}

/// Two-site RDM of one z-bond: diag(1+c2, 1−c2, 1−c2, 1+c2)/4.
pub fn two_site_rdm(c2: f64) -> Result<DiagonalRdm> {
    check_c2(c2)?;
    let p = (1.0 + c2) / 4.0;
    let m = (1.0 - c2) / 4.0;
    DiagonalRdm::new(vec![p, m, m, p])
}

/// Mutual information of the two sites of a z-bond, in bits.
///
/// Each single-site marginal is I/2, so S(i:j) = 2 − S(ij).
pub fn mutual_info_two_site(c2: f64) -> Result<f64> {
    check_c2(c2)?;
    let h = entropy_term_clamped((1.0 - c2) / 4.0) + entropy_term_clamped((1.0 + c2) / 4.0);
    Ok((2.0 - 2.0 * h).max(0.0))
}

fn two_bond_eigenvalues(c2: f64, c4: f64) -> Result<(f64, f64, f64)> {
    check_c2(c2)?;
    let p0 = (1.0 - c4) / 16.0;
    let pm = (1.0 - 2.0 * c2 + c4) / 16.0;
    let pp = (1.0 + 2.0 * c2 + c4) / 16.0;
    for &v in &[p0, pm, pp] {
        if v < -SLACK || v.is_nan() {
            return Err(Error::UnphysicalPair {
                c2,
                c4,
                eigenvalue: v,
            });
        }
    }
    Ok((p0.max(0.0), pm.max(0.0), pp.max(0.0)))
}

/// Eigenvalues of the two-bond RDM with their multiplicities (8, 4, 4).
pub fn two_bond_rdm_spectrum(c2: f64, c4: f64) -> Result<RdmSpectrum> {
    let (p0, pm, pp) = two_bond_eigenvalues(c2, c4)?;
    Ok(RdmSpectrum {
        entries: vec![(p0, 8), (pm, 4), (pp, 4)],
    })
}

/// The full 16-entry diagonal of the two-bond RDM in computational-basis
/// order |z₁z₂z₃z₄⟩ (bit 3 = first site of the first bond ... bit 0 = second
/// site of the second bond; 0 = spin up).
pub fn two_bond_rdm(c2: f64, c4: f64) -> Result<DiagonalRdm> {
    two_bond_eigenvalues(c2, c4)?;
    let mut diag = Vec::with_capacity(16);
    for b in 0..16u32 {
        let z = |bit: u32| 1.0 - 2.0 * ((b >> bit) & 1) as f64;
        let u = z(3) * z(2);
        let v = z(1) * z(0);
        diag.push((1.0 + c2 * (u + v) + c4 * u * v) / 16.0);
    }
    DiagonalRdm::new(diag)
}

/// Mutual information between two z-bonds, in bits.
pub fn mutual_info_two_bond(c2: f64, c4: f64) -> Result<f64> {
    let (p0, pm, pp) = two_bond_eigenvalues(c2, c4)?;
    let marginals = 4.0
        * (entropy_term_clamped((1.0 + c2) / 4.0) + entropy_term_clamped((1.0 - c2) / 4.0));
    let joint = 8.0 * entropy_term_clamped(p0)
        + 4.0 * entropy_term_clamped(pm)
        + 4.0 * entropy_term_clamped(pp);
    Ok((marginals - joint).max(0.0))
}

/// Series in t = c4c around the product point c4 = c2², to cubic order.
///
/// The linear term vanishes identically (the RDM factorizes at t = 0), so
/// the expansion starts at t².
fn mutual_info_two_bond_series(c2: f64, t: f64) -> f64 {
    let u = 1.0 - c2;
    let v = 1.0 + c2;
    let p0 = u * v / 16.0;
    let pm = u * u / 16.0;
    let pp = v * v / 16.0;
    let q2 = (8.0 / p0 + 4.0 / pm + 4.0 / pp) / (512.0 * LN2);
    let q3 = (8.0 / (p0 * p0) - 4.0 / (pm * pm) - 4.0 / (pp * pp)) / (24576.0 * LN2);
    t * t * q2 + t * t * t * q3
}

/// Two-bond mutual information parametrized by the connected correlator
/// c4c = c4 − c2², keeping relative accuracy when |c4c| is tiny.
///
/// Below [`CONNECTED_SERIES_CROSSOVER`] (and safely inside the physical
/// region) the cubic series is used; otherwise the closed form with
/// c4 = c2² + c4c. The two paths agree to better than 1e−9 absolute at the
/// crossover.
pub fn mutual_info_two_bond_connected(c2: f64, c4c: f64) -> Result<f64> {
    let c4 = c2 * c2 + c4c;
    let (p0, pm, pp) = two_bond_eigenvalues(c2, c4)?;
    if c4c == 0.0 {
        return Ok(0.0);
    }
    let min_p = p0.min(pm).min(pp);
    if c4c.abs() < CONNECTED_SERIES_CROSSOVER && min_p > 256.0 * c4c.abs() {
        Ok(mutual_info_two_bond_series(c2, c4c).max(0.0))
    } else {
        mutual_info_two_bond(c2, c4)
    }
}

/// Concurrence between the two sites of a z-bond. The RDM is diagonal, so
/// there is no two-site entanglement.
pub fn concurrence_two_site() -> f64 {
    0.0
}

/// Generalized concurrence of one subsystem against the rest,
/// c = sqrt(d/(d−1) · (1 − Tr ρ²)); equals 1 for a maximally mixed qubit.
pub fn concurrence_site_vs_rest(dim: usize, purity: f64) -> f64 {
    let d = dim as f64;
    (d / (d - 1.0) * (1.0 - purity)).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    #[test]
    fn entropy_term_examples() {
        assert_eq!(entropy_term(0.0).unwrap(), 0.0);
        assert_eq!(entropy_term(1.0).unwrap(), 0.0);
        assert_eq!(entropy_term(0.5).unwrap(), 0.5);
        assert_eq!(entropy_term(1.0 / 16.0).unwrap(), 0.25);
        assert!(entropy_term(-0.1).is_err());
        assert!(entropy_term(1.1).is_err());
        assert_eq!(entropy_term(-1e-13).unwrap(), 0.0);
    }

    #[test]
    fn two_site_rdm_examples() {
        assert_eq!(two_site_rdm(1.0).unwrap().diagonal(), &[0.5, 0.0, 0.0, 0.5]);
        assert_eq!(
            two_site_rdm(0.0).unwrap().diagonal(),
            &[0.25, 0.25, 0.25, 0.25]
        );
        assert_eq!(
            two_site_rdm(0.5).unwrap().diagonal(),
            &[0.375, 0.125, 0.125, 0.375]
        );
        assert!(two_site_rdm(1.5).is_err());
    }

    #[test]
    fn mutual_info_two_site_examples() {
        assert_eq!(mutual_info_two_site(0.0).unwrap(), 0.0);
        assert_eq!(mutual_info_two_site(1.0).unwrap(), 1.0);
        let v = mutual_info_two_site(0.5).unwrap();
        assert!((v - 0.18872187554086713).abs() < 1e-12, "{v}");
    }

    #[test]
    fn mutual_info_two_site_even_in_c2() {
        for i in 0..=20 {
            let c2 = i as f64 / 20.0;
            assert_eq!(
                mutual_info_two_site(c2).unwrap(),
                mutual_info_two_site(-c2).unwrap()
            );
        }
    }

    #[test]
    fn mutual_info_two_site_strictly_increasing_in_magnitude() {
        let mut prev = -1.0;
        for i in 0..=100 {
            let v = mutual_info_two_site(i as f64 / 100.0).unwrap();
            assert!(v > prev || (i == 0 && v == 0.0));
            prev = v;
        }
    }

    #[test]
    fn two_bond_spectrum_examples() {
        let s = two_bond_rdm_spectrum(0.0, 0.0).unwrap();
        assert_eq!(s.entries, vec![(1.0 / 16.0, 8), (1.0 / 16.0, 4), (1.0 / 16.0, 4)]);
        let s = two_bond_rdm_spectrum(1.0, 1.0).unwrap();
        assert_eq!(s.entries, vec![(0.0, 8), (0.0, 4), (0.25, 4)]);
        let s = two_bond_rdm_spectrum(0.6, 0.36).unwrap();
        let want = [(0.04, 8u32), (0.01, 4), (0.16, 4)];
        for ((v, m), (wv, wm)) in s.entries.iter().zip(want) {
            assert!((v - wv).abs() < 1e-15);
            assert_eq!(*m, wm);
        }
        assert!((s.trace() - 1.0).abs() < 1e-15);
        assert!(two_bond_rdm_spectrum(1.0, -0.5).is_err());
    }

    #[test]
    fn spectrum_matches_numeric_eigendecomposition() {
        for (c2, c4) in [(0.6, 0.36), (0.3, 0.2), (0.9, 0.82), (0.0, 0.0)] {
            let rdm = two_bond_rdm(c2, c4).unwrap();
            let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(rdm.diagonal().to_vec()));
            let eig = m.symmetric_eigenvalues();
            let mut numeric: Vec<f64> = eig.iter().copied().collect();
            numeric.sort_by(f64::total_cmp);
            let spectrum = two_bond_rdm_spectrum(c2, c4).unwrap();
            let mut closed: Vec<f64> = spectrum
                .entries
                .iter()
                .flat_map(|&(v, m)| std::iter::repeat_n(v, m as usize))
                .collect();
            closed.sort_by(f64::total_cmp);
            for (a, b) in numeric.iter().zip(&closed) {
                assert!((a - b).abs() < 1e-10, "{a} vs {b}");
            }
            assert!((rdm.entropy_bits() - spectrum.entropy_bits()).abs() < 1e-10);
        }
    }

    #[test]
    fn mutual_info_two_bond_examples() {
        assert_eq!(mutual_info_two_bond(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(mutual_info_two_bond(1.0, 1.0).unwrap(), 0.0);
        let v = mutual_info_two_bond(0.6, 0.36).unwrap();
        assert!(v.abs() < 1e-12, "uncorrelated bonds gave {v}");
    }

    #[test]
    fn connected_examples() {
        assert_eq!(mutual_info_two_bond_connected(0.7, 0.0).unwrap(), 0.0);
        // Frozen extended-precision value at c2 = 0.5, c4c = 1e-10.
        let v = mutual_info_two_bond_connected(0.5, 1e-10).unwrap();
        let want = 1.282395591825e-20;
        assert!((v - want).abs() < 1e-6 * want, "{v} vs {want}");
        // Exact and series paths agree at the crossover scale.
        let series = mutual_info_two_bond_series(0.5, 1e-3);
        let exact = mutual_info_two_bond(0.5, 0.25 + 1e-3).unwrap();
        assert!((series - exact).abs() < 1e-9, "series {series} exact {exact}");
    }

    #[test]
    fn connected_agrees_with_exact_across_crossover() {
        for &c2 in &[0.1, 0.5, 0.8] {
            for k in 0..=24 {
                let t = 1e-7 * 2f64.powi(k); // 1e-7 .. ~1.6
                let c4 = c2 * c2 + t;
                if c4 > 1.0 {
                    continue;
                }
                let conn = mutual_info_two_bond_connected(c2, t).unwrap();
                let exact = mutual_info_two_bond(c2, c4).unwrap();
                let tol = (1e-6 * conn).max(1e-12);
                assert!(
                    (conn - exact).abs() <= tol,
                    "c2={c2} t={t}: conn {conn} exact {exact}"
                );
            }
        }
    }

    #[test]
    fn concurrence_values() {
        assert_eq!(concurrence_two_site(), 0.0);
        assert_eq!(concurrence_site_vs_rest(2, 0.5), 1.0);
        assert_eq!(concurrence_site_vs_rest(2, 1.0), 0.0);
    }

    proptest! {
        #[test]
        fn nonnegative_on_physical_region(c2 in -1.0f64..1.0, s in 0.0f64..1.0) {
            // c4 ranges over [2|c2|−1, 1] for physical pairs.
            let lo = 2.0 * c2.abs() - 1.0;
            let c4 = lo + s * (1.0 - lo);
            let m2 = mutual_info_two_site(c2).unwrap();
            prop_assert!(m2 >= 0.0);
            let m4 = mutual_info_two_bond(c2, c4).unwrap();
            prop_assert!(m4 >= 0.0);
            prop_assert!(m4 <= 4.0 + 1e-9);
        }

        #[test]
        fn product_pairs_have_zero_mutual_information(c2 in -0.999f64..0.999) {
            let v = mutual_info_two_bond(c2, c2 * c2).unwrap();
            prop_assert!(v.abs() < 1e-11, "c2={} -> {}", c2, v);
        }

        #[test]
        fn spectrum_trace_is_one(c2 in -1.0f64..1.0, s in 0.0f64..1.0) {
            let lo = 2.0 * c2.abs() - 1.0;
            let c4 = lo + s * (1.0 - lo);
            let spectrum = two_bond_rdm_spectrum(c2, c4).unwrap();
            prop_assert!((spectrum.trace() - 1.0).abs() < 1e-12);
            let rdm = two_bond_rdm(c2, c4).unwrap();
            prop_assert!((rdm.trace() - 1.0).abs() < 1e-12);
        }
    }
}
