//! Momentum grid and single-particle spectral functions of the vortex-free
//! sector, plus the gapless/gapped phase classification.
//!
//! On the torus with L unit cells per direction, allowed momenta are
//! q = 2πn/L with n running over L consecutive values
//! −(L−1)/2, −(L−1)/2 + 1, …, (L−1)/2. For odd L these are integers; for
//! even L they are half-integers (an antiperiodic sector), which keeps the
//! spectrum away from exact zeros for generic couplings.
//!
//! The spectral functions are
//!   ε(q) = Jx cos qx + Jy cos qy + Jz,
//!   Δ(q) = Jx sin qx + Jy sin qy,
//!   E(q) = sqrt(ε² + Δ²),
//! the energy gap is 2 min_q E(q), and the ground energy is −Σ_q E(q).

use std::f64::consts::PI;

use serde::Serialize;

use crate::sum::pairwise_map_sum;
use crate::{Error, Result};

/// The three bond strengths of the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Couplings {
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
}

impl Couplings {
    /// Validating constructor: components must be finite and not all zero.
    pub fn new(jx: f64, jy: f64, jz: f64) -> Result<Self> {
        if !(jx.is_finite() && jy.is_finite() && jz.is_finite())
            || (jx == 0.0 && jy == 0.0 && jz == 0.0)
        {
            return Err(Error::InvalidCouplings { jx, jy, jz });
        }
        Ok(Self { jx, jy, jz })
    }

    /// Rescale so that jx + jy + jz = 1. All spectral energies scale by the
    /// same positive factor, so phase structure is unchanged.
    pub fn normalized(&self) -> Result<Self> {
        let s = self.jx + self.jy + self.jz;
        // Negated form also rejects NaN sums.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(s > 0.0) {
            return Err(Error::NonPositiveSum(s));
        }
        Ok(Self {
            jx: self.jx / s,
            jy: self.jy / s,
            jz: self.jz / s,
        })
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            jx: c * self.jx,
            jy: c * self.jy,
            jz: c * self.jz,
        }
    }
}

/// Number of unit cells per torus direction; the lattice has 2L² sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LatticeSize(usize);

impl LatticeSize {
    pub fn new(l: usize) -> Result<Self> {
        if l < 2 {
            return Err(Error::LatticeTooSmall(l));
        }
        Ok(Self(l))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// Number of grid momenta, L².
    #[inline]
    pub fn modes(self) -> usize {
        self.0 * self.0
    }
}

/// One point of the momentum grid, components in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Momentum {
    pub qx: f64,
    pub qy: f64,
}

/// ε, Δ and E = sqrt(ε² + Δ²) at one momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub eps: f64,
    pub delta: f64,
    pub e: f64,
}

/// Ground-state phase: the gapless B region bounded by the triangle
/// inequalities, or one of the three gapped A regions named after the
/// dominant coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Phase {
    GaplessB,
    GappedAx,
    GappedAy,
    GappedAz,
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Phase::GaplessB => "GaplessB",
            Phase::GappedAx => "GappedAx",
            Phase::GappedAy => "GappedAy",
            Phase::GappedAz => "GappedAz",
        };
        f.write_str(s)
    }
}

/// q-component for grid index k in 0..L: q = π(2k − (L−1))/L.
///
/// The numerator is an exact integer, so the same (k, L) always yields the
/// same bits and q(−n) is exactly −q(n).
#[inline]
pub fn grid_component(k: usize, l: usize) -> f64 {
    let num = 2 * k as i64 - (l as i64 - 1);
    PI * num as f64 / l as f64
}

/// The full L² momentum grid in row-major order over (n_x, n_y), ascending.
pub fn momentum_grid(l: LatticeSize) -> Vec<Momentum> {
    let n = l.get();
    let per_axis: Vec<f64> = (0..n).map(|k| grid_component(k, n)).collect();
    let mut grid = Vec::with_capacity(n * n);
    for &qx in &per_axis {
        for &qy in &per_axis {
            grid.push(Momentum { qx, qy });
        }
    }
    grid
}

/// Evaluate ε, Δ, E at one momentum.
pub fn spectral_point(q: Momentum, j: &Couplings) -> SpectralPoint {
    let eps = j.jx * q.qx.cos() + j.jy * q.qy.cos() + j.jz;
    let delta = j.jx * q.qx.sin() + j.jy * q.qy.sin();
    SpectralPoint {
        eps,
        delta,
        e: eps.hypot(delta),
    }
}

#[inline]
pub(crate) fn spectral_at(kx: usize, ky: usize, l: usize, j: &Couplings) -> SpectralPoint {
    spectral_point(
        Momentum {
            qx: grid_component(kx, l),
            qy: grid_component(ky, l),
        },
        j,
    )
}

/// Energy gap 2 min_q E(q) over the grid.
pub fn energy_gap(j: &Couplings, l: LatticeSize) -> f64 {
    let n = l.get();
    let mut min_e = f64::INFINITY;
    for kx in 0..n {
        for ky in 0..n {
            let e = spectral_at(kx, ky, n, j).e;
            if e < min_e {
                min_e = e;
            }
        }
    }
    2.0 * min_e
}

/// Ground energy −Σ_q E(q): every quasiparticle mode occupied.
pub fn ground_energy(j: &Couplings, l: LatticeSize) -> f64 {
    let n = l.get();
    -pairwise_map_sum(n * n, &|i| spectral_at(i / n, i % n, n, j).e)
}

/// Phase classification from the triangle inequalities on |Jα|.
///
/// Boundary points (equalities) classify as the gapless B phase.
pub fn classify_phase(j: &Couplings) -> Result<Phase> {
    let (ax, ay, az) = (j.jx.abs(), j.jy.abs(), j.jz.abs());
    if ax == 0.0 && ay == 0.0 && az == 0.0 {
        return Err(Error::InvalidCouplings {
            jx: j.jx,
            jy: j.jy,
            jz: j.jz,
        });
    }
    if ax > ay + az {
        Ok(Phase::GappedAx)
    } else if ay > ax + az {
        Ok(Phase::GappedAy)
    } else if az > ax + ay {
        Ok(Phase::GappedAz)
    } else {
        Ok(Phase::GaplessB)
    }
}

/// Couplings on the symmetric line Jx = Jy = (1−Jz)/2, which crosses the
/// B→Az transition at jz = 0.5.
pub fn line_point(jz: f64) -> Result<Couplings> {
    if !(0.0..=1.0).contains(&jz) || jz.is_nan() {
        return Err(Error::JzOutOfRange(jz));
    }
    let jxy = (1.0 - jz) / 2.0;
    Ok(Couplings {
        jx: jxy,
        jy: jxy,
        jz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn size(l: usize) -> LatticeSize {
        LatticeSize::new(l).unwrap()
    }

    #[test]
    fn grid_l3_is_integer_momenta() {
        let g = momentum_grid(size(3));
        assert_eq!(g.len(), 9);
        let axis: Vec<f64> = (0..3).map(|k| grid_component(k, 3)).collect();
        let want = [-2.0 * PI / 3.0, 0.0, 2.0 * PI / 3.0];
        for (a, w) in axis.iter().zip(want) {
            assert!((a - w).abs() < 1e-15, "axis {a} vs {w}");
        }
    }

    #[test]
    fn grid_l2_is_half_integer_momenta() {
        let axis: Vec<f64> = (0..2).map(|k| grid_component(k, 2)).collect();
        assert_eq!(axis, vec![-PI / 2.0, PI / 2.0]);
    }

    #[test]
    fn grid_l4_closed_under_reflection() {
        // n ∈ {−3/2, −1/2, 1/2, 3/2}; the map n ↦ (L/2 − n) mod L permutes it.
        let l = 4i64;
        let ns: Vec<f64> = (0..4).map(|k| (2 * k - 3) as f64 / 2.0).collect();
        for &n in &ns {
            let mut m = l as f64 / 2.0 - n;
            while m > (l as f64 - 1.0) / 2.0 {
                m -= l as f64;
            }
            assert!(
                ns.iter().any(|&x| (x - m).abs() < 1e-12),
                "image {m} of n={n} not on grid"
            );
        }
    }

    #[test]
    fn spectral_point_symmetric_coupling_at_origin() {
        let j = Couplings::new(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0).unwrap();
        let p = spectral_point(Momentum { qx: 0.0, qy: 0.0 }, &j);
        assert!((p.eps - 1.0).abs() < 1e-15);
        assert_eq!(p.delta, 0.0);
        assert!((p.e - 1.0).abs() < 1e-15);
    }

    #[test]
    fn spectral_point_dimer_coupling_is_flat() {
        let j = Couplings::new(0.0, 0.0, 1.0).unwrap();
        for q in momentum_grid(size(5)) {
            let p = spectral_point(q, &j);
            assert_eq!((p.eps, p.delta, p.e), (1.0, 0.0, 1.0));
        }
    }

    #[test]
    fn spectral_point_hand_evaluated() {
        let j = Couplings::new(0.25, 0.25, 0.5).unwrap();
        let p = spectral_point(
            Momentum {
                qx: PI / 2.0,
                qy: PI / 2.0,
            },
            &j,
        );
        assert!((p.eps - 0.5).abs() < 1e-15);
        assert!((p.delta - 0.5).abs() < 1e-15);
        assert!((p.e - 0.5 * 2.0_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn gap_at_dimer_point_is_two() {
        let j = Couplings::new(0.0, 0.0, 1.0).unwrap();
        assert_eq!(energy_gap(&j, size(7)), 2.0);
        assert_eq!(energy_gap(&j, size(10)), 2.0);
    }

    #[test]
    fn gap_at_critical_point_is_small_positive() {
        let j = line_point(0.5).unwrap();
        let g = energy_gap(&j, size(100));
        assert!(g > 0.0);
        assert!((g - 4.934_396_342_684e-4).abs() < 1e-15, "gap {g}");
    }

    #[test]
    fn gap_closes_with_size_in_b_phase() {
        let j = Couplings::new(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0).unwrap();
        // Sizes divisible by 3 put the Dirac node exactly on the grid, so
        // the gap is already zero there; away from those the gap decays
        // like 1/L with commensuration wobble, not monotonically.
        for l in [21, 81] {
            assert!(energy_gap(&j, size(l)) < 1e-12);
        }
        let gaps: Vec<f64> = [11, 41, 95].iter().map(|&l| energy_gap(&j, size(l))).collect();
        assert!(gaps[1] < gaps[0] && gaps[2] < gaps[1], "gaps: {gaps:?}");
        assert!(gaps[2] < 0.03);
    }

    #[test]
    fn gap_converges_to_constant_in_gapped_phase() {
        // Deep in the Az region the gap limit is 2(|Jz| − |Jx| − |Jy|).
        let j = Couplings::new(0.1, 0.1, 0.8).unwrap();
        let limit = 2.0 * (0.8 - 0.2);
        let mut prev = f64::INFINITY;
        for l in [10, 20, 40, 80] {
            let g = energy_gap(&j, size(l));
            let dist = (g - limit).abs();
            assert!(dist < prev + 1e-15, "not converging at L={l}: {g}");
            prev = dist;
        }
        assert!(prev < 1e-3, "distance to limit {prev}");
    }

    #[test]
    fn ground_energy_dimer_point() {
        let j = Couplings::new(0.0, 0.0, 1.0).unwrap();
        assert_eq!(ground_energy(&j, size(6)), -36.0);
        let j2 = Couplings::new(0.0, 0.0, 2.0).unwrap();
        assert_eq!(ground_energy(&j2, size(6)), -72.0);
    }

    #[test]
    fn ground_energy_frozen_value_l4() {
        let j = Couplings::new(0.25, 0.25, 0.5).unwrap();
        let e = ground_energy(&j, size(4));
        assert!((e - (-9.062_615_672_535_932)).abs() < 1e-13, "E = {e}");
    }

    #[test]
    fn classify_phase_examples() {
        let b = Couplings::new(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0).unwrap();
        assert_eq!(classify_phase(&b).unwrap(), Phase::GaplessB);
        let az = Couplings::new(0.1, 0.1, 0.8).unwrap();
        assert_eq!(classify_phase(&az).unwrap(), Phase::GappedAz);
        let ax = Couplings::new(1.0, 0.0, 0.0).unwrap();
        assert_eq!(classify_phase(&ax).unwrap(), Phase::GappedAx);
        // Boundary point classifies as B.
        let edge = Couplings::new(0.25, 0.25, 0.5).unwrap();
        assert_eq!(classify_phase(&edge).unwrap(), Phase::GaplessB);
    }

    #[test]
    fn classify_phase_rejects_all_zero() {
        let j = Couplings {
            jx: 0.0,
            jy: 0.0,
            jz: 0.0,
        };
        assert!(classify_phase(&j).is_err());
    }

    #[test]
    fn line_point_examples() {
        let c = line_point(0.5).unwrap();
        assert_eq!((c.jx, c.jy, c.jz), (0.25, 0.25, 0.5));
        let d = line_point(1.0).unwrap();
        assert_eq!((d.jx, d.jy, d.jz), (0.0, 0.0, 1.0));
        let e = line_point(0.0).unwrap();
        assert_eq!((e.jx, e.jy, e.jz), (0.5, 0.5, 0.0));
        assert!(line_point(-0.1).is_err());
        assert!(line_point(1.1).is_err());
    }

    #[test]
    fn couplings_validation() {
        assert!(Couplings::new(0.0, 0.0, 0.0).is_err());
        assert!(Couplings::new(f64::NAN, 0.0, 1.0).is_err());
        assert!(Couplings::new(-1.0, 2.0, 0.5).is_ok());
        assert!(Couplings::new(1.0, -1.0, 0.0).unwrap().normalized().is_err());
    }

    proptest! {
        #[test]
        fn grid_closed_under_negation_with_exact_symmetry(l in 2usize..12, seed in 0usize..64) {
            let n = l;
            let j = Couplings::new(
                0.1 + (seed % 8) as f64 / 8.0,
                0.2 + (seed / 8) as f64 / 8.0,
                0.3,
            ).unwrap();
            for kx in 0..n {
                for ky in 0..n {
                    // −n is on the grid at mirrored index.
                    let (mx, my) = (n - 1 - kx, n - 1 - ky);
                    let p = spectral_at(kx, ky, n, &j);
                    let m = spectral_at(mx, my, n, &j);
                    prop_assert_eq!(p.eps, m.eps);
                    prop_assert_eq!(p.delta, -m.delta);
                    prop_assert_eq!(p.e, m.e);
                }
            }
        }

        #[test]
        fn odd_sum_vanishes_when_gapped(seed in 0u64..200) {
            // Σ_q Δ(q)/E(q) cancels in ±q pairs.
            let l = 3 + (seed % 14) as usize;
            let j = Couplings::new(
                0.05 + (seed % 10) as f64 * 0.05,
                0.05 + (seed / 10 % 10) as f64 * 0.05,
                0.1 + (seed / 100) as f64 * 0.3,
            ).unwrap();
            let n = l;
            let mut min_e = f64::INFINITY;
            for kx in 0..n {
                for ky in 0..n {
                    min_e = min_e.min(spectral_at(kx, ky, n, &j).e);
                }
            }
            prop_assume!(min_e > 1e-6);
            let s = pairwise_map_sum(n * n, &|i| {
                let p = spectral_at(i / n, i % n, n, &j);
                p.delta / p.e
            });
            prop_assert!(s.abs() < 1e-12 * (n * n) as f64, "sum {}", s);
        }

        #[test]
        fn ground_energy_scales_linearly(c in 0.1f64..10.0) {
            let j = Couplings::new(0.3, 0.25, 0.45).unwrap();
            let l = LatticeSize::new(6).unwrap();
            let a = ground_energy(&j.scaled(c), l);
            let b = c * ground_energy(&j, l);
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }

        #[test]
        fn classification_invariant_under_rescaling_and_permutation(
            jx in 0.01f64..1.0, jy in 0.01f64..1.0, jz in 0.01f64..1.0, c in 0.1f64..50.0
        ) {
            let j = Couplings::new(jx, jy, jz).unwrap();
            let p = classify_phase(&j).unwrap();
            prop_assert_eq!(classify_phase(&j.scaled(c)).unwrap(), p);
            // Swap x and y consistently.
            let swapped = Couplings::new(jy, jx, jz).unwrap();
            let q = classify_phase(&swapped).unwrap();
            let expect = match p {
                Phase::GappedAx => Phase::GappedAy,
                Phase::GappedAy => Phase::GappedAx,
                other => other,
            };
            prop_assert_eq!(q, expect);
        }
    }
}
