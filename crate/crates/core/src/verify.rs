//! Numeric verification: eigen-equation residuals, stationarity of the site
//! distribution under evolution, truncated generating-function identities
//! with explicit geometric tail bounds, and Cesàro time averages.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::lattice::{phi, step, CoinConfig, Measure, WaveWindow};
use crate::scalar::Real;
use crate::spectral::{rhs_minus, rhs_plus, system_matrix, EigenParams};

/// Sup over the post-step valid interior of the per-site ℓ² defect
/// ‖(UΨ)(x) − λΨ(x)‖.
pub fn eigen_residual<T: Real>(
    psi: &WaveWindow<T>,
    lambda: Complex<T>,
    config: &CoinConfig<T>,
) -> Result<T> {
    let stepped = step(psi, config)?;
    let mut worst = T::zero();
    for x in stepped.valid_lo()..=stepped.valid_hi() {
        let d = stepped.get(x).sub(&psi.get(x).scaled(lambda));
        worst = worst.max(d.norm_sqr().sqrt());
    }
    Ok(worst)
}

/// Max over `steps` applications of the walk of the sup-norm drift of φ on
/// the surviving valid interior, relative to φ of the input state. A window
/// too small to survive all steps is an error; size it so the interior never
/// empties.
pub fn stationarity_deviation<T: Real>(
    psi: &WaveWindow<T>,
    steps: usize,
    config: &CoinConfig<T>,
) -> Result<T> {
    let base = phi(psi);
    let mut cur = psi.clone();
    let mut worst = T::zero();
    for _ in 0..steps {
        cur = step(&cur, config)?;
        let p = phi(&cur);
        for x in cur.valid_lo()..=cur.valid_hi() {
            worst = worst.max((p.get(x) - base.get(x)).abs());
        }
    }
    Ok(worst)
}

/// Which half-line a generating function sums over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// f₊(z) = Σ_{x≥1} Ψ(x)·zˣ, convergent for small |z|.
    Plus,
    /// f₋(z) = Σ_{x≤−1} Ψ(x)·zˣ, convergent for large |z|.
    Minus,
}

/// Component-wise truncation of the half-line generating function, summing
/// the first `x_max` sites of the chosen tail.
pub fn truncated_gen_fun<T: Real>(
    psi: &WaveWindow<T>,
    side: Side,
    z: Complex<T>,
    x_max: usize,
) -> Result<[Complex<T>; 3]> {
    if z.norm() == T::zero() {
        return Err(Error::Domain("transfer variable z must be nonzero"));
    }
    let reach = x_max as i64;
    if reach > psi.x_max() || -reach < psi.x_min() {
        return Err(Error::Domain("window shorter than requested truncation"));
    }
    let zero = Complex::new(T::zero(), T::zero());
    let mut f = [zero; 3];
    let mut w = Complex::new(T::one(), T::zero());
    for x in 1..=reach {
        match side {
            Side::Plus => w *= z,
            Side::Minus => w /= z,
        }
        let a = match side {
            Side::Plus => psi.get(x),
            Side::Minus => psi.get(-x),
        };
        f[0] += a.l * w;
        f[1] += a.o * w;
        f[2] += a.r * w;
    }
    Ok(f)
}

/// Residual of the transfer identity A·f± = a± for the truncated series,
/// minus the rigorous bound ‖A‖∞·(geometric tail of the dropped terms).
/// A non-positive (or round-off small) gap certifies the identity at this z.
/// The tail rate is estimated from the window's own last two sites; a rate
/// at or above 1 cannot be summed and is reported as divergent.
pub fn series_gap<T: Real>(
    psi: &WaveWindow<T>,
    params: &EigenParams<T>,
    side: Side,
    z: Complex<T>,
    x_max: usize,
) -> Result<T> {
    if x_max < 2 {
        return Err(Error::Domain("tail bound needs at least two summed sites"));
    }
    let f = truncated_gen_fun(psi, side, z, x_max)?;
    let a = system_matrix(params.lambda, z)?;
    let b = match side {
        Side::Plus => rhs_plus(params, z),
        Side::Minus => rhs_minus(params, z)?,
    };
    let mut residual = T::zero();
    let mut row_norm = T::zero();
    for i in 0..3 {
        let lhs = a[i][0] * f[0] + a[i][1] * f[1] + a[i][2] * f[2];
        residual = residual.max((lhs - b[i]).norm());
        let rsum = a[i][0].norm() + a[i][1].norm() + a[i][2].norm();
        row_norm = row_norm.max(rsum);
    }

    let w = match side {
        Side::Plus => z.norm(),
        Side::Minus => z.norm().recip(),
    };
    let site = |x: usize| -> T {
        let amp = match side {
            Side::Plus => psi.get(x as i64),
            Side::Minus => psi.get(-(x as i64)),
        };
        amp.l.norm().max(amp.o.norm()).max(amp.r.norm())
    };
    let t_prev = site(x_max - 1) * w.powi(x_max as i32 - 1);
    let t_last = site(x_max) * w.powi(x_max as i32);
    let tail = if t_last == T::zero() {
        T::zero()
    } else if t_prev == T::zero() {
        return Err(Error::Domain("tail magnitudes are not geometric"));
    } else {
        let r = t_last / t_prev;
        if r >= T::one() {
            return Err(Error::TailDivergent {
                rate: num_traits::ToPrimitive::to_f64(&r).unwrap_or(f64::NAN),
            });
        }
        t_last * r / (T::one() - r)
    };
    Ok(residual - row_norm * tail)
}

/// Cesàro average (1/N)·Σ_{n=1..N} φ(Ψₙ) over the final surviving interior.
pub fn time_averaged_measure<T: Real>(
    psi0: &WaveWindow<T>,
    steps: usize,
    config: &CoinConfig<T>,
) -> Result<Measure<T>> {
    if steps == 0 {
        return Err(Error::Domain("time average needs at least one step"));
    }
    let lo = psi0.valid_lo() + steps as i64;
    let hi = psi0.valid_hi() - steps as i64;
    if hi < lo {
        return Err(Error::WindowExhausted { step: steps });
    }
    let mut acc = vec![T::zero(); (hi - lo + 1) as usize];
    let mut cur = psi0.clone();
    for _ in 0..steps {
        cur = step(&cur, config)?;
        let p = phi(&cur);
        for (i, x) in (lo..=hi).enumerate() {
            acc[i] += p.get(x);
        }
    }
    let n = T::of(steps as f64);
    for v in &mut acc {
        *v /= n;
    }
    Ok(Measure::new(lo, acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ChiralityAmplitude;
    use crate::spectral::{decay_ratios, defect_eigenvalue_pair, geometric_eigenvector};
    use crate::C64;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn decaying_solution(theta: f64) -> (CoinConfig<f64>, EigenParams<f64>, WaveWindow<f64>) {
        let config = CoinConfig::new(theta).unwrap();
        let (lp, lm) = defect_eigenvalue_pair(&config).unwrap();
        let seed = ChiralityAmplitude::new(c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0));
        for lam in [lp, lm] {
            let params = EigenParams::new(lam, seed, &config).unwrap();
            let ratios = decay_ratios(&params);
            if let Some(r) = ratios.common(1e-8) {
                if r.norm() <= 1.0 {
                    let psi = geometric_eigenvector(&params, 128).unwrap();
                    return (config, params, psi);
                }
            }
        }
        panic!("no decaying branch at theta={theta}");
    }

    #[test]
    fn eigen_residual_small_for_eigenvector_large_for_random() {
        let (config, params, psi) = decaying_solution(2.0);
        let res = eigen_residual(&psi, params.lambda, &config).unwrap();
        assert!(res < 1e-12, "residual {res:.2e}");

        let bump = WaveWindow::localized(
            16,
            ChiralityAmplitude::new(c(0.3, 0.0), c(0.0, 0.4), c(0.5, 0.0)),
        );
        let res = eigen_residual(&bump, params.lambda, &config).unwrap();
        assert!(res > 1e-2);
    }

    #[test]
    fn stationarity_holds_for_eigenvector() {
        let (config, _, psi) = decaying_solution(1.8);
        let dev = stationarity_deviation(&psi, 50, &config).unwrap();
        assert!(dev < 1e-10, "deviation {dev:.2e}");
    }

    #[test]
    fn stationarity_fails_for_generic_state() {
        let config = CoinConfig::new(1.8).unwrap();
        let psi = WaveWindow::localized(80, ChiralityAmplitude::from_re(0.0, 1.0, 0.0));
        let dev = stationarity_deviation(&psi, 10, &config).unwrap();
        assert!(dev > 0.1);
    }

    #[test]
    fn series_gap_is_nonpositive_on_both_sides() {
        let (_, params, psi) = decaying_solution(2.6);
        for (side, z) in [
            (Side::Plus, c(0.35, 0.2)),
            (Side::Plus, c(-0.5, 0.1)),
            (Side::Minus, c(1.9, -0.4)),
            (Side::Minus, c(-3.0, 0.0)),
        ] {
            let gap = series_gap(&psi, &params, side, z, 120).unwrap();
            assert!(gap <= 1e-12, "gap {gap:.2e} at z={z} side={side:?}");
        }
    }

    #[test]
    fn series_gap_flags_divergent_tail() {
        let (_, params, psi) = decaying_solution(2.6);
        // |z| too large on the plus side: terms grow geometrically.
        let err = series_gap(&psi, &params, Side::Plus, c(12.0, 0.0), 120).unwrap_err();
        assert!(matches!(err, Error::TailDivergent { .. }));
    }

    #[test]
    fn truncation_respects_window() {
        let (_, _, psi) = decaying_solution(2.6);
        assert!(truncated_gen_fun(&psi, Side::Plus, c(0.3, 0.0), 400).is_err());
        assert!(truncated_gen_fun(&psi, Side::Plus, c(0.0, 0.0), 10).is_err());
    }

    #[test]
    fn time_average_of_stationary_state_is_its_measure() {
        let (config, _, psi) = decaying_solution(2.0);
        let avg = time_averaged_measure(&psi, 20, &config).unwrap();
        let mu = phi(&psi);
        let mut worst = 0.0f64;
        for x in avg.x_min()..=avg.x_max() {
            worst = worst.max((avg.get(x) - mu.get(x)).abs());
        }
        assert!(worst < 1e-12, "drift {worst:.2e}");
    }

    #[test]
    fn time_average_window_accounting() {
        let psi = WaveWindow::<f64>::localized(4, ChiralityAmplitude::from_re(1.0, 0.0, 0.0));
        let config = CoinConfig::homogeneous();
        assert!(time_averaged_measure(&psi, 0, &config).is_err());
        assert!(time_averaged_measure(&psi, 5, &config).is_err());
        let avg = time_averaged_measure(&psi, 2, &config).unwrap();
        assert_eq!(avg.x_min(), -2);
        assert_eq!(avg.x_max(), 2);
    }
}
