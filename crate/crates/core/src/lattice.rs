//! Truncated-lattice state representation and one-step evolution.
//!
//! A state lives on a finite window `[x_min, x_max]` of the integer line with
//! three complex amplitudes per site. Because the true lattice is infinite,
//! each evolution step is exact only on a shrinking interior: the window keeps
//! `valid_lo..=valid_hi` markers that move inward one site per step, and all
//! norm or measure statements are made on that interior only.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Amplitudes of the three chirality states (left, stay, right) at one site.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiralityAmplitude<T: Real> {
    pub l: Complex<T>,
    pub o: Complex<T>,
    pub r: Complex<T>,
}

impl<T: Real> ChiralityAmplitude<T> {
    pub fn new(l: Complex<T>, o: Complex<T>, r: Complex<T>) -> Self {
        Self { l, o, r }
    }

    /// All three amplitudes zero.
    pub fn zero() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self { l: z, o: z, r: z }
    }

    /// Builds from real components, a convenience for tests and seeds.
    pub fn from_re(l: T, o: T, r: T) -> Self {
        Self {
            l: Complex::new(l, T::zero()),
            o: Complex::new(o, T::zero()),
            r: Complex::new(r, T::zero()),
        }
    }

    /// |l|² + |o|² + |r|², the site's contribution to the measure.
    pub fn norm_sqr(&self) -> T {
        self.l.norm_sqr() + self.o.norm_sqr() + self.r.norm_sqr()
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        Self {
            l: self.l * c,
            o: self.o * c,
            r: self.r * c,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            l: self.l + other.l,
            o: self.o + other.o,
            r: self.r + other.r,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            l: self.l - other.l,
            o: self.o - other.o,
            r: self.r - other.r,
        }
    }

    pub fn is_finite(&self) -> bool {
        [self.l, self.o, self.r]
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// Defect phase θ together with ω = e^{iθ}. Yields the per-site coin.
#[derive(Clone, Copy, Debug)]
pub struct CoinConfig<T: Real> {
    theta: T,
    omega: Complex<T>,
}

impl<T: Real> CoinConfig<T> {
    /// A configuration with defect phase `theta` ∈ [0, 2π).
    pub fn new(theta: T) -> Result<Self> {
        let two_pi = T::PI() + T::PI();
        if !(theta.is_finite() && theta >= T::zero() && theta < two_pi) {
            return Err(Error::Parameter(format!(
                "theta must lie in [0, 2*pi), got {theta}"
            )));
        }
        Ok(Self {
            theta,
            omega: T::cis(theta),
        })
    }

    /// θ = 0: no defect, the space-homogeneous walk.
    pub fn homogeneous() -> Self {
        Self {
            theta: T::zero(),
            omega: Complex::new(T::one(), T::zero()),
        }
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn omega(&self) -> Complex<T> {
        self.omega
    }

    /// Errors when θ = 0; the defect eigenvalue formulas require ω ≠ 1.
    pub fn require_defect(&self) -> Result<()> {
        if self.theta == T::zero() {
            Err(Error::DegenerateDefect)
        } else {
            Ok(())
        }
    }
}

/// The Grover coin: (1/3)·[[−1,2,2],[2,−1,2],[2,2,−1]].
pub fn grover_coin<T: Real>() -> [[Complex<T>; 3]; 3] {
    let e = |v: f64| Complex::new(T::of(v / 3.0), T::zero());
    [
        [e(-1.0), e(2.0), e(2.0)],
        [e(2.0), e(-1.0), e(2.0)],
        [e(2.0), e(2.0), e(-1.0)],
    ]
}

/// Coin at site `x`: ω·U_G at the origin, U_G elsewhere.
pub fn coin_at<T: Real>(x: i64, config: &CoinConfig<T>) -> [[Complex<T>; 3]; 3] {
    let mut m = grover_coin::<T>();
    if x == 0 {
        for row in &mut m {
            for entry in row {
                *entry *= config.omega;
            }
        }
    }
    m
}

fn mat_vec<T: Real>(m: &[[Complex<T>; 3]; 3], v: &ChiralityAmplitude<T>) -> ChiralityAmplitude<T> {
    let apply = |row: &[Complex<T>; 3]| row[0] * v.l + row[1] * v.o + row[2] * v.r;
    ChiralityAmplitude::new(apply(&m[0]), apply(&m[1]), apply(&m[2]))
}

/// Amplitudes on `[x_min, x_max]` plus the interior on which evolution so far
/// is exact (untouched by window truncation).
#[derive(Clone, Debug)]
pub struct WaveWindow<T: Real> {
    x_min: i64,
    amps: Vec<ChiralityAmplitude<T>>,
    valid_lo: i64,
    valid_hi: i64,
}

impl<T: Real> WaveWindow<T> {
    /// Zero state; the whole window starts valid.
    pub fn zero(x_min: i64, x_max: i64) -> Self {
        assert!(x_min <= x_max, "window bounds out of order");
        let n = (x_max - x_min + 1) as usize;
        Self {
            x_min,
            amps: vec![ChiralityAmplitude::zero(); n],
            valid_lo: x_min,
            valid_hi: x_max,
        }
    }

    /// Fills `[-half_width, half_width]` from a site map.
    pub fn from_fn(
        half_width: i64,
        mut f: impl FnMut(i64) -> ChiralityAmplitude<T>,
    ) -> Self {
        assert!(half_width >= 0);
        let mut w = Self::zero(-half_width, half_width);
        for x in -half_width..=half_width {
            let a = f(x);
            w.set(x, a);
        }
        w
    }

    /// A state supported on the origin only.
    pub fn localized(half_width: i64, origin: ChiralityAmplitude<T>) -> Self {
        let mut w = Self::zero(-half_width, half_width);
        w.set(0, origin);
        w
    }

    pub fn x_min(&self) -> i64 {
        self.x_min
    }

    pub fn x_max(&self) -> i64 {
        self.x_min + self.amps.len() as i64 - 1
    }

    pub fn valid_lo(&self) -> i64 {
        self.valid_lo
    }

    pub fn valid_hi(&self) -> i64 {
        self.valid_hi
    }

    /// Amplitude at `x`; zero outside the window.
    pub fn get(&self, x: i64) -> ChiralityAmplitude<T> {
        if x < self.x_min || x > self.x_max() {
            ChiralityAmplitude::zero()
        } else {
            self.amps[(x - self.x_min) as usize]
        }
    }

    /// Overwrites the amplitude at `x`. Panics outside the window: writing
    /// outside the allocation is a caller bug, not a numeric condition.
    pub fn set(&mut self, x: i64, a: ChiralityAmplitude<T>) {
        assert!(
            x >= self.x_min && x <= self.x_max(),
            "site {x} outside window [{}, {}]",
            self.x_min,
            self.x_max()
        );
        let i = (x - self.x_min) as usize;
        self.amps[i] = a;
    }

    /// Sites of the valid interior with their amplitudes.
    pub fn iter_valid(&self) -> impl Iterator<Item = (i64, ChiralityAmplitude<T>)> + '_ {
        (self.valid_lo..=self.valid_hi).map(|x| (x, self.get(x)))
    }

    /// Σ over the valid interior of per-site squared norms.
    pub fn norm_sqr_valid(&self) -> T {
        self.iter_valid()
            .fold(T::zero(), |acc, (_, a)| acc + a.norm_sqr())
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        Self {
            x_min: self.x_min,
            amps: self.amps.iter().map(|a| a.scaled(c)).collect(),
            valid_lo: self.valid_lo,
            valid_hi: self.valid_hi,
        }
    }

    /// Pointwise sum; windows must coincide. The valid interior of the sum is
    /// the intersection of the operands' interiors.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.x_min != other.x_min || self.amps.len() != other.amps.len() {
            return Err(Error::Parameter(
                "cannot add states on different windows".into(),
            ));
        }
        Ok(Self {
            x_min: self.x_min,
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| a.add(b))
                .collect(),
            valid_lo: self.valid_lo.max(other.valid_lo),
            valid_hi: self.valid_hi.min(other.valid_hi),
        })
    }

    /// Largest amplitude deviation from `other` over the intersection of the
    /// valid interiors (Euclidean norm per site).
    pub fn max_site_distance(&self, other: &Self) -> T {
        let lo = self.valid_lo.max(other.valid_lo);
        let hi = self.valid_hi.min(other.valid_hi);
        let mut worst = T::zero();
        for x in lo..=hi {
            let d = self.get(x).sub(&other.get(x)).norm_sqr().sqrt();
            if d > worst {
                worst = d;
            }
        }
        worst
    }
}

/// One step of the walk: the new amplitude at `x` collects the left row of
/// the coined state at `x+1`, the stay row at `x`, and the right row at `x−1`.
/// The valid interior shrinks by one site on each side.
pub fn step<T: Real>(psi: &WaveWindow<T>, config: &CoinConfig<T>) -> Result<WaveWindow<T>> {
    step_counted(psi, config, 1)
}

fn step_counted<T: Real>(
    psi: &WaveWindow<T>,
    config: &CoinConfig<T>,
    step_index: usize,
) -> Result<WaveWindow<T>> {
    if psi.valid_hi - psi.valid_lo < 2 {
        return Err(Error::WindowExhausted { step: step_index });
    }
    let mut out = WaveWindow::zero(psi.x_min, psi.x_max());
    // Coin applied at the contributing site, including the defect at x = 0.
    let coined: Vec<ChiralityAmplitude<T>> = (psi.x_min..=psi.x_max())
        .map(|x| mat_vec(&coin_at(x, config), &psi.get(x)))
        .collect();
    let at = |x: i64| -> ChiralityAmplitude<T> {
        if x < psi.x_min || x > psi.x_max() {
            ChiralityAmplitude::zero()
        } else {
            coined[(x - psi.x_min) as usize]
        }
    };
    for x in psi.x_min..=psi.x_max() {
        let a = ChiralityAmplitude::new(at(x + 1).l, at(x).o, at(x - 1).r);
        out.set(x, a);
    }
    out.valid_lo = psi.valid_lo + 1;
    out.valid_hi = psi.valid_hi - 1;
    Ok(out)
}

/// `n`-fold composition of [`step`].
pub fn evolve<T: Real>(psi: &WaveWindow<T>, n: usize, config: &CoinConfig<T>) -> Result<WaveWindow<T>> {
    let mut cur = psi.clone();
    for k in 1..=n {
        cur = step_counted(&cur, config, k)?;
    }
    Ok(cur)
}

/// Nonnegative weights per site, the image of the measure map.
#[derive(Clone, Debug)]
pub struct Measure<T: Real> {
    x_min: i64,
    values: Vec<T>,
}

impl<T: Real> Measure<T> {
    /// Wraps raw values. Tiny negative round-off (within −1e−9 of zero,
    /// relative to the largest value) is clamped; anything more negative is a
    /// caller bug and panics.
    pub fn new(x_min: i64, values: Vec<T>) -> Self {
        let scale = values
            .iter()
            .fold(T::one(), |m, v| if v.abs() > m { v.abs() } else { m });
        let floor = -T::of(1e-9) * scale;
        let values = values
            .into_iter()
            .map(|v| {
                assert!(v.is_finite() && v >= floor, "measure value {v} is negative");
                if v < T::zero() {
                    T::zero()
                } else {
                    v
                }
            })
            .collect();
        Self { x_min, values }
    }

    pub fn x_min(&self) -> i64 {
        self.x_min
    }

    pub fn x_max(&self) -> i64 {
        self.x_min + self.values.len() as i64 - 1
    }

    /// Weight at `x`; zero outside the stored range.
    pub fn get(&self, x: i64) -> T {
        if x < self.x_min || x > self.x_max() {
            T::zero()
        } else {
            self.values[(x - self.x_min) as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, T)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.x_min + i as i64, v))
    }

    pub fn sum(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &v| a + v)
    }

    /// Restriction to `[lo, hi]` (clipped to the stored range).
    pub fn restricted(&self, lo: i64, hi: i64) -> Measure<T> {
        let lo = lo.max(self.x_min);
        let hi = hi.min(self.x_max());
        let values = (lo..=hi).map(|x| self.get(x)).collect();
        Measure { x_min: lo, values }
    }

    /// Largest pointwise gap |self − other| over `[lo, hi]`.
    pub fn max_abs_diff(&self, other: &Measure<T>, lo: i64, hi: i64) -> T {
        let mut worst = T::zero();
        for x in lo..=hi {
            let d = (self.get(x) - other.get(x)).abs();
            if d > worst {
                worst = d;
            }
        }
        worst
    }
}

/// The measure map φ: per-site squared-modulus sum over chiralities. The
/// measure inherits the full window range; interpret it on the valid interior.
pub fn phi<T: Real>(psi: &WaveWindow<T>) -> Measure<T> {
    let values = (psi.x_min()..=psi.x_max())
        .map(|x| psi.get(x).norm_sqr())
        .collect();
    Measure {
        x_min: psi.x_min(),
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn grover_rows_match_display() {
        let u = grover_coin::<f64>();
        assert_eq!(u[0][0], c(-1.0 / 3.0, 0.0));
        assert_eq!(u[0][1], c(2.0 / 3.0, 0.0));
        assert_eq!(u[2][2], c(-1.0 / 3.0, 0.0));
    }

    #[test]
    fn coin_is_unitary_and_defect_scales_origin() {
        let cfg = CoinConfig::new(std::f64::consts::PI).unwrap();
        // At θ=π the defect coin is −U_G.
        let m0 = coin_at(0, &cfg);
        let g = grover_coin::<f64>();
        for i in 0..3 {
            for j in 0..3 {
                assert_relative_eq!(m0[i][j].re, -g[i][j].re, epsilon = 1e-15);
                assert!(m0[i][j].im.abs() < 1e-15);
            }
        }
        assert_eq!(coin_at(1, &cfg)[0][0], g[0][0]);
        // Unitarity: rows orthonormal.
        for m in [coin_at(0, &cfg), coin_at(3, &cfg)] {
            for i in 0..3 {
                for j in 0..3 {
                    let dot = (0..3).map(|k| m[i][k] * m[j][k].conj()).sum::<C64>();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - c(expect, 0.0)).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn homogeneous_coin_is_site_independent() {
        let cfg = CoinConfig::<f64>::homogeneous();
        assert_eq!(coin_at(0, &cfg), coin_at(5, &cfg));
    }

    #[test]
    fn theta_range_is_enforced() {
        assert!(CoinConfig::new(-0.1f64).is_err());
        assert!(CoinConfig::new(7.0f64).is_err());
        assert!(CoinConfig::new(0.0f64).is_ok());
        assert!(CoinConfig::<f64>::homogeneous().require_defect().is_err());
    }

    #[test]
    fn step_of_stay_seed_matches_hand_computation() {
        // Seed (0,1,0) at the origin, homogeneous coin.
        let psi = WaveWindow::localized(4, ChiralityAmplitude::from_re(0.0, 1.0, 0.0));
        let cfg = CoinConfig::homogeneous();
        let out = step(&psi, &cfg).unwrap();
        assert_relative_eq!(out.get(-1).l.re, 2.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(out.get(0).o.re, -1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(out.get(1).r.re, 2.0 / 3.0, epsilon = 1e-15);
        assert_eq!(out.get(-1).o, c(0.0, 0.0));
        assert_eq!(out.get(2), ChiralityAmplitude::zero());
        assert_eq!(out.valid_lo(), -3);
        assert_eq!(out.valid_hi(), 3);
    }

    #[test]
    fn step_routes_defect_phase_to_all_three_rows() {
        // Same seed, θ=π: the three contributions all pass through site 0.
        let psi = WaveWindow::localized(4, ChiralityAmplitude::from_re(0.0, 1.0, 0.0));
        let cfg = CoinConfig::new(std::f64::consts::PI).unwrap();
        let out = step(&psi, &cfg).unwrap();
        assert_relative_eq!(out.get(-1).l.re, -2.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(out.get(0).o.re, 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(out.get(1).r.re, -2.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn step_of_zero_is_zero() {
        let psi = WaveWindow::<f64>::zero(-3, 3);
        let out = step(&psi, &CoinConfig::homogeneous()).unwrap();
        assert_eq!(out.norm_sqr_valid(), 0.0);
    }

    #[test]
    fn evolve_composes_steps() {
        let psi = WaveWindow::localized(6, ChiralityAmplitude::new(c(0.3, 0.1), c(0.0, -1.0), c(0.7, 0.0)));
        let cfg = CoinConfig::new(1.0).unwrap();
        let two = evolve(&psi, 2, &cfg).unwrap();
        let composed = step(&step(&psi, &cfg).unwrap(), &cfg).unwrap();
        assert!(two.max_site_distance(&composed) < 1e-15);
        let zero_steps = evolve(&psi, 0, &cfg).unwrap();
        assert!(zero_steps.max_site_distance(&psi) < 1e-15);
    }

    #[test]
    fn window_exhaustion_is_reported() {
        let psi = WaveWindow::localized(2, ChiralityAmplitude::from_re(1.0, 0.0, 0.0));
        let cfg = CoinConfig::<f64>::homogeneous();
        let err = evolve(&psi, 3, &cfg).unwrap_err();
        assert!(matches!(err, Error::WindowExhausted { step: 3 }));
    }

    #[test]
    fn norm_is_conserved_for_interior_support() {
        // Support radius grows 1 per step while the valid interior shrinks 1,
        // so hw ≥ 2·steps keeps the whole support inside the interior.
        let psi = WaveWindow::localized(120, ChiralityAmplitude::new(c(0.5, 0.5), c(0.1, 0.0), c(0.0, -0.3)));
        let cfg = CoinConfig::new(2.0).unwrap();
        let before = psi.norm_sqr_valid();
        let after = evolve(&psi, 50, &cfg).unwrap().norm_sqr_valid();
        assert_relative_eq!(before, after, epsilon = 1e-10);
    }

    #[test]
    fn phi_examples() {
        let mut psi = WaveWindow::<f64>::zero(-2, 2);
        psi.set(0, ChiralityAmplitude::from_re(1.0, 0.0, 0.0));
        let mu = phi(&psi);
        assert_eq!(mu.get(0), 1.0);
        assert_eq!(mu.get(1), 0.0);

        psi.set(0, ChiralityAmplitude::from_re(1.0, 0.0, -1.0));
        assert_eq!(phi(&psi).get(0), 2.0);

        let zero = WaveWindow::<f64>::zero(-2, 2);
        assert_eq!(phi(&zero).sum(), 0.0);
    }

    #[test]
    fn measure_clamps_round_off_but_rejects_real_negatives() {
        let m = Measure::new(0, vec![1.0, -1e-12]);
        assert_eq!(m.get(1), 0.0);
        let bad = std::panic::catch_unwind(|| Measure::new(0, vec![1.0, -0.5]));
        assert!(bad.is_err());
    }
}
