//! Spectral data for the defect walk: the half-line transfer system, its
//! determinant factorization, per-component decay ratios, seed-consistency
//! residuals, and the eigenvalue families attached to inversion-symmetric
//! seeds. Everything here works with a generalized eigenvector ansatz
//!
//! Ψ(x) = (prefactor per component) · (−θ)^|x|,  UΨ = λΨ,
//!
//! where θ solves the decay quadratic z² + (3λ + 4 + 3/λ)z + 1 = 0.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::lattice::{ChiralityAmplitude, CoinConfig, WaveWindow};
use crate::poly::{quadratic_roots, Polynomial};
use crate::scalar::Real;

fn cr<T: Real>(v: f64) -> Complex<T> {
    Complex::new(T::of(v), T::zero())
}

/// Eigenvalue candidate together with the seed cell Ψ(0) = (α, β, γ) and the
/// defect phase ω it is meant to pair with.
#[derive(Clone, Copy, Debug)]
pub struct EigenParams<T: Real> {
    pub lambda: Complex<T>,
    pub seed: ChiralityAmplitude<T>,
    pub omega: Complex<T>,
}

impl<T: Real> EigenParams<T> {
    /// Validates |λ| = 1 (within 1e−12) and a nonzero seed. Unitary evolution
    /// admits no other eigenvalue moduli, so off-circle inputs are rejected
    /// here; use [`EigenParams::new_unchecked`] to probe raw root candidates.
    pub fn new(
        lambda: Complex<T>,
        seed: ChiralityAmplitude<T>,
        config: &CoinConfig<T>,
    ) -> Result<Self> {
        if (lambda.norm() - T::one()).abs() > T::of(1e-12) {
            return Err(Error::Domain("eigenvalue must lie on the unit circle"));
        }
        if seed.norm_sqr() == T::zero() {
            return Err(Error::Domain("seed cell must be nonzero"));
        }
        Ok(Self {
            lambda,
            seed,
            omega: config.omega(),
        })
    }

    /// No validation; for surveying root candidates that may sit off the
    /// unit circle.
    pub fn new_unchecked(
        lambda: Complex<T>,
        seed: ChiralityAmplitude<T>,
        omega: Complex<T>,
    ) -> Self {
        Self { lambda, seed, omega }
    }

    pub fn alpha(&self) -> Complex<T> {
        self.seed.l
    }

    pub fn beta(&self) -> Complex<T> {
        self.seed.o
    }

    pub fn gamma(&self) -> Complex<T> {
        self.seed.r
    }

    /// Right-moving seed combination Δ(+) = 2α + 2β − γ.
    pub fn delta_plus(&self) -> Complex<T> {
        let two = cr::<T>(2.0);
        two * self.alpha() + two * self.beta() - self.gamma()
    }

    /// Left-moving seed combination Δ(−) = −α + 2β + 2γ.
    pub fn delta_minus(&self) -> Complex<T> {
        let two = cr::<T>(2.0);
        -self.alpha() + two * self.beta() + two * self.gamma()
    }
}

/// The two roots of z² + (3λ + 4 + 3/λ)z + 1 = 0, ordered by modulus. Their
/// product is 1, so |theta_s| ≤ 1 ≤ |theta_l| always holds.
#[derive(Clone, Copy, Debug)]
pub struct ThetaPair<T: Real> {
    pub theta_s: Complex<T>,
    pub theta_l: Complex<T>,
}

/// Solves the decay quadratic attached to an eigenvalue candidate.
pub fn theta_roots<T: Real>(lambda: Complex<T>) -> Result<ThetaPair<T>> {
    if lambda.norm() == T::zero() {
        return Err(Error::Domain("eigenvalue must be nonzero"));
    }
    let b = cr::<T>(3.0) * lambda + cr::<T>(4.0) + cr::<T>(3.0) / lambda;
    let (r1, r2) = quadratic_roots(b, cr::<T>(1.0));
    let (small, large) = if r1.norm() <= r2.norm() { (r1, r2) } else { (r2, r1) };
    Ok(ThetaPair {
        theta_s: -small,
        theta_l: -large,
    })
}

/// Coefficient matrix A(λ, z) of the transfer system A·f± = a± satisfied by
/// the half-line generating functions f+(z) = Σ_{x≥1} Ψ(x)zˣ (small |z|) and
/// f−(z) = Σ_{x≤−1} Ψ(x)zˣ (large |z|).
pub fn system_matrix<T: Real>(
    lambda: Complex<T>,
    z: Complex<T>,
) -> Result<[[Complex<T>; 3]; 3]> {
    if z.norm() == T::zero() {
        return Err(Error::Domain("transfer variable z must be nonzero"));
    }
    let third = cr::<T>(1.0 / 3.0);
    let two_thirds = cr::<T>(2.0 / 3.0);
    Ok([
        [
            lambda + third / z,
            -two_thirds / z,
            -two_thirds / z,
        ],
        [-two_thirds, lambda + third, -two_thirds],
        [
            -two_thirds * z,
            -two_thirds * z,
            lambda + third * z,
        ],
    ])
}

/// Right-hand side of the transfer system on the positive half-line:
/// a+ = (−λα, 0, ωzΔ(+)/3).
pub fn rhs_plus<T: Real>(params: &EigenParams<T>, z: Complex<T>) -> [Complex<T>; 3] {
    [
        -params.lambda * params.alpha(),
        Complex::new(T::zero(), T::zero()),
        params.omega * z * params.delta_plus() * cr::<T>(1.0 / 3.0),
    ]
}

/// Right-hand side on the negative half-line: a− = (ωΔ(−)/(3z), 0, −λγ).
pub fn rhs_minus<T: Real>(
    params: &EigenParams<T>,
    z: Complex<T>,
) -> Result<[Complex<T>; 3]> {
    if z.norm() == T::zero() {
        return Err(Error::Domain("transfer variable z must be nonzero"));
    }
    Ok([
        params.omega * params.delta_minus() / (cr::<T>(3.0) * z),
        Complex::new(T::zero(), T::zero()),
        -params.lambda * params.gamma(),
    ])
}

/// Determinant of the transfer matrix in factored form:
/// det A = λ(λ−1)/(3z) · (z + θ_s)(z + θ_l).
pub fn det_system<T: Real>(lambda: Complex<T>, z: Complex<T>) -> Result<Complex<T>> {
    if z.norm() == T::zero() {
        return Err(Error::Domain("transfer variable z must be nonzero"));
    }
    let tp = theta_roots(lambda)?;
    Ok(lambda * (lambda - cr::<T>(1.0)) / (cr::<T>(3.0) * z) * (z + tp.theta_s) * (z + tp.theta_l))
}

/// Determinant of the transfer matrix by direct cofactor expansion; kept as
/// an independent route for cross-checking the factored form.
pub fn det_system_direct<T: Real>(lambda: Complex<T>, z: Complex<T>) -> Result<Complex<T>> {
    let a = system_matrix(lambda, z)?;
    Ok(a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))
}

/// Per-component geometric decay ratios of the eigenvector ansatz, one for
/// each chirality on each half-line. A genuine eigenvector forces all six to
/// coincide (with the common value θ_s); an entry is `None` when its closed
/// form degenerates to 0/0 for the given seed.
#[derive(Clone, Copy, Debug)]
pub struct RatioSet<T: Real> {
    /// Ratios (L, O, R) governing x ≥ 1.
    pub plus: [Option<Complex<T>>; 3],
    /// Ratios (L, O, R) governing x ≤ −1.
    pub minus: [Option<Complex<T>>; 3],
}

impl<T: Real> RatioSet<T> {
    /// All six entries in the order L+, O+, R+, L−, O−, R−.
    pub fn all(&self) -> [Option<Complex<T>>; 6] {
        [
            self.plus[0], self.plus[1], self.plus[2],
            self.minus[0], self.minus[1], self.minus[2],
        ]
    }

    pub fn defined_count(&self) -> usize {
        self.all().iter().filter(|r| r.is_some()).count()
    }

    /// Mean of the defined entries; `None` when every entry degenerated.
    pub fn mean(&self) -> Option<Complex<T>> {
        let defined: Vec<_> = self.all().into_iter().flatten().collect();
        if defined.is_empty() {
            return None;
        }
        let n = T::of(defined.len() as f64);
        let sum = defined
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |s, r| s + r);
        Some(sum / Complex::new(n, T::zero()))
    }

    /// Largest deviation of a defined entry from the mean of defined entries.
    pub fn max_spread(&self) -> Option<T> {
        let mean = self.mean()?;
        Some(
            self.all()
                .into_iter()
                .flatten()
                .fold(T::zero(), |m, r| m.max((r - mean).norm())),
        )
    }

    /// True when all six ratios exist and agree within tol·max(1, |mean|).
    pub fn is_consistent(&self, tol: T) -> bool {
        if self.defined_count() != 6 {
            return false;
        }
        let mean = match self.mean() {
            Some(m) => m,
            None => return false,
        };
        let spread = self.max_spread().unwrap_or_else(T::infinity);
        spread <= tol * T::one().max(mean.norm())
    }

    /// The shared ratio when consistent.
    pub fn common(&self, tol: T) -> Option<Complex<T>> {
        if self.is_consistent(tol) {
            self.mean()
        } else {
            None
        }
    }
}

fn checked_div<T: Real>(num: Complex<T>, den: Complex<T>) -> Option<Complex<T>> {
    if den.norm() == T::zero() {
        return None;
    }
    let q = num / den;
    if q.re.is_finite() && q.im.is_finite() {
        Some(q)
    } else {
        None
    }
}

/// Closed-form decay ratios solved from the transfer system. Swapping
/// α ↔ γ mirrors the lattice, so the minus-side formulas are the plus-side
/// ones with (α, Δ(+)) replaced by (γ, Δ(−)) and the chirality order
/// reversed.
pub fn decay_ratios<T: Real>(params: &EigenParams<T>) -> RatioSet<T> {
    let lam = params.lambda;
    let om = params.omega;
    let (al, ga) = (params.alpha(), params.gamma());
    let (dp, dm) = (params.delta_plus(), params.delta_minus());
    let one = cr::<T>(1.0);
    let two = cr::<T>(2.0);
    let three = cr::<T>(3.0);
    let six = cr::<T>(6.0);
    let lam2 = lam * lam;
    let tl1 = three * lam + one;

    let side = |d: Complex<T>, edge: Complex<T>| -> [Option<Complex<T>>; 3] {
        let outer = checked_div(
            -(two * (lam + one) * d * om - three * lam2 * tl1 * edge),
            three * lam * (lam - one) * edge,
        );
        let middle = checked_div(d * om - three * lam2 * edge, lam * (d * om - three * edge));
        let inner = checked_div(
            (lam - one) * d * om,
            lam * (tl1 * d * om - six * (lam + one) * edge),
        );
        [outer, middle, inner]
    };

    let [lp, op, rp] = side(dp, al);
    let [rm, om_, lm] = side(dm, ga);
    RatioSet {
        plus: [lp, op, rp],
        minus: [lm, om_, rm],
    }
}

/// The four polynomial residuals whose simultaneous vanishing characterizes
/// seeds (α, β, γ) that extend to a genuine decaying eigenvector at λ:
///
/// r₁ = β(3λ + ω) − 2ω(α + γ)
/// r₂ = (α − γ)(α + γ − 2β)
/// r₃ = (λ+1)·[9α(ωΔ(+) − 2α)λ² − 6αωΔ(+)λ − ωΔ(+)(2ωΔ(+) − 9α)]
/// r₄ = same as r₃ with (α, Δ(+)) → (γ, Δ(−))
pub fn equality_residuals<T: Real>(params: &EigenParams<T>) -> [Complex<T>; 4] {
    let lam = params.lambda;
    let om = params.omega;
    let (al, be, ga) = (params.alpha(), params.beta(), params.gamma());
    let (dp, dm) = (params.delta_plus(), params.delta_minus());
    let two = cr::<T>(2.0);
    let three = cr::<T>(3.0);
    let six = cr::<T>(6.0);
    let nine = cr::<T>(9.0);
    let lam2 = lam * lam;

    let r1 = be * (three * lam + om) - two * om * (al + ga);
    let r2 = (al - ga) * (al + ga - two * be);
    let quartic_part = |edge: Complex<T>, d: Complex<T>| {
        (lam + cr::<T>(1.0))
            * (nine * edge * (om * d - two * edge) * lam2
                - six * edge * om * d * lam
                - om * d * (two * om * d - nine * edge))
    };
    [r1, r2, quartic_part(al, dp), quartic_part(ga, dm)]
}

/// The eigenvalue pair λ(±) = (ω ± √(6ω(ω−1)²)) / (3ω − 2) attached to
/// antisymmetric seeds (α, 0, −α). Both values have unit modulus for every
/// defect phase; they merge into λ = 1 as the defect switches off.
pub fn defect_eigenvalue_pair<T: Real>(
    config: &CoinConfig<T>,
) -> Result<(Complex<T>, Complex<T>)> {
    config.require_defect()?;
    let om = config.omega();
    let one = cr::<T>(1.0);
    let s = (cr::<T>(6.0) * om * (om - one) * (om - one)).sqrt();
    let den = cr::<T>(3.0) * om - cr::<T>(2.0);
    Ok(((om + s) / den, (om - s) / den))
}

/// Quartic factor of the eigenvalue polynomial for symmetric seeds
/// (α, β, α), ascending coefficients:
/// [3ω³(1−2ω), 2(5−3ω)ω², (3ω²−8ω+3)ω, 2(5ω−3)ω, 3(ω−2)].
/// It is self-inversive (a_k = ω⁴·conj(a_{4−k})), so roots come in
/// 1/conj pairs and need not all sit on the unit circle.
pub fn symmetric_quartic<T: Real>(config: &CoinConfig<T>) -> Polynomial<T> {
    let om = config.omega();
    let om2 = om * om;
    let om3 = om2 * om;
    Polynomial::new(vec![
        cr::<T>(3.0) * om3 * (cr::<T>(1.0) - cr::<T>(2.0) * om),
        cr::<T>(2.0) * (cr::<T>(5.0) - cr::<T>(3.0) * om) * om2,
        (cr::<T>(3.0) * om2 - cr::<T>(8.0) * om + cr::<T>(3.0)) * om,
        cr::<T>(2.0) * (cr::<T>(5.0) * om - cr::<T>(3.0)) * om,
        cr::<T>(3.0) * (om - cr::<T>(2.0)),
    ])
}

/// Full degree-5 eigenvalue polynomial (λ + 1)·quartic for symmetric seeds.
pub fn symmetric_quintic<T: Real>(config: &CoinConfig<T>) -> Polynomial<T> {
    let q = symmetric_quartic(config);
    let a = q.coeffs();
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = vec![zero; a.len() + 1];
    for (k, &c) in a.iter().enumerate() {
        out[k] += c;
        out[k + 1] += c;
    }
    Polynomial::new(out)
}

/// All five eigenvalue candidates for symmetric seeds: the exact root −1
/// followed by the four quartic roots in solver order.
pub fn symmetric_quintic_roots<T: Real>(config: &CoinConfig<T>) -> Result<Vec<Complex<T>>> {
    let mut roots = vec![cr::<T>(-1.0)];
    roots.extend(symmetric_quartic(config).roots()?);
    Ok(roots)
}

/// Assembles the geometric eigenvector on |x| ≤ half_width from the seed
/// cell: Ψ(0) = (α, β, γ) and per component prefactor·(−ratio)^|x| on each
/// half-line. Fails when the ratios degenerate, disagree beyond 1e−8, or
/// exceed unit modulus (a tail that cannot decay).
pub fn geometric_eigenvector<T: Real>(
    params: &EigenParams<T>,
    half_width: usize,
) -> Result<WaveWindow<T>> {
    let lam = params.lambda;
    let om = params.omega;
    let one = cr::<T>(1.0);
    if (lam - one).norm() == T::zero() {
        return Err(Error::RatioUndefined(
            "component prefactors are 0/0 at eigenvalue 1",
        ));
    }
    let ratios = decay_ratios(params);
    if ratios.defined_count() != 6 {
        return Err(Error::RatioUndefined(
            "a component ratio denominator vanishes for this seed",
        ));
    }
    let tol = T::of(1e-8);
    let common = ratios.common(tol).ok_or_else(|| Error::RatioMismatch {
        spread: ratios
            .max_spread()
            .and_then(|s| num_traits::ToPrimitive::to_f64(&s))
            .unwrap_or(f64::NAN),
    })?;
    if common.norm() > T::one() + tol {
        return Err(Error::TailDivergent {
            rate: num_traits::ToPrimitive::to_f64(&common.norm()).unwrap_or(f64::NAN),
        });
    }

    let (al, ga) = (params.alpha(), params.gamma());
    let (dp, dm) = (params.delta_plus(), params.delta_minus());
    let two = cr::<T>(2.0);
    let three = cr::<T>(3.0);
    let six = cr::<T>(6.0);
    let tl1 = three * lam + one;
    let den = three * (lam - one);
    let pre_plus = [
        al,
        -two * (dp * om - three * al) / den,
        -(tl1 * dp * om - six * (lam + one) * al) / den,
    ];
    let pre_minus = [
        -(tl1 * dm * om - six * (lam + one) * ga) / den,
        -two * (dm * om - three * ga) / den,
        ga,
    ];
    let step_plus: Vec<Complex<T>> = ratios.plus.iter().map(|r| -r.unwrap()).collect();
    let step_minus: Vec<Complex<T>> = ratios.minus.iter().map(|r| -r.unwrap()).collect();

    let hw = half_width as i64;
    let mut psi = WaveWindow::zero(-hw, hw);
    psi.set(0, params.seed);
    let mut pow_plus = [one, one, one];
    let mut pow_minus = [one, one, one];
    for x in 1..=hw {
        for k in 0..3 {
            pow_plus[k] *= step_plus[k];
            pow_minus[k] *= step_minus[k];
        }
        psi.set(
            x,
            ChiralityAmplitude::new(
                pre_plus[0] * pow_plus[0],
                pre_plus[1] * pow_plus[1],
                pre_plus[2] * pow_plus[2],
            ),
        );
        psi.set(
            -x,
            ChiralityAmplitude::new(
                pre_minus[0] * pow_minus[0],
                pre_minus[1] * pow_minus[1],
                pre_minus[2] * pow_minus[2],
            ),
        );
    }
    Ok(psi)
}
