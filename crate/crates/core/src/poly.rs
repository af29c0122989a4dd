//! Dense complex polynomials: evaluation, stable quadratics, and root finding
//! via companion-matrix eigenvalues (complex single-shift QR) with one Newton
//! polish per root. Degrees here are tiny (≤ 5), so clarity beats asymptotics.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Roots of z² + b·z + c = 0. The discriminant square root is oriented so the
/// larger-magnitude root is formed without cancellation; the second root comes
/// from the product identity, so `r1·r2 = c` holds to round-off exactly.
pub fn quadratic_roots<T: Real>(b: Complex<T>, c: Complex<T>) -> (Complex<T>, Complex<T>) {
    let zero = Complex::new(T::zero(), T::zero());
    if b == zero && c == zero {
        return (zero, zero);
    }
    let four = Complex::new(T::of(4.0), T::zero());
    let mut d = (b * b - four * c).sqrt();
    if (b.conj() * d).re < T::zero() {
        d = -d;
    }
    let half = T::of(0.5);
    let q = -(b + d) * Complex::new(half, T::zero());
    if q == zero {
        // c = 0: roots are 0 and −b.
        (zero, -b)
    } else {
        (q, c / q)
    }
}

/// Polynomial with ascending complex coefficients (index = power).
#[derive(Clone, Debug)]
pub struct Polynomial<T: Real> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> Polynomial<T> {
    /// Wraps ascending coefficients, trimming exactly-zero leading terms.
    /// Panics on an identically zero polynomial.
    pub fn new(mut coeffs: Vec<Complex<T>>) -> Self {
        let zero = Complex::new(T::zero(), T::zero());
        while coeffs.len() > 1 && *coeffs.last().unwrap() == zero {
            coeffs.pop();
        }
        assert!(
            coeffs.iter().any(|c| *c != zero),
            "zero polynomial has no defined degree"
        );
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial<T> {
        if self.degree() == 0 {
            return Polynomial::new(vec![Complex::new(T::zero(), T::zero())]);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * Complex::new(T::of(k as f64), T::zero()))
            .collect();
        Polynomial { coeffs }
    }

    /// Scale for relative residual tests: max coefficient magnitude.
    pub fn coeff_scale(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |m, c| if c.norm() > m { c.norm() } else { m })
    }

    /// All complex roots (with multiplicity). Companion-matrix eigenvalues by
    /// shifted QR, then one Newton step per root kept only when it lowers the
    /// residual.
    pub fn roots(&self) -> Result<Vec<Complex<T>>> {
        let zero = Complex::new(T::zero(), T::zero());
        match self.degree() {
            0 => Ok(vec![]),
            1 => Ok(vec![-self.coeffs[0] / self.coeffs[1]]),
            2 => {
                let a = self.coeffs[2];
                let (r1, r2) = quadratic_roots(self.coeffs[1] / a, self.coeffs[0] / a);
                Ok(vec![r1, r2])
            }
            n => {
                let lead = self.coeffs[n];
                if lead == zero {
                    return Err(Error::Domain("leading coefficient vanished"));
                }
                let monic: Vec<Complex<T>> =
                    self.coeffs[..n].iter().map(|&c| c / lead).collect();
                let mut roots = hessenberg_eigenvalues(companion(&monic))?;
                for r in &mut roots {
                    *r = self.polish(*r);
                }
                Ok(roots)
            }
        }
    }

    fn polish(&self, x: Complex<T>) -> Complex<T> {
        let dp = self.derivative();
        let mut best = x;
        let mut best_res = self.eval(x).norm();
        let mut cur = x;
        for _ in 0..3 {
            let d = dp.eval(cur);
            if d.norm() == T::zero() {
                break;
            }
            cur = cur - self.eval(cur) / d;
            let res = self.eval(cur).norm();
            if res < best_res {
                best_res = res;
                best = cur;
            } else {
                break;
            }
        }
        best
    }
}

/// Companion matrix of a monic polynomial given by its low-order coefficients
/// (ascending, length n): ones on the subdiagonal, −a_k in the last column.
fn companion<T: Real>(low: &[Complex<T>]) -> Vec<Vec<Complex<T>>> {
    let n = low.len();
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let mut h = vec![vec![zero; n]; n];
    for i in 0..n {
        h[i][n - 1] = -low[i];
        if i + 1 < n {
            h[i + 1][i] = one;
        }
    }
    h
}

/// Complex Givens pair (c real, s complex) annihilating `b` against `a`.
fn givens<T: Real>(a: Complex<T>, b: Complex<T>) -> (T, Complex<T>) {
    let zero = Complex::new(T::zero(), T::zero());
    if b == zero {
        return (T::one(), zero);
    }
    if a == zero {
        return (T::zero(), Complex::new(T::one(), T::zero()));
    }
    let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let alpha = a / Complex::new(a.norm(), T::zero());
    (a.norm() / r, alpha * b.conj() / Complex::new(r, T::zero()))
}

/// Eigenvalues of an upper-Hessenberg complex matrix by explicit single-shift
/// QR with Wilkinson shifts and bottom-up deflation. Sized for n ≤ 8.
fn hessenberg_eigenvalues<T: Real>(mut h: Vec<Vec<Complex<T>>>) -> Result<Vec<Complex<T>>> {
    let n = h.len();
    let mut eigs = Vec::with_capacity(n);
    let mut m = n; // active block is 0..m
    let mut iters_here = 0usize;
    let mut total = 0usize;
    let max_total = 200 * n;
    let eps = T::epsilon();
    while m > 0 {
        if m == 1 {
            eigs.push(h[0][0]);
            break;
        }
        // Deflate when the bottom subdiagonal entry is negligible.
        let sub = h[m - 1][m - 2].norm();
        let local = h[m - 2][m - 2].norm() + h[m - 1][m - 1].norm();
        if sub <= eps * local.max(T::of(1e-300)) {
            eigs.push(h[m - 1][m - 1]);
            m -= 1;
            iters_here = 0;
            continue;
        }
        if m == 2 {
            let (a, b, c, d) = (h[0][0], h[0][1], h[1][0], h[1][1]);
            let (r1, r2) = quadratic_roots(-(a + d), a * d - b * c);
            eigs.push(r1);
            eigs.push(r2);
            break;
        }
        total += 1;
        iters_here += 1;
        if total > max_total {
            return Err(Error::NoConvergence(max_total));
        }
        let sigma = if iters_here.is_multiple_of(12) {
            // Exceptional shift to break rare stagnation cycles.
            h[m - 1][m - 1] + Complex::new(h[m - 1][m - 2].norm(), T::zero())
        } else {
            wilkinson_shift(h[m - 2][m - 2], h[m - 2][m - 1], h[m - 1][m - 2], h[m - 1][m - 1])
        };
        // Explicit shifted QR on the active block: H ← RQ + σI.
        for (i, row) in h.iter_mut().enumerate().take(m) {
            row[i] -= sigma;
        }
        let mut rots = Vec::with_capacity(m - 1);
        for k in 0..m - 1 {
            let (c, s) = givens(h[k][k], h[k + 1][k]);
            let (upper, lower) = h.split_at_mut(k + 1);
            for (a, b) in upper[k][k..m].iter_mut().zip(lower[0][k..m].iter_mut()) {
                let (x, y) = (*a, *b);
                *a = Complex::new(c, T::zero()) * x + s * y;
                *b = -s.conj() * x + Complex::new(c, T::zero()) * y;
            }
            rots.push((c, s));
        }
        for (k, (c, s)) in rots.into_iter().enumerate() {
            for row in h.iter_mut().take((k + 2).min(m)) {
                let a = row[k];
                let b = row[k + 1];
                row[k] = a * Complex::new(c, T::zero()) + b * s.conj();
                row[k + 1] = -a * s + b * Complex::new(c, T::zero());
            }
        }
        for (i, row) in h.iter_mut().enumerate().take(m) {
            row[i] += sigma;
        }
    }
    Ok(eigs)
}

/// Eigenvalue of [[a,b],[c,d]] closer to `d`.
fn wilkinson_shift<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    d: Complex<T>,
) -> Complex<T> {
    let (r1, r2) = quadratic_roots(-(a + d), a * d - b * c);
    if (r1 - d).norm() <= (r2 - d).norm() {
        r1
    } else {
        r2
    }
}
