//! Certified logarithmic Mahler measures.
//!
//! Roots are approximated in floating point (Aberth), refined with exact
//! dyadic Weierstrass steps, and enclosed in the discs `|z - z_i| <= n |W_i|`
//! where `W_i` is the Weierstrass correction. Pairwise disjoint discs each
//! hold exactly one root. When isolation stalls, Graeffe iteration gives
//! coarser two-sided bounds from coefficient norms.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::HeightError;
use crate::exactnum::{lm_add, lm_scale, ln_interval, rational_to_f64, LogMagnitude};
use crate::poly::IntPoly;

const START_BITS: u32 = 64;
const MAX_BITS: u32 = 4096;
const STEPS_PER_LEVEL: usize = 6;
const GRAEFFE_ROUNDS: u32 = 12;

#[derive(Clone, Debug, PartialEq)]
struct Cx {
    re: BigRational,
    im: BigRational,
}

impl Cx {
    fn zero() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    fn from_f64(z: Complex64) -> Self {
        let conv = |x: f64| BigRational::from_float(x).unwrap_or_else(BigRational::zero);
        Self {
            re: conv(z.re),
            im: conv(z.im),
        }
    }

    fn sub(&self, o: &Self) -> Self {
        Self {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }

    fn mul(&self, o: &Self) -> Self {
        Self {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    fn div(&self, o: &Self) -> Self {
        let n = o.norm_sqr();
        Self {
            re: (&self.re * &o.re + &self.im * &o.im) / &n,
            im: (&self.im * &o.re - &self.re * &o.im) / &n,
        }
    }

    fn snap(&self, bits: u32) -> Self {
        Self {
            re: snap(&self.re, bits),
            im: snap(&self.im, bits),
        }
    }
}

/// Nearest multiple of `2^-bits` (ties and direction do not matter here).
fn snap(x: &BigRational, bits: u32) -> BigRational {
    let scale = BigInt::one() << bits as usize;
    let y = (x * BigRational::from_integer(scale.clone())).round();
    BigRational::new(y.to_integer(), scale)
}

/// `[lo, hi]` around `sqrt(x)` for `x >= 0`, with `bits` fractional bits.
fn sqrt_bounds(x: &BigRational, bits: u32) -> (BigRational, BigRational) {
    let scale = BigInt::one() << (2 * bits) as usize;
    let y = x * BigRational::from_integer(scale);
    let lo_int = y.floor().to_integer().sqrt();
    let hi_int = y.ceil().to_integer().sqrt() + 1;
    let den = BigInt::one() << bits as usize;
    (
        BigRational::new(lo_int, den.clone()),
        BigRational::new(hi_int, den),
    )
}

fn horner(f: &IntPoly, z: &Cx) -> Cx {
    let mut acc = Cx::zero();
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(z);
        acc.re += BigRational::from_integer(c.clone());
    }
    acc
}

/// Floating-point starting points via Aberth iteration.
fn aberth_start(f: &IntPoly) -> Vec<Complex64> {
    let n = f.degree();
    let coeffs: Vec<f64> = f
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(f64::NAN))
        .collect();
    let lc = coeffs[n];
    let radius = 1.0
        + coeffs[..n]
            .iter()
            .map(|c| (c / lc).abs())
            .fold(0.0f64, f64::max);
    let radius = if radius.is_finite() { radius.min(1e150) } else { 1e150 };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(radius * 0.5, t)
        })
        .collect();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return z;
    }
    let dcoeffs: Vec<f64> = (1..=n).map(|k| coeffs[k] * k as f64).collect();
    let eval = |cs: &[f64], x: Complex64| {
        cs.iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let fz = eval(&coeffs, z[i]);
            let dz = eval(&dcoeffs, z[i]);
            if fz.norm() == 0.0 {
                continue;
            }
            let ratio = fz / dz;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Weierstrass corrections `W_i = f(z_i) / (lc prod_{j != i} (z_i - z_j))`,
/// or `None` if two approximations coincide.
fn corrections(f: &IntPoly, z: &[Cx]) -> Option<Vec<Cx>> {
    let lc = Cx {
        re: BigRational::from_integer(f.lc()),
        im: BigRational::zero(),
    };
    let mut out = Vec::with_capacity(z.len());
    for (i, zi) in z.iter().enumerate() {
        let mut den = lc.clone();
        for (j, zj) in z.iter().enumerate() {
            if i != j {
                den = den.mul(&zi.sub(zj));
            }
        }
        if den.norm_sqr().is_zero() {
            return None;
        }
        out.push(horner(f, zi).div(&den));
    }
    Some(out)
}

/// Enclosure of `sum max(0, ln|root|)` from isolating discs, or `None` when
/// the discs overlap.
fn certify(z: &[Cx], w: &[Cx], bits: u32) -> Result<Option<LogMagnitude>, HeightError> {
    let n = BigRational::from_integer(BigInt::from(z.len()));
    let radii: Vec<BigRational> = w
        .iter()
        .map(|wi| &n * sqrt_bounds(&wi.norm_sqr(), bits + 8).1)
        .collect();
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let gap = z[i].sub(&z[j]).norm_sqr();
            let reach = &radii[i] + &radii[j];
            if gap <= &reach * &reach {
                return Ok(None);
            }
        }
    }
    let one = BigRational::one();
    let ln_bits = bits + 16;
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for (zi, r) in z.iter().zip(&radii) {
        let (m_lo, m_hi) = sqrt_bounds(&zi.norm_sqr(), bits + 8);
        let m_lo = m_lo - r;
        let m_hi = m_hi + r;
        if m_hi > one {
            hi += ln_interval(&m_hi, ln_bits)?.hi().clone();
        }
        if m_lo > one {
            lo += ln_interval(&m_lo, ln_bits)?.lo().clone();
        }
    }
    Ok(Some(LogMagnitude::new(lo, hi)?))
}

/// `ln M(f)` for a squarefree integer polynomial of degree >= 1, with width at
/// most `tol` when achievable.
pub fn log_mahler_measure(f: &IntPoly, tol: &BigRational) -> Result<LogMagnitude, HeightError> {
    let n = f.degree();
    assert!(n >= 1, "degree must be positive");
    let mut z: Vec<Cx> = aberth_start(f).into_iter().map(Cx::from_f64).collect();
    let mut bits = START_BITS;
    while bits <= MAX_BITS {
        let ln_lc = ln_interval(&BigRational::from_integer(f.lc().abs()), bits + 16)?;
        for _ in 0..STEPS_PER_LEVEL {
            z = z.iter().map(|zi| zi.snap(bits)).collect();
            let Some(w) = corrections(f, &z) else {
                // coincident approximations: perturb and keep going
                for (k, zi) in z.iter_mut().enumerate() {
                    let eps = BigRational::new(BigInt::from(k as i64 + 1), BigInt::one() << 20usize);
                    zi.re += &eps;
                    zi.im -= eps;
                }
                continue;
            };
            if let Some(roots) = certify(&z, &w, bits)? {
                let total = lm_add(&ln_lc, &roots);
                if &total.width() <= tol {
                    return Ok(total);
                }
            }
            z = z.iter().zip(&w).map(|(zi, wi)| zi.sub(wi)).collect();
        }
        bits *= 2;
    }
    let g = graeffe_bounds(f)?;
    if &g.width() <= tol {
        return Ok(g);
    }
    Err(HeightError::RootIsolationFailure {
        poly: f.to_string(),
        bits: MAX_BITS,
    })
}

/// Two-sided bounds on `ln M(f)` from `GRAEFFE_ROUNDS` root-squaring steps,
/// using `M(g) <= ||g||_2` and `||g||_1 <= 2^n M(g)`.
fn graeffe_bounds(f: &IntPoly) -> Result<LogMagnitude, HeightError> {
    let n = f.degree();
    let mut g = f.clone();
    for _ in 0..GRAEFFE_ROUNDS {
        g = graeffe_step(&g);
    }
    let prec = 64;
    let l1: BigInt = g.coeffs().iter().map(|c| c.abs()).sum();
    let l2sq: BigInt = g.coeffs().iter().map(|c| c * c).sum();
    let scale = BigRational::new(BigInt::one(), BigInt::one() << GRAEFFE_ROUNDS as usize);
    let upper = lm_scale(&ln_interval(&BigRational::from_integer(l2sq), prec)?, &(&scale / BigRational::from_integer(2.into())));
    let lower = lm_scale(
        &ln_interval(&BigRational::new(l1, BigInt::one() << n), prec)?,
        &scale,
    );
    let floor = ln_interval(&BigRational::from_integer(f.lc().abs()), prec)?;
    let lo = lower.lo().clone().max(floor.lo().clone()).max(BigRational::zero());
    Ok(LogMagnitude::new(lo, upper.hi().clone())?)
}

/// `g(x^2) = (-1)^n f(x) f(-x)`: roots squared.
fn graeffe_step(f: &IntPoly) -> IntPoly {
    let n = f.degree();
    let neg: Vec<BigInt> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
        .collect();
    let prod = f.mul(&IntPoly::new(neg));
    let sign = if n % 2 == 1 { -BigInt::one() } else { BigInt::one() };
    IntPoly::new(
        prod.coeffs()
            .iter()
            .step_by(2)
            .map(|c| c * &sign)
            .collect(),
    )
}

/// Midpoint of an enclosure as `f64`, for tests.
pub fn approx(v: &LogMagnitude) -> f64 {
    rational_to_f64(&v.midpoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> BigRational {
        BigRational::new(1.into(), BigInt::from(10).pow(12))
    }

    #[test]
    fn golden_ratio() {
        let f = IntPoly::from_i64(&[-1, -1, 1]);
        let v = log_mahler_measure(&f, &tol()).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((approx(&v) - phi.ln()).abs() < 1e-12);
    }

    #[test]
    fn unit_circle_roots() {
        for f in [IntPoly::from_i64(&[1, 0, 1]), IntPoly::from_i64(&[1, 1, 1])] {
            let v = log_mahler_measure(&f, &tol()).unwrap();
            assert!(v.lo().is_zero());
            assert!(v.hi() <= &tol());
        }
    }

    #[test]
    fn lehmer_polynomial() {
        let f = IntPoly::from_i64(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
        let v = log_mahler_measure(&f, &tol()).unwrap();
        // Lehmer's number 1.17628081825991750654...
        assert!((approx(&v) - 1.176_280_818_259_917_5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn graeffe_brackets_the_measure() {
        let f = IntPoly::from_i64(&[-1, -1, 1]);
        let g = graeffe_bounds(&f).unwrap();
        let phi = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!(rational_to_f64(g.lo()) <= phi && phi <= rational_to_f64(g.hi()));
        let sq = graeffe_step(&f);
        assert_eq!(sq, IntPoly::from_i64(&[1, -3, 1]));
    }

    #[test]
    fn leading_coefficient_counts() {
        // 3x - 2 has M = 3
        let f = IntPoly::from_i64(&[-2, 3]);
        let v = log_mahler_measure(&f, &tol()).unwrap();
        assert!((approx(&v) - 3f64.ln()).abs() < 1e-12);
    }
}
