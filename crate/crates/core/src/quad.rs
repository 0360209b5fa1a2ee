//! Globally adaptive Gauss–Kronrod (7/15) quadrature for complex integrands
//! on finite intervals, plus Wynn's epsilon algorithm for summing slowly
//! convergent alternating series.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("quadrature did not reach tolerance {tol:e} within {budget} subintervals (estimated error {error:e})")]
    NonConvergent { tol: f64, budget: usize, error: f64 },
    #[error("invalid integration request: {0}")]
    Invalid(&'static str),
}

/// Result of a quadrature: value and an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Estimate {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &wk)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += pair * wk;
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    Estimate {
        value: kronrod * half,
        error: ((kronrod - gauss) * half).norm(),
    }
}

struct Panel {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.est.error == other.est.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// Integrates `f` over the union of consecutive panels delimited by
/// `breakpoints` (sorted, at least two) to absolute tolerance `tol`.
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate drops below `tol` or `budget` panels exist.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    breakpoints: &[f64],
    tol: f64,
    budget: usize,
) -> Result<Estimate, QuadError> {
    if breakpoints.len() < 2 {
        return Err(QuadError::Invalid("need at least two breakpoints"));
    }
    if !(tol > 0.0) {
        return Err(QuadError::Invalid("tolerance must be positive"));
    }
    if breakpoints.iter().any(|x| !x.is_finite()) || breakpoints.windows(2).any(|w| w[1] < w[0]) {
        return Err(QuadError::Invalid("breakpoints must be finite and sorted"));
    }
    let mut heap = BinaryHeap::with_capacity(breakpoints.len() * 4);
    for w in breakpoints.windows(2) {
        if w[1] > w[0] {
            heap.push(Panel { a: w[0], b: w[1], est: gk15(&f, w[0], w[1]) });
        }
    }
    let mut panels = heap.len();
    loop {
        let (value, error) = heap
            .iter()
            .fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), p| (v + p.est.value, e + p.est.error));
        if error <= tol {
            return Ok(Estimate { value, error });
        }
        if panels >= budget {
            return Err(QuadError::NonConvergent { tol, budget, error });
        }
        let Some(worst) = heap.pop() else {
            return Ok(Estimate { value, error });
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel at floating-point resolution: keep it, nothing left to split.
            return Err(QuadError::NonConvergent { tol, budget, error });
        }
        heap.push(Panel { a: worst.a, b: mid, est: gk15(&f, worst.a, mid) });
        heap.push(Panel { a: mid, b: worst.b, est: gk15(&f, mid, worst.b) });
        panels += 1;
    }
}

/// Evenly spaced breakpoints over `[a, b]` with `pieces` panels.
pub fn linspace_breaks(a: f64, b: f64, pieces: usize) -> Vec<f64> {
    let pieces = pieces.max(1);
    (0..=pieces)
        .map(|k| if k == pieces { b } else { a + (b - a) * k as f64 / pieces as f64 })
        .collect()
}

/// Wynn's epsilon extrapolation of a sequence of partial sums.
///
/// Returns the last even-column entry of the epsilon table, the usual
/// estimate of the limit.
pub fn wynn_epsilon(partial_sums: &[f64]) -> f64 {
    let n = partial_sums.len();
    if n < 3 {
        return partial_sums.last().copied().unwrap_or(0.0);
    }
    // e_prev = column k-1, e_cur = column k; column -1 is all zeros.
    let mut prev = vec![0.0; n + 1];
    let mut cur: Vec<f64> = partial_sums.to_vec();
    let mut best = *partial_sums.last().unwrap();
    let mut k = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            if diff == 0.0 || !diff.is_finite() {
                // Converged exactly; the table cannot be continued.
                return if k % 2 == 0 { cur[i + 1] } else { best };
            }
            next.push(prev[i + 1] + 1.0 / diff);
        }
        k += 1;
        prev = cur;
        cur = next;
        if k % 2 == 0 {
            if let Some(&v) = cur.last() {
                if v.is_finite() {
                    best = v;
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> Complex64 {
        move |x| Complex64::new(f(x), 0.0)
    }

    #[test]
    fn polynomial_is_exact() {
        let est = integrate(real(|x| x.powi(5) - 3.0 * x * x), &[0.0, 2.0], 1e-14, 10).unwrap();
        assert!((est.value.re - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_integral() {
        // ∫_0^10 cos(20x) dx = sin(200)/20
        let est = integrate(real(|x| (20.0 * x).cos()), &[0.0, 10.0], 1e-12, 10_000).unwrap();
        assert!((est.value.re - (200.0f64).sin() / 20.0).abs() < 1e-11);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let err = integrate(real(|x| (1.0 / x).sin()), &[1e-9, 1.0], 1e-14, 4).unwrap_err();
        assert!(matches!(err, QuadError::NonConvergent { .. }));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(integrate(real(|x| x), &[0.0], 1e-8, 10).is_err());
        assert!(integrate(real(|x| x), &[1.0, 0.0], 1e-8, 10).is_err());
        assert!(integrate(real(|x| x), &[0.0, 1.0], 0.0, 10).is_err());
    }

    #[test]
    fn wynn_accelerates_alternating_harmonic() {
        let mut sums = Vec::new();
        let mut s = 0.0;
        for k in 1..=20 {
            s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
            sums.push(s);
        }
        assert!((wynn_epsilon(&sums) - std::f64::consts::LN_2).abs() < 1e-10);
    }
}
