//! Adaptive Gauss–Legendre quadrature along straight segments in the
//! complex plane. 16 nodes per panel, bisection refinement, absolute
//! tolerance driven by the caller, maximum depth 20.

use std::sync::OnceLock;

use crate::jets::Complex;

pub const MAX_DEPTH: usize = 20;

/// Nodes and weights of the 16-point rule on [-1, 1], computed once by
/// Newton iteration on the Legendre polynomial to avoid transcription
/// slips.
pub fn gauss_legendre_16() -> &'static [(f64, f64); 16] {
    static RULE: OnceLock<[(f64, f64); 16]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = 16usize;
        let mut rule = [(0.0, 0.0); 16];
        for i in 0..n {
            // Chebyshev-style initial guess, then Newton on P_16.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            rule[i] = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        rule.sort_by(|a, b| a.0.total_cmp(&b.0));
        rule
    })
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn panel<const M: usize>(
    f: &impl Fn(Complex) -> [Complex; M],
    from: Complex,
    dir: Complex,
    a: f64,
    b: f64,
) -> [Complex; M] {
    let rule = gauss_legendre_16();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = [Complex::ZERO; M];
    for &(x, w) in rule.iter() {
        let t = mid + half * x;
        let vals = f(from + dir * t);
        for k in 0..M {
            acc[k] += vals[k] * w;
        }
    }
    for v in &mut acc {
        *v *= half * dir;
    }
    acc
}

/// Integrates `f` along the straight segment from `from` to `to`.
///
/// Each panel is accepted when one 16-point rule agrees with its two
/// halves within the tolerance share of the panel; otherwise the panel is
/// bisected, up to [`MAX_DEPTH`]. Returns `None` when the depth limit is
/// hit without convergence.
pub fn integrate_segment<const M: usize>(
    f: impl Fn(Complex) -> [Complex; M],
    from: Complex,
    to: Complex,
    tol: f64,
) -> Option<[Complex; M]> {
    let dir = to - from;
    if dir == Complex::ZERO {
        return Some([Complex::ZERO; M]);
    }
    let mut total = [Complex::ZERO; M];
    // (a, b, depth) panels in [0, 1] parameter space.
    let mut stack = vec![(0.0f64, 1.0f64, 0usize)];
    while let Some((a, b, depth)) = stack.pop() {
        let whole = panel(&f, from, dir, a, b);
        let m = 0.5 * (a + b);
        let left = panel(&f, from, dir, a, m);
        let right = panel(&f, from, dir, m, b);
        let mut err: f64 = 0.0;
        for k in 0..M {
            err = err.max((left[k] + right[k] - whole[k]).norm());
        }
        if err <= tol * (b - a) {
            for k in 0..M {
                total[k] += left[k] + right[k];
            }
        } else if depth >= MAX_DEPTH {
            return None;
        } else {
            stack.push((a, m, depth + 1));
            stack.push((m, b, depth + 1));
        }
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rule_integrates_high_degree_polynomials_exactly() {
        // 16-point Gauss is exact through degree 31.
        let rule = gauss_legendre_16();
        for deg in [0usize, 7, 16, 31] {
            let got: f64 = rule.iter().map(|&(x, w)| w * x.powi(deg as i32)).sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert_relative_eq!(got, exact, epsilon = 1e-13);
        }
        let wsum: f64 = rule.iter().map(|&(_, w)| w).sum();
        assert_relative_eq!(wsum, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn integrates_exp_along_diagonal_segment() {
        let from = Complex::new(-0.3, 0.2);
        let to = Complex::new(0.7, -0.4);
        let got = integrate_segment(|w| [w.exp()], from, to, 1e-13).unwrap();
        let exact = to.exp() - from.exp();
        assert!((got[0] - exact).norm() < 1e-13);
    }

    #[test]
    fn empty_segment_is_zero() {
        let p = Complex::new(0.4, 0.1);
        let got = integrate_segment(|w| [w, w * w], p, p, 1e-13).unwrap();
        assert_eq!(got, [Complex::ZERO; 2]);
    }
}
