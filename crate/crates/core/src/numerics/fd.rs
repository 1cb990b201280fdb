//! Central-difference application of second-order differential operators.

/// Description of a second-order operator at a point: coefficients for the
/// second derivatives (symmetric matrix, row-major upper triangle implied by
/// full storage), the first derivatives, and a zeroth-order term.
///
/// The operator is `sum_ij second[i][j] d_i d_j + sum_i first[i] d_i + zeroth`.
#[derive(Debug, Clone)]
pub struct SecondOrderOp {
    pub second: Vec<Vec<f64>>,
    pub first: Vec<f64>,
    pub zeroth: f64,
}

impl SecondOrderOp {
    pub fn new(second: Vec<Vec<f64>>, first: Vec<f64>) -> Self {
        let n = first.len();
        assert!(second.len() == n && second.iter().all(|r| r.len() == n));
        Self {
            second,
            first,
            zeroth: 0.0,
        }
    }
}

fn shifted(p: &[f64], i: usize, h: f64) -> Vec<f64> {
    let mut q = p.to_vec();
    q[i] += h;
    q
}

/// Central first derivative `d_i f` at `p`, error `O(h^2)`.
pub fn fd_first(f: &mut dyn FnMut(&[f64]) -> f64, p: &[f64], i: usize, h: f64) -> f64 {
    (f(&shifted(p, i, h)) - f(&shifted(p, i, -h))) / (2.0 * h)
}

/// Central second derivative `d_i^2 f` at `p`, error `O(h^2)`.
pub fn fd_second(f: &mut dyn FnMut(&[f64]) -> f64, p: &[f64], i: usize, h: f64) -> f64 {
    (f(&shifted(p, i, h)) - 2.0 * f(p) + f(&shifted(p, i, -h))) / (h * h)
}

/// Central mixed derivative `d_i d_j f` at `p`, error `O(h^2)`.
pub fn fd_mixed(f: &mut dyn FnMut(&[f64]) -> f64, p: &[f64], i: usize, j: usize, h: f64) -> f64 {
    let mut s = shifted(p, i, h);
    s[j] += h;
    let fpp = f(&s);
    let mut s = shifted(p, i, h);
    s[j] -= h;
    let fpm = f(&s);
    let mut s = shifted(p, i, -h);
    s[j] += h;
    let fmp = f(&s);
    let mut s = shifted(p, i, -h);
    s[j] -= h;
    let fmm = f(&s);
    (fpp - fpm - fmp + fmm) / (4.0 * h * h)
}

/// Applies the described operator to `f` at `p` with stencil spacing `h`.
pub fn fd_apply(op: &SecondOrderOp, mut f: impl FnMut(&[f64]) -> f64, p: &[f64], h: f64) -> f64 {
    let n = op.first.len();
    assert_eq!(p.len(), n, "point dimension mismatch");
    let mut out = op.zeroth * f(p);
    let g: &mut dyn FnMut(&[f64]) -> f64 = &mut f;
    for i in 0..n {
        if op.first[i] != 0.0 {
            out += op.first[i] * fd_first(g, p, i, h);
        }
        for j in 0..n {
            let c = op.second[i][j];
            if c == 0.0 {
                continue;
            }
            out += c * if i == j {
                fd_second(g, p, i, h)
            } else {
                fd_mixed(g, p, i, j, h)
            };
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_laplacian_of_square_norm() {
        let op = SecondOrderOp::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.0, 0.0]);
        let v = fd_apply(&op, |p| p[0] * p[0] + p[1] * p[1], &[0.7, -0.3], 1e-3);
        assert!((v - 4.0).abs() < 1e-5);
    }

    #[test]
    fn first_derivative_of_exp() {
        let op = SecondOrderOp::new(vec![vec![0.0]], vec![1.0]);
        let v = fd_apply(&op, |p| p[0].exp(), &[0.0], 1e-5);
        assert!((v - 1.0).abs() < 1e-6);
    }

    #[test]
    fn mixed_derivative_of_product() {
        let op = SecondOrderOp::new(vec![vec![0.0, 1.0], vec![0.0, 0.0]], vec![0.0, 0.0]);
        let v = fd_apply(&op, |p| p[0] * p[1], &[1.0, 1.0], 1e-4);
        assert!((v - 1.0).abs() < 1e-6);
    }

    #[test]
    fn richardson_order_two() {
        // error(h) ~ C h^2: halving h shrinks the defect by ~4
        let f = |p: &[f64]| (2.0 * p[0]).sin();
        let exact = -4.0 * (2.0_f64 * 0.4).sin();
        let g1: &mut dyn FnMut(&[f64]) -> f64 = &mut { f };
        let e1 = (fd_second(g1, &[0.4], 0, 1e-2) - exact).abs();
        let e2 = (fd_second(g1, &[0.4], 0, 5e-3) - exact).abs();
        let ratio = e1 / e2;
        assert!((2.5..6.0).contains(&ratio), "ratio {ratio}");
    }
}
