//! Dense complex matrix exponential by scaling and squaring of a Taylor series.

use ndarray::Array2;
use num_complex::Complex64;

fn one_norm(a: &Array2<Complex64>) -> f64 {
    a.columns()
        .into_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(A)` for a square matrix.
///
/// `A` is scaled by `2^-s` until its 1-norm is at most 1/2, the Taylor series
/// is summed until the next term is below double precision, and the result is
/// squared `s` times.
pub fn expm(a: &Array2<Complex64>) -> Array2<Complex64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    let norm = one_norm(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a * Complex64::new(0.5f64.powi(squarings), 0.0);

    let mut result = Array2::<Complex64>::eye(n);
    let mut term = Array2::<Complex64>::eye(n);
    for k in 1..=40 {
        term = term.dot(&scaled) * Complex64::new(1.0 / k as f64, 0.0);
        result += &term;
        if one_norm(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix_gives_identity() {
        let z = Array2::<Complex64>::zeros((3, 3));
        assert_eq!(expm(&z), Array2::eye(3));
    }

    #[test]
    fn diagonal_matrix() {
        let mut a = Array2::<Complex64>::zeros((2, 2));
        a[[0, 0]] = Complex64::new(2.0, 0.0);
        a[[1, 1]] = Complex64::new(0.0, 3.0);
        let e = expm(&a);
        assert!((e[[0, 0]] - Complex64::new(2f64.exp(), 0.0)).norm() < 1e-13);
        assert!((e[[1, 1]] - Complex64::new(0.0, 3.0).exp()).norm() < 1e-14);
    }

    #[test]
    fn rotation_generator() {
        // exp(θ [[0, -1], [1, 0]]) is a rotation by θ
        let theta = 7.3;
        let mut a = Array2::<Complex64>::zeros((2, 2));
        a[[0, 1]] = Complex64::new(-theta, 0.0);
        a[[1, 0]] = Complex64::new(theta, 0.0);
        let e = expm(&a);
        assert!((e[[0, 0]].re - theta.cos()).abs() < 1e-13);
        assert!((e[[1, 0]].re - theta.sin()).abs() < 1e-13);
    }
}
