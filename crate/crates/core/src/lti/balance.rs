//! Diagonal similarity balancing (Parlett–Reinsch, powers of two).

use nalgebra::{DMatrix, DVector};

const RADIX: f64 = 2.0;

/// Balances `a` in place and returns the diagonal `d` such that the balanced
/// matrix equals `D⁻¹ A D`. Scaling by powers of two is exact.
pub fn balance_in_place(a: &mut DMatrix<f64>) -> DVector<f64> {
    let n = a.nrows();
    let mut d = DVector::from_element(n, 1.0);
    let sq = RADIX * RADIX;
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= sq;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= sq;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                d[i] *= f;
                for j in 0..n {
                    a[(i, j)] /= f;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balancing_is_a_similarity() {
        let a0 = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, -1e8, -1e5, -10.0]);
        let mut a = a0.clone();
        let d = balance_in_place(&mut a);
        let dm = DMatrix::from_diagonal(&d);
        let back = &dm * &a * dm.try_inverse().unwrap();
        assert!((back - &a0).abs().max() < 1e-6);
        assert!(a.abs().max() < a0.abs().max());
    }
}
