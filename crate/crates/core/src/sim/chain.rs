//! Linear state-space model of the platoon with the leader position as input.
//! Independent of the wave decomposition, so it serves as a reference for it.

use nalgebra::{DMatrix, DVector, RowDVector};

use crate::error::{Error, Result};
use crate::lti::StateSpace;
use crate::wave::VehicleGains;

/// Followers `1..=n_last`, each with states `(x, v, z)`; the rear follows its
/// predecessor with zero spacing reference. Output is the position of vehicle
/// `output` (1-based among followers).
pub fn chain_state_space(gains: &VehicleGains, n_last: usize, output: usize) -> Result<StateSpace> {
    if n_last == 0 {
        return Err(Error::InvalidConfig("platoon needs N >= 1".into()));
    }
    if output == 0 || output > n_last {
        return Err(Error::IndexOutOfRange {
            index: output,
            last: n_last,
        });
    }
    let dim = 3 * n_last;
    let mut a = DMatrix::<f64>::zeros(dim, dim);
    let mut b = DVector::<f64>::zeros(dim);
    let xs = |n: usize| 3 * (n - 1);
    for n in 1..=n_last {
        let (x, v, z) = (xs(n), xs(n) + 1, xs(n) + 2);
        a[(x, v)] = 1.0;
        a[(v, v)] = -gains.xi;
        a[(v, z)] = gains.ki;
        // e = x_{n-1} − 2x_n + x_{n+1}, or x_{N-1} − x_N at the rear
        let mut coupling = vec![(n - 1, 1.0)];
        if n < n_last {
            coupling.push((n, -2.0));
            coupling.push((n + 1, 1.0));
        } else {
            coupling.push((n, -1.0));
        }
        for (m, w) in coupling {
            if m == 0 {
                b[v] += gains.kp * w;
                b[z] += w;
            } else {
                a[(v, xs(m))] += gains.kp * w;
                a[(z, xs(m))] += w;
            }
        }
    }
    let mut c = RowDVector::<f64>::zeros(dim);
    c[xs(output)] = 1.0;
    StateSpace::new(a, b, c, 0.0)
}
