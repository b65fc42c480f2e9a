use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Deterministic generator for one simulation.
pub fn noise_rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Fills `out[1..]` with independent `N(0, σ²)` draws; the leader slot
/// `out[0]` is always zero.
pub fn inject_noise<R: Rng>(rng: &mut R, sigma2: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 0.0;
    if sigma2 == 0.0 {
        out[1..].fill(0.0);
        return;
    }
    let normal = Normal::new(0.0, sigma2.sqrt()).expect("finite non-negative variance");
    for v in &mut out[1..] {
        *v = normal.sample(rng);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_variance_is_silent() {
        let mut rng = noise_rng(1);
        let mut buf = vec![9.0; 5];
        inject_noise(&mut rng, 0.0, &mut buf);
        assert!(buf.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn unit_variance() {
        let mut rng = noise_rng(7);
        let mut buf = vec![0.0; 1001];
        let (mut sum, mut sq, mut count) = (0.0, 0.0, 0.0);
        for _ in 0..1000 {
            inject_noise(&mut rng, 1.0, &mut buf);
            assert_eq!(buf[0], 0.0);
            for v in &buf[1..] {
                sum += v;
                sq += v * v;
                count += 1.0;
            }
        }
        let mean = sum / count;
        let var = sq / count - mean * mean;
        assert!((var - 1.0).abs() < 0.01, "variance {var}");
    }

    #[test]
    fn seeded_streams_repeat() {
        let draw = |seed| {
            let mut rng = noise_rng(seed);
            let mut buf = vec![0.0; 8];
            inject_noise(&mut rng, 2.0, &mut buf);
            buf
        };
        assert_eq!(draw(3), draw(3));
        assert_ne!(draw(3), draw(4));
    }
}
