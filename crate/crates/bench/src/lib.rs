//! Sample inputs shared by the benchmarks.

use gridzeta::Complex64;

/// Points of Ω used across benchmarks, from near zero to near the slits.
pub fn sample_points() -> Vec<Complex64> {
    vec![
        Complex64::new(0.05, 0.0),
        Complex64::new(0.15, 0.1),
        Complex64::new(-0.25, 0.2),
        Complex64::new(0.3, 0.0),
        Complex64::new(0.0, 0.5),
    ]
}
