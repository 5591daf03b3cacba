use crate::error::{Error, Result};

/// Slack allowed on a float distribution's total mass.
const MASS_TOL: f64 = 1e-9;

pub(crate) fn check_pair(p: &[f64], q: &[f64]) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), found: q.len() });
    }
    for v in [p, q] {
        if v.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidDistribution("negative or non-finite mass".into()));
        }
        let s: f64 = v.iter().sum();
        if (s - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidDistribution(format!("mass {s} differs from 1")));
        }
    }
    Ok(())
}

/// Total variation, ½ Σ |p − q|.
pub fn tv(p: &[f64], q: &[f64]) -> Result<f64> {
    check_pair(p, q)?;
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// KL(p ‖ q) in nats.
pub fn kl(p: &[f64], q: &[f64]) -> Result<f64> {
    check_pair(p, q)?;
    let mut total = 0.0;
    for (i, (&a, &b)) in p.iter().zip(q).enumerate() {
        if a == 0.0 {
            continue;
        }
        if b == 0.0 {
            return Err(Error::InfiniteKl { index: i, p: a });
        }
        total += a * (a / b).ln();
    }
    Ok(total.max(0.0))
}

/// Φ(x) = √min(x/2, 1 − e^{−x}): the better of the Pinsker and
/// Bretagnolle–Huber bounds on total variation.
pub fn phi(x: f64) -> Result<f64> {
    if x.is_nan() || x < -1e-12 {
        return Err(Error::InvalidInput(format!("phi needs a nonnegative argument, got {x}")));
    }
    let x = x.max(0.0);
    if x.is_infinite() {
        return Ok(1.0);
    }
    Ok((x / 2.0).min(-(-x).exp_m1()).sqrt())
}

/// W1 under the discrete metric, which is total variation.
pub fn w1_discrete(p: &[f64], q: &[f64]) -> Result<f64> {
    tv(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn worked_values() {
        assert_abs_diff_eq!(tv(&[0.5, 0.5], &[0.9, 0.1]).unwrap(), 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(tv(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        let expected = 0.5 * (0.5f64 / 0.9).ln() + 0.5 * (0.5f64 / 0.1).ln();
        assert_abs_diff_eq!(kl(&[0.5, 0.5], &[0.9, 0.1]).unwrap(), expected, epsilon = 1e-15);
        assert!(matches!(kl(&[0.5, 0.5], &[1.0, 0.0]), Err(Error::InfiniteKl { index: 1, .. })));
        assert_eq!(phi(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(phi(0.1).unwrap(), 0.05f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(phi(10.0).unwrap(), (1.0 - (-10f64).exp()).sqrt(), epsilon = 1e-15);
        assert!(phi(-1.0).is_err());
        assert!(tv(&[0.5, 0.5], &[1.0]).is_err());
    }
}
