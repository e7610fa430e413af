use std::f64::consts::PI;

use crate::error::{Error, Result};

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Inverse error function on `(-1, 1)`.
///
/// Starts from Giles' polynomial approximation and applies Newton corrections;
/// for `|y| > 0.5` the residual is formed with `erfc` to keep precision near ±1.
pub fn erf_inv(y: f64) -> Result<f64> {
    if !(y.abs() < 1.0) {
        return Err(Error::Domain(format!("erf_inv argument {y} outside (-1, 1)")));
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    let sign = y.signum();
    let a = y.abs();
    let mut x = giles_initial(a);
    let two_over_sqrt_pi = 2.0 / PI.sqrt();
    for _ in 0..3 {
        let residual = if a > 0.5 { (1.0 - a) - erfc(x) } else { erf(x) - a };
        let slope = two_over_sqrt_pi * (-x * x).exp();
        let step = residual / slope;
        // Halley correction: erf'' = -2x erf'
        let step = step / (1.0 + x * step);
        x -= step;
        if step.abs() <= 1e-17 * x.abs() {
            break;
        }
    }
    Ok(sign * x)
}

fn giles_initial(a: f64) -> f64 {
    let mut w = -((1.0 - a) * (1.0 + a)).ln();
    if w < 6.25 {
        w -= 3.125;
        let mut p = -3.6444120640178196996e-21;
        for c in [
            -1.685059138182016589e-19,
            1.2858480715256400167e-18,
            1.115787767802518096e-17,
            -1.333171662854620906e-16,
            2.0972767875968561637e-17,
            6.6376381343583238325e-15,
            -4.0545662729752068639e-14,
            -8.1519341976054721522e-14,
            2.6335093153082322977e-12,
            -1.2975133253453532498e-11,
            -5.4154120542946279317e-11,
            1.051212273321532285e-09,
            -4.1126339803469836976e-09,
            -2.9070369957882005086e-08,
            4.2347877827932403518e-07,
            -1.3654692000834678645e-06,
            -1.3882523362786468719e-05,
            0.0001867342080340571352,
            -0.00074070253416626697512,
            -0.0060336708714301490533,
            0.24015818242558961693,
            1.6536545626831027356,
        ] {
            p = c + p * w;
        }
        p * a
    } else if w < 16.0 {
        w = w.sqrt() - 3.25;
        let mut p = 2.2137376921775787049e-09;
        for c in [
            9.0756561938885390979e-08,
            -2.7517406297064545428e-07,
            1.8239629214389227755e-08,
            1.5027403968909827627e-06,
            -4.013867526981545969e-06,
            2.9234449089955446044e-06,
            1.2475304481671778723e-05,
            -4.7318229009055733981e-05,
            6.8284851459573175448e-05,
            2.4031110387097893999e-05,
            -0.0003550375203628474796,
            0.00095328937973738049703,
            -0.0016882755560235047313,
            0.0024914420961078508066,
            -0.0037512085075692412107,
            0.005370914553590063617,
            1.0052589676941592334,
            3.0838856104922207635,
        ] {
            p = c + p * w;
        }
        p * a
    } else {
        w = w.sqrt() - 5.0;
        let mut p = -2.7109920616438573243e-11;
        for c in [
            -2.5556418169965252055e-10,
            1.5076572693500548083e-09,
            -3.7894654401267369937e-09,
            7.6157012080783393804e-09,
            -1.4960026627149240478e-08,
            2.9147953450901080826e-08,
            -6.7711997758452339498e-08,
            2.2900482228026654717e-07,
            -9.9298272942317002539e-07,
            4.5260625972231537039e-06,
            -1.9681778105531670567e-05,
            7.5995277030017761139e-05,
            -0.00021503011930044477347,
            -0.00013871931833623122026,
            1.0103004648645343977,
            4.8499064014085844221,
        ] {
            p = c + p * w;
        }
        p * a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Maclaurin series, accurate to ~1e-16 for |x| ≤ 2.
    fn erf_series(x: f64) -> f64 {
        let mut term = x;
        let mut sum = x;
        for n in 1..80 {
            term *= -x * x / n as f64;
            sum += term / (2 * n + 1) as f64;
        }
        2.0 / PI.sqrt() * sum
    }

    fn erf_inv_bisection(y: f64) -> f64 {
        let (mut lo, mut hi) = (-7.0, 7.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if erf(mid) < y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn erf_inv_at_zero() {
        assert_eq!(erf_inv(0.0).unwrap(), 0.0);
    }

    #[test]
    fn erf_matches_series() {
        assert!((erf(1.0) - 0.8427007929).abs() < 1e-10);
        for i in 0..=40 {
            let x = -2.0 + 0.1 * i as f64;
            let s = erf_series(x);
            assert!((erf(x) - s).abs() <= 1e-15 * s.abs().max(1e-300) + 1e-16, "x={x}");
        }
    }

    #[test]
    fn roundtrip_on_thousand_points() {
        let mut worst: f64 = 0.0;
        for i in 0..1000 {
            let y = -0.999 + 1.998 * (i as f64 + 0.5) / 1000.0;
            let x = erf_inv(y).unwrap();
            worst = worst.max((erf(x) - y).abs());
            let oracle = erf_inv_bisection(y);
            assert!((x - oracle).abs() < 1e-12, "y={y}: {x} vs {oracle}");
        }
        assert!(worst < 1e-13, "worst roundtrip {worst}");
    }

    #[test]
    fn extreme_arguments() {
        for &y in &[1.0 - 1e-12, -(1.0 - 1e-15), 1e-300, 0.9999999] {
            let x = erf_inv(y).unwrap();
            assert!((erfc(x.abs()) - (1.0 - y.abs())).abs() <= 1e-12 * (1.0 - y.abs()) + 1e-300);
        }
        assert!(erf_inv(1.0).is_err());
        assert!(erf_inv(-1.0).is_err());
        assert!(erf_inv(f64::NAN).is_err());
    }
}
