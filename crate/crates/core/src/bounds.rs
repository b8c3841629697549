//! Asymptotic rate curves of the tower construction.
//!
//! `r1` is R_m(δ) = 1 − 2/(2^m − 1) − 4mδ; `alt` is
//! 1 − (10/3)mδ − 2/(2^m − 1). Each family is piecewise in m: m is used on
//! [lo(m), lo(m − 1)], where lo(m) is the crossing point of the lines for m
//! and m + 1, so the envelope is the upper hull of the lines. The `alt`
//! family is only used up to δ = 5/84, which leaves m = 2 empty.
//!
//! Raw values are kept; [`RatePoint::rate`] is clamped at 0 for output.

use std::fmt;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

pub const M_MIN: u32 = 2;
pub const M_MAX: u32 = 30;
pub const ALT_DELTA_MAX: f64 = 5.0 / 84.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Curve {
    R1,
    Alt,
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Curve::R1 => "r1",
            Curve::Alt => "alt",
        })
    }
}

fn p2(m: u32) -> f64 {
    2f64.powi(m as i32)
}

pub fn r1_of_m(m: u32, delta: f64) -> f64 {
    1.0 - 2.0 / (p2(m) - 1.0) - 4.0 * m as f64 * delta
}

pub fn alt_of_m(m: u32, delta: f64) -> f64 {
    1.0 - (10.0 / 3.0) * m as f64 * delta - 2.0 / (p2(m) - 1.0)
}

/// Lower end of the r1 range for m: 2^{m−1}/((2^m − 1)(2^{m+1} − 1)).
pub fn r1_lower(m: u32) -> f64 {
    p2(m - 1) / ((p2(m) - 1.0) * (p2(m + 1) - 1.0))
}

/// Upper end of the r1 range for m: 2^{m−2}/((2^{m−1} − 1)(2^m − 1)).
pub fn r1_upper(m: u32) -> f64 {
    p2(m - 2) / ((p2(m - 1) - 1.0) * (p2(m) - 1.0))
}

/// Lower end of the alt range for m: 3·2^m/(5(2^m − 1)(2^{m+1} − 1)).
pub fn alt_lower(m: u32) -> f64 {
    3.0 * p2(m) / (5.0 * (p2(m) - 1.0) * (p2(m + 1) - 1.0))
}

/// min{5/84, 3·2^{m−1}/(5(2^{m−1} − 1)(2^m − 1))}.
pub fn alt_upper(m: u32) -> f64 {
    let own = 3.0 * p2(m - 1) / (5.0 * (p2(m - 1) - 1.0) * (p2(m) - 1.0));
    own.min(ALT_DELTA_MAX)
}

fn check_delta(delta: f64) -> Result<()> {
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    Ok(())
}

/// (rate, m): the smallest m whose range contains δ; m = 2 above every
/// range; m = 30 below every range.
pub fn r1_envelope(delta: f64) -> Result<(f64, u32)> {
    check_delta(delta)?;
    if delta > r1_upper(M_MIN) {
        return Ok((r1_of_m(M_MIN, delta), M_MIN));
    }
    let m = (M_MIN..=M_MAX)
        .find(|&m| r1_lower(m) <= delta && delta <= r1_upper(m))
        .unwrap_or(M_MAX);
    Ok((r1_of_m(m, delta), m))
}

/// (rate, m) on (0, 5/84]; larger δ is outside the curve.
pub fn alt_envelope(delta: f64) -> Result<(f64, u32)> {
    check_delta(delta)?;
    if delta > ALT_DELTA_MAX {
        return Err(Error::InvalidParameter(format!(
            "delta {delta} exceeds the alt upper endpoint 5/84"
        )));
    }
    let m = (M_MIN..=M_MAX)
        .find(|&m| alt_lower(m) <= delta && delta <= alt_upper(m))
        .unwrap_or(M_MAX);
    Ok((alt_of_m(m, delta), m))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatePoint {
    pub delta: f64,
    /// `None` when δ is outside the curve's range.
    pub raw_rate: Option<f64>,
    pub m: Option<u32>,
    pub curve: Curve,
}

impl RatePoint {
    pub fn rate(&self) -> Option<f64> {
        self.raw_rate.map(|r| r.max(0.0))
    }
}

pub fn evaluate(curve: Curve, delta: f64) -> Result<RatePoint> {
    let got = match curve {
        Curve::R1 => Some(r1_envelope(delta)?),
        Curve::Alt => {
            check_delta(delta)?;
            (delta <= ALT_DELTA_MAX).then(|| alt_envelope(delta)).transpose()?
        }
    };
    Ok(RatePoint {
        delta,
        raw_rate: got.map(|g| g.0),
        m: got.map(|g| g.1),
        curve,
    })
}

/// δ_i = δ_min + i·step for i = 0 ..= ⌊(δ_max − δ_min)/step⌋.
pub fn grid(delta_min: f64, delta_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(delta_min > 0.0 && delta_min < delta_max && step > 0.0 && delta_max.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "bad grid: min {delta_min}, max {delta_max}, step {step}"
        )));
    }
    let count = ((delta_max - delta_min) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| delta_min + i as f64 * step).collect())
}

/// Every curve in `curves` on the grid, curve by curve.
pub fn emit_curves(delta_min: f64, delta_max: f64, step: f64, curves: &[Curve]) -> Result<Vec<RatePoint>> {
    let g = grid(delta_min, delta_max, step)?;
    let mut out = Vec::with_capacity(g.len() * curves.len());
    for &c in curves {
        for &d in &g {
            out.push(evaluate(c, d)?);
        }
    }
    Ok(out)
}

/// C `%.12g`.
pub fn fmt_g12(x: f64) -> String {
    const P: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-4..P).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mant), exp.abs())
    } else {
        trim(&format!("{:.*}", (P - 1 - exp) as usize, x))
    }
}

pub const CSV_HEADER: &str = "delta,rate,raw_rate,m,curve";

pub fn write_csv<W: Write>(mut w: W, points: &[RatePoint]) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for p in points {
        let opt = |v: Option<f64>| v.map(fmt_g12).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_g12(p.delta),
            opt(p.rate()),
            opt(p.raw_rate),
            p.m.map(|m| m.to_string()).unwrap_or_default(),
            p.curve
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-15;

    #[test]
    fn r1_examples() {
        for m in 2..10 {
            assert!((r1_of_m(m, 0.0) - (1.0 - 2.0 / (p2(m) - 1.0))).abs() < EPS);
        }
        assert!((r1_of_m(3, 1.0 / 21.0) - 1.0 / 7.0).abs() < EPS);
        assert!(r1_of_m(2, 1.0 / 24.0).abs() < EPS);
        assert!((r1_of_m(3, 4.0 / 105.0) - r1_of_m(4, 4.0 / 105.0)).abs() < EPS);
        let (rate, m) = r1_envelope(1.0 / 21.0).unwrap();
        assert_eq!(m, 3);
        assert!((rate - 1.0 / 7.0).abs() < EPS);
        assert!(r1_envelope(0.0).is_err());
        assert!(r1_envelope(-1.0).is_err());
        let (small, m_small) = r1_envelope(1e-6).unwrap();
        assert!(m_small > 10);
        assert!(small > 0.99);
    }

    #[test]
    fn range_endpoints() {
        assert!((r1_lower(3) - 4.0 / 105.0).abs() < EPS);
        assert!((r1_upper(3) - 2.0 / 21.0).abs() < EPS);
        for m in 3..=M_MAX {
            assert!((r1_upper(m) - r1_lower(m - 1)).abs() < 1e-15);
        }
        assert!(alt_lower(2) > ALT_DELTA_MAX);
        assert_eq!(alt_upper(3), ALT_DELTA_MAX);
    }

    #[test]
    fn alt_examples() {
        assert!((alt_of_m(3, 0.0) - 5.0 / 7.0).abs() < EPS);
        assert!((alt_of_m(3, 0.03) - 29.0 / 70.0).abs() < EPS);
        assert!((alt_of_m(2, 0.1) + 1.0 / 3.0).abs() < EPS);
        let (rate, m) = alt_envelope(0.03).unwrap();
        assert_eq!(m, 4);
        assert!((rate - 7.0 / 15.0).abs() < EPS);
        assert_eq!(alt_envelope(ALT_DELTA_MAX).unwrap().1, 3);
        assert!(alt_envelope(0.06).is_err());
    }

    #[test]
    fn continuity_at_boundaries() {
        for m in M_MIN..=10 {
            let d = r1_lower(m);
            assert!((r1_of_m(m, d) - r1_of_m(m + 1, d)).abs() < 1e-12);
            let d = alt_lower(m);
            assert!((alt_of_m(m, d) - alt_of_m(m + 1, d)).abs() < 1e-12);
        }
    }

    #[test]
    fn envelope_is_max_over_m() {
        for i in 1..=1000 {
            let d = r1_lower(M_MAX) + (0.5 - r1_lower(M_MAX)) * i as f64 / 1000.0;
            let best = (M_MIN..=M_MAX).map(|m| r1_of_m(m, d)).fold(f64::MIN, f64::max);
            assert!((r1_envelope(d).unwrap().0 - best).abs() < 1e-12, "δ = {d}");
            let d = alt_lower(M_MAX) + (ALT_DELTA_MAX - alt_lower(M_MAX)) * i as f64 / 1000.0;
            let best = (M_MIN..=M_MAX).map(|m| alt_of_m(m, d)).fold(f64::MIN, f64::max);
            assert!((alt_envelope(d).unwrap().0 - best).abs() < 1e-12, "δ = {d}");
        }
    }

    #[test]
    fn emitted_rates_non_increasing() {
        let pts = emit_curves(0.001, 0.5, 0.001, &[Curve::R1, Curve::Alt]).unwrap();
        for c in [Curve::R1, Curve::Alt] {
            let rates: Vec<f64> = pts.iter().filter(|p| p.curve == c).filter_map(|p| p.raw_rate).collect();
            assert!(rates.windows(2).all(|w| w[1] <= w[0] + 1e-15));
        }
        for p in &pts {
            match (p.raw_rate, p.rate()) {
                (Some(raw), Some(r)) => assert_eq!(raw != r, raw < 0.0),
                (None, None) => assert!(p.curve == Curve::Alt && p.delta > ALT_DELTA_MAX),
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn grid_arithmetic() {
        assert_eq!(grid(0.001, 0.07, 0.001).unwrap().len(), 70);
        assert_eq!(emit_curves(0.001, 0.07, 0.001, &[Curve::R1, Curve::Alt]).unwrap().len(), 140);
        assert!(grid(0.0, 0.1, 0.01).is_err());
        assert!(grid(0.1, 0.05, 0.01).is_err());
        assert!(grid(0.01, 0.05, 0.0).is_err());
        let single = emit_curves(1.0 / 21.0, 1.0 / 21.0 + 1e-3, 1.0, &[Curve::R1]).unwrap();
        assert_eq!(single.len(), 1);
        assert!((single[0].rate().unwrap() - 1.0 / 7.0).abs() < EPS);
    }

    #[test]
    fn g12_formatting() {
        assert_eq!(fmt_g12(0.0), "0");
        assert_eq!(fmt_g12(0.003), "0.003");
        assert_eq!(fmt_g12(0.001 + 2.0 * 0.001), "0.003");
        assert_eq!(fmt_g12(1.0 / 7.0), "0.142857142857");
        assert_eq!(fmt_g12(-1.0 / 3.0), "-0.333333333333");
        assert_eq!(fmt_g12(1e-6), "1e-06");
        assert_eq!(fmt_g12(123456789012345.0), "1.23456789012e+14");
        assert_eq!(fmt_g12(30.0), "30");
    }

    #[test]
    fn csv_shape() {
        let pts = emit_curves(0.05, 0.07, 0.01, &[Curve::Alt]).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &pts).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 4);
        assert!(lines[1].ends_with(",3,alt"));
        assert_eq!(lines[2], "0.06,,,,alt");
    }
}
