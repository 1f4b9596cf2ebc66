//! `theta,density` CSV exchange for density grids.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::density::DensityGrid;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "theta,density";
const ANGLE_SNAP: f64 = 1e-9;

/// `printf("%.12g")`-style formatting.
pub fn fmt_g(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Header plus one `theta,density` row per sample, LF line endings.
pub fn to_csv(grid: &DensityGrid) -> String {
    let mut out = String::with_capacity(32 * (grid.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (&a, &v) in grid.angles().iter().zip(grid.values()) {
        let _ = writeln!(out, "{},{}", fmt_g(a), fmt_g(v));
    }
    out
}

/// Parse a grid written by [`to_csv`]; blank lines are ignored.
pub fn from_csv(text: &str) -> Result<DensityGrid> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        Some((i, h)) => {
            return Err(Error::Parse(format!("line {}: expected header `{CSV_HEADER}`, found `{h}`", i + 1)));
        }
        None => return Err(Error::Parse("empty input".into())),
    }
    let mut angles = Vec::new();
    let mut values = Vec::new();
    for (i, line) in lines {
        let mut fields = line.trim().split(',');
        let (Some(a), Some(v), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse(format!("line {}: expected two fields", i + 1)));
        };
        let parse = |s: &str, what: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: bad {what} `{s}`: {e}", i + 1)))
        };
        let mut a = parse(a, "theta")?;
        // 12 significant digits put -π just below the interval
        if a < -PI && a > -PI - ANGLE_SNAP {
            a = -PI;
        }
        angles.push(a);
        values.push(parse(v, "density")?);
    }
    DensityGrid::new(angles, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::pk_grid;

    #[test]
    fn g_format() {
        assert_eq!(fmt_g(0.0), "0");
        assert_eq!(fmt_g(1.0), "1");
        assert_eq!(fmt_g(-std::f64::consts::PI), "-3.14159265359");
        assert_eq!(fmt_g(1.0 / std::f64::consts::TAU), "0.159154943092");
        assert_eq!(fmt_g(1.5e-7), "1.5e-07");
        assert_eq!(fmt_g(123456789012345.0), "1.23456789012e+14");
        assert_eq!(fmt_g(0.0001), "0.0001");
        assert_eq!(fmt_g(999999999999.5), "1e+12");
    }

    #[test]
    fn round_trip() {
        let g = pk_grid(0.4, 0.3, 64).unwrap();
        let text = to_csv(&g);
        assert!(text.starts_with("theta,density\n") && !text.contains('\r'));
        let back = from_csv(&text).unwrap();
        assert_eq!(back.len(), 64);
        for (a, b) in g.values().iter().zip(back.values()) {
            assert!((a - b).abs() <= 1e-11 * a);
        }
    }

    #[test]
    fn malformed() {
        assert!(matches!(from_csv(""), Err(Error::Parse(_))));
        assert!(matches!(from_csv("x,y\n0,1\n"), Err(Error::Parse(_))));
        assert!(matches!(from_csv("theta,density\n0,abc\n"), Err(Error::Parse(_))));
        assert!(matches!(from_csv("theta,density\n0,1,2\n"), Err(Error::Parse(_))));
        assert!(matches!(from_csv("theta,density\n0,1\n-1,1\n"), Err(Error::InvalidGrid(_))));
    }
}
