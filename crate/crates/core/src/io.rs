//! CSV writers for trajectories, equilibria, bounds, sweeps and the
//! approximation pipeline.
//!
//! Numbers are written with 6 significant digits (`%g` style) by default or
//! 17 significant digits in full-precision mode.

use std::io::{self, Write};

use crate::bounds::BoundsReport;
use crate::experiments::{ApproxModel, SweepResult};
use crate::graph::Graph;
use crate::model::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Short,
    Full,
}

/// Formats like C's `%.6g`: shortest of fixed or exponent notation, with
/// trailing zeros removed.
fn format_g(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    // Exponent after rounding to `sig` digits.
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn format_number(x: f64, precision: Precision) -> String {
    match precision {
        Precision::Short => format_g(x, 6),
        Precision::Full => format_g(x, 17),
    }
}

struct Csv<'a, W: Write + ?Sized> {
    out: &'a mut W,
    precision: Precision,
}

impl<W: Write + ?Sized> Csv<'_, W> {
    fn num(&self, x: f64) -> String {
        format_number(x, self.precision)
    }

    fn line(&mut self, fields: &[String]) -> io::Result<()> {
        writeln!(self.out, "{}", fields.join(","))
    }
}

/// `t,node,i`, one row per node per step.
pub fn write_trajectory<W: Write + ?Sized>(out: &mut W, traj: &[StateVector], precision: Precision) -> io::Result<()> {
    let mut csv = Csv { out, precision };
    writeln!(csv.out, "t,node,i")?;
    for s in traj {
        for (v, &x) in s.i.iter().enumerate() {
            let row = [s.t.to_string(), v.to_string(), csv.num(x)];
            csv.line(&row)?;
        }
    }
    Ok(())
}

/// `node,degree,i_star`.
pub fn write_equilibrium<W: Write + ?Sized>(out: &mut W, g: &Graph, i_star: &[f64], precision: Precision) -> io::Result<()> {
    let mut csv = Csv { out, precision };
    writeln!(csv.out, "node,degree,i_star")?;
    for (v, &x) in i_star.iter().enumerate() {
        let row = [v.to_string(), g.degree(v).to_string(), csv.num(x)];
        csv.line(&row)?;
    }
    Ok(())
}

/// `node,degree,lower,upper,neq_lower,neq_upper`. The last two columns are
/// empty when the report carries no non-equilibrium bounds.
pub fn write_bounds<W: Write + ?Sized>(out: &mut W, g: &Graph, r: &BoundsReport, precision: Precision) -> io::Result<()> {
    let mut csv = Csv { out, precision };
    writeln!(csv.out, "node,degree,lower,upper,neq_lower,neq_upper")?;
    for v in 0..g.node_count() {
        let (lo, hi) = match &r.nonequilibrium {
            Some(ne) => (csv.num(ne.lower[v]), csv.num(ne.upper[v])),
            None => (String::new(), String::new()),
        };
        let row = [v.to_string(), g.degree(v).to_string(), csv.num(r.lower), csv.num(r.upper[v]), lo, hi];
        csv.line(&row)?;
    }
    Ok(())
}

/// `node_param,outer_param,i_h,i_l,tau`.
pub fn write_sweep<W: Write + ?Sized>(out: &mut W, sweep: &SweepResult, precision: Precision) -> io::Result<()> {
    let mut csv = Csv { out, precision };
    writeln!(csv.out, "node_param,outer_param,i_h,i_l,tau")?;
    for r in &sweep.rows {
        let row = [
            csv.num(r.node_param()),
            csv.num(r.outer_param()),
            csv.num(r.i_h),
            csv.num(r.i_l),
            csv.num(r.tau),
        ];
        csv.line(&row)?;
    }
    Ok(())
}

/// `node,degree,i_star,lower,upper,i_tilde,i_hat`, rows grouped by grid triple
/// in grid order.
pub fn write_approx<W: Write + ?Sized>(out: &mut W, model: &ApproxModel, precision: Precision) -> io::Result<()> {
    let mut csv = Csv { out, precision };
    writeln!(csv.out, "node,degree,i_star,lower,upper,i_tilde,i_hat")?;
    for r in &model.rows {
        let row = [
            r.node.to_string(),
            r.degree.to_string(),
            csv.num(r.i_star),
            csv.num(r.lower),
            csv.num(r.upper),
            csv.num(r.i_tilde),
            csv.num(r.i_hat),
        ];
        csv.line(&row)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_format_matches_printf_g() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (0.2857142857142857, "0.285714"),
            (14.113812, "14.1138"),
            (3.1622776601683795, "3.16228"),
            (123456.7, "123457"),
            (1234567.0, "1.23457e+06"),
            (0.0001234567, "0.000123457"),
            (0.00001234567, "1.23457e-05"),
            (-0.5, "-0.5"),
            (999999.5, "1e+06"),
            (f64::INFINITY, "inf"),
        ];
        for (x, want) in cases {
            assert_eq!(format_number(x, Precision::Short), want, "{x}");
        }
    }

    #[test]
    fn full_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, 2.0f64.sqrt(), 1e-300, 0.46332495807108] {
            let s = format_number(x, Precision::Full);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn trajectory_layout() {
        let traj = vec![StateVector::new(vec![0.0, 0.5], 0).unwrap(), StateVector::new(vec![0.2, 0.25], 1).unwrap()];
        let mut buf = Vec::new();
        write_trajectory(&mut buf, &traj, Precision::Short).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t,node,i\n0,0,0\n0,1,0.5\n1,0,0.2\n1,1,0.25\n");
    }
}
