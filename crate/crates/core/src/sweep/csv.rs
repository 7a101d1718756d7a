use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use super::SweepRecord;
use crate::error::Result;

pub const CSV_HEADER: &str =
    "d,j,t,theta,gamma,concurrence,l_tra,lhs,w,u,h_rb,h_sb,h_ab,eur_rhs,u_eur";

const SIG_DIGITS: i32 = 17;

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros dropped,
/// exponent form when the decimal exponent is below -4 or at least 17.
pub fn format_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    // rounding to 17 digits fixes the exponent, including carries like 9.99.. -> 1e1
    let sci = format!("{:.*e}", (SIG_DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..SIG_DIGITS).contains(&exp) {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIG_DIGITS - 1 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn field(v: Option<f64>) -> String {
    v.map(format_g17).unwrap_or_default()
}

/// The fifteen rendered fields of one record, in header order.
pub fn record_fields(r: &SweepRecord) -> Vec<String> {
    let mut fields = vec![
        format_g17(r.d),
        format_g17(r.j),
        format_g17(r.t),
        format_g17(r.theta),
    ];
    match &r.values {
        Some(v) => fields.extend([
            format_g17(v.gamma),
            format_g17(v.concurrence),
            format_g17(v.l_tra),
            format_g17(v.lhs),
            format_g17(v.w),
            field(v.u),
            format_g17(v.h_rb),
            format_g17(v.h_sb),
            format_g17(v.h_ab),
            format_g17(v.eur_rhs),
            field(v.u_eur),
        ]),
        None => fields.extend(std::iter::repeat_n(String::new(), 11)),
    }
    fields
}

fn record_line(r: &SweepRecord) -> String {
    record_fields(r).join(",")
}

pub fn write_csv<W: Write>(records: &[SweepRecord], out: &mut W) -> Result<()> {
    out.write_all(CSV_HEADER.as_bytes())?;
    out.write_all(b"\n")?;
    for r in records {
        out.write_all(record_line(r).as_bytes())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn emit_csv(records: &[SweepRecord], path: &Path) -> Result<()> {
    let with_path = |e: io::Error| io::Error::new(e.kind(), format!("{}: {e}", path.display()));
    let mut out = BufWriter::new(File::create(path).map_err(with_path)?);
    write_csv(records, &mut out)?;
    out.flush().map_err(with_path)?;
    Ok(())
}
