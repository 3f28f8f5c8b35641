//! CSV output with shortest round-trip float formatting.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::run::{AlphaRow, MomentRow, Replication};
use crate::error::Result;

pub const SUMMARY_HEADER: &str = "n,rep,seed,C_total,L2_sum,LR2_sum,R2_sum,max_cluster";
pub const ALPHA_HEADER: &str = "n,alpha,mean_C_over_n,se,phi,abs_err";
pub const MOMENTS_HEADER: &str = "n,k,estimate,se,theory,rel_err";

/// Shortest decimal string that parses back to `x`.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x}")
    }
}

fn optional(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

pub fn write_summary<W: Write>(out: &mut W, rows: &[Replication]) -> Result<()> {
    writeln!(out, "{SUMMARY_HEADER}")?;
    for r in rows {
        let s = &r.stats;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            s.n,
            r.rep,
            r.seed,
            format_float(s.total_cost()),
            s.l2_sum,
            s.lr2_sum,
            s.r2_sum,
            s.max_cluster
        )?;
    }
    Ok(())
}

pub fn write_alpha<W: Write>(out: &mut W, rows: &[AlphaRow]) -> Result<()> {
    writeln!(out, "{ALPHA_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n,
            format_float(r.alpha),
            format_float(r.mean_cost_over_n),
            format_float(r.se),
            format_float(r.phi),
            format_float(r.abs_err)
        )?;
    }
    Ok(())
}

pub fn write_moments<W: Write>(out: &mut W, rows: &[MomentRow]) -> Result<()> {
    writeln!(out, "{MOMENTS_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n,
            r.k,
            format_float(r.estimate),
            format_float(r.se),
            optional(r.theory),
            optional(r.rel_err)
        )?;
    }
    Ok(())
}

/// Renders with `write` into a string.
pub fn render<F>(write: F) -> Result<String>
where
    F: FnOnce(&mut Vec<u8>) -> Result<()>,
{
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is ASCII"))
}

/// Writes through `write` to the file at `path`, replacing it.
pub fn write_file<F>(path: &Path, write: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<()>,
{
    let mut out = BufWriter::new(File::create(path)?);
    write(&mut out)?;
    out.flush()?;
    Ok(())
}
