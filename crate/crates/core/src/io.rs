//! Text formats: sweep CSV, generated plot scripts, distribution and state
//! files.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use num_complex::Complex;

use crate::distribution::JointDistribution;
use crate::error::{Error, Result};
use crate::num::Real;
use crate::quantum_state::StateVector;
use crate::sweep::SweepTable;

/// Renders `x` like C's `%.{sig}g`.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sig = sig.max(1);
    // exponent after rounding to `sig` digits
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn csv_header(n: usize) -> String {
    let levels: Vec<String> = (1..=n).map(|k| format!("I{k}")).collect();
    format!("alpha,{},entropy_bits,sum_residual,projection_residual", levels.join(","))
}

/// Writes the sweep table as CSV: α with 12 decimals, everything else with
/// 12 significant digits.
pub fn emit_csv<T: Real, W: Write>(table: &SweepTable<T>, mut out: W) -> Result<()> {
    writeln!(out, "{}", csv_header(table.n))?;
    for row in &table.rows {
        let mut fields = vec![format!("{:.12}", row.alpha.to_f64_lossy())];
        fields.extend(row.spectrum.values.iter().map(|v| format_sig(v.to_f64_lossy(), 12)));
        for v in [row.entropy, row.sum_residual, row.projection_residual] {
            fields.push(format_sig(v.to_f64_lossy(), 12));
        }
        writeln!(out, "{}", fields.join(","))?;
    }
    out.flush()?;
    Ok(())
}

/// One parsed CSV record.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub alpha: f64,
    pub levels: Vec<f64>,
    pub entropy: f64,
    pub sum_residual: f64,
    pub projection_residual: f64,
}

/// Parses output of [`emit_csv`].
pub fn read_csv<R: BufRead>(input: R) -> Result<Vec<CsvRow>> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("missing CSV header".into()))??;
    let columns = header.split(',').count();
    if columns < 5 {
        return Err(Error::Parse(format!("unexpected header {header:?}")));
    }
    let n = columns - 4;
    if header != csv_header(n) {
        return Err(Error::Parse(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        let values: Vec<f64> = line
            .split(',')
            .map(|f| f.parse::<f64>().map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 2))))
            .collect::<Result<_>>()?;
        if values.len() != columns {
            return Err(Error::Parse(format!("line {}: expected {columns} fields", lineno + 2)));
        }
        rows.push(CsvRow {
            alpha: values[0],
            levels: values[1..=n].to_vec(),
            entropy: values[n + 1],
            sum_residual: values[n + 2],
            projection_residual: values[n + 3],
        });
    }
    Ok(rows)
}

/// Plot script path for a CSV path: same stem, `.py` extension.
pub fn plot_script_path(csv: &Path) -> PathBuf {
    csv.with_extension("py")
}

/// Writes a matplotlib script that reads `csv_name` (resolved next to the
/// script) and draws every `I^(k)` against α.
pub fn emit_plot_script<T: Real, W: Write>(table: &SweepTable<T>, csv_name: &str, mut out: W) -> Result<()> {
    let png = Path::new(csv_name).with_extension("png");
    let png = png.to_string_lossy();
    let series: Vec<String> = (1..=table.n).map(|k| format!("    (\"I{k}\", r\"$I^{{({k})}}$\"),")).collect();
    write!(
        out,
        r#"#!/usr/bin/env python3
# Hierarchical information of the {label} family, generated by hierinfo.
import csv
import os

import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
with open(os.path.join(HERE, "{csv_name}"), newline="") as fh:
    rows = list(csv.DictReader(fh))

alpha = [float(r["alpha"]) for r in rows]
SERIES = [
{series}
]

fig, ax = plt.subplots(figsize=(6.0, 4.5))
for column, label in SERIES:
    ax.plot(alpha, [float(r[column]) for r in rows], label=label)
ax.set_xlabel(r"$\alpha$")
ax.set_ylabel("bits")
ax.set_title(r"Hierarchical information $I^{{(k)}}$ of $\varrho_{{\mathrm{{{label}}}}}(\alpha)$ ({label} family)")
ax.set_xlim(0.0, 1.0)
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(HERE, "{png}"), dpi=150)
"#,
        label = table.label,
        series = series.join("\n"),
    )?;
    out.flush()?;
    Ok(())
}

/// Reads a distribution file: a header line `n s₁ … sₙ` followed by one
/// probability per line in flat-index order. Blank lines and `#` comments
/// are ignored.
pub fn read_distribution<R: BufRead>(input: R) -> Result<JointDistribution<f64>> {
    let mut tokens = data_lines(input)?.into_iter();
    let header = tokens.next().ok_or_else(|| Error::Parse("empty distribution file".into()))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|e| Error::Parse(format!("header {header:?}: {e}"))))
        .collect::<Result<_>>()?;
    let (&n, sizes) = nums.split_first().ok_or_else(|| Error::Parse("empty header".into()))?;
    if sizes.len() != n {
        return Err(Error::Parse(format!("header declares {n} variables but lists {} sizes", sizes.len())));
    }
    let probs: Vec<f64> = tokens
        .map(|t| t.trim().parse().map_err(|e| Error::Parse(format!("probability {t:?}: {e}"))))
        .collect::<Result<_>>()?;
    JointDistribution::new(sizes.to_vec(), probs)
}

pub fn write_distribution<T: Real, W: Write>(p: &JointDistribution<T>, mut out: W) -> Result<()> {
    let sizes: Vec<String> = p.sizes().iter().map(|s| s.to_string()).collect();
    writeln!(out, "{} {}", p.n_vars(), sizes.join(" "))?;
    for x in p.probs() {
        writeln!(out, "{}", format_sig(x.to_f64_lossy(), 17))?;
    }
    Ok(())
}

/// Reads a pure-state file: a line with the qubit count, then `2^n` lines of
/// `re [im]` amplitudes in basis-index order. The state must be normalised.
pub fn read_state<R: BufRead>(input: R) -> Result<StateVector<f64>> {
    let mut lines = data_lines(input)?.into_iter();
    let n: usize = lines
        .next()
        .ok_or_else(|| Error::Parse("empty state file".into()))?
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("qubit count: {e}")))?;
    if n == 0 || n > 24 {
        return Err(Error::Parse(format!("unsupported qubit count {n}")));
    }
    let amps: Vec<Complex<f64>> = lines
        .map(|l| {
            let parts: Vec<f64> = l
                .split_whitespace()
                .map(|t| t.parse().map_err(|e| Error::Parse(format!("amplitude {l:?}: {e}"))))
                .collect::<Result<_>>()?;
            match parts[..] {
                [re] => Ok(Complex::new(re, 0.0)),
                [re, im] => Ok(Complex::new(re, im)),
                _ => Err(Error::Parse(format!("amplitude line {l:?} needs 1 or 2 numbers"))),
            }
        })
        .collect::<Result<_>>()?;
    if amps.len() != 1 << n {
        return Err(Error::Parse(format!("expected {} amplitudes, found {}", 1usize << n, amps.len())));
    }
    let psi = StateVector::new(amps)?;
    if !psi.is_normalized() {
        return Err(Error::invalid(format!("state is not normalised (residual {:e})", psi.norm_residual())));
    }
    Ok(psi)
}

fn data_lines<R: BufRead>(input: R) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for line in input.lines() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim();
        if !body.is_empty() {
            out.push(body.to_string());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_rendering() {
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(3.0, 12), "3");
        assert_eq!(format_sig(2.0000000000001, 12), "2");
        assert_eq!(format_sig(0.245112497836, 12), "0.245112497836");
        assert_eq!(format_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_sig(1.5e-16, 12), "1.5e-16");
        assert_eq!(format_sig(-2.220446049250313e-16, 12), "-2.22044604925e-16");
        assert_eq!(format_sig(123456789012345.0, 12), "1.23456789012e+14");
        assert_eq!(format_sig(0.0001, 12), "0.0001");
        assert_eq!(format_sig(0.99999999999999, 12), "1");
    }

    #[test]
    fn distribution_file_round_trip() {
        let text = "# three bits\n3 2 2 2\n0.5\n0\n0\n0\n0\n0\n0\n0.5\n";
        let p = read_distribution(text.as_bytes()).unwrap();
        assert_eq!(p.probs()[7], 0.5);
        let mut buf = Vec::new();
        write_distribution(&p, &mut buf).unwrap();
        assert_eq!(read_distribution(&buf[..]).unwrap(), p);
    }

    #[test]
    fn malformed_distribution_files() {
        assert!(read_distribution("2 2\n0.5\n0.5\n".as_bytes()).is_err());
        assert!(read_distribution("1 2\n0.5\nx\n".as_bytes()).is_err());
        assert!(read_distribution("1 2\n0.5\n0.6\n".as_bytes()).is_err());
        assert!(read_distribution("".as_bytes()).is_err());
    }

    #[test]
    fn state_file() {
        let s = 0.5f64.sqrt();
        let text = format!("2\n{s}\n0\n0 0\n0 {s}\n");
        let psi = read_state(text.as_bytes()).unwrap();
        assert_eq!(psi.amplitudes()[3], Complex::new(0.0, s));
        assert!(read_state("2\n1\n1\n0\n0\n".as_bytes()).is_err());
        assert!(read_state("2\n1\n0\n".as_bytes()).is_err());
    }

    #[test]
    fn plot_path_swaps_extension() {
        assert_eq!(plot_script_path(Path::new("out/w.csv")), PathBuf::from("out/w.py"));
    }
}
