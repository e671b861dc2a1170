//! Sweep tables as CSV (UTF-8, LF line endings, 9 significant digits).

use std::path::Path;

use super::sweep::SweepResult;
use super::HarnessError;

pub const CSV_HEADER: &str = "scheme,sweep_param,sweep_value,mean_sum_rate_bpshz,stderr,drops,seed";

const SIG_DIGITS: usize = 9;

#[derive(Debug, Clone, PartialEq)]
pub struct CsvRecord {
    pub scheme: String,
    pub sweep_param: String,
    pub sweep_value: f64,
    pub mean_sum_rate: f64,
    pub stderr: f64,
    pub drops: usize,
    pub seed: u64,
}

impl CsvRecord {
    pub fn from_result(result: &SweepResult) -> Vec<Self> {
        result
            .rows
            .iter()
            .map(|r| CsvRecord {
                scheme: r.scheme.name().to_string(),
                sweep_param: result.kind.param().to_string(),
                sweep_value: r.value,
                mean_sum_rate: r.mean,
                stderr: r.stderr,
                drops: r.drops,
                seed: result.provenance.seed,
            })
            .collect()
    }
}

/// Formats `x` with `digits` significant digits in the style of C's `%g`:
/// positional notation for decimal exponents in `[-4, digits)`, scientific
/// otherwise, trailing zeros removed.
pub fn format_sig(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{exp}", trim_fraction(mantissa))
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
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

pub fn render_csv(records: &[CsvRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.scheme,
            r.sweep_param,
            format_sig(r.sweep_value, SIG_DIGITS),
            format_sig(r.mean_sum_rate, SIG_DIGITS),
            format_sig(r.stderr, SIG_DIGITS),
            r.drops,
            r.seed
        ));
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRecord>, HarnessError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        _ => {
            return Err(HarnessError::Csv {
                line: 1,
                message: format!("expected header `{CSV_HEADER}`"),
            })
        }
    }
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, line)| {
            let bad = |message: String| HarnessError::Csv {
                line: i + 1,
                message,
            };
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 7 {
                return Err(bad(format!("expected 7 fields, found {}", fields.len())));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| bad(format!("bad number `{s}`")))
            };
            Ok(CsvRecord {
                scheme: fields[0].to_string(),
                sweep_param: fields[1].to_string(),
                sweep_value: num(fields[2])?,
                mean_sum_rate: num(fields[3])?,
                stderr: num(fields[4])?,
                drops: fields[5]
                    .parse()
                    .map_err(|_| bad(format!("bad drop count `{}`", fields[5])))?,
                seed: fields[6]
                    .parse()
                    .map_err(|_| bad(format!("bad seed `{}`", fields[6])))?,
            })
        })
        .collect()
}

pub fn write_csv(result: &SweepResult, path: &Path) -> Result<(), HarnessError> {
    std::fs::write(path, render_csv(&CsvRecord::from_result(result)))
        .map_err(|e| HarnessError::io(path, e))
}
