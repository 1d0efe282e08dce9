//! Human-readable output: real/imag pairs at 12 significant digits.

use seqprod::{FiniteObservable, Matrix, ProbabilityMeasure, C64};

const SIG: i32 = 12;

pub fn num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let exp = x.abs().log10().floor() as i32;
    let s = if (-5..SIG).contains(&exp) {
        trim(format!("{:.*}", (SIG - 1 - exp).max(0) as usize, x))
    } else {
        let s = format!("{:.*e}", (SIG - 1) as usize, x);
        let (mantissa, e) = s.split_once('e').expect("scientific format");
        format!("{}e{e}", trim(mantissa.to_string()))
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn trim(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

fn complex(z: C64) -> String {
    format!("({}, {})", num(z.re), num(z.im))
}

pub fn matrix(m: &Matrix, indent: usize) -> String {
    let cells: Vec<Vec<String>> = m
        .rows()
        .into_iter()
        .map(|r| r.into_iter().map(complex).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(0);
    let pad = " ".repeat(indent);
    let mut out = String::new();
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:<width$}")).collect();
        out.push_str(&pad);
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

pub fn observable(a: &FiniteObservable) -> String {
    let mut out = format!("observable on C^{} with {} outcomes\n", a.dim(), a.len());
    for (x, e) in a.iter() {
        out.push_str(&format!("{x}:\n"));
        out.push_str(&matrix(e.matrix(), 2));
    }
    out
}

pub fn measure(mu: &ProbabilityMeasure) -> String {
    mu.iter().map(|(x, p)| format!("  {x}: {}\n", num(p))).collect()
}
