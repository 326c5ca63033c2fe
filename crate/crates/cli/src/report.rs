//! Text rendering of verdicts and reports, and CSV output with 17
//! significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use stochord_core::{
    CheckVerdict, OracleReport, OrderingVerdict, TheoremReport, ViolationSite,
};

pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes rows of f64 columns under a header line.
pub fn write_csv(path: &Path, header: &str, rows: &[Vec<f64>]) -> Result<()> {
    let mut out = String::with_capacity(rows.len() * 64);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|&v| fmt_float(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn describe_ordering(v: &OrderingVerdict) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        "{} (worst violation {:.3e}, {} points, {} trimmed",
        if v.holds { "holds" } else { "FAILS" },
        v.worst_violation,
        v.points_checked,
        v.trimmed
    );
    if let Some(site) = &v.violation_at {
        match site {
            ViolationSite::At(x) => {
                let _ = write!(s, ", worst at x = {x:.6}");
            }
            ViolationSite::AtN { n, x } => {
                let _ = write!(s, ", worst at n = {n}, x = {x:.6}");
            }
        }
    }
    if v.low_coverage {
        s.push_str(", LOW_COVERAGE");
    }
    s.push(')');
    s
}

pub fn describe_check(v: &CheckVerdict) -> String {
    match v {
        CheckVerdict::Ordering(o) => describe_ordering(o),
        CheckVerdict::Kernel(k) => format!(
            "{} (worst minor violation {:.3e}, {} minors)",
            if k.holds { "holds" } else { "FAILS" },
            k.worst_violation,
            k.minors_checked
        ),
    }
}

pub fn print_theorem_report(report: &TheoremReport) {
    println!("theorem {}", report.id);
    println!("pmf: {}", report.pmf_source);
    for h in &report.hypotheses {
        println!("hypothesis [{}]: {}", h.label, describe_check(&h.verdict));
    }
    println!(
        "conclusion [{}]: {}",
        report.conclusion.label,
        describe_check(&report.conclusion.verdict)
    );
    for note in &report.notes {
        println!("note: {note}");
    }
    println!("classification: {}", report.classification);
    // Machine-readable summary block.
    let hyp_pass = report
        .hypotheses
        .iter()
        .filter(|h| h.verdict.holds())
        .count();
    println!(
        "SUMMARY theorem={} classification={} hypotheses={}/{} conclusion={}",
        report.id,
        report.classification,
        hyp_pass,
        report.hypotheses.len(),
        if report.conclusion.verdict.holds() {
            "holds"
        } else {
            "fails"
        }
    );
}

pub fn print_oracle_report(label: &str, report: &OracleReport) {
    println!("oracle [{label}] (band: {} standard errors)", report.confidence_k);
    for row in &report.rows {
        println!(
            "checkpoint {:>10.4}: analytic {:.8} empirical {:.8} se {:.3e} z {:+.3} {}",
            row.x,
            row.analytic,
            row.empirical,
            row.se,
            row.z,
            if row.z.abs() <= report.confidence_k {
                "PASS"
            } else {
                "FAIL"
            }
        );
    }
    println!(
        "SUMMARY oracle={} result={}",
        label,
        if report.pass { "PASS" } else { "FAIL" }
    );
}

/// Minimal plotting stub dropped next to the CSV artifacts.
pub fn write_plot_stub(dir: &Path, csvs: &[String]) -> Result<()> {
    let mut body = String::from(
        "#!/usr/bin/env python3\n\
         # Plots the CSV artifacts produced by `stochord reproduce`.\n\
         import csv\n\
         import sys\n\n\
         import matplotlib.pyplot as plt\n\n\
         FILES = [\n",
    );
    for name in csvs {
        let _ = writeln!(body, "    {name:?},");
    }
    body.push_str(
        "]\n\n\
         for name in FILES:\n\
         \x20   with open(name) as fh:\n\
         \x20       rows = list(csv.reader(fh))\n\
         \x20   header, data = rows[0], rows[1:]\n\
         \x20   xs = [float(r[0]) for r in data]\n\
         \x20   plt.figure()\n\
         \x20   for col in range(1, len(header)):\n\
         \x20       plt.plot(xs, [float(r[col]) for r in data], label=header[col])\n\
         \x20   plt.xlabel(header[0])\n\
         \x20   plt.legend()\n\
         \x20   plt.title(name)\n\
         \x20   plt.savefig(name.rsplit('.', 1)[0] + '.png', dpi=150)\n\
         print('wrote', len(FILES), 'figures')\n",
    );
    fs::write(dir.join("plot.py"), body).context("writing plot stub")?;
    Ok(())
}
