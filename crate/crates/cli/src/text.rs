//! Plain-text summaries. JSON carries the full data; text is for reading.

use std::fmt::Write;

use crate::problem::MatrixJson;
use crate::report::*;

fn matrix(out: &mut String, indent: &str, m: &MatrixJson) {
    for row in m {
        let cells: Vec<String> = row
            .iter()
            .map(|&[re, im]| {
                let re = if re == 0.0 { 0.0 } else { re };
                let im = if im == 0.0 { 0.0 } else { im };
                if im == 0.0 {
                    format!("{re:>10.6}")
                } else {
                    format!("{re:>10.6}{im:+.6}i")
                }
            })
            .collect();
        let _ = writeln!(out, "{indent}[{}]", cells.join(" "));
    }
}

fn frobenius(m: &MatrixJson) -> f64 {
    m.iter().flatten().map(|[re, im]| re * re + im * im).sum::<f64>().sqrt()
}

fn tolerances(out: &mut String, t: &EffectiveTolerances) {
    let opt = |v: Option<f64>| v.map_or("auto".to_string(), |v| format!("{v:.3e}"));
    let _ = writeln!(
        out,
        "tolerances: hermiticity {:.1e}, commute {:.1e}, rank {:.1e}, cluster {:.3e}, obstruction {}, first-order {}",
        t.hermiticity,
        t.commute,
        t.rank,
        t.cluster,
        opt(t.obstruction),
        opt(t.first_order)
    );
}

fn sector_table(out: &mut String, sectors: &[SectorJson]) {
    let _ = writeln!(out, "sectors: {}", sectors.len());
    let _ = writeln!(out, "  {:>14} {:>14} {:>5}", "lambda", "mu", "mult");
    for s in sectors {
        let _ = writeln!(out, "  {:>14.8} {:>14.8} {:>5}", s.lambda, s.mu, s.multiplicity);
    }
}

fn dims(d: &DimsJson) -> String {
    format!("(h0, h1, h2) = ({}, {}, {})", d.h0, d.h1, d.h2)
}

pub(crate) fn render(report: &Report) -> String {
    let mut out = String::new();
    match report {
        Report::Spectrum(r) => {
            sector_table(&mut out, &r.sectors);
            let _ = writeln!(out, "nondegenerate: {}", r.nondegenerate);
            let _ = writeln!(out, "commutant dimension: {}", r.commutant_dim);
            tolerances(&mut out, &r.tolerances);
        }
        Report::Cohomology(r) => {
            if let Some(d) = &r.theorem {
                let _ = writeln!(out, "theorem:     {}", dims(d));
            }
            if let Some(d) = &r.brute_force {
                let _ = writeln!(out, "brute force: {}", dims(d));
            }
            if let Some(a) = r.agree {
                let _ = writeln!(out, "agree: {a}");
            }
            tolerances(&mut out, &r.tolerances);
        }
        Report::Anomaly(r) => anomaly(&mut out, r),
        Report::VermaCheck(r) => {
            let _ = writeln!(out, "sl(2) Verma module, lambda = {}, truncated at degree {}", r.lambda, r.degree);
            for rel in &r.relations {
                let status = if rel.violations.is_empty() {
                    "exact".to_string()
                } else {
                    let v: Vec<String> = rel.violations.iter().map(|(d, x)| format!("x^{d}: {x}")).collect();
                    format!("fails at {}", v.join(", "))
                };
                let _ = writeln!(out, "  {:<12} {status}", rel.relation);
            }
            let _ = writeln!(
                out,
                "weight derivative (1, x): {} (violating columns {:?})",
                if r.cocycle.passed { "cocycle" } else { "NOT a cocycle" },
                r.cocycle.violating_columns
            );
            let _ = writeln!(
                out,
                "negative control x^2: {} (violating columns {:?})",
                if r.negative_control.passed { "cocycle" } else { "not a cocycle" },
                r.negative_control.violating_columns
            );
        }
    }
    out
}

fn anomaly(out: &mut String, r: &AnomalyReport) {
    sector_table(out, &r.sectors);
    let mut coh = format!("cohomology: {}", dims(&r.cohomology_theorem));
    if r.cohomology_brute_force.is_some() {
        coh.push_str(" (brute force agrees)");
    }
    let _ = writeln!(out, "{coh}");
    let fo = &r.first_order;
    if fo.status == "solved" {
        let _ = writeln!(
            out,
            "first order: {} delta_S1, residual {:.3e}",
            if fo.supplied == Some(true) { "supplied" } else { "solved" },
            fo.residual.unwrap_or(0.0)
        );
    } else {
        let _ = writeln!(out, "first order: OBSTRUCTED, the perturbation breaks the symmetry");
        for b in &fo.blocks {
            let _ = writeln!(out, "  block ({}, {}): norm {:.3e}", b.first, b.second, b.norm);
        }
    }
    if let Some(c) = &r.obstruction {
        let _ = writeln!(
            out,
            "obstruction (order {}): norm {:.10} (tolerance {:.3e})",
            c.order, c.norm, c.tolerance
        );
        if c.anomalous {
            let _ = writeln!(out, "  representative in Z (anti-Hermitian):");
            matrix(out, "    ", &c.representative);
        }
    }
    if let Some(f) = r.feasibility_residual {
        let _ = writeln!(out, "least-squares residual of the second-order equation: {f:.10}");
    }
    let _ = writeln!(out, "anomaly: {}", r.anomaly);
    if let Some(s) = &r.series {
        let slope = s.residual_slope.map_or("n/a".into(), |v| format!("{v:.3}"));
        let _ = writeln!(
            out,
            "series: order {}, gauge generator norm {:.3e}, tail residual slope {slope}",
            s.order,
            frobenius(&s.gauge_generator)
        );
    }
    if let Some(g) = &r.gauge_check {
        let _ = writeln!(
            out,
            "gauge self-check (seed {}): class moved by {:.3e}, {}",
            g.seed,
            g.class_difference,
            if g.passed { "ok" } else { "FAILED" }
        );
    }
    tolerances(out, &r.tolerances);
}
