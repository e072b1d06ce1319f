//! Report rendering for every output format.
//!
//! Machine formats write every float in shortest round-trip form and carry no
//! timing information, so identical inputs produce identical bytes.

use std::fmt::Write as _;

use gramdist::{BoundReport, DistanceResult, HadamardChainResult, Scalar};
use serde_json::{json, Value};

use crate::campaign::CampaignResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Human,
    Csv,
    Json,
}

pub trait Render {
    fn human(&self) -> String;
    fn csv(&self) -> String;
    fn json(&self) -> Value;
}

pub fn emit_report(report: &impl Render, format: Format) -> String {
    match format {
        Format::Human => report.human(),
        Format::Csv => report.csv(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json()).expect("serializable report");
            s.push('\n');
            s
        }
    }
}

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else if v == 0.0 || (1e-5..1e16).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c + 1 == row.len() {
                line.push_str(cell);
            } else {
                let _ = write!(line, "{cell:<w$}  ", w = widths[c]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn scalars_json(s: &[Scalar]) -> Value {
    Value::Array(s.iter().map(|c| json!([c.re, c.im])).collect())
}

/// Exact distance together with every bound.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceReport {
    pub distance: DistanceResult,
    pub bounds: BoundReport,
}

impl DistanceReport {
    fn rows(&self) -> Vec<[String; 4]> {
        let mut rows = vec![[
            "exact".to_string(),
            fmt_num(self.bounds.exact_d2),
            fmt_num(0.0),
            fmt_num(1.0),
        ]];
        for e in &self.bounds.entries {
            rows.push([
                e.method.name().to_string(),
                fmt_num(e.value),
                fmt_num(e.slack),
                fmt_num(e.tightness),
            ]);
        }
        rows
    }
}

impl Render for DistanceReport {
    fn human(&self) -> String {
        let d = &self.distance;
        let mut out = String::new();
        let _ = writeln!(out, "squared distance     {}", fmt_num(d.d2()));
        let _ = writeln!(out, "  gram ratio         {}", fmt_num(d.d2_gram_ratio));
        let _ = writeln!(out, "  quadratic form     {}", fmt_num(d.d2_quadratic));
        let _ = writeln!(out, "  projection est.    {}", fmt_num(d.d2_projection));
        let _ = writeln!(out, "squared norm         {}", fmt_num(d.norm_sq));
        let mut flags = Vec::new();
        if d.in_subspace {
            flags.push("x lies in the span");
        }
        if d.in_orth_complement {
            flags.push("x is orthogonal to the span");
        }
        if !d.representations_agree {
            flags.push("representations disagree");
        }
        if d.numerical_warning {
            flags.push("numerical warning");
        }
        if !flags.is_empty() {
            let _ = writeln!(out, "notes                {}", flags.join("; "));
        }
        out.push('\n');
        let mut rows = vec![vec![
            "method".into(),
            "value".into(),
            "slack".into(),
            "tightness".into(),
        ]];
        rows.extend(self.rows().into_iter().map(Vec::from));
        out.push_str(&table(&rows));
        out
    }

    fn csv(&self) -> String {
        let mut out = String::from("method,value,slack,tightness\n");
        for r in self.rows() {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }

    fn json(&self) -> Value {
        let d = &self.distance;
        json!({
            "exact": {
                "d2": d.d2(),
                "d2_gram_ratio": d.d2_gram_ratio,
                "d2_quadratic": d.d2_quadratic,
                "d2_projection": d.d2_projection,
                "norm_sq": d.norm_sq,
                "in_orth_complement": d.in_orth_complement,
                "in_subspace": d.in_subspace,
                "representations_agree": d.representations_agree,
                "projection_exact": d.projection_exact,
                "numerical_warning": d.numerical_warning,
                "beta": scalars_json(&d.beta),
                "projection_coeffs": scalars_json(&d.projection_coeffs),
            },
            "bounds": self.bounds.entries.iter().map(|e| json!({
                "method": e.method.name(),
                "value": e.value,
                "slack": e.slack,
                "tightness": e.tightness,
                "strict_expected": e.strict_expected,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Chains for several variants of one system.
#[derive(Debug, Clone, PartialEq)]
pub struct HadamardReport(pub Vec<HadamardChainResult>);

impl Render for HadamardReport {
    fn human(&self) -> String {
        let mut rows = vec![vec![
            "variant".to_string(),
            "gram det".into(),
            "refined".into(),
            "hadamard".into(),
            "notes".into(),
        ]];
        for r in &self.0 {
            rows.push(vec![
                r.variant.name().into(),
                fmt_num(r.gamma),
                fmt_num(r.refined),
                fmt_num(r.hadamard),
                if r.numerical_warning {
                    "clamped step".into()
                } else {
                    String::new()
                },
            ]);
        }
        table(&rows)
    }

    fn csv(&self) -> String {
        let mut out = String::from("variant,gamma,refined,hadamard,numerical_warning\n");
        for r in &self.0 {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.variant.name(),
                fmt_num(r.gamma),
                fmt_num(r.refined),
                fmt_num(r.hadamard),
                r.numerical_warning
            );
        }
        out
    }

    fn json(&self) -> Value {
        Value::Array(
            self.0
                .iter()
                .map(|r| {
                    json!({
                        "variant": r.variant.name(),
                        "gamma": r.gamma,
                        "refined": r.refined,
                        "hadamard": r.hadamard,
                        "per_step_factors": r.per_step_factors,
                        "numerical_warning": r.numerical_warning,
                    })
                })
                .collect(),
        )
    }
}

const HUMAN_FAILURES: usize = 20;

impl Render for CampaignResult {
    fn human(&self) -> String {
        let mut rows = vec![vec![
            "check".to_string(),
            "evaluated".into(),
            "failed".into(),
            "worst slack".into(),
        ]];
        for (id, s) in &self.checks {
            rows.push(vec![
                id.name().into(),
                s.evaluated.to_string(),
                s.failed.to_string(),
                s.worst_slack.map(fmt_num).unwrap_or_else(|| "-".into()),
            ]);
        }
        let mut out = format!("seed {}, {} trials\n\n", self.seed, self.trials);
        out.push_str(&table(&rows));
        if !self.failures.is_empty() {
            out.push_str("\nfailures:\n");
            for f in self.failures.iter().take(HUMAN_FAILURES) {
                let _ = writeln!(
                    out,
                    "  {} / {} (seed {}, trial {}): lhs {} rhs {} slack {}",
                    f.check,
                    f.label,
                    f.seed,
                    f.trial,
                    fmt_num(f.lhs),
                    fmt_num(f.rhs),
                    fmt_num(f.slack)
                );
            }
            if self.failure_count as usize > HUMAN_FAILURES {
                let _ = writeln!(out, "  ... {} more", self.failure_count as usize - HUMAN_FAILURES);
            }
        }
        let _ = writeln!(
            out,
            "\n{} in {:.3} s",
            if self.passed() { "PASS" } else { "FAIL" },
            self.runtime.as_secs_f64()
        );
        out
    }

    fn csv(&self) -> String {
        let mut out = String::from("check,evaluated,failed,worst_slack\n");
        for (id, s) in &self.checks {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                id.name(),
                s.evaluated,
                s.failed,
                s.worst_slack.map(fmt_num).unwrap_or_default()
            );
        }
        out
    }

    fn json(&self) -> Value {
        let checks: serde_json::Map<String, Value> = self
            .checks
            .iter()
            .map(|(id, s)| {
                (
                    id.name().to_string(),
                    json!({"evaluated": s.evaluated, "failed": s.failed, "worst_slack": s.worst_slack}),
                )
            })
            .collect();
        json!({
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.passed(),
            "failure_count": self.failure_count,
            "checks": checks,
            "failures": self.failures.iter().map(|f| json!({
                "check": f.check.name(),
                "label": f.label,
                "seed": f.seed,
                "trial": f.trial,
                "lhs": f.lhs,
                "rhs": f.rhs,
                "slack": f.slack,
            })).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::campaign::{run_campaign, CampaignConfig};
    use crate::generator::GeneratorConfig;
    use gramdist::{exact_distance, full_bound_report, ToleranceConfig, Vector, VectorSystem};

    fn sheared_pair_report() -> DistanceReport {
        let s = VectorSystem::from_real_rows(&[&[1.0, 0.0, 0.0], &[1.0, 1.0, 0.0]]).unwrap();
        let x = Vector::real([1.0, 1.0, 1.0]).unwrap();
        let tol = ToleranceConfig::default();
        DistanceReport {
            distance: exact_distance(&s, &x, &tol).unwrap(),
            bounds: full_bound_report(&s, &x, None, &tol).unwrap(),
        }
    }

    #[test]
    fn numbers_round_trip() {
        for v in [0.0, 1.0, 4.0 / 3.0, 1e-300, -2.5e20, 123456.789, 1e-5, 9.99e-6] {
            assert_eq!(fmt_num(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt_num(1e-300), "1e-300");
        assert_eq!(fmt_num(0.5), "0.5");
    }

    #[test]
    fn bound_csv_has_exact_row_and_five_bounds() {
        let csv = emit_report(&sheared_pair_report(), Format::Csv);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "method,value,slack,tightness");
        assert_eq!(lines.len(), 7);
        assert!(lines[1].starts_with("exact,"));
        let methods: Vec<&str> = lines[2..].iter().map(|l| l.split(',').next().unwrap()).collect();
        assert_eq!(
            methods,
            ["sum-norms", "boas-bellman", "max-off-diagonal", "bombieri", "frobenius"]
        );
        let value: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
        assert!((value - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn human_table_is_aligned() {
        let text = emit_report(&sheared_pair_report(), Format::Human);
        let table: Vec<&str> = text.lines().skip_while(|l| !l.starts_with("method")).collect();
        assert_eq!(table.len(), 7);
        let col = table[0].find("value").unwrap();
        for line in &table[1..] {
            assert_ne!(line.as_bytes()[col], b' ');
            assert_eq!(line.as_bytes()[col - 1], b' ');
        }
    }

    #[test]
    fn empty_campaign_csv_is_header_only() {
        let mut cfg = CampaignConfig::new(GeneratorConfig::default());
        cfg.generator.trials = 0;
        let r = run_campaign(&cfg).unwrap();
        assert_eq!(emit_report(&r, Format::Csv), "check,evaluated,failed,worst_slack\n");
    }

    #[test]
    fn json_reports_parse() {
        let v: Value = serde_json::from_str(&emit_report(&sheared_pair_report(), Format::Json)).unwrap();
        assert_eq!(v["bounds"].as_array().unwrap().len(), 5);
        assert!((v["exact"]["d2"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    }
}
