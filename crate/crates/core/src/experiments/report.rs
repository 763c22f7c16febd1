//! Report emission as CSV or JSON. Output depends only on the report, so
//! identical inputs give byte-identical files.

use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::criterion::CriterionReport;
use super::pipeline::GcdPipelineReport;
use super::tau::TauProfile;
use crate::arith::format_rational;
use crate::error::{Error, Result};
use crate::geometry::ProjectivePoint;
use crate::heights::HeightReport;
use crate::points::{coords_strings, write_points_csv};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidInput(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointList {
    pub nvars: usize,
    pub points: Vec<ProjectivePoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "report", content = "data", rename_all = "snake_case")]
pub enum Report {
    Tau(TauProfile),
    Criterion(CriterionReport),
    GcdBound(GcdPipelineReport),
    Heights(HeightReport),
    Points(PointList),
}

impl Report {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

fn num(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn point_string(p: &Option<ProjectivePoint>) -> String {
    p.as_ref().map(|p| p.to_string()).unwrap_or_default()
}

fn csv_string(header: Vec<String>, rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

fn criterion_csv(r: &CriterionReport) -> Result<String> {
    let k = r.divisor_count;
    let mut header: Vec<String> = (0..=r.ambient_dim).map(|i| format!("coord_{i}")).collect();
    header.extend((1..=k).map(|j| format!("h_D{j}")));
    header.extend((1..=k).map(|j| format!("m_D{j}")));
    header.extend(["min_h", "nearest_orbit", "second_proximity"].map(String::from));
    let rows = r
        .rows
        .iter()
        .map(|row| {
            let mut v = coords_strings(&row.point);
            v.extend(row.h.iter().map(|x| x.to_string()));
            v.extend(row.m.iter().map(|x| x.to_string()));
            v.push(row.min_h.to_string());
            v.push(row.nearest_orbit.clone().unwrap_or_default());
            v.push(num(row.second_proximity));
            v
        })
        .collect();
    csv_string(header, rows)
}

fn tau_csv(p: &TauProfile) -> Result<String> {
    let header = ["tier", "height_bound", "points", "tau_hat", "witness", "witness_proximity", "witness_height"]
        .map(String::from)
        .to_vec();
    let rows = p
        .rows
        .iter()
        .map(|r| {
            vec![
                r.tier.to_string(),
                r.height_bound.to_string(),
                r.points.to_string(),
                num(r.tau_hat),
                point_string(&r.witness),
                num(r.witness_proximity),
                num(r.witness_height),
            ]
        })
        .collect();
    csv_string(header, rows)
}

fn gcd_csv(r: &GcdPipelineReport) -> Result<String> {
    let c = &r.certificate;
    let p = &c.params;
    let pairs: Vec<(&str, String)> = vec![
        ("n", p.n.to_string()),
        ("d", p.d.to_string()),
        ("e", p.e.to_string()),
        ("eta", format_rational(&p.eta)),
        ("delta", format_rational(&p.delta)),
        ("mu", p.mu.to_string()),
        ("s_total", p.s_total.to_string()),
        ("ratio", r.ratio.to_string()),
        ("target_exponent", r.target_exponent.to_string()),
        ("criterion_applicable", r.criterion_applicable.to_string()),
        ("form", c.form.to_string()),
        ("kernel_dim", c.kernel_dim.to_string()),
        ("multiplicity_verified", c.multiplicity_verified.to_string()),
        ("coeff_norm", c.coeff_norm_string()),
        ("slack", c.slack.to_string()),
        ("sample_kind", r.sample_kind.clone()),
        ("sample_bound", r.sample_bound.to_string()),
        ("sample_size", c.sample_size.to_string()),
        ("exceptional_count", c.exceptional_count.to_string()),
        ("empirical_constant", num(c.empirical_constant)),
        ("witness", point_string(&c.witness)),
        ("violation_count", c.violation_count.to_string()),
        ("proximity_excess", num(c.proximity_excess)),
        ("proximity_violations", c.proximity_violations.to_string()),
    ];
    csv_string(
        vec!["key".into(), "value".into()],
        pairs.into_iter().map(|(k, v)| vec![k.to_string(), v]).collect(),
    )
}

fn heights_csv(r: &HeightReport) -> Result<String> {
    let mut rows: Vec<Vec<String>> = r.per_place.iter().map(|p| vec![p.place.clone(), p.value.to_string()]).collect();
    rows.push(vec!["total".into(), r.total.to_string()]);
    rows.push(vec!["proximity_s".into(), r.proximity_s.to_string()]);
    rows.push(vec!["finite_part".into(), r.finite_part.to_string()]);
    csv_string(vec!["place".into(), "value".into()], rows)
}

/// The report as text in the given format.
pub fn render(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        Format::Csv => match report {
            Report::Tau(p) => tau_csv(p),
            Report::Criterion(r) => criterion_csv(r),
            Report::GcdBound(r) => gcd_csv(r),
            Report::Heights(r) => heights_csv(r),
            Report::Points(l) => {
                let mut buf = Vec::new();
                write_points_csv(l.points.iter().cloned(), l.nvars, &mut buf)?;
                String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
            }
        },
    }
}

pub fn emit_report(report: &Report, format: Format, path: &Path) -> Result<()> {
    std::fs::write(path, render(report, format)?).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{problem::ProblemFile, run_main_criterion};

    #[test]
    fn criterion_round_trip_and_empty_csv() {
        // x0 = 0 and x1 = 0 meet only at (0:0:1); with both units excluded by
        // a zero box nothing is integral
        let p = ProblemFile::from_json(
            r#"{"ambient_dim": 2, "divisors": ["x0", "x1"], "bounds": {"box": 0, "stability_box": 0},
                "candidates": {"patch": 2}}"#,
        )
        .unwrap()
        .resolve()
        .unwrap();
        let r = Report::Criterion(run_main_criterion(&p).unwrap());
        let csv = render(&r, Format::Csv).unwrap();
        assert_eq!(csv.lines().count(), 1);
        assert!(csv.starts_with("coord_0,"));
        let json = render(&r, Format::Json).unwrap();
        assert_eq!(Report::from_json(&json).unwrap(), r);
        assert_eq!(render(&r, Format::Json).unwrap(), json);
    }

    #[test]
    fn formats() {
        assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
        assert_eq!(Format::Json.extension(), "json");
        assert!("xml".parse::<Format>().is_err());
    }
}
