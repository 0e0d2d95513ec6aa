//! Box scans: certify every dominant weight in a coordinate box.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Serialize;

use crate::certify::{certify, Certificate, Status};
use crate::error::{Error, Result};
use crate::par;
use crate::simples::Simples;
use crate::weights::{box_weights, Weight};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanJob {
    pub system: String,
    pub p: u64,
    pub n: u32,
    pub lo: i64,
    pub hi: i64,
}

/// Parses an inclusive `lo..hi` box.
pub fn parse_box(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::Schema(format!("box must look like lo..hi, got {s:?}"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let lo = i64::from_str(lo.trim()).map_err(|_| bad())?;
    let hi = i64::from_str(hi.trim().trim_start_matches('=')).map_err(|_| bad())?;
    if lo < 0 || hi < lo {
        return Err(bad());
    }
    Ok((lo, hi))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DimCheck {
    Ok,
    Mismatch,
    NotApplicable,
}

impl DimCheck {
    pub fn as_str(&self) -> &'static str {
        match self {
            DimCheck::Ok => "ok",
            DimCheck::Mismatch => "mismatch",
            DimCheck::NotApplicable => "n/a",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub lambda: Weight,
    pub certificate: Certificate,
    pub dim_check: DimCheck,
}

impl ScanRow {
    pub fn flag(&self) -> &'static str {
        match self.certificate.status {
            Status::Guaranteed(f) => f.as_str(),
            _ => "-",
        }
    }
}

fn scan_one(simples: &Simples, lambda: &Weight, n: u32) -> Result<ScanRow> {
    let certificate = certify(simples, lambda, n)?;
    let dim_check = if certificate.status.has_lines() {
        if certificate.dimension_check(simples)? {
            DimCheck::Ok
        } else {
            DimCheck::Mismatch
        }
    } else {
        DimCheck::NotApplicable
    };
    Ok(ScanRow {
        lambda: lambda.clone(),
        certificate,
        dim_check,
    })
}

fn collect(rows: Vec<Result<ScanRow>>) -> Result<Vec<ScanRow>> {
    rows.into_iter().collect()
}

/// Rows come back in lexicographic order of `λ` whatever the thread count.
pub fn scan_box(simples: &Simples, n: u32, lo: i64, hi: i64) -> Result<Vec<ScanRow>> {
    simples.prepare()?;
    let weights = box_weights(simples.system().rank(), lo, hi);
    collect(par::map(&weights, |l| scan_one(simples, l, n)))
}

pub fn scan_box_sequential(simples: &Simples, n: u32, lo: i64, hi: i64) -> Result<Vec<ScanRow>> {
    simples.prepare()?;
    let weights = box_weights(simples.system().rank(), lo, hi);
    collect(par::map_sequential(&weights, |l| scan_one(simples, l, n)))
}

/// Status string to count.
pub fn summary(rows: &[ScanRow]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for r in rows {
        *out.entry(r.certificate.status.to_string()).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::RootSystem;

    #[test]
    fn box_parsing() {
        assert_eq!(parse_box("0..8").unwrap(), (0, 8));
        assert_eq!(parse_box("2..=4").unwrap(), (2, 4));
        assert!(parse_box("4..2").is_err());
        assert!(parse_box("-1..2").is_err());
        assert!(parse_box("3").is_err());
    }

    #[test]
    fn parallel_matches_sequential() {
        let a2 = RootSystem::parse("A2").unwrap();
        let s = Simples::new(&a2, 3).unwrap();
        let a = scan_box(&s, 1, 0, 5).unwrap();
        let b = scan_box_sequential(&s, 1, 0, 5).unwrap();
        assert_eq!(a.len(), 36);
        assert_eq!(a, b);
        assert!(a.iter().all(|r| r.dim_check == DimCheck::Ok));
    }
}
