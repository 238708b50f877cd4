//! Verification records, reports and their serializations.
//!
//! The JSON layout is stable: top-level `records`, `summary`, `grid` and
//! `wall_time_ms`, with every mathematical integer carried as a decimal
//! string.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameter name to decimal value.
pub type Params = BTreeMap<String, String>;

/// Builds a [`Params`] map from `(name, value)` pairs.
pub fn params<V: ToString>(pairs: &[(&str, V)]) -> Params {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

/// Params key naming how `actual` is judged against `expected` when it is
/// not plain equality.
pub const RELATION_KEY: &str = "relation";

/// The statement a record certifies. Serialized with the short labels used
/// in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    /// `S_n(p) mod p` for prime `p`.
    #[serde(rename = "T1")]
    PrimeCongruence,
    /// `S_n(2^a) mod 2^a`, `a >= 2`.
    #[serde(rename = "T2.1")]
    TwoPowerCongruence,
    /// `S_n(q^a) mod q^a`, odd `q`, `a >= 2`.
    #[serde(rename = "T2.2")]
    OddPowerCongruence,
    /// `q^(i+j) | C(n,k) q^(jk)`, one more factor of `q` for `k >= 2`.
    #[serde(rename = "L2.2")]
    BinomialDivisibility,
    /// `S_n(q^a) ≡ 0 (mod q^(a-1))`.
    #[serde(rename = "C2.3")]
    BlockVanishing,
    /// `(t + q^j)^n ≡ t^n (mod q^(i+j))` when `q^i | n`.
    #[serde(rename = "C2.5")]
    PowerCongruence,
    /// `S_n(q^j) ≡ 0 (mod q^(ν_q(n)+j))` when `(q-1) ∤ n`, and the unit
    /// permutation it rests on.
    #[serde(rename = "T2.4")]
    GeneratorBlock,
    /// Common period `∏ q^(a+1)` over all `n`.
    #[serde(rename = "T3.1")]
    RowPeriod,
    /// Exact period for prime-power `k`.
    #[serde(rename = "T3.2")]
    PrimePowerPeriod,
    /// Exact period for composite `k` (and `k = 1`) via lcm.
    #[serde(rename = "LCM")]
    CompositePeriod,
}

impl TheoremId {
    pub const ALL: [TheoremId; 10] = [
        TheoremId::PrimeCongruence,
        TheoremId::TwoPowerCongruence,
        TheoremId::OddPowerCongruence,
        TheoremId::BinomialDivisibility,
        TheoremId::BlockVanishing,
        TheoremId::PowerCongruence,
        TheoremId::GeneratorBlock,
        TheoremId::RowPeriod,
        TheoremId::PrimePowerPeriod,
        TheoremId::CompositePeriod,
    ];

    pub fn label(self) -> &'static str {
        match self {
            TheoremId::PrimeCongruence => "T1",
            TheoremId::TwoPowerCongruence => "T2.1",
            TheoremId::OddPowerCongruence => "T2.2",
            TheoremId::BinomialDivisibility => "L2.2",
            TheoremId::BlockVanishing => "C2.3",
            TheoremId::PowerCongruence => "C2.5",
            TheoremId::GeneratorBlock => "T2.4",
            TheoremId::RowPeriod => "T3.1",
            TheoremId::PrimePowerPeriod => "T3.2",
            TheoremId::CompositePeriod => "LCM",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

/// One certified (or refuted) instance.
///
/// `counterexample` is present exactly when `status` is `fail`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub theorem_id: TheoremId,
    pub params: Params,
    pub status: Status,
    pub expected: String,
    pub actual: String,
    pub counterexample: Option<Params>,
}

impl VerificationRecord {
    /// Passes iff `expected == actual`.
    pub fn compare(
        theorem_id: TheoremId,
        params: Params,
        expected: impl ToString,
        actual: impl ToString,
    ) -> Self {
        let expected = expected.to_string();
        let actual = actual.to_string();
        let pass = expected == actual;
        Self::judged(theorem_id, params, expected, actual, pass)
    }

    /// Records an explicit verdict; failures carry their params (plus any
    /// extra detail the caller put there) as the counterexample.
    pub fn judged(
        theorem_id: TheoremId,
        params: Params,
        expected: impl ToString,
        actual: impl ToString,
        pass: bool,
    ) -> Self {
        let (status, counterexample) = if pass {
            (Status::Pass, None)
        } else {
            (Status::Fail, Some(params.clone()))
        };
        VerificationRecord {
            theorem_id,
            params,
            status,
            expected: expected.to_string(),
            actual: actual.to_string(),
            counterexample,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Pass/fail counts for one theorem.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    #[serde(with = "decimal")]
    pub pass: u64,
    #[serde(with = "decimal")]
    pub fail: u64,
}

mod decimal {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub records: Vec<VerificationRecord>,
    pub summary: BTreeMap<TheoremId, Tally>,
    /// Swept parameter bounds.
    pub grid: Params,
    pub wall_time_ms: u64,
}

impl VerificationReport {
    pub fn new(grid: Params) -> Self {
        VerificationReport {
            grid,
            ..Default::default()
        }
    }

    pub fn push(&mut self, record: VerificationRecord) {
        let tally = self.summary.entry(record.theorem_id).or_default();
        match record.status {
            Status::Pass => tally.pass += 1,
            Status::Fail => tally.fail += 1,
        }
        self.records.push(record);
    }

    /// Appends another report, prefixing its grid keys with `scope`.
    pub fn merge(&mut self, scope: &str, other: VerificationReport) {
        for r in other.records {
            self.push(r);
        }
        for (k, v) in other.grid {
            self.grid.insert(format!("{scope}.{k}"), v);
        }
        self.wall_time_ms += other.wall_time_ms;
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerificationRecord> {
        self.records.iter().filter(|r| !r.passed())
    }

    pub fn failure_count(&self) -> u64 {
        self.summary.values().map(|t| t.fail).sum()
    }

    pub fn all_passed(&self) -> bool {
        self.failure_count() == 0
    }

    pub fn count(&self, id: TheoremId) -> Tally {
        self.summary.get(&id).copied().unwrap_or_default()
    }

    /// Checks the structural invariants: summary matches the records and
    /// only failures carry counterexamples.
    pub fn validate(&self) -> Result<()> {
        let mut tallies: BTreeMap<TheoremId, Tally> = BTreeMap::new();
        for r in &self.records {
            if (r.status == Status::Fail) != r.counterexample.is_some() {
                return Err(Error::Serialize(format!(
                    "{} record has inconsistent counterexample",
                    r.theorem_id
                )));
            }
            let t = tallies.entry(r.theorem_id).or_default();
            match r.status {
                Status::Pass => t.pass += 1,
                Status::Fail => t.fail += 1,
            }
        }
        if tallies != self.summary {
            return Err(Error::Serialize("summary does not match records".into()));
        }
        Ok(())
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let report: VerificationReport =
            serde_json::from_slice(bytes).map_err(|e| Error::Serialize(e.to_string()))?;
        report.validate()?;
        Ok(report)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

fn join_params(p: &Params) -> String {
    p.iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

/// Serializes a report. JSON and CSV output is deterministic.
pub fn emit_report(report: &VerificationReport, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => serde_json::to_vec(report).map_err(|e| Error::Serialize(e.to_string())),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Serialize(e.to_string());
            w.write_record(["theorem_id", "params", "status", "expected", "actual"])
                .map_err(io)?;
            for r in &report.records {
                w.write_record([
                    r.theorem_id.label(),
                    &join_params(&r.params),
                    &r.status.to_string(),
                    &r.expected,
                    &r.actual,
                ])
                .map_err(io)?;
            }
            w.into_inner().map_err(|e| Error::Serialize(e.to_string()))
        }
        Format::Text => Ok(render_text(report).into_bytes()),
    }
}

fn render_text(report: &VerificationReport) -> String {
    let mut out = String::new();
    if !report.grid.is_empty() {
        let _ = writeln!(out, "grid: {}", join_params(&report.grid).replace(';', ", "));
    }
    for (id, t) in &report.summary {
        let _ = writeln!(out, "{:<5} pass {:>8}  fail {:>6}", id.label(), t.pass, t.fail);
    }
    for r in report.failures() {
        let _ = writeln!(out);
        let _ = writeln!(out, "FAIL {} [{}]", r.theorem_id, join_params(&r.params));
        let _ = writeln!(out, "  expected: {}", r.expected);
        let _ = writeln!(out, "  actual:   {}", r.actual);
        if let Some(cx) = &r.counterexample {
            let _ = writeln!(out, "  counterexample: {}", join_params(cx).replace(';', ", "));
        }
    }
    let _ = writeln!(
        out,
        "{} records, {} failures, {} ms",
        report.records.len(),
        report.failure_count(),
        report.wall_time_ms
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> VerificationReport {
        let mut r = VerificationReport::new(params(&[("n_max", 50), ("prime_power_max", 100)]));
        r.push(VerificationRecord::compare(
            TheoremId::PrimeCongruence,
            params(&[("q", 5), ("a", 1), ("n", 4)]),
            4,
            4,
        ));
        r.push(VerificationRecord::compare(
            TheoremId::CompositePeriod,
            params(&[("k", 12), ("n", 2)]),
            72,
            36,
        ));
        r.wall_time_ms = 17;
        r
    }

    #[test]
    fn empty_report_json() {
        let bytes = emit_report(&VerificationReport::default(), Format::Json).unwrap();
        assert_eq!(
            String::from_utf8(bytes).unwrap(),
            r#"{"records":[],"summary":{},"grid":{},"wall_time_ms":0}"#
        );
    }

    #[test]
    fn json_uses_labels_and_decimal_strings() {
        let json = String::from_utf8(emit_report(&sample(), Format::Json).unwrap()).unwrap();
        assert!(json.contains(r#""theorem_id":"T1""#));
        assert!(json.contains(r#""LCM":{"pass":"0","fail":"1"}"#));
        assert!(json.contains(r#""counterexample":{"k":"12","n":"2"}"#));
        assert!(json.contains(r#""counterexample":null"#));
    }

    #[test]
    fn csv_single_pass_row() {
        let mut r = VerificationReport::default();
        r.push(VerificationRecord::compare(
            TheoremId::PrimeCongruence,
            params(&[("q", 5), ("n", 4)]),
            4,
            4,
        ));
        let csv = String::from_utf8(emit_report(&r, Format::Csv).unwrap()).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines, ["theorem_id,params,status,expected,actual", "T1,n=4;q=5,pass,4,4"]);
    }

    #[test]
    fn text_shows_counterexample() {
        let text = String::from_utf8(emit_report(&sample(), Format::Text).unwrap()).unwrap();
        assert!(text.contains("FAIL LCM"));
        assert!(text.contains("counterexample: k=12, n=2"));
        assert!(text.contains("2 records, 1 failures"));
    }

    #[test]
    fn unknown_format() {
        assert_eq!("yaml".parse::<Format>(), Err(Error::UnknownFormat("yaml".into())));
    }

    #[test]
    fn parse_rejects_inconsistent_summary() {
        let mut r = sample();
        r.summary.get_mut(&TheoremId::PrimeCongruence).unwrap().pass = 9;
        let bytes = emit_report(&r, Format::Json).unwrap();
        assert!(VerificationReport::from_json(&bytes).is_err());
    }

    fn arb_record() -> impl Strategy<Value = VerificationRecord> {
        (
            0usize..TheoremId::ALL.len(),
            prop::collection::btree_map("[a-z_]{1,6}", "[0-9]{1,30}", 0..4),
            "[0-9]{1,40}",
            "[0-9]{1,40}",
        )
            .prop_map(|(i, p, e, a)| VerificationRecord::compare(TheoremId::ALL[i], p, e, a))
    }

    proptest! {
        #[test]
        fn json_round_trip(
            records in prop::collection::vec(arb_record(), 0..20),
            grid in prop::collection::btree_map("[a-z_.]{1,10}", "[0-9]{1,20}", 0..5),
            ms in any::<u64>(),
        ) {
            let mut r = VerificationReport::new(grid);
            for rec in records {
                r.push(rec);
            }
            r.wall_time_ms = ms;
            let bytes = emit_report(&r, Format::Json).unwrap();
            prop_assert_eq!(VerificationReport::from_json(&bytes).unwrap(), r);
        }
    }
}
