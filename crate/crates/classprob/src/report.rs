//! Machine-readable report records.

use std::collections::BTreeMap;

use classprob_core::montecarlo::SimReport;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Exact,
    Numeric,
    Statistical,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Exact => "exact",
            Kind::Numeric => "numeric",
            Kind::Statistical => "statistical",
        }
    }
}

impl std::str::FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(Kind::Exact),
            "numeric" => Ok(Kind::Numeric),
            "statistical" => Ok(Kind::Statistical),
            other => Err(format!("unknown scenario kind `{other}`")),
        }
    }
}

/// Outcome of one scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub section: String,
    pub computed: String,
    pub expected: String,
    pub pass: bool,
    pub kind: Kind,
    /// Wall time; zero unless timing was requested, so reports stay byte-stable.
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Suite {
    pub seed: u64,
    pub reports: Vec<Report>,
    pub summary: BTreeMap<Kind, Tally>,
}

impl Suite {
    /// Sorts by scenario id and tallies by kind.
    pub fn new(seed: u64, mut reports: Vec<Report>) -> Self {
        reports.sort_by(|a, b| a.scenario.cmp(&b.scenario));
        let mut summary = BTreeMap::new();
        for r in &reports {
            let t: &mut Tally = summary.entry(r.kind).or_default();
            if r.pass {
                t.pass += 1;
            } else {
                t.fail += 1;
            }
        }
        Self { seed, reports, summary }
    }

    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }

    pub fn to_table(&self) -> String {
        let id_w = self.reports.iter().map(|r| r.scenario.len()).max().unwrap_or(8).max(8);
        let mut out = String::new();
        for r in &self.reports {
            let verdict = if r.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("{verdict}  {:<id_w$}  {:<11}  {}\n", r.scenario, r.kind.as_str(), r.section));
            out.push_str(&format!("      computed: {}\n      expected: {}\n", r.computed, r.expected));
            if r.elapsed_ms > 0 {
                out.push_str(&format!("      elapsed:  {} ms\n", r.elapsed_ms));
            }
        }
        let parts: Vec<String> =
            self.summary.iter().map(|(k, t)| format!("{} {}/{}", k.as_str(), t.pass, t.pass + t.fail)).collect();
        out.push_str(&format!("seed {:#x}: {}\n", self.seed, parts.join(", ")));
        out
    }
}

/// Simulation report in its serialized shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimJson {
    pub name: String,
    pub seed: u64,
    pub n: u64,
    pub estimate: f64,
    pub se: f64,
    pub target: Option<f64>,
    pub z: Option<f64>,
}

impl From<&SimReport> for SimJson {
    fn from(r: &SimReport) -> Self {
        Self {
            name: r.name.clone(),
            seed: r.seed,
            n: r.replications,
            estimate: r.estimate,
            se: r.standard_error,
            target: r.analytic_target,
            z: r.z_score,
        }
    }
}

impl From<SimJson> for SimReport {
    fn from(j: SimJson) -> Self {
        SimReport {
            name: j.name,
            seed: j.seed,
            replications: j.n,
            estimate: j.estimate,
            standard_error: j.se,
            analytic_target: j.target,
            z_score: j.z,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(id: &str, pass: bool, kind: Kind) -> Report {
        Report {
            scenario: id.into(),
            section: "combinatorics".into(),
            computed: "25/216".into(),
            expected: "25/216".into(),
            pass,
            kind,
            elapsed_ms: 0,
        }
    }

    #[test]
    fn report_round_trips() {
        let r = report("galileo-dice", true, Kind::Exact);
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(
            text,
            r#"{"scenario":"galileo-dice","section":"combinatorics","computed":"25/216","expected":"25/216","pass":true,"kind":"exact","elapsed_ms":0}"#
        );
        assert_eq!(serde_json::from_str::<Report>(&text).unwrap(), r);
    }

    #[test]
    fn suite_sorts_and_tallies() {
        let suite = Suite::new(7, vec![report("b", false, Kind::Numeric), report("a", true, Kind::Exact), report("c", true, Kind::Numeric)]);
        let ids: Vec<&str> = suite.reports.iter().map(|r| r.scenario.as_str()).collect();
        assert_eq!(ids, ["a", "b", "c"]);
        assert_eq!(suite.summary[&Kind::Numeric], Tally { pass: 1, fail: 1 });
        assert!(!suite.all_pass());
        let text = serde_json::to_string(&suite).unwrap();
        assert_eq!(serde_json::from_str::<Suite>(&text).unwrap(), suite);
    }

    #[test]
    fn sim_json_shape() {
        let r = SimReport::new("buffon-needle", 42, 100, 0.3, 0.05, Some(0.25));
        let v = serde_json::to_value(SimJson::from(&r)).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["estimate", "n", "name", "se", "seed", "target", "z"]);
        let back: SimReport = serde_json::from_value::<SimJson>(v).unwrap().into();
        assert_eq!(back, r);
    }
}
