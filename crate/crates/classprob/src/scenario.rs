//! Scenarios: a bound computation, what it should produce, and how to compare.

use std::time::Instant;

use classprob_core::montecarlo::SimReport;
use classprob_core::rng::RngStream;
use classprob_core::Rational;

use crate::parallel;
use crate::render;
use crate::report::{Kind, Report, Suite};

/// Run-wide settings handed to every computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ctx {
    pub seed: u64,
    /// Overrides the replication count of statistical scenarios.
    pub reps: Option<u64>,
    /// Threads available to one simulation.
    pub lanes: usize,
}

impl Ctx {
    pub fn new(seed: u64) -> Self {
        Self { seed, reps: None, lanes: 1 }
    }

    /// Stream for a scenario: the master seed with a stream id hashed from the tag.
    pub fn stream(&self, tag: &str) -> RngStream {
        RngStream::new(self.seed, fnv1a(tag))
    }

    pub fn reps_or(&self, default: u64) -> u64 {
        self.reps.unwrap_or(default)
    }
}

fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Computed {
    Exact(Vec<Rational>),
    /// Renderings compared as text, for digit-level claims.
    Text(Vec<String>),
    Reals(Vec<f64>),
    /// A simulation plus derived quantities checked alongside its z-score.
    Sim(SimReport, Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Check {
    Near { value: f64, tol: f64 },
    Relative { value: f64, tol: f64 },
    Within { lo: f64, hi: f64 },
    Below(f64),
    Above(f64),
}

impl Check {
    pub fn holds(&self, x: f64) -> bool {
        match *self {
            Check::Near { value, tol } => (x - value).abs() <= tol,
            Check::Relative { value, tol } => (x - value).abs() <= tol * value.abs(),
            Check::Within { lo, hi } => lo <= x && x <= hi,
            Check::Below(b) => x < b,
            Check::Above(b) => x > b,
        }
    }

    fn render(&self) -> String {
        match *self {
            Check::Near { value, tol: 0.0 } => format!("= {}", num(value)),
            Check::Near { value, tol } => format!("{} ± {}", num(value), num(tol)),
            Check::Relative { value, tol } => format!("{} ± {}%", num(value), num(tol * 100.0)),
            Check::Within { lo, hi } => format!("[{}, {}]", num(lo), num(hi)),
            Check::Below(b) => format!("< {}", num(b)),
            Check::Above(b) => format!("> {}", num(b)),
        }
    }
}

fn num(x: f64) -> String {
    if x == 0.0 || (1e-4..1e6).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expected {
    Exact(Vec<Rational>),
    Text(Vec<String>),
    Checks(Vec<Check>),
    Z { bound: f64, extras: Vec<Check> },
}

impl Expected {
    fn render(&self) -> String {
        match self {
            Expected::Exact(v) => render::rationals(v),
            Expected::Text(v) => v.join(", "),
            Expected::Checks(c) => c.iter().map(Check::render).collect::<Vec<_>>().join(", "),
            Expected::Z { bound, extras } => {
                let mut parts = vec![format!("|z| < {bound}")];
                parts.extend(extras.iter().map(Check::render));
                parts.join(", ")
            }
        }
    }

    fn accepts(&self, computed: &Computed) -> bool {
        let all = |checks: &[Check], xs: &[f64]| checks.len() == xs.len() && checks.iter().zip(xs).all(|(c, x)| c.holds(*x));
        match (self, computed) {
            (Expected::Exact(e), Computed::Exact(c)) => e == c,
            (Expected::Text(e), Computed::Text(c)) => e == c,
            (Expected::Checks(e), Computed::Reals(c)) => all(e, c),
            (Expected::Z { bound, extras }, Computed::Sim(report, derived)) => report.within(*bound) && all(extras, derived),
            _ => false,
        }
    }
}

impl Computed {
    fn render(&self) -> String {
        match self {
            Computed::Exact(v) => render::rationals(v),
            Computed::Text(v) => v.join(", "),
            Computed::Reals(v) => render::reals(v),
            Computed::Sim(r, derived) => {
                let mut s = format!("estimate {} se {}", render::sig6(r.estimate), render::sig6(r.standard_error));
                if let Some(z) = r.z_score {
                    s.push_str(&format!(" z {z:.3}"));
                }
                s.push_str(&format!(" n {}", r.replications));
                if !derived.is_empty() {
                    s.push_str("; ");
                    s.push_str(&render::reals(derived));
                }
                s
            }
        }
    }
}

pub type Compute = Box<dyn Fn(&Ctx) -> Result<Computed, String> + Send + Sync>;

pub struct Scenario {
    pub id: String,
    /// Topic the scenario belongs to.
    pub section: String,
    pub kind: Kind,
    pub expected: Expected,
    /// Appended to the expected rendering, e.g. a correction to a printed value.
    pub note: Option<String>,
    pub compute: Compute,
}

impl std::fmt::Debug for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Scenario").field("id", &self.id).field("kind", &self.kind).finish_non_exhaustive()
    }
}

impl Scenario {
    pub fn new(
        id: &str,
        section: &str,
        kind: Kind,
        expected: Expected,
        compute: impl Fn(&Ctx) -> Result<Computed, String> + Send + Sync + 'static,
    ) -> Self {
        Self { id: id.into(), section: section.into(), kind, expected, note: None, compute: Box::new(compute) }
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn run(&self, ctx: &Ctx, timing: bool) -> Report {
        let start = Instant::now();
        let outcome = (self.compute)(ctx);
        let elapsed = start.elapsed();
        let (computed, pass) = match outcome {
            Ok(c) => (c.render(), self.expected.accepts(&c)),
            Err(e) => (format!("error: {e}"), false),
        };
        let mut expected = self.expected.render();
        if let Some(note) = &self.note {
            expected.push_str(&format!(" [{note}]"));
        }
        Report {
            scenario: self.id.clone(),
            section: self.section.clone(),
            computed,
            expected,
            pass,
            kind: self.kind,
            elapsed_ms: if timing { elapsed.as_millis().max(1) as u64 } else { 0 },
        }
    }
}

/// Runs scenarios on up to `lanes` threads; reports come back sorted by id.
pub fn run_all(scenarios: &[Scenario], ctx: &Ctx, lanes: usize, timing: bool) -> Suite {
    let reports = parallel::map_ordered(scenarios, lanes, |s| s.run(ctx, timing));
    Suite::new(ctx.seed, reports)
}
