//! The machine-readable report. Exact quantities are canonical strings.

use serde::{Deserialize, Serialize};

use gg_core::kovacic::{Classification, PSearch, Verdict};
use gg_core::nve::{tau_string, Location, NVECoefficients, NormalFormODE, PdeOutcome, PdeVerdict, PointData};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub input: Input,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nve: Option<Nve>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub normal_form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub classification: Option<ClassReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pde: Option<PdeReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub geodesic: Option<GeodesicReport>,
    pub notes: Vec<String>,
    pub timing_ms: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Input {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub surface: Option<String>,
    /// `F = c` for the geodesic integrator.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub level_set: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u64>,
    /// How the symmetry `f_x(0, y) = 0` was checked.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub symmetry_check: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub prefilter: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Nve {
    pub a: String,
    pub b: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRow {
    pub point: String,
    pub roots: usize,
    pub pole_order: usize,
    pub beta: String,
    pub delta: String,
    pub tau: String,
    pub eset: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case1Row {
    pub plus: Vec<usize>,
    pub infinity_plus: bool,
    pub d: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    pub d: u64,
    pub ordered: usize,
    pub multiset: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerRow {
    pub d: u64,
    pub e: Vec<Vec<i64>>,
    pub e_inf: i64,
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub fuchsian: bool,
    pub singular_points: usize,
    pub singularities: Vec<PointRow>,
    pub case1_witnesses: Vec<Case1Row>,
    pub case3_possible: bool,
    pub counts: Vec<CountRow>,
    pub ledger: Vec<LedgerRow>,
    pub verdict: VerdictReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdeReport {
    pub verdict: String,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

/// Run summary; drift values are decimal strings to keep the round trip exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicReport {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub direction: Vec<String>,
    pub samples: usize,
    pub max_f_drift: String,
    pub max_speed_drift: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fault: Option<String>,
}

impl Report {
    pub fn new(command: &str, input: Input) -> Self {
        Report {
            schema: SCHEMA,
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            input,
            nve: None,
            normal_form: None,
            classification: None,
            pde: None,
            geodesic: None,
            notes: Vec::new(),
            timing_ms: 0,
        }
    }

    pub fn set_nve(&mut self, c: &NVECoefficients, o: &NormalFormODE) {
        self.nve = Some(Nve {
            a: c.a.fmt_var("y"),
            b: c.b.fmt_var("y"),
        });
        self.normal_form = Some(o.r.fmt_var("y"));
    }
}

fn point_row(p: &PointData) -> PointRow {
    let point = match &p.location {
        Location::Finite(q) if q.deg0() == 1 => format!("y = {}", -q.coeff(0)),
        Location::Finite(q) => format!("roots of {}", q.fmt_var("y")),
        Location::Infinity => "infinity".to_string(),
    };
    let delta = match p.delta_constant() {
        Some(c) => c.to_string(),
        None => format!("{} mod {}", p.delta.fmt_var("t"), p.factor().map_or(String::new(), |q| q.fmt_var("t"))),
    };
    PointRow {
        point,
        roots: p.roots(),
        pole_order: p.multiplicity,
        beta: p.beta.to_string(),
        delta,
        tau: tau_string(&p.beta),
        eset: p.eset.clone(),
    }
}

/// JSON with the timing zeroed, for determinism comparisons.
pub fn canonical_json(r: &Report) -> String {
    let mut r = r.clone();
    r.timing_ms = 0;
    serde_json::to_string_pretty(&r).expect("report serializes")
}

pub fn verdict_report(v: &Verdict) -> VerdictReport {
    let detail = match v {
        Verdict::NonIntegrable => None,
        Verdict::CaseII { p, assignment } => Some(format!("P = {p} for e = {}", assignment.tuple_string())),
        Verdict::PossiblyCaseI { witnesses } => Some(format!("{} sign choices give d in N0", witnesses.len())),
        Verdict::PossiblyCaseIII => Some("every 1+4beta is a rational square".into()),
        Verdict::NotFuchsian(why) | Verdict::Unsupported(why) => Some(why.clone()),
    };
    VerdictReport {
        kind: v.name().to_string(),
        detail,
    }
}

pub fn class_report(c: &Classification) -> ClassReport {
    let mut rows: Vec<PointRow> = c.profile.finite.iter().map(point_row).collect();
    rows.extend(c.profile.infinity.iter().map(point_row));
    ClassReport {
        fuchsian: c.profile.fuchsian(),
        singular_points: c.profile.finite_points() + usize::from(c.profile.infinity.is_some()),
        singularities: rows,
        case1_witnesses: c
            .case1
            .iter()
            .map(|w| Case1Row {
                plus: w.plus.clone(),
                infinity_plus: w.infinity_plus,
                d: w.d,
            })
            .collect(),
        case3_possible: c.case3_possible,
        counts: c
            .counts
            .iter()
            .map(|(&d, &(ordered, multiset))| CountRow { d, ordered, multiset })
            .collect(),
        ledger: c
            .ledger
            .iter()
            .map(|l| {
                let (outcome, method, p) = match &l.outcome {
                    PSearch::Found { p, method } => ("found", Some(method.to_string()), Some(p.to_string())),
                    PSearch::Inconsistent { method } => ("inconsistent", Some(method.to_string()), None),
                    PSearch::Undecided { reason } => ("undecided", Some(reason.clone()), None),
                };
                LedgerRow {
                    d: l.assignment.d,
                    e: l.assignment.e.clone(),
                    e_inf: l.assignment.e_inf,
                    outcome: outcome.to_string(),
                    method,
                    p,
                }
            })
            .collect(),
        verdict: verdict_report(&c.verdict),
    }
}

pub fn pde_report(o: &PdeOutcome) -> PdeReport {
    PdeReport {
        verdict: match o.verdict {
            PdeVerdict::Pass => "pass",
            PdeVerdict::Fail => "fail",
            PdeVerdict::PlausiblyPass => "plausibly pass",
        }
        .to_string(),
        mode: mode_name(o.mode).to_string(),
        residual: o.residual.as_ref().map(|r| r.fmt_var("y")),
        witness: o.witness.as_ref().map(|w| w.to_string()),
    }
}

pub fn mode_name(m: gg_core::nve::CheckMode) -> &'static str {
    match m {
        gg_core::nve::CheckMode::Exact => "exact",
        gg_core::nve::CheckMode::Sampled => "numeric",
    }
}

impl Report {
    /// Human-readable table.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        if let Some(f) = &self.input.surface {
            line(format!("surface      z = {f}"));
        }
        if let Some(f) = &self.input.level_set {
            line(format!("surface      {f}"));
        }
        if let Some(nve) = &self.nve {
            line(format!("a(y)         {}", nve.a));
            line(format!("b(y)         {}", nve.b));
        }
        if let Some(r) = self.normal_form.as_ref().or(self.input.r.as_ref()) {
            line(format!("r(y)         {r}"));
        }
        if let Some(c) = &self.classification {
            line(format!("singular points: {} (fuchsian: {})", c.singular_points, c.fuchsian));
            for p in &c.singularities {
                let eset: Vec<String> = p.eset.iter().map(i64::to_string).collect();
                line(format!(
                    "  {:<24} x{:<3} beta = {:<8} delta = {:<10} tau = {:<22} E = {{{}}}",
                    p.point,
                    p.roots,
                    p.beta,
                    p.delta,
                    p.tau,
                    eset.join(",")
                ));
            }
            let detail = c.verdict.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default();
            if !c.fuchsian || c.verdict.kind == "Unsupported" && c.ledger.is_empty() {
                line(format!("verdict: {}{detail}", c.verdict.kind));
                return self.render_tail(out);
            }
            line(format!(
                "case I:   {}",
                match c.case1_witnesses.len() {
                    0 => "eliminated".to_string(),
                    k => format!("not eliminated ({k} sign choices)"),
                }
            ));
            line(format!("case III: {}", if c.case3_possible { "possible" } else { "eliminated" }));
            let counts: Vec<String> = c
                .counts
                .iter()
                .map(|r| format!("d={}: {} ({} types)", r.d, r.ordered, r.multiset))
                .collect();
            line(format!("case II assignments: {}", counts.join(", ")));
            let bad = c.ledger.iter().filter(|l| l.outcome == "inconsistent").count();
            line(format!("case II: {bad} of {} P-searches inconsistent", c.ledger.len()));
            line(format!("verdict: {}{detail}", c.verdict.kind));
        }
        self.render_tail(out)
    }

    fn render_tail(&self, mut out: String) -> String {
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        if let Some(p) = &self.pde {
            let res = p.residual.as_deref().map(|r| format!(", residual {r}")).unwrap_or_default();
            line(format!("pde test: {} [{}]{res}", p.verdict, p.mode));
        }
        if let Some(g) = &self.geodesic {
            line(format!("geodesic: {} samples, max F drift {}, max speed drift {}", g.samples, g.max_f_drift, g.max_speed_drift));
            if let Some(f) = &g.fault {
                line(format!("stopped early: {f}"));
            }
        }
        for n in &self.notes {
            line(format!("note: {n}"));
        }
        out
    }
}
