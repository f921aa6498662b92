//! Verification runs over parameter grids and their reports.

mod report;
pub mod sample;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{int, to_fraction_string, ExactRational};
use crate::check::{ApproxCheckResult, CheckResult, Status};
use crate::error::{Error, Result};
use crate::euler::{self, EulerParams, EvalPoint, ENUMERATION_LIMIT};
use crate::fermionic::{self, IntegrandSpec};
use crate::multi_index::box_size;
use crate::qcore::{self, QContext};
use crate::series::{ApproxValue, TruncationBudget};
use crate::symmetry::{self, PitCertificate, SymmetryParams};

pub use report::{render, Format};

/// Revision of the report layout and of the sampling rules.
pub const REPORT_REVISION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Qbinom,
    Representations,
    Fermint,
    Thm3,
    Thm4,
    Cor2,
    Limit,
    All,
}

impl Suite {
    pub const CONCRETE: [Suite; 7] = [
        Suite::Qbinom,
        Suite::Representations,
        Suite::Fermint,
        Suite::Thm3,
        Suite::Thm4,
        Suite::Cor2,
        Suite::Limit,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Qbinom => "qbinom",
            Suite::Representations => "representations",
            Suite::Fermint => "fermint",
            Suite::Thm3 => "thm3",
            Suite::Thm4 => "thm4",
            Suite::Cor2 => "cor2",
            Suite::Limit => "limit",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::CONCRETE
            .iter()
            .chain([Suite::All].iter())
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::Config(format!("unknown suite {s:?}")))
    }
}

/// Deliberate corruption used to prove that failures surface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    Thm3RhsSign,
}

impl FromStr for Fault {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "thm3-rhs-sign" => Ok(Fault::Thm3RhsSign),
            _ => Err(Error::Config(format!("unknown fault {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub suite: Suite,
    pub n_max: u32,
    pub r_max: u32,
    pub h_values: Vec<i64>,
    pub w_pairs: Vec<(u32, u32)>,
    pub q_samples: usize,
    pub truncation: usize,
    pub seed: u64,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
}

impl Default for RunConfig {
    /// Desk-scale grid: finishes in seconds.
    fn default() -> Self {
        Self {
            suite: Suite::All,
            n_max: 4,
            r_max: 2,
            h_values: vec![-1, 0, 1, 2, 3],
            w_pairs: vec![(1, 3), (3, 5)],
            q_samples: 3,
            truncation: 40,
            seed: 0,
            format: Format::Json,
            fault: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.r_max < 1 {
            return Err(Error::Config("r_max must be >= 1".into()));
        }
        if self.q_samples < 1 {
            return Err(Error::Config("q_samples must be >= 1".into()));
        }
        if self.truncation < 1 {
            return Err(Error::Config("truncation must be >= 1".into()));
        }
        if self.h_values.is_empty() {
            return Err(Error::Config("at least one h value is required".into()));
        }
        for &(a, b) in &self.w_pairs {
            if a % 2 == 0 || b % 2 == 0 {
                return Err(Error::Config(format!(
                    "w pair ({a},{b}) must be odd and >= 1"
                )));
            }
        }
        Ok(())
    }

    fn suites(&self) -> Vec<Suite> {
        match self.suite {
            Suite::All => Suite::CONCRETE.to_vec(),
            s => vec![s],
        }
    }
}

pub type Params = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportEntry {
    pub identity: String,
    pub params: Params,
    pub lhs: String,
    pub rhs: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub pass_exact: usize,
    pub pass_within_bound: usize,
    pub fail: usize,
}

impl Counts {
    fn add(&mut self, s: Status) {
        match s {
            Status::PassExact => self.pass_exact += 1,
            Status::PassWithinBound => self.pass_within_bound += 1,
            Status::Fail => self.fail += 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass_exact: usize,
    pub pass_within_bound: usize,
    pub fail: usize,
    pub wall_ms: u64,
    pub per_suite: BTreeMap<String, Counts>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub spec_revision: String,
    pub config: RunConfig,
    pub entries: Vec<ReportEntry>,
    pub summary: Summary,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    /// 0 when every entry passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    /// Zero every timing field, making reports byte-identical across runs.
    pub fn without_timings(mut self) -> Self {
        for e in &mut self.entries {
            e.elapsed_ms = 0;
        }
        self.summary.wall_ms = 0;
        self
    }
}

/// Outcome of one grid point before timing is attached.
struct Outcome {
    lhs: String,
    rhs: String,
    status: Status,
    bound: Option<String>,
}

impl Outcome {
    fn exact(c: &CheckResult) -> Self {
        Self {
            lhs: to_fraction_string(&c.lhs),
            rhs: to_fraction_string(&c.rhs),
            status: c.into(),
            bound: None,
        }
    }

    fn approx(c: &ApproxCheckResult) -> Self {
        Self {
            lhs: to_fraction_string(&c.exact_side),
            rhs: to_fraction_string(&c.approx_side),
            status: c.into(),
            bound: Some(to_fraction_string(&c.tail_bound)),
        }
    }

    fn error(e: Error) -> Self {
        Self {
            lhs: format!("error: {e}"),
            rhs: String::new(),
            status: Status::Fail,
            bound: None,
        }
    }
}

type Job = Box<dyn Fn() -> Result<Outcome> + Send + Sync>;

struct Task {
    identity: &'static str,
    params: Params,
    job: Job,
}

fn params<const N: usize>(suite: Suite, kv: [(&str, String); N]) -> Params {
    let mut p: Params = kv.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    p.insert("suite".into(), suite.name().into());
    p
}

fn q_str(x: &ExactRational) -> String {
    to_fraction_string(x)
}

/// Runs every suite named by `config` and assembles the report. Entries are
/// ordered by suite, then by their parameter map, then by identity, whatever
/// order the worker threads finish in.
pub fn run(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let started = Instant::now();
    let mut tasks = Vec::new();
    for suite in config.suites() {
        tasks.extend(build_tasks(suite, config)?);
    }
    let mut entries: Vec<ReportEntry> = tasks
        .into_par_iter()
        .map(|t| {
            let t0 = Instant::now();
            let out = (t.job)().unwrap_or_else(Outcome::error);
            ReportEntry {
                identity: t.identity.to_string(),
                params: t.params,
                lhs: out.lhs,
                rhs: out.rhs,
                status: out.status,
                bound: out.bound,
                elapsed_ms: t0.elapsed().as_millis() as u64,
            }
        })
        .collect();
    entries.sort_by(|a, b| {
        let suite = |e: &ReportEntry| e.params["suite"].parse::<Suite>().ok();
        suite(a)
            .cmp(&suite(b))
            .then_with(|| a.params.cmp(&b.params))
            .then_with(|| a.identity.cmp(&b.identity))
    });
    let mut total = Counts::default();
    let mut per_suite: BTreeMap<String, Counts> = BTreeMap::new();
    for e in &entries {
        total.add(e.status);
        per_suite
            .entry(e.params["suite"].clone())
            .or_default()
            .add(e.status);
    }
    Ok(Report {
        spec_revision: REPORT_REVISION.to_string(),
        config: config.clone(),
        entries,
        summary: Summary {
            pass_exact: total.pass_exact,
            pass_within_bound: total.pass_within_bound,
            fail: total.fail,
            wall_ms: started.elapsed().as_millis() as u64,
            per_suite,
        },
    })
}

fn approx_outcome(exact: ExactRational, v: ApproxValue) -> Outcome {
    Outcome::approx(&ApproxCheckResult::new(exact, v.value, v.tail_bound))
}

fn within_budget(terms: usize, r: u32) -> bool {
    box_size(terms as u64, r) <= ENUMERATION_LIMIT
}

fn build_tasks(suite: Suite, cfg: &RunConfig) -> Result<Vec<Task>> {
    let budget = TruncationBudget::new(cfg.truncation).map_err(|e| Error::Config(e.to_string()))?;
    let points = sample::sample_points(cfg.seed, cfg.q_samples);
    let mut tasks: Vec<Task> = Vec::new();
    match suite {
        Suite::Qbinom => {
            for (k, (q, b)) in sample::sample_q_b(cfg.seed, cfg.q_samples)
                .into_iter()
                .enumerate()
            {
                for n in 0..=cfg.n_max {
                    let (q2, b2) = (q.clone(), b.clone());
                    tasks.push(Task {
                        identity: "q_binomial_finite",
                        params: params(
                            suite,
                            [
                                ("sample", k.to_string()),
                                ("q", q_str(&q)),
                                ("b", q_str(&b)),
                                ("n", n.to_string()),
                            ],
                        ),
                        job: Box::new(move || {
                            let ctx = QContext::unit_interval(q2.clone())?;
                            Ok(Outcome::exact(&qcore::check_q_binomial_finite(
                                &ctx, &b2, n,
                            )))
                        }),
                    });
                }
                for n in 1..=cfg.n_max.max(1) {
                    let (q2, b2) = (q.clone(), b.clone());
                    tasks.push(Task {
                        identity: "q_binomial_inverse",
                        params: params(
                            suite,
                            [
                                ("sample", k.to_string()),
                                ("q", q_str(&q)),
                                ("b", q_str(&b)),
                                ("n", n.to_string()),
                                ("M", cfg.truncation.to_string()),
                            ],
                        ),
                        job: Box::new(move || {
                            let ctx = QContext::unit_interval(q2.clone())?;
                            Ok(Outcome::approx(&qcore::check_q_binomial_inverse(
                                &ctx,
                                &b2,
                                n,
                                budget.terms(),
                            )?))
                        }),
                    });
                }
            }
        }
        Suite::Representations => {
            for (q, _) in &points {
                let ctx = QContext::unit_interval(q.clone())?;
                for r in 1..=cfg.r_max {
                    for &h in &cfg.h_values {
                        for m in 0..=8u32 {
                            let c = ctx.clone();
                            tasks.push(Task {
                                identity: "composition_collapse",
                                params: params(
                                    suite,
                                    [
                                        ("q", q_str(q)),
                                        ("r", r.to_string()),
                                        ("h", h.to_string()),
                                        ("m", m.to_string()),
                                    ],
                                ),
                                job: Box::new(move || {
                                    Ok(Outcome::exact(&euler::check_composition_collapse(
                                        &c, h, r, m,
                                    )))
                                }),
                            });
                        }
                    }
                }
                for t in [int(1), q.clone(), q * q] {
                    let pt = EvalPoint::new(q.clone(), t.clone())?;
                    for n in 0..=cfg.n_max {
                        for r in 1..=cfg.r_max {
                            let base = [
                                ("Q", q_str(q)),
                                ("T", q_str(&t)),
                                ("n", n.to_string()),
                                ("r", r.to_string()),
                            ];
                            let pt2 = pt.clone();
                            tasks.push(Task {
                                identity: "plain_series_vs_closed",
                                params: params(suite, base.clone()),
                                job: Box::new(move || {
                                    let exact = euler::q_euler_plain_closed(n, r, &pt2)?;
                                    Ok(approx_outcome(
                                        exact,
                                        euler::q_euler_plain(n, r, &pt2, budget)?,
                                    ))
                                }),
                            });
                            for &h in &cfg.h_values {
                                let p = EulerParams::new(n, h, r)?;
                                let kv = |b: &[(&'static str, String); 4]| {
                                    let mut m = params(suite, b.clone());
                                    m.insert("h".into(), h.to_string());
                                    m
                                };
                                type Repr = fn(
                                    &EulerParams,
                                    &EvalPoint,
                                    TruncationBudget,
                                )
                                    -> Result<ApproxValue>;
                                let reps: [(&'static str, Repr, bool); 3] = [
                                    ("series_vs_closed", euler::q_euler_series, true),
                                    (
                                        "multisum_vs_closed",
                                        euler::q_euler_multisum,
                                        within_budget(cfg.truncation, r),
                                    ),
                                    (
                                        "fermionic_vs_closed",
                                        fermionic::fermionic_integral_rd,
                                        within_budget(cfg.truncation, r),
                                    ),
                                ];
                                for (identity, f, enabled) in reps {
                                    if !enabled {
                                        continue;
                                    }
                                    let pt2 = pt.clone();
                                    tasks.push(Task {
                                        identity,
                                        params: kv(&base),
                                        job: Box::new(move || {
                                            let exact = euler::q_euler_closed(&p, &pt2)?;
                                            Ok(approx_outcome(exact, f(&p, &pt2, budget)?))
                                        }),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        Suite::Fermint => {
            for (q, _) in &points {
                let ctx = QContext::unit_interval(q.clone())?;
                for a in 0..=2i64 {
                    for n in 0..=cfg.n_max {
                        for c_t in [int(1), q.clone()] {
                            let spec = IntegrandSpec::new(a, n, c_t.clone());
                            let base = [
                                ("Q", q_str(q)),
                                ("a", a.to_string()),
                                ("n", n.to_string()),
                                ("c_T", q_str(&c_t)),
                            ];
                            {
                                let (spec, ctx) = (spec.clone(), ctx.clone());
                                tasks.push(Task {
                                    identity: "fermionic_1d_vs_closed",
                                    params: params(suite, base.clone()),
                                    job: Box::new(move || {
                                        let p = EulerParams::new(spec.n, spec.a + 1, 1)?;
                                        let pt = EvalPoint::new(ctx.q().clone(), spec.c_t.clone())?;
                                        let exact = euler::q_euler_closed(&p, &pt)?;
                                        Ok(approx_outcome(
                                            exact,
                                            fermionic::fermionic_integral_1d(&spec, &ctx, budget)?,
                                        ))
                                    }),
                                });
                            }
                            for shift in 1..=3u32 {
                                let (spec, ctx) = (spec.clone(), ctx.clone());
                                let mut kv = params(suite, base.clone());
                                kv.insert("shift".into(), shift.to_string());
                                tasks.push(Task {
                                    identity: "functional_equation",
                                    params: kv,
                                    job: Box::new(move || {
                                        Ok(Outcome::approx(&fermionic::check_functional_equation(
                                            &spec, &ctx, shift, budget,
                                        )?))
                                    }),
                                });
                            }
                        }
                    }
                }
            }
        }
        Suite::Thm3 | Suite::Thm4 | Suite::Cor2 => {
            let mass_q = sample::q_point_mass();
            let mass_t = sample::t_point_mass();
            for n in 0..=cfg.n_max {
                for r in 1..=cfg.r_max {
                    for &h in &cfg.h_values {
                        for &(w1, w2) in &cfg.w_pairs {
                            if !within_budget(w1.max(w2) as usize, r) {
                                continue;
                            }
                            if suite == Suite::Cor2 && !within_budget(cfg.truncation, r) {
                                continue;
                            }
                            let p = EulerParams::new(n, h, r)?;
                            for (k, (q, t)) in points.iter().enumerate() {
                                let sp = SymmetryParams::new(w1, w2, p, q.clone(), t.clone())
                                    .map_err(|e| Error::Config(e.to_string()))?;
                                let mut kv = params(
                                    suite,
                                    [
                                        ("n", n.to_string()),
                                        ("r", r.to_string()),
                                        ("h", h.to_string()),
                                        ("w1", w1.to_string()),
                                        ("w2", w2.to_string()),
                                        ("sample", k.to_string()),
                                        ("q", q_str(q)),
                                        ("T", q_str(t)),
                                    ],
                                );
                                symmetry_tasks(
                                    suite, cfg, sp, &mut kv, &mass_q, &mass_t, budget, &mut tasks,
                                );
                            }
                        }
                    }
                }
            }
        }
        Suite::Limit => {
            for n in 0..=cfg.n_max {
                for r in 1..=cfg.r_max {
                    for &h in &cfg.h_values {
                        for x in 0..=4u32 {
                            let p = EulerParams::new(n, h, r)?;
                            tasks.push(Task {
                                identity: "classical_limit",
                                params: params(
                                    suite,
                                    [
                                        ("n", n.to_string()),
                                        ("r", r.to_string()),
                                        ("h", h.to_string()),
                                        ("x", x.to_string()),
                                    ],
                                ),
                                job: Box::new(move || {
                                    let lim = euler::q_to_1_limit(&p, x)?;
                                    let classical =
                                        euler::classical_euler_poly(n, r, &int(x as i64));
                                    Ok(Outcome::exact(&CheckResult::new(lim, classical)))
                                }),
                            });
                        }
                    }
                }
            }
        }
        Suite::All => unreachable!("expanded by RunConfig::suites"),
    }
    Ok(tasks)
}

#[allow(clippy::too_many_arguments)]
fn symmetry_tasks(
    suite: Suite,
    cfg: &RunConfig,
    sp: SymmetryParams,
    kv: &mut Params,
    mass_q: &ExactRational,
    mass_t: &ExactRational,
    budget: TruncationBudget,
    tasks: &mut Vec<Task>,
) {
    match suite {
        Suite::Thm3 => {
            let pit = PitCertificate::new(&sp, mass_q, mass_t, cfg.q_samples as u32);
            kv.insert("pit_degree_q".into(), pit.degree_q.to_string());
            kv.insert("pit_degree_t".into(), pit.degree_t.to_string());
            kv.insert(
                "pit_failure_bound".into(),
                to_fraction_string(&pit.failure_bound),
            );
            let fault = cfg.fault;
            tasks.push(Task {
                identity: "theorem3",
                params: kv.clone(),
                job: Box::new(move || {
                    let lhs = symmetry::thm3_lhs(&sp)?;
                    let rhs = match fault {
                        Some(Fault::Thm3RhsSign) => symmetry::thm3_rhs_sign_flipped(&sp)?,
                        None => symmetry::thm3_rhs(&sp)?,
                    };
                    Ok(Outcome::exact(&CheckResult::new(lhs, rhs)))
                }),
            });
        }
        Suite::Thm4 => {
            let sp2 = sp.clone();
            tasks.push(Task {
                identity: "theorem4",
                params: kv.clone(),
                job: Box::new(move || {
                    Ok(Outcome::exact(&CheckResult::new(
                        symmetry::thm4_lhs(&sp2)?,
                        symmetry::thm4_rhs(&sp2)?,
                    )))
                }),
            });
            for (side, lemma) in [("lhs", true), ("rhs", false)] {
                let sp2 = sp.clone();
                let mut kv2 = kv.clone();
                kv2.insert("side".into(), side.into());
                tasks.push(Task {
                    identity: "theorem4_vs_theorem3",
                    params: kv2,
                    job: Box::new(move || {
                        let c = if lemma {
                            CheckResult::new(symmetry::thm4_lhs(&sp2)?, symmetry::thm3_lhs(&sp2)?)
                        } else {
                            CheckResult::new(symmetry::thm4_rhs(&sp2)?, symmetry::thm3_rhs(&sp2)?)
                        };
                        Ok(Outcome::exact(&c))
                    }),
                });
            }
        }
        Suite::Cor2 => {
            kv.insert("M".into(), cfg.truncation.to_string());
            tasks.push(Task {
                identity: "corollary2",
                params: kv.clone(),
                job: Box::new(move || {
                    let c = symmetry::check_cor2(&sp, budget)?;
                    let bound = c.combined_bound();
                    let status = if !c.pass {
                        Status::Fail
                    } else if c.lhs.value == c.rhs.value {
                        Status::PassExact
                    } else {
                        Status::PassWithinBound
                    };
                    Ok(Outcome {
                        lhs: to_fraction_string(&c.lhs.value),
                        rhs: to_fraction_string(&c.rhs.value),
                        status,
                        bound: Some(to_fraction_string(&bound)),
                    })
                }),
            });
        }
        _ => unreachable!(),
    }
}

/// Parses `"W1,W2"`.
pub fn parse_w_pair(s: &str) -> Result<(u32, u32)> {
    let bad = || {
        Error::Config(format!(
            "expected W1,W2 with odd positive integers, got {s:?}"
        ))
    };
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    if a.is_multiple_of(2) || b.is_multiple_of(2) {
        return Err(bad());
    }
    Ok((a, b))
}
