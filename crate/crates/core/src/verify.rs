//! Checks of the identities between projections, discriminants and the Busé
//! factors, exact where the symbolic computation is affordable and by random
//! specialization otherwise.
//!
//! A probabilistic pass is evidence, not proof: each trial binds parameters to
//! random integers and checks the specialized statement exactly. A failing
//! trial with a nonzero specialized divisor is a certified counterexample, and
//! its bindings and values are kept in the report.

use std::collections::BTreeMap;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::euclid::{exact_div, sqrfree_part};
use crate::genform::{
    buse_a_factor, buse_b_factor, buse_witness, form_discriminant, generic_form, gradient_resultant,
    iterated_discriminant, multi_discriminant, parameter_count, GenericForm, ResultantMode, EXACT_MAX_DIM,
    EXACT_MAX_PARAMS,
};
use crate::poly::{format_coefficient, Coefficient, Poly, VarTable};
use crate::projection::{ProjOrder, Projector};

/// Default bound for random parameter values.
pub const DEFAULT_RANGE: i64 = 1_000_000;
/// Redraws allowed per trial before it is declared degenerate.
pub const MAX_REDRAWS: usize = 8;

/// How random specializations are drawn.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecializationPlan {
    pub seed: u64,
    pub trials: usize,
    /// Parameters left unbound; when empty, checks that need survivors pick them at random.
    pub kept_symbolic: Vec<String>,
    /// Values are drawn uniformly from `[-range, range]` without 0.
    pub range: i64,
}

impl SpecializationPlan {
    pub fn new(seed: u64, trials: usize) -> Self {
        SpecializationPlan {
            seed,
            trials,
            kept_symbolic: Vec::new(),
            range: DEFAULT_RANGE,
        }
    }

    pub fn keep<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.kept_symbolic = names.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_range(mut self, range: i64) -> Self {
        self.range = range;
        self
    }

    pub fn validate(&self, params: &[&str]) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidPlan("at least one trial is required".into()));
        }
        if self.range < 2 {
            return Err(Error::InvalidPlan(format!("value range {} is below 2", self.range)));
        }
        for k in &self.kept_symbolic {
            if !params.contains(&k.as_str()) {
                return Err(Error::InvalidPlan(format!("`{k}` is not a parameter of the check")));
            }
        }
        Ok(())
    }

    /// The random stream of one trial; independent of how trials are scheduled.
    pub fn rng(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64 + 1);
        rng
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Coefficient {
        loop {
            let v = rng.gen_range(-self.range..=self.range);
            if v != 0 {
                return BigRational::from_integer(v.into());
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Exact,
    Probabilistic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// One trial (or one exact sub-check) of a report.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub index: usize,
    pub ok: bool,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub degenerate: bool,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub bindings: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub symbolic: Vec<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<String>,
    #[serde(skip_serializing_if = "usize_is_zero")]
    pub redraws: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn usize_is_zero(v: &usize) -> bool {
    *v == 0
}

impl TrialRecord {
    fn value(mut self, key: &str, v: impl ToString) -> Self {
        self.values.insert(key.to_string(), v.to_string());
        self
    }

    fn note(mut self, text: impl Into<String>) -> Self {
        self.note = Some(text.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub mode: CheckMode,
    pub verdict: Verdict,
    pub seed: u64,
    pub trials: Vec<TrialRecord>,
    pub wall_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    fn new(check: impl Into<String>, mode: CheckMode, seed: u64, trials: Vec<TrialRecord>, start: Instant) -> Self {
        let verdict = verdict_of(&trials);
        CheckReport {
            check: check.into(),
            mode,
            verdict,
            seed,
            trials,
            wall_ms: start.elapsed().as_millis() as u64,
            label: None,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    /// The report with the wall time zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> CheckReport {
        CheckReport {
            wall_ms: 0,
            ..self.clone()
        }
    }

    /// One-line summary without timing, so text output is reproducible.
    pub fn summary(&self) -> String {
        let verdict = match self.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        };
        let mode = match self.mode {
            CheckMode::Exact => "exact",
            CheckMode::Probabilistic => "probabilistic",
        };
        let label = self.label.as_deref().map(|l| format!(" [{l}]")).unwrap_or_default();
        format!(
            "{}: {verdict} ({mode}, seed {}, {} trials){label}",
            self.check,
            self.seed,
            self.trials.len()
        )
    }
}

fn verdict_of(trials: &[TrialRecord]) -> Verdict {
    if trials.iter().any(|t| !t.ok && !t.degenerate) {
        Verdict::Fail
    } else if trials.is_empty() || trials.iter().any(|t| t.degenerate) {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    }
}

enum Outcome {
    Done(TrialRecord),
    Degenerate(String),
}

/// Runs the trials of a plan, redrawing degenerate ones; records come back in
/// trial order whatever the scheduling.
fn run_trials<F>(plan: &SpecializationPlan, trial: F) -> Result<Vec<TrialRecord>>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Outcome> + Sync,
{
    (0..plan.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = plan.rng(i);
            let mut reason = String::new();
            for redraw in 0..=MAX_REDRAWS {
                let outcome = match trial(&mut rng) {
                    Err(Error::DegenerateMinor(_)) => Outcome::Degenerate("vanishing Macaulay minor".into()),
                    Err(Error::DivisionByZero) => Outcome::Degenerate("vanishing leading coefficient".into()),
                    other => other?,
                };
                match outcome {
                    Outcome::Done(mut rec) => {
                        rec.index = i;
                        rec.redraws = redraw;
                        return Ok(rec);
                    }
                    Outcome::Degenerate(r) => reason = r,
                }
            }
            Ok(TrialRecord {
                index: i,
                degenerate: true,
                redraws: MAX_REDRAWS + 1,
                note: Some(format!("degenerate after {} draws: {reason}", MAX_REDRAWS + 1)),
                ..TrialRecord::default()
            })
        })
        .collect()
}

fn bindings_map(values: &[(String, Coefficient)]) -> BTreeMap<String, String> {
    values.iter().map(|(k, v)| (k.clone(), format_coefficient(v))).collect()
}

/// Binds every parameter except the survivors to random nonzero integers.
fn draw_bindings(
    plan: &SpecializationPlan,
    rng: &mut ChaCha8Rng,
    params: &[&str],
    survivors: &[String],
) -> Vec<(String, Coefficient)> {
    params
        .iter()
        .filter(|p| !survivors.iter().any(|s| s == *p))
        .map(|p| (p.to_string(), plan.draw(rng)))
        .collect()
}

fn pick_survivors(plan: &SpecializationPlan, rng: &mut ChaCha8Rng, params: &[&str], count: usize) -> Vec<String> {
    if !plan.kept_symbolic.is_empty() {
        return plan.kept_symbolic.clone();
    }
    let count = count.min(params.len());
    let mut idx: Vec<usize> = sample(rng, params.len(), count).into_vec();
    idx.sort_unstable();
    idx.into_iter().map(|i| params[i].to_string()).collect()
}

fn specialize(p: &Poly, values: &[(String, Coefficient)]) -> Result<Poly> {
    ResultantMode::Specialized(values.to_vec()).specialize(p)
}

/// `a = c * b` for a nonzero rational `c`; two zeros count as proportional.
pub fn proportional(a: &Poly, b: &Poly) -> bool {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => true,
        (false, false) => exact_div(a, b).is_ok_and(|q| q.is_constant()),
        _ => false,
    }
}

/// Whether `lhs[k] / rhs[k]` is the same nonzero rational for every `k`; also
/// returns the ratios.
pub fn ratio_constancy(pairs: &[(Coefficient, Coefficient)]) -> (bool, Vec<Option<Coefficient>>) {
    let ratios: Vec<Option<Coefficient>> = pairs
        .iter()
        .map(|(l, r)| if l.is_zero() || r.is_zero() { None } else { Some(l / r) })
        .collect();
    let constant = !ratios.is_empty() && ratios.iter().all(|r| r.is_some()) && ratios.windows(2).all(|w| w[0] == w[1]);
    (constant, ratios)
}

/// Per trial: binds all variables but one random survivor (or the plan's kept
/// variables) and tests whether the specialized `p` divides the specialized `q`.
pub fn probabilistic_divides(p: &Poly, q: &Poly, plan: &SpecializationPlan) -> Result<CheckReport> {
    let start = Instant::now();
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let table = p.vars().merge(q.vars());
    let (p, q) = (p.embed(&table), q.embed(&table));
    let mut names: Vec<String> = p.used_var_names();
    for v in q.used_var_names() {
        if !names.contains(&v) {
            names.push(v);
        }
    }
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    plan.validate(&refs)?;
    let records = run_trials(plan, |rng| {
        let survivors = pick_survivors(plan, rng, &refs, 1);
        let values = draw_bindings(plan, rng, &refs, &survivors);
        let ps = specialize(&p, &values)?;
        if ps.is_zero() {
            return Ok(Outcome::Degenerate("specialized divisor vanishes".into()));
        }
        let qs = specialize(&q, &values)?;
        let ok = exact_div(&qs, &ps).is_ok();
        let mut rec = TrialRecord {
            ok,
            bindings: bindings_map(&values),
            symbolic: survivors,
            ..TrialRecord::default()
        }
        .value("P", &ps)
        .value("Q", &qs);
        if ps.is_constant() {
            rec = rec.note("specialized divisor is constant");
        }
        Ok(Outcome::Done(rec))
    })?;
    let mut report = CheckReport::new("divides", CheckMode::Probabilistic, plan.seed, records, start);
    let informative = report.trials.iter().any(|t| {
        t.values
            .get("P")
            .is_some_and(|v| Poly::parse(v, Some(&table)).is_ok_and(|p| !p.is_constant()))
    });
    if report.verdict == Verdict::Pass && !informative {
        report.verdict = Verdict::Inconclusive;
        report.notes.push("every specialized divisor was constant".into());
    }
    Ok(report)
}

/// Shared state of a batch of checks: the projection cache and harness options.
#[derive(Debug, Default)]
pub struct Verifier {
    projector: Projector,
    conjecture_mode: bool,
    fault_trial: Option<usize>,
}

fn order_of(form: &GenericForm) -> ProjOrder {
    ProjOrder::new(form.x_vars().iter().rev().cloned()).expect("distinct names")
}

fn macaulay_dim_of_gradient(n: usize, d: u32) -> u64 {
    let nu = n as u64 * (d as u64 - 2) + 1;
    parameter_count(n, nu as u32)
}

/// Whether `check_main` computes both sides symbolically.
pub fn main_is_exact(n: usize, d: u32) -> bool {
    n == 1 || (n <= 3 && d == 2) || (n == 2 && d <= 4)
}

/// The sizes `check_main` accepts.
pub fn main_is_feasible(n: usize, d: u32) -> bool {
    main_is_exact(n, d) || (n <= 3 && d <= 6)
}

impl Verifier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_projector(projector: Projector) -> Self {
        Verifier {
            projector,
            ..Self::default()
        }
    }

    /// Lets `check_main` run at odd degree, labelling the report.
    pub fn conjecture_mode(mut self, on: bool) -> Self {
        self.conjecture_mode = on;
        self
    }

    /// Perturbs the right-hand side of the given Busé trial (harness self-test).
    pub fn inject_fault(mut self, trial: Option<usize>) -> Self {
        self.fault_trial = trial;
        self
    }

    pub fn projector(&self) -> &Projector {
        &self.projector
    }

    /// The discriminant of a generic form divides its projection.
    pub fn check_main(&self, n: usize, d: u32, plan: &SpecializationPlan) -> Result<CheckReport> {
        let start = Instant::now();
        if d == 0 || n == 0 {
            return Err(Error::InvalidDimension(format!("n = {n}, d = {d}")));
        }
        if d % 2 == 1 && !self.conjecture_mode {
            return Err(Error::InvalidDimension(format!(
                "the divisibility theorem assumes even degree, got d = {d}; enable conjecture mode to run it anyway"
            )));
        }
        if !main_is_feasible(n, d) {
            return Err(Error::InfeasibleSize(format!("check_main at n = {n}, d = {d}")));
        }
        let form = generic_form(n, d)?;
        let params = form.param_names();
        plan.validate(&params)?;
        let order = order_of(&form);
        let name = format!("main(n={n},d={d})");
        let mut report = if main_is_exact(n, d) {
            let delta = multi_discriminant(&form)?;
            let hp = self.projector.hproj(form.body(), &order)?;
            let quotient = exact_div(&hp, &delta);
            let mut rec = TrialRecord {
                ok: quotient.is_ok(),
                ..TrialRecord::default()
            }
            .value("delta", &delta)
            .value("hproj", &hp);
            if let Ok(q) = quotient {
                rec = rec.value("quotient", q);
            }
            CheckReport::new(name, CheckMode::Exact, plan.seed, vec![rec], start)
        } else {
            let x = form.x_refs();
            let records = run_trials(plan, |rng| {
                let survivors = pick_survivors(plan, rng, &params, 1);
                let values = draw_bindings(plan, rng, &params, &survivors);
                let fs = specialize(form.body(), &values)?;
                let delta = form_discriminant(&fs, &x, &ResultantMode::Exact)?;
                if delta.is_constant() {
                    return Ok(Outcome::Degenerate("specialized discriminant is constant".into()));
                }
                if sqrfree_part(&delta).as_poly() != delta.as_poly() {
                    return Ok(Outcome::Degenerate(
                        "specialized discriminant has a repeated factor".into(),
                    ));
                }
                let hp = Projector::new().hproj(&fs, &order)?;
                let ok = exact_div(&hp, &delta).is_ok();
                Ok(Outcome::Done(
                    TrialRecord {
                        ok,
                        bindings: bindings_map(&values),
                        symbolic: survivors,
                        ..TrialRecord::default()
                    }
                    .value("delta", &delta)
                    .value("hproj", &hp),
                ))
            })?;
            let mut r = CheckReport::new(name, CheckMode::Probabilistic, plan.seed, records, start);
            r.notes.push(
                "per trial: all parameters but the survivors bound at random; the specialized discriminant must divide the projection of the specialized form".into(),
            );
            r
        };
        if d % 2 == 1 {
            report.label = Some("conjecture-mode".into());
        }
        Ok(report)
    }

    /// The projection of a generic ternary form equals its discriminant.
    pub fn check_main2(&self, d: u32, plan: &SpecializationPlan) -> Result<CheckReport> {
        let start = Instant::now();
        if d == 0 {
            return Err(Error::InvalidDimension("d must be at least 1".into()));
        }
        if d > 5 {
            return Err(Error::InfeasibleSize(format!("check_main2 at d = {d}")));
        }
        let form = generic_form(3, d)?;
        let params = form.param_names();
        plan.validate(&params)?;
        let x = form.x_refs();
        let order = order_of(&form);
        let name = format!("main2(d={d})");
        if d <= 2 {
            let delta = multi_discriminant(&form)?;
            let hp = self.projector.hproj(form.body(), &order)?;
            let mut records = vec![TrialRecord {
                ok: proportional(&hp, &delta),
                ..TrialRecord::default()
            }
            .value("delta", &delta)
            .value("hproj", &hp)
            .note("hproj(f,[z,y,x]) = c * delta(f)")];
            if d == 2 {
                let yz = ProjOrder::new(["y", "z"])?;
                let lhs = sqrfree_part(self.projector.hproj(form.body(), &yz)?.as_poly());
                let edge = form.body().specialize(&[("x", Coefficient::zero())])?;
                let edge_delta = form_discriminant(&edge, &["y", "z"], &ResultantMode::Exact)?;
                let xv = Poly::var(form.body().vars(), "x")?;
                let rhs = &(delta.as_poly() * edge_delta.as_poly()) * &xv;
                records.push(
                    TrialRecord {
                        index: 1,
                        ok: proportional(&lhs, &rhs),
                        ..TrialRecord::default()
                    }
                    .value("sqrfree_hproj_yz", &lhs)
                    .value("delta_edge", &edge_delta)
                    .note("sqrfree(hproj(f,[y,z])) = c * delta(f) * delta(f(0,y,z)) * x"),
                );
            }
            return Ok(CheckReport::new(name, CheckMode::Exact, plan.seed, records, start));
        }
        let keep = 1;
        let mut records = run_trials(plan, |rng| {
            let survivors = pick_survivors(plan, rng, &params, keep);
            let values = draw_bindings(plan, rng, &params, &survivors);
            let fs = specialize(form.body(), &values)?;
            let delta = form_discriminant(&fs, &x, &ResultantMode::Exact)?;
            if delta.is_constant() {
                return Ok(Outcome::Degenerate("specialized discriminant is constant".into()));
            }
            let hp = Projector::new().hproj(&fs, &order)?;
            let divides = exact_div(&hp, &delta).is_ok();
            let refs: Vec<&str> = survivors.iter().map(String::as_str).collect();
            let mut degrees_agree = hp.degree_in(&refs) == delta.degree_in(&refs);
            for s in &refs {
                degrees_agree &= hp.degree(s) == delta.degree(s);
            }
            let mut rec = TrialRecord {
                ok: divides && degrees_agree,
                bindings: bindings_map(&values),
                symbolic: survivors.clone(),
                ..TrialRecord::default()
            }
            .value("delta", &delta)
            .value("hproj", &hp)
            .value("delta_divides_hproj", divides)
            .value("degrees_agree", degrees_agree);
            if !degrees_agree {
                rec = rec.note("the projection has extra factors in the surviving parameters");
            }
            Ok(Outcome::Done(rec))
        })?;
        if d == 3 {
            records.push(self.distinct_a_factors(&form, plan, records.len())?);
        }
        let mut report = CheckReport::new(name, CheckMode::Probabilistic, plan.seed, records, start);
        report.notes.push(format!(
            "per trial: {keep} parameter(s) kept symbolic; asserts that the specialized discriminant divides the specialized projection and that their degrees in the kept parameters agree"
        ));
        Ok(report)
    }

    /// `a_{y,z}` and `a_{z,y}` are not proportional: their ratio differs at two points.
    fn distinct_a_factors(&self, form: &GenericForm, plan: &SpecializationPlan, index: usize) -> Result<TrialRecord> {
        let x = form.x_refs();
        let params = form.param_names();
        let mut rng = plan.rng(usize::MAX - 1);
        let mut ratios = Vec::new();
        for _ in 0..2 {
            let values = draw_bindings(plan, &mut rng, &params, &[]);
            let mode = ResultantMode::Specialized(values);
            let ayz = buse_a_factor(form.body(), &x, "y", &mode)?;
            let azy = buse_a_factor(form.body(), &x, "z", &mode)?;
            ratios.push((ayz.constant_value().unwrap(), azy.constant_value().unwrap()));
        }
        let (constant, r) = ratio_constancy(&ratios);
        let shown: Vec<String> = r
            .iter()
            .map(|c| c.as_ref().map_or("undefined".into(), format_coefficient))
            .collect();
        Ok(TrialRecord {
            index,
            ok: !constant && r.iter().all(Option::is_some),
            ..TrialRecord::default()
        }
        .value("a_yz/a_zy", shown.join(", "))
        .note("a_{y,z} and a_{z,y} are not proportional"))
    }

    /// `disc_y(disc_z(f(1,y,z))) / (C_{0,0,d} * delta * a^3 * b^2)` is one constant across trials.
    pub fn check_buse(&self, d: u32, plan: &SpecializationPlan) -> Result<CheckReport> {
        let start = Instant::now();
        if d < 3 {
            return Err(Error::InvalidDimension(format!("Busé factors need d >= 3, got {d}")));
        }
        if d > 5 {
            return Err(Error::InfeasibleSize(format!("check_buse at d = {d}")));
        }
        let form = generic_form(3, d)?;
        let params = form.param_names();
        plan.validate(&params)?;
        if !plan.kept_symbolic.is_empty() {
            return Err(Error::InvalidPlan("the Busé check binds every parameter".into()));
        }
        let x = form.x_refs();
        let lead = form.param(&[0, 0, d]).expect("pure z power").to_string();
        let mut records = run_trials(plan, |rng| {
            let values = draw_bindings(plan, rng, &params, &[]);
            let fs = specialize(form.body(), &values)?;
            let lhs = iterated_discriminant(&fs, &x)?.constant_value().unwrap_or_default();
            let mode = ResultantMode::Specialized(values.clone());
            let delta = value_of(&gradient_resultant(form.body(), &x, &mode)?);
            let a = value_of(&buse_a_factor(form.body(), &x, "z", &mode)?);
            let b = match buse_b_factor(form.body(), &x, "z", &mode) {
                Ok(b) => value_of(&b),
                Err(Error::NotASquare) => {
                    return Ok(Outcome::Done(
                        TrialRecord {
                            ok: false,
                            bindings: bindings_map(&values),
                            ..TrialRecord::default()
                        }
                        .note("b^2 is not a rational square"),
                    ))
                }
                Err(e) => return Err(e),
            };
            let c = values.iter().find(|(k, _)| *k == lead).unwrap().1.clone();
            let rhs = &c * &delta * num_traits::pow(a.clone(), 3) * &b * &b;
            if lhs.is_zero() || rhs.is_zero() {
                return Ok(Outcome::Degenerate("one side vanishes".into()));
            }
            Ok(Outcome::Done(
                TrialRecord {
                    ok: true,
                    bindings: bindings_map(&values),
                    ..TrialRecord::default()
                }
                .value("L", format_coefficient(&lhs))
                .value("R", format_coefficient(&rhs))
                .value("delta", format_coefficient(&delta))
                .value("a", format_coefficient(&a))
                .value("b", format_coefficient(&b)),
            ))
        })?;
        if let Some(k) = self.fault_trial {
            if let Some(rec) = records.get_mut(k) {
                if let Some(r) = rec.values.get("R").and_then(|s| crate::poly::parse_coefficient(s)) {
                    let bumped = r + Coefficient::from_integer(1.into());
                    rec.values.insert("R".into(), format_coefficient(&bumped));
                    rec.note = Some("right-hand side perturbed by fault injection".into());
                }
            }
        }
        mark_ratios(&mut records);
        let mut report = CheckReport::new(
            format!("buse(d={d})"),
            CheckMode::Probabilistic,
            plan.seed,
            records,
            start,
        );
        report.notes.push(
            "all parameters bound at random; the identity holds up to a fixed constant, so the ratio must agree across trials".into(),
        );
        if d == 3 {
            report.notes.push("b = 1 for cubics".into());
        }
        Ok(report)
    }

    /// The witness `z^d + w z x^(d-1) + y^d` separates the two pairs of Busé factors.
    pub fn check_witness(&self, d: u32, plan: &SpecializationPlan) -> Result<CheckReport> {
        let start = Instant::now();
        if d < 4 {
            return Err(Error::InvalidDimension(format!(
                "the witness check needs d >= 4, got {d}"
            )));
        }
        if d > 6 {
            return Err(Error::InfeasibleSize(format!("check_witness at d = {d}")));
        }
        plan.validate(&["w"])?;
        let f = buse_witness(d)?;
        let x = ["x", "y", "z"];
        let at = |w: Coefficient| ResultantMode::Specialized(vec![("w".into(), w)]);
        let factors = |mode: &ResultantMode| -> Result<[Poly; 4]> {
            Ok([
                buse_a_factor(&f, &x, "y", mode)?,
                crate::genform::buse_b_squared(&f, &x, "y", mode)?,
                buse_a_factor(&f, &x, "z", mode)?,
                crate::genform::buse_b_squared(&f, &x, "z", mode)?,
            ])
        };
        let keys = ["a_yz", "b2_yz", "a_zy", "b2_zy"];
        let mut records = run_trials(plan, |rng| {
            let w = plan.draw(rng);
            let vals = factors(&at(w.clone()))?;
            let ok = vals[0].is_zero() && vals[1].is_zero() && !vals[2].is_zero() && !vals[3].is_zero();
            let mut rec = TrialRecord {
                ok,
                ..TrialRecord::default()
            };
            rec.bindings.insert("w".into(), format_coefficient(&w));
            for (k, v) in keys.iter().zip(&vals) {
                rec = rec.value(k, v);
            }
            Ok(Outcome::Done(rec))
        })?;
        let zero = factors(&at(Coefficient::zero()))?;
        let mut rec = TrialRecord {
            index: records.len(),
            ok: zero[2].is_zero() && zero[3].is_zero(),
            ..TrialRecord::default()
        }
        .note("w = 0: the (z,y) factors vanish");
        rec.bindings.insert("w".into(), "0".into());
        for (k, v) in keys.iter().zip(&zero).skip(2) {
            rec = rec.value(k, v);
        }
        records.push(rec);
        if d == 4 {
            let sym = factors(&ResultantMode::Exact)?;
            let w = Poly::var(f.vars(), "w")?;
            let divisible = |p: &Poly| {
                let t = p.vars().merge(w.vars());
                !p.is_zero() && exact_div(&p.embed(&t), &w.embed(&t)).is_ok()
            };
            let mut rec = TrialRecord {
                index: records.len(),
                ok: sym[0].is_zero() && sym[1].is_zero() && divisible(&sym[2]) && divisible(&sym[3]),
                symbolic: vec!["w".into()],
                ..TrialRecord::default()
            }
            .note("w symbolic: the (y,z) factors are identically zero and w divides both (z,y) factors");
            for (k, v) in keys.iter().zip(&sym) {
                rec = rec.value(k, v);
            }
            records.push(rec);
        }
        let mut report = CheckReport::new(
            format!("witness(d={d})"),
            CheckMode::Probabilistic,
            plan.seed,
            records,
            start,
        );
        report.notes.push(
            "the (y,z) factors vanish at random w; the (z,y) factors are nonzero at random w and vanish at w = 0, so w divides them".into(),
        );
        Ok(report)
    }

    /// `xy + y^2 + xz + yz + k z^2` has projection 1 while its discriminant is `±k`.
    pub fn check_remark(&self) -> Result<CheckReport> {
        let start = Instant::now();
        let table = VarTable::new(["x", "y", "z", "k"])?;
        let f = Poly::parse("x*y + y^2 + x*z + y*z + k*z^2", Some(&table))?;
        let x = ["x", "y", "z"];
        let order = ProjOrder::new(["x", "y", "z"])?;
        let hp = self.projector.hproj(&f, &order)?;
        let delta = form_discriminant(&f, &x, &ResultantMode::Exact)?;
        let k = Poly::var(&table, "k")?;
        let f0 = f.specialize(&[("k", Coefficient::zero())])?;
        let hp0 = self.projector.hproj(&f0, &order)?;
        let delta0 = form_discriminant(&f0, &x, &ResultantMode::Exact)?;
        let records = vec![
            TrialRecord {
                index: 0,
                ok: hp.is_one(),
                ..TrialRecord::default()
            }
            .value("hproj", &hp)
            .note("hproj(F,[x,y,z]) = 1"),
            TrialRecord {
                index: 1,
                ok: delta.as_poly() == &k || delta.as_poly() == &-&k,
                ..TrialRecord::default()
            }
            .value("delta", &delta)
            .note("delta(F) = ±k, so hproj(F) divides delta(F)"),
            TrialRecord {
                index: 2,
                ok: delta0.is_zero() && hp0.is_one(),
                ..TrialRecord::default()
            }
            .value("delta", &delta0)
            .value("hproj", &hp0)
            .note("k = 0: delta vanishes while hproj stays 1"),
        ];
        Ok(CheckReport::new("remark", CheckMode::Exact, 0, records, start))
    }

    /// `deg delta = n (d-1)^(n-1)`: symbolically when small, otherwise through the
    /// restriction of delta to a random plane `s*a + t*b` of parameter values,
    /// which is a binary form of the same degree whenever it is nonzero.
    pub fn check_degree(&self, n: usize, d: u32, plan: &SpecializationPlan) -> Result<CheckReport> {
        let start = Instant::now();
        if n == 0 || d < 2 {
            return Err(Error::InvalidDimension(format!(
                "degree law needs n >= 1, d >= 2, got n = {n}, d = {d}"
            )));
        }
        let form = generic_form(n, d)?;
        let params = form.param_names();
        plan.validate(&params)?;
        let expected = crate::genform::discriminant_degree(n, d);
        let dim = macaulay_dim_of_gradient(n, d);
        let name = format!("degree(n={n},d={d})");
        let rec = if dim as usize <= EXACT_MAX_DIM && params.len() <= EXACT_MAX_PARAMS {
            let delta = multi_discriminant(&form)?;
            let deg = delta.degree_in(&params).unwrap_or(0);
            let homogeneous = delta.is_homogeneous_in(&params, deg);
            TrialRecord {
                ok: deg as u64 == expected && homogeneous,
                ..TrialRecord::default()
            }
            .value("degree", deg)
            .value("expected", expected)
            .note("symbolic discriminant")
        } else {
            if dim > 400 {
                return Err(Error::InfeasibleSize(format!("degree law at n = {n}, d = {d}")));
            }
            let mut rng = plan.rng(0);
            let (plane, values) = plane_restriction(&form, plan, &mut rng)?;
            let r = gradient_resultant(&plane, &form.x_refs(), &ResultantMode::Exact)?;
            let deg = r.degree_in(&["s", "t"]).unwrap_or(0);
            let homogeneous = !r.is_zero() && r.is_homogeneous_in(&["s", "t"], deg);
            let mut rec = TrialRecord {
                ok: deg as u64 == expected && homogeneous,
                bindings: values,
                symbolic: vec!["s".into(), "t".into()],
                ..TrialRecord::default()
            }
            .value("degree", deg)
            .value("expected", expected)
            .note("discriminant restricted to the plane C = s*A + t*B");
            if !homogeneous {
                rec.note = Some("restriction vanished or is not a binary form".into());
            }
            rec
        };
        Ok(CheckReport::new(name, CheckMode::Exact, plan.seed, vec![rec], start))
    }

    /// Every check at its standard size.
    pub fn check_all(&self, plan: &SpecializationPlan) -> Result<Vec<CheckReport>> {
        let mut out = Vec::new();
        self.check_all_each(plan, |r| out.push(r))?;
        Ok(out)
    }

    /// As [`Verifier::check_all`], handing each report to `sink` as soon as it is done.
    pub fn check_all_each(&self, plan: &SpecializationPlan, mut sink: impl FnMut(CheckReport)) -> Result<()> {
        sink(self.check_remark()?);
        sink(self.check_main2(1, plan)?);
        sink(self.check_main2(2, plan)?);
        sink(self.check_main(2, 2, plan)?);
        sink(self.check_main(3, 2, plan)?);
        sink(self.check_main(3, 4, plan)?);
        sink(self.check_main2(3, plan)?);
        sink(self.check_buse(3, plan)?);
        sink(self.check_buse(4, plan)?);
        sink(self.check_witness(4, plan)?);
        sink(self.check_witness(5, plan)?);
        for (n, d) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)] {
            sink(self.check_degree(n, d, plan)?);
        }
        Ok(())
    }
}

fn value_of(p: &Poly) -> Coefficient {
    p.constant_value().unwrap_or_default()
}

/// Replaces each parameter by `s * A + t * B` for random integer vectors `A`, `B`.
fn plane_restriction(
    form: &GenericForm,
    plan: &SpecializationPlan,
    rng: &mut ChaCha8Rng,
) -> Result<(Poly, BTreeMap<String, String>)> {
    let st = VarTable::new(["s", "t"])?;
    let s = Poly::var(&st, "s")?;
    let t = Poly::var(&st, "t")?;
    let mut bindings = Vec::new();
    let mut shown = BTreeMap::new();
    for name in form.param_names() {
        let (a, b) = (plan.draw(rng), plan.draw(rng));
        shown.insert(
            name.to_string(),
            format!("{}*s + {}*t", format_coefficient(&a), format_coefficient(&b)),
        );
        bindings.push((name, &s.scale(&a) + &t.scale(&b)));
    }
    Ok((form.body().substitute(&bindings)?, shown))
}

/// Marks trials whose ratio `L / R` differs from the most common one.
fn mark_ratios(records: &mut [TrialRecord]) {
    let pairs: Vec<Option<(Coefficient, Coefficient)>> = records
        .iter()
        .map(|r| {
            let l = crate::poly::parse_coefficient(r.values.get("L")?)?;
            let rr = crate::poly::parse_coefficient(r.values.get("R")?)?;
            Some((l, rr))
        })
        .collect();
    let ratios: Vec<Option<Coefficient>> = pairs
        .iter()
        .map(|p| p.as_ref().and_then(|(l, r)| (!r.is_zero()).then(|| l / r)))
        .collect();
    let mut counts: Vec<(Coefficient, usize)> = Vec::new();
    for r in ratios.iter().flatten() {
        match counts.iter_mut().find(|(c, _)| c == r) {
            Some(entry) => entry.1 += 1,
            None => counts.push((r.clone(), 1)),
        }
    }
    let reference = counts
        .iter()
        .fold(None::<&(Coefficient, usize)>, |best, c| match best {
            Some(b) if b.1 >= c.1 => Some(b),
            _ => Some(c),
        })
        .map(|(c, _)| c.clone());
    for (rec, ratio) in records.iter_mut().zip(ratios) {
        if let Some(r) = &ratio {
            rec.ratio = Some(format_coefficient(r));
            if Some(r) != reference.as_ref() {
                rec.ok = false;
            }
        }
    }
}

pub fn check_main(n: usize, d: u32, plan: &SpecializationPlan) -> Result<CheckReport> {
    Verifier::new().check_main(n, d, plan)
}

pub fn check_main2(d: u32, plan: &SpecializationPlan) -> Result<CheckReport> {
    Verifier::new().check_main2(d, plan)
}

pub fn check_buse(d: u32, plan: &SpecializationPlan) -> Result<CheckReport> {
    Verifier::new().check_buse(d, plan)
}

pub fn check_witness(d: u32, plan: &SpecializationPlan) -> Result<CheckReport> {
    Verifier::new().check_witness(d, plan)
}

pub fn check_remark() -> Result<CheckReport> {
    Verifier::new().check_remark()
}

pub fn check_degree(n: usize, d: u32, plan: &SpecializationPlan) -> Result<CheckReport> {
    Verifier::new().check_degree(n, d, plan)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Poly {
        Poly::parse(s, None).unwrap()
    }

    #[test]
    fn divides_examples() {
        let plan = SpecializationPlan::new(3, 5);
        let t = VarTable::new(["x", "y"]).unwrap();
        let p = Poly::parse("x + y", Some(&t)).unwrap();
        let qq = Poly::parse("x^2 - y^2", Some(&t)).unwrap();
        assert!(probabilistic_divides(&p, &qq, &plan).unwrap().passed());
        let r = probabilistic_divides(&q("x + 1"), &q("x^2 + 1"), &plan).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.trials.iter().all(|t| !t.ok && t.values.contains_key("P")));
    }

    #[test]
    fn plan_validation() {
        let plan = SpecializationPlan::new(0, 0);
        assert!(matches!(plan.validate(&["a"]), Err(Error::InvalidPlan(_))));
        let plan = SpecializationPlan::new(0, 1).with_range(1);
        assert!(matches!(plan.validate(&["a"]), Err(Error::InvalidPlan(_))));
        let plan = SpecializationPlan::new(0, 1).keep(["b"]);
        assert!(matches!(plan.validate(&["a"]), Err(Error::InvalidPlan(_))));
    }

    #[test]
    fn ratio_logic() {
        let c = |v: i64| Coefficient::from_integer(v.into());
        let (ok, _) = ratio_constancy(&[(c(6), c(2)), (c(9), c(3))]);
        assert!(ok);
        let (ok, _) = ratio_constancy(&[(c(6), c(2)), (c(9), c(4))]);
        assert!(!ok);
        let (ok, _) = ratio_constancy(&[(c(0), c(2))]);
        assert!(!ok);
    }

    #[test]
    fn remark_check() {
        let r = check_remark().unwrap();
        assert!(r.passed(), "{:?}", r);
        assert_eq!(r.mode, CheckMode::Exact);
    }

    #[test]
    fn odd_degree_is_refused() {
        let plan = SpecializationPlan::new(0, 1);
        assert!(check_main(3, 3, &plan).is_err());
    }

    #[test]
    fn exact_small_main() {
        let plan = SpecializationPlan::new(0, 1);
        let r = check_main(2, 2, &plan).unwrap();
        assert!(r.passed() && r.mode == CheckMode::Exact);
    }
}
