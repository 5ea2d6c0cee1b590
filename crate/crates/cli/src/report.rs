//! The JSON report and the pipeline that fills it.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use schur_lattice::building::{
    self, convexity_check, detect_graduated, exponent_profile, fix_bfs, fix_polytrope, invariant_subspaces,
    is_invariant, spans_end_residue, BfsOptions, ExponentMatrix, FixSet, ResidueRep,
};
use schur_lattice::dvr::{compute_order, Certificate, ComputedOrder, Lattice, LatticeClass};
use schur_lattice::{with_field, AnyField, Error, FieldSpec, Matrix, Realization, Result, SchurModule, ValuedField};

use crate::cache;
use crate::case::{Case, Options};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Highest `m` for which the middle family is checked.
pub const FAMILY_DEPTH: i64 = 5;

#[derive(Clone, Debug, Serialize)]
pub struct CaseInfo {
    pub n: usize,
    pub lambda: Vec<usize>,
    pub field: FieldSpec,
    pub realization: Realization,
}

impl From<&Case> for CaseInfo {
    fn from(c: &Case) -> Self {
        CaseInfo { n: c.n, lambda: c.lambda.parts().to_vec(), field: c.field, realization: c.realization }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderSummary {
    pub rank: usize,
    pub full_rank: bool,
    pub divisors: Vec<i64>,
    pub congruence_level: Option<u32>,
    /// Minimal valuation of each matrix entry over `H`; `null` where `H` vanishes.
    pub exponent_profile: ExponentMatrix,
    pub graduated: bool,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixSummary {
    pub count: usize,
    pub bounded: bool,
    pub radius: u64,
    pub convex: bool,
    /// Every class lies within the congruence level of `[Λ₀]`.
    pub ball_bound: Option<bool>,
    pub classes: Vec<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<i64>>>,
    /// Whether `H` fixes every listed class, checked directly.
    pub verified_invariant: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Agreement {
    pub equal: bool,
    pub polytrope_within_bfs: bool,
}

/// The lattices `L_m = R e_1 ⊕ ϖ^m R e_2 ⊕ … ⊕ R e_N` for `m = 0..=depth`.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyCheck {
    pub depth: i64,
    pub invariant: Vec<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixReport {
    pub polytrope: Option<FixSummary>,
    pub bfs: Option<FixSummary>,
    pub agreement: Option<Agreement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub middle_family: Option<FamilyCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidueSummary {
    pub spans_end: bool,
    /// `null` when enumeration exceeded the cap.
    pub invariant_subspaces: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorInfo {
    pub kind: &'static str,
    pub message: String,
    pub exit_code: i32,
}

impl From<&Error> for ErrorInfo {
    fn from(e: &Error) -> Self {
        let code = exit_code(e);
        let kind = match code {
            3 => "cap_exceeded",
            4 => "invariant_violation",
            _ => "invalid_input",
        };
        ErrorInfo { kind, message: e.to_string(), exit_code: code }
    }
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded(_) => 3,
        Error::InvariantViolation(_) | Error::NegativeCycle(_) => 4,
        _ => 2,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub case: CaseInfo,
    pub hooks: Vec<Vec<usize>>,
    pub core: bool,
    pub dim: usize,
    pub seed: u64,
    pub order: Option<OrderSummary>,
    pub fix: Option<FixReport>,
    pub residue: Option<ResidueSummary>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
    pub error: Option<ErrorInfo>,
}

impl Report {
    fn new(case: &Case, opts: &Options) -> Self {
        Report {
            version: VERSION,
            case: case.into(),
            hooks: case.lambda.hook_lengths(),
            core: case.lambda.is_core(case.field.residue_characteristic() as usize),
            dim: case.dim(),
            seed: opts.order.seed,
            order: None,
            fix: None,
            residue: None,
            notes: Vec::new(),
            timings: opts.timings.then(BTreeMap::new),
            error: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.error.as_ref().map_or(0, |e| e.exit_code)
    }

    /// The BFS count when it ran, else the polytrope count.
    pub fn fixed_count(&self) -> Option<usize> {
        let fix = self.fix.as_ref()?;
        fix.bfs.as_ref().or(fix.polytrope.as_ref()).map(|s| s.count)
    }
}

/// Which stages to run after the order.
#[derive(Clone, Copy, Debug)]
pub struct Stages {
    pub fix: bool,
    pub residue: bool,
}

impl Stages {
    pub const ALL: Stages = Stages { fix: true, residue: true };
    pub const ORDER: Stages = Stages { fix: false, residue: false };
    pub const RESIDUE: Stages = Stages { fix: false, residue: true };
}

/// Runs the pipeline and folds any error into the report.
pub fn run(case: &Case, opts: &Options, stages: Stages) -> Report {
    let mut report = Report::new(case, opts);
    if let Err(e) = fill(case, opts, stages, &mut report) {
        report.error = Some(ErrorInfo::from(&e));
    }
    report
}

struct Clock<'a> {
    timings: &'a mut Option<BTreeMap<String, f64>>,
    start: Instant,
}

impl<'a> Clock<'a> {
    fn new(timings: &'a mut Option<BTreeMap<String, f64>>) -> Self {
        Clock { timings, start: Instant::now() }
    }

    fn lap(&mut self, stage: &str) {
        if let Some(t) = self.timings.as_mut() {
            t.insert(stage.to_string(), self.start.elapsed().as_secs_f64());
        }
        self.start = Instant::now();
    }
}

fn fill(case: &Case, opts: &Options, stages: Stages, report: &mut Report) -> Result<()> {
    let module = case.module(opts.cap_n)?;
    let field = AnyField::new(case.field)?;
    with_field!(&field, f => fill_with(f, &module, opts, stages, report))
}

fn fill_with<F: ValuedField>(
    f: &F,
    module: &SchurModule,
    opts: &Options,
    stages: Stages,
    report: &mut Report,
) -> Result<()> {
    let mut timings = report.timings.take();
    let result = pipeline(f, module, opts, stages, report, &mut Clock::new(&mut timings));
    report.timings = timings;
    cache::store(module);
    result
}

fn pipeline<F: ValuedField>(
    f: &F,
    module: &SchurModule,
    opts: &Options,
    stages: Stages,
    report: &mut Report,
    clock: &mut Clock<'_>,
) -> Result<()> {
    let order = compute_order(f, module, &opts.order)?;
    clock.lap("order");
    let h = &order.module;
    let profile = exponent_profile(f, h);
    let graduated = if h.is_full_rank() { detect_graduated(f, h)? } else { None };
    report.order = Some(OrderSummary {
        rank: h.rank(),
        full_rank: h.is_full_rank(),
        divisors: h.divisors().to_vec(),
        congruence_level: h.congruence_level(),
        exponent_profile: profile.clone(),
        graduated: graduated.is_some(),
        certificate: order.certificate.clone(),
    });
    clock.lap("profile");
    if !h.is_full_rank() {
        report.notes.push(format!(
            "order has rank {} < {}; the polytrope of its exponent profile is an inner approximation of the fixed set",
            h.rank(),
            h.matrix_size() * h.matrix_size()
        ));
    }
    if stages.fix {
        report.fix = Some(fix_stage(f, &order, &profile, graduated.is_some(), opts, report)?);
        clock.lap("fix");
    }
    if stages.residue {
        report.residue = residue_stage(f, &order, opts, report)?;
        clock.lap("residue");
    }
    Ok(())
}

fn summarize<F: ValuedField>(f: &F, order: &ComputedOrder<F>, s: &FixSet<F::Elem>, convex: bool) -> FixSummary {
    let radius = s.radius(f);
    FixSummary {
        count: s.len(),
        bounded: s.bounded,
        radius,
        convex,
        ball_bound: order.module.congruence_level().map(|l| radius <= l as u64),
        classes: s.classes.iter().map(|c| c.key().to_vec()).collect(),
        points: s.points.clone(),
        verified_invariant: s.classes.iter().all(|c| is_invariant(f, &order.module, c.representative())),
    }
}

fn fix_stage<F: ValuedField>(
    f: &F,
    order: &ComputedOrder<F>,
    profile: &ExponentMatrix,
    graduated: bool,
    opts: &Options,
    report: &mut Report,
) -> Result<FixReport> {
    let h = &order.module;
    let poly = if opts.method.polytrope() { Some(fix_polytrope(f, profile, opts.radius)?) } else { None };
    let bfs = if opts.method.bfs() && h.is_full_rank() {
        Some(fix_bfs(f, h, &BfsOptions { radius_cap: None, subspace_cap: opts.subspace_cap })?)
    } else {
        if opts.method.bfs() {
            report.notes.push("breadth-first search skipped: the order is not of full rank".into());
        }
        None
    };

    let poly_summary = poly.as_ref().map(|s| summarize(f, order, s, s.bounded && convexity_check(f, s)));
    let bfs_summary = bfs.as_ref().map(|s| summarize(f, order, s, convexity_check(f, s)));
    if let Some(p) = &poly_summary {
        if !p.verified_invariant {
            return Err(Error::InvariantViolation("a polytrope class is not fixed by the order".into()));
        }
    }
    if let Some(b) = &bfs_summary {
        if !b.convex || b.ball_bound == Some(false) || !b.verified_invariant || b.count == 0 {
            return Err(Error::InvariantViolation(format!(
                "breadth-first fixed set fails a structural check (convex {}, ball bound {:?}, invariant {})",
                b.convex, b.ball_bound, b.verified_invariant
            )));
        }
    }
    let agreement = match (&poly, &bfs) {
        (Some(p), Some(b)) => {
            let a =
                Agreement { equal: p.same_classes(b), polytrope_within_bfs: p.classes.iter().all(|c| b.contains(c)) };
            if !a.polytrope_within_bfs || (graduated && !a.equal) {
                return Err(Error::InvariantViolation(format!(
                    "polytrope ({} classes) and breadth-first search ({} classes) disagree",
                    p.len(),
                    b.len()
                )));
            }
            if !a.equal {
                report.notes.push(format!(
                    "order is not graduated: its profile polytrope has {} of the {} fixed classes",
                    p.len(),
                    b.len()
                ));
            }
            Some(a)
        }
        _ => None,
    };
    let middle_family = (!h.is_full_rank() && h.matrix_size() >= 3).then(|| middle_family(f, order));
    Ok(FixReport { polytrope: poly_summary, bfs: bfs_summary, agreement, middle_family })
}

/// Invariance of the lattices that scale the interior coordinates by `ϖ^m`.
fn middle_family<F: ValuedField>(f: &F, order: &ComputedOrder<F>) -> FamilyCheck {
    let n = order.module.matrix_size();
    let invariant = (0..=FAMILY_DEPTH)
        .map(|m| {
            let mut b = Matrix::identity(f, n);
            for i in 1..n - 1 {
                b.set(i, i, f.uniformizer_pow(m));
            }
            let l = Lattice::from_basis_matrix(f, &b).expect("diagonal basis");
            is_invariant(f, &order.module, LatticeClass::new(f, &l).representative())
        })
        .collect();
    FamilyCheck { depth: FAMILY_DEPTH, invariant }
}

fn residue_stage<F: ValuedField>(
    f: &F,
    order: &ComputedOrder<F>,
    opts: &Options,
    report: &mut Report,
) -> Result<Option<ResidueSummary>> {
    let h = &order.module;
    if !h.is_full_rank() {
        report.notes.push("residue irreducibility skipped: the order is not of full rank".into());
        return Ok(None);
    }
    let spans_end = spans_end_residue(f, h)?;
    let invariant = match invariant_subspaces(&ResidueRep::from_order(f, h)?, opts.subspace_cap) {
        Ok(subs) => Some(subs.len()),
        Err(Error::CapExceeded(msg)) => {
            report.notes.push(format!("invariant subspaces not enumerated: {msg}"));
            None
        }
        Err(e) => return Err(e),
    };
    if let Some(count) = invariant {
        if spans_end != (count == 0) {
            return Err(Error::InvariantViolation(format!(
                "reduction spans End = {spans_end} but {count} invariant subspaces were found"
            )));
        }
    }
    Ok(Some(ResidueSummary { spans_end, invariant_subspaces: invariant }))
}

/// Default polytrope radius, re-exported for flag defaults.
pub const DEFAULT_RADIUS: u32 = building::DEFAULT_POLYTROPE_RADIUS;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::case::FieldKind;

    fn case(n: usize, lambda: &str, kind: FieldKind, p: u32) -> Case {
        Case::new(n, lambda.parse().unwrap(), kind, p, Realization::Weyl).unwrap()
    }

    #[test]
    fn error_kinds_map_to_exit_codes() {
        assert_eq!(exit_code(&Error::CapExceeded(String::new())), 3);
        assert_eq!(exit_code(&Error::InvariantViolation(String::new())), 4);
        assert_eq!(exit_code(&Error::Parse(String::new())), 2);
        assert_eq!(ErrorInfo::from(&Error::Singular).kind, "invalid_input");
    }

    #[test]
    fn core_case_has_a_single_fixed_class() {
        let r = run(&case(3, "2,1", FieldKind::Padic, 3), &Options::default(), Stages::ALL);
        assert!(r.error.is_none());
        assert_eq!(r.dim, 8);
        assert!(!r.core);
        let fix = r.fix.unwrap();
        assert_eq!(fix.agreement.as_ref().unwrap().equal, r.order.as_ref().unwrap().graduated);
        assert_eq!(r.residue.unwrap().spans_end, fix.bfs.unwrap().count == 1);
    }

    #[test]
    fn stages_limit_the_report() {
        let r = run(&case(2, "2", FieldKind::Padic, 5), &Options::default(), Stages::ORDER);
        assert!(r.order.is_some() && r.fix.is_none() && r.residue.is_none());
        assert!(r.timings.is_none());
        let r =
            run(&case(2, "2", FieldKind::Padic, 5), &Options { timings: true, ..Options::default() }, Stages::RESIDUE);
        assert!(r.fix.is_none() && r.residue.is_some());
        assert!(r.timings.unwrap().contains_key("residue"));
    }

    #[test]
    fn caps_are_reported() {
        let r = run(&case(3, "3", FieldKind::Padic, 2), &Options { cap_n: 4, ..Options::default() }, Stages::ALL);
        assert_eq!(r.exit_code(), 3);
        assert!(r.order.is_none());
    }
}
