//! The parametric example family on `V_{≤P}`, `V_p = ⟨x_{2p-1}, x_{2p}⟩` for
//! `1 ≤ p ≤ P`, with `d = Σ x_{6i-5} d/d x_{6i-3}`: non-trivial polynomial
//! deformations of every order `n`, approximations obstructed at order `n`,
//! a non-trivial linear deformation, and a deformation with nonzero terms of
//! every order.
//!
//! Every map involved has degree -1, so `V_{≤P}` is closed under all of them
//! and each identity checked on the window is exact.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::cochain::{
    noncobounding_certificate, CochainComplex, CochainError, DgModule, SolveOutcome,
};
use crate::deform::{
    check_relations, deform_to_order, first_order_triviality, obstruction, DeformError,
    DeformationStatus, LiftStrategy, MapSeries,
};
use crate::dsl::Document;
use crate::field::{FieldSpec, Scalar};
use crate::gmap::{GradedMap, MapError};
use crate::graded::GradedModule;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("truncation degree must be at least 1, got {0}")]
    BadTruncation(i64),
    #[error("truncation degree {got} is too small, need at least {needed}")]
    TruncationTooSmall { needed: i64, got: i64 },
    #[error("variant {variant} is not defined for n = {n}")]
    InvalidOrder { variant: Variant, n: usize },
    #[error("unknown variant `{0}` (expected polynomial, obstructed, linear or infinite)")]
    UnknownVariant(String),
    #[error(transparent)]
    Deform(#[from] DeformError),
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("extension stalled: {0}")]
    StepperFailed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Polynomial,
    Obstructed,
    Linear,
    Infinite,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Polynomial => "polynomial",
            Variant::Obstructed => "obstructed",
            Variant::Linear => "linear",
            Variant::Infinite => "infinite",
        })
    }
}

impl FromStr for Variant {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "polynomial" => Ok(Variant::Polynomial),
            "obstructed" => Ok(Variant::Obstructed),
            "linear" => Ok(Variant::Linear),
            "infinite" => Ok(Variant::Infinite),
            other => Err(FamilyError::UnknownVariant(other.to_string())),
        }
    }
}

/// Smallest window `P` that holds every basis element a variant touches, with
/// one degree of headroom. The infinite variant extended to order `n` needs
/// `P ≥ 3n + 3`.
pub fn minimal_truncation(n: usize, variant: Variant) -> i64 {
    let n = n as i64;
    match variant {
        Variant::Polynomial | Variant::Obstructed => 3 * n + 1,
        Variant::Linear => 4,
        Variant::Infinite => 3 * n + 3,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilySpec {
    pub n: usize,
    pub variant: Variant,
    pub trunc_degree: i64,
    pub field: FieldSpec,
}

impl FamilySpec {
    /// `trunc_degree = None` picks [`minimal_truncation`].
    pub fn new(
        n: usize,
        variant: Variant,
        trunc_degree: Option<i64>,
        field: FieldSpec,
    ) -> Result<FamilySpec, FamilyError> {
        let valid = match variant {
            Variant::Polynomial => n >= 2,
            Variant::Obstructed | Variant::Infinite => n >= 1,
            Variant::Linear => n == 1,
        };
        if !valid {
            return Err(FamilyError::InvalidOrder { variant, n });
        }
        let needed = minimal_truncation(n, variant);
        let trunc_degree = trunc_degree.unwrap_or(needed);
        if trunc_degree < 1 {
            return Err(FamilyError::BadTruncation(trunc_degree));
        }
        if trunc_degree < needed {
            return Err(FamilyError::TruncationTooSmall {
                needed,
                got: trunc_degree,
            });
        }
        Ok(FamilySpec {
            n,
            variant,
            trunc_degree,
            field,
        })
    }
}

fn x(i: i64) -> String {
    format!("x{i}")
}

/// `Σ c x_i d/d x_j` over `(i, j, c)` on a module whose basis is named
/// `x1, x2, ...`. The degree is read off the first term (-1 when empty).
///
/// Panics if an index is outside the module or the terms are not homogeneous.
pub fn op(module: &Arc<GradedModule>, field: FieldSpec, terms: &[(i64, i64, i64)]) -> GradedMap {
    let names: Vec<(String, String, Scalar)> = terms
        .iter()
        .map(|&(i, j, c)| (x(j), x(i), Scalar::from_int(field, c)))
        .collect();
    let degree = match names.first() {
        Some((j, i, _)) => {
            module.degree_of(module.index_of(i).expect("index in window"))
                - module.degree_of(module.index_of(j).expect("index in window"))
        }
        None => -1,
    };
    GradedMap::from_named_entries(
        module,
        module,
        degree,
        names
            .iter()
            .map(|(j, i, c)| (j.as_str(), i.as_str(), c.clone())),
    )
    .expect("family terms are homogeneous")
}

/// `V_{≤P}` with basis `x_1..x_{2P}`, `|x_{2p-1}| = |x_{2p}| = p`, and
/// `d = Σ x_{6i-5} d/d x_{6i-3}` over the sources inside the window.
pub fn base_complex(p: i64, field: FieldSpec) -> Result<DgModule, FamilyError> {
    if p < 1 {
        return Err(FamilyError::BadTruncation(p));
    }
    let basis = (1..=p).flat_map(|q| [(x(2 * q - 1), q), (x(2 * q), q)]);
    let module = GradedModule::new("V", field, basis).expect("names are distinct");
    let terms: Vec<(i64, i64, i64)> = (1..)
        .take_while(|i| 6 * i - 3 <= 2 * p)
        .map(|i| (6 * i - 5, 6 * i - 3, 1))
        .collect();
    Ok(DgModule::new(op(&module, field, &terms))?)
}

/// `x_1 d/d x_4 + Σ_{i=1}^{last} x_{6i-2} d/d x_{6i}`.
fn infinitesimal(module: &Arc<GradedModule>, field: FieldSpec, last: i64) -> GradedMap {
    let mut terms = vec![(1, 4, 1)];
    terms.extend((1..=last).map(|i| (6 * i - 2, 6 * i, 1)));
    op(module, field, &terms)
}

/// `d_k = -x_{6k-9} d/d x_{6k-6} + [keep_tail] x_{6k-5} d/d x_{6k-2}`.
fn lift(module: &Arc<GradedModule>, field: FieldSpec, k: i64, keep_tail: bool) -> GradedMap {
    let mut terms = vec![(6 * k - 9, 6 * k - 6, -1)];
    if keep_tail {
        terms.push((6 * k - 5, 6 * k - 2, 1));
    }
    op(module, field, &terms)
}

/// A generated member of the family.
#[derive(Debug, Clone)]
pub struct Family {
    pub spec: FamilySpec,
    pub dg: DgModule,
    /// `d_1, d_2, ...`
    pub lifts: Vec<GradedMap>,
}

impl Family {
    pub fn generate(spec: FamilySpec) -> Result<Family, FamilyError> {
        let dg = base_complex(spec.trunc_degree, spec.field)?;
        let lifts = family_lifts_on(&dg, &spec)?;
        Ok(Family { spec, dg, lifts })
    }

    pub fn module(&self) -> &Arc<GradedModule> {
        self.dg.module()
    }

    /// Polynomial series `d + t d_1 + ... + t^n d_n` truncated at `order`.
    pub fn series(&self, order: usize) -> Result<MapSeries, FamilyError> {
        Ok(MapSeries::deformation(
            self.dg.differential(),
            &self.lifts,
            order,
        )?)
    }

    /// Module `V`, map `d`, maps `d1..dn` and the deformation block.
    pub fn to_document(&self) -> Document {
        let mut maps = vec![("d".to_string(), self.dg.differential().clone())];
        let mut deformation = Vec::new();
        for (k, m) in self.lifts.iter().enumerate() {
            let name = format!("d{}", k + 1);
            maps.push((name.clone(), m.clone()));
            deformation.push((k + 1, name));
        }
        Document::new(self.module().clone(), maps, Some(deformation))
            .expect("generated names are distinct")
    }
}

/// `d_1, ..., d_n` for a spec; for the infinite variant `d_1, ..., d_N` with
/// `N = spec.n` produced by the extension procedure.
pub fn family_lifts(spec: &FamilySpec) -> Result<Vec<GradedMap>, FamilyError> {
    Ok(Family::generate(*spec)?.lifts)
}

fn family_lifts_on(dg: &DgModule, spec: &FamilySpec) -> Result<Vec<GradedMap>, FamilyError> {
    let (v, f) = (dg.module(), spec.field);
    let n = spec.n as i64;
    Ok(match (spec.variant, n) {
        (Variant::Polynomial, _) => {
            let mut lifts = vec![infinitesimal(v, f, n - 1)];
            lifts.extend((2..=n).map(|k| lift(v, f, k, k != n)));
            lifts
        }
        (Variant::Obstructed, 1) => vec![op(v, f, &[(4, 6, 1), (6, 8, 1)])],
        (Variant::Obstructed, _) => {
            let mut lifts = vec![infinitesimal(v, f, n - 1)];
            lifts.extend((2..n).map(|k| lift(v, f, k, true)));
            lifts.push(op(
                v,
                f,
                &[(6 * n - 9, 6 * n - 6, -1), (6 * n - 6, 6 * n - 4, 1)],
            ));
            lifts
        }
        (Variant::Linear, _) => vec![op(v, f, &[(4, 6, 1)])],
        (Variant::Infinite, _) => {
            let report = infinite_extension(dg, f, spec.n)?;
            match report.status {
                DeformationStatus::Extended { order } if order == spec.n => report.lifts,
                _ => return Err(FamilyError::StepperFailed(report.to_string())),
            }
        }
    })
}

/// Every `x_{6i-2} d/d x_{6i}` with `x_{6i}` in the window.
fn infinite_infinitesimal(dg: &DgModule, field: FieldSpec) -> GradedMap {
    let top = dg.module().dim() as i64;
    infinitesimal(dg.module(), field, top / 6)
}

/// Runs the extension procedure on the infinite-variant infinitesimal, offering
/// `d_k` without the Kronecker cutoff as the candidate lift at each order.
fn infinite_extension(
    dg: &DgModule,
    field: FieldSpec,
    order: usize,
) -> Result<crate::deform::DeformationReport, FamilyError> {
    let v = dg.module();
    let candidates = (2..=order as i64)
        .map(|k| lift(v, field, k, true))
        .collect();
    Ok(deform_to_order(
        dg,
        &infinite_infinitesimal(dg, field),
        order,
        &LiftStrategy::Supplied(candidates),
    )?)
}

/// One checked statement in a verification report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub name: String,
    pub passed: bool,
    pub detail: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub title: String,
    pub clauses: Vec<Clause>,
}

impl VerificationReport {
    fn new(title: String) -> Self {
        VerificationReport {
            title,
            clauses: Vec::new(),
        }
    }

    fn push(&mut self, name: &str, passed: bool, detail: Vec<String>) {
        self.clauses.push(Clause {
            name: name.to_string(),
            passed,
            detail,
        });
    }

    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn clause(&self, name: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for c in &self.clauses {
            writeln!(
                f,
                "  [{}] {}",
                if c.passed { "pass" } else { "FAIL" },
                c.name
            )?;
            for line in &c.detail {
                writeln!(f, "      {line}")?;
            }
        }
        writeln!(f, "result: {}", if self.passed() { "pass" } else { "FAIL" })
    }
}

fn failing_orders(checks: &[bool]) -> Vec<usize> {
    (0..checks.len()).filter(|&k| !checks[k]).collect()
}

fn relations_detail(checks: &[bool]) -> String {
    let bad = failing_orders(checks);
    if bad.is_empty() {
        format!(
            "δ(d_{{k+1}}) = O_k holds for k = 0..{}",
            checks.len().saturating_sub(1)
        )
    } else {
        format!("fails at order(s) {bad:?}")
    }
}

/// Basis index `m` of a name `x<m>`.
fn x_index(name: &str) -> i64 {
    name[1..].parse().expect("family basis names are x<index>")
}

fn sources_even(m: &GradedMap) -> bool {
    m.entries()
        .all(|(j, _, _)| x_index(m.source().name_of(j)) % 2 == 0)
}

fn targets_odd(m: &GradedMap) -> bool {
    m.entries()
        .all(|(_, i, _)| x_index(m.target().name_of(i)) % 2 == 1)
}

/// Clause-by-clause check of a polynomial deformation of order `n`.
pub fn verify_polynomial(fam: &Family) -> Result<VerificationReport, FamilyError> {
    let n = fam.lifts.len();
    let spec = fam.spec;
    let dg = &fam.dg;
    let d = dg.differential();
    let v = fam.module();
    let cx = CochainComplex::endomorphisms(dg.clone());
    let mut rep = VerificationReport::new(format!(
        "polynomial deformation of order {n} (P = {}, field {})",
        spec.trunc_degree, spec.field
    ));

    let checks = check_relations(dg, &fam.lifts)?;
    let o_n = obstruction(dg, &fam.lifts)?;
    rep.push(
        "relations",
        checks.iter().all(|&b| b) && o_n.is_zero(),
        vec![relations_detail(&checks), format!("O_{n} = {o_n}")],
    );

    let series = fam.series(2 * n)?;
    let defect = series.square_defect()?;
    rep.push(
        "square-zero",
        defect.is_none(),
        vec![match defect {
            None => format!("d_t ∘ d_t vanishes through t^{}", 2 * n),
            Some(k) => format!("d_t ∘ d_t has a nonzero t^{k} coefficient"),
        }],
    );

    let top_nonzero = !fam.lifts[n - 1].is_zero();
    let tail_zero = series.nonzero_orders().iter().all(|&k| k <= n);
    rep.push(
        "polynomial order",
        top_nonzero && tail_zero,
        vec![format!("d_{n} = {}", fam.lifts[n - 1])],
    );

    let primary = obstruction(dg, &fam.lifts[..1])?;
    let expected = cx.cochain(2, op(v, spec.field, &[(1, 6, -1)]))?;
    let (primary_ok, primary_detail) = match cx.solve_coboundary(&primary)? {
        SolveOutcome::Solved(f) => (
            primary == expected && cx.coboundary(&f)? == primary,
            format!("O_1 = {primary}; δ({f}) = O_1"),
        ),
        SolveOutcome::Infeasible(w) => (false, format!("O_1 = {primary} does not cobound: {w}")),
    };
    rep.push(
        "primary obstruction cobounds",
        primary_ok,
        vec![primary_detail],
    );

    let sign = realized_sign(&cx, dg, &fam.lifts)?;
    rep.push(
        "realized sign",
        !sign.starts_with("inconsistent"),
        vec![sign],
    );

    let mut support_ok = d.entries().all(|(j, _, _)| x_index(v.name_of(j)) % 2 == 1);
    support_ok &= fam.lifts.iter().all(sources_even);
    support_ok &= fam.lifts[1..].iter().all(targets_odd);
    for (a, di) in fam.lifts.iter().enumerate().skip(1) {
        support_ok &= di.compose(d)?.is_zero();
        support_ok &= cx.coboundary(&cx.cochain(1, di.clone())?)?.into_map() == d.compose(di)?;
        support_ok &= fam.lifts[0].compose(di)?.is_zero();
        let o_k = obstruction(dg, &fam.lifts[..=a])?;
        support_ok &= o_k.into_map() == di.compose(&fam.lifts[0])?.neg();
        for dj in &fam.lifts[1..] {
            support_ok &= di.compose(dj)?.is_zero();
        }
    }
    rep.push(
        "support separation",
        support_ok,
        vec![
            "d_i supported on even indices, d_i (i ≥ 2) valued in odd indices, O_k = -d_k d_1"
                .into(),
        ],
    );

    let (nontrivial, detail) = match first_order_triviality(dg, &fam.lifts[0])? {
        SolveOutcome::Infeasible(w) => (
            w.involves_source("x6"),
            format!("δ(φ_1) = -d_1 has no solution; witness {w}"),
        ),
        SolveOutcome::Solved(phi) => (
            false,
            format!("δ({phi}) = -d_1, deformation is trivial to first order"),
        ),
    };
    rep.push("non-trivial", nontrivial, vec![detail]);
    Ok(rep)
}

/// Which sign makes `δ(±d_{k+1}) = O_k` hold for `2 ≤ k < n`.
fn realized_sign(
    cx: &CochainComplex,
    dg: &DgModule,
    lifts: &[GradedMap],
) -> Result<String, FamilyError> {
    let n = lifts.len();
    if n < 3 {
        return Ok("no orders with 2 ≤ k < n".into());
    }
    let (mut plus, mut minus) = (true, true);
    for k in 2..n {
        let o_k = obstruction(dg, &lifts[..k])?;
        let next = cx.cochain(1, lifts[k].clone())?;
        plus &= cx.coboundary(&next)? == o_k;
        minus &= cx.coboundary(&next.neg())? == o_k;
    }
    Ok(match (plus, minus) {
        (true, true) => "δ(d_{k+1}) = δ(-d_{k+1}) = O_k for 2 ≤ k < n (characteristic 2)".into(),
        (true, false) => "δ(+d_{k+1}) = O_k for 2 ≤ k < n".into(),
        (false, true) => "δ(-d_{k+1}) = O_k for 2 ≤ k < n".into(),
        (false, false) => "inconsistent: neither sign gives O_k".into(),
    })
}

/// Non-trivial polynomial deformation of order `n ≥ 2`.
pub fn verify_theorem3(
    n: usize,
    p: i64,
    field: FieldSpec,
) -> Result<VerificationReport, FamilyError> {
    let fam = Family::generate(FamilySpec::new(n, Variant::Polynomial, Some(p), field)?)?;
    verify_polynomial(&fam)
}

/// Clause-by-clause check of an approximation obstructed at order `n`.
pub fn verify_obstructed(fam: &Family) -> Result<VerificationReport, FamilyError> {
    let n = fam.lifts.len();
    let spec = fam.spec;
    let dg = &fam.dg;
    let v = fam.module();
    let cx = CochainComplex::endomorphisms(dg.clone());
    let mut rep = VerificationReport::new(format!(
        "approximation obstructed at order {n} (P = {}, field {})",
        spec.trunc_degree, spec.field
    ));

    let checks = check_relations(dg, &fam.lifts)?;
    rep.push(
        "relations",
        checks.iter().all(|&b| b),
        vec![relations_detail(&checks)],
    );

    let o_n = obstruction(dg, &fam.lifts)?;
    let expected = if n == 1 {
        op(v, spec.field, &[(4, 8, -1)])
    } else {
        let n = n as i64;
        op(v, spec.field, &[(6 * n - 8, 6 * n - 4, -1)])
    };
    rep.push(
        "obstruction",
        o_n.map() == &expected,
        vec![format!("O_{n} = {o_n}")],
    );

    let (infeasible, detail) = match cx.solve_coboundary(&o_n) {
        Ok(SolveOutcome::Infeasible(w)) => (true, format!("witness {w}")),
        Ok(SolveOutcome::Solved(f)) => (false, format!("δ({f}) = O_{n}")),
        Err(e) => (false, e.to_string()),
    };
    rep.push("no preimage on the window", infeasible, vec![detail]);

    let support = cx.noncobounding_certificate(&o_n);
    let certified = noncobounding_certificate(dg.differential(), &o_n);
    rep.push(
        "degree certificate",
        certified && support.is_some(),
        vec![match support {
            Some(p) => format!(
                "O_{n} is nonzero on V_{p} while d vanishes on V_{p} and V_{}; every δ(f) vanishes there",
                p - 1
            ),
            None => "no degree where every coboundary vanishes".into(),
        }],
    );

    let report = deform_to_order(
        dg,
        &fam.lifts[0],
        n + 1,
        &LiftStrategy::Supplied(fam.lifts[1..].to_vec()),
    )?;
    let stepper_ok =
        matches!(report.status, DeformationStatus::Obstructed { order, .. } if order == n);
    rep.push(
        "extension procedure",
        stepper_ok,
        vec![match &report.status {
            DeformationStatus::Obstructed { order, .. } => format!("obstructed at order {order}"),
            DeformationStatus::Extended { order } => format!("extended to order {order}"),
        }],
    );
    Ok(rep)
}

/// Approximation `d + t d_1 + ... + t^n d_n` obstructed at order `n ≥ 1`.
pub fn verify_theorem4(
    n: usize,
    p: i64,
    field: FieldSpec,
) -> Result<VerificationReport, FamilyError> {
    let fam = Family::generate(FamilySpec::new(n, Variant::Obstructed, Some(p), field)?)?;
    verify_obstructed(&fam)
}

/// The linear deformation `d + t x_4 d/d x_6`.
pub fn verify_linear(p: i64, field: FieldSpec) -> Result<VerificationReport, FamilyError> {
    let fam = Family::generate(FamilySpec::new(1, Variant::Linear, Some(p), field)?)?;
    let dg = &fam.dg;
    let d1 = &fam.lifts[0];
    let mut rep = VerificationReport::new(format!("linear deformation (P = {p}, field {field})"));
    let checks = check_relations(dg, &fam.lifts)?;
    rep.push(
        "relations",
        checks.iter().all(|&b| b),
        vec![relations_detail(&checks)],
    );
    let defect = fam.series(2)?.square_defect()?;
    rep.push(
        "square-zero",
        defect.is_none(),
        vec![format!("d_1 = {d1}; d_1 ∘ d_1 = {}", d1.compose(d1)?)],
    );
    let (nontrivial, detail) = match first_order_triviality(dg, d1)? {
        SolveOutcome::Infeasible(w) => (w.involves_source("x6"), format!("witness {w}")),
        SolveOutcome::Solved(phi) => (false, format!("δ({phi}) = -d_1")),
    };
    rep.push("non-trivial", nontrivial, vec![detail]);
    Ok(rep)
}

/// The deformation with nonzero terms of every order, extended through `order`.
pub fn verify_infinite(
    p: i64,
    order: usize,
    field: FieldSpec,
) -> Result<VerificationReport, FamilyError> {
    let spec = FamilySpec::new(order, Variant::Infinite, Some(p), field)?;
    let dg = base_complex(p, field)?;
    let mut rep = VerificationReport::new(format!(
        "deformation with nonzero terms of all orders, through order {order} (P = {p}, field {field})"
    ));

    let report = infinite_extension(&dg, spec.field, order)?;
    let extended = matches!(report.status, DeformationStatus::Extended { order: o } if o == order);
    let all_nonzero = report.lifts.iter().all(|m| !m.is_zero());
    let mut detail: Vec<String> = report
        .lifts
        .iter()
        .enumerate()
        .map(|(k, m)| format!("d_{} = {m} ({})", k + 1, report.origins[k]))
        .collect();
    detail.push(relations_detail(&report.relation_checks));
    rep.push(
        "extension",
        extended && all_nonzero && report.relation_checks.iter().all(|&b| b),
        detail,
    );

    let (nontrivial, detail) = match first_order_triviality(&dg, &report.lifts[0])? {
        SolveOutcome::Infeasible(w) => (w.involves_source("x6"), format!("witness {w}")),
        SolveOutcome::Solved(phi) => (false, format!("δ({phi}) = -d_1")),
    };
    rep.push("non-trivial", nontrivial, vec![detail]);

    let canonical = deform_to_order(&dg, &report.lifts[0], order, &LiftStrategy::Canonical)?;
    let first_zero = canonical.lifts.iter().position(GradedMap::is_zero);
    rep.push(
        "canonical lifts",
        canonical.is_extended(),
        vec![match first_zero {
            Some(k) => format!(
                "free-variables-zero lifts also extend, but d_{} = 0 from there on",
                k + 1
            ),
            None => "free-variables-zero lifts are nonzero at every order".into(),
        }],
    );
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    #[test]
    fn base_complex_examples() {
        let dg = base_complex(3, Q).unwrap();
        assert_eq!(dg.module().dim(), 6);
        assert_eq!(dg.differential().to_string(), "x1 d/d x3");
        let dg = base_complex(5, Q).unwrap();
        assert_eq!(dg.differential().to_string(), "x1 d/d x3 + x7 d/d x9");
        for p in 1..=30 {
            assert!(base_complex(p, Q)
                .unwrap()
                .differential()
                .is_differential()
                .unwrap());
        }
        assert_eq!(
            base_complex(0, Q).unwrap_err(),
            FamilyError::BadTruncation(0)
        );
    }

    #[test]
    fn lift_formulas() {
        let spec = FamilySpec::new(2, Variant::Polynomial, None, Q).unwrap();
        let lifts = family_lifts(&spec).unwrap();
        assert_eq!(lifts[0].to_string(), "x1 d/d x4 + x4 d/d x6");
        assert_eq!(lifts[1].to_string(), "-x3 d/d x6");
        let spec = FamilySpec::new(3, Variant::Polynomial, None, Q).unwrap();
        let lifts = family_lifts(&spec).unwrap();
        assert_eq!(lifts[1].to_string(), "-x3 d/d x6 + x7 d/d x10");
        let spec = FamilySpec::new(1, Variant::Obstructed, None, Q).unwrap();
        assert_eq!(
            family_lifts(&spec).unwrap()[0].to_string(),
            "x4 d/d x6 + x6 d/d x8"
        );
        let spec = FamilySpec::new(1, Variant::Linear, None, Q).unwrap();
        assert_eq!(family_lifts(&spec).unwrap()[0].to_string(), "x4 d/d x6");
    }

    #[test]
    fn spec_validation() {
        assert_eq!(
            FamilySpec::new(1, Variant::Polynomial, None, Q),
            Err(FamilyError::InvalidOrder {
                variant: Variant::Polynomial,
                n: 1
            })
        );
        assert_eq!(
            FamilySpec::new(3, Variant::Obstructed, Some(5), Q),
            Err(FamilyError::TruncationTooSmall { needed: 10, got: 5 })
        );
        assert_eq!(minimal_truncation(1, Variant::Obstructed), 4);
        assert_eq!(minimal_truncation(6, Variant::Infinite), 21);
        assert!("bogus".parse::<Variant>().is_err());
    }

    #[test]
    fn theorem3_small_cases() {
        for n in 2..=4 {
            let rep = verify_theorem3(n, minimal_truncation(n, Variant::Polynomial), Q).unwrap();
            assert!(rep.passed(), "{rep}");
        }
        let rep = verify_theorem3(2, 7, gf(2)).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn realized_sign_is_plus() {
        let rep = verify_theorem3(4, 13, Q).unwrap();
        assert_eq!(
            rep.clause("realized sign").unwrap().detail[0],
            "δ(+d_{k+1}) = O_k for 2 ≤ k < n"
        );
        let rep = verify_theorem3(4, 13, gf(2)).unwrap();
        assert!(rep.clause("realized sign").unwrap().detail[0].contains("characteristic 2"));
    }

    #[test]
    fn corrupted_lift_is_caught() {
        let spec = FamilySpec::new(3, Variant::Polynomial, None, Q).unwrap();
        let mut fam = Family::generate(spec).unwrap();
        fam.lifts[1] = fam.lifts[1].neg();
        let checks = check_relations(&fam.dg, &fam.lifts).unwrap();
        assert!(!checks[1]);
        let rep = verify_polynomial(&fam).unwrap();
        assert!(!rep.clause("relations").unwrap().passed);
        assert!(!rep.passed());
    }

    #[test]
    fn theorem4_small_cases() {
        for n in 1..=4 {
            let rep = verify_theorem4(n, minimal_truncation(n, Variant::Obstructed), Q).unwrap();
            assert!(rep.passed(), "{rep}");
        }
        let rep = verify_theorem4(3, 10, Q).unwrap();
        assert_eq!(
            rep.clause("obstruction").unwrap().detail[0],
            "O_3 = -x10 d/d x14"
        );
    }

    #[test]
    fn truncation_stability() {
        for n in [2, 3] {
            let p = minimal_truncation(n, Variant::Obstructed);
            let a = verify_theorem4(n, p, Q).unwrap();
            let b = verify_theorem4(n, p + 5, Q).unwrap();
            let strip = |r: &VerificationReport| -> Vec<(String, bool)> {
                r.clauses
                    .iter()
                    .map(|c| (c.name.clone(), c.passed))
                    .collect()
            };
            assert_eq!(strip(&a), strip(&b));
            assert_eq!(a.clause("obstruction"), b.clause("obstruction"));
            let lp = family_lifts(&FamilySpec::new(n, Variant::Polynomial, Some(p), Q).unwrap())
                .unwrap();
            let lq =
                family_lifts(&FamilySpec::new(n, Variant::Polynomial, Some(p + 5), Q).unwrap())
                    .unwrap();
            let render = |ls: &[GradedMap]| ls.iter().map(|m| m.to_string()).collect::<Vec<_>>();
            assert_eq!(render(&lp), render(&lq));
        }
    }

    #[test]
    fn canonical_lifts_vanish_from_order_three() {
        let dg = base_complex(12, Q).unwrap();
        let d1 = infinite_infinitesimal(&dg, Q);
        let rep = deform_to_order(&dg, &d1, 3, &LiftStrategy::Canonical).unwrap();
        assert!(rep.is_extended());
        assert_eq!(rep.lifts[1].to_string(), "-x3 d/d x6");
        assert!(rep.lifts[2].is_zero());
        let guided = infinite_extension(&dg, Q, 3).unwrap();
        assert!(guided.lifts.iter().all(|m| !m.is_zero()));
    }

    #[test]
    fn linear_and_infinite() {
        assert!(verify_linear(4, Q).unwrap().passed());
        let rep = verify_infinite(9, 2, Q).unwrap();
        assert!(rep.passed(), "{rep}");
        assert!(matches!(
            verify_infinite(8, 2, Q),
            Err(FamilyError::TruncationTooSmall { needed: 9, got: 8 })
        ));
    }
}
