//! Deformations `d_t = d + t d_1 + t^2 d_2 + ...` of a differential graded
//! module: the obstruction cochains `O_n = -Σ_{i=1}^n d_i d_{n-i+1}`, the
//! relations `δ(d_{n+1}) = O_n`, the order-by-order extension procedure, and
//! gauge trivialization.

mod gauge;
mod series;

use std::fmt;

use thiserror::Error;

use crate::cochain::{Cochain, CochainComplex, CochainError, DgModule, SolveOutcome, Witness};
use crate::gmap::{GradedMap, MapError};
use crate::graded::same_module;

pub use gauge::{first_order_triviality, trivialize, TrivializationReport, TrivializationStatus};
pub use series::{gauge_transform, MapSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeformError {
    #[error(transparent)]
    Cochain(#[from] CochainError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("the infinitesimal d_1 is not a cocycle: δ(d_1) = {0}")]
    InfinitesimalNotCocycle(String),
    #[error("relation δ(d_{}) = O_{order} fails", order + 1)]
    RelationsViolated { order: usize },
    #[error("coefficient of order {order} has map degree {found}, expected {expected}")]
    DegreeMismatch {
        order: usize,
        expected: i64,
        found: i64,
    },
    #[error("coefficient is not an endomorphism of the deformed module")]
    ModuleMismatch,
    #[error("truncation orders differ ({0} vs {1})")]
    TruncationMismatch(usize, usize),
    #[error("constant term of the series is not the identity")]
    ConstantTermNotIdentity,
    #[error("d_t ∘ d_t has a nonzero coefficient at order {order}")]
    NotSquareZero { order: usize },
}

fn complex(dg: &DgModule) -> CochainComplex {
    CochainComplex::endomorphisms(dg.clone())
}

/// Checks that each lift is a 1-cochain (degree -1 endomorphism) of `dg`.
fn as_cochains(cx: &CochainComplex, lifts: &[GradedMap]) -> Result<Vec<Cochain>, DeformError> {
    lifts
        .iter()
        .enumerate()
        .map(|(k, m)| {
            if !same_module(m.source(), cx.source().module()) || !m.is_endomorphism() {
                return Err(DeformError::ModuleMismatch);
            }
            if m.degree() != -1 {
                return Err(DeformError::DegreeMismatch {
                    order: k + 1,
                    expected: -1,
                    found: m.degree(),
                });
            }
            Ok(cx.cochain(1, m.clone())?)
        })
        .collect()
}

fn obstruction_of(cx: &CochainComplex, lifts: &[Cochain]) -> Result<Cochain, DeformError> {
    let n = lifts.len();
    let mut acc = cx.zero(2).into_map();
    for i in 1..=n {
        let (a, b) = (lifts[i - 1].map(), lifts[n - i].map());
        if a.is_zero() || b.is_zero() {
            continue;
        }
        acc = acc.add(&a.compose(b)?)?;
    }
    Ok(cx.cochain(2, acc.neg())?)
}

/// `O_n = -Σ_{i=1}^n d_i ∘ d_{n-i+1}` for `lifts = [d_1, ..., d_n]`; `O_0 = 0`.
pub fn obstruction(dg: &DgModule, lifts: &[GradedMap]) -> Result<Cochain, DeformError> {
    let cx = complex(dg);
    let lifts = as_cochains(&cx, lifts)?;
    obstruction_of(&cx, &lifts)
}

fn relations_of(cx: &CochainComplex, lifts: &[Cochain]) -> Result<Vec<bool>, DeformError> {
    (0..lifts.len())
        .map(|k| {
            let lhs = cx.coboundary(&lifts[k])?;
            Ok(lhs == obstruction_of(cx, &lifts[..k])?)
        })
        .collect()
}

/// Entry `k` reports whether `δ(d_{k+1}) = O_k`, for `k = 0..n-1`.
pub fn check_relations(dg: &DgModule, lifts: &[GradedMap]) -> Result<Vec<bool>, DeformError> {
    let cx = complex(dg);
    let lifts = as_cochains(&cx, lifts)?;
    relations_of(&cx, &lifts)
}

/// Why `O_n` has no preimage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionCertificate {
    /// Functional from the exact solve on the finite module.
    pub witness: Witness,
    /// Source degree where the degree-support argument applies, if any; such a
    /// certificate holds on every truncation.
    pub support_degree: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    NextLift(GradedMap),
    Obstructed {
        obstruction: Cochain,
        certificate: ObstructionCertificate,
    },
}

fn try_lift(cx: &CochainComplex, obstruction: Cochain) -> Result<Step, DeformError> {
    match cx.solve_coboundary(&obstruction)? {
        SolveOutcome::Solved(f) => Ok(Step::NextLift(f.into_map())),
        SolveOutcome::Infeasible(witness) => {
            let support_degree = cx.noncobounding_certificate(&obstruction);
            Ok(Step::Obstructed {
                obstruction,
                certificate: ObstructionCertificate {
                    witness,
                    support_degree,
                },
            })
        }
    }
}

/// Given `d_1..d_n` satisfying the relations through order `n-1`, either
/// produces `d_{n+1}` with `δ(d_{n+1}) = O_n` or reports that `O_n` does not
/// cobound.
pub fn extend_step(dg: &DgModule, lifts: &[GradedMap]) -> Result<Step, DeformError> {
    let cx = complex(dg);
    let lifts = as_cochains(&cx, lifts)?;
    if let Some(order) = relations_of(&cx, &lifts)?.iter().position(|ok| !ok) {
        return Err(DeformError::RelationsViolated { order });
    }
    try_lift(&cx, obstruction_of(&cx, &lifts)?)
}

/// How lifts `d_2, d_3, ...` are chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftStrategy {
    /// RREF particular solution with free variables zero.
    Canonical,
    /// Candidates for `d_2, d_3, ...` in order. Each one is validated against
    /// `δ(d_{k+1}) = O_k`; once the list runs out the canonical lift is used.
    Supplied(Vec<GradedMap>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftOrigin {
    Given,
    Supplied,
    Solved,
}

impl fmt::Display for LiftOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LiftOrigin::Given => "given",
            LiftOrigin::Supplied => "supplied",
            LiftOrigin::Solved => "solved",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeformationStatus {
    /// `d_1..d_order` found with every relation through `O_{order-1}`.
    Extended { order: usize },
    /// `O_order` does not cobound for the chosen lifts.
    Obstructed {
        order: usize,
        obstruction: Cochain,
        certificate: ObstructionCertificate,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformationReport {
    pub status: DeformationStatus,
    pub lifts: Vec<GradedMap>,
    pub origins: Vec<LiftOrigin>,
    pub relation_checks: Vec<bool>,
}

impl DeformationReport {
    pub fn is_extended(&self) -> bool {
        matches!(self.status, DeformationStatus::Extended { .. })
    }
}

/// Extends `d + t d_1` order by order up to `order`, stopping at the first
/// obstruction. The obstructed status is relative to the lifts chosen.
pub fn deform_to_order(
    dg: &DgModule,
    d1: &GradedMap,
    order: usize,
    strategy: &LiftStrategy,
) -> Result<DeformationReport, DeformError> {
    let cx = complex(dg);
    let first = as_cochains(&cx, std::slice::from_ref(d1))?.remove(0);
    let delta = cx.coboundary(&first)?;
    if !delta.is_zero() {
        return Err(DeformError::InfinitesimalNotCocycle(delta.to_string()));
    }
    let supplied = match strategy {
        LiftStrategy::Canonical => Vec::new(),
        LiftStrategy::Supplied(list) => as_cochains(&cx, list)?,
    };

    let mut lifts = vec![first];
    let mut origins = vec![LiftOrigin::Given];
    let mut status = DeformationStatus::Extended { order: 1 };
    while lifts.len() < order {
        let n = lifts.len();
        let o_n = obstruction_of(&cx, &lifts)?;
        let candidate = supplied.get(n - 1);
        if let Some(c) = candidate {
            if cx.coboundary(c)? == o_n {
                lifts.push(c.clone());
                origins.push(LiftOrigin::Supplied);
                status = DeformationStatus::Extended { order: n + 1 };
                continue;
            }
        }
        match try_lift(&cx, o_n)? {
            // O_n cobounds, so a rejected candidate is simply wrong.
            Step::NextLift(_) if candidate.is_some() => {
                return Err(DeformError::RelationsViolated { order: n });
            }
            Step::NextLift(f) => {
                lifts.push(cx.cochain(1, f)?);
                origins.push(LiftOrigin::Solved);
                status = DeformationStatus::Extended { order: n + 1 };
            }
            Step::Obstructed {
                obstruction,
                certificate,
            } => {
                status = DeformationStatus::Obstructed {
                    order: n,
                    obstruction,
                    certificate,
                };
                break;
            }
        }
    }

    let relation_checks = relations_of(&cx, &lifts)?;
    Ok(DeformationReport {
        status,
        lifts: lifts.into_iter().map(Cochain::into_map).collect(),
        origins,
        relation_checks,
    })
}

impl fmt::Display for DeformationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (lift, origin)) in self.lifts.iter().zip(&self.origins).enumerate() {
            writeln!(f, "d_{} = {lift} ({origin})", k + 1)?;
        }
        for (k, ok) in self.relation_checks.iter().enumerate() {
            let verdict = if *ok { "ok" } else { "FAILED" };
            writeln!(f, "relation {k}: δ(d_{}) = O_{k} {verdict}", k + 1)?;
        }
        match &self.status {
            DeformationStatus::Extended { order } => writeln!(f, "extended to order {order}"),
            DeformationStatus::Obstructed {
                order,
                obstruction,
                certificate,
            } => {
                writeln!(f, "obstructed at order {order}")?;
                writeln!(f, "O_{order} = {obstruction}")?;
                writeln!(f, "witness: {}", certificate.witness)?;
                match certificate.support_degree {
                    Some(p) => writeln!(
                        f,
                        "degree certificate: no coboundary reaches the block at source degree {p}"
                    ),
                    None => writeln!(f, "degree certificate: none"),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{base_complex, op};
    use crate::field::FieldSpec;

    const Q: FieldSpec = FieldSpec::Rationals;

    #[test]
    fn empty_obstruction_is_zero() {
        let dg = base_complex(6, Q).unwrap();
        let o = obstruction(&dg, &[]).unwrap();
        assert!(o.is_zero());
        assert_eq!(o.degree(), 2);
    }

    #[test]
    fn obstruction_of_zero_lifts() {
        let dg = base_complex(6, Q).unwrap();
        let v = dg.module();
        let zeros = vec![GradedMap::zero(v, v, -1); 3];
        assert!(obstruction(&dg, &zeros).unwrap().is_zero());
        assert_eq!(check_relations(&dg, &zeros).unwrap(), vec![true; 3]);
    }

    #[test]
    fn wrong_degree_rejected() {
        let dg = base_complex(4, Q).unwrap();
        let v = dg.module();
        let bad = op(v, Q, &[(1, 2, 1)]);
        assert!(matches!(
            obstruction(&dg, &[bad]),
            Err(DeformError::DegreeMismatch { order: 1, .. })
        ));
    }

    #[test]
    fn non_cocycle_infinitesimal() {
        let dg = base_complex(4, Q).unwrap();
        let v = dg.module();
        let d1 = op(v, Q, &[(3, 6, 1)]);
        assert_eq!(
            check_relations(&dg, std::slice::from_ref(&d1)).unwrap(),
            vec![false]
        );
        assert!(matches!(
            deform_to_order(&dg, &d1, 3, &LiftStrategy::Canonical),
            Err(DeformError::InfinitesimalNotCocycle(_))
        ));
        assert_eq!(
            extend_step(&dg, &[d1]),
            Err(DeformError::RelationsViolated { order: 0 })
        );
    }

    #[test]
    fn zero_infinitesimal_lifts_to_zero() {
        let dg = base_complex(4, Q).unwrap();
        let v = dg.module();
        let zero = GradedMap::zero(v, v, -1);
        assert_eq!(
            extend_step(&dg, std::slice::from_ref(&zero)).unwrap(),
            Step::NextLift(zero)
        );
    }

    #[test]
    fn rejected_supplied_lift() {
        let dg = base_complex(7, Q).unwrap();
        let v = dg.module();
        let d1 = op(v, Q, &[(1, 4, 1), (4, 6, 1)]);
        // O_1 = -x1 d/d x6; the correct lift is -x3 d/d x6, flip its sign.
        let wrong = op(v, Q, &[(3, 6, 1)]);
        assert_eq!(
            deform_to_order(&dg, &d1, 3, &LiftStrategy::Supplied(vec![wrong])),
            Err(DeformError::RelationsViolated { order: 1 })
        );
    }
}
