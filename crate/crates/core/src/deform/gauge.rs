//! Trivializing a deformation by successive gauge transformations
//! `Id - t^r φ_r`, each chosen so that `δ(φ_r)` kills the lowest surviving
//! coefficient.

use std::fmt;

use super::series::{gauge_transform, MapSeries};
use super::{complex, DeformError};
use crate::cochain::{Cochain, DgModule, SolveOutcome, Witness};
use crate::gmap::GradedMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrivializationStatus {
    /// All coefficients of orders `1..=order` were killed.
    Trivialized { order: usize },
    /// After gauging away orders `< order`, `δ(φ) = -d_order` had no solution.
    Stuck {
        order: usize,
        unsolved: Cochain,
        witness: Witness,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivializationReport {
    pub status: TrivializationStatus,
    /// `φ_1, φ_2, ...` for the stages that succeeded.
    pub stages: Vec<GradedMap>,
    /// Composite `(Id - t^r φ_r) ∘ ... ∘ (Id - t φ_1)`.
    pub gauge: MapSeries,
    /// `gauge ∘ d_t ∘ gauge^{-1}`.
    pub transformed: MapSeries,
    /// Only a failure at order 1 rules out every equivalence to `d`: any
    /// equivalence would give `δ(φ_1) = -d_1`.
    pub definitive_nontriviality: bool,
}

impl TrivializationReport {
    pub fn is_trivialized(&self) -> bool {
        matches!(self.status, TrivializationStatus::Trivialized { .. })
    }
}

/// Runs the stagewise gauge procedure on `d_t` through order `order`.
pub fn trivialize(d_t: &MapSeries, order: usize) -> Result<TrivializationReport, DeformError> {
    let d_t = d_t.truncate(order)?;
    if let Some(k) = d_t.square_defect()? {
        return Err(DeformError::NotSquareZero { order: k });
    }
    let dg = DgModule::new(d_t.coeff(0).clone())?;
    let cx = complex(&dg);
    let module = d_t.module().clone();

    let mut current = d_t.clone();
    let mut gauge = MapSeries::identity(&module, order);
    let mut stages = Vec::new();
    for r in 1..=order {
        let lowest = cx.cochain(1, current.coeff(r).clone())?;
        match cx.solve_coboundary(&lowest.neg())? {
            SolveOutcome::Solved(phi) => {
                let phi = phi.into_map();
                let mut coeffs = vec![GradedMap::zero(&module, &module, 0); order + 1];
                coeffs[0] = GradedMap::identity(&module);
                coeffs[r] = phi.neg();
                let step = MapSeries::from_coeffs(&module, 0, coeffs, order)?;
                current = gauge_transform(&current, &step)?;
                gauge = step.mul(&gauge)?;
                stages.push(phi);
            }
            SolveOutcome::Infeasible(witness) => {
                return Ok(TrivializationReport {
                    status: TrivializationStatus::Stuck {
                        order: r,
                        unsolved: lowest,
                        witness,
                    },
                    stages,
                    gauge,
                    transformed: current,
                    definitive_nontriviality: r == 1,
                });
            }
        }
    }
    Ok(TrivializationReport {
        status: TrivializationStatus::Trivialized { order },
        stages,
        gauge,
        transformed: current,
        definitive_nontriviality: false,
    })
}

/// Solves `δ(φ_1) = -d_1` in `C^0`. Infeasibility proves `d + t d_1 + ...` is
/// not equivalent to the undeformed differential.
pub fn first_order_triviality(dg: &DgModule, d1: &GradedMap) -> Result<SolveOutcome, DeformError> {
    let cx = complex(dg);
    let d1 = cx.cochain(1, d1.clone())?;
    let delta = cx.coboundary(&d1)?;
    if !delta.is_zero() {
        return Err(DeformError::InfinitesimalNotCocycle(delta.to_string()));
    }
    Ok(cx.solve_coboundary(&d1.neg())?)
}

impl fmt::Display for TrivializationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, phi) in self.stages.iter().enumerate() {
            writeln!(f, "phi_{} = {phi}", k + 1)?;
        }
        match &self.status {
            TrivializationStatus::Trivialized { order } => {
                writeln!(f, "trivialized through order {order}")
            }
            TrivializationStatus::Stuck {
                order,
                unsolved,
                witness,
            } => {
                writeln!(f, "stuck at order {order}")?;
                writeln!(f, "unsolved: d_{order} = {unsolved}")?;
                writeln!(f, "witness: {witness}")?;
                let verdict = if self.definitive_nontriviality {
                    "yes"
                } else {
                    "no (failure is relative to the gauges chosen)"
                };
                writeln!(f, "definitive non-triviality: {verdict}")
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
    fn trivial_deformation_needs_no_gauge() {
        let dg = base_complex(5, Q).unwrap();
        let d_t = MapSeries::deformation(dg.differential(), &[], 4).unwrap();
        let rep = trivialize(&d_t, 4).unwrap();
        assert!(rep.is_trivialized());
        assert!(rep.stages.iter().all(GradedMap::is_zero));
        assert_eq!(rep.transformed, d_t);
    }

    #[test]
    fn one_stage_kills_order_one() {
        // d_1 = δ(ψ) with ψ = x3 d/d x4, a coboundary.
        let dg = base_complex(5, Q).unwrap();
        let v = dg.module();
        let d = dg.differential();
        let psi = op(v, Q, &[(3, 4, 1)]);
        let d1 = d
            .compose(&psi)
            .unwrap()
            .sub(&psi.compose(d).unwrap())
            .unwrap();
        assert!(!d1.is_zero());
        let d_t = MapSeries::deformation(d, std::slice::from_ref(&d1), 3).unwrap();
        assert!(d1.compose(&d1).unwrap().is_zero());
        let rep = trivialize(&d_t, 3).unwrap();
        assert!(rep.is_trivialized(), "{rep}");
        assert!(rep.transformed.nonzero_orders().is_empty());
        assert_eq!(gauge_transform(&d_t, &rep.gauge).unwrap(), rep.transformed);
    }

    #[test]
    fn rejects_non_square_zero() {
        let dg = base_complex(5, Q).unwrap();
        let v = dg.module();
        let d1 = op(v, Q, &[(4, 6, 1), (6, 8, 1)]);
        let d_t = MapSeries::deformation(dg.differential(), &[d1], 2).unwrap();
        assert_eq!(
            trivialize(&d_t, 2),
            Err(DeformError::NotSquareZero { order: 2 })
        );
    }

    #[test]
    fn linear_variant_is_stuck_at_order_one() {
        let dg = base_complex(4, Q).unwrap();
        let v = dg.module();
        let d1 = op(v, Q, &[(4, 6, 1)]);
        let d_t = MapSeries::deformation(dg.differential(), std::slice::from_ref(&d1), 2).unwrap();
        let rep = trivialize(&d_t, 2).unwrap();
        assert!(rep.definitive_nontriviality);
        match rep.status {
            TrivializationStatus::Stuck { order, witness, .. } => {
                assert_eq!(order, 1);
                assert!(witness.involves_source("x6"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            first_order_triviality(&dg, &d1).unwrap(),
            SolveOutcome::Infeasible(_)
        ));
    }
}
