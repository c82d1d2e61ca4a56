//! Truncated power series in `t` with graded-map coefficients.

use std::sync::Arc;

use super::DeformError;
use crate::gmap::GradedMap;
use crate::graded::{same_module, GradedModule};

/// `m_0 + t m_1 + ... + t^N m_N` with every `m_i` an endomorphism of the same
/// module and of one common map degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapSeries {
    module: Arc<GradedModule>,
    degree: i64,
    coeffs: Vec<GradedMap>,
}

impl MapSeries {
    pub fn zero(module: &Arc<GradedModule>, degree: i64, trunc_order: usize) -> MapSeries {
        MapSeries {
            module: module.clone(),
            degree,
            coeffs: vec![GradedMap::zero(module, module, degree); trunc_order + 1],
        }
    }

    pub fn identity(module: &Arc<GradedModule>, trunc_order: usize) -> MapSeries {
        let mut s = MapSeries::zero(module, 0, trunc_order);
        s.coeffs[0] = GradedMap::identity(module);
        s
    }

    /// Coefficients beyond the given list are zero; those beyond `trunc_order`
    /// are dropped.
    pub fn from_coeffs(
        module: &Arc<GradedModule>,
        degree: i64,
        coeffs: impl IntoIterator<Item = GradedMap>,
        trunc_order: usize,
    ) -> Result<MapSeries, DeformError> {
        let mut s = MapSeries::zero(module, degree, trunc_order);
        for (i, c) in coeffs.into_iter().enumerate() {
            if !c.is_endomorphism() || !same_module(c.source(), module) {
                return Err(DeformError::ModuleMismatch);
            }
            if c.degree() != degree {
                return Err(DeformError::DegreeMismatch {
                    order: i,
                    expected: degree,
                    found: c.degree(),
                });
            }
            if i <= trunc_order {
                s.coeffs[i] = c.rebind(module, module);
            }
        }
        Ok(s)
    }

    /// `d + t d_1 + ... + t^n d_n`, truncated at `trunc_order`.
    pub fn deformation(
        d: &GradedMap,
        lifts: &[GradedMap],
        trunc_order: usize,
    ) -> Result<MapSeries, DeformError> {
        let coeffs = std::iter::once(d.clone()).chain(lifts.iter().cloned());
        MapSeries::from_coeffs(d.source(), d.degree(), coeffs, trunc_order)
    }

    pub fn module(&self) -> &Arc<GradedModule> {
        &self.module
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn trunc_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &GradedMap {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[GradedMap] {
        &self.coeffs
    }

    /// Keeps orders `0..=n`.
    pub fn truncate(&self, n: usize) -> Result<MapSeries, DeformError> {
        if n > self.trunc_order() {
            return Err(DeformError::TruncationMismatch(n, self.trunc_order()));
        }
        Ok(MapSeries {
            coeffs: self.coeffs[..=n].to_vec(),
            ..self.clone()
        })
    }

    /// Orders `i >= 1` with a nonzero coefficient.
    pub fn nonzero_orders(&self) -> Vec<usize> {
        (1..self.coeffs.len())
            .filter(|&i| !self.coeffs[i].is_zero())
            .collect()
    }

    fn check_compatible(&self, other: &MapSeries) -> Result<(), DeformError> {
        if !same_module(&self.module, &other.module) {
            return Err(DeformError::ModuleMismatch);
        }
        if self.trunc_order() != other.trunc_order() {
            return Err(DeformError::TruncationMismatch(
                self.trunc_order(),
                other.trunc_order(),
            ));
        }
        Ok(())
    }

    /// Truncated Cauchy product: `(self ∘ other)_k = Σ_{i+j=k} self_i ∘ other_j`.
    pub fn mul(&self, other: &MapSeries) -> Result<MapSeries, DeformError> {
        self.check_compatible(other)?;
        let n = self.trunc_order();
        let degree = self.degree + other.degree;
        let mut coeffs = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = GradedMap::zero(&self.module, &self.module, degree);
            for i in 0..=k {
                let (a, b) = (&self.coeffs[i], &other.coeffs[k - i]);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc = acc.add(&a.compose(b)?)?;
            }
            coeffs.push(acc);
        }
        Ok(MapSeries {
            module: self.module.clone(),
            degree,
            coeffs,
        })
    }

    pub fn add(&self, other: &MapSeries) -> Result<MapSeries, DeformError> {
        self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MapSeries {
            coeffs,
            ..self.clone()
        })
    }

    fn check_unit(&self) -> Result<(), DeformError> {
        if self.degree != 0 || self.coeffs[0] != GradedMap::identity(&self.module) {
            return Err(DeformError::ConstantTermNotIdentity);
        }
        Ok(())
    }

    /// Two-sided inverse of a series with constant term `Id`, via
    /// `b_0 = Id`, `b_k = -Σ_{i=1}^k a_i b_{k-i}`.
    pub fn inverse(&self) -> Result<MapSeries, DeformError> {
        self.check_unit()?;
        let n = self.trunc_order();
        let mut coeffs = vec![GradedMap::identity(&self.module)];
        for k in 1..=n {
            let mut acc = GradedMap::zero(&self.module, &self.module, 0);
            for i in 1..=k {
                if self.coeffs[i].is_zero() || coeffs[k - i].is_zero() {
                    continue;
                }
                acc = acc.add(&self.coeffs[i].compose(&coeffs[k - i])?)?;
            }
            coeffs.push(acc.neg());
        }
        Ok(MapSeries {
            module: self.module.clone(),
            degree: 0,
            coeffs,
        })
    }

    /// First order at which `self ∘ self` has a nonzero coefficient.
    pub fn square_defect(&self) -> Result<Option<usize>, DeformError> {
        let sq = self.mul(self)?;
        Ok(sq.coeffs.iter().position(|c| !c.is_zero()))
    }
}

/// `φ_t ∘ d_t ∘ φ_t^{-1}`, truncated at the common order.
pub fn gauge_transform(d_t: &MapSeries, phi_t: &MapSeries) -> Result<MapSeries, DeformError> {
    let inv = phi_t.inverse()?;
    phi_t.mul(d_t)?.mul(&inv)
}
