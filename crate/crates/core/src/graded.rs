//! Finite graded modules with a named, ordered, degree-tagged basis.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("duplicate basis name `{0}`")]
    DuplicateBasisName(String),
    #[error("unknown basis name `{0}`")]
    UnknownBasisName(String),
    #[error("the zero vector has no degree")]
    ZeroVectorHasNoDegree,
    #[error("vectors live in different modules")]
    ModuleMismatch,
    #[error("scalar lives in {0}, module is over {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisElement {
    pub name: String,
    pub degree: i64,
}

/// A finite graded k-module. Declaration order of the basis is the canonical
/// order for every deterministic output.
#[derive(Debug, Clone)]
pub struct GradedModule {
    name: String,
    field: FieldSpec,
    basis: Vec<BasisElement>,
    index: HashMap<String, usize>,
}

impl PartialEq for GradedModule {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.field == other.field && self.basis == other.basis
    }
}

impl Eq for GradedModule {}

impl GradedModule {
    pub fn new(
        name: impl Into<String>,
        field: FieldSpec,
        basis: impl IntoIterator<Item = (String, i64)>,
    ) -> Result<Arc<GradedModule>, GradedError> {
        let mut elems = Vec::new();
        let mut index = HashMap::new();
        for (name, degree) in basis {
            if index.insert(name.clone(), elems.len()).is_some() {
                return Err(GradedError::DuplicateBasisName(name));
            }
            elems.push(BasisElement { name, degree });
        }
        Ok(Arc::new(GradedModule {
            name: name.into(),
            field,
            basis: elems,
            index,
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, name: &str) -> Result<usize, GradedError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| GradedError::UnknownBasisName(name.to_string()))
    }

    pub fn name_of(&self, idx: usize) -> &str {
        &self.basis[idx].name
    }

    pub fn degree_of(&self, idx: usize) -> i64 {
        self.basis[idx].degree
    }

    /// Indices of the basis elements of degree exactly `p`, in declaration order.
    pub fn component_indices(&self, p: i64) -> Vec<usize> {
        (0..self.basis.len())
            .filter(|&i| self.basis[i].degree == p)
            .collect()
    }

    /// Names spanning `M_p`; empty when `M_p = 0`.
    pub fn degree_component(&self, p: i64) -> Vec<&str> {
        self.component_indices(p)
            .into_iter()
            .map(|i| self.name_of(i))
            .collect()
    }

    /// Distinct degrees that occur, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        let mut ds: Vec<i64> = self.basis.iter().map(|b| b.degree).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }
}

/// True when both handles refer to the same module (pointer or structure).
pub fn same_module(a: &Arc<GradedModule>, b: &Arc<GradedModule>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorDegree {
    Homogeneous(i64),
    Mixed,
}

/// A vector in sparse normal form: no stored zero coefficients.
#[derive(Debug, Clone)]
pub struct Vector {
    module: Arc<GradedModule>,
    terms: BTreeMap<usize, Scalar>,
}

impl PartialEq for Vector {
    fn eq(&self, other: &Self) -> bool {
        same_module(&self.module, &other.module) && self.terms == other.terms
    }
}

impl Eq for Vector {}

impl Vector {
    pub fn zero(module: &Arc<GradedModule>) -> Vector {
        Vector {
            module: module.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(module: &Arc<GradedModule>, name: &str) -> Result<Vector, GradedError> {
        let idx = module.index_of(name)?;
        Ok(Vector::from_terms(module, [(idx, module.field().one())]))
    }

    /// Builds a vector from `(basis index, coefficient)` pairs, summing repeats.
    pub(crate) fn from_terms(
        module: &Arc<GradedModule>,
        terms: impl IntoIterator<Item = (usize, Scalar)>,
    ) -> Vector {
        let mut out = BTreeMap::new();
        for (i, c) in terms {
            accumulate(&mut out, i, c);
        }
        Vector {
            module: module.clone(),
            terms: out,
        }
    }

    pub(crate) fn from_normal_terms(
        module: &Arc<GradedModule>,
        terms: BTreeMap<usize, Scalar>,
    ) -> Vector {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        Vector {
            module: module.clone(),
            terms,
        }
    }

    pub fn module(&self) -> &Arc<GradedModule> {
        &self.module
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn terms(&self) -> &BTreeMap<usize, Scalar> {
        &self.terms
    }

    /// Coefficients keyed by basis name, in declaration order.
    pub fn coefficients(&self) -> Vec<(&str, &Scalar)> {
        self.terms
            .iter()
            .map(|(&i, c)| (self.module.name_of(i), c))
            .collect()
    }

    pub fn coefficient(&self, name: &str) -> Result<Scalar, GradedError> {
        let idx = self.module.index_of(name)?;
        Ok(self
            .terms
            .get(&idx)
            .cloned()
            .unwrap_or_else(|| self.module.field().zero()))
    }

    pub fn degree(&self) -> Result<VectorDegree, GradedError> {
        let mut degs = self.terms.keys().map(|&i| self.module.degree_of(i));
        let first = degs.next().ok_or(GradedError::ZeroVectorHasNoDegree)?;
        if degs.all(|d| d == first) {
            Ok(VectorDegree::Homogeneous(first))
        } else {
            Ok(VectorDegree::Mixed)
        }
    }

    pub fn add(&self, other: &Vector) -> Result<Vector, GradedError> {
        if !same_module(&self.module, &other.module) {
            return Err(GradedError::ModuleMismatch);
        }
        let mut terms = self.terms.clone();
        for (&i, c) in &other.terms {
            accumulate(&mut terms, i, c.clone());
        }
        Ok(Vector {
            module: self.module.clone(),
            terms,
        })
    }

    pub fn scale(&self, c: &Scalar) -> Result<Vector, GradedError> {
        if c.field() != self.module.field() {
            return Err(GradedError::FieldMismatch(c.field(), self.module.field()));
        }
        if c.is_zero() {
            return Ok(Vector::zero(&self.module));
        }
        let terms = self.terms.iter().map(|(&i, a)| (i, a * c)).collect();
        Ok(Vector {
            module: self.module.clone(),
            terms,
        })
    }
}

pub(crate) fn accumulate(terms: &mut BTreeMap<usize, Scalar>, i: usize, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&i) {
        Some(existing) => {
            let sum = &*existing + &c;
            if sum.is_zero() {
                terms.remove(&i);
            } else {
                *existing = sum;
            }
        }
        None => {
            terms.insert(i, c);
        }
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (&i, c)) in self.terms.iter().enumerate() {
            crate::gmap::write_term(f, k == 0, c, self.module.name_of(i))?;
        }
        Ok(())
    }
}
