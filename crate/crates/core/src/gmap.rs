//! Degree-homogeneous linear maps, stored column-wise in the elementary
//! operators `x_i d/d x_j` (the map sending `x_j` to `x_i`, everything else to 0).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldSpec, Scalar};
use crate::graded::{accumulate, same_module, GradedError, GradedModule, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error("elementary operator needs a nonzero coefficient")]
    ZeroCoefficient,
    #[error("cannot compose: source of the outer map is not the target of the inner map")]
    CompositionMismatch,
    #[error("map degrees differ ({0} vs {1})")]
    DegreeMismatch(i64, i64),
    #[error("maps have different source or target modules")]
    ModuleMismatch,
    #[error("source and target are over different fields")]
    FieldMismatch,
    #[error("entry {to} d/d {from} breaks homogeneity of degree {degree}")]
    NotHomogeneous {
        from: String,
        to: String,
        degree: i64,
    },
    #[error("map is not an endomorphism")]
    NotEndomorphism,
    #[error("a differential must have degree +1 or -1, found {0}")]
    BadDegree(i64),
}

type Column = BTreeMap<usize, Scalar>;

/// A degree-homogeneous k-linear map `source -> target`.
///
/// Columns are keyed by source basis index and hold the image of that basis
/// element as target-index coefficients. No zero columns or zero entries are
/// stored, so structural equality is equality of maps.
#[derive(Debug, Clone)]
pub struct GradedMap {
    source: Arc<GradedModule>,
    target: Arc<GradedModule>,
    degree: i64,
    columns: BTreeMap<usize, Column>,
}

impl PartialEq for GradedMap {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && same_module(&self.source, &other.source)
            && same_module(&self.target, &other.target)
            && self.columns == other.columns
    }
}

impl Eq for GradedMap {}

impl GradedMap {
    pub fn zero(source: &Arc<GradedModule>, target: &Arc<GradedModule>, degree: i64) -> GradedMap {
        GradedMap {
            source: source.clone(),
            target: target.clone(),
            degree,
            columns: BTreeMap::new(),
        }
    }

    pub fn identity(module: &Arc<GradedModule>) -> GradedMap {
        let one = module.field().one();
        let columns = (0..module.dim())
            .map(|i| (i, BTreeMap::from([(i, one.clone())])))
            .collect();
        GradedMap {
            source: module.clone(),
            target: module.clone(),
            degree: 0,
            columns,
        }
    }

    /// Builds a map from `(source index, target index, coefficient)` triples,
    /// summing repeats and checking homogeneity against `degree`.
    pub(crate) fn from_entries(
        source: &Arc<GradedModule>,
        target: &Arc<GradedModule>,
        degree: i64,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<GradedMap, MapError> {
        if source.field() != target.field() {
            return Err(MapError::FieldMismatch);
        }
        let mut columns: BTreeMap<usize, Column> = BTreeMap::new();
        for (j, i, c) in entries {
            if c.is_zero() {
                continue;
            }
            if target.degree_of(i) != source.degree_of(j) + degree {
                return Err(MapError::NotHomogeneous {
                    from: source.name_of(j).to_string(),
                    to: target.name_of(i).to_string(),
                    degree,
                });
            }
            accumulate(columns.entry(j).or_default(), i, c);
        }
        columns.retain(|_, col| !col.is_empty());
        Ok(GradedMap {
            source: source.clone(),
            target: target.clone(),
            degree,
            columns,
        })
    }

    /// Same as [`GradedMap::from_entries`] with basis names.
    pub fn from_named_entries<'a>(
        source: &Arc<GradedModule>,
        target: &Arc<GradedModule>,
        degree: i64,
        entries: impl IntoIterator<Item = (&'a str, &'a str, Scalar)>,
    ) -> Result<GradedMap, MapError> {
        let mut resolved = Vec::new();
        for (j, i, c) in entries {
            resolved.push((source.index_of(j)?, target.index_of(i)?, c));
        }
        GradedMap::from_entries(source, target, degree, resolved)
    }

    /// `c * x_i d/d x_j` between two modules: `x_j -> c x_i`, all other basis
    /// elements to zero. Its degree is `|x_i| - |x_j|`.
    pub fn elementary_between(
        source: &Arc<GradedModule>,
        target: &Arc<GradedModule>,
        i: &str,
        j: &str,
        c: Scalar,
    ) -> Result<GradedMap, MapError> {
        let ti = target.index_of(i)?;
        let sj = source.index_of(j)?;
        if c.is_zero() {
            return Err(MapError::ZeroCoefficient);
        }
        let degree = target.degree_of(ti) - source.degree_of(sj);
        GradedMap::from_entries(source, target, degree, [(sj, ti, c)])
    }

    /// Endomorphism version of [`GradedMap::elementary_between`].
    pub fn elementary(
        module: &Arc<GradedModule>,
        i: &str,
        j: &str,
        c: Scalar,
    ) -> Result<GradedMap, MapError> {
        GradedMap::elementary_between(module, module, i, j, c)
    }

    pub fn source(&self) -> &Arc<GradedModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedModule> {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn field(&self) -> FieldSpec {
        self.source.field()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn is_endomorphism(&self) -> bool {
        same_module(&self.source, &self.target)
    }

    /// Number of nonzero `x_i d/d x_j` terms.
    pub fn nnz(&self) -> usize {
        self.columns.values().map(|c| c.len()).sum()
    }

    /// `(source index, target index, coefficient)` in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.columns
            .iter()
            .flat_map(|(&j, col)| col.iter().map(move |(&i, c)| (j, i, c)))
    }

    /// Coefficient of `x_i d/d x_j`.
    pub fn entry(&self, i: &str, j: &str) -> Result<Scalar, MapError> {
        let ti = self.target.index_of(i)?;
        let sj = self.source.index_of(j)?;
        Ok(self.entry_at(sj, ti))
    }

    pub(crate) fn entry_at(&self, j: usize, i: usize) -> Scalar {
        self.columns
            .get(&j)
            .and_then(|col| col.get(&i))
            .cloned()
            .unwrap_or_else(|| self.field().zero())
    }

    /// Image of the basis element `x_j`.
    pub fn column(&self, j: &str) -> Result<Vector, MapError> {
        let sj = self.source.index_of(j)?;
        Ok(self.column_at(sj))
    }

    pub(crate) fn column_at(&self, j: usize) -> Vector {
        match self.columns.get(&j) {
            Some(col) => Vector::from_normal_terms(&self.target, col.clone()),
            None => Vector::zero(&self.target),
        }
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector, MapError> {
        if !same_module(v.module(), &self.source) {
            return Err(MapError::ModuleMismatch);
        }
        let mut out = BTreeMap::new();
        for (&j, a) in v.terms() {
            if let Some(col) = self.columns.get(&j) {
                for (&i, c) in col {
                    accumulate(&mut out, i, a * c);
                }
            }
        }
        Ok(Vector::from_normal_terms(&self.target, out))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GradedMap) -> Result<GradedMap, MapError> {
        if !same_module(&self.source, &inner.target) {
            return Err(MapError::CompositionMismatch);
        }
        let mut columns = BTreeMap::new();
        for (&j, col) in &inner.columns {
            let mut out = BTreeMap::new();
            for (&k, a) in col {
                if let Some(outer) = self.columns.get(&k) {
                    for (&i, c) in outer {
                        accumulate(&mut out, i, c * a);
                    }
                }
            }
            if !out.is_empty() {
                columns.insert(j, out);
            }
        }
        Ok(GradedMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            degree: self.degree + inner.degree,
            columns,
        })
    }

    fn check_same_shape(&self, other: &GradedMap) -> Result<(), MapError> {
        if !same_module(&self.source, &other.source) || !same_module(&self.target, &other.target) {
            return Err(MapError::ModuleMismatch);
        }
        if self.degree != other.degree {
            return Err(MapError::DegreeMismatch(self.degree, other.degree));
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap, MapError> {
        self.check_same_shape(other)?;
        let mut columns = self.columns.clone();
        for (&j, col) in &other.columns {
            let target = columns.entry(j).or_default();
            for (&i, c) in col {
                accumulate(target, i, c.clone());
            }
            if target.is_empty() {
                columns.remove(&j);
            }
        }
        Ok(GradedMap {
            columns,
            ..self.clone_shape()
        })
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap, MapError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GradedMap {
        let columns = self
            .columns
            .iter()
            .map(|(&j, col)| (j, col.iter().map(|(&i, c)| (i, -c)).collect()))
            .collect();
        GradedMap {
            columns,
            ..self.clone_shape()
        }
    }

    pub fn scale(&self, c: &Scalar) -> Result<GradedMap, MapError> {
        if c.field() != self.field() {
            return Err(MapError::FieldMismatch);
        }
        if c.is_zero() {
            return Ok(self.clone_shape());
        }
        let columns = self
            .columns
            .iter()
            .map(|(&j, col)| (j, col.iter().map(|(&i, a)| (i, a * c)).collect()))
            .collect();
        Ok(GradedMap {
            columns,
            ..self.clone_shape()
        })
    }

    fn clone_shape(&self) -> GradedMap {
        GradedMap::zero(&self.source, &self.target, self.degree)
    }

    /// True iff `self` is an endomorphism of degree ±1 squaring to zero.
    pub fn is_differential(&self) -> Result<bool, MapError> {
        if !self.is_endomorphism() {
            return Err(MapError::NotEndomorphism);
        }
        if self.degree.abs() != 1 {
            return Err(MapError::BadDegree(self.degree));
        }
        Ok(self.compose(self)?.is_zero())
    }

    /// Source degrees `p` for which some column `x_j` with `|x_j| = p` is nonzero.
    pub fn block_support(&self) -> BTreeSet<i64> {
        self.columns
            .keys()
            .map(|&j| self.source.degree_of(j))
            .collect()
    }

    /// True iff the block `V_p -> W_{p+deg}` is nonzero.
    pub fn block_is_nonzero(&self, p: i64) -> bool {
        self.columns.keys().any(|&j| self.source.degree_of(j) == p)
    }

    /// The same map on a different (structurally equal) module handle.
    pub(crate) fn rebind(
        &self,
        source: &Arc<GradedModule>,
        target: &Arc<GradedModule>,
    ) -> GradedMap {
        debug_assert!(same_module(source, &self.source) && same_module(target, &self.target));
        GradedMap {
            source: source.clone(),
            target: target.clone(),
            degree: self.degree,
            columns: self.columns.clone(),
        }
    }
}

/// Writes one signed term of a sum: `x`, `-x`, `2*x`, ` + x`, ` - 1/2*x`.
pub(crate) fn write_term(
    f: &mut impl fmt::Write,
    first: bool,
    c: &Scalar,
    body: &str,
) -> fmt::Result {
    let (negative, magnitude) = c.sign_split();
    match (first, negative) {
        (true, false) => {}
        (true, true) => f.write_str("-")?,
        (false, false) => f.write_str(" + ")?,
        (false, true) => f.write_str(" - ")?,
    }
    if !magnitude.is_one() {
        write!(f, "{magnitude}*")?;
    }
    f.write_str(body)
}

/// Canonical rendering: `c*x_i d/d x_j` terms sorted by (source, target)
/// declaration index; `0` for the zero map.
impl fmt::Display for GradedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (j, i, c)) in self.entries().enumerate() {
            let body = format!("{} d/d {}", self.target.name_of(i), self.source.name_of(j));
            write_term(f, k == 0, c, &body)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn paper_v(p: i64) -> Arc<GradedModule> {
        let basis =
            (1..=p).flat_map(|q| [(format!("x{}", 2 * q - 1), q), (format!("x{}", 2 * q), q)]);
        GradedModule::new("V", Q, basis).unwrap()
    }

    fn e(v: &Arc<GradedModule>, i: &str, j: &str) -> GradedMap {
        GradedMap::elementary(v, i, j, Q.one()).unwrap()
    }

    #[test]
    fn elementary_operator() {
        let v = paper_v(4);
        let m = e(&v, "x1", "x3");
        assert_eq!(m.degree(), -1);
        assert_eq!(
            m.apply(&Vector::basis(&v, "x3").unwrap()).unwrap(),
            Vector::basis(&v, "x1").unwrap()
        );
        assert!(m
            .apply(&Vector::basis(&v, "x4").unwrap())
            .unwrap()
            .is_zero());
        assert_eq!(
            GradedMap::elementary(&v, "x1", "x99", Q.one()),
            Err(MapError::Graded(GradedError::UnknownBasisName(
                "x99".into()
            )))
        );
        assert_eq!(
            GradedMap::elementary(&v, "x1", "x3", Q.zero()),
            Err(MapError::ZeroCoefficient)
        );
    }

    #[test]
    fn composition_examples() {
        let v = paper_v(4);
        assert_eq!(
            e(&v, "x1", "x4").compose(&e(&v, "x4", "x6")).unwrap(),
            e(&v, "x1", "x6")
        );
        let d = e(&v, "x1", "x3");
        let sq = d.compose(&d).unwrap();
        assert!(sq.is_zero());
        assert_eq!(sq.degree(), -2);
        assert_eq!(d.compose(&GradedMap::identity(&v)).unwrap(), d);
        let other = paper_v(2);
        assert_eq!(
            d.compose(&e(&other, "x1", "x3")),
            Err(MapError::CompositionMismatch)
        );
    }

    #[test]
    fn arithmetic_examples() {
        let v = paper_v(4);
        let d1 = e(&v, "x1", "x4").add(&e(&v, "x4", "x6")).unwrap();
        assert!(d1
            .add(&d1.scale(&Scalar::from_int(Q, -1)).unwrap())
            .unwrap()
            .is_zero());
        let m = e(&v, "x3", "x6").scale(&Scalar::from_int(Q, -1)).unwrap();
        assert_eq!(m.to_string(), "-x3 d/d x6");
        assert_eq!(
            d1.add(&e(&v, "x1", "x2")),
            Err(MapError::DegreeMismatch(-1, 0))
        );
    }

    #[test]
    fn differentials() {
        let v = paper_v(4);
        assert!(e(&v, "x1", "x3").is_differential().unwrap());
        let bad = e(&v, "x4", "x6").add(&e(&v, "x6", "x8")).unwrap();
        assert!(!bad.is_differential().unwrap());
        assert_eq!(bad.compose(&bad).unwrap(), e(&v, "x4", "x8"));
        assert!(GradedMap::zero(&v, &v, -1).is_differential().unwrap());
        assert_eq!(
            GradedMap::identity(&v).is_differential(),
            Err(MapError::BadDegree(0))
        );
    }

    #[test]
    fn block_support_and_rendering() {
        let v = paper_v(9);
        let d = e(&v, "x1", "x3")
            .add(&e(&v, "x7", "x9"))
            .unwrap()
            .add(&e(&v, "x13", "x15"))
            .unwrap();
        assert_eq!(d.block_support(), BTreeSet::from([2, 5, 8]));
        assert!(GradedMap::zero(&v, &v, -1).block_support().is_empty());
        let m = GradedMap::from_named_entries(
            &v,
            &v,
            -1,
            [
                ("x6", "x3", Scalar::from_int(Q, -1)),
                ("x3", "x1", Scalar::from_frac(Q, 1, 2).unwrap()),
                ("x6", "x4", Scalar::from_int(Q, 2)),
            ],
        )
        .unwrap();
        assert_eq!(m.to_string(), "1/2*x1 d/d x3 - x3 d/d x6 + 2*x4 d/d x6");
        let gf5 = FieldSpec::prime(5).unwrap();
        let w = GradedModule::new("W", gf5, [("a".into(), 1), ("b".into(), 0)]).unwrap();
        let neg = GradedMap::elementary(&w, "b", "a", Scalar::from_int(gf5, 4)).unwrap();
        assert_eq!(neg.to_string(), "-b d/d a");
    }

    #[test]
    fn homogeneity_enforced() {
        let v = paper_v(3);
        let r = GradedMap::from_named_entries(&v, &v, -1, [("x5", "x2", Q.one())]);
        assert!(matches!(r, Err(MapError::NotHomogeneous { .. })));
    }

    #[test]
    fn elementary_products_brute_force() {
        // Six basis elements all of degree 0 so every pair composes.
        let names: Vec<String> = (0..6).map(|i| format!("e{i}")).collect();
        let v = GradedModule::new("B", Q, names.iter().map(|n| (n.clone(), 0))).unwrap();
        for i in &names {
            for j in &names {
                for k in &names {
                    for l in &names {
                        let lhs = e(&v, i, j).compose(&e(&v, k, l)).unwrap();
                        if j == k {
                            assert_eq!(lhs, e(&v, i, l));
                        } else {
                            assert!(lhs.is_zero());
                        }
                    }
                }
            }
        }
    }
}
