//! The cochain complex `C*(V; M)` with `C^p = Hom^{-p}(V, M)` and coboundary
//! `δ(f) = d_M f - (-1)^p f d_V`, its cohomology, and the exact solver for
//! `δ(f) = g`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldSpec, Scalar};
use crate::gmap::{GradedMap, MapError};
use crate::graded::{same_module, GradedModule};
use crate::linalg::{dot, rref, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CochainError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("malformed cochain: {0}")]
    MalformedCochain(String),
    #[error("map is not a differential: d^2 = {0}")]
    NotADifferential(String),
    #[error("differential must be an endomorphism of degree -1, found degree {0}")]
    BadDegree(i64),
    #[error("right-hand side is not a cocycle: δ(g) = {0}")]
    NotACocycle(String),
    #[error("complexes are over different fields ({0} vs {1})")]
    FieldMismatch(FieldSpec, FieldSpec),
}

/// A differential graded module `(V, d)` with `d` of degree -1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DgModule {
    module: Arc<GradedModule>,
    d: GradedMap,
}

impl DgModule {
    pub fn new(d: GradedMap) -> Result<DgModule, CochainError> {
        if !d.is_endomorphism() {
            return Err(MapError::NotEndomorphism.into());
        }
        if d.degree() != -1 {
            return Err(CochainError::BadDegree(d.degree()));
        }
        let sq = d.compose(&d)?;
        if !sq.is_zero() {
            return Err(CochainError::NotADifferential(sq.to_string()));
        }
        Ok(DgModule {
            module: d.source().clone(),
            d,
        })
    }

    pub fn module(&self) -> &Arc<GradedModule> {
        &self.module
    }

    pub fn differential(&self) -> &GradedMap {
        &self.d
    }

    pub fn field(&self) -> FieldSpec {
        self.module.field()
    }
}

/// An element of `C^p(V; M)`: a map of degree `-p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    p: i64,
    map: GradedMap,
}

impl Cochain {
    /// Tags `map` as a cochain of degree `-map.degree()`.
    pub fn from_map(map: GradedMap) -> Cochain {
        Cochain {
            p: -map.degree(),
            map,
        }
    }

    pub fn degree(&self) -> i64 {
        self.p
    }

    pub fn map(&self) -> &GradedMap {
        &self.map
    }

    pub fn into_map(self) -> GradedMap {
        self.map
    }

    pub fn is_zero(&self) -> bool {
        self.map.is_zero()
    }

    pub fn neg(&self) -> Cochain {
        Cochain {
            p: self.p,
            map: self.map.neg(),
        }
    }
}

impl fmt::Display for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.map.fmt(f)
    }
}

/// A linear functional on the entries of `C^{p+1}`, stored in the same
/// `x_i d/d x_j` coordinates as a cochain. It annihilates every coboundary yet
/// pairs nonzero with the right-hand side, so that side cannot be a coboundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub functional: GradedMap,
    pub pairing: Scalar,
}

impl Witness {
    /// Source basis names of the equations the functional uses.
    pub fn sources(&self) -> BTreeSet<String> {
        self.functional
            .entries()
            .map(|(j, _, _)| self.functional.source().name_of(j).to_string())
            .collect()
    }

    pub fn involves_source(&self, name: &str) -> bool {
        self.functional
            .column(name)
            .map(|c| !c.is_zero())
            .unwrap_or(false)
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "functional [{}] pairs to {} on the right-hand side",
            self.functional, self.pairing
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Solved(Cochain),
    Infeasible(Witness),
}

impl SolveOutcome {
    pub fn is_solved(&self) -> bool {
        matches!(self, SolveOutcome::Solved(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyResult {
    pub p: i64,
    pub dim_cocycles: usize,
    pub dim_coboundaries: usize,
    pub dim_h: usize,
    pub representatives: Vec<Cochain>,
}

/// `C*(V; M)` for a pair of differential graded modules.
#[derive(Debug, Clone)]
pub struct CochainComplex {
    v: DgModule,
    m: DgModule,
}

impl CochainComplex {
    pub fn new(v: DgModule, m: DgModule) -> Result<CochainComplex, CochainError> {
        if v.field() != m.field() {
            return Err(CochainError::FieldMismatch(v.field(), m.field()));
        }
        Ok(CochainComplex { v, m })
    }

    /// `C*(V) = C*(V; V)`.
    pub fn endomorphisms(v: DgModule) -> CochainComplex {
        CochainComplex { m: v.clone(), v }
    }

    pub fn source(&self) -> &DgModule {
        &self.v
    }

    pub fn coefficients(&self) -> &DgModule {
        &self.m
    }

    pub fn field(&self) -> FieldSpec {
        self.v.field()
    }

    /// Wraps `map` as an element of `C^p`, checking modules and degree.
    pub fn cochain(&self, p: i64, map: GradedMap) -> Result<Cochain, CochainError> {
        if !same_module(map.source(), self.v.module())
            || !same_module(map.target(), self.m.module())
        {
            return Err(CochainError::MalformedCochain(
                "map does not go from V to M".into(),
            ));
        }
        if map.degree() != -p {
            return Err(CochainError::MalformedCochain(format!(
                "a {p}-cochain must have map degree {}, found {}",
                -p,
                map.degree()
            )));
        }
        let map = map.rebind(self.v.module(), self.m.module());
        Ok(Cochain { p, map })
    }

    pub fn zero(&self, p: i64) -> Cochain {
        Cochain {
            p,
            map: GradedMap::zero(self.v.module(), self.m.module(), -p),
        }
    }

    fn check(&self, f: &Cochain) -> Result<(), CochainError> {
        self.cochain(f.p, f.map.clone()).map(|_| ())
    }

    pub fn coboundary(&self, f: &Cochain) -> Result<Cochain, CochainError> {
        self.check(f)?;
        let left = self.m.differential().compose(&f.map)?;
        let right = f.map.compose(self.v.differential())?;
        let map = if f.p.rem_euclid(2) == 0 {
            left.sub(&right)?
        } else {
            left.add(&right)?
        };
        Ok(Cochain { p: f.p + 1, map })
    }

    pub fn is_cocycle(&self, f: &Cochain) -> Result<bool, CochainError> {
        Ok(self.coboundary(f)?.is_zero())
    }

    /// Canonical basis of `C^p`: pairs `(source index j, target index i)` with
    /// `|x_i| = |x_j| - p`, ordered by `(j, i)`.
    pub fn basis(&self, p: i64) -> Vec<(usize, usize)> {
        let (v, m) = (self.v.module(), self.m.module());
        let mut out = Vec::new();
        for j in 0..v.dim() {
            for i in m.component_indices(v.degree_of(j) - p) {
                out.push((j, i));
            }
        }
        out
    }

    pub fn dim(&self, p: i64) -> usize {
        self.basis(p).len()
    }

    fn coordinates(&self, f: &Cochain, index: &HashMap<(usize, usize), usize>) -> Vec<Scalar> {
        let mut x = vec![self.field().zero(); index.len()];
        for (j, i, c) in f.map.entries() {
            x[index[&(j, i)]] = c.clone();
        }
        x
    }

    fn cochain_at(&self, p: i64, basis: &[(usize, usize)], x: &[Scalar]) -> Cochain {
        let map = GradedMap::from_entries(
            self.v.module(),
            self.m.module(),
            -p,
            basis.iter().zip(x).map(|(&(j, i), c)| (j, i, c.clone())),
        )
        .expect("canonical basis entries are homogeneous");
        Cochain { p, map }
    }

    /// Matrix of `δ^p : C^p -> C^{p+1}` in the canonical bases
    /// (rows index `C^{p+1}`, columns index `C^p`).
    pub fn coboundary_matrix(&self, p: i64) -> Matrix {
        let domain = self.basis(p);
        let codomain = self.basis(p + 1);
        let row_of: HashMap<(usize, usize), usize> =
            codomain.iter().enumerate().map(|(r, &e)| (e, r)).collect();
        let mut a = Matrix::zeros(self.field(), codomain.len(), domain.len());
        let one = self.field().one();
        for (c, &(j, i)) in domain.iter().enumerate() {
            let e = self.basis_cochain(p, j, i, one.clone());
            let image = self.coboundary(&e).expect("basis cochain is well formed");
            for (jj, ii, coeff) in image.map.entries() {
                a.set(row_of[&(jj, ii)], c, coeff.clone());
            }
        }
        a
    }

    fn basis_cochain(&self, p: i64, j: usize, i: usize, c: Scalar) -> Cochain {
        let map = GradedMap::from_entries(self.v.module(), self.m.module(), -p, [(j, i, c)])
            .expect("canonical basis entries are homogeneous");
        Cochain { p, map }
    }

    pub fn cohomology(&self, p: i64) -> CohomologyResult {
        let basis = self.basis(p);
        let delta_p = self.coboundary_matrix(p);
        let delta_prev = self.coboundary_matrix(p - 1);
        let kernel = delta_p.kernel_basis();
        let dim_coboundaries = delta_prev.rank();

        // Columns: coboundary spanning set first, then the kernel basis. Kernel
        // columns that become pivots are independent modulo the coboundaries.
        let n = basis.len();
        let spanning = delta_prev.cols();
        let mut stacked = Matrix::zeros(self.field(), n, spanning + kernel.len());
        for r in 0..n {
            for c in 0..spanning {
                stacked.set(r, c, delta_prev.get(r, c).clone());
            }
            for (k, z) in kernel.iter().enumerate() {
                stacked.set(r, spanning + k, z[r].clone());
            }
        }
        let pivots = rref(stacked, false).pivots;
        let representatives: Vec<Cochain> = pivots
            .into_iter()
            .filter(|&c| c >= spanning)
            .map(|c| self.cochain_at(p, &basis, &kernel[c - spanning]))
            .collect();

        CohomologyResult {
            p,
            dim_cocycles: kernel.len(),
            dim_coboundaries,
            dim_h: kernel.len() - dim_coboundaries,
            representatives,
        }
    }

    /// Solves `δ(f) = g` exactly. The particular solution comes from RREF in
    /// the canonical basis with every free variable set to zero.
    pub fn solve_coboundary(&self, g: &Cochain) -> Result<SolveOutcome, CochainError> {
        self.check(g)?;
        let dg = self.coboundary(g)?;
        if !dg.is_zero() {
            return Err(CochainError::NotACocycle(dg.to_string()));
        }
        let p = g.p - 1;
        let domain = self.basis(p);
        let codomain = self.basis(g.p);
        let index: HashMap<(usize, usize), usize> =
            codomain.iter().enumerate().map(|(r, &e)| (e, r)).collect();
        let a = self.coboundary_matrix(p);
        let b = self.coordinates(g, &index);
        match a.solve(&b) {
            Ok(x) => Ok(SolveOutcome::Solved(self.cochain_at(p, &domain, &x))),
            Err(y) => {
                let pairing = dot(self.field(), &y, &b);
                let functional = self.cochain_at(g.p, &codomain, &y).into_map();
                Ok(SolveOutcome::Infeasible(Witness {
                    functional,
                    pairing,
                }))
            }
        }
    }

    /// Degree-support obstruction to `g` being a coboundary: a source degree
    /// `p` where `g` has a nonzero block while every `δ(f)` must vanish there,
    /// because `d_V` is zero on `V_p` and `d_M` is zero on the degree `f` lands
    /// in. Returns that degree. Valid on any window containing degree `p`.
    pub fn noncobounding_certificate(&self, g: &Cochain) -> Option<i64> {
        let lower = g.p - 1;
        g.map.block_support().into_iter().find(|&p| {
            !self.v.differential().block_is_nonzero(p)
                && !self.m.differential().block_is_nonzero(p - lower)
        })
    }
}

/// [`CochainComplex::noncobounding_certificate`] for `C*(V; V)` given the
/// differential alone.
pub fn noncobounding_certificate(d: &GradedMap, g: &Cochain) -> bool {
    let lower = g.degree() - 1;
    g.map()
        .block_support()
        .into_iter()
        .any(|p| !d.block_is_nonzero(p) && !d.block_is_nonzero(p - lower))
}
