//! The `.dgm` text format for a graded module, named maps on it, and an
//! optional deformation block.
//!
//! ```text
//! field Q
//! module V {
//!   basis x1 : 1, x2 : 1;
//!   basis x3 : 2;
//! }
//! map d degree -1 {
//!   x3 -> x1;
//! }
//! map d1 degree -1 {
//!   x3 -> -x1 + 1/2*x2;
//! }
//! deformation {
//!   order 1 : d1;
//! }
//! ```

mod lexer;
mod parser;
mod printer;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::cochain::{CochainError, DgModule};
use crate::field::FieldSpec;
use crate::gmap::GradedMap;
use crate::graded::{same_module, GradedModule};

pub use parser::parse;
pub use printer::print;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown basis name `{0}`")]
    UnknownBasisName(String),
    #[error("`{from} -> {to}` does not have degree {degree}")]
    DegreeMismatch {
        from: String,
        to: String,
        degree: i64,
    },
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(String),
    #[error("unknown map `{0}`")]
    UnknownName(String),
    #[error("`{0}` is defined twice")]
    DuplicateName(String),
    #[error("bad coefficient: {0}")]
    BadCoefficient(String),
    #[error("map `{0}` is not an endomorphism of the module")]
    NotAnEndomorphism(String),
    #[error("no map named `d`")]
    MissingDifferential,
    #[error("`d` is not a differential: {0}")]
    NotADifferential(String),
}

/// A format error, located when it comes from parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DslError {
    pub kind: ErrorKind,
    pub pos: Option<Pos>,
}

impl DslError {
    pub(crate) fn at(pos: Pos, kind: ErrorKind) -> DslError {
        DslError {
            kind,
            pos: Some(pos),
        }
    }

    pub(crate) fn unlocated(kind: ErrorKind) -> DslError {
        DslError { kind, pos: None }
    }
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pos {
            Some(p) => write!(f, "{p}: {}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

impl std::error::Error for DslError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    module: Arc<GradedModule>,
    maps: Vec<(String, GradedMap)>,
    deformation: Option<Vec<(usize, String)>>,
}

impl Document {
    /// Checks that map names are distinct, every map is an endomorphism of
    /// `module`, and the deformation block names existing maps at distinct
    /// orders `≥ 1`. Deformation entries are kept sorted by order.
    pub fn new(
        module: Arc<GradedModule>,
        maps: Vec<(String, GradedMap)>,
        deformation: Option<Vec<(usize, String)>>,
    ) -> Result<Document, DslError> {
        let err = |k| Err(DslError::unlocated(k));
        for (k, (name, m)) in maps.iter().enumerate() {
            if maps[..k].iter().any(|(other, _)| other == name) {
                return err(ErrorKind::DuplicateName(name.clone()));
            }
            if !m.is_endomorphism() || !same_module(m.source(), &module) {
                return err(ErrorKind::NotAnEndomorphism(name.clone()));
            }
        }
        let deformation = match deformation {
            None => None,
            Some(mut entries) => {
                entries.sort_by_key(|(k, _)| *k);
                for (idx, (order, name)) in entries.iter().enumerate() {
                    if *order == 0 {
                        return err(ErrorKind::Syntax("deformation orders start at 1".into()));
                    }
                    if idx > 0 && entries[idx - 1].0 == *order {
                        return err(ErrorKind::DuplicateName(format!("order {order}")));
                    }
                    if !maps.iter().any(|(n, _)| n == name) {
                        return err(ErrorKind::UnknownName(name.clone()));
                    }
                }
                Some(entries)
            }
        };
        let maps = maps
            .into_iter()
            .map(|(n, m)| (n, m.rebind(&module, &module)))
            .collect();
        Ok(Document {
            module,
            maps,
            deformation,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.module.field()
    }

    pub fn module(&self) -> &Arc<GradedModule> {
        &self.module
    }

    pub fn maps(&self) -> &[(String, GradedMap)] {
        &self.maps
    }

    pub fn map(&self, name: &str) -> Option<&GradedMap> {
        self.maps.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    /// `(order, map name)` sorted by order.
    pub fn deformation(&self) -> Option<&[(usize, String)]> {
        self.deformation.as_deref()
    }
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

/// A document resolved into a differential graded module.
#[derive(Debug, Clone)]
pub struct LoadedComplex {
    pub dg: DgModule,
    pub maps: Vec<(String, GradedMap)>,
    /// `d_1, ..., d_N` for the highest listed order `N`; unlisted orders are
    /// the zero map of degree -1.
    pub lifts: Vec<GradedMap>,
}

pub fn load_complex(doc: &Document) -> Result<LoadedComplex, DslError> {
    let d = doc
        .map("d")
        .ok_or_else(|| DslError::unlocated(ErrorKind::MissingDifferential))?;
    let not_diff = |msg: String| DslError::unlocated(ErrorKind::NotADifferential(msg));
    if d.degree() != -1 {
        return Err(not_diff(format!("degree {} (expected -1)", d.degree())));
    }
    let dg = DgModule::new(d.clone()).map_err(|e| match e {
        CochainError::NotADifferential(sq) => not_diff(format!("d^2 = {sq}")),
        other => not_diff(other.to_string()),
    })?;
    let module = doc.module();
    let mut lifts = Vec::new();
    for (order, name) in doc.deformation().unwrap_or(&[]) {
        lifts.resize(*order, GradedMap::zero(module, module, -1));
        lifts[order - 1] = doc.map(name).expect("resolved at construction").clone();
    }
    Ok(LoadedComplex {
        dg,
        maps: doc.maps().to_vec(),
        lifts,
    })
}
