use std::collections::BTreeMap;
use std::sync::Arc;

use num::BigInt;

use super::lexer::{tokenize, Tok};
use super::{Document, DslError, ErrorKind, Pos};
use crate::field::{is_prime, FieldError, FieldSpec, Scalar};
use crate::gmap::GradedMap;
use crate::graded::GradedModule;

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

type Res<T> = Result<T, DslError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if t.0 != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn unexpected<T>(&self, wanted: &str) -> Res<T> {
        Err(DslError::at(
            self.pos(),
            ErrorKind::Syntax(format!(
                "expected {wanted}, found {}",
                self.peek().describe()
            )),
        ))
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Res<Pos> {
        if self.peek() == &tok {
            Ok(self.next().1)
        } else {
            self.unexpected(&tok.describe())
        }
    }

    fn keyword(&mut self, kw: &str) -> Res<Pos> {
        match self.peek() {
            Tok::Ident(s) if s == kw => Ok(self.next().1),
            _ => self.unexpected(&format!("`{kw}`")),
        }
    }

    fn ident(&mut self) -> Res<(String, Pos)> {
        match self.next() {
            (Tok::Ident(s), p) => Ok((s, p)),
            _ => {
                self.at -= 1;
                self.unexpected("an identifier")
            }
        }
    }

    fn int_literal(&mut self) -> Res<(String, Pos)> {
        match self.peek().clone() {
            Tok::Int(s) => Ok((s, self.next().1)),
            _ => self.unexpected("an integer"),
        }
    }

    fn signed_int(&mut self) -> Res<i64> {
        let neg = self.eat(&Tok::Minus);
        let (s, p) = self.int_literal()?;
        let v: i64 = s.parse().map_err(|_| {
            DslError::at(
                p,
                ErrorKind::Syntax(format!("integer `{s}` is out of range")),
            )
        })?;
        Ok(if neg { -v } else { v })
    }

    fn field(&mut self) -> Res<FieldSpec> {
        self.keyword("field")?;
        let field = match self.ident()? {
            (s, _) if s == "Q" => FieldSpec::Rationals,
            (s, _) if s == "GF" => {
                let (lit, p) = self.int_literal()?;
                match lit.parse::<u64>() {
                    Ok(m) if is_prime(m) => FieldSpec::PrimeField(m),
                    _ => return Err(DslError::at(p, ErrorKind::NonPrimeModulus(lit))),
                }
            }
            (s, p) => {
                return Err(DslError::at(
                    p,
                    ErrorKind::Syntax(format!("unknown field `{s}` (expected Q or GF <p>)")),
                ))
            }
        };
        self.eat(&Tok::Semi);
        Ok(field)
    }

    fn module(&mut self, field: FieldSpec) -> Res<Arc<GradedModule>> {
        self.keyword("module")?;
        let (name, _) = self.ident()?;
        self.expect(Tok::LBrace)?;
        let mut basis: Vec<(String, i64)> = Vec::new();
        while !self.eat(&Tok::RBrace) {
            self.keyword("basis")?;
            loop {
                let (b, p) = self.ident()?;
                self.expect(Tok::Colon)?;
                let deg = self.signed_int()?;
                if basis.iter().any(|(n, _)| n == &b) {
                    return Err(DslError::at(p, ErrorKind::DuplicateName(b)));
                }
                basis.push((b, deg));
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::Semi)?;
        }
        Ok(GradedModule::new(&name, field, basis).expect("duplicates rejected above"))
    }

    fn basis_index(&self, module: &GradedModule, name: &str, p: Pos) -> Res<usize> {
        module
            .index_of(name)
            .map_err(|_| DslError::at(p, ErrorKind::UnknownBasisName(name.to_string())))
    }

    /// `[-] [int [/ int] *] ident`
    fn term(&mut self, field: FieldSpec, negate: bool) -> Res<(Scalar, String, Pos)> {
        let start = self.pos();
        let negate = negate ^ self.eat(&Tok::Minus);
        let mut coeff = field.one();
        if let Tok::Int(_) = self.peek() {
            let (num, _) = self.int_literal()?;
            let den = if self.eat(&Tok::Slash) {
                self.int_literal()?.0
            } else {
                "1".to_string()
            };
            self.expect(Tok::Star)?;
            let num: BigInt = num.parse().expect("lexer yields digits");
            let den: BigInt = den.parse().expect("lexer yields digits");
            coeff = Scalar::from_frac(field, num, den).map_err(|e| {
                let msg = match e {
                    FieldError::ZeroDenominator => "zero denominator".to_string(),
                    other => other.to_string(),
                };
                DslError::at(start, ErrorKind::BadCoefficient(msg))
            })?;
        }
        if coeff.is_zero() {
            return Err(DslError::at(
                start,
                ErrorKind::BadCoefficient("coefficient is zero".into()),
            ));
        }
        let (dst, p) = self.ident()?;
        Ok((if negate { -coeff } else { coeff }, dst, p))
    }

    fn map(&mut self, module: &Arc<GradedModule>) -> Res<(String, GradedMap, Pos)> {
        self.keyword("map")?;
        let (name, name_pos) = self.ident()?;
        self.keyword("degree")?;
        let degree = self.signed_int()?;
        self.expect(Tok::LBrace)?;
        let field = module.field();
        let mut entries: BTreeMap<usize, BTreeMap<usize, Scalar>> = BTreeMap::new();
        while !self.eat(&Tok::RBrace) {
            let (src, sp) = self.ident()?;
            let j = self.basis_index(module, &src, sp)?;
            if entries.contains_key(&j) {
                return Err(DslError::at(
                    sp,
                    ErrorKind::DuplicateName(format!("entry for `{src}`")),
                ));
            }
            self.expect(Tok::Arrow)?;
            let mut column = BTreeMap::new();
            let mut negate = false;
            loop {
                let (c, dst, dp) = self.term(field, negate)?;
                let i = self.basis_index(module, &dst, dp)?;
                if module.degree_of(i) != module.degree_of(j) + degree {
                    return Err(DslError::at(
                        dp,
                        ErrorKind::DegreeMismatch {
                            from: src,
                            to: dst,
                            degree,
                        },
                    ));
                }
                if column.insert(i, c).is_some() {
                    return Err(DslError::at(
                        dp,
                        ErrorKind::DuplicateName(format!("term `{dst}`")),
                    ));
                }
                negate = match self.peek() {
                    Tok::Plus => false,
                    Tok::Minus => true,
                    _ => break,
                };
                self.next();
            }
            self.expect(Tok::Semi)?;
            entries.insert(j, column);
        }
        let flat = entries
            .into_iter()
            .flat_map(|(j, col)| col.into_iter().map(move |(i, c)| (j, i, c)));
        let map = GradedMap::from_entries(module, module, degree, flat).expect("checked per entry");
        Ok((name, map, name_pos))
    }

    fn deformation(&mut self, maps: &[(String, GradedMap)]) -> Res<Vec<(usize, String)>> {
        self.keyword("deformation")?;
        self.expect(Tok::LBrace)?;
        let mut out: Vec<(usize, String)> = Vec::new();
        while !self.eat(&Tok::RBrace) {
            self.keyword("order")?;
            let (lit, p) = self.int_literal()?;
            let order: usize = match lit.parse() {
                Ok(k) if k >= 1 => k,
                _ => {
                    return Err(DslError::at(
                        p,
                        ErrorKind::Syntax(format!("order `{lit}` must be a positive integer")),
                    ))
                }
            };
            if out.iter().any(|(k, _)| *k == order) {
                return Err(DslError::at(
                    p,
                    ErrorKind::DuplicateName(format!("order {order}")),
                ));
            }
            self.expect(Tok::Colon)?;
            let (name, np) = self.ident()?;
            if !maps.iter().any(|(n, _)| n == &name) {
                return Err(DslError::at(np, ErrorKind::UnknownName(name)));
            }
            self.expect(Tok::Semi)?;
            out.push((order, name));
        }
        Ok(out)
    }
}

/// Parses a `.dgm` document, applying every semantic check.
pub fn parse(text: &str) -> Result<Document, DslError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        at: 0,
    };
    let field = p.field()?;
    let module = p.module(field)?;
    let mut maps: Vec<(String, GradedMap)> = Vec::new();
    while matches!(p.peek(), Tok::Ident(s) if s == "map") {
        let (name, map, pos) = p.map(&module)?;
        if maps.iter().any(|(n, _)| n == &name) {
            return Err(DslError::at(pos, ErrorKind::DuplicateName(name)));
        }
        maps.push((name, map));
    }
    let deformation = match p.peek() {
        Tok::Ident(s) if s == "deformation" => Some(p.deformation(&maps)?),
        _ => None,
    };
    if p.peek() != &Tok::Eof {
        return p.unexpected("`map`, `deformation` or end of input");
    }
    Document::new(module, maps, deformation)
}
