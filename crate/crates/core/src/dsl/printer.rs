use std::fmt::Write;

use super::Document;
use crate::field::FieldSpec;
use crate::gmap::write_term;

/// Canonical text: basis in declaration order with one `basis` line per run of
/// equal degrees, map columns by source index, terms by target index.
pub fn print(doc: &Document) -> String {
    let mut out = String::new();
    match doc.field() {
        FieldSpec::Rationals => out.push_str("field Q\n"),
        FieldSpec::PrimeField(p) => writeln!(out, "field GF {p}").unwrap(),
    }

    let module = doc.module();
    let basis = module.basis();
    if basis.is_empty() {
        writeln!(out, "\nmodule {} {{ }}", module.name()).unwrap();
    } else {
        writeln!(out, "\nmodule {} {{", module.name()).unwrap();
        for run in basis.chunk_by(|a, b| a.degree == b.degree) {
            let items: Vec<String> = run
                .iter()
                .map(|b| format!("{} : {}", b.name, b.degree))
                .collect();
            writeln!(out, "  basis {};", items.join(", ")).unwrap();
        }
        out.push_str("}\n");
    }

    for (name, map) in doc.maps() {
        if map.is_zero() {
            writeln!(out, "\nmap {name} degree {} {{ }}", map.degree()).unwrap();
            continue;
        }
        writeln!(out, "\nmap {name} degree {} {{", map.degree()).unwrap();
        let mut current: Option<usize> = None;
        for (j, i, c) in map.entries() {
            if current != Some(j) {
                if current.is_some() {
                    out.push_str(";\n");
                }
                write!(out, "  {} -> ", module.name_of(j)).unwrap();
            }
            write_term(&mut out, current != Some(j), c, module.name_of(i)).unwrap();
            current = Some(j);
        }
        out.push_str(";\n}\n");
    }

    if let Some(entries) = doc.deformation() {
        if entries.is_empty() {
            out.push_str("\ndeformation { }\n");
        } else {
            out.push_str("\ndeformation {\n");
            for (k, name) in entries {
                writeln!(out, "  order {k} : {name};").unwrap();
            }
            out.push_str("}\n");
        }
    }
    out
}
