//! Deterministic text artifacts: JSON, LaTeX and aligned plain text.

use serde::Serialize;
use serde_json::json;

use crate::cdga::Element;
use crate::modules::{BasisElement, CellModule, ModuleMap};
use crate::path::{Assembly, Residual};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Latex,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "latex" => Ok(Format::Latex),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format {s:?} (json, latex, text)")),
        }
    }
}

#[derive(Serialize)]
struct JsonBasis<'a> {
    label: &'a str,
    bidegree: [i32; 2],
}

#[derive(Serialize)]
struct JsonEntry {
    row: usize,
    col: usize,
    element: String,
}

fn basis_json(basis: &[BasisElement]) -> Vec<JsonBasis<'_>> {
    basis
        .iter()
        .map(|b| JsonBasis { label: &b.label, bidegree: [b.bidegree.cohomological, b.bidegree.adams] })
        .collect()
}

/// Nonzero entries, sorted by row then column.
fn entries(map: &ModuleMap) -> Vec<JsonEntry> {
    let mut out: Vec<JsonEntry> =
        map.entries().map(|(row, col, e)| JsonEntry { row, col, element: e.to_canonical_string() }).collect();
    out.sort_by_key(|e| (e.row, e.col));
    out
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// `{basis: [{label, bidegree}], entries: [{row, col, element}]}`.
pub fn module_json(m: &CellModule) -> String {
    to_json(&json!({ "basis": basis_json(&m.basis), "entries": entries(&m.differential) }))
}

/// A map between two bases, in the same schema with separate row and
/// column bases.
pub fn map_json(rows: &[BasisElement], cols: &[BasisElement], map: &ModuleMap) -> String {
    to_json(&json!({ "rows": basis_json(rows), "cols": basis_json(cols), "entries": entries(map) }))
}

pub fn residuals_json(residuals: &[Residual]) -> String {
    to_json(&json!({ "residuals": residuals }))
}

/// The display form of an entry: `T{a,1-a}` as `T_{a,1-a}`, no `*`.
fn latex_element(e: &Element) -> String {
    let s = e.to_canonical_string().replace('*', "");
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        if c == 'T' && chars.peek() == Some(&'{') {
            out.push_str("T_");
        } else {
            out.push(c);
        }
    }
    out
}

/// Full matrix of a differential, with `d` on the diagonal.
fn grid(m: &CellModule, show: impl Fn(&Element) -> String) -> Vec<Vec<String>> {
    let n = m.rank();
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let e = m.differential.entry(r, c);
                    match (r == c, e.is_zero()) {
                        (true, true) => "d".to_string(),
                        (true, false) => format!("d + {}", show(&e)),
                        (false, true) => "0".to_string(),
                        (false, false) => show(&e),
                    }
                })
                .collect()
        })
        .collect()
}

pub fn module_latex(m: &CellModule) -> String {
    let rows = grid(m, latex_element);
    let cols = "c".repeat(m.rank());
    let mut s = format!("\\left(\\begin{{array}}{{{cols}}}\n");
    for (i, row) in rows.iter().enumerate() {
        s.push_str(&row.join(" & "));
        s.push_str(if i + 1 < rows.len() { " \\\\\n" } else { "\n" });
    }
    s.push_str("\\end{array}\\right)\n");
    s
}

/// One line per row, columns padded to a common width.
pub fn module_text(m: &CellModule) -> String {
    let rows = grid(m, |e| e.to_canonical_string().replace('*', ""));
    let widths: Vec<usize> =
        (0..m.rank()).map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
    let mut s = String::new();
    for row in &rows {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(x, w)| format!("{x:<w$}", w = w)).collect();
        s.push_str(cells.join("  ").trim_end());
        s.push('\n');
    }
    s
}

pub fn emit_module(m: &CellModule, format: Format) -> String {
    match format {
        Format::Json => module_json(m),
        Format::Latex => module_latex(m),
        Format::Text => module_text(m),
    }
}

pub fn emit_residuals(residuals: &[Residual], format: Format) -> String {
    match format {
        Format::Json => residuals_json(residuals),
        Format::Latex | Format::Text if residuals.is_empty() => "all identities hold\n".to_string(),
        Format::Latex | Format::Text => {
            residuals.iter().map(|r| format!("{} fails on {}: {}\n", r.identity, r.cell, r.value)).collect()
        }
    }
}

/// The base complex and comparison map of an assembly: faces per level
/// (top level first), `beta` as signed substitutions, and `Phi` from the
/// totalized cells to the faces.
pub fn assembly_json(asm: &Assembly) -> (String, String) {
    let pc = &asm.complex;
    let mut face_basis = Vec::new();
    let mut offset = std::collections::BTreeMap::new();
    for level in (0..=pc.n).rev() {
        offset.insert(level, face_basis.len());
        for f in &pc.faces[level] {
            face_basis.push(BasisElement::new(f.to_string(), crate::cdga::Bidegree::new(-(level as i32), 0)));
        }
    }
    let mut beta = Vec::new();
    for level in 1..=pc.n {
        for (i, f) in pc.faces[level].iter().enumerate() {
            for cf in f.cofaces() {
                let (from, to) = f.substitution(cf);
                beta.push(json!({
                    "row": offset[&(level - 1)] + pc.face_id(&f.apply(cf)),
                    "col": offset[&level] + i,
                    "element": f.coface_sign(cf).to_string(),
                    "substitution": format!("{from} -> {to}"),
                }));
            }
        }
    }
    beta.sort_by_key(|e| (e["row"].as_u64(), e["col"].as_u64()));
    let b = to_json(&json!({ "basis": basis_json(&face_basis), "entries": beta }));

    let mut cols = Vec::new();
    for level in (0..=pc.n).rev() {
        for idx in 0..pc.rank(level) {
            let mut col = crate::modules::Vector::new();
            for (l, v) in pc.phi(&asm.homotopies, level, &single(idx)).iter().enumerate() {
                for (f, e) in v {
                    col.insert(offset[&l] + f, e.clone());
                }
            }
            cols.push(col);
        }
    }
    let phi = ModuleMap::from_columns(face_basis.len(), crate::cdga::Bidegree::ZERO, cols);
    let h = map_json(&face_basis, &asm.total.basis, &phi);
    (b, h)
}

fn single(idx: usize) -> crate::modules::Vector {
    let mut v = crate::modules::Vector::new();
    v.insert(idx, Element::one());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minimal::minimize;

    #[test]
    fn empty_report() {
        assert_eq!(residuals_json(&[]), "{\n  \"residuals\": []\n}\n");
    }

    #[test]
    fn n1_minimal_text() {
        let (m, _) = minimize(1).unwrap();
        let text = module_text(&m.module);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("d  -[a] + [b]"), "{text}");
        assert_eq!(lines[1].split_whitespace().collect::<Vec<_>>(), ["0", "d", "0"]);
        assert_eq!(lines[2].split_whitespace().collect::<Vec<_>>(), ["0", "0", "d"]);
    }

    #[test]
    fn output_is_stable() {
        let (m, _) = minimize(2).unwrap();
        assert_eq!(module_json(&m.module), module_json(&minimize(2).unwrap().0.module));
        assert!(
            module_latex(&m.module).contains("T_{b,1-b} - T_{a,1-a}")
                || module_latex(&m.module).contains("-T_{a,1-a} + T_{b,1-b}")
        );
    }
}
