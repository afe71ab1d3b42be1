//! Curated class-number table: one record per line,
//! `field_d, extension_tag, conductor_norm, h_B, w_B, source_note`.
//! Blank lines and lines starting with `#` are ignored.

use std::collections::BTreeMap;
use std::path::Path;

use crate::cmorders::catalog::BCatalog;
use crate::error::{Error, Result};

/// One table row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuratedRow {
    pub line: usize,
    pub h: u64,
    pub w: u64,
    pub note: String,
}

/// Rows keyed by `(field_d, tag, conductor_norm)`.
#[derive(Clone, Debug, Default)]
pub struct CuratedTable {
    rows: BTreeMap<(i64, String, u64), CuratedRow>,
}

pub const HEADER: &str = "# field_d, extension_tag, conductor_norm, h_B, w_B, source_note";

impl CuratedTable {
    pub fn parse(text: &str) -> Result<CuratedTable> {
        let mut table = CuratedTable::default();
        let mut errors = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            match parse_row(trimmed) {
                Ok((key, h, w, note)) => {
                    let row = CuratedRow { line, h, w, note };
                    if let Some(old) = table.rows.get(&key) {
                        if old.h != row.h || old.w != row.w {
                            return Err(Error::Conflict {
                                key: format!("{}, {}, {}", key.0, key.1, key.2),
                                left: format!("h={} w={} (line {})", old.h, old.w, old.line),
                                right: format!("h={} w={} (line {})", row.h, row.w, line),
                            });
                        }
                        continue;
                    }
                    table.rows.insert(key, row);
                }
                Err(msg) => errors.push((line, msg)),
            }
        }
        if !errors.is_empty() {
            return Err(Error::Table(errors));
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<CuratedTable> {
        CuratedTable::parse(&std::fs::read_to_string(path)?)
    }

    pub fn get(&self, d: i64, tag: &str, conductor_norm: u64) -> Option<&CuratedRow> {
        self.rows.get(&(d, tag.to_string(), conductor_norm))
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

fn parse_row(s: &str) -> std::result::Result<((i64, String, u64), u64, u64, String), String> {
    let parts: Vec<&str> = s.splitn(6, ',').map(str::trim).collect();
    if parts.len() < 5 {
        return Err(format!("expected at least 5 fields, found {}", parts.len()));
    }
    let d: i64 = parts[0].parse().map_err(|_| format!("bad field_d {:?}", parts[0]))?;
    let tag = parts[1].to_string();
    if tag.is_empty() {
        return Err("empty extension tag".into());
    }
    let n: u64 = parts[2].parse().map_err(|_| format!("bad conductor_norm {:?}", parts[2]))?;
    let h: u64 = parts[3].parse().map_err(|_| format!("bad h_B {:?}", parts[3]))?;
    let w: u64 = parts[4].parse().map_err(|_| format!("bad w_B {:?}", parts[4]))?;
    if h == 0 {
        return Err("h_B must be positive".into());
    }
    if w <= 1 {
        return Err(format!("w_B = {w} is not a catalog member (needs w_B > 1)"));
    }
    let note = parts.get(5).map(|s| s.to_string()).unwrap_or_default();
    Ok(((d, tag, n), h, w, note))
}

/// Table text for the given catalogs, sorted by field, tag and conductor
/// norm; records with equal keys are written once.
pub fn export_catalogs<'a>(cats: impl IntoIterator<Item = &'a BCatalog>) -> String {
    let mut rows: BTreeMap<(i64, String, u64), (u64, u64, &'static str)> = BTreeMap::new();
    for cat in cats {
        for b in &cat.members {
            let note = match b.provenance {
                crate::cmorders::catalog::Provenance::Computed => "computed",
                crate::cmorders::catalog::Provenance::Curated => "curated",
            };
            rows.entry((cat.d(), b.tag.clone(), b.conductor.norm())).or_insert((b.h, b.w, note));
        }
    }
    let mut out = String::from(HEADER);
    out.push('\n');
    for ((d, tag, n), (h, w, note)) in rows {
        out.push_str(&format!("{d}, {tag}, {n}, {h}, {w}, {note}\n"));
    }
    out
}

pub fn export_to_path<'a>(cats: impl IntoIterator<Item = &'a BCatalog>, path: &Path) -> Result<()> {
    std::fs::write(path, export_catalogs(cats))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_reject() {
        let t = CuratedTable::parse("# header\n7, F(i), 1, 1, 4, note\n\n1, F(i), 1, 1, 2\n").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.get(7, "F(i)", 1).unwrap().w, 4);
        match CuratedTable::parse("7, F(i), 1, 1, 1, x\nnonsense\n") {
            Err(Error::Table(rows)) => assert_eq!(rows.iter().map(|r| r.0).collect::<Vec<_>>(), vec![1, 2]),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(CuratedTable::parse("7, F(i), 1, 1, 4\n7, F(i), 1, 2, 4\n"), Err(Error::Conflict { .. })));
    }
}
