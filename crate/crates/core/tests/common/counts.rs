//! Instance sizes against the reference table.

use std::io::{self, Write};

use rayon::prelude::*;
use setsat::emit_dimacs;
use setsat::report::{column_size, Column, Size, REFERENCE};
use setsat::sgp::{build_instance, SgpConfig, SgpVariant};

/// A cell where the generator disagrees with the reference table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub config: SgpConfig,
    pub column: Column,
    pub ours: Size,
    pub reference: Size,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {}: {}/{} vs reference {}/{}",
            self.column.name(),
            self.config,
            self.ours.0,
            self.ours.1,
            self.reference.0,
            self.reference.1
        )
    }
}

/// Compares `columns` on all fourteen configurations.
pub fn compare(columns: &[Column]) -> Vec<Mismatch> {
    let jobs: Vec<_> = REFERENCE
        .iter()
        .flat_map(|row| columns.iter().map(move |&c| (row, c)))
        .collect();
    jobs.par_iter()
        .filter_map(|&(row, column)| {
            let config = row.sgp_config();
            let ours = column_size(config, column).expect("instance builds");
            let reference = row.get(column);
            (ours != reference).then_some(Mismatch {
                config,
                column,
                ours,
                reference,
            })
        })
        .collect()
}

/// Reads the header and counts clause lines without keeping them.
#[derive(Default)]
struct Tally {
    current: Vec<u8>,
    header: Option<String>,
    clauses: usize,
}

impl Write for Tally {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        for &b in buf {
            if b != b'\n' {
                if self.current.len() < 64 {
                    self.current.push(b);
                }
                continue;
            }
            match (self.current.first(), &self.header) {
                (Some(b'c'), _) => {}
                (_, None) => {
                    self.header = Some(String::from_utf8_lossy(&self.current).into_owned())
                }
                _ => self.clauses += 1,
            }
            self.current.clear();
        }
        Ok(buf.len())
    }

    fn flush(&mut self) -> io::Result<()> {
        Ok(())
    }
}

/// Stores the instance, writes it as DIMACS and checks the header and the
/// number of clause lines against the expected size.
pub fn materialize(config: SgpConfig, variant: SgpVariant, expected: Size) -> Result<(), String> {
    let inst = build_instance(config, variant).map_err(|e| e.to_string())?;
    let mut t = Tally::default();
    emit_dimacs(&inst.formula, &mut t).map_err(|e| e.to_string())?;
    let header = t.header.unwrap_or_default();
    let want = format!("p cnf {} {}", expected.0, expected.1);
    if header != want {
        return Err(format!("{config}: header `{header}`, expected `{want}`"));
    }
    if t.clauses != expected.1 {
        return Err(format!(
            "{config}: {} clause lines, expected {}",
            t.clauses, expected.1
        ));
    }
    Ok(())
}
