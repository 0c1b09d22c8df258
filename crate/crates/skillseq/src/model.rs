//! Versioned text format for trained skill libraries.
//!
//! Per skill: a header block with bounds, projection seed and the three grid
//! specs, followed by dense cell tables (one line per cell). Floats are
//! written with Rust's shortest round-trip representation, so save → load
//! reproduces the library exactly and saving is byte-deterministic.
//!
//! ```text
//! skillseq-model 1
//! skills 1
//! skill pick
//! bounds 1 -0.2 0.2
//! projection_seed 42
//! q.grid 2
//! axis s0.x 16 0.05 0.9
//! axis a0 40 -0.2 0.2
//! q.table 640 5 0
//! q 1 1 1 1 1 12 10 14 11 12
//! …
//! policy.grid 1
//! axis s0.x 16 0.05 0.9
//! policy.table 16
//! g 0.01 0.02
//! …
//! dynamics.grid …
//! dynamics.table 320 2 42
//! d 3 0 0 … 0
//! …
//! end
//! ```
//!
//! `q` rows hold the E member means then the E visit counts; `g` rows hold
//! the Gaussian mean then std, or `-` for the uniform fallback; the
//! `dynamics.table` header gives cells, arity and projection seed, and each
//! `d` row a visit count then arity × 11 mean deltas.

use std::fmt::Write as _;
use std::path::Path;

use skillseq_core::skills::{
    DynamicsModel, FeatureGrid, Gaussian, GridAxis, QFunction, QMember, SkillLibrary, SkillLibraryEntry, SkillPolicy,
};
use skillseq_core::world::{ActionBounds, SkillId, FEATURES_PER_OBJECT};

use crate::error::{read_to_string, write_file, CliError, Result};
use crate::features::{feature_name, parse_feature};

pub const MAGIC: &str = "skillseq-model";
pub const VERSION: u32 = 1;

fn push_floats(out: &mut String, xs: &[f64]) {
    for x in xs {
        write!(out, " {x:?}").expect("writing to a String");
    }
}

fn write_grid(out: &mut String, key: &str, grid: &FeatureGrid) {
    writeln!(out, "{key} {}", grid.axes.len()).unwrap();
    for a in &grid.axes {
        writeln!(out, "axis {} {} {:?} {:?}", feature_name(a.feature), a.bins, a.lo, a.hi).unwrap();
    }
}

fn write_entry(out: &mut String, e: &SkillLibraryEntry) {
    writeln!(out, "skill {}", e.skill.name()).unwrap();
    write!(out, "bounds {}", e.bounds.dim()).unwrap();
    for d in 0..e.bounds.dim() {
        push_floats(out, &[e.bounds.lo[d], e.bounds.hi[d]]);
    }
    out.push('\n');
    writeln!(out, "projection_seed {}", e.projection_seed).unwrap();

    write_grid(out, "q.grid", &e.q.grid);
    let cells = e.q.grid.n_cells();
    writeln!(out, "q.table {cells} {} {:?}", e.q.members.len(), e.q.prior_value).unwrap();
    for c in 0..cells {
        out.push('q');
        for m in &e.q.members {
            write!(out, " {:?}", m.values[c]).unwrap();
        }
        for m in &e.q.members {
            write!(out, " {}", m.counts[c]).unwrap();
        }
        out.push('\n');
    }

    write_grid(out, "policy.grid", &e.policy.grid);
    writeln!(out, "policy.table {}", e.policy.cells.len()).unwrap();
    for cell in &e.policy.cells {
        match cell {
            Some(g) => {
                out.push('g');
                push_floats(out, &g.mean);
                push_floats(out, &g.std);
            }
            None => out.push_str("g -"),
        }
        out.push('\n');
    }

    let d = &e.dynamics;
    write_grid(out, "dynamics.grid", &d.grid);
    let width = d.arity * FEATURES_PER_OBJECT;
    writeln!(out, "dynamics.table {} {} {}", d.counts.len(), d.arity, d.projection_seed).unwrap();
    for (c, count) in d.counts.iter().enumerate() {
        write!(out, "d {count}").unwrap();
        push_floats(out, &d.deltas[c * width..(c + 1) * width]);
        out.push('\n');
    }
    out.push_str("end\n");
}

/// Serialise a library. Skills appear in their canonical order.
pub fn to_text(lib: &SkillLibrary) -> String {
    let mut out = String::new();
    writeln!(out, "{MAGIC} {VERSION}").unwrap();
    writeln!(out, "skills {}", lib.len()).unwrap();
    for e in lib.entries() {
        write_entry(&mut out, e);
    }
    out
}

struct Reader<'a> {
    source: &'a str,
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Reader<'a> {
    fn new(source: &'a str, text: &'a str) -> Self {
        Self {
            source,
            lines: text.lines().enumerate(),
            line: 0,
        }
    }

    fn err(&self, msg: impl Into<String>) -> CliError {
        CliError::format(self.source, self.line, msg)
    }

    /// Next non-blank line, split on whitespace.
    fn next(&mut self) -> Result<Vec<&'a str>> {
        for (i, l) in self.lines.by_ref() {
            self.line = i + 1;
            let toks: Vec<&str> = l.split_whitespace().collect();
            if !toks.is_empty() {
                return Ok(toks);
            }
        }
        Err(self.err("unexpected end of file"))
    }

    /// Next line, which must start with `key`; returns the remaining tokens.
    fn expect(&mut self, key: &str) -> Result<Vec<&'a str>> {
        let toks = self.next()?;
        if toks[0] != key {
            return Err(self.err(format!("expected `{key}`, found `{}`", toks[0])));
        }
        Ok(toks[1..].to_vec())
    }

    fn parse<T: std::str::FromStr>(&self, tok: &str, what: &str) -> Result<T> {
        tok.parse().map_err(|_| self.err(format!("bad {what} `{tok}`")))
    }

    fn count(&self, toks: &[&str], n: usize) -> Result<()> {
        if toks.len() != n {
            return Err(self.err(format!("expected {n} fields, found {}", toks.len())));
        }
        Ok(())
    }

    fn floats(&self, toks: &[&str]) -> Result<Vec<f64>> {
        toks.iter().map(|t| self.parse(t, "number")).collect()
    }

    fn grid(&mut self, key: &str) -> Result<FeatureGrid> {
        let toks = self.expect(key)?;
        self.count(&toks, 1)?;
        let n: usize = self.parse(toks[0], "axis count")?;
        let mut axes = Vec::with_capacity(n);
        for _ in 0..n {
            let t = self.expect("axis")?;
            self.count(&t, 4)?;
            let feature = parse_feature(t[0]).ok_or_else(|| self.err(format!("unknown feature `{}`", t[0])))?;
            let bins: usize = self.parse(t[1], "bin count")?;
            if bins == 0 {
                return Err(self.err("axis needs at least one bin"));
            }
            axes.push(GridAxis {
                feature,
                bins,
                lo: self.parse(t[2], "axis bound")?,
                hi: self.parse(t[3], "axis bound")?,
            });
        }
        Ok(FeatureGrid::new(axes))
    }

    fn entry(&mut self) -> Result<SkillLibraryEntry> {
        let t = self.expect("skill")?;
        self.count(&t, 1)?;
        let skill = SkillId::from_name(t[0]).ok_or_else(|| self.err(format!("unknown skill `{}`", t[0])))?;

        let t = self.expect("bounds")?;
        let dim: usize = self.parse(t.first().copied().unwrap_or(""), "dimension")?;
        self.count(&t, 1 + 2 * dim)?;
        let v = self.floats(&t[1..])?;
        let bounds = ActionBounds {
            lo: v.iter().step_by(2).copied().collect(),
            hi: v.iter().skip(1).step_by(2).copied().collect(),
        };
        let t = self.expect("projection_seed")?;
        self.count(&t, 1)?;
        let projection_seed: u64 = self.parse(t[0], "seed")?;

        let qgrid = self.grid("q.grid")?;
        let t = self.expect("q.table")?;
        self.count(&t, 3)?;
        let cells: usize = self.parse(t[0], "cell count")?;
        let e: usize = self.parse(t[1], "ensemble size")?;
        let prior_value: f64 = self.parse(t[2], "prior")?;
        if cells != qgrid.n_cells() {
            return Err(self.err(format!("q.table has {cells} cells, grid has {}", qgrid.n_cells())));
        }
        let mut members: Vec<QMember> = (0..e)
            .map(|_| QMember {
                values: Vec::with_capacity(cells),
                counts: Vec::with_capacity(cells),
            })
            .collect();
        for _ in 0..cells {
            let t = self.expect("q")?;
            self.count(&t, 2 * e)?;
            for (k, m) in members.iter_mut().enumerate() {
                m.values.push(self.parse(t[k], "value")?);
                m.counts.push(self.parse(t[e + k], "count")?);
            }
        }
        let q = QFunction {
            grid: qgrid,
            members,
            prior_value,
        };

        let pgrid = self.grid("policy.grid")?;
        let t = self.expect("policy.table")?;
        self.count(&t, 1)?;
        let n: usize = self.parse(t[0], "cell count")?;
        if n != pgrid.n_cells() {
            return Err(self.err(format!("policy.table has {n} cells, grid has {}", pgrid.n_cells())));
        }
        let mut pcells = Vec::with_capacity(n);
        for _ in 0..n {
            let t = self.expect("g")?;
            if t == ["-"] {
                pcells.push(None);
                continue;
            }
            self.count(&t, 2 * bounds.dim())?;
            let v = self.floats(&t)?;
            pcells.push(Some(Gaussian {
                mean: v[..bounds.dim()].to_vec(),
                std: v[bounds.dim()..].to_vec(),
            }));
        }
        let policy = SkillPolicy {
            grid: pgrid,
            bounds: bounds.clone(),
            cells: pcells,
        };

        let dgrid = self.grid("dynamics.grid")?;
        let t = self.expect("dynamics.table")?;
        self.count(&t, 3)?;
        let n: usize = self.parse(t[0], "cell count")?;
        let arity: usize = self.parse(t[1], "arity")?;
        let dseed: u64 = self.parse(t[2], "seed")?;
        if n != dgrid.n_cells() {
            return Err(self.err(format!("dynamics.table has {n} cells, grid has {}", dgrid.n_cells())));
        }
        let width = arity * FEATURES_PER_OBJECT;
        let mut deltas = Vec::with_capacity(n * width);
        let mut counts = Vec::with_capacity(n);
        for _ in 0..n {
            let t = self.expect("d")?;
            self.count(&t, 1 + width)?;
            counts.push(self.parse(t[0], "count")?);
            deltas.extend(self.floats(&t[1..])?);
        }
        let dynamics = DynamicsModel {
            grid: dgrid,
            arity,
            projection_seed: dseed,
            deltas,
            counts,
        };
        self.expect("end")?;
        Ok(SkillLibraryEntry {
            skill,
            bounds,
            projection_seed,
            q,
            policy,
            dynamics,
        })
    }
}

/// Parse a library; `source` names the input in error messages.
pub fn from_text(source: &str, text: &str) -> Result<SkillLibrary> {
    let mut r = Reader::new(source, text);
    let t = r.expect(MAGIC)?;
    r.count(&t, 1)?;
    let version: u32 = r.parse(t[0], "version")?;
    if version != VERSION {
        return Err(r.err(format!("unsupported model version {version} (expected {VERSION})")));
    }
    let t = r.expect("skills")?;
    r.count(&t, 1)?;
    let n: usize = r.parse(t[0], "skill count")?;
    let mut lib = SkillLibrary::new();
    for _ in 0..n {
        let entry = r.entry()?;
        let skill = entry.skill;
        lib.insert(entry)
            .map_err(|_| r.err(format!("skill {skill} appears twice")))?;
    }
    if let Ok(t) = r.next() {
        return Err(r.err(format!("trailing content `{}`", t[0])));
    }
    Ok(lib)
}

pub fn save(path: impl AsRef<Path>, lib: &SkillLibrary) -> Result<()> {
    write_file(path, to_text(lib))
}

pub fn load(path: impl AsRef<Path>) -> Result<SkillLibrary> {
    let path = path.as_ref();
    from_text(&path.display().to_string(), &read_to_string(path)?)
}
