//! Plain-text snapshot and CSV output.
//!
//! Snapshot files carry a one-line header
//! `levelset d n_a n_x... y_min y_max` (or `conserved d n_y n_x... y_min
//! y_max`) followed by one x-column of values per line in flattened cell
//! order. Floats are written with Rust's shortest round-trip formatting,
//! so re-running a fixed-seed experiment byte-reproduces every file.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::diagnostics::CheckRow;
use crate::error::{Error, Result};
use crate::fields::{ConservedField, LevelSetField};
use crate::grid::{AGrid, XGrid, YGrid};
use crate::scheme::DiagRow;

fn write_columns<W: Write>(
    w: &mut W,
    n_cols: usize,
    col_len: usize,
    values: &[f64],
) -> Result<()> {
    for j in 0..n_cols {
        let col = &values[j * col_len..(j + 1) * col_len];
        let mut line = String::with_capacity(col_len * 20);
        for (i, v) in col.iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            line.push_str(&format!("{v}"));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Writes a level-set snapshot; the trailing header pair records the
/// value range of the field.
pub fn write_level_snapshot(path: &Path, y: &LevelSetField) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let shape: Vec<String> = y.xgrid.shape().iter().map(|n| n.to_string()).collect();
    writeln!(
        w,
        "levelset {} {} {} {} {}",
        y.xgrid.dim(),
        y.agrid.n_a,
        shape.join(" "),
        y.min(),
        y.max()
    )?;
    write_columns(&mut w, y.xgrid.n_cells(), y.agrid.n_a, y.values())?;
    w.flush()?;
    Ok(())
}

/// Writes a conserved-field snapshot; the trailing header pair records
/// the y-grid bounds.
pub fn write_conserved_snapshot(path: &Path, u: &ConservedField) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let shape: Vec<String> = u.xgrid.shape().iter().map(|n| n.to_string()).collect();
    writeln!(
        w,
        "conserved {} {} {} {} {}",
        u.xgrid.dim(),
        u.ygrid.n_y,
        shape.join(" "),
        u.ygrid.y_min,
        u.ygrid.y_max
    )?;
    write_columns(&mut w, u.xgrid.n_cells(), u.ygrid.n_y, u.values())?;
    w.flush()?;
    Ok(())
}

struct SnapshotHeader {
    tag: String,
    dim: usize,
    col_len: usize,
    shape: Vec<usize>,
    y_min: f64,
    y_max: f64,
}

fn parse_header(line: &str, path: &Path) -> Result<SnapshotHeader> {
    let bad = |msg: &str| Error::Config(format!("{}: {msg}: '{line}'", path.display()));
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() < 5 {
        return Err(bad("truncated snapshot header"));
    }
    let tag = toks[0].to_string();
    if tag != "levelset" && tag != "conserved" {
        return Err(bad("unknown snapshot tag"));
    }
    let dim: usize = toks[1].parse().map_err(|_| bad("bad dimension"))?;
    if dim != 1 && dim != 2 || toks.len() != 5 + dim {
        return Err(bad("header length does not match dimension"));
    }
    let col_len: usize = toks[2].parse().map_err(|_| bad("bad column length"))?;
    let mut shape = Vec::new();
    for t in &toks[3..3 + dim] {
        shape.push(t.parse().map_err(|_| bad("bad grid size"))?);
    }
    let y_min: f64 = toks[3 + dim].parse().map_err(|_| bad("bad y_min"))?;
    let y_max: f64 = toks[4 + dim].parse().map_err(|_| bad("bad y_max"))?;
    Ok(SnapshotHeader {
        tag,
        dim,
        col_len,
        shape,
        y_min,
        y_max,
    })
}

fn read_snapshot(path: &Path) -> Result<(SnapshotHeader, Vec<f64>)> {
    let mut lines = BufReader::new(File::open(path)?).lines();
    let header_line = lines
        .next()
        .ok_or_else(|| Error::Config(format!("{}: empty snapshot file", path.display())))??;
    let header = parse_header(&header_line, path)?;
    let n_cols: usize = header.shape.iter().product();
    let mut values = Vec::with_capacity(n_cols * header.col_len);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        for tok in line.split_whitespace() {
            values.push(tok.parse().map_err(|_| {
                Error::Config(format!("{}: bad value '{tok}'", path.display()))
            })?);
        }
    }
    if values.len() != n_cols * header.col_len {
        return Err(Error::Config(format!(
            "{}: expected {} values, found {}",
            path.display(),
            n_cols * header.col_len,
            values.len()
        )));
    }
    Ok((header, values))
}

pub fn read_level_snapshot(path: &Path) -> Result<LevelSetField> {
    let (header, values) = read_snapshot(path)?;
    if header.tag != "levelset" {
        return Err(Error::Config(format!(
            "{}: expected a levelset snapshot, found '{}'",
            path.display(),
            header.tag
        )));
    }
    let ag = AGrid::new(header.col_len)?;
    let xg = XGrid::new(&header.shape)?;
    debug_assert_eq!(xg.dim(), header.dim);
    LevelSetField::from_values(ag, xg, values)
}

pub fn read_conserved_snapshot(path: &Path) -> Result<ConservedField> {
    let (header, values) = read_snapshot(path)?;
    if header.tag != "conserved" {
        return Err(Error::Config(format!(
            "{}: expected a conserved snapshot, found '{}'",
            path.display(),
            header.tag
        )));
    }
    let yg = YGrid::new(header.y_min, header.y_max, header.col_len)?;
    let xg = XGrid::new(&header.shape)?;
    ConservedField::from_values(yg, xg, values)
}

pub fn write_diag_csv(path: &Path, rows: &[DiagRow]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "step,t,l1,l2,min,max,tv_x,entropy_residual")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.step, r.t, r.l1, r.l2, r.min, r.max, r.tv_x, r.entropy_residual
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_checks_csv(path: &Path, rows: &[CheckRow]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "check,param,t,lhs,rhs,margin,pass")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.check, r.param, r.t, r.lhs, r.rhs, r.margin, r.pass
        )?;
    }
    w.flush()?;
    Ok(())
}

/// One line of a convergence study: `n_x,n_a,h,l1_error,l1_error_oracle`.
#[derive(Debug, Clone)]
pub struct ErrorRow {
    pub n_x: usize,
    pub n_a: usize,
    pub h: f64,
    pub l1_error: f64,
    pub l1_error_oracle: f64,
}

pub fn write_errors_csv(path: &Path, rows: &[ErrorRow]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "n_x,n_a,h,l1_error,l1_error_oracle")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.n_x, r.n_a, r.h, r.l1_error, r.l1_error_oracle
        )?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_level(seed: u64, n_a: usize, shape: &[usize]) -> LevelSetField {
        let ag = AGrid::new(n_a).unwrap();
        let xg = XGrid::new(shape).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut vals = Vec::new();
        for _ in 0..xg.n_cells() {
            let mut col: Vec<f64> = (0..n_a).map(|_| rng.gen_range(-0.4..2.4)).collect();
            col.sort_by(f64::total_cmp);
            vals.extend(col);
        }
        LevelSetField::from_values(ag, xg, vals).unwrap()
    }

    #[test]
    fn level_snapshot_round_trip_1d_and_2d() {
        let dir = tempfile::tempdir().unwrap();
        for (seed, shape) in [(1u64, vec![8usize]), (2, vec![4, 6])] {
            let y = random_level(seed, 5, &shape);
            let path = dir.path().join("y.snap");
            write_level_snapshot(&path, &y).unwrap();
            let back = read_level_snapshot(&path).unwrap();
            assert_eq!(y, back);
        }
    }

    #[test]
    fn conserved_snapshot_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let yg = YGrid::new(-0.5, 2.5, 16).unwrap();
        let y = random_level(3, 16, &[6]);
        let u = y.to_conserved(&yg).unwrap();
        let path = dir.path().join("u.snap");
        write_conserved_snapshot(&path, &u).unwrap();
        let back = read_conserved_snapshot(&path).unwrap();
        assert_eq!(u, back);
    }

    #[test]
    fn snapshot_writes_are_reproducible() {
        let dir = tempfile::tempdir().unwrap();
        let y = random_level(4, 12, &[10]);
        let p1 = dir.path().join("a.snap");
        let p2 = dir.path().join("b.snap");
        write_level_snapshot(&p1, &y).unwrap();
        write_level_snapshot(&p2, &y).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    }

    #[test]
    fn header_is_as_documented() {
        let dir = tempfile::tempdir().unwrap();
        let ag = AGrid::new(3).unwrap();
        let xg = XGrid::new(&[2, 2]).unwrap();
        let y = LevelSetField::from_fn(ag, xg, |a, _| a);
        let path = dir.path().join("h.snap");
        write_level_snapshot(&path, &y).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let first = text.lines().next().unwrap();
        assert!(first.starts_with("levelset 2 3 2 2 "));
        // one x-column per line
        assert_eq!(text.lines().count(), 1 + 4);
    }

    #[test]
    fn rejects_malformed_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.snap");
        std::fs::write(&path, "levelset 1 3 4 0 1\n0 0 0\n").unwrap();
        assert!(read_level_snapshot(&path).is_err()); // value count mismatch
        std::fs::write(&path, "wavelet 1 3 4 0 1\n").unwrap();
        assert!(read_level_snapshot(&path).is_err());
        std::fs::write(&path, "").unwrap();
        assert!(read_level_snapshot(&path).is_err());
    }

    #[test]
    fn csv_headers_match_contract() {
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path().join("diag.csv");
        write_diag_csv(&d, &[]).unwrap();
        assert_eq!(
            std::fs::read_to_string(&d).unwrap(),
            "step,t,l1,l2,min,max,tv_x,entropy_residual\n"
        );
        let c = dir.path().join("checks.csv");
        write_checks_csv(&c, &[]).unwrap();
        assert_eq!(
            std::fs::read_to_string(&c).unwrap(),
            "check,param,t,lhs,rhs,margin,pass\n"
        );
        let e = dir.path().join("errors.csv");
        write_errors_csv(
            &e,
            &[ErrorRow {
                n_x: 100,
                n_a: 50,
                h: 0.01,
                l1_error: 0.02,
                l1_error_oracle: 0.03,
            }],
        )
        .unwrap();
        assert_eq!(
            std::fs::read_to_string(&e).unwrap(),
            "n_x,n_a,h,l1_error,l1_error_oracle\n100,50,0.01,0.02,0.03\n"
        );
    }
}
