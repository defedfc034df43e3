use std::fmt::Write as _;
use std::path::Path;

use super::{atomic_write, parse_error, read_to_string};
use crate::model::{Grid3D, GridShape};
use crate::Result;

/// GSLIB-style text: a title line, then `nvar nx ny nz` (plain GSLIB
/// readers take the first token and skip the rest), one line per variable
/// name, and one line per cell in x-fastest order. Masked grids carry a
/// second `active` column of 1/0 flags.
pub fn render_grid(grid: &Grid3D, title: &str) -> String {
    let s = grid.shape();
    let mut out = String::with_capacity(s.len() * 20 + 64);
    let nvar = if grid.mask().is_some() { 2 } else { 1 };
    let _ = writeln!(out, "{title}");
    let _ = writeln!(out, "{nvar} {} {} {}", s.nx, s.ny, s.nz);
    out.push_str("porosity\n");
    match grid.mask() {
        None => {
            for v in grid.values() {
                let _ = writeln!(out, "{v}");
            }
        }
        Some(mask) => {
            out.push_str("active\n");
            for (v, a) in grid.values().iter().zip(mask) {
                let _ = writeln!(out, "{v} {}", u8::from(*a));
            }
        }
    }
    out
}

pub fn write_grid(grid: &Grid3D, path: &Path) -> Result<()> {
    let title = path.file_stem().and_then(|s| s.to_str()).unwrap_or("grid");
    atomic_write(path, render_grid(grid, title).as_bytes())
}

pub fn read_grid(path: &Path) -> Result<Grid3D> {
    parse_grid(&read_to_string(path)?, path)
}

/// Parses grid text; `path` only labels errors.
pub fn parse_grid(text: &str, path: &Path) -> Result<Grid3D> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let err = |line, msg: String| parse_error(path, line, msg);

    lines.next().ok_or_else(|| err(1, "missing title line".into()))?;
    let (ln, header) = lines.next().ok_or_else(|| err(2, "missing header line".into()))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .take(4)
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| err(ln, format!("bad header {header:?}: {e}")))?;
    if nums.len() != 4 {
        return Err(err(ln, format!("header {header:?} must hold nvar nx ny nz")));
    }
    let nvar = nums[0];
    if !(1..=2).contains(&nvar) {
        return Err(err(ln, format!("expected 1 or 2 variables, found {nvar}")));
    }
    let shape = GridShape::new(nums[1], nums[2], nums[3]).map_err(|e| err(ln, e.to_string()))?;
    let mut names = Vec::with_capacity(nvar);
    for i in 0..nvar {
        let (ln, name) = lines.next().ok_or_else(|| err(ln + 1 + i, "missing variable name".into()))?;
        names.push((ln, name.trim()));
    }
    if nvar == 2 && names[1].1 != "active" {
        return Err(err(names[1].0, format!("second variable must be \"active\", found {:?}", names[1].1)));
    }
    let mut last_line = ln + nvar;

    let n = shape.len();
    let mut values = Vec::with_capacity(n);
    let mut mask = (nvar == 2).then(|| Vec::with_capacity(n));
    for (ln, line) in lines.by_ref() {
        last_line = ln;
        if values.len() == n {
            if line.trim().is_empty() {
                continue;
            }
            return Err(err(ln, format!("more than {n} values for a {shape} grid")));
        }
        let mut tok = line.split_whitespace();
        let v: f64 = tok
            .next()
            .ok_or_else(|| err(ln, "empty line".into()))?
            .parse()
            .map_err(|e| err(ln, format!("{e}")))?;
        values.push(v);
        if let Some(mask) = mask.as_mut() {
            let a = match tok.next() {
                Some("1") => true,
                Some("0") => false,
                other => return Err(err(ln, format!("bad active flag {other:?}"))),
            };
            mask.push(a);
        }
        if tok.next().is_some() {
            return Err(err(ln, format!("expected {nvar} value(s) per line")));
        }
    }
    if values.len() < n {
        return Err(err(
            last_line + 1,
            format!("expected {n} values for a {shape} grid, found {}", values.len()),
        ));
    }
    Grid3D::with_mask(shape, values, mask).map_err(|e| err(last_line, e.to_string()))
}
