use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use super::{atomic_write, parse_error, read_to_string};
use crate::model::{GridShape, WellSet, WellTemplate};
use crate::Result;

/// Tab-separated `well_id x y z porosity`, preceded by `#` lines naming the
/// template, the placement offset and the grid the coordinates refer to.
pub fn render_well_set(ws: &WellSet, shape: GridShape) -> String {
    let mut out = String::new();
    let (dx, dy) = ws.offset();
    let _ = writeln!(out, "# template\t{}", ws.template().name());
    let _ = writeln!(out, "# offset\t{dx}\t{dy}");
    let _ = writeln!(out, "# grid\t{}\t{}\t{}", shape.nx, shape.ny, shape.nz);
    out.push_str("well_id\tx\ty\tz\tporosity\n");
    for (w, ((x, y), column)) in ws.positions().into_iter().zip(ws.data()).enumerate() {
        for (z, v) in column.iter().enumerate() {
            let _ = writeln!(out, "{w}\t{x}\t{y}\t{z}\t{v}");
        }
    }
    out
}

pub fn write_well_set(ws: &WellSet, shape: GridShape, path: &Path) -> Result<()> {
    atomic_write(path, render_well_set(ws, shape).as_bytes())
}

/// Reads a well file written for `template`. The rows must describe the
/// template placed at the recorded offset, inside the recorded grid.
pub fn read_well_set(path: &Path, template: &Arc<WellTemplate>) -> Result<WellSet> {
    let text = read_to_string(path)?;
    let err = |line, msg: String| parse_error(path, line, msg);
    let mut offset = None;
    let mut shape = None;
    let mut header_seen = false;
    let mut data: Vec<Vec<f64>> = vec![Vec::new(); template.n_wells()];
    let mut last = 0;
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        last = ln;
        let fields: Vec<&str> = line.split('\t').collect();
        if let Some(meta) = line.strip_prefix("# ") {
            let parts: Vec<&str> = meta.split('\t').collect();
            let ints = |p: &[&str]| -> std::result::Result<Vec<i64>, String> {
                p.iter().map(|t| t.parse::<i64>().map_err(|e| e.to_string())).collect()
            };
            match parts[0] {
                "template" if parts.get(1) == Some(&template.name()) => {}
                "template" => return Err(err(ln, format!("file is for template {:?}", parts.get(1)))),
                "offset" => {
                    let v = ints(&parts[1..]).map_err(|e| err(ln, e))?;
                    if v.len() != 2 {
                        return Err(err(ln, "offset needs dx and dy".into()));
                    }
                    offset = Some((v[0], v[1]));
                }
                "grid" => {
                    let v = ints(&parts[1..]).map_err(|e| err(ln, e))?;
                    if v.len() != 3 || v.iter().any(|&d| d <= 0) {
                        return Err(err(ln, "grid needs three positive counts".into()));
                    }
                    shape = Some(GridShape::new(v[0] as usize, v[1] as usize, v[2] as usize)?);
                }
                other => return Err(err(ln, format!("unknown metadata {other:?}"))),
            }
            continue;
        }
        if !header_seen {
            if fields != ["well_id", "x", "y", "z", "porosity"] {
                return Err(err(ln, format!("unexpected header {line:?}")));
            }
            header_seen = true;
            continue;
        }
        if fields.len() != 5 {
            return Err(err(ln, format!("expected 5 fields, found {}", fields.len())));
        }
        let (Some(offset), Some(shape)) = (offset, shape) else {
            return Err(err(ln, "offset and grid metadata must precede the rows".into()));
        };
        let int = |s: &str| s.parse::<i64>().map_err(|e| err(ln, format!("{s:?}: {e}")));
        let (w, x, y, z) = (int(fields[0])?, int(fields[1])?, int(fields[2])?, int(fields[3])?);
        let v: f64 = fields[4].parse().map_err(|e| err(ln, format!("{:?}: {e}", fields[4])))?;
        let col = usize::try_from(w)
            .ok()
            .and_then(|w| template.columns().get(w).map(|c| (w, *c)))
            .ok_or_else(|| err(ln, format!("well id {w} not in template")))?;
        if (x, y) != (col.1 .0 + offset.0, col.1 .1 + offset.1) {
            return Err(err(ln, format!("well {w} at ({x}, {y}) does not match the template placement")));
        }
        if shape.checked_index(x, y, z).is_none() {
            return Err(err(ln, format!("({x}, {y}, {z}) outside the {shape} grid")));
        }
        if z as usize != data[col.0].len() {
            return Err(err(ln, format!("well {w}: expected z = {}, found {z}", data[col.0].len())));
        }
        data[col.0].push(v);
    }
    let offset = offset.ok_or_else(|| err(last, "missing offset metadata".into()))?;
    let shape = shape.ok_or_else(|| err(last, "missing grid metadata".into()))?;
    if data.iter().any(|c| c.len() != shape.nz) {
        return Err(err(last + 1, format!("every well needs {} levels", shape.nz)));
    }
    WellSet::from_parts(Arc::clone(template), offset, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.tsv");
        let t = Arc::new(WellTemplate::new("W3", vec![(1, 1), (4, 2)]).unwrap());
        let ws = WellSet::from_parts(Arc::clone(&t), (2, -1), vec![vec![10.25, 11.0], vec![0.1, 30.0]]).unwrap();
        let shape = GridShape::new(8, 4, 2).unwrap();
        write_well_set(&ws, shape, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.contains("0\t3\t0\t1\t11\n"));
        assert_eq!(read_well_set(&path, &t).unwrap(), ws);
    }

    #[test]
    fn rejects_foreign_and_truncated_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.tsv");
        let t = Arc::new(WellTemplate::new("W3", vec![(1, 1), (4, 2)]).unwrap());
        let ws = WellSet::from_parts(Arc::clone(&t), (0, 0), vec![vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let shape = GridShape::new(8, 4, 2).unwrap();
        let text = render_well_set(&ws, shape);

        let other = Arc::new(WellTemplate::new("W5", vec![(1, 1), (4, 2)]).unwrap());
        std::fs::write(&path, &text).unwrap();
        assert!(read_well_set(&path, &other).is_err());

        let truncated: String = text.lines().take(6).map(|l| format!("{l}\n")).collect();
        std::fs::write(&path, truncated).unwrap();
        assert!(read_well_set(&path, &t).is_err());

        std::fs::write(&path, text.replace("# grid\t8\t4\t2", "# grid\t3\t4\t2")).unwrap();
        assert!(read_well_set(&path, &t).is_err());
    }
}
