//! CSV export/import of vertex fields.
//!
//! Schema: comma-separated, one header row, LF line endings, numeric cells
//! formatted with 17 significant digits (`{:.16e}`), which round-trips f64
//! exactly. Solution fields use the columns `x,y,u,grad_norm,boundary_flag`;
//! derived scalar fields (Φ, directional derivatives) append one extra
//! column. `boundary_flag` is 0 or 1.

use std::io::Write;
use std::path::Path;

use thiserror::Error;

use crate::geometry::Point2;
use crate::solver::SolutionField;

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed CSV at {path}:{line}: {message}")]
    Malformed {
        path: String,
        line: usize,
        message: String,
    },
    #[error("CSV {path} has no data rows")]
    Empty { path: String },
}

/// 17-significant-digit decimal formatting; round-trips any f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// A field loaded back from CSV: points, named columns, boundary flags.
#[derive(Clone, Debug)]
pub struct FieldTable {
    pub points: Vec<Point2>,
    pub boundary: Vec<bool>,
    /// Column names beyond x, y and boundary_flag, in file order.
    pub column_names: Vec<String>,
    /// One vector per named column.
    pub columns: Vec<Vec<f64>>,
}

impl FieldTable {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.column_names
            .iter()
            .position(|c| c == name)
            .map(|i| self.columns[i].as_slice())
    }
}

/// Write a solution field, optionally with one extra named column.
pub fn write_solution_csv(
    path: &Path,
    solution: &SolutionField,
    extra: Option<(&str, &[f64])>,
) -> Result<(), CsvError> {
    let mesh = solution.mesh();
    let q = solution.gradient_norms();
    let mut out = String::new();
    out.push_str("x,y,u,grad_norm,boundary_flag");
    if let Some((name, _)) = extra {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for v in 0..mesh.vertex_count() {
        let p = mesh.vertices[v];
        out.push_str(&fmt17(p.x));
        out.push(',');
        out.push_str(&fmt17(p.y));
        out.push(',');
        out.push_str(&fmt17(solution.values()[v]));
        out.push(',');
        out.push_str(&fmt17(q[v]));
        out.push(',');
        out.push(if mesh.is_boundary[v] { '1' } else { '0' });
        if let Some((_, col)) = extra {
            out.push(',');
            out.push_str(&fmt17(col[v]));
        }
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

/// Write an arbitrary table with the same formatting conventions.
pub fn write_table_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<(), CsvError> {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| fmt17(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CsvError> {
    let io_err = |source| CsvError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut f = std::fs::File::create(path).map_err(io_err)?;
    f.write_all(bytes).map_err(io_err)?;
    Ok(())
}

/// Read a field CSV in the documented schema back into memory.
pub fn read_field_csv(path: &Path) -> Result<FieldTable, CsvError> {
    let text = std::fs::read_to_string(path).map_err(|source| CsvError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let path_str = path.display().to_string();
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| CsvError::Empty {
        path: path_str.clone(),
    })?;
    let names: Vec<&str> = header.split(',').collect();
    let xi = position(&names, "x", &path_str)?;
    let yi = position(&names, "y", &path_str)?;
    let bi = position(&names, "boundary_flag", &path_str)?;
    let value_cols: Vec<(usize, String)> = names
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != xi && *i != yi && *i != bi)
        .map(|(i, n)| (i, n.to_string()))
        .collect();

    let mut points = Vec::new();
    let mut boundary = Vec::new();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); value_cols.len()];
    for (lineno, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != names.len() {
            return Err(CsvError::Malformed {
                path: path_str,
                line: lineno + 1,
                message: format!("expected {} cells, got {}", names.len(), cells.len()),
            });
        }
        let parse = |i: usize| -> Result<f64, CsvError> {
            cells[i].trim().parse::<f64>().map_err(|e| CsvError::Malformed {
                path: path_str.clone(),
                line: lineno + 1,
                message: format!("column {}: {e}", names[i]),
            })
        };
        points.push(Point2::new(parse(xi)?, parse(yi)?));
        boundary.push(parse(bi)? != 0.0);
        for (slot, (ci, _)) in value_cols.iter().enumerate() {
            columns[slot].push(parse(*ci)?);
        }
    }
    if points.is_empty() {
        return Err(CsvError::Empty { path: path_str });
    }
    Ok(FieldTable {
        points,
        boundary,
        column_names: value_cols.into_iter().map(|(_, n)| n).collect(),
        columns,
    })
}

fn position(names: &[&str], want: &str, path: &str) -> Result<usize, CsvError> {
    names
        .iter()
        .position(|&n| n == want)
        .ok_or_else(|| CsvError::Malformed {
            path: path.to_string(),
            line: 1,
            message: format!("missing required column `{want}`"),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DomainSpec;
    use crate::solver::{solve_dirichlet, SolverConfig};

    #[test]
    fn fmt17_round_trips() {
        for &x in &[std::f64::consts::PI, 1.0 / 3.0, 1e-300, -2.5e17, 0.1] {
            assert_eq!(fmt17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn solution_round_trip_and_determinism() {
        let dir = tempfile::tempdir().unwrap();
        let d = DomainSpec::disc(1.0).unwrap();
        let s = solve_dirichlet(&d, 0.0, 1.0, 0.15, &SolverConfig::default()).unwrap();

        let p1 = dir.path().join("a.csv");
        let p2 = dir.path().join("b.csv");
        write_solution_csv(&p1, &s, None).unwrap();
        write_solution_csv(&p2, &s, None).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());

        let table = read_field_csv(&p1).unwrap();
        assert_eq!(table.points.len(), s.mesh().vertex_count());
        let u = table.column("u").unwrap();
        for (a, b) in u.iter().zip(s.values()) {
            assert_eq!(a, b, "CSV round trip must be exact");
        }
        let n_boundary = table.boundary.iter().filter(|&&b| b).count();
        assert_eq!(
            n_boundary,
            s.mesh().is_boundary.iter().filter(|&&b| b).count()
        );
    }

    #[test]
    fn malformed_csv_is_reported_with_position() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.csv");
        std::fs::write(&p, "x,y,u,grad_norm,boundary_flag\n1,2,3\n").unwrap();
        match read_field_csv(&p) {
            Err(CsvError::Malformed { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected Malformed, got {other:?}"),
        }
        std::fs::write(&p, "x,y\n").unwrap();
        assert!(matches!(read_field_csv(&p), Err(CsvError::Malformed { .. })));
        std::fs::write(&p, "x,y,u,grad_norm,boundary_flag\n").unwrap();
        assert!(matches!(read_field_csv(&p), Err(CsvError::Empty { .. })));
    }
}
