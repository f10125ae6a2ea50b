use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::instance::{Instance, Metric, Mode, Point};

/// Which columns of a CSV file become coordinates.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    pub path: PathBuf,
    /// Column names or zero-based indices; all numeric columns when absent.
    #[serde(default)]
    pub columns: Option<Vec<String>>,
    /// Z-score each selected column (sample standard deviation).
    #[serde(default)]
    pub standardize: bool,
    /// Column to skip, such as a row identifier.
    #[serde(default)]
    pub id_column: Option<String>,
}

impl DatasetSpec {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        DatasetSpec {
            path: path.into(),
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LoadedPoints {
    pub columns: Vec<String>,
    pub agents: Vec<Point>,
    /// Present when the file has a `role` column.
    pub candidates: Option<Vec<Point>>,
}

const ROLE: &str = "role";

pub fn load_points(spec: &DatasetSpec) -> Result<LoadedPoints> {
    let io_err = |source| Error::Io {
        path: spec.path.clone(),
        source,
    };
    let file = File::open(&spec.path).map_err(io_err)?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let role_col = headers.iter().position(|h| h.eq_ignore_ascii_case(ROLE));

    let lookup = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .or_else(|| name.parse::<usize>().ok().filter(|&i| i < headers.len()))
            .ok_or_else(|| Error::Unknown {
                kind: "column",
                name: format!("{name} in {}", spec.path.display()),
            })
    };
    let id_col = spec.id_column.as_deref().map(lookup).transpose()?;
    let selected: Vec<usize> = match &spec.columns {
        Some(cols) => cols.iter().map(|c| lookup(c)).collect::<Result<_>>()?,
        None => (0..headers.len())
            .filter(|&i| Some(i) != role_col && Some(i) != id_col)
            .collect(),
    };
    if selected.is_empty() {
        return Err(Error::InvalidInstance(format!(
            "{}: no coordinate columns selected",
            spec.path.display()
        )));
    }

    let mut agents = Vec::new();
    let mut candidates = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let record = record?;
        // Header is line 1.
        let row = row_idx + 2;
        let mut coords = Vec::with_capacity(selected.len());
        for &col in &selected {
            let cell = record.get(col).unwrap_or("");
            let value: f64 = cell.parse().map_err(|_| Error::Parse {
                path: spec.path.clone(),
                row,
                column: headers[col].clone(),
                message: format!("not a number: {cell:?}"),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    path: spec.path.clone(),
                    row,
                    column: headers[col].clone(),
                    message: format!("not finite: {cell:?}"),
                });
            }
            coords.push(value);
        }
        let point = Point::new(coords);
        match role_col.map(|c| record.get(c).unwrap_or("").to_ascii_lowercase()) {
            None => agents.push(point),
            Some(r) if r == "agent" => agents.push(point),
            Some(r) if r == "candidate" => candidates.push(point),
            Some(r) => {
                return Err(Error::Parse {
                    path: spec.path.clone(),
                    row,
                    column: ROLE.into(),
                    message: format!("expected 'agent' or 'candidate', got {r:?}"),
                })
            }
        }
    }
    if agents.is_empty() {
        return Err(Error::InvalidInstance(format!(
            "{}: no agent rows",
            spec.path.display()
        )));
    }

    if spec.standardize {
        standardize(&mut agents, &mut candidates);
    }
    Ok(LoadedPoints {
        columns: selected.iter().map(|&c| headers[c].clone()).collect(),
        agents,
        candidates: role_col.map(|_| candidates),
    })
}

/// Z-scores every axis using the agents' sample mean and standard deviation.
/// Constant axes are only centred.
fn standardize(agents: &mut [Point], candidates: &mut [Point]) {
    let n = agents.len() as f64;
    let dim = agents[0].dim();
    for axis in 0..dim {
        let mean = agents.iter().map(|p| p.coords()[axis]).sum::<f64>() / n;
        let var = if agents.len() > 1 {
            agents
                .iter()
                .map(|p| (p.coords()[axis] - mean).powi(2))
                .sum::<f64>()
                / (n - 1.0)
        } else {
            0.0
        };
        let sd = var.sqrt();
        for p in agents.iter_mut().chain(candidates.iter_mut()) {
            let mut c = p.coords().to_vec();
            c[axis] = if sd > 0.0 {
                (c[axis] - mean) / sd
            } else {
                c[axis] - mean
            };
            *p = Point::new(c);
        }
    }
}

/// Loads a CSV file as an instance with target count `k`.
pub fn load_csv(spec: &DatasetSpec, k: usize, metric: Metric) -> Result<Instance> {
    let loaded = load_points(spec)?;
    match loaded.candidates {
        None => Instance::unconstrained(loaded.agents, k, metric),
        Some(c) => Instance::discrete(loaded.agents, c, k, metric),
    }
}

/// Writes the instance's points in the CSV layout [`load_csv`] reads.
/// Coordinates use the shortest representation that parses back exactly.
pub fn write_instance_csv(inst: &Instance, path: &Path) -> Result<()> {
    if inst.metric() == Metric::Precomputed {
        return Err(Error::InvalidInstance(
            "precomputed instances have no coordinates to write".into(),
        ));
    }
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut w = csv::Writer::from_writer(file);
    let discrete = inst.mode() == Mode::Discrete;
    let mut header: Vec<String> = (0..inst.dim()).map(|a| format!("x{a}")).collect();
    if discrete {
        header.push(ROLE.into());
    }
    w.write_record(&header)?;
    let mut write = |p: &Point, role: &str| -> Result<()> {
        let mut rec: Vec<String> = p.coords().iter().map(|v| v.to_string()).collect();
        if discrete {
            rec.push(role.into());
        }
        w.write_record(&rec)?;
        Ok(())
    };
    for p in inst.agents() {
        write(p, "agent")?;
    }
    if discrete {
        for p in inst.candidates() {
            write(p, "candidate")?;
        }
    }
    let mut inner = w.into_inner().map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e.into_error(),
    })?;
    inner.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// SHA-256 over the mode, metric and the exact bits of every coordinate (or
/// distance, for precomputed instances). `k` is not part of the digest.
pub fn instance_digest(inst: &Instance) -> String {
    let mut h = Sha256::new();
    h.update(format!(
        "{:?}|{}|{}|{}|{}|",
        inst.mode(),
        inst.metric(),
        inst.n(),
        inst.m(),
        inst.dim()
    ));
    if inst.metric() == Metric::Precomputed {
        for i in 0..inst.n() {
            for d in inst.agent_row(i) {
                h.update(d.to_bits().to_le_bytes());
            }
        }
        if let Ok(aa) = inst.agent_distances() {
            h.update(b"aa");
            for d in aa {
                h.update(d.to_bits().to_le_bytes());
            }
        }
    } else {
        for p in inst.agents().iter().chain(inst.candidates()) {
            for v in p.coords() {
                h.update(v.to_bits().to_le_bytes());
            }
        }
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
        let p = dir.path().join(name);
        std::fs::File::create(&p)
            .unwrap()
            .write_all(body.as_bytes())
            .unwrap();
        p
    }

    #[test]
    fn loads_numeric_columns() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "a.csv", "a,b\n1,2\n3,4.5\n-1,0\n");
        let inst = load_csv(&DatasetSpec::new(&p), 2, Metric::Euclidean).unwrap();
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.dim(), 2);
        assert_eq!(inst.mode(), Mode::Unconstrained);
        assert_eq!(inst.agents()[1].coords(), &[3.0, 4.5]);
    }

    #[test]
    fn reports_row_and_column_of_bad_cell() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "bad.csv", "a,b\n1,2\n3,oops\n");
        match load_points(&DatasetSpec::new(&p)) {
            Err(Error::Parse { row, column, .. }) => {
                assert_eq!(row, 3);
                assert_eq!(column, "b");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn column_selection_and_id_column() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "c.csv", "id,x,label,y\nr1,1,foo,2\nr2,3,bar,4\n");
        let spec = DatasetSpec {
            path: p.clone(),
            columns: Some(vec!["x".into(), "3".into()]),
            ..Default::default()
        };
        let pts = load_points(&spec).unwrap();
        assert_eq!(pts.columns, vec!["x", "y"]);
        assert_eq!(pts.agents[1].coords(), &[3.0, 4.0]);

        let empty = DatasetSpec {
            path: p,
            columns: Some(vec![]),
            ..Default::default()
        };
        assert!(load_points(&empty).is_err());
    }

    #[test]
    fn standardized_columns_have_unit_moments() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "s.csv", "a,b\n1,10\n2,10\n4,10\n9,10\n");
        let spec = DatasetSpec {
            path: p,
            standardize: true,
            ..Default::default()
        };
        let pts = load_points(&spec).unwrap();
        let n = pts.agents.len() as f64;
        let col = |a: usize| pts.agents.iter().map(|p| p.coords()[a]).collect::<Vec<_>>();
        let a = col(0);
        let mean = a.iter().sum::<f64>() / n;
        let var = a.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!(mean.abs() < 1e-12);
        assert!((var - 1.0).abs() < 1e-12);
        assert!(col(1).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn role_column_makes_discrete_instance() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(&dir, "r.csv", "x,role\n0,agent\n1,agent\n0.5,candidate\n");
        let inst = load_csv(&DatasetSpec::new(&p), 1, Metric::Euclidean).unwrap();
        assert_eq!(inst.mode(), Mode::Discrete);
        assert_eq!((inst.n(), inst.m()), (2, 1));
    }

    #[test]
    fn missing_file_names_path() {
        let err = load_points(&DatasetSpec::new("/nonexistent/x.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/x.csv"));
    }

    #[test]
    fn write_then_load_preserves_digest() {
        let dir = tempfile::tempdir().unwrap();
        let pts = vec![
            Point::new(vec![0.1, 1.0 / 3.0]),
            Point::new(vec![-2.5e-7, 12345.678901234]),
        ];
        let inst = Instance::unconstrained(pts, 1, Metric::Euclidean).unwrap();
        let p = dir.path().join("rt.csv");
        write_instance_csv(&inst, &p).unwrap();
        let back = load_csv(&DatasetSpec::new(&p), 1, Metric::Euclidean).unwrap();
        assert_eq!(instance_digest(&inst), instance_digest(&back));
    }
}
