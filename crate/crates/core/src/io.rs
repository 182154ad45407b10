//! Readers for the on-disk instance formats.
//!
//! * similarity matrix: CSV whose first row holds the element labels and whose
//!   row `i`, column `j` holds `s_ij`; square, non-negative, symmetric within 1e-9.
//! * genres: CSV `element_id,genres`, genres separated by `;`, ids being the
//!   labels of the similarity header (or dense integers without one).
//! * modular weights: CSV `element_id,weight`.
//! * cut graph: CSV `u,v,weight`.
//! * value table: CSV `subset,value`, subset as `;`-separated ids (empty for ∅).
//! * partition: CSV `element_id,block,capacity`.

use std::collections::HashMap;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::constraints::PartitionMatroid;
use crate::error::{Error, Result};
use crate::objectives::{CutObjective, ModularObjective, TableObjective};
use crate::sets::{ElementId, ElementSet};
use crate::Value;

pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Element labels from an input file, mapped to dense ids by position.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Labels {
    names: Vec<String>,
    index: HashMap<String, ElementId>,
}

impl Labels {
    pub fn new(names: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::Parse(format!("duplicate element label `{name}`")));
            }
        }
        Ok(Self { names, index })
    }

    /// Labels `0..n` for files that use dense integer ids.
    pub fn dense(n: usize) -> Self {
        Self::new((0..n).map(|i| i.to_string()).collect()).expect("dense labels are unique")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn id(&self, label: &str) -> Option<ElementId> {
        self.index.get(label).copied()
    }

    pub fn name(&self, id: ElementId) -> &str {
        &self.names[id]
    }
}

/// A parsed similarity matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    pub labels: Labels,
    /// Row-major, exactly symmetric (the upper triangle is mirrored).
    pub values: Vec<Value>,
}

impl SimilarityMatrix {
    pub fn n(&self) -> usize {
        self.labels.len()
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse_num(field: &str, what: &str) -> Result<Value> {
    let v: Value = field
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("{what}: `{field}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("{what}: `{field}` is not finite")));
    }
    Ok(v)
}

fn parse_id(field: &str, what: &str) -> Result<ElementId> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("{what}: `{field}` is not an element id")))
}

fn expect_header<R: Read>(reader: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let header = reader.headers()?;
    let got: Vec<&str> = header.iter().map(str::trim).collect();
    if got != expected {
        return Err(Error::Parse(format!(
            "expected header `{}`, found `{}`",
            expected.join(","),
            got.join(",")
        )));
    }
    Ok(())
}

pub fn read_similarity<R: Read>(input: R) -> Result<SimilarityMatrix> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let labels = Labels::new(reader.headers()?.iter().map(|s| s.trim().to_string()).collect())?;
    let n = labels.len();
    let mut values = Vec::with_capacity(n * n);
    let mut rows = 0;
    for record in reader.records() {
        let record = record?;
        if record.len() != n {
            return Err(Error::Parse(format!("similarity row {rows} has {} entries, expected {n}", record.len())));
        }
        for (j, field) in record.iter().enumerate() {
            let v = parse_num(field, &format!("s[{rows}][{j}]"))?;
            if v < 0.0 {
                return Err(Error::Domain(format!("s[{rows}][{j}] = {v} is negative")));
            }
            values.push(v);
        }
        rows += 1;
    }
    if rows != n {
        return Err(Error::Parse(format!("similarity matrix has {rows} rows for {n} columns")));
    }
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (values[i * n + j], values[j * n + i]);
            if (a - b).abs() > SYMMETRY_TOLERANCE {
                return Err(Error::Domain(format!("similarity not symmetric at ({i},{j}): {a} vs {b}")));
            }
            values[j * n + i] = a;
        }
    }
    Ok(SimilarityMatrix { labels, values })
}

pub fn read_similarity_file(path: &Path) -> Result<SimilarityMatrix> {
    read_similarity(open(path)?)
}

/// Genre labels per element; elements missing from the file get none.
pub fn read_genres<R: Read>(input: R, labels: &Labels) -> Result<Vec<Vec<String>>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    expect_header(&mut reader, &["element_id", "genres"])?;
    let mut genres = vec![Vec::new(); labels.len()];
    for record in reader.records() {
        let record = record?;
        let label = record.get(0).unwrap_or("").trim();
        let id = labels
            .id(label)
            .ok_or_else(|| Error::Parse(format!("genre row for unknown element `{label}`")))?;
        genres[id] = record
            .get(1)
            .unwrap_or("")
            .split(';')
            .map(str::trim)
            .filter(|g| !g.is_empty())
            .map(String::from)
            .collect();
    }
    Ok(genres)
}

pub fn read_genres_file(path: &Path, labels: &Labels) -> Result<Vec<Vec<String>>> {
    read_genres(open(path)?, labels)
}

pub fn read_modular<R: Read>(input: R) -> Result<ModularObjective<Value>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    expect_header(&mut reader, &["element_id", "weight"])?;
    let mut pairs = Vec::new();
    for record in reader.records() {
        let record = record?;
        pairs.push((parse_id(&record[0], "element_id")?, parse_num(&record[1], "weight")?));
    }
    let n = pairs.iter().map(|(e, _)| e + 1).max().unwrap_or(0);
    let mut weights = vec![0.0; n];
    for (e, w) in pairs {
        weights[e] = w;
    }
    ModularObjective::new(weights)
}

pub fn read_cut<R: Read>(input: R) -> Result<CutObjective<Value>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    expect_header(&mut reader, &["u", "v", "weight"])?;
    let mut edges = Vec::new();
    for record in reader.records() {
        let record = record?;
        edges.push((
            parse_id(&record[0], "u")?,
            parse_id(&record[1], "v")?,
            parse_num(&record[2], "weight")?,
        ));
    }
    let n = edges.iter().map(|&(u, v, _)| u.max(v) + 1).max().unwrap_or(0);
    CutObjective::new(n, edges)
}

fn parse_subset(field: &str) -> Result<ElementSet> {
    field
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_id(s, "subset"))
        .collect::<Result<Vec<_>>>()
        .map(ElementSet::from)
}

pub fn read_table<R: Read>(input: R) -> Result<TableObjective<Value>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    expect_header(&mut reader, &["subset", "value"])?;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        rows.push((parse_subset(&record[0])?, parse_num(&record[1], "value")?));
    }
    let n = rows
        .iter()
        .filter_map(|(s, _)| s.as_slice().last().map(|e| e + 1))
        .max()
        .unwrap_or(0);
    TableObjective::new(n, rows)
}

pub fn read_partition<R: Read>(input: R, n: usize) -> Result<PartitionMatroid> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    expect_header(&mut reader, &["element_id", "block", "capacity"])?;
    let mut block_ids: HashMap<String, usize> = HashMap::new();
    let mut capacities: Vec<usize> = Vec::new();
    let mut block_of = vec![None; n];
    for record in reader.records() {
        let record = record?;
        let e = parse_id(&record[0], "element_id")?;
        if e >= n {
            return Err(Error::Domain(format!("partition row for element {e} outside ground set of size {n}")));
        }
        let cap: usize = record[2]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("capacity `{}` is not a count", &record[2])))?;
        let next = block_ids.len();
        let b = *block_ids.entry(record[1].trim().to_string()).or_insert(next);
        if b == capacities.len() {
            capacities.push(cap);
        } else if capacities[b] != cap {
            return Err(Error::Parse(format!("block `{}` has conflicting capacities", &record[1])));
        }
        block_of[e] = Some(b);
    }
    PartitionMatroid::new(block_of, capacities)
}

pub fn read_partition_file(path: &Path, n: usize) -> Result<PartitionMatroid> {
    read_partition(open(path)?, n)
}

/// Instance objective read from a file, chosen by its header.
#[derive(Debug, Clone)]
pub enum InstanceFile {
    Modular(ModularObjective<Value>),
    Cut(CutObjective<Value>),
    Table(TableObjective<Value>),
}

pub fn read_instance_file(path: &Path) -> Result<InstanceFile> {
    let mut text = String::new();
    open(path)?.read_to_string(&mut text)?;
    let header = text.lines().next().unwrap_or("").replace(' ', "");
    match header.as_str() {
        "element_id,weight" => Ok(InstanceFile::Modular(read_modular(text.as_bytes())?)),
        "u,v,weight" => Ok(InstanceFile::Cut(read_cut(text.as_bytes())?)),
        "subset,value" => Ok(InstanceFile::Table(read_table(text.as_bytes())?)),
        other => Err(Error::Parse(format!("{}: unrecognized instance header `{other}`", path.display()))),
    }
}
