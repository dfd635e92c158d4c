//! JSON instance files.
//!
//! Numbers are written as strings (`"3/4"`, `"0.25"`, `"2"`) or plain JSON
//! numbers. They are kept as text until an arithmetic mode is chosen, so an
//! instance reloads identically after serialization.

use std::fmt;
use std::path::Path;

use kantorovich::{Cell, Matrix, Partition, ProbabilitySpace, RectangleFamily, Scalar, SubsetMask, Tolerance};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::InputError;

/// A numeric literal kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Num(pub String);

impl Num {
    pub fn new(text: impl Into<String>) -> Self {
        Num(text.into())
    }

    pub fn parse<S: Scalar>(&self, field: &str) -> Result<S, InputError> {
        S::parse(&self.0).map_err(|e| InputError::Validation(format!("{field}: {e}")))
    }
}

impl From<&str> for Num {
    fn from(text: &str) -> Self {
        Num::new(text)
    }
}

impl Serialize for Num {
    fn serialize<Se: Serializer>(&self, s: Se) -> Result<Se::Ok, Se::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct NumVisitor;

        impl Visitor<'_> for NumVisitor {
            type Value = Num;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a string such as \"3/4\"")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Num, E> {
                Ok(Num::new(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Num, E> {
                Ok(Num(v.to_string()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Num, E> {
                Ok(Num(v.to_string()))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Num, E> {
                Ok(Num(format!("{v:?}")))
            }
        }

        d.deserialize_any(NumVisitor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    #[default]
    Rational,
    Float,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<String>>,
    pub weights: Vec<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<Num>>>,
    /// Positions on the real line, used by the cost formulas.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Num>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formula {
    /// `|s − t|`
    AbsoluteDifference,
    /// `(s − t)²`
    SquaredDifference,
    /// `1` where the two points coincide, else `0`.
    EqualityIndicator,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableEntry {
    pub x: String,
    pub y: String,
    pub value: Num,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CostSpec {
    Matrix {
        rows: Vec<Vec<Num>>,
    },
    Formula {
        name: Formula,
    },
    /// Sparse entries addressed by point label; unlisted pairs take `default`.
    Table {
        entries: Vec<TableEntry>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        default: Option<Num>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RectSpec {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellSpec {
    pub members: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representative: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionSpec {
    pub cells: Vec<CellSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub null_cell: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    #[serde(default)]
    pub arithmetic: Arithmetic,
    pub x: SpaceSpec,
    pub y: SpaceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<CostSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rectangles: Option<Vec<RectSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<PartitionSpec>,
    /// Point function `X → Y` as indices into `y`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<usize>>,
    /// Coarse coupling `T` (cells × Y) for `extend`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coarse_coupling: Option<Vec<Vec<Num>>>,
}

/// An instance with every number parsed and every cross-reference checked.
#[derive(Debug, Clone)]
pub struct Problem<S> {
    pub x: ProbabilitySpace<S>,
    pub y: ProbabilitySpace<S>,
    pub cost: Option<Matrix<S>>,
    pub rectangles: Option<RectangleFamily>,
    pub partition: Option<Partition>,
    pub map: Option<Vec<usize>>,
    pub coarse_coupling: Option<Matrix<S>>,
}

impl<S: Scalar> Problem<S> {
    pub fn mu(&self) -> &[S] {
        self.x.weights()
    }

    pub fn nu(&self) -> &[S] {
        self.y.weights()
    }
}

/// Parses an instance from JSON text and validates it in its own arithmetic.
pub fn parse_instance(text: &str) -> Result<Instance, InputError> {
    let instance: Instance = serde_json::from_str(text).map_err(|e| InputError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    instance.validate(instance.arithmetic, Tolerance::default())?;
    Ok(instance)
}

pub fn load_instance(path: &Path) -> Result<Instance, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_instance(&text)
}

impl Instance {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instances always serialize")
    }

    /// Runs every check by resolving in the given arithmetic.
    pub fn validate(&self, mode: Arithmetic, tol: Tolerance) -> Result<(), InputError> {
        match mode {
            Arithmetic::Rational => self.resolve::<kantorovich::Rational>(Tolerance::EXACT).map(drop),
            Arithmetic::Float => self.resolve::<f64>(tol).map(drop),
        }
    }

    pub fn resolve<S: Scalar>(&self, tol: Tolerance) -> Result<Problem<S>, InputError> {
        let x = resolve_space(&self.x, "x", tol)?;
        let y = resolve_space(&self.y, "y", tol)?;
        let (m, n) = (x.len(), y.len());
        let cost = self.cost.as_ref().map(|c| resolve_cost(c, &self.x, &self.y, &x, &y)).transpose()?;

        let rectangles = match &self.rectangles {
            None => None,
            Some(rects) => {
                let rects = rects
                    .iter()
                    .enumerate()
                    .map(|(k, r)| {
                        Ok((
                            mask(m, &r.a, &format!("rectangles[{k}].a"))?,
                            mask(n, &r.b, &format!("rectangles[{k}].b"))?,
                        ))
                    })
                    .collect::<Result<Vec<_>, InputError>>()?;
                Some(RectangleFamily::new(m, n, rects).map_err(validation("rectangles"))?)
            }
        };

        let partition = match &self.partition {
            None => None,
            Some(p) => {
                let cells = p
                    .cells
                    .iter()
                    .enumerate()
                    .map(|(k, c)| {
                        Ok(Cell {
                            members: mask(m, &c.members, &format!("partition.cells[{k}].members"))?,
                            representative: c.representative,
                        })
                    })
                    .collect::<Result<Vec<_>, InputError>>()?;
                Some(Partition::new(cells, p.null_cell).map_err(validation("partition"))?)
            }
        };

        if let Some(map) = &self.map {
            if map.len() != m {
                return Err(InputError::Validation(format!("map has {} entries but x has {m} points", map.len())));
            }
            if let Some((i, &t)) = map.iter().enumerate().find(|&(_, &t)| t >= n) {
                return Err(InputError::Validation(format!("map[{i}] = {t} is outside y ({n} points)")));
            }
        }

        let coarse_coupling = match &self.coarse_coupling {
            None => None,
            Some(rows) => {
                let cells = partition
                    .as_ref()
                    .ok_or_else(|| InputError::Validation("coarse_coupling needs a partition".into()))?
                    .len();
                let matrix = number_matrix(rows, "coarse_coupling")?;
                if matrix.shape() != (cells, n) {
                    return Err(InputError::Validation(format!(
                        "coarse_coupling is {}x{} but the partition has {cells} cells and y has {n} points",
                        matrix.rows(),
                        matrix.cols()
                    )));
                }
                Some(matrix)
            }
        };

        Ok(Problem { x, y, cost, rectangles, partition, map: self.map.clone(), coarse_coupling })
    }
}

fn validation(field: &'static str) -> impl Fn(kantorovich::Error) -> InputError {
    move |e| InputError::Validation(format!("{field}: {e}"))
}

fn mask(len: usize, indices: &[usize], field: &str) -> Result<SubsetMask, InputError> {
    SubsetMask::from_indices(len, indices).map_err(|e| InputError::Validation(format!("{field}: {e}")))
}

fn number_matrix<S: Scalar>(rows: &[Vec<Num>], field: &str) -> Result<Matrix<S>, InputError> {
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().enumerate().map(|(j, v)| v.parse(&format!("{field}[{i}][{j}]"))).collect())
        .collect::<Result<Vec<Vec<S>>, InputError>>()?;
    Matrix::from_rows(parsed).map_err(|e| InputError::Validation(format!("{field}: {e}")))
}

fn labels(spec: &SpaceSpec) -> Vec<String> {
    spec.points.clone().unwrap_or_else(|| (0..spec.weights.len()).map(|i| i.to_string()).collect())
}

fn resolve_space<S: Scalar>(spec: &SpaceSpec, side: &str, tol: Tolerance) -> Result<ProbabilitySpace<S>, InputError> {
    let weights = spec
        .weights
        .iter()
        .enumerate()
        .map(|(i, w)| w.parse(&format!("{side}.weights[{i}]")))
        .collect::<Result<Vec<S>, _>>()?;
    let names = labels(spec);
    if names.len() != weights.len() {
        return Err(InputError::Validation(format!(
            "{side}: {} point labels but {} weights",
            names.len(),
            weights.len()
        )));
    }
    if let Some(coords) = &spec.coords {
        if coords.len() != weights.len() {
            return Err(InputError::Validation(format!(
                "{side}: {} coordinates but {} weights",
                coords.len(),
                weights.len()
            )));
        }
    }
    let metric = spec.metric.as_ref().map(|rows| number_matrix(rows, &format!("{side}.metric"))).transpose()?;
    ProbabilitySpace::new(names, weights, metric, tol).map_err(|e| InputError::Validation(format!("{side}: {e}")))
}

fn coordinates<S: Scalar>(spec: &SpaceSpec, side: &str) -> Result<Vec<S>, InputError> {
    match &spec.coords {
        Some(coords) => coords.iter().enumerate().map(|(i, c)| c.parse(&format!("{side}.coords[{i}]"))).collect(),
        None => Ok((0..spec.weights.len()).map(|i| S::from_i64(i as i64)).collect()),
    }
}

fn resolve_cost<S: Scalar>(
    spec: &CostSpec,
    xs: &SpaceSpec,
    ys: &SpaceSpec,
    x: &ProbabilitySpace<S>,
    y: &ProbabilitySpace<S>,
) -> Result<Matrix<S>, InputError> {
    let (m, n) = (x.len(), y.len());
    match spec {
        CostSpec::Matrix { rows } => {
            let c = number_matrix(rows, "cost.rows")?;
            if c.shape() != (m, n) {
                return Err(InputError::Validation(format!(
                    "cost matrix is {}x{} but |X| x |Y| = {m}x{n}",
                    c.rows(),
                    c.cols()
                )));
            }
            Ok(c)
        }
        CostSpec::Formula { name } => {
            let (cx, cy) = (coordinates::<S>(xs, "x")?, coordinates::<S>(ys, "y")?);
            Ok(Matrix::from_fn(m, n, |i, j| {
                let diff = cx[i].clone() - cy[j].clone();
                match name {
                    Formula::AbsoluteDifference => diff.abs(),
                    Formula::SquaredDifference => diff.clone() * diff,
                    Formula::EqualityIndicator => {
                        let same = if xs.coords.is_some() && ys.coords.is_some() {
                            diff.is_zero()
                        } else {
                            x.labels()[i] == y.labels()[j]
                        };
                        if same {
                            S::one()
                        } else {
                            S::zero()
                        }
                    }
                }
            }))
        }
        CostSpec::Table { entries, default } => {
            let fill = match default {
                Some(d) => d.parse("cost.default")?,
                None => S::zero(),
            };
            let mut c = Matrix::filled(m, n, fill);
            for (k, e) in entries.iter().enumerate() {
                let i =
                    x.labels().iter().position(|l| *l == e.x).ok_or_else(|| {
                        InputError::Validation(format!("cost.entries[{k}]: unknown x point {:?}", e.x))
                    })?;
                let j =
                    y.labels().iter().position(|l| *l == e.y).ok_or_else(|| {
                        InputError::Validation(format!("cost.entries[{k}]: unknown y point {:?}", e.y))
                    })?;
                c[(i, j)] = e.value.parse(&format!("cost.entries[{k}].value"))?;
            }
            Ok(c)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_accept_strings_and_literals() {
        let v: Vec<Num> = serde_json::from_str(r#"["1/2", 3, 0.25, "-4"]"#).unwrap();
        assert_eq!(v, vec![Num::new("1/2"), Num::new("3"), Num::new("0.25"), Num::new("-4")]);
    }

    #[test]
    fn formula_costs() {
        let text = r#"{
            "x": {"weights": ["1/2", "1/2"], "coords": ["0", "2"]},
            "y": {"weights": ["1/2", "1/2"], "coords": ["1", "2"]},
            "cost": {"kind": "formula", "name": "squared-difference"}
        }"#;
        let p = parse_instance(text).unwrap().resolve::<kantorovich::Rational>(Tolerance::EXACT).unwrap();
        let c = p.cost.unwrap();
        assert_eq!(c.to_rows().iter().flatten().map(Scalar::render).collect::<Vec<_>>(), ["1/1", "4/1", "1/1", "0/1"]);
    }

    #[test]
    fn table_cost_by_label() {
        let text = r#"{
            "x": {"points": ["a", "b"], "weights": ["1/2", "1/2"]},
            "y": {"points": ["u"], "weights": ["1"]},
            "cost": {"kind": "table", "entries": [{"x": "b", "y": "u", "value": "7/2"}], "default": "1"}
        }"#;
        let p = parse_instance(text).unwrap().resolve::<f64>(Tolerance::default()).unwrap();
        assert_eq!(p.cost.unwrap().to_rows(), vec![vec![1.0], vec![3.5]]);
    }

    #[test]
    fn unknown_table_label_is_rejected() {
        let text = r#"{
            "x": {"weights": ["1"]}, "y": {"weights": ["1"]},
            "cost": {"kind": "table", "entries": [{"x": "zz", "y": "0", "value": "1"}]}
        }"#;
        assert!(matches!(parse_instance(text), Err(InputError::Validation(_))));
    }
}
