//! The route-timing MIP: binary arcs `x_i_j`, arrival times `t_i` chained by
//! big-M rows, and disruption times `r_j` bounded below by the arrival of
//! every vertex on the source-to-`j` path.

mod check;
mod lp;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

pub use check::{canonical_assignment, check_assignment, MipAssignment, MipVerdict, RowViolation, TOLERANCE};
pub use lp::{lint_lp_text, write_lp_text, LintIssue};

use crate::instance::Instance;
use crate::power_eval::PrecedenceIndex;
use crate::{Error, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X(Vertex, Vertex),
    T(Vertex),
    R(Vertex),
}

impl Var {
    pub fn name(&self) -> String {
        match *self {
            Var::X(i, j) => format!("x_{i}_{j}"),
            Var::T(i) => format!("t_{i}"),
            Var::R(i) => format!("r_{i}"),
        }
    }

    /// Inverse of [`Var::name`].
    pub fn parse(name: &str) -> Option<Var> {
        let mut parts = name.split('_');
        let kind = parts.next()?;
        let a: Vertex = parts.next()?.parse().ok()?;
        let b = parts.next().map(|s| s.parse::<Vertex>());
        let var = match (kind, b) {
            ("x", Some(Ok(b))) => Var::X(a, b),
            ("t", None) => Var::T(a),
            ("r", None) => Var::R(a),
            _ => return None,
        };
        if parts.next().is_some() {
            return None;
        }
        Some(var)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    /// Exactly one arc leaves the vertex.
    Out,
    /// Exactly one arc enters the vertex.
    In,
    /// `x_ij = 1` forces `t_j >= t_i + d_ij`.
    Time,
    /// `r_j >= t_i` for `i` on the source-to-`j` path.
    Link,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub name: String,
    pub kind: RowKind,
    pub terms: Vec<(i128, Var)>,
    pub sense: Sense,
    pub rhs: i128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MipModel {
    pub n: usize,
    pub big_m: i128,
    /// Arc variables in row-major order.
    pub arcs: Vec<(Vertex, Vertex)>,
    pub rows: Vec<Row>,
    /// Minimised sum; every coefficient is 1.
    pub objective: Vec<Var>,
}

impl MipModel {
    pub fn count(&self, kind: RowKind) -> usize {
        self.rows.iter().filter(|r| r.kind == kind).count()
    }

    pub fn binary_count(&self) -> usize {
        self.arcs.len()
    }
}

/// `M = Σ d_kl` over all arcs.
pub fn default_big_m(instance: &Instance) -> i128 {
    let n = instance.n;
    let mut total = 0i128;
    for i in 0..=n {
        for j in 0..=n {
            if i != j {
                total += instance.travel_time(i, j) as i128;
            }
        }
    }
    total
}

pub fn build_model(instance: &Instance, index: &PrecedenceIndex) -> Result<MipModel, Error> {
    build_model_with(instance, index, None)
}

/// Builds the model, with `big_m` replacing the default constant if given.
pub fn build_model_with(instance: &Instance, index: &PrecedenceIndex, big_m: Option<i128>) -> Result<MipModel, Error> {
    if !instance.has_zero_durations() {
        return Err(Error::InvalidConfig("the MIP is stated for zero repair durations; absorb them first"));
    }
    let n = instance.n;
    let big_m = big_m.unwrap_or_else(|| default_big_m(instance));
    let arcs: Vec<(Vertex, Vertex)> =
        (0..=n).flat_map(|i| (0..=n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let mut rows = Vec::new();
    for i in 0..=n {
        rows.push(Row {
            name: format!("out_{i}"),
            kind: RowKind::Out,
            terms: (0..=n).filter(|&j| j != i).map(|j| (1, Var::X(i, j))).collect(),
            sense: Sense::Eq,
            rhs: 1,
        });
    }
    for j in 0..=n {
        rows.push(Row {
            name: format!("in_{j}"),
            kind: RowKind::In,
            terms: (0..=n).filter(|&i| i != j).map(|i| (1, Var::X(i, j))).collect(),
            sense: Sense::Eq,
            rhs: 1,
        });
    }
    for i in 0..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            rows.push(Row {
                name: format!("time_{i}_{j}"),
                kind: RowKind::Time,
                terms: alloc::vec![(1, Var::T(j)), (-1, Var::T(i)), (-big_m, Var::X(i, j))],
                sense: Sense::Ge,
                rhs: instance.travel_time(i, j) as i128 - big_m,
            });
        }
    }
    for j in 1..=n {
        for i in index.ancestors(j).iter() {
            rows.push(Row {
                name: format!("link_{j}_{i}"),
                kind: RowKind::Link,
                terms: alloc::vec![(1, Var::R(j)), (-1, Var::T(i))],
                sense: Sense::Ge,
                rhs: 0,
            });
        }
    }
    Ok(MipModel { n, big_m, arcs, rows, objective: (1..=n).map(Var::R).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixtures::{single, star};

    #[test]
    fn star_model_shape() {
        let inst = star();
        let idx = PrecedenceIndex::build(&inst).unwrap();
        let m = build_model(&inst, &idx).unwrap();
        assert_eq!(m.binary_count(), 12);
        assert_eq!(m.big_m, 20);
        assert_eq!(m.count(RowKind::Out) + m.count(RowKind::In), 8);
        assert_eq!(m.count(RowKind::Time), 9);
        assert_eq!(m.count(RowKind::Link), 5);
        let links: Vec<&str> = m.rows.iter().filter(|r| r.kind == RowKind::Link).map(|r| r.name.as_str()).collect();
        assert_eq!(links, ["link_1_1", "link_2_1", "link_2_2", "link_3_1", "link_3_3"]);
    }

    #[test]
    fn single_vertex_model() {
        let inst = single(4);
        let idx = PrecedenceIndex::build(&inst).unwrap();
        let m = build_model(&inst, &idx).unwrap();
        assert_eq!(m.arcs, [(0, 1), (1, 0)]);
        assert_eq!(m.count(RowKind::Link), 1);
        assert_eq!(m.big_m, 8);
    }

    #[test]
    fn big_m_override_and_duration_guard() {
        let inst = star();
        let idx = PrecedenceIndex::build(&inst).unwrap();
        let m = build_model_with(&inst, &idx, Some(7)).unwrap();
        assert_eq!(m.big_m, 7);
        let time = m.rows.iter().find(|r| r.name == "time_0_1").unwrap();
        assert_eq!(time.rhs, 1 - 7);
        let mut timed = star();
        timed.repair_durations[0] = 2;
        assert!(build_model(&timed, &idx).is_err());
    }

    #[test]
    fn variable_names_round_trip() {
        for v in [Var::X(0, 12), Var::T(0), Var::R(5)] {
            assert_eq!(Var::parse(&v.name()), Some(v));
        }
        assert_eq!(Var::parse("x_1"), None);
        assert_eq!(Var::parse("t_1_2"), None);
        assert_eq!(Var::parse("y_1"), None);
        assert_eq!(Var::parse("r_a"), None);
    }
}
