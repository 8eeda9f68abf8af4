use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{MipModel, Sense, Var};
use crate::instance::{Instance, DEPOT};
use crate::power_eval::{evaluate_route, PrecedenceIndex};
use crate::{Error, Vertex};

/// Feasibility tolerance, scaled by the magnitude of each row.
pub const TOLERANCE: f64 = 1e-6;

/// Values for every model variable.
#[derive(Debug, Clone, PartialEq)]
pub struct MipAssignment {
    pub n: usize,
    /// `x[i][j]`; the diagonal is ignored.
    pub x: Vec<Vec<f64>>,
    /// `t[0..=n]`.
    pub t: Vec<f64>,
    /// `r[1..=n]`, entry 0 unused.
    pub r: Vec<f64>,
}

impl MipAssignment {
    pub fn zeros(n: usize) -> Self {
        MipAssignment { n, x: vec![vec![0.0; n + 1]; n + 1], t: vec![0.0; n + 1], r: vec![0.0; n + 1] }
    }

    /// Builds an assignment from `(name, value)` pairs. Variables that are not
    /// mentioned are zero, as most solvers leave zeros out of their output.
    pub fn from_named<'a>(n: usize, values: impl IntoIterator<Item = (&'a str, f64)>) -> Result<Self, Error> {
        let mut a = Self::zeros(n);
        for (name, value) in values {
            let var = Var::parse(name).ok_or_else(|| Error::InvalidAssignment(format!("unknown variable `{name}`")))?;
            if !value.is_finite() {
                return Err(Error::InvalidAssignment(format!("`{name}` is not finite")));
            }
            a.set(var, value)?;
        }
        Ok(a)
    }

    pub fn get(&self, var: Var) -> f64 {
        match var {
            Var::X(i, j) => self.x[i][j],
            Var::T(i) => self.t[i],
            Var::R(i) => self.r[i],
        }
    }

    pub fn set(&mut self, var: Var, value: f64) -> Result<(), Error> {
        let n = self.n;
        let slot = match var {
            Var::X(i, j) if i <= n && j <= n && i != j => &mut self.x[i][j],
            Var::T(i) if i <= n => &mut self.t[i],
            Var::R(i) if (1..=n).contains(&i) => &mut self.r[i],
            _ => return Err(Error::InvalidAssignment(format!("`{}` is not a model variable", var.name()))),
        };
        *slot = value;
        Ok(())
    }

    /// All variables with their values, in model order.
    pub fn named_values(&self) -> Vec<(String, f64)> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 0..=n {
            for j in 0..=n {
                if i != j {
                    out.push((Var::X(i, j).name(), self.x[i][j]));
                }
            }
        }
        out.extend((0..=n).map(|i| (Var::T(i).name(), self.t[i])));
        out.extend((1..=n).map(|i| (Var::R(i).name(), self.r[i])));
        out
    }
}

/// The assignment a route induces: its arcs, arrival times and disruption
/// times.
pub fn canonical_assignment(instance: &Instance, index: &PrecedenceIndex, order: &[Vertex]) -> Result<MipAssignment, Error> {
    let route = evaluate_route(instance, index, order)?;
    let n = instance.n;
    let mut a = MipAssignment::zeros(n);
    let mut prev = DEPOT;
    for &v in order.iter().chain(core::iter::once(&DEPOT)) {
        a.x[prev][v] = 1.0;
        prev = v;
    }
    for v in 1..=n {
        a.t[v] = route.t[v - 1] as f64;
        a.r[v] = route.r[v - 1] as f64;
    }
    Ok(a)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowViolation {
    pub row: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MipVerdict {
    pub feasible: bool,
    /// `Σ r_i` of the assignment.
    pub objective: f64,
    pub violations: Vec<RowViolation>,
    /// Visiting order when `x` is a single tour through the depot.
    pub tour: Option<Vec<Vertex>>,
    /// Exact objective of that order.
    pub route_objective: Option<u128>,
}

fn abs(v: f64) -> f64 {
    if v < 0.0 {
        -v
    } else {
        v
    }
}

fn within(lhs: f64, sense: Sense, rhs: f64, scale: f64) -> bool {
    let tol = TOLERANCE * scale.max(1.0);
    match sense {
        Sense::Le => lhs <= rhs + tol,
        Sense::Ge => lhs >= rhs - tol,
        Sense::Eq => abs(lhs - rhs) <= tol,
    }
}

/// Checks every row, bound and integrality condition of `model`, then
/// decodes the tour. Subtours cannot satisfy the time rows, but they are
/// also reported on their own as a degree-feasible `x` that is not a single
/// tour.
pub fn check_assignment(model: &MipModel, instance: &Instance, index: &PrecedenceIndex, a: &MipAssignment) -> Result<MipVerdict, Error> {
    let n = model.n;
    if a.n != n || instance.n != n {
        return Err(Error::InvalidAssignment(format!("assignment has {} fault vertices, model has {n}", a.n)));
    }
    let mut violations = Vec::new();
    let mut flag = |row: String, detail: String| violations.push(RowViolation { row, detail });

    for &(i, j) in &model.arcs {
        let v = a.x[i][j];
        if abs(v) > TOLERANCE && abs(v - 1.0) > TOLERANCE {
            flag(Var::X(i, j).name(), format!("binary variable has value {v}"));
        }
    }
    if abs(a.t[0]) > TOLERANCE {
        flag("t_0".into(), format!("fixed at 0, has {}", a.t[0]));
    }
    for i in 1..=n {
        if a.t[i] < -TOLERANCE {
            flag(Var::T(i).name(), format!("negative value {}", a.t[i]));
        }
        if a.r[i] < -TOLERANCE {
            flag(Var::R(i).name(), format!("negative value {}", a.r[i]));
        }
    }
    let mut degree_ok = true;
    for row in &model.rows {
        let mut lhs = 0.0;
        let mut scale = abs(row.rhs as f64);
        for &(coef, var) in &row.terms {
            let term = coef as f64 * a.get(var);
            lhs += term;
            scale = scale.max(abs(term));
        }
        if !within(lhs, row.sense, row.rhs as f64, scale) {
            if matches!(row.kind, super::RowKind::Out | super::RowKind::In) {
                degree_ok = false;
            }
            flag(row.name.clone(), format!("{lhs} {} {} does not hold", row.sense.symbol(), row.rhs));
        }
    }

    let objective: f64 = model.objective.iter().map(|&v| a.get(v)).sum();
    let mut tour = None;
    let mut route_objective = None;
    if degree_ok {
        let next = |i: Vertex| (0..=n).find(|&j| j != i && a.x[i][j] > 0.5);
        let mut order = Vec::with_capacity(n);
        let mut at = next(DEPOT);
        while let Some(v) = at {
            if v == DEPOT || order.len() > n {
                break;
            }
            order.push(v);
            at = next(v);
        }
        if order.len() == n {
            let route = evaluate_route(instance, index, &order)?;
            if objective < route.objective as f64 - TOLERANCE * (route.objective as f64).max(1.0) {
                flag("obj".into(), format!("objective {objective} is below the tour's value {}", route.objective));
            }
            route_objective = Some(route.objective);
            tour = Some(order);
        } else {
            flag("tour".to_string(), "degree-feasible but not a single tour".into());
        }
    }

    Ok(MipVerdict { feasible: violations.is_empty(), objective, violations, tour, route_objective })
}
