//! Resource-type aggregation and integer-program encodings of the
//! allocation problems, with a built-in exact feasibility solver.
//!
//! Resources with equal utility columns are interchangeable, so the models
//! use one bounded integer variable `x_i^t` per (agent, type) counting how
//! many resources of type `t` agent `i` receives. The SAEF model expresses
//! the per-pair "sum or avg" disjunction with two binaries `y1_ij, y2_ij`
//! relaxed through a big-M constant; the AEF model keeps the weighted envy
//! rows as hard constraints. Both are pure feasibility programs ("min 1").
//!
//! Variable layout: `x_i^t` occupies index `i * T + t` (agent-major); the
//! SAEF binaries follow in ordered-pair order, `y1` before `y2`.
//! [`decode_allocation`] relies on that layout.

use crate::model::{Allocation, Instance};
use thiserror::Error;

/// Distinct utility columns with multiplicities and member resources.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeTable {
    /// Distinct columns `(u_1(r), ..., u_n(r))`, in first-occurrence order.
    pub types: Vec<Vec<u64>>,
    /// Number of resources of each type.
    pub multiplicity: Vec<usize>,
    /// Member resource indices per type, ascending.
    pub members: Vec<Vec<usize>>,
}

impl TypeTable {
    pub fn num_types(&self) -> usize {
        self.types.len()
    }
}

/// Groups resources by utility column.
pub fn compute_types(instance: &Instance) -> TypeTable {
    let n = instance.num_agents();
    let mut types: Vec<Vec<u64>> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for r in 0..instance.num_resources() {
        let column: Vec<u64> = (0..n).map(|i| instance.utility(i, r)).collect();
        match types.iter().position(|t| *t == column) {
            Some(t) => members[t].push(r),
            None => {
                types.push(column);
                members.push(vec![r]);
            }
        }
    }
    let multiplicity = members.iter().map(Vec::len).collect();
    TypeTable {
        types,
        multiplicity,
        members,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Eq,
    Le,
    Ge,
}

impl Sense {
    fn symbol(self) -> &'static str {
        match self {
            Sense::Eq => "=",
            Sense::Le => "<=",
            Sense::Ge => ">=",
        }
    }
}

/// Sparse linear row: `sum(coeff * var) sense rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    pub terms: Vec<(usize, i128)>,
    pub sense: Sense,
    pub rhs: i128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpVariable {
    pub name: String,
    pub lower: i64,
    pub upper: i64,
}

/// A bounded-integer feasibility program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpModel {
    pub variables: Vec<IpVariable>,
    pub constraints: Vec<LinearConstraint>,
    /// The big-M constant used by disjunctive rows (0 when unused).
    pub big_m: i128,
}

/// One value per model variable, within its declared bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpAssignment {
    pub values: Vec<i64>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IlpError {
    #[error("feasibility search exceeded the node budget of {budget}")]
    NodeBudgetExceeded { budget: u64 },
    #[error("assignment gives type {type_index} a total of {got}, expected {expected}")]
    TypeSumMismatch {
        type_index: usize,
        got: i64,
        expected: usize,
    },
    #[error("assignment has {got} values, model expects at least {expected}")]
    AssignmentTooShort { got: usize, expected: usize },
}

/// `M = sum of all utilities * sum of all weights`, strictly larger than any
/// envy difference a feasible `x` can produce.
fn big_m(instance: &Instance) -> i128 {
    let total_utility: i128 = (0..instance.num_agents())
        .map(|i| instance.utility_row(i).iter().map(|&u| u as i128).sum::<i128>())
        .sum();
    let total_weight: i128 = instance.weights().iter().map(|&w| w as i128).sum();
    total_utility * total_weight
}

fn x_index(num_types: usize, agent: usize, ty: usize) -> usize {
    agent * num_types + ty
}

fn x_variables(instance: &Instance, table: &TypeTable) -> Vec<IpVariable> {
    let mut vars = Vec::new();
    for i in 0..instance.num_agents() {
        for (t, &mult) in table.multiplicity.iter().enumerate() {
            vars.push(IpVariable {
                name: format!("x_a{}_t{}", i + 1, t + 1),
                lower: 0,
                upper: mult as i64,
            });
        }
    }
    vars
}

fn completeness_rows(instance: &Instance, table: &TypeTable) -> Vec<LinearConstraint> {
    let num_types = table.num_types();
    (0..num_types)
        .map(|t| LinearConstraint {
            terms: (0..instance.num_agents())
                .map(|i| (x_index(num_types, i, t), 1i128))
                .collect(),
            sense: Sense::Eq,
            rhs: table.multiplicity[t] as i128,
        })
        .collect()
}

/// Sparse terms of `sum_t x_i^t * t[i] - sum_t x_j^t * t[i]` scaled by
/// `(own_scale, other_scale)`.
fn envy_difference_terms(
    table: &TypeTable,
    i: usize,
    j: usize,
    own_scale: i128,
    other_scale: i128,
) -> Vec<(usize, i128)> {
    let num_types = table.num_types();
    let mut terms = Vec::new();
    for (t, ty) in table.types.iter().enumerate() {
        let value = ty[i] as i128;
        if value == 0 {
            continue;
        }
        terms.push((x_index(num_types, i, t), own_scale * value));
        terms.push((x_index(num_types, j, t), -(other_scale * value)));
    }
    terms
}

/// SAEF feasibility model: completeness per type, and for every ordered
/// pair the two relaxed envy rows plus the disjunction `y1 + y2 >= 1`.
pub fn encode_saef_ip(instance: &Instance, table: &TypeTable) -> IpModel {
    let n = instance.num_agents();
    let m_const = big_m(instance);
    let mut variables = x_variables(instance, table);
    let mut constraints = completeness_rows(instance, table);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let y1 = variables.len();
            variables.push(IpVariable {
                name: format!("y1_a{}_a{}", i + 1, j + 1),
                lower: 0,
                upper: 1,
            });
            let y2 = variables.len();
            variables.push(IpVariable {
                name: format!("y2_a{}_a{}", i + 1, j + 1),
                lower: 0,
                upper: 1,
            });
            // M*y1 - (sum_t x_i^t t[i] - sum_t x_j^t t[i]) <= M
            let mut terms = vec![(y1, m_const)];
            for (v, c) in envy_difference_terms(table, i, j, 1, 1) {
                terms.push((v, -c));
            }
            constraints.push(LinearConstraint {
                terms,
                sense: Sense::Le,
                rhs: m_const,
            });
            // M*y2 - (w_j sum_t x_i^t t[i] - w_i sum_t x_j^t t[i]) <= M
            let (w_i, w_j) = (instance.weight(i) as i128, instance.weight(j) as i128);
            let mut terms = vec![(y2, m_const)];
            for (v, c) in envy_difference_terms(table, i, j, w_j, w_i) {
                terms.push((v, -c));
            }
            constraints.push(LinearConstraint {
                terms,
                sense: Sense::Le,
                rhs: m_const,
            });
            constraints.push(LinearConstraint {
                terms: vec![(y1, 1), (y2, 1)],
                sense: Sense::Ge,
                rhs: 1,
            });
        }
    }
    IpModel {
        variables,
        constraints,
        big_m: m_const,
    }
}

/// AEF feasibility model: completeness per type plus hard weighted envy
/// rows `w_j sum_t x_i^t t[i] >= w_i sum_t x_j^t t[i]` for ordered pairs.
pub fn encode_aef_ip(instance: &Instance, table: &TypeTable) -> IpModel {
    let n = instance.num_agents();
    let variables = x_variables(instance, table);
    let mut constraints = completeness_rows(instance, table);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (w_i, w_j) = (instance.weight(i) as i128, instance.weight(j) as i128);
            constraints.push(LinearConstraint {
                terms: envy_difference_terms(table, i, j, w_j, w_i),
                sense: Sense::Ge,
                rhs: 0,
            });
        }
    }
    IpModel {
        variables,
        constraints,
        big_m: 0,
    }
}

/// A pluggable feasibility engine; the built-in [`DfsBackend`] is the only
/// one shipped, the seam exists so an external MILP solver can be dropped
/// in behind the same contract.
pub trait FeasibilityBackend {
    fn solve(&self, model: &IpModel) -> Result<Option<IpAssignment>, IlpError>;
}

/// Depth-first search over the bounded variable box with residual-interval
/// propagation: a partial assignment is abandoned as soon as some row can no
/// longer be satisfied by any completion.
#[derive(Debug, Clone, Copy)]
pub struct DfsBackend {
    pub node_budget: u64,
}

pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

impl Default for DfsBackend {
    fn default() -> Self {
        Self {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

struct DfsState<'a> {
    model: &'a IpModel,
    /// Branch order: variables by decreasing constraint participation.
    order: Vec<usize>,
    /// Per-variable list of (constraint, coefficient).
    occurrences: Vec<Vec<(usize, i128)>>,
    /// Per-constraint: assigned-part sum and min/max of the unassigned rest.
    fixed: Vec<i128>,
    min_rest: Vec<i128>,
    max_rest: Vec<i128>,
    values: Vec<i64>,
    nodes: u64,
    budget: u64,
}

impl<'a> DfsState<'a> {
    fn new(model: &'a IpModel, budget: u64) -> Self {
        let num_vars = model.variables.len();
        let mut occurrences = vec![Vec::new(); num_vars];
        let mut min_rest = vec![0i128; model.constraints.len()];
        let mut max_rest = vec![0i128; model.constraints.len()];
        for (ci, constraint) in model.constraints.iter().enumerate() {
            for &(v, c) in &constraint.terms {
                occurrences[v].push((ci, c));
                let lo = c * model.variables[v].lower as i128;
                let hi = c * model.variables[v].upper as i128;
                min_rest[ci] += lo.min(hi);
                max_rest[ci] += lo.max(hi);
            }
        }
        let mut order: Vec<usize> = (0..num_vars).collect();
        order.sort_by_key(|&v| (usize::MAX - occurrences[v].len(), v));
        Self {
            model,
            order,
            occurrences,
            fixed: vec![0; model.constraints.len()],
            min_rest,
            max_rest,
            values: vec![0; num_vars],
            nodes: 0,
            budget,
        }
    }

    fn consistent(&self, ci: usize) -> bool {
        let c = &self.model.constraints[ci];
        let lo = self.fixed[ci] + self.min_rest[ci];
        let hi = self.fixed[ci] + self.max_rest[ci];
        match c.sense {
            Sense::Eq => lo <= c.rhs && c.rhs <= hi,
            Sense::Le => lo <= c.rhs,
            Sense::Ge => hi >= c.rhs,
        }
    }

    /// Moves variable `v` from the unassigned rest into the fixed part.
    fn bind(&mut self, v: usize, value: i64) -> bool {
        let (lower, upper) = (
            self.model.variables[v].lower as i128,
            self.model.variables[v].upper as i128,
        );
        let mut ok = true;
        for &(ci, c) in &self.occurrences[v] {
            let lo = c * lower;
            let hi = c * upper;
            self.fixed[ci] += c * value as i128;
            self.min_rest[ci] -= lo.min(hi);
            self.max_rest[ci] -= lo.max(hi);
        }
        for &(ci, _) in &self.occurrences[v] {
            if !self.consistent(ci) {
                ok = false;
                break;
            }
        }
        self.values[v] = value;
        ok
    }

    fn unbind(&mut self, v: usize, value: i64) {
        let (lower, upper) = (
            self.model.variables[v].lower as i128,
            self.model.variables[v].upper as i128,
        );
        for &(ci, c) in &self.occurrences[v] {
            let lo = c * lower;
            let hi = c * upper;
            self.fixed[ci] -= c * value as i128;
            self.min_rest[ci] += lo.min(hi);
            self.max_rest[ci] += lo.max(hi);
        }
    }

    fn dfs(&mut self, depth: usize) -> Result<bool, IlpError> {
        if depth == self.order.len() {
            return Ok(true);
        }
        let v = self.order[depth];
        let (lower, upper) = (self.model.variables[v].lower, self.model.variables[v].upper);
        for value in lower..=upper {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(IlpError::NodeBudgetExceeded {
                    budget: self.budget,
                });
            }
            let ok = self.bind(v, value);
            if ok && self.dfs(depth + 1)? {
                return Ok(true);
            }
            self.unbind(v, value);
        }
        Ok(false)
    }
}

impl FeasibilityBackend for DfsBackend {
    fn solve(&self, model: &IpModel) -> Result<Option<IpAssignment>, IlpError> {
        if model
            .variables
            .iter()
            .any(|v| v.lower > v.upper)
        {
            return Ok(None);
        }
        let mut state = DfsState::new(model, self.node_budget);
        // Empty-rest consistency: rows over no variables or infeasible at
        // the root are caught before branching.
        if !(0..model.constraints.len()).all(|ci| state.consistent(ci)) {
            return Ok(None);
        }
        if state.dfs(0)? {
            Ok(Some(IpAssignment {
                values: state.values,
            }))
        } else {
            Ok(None)
        }
    }
}

/// Solves with the built-in backend at its default node budget.
pub fn solve_ip(model: &IpModel) -> Result<Option<IpAssignment>, IlpError> {
    DfsBackend::default().solve(model)
}

/// Expands a feasible assignment into a concrete complete allocation:
/// agent `i` takes `x_i^t` members of each type, members handed out in
/// ascending resource order.
pub fn decode_allocation(
    instance: &Instance,
    table: &TypeTable,
    assignment: &IpAssignment,
) -> Result<Allocation, IlpError> {
    let n = instance.num_agents();
    let num_types = table.num_types();
    if assignment.values.len() < n * num_types {
        return Err(IlpError::AssignmentTooShort {
            got: assignment.values.len(),
            expected: n * num_types,
        });
    }
    for t in 0..num_types {
        let got: i64 = (0..n)
            .map(|i| assignment.values[x_index(num_types, i, t)])
            .sum();
        if got != table.multiplicity[t] as i64 {
            return Err(IlpError::TypeSumMismatch {
                type_index: t,
                got,
                expected: table.multiplicity[t],
            });
        }
    }
    let mut bundles = vec![Vec::new(); n];
    for t in 0..num_types {
        let mut members = table.members[t].iter();
        for (i, bundle) in bundles.iter_mut().enumerate() {
            let count = assignment.values[x_index(num_types, i, t)] as usize;
            bundle.extend(members.by_ref().take(count));
        }
    }
    Ok(Allocation::new(bundles, instance.num_resources())
        .expect("type sums partition the resources"))
}

/// Plain-text rendering of the model for inspection or hand-off to an
/// external solver: objective, rows, bounds.
pub fn write_lp(model: &IpModel) -> String {
    use std::fmt::Write;
    let mut out = String::from("min 1\nsubject to\n");
    for (ci, constraint) in model.constraints.iter().enumerate() {
        write!(out, "  c{ci}:").unwrap();
        for &(v, c) in &constraint.terms {
            let name = &model.variables[v].name;
            if c >= 0 {
                write!(out, " +{c} {name}").unwrap();
            } else {
                write!(out, " -{} {name}", -c).unwrap();
            }
        }
        writeln!(out, " {} {}", constraint.sense.symbol(), constraint.rhs).unwrap();
    }
    out.push_str("bounds\n");
    for v in &model.variables {
        writeln!(out, "  {} <= {} <= {}", v.lower, v.name, v.upper).unwrap();
    }
    out.push_str("end\n");
    out
}
