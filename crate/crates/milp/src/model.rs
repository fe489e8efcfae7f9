use std::fmt;

use thiserror::Error;

/// Handle to a decision variable of a [`Model`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub(crate) usize);

impl Var {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Handle to a linear constraint of a [`Model`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RowId(pub(crate) usize);

impl RowId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Binary,
    Integer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Cmp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cmp::Le => "<=",
            Cmp::Eq => "=",
            Cmp::Ge => ">=",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug)]
pub(crate) struct VarDef {
    pub(crate) kind: VarKind,
    pub(crate) lower: f64,
    pub(crate) upper: f64,
    pub(crate) name: Option<Box<str>>,
}

#[derive(Clone, Debug)]
pub(crate) struct Constraint {
    pub(crate) terms: Vec<(Var, f64)>,
    pub(crate) cmp: Cmp,
    pub(crate) rhs: f64,
    pub(crate) name: Option<Box<str>>,
}

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("variable index {index} referenced by {context} is not declared")]
    UnknownVariable { index: usize, context: String },
    #[error("non-finite coefficient {value} in {context}")]
    NonFinite { value: f64, context: String },
    #[error("variable {name} has empty domain [{lower}, {upper}]")]
    EmptyDomain { name: String, lower: f64, upper: f64 },
}

/// A linear or mixed-integer linear program.
///
/// Variables are declared first and referenced by [`Var`] handles; constraints
/// are sparse rows. Repeated variables inside one row are merged when the row
/// is added, so callers may accumulate terms freely.
#[derive(Clone, Debug)]
pub struct Model {
    sense: Sense,
    pub(crate) vars: Vec<VarDef>,
    pub(crate) objective: Vec<f64>,
    constant: f64,
    pub(crate) rows: Vec<Constraint>,
    start: Option<Vec<f64>>,
}

impl Model {
    pub fn new(sense: Sense) -> Self {
        Self {
            sense,
            vars: Vec::new(),
            objective: Vec::new(),
            constant: 0.0,
            rows: Vec::new(),
            start: None,
        }
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn is_mip(&self) -> bool {
        self.vars.iter().any(|v| v.kind != VarKind::Continuous)
    }

    pub fn add_var(&mut self, kind: VarKind, lower: f64, upper: f64) -> Var {
        let (lower, upper) = match kind {
            VarKind::Binary => (lower.max(0.0), upper.min(1.0)),
            _ => (lower, upper),
        };
        self.vars.push(VarDef {
            kind,
            lower,
            upper,
            name: None,
        });
        self.objective.push(0.0);
        Var(self.vars.len() - 1)
    }

    /// Continuous variable in `[lower, upper]`; pass infinities for free sides.
    pub fn continuous(&mut self, lower: f64, upper: f64) -> Var {
        self.add_var(VarKind::Continuous, lower, upper)
    }

    pub fn nonneg(&mut self) -> Var {
        self.add_var(VarKind::Continuous, 0.0, f64::INFINITY)
    }

    pub fn binary(&mut self) -> Var {
        self.add_var(VarKind::Binary, 0.0, 1.0)
    }

    pub fn set_name(&mut self, var: Var, name: impl Into<String>) {
        self.vars[var.0].name = Some(name.into().into_boxed_str());
    }

    pub fn var_name(&self, var: Var) -> String {
        match &self.vars[var.0].name {
            Some(n) => n.to_string(),
            None => format!("x{}", var.0),
        }
    }

    pub fn kind(&self, var: Var) -> VarKind {
        self.vars[var.0].kind
    }

    pub fn bounds(&self, var: Var) -> (f64, f64) {
        let v = &self.vars[var.0];
        (v.lower, v.upper)
    }

    pub fn set_bounds(&mut self, var: Var, lower: f64, upper: f64) {
        let v = &mut self.vars[var.0];
        v.lower = lower;
        v.upper = upper;
    }

    pub fn fix(&mut self, var: Var, value: f64) {
        self.set_bounds(var, value, value);
    }

    pub fn set_objective(&mut self, var: Var, coef: f64) {
        self.objective[var.0] = coef;
    }

    pub fn add_objective(&mut self, var: Var, coef: f64) {
        self.objective[var.0] += coef;
    }

    pub fn objective_coef(&self, var: Var) -> f64 {
        self.objective[var.0]
    }

    pub fn set_objective_constant(&mut self, constant: f64) {
        self.constant = constant;
    }

    pub fn objective_constant(&self) -> f64 {
        self.constant
    }

    /// Adds `sum(terms) cmp rhs`. Zero coefficients are dropped and repeated
    /// variables merged.
    pub fn constrain<I>(&mut self, terms: I, cmp: Cmp, rhs: f64) -> RowId
    where
        I: IntoIterator<Item = (Var, f64)>,
    {
        let mut terms: Vec<(Var, f64)> = terms.into_iter().collect();
        terms.sort_by_key(|(v, _)| *v);
        let mut merged: Vec<(Var, f64)> = Vec::with_capacity(terms.len());
        for (v, c) in terms {
            match merged.last_mut() {
                Some((last, acc)) if *last == v => *acc += c,
                _ => merged.push((v, c)),
            }
        }
        merged.retain(|(_, c)| *c != 0.0);
        self.rows.push(Constraint {
            terms: merged,
            cmp,
            rhs,
            name: None,
        });
        RowId(self.rows.len() - 1)
    }

    pub fn set_row_name(&mut self, row: RowId, name: impl Into<String>) {
        self.rows[row.0].name = Some(name.into().into_boxed_str());
    }

    pub fn row_name(&self, row: RowId) -> String {
        match &self.rows[row.0].name {
            Some(n) => n.to_string(),
            None => format!("r{}", row.0),
        }
    }

    /// Copy with every integrality requirement dropped.
    pub fn relaxed(&self) -> Model {
        let mut m = self.clone();
        for v in &mut m.vars {
            v.kind = VarKind::Continuous;
        }
        m.start = None;
        m
    }

    /// Supplies a candidate solution that MIP backends may use as their first
    /// incumbent. Infeasible or mis-sized starts are ignored by the solver.
    pub fn set_start(&mut self, values: Vec<f64>) {
        self.start = Some(values);
    }

    pub fn clear_start(&mut self) {
        self.start = None;
    }

    pub fn start(&self) -> Option<&[f64]> {
        self.start.as_deref()
    }

    /// Evaluates the objective (including its constant) at `values`.
    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.constant
            + self
                .objective
                .iter()
                .zip(values)
                .map(|(c, x)| c * x)
                .sum::<f64>()
    }

    /// Largest violation of any row or bound at `values`.
    pub fn max_violation(&self, values: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (v, x) in self.vars.iter().zip(values) {
            worst = worst.max(v.lower - x).max(x - v.upper);
        }
        for row in &self.rows {
            let lhs: f64 = row.terms.iter().map(|(v, c)| c * values[v.0]).sum();
            let viol = match row.cmp {
                Cmp::Le => lhs - row.rhs,
                Cmp::Ge => row.rhs - lhs,
                Cmp::Eq => (lhs - row.rhs).abs(),
            };
            worst = worst.max(viol);
        }
        worst
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let n = self.vars.len();
        for (i, v) in self.vars.iter().enumerate() {
            if v.lower.is_nan() || v.upper.is_nan() || v.lower > v.upper {
                return Err(ModelError::EmptyDomain {
                    name: self.var_name(Var(i)),
                    lower: v.lower,
                    upper: v.upper,
                });
            }
        }
        for (i, c) in self.objective.iter().enumerate() {
            if !c.is_finite() {
                return Err(ModelError::NonFinite {
                    value: *c,
                    context: format!("objective coefficient of {}", self.var_name(Var(i))),
                });
            }
        }
        if !self.constant.is_finite() {
            return Err(ModelError::NonFinite {
                value: self.constant,
                context: "objective constant".into(),
            });
        }
        for (r, row) in self.rows.iter().enumerate() {
            for (v, c) in &row.terms {
                if v.0 >= n {
                    return Err(ModelError::UnknownVariable {
                        index: v.0,
                        context: self.row_name(RowId(r)),
                    });
                }
                if !c.is_finite() {
                    return Err(ModelError::NonFinite {
                        value: *c,
                        context: self.row_name(RowId(r)),
                    });
                }
            }
            if !row.rhs.is_finite() {
                return Err(ModelError::NonFinite {
                    value: row.rhs,
                    context: format!("right-hand side of {}", self.row_name(RowId(r))),
                });
            }
        }
        Ok(())
    }
}
