use std::fmt::Write as _;

use crate::model::{Model, RowId, Sense, Var, VarKind};

impl Model {
    /// Renders the model in CPLEX LP text format for offline inspection.
    pub fn to_lp_string(&self) -> String {
        let mut out = String::new();
        let sense = match self.sense() {
            Sense::Minimize => "Minimize",
            Sense::Maximize => "Maximize",
        };
        let _ = writeln!(out, "{sense}");
        out.push_str(" obj:");
        let mut any = false;
        for (i, c) in self.objective.iter().enumerate() {
            if *c != 0.0 {
                push_term(&mut out, *c, &self.var_name(Var(i)), !any);
                any = true;
            }
        }
        if self.objective_constant() != 0.0 || !any {
            let _ = write!(out, " {:+}", self.objective_constant());
        }
        out.push_str("\nSubject To\n");
        for (r, row) in self.rows.iter().enumerate() {
            let _ = write!(out, " {}:", self.row_name(RowId(r)));
            if row.terms.is_empty() {
                out.push_str(" 0 x0");
            }
            for (k, (v, c)) in row.terms.iter().enumerate() {
                push_term(&mut out, *c, &self.var_name(*v), k == 0);
            }
            let _ = writeln!(out, " {} {}", row.cmp, row.rhs);
        }
        out.push_str("Bounds\n");
        for (i, v) in self.vars.iter().enumerate() {
            let name = self.var_name(Var(i));
            match (v.lower.is_finite(), v.upper.is_finite()) {
                (true, true) if v.lower == v.upper => {
                    let _ = writeln!(out, " {name} = {}", v.lower);
                }
                (true, true) => {
                    let _ = writeln!(out, " {} <= {name} <= {}", v.lower, v.upper);
                }
                (true, false) if v.lower == 0.0 => {}
                (true, false) => {
                    let _ = writeln!(out, " {name} >= {}", v.lower);
                }
                (false, true) => {
                    let _ = writeln!(out, " -inf <= {name} <= {}", v.upper);
                }
                (false, false) => {
                    let _ = writeln!(out, " {name} free");
                }
            }
        }
        for (label, kind) in [("Binaries", VarKind::Binary), ("Generals", VarKind::Integer)] {
            let names: Vec<String> = (0..self.num_vars())
                .filter(|&i| self.vars[i].kind == kind)
                .map(|i| self.var_name(Var(i)))
                .collect();
            if !names.is_empty() {
                let _ = writeln!(out, "{label}\n {}", names.join(" "));
            }
        }
        out.push_str("End\n");
        out
    }
}

fn push_term(out: &mut String, coef: f64, name: &str, first: bool) {
    if first {
        let _ = write!(out, " {coef} {name}");
    } else if coef < 0.0 {
        let _ = write!(out, " - {} {name}", -coef);
    } else {
        let _ = write!(out, " + {coef} {name}");
    }
}

#[cfg(test)]
mod tests {
    use crate::{Cmp, Model, Sense};

    #[test]
    fn renders_knapsack() {
        let mut m = Model::new(Sense::Maximize);
        let a = m.binary();
        let b = m.binary();
        m.set_name(a, "a");
        m.set_name(b, "b");
        m.set_objective(a, 2.0);
        m.set_objective(b, 3.0);
        let r = m.constrain([(a, 1.0), (b, 1.0)], Cmp::Le, 1.0);
        m.set_row_name(r, "pick_one");
        let text = m.to_lp_string();
        assert!(text.starts_with("Maximize\n obj: 2 a + 3 b\n"));
        assert!(text.contains(" pick_one: 1 a + 1 b <= 1\n"));
        assert!(text.contains("Binaries\n a b\n"));
        assert!(text.ends_with("End\n"));
    }
}
