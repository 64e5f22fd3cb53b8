use serde::{Deserialize, Serialize};

/// One cone block of a [`ConeProgram`]. Blocks own disjoint variable
/// index lists; variables outside every block are free.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConeBlock {
    /// Componentwise `x_i >= 0`.
    Nonneg { vars: Vec<usize> },
    /// `vars = [z, u_1, ..., u_m]` with `||u||_2 <= z`.
    Soc { vars: Vec<usize> },
    /// `vars = [u, v, z_1, ..., z_m]` with `2uv >= ||z||^2`, `u, v >= 0`.
    RotatedSoc { vars: Vec<usize> },
}

impl ConeBlock {
    pub fn vars(&self) -> &[usize] {
        match self {
            ConeBlock::Nonneg { vars } | ConeBlock::Soc { vars } | ConeBlock::RotatedSoc { vars } => {
                vars
            }
        }
    }
}

/// Linear equalities `A x = b` in triplet form.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EqualitySystem {
    pub rows: usize,
    /// `(row, col, value)` entries; repeated positions add up.
    pub triplets: Vec<(usize, usize, f64)>,
    pub rhs: Vec<f64>,
}

/// A cone program: maximize a linear objective subject to linear
/// equalities, with designated variables in nonnegative / second-order /
/// rotated second-order cone blocks and the rest free.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConeProgram {
    pub nvar: usize,
    /// Sparse objective `(var, coefficient)`, to be maximized.
    pub objective: Vec<(usize, f64)>,
    pub equalities: EqualitySystem,
    pub cones: Vec<ConeBlock>,
}

impl ConeProgram {
    /// Structural well-formedness: index bounds, consistent equality
    /// dimensions, disjoint cone blocks of legal arity.
    pub fn validate(&self) -> Result<(), String> {
        for &(v, _) in &self.objective {
            if v >= self.nvar {
                return Err(format!("objective references variable {v} >= nvar"));
            }
        }
        if self.equalities.rhs.len() != self.equalities.rows {
            return Err(format!(
                "rhs length {} != row count {}",
                self.equalities.rhs.len(),
                self.equalities.rows
            ));
        }
        for &(r, c, _) in &self.equalities.triplets {
            if r >= self.equalities.rows || c >= self.nvar {
                return Err(format!("triplet ({r}, {c}) out of bounds"));
            }
        }
        let mut seen = vec![false; self.nvar];
        for (i, block) in self.cones.iter().enumerate() {
            let vars = block.vars();
            let min_len = match block {
                ConeBlock::Nonneg { .. } | ConeBlock::Soc { .. } => 1,
                ConeBlock::RotatedSoc { .. } => 3,
            };
            if vars.len() < min_len {
                return Err(format!("cone block {i} has fewer than {min_len} variables"));
            }
            for &v in vars {
                if v >= self.nvar {
                    return Err(format!("cone block {i} references variable {v} >= nvar"));
                }
                if seen[v] {
                    return Err(format!("variable {v} appears in more than one cone block"));
                }
                seen[v] = true;
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("cone program serializes")
    }

    pub fn from_json(s: &str) -> Result<ConeProgram, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Incremental construction of a [`ConeProgram`].
#[derive(Default)]
pub struct ProgramBuilder {
    nvar: usize,
    objective: Vec<(usize, f64)>,
    rows: usize,
    triplets: Vec<(usize, usize, f64)>,
    rhs: Vec<f64>,
    cones: Vec<ConeBlock>,
    pinned_one: Option<usize>,
}

impl ProgramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn new_var(&mut self) -> usize {
        self.nvar += 1;
        self.nvar - 1
    }

    pub fn new_vars(&mut self, count: usize) -> Vec<usize> {
        (0..count).map(|_| self.new_var()).collect()
    }

    /// Append the equality `sum coeff_i * x_i = rhs`; returns the row index.
    pub fn add_eq(&mut self, terms: &[(usize, f64)], rhs: f64) -> usize {
        let row = self.rows;
        self.rows += 1;
        for &(v, c) in terms {
            debug_assert!(v < self.nvar);
            self.triplets.push((row, v, c));
        }
        self.rhs.push(rhs);
        row
    }

    pub fn add_nonneg(&mut self, vars: Vec<usize>) {
        if !vars.is_empty() {
            self.cones.push(ConeBlock::Nonneg { vars });
        }
    }

    pub fn add_soc(&mut self, vars: Vec<usize>) {
        self.cones.push(ConeBlock::Soc { vars });
    }

    pub fn add_rotated(&mut self, u: usize, v: usize, z: usize) {
        self.cones.push(ConeBlock::RotatedSoc { vars: vec![u, v, z] });
    }

    /// A fresh nonnegative variable.
    pub fn new_slack(&mut self) -> usize {
        let s = self.new_var();
        self.add_nonneg(vec![s]);
        s
    }

    /// A variable pinned to 1 by an equality row (shared per program).
    pub fn pinned_one(&mut self) -> usize {
        if let Some(v) = self.pinned_one {
            return v;
        }
        let v = self.new_var();
        self.add_eq(&[(v, 1.0)], 1.0);
        self.pinned_one = Some(v);
        v
    }

    /// Set the (maximize) objective.
    pub fn set_objective(&mut self, terms: Vec<(usize, f64)>) {
        self.objective = terms;
    }

    pub fn nvar(&self) -> usize {
        self.nvar
    }

    pub fn finish(self) -> ConeProgram {
        let prog = ConeProgram {
            nvar: self.nvar,
            objective: self.objective,
            equalities: EqualitySystem {
                rows: self.rows,
                triplets: self.triplets,
                rhs: self.rhs,
            },
            cones: self.cones,
        };
        debug_assert_eq!(prog.validate(), Ok(()));
        prog
    }
}
