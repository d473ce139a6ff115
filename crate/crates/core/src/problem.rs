//! Problem description: a fractional objective over global and non-global
//! variables, constraints split into `g_plus(x, xi) - g_minus(x) <= 0` pairs,
//! monotonicity signatures, and a convex domain.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::term::{Monotonicity, Term, TermExpr};

/// One objective ratio `num / den`. A single pair is the ordinary fractional
/// objective; several pairs select the pointwise-minimum extension.
#[derive(Debug, Clone)]
pub struct RatioPair {
    pub num: Term,
    pub den: Term,
}

/// Constraint pair `g_plus(x, xi) - g_minus(x) <= 0`; `g_minus` must depend on
/// the global variables only.
#[derive(Debug, Clone)]
pub struct ConstraintPair {
    pub g_plus: Term,
    pub g_minus: Term,
}

/// Linear inequality `a · v <= b` over the full variable vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearIneq {
    pub a: Vec<f64>,
    pub b: f64,
}

/// The convex domain: per-variable bounds plus linear inequalities.
/// Bounds may be infinite; the global dimensions must end up bounded for the
/// initial box to exist.
#[derive(Debug, Clone)]
pub struct ConvexSet {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub linear: Vec<LinearIneq>,
}

impl ConvexSet {
    pub fn bounds_only(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        ConvexSet { lower, upper, linear: Vec::new() }
    }

    pub fn contains(&self, v: &[f64], tol: f64) -> bool {
        v.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(x, (l, u))| *x >= l - tol && *x <= u + tol)
            && self.linear.iter().all(|r| {
                r.a.iter().zip(v).map(|(a, x)| a * x).sum::<f64>() <= r.b + tol
            })
    }
}

/// Which assumption regime the problem is declared under.
///
/// `A`: the functions `gamma * f_minus - f_plus` and all `g_plus` are jointly
/// convex over a convex domain; bounding solves a smooth convex program over
/// both variable groups.
///
/// `B`: every function separates into a global plus a non-global part, the
/// non-global parts are convex, and the global parts of the objective and of
/// all `g_plus` share a corner minimizer described by `fx_signature`;
/// bounding reduces to a subproblem over the non-global variables only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    A,
    B,
}

#[derive(Debug, Clone)]
pub struct StructuredProblem {
    pub n_global: usize,
    pub n_nonglobal: usize,
    pub objective: Vec<RatioPair>,
    pub constraints: Vec<ConstraintPair>,
    /// Joint mixed-monotonicity direction of the `g_minus` family: `+1` in
    /// position `j` means every `g_minus` is increasing in `x_j`.
    pub gminus_signature: Vec<i8>,
    pub case: CaseTag,
    /// Case B only: corner signature of the common minimizer of the global
    /// parts `{gamma * f_minus_x - f_plus_x, g_plus_x}`; `+1` selects the
    /// lower bound of the box in that coordinate.
    pub fx_signature: Option<Vec<i8>>,
    pub domain: ConvexSet,
}

/// Outcome of the mechanical validation checks.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for v in &self.violations {
            writeln!(f, "violation: {v}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

impl StructuredProblem {
    pub fn n(&self) -> usize {
        self.n_global + self.n_nonglobal
    }

    /// Residual `g_plus_i - g_minus_i` at the full point `v`.
    pub fn constraint_residual(&self, i: usize, v: &[f64]) -> Result<f64, Error> {
        let c = &self.constraints[i];
        Ok(c.g_plus.eval(v)? - c.g_minus.eval(v)?)
    }

    /// Largest constraint residual at `v`.
    pub fn max_residual(&self, v: &[f64]) -> Result<f64, Error> {
        let mut worst = f64::NEG_INFINITY;
        for i in 0..self.constraints.len() {
            worst = worst.max(self.constraint_residual(i, v)?);
        }
        Ok(worst)
    }

    /// Objective value at `v`: the minimum over the ratio pairs. Checks the
    /// positive-denominator assumption at every evaluation.
    pub fn objective_value(&self, v: &[f64]) -> Result<f64, Error> {
        let mut best = f64::INFINITY;
        for pair in &self.objective {
            let den = pair.den.eval(v)?;
            if den <= 0.0 {
                return Err(Error::NonPositiveDenominator { value: den });
            }
            best = best.min(pair.num.eval(v)? / den);
        }
        Ok(best)
    }

    /// True if the point satisfies the constraints within `tol` and lies in
    /// the domain.
    pub fn is_feasible(&self, v: &[f64], tol: f64) -> bool {
        self.domain.contains(v, tol)
            && self.max_residual(v).map(|r| r <= tol).unwrap_or(false)
    }

    /// Mechanical validation of the declared structure. An empty violation
    /// list means the problem is accepted; warnings flag conditions that are
    /// handled at run time (e.g. objective log terms whose domain excludes
    /// part of the box).
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        let n = self.n();
        let ng = self.n_global;

        if self.domain.lower.len() != n || self.domain.upper.len() != n {
            rep.violations.push(format!(
                "domain bounds have length {}/{}, expected {}",
                self.domain.lower.len(),
                self.domain.upper.len(),
                n
            ));
            return rep;
        }
        for t in self.all_terms() {
            if t.len() != n {
                rep.violations.push(format!("term over {} variables, expected {}", t.len(), n));
                return rep;
            }
        }
        for r in &self.domain.linear {
            if r.a.len() != n {
                rep.violations.push(format!(
                    "linear constraint over {} variables, expected {}",
                    r.a.len(),
                    n
                ));
                return rep;
            }
        }
        if self.objective.is_empty() {
            rep.violations.push("objective has no ratio pairs".into());
        }
        if self.gminus_signature.len() != ng {
            rep.violations.push(format!(
                "g-minus signature has length {}, expected {}",
                self.gminus_signature.len(),
                ng
            ));
            return rep;
        }

        // g_minus must be a function of the global variables only.
        for (i, c) in self.constraints.iter().enumerate() {
            for j in ng..n {
                if c.g_minus.depends_on(j) {
                    rep.violations.push(format!(
                        "constraint {i}: g-minus depends on non-global variable {}",
                        j - ng
                    ));
                    break;
                }
            }
        }

        // The g_minus family must be jointly mixed monotonic per signature.
        for (i, c) in self.constraints.iter().enumerate() {
            for j in 0..ng {
                let dir = c.g_minus.monotonicity(j);
                let ok = match dir {
                    Monotonicity::Constant => true,
                    Monotonicity::Increasing => self.gminus_signature[j] > 0,
                    Monotonicity::Decreasing => self.gminus_signature[j] < 0,
                    Monotonicity::Indefinite => false,
                };
                if !ok {
                    rep.violations.push(format!(
                        "constraint {i}: g-minus direction in global variable {j} \
                         contradicts the declared signature"
                    ));
                }
            }
        }

        // Denominators must stay positive; log arguments of constraint terms
        // must stay positive over the domain bounds.
        for (j, pair) in self.objective.iter().enumerate() {
            if pair.den.lower_bound(&self.domain.lower, &self.domain.upper) <= 0.0 {
                rep.violations.push(format!(
                    "objective pair {j}: denominator can be non-positive on the domain"
                ));
            }
            if pair.num.min_log_arg(&self.domain.lower, &self.domain.upper) <= 0.0 {
                rep.warnings.push(format!(
                    "objective pair {j}: numerator log argument can reach zero on the \
                     domain boundary; evaluation is guarded"
                ));
            }
        }
        for (i, c) in self.constraints.iter().enumerate() {
            let lo = &self.domain.lower;
            let hi = &self.domain.upper;
            if c.g_plus.min_log_arg(lo, hi) <= 0.0 || c.g_minus.min_log_arg(lo, hi) <= 0.0 {
                rep.violations.push(format!(
                    "constraint {i}: log argument can be non-positive over the domain"
                ));
            }
        }

        match self.case {
            CaseTag::A => {
                for (i, c) in self.constraints.iter().enumerate() {
                    if !c.g_plus.is_convex() {
                        rep.violations.push(format!("constraint {i}: g-plus is not convex"));
                    }
                }
                for (j, pair) in self.objective.iter().enumerate() {
                    if !pair.num.is_concave() {
                        rep.violations
                            .push(format!("objective pair {j}: numerator is not concave"));
                    }
                    if !pair.den.is_convex() {
                        rep.violations
                            .push(format!("objective pair {j}: denominator is not convex"));
                    }
                }
            }
            CaseTag::B => self.validate_case_b(&mut rep),
        }

        rep
    }

    fn validate_case_b(&self, rep: &mut ValidationReport) {
        let ng = self.n_global;
        let fx = match &self.fx_signature {
            Some(s) if s.len() == ng => s.clone(),
            Some(s) => {
                rep.violations.push(format!(
                    "fx signature has length {}, expected {}",
                    s.len(),
                    ng
                ));
                return;
            }
            None => {
                rep.violations.push("separable case declared without fx signature".into());
                return;
            }
        };

        // The domain must be a product of a global box and a non-global set.
        for (r, row) in self.domain.linear.iter().enumerate() {
            if row.a[..ng].iter().any(|&a| a != 0.0) {
                rep.violations.push(format!(
                    "linear domain constraint {r} involves global variables; the \
                     separable case requires box-only global domain"
                ));
            }
        }

        // Every term must separate, the non-global parts must be convex (or
        // concave for numerators), and the global parts must share the corner
        // minimizer described by the fx signature.
        let mut check_split = |name: String, t: &Term, want_convex_xi: bool| -> Option<Term> {
            match t.split_at(ng) {
                None => {
                    rep.violations.push(format!("{name}: non-separable term"));
                    None
                }
                Some((x_part, xi_part)) => {
                    let ok = if want_convex_xi {
                        xi_part.is_convex()
                    } else {
                        xi_part.is_concave()
                    };
                    if !ok {
                        rep.violations.push(format!(
                            "{name}: non-global part has the wrong curvature"
                        ));
                    }
                    Some(x_part)
                }
            }
        };

        let mut gplus_x = Vec::new();
        for (i, c) in self.constraints.iter().enumerate() {
            if let Some(x_part) = check_split(format!("constraint {i}: g-plus"), &c.g_plus, true) {
                gplus_x.push(x_part);
            }
        }
        let mut num_x = Vec::new();
        let mut den_x = Vec::new();
        for (j, pair) in self.objective.iter().enumerate() {
            if let Some(x) = check_split(format!("objective pair {j}: numerator"), &pair.num, false)
            {
                num_x.push(x);
            }
            if let Some(x) =
                check_split(format!("objective pair {j}: denominator"), &pair.den, true)
            {
                den_x.push(x);
            }
        }

        // Corner consistency: for fx[j] = +1 the functions
        // {gamma * den_x - num_x, g_plus_x} must all be increasing in x_j for
        // every admissible gamma >= gamma0 (and mirrored for -1). The
        // mechanical rule: g_plus_x direction matches fx, den_x direction
        // matches fx, and num_x direction matches -fx (constant parts are
        // direction-free).
        let dir_matches = |t: &Term, j: usize, want: i8| -> bool {
            match t.monotonicity(j) {
                Monotonicity::Constant => true,
                Monotonicity::Increasing => want > 0,
                Monotonicity::Decreasing => want < 0,
                Monotonicity::Indefinite => false,
            }
        };
        for j in 0..ng {
            let want = fx[j];
            for (i, t) in gplus_x.iter().enumerate() {
                if !dir_matches(t, j, want) {
                    rep.violations.push(format!(
                        "constraint {i}: global part of g-plus contradicts the fx \
                         signature in variable {j}"
                    ));
                }
            }
            for (i, t) in den_x.iter().enumerate() {
                if !dir_matches(t, j, want) {
                    rep.violations.push(format!(
                        "objective pair {i}: global part of the denominator contradicts \
                         the fx signature in variable {j}"
                    ));
                }
            }
            for (i, t) in num_x.iter().enumerate() {
                if !dir_matches(t, j, -want) {
                    rep.violations.push(format!(
                        "objective pair {i}: global part of the numerator contradicts \
                         the fx signature in variable {j}"
                    ));
                }
            }
        }
    }

    fn all_terms(&self) -> impl Iterator<Item = &Term> {
        self.objective
            .iter()
            .flat_map(|p| [&p.num, &p.den])
            .chain(self.constraints.iter().flat_map(|c| [&c.g_plus, &c.g_minus]))
    }
}

/// Free-function form of [`StructuredProblem::validate`].
pub fn validate_problem(problem: &StructuredProblem) -> ValidationReport {
    problem.validate()
}

// ---------------------------------------------------------------------------
// JSON schema
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct RatioPairJson {
    num: TermExpr,
    den: TermExpr,
}

#[derive(Debug, Serialize, Deserialize)]
struct ConstraintJson {
    gplus: TermExpr,
    gminus: TermExpr,
}

#[derive(Debug, Serialize, Deserialize)]
struct SignaturesJson {
    gminus: Vec<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    fx: Option<Vec<i8>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct DomainJson {
    /// Per-variable bounds; `null` entries mean unbounded on that side.
    #[serde(rename = "box")]
    boxed: BoxJson,
    #[serde(default)]
    linear: Vec<LinearIneq>,
}

#[derive(Debug, Serialize, Deserialize)]
struct BoxJson {
    lower: Vec<Option<f64>>,
    upper: Vec<Option<f64>>,
}

/// Serde-facing mirror of [`StructuredProblem`].
#[derive(Debug, Serialize, Deserialize)]
pub struct ProblemJson {
    n_global: usize,
    n_nonglobal: usize,
    objective: Vec<RatioPairJson>,
    constraints: Vec<ConstraintJson>,
    signatures: SignaturesJson,
    case: CaseTag,
    domain: DomainJson,
}

impl StructuredProblem {
    pub fn from_json(json: &str) -> Result<Self, Error> {
        let parsed: ProblemJson = serde_json::from_str(json)?;
        parsed.compile()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ProblemJson::from_problem(self)).expect("serializable")
    }
}

impl ProblemJson {
    pub fn compile(&self) -> Result<StructuredProblem, Error> {
        let n = self.n_global + self.n_nonglobal;
        let objective = self
            .objective
            .iter()
            .map(|p| Ok(RatioPair { num: p.num.compile(n)?, den: p.den.compile(n)? }))
            .collect::<Result<Vec<_>, Error>>()?;
        let constraints = self
            .constraints
            .iter()
            .map(|c| {
                Ok(ConstraintPair { g_plus: c.gplus.compile(n)?, g_minus: c.gminus.compile(n)? })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        if self.domain.boxed.lower.len() != n || self.domain.boxed.upper.len() != n {
            return Err(Error::Dimension {
                what: "domain box",
                expected: n,
                got: self.domain.boxed.lower.len(),
            });
        }
        let lower = self
            .domain
            .boxed
            .lower
            .iter()
            .map(|b| b.unwrap_or(f64::NEG_INFINITY))
            .collect();
        let upper =
            self.domain.boxed.upper.iter().map(|b| b.unwrap_or(f64::INFINITY)).collect();
        Ok(StructuredProblem {
            n_global: self.n_global,
            n_nonglobal: self.n_nonglobal,
            objective,
            constraints,
            gminus_signature: self.signatures.gminus.clone(),
            case: self.case,
            fx_signature: self.signatures.fx.clone(),
            domain: ConvexSet { lower, upper, linear: self.domain.linear.clone() },
        })
    }

    pub fn from_problem(p: &StructuredProblem) -> Self {
        let term_to_expr = |t: &Term| -> TermExpr {
            let mut parts = Vec::new();
            if !t.affine.is_constant() || t.affine.d != 0.0 || t.logs.is_empty() {
                parts.push(TermExpr::Affine(t.affine.clone()));
            }
            for atom in &t.logs {
                let base = TermExpr::Log2(atom.arg.clone());
                // Weights other than +-1 only arise internally; emit the
                // nearest grammar form (sign times the atom).
                if atom.weight >= 0.0 {
                    parts.push(base);
                } else {
                    parts.push(TermExpr::Neg(Box::new(base)));
                }
            }
            if parts.len() == 1 {
                parts.pop().unwrap()
            } else {
                TermExpr::Sum(parts)
            }
        };
        ProblemJson {
            n_global: p.n_global,
            n_nonglobal: p.n_nonglobal,
            objective: p
                .objective
                .iter()
                .map(|pair| RatioPairJson {
                    num: term_to_expr(&pair.num),
                    den: term_to_expr(&pair.den),
                })
                .collect(),
            constraints: p
                .constraints
                .iter()
                .map(|c| ConstraintJson {
                    gplus: term_to_expr(&c.g_plus),
                    gminus: term_to_expr(&c.g_minus),
                })
                .collect(),
            signatures: SignaturesJson {
                gminus: p.gminus_signature.clone(),
                fx: p.fx_signature.clone(),
            },
            case: p.case,
            domain: DomainJson {
                boxed: BoxJson {
                    lower: p
                        .domain
                        .lower
                        .iter()
                        .map(|&b| if b.is_finite() { Some(b) } else { None })
                        .collect(),
                    upper: p
                        .domain
                        .upper
                        .iter()
                        .map(|&b| if b.is_finite() { Some(b) } else { None })
                        .collect(),
                },
                linear: p.domain.linear.clone(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{AffineExpr, Term};

    /// Small separable two-variable problem used by several tests.
    fn sample_case_b() -> StructuredProblem {
        // max -x0 s.t. const - log2(1 + x0 + x1) <= 0, x in [0, 5]^2
        let n = 2;
        StructuredProblem {
            n_global: 2,
            n_nonglobal: 0,
            objective: vec![RatioPair {
                num: Term::affine(vec![-1.0, 0.0], 0.0),
                den: Term::constant(n, 1.0),
            }],
            constraints: vec![ConstraintPair {
                g_plus: Term::constant(n, 2.0),
                g_minus: Term::log2(AffineExpr { c: vec![1.0, 1.0], d: 1.0 }),
            }],
            gminus_signature: vec![1, 1],
            case: CaseTag::B,
            fx_signature: Some(vec![1, 1]),
            domain: ConvexSet::bounds_only(vec![0.0, 0.0], vec![5.0, 5.0]),
        }
    }

    #[test]
    fn sample_problem_validates() {
        let rep = sample_case_b().validate();
        assert!(rep.is_ok(), "{rep}");
    }

    #[test]
    fn gminus_referencing_nonglobal_is_rejected() {
        let mut p = sample_case_b();
        p.n_global = 1;
        p.n_nonglobal = 1;
        p.fx_signature = Some(vec![1]);
        p.gminus_signature = vec![1];
        let rep = p.validate();
        assert!(rep
            .violations
            .iter()
            .any(|v| v.contains("g-minus depends on non-global variable")));
    }

    #[test]
    fn non_separable_term_is_rejected_in_case_b() {
        let mut p = sample_case_b();
        p.n_global = 1;
        p.n_nonglobal = 1;
        p.gminus_signature = vec![1];
        p.fx_signature = Some(vec![1]);
        // log2(1 + x0 + xi0) straddles the boundary.
        p.constraints[0].g_minus = Term::zero(2);
        p.constraints[0].g_plus = Term::log2(AffineExpr { c: vec![1.0, 1.0], d: 1.0 });
        let rep = p.validate();
        assert!(rep.violations.iter().any(|v| v.contains("non-separable term")), "{rep}");
    }

    #[test]
    fn wrong_signature_is_rejected() {
        let mut p = sample_case_b();
        p.gminus_signature = vec![-1, 1];
        let rep = p.validate();
        assert!(!rep.is_ok());
    }

    #[test]
    fn nonpositive_denominator_is_rejected() {
        let mut p = sample_case_b();
        p.objective[0].den = Term::affine(vec![1.0, 0.0], 0.0); // zero at x0 = 0
        let rep = p.validate();
        assert!(rep
            .violations
            .iter()
            .any(|v| v.contains("denominator can be non-positive")));
    }

    #[test]
    fn json_round_trip() {
        let p = sample_case_b();
        let json = p.to_json();
        let q = StructuredProblem::from_json(&json).unwrap();
        assert!(q.validate().is_ok());
        assert_eq!(p.n_global, q.n_global);
        assert_eq!(p.constraints.len(), q.constraints.len());
        let v = [1.5, 2.5];
        assert!(
            (p.constraint_residual(0, &v).unwrap() - q.constraint_residual(0, &v).unwrap()).abs()
                < 1e-12
        );
        assert!((p.objective_value(&v).unwrap() - q.objective_value(&v).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn json_schema_shape() {
        let json = r#"{
            "n_global": 1,
            "n_nonglobal": 1,
            "objective": [{"num": {"affine": {"c": [0.0, 1.0], "d": 0.0}},
                           "den": {"affine": {"c": [0.0, 0.0], "d": 1.0}}}],
            "constraints": [{
                "gplus": {"sum": [{"affine": {"c": [0.0, 1.0], "d": 0.0}},
                                   {"neg": {"log2": {"c": [1.0, 0.0], "d": 1.0}}}]},
                "gminus": {"neg": {"log2": {"c": [0.5, 0.0], "d": 1.0}}}
            }],
            "signatures": {"gminus": [-1], "fx": [-1]},
            "case": "B",
            "domain": {"box": {"lower": [0.0, 0.0], "upper": [2.0, null]}}
        }"#;
        let p = StructuredProblem::from_json(json).unwrap();
        assert!(p.validate().is_ok(), "{}", p.validate());
        assert_eq!(p.domain.upper[1], f64::INFINITY);
        let r = p.constraint_residual(0, &[1.0, 0.5]).unwrap();
        // 0.5 - log2(2) + log2(1.5)
        assert!((r - (0.5 - 1.0 + 1.5f64.log2())).abs() < 1e-12);
    }
}
