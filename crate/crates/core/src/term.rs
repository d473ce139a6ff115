//! Structured function terms.
//!
//! Every function appearing in a problem description (objective numerators and
//! denominators, constraint parts) is a term from a closed grammar: affine
//! expressions, base-2 logarithms of affine expressions, negations, and sums.
//! The closed grammar is what makes symbolic monotonicity, convexity and
//! separability checks possible, and it is rich enough to assemble every
//! subproblem as either a linear program or a smooth convex program.

use serde::{Deserialize, Serialize};

use crate::error::Error;

pub const LN2: f64 = std::f64::consts::LN_2;

/// Affine expression `c·v + d` over the full variable vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineExpr {
    pub c: Vec<f64>,
    pub d: f64,
}

impl AffineExpr {
    pub fn constant(n: usize, d: f64) -> Self {
        AffineExpr { c: vec![0.0; n], d }
    }

    /// Single-variable expression `coeff * v[j]`.
    pub fn single(n: usize, j: usize, coeff: f64) -> Self {
        let mut c = vec![0.0; n];
        c[j] = coeff;
        AffineExpr { c, d: 0.0 }
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn eval(&self, v: &[f64]) -> f64 {
        debug_assert_eq!(v.len(), self.c.len());
        self.c.iter().zip(v).map(|(ci, vi)| ci * vi).sum::<f64>() + self.d
    }

    pub fn is_constant(&self) -> bool {
        self.c.iter().all(|&ci| ci == 0.0)
    }

    /// Range of the expression over the box `[lo, hi]` (entries may be infinite).
    pub fn range(&self, lo: &[f64], hi: &[f64]) -> (f64, f64) {
        let mut min = self.d;
        let mut max = self.d;
        for (j, &cj) in self.c.iter().enumerate() {
            if cj == 0.0 {
                continue;
            }
            let (a, b) = if cj > 0.0 { (lo[j], hi[j]) } else { (hi[j], lo[j]) };
            min += cj * a;
            max += cj * b;
        }
        (min, max)
    }
}

/// Weighted base-2 logarithm atom `weight * log2(arg)`.
///
/// User-facing terms only carry weights `+1`/`-1` (a negation flips the sign);
/// arbitrary weights appear internally when terms are scaled, e.g. by the
/// incumbent value `gamma` or a Dinkelbach parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct LogAtom {
    pub weight: f64,
    pub arg: AffineExpr,
}

/// Term in canonical form: an affine part plus weighted log atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub affine: AffineExpr,
    pub logs: Vec<LogAtom>,
}

/// Per-coordinate monotonicity of a term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Constant,
    Increasing,
    Decreasing,
    /// Contributions of opposite sign; no direction can be certified.
    Indefinite,
}

/// Curvature of a term under the grammar rules: `+log2` atoms are concave,
/// `-log2` atoms convex, affine parts both.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curvature {
    Affine,
    Convex,
    Concave,
    Indefinite,
}

impl Term {
    pub fn zero(n: usize) -> Self {
        Term { affine: AffineExpr::constant(n, 0.0), logs: Vec::new() }
    }

    pub fn constant(n: usize, d: f64) -> Self {
        Term { affine: AffineExpr::constant(n, d), logs: Vec::new() }
    }

    pub fn affine(c: Vec<f64>, d: f64) -> Self {
        Term { affine: AffineExpr { c, d }, logs: Vec::new() }
    }

    pub fn from_affine(a: AffineExpr) -> Self {
        Term { affine: a, logs: Vec::new() }
    }

    pub fn log2(arg: AffineExpr) -> Self {
        let n = arg.len();
        Term { affine: AffineExpr::constant(n, 0.0), logs: vec![LogAtom { weight: 1.0, arg }] }
    }

    pub fn len(&self) -> usize {
        self.affine.len()
    }

    pub fn is_affine(&self) -> bool {
        self.logs.is_empty()
    }

    pub fn as_affine(&self) -> Option<&AffineExpr> {
        if self.logs.is_empty() {
            Some(&self.affine)
        } else {
            None
        }
    }

    /// Strict evaluation; fails if any log argument is not strictly positive.
    pub fn eval(&self, v: &[f64]) -> Result<f64, Error> {
        let mut acc = self.affine.eval(v);
        for atom in &self.logs {
            let arg = atom.arg.eval(v);
            if arg <= 0.0 {
                return Err(Error::LogDomain { arg });
            }
            acc += atom.weight * arg.log2();
        }
        Ok(acc)
    }

    /// Evaluation with the convention that a violated log domain yields `+inf`.
    ///
    /// Safe for terms used on the small side of `term <= bound` checks, where
    /// every log atom has non-positive weight (the convex case).
    pub fn eval_extended(&self, v: &[f64]) -> f64 {
        let mut acc = self.affine.eval(v);
        for atom in &self.logs {
            let arg = atom.arg.eval(v);
            if arg <= 0.0 {
                return f64::INFINITY;
            }
            acc += atom.weight * arg.log2();
        }
        if acc.is_nan() {
            f64::INFINITY
        } else {
            acc
        }
    }

    /// Adds `scale * (gradient at v)` into `out`.
    pub fn add_grad(&self, v: &[f64], scale: f64, out: &mut [f64]) {
        for (o, &cj) in out.iter_mut().zip(&self.affine.c) {
            *o += scale * cj;
        }
        for atom in &self.logs {
            let arg = atom.arg.eval(v);
            let w = scale * atom.weight / (LN2 * arg);
            for (o, &cj) in out.iter_mut().zip(&atom.arg.c) {
                *o += w * cj;
            }
        }
    }

    /// Adds `scale * (Hessian at v)` into the dense column-major matrix `out`.
    pub fn add_hess(&self, v: &[f64], scale: f64, out: &mut [f64]) {
        let n = self.len();
        for atom in &self.logs {
            let arg = atom.arg.eval(v);
            let w = -scale * atom.weight / (LN2 * arg * arg);
            for (j, &cj) in atom.arg.c.iter().enumerate() {
                if cj == 0.0 {
                    continue;
                }
                for (i, &ci) in atom.arg.c.iter().enumerate() {
                    if ci != 0.0 {
                        out[j * n + i] += w * ci * cj;
                    }
                }
            }
        }
    }

    pub fn scale(&self, k: f64) -> Term {
        Term {
            affine: AffineExpr {
                c: self.affine.c.iter().map(|ci| ci * k).collect(),
                d: self.affine.d * k,
            },
            logs: self
                .logs
                .iter()
                .map(|a| LogAtom { weight: a.weight * k, arg: a.arg.clone() })
                .collect(),
        }
    }

    pub fn add(&self, other: &Term) -> Term {
        debug_assert_eq!(self.len(), other.len());
        let mut out = self.clone();
        for (ci, cj) in out.affine.c.iter_mut().zip(&other.affine.c) {
            *ci += cj;
        }
        out.affine.d += other.affine.d;
        out.logs.extend(other.logs.iter().cloned());
        out
    }

    pub fn add_constant(&self, d: f64) -> Term {
        let mut out = self.clone();
        out.affine.d += d;
        out
    }

    /// True if the term references variable `j`.
    pub fn depends_on(&self, j: usize) -> bool {
        self.affine.c[j] != 0.0 || self.logs.iter().any(|a| a.arg.c[j] != 0.0)
    }

    /// True if the whole support lies within `range`.
    pub fn supported_within(&self, range: std::ops::Range<usize>) -> bool {
        (0..self.len()).all(|j| range.contains(&j) || !self.depends_on(j))
    }

    /// Certified monotonicity in coordinate `j`, assuming evaluation stays in
    /// the log domain (where every `log2(c·v+d)` is increasing in `c·v+d`).
    pub fn monotonicity(&self, j: usize) -> Monotonicity {
        let mut pos = self.affine.c[j] > 0.0;
        let mut neg = self.affine.c[j] < 0.0;
        for atom in &self.logs {
            let s = atom.weight * atom.arg.c[j];
            pos |= s > 0.0;
            neg |= s < 0.0;
        }
        match (pos, neg) {
            (false, false) => Monotonicity::Constant,
            (true, false) => Monotonicity::Increasing,
            (false, true) => Monotonicity::Decreasing,
            (true, true) => Monotonicity::Indefinite,
        }
    }

    pub fn curvature(&self) -> Curvature {
        let has_pos = self.logs.iter().any(|a| a.weight > 0.0);
        let has_neg = self.logs.iter().any(|a| a.weight < 0.0);
        match (has_pos, has_neg) {
            (false, false) => Curvature::Affine,
            (false, true) => Curvature::Convex,
            (true, false) => Curvature::Concave,
            (true, true) => Curvature::Indefinite,
        }
    }

    pub fn is_convex(&self) -> bool {
        matches!(self.curvature(), Curvature::Affine | Curvature::Convex)
    }

    pub fn is_concave(&self) -> bool {
        matches!(self.curvature(), Curvature::Affine | Curvature::Concave)
    }

    /// Splits the term at the global/non-global boundary `n_global` into parts
    /// depending only on the leading and only on the trailing variables.
    /// Returns `None` if some atom straddles the boundary (non-separable).
    /// The constant offset is assigned to the leading part.
    pub fn split_at(&self, n_global: usize) -> Option<(Term, Term)> {
        let n = self.len();
        let mut x_part = Term::zero(n);
        let mut xi_part = Term::zero(n);
        for (j, &cj) in self.affine.c.iter().enumerate() {
            if j < n_global {
                x_part.affine.c[j] = cj;
            } else {
                xi_part.affine.c[j] = cj;
            }
        }
        x_part.affine.d = self.affine.d;
        for atom in &self.logs {
            let in_x = atom.arg.c[..n_global].iter().any(|&c| c != 0.0);
            let in_xi = atom.arg.c[n_global..].iter().any(|&c| c != 0.0);
            match (in_x, in_xi) {
                (true, true) => return None,
                (false, true) => xi_part.logs.push(atom.clone()),
                // Constant atoms go to the leading part with the offset.
                _ => x_part.logs.push(atom.clone()),
            }
        }
        Some((x_part, xi_part))
    }

    /// Fixes the leading `fixed.len()` variables at the given values; the
    /// result has zero coefficients there and the contributions folded into
    /// constants. Fails if a log argument becomes non-positive and the atom
    /// no longer depends on any free variable.
    pub fn substitute_prefix(&self, fixed: &[f64]) -> Result<Term, Error> {
        let n = self.len();
        let mut affine = self.affine.clone();
        for (j, &xj) in fixed.iter().enumerate() {
            affine.d += affine.c[j] * xj;
            affine.c[j] = 0.0;
        }
        let mut logs = Vec::with_capacity(self.logs.len());
        let mut out = Term { affine, logs: Vec::new() };
        for atom in &self.logs {
            let mut arg = atom.arg.clone();
            for (j, &xj) in fixed.iter().enumerate() {
                arg.d += arg.c[j] * xj;
                arg.c[j] = 0.0;
            }
            if arg.is_constant() {
                if arg.d <= 0.0 {
                    return Err(Error::LogDomain { arg: arg.d });
                }
                out.affine.d += atom.weight * arg.d.log2();
            } else {
                logs.push(LogAtom { weight: atom.weight, arg });
            }
        }
        let _ = n;
        out.logs = logs;
        Ok(out)
    }

    /// Lower bound of the term over the box `[lo, hi]` by interval arithmetic.
    /// Entries of the box may be infinite; the result may be `-inf`.
    pub fn lower_bound(&self, lo: &[f64], hi: &[f64]) -> f64 {
        let mut acc = self.affine.range(lo, hi).0;
        for atom in &self.logs {
            let (amin, amax) = atom.arg.range(lo, hi);
            let v = if atom.weight > 0.0 { amin } else { amax };
            if v <= 0.0 {
                return f64::NEG_INFINITY;
            }
            acc += atom.weight * v.log2();
        }
        acc
    }

    /// Minimal value any log argument attains over the box, `+inf` if there
    /// are no log atoms. Used by the evaluation-guard checks.
    pub fn min_log_arg(&self, lo: &[f64], hi: &[f64]) -> f64 {
        self.logs
            .iter()
            .map(|a| a.arg.range(lo, hi).0)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Nested term encoding used by the JSON problem schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermExpr {
    Affine(AffineExpr),
    Log2(AffineExpr),
    Neg(Box<TermExpr>),
    Sum(Vec<TermExpr>),
}

impl TermExpr {
    /// Canonicalizes into the flat form, checking that every affine payload
    /// has `n` coefficients.
    pub fn compile(&self, n: usize) -> Result<Term, Error> {
        let mut term = Term::zero(n);
        self.accumulate(n, 1.0, &mut term)?;
        Ok(term)
    }

    fn accumulate(&self, n: usize, sign: f64, out: &mut Term) -> Result<(), Error> {
        match self {
            TermExpr::Affine(a) => {
                check_len(a, n)?;
                for (o, &cj) in out.affine.c.iter_mut().zip(&a.c) {
                    *o += sign * cj;
                }
                out.affine.d += sign * a.d;
            }
            TermExpr::Log2(a) => {
                check_len(a, n)?;
                out.logs.push(LogAtom { weight: sign, arg: a.clone() });
            }
            TermExpr::Neg(inner) => inner.accumulate(n, -sign, out)?,
            TermExpr::Sum(parts) => {
                for p in parts {
                    p.accumulate(n, sign, out)?;
                }
            }
        }
        Ok(())
    }
}

fn check_len(a: &AffineExpr, n: usize) -> Result<(), Error> {
    if a.c.len() != n {
        return Err(Error::Dimension {
            what: "affine coefficient vector",
            expected: n,
            got: a.c.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aff(c: Vec<f64>, d: f64) -> AffineExpr {
        AffineExpr { c, d }
    }

    #[test]
    fn canonicalization_flattens_nested_sums() {
        // -( log2(1 + x0) + ( -x1 + 2 ) )
        let expr = TermExpr::Neg(Box::new(TermExpr::Sum(vec![
            TermExpr::Log2(aff(vec![1.0, 0.0], 1.0)),
            TermExpr::Affine(aff(vec![0.0, -1.0], 2.0)),
        ])));
        let t = expr.compile(2).unwrap();
        assert_eq!(t.affine.c, vec![0.0, 1.0]);
        assert_eq!(t.affine.d, -2.0);
        assert_eq!(t.logs.len(), 1);
        assert_eq!(t.logs[0].weight, -1.0);
        let v = t.eval(&[3.0, 5.0]).unwrap();
        assert!((v - (-(4.0f64.log2()) + 5.0 - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn eval_guards_log_domain() {
        let t = Term::log2(aff(vec![1.0], -1.0));
        assert!(t.eval(&[0.5]).is_err());
        assert!(t.eval(&[2.0]).is_ok());
        assert_eq!(Term { logs: vec![LogAtom { weight: -1.0, arg: aff(vec![1.0], -1.0) }], ..Term::zero(1) }.eval_extended(&[0.5]), f64::INFINITY);
    }

    #[test]
    fn monotonicity_combines_atom_signs() {
        // x0 - log2(1 + x0): indefinite in 0
        let t = Term::affine(vec![1.0, 0.0], 0.0)
            .add(&Term::log2(aff(vec![1.0, 0.0], 1.0)).scale(-1.0));
        assert_eq!(t.monotonicity(0), Monotonicity::Indefinite);
        assert_eq!(t.monotonicity(1), Monotonicity::Constant);
        // log2(1 + 2 x1) increasing in 1
        let t = Term::log2(aff(vec![0.0, 2.0], 1.0));
        assert_eq!(t.monotonicity(1), Monotonicity::Increasing);
        assert_eq!(t.scale(-1.0).monotonicity(1), Monotonicity::Decreasing);
    }

    #[test]
    fn split_detects_straddling_atoms() {
        // log2(x0 + xi0) is not separable at boundary 1
        let t = Term::log2(aff(vec![1.0, 1.0], 1.0));
        assert!(t.split_at(1).is_none());
        // x0 + log2(1 + xi0) separates
        let t = Term::affine(vec![1.0, 0.0], 3.0).add(&Term::log2(aff(vec![0.0, 1.0], 1.0)));
        let (x, xi) = t.split_at(1).unwrap();
        assert_eq!(x.affine.d, 3.0);
        assert!(x.logs.is_empty());
        assert_eq!(xi.logs.len(), 1);
        let v = &[2.0, 7.0];
        let total = t.eval(v).unwrap();
        assert!((x.eval(v).unwrap() + xi.eval(v).unwrap() - total).abs() < 1e-12);
    }

    #[test]
    fn substitute_prefix_folds_constants() {
        let t = Term::affine(vec![2.0, 1.0], 0.0).add(&Term::log2(aff(vec![1.0, 1.0], 1.0)));
        let s = t.substitute_prefix(&[3.0]).unwrap();
        assert_eq!(s.affine.c[0], 0.0);
        assert_eq!(s.affine.d, 6.0);
        assert_eq!(s.logs[0].arg.d, 4.0);
        assert!((s.eval(&[0.0, 5.0]).unwrap() - t.eval(&[3.0, 5.0]).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn interval_lower_bound() {
        let t = Term::affine(vec![1.0, -1.0], 0.0).add(&Term::log2(aff(vec![1.0, 0.0], 1.0)));
        let lb = t.lower_bound(&[0.0, 0.0], &[2.0, 3.0]);
        // min = 0 - 3 + log2(1) = -3
        assert!((lb - (-3.0)).abs() < 1e-12);
        let t = Term::log2(aff(vec![1.0], 0.0));
        assert_eq!(t.lower_bound(&[0.0], &[1.0]), f64::NEG_INFINITY);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let t = Term::affine(vec![0.5, -2.0], 1.0)
            .add(&Term::log2(aff(vec![1.0, 2.0], 3.0)))
            .add(&Term::log2(aff(vec![2.0, 0.5], 1.0)).scale(-1.0));
        let v = [0.7, 1.3];
        let mut g = vec![0.0; 2];
        t.add_grad(&v, 1.0, &mut g);
        let h = 1e-6;
        for j in 0..2 {
            let mut vp = v;
            let mut vm = v;
            vp[j] += h;
            vm[j] -= h;
            let fd = (t.eval(&vp).unwrap() - t.eval(&vm).unwrap()) / (2.0 * h);
            assert!((g[j] - fd).abs() < 1e-6, "coord {j}: {} vs {}", g[j], fd);
        }
    }
}
