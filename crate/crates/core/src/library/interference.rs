//! Compilation of interference-network resource allocation into the
//! structured form: rate constraints `a·R <= log2(1 + (b·p + u)/(c·p + s))`
//! over powers `p` (global) and rates `R` (non-global), with a choice of
//! objective and of constraint decomposition.

use crate::config::Identification;
use crate::error::Error;
use crate::problem::{
    CaseTag, ConstraintPair, ConvexSet, LinearIneq, RatioPair, StructuredProblem,
};
use crate::term::{AffineExpr, Term};

/// One rate constraint `a·R <= log2(1 + (b·p + num_offset)/(c·p + sigma))`.
///
/// `num_offset` carries signal power from transmitters that were fixed at
/// their caps and folded out of the variable vector.
#[derive(Debug, Clone)]
pub struct RateConstraint {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub sigma: f64,
    pub num_offset: f64,
}

/// Network description: powers with caps, rates, and the rate constraints.
#[derive(Debug, Clone)]
pub struct InterferenceNetwork {
    pub n_powers: usize,
    pub n_rates: usize,
    pub power_caps: Vec<f64>,
    pub constraints: Vec<RateConstraint>,
}

impl InterferenceNetwork {
    fn check(&self) -> Result<(), Error> {
        for (i, c) in self.constraints.iter().enumerate() {
            if c.a.len() != self.n_rates || c.b.len() != self.n_powers || c.c.len() != self.n_powers
            {
                return Err(Error::Dimension {
                    what: "rate constraint coefficients",
                    expected: self.n_rates,
                    got: c.a.len(),
                });
            }
            let nonneg = c.a.iter().chain(&c.b).chain(&c.c).all(|&v| v >= 0.0);
            if !nonneg || c.sigma <= 0.0 || c.num_offset < 0.0 {
                return Err(Error::Validation(format!(
                    "constraint {i}: coefficients must be non-negative with positive noise"
                )));
            }
        }
        if self.power_caps.len() != self.n_powers {
            return Err(Error::Dimension {
                what: "power caps",
                expected: self.n_powers,
                got: self.power_caps.len(),
            });
        }
        Ok(())
    }
}

/// Performance objective over powers `p` and rates `R`.
#[derive(Debug, Clone)]
pub enum Objective {
    /// `max w · R`; weights must be non-negative.
    WeightedSumRate(Vec<f64>),
    /// `max t` with `R >= t w`: the intersection of the ray `t w` with the
    /// rate-region boundary. The direction is normalized to unit length.
    RateProfile(Vec<f64>),
    /// `max sum R / (phi · p + circuit_power)`.
    GlobalEnergyEfficiency { phi: Vec<f64>, circuit_power: f64 },
    /// `max min_k R_k / (w_k (phi_k p_k + circuit_power_k))`.
    MinWeightedEnergyEfficiency {
        phi: Vec<f64>,
        circuit_power: Vec<f64>,
        weights: Vec<f64>,
    },
    /// `max sum log2(R_k)`.
    ProportionalFairness,
}

impl Objective {
    fn is_fractional_family(&self) -> bool {
        matches!(
            self,
            Objective::GlobalEnergyEfficiency { .. }
                | Objective::MinWeightedEnergyEfficiency { .. }
        )
    }

    fn check(&self, net: &InterferenceNetwork) -> Result<(), Error> {
        let k = net.n_rates;
        let dim =
            |v: &Vec<f64>, what: &'static str| -> Result<(), Error> {
                if v.len() != k {
                    Err(Error::Dimension { what, expected: k, got: v.len() })
                } else {
                    Ok(())
                }
            };
        match self {
            Objective::WeightedSumRate(w) => {
                dim(w, "rate weights")?;
                if w.iter().any(|&x| x < 0.0) {
                    return Err(Error::Validation("rate weights must be non-negative".into()));
                }
            }
            Objective::RateProfile(w) => {
                dim(w, "profile direction")?;
                if w.iter().any(|&x| x < 0.0) || w.iter().all(|&x| x == 0.0) {
                    return Err(Error::Validation(
                        "profile direction must be non-negative and non-zero".into(),
                    ));
                }
            }
            Objective::GlobalEnergyEfficiency { phi, circuit_power } => {
                if phi.len() != net.n_powers {
                    return Err(Error::Dimension {
                        what: "amplifier inefficiencies",
                        expected: net.n_powers,
                        got: phi.len(),
                    });
                }
                if phi.iter().any(|&x| x < 1.0) || *circuit_power <= 0.0 {
                    return Err(Error::Validation(
                        "inefficiencies must be >= 1 with positive circuit power".into(),
                    ));
                }
            }
            Objective::MinWeightedEnergyEfficiency { phi, circuit_power, weights } => {
                if phi.len() != net.n_powers || circuit_power.len() != net.n_powers {
                    return Err(Error::Dimension {
                        what: "per-link power model",
                        expected: net.n_powers,
                        got: phi.len(),
                    });
                }
                dim(weights, "efficiency weights")?;
                if phi.iter().any(|&x| x < 1.0)
                    || circuit_power.iter().any(|&x| x <= 0.0)
                    || weights.iter().any(|&x| x <= 0.0)
                {
                    return Err(Error::Validation(
                        "efficiency model requires phi >= 1, positive circuit power and \
                         positive weights"
                            .into(),
                    ));
                }
            }
            Objective::ProportionalFairness => {}
        }
        Ok(())
    }
}

/// Compiles the network with the case chosen automatically: the separable
/// regime whenever the decomposition admits it, the joint-convex regime for
/// fractional objectives under the tight decomposition.
pub fn build_interference_problem(
    net: &InterferenceNetwork,
    objective: &Objective,
    identification: Identification,
) -> Result<StructuredProblem, Error> {
    let case = match (identification, objective.is_fractional_family()) {
        (Identification::Tight, true) => CaseTag::A,
        _ => CaseTag::B,
    };
    build_interference_problem_with_case(net, objective, identification, case)
}

/// Compiles the network with an explicit case request, rejecting
/// combinations whose corner structure does not exist (e.g. a fractional
/// objective under the tight decomposition cannot use the separable regime:
/// the energy cost grows in `p` while the tight constraint parts fall).
pub fn build_interference_problem_with_case(
    net: &InterferenceNetwork,
    objective: &Objective,
    identification: Identification,
    case: CaseTag,
) -> Result<StructuredProblem, Error> {
    net.check()?;
    objective.check(net)?;

    if case == CaseTag::B
        && identification == Identification::Tight
        && objective.is_fractional_family()
    {
        return Err(Error::IncompatibleCombination(
            "fractional power cost needs increasing constraint parts for a common \
             corner; use the separable decomposition or the joint-convex case"
                .into(),
        ));
    }

    let np = net.n_powers;
    let nr = net.n_rates;
    // Variable layout: powers, rates, then an optional profile variable.
    let extra = matches!(objective, Objective::RateProfile(_)) as usize;
    let n = np + nr + extra;

    let full_b_plus_c = |c: &RateConstraint| -> AffineExpr {
        let mut coef = vec![0.0; n];
        for j in 0..np {
            coef[j] = c.b[j] + c.c[j];
        }
        AffineExpr { c: coef, d: c.sigma + c.num_offset }
    };
    let noise_part = |c: &RateConstraint| -> AffineExpr {
        let mut coef = vec![0.0; n];
        coef[..np].copy_from_slice(&c.c);
        AffineExpr { c: coef, d: c.sigma }
    };
    let rate_part = |c: &RateConstraint| -> Term {
        let mut coef = vec![0.0; n];
        for (k, &ak) in c.a.iter().enumerate() {
            coef[np + k] = ak;
        }
        Term::affine(coef, 0.0)
    };

    let mut constraints = Vec::with_capacity(net.constraints.len());
    for c in &net.constraints {
        let pair = match identification {
            Identification::Tight => ConstraintPair {
                g_plus: rate_part(c).add(&Term::log2(full_b_plus_c(c)).scale(-1.0)),
                g_minus: Term::log2(noise_part(c)).scale(-1.0),
            },
            Identification::Separable => ConstraintPair {
                g_plus: rate_part(c).add(&Term::log2(noise_part(c))),
                g_minus: Term::log2(full_b_plus_c(c)),
            },
        };
        constraints.push(pair);
    }
    let sig = match identification {
        Identification::Tight => -1i8,
        Identification::Separable => 1i8,
    };
    let gminus_signature = vec![sig; np];
    let fx_signature = (case == CaseTag::B).then(|| vec![sig; np]);

    let lower = vec![0.0; n];
    let mut upper = vec![f64::INFINITY; n];
    upper[..np].copy_from_slice(&net.power_caps);
    let mut linear = Vec::new();

    let objective_pairs = match objective {
        Objective::WeightedSumRate(w) => {
            let mut coef = vec![0.0; n];
            for (k, &wk) in w.iter().enumerate() {
                coef[np + k] = wk;
            }
            vec![RatioPair { num: Term::affine(coef, 0.0), den: Term::constant(n, 1.0) }]
        }
        Objective::RateProfile(w) => {
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            let t_col = np + nr;
            for (k, &wk) in w.iter().enumerate() {
                if wk > 0.0 {
                    // t * (w_k / norm) - R_k <= 0
                    let mut a = vec![0.0; n];
                    a[t_col] = wk / norm;
                    a[np + k] = -1.0;
                    linear.push(LinearIneq { a, b: 0.0 });
                }
            }
            let mut coef = vec![0.0; n];
            coef[t_col] = 1.0;
            vec![RatioPair { num: Term::affine(coef, 0.0), den: Term::constant(n, 1.0) }]
        }
        Objective::GlobalEnergyEfficiency { phi, circuit_power } => {
            let mut num = vec![0.0; n];
            for k in 0..nr {
                num[np + k] = 1.0;
            }
            let mut den = vec![0.0; n];
            den[..np].copy_from_slice(phi);
            vec![RatioPair {
                num: Term::affine(num, 0.0),
                den: Term::affine(den, *circuit_power),
            }]
        }
        Objective::MinWeightedEnergyEfficiency { phi, circuit_power, weights } => (0..nr)
            .map(|k| {
                let mut num = vec![0.0; n];
                num[np + k] = 1.0;
                let mut den = vec![0.0; n];
                // Links beyond the power vector keep a constant power model.
                if k < np {
                    den[k] = weights[k] * phi[k];
                }
                let d = weights[k] * circuit_power.get(k).copied().unwrap_or(1.0);
                RatioPair { num: Term::affine(num, 0.0), den: Term::affine(den, d) }
            })
            .collect(),
        Objective::ProportionalFairness => {
            let mut num = Term::zero(n);
            for k in 0..nr {
                num = num.add(&Term::log2(AffineExpr::single(n, np + k, 1.0)));
            }
            vec![RatioPair { num, den: Term::constant(n, 1.0) }]
        }
    };

    Ok(StructuredProblem {
        n_global: np,
        n_nonglobal: nr + extra,
        objective: objective_pairs,
        constraints,
        gminus_signature,
        case,
        fx_signature,
        domain: ConvexSet { lower, upper, linear },
    })
}
