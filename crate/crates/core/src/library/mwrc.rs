//! Three-user multi-way relay channel with amplify-and-forward relaying.
//!
//! Users exchange unicast messages through the relay; the direct links are
//! absent. Message `k` is decoded at user `q(k)` while user `l(k)` is not
//! interested in it. Each receiver either treats the unwanted message as
//! noise or decodes it non-uniquely alongside the wanted ones, giving eight
//! decoder configurations whose union is the full achievable region.
//!
//! A second encoder splits every message into common and private parts
//! (rate splitting); the auxiliary-variable reduction keeps only the private
//! powers and the common interference sum as global variables.

use num_complex::Complex64;

use crate::config::{Identification, SolveOutcome, SolverConfig};
use crate::engine::solve;
use crate::error::Error;
use crate::problem::{
    CaseTag, ConstraintPair, ConvexSet, LinearIneq, RatioPair, StructuredProblem,
};
use crate::term::{AffineExpr, Term};

use super::interference::{
    build_interference_problem, InterferenceNetwork, Objective, RateConstraint,
};

/// Receiver of message `k` (0-based).
pub const RECEIVER_OF: [usize; 3] = [1, 2, 0];
/// The user not interested in message `k` (0-based).
pub const UNINTERESTED: [usize; 3] = [2, 0, 1];

/// One channel draw: user uplink channels, reciprocal downlink channels,
/// per-user SNR caps and effective relay gains.
#[derive(Debug, Clone)]
pub struct MwrcChannel {
    pub h: [Complex64; 3],
    pub g: [Complex64; 3],
    /// Transmit SNR caps of the users.
    pub snr_caps: [f64; 3],
    /// Effective relay gain toward each user: `|g_k|^2 * relay_power / noise`.
    pub relay_gain: [f64; 3],
}

impl MwrcChannel {
    /// Reciprocal channel (`g = conj(h)`) with a uniform SNR cap applied to
    /// the users and the relay.
    pub fn reciprocal(h: [Complex64; 3], snr_cap: f64) -> Self {
        let g = [h[0].conj(), h[1].conj(), h[2].conj()];
        let relay_gain = [
            g[0].norm_sqr() * snr_cap,
            g[1].norm_sqr() * snr_cap,
            g[2].norm_sqr() * snr_cap,
        ];
        MwrcChannel { h, g, snr_caps: [snr_cap; 3], relay_gain }
    }

    pub fn gain(&self, k: usize) -> f64 {
        self.h[k].norm_sqr()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeScheme {
    /// Treat the unwanted message as noise.
    Ian,
    /// Decode the unwanted message non-uniquely together with the wanted ones.
    Snd,
}

/// Base-noise coefficients at the receiver of message `k`: the relayed noise
/// floor `1 + (1 + sum_i |h_i|^2 S_i) / relay_gain_{q(k)}`.
fn relayed_noise(ch: &MwrcChannel, k: usize) -> (Vec<f64>, f64) {
    let q = RECEIVER_OF[k];
    let inv = 1.0 / ch.relay_gain[q];
    let coef = (0..3).map(|i| ch.gain(i) * inv).collect();
    (coef, 1.0 + inv)
}

/// Rate constraints of one decoder configuration as a generic network.
pub fn mwrc_network(ch: &MwrcChannel, decode: [DecodeScheme; 3]) -> InterferenceNetwork {
    let mut constraints = Vec::new();
    for k in 0..3 {
        let l = UNINTERESTED[k];
        let (noise_coef, sigma) = relayed_noise(ch, k);
        let mut own = vec![0.0; 3];
        own[k] = ch.gain(k);
        match decode[k] {
            DecodeScheme::Ian => {
                // Unwanted signal joins the noise floor.
                let mut c = noise_coef.clone();
                c[l] += ch.gain(l);
                constraints.push(RateConstraint {
                    a: unit(k),
                    b: own,
                    c,
                    sigma,
                    num_offset: 0.0,
                });
            }
            DecodeScheme::Snd => {
                constraints.push(RateConstraint {
                    a: unit(k),
                    b: own.clone(),
                    c: noise_coef.clone(),
                    sigma,
                    num_offset: 0.0,
                });
                let mut both = own;
                both[l] += ch.gain(l);
                let mut a = unit(k);
                a[l] = 1.0;
                constraints.push(RateConstraint {
                    a,
                    b: both,
                    c: noise_coef,
                    sigma,
                    num_offset: 0.0,
                });
            }
        }
    }
    InterferenceNetwork {
        n_powers: 3,
        n_rates: 3,
        power_caps: ch.snr_caps.to_vec(),
        constraints,
    }
}

fn unit(k: usize) -> Vec<f64> {
    let mut a = vec![0.0; 3];
    a[k] = 1.0;
    a
}

/// Compiles one decoder configuration.
pub fn build_mwrc_snd(
    ch: &MwrcChannel,
    decode: [DecodeScheme; 3],
    objective: &Objective,
    identification: Identification,
) -> Result<StructuredProblem, Error> {
    build_interference_problem(&mwrc_network(ch, decode), objective, identification)
}

pub const ALL_IAN: [DecodeScheme; 3] = [DecodeScheme::Ian; 3];
pub const ALL_SND: [DecodeScheme; 3] = [DecodeScheme::Snd; 3];

/// All eight decoder configurations, IAN-first.
pub fn decode_configs() -> Vec<[DecodeScheme; 3]> {
    let mut out = Vec::with_capacity(8);
    for bits in 0..8u8 {
        let pick = |b: u8| if bits & (1 << b) == 0 { DecodeScheme::Ian } else { DecodeScheme::Snd };
        out.push([pick(0), pick(1), pick(2)]);
    }
    out
}

/// Outcome of the eight-configuration sweep.
#[derive(Debug, Clone)]
pub struct MwrcSweep {
    pub outcomes: Vec<([DecodeScheme; 3], SolveOutcome)>,
    pub best: usize,
}

impl MwrcSweep {
    pub fn best_outcome(&self) -> &SolveOutcome {
        &self.outcomes[self.best].1
    }

    pub fn value_of(&self, decode: [DecodeScheme; 3]) -> Option<f64> {
        self.outcomes
            .iter()
            .find(|(d, _)| *d == decode)
            .and_then(|(_, o)| o.objective_value)
    }
}

/// Solves every decoder configuration and returns all outcomes with the best
/// one marked. The union value is the maximum over the configurations.
pub fn solve_mwrc_snd(
    ch: &MwrcChannel,
    objective: &Objective,
    cfg: &SolverConfig,
) -> Result<MwrcSweep, Error> {
    let mut outcomes = Vec::with_capacity(8);
    for decode in decode_configs() {
        let p = build_mwrc_snd(ch, decode, objective, cfg.identification)?;
        let out = solve(&p, cfg)?;
        outcomes.push((decode, out));
    }
    let best = outcomes
        .iter()
        .enumerate()
        .max_by(|(_, (_, a)), (_, (_, b))| {
            let av = a.objective_value.unwrap_or(f64::NEG_INFINITY);
            let bv = b.objective_value.unwrap_or(f64::NEG_INFINITY);
            av.total_cmp(&bv)
        })
        .map(|(i, _)| i)
        .expect("eight configurations");
    Ok(MwrcSweep { outcomes, best })
}

// ---------------------------------------------------------------------------
// Rate splitting
// ---------------------------------------------------------------------------

/// One log addend `log2(1 + (b · S) / gamma_k)` of a rate-splitting
/// constraint, with `b` split over private and common SNRs.
#[derive(Debug, Clone)]
pub struct RsLogTerm {
    pub b_private: [f64; 3],
    pub b_common: [f64; 3],
    /// Which user's effective noise normalizes this addend.
    pub k: usize,
}

#[derive(Debug, Clone)]
pub struct RsRow {
    pub a: [f64; 3],
    pub terms: Vec<RsLogTerm>,
}

/// Coefficient table describing a rate-splitting region: each row bounds
/// `a · R` by a sum of log addends.
#[derive(Debug, Clone)]
pub struct RsCoefficients {
    pub rows: Vec<RsRow>,
}

/// Illustrative default table with the usual five constraint families per
/// message cycle: single rate, pair sums, triple sums, the weighted triple,
/// and one symmetric sum-rate cut. Region constants for a specific coding
/// construction should be supplied by the caller in production use.
pub fn default_rs_coefficients(ch: &MwrcChannel) -> RsCoefficients {
    let g = |k: usize| ch.gain(k);
    // Decode-role addends at the receiver of message k.
    let private = |k: usize| RsLogTerm {
        b_private: unit3(k, g(k)),
        b_common: [0.0; 3],
        k,
    };
    let full = |k: usize| RsLogTerm {
        b_private: unit3(k, g(k)),
        b_common: unit3(k, g(k)),
        k,
    };
    let full_plus_foreign = |k: usize| {
        let l = UNINTERESTED[k];
        let mut b_common = unit3(k, g(k));
        b_common[l] += g(l);
        RsLogTerm { b_private: unit3(k, g(k)), b_common, k }
    };
    let private_plus_foreign = |k: usize| {
        let l = UNINTERESTED[k];
        RsLogTerm { b_private: unit3(k, g(k)), b_common: unit3(l, g(l)), k }
    };

    let mut rows = Vec::new();
    for k in 0..3 {
        let q = RECEIVER_OF[k];
        let l = UNINTERESTED[k];
        rows.push(RsRow { a: unit3(k, 1.0), terms: vec![full(k)] });
        rows.push(RsRow {
            a: add3(unit3(k, 1.0), unit3(q, 1.0)),
            terms: vec![private(k), private_plus_foreign(q)],
        });
        rows.push(RsRow {
            a: [1.0, 1.0, 1.0],
            terms: vec![private(k), full_plus_foreign(q), private_plus_foreign(l)],
        });
        rows.push(RsRow {
            a: add3(unit3(k, 1.0), [1.0, 1.0, 1.0]),
            terms: vec![
                private(k),
                full_plus_foreign(q),
                full_plus_foreign(l),
                private_plus_foreign(k),
            ],
        });
    }
    rows.push(RsRow {
        a: [1.0, 1.0, 1.0],
        terms: vec![full_plus_foreign(0), full_plus_foreign(1), full_plus_foreign(2)],
    });
    RsCoefficients { rows }
}

fn unit3(k: usize, v: f64) -> [f64; 3] {
    let mut a = [0.0; 3];
    a[k] = v;
    a
}

fn add3(mut a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Variable layout of the reduced rate-splitting problem.
/// Globals: private SNRs and the common interference sum `y`.
/// Non-globals: common SNRs and rates.
pub mod rs_layout {
    pub const SP: usize = 0;
    pub const Y: usize = 3;
    pub const SC: usize = 4;
    pub const R: usize = 7;
    pub const N: usize = 10;
    pub const N_GLOBAL: usize = 4;
}

/// Effective noise of user `k` as an affine expression over `(S^p, y)`:
/// `1 + |h_l(k)|^2 S^p_l(k) + (1 + y + sum_i |h_i|^2 S^p_i) / relay_gain_q(k)`.
fn rs_noise(ch: &MwrcChannel, k: usize) -> AffineExpr {
    use rs_layout::*;
    let q = RECEIVER_OF[k];
    let l = UNINTERESTED[k];
    let inv = 1.0 / ch.relay_gain[q];
    let mut c = vec![0.0; N];
    for i in 0..3 {
        c[SP + i] = ch.gain(i) * inv;
    }
    c[SP + l] += ch.gain(l);
    c[Y] = inv;
    AffineExpr { c, d: 1.0 + inv }
}

/// Builds the reduced rate-splitting problem: four global variables (three
/// private SNRs plus the common interference sum) and six non-global ones
/// (common SNRs and rates). The common sum enters every effective noise, so
/// replacing it by a lower-bounded auxiliary variable leaves the region
/// unchanged for objectives increasing in the rates.
pub fn build_mwrc_rs(
    ch: &MwrcChannel,
    coeffs: &RsCoefficients,
    objective: &Objective,
) -> Result<StructuredProblem, Error> {
    use rs_layout::*;
    let n = N;

    let objective_pairs = match objective {
        Objective::WeightedSumRate(w) => {
            if w.len() != 3 {
                return Err(Error::Dimension { what: "rate weights", expected: 3, got: w.len() });
            }
            if w.iter().any(|&x| x < 0.0) {
                return Err(Error::NonMonotoneObjective(
                    "negative rate weight makes the objective decreasing in a rate".into(),
                ));
            }
            let mut c = vec![0.0; n];
            for k in 0..3 {
                c[R + k] = w[k];
            }
            vec![RatioPair { num: Term::affine(c, 0.0), den: Term::constant(n, 1.0) }]
        }
        Objective::GlobalEnergyEfficiency { phi, circuit_power } => {
            if phi.len() != 3 {
                return Err(Error::Dimension {
                    what: "amplifier inefficiencies",
                    expected: 3,
                    got: phi.len(),
                });
            }
            let mut num = vec![0.0; n];
            for k in 0..3 {
                num[R + k] = 1.0;
            }
            let mut den = vec![0.0; n];
            for k in 0..3 {
                den[SP + k] = phi[k];
                den[SC + k] = phi[k];
            }
            vec![RatioPair {
                num: Term::affine(num, 0.0),
                den: Term::affine(den, *circuit_power),
            }]
        }
        _ => {
            return Err(Error::IncompatibleCombination(
                "the rate-splitting builder supports sum-rate and global energy \
                 efficiency objectives"
                    .into(),
            ))
        }
    };

    let mut constraints = Vec::with_capacity(coeffs.rows.len());
    for row in &coeffs.rows {
        let mut g_plus = Term::zero(n);
        for (k, &ak) in row.a.iter().enumerate() {
            g_plus.affine.c[R + k] = ak;
        }
        let mut g_minus = Term::zero(n);
        for term in &row.terms {
            let noise = rs_noise(ch, term.k);
            // g_minus accumulates -log2(noise); g_plus the matching
            // -log2(noise + signal).
            let mut sig = noise.clone();
            for i in 0..3 {
                sig.c[SP + i] += term.b_private[i];
                sig.c[SC + i] += term.b_common[i];
                if term.b_private[i] < 0.0 || term.b_common[i] < 0.0 {
                    return Err(Error::Validation(
                        "rate-splitting coefficients must be non-negative".into(),
                    ));
                }
            }
            g_plus = g_plus.add(&Term::log2(sig).scale(-1.0));
            g_minus = g_minus.add(&Term::log2(noise).scale(-1.0));
        }
        constraints.push(ConstraintPair { g_plus, g_minus });
    }

    let lower = vec![0.0; n];
    let mut upper = vec![f64::INFINITY; n];
    for k in 0..3 {
        upper[SP + k] = ch.snr_caps[k];
        upper[SC + k] = ch.snr_caps[k];
    }
    upper[Y] = (0..3).map(|k| ch.gain(k) * ch.snr_caps[k]).sum();
    let mut linear = Vec::new();
    for k in 0..3 {
        // S^p_k + S^c_k <= cap_k
        let mut a = vec![0.0; n];
        a[SP + k] = 1.0;
        a[SC + k] = 1.0;
        linear.push(LinearIneq { a, b: ch.snr_caps[k] });
    }
    // sum_k |h_k|^2 S^c_k - y <= 0
    let mut a = vec![0.0; n];
    for k in 0..3 {
        a[SC + k] = ch.gain(k);
    }
    a[Y] = -1.0;
    linear.push(LinearIneq { a, b: 0.0 });

    Ok(StructuredProblem {
        n_global: N_GLOBAL,
        n_nonglobal: n - N_GLOBAL,
        objective: objective_pairs,
        constraints,
        gminus_signature: vec![-1; N_GLOBAL],
        case: CaseTag::A,
        fx_signature: None,
        domain: ConvexSet { lower, upper, linear },
    })
}

/// Smallest admissible common interference sum for an incumbent of the
/// rate-splitting problem. The effective noises grow with `y`, so tightening
/// `y` to this floor preserves feasibility and the objective value.
pub fn rs_common_sum_floor(ch: &MwrcChannel, xi: &[f64]) -> f64 {
    (0..3).map(|k| ch.gain(k) * xi[k]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subsolvers::{solve_lp, LinearProgram, LpDomain};

    fn test_channel() -> MwrcChannel {
        MwrcChannel::reciprocal(
            [
                Complex64::new(0.9, 0.3),
                Complex64::new(-0.4, 0.8),
                Complex64::new(0.2, -1.1),
            ],
            10.0,
        )
    }

    #[test]
    fn base_noise_at_zero_power() {
        // With all SNRs at zero the effective noise reduces to
        // 1 + 1/relay_gain at the receiver of each message.
        let ch = test_channel();
        for k in 0..3 {
            let net = mwrc_network(&ch, ALL_SND);
            let q = RECEIVER_OF[k];
            // SND rows of message k come in pairs; both share sigma.
            let sigma = net.constraints[2 * k].sigma;
            assert!((sigma - (1.0 + 1.0 / ch.relay_gain[q])).abs() < 1e-12);
        }
    }

    #[test]
    fn config_constraint_counts() {
        let ch = test_channel();
        assert_eq!(mwrc_network(&ch, ALL_IAN).constraints.len(), 3);
        assert_eq!(mwrc_network(&ch, ALL_SND).constraints.len(), 6);
        assert_eq!(
            mwrc_network(&ch, [DecodeScheme::Ian, DecodeScheme::Snd, DecodeScheme::Ian])
                .constraints
                .len(),
            4
        );
    }

    #[test]
    fn zero_power_forces_zero_rates() {
        // Every constraint right-hand side vanishes at S = 0, so the sum-rate
        // LP at zero power is zero.
        let ch = test_channel();
        for decode in decode_configs() {
            let net = mwrc_network(&ch, decode);
            let value = fixed_power_sum_rate(&net, &[0.0; 3]);
            assert!(value.abs() < 1e-9, "sum rate {value} at zero power");
        }
    }

    /// Sum-rate LP over the rates at a fixed power vector.
    fn fixed_power_sum_rate(net: &InterferenceNetwork, p: &[f64]) -> f64 {
        let mut a_ub = Vec::new();
        for c in &net.constraints {
            let num: f64 =
                c.b.iter().zip(p).map(|(b, x)| b * x).sum::<f64>() + c.num_offset;
            let den: f64 = c.c.iter().zip(p).map(|(cc, x)| cc * x).sum::<f64>() + c.sigma;
            a_ub.push((c.a.clone(), (1.0 + num / den).log2()));
        }
        let lp = LinearProgram {
            cost: vec![-1.0; net.n_rates],
            domain: LpDomain {
                a_ub,
                a_eq: vec![],
                bounds: vec![(0.0, f64::INFINITY); net.n_rates],
            },
        };
        let sol = solve_lp(&lp, 1e-10);
        assert!(sol.is_optimal());
        -sol.value
    }

    #[test]
    fn union_dominates_members_at_fixed_powers() {
        // At any fixed power the best of the eight configurations is at
        // least as good as treating everything as noise or decoding all.
        let ch = test_channel();
        let powers = [[1.0, 2.0, 3.0], [10.0, 10.0, 10.0], [0.5, 9.0, 4.0]];
        for p in powers {
            let mut best = f64::NEG_INFINITY;
            let mut ian = 0.0;
            let mut snd = 0.0;
            for decode in decode_configs() {
                let v = fixed_power_sum_rate(&mwrc_network(&ch, decode), &p);
                best = best.max(v);
                if decode == ALL_IAN {
                    ian = v;
                }
                if decode == ALL_SND {
                    snd = v;
                }
            }
            assert!(best >= ian - 1e-9);
            assert!(best >= snd - 1e-9);
        }
    }

    #[test]
    fn rs_problem_shape() {
        let ch = test_channel();
        let coeffs = default_rs_coefficients(&ch);
        let p = build_mwrc_rs(&ch, &coeffs, &Objective::WeightedSumRate(vec![1.0; 3])).unwrap();
        assert_eq!(p.n_global, 4);
        assert_eq!(p.n_nonglobal, 6);
        assert_eq!(p.constraints.len(), 13);
        let rep = p.validate();
        assert!(rep.is_ok(), "{rep}");
        // Initial box per the reduction: [0, caps] x [0, sum of gains*caps].
        let boxr =
            crate::engine::initial_box(&p, &crate::config::SolverConfig::default()).unwrap();
        for k in 0..3 {
            assert!((boxr.upper[k] - ch.snr_caps[k]).abs() < 1e-9);
        }
        let y_cap: f64 = (0..3).map(|k| ch.gain(k) * ch.snr_caps[k]).sum();
        assert!((boxr.upper[3] - y_cap).abs() < 1e-7);
        assert_eq!(boxr.lower, vec![0.0; 4]);
    }

    #[test]
    fn rs_rejects_non_monotone_objective() {
        let ch = test_channel();
        let coeffs = default_rs_coefficients(&ch);
        let err = build_mwrc_rs(&ch, &coeffs, &Objective::WeightedSumRate(vec![1.0, -1.0, 1.0]));
        assert!(matches!(err, Err(Error::NonMonotoneObjective(_))));
    }
}
