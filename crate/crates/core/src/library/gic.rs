//! K-user Gaussian interference channel benchmark with controllable
//! complexity: receiver `k` jointly decodes its own message and that of
//! transmitter `k+1 (mod K)`, and only the first `kappa` transmitters are
//! heard network-wide. Powers beyond `kappa` appear only in signal
//! numerators, so fixing them at their caps is optimal and the compiled
//! problem keeps `kappa` global variables, `K` rate variables and `3K`
//! constraints.

use num_complex::Complex64;

use crate::config::Identification;
use crate::error::Error;
use crate::problem::StructuredProblem;
use crate::rng::CounterRng;

use super::interference::{
    build_interference_problem, InterferenceNetwork, Objective, RateConstraint,
};

#[derive(Debug, Clone)]
pub struct GicSpec {
    pub n_users: usize,
    /// Number of network-wide transmitters, the global dimension.
    pub kappa: usize,
    /// `channels[i][j]`: gain from transmitter `j` to receiver `i`; zero
    /// outside the sparsity pattern.
    pub channels: Vec<Vec<Complex64>>,
    pub power_caps: Vec<f64>,
    pub noise: Vec<f64>,
}

impl GicSpec {
    /// True when transmitter `j` is audible at receiver `i`.
    pub fn audible(&self, i: usize, j: usize) -> bool {
        j == i || j == (i + 1) % self.n_users || j < self.kappa
    }

    /// Decode set of receiver `i`.
    pub fn decode_set(&self, i: usize) -> [usize; 2] {
        [i, (i + 1) % self.n_users]
    }

    /// Random draw with unit-variance complex Gaussian entries on the
    /// sparsity pattern, derived from `(master_seed, realization)`.
    pub fn random(
        master_seed: u64,
        realization: u64,
        n_users: usize,
        kappa: usize,
        power_cap: f64,
        noise: f64,
    ) -> Self {
        let mut rng = CounterRng::new(master_seed, realization);
        let mut channels = vec![vec![Complex64::new(0.0, 0.0); n_users]; n_users];
        let mut spec = GicSpec {
            n_users,
            kappa,
            channels: Vec::new(),
            power_caps: vec![power_cap; n_users],
            noise: vec![noise; n_users],
        };
        for (i, row) in channels.iter_mut().enumerate() {
            for (j, h) in row.iter_mut().enumerate() {
                if spec.audible(i, j) {
                    *h = rng.next_complex_normal();
                }
            }
        }
        spec.channels = channels;
        spec
    }

    fn check(&self) -> Result<(), Error> {
        let k = self.n_users;
        if self.kappa > k {
            return Err(Error::Validation("kappa exceeds the number of users".into()));
        }
        if self.channels.len() != k || self.power_caps.len() != k || self.noise.len() != k {
            return Err(Error::Dimension {
                what: "channel matrix",
                expected: k,
                got: self.channels.len(),
            });
        }
        for (i, row) in self.channels.iter().enumerate() {
            for (j, h) in row.iter().enumerate() {
                if !self.audible(i, j) && h.norm_sqr() != 0.0 {
                    return Err(Error::Validation(format!(
                        "channel ({i}, {j}) violates the sparsity pattern"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Compiles the network with the tail powers pre-substituted at their caps:
/// three decoding constraints per receiver (each message alone and the pair),
/// with the out-of-set audible powers in the noise floors.
pub fn gic_network(spec: &GicSpec) -> Result<InterferenceNetwork, Error> {
    spec.check()?;
    let k_users = spec.n_users;
    let kappa = spec.kappa;
    let gain = |i: usize, j: usize| spec.channels[i][j].norm_sqr();

    let mut constraints = Vec::with_capacity(3 * k_users);
    for i in 0..k_users {
        let set = spec.decode_set(i);
        // Noise floor: thermal noise plus audible out-of-set transmitters.
        let mut c = vec![0.0; kappa];
        let mut sigma = spec.noise[i];
        for j in 0..k_users {
            if set.contains(&j) || !spec.audible(i, j) {
                continue;
            }
            if j < kappa {
                c[j] += gain(i, j);
            } else {
                sigma += gain(i, j) * spec.power_caps[j];
            }
        }
        let subsets: [&[usize]; 3] = [&set[..1], &set[1..], &set[..]];
        for subset in subsets {
            let mut a = vec![0.0; k_users];
            let mut b = vec![0.0; kappa];
            let mut num_offset = 0.0;
            for &j in subset {
                a[j] += 1.0;
                if j < kappa {
                    b[j] += gain(i, j);
                } else {
                    num_offset += gain(i, j) * spec.power_caps[j];
                }
            }
            constraints.push(RateConstraint { a, b, c: c.clone(), sigma, num_offset });
        }
    }
    Ok(InterferenceNetwork {
        n_powers: kappa,
        n_rates: k_users,
        power_caps: spec.power_caps[..kappa].to_vec(),
        constraints,
    })
}

/// Throughput maximization over the compiled network.
pub fn build_gic(
    spec: &GicSpec,
    identification: Identification,
) -> Result<StructuredProblem, Error> {
    let net = gic_network(spec)?;
    build_interference_problem(
        &net,
        &Objective::WeightedSumRate(vec![1.0; spec.n_users]),
        identification,
    )
}
