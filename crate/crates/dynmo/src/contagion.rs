//! Interbank default contagion: iterated loss write-downs over an exposure
//! matrix, and the exact mapping onto directed weighted activation.
//!
//! `E[i][j]` is institution `i`'s exposure to `j` — the loss `i` takes if
//! `j` defaults, scaled by `j`'s loss-given-default factor `1 - R_j`.
//! From capitals `c`, the cascade iterates
//! `c_{k+1}(j) = max(c_0(j) - sum over defaulted i of (1-R_i) E[j][i], 0)`
//! to a fixpoint (reached within `n - 1` steps). A bank is insolvent when
//! its capital hits zero. The same process is an activation cascade on the
//! digraph with arcs `i -> j` of weight `(1-R_i) E[j][i]`, thresholds
//! `c(j)`, seeded by the initially insolvent banks — phase by phase.

use crate::error::{Error, Result};
use crate::graph::WeightedInstance;
use crate::rational::Rational;

#[derive(Debug, Clone)]
pub struct BankingNetwork {
    n: usize,
    /// `exposures[i][j]`: market value of `j`'s liabilities to `i`.
    exposures: Vec<Vec<Rational>>,
    capital: Vec<Rational>,
    recovery: Vec<Rational>,
}

impl BankingNetwork {
    pub fn new(
        exposures: Vec<Vec<Rational>>,
        capital: Vec<Rational>,
        recovery: Vec<Rational>,
    ) -> Result<Self> {
        let n = capital.len();
        if exposures.len() != n || recovery.len() != n {
            return Err(Error::InvalidInstance(
                "exposure matrix, capitals and recovery rates must agree on the institution count"
                    .into(),
            ));
        }
        for (i, row) in exposures.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInstance(format!(
                    "exposure row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if !row[i].is_zero() {
                return Err(Error::InvalidInstance(format!(
                    "self-exposure at institution {i} must be zero"
                )));
            }
        }
        let one = Rational::one();
        for (i, r) in recovery.iter().enumerate() {
            if r > &one {
                return Err(Error::InvalidInstance(format!(
                    "recovery rate of institution {i} is {r}, above 1"
                )));
            }
        }
        Ok(BankingNetwork {
            n,
            exposures,
            capital,
            recovery,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn capital(&self, i: usize) -> &Rational {
        &self.capital[i]
    }

    pub fn recovery(&self, i: usize) -> &Rational {
        &self.recovery[i]
    }

    pub fn exposure(&self, creditor: usize, debtor: usize) -> &Rational {
        &self.exposures[creditor][debtor]
    }
}

/// Capital trajectories (`capitals[k][j]`, padded to `n` rounds for format
/// stability) and the final insolvent set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CascadeResult {
    pub capitals: Vec<Vec<Rational>>,
    pub insolvent: Vec<usize>,
}

impl CascadeResult {
    /// First round at which `j`'s capital is zero (0 = insolvent from the
    /// start), or `None` if it survives.
    pub fn first_default_round(&self, j: usize) -> Option<usize> {
        self.capitals.iter().position(|row| row[j].is_zero())
    }
}

/// Run the loss cascade to its fixpoint.
pub fn loss_cascade(net: &BankingNetwork) -> CascadeResult {
    let n = net.n;
    if n == 0 {
        return CascadeResult {
            capitals: Vec::new(),
            insolvent: Vec::new(),
        };
    }
    let c0 = net.capital.clone();
    let one = Rational::one();
    let mut seq = vec![c0.clone()];
    while seq.len() < n {
        let current = seq.last().expect("nonempty");
        let defaulted: Vec<usize> = (0..n).filter(|&i| current[i].is_zero()).collect();
        let mut next = Vec::with_capacity(n);
        for j in 0..n {
            let mut loss = Rational::zero();
            for &i in &defaulted {
                let lgd = one.saturating_sub(&net.recovery[i]);
                loss += &(&lgd * &net.exposures[j][i]);
            }
            next.push(c0[j].saturating_sub(&loss));
        }
        if &next == current {
            break;
        }
        seq.push(next);
    }
    let last = seq.last().expect("nonempty").clone();
    while seq.len() < n {
        seq.push(last.clone());
    }
    let insolvent = (0..n).filter(|&j| last[j].is_zero()).collect();
    CascadeResult {
        capitals: seq,
        insolvent,
    }
}

/// The contagion process as a directed weighted activation instance:
/// arc `i -> j` with weight `(1 - R_i) * E[j][i]` for every positive
/// loss channel, thresholds `c(j)`, seeds = banks with zero capital.
pub fn to_activation_instance(net: &BankingNetwork) -> (WeightedInstance, Vec<usize>) {
    let n = net.n;
    let one = Rational::one();
    let mut arcs = Vec::new();
    for i in 0..n {
        let lgd = one.saturating_sub(&net.recovery[i]);
        if lgd.is_zero() {
            continue;
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            let w = &lgd * &net.exposures[j][i];
            if !w.is_zero() {
                arcs.push((i, j, w));
            }
        }
    }
    let inst = WeightedInstance::new(n, true, arcs, net.capital.clone())
        .expect("a valid network maps to a valid instance");
    let seed = (0..n).filter(|&j| net.capital[j].is_zero()).collect();
    (inst, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ri(n: u64) -> Rational {
        Rational::from_integer(n)
    }

    fn r(n: u64, d: u64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn two_banks() -> BankingNetwork {
        // Bank 0 starts insolvent; bank 1 is exposed to it for 10 with
        // recovery 2/5, so the write-down of 6 wipes its capital of 5.
        BankingNetwork::new(
            vec![vec![ri(0), ri(0)], vec![ri(10), ri(0)]],
            vec![ri(0), ri(5)],
            vec![r(2, 5), ri(0)],
        )
        .unwrap()
    }

    #[test]
    fn one_step_default_propagation() {
        let net = two_banks();
        let result = loss_cascade(&net);
        assert_eq!(result.insolvent, vec![0, 1]);
        assert_eq!(result.capitals.len(), 2);
        assert_eq!(result.capitals[1], vec![ri(0), ri(0)]);
        assert_eq!(result.first_default_round(1), Some(1));
    }

    #[test]
    fn healthy_network_has_no_insolvencies() {
        let net = BankingNetwork::new(
            vec![vec![ri(0), ri(1)], vec![ri(1), ri(0)]],
            vec![ri(5), ri(5)],
            vec![ri(0), ri(0)],
        )
        .unwrap();
        let result = loss_cascade(&net);
        assert!(result.insolvent.is_empty());
        assert_eq!(result.first_default_round(0), None);
    }

    #[test]
    fn three_bank_chain_falls_in_two_rounds() {
        let mut exposures = vec![vec![ri(0); 3]; 3];
        exposures[1][0] = ri(10);
        exposures[2][1] = ri(10);
        let net = BankingNetwork::new(exposures, vec![ri(0), ri(5), ri(5)], vec![ri(0); 3]).unwrap();
        let result = loss_cascade(&net);
        assert_eq!(result.insolvent, vec![0, 1, 2]);
        assert_eq!(result.first_default_round(1), Some(1));
        assert_eq!(result.first_default_round(2), Some(2));
        assert_eq!(result.capitals.len(), 3);
    }

    #[test]
    fn capitals_never_increase() {
        let net = two_banks();
        let result = loss_cascade(&net);
        for j in 0..net.n() {
            for pair in result.capitals.windows(2) {
                assert!(pair[1][j] <= pair[0][j]);
            }
        }
    }

    #[test]
    fn mapping_matches_the_worked_example() {
        let net = two_banks();
        let (inst, seed) = to_activation_instance(&net);
        assert!(inst.directed());
        assert_eq!(seed, vec![0]);
        let arcs: Vec<_> = inst.edges().iter().collect();
        assert_eq!(arcs.len(), 1);
        assert_eq!((arcs[0].u, arcs[0].v), (0, 1));
        assert_eq!(arcs[0].weight, ri(6));
        assert_eq!(inst.threshold(1), &ri(5));
        let trace = inst.activate(&seed).unwrap();
        assert_eq!(trace.fixpoint(), &[0, 1]);
    }

    #[test]
    fn full_recovery_sends_no_influence() {
        let mut exposures = vec![vec![ri(0); 2]; 2];
        exposures[1][0] = ri(10);
        let net = BankingNetwork::new(exposures, vec![ri(0), ri(5)], vec![ri(1), ri(0)]).unwrap();
        let (inst, _) = to_activation_instance(&net);
        assert!(inst.edges().is_empty());
        assert!(loss_cascade(&net).insolvent == vec![0]);
    }

    #[test]
    fn zero_exposures_leave_only_initial_defaults() {
        let net = BankingNetwork::new(
            vec![vec![ri(0); 2]; 2],
            vec![ri(0), ri(3)],
            vec![ri(0), ri(0)],
        )
        .unwrap();
        let (inst, seed) = to_activation_instance(&net);
        assert!(inst.edges().is_empty());
        assert_eq!(seed, vec![0]);
        assert_eq!(loss_cascade(&net).insolvent, vec![0]);
    }

    #[test]
    fn invalid_networks_are_rejected() {
        // self-exposure
        let bad = BankingNetwork::new(vec![vec![ri(1)]], vec![ri(1)], vec![ri(0)]);
        assert!(bad.is_err());
        // recovery above one
        let bad = BankingNetwork::new(vec![vec![ri(0)]], vec![ri(1)], vec![ri(2)]);
        assert!(bad.is_err());
        // ragged matrix
        let bad = BankingNetwork::new(vec![vec![ri(0)], vec![ri(0)]], vec![ri(1)], vec![ri(0)]);
        assert!(bad.is_err());
    }
}
