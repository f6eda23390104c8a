//! Exact finite-volume measures by full enumeration of `q^{|V_n|}` configurations.
//!
//! The weight of `sigma` is `theta^{#equal edges} * exp(sum_{x in W_n} h_{sigma(x), x})`
//! where the full field is the reduced one with a zero appended for the last
//! spin state. Spins are `0..q`; state `q - 1` is the reference state.

use super::{BoundaryAssignment, TruncatedTree};
use crate::error::{Error, Result};
use crate::model::ModelParams;

pub const DEFAULT_ENUMERATION_BUDGET: u64 = 100_000_000;

/// A spin per vertex, indexed like the tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration(Vec<usize>);

impl Configuration {
    pub fn new(spins: Vec<usize>, q: usize) -> Result<Self> {
        if let Some((vertex, &value)) = spins.iter().enumerate().find(|(_, &s)| s >= q) {
            return Err(Error::SpinOutOfRange { vertex, value, q });
        }
        Ok(Self(spins))
    }

    pub fn uniform(len: usize, spin: usize) -> Self {
        Self(vec![spin; len])
    }

    pub fn spins(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_budget(q: usize, vertices: usize, budget: u64) -> Result<()> {
    let fits = u32::try_from(vertices)
        .ok()
        .and_then(|n| (q as u64).checked_pow(n))
        .is_some_and(|count| count <= budget);
    if fits {
        Ok(())
    } else {
        Err(Error::BudgetExceeded { q, vertices, budget })
    }
}

/// Running `ln(sum exp(x_i))`.
#[derive(Debug, Clone, Copy)]
struct LogSumExp {
    max: f64,
    sum: f64,
}

impl LogSumExp {
    fn new() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            sum: 0.0,
        }
    }

    fn push(&mut self, x: f64) {
        if x <= self.max {
            self.sum += (x - self.max).exp();
        } else {
            self.sum = self.sum * (self.max - x).exp() + 1.0;
            self.max = x;
        }
    }

    fn value(&self) -> f64 {
        self.max + self.sum.ln()
    }
}

/// `mu_n` on one labelled tree, with `ln Z_n` computed up front.
#[derive(Debug, Clone)]
pub struct FiniteVolumeMeasure<'a> {
    tree: &'a TruncatedTree,
    q: usize,
    ln_theta: f64,
    // full q-component boundary field of each leaf, leaf-major
    leaf_fields: Vec<f64>,
    log_z: f64,
}

impl<'a> FiniteVolumeMeasure<'a> {
    pub fn new(
        tree: &'a TruncatedTree,
        assignment: &BoundaryAssignment,
        params: &ModelParams,
        budget: u64,
    ) -> Result<Self> {
        assignment.check_tree(tree)?;
        let q = params.q();
        if assignment.q() != q {
            return Err(Error::FieldLength {
                expected: q - 1,
                got: assignment.h_vec.len(),
            });
        }
        if params.k() != tree.k() {
            return Err(Error::InvalidParams(format!(
                "model order k = {} does not match tree order {}",
                params.k(),
                tree.k()
            )));
        }
        check_budget(q, tree.len(), budget)?;
        let mut leaf_fields = Vec::with_capacity(tree.leaves().len() * q);
        for x in tree.leaves() {
            leaf_fields.extend_from_slice(assignment.field(x).as_slice());
            leaf_fields.push(0.0);
        }
        let mut m = Self {
            tree,
            q,
            ln_theta: params.theta().ln(),
            leaf_fields,
            log_z: 0.0,
        };
        let mut acc = LogSumExp::new();
        m.for_each(|_, lw| acc.push(lw));
        m.log_z = acc.value();
        Ok(m)
    }

    pub fn log_partition(&self) -> f64 {
        self.log_z
    }

    /// Unnormalised log weight `-beta H_n(sigma) + sum_{x in W_n} h_{sigma(x), x}`.
    pub fn log_weight(&self, spins: &[usize]) -> f64 {
        let mut lw = 0.0;
        for v in 1..spins.len() {
            if spins[v] == spins[(v - 1) / self.tree.k()] {
                lw += self.ln_theta;
            }
        }
        let first_leaf = self.tree.leaves().start;
        for (i, &s) in spins[first_leaf..].iter().enumerate() {
            lw += self.leaf_fields[i * self.q + s];
        }
        lw
    }

    pub fn probability(&self, sigma: &Configuration) -> Result<f64> {
        if sigma.len() != self.tree.len() {
            return Err(Error::ConfigurationLength {
                expected: self.tree.len(),
                got: sigma.len(),
            });
        }
        if let Some((vertex, &value)) = sigma.spins().iter().enumerate().find(|(_, &s)| s >= self.q) {
            return Err(Error::SpinOutOfRange { vertex, value, q: self.q });
        }
        Ok((self.log_weight(sigma.spins()) - self.log_z).exp())
    }

    /// Visits every configuration in lexicographic order (vertex 0 most
    /// significant) with its running index and unnormalised log weight.
    pub fn for_each<F: FnMut(usize, f64)>(&self, mut visit: F) {
        let mut spins = vec![0usize; self.tree.len()];
        let mut index = 0usize;
        self.descend(0, 0.0, &mut spins, &mut index, &mut visit);
    }

    fn descend<F: FnMut(usize, f64)>(
        &self,
        v: usize,
        acc: f64,
        spins: &mut [usize],
        index: &mut usize,
        visit: &mut F,
    ) {
        if v == spins.len() {
            visit(*index, acc);
            *index += 1;
            return;
        }
        let first_leaf = self.tree.leaves().start;
        for s in 0..self.q {
            spins[v] = s;
            let mut lw = acc;
            if v > 0 && spins[(v - 1) / self.tree.k()] == s {
                lw += self.ln_theta;
            }
            if v >= first_leaf {
                lw += self.leaf_fields[(v - first_leaf) * self.q + s];
            }
            self.descend(v + 1, lw, spins, index, visit);
        }
    }
}

/// Probability of `sigma` under `mu_n`, enumerating within the default budget.
pub fn finite_volume_measure(
    tree: &TruncatedTree,
    assignment: &BoundaryAssignment,
    params: &ModelParams,
    sigma: &Configuration,
) -> Result<f64> {
    FiniteVolumeMeasure::new(tree, assignment, params, DEFAULT_ENUMERATION_BUDGET)?.probability(sigma)
}

/// `max_{sigma_{n-1}} | sum_{omega_n} mu_n(sigma_{n-1} v omega_n) - mu_{n-1}(sigma_{n-1}) |`.
///
/// `mu_{n-1}` uses the same labelling restricted to `V_{n-1}`, so its
/// boundary sits on the level-`(n-1)` labels.
pub fn consistency_check(
    tree: &TruncatedTree,
    assignment: &BoundaryAssignment,
    params: &ModelParams,
    budget: u64,
) -> Result<f64> {
    if tree.depth() == 0 {
        return Err(Error::InvalidParams("consistency needs depth at least 1".into()));
    }
    let outer = FiniteVolumeMeasure::new(tree, assignment, params, budget)?;
    let small_tree = tree.truncate(tree.depth() - 1);
    let small_asg = assignment.restrict(tree, small_tree.depth())?;
    let inner = FiniteVolumeMeasure::new(&small_tree, &small_asg, params, budget)?;

    // leaves are the least significant digits, so each prefix owns a
    // contiguous block of q^{|W_n|} configurations
    let block = params.q().pow(tree.leaves().len() as u32);
    let prefixes = params.q().pow(small_tree.len() as u32);
    let mut marginal = vec![0.0; prefixes];
    let log_z = outer.log_partition();
    outer.for_each(|i, lw| marginal[i / block] += (lw - log_z).exp());

    let mut worst: f64 = 0.0;
    let log_z_small = inner.log_partition();
    inner.for_each(|i, lw| {
        worst = worst.max((marginal[i] - (lw - log_z_small).exp()).abs());
    });
    Ok(worst)
}
