//! Label-driven contraction of small tensor networks.
//!
//! A network is a list of nodes (tensor + one label per index) processed in
//! order. Labels play the role of abstract indices: a label appearing on two
//! or more slots is summed over once all of its slots have been absorbed
//! (the Einstein convention, extended to labels shared by more than two
//! slots), a label appearing on a single slot either stays free in the output
//! or is contracted against a fixed boundary vector.
//!
//! The accumulator only ever grows by the node currently being absorbed, so
//! peak memory is governed by the cut of the chosen node order, not by the
//! whole network. Callers pick the order; [`peak_open_labels`] lets them
//! compare candidate orders cheaply.

use thiserror::Error;

use crate::tensor::{C64, Tensor, TensorError};

/// Size limits for contraction intermediates.
///
/// `max_bond_dim` bounds the side of any transfer operator; a general
/// intermediate may hold up to `max_bond_dim²` coefficients (one operator's
/// worth). The defaults allow e.g. dimension-2 traces up to height 12 and
/// doubled-network norm tests up to height 6.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_bond_dim: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_bond_dim: 4096 }
    }
}

impl Budget {
    pub fn with_max_bond_dim(max_bond_dim: usize) -> Self {
        Budget { max_bond_dim }
    }

    pub fn max_coeffs(&self) -> u128 {
        (self.max_bond_dim as u128).pow(2)
    }
}

#[derive(Debug, Error)]
pub enum ContractionError {
    #[error(
        "free-bond count {free_bonds} would produce {needed} coefficients, \
         over the budget of {limit}"
    )]
    FreeBondsOverBudget { free_bonds: usize, needed: u128, limit: u128 },
    #[error("intermediate tensor of {needed} coefficients exceeds the budget of {limit}")]
    IntermediateOverBudget { needed: u128, limit: u128 },
    #[error("transfer operator bond dimension {needed} exceeds the budget of {limit}; {context}")]
    BondOverBudget { needed: u128, limit: u128, context: String },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// What happens to a label once all of its slots have been absorbed.
#[derive(Clone, Debug)]
pub(crate) enum Role {
    /// Shared label: summed over (interior bond, torus gluing, …).
    Sum,
    /// Stays as an output index.
    Free,
    /// Contracted against a fixed vector (boundary condition).
    Cap(Vec<C64>),
}

pub(crate) struct Network<'a> {
    /// Nodes in processing order.
    pub nodes: Vec<(&'a Tensor, Vec<u32>)>,
    /// Role per label id.
    pub roles: Vec<Role>,
    /// Output labels in the order the caller wants the result's indices.
    pub free_order: Vec<u32>,
    pub budget: Budget,
}

impl<'a> Network<'a> {
    /// Contract the whole network down to a tensor over the free labels.
    pub fn contract(self) -> Result<Tensor, ContractionError> {
        let dim = self.nodes.first().map_or(1, |(t, _)| t.dim());
        let mut remaining = vec![0usize; self.roles.len()];
        for (_, labels) in &self.nodes {
            for &l in labels {
                remaining[l as usize] += 1;
            }
        }
        for (l, role) in self.roles.iter().enumerate() {
            match role {
                Role::Free | Role::Cap(_) => debug_assert!(
                    remaining[l] <= 1,
                    "free/capped labels must have a single slot"
                ),
                Role::Sum => {}
            }
        }

        let mut acc = Tensor::scalar_with_dim(C64::new(1.0, 0.0), dim);
        let mut open: Vec<u32> = Vec::new();

        for (tensor, labels) in self.nodes {
            debug_assert_eq!(tensor.arity(), labels.len());
            debug_assert_eq!(tensor.dim(), dim, "all nodes share one alphabet");

            // mark this node's slots as seen
            for &l in &labels {
                remaining[l as usize] -= 1;
            }

            // merge duplicate labels within the node (generalized diagonal)
            let mut node = tensor.clone();
            let mut node_labels = labels.clone();
            'dedupe: loop {
                for i in 0..node_labels.len() {
                    for j in (i + 1)..node_labels.len() {
                        if node_labels[i] == node_labels[j] {
                            node = node.diagonal(i, j)?;
                            node_labels.remove(j);
                            continue 'dedupe;
                        }
                    }
                }
                break;
            }

            // classify each node slot against the open accumulator indices
            let mut contracts: Vec<(usize, usize)> = Vec::new(); // (acc pos, node pos)
            let mut diags: Vec<(usize, usize)> = Vec::new();
            let mut news: Vec<usize> = Vec::new();
            for (npos, &l) in node_labels.iter().enumerate() {
                if let Some(apos) = open.iter().position(|&o| o == l) {
                    let closes = remaining[l as usize] == 0;
                    if closes && matches!(self.roles[l as usize], Role::Sum) {
                        contracts.push((apos, npos));
                    } else {
                        diags.push((apos, npos));
                    }
                } else {
                    news.push(npos);
                }
            }

            let out_arity = open.len() - contracts.len() + news.len();
            let needed = (dim as u128).pow(out_arity as u32);
            if needed > self.budget.max_coeffs() {
                return Err(ContractionError::IntermediateOverBudget {
                    needed,
                    limit: self.budget.max_coeffs(),
                });
            }

            let (next, next_open) =
                absorb(&acc, &open, &node, &node_labels, &contracts, &diags, &news)?;
            acc = next;
            open = next_open;

            // close labels whose slots are exhausted
            let mut pos = 0;
            while pos < open.len() {
                let l = open[pos];
                if remaining[l as usize] == 0 {
                    match &self.roles[l as usize] {
                        Role::Sum => {
                            // both slots lived in this node (a self-loop)
                            acc = acc.sum_index(pos)?;
                            open.remove(pos);
                            continue;
                        }
                        Role::Cap(v) => {
                            acc = acc.cap(pos, v)?;
                            open.remove(pos);
                            continue;
                        }
                        Role::Free => {}
                    }
                }
                pos += 1;
            }
        }

        debug_assert!(remaining.iter().all(|&r| r == 0));
        debug_assert_eq!(open.len(), self.free_order.len());

        // permute the result into the requested output order
        let mut sigma = vec![0usize; open.len()];
        for (i, &l) in open.iter().enumerate() {
            let dest = self
                .free_order
                .iter()
                .position(|&f| f == l)
                .expect("open labels match free_order");
            sigma[i] = dest;
        }
        Ok(acc.permute(&sigma)?)
    }
}

/// Absorb one node into the accumulator.
///
/// `contracts` are label matches summed away now, `diags` are label matches
/// whose index value is tied but kept open, `news` are node indices opening
/// fresh labels. Output index order: untouched accumulator indices, then the
/// tied ones, then the new ones.
fn absorb(
    acc: &Tensor,
    open: &[u32],
    node: &Tensor,
    node_labels: &[u32],
    contracts: &[(usize, usize)],
    diags: &[(usize, usize)],
    news: &[usize],
) -> Result<(Tensor, Vec<u32>), TensorError> {
    let dim = acc.dim();

    let in_contract: Vec<usize> = contracts.iter().map(|&(a, _)| a).collect();
    let in_diag: Vec<usize> = diags.iter().map(|&(a, _)| a).collect();
    let kept: Vec<usize> = (0..acc.arity())
        .filter(|p| !in_contract.contains(p) && !in_diag.contains(p))
        .collect();

    // accumulator layout: [kept..., diag..., contract...]
    let mut sigma_acc = vec![0usize; acc.arity()];
    for (dest, &src) in kept.iter().chain(&in_diag).chain(&in_contract).enumerate() {
        sigma_acc[src] = dest;
    }
    let acc_p = acc.permute(&sigma_acc)?;

    // node layout: [diag..., contract..., new...]
    let node_diag: Vec<usize> = diags.iter().map(|&(_, n)| n).collect();
    let node_contract: Vec<usize> = contracts.iter().map(|&(_, n)| n).collect();
    let mut sigma_node = vec![0usize; node.arity()];
    for (dest, &src) in node_diag.iter().chain(&node_contract).chain(news).enumerate() {
        sigma_node[src] = dest;
    }
    let node_p = node.permute(&sigma_node)?;

    let ksz = dim.pow(kept.len() as u32);
    let dsz = dim.pow(diags.len() as u32);
    let csz = dim.pow(contracts.len() as u32);
    let nsz = dim.pow(news.len() as u32);

    let ac = acc_p.coeffs();
    let nc = node_p.coeffs();
    let mut out = vec![C64::new(0.0, 0.0); ksz * dsz * nsz];
    for ik in 0..ksz {
        for id in 0..dsz {
            let acc_base = (ik * dsz + id) * csz;
            let out_base = (ik * dsz + id) * nsz;
            for ic in 0..csz {
                let a = ac[acc_base + ic];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let node_base = (id * csz + ic) * nsz;
                for inn in 0..nsz {
                    out[out_base + inn] += a * nc[node_base + inn];
                }
            }
        }
    }

    let arity = kept.len() + diags.len() + news.len();
    // the magnitude a single product term can reach; cancellations below it
    // are rounding artifacts
    let scale = acc.scale() * node.scale();
    let result = Tensor::new(dim, arity, out)?.with_scale(scale);

    let mut labels: Vec<u32> = kept.iter().map(|&p| open[p]).collect();
    labels.extend(diags.iter().map(|&(a, _)| open[a]));
    labels.extend(news.iter().map(|&n| node_labels[n]));
    Ok((result, labels))
}

/// Peak number of simultaneously open labels for a given node order; used to
/// compare candidate orders before contracting. Labels whose role keeps them
/// in the output never close.
pub(crate) fn peak_open_labels(node_labels: &[Vec<u32>], roles: &[Role]) -> usize {
    let mut remaining = vec![0usize; roles.len()];
    for labels in node_labels {
        for &l in labels {
            remaining[l as usize] += 1;
        }
    }
    let mut open = vec![false; roles.len()];
    let mut open_count = 0usize;
    let mut peak = 0usize;
    for labels in node_labels {
        for &l in labels {
            if !open[l as usize] {
                open[l as usize] = true;
                open_count += 1;
            }
            remaining[l as usize] -= 1;
        }
        peak = peak.max(open_count);
        for &l in labels {
            let l = l as usize;
            if open[l] && remaining[l] == 0 && !matches!(roles[l], Role::Free) {
                open[l] = false;
                open_count -= 1;
            }
        }
    }
    peak
}
