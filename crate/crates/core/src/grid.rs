//! DC power-flow model of the transmission grid.
//!
//! Nodes are region ids, grouped into islands that never exchange power.
//! Each island's lowest id is its reference node, which absorbs the balance of
//! the other injections. Positive branch flow runs from `from` to `to`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub from: usize,
    pub to: usize,
    /// per unit
    pub susceptance: f64,
    /// MW
    pub cap_fwd: f64,
    /// MW, limit for flow against the branch direction
    pub cap_rev: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridModel {
    pub nodes: Vec<usize>,
    pub branches: Vec<Branch>,
    /// Island index per node position.
    pub island_of: Vec<usize>,
    /// Reference node position per island.
    pub reference: Vec<usize>,
    /// Node x branch incidence.
    pub incidence: DMatrix<f64>,
    /// Branch x node sensitivities; reference columns are zero.
    pub ptdf: DMatrix<f64>,
}

/// Node x branch matrix with `+1` at the sending and `-1` at the receiving node.
pub fn build_incidence(branches: &[Branch], nodes: &[usize]) -> Result<DMatrix<f64>> {
    let index = node_index(nodes)?;
    let mut t = DMatrix::zeros(nodes.len(), branches.len());
    for (l, b) in branches.iter().enumerate() {
        let f = *index
            .get(&b.from)
            .ok_or_else(|| Error::Grid(format!("branch {l} starts at unknown node {}", b.from)))?;
        let to = *index
            .get(&b.to)
            .ok_or_else(|| Error::Grid(format!("branch {l} ends at unknown node {}", b.to)))?;
        if f == to {
            return Err(Error::Grid(format!("branch {l} is a self loop at node {}", b.from)));
        }
        t[(f, l)] = 1.0;
        t[(to, l)] = -1.0;
    }
    Ok(t)
}

fn node_index(nodes: &[usize]) -> Result<BTreeMap<usize, usize>> {
    let mut index = BTreeMap::new();
    for (k, &n) in nodes.iter().enumerate() {
        if index.insert(n, k).is_some() {
            return Err(Error::Grid(format!("node {n} listed twice")));
        }
    }
    Ok(index)
}

/// One hour's limit breach.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitViolation {
    pub hour: usize,
    pub branch: usize,
    pub flow: f64,
    pub limit: f64,
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    /// Flow per hour and branch, MW.
    pub flows: Vec<Vec<f64>>,
    /// Peak `|flow| / limit` per branch over all hours.
    pub utilization: Vec<f64>,
    pub violations: Vec<LimitViolation>,
}

impl GridModel {
    /// Builds the model. `island_of[k]` labels node `nodes[k]`; labels need not
    /// be contiguous. Fails when a branch joins two islands, when an island's
    /// branches do not connect all its nodes, or on a nonpositive susceptance.
    pub fn new(nodes: Vec<usize>, island_of: &[usize], branches: Vec<Branch>) -> Result<Self> {
        if island_of.len() != nodes.len() {
            return Err(Error::Grid("island labels do not match nodes".into()));
        }
        let incidence = build_incidence(&branches, &nodes)?;
        let index = node_index(&nodes)?;
        let mut labels: Vec<usize> = island_of.to_vec();
        labels.sort_unstable();
        labels.dedup();
        let island: Vec<usize> = island_of.iter().map(|l| labels.binary_search(l).unwrap()).collect();
        for (l, b) in branches.iter().enumerate() {
            if !(b.susceptance > 0.0) || !b.susceptance.is_finite() {
                return Err(Error::Grid(format!("branch {l} has susceptance {}", b.susceptance)));
            }
            if !(b.cap_fwd >= 0.0 && b.cap_rev >= 0.0) {
                return Err(Error::Grid(format!("branch {l} has a negative capacity")));
            }
            if island[index[&b.from]] != island[index[&b.to]] {
                return Err(Error::Grid(format!("branch {}-{} joins two islands", b.from, b.to)));
            }
        }
        let mut reference = vec![usize::MAX; labels.len()];
        for (k, &isl) in island.iter().enumerate() {
            if reference[isl] == usize::MAX || nodes[k] < nodes[reference[isl]] {
                reference[isl] = k;
            }
        }
        let n = nodes.len();
        let mut ptdf = DMatrix::zeros(branches.len(), n);
        for (isl, &r) in reference.iter().enumerate() {
            let members: Vec<usize> = (0..n).filter(|&k| island[k] == isl).collect();
            let reached = reachable(r, &branches, &index);
            let cut: Vec<usize> = members.iter().filter(|k| !reached[**k]).map(|&k| nodes[k]).collect();
            if !cut.is_empty() {
                return Err(Error::Grid(format!(
                    "island of node {} is disconnected; unreachable nodes {:?}",
                    nodes[r], cut
                )));
            }
            let others: Vec<usize> = members.iter().copied().filter(|&k| k != r).collect();
            if others.is_empty() {
                continue;
            }
            let mut pos = vec![usize::MAX; n];
            for (q, &k) in others.iter().enumerate() {
                pos[k] = q;
            }
            let m = others.len();
            let mut lap = DMatrix::<f64>::zeros(m, m);
            for b in &branches {
                let (f, t) = (index[&b.from], index[&b.to]);
                if island[f] != isl {
                    continue;
                }
                for (u, v) in [(f, t), (t, f)] {
                    if pos[u] != usize::MAX {
                        lap[(pos[u], pos[u])] += b.susceptance;
                        if pos[v] != usize::MAX {
                            lap[(pos[u], pos[v])] -= b.susceptance;
                        }
                    }
                }
            }
            let x = lap
                .try_inverse()
                .ok_or_else(|| Error::Grid(format!("reduced Laplacian of island {} is singular", nodes[r])))?;
            let angle = |node: usize, q: usize| {
                if pos[node] == usize::MAX {
                    0.0
                } else {
                    x[(pos[node], q)]
                }
            };
            for (l, b) in branches.iter().enumerate() {
                let (f, t) = (index[&b.from], index[&b.to]);
                if island[f] != isl {
                    continue;
                }
                for (q, &k) in others.iter().enumerate() {
                    ptdf[(l, k)] = b.susceptance * (angle(f, q) - angle(t, q));
                }
            }
        }
        Ok(Self {
            nodes,
            branches,
            island_of: island,
            reference,
            incidence,
            ptdf,
        })
    }

    pub fn position(&self, node: usize) -> Option<usize> {
        self.nodes.iter().position(|&n| n == node)
    }

    /// Branch flows for the given nodal injections (MW, by node position).
    /// Injections must balance within every island.
    pub fn flows(&self, injections: &[f64]) -> Result<Vec<f64>> {
        if injections.len() != self.nodes.len() {
            return Err(Error::Contract(format!(
                "{} injections for {} nodes",
                injections.len(),
                self.nodes.len()
            )));
        }
        for (isl, &r) in self.reference.iter().enumerate() {
            let (mut sum, mut mag) = (0.0, 0.0f64);
            for (k, v) in injections.iter().enumerate() {
                if self.island_of[k] == isl {
                    sum += v;
                    mag = mag.max(v.abs());
                }
            }
            if sum.abs() > 1e-9 * mag.max(1.0) {
                return Err(Error::Contract(format!(
                    "injections in the island of node {} sum to {sum}",
                    self.nodes[r]
                )));
            }
        }
        Ok((0..self.branches.len())
            .map(|l| (0..self.nodes.len()).map(|k| self.ptdf[(l, k)] * injections[k]).sum())
            .collect())
    }

    /// Net injection implied by branch flows, `T_E * flows`.
    pub fn nodal_balance(&self, flows: &[f64]) -> Vec<f64> {
        (0..self.nodes.len())
            .map(|k| {
                (0..self.branches.len())
                    .map(|l| self.incidence[(k, l)] * flows[l])
                    .sum()
            })
            .collect()
    }

    /// Flows and limit breaches for a sequence of hourly injection vectors.
    pub fn check_limits(&self, hourly: &[Vec<f64>]) -> Result<LimitReport> {
        let mut flows = Vec::with_capacity(hourly.len());
        let mut utilization = vec![0.0f64; self.branches.len()];
        let mut violations = Vec::new();
        for (hour, inj) in hourly.iter().enumerate() {
            let f = self.flows(inj)?;
            for (l, (&v, b)) in f.iter().zip(&self.branches).enumerate() {
                let limit = if v >= 0.0 { b.cap_fwd } else { b.cap_rev };
                let u = if limit > 0.0 {
                    v.abs() / limit
                } else if v == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                };
                utilization[l] = utilization[l].max(u);
                if v.abs() > limit {
                    violations.push(LimitViolation {
                        hour,
                        branch: l,
                        flow: v,
                        limit,
                        excess: v.abs() - limit,
                    });
                }
            }
            flows.push(f);
        }
        Ok(LimitReport {
            flows,
            utilization,
            violations,
        })
    }
}

fn reachable(start: usize, branches: &[Branch], index: &BTreeMap<usize, usize>) -> Vec<bool> {
    let n = index.len();
    let mut seen = vec![false; n];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(u) = stack.pop() {
        for b in branches {
            let (f, t) = (index[&b.from], index[&b.to]);
            let v = if f == u {
                t
            } else if t == u {
                f
            } else {
                continue;
            };
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn br(from: usize, to: usize) -> Branch {
        Branch {
            from,
            to,
            susceptance: 1.0,
            cap_fwd: 100.0,
            cap_rev: 100.0,
        }
    }

    #[test]
    fn two_node_flow_goes_to_reference() {
        let g = GridModel::new(vec![1, 2], &[0, 0], vec![br(1, 2)]).unwrap();
        let f = g.flows(&[-1.0, 1.0]).unwrap();
        assert!((f[0] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn overload_is_reported() {
        let g = GridModel::new(vec![1, 2], &[0, 0], vec![br(1, 2)]).unwrap();
        let r = g.check_limits(&[vec![150.0, -150.0]]).unwrap();
        assert_eq!(r.violations.len(), 1);
        assert!((r.violations[0].excess - 50.0).abs() < 1e-9);
    }

    #[test]
    fn disconnected_island_names_nodes() {
        let err = GridModel::new(vec![1, 2, 3], &[0, 0, 0], vec![br(1, 2)]).unwrap_err();
        assert!(err.to_string().contains("[3]"), "{err}");
    }

    #[test]
    fn unbalanced_injection_is_a_contract_error() {
        let g = GridModel::new(vec![1, 2], &[0, 0], vec![br(1, 2)]).unwrap();
        assert!(matches!(g.flows(&[1.0, 0.0]), Err(Error::Contract(_))));
    }

    #[test]
    fn cross_island_branch_rejected() {
        assert!(GridModel::new(vec![1, 2], &[0, 1], vec![br(1, 2)]).is_err());
    }
}
