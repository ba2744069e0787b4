//! Hydrogen truck routing between regions.
//!
//! Regions are indexed by position `0..n`. Distances come from all-pairs
//! shortest routes over the adjacency links, and each ordered pair gets one
//! canonical route: among equally short routes the one whose sequence of
//! intermediate ids is lexicographically smallest.

use serde::{Deserialize, Serialize};

use crate::economics::{EconomicParams, TransportCost};
use crate::error::{Error, Result};

/// Undirected link between adjacent regions, by position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub a: usize,
    pub b: usize,
    pub km: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShortestPaths {
    /// km; `INFINITY` when unreachable.
    pub dist: Vec<Vec<f64>>,
    /// Node sequence per ordered pair, empty when unreachable.
    pub routes: Vec<Vec<Vec<usize>>>,
}

/// All-pairs shortest distances over `links` with canonical routes.
pub fn shortest_paths(n: usize, links: &[Link]) -> Result<ShortestPaths> {
    let mut w = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in w.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for l in links {
        if l.a >= n || l.b >= n {
            return Err(Error::Contract(format!("link {}-{} outside {n} regions", l.a, l.b)));
        }
        if !(l.km >= 0.0) {
            return Err(Error::Contract(format!(
                "link {}-{} has negative length {}",
                l.a, l.b, l.km
            )));
        }
        if l.a != l.b && l.km < w[l.a][l.b] {
            w[l.a][l.b] = l.km;
            w[l.b][l.a] = l.km;
        }
    }
    let mut d = w.clone();
    for k in 0..n {
        for i in 0..n {
            if d[i][k].is_infinite() {
                continue;
            }
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    let tol = |x: f64| 1e-9 * x.max(1.0);
    let mut routes = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            if d[i][j].is_infinite() {
                continue;
            }
            let mut route = vec![i];
            let mut u = i;
            while u != j {
                let next = (0..n)
                    .filter(|&v| v != u && w[u][v].is_finite())
                    .find(|&v| {
                        (w[u][v] + d[v][j] - d[u][j]).abs() <= tol(d[u][j])
                            && d[v][j] < d[u][j] + tol(d[u][j])
                            && !route.contains(&v)
                    })
                    .expect("shortest route continues");
                route.push(next);
                u = next;
            }
            routes[i][j] = route;
        }
    }
    Ok(ShortestPaths { dist: d, routes })
}

/// Links of the sparsest graph whose shortest distances equal `dist`: a pair
/// is linked unless some third region lies on a route at least as short.
pub fn derive_links(dist: &[Vec<f64>]) -> Vec<Link> {
    let n = dist.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let dij = dist[i][j];
            let bypass = (0..n).any(|k| k != i && k != j && dist[i][k] + dist[k][j] <= dij);
            if !bypass && dij.is_finite() {
                out.push(Link { a: i, b: j, km: dij });
            }
        }
    }
    out
}

/// A route that hydrogen may use.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HscPath {
    pub from: usize,
    pub to: usize,
    pub km: f64,
    /// Indices into the model's links.
    pub links: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HscModel {
    pub links: Vec<Link>,
    pub sp: ShortestPaths,
    pub d_max: f64,
    pub speed_kmh: f64,
    pub hours_per_day: f64,
    /// Ordered pairs with `0 < D <= d_max`.
    pub paths: Vec<HscPath>,
}

impl HscModel {
    pub fn new(n: usize, links: Vec<Link>, d_max: f64, speed_kmh: f64, hours_per_day: f64) -> Result<Self> {
        let sp = shortest_paths(n, &links)?;
        let mut paths = Vec::new();
        for (from, to) in feasible_paths(&sp.dist, d_max) {
            let route = &sp.routes[from][to];
            let mut on = Vec::with_capacity(route.len());
            for w in route.windows(2) {
                let (u, v) = (w[0].min(w[1]), w[0].max(w[1]));
                let best = links
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| l.a.min(l.b) == u && l.a.max(l.b) == v)
                    .min_by(|x, y| x.1.km.total_cmp(&y.1.km))
                    .map(|(k, _)| k)
                    .expect("route follows links");
                on.push(best);
            }
            paths.push(HscPath {
                from,
                to,
                km: sp.dist[from][to],
                links: on,
            });
        }
        Ok(Self {
            links,
            sp,
            d_max,
            speed_kmh,
            hours_per_day,
            paths,
        })
    }

    pub fn distance(&self, from: usize, to: usize) -> f64 {
        self.sp.dist[from][to]
    }

    pub fn is_feasible(&self, from: usize, to: usize) -> bool {
        from != to && self.sp.dist[from][to] <= self.d_max
    }

    /// Link x path incidence with entries in `{0, 1}`.
    pub fn path_incidence(&self) -> Vec<Vec<u8>> {
        let mut t = vec![vec![0u8; self.paths.len()]; self.links.len()];
        for (p, path) in self.paths.iter().enumerate() {
            for &l in &path.links {
                t[l][p] = 1;
            }
        }
        t
    }

    /// Hydrogen per link for the given path flows.
    pub fn link_flows(&self, path_flows: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.links.len()];
        for (path, &h) in self.paths.iter().zip(path_flows) {
            for &l in &path.links {
                out[l] += h;
            }
        }
        out
    }

    /// Round trips' share of a truck day: `max(1, 2 D / (speed * hours))`.
    pub fn utilization(&self, km: f64) -> f64 {
        utilization(km, self.speed_kmh, self.hours_per_day)
    }

    /// Daily cost components for `h` kg/d on a path of `km`.
    pub fn transport_cost_basis(&self, h: f64, km: f64, econ: &EconomicParams) -> Result<TransportCost> {
        if km > self.d_max {
            return Err(Error::Contract(format!("path of {km} km exceeds {} km", self.d_max)));
        }
        transport_cost_basis(h, km, self.utilization(km), econ)
    }

    /// Storage tank size per source region, kg: the sum of its daily outflows.
    /// `flows[(from, to)]` for pairs that are not feasible must be zero.
    pub fn storage_capacity(&self, n: usize, flows: &[(usize, usize, f64)]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; n];
        for &(from, to, h) in flows {
            if !(h >= 0.0) {
                return Err(Error::Contract(format!("negative flow {h} on {from}->{to}")));
            }
            if h > 0.0 && !self.is_feasible(from, to) {
                return Err(Error::Contract(format!(
                    "flow {h} on {from}->{to} of {} km, beyond {} km",
                    self.sp.dist[from][to], self.d_max
                )));
            }
            out[from] += h;
        }
        Ok(out)
    }
}

/// Ordered pairs `i != j` with `D_ij <= d_max`.
pub fn feasible_paths(dist: &[Vec<f64>], d_max: f64) -> Vec<(usize, usize)> {
    let n = dist.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && dist[i][j] <= d_max {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn utilization(km: f64, speed_kmh: f64, hours_per_day: f64) -> f64 {
    (2.0 * km / (speed_kmh * hours_per_day)).max(1.0)
}

/// Truck and trailer capital on `h * u` kg/d of capability, plus diesel on `h`.
pub fn transport_cost_basis(h: f64, km: f64, u: f64, econ: &EconomicParams) -> Result<TransportCost> {
    if !(h >= 0.0) || !(km >= 0.0) {
        return Err(Error::Domain(format!("flow {h} and distance {km} must be >= 0")));
    }
    let r = econ.discount_rate;
    Ok(TransportCost {
        truck: econ.truck.daily(h * u, r),
        trailer: econ.trailer.daily(h * u, r),
        diesel: econ.c_diesel.value() * km * h,
        storage_kg: h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_region() {
        let sp = shortest_paths(1, &[]).unwrap();
        assert_eq!(sp.dist, vec![vec![0.0]]);
    }

    #[test]
    fn ties_take_lowest_intermediate() {
        // 0-1-3 and 0-2-3 are both 2 km
        let links = [
            Link { a: 0, b: 2, km: 1.0 },
            Link { a: 2, b: 3, km: 1.0 },
            Link { a: 0, b: 1, km: 1.0 },
            Link { a: 1, b: 3, km: 1.0 },
        ];
        let sp = shortest_paths(4, &links).unwrap();
        assert_eq!(sp.routes[0][3], vec![0, 1, 3]);
        assert_eq!(sp.routes[3][0], vec![3, 1, 0]);
    }

    #[test]
    fn negative_length_rejected() {
        assert!(shortest_paths(2, &[Link { a: 0, b: 1, km: -1.0 }]).is_err());
    }

    #[test]
    fn unreachable_is_infinite() {
        let sp = shortest_paths(3, &[Link { a: 0, b: 1, km: 5.0 }]).unwrap();
        assert!(sp.dist[0][2].is_infinite());
        assert!(sp.routes[0][2].is_empty());
    }

    #[test]
    fn utilization_steps() {
        assert_eq!(utilization(250.0, 50.0, 10.0), 1.0);
        assert!((utilization(400.0, 50.0, 10.0) - 1.6).abs() < 1e-12);
    }

    #[test]
    fn flow_beyond_cap_is_rejected() {
        let m = HscModel::new(2, vec![Link { a: 0, b: 1, km: 600.0 }], 500.0, 50.0, 10.0).unwrap();
        assert!(m.paths.is_empty());
        assert!(m.storage_capacity(2, &[(0, 1, 1.0)]).is_err());
        assert_eq!(m.storage_capacity(2, &[(0, 1, 0.0)]).unwrap(), vec![0.0, 0.0]);
    }
}
