//! Lipschitz distance, the Finsler norm and the cone decomposition.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::candidates::{Candidate, CandidateSet};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::map::GraphMap;
use crate::marked::MarkedPoint;
use crate::metric::{Metric, TangentVector};
use crate::rational::{ln_q, Q};

/// Maximal candidate stretch of a difference of markings.
#[derive(Debug, Clone)]
pub struct StretchReport {
    pub value: Q,
    pub witness: Candidate,
    /// Ratio of every candidate, in candidate order.
    pub ratios: Vec<(Candidate, Q)>,
}

impl StretchReport {
    pub fn distance(&self) -> f64 {
        ln_q(&self.value)
    }
}

/// Index of the largest value; ties go to the smallest canonical loop.
fn argmax(set: &CandidateSet, values: &[Q]) -> usize {
    let mut best = 0;
    for i in 1..values.len() {
        let better = match values[i].cmp(&values[best]) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Equal => set.candidates[i].lp < set.candidates[best].lp,
            std::cmp::Ordering::Less => false,
        };
        if better {
            best = i;
        }
    }
    best
}

fn check_difference(x: &MarkedPoint, y: &MarkedPoint, phi: &GraphMap) -> Result<()> {
    if phi.source() != x.graph() || phi.target() != y.graph() {
        return Err(Error::GraphMismatch("map does not run from x's graph to y's graph".into()));
    }
    phi.check_h1_isomorphism()
}

/// Candidate ratios `ℓ_y(φ(α)) / ℓ_x(α)` in candidate order.
fn stretch_ratios(set: &CandidateSet, x: &Metric, y: &Metric, phi: &GraphMap) -> Result<Vec<Q>> {
    set.candidates
        .iter()
        .map(|c| {
            let image = phi.apply_loop(&c.lp)?;
            Ok(y.loop_length(&image) / x.loop_length(&c.lp))
        })
        .collect()
}

pub fn stretch(x: &MarkedPoint, y: &MarkedPoint, phi: &GraphMap) -> Result<StretchReport> {
    check_difference(x, y, phi)?;
    let set = CandidateSet::of(x.graph());
    let values = stretch_ratios(&set, x.metric(), y.metric(), phi)?;
    let best = argmax(&set, &values);
    Ok(StretchReport {
        value: values[best].clone(),
        witness: set.candidates[best].clone(),
        ratios: set.candidates.iter().cloned().zip(values).collect(),
    })
}

/// Exact stretch factor `e^{d(x,y)}` for the canonical difference of markings.
pub fn stretch_factor(x: &MarkedPoint, y: &MarkedPoint) -> Result<Q> {
    let phi = x.difference_to(y)?;
    check_difference(x, y, &phi)?;
    let set = CandidateSet::of(x.graph());
    let values = stretch_ratios(&set, x.metric(), y.metric(), &phi)?;
    Ok(values.into_iter().max().expect("nonempty candidate set"))
}

pub fn distance(x: &MarkedPoint, y: &MarkedPoint) -> Result<f64> {
    Ok(ln_q(&stretch_factor(x, y)?))
}

/// Largest edge slope of a map, possibly infinite on zero-length edges.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Slope {
    Finite(Q),
    Infinite,
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(v) => write!(f, "{v}"),
            Slope::Infinite => f.write_str("inf"),
        }
    }
}

pub fn max_slope(phi: &GraphMap, source: &Metric, target: &Metric) -> Slope {
    let images = phi.image_lengths(target.lengths());
    let mut best = Slope::Finite(Q::zero());
    for (e, img) in images.iter().enumerate() {
        let len = source.length(e);
        let slope = if len.is_zero() {
            if img.is_zero() {
                continue;
            }
            Slope::Infinite
        } else {
            Slope::Finite(img / len)
        };
        best = best.max(slope);
    }
    best
}

#[derive(Debug, Clone)]
pub struct NormReport {
    pub value: Q,
    pub witness: Candidate,
}

/// Index and value of the maximal candidate ratio `τ(α)/ℓ(α)`.
pub fn norm_in(set: &CandidateSet, metric: &Metric, tau: &TangentVector) -> (usize, Q) {
    let values: Vec<Q> = (0..set.len())
        .map(|i| set.weigh(i, tau.weights()) / set.weigh(i, metric.lengths()))
        .collect();
    let best = argmax(set, &values);
    (best, values[best].clone())
}

/// `‖(ℓ,τ)‖ᴸ` with its witness candidate.
pub fn lipschitz_norm(graph: &Graph, metric: &Metric, tau: &TangentVector) -> NormReport {
    let set = CandidateSet::of(graph);
    let (i, value) = norm_in(&set, metric, tau);
    NormReport { value, witness: set.candidates[i].clone() }
}

pub fn norm_value(graph: &Graph, metric: &Metric, tau: &TangentVector) -> Q {
    norm_in(&CandidateSet::of(graph), metric, tau).1
}

/// Exact stretch from `ℓ` to `ℓ + tτ` (identity marking). The maximizing
/// candidate is the norm witness for every admissible `t`.
pub fn segment_stretch(graph: &Graph, metric: &Metric, tau: &TangentVector, t: &Q) -> Result<Q> {
    tau.check_integrable(graph, metric)?;
    metric.moved(graph, tau, t)?;
    Ok(Q::one() + t * norm_value(graph, metric, tau))
}

/// Difference quotient `d(ℓ, ℓ + t₀τ) / t₀`, computed from a full stretch.
pub fn directional_derivative_distance(graph: &Graph, metric: &Metric, tau: &TangentVector, t0: &Q) -> Result<f64> {
    tau.check_integrable(graph, metric)?;
    if !t0.is_positive() {
        return Err(Error::InvalidTangent("step must be positive".into()));
    }
    let moved = metric.moved(graph, tau, t0)?;
    let set = CandidateSet::of(graph);
    let stretch = (0..set.len())
        .map(|i| set.weigh(i, moved.lengths()) / set.weigh(i, metric.lengths()))
        .max()
        .expect("nonempty candidate set");
    Ok(ln_q(&stretch) / crate::rational::to_f64(t0))
}

/// Largest `t` along `ℓ + tτ` for which the norm witness stays maximal.
/// The ordering of candidate ratios does not depend on `t`, so this is where
/// the segment leaves the closed simplex.
pub fn witness_breakpoint(metric: &Metric, tau: &TangentVector) -> Option<Q> {
    metric.max_step(tau)
}

/// One cell: `τ` lies in it when every inequality `c·τ ≥ 0` holds.
#[derive(Debug, Clone)]
pub struct ConeCell {
    pub candidate: Candidate,
    pub inequalities: Vec<Vec<Q>>,
}

impl ConeCell {
    pub fn contains(&self, tau: &TangentVector) -> bool {
        self.inequalities.iter().all(|c| {
            let v: Q = c.iter().zip(tau.weights()).map(|(a, b)| a * b).sum();
            !v.is_negative()
        })
    }
}

/// Cover of the integrable cone at `ℓ` by the cones on which a fixed candidate
/// maximizes `τ(α)/ℓ(α)`.
#[derive(Debug, Clone)]
pub struct ConeDecomposition {
    pub cells: Vec<ConeCell>,
}

impl ConeDecomposition {
    pub fn new(graph: &Graph, metric: &Metric) -> Self {
        let set = CandidateSet::of(graph);
        let ne = graph.num_edges();
        let normalized: Vec<Vec<Q>> = (0..set.len())
            .map(|i| {
                let len = set.weigh(i, metric.lengths());
                set.crossings[i].iter().map(|&c| Q::from_integer((c as i64).into()) / &len).collect()
            })
            .collect();
        let integrability: Vec<Vec<Q>> = metric
            .zero_edges()
            .into_iter()
            .map(|e| (0..ne).map(|f| if f == e { Q::one() } else { Q::zero() }).collect())
            .collect();
        let cells = (0..set.len())
            .map(|i| {
                let mut inequalities: Vec<Vec<Q>> = (0..set.len())
                    .filter(|&j| j != i)
                    .map(|j| normalized[i].iter().zip(&normalized[j]).map(|(a, b)| a - b).collect())
                    .collect();
                inequalities.extend(integrability.iter().cloned());
                ConeCell { candidate: set.candidates[i].clone(), inequalities }
            })
            .collect();
        ConeDecomposition { cells }
    }

    pub fn cells_containing(&self, tau: &TangentVector) -> Vec<usize> {
        (0..self.cells.len()).filter(|&i| self.cells[i].contains(tau)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::candidates::CandidateKind;
    use crate::rational::q;
    use std::sync::Arc;

    fn rose_point(a: Q, b: Q) -> MarkedPoint {
        MarkedPoint::rose(Metric::new(&Graph::rose(2), vec![a, b]).unwrap()).unwrap()
    }

    #[test]
    fn identity_stretch_is_one() {
        let x = rose_point(q(1, 3), q(2, 3));
        let r = stretch(&x, &x, &GraphMap::identity(x.graph().clone())).unwrap();
        assert_eq!(r.value, Q::one());
        assert_eq!(r.distance(), 0.0);
    }

    #[test]
    fn rose_distances() {
        for k in [3i64, 4, 10] {
            let xk = rose_point(q(1, k), q(k - 1, k));
            let x2 = rose_point(q(1, 2), q(1, 2));
            assert_eq!(stretch_factor(&xk, &x2).unwrap(), q(k, 2));
        }
        let x4 = rose_point(q(1, 4), q(3, 4));
        let x2 = rose_point(q(1, 2), q(1, 2));
        assert_eq!(stretch_factor(&x2, &x4).unwrap(), q(3, 2));
    }

    #[test]
    fn slopes() {
        let g = Arc::new(Graph::rose(2));
        let id = GraphMap::identity(g.clone());
        let l = Metric::new(&g, vec![q(1, 2), q(1, 2)]).unwrap();
        let l2 = Metric::new(&g, vec![q(1, 4), q(3, 4)]).unwrap();
        assert_eq!(max_slope(&id, &l, &l), Slope::Finite(Q::one()));
        assert_eq!(max_slope(&id, &l, &l2), Slope::Finite(q(3, 2)));
    }

    #[test]
    fn rose_norm() {
        let g = Graph::rose(2);
        let l = Metric::new(&g, vec![q(1, 2), q(1, 2)]).unwrap();
        let t = q(1, 5);
        let tau = TangentVector::new(&g, vec![t.clone(), -t.clone()]).unwrap();
        let r = lipschitz_norm(&g, &l, &tau);
        assert_eq!(r.value, &t * q(2, 1));
        assert_eq!(r.witness.kind, CandidateKind::Embedded);
        assert_eq!(r.witness.lp.display(&g).to_string(), "a");
        assert_eq!(norm_value(&g, &l, &TangentVector::zero(&g)), Q::zero());
    }

    #[test]
    fn segment_stretch_matches_direct_value() {
        let g = Graph::rose(2);
        let l = Metric::new(&g, vec![q(1, 2), q(1, 2)]).unwrap();
        let tau = TangentVector::new(&g, vec![q(1, 4), q(-1, 4)]).unwrap();
        assert_eq!(segment_stretch(&g, &l, &tau, &q(1, 4)).unwrap(), q(9, 8));
        let d = directional_derivative_distance(&g, &l, &tau, &q(1, 4)).unwrap();
        assert!((d - 4.0 * (9.0f64 / 8.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn cones_cover_witnesses() {
        let g = Graph::rose(2);
        let l = Metric::new(&g, vec![q(1, 2), q(1, 2)]).unwrap();
        let cones = ConeDecomposition::new(&g, &l);
        assert_eq!(cones.cells.len(), 4);
        let tau = TangentVector::new(&g, vec![q(1, 3), q(-1, 3)]).unwrap();
        let w = lipschitz_norm(&g, &l, &tau).witness;
        let inside = cones.cells_containing(&tau);
        assert!(inside.iter().any(|&i| cones.cells[i].candidate == w));
    }
}
