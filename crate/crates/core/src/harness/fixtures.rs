//! Worked examples and automorphism fixtures used by the verification suites.

use std::sync::Arc;

use crate::error::Result;
use crate::graph::{DirEdge, Graph};
use crate::map::GraphMap;
use crate::marked::MarkedPoint;
use crate::metric::{Metric, TangentVector};
use crate::paths::{PLPath, PathStep};
use crate::rational::{qi, Q};

fn rose_point(lengths: Vec<Q>) -> Result<MarkedPoint> {
    let g = Graph::rose(lengths.len());
    MarkedPoint::rose(Metric::new(&g, lengths)?)
}

/// `x_k`: the rose with petals `1/k` and `1 − 1/k`.
pub fn example1(k: i64) -> Result<MarkedPoint> {
    let k = qi(k);
    let one = qi(1);
    rose_point(vec![&one / &k, &one - &one / &k])
}

/// `(Γ_{ε,1−2ε}, Γ_{ε,0})`: a barbell with circles `ε, ε` and arc `1 − 2ε`,
/// and the rose obtained by collapsing its arc after moving length to one circle.
pub fn example2(eps: &Q) -> Result<(MarkedPoint, MarkedPoint)> {
    let one = qi(1);
    let rose = rose_point(vec![eps.clone(), &one - eps])?;
    let moved = [DirEdge::forward(1), DirEdge::backward(1)];
    let (face, _) = rose.blow_up(0, &moved, "p", "w")?;
    let metric = Metric::new(face.graph(), vec![eps.clone(), eps.clone(), &one - eps * qi(2)])?;
    Ok((face.with_metric(metric)?, rose))
}

/// `(x_0, x_t)`: two circles of length `ε` joined by arcs of lengths `t` and
/// `1 − t − 2ε`. Edge order is `a, b, c, w` with `w` the arc of length `t`.
pub fn example3(eps: &Q, t: &Q) -> Result<(MarkedPoint, MarkedPoint)> {
    let one = qi(1);
    let rose = rose_point(vec![eps.clone(), eps.clone(), &one - eps * qi(2)])?;
    let moved = [DirEdge::forward(1), DirEdge::backward(1), DirEdge::backward(2)];
    let (x0, _) = rose.blow_up(0, &moved, "q", "w")?;
    let metric = Metric::new(x0.graph(), vec![eps.clone(), eps.clone(), &one - eps * qi(2) - t, t.clone()])?;
    let xt = x0.with_metric(metric)?;
    Ok((x0, xt))
}

/// A rose automorphism with a supplied inverse.
#[derive(Debug, Clone)]
pub struct AutomorphismFixture {
    pub name: &'static str,
    pub phi: GraphMap,
    pub phi_inv: GraphMap,
}

impl AutomorphismFixture {
    pub fn new(name: &'static str, images: &[&str], inverse: &[&str]) -> Result<Self> {
        let rose = Arc::new(Graph::rose(images.len()));
        let phi = GraphMap::rose_map(rose.clone(), images)?;
        let phi_inv = GraphMap::rose_map(rose, inverse)?;
        Ok(AutomorphismFixture { name, phi, phi_inv })
    }

    /// `f₁ ∘ f₂ ∘ …`, with inverse `… ∘ f₂⁻¹ ∘ f₁⁻¹`.
    pub fn product(name: &'static str, factors: &[AutomorphismFixture]) -> Result<Self> {
        let mut phi = factors[0].phi.clone();
        let mut phi_inv = factors[0].phi_inv.clone();
        for f in &factors[1..] {
            phi = GraphMap::compose(&phi, &f.phi)?;
            phi_inv = GraphMap::compose(&f.phi_inv, &phi_inv)?;
        }
        Ok(AutomorphismFixture { name, phi, phi_inv })
    }

    pub fn rank(&self) -> usize {
        self.phi.source().num_edges()
    }

    /// Nonnegative matrix `M[i][j]` = occurrences of petal `i` in the image of petal `j`.
    pub fn transition_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.rank();
        (0..n)
            .map(|i| (0..n).map(|j| self.phi.edge_image(j).iter().filter(|d| d.edge() == i).count() as f64).collect())
            .collect()
    }
}

pub fn automorphism_fixtures() -> Vec<AutomorphismFixture> {
    let table: [(&str, &[&str], &[&str]); 4] = [
        ("identity", &["a", "b"], &["a", "b"]),
        ("fibonacci", &["a b", "a"], &["b", "b' a"]),
        ("nielsen-product", &["a b", "b a b"], &["a a b'", "b a'"]),
        ("tribonacci", &["b", "c", "a b"], &["c a'", "a", "b"]),
    ];
    let mut out: Vec<AutomorphismFixture> = table
        .iter()
        .map(|(name, f, g)| AutomorphismFixture::new(name, f, g).expect("fixture tables are valid"))
        .collect();
    let factors = [
        AutomorphismFixture::new("", &["a b", "b", "c"], &["a b'", "b", "c"]),
        AutomorphismFixture::new("", &["a", "b c", "c"], &["a", "b c'", "c"]),
        AutomorphismFixture::new("", &["a", "b", "c a"], &["a", "b", "c a'"]),
    ];
    let factors: Vec<_> = factors.into_iter().map(|f| f.expect("fixture tables are valid")).collect();
    out.push(AutomorphismFixture::product("rank3-nielsen-cycle", &factors).expect("factors compose"));
    out
}

/// Dominant eigenvalue of a nonnegative primitive matrix by power iteration.
pub fn power_iteration(m: &[Vec<f64>], tolerance: f64, max_iter: usize) -> f64 {
    let n = m.len();
    let mut v = vec![1.0 / n as f64; n];
    let mut lambda = 0.0;
    for _ in 0..max_iter {
        let w: Vec<f64> = (0..n).map(|i| (0..n).map(|j| m[i][j] * v[j]).sum()).collect();
        let norm: f64 = w.iter().sum();
        if norm == 0.0 {
            return 0.0;
        }
        let next: Vec<f64> = w.iter().map(|x| x / norm).collect();
        let done = (norm - lambda).abs() < tolerance * 1e-3
            && next.iter().zip(&v).all(|(a, b)| (a - b).abs() < tolerance * 1e-3);
        lambda = norm;
        v = next;
        if done {
            break;
        }
    }
    lambda
}

/// A path from a rose point to a point in its orbit: blow up, slide the
/// length of petal `a` onto the new edge, collapse `a`.
pub fn orbit_path(p: &Q) -> Result<PLPath> {
    let one = qi(1);
    let x = rose_point(vec![p.clone(), &one - p])?;
    let moved = [DirEdge::forward(0), DirEdge::backward(1)];
    let (big, collapse) = x.blow_up(0, &moved, "p", "w")?;
    let direction = TangentVector::new(big.graph(), vec![-p.clone(), qi(0), p.clone()])?;
    PLPath::new(
        x,
        vec![
            PathStep::Expand { collapse },
            PathStep::Linear { direction, duration: one },
            PathStep::Collapse { forest: vec![0] },
        ],
    )
}
