//! The potential Ψ, the correction term N and the corrected norm ‖·‖ᴺ.
//!
//! Every term is a shortest length `ℓᵢ(a)` of a nonzero class `a` in a
//! nontrivial double cover `Γᵢ`, measured with the pulled-back metric.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::graph::Graph;
use crate::homology::{
    all_class_reports, class_lengths, enumerate_double_covers, state_distances, CoverIndex, DoubleCover, HomologyClass,
};
use crate::lipschitz::norm_value;
use crate::loops::Loop;
use crate::marked::MarkedPoint;
use crate::metric::{Metric, TangentVector};
use crate::rational::{ln_q, ln_ratio, over_common_denominator, qi, to_f64, Scaled, Weight, Q};

/// Number of summands `(2ⁿ − 1)(2²ⁿ⁻¹ − 1)`.
pub fn k_constant(rank: usize) -> u64 {
    ((1u64 << rank) - 1) * ((1u64 << (2 * rank - 1)) - 1)
}

/// Quasi-symmetry constant `3(K + 1)`.
pub fn a_constant(rank: usize) -> u64 {
    3 * (k_constant(rank) + 1)
}

/// The double covers of `graph`, built once per graph.
pub fn covers_of(graph: &Graph) -> Arc<Vec<DoubleCover>> {
    static CACHE: OnceLock<Mutex<HashMap<Graph, Arc<Vec<DoubleCover>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().unwrap().get(graph) {
        return c.clone();
    }
    let covers = Arc::new(enumerate_double_covers(&Arc::new(graph.clone())));
    cache.lock().unwrap().entry(graph.clone()).or_insert(covers).clone()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiTerm {
    pub cover: CoverIndex,
    /// The cover's functional read on the rose through the marking, when known.
    pub rose_functional: Option<u64>,
    pub class: HomologyClass,
    pub length: Q,
}

#[derive(Debug, Clone)]
pub struct PotentialValue {
    pub value: f64,
    pub terms: Vec<PsiTerm>,
}

impl PotentialValue {
    pub fn sorted_lengths(&self) -> Vec<Q> {
        let mut v: Vec<Q> = self.terms.iter().map(|t| t.length.clone()).collect();
        v.sort();
        v
    }
}

/// `ℓᵢ(a)` for every cover and nonzero class, cover-major.
pub fn psi_terms(graph: &Graph, metric: &Metric) -> Vec<PsiTerm> {
    covers_of(graph)
        .iter()
        .flat_map(|cover| {
            let lengths = class_lengths(cover.total(), &cover.lift_metric(metric)).expect("lifted metrics are valid");
            lengths
                .into_iter()
                .enumerate()
                .skip(1)
                .map(move |(a, length)| PsiTerm {
                    cover: cover.functional(),
                    rose_functional: None,
                    class: a as HomologyClass,
                    length,
                })
        })
        .collect()
}

fn sum_value(rank: usize, terms: &[PsiTerm]) -> f64 {
    let s: f64 = terms.iter().map(|t| ln_q(&t.length)).sum();
    -s / (k_constant(rank) + 1) as f64
}

pub fn psi_of_metric(graph: &Graph, metric: &Metric) -> PotentialValue {
    let terms = psi_terms(graph, metric);
    PotentialValue { value: sum_value(graph.rank(), &terms), terms }
}

pub fn psi(x: &MarkedPoint) -> PotentialValue {
    let m = x.marking_in().h1_matrix();
    let mut p = psi_of_metric(x.graph(), x.metric());
    for t in &mut p.terms {
        t.rose_functional = Some(m.pull_back(t.cover));
    }
    p
}

/// Which one-sided derivative a shortest-walk line should carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Side {
    Left,
    Right,
}

fn lex_minima<W: Weight>(graph: &Graph, weights: &[(W, W)]) -> Vec<(W, W)> {
    let r = graph.rank();
    let add = |a: &(W, W), b: &(W, W)| (a.0.clone() + b.0.clone(), a.1.clone() + b.1.clone());
    let mut best: Vec<Option<(W, W)>> = vec![None; 1 << r];
    for s in 0..graph.num_vertices() {
        let dist = state_distances(graph, weights, s, s, add, (W::zero(), W::zero()));
        for (a, slot) in best.iter_mut().enumerate().skip(1) {
            if let Some(d) = &dist[s << r | a] {
                if slot.as_ref().is_none_or(|b| d < b) {
                    *slot = Some(d.clone());
                }
            }
        }
    }
    best.into_iter().skip(1).map(|x| x.expect("connected graphs realize every class")).collect()
}

/// For every summand, `ℓᵢ(a)` at `lengths` and the one-sided derivative of
/// `ℓᵢ(a)` along `slopes` (right: smallest slope among shortest walks; left:
/// largest). Zero-length edges must carry slopes of the matching sign.
pub(crate) fn term_lines(graph: &Graph, lengths: &[Q], slopes: &[Q], side: Side) -> Vec<(Q, Q)> {
    let signed: Vec<Q> = match side {
        Side::Right => slopes.to_vec(),
        Side::Left => slopes.iter().map(|x| -x).collect(),
    };
    let mut out = Vec::new();
    for cover in covers_of(graph).iter() {
        let total = cover.total();
        let l = Scaled::new(&cover.lift_values(lengths));
        let m = Scaled::new(&cover.lift_values(&signed));
        let bound = total.num_vertices() << total.rank();
        let fix = |(a, b): (Q, Q)| match side {
            Side::Right => (a, b),
            Side::Left => (a, -b),
        };
        match (l.small(bound, 1), m.small(bound, 1)) {
            (Some(a), Some(b)) => {
                let w: Vec<(i128, i128)> = a.into_iter().zip(b).collect();
                out.extend(lex_minima(total, &w).into_iter().map(|(x, y)| fix((l.ratio(&x), m.ratio(&y)))));
            }
            _ => {
                let w: Vec<(BigInt, BigInt)> = l.nums.iter().cloned().zip(m.nums.iter().cloned()).collect();
                out.extend(lex_minima(total, &w).into_iter().map(|(x, y)| fix((l.ratio(&x), m.ratio(&y)))));
            }
        }
    }
    out
}

/// `Ψ(to) − Ψ(from)` for two metrics on one graph, summed as log-ratios of
/// matching terms.
pub fn psi_difference(graph: &Graph, from: &Metric, to: &Metric) -> f64 {
    let a = psi_terms(graph, from);
    let b = psi_terms(graph, to);
    let s: f64 = a.iter().zip(&b).map(|(x, y)| ln_ratio(&y.length, &x.length)).sum();
    -s / (k_constant(graph.rank()) + 1) as f64
}

/// Which realizer enters each summand of N.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// Largest `τ(α)` over realizers.
    Max,
    /// Smallest `τ(α)`, the right derivative of `t ↦ (ℓ + tτ)(a)`.
    Min,
}

/// Realizers of one summand, grouped by their crossing profile on the base.
#[derive(Debug, Clone)]
pub struct TermRealizers {
    pub cover: CoverIndex,
    pub class: HomologyClass,
    pub length: Q,
    pub realizers: Vec<Loop>,
    /// Distinct base crossing profiles, sorted.
    pub profiles: Vec<Vec<u8>>,
}

impl TermRealizers {
    fn slope(&self, tau: &TangentVector, conv: Convention) -> (Q, usize) {
        let values = self.profiles.iter().map(|p| {
            p.iter()
                .zip(tau.weights())
                .filter(|(c, _)| **c > 0)
                .map(|(c, w)| w * qi(*c as i64))
                .sum::<Q>()
        });
        let mut best: Option<(Q, usize)> = None;
        for (i, v) in values.enumerate() {
            let better = match (&best, conv) {
                (None, _) => true,
                (Some((b, _)), Convention::Max) => v > *b,
                (Some((b, _)), Convention::Min) => v < *b,
            };
            if better {
                best = Some((v, i));
            }
        }
        best.expect("every class has a realizer")
    }
}

/// All summands of Ψ with full realizer sets; metric-dependent, τ-independent.
#[derive(Debug, Clone)]
pub struct RealizerTable {
    pub rank: usize,
    pub terms: Vec<TermRealizers>,
}

impl RealizerTable {
    pub fn new(graph: &Graph, metric: &Metric) -> Result<Self> {
        let mut terms = Vec::new();
        for cover in covers_of(graph).iter() {
            for rep in all_class_reports(cover.total(), &cover.lift_metric(metric))? {
                let mut profiles: Vec<Vec<u8>> = rep.realizers.iter().map(|lp| cover.base_profile(lp)).collect();
                profiles.sort();
                profiles.dedup();
                terms.push(TermRealizers {
                    cover: cover.functional(),
                    class: rep.class,
                    length: rep.length,
                    realizers: rep.realizers,
                    profiles,
                });
            }
        }
        Ok(RealizerTable { rank: graph.rank(), terms })
    }

    /// Every summand's realizers share one base crossing profile, so each
    /// term is differentiable along every direction.
    pub fn is_generic(&self) -> bool {
        self.terms.iter().all(|t| t.profiles.len() == 1)
    }

    /// First summand with competing profiles, for skip reasons.
    pub fn first_tie(&self) -> Option<&TermRealizers> {
        self.terms.iter().find(|t| t.profiles.len() > 1)
    }

    pub fn correction(&self, tau: &TangentVector, conv: Convention) -> CorrectionValue {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let (slope, i) = t.slope(tau, conv);
            let witness = realizer_with_profile(t, &t.profiles[i]).expect("profiles come from realizers");
            terms.push(CorrectionTerm { cover: t.cover, class: t.class, length: t.length.clone(), slope, witness });
        }
        CorrectionValue { value: self.correction_value(tau, conv), terms }
    }

    /// `N(ℓ, τ)` without the per-term witnesses, in integer arithmetic over
    /// common denominators.
    pub fn correction_value(&self, tau: &TangentVector, conv: Convention) -> Q {
        let (weights, tau_den) = over_common_denominator(tau.weights());
        let (lengths, len_den) = over_common_denominator(self.terms.iter().map(|t| &t.length));
        let mut by_length: BTreeMap<&BigInt, BigInt> = BTreeMap::new();
        for (t, m) in self.terms.iter().zip(&lengths) {
            let slopes = t.profiles.iter().map(|p| {
                p.iter()
                    .zip(&weights)
                    .filter(|(c, _)| **c > 0)
                    .map(|(c, w)| w * BigInt::from(*c))
                    .sum::<BigInt>()
            });
            let slope = match conv {
                Convention::Max => slopes.max(),
                Convention::Min => slopes.min(),
            }
            .expect("every class has a realizer");
            *by_length.entry(m).or_insert_with(BigInt::zero) += slope;
        }
        let common = by_length.keys().fold(BigInt::one(), |acc, m| acc.lcm(m));
        let numer: BigInt = by_length.iter().map(|(m, s)| s * (&common / *m)).sum();
        -Q::new(numer * len_den, common * tau_den)
    }

    pub fn k_plus_one(&self) -> Q {
        qi(k_constant(self.rank) as i64 + 1)
    }
}

fn realizer_with_profile(t: &TermRealizers, want: &[u8]) -> Option<Loop> {
    let ne = want.len();
    t.realizers
        .iter()
        .find(|lp| {
            let mut p = vec![0u8; ne];
            for d in lp.edges() {
                p[d.edge() % ne] += 1;
            }
            p == want
        })
        .cloned()
}

#[derive(Debug, Clone)]
pub struct CorrectionTerm {
    pub cover: CoverIndex,
    pub class: HomologyClass,
    pub length: Q,
    /// `τ(α)` of the selected realizer.
    pub slope: Q,
    pub witness: Loop,
}

#[derive(Debug, Clone)]
pub struct CorrectionValue {
    pub value: Q,
    pub terms: Vec<CorrectionTerm>,
}

pub fn correction_n(graph: &Graph, metric: &Metric, tau: &TangentVector, conv: Convention) -> Result<CorrectionValue> {
    Ok(RealizerTable::new(graph, metric)?.correction(tau, conv))
}

/// `‖τ‖ᴸ`, `N` and `‖τ‖ᴺ = ‖τ‖ᴸ + N/(K+1)` from one realizer table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormTriple {
    pub lipschitz: Q,
    pub correction: Q,
    pub corrected: Q,
}

pub fn norm_triple(graph: &Graph, metric: &Metric, table: &RealizerTable, tau: &TangentVector, conv: Convention) -> NormTriple {
    let lipschitz = norm_value(graph, metric, tau);
    let correction = table.correction_value(tau, conv);
    let corrected = &lipschitz + &correction / table.k_plus_one();
    NormTriple { lipschitz, correction, corrected }
}

pub fn corrected_norm(graph: &Graph, metric: &Metric, tau: &TangentVector) -> Result<Q> {
    let table = RealizerTable::new(graph, metric)?;
    Ok(norm_triple(graph, metric, &table, tau, Convention::Max).corrected)
}

#[derive(Debug, Clone)]
pub struct DerivativeReport {
    /// Why the check was skipped, if it was.
    pub skipped: Option<String>,
    /// `‖τ‖ᴺ − ‖τ‖ᴸ`.
    pub expected: f64,
    /// `(t, (Ψ(ℓ + tτ) − Ψ(ℓ)) / t, |quotient − expected|)`.
    pub quotients: Vec<(f64, f64, f64)>,
}

/// Finite-difference quotients of Ψ along `τ` against `N/(K+1)`, at metrics
/// where every summand has a unique realizer profile.
pub fn psi_directional_derivative_check(
    graph: &Graph,
    metric: &Metric,
    tau: &TangentVector,
    steps: &[Q],
) -> Result<DerivativeReport> {
    tau.check_integrable(graph, metric)?;
    let table = RealizerTable::new(graph, metric)?;
    let mut report = DerivativeReport { skipped: None, expected: 0.0, quotients: Vec::new() };
    if let Some(t) = table.first_tie() {
        report.skipped = Some(format!(
            "non-generic: cover {:#b}, class {:#b} has {} realizer profiles",
            t.cover,
            t.class,
            t.profiles.len()
        ));
        return Ok(report);
    }
    let n = table.correction(tau, Convention::Max).value;
    report.expected = to_f64(&(n / table.k_plus_one()));
    for t in steps {
        let moved = metric.moved(graph, tau, t)?;
        let q = psi_difference(graph, metric, &moved) / to_f64(t);
        report.quotients.push((to_f64(t), q, (q - report.expected).abs()));
    }
    Ok(report)
}

/// True when `x` has no zero-length edge and every summand is smooth at it.
pub fn is_generic_point(graph: &Graph, metric: &Metric) -> Result<bool> {
    Ok(metric.is_interior() && RealizerTable::new(graph, metric)?.is_generic())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::GraphMap;
    use crate::rational::q;
    use std::sync::Arc;

    #[test]
    fn constants() {
        assert_eq!((k_constant(2), a_constant(2)), (21, 66));
        assert_eq!((k_constant(3), a_constant(3)), (217, 654));
        assert_eq!(k_constant(4), 1905);
    }

    #[test]
    fn rose_psi_terms() {
        let r = Graph::rose(2);
        let l = Metric::new(&r, vec![q(1, 2), q(1, 2)]).unwrap();
        let p = psi_of_metric(&r, &l);
        assert_eq!(p.terms.len(), 21);
        // each cover has a lift of one petal (length 1/2), a doubled petal
        // (length 1) and mixed classes
        assert!(p.sorted_lengths().iter().all(|x| *x >= q(1, 2)));
    }

    #[test]
    fn psi_is_invariant_under_automorphisms() {
        let r = Arc::new(Graph::rose(2));
        let x = MarkedPoint::rose(Metric::new(&r, vec![q(1, 3), q(2, 3)]).unwrap()).unwrap();
        let phi = GraphMap::rose_map(r.clone(), &["a b", "a"]).unwrap();
        let inv = GraphMap::rose_map(r, &["b", "b' a"]).unwrap();
        let y = x.act_by_automorphism(&phi, &inv).unwrap();
        let (px, py) = (psi(&x), psi(&y));
        assert_eq!(px.sorted_lengths(), py.sorted_lengths());
        assert_eq!(px.value, py.value);
        let mut fx: Vec<u64> = px.terms.iter().map(|t| t.rose_functional.unwrap()).collect();
        let mut fy: Vec<u64> = py.terms.iter().map(|t| t.rose_functional.unwrap()).collect();
        fx.sort();
        fy.sort();
        assert_eq!(fx, fy);
    }

    #[test]
    fn zero_direction() {
        let r = Graph::rose(2);
        let l = Metric::new(&r, vec![q(1, 3), q(2, 3)]).unwrap();
        let z = TangentVector::zero(&r);
        assert_eq!(correction_n(&r, &l, &z, Convention::Max).unwrap().value, Q::zero());
        assert_eq!(corrected_norm(&r, &l, &z).unwrap(), Q::zero());
    }

    #[test]
    fn generic_corrections_are_odd() {
        let r = Graph::rose(2);
        let l = Metric::new(&r, vec![q(2, 7), q(5, 7)]).unwrap();
        let table = RealizerTable::new(&r, &l).unwrap();
        assert!(table.is_generic());
        let tau = TangentVector::new(&r, vec![q(1, 6), q(-1, 6)]).unwrap();
        let a = table.correction(&tau, Convention::Max).value;
        let b = table.correction(&-&tau, Convention::Max).value;
        assert_eq!(a + b, Q::zero());
    }

    #[test]
    fn derivative_matches_at_generic_point() {
        let r = Graph::rose(2);
        let l = Metric::new(&r, vec![q(2, 7), q(5, 7)]).unwrap();
        let tau = TangentVector::new(&r, vec![q(1, 6), q(-1, 6)]).unwrap();
        let rep = psi_directional_derivative_check(&r, &l, &tau, &[q(1, 1_000_000)]).unwrap();
        assert!(rep.skipped.is_none());
        assert!(rep.quotients[0].2 < 1e-3);
    }
}
