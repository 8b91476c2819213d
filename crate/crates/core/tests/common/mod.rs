//! Seeded generators shared by the integration tests.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wbisim_core::semiring::{
    Arctic, ArcticValue, Boolean, ExtRational, MaxTimes, Real, RealFloat, Semiring, Tropical,
    Truncation,
};
use wbisim_core::solver::LinearSystem;
use wbisim_core::wlts::{Label, Wlts, WltsBuilder};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(p: i64, d: i64) -> ExtRational {
    ExtRational::ratio(p, d)
}

pub fn big(p: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

/// Random nonzero transition weights, drawn from a small pool so that
/// random systems have a fair chance of equal class weights.
pub trait WeightGen: Semiring {
    fn random_weight(&self, rng: &mut ChaCha8Rng) -> Self::Elem;
}

impl WeightGen for Boolean {
    fn random_weight(&self, _: &mut ChaCha8Rng) -> bool {
        true
    }
}

impl WeightGen for Real {
    fn random_weight(&self, rng: &mut ChaCha8Rng) -> ExtRational {
        [q(1, 2), q(1, 3), q(1, 1), q(2, 1)]
            .choose(rng)
            .unwrap()
            .clone()
    }
}

impl WeightGen for RealFloat {
    fn random_weight(&self, rng: &mut ChaCha8Rng) -> f64 {
        *[0.5, 0.25, 1.0, 2.0].choose(rng).unwrap()
    }
}

impl WeightGen for Tropical {
    fn random_weight(&self, rng: &mut ChaCha8Rng) -> ExtRational {
        ExtRational::integer(rng.gen_range(0..=3))
    }
}

impl WeightGen for Truncation {
    fn random_weight(&self, rng: &mut ChaCha8Rng) -> u64 {
        rng.gen_range(0..self.threshold())
    }
}

impl WeightGen for Arctic {
    fn random_weight(&self, rng: &mut ChaCha8Rng) -> ArcticValue {
        ArcticValue::integer(rng.gen_range(-2..=2))
    }
}

impl WeightGen for MaxTimes {
    fn random_weight(&self, rng: &mut ChaCha8Rng) -> BigRational {
        [big(1, 1), big(1, 2), big(1, 3)]
            .choose(rng)
            .unwrap()
            .clone()
    }
}

fn builder<S: Semiring>(s: S, n: usize, actions: usize) -> WltsBuilder<S> {
    let mut b = WltsBuilder::new(s);
    for i in 0..n {
        b.add_state(format!("s{i}")).unwrap();
    }
    for a in 0..actions {
        b.add_action(((b'a' + a as u8) as char).to_string())
            .unwrap();
    }
    b
}

fn labels(actions: usize, tau: bool) -> Vec<Label> {
    let mut v: Vec<Label> = (0..actions).map(Label::Action).collect();
    if tau {
        v.insert(0, Label::Tau);
    }
    v
}

/// Every `(x, label, y)` triple is an edge with probability `density`.
pub fn random_system<S: WeightGen>(
    s: &S,
    rng: &mut ChaCha8Rng,
    n: usize,
    actions: usize,
    density: f64,
    tau: bool,
) -> Wlts<S> {
    let mut b = builder(s.clone(), n, actions);
    let ids: Vec<_> = (0..n)
        .map(|i| b.state_by_name(&format!("s{i}")).unwrap())
        .collect();
    for &x in &ids {
        for l in labels(actions, tau) {
            for &y in &ids {
                if rng.gen_bool(density) {
                    b.add_transition(x, l, y, s.random_weight(rng)).unwrap();
                }
            }
        }
    }
    b.build()
}

/// A non-deterministic LTS with `2..=max_states` states, up to three
/// actions plus τ, and edge density between 0.15 and 0.5.
pub fn random_lts(rng: &mut ChaCha8Rng, max_states: usize) -> Wlts<Boolean> {
    let n = rng.gen_range(2..=max_states);
    let actions = rng.gen_range(1..=3);
    let density = rng.gen_range(0.15..0.5);
    random_system(&Boolean, rng, n, actions, density, true)
}

/// A fully probabilistic system over exact rationals: every state is
/// terminal or has outgoing mass exactly one. With `acyclic`, edges only
/// go to higher-numbered states.
pub fn random_generative(
    rng: &mut ChaCha8Rng,
    n: usize,
    actions: usize,
    acyclic: bool,
) -> Wlts<Real> {
    let mut b = builder(Real, n, actions);
    let ids: Vec<_> = (0..n)
        .map(|i| b.state_by_name(&format!("s{i}")).unwrap())
        .collect();
    let labels = labels(actions, true);
    for (x, &sx) in ids.iter().enumerate() {
        let lo = if acyclic { x + 1 } else { 0 };
        if lo >= n || rng.gen_bool(0.2) {
            continue;
        }
        let k = rng.gen_range(1..=3);
        let parts: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=2)).collect();
        let total: i64 = parts.iter().sum();
        for p in parts {
            let y = ids[rng.gen_range(lo..n)];
            let l = *labels.choose(rng).unwrap();
            b.add_transition(sx, l, y, q(p, total)).unwrap();
        }
    }
    b.build()
}

/// Edges only from lower to higher state numbers, weights from the pool.
pub fn random_dag<S: WeightGen>(s: &S, rng: &mut ChaCha8Rng, n: usize, actions: usize) -> Wlts<S> {
    let mut b = builder(s.clone(), n, actions);
    let ids: Vec<_> = (0..n)
        .map(|i| b.state_by_name(&format!("s{i}")).unwrap())
        .collect();
    let labels = labels(actions, true);
    for x in 0..n {
        for y in x + 1..n {
            for &l in &labels {
                if rng.gen_bool(0.3) {
                    b.add_transition(ids[x], l, ids[y], s.random_weight(rng))
                        .unwrap();
                }
            }
        }
    }
    b.build()
}

/// Random `x = M·x + b` systems on which Kleene iteration has a limit.
pub trait SystemGen: Semiring {
    fn random_system(&self, rng: &mut ChaCha8Rng, n: usize) -> LinearSystem<Self::Elem>;
}

fn sparse_system<S: Semiring>(
    s: &S,
    rng: &mut ChaCha8Rng,
    n: usize,
    density: f64,
    mut entry: impl FnMut(&mut ChaCha8Rng) -> S::Elem,
) -> LinearSystem<S::Elem> {
    let matrix: Vec<Vec<S::Elem>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if rng.gen_bool(density) {
                        entry(rng)
                    } else {
                        s.zero()
                    }
                })
                .collect()
        })
        .collect();
    let rhs = (0..n)
        .map(|_| {
            if rng.gen_bool(0.5) {
                entry(rng)
            } else {
                s.zero()
            }
        })
        .collect();
    LinearSystem::from_dense(s, matrix, rhs)
}

impl SystemGen for Boolean {
    fn random_system(&self, rng: &mut ChaCha8Rng, n: usize) -> LinearSystem<bool> {
        let d = rng.gen_range(0.05..0.4);
        sparse_system(self, rng, n, d, |_| true)
    }
}

impl SystemGen for Tropical {
    fn random_system(&self, rng: &mut ChaCha8Rng, n: usize) -> LinearSystem<ExtRational> {
        let d = rng.gen_range(0.05..0.4);
        sparse_system(self, rng, n, d, |r| {
            q(r.gen_range(0..=20), r.gen_range(1..=4))
        })
    }
}

impl SystemGen for Truncation {
    fn random_system(&self, rng: &mut ChaCha8Rng, n: usize) -> LinearSystem<u64> {
        let d = rng.gen_range(0.05..0.4);
        let k = self.threshold();
        sparse_system(self, rng, n, d, |r| r.gen_range(0..k))
    }
}

impl SystemGen for Arctic {
    /// Non-positive entries, so that no cycle has positive weight.
    fn random_system(&self, rng: &mut ChaCha8Rng, n: usize) -> LinearSystem<ArcticValue> {
        let d = rng.gen_range(0.05..0.4);
        let m = sparse_system(self, rng, n, d, |r| {
            ArcticValue::integer(-r.gen_range(0..=6))
        });
        let rhs = (0..n)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    ArcticValue::integer(rng.gen_range(-5..=5))
                } else {
                    self.zero()
                }
            })
            .collect();
        LinearSystem::new((0..n).map(|i| m.row(i).to_vec()).collect(), rhs)
    }
}

impl SystemGen for MaxTimes {
    fn random_system(&self, rng: &mut ChaCha8Rng, n: usize) -> LinearSystem<BigRational> {
        let d = rng.gen_range(0.05..0.4);
        sparse_system(self, rng, n, d, |r| big(r.gen_range(1..=10), 10))
    }
}

/// Entries `c/100` with every row summing to at most 9/10; with
/// `nilpotent`, only entries above the diagonal.
pub fn random_contracting_rows(
    rng: &mut ChaCha8Rng,
    n: usize,
    nilpotent: bool,
) -> (Vec<Vec<(usize, i64)>>, Vec<i64>) {
    let rows = (0..n)
        .map(|i| {
            let mut budget = 90i64;
            let mut row = Vec::new();
            let mut cols: Vec<usize> = if nilpotent {
                (i + 1..n).collect()
            } else {
                (0..n).collect()
            };
            cols.shuffle(rng);
            for j in cols {
                if budget == 0 || !rng.gen_bool(0.4) {
                    continue;
                }
                let c = rng.gen_range(1..=budget.min(45));
                budget -= c;
                row.push((j, c));
            }
            row.sort();
            row
        })
        .collect();
    let rhs = (0..n)
        .map(|_| {
            if rng.gen_bool(0.6) {
                rng.gen_range(1..=100)
            } else {
                0
            }
        })
        .collect();
    (rows, rhs)
}

pub fn rational_system(rows: &[Vec<(usize, i64)>], rhs: &[i64]) -> LinearSystem<ExtRational> {
    LinearSystem::new(
        rows.iter()
            .map(|r| r.iter().map(|&(j, c)| (j, q(c, 100))).collect())
            .collect(),
        rhs.iter().map(|&c| q(c, 1)).collect(),
    )
}

pub fn float_system(rows: &[Vec<(usize, i64)>], rhs: &[i64]) -> LinearSystem<f64> {
    LinearSystem::new(
        rows.iter()
            .map(|r| r.iter().map(|&(j, c)| (j, c as f64 / 100.0)).collect())
            .collect(),
        rhs.iter().map(|&c| c as f64).collect(),
    )
}

/// Random boolean LTS for timing runs: `m` actions, τ and each action with
/// an expected out-degree of about one.
pub fn timing_lts(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Wlts<Boolean> {
    let mut b = builder(Boolean, n, m);
    let ids: Vec<_> = (0..n)
        .map(|i| b.state_by_name(&format!("s{i}")).unwrap())
        .collect();
    for &x in &ids {
        for l in labels(m, true) {
            let degree: f64 = if l.is_tau() { 0.8 } else { 1.2 };
            for _ in 0..2 {
                if rng.gen_bool(degree / 2.0) {
                    let y = ids[rng.gen_range(0..n)];
                    b.add_transition(x, l, y, true).unwrap();
                }
            }
        }
    }
    b.build()
}
