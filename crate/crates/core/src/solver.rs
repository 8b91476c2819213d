//! Least solutions of `x = M·x + b` and the saturated weights built on them.
//!
//! For a class `C` the silent weights `ρ(x, τ*, C)` solve
//!
//! ```text
//! x_τ = 1                          for x ∈ C
//! x_τ = Σ_y ρ(x -τ-> y) · y_τ      for x ∉ C
//! ```
//!
//! and, with `x_τ` fixed, each action `a` gives one more system over the
//! same τ-adjacency:
//!
//! ```text
//! weak:   x_a = Σ_y ρ(x -a-> y) · y_τ  +  Σ_y ρ(x -τ-> y) · y_a
//! delay:  x_a = Σ_{y∈C} ρ(x -a-> y)    +  Σ_y ρ(x -τ-> y) · y_a
//! ```
//!
//! Systems are solved by Gauss–Jordan elimination with `star` on the pivot,
//! which yields `M*·b`, the least fixpoint in the natural order. This
//! terminates on cyclic τ-structure where Kleene iteration over exact
//! rationals would not.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::semiring::Semiring;
use crate::wlts::{Label, StateId, Wlts};

/// Systems smaller than this are eliminated on a dense matrix.
pub const DENSE_LIMIT: usize = 64;

/// `F(x) = M·x + b` with `M` stored as sorted sparse rows.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem<E> {
    rows: Vec<Vec<(usize, E)>>,
    rhs: Vec<E>,
}

impl<E: Clone> LinearSystem<E> {
    /// Rows are `(column, coefficient)` lists; they are sorted here and
    /// must not repeat a column.
    pub fn new(mut rows: Vec<Vec<(usize, E)>>, rhs: Vec<E>) -> Self {
        assert_eq!(rows.len(), rhs.len(), "matrix and vector dimensions differ");
        let n = rows.len();
        for row in &mut rows {
            row.sort_by_key(|(j, _)| *j);
            assert!(row.iter().all(|(j, _)| *j < n), "column out of range");
            assert!(
                row.windows(2).all(|w| w[0].0 != w[1].0),
                "repeated column in a row"
            );
        }
        LinearSystem { rows, rhs }
    }

    pub fn from_dense<S: Semiring<Elem = E>>(s: &S, matrix: Vec<Vec<E>>, rhs: Vec<E>) -> Self {
        let rows = matrix
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !s.is_zero(v))
                    .collect()
            })
            .collect();
        Self::new(rows, rhs)
    }

    pub fn dim(&self) -> usize {
        self.rhs.len()
    }

    pub fn row(&self, i: usize) -> &[(usize, E)] {
        &self.rows[i]
    }

    pub fn rhs(&self) -> &[E] {
        &self.rhs
    }

    pub fn coefficient(&self, i: usize, j: usize) -> Option<&E> {
        let row = &self.rows[i];
        row.binary_search_by_key(&j, |(c, _)| *c)
            .ok()
            .map(|p| &row[p].1)
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    /// `F(x) = M·x + b`.
    pub fn apply<S: Semiring<Elem = E>>(&self, s: &S, x: &[E]) -> Vec<E> {
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| {
                row.iter()
                    .fold(b.clone(), |acc, (j, m)| s.add(&acc, &s.mul(m, &x[*j])))
            })
            .collect()
    }

    pub fn is_fixpoint<S: Semiring<Elem = E>>(&self, s: &S, x: &[E]) -> bool {
        self.apply(s, x)
            .iter()
            .zip(x)
            .all(|(fx, v)| s.values_equal(fx, v))
    }
}

fn class_mask(n: usize, class: &[StateId]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for x in class {
        mask[x.index()] = true;
    }
    mask
}

fn tau_rows<S: Semiring>(w: &Wlts<S>) -> Vec<Vec<(usize, S::Elem)>> {
    w.states()
        .map(|x| {
            w.edges_labelled(x, Label::Tau)
                .iter()
                .map(|e| (e.target.index(), e.weight.clone()))
                .collect()
        })
        .collect()
}

/// `x_τ = 1` on `class`, `x_τ = Σ ρ(x -τ-> y)·y_τ` elsewhere.
pub fn build_tau_system<S: Semiring>(w: &Wlts<S>, class: &[StateId]) -> LinearSystem<S::Elem> {
    let s = w.semiring();
    let member = class_mask(w.num_states(), class);
    let mut rows = tau_rows(w);
    let mut rhs = Vec::with_capacity(rows.len());
    for (x, row) in rows.iter_mut().enumerate() {
        if member[x] {
            row.clear();
            rhs.push(s.one());
        } else {
            rhs.push(s.zero());
        }
    }
    LinearSystem { rows, rhs }
}

/// `x_a = Σ ρ(x -a-> y)·w_tau[y] + Σ ρ(x -τ-> y)·y_a` for every state,
/// members of the class included.
pub fn build_action_system<S: Semiring>(
    w: &Wlts<S>,
    action: Label,
    w_tau: &[S::Elem],
) -> LinearSystem<S::Elem> {
    let s = w.semiring();
    let rhs = w
        .states()
        .map(|x| {
            w.edges_labelled(x, action).iter().fold(s.zero(), |acc, e| {
                s.add(&acc, &s.mul(&e.weight, &w_tau[e.target.index()]))
            })
        })
        .collect();
    LinearSystem {
        rows: tau_rows(w),
        rhs,
    }
}

/// `x_a = Σ_{y∈C} ρ(x -a-> y) + Σ ρ(x -τ-> y)·y_a`.
pub fn build_delay_system<S: Semiring>(
    w: &Wlts<S>,
    class: &[StateId],
    action: Label,
) -> LinearSystem<S::Elem> {
    let member = class_mask(w.num_states(), class);
    let rhs = w
        .states()
        .map(|x| w.class_weight_masked(x, action, &member))
        .collect();
    LinearSystem {
        rows: tau_rows(w),
        rhs,
    }
}

/// The least fixpoint of `x = M·x + b`, computed as `M*·b` by star
/// elimination with ascending pivots.
pub fn solve_least<S: Semiring>(s: &S, sys: &LinearSystem<S::Elem>) -> Vec<S::Elem> {
    if sys.dim() < DENSE_LIMIT {
        eliminate_dense(s, sys)
    } else {
        eliminate_sparse(s, sys)
    }
}

fn eliminate_dense<S: Semiring>(s: &S, sys: &LinearSystem<S::Elem>) -> Vec<S::Elem> {
    let n = sys.dim();
    let zero = s.zero();
    let mut m = vec![vec![zero.clone(); n]; n];
    for (i, row) in sys.rows.iter().enumerate() {
        for (j, v) in row {
            m[i][*j] = v.clone();
        }
    }
    let mut b = sys.rhs.clone();

    for k in 0..n {
        // x_k = star(m_kk) · (Σ_{j≠k} m_kj x_j + b_k)
        if !s.is_zero(&m[k][k]) {
            let st = s.star(&m[k][k]);
            m[k][k] = zero.clone();
            for v in m[k].iter_mut() {
                if !s.is_zero(v) {
                    *v = s.mul(&st, v);
                }
            }
            b[k] = s.mul(&st, &b[k]);
        }
        let pivot_row = std::mem::take(&mut m[k]);
        let pivot_rhs = b[k].clone();
        for i in 0..n {
            if i == k || s.is_zero(&m[i][k]) {
                continue;
            }
            let f = std::mem::replace(&mut m[i][k], zero.clone());
            for (j, v) in pivot_row.iter().enumerate() {
                if !s.is_zero(v) {
                    m[i][j] = s.add(&m[i][j], &s.mul(&f, v));
                }
            }
            b[i] = s.add(&b[i], &s.mul(&f, &pivot_rhs));
        }
        m[k] = pivot_row;
    }
    b
}

fn eliminate_sparse<S: Semiring>(s: &S, sys: &LinearSystem<S::Elem>) -> Vec<S::Elem> {
    let n = sys.dim();
    let mut rows: Vec<BTreeMap<usize, S::Elem>> = sys
        .rows
        .iter()
        .map(|r| r.iter().cloned().collect())
        .collect();
    // users[j]: rows with a nonzero coefficient in column j
    let mut users: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (i, row) in rows.iter().enumerate() {
        for &j in row.keys() {
            users[j].insert(i);
        }
    }
    let mut b = sys.rhs.clone();

    for k in 0..n {
        if let Some(pivot) = rows[k].remove(&k) {
            users[k].remove(&k);
            let st = s.star(&pivot);
            for v in rows[k].values_mut() {
                *v = s.mul(&st, v);
            }
            b[k] = s.mul(&st, &b[k]);
        }
        let pivot_row: Vec<(usize, S::Elem)> =
            rows[k].iter().map(|(j, v)| (*j, v.clone())).collect();
        let pivot_rhs = b[k].clone();
        let dependents = std::mem::take(&mut users[k]);
        for i in dependents {
            if i == k {
                continue;
            }
            let Some(f) = rows[i].remove(&k) else {
                continue;
            };
            for (j, v) in &pivot_row {
                let prod = s.mul(&f, v);
                if s.is_zero(&prod) {
                    continue;
                }
                match rows[i].entry(*j) {
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        let sum = s.add(o.get(), &prod);
                        o.insert(sum);
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(prod);
                        users[*j].insert(i);
                    }
                }
            }
            b[i] = s.add(&b[i], &s.mul(&f, &pivot_rhs));
        }
    }
    b
}

/// The closure `M*` of a square matrix given as sparse rows, by the
/// Floyd–Warshall–Kleene recurrence. Returned dense, row-major.
pub fn closure<S: Semiring>(s: &S, rows: &[Vec<(usize, S::Elem)>]) -> Vec<Vec<S::Elem>> {
    let n = rows.len();
    let zero = s.zero();
    let mut a = vec![vec![zero.clone(); n]; n];
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row {
            a[i][*j] = v.clone();
        }
    }
    // After step k, a[i][j] sums the nonempty paths i→j with intermediate
    // nodes below k+1.
    for k in 0..n {
        let st = s.star(&a[k][k]);
        let row_k: Vec<S::Elem> = a[k].iter().map(|v| s.mul(&st, v)).collect();
        let col_k: Vec<S::Elem> = (0..n).map(|i| a[i][k].clone()).collect();
        for (i, f) in col_k.iter().enumerate() {
            if s.is_zero(f) {
                continue;
            }
            for (j, v) in row_k.iter().enumerate() {
                if !s.is_zero(v) {
                    a[i][j] = s.add(&a[i][j], &s.mul(f, v));
                }
            }
        }
    }
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = s.add(&s.one(), &row[i]);
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum KleeneStatus {
    /// `x_k` equals `x_{k+1}`; `iterations` is that `k`.
    Converged {
        iterations: usize,
    },
    MaxIterations {
        iterations: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct KleeneOutcome<E> {
    pub values: Vec<E>,
    pub status: KleeneStatus,
}

impl<E> KleeneOutcome<E> {
    pub fn converged(&self) -> bool {
        matches!(self.status, KleeneStatus::Converged { .. })
    }
}

/// The ascending chain `0, F(0), F(F(0)), …`, starting with the zero vector.
pub struct KleeneChain<'a, S: Semiring> {
    s: &'a S,
    sys: &'a LinearSystem<S::Elem>,
    next: Vec<S::Elem>,
}

impl<'a, S: Semiring> KleeneChain<'a, S> {
    pub fn new(s: &'a S, sys: &'a LinearSystem<S::Elem>) -> Self {
        KleeneChain {
            s,
            sys,
            next: vec![s.zero(); sys.dim()],
        }
    }
}

impl<S: Semiring> Iterator for KleeneChain<'_, S> {
    type Item = Vec<S::Elem>;

    fn next(&mut self) -> Option<Self::Item> {
        let following = self.sys.apply(self.s, &self.next);
        Some(std::mem::replace(&mut self.next, following))
    }
}

pub fn default_max_iterations(n: usize) -> usize {
    10 * n * n
}

/// Iterates `F` from the zero vector until two successive iterates agree
/// (exactly, by `values_equal`, or within `tol` when given) or `max_iters`
/// applications of `F` have been made.
pub fn kleene_iterate<S: Semiring>(
    s: &S,
    sys: &LinearSystem<S::Elem>,
    max_iters: Option<usize>,
    tol: Option<f64>,
) -> KleeneOutcome<S::Elem> {
    let max_iters = max_iters.unwrap_or_else(|| default_max_iterations(sys.dim()));
    let same = |a: &S::Elem, b: &S::Elem| match tol {
        Some(t) => s.approx_eq(a, b, t),
        None => s.values_equal(a, b),
    };
    let mut current = vec![s.zero(); sys.dim()];
    for k in 0..max_iters {
        let next = sys.apply(s, &current);
        if next.iter().zip(&current).all(|(a, b)| same(a, b)) {
            return KleeneOutcome {
                values: current,
                status: KleeneStatus::Converged { iterations: k },
            };
        }
        current = next;
    }
    KleeneOutcome {
        values: current,
        status: KleeneStatus::MaxIterations {
            iterations: max_iters,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SaturationMode {
    /// `τ*` and `τ*aτ*`.
    Weak,
    /// `τ*` and `τ*a`.
    Delay,
}

/// How the per-class systems are solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverKind {
    #[default]
    Elimination,
    /// Plain Kleene iteration, failing when it does not settle.
    Kleene { max_iters: Option<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("Kleene iteration for the {system} system did not converge within {iterations} steps")]
    NotConverged { system: String, iterations: usize },
}

/// Saturated weights towards one class.
#[derive(Debug, Clone, PartialEq)]
pub struct SaturationTable<E> {
    pub class: Vec<StateId>,
    pub mode: SaturationMode,
    /// `ρ(x, τ*, C)` per state.
    pub tau: Vec<E>,
    /// Per action index: `ρ(x, τ*aτ*, C)` (weak) or `ρ(x, τ*a, C)` (delay).
    pub actions: Vec<Vec<E>>,
}

impl<E> SaturationTable<E> {
    pub fn weights(&self, label: Label) -> &[E] {
        match label {
            Label::Tau => &self.tau,
            Label::Action(i) => &self.actions[i],
        }
    }
}

/// Solves the τ-system and one system per action for `class`, by star
/// elimination.
pub fn saturate<S: Semiring>(
    w: &Wlts<S>,
    class: &[StateId],
    mode: SaturationMode,
) -> SaturationTable<S::Elem> {
    saturate_with(w, class, mode, SolverKind::Elimination)
        .expect("elimination always produces a solution")
}

pub fn saturate_with<S: Semiring>(
    w: &Wlts<S>,
    class: &[StateId],
    mode: SaturationMode,
    solver: SolverKind,
) -> Result<SaturationTable<S::Elem>, SolverError> {
    let s = w.semiring();
    let solve = |sys: &LinearSystem<S::Elem>, system: Label| match solver {
        SolverKind::Elimination => Ok(solve_least(s, sys)),
        SolverKind::Kleene { max_iters } => {
            let out = kleene_iterate(s, sys, max_iters, None);
            match out.status {
                KleeneStatus::Converged { .. } => Ok(out.values),
                KleeneStatus::MaxIterations { iterations } => Err(SolverError::NotConverged {
                    system: w.label_name(system).to_owned(),
                    iterations,
                }),
            }
        }
    };
    let tau = solve(&build_tau_system(w, class), Label::Tau)?;
    let actions = (0..w.num_actions())
        .into_par_iter()
        .map(|a| {
            let label = Label::Action(a);
            let sys = match mode {
                SaturationMode::Weak => build_action_system(w, label, &tau),
                SaturationMode::Delay => build_delay_system(w, class, label),
            };
            solve(&sys, label)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SaturationTable {
        class: class.to_vec(),
        mode,
        tau,
        actions,
    })
}

/// Per-system saturation with the τ-closure shared across classes.
///
/// The action systems of every class share the matrix `M` (the
/// τ-adjacency), so their least solutions are `M*·b` for one closure `M*`
/// computed up front. Only the τ-system depends on the class through its
/// matrix and is eliminated per call.
pub struct Saturator<'w, S: Semiring> {
    wlts: &'w Wlts<S>,
    mode: SaturationMode,
    solver: SolverKind,
    tau_closure: Option<Vec<Vec<S::Elem>>>,
}

impl<'w, S: Semiring> Saturator<'w, S> {
    pub fn new(wlts: &'w Wlts<S>, mode: SaturationMode, solver: SolverKind) -> Self {
        let tau_closure = match solver {
            SolverKind::Elimination => Some(closure(wlts.semiring(), &tau_rows(wlts))),
            SolverKind::Kleene { .. } => None,
        };
        Saturator {
            wlts,
            mode,
            solver,
            tau_closure,
        }
    }

    pub fn mode(&self) -> SaturationMode {
        self.mode
    }

    pub fn saturate(&self, class: &[StateId]) -> Result<SaturationTable<S::Elem>, SolverError> {
        let Some(star) = &self.tau_closure else {
            return saturate_with(self.wlts, class, self.mode, self.solver);
        };
        let w = self.wlts;
        let s = w.semiring();
        let tau = solve_least(s, &build_tau_system(w, class));
        let actions = (0..w.num_actions())
            .into_par_iter()
            .map(|a| {
                let label = Label::Action(a);
                let sys = match self.mode {
                    SaturationMode::Weak => build_action_system(w, label, &tau),
                    SaturationMode::Delay => build_delay_system(w, class, label),
                };
                mat_vec(s, star, sys.rhs())
            })
            .collect();
        Ok(SaturationTable {
            class: class.to_vec(),
            mode: self.mode,
            tau,
            actions,
        })
    }
}

fn mat_vec<S: Semiring>(s: &S, m: &[Vec<S::Elem>], v: &[S::Elem]) -> Vec<S::Elem> {
    let support: Vec<usize> = (0..v.len()).filter(|&j| !s.is_zero(&v[j])).collect();
    m.iter()
        .map(|row| {
            support.iter().fold(s.zero(), |acc, &j| {
                if s.is_zero(&row[j]) {
                    acc
                } else {
                    s.add(&acc, &s.mul(&row[j], &v[j]))
                }
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::{Boolean, ExtRational, Real, Tropical};

    fn q(p: i64, d: i64) -> ExtRational {
        ExtRational::ratio(p, d)
    }

    fn ids(v: &[usize]) -> Vec<StateId> {
        v.iter().map(|&i| StateId::new(i)).collect()
    }

    #[test]
    fn tau_system_for_the_whole_state_space() {
        let w =
            Wlts::from_triples(Real, 3, &[(0, "tau", 1, q(1, 2)), (1, "a", 2, q(1, 1))]).unwrap();
        let sys = build_tau_system(&w, &ids(&[0, 1, 2]));
        assert!(sys.is_zero_matrix());
        assert_eq!(
            sys.rhs(),
            &[ExtRational::one(), ExtRational::one(), ExtRational::one()]
        );
    }

    #[test]
    fn tau_system_transcribes_loops_and_class_edges() {
        // state 0 ∉ C loops on τ with 1/3 and moves into C = {1} with 1/4
        let w =
            Wlts::from_triples(Real, 2, &[(0, "tau", 0, q(1, 3)), (0, "tau", 1, q(1, 4))]).unwrap();
        let sys = build_tau_system(&w, &ids(&[1]));
        assert_eq!(sys.coefficient(0, 0), Some(&q(1, 3)));
        assert_eq!(sys.coefficient(0, 1), Some(&q(1, 4)));
        assert_eq!(sys.rhs()[0], ExtRational::zero());
        assert!(sys.row(1).is_empty());
        assert_eq!(sys.rhs()[1], ExtRational::one());
        // (1/4) / (1 - 1/3) = 3/8
        assert_eq!(solve_least(&Real, &sys), vec![q(3, 8), ExtRational::one()]);
    }

    #[test]
    fn tau_free_tau_system_is_the_class_indicator() {
        let w = Wlts::from_triples(Boolean, 3, &[(0, "a", 1, true), (1, "b", 2, true)]).unwrap();
        let sys = build_tau_system(&w, &ids(&[2]));
        assert!(sys.is_zero_matrix());
        assert_eq!(sys.rhs(), &[false, false, true]);
    }

    #[test]
    fn action_system_follows_tau_into_the_action() {
        let w =
            Wlts::from_triples(Real, 2, &[(0, "tau", 1, q(1, 2)), (1, "b", 0, q(1, 1))]).unwrap();
        let tau = solve_least(&Real, &build_tau_system(&w, &ids(&[0])));
        assert_eq!(tau, vec![ExtRational::one(), ExtRational::zero()]);
        let b = w.action_by_name("b").unwrap();
        let sys = build_action_system(&w, b, &tau);
        assert_eq!(sys.rhs(), &[ExtRational::zero(), ExtRational::one()]);
        assert_eq!(solve_least(&Real, &sys), vec![q(1, 2), ExtRational::one()]);
    }

    #[test]
    fn action_system_without_edges_is_zero() {
        let mut b = crate::wlts::WltsBuilder::new(Real);
        let x = b.add_state("x").unwrap();
        let y = b.add_state("y").unwrap();
        let c = b.add_action("c").unwrap();
        b.add_transition(x, Label::Tau, y, q(1, 2)).unwrap();
        let w = b.build();
        let tau = solve_least(&Real, &build_tau_system(&w, &ids(&[1])));
        let sys = build_action_system(&w, c, &tau);
        assert!(sys.rhs().iter().all(ExtRational::is_zero));
        assert!(solve_least(&Real, &sys).iter().all(ExtRational::is_zero));
    }

    #[test]
    fn single_action_edge_into_the_class() {
        let w = Wlts::from_triples(Real, 2, &[(0, "a", 1, q(2, 5))]).unwrap();
        let table = saturate(&w, &ids(&[1]), SaturationMode::Weak);
        let a = w.action_by_name("a").unwrap();
        assert_eq!(table.weights(a), &[q(2, 5), ExtRational::zero()]);
    }

    #[test]
    fn delay_chain_multiplies_along_the_path() {
        let w =
            Wlts::from_triples(Real, 3, &[(0, "tau", 1, q(2, 3)), (1, "a", 2, q(3, 7))]).unwrap();
        let a = w.action_by_name("a").unwrap();
        let x = solve_least(&Real, &build_delay_system(&w, &ids(&[2]), a));
        assert_eq!(x, vec![q(2, 7), q(3, 7), ExtRational::zero()]);
    }

    #[test]
    fn delay_without_reachable_actions_is_zero() {
        let w =
            Wlts::from_triples(Real, 3, &[(0, "tau", 1, q(1, 2)), (2, "a", 2, q(1, 1))]).unwrap();
        let a = w.action_by_name("a").unwrap();
        let x = solve_least(&Real, &build_delay_system(&w, &ids(&[0]), a));
        assert!(x.iter().all(ExtRational::is_zero));
    }

    #[test]
    fn zero_matrix_solution_is_b() {
        let sys = LinearSystem::new(vec![vec![], vec![]], vec![q(1, 3), q(5, 2)]);
        assert_eq!(solve_least(&Real, &sys), vec![q(1, 3), q(5, 2)]);
        let k = kleene_iterate(&Real, &sys, None, None);
        assert_eq!(k.status, KleeneStatus::Converged { iterations: 1 });
        assert_eq!(k.values, vec![q(1, 3), q(5, 2)]);
    }

    #[test]
    fn geometric_one_by_one() {
        let sys = LinearSystem::new(vec![vec![(0, q(1, 2))]], vec![ExtRational::one()]);
        assert_eq!(solve_least(&Real, &sys), vec![ExtRational::integer(2)]);
        let chain: Vec<_> = KleeneChain::new(&Real, &sys)
            .take(4)
            .map(|v| v[0].clone())
            .collect();
        assert_eq!(chain, vec![ExtRational::zero(), q(1, 1), q(3, 2), q(7, 4)]);
    }

    #[test]
    fn boolean_cycle_reaches_its_class() {
        // 0 → 1 → 2 → 0 on τ, class {2}
        let w = Wlts::from_triples(
            Boolean,
            3,
            &[
                (0, "tau", 1, true),
                (1, "tau", 2, true),
                (2, "tau", 0, true),
            ],
        )
        .unwrap();
        let x = solve_least(&Boolean, &build_tau_system(&w, &ids(&[2])));
        assert_eq!(x, vec![true, true, true]);
    }

    #[test]
    fn idempotent_cycle_keeps_the_least_fixpoint() {
        // A τ-loop that never reaches C admits both false and true; least is false.
        let w = Wlts::from_triples(Boolean, 2, &[(0, "tau", 0, true)]).unwrap();
        let sys = build_tau_system(&w, &ids(&[1]));
        assert!(sys.is_fixpoint(&Boolean, &[true, true]));
        assert_eq!(solve_least(&Boolean, &sys), vec![false, true]);
    }

    #[test]
    fn mass_one_loop_without_exit_is_zero_not_infinite() {
        let w = Wlts::from_triples(Real, 2, &[(0, "tau", 0, q(1, 1))]).unwrap();
        let x = solve_least(&Real, &build_tau_system(&w, &ids(&[1])));
        assert_eq!(x[0], ExtRational::zero());
    }

    #[test]
    fn boolean_kleene_stabilises_within_n_steps() {
        let w = Wlts::from_triples(
            Boolean,
            5,
            &[
                (0, "tau", 1, true),
                (1, "tau", 2, true),
                (2, "tau", 3, true),
                (3, "tau", 4, true),
            ],
        )
        .unwrap();
        let sys = build_tau_system(&w, &ids(&[4]));
        let out = kleene_iterate(&Boolean, &sys, None, None);
        match out.status {
            KleeneStatus::Converged { iterations } => assert!(iterations <= 5),
            other => panic!("{other:?}"),
        }
        assert_eq!(out.values, solve_least(&Boolean, &sys));
    }

    #[test]
    fn exact_kleene_on_a_cycle_hits_the_cap() {
        let sys = LinearSystem::new(vec![vec![(0, q(1, 2))]], vec![ExtRational::one()]);
        let out = kleene_iterate(&Real, &sys, Some(20), None);
        assert_eq!(out.status, KleeneStatus::MaxIterations { iterations: 20 });
        // twenty applications of x ↦ x/2 + 1 from zero give 2 - 2⁻¹⁹
        assert_eq!(out.values, vec![q((1 << 20) - 1, 1 << 19)]);
    }

    #[test]
    fn dense_and_sparse_elimination_agree() {
        let n = 70;
        let mut rows = vec![Vec::new(); n];
        for (i, row) in rows.iter_mut().enumerate() {
            row.push(((i + 1) % n, q(1, 3)));
            row.push(((i * 7 + 3) % n, q(1, 4)));
            row.sort_by_key(|e| e.0);
            row.dedup_by_key(|e| e.0);
        }
        let rhs: Vec<_> = (0..n)
            .map(|i| if i % 5 == 0 { q(1, 1) } else { q(0, 1) })
            .collect();
        let sys = LinearSystem::new(rows, rhs);
        let sparse = eliminate_sparse(&Real, &sys);
        let dense = eliminate_dense(&Real, &sys);
        assert_eq!(sparse, dense);
        assert!(sys.is_fixpoint(&Real, &sparse));
    }

    #[test]
    fn closure_solves_every_right_hand_side() {
        let w = Wlts::from_triples(
            Tropical,
            4,
            &[
                (0, "tau", 1, ExtRational::integer(2)),
                (1, "tau", 0, ExtRational::integer(1)),
                (1, "tau", 2, ExtRational::integer(5)),
                (2, "tau", 3, ExtRational::integer(1)),
            ],
        )
        .unwrap();
        let star = closure(&Tropical, &tau_rows(&w));
        assert_eq!(star[0][3], ExtRational::integer(8));
        assert_eq!(star[3][0], ExtRational::Infinity);
        assert_eq!(star[2][2], ExtRational::zero());
    }

    #[test]
    fn saturator_matches_direct_saturation() {
        let w = Wlts::from_triples(
            Real,
            4,
            &[
                (0, "tau", 0, q(1, 2)),
                (0, "tau", 1, q(1, 4)),
                (0, "a", 2, q(1, 4)),
                (1, "a", 3, q(1, 1)),
                (2, "tau", 3, q(1, 3)),
                (2, "b", 0, q(2, 3)),
            ],
        )
        .unwrap();
        for mode in [SaturationMode::Weak, SaturationMode::Delay] {
            let sat = Saturator::new(&w, mode, SolverKind::Elimination);
            for class in [ids(&[3]), ids(&[0, 1]), ids(&[2, 3]), ids(&[0, 1, 2, 3])] {
                assert_eq!(sat.saturate(&class).unwrap(), saturate(&w, &class, mode));
            }
        }
    }

    #[test]
    fn kleene_solver_reports_non_convergence() {
        let w =
            Wlts::from_triples(Real, 2, &[(0, "tau", 0, q(1, 2)), (0, "tau", 1, q(1, 2))]).unwrap();
        let err = saturate_with(
            &w,
            &ids(&[1]),
            SaturationMode::Weak,
            SolverKind::Kleene {
                max_iters: Some(30),
            },
        )
        .unwrap_err();
        assert!(matches!(err, SolverError::NotConverged { ref system, .. } if system == "tau"));
    }

    #[test]
    fn generative_loop_reaches_class_with_probability_one() {
        let w =
            Wlts::from_triples(Real, 2, &[(0, "tau", 0, q(1, 2)), (0, "tau", 1, q(1, 2))]).unwrap();
        let table = saturate(&w, &ids(&[1]), SaturationMode::Weak);
        assert_eq!(table.tau, vec![ExtRational::one(), ExtRational::one()]);
    }
}
