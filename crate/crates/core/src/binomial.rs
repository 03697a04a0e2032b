//! Robust binomial model on a non-recombining tree.
//!
//! Every internal node carries a box of admissible up multipliers `[u, U]`,
//! down multipliers `[d, D]` and up probabilities `[pi, Pi]`. The box is
//! discretized into `G` equispaced points per multiplier axis; a node has one
//! child per distinct up value followed by one child per distinct down value.
//! Nodes are labelled by their branch path (`u1.d0`), the root by `root`.
//!
//! The superhedging value is computed by backward recursion; two independent
//! oracles (explicit enumeration of product measures, and a flow linear
//! program over mixtures of them) exist for cross-checking.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{Constraint, LinearProgram, LpOutcome};
use crate::measure::{Event, Measure, SampleSpace, SpaceRef};
use crate::rational::{grid, Rational};

pub const DEFAULT_LEAF_CAP: u128 = 20_000;
pub const DEFAULT_ORACLE_CAP: u128 = 1_000_000;
pub const ROOT_LABEL: &str = "root";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeBounds {
    pub u: Rational,
    pub big_u: Rational,
    pub d: Rational,
    pub big_d: Rational,
    pub pi: Rational,
    pub big_pi: Rational,
}

impl NodeBounds {
    pub fn new(
        u: Rational,
        big_u: Rational,
        d: Rational,
        big_d: Rational,
        pi: Rational,
        big_pi: Rational,
    ) -> Result<Self> {
        let b = NodeBounds {
            u,
            big_u,
            d,
            big_d,
            pi,
            big_pi,
        };
        b.validate(ROOT_LABEL)?;
        Ok(b)
    }

    /// Point intervals: the classical binomial step.
    pub fn classical(u: Rational, d: Rational, p: Rational) -> Result<Self> {
        NodeBounds::new(u.clone(), u, d.clone(), d, p.clone(), p)
    }

    pub fn validate(&self, node: &str) -> Result<()> {
        let zero = Rational::zero();
        let one = Rational::one();
        let checks = [
            (self.pi > zero, "0 < pi"),
            (self.pi <= self.big_pi, "pi <= Pi"),
            (self.big_pi < one, "Pi < 1"),
            (self.d <= self.big_d, "d <= D"),
            (self.u <= self.big_u, "u <= U"),
            (self.d > zero, "0 < d"),
            (self.d < one, "d < 1"),
            (self.big_u > one, "1 < U"),
            (self.u > zero, "0 < u"),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, condition)) => Err(Error::InvalidBounds {
                node: node.to_string(),
                condition: condition.to_string(),
            }),
            None => Ok(()),
        }
    }

    /// Whether `other` is contained in this box.
    pub fn contains(&self, other: &NodeBounds) -> bool {
        self.u <= other.u
            && other.big_u <= self.big_u
            && self.d <= other.d
            && other.big_d <= self.big_d
            && self.pi <= other.pi
            && other.big_pi <= self.big_pi
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bounds {
    Homogeneous(NodeBounds),
    /// Keyed by node label; every internal node must be present.
    PerNode(BTreeMap<String, NodeBounds>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialTreeSpec {
    pub periods: usize,
    pub grid: usize,
    pub bounds: Bounds,
}

impl BinomialTreeSpec {
    pub fn homogeneous(periods: usize, grid: usize, bounds: NodeBounds) -> Self {
        BinomialTreeSpec {
            periods,
            grid,
            bounds: Bounds::Homogeneous(bounds),
        }
    }

    fn bounds_at(&self, label: &str) -> Result<&NodeBounds> {
        match &self.bounds {
            Bounds::Homogeneous(b) => Ok(b),
            Bounds::PerNode(map) => map
                .get(label)
                .ok_or_else(|| Error::MissingNodeBounds(label.to_string())),
        }
    }
}

/// Discretized box at an internal node together with its children.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeKernel {
    pub bounds: NodeBounds,
    pub u_grid: Vec<Rational>,
    pub d_grid: Vec<Rational>,
    pub u_children: Vec<usize>,
    pub d_children: Vec<usize>,
}

impl NodeKernel {
    /// Up probabilities used by the recursion: the interval endpoints.
    pub fn p_endpoints(&self) -> Vec<Rational> {
        dedup(vec![self.bounds.pi.clone(), self.bounds.big_pi.clone()])
    }

    /// Up probabilities enumerated by the oracles.
    pub fn p_grid(&self, g: usize) -> Vec<Rational> {
        dedup(grid(&self.bounds.pi, &self.bounds.big_pi, g.max(2)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub label: String,
    pub time: usize,
    pub price: Rational,
    pub parent: Option<usize>,
    pub kernel: Option<NodeKernel>,
}

#[derive(Debug, Clone)]
pub struct BinomialTree {
    pub periods: usize,
    pub grid: usize,
    nodes: Vec<TreeNode>,
    leaves: Vec<usize>,
    by_label: HashMap<String, usize>,
    leaf_space: SpaceRef,
}

fn dedup(mut v: Vec<Rational>) -> Vec<Rational> {
    v.dedup();
    v
}

fn child_label(parent: &str, token: String) -> String {
    if parent == ROOT_LABEL {
        token
    } else {
        format!("{parent}.{token}")
    }
}

pub fn build_tree(spec: &BinomialTreeSpec) -> Result<BinomialTree> {
    build_tree_with_cap(spec, DEFAULT_LEAF_CAP)
}

pub fn build_tree_with_cap(spec: &BinomialTreeSpec, cap: u128) -> Result<BinomialTree> {
    if spec.periods == 0 || spec.grid == 0 {
        return Err(Error::Parse("periods and grid must be positive".into()));
    }
    if let Bounds::Homogeneous(b) = &spec.bounds {
        b.validate(ROOT_LABEL)?;
        let width =
            (grid(&b.u, &b.big_u, spec.grid).len() + grid(&b.d, &b.big_d, spec.grid).len()) as u128;
        let leaves = (0..spec.periods).fold(1u128, |acc, _| acc.saturating_mul(width));
        if leaves > cap {
            return Err(Error::SizeCapExceeded { leaves, cap });
        }
    }
    let mut nodes = vec![TreeNode {
        label: ROOT_LABEL.to_string(),
        time: 0,
        price: Rational::one(),
        parent: None,
        kernel: None,
    }];
    let mut level = vec![0usize];
    for t in 0..spec.periods {
        let mut next = Vec::new();
        for &v in &level {
            let label = nodes[v].label.clone();
            let bounds = spec.bounds_at(&label)?.clone();
            bounds.validate(&label)?;
            let u_grid = dedup(grid(&bounds.u, &bounds.big_u, spec.grid));
            let d_grid = dedup(grid(&bounds.d, &bounds.big_d, spec.grid));
            let mut kids =
                |grid: &[Rational], tag: char, nodes: &mut Vec<TreeNode>| -> Vec<usize> {
                    grid.iter()
                        .enumerate()
                        .map(|(k, m)| {
                            nodes.push(TreeNode {
                                label: child_label(&label, format!("{tag}{k}")),
                                time: t + 1,
                                price: &nodes[v].price * m,
                                parent: Some(v),
                                kernel: None,
                            });
                            next.push(nodes.len() - 1);
                            nodes.len() - 1
                        })
                        .collect()
                };
            let u_children = kids(&u_grid, 'u', &mut nodes);
            let d_children = kids(&d_grid, 'd', &mut nodes);
            nodes[v].kernel = Some(NodeKernel {
                bounds,
                u_grid,
                d_grid,
                u_children,
                d_children,
            });
            if next.len() as u128 > cap {
                return Err(Error::SizeCapExceeded {
                    leaves: next.len() as u128,
                    cap,
                });
            }
        }
        level = next;
    }
    let by_label = nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.label.clone(), i))
        .collect();
    let leaf_space = SampleSpace::new(level.iter().map(|&i| nodes[i].label.clone()))?;
    Ok(BinomialTree {
        periods: spec.periods,
        grid: spec.grid,
        nodes,
        leaves: level,
        by_label,
        leaf_space,
    })
}

impl BinomialTree {
    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &TreeNode {
        &self.nodes[i]
    }

    /// Node indices of the leaves, in canonical order.
    pub fn leaves(&self) -> &[usize] {
        &self.leaves
    }

    pub fn leaf_space(&self) -> &SpaceRef {
        &self.leaf_space
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.by_label.get(label).copied()
    }

    pub fn leaf_prices(&self) -> Vec<Rational> {
        self.leaves
            .iter()
            .map(|&i| self.nodes[i].price.clone())
            .collect()
    }

    fn internal(&self) -> impl Iterator<Item = (usize, &NodeKernel)> {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| n.kernel.as_ref().map(|k| (i, k)))
    }
}

/// One admissible binomial law at a node, given by its values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Selection {
    pub u: Rational,
    pub d: Rational,
    pub p: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KernelChoice {
    /// The same values at every node; they must be grid points everywhere.
    Homogeneous(Selection),
    /// Selections keyed by node label; every reachable node needs one.
    PerNode(BTreeMap<String, Selection>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Resolved {
    u_slot: usize,
    d_slot: usize,
    p: Rational,
}

fn resolve_at(tree: &BinomialTree, v: usize, sel: &Selection) -> Result<Resolved> {
    let node = &tree.nodes[v];
    let k = node.kernel.as_ref().expect("internal node");
    let bad = |reason: String| Error::InvalidChoice {
        node: node.label.clone(),
        reason,
    };
    let u_slot = k
        .u_grid
        .iter()
        .position(|x| *x == sel.u)
        .ok_or_else(|| bad(format!("u = {} is not a grid point", sel.u)))?;
    let d_slot = k
        .d_grid
        .iter()
        .position(|x| *x == sel.d)
        .ok_or_else(|| bad(format!("d = {} is not a grid point", sel.d)))?;
    if sel.p < k.bounds.pi || sel.p > k.bounds.big_pi {
        return Err(bad(format!("p = {} is outside [pi, Pi]", sel.p)));
    }
    Ok(Resolved {
        u_slot,
        d_slot,
        p: sel.p.clone(),
    })
}

/// Per-node resolution of a choice on the nodes it reaches.
fn resolve(tree: &BinomialTree, choice: &KernelChoice) -> Result<Vec<Option<Resolved>>> {
    let mut out = vec![None; tree.nodes.len()];
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        let Some(k) = &tree.nodes[v].kernel else {
            continue;
        };
        let sel = match choice {
            KernelChoice::Homogeneous(s) => s,
            KernelChoice::PerNode(map) => {
                map.get(&tree.nodes[v].label)
                    .ok_or_else(|| Error::InvalidChoice {
                        node: tree.nodes[v].label.clone(),
                        reason: "no selection for a reachable node".into(),
                    })?
            }
        };
        let r = resolve_at(tree, v, sel)?;
        stack.push(k.u_children[r.u_slot]);
        stack.push(k.d_children[r.d_slot]);
        out[v] = Some(r);
    }
    Ok(out)
}

/// Leaf weights of the product measure induced by a choice.
pub fn product_measure(tree: &BinomialTree, choice: &KernelChoice) -> Result<Measure> {
    let resolved = resolve(tree, choice)?;
    let mut mass = vec![Rational::zero(); tree.nodes.len()];
    mass[0] = Rational::one();
    for v in 0..tree.nodes.len() {
        if let (Some(k), Some(r)) = (&tree.nodes[v].kernel, &resolved[v]) {
            let m = mass[v].clone();
            mass[k.u_children[r.u_slot]] = &m * &r.p;
            mass[k.d_children[r.d_slot]] = &m * (Rational::one() - &r.p);
        }
    }
    let weights = tree.leaves.iter().map(|&i| mass[i].clone()).collect();
    Measure::new(tree.leaf_space.clone(), weights)
}

/// Leaves whose every step follows the chosen up or down branch.
pub fn support_of_product(tree: &BinomialTree, choice: &KernelChoice) -> Result<Event> {
    let resolved = resolve(tree, choice)?;
    let mut on = vec![false; tree.nodes.len()];
    on[0] = true;
    for v in 0..tree.nodes.len() {
        if let (true, Some(k), Some(r)) = (on[v], &tree.nodes[v].kernel, &resolved[v]) {
            on[k.u_children[r.u_slot]] = true;
            on[k.d_children[r.d_slot]] = true;
        }
    }
    Ok(Event::from_positions(
        tree.leaves
            .iter()
            .enumerate()
            .filter(|(_, &i)| on[i])
            .map(|(pos, _)| pos),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairWitness {
    pub first: usize,
    pub second: usize,
    /// A leaf in both supports.
    pub shared_leaf: String,
    /// A leaf in exactly one support.
    pub separating_leaf: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualOrDisjoint {
    pub holds: bool,
    pub pairs_checked: usize,
    pub witness: Option<PairWitness>,
}

/// Checks that any two supports coincide or do not meet.
pub fn supports_equal_or_disjoint(
    tree: &BinomialTree,
    choices: &[KernelChoice],
) -> Result<EqualOrDisjoint> {
    let supports = choices
        .iter()
        .map(|c| support_of_product(tree, c))
        .collect::<Result<Vec<_>>>()?;
    let mut pairs_checked = 0;
    for i in 0..supports.len() {
        for j in i + 1..supports.len() {
            pairs_checked += 1;
            let (a, b) = (&supports[i], &supports[j]);
            let common = a.intersection(b);
            let diff = a.symmetric_difference(b);
            let shared = common.iter().next();
            let separating = diff.iter().next();
            if let (Some(s), Some(t)) = (shared, separating) {
                return Ok(EqualOrDisjoint {
                    holds: false,
                    pairs_checked,
                    witness: Some(PairWitness {
                        first: i,
                        second: j,
                        shared_leaf: tree.leaf_space.label(s).to_string(),
                        separating_leaf: tree.leaf_space.label(t).to_string(),
                    }),
                });
            }
        }
    }
    Ok(EqualOrDisjoint {
        holds: true,
        pairs_checked,
        witness: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payoff {
    /// `max(S_T − K, 0)`.
    Call(Rational),
    /// `max(K − S_T, 0)`.
    Put(Rational),
    Identity,
    /// `1` when `S_T ≥ K`, else `0`.
    Digital(Rational),
    Explicit(BTreeMap<String, Rational>),
}

impl Payoff {
    fn at_price(&self, s: &Rational) -> Rational {
        let zero = Rational::zero();
        match self {
            Payoff::Call(k) => (s - k).max(zero),
            Payoff::Put(k) => (k - s).max(zero),
            Payoff::Identity => s.clone(),
            Payoff::Digital(k) => {
                if s >= k {
                    Rational::one()
                } else {
                    zero
                }
            }
            Payoff::Explicit(_) => unreachable!("explicit payoffs are keyed by leaf"),
        }
    }

    /// Payoff per leaf in canonical leaf order.
    pub fn leaf_values(&self, tree: &BinomialTree) -> Result<Vec<Rational>> {
        tree.leaves
            .iter()
            .map(|&i| {
                let node = &tree.nodes[i];
                match self {
                    Payoff::Explicit(map) => map
                        .get(&node.label)
                        .cloned()
                        .ok_or_else(|| Error::MissingLeafPayoff(node.label.clone())),
                    _ => Ok(self.at_price(&node.price)),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperhedgeResult {
    pub value: Rational,
    /// Value process per node index.
    pub node_values: Vec<Rational>,
    /// Maximizing selection per node index (`None` at leaves).
    pub argmax: Vec<Option<Selection>>,
}

/// Backward recursion over the tree. At each node the up and down branches
/// are maximized independently and the probability is taken at an
/// endpoint, since the one-step objective is affine in it.
pub fn superhedge_price(tree: &BinomialTree, payoff: &Payoff) -> Result<SuperhedgeResult> {
    superhedge_values(tree, payoff.leaf_values(tree)?)
}

pub fn superhedge_values(
    tree: &BinomialTree,
    leaf_values: Vec<Rational>,
) -> Result<SuperhedgeResult> {
    let n = tree.nodes.len();
    let mut values = vec![Rational::zero(); n];
    let mut argmax = vec![None; n];
    for (&i, v) in tree.leaves.iter().zip(leaf_values) {
        values[i] = v;
    }
    for v in (0..n).rev() {
        let Some(k) = &tree.nodes[v].kernel else {
            continue;
        };
        let best_of = |kids: &[usize]| {
            let mut best = 0;
            for (slot, &c) in kids.iter().enumerate() {
                if values[c] > values[kids[best]] {
                    best = slot;
                }
            }
            best
        };
        let (us, ds) = (best_of(&k.u_children), best_of(&k.d_children));
        let (a, b) = (&values[k.u_children[us]], &values[k.d_children[ds]]);
        let mut best: Option<(Rational, Rational)> = None;
        for p in k.p_endpoints() {
            let val = &p * a + (Rational::one() - &p) * b;
            if best.as_ref().map_or(true, |(bv, _)| val > *bv) {
                best = Some((val, p));
            }
        }
        let (val, p) = best.expect("at least one endpoint");
        values[v] = val;
        argmax[v] = Some(Selection {
            u: k.u_grid[us].clone(),
            d: k.d_grid[ds].clone(),
            p,
        });
    }
    Ok(SuperhedgeResult {
        value: values[0].clone(),
        node_values: values,
        argmax,
    })
}

/// Number of distinct product measures the enumeration oracle visits.
pub fn choice_count(tree: &BinomialTree) -> u128 {
    let mut count = vec![1u128; tree.nodes.len()];
    for v in (0..tree.nodes.len()).rev() {
        if let Some(k) = &tree.nodes[v].kernel {
            let up: u128 = k
                .u_children
                .iter()
                .map(|&c| count[c])
                .fold(0, u128::saturating_add);
            let down: u128 = k
                .d_children
                .iter()
                .map(|&c| count[c])
                .fold(0, u128::saturating_add);
            count[v] = (k.p_grid(tree.grid).len() as u128)
                .saturating_mul(up)
                .saturating_mul(down);
        }
    }
    count[0]
}

pub fn brute_force_price(tree: &BinomialTree, payoff: &Payoff) -> Result<Rational> {
    brute_force_price_with_cap(tree, payoff, DEFAULT_ORACLE_CAP)
}

/// Maximum of `E_Q[payoff]` over every product measure whose kernels are
/// grid points (with the full probability grid), choosing kernels only at
/// nodes the measure reaches. Each measure is materialized on the leaves.
pub fn brute_force_price_with_cap(
    tree: &BinomialTree,
    payoff: &Payoff,
    cap: u128,
) -> Result<Rational> {
    let count = choice_count(tree);
    if count > cap {
        return Err(Error::OracleCapExceeded { count, cap });
    }
    let values = payoff.leaf_values(tree)?;
    let options: Vec<Vec<(usize, usize, Rational)>> = tree
        .nodes
        .iter()
        .map(|n| match &n.kernel {
            None => Vec::new(),
            Some(k) => {
                let ps = k.p_grid(tree.grid);
                let mut opts = Vec::new();
                for us in 0..k.u_grid.len() {
                    for ds in 0..k.d_grid.len() {
                        for p in &ps {
                            opts.push((us, ds, p.clone()));
                        }
                    }
                }
                opts
            }
        })
        .collect();
    let leaf_pos: HashMap<usize, usize> = tree
        .leaves
        .iter()
        .enumerate()
        .map(|(p, &i)| (i, p))
        .collect();

    let mut chosen: Vec<Option<usize>> = vec![None; tree.nodes.len()];
    let mut best: Option<Rational> = None;
    let mut frontier = vec![0usize];
    let mut evaluate = |chosen: &[Option<usize>]| {
        let mut weights = vec![Rational::zero(); tree.leaves.len()];
        let mut stack = vec![(0usize, Rational::one())];
        while let Some((v, m)) = stack.pop() {
            match (&tree.nodes[v].kernel, chosen[v]) {
                (Some(k), Some(c)) => {
                    let (us, ds, p) = &options[v][c];
                    stack.push((k.u_children[*us], &m * p));
                    stack.push((k.d_children[*ds], &m * (Rational::one() - p)));
                }
                _ => weights[leaf_pos[&v]] = m,
            }
        }
        let e: Rational = weights.iter().zip(&values).map(|(w, x)| w * x).sum();
        if best.as_ref().map_or(true, |b| e > *b) {
            best = Some(e);
        }
    };
    enumerate(tree, &options, &mut frontier, &mut chosen, &mut evaluate);
    Ok(best.expect("at least one product measure"))
}

fn enumerate(
    tree: &BinomialTree,
    options: &[Vec<(usize, usize, Rational)>],
    frontier: &mut Vec<usize>,
    chosen: &mut Vec<Option<usize>>,
    emit: &mut dyn FnMut(&[Option<usize>]),
) {
    let Some(v) = frontier.pop() else {
        emit(chosen);
        return;
    };
    match &tree.nodes[v].kernel {
        None => enumerate(tree, options, frontier, chosen, emit),
        Some(k) => {
            for (c, (us, ds, _)) in options[v].iter().enumerate() {
                chosen[v] = Some(c);
                frontier.push(k.u_children[*us]);
                frontier.push(k.d_children[*ds]);
                enumerate(tree, options, frontier, chosen, emit);
                frontier.pop();
                frontier.pop();
            }
            chosen[v] = None;
        }
    }
    frontier.push(v);
}

/// Maximum of `E_P[payoff]` over mixtures of grid product measures,
/// written as a flow problem: `x[v][c]` is the probability of reaching
/// node `v` and using option `c` there.
pub fn flow_lp_price(tree: &BinomialTree, payoff: &Payoff) -> Result<Rational> {
    let values = payoff.leaf_values(tree)?;
    let leaf_value: HashMap<usize, &Rational> = tree.leaves.iter().copied().zip(&values).collect();
    let internal: Vec<(usize, &NodeKernel)> = tree.internal().collect();
    let row_of: HashMap<usize, usize> = internal
        .iter()
        .enumerate()
        .map(|(r, &(v, _))| (v, r))
        .collect();

    let mut columns: Vec<(usize, usize, usize, Rational)> = Vec::new();
    for &(v, k) in &internal {
        for us in 0..k.u_grid.len() {
            for ds in 0..k.d_grid.len() {
                for p in k.p_grid(tree.grid) {
                    columns.push((v, k.u_children[us], k.d_children[ds], p));
                }
            }
        }
    }
    let n = columns.len();
    let m = internal.len();
    let mut rows = vec![vec![Rational::zero(); n]; m];
    let mut objective = vec![Rational::zero(); n];
    for (j, (v, cu, cd, p)) in columns.iter().enumerate() {
        rows[row_of[v]][j] += Rational::one();
        let q = Rational::one() - p;
        for (child, w) in [(cu, p.clone()), (cd, q)] {
            match row_of.get(child) {
                Some(&r) => rows[r][j] -= w,
                None => objective[j] += w * leaf_value[child],
            }
        }
    }
    let mut lp = LinearProgram::maximize(objective);
    for (r, row) in rows.into_iter().enumerate() {
        let rhs = if internal[r].0 == 0 {
            Rational::one()
        } else {
            Rational::zero()
        };
        lp.push(Constraint::eq(row, rhs));
    }
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => Ok(value),
        _ => Err(Error::Infeasible),
    }
}

/// Enumeration when within the cap, otherwise the flow program.
pub fn oracle_price(tree: &BinomialTree, payoff: &Payoff) -> Result<Rational> {
    match brute_force_price(tree, payoff) {
        Err(Error::OracleCapExceeded { .. }) => flow_lp_price(tree, payoff),
        other => other,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupermartingaleCheck {
    pub holds: bool,
    /// Index of the offending choice and the node label.
    pub witness: Option<(usize, String)>,
    /// Nodes where the inequality is an equality, summed over choices.
    pub tight_nodes: usize,
}

/// `E_Q[V_{t+1} | node] ≤ V_t(node)` for each choice at each node it reaches.
pub fn verify_supermartingale(
    tree: &BinomialTree,
    result: &SuperhedgeResult,
    choices: &[KernelChoice],
) -> Result<SupermartingaleCheck> {
    let mut tight = 0;
    for (ci, choice) in choices.iter().enumerate() {
        let resolved = resolve(tree, choice)?;
        for (v, r) in resolved.iter().enumerate() {
            let (Some(r), Some(k)) = (r, &tree.nodes[v].kernel) else {
                continue;
            };
            let cond = &r.p * &result.node_values[k.u_children[r.u_slot]]
                + (Rational::one() - &r.p) * &result.node_values[k.d_children[r.d_slot]];
            if cond > result.node_values[v] {
                return Ok(SupermartingaleCheck {
                    holds: false,
                    witness: Some((ci, tree.nodes[v].label.clone())),
                    tight_nodes: tight,
                });
            }
            if cond == result.node_values[v] {
                tight += 1;
            }
        }
    }
    Ok(SupermartingaleCheck {
        holds: true,
        witness: None,
        tight_nodes: tight,
    })
}

/// Every homogeneous selection on the root grid with the oracle's
/// probability grid. Meaningful for homogeneous bounds.
pub fn homogeneous_choices(tree: &BinomialTree) -> Vec<KernelChoice> {
    let k = tree.nodes[0].kernel.as_ref().expect("root is internal");
    let mut out = Vec::new();
    for u in &k.u_grid {
        for d in &k.d_grid {
            for p in k.p_grid(tree.grid) {
                out.push(KernelChoice::Homogeneous(Selection {
                    u: u.clone(),
                    d: d.clone(),
                    p,
                }));
            }
        }
    }
    out
}

/// The argmax of a recursion result as a per-node choice.
pub fn argmax_choice(tree: &BinomialTree, result: &SuperhedgeResult) -> KernelChoice {
    KernelChoice::PerNode(
        result
            .argmax
            .iter()
            .enumerate()
            .filter_map(|(v, s)| s.clone().map(|s| (tree.nodes[v].label.clone(), s)))
            .collect(),
    )
}

pub(crate) fn is_degenerate(b: &NodeBounds) -> bool {
    b.u == b.big_u && b.d == b.big_d && b.pi == b.big_pi && !b.pi.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::MeasureFamily;
    use crate::rational::{int, rat};
    use crate::support::verify_support;

    fn bounds(
        u: Rational,
        uu: Rational,
        d: Rational,
        dd: Rational,
        pi: Rational,
        pp: Rational,
    ) -> NodeBounds {
        NodeBounds::new(u, uu, d, dd, pi, pp).unwrap()
    }

    fn classic() -> NodeBounds {
        NodeBounds::classical(int(2), rat(1, 2), rat(1, 3)).unwrap()
    }

    fn wide() -> NodeBounds {
        bounds(
            rat(3, 2),
            int(2),
            rat(1, 2),
            rat(3, 4),
            rat(1, 4),
            rat(3, 4),
        )
    }

    #[test]
    fn tree_shapes() {
        let t = build_tree(&BinomialTreeSpec::homogeneous(1, 1, classic())).unwrap();
        assert_eq!(t.leaf_prices(), vec![int(2), rat(1, 2)]);
        let t = build_tree(&BinomialTreeSpec::homogeneous(2, 1, classic())).unwrap();
        assert_eq!(t.leaf_prices(), vec![int(4), int(1), int(1), rat(1, 4)]);
        assert_eq!(
            t.leaf_space().atoms(),
            &["u0.u0", "u0.d0", "d0.u0", "d0.d0"]
        );
        let t = build_tree(&BinomialTreeSpec::homogeneous(1, 2, wide())).unwrap();
        assert_eq!(t.leaves().len(), 4);
    }

    #[test]
    fn invalid_bounds_named() {
        let err =
            NodeBounds::new(int(2), int(2), int(1), int(1), rat(1, 2), rat(1, 2)).unwrap_err();
        assert_eq!(
            err,
            Error::InvalidBounds {
                node: "root".into(),
                condition: "d < 1".into()
            }
        );
        let err =
            NodeBounds::new(int(2), int(2), rat(1, 2), rat(1, 2), rat(1, 2), int(1)).unwrap_err();
        assert!(matches!(err, Error::InvalidBounds { ref condition, .. } if condition == "Pi < 1"));
    }

    #[test]
    fn size_cap() {
        let err = build_tree(&BinomialTreeSpec::homogeneous(8, 3, wide())).unwrap_err();
        assert!(matches!(err, Error::SizeCapExceeded { leaves, .. } if leaves == 6u128.pow(8)));
    }

    #[test]
    fn supports_examples() {
        let t = build_tree(&BinomialTreeSpec::homogeneous(1, 2, wide())).unwrap();
        let c = KernelChoice::Homogeneous(Selection {
            u: int(2),
            d: rat(1, 2),
            p: rat(1, 3),
        });
        let s = support_of_product(&t, &c).unwrap();
        assert_eq!(t.leaf_space().labels_of(&s), vec!["u1", "d0"]);

        let t2 = build_tree(&BinomialTreeSpec::homogeneous(2, 2, wide())).unwrap();
        assert_eq!(support_of_product(&t2, &c).unwrap().len(), 4);
        assert_eq!(t2.leaves().len(), 16);

        let t1 = build_tree(&BinomialTreeSpec::homogeneous(2, 1, classic())).unwrap();
        let c1 = KernelChoice::Homogeneous(Selection {
            u: int(2),
            d: rat(1, 2),
            p: rat(1, 3),
        });
        assert_eq!(support_of_product(&t1, &c1).unwrap().len(), 4);

        let bad = KernelChoice::Homogeneous(Selection {
            u: int(3),
            d: rat(1, 2),
            p: rat(1, 3),
        });
        assert_eq!(
            support_of_product(&t, &bad).unwrap_err().name(),
            "InvalidChoice"
        );
    }

    #[test]
    fn support_carries_mass_and_is_supported() {
        let t = build_tree(&BinomialTreeSpec::homogeneous(2, 2, wide())).unwrap();
        let choices = homogeneous_choices(&t);
        let members: Vec<_> = choices
            .iter()
            .enumerate()
            .map(|(i, c)| (format!("q{i}"), product_measure(&t, c).unwrap()))
            .collect();
        let fam = MeasureFamily::new(t.leaf_space().clone(), members).unwrap();
        for (c, (_, q)) in choices.iter().zip(fam.members()) {
            let s = support_of_product(&t, c).unwrap();
            assert_eq!(q.mass(&s), int(1));
            assert!(verify_support(&fam, q, &s).unwrap().passed);
        }
    }

    #[test]
    fn equal_or_disjoint_cases() {
        let t = build_tree(&BinomialTreeSpec::homogeneous(1, 2, wide())).unwrap();
        let sel = |u: Rational, d: Rational, p: Rational| {
            KernelChoice::Homogeneous(Selection { u, d, p })
        };
        let same = [
            sel(int(2), rat(1, 2), rat(1, 4)),
            sel(int(2), rat(1, 2), rat(3, 4)),
        ];
        assert!(supports_equal_or_disjoint(&t, &same).unwrap().holds);
        assert!(supports_equal_or_disjoint(&t, &same[..1]).unwrap().holds);
        let partial = [
            sel(int(2), rat(1, 2), rat(1, 4)),
            sel(int(2), rat(3, 4), rat(1, 4)),
        ];
        let r = supports_equal_or_disjoint(&t, &partial).unwrap();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!(
            (w.shared_leaf.as_str(), w.separating_leaf.as_str()),
            ("u1", "d0")
        );
    }

    #[test]
    fn price_examples() {
        let b = bounds(int(2), int(2), rat(1, 2), rat(1, 2), rat(1, 4), rat(3, 4));
        let t = build_tree(&BinomialTreeSpec::homogeneous(1, 1, b)).unwrap();
        let r = superhedge_price(&t, &Payoff::Identity).unwrap();
        assert_eq!(r.value, rat(13, 8));
        assert_eq!(r.argmax[0].as_ref().unwrap().p, rat(3, 4));

        let t = build_tree(&BinomialTreeSpec::homogeneous(2, 2, wide())).unwrap();
        let one = Payoff::Explicit(
            t.leaf_space()
                .atoms()
                .iter()
                .map(|l| (l.clone(), int(1)))
                .collect(),
        );
        assert_eq!(superhedge_price(&t, &one).unwrap().value, int(1));

        let missing = Payoff::Explicit(BTreeMap::new());
        assert_eq!(
            superhedge_price(&t, &missing).unwrap_err().name(),
            "MissingLeafPayoff"
        );
    }

    #[test]
    fn degenerate_is_classical() {
        let t = build_tree(&BinomialTreeSpec::homogeneous(2, 1, classic())).unwrap();
        let call = Payoff::Call(int(1));
        // (1/3)^2 * 3 = 1/3
        assert_eq!(superhedge_price(&t, &call).unwrap().value, rat(1, 3));
        assert_eq!(brute_force_price(&t, &call).unwrap(), rat(1, 3));
    }

    #[test]
    fn oracles_agree_with_recursion() {
        for g in 1..=3 {
            for periods in 1..=2 {
                let t = build_tree(&BinomialTreeSpec::homogeneous(periods, g, wide())).unwrap();
                for payoff in [
                    Payoff::Call(int(1)),
                    Payoff::Put(int(1)),
                    Payoff::Digital(int(1)),
                ] {
                    let dp = superhedge_price(&t, &payoff).unwrap().value;
                    assert_eq!(
                        brute_force_price(&t, &payoff).unwrap(),
                        dp,
                        "T={periods} G={g}"
                    );
                    assert_eq!(flow_lp_price(&t, &payoff).unwrap(), dp, "T={periods} G={g}");
                }
            }
        }
    }

    #[test]
    fn oracle_cap() {
        let t = build_tree(&BinomialTreeSpec::homogeneous(3, 2, wide())).unwrap();
        assert_eq!(choice_count(&t), 2 * 1024 * 1024);
        assert!(matches!(
            brute_force_price(&t, &Payoff::Identity),
            Err(Error::OracleCapExceeded { .. })
        ));
    }

    #[test]
    fn supermartingale_property() {
        let t = build_tree(&BinomialTreeSpec::homogeneous(2, 2, wide())).unwrap();
        let r = superhedge_price(&t, &Payoff::Call(int(1))).unwrap();
        let mut choices = homogeneous_choices(&t);
        choices.push(argmax_choice(&t, &r));
        let check = verify_supermartingale(&t, &r, &choices).unwrap();
        assert!(check.holds);
        let only_opt = verify_supermartingale(&t, &r, &[argmax_choice(&t, &r)]).unwrap();
        assert_eq!(only_opt.tight_nodes, 1 + 2);

        let t1 = build_tree(&BinomialTreeSpec::homogeneous(1, 1, classic())).unwrap();
        let r1 = superhedge_price(&t1, &Payoff::Identity).unwrap();
        let c = KernelChoice::Homogeneous(Selection {
            u: int(2),
            d: rat(1, 2),
            p: rat(1, 3),
        });
        assert_eq!(
            verify_supermartingale(&t1, &r1, &[c]).unwrap().tight_nodes,
            1
        );
    }

    #[test]
    fn per_node_bounds() {
        let mut map = BTreeMap::new();
        map.insert("root".to_string(), classic());
        map.insert("u0".to_string(), wide());
        let spec = BinomialTreeSpec {
            periods: 2,
            grid: 2,
            bounds: Bounds::PerNode(map.clone()),
        };
        assert_eq!(
            build_tree(&spec).unwrap_err(),
            Error::MissingNodeBounds("d0".into())
        );
        map.insert("d0".to_string(), classic());
        let spec = BinomialTreeSpec {
            periods: 2,
            grid: 2,
            bounds: Bounds::PerNode(map),
        };
        let t = build_tree(&spec).unwrap();
        assert_eq!(t.leaves().len(), 4 + 2);
        let dp = superhedge_price(&t, &Payoff::Call(int(1))).unwrap().value;
        assert_eq!(brute_force_price(&t, &Payoff::Call(int(1))).unwrap(), dp);
        assert!(is_degenerate(&classic()));
    }
}
