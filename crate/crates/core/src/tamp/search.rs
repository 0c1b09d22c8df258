//! Grounding and breadth-first skeleton enumeration.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::pddl::{GroundAtom, Literal, PddlDomain, PddlProblem, Term, Typed};

/// A grounded operator application, e.g. `pick(hook, table)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAction {
    pub operator: String,
    pub args: Vec<String>,
}

impl fmt::Display for GroundAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.operator, self.args.join(", "))
    }
}

#[derive(Debug, Clone)]
struct GroundOp {
    action: GroundAction,
    pre_pos: Vec<usize>,
    pre_neg: Vec<usize>,
    add: Vec<usize>,
    del: Vec<usize>,
}

type Bits = Vec<u64>;

fn has(bits: &Bits, i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

fn set(bits: &mut Bits, i: usize, v: bool) {
    if v {
        bits[i / 64] |= 1 << (i % 64);
    } else {
        bits[i / 64] &= !(1 << (i % 64));
    }
}

/// Domain and problem compiled to bitset STRIPS.
#[derive(Debug, Clone)]
pub struct GroundTask {
    atoms: Vec<GroundAtom>,
    ops: Vec<GroundOp>,
    init: Bits,
    goal_pos: Vec<usize>,
    goal_neg: Vec<usize>,
}

struct Interner {
    ids: BTreeMap<GroundAtom, usize>,
    atoms: Vec<GroundAtom>,
}

impl Interner {
    fn id(&mut self, a: GroundAtom) -> usize {
        if let Some(&i) = self.ids.get(&a) {
            return i;
        }
        let i = self.atoms.len();
        self.atoms.push(a.clone());
        self.ids.insert(a, i);
        i
    }
}

fn ground_lit(l: &Literal, params: &[Typed], binding: &[&str]) -> GroundAtom {
    let args = l
        .args
        .iter()
        .map(|t| match t {
            Term::Object(o) => o.clone(),
            Term::Var(v) => {
                let k = params.iter().position(|p| &p.name == v).expect("checked by the parser");
                binding[k].into()
            }
        })
        .collect();
    GroundAtom {
        predicate: l.predicate.clone(),
        args,
    }
}

impl GroundTask {
    pub fn new(domain: &PddlDomain, problem: &PddlProblem) -> Self {
        let objects = problem.all_objects(domain);
        let mut interner = Interner {
            ids: BTreeMap::new(),
            atoms: Vec::new(),
        };
        let init_ids: Vec<usize> = problem.init.iter().map(|a| interner.id(a.clone())).collect();
        let mut goal_pos = Vec::new();
        let mut goal_neg = Vec::new();
        for g in &problem.goal {
            let id = interner.id(g.atom.clone());
            if g.positive {
                goal_pos.push(id);
            } else {
                goal_neg.push(id);
            }
        }
        let mut operators: Vec<_> = domain.operators.iter().collect();
        operators.sort_by(|a, b| a.name.cmp(&b.name));
        let mut ops = Vec::new();
        for op in operators {
            let choices: Vec<Vec<&str>> = op
                .params
                .iter()
                .map(|p| {
                    objects
                        .iter()
                        .filter(|o| domain.is_subtype(&o.ty, &p.ty))
                        .map(|o| o.name.as_str())
                        .collect()
                })
                .collect();
            if choices.iter().any(Vec::is_empty) {
                continue;
            }
            // Odometer over argument tuples, last argument fastest.
            let mut idx = alloc::vec![0usize; choices.len()];
            'tuples: loop {
                let binding: Vec<&str> = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
                let mut g = GroundOp {
                    action: GroundAction {
                        operator: op.name.clone(),
                        args: binding.iter().map(|s| String::from(*s)).collect(),
                    },
                    pre_pos: Vec::new(),
                    pre_neg: Vec::new(),
                    add: Vec::new(),
                    del: Vec::new(),
                };
                for l in &op.precondition {
                    let id = interner.id(ground_lit(l, &op.params, &binding));
                    if l.positive { g.pre_pos.push(id) } else { g.pre_neg.push(id) }
                }
                for l in &op.effects {
                    let id = interner.id(ground_lit(l, &op.params, &binding));
                    if l.positive { g.add.push(id) } else { g.del.push(id) }
                }
                ops.push(g);
                let mut k = choices.len();
                loop {
                    if k == 0 {
                        break 'tuples;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < choices[k].len() {
                        break;
                    }
                    idx[k] = 0;
                }
            }
        }
        let words = interner.atoms.len().div_ceil(64).max(1);
        let mut init = alloc::vec![0u64; words];
        for i in init_ids {
            set(&mut init, i, true);
        }
        Self {
            atoms: interner.atoms,
            ops,
            init,
            goal_pos,
            goal_neg,
        }
    }

    fn is_goal(&self, s: &Bits) -> bool {
        self.goal_pos.iter().all(|&i| has(s, i)) && self.goal_neg.iter().all(|&i| !has(s, i))
    }

    fn apply(&self, op: &GroundOp, s: &Bits) -> Option<Bits> {
        if !op.pre_pos.iter().all(|&i| has(s, i)) || op.pre_neg.iter().any(|&i| has(s, i)) {
            return None;
        }
        let mut next = s.clone();
        for &i in &op.del {
            set(&mut next, i, false);
        }
        for &i in &op.add {
            set(&mut next, i, true);
        }
        Some(next)
    }

    pub fn actions(&self) -> impl Iterator<Item = &GroundAction> {
        self.ops.iter().map(|o| &o.action)
    }

    pub fn atoms(&self) -> &[GroundAtom] {
        &self.atoms
    }
}

/// Lazily yields goal-reaching skeletons in nondecreasing length. Within a
/// depth, order is lexicographic in (operator name, argument order) along the
/// sequence. Each depth keeps one representative path per symbolic state;
/// goal states are not expanded further.
pub struct SkeletonIter {
    task: GroundTask,
    max_len: usize,
    depth: usize,
    frontier: Vec<(Bits, Vec<usize>)>,
    next: Vec<(Bits, Vec<usize>)>,
    seen: BTreeSet<Bits>,
    node: usize,
    op: usize,
    started: bool,
}

impl SkeletonIter {
    fn path(&self, ops: &[usize]) -> Vec<GroundAction> {
        ops.iter().map(|&o| self.task.ops[o].action.clone()).collect()
    }
}

impl Iterator for SkeletonIter {
    type Item = Vec<GroundAction>;

    fn next(&mut self) -> Option<Self::Item> {
        if !self.started {
            self.started = true;
            if self.task.is_goal(&self.task.init) {
                self.frontier.clear();
                return Some(Vec::new());
            }
            if self.max_len == 0 {
                self.frontier.clear();
            }
        }
        loop {
            if self.node >= self.frontier.len() {
                // Depth finished: descend.
                if self.next.is_empty() || self.depth + 1 >= self.max_len {
                    self.frontier.clear();
                    self.next.clear();
                    return None;
                }
                self.frontier = core::mem::take(&mut self.next);
                self.seen.clear();
                self.depth += 1;
                self.node = 0;
                self.op = 0;
            }
            let (state, path) = &self.frontier[self.node];
            while self.op < self.task.ops.len() {
                let o = self.op;
                self.op += 1;
                let Some(succ) = self.task.apply(&self.task.ops[o], state) else { continue };
                let mut p = path.clone();
                p.push(o);
                if self.task.is_goal(&succ) {
                    return Some(self.path(&p));
                }
                if self.seen.insert(succ.clone()) {
                    self.next.push((succ, p));
                }
            }
            self.node += 1;
            self.op = 0;
        }
    }
}

/// All goal-reaching skeletons up to `max_len` steps, lazily.
pub fn plan_skeletons(domain: &PddlDomain, problem: &PddlProblem, max_len: usize) -> SkeletonIter {
    let task = GroundTask::new(domain, problem);
    let init = task.init.clone();
    SkeletonIter {
        task,
        max_len,
        depth: 0,
        frontier: alloc::vec![(init, Vec::new())],
        next: Vec::new(),
        seen: BTreeSet::new(),
        node: 0,
        op: 0,
        started: false,
    }
}
