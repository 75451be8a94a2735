//! Reduced ordered binary decision diagrams with weighted model counting.

use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub const FALSE: NodeId = NodeId(0);
    pub const TRUE: NodeId = NodeId(1);

    pub fn is_terminal(self) -> bool {
        self.0 < 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Op {
    And,
    Or,
}

#[derive(Debug, Clone, Copy)]
struct Node {
    var: u32,
    lo: NodeId,
    hi: NodeId,
}

const TERMINAL_VAR: u32 = u32::MAX;

/// A shared node store. Variables are ordered by index.
#[derive(Debug)]
pub struct Bdd {
    nodes: Vec<Node>,
    unique: HashMap<(u32, NodeId, NodeId), NodeId>,
    apply_cache: HashMap<(Op, NodeId, NodeId), NodeId>,
    not_cache: HashMap<NodeId, NodeId>,
}

impl Default for Bdd {
    fn default() -> Self {
        Self::new()
    }
}

impl Bdd {
    pub fn new() -> Self {
        let terminal = |id| Node {
            var: TERMINAL_VAR,
            lo: NodeId(id),
            hi: NodeId(id),
        };
        Bdd {
            nodes: vec![terminal(0), terminal(1)],
            unique: HashMap::new(),
            apply_cache: HashMap::new(),
            not_cache: HashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() == 2
    }

    fn mk(&mut self, var: u32, lo: NodeId, hi: NodeId) -> NodeId {
        if lo == hi {
            return lo;
        }
        if let Some(&id) = self.unique.get(&(var, lo, hi)) {
            return id;
        }
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(Node { var, lo, hi });
        self.unique.insert((var, lo, hi), id);
        id
    }

    pub fn var(&mut self, var: u32) -> NodeId {
        self.mk(var, NodeId::FALSE, NodeId::TRUE)
    }

    fn top_var(&self, id: NodeId) -> u32 {
        self.nodes[id.0 as usize].var
    }

    fn cofactors(&self, id: NodeId, var: u32) -> (NodeId, NodeId) {
        let node = self.nodes[id.0 as usize];
        if node.var == var {
            (node.lo, node.hi)
        } else {
            (id, id)
        }
    }

    fn apply(&mut self, op: Op, a: NodeId, b: NodeId) -> NodeId {
        let shortcut = match op {
            Op::And => match (a, b) {
                (NodeId::FALSE, _) | (_, NodeId::FALSE) => Some(NodeId::FALSE),
                (NodeId::TRUE, x) | (x, NodeId::TRUE) => Some(x),
                _ if a == b => Some(a),
                _ => None,
            },
            Op::Or => match (a, b) {
                (NodeId::TRUE, _) | (_, NodeId::TRUE) => Some(NodeId::TRUE),
                (NodeId::FALSE, x) | (x, NodeId::FALSE) => Some(x),
                _ if a == b => Some(a),
                _ => None,
            },
        };
        if let Some(id) = shortcut {
            return id;
        }
        let key = if a <= b { (op, a, b) } else { (op, b, a) };
        if let Some(&id) = self.apply_cache.get(&key) {
            return id;
        }
        let var = self.top_var(a).min(self.top_var(b));
        let (a_lo, a_hi) = self.cofactors(a, var);
        let (b_lo, b_hi) = self.cofactors(b, var);
        let lo = self.apply(op, a_lo, b_lo);
        let hi = self.apply(op, a_hi, b_hi);
        let id = self.mk(var, lo, hi);
        self.apply_cache.insert(key, id);
        id
    }

    pub fn and(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.apply(Op::And, a, b)
    }

    pub fn or(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.apply(Op::Or, a, b)
    }

    pub fn not(&mut self, a: NodeId) -> NodeId {
        match a {
            NodeId::FALSE => return NodeId::TRUE,
            NodeId::TRUE => return NodeId::FALSE,
            _ => {}
        }
        if let Some(&id) = self.not_cache.get(&a) {
            return id;
        }
        let node = self.nodes[a.0 as usize];
        let lo = self.not(node.lo);
        let hi = self.not(node.hi);
        let id = self.mk(node.var, lo, hi);
        self.not_cache.insert(a, id);
        id
    }

    /// Weighted model count, `weights[v]` being the probability that
    /// variable `v` is true.
    pub fn wmc(&self, root: NodeId, weights: &[f64]) -> f64 {
        fn go(bdd: &Bdd, id: NodeId, weights: &[f64], memo: &mut HashMap<NodeId, f64>) -> f64 {
            match id {
                NodeId::FALSE => return 0.0,
                NodeId::TRUE => return 1.0,
                _ => {}
            }
            if let Some(&w) = memo.get(&id) {
                return w;
            }
            let node = bdd.nodes[id.0 as usize];
            let p = weights[node.var as usize];
            let w = (1.0 - p) * go(bdd, node.lo, weights, memo) + p * go(bdd, node.hi, weights, memo);
            memo.insert(id, w);
            w
        }
        go(self, root, weights, &mut HashMap::new())
    }

    /// Evaluates the function under a total assignment.
    pub fn eval(&self, root: NodeId, assignment: &[bool]) -> bool {
        let mut id = root;
        while !id.is_terminal() {
            let node = self.nodes[id.0 as usize];
            id = if assignment[node.var as usize] { node.hi } else { node.lo };
        }
        id == NodeId::TRUE
    }
}
