//! Hash-consed formula graphs used by the table evaluator.

use std::collections::{BTreeSet, HashMap};

use crate::logic::{Formula, Frequency, Letter};

pub(crate) type NodeId = usize;

/// Evaluation primitives. `True` and letter sets stay primitive so that
/// large alphabets do not blow up the graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    True,
    Atom(Letter),
    Letters(BTreeSet<Letter>),
    Not(NodeId),
    And(NodeId, NodeId),
    Next(NodeId),
    FreqUntil(Frequency, NodeId, NodeId),
}

/// Nodes in insertion order; children always precede parents.
#[derive(Debug, Clone, Default)]
pub(crate) struct Dag {
    nodes: Vec<Node>,
    index: HashMap<Node, NodeId>,
}

impl Dag {
    pub(crate) fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    fn intern(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }

    /// Adds `phi` (and its subformulas) to the graph.
    pub(crate) fn lower(&mut self, phi: &Formula) -> NodeId {
        lower_with(phi, &mut |n| Some(self.intern(n))).expect("interning never fails")
    }

    /// Finds the node for `phi` without extending the graph.
    pub(crate) fn find(&self, phi: &Formula) -> Option<NodeId> {
        lower_with(phi, &mut |n| self.index.get(&n).copied())
    }

    /// Rebuilds a formula for a node; `True` and letter sets come back as sugar.
    pub(crate) fn formula(&self, id: NodeId) -> Formula {
        match &self.nodes[id] {
            Node::True => Formula::True,
            Node::Atom(a) => Formula::Atom(a.clone()),
            Node::Letters(set) => Formula::LetterSet(set.clone()),
            Node::Not(f) => Formula::not(self.formula(*f)),
            Node::And(l, r) => Formula::and(self.formula(*l), self.formula(*r)),
            Node::Next(f) => Formula::next(self.formula(*f)),
            Node::FreqUntil(q, l, r) => Formula::freq_until(*q, self.formula(*l), self.formula(*r)),
        }
    }
}

fn lower_with<F>(phi: &Formula, intern: &mut F) -> Option<NodeId>
where
    F: FnMut(Node) -> Option<NodeId>,
{
    use Formula as S;
    let node = match phi {
        S::True => Node::True,
        S::False => {
            let t = intern(Node::True)?;
            Node::Not(t)
        }
        S::Atom(a) => Node::Atom(a.clone()),
        S::LetterSet(set) => Node::Letters(set.clone()),
        S::Next(f) => Node::Next(lower_with(f, intern)?),
        S::Not(f) => Node::Not(lower_with(f, intern)?),
        S::And(l, r) => Node::And(lower_with(l, intern)?, lower_with(r, intern)?),
        S::FreqUntil(q, l, r) => {
            Node::FreqUntil(*q, lower_with(l, intern)?, lower_with(r, intern)?)
        }
        S::ClassicUntil(l, r) => Node::FreqUntil(
            Frequency::one(),
            lower_with(l, intern)?,
            lower_with(r, intern)?,
        ),
        S::Or(l, r) => {
            let l = lower_with(l, intern)?;
            let r = lower_with(r, intern)?;
            let nl = intern(Node::Not(l))?;
            let nr = intern(Node::Not(r))?;
            let both = intern(Node::And(nl, nr))?;
            Node::Not(both)
        }
        S::Implies(l, r) => {
            let lhs = lower_with(l, intern)?;
            let r = lower_with(r, intern)?;
            let nr = intern(Node::Not(r))?;
            let both = intern(Node::And(lhs, nr))?;
            Node::Not(both)
        }
        S::Eventually(f) => {
            let t = intern(Node::True)?;
            Node::FreqUntil(Frequency::one(), t, lower_with(f, intern)?)
        }
        S::Always(f) => {
            let t = intern(Node::True)?;
            let f = lower_with(f, intern)?;
            let nf = intern(Node::Not(f))?;
            let ev = intern(Node::FreqUntil(Frequency::one(), t, nf))?;
            Node::Not(ev)
        }
    };
    intern(node)
}
