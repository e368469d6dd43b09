use std::collections::HashMap;

use crate::logic::LtlFormula;

pub(crate) type NodeId = usize;

/// Negation normal form over hash-consed subformulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Nnf {
    True,
    False,
    Lit(usize, bool),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Next(NodeId),
    Until(NodeId, NodeId),
    Release(NodeId, NodeId),
}

#[derive(Debug, Default)]
pub(crate) struct Arena {
    pub nodes: Vec<Nnf>,
    index: HashMap<Nnf, NodeId>,
    pub vars: Vec<String>,
    var_index: HashMap<String, usize>,
}

impl Arena {
    pub fn intern(&mut self, node: Nnf) -> NodeId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(node);
        self.index.insert(node, id);
        id
    }

    fn var(&mut self, name: &str) -> usize {
        if let Some(&v) = self.var_index.get(name) {
            return v;
        }
        let v = self.vars.len();
        self.vars.push(name.to_string());
        self.var_index.insert(name.to_string(), v);
        v
    }

    /// Interns `f` (or `¬f` when `positive` is false) in negation normal form.
    pub fn build(&mut self, f: &LtlFormula, positive: bool) -> NodeId {
        use LtlFormula as L;
        let node = match (f, positive) {
            (L::True, true) | (L::False, false) => Nnf::True,
            (L::True, false) | (L::False, true) => Nnf::False,
            (L::Atom(name), pol) => Nnf::Lit(self.var(name), pol),
            (L::Not(a), pol) => return self.build(a, !pol),
            (L::And(a, b), true) | (L::Or(a, b), false) => {
                Nnf::And(self.build(a, positive), self.build(b, positive))
            }
            (L::Or(a, b), true) | (L::And(a, b), false) => {
                Nnf::Or(self.build(a, positive), self.build(b, positive))
            }
            (L::Implies(a, b), true) => Nnf::Or(self.build(a, false), self.build(b, true)),
            (L::Implies(a, b), false) => Nnf::And(self.build(a, true), self.build(b, false)),
            (L::Iff(a, b), pol) => {
                let (pa, na) = (self.build(a, true), self.build(a, false));
                let (pb, nb) = (self.build(b, true), self.build(b, false));
                let (x, y) = if pol {
                    (self.intern(Nnf::And(pa, pb)), self.intern(Nnf::And(na, nb)))
                } else {
                    (self.intern(Nnf::And(pa, nb)), self.intern(Nnf::And(na, pb)))
                };
                Nnf::Or(x, y)
            }
            (L::Next(a), pol) => Nnf::Next(self.build(a, pol)),
            (L::Until(a, b), true) => Nnf::Until(self.build(a, true), self.build(b, true)),
            (L::Until(a, b), false) => Nnf::Release(self.build(a, false), self.build(b, false)),
            (L::Eventually(a), true) => {
                let t = self.intern(Nnf::True);
                Nnf::Until(t, self.build(a, true))
            }
            (L::Eventually(a), false) => {
                let ff = self.intern(Nnf::False);
                Nnf::Release(ff, self.build(a, false))
            }
            (L::Globally(a), true) => {
                let ff = self.intern(Nnf::False);
                Nnf::Release(ff, self.build(a, true))
            }
            (L::Globally(a), false) => {
                let t = self.intern(Nnf::True);
                Nnf::Until(t, self.build(a, false))
            }
        };
        self.intern(node)
    }

    /// Id of the complementary literal, interning it if needed.
    pub fn complement(&mut self, id: NodeId) -> Option<NodeId> {
        match self.nodes[id] {
            Nnf::Lit(v, b) => Some(self.intern(Nnf::Lit(v, !b))),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_ltl;

    #[test]
    fn negated_globally_becomes_until() {
        let mut arena = Arena::default();
        let id = arena.build(&parse_ltl("G a").unwrap(), false);
        match arena.nodes[id] {
            Nnf::Until(t, l) => {
                assert_eq!(arena.nodes[t], Nnf::True);
                assert_eq!(arena.nodes[l], Nnf::Lit(0, false));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sharing() {
        let mut arena = Arena::default();
        let a = arena.build(&parse_ltl("X a && X a").unwrap(), true);
        match arena.nodes[a] {
            Nnf::And(x, y) => assert_eq!(x, y),
            other => panic!("unexpected {other:?}"),
        }
    }
}
