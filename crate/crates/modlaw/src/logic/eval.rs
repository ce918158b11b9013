use std::collections::HashMap;

use super::ast::Formula;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// A formula with variables resolved to slots of a flat assignment array.
#[derive(Clone, Debug)]
pub struct CompiledFormula {
    root: Node,
    slots: usize,
    free: Vec<String>,
}

#[derive(Clone, Debug)]
enum Node {
    Edge(usize, usize),
    Equal(usize, usize),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
    Exists(usize, Box<Node>),
    Forall(usize, Box<Node>),
    Count { q: u32, i: u32, slot: usize, body: Box<Node> },
}

impl CompiledFormula {
    /// Free variables take slots `0..free.len()` in the given order.
    pub fn compile(phi: &Formula, free: &[String]) -> Result<CompiledFormula> {
        let mut scope: Vec<(String, usize)> = free.iter().cloned().zip(0..).collect();
        let mut slots = free.len();
        let root = compile(phi, &mut scope, &mut slots)?;
        Ok(CompiledFormula { root, slots, free: free.to_vec() })
    }

    pub fn free(&self) -> &[String] {
        &self.free
    }

    /// Truth value with the free variables bound to `roots`, in order.
    pub fn eval(&self, g: &Graph, roots: &[usize]) -> bool {
        assert_eq!(roots.len(), self.free.len(), "one root per free variable");
        let mut env = vec![0usize; self.slots];
        env[..roots.len()].copy_from_slice(roots);
        run(&self.root, g, &mut env)
    }
}

fn compile(phi: &Formula, scope: &mut Vec<(String, usize)>, slots: &mut usize) -> Result<Node> {
    let lookup = |scope: &[(String, usize)], v: &str| {
        scope.iter().rev().find(|(n, _)| n == v).map(|&(_, s)| s).ok_or_else(|| Error::UnboundVariable(v.into()))
    };
    let mut bind = |v: &str, body: &Formula, scope: &mut Vec<(String, usize)>| -> Result<(usize, Node)> {
        let slot = *slots;
        *slots += 1;
        scope.push((v.to_string(), slot));
        let node = compile(body, scope, slots);
        scope.pop();
        Ok((slot, node?))
    };
    Ok(match phi {
        Formula::Edge(x, y) => Node::Edge(lookup(scope, x)?, lookup(scope, y)?),
        Formula::Equal(x, y) => Node::Equal(lookup(scope, x)?, lookup(scope, y)?),
        Formula::Not(f) => Node::Not(Box::new(compile(f, scope, slots)?)),
        Formula::And(a, b) => Node::And(Box::new(compile(a, scope, slots)?), Box::new(compile(b, scope, slots)?)),
        Formula::Or(a, b) => Node::Or(Box::new(compile(a, scope, slots)?), Box::new(compile(b, scope, slots)?)),
        Formula::Exists(v, f) => {
            let (s, n) = bind(v, f, scope)?;
            Node::Exists(s, Box::new(n))
        }
        Formula::Forall(v, f) => {
            let (s, n) = bind(v, f, scope)?;
            Node::Forall(s, Box::new(n))
        }
        Formula::ModQ { q, i, var, body } => {
            let (slot, n) = bind(var, body, scope)?;
            Node::Count { q: *q, i: *i, slot, body: Box::new(n) }
        }
    })
}

fn run(node: &Node, g: &Graph, env: &mut [usize]) -> bool {
    match node {
        Node::Edge(x, y) => g.adj(env[*x], env[*y]),
        Node::Equal(x, y) => env[*x] == env[*y],
        Node::Not(f) => !run(f, g, env),
        Node::And(a, b) => run(a, g, env) && run(b, g, env),
        Node::Or(a, b) => run(a, g, env) || run(b, g, env),
        Node::Exists(s, f) => (0..g.n()).any(|v| {
            env[*s] = v;
            run(f, g, env)
        }),
        Node::Forall(s, f) => (0..g.n()).all(|v| {
            env[*s] = v;
            run(f, g, env)
        }),
        Node::Count { q, i, slot, body } => {
            let mut hits = 0u32;
            for v in 0..g.n() {
                env[*slot] = v;
                if run(body, g, env) {
                    hits = (hits + 1) % q;
                }
            }
            hits == *i
        }
    }
}

/// Direct evaluation; every quantifier ranges over all vertices, so the cost
/// is O(n^depth · |φ|).
pub fn evaluate(phi: &Formula, g: &Graph, env: &HashMap<String, usize>) -> Result<bool> {
    let free: Vec<String> = phi.free_variables().into_iter().collect();
    let mut roots = Vec::with_capacity(free.len());
    for v in &free {
        let &x = env.get(v).ok_or_else(|| Error::UnboundVariable(v.clone()))?;
        if x >= g.n() {
            return Err(Error::InvalidArgument(format!(
                "variable `{v}` is bound to {x}, graph has {} vertices",
                g.n()
            )));
        }
        roots.push(x);
    }
    Ok(CompiledFormula::compile(phi, &free)?.eval(g, &roots))
}
