use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Edge(String, String),
    Equal(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
    /// "the number of `var` satisfying the body is ≡ i (mod q)".
    ModQ {
        q: u32,
        i: u32,
        var: String,
        body: Box<Formula>,
    },
}

impl Formula {
    pub fn edge(x: &str, y: &str) -> Formula {
        Formula::Edge(x.into(), y.into())
    }

    pub fn equal(x: &str, y: &str) -> Formula {
        Formula::Equal(x.into(), y.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(x: &str, f: Formula) -> Formula {
        Formula::Exists(x.into(), Box::new(f))
    }

    pub fn forall(x: &str, f: Formula) -> Formula {
        Formula::Forall(x.into(), Box::new(f))
    }

    pub fn modq(q: u32, i: u32, x: &str, f: Formula) -> Formula {
        Formula::ModQ { q, i, var: x.into(), body: Box::new(f) }
    }

    pub fn parity(x: &str, f: Formula) -> Formula {
        Formula::modq(2, 1, x, f)
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        match self {
            Formula::Edge(x, y) | Formula::Equal(x, y) => [x.clone(), y.clone()].into_iter().collect(),
            Formula::Not(f) => f.free_variables(),
            Formula::And(a, b) | Formula::Or(a, b) => {
                let mut s = a.free_variables();
                s.extend(b.free_variables());
                s
            }
            Formula::Exists(x, f) | Formula::Forall(x, f) | Formula::ModQ { var: x, body: f, .. } => {
                let mut s = f.free_variables();
                s.remove(x);
                s
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Edge(..) | Formula::Equal(..) => 0,
            Formula::Not(f) => f.quantifier_depth(),
            Formula::And(a, b) | Formula::Or(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
            Formula::Exists(_, f) | Formula::Forall(_, f) | Formula::ModQ { body: f, .. } => 1 + f.quantifier_depth(),
        }
    }

    /// Every modulus used by a counting quantifier, in order of appearance.
    pub fn moduli(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_moduli(&mut out);
        out
    }

    fn collect_moduli(&self, out: &mut Vec<u32>) {
        match self {
            Formula::Edge(..) | Formula::Equal(..) => {}
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => f.collect_moduli(out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_moduli(out);
                b.collect_moduli(out);
            }
            Formula::ModQ { q, body, .. } => {
                out.push(*q);
                body.collect_moduli(out);
            }
        }
    }
}

pub fn quantifier_depth(phi: &Formula) -> usize {
    phi.quantifier_depth()
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Edge(x, y) => write!(f, "E({x},{y})"),
            Formula::Equal(x, y) => write!(f, "{x} = {y}"),
            Formula::Not(g) => write!(f, "!{g}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Exists(x, g) => write!(f, "exists {x}. {g}"),
            Formula::Forall(x, g) => write!(f, "forall {x}. {g}"),
            Formula::ModQ { q: 2, i: 1, var, body } => write!(f, "parity {var}. {body}"),
            Formula::ModQ { q, i, var, body } => write!(f, "mod[{q},{i}] {var}. {body}"),
        }
    }
}
