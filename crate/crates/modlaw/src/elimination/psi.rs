use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;

use crate::algebra::{c_u, delta_polynomial, extension_sum, merged_coordinate, FreqPolynomial, Monomial};
use crate::canon::{canonical_form, CanonicalCode};
use crate::enumerate::{k1_code, Pattern};
use crate::error::{Error, Result};
use crate::freq::{classify, freq_on_codes, Coord, FreqVector};
use crate::graph::Graph;
use crate::logic::Formula;
use crate::modular::{digits, i64_mod, interpolate, require_prime};
use crate::types::{type_of, TypeTau};

/// Largest number of unlabelled vertices a ψ may read unless the caller
/// raises it.
pub const DEFAULT_C_CAP: usize = 7;

/// Largest table (q^classes) the Mod and ∃ cases will enumerate.
const TABLE_CAP: u128 = 1 << 20;

#[derive(Clone, Debug)]
enum Kind {
    Edge(usize, usize),
    Equal(usize, usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Exists(usize),
    Count { i: u32, body: usize },
}

#[derive(Clone, Debug)]
struct Node {
    kind: Kind,
    arity: usize,
    text: String,
}

/// The ∃-case bookkeeping for one singleton extension: the coordinates over
/// k+1 labels reached from the body's reads through the extension equations.
#[derive(Debug)]
struct Closure {
    tau_p: TypeTau,
    dependent: Vec<(CanonicalCode, Coord)>,
    /// Non-dependent F̃ with its base F over k labels and the δ_{F_u} terms.
    derived: Vec<(CanonicalCode, Coord, CanonicalCode, Vec<Arc<FreqPolynomial>>)>,
    free_dependent: Vec<usize>,
    class_count: usize,
}

type ValueKey = (usize, TypeTau, Vec<u32>);
type GammaKey = (usize, TypeTau, u32, u32);
type Reads = Arc<Vec<CanonicalCode>>;

#[derive(Debug, Default)]
struct Memo {
    reads: RwLock<HashMap<(usize, TypeTau), Reads>>,
    values: RwLock<HashMap<ValueKey, bool>>,
    gamma: RwLock<HashMap<GammaKey, Arc<FreqPolynomial>>>,
    closure: RwLock<HashMap<(usize, TypeTau, u32), Arc<Closure>>>,
}

/// ψ for a formula with free variables α₁…α_k: a function of (τ, f) with τ
/// a type over k labels and f a frequency vector over the codes that
/// [`PsiFunction::reads`] names for τ.
///
/// Atomic formulas read τ only. `Mod_q^i y. φ′` sums ψ′ over the merged
/// extensions, where f′ is forced by f, and over each singleton extension
/// through the polynomial Γ = Σ_v P(freq(w, v)), P the interpolation of ψ′
/// over its free coordinate classes; Γ is rewritten into k-level frequencies
/// by δ expansion, so the Mod case is exact on every graph. `∃y. φ′` accepts a
/// merged extension when ψ′ holds at the forced f′, and a singleton extension
/// when some f′ extending (τ, f) satisfies ψ′. That last branch is where ψ and
/// the formula may disagree on a particular finite graph.
#[derive(Debug)]
pub struct PsiFunction {
    q: u32,
    c_cap: usize,
    free: Vec<String>,
    nodes: Vec<Node>,
    root: usize,
    memo: Memo,
}

/// ψ for a sentence.
pub fn build_psi(phi: &Formula, q: u32, c_cap: Option<usize>) -> Result<PsiFunction> {
    if !phi.is_sentence() {
        let free: Vec<String> = phi.free_variables().into_iter().collect();
        return Err(Error::InvalidArgument(format!("expected a sentence, free variables: {}", free.join(", "))));
    }
    build_psi_open(phi, &[], q, c_cap)
}

/// ψ for a formula whose free variables are listed in `free`, in root order.
pub fn build_psi_open(phi: &Formula, free: &[String], q: u32, c_cap: Option<usize>) -> Result<PsiFunction> {
    require_prime(q)?;
    if let Some(&other) = phi.moduli().iter().find(|&&m| m != q) {
        return Err(Error::MixedModuli(q, other));
    }
    for v in phi.free_variables() {
        if !free.contains(&v) {
            return Err(Error::UnboundVariable(v));
        }
    }
    let mut psi = PsiFunction {
        q,
        c_cap: c_cap.unwrap_or(DEFAULT_C_CAP),
        free: free.to_vec(),
        nodes: Vec::new(),
        root: 0,
        memo: Memo::default(),
    };
    let mut ctx = free.to_vec();
    psi.root = psi.compile(phi, &mut ctx)?;
    Ok(psi)
}

impl PsiFunction {
    fn compile(&mut self, phi: &Formula, ctx: &mut Vec<String>) -> Result<usize> {
        let slot =
            |ctx: &[String], v: &str| ctx.iter().rposition(|n| n == v).ok_or_else(|| Error::UnboundVariable(v.into()));
        let kind = match phi {
            Formula::Edge(x, y) => Kind::Edge(slot(ctx, x)?, slot(ctx, y)?),
            Formula::Equal(x, y) => Kind::Equal(slot(ctx, x)?, slot(ctx, y)?),
            Formula::Not(f) => Kind::Not(self.compile(f, ctx)?),
            Formula::And(a, b) => Kind::And(self.compile(a, ctx)?, self.compile(b, ctx)?),
            Formula::Or(a, b) => Kind::Or(self.compile(a, ctx)?, self.compile(b, ctx)?),
            Formula::Exists(v, f) => {
                ctx.push(v.clone());
                let body = self.compile(f, ctx);
                ctx.pop();
                Kind::Exists(body?)
            }
            Formula::Forall(v, f) => {
                let rewritten = Formula::not(Formula::exists(v, Formula::not((**f).clone())));
                return self.compile(&rewritten, ctx);
            }
            Formula::ModQ { i, var, body, .. } => {
                ctx.push(var.clone());
                let body = self.compile(body, ctx);
                ctx.pop();
                Kind::Count { i: *i, body: body? }
            }
        };
        self.nodes.push(Node { kind, arity: ctx.len(), text: phi.to_string() });
        Ok(self.nodes.len() - 1)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn arity(&self) -> usize {
        self.free.len()
    }

    pub fn free_variables(&self) -> &[String] {
        &self.free
    }

    pub fn c_cap(&self) -> usize {
        self.c_cap
    }

    /// The coordinates ψ(τ, ·) depends on, sorted.
    pub fn reads(&self, tau: &TypeTau) -> Result<Arc<Vec<CanonicalCode>>> {
        self.check_tau(tau)?;
        self.node_reads(self.root, tau)
    }

    /// Largest unlabelled size among the coordinates read at τ.
    pub fn size_bound(&self, tau: &TypeTau) -> Result<usize> {
        Ok(self.reads(tau)?.iter().map(CanonicalCode::unlabelled_count).max().unwrap_or(0))
    }

    pub fn eval(&self, tau: &TypeTau, f: &FreqVector) -> Result<bool> {
        self.check_tau(tau)?;
        if f.q() != self.q {
            return Err(Error::InvalidArgument(format!("frequency vector is mod {}, ψ is mod {}", f.q(), self.q)));
        }
        self.node_eval(self.root, tau, f)
    }

    /// ψ(type_G(w), freq_G(w)), counting only the coordinates ψ reads.
    pub fn eval_graph(&self, g: &Graph, w: &[usize]) -> Result<bool> {
        if w.len() != self.arity() || w.iter().any(|&v| v >= g.n()) {
            return Err(Error::InvalidArgument(format!("need {} roots inside the graph", self.arity())));
        }
        let tau = type_of(g, w);
        let codes = self.reads(&tau)?;
        self.eval(&tau, &freq_on_codes(g, w, &codes, self.q))
    }

    fn check_tau(&self, tau: &TypeTau) -> Result<()> {
        if tau.arity() != self.arity() {
            return Err(Error::InvalidArgument(format!("type has arity {}, ψ has {}", tau.arity(), self.arity())));
        }
        Ok(())
    }

    fn node_reads(&self, id: usize, tau: &TypeTau) -> Result<Arc<Vec<CanonicalCode>>> {
        let key = (id, tau.clone());
        if let Some(hit) = self.memo.reads.read().expect("reads memo").get(&key) {
            return Ok(hit.clone());
        }
        let node = &self.nodes[id];
        let mut set = BTreeSet::new();
        match node.kind {
            Kind::Edge(..) | Kind::Equal(..) => {}
            Kind::Not(a) => set.extend(self.node_reads(a, tau)?.iter().cloned()),
            Kind::And(a, b) | Kind::Or(a, b) => {
                set.extend(self.node_reads(a, tau)?.iter().cloned());
                set.extend(self.node_reads(b, tau)?.iter().cloned());
            }
            Kind::Exists(body) | Kind::Count { body, .. } => {
                set.insert(k1_code(node.arity));
                for b in 0..tau.block_count() {
                    let rep = tau.partition().representative(b);
                    for h in self.node_reads(body, &tau.extend_merged(b))?.iter() {
                        set.insert(merged_coordinate(&h.decode(), rep)?);
                    }
                }
                for s in 0..1u32 << tau.block_count() {
                    if let Kind::Exists(_) = node.kind {
                        for (_, _, base, _) in &self.closure(id, tau, s)?.derived {
                            set.insert(base.clone());
                        }
                    } else {
                        for r in 0..self.q {
                            set.extend(self.gamma(id, tau, s, r)?.variables());
                        }
                    }
                }
            }
        }
        if let Some(big) = set.iter().find(|c| c.unlabelled_count() > self.c_cap) {
            return Err(Error::ScaleExceeded(format!(
                "`{}` needs frequencies of patterns with {} unlabelled vertices, above the cap c = {}",
                node.text,
                big.unlabelled_count(),
                self.c_cap
            )));
        }
        let out = Arc::new(set.into_iter().collect::<Vec<_>>());
        self.memo.reads.write().expect("reads memo").insert(key, out.clone());
        Ok(out)
    }

    fn node_eval(&self, id: usize, tau: &TypeTau, f: &FreqVector) -> Result<bool> {
        let node = &self.nodes[id];
        let pi = tau.partition();
        match node.kind {
            Kind::Edge(x, y) => {
                let (bx, by) = (pi.block(x), pi.block(y));
                Ok(bx != by && tau.blocks_adjacent(bx, by))
            }
            Kind::Equal(x, y) => Ok(pi.block(x) == pi.block(y)),
            Kind::Not(a) => Ok(!self.node_eval(a, tau, f)?),
            Kind::And(a, b) => Ok(self.node_eval(a, tau, f)? && self.node_eval(b, tau, f)?),
            Kind::Or(a, b) => Ok(self.node_eval(a, tau, f)? || self.node_eval(b, tau, f)?),
            Kind::Exists(body) | Kind::Count { body, .. } => {
                let reads = self.node_reads(id, tau)?;
                let values = reads.iter().map(|c| f.require(c)).collect::<Result<Vec<_>>>()?;
                let key = (id, tau.clone(), values);
                if let Some(&hit) = self.memo.values.read().expect("value memo").get(&key) {
                    return Ok(hit);
                }
                let out = match node.kind {
                    Kind::Count { i, .. } => self.count(id, body, tau, f)? == i,
                    _ => self.exists(id, body, tau, f)?,
                };
                self.memo.values.write().expect("value memo").insert(key, out);
                Ok(out)
            }
        }
    }

    /// f′ at a merged extension: f′_H = f at H with the new label folded
    /// into the block representative.
    fn merged_vector(&self, body: usize, tau: &TypeTau, b: usize, f: &FreqVector) -> Result<(TypeTau, FreqVector)> {
        let tau_p = tau.extend_merged(b);
        let rep = tau.partition().representative(b);
        let reads = self.node_reads(body, &tau_p)?;
        let bound = reads.iter().map(CanonicalCode::unlabelled_count).max().unwrap_or(0);
        let mut out = FreqVector::new(self.q, tau.arity() + 1, bound);
        for h in reads.iter() {
            out.set(h.clone(), f.require(&merged_coordinate(&h.decode(), rep)?)?);
        }
        Ok((tau_p, out))
    }

    fn count(&self, id: usize, body: usize, tau: &TypeTau, f: &FreqVector) -> Result<u32> {
        let q = self.q;
        let mut total = 0u32;
        for b in 0..tau.block_count() {
            let (tau_p, fp) = self.merged_vector(body, tau, b, f)?;
            total += u32::from(self.node_eval(body, &tau_p, &fp)?);
        }
        let r = f.require(&k1_code(tau.arity()))?;
        for s in 0..1u32 << tau.block_count() {
            total += self.gamma(id, tau, s, r)?.eval_mod(q, |c| f.require(c))?;
        }
        Ok(total % q)
    }

    /// Γ: Σ over vertices v outside w whose type extends τ by a new block
    /// adjacent to `s` of ψ′(freq(w, v)), as a polynomial in k-level
    /// frequencies, given f_{K₁(k)} = r.
    fn gamma(&self, id: usize, tau: &TypeTau, s: u32, r: u32) -> Result<Arc<FreqPolynomial>> {
        let key = (id, tau.clone(), s, r);
        if let Some(hit) = self.memo.gamma.read().expect("gamma memo").get(&key) {
            return Ok(hit.clone());
        }
        let Kind::Count { body, .. } = self.nodes[id].kind else { unreachable!("Γ is built for Mod nodes") };
        let q = self.q;
        let tau_p = tau.extend_singleton(s);
        let reads = self.node_reads(body, &tau_p)?;
        let patterns: Vec<Pattern> = reads.iter().cloned().map(Pattern::from_code).collect();
        let n_residue = (r + tau.block_count() as u32) % q;
        let (rules, classes) = classify(&patterns, &tau_p, q, n_residue)?;
        let size = self.table_size(classes, id)?;
        let bound = reads.iter().map(CanonicalCode::unlabelled_count).max().unwrap_or(0);
        let mut table = vec![0u32; size];
        for (idx, slot) in table.iter_mut().enumerate() {
            let vals = digits(idx, q, classes);
            let mut fp = FreqVector::new(q, tau_p.arity(), bound);
            for (p, rule) in patterns.iter().zip(&rules) {
                fp.set(p.code.clone(), resolve(*rule, &vals));
            }
            *slot = u32::from(self.node_eval(body, &tau_p, &fp)?);
        }
        let mut reps: Vec<Option<CanonicalCode>> = vec![None; classes];
        for (p, rule) in patterns.iter().zip(&rules) {
            if let Coord::Free(c) = *rule {
                reps[c].get_or_insert_with(|| p.code.clone());
            }
        }
        let mut poly = FreqPolynomial::zero();
        for (idx, &c) in interpolate(q, classes, &table).iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut m = Monomial::one();
            for (class, e) in digits(idx, q, classes).into_iter().enumerate() {
                if e > 0 {
                    let code = reps[class].clone().expect("every class has a member");
                    m = m.mul(&Monomial(vec![(code, e)]));
                }
            }
            poly.add_term(m, BigInt::from(c));
        }
        let out = Arc::new(extension_sum(tau, s, &poly, q)?);
        self.memo.gamma.write().expect("gamma memo").insert(key, out.clone());
        Ok(out)
    }

    fn table_size(&self, classes: usize, id: usize) -> Result<usize> {
        let size = (self.q as u128).checked_pow(classes as u32).unwrap_or(u128::MAX);
        if size > TABLE_CAP {
            return Err(Error::ScaleExceeded(format!(
                "`{}` would enumerate {} free frequency classes mod {}",
                self.nodes[id].text, classes, self.q
            )));
        }
        Ok(size as usize)
    }

    fn closure(&self, id: usize, tau: &TypeTau, s: u32) -> Result<Arc<Closure>> {
        let key = (id, tau.clone(), s);
        if let Some(hit) = self.memo.closure.read().expect("closure memo").get(&key) {
            return Ok(hit.clone());
        }
        let Kind::Exists(body) = self.nodes[id].kind else { unreachable!("closures are built for ∃ nodes") };
        let k = tau.arity();
        let tau_p = tau.extend_singleton(s);
        let mut seen: BTreeSet<CanonicalCode> = self.node_reads(body, &tau_p)?.iter().cloned().collect();
        let mut work: Vec<CanonicalCode> = seen.iter().cloned().collect();
        let mut terms: HashMap<CanonicalCode, (CanonicalCode, Vec<Arc<FreqPolynomial>>)> = HashMap::new();
        while let Some(code) = work.pop() {
            let g = code.decode();
            if g.depends_on(k) {
                continue;
            }
            let base = g.drop_isolated_last_label();
            let mut deltas = Vec::new();
            for u in base.labels()..base.n() {
                if c_u(&tau_p, &base, u) {
                    let fu = base.attach_label(u);
                    let d = delta_polynomial(&fu, fu.unlabelled_count())?;
                    for v in d.variables() {
                        if seen.insert(v.clone()) {
                            work.push(v);
                        }
                    }
                    deltas.push(d);
                }
            }
            terms.insert(code, (canonical_form(&base)?, deltas));
        }
        let mut ordered: Vec<CanonicalCode> = seen.into_iter().collect();
        ordered.sort_by_key(|c| (c.unlabelled_count(), c.clone()));
        let patterns: Vec<Pattern> = ordered.iter().cloned().map(Pattern::from_code).collect();
        // the K₁ pin is reproduced by its own equation, so any residue works here
        let (rules, class_count) = classify(&patterns, &tau_p, self.q, 0)?;
        let mut dependent = Vec::new();
        let mut derived = Vec::new();
        let mut free_dependent = BTreeSet::new();
        for (code, rule) in ordered.into_iter().zip(rules) {
            match terms.remove(&code) {
                Some((base, deltas)) => derived.push((code, rule, base, deltas)),
                None => {
                    if let Coord::Free(c) = rule {
                        free_dependent.insert(c);
                    }
                    dependent.push((code, rule));
                }
            }
        }
        let out = Arc::new(Closure {
            tau_p,
            dependent,
            derived,
            free_dependent: free_dependent.into_iter().collect(),
            class_count,
        });
        self.memo.closure.write().expect("closure memo").insert(key, out.clone());
        Ok(out)
    }

    fn exists(&self, id: usize, body: usize, tau: &TypeTau, f: &FreqVector) -> Result<bool> {
        for b in 0..tau.block_count() {
            let (tau_p, fp) = self.merged_vector(body, tau, b, f)?;
            if self.node_eval(body, &tau_p, &fp)? {
                return Ok(true);
            }
        }
        let q = self.q;
        let k1 = k1_code(tau.arity() + 1);
        for s in 0..1u32 << tau.block_count() {
            let cl = self.closure(id, tau, s)?;
            let size = self.table_size(cl.free_dependent.len(), id)?;
            let bound = cl.derived.iter().map(|d| &d.0).chain(cl.dependent.iter().map(|d| &d.0));
            let bound = bound.map(CanonicalCode::unlabelled_count).max().unwrap_or(0);
            'assign: for idx in 0..size {
                let mut class_val: Vec<Option<u32>> = vec![None; cl.class_count];
                for (c, v) in cl.free_dependent.iter().zip(digits(idx, q, cl.free_dependent.len())) {
                    class_val[*c] = Some(v);
                }
                let mut fp = FreqVector::new(q, tau.arity() + 1, bound);
                for (code, rule) in &cl.dependent {
                    let v = match *rule {
                        Coord::Fixed(x) => x,
                        Coord::Free(c) => class_val[c].expect("assigned"),
                    };
                    fp.set(code.clone(), v);
                }
                for (code, rule, base, deltas) in &cl.derived {
                    let mut v = f.require(base)? as i64;
                    for d in deltas {
                        v -= d.eval_mod(q, |c| fp.require(c))? as i64;
                    }
                    let v = i64_mod(v, q);
                    if code != &k1 {
                        match *rule {
                            Coord::Fixed(x) if x != v => continue 'assign,
                            Coord::Free(c) => match class_val[c] {
                                Some(x) if x != v => continue 'assign,
                                _ => class_val[c] = Some(v),
                            },
                            _ => {}
                        }
                    }
                    fp.set(code.clone(), v);
                }
                if self.node_eval(body, &cl.tau_p, &fp)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }
}

fn resolve(rule: Coord, vals: &[u32]) -> u32 {
    match rule {
        Coord::Fixed(x) => x,
        Coord::Free(c) => vals[c],
    }
}
