use crate::canon::{canonical_form, CanonicalCode};
use crate::enumerate::{enumerate_label_connected, k1_code};
use crate::error::{Error, Result};
use crate::freq::{enumerate_feasible, FreqVector};
use crate::modular::i64_mod;
use crate::pattern::{full_mask, iter_mask, LabelledGraph};
use crate::types::TypeTau;

use super::delta::delta_polynomial;

/// Code of H (over `k+1` labels) with its last label identified with label `j`.
pub fn merged_coordinate(h: &LabelledGraph, j: usize) -> Result<CanonicalCode> {
    canonical_form(&h.merge_last_label_into(j))
}

/// c_u: every label adjacent to `u` lies in a block adjacent to the new
/// label's block.
pub(crate) fn c_u(tau_p: &TypeTau, f: &LabelledGraph, u: usize) -> bool {
    let k = f.labels();
    let pi = tau_p.partition();
    let new_block = pi.block(k);
    iter_mask(f.mask(u) & full_mask(k)).all(|i| tau_p.blocks_adjacent(pi.block(i), new_block))
}

/// Right-hand side of the singleton-case equation for F:
/// `f′_{F̃} + Σ_u c_u δ_{F_u}(f′)` mod q.
pub(crate) fn singleton_rhs(
    tau_p: &TypeTau,
    f: &LabelledGraph,
    q: u32,
    lookup: &mut dyn FnMut(&CanonicalCode) -> Result<u32>,
) -> Result<u32> {
    let mut total = lookup(&canonical_form(&f.with_isolated_label())?)? as u64;
    for u in f.labels()..f.n() {
        if c_u(tau_p, f, u) {
            let fu = f.attach_label(u);
            let d = delta_polynomial(&fu, fu.unlabelled_count())?;
            total += d.eval_mod(q, &mut *lookup)? as u64;
        }
    }
    Ok((total % q as u64) as u32)
}

fn n_residue(tau: &TypeTau, f: &FreqVector) -> Result<u32> {
    let k1 = f.require(&k1_code(tau.arity()))?;
    Ok(i64_mod(k1 as i64 + tau.block_count() as i64, f.q()))
}

/// Whether (τ′, f′) extends (τ, f): τ′ extends τ, f′ is feasible for τ′, and
/// every pattern of Conn_k^b satisfies its equation.
pub fn extends(tau_p: &TypeTau, f_p: &FreqVector, tau: &TypeTau, f: &FreqVector) -> Result<bool> {
    if !tau_p.extends(tau) {
        return Ok(false);
    }
    let q = f.q();
    let k = tau.arity();
    let b = f_p.size_bound();
    if f.size_bound() < b {
        return Err(Error::InvalidArgument(format!("size bound {} of f is below {b}", f.size_bound())));
    }
    let fs = enumerate_feasible(tau_p, k + 1, b, q, n_residue(tau, f)?)?;
    if !fs.contains(f_p) {
        return Ok(false);
    }
    let merged = tau_p.last_label_merged_into().is_some();
    for p in enumerate_label_connected(k, b)?.iter() {
        let want = f.require(&p.code)?;
        let got = if merged {
            f_p.require(&canonical_form(&p.graph.with_isolated_label())?)?
        } else {
            singleton_rhs(tau_p, &p.graph, q, &mut |c| f_p.require(c))?
        };
        if want != got {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The unique f′ over Conn_{k+1}^b extending (τ, f) with the given
/// coordinates dependent on the new label. In the merged case the dependent
/// coordinates are forced and any supplied ones must agree.
pub fn complete_extension(
    tau_p: &TypeTau,
    tau: &TypeTau,
    f: &FreqVector,
    dependent: &FreqVector,
    b: usize,
) -> Result<FreqVector> {
    if !tau_p.extends(tau) {
        return Err(Error::InvalidArgument("τ′ does not extend τ".into()));
    }
    let q = f.q();
    let k = tau.arity();
    let patterns = enumerate_label_connected(k + 1, b)?;
    let mut out = FreqVector::new(q, k + 1, b);
    if let Some(block) = tau_p.last_label_merged_into() {
        let j = tau_p.partition().representative(block);
        for p in patterns.iter() {
            let v = f.require(&merged_coordinate(&p.graph, j)?)?;
            if let Some(given) = dependent.get(&p.code) {
                if given != v {
                    return Err(Error::Inconsistent(format!(
                        "coordinate {} is forced to {v} but {given} was supplied",
                        p.code
                    )));
                }
            }
            out.set(p.code.clone(), v);
        }
    } else {
        for p in patterns.iter().filter(|p| p.graph.depends_on(k)) {
            let v = dependent
                .get(&p.code)
                .ok_or_else(|| Error::MissingCoordinate(format!("dependent coordinate {} not supplied", p.code)))?;
            out.set(p.code.clone(), v);
        }
        // patterns arrive ordered by unlabelled count, so every δ_{F_u} reads
        // coordinates that are already filled
        for p in patterns.iter().filter(|p| !p.graph.depends_on(k)) {
            let base = p.graph.drop_isolated_last_label();
            let want = f.require(&canonical_form(&base)?)?;
            let mut rest = 0u64;
            for u in base.labels()..base.n() {
                if c_u(tau_p, &base, u) {
                    let fu = base.attach_label(u);
                    let d = delta_polynomial(&fu, fu.unlabelled_count())?;
                    rest += d.eval_mod(q, |c| out.require(c))? as u64;
                }
            }
            out.set(p.code.clone(), i64_mod(want as i64 - rest as i64, q));
        }
        // reorder to the enumeration order
        out = FreqVector::from_coords(
            q,
            k + 1,
            b,
            patterns.iter().map(|p| (p.code.clone(), out.get(&p.code).unwrap_or(0))),
        );
    }
    let fs = enumerate_feasible(tau_p, k + 1, b, q, n_residue(tau, f)?)?;
    if !fs.contains(&out) {
        return Err(Error::Inconsistent("the completed vector is not feasible for τ′".into()));
    }
    Ok(out)
}
