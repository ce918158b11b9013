use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::One;

use super::glue::product_expand;
use super::poly::FreqPolynomial;
use crate::canon::{canonical_pattern, CanonicalCode};
use crate::error::{Error, Result};
use crate::pattern::LabelledGraph;

/// Which unlabelled component is split off first in the δ recursion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplitStrategy {
    /// The component containing the smallest canonical vertex.
    First,
    /// The component containing the largest canonical vertex.
    Last,
}

type Memo = RwLock<HashMap<(CanonicalCode, SplitStrategy), Arc<FreqPolynomial>>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// δ_{F′}: a polynomial in label-connected indeterminates whose value at
/// `x_F = [F](G, w)` equals `[F′](G, w)`.
pub fn delta_polynomial(f: &LabelledGraph, t: usize) -> Result<Arc<FreqPolynomial>> {
    delta_polynomial_with(f, t, SplitStrategy::First)
}

pub fn delta_polynomial_with(f: &LabelledGraph, t: usize, strategy: SplitStrategy) -> Result<Arc<FreqPolynomial>> {
    if f.unlabelled_count() > t {
        return Err(Error::InvalidArgument(format!(
            "pattern has {} unlabelled vertices, bound is {t}",
            f.unlabelled_count()
        )));
    }
    let (code, rep) = canonical_pattern(f)?;
    delta_code(&code, &rep, strategy)
}

pub(crate) fn delta_of_code(code: &CanonicalCode) -> Result<Arc<FreqPolynomial>> {
    delta_code(code, &code.decode(), SplitStrategy::First)
}

fn delta_code(code: &CanonicalCode, rep: &LabelledGraph, strategy: SplitStrategy) -> Result<Arc<FreqPolynomial>> {
    let key = (code.clone(), strategy);
    if let Some(hit) = memo().read().expect("delta memo").get(&key) {
        return Ok(hit.clone());
    }
    let comps = rep.unlabelled_components();
    let poly = match comps.len() {
        0 => FreqPolynomial::one(),
        1 => FreqPolynomial::var(code.clone()),
        _ => {
            let first = match strategy {
                SplitStrategy::First => comps[0],
                SplitStrategy::Last => *comps.iter().max_by_key(|m| 31 - m.leading_zeros()).expect("nonempty"),
            };
            let f1 = rep.restrict_unlabelled(first);
            let f2 = rep.restrict_unlabelled(rep.unlabelled_mask() & !first);
            let d1 = delta_polynomial_with(&f1, f1.unlabelled_count(), strategy)?;
            let d2 = delta_polynomial_with(&f2, f2.unlabelled_count(), strategy)?;
            let mut out = d1.mul(&d2);
            // the empty matching reproduces F′ itself; every other gluing has
            // fewer unlabelled vertices and fewer components
            for (g, c) in product_expand(&f1, &f2)?.terms {
                if &g == code {
                    assert!(c.is_one(), "only the empty matching glues back to F′");
                    continue;
                }
                assert!(g.unlabelled_count() < code.unlabelled_count());
                let dg = delta_code(&g, &g.decode(), strategy)?;
                out.add_assign_scaled(&dg, &-c);
            }
            out
        }
    };
    let poly = Arc::new(poly);
    memo().write().expect("delta memo").insert(key, poly.clone());
    Ok(poly)
}

/// Sum of `c · δ_F` over a formal sum.
pub(crate) fn delta_of_sum(sum: &super::glue::FormalSum) -> Result<FreqPolynomial> {
    let mut out = FreqPolynomial::zero();
    for (code, c) in &sum.terms {
        out.add_assign_scaled(&*delta_of_code(code)?, c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_form;
    use crate::count::count_inj;
    use num_bigint::BigInt;

    #[test]
    fn two_edges() {
        let f = LabelledGraph::new(0, 4, &[(0, 1), (2, 3)]).unwrap();
        let d = delta_polynomial(&f, 4).unwrap();
        let k2 = canonical_form(&LabelledGraph::new(0, 2, &[(0, 1)]).unwrap()).unwrap();
        let p3 = canonical_form(&LabelledGraph::new(0, 3, &[(0, 1), (1, 2)]).unwrap()).unwrap();
        let want = FreqPolynomial::var(k2.clone())
            .mul(&FreqPolynomial::var(k2.clone()))
            .sub(&FreqPolynomial::var(p3).mul(&FreqPolynomial::constant(4)))
            .sub(&FreqPolynomial::var(k2).mul(&FreqPolynomial::constant(2)));
        assert_eq!(*d, want);
    }

    #[test]
    fn base_cases() {
        let e = LabelledGraph::new(1, 2, &[(0, 1)]).unwrap();
        assert_eq!(delta_polynomial(&e, 1).unwrap().term_count(), 1);
        assert_eq!(*delta_polynomial(&LabelledGraph::labels_only(2), 0).unwrap(), FreqPolynomial::one());
        assert!(delta_polynomial(&e, 0).is_err());
    }

    #[test]
    fn strategies_agree_on_counts() {
        let f = LabelledGraph::new(1, 6, &[(0, 1), (1, 2), (0, 3), (4, 5)]).unwrap();
        let g = crate::graph::sample_gnp(8, 0.5, 11).unwrap();
        let a = delta_polynomial_with(&f, 5, SplitStrategy::First).unwrap();
        let b = delta_polynomial_with(&f, 5, SplitStrategy::Last).unwrap();
        for root in 0..8 {
            let val = |c: &CanonicalCode| BigInt::from(count_inj(&c.decode(), &g, &[root]));
            let want = BigInt::from(count_inj(&f, &g, &[root]));
            assert_eq!(a.eval_int(val), want);
            assert_eq!(b.eval_int(val), want);
        }
    }
}
