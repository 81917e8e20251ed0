//! Greatest subsolutions on finite domains.

use std::sync::Arc;

use tropicost_core::{CostDioid, CostVector};

/// A map given by its full table.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitMap<X, Y> {
    pub table: Vec<(X, Y)>,
}

impl<X: Clone, Y> ExplicitMap<X, Y> {
    pub fn tabulate(domain: impl IntoIterator<Item = X>, f: impl Fn(&X) -> Y) -> Self {
        ExplicitMap {
            table: domain.into_iter().map(|x| {
                let y = f(&x);
                (x, y)
            }).collect(),
        }
    }
}

/// Join of every `x` with `f(x) ≤ b`, starting from `bottom`.
pub fn greatest_subsolution<X: Clone, Y>(
    f: &ExplicitMap<X, Y>,
    b: &Y,
    leq: impl Fn(&Y, &Y) -> bool,
    join: impl Fn(&X, &X) -> X,
    bottom: X,
) -> X {
    f.table
        .iter()
        .filter(|(_, y)| leq(y, b))
        .fold(bottom, |acc, (x, _)| join(&acc, x))
}

/// All `2ⁿ` vectors with entries in `{⊥, e}`, in bit-mask order.
pub fn boolean_vectors(dioid: &Arc<CostDioid>, n: usize) -> Vec<CostVector> {
    assert!(n < 24, "too many vectors to enumerate");
    (0..1u64 << n)
        .map(|mask| CostVector::indicator(dioid.clone(), n, (0..n).filter(|&i| mask & (1 << i) != 0)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use tropicost_core::CostMatrix;

    fn vec_join(a: &CostVector, b: &CostVector) -> CostVector {
        a.oplus(b).unwrap()
    }

    #[test]
    fn identity_returns_target() {
        let d = Arc::new(CostDioid::maxplus());
        let dom = boolean_vectors(&d, 3);
        let f = ExplicitMap::tabulate(dom.clone(), |x| x.clone());
        for b in &dom {
            let got = greatest_subsolution(&f, b, |x, y| x.leq(y), vec_join, CostVector::zero(d.clone(), 3));
            assert_eq!(&got, b);
        }
    }

    #[test]
    fn constant_bottom_gives_domain_top() {
        let d = Arc::new(CostDioid::maxplus());
        let f = ExplicitMap::tabulate(boolean_vectors(&d, 3), |_| CostVector::zero(d.clone(), 2));
        let b = CostVector::zero(d.clone(), 2);
        let got = greatest_subsolution(&f, &b, |x, y| x.leq(y), vec_join, CostVector::zero(d.clone(), 3));
        assert_eq!(got.render_boolean(), "(e,e,e)");
    }

    #[test]
    fn even_interval_alpha1_subsolution() {
        let d = Arc::new(CostDioid::maxplus());
        let e = d.unit();
        let o = d.zero();
        let alpha = CostMatrix::from_rows(
            d.clone(),
            vec![
                vec![e.clone(), e.clone(), o.clone(), o.clone(), o.clone()],
                vec![o.clone(), e.clone(), e.clone(), e.clone(), o.clone()],
                vec![o.clone(), o.clone(), o.clone(), e.clone(), e.clone()],
            ],
        )
        .unwrap();
        let f = ExplicitMap::tabulate(boolean_vectors(&d, 5), |x| alpha.mul_vec(x).unwrap());
        assert_eq!(f.table.len(), 32);
        let b = CostVector::indicator(d.clone(), 3, [0, 1]);
        let got = greatest_subsolution(&f, &b, |x, y| x.leq(y), vec_join, CostVector::zero(d.clone(), 5));
        assert_eq!(got.render_boolean(), "(e,e,e,.,.)");
    }
}
