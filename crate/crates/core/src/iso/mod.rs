//! Isomorphism invariants for pairs of domain algebras.
//!
//! - [`sunada_equivalence`]: biholomorphic equivalence of the scalar domains
//!   `𝔻_f¹, 𝔻_g¹` by permutation and scaling.
//! - [`degree_d_constraints`] and [`obstruction_search`]: norm constraints that
//!   any isometric isomorphism with `Φ̂₁(0) = 0` must satisfy, and a search that
//!   either certifies they are infeasible or exhibits a candidate.
//! - [`disk_detector`]: whether `A(D_f)` is a disk algebra.
//! - [`pushforward`]: evaluate a polynomial map `Φ̂_k` on a tuple.

mod candidate;
mod constraints;
mod permutations;
mod search;
mod sunada;
mod univariate;

pub use candidate::{LinearCandidate, STOCHASTIC_TOL};
pub use constraints::{degree_d_constraints, ConstraintSystem};
pub use permutations::Permutations;
pub use search::{
    obstruction_search, obstruction_search_with, BoundMethod, Certificate, DegreeSummary, EndpointCheck,
    ObstructionVerdict, Outcome, SearchOptions, TwoLetterAnalysis, UnivariateConstraint, FEASIBILITY_TOL,
};
pub use sunada::{sunada_all, sunada_equivalence, sunada_residual, SunadaMatch, SUNADA_TOL};
pub use univariate::{Univariate, ZeroSet};

use crate::domains::{domain_membership, MatrixTuple, Status};
use crate::error::{Error, Result};
use crate::fock::PolyElement;
use crate::symbol::Symbol;
use crate::words::Multidegree;

/// True iff every support word has length one, i.e. `normalize(sym) = Σ X_i`.
pub fn disk_detector(sym: &Symbol) -> Result<bool> {
    sym.validate()?;
    Ok(sym.terms().all(|(w, _)| w.len() == 1))
}

/// For a disk symbol `Σ c_i X_i`, the scales `√c_i` whose rescaling gives `Σ X_i`.
pub fn disk_witness(sym: &Symbol) -> Result<Option<Vec<f64>>> {
    if !disk_detector(sym)? {
        return Ok(None);
    }
    Ok(Some(sym.normalize()?.1))
}

/// Whether both normalized symbols collapse to `z₁ + z₂ + z₁z₂`.
///
/// For such pairs the origin is known to be fixed by every isomorphism of the
/// scalar domains, so the zero-fixing hypothesis behind the degree
/// constraints holds. Elsewhere it is an unchecked assumption.
pub fn zero_fixing_known(f: &Symbol, g: &Symbol) -> Result<bool> {
    if f.n() != 2 || g.n() != 2 {
        return Ok(false);
    }
    let model = [(vec![1, 0], 1.0), (vec![0, 1], 1.0), (vec![1, 1], 1.0)];
    let matches = |s: &Symbol| -> Result<bool> {
        let cp = s.normalize()?.0.collapse();
        Ok(cp.support().count() == model.len()
            && model.iter().all(|(m, c)| (cp.coeff(&Multidegree(m.clone())) - c).abs() <= 1e-12))
    };
    Ok(matches(f)? && matches(g)?)
}

/// `Φ̂_k(T) = (map_1(T), …, map_m(T))` for `T ∈ D_g(C^k)`.
///
/// Components may carry constant terms; such maps do not fix the origin.
pub fn pushforward(map: &[PolyElement], t: &MatrixTuple, g: &Symbol, tol: f64) -> Result<MatrixTuple> {
    if t.n() != g.n() {
        return Err(Error::AlphabetMismatch { expected: g.n(), found: t.n() });
    }
    if let Some(p) = map.iter().find(|p| p.n() != g.n()) {
        return Err(Error::AlphabetMismatch { expected: g.n(), found: p.n() });
    }
    let verdict = domain_membership(g, t, tol)?;
    if verdict.status == Status::Outside {
        return Err(Error::NotInDomain { margin: verdict.margin });
    }
    MatrixTuple::new(map.iter().map(|p| p.evaluate(t)).collect::<Result<Vec<_>>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::DEFAULT_TOL;
    use crate::linalg::c;
    use crate::sampling;
    use crate::words::Word;

    fn f() -> Symbol {
        Symbol::from_pairs(2, &[("1", 1.0), ("2", 1.0), ("12", 1.0)]).unwrap()
    }

    fn g() -> Symbol {
        Symbol::from_pairs(2, &[("1", 1.0), ("2", 1.0), ("12", 0.5), ("21", 0.5)]).unwrap()
    }

    #[test]
    fn disk_examples() {
        let two_three = Symbol::from_pairs(2, &[("1", 2.0), ("2", 3.0)]).unwrap();
        assert!(disk_detector(&two_three).unwrap());
        let w = disk_witness(&two_three).unwrap().unwrap();
        assert_eq!(w, vec![2f64.sqrt(), 3f64.sqrt()]);
        assert_eq!(two_three.rescale(&w).unwrap().normalize().unwrap().0, Symbol::linear(2));
        assert!(disk_detector(&Symbol::linear(4)).unwrap());
        assert!(!disk_detector(&f()).unwrap());
        assert!(!disk_detector(&g()).unwrap());
        assert_eq!(disk_witness(&f()).unwrap(), None);
    }

    #[test]
    fn disk_implies_identity_candidate() {
        let sym = Symbol::from_pairs(3, &[("1", 0.2), ("2", 5.0), ("3", 1.5)]).unwrap();
        let normalized = sym.normalize().unwrap().0;
        for d in 2..=4 {
            let v = obstruction_search(&normalized, &Symbol::linear(3), d, 11).unwrap();
            let Certificate::CandidateFound { candidate, .. } = v.certificate else { panic!() };
            assert_eq!(candidate, LinearCandidate::identity(3));
        }
    }

    #[test]
    fn zero_fixing_flag() {
        assert!(zero_fixing_known(&f(), &g()).unwrap());
        let scaled = f().rescale(&[0.5, 3.0]).unwrap();
        assert!(zero_fixing_known(&scaled, &g()).unwrap());
        assert!(!zero_fixing_known(&f(), &Symbol::linear(2)).unwrap());
    }

    #[test]
    fn pushforward_examples() {
        let mut rng = sampling::rng(2);
        let t = sampling::row_contraction(&mut rng, 2, 3, 0.3);
        let identity: Vec<PolyElement> =
            (0..2).map(|i| PolyElement::monomial(2, Word::generator(i)).unwrap()).collect();
        assert_eq!(pushforward(&identity, &t, &f(), DEFAULT_TOL).unwrap(), t);

        // A unitary linear map.
        let (a, b) = (c(0.6, 0.0), c(0.0, 0.8));
        let m = [[a, b], [b, a]];
        let map: Vec<PolyElement> = (0..2)
            .map(|i| PolyElement::new(2, (0..2).map(|j| (Word::generator(j), m[i][j]))).unwrap())
            .collect();
        let out = pushforward(&map, &t, &f(), DEFAULT_TOL).unwrap();
        for (i, row) in m.iter().enumerate() {
            let expected = t.get(0) * row[0] + t.get(1) * row[1];
            assert!((out.get(i) - expected).norm() < 1e-14);
        }

        let zero = MatrixTuple::zeros(2, 3);
        let image = pushforward(&map, &zero, &f(), DEFAULT_TOL).unwrap();
        assert_eq!(image, zero);

        let outside = MatrixTuple::from_scalars(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(pushforward(&identity, &outside, &f(), DEFAULT_TOL), Err(Error::NotInDomain { .. })));
    }

    #[test]
    fn permutation_pushforward_preserves_membership() {
        // Relabeling maps D_{f∘σ} onto D_f, so margins agree exactly.
        let sigma = [1, 0];
        let fs = f().permute(&sigma).unwrap();
        let mut rng = sampling::rng(12);
        for _ in 0..20 {
            let t = sampling::row_contraction(&mut rng, 2, 2, 0.6);
            let map: Vec<PolyElement> =
                (0..2).map(|i| PolyElement::monomial(2, Word::generator(sigma[i])).unwrap()).collect();
            let Ok(image) = pushforward(&map, &t, &fs, DEFAULT_TOL) else { continue };
            let before = domain_membership(&fs, &t, DEFAULT_TOL).unwrap();
            let after = domain_membership(&f(), &image, DEFAULT_TOL).unwrap();
            assert!((before.margin - after.margin).abs() < 1e-12);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn symbol(n: usize) -> impl Strategy<Value = Symbol> {
            let gens = proptest::collection::vec(0.2f64..3.0, n);
            let extra = proptest::collection::vec((proptest::collection::vec(0..n, 2..=3), 0.05f64..2.0), 0..4);
            (gens, extra).prop_map(move |(gens, extra)| {
                let mut terms: Vec<(Word, f64)> =
                    gens.into_iter().enumerate().map(|(i, a)| (Word::generator(i), a)).collect();
                terms.extend(extra.into_iter().map(|(letters, a)| (Word::from_letters(letters), a)));
                terms.sort_by(|a, b| a.0.cmp(&b.0));
                terms.dedup_by(|a, b| a.0 == b.0);
                Symbol::new(n, terms).unwrap()
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            #[test]
            fn self_pair_has_candidate(sym in (2usize..=3).prop_flat_map(symbol), d in 2usize..=4) {
                let normalized = sym.normalize().unwrap().0;
                let v = obstruction_search(&normalized, &normalized, d, 11).unwrap();
                prop_assert_eq!(v.outcome(), Outcome::CandidateFound);
            }

            #[test]
            fn sunada_inverse_matches_reverse_pair(
                sym in (2usize..=3).prop_flat_map(symbol),
                scales in proptest::collection::vec(0.3f64..3.0, 3),
                shift in 0usize..3,
            ) {
                let n = sym.n();
                let sigma: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
                let other = sym.rescale(&scales[..n]).unwrap().permute(&sigma).unwrap();
                let found = sunada_equivalence(&sym, &other).unwrap().expect("planted");
                let back = found.inverse();
                prop_assert!(sunada_residual(&other, &sym, &back.sigma, &back.s).unwrap() <= 1e-9);
            }
        }
    }
}
