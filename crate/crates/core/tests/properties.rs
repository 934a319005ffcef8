use std::sync::Arc;

use proptest::prelude::*;
use serde_json::{json, Value};

use ehpcert::algebra::{Algebra, ModuleSplit, Submodule};
use ehpcert::ehp::{theorem_a_report, Condition, Premise, TheoremOptions};
use ehpcert::nil::{nil_bound, nil_degree, NilOptions};
use ehpcert::ring::rational;
use ehpcert::zoo;

fn library(i: usize) -> Submodule {
    let a = match i {
        0 => zoo::so(2),
        1 => zoo::so(3),
        2 => zoo::su(2),
        3 => zoo::abelian(2),
        4 => zoo::heisenberg(1),
        5 => zoo::cd_tower(2, &rational::rat(-1)),
        _ => {
            let m = Arc::new(zoo::mat(3).unwrap());
            return Submodule::new(&m, zoo::antisymmetric_vectors(3)).unwrap();
        }
    };
    Submodule::full(&Arc::new(a.unwrap()))
}

/// Algebra on `dim` generators with small integer structure constants.
fn random_algebra(dim: usize, coeffs: &[i64]) -> Algebra {
    let mut product = Vec::new();
    let mut it = coeffs.iter();
    for i in 0..dim {
        for j in 0..dim {
            let terms: Vec<Value> = (0..dim)
                .filter_map(|k| {
                    let c = *it.next().unwrap();
                    (c != 0).then(|| json!([k, c.to_string()]))
                })
                .collect();
            if !terms.is_empty() {
                product.push(json!([i, j, terms]));
            }
        }
    }
    let basis: Vec<String> = (0..dim).map(|i| format!("b{i}")).collect();
    Algebra::from_manifest(&json!({"basis": basis, "product": product})).unwrap()
}

fn is_commutative(a: &Algebra, anti: bool) -> bool {
    (0..a.dim()).all(|i| {
        (0..a.dim()).all(|j| {
            let x = a.basis_product_dense(i, j);
            let y = a.basis_product_dense(j, i);
            x.iter().zip(&y).all(|(p, q)| if anti { p + q == rational::zero() } else { p == q })
        })
    })
}

fn algebra_strategy() -> impl Strategy<Value = Algebra> {
    (1usize..=3).prop_flat_map(|d| {
        prop::collection::vec(-1i64..=1, d * d * d).prop_map(move |c| random_algebra(d, &c))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn vanishing_is_monotone_in_s(i in 0usize..7, k in 1usize..=2, s in 1usize..=2) {
        let v = library(i);
        let lo = nil_bound(&v, k, s, &NilOptions::exact()).unwrap();
        let hi = nil_bound(&v, k, s + 1, &NilOptions::exact()).unwrap();
        prop_assert!(!lo.is_certified() || hi.is_certified());
    }

    #[test]
    fn verdict_stable_under_extra_generator(i in 0usize..7, s in 1usize..=3) {
        let v = library(i);
        let base = nil_bound(&v, 1, s, &NilOptions::exact()).unwrap();
        let more = NilOptions { extra_generators: 1, ..NilOptions::exact() };
        let wider = nil_bound(&v, 1, s, &more).unwrap();
        prop_assert_eq!(base.is_certified(), wider.is_certified());
        prop_assert_eq!(wider.generators, base.generators + 1);
    }

    #[test]
    fn modular_agrees_with_exact(i in 0usize..7, k in 1usize..=2, s in 1usize..=3, seed in any::<u64>()) {
        let v = library(i);
        let x = nil_bound(&v, k, s, &NilOptions::exact()).unwrap();
        let y = nil_bound(&v, k, s, &NilOptions::modular(20, seed)).unwrap();
        prop_assert_eq!(x.is_certified(), y.is_certified());
    }

    #[test]
    fn square_of_one_forms_detects_commutativity(a in algebra_strategy()) {
        let v = Submodule::full(&Arc::new(a));
        let c = nil_bound(&v, 1, 1, &NilOptions::exact()).unwrap();
        prop_assert_eq!(c.is_certified(), is_commutative(v.parent(), false));
    }

    #[test]
    fn square_of_two_forms_detects_anticommutativity(a in algebra_strategy()) {
        let v = Submodule::full(&Arc::new(a));
        let c = nil_bound(&v, 2, 1, &NilOptions::exact()).unwrap();
        prop_assert_eq!(c.is_certified(), is_commutative(v.parent(), true));
    }

    #[test]
    fn splitting_extension_preserves_degree(a in algebra_strategy(), r in 0usize..=2) {
        let ext = zoo::split_extension(&a, r).unwrap();
        let x = nil_degree(&Submodule::full(&Arc::new(a)), 1, 3, &NilOptions::exact()).unwrap();
        let y = nil_degree(&Submodule::full(&Arc::new(ext)), 1, 3, &NilOptions::exact()).unwrap();
        prop_assert_eq!(x.degree, y.degree);
        prop_assert_eq!(x.is_certified(), y.is_certified());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    /// At or above the homogeneous threshold the cosmological term drops
    /// out, so the verdicts cannot depend on the constant.
    #[test]
    fn lambda_irrelevant_above_threshold(num in -5i64..=5, den in 1i64..=4) {
        let a = Arc::new(zoo::iso_pq(3, 0).unwrap());
        let unit = |i| ehpcert::algebra::linalg::unit_vector(6, i);
        let split = ModuleSplit::new(&a, (0..3).map(unit).collect(), (3..6).map(unit).collect()).unwrap();
        let premise = Premise::simple(Condition::G1, 1, 1);
        let ns = [3, 4, 5];
        let run = |lambda| {
            let opts = TheoremOptions { lambda, ..TheoremOptions::default() };
            theorem_a_report(&a, &split, &premise, &ns, None, &opts).unwrap()
        };
        let base = run(rational::one());
        let other = run(rational::rat(num) / rational::rat(den));
        let th = base.analysis.thresholds.unwrap();
        for (x, y) in base.analysis.per_n.iter().zip(&other.analysis.per_n) {
            prop_assert!(x.n < th.homogeneous || x.inhomogeneous_vanishes);
            if x.n >= th.homogeneous {
                prop_assert_eq!(x.alpha_vanishes, y.alpha_vanishes);
            }
            if x.n >= th.trivial {
                prop_assert!(y.alpha_vanishes);
            }
        }
    }
}
