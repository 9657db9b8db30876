//! Spot values for the built-in example tables, each computed first by a
//! brute-force summation over the sixteen cells (the `oracle` module below,
//! which never calls the library's margin or kernel machinery) and only then
//! compared against the library.

use mkcalc_core::calculus::{
    conditional_expectation, diagonal_product, expectation, image_distribution, mean_measure,
};
use mkcalc_core::density::{
    conditional_density, product_conditional_density, Axis, JointPmf, PhiVariable,
};
use mkcalc_core::diagnosis::{builtin, induced_model, metrics, ScenarioTable};
use mkcalc_core::rational::{rat, rat_u, Rat};
use mkcalc_core::space::pair_index;

/// Independent brute-force reading of a 2x8 grid. Layout contract only:
/// column = i*4 + j*2 + k, row = l.
mod oracle {
    pub type Grid = [[u64; 8]; 2];

    /// Sum of cells matching fixed values of (i, j, k, l); `None` is a
    /// wildcard.
    pub fn margin(grid: &Grid, sel: [Option<u64>; 4]) -> u64 {
        let mut total = 0;
        for (l, row) in grid.iter().enumerate() {
            for (col, &count) in row.iter().enumerate() {
                let idx = [
                    (col as u64 >> 2) & 1,
                    (col as u64 >> 1) & 1,
                    col as u64 & 1,
                    l as u64,
                ];
                let keep = sel
                    .iter()
                    .zip(idx)
                    .all(|(s, v)| s.is_none_or(|want| want == v));
                if keep {
                    total += count;
                }
            }
        }
        total
    }
}

const S1: oracle::Grid = builtin::BOTH_HOLD_GRID;

fn table(grid: oracle::Grid) -> ScenarioTable {
    ScenarioTable::new(grid).unwrap()
}

#[test]
fn oracle_margins_pin_the_population_counts() {
    // Brute-force first.
    let n = oracle::margin(&S1, [None; 4]);
    assert_eq!(n, 40);
    let n_k0 = oracle::margin(&S1, [None, None, Some(0), None]);
    let n_k1 = oracle::margin(&S1, [None, None, Some(1), None]);
    assert_eq!((n_k0, n_k1), (20, 20));

    // Library agrees.
    let t = table(S1);
    assert_eq!(t.n(), n);
    assert_eq!(t.margin("++0+").unwrap(), n_k0);
    assert_eq!(t.margin("++1+").unwrap(), n_k1);
    assert_eq!(t.margin("++++").unwrap(), 40);
}

#[test]
fn oracle_reference_law_is_uniform() {
    let n = oracle::margin(&S1, [None; 4]);
    let q0 = rat_u(oracle::margin(&S1, [None, None, Some(0), None]), n);
    let q1 = rat_u(oracle::margin(&S1, [None, None, Some(1), None]), n);
    assert_eq!((q0.clone(), q1.clone()), (rat(1, 2), rat(1, 2)));

    let model = induced_model(&table(S1));
    assert_eq!(model.q.masses(), &[q0, q1][..]);
}

#[test]
fn oracle_prevalences() {
    let n = oracle::margin(&S1, [None; 4]);
    let p3 = rat_u(oracle::margin(&S1, [None, None, Some(1), None]), n);
    let p_interest = rat_u(oracle::margin(&S1, [None, None, None, Some(1)]), n);
    assert_eq!(p3, rat(1, 2));
    assert_eq!(p_interest, rat(1, 2));

    let m = metrics(&table(S1));
    assert_eq!(m.prevalence, p3);
    assert_eq!(m.prevalence_of_interest, p_interest);
}

#[test]
fn oracle_expectation_of_the_conditional_kernel() {
    // E_Q(M) = sum_k Q(k) * n[++k1]/n[++k+] = n[+++1]/n, brute-forced.
    let n = oracle::margin(&S1, [None; 4]);
    let expected = rat_u(oracle::margin(&S1, [None, None, None, Some(1)]), n);
    assert_eq!(expected, rat(1, 2));

    let model = induced_model(&table(S1));
    let got = expectation(&model.q, &model.m, &model.e).unwrap();
    assert_eq!(got, vec![expected]);
}

#[test]
fn oracle_diagonal_product_entry() {
    // (M x M1)(k=0, (l=1, i=0)) = (n[++01]/n[++0+]) * (n[0+0+]/n[++0+]).
    let n_k0 = oracle::margin(&S1, [None, None, Some(0), None]);
    let n_01 = oracle::margin(&S1, [None, None, Some(0), Some(1)]);
    let n_i0k0 = oracle::margin(&S1, [Some(0), None, Some(0), None]);
    let expected = rat_u(n_01, n_k0) * rat_u(n_i0k0, n_k0);
    assert_eq!(expected, rat(1, 4));

    let model = induced_model(&table(S1));
    let mm1 = diagonal_product(&model.m, &model.m1).unwrap();
    // m-target index 1 (interest = 1), m1-target index 0 (test1 = 0)
    assert_eq!(mm1.prob(0, pair_index(2, 1, 0)), &expected);
}

#[test]
fn oracle_image_of_the_first_test() {
    let n = oracle::margin(&S1, [None; 4]);
    let x1_law: Vec<Rat> = [0, 1]
        .map(|i| rat_u(oracle::margin(&S1, [Some(i), None, None, None]), n))
        .to_vec();
    assert_eq!(x1_law, vec![rat(1, 2), rat(1, 2)]);

    let model = induced_model(&table(S1));
    let img = image_distribution(&model.q, &model.m1).unwrap();
    assert_eq!(img.masses(), &x1_law[..]);
}

#[test]
fn oracle_mean_measure_atom() {
    // Atom at k = 0 with the 0/1 embedding: Q(0) * M(0, {1}) = 1/4.
    let n = oracle::margin(&S1, [None; 4]);
    let n_k0 = oracle::margin(&S1, [None, None, Some(0), None]);
    let n_01 = oracle::margin(&S1, [None, None, Some(0), Some(1)]);
    let expected = rat_u(n_k0, n) * rat_u(n_01, n_k0);
    assert_eq!(expected, rat(1, 4));

    let model = induced_model(&table(S1));
    let mm = mean_measure(&model.q, &model.m, &model.e).unwrap();
    assert_eq!(mm.atom(0), &[expected][..]);
}

#[test]
fn oracle_conditional_expectation_given_first_test() {
    // E(M | M1 = 1) = (n[++01]/n[++0+])(n[1+0+]/n[1+++])
    //              + (n[++11]/n[++1+])(n[1+1+]/n[1+++])
    let term = |k: u64| {
        let n_k = oracle::margin(&S1, [None, None, Some(k), None]);
        let n_k1 = oracle::margin(&S1, [None, None, Some(k), Some(1)]);
        let n_1k = oracle::margin(&S1, [Some(1), None, Some(k), None]);
        let n_1 = oracle::margin(&S1, [Some(1), None, None, None]);
        rat_u(n_k1, n_k) * rat_u(n_1k, n_1)
    };
    let expected = term(0) + term(1);
    assert_eq!(expected, rat(1, 2));

    let model = induced_model(&table(S1));
    let ce = conditional_expectation(&model.q, &model.m, &model.e, &model.m1).unwrap();
    assert_eq!(ce.value(1).unwrap(), &[expected][..]);
}

#[test]
fn oracle_positive_predictive_value() {
    let n_1k1 = oracle::margin(&S1, [Some(1), None, Some(1), None]);
    let n_1 = oracle::margin(&S1, [Some(1), None, None, None]);
    let expected = rat_u(n_1k1, n_1);
    assert_eq!(expected, rat(1, 2));
    assert_eq!(metrics(&table(S1)).ppv_1, Some(expected));
}

#[test]
fn oracle_density_tables() {
    let n = oracle::margin(&S1, [None; 4]);
    let j = JointPmf::from_scenario_table(&table(S1));

    // f3 = (1/2, 1/2)
    let f3 = j.marginal(&[Axis::X3]).unwrap();
    for k in 0..2u64 {
        let expected = rat_u(oracle::margin(&S1, [None, None, Some(k), None]), n);
        assert_eq!(f3.values()[k as usize], expected);
    }

    // phi(w3 = 0, x = 1) = g3(1, 0)/f3(0) = (10/40)/(20/40)
    let g3_10 = rat_u(oracle::margin(&S1, [None, None, Some(0), Some(1)]), n);
    let f3_0 = rat_u(oracle::margin(&S1, [None, None, Some(0), None]), n);
    let expected_phi = &g3_10 / &f3_0;
    assert_eq!(expected_phi, rat(1, 2));
    assert_eq!(
        conditional_density(&j, PhiVariable::X, 0, 1).unwrap(),
        expected_phi
    );

    // product density at (w3, x, w1) = (0, 1, 0): g3 * f13 / f3^2
    let f13_00 = rat_u(oracle::margin(&S1, [Some(0), None, Some(0), None]), n);
    let expected_prod = &g3_10 * &f13_00 / (&f3_0 * &f3_0);
    assert_eq!(expected_prod, rat(1, 4));
    assert_eq!(
        product_conditional_density(&j, 0, 1, 0).unwrap(),
        expected_prod
    );
}
