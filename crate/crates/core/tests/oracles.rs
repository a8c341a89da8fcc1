//! Frozen values checked against independent computations written here.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use stretchlab::graph::{path_type_bound, verify_girth_lemma, PATH_TYPES};
use stretchlab::numtheory::{crt_power, jacobsthal, min_k};
use stretchlab::penner::{chain_system, dilatation, genus_two_example_word, word_matrix, SignPolicy};
use stretchlab::verify::example_dilatation;
use stretchlab::IntMatrix;

/// Characteristic polynomial coefficients (leading first) by
/// Faddeev-LeVerrier over the integers.
fn char_poly(a: &IntMatrix) -> Vec<BigInt> {
    let n = a.dim();
    let a: Vec<Vec<BigInt>> = a.rows().map(|r| r.iter().map(|x| BigInt::from(x.clone())).collect()).collect();
    let mul = |x: &Vec<Vec<BigInt>>, y: &Vec<Vec<BigInt>>| -> Vec<Vec<BigInt>> {
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|l| &x[i][l] * &y[l][j]).sum()).collect()).collect()
    };
    let mut coeffs = vec![BigInt::from(1)];
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        let mut next = mul(&a, &m);
        for i in 0..n {
            next[i][i] += &coeffs[k - 1];
        }
        m = next;
        let am = mul(&a, &m);
        let trace: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs.push(-trace / BigInt::from(k));
    }
    coeffs
}

fn eval(p: &[BigInt], x: f64) -> f64 {
    p.iter().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap())
}

#[test]
fn example_word_matrix_and_polynomial() {
    let m = word_matrix(&chain_system(2), &genus_two_example_word(), SignPolicy::Enforce).unwrap();
    let expected: IntMatrix = "5\n3 5 2 0 0\n1 2 1 0 0\n1 2 5 4 3\n0 0 3 4 3\n0 0 0 1 1\n".parse().unwrap();
    assert_eq!(m, expected);
    // (x - 1)(x^2 - 9x + 1)(x^2 - 5x + 1)
    let p: Vec<i64> = char_poly(&m).iter().map(|c| c.to_i64().unwrap()).collect();
    assert_eq!(p, vec![1, -15, 61, -61, 15, -1]);
    let lambda = example_dilatation();
    assert!(eval(&char_poly(&m), lambda).abs() < 1e-9);
    let b = dilatation::<f64>(&chain_system(2), &genus_two_example_word(), 1e-12).unwrap();
    assert!((b.estimate - lambda).abs() < 1e-10);
}

#[test]
fn path_type_formula() {
    let fact = |j: u64| (1..=j).product::<u64>();
    let binom = |n: u64, j: u64| fact(n) / (fact(j) * fact(n - j));
    assert_eq!((0..=5).map(|j| binom(5, j) * fact(j)).sum::<u64>(), PATH_TYPES);
}

#[test]
fn crt_scan_oracle() {
    for (n, k, c) in [(3, 4, 7), (3, 5, 11), (5, 7, 29)] {
        assert_eq!(crt_power(n, k).unwrap(), c);
    }
}

#[test]
fn jacobsthal_primorials() {
    for (n, j) in [(1, 1), (2, 2), (6, 4), (30, 6), (210, 10), (2310, 14), (30030, 22)] {
        assert_eq!(jacobsthal(n), j);
    }
}

#[test]
fn gamma_bar_oracles() {
    assert_eq!(verify_girth_lemma(3, 4).unwrap().girth, 3);
    assert_eq!(verify_girth_lemma(5, 7).unwrap().girth, 14);
    let r = path_type_bound(5, 7, 3).unwrap();
    assert_eq!((r.unweighted_max.to_u64(), r.weighted_max.to_u64()), (Some(3), Some(21)));
}

#[test]
fn coprime_interval_constant() {
    let r = min_k::<f64>(2..=1000);
    assert_eq!(r.k_star, stretchlab::bounds::DEFAULT_K);
    assert_eq!(r.per_n.iter().map(|p| p.1).fold(0.0, f64::max), 4.25);
}
