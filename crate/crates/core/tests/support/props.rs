//! Property bodies shared by the property-test target and the acceptance
//! suite. Each takes a generated case and returns a `TestCaseError` on
//! failure.

use clusterbelt::recurrence::{
    combine, minimal_order, toeplitz_det, toeplitz_range, CharPoly, CombineMode, RationalSequence,
};
use clusterbelt::{product_of, BeltState, DynkinSpec, Quiver, Rational, Seed};
use num_traits::Signed;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use super::{recurrence_holds, unroll, OracleSeed};

pub const CASES: u32 = 128;

fn rational() -> impl Strategy<Value = Rational> {
    (1i64..=50, 1i64..=50).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

#[derive(Clone, Debug)]
pub struct QuiverCase {
    pub quiver: Quiver,
    pub values: Vec<Rational>,
    /// Mutable vertices chosen for the property.
    pub picks: Vec<usize>,
}

fn matrix_from_upper(n: usize, upper: &[i64]) -> Vec<Vec<i64>> {
    let mut b = vec![vec![0i64; n]; n];
    let mut it = upper.iter();
    for u in 0..n {
        for v in u + 1..n {
            let x = *it.next().expect("enough entries");
            b[u][v] = x;
            b[v][u] = -x;
        }
    }
    b
}

/// Random quiver on 2..=6 vertices with at most 3 arrows per pair, vertex 0
/// and 1 mutable, others frozen with probability 1/4, plus positive values
/// and a word of up to 8 mutable picks.
pub fn quiver_case() -> impl Strategy<Value = QuiverCase> {
    (2usize..=6)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(-3i64..=3, n * (n - 1) / 2),
                prop::collection::vec(prop::bool::weighted(0.25), n),
                prop::collection::vec(rational(), n),
                prop::collection::vec(0usize..n, 1..=8),
            )
        })
        .prop_map(|(n, upper, frozen, values, word)| {
            let mut quiver = Quiver::from_matrix(matrix_from_upper(n, &upper)).expect("skew-symmetric");
            for (v, &f) in frozen.iter().enumerate().skip(2) {
                quiver.set_frozen(v, f);
            }
            let picks = word.into_iter().filter(|&v| !quiver.is_frozen(v)).collect();
            QuiverCase { quiver, values, picks }
        })
}

/// Same as [`quiver_case`] but with no arrows between vertices 0 and 1.
pub fn disconnected_pair_case() -> impl Strategy<Value = QuiverCase> {
    quiver_case().prop_map(|mut c| {
        let mut b: Vec<Vec<i64>> = c.quiver.exchange_matrix().to_vec();
        b[0][1] = 0;
        b[1][0] = 0;
        let mut q = Quiver::from_matrix(b).expect("skew-symmetric");
        for v in 0..q.vertex_count() {
            q.set_frozen(v, c.quiver.is_frozen(v));
        }
        c.quiver = q;
        c.picks = vec![0, 1];
        c
    })
}

/// Mutating twice at the same vertex is the identity, and one mutation
/// agrees with the arrow-list oracle.
pub fn involution(c: QuiverCase) -> Result<(), TestCaseError> {
    let seed = Seed::new(c.quiver.clone(), c.values.clone()).map_err(fail)?;
    for &z in c.picks.iter().chain([0usize].iter()) {
        let once = seed.mutate(z).map_err(fail)?;
        let twice = once.mutate(z).map_err(fail)?;
        prop_assert_eq!(twice.values(), seed.values());
        prop_assert!(twice.quiver().same_arrows(seed.quiver()));

        let mut oracle = OracleSeed::from_quiver(&c.quiver, &c.values);
        oracle.mutate(z);
        prop_assert_eq!(&OracleSeed::from_quiver(once.quiver(), once.values()), &oracle);
    }
    Ok(())
}

/// Mutations at two vertices without arrows between them commute.
pub fn commutation(c: QuiverCase) -> Result<(), TestCaseError> {
    let seed = Seed::new(c.quiver, c.values).map_err(fail)?;
    let ab = seed.mutate(0).and_then(|s| s.mutate(1)).map_err(fail)?;
    let ba = seed.mutate(1).and_then(|s| s.mutate(0)).map_err(fail)?;
    prop_assert_eq!(ab.values(), ba.values());
    prop_assert!(ab.quiver().same_arrows(ba.quiver()));
    Ok(())
}

/// Positive values stay positive along any mutation word. Words stop early
/// once multiplicities exceed 8, where exact values become enormous.
pub fn positivity(c: QuiverCase) -> Result<(), TestCaseError> {
    let mut seed = Seed::new(c.quiver, c.values).map_err(fail)?;
    for &z in &c.picks {
        if seed.quiver().exchange_matrix().iter().flatten().any(|b| b.abs() > 8) {
            break;
        }
        seed = seed.mutate(z).map_err(fail)?;
        prop_assert!(seed.values().iter().all(|x| x.is_positive()));
    }
    Ok(())
}

fn small_spec() -> impl Strategy<Value = DynkinSpec> {
    prop_oneof![
        (1usize..=4).prop_map(DynkinSpec::a),
        Just("D4".parse().unwrap()),
        Just(DynkinSpec::a_affine(1)),
        Just(DynkinSpec::a_affine(3)),
    ]
}

#[derive(Clone, Debug)]
pub struct BeltCase {
    pub left: DynkinSpec,
    pub right: DynkinSpec,
    pub values: Vec<Rational>,
    pub steps: usize,
}

pub fn belt_case() -> impl Strategy<Value = BeltCase> {
    (small_spec(), small_spec(), prop::collection::vec(rational(), 32), 1usize..=4).prop_map(
        |(left, right, values, steps)| BeltCase { left, right, values, steps },
    )
}

/// Belt evolution from positive data stays positive, and μ₊ does not depend
/// on the order in which the black vertices are mutated.
pub fn belt_positivity_and_order(c: BeltCase) -> Result<(), TestCaseError> {
    let q = product_of(c.left, c.right).map_err(fail)?;
    let n = q.vertex_count();
    prop_assume!(n <= c.values.len());
    let seed = Seed::new(q, c.values[..n].to_vec()).map_err(fail)?;
    let state = BeltState::with_inferred_coloring(seed.clone()).map_err(fail)?;
    let watch: Vec<usize> = (0..n).collect();
    let trace = state.evolve(c.steps, 0, &watch).map_err(fail)?;
    prop_assert!(trace.values.iter().flatten().all(|x| x.is_positive()));

    let black: Vec<usize> = state.vertices_of(clusterbelt::Color::Black).collect();
    let reversed: Vec<usize> = black.iter().rev().copied().collect();
    let forward = seed.mutate_many(&black).map_err(fail)?;
    let backward = seed.mutate_many(&reversed).map_err(fail)?;
    let plus = state.mu_plus().map_err(fail)?;
    prop_assert_eq!(forward.values(), backward.values());
    prop_assert_eq!(plus.seed().values(), forward.values());
    Ok(())
}

#[derive(Clone, Debug)]
pub struct RecCase {
    pub c1: Vec<i64>,
    pub i1: Vec<i64>,
    pub c2: Vec<i64>,
    pub i2: Vec<i64>,
}

fn recurrence(max_order: usize) -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
    (1..=max_order).prop_flat_map(|k| {
        (
            prop::collection::vec(-3i64..=3, k).prop_filter("nonzero tail", |c| c[c.len() - 1] != 0),
            prop::collection::vec(-5i64..=5, k),
        )
    })
}

pub fn rec_case() -> impl Strategy<Value = RecCase> {
    (recurrence(3), recurrence(3)).prop_map(|((c1, i1), (c2, i2))| RecCase { c1, i1, c2, i2 })
}

const WINDOW: usize = 30;

fn poly(c: &[i64]) -> CharPoly {
    let c: Vec<Rational> = c.iter().map(|&x| Rational::from_integer(x.into())).collect();
    CharPoly::from_recurrence(&c)
}

/// The combined characteristic polynomial annihilates the termwise sum or
/// product of two recurrent sequences over a 30-term window.
pub fn combine_sum_product(c: RecCase) -> Result<(), TestCaseError> {
    let a = unroll(&c.c1, &c.i1, WINDOW);
    let b = unroll(&c.c2, &c.i2, WINDOW);
    let (p, q) = (poly(&c.c1), poly(&c.c2));

    let sum = combine(&p, &q, CombineMode::Sum).map_err(fail)?;
    prop_assert_eq!(sum.degree(), p.degree() + q.degree());
    let s: Vec<Rational> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
    prop_assert!(recurrence_holds(&s, &sum.recurrence()), "sum {:?}", sum);

    let prod = combine(&p, &q, CombineMode::Product).map_err(fail)?;
    prop_assert!(prod.degree() <= p.degree() * q.degree());
    let t: Vec<Rational> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
    prop_assert!(recurrence_holds(&t, &prod.recurrence()), "product {:?}", prod);
    Ok(())
}

#[derive(Clone, Debug)]
pub struct ScaleCase {
    pub c: Vec<i64>,
    pub init: Vec<i64>,
    pub num: i64,
    pub den: i64,
}

pub fn scale_case() -> impl Strategy<Value = ScaleCase> {
    (recurrence(4), (-9i64..=9).prop_filter("nonzero", |x| *x != 0), 1i64..=9)
        .prop_map(|((c, init), num, den)| ScaleCase { c, init, num, den })
}

/// Rescaling a sequence by a nonzero constant does not change its minimal
/// recurrence.
pub fn scale_invariance(c: ScaleCase) -> Result<(), TestCaseError> {
    let seq = RationalSequence::new(unroll(&c.c, &c.init, 20), 0).map_err(fail)?;
    let k = Rational::new(c.num.into(), c.den.into());
    let plain = minimal_order(&seq, 6);
    let scaled = minimal_order(&seq.scaled(&k), 6);
    prop_assert_eq!(plain.order(), scaled.order());
    prop_assert_eq!(plain.coefficients(), scaled.coefficients());
    let Some(coeffs) = plain.coefficients() else {
        return Err(TestCaseError::fail("no recurrence found"));
    };
    prop_assert!(recurrence_holds(seq.values(), coeffs));
    prop_assert!(coeffs.len() <= c.c.len());
    Ok(())
}

/// At the detected order `k`, every `(k+1)`-square Toeplitz determinant in
/// the window vanishes and some `k`-square one does not.
pub fn toeplitz_consistency(c: ScaleCase) -> Result<(), TestCaseError> {
    let seq = RationalSequence::new(unroll(&c.c, &c.init, 20), 0).map_err(fail)?;
    prop_assume!(seq.values().iter().any(|x| !num_traits::Zero::is_zero(x)));
    let Some(k) = minimal_order(&seq, 6).order() else {
        return Err(TestCaseError::fail("no recurrence found"));
    };
    for ell in toeplitz_range(&seq, k + 1) {
        let d = toeplitz_det(&seq, ell, k + 1).map_err(fail)?;
        prop_assert!(num_traits::Zero::is_zero(&d), "K = {} at ell = {}", k + 1, ell);
    }
    let witness = toeplitz_range(&seq, k)
        .map(|ell| toeplitz_det(&seq, ell, k))
        .collect::<Result<Vec<_>, _>>()
        .map_err(fail)?;
    prop_assert!(witness.iter().any(|d| !num_traits::Zero::is_zero(d)), "no K = {} witness", k);
    Ok(())
}

fn fail(e: clusterbelt::Error) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}
