//! Shared oracles and property bodies for the integration tests.

#![allow(dead_code)]

pub mod props;

use clusterbelt::{Quiver, Rational};
use num_traits::{One, Zero};

/// Independent mutation oracle working on an explicit arrow multiset.
///
/// Arrows are kept as a map `(u, v) -> count` with only positive counts, and
/// mutation is carried out literally: reverse arrows at `z`, add a composite
/// `u -> v` for every path `u -> z -> v`, then cancel 2-cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleSeed {
    pub n: usize,
    pub arrows: std::collections::BTreeMap<(usize, usize), i64>,
    pub values: Vec<Rational>,
}

impl OracleSeed {
    pub fn from_quiver(q: &Quiver, values: &[Rational]) -> Self {
        let mut arrows = std::collections::BTreeMap::new();
        for (u, v, k) in q.arrows() {
            arrows.insert((u, v), k);
        }
        OracleSeed { n: q.vertex_count(), arrows, values: values.to_vec() }
    }

    fn count(&self, u: usize, v: usize) -> i64 {
        self.arrows.get(&(u, v)).copied().unwrap_or(0)
    }

    pub fn mutate(&mut self, z: usize) {
        let mut into = Rational::one();
        let mut out = Rational::one();
        for y in 0..self.n {
            for _ in 0..self.count(y, z) {
                into *= &self.values[y];
            }
            for _ in 0..self.count(z, y) {
                out *= &self.values[y];
            }
        }
        self.values[z] = (into + out) / &self.values[z];

        let mut next: std::collections::BTreeMap<(usize, usize), i64> = Default::default();
        for (&(u, v), &k) in &self.arrows {
            if u == z || v == z {
                *next.entry((v, u)).or_default() += k;
            } else {
                *next.entry((u, v)).or_default() += k;
            }
        }
        for u in 0..self.n {
            for v in 0..self.n {
                if u != z && v != z && u != v {
                    let paths = self.count(u, z) * self.count(z, v);
                    if paths > 0 {
                        *next.entry((u, v)).or_default() += paths;
                    }
                }
            }
        }
        let mut cancelled = std::collections::BTreeMap::new();
        for (&(u, v), &k) in &next {
            let back = next.get(&(v, u)).copied().unwrap_or(0);
            if k > back {
                cancelled.insert((u, v), k - back);
            }
        }
        self.arrows = cancelled;
    }
}

/// Orbit of one vertex under `k` rounds of "mutate all of `black`, then all
/// of `white`", recorded before each round.
pub fn oracle_belt_orbit(mut s: OracleSeed, black: &[usize], white: &[usize], vertex: usize, rounds: usize) -> Vec<Rational> {
    let mut out = vec![s.values[vertex].clone()];
    for _ in 0..rounds {
        for &z in black {
            s.mutate(z);
        }
        for &z in white {
            s.mutate(z);
        }
        out.push(s.values[vertex].clone());
    }
    out
}

/// Direct inequality evaluation of a labelling: returns (in-sum, out-sum)
/// computed from the arrow list.
pub fn label_sums(q: &Quiver, labels: &[Rational], z: usize) -> (Rational, Rational) {
    let mut ins = Rational::zero();
    let mut outs = Rational::zero();
    for (u, v, k) in q.arrows() {
        if v == z {
            ins += Rational::from_integer(k.into()) * &labels[u];
        }
        if u == z {
            outs += Rational::from_integer(k.into()) * &labels[v];
        }
    }
    (ins, outs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelKind {
    Strict,
    Plain,
    Weak,
}

pub fn labelling_holds(q: &Quiver, labels: &[Rational], kind: LabelKind) -> bool {
    if labels.len() != q.vertex_count() || labels.iter().any(|x| *x <= Rational::zero()) {
        return false;
    }
    let two = Rational::from_integer(2.into());
    (0..q.vertex_count()).all(|z| {
        let (ins, outs) = label_sums(q, labels, z);
        let twice = &labels[z] * &two;
        let max = if ins > outs { ins.clone() } else { outs.clone() };
        match kind {
            LabelKind::Strict => twice > max,
            LabelKind::Weak => twice >= max,
            LabelKind::Plain => twice > max || (twice == max && ins != outs),
        }
    })
}

/// Values of the recurrence `a_n = Σ c_i a_{n-i}` from `init`.
pub fn unroll(c: &[i64], init: &[i64], len: usize) -> Vec<Rational> {
    let mut a: Vec<Rational> = init.iter().map(|&x| Rational::from_integer(x.into())).collect();
    while a.len() < len {
        let n = a.len();
        let next = c
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (i, &ci)| acc + Rational::from_integer(ci.into()) * &a[n - 1 - i]);
        a.push(next);
    }
    a.truncate(len);
    a
}

/// Brute-force check of `a_n = Σ c_i a_{n-i}` over the whole window.
pub fn recurrence_holds(a: &[Rational], c: &[Rational]) -> bool {
    (c.len()..a.len()).all(|n| {
        let mut rhs = Rational::zero();
        for (i, ci) in c.iter().enumerate() {
            rhs += ci * &a[n - 1 - i];
        }
        rhs == a[n]
    })
}
