//! Bipartite belt dynamics: `μ₊` mutates every black vertex, `μ₋` every white
//! one, and one unit of time is `μ₋ ∘ μ₊`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynkin::{belt_coloring, two_color};
use crate::error::{Error, Result};
use crate::quiver::{Quiver, Seed};
use crate::rational::Rational;
use crate::recurrence::RationalSequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

/// Checks that no arrow joins two mutable vertices of the same color. Frozen
/// vertices are never mutated, so their color is irrelevant.
pub fn check_coloring(q: &Quiver, coloring: &[Color]) -> Result<()> {
    if coloring.len() != q.vertex_count() {
        return Err(Error::ColoringLength { expected: q.vertex_count(), got: coloring.len() });
    }
    let clash = q.arrows().into_iter().find(|&(u, v, _)| {
        coloring[u] == coloring[v] && !q.is_frozen(u) && !q.is_frozen(v)
    });
    match clash {
        Some((from, to, _)) => Err(Error::ColorClash { from, to }),
        None => Ok(()),
    }
}

/// Proper coloring of a quiver's underlying graph with the lowest vertex of
/// each component black. Box products are colored from their metadata.
pub fn infer_coloring(q: &Quiver) -> Result<Vec<Color>> {
    if q.product_info().is_some() {
        return belt_coloring(q);
    }
    let n = q.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for (u, v, _) in q.arrows() {
        if !q.is_frozen(u) && !q.is_frozen(v) {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let classes = two_color(&adj).ok_or_else(|| Error::NotBipartite("quiver".into()))?;
    Ok(classes
        .into_iter()
        .map(|c| if c == 0 { Color::Black } else { Color::White })
        .collect())
}

fn mutate_color(seed: &Seed, coloring: &[Color], color: Color) -> Result<Seed> {
    let mut s = seed.clone();
    for v in 0..coloring.len() {
        if coloring[v] == color && !s.quiver().is_frozen(v) {
            s = s.mutate(v)?;
        }
    }
    Ok(s)
}

/// Positive rationals `p/q` with `p, q` uniform in `[1, 100]`.
pub fn random_values(n: usize, rng_seed: u64) -> Vec<Rational> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    (0..n)
        .map(|_| {
            let p: i64 = rng.gen_range(1..=100);
            let q: i64 = rng.gen_range(1..=100);
            Rational::new(p.into(), q.into())
        })
        .collect()
}

/// True iff `μ₋ μ₊` returns `q` exactly.
pub fn is_recurrent(q: &Quiver, coloring: &[Color]) -> Result<bool> {
    check_coloring(q, coloring)?;
    let mut p = q.clone();
    for color in [Color::Black, Color::White] {
        for v in 0..coloring.len() {
            if coloring[v] == color && !p.is_frozen(v) {
                p = p.mutate(v)?;
            }
        }
    }
    Ok(p.same_arrows(q))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BeltState {
    seed: Seed,
    coloring: Vec<Color>,
    time: i64,
}

impl BeltState {
    pub fn new(seed: Seed, coloring: Vec<Color>) -> Result<Self> {
        check_coloring(seed.quiver(), &coloring)?;
        Ok(BeltState { seed, coloring, time: 0 })
    }

    /// Uses the box-product coloring when available, else a BFS coloring.
    pub fn with_inferred_coloring(seed: Seed) -> Result<Self> {
        let coloring = infer_coloring(seed.quiver())?;
        BeltState::new(seed, coloring)
    }

    pub fn seed(&self) -> &Seed {
        &self.seed
    }

    pub fn coloring(&self) -> &[Color] {
        &self.coloring
    }

    pub fn time(&self) -> i64 {
        self.time
    }

    pub fn value(&self, v: usize) -> &Rational {
        self.seed.value(v)
    }

    pub fn vertices_of(&self, color: Color) -> impl Iterator<Item = usize> + '_ {
        (0..self.coloring.len()).filter(move |&v| self.coloring[v] == color)
    }

    fn half_step(&self, color: Color) -> Result<BeltState> {
        check_coloring(self.seed.quiver(), &self.coloring)?;
        Ok(BeltState {
            seed: mutate_color(&self.seed, &self.coloring, color)?,
            coloring: self.coloring.clone(),
            time: self.time,
        })
    }

    pub fn mu_plus(&self) -> Result<BeltState> {
        self.half_step(Color::Black)
    }

    pub fn mu_minus(&self) -> Result<BeltState> {
        self.half_step(Color::White)
    }

    /// `μ₊` then `μ₋`; advances time by one.
    pub fn step(&self) -> Result<BeltState> {
        let mut s = self.mu_plus()?.mu_minus()?;
        s.time = self.time + 1;
        Ok(s)
    }

    /// `μ₋` then `μ₊`; undoes [`BeltState::step`].
    pub fn inverse_step(&self) -> Result<BeltState> {
        let mut s = self.mu_minus()?.mu_plus()?;
        s.time = self.time - 1;
        Ok(s)
    }

    fn zero_context(e: Error, time: i64) -> Error {
        match e {
            Error::DivisionByZero { vertex } => Error::ZeroDuringEvolution { time, vertex },
            other => other,
        }
    }

    /// Values of `watch` at every integer time in `[-backward, forward]`.
    pub fn evolve(&self, forward: usize, backward: usize, watch: &[usize]) -> Result<Trace> {
        let n = self.seed.quiver().vertex_count();
        if let Some(&v) = watch.iter().find(|&&v| v >= n) {
            return Err(Error::BadVertex { vertex: v, count: n });
        }
        let snapshot = |s: &BeltState| -> Vec<Rational> {
            watch.iter().map(|&v| s.value(v).clone()).collect()
        };
        let mut past = Vec::with_capacity(backward);
        let mut s = self.clone();
        for _ in 0..backward {
            s = s.inverse_step().map_err(|e| Self::zero_context(e, s.time - 1))?;
            past.push(snapshot(&s));
        }
        past.reverse();
        let mut rows = past;
        s = self.clone();
        rows.push(snapshot(&s));
        for _ in 0..forward {
            s = s.step().map_err(|e| Self::zero_context(e, s.time + 1))?;
            rows.push(snapshot(&s));
        }
        let columns = (0..watch.len())
            .map(|k| rows.iter().map(|r| r[k].clone()).collect())
            .collect();
        Ok(Trace {
            t_min: self.time - backward as i64,
            vertices: watch.to_vec(),
            values: columns,
        })
    }

    /// Smallest `p <= bound` with `(μ₋μ₊)^p` fixing every value and the quiver.
    pub fn detect_period(&self, bound: usize) -> Option<usize> {
        let mut s = self.clone();
        for p in 1..=bound {
            s = s.step().ok()?;
            if s.seed.values() == self.seed.values()
                && s.seed.quiver().same_arrows(self.seed.quiver())
            {
                return Some(p);
            }
        }
        None
    }

    /// `a_t` = value at `x` after applying `word` to the seed at belt time `t`,
    /// for `t = 0..=forward`. This is the conjugated evolution of the off-belt
    /// variable reached from the initial seed by `word`.
    pub fn off_belt_trace(&self, word: &[usize], x: usize, forward: usize) -> Result<Trace> {
        let n = self.seed.quiver().vertex_count();
        if x >= n {
            return Err(Error::BadVertex { vertex: x, count: n });
        }
        let mut values = Vec::with_capacity(forward + 1);
        let mut s = self.clone();
        for t in 0..=forward {
            if t > 0 {
                s = s.step()?;
            }
            values.push(s.seed.mutate_many(word)?.value(x).clone());
        }
        Ok(Trace { t_min: self.time, vertices: vec![x], values: vec![values] })
    }
}

/// Per-vertex value series over a common time window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub t_min: i64,
    pub vertices: Vec<usize>,
    /// `values[k][t - t_min]` is the value of `vertices[k]` at time `t`.
    pub values: Vec<Vec<Rational>>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn t_max(&self) -> i64 {
        self.t_min + self.len() as i64 - 1
    }

    pub fn series(&self, vertex: usize) -> Option<&[Rational]> {
        let k = self.vertices.iter().position(|&v| v == vertex)?;
        Some(&self.values[k])
    }

    pub fn sequence(&self, vertex: usize) -> Option<RationalSequence> {
        RationalSequence::new(self.series(vertex)?.to_vec(), self.t_min).ok()
    }
}
