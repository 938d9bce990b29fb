//! Subadditive vertex labellings.
//!
//! A labelling `ν > 0` is weakly subadditive when
//! `ν(z) >= ½ max(in(z), out(z))` at every vertex, where `in(z)` and `out(z)`
//! sum the labels over incoming and outgoing arrows with multiplicity. It is
//! subadditive when in addition every vertex attaining equality has
//! `in(z) != out(z)`, and strictly subadditive when no vertex attains equality.
//!
//! Existence is decided with exact linear programs. The `max` splits into two
//! linear constraints. Plain subadditivity is disjunctive, so tightness
//! patterns are enumerated.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::belt::{infer_coloring, is_recurrent};
use crate::error::{Error, Result};
use crate::quiver::Quiver;
use crate::rational::{int, Rational};
use crate::simplex::{LinearProgram, LpOutcome, Relation};

pub const PATTERN_CAP: usize = 16;

#[derive(Clone, Debug)]
pub struct LabellingProblem {
    n: usize,
    /// `weight[y][z]` = number of arrows `y -> z`.
    weight: Vec<Vec<i64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Strict,
    PlainOnly,
    WeakOnly,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tightness {
    Slack,
    TightIn,
    TightOut,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabellingResult {
    pub classification: Classification,
    pub labels: Option<Vec<Rational>>,
    pub tight_pattern: Option<Vec<Tightness>>,
    /// `None` when no proper coloring exists to test recurrence against.
    pub recurrent: Option<bool>,
}

impl LabellingProblem {
    pub fn new(q: &Quiver) -> Result<Self> {
        let n = q.vertex_count();
        if n == 0 {
            return Err(Error::DegenerateInput("labelling needs at least one vertex".into()));
        }
        if let Some(v) = q.frozen().iter().position(|&f| f) {
            return Err(Error::DegenerateInput(format!(
                "labelling problems have no frozen vertices; vertex {v} is frozen"
            )));
        }
        let weight = (0..n)
            .map(|y| (0..n).map(|z| q.arrows_between(y, z)).collect())
            .collect();
        Ok(LabellingProblem { n, weight })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Coefficient rows of `in(z)` and `out(z)` as linear forms in `ν`.
    fn in_form(&self, z: usize) -> Vec<i64> {
        (0..self.n).map(|y| self.weight[y][z]).collect()
    }

    fn out_form(&self, z: usize) -> Vec<i64> {
        (0..self.n).map(|y| self.weight[z][y]).collect()
    }

    pub fn in_sum(&self, labels: &[Rational], z: usize) -> Rational {
        labels
            .iter()
            .zip(self.in_form(z))
            .fold(Rational::zero(), |acc, (l, w)| acc + l * int(w))
    }

    pub fn out_sum(&self, labels: &[Rational], z: usize) -> Rational {
        labels
            .iter()
            .zip(self.out_form(z))
            .fold(Rational::zero(), |acc, (l, w)| acc + l * int(w))
    }

    /// Builds `2ν(z) - form(ν) - extra·t` as a row over `[ν..., t]`.
    fn row(&self, z: usize, form: &[i64], t_coeff: i64) -> Vec<Rational> {
        let mut r: Vec<Rational> = form.iter().map(|&w| int(-w)).collect();
        r[z] += int(2);
        r.push(int(-t_coeff));
        r
    }

    fn normalization(&self) -> Vec<Rational> {
        let mut r = vec![Rational::one(); self.n];
        r.push(Rational::zero());
        r
    }

    fn floor_row(&self, z: usize) -> Vec<Rational> {
        let mut r = vec![Rational::zero(); self.n + 1];
        r[z] = Rational::one();
        r[self.n] = -Rational::one();
        r
    }

    /// Maximizes the margin `t >= 0` in an LP over `[ν..., t]`; returns the
    /// labels when the optimum is positive.
    fn positive_margin(&self, lp: LinearProgram) -> Option<Vec<Rational>> {
        match lp.solve() {
            LpOutcome::Optimal { value, mut x } if value.is_positive() => {
                x.truncate(self.n);
                Some(x)
            }
            _ => None,
        }
    }

    fn margin_lp(&self) -> LinearProgram {
        let mut lp = LinearProgram::new(self.n + 1);
        lp.objective[self.n] = Rational::one();
        lp.add(self.normalization(), Relation::Eq, Rational::one());
        lp
    }

    pub fn find_strict(&self) -> Option<Vec<Rational>> {
        let mut lp = self.margin_lp();
        for z in 0..self.n {
            lp.add(self.row(z, &self.in_form(z), 1), Relation::Ge, Rational::zero());
            lp.add(self.row(z, &self.out_form(z), 1), Relation::Ge, Rational::zero());
            lp.add(self.floor_row(z), Relation::Ge, Rational::zero());
        }
        self.positive_margin(lp)
    }

    pub fn find_weak(&self) -> Option<Vec<Rational>> {
        let mut lp = self.margin_lp();
        for z in 0..self.n {
            lp.add(self.row(z, &self.in_form(z), 0), Relation::Ge, Rational::zero());
            lp.add(self.row(z, &self.out_form(z), 0), Relation::Ge, Rational::zero());
            lp.add(self.floor_row(z), Relation::Ge, Rational::zero());
        }
        self.positive_margin(lp)
    }

    /// LP for a partial pattern. Unassigned vertices carry only the weak
    /// inequalities, which every status implies, so an infeasible partial
    /// pattern has no feasible completion.
    fn pattern_lp(&self, pattern: &[Option<Tightness>]) -> LinearProgram {
        let mut lp = self.margin_lp();
        for (z, &p) in pattern.iter().enumerate() {
            let (inf, outf) = (self.in_form(z), self.out_form(z));
            match p {
                None => {
                    lp.add(self.row(z, &inf, 0), Relation::Ge, Rational::zero());
                    lp.add(self.row(z, &outf, 0), Relation::Ge, Rational::zero());
                }
                Some(Tightness::Slack) => {
                    lp.add(self.row(z, &inf, 1), Relation::Ge, Rational::zero());
                    lp.add(self.row(z, &outf, 1), Relation::Ge, Rational::zero());
                }
                Some(p) => {
                    let (tight, other) = if p == Tightness::TightIn { (&inf, &outf) } else { (&outf, &inf) };
                    lp.add(self.row(z, tight, 0), Relation::Eq, Rational::zero());
                    // tight - other - t >= 0
                    let mut gap: Vec<Rational> =
                        tight.iter().zip(other).map(|(a, b)| int(a - b)).collect();
                    gap.push(-Rational::one());
                    lp.add(gap, Relation::Ge, Rational::zero());
                }
            }
            lp.add(self.floor_row(z), Relation::Ge, Rational::zero());
        }
        lp
    }

    /// A subadditive labelling and the tightness pattern it realizes.
    ///
    /// Depth-first over per-vertex statuses in vertex order, trying slack,
    /// tight-in, tight-out; branches whose partial LP has no positive margin
    /// are cut.
    pub fn find_plain(&self) -> Result<Option<(Vec<Rational>, Vec<Tightness>)>> {
        if self.n > PATTERN_CAP {
            return Err(Error::TooLarge { vertices: self.n, cap: PATTERN_CAP });
        }
        if let Some(labels) = self.find_strict() {
            return Ok(Some((labels, vec![Tightness::Slack; self.n])));
        }
        let mut pattern = vec![None; self.n];
        Ok(self.search(&mut pattern, 0))
    }

    fn search(&self, pattern: &mut [Option<Tightness>], z: usize) -> Option<(Vec<Rational>, Vec<Tightness>)> {
        for status in [Tightness::Slack, Tightness::TightIn, Tightness::TightOut] {
            if self.status_impossible(z, status) {
                continue;
            }
            pattern[z] = Some(status);
            if let Some(labels) = self.positive_margin(self.pattern_lp(pattern)) {
                if z + 1 == self.n {
                    let full = pattern.iter().map(|p| p.expect("assigned")).collect();
                    return Some((labels, full));
                }
                if let Some(found) = self.search(pattern, z + 1) {
                    return Some(found);
                }
            }
        }
        pattern[z] = None;
        None
    }

    /// A vertex with no incoming arrows cannot be tight on its in-sum, since
    /// the label would be zero.
    fn status_impossible(&self, z: usize, status: Tightness) -> bool {
        match status {
            Tightness::Slack => false,
            Tightness::TightIn => self.in_form(z).iter().all(|&w| w == 0),
            Tightness::TightOut => self.out_form(z).iter().all(|&w| w == 0),
        }
    }

    /// Checks the defining inequalities directly.
    pub fn verify_weak(&self, labels: &[Rational]) -> bool {
        labels.len() == self.n
            && labels.iter().all(Signed::is_positive)
            && (0..self.n).all(|z| {
                let twice = &labels[z] * int(2);
                twice >= self.in_sum(labels, z) && twice >= self.out_sum(labels, z)
            })
    }

    pub fn verify_strict(&self, labels: &[Rational]) -> bool {
        labels.len() == self.n
            && labels.iter().all(Signed::is_positive)
            && (0..self.n).all(|z| {
                let twice = &labels[z] * int(2);
                twice > self.in_sum(labels, z) && twice > self.out_sum(labels, z)
            })
    }

    pub fn verify_plain(&self, labels: &[Rational]) -> bool {
        self.verify_weak(labels)
            && (0..self.n).all(|z| {
                let twice = &labels[z] * int(2);
                let (i, o) = (self.in_sum(labels, z), self.out_sum(labels, z));
                let max = if i > o { &i } else { &o };
                twice != *max || i != o
            })
    }

    pub fn tightness_of(&self, labels: &[Rational]) -> Vec<Tightness> {
        (0..self.n)
            .map(|z| {
                let twice = &labels[z] * int(2);
                let (i, o) = (self.in_sum(labels, z), self.out_sum(labels, z));
                if twice == i && i > o {
                    Tightness::TightIn
                } else if twice == o && o > i {
                    Tightness::TightOut
                } else {
                    Tightness::Slack
                }
            })
            .collect()
    }
}

pub fn classify(q: &Quiver) -> Result<LabellingResult> {
    let p = LabellingProblem::new(q)?;
    let recurrent = match infer_coloring(q) {
        Ok(c) => Some(is_recurrent(q, &c)?),
        Err(_) => None,
    };
    if let Some(labels) = p.find_strict() {
        return Ok(LabellingResult {
            classification: Classification::Strict,
            tight_pattern: Some(vec![Tightness::Slack; p.n]),
            labels: Some(labels),
            recurrent,
        });
    }
    if let Some((labels, pattern)) = p.find_plain()? {
        return Ok(LabellingResult {
            classification: Classification::PlainOnly,
            labels: Some(labels),
            tight_pattern: Some(pattern),
            recurrent,
        });
    }
    if let Some(labels) = p.find_weak() {
        return Ok(LabellingResult {
            classification: Classification::WeakOnly,
            labels: Some(labels),
            tight_pattern: None,
            recurrent,
        });
    }
    Ok(LabellingResult { classification: Classification::None, labels: None, tight_pattern: None, recurrent })
}
