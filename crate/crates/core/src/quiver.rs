//! Quivers as skew-symmetric exchange matrices, seeds, and mutation.

use num_traits::{One, Pow, Signed, Zero};

use crate::dynkin::ProductInfo;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A quiver without loops or 2-cycles, stored as its exchange matrix
/// `b[u][v] = #(u -> v) - #(v -> u)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    b: Vec<Vec<i64>>,
    frozen: Vec<bool>,
    labels: Vec<Option<String>>,
    product: Option<ProductInfo>,
}

impl Quiver {
    pub fn empty(n: usize) -> Self {
        Quiver {
            b: vec![vec![0; n]; n],
            frozen: vec![false; n],
            labels: vec![None; n],
            product: None,
        }
    }

    /// Builds a quiver from `(from, to, multiplicity)` triples. Arrows listed
    /// in both directions cancel, as in the 2-cycle removal step.
    pub fn from_arrows(n: usize, arrows: &[(usize, usize, i64)]) -> Result<Self> {
        let mut q = Quiver::empty(n);
        for &(u, v, k) in arrows {
            q.add_arrows(u, v, k)?;
        }
        Ok(q)
    }

    pub fn from_matrix(b: Vec<Vec<i64>>) -> Result<Self> {
        let n = b.len();
        for (u, row) in b.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidQuiver(format!("row {u} has length {}", row.len())));
            }
            if row[u] != 0 {
                return Err(Error::InvalidQuiver(format!("loop at vertex {u}")));
            }
            for v in 0..n {
                if b[u][v] != -b[v][u] {
                    return Err(Error::InvalidQuiver(format!("b[{u}][{v}] is not skew-symmetric")));
                }
            }
        }
        Ok(Quiver { b, frozen: vec![false; n], labels: vec![None; n], product: None })
    }

    pub fn add_arrows(&mut self, from: usize, to: usize, mult: i64) -> Result<()> {
        let n = self.vertex_count();
        for v in [from, to] {
            if v >= n {
                return Err(Error::BadVertex { vertex: v, count: n });
            }
        }
        if from == to {
            return Err(Error::InvalidQuiver(format!("loop at vertex {from}")));
        }
        let updated = self.b[from][to]
            .checked_add(mult)
            .ok_or(Error::ArrowOverflow { vertex: from })?;
        self.b[from][to] = updated;
        self.b[to][from] = -updated;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.b.len()
    }

    pub fn exchange_matrix(&self) -> &[Vec<i64>] {
        &self.b
    }

    pub fn b(&self, u: usize, v: usize) -> i64 {
        self.b[u][v]
    }

    /// Number of arrows `u -> v`.
    pub fn arrows_between(&self, u: usize, v: usize) -> i64 {
        self.b[u][v].max(0)
    }

    /// All arrows as `(from, to, multiplicity)` in lexicographic order.
    pub fn arrows(&self) -> Vec<(usize, usize, i64)> {
        let n = self.vertex_count();
        (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| self.b[u][v] > 0)
            .map(|(u, v)| (u, v, self.b[u][v]))
            .collect()
    }

    pub fn is_frozen(&self, v: usize) -> bool {
        self.frozen[v]
    }

    pub fn frozen(&self) -> &[bool] {
        &self.frozen
    }

    pub fn set_frozen(&mut self, v: usize, frozen: bool) {
        self.frozen[v] = frozen;
    }

    pub fn mutable_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(|&v| !self.frozen[v])
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels[v].as_deref()
    }

    pub fn set_label(&mut self, v: usize, label: impl Into<String>) {
        self.labels[v] = Some(label.into());
    }

    /// Display name: the label if present, else the numeric id.
    pub fn name(&self, v: usize) -> String {
        self.label(v).map_or_else(|| v.to_string(), str::to_owned)
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.as_deref() == Some(label))
    }

    pub fn product_info(&self) -> Option<&ProductInfo> {
        self.product.as_ref()
    }

    pub(crate) fn set_product_info(&mut self, info: ProductInfo) {
        self.product = Some(info);
    }

    /// Same quiver with every arrow reversed.
    pub fn reversed(&self) -> Quiver {
        let mut q = self.clone();
        for row in q.b.iter_mut() {
            for x in row.iter_mut() {
                *x = -*x;
            }
        }
        q
    }

    /// Equality of arrows and frozen status, ignoring labels and metadata.
    pub fn same_arrows(&self, other: &Quiver) -> bool {
        self.b == other.b && self.frozen == other.frozen
    }

    fn check_mutable(&self, z: usize) -> Result<()> {
        let n = self.vertex_count();
        if z >= n {
            return Err(Error::BadVertex { vertex: z, count: n });
        }
        if self.frozen[z] {
            return Err(Error::FrozenVertex { vertex: z });
        }
        Ok(())
    }

    /// Mutation at a mutable vertex:
    /// `b'[u][v] = -b[u][v]` if `z ∈ {u, v}`, else
    /// `b[u][v] + sign(b[u][z]) * max(b[u][z] * b[z][v], 0)`.
    pub fn mutate(&self, z: usize) -> Result<Quiver> {
        self.check_mutable(z)?;
        let n = self.vertex_count();
        let overflow = || Error::ArrowOverflow { vertex: z };
        let mut out = self.clone();
        for u in 0..n {
            for v in 0..n {
                out.b[u][v] = if u == z || v == z {
                    -self.b[u][v]
                } else {
                    let through = self.b[u][z].checked_mul(self.b[z][v]).ok_or_else(overflow)?;
                    self.b[u][v]
                        .checked_add(self.b[u][z].signum() * through.max(0))
                        .ok_or_else(overflow)?
                };
            }
        }
        debug_assert!(out.check_invariants().is_ok());
        Ok(out)
    }

    pub fn check_invariants(&self) -> Result<()> {
        let n = self.vertex_count();
        if self.frozen.len() != n || self.labels.len() != n {
            return Err(Error::InvalidQuiver("metadata length mismatch".into()));
        }
        for u in 0..n {
            if self.b[u][u] != 0 {
                return Err(Error::InvalidQuiver(format!("loop at vertex {u}")));
            }
            for v in 0..n {
                if self.b[u][v] != -self.b[v][u] {
                    return Err(Error::InvalidQuiver(format!("b[{u}][{v}] is not skew-symmetric")));
                }
            }
        }
        Ok(())
    }
}

/// A quiver with one exact value per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    quiver: Quiver,
    values: Vec<Rational>,
}

impl Seed {
    pub fn new(quiver: Quiver, values: Vec<Rational>) -> Result<Self> {
        if values.len() != quiver.vertex_count() {
            return Err(Error::InvalidQuiver(format!(
                "{} values for {} vertices",
                values.len(),
                quiver.vertex_count()
            )));
        }
        if let Some(v) = values.iter().position(Zero::is_zero) {
            return Err(Error::DivisionByZero { vertex: v });
        }
        Ok(Seed { quiver, values })
    }

    pub fn all_ones(quiver: Quiver) -> Self {
        let n = quiver.vertex_count();
        Seed { quiver, values: vec![Rational::one(); n] }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, v: usize) -> &Rational {
        &self.values[v]
    }

    pub fn into_parts(self) -> (Quiver, Vec<Rational>) {
        (self.quiver, self.values)
    }

    pub fn is_positive(&self) -> bool {
        self.values.iter().all(Signed::is_positive)
    }

    /// The two monomials of the exchange relation at `z`: products over the
    /// incoming and over the outgoing arrows, multiplicities as exponents.
    pub fn exchange_monomials(&self, z: usize) -> (Rational, Rational) {
        let mut incoming = Rational::one();
        let mut outgoing = Rational::one();
        for (y, &bzy) in self.quiver.b[z].iter().enumerate() {
            if bzy < 0 {
                incoming *= Pow::pow(&self.values[y], bzy.unsigned_abs());
            } else if bzy > 0 {
                outgoing *= Pow::pow(&self.values[y], bzy.unsigned_abs());
            }
        }
        (incoming, outgoing)
    }

    pub fn mutate(&self, z: usize) -> Result<Seed> {
        let quiver = self.quiver.mutate(z)?;
        if self.values[z].is_zero() {
            return Err(Error::DivisionByZero { vertex: z });
        }
        let (incoming, outgoing) = self.exchange_monomials(z);
        let fresh = (incoming + outgoing) / &self.values[z];
        if fresh.is_zero() {
            return Err(Error::DivisionByZero { vertex: z });
        }
        let mut values = self.values.clone();
        values[z] = fresh;
        Ok(Seed { quiver, values })
    }

    /// Applies the word left to right.
    pub fn mutate_many(&self, word: &[usize]) -> Result<Seed> {
        word.iter().enumerate().try_fold(self.clone(), |s, (position, &z)| {
            s.mutate(z)
                .map_err(|e| Error::InWord { position, source: Box::new(e) })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn linear_a3() -> Quiver {
        Quiver::from_arrows(3, &[(0, 1, 1), (1, 2, 1)]).unwrap()
    }

    #[test]
    fn a3_mutation_at_middle() {
        let q = linear_a3().mutate(1).unwrap();
        let mut arrows = q.arrows();
        arrows.sort();
        assert_eq!(arrows, vec![(0, 2, 1), (1, 0, 1), (2, 1, 1)]);
    }

    #[test]
    fn two_cycles_cancel() {
        // 0 -> 1 -> 2 -> 0 mutated at 1 creates 0 -> 2, cancelling 2 -> 0.
        let q = Quiver::from_arrows(3, &[(0, 1, 1), (1, 2, 1), (2, 0, 1)]).unwrap();
        let m = q.mutate(1).unwrap();
        assert_eq!(m.b(0, 2), 0);
        assert_eq!(m.b(1, 0), 1);
        assert_eq!(m.b(2, 1), 1);
    }

    #[test]
    fn frozen_and_bad_vertices_rejected() {
        let mut q = linear_a3();
        q.set_frozen(0, true);
        assert!(matches!(q.mutate(0), Err(Error::FrozenVertex { vertex: 0 })));
        assert!(matches!(q.mutate(7), Err(Error::BadVertex { vertex: 7, count: 3 })));
    }

    #[test]
    fn frozen_vertices_enter_exchange_products() {
        let mut q = Quiver::from_arrows(2, &[(0, 1, 2)]).unwrap();
        q.set_frozen(0, true);
        let s = Seed::new(q, vec![int(3), int(2)]).unwrap();
        let m = s.mutate(1).unwrap();
        assert_eq!(m.value(1), &ratio(10, 2));
        assert_eq!(m.value(0), &int(3));
    }

    #[test]
    fn seed_rejects_zero_values() {
        assert!(matches!(
            Seed::new(linear_a3(), vec![int(1), int(0), int(1)]),
            Err(Error::DivisionByZero { vertex: 1 })
        ));
    }

    #[test]
    fn word_errors_carry_position() {
        let mut q = linear_a3();
        q.set_frozen(2, true);
        let s = Seed::all_ones(q);
        match s.mutate_many(&[0, 1, 2]) {
            Err(Error::InWord { position: 2, source }) => {
                assert!(matches!(*source, Error::FrozenVertex { vertex: 2 }))
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(s.mutate_many(&[]).unwrap(), s);
        assert_eq!(s.mutate_many(&[1, 1]).unwrap(), s);
    }

    #[test]
    fn from_matrix_validates() {
        assert!(Quiver::from_matrix(vec![vec![0, 1], vec![1, 0]]).is_err());
        assert!(Quiver::from_matrix(vec![vec![1, 0], vec![0, -1]]).is_err());
        assert!(Quiver::from_matrix(vec![vec![0, 2], vec![-2, 0]]).is_ok());
    }
}
