//! Finite groups given by multiplication tables.
//!
//! These carry the labels of transitions in labeled groupoids (the hidden
//! register permutations of a ratchet, for instance).

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::GroupError;

/// A finite group stored as a dense Cayley table.
///
/// `table[a][b]` is the index of the product `a·b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a Cayley table and derives identity and inverses.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let order = table.len();
        if order == 0 {
            return Err(GroupError::Empty);
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(GroupError::RaggedRow { row: a, len: row.len(), order });
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= order) {
                return Err(GroupError::OutOfRange { value: bad, order });
            }
            if !is_permutation(row.iter().copied(), order) {
                return Err(GroupError::NotLatin { row: Some(a), col: None });
            }
        }
        for b in 0..order {
            if !is_permutation(table.iter().map(|row| row[b]), order) {
                return Err(GroupError::NotLatin { row: None, col: Some(b) });
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or(GroupError::NoIdentity)?;
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        // Latin rows guarantee a unique right inverse; associativity makes it two-sided.
        let inverse = (0..order).map(|a| table[a].iter().position(|&x| x == identity).unwrap()).collect();
        Ok(Self { order, table, identity, inverse })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// The cyclic group Z_k; element `j` stands for σ^j.
    pub fn cyclic(k: usize) -> Self {
        assert!(k > 0, "cyclic group of order zero");
        let table = (0..k).map(|a| (0..k).map(|b| (a + b) % k).collect()).collect();
        let inverse = (0..k).map(|a| (k - a) % k).collect();
        Self { order: k, table, identity: 0, inverse }
    }

    /// Closure of a set of permutations of `0..degree` under composition.
    ///
    /// Elements are numbered in breadth-first discovery order with the
    /// identity permutation first. The product `a·b` is "apply `b`, then `a`".
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Result<Self, GroupError> {
        for g in generators {
            if g.len() != degree || !is_permutation(g.iter().copied(), degree) {
                return Err(GroupError::BadPermutation(g.clone()));
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut index = BTreeMap::new();
        let mut elements = vec![identity.clone()];
        index.insert(identity, 0usize);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let p = compose_perm(g, &elements[i]);
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }
        let table = elements.iter().map(|a| elements.iter().map(|b| index[&compose_perm(a, b)]).collect()).collect();
        Self::from_table(table)
    }

    /// The symmetric group on `n` letters.
    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n > 1 {
            let mut transposition: Vec<usize> = (0..n).collect();
            transposition.swap(0, 1);
            let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            gens.push(transposition);
            gens.push(cycle);
        }
        Self::from_permutations(n.max(1), &gens).expect("generators are permutations")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.table[a][b] == self.table[b][a]))
    }
}

fn is_permutation(values: impl Iterator<Item = usize>, n: usize) -> bool {
    let mut seen = vec![false; n];
    let mut count = 0;
    for v in values {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
        count += 1;
    }
    count == n
}

fn compose_perm(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_three_matches_rotation() {
        let z3 = FiniteGroup::cyclic(3);
        assert_eq!(z3.table(), &[vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]);
        assert_eq!(z3.inverse(1), 2);
        assert_eq!(FiniteGroup::from_table(z3.table().to_vec()).unwrap(), z3);
    }

    #[test]
    fn three_cycle_generates_z3() {
        let g = FiniteGroup::from_permutations(3, &[vec![1, 2, 0]]).unwrap();
        assert_eq!(g.order(), 3);
        assert!(g.is_abelian());
        assert_eq!(g.mul(1, 1), 2);
    }

    #[test]
    fn symmetric_three_is_nonabelian() {
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        for a in 0..6 {
            assert_eq!(s3.mul(a, s3.inverse(a)), s3.identity());
        }
    }

    #[test]
    fn rejects_non_permutation_row() {
        let err = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(matches!(err, GroupError::NotLatin { row: Some(1), .. }));
    }

    #[test]
    fn rejects_latin_square_without_identity() {
        let err = FiniteGroup::from_table(vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]]).unwrap_err();
        assert_eq!(err, GroupError::NoIdentity);
    }

    #[test]
    fn rejects_non_associative_loop() {
        // A Latin square with identity 0 that is not associative (order-5 loop).
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_table(t), Err(GroupError::NotAssociative { .. })));
    }
}
