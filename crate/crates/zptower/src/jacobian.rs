//! Laplacians, Picard and Jacobian groups, spanning-tree counts, and p-adic
//! valuations for finite graphs.

use crate::graph::{Graph, GraphError, VertexIdx};
use crate::intlinalg::{cokernel, determinant, AbelianGroupPresentation, IntMatrix};
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum JacobianError {
    #[error("graph is not connected")]
    NotConnected,
    #[error("ord_p is undefined at 0")]
    OrdOfZero,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Finitely supported integer divisor on the vertices of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Divisor {
    coeffs: BTreeMap<VertexIdx, BigInt>,
}

impl Divisor {
    pub fn zero() -> Self {
        Divisor::default()
    }

    pub fn from_pairs(pairs: &[(VertexIdx, i64)]) -> Self {
        let mut d = Divisor::zero();
        for &(v, c) in pairs {
            d.add_to(v, &BigInt::from(c));
        }
        d
    }

    pub fn add_to(&mut self, v: VertexIdx, c: &BigInt) {
        let entry = self.coeffs.entry(v).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&v);
        }
    }

    pub fn coefficient(&self, v: VertexIdx) -> BigInt {
        self.coeffs.get(&v).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = (&VertexIdx, &BigInt)> {
        self.coeffs.iter()
    }

    pub fn sub(&self, rhs: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (v, c) in &rhs.coeffs {
            out.add_to(*v, &(-c));
        }
        out
    }

    pub fn to_vec(&self, n: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); n];
        for (&i, c) in &self.coeffs {
            v[i] = c.clone();
        }
        v
    }
}

/// Graph Laplacian D − A. Loops cancel: they add 2 to the degree and 2 to the
/// adjacency diagonal. Every row and column sums to zero.
pub fn laplacian(g: &Graph) -> IntMatrix {
    let n = g.vertex_count();
    let mut m = IntMatrix::zero(n, n);
    for v in 0..n {
        let deg = g.degree(v).expect("vertex in range");
        m[(v, v)] = BigInt::from(deg as i64 - 2 * g.loops_at(v) as i64);
        for w in 0..n {
            if w != v {
                m[(v, w)] = BigInt::from(-(g.edges_between(v, w) as i64));
            }
        }
    }
    m
}

/// Number of spanning trees, as the determinant of a principal minor of the
/// Laplacian. Verified against a second deleted vertex.
pub fn kappa(g: &Graph) -> Result<BigUint, JacobianError> {
    if !g.is_connected() {
        return Err(JacobianError::NotConnected);
    }
    let l = laplacian(g);
    if g.vertex_count() == 1 {
        return Ok(BigUint::from(1u32));
    }
    // Fraction-free elimination for small minors, the CRT backend for large
    // ones; the two backends are cross-checked against each other in tests.
    let det = |m: &IntMatrix| -> BigInt {
        if m.rows() >= 48 {
            crate::intlinalg::determinant_crt(m).expect("square minor")
        } else {
            determinant(m).expect("square minor")
        }
    };
    let det0 = det(&l.minor(0, 0));
    let det1 = det(&l.minor(1, 1));
    assert_eq!(det0, det1, "kappa must not depend on the deleted vertex");
    Ok(det0.to_biguint().expect("tree count is positive"))
}

/// Jacobian group: the torsion of the full Laplacian's cokernel. The free
/// rank of that cokernel must be 1, which doubles as a connectivity check.
pub fn jacobian_invariants(g: &Graph) -> Result<AbelianGroupPresentation, JacobianError> {
    if !g.is_connected() {
        return Err(JacobianError::NotConnected);
    }
    let coker = cokernel(&laplacian(g));
    assert_eq!(coker.free_rank(), 1, "connected graph has Pic of rank 1");
    Ok(coker.torsion())
}

/// Picard group: the cokernel of the full Laplacian (rank = number of
/// components).
pub fn picard_invariants(g: &Graph) -> Result<AbelianGroupPresentation, JacobianError> {
    g.validate().map_err(|v| JacobianError::Graph(GraphError::Invalid(v)))?;
    Ok(cokernel(&laplacian(g)))
}

/// Largest k with p^k | x; undefined (signaled) at x = 0.
pub fn ord_p(x: &BigUint, p: u64) -> Result<u32, JacobianError> {
    if x.is_zero() {
        return Err(JacobianError::OrdOfZero);
    }
    let p = BigUint::from(p);
    let mut v = x.clone();
    let mut k = 0;
    loop {
        let (q, r) = num_integer::Integer::div_rem(&v, &p);
        if !r.is_zero() {
            return Ok(k);
        }
        v = q;
        k += 1;
    }
}

/// Whether two divisors lie in the same Picard class: their difference must be
/// an integer combination of Laplacian columns.
pub fn same_class(g: &Graph, a: &Divisor, b: &Divisor) -> bool {
    let l = laplacian(g);
    let rhs = a.sub(b).to_vec(g.vertex_count());
    matches!(crate::intlinalg::solve_integer(&l, &rhs), Ok(Some(_)))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, cycle_graph, triangle, GraphBuilder};

    #[test]
    fn laplacian_loop_cancels() {
        let mut b = GraphBuilder::new();
        b.vertex("v");
        b.edge("l", "v", "v");
        let g = b.build();
        let l = laplacian(&g);
        assert!(l[(0, 0)].is_zero());
        assert_eq!(kappa(&g).unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn laplacian_c3() {
        let l = laplacian(&cycle_graph(3));
        let expect = IntMatrix::from_i64(&[&[2, -1, -1], &[-1, 2, -1], &[-1, -1, 2]]);
        assert_eq!(l, expect);
    }

    #[test]
    fn laplacian_two_parallel_edges() {
        let mut b = GraphBuilder::new();
        b.vertex("R");
        b.vertex("U");
        b.edge("t", "R", "U");
        b.edge("s", "R", "U");
        let l = laplacian(&b.build());
        assert_eq!(l, IntMatrix::from_i64(&[&[2, -2], &[-2, 2]]));
    }

    #[test]
    fn laplacian_rows_and_cols_sum_to_zero() {
        for g in [triangle(), cycle_graph(6), complete_graph(&["a", "b", "c", "d"])] {
            let l = laplacian(&g);
            let n = g.vertex_count();
            for i in 0..n {
                let row: BigInt = (0..n).map(|j| l[(i, j)].clone()).sum();
                let col: BigInt = (0..n).map(|j| l[(j, i)].clone()).sum();
                assert!(row.is_zero() && col.is_zero());
                for j in 0..n {
                    assert_eq!(l[(i, j)], l[(j, i)], "Laplacian is symmetric");
                }
            }
        }
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(&cycle_graph(6)).unwrap(), BigUint::from(6u32));
        assert_eq!(oracle::spanning_trees(&cycle_graph(6)), 6);

        // Flower with 3 leaves of 2 parallel edges each: 2 choices per leaf.
        let mut b = GraphBuilder::new();
        b.vertex("R");
        for i in 0..3 {
            let u = format!("U{i}");
            b.vertex(&u);
            b.edge(&format!("t{i}"), "R", &u);
            b.edge(&format!("s{i}"), "R", &u);
        }
        let flower = b.build();
        assert_eq!(kappa(&flower).unwrap(), BigUint::from(8u32));
        assert_eq!(oracle::spanning_trees(&flower), 8);

        assert!(kappa(&Graph::from_parts(vec!["a".into(), "b".into()], vec![])).is_err());
    }

    #[test]
    fn kappa_matches_oracle_on_small_graphs() {
        let graphs = vec![
            triangle(),
            cycle_graph(4),
            cycle_graph(5),
            complete_graph(&["a", "b", "c", "d"]),
        ];
        for g in graphs {
            assert_eq!(
                kappa(&g).unwrap(),
                BigUint::from(oracle::spanning_trees(&g)),
                "graph with {} vertices",
                g.vertex_count()
            );
        }
    }

    #[test]
    fn kappa_invariant_under_relabeling() {
        // Same K4 built with vertices declared in a different order.
        let a = complete_graph(&["a", "b", "c", "d"]);
        let b = complete_graph(&["d", "c", "b", "a"]);
        assert_eq!(kappa(&a).unwrap(), kappa(&b).unwrap());
    }

    #[test]
    fn jacobian_examples() {
        let j = jacobian_invariants(&cycle_graph(3)).unwrap();
        assert_eq!(j.invariant_factors(), &[BigUint::from(3u32)]);

        let j = jacobian_invariants(&complete_graph(&["a", "b", "c", "d"])).unwrap();
        assert_eq!(j.invariant_factors(), &[BigUint::from(4u32), BigUint::from(4u32)]);
        assert_eq!(j.torsion_order(), BigUint::from(16u32));

        let mut b = GraphBuilder::new();
        b.vertex("A");
        b.vertex("B");
        b.vertex("C");
        b.edge("ab", "A", "B");
        b.edge("bc", "B", "C");
        let path = b.build();
        assert!(jacobian_invariants(&path).unwrap().is_trivial());
    }

    #[test]
    fn kirchhoff_cross_check() {
        for g in [triangle(), cycle_graph(5), complete_graph(&["a", "b", "c", "d"])] {
            let j = jacobian_invariants(&g).unwrap();
            assert_eq!(j.torsion_order(), kappa(&g).unwrap());
        }
    }

    #[test]
    fn picard_examples() {
        let p = picard_invariants(&cycle_graph(3)).unwrap();
        assert_eq!(p.free_rank(), 1);
        assert_eq!(p.invariant_factors(), &[BigUint::from(3u32)]);

        let single = Graph::from_parts(vec!["v".into()], vec![]);
        let p = picard_invariants(&single).unwrap();
        assert_eq!(p.free_rank(), 1);
        assert!(p.invariant_factors().is_empty());

        // Two isolated loops: one Z per component.
        let mut b = GraphBuilder::new();
        b.vertex("a");
        b.vertex("b");
        b.edge("la", "a", "a");
        b.edge("lb", "b", "b");
        let p = picard_invariants(&b.build()).unwrap();
        assert_eq!(p.free_rank(), 2);
    }

    #[test]
    fn ord_p_examples() {
        assert_eq!(ord_p(&BigUint::from(8u32), 2).unwrap(), 3);
        assert_eq!(ord_p(&BigUint::from(6u32), 3).unwrap(), 1);
        assert_eq!(ord_p(&kappa(&cycle_graph(6)).unwrap(), 2).unwrap(), 1);
        assert!(ord_p(&BigUint::zero(), 2).is_err());
    }
}
