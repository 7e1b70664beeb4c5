use std::collections::BTreeSet;
use std::ops::Range;

use nalgebra::DMatrix;
use serde::Serialize;

/// Symmetric permutation to block upper triangular form with irreducible
/// diagonal blocks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalForm {
    /// `perm[p]` is the original index placed at position `p`.
    pub perm: Vec<usize>,
    /// Ranges of positions in `perm`, one per diagonal block.
    pub blocks: Vec<Range<usize>>,
}

impl NormalForm {
    /// Original indices of block `b`.
    pub fn block_indices(&self, b: usize) -> &[usize] {
        &self.perm[self.blocks[b].clone()]
    }

    pub fn is_irreducible(&self) -> bool {
        self.blocks.len() == 1
    }

    /// The permuted matrix `P A Pᵀ`.
    pub fn permute(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        let n = self.perm.len();
        DMatrix::from_fn(n, n, |i, j| a[(self.perm[i], self.perm[j])])
    }
}

/// Strongly connected components of the digraph `i → j` for `a[i][j] > tol`.
fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut counter = 0;

    for start in 0..n {
        if index[start] != usize::MAX {
            continue;
        }
        // (node, next child position)
        let mut call: Vec<(usize, usize)> = vec![(start, 0)];
        index[start] = counter;
        low[start] = counter;
        counter += 1;
        stack.push(start);
        on_stack[start] = true;

        while let Some(&(v, pos)) = call.last() {
            if let Some(&w) = adj[v].get(pos) {
                call.last_mut().expect("non-empty").1 += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut component = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component.push(w);
                    if w == v {
                        break;
                    }
                }
                component.sort_unstable();
                components.push(component);
            }
        }
    }
    components
}

/// Frobenius normal form of a non-negative matrix. Components are ordered so
/// that every edge between blocks points forward; among components with no
/// ordering constraint the one with the smallest original index comes first.
pub fn frobenius_normal_form(a: &DMatrix<f64>, tol: f64) -> NormalForm {
    let n = a.nrows();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| a[(i, j)] > tol).collect())
        .collect();
    let components = tarjan(&adj);

    let mut comp_of = vec![0; n];
    for (c, members) in components.iter().enumerate() {
        for &v in members {
            comp_of[v] = c;
        }
    }
    let k = components.len();
    let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
    let mut indegree = vec![0usize; k];
    for (i, targets) in adj.iter().enumerate() {
        for &j in targets {
            let (ci, cj) = (comp_of[i], comp_of[j]);
            if ci != cj && succ[ci].insert(cj) {
                indegree[cj] += 1;
            }
        }
    }

    // Kahn's algorithm keyed by the smallest original index of each component
    let mut ready: BTreeSet<(usize, usize)> = (0..k)
        .filter(|&c| indegree[c] == 0)
        .map(|c| (components[c][0], c))
        .collect();
    let mut perm = Vec::with_capacity(n);
    let mut blocks = Vec::with_capacity(k);
    while let Some(&(key, c)) = ready.iter().next() {
        ready.remove(&(key, c));
        let start = perm.len();
        perm.extend_from_slice(&components[c]);
        blocks.push(start..perm.len());
        for &next in &succ[c] {
            indegree[next] -= 1;
            if indegree[next] == 0 {
                ready.insert((components[next][0], next));
            }
        }
    }
    NormalForm { perm, blocks }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_block_upper(a: &DMatrix<f64>, nf: &NormalForm) -> bool {
        let p = nf.permute(a);
        let block_of = |pos: usize| nf.blocks.iter().position(|r| r.contains(&pos)).unwrap();
        (0..p.nrows()).all(|i| (0..p.ncols()).all(|j| p[(i, j)] == 0.0 || block_of(i) <= block_of(j)))
    }

    #[test]
    fn irreducible_single_block() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let nf = frobenius_normal_form(&a, 1e-12);
        assert!(nf.is_irreducible());
        assert_eq!(nf.perm, vec![0, 1]);
    }

    #[test]
    fn triangular_stays_in_place() {
        let a = DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.0, 0.5]);
        let nf = frobenius_normal_form(&a, 1e-12);
        assert_eq!(nf.perm, vec![0, 1]);
        assert_eq!(nf.blocks, vec![0..1, 1..2]);
    }

    #[test]
    fn lower_triangular_is_reversed() {
        let a = DMatrix::from_row_slice(3, 3, &[0.5, 0.0, 0.0, 0.2, 0.5, 0.0, 0.0, 0.3, 0.5]);
        let nf = frobenius_normal_form(&a, 1e-12);
        assert_eq!(nf.perm, vec![2, 1, 0]);
        assert!(is_block_upper(&a, &nf));
    }

    #[test]
    fn embedded_cycle() {
        let a = DMatrix::from_row_slice(3, 3, &[0.0, 0.5, 0.0, 0.5, 0.0, 0.0, 0.0, 0.5, 1.0]);
        let nf = frobenius_normal_form(&a, 1e-12);
        assert_eq!(nf.perm, vec![2, 0, 1]);
        assert_eq!(nf.blocks, vec![0..1, 1..3]);
        assert!(is_block_upper(&a, &nf));
    }

    #[test]
    fn zero_matrix_gives_singletons_in_index_order() {
        let a = DMatrix::zeros(4, 4);
        let nf = frobenius_normal_form(&a, 1e-12);
        assert_eq!(nf.perm, vec![0, 1, 2, 3]);
        assert_eq!(nf.blocks.len(), 4);
    }
}
