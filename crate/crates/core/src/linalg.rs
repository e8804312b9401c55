//! Dense linear solves and graph decomposition for small Markov chains.

use crate::scalar::Scalar;

/// Solves `a · x = b` in place by Gaussian elimination with partial pivoting.
///
/// `a` is row-major `n × n`. Returns `None` when a pivot vanishes.
pub fn solve_dense<T: Scalar>(mut a: Vec<T>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    debug_assert_eq!(a.len(), n * n);
    let tiny = T::epsilon() * T::lit(16.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                a[i * n + col]
                    .abs()
                    .partial_cmp(&a[j * n + col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty pivot range");
        if a[pivot * n + col].abs() <= tiny {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            b.swap(pivot, col);
        }
        let diag = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / diag;
            if factor == T::zero() {
                continue;
            }
            for k in col..n {
                let v = a[col * n + k];
                a[row * n + k] = a[row * n + k] - factor * v;
            }
            b[row] = b[row] - factor * b[col];
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc = acc - a[row * n + k] * x[k];
        }
        x[row] = acc / a[row * n + row];
    }
    Some(x)
}

/// Strongly connected components of the support graph of a row-stochastic
/// matrix, together with whether each component is closed (recurrent).
#[derive(Debug, Clone)]
pub struct ChainClasses {
    /// Component id per state.
    pub class_of: Vec<usize>,
    /// States of each component, ascending.
    pub members: Vec<Vec<usize>>,
    /// `true` when no positive-probability edge leaves the component.
    pub closed: Vec<bool>,
}

impl ChainClasses {
    /// Decomposes the chain whose support is `edge(i, j)`.
    pub fn decompose(n: usize, edge: impl Fn(usize, usize) -> bool) -> Self {
        let mut reach = vec![false; n * n];
        for i in 0..n {
            reach[i * n + i] = true;
            for j in 0..n {
                if edge(i, j) {
                    reach[i * n + j] = true;
                }
            }
        }
        // Warshall closure; chains here have at most a few hundred states.
        for k in 0..n {
            for i in 0..n {
                if reach[i * n + k] {
                    for j in 0..n {
                        if reach[k * n + j] {
                            reach[i * n + j] = true;
                        }
                    }
                }
            }
        }
        let mut class_of = vec![usize::MAX; n];
        let mut members: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            if class_of[i] != usize::MAX {
                continue;
            }
            let id = members.len();
            let group: Vec<usize> = (i..n)
                .filter(|&j| reach[i * n + j] && reach[j * n + i])
                .collect();
            for &j in &group {
                class_of[j] = id;
            }
            members.push(group);
        }
        let closed = members
            .iter()
            .map(|group| {
                group
                    .iter()
                    .all(|&i| (0..n).all(|j| !edge(i, j) || class_of[j] == class_of[i]))
            })
            .collect();
        Self {
            class_of,
            members,
            closed,
        }
    }

    pub fn is_recurrent(&self, state: usize) -> bool {
        self.closed[self.class_of[state]]
    }
}

/// Stationary distribution of the closed class `states` of the row-stochastic
/// `n × n` matrix `p`, returned in the order of `states`.
pub fn stationary_distribution<T: Scalar>(p: &[T], n: usize, states: &[usize]) -> Option<Vec<T>> {
    let m = states.len();
    if m == 1 {
        return Some(vec![T::one()]);
    }
    // Solve π (P - I) = 0 with the last balance equation replaced by Σ π = 1.
    let mut a = vec![T::zero(); m * m];
    let mut b = vec![T::zero(); m];
    for (row, &j) in states.iter().enumerate().take(m - 1) {
        for (col, &i) in states.iter().enumerate() {
            let mut v = p[i * n + j];
            if i == j {
                v = v - T::one();
            }
            a[row * m + col] = v;
        }
    }
    for col in 0..m {
        a[(m - 1) * m + col] = T::one();
    }
    b[m - 1] = T::one();
    solve_dense(a, b)
}
