//! Graph automorphisms of G′ that carry one measure to another.

use crate::cliques::Adjacency;

/// A permutation `σ` preserving adjacency with `|a[x] - b[σ(x)]| < tol` for all `x`,
/// optionally forced to send `pin.0` to `pin.1`.
pub fn find_automorphism(adj: &Adjacency, a: &[f64], b: &[f64], tol: f64, pin: Option<(usize, usize)>) -> Option<Vec<usize>> {
    let n = adj.len();
    if a.len() != n || b.len() != n {
        return None;
    }
    let mut sigma = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if let Some((x, y)) = pin {
        if !compatible(adj, a, b, tol, x, y) {
            return None;
        }
        sigma[x] = y;
        used[y] = true;
    }
    extend(adj, a, b, tol, 0, &mut sigma, &mut used).then_some(sigma)
}

fn compatible(adj: &Adjacency, a: &[f64], b: &[f64], tol: f64, x: usize, y: usize) -> bool {
    (a[x] - b[y]).abs() < tol && adj.degree(x) == adj.degree(y)
}

fn extend(adj: &Adjacency, a: &[f64], b: &[f64], tol: f64, x: usize, sigma: &mut [usize], used: &mut [bool]) -> bool {
    let n = adj.len();
    if x == n {
        return true;
    }
    if sigma[x] != usize::MAX {
        return consistent(adj, sigma, x, sigma[x]) && extend(adj, a, b, tol, x + 1, sigma, used);
    }
    for y in 0..n {
        if used[y] || !compatible(adj, a, b, tol, x, y) || !consistent(adj, sigma, x, y) {
            continue;
        }
        sigma[x] = y;
        used[y] = true;
        if extend(adj, a, b, tol, x + 1, sigma, used) {
            return true;
        }
        sigma[x] = usize::MAX;
        used[y] = false;
    }
    false
}

fn consistent(adj: &Adjacency, sigma: &[usize], x: usize, y: usize) -> bool {
    (0..sigma.len())
        .filter(|&z| z != x && sigma[z] != usize::MAX)
        .all(|z| adj.has_edge(x, z) == adj.has_edge(y, sigma[z]))
}

/// True when some automorphism other than the identity fixes `p` up to `tol`.
pub fn has_nontrivial_symmetry(adj: &Adjacency, p: &[f64], tol: f64) -> bool {
    let n = adj.len();
    (0..n).any(|x| (x + 1..n).any(|y| find_automorphism(adj, p, p, tol, Some((x, y))).is_some()))
}

/// True when an automorphism carries `a` to `b`.
pub fn related(adj: &Adjacency, a: &[f64], b: &[f64], tol: f64) -> bool {
    find_automorphism(adj, a, b, tol, None).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_rotations() {
        let adj = Adjacency::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        let a = [0.5, 0.3, 0.2];
        let b = [0.2, 0.5, 0.3];
        assert!(related(&adj, &a, &b, 1e-9));
        assert!(!has_nontrivial_symmetry(&adj, &a, 1e-9));
        assert!(has_nontrivial_symmetry(&adj, &[0.4, 0.3, 0.3], 1e-9));
    }

    #[test]
    fn path_endpoints_are_not_the_middle() {
        let adj = Adjacency::from_edges(3, [(0, 1), (1, 2)]);
        assert!(!related(&adj, &[0.5, 0.25, 0.25], &[0.25, 0.5, 0.25], 1e-9));
        assert!(related(&adj, &[0.5, 0.3, 0.2], &[0.2, 0.3, 0.5], 1e-9));
    }
}
