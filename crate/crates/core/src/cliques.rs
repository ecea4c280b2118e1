//! Clique enumeration on small simple graphs given as sorted adjacency lists.

/// Sorted adjacency lists of a simple undirected graph on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adjacency {
    lists: Vec<Vec<usize>>,
}

impl Adjacency {
    /// Builds adjacency lists from an edge iterator. Self-loops and duplicates are dropped.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut lists = vec![Vec::new(); n];
        for (a, b) in edges {
            if a != b {
                lists[a].push(b);
                lists[b].push(a);
            }
        }
        for l in &mut lists {
            l.sort_unstable();
            l.dedup();
        }
        Adjacency { lists }
    }

    /// Builds the subgraph induced on `vertices` (must be sorted, distinct), relabelled to
    /// `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let pos = |v: usize| vertices.binary_search(&v).ok();
        let lists = vertices
            .iter()
            .map(|&v| self.lists[v].iter().filter_map(|&w| pos(w)).collect())
            .collect();
        Adjacency { lists }
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.lists[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.lists[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.lists[a].binary_search(&b).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.lists.iter().map(Vec::len).sum::<usize>() / 2
    }
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().copied().filter(|x| b.binary_search(x).is_err()).collect()
}

/// Enumerates all maximal cliques with the Tomita pivoting variant of Bron–Kerbosch.
/// Each clique is returned sorted; the list is sorted lexicographically.
pub fn maximal_cliques(adj: &Adjacency) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let p: Vec<usize> = (0..adj.len()).collect();
    let mut r = Vec::new();
    bron_kerbosch(adj, &mut r, p, Vec::new(), &mut out);
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out
}

fn bron_kerbosch(
    adj: &Adjacency,
    r: &mut Vec<usize>,
    p: Vec<usize>,
    mut x: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() {
        if x.is_empty() && !r.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    // pivot maximizing |P ∩ N(u)| over P ∪ X
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .max_by_key(|&u| intersect(&p, adj.neighbors(u)).len())
        .expect("P is nonempty");
    let candidates = difference(&p, adj.neighbors(pivot));
    let mut p = p;
    for v in candidates {
        let nv = adj.neighbors(v);
        r.push(v);
        bron_kerbosch(adj, r, intersect(&p, nv), intersect(&x, nv), out);
        r.pop();
        p.retain(|&w| w != v);
        let at = x.binary_search(&v).unwrap_or_else(|e| e);
        x.insert(at, v);
    }
}

/// Visits every nonempty clique exactly once, in increasing-vertex order.
pub fn for_each_clique(adj: &Adjacency, mut visit: impl FnMut(&[usize])) {
    let mut stack = Vec::new();
    for v in 0..adj.len() {
        let cand: Vec<usize> = adj.neighbors(v).iter().copied().filter(|&w| w > v).collect();
        stack.push(v);
        extend(adj, &mut stack, &cand, &mut visit);
        stack.pop();
    }
}

fn extend(adj: &Adjacency, stack: &mut Vec<usize>, cand: &[usize], visit: &mut impl FnMut(&[usize])) {
    visit(stack);
    for (i, &w) in cand.iter().enumerate() {
        let next = intersect(&cand[i + 1..], adj.neighbors(w));
        stack.push(w);
        extend(adj, stack, &next, visit);
        stack.pop();
    }
}

/// Euler characteristic of the Whitney (clique) complex, computed without materializing it.
pub fn clique_euler_characteristic(adj: &Adjacency) -> i64 {
    let mut chi = 0i64;
    for_each_clique(adj, |c| {
        chi += if c.len() % 2 == 1 { 1 } else { -1 };
    });
    chi
}

/// Number of cliques of each size: entry `k` counts cliques with `k + 1` vertices.
pub fn clique_counts(adj: &Adjacency) -> Vec<usize> {
    let mut counts = Vec::new();
    for_each_clique(adj, |c| {
        if counts.len() < c.len() {
            counts.resize(c.len(), 0);
        }
        counts[c.len() - 1] += 1;
    });
    counts
}
