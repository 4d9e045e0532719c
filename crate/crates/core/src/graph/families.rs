//! Named graph families and their `name[:param[,param]]` string form.

use std::fmt;
use std::str::FromStr;

use super::{Graph, GraphError};

// McGee graph in LCF notation: a Hamiltonian 24-cycle plus chords i -> i + s.
const MCGEE_LCF: [isize; 3] = [12, 7, -7];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    Cycle(usize),
    Path(usize),
    Complete(usize),
    /// Star with the given number of leaves.
    Star(usize),
    CompleteBipartite(usize, usize),
    HypercubeQ3,
    /// Two k-cycles `a_1..a_k`, `b_1..b_k` joined by the rungs `a_j b_j`.
    KTrack(usize),
    /// k four-cycles in a ring, neighbouring squares joined by two bridges.
    RingOfSquares(usize),
    Petersen,
    McGee,
    /// Labelled tree on `len + 2` vertices decoded from a Prüfer sequence.
    TreeFromPrufer(Vec<usize>),
}

impl FamilySpec {
    pub fn generate(&self) -> Result<Graph, GraphError> {
        let bad = |msg: String| Err(GraphError::FamilyParameter(msg));
        match *self {
            FamilySpec::Cycle(n) => {
                if n < 3 {
                    return bad(format!("cycle needs n >= 3, got {n}"));
                }
                let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
                Graph::from_edge_list(n, &edges)
            }
            FamilySpec::Path(n) => {
                if n < 2 {
                    return bad(format!("path needs n >= 2, got {n}"));
                }
                let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
                Graph::from_edge_list(n, &edges)
            }
            FamilySpec::Complete(n) => {
                if n < 2 {
                    return bad(format!("complete graph needs n >= 2, got {n}"));
                }
                let edges: Vec<_> = (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .collect();
                Graph::from_edge_list(n, &edges)
            }
            FamilySpec::Star(leaves) => {
                if leaves < 1 {
                    return bad("star needs at least one leaf".into());
                }
                let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
                Graph::from_edge_list(leaves + 1, &edges)
            }
            FamilySpec::CompleteBipartite(a, b) => {
                if a < 1 || b < 1 {
                    return bad(format!("bipartite sides must be nonempty, got {a},{b}"));
                }
                let edges: Vec<_> = (0..a)
                    .flat_map(|u| (0..b).map(move |v| (u, a + v)))
                    .collect();
                Graph::from_edge_list(a + b, &edges)
            }
            FamilySpec::HypercubeQ3 => {
                let edges: Vec<_> = (0..8usize)
                    .flat_map(|u| {
                        (0..3)
                            .map(move |bit| (u, u ^ (1 << bit)))
                            .filter(|&(u, v)| u < v)
                    })
                    .collect();
                Graph::from_edge_list(8, &edges)
            }
            FamilySpec::KTrack(k) => {
                if k < 3 {
                    return bad(format!("k-track needs k >= 3, got {k}"));
                }
                // a_j = j, b_j = k + j
                let mut edges = Vec::with_capacity(3 * k);
                for j in 0..k {
                    let next = (j + 1) % k;
                    edges.push((j, next));
                    edges.push((j, k + j));
                    edges.push((k + j, k + next));
                }
                Graph::from_edge_list(2 * k, &edges)
            }
            FamilySpec::RingOfSquares(k) => {
                if k < 3 {
                    return bad(format!("ring of squares needs k >= 3, got {k}"));
                }
                let v = |square: usize, corner: usize| 4 * (square % k) + corner;
                let mut edges = Vec::with_capacity(6 * k);
                for i in 0..k {
                    for c in 0..4 {
                        edges.push((v(i, c), v(i, (c + 1) % 4)));
                    }
                    edges.push((v(i, 1), v(i + 1, 0)));
                    edges.push((v(i, 3), v(i + 1, 2)));
                }
                Graph::from_edge_list(4 * k, &edges)
            }
            FamilySpec::Petersen => {
                let mut edges = Vec::with_capacity(15);
                for i in 0..5 {
                    edges.push((i, (i + 1) % 5));
                    edges.push((i, i + 5));
                    edges.push((5 + i, 5 + (i + 2) % 5));
                }
                Graph::from_edge_list(10, &edges)
            }
            FamilySpec::McGee => {
                let n = 24isize;
                let mut edges = Vec::with_capacity(36);
                for i in 0..n {
                    edges.push((i as usize, ((i + 1) % n) as usize));
                    let j = (i + MCGEE_LCF[i as usize % 3]).rem_euclid(n);
                    if i < j {
                        edges.push((i as usize, j as usize));
                    }
                }
                Graph::from_edge_list(24, &edges)
            }
            FamilySpec::TreeFromPrufer(ref seq) => {
                let n = seq.len() + 2;
                if let Some(&x) = seq.iter().find(|&&x| x >= n) {
                    return bad(format!("Prüfer entry {x} out of range for {n} vertices"));
                }
                Graph::from_edge_list(n, &prufer_decode(seq))
            }
        }
    }

    /// All families understood by [`FamilySpec::from_str`], as
    /// `(name, parameter description)` pairs.
    pub fn catalog() -> Vec<(&'static str, &'static str)> {
        vec![
            ("cycle", "cycle:n, n >= 3"),
            ("path", "path:n, n >= 2 (alias tree-path)"),
            ("complete", "complete:n, n >= 2"),
            ("star", "star:leaves, leaves >= 1"),
            ("bipartite", "bipartite:a,b"),
            ("q3", "three-dimensional hypercube (alias hypercube)"),
            ("track", "track:k, k >= 3 (alias ktrack)"),
            ("ring", "ring:k, ring of k squares, k >= 3"),
            ("petersen", "Petersen graph"),
            ("mcgee", "McGee graph, the (3,7)-cage"),
            (
                "prufer",
                "prufer:s1,s2,... labelled tree from a Prüfer sequence",
            ),
        ]
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Cycle(n) => write!(f, "cycle:{n}"),
            FamilySpec::Path(n) => write!(f, "path:{n}"),
            FamilySpec::Complete(n) => write!(f, "complete:{n}"),
            FamilySpec::Star(l) => write!(f, "star:{l}"),
            FamilySpec::CompleteBipartite(a, b) => write!(f, "bipartite:{a},{b}"),
            FamilySpec::HypercubeQ3 => f.write_str("q3"),
            FamilySpec::KTrack(k) => write!(f, "track:{k}"),
            FamilySpec::RingOfSquares(k) => write!(f, "ring:{k}"),
            FamilySpec::Petersen => f.write_str("petersen"),
            FamilySpec::McGee => f.write_str("mcgee"),
            FamilySpec::TreeFromPrufer(seq) if seq.is_empty() => f.write_str("prufer"),
            FamilySpec::TreeFromPrufer(seq) => {
                let parts: Vec<String> = seq.iter().map(|x| x.to_string()).collect();
                write!(f, "prufer:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for FamilySpec {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, params) = match s.split_once(':') {
            Some((name, rest)) => (name, Some(rest)),
            None => (s, None),
        };
        let numbers = || -> Result<Vec<usize>, GraphError> {
            match params {
                None => Ok(Vec::new()),
                Some("") => Ok(Vec::new()),
                Some(p) => p
                    .split(',')
                    .map(|x| {
                        x.trim().parse::<usize>().map_err(|_| {
                            GraphError::FamilyParameter(format!(
                                "`{x}` is not a nonnegative integer"
                            ))
                        })
                    })
                    .collect(),
            }
        };
        let exactly = |count: usize| -> Result<Vec<usize>, GraphError> {
            let v = numbers()?;
            if v.len() != count {
                return Err(GraphError::FamilyParameter(format!(
                    "`{name}` takes {count} parameter(s), got {}",
                    v.len()
                )));
            }
            Ok(v)
        };
        let spec = match name.to_ascii_lowercase().as_str() {
            "cycle" => FamilySpec::Cycle(exactly(1)?[0]),
            "path" | "tree-path" => FamilySpec::Path(exactly(1)?[0]),
            "complete" => FamilySpec::Complete(exactly(1)?[0]),
            "star" => FamilySpec::Star(exactly(1)?[0]),
            "bipartite" => {
                let v = exactly(2)?;
                FamilySpec::CompleteBipartite(v[0], v[1])
            }
            "q3" | "hypercube" => {
                exactly(0)?;
                FamilySpec::HypercubeQ3
            }
            "track" | "ktrack" => FamilySpec::KTrack(exactly(1)?[0]),
            "ring" => FamilySpec::RingOfSquares(exactly(1)?[0]),
            "petersen" => {
                exactly(0)?;
                FamilySpec::Petersen
            }
            "mcgee" => {
                exactly(0)?;
                FamilySpec::McGee
            }
            "prufer" => FamilySpec::TreeFromPrufer(numbers()?),
            other => return Err(GraphError::UnknownFamily(other.to_string())),
        };
        Ok(spec)
    }
}

fn prufer_decode(seq: &[usize]) -> Vec<(usize, usize)> {
    let n = seq.len() + 2;
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Every Prüfer sequence for trees on `n >= 2` labelled vertices, in
/// lexicographic order (`n^(n-2)` of them).
pub fn prufer_sequences(n: usize) -> impl Iterator<Item = Vec<usize>> {
    assert!(n >= 2, "trees need at least two vertices");
    let len = n - 2;
    let total = n.pow(len as u32);
    (0..total).map(move |mut code| {
        let mut seq = vec![0; len];
        for slot in seq.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        seq
    })
}
