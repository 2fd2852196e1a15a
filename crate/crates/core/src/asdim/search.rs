use rayon::prelude::*;
use serde::Serialize;

use super::{verify_cover, ColoredCover, Piece};
use crate::coarse::MetricSpace;
use crate::error::{Error, Result};

/// Largest space [`exact_min_colors`] accepts by default.
pub const DEFAULT_SEARCH_LIMIT: usize = 200;

/// Least number of colors at scale `D` with mesh at most `M`, and a cover attaining it.
pub struct MinColors<X: MetricSpace> {
    pub colors: usize,
    pub cover: ColoredCover<X>,
    /// Largest clique of pairs forced apart (`M < d < D`), the starting bound.
    pub lower_bound: usize,
    pub nodes: u64,
}

struct Problem {
    n: usize,
    dist: Vec<u64>,
    d: u64,
    m: u64,
}

impl Problem {
    fn at(&self, i: usize, j: usize) -> u64 {
        self.dist[i * self.n + j]
    }
}

/// Backtracking state: colors and same-color components (pairs closer than `D`).
struct State {
    color: Vec<Option<usize>>,
    rep: Vec<usize>,
    members: Vec<Vec<usize>>,
    nodes: u64,
}

impl State {
    fn new(n: usize) -> Self {
        State {
            color: vec![None; n],
            rep: (0..n).collect(),
            members: (0..n).map(|i| vec![i]).collect(),
            nodes: 0,
        }
    }

    /// Colors `x` with `c` when every merged component keeps diameter at most `M`;
    /// returns what to undo.
    fn assign(&mut self, p: &Problem, x: usize, c: usize) -> Option<Vec<usize>> {
        let mut reps: Vec<usize> = (0..p.n)
            .filter(|&y| self.color[y] == Some(c) && p.at(x, y) < p.d)
            .map(|y| self.rep[y])
            .collect();
        reps.sort_unstable();
        reps.dedup();
        let mut merged = vec![x];
        for &r in &reps {
            for &a in &self.members[r] {
                if merged.iter().any(|&b| p.at(a, b) > p.m) {
                    return None;
                }
            }
            merged.extend(self.members[r].iter().copied());
        }
        for &a in &merged {
            self.rep[a] = x;
        }
        self.members[x] = merged;
        self.color[x] = Some(c);
        Some(reps)
    }

    fn undo(&mut self, x: usize, reps: Vec<usize>) {
        for r in reps {
            for &a in &self.members[r] {
                self.rep[a] = r;
            }
        }
        self.members[x] = vec![x];
        self.rep[x] = x;
        self.color[x] = None;
    }

    fn search(&mut self, p: &Problem, order: &[usize], at: usize, used: usize, k: usize) -> bool {
        self.nodes += 1;
        if at == order.len() {
            return true;
        }
        let x = order[at];
        for c in 0..k.min(used + 1) {
            if let Some(undo) = self.assign(p, x, c) {
                if self.search(p, order, at + 1, used.max(c + 1), k) {
                    return true;
                }
                self.undo(x, undo);
            }
        }
        false
    }
}

/// Points ordered by degree in the graph of pairs closer than `D`, each next
/// point the one with most neighbours already placed.
fn search_order(p: &Problem) -> Vec<usize> {
    let near = |i: usize, j: usize| i != j && p.at(i, j) < p.d;
    let degree: Vec<usize> = (0..p.n)
        .map(|i| (0..p.n).filter(|&j| near(i, j)).count())
        .collect();
    let mut placed = vec![false; p.n];
    let mut links = vec![0usize; p.n];
    let mut order = Vec::with_capacity(p.n);
    for _ in 0..p.n {
        let x = (0..p.n)
            .filter(|&i| !placed[i])
            .max_by_key(|&i| (links[i], degree[i], std::cmp::Reverse(i)))
            .expect("a point is left");
        placed[x] = true;
        order.push(x);
        for j in 0..p.n {
            if near(x, j) {
                links[j] += 1;
            }
        }
    }
    order
}

/// Greedy clique in the graph of pairs that no color can hold (`M < d < D`).
fn clique_bound(p: &Problem) -> usize {
    let forced = |i: usize, j: usize| p.at(i, j) < p.d && p.at(i, j) > p.m;
    let mut best = usize::from(p.n > 0);
    for start in 0..p.n {
        let mut clique = vec![start];
        for j in 0..p.n {
            if clique.iter().all(|&i| forced(i, j)) {
                clique.push(j);
            }
        }
        best = best.max(clique.len());
    }
    best
}

/// Exact least number of `D`-discrete families of pieces with diameter at
/// most `M` covering `points`.
///
/// Covers may be taken to be partitions. A coloring is admissible when, in
/// each color, the groups of points linked by distances below `D` have
/// diameter at most `M`; those groups are the pieces. Colors are tried from
/// the clique bound upward with full backtracking; the first point's branches
/// run in parallel and the lexicographically first coloring in search order wins.
pub fn exact_min_colors<X: MetricSpace<Dist = u64>>(
    space: &X,
    points: &[X::Point],
    d: u64,
    mesh_bound: u64,
    limit: usize,
) -> Result<MinColors<X>> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let n = pts.len();
    if n > limit {
        return Err(Error::invalid(format!(
            "{n} points exceed the exact search limit {limit}"
        )));
    }
    let dist = (0..n * n)
        .into_par_iter()
        .map(|t| space.distance(&pts[t / n], &pts[t % n]))
        .collect::<Result<Vec<_>>>()?;
    let p = Problem {
        n,
        dist,
        d,
        m: mesh_bound,
    };
    let lower_bound = if n == 0 { 0 } else { clique_bound(&p) };
    let order = search_order(&p);
    let mut nodes = 0;
    for k in lower_bound.max(usize::from(n > 0))..=n {
        let found = solve(&p, &order, k);
        nodes += found.1;
        if let Some(color) = found.0 {
            let cover = witness(space, &pts, &p, &color, k)?;
            return Ok(MinColors {
                colors: k,
                cover,
                lower_bound,
                nodes,
            });
        }
    }
    let cover = ColoredCover::new(space.clone(), Vec::new(), Vec::new(), 0, d, "empty")?;
    Ok(MinColors {
        colors: 0,
        cover,
        lower_bound,
        nodes,
    })
}

fn solve(p: &Problem, order: &[usize], k: usize) -> (Option<Vec<usize>>, u64) {
    if order.len() < 2 {
        let mut s = State::new(p.n);
        let ok = s.search(p, order, 0, 0, k);
        return (
            ok.then(|| s.color.iter().map(|c| c.expect("colored")).collect()),
            s.nodes,
        );
    }
    // the first point takes color 0; branch on the second
    let branches: Vec<usize> = (0..k.min(2)).collect();
    let results: Vec<(Option<Vec<usize>>, u64)> = branches
        .par_iter()
        .map(|&c| {
            let mut s = State::new(p.n);
            s.nodes += 1;
            if s.assign(p, order[0], 0).is_none() {
                return (None, s.nodes);
            }
            if s.assign(p, order[1], c).is_none() {
                return (None, s.nodes);
            }
            let ok = s.search(p, order, 2, c + 1, k);
            (
                ok.then(|| s.color.iter().map(|c| c.expect("colored")).collect()),
                s.nodes,
            )
        })
        .collect();
    let nodes = results.iter().map(|r| r.1).sum();
    (results.into_iter().find_map(|r| r.0), nodes)
}

fn witness<X: MetricSpace<Dist = u64>>(
    space: &X,
    pts: &[X::Point],
    p: &Problem,
    color: &[usize],
    k: usize,
) -> Result<ColoredCover<X>> {
    // components of "closer than D" within each color
    let mut group: Vec<usize> = (0..p.n).collect();
    fn find(g: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while g[r] != r {
            r = g[r];
        }
        g[i] = r;
        r
    }
    for i in 0..p.n {
        for j in i + 1..p.n {
            if color[i] == color[j] && p.at(i, j) < p.d {
                let (a, b) = (find(&mut group, i), find(&mut group, j));
                group[a.max(b)] = a.min(b);
            }
        }
    }
    let mut pieces: Vec<Piece<X::Point>> = Vec::new();
    let mut index = vec![usize::MAX; p.n];
    for i in 0..p.n {
        let r = find(&mut group, i);
        if index[r] == usize::MAX {
            index[r] = pieces.len();
            pieces.push(Piece {
                color: color[i],
                points: Vec::new(),
            });
        }
        pieces[index[r]].points.push(pts[i].clone());
    }
    let label = format!("exact search, D = {}, M = {}", p.d, p.m);
    ColoredCover::new(space.clone(), pts.to_vec(), pieces, k, p.d, label)
}

/// One `(D, M)` entry of an [`AsdimReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AsdimRow {
    pub d: u64,
    pub mesh_bound: u64,
    /// Colors of the supplied construction at this `D`, when it verifies and its mesh is at most `M`.
    pub construction_colors: Option<usize>,
    pub construction_mesh: Option<u64>,
    pub construction_passed: Option<bool>,
    pub exact_min: Option<usize>,
    /// Pieces of the exact witness as `(color, points)`.
    pub exact_witness: Option<Vec<(usize, Vec<String>)>>,
}

/// Colors needed at each tested scale and mesh bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AsdimReport {
    pub space: String,
    pub points: usize,
    pub rows: Vec<AsdimRow>,
    /// Exact minima never exceed construction counts.
    pub consistent: bool,
}

/// Runs the construction for each `D` and, when the space is small enough, the
/// exact search for each `(D, M)`.
pub fn asdim_report<X, F>(
    space: &X,
    ambient: &[X::Point],
    ds: &[u64],
    ms: &[u64],
    construction: F,
    limit: usize,
) -> Result<AsdimReport>
where
    X: MetricSpace<Dist = u64>,
    F: Fn(u64) -> Result<Option<ColoredCover<X>>>,
{
    let mut rows = Vec::new();
    let mut consistent = true;
    for &d in ds {
        let built = construction(d)?;
        let verdict = built.as_ref().map(verify_cover).transpose()?;
        for &m in ms {
            let (mut colors, mut mesh, mut passed) = (None, None, None);
            if let (Some(c), Some(v)) = (&built, &verdict) {
                mesh = Some(v.mesh);
                passed = Some(v.passed);
                if v.passed && v.mesh <= m {
                    colors = Some(c.colors);
                }
            }
            let (mut exact_min, mut exact_witness) = (None, None);
            if ambient.len() <= limit {
                let r = exact_min_colors(space, ambient, d, m, limit)?;
                if colors.is_some_and(|c| r.colors > c) {
                    consistent = false;
                }
                exact_min = Some(r.colors);
                exact_witness = Some(
                    r.cover
                        .pieces
                        .iter()
                        .map(|p| (p.color, p.points.iter().map(|x| format!("{x:?}")).collect()))
                        .collect(),
                );
            }
            rows.push(AsdimRow {
                d,
                mesh_bound: m,
                construction_colors: colors,
                construction_mesh: mesh,
                construction_passed: passed,
                exact_min,
                exact_witness,
            });
        }
    }
    Ok(AsdimReport {
        space: space.name(),
        points: ambient.len(),
        rows,
        consistent,
    })
}
