//! Bipartite skeleton: forms on one side, counterparts on the other.
//!
//! Indices are 1-based in the public API. Neighbor lists are kept sorted so
//! that structural equality is canonical: toggling an edge twice restores a
//! skeleton bit for bit.

use crate::error::{Error, Result};

/// Degree-based classification, most restrictive first.
///
/// `VertexCapped` means every vertex on both sides has degree at most one
/// (a partial matching); `CounterpartCapped` caps only counterpart degrees;
/// `General` is everything else. A vertex-capped skeleton is also
/// counterpart-capped; [`Skeleton::classify`] reports the tightest class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SkeletonClass {
    VertexCapped,
    CounterpartCapped,
    General,
}

/// Undirected bipartite graph with adjacency stored on both sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Skeleton {
    /// `form_adj[i-1]`: sorted counterpart ids linked to form `i`.
    form_adj: Vec<Vec<usize>>,
    /// `counterpart_adj[j-1]`: sorted form ids linked to counterpart `j`.
    counterpart_adj: Vec<Vec<usize>>,
    links: usize,
}

impl Skeleton {
    /// Builds a skeleton with `n` forms, `m` counterparts, and the given
    /// 1-based edges. Rejects out-of-range indices and duplicate edges.
    pub fn new(n: usize, m: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::domain("skeleton needs at least one vertex per side"));
        }
        let mut sk = Skeleton {
            form_adj: vec![Vec::new(); n],
            counterpart_adj: vec![Vec::new(); m],
            links: 0,
        };
        for &(i, j) in edges {
            sk.check_form(i)?;
            sk.check_counterpart(j)?;
            if sk.has_edge(i, j) {
                return Err(Error::DuplicateEdge {
                    form: i,
                    counterpart: j,
                });
            }
            sk.insert(i, j);
        }
        Ok(sk)
    }

    /// Empty skeleton (no edges) of the given shape.
    pub fn empty(n: usize, m: usize) -> Result<Self> {
        Self::new(n, m, &[])
    }

    pub fn forms(&self) -> usize {
        self.form_adj.len()
    }

    pub fn counterparts(&self) -> usize {
        self.counterpart_adj.len()
    }

    /// Number of edges, `M`.
    pub fn links(&self) -> usize {
        self.links
    }

    /// Degree of form `i` (1-based).
    pub fn form_degree(&self, i: usize) -> usize {
        self.form_adj[i - 1].len()
    }

    /// Degree of counterpart `j` (1-based).
    pub fn counterpart_degree(&self, j: usize) -> usize {
        self.counterpart_adj[j - 1].len()
    }

    /// Sorted counterparts linked to form `i`.
    pub fn form_neighbors(&self, i: usize) -> &[usize] {
        &self.form_adj[i - 1]
    }

    /// Sorted forms linked to counterpart `j`.
    pub fn counterpart_neighbors(&self, j: usize) -> &[usize] {
        &self.counterpart_adj[j - 1]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.form_adj[i - 1].binary_search(&j).is_ok()
    }

    /// Edges in (form, counterpart) lexicographic order, 1-based.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.form_adj
            .iter()
            .enumerate()
            .flat_map(|(i0, js)| js.iter().map(move |&j| (i0 + 1, j)))
    }

    /// Flips the presence of edge `(i, j)`: absent becomes present and vice
    /// versa. Applying the same toggle twice restores the original skeleton
    /// exactly.
    pub fn toggle_edge(&mut self, i: usize, j: usize) -> Result<()> {
        self.check_form(i)?;
        self.check_counterpart(j)?;
        if self.has_edge(i, j) {
            self.remove(i, j);
        } else {
            self.insert(i, j);
        }
        Ok(())
    }

    /// Tightest degree class this skeleton satisfies.
    pub fn classify(&self) -> SkeletonClass {
        let counterparts_capped = self.counterpart_adj.iter().all(|f| f.len() <= 1);
        if !counterparts_capped {
            return SkeletonClass::General;
        }
        if self.form_adj.iter().all(|c| c.len() <= 1) {
            SkeletonClass::VertexCapped
        } else {
            SkeletonClass::CounterpartCapped
        }
    }

    fn insert(&mut self, i: usize, j: usize) {
        let js = &mut self.form_adj[i - 1];
        let pos = js.binary_search(&j).unwrap_err();
        js.insert(pos, j);
        let is = &mut self.counterpart_adj[j - 1];
        let pos = is.binary_search(&i).unwrap_err();
        is.insert(pos, i);
        self.links += 1;
    }

    fn remove(&mut self, i: usize, j: usize) {
        let js = &mut self.form_adj[i - 1];
        let pos = js.binary_search(&j).expect("edge present");
        js.remove(pos);
        let is = &mut self.counterpart_adj[j - 1];
        let pos = is.binary_search(&i).expect("edge present");
        is.remove(pos);
        self.links -= 1;
    }

    fn check_form(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.forms() {
            Err(Error::FormIndexOutOfRange {
                index: i,
                n: self.forms(),
            })
        } else {
            Ok(())
        }
    }

    fn check_counterpart(&self, j: usize) -> Result<()> {
        if j == 0 || j > self.counterparts() {
            Err(Error::CounterpartIndexOutOfRange {
                index: j,
                m: self.counterparts(),
            })
        } else {
            Ok(())
        }
    }

    /// Parses the plain-text exchange format: first non-comment line is
    /// `n m`, each following line one `i j` edge (1-based, whitespace
    /// separated). `#` starts a comment that runs to end of line.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let a = fields.next();
            let b = fields.next();
            if fields.next().is_some() {
                return Err(Error::Parse(format!(
                    "line {}: expected two integers, got {:?}",
                    lineno + 1,
                    line
                )));
            }
            let parse = |tok: Option<&str>| -> Result<usize> {
                tok.ok_or_else(|| {
                    Error::Parse(format!("line {}: expected two integers", lineno + 1))
                })?
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("line {}: not an integer", lineno + 1)))
            };
            let pair = (parse(a)?, parse(b)?);
            if header.is_none() {
                header = Some(pair);
            } else {
                edges.push(pair);
            }
        }
        let (n, m) = header.ok_or_else(|| Error::Parse("missing `n m` header line".into()))?;
        Skeleton::new(n, m, &edges)
    }

    /// Serializes to the format accepted by [`Skeleton::from_text`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.forms(), self.counterparts());
        for (i, j) in self.edges() {
            out.push_str(&format!("{} {}\n", i, j));
        }
        out
    }
}
