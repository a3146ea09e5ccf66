//! The standard closure diagram of a positive braid: columns of crossings,
//! the faces above crossings together with the axis face F and the unbounded
//! face F', side counts, and the chessboard coloring.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::braid::BraidWord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceKind {
    /// The face starting above a crossing, identified by its column and its
    /// index in the column's cyclic crossing order.
    Above { column: usize, slot: usize },
    /// The face containing the braid axis.
    Axis,
    /// The unbounded face.
    Outer,
}

pub type FaceId = usize;

#[derive(Debug, Clone)]
pub struct Face {
    pub kind: FaceKind,
    /// Word positions of the bottom and top crossing for an above-crossing
    /// face; equal positions mean the face wraps all the way around.
    pub span: Option<(usize, usize)>,
    pub sides: usize,
    pub color: Color,
}

impl Face {
    pub fn column(&self) -> Option<usize> {
        match self.kind {
            FaceKind::Above { column, .. } => Some(column),
            _ => None,
        }
    }

    pub fn is_above(&self) -> bool {
        matches!(self.kind, FaceKind::Above { .. })
    }
}

/// The standard diagram: one crossing per braid letter, organized in columns.
#[derive(Debug, Clone)]
pub struct StandardDiagram {
    word: BraidWord,
    /// columns[i-1] lists the word positions of σ_i, ascending.
    columns: Vec<Vec<usize>>,
    faces: Vec<Face>,
    /// Face id of the face above each column slot: face_index[col-1][slot].
    face_index: Vec<Vec<FaceId>>,
    axis: FaceId,
    outer: FaceId,
}

/// Counts positions of `col_positions` strictly inside the cyclic interval
/// (u, v); when u == v the interval is everything except u itself.
fn count_strictly_between(col_positions: &[usize], u: usize, v: usize, cr: usize) -> usize {
    col_positions
        .iter()
        .filter(|&&p| in_cyclic_open(p, u, v, cr))
        .count()
}

fn in_cyclic_open(p: usize, u: usize, v: usize, cr: usize) -> bool {
    debug_assert!(p < cr && u < cr && v < cr);
    if p == u || p == v {
        return false;
    }
    if u == v {
        return true; // wrap face: everything except the single crossing
    }
    if u < v {
        u < p && p < v
    } else {
        p > u || p < v
    }
}

impl StandardDiagram {
    pub fn word(&self) -> &BraidWord {
        &self.word
    }

    pub fn crossings(&self) -> usize {
        self.word.crossings()
    }

    pub fn generator_count(&self) -> usize {
        self.word.generators()
    }

    pub fn column_positions(&self, column: usize) -> &[usize] {
        &self.columns[column - 1]
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: FaceId) -> &Face {
        &self.faces[id]
    }

    pub fn axis_face(&self) -> FaceId {
        self.axis
    }

    pub fn outer_face(&self) -> FaceId {
        self.outer
    }

    pub fn face_above(&self, column: usize, slot: usize) -> FaceId {
        self.face_index[column - 1][slot]
    }

    /// The column face whose span contains the given word position (which
    /// must not itself lie in the column).
    pub fn face_containing(&self, column: usize, position: usize) -> FaceId {
        let col = &self.columns[column - 1];
        debug_assert!(!col.contains(&position));
        // Face above col[t] spans (col[t], col[t+1]); position belongs to the
        // face whose bottom crossing is the largest entry below it.
        let slot = match col.iter().rposition(|&p| p < position) {
            Some(t) => t,
            None => col.len() - 1, // wrapped around the closure
        };
        self.face_above(column, slot)
    }

    /// The column of the crossing at a word position.
    pub fn crossing_column(&self, position: usize) -> usize {
        self.word.letters()[position]
    }

    /// The two same-column faces meeting at a crossing: the face starting
    /// above it and the face ending at it.
    pub fn column_edge(&self, position: usize) -> (FaceId, FaceId) {
        let column = self.crossing_column(position);
        let col = &self.columns[column - 1];
        let slot = col.binary_search(&position).expect("crossing in column");
        let above = self.face_above(column, slot);
        let below = self.face_above(column, (slot + col.len() - 1) % col.len());
        (above, below)
    }

    /// The two side faces at a crossing: left neighbor (or the axis face)
    /// and right neighbor (or the unbounded face).
    pub fn side_edge(&self, position: usize) -> (FaceId, FaceId) {
        let column = self.crossing_column(position);
        let left = if column == 1 {
            self.axis
        } else {
            self.face_containing(column - 1, position)
        };
        let right = if column == self.generator_count() {
            self.outer
        } else {
            self.face_containing(column + 1, position)
        };
        (left, right)
    }

    /// Number of crossings incident to both faces' boundaries.  Same-column
    /// faces share their common span endpoints; faces two columns apart share
    /// the crossings of the middle column lying in both spans.
    pub fn shared_crossings(&self, a: FaceId, b: FaceId) -> usize {
        let (fa, fb) = (&self.faces[a], &self.faces[b]);
        match (fa.kind, fb.kind) {
            (FaceKind::Above { column: ca, .. }, FaceKind::Above { column: cb, .. }) => {
                let (sa, sb) = (fa.span.unwrap(), fb.span.unwrap());
                if ca == cb {
                    if a == b {
                        return 0;
                    }
                    let ends_a = [sa.0, sa.1];
                    let mut n = 0;
                    for e in [sb.0, sb.1] {
                        if ends_a.contains(&e) {
                            n += 1;
                        }
                    }
                    // A two-crossing column has two faces sharing both
                    // crossings; spans then repeat endpoints.
                    if sa.0 == sa.1 || sb.0 == sb.1 {
                        return 0; // wrap face never pairs within its column
                    }
                    n
                } else if ca.abs_diff(cb) == 2 {
                    let mid = ca.min(cb) + 1;
                    let cr = self.crossings();
                    self.columns[mid - 1]
                        .iter()
                        .filter(|&&p| {
                            in_cyclic_open(p, sa.0, sa.1, cr) && in_cyclic_open(p, sb.0, sb.1, cr)
                        })
                        .count()
                } else {
                    0
                }
            }
            (FaceKind::Axis, FaceKind::Above { column: 1, .. }) => {
                // F meets every column-1 crossing; shared with a column-1
                // face at its span endpoints.
                let s = fb.span.unwrap();
                if s.0 == s.1 {
                    1
                } else {
                    2
                }
            }
            (FaceKind::Above { column: 1, .. }, FaceKind::Axis) => self.shared_crossings(b, a),
            _ => 0, // not needed beyond the audit's scope
        }
    }
}

/// Builds the standard diagram.  Every generator must be used at least once;
/// words with an unused generator describe split closures and are rejected.
pub fn build_diagram(word: &BraidWord) -> Result<StandardDiagram> {
    let g = word.generators();
    if g == 0 {
        return Err(Error::NoColumns);
    }
    let mut columns = Vec::with_capacity(g);
    for i in 1..=g {
        let col = word.column(i);
        if col.is_empty() {
            return Err(Error::SplitInput(i));
        }
        columns.push(col);
    }
    let cr = word.crossings();
    let mut faces = Vec::new();
    let mut face_index = vec![Vec::new(); g];
    for (ci, col) in columns.iter().enumerate() {
        let column = ci + 1;
        let color = if column % 2 == 1 {
            Color::Black
        } else {
            Color::White
        };
        for (slot, &p) in col.iter().enumerate() {
            let q = col[(slot + 1) % col.len()];
            let mut sides = 2;
            if column >= 2 {
                sides += count_strictly_between(&columns[ci - 1], p, q, cr);
            }
            if column < g {
                sides += count_strictly_between(&columns[ci + 1], p, q, cr);
            }
            face_index[ci].push(faces.len());
            faces.push(Face {
                kind: FaceKind::Above { column, slot },
                span: Some((p, q)),
                sides,
                color,
            });
        }
    }
    let axis = faces.len();
    faces.push(Face {
        kind: FaceKind::Axis,
        span: None,
        sides: columns[0].len(),
        color: Color::White,
    });
    let outer = faces.len();
    faces.push(Face {
        kind: FaceKind::Outer,
        span: None,
        sides: columns[g - 1].len(),
        color: if g % 2 == 1 {
            Color::White
        } else {
            Color::Black
        },
    });
    Ok(StandardDiagram {
        word: word.clone(),
        columns,
        faces,
        face_index,
        axis,
        outer,
    })
}

/// Face counts by side number for the above-crossing faces, plus the side
/// counts of the axis and unbounded faces.
#[derive(Debug, Clone)]
pub struct FaceCensus {
    pub f: BTreeMap<usize, usize>,
    pub s: usize,
    pub s_prime: usize,
    pub cr: usize,
}

impl FaceCensus {
    pub fn f_count(&self, sides: usize) -> usize {
        self.f.get(&sides).copied().unwrap_or(0)
    }

    /// Total of (i-4) f_i over i >= 5.
    pub fn excess(&self) -> i64 {
        self.f
            .iter()
            .filter(|(&i, _)| i >= 5)
            .map(|(&i, &n)| (i as i64 - 4) * n as i64)
            .sum()
    }
}

/// Tallies the faces and asserts the counting identities: the above-crossing
/// faces number cr, each crossing meets four face corners, and
/// 2 f_2 + f_3 = s + s' + Σ_{i>=5} (i-4) f_i.
pub fn face_census(diagram: &StandardDiagram) -> Result<FaceCensus> {
    let mut f = BTreeMap::new();
    for face in diagram.faces() {
        if face.is_above() {
            *f.entry(face.sides).or_insert(0) += 1;
        }
    }
    let census = FaceCensus {
        f,
        s: diagram.face(diagram.axis_face()).sides,
        s_prime: diagram.face(diagram.outer_face()).sides,
        cr: diagram.crossings(),
    };
    let total: usize = census.f.values().sum();
    if total != census.cr {
        return Err(Error::Internal(format!(
            "{} above-crossing faces for {} crossings",
            total, census.cr
        )));
    }
    let weighted: usize = census.f.iter().map(|(&i, &n)| i * n).sum();
    if 4 * census.cr != weighted + census.s + census.s_prime {
        return Err(Error::Internal(format!(
            "corner count mismatch: 4*{} != {} + {} + {}",
            census.cr, weighted, census.s, census.s_prime
        )));
    }
    let lhs = 2 * census.f_count(2) as i64 + census.f_count(3) as i64;
    let rhs = census.s as i64 + census.s_prime as i64 + census.excess();
    if lhs != rhs {
        return Err(Error::Internal(format!(
            "side-count identity violated: {lhs} != {rhs}"
        )));
    }
    Ok(census)
}

/// Chessboard data: the two face classes and the first Betti numbers of the
/// two spanning surfaces, computed as cycle ranks of the face-adjacency
/// graphs (one edge per crossing in each graph, self-loops allowed).
#[derive(Debug, Clone)]
pub struct ChessboardReport {
    pub black_faces: Vec<FaceId>,
    pub white_faces: Vec<FaceId>,
    pub h1_black: usize,
    pub h1_white: usize,
    pub black_components: usize,
    pub white_components: usize,
}

impl ChessboardReport {
    pub fn connected(&self) -> bool {
        self.black_components == 1 && self.white_components == 1
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Edges of the face-adjacency graph for one color: per crossing, either the
/// column edge (when the crossing's column has that color) or the side edge.
pub(crate) fn color_graph_edges(diagram: &StandardDiagram, color: Color) -> Vec<(FaceId, FaceId)> {
    let mut edges = Vec::with_capacity(diagram.crossings());
    for p in 0..diagram.crossings() {
        let col = diagram.crossing_column(p);
        let col_color = if col % 2 == 1 {
            Color::Black
        } else {
            Color::White
        };
        let e = if col_color == color {
            diagram.column_edge(p)
        } else {
            diagram.side_edge(p)
        };
        debug_assert_eq!(diagram.face(e.0).color, color);
        debug_assert_eq!(diagram.face(e.1).color, color);
        edges.push(e);
    }
    edges
}

fn graph_stats(diagram: &StandardDiagram, color: Color) -> (Vec<FaceId>, usize, usize) {
    let vertices: Vec<FaceId> = (0..diagram.faces().len())
        .filter(|&id| diagram.face(id).color == color)
        .collect();
    let index: BTreeMap<FaceId, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut dsu = Dsu::new(vertices.len());
    let edges = color_graph_edges(diagram, color);
    for &(a, b) in &edges {
        dsu.union(index[&a], index[&b]);
    }
    let mut roots: Vec<usize> = (0..vertices.len()).map(|v| dsu.find(v)).collect();
    roots.sort_unstable();
    roots.dedup();
    let components = roots.len();
    let h1 = edges.len() + components - vertices.len();
    (vertices, h1, components)
}

/// Computes both color classes and their cycle ranks; asserts that the two
/// ranks sum to the crossing number whenever both graphs are connected.
pub fn chessboard(diagram: &StandardDiagram) -> Result<ChessboardReport> {
    let (black_faces, h1_black, black_components) = graph_stats(diagram, Color::Black);
    let (white_faces, h1_white, white_components) = graph_stats(diagram, Color::White);
    let report = ChessboardReport {
        black_faces,
        white_faces,
        h1_black,
        h1_white,
        black_components,
        white_components,
    };
    if report.connected() && report.h1_black + report.h1_white != diagram.crossings() {
        return Err(Error::Internal(format!(
            "homology ranks {} + {} != crossing number {}",
            report.h1_black,
            report.h1_white,
            diagram.crossings()
        )));
    }
    Ok(report)
}

/// True iff every column except possibly the first contains an
/// above-crossing face with at least four sides.
pub fn wide_faces_present(diagram: &StandardDiagram) -> bool {
    (2..=diagram.generator_count()).all(|column| {
        (0..diagram.column_positions(column).len())
            .any(|slot| diagram.face(diagram.face_above(column, slot)).sides >= 4)
    })
}

#[derive(Serialize)]
struct FaceDto {
    kind: &'static str,
    column: Option<usize>,
    span: Option<(usize, usize)>,
    sides: usize,
    color: Color,
}

/// JSON dump of all faces for the CLI debug flag.
pub fn faces_to_json(diagram: &StandardDiagram) -> String {
    let dtos: Vec<FaceDto> = diagram
        .faces()
        .iter()
        .map(|f| FaceDto {
            kind: match f.kind {
                FaceKind::Above { .. } => "above",
                FaceKind::Axis => "axis",
                FaceKind::Outer => "outer",
            },
            column: f.column(),
            span: f.span,
            sides: f.sides,
            color: f.color,
        })
        .collect();
    serde_json::to_string_pretty(&dtos).expect("faces serialize")
}
