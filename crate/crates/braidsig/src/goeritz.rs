//! Goeritz forms of the two chessboard surfaces, in the sign convention that
//! makes positive links have positive signature, and the combined
//! Gordon-Litherland signature formula 2σ(L) = σ(G_B) + σ(G_W) + cr(D).

use num::Zero;

use crate::diagram::{color_graph_edges, Color, FaceId, FaceKind, StandardDiagram};
use crate::error::{Error, Result};
use crate::sigcore::{rat, signature, Rational, SymmetricMatrix};

/// The Goeritz form of one chessboard surface.  The basis consists of curves
/// winding counterclockwise around the opposite-color faces, one face
/// excluded; `matrix` keeps the raw counterclockwise entries and `basis`
/// carries the per-column alternating orientation signs used downstream to
/// normalize couplings to +1.
#[derive(Debug, Clone)]
pub struct GoeritzForm {
    pub surface: Color,
    pub basis: Vec<(FaceId, i8)>,
    pub excluded: FaceId,
    pub matrix: SymmetricMatrix,
}

impl GoeritzForm {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn sigma(&self) -> i64 {
        signature(&self.matrix).signature()
    }
}

/// Full symmetric pre-matrix over all faces of one color: off-diagonal
/// entries are -1 per shared same-column crossing and +1 per shared side
/// crossing; diagonals make every row sum to zero.  Deleting any one row and
/// column yields a Goeritz matrix of the opposite-color surface.
pub(crate) struct PreMatrix {
    pub faces: Vec<FaceId>,
    pub matrix: SymmetricMatrix,
}

pub(crate) fn pre_matrix(diagram: &StandardDiagram, face_color: Color) -> PreMatrix {
    let faces: Vec<FaceId> = (0..diagram.faces().len())
        .filter(|&id| diagram.face(id).color == face_color)
        .collect();
    let index: std::collections::HashMap<FaceId, usize> =
        faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut m = SymmetricMatrix::zero(faces.len());
    for p in 0..diagram.crossings() {
        let col = diagram.crossing_column(p);
        let col_color = if col % 2 == 1 {
            Color::Black
        } else {
            Color::White
        };
        if col_color == face_color {
            let (a, b) = diagram.column_edge(p);
            if a != b {
                m.add_at(index[&a], index[&b], &rat(-1));
            }
        } else {
            let (l, r) = diagram.side_edge(p);
            debug_assert_ne!(l, r);
            m.add_at(index[&l], index[&r], &rat(1));
        }
    }
    for i in 0..faces.len() {
        let row_sum: Rational = (0..faces.len())
            .filter(|&j| j != i)
            .map(|j| m.get(i, j).clone())
            .sum();
        m.set(i, i, -row_sum);
    }
    PreMatrix { faces, matrix: m }
}

fn surface_components(diagram: &StandardDiagram, surface: Color) -> usize {
    // Connectivity of the surface itself: its faces joined by the crossings
    // whose bands lie on it.
    let vertices: Vec<FaceId> = (0..diagram.faces().len())
        .filter(|&id| diagram.face(id).color == surface)
        .collect();
    let index: std::collections::HashMap<FaceId, usize> =
        vertices.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for (a, b) in color_graph_edges(diagram, surface) {
        let (ra, rb) = (find(&mut parent, index[&a]), find(&mut parent, index[&b]));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    let mut roots: Vec<usize> = (0..vertices.len())
        .map(|v| find(&mut parent, v))
        .collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// Picks the basis face to exclude: the unbounded face when it carries the
/// basis color, otherwise the first face of largest side count.
fn excluded_face(diagram: &StandardDiagram, basis_faces: &[FaceId]) -> FaceId {
    let outer = diagram.outer_face();
    if basis_faces.contains(&outer) {
        return outer;
    }
    *basis_faces
        .iter()
        .max_by_key(|&&f| (diagram.face(f).sides, std::cmp::Reverse(f)))
        .expect("nonempty basis")
}

/// Builds the Goeritz form of the chessboard surface of the given color.
pub fn goeritz_matrix(diagram: &StandardDiagram, surface: Color) -> Result<GoeritzForm> {
    goeritz_matrix_excluding(diagram, surface, None)
}

/// Same, but with an explicit choice of excluded face (used to verify that
/// the signature does not depend on the choice).
pub fn goeritz_matrix_excluding(
    diagram: &StandardDiagram,
    surface: Color,
    exclude: Option<FaceId>,
) -> Result<GoeritzForm> {
    let comps = surface_components(diagram, surface);
    if comps != 1 {
        return Err(Error::DisconnectedSurface {
            surface: match surface {
                Color::Black => "black",
                Color::White => "white",
            },
            components: comps,
        });
    }
    let pre = pre_matrix(diagram, surface.other());
    let excluded = match exclude {
        Some(f) => {
            if !pre.faces.contains(&f) {
                return Err(Error::Internal(format!(
                    "excluded face {f} does not carry the basis color"
                )));
            }
            f
        }
        None => excluded_face(diagram, &pre.faces),
    };
    let mut basis = Vec::new();
    let mut keep = Vec::new();
    for (i, &f) in pre.faces.iter().enumerate() {
        if f == excluded {
            continue;
        }
        keep.push(i);
        // Alternating orientation convention along each column's cyclic face
        // order; the axis and unbounded faces stay counterclockwise.
        let sign = match diagram.face(f).kind {
            FaceKind::Above { slot, .. } => {
                if slot % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
            _ => 1,
        };
        basis.push((f, sign));
    }
    Ok(GoeritzForm {
        surface,
        basis,
        excluded,
        matrix: pre.matrix.restrict(&keep),
    })
}

/// The link signature via the combined Gordon-Litherland formula.  The sum
/// σ(G_B) + σ(G_W) + cr is always even; an odd value signals a convention
/// bug and is reported as an error.
pub fn gl_signature(diagram: &StandardDiagram) -> Result<i64> {
    let gb = goeritz_matrix(diagram, Color::Black)?;
    let gw = goeritz_matrix(diagram, Color::White)?;
    let total = gb.sigma() + gw.sigma() + diagram.crossings() as i64;
    if total % 2 != 0 {
        return Err(Error::OddSignatureSum(total));
    }
    Ok(total / 2)
}

/// A mismatch between a constructed Goeritz entry and the local rules
/// predicting it.
#[derive(Debug, Clone)]
pub struct AuditViolation {
    pub surface: Color,
    pub face_a: FaceId,
    pub face_b: FaceId,
    pub expected: i64,
    pub got: Rational,
}

/// Recomputes every entry between above-crossing faces from the crossing
/// incidence data and compares with the local predictions: diagonal 4 - m
/// for an m-sided face, -1 for same-column faces sharing one crossing, +1
/// for faces two columns apart sharing one crossing, 0 for disjoint faces.
/// Pairs sharing two or more crossings and wrap faces lie outside the rules'
/// scope and are skipped.
pub fn audit_entry_rules(diagram: &StandardDiagram) -> Result<Vec<AuditViolation>> {
    let mut violations = Vec::new();
    for surface in [Color::Black, Color::White] {
        let pre = pre_matrix(diagram, surface.other());
        let above: Vec<(usize, FaceId)> = pre
            .faces
            .iter()
            .enumerate()
            .filter(|&(_, &f)| diagram.face(f).is_above())
            .map(|(i, &f)| (i, f))
            .collect();
        let is_wrap = |f: FaceId| {
            let face = diagram.face(f);
            matches!(face.span, Some((a, b)) if a == b)
        };
        for &(i, fa) in &above {
            if is_wrap(fa) {
                continue;
            }
            let expected = 4i64 - diagram.face(fa).sides as i64;
            let got = pre.matrix.get(i, i);
            if got != &rat(expected) {
                violations.push(AuditViolation {
                    surface,
                    face_a: fa,
                    face_b: fa,
                    expected,
                    got: got.clone(),
                });
            }
            for &(j, fb) in &above {
                if j <= i || is_wrap(fb) {
                    continue;
                }
                let shared = diagram.shared_crossings(fa, fb);
                if shared >= 2 {
                    continue;
                }
                let ca = diagram.face(fa).column().unwrap();
                let cb = diagram.face(fb).column().unwrap();
                let expected = if shared == 0 {
                    0
                } else if ca == cb {
                    -1
                } else if ca.abs_diff(cb) == 2 {
                    1
                } else {
                    return Err(Error::Internal(format!(
                        "faces {fa},{fb} in columns {ca},{cb} share a crossing"
                    )));
                };
                let got = pre.matrix.get(i, j);
                if got != &rat(expected) {
                    violations.push(AuditViolation {
                        surface,
                        face_a: fa,
                        face_b: fb,
                        expected,
                        got: got.clone(),
                    });
                }
            }
        }
    }
    Ok(violations)
}

/// Raw counterclockwise Goeritz entry between two above-crossing faces of
/// the same color (shared by the subspace Gram matrices).
pub(crate) fn raw_above_entry(diagram: &StandardDiagram, a: FaceId, b: FaceId) -> Rational {
    if a == b {
        // Diagonal: minus the sum of all couplings.  For a non-wrap face of
        // m sides this equals 4 - m.
        let f = diagram.face(a);
        debug_assert!(matches!(f.span, Some((x, y)) if x != y));
        return rat(4 - f.sides as i64);
    }
    let fa = diagram.face(a);
    let fb = diagram.face(b);
    let (ca, cb) = (fa.column().unwrap(), fb.column().unwrap());
    let shared = diagram.shared_crossings(a, b) as i64;
    if ca == cb {
        rat(-shared)
    } else if ca.abs_diff(cb) == 2 {
        rat(shared)
    } else {
        Rational::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_braid_word;
    use crate::diagram::build_diagram;

    fn diagram(text: &str) -> StandardDiagram {
        build_diagram(&parse_braid_word(text).unwrap()).unwrap()
    }

    #[test]
    fn trefoil_white_form() {
        let d = diagram("1 1 1");
        let g = goeritz_matrix(&d, Color::White).unwrap();
        assert_eq!(g.dim(), 2);
        let want = SymmetricMatrix::from_int_rows(&[vec![2, -1], vec![-1, 2]]).unwrap();
        assert_eq!(g.matrix, want);
        assert_eq!(g.sigma(), 2);
    }

    #[test]
    fn trefoil_black_form() {
        let d = diagram("1 1 1");
        let g = goeritz_matrix(&d, Color::Black).unwrap();
        // Basis is the axis face alone (the unbounded face is excluded).
        assert_eq!(g.dim(), 1);
        assert_eq!(*g.matrix.get(0, 0), rat(-3));
        assert_eq!(g.sigma(), -1);
    }

    #[test]
    fn trefoil_gl() {
        assert_eq!(gl_signature(&diagram("1 1 1")).unwrap(), 2);
    }

    #[test]
    fn torus_family_gl() {
        for k in 2..=12 {
            let w = parse_braid_word(&format!("1^{k}")).unwrap();
            let d = build_diagram(&w).unwrap();
            assert_eq!(gl_signature(&d).unwrap(), k as i64 - 1, "k={k}");
        }
    }

    #[test]
    fn two_column_trefoil_gl() {
        assert_eq!(gl_signature(&diagram("1 2 1 2")).unwrap(), 2);
    }

    #[test]
    fn connected_sum_gl() {
        // unknot # Hopf link
        assert_eq!(gl_signature(&diagram("1 2 2")).unwrap(), 1);
    }

    #[test]
    fn distance_two_coupling_is_plus_one() {
        let d = diagram("1 2 3 1 2 3");
        let g = goeritz_matrix(&d, Color::White).unwrap();
        // Column-1 face spanning (3,0) and column-3 face spanning (2,5)
        // share exactly the σ2 crossing at position 4.
        let fa = d.face_above(1, 1);
        let fc = d.face_above(3, 0);
        assert_eq!(d.shared_crossings(fa, fc), 1);
        let ia = g.basis.iter().position(|&(f, _)| f == fa).unwrap();
        let ic = g.basis.iter().position(|&(f, _)| f == fc).unwrap();
        assert_eq!(*g.matrix.get(ia, ic), rat(1));
    }

    #[test]
    fn form_dims_sum_to_crossings() {
        for text in ["1 1 1", "1 2 1 2", "1 2 2 1 1 2 2 1", "1 2 3 1 2 3"] {
            let d = diagram(text);
            let gb = goeritz_matrix(&d, Color::Black).unwrap();
            let gw = goeritz_matrix(&d, Color::White).unwrap();
            assert_eq!(gb.dim() + gw.dim(), d.crossings(), "{text}");
        }
    }

    #[test]
    fn excluded_face_independence() {
        let d = diagram("1 2 2 1 1 2 2 1");
        for surface in [Color::Black, Color::White] {
            let default = goeritz_matrix(&d, surface).unwrap();
            let faces: Vec<FaceId> = default
                .basis
                .iter()
                .map(|&(f, _)| f)
                .chain([default.excluded])
                .collect();
            for f in faces {
                let alt = goeritz_matrix_excluding(&d, surface, Some(f)).unwrap();
                assert_eq!(alt.sigma(), default.sigma());
            }
        }
    }

    #[test]
    fn audit_clean_on_known_words() {
        for text in ["1 1 1", "1 4 4 2 1 3 2 4 1 3 3 2 4 1 3", "1 2 2 1 1 2 2 1"] {
            let d = diagram(text);
            let v = audit_entry_rules(&d).unwrap();
            assert!(v.is_empty(), "{text}: {v:?}");
        }
    }

    #[test]
    fn example_family_signature() {
        let d = diagram("1 2 2 1 1 2 2 1");
        assert_eq!(gl_signature(&d).unwrap(), 5);
    }
}
