//! The structural verification pipeline: select the four face subsets, build
//! their Gram matrices, certify the block decomposition into paths and trisum
//! matrices, and chain the dimension, signature and subspace bounds into the
//! final inequality 4σ >= b1 + 2.

use num::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::braid::{
    betti, classify, reduce_with_budget, split_components, BraidWord, ClassificationKind,
};
use crate::diagram::{
    build_diagram, chessboard, face_census, wide_faces_present, Color, FaceCensus, FaceId,
    StandardDiagram,
};
use crate::error::{Error, Result};
use crate::goeritz::{goeritz_matrix, raw_above_entry, GoeritzForm};
use crate::seifert::{alexander, oracle_signature_nullity, seifert_matrix, unit_circle_zeros};
use crate::sigcore::{
    block_signature, rat, ratio, realize_trisum, signature, tridiagonal, Rational,
    SymmetricMatrix, TrisumSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionReason {
    AllButMax,
    TwoSided,
    AlternatingThreeSided,
}

#[derive(Debug, Clone, Copy)]
pub struct BasisElement {
    pub face: FaceId,
    pub column: usize,
    pub slot: usize,
    pub sides: usize,
    pub sign: i8,
    pub reason: SelectionReason,
}

/// One of the four curve families.  Elements are grouped by ascending
/// column; core columns list their faces in chain order starting just after
/// the omitted one, satellite columns by ascending position.
#[derive(Debug, Clone)]
pub struct SubspaceBasis {
    pub j: usize,
    pub surface: Color,
    pub elements: Vec<BasisElement>,
    /// Sides of the omitted column-1 face when column 1 is a core column
    /// and its widest face has fewer than four sides.
    pub column1_narrow_omission: Option<usize>,
    /// Set when the column-1 alternating selection had to round down.
    pub column1_round_down: bool,
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn three_sided_satellites(&self) -> usize {
        self.elements
            .iter()
            .filter(|e| e.reason == SelectionReason::AlternatingThreeSided)
            .count()
    }
}

struct ColumnFaces {
    /// sides per slot, in cyclic order.
    sides: Vec<usize>,
}

fn column_faces(diagram: &StandardDiagram, column: usize) -> ColumnFaces {
    let m = diagram.column_positions(column).len();
    ColumnFaces {
        sides: (0..m)
            .map(|slot| diagram.face(diagram.face_above(column, slot)).sides)
            .collect(),
    }
}

/// Core rule: keep every face except one with the most sides (first such in
/// cyclic-start order), listed in chain order starting just after it.
fn select_core(col: &ColumnFaces) -> (usize, Vec<usize>) {
    let m = col.sides.len();
    let omit = (0..m).max_by_key(|&s| (col.sides[s], std::cmp::Reverse(s))).unwrap();
    let slots = (1..m).map(|t| (omit + t) % m).collect();
    (omit, slots)
}

/// Satellite rule: all two-sided faces plus every other three-sided face,
/// scanning cyclically upward from a widest face when one exists.  Without a
/// wide face the scan starts at the first three-sided face and rounds down
/// when their number is odd.
fn select_satellite(col: &ColumnFaces) -> (Vec<usize>, Vec<usize>, bool) {
    let m = col.sides.len();
    let twos: Vec<usize> = (0..m).filter(|&s| col.sides[s] == 2).collect();
    let threes_exist = col.sides.iter().any(|&s| s == 3);
    if !threes_exist {
        return (twos, Vec::new(), false);
    }
    let anchor = (0..m).find(|&s| col.sides[s] >= 4);
    let (start, round_down) = match anchor {
        Some(a) => (a, false),
        None => {
            let first_three = (0..m).find(|&s| col.sides[s] == 3).unwrap();
            let count = col.sides.iter().filter(|&&s| s == 3).count();
            // Start at the first three-sided face itself: step back one so
            // the scan below encounters it first.
            ((first_three + m - 1) % m, count % 2 == 1)
        }
    };
    let mut threes = Vec::new();
    let mut take = true;
    for t in 1..=m {
        let s = (start + t) % m;
        if col.sides[s] == 3 {
            if take {
                threes.push(s);
            }
            take = !take;
        }
    }
    if round_down {
        threes.pop();
    }
    (twos, threes, round_down)
}

/// Chains of selected slots: maximal runs that are cyclically consecutive.
fn chains_of(selected: &[usize], m: usize) -> Vec<Vec<usize>> {
    if selected.is_empty() {
        return Vec::new();
    }
    assert!(selected.len() < m, "a full column cannot form chains");
    let mut sel = selected.to_vec();
    sel.sort_unstable();
    let in_sel = |s: usize| sel.binary_search(&s).is_ok();
    let mut chains = Vec::new();
    let mut used = vec![false; m];
    for &s in &sel {
        if used[s] {
            continue;
        }
        // Walk back to the start of this run.
        let mut head = s;
        while in_sel((head + m - 1) % m) {
            head = (head + m - 1) % m;
            if head == s {
                break;
            }
        }
        let mut chain = Vec::new();
        let mut cur = head;
        while in_sel(cur) && !used[cur] {
            used[cur] = true;
            chain.push(cur);
            cur = (cur + 1) % m;
        }
        chains.push(chain);
    }
    chains.sort_by_key(|c| c[0]);
    chains
}

/// Builds the four subspace bases for a generic diagram in which every
/// column beyond the first has a face with at least four sides.
pub fn select_bases(diagram: &StandardDiagram) -> Result<[SubspaceBasis; 4]> {
    let word = diagram.word();
    if classify(word).kind != ClassificationKind::Generic {
        return Err(Error::PipelineSkip("word is not generic".into()));
    }
    if !wide_faces_present(diagram) {
        return Err(Error::PipelineSkip(
            "a column beyond the first has no face with four or more sides".into(),
        ));
    }
    let g = diagram.generator_count();
    let mut bases = Vec::with_capacity(4);
    for j in 0..4usize {
        let surface = if j % 2 == 0 { Color::Black } else { Color::White };
        let mut elements = Vec::new();
        let mut column1_narrow_omission = None;
        let mut column1_round_down = false;
        // (column, slot) -> sign, assigned per chain below
        let mut selected: Vec<(usize, Vec<(usize, SelectionReason)>)> = Vec::new();
        for column in 1..=g {
            let col = column_faces(diagram, column);
            if column % 4 == j % 4 {
                let (omit, slots) = select_core(&col);
                if column == 1 && col.sides[omit] < 4 {
                    column1_narrow_omission = Some(col.sides[omit]);
                }
                selected.push((
                    column,
                    slots
                        .into_iter()
                        .map(|s| (s, SelectionReason::AllButMax))
                        .collect(),
                ));
            } else if column % 4 == (j + 2) % 4 {
                let (twos, threes, rounded) = select_satellite(&col);
                if column == 1 && rounded {
                    column1_round_down = true;
                }
                let mut slots: Vec<(usize, SelectionReason)> = twos
                    .into_iter()
                    .map(|s| (s, SelectionReason::TwoSided))
                    .chain(
                        threes
                            .into_iter()
                            .map(|s| (s, SelectionReason::AlternatingThreeSided)),
                    )
                    .collect();
                slots.sort_unstable_by_key(|&(s, _)| s);
                selected.push((column, slots));
            }
        }
        // Signs: alternate along every chain, then flip satellite chains so
        // each attached three-sided face matches its core contact.
        let mut signs: std::collections::HashMap<(usize, usize), i8> =
            std::collections::HashMap::new();
        for (column, slots) in &selected {
            let m = diagram.column_positions(*column).len();
            let slot_set: Vec<usize> = slots.iter().map(|&(s, _)| s).collect();
            for chain in chains_of(&slot_set, m) {
                for (t, &s) in chain.iter().enumerate() {
                    signs.insert((*column, s), if t % 2 == 0 { 1 } else { -1 });
                }
            }
        }
        for (column, slots) in &selected {
            if column % 4 != (j + 2) % 4 {
                continue;
            }
            let m = diagram.column_positions(*column).len();
            let slot_set: Vec<usize> = slots.iter().map(|&(s, _)| s).collect();
            for chain in chains_of(&slot_set, m) {
                if let Some(flip) = chain_flip(diagram, j, *column, &chain, &signs) {
                    if flip {
                        for &s in &chain {
                            let v = signs.get_mut(&(*column, s)).unwrap();
                            *v = -*v;
                        }
                    }
                }
            }
        }
        for (column, slots) in &selected {
            for &(slot, reason) in slots {
                let face = diagram.face_above(*column, slot);
                elements.push(BasisElement {
                    face,
                    column: *column,
                    slot,
                    sides: diagram.face(face).sides,
                    sign: signs[&(*column, slot)],
                    reason,
                });
            }
        }
        bases.push(SubspaceBasis {
            j,
            surface,
            elements,
            column1_narrow_omission,
            column1_round_down,
        });
    }
    Ok(bases.try_into().map_err(|_| Error::Internal("four bases".into())).unwrap())
}

/// The core face a satellite three-sided face touches to its right, if any.
fn right_contact(
    diagram: &StandardDiagram,
    column: usize,
    slot: usize,
) -> Option<(usize, usize)> {
    let g = diagram.generator_count();
    if column + 2 > g {
        return None;
    }
    let face = diagram.face(diagram.face_above(column, slot));
    let (u, v) = face.span.unwrap();
    let cr = diagram.crossings();
    let crossing = diagram
        .column_positions(column + 1)
        .iter()
        .copied()
        .find(|&p| cyclic_open(p, u, v, cr))?;
    let contact = diagram.face_containing(column + 2, crossing);
    let contact_face = diagram.face(contact);
    if let crate::diagram::FaceKind::Above { column: cc, slot: cs } = contact_face.kind {
        debug_assert_eq!(cc, column + 2);
        Some((cc, cs))
    } else {
        None
    }
}

fn cyclic_open(p: usize, u: usize, v: usize, _cr: usize) -> bool {
    if p == u || p == v {
        return false;
    }
    if u == v {
        return true;
    }
    if u < v {
        u < p && p < v
    } else {
        p > u || p < v
    }
}

/// Whether a satellite chain needs a global sign flip to make its attachment
/// coupling +1; None when the chain attaches to nothing selected.
fn chain_flip(
    diagram: &StandardDiagram,
    j: usize,
    column: usize,
    chain: &[usize],
    signs: &std::collections::HashMap<(usize, usize), i8>,
) -> Option<bool> {
    for &slot in chain {
        let face = diagram.face(diagram.face_above(column, slot));
        if face.sides != 3 {
            continue;
        }
        if let Some((core_col, core_slot)) = right_contact(diagram, column, slot) {
            if core_col % 4 == j % 4 {
                if let Some(&core_sign) = signs.get(&(core_col, core_slot)) {
                    let mine = signs[&(column, slot)];
                    return Some(mine != core_sign);
                }
            }
        }
    }
    None
}

/// Gram matrix of a basis: the Goeritz form restricted to its span, with the
/// orientation signs applied so same-column and cross-column couplings come
/// out +1.
pub fn gram(diagram: &StandardDiagram, basis: &SubspaceBasis) -> SymmetricMatrix {
    let n = basis.elements.len();
    let mut m = SymmetricMatrix::zero(n);
    for (i, a) in basis.elements.iter().enumerate() {
        for (k, b) in basis.elements.iter().enumerate().skip(i) {
            let raw = raw_above_entry(diagram, a.face, b.face);
            let v = if (a.sign * b.sign) < 0 { -raw } else { raw };
            m.set(i, k, v);
        }
    }
    m
}

#[derive(Debug, Clone, Serialize)]
pub enum SummandKind {
    /// A chain of two-sided faces: T(2^len).
    Twos { len: usize },
    /// A chain with a single three-sided face: T(2^a, 1, 2^b).
    Block { a: usize, b: usize },
    /// A core column with its attached blocks.
    Trisum { column: usize, core: Vec<i64>, blocks: Vec<(usize, usize)>, attach: Vec<usize> },
}

#[derive(Debug, Clone)]
pub struct Summand {
    /// Indices into the basis elements, in certified layout order.
    pub indices: Vec<usize>,
    pub kind: SummandKind,
    pub sigma: i64,
}

/// A certified block decomposition of one Gram matrix.
#[derive(Debug, Clone)]
pub struct DecompositionProof {
    pub summands: Vec<Summand>,
}

impl DecompositionProof {
    pub fn trisums(&self) -> impl Iterator<Item = (usize, TrisumSpec, i64)> + '_ {
        self.summands.iter().filter_map(|s| match &s.kind {
            SummandKind::Trisum {
                column,
                core,
                blocks,
                attach,
            } => Some((
                *column,
                TrisumSpec {
                    core: core.clone(),
                    blocks: blocks.clone(),
                    attach: attach.clone(),
                },
                s.sigma,
            )),
            _ => None,
        })
    }

    pub fn path_parts(&self) -> impl Iterator<Item = (&SummandKind, usize, i64)> + '_ {
        self.summands.iter().filter_map(|s| match &s.kind {
            SummandKind::Twos { len } => Some((&s.kind, *len, s.sigma)),
            SummandKind::Block { a, b } => Some((&s.kind, a + b + 1, s.sigma)),
            _ => None,
        })
    }
}

fn entry_i64(m: &SymmetricMatrix, i: usize, j: usize) -> Result<i64> {
    let v = m.get(i, j);
    if !v.denom().is_one() {
        return Err(Error::Decomposition(format!(
            "non-integer Gram entry {v} at ({i},{j})"
        )));
    }
    v.numer()
        .to_i64()
        .ok_or_else(|| Error::Decomposition(format!("huge Gram entry at ({i},{j})")))
}

/// Walks a path component: all degrees at most two, two ends, deterministic
/// orientation from its smallest-index end.
fn walk_path(indices: &[usize], neighbors: &[Vec<usize>]) -> Result<Vec<usize>> {
    if indices.len() == 1 {
        return Ok(indices.to_vec());
    }
    let mut ends: Vec<usize> = indices
        .iter()
        .copied()
        .filter(|&i| neighbors[i].len() == 1)
        .collect();
    for &i in indices {
        if neighbors[i].len() > 2 {
            return Err(Error::Decomposition(format!(
                "element {i} couples to {} others; not a chain",
                neighbors[i].len()
            )));
        }
    }
    if ends.len() != 2 {
        return Err(Error::Decomposition(format!(
            "component with {} chain ends",
            ends.len()
        )));
    }
    ends.sort_unstable();
    let mut order = vec![ends[0]];
    let mut prev = usize::MAX;
    let mut cur = ends[0];
    while order.len() < indices.len() {
        let next = neighbors[cur]
            .iter()
            .copied()
            .find(|&n| n != prev)
            .ok_or_else(|| Error::Decomposition("broken chain walk".into()))?;
        order.push(next);
        prev = cur;
        cur = next;
    }
    Ok(order)
}

fn classify_chain(
    m: &SymmetricMatrix,
    order: &[usize],
) -> Result<SummandKind> {
    let mut ones = Vec::new();
    for (t, &i) in order.iter().enumerate() {
        match entry_i64(m, i, i)? {
            2 => {}
            1 => ones.push(t),
            d => {
                return Err(Error::Decomposition(format!(
                    "chain diagonal {d} at element {i}"
                )))
            }
        }
        if t + 1 < order.len() && entry_i64(m, i, order[t + 1])? != 1 {
            return Err(Error::Decomposition(format!(
                "chain coupling at ({i},{}) is not +1",
                order[t + 1]
            )));
        }
    }
    match ones.len() {
        0 => Ok(SummandKind::Twos { len: order.len() }),
        1 => Ok(SummandKind::Block {
            a: ones[0],
            b: order.len() - 1 - ones[0],
        }),
        k => Err(Error::Decomposition(format!(
            "chain contains {k} three-sided faces"
        ))),
    }
}

/// Certifies that the Gram matrix is, up to a permutation of the basis, a
/// direct sum of T(2^a) chains, T(2^a,1,2^b) chains, and trisum matrices
/// whose cores come from the basis' own core columns.  The certificate is
/// re-verified entry by entry against an explicit realization.
pub fn decompose_structure(
    m: &SymmetricMatrix,
    basis: &SubspaceBasis,
) -> Result<DecompositionProof> {
    let n = m.dim();
    let mut neighbors = vec![Vec::new(); n];
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if !m.get(i, j).is_zero() {
                neighbors[i].push(j);
                neighbors[j].push(i);
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut components: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        components.entry(r).or_default().push(i);
    }
    let is_core = |i: usize| basis.elements[i].column % 4 == basis.j % 4;
    let mut summands = Vec::new();
    let mut comps: Vec<Vec<usize>> = components.into_values().collect();
    comps.sort_by_key(|c| c[0]);
    for comp in comps {
        let cores: Vec<usize> = comp.iter().copied().filter(|&i| is_core(i)).collect();
        if cores.is_empty() {
            let cols: std::collections::BTreeSet<usize> =
                comp.iter().map(|&i| basis.elements[i].column).collect();
            if cols.len() != 1 {
                return Err(Error::Decomposition(format!(
                    "satellite component spans columns {cols:?}"
                )));
            }
            let order = walk_path(&comp, &neighbors)?;
            let kind = classify_chain(m, &order)?;
            let sigma = verify_summand(m, &order, &kind)?;
            summands.push(Summand {
                indices: order,
                kind,
                sigma,
            });
            continue;
        }
        let core_cols: std::collections::BTreeSet<usize> =
            cores.iter().map(|&i| basis.elements[i].column).collect();
        if core_cols.len() != 1 {
            return Err(Error::Decomposition(format!(
                "core faces of columns {core_cols:?} couple"
            )));
        }
        let column = *core_cols.iter().next().unwrap();
        // Core elements were pushed in chain order; keep that order.
        let core_order: Vec<usize> = comp.iter().copied().filter(|&i| is_core(i)).collect();
        let mut core_diag = Vec::new();
        for (t, &i) in core_order.iter().enumerate() {
            core_diag.push(entry_i64(m, i, i)?);
            if t + 1 < core_order.len() && entry_i64(m, i, core_order[t + 1])? != 1 {
                return Err(Error::Decomposition(format!(
                    "core coupling at ({i},{}) is not +1",
                    core_order[t + 1]
                )));
            }
        }
        // Satellite chains hanging off this core.
        let sats: Vec<usize> = comp.iter().copied().filter(|&i| !is_core(i)).collect();
        let mut sat_parent: std::collections::HashMap<usize, usize> =
            sats.iter().map(|&i| (i, i)).collect();
        fn sfind(p: &mut std::collections::HashMap<usize, usize>, x: usize) -> usize {
            let px = p[&x];
            if px != x {
                let r = sfind(p, px);
                p.insert(x, r);
                r
            } else {
                x
            }
        }
        for &i in &sats {
            for &j in &neighbors[i] {
                if sats.contains(&j) {
                    let (a, b) = (sfind(&mut sat_parent, i), sfind(&mut sat_parent, j));
                    if a != b {
                        sat_parent.insert(a, b);
                    }
                }
            }
        }
        let mut chains: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for &i in &sats {
            let r = sfind(&mut sat_parent, i);
            chains.entry(r).or_default().push(i);
        }
        let mut blocks = Vec::new();
        let mut attach = Vec::new();
        let mut layout = core_order.clone();
        let mut chain_list: Vec<Vec<usize>> = chains.into_values().collect();
        chain_list.sort_by_key(|c| c[0]);
        for chain in chain_list {
            let sat_neighbors: Vec<Vec<usize>> = (0..n)
                .map(|i| {
                    if chain.contains(&i) {
                        neighbors[i]
                            .iter()
                            .copied()
                            .filter(|x| chain.contains(x))
                            .collect()
                    } else {
                        Vec::new()
                    }
                })
                .collect();
            let order = walk_path(&chain, &sat_neighbors)?;
            let kind = classify_chain(m, &order)?;
            let (a, b) = match kind {
                SummandKind::Block { a, b } => (a, b),
                _ => {
                    return Err(Error::Decomposition(
                        "attached chain has no three-sided face".into(),
                    ))
                }
            };
            // The three-sided element must couple to exactly one core entry,
            // with value +1, at a nonpositive core diagonal.
            let one_idx = order[a];
            let mut hooks = Vec::new();
            for (t, &c) in core_order.iter().enumerate() {
                for &i in &order {
                    let v = entry_i64(m, i, c)?;
                    if v != 0 {
                        hooks.push((i, t, v));
                    }
                }
            }
            if hooks.len() != 1 || hooks[0].0 != one_idx || hooks[0].2 != 1 {
                return Err(Error::Decomposition(format!(
                    "block attachment malformed: hooks {hooks:?}"
                )));
            }
            let g_idx = hooks[0].1;
            if core_diag[g_idx] > 0 {
                return Err(Error::Decomposition(format!(
                    "block attached to positive core entry {}",
                    core_diag[g_idx]
                )));
            }
            blocks.push((a, b));
            attach.push(g_idx + 1);
            layout.extend(order);
        }
        let kind = SummandKind::Trisum {
            column,
            core: core_diag,
            blocks,
            attach,
        };
        let sigma = verify_summand(m, &layout, &kind)?;
        summands.push(Summand {
            indices: layout,
            kind,
            sigma,
        });
    }
    // Soundness: the summand signatures must add up to the whole.
    let total: i64 = summands.iter().map(|s| s.sigma).sum();
    let whole = signature(m).signature();
    if total != whole {
        return Err(Error::Decomposition(format!(
            "summand signatures {total} != whole {whole}"
        )));
    }
    Ok(DecompositionProof { summands })
}

/// Rebuilds the summand's expected matrix and compares it entry by entry
/// with the Gram matrix restricted to the claimed indices.
fn verify_summand(m: &SymmetricMatrix, layout: &[usize], kind: &SummandKind) -> Result<i64> {
    let expected = match kind {
        SummandKind::Twos { len } => tridiagonal(&vec![2i64; *len]),
        SummandKind::Block { a, b } => tridiagonal(&crate::sigcore::block_diagonal(*a, *b)),
        SummandKind::Trisum {
            core,
            blocks,
            attach,
            ..
        } => realize_trisum(&TrisumSpec {
            core: core.clone(),
            blocks: blocks.clone(),
            attach: attach.clone(),
        })?,
    };
    let got = m.restrict(layout);
    if got != expected {
        return Err(Error::Decomposition(format!(
            "summand mismatch on indices {layout:?}"
        )));
    }
    Ok(signature(&expected).signature())
}

/// One asserted inequality (or identity) with its slack.
#[derive(Debug, Clone, Serialize)]
pub struct BoundLink {
    pub name: String,
    pub slack: String,
    pub holds: bool,
}

fn link(name: &str, slack: Rational) -> BoundLink {
    BoundLink {
        name: name.to_string(),
        holds: !slack.is_negative(),
        slack: slack.to_string(),
    }
}

fn identity_link(name: &str, lhs: Rational, rhs: Rational) -> BoundLink {
    BoundLink {
        name: name.to_string(),
        holds: lhs == rhs,
        slack: (lhs - rhs).to_string(),
    }
}

/// Everything the subspace pipeline produces for one word.
#[derive(Debug, Clone, Serialize)]
pub struct PipelineData {
    pub dims: [usize; 4],
    pub sigma_g: [i64; 4],
    pub f3_used: usize,
    pub p: usize,
    pub q: usize,
    pub dim_t: usize,
    pub sigma_t: i64,
    pub sum_block_dim: i64,
    pub sum_trace_minus: i64,
    pub dimension_slack: String,
    pub links: Vec<BoundLink>,
    pub subspace_links: Vec<BoundLink>,
    pub final_links: Vec<BoundLink>,
    pub column1_narrow_omission: Option<usize>,
    pub column1_round_down: bool,
}

impl PipelineData {
    pub fn all_hold(&self) -> bool {
        self.links.iter().all(|l| l.holds)
            && self.subspace_links.iter().all(|l| l.holds)
            && self.final_links.iter().all(|l| l.holds)
            && !self.dimension_slack.starts_with('-')
    }
}

/// Dimension count: Σ dim X_j >= f2 + (f3-1)/2 + cr - n.
pub fn check_dimension_bound(dims: &[usize; 4], census: &FaceCensus, g: usize) -> Rational {
    let total: usize = dims.iter().sum();
    let bound = rat(census.f_count(2) as i64)
        + ratio(census.f_count(3) as i64 - 1, 2)
        + rat(census.cr as i64 - g as i64);
    rat(total as i64) - bound
}

struct SignatureSumInputs<'a> {
    sigma_g: [i64; 4],
    trisums: Vec<(usize, TrisumSpec, i64)>,
    paths: Vec<(usize, i64, bool)>, // (dim, sigma, has_one)
    census: &'a FaceCensus,
    g: usize,
    f3_used: usize,
}

/// The chained signature-sum bound Σ σ(G_j) >= -(f2+f3)/2 + 2, asserted one
/// link at a time.
fn check_signature_sum_bound(inp: &SignatureSumInputs) -> (Vec<BoundLink>, usize, usize, i64, i64, usize, i64) {
    let mut links = Vec::new();
    let sum_sigma_g: i64 = inp.sigma_g.iter().sum();
    let sum_sigma_m: i64 = inp.trisums.iter().map(|&(_, _, s)| s).sum();
    let sigma_t: i64 = inp.paths.iter().map(|&(_, s, _)| s).sum();
    let dim_t: usize = inp.paths.iter().map(|&(d, _, _)| d).sum();
    links.push(identity_link(
        "gram_sum_equals_summands",
        rat(sum_sigma_g),
        rat(sum_sigma_m + sigma_t),
    ));
    links.push(link(
        "path_signature_at_least_half_dim",
        rat(sigma_t) - ratio(dim_t as i64, 2),
    ));
    let sum_b: i64 = inp.trisums.iter().map(|(_, s, _)| s.block_dim()).sum();
    let f2 = inp.census.f_count(2) as i64;
    let f3 = inp.census.f_count(3) as i64;
    links.push(identity_link(
        "block_and_path_count",
        rat(sum_b + dim_t as i64),
        rat(f2 + inp.f3_used as i64),
    ));
    let sum_tr: i64 = inp.trisums.iter().map(|(_, s, _)| s.trace_minus()).sum();
    let p = inp
        .trisums
        .iter()
        .filter(|(_, s, _)| s.trace_minus() < 0)
        .count();
    let q = inp
        .trisums
        .iter()
        .filter(|(_, s, _)| s.trace_minus() == 0 && s.block_dim() == 0)
        .count();
    links.push(link(
        "trace_bound_vs_census",
        rat(sum_tr) - (rat(p as i64) - rat(inp.census.excess())),
    ));
    links.push(link(
        "two_and_three_sided_surplus",
        rat(2 * f2 + f3) - rat(4 + inp.census.excess()),
    ));
    links.push(link(
        "trace_bound_combined",
        rat(sum_tr) - (rat(p as i64) - (rat(2 * f2 + f3) - rat(4))),
    ));
    // Per-column signature bounds.
    let mut per_column = Rational::zero();
    let mut per_column_holds = true;
    for (column, spec, sigma) in &inp.trisums {
        let bound = if spec.trace_minus() == 0 && spec.block_dim() == 0 {
            Rational::zero()
        } else {
            ratio(-1, 2) + ratio(spec.trace_minus(), 2) + ratio(spec.block_dim(), 2)
        };
        let slack = rat(*sigma) - &bound;
        if slack.is_negative() {
            per_column_holds = false;
        }
        per_column += slack;
        let _ = column;
    }
    links.push(BoundLink {
        name: "per_column_signature_bounds".into(),
        holds: per_column_holds,
        slack: per_column.to_string(),
    });
    links.push(link(
        "summand_signature_sum",
        rat(sum_sigma_m)
            - (ratio(-((inp.g - q) as i64), 2) + ratio(sum_tr, 2) + ratio(sum_b, 2)),
    ));
    links.push(link(
        "used_three_sided_count",
        rat(p as i64 + q as i64 + inp.f3_used as i64 - inp.g as i64),
    ));
    links.push(link(
        "signature_sum_bound",
        rat(sum_sigma_g) - (ratio(-(f2 + f3), 2) + rat(2)),
    ));
    (links, p, q, sum_tr, sum_b, dim_t, sigma_t)
}

/// Two-sided subspace bound for a form G on H and a subspace X:
/// |σ(G) - σ(G|X)| <= dim H - dim X, asserted as two one-sided links.
fn subspace_links(
    name: &str,
    form: &GoeritzForm,
    sub_sigma: i64,
    sub_dim: usize,
) -> Vec<BoundLink> {
    let sigma_h = form.sigma();
    let dim_h = form.dim() as i64;
    vec![
        link(
            &format!("{name}_plus"),
            rat(sigma_h + dim_h - sub_sigma - sub_dim as i64),
        ),
        link(
            &format!("{name}_minus"),
            rat(-sigma_h + dim_h + sub_sigma - sub_dim as i64),
        ),
    ]
}

/// Runs the four-basis pipeline on a generic diagram.
pub fn run_pipeline(
    diagram: &StandardDiagram,
    census: &FaceCensus,
    sigma: i64,
    b1: i64,
) -> Result<PipelineData> {
    let g = diagram.generator_count();
    let bases = select_bases(diagram)?;
    let gb = goeritz_matrix(diagram, Color::Black)?;
    let gw = goeritz_matrix(diagram, Color::White)?;
    let mut dims = [0usize; 4];
    let mut sigma_g = [0i64; 4];
    let mut f3_used = 0;
    let mut trisums = Vec::new();
    let mut paths = Vec::new();
    let mut subspace = Vec::new();
    for basis in &bases {
        let m = gram(diagram, basis);
        let proof = decompose_structure(&m, basis)?;
        dims[basis.j] = basis.dim();
        sigma_g[basis.j] = signature(&m).signature();
        f3_used += basis.three_sided_satellites();
        for t in proof.trisums() {
            trisums.push(t);
        }
        for (kind, dim, sigma) in proof.path_parts() {
            let has_one = matches!(kind, SummandKind::Block { .. });
            // Closed-form cross-check against the certified block shape.
            let expected = match kind {
                SummandKind::Twos { len } => *len as i64,
                SummandKind::Block { a, b } => block_signature(*a, *b),
                SummandKind::Trisum { .. } => unreachable!(),
            };
            if expected != sigma {
                return Err(Error::Internal(format!(
                    "path part signature {sigma} != closed form {expected}"
                )));
            }
            paths.push((dim, sigma, has_one));
        }
        let form = if basis.j % 2 == 0 { &gb } else { &gw };
        subspace.extend(subspace_links(
            &format!("subspace_bound_x{}", basis.j),
            form,
            sigma_g[basis.j],
            basis.dim(),
        ));
    }
    if trisums.len() != g {
        return Err(Error::Decomposition(format!(
            "{} trisum summands for {g} columns",
            trisums.len()
        )));
    }
    trisums.sort_by_key(|&(c, _, _)| c);
    let dimension_slack = check_dimension_bound(&dims, census, g);
    let inputs = SignatureSumInputs {
        sigma_g,
        trisums,
        paths,
        census,
        g,
        f3_used,
    };
    let (links, p, q, sum_tr, sum_b, dim_t, sigma_t) = check_signature_sum_bound(&inputs);
    // Final chain.
    let mut final_links = Vec::new();
    final_links.push(identity_link(
        "doubled_form_identity",
        rat(4 * sigma - 2 * census.cr as i64),
        rat(2 * gb.sigma() + 2 * gw.sigma()),
    ));
    final_links.push(link(
        "combined_bound",
        rat(4 * sigma)
            - (ratio(3, 2) + ratio(census.f_count(2) as i64, 2) + rat(census.cr as i64 - g as i64)),
    ));
    final_links.push(link("integral_bound", rat(4 * sigma - b1 - 2)));
    final_links.push(link(
        "quarter_bound",
        rat(sigma) - (ratio(b1, 4) + ratio(1, 2)),
    ));
    Ok(PipelineData {
        dims,
        sigma_g,
        f3_used,
        p,
        q,
        dim_t,
        sigma_t,
        sum_block_dim: sum_b,
        sum_trace_minus: sum_tr,
        dimension_slack: dimension_slack.to_string(),
        links,
        subspace_links: subspace,
        final_links,
        column1_narrow_omission: bases[1].column1_narrow_omission,
        column1_round_down: bases[3].column1_round_down,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportStatus {
    Pass,
    Skip,
    Fail,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    /// Tolerance on ||z| - 1| for unit-circle zero counting.
    pub tol: f64,
    /// Reduction step budget; None picks the default.
    pub max_steps: Option<usize>,
    /// Compute Alexander polynomials and count unit-circle zeros.
    pub check_roots: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tol: 1e-9,
            max_steps: None,
            check_roots: true,
        }
    }
}

/// Everything checked for one braid word.
#[derive(Debug, Clone, Serialize)]
pub struct ProofReport {
    pub word: String,
    pub reduced: String,
    pub kind: String,
    pub strands: usize,
    pub cr: usize,
    pub n: usize,
    pub b1: i64,
    pub sigma: Option<i64>,
    pub nullity: Option<usize>,
    pub components: usize,
    pub f2: Option<usize>,
    pub f3: Option<usize>,
    pub s: Option<usize>,
    pub s_prime: Option<usize>,
    pub alexander_degree: Option<usize>,
    pub zeros_on_circle: Option<usize>,
    pub pipeline: Option<PipelineData>,
    pub pipeline_skip_reason: Option<String>,
    pub theorem_slack: Option<i64>,
    /// The greedy reduction ran out of steps before reaching a fixpoint;
    /// every check still refers to the same closure, but the subspace
    /// pipeline is not attempted.
    pub reduction_budget_exhausted: bool,
    pub status: ReportStatus,
    pub failures: Vec<String>,
}

impl ProofReport {
    pub fn pipeline_ran(&self) -> bool {
        self.pipeline.is_some()
    }
}

struct NonsplitData {
    sigma: i64,
    nullity: usize,
    b1: i64,
    census: Option<FaceCensus>,
    alexander_degree: Option<usize>,
    zeros_on_circle: Option<usize>,
    failures: Vec<String>,
}

/// Invariants of a nonsplit word along both routes, with cross-checks.
fn nonsplit_invariants(word: &BraidWord, opts: &VerifyOptions) -> Result<NonsplitData> {
    let mut failures = Vec::new();
    let b1 = betti(word)?;
    let (sigma_oracle, nullity) = oracle_signature_nullity(word)?;
    let v = seifert_matrix(word)?;
    if v.dim() as i64 != b1 {
        failures.push(format!("fiber rank {} != b1 {}", v.dim(), b1));
    }
    let mut census = None;
    if word.generators() >= 1 && word.crossings() > 0 {
        let diagram = build_diagram(word)?;
        census = Some(face_census(&diagram)?);
        let chess = chessboard(&diagram)?;
        if !chess.connected() {
            failures.push(format!(
                "disconnected chessboard graphs ({} black, {} white components)",
                chess.black_components, chess.white_components
            ));
        }
        let sigma_gl = crate::goeritz::gl_signature(&diagram)?;
        if sigma_gl != sigma_oracle {
            failures.push(format!(
                "signature mismatch: chessboard {sigma_gl} vs fiber {sigma_oracle}"
            ));
        }
    }
    let mut alexander_degree = None;
    let mut zeros_on_circle = None;
    if opts.check_roots {
        let poly = alexander(word)?;
        alexander_degree = Some(poly.degree());
        if nullity == 0 {
            if poly.degree() as i64 != b1 {
                failures.push(format!(
                    "Alexander degree {} != b1 {b1} at nullity 0",
                    poly.degree()
                ));
            }
            if !poly.is_constant() && !poly.is_palindromic_up_to_sign() {
                failures.push("Alexander polynomial is not reciprocal".into());
            }
        }
        let (on, total) = unit_circle_zeros(&poly, opts.tol)?;
        zeros_on_circle = Some(on);
        if total > 0 && 4 * on <= total {
            failures.push(format!("only {on} of {total} zeros on the unit circle"));
        }
        if (on as i64) < sigma_oracle {
            failures.push(format!(
                "unit-circle zeros {on} below signature {sigma_oracle}"
            ));
        }
    }
    Ok(NonsplitData {
        sigma: sigma_oracle,
        nullity,
        b1,
        census,
        alexander_degree,
        zeros_on_circle,
        failures,
    })
}

/// Runs the whole verification for one word: reduction, classification,
/// cross-checked invariants, and (for generic words meeting the wide-face
/// condition) the full subspace pipeline.  Never panics on valid input; all
/// violations are reported in the returned record.
pub fn check_final(word: &BraidWord, opts: &VerifyOptions) -> ProofReport {
    let budget = opts
        .max_steps
        .unwrap_or(10 * word.crossings() * word.crossings() + 64);
    let trace = reduce_with_budget(word, budget);
    let reduced = trace.result.clone();
    let cls = classify(&reduced);
    let mut report = ProofReport {
        word: word.to_string(),
        reduced: reduced.to_string(),
        kind: format!("{:?}", cls.kind),
        strands: reduced.strands(),
        cr: reduced.crossings(),
        n: reduced.generators(),
        b1: 0,
        sigma: None,
        nullity: None,
        components: reduced.closure_components(),
        f2: None,
        f3: None,
        s: None,
        s_prime: None,
        alexander_degree: None,
        zeros_on_circle: None,
        pipeline: None,
        pipeline_skip_reason: None,
        theorem_slack: None,
        reduction_budget_exhausted: trace.budget_exhausted,
        status: ReportStatus::Skip,
        failures: Vec::new(),
    };
    let mut run = || -> Result<()> {
        match cls.kind {
            ClassificationKind::Unknot => {
                report.b1 = 0;
                report.sigma = Some(0);
                report.nullity = Some(0);
                report.pipeline_skip_reason = Some("unknot closure".into());
            }
            ClassificationKind::Split => {
                let mut sigma = 0i64;
                let mut b1 = 0i64;
                for part in split_components(&reduced) {
                    if part.crossings() == 0 {
                        continue;
                    }
                    let data = nonsplit_invariants(&part, opts)?;
                    report.failures.extend(
                        data.failures
                            .iter()
                            .map(|f| format!("part {part}: {f}")),
                    );
                    sigma += data.sigma;
                    b1 += data.b1;
                }
                report.b1 = b1;
                report.sigma = Some(sigma);
                report.pipeline_skip_reason = Some("split closure".into());
            }
            _ => {
                let data = nonsplit_invariants(&reduced, opts)?;
                report.failures.extend(data.failures.iter().cloned());
                report.b1 = data.b1;
                report.sigma = Some(data.sigma);
                report.nullity = Some(data.nullity);
                report.alexander_degree = data.alexander_degree;
                report.zeros_on_circle = data.zeros_on_circle;
                if let Some(census) = &data.census {
                    report.f2 = Some(census.f_count(2));
                    report.f3 = Some(census.f_count(3));
                    report.s = Some(census.s);
                    report.s_prime = Some(census.s_prime);
                }
                match cls.kind {
                    ClassificationKind::Torus2k(k) => {
                        if data.sigma != k as i64 - 1 || data.b1 != k as i64 - 1 {
                            report.failures.push(format!(
                                "torus closure expects sigma = b1 = {}, got sigma {} b1 {}",
                                k - 1,
                                data.sigma,
                                data.b1
                            ));
                        }
                        report.pipeline_skip_reason =
                            Some("two-strand torus closure".into());
                    }
                    ClassificationKind::ConnectedSum => {
                        report.pipeline_skip_reason =
                            Some("connected sum: a generator is used once".into());
                    }
                    ClassificationKind::Generic if trace.budget_exhausted => {
                        report.pipeline_skip_reason =
                            Some("reduction budget exhausted".into());
                    }
                    ClassificationKind::Generic => {
                        let diagram = build_diagram(&reduced)?;
                        if !wide_faces_present(&diagram) {
                            report.pipeline_skip_reason = Some(
                                "a column beyond the first has no wide face".into(),
                            );
                        } else {
                            let census = data.census.as_ref().ok_or_else(|| {
                                Error::Internal("census missing for generic word".into())
                            })?;
                            let pipe =
                                run_pipeline(&diagram, census, data.sigma, data.b1)?;
                            if !pipe.all_hold() {
                                report
                                    .failures
                                    .push("a pipeline bound failed".into());
                            }
                            report.pipeline = Some(pipe);
                        }
                    }
                    _ => unreachable!(),
                }
            }
        }
        Ok(())
    };
    if let Err(e) = run() {
        report.failures.push(e.to_string());
    }
    if report.b1 > 0 {
        if let Some(sigma) = report.sigma {
            let slack = 4 * sigma - report.b1 - 2;
            report.theorem_slack = Some(slack);
            if slack < 0 {
                report
                    .failures
                    .push(format!("quarter bound violated: 4*{sigma} < {} + 2", report.b1));
            }
        }
    }
    report.status = if !report.failures.is_empty() {
        ReportStatus::Fail
    } else if report.pipeline.is_some() {
        ReportStatus::Pass
    } else {
        ReportStatus::Skip
    };
    report
}
