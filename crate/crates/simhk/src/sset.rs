//! Finite simplicial sets presented by nondegenerate cells with a face
//! table, and simplicial morphisms stored on cells.
//!
//! Every element is kept in Eilenberg-Zilber normal form: a pair of a
//! nondegenerate cell and a degeneracy epi. The action of an arbitrary
//! simplex map is computed by epi-mono factoring and walking the face
//! table, so degeneracy of any element is decidable by inspection.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::simplex::{enumerate_maps, MapKind, SimplexMap};

/// An element of a finite simplicial set in normal form: `cell` acted on
/// by the degeneracy `epi`. Nondegenerate exactly when `epi` is the
/// identity. The derived order (cell id, then epi lexicographically) is
/// the canonical order used by every deterministic choice downstream.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    pub cell: usize,
    pub epi: SimplexMap,
}

impl Element {
    pub fn nondegenerate(cell: usize, dim: u8) -> Self {
        Element {
            cell,
            epi: SimplexMap::identity(dim),
        }
    }

    pub fn dim(&self) -> u8 {
        self.epi.dom_dim()
    }

    pub fn is_degenerate(&self) -> bool {
        !self.epi.is_identity()
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.epi.is_identity() {
            write!(f, "c{}", self.cell)
        } else {
            write!(f, "c{}*{:?}", self.cell, self.epi)
        }
    }
}

/// A finite simplicial set: cell dimensions, a total face table, and a
/// printable label per cell. Labels are carried for the text format and
/// witnesses; equality and hashing ignore them.
#[derive(Clone)]
pub struct FiniteSSet {
    dims: Vec<u8>,
    faces: Vec<Vec<Element>>,
    labels: Vec<String>,
}

impl PartialEq for FiniteSSet {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims && self.faces == other.faces
    }
}

impl Eq for FiniteSSet {}

impl std::hash::Hash for FiniteSSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.dims.hash(state);
        self.faces.hash(state);
    }
}

impl fmt::Debug for FiniteSSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteSSet[")?;
        for c in 0..self.dims.len() {
            if c > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}:{}", self.labels[c], self.dims[c])?;
        }
        write!(f, "]")
    }
}

impl FiniteSSet {
    /// Builds a simplicial set after checking the shape of the face table
    /// (totality, dimensions, well-formed entries). Coherence of the
    /// simplicial identities is a separate, deeper check: see `validate`.
    pub fn new(dims: Vec<u8>, faces: Vec<Vec<Element>>, labels: Vec<String>) -> Result<Arc<Self>> {
        let n = dims.len();
        if faces.len() != n || labels.len() != n {
            return Err(Error::DimMismatch(format!(
                "{} cells but {} face rows and {} labels",
                n,
                faces.len(),
                labels.len()
            )));
        }
        let mut seen = HashMap::new();
        for (c, l) in labels.iter().enumerate() {
            if seen.insert(l.clone(), c).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        for c in 0..n {
            let d = dims[c];
            let expected = if d == 0 { 0 } else { d as usize + 1 };
            if faces[c].len() != expected {
                return Err(Error::FaceCount {
                    cell: c,
                    got: faces[c].len(),
                    expected,
                });
            }
            for (i, e) in faces[c].iter().enumerate() {
                if e.cell >= n {
                    return Err(Error::UnknownCell(e.cell));
                }
                if e.dim() != d - 1 {
                    return Err(Error::FaceDim {
                        cell: c,
                        index: i as u8,
                        got: e.dim(),
                        expected: d - 1,
                    });
                }
                if e.epi.cod_dim() != dims[e.cell] || !e.epi.is_epi() {
                    return Err(Error::FaceDim {
                        cell: c,
                        index: i as u8,
                        got: e.epi.cod_dim(),
                        expected: dims[e.cell],
                    });
                }
            }
        }
        Ok(Arc::new(FiniteSSet { dims, faces, labels }))
    }

    pub fn empty() -> Arc<Self> {
        FiniteSSet::new(vec![], vec![], vec![]).unwrap()
    }

    pub fn n_cells(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dim_of(&self, cell: usize) -> u8 {
        self.dims[cell]
    }

    pub fn dims(&self) -> &[u8] {
        &self.dims
    }

    pub fn label(&self, cell: usize) -> &str {
        &self.labels[cell]
    }

    pub fn cell_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn faces_of(&self, cell: usize) -> &[Element] {
        &self.faces[cell]
    }

    pub fn face(&self, cell: usize, i: u8) -> &Element {
        &self.faces[cell][i as usize]
    }

    /// Largest cell dimension, or None on the empty object.
    pub fn max_dim(&self) -> Option<u8> {
        self.dims.iter().copied().max()
    }

    pub fn cells_of_dim(&self, d: u8) -> Vec<usize> {
        (0..self.dims.len()).filter(|&c| self.dims[c] == d).collect()
    }

    /// Cell ids sorted by (dimension, id): the order in which searches
    /// and assignments walk the cells.
    pub fn cells_by_dim(&self) -> Vec<usize> {
        let mut cells: Vec<usize> = (0..self.dims.len()).collect();
        cells.sort_by_key(|&c| (self.dims[c], c));
        cells
    }

    /// The action x·φ in normal form, for φ into [dim x].
    pub fn eval(&self, x: &Element, phi: &SimplexMap) -> Element {
        debug_assert_eq!(phi.cod_dim(), x.dim(), "action dimension mismatch");
        let psi = x.epi.compose(phi).expect("composable by the dim check");
        let (mono, epi) = psi.epi_mono_factor();
        let y = self.mono_eval(x.cell, &mono);
        Element {
            cell: y.cell,
            epi: y.epi.compose(&epi).expect("epi chains compose"),
        }
    }

    /// The action of a mono on a cell, by peeling off the largest missing
    /// index and descending into the face table.
    fn mono_eval(&self, cell: usize, mono: &SimplexMap) -> Element {
        if mono.is_identity() {
            return Element::nondegenerate(cell, self.dims[cell]);
        }
        let d = mono.cod_dim();
        let missing = (0..=d).rev().find(|v| !mono.values().contains(v)).unwrap();
        let rest: Vec<u8> = mono
            .values()
            .iter()
            .map(|&v| if v > missing { v - 1 } else { v })
            .collect();
        let rest = SimplexMap::new(rest, d).expect("still a valid mono");
        self.eval(&self.faces[cell][missing as usize], &rest)
    }

    /// The action on a nondegenerate cell.
    pub fn eval_cell(&self, cell: usize, phi: &SimplexMap) -> Element {
        self.eval(&Element::nondegenerate(cell, self.dims[cell]), phi)
    }

    /// The i-th vertex of an element.
    pub fn vertex_of(&self, x: &Element, i: u8) -> Element {
        self.eval(x, &SimplexMap::vertex(i, x.dim()))
    }

    pub fn vertices_of(&self, x: &Element) -> Vec<Element> {
        (0..=x.dim()).map(|i| self.vertex_of(x, i)).collect()
    }

    /// All elements at level n, sorted by (cell id, degeneracy).
    pub fn elements_at(&self, n: u8) -> Vec<Element> {
        let mut out = Vec::new();
        for c in 0..self.dims.len() {
            if self.dims[c] <= n {
                for epi in enumerate_maps(n, self.dims[c], MapKind::Epi) {
                    out.push(Element { cell: c, epi });
                }
            }
        }
        out
    }

    /// Checks the simplicial-identity coherence of the face table: for
    /// every cell and every i < j, the two ways of taking a double face
    /// agree. Together with normal forms this pins down the whole action,
    /// so a pass here means x·(α∘β) = (x·α)·β for all composable pairs.
    pub fn validate(&self) -> Result<()> {
        for c in 0..self.dims.len() {
            let d = self.dims[c];
            if d < 2 {
                continue;
            }
            for j in 1..=d {
                for i in 0..j {
                    let left = self.eval(&self.faces[c][j as usize], &SimplexMap::delta(d - 1, i)?);
                    let right =
                        self.eval(&self.faces[c][i as usize], &SimplexMap::delta(d - 1, j - 1)?);
                    if left != right {
                        return Err(Error::Incoherent { cell: c, i, j });
                    }
                }
            }
        }
        Ok(())
    }
}

/// The nonempty vertex subsets of [n], sorted by (size, lex): the
/// canonical cell order of the standard simplex and its subobjects.
pub fn simplex_subsets(n: u8) -> Vec<Vec<u8>> {
    let mut subsets: Vec<Vec<u8>> = (1u32..(1u32 << (n + 1)))
        .map(|bits| (0..=n).filter(|&v| bits & (1 << v) != 0).collect())
        .collect();
    subsets.sort_by(|a: &Vec<u8>, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    subsets
}

pub fn subset_label(s: &[u8]) -> String {
    if s.iter().all(|&v| v <= 9) {
        s.iter().map(|v| v.to_string()).collect()
    } else {
        s.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("_")
    }
}

fn subsets_to_sset(subsets: &[Vec<u8>]) -> Arc<FiniteSSet> {
    let index: HashMap<&[u8], usize> = subsets
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();
    let dims: Vec<u8> = subsets.iter().map(|s| (s.len() - 1) as u8).collect();
    let faces: Vec<Vec<Element>> = subsets
        .iter()
        .map(|s| {
            if s.len() == 1 {
                return vec![];
            }
            (0..s.len())
                .map(|i| {
                    let mut sub = s.clone();
                    sub.remove(i);
                    Element::nondegenerate(index[sub.as_slice()], (sub.len() - 1) as u8)
                })
                .collect()
        })
        .collect();
    let labels = subsets.iter().map(|s| subset_label(s)).collect();
    FiniteSSet::new(dims, faces, labels).expect("standard cell tables are well shaped")
    // validate() holds: double faces of a subset agree by construction.
}

/// The standard simplex Δ[n]: one cell per nonempty vertex subset of [n].
pub fn simplex(n: u8) -> Arc<FiniteSSet> {
    subsets_to_sset(&simplex_subsets(n))
}

/// The cycle ∂Δ[n] (all proper faces) with its inclusion into Δ[n].
/// ∂Δ[0] is empty.
pub fn cycle(n: u8) -> (Arc<FiniteSSet>, SMorphism) {
    let subsets: Vec<Vec<u8>> = simplex_subsets(n)
        .into_iter()
        .filter(|s| s.len() != n as usize + 1)
        .collect();
    let sub = subsets_to_sset(&subsets);
    let inclusion = subset_inclusion(&sub, &subsets, n);
    (sub, inclusion)
}

/// The horn Λ_k[n] (faces not containing all of [n]∖{k}) with its
/// inclusion into Δ[n]. Requires n ≥ 1 and k ≤ n.
pub fn horn(n: u8, k: u8) -> Result<(Arc<FiniteSSet>, SMorphism)> {
    if n == 0 || k > n {
        return Err(Error::GeneratorIndex {
            kind: "horn",
            index: k,
            dim: n,
        });
    }
    let subsets: Vec<Vec<u8>> = simplex_subsets(n)
        .into_iter()
        .filter(|s| (0..=n).any(|v| v != k && !s.contains(&v)))
        .collect();
    let sub = subsets_to_sset(&subsets);
    let inclusion = subset_inclusion(&sub, &subsets, n);
    Ok((sub, inclusion))
}

fn subset_inclusion(sub: &Arc<FiniteSSet>, subsets: &[Vec<u8>], n: u8) -> SMorphism {
    let ambient = simplex(n);
    let all = simplex_subsets(n);
    let index: HashMap<&[u8], usize> = all
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();
    let map = subsets
        .iter()
        .map(|s| Element::nondegenerate(index[s.as_slice()], (s.len() - 1) as u8))
        .collect();
    make_morphism(sub, &ambient, map).expect("subset inclusions are natural")
}

/// Translates an element of Δ[n] (canonical cell order) to the simplex
/// map [dim x]→[n] it names under Yoneda.
pub fn element_to_simplex_map(n: u8, x: &Element) -> SimplexMap {
    let subsets = simplex_subsets(n);
    let s = &subsets[x.cell];
    let values = x.epi.values().iter().map(|&v| s[v as usize]).collect();
    SimplexMap::new(values, n + 1).expect("epi through a sorted subset is monotone")
}

/// Translates a simplex map [d]→[n] to the element of Δ[n] it names.
pub fn simplex_map_to_element(n: u8, phi: &SimplexMap) -> Element {
    let (mono, epi) = phi.epi_mono_factor();
    let subsets = simplex_subsets(n);
    let cell = subsets
        .iter()
        .position(|s| s.as_slice() == mono.values())
        .expect("every subset of [n] is a cell of the simplex");
    Element { cell, epi }
}

/// The morphism Δ[m]→Δ[n] induced by a simplex map [m]→[n] (Yoneda on
/// arrows).
pub fn simplex_morphism(phi: &SimplexMap) -> SMorphism {
    let source = simplex(phi.dom_dim());
    let target = simplex(phi.cod_dim());
    let map = simplex_subsets(phi.dom_dim())
        .iter()
        .map(|s| {
            let values = s.iter().map(|&v| phi.at(v as usize)).collect();
            let through = SimplexMap::new(values, phi.cod_size()).unwrap();
            simplex_map_to_element(phi.cod_dim(), &through)
        })
        .collect();
    make_morphism(&source, &target, map).expect("Yoneda images are natural")
}

/// The discrete simplicial set on `size` points: only fully degenerate
/// simplices in positive dimension.
pub fn discrete(size: usize) -> Arc<FiniteSSet> {
    let labels = (0..size).map(|i| format!("p{i}")).collect();
    FiniteSSet::new(vec![0; size], vec![vec![]; size], labels).unwrap()
}

/// The subobject spanned by the given cells, which must be closed under
/// faces; returns it with its inclusion.
pub fn sub_sset(x: &Arc<FiniteSSet>, keep: &[usize]) -> Result<(Arc<FiniteSSet>, SMorphism)> {
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    let mut renumber = HashMap::new();
    for (new, &old) in keep.iter().enumerate() {
        renumber.insert(old, new);
    }
    for &old in &keep {
        for e in x.faces_of(old) {
            if !renumber.contains_key(&e.cell) {
                return Err(Error::NotFaceClosed(old));
            }
        }
    }
    let dims = keep.iter().map(|&c| x.dim_of(c)).collect();
    let faces = keep
        .iter()
        .map(|&c| {
            x.faces_of(c)
                .iter()
                .map(|e| Element {
                    cell: renumber[&e.cell],
                    epi: e.epi.clone(),
                })
                .collect()
        })
        .collect();
    let labels = keep.iter().map(|&c| x.label(c).to_string()).collect();
    let sub = FiniteSSet::new(dims, faces, labels)?;
    let map = keep
        .iter()
        .map(|&c| Element::nondegenerate(c, x.dim_of(c)))
        .collect();
    let inclusion = make_morphism(&sub, x, map)?;
    Ok((sub, inclusion))
}

/// A simplicial morphism, stored on the nondegenerate cells of its source
/// and extended to all elements by the action.
#[derive(Clone, PartialEq, Eq)]
pub struct SMorphism {
    pub source: Arc<FiniteSSet>,
    pub target: Arc<FiniteSSet>,
    pub map: Vec<Element>,
}

impl fmt::Debug for SMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SMorphism{{")?;
        for c in 0..self.map.len() {
            if c > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}->{:?}", self.source.label(c), self.map[c])?;
        }
        write!(f, "}}")
    }
}

impl SMorphism {
    /// Image of an arbitrary element: f(c·ψ) = f(c)·ψ.
    pub fn apply(&self, x: &Element) -> Element {
        self.target.eval(&self.map[x.cell], &x.epi)
    }

    pub fn is_identity_shape(&self) -> bool {
        self.source == self.target
            && self
                .map
                .iter()
                .enumerate()
                .all(|(c, e)| e.cell == c && !e.is_degenerate())
    }
}

/// Validates an assignment into a morphism: totality, dimensions, and
/// naturality against every face.
pub fn make_morphism(
    source: &Arc<FiniteSSet>,
    target: &Arc<FiniteSSet>,
    map: Vec<Element>,
) -> Result<SMorphism> {
    if map.len() != source.n_cells() {
        return Err(Error::UnassignedCell(map.len().min(source.n_cells())));
    }
    for (c, e) in map.iter().enumerate() {
        if e.cell >= target.n_cells() {
            return Err(Error::UnknownCell(e.cell));
        }
        if e.epi.cod_dim() != target.dim_of(e.cell) || !e.epi.is_epi() {
            return Err(Error::FaceDim {
                cell: c,
                index: 0,
                got: e.epi.cod_dim(),
                expected: target.dim_of(e.cell),
            });
        }
        if e.dim() != source.dim_of(c) {
            return Err(Error::CellDim {
                cell: c,
                dim: e.dim(),
                expected: source.dim_of(c),
            });
        }
    }
    let f = SMorphism {
        source: source.clone(),
        target: target.clone(),
        map,
    };
    for c in 0..source.n_cells() {
        let d = source.dim_of(c);
        if d == 0 {
            continue;
        }
        for i in 0..=d {
            let through_target = target.eval(&f.map[c], &SimplexMap::delta(d, i)?);
            let through_source = f.apply(source.face(c, i));
            if through_target != through_source {
                return Err(Error::NotNatural { cell: c, face: i });
            }
        }
    }
    Ok(f)
}

pub fn identity_morphism(x: &Arc<FiniteSSet>) -> SMorphism {
    let map = (0..x.n_cells())
        .map(|c| Element::nondegenerate(c, x.dim_of(c)))
        .collect();
    SMorphism {
        source: x.clone(),
        target: x.clone(),
        map,
    }
}

/// g ∘ f. The endpoints must agree structurally.
pub fn compose_morphisms(g: &SMorphism, f: &SMorphism) -> Result<SMorphism> {
    if !Arc::ptr_eq(&f.target, &g.source) && f.target != g.source {
        return Err(Error::ObjectMismatch(
            "compose: target of inner differs from source of outer".into(),
        ));
    }
    let map = f.map.iter().map(|e| g.apply(e)).collect();
    Ok(SMorphism {
        source: f.source.clone(),
        target: g.target.clone(),
        map,
    })
}

/// The unique morphism to Δ[0].
pub fn to_point(x: &Arc<FiniteSSet>) -> SMorphism {
    let pt = simplex(0);
    let map = (0..x.n_cells())
        .map(|c| Element {
            cell: 0,
            epi: SimplexMap::total_epi(x.dim_of(c)),
        })
        .collect();
    SMorphism {
        source: x.clone(),
        target: pt,
        map,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CofibrationCheck {
    /// Levelwise injective; complement lists the unreached target cells
    /// in id order.
    Yes { complement: Vec<usize> },
    /// Two distinct elements of equal level with the same image, the
    /// first clash in (dimension, cell id) order.
    No { first: Element, second: Element },
}

impl CofibrationCheck {
    pub fn is_yes(&self) -> bool {
        matches!(self, CofibrationCheck::Yes { .. })
    }
}

/// Decides levelwise injectivity. A morphism is injective on all levels
/// exactly when distinct cells have distinct images and no cell image is
/// degenerate; the returned witness pair exhibits any failure.
pub fn is_cofibration(f: &SMorphism) -> CofibrationCheck {
    let mut seen: HashMap<&Element, usize> = HashMap::new();
    for c in f.source.cells_by_dim() {
        let image = &f.map[c];
        let d = f.source.dim_of(c);
        if image.is_degenerate() {
            // f(c) = y·η with η repeating at position i. The endomorphism
            // ψ = δ_{i+1}∘σ_i satisfies η∘ψ = η, so c and c·ψ are distinct
            // level-d elements with equal images.
            let i = (0..d as usize)
                .find(|&i| image.epi.at(i) == image.epi.at(i + 1))
                .expect("a non-identity epi repeats somewhere");
            let psi = SimplexMap::delta(d, i as u8 + 1)
                .unwrap()
                .compose(&SimplexMap::sigma(d - 1, i as u8).unwrap())
                .expect("indices in range");
            let first = Element::nondegenerate(c, d);
            let second = f.source.eval(&first, &psi);
            debug_assert_eq!(f.apply(&first), f.apply(&second));
            debug_assert_ne!(first, second);
            return CofibrationCheck::No { first, second };
        }
        if let Some(&other) = seen.get(image) {
            return CofibrationCheck::No {
                first: Element::nondegenerate(other, d),
                second: Element::nondegenerate(c, d),
            };
        }
        seen.insert(image, c);
    }
    let hit: Vec<usize> = f.map.iter().map(|e| e.cell).collect();
    let complement = (0..f.target.n_cells())
        .filter(|c| !hit.contains(c))
        .collect();
    CofibrationCheck::Yes { complement }
}

/// Index of a target's elements by (dim, face tuple), used to enumerate
/// morphisms without scanning all candidates per cell.
struct FaceTupleIndex {
    by_dim: HashMap<u8, HashMap<Vec<Element>, Vec<Element>>>,
}

impl FaceTupleIndex {
    fn build(target: &FiniteSSet, dims_needed: &[u8]) -> Self {
        let mut by_dim = HashMap::new();
        for &d in dims_needed {
            if by_dim.contains_key(&d) {
                continue;
            }
            let mut buckets: HashMap<Vec<Element>, Vec<Element>> = HashMap::new();
            for y in target.elements_at(d) {
                let tuple: Vec<Element> = if d == 0 {
                    vec![]
                } else {
                    (0..=d)
                        .map(|i| target.eval(&y, &SimplexMap::delta(d, i).unwrap()))
                        .collect()
                };
                buckets.entry(tuple).or_default().push(y);
            }
            by_dim.insert(d, buckets);
        }
        FaceTupleIndex { by_dim }
    }

    fn candidates(&self, d: u8, tuple: &[Element]) -> &[Element] {
        self.by_dim
            .get(&d)
            .and_then(|b| b.get(tuple))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }
}

/// All morphisms source → target, in the lexicographic order induced by
/// assigning cells in (dim, id) order and trying candidate images in
/// canonical element order.
pub fn enumerate_morphisms(
    source: &Arc<FiniteSSet>,
    target: &Arc<FiniteSSet>,
) -> Vec<SMorphism> {
    let order = source.cells_by_dim();
    let dims: Vec<u8> = order.iter().map(|&c| source.dim_of(c)).collect();
    let index = FaceTupleIndex::build(target, &dims);
    let mut out = Vec::new();
    let mut assign: Vec<Option<Element>> = vec![None; source.n_cells()];
    enumerate_rec(source, target, &index, &order, 0, &mut assign, &mut out);
    out
}

fn enumerate_rec(
    source: &Arc<FiniteSSet>,
    target: &Arc<FiniteSSet>,
    index: &FaceTupleIndex,
    order: &[usize],
    pos: usize,
    assign: &mut Vec<Option<Element>>,
    out: &mut Vec<SMorphism>,
) {
    if pos == order.len() {
        let map = assign.iter().map(|e| e.clone().unwrap()).collect();
        out.push(SMorphism {
            source: source.clone(),
            target: target.clone(),
            map,
        });
        return;
    }
    let c = order[pos];
    let d = source.dim_of(c);
    let tuple: Vec<Element> = source
        .faces_of(c)
        .iter()
        .map(|e| target.eval(assign[e.cell].as_ref().unwrap(), &e.epi))
        .collect();
    for y in index.candidates(d, &tuple) {
        assign[c] = Some(y.clone());
        enumerate_rec(source, target, index, order, pos + 1, assign, out);
    }
    assign[c] = None;
}

/// Searches for an isomorphism by matching cells of equal dimension with
/// compatible face tables; returns the first hit in canonical order.
pub fn find_isomorphism(x: &Arc<FiniteSSet>, y: &Arc<FiniteSSet>) -> Option<SMorphism> {
    let top = x.max_dim().max(y.max_dim());
    let max = match top {
        None => return Some(identity_morphism(x)),
        Some(d) => d,
    };
    for d in 0..=max {
        if x.cells_of_dim(d).len() != y.cells_of_dim(d).len() {
            return None;
        }
    }
    let order = x.cells_by_dim();
    let mut assign: Vec<Option<usize>> = vec![None; x.n_cells()];
    let mut used = vec![false; y.n_cells()];
    if iso_rec(x, y, &order, 0, &mut assign, &mut used) {
        let map = assign
            .iter()
            .map(|&c| {
                let c = c.unwrap();
                Element::nondegenerate(c, y.dim_of(c))
            })
            .collect();
        Some(SMorphism {
            source: x.clone(),
            target: y.clone(),
            map,
        })
    } else {
        None
    }
}

fn iso_rec(
    x: &Arc<FiniteSSet>,
    y: &Arc<FiniteSSet>,
    order: &[usize],
    pos: usize,
    assign: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
) -> bool {
    if pos == order.len() {
        return true;
    }
    let c = order[pos];
    let d = x.dim_of(c);
    'candidates: for t in y.cells_of_dim(d) {
        if used[t] {
            continue;
        }
        for (i, e) in x.faces_of(c).iter().enumerate() {
            let expected = Element {
                cell: assign[e.cell].unwrap(),
                epi: e.epi.clone(),
            };
            if *y.face(t, i as u8) != expected {
                continue 'candidates;
            }
        }
        assign[c] = Some(t);
        used[t] = true;
        if iso_rec(x, y, order, pos + 1, assign, used) {
            return true;
        }
        assign[c] = None;
        used[t] = false;
    }
    false
}
