//! Finite (co)limits and mapping objects: coproducts, products, pushouts,
//! truncated exponentials, pushout-products, and unions of faces of a
//! standard simplex.
//!
//! Products, pushouts, and every other leveled construction downstream
//! share one skeletonizer: present the levels of the would-be object with
//! an action closure, and it extracts nondegenerate cells with a face
//! table by Eilenberg-Zilber normal-form peeling.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::simplex::SimplexMap;
use crate::sset::{
    identity_morphism, is_cofibration, make_morphism, simplex, simplex_morphism, sub_sset,
    Element, FiniteSSet, SMorphism,
};

/// A leveled presentation skeletonized into a finite simplicial set: the
/// level lists (sorted), the normal form of every listed element, and the
/// origin of every extracted cell. The action closure is retained so
/// normal forms beyond the materialized bound can still be peeled when
/// the element there is degenerate.
pub struct Skeletonized<T> {
    pub sset: Arc<FiniteSSet>,
    levels: Vec<Vec<T>>,
    forms: Vec<Vec<Element>>,
    /// For each cell: (level, index into that level's list).
    pub cell_origin: Vec<(u8, usize)>,
    act: Box<dyn Fn(&T, &SimplexMap) -> T>,
}

impl<T: Ord + Clone> Skeletonized<T> {
    pub fn bound(&self) -> u8 {
        self.levels.len() as u8 - 1
    }

    pub fn level(&self, d: u8) -> &[T] {
        &self.levels[d as usize]
    }

    pub fn origin_of(&self, cell: usize) -> &T {
        let (d, i) = self.cell_origin[cell];
        &self.levels[d as usize][i]
    }

    pub fn apply_action(&self, t: &T, phi: &SimplexMap) -> T {
        (self.act)(t, phi)
    }

    /// Normal form of a level element. Beyond the materialized bound the
    /// element must be degenerate; it is peeled down into the bound.
    pub fn form_of(&self, level: u8, t: &T) -> Element {
        if (level as usize) < self.levels.len() {
            let idx = self.levels[level as usize]
                .binary_search(t)
                .unwrap_or_else(|_| panic!("element missing from level {level}"));
            return self.forms[level as usize][idx].clone();
        }
        for i in 0..level {
            let face = (self.act)(t, &SimplexMap::delta(level, i).unwrap());
            let back = (self.act)(&face, &SimplexMap::sigma(level - 1, i).unwrap());
            if back == *t {
                let inner = self.form_of(level - 1, &face);
                let epi = inner
                    .epi
                    .compose(&SimplexMap::sigma(level - 1, i).unwrap())
                    .unwrap();
                return Element {
                    cell: inner.cell,
                    epi,
                };
            }
        }
        panic!("nondegenerate element above the materialized bound")
    }
}

/// Extracts the finite simplicial set presented by sorted level lists and
/// an action closure. Levels must be closed under the action (faces and
/// the degeneracy probes land in the listed sets); cells are the elements
/// with no degeneracy witness, in (level, list position) order.
pub fn skeletonize<T: Ord + Clone>(
    levels: Vec<Vec<T>>,
    act: impl Fn(&T, &SimplexMap) -> T + 'static,
    label_of: impl Fn(&T) -> String,
) -> Skeletonized<T> {
    debug_assert!(levels.iter().all(|l| l.windows(2).all(|w| w[0] < w[1])));
    let mut forms: Vec<Vec<Element>> = Vec::with_capacity(levels.len());
    let mut dims = Vec::new();
    let mut faces: Vec<Vec<Element>> = Vec::new();
    let mut labels = Vec::new();
    let mut cell_origin = Vec::new();
    for d in 0..levels.len() as u8 {
        let mut level_forms = Vec::with_capacity(levels[d as usize].len());
        for (i, t) in levels[d as usize].iter().enumerate() {
            let mut degenerate = None;
            for j in 0..d {
                let face = act(t, &SimplexMap::delta(d, j).unwrap());
                let sigma = SimplexMap::sigma(d - 1, j).unwrap();
                if act(&face, &sigma) == *t {
                    degenerate = Some((face, sigma));
                    break;
                }
            }
            let form = match degenerate {
                None => {
                    let cell = dims.len();
                    dims.push(d);
                    labels.push(label_of(t));
                    cell_origin.push((d, i));
                    faces.push(
                        (0..=d)
                            .filter(|_| d > 0)
                            .map(|j| {
                                let face = act(t, &SimplexMap::delta(d, j).unwrap());
                                let idx = levels[d as usize - 1]
                                    .binary_search(&face)
                                    .unwrap_or_else(|_| {
                                        panic!("face escapes level {}", d - 1)
                                    });
                                forms[d as usize - 1][idx].clone()
                            })
                            .collect(),
                    );
                    Element::nondegenerate(cell, d)
                }
                Some((face, sigma)) => {
                    let idx = levels[d as usize - 1].binary_search(&face).unwrap();
                    let inner = &forms[d as usize - 1][idx];
                    Element {
                        cell: inner.cell,
                        epi: inner.epi.compose(&sigma).unwrap(),
                    }
                }
            };
            level_forms.push(form);
        }
        forms.push(level_forms);
    }
    let sset = FiniteSSet::new(dims, faces, labels).expect("skeleton face table is well shaped");
    debug_assert!(sset.validate().is_ok());
    Skeletonized {
        sset,
        levels,
        forms,
        cell_origin,
        act: Box::new(act),
    }
}

fn element_label(x: &FiniteSSet, e: &Element) -> String {
    if e.is_degenerate() {
        let vals: Vec<String> = e.epi.values().iter().map(|v| v.to_string()).collect();
        format!("{}^{}", x.label(e.cell), vals.join(""))
    } else {
        x.label(e.cell).to_string()
    }
}

pub struct CoproductResult {
    pub object: Arc<FiniteSSet>,
    pub in_x: SMorphism,
    pub in_y: SMorphism,
}

impl CoproductResult {
    /// The fold [u, v]: X+Y → Q of a compatible cocone.
    pub fn copair(&self, u: &SMorphism, v: &SMorphism) -> Result<SMorphism> {
        if u.target != v.target {
            return Err(Error::ObjectMismatch("copair legs disagree on target".into()));
        }
        let mut map = u.map.clone();
        map.extend(v.map.iter().cloned());
        make_morphism(&self.object, &u.target, map)
    }
}

/// Disjoint union, with X's cells first.
pub fn coproduct(x: &Arc<FiniteSSet>, y: &Arc<FiniteSSet>) -> CoproductResult {
    let offset = x.n_cells();
    let mut dims = x.dims().to_vec();
    dims.extend_from_slice(y.dims());
    let mut faces: Vec<Vec<Element>> = (0..x.n_cells()).map(|c| x.faces_of(c).to_vec()).collect();
    faces.extend((0..y.n_cells()).map(|c| {
        y.faces_of(c)
            .iter()
            .map(|e| Element {
                cell: e.cell + offset,
                epi: e.epi.clone(),
            })
            .collect()
    }));
    let mut labels: Vec<String> = (0..x.n_cells()).map(|c| format!("a:{}", x.label(c))).collect();
    labels.extend((0..y.n_cells()).map(|c| format!("b:{}", y.label(c))));
    let object = FiniteSSet::new(dims, faces, labels).expect("disjoint union is well shaped");
    let in_x = SMorphism {
        source: x.clone(),
        target: object.clone(),
        map: (0..x.n_cells())
            .map(|c| Element::nondegenerate(c, x.dim_of(c)))
            .collect(),
    };
    let in_y = SMorphism {
        source: y.clone(),
        target: object.clone(),
        map: (0..y.n_cells())
            .map(|c| Element::nondegenerate(c + offset, y.dim_of(c)))
            .collect(),
    };
    CoproductResult { object, in_x, in_y }
}

pub struct ProductResult {
    pub object: Arc<FiniteSSet>,
    pub proj_x: SMorphism,
    pub proj_y: SMorphism,
    pub x: Arc<FiniteSSet>,
    pub y: Arc<FiniteSSet>,
    skel: Skeletonized<(Element, Element)>,
}

impl ProductResult {
    /// The element of X×Y with the given components (equal levels).
    pub fn element_pair(&self, a: &Element, b: &Element) -> Element {
        debug_assert_eq!(a.dim(), b.dim());
        self.skel.form_of(a.dim(), &(a.clone(), b.clone()))
    }

    /// Components of an element of X×Y.
    pub fn split(&self, e: &Element) -> (Element, Element) {
        (self.proj_x.apply(e), self.proj_y.apply(e))
    }

    /// The mediating morphism ⟨f, g⟩: T → X×Y.
    pub fn pair(&self, f: &SMorphism, g: &SMorphism) -> Result<SMorphism> {
        if f.source != g.source {
            return Err(Error::ObjectMismatch("pairing legs disagree on source".into()));
        }
        if f.target != self.x || g.target != self.y {
            return Err(Error::ObjectMismatch("pairing legs miss the factors".into()));
        }
        let map = (0..f.source.n_cells())
            .map(|c| self.element_pair(&f.map[c], &g.map[c]))
            .collect();
        make_morphism(&f.source, &self.object, map)
    }
}

/// The levelwise product, with nondegenerate cells extracted up to
/// dim X + dim Y (none exist higher).
pub fn product(x: &Arc<FiniteSSet>, y: &Arc<FiniteSSet>) -> ProductResult {
    let bound = match (x.max_dim(), y.max_dim()) {
        (Some(a), Some(b)) => a + b,
        _ => 0,
    };
    let mut levels = Vec::new();
    for d in 0..=bound {
        let xs = x.elements_at(d);
        let ys = y.elements_at(d);
        let mut level = Vec::with_capacity(xs.len() * ys.len());
        for a in &xs {
            for b in &ys {
                level.push((a.clone(), b.clone()));
            }
        }
        level.sort();
        levels.push(level);
    }
    let (xa, ya) = (x.clone(), y.clone());
    let act = move |t: &(Element, Element), phi: &SimplexMap| {
        (xa.eval(&t.0, phi), ya.eval(&t.1, phi))
    };
    let (xl, yl) = (x.clone(), y.clone());
    let skel = skeletonize(levels, act, move |t| {
        format!("({},{})", element_label(&xl, &t.0), element_label(&yl, &t.1))
    });
    let object = skel.sset.clone();
    let proj_x = SMorphism {
        source: object.clone(),
        target: x.clone(),
        map: (0..object.n_cells())
            .map(|c| skel.origin_of(c).0.clone())
            .collect(),
    };
    let proj_y = SMorphism {
        source: object.clone(),
        target: y.clone(),
        map: (0..object.n_cells())
            .map(|c| skel.origin_of(c).1.clone())
            .collect(),
    };
    debug_assert!(make_morphism(&object, x, proj_x.map.clone()).is_ok());
    debug_assert!(make_morphism(&object, y, proj_y.map.clone()).is_ok());
    ProductResult {
        object,
        proj_x,
        proj_y,
        x: x.clone(),
        y: y.clone(),
        skel,
    }
}

/// f×g: X×Y → X'×Y' between already-computed products.
pub fn product_of_morphisms(
    from: &ProductResult,
    to: &ProductResult,
    f: &SMorphism,
    g: &SMorphism,
) -> Result<SMorphism> {
    if f.source != from.x || g.source != from.y || f.target != to.x || g.target != to.y {
        return Err(Error::ObjectMismatch("product morphism endpoints".into()));
    }
    let map = (0..from.object.n_cells())
        .map(|c| {
            let (a, b) = from.skel.origin_of(c);
            to.skel
                .form_of(from.object.dim_of(c), &(f.apply(a), g.apply(b)))
        })
        .collect();
    make_morphism(&from.object, &to.object, map)
}

pub struct PushoutResult {
    pub object: Arc<FiniteSSet>,
    pub from_x: SMorphism,
    pub from_y: SMorphism,
    skel: Skeletonized<(u8, Element)>,
    f_target: Arc<FiniteSSet>,
    g_target: Arc<FiniteSSet>,
}

impl PushoutResult {
    /// Class of an element of X (side 0) or Y (side 1).
    pub fn class_of(&self, side: u8, e: &Element) -> Element {
        let t = self.skel.apply_action(
            &(side, e.clone()),
            &SimplexMap::identity(e.dim()),
        );
        self.skel.form_of(e.dim(), &t)
    }

    /// The mediating morphism out of the pushout for a commuting cocone.
    pub fn mediate(&self, u: &SMorphism, v: &SMorphism) -> Result<SMorphism> {
        if u.source != self.f_target || v.source != self.g_target || u.target != v.target {
            return Err(Error::ObjectMismatch("pushout cocone endpoints".into()));
        }
        let map = (0..self.object.n_cells())
            .map(|c| {
                let (side, e) = self.skel.origin_of(c);
                if *side == 0 {
                    u.apply(e)
                } else {
                    v.apply(e)
                }
            })
            .collect();
        make_morphism(&self.object, &u.target, map)
    }
}

/// The pushout of X ←f− A −g→ Y: a levelwise quotient of X+Y by the
/// classes generated by f(a) ~ g(a), computed with a union-find per
/// level. The generating pairs are closed under the action, so the
/// quotient is simplicial; class representatives are least members.
pub fn pushout(f: &SMorphism, g: &SMorphism) -> Result<PushoutResult> {
    if f.source != g.source {
        return Err(Error::ObjectMismatch("pushout span must share its domain".into()));
    }
    let x = f.target.clone();
    let y = g.target.clone();
    let bound = x.max_dim().into_iter().chain(y.max_dim()).max().unwrap_or(0);
    let mut rep_tables: Vec<HashMap<(u8, Element), (u8, Element)>> = Vec::new();
    let mut levels: Vec<Vec<(u8, Element)>> = Vec::new();
    for d in 0..=bound {
        let mut members: Vec<(u8, Element)> = x
            .elements_at(d)
            .into_iter()
            .map(|e| (0u8, e))
            .chain(y.elements_at(d).into_iter().map(|e| (1u8, e)))
            .collect();
        members.sort();
        let index: HashMap<&(u8, Element), usize> =
            members.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut parent: Vec<usize> = (0..members.len()).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        for a in f.source.elements_at(d) {
            let lhs = index[&(0u8, f.apply(&a))];
            let rhs = index[&(1u8, g.apply(&a))];
            let (ra, rb) = (find(&mut parent, lhs), find(&mut parent, rhs));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let mut least: HashMap<usize, usize> = HashMap::new();
        for i in 0..members.len() {
            let r = find(&mut parent, i);
            let slot = least.entry(r).or_insert(i);
            if members[i] < members[*slot] {
                *slot = i;
            }
        }
        let mut table = HashMap::new();
        let mut level: Vec<(u8, Element)> = Vec::new();
        for i in 0..members.len() {
            let r = find(&mut parent, i);
            table.insert(members[i].clone(), members[least[&r]].clone());
        }
        for (&r, &m) in &least {
            let _ = r;
            level.push(members[m].clone());
        }
        level.sort();
        rep_tables.push(table);
        levels.push(level);
    }
    let (xa, ya) = (x.clone(), y.clone());
    let tables = Arc::new(rep_tables);
    let ta = tables.clone();
    let act = move |t: &(u8, Element), phi: &SimplexMap| {
        let raw = if t.0 == 0 {
            (0u8, xa.eval(&t.1, phi))
        } else {
            (1u8, ya.eval(&t.1, phi))
        };
        ta[phi.dom_dim() as usize][&raw].clone()
    };
    let (xl, yl) = (x.clone(), y.clone());
    let skel = skeletonize(levels, act, move |t| {
        if t.0 == 0 {
            format!("x:{}", element_label(&xl, &t.1))
        } else {
            format!("y:{}", element_label(&yl, &t.1))
        }
    });
    let object = skel.sset.clone();
    let from_x = {
        let map = (0..x.n_cells())
            .map(|c| {
                let d = x.dim_of(c);
                let rep = tables[d as usize][&(0u8, Element::nondegenerate(c, d))].clone();
                skel.form_of(d, &rep)
            })
            .collect();
        make_morphism(&x, &object, map).expect("quotient leg is natural")
    };
    let from_y = {
        let map = (0..y.n_cells())
            .map(|c| {
                let d = y.dim_of(c);
                let rep = tables[d as usize][&(1u8, Element::nondegenerate(c, d))].clone();
                skel.form_of(d, &rep)
            })
            .collect();
        make_morphism(&y, &object, map).expect("quotient leg is natural")
    };
    Ok(PushoutResult {
        object,
        from_x,
        from_y,
        skel,
        f_target: x,
        g_target: y,
    })
}

/// The induced map (X×Y) ∪_{W×Y} (W×Z) → X×Z of two cofibrations
/// f: W→X, g: Y→Z, returned with its pushout corner as the source.
pub fn pushout_product(f: &SMorphism, g: &SMorphism) -> Result<SMorphism> {
    if !is_cofibration(f).is_yes() || !is_cofibration(g).is_yes() {
        return Err(Error::NotCofibration(
            "pushout-product factors must be cofibrations".into(),
        ));
    }
    let wy = product(&f.source, &g.source);
    let xy = product(&f.target, &g.source);
    let wz = product(&f.source, &g.target);
    let xz = product(&f.target, &g.target);
    let f_y = product_of_morphisms(&wy, &xy, f, &identity_morphism(&g.source))?;
    let w_g = product_of_morphisms(&wy, &wz, &identity_morphism(&f.source), g)?;
    let corner = pushout(&f_y, &w_g)?;
    let u = product_of_morphisms(&xy, &xz, &identity_morphism(&f.target), g)?;
    let v = product_of_morphisms(&wz, &xz, f, &identity_morphism(&g.target))?;
    corner.mediate(&u, &v)
}

/// A union of faces of Δ[m], stored as the canonical antichain of vertex
/// subsets (sorted, none containing another). The empty union is allowed;
/// a single empty face is not.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FaceSubobject {
    pub ambient: u8,
    faces: Vec<Vec<u8>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FaceOp {
    Union,
    Intersect,
}

impl FaceSubobject {
    /// The face of Δ[m] through the given vertices.
    pub fn face(ambient: u8, allowed: &[u8]) -> Result<Self> {
        let mut vs: Vec<u8> = allowed.to_vec();
        vs.sort_unstable();
        vs.dedup();
        if vs.is_empty() {
            return Err(Error::EmptyFaces);
        }
        if let Some(&v) = vs.iter().find(|&&v| v > ambient) {
            return Err(Error::ValueOutOfRange {
                value: v,
                codomain: ambient + 1,
            });
        }
        Ok(FaceSubobject {
            ambient,
            faces: vec![vs],
        })
    }

    pub fn face_from_pred(ambient: u8, pred: impl Fn(u8) -> bool) -> Result<Self> {
        let allowed: Vec<u8> = (0..=ambient).filter(|&v| pred(v)).collect();
        FaceSubobject::face(ambient, &allowed)
    }

    pub fn whole(ambient: u8) -> Self {
        let all: Vec<u8> = (0..=ambient).collect();
        FaceSubobject {
            ambient,
            faces: vec![all],
        }
    }

    /// The union of the given faces; empty subsets are dropped, the rest
    /// canonicalized into an antichain. An empty list gives the empty union.
    pub fn union_of(ambient: u8, faces: &[Vec<u8>]) -> Self {
        let cleaned: Vec<Vec<u8>> = faces
            .iter()
            .filter(|f| !f.is_empty())
            .map(|f| {
                let mut v = f.clone();
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        FaceSubobject {
            ambient,
            faces: canonical_antichain(cleaned),
        }
    }

    pub fn empty(ambient: u8) -> Self {
        FaceSubobject {
            ambient,
            faces: vec![],
        }
    }

    pub fn faces(&self) -> &[Vec<u8>] {
        &self.faces
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        self.faces.len() == 1 && self.faces[0].len() == self.ambient as usize + 1
    }

    /// Whether a simplex through the given vertices lies in the union.
    pub fn covers(&self, vertices: &[u8]) -> bool {
        self.faces
            .iter()
            .any(|f| vertices.iter().all(|v| f.contains(v)))
    }

    /// The spanned subobject of Δ[m] with its inclusion.
    pub fn realize(&self) -> (Arc<FiniteSSet>, SMorphism) {
        let ambient = simplex(self.ambient);
        let keep: Vec<usize> = crate::sset::simplex_subsets(self.ambient)
            .iter()
            .enumerate()
            .filter(|(_, s)| self.covers(s))
            .map(|(c, _)| c)
            .collect();
        sub_sset(&ambient, &keep).expect("unions of faces are face-closed")
    }
}

fn canonical_antichain(mut faces: Vec<Vec<u8>>) -> Vec<Vec<u8>> {
    faces.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    faces.dedup();
    let mut keep: Vec<Vec<u8>> = Vec::new();
    for f in faces.iter().rev() {
        if !keep.iter().any(|k| f.iter().all(|v| k.contains(v))) {
            keep.push(f.clone());
        }
    }
    keep.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    keep
}

/// Union or intersection of two face unions over the same ambient
/// simplex. Intersection distributes over the stored unions: faces meet
/// in the face of the vertex intersection.
pub fn combine_faces(op: FaceOp, a: &FaceSubobject, b: &FaceSubobject) -> Result<FaceSubobject> {
    if a.ambient != b.ambient {
        return Err(Error::AmbientMismatch {
            got: b.ambient,
            expected: a.ambient,
        });
    }
    let faces = match op {
        FaceOp::Union => {
            let mut all = a.faces.clone();
            all.extend(b.faces.iter().cloned());
            canonical_antichain(all)
        }
        FaceOp::Intersect => {
            let mut meets = Vec::new();
            for fa in &a.faces {
                for fb in &b.faces {
                    let meet: Vec<u8> =
                        fa.iter().copied().filter(|v| fb.contains(v)).collect();
                    if !meet.is_empty() {
                        meets.push(meet);
                    }
                }
            }
            canonical_antichain(meets)
        }
    };
    Ok(FaceSubobject {
        ambient: a.ambient,
        faces,
    })
}

/// Morphisms Δ[n]×K → Y for n up to the bound, with the precomposition
/// action. Exponentials are only ever leveled objects: they can have
/// nondegenerate simplices in arbitrarily high dimension, so no
/// FiniteSSet is extracted here.
pub struct Exponential {
    pub base: Arc<FiniteSSet>,
    pub exponent: Arc<FiniteSSet>,
    pub bound: u8,
    pub prisms: Vec<ProductResult>,
    levels: Vec<Vec<SMorphism>>,
}

impl Exponential {
    pub fn level(&self, d: u8) -> &[SMorphism] {
        &self.levels[d as usize]
    }

    pub fn level_index(&self, d: u8, q: &SMorphism) -> usize {
        self.levels[d as usize]
            .binary_search_by(|probe| probe.map.cmp(&q.map))
            .expect("a level member of the exponential")
    }

    /// The action q·φ = q ∘ (φ×id), landing at the level of dom(φ).
    pub fn act(&self, d: u8, q: &SMorphism, phi: &SimplexMap) -> SMorphism {
        debug_assert_eq!(phi.cod_dim(), d);
        let a = phi.dom_dim();
        let induced = product_of_morphisms(
            &self.prisms[a as usize],
            &self.prisms[d as usize],
            &simplex_morphism(phi),
            &identity_morphism(&self.exponent),
        )
        .expect("prism endpoints line up");
        crate::sset::compose_morphisms(q, &induced).expect("prism composes with the member")
    }
}

/// All levels of Y^K up to the bound, by direct enumeration of
/// Hom(Δ[n]×K, Y).
pub fn exponential_truncated(
    base: &Arc<FiniteSSet>,
    exponent: &Arc<FiniteSSet>,
    bound: u8,
) -> Exponential {
    let mut prisms = Vec::new();
    let mut levels = Vec::new();
    for d in 0..=bound {
        let prism = product(&simplex(d), exponent);
        let mut level = crate::sset::enumerate_morphisms(&prism.object, base);
        level.sort_by(|a, b| a.map.cmp(&b.map));
        prisms.push(prism);
        levels.push(level);
    }
    Exponential {
        base: base.clone(),
        exponent: exponent.clone(),
        bound,
        prisms,
        levels,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::{enumerate_maps, MapKind};
    use crate::sset::{
        cycle, discrete, enumerate_morphisms, find_isomorphism, horn, to_point, CofibrationCheck,
        FiniteSSet,
    };

    fn census(x: &FiniteSSet) -> Vec<usize> {
        let max = x.max_dim().map(|d| d as usize + 1).unwrap_or(0);
        (0..max).map(|d| x.cells_of_dim(d as u8).len()).collect()
    }

    #[test]
    fn coproduct_examples() {
        let pt = simplex(0);
        let two = coproduct(&pt, &pt);
        assert_eq!(two.object.n_cells(), 2);
        assert!(find_isomorphism(&two.object, &discrete(2)).is_some());

        let x = simplex(2);
        let with_empty = coproduct(&x, &FiniteSSet::empty());
        assert!(find_isomorphism(&with_empty.object, &x).is_some());

        let (c1, _) = cycle(1);
        assert!(find_isomorphism(&c1, &two.object).is_some());
    }

    #[test]
    fn copair_folds_cocones() {
        let pt = simplex(0);
        let two = coproduct(&pt, &pt);
        let d1 = simplex(1);
        let v0 = crate::sset::simplex_morphism(&SimplexMap::vertex(0, 1));
        let v1 = crate::sset::simplex_morphism(&SimplexMap::vertex(1, 1));
        let c = two.copair(&v0, &v1).unwrap();
        assert_eq!(c.target, d1);
        assert_eq!(
            crate::sset::compose_morphisms(&c, &two.in_x).unwrap(),
            v0
        );
        assert_eq!(
            crate::sset::compose_morphisms(&c, &two.in_y).unwrap(),
            v1
        );
    }

    #[test]
    fn product_censuses() {
        let d1 = simplex(1);
        let square = product(&d1, &d1);
        assert_eq!(census(&square.object), vec![4, 5, 2]);
        square.object.validate().unwrap();

        let with_point = product(&simplex(2), &simplex(0));
        assert!(find_isomorphism(&with_point.object, &simplex(2)).is_some());

        let (c1, _) = cycle(1);
        let strips = product(&d1, &c1);
        assert_eq!(census(&strips.object), vec![4, 2]);
    }

    #[test]
    fn product_universal_property() {
        let d1 = simplex(1);
        let square = product(&d1, &d1);
        for t in [simplex(1), cycle(2).0, discrete(2)] {
            let into_x = enumerate_morphisms(&t, &d1);
            let into_p = enumerate_morphisms(&t, &square.object);
            assert_eq!(into_p.len(), into_x.len() * into_x.len());
            for f in &into_x {
                for g in &into_x {
                    let paired = square.pair(f, g).unwrap();
                    let back_f =
                        crate::sset::compose_morphisms(&square.proj_x, &paired).unwrap();
                    let back_g =
                        crate::sset::compose_morphisms(&square.proj_y, &paired).unwrap();
                    assert_eq!(&back_f, f);
                    assert_eq!(&back_g, g);
                    // Uniqueness: no other morphism projects the same way.
                    let hits = into_p
                        .iter()
                        .filter(|h| {
                            crate::sset::compose_morphisms(&square.proj_x, h).unwrap() == *f
                                && crate::sset::compose_morphisms(&square.proj_y, h).unwrap()
                                    == *g
                        })
                        .count();
                    assert_eq!(hits, 1);
                }
            }
        }
    }

    #[test]
    fn pushout_examples() {
        // Collapse the boundary of an interval to a point: a loop.
        let (c1, incl) = cycle(1);
        let collapse = to_point(&c1);
        let p = pushout(&incl, &collapse).unwrap();
        assert_eq!(census(&p.object), vec![1, 1]);
        p.object.validate().unwrap();

        // Pushout along the identity is the other leg's target.
        let id = crate::sset::identity_morphism(&c1);
        let p2 = pushout(&id, &collapse).unwrap();
        assert!(find_isomorphism(&p2.object, &collapse.target).is_some());

        // Pushout of the empty span is the coproduct.
        let empty = FiniteSSet::empty();
        let to_x = crate::sset::make_morphism(&empty, &simplex(1), vec![]).unwrap();
        let to_y = crate::sset::make_morphism(&empty, &discrete(2), vec![]).unwrap();
        let p3 = pushout(&to_x, &to_y).unwrap();
        let cop = coproduct(&simplex(1), &discrete(2));
        assert!(find_isomorphism(&p3.object, &cop.object).is_some());
    }

    #[test]
    fn pushout_universal_property() {
        let (c1, incl) = cycle(1);
        let collapse = to_point(&c1);
        let p = pushout(&incl, &collapse).unwrap();
        let q = simplex(1);
        let cocones_u = enumerate_morphisms(&incl.target, &q);
        let cocones_v = enumerate_morphisms(&collapse.target, &q);
        let all = enumerate_morphisms(&p.object, &q);
        for u in &cocones_u {
            for v in &cocones_v {
                let lhs = crate::sset::compose_morphisms(u, &incl).unwrap();
                let rhs = crate::sset::compose_morphisms(v, &collapse).unwrap();
                if lhs != rhs {
                    continue;
                }
                let m = p.mediate(u, v).unwrap();
                assert_eq!(crate::sset::compose_morphisms(&m, &p.from_x).unwrap(), *u);
                assert_eq!(crate::sset::compose_morphisms(&m, &p.from_y).unwrap(), *v);
                let hits = all
                    .iter()
                    .filter(|h| {
                        crate::sset::compose_morphisms(h, &p.from_x).unwrap() == *u
                            && crate::sset::compose_morphisms(h, &p.from_y).unwrap() == *v
                    })
                    .count();
                assert_eq!(hits, 1);
            }
        }
    }

    #[test]
    fn pushout_product_examples() {
        let (c1, incl) = cycle(1);
        let _ = c1;
        let pp = pushout_product(&incl, &incl).unwrap();
        match is_cofibration(&pp) {
            CofibrationCheck::Yes { complement } => {
                let labels: Vec<&str> = complement
                    .iter()
                    .map(|&c| pp.target.label(c))
                    .collect();
                assert_eq!(complement.len(), 3);
                assert!(labels.iter().all(|l| l.contains("01")));
            }
            other => panic!("expected cofibration, got {other:?}"),
        }
        assert_eq!(census(&pp.source), vec![4, 4]);
        assert_eq!(census(&pp.target), vec![4, 5, 2]);

        // Degenerate shapes.
        let empty = FiniteSSet::empty();
        let from_empty = crate::sset::make_morphism(&empty, &simplex(0), vec![]).unwrap();
        let pp2 = pushout_product(&from_empty, &from_empty).unwrap();
        assert!(pp2.source.is_empty());
        assert_eq!(pp2.target.n_cells(), 1);

        let pp3 = pushout_product(&incl, &from_empty).unwrap();
        assert!(find_isomorphism(&pp3.source, &incl.source).is_some());
        assert!(find_isomorphism(&pp3.target, &incl.target).is_some());

        let collapse = to_point(&simplex(1));
        assert!(matches!(
            pushout_product(&collapse, &incl),
            Err(Error::NotCofibration(_))
        ));
    }

    #[test]
    fn pushout_product_of_cofibrations_is_cofibration() {
        let items: Vec<SMorphism> = vec![
            cycle(1).1,
            cycle(2).1,
            horn(2, 0).unwrap().1,
            horn(2, 2).unwrap().1,
        ];
        for f in &items {
            for g in &items {
                let pp = pushout_product(f, g).unwrap();
                assert!(is_cofibration(&pp).is_yes(), "{f:?} box {g:?}");
            }
        }
    }

    #[test]
    fn face_construction() {
        assert!(FaceSubobject::whole(2).is_whole());
        let edge = FaceSubobject::face(2, &[0, 1]).unwrap();
        let (realized, incl) = edge.realize();
        assert_eq!(census(&realized), vec![2, 1]);
        assert!(is_cofibration(&incl).is_yes());
        assert!(matches!(
            FaceSubobject::face_from_pred(2, |_| false),
            Err(Error::EmptyFaces)
        ));
        let whole = FaceSubobject::whole(3);
        assert_eq!(whole.realize().0.n_cells(), simplex(3).n_cells());
    }

    #[test]
    fn face_combination() {
        let a = FaceSubobject::face(3, &[0, 1, 2]).unwrap();
        let b = FaceSubobject::face(3, &[1, 2, 3]).unwrap();
        let both = combine_faces(FaceOp::Union, &a, &a).unwrap();
        assert_eq!(both, a);
        let meet = combine_faces(FaceOp::Intersect, &a, &b).unwrap();
        assert_eq!(meet, FaceSubobject::face(3, &[1, 2]).unwrap());

        // Union of the facets missing each non-central vertex is the horn.
        for n in 1..=3u8 {
            for k in 0..=n {
                let mut acc = FaceSubobject::empty(n);
                for j in (0..=n).filter(|&j| j != k) {
                    let facet: Vec<u8> = (0..=n).filter(|&v| v != j).collect();
                    let f = FaceSubobject::face(n, &facet).unwrap();
                    acc = combine_faces(FaceOp::Union, &acc, &f).unwrap();
                }
                let (realized, _) = acc.realize();
                let (h, _) = horn(n, k).unwrap();
                assert!(find_isomorphism(&realized, &h).is_some());
            }
        }

        let wrong = FaceSubobject::whole(2);
        assert!(matches!(
            combine_faces(FaceOp::Union, &a, &wrong),
            Err(Error::AmbientMismatch { .. })
        ));
    }

    #[test]
    fn face_ops_match_subset_semantics() {
        // Exhaustive distributivity check: combine on canonical
        // antichains agrees with pointwise boolean semantics on every
        // simplex, for unions of up to three faces in an ambient of
        // dimension up to three.
        for m in 1..=3u8 {
            let singles: Vec<Vec<u8>> = crate::sset::simplex_subsets(m);
            let mut unions: Vec<FaceSubobject> = Vec::new();
            for i in 0..singles.len() {
                let fi = FaceSubobject::face(m, &singles[i]).unwrap();
                unions.push(fi.clone());
                for j in i + 1..singles.len() {
                    let fj = FaceSubobject::face(m, &singles[j]).unwrap();
                    let fij = combine_faces(FaceOp::Union, &fi, &fj).unwrap();
                    unions.push(fij.clone());
                    for l in j + 1..singles.len() {
                        let fl = FaceSubobject::face(m, &singles[l]).unwrap();
                        unions.push(combine_faces(FaceOp::Union, &fij, &fl).unwrap());
                    }
                }
            }
            let probes = crate::sset::simplex_subsets(m);
            for a in &unions {
                for b in &unions {
                    let meet = combine_faces(FaceOp::Intersect, a, b).unwrap();
                    let join = combine_faces(FaceOp::Union, a, b).unwrap();
                    for s in &probes {
                        assert_eq!(meet.covers(s), a.covers(s) && b.covers(s));
                        assert_eq!(join.covers(s), a.covers(s) || b.covers(s));
                    }
                }
            }
        }
    }

    #[test]
    fn exponential_levels() {
        let pt = simplex(0);
        let d1 = simplex(1);
        let e = exponential_truncated(&pt, &d1, 2);
        for d in 0..=2u8 {
            assert_eq!(e.level(d).len(), 1);
        }

        let disc = discrete(2);
        let e2 = exponential_truncated(&disc, &d1, 1);
        assert_eq!(e2.level(0).len(), 2);

        // Unit exponent: Y^{Δ[0]} level n has as many members as Y has
        // elements at level n.
        let y = simplex(2);
        let e3 = exponential_truncated(&y, &pt, 2);
        for d in 0..=2u8 {
            assert_eq!(e3.level(d).len(), y.elements_at(d).len());
        }
    }

    #[test]
    fn exponential_action_is_coherent() {
        let d1 = simplex(1);
        let y = simplex(1);
        let e = exponential_truncated(&y, &d1, 2);
        for d in 0..=2u8 {
            for q in e.level(d) {
                for a in 0..=2u8 {
                    for alpha in enumerate_maps(a, d, MapKind::All) {
                        let qa = e.act(d, q, &alpha);
                        for b in 0..=2u8 {
                            for beta in enumerate_maps(b, a, MapKind::All) {
                                let left = e.act(d, q, &alpha.compose(&beta).unwrap());
                                let right = e.act(a, &qa, &beta);
                                assert_eq!(left.map, right.map);
                            }
                        }
                    }
                }
            }
        }
    }
}
