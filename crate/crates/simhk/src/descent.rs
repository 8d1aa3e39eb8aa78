//! Descent of fibrations along horn inclusions.
//!
//! For a horn Λ_k[n] and a map ξ: [m]→[n], the combinatorial functor K
//! sends ξ to a union of faces of a larger simplex Δ[m+‖ξ‖] lying over
//! the horn, where ‖ξ‖ counts tuples drawn from the fibers of ξ away
//! from k. Morphisms from K(ξ) into a fibration over the horn assemble,
//! as ξ varies, into a fibration over the whole simplex Δ[n] that
//! restricts back to the original one over the horn. This module builds
//! that extension and solves its horn lifting problems by replaying a
//! certified anodyne decomposition against the original fibration's
//! filler certificate.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::constructions::{combine_faces, skeletonize, FaceOp, FaceSubobject, Skeletonized};
use crate::error::{Error, Result};
use crate::lifting::{run_fill_steps, FillFamily, FillerCertificate, SquareKey};
use crate::simplex::{enumerate_maps, MapKind, SimplexMap};
use crate::sset::{
    compose_morphisms, element_to_simplex_map, horn, identity_morphism, make_morphism, simplex,
    simplex_map_to_element, simplex_subsets, sub_sset, subset_label, Element, FiniteSSet,
    SMorphism,
};

/// Indices of [n] other than k, ascending. Tuple coordinates throughout
/// the descent construction are indexed by this list.
fn nonk_indices(n: u8, k: u8) -> Vec<u8> {
    (0..=n).filter(|&i| i != k).collect()
}

fn meet(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().copied().filter(|v| b.contains(v)).collect()
}

fn minus(s: &[u8], v: u8) -> Vec<u8> {
    s.iter().copied().filter(|&x| x != v).collect()
}

/// Fiber data of ξ: [m]→[n] relative to a horn index k: the fibers ξ_j,
/// the tuple count ‖ξ‖ (the product of the fiber sizes away from k,
/// zero when one of them is empty), and the tuples themselves in
/// lexicographic order. A tuple picks one element from each fiber ξ_i
/// with i ≠ k, coordinates ordered by increasing i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiProfile {
    pub xi: SimplexMap,
    pub k: u8,
    pub fibers: Vec<Vec<u8>>,
    pub norm: usize,
    pub lex_elements: Vec<Vec<u8>>,
}

impl XiProfile {
    /// Coordinate slot of fiber j among the tuple positions; j ≠ k.
    fn slot(&self, j: u8) -> usize {
        debug_assert!(j != self.k);
        if j < self.k {
            j as usize
        } else {
            j as usize - 1
        }
    }

    fn tuple_rank(&self, tuple: &[u8]) -> Option<usize> {
        self.lex_elements
            .binary_search_by(|t| t.as_slice().cmp(tuple))
            .ok()
    }
}

pub fn xi_profile(xi: &SimplexMap, k: u8) -> Result<XiProfile> {
    let n = xi.cod_dim();
    if k > n {
        return Err(Error::BadIndex { index: k, limit: n });
    }
    let mut fibers = vec![Vec::new(); n as usize + 1];
    for (i, &v) in xi.values().iter().enumerate() {
        fibers[v as usize].push(i as u8);
    }
    let slots = nonk_indices(n, k);
    let norm: usize = slots.iter().map(|&j| fibers[j as usize].len()).product();
    let mut lex_elements = Vec::with_capacity(norm);
    if norm > 0 {
        // Odometer with the last coordinate fastest: lexicographic order.
        let mut idx = vec![0usize; slots.len()];
        'outer: loop {
            lex_elements.push(
                slots
                    .iter()
                    .enumerate()
                    .map(|(p, &j)| fibers[j as usize][idx[p]])
                    .collect(),
            );
            let mut p = slots.len();
            loop {
                if p == 0 {
                    break 'outer;
                }
                p -= 1;
                idx[p] += 1;
                if idx[p] < fibers[slots[p] as usize].len() {
                    continue 'outer;
                }
                idx[p] = 0;
            }
        }
    }
    Ok(XiProfile {
        xi: xi.clone(),
        k,
        fibers,
        norm,
        lex_elements,
    })
}

/// The object part of K at ξ: the map K₀ξ: [m+‖ξ‖]→[n], the tuple
/// positions κ (a contiguous interval starting at the least position
/// where K₀ξ takes the value k), and the section λ: [m]→[m+‖ξ‖]
/// complementary to κ, satisfying K₀ξ ∘ λ = ξ.
#[derive(Clone, Debug)]
pub struct KData {
    pub profile: XiProfile,
    pub k0: SimplexMap,
    pub kappa: Vec<u8>,
    pub lambda: SimplexMap,
}

impl KData {
    /// Dimension of the enlarged simplex Δ[m+‖ξ‖].
    pub fn ambient(&self) -> u8 {
        self.profile.xi.dom_dim() + self.profile.norm as u8
    }

    /// Tuple rank of an ambient position, when it is one.
    fn kappa_rank(&self, x: u8) -> Option<usize> {
        self.kappa.binary_search(&x).ok()
    }

    /// Preimage under λ of an ambient position outside the κ interval.
    fn lambda_preimage(&self, x: u8) -> Option<u8> {
        self.lambda
            .values()
            .binary_search(&x)
            .ok()
            .map(|p| p as u8)
    }
}

/// The value of K₀ξ at one position by the three-case formula: keep
/// values below k on the left, values above k shifted by ‖ξ‖ on the
/// right, and the value k on the crossing block. Exactly one case
/// applies at each position; a clash is reported, not resolved.
fn k0_value(xi: &SimplexMap, k: u8, norm: usize, i: usize) -> Result<u8> {
    let m = xi.dom_dim() as usize;
    let c1 = i <= m && xi.at(i) < k;
    let c2 = (i < norm || xi.at(i - norm) <= k) && (i > m || xi.at(i) >= k);
    let c3 = i >= norm && xi.at(i - norm) > k;
    match (c1, c2, c3) {
        (true, false, false) => Ok(xi.at(i)),
        (false, true, false) => Ok(k),
        (false, false, true) => Ok(xi.at(i - norm)),
        _ => Err(Error::GuardViolation {
            index: i,
            detail: format!("cases ({c1},{c2},{c3}) do not single out a value"),
        }),
    }
}

pub fn k_data(profile: &XiProfile) -> Result<KData> {
    let xi = &profile.xi;
    let k = profile.k;
    let m = xi.dom_dim() as usize;
    let norm = profile.norm;
    if m + norm > 254 {
        return Err(Error::DimMismatch(format!(
            "enlarged simplex dimension {} exceeds the representable range",
            m + norm
        )));
    }
    let big = m + norm;
    let mut values = Vec::with_capacity(big + 1);
    for i in 0..=big {
        values.push(k0_value(xi, k, norm, i)?);
    }
    let k0 = SimplexMap::new(values, xi.cod_size()).map_err(|e| Error::GuardViolation {
        index: 0,
        detail: format!("assembled map is malformed: {e}"),
    })?;
    let kappa: Vec<u8> = if norm == 0 {
        Vec::new()
    } else {
        let start = k0
            .values()
            .iter()
            .position(|&v| v == k)
            .ok_or_else(|| Error::GuardViolation {
                index: 0,
                detail: "no position takes the horn value".into(),
            })?;
        (start..start + norm).map(|x| x as u8).collect()
    };
    for &x in &kappa {
        if k0.at(x as usize) != k {
            return Err(Error::GuardViolation {
                index: x as usize,
                detail: "tuple interval leaves the horn-value block".into(),
            });
        }
    }
    let lam_values: Vec<u8> = (0..=m)
        .map(|x| {
            if xi.at(x) < k {
                x as u8
            } else {
                (x + norm) as u8
            }
        })
        .collect();
    let lambda =
        SimplexMap::new(lam_values, (big + 1) as u8).map_err(|e| Error::GuardViolation {
            index: 0,
            detail: format!("section is malformed: {e}"),
        })?;
    if !lambda.is_mono() {
        return Err(Error::GuardViolation {
            index: 0,
            detail: "section is not injective".into(),
        });
    }
    if k0.compose(&lambda)? != *xi {
        return Err(Error::GuardViolation {
            index: 0,
            detail: "section does not recover the map".into(),
        });
    }
    for v in lambda.values() {
        if kappa.binary_search(v).is_ok() {
            return Err(Error::GuardViolation {
                index: *v as usize,
                detail: "section meets the tuple interval".into(),
            });
        }
    }
    Ok(KData {
        profile: profile.clone(),
        k0,
        kappa,
        lambda,
    })
}

/// K on an arrow φ with ξ∘φ = ξ′ (both over the same horn index): the
/// monotone map agreeing with κ on tuple positions (coordinates pushed
/// through φ) and with λ∘φ on section positions. Injective arrows push
/// tuples in strict order, so the pointwise values are already monotone
/// and the tuple equation is re-verified exactly. A collapsing arrow can
/// push crossed tuples out of order when two fibers away from the horn
/// index both have several elements; the tuple block is then lowered to
/// its running minimum from the right, the largest monotone assignment
/// under the pointwise push. That choice is forced: it is the only one
/// for which the section retracts the corresponding coface, which the
/// level extraction relies on to recognize degenerate fiber elements.
/// Section and base equations are re-verified exactly in every case.
pub fn k_on_arrow(phi: &SimplexMap, src: &XiProfile, dst: &XiProfile) -> Result<SimplexMap> {
    if src.k != dst.k {
        return Err(Error::NotOverN(
            "profiles use different horn indices".into(),
        ));
    }
    let composed = dst
        .xi
        .compose(phi)
        .map_err(|e| Error::NotOverN(e.to_string()))?;
    if composed != src.xi {
        return Err(Error::NotOverN(
            "composite along the arrow does not reproduce the finer map".into(),
        ));
    }
    let ks = k_data(src)?;
    let kd = k_data(dst)?;
    k1_from(&ks, &kd, phi)
}

fn k1_from(src: &KData, dst: &KData, phi: &SimplexMap) -> Result<SimplexMap> {
    let big_src = src.ambient() as usize;
    let mut values = Vec::with_capacity(big_src + 1);
    for i in 0..=big_src {
        let v = if let Some(t) = src.kappa_rank(i as u8) {
            let mapped: Vec<u8> = src.profile.lex_elements[t]
                .iter()
                .map(|&x| phi.at(x as usize))
                .collect();
            let rank = dst
                .profile
                .tuple_rank(&mapped)
                .ok_or_else(|| Error::GuardViolation {
                    index: i,
                    detail: "pushed tuple is not a tuple of the target".into(),
                })?;
            dst.kappa[rank]
        } else {
            let x = src.lambda_preimage(i as u8).ok_or_else(|| Error::GuardViolation {
                index: i,
                detail: "position neither tuple nor section".into(),
            })?;
            dst.lambda.at(phi.at(x as usize) as usize)
        };
        values.push(v);
    }
    // Lower a crossed tuple block to its running minimum from the right;
    // injective arrows never cross, so this touches collapses only.
    let mut floored = false;
    if src.profile.norm > 1 {
        let start = src.kappa[0] as usize;
        let block = &mut values[start..start + src.profile.norm];
        for i in (0..block.len() - 1).rev() {
            if block[i] > block[i + 1] {
                block[i] = block[i + 1];
                floored = true;
            }
        }
    }
    let k1 = SimplexMap::new(values, dst.ambient() + 1).map_err(|e| Error::GuardViolation {
        index: 0,
        detail: format!("arrow image is not monotone: {e}"),
    })?;
    // Defining equations, re-verified as composites.
    if k1.compose(&src.lambda)? != dst.lambda.compose(phi)? {
        return Err(Error::GuardViolation {
            index: 0,
            detail: "section equation fails".into(),
        });
    }
    if floored {
        for t in 0..src.profile.norm {
            let v = k1.at(src.kappa[t] as usize);
            if dst.kappa.binary_search(&v).is_err() {
                return Err(Error::GuardViolation {
                    index: t,
                    detail: "lowered tuple block leaves the target interval".into(),
                });
            }
        }
    } else {
        for (t, tuple) in src.profile.lex_elements.iter().enumerate() {
            let mapped: Vec<u8> = tuple.iter().map(|&x| phi.at(x as usize)).collect();
            let rank = dst.profile.tuple_rank(&mapped).unwrap();
            if k1.at(src.kappa[t] as usize) != dst.kappa[rank] {
                return Err(Error::GuardViolation {
                    index: t,
                    detail: "tuple equation fails".into(),
                });
            }
        }
    }
    if dst.k0.compose(&k1)? != src.k0 {
        return Err(Error::GuardViolation {
            index: 0,
            detail: "arrow image does not lie over the base".into(),
        });
    }
    Ok(k1)
}

/// Pushes one vertex subset of [m] through K: a tuple position survives
/// when every coordinate lies in the subset, a section position when its
/// preimage does.
fn transform_face(kd: &KData, f: &[u8]) -> Vec<u8> {
    (0..=kd.ambient())
        .filter(|&x| {
            if let Some(t) = kd.kappa_rank(x) {
                kd.profile.lex_elements[t].iter().all(|c| f.contains(c))
            } else {
                let q = kd.lambda_preimage(x).expect("position is tuple or section");
                f.contains(&q)
            }
        })
        .collect()
}

/// K on a union of faces of Δ[m]: each face is pushed through the
/// transform and the results are canonicalized into an antichain over
/// the enlarged simplex.
pub fn k_union_faces(sub: &FaceSubobject, profile: &XiProfile) -> Result<FaceSubobject> {
    let m = profile.xi.dom_dim();
    if sub.ambient != m {
        return Err(Error::AmbientMismatch {
            got: sub.ambient,
            expected: m,
        });
    }
    let kd = k_data(profile)?;
    let faces: Vec<Vec<u8>> = sub.faces().iter().map(|f| transform_face(&kd, f)).collect();
    Ok(FaceSubobject::union_of(kd.ambient(), &faces))
}

/// Vertex set of the face u_i: ambient positions where K₀ξ avoids i.
/// The union of these over i ∈ [n]∖{k} is the domain of K(ξ).
fn u_face(kd: &KData, i: u8) -> Vec<u8> {
    (0..=kd.ambient())
        .filter(|&x| kd.k0.at(x as usize) != i)
        .collect()
}

/// Vertex set of the face v_j: the transform of the face of Δ[m]
/// avoiding j; tuple positions survive when their ξ(j)-coordinate
/// differs from j (always, when ξ(j) = k).
fn v_face(kd: &KData, j: u8) -> Vec<u8> {
    let m = kd.profile.xi.dom_dim();
    let avoid: Vec<u8> = (0..=m).filter(|&q| q != j).collect();
    transform_face(kd, &avoid)
}

/// Vertex set of the face w_p for a tuple p and horn vertex l: every
/// tuple position, plus the section positions of vertices that sit in a
/// fiber other than ξ(l)'s and are bounded by p in their own fiber.
fn w_face(kd: &KData, p: &[u8], l: u8) -> Vec<u8> {
    let xi = &kd.profile.xi;
    let k = kd.profile.k;
    let xl = xi.at(l as usize);
    (0..=kd.ambient())
        .filter(|&x| {
            if kd.kappa_rank(x).is_some() {
                return true;
            }
            let q = kd.lambda_preimage(x).expect("position is tuple or section");
            let fq = xi.at(q as usize);
            fq != xl && (fq == k || q <= p[kd.profile.slot(fq)])
        })
        .collect()
}

/// One fill instruction: the face of the ambient simplex spanned by
/// `face` is attached along its horn at `center`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FillInstruction {
    pub face: Vec<u8>,
    pub center: u8,
}

impl FillInstruction {
    pub fn dim(&self) -> u8 {
        self.face.len() as u8 - 1
    }
}

/// A completion program: grows a union of faces sharing the vertex
/// `center` to the whole simplex by horn fills in increasing dimension.
#[derive(Clone, Debug)]
pub struct FaceProgram {
    pub ambient: u8,
    pub center: u8,
    pub start: FaceSubobject,
    pub steps: Vec<FillInstruction>,
}

impl FaceProgram {
    pub fn describe(&self) -> String {
        let mut s = format!(
            "complete {} faces through {} in dimension {}\n",
            self.start.faces().len(),
            self.center,
            self.ambient
        );
        for ins in &self.steps {
            let _ = writeln!(s, "fill {} from {}", subset_label(&ins.face), ins.center);
        }
        s
    }
}

/// Completes a union of faces through a shared vertex to the whole
/// simplex. Stage j adds every j-dimensional face through `e` not yet
/// covered; its boundary meets the part already built in exactly the
/// horn at `e`, which is checked as each instruction is emitted.
pub fn face_completion(ambient: u8, faces: &[Vec<u8>], e: u8) -> Result<FaceProgram> {
    if e > ambient {
        return Err(Error::BadIndex {
            index: e,
            limit: ambient,
        });
    }
    if faces.is_empty() {
        return Err(Error::EmptyFaces);
    }
    for f in faces {
        if !f.contains(&e) {
            return Err(Error::VertexNotShared { vertex: e });
        }
    }
    let start = FaceSubobject::union_of(ambient, faces);
    let mut current = start.clone();
    let mut steps = Vec::new();
    for sigma in simplex_subsets(ambient) {
        if sigma.len() < 2 || !sigma.contains(&e) || current.covers(&sigma) {
            continue;
        }
        for &v in &sigma {
            if v != e && !current.covers(&minus(&sigma, v)) {
                return Err(Error::GuardViolation {
                    index: v as usize,
                    detail: format!("side of {} through {e} not yet built", subset_label(&sigma)),
                });
            }
        }
        if current.covers(&minus(&sigma, e)) {
            return Err(Error::GuardViolation {
                index: e as usize,
                detail: format!("face opposite {e} in {} already built", subset_label(&sigma)),
            });
        }
        steps.push(FillInstruction {
            face: sigma.clone(),
            center: e,
        });
        current = combine_faces(
            FaceOp::Union,
            &current,
            &FaceSubobject::face(ambient, &sigma)?,
        )?;
    }
    Ok(FaceProgram {
        ambient,
        center: e,
        start,
        steps,
    })
}

/// One stage of the anodyne decomposition: a face of the enlarged
/// simplex attached along a union of faces all containing a designated
/// shared vertex, realized as a completion program local to the face.
#[derive(Clone, Debug)]
pub struct KHStage {
    pub label: String,
    pub face: Vec<u8>,
    pub shared: u8,
    pub attach: Vec<Vec<u8>>,
    pub program: FaceProgram,
}

/// Certified decomposition of the inclusion of the horn part of K(Λ_l[m])
/// into the domain of K(ξ), as a sequence of face attachments each of
/// which is anodyne by its completion program. `start` is the region
/// where lifting data is given, `mid` the waypoint after the first
/// phase, `end` the whole domain of K(ξ).
#[derive(Clone, Debug)]
pub struct KHDecomposition {
    pub kdata: KData,
    pub l: u8,
    pub start: FaceSubobject,
    pub mid: FaceSubobject,
    pub end: FaceSubobject,
    pub stages: Vec<KHStage>,
}

impl KHDecomposition {
    /// Flat list of fill instructions in ambient coordinates, in order.
    pub fn ambient_steps(&self) -> Vec<FillInstruction> {
        let mut out = Vec::new();
        for stage in &self.stages {
            for ins in &stage.program.steps {
                out.push(FillInstruction {
                    face: ins.face.iter().map(|&v| stage.face[v as usize]).collect(),
                    center: stage.face[ins.center as usize],
                });
            }
        }
        out
    }

    /// Replayable audit: per-stage faces, shared vertices, fill counts.
    pub fn describe(&self) -> String {
        let mut s = format!(
            "decompose over xi={:?} l={} k={}: {} stages\n",
            self.kdata.profile.xi, self.l, self.kdata.profile.k,
            self.stages.len()
        );
        for st in &self.stages {
            let _ = writeln!(
                s,
                "stage {}: face {} shared {} attach {} fills {}",
                st.label,
                subset_label(&st.face),
                st.shared,
                st.attach.len(),
                st.program.steps.len()
            );
        }
        s
    }
}

/// Carries the attach region into the local coordinates of a stage face
/// and completes it there.
fn local_completion(face: &[u8], attach: &[Vec<u8>], shared: u8) -> Result<FaceProgram> {
    let local = |verts: &[u8]| -> Vec<u8> {
        verts
            .iter()
            .map(|v| face.binary_search(v).expect("attach face inside stage face") as u8)
            .collect()
    };
    let faces_loc: Vec<Vec<u8>> = attach.iter().map(|f| local(f)).collect();
    let e_loc = face
        .binary_search(&shared)
        .expect("shared vertex inside stage face") as u8;
    face_completion(face.len() as u8 - 1, &faces_loc, e_loc)
}

/// Builds one stage: intersects the current region with the target
/// face, checks the intersection against the claimed attach formula and
/// the shared vertex, and emits the local completion program.
fn kh_stage(
    current: &FaceSubobject,
    face_verts: &[u8],
    claimed: &[Vec<u8>],
    shared: u8,
    label: String,
) -> Result<(KHStage, FaceSubobject)> {
    let big = current.ambient;
    let face = FaceSubobject::face(big, face_verts)?;
    let actual = combine_faces(FaceOp::Intersect, current, &face)?;
    let claimed_union = FaceSubobject::union_of(big, claimed);
    if claimed_union != actual {
        return Err(Error::GuardViolation {
            index: shared as usize,
            detail: format!(
                "attach region of stage {label} is {:?}, formula gives {:?}",
                actual.faces(),
                claimed_union.faces()
            ),
        });
    }
    for f in actual.faces() {
        if !f.contains(&shared) {
            return Err(Error::GuardViolation {
                index: shared as usize,
                detail: format!("attach face {} of stage {label} misses the shared vertex", subset_label(f)),
            });
        }
    }
    let program = local_completion(face_verts, actual.faces(), shared)?;
    let next = combine_faces(FaceOp::Union, current, &face)?;
    let stage = KHStage {
        label,
        face: face_verts.to_vec(),
        shared,
        attach: actual.faces().to_vec(),
        program,
    };
    Ok((stage, next))
}

/// Decomposes the inclusion of the horn part of K over Λ_l[m] into the
/// full domain of K(ξ) as certified anodyne stages. Phase one attaches
/// the faces u_c for c away from k and ξ(l), glued along regions through
/// the section image of l; phase two (empty when ξ(l) = k) attaches the
/// tuple-bounded pieces of u_{ξ(l)} in tuple order, glued along regions
/// through the tuple position of the tuple rewritten at l. Every claimed
/// attach region is recomputed from the actual intersection and every
/// stage is certified by its completion program.
pub fn anodyne_decompose_kh(xi: &SimplexMap, l: u8, k: u8) -> Result<KHDecomposition> {
    let m = xi.dom_dim();
    if m == 0 || l > m {
        return Err(Error::BadIndex { index: l, limit: m });
    }
    let profile = xi_profile(xi, k)?;
    let kd = k_data(&profile)?;
    let n = xi.cod_dim();
    let big = kd.ambient();
    let nonk = nonk_indices(n, k);
    let xl = xi.at(l as usize);

    let u_sets: HashMap<u8, Vec<u8>> = nonk.iter().map(|&i| (i, u_face(&kd, i))).collect();
    let v_sets: Vec<(u8, Vec<u8>)> = (0..=m)
        .filter(|&j| j != l)
        .map(|j| (j, v_face(&kd, j)))
        .collect();

    let mut a_pieces = Vec::new();
    for &i in &nonk {
        for (_, vj) in &v_sets {
            a_pieces.push(meet(&u_sets[&i], vj));
        }
    }
    let start = FaceSubobject::union_of(big, &a_pieces);
    let end_pieces: Vec<Vec<u8>> = nonk.iter().map(|&i| u_sets[&i].clone()).collect();
    let end = FaceSubobject::union_of(big, &end_pieces);
    let mid = if xl == k {
        end.clone()
    } else {
        let mut pieces: Vec<Vec<u8>> = v_sets.iter().map(|(_, vj)| meet(&u_sets[&xl], vj)).collect();
        for &i in &nonk {
            if i != xl {
                pieces.push(u_sets[&i].clone());
            }
        }
        FaceSubobject::union_of(big, &pieces)
    };

    let mut current = start.clone();
    let mut stages = Vec::new();
    let mut added: Vec<u8> = Vec::new();
    let shared1 = kd.lambda.at(l as usize);
    for &c in &nonk {
        if c == xl && xl != k {
            continue;
        }
        let uc = &u_sets[&c];
        if uc.is_empty() {
            continue;
        }
        let mut claimed: Vec<Vec<u8>> = v_sets.iter().map(|(_, vj)| meet(uc, vj)).collect();
        for &i in &added {
            claimed.push(meet(&u_sets[&i], uc));
        }
        let (stage, next) = kh_stage(&current, uc, &claimed, shared1, format!("side {c}"))?;
        stages.push(stage);
        current = next;
        added.push(c);
    }
    if current != mid {
        return Err(Error::GuardViolation {
            index: 0,
            detail: "first phase does not reach the waypoint".into(),
        });
    }
    if xl != k {
        let uxl = &u_sets[&xl];
        for (t, p) in profile.lex_elements.iter().enumerate() {
            let wp = w_face(&kd, p, l);
            let face_verts = meet(uxl, &wp);
            let mut pl = p.clone();
            pl[profile.slot(xl)] = l;
            let rank = profile.tuple_rank(&pl).ok_or(Error::GuardViolation {
                index: t,
                detail: "tuple rewritten at l is not a tuple".into(),
            })?;
            let shared = kd.kappa[rank];
            let mut claimed: Vec<Vec<u8>> = Vec::new();
            for &i in &nonk {
                if i != xl {
                    claimed.push(meet(&meet(&u_sets[&i], uxl), &wp));
                }
            }
            for (_, vj) in &v_sets {
                claimed.push(meet(&meet(uxl, vj), &wp));
            }
            for q in profile.lex_elements.iter().take(t) {
                let wq = w_face(&kd, q, l);
                claimed.push(meet(&meet(uxl, &wq), &wp));
            }
            let (stage, next) = kh_stage(&current, &face_verts, &claimed, shared, format!("tuple {t}"))?;
            stages.push(stage);
            current = next;
        }
    }
    if current != end {
        return Err(Error::GuardViolation {
            index: 0,
            detail: "stages do not exhaust the domain".into(),
        });
    }
    Ok(KHDecomposition {
        kdata: kd,
        l,
        start,
        mid,
        end,
        stages,
    })
}

/// A realized union of faces: the subcomplex of the ambient simplex
/// with lookup tables between cells and vertex subsets.
struct RealizedUnion {
    object: Arc<FiniteSSet>,
    cell_subsets: Vec<Vec<u8>>,
    cell_monos: Vec<SimplexMap>,
    subset_to_cell: HashMap<Vec<u8>, usize>,
}

fn realize_union(u: &FaceSubobject) -> RealizedUnion {
    let (object, inclusion) = u.realize();
    let subsets = simplex_subsets(u.ambient);
    let cell_subsets: Vec<Vec<u8>> = inclusion
        .map
        .iter()
        .map(|e| subsets[e.cell].clone())
        .collect();
    let cell_monos = cell_subsets
        .iter()
        .map(|s| SimplexMap::new(s.clone(), u.ambient + 1).expect("subsets are sorted"))
        .collect();
    let subset_to_cell = cell_subsets
        .iter()
        .cloned()
        .enumerate()
        .map(|(c, s)| (s, c))
        .collect();
    RealizedUnion {
        object,
        cell_subsets,
        cell_monos,
        subset_to_cell,
    }
}

/// Replays a decomposition against a filler certificate: starting from
/// values on the attach region, performs every stage fill in order and
/// checks that the end union is fully assigned.
fn replay_decomposition(
    dec: &KHDecomposition,
    ru: &RealizedUnion,
    assign: &mut [Option<Element>],
    over: &SMorphism,
    cert: &FillerCertificate,
) -> Result<()> {
    let steps: Vec<(usize, u8)> = dec
        .ambient_steps()
        .iter()
        .map(|ins| {
            let cell = *ru
                .subset_to_cell
                .get(&ins.face)
                .ok_or_else(|| Error::GuardViolation {
                    index: ins.center as usize,
                    detail: format!("instruction face {} is not realized", subset_label(&ins.face)),
                })?;
            let r = ins
                .face
                .binary_search(&ins.center)
                .expect("center inside its face") as u8;
            Ok((cell, r))
        })
        .collect::<Result<_>>()?;
    run_fill_steps(&ru.object, &steps, assign, over, cert)?;
    for (c, a) in assign.iter().enumerate() {
        if a.is_none() {
            return Err(Error::GuardViolation {
                index: c,
                detail: "cell left unassigned after replay".into(),
            });
        }
    }
    Ok(())
}

/// Extends a morphism given on a realized union of faces through a
/// shared vertex to the whole simplex, by replaying the completion
/// program as horn fills against a filler certificate for a fibration,
/// over the given base morphism. The returned morphism restricts to the
/// given one and lies over the base.
pub fn complete_faces(
    program: &FaceProgram,
    top: &SMorphism,
    over: &SMorphism,
    cert: &FillerCertificate,
) -> Result<SMorphism> {
    let whole = realize_union(&FaceSubobject::whole(program.ambient));
    let start = realize_union(&program.start);
    if *top.source != *start.object {
        return Err(Error::ObjectMismatch(
            "extension data does not live on the realized start union".into(),
        ));
    }
    if *top.target != *cert.morphism.source {
        return Err(Error::ObjectMismatch(
            "extension data does not land in the certified total space".into(),
        ));
    }
    if *over.source != *whole.object || *over.target != *cert.morphism.target {
        return Err(Error::ObjectMismatch(
            "base morphism does not run from the simplex to the certified base".into(),
        ));
    }
    let mut assign: Vec<Option<Element>> = vec![None; whole.object.n_cells()];
    for (c, sub) in start.cell_subsets.iter().enumerate() {
        let w = whole.subset_to_cell[sub];
        if compose_morphisms(&cert.morphism, top)?.map[c] != over.map[w] {
            return Err(Error::IncompatibleSquare);
        }
        assign[w] = Some(top.map[c].clone());
    }
    let steps: Vec<(usize, u8)> = program
        .steps
        .iter()
        .map(|ins| {
            let cell = whole.subset_to_cell[&ins.face];
            let r = ins.face.binary_search(&ins.center).expect("center inside face") as u8;
            (cell, r)
        })
        .collect();
    run_fill_steps(&whole.object, &steps, &mut assign, over, cert)?;
    let vals: Result<Vec<Element>> = assign
        .into_iter()
        .enumerate()
        .map(|(c, a)| {
            a.ok_or(Error::GuardViolation {
                index: c,
                detail: "completion left a cell unassigned".into(),
            })
        })
        .collect();
    make_morphism(&simplex(program.ambient), &cert.morphism.source, vals?)
}

/// The horn with reverse lookup from maps into [n] whose image misses a
/// vertex other than k.
struct HornTable {
    n: u8,
    k: u8,
    object: Arc<FiniteSSet>,
    inclusion: SMorphism,
    subset_index: HashMap<Vec<u8>, usize>,
    from_simplex_cell: HashMap<usize, usize>,
}

impl HornTable {
    fn new(n: u8, k: u8) -> Result<Self> {
        let (object, inclusion) = horn(n, k)?;
        let subset_index = simplex_subsets(n)
            .into_iter()
            .zip(0..)
            .collect();
        let from_simplex_cell = inclusion
            .map
            .iter()
            .enumerate()
            .map(|(hc, e)| (e.cell, hc))
            .collect();
        Ok(HornTable {
            n,
            k,
            object,
            inclusion,
            subset_index,
            from_simplex_cell,
        })
    }

    fn contains_map(&self, phi: &SimplexMap) -> bool {
        (0..=self.n).any(|v| v != self.k && !phi.values().contains(&v))
    }

    /// The horn element named by a map into [n].
    fn element_of(&self, phi: &SimplexMap) -> Result<Element> {
        let (mono, epi) = phi.epi_mono_factor();
        let idx = self.subset_index[mono.values()];
        let cell = self
            .from_simplex_cell
            .get(&idx)
            .ok_or_else(|| Error::NotOverHorn(format!("map {phi:?} covers the missing face")))?;
        Ok(Element { cell: *cell, epi })
    }
}

/// Per-map workspace: profile and K data, the realized domain union of
/// K(ξ), and its structure morphism to the horn.
struct DomainEntry {
    profile: XiProfile,
    kdata: KData,
    union: FaceSubobject,
    ru: RealizedUnion,
    structure: SMorphism,
}

/// A fiber element over ξ: one value for each cell of the realized
/// domain union, forming a morphism into the total space over the horn.
type DElem = (SimplexMap, Vec<Element>);

struct DescentCtx {
    n: u8,
    k: u8,
    horn: HornTable,
    f: SMorphism,
    entries: RefCell<HashMap<SimplexMap, Arc<DomainEntry>>>,
}

impl DescentCtx {
    fn entry(&self, xi: &SimplexMap) -> Result<Arc<DomainEntry>> {
        if let Some(e) = self.entries.borrow().get(xi) {
            return Ok(e.clone());
        }
        let profile = xi_profile(xi, self.k)?;
        let kdata = k_data(&profile)?;
        let ufaces: Vec<Vec<u8>> = nonk_indices(self.n, self.k)
            .iter()
            .map(|&i| u_face(&kdata, i))
            .collect();
        let union = FaceSubobject::union_of(kdata.ambient(), &ufaces);
        let ru = realize_union(&union);
        let svals: Result<Vec<Element>> = ru
            .cell_monos
            .iter()
            .map(|mono| self.horn.element_of(&kdata.k0.compose(mono)?))
            .collect();
        let structure = make_morphism(&ru.object, &self.horn.object, svals?)?;
        let entry = Arc::new(DomainEntry {
            profile,
            kdata,
            union,
            ru,
            structure,
        });
        self.entries.borrow_mut().insert(xi.clone(), entry.clone());
        Ok(entry)
    }

    /// The action of an arrow on fiber elements: compose the underlying
    /// map, translate each cell of the finer domain through K of the
    /// arrow, and read values off the coarser element.
    fn translate(&self, t: &DElem, phi: &SimplexMap) -> Result<DElem> {
        let (xi, vals) = t;
        let xi2 = xi.compose(phi)?;
        let src = self.entry(&xi2)?;
        let dst = self.entry(xi)?;
        let k1 = k1_from(&src.kdata, &dst.kdata, phi)?;
        let x = &self.f.source;
        let mut vals2 = Vec::with_capacity(src.ru.cell_monos.len());
        for mono in &src.ru.cell_monos {
            let psi = k1.compose(mono)?;
            let (pm, pe) = psi.epi_mono_factor();
            let cell = *dst
                .ru
                .subset_to_cell
                .get(pm.values())
                .ok_or_else(|| Error::GuardViolation {
                    index: 0,
                    detail: "translated cell escapes the domain union".into(),
                })?;
            vals2.push(x.eval(&vals[cell], &pe));
        }
        Ok((xi2, vals2))
    }
}

fn dlabel(t: &DElem) -> String {
    let mut s = String::from("D");
    for (i, v) in t.0.values().iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{v}");
    }
    s.push('|');
    for (i, e) in t.1.iter().enumerate() {
        if i > 0 {
            s.push(';');
        }
        let _ = write!(s, "{}", e.cell);
        for w in e.epi.values() {
            let _ = write!(s, ".{w}");
        }
    }
    s
}

/// All morphisms from the realized domain union into the fibration's
/// total space over the horn structure, by backtracking in cell
/// dimension order.
fn enumerate_over(entry: &DomainEntry, f: &SMorphism) -> Vec<Vec<Element>> {
    let obj = &entry.ru.object;
    let x = &f.source;
    let order = obj.cells_by_dim();
    let mut assign: Vec<Option<Element>> = vec![None; obj.n_cells()];
    let mut out = Vec::new();
    fn go(
        pos: usize,
        order: &[usize],
        obj: &FiniteSSet,
        x: &Arc<FiniteSSet>,
        f: &SMorphism,
        structure: &SMorphism,
        assign: &mut Vec<Option<Element>>,
        out: &mut Vec<Vec<Element>>,
    ) {
        if pos == order.len() {
            out.push(assign.iter().map(|a| a.clone().unwrap()).collect());
            return;
        }
        let cell = order[pos];
        let d = obj.dim_of(cell);
        for cand in x.elements_at(d) {
            if f.apply(&cand) != structure.map[cell] {
                continue;
            }
            let ok = obj.faces_of(cell).iter().enumerate().all(|(j, fe)| {
                let want = x.eval(
                    assign[fe.cell].as_ref().expect("faces precede in dimension order"),
                    &fe.epi,
                );
                x.eval(&cand, &SimplexMap::delta(d, j as u8).unwrap()) == want
            });
            if !ok {
                continue;
            }
            assign[cell] = Some(cand.clone());
            go(pos + 1, order, obj, x, f, structure, assign, out);
            assign[cell] = None;
        }
    }
    go(
        0,
        &order,
        obj,
        x,
        f,
        &entry.structure,
        &mut assign,
        &mut out,
    );
    out
}

/// The descent of a fibration along the horn inclusion: a fibration
/// over the whole simplex whose level over each map ξ is the set of
/// morphisms from the realized domain union of K(ξ) into the total
/// space, over the horn. Materialized through dimension `bound`.
pub struct DescentResult {
    pub total: Arc<FiniteSSet>,
    pub df: SMorphism,
    pub f: SMorphism,
    pub cert: FillerCertificate,
    pub n: u8,
    pub k: u8,
    pub bound: u8,
    skel: Arc<Skeletonized<DElem>>,
    ctx: Arc<DescentCtx>,
}

impl std::fmt::Debug for DescentResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DescentResult")
            .field("n", &self.n)
            .field("k", &self.k)
            .field("bound", &self.bound)
            .field("cells", &self.total.n_cells())
            .finish()
    }
}

impl DescentResult {
    /// Number of fiber elements over a map ξ with dom dimension ≤ bound.
    pub fn fiber_size(&self, xi: &SimplexMap) -> usize {
        let d = xi.dom_dim();
        assert!(d <= self.bound, "fiber beyond the materialized bound");
        self.skel.level(d).iter().filter(|t| t.0 == *xi).count()
    }

    /// The element of the total space over ξ with the given fiber index
    /// (in the canonical level order).
    pub fn element_over(&self, xi: &SimplexMap, index: usize) -> Option<Element> {
        let d = xi.dom_dim();
        let t = self
            .skel
            .level(d)
            .iter()
            .filter(|t| t.0 == *xi)
            .nth(index)?
            .clone();
        Some(self.skel.form_of(d, &t))
    }
}

pub fn descent_d(
    f: &SMorphism,
    cert: &FillerCertificate,
    n: u8,
    k: u8,
    bound: u8,
) -> Result<DescentResult> {
    descent_build(f, cert, n, k, bound, None)
}

/// Fault-injection variant for exercising the pullback checker: drops
/// the fiber element at `index` over `xi` before assembling the total
/// space. `xi` must sit at the top materialized dimension (so the
/// remaining levels stay closed under the action) and inside the horn.
pub fn descent_d_with_dropped_hom(
    f: &SMorphism,
    cert: &FillerCertificate,
    n: u8,
    k: u8,
    bound: u8,
    xi: &SimplexMap,
    index: usize,
) -> Result<DescentResult> {
    if xi.dom_dim() != bound || xi.cod_dim() != n {
        return Err(Error::DimMismatch(
            "dropped fiber must sit at the top materialized dimension".into(),
        ));
    }
    if !(0..=n).any(|v| v != k && !xi.values().contains(&v)) {
        return Err(Error::NotOverHorn(
            "dropped fiber must lie over the horn".into(),
        ));
    }
    descent_build(f, cert, n, k, bound, Some((xi.clone(), index)))
}

fn descent_build(
    f: &SMorphism,
    cert: &FillerCertificate,
    n: u8,
    k: u8,
    bound: u8,
    fault: Option<(SimplexMap, usize)>,
) -> Result<DescentResult> {
    if n == 0 {
        return Err(Error::NotOverHorn("the base simplex has no horn".into()));
    }
    if k > n {
        return Err(Error::BadIndex { index: k, limit: n });
    }
    let horn_table = HornTable::new(n, k)?;
    if *f.target != *horn_table.object {
        return Err(Error::NotOverHorn(
            "fibration target is not the horn".into(),
        ));
    }
    if cert.morphism != *f || cert.family != FillFamily::Horn {
        return Err(Error::BadEvidence(
            "certificate does not certify the fibration over the horn".into(),
        ));
    }
    let ctx = Arc::new(DescentCtx {
        n,
        k,
        horn: horn_table,
        f: f.clone(),
        entries: RefCell::new(HashMap::new()),
    });
    let mut levels: Vec<Vec<DElem>> = Vec::with_capacity(bound as usize + 1);
    for d in 0..=bound {
        let mut lv = Vec::new();
        for xi in enumerate_maps(d, n, MapKind::All) {
            let entry = ctx.entry(&xi)?;
            let mut homs = enumerate_over(&entry, f);
            if let Some((fx, fi)) = &fault {
                if *fx == xi {
                    if *fi >= homs.len() {
                        return Err(Error::UnknownCell(*fi));
                    }
                    homs.remove(*fi);
                }
            }
            for h in homs {
                lv.push((xi.clone(), h));
            }
        }
        lv.sort();
        levels.push(lv);
    }
    let actx = ctx.clone();
    let act = move |t: &DElem, phi: &SimplexMap| {
        actx.translate(t, phi)
            .expect("action stays inside materialized data")
    };
    let skel = Arc::new(skeletonize(levels, act, dlabel));
    let total = skel.sset.clone();
    let base = simplex(n);
    let df_map: Vec<Element> = (0..total.n_cells())
        .map(|c| simplex_map_to_element(n, &skel.origin_of(c).0))
        .collect();
    let df = make_morphism(&total, &base, df_map)?;
    Ok(DescentResult {
        total,
        df,
        f: f.clone(),
        cert: cert.clone(),
        n,
        k,
        bound,
        skel,
        ctx,
    })
}

/// Outcome of comparing the restriction of the descent fibration over
/// the horn with the original fibration: an inverse pair of morphisms,
/// or a witness element present on one side only.
#[derive(Debug)]
pub enum PullbackCheck {
    Iso {
        to_domain: SMorphism,
        from_domain: SMorphism,
    },
    Mismatch {
        dim: u8,
        detail: String,
    },
}

impl PullbackCheck {
    pub fn is_iso(&self) -> bool {
        matches!(self, PullbackCheck::Iso { .. })
    }
}

/// Characteristic fiber element of an element of the original total
/// space: over the horn the domain union of K is the whole simplex, and
/// the values are the evaluations at every vertex subset.
fn char_delem(ctx: &DescentCtx, x: &Arc<FiniteSSet>, f: &SMorphism, xe: &Element) -> Result<DElem> {
    let hz = f.apply(xe);
    let zeta = element_to_simplex_map(ctx.n, &ctx.horn.inclusion.apply(&hz));
    let entry = ctx.entry(&zeta)?;
    if entry.profile.norm != 0 || !entry.union.is_whole() {
        return Err(Error::GuardViolation {
            index: xe.cell,
            detail: "horn map admits tuples".into(),
        });
    }
    let vals: Vec<Element> = entry.ru.cell_monos.iter().map(|mono| x.eval(xe, mono)).collect();
    Ok((zeta, vals))
}

/// Compares the descent fibration's restriction over the horn with the
/// original fibration, levelwise through the materialized bound, and
/// produces an inverse pair of morphisms or a mismatch witness.
pub fn descent_pullback_check(dr: &DescentResult) -> Result<PullbackCheck> {
    let x = &dr.f.source;
    let ctx = &dr.ctx;
    for d in 0..=dr.bound {
        let mut matched = vec![false; dr.skel.level(d).len()];
        for xe in x.elements_at(d) {
            let t = char_delem(ctx, x, &dr.f, &xe)?;
            match dr.skel.level(d).binary_search(&t) {
                Ok(i) => {
                    if matched[i] {
                        return Ok(PullbackCheck::Mismatch {
                            dim: d,
                            detail: format!("two elements share the fiber element over {:?}", t.0),
                        });
                    }
                    matched[i] = true;
                }
                Err(_) => {
                    return Ok(PullbackCheck::Mismatch {
                        dim: d,
                        detail: format!(
                            "element {xe:?} over {:?} has no descent counterpart",
                            t.0
                        ),
                    })
                }
            }
        }
        for (i, t) in dr.skel.level(d).iter().enumerate() {
            if ctx.horn.contains_map(&t.0) && !matched[i] {
                return Ok(PullbackCheck::Mismatch {
                    dim: d,
                    detail: format!("descent element over {:?} has no preimage", t.0),
                });
            }
        }
    }
    // Levels agree; assemble the inverse pair on nondegenerate cells.
    let keep: Vec<usize> = (0..dr.total.n_cells())
        .filter(|&c| ctx.horn.contains_map(&dr.skel.origin_of(c).0))
        .collect();
    let (sub, incl) = sub_sset(&dr.total, &keep)?;
    let mut total_to_sub = HashMap::new();
    for (sc, e) in incl.map.iter().enumerate() {
        total_to_sub.insert(e.cell, sc);
    }
    let mut tod = Vec::with_capacity(sub.n_cells());
    for sc in 0..sub.n_cells() {
        let t = dr.skel.origin_of(incl.map[sc].cell);
        let entry = ctx.entry(&t.0)?;
        let all: Vec<u8> = (0..=t.0.dom_dim()).collect();
        let top = entry.ru.subset_to_cell[&all];
        tod.push(t.1[top].clone());
    }
    let to_domain = make_morphism(&sub, x, tod)?;
    let mut fro = Vec::with_capacity(x.n_cells());
    for c in 0..x.n_cells() {
        let d = x.dim_of(c);
        let t = char_delem(ctx, x, &dr.f, &Element::nondegenerate(c, d))?;
        let elt = dr.skel.form_of(d, &t);
        if !elt.epi.is_identity() {
            return Err(Error::GuardViolation {
                index: c,
                detail: "fiber element of a nondegenerate cell degenerates".into(),
            });
        }
        fro.push(Element::nondegenerate(total_to_sub[&elt.cell], d));
    }
    let from_domain = make_morphism(x, &sub, fro)?;
    if compose_morphisms(&to_domain, &from_domain)? != identity_morphism(x) {
        return Ok(PullbackCheck::Mismatch {
            dim: 0,
            detail: "round trip through the descent side is not the identity".into(),
        });
    }
    if compose_morphisms(&from_domain, &to_domain)? != identity_morphism(&sub) {
        return Ok(PullbackCheck::Mismatch {
            dim: 0,
            detail: "round trip through the original side is not the identity".into(),
        });
    }
    let hs: Result<Vec<Element>> = (0..sub.n_cells())
        .map(|sc| {
            let t = dr.skel.origin_of(incl.map[sc].cell);
            ctx.horn.element_of(&t.0)
        })
        .collect();
    let horn_structure = make_morphism(&sub, &ctx.horn.object, hs?)?;
    if compose_morphisms(&dr.f, &to_domain)? != horn_structure {
        return Ok(PullbackCheck::Mismatch {
            dim: 0,
            detail: "identification is not over the horn".into(),
        });
    }
    Ok(PullbackCheck::Iso {
        to_domain,
        from_domain,
    })
}

/// Solves a horn lifting problem Λ_l[m] → total over Δ[m] → Δ[n]
/// against the descent fibration, by translating into the original
/// fibration's lifting problems: in base dimension one through a single
/// fill in the fiber product structure, otherwise by replaying the
/// anodyne decomposition of the domain union. Both triangle equations
/// are verified on the returned filler.
pub fn descent_horn_lift(
    dr: &DescentResult,
    m: u8,
    l: u8,
    a: &SMorphism,
    b: &SMorphism,
) -> Result<SMorphism> {
    if m == 0 || l > m {
        return Err(Error::BadSquare(format!(
            "no horn at index {l} in dimension {m}"
        )));
    }
    let (hobj, hincl) = horn(m, l)?;
    if *a.source != *hobj {
        return Err(Error::BadSquare("top map is not on the horn".into()));
    }
    if *a.target != *dr.total {
        return Err(Error::BadSquare(
            "top map does not land in the descent total space".into(),
        ));
    }
    if *b.source != *simplex(m) || *b.target != *simplex(dr.n) {
        return Err(Error::BadSquare(
            "bottom map does not run from the simplex to the base".into(),
        ));
    }
    if compose_morphisms(&dr.df, a)? != compose_morphisms(b, &hincl)? {
        return Err(Error::BadSquare("the square does not commute".into()));
    }
    if m > dr.bound {
        return Err(Error::BoundTooSmall {
            bound: dr.bound,
            need: format!("descent data materialized at dimension {m}"),
        });
    }
    let top_cell = b.source.n_cells() - 1;
    let xi = element_to_simplex_map(dr.n, &b.map[top_cell]);

    let mut facets: Vec<Option<DElem>> = vec![None; m as usize + 1];
    for j in 0..=m {
        if j == l {
            continue;
        }
        let sub: Vec<u8> = (0..=m).filter(|&v| v != j).collect();
        let cell = hobj
            .cell_by_label(&subset_label(&sub))
            .expect("horn contains every facet but one");
        let e = &a.map[cell];
        let t = if e.epi.is_identity() {
            dr.skel.origin_of(e.cell).clone()
        } else {
            dr.skel.apply_action(dr.skel.origin_of(e.cell), &e.epi)
        };
        if t.0 != xi.compose(&SimplexMap::delta(m, j)?)? {
            return Err(Error::GuardViolation {
                index: j as usize,
                detail: "facet sits over the wrong base map".into(),
            });
        }
        facets[j as usize] = Some(t);
    }

    let vals = if dr.n == 1 {
        lift_dim_one(dr, m, l, &xi, &facets)?
    } else {
        lift_general(dr, m, l, &xi, &facets)?
    };

    let t = (xi.clone(), vals);
    if dr.skel.level(m).binary_search(&t).is_err() {
        return Err(Error::GuardViolation {
            index: m as usize,
            detail: "lifted fiber element missing from its level".into(),
        });
    }
    let elt = dr.skel.form_of(m, &t);
    let sm = simplex(m);
    let fill_map: Vec<Element> = simplex_subsets(m)
        .iter()
        .map(|s| {
            let mono = SimplexMap::new(s.clone(), m + 1).unwrap();
            dr.total.eval(&elt, &mono)
        })
        .collect();
    let filler = make_morphism(&sm, &dr.total, fill_map)?;
    if compose_morphisms(&filler, &hincl)? != *a || compose_morphisms(&dr.df, &filler)? != *b {
        return Err(Error::EquationsFail(
            "descent filler fails a triangle".into(),
        ));
    }
    Ok(filler)
}

/// Base dimension one: the domain union of K(ξ) is the single face of
/// positions over the horn vertex, a simplex of the same dimension as
/// ξ's domain, and the whole lift is one horn fill in the fiber. The
/// face of a fiber element at j is taken at the block position of j, so
/// the fill index is the block position of l.
fn lift_dim_one(
    dr: &DescentResult,
    m: u8,
    l: u8,
    xi: &SimplexMap,
    facets: &[Option<DElem>],
) -> Result<Vec<Element>> {
    let ctx = &dr.ctx;
    let entry = ctx.entry(xi)?;
    let kd = &entry.kdata;
    let block: Vec<u8> = (0..=kd.ambient())
        .filter(|&x| kd.k0.at(x as usize) == ctx.k)
        .collect();
    if block.len() != m as usize + 1 {
        return Err(Error::GuardViolation {
            index: m as usize,
            detail: "block face has unexpected size".into(),
        });
    }
    let rank_in_block =
        |v: u8| block.binary_search(&v).expect("position inside the block") as u8;
    let mut jpos = vec![0u8; m as usize + 1];
    for i in 0..=m as usize {
        let v = if xi.at(i) == ctx.k {
            kd.lambda.at(i)
        } else {
            let fiber = &entry.profile.fibers[xi.at(i) as usize];
            let r = fiber.binary_search(&(i as u8)).unwrap();
            kd.kappa[r]
        };
        jpos[i] = rank_in_block(v);
    }
    let mut seen = vec![false; m as usize + 1];
    for &p in &jpos {
        if seen[p as usize] {
            return Err(Error::GuardViolation {
                index: p as usize,
                detail: "block positions collide".into(),
            });
        }
        seen[p as usize] = true;
    }
    let r = jpos[l as usize];
    let mut top: Vec<(u8, Element)> = Vec::new();
    for j in 0..=m as usize {
        if j == l as usize {
            continue;
        }
        let t = facets[j].as_ref().unwrap();
        let ej = ctx.entry(&t.0)?;
        let bverts: Vec<u8> = (0..=ej.kdata.ambient())
            .filter(|&x| ej.kdata.k0.at(x as usize) == ctx.k)
            .collect();
        let cell = *ej
            .ru
            .subset_to_cell
            .get(&bverts)
            .expect("block face is realized");
        top.push((jpos[j], t.1[cell].clone()));
    }
    top.sort_by_key(|(p, _)| *p);
    let tops: Vec<Element> = top.into_iter().map(|(_, e)| e).collect();
    let constant = SimplexMap::new(vec![ctx.k; m as usize + 1], dr.n + 1)?;
    let bottom = ctx.horn.element_of(&constant)?;
    let xf = dr.cert.fill(&SquareKey::horn(m, r, tops, bottom))?;
    let x = &dr.f.source;
    let vals = entry
        .ru
        .cell_monos
        .iter()
        .map(|mono| {
            let local: Vec<u8> = mono.values().iter().map(|&v| rank_in_block(v)).collect();
            x.eval(&xf, &SimplexMap::new(local, m + 1).unwrap())
        })
        .collect();
    Ok(vals)
}

/// Base dimension at least two: assemble the values on the attach
/// region from the facet fiber elements (each carried through K of the
/// face inclusion), then replay the anodyne decomposition.
fn lift_general(
    dr: &DescentResult,
    m: u8,
    l: u8,
    xi: &SimplexMap,
    facets: &[Option<DElem>],
) -> Result<Vec<Element>> {
    let ctx = &dr.ctx;
    let entry = ctx.entry(xi)?;
    let dec = anodyne_decompose_kh(xi, l, ctx.k)?;
    if dec.end != entry.union {
        return Err(Error::GuardViolation {
            index: 0,
            detail: "decomposition end differs from the domain union".into(),
        });
    }
    let x = &dr.f.source;
    let mut tables: Vec<Option<(SimplexMap, Arc<DomainEntry>)>> = vec![None; m as usize + 1];
    for j in 0..=m {
        if j == l {
            continue;
        }
        let t = facets[j as usize].as_ref().unwrap();
        let ej = ctx.entry(&t.0)?;
        let k1 = k1_from(&ej.kdata, &entry.kdata, &SimplexMap::delta(m, j)?)?;
        if k1.values() != v_face(&entry.kdata, j).as_slice() {
            return Err(Error::GuardViolation {
                index: j as usize,
                detail: "face image does not match its predicate face".into(),
            });
        }
        tables[j as usize] = Some((k1, ej));
    }
    let mut assign: Vec<Option<Element>> = vec![None; entry.ru.object.n_cells()];
    for (c, sub) in entry.ru.cell_subsets.iter().enumerate() {
        if !dec.start.covers(sub) {
            continue;
        }
        let mut chosen: Option<Element> = None;
        for j in 0..=m {
            if j == l {
                continue;
            }
            let (k1, ej) = tables[j as usize].as_ref().unwrap();
            let local: Option<Vec<u8>> = sub
                .iter()
                .map(|v| k1.values().binary_search(v).ok().map(|p| p as u8))
                .collect();
            let Some(local) = local else { continue };
            let cell = *ej
                .ru
                .subset_to_cell
                .get(&local)
                .ok_or_else(|| Error::GuardViolation {
                    index: c,
                    detail: "carried cell escapes the facet domain".into(),
                })?;
            let val = facets[j as usize].as_ref().unwrap().1[cell].clone();
            match &chosen {
                None => chosen = Some(val),
                Some(prev) if *prev == val => {}
                Some(_) => {
                    return Err(Error::GuardViolation {
                        index: c,
                        detail: "facet values disagree on a shared cell".into(),
                    })
                }
            }
        }
        assign[c] = Some(chosen.ok_or_else(|| Error::GuardViolation {
            index: c,
            detail: "attach cell reached by no facet".into(),
        })?);
    }
    replay_decomposition(&dec, &entry.ru, &mut assign, &entry.structure, &dr.cert)?;
    let vals: Vec<Element> = assign.into_iter().map(Option::unwrap).collect();
    let hom = make_morphism(&entry.ru.object, x, vals.clone())?;
    if compose_morphisms(&dr.f, &hom)? != entry.structure {
        return Err(Error::EquationsFail(
            "lifted fiber element is not over the horn".into(),
        ));
    }
    Ok(vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{coproduct, product};
    use crate::lifting::{kan_certificate, search_lift, LiftSquare};
    use crate::simplex::SimplexMap;
    use crate::sset::{discrete, enumerate_morphisms, find_isomorphism, to_point};

    fn sm(values: &[u8], cod: u8) -> SimplexMap {
        SimplexMap::new(values.to_vec(), cod).unwrap()
    }

    #[test]
    fn profile_identity_middle() {
        let p = xi_profile(&SimplexMap::identity(2), 1).unwrap();
        assert_eq!(p.fibers, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(p.norm, 1);
        assert_eq!(p.lex_elements, vec![vec![0, 2]]);
    }

    #[test]
    fn profile_constant_with_empty_fiber() {
        let p = xi_profile(&sm(&[1, 1], 3), 1).unwrap();
        assert_eq!(p.norm, 0);
        assert!(p.lex_elements.is_empty());
        assert_eq!(p.fibers[0], Vec::<u8>::new());
    }

    #[test]
    fn profile_two_tuples() {
        let p = xi_profile(&sm(&[0, 0, 2], 3), 1).unwrap();
        assert_eq!(p.norm, 2);
        assert_eq!(p.lex_elements, vec![vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn profile_rejects_bad_horn_index() {
        let err = xi_profile(&sm(&[0, 1], 2), 3).unwrap_err();
        assert!(matches!(err, Error::BadIndex { index: 3, limit: 1 }));
    }

    #[test]
    fn kdata_identity_middle() {
        let kd = k_data(&xi_profile(&SimplexMap::identity(2), 1).unwrap()).unwrap();
        assert_eq!(kd.k0, sm(&[0, 1, 1, 2], 3));
        assert_eq!(kd.kappa, vec![1]);
        assert_eq!(kd.lambda, sm(&[0, 2, 3], 4));
    }

    #[test]
    fn kdata_norm_zero_is_trivial() {
        let kd = k_data(&xi_profile(&sm(&[1, 1], 3), 1).unwrap()).unwrap();
        assert_eq!(kd.k0, sm(&[1, 1], 3));
        assert!(kd.kappa.is_empty());
        assert!(kd.lambda.is_identity());
    }

    #[test]
    fn section_recovers_map_exhaustively() {
        for n in 1..=3u8 {
            for k in 0..=n {
                for m in 0..=4u8 {
                    for xi in enumerate_maps(m, n, MapKind::All) {
                        let kd = k_data(&xi_profile(&xi, k).unwrap()).unwrap();
                        assert_eq!(kd.k0.compose(&kd.lambda).unwrap(), xi);
                    }
                }
            }
        }
    }

    #[test]
    fn arrow_identity_is_identity() {
        let xi = sm(&[0, 1, 2], 3);
        let p = xi_profile(&xi, 1).unwrap();
        let k1 = k_on_arrow(&SimplexMap::identity(2), &p, &p).unwrap();
        assert!(k1.is_identity());
    }

    #[test]
    fn arrow_functor_laws_small() {
        for n in 1..=2u8 {
            for k in 0..=n {
                for m in 0..=2u8 {
                    for xi in enumerate_maps(m, n, MapKind::All) {
                        let pd = xi_profile(&xi, k).unwrap();
                        for m1 in 0..=2u8 {
                            for phi in enumerate_maps(m1, m, MapKind::All) {
                                let pm = xi_profile(&xi.compose(&phi).unwrap(), k).unwrap();
                                let k_phi = k_on_arrow(&phi, &pm, &pd).unwrap();
                                for m2 in 0..=2u8 {
                                    for psi in enumerate_maps(m2, m1, MapKind::All) {
                                        let ps = xi_profile(
                                            &xi.compose(&phi).unwrap().compose(&psi).unwrap(),
                                            k,
                                        )
                                        .unwrap();
                                        let k_psi = k_on_arrow(&psi, &ps, &pm).unwrap();
                                        let k_comp =
                                            k_on_arrow(&phi.compose(&psi).unwrap(), &ps, &pd)
                                                .unwrap();
                                        assert_eq!(
                                            k_comp,
                                            k_phi.compose(&k_psi).unwrap(),
                                            "composition law at xi={xi:?} phi={phi:?} psi={psi:?}"
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn arrow_functor_laws_collapse_range() {
        // Dimension three reaches the first profiles with two plural
        // fibers away from the horn index, where collapses cross tuples
        // and the block is lowered. Lowered blocks cannot satisfy the
        // composition law against arbitrary injections (an injection can
        // single out any tuple of the middle profile, which would force
        // the unlowered values back); the laws that the level extraction
        // rests on are narrower and hold exactly: identities are sent to
        // identities, injective arrows compose exactly, and every
        // elementary collapse retracts its coface.
        for k in 0..=2u8 {
            for m in 0..=3u8 {
                for xi in enumerate_maps(m, 2, MapKind::All) {
                    let pd = xi_profile(&xi, k).unwrap();
                    let ident = k_on_arrow(&SimplexMap::identity(m), &pd, &pd).unwrap();
                    assert!(ident.is_identity(), "identity law at xi={xi:?} k={k}");
                    for m1 in 0..=m {
                        for phi in enumerate_maps(m1, m, MapKind::Mono) {
                            let pm = xi_profile(&xi.compose(&phi).unwrap(), k).unwrap();
                            let k_phi = k_on_arrow(&phi, &pm, &pd).unwrap();
                            for m2 in 0..=m1 {
                                for psi in enumerate_maps(m2, m1, MapKind::Mono) {
                                    let ps = xi_profile(
                                        &xi.compose(&phi).unwrap().compose(&psi).unwrap(),
                                        k,
                                    )
                                    .unwrap();
                                    let k_psi = k_on_arrow(&psi, &ps, &pm).unwrap();
                                    let k_comp =
                                        k_on_arrow(&phi.compose(&psi).unwrap(), &ps, &pd)
                                            .unwrap();
                                    assert_eq!(
                                        k_comp,
                                        k_phi.compose(&k_psi).unwrap(),
                                        "injective composition at xi={xi:?} phi={phi:?} psi={psi:?} k={k}"
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn elementary_collapse_retracts_its_coface() {
        // The degeneracy probe recovers the coarser element by the
        // matching coface, so K of the collapse composed with K of that
        // coface must be the identity, lowered block or not.
        for n in 1..=3u8 {
            for k in 0..=n {
                for m in 0..=3u8 {
                    for xi in enumerate_maps(m, n, MapKind::All) {
                        let pd = xi_profile(&xi, k).unwrap();
                        for j in 0..=m {
                            let sigma = SimplexMap::sigma(m, j).unwrap();
                            let ps = xi_profile(&xi.compose(&sigma).unwrap(), k).unwrap();
                            let k_sigma = k_on_arrow(&sigma, &ps, &pd).unwrap();
                            let delta = SimplexMap::delta(m + 1, j).unwrap();
                            let k_delta = k_on_arrow(&delta, &pd, &ps).unwrap();
                            assert!(
                                k_sigma.compose(&k_delta).unwrap().is_identity(),
                                "retraction at xi={xi:?} j={j} k={k}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn crossed_collapse_is_lowered() {
        // Collapsing the plural low fiber of (0,0,2,2) at horn index 1
        // pushes the four tuples to ranks 0,1,0,1; the block is lowered
        // to 0,0,0,1, reading positions 1,1,1,2 of the target. The
        // symmetric collapse of the high fiber pushes in order and keeps
        // the exact values. Both collapses retract their cofaces.
        let dst_lo = xi_profile(&sm(&[0, 2, 2], 3), 1).unwrap();
        let src = xi_profile(&sm(&[0, 0, 2, 2], 3), 1).unwrap();
        let sigma0 = SimplexMap::sigma(2, 0).unwrap();
        assert_eq!(dst_lo.xi.compose(&sigma0).unwrap(), src.xi);
        let k_lo = k_on_arrow(&sigma0, &src, &dst_lo).unwrap();
        assert_eq!(k_lo.values(), &[0, 0, 1, 1, 1, 2, 3, 4]);
        let delta0 = SimplexMap::delta(3, 0).unwrap();
        let k_delta0 = k_on_arrow(&delta0, &dst_lo, &src).unwrap();
        assert!(k_lo.compose(&k_delta0).unwrap().is_identity());

        let dst_hi = xi_profile(&sm(&[0, 0, 2], 3), 1).unwrap();
        let sigma2 = SimplexMap::sigma(2, 2).unwrap();
        assert_eq!(dst_hi.xi.compose(&sigma2).unwrap(), src.xi);
        let k_hi = k_on_arrow(&sigma2, &src, &dst_hi).unwrap();
        assert_eq!(k_hi.values(), &[0, 1, 2, 2, 3, 3, 4, 4]);
        let delta2 = SimplexMap::delta(3, 2).unwrap();
        let k_delta2 = k_on_arrow(&delta2, &dst_hi, &src).unwrap();
        assert!(k_hi.compose(&k_delta2).unwrap().is_identity());
    }

    #[test]
    fn arrow_rejects_wrong_base() {
        let p1 = xi_profile(&sm(&[0, 1], 3), 1).unwrap();
        let p2 = xi_profile(&sm(&[2], 3), 1).unwrap();
        let err = k_on_arrow(&sm(&[0], 2), &p2, &p1).unwrap_err();
        assert!(matches!(err, Error::NotOverN(_)));
    }

    #[test]
    fn face_equations_reverify() {
        // A face inclusion arrow: its image is the matching predicate face.
        let xi = sm(&[0, 2], 3);
        let pd = xi_profile(&xi, 1).unwrap();
        let kd = k_data(&pd).unwrap();
        for j in 0..=1u8 {
            let delta = SimplexMap::delta(1, j).unwrap();
            let ps = xi_profile(&xi.compose(&delta).unwrap(), 1).unwrap();
            let k1 = k_on_arrow(&delta, &ps, &pd).unwrap();
            assert_eq!(k1.values(), v_face(&kd, j).as_slice());
        }
    }

    #[test]
    fn union_whole_maps_to_whole() {
        let p = xi_profile(&sm(&[0, 1, 2], 3), 1).unwrap();
        let w = k_union_faces(&FaceSubobject::whole(2), &p).unwrap();
        assert!(w.is_whole());
    }

    #[test]
    fn union_horn_matches_direct_image() {
        for k in 0..=2u8 {
            for xi in enumerate_maps(2, 2, MapKind::All) {
                let p = xi_profile(&xi, k).unwrap();
                let kd = k_data(&p).unwrap();
                for l in 0..=2u8 {
                    let horn_faces: Vec<Vec<u8>> = (0..=2u8)
                        .filter(|&j| j != l)
                        .map(|j| minus(&[0, 1, 2], j))
                        .collect();
                    let sub = FaceSubobject::union_of(2, &horn_faces);
                    let image = k_union_faces(&sub, &p).unwrap();
                    let direct: Vec<Vec<u8>> = (0..=2u8)
                        .filter(|&j| j != l)
                        .map(|j| v_face(&kd, j))
                        .collect();
                    assert_eq!(image, FaceSubobject::union_of(kd.ambient(), &direct));
                }
            }
        }
    }

    #[test]
    fn union_preserves_intersections_small() {
        for n in 1..=2u8 {
            for k in 0..=n {
                for m in 0..=2u8 {
                    for xi in enumerate_maps(m, n, MapKind::All) {
                        let p = xi_profile(&xi, k).unwrap();
                        let subsets: Vec<Vec<u8>> = simplex_subsets(m);
                        for sa in &subsets {
                            for sb in &subsets {
                                let fa = FaceSubobject::face(m, sa).unwrap();
                                let fb = FaceSubobject::face(m, sb).unwrap();
                                let lhs = k_union_faces(
                                    &combine_faces(FaceOp::Intersect, &fa, &fb).unwrap(),
                                    &p,
                                )
                                .unwrap();
                                let rhs = combine_faces(
                                    FaceOp::Intersect,
                                    &k_union_faces(&fa, &p).unwrap(),
                                    &k_union_faces(&fb, &p).unwrap(),
                                )
                                .unwrap();
                                assert_eq!(lhs, rhs, "intersection at xi={xi:?} k={k}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn union_rejects_ambient_mismatch() {
        let p = xi_profile(&sm(&[0, 1], 2), 1).unwrap();
        let err = k_union_faces(&FaceSubobject::whole(3), &p).unwrap_err();
        assert!(matches!(err, Error::AmbientMismatch { got: 3, expected: 1 }));
    }

    #[test]
    fn completion_two_edges() {
        let prog = face_completion(2, &[vec![0, 1], vec![0, 2]], 0).unwrap();
        assert_eq!(
            prog.steps,
            vec![FillInstruction {
                face: vec![0, 1, 2],
                center: 0
            }]
        );
    }

    #[test]
    fn completion_from_vertex() {
        let prog = face_completion(1, &[vec![0]], 0).unwrap();
        assert_eq!(
            prog.steps,
            vec![FillInstruction {
                face: vec![0, 1],
                center: 0
            }]
        );
    }

    #[test]
    fn completion_of_whole_is_empty() {
        let prog = face_completion(2, &[vec![0, 1, 2]], 1).unwrap();
        assert!(prog.steps.is_empty());
    }

    #[test]
    fn completion_rejects_unshared_vertex() {
        let err = face_completion(2, &[vec![0, 1], vec![1, 2]], 0).unwrap_err();
        assert!(matches!(err, Error::VertexNotShared { vertex: 0 }));
    }

    #[test]
    fn decompose_rejects_bad_horn() {
        let err = anodyne_decompose_kh(&sm(&[0, 1], 2), 3, 1).unwrap_err();
        assert!(matches!(err, Error::BadIndex { index: 3, limit: 1 }));
    }

    #[test]
    fn decompose_at_horn_fiber_has_no_second_phase() {
        // xi(l) = k: the waypoint equals the end.
        let xi = sm(&[1, 1], 3);
        let dec = anodyne_decompose_kh(&xi, 0, 1).unwrap();
        assert_eq!(dec.mid, dec.end);
        assert!(dec.stages.iter().all(|s| s.label.starts_with("side")));
    }

    #[test]
    fn decompose_worked_example() {
        let xi = sm(&[0, 2], 3);
        let dec = anodyne_decompose_kh(&xi, 0, 1).unwrap();
        assert_eq!(dec.stages.len(), 2);
        assert_eq!(dec.stages[0].shared, 0);
        assert_eq!(dec.stages[0].face, vec![0, 1]);
        assert_eq!(dec.stages[1].shared, 1);
        assert_eq!(dec.stages[1].face, vec![1, 2]);
        assert_eq!(dec.start.faces(), &[vec![0]]);
        assert_eq!(dec.end.faces(), &[vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn decompose_norm_zero_is_classical_fill() {
        // Constant map with an empty fiber away from k: one stage whose
        // program is the single classical horn fill of the whole face.
        let xi = sm(&[0, 0], 3);
        let dec = anodyne_decompose_kh(&xi, 0, 1).unwrap();
        assert_eq!(dec.stages.len(), 1);
        let prog = &dec.stages[0].program;
        assert_eq!(prog.steps.len(), 1);
        assert_eq!(prog.steps[0].face, vec![0, 1]);
        assert_eq!(prog.steps[0].center, 0);
    }

    /// Replays a decomposition for every admissible top morphism and
    /// compares solvability and solutions against brute-force search.
    fn replay_against_oracle(xi: &SimplexMap, l: u8, k: u8, f: &SMorphism, cert: &FillerCertificate) {
        let n = xi.cod_dim();
        let dec = anodyne_decompose_kh(xi, l, k).unwrap();
        let ht = HornTable::new(n, k).unwrap();
        let ru = realize_union(&dec.end);
        let structure = make_morphism(
            &ru.object,
            &ht.object,
            ru.cell_monos
                .iter()
                .map(|mono| ht.element_of(&dec.kdata.k0.compose(mono).unwrap()).unwrap())
                .collect(),
        )
        .unwrap();
        let start_ru = realize_union(&dec.start);
        let start_cells: Vec<usize> = start_ru
            .cell_subsets
            .iter()
            .map(|s| ru.subset_to_cell[s])
            .collect();
        let inclusion = make_morphism(
            &start_ru.object,
            &ru.object,
            start_cells
                .iter()
                .map(|&c| Element::nondegenerate(c, ru.object.dim_of(c)))
                .collect(),
        )
        .unwrap();
        let bottom = structure.clone();
        let mut checked = 0;
        for top in enumerate_morphisms(&start_ru.object, &f.source) {
            let over = compose_morphisms(f, &top).unwrap();
            let restricted = compose_morphisms(&bottom, &inclusion).unwrap();
            if over != restricted {
                continue;
            }
            let square = LiftSquare {
                i: &inclusion,
                p: f,
                top: &top,
                bottom: &bottom,
            };
            let brute = search_lift(&square);
            assert!(brute.is_some(), "oracle finds a lift");
            let mut assign: Vec<Option<Element>> = vec![None; ru.object.n_cells()];
            for (sc, &c) in start_cells.iter().enumerate() {
                assign[c] = Some(top.map[sc].clone());
            }
            replay_decomposition(&dec, &ru, &mut assign, &structure, cert).unwrap();
            let lifted = make_morphism(
                &ru.object,
                &f.source,
                assign.into_iter().map(Option::unwrap).collect(),
            )
            .unwrap();
            assert!(square.is_solution(&lifted), "replayed lift solves the square");
            checked += 1;
        }
        assert!(checked > 0, "some admissible top exists");
    }

    #[test]
    fn decompose_replay_matches_oracle() {
        let (hobj, _) = horn(2, 1).unwrap();
        let prod = product(&hobj, &discrete(2));
        let f = prod.proj_x.clone();
        let cert = kan_certificate(&f, 1).certified();
        replay_against_oracle(&sm(&[0, 2], 3), 0, 1, &f, &cert);
        replay_against_oracle(&sm(&[0, 0], 3), 0, 1, &f, &cert);
        replay_against_oracle(&sm(&[0, 2], 3), 1, 1, &f, &cert);
    }

    fn id_descent(n: u8, k: u8, bound: u8) -> DescentResult {
        let (hobj, _) = horn(n, k).unwrap();
        let f = identity_morphism(&hobj);
        let cert = kan_certificate(&f, 1).certified();
        descent_d(&f, &cert, n, k, bound).unwrap()
    }

    #[test]
    fn descent_of_identity_is_the_simplex() {
        let dr = id_descent(2, 1, 2);
        for d in 0..=2u8 {
            for xi in enumerate_maps(d, 2, MapKind::All) {
                assert_eq!(dr.fiber_size(&xi), 1);
            }
        }
        assert!(find_isomorphism(&dr.total, &simplex(2)).is_some());
    }

    #[test]
    fn descent_of_projection_is_a_product() {
        let (hobj, _) = horn(2, 1).unwrap();
        let prod = product(&hobj, &discrete(2));
        let f = prod.proj_x.clone();
        let cert = kan_certificate(&f, 1).certified();
        let dr = descent_d(&f, &cert, 2, 1, 2).unwrap();
        for d in 0..=2u8 {
            for xi in enumerate_maps(d, 2, MapKind::All) {
                assert_eq!(dr.fiber_size(&xi), 2);
            }
        }
        let model = product(&simplex(2), &discrete(2));
        assert!(find_isomorphism(&dr.total, &model.object).is_some());
    }

    #[test]
    fn descent_of_codiagonal_is_two_simplices() {
        let (hobj, _) = horn(2, 1).unwrap();
        let cop = coproduct(&hobj, &hobj);
        let f = cop
            .copair(&identity_morphism(&hobj), &identity_morphism(&hobj))
            .unwrap();
        let cert = kan_certificate(&f, 1).certified();
        let dr = descent_d(&f, &cert, 2, 1, 2).unwrap();
        let model = coproduct(&simplex(2), &simplex(2));
        assert!(find_isomorphism(&dr.total, &model.object).is_some());
    }

    #[test]
    fn descent_level_above_base_dimension() {
        // One level above the base dimension, the extraction meets the
        // collapses whose tuple blocks cross; every level-three fiber
        // element must be recognized as degenerate, so the total spaces
        // keep the shape computed at the base dimension.
        for k in 0..=2u8 {
            let dr = id_descent(2, k, 3);
            for xi in enumerate_maps(3, 2, MapKind::All) {
                assert_eq!(dr.fiber_size(&xi), 1);
            }
            assert!(find_isomorphism(&dr.total, &simplex(2)).is_some());
        }
        let (hobj, _) = horn(2, 1).unwrap();
        let prod = product(&hobj, &discrete(2));
        let f = prod.proj_x.clone();
        let cert = kan_certificate(&f, 1).certified();
        let dr = descent_d(&f, &cert, 2, 1, 3).unwrap();
        for xi in enumerate_maps(3, 2, MapKind::All) {
            assert_eq!(dr.fiber_size(&xi), 2);
        }
        let model = product(&simplex(2), &discrete(2));
        assert!(find_isomorphism(&dr.total, &model.object).is_some());
        let cop = coproduct(&hobj, &hobj);
        let g = cop
            .copair(&identity_morphism(&hobj), &identity_morphism(&hobj))
            .unwrap();
        let gcert = kan_certificate(&g, 1).certified();
        let dg = descent_d(&g, &gcert, 2, 1, 3).unwrap();
        let twice = coproduct(&simplex(2), &simplex(2));
        assert!(find_isomorphism(&dg.total, &twice.object).is_some());
    }

    #[test]
    fn descent_rejects_wrong_target() {
        let f = to_point(&discrete(1));
        let cert = kan_certificate(&f, 1).certified();
        let err = descent_d(&f, &cert, 2, 1, 2).unwrap_err();
        assert!(matches!(err, Error::NotOverHorn(_)));
    }

    #[test]
    fn pullback_check_identity_and_projection() {
        let dr = id_descent(2, 1, 2);
        assert!(descent_pullback_check(&dr).unwrap().is_iso());
        let (hobj, _) = horn(2, 1).unwrap();
        let prod = product(&hobj, &discrete(2));
        let f = prod.proj_x.clone();
        let cert = kan_certificate(&f, 1).certified();
        let dr = descent_d(&f, &cert, 2, 1, 2).unwrap();
        assert!(descent_pullback_check(&dr).unwrap().is_iso());
    }

    #[test]
    fn pullback_check_detects_dropped_fiber() {
        let (hobj, _) = horn(2, 1).unwrap();
        let prod = product(&hobj, &discrete(2));
        let f = prod.proj_x.clone();
        let cert = kan_certificate(&f, 1).certified();
        let xi = sm(&[0, 0, 0], 3);
        let dr = descent_d_with_dropped_hom(&f, &cert, 2, 1, 2, &xi, 0).unwrap();
        match descent_pullback_check(&dr).unwrap() {
            PullbackCheck::Mismatch { dim, .. } => assert_eq!(dim, 2),
            PullbackCheck::Iso { .. } => panic!("corruption went unnoticed"),
        }
    }

    /// The unique fiber element over each map of an identity descent.
    fn id_element(dr: &DescentResult, phi: &SimplexMap) -> Element {
        dr.element_over(phi, 0).unwrap()
    }

    #[test]
    fn horn_lift_identity_case() {
        let dr = id_descent(2, 1, 2);
        for l in 0..=2u8 {
            let (hobj, hincl) = horn(2, l).unwrap();
            let xi = SimplexMap::identity(2);
            let b = crate::sset::simplex_morphism(&xi);
            let amap: Vec<Element> = (0..hobj.n_cells())
                .map(|c| {
                    let e = hincl.map[c].clone();
                    let zeta = element_to_simplex_map(2, &e);
                    id_element(&dr, &zeta)
                })
                .collect();
            let a = make_morphism(&hobj, &dr.total, amap).unwrap();
            let filler = descent_horn_lift(&dr, 2, l, &a, &b).unwrap();
            assert_eq!(
                compose_morphisms(&dr.df, &filler).unwrap(),
                b,
                "filler lies over the bottom"
            );
        }
    }

    /// Builds the constant-fiber top morphism for a projection descent.
    fn projection_top(
        dr: &DescentResult,
        prod: &crate::constructions::ProductResult,
        m: u8,
        l: u8,
        xi: &SimplexMap,
        point: usize,
    ) -> (SMorphism, SMorphism) {
        let (hobj, hincl) = horn(m, l).unwrap();
        let b = crate::sset::simplex_morphism(xi);
        let amap: Vec<Element> = (0..hobj.n_cells())
            .map(|c| {
                let e = hincl.map[c].clone();
                let d = e.dim();
                let zeta = xi.compose(&element_to_simplex_map(m, &e)).unwrap();
                let entry = dr.ctx.entry(&zeta).unwrap();
                let vals: Vec<Element> = entry
                    .ru
                    .cell_monos
                    .iter()
                    .enumerate()
                    .map(|(cc, mono)| {
                        prod.element_pair(
                            &entry.structure.map[cc],
                            &Element {
                                cell: point,
                                epi: SimplexMap::total_epi(mono.dom_dim()),
                            },
                        )
                    })
                    .collect();
                let t = (zeta.clone(), vals);
                assert!(dr.skel.level(d).binary_search(&t).is_ok(), "top fiber exists");
                dr.skel.form_of(d, &t)
            })
            .collect();
        let a = make_morphism(&hobj, &dr.total, amap).unwrap();
        (a, b)
    }

    #[test]
    fn horn_lift_projection_case() {
        let (hobj, _) = horn(2, 1).unwrap();
        let prod = product(&hobj, &discrete(2));
        let f = prod.proj_x.clone();
        let cert = kan_certificate(&f, 1).certified();
        let dr = descent_d(&f, &cert, 2, 1, 2).unwrap();
        for l in 0..=2u8 {
            for point in 0..2usize {
                let xi = SimplexMap::identity(2);
                let (a, b) = projection_top(&dr, &prod, 2, l, &xi, point);
                let filler = descent_horn_lift(&dr, 2, l, &a, &b).unwrap();
                assert_eq!(compose_morphisms(&dr.df, &filler).unwrap(), b);
            }
        }
        // A non-surjective bottom map exercises degenerate facets.
        let xi = sm(&[0, 0, 1], 3);
        let (a, b) = projection_top(&dr, &prod, 2, 0, &xi, 1);
        descent_horn_lift(&dr, 2, 0, &a, &b).unwrap();
    }

    #[test]
    fn horn_lift_base_dimension_one() {
        let (hobj, _) = horn(1, 0).unwrap();
        let prod = product(&hobj, &discrete(2));
        let f = prod.proj_x.clone();
        let cert = kan_certificate(&f, 1).certified();
        let dr = descent_d(&f, &cert, 1, 0, 2).unwrap();
        for m in 1..=2u8 {
            for l in 0..=m {
                for xi in enumerate_maps(m, 1, MapKind::All) {
                    for point in 0..2usize {
                        let (a, b) = projection_top(&dr, &prod, m, l, &xi, point);
                        let filler = descent_horn_lift(&dr, m, l, &a, &b).unwrap();
                        assert_eq!(compose_morphisms(&dr.df, &filler).unwrap(), b);
                    }
                }
            }
        }
    }

    #[test]
    fn horn_lift_rejects_malformed_squares() {
        let dr = id_descent(2, 1, 2);
        let (hobj, hincl) = horn(2, 0).unwrap();
        let xi = SimplexMap::identity(2);
        let b = crate::sset::simplex_morphism(&xi);
        let amap: Vec<Element> = (0..hobj.n_cells())
            .map(|c| {
                let zeta = element_to_simplex_map(2, &hincl.map[c]);
                id_element(&dr, &zeta)
            })
            .collect();
        let a = make_morphism(&hobj, &dr.total, amap).unwrap();
        // Wrong horn index against the provided top map.
        let err = descent_horn_lift(&dr, 2, 1, &a, &b).unwrap_err();
        assert!(matches!(err, Error::BadSquare(_)));
    }

    #[test]
    fn completion_extends_through_certificate() {
        // Two edges through vertex 0 extend to the whole triangle over
        // the point against a discrete fibration.
        let x = discrete(2);
        let f = to_point(&x);
        let cert = crate::lifting::discrete_certificate(&x, 2);
        let prog = face_completion(2, &[vec![0, 1], vec![0, 2]], 0).unwrap();
        let start_ru = realize_union(&prog.start);
        let pt = f.target.clone();
        let over = make_morphism(
            &simplex(2),
            &pt,
            (0..simplex(2).n_cells())
                .map(|c| Element {
                    cell: 0,
                    epi: SimplexMap::total_epi(simplex(2).dim_of(c)),
                })
                .collect(),
        )
        .unwrap();
        let full = realize_union(&FaceSubobject::whole(2));
        for top in enumerate_morphisms(&start_ru.object, &x) {
            let extended = complete_faces(&prog, &top, &over, &cert).unwrap();
            for (sc, val) in top.map.iter().enumerate() {
                let w = &start_ru.cell_subsets[sc];
                assert_eq!(&extended.map[full.subset_to_cell[w]], val);
            }
        }
    }
}
