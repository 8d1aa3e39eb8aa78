//! Filler certificates and the lifting engine: deterministic operator
//! tables witnessing fibration/contractibility at a truncation bound, the
//! skeletal cell-by-cell lifter, prism transports along homotopies, the
//! triple lifting property, cylinder homotopies, and extraction of
//! weak-inverse data.
//!
//! A certificate is an eager table of least fillers for every commuting
//! square at dimensions up to its bound, plus a rule for re-deriving
//! entries; squares posed above the bound are solved per-square by the
//! rule, and failures there surface as errors rather than silent guesses.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::constructions::{product, product_of_morphisms, pushout, ProductResult};
use crate::error::{Error, Result};
use crate::simplex::SimplexMap;
use crate::sset::{
    compose_morphisms, cycle, enumerate_morphisms, horn, identity_morphism, is_cofibration,
    make_morphism, simplex, simplex_morphism, subset_label, to_point, CofibrationCheck, Element,
    FiniteSSet, SMorphism,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FillFamily {
    Horn,
    Cycle,
}

/// Canonical name of a lifting square against a certified morphism: the
/// family member (dimension and horn index), the facet images of the top
/// map (naturality determines the rest), and the bottom map as the
/// element of the target it names. For cycles `k` is always 0.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SquareKey {
    pub family: FillFamily,
    pub dim: u8,
    pub k: u8,
    pub top: Vec<Element>,
    pub bottom: Element,
}

impl SquareKey {
    pub fn horn(dim: u8, k: u8, top: Vec<Element>, bottom: Element) -> Self {
        SquareKey {
            family: FillFamily::Horn,
            dim,
            k,
            top,
            bottom,
        }
    }

    pub fn cycle(dim: u8, top: Vec<Element>, bottom: Element) -> Self {
        SquareKey {
            family: FillFamily::Cycle,
            dim,
            k: 0,
            top,
            bottom,
        }
    }

    /// Facet indices prescribed by the top map, in ascending order.
    pub fn facet_indices(&self) -> Vec<u8> {
        if self.dim == 0 {
            return vec![];
        }
        match self.family {
            FillFamily::Cycle => (0..=self.dim).collect(),
            FillFamily::Horn => (0..=self.dim).filter(|&j| j != self.k).collect(),
        }
    }
}

/// An unsolvable square, reported as the first failure in the canonical
/// enumeration order (dimension, then horn index, then top, then bottom).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareWitness {
    pub key: SquareKey,
}

#[derive(Clone)]
pub enum FillerRule {
    /// Least-element search through the source level.
    Search,
    /// A closed-form filler (discrete constants, factorization formulas,
    /// certificate composition, ...).
    Formula(Arc<dyn Fn(&SquareKey) -> Result<Element>>),
}

impl fmt::Debug for FillerRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FillerRule::Search => write!(f, "Search"),
            FillerRule::Formula(_) => write!(f, "Formula"),
        }
    }
}

/// Evidence that a morphism lifts against every member of a family up to
/// a bound: a total table of deterministic fillers, one per commuting
/// square. The rule re-derives entries and extends the operator to
/// squares above the bound where it can; `fill` is the only reader.
#[derive(Clone, Debug)]
pub struct FillerCertificate {
    pub morphism: SMorphism,
    pub family: FillFamily,
    pub bound: u8,
    pub table: BTreeMap<SquareKey, Element>,
    pub rule: FillerRule,
}

#[derive(Debug)]
pub enum CertificateResult {
    Certified(FillerCertificate),
    Failed(SquareWitness),
}

impl CertificateResult {
    pub fn certified(self) -> FillerCertificate {
        match self {
            CertificateResult::Certified(c) => c,
            CertificateResult::Failed(w) => {
                panic!("expected a certificate, found counterexample {w:?}")
            }
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, CertificateResult::Certified(_))
    }
}

impl FillerCertificate {
    /// The filler for a posed square. Table hit below the bound; above
    /// it, the rule solves the single square on demand.
    pub fn fill(&self, key: &SquareKey) -> Result<Element> {
        debug_assert_eq!(
            key.top.len(),
            key.facet_indices().len(),
            "facet tuple length"
        );
        if let Some(e) = self.table.get(key) {
            return Ok(e.clone());
        }
        if key.dim <= self.bound && key.family == self.family {
            // The table is total over commuting squares at the bound.
            return Err(Error::IncompatibleSquare);
        }
        if key.family != self.family {
            return Err(Error::BadEvidence(format!(
                "certificate family {:?} cannot fill {:?} squares",
                self.family, key.family
            )));
        }
        match &self.rule {
            FillerRule::Search => search_square(&self.morphism, key)
                .ok_or(Error::NoFiller),
            FillerRule::Formula(f) => {
                let candidate = f(key)?;
                if solves(&self.morphism, key, &candidate) {
                    Ok(candidate)
                } else {
                    Err(Error::EquationsFail(format!(
                        "rule output does not solve the posed square at dim {}",
                        key.dim
                    )))
                }
            }
        }
    }

    /// Re-checks that every stored entry solves its square.
    pub fn verify_table(&self) -> Result<()> {
        for (key, x) in &self.table {
            if !solves(&self.morphism, key, x) {
                return Err(Error::EquationsFail(format!(
                    "table entry fails at dim {} k {}",
                    key.dim, key.k
                )));
            }
        }
        Ok(())
    }
}

/// Whether x (an element of the source at level key.dim) solves the
/// square: prescribed facets match and the image is the bottom.
fn solves(p: &SMorphism, key: &SquareKey, x: &Element) -> bool {
    if x.dim() != key.dim {
        return false;
    }
    let src = &p.source;
    for (slot, j) in key.facet_indices().into_iter().enumerate() {
        if src.eval(x, &SimplexMap::delta(key.dim, j).unwrap()) != key.top[slot] {
            return false;
        }
    }
    p.apply(x) == key.bottom
}

/// Least element solving the square, by direct scan of the level.
fn search_square(p: &SMorphism, key: &SquareKey) -> Option<Element> {
    p.source
        .elements_at(key.dim)
        .into_iter()
        .find(|x| solves(p, key, x))
}

/// The family member for a key: the subobject of Δ[n] and, for each
/// prescribed facet index, its cell in the member.
fn member_object(family: FillFamily, dim: u8, k: u8) -> (Arc<FiniteSSet>, SMorphism) {
    match family {
        FillFamily::Cycle => cycle(dim),
        FillFamily::Horn => horn(dim, k).expect("valid horn index"),
    }
}

fn facet_cells_of_member(member: &FiniteSSet, dim: u8, facets: &[u8]) -> Vec<usize> {
    facets
        .iter()
        .map(|&j| {
            let subset: Vec<u8> = (0..=dim).filter(|&v| v != j).collect();
            member
                .cell_by_label(&subset_label(&subset))
                .expect("facet cell present in the member")
        })
        .collect()
}

/// Enumerates every commuting square of the family at dimensions up to
/// the bound, in canonical order, and calls the solver on each. The
/// first unsolvable square aborts the build.
fn build_certificate(
    p: &SMorphism,
    family: FillFamily,
    bound: u8,
    rule: FillerRule,
) -> Result<CertificateResult> {
    let x = &p.source;
    let y = &p.target;
    let mut table = BTreeMap::new();
    let dims = match family {
        FillFamily::Cycle => 0..=bound,
        FillFamily::Horn => 1..=bound,
    };
    for n in dims {
        // Index the source level by (k, prescribed facets, image) and the
        // target level by (k, prescribed facets): solving a square and
        // enumerating its compatible bottoms are both lookups.
        let mut solver: HashMap<(u8, Vec<Element>, Element), Vec<Element>> = HashMap::new();
        let mut bottoms: HashMap<(u8, Vec<Element>), Vec<Element>> = HashMap::new();
        let ks: Vec<u8> = match family {
            FillFamily::Cycle => vec![0],
            FillFamily::Horn => (0..=n).collect(),
        };
        for xe in x.elements_at(n) {
            let faces: Vec<Element> = if n == 0 {
                vec![]
            } else {
                (0..=n)
                    .map(|j| x.eval(&xe, &SimplexMap::delta(n, j).unwrap()))
                    .collect()
            };
            let image = p.apply(&xe);
            for &k in &ks {
                let tuple: Vec<Element> = match family {
                    FillFamily::Cycle => faces.clone(),
                    FillFamily::Horn => faces
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j as u8 != k)
                        .map(|(_, e)| e.clone())
                        .collect(),
                };
                solver
                    .entry((k, tuple, image.clone()))
                    .or_default()
                    .push(xe.clone());
            }
        }
        for ye in y.elements_at(n) {
            let faces: Vec<Element> = if n == 0 {
                vec![]
            } else {
                (0..=n)
                    .map(|j| y.eval(&ye, &SimplexMap::delta(n, j).unwrap()))
                    .collect()
            };
            for &k in &ks {
                let tuple: Vec<Element> = match family {
                    FillFamily::Cycle => faces.clone(),
                    FillFamily::Horn => faces
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j as u8 != k)
                        .map(|(_, e)| e.clone())
                        .collect(),
                };
                bottoms.entry((k, tuple)).or_default().push(ye.clone());
            }
        }
        for &k in &ks {
            let (member, _) = member_object(family, n, k);
            let facets: Vec<u8> = match family {
                FillFamily::Cycle => (0..=n).collect(),
                FillFamily::Horn => (0..=n).filter(|&j| j != k).collect(),
            };
            let facet_cells = if n == 0 {
                vec![]
            } else {
                facet_cells_of_member(&member, n, &facets)
            };
            for a in enumerate_morphisms(&member, x) {
                let tuple: Vec<Element> =
                    facet_cells.iter().map(|&c| a.map[c].clone()).collect();
                let image_tuple: Vec<Element> =
                    tuple.iter().map(|e| p.apply(e)).collect();
                let empty = vec![];
                let compatible = bottoms
                    .get(&(k, image_tuple))
                    .unwrap_or(&empty);
                for b in compatible {
                    let key = SquareKey {
                        family,
                        dim: n,
                        k,
                        top: tuple.clone(),
                        bottom: b.clone(),
                    };
                    let entry = match &rule {
                        FillerRule::Search => solver
                            .get(&(k, key.top.clone(), b.clone()))
                            .and_then(|c| c.first().cloned()),
                        FillerRule::Formula(f) => {
                            let candidate = f(&key)?;
                            if !solves(p, &key, &candidate) {
                                return Err(Error::EquationsFail(format!(
                                    "certificate rule fails on a dim-{n} square"
                                )));
                            }
                            Some(candidate)
                        }
                    };
                    match entry {
                        Some(e) => {
                            table.insert(key, e);
                        }
                        None => {
                            return Ok(CertificateResult::Failed(SquareWitness { key }));
                        }
                    }
                }
            }
        }
    }
    Ok(CertificateResult::Certified(FillerCertificate {
        morphism: p.clone(),
        family,
        bound,
        table,
        rule,
    }))
}

/// Decides the horn lifting property up to the bound: a fibration
/// certificate or the first unsolvable horn square.
pub fn kan_certificate(p: &SMorphism, bound: u8) -> CertificateResult {
    build_certificate(p, FillFamily::Horn, bound, FillerRule::Search)
        .expect("search rule cannot fail structurally")
}

/// Decides the cycle lifting property up to the bound: a contractibility
/// certificate or the first unsolvable cycle square.
pub fn contractible_certificate(p: &SMorphism, bound: u8) -> CertificateResult {
    build_certificate(p, FillFamily::Cycle, bound, FillerRule::Search)
        .expect("search rule cannot fail structurally")
}

/// Builds a certificate whose every entry comes from the given formula
/// (still verified square-by-square).
pub fn certificate_from_rule(
    p: &SMorphism,
    family: FillFamily,
    bound: u8,
    rule: FillerRule,
) -> Result<FillerCertificate> {
    match build_certificate(p, family, bound, rule)? {
        CertificateResult::Certified(c) => Ok(c),
        CertificateResult::Failed(w) => Err(Error::EquationsFail(format!(
            "rule leaves a square unsolved at dim {}",
            w.key.dim
        ))),
    }
}

/// The canonical fibration certificate of a discrete object over the
/// point: every horn lands on one point, and the filler is the total
/// degeneracy of that point. Valid at every bound by the same rule.
pub fn discrete_certificate(x: &Arc<FiniteSSet>, bound: u8) -> FillerCertificate {
    let p = to_point(x);
    let rule = {
        let x = x.clone();
        FillerRule::Formula(Arc::new(move |key: &SquareKey| {
            let point = match key.top.first() {
                Some(e) => {
                    let v = x.vertex_of(e, 0);
                    v.cell
                }
                None => return Err(Error::NoFiller),
            };
            Ok(Element {
                cell: point,
                epi: SimplexMap::total_epi(key.dim),
            })
        }))
    };
    certificate_from_rule(&p, FillFamily::Horn, bound, rule)
        .expect("discrete objects fill all horns constantly")
}

/// Certificate for g∘f from certificates of the factors: solve against
/// the outer, then lift the result through the inner.
pub fn compose_certificates(
    outer: &Arc<FillerCertificate>,
    inner: &Arc<FillerCertificate>,
) -> Result<FillerCertificate> {
    if outer.family != inner.family {
        return Err(Error::BadEvidence("certificate families differ".into()));
    }
    if inner.morphism.target != outer.morphism.source {
        return Err(Error::BadEvidence(
            "certificates do not compose: endpoints differ".into(),
        ));
    }
    let composite = compose_morphisms(&outer.morphism, &inner.morphism)?;
    let bound = outer.bound.min(inner.bound);
    let rule = {
        let outer = outer.clone();
        let inner = inner.clone();
        FillerRule::Formula(Arc::new(move |key: &SquareKey| {
            let mid_top: Vec<Element> =
                key.top.iter().map(|e| inner.morphism.apply(e)).collect();
            let mid = outer.fill(&SquareKey {
                family: key.family,
                dim: key.dim,
                k: key.k,
                top: mid_top,
                bottom: key.bottom.clone(),
            })?;
            inner.fill(&SquareKey {
                family: key.family,
                dim: key.dim,
                k: key.k,
                top: key.top.clone(),
                bottom: mid,
            })
        }))
    };
    certificate_from_rule(&composite, outer.family, bound, rule)
}

/// A horn certificate derived from a cycle certificate: complete the
/// missing facet by a cycle fill one dimension down, then fill the full
/// cycle. This is the constructive content of "contractible morphisms
/// are fibrations".
pub fn derive_horn_from_cycle(cy: &Arc<FillerCertificate>) -> Result<FillerCertificate> {
    if cy.family != FillFamily::Cycle {
        return Err(Error::BadEvidence("expected a cycle certificate".into()));
    }
    let p = cy.morphism.clone();
    let rule = {
        let cy = cy.clone();
        let src = p.source.clone();
        let tgt = p.target.clone();
        FillerRule::Formula(Arc::new(move |key: &SquareKey| {
            let n = key.dim;
            let k = key.k;
            // Boundary of the missing facet, from the simplicial
            // identities against the prescribed facets.
            let mut sub_top = Vec::new();
            if n >= 2 {
                for j in 0..n {
                    let (slot, via) = if j < k {
                        (j, k - 1)
                    } else {
                        (j + 1, k)
                    };
                    let slot_pos = key
                        .facet_indices()
                        .iter()
                        .position(|&f| f == slot)
                        .unwrap();
                    sub_top.push(src.eval(
                        &key.top[slot_pos],
                        &SimplexMap::delta(n - 1, via).unwrap(),
                    ));
                }
            }
            let sub_bottom = tgt.eval(&key.bottom, &SimplexMap::delta(n, k).unwrap());
            let facet_k = cy.fill(&SquareKey::cycle(n - 1, sub_top, sub_bottom))?;
            let mut full = Vec::with_capacity(n as usize + 1);
            let mut slot = 0;
            for j in 0..=n {
                if j == k {
                    full.push(facet_k.clone());
                } else {
                    full.push(key.top[slot].clone());
                    slot += 1;
                }
            }
            cy.fill(&SquareKey::cycle(n, full, key.bottom.clone()))
        }))
    };
    certificate_from_rule(&p, FillFamily::Horn, cy.bound, rule)
}

/// The complement of a cofibration listed by dimension, each cell with
/// its boundary sphere (its facet tuple in the target).
#[derive(Debug, Clone)]
pub struct SkeletalStage {
    pub dim: u8,
    pub cells: Vec<usize>,
    pub boundaries: Vec<Vec<Element>>,
}

#[derive(Debug, Clone)]
pub struct SkeletalDecomposition {
    pub stages: Vec<SkeletalStage>,
}

pub fn skeletal_decompose(i: &SMorphism) -> Result<SkeletalDecomposition> {
    let complement = match is_cofibration(i) {
        CofibrationCheck::Yes { complement } => complement,
        CofibrationCheck::No { first, second } => {
            return Err(Error::NotCofibration(format!(
                "images of {first:?} and {second:?} collide"
            )));
        }
    };
    let tgt = &i.target;
    let mut stages: Vec<SkeletalStage> = Vec::new();
    let mut cells = complement;
    cells.sort_by_key(|&c| (tgt.dim_of(c), c));
    for c in cells {
        let d = tgt.dim_of(c);
        let boundary = tgt.faces_of(c).to_vec();
        match stages.last_mut() {
            Some(stage) if stage.dim == d => {
                stage.cells.push(c);
                stage.boundaries.push(boundary);
            }
            _ => stages.push(SkeletalStage {
                dim: d,
                cells: vec![c],
                boundaries: vec![boundary],
            }),
        }
    }
    Ok(SkeletalDecomposition { stages })
}

/// A lifting problem: i: A→B on the left, p: X→Y on the right,
/// top: A→X over bottom: B→Y.
pub struct LiftSquare<'a> {
    pub i: &'a SMorphism,
    pub p: &'a SMorphism,
    pub top: &'a SMorphism,
    pub bottom: &'a SMorphism,
}

impl LiftSquare<'_> {
    pub fn commutes(&self) -> bool {
        self.top.source == self.i.source
            && self.top.target == self.p.source
            && self.bottom.source == self.i.target
            && self.bottom.target == self.p.target
            && compose_morphisms(self.p, self.top).ok()
                == compose_morphisms(self.bottom, self.i).ok()
    }

    pub fn is_solution(&self, d: &SMorphism) -> bool {
        compose_morphisms(d, self.i).map(|c| c == *self.top).unwrap_or(false)
            && compose_morphisms(self.p, d).map(|c| c == *self.bottom).unwrap_or(false)
    }
}

/// Brute-force diagonal: the least morphism B→X making both triangles
/// commute, if any. The oracle for the lifting engine.
pub fn search_lift(square: &LiftSquare) -> Option<SMorphism> {
    enumerate_morphisms(&square.i.target, &square.p.source)
        .into_iter()
        .find(|d| square.is_solution(d))
}

#[derive(Clone)]
pub enum LiftEvidence<'a> {
    /// i a cofibration, p contractibility-certified: fill cell by cell
    /// along the skeletal decomposition.
    CycleCertificate(&'a FillerCertificate),
    /// Weak-inverse data for i plus a horn certificate for p: transport
    /// along the homotopy through a prism fill.
    WeakInverse(&'a WeakInverseData, &'a FillerCertificate),
    /// A section of p and a homotopy id ≃ section∘p over the target,
    /// plus a horn certificate for p.
    SectionHomotopy {
        section: &'a SMorphism,
        homotopy: &'a SMorphism,
        cert: &'a FillerCertificate,
    },
}

/// Solves a lifting square with the given evidence. The diagonal always
/// satisfies both triangle equations on return.
pub fn solve_rlp(square: &LiftSquare, evidence: &LiftEvidence) -> Result<SMorphism> {
    if !square.commutes() {
        return Err(Error::IncompatibleSquare);
    }
    let d = match evidence {
        LiftEvidence::CycleCertificate(cert) => solve_mode_a(square, cert)?,
        LiftEvidence::WeakInverse(data, cert) => solve_mode_b(square, data, cert)?,
        LiftEvidence::SectionHomotopy {
            section,
            homotopy,
            cert,
        } => solve_mode_c(square, section, homotopy, cert)?,
    };
    if !square.is_solution(&d) {
        return Err(Error::EquationsFail(
            "constructed diagonal fails a triangle".into(),
        ));
    }
    Ok(d)
}

/// Mode A: walk the complement cells of i in dimension order; each cell's
/// boundary is already assigned, so its value is a cycle fill.
fn solve_mode_a(square: &LiftSquare, cert: &FillerCertificate) -> Result<SMorphism> {
    if cert.family != FillFamily::Cycle {
        return Err(Error::BadEvidence("mode A needs a cycle certificate".into()));
    }
    if cert.morphism != *square.p {
        return Err(Error::BadEvidence("certificate is for a different morphism".into()));
    }
    let decomposition = skeletal_decompose(square.i)?;
    let b = &square.i.target;
    let x = &square.p.source;
    let mut assign: Vec<Option<Element>> = vec![None; b.n_cells()];
    for (a_cell, image) in square.i.map.iter().enumerate() {
        assign[image.cell] = Some(square.top.map[a_cell].clone());
    }
    for stage in &decomposition.stages {
        for (pos, &cell) in stage.cells.iter().enumerate() {
            let top: Vec<Element> = stage.boundaries[pos]
                .iter()
                .map(|e| {
                    let base = assign[e.cell]
                        .as_ref()
                        .expect("faces assigned before their cofaces");
                    x.eval(base, &e.epi)
                })
                .collect();
            let bottom = square.bottom.map[cell].clone();
            let filler = cert.fill(&SquareKey::cycle(stage.dim, top, bottom))?;
            assign[cell] = Some(filler);
        }
    }
    let map = assign
        .into_iter()
        .map(|e| e.expect("image and complement cover the target"))
        .collect();
    make_morphism(b, x, map)
}

/// Retraction and homotopy exhibiting a cofibration f: X→Y as a strong
/// deformation retract: g∘f = id, h: Δ[1]×Y→Y runs from id (end 0) to
/// f∘g (end 1) and is constant along f.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakInverseData {
    pub cofibration: SMorphism,
    pub retraction: SMorphism,
    pub homotopy: SMorphism,
}

/// The inclusion B → Δ[1]×B at interval end e, against the given prism.
pub fn end_inclusion(prism: &ProductResult, e: u8) -> SMorphism {
    let b = prism.y.clone();
    let const_e = compose_morphisms(
        &simplex_morphism(&SimplexMap::vertex(e, 1)),
        &to_point(&b),
    )
    .expect("point maps compose");
    prism
        .pair(&const_e, &identity_morphism(&b))
        .expect("end inclusion is a pairing")
}

impl WeakInverseData {
    pub fn validate(&self) -> Result<()> {
        let f = &self.cofibration;
        if !is_cofibration(f).is_yes() {
            return Err(Error::BadEvidence("weak inverse of a non-cofibration".into()));
        }
        let gf = compose_morphisms(&self.retraction, f)?;
        if gf != identity_morphism(&f.source) {
            return Err(Error::BadEvidence("retraction fails g∘f = id".into()));
        }
        let prism_y = product(&simplex(1), &f.target);
        if self.homotopy.source != prism_y.object || self.homotopy.target != f.target {
            return Err(Error::BadEvidence("homotopy has wrong endpoints".into()));
        }
        let at0 = compose_morphisms(&self.homotopy, &end_inclusion(&prism_y, 0))?;
        if at0 != identity_morphism(&f.target) {
            return Err(Error::BadEvidence("homotopy is not the identity at end 0".into()));
        }
        let at1 = compose_morphisms(&self.homotopy, &end_inclusion(&prism_y, 1))?;
        if at1 != compose_morphisms(f, &self.retraction)? {
            return Err(Error::BadEvidence("homotopy does not reach f∘g at end 1".into()));
        }
        let prism_x = product(&simplex(1), &f.source);
        let idf = product_of_morphisms(
            &prism_x,
            &prism_y,
            &identity_morphism(&simplex(1)),
            f,
        )?;
        let along = compose_morphisms(&self.homotopy, &idf)?;
        let constant = compose_morphisms(f, &prism_x.proj_y)?;
        if along != constant {
            return Err(Error::BadEvidence("homotopy moves the subobject".into()));
        }
        Ok(())
    }
}

/// The weak-inverse data of the end-1 inclusion Δ[0]→Δ[1]: retract to
/// the point, homotopy = pointwise maximum.
pub fn interval_end_weak_inverse() -> WeakInverseData {
    let d1 = simplex(1);
    let f = simplex_morphism(&SimplexMap::vertex(1, 1));
    let retraction = to_point(&d1);
    let prism = product(&d1, &d1);
    let map = (0..prism.object.n_cells())
        .map(|c| {
            let (a, b) = prism.split(&Element::nondegenerate(c, prism.object.dim_of(c)));
            let am = crate::sset::element_to_simplex_map(1, &a);
            let bm = crate::sset::element_to_simplex_map(1, &b);
            let values: Vec<u8> = am
                .values()
                .iter()
                .zip(bm.values())
                .map(|(&u, &v)| u.max(v))
                .collect();
            let max_map = SimplexMap::new(values, 2).unwrap();
            crate::sset::simplex_map_to_element(1, &max_map)
        })
        .collect();
    let homotopy = make_morphism(&prism.object, &d1, map).expect("max is monotone");
    WeakInverseData {
        cofibration: f,
        retraction,
        homotopy,
    }
}

/// The nondegenerate prism cells over a base cell b of dimension d, as
/// elements of Δ[1]×B: T_j = (interval jump after j, b·σ_j).
fn prism_cells_over(
    prism: &ProductResult,
    b_cell: usize,
    d: u8,
) -> Vec<(usize, u8)> {
    // Returns (product cell id, missing facet index) in the cap-at-1 fill
    // order: T_0 via Λ_1, ..., T_d via Λ_{d+1}.
    (0..=d)
        .map(|j| {
            let alpha_values: Vec<u8> = (0..=d + 1).map(|i| u8::from(i > j)).collect();
            let alpha = SimplexMap::new(alpha_values, 2).unwrap();
            let interval_part = crate::sset::simplex_map_to_element(1, &alpha);
            let base_part = Element {
                cell: b_cell,
                epi: SimplexMap::sigma(d, j).unwrap(),
            };
            let pair = prism.element_pair(&interval_part, &base_part);
            debug_assert!(!pair.is_degenerate(), "prism cells are nondegenerate");
            (pair.cell, j + 1)
        })
        .collect()
}

/// Extends a partial assignment on the cells of an ambient object by
/// horn fills: each step names a cell with exactly one unknown facet and
/// fills it against the certificate, assigning the cell and that facet.
pub(crate) fn run_fill_steps(
    ambient: &Arc<FiniteSSet>,
    steps: &[(usize, u8)],
    assign: &mut [Option<Element>],
    over: &SMorphism,
    cert: &FillerCertificate,
) -> Result<()> {
    let x = &cert.morphism.source;
    for &(cell, r) in steps {
        let d = ambient.dim_of(cell);
        let mut top = Vec::with_capacity(d as usize);
        for (j, face) in ambient.faces_of(cell).iter().enumerate() {
            if j as u8 == r {
                continue;
            }
            let base = assign[face.cell].as_ref().ok_or_else(|| {
                Error::EquationsFail(format!("facet {j} unknown at fill time"))
            })?;
            top.push(x.eval(base, &face.epi));
        }
        let bottom = over.map[cell].clone();
        let filler = cert.fill(&SquareKey::horn(d, r, top, bottom))?;
        let missing = ambient.face(cell, r);
        if missing.is_degenerate() {
            return Err(Error::EquationsFail(
                "fill step at a degenerate facet".into(),
            ));
        }
        assign[missing.cell] = Some(x.eval(&filler, &SimplexMap::delta(d, r).unwrap()));
        assign[cell] = Some(filler);
    }
    Ok(())
}

/// Shared prism transport: fill Δ[1]×B against p's horn certificate,
/// given values on the end-1 cap (all of B) and on the prism over the
/// image of a cofibration i: A→B, lying over the given map to Y.
/// Returns the full prism morphism; the caller reads off end 0.
fn prism_fill(
    i: &SMorphism,
    cert: &FillerCertificate,
    prism: &ProductResult,
    cap1: &SMorphism,
    side_values: impl Fn(usize) -> Element,
    over: &SMorphism,
) -> Result<SMorphism> {
    let b = &i.target;
    let x = &cert.morphism.source;
    let mut assign: Vec<Option<Element>> = vec![None; prism.object.n_cells()];
    let v1 = simplex(1).cell_by_label("1").unwrap();
    // End-1 cap: the cell over b at the constant-1 interval.
    for c in 0..b.n_cells() {
        let d = b.dim_of(c);
        let one = Element {
            cell: v1,
            epi: SimplexMap::total_epi(d),
        };
        let pair = prism.element_pair(&one, &Element::nondegenerate(c, d));
        debug_assert!(!pair.is_degenerate());
        assign[pair.cell] = Some(cap1.map[c].clone());
    }
    // Side: every prism cell over the image of i.
    let hit: Vec<bool> = {
        let mut hit = vec![false; b.n_cells()];
        for e in &i.map {
            hit[e.cell] = true;
        }
        hit
    };
    for pc in 0..prism.object.n_cells() {
        let (_, base) = prism.split(&Element::nondegenerate(pc, prism.object.dim_of(pc)));
        if hit[base.cell] {
            assign[pc] = Some(side_values(pc));
        }
    }
    // Fill order: complement cells of B by dimension, each via its σ
    // ladder against horns Λ_1, ..., Λ_{d+1}.
    let complement: Vec<usize> = {
        let mut cells: Vec<usize> =
            (0..b.n_cells()).filter(|&c| !hit[c]).collect();
        cells.sort_by_key(|&c| (b.dim_of(c), c));
        cells
    };
    for c in complement {
        let steps = prism_cells_over(prism, c, b.dim_of(c));
        run_fill_steps(&prism.object, &steps, &mut assign, over, cert)?;
    }
    let map: Vec<Element> = assign
        .into_iter()
        .map(|e| e.expect("caps, sides, and ladders cover the prism"))
        .collect();
    let e = make_morphism(&prism.object, x, map)?;
    if compose_morphisms(&cert.morphism, &e)? != *over {
        return Err(Error::EquationsFail("prism fill escapes its base".into()));
    }
    Ok(e)
}

/// Mode B: transport the end-1 lift top∘g back along the homotopy.
fn solve_mode_b(
    square: &LiftSquare,
    data: &WeakInverseData,
    cert: &FillerCertificate,
) -> Result<SMorphism> {
    if cert.family != FillFamily::Horn {
        return Err(Error::BadEvidence("mode B needs a horn certificate".into()));
    }
    if cert.morphism != *square.p || data.cofibration != *square.i {
        return Err(Error::BadEvidence("evidence names different morphisms".into()));
    }
    data.validate()?;
    let b = &square.i.target;
    let prism = product(&simplex(1), b);
    if data.homotopy.source != prism.object {
        return Err(Error::BadEvidence("homotopy prism mismatch".into()));
    }
    let cap1 = compose_morphisms(square.top, &data.retraction)?;
    let over = compose_morphisms(square.bottom, &data.homotopy)?;
    // Side values: over i(A) the prism is constant at the top map.
    let prism_a = product(&simplex(1), &square.i.source);
    let idxi = product_of_morphisms(
        &prism_a,
        &prism,
        &identity_morphism(&simplex(1)),
        square.i,
    )?;
    let side_map: HashMap<usize, Element> = (0..prism_a.object.n_cells())
        .map(|c| {
            let target_cell = idxi.map[c].clone();
            debug_assert!(!target_cell.is_degenerate());
            let value = square
                .top
                .apply(&prism_a.proj_y.map[c]);
            (target_cell.cell, value)
        })
        .collect();
    let e = prism_fill(
        square.i,
        cert,
        &prism,
        &cap1,
        |pc| side_map[&pc].clone(),
        &over,
    )?;
    compose_morphisms(&e, &end_inclusion(&prism, 0))
}

/// Mode C: deform the section-transported lift p′∘bottom back to one
/// restricting to the top, along the homotopy id ≃ p′∘p.
fn solve_mode_c(
    square: &LiftSquare,
    section: &SMorphism,
    homotopy: &SMorphism,
    cert: &FillerCertificate,
) -> Result<SMorphism> {
    if cert.family != FillFamily::Horn {
        return Err(Error::BadEvidence("mode C needs a horn certificate".into()));
    }
    if cert.morphism != *square.p {
        return Err(Error::BadEvidence("certificate is for a different morphism".into()));
    }
    if !is_cofibration(square.i).is_yes() {
        return Err(Error::BadEvidence("mode C left leg must be a cofibration".into()));
    }
    let p = square.p;
    let x = &p.source;
    if compose_morphisms(p, section)? != identity_morphism(&p.target) {
        return Err(Error::BadEvidence("section fails p∘p′ = id".into()));
    }
    let prism_x = product(&simplex(1), x);
    if homotopy.source != prism_x.object || homotopy.target != *x {
        return Err(Error::BadEvidence("homotopy has wrong endpoints".into()));
    }
    if compose_morphisms(homotopy, &end_inclusion(&prism_x, 0))? != identity_morphism(x) {
        return Err(Error::BadEvidence("homotopy is not id at end 0".into()));
    }
    let sp = compose_morphisms(section, p)?;
    if compose_morphisms(homotopy, &end_inclusion(&prism_x, 1))? != sp {
        return Err(Error::BadEvidence("homotopy misses p′∘p at end 1".into()));
    }
    if compose_morphisms(p, homotopy)? != compose_morphisms(p, &prism_x.proj_y)? {
        return Err(Error::BadEvidence("homotopy is not over the target".into()));
    }
    let b = &square.i.target;
    let prism = product(&simplex(1), b);
    let cap1 = compose_morphisms(section, square.bottom)?;
    let over = compose_morphisms(square.bottom, &prism.proj_y)?;
    // Side values: φ∘(id×top) on the prism over A.
    let prism_a = product(&simplex(1), &square.i.source);
    let idxi = product_of_morphisms(
        &prism_a,
        &prism,
        &identity_morphism(&simplex(1)),
        square.i,
    )?;
    let idxtop = product_of_morphisms(
        &prism_a,
        &prism_x,
        &identity_morphism(&simplex(1)),
        square.top,
    )?;
    let side_on_a = compose_morphisms(homotopy, &idxtop)?;
    let side_map: HashMap<usize, Element> = (0..prism_a.object.n_cells())
        .map(|c| (idxi.map[c].cell, side_on_a.map[c].clone()))
        .collect();
    let e = prism_fill(
        square.i,
        cert,
        &prism,
        &cap1,
        |pc| side_map[&pc].clone(),
        &over,
    )?;
    compose_morphisms(&e, &end_inclusion(&prism, 0))
}

/// Searches for an order in which the unknown cells of the ambient can
/// be filled by horn moves. A step (cell, r) is legal when all faces of
/// the cell are known except facet r, which is nondegenerate and names
/// an unknown cell; executing it assigns both. Deterministic DFS with
/// dead-state memoization; None when no order exists.
pub fn find_fill_program(ambient: &FiniteSSet, known: &[bool]) -> Option<Vec<(usize, u8)>> {
    fn complete(known: &[bool]) -> bool {
        known.iter().all(|&k| k)
    }
    fn candidates(ambient: &FiniteSSet, known: &[bool]) -> Vec<(usize, u8, usize)> {
        let mut out = Vec::new();
        for c in 0..ambient.n_cells() {
            if known[c] || ambient.dim_of(c) == 0 {
                continue;
            }
            let mut missing = None;
            let mut count = 0;
            for (j, face) in ambient.faces_of(c).iter().enumerate() {
                if !known[face.cell] {
                    count += 1;
                    if !face.is_degenerate() {
                        missing = Some((j as u8, face.cell));
                    }
                }
            }
            if count == 1 {
                if let Some((r, fc)) = missing {
                    out.push((c, r, fc));
                }
            }
        }
        out
    }
    fn dfs(
        ambient: &FiniteSSet,
        known: &mut Vec<bool>,
        dead: &mut std::collections::HashSet<Vec<bool>>,
        out: &mut Vec<(usize, u8)>,
    ) -> bool {
        if complete(known) {
            return true;
        }
        if dead.contains(known) {
            return false;
        }
        for (c, r, fc) in candidates(ambient, known) {
            known[c] = true;
            known[fc] = true;
            out.push((c, r));
            if dfs(ambient, known, dead, out) {
                return true;
            }
            out.pop();
            known[c] = false;
            known[fc] = false;
        }
        dead.insert(known.clone());
        false
    }
    let mut state = known.to_vec();
    let mut out = Vec::new();
    let mut dead = std::collections::HashSet::new();
    if dfs(ambient, &mut state, &mut dead, &mut out) {
        Some(out)
    } else {
        None
    }
}

/// Direct route for a square whose left leg is a cofibration and whose
/// right leg has a horn certificate: seed the diagonal on the image,
/// fill the complement by a horn program if one exists, otherwise fall
/// back to brute-force search.
pub fn solve_by_fill_program(
    square: &LiftSquare,
    cert: &FillerCertificate,
) -> Result<SMorphism> {
    if cert.family != FillFamily::Horn {
        return Err(Error::BadEvidence("fill programs need a horn certificate".into()));
    }
    if cert.morphism != *square.p {
        return Err(Error::BadEvidence("certificate is for a different morphism".into()));
    }
    if !is_cofibration(square.i).is_yes() {
        return Err(Error::NotCofibration("fill-program left leg".into()));
    }
    let b = &square.i.target;
    let x = &square.p.source;
    let mut assign: Vec<Option<Element>> = vec![None; b.n_cells()];
    for (a_cell, image) in square.i.map.iter().enumerate() {
        assign[image.cell] = Some(square.top.map[a_cell].clone());
    }
    let known: Vec<bool> = assign.iter().map(Option::is_some).collect();
    match find_fill_program(b, &known) {
        Some(program) => {
            run_fill_steps(b, &program, &mut assign, square.bottom, cert)?;
            let map = assign
                .into_iter()
                .map(|e| e.expect("fill program covers the complement"))
                .collect();
            make_morphism(b, x, map)
        }
        None => search_lift(square).ok_or(Error::NoFiller),
    }
}

#[derive(Clone)]
pub enum TripleEvidence<'a> {
    /// Cycle certificate for the middle morphism h.
    AcyclicMiddle(&'a FillerCertificate),
    /// Weak-inverse data for f, horn certificate for h.
    LeftWeakInverse(&'a WeakInverseData, &'a FillerCertificate),
    /// Weak-inverse data for g, horn certificate for h.
    RightWeakInverse(&'a WeakInverseData, &'a FillerCertificate),
    /// Horn certificate for h alone: fill program on the corner
    /// complement, with brute-force search as a last resort.
    HornFill(&'a FillerCertificate),
}

/// The two-variable lifting property: given cofibrations f: A→B and
/// g: C→D, a morphism h: X→Y, and compatible a: A×D→X, b: B×C→X,
/// c: B×D→Y, produces d: B×D→X with d∘(f×id) = a, d∘(id×g) = b,
/// h∘d = c.
pub fn triple_lift(
    f: &SMorphism,
    g: &SMorphism,
    h: &SMorphism,
    a: &SMorphism,
    b: &SMorphism,
    c: &SMorphism,
    evidence: &TripleEvidence,
) -> Result<SMorphism> {
    if !is_cofibration(f).is_yes() || !is_cofibration(g).is_yes() {
        return Err(Error::NotCofibration("triple lift outer legs".into()));
    }
    let wy = product(&f.source, &g.source); // A×C
    let xy = product(&f.target, &g.source); // B×C
    let wz = product(&f.source, &g.target); // A×D
    let xz = product(&f.target, &g.target); // B×D
    if a.source != wz.object
        || a.target != h.source
        || b.source != xy.object
        || b.target != h.source
        || c.source != xz.object
        || c.target != h.target
    {
        return Err(Error::ObjectMismatch("triple lift data endpoints".into()));
    }
    let id_a = identity_morphism(&f.source);
    let id_b = identity_morphism(&f.target);
    let id_c = identity_morphism(&g.source);
    let id_d = identity_morphism(&g.target);
    let f_y = product_of_morphisms(&wy, &xy, f, &id_c)?; // f×id_C
    let w_g = product_of_morphisms(&wy, &wz, &id_a, g)?; // id_A×g
    let u = product_of_morphisms(&xy, &xz, &id_b, g)?; // id_B×g
    let v = product_of_morphisms(&wz, &xz, f, &id_d)?; // f×id_D
    if compose_morphisms(b, &f_y)? != compose_morphisms(a, &w_g)?
        || compose_morphisms(h, a)? != compose_morphisms(c, &v)?
        || compose_morphisms(h, b)? != compose_morphisms(c, &u)?
    {
        return Err(Error::IncompatibleSquare);
    }
    let corner = pushout(&f_y, &w_g)?;
    let pp = corner.mediate(&u, &v)?;
    let top = corner.mediate(b, a)?;
    let square = LiftSquare {
        i: &pp,
        p: h,
        top: &top,
        bottom: c,
    };
    let d = match evidence {
        TripleEvidence::AcyclicMiddle(cert) => {
            solve_rlp(&square, &LiftEvidence::CycleCertificate(cert))?
        }
        TripleEvidence::HornFill(cert) => {
            if cert.family != FillFamily::Horn || cert.morphism != *h {
                return Err(Error::BadEvidence("horn certificate must certify h".into()));
            }
            solve_by_fill_program(&square, cert)?
        }
        TripleEvidence::LeftWeakInverse(data, cert) => {
            if data.cofibration != *f {
                return Err(Error::BadEvidence("weak-inverse data must be for f".into()));
            }
            transport_lift(&square, data, cert, &xz, TransportSide::Left {
                xy: &xy,
                wz: &wz,
                u: &u,
                v: &v,
                a,
                b,
            })?
        }
        TripleEvidence::RightWeakInverse(data, cert) => {
            if data.cofibration != *g {
                return Err(Error::BadEvidence("weak-inverse data must be for g".into()));
            }
            transport_lift(&square, data, cert, &xz, TransportSide::Right {
                xy: &xy,
                wz: &wz,
                u: &u,
                v: &v,
                a,
                b,
            })?
        }
    };
    if compose_morphisms(&d, &v)? != *a
        || compose_morphisms(&d, &u)? != *b
        || compose_morphisms(h, &d)? != *c
    {
        return Err(Error::EquationsFail("triple lift equations".into()));
    }
    Ok(d)
}

enum TransportSide<'a> {
    Left {
        xy: &'a ProductResult,
        wz: &'a ProductResult,
        u: &'a SMorphism,
        v: &'a SMorphism,
        a: &'a SMorphism,
        b: &'a SMorphism,
    },
    Right {
        xy: &'a ProductResult,
        wz: &'a ProductResult,
        u: &'a SMorphism,
        v: &'a SMorphism,
        a: &'a SMorphism,
        b: &'a SMorphism,
    },
}

/// Homotopy transport for the two weak-inverse evidence routes: deform
/// the product B×D along the homotopy in one coordinate, lift the
/// deformed square at end 1, and fill the prism back to end 0.
fn transport_lift(
    square: &LiftSquare,
    data: &WeakInverseData,
    cert: &FillerCertificate,
    xz: &ProductResult,
    side: TransportSide,
) -> Result<SMorphism> {
    if cert.family != FillFamily::Horn {
        return Err(Error::BadEvidence("transport needs a horn certificate".into()));
    }
    if cert.morphism != *square.p {
        return Err(Error::BadEvidence("certificate is for a different morphism".into()));
    }
    data.validate()?;
    let interval = simplex(1);
    let id_i = identity_morphism(&interval);
    let prism = product(&interval, &xz.object); // Δ[1]×(B×D)
    let (phi, cap1, side_map) = match side {
        TransportSide::Left { xy, wz, u, v, a, b } => {
            // Φ = (H∘(id×π_B), π_D): run the B coordinate along the homotopy.
            let hb_prism = product(&interval, &data.cofibration.target);
            let id_pb = product_of_morphisms(&prism, &hb_prism, &id_i, &xz.proj_x)?;
            let comp_b = compose_morphisms(&data.homotopy, &id_pb)?;
            let comp_d = compose_morphisms(&xz.proj_y, &prism.proj_y)?;
            let phi = xz.pair(&comp_b, &comp_d)?;
            // Cap at end 1: a∘(g_f×id_D).
            let r_x_id = {
                let to_a = compose_morphisms(&data.retraction, &xz.proj_x)?;
                wz.pair(&to_a, &xz.proj_y)?
            };
            let cap1 = compose_morphisms(a, &r_x_id)?;
            // Sides: b deformed in the B coordinate over B×C, a constant
            // over A×D.
            let mut side_map: HashMap<usize, Element> = HashMap::new();
            let p_bc = product(&interval, &xy.object);
            let phi_c = {
                let id_pb2 = product_of_morphisms(&p_bc, &hb_prism, &id_i, &xy.proj_x)?;
                let comp_b2 = compose_morphisms(&data.homotopy, &id_pb2)?;
                let comp_c = compose_morphisms(&xy.proj_y, &p_bc.proj_y)?;
                xy.pair(&comp_b2, &comp_c)?
            };
            let val_bc = compose_morphisms(b, &phi_c)?;
            let into = product_of_morphisms(&p_bc, &prism, &id_i, u)?;
            for q in 0..p_bc.object.n_cells() {
                side_map.insert(into.map[q].cell, val_bc.map[q].clone());
            }
            let p_ad = product(&interval, &wz.object);
            let val_ad = compose_morphisms(a, &p_ad.proj_y)?;
            let into2 = product_of_morphisms(&p_ad, &prism, &id_i, v)?;
            for q in 0..p_ad.object.n_cells() {
                side_map.insert(into2.map[q].cell, val_ad.map[q].clone());
            }
            (phi, cap1, side_map)
        }
        TransportSide::Right { xy, wz, u, v, a, b } => {
            let hd_prism = product(&interval, &data.cofibration.target);
            let id_pd = product_of_morphisms(&prism, &hd_prism, &id_i, &xz.proj_y)?;
            let comp_d = compose_morphisms(&data.homotopy, &id_pd)?;
            let comp_b = compose_morphisms(&xz.proj_x, &prism.proj_y)?;
            let phi = xz.pair(&comp_b, &comp_d)?;
            let id_x_r = {
                let to_c = compose_morphisms(&data.retraction, &xz.proj_y)?;
                xy.pair(&xz.proj_x, &to_c)?
            };
            let cap1 = compose_morphisms(b, &id_x_r)?;
            let mut side_map: HashMap<usize, Element> = HashMap::new();
            let p_bc = product(&interval, &xy.object);
            let val_bc = compose_morphisms(b, &p_bc.proj_y)?;
            let into = product_of_morphisms(&p_bc, &prism, &id_i, u)?;
            for q in 0..p_bc.object.n_cells() {
                side_map.insert(into.map[q].cell, val_bc.map[q].clone());
            }
            let p_ad = product(&interval, &wz.object);
            let phi_a = {
                let id_pd2 = product_of_morphisms(&p_ad, &hd_prism, &id_i, &wz.proj_y)?;
                let comp_d2 = compose_morphisms(&data.homotopy, &id_pd2)?;
                let comp_a = compose_morphisms(&wz.proj_x, &p_ad.proj_y)?;
                wz.pair(&comp_a, &comp_d2)?
            };
            let val_ad = compose_morphisms(a, &phi_a)?;
            let into2 = product_of_morphisms(&p_ad, &prism, &id_i, v)?;
            for q in 0..p_ad.object.n_cells() {
                side_map.insert(into2.map[q].cell, val_ad.map[q].clone());
            }
            (phi, cap1, side_map)
        }
    };
    let over = compose_morphisms(square.bottom, &phi)?;
    let e = prism_fill(
        square.i,
        cert,
        &prism,
        &cap1,
        |pc| side_map[&pc].clone(),
        &over,
    )?;
    compose_morphisms(&e, &end_inclusion(&prism, 0))
}

/// The homotopy between id_W and k∘k′ that is constant along k, built by
/// a triple lift against the interval cycle.
pub fn cylinder_homotopy(
    k: &SMorphism,
    k_prime: &SMorphism,
    p: &SMorphism,
    evidence: &TripleEvidence,
) -> Result<SMorphism> {
    let w = &k.target;
    let x = &k.source;
    if compose_morphisms(k_prime, k)? != identity_morphism(x) {
        return Err(Error::EquationsFail("k′∘k = id fails".into()));
    }
    let kk = compose_morphisms(k, k_prime)?;
    if compose_morphisms(p, &kk)? != *p {
        return Err(Error::EquationsFail("p∘k∘k′ = p fails".into()));
    }
    let (ends, c_incl) = cycle(1);
    let interval = simplex(1);
    // a on (1+1)×W: identity at vertex 0, k∘k′ at vertex 1.
    let ends_w = product(&ends, w);
    let a_map: Vec<Element> = (0..ends_w.object.n_cells())
        .map(|cell| {
            let e = Element::nondegenerate(cell, ends_w.object.dim_of(cell));
            let (vertex, base) = ends_w.split(&e);
            if ends.label(vertex.cell) == "0" {
                base
            } else {
                kk.apply(&base)
            }
        })
        .collect();
    let a = make_morphism(&ends_w.object, w, a_map)?;
    let interval_x = product(&interval, x);
    let b = compose_morphisms(k, &interval_x.proj_y)?;
    let interval_w = product(&interval, w);
    let c = compose_morphisms(p, &interval_w.proj_y)?;
    triple_lift(&c_incl, k, p, &a, &b, &c, evidence).map_err(|err| match err {
        Error::NoFiller => {
            Error::EquationsFail("no homotopy between id and k∘k′ exists".into())
        }
        other => other,
    })
}

#[derive(Debug)]
pub enum WeakInverseOutcome {
    Found(WeakInverseData),
    /// No retraction g∘f = id exists.
    NoRetraction,
    /// A retraction exists, but no homotopy id ≃ f∘g constant along f.
    NoHomotopy { retraction: SMorphism },
}

/// Tries to exhibit a cofibration f as a strong deformation retract:
/// the retraction by lifting f against X→Δ[0] (certified route first,
/// then exhaustive), the homotopy by the triple lift against the
/// interval cycle (fill program, then exhaustive).
pub fn weak_inverse_extract(
    f: &SMorphism,
    cert_x: &FillerCertificate,
    cert_y: &FillerCertificate,
    bound: u8,
) -> Result<WeakInverseOutcome> {
    if !is_cofibration(f).is_yes() {
        return Err(Error::NotCofibration("weak inverse extraction".into()));
    }
    let x = &f.source;
    let y = &f.target;
    let to_pt = to_point(x);
    if cert_x.morphism != to_pt || cert_y.morphism != to_point(y) {
        return Err(Error::BadEvidence(
            "certificates must certify the collapses to the point".into(),
        ));
    }
    let id_x = identity_morphism(x);
    let bottom = to_point(y);
    let g_square = LiftSquare {
        i: f,
        p: &to_pt,
        top: &id_x,
        bottom: &bottom,
    };
    let g = match contractible_certificate(&to_pt, bound) {
        CertificateResult::Certified(cy) => {
            solve_rlp(&g_square, &LiftEvidence::CycleCertificate(&cy))?
        }
        CertificateResult::Failed(_) => match solve_by_fill_program(&g_square, cert_x) {
            Ok(g) => g,
            Err(Error::NoFiller) => return Ok(WeakInverseOutcome::NoRetraction),
            Err(e) => return Err(e),
        },
    };
    let fg = compose_morphisms(f, &g)?;
    let (ends, c_incl) = cycle(1);
    let ends_y = product(&ends, y);
    let a_map: Vec<Element> = (0..ends_y.object.n_cells())
        .map(|cell| {
            let e = Element::nondegenerate(cell, ends_y.object.dim_of(cell));
            let (vertex, base) = ends_y.split(&e);
            if ends.label(vertex.cell) == "0" {
                base
            } else {
                fg.apply(&base)
            }
        })
        .collect();
    let a = make_morphism(&ends_y.object, y, a_map)?;
    let interval = simplex(1);
    let interval_x = product(&interval, x);
    let b = compose_morphisms(f, &interval_x.proj_y)?;
    let interval_y = product(&interval, y);
    let c = to_point(&interval_y.object);
    match triple_lift(
        &c_incl,
        f,
        &to_point(y),
        &a,
        &b,
        &c,
        &TripleEvidence::HornFill(cert_y),
    ) {
        Ok(h) => {
            let data = WeakInverseData {
                cofibration: f.clone(),
                retraction: g,
                homotopy: h,
            };
            data.validate()?;
            Ok(WeakInverseOutcome::Found(data))
        }
        Err(Error::NoFiller) => Ok(WeakInverseOutcome::NoHomotopy { retraction: g }),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sset::discrete;

    #[test]
    fn kan_certificates_for_discretes() {
        for k in 0..=3usize {
            let cert = discrete_certificate(&discrete(k), 3);
            cert.verify_table().unwrap();
            let by_search = kan_certificate(&to_point(&discrete(k)), 3);
            assert!(by_search.is_certified());
            // The canonical fillers agree with the least-search fillers:
            // each level has one element per point.
            let sc = by_search.certified();
            assert_eq!(sc.table, cert.table);
        }
    }

    #[test]
    fn interval_to_point_fails_at_the_outer_horn() {
        let p = to_point(&simplex(1));
        match kan_certificate(&p, 2) {
            CertificateResult::Failed(w) => {
                assert_eq!(w.key.dim, 2);
                assert_eq!(w.key.k, 0);
                let d1 = simplex(1);
                let v0 = d1.cell_by_label("0").unwrap();
                let e01 = d1.cell_by_label("01").unwrap();
                // Facet 1 (the 02 edge) degenerate at vertex 0; facet 2
                // (the 01 edge) the identity edge.
                assert_eq!(
                    w.key.top,
                    vec![
                        Element {
                            cell: v0,
                            epi: SimplexMap::total_epi(1)
                        },
                        Element::nondegenerate(e01, 1),
                    ]
                );
            }
            CertificateResult::Certified(_) => panic!("Δ[1] is not fibrant over the point"),
        }
    }

    #[test]
    fn empty_domain_certificate_is_vacuous() {
        let empty = crate::sset::FiniteSSet::empty();
        let p = make_morphism(&empty, &simplex(0), vec![]).unwrap();
        let cert = kan_certificate(&p, 3).certified();
        assert!(cert.table.is_empty());
    }

    #[test]
    fn contractible_certificates() {
        // Identity: the filler of any cycle square is its bottom.
        let x = simplex(2);
        let id = identity_morphism(&x);
        let cert = contractible_certificate(&id, 2).certified();
        cert.verify_table().unwrap();
        for (key, filler) in &cert.table {
            assert_eq!(*filler, key.bottom);
        }

        // Two points over one: no edge joins them.
        let p = to_point(&discrete(2));
        match contractible_certificate(&p, 1) {
            CertificateResult::Failed(w) => {
                assert_eq!(w.key.dim, 1);
                assert_eq!(w.key.family, FillFamily::Cycle);
                assert_ne!(w.key.top[0], w.key.top[1]);
            }
            CertificateResult::Certified(_) => panic!("discrete(2) is not contractible"),
        }
    }

    #[test]
    fn skeletal_decomposition_examples() {
        let empty = crate::sset::FiniteSSet::empty();
        let into_d1 = make_morphism(&empty, &simplex(1), vec![]).unwrap();
        let d = skeletal_decompose(&into_d1).unwrap();
        let shape: Vec<(u8, usize)> =
            d.stages.iter().map(|s| (s.dim, s.cells.len())).collect();
        assert_eq!(shape, vec![(0, 2), (1, 1)]);

        let (_, incl) = horn(2, 1).unwrap();
        let d2 = skeletal_decompose(&incl).unwrap();
        let labels: Vec<Vec<&str>> = d2
            .stages
            .iter()
            .map(|s| s.cells.iter().map(|&c| incl.target.label(c)).collect())
            .collect();
        assert_eq!(labels, vec![vec!["02"], vec!["012"]]);

        let id = identity_morphism(&simplex(2));
        assert!(skeletal_decompose(&id).unwrap().stages.is_empty());

        let collapse = to_point(&simplex(1));
        assert!(matches!(
            skeletal_decompose(&collapse),
            Err(Error::NotCofibration(_))
        ));
    }

    #[test]
    fn mode_a_fills_along_the_skeleton() {
        // Against the identity of Δ[2] (contractible), lift the horn
        // inclusion: the diagonal must restrict to the top.
        let x = simplex(2);
        let cert = contractible_certificate(&identity_morphism(&x), 2).certified();
        let (h, incl) = horn(2, 1).unwrap();
        let top = crate::sset::make_morphism(
            &h,
            &x,
            incl.map.clone(),
        )
        .unwrap();
        let id = identity_morphism(&x);
        let square = LiftSquare {
            i: &incl,
            p: &id,
            top: &top,
            bottom: &id,
        };
        let d = solve_rlp(&square, &LiftEvidence::CycleCertificate(&cert)).unwrap();
        assert!(square.is_solution(&d));
        // Determinism: a second run is bit-identical.
        let d2 = solve_rlp(&square, &LiftEvidence::CycleCertificate(&cert)).unwrap();
        assert_eq!(d, d2);
        // And it agrees with the brute-force oracle on solvability.
        assert!(search_lift(&square).is_some());
    }

    #[test]
    fn mode_b_with_trivial_weak_inverse_returns_the_top() {
        let x = simplex(1);
        let disc = discrete(1);
        let cert = discrete_certificate(&disc, 3);
        let p = to_point(&disc);
        let id = identity_morphism(&x);
        let prism = product(&simplex(1), &x);
        let data = WeakInverseData {
            cofibration: id.clone(),
            retraction: id.clone(),
            homotopy: prism.proj_y.clone(),
        };
        data.validate().unwrap();
        let top = enumerate_morphisms(&x, &disc).pop().unwrap();
        let bottom = to_point(&x);
        let square = LiftSquare {
            i: &id,
            p: &p,
            top: &top,
            bottom: &bottom,
        };
        let d = solve_rlp(&square, &LiftEvidence::WeakInverse(&data, &cert)).unwrap();
        assert_eq!(d, top);
    }

    #[test]
    fn mode_c_with_iso_inverts() {
        let disc = discrete(2);
        let p = identity_morphism(&disc);
        let cert = kan_certificate(&p, 3).certified();
        let prism = product(&simplex(1), &disc);
        let homotopy = prism.proj_y.clone();
        let (h, incl) = horn(2, 0).unwrap();
        let _ = h;
        let point_cell = disc.cell_by_label("p1").unwrap();
        let top_map: Vec<Element> = (0..incl.source.n_cells())
            .map(|c| Element {
                cell: point_cell,
                epi: SimplexMap::total_epi(incl.source.dim_of(c)),
            })
            .collect();
        let top = make_morphism(&incl.source, &disc, top_map).unwrap();
        let bottom_map: Vec<Element> = (0..incl.target.n_cells())
            .map(|c| Element {
                cell: point_cell,
                epi: SimplexMap::total_epi(incl.target.dim_of(c)),
            })
            .collect();
        let bottom = make_morphism(&incl.target, &disc, bottom_map).unwrap();
        let square = LiftSquare {
            i: &incl,
            p: &p,
            top: &top,
            bottom: &bottom,
        };
        let d = solve_rlp(
            &square,
            &LiftEvidence::SectionHomotopy {
                section: &p,
                homotopy: &homotopy,
                cert: &cert,
            },
        )
        .unwrap();
        // p is the identity, so the diagonal is the bottom.
        assert_eq!(d, bottom);
    }

    #[test]
    fn interval_end_weak_inverse_is_valid() {
        interval_end_weak_inverse().validate().unwrap();
    }

    fn empty_to(target: &Arc<FiniteSSet>) -> SMorphism {
        make_morphism(&crate::sset::FiniteSSet::empty(), target, vec![]).unwrap()
    }

    #[test]
    fn triple_lift_point_against_two_points() {
        let pt = simplex(0);
        let disc = discrete(2);
        let f = empty_to(&pt);
        let g = empty_to(&pt);
        let h = to_point(&disc);
        let cert = kan_certificate(&h, 2).certified();
        let wz = product(&f.source, &g.target);
        let xy = product(&f.target, &g.source);
        let xz = product(&f.target, &g.target);
        let a = make_morphism(&wz.object, &disc, vec![]).unwrap();
        let b = make_morphism(&xy.object, &disc, vec![]).unwrap();
        let c = to_point(&xz.object);
        let d = triple_lift(&f, &g, &h, &a, &b, &c, &TripleEvidence::HornFill(&cert)).unwrap();
        let p0 = disc.cell_by_label("p0").unwrap();
        assert_eq!(d.map, vec![Element::nondegenerate(p0, 0)]);
    }

    #[test]
    fn triple_lift_identity_middle_is_forced() {
        let pt = simplex(0);
        let disc = discrete(2);
        let f = empty_to(&pt);
        let g = empty_to(&pt);
        let h = identity_morphism(&disc);
        let wz = product(&f.source, &g.target);
        let xy = product(&f.target, &g.source);
        let xz = product(&f.target, &g.target);
        let a = make_morphism(&wz.object, &disc, vec![]).unwrap();
        let b = make_morphism(&xy.object, &disc, vec![]).unwrap();
        let p1 = disc.cell_by_label("p1").unwrap();
        let c = make_morphism(&xz.object, &disc, vec![Element::nondegenerate(p1, 0)]).unwrap();
        let horn_cert = kan_certificate(&h, 2).certified();
        let d1 =
            triple_lift(&f, &g, &h, &a, &b, &c, &TripleEvidence::HornFill(&horn_cert)).unwrap();
        assert_eq!(d1, c);
        let cyc = contractible_certificate(&h, 2).certified();
        let d2 =
            triple_lift(&f, &g, &h, &a, &b, &c, &TripleEvidence::AcyclicMiddle(&cyc)).unwrap();
        assert_eq!(d2, c);
    }

    #[test]
    fn triple_lift_cycle_with_equal_endpoints_degenerates() {
        let disc = discrete(2);
        let (_, c_incl) = cycle(1);
        let g = empty_to(&simplex(0));
        let h = to_point(&disc);
        let cert = kan_certificate(&h, 2).certified();
        let wz = product(&c_incl.source, &g.target); // ∂Δ[1]×Δ[0]
        let xy = product(&c_incl.target, &g.source); // Δ[1]×∅
        let xz = product(&c_incl.target, &g.target); // Δ[1]×Δ[0]
        let p1 = disc.cell_by_label("p1").unwrap();
        let a_map: Vec<Element> = (0..wz.object.n_cells())
            .map(|cl| Element {
                cell: p1,
                epi: SimplexMap::total_epi(wz.object.dim_of(cl)),
            })
            .collect();
        let a = make_morphism(&wz.object, &disc, a_map).unwrap();
        let b = make_morphism(&xy.object, &disc, vec![]).unwrap();
        let c = to_point(&xz.object);
        let d = triple_lift(&c_incl, &g, &h, &a, &b, &c, &TripleEvidence::HornFill(&cert))
            .unwrap();
        // The diagonal sends the edge to the degenerate edge at p1.
        for e in &d.map {
            assert_eq!(e.cell, p1);
        }
    }

    #[test]
    fn cylinder_homotopy_of_identity_is_projection() {
        let w = discrete(2);
        let id = identity_morphism(&w);
        let p = to_point(&w);
        let cert = kan_certificate(&p, 2).certified();
        let phi = cylinder_homotopy(&id, &id, &p, &TripleEvidence::HornFill(&cert)).unwrap();
        let prism = product(&simplex(1), &w);
        assert_eq!(phi, prism.proj_y);
    }

    #[test]
    fn cylinder_homotopy_fails_between_separate_points() {
        let one = discrete(1);
        let two = discrete(2);
        let k = make_morphism(&one, &two, vec![Element::nondegenerate(0, 0)]).unwrap();
        let k_prime = to_point(&two);
        let p = to_point(&two);
        let cert = kan_certificate(&p, 2).certified();
        match cylinder_homotopy(&k, &k_prime, &p, &TripleEvidence::HornFill(&cert)) {
            Err(Error::EquationsFail(_)) => {}
            other => panic!("expected EquationsFail, got {other:?}"),
        }
    }

    #[test]
    fn weak_inverse_of_identity() {
        let one = discrete(1);
        let f = identity_morphism(&one);
        let cert = discrete_certificate(&one, 2);
        match weak_inverse_extract(&f, &cert, &cert, 2).unwrap() {
            WeakInverseOutcome::Found(data) => {
                assert_eq!(data.retraction, f);
                let prism = product(&simplex(1), &one);
                assert_eq!(data.homotopy, prism.proj_y);
            }
            other => panic!("expected data, got {other:?}"),
        }
    }

    #[test]
    fn weak_inverse_of_swap() {
        let two = discrete(2);
        let swap = make_morphism(
            &two,
            &two,
            vec![Element::nondegenerate(1, 0), Element::nondegenerate(0, 0)],
        )
        .unwrap();
        let cert = discrete_certificate(&two, 2);
        match weak_inverse_extract(&swap, &cert, &cert, 2).unwrap() {
            WeakInverseOutcome::Found(data) => {
                assert_eq!(data.retraction, swap);
                let prism = product(&simplex(1), &two);
                assert_eq!(data.homotopy, prism.proj_y);
            }
            other => panic!("expected data, got {other:?}"),
        }
    }

    #[test]
    fn weak_inverse_fails_for_point_into_two() {
        let one = discrete(1);
        let two = discrete(2);
        let f = make_morphism(&one, &two, vec![Element::nondegenerate(0, 0)]).unwrap();
        let cert1 = discrete_certificate(&one, 2);
        let cert2 = discrete_certificate(&two, 2);
        match weak_inverse_extract(&f, &cert1, &cert2, 2).unwrap() {
            WeakInverseOutcome::NoHomotopy { retraction } => {
                assert_eq!(compose_morphisms(&retraction, &f).unwrap(), identity_morphism(&one));
            }
            other => panic!("expected NoHomotopy, got {other:?}"),
        }
    }

    #[test]
    fn oracle_equivalence_on_small_squares() {
        // For each cofibration i and cycle-certified p in a small corpus,
        // solve_rlp succeeds exactly where brute force does, and both
        // triangles commute on its output.
        let ps: Vec<SMorphism> = vec![
            identity_morphism(&simplex(1)),
            identity_morphism(&simplex(2)),
            to_point(&discrete(1)),
        ];
        let is: Vec<SMorphism> = vec![
            cycle(1).1,
            cycle(2).1,
            horn(2, 1).unwrap().1,
            horn(2, 0).unwrap().1,
            empty_to(&simplex(1)),
        ];
        let mut checked = 0;
        for p in &ps {
            let cert = match contractible_certificate(p, 3) {
                CertificateResult::Certified(c) => c,
                CertificateResult::Failed(_) => continue,
            };
            for i in &is {
                for top in enumerate_morphisms(&i.source, &p.source) {
                    for bottom in enumerate_morphisms(&i.target, &p.target) {
                        let square = LiftSquare {
                            i,
                            p,
                            top: &top,
                            bottom: &bottom,
                        };
                        if !square.commutes() {
                            continue;
                        }
                        let by_engine =
                            solve_rlp(&square, &LiftEvidence::CycleCertificate(&cert));
                        let by_search = search_lift(&square);
                        assert_eq!(by_engine.is_ok(), by_search.is_some());
                        if let Ok(d) = by_engine {
                            assert!(square.is_solution(&d));
                        }
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked >= 40, "only {checked} squares checked");
    }

    #[test]
    fn saturation_under_pushout() {
        // A lifting problem against a pushout of a cofibration transports
        // back: solving the original square and mediating agrees with
        // solving the pushed-out square directly.
        let x = simplex(2);
        let p = identity_morphism(&x);
        let cert = contractible_certificate(&p, 3).certified();
        let (h, i) = horn(2, 1).unwrap();
        let collapse = to_point(&h);
        let po = pushout(&i, &collapse).unwrap();
        let i_pushed = &po.from_y; // Δ[0] → Δ[2]/Λ
        assert!(is_cofibration(i_pushed).is_yes());
        for top in enumerate_morphisms(&i_pushed.source, &x) {
            for bottom in enumerate_morphisms(&i_pushed.target, &x) {
                let square = LiftSquare {
                    i: i_pushed,
                    p: &p,
                    top: &top,
                    bottom: &bottom,
                };
                if !square.commutes() {
                    continue;
                }
                // Direct solve on the pushed-out square.
                let direct = solve_rlp(&square, &LiftEvidence::CycleCertificate(&cert));
                // Transport: solve the original square with the composed
                // boundary data and mediate the two solutions.
                let big_top = compose_morphisms(&top, &collapse).unwrap();
                let big_bottom = compose_morphisms(&bottom, &po.from_x).unwrap();
                let big = LiftSquare {
                    i: &i,
                    p: &p,
                    top: &big_top,
                    bottom: &big_bottom,
                };
                assert!(big.commutes());
                let d_big = solve_rlp(&big, &LiftEvidence::CycleCertificate(&cert)).unwrap();
                let mediated = po.mediate(&d_big, &top).unwrap();
                assert!(square.is_solution(&mediated));
                assert!(direct.is_ok());
            }
        }
    }
}
