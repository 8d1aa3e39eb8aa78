//! The two factorizations of a morphism between finite simplicial sets:
//! a cofibration followed by a contractible morphism, through a glued
//! covering of the target, and a weakly invertible cofibration followed
//! by a fibration, through the mapping path object. The bounded
//! weak-equivalence decision runs the second factorization and tests the
//! fibration part for acyclicity.

use std::collections::HashMap;
use std::sync::Arc;

use crate::constructions::{
    product_of_morphisms, skeletonize, exponential_truncated, Exponential, Skeletonized,
};
use crate::error::{Error, Result};
use crate::lifting::{
    certificate_from_rule, contractible_certificate, cylinder_homotopy, find_fill_program,
    run_fill_steps, CertificateResult, FillFamily, FillerCertificate, FillerRule, SquareKey,
    SquareWitness, TripleEvidence, WeakInverseData,
};
use crate::simplex::{enumerate_maps, MapKind, SimplexMap};
use crate::sset::{
    compose_morphisms, element_to_simplex_map, identity_morphism, is_cofibration, make_morphism,
    simplex, simplex_map_to_element, simplex_morphism, to_point, CofibrationCheck, Element,
    FiniteSSet, SMorphism,
};

thread_local! {
    static MONO_CATALOG: std::cell::RefCell<Vec<Arc<Vec<SimplexMap>>>> =
        const { std::cell::RefCell::new(Vec::new()) };
    static ACT_TABLES: std::cell::RefCell<HashMap<SimplexMap, Arc<Vec<(usize, SimplexMap)>>>> =
        std::cell::RefCell::new(HashMap::new());
    static ASSEMBLY_TABLES: std::cell::RefCell<HashMap<u8, Arc<Vec<Option<(u8, usize)>>>>> =
        std::cell::RefCell::new(HashMap::new());
}

/// All monos into [n], ascending by (domain dimension, values); the
/// identity is the single entry of full dimension and comes last.
fn monos_into(n: u8) -> Arc<Vec<SimplexMap>> {
    MONO_CATALOG.with(|c| {
        let mut c = c.borrow_mut();
        while c.len() <= n as usize {
            let k = c.len() as u8;
            let mut v = Vec::new();
            for i in 0..=k {
                v.extend(enumerate_maps(i, k, MapKind::Mono));
            }
            c.push(Arc::new(v));
        }
        c[n as usize].clone()
    })
}

fn mono_slot(monos: &[SimplexMap], alpha: &SimplexMap) -> usize {
    monos
        .iter()
        .position(|m| m == alpha)
        .expect("a mono of the slot catalogue")
}

/// Per destination slot of the action by phi: the source slot holding
/// the mono part and the epi that acts on it.
fn act_table(phi: &SimplexMap) -> Arc<Vec<(usize, SimplexMap)>> {
    ACT_TABLES.with(|c| {
        if let Some(t) = c.borrow().get(phi) {
            return t.clone();
        }
        let src = monos_into(phi.cod_dim());
        let dst = monos_into(phi.dom_dim());
        let table: Vec<(usize, SimplexMap)> = dst
            .iter()
            .map(|alpha| {
                let comp = phi.compose(alpha).expect("slot composes");
                let (mono, epi) = comp.epi_mono_factor();
                (mono_slot(&src, &mono), epi)
            })
            .collect();
        let t = Arc::new(table);
        c.borrow_mut().insert(phi.clone(), t.clone());
        t
    })
}

/// Writes a proper mono into [n] as δ_j ∘ μ with j the least index
/// outside its image.
fn split_mono(alpha: &SimplexMap) -> (u8, SimplexMap) {
    let n = alpha.cod_dim();
    let mut j = 0u8;
    while alpha.values().contains(&j) {
        j += 1;
    }
    let values: Vec<u8> = alpha
        .values()
        .iter()
        .map(|&v| if v > j { v - 1 } else { v })
        .collect();
    (j, SimplexMap::new(values, n).expect("a mono into the facet"))
}

/// Per slot of level n: None on the identity slot, otherwise the facet
/// index j and the slot of μ with δ_j∘μ the slot mono.
fn assembly_table(n: u8) -> Arc<Vec<Option<(u8, usize)>>> {
    ASSEMBLY_TABLES.with(|c| {
        if let Some(t) = c.borrow().get(&n) {
            return t.clone();
        }
        let monos = monos_into(n);
        let prev = monos_into(n - 1);
        let id = SimplexMap::identity(n);
        let table: Vec<Option<(u8, usize)>> = monos
            .iter()
            .map(|alpha| {
                if *alpha == id {
                    None
                } else {
                    let (j, mu) = split_mono(alpha);
                    Some((j, mono_slot(&prev, &mu)))
                }
            })
            .collect();
        let t = Arc::new(table);
        c.borrow_mut().insert(n, t.clone());
        t
    })
}

fn code_of_map(m: &SimplexMap) -> String {
    m.values()
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("")
}

fn code_of_element(e: &Element) -> String {
    format!("{}e{}", e.cell, code_of_map(&e.epi))
}

/// A slot value of the glued covering: an element of the source, or a
/// cone pair ⟨ε, y⟩ with ε an epi out of the slot dimension and y an
/// element of the target at the dimension ε lands in.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Glued {
    InX(Element),
    InL(SimplexMap, Element),
}

impl Glued {
    fn code(&self) -> String {
        match self {
            Glued::InX(e) => format!("x{}", code_of_element(e)),
            Glued::InL(eps, y) => format!("l{}.{}", code_of_map(eps), code_of_element(y)),
        }
    }
}

/// The action of an arbitrary simplex map on a slot value:
/// x·φ in the source, and ⟨ε,y⟩·φ = ⟨e(ε∘φ), y·m(ε∘φ)⟩ on cone pairs.
fn glued_act(x_obj: &FiniteSSet, y_obj: &FiniteSSet, v: &Glued, phi: &SimplexMap) -> Glued {
    match v {
        Glued::InX(e) => Glued::InX(x_obj.eval(e, phi)),
        Glued::InL(eps, y) => {
            let comp = eps.compose(phi).expect("slot dimensions line up");
            let (mono, epi) = comp.epi_mono_factor();
            Glued::InL(epi, y_obj.eval(y, &mono))
        }
    }
}

/// The covering value of a slot: f on source slots, y·ε on cone pairs.
fn covering_value(f: &SMorphism, y_obj: &FiniteSSet, v: &Glued) -> Element {
    match v {
        Glued::InX(e) => f.apply(e),
        Glued::InL(eps, y) => y_obj.eval(y, eps),
    }
}

/// The left cone on an object: level n is the disjoint union over i ≤ n
/// of the i-elements times the epis [n]↠[i], with the evident action.
/// The covering sends ⟨ε, y⟩ to y·ε.
pub struct ConeResult {
    pub object: Arc<FiniteSSet>,
    pub covering: SMorphism,
    pub skel: Arc<Skeletonized<(SimplexMap, Element)>>,
}

pub fn left_cone(y: &Arc<FiniteSSet>, bound: u8) -> ConeResult {
    let mut levels: Vec<Vec<(SimplexMap, Element)>> = Vec::new();
    for d in 0..=bound {
        let mut level = Vec::new();
        for i in 0..=d {
            for eps in enumerate_maps(d, i, MapKind::Epi) {
                for ye in y.elements_at(i) {
                    level.push((eps.clone(), ye));
                }
            }
        }
        level.sort();
        levels.push(level);
    }
    let act_y = y.clone();
    let act = move |t: &(SimplexMap, Element), phi: &SimplexMap| {
        let comp = t.0.compose(phi).expect("cone dimensions line up");
        let (mono, epi) = comp.epi_mono_factor();
        (epi, act_y.eval(&t.1, &mono))
    };
    let label = |t: &(SimplexMap, Element)| format!("c{}.{}", code_of_map(&t.0), code_of_element(&t.1));
    let skel = Arc::new(skeletonize(levels, act, label));
    let map = (0..skel.sset.n_cells())
        .map(|c| {
            let (eps, ye) = skel.origin_of(c);
            y.eval(ye, eps)
        })
        .collect();
    let covering = make_morphism(&skel.sset, y, map).expect("the cone covers its base");
    ConeResult {
        object: skel.sset.clone(),
        covering,
        skel,
    }
}

/// A level element of the glued covering: one slot value per mono into
/// the level, in catalogue order. The identity slot is last.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ZTuple(pub Vec<Glued>);

impl ZTuple {
    pub fn head(&self) -> &Glued {
        self.0.last().expect("the identity slot")
    }

    fn code(&self) -> String {
        let slots: Vec<String> = self.0.iter().map(|v| v.code()).collect();
        format!("z({})", slots.join(";"))
    }
}

/// The action (z·φ)(α) = z(m(φ∘α))·e(φ∘α); z sits at level cod(φ) and
/// the result at level dom(φ).
fn tuple_act(x_obj: &FiniteSSet, y_obj: &FiniteSSet, t: &ZTuple, phi: &SimplexMap) -> ZTuple {
    let table = act_table(phi);
    ZTuple(
        table
            .iter()
            .map(|(slot, epi)| glued_act(x_obj, y_obj, &t.0[*slot], epi))
            .collect(),
    )
}

/// The tuple of a source element: every slot restricts the element.
fn source_tuple(x_obj: &FiniteSSet, n: u8, x: &Element) -> ZTuple {
    ZTuple(
        monos_into(n)
            .iter()
            .map(|alpha| Glued::InX(x_obj.eval(x, alpha)))
            .collect(),
    )
}

/// Assembles the glued tuple with identity slot ⟨id, y⟩ and the given
/// facet tuples: slot δ_j∘μ reads face j at μ. Pairwise compatibility of
/// the faces makes the value independent of the decomposition.
fn assemble_glue(y: &Element, faces: &[&ZTuple], n: u8) -> ZTuple {
    let table = assembly_table(n);
    let id = SimplexMap::identity(n);
    ZTuple(
        table
            .iter()
            .map(|entry| match entry {
                None => Glued::InL(id.clone(), y.clone()),
                Some((j, mu_slot)) => faces[*j as usize].0[*mu_slot].clone(),
            })
            .collect(),
    )
}

fn backtrack_glue(
    cands: &[Vec<usize>],
    faces: &HashMap<usize, Vec<ZTuple>>,
    check_compat: bool,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let j = chosen.len();
    if j == cands.len() {
        out.push(chosen.clone());
        return;
    }
    'next: for &c in &cands[j] {
        if check_compat {
            for (l, &p) in chosen.iter().enumerate() {
                if faces[&c][l] != faces[&p][j - 1] {
                    continue 'next;
                }
            }
        }
        chosen.push(c);
        backtrack_glue(cands, faces, check_compat, chosen, out);
        chosen.pop();
    }
}

/// Generates the levels of the glued covering: tuples of source
/// elements, glued tuples over every target element with a compatible
/// boundary of previously generated tuples, and all degeneracies.
fn generate_z_levels(f: &SMorphism, bound: u8) -> Vec<Vec<ZTuple>> {
    let x_obj = &f.source;
    let y_obj = &f.target;
    let mut levels: Vec<Vec<ZTuple>> = Vec::new();
    for n in 0..=bound {
        let mut level: Vec<ZTuple> = Vec::new();
        for x in x_obj.elements_at(n) {
            level.push(source_tuple(x_obj, n, &x));
        }
        if n == 0 {
            for y in y_obj.elements_at(0) {
                level.push(ZTuple(vec![Glued::InL(SimplexMap::identity(0), y)]));
            }
        } else {
            let prev = &levels[n as usize - 1];
            let heads: Vec<Element> = prev
                .iter()
                .map(|t| covering_value(f, y_obj, t.head()))
                .collect();
            for y in y_obj.elements_at(n) {
                let mut cands: Vec<Vec<usize>> = Vec::with_capacity(n as usize + 1);
                let mut feasible = true;
                for j in 0..=n {
                    let want = y_obj.eval(&y, &SimplexMap::delta(n, j).unwrap());
                    let list: Vec<usize> = (0..prev.len()).filter(|&i| heads[i] == want).collect();
                    if list.is_empty() {
                        feasible = false;
                        break;
                    }
                    cands.push(list);
                }
                if !feasible {
                    continue;
                }
                let mut faces: HashMap<usize, Vec<ZTuple>> = HashMap::new();
                if n >= 2 {
                    for list in &cands {
                        for &i in list {
                            faces.entry(i).or_insert_with(|| {
                                (0..n)
                                    .map(|l| {
                                        tuple_act(
                                            x_obj,
                                            y_obj,
                                            &prev[i],
                                            &SimplexMap::delta(n - 1, l).unwrap(),
                                        )
                                    })
                                    .collect()
                            });
                        }
                    }
                }
                let mut picks = Vec::new();
                backtrack_glue(&cands, &faces, n >= 2, &mut Vec::new(), &mut picks);
                for pick in picks {
                    let chosen: Vec<&ZTuple> = pick.iter().map(|&i| &prev[i]).collect();
                    level.push(assemble_glue(&y, &chosen, n));
                }
            }
        }
        for a in 0..n {
            for eps in enumerate_maps(n, a, MapKind::Epi) {
                for w in &levels[a as usize] {
                    level.push(tuple_act(x_obj, y_obj, w, &eps));
                }
            }
        }
        level.sort();
        level.dedup();
        levels.push(level);
    }
    levels
}

/// Checks the defining conditions on every stored tuple: the covering
/// value is natural in the slot, source slots are closed under further
/// restriction, and a tuple whose identity slot carries a proper epi is
/// itself degenerate. The last condition is what makes the complement
/// characterization of the source embedding exact.
fn validate_tuples(f: &SMorphism, levels: &[Vec<ZTuple>]) -> Result<()> {
    let x_obj = &f.source;
    let y_obj = &f.target;
    for (n, level) in levels.iter().enumerate() {
        let n = n as u8;
        let monos = monos_into(n);
        let pairs: Vec<(usize, SimplexMap, usize)> = monos
            .iter()
            .enumerate()
            .flat_map(|(ai, alpha)| {
                monos_into(alpha.dom_dim())
                    .iter()
                    .map(|beta| {
                        let comp = alpha.compose(beta).unwrap();
                        (ai, beta.clone(), mono_slot(&monos, &comp))
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        for t in level {
            let values: Vec<Element> = t
                .0
                .iter()
                .map(|v| covering_value(f, y_obj, v))
                .collect();
            for (ai, beta, ci) in &pairs {
                if values[*ci] != y_obj.eval(&values[*ai], beta) {
                    return Err(Error::EquationsFail(
                        "glued tuple fails naturality of the covering value".into(),
                    ));
                }
                if matches!(t.0[*ai], Glued::InX(_)) && !matches!(t.0[*ci], Glued::InX(_)) {
                    return Err(Error::EquationsFail(
                        "glued tuple leaves the source under restriction".into(),
                    ));
                }
            }
            if let Glued::InL(eps, _) = t.head() {
                if *eps != SimplexMap::identity(n) && n > 0 {
                    let degenerate = (0..n).any(|j| {
                        let face = tuple_act(x_obj, y_obj, t, &SimplexMap::delta(n, j).unwrap());
                        tuple_act(x_obj, y_obj, &face, &SimplexMap::sigma(n - 1, j).unwrap()) == *t
                    });
                    if !degenerate {
                        return Err(Error::EquationsFail(
                            "glued tuple with a degenerate identity slot is not degenerate".into(),
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

/// A morphism factored as a cofibration g into the glued covering
/// followed by a contractible morphism h, with the cone that feeds the
/// covering and the cycle certificate realizing the explicit filler.
pub struct Factor1Result {
    pub g: SMorphism,
    pub h: SMorphism,
    pub certificate: FillerCertificate,
    pub object: Arc<FiniteSSet>,
    pub cone: ConeResult,
    pub bound: u8,
    pub skel: Arc<Skeletonized<ZTuple>>,
    complement: Vec<usize>,
}

impl Factor1Result {
    /// Cells of the glued covering outside the image of g.
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    /// Whether a cell's identity slot is a cone pair; on nondegenerate
    /// cells this is exactly membership in the complement.
    pub fn is_glue_cell(&self, cell: usize) -> bool {
        matches!(self.skel.origin_of(cell).head(), Glued::InL(_, _))
    }

    /// Line-oriented dump of the cone, the tuples, and the filler table.
    pub fn audit(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        for c in 0..self.cone.object.n_cells() {
            let (eps, ye) = self.cone.skel.origin_of(c);
            let _ = writeln!(
                s,
                "cone {} dim {} {}",
                c,
                self.cone.object.dim_of(c),
                format_args!("c{}.{}", code_of_map(eps), code_of_element(ye))
            );
        }
        for c in 0..self.object.n_cells() {
            let _ = writeln!(
                s,
                "tuple {} dim {} {}",
                c,
                self.object.dim_of(c),
                self.skel.origin_of(c).code()
            );
        }
        for (key, filler) in &self.certificate.table {
            let _ = writeln!(s, "square {key:?} -> {filler:?}");
        }
        s
    }
}

fn default_bound(f: &SMorphism) -> u8 {
    f.source
        .max_dim()
        .unwrap_or(0)
        .max(f.target.max_dim().unwrap_or(0))
        + 1
}

/// Factors f as a contractible morphism following a cofibration at the
/// default working dimension max(dim X, dim Y) + 1.
pub fn factor_cof_contractible(f: &SMorphism) -> Result<Factor1Result> {
    factor_cof_contractible_at(f, default_bound(f))
}

/// Factors f = h∘g with g a cofibration and h contractible, materialized
/// up to the given bound. The cycle certificate for h is built from the
/// explicit glued filler; squares above the bound report BoundTooSmall.
pub fn factor_cof_contractible_at(f: &SMorphism, bound: u8) -> Result<Factor1Result> {
    let x_obj = f.source.clone();
    let y_obj = f.target.clone();
    let cone = left_cone(&y_obj, bound);
    let levels = generate_z_levels(f, bound);
    validate_tuples(f, &levels)?;
    let act = {
        let x = x_obj.clone();
        let y = y_obj.clone();
        move |t: &ZTuple, phi: &SimplexMap| tuple_act(&x, &y, t, phi)
    };
    let skel = Arc::new(skeletonize(levels, act, |t: &ZTuple| t.code()));
    let z_obj = skel.sset.clone();

    let g_map = (0..x_obj.n_cells())
        .map(|c| {
            let d = x_obj.dim_of(c);
            skel.form_of(d, &source_tuple(&x_obj, d, &Element::nondegenerate(c, d)))
        })
        .collect();
    let g = make_morphism(&x_obj, &z_obj, g_map)?;
    let complement = match is_cofibration(&g) {
        CofibrationCheck::Yes { complement } => complement,
        CofibrationCheck::No { .. } => {
            return Err(Error::NotCofibration(
                "the source embedding of the glued covering".into(),
            ))
        }
    };
    for c in 0..z_obj.n_cells() {
        let glue = matches!(skel.origin_of(c).head(), Glued::InL(_, _));
        if glue != complement.binary_search(&c).is_ok() {
            return Err(Error::EquationsFail(
                "complement characterization by the identity slot fails".into(),
            ));
        }
    }

    let h_map = (0..z_obj.n_cells())
        .map(|c| covering_value(f, &y_obj, skel.origin_of(c).head()))
        .collect();
    let h = make_morphism(&z_obj, &y_obj, h_map)?;
    if compose_morphisms(&h, &g)? != *f {
        return Err(Error::EquationsFail("h∘g = f fails".into()));
    }

    let rule = {
        let skel = skel.clone();
        move |key: &SquareKey| -> Result<Element> {
            let d = key.dim;
            if d > skel.bound() {
                return Err(Error::BoundTooSmall {
                    bound: skel.bound(),
                    need: format!("a glued filler at level {d}"),
                });
            }
            let t = if d == 0 {
                ZTuple(vec![Glued::InL(SimplexMap::identity(0), key.bottom.clone())])
            } else {
                let faces: Vec<ZTuple> = key
                    .top
                    .iter()
                    .map(|e| skel.apply_action(skel.origin_of(e.cell), &e.epi))
                    .collect();
                let refs: Vec<&ZTuple> = faces.iter().collect();
                assemble_glue(&key.bottom, &refs, d)
            };
            if skel.level(d).binary_search(&t).is_err() {
                return Err(Error::NoFiller);
            }
            Ok(skel.form_of(d, &t))
        }
    };
    let certificate = certificate_from_rule(
        &h,
        FillFamily::Cycle,
        bound,
        FillerRule::Formula(Arc::new(rule)),
    )?;

    Ok(Factor1Result {
        g,
        h,
        certificate,
        object: z_obj,
        cone,
        bound,
        skel,
        complement,
    })
}

/// A mapping path element: a source element together with a path in the
/// target whose end 1 is its image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathPoint {
    pub x: Element,
    pub path: SMorphism,
}

impl PartialOrd for PathPoint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PathPoint {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.x
            .cmp(&other.x)
            .then_with(|| self.path.map.cmp(&other.path.map))
    }
}

/// The mapping path object of f: level n holds the pairs (x, p) with
/// f(x) the end 1 of p, with the projections to both factors and the
/// constant-path section.
pub struct MappingPath {
    pub object: Arc<FiniteSSet>,
    pub p0: SMorphism,
    pub p1: SMorphism,
    pub r: SMorphism,
    pub bound: u8,
    pub skel: Arc<Skeletonized<PathPoint>>,
    pub exp: Arc<Exponential>,
}

impl MappingPath {
    pub fn level_size(&self, d: u8) -> usize {
        self.skel.level(d).len()
    }
}

/// The end e ∈ {0, 1} of a path at level d, as an element of the base.
fn path_end(exp: &Exponential, d: u8, q: &SMorphism, e: u8) -> Element {
    let prism = &exp.prisms[d as usize];
    let cst = simplex_morphism(&SimplexMap::new(vec![e; d as usize + 1], 2).unwrap());
    let iota = prism
        .pair(&identity_morphism(&prism.x), &cst)
        .expect("the end section of the prism");
    let q_end = compose_morphisms(q, &iota).expect("path restricts to its end");
    q_end.map[simplex_map_to_element(d, &SimplexMap::identity(d)).cell].clone()
}

/// The characteristic morphism Δ[d] → X of a cell, on the given simplex.
fn char_morphism(spx: &Arc<FiniteSSet>, x_obj: &Arc<FiniteSSet>, cell: usize, d: u8) -> SMorphism {
    let top = Element::nondegenerate(cell, d);
    let map = (0..spx.n_cells())
        .map(|s| {
            let mono = element_to_simplex_map(d, &Element::nondegenerate(s, spx.dim_of(s)));
            x_obj.eval(&top, &mono)
        })
        .collect();
    make_morphism(spx, x_obj, map).expect("a characteristic morphism")
}

/// Builds the mapping path object of f up to the bound.
pub fn mapping_path_object(f: &SMorphism, bound: u8) -> Result<MappingPath> {
    let x_obj = f.source.clone();
    let y_obj = f.target.clone();
    let interval = simplex(1);
    let exp = Arc::new(exponential_truncated(&y_obj, &interval, bound));
    let mut levels: Vec<Vec<PathPoint>> = Vec::new();
    for d in 0..=bound {
        let ends: Vec<Element> = exp
            .level(d)
            .iter()
            .map(|q| path_end(&exp, d, q, 1))
            .collect();
        let mut level = Vec::new();
        for x in x_obj.elements_at(d) {
            let fx = f.apply(&x);
            for (qi, q) in exp.level(d).iter().enumerate() {
                if ends[qi] == fx {
                    level.push(PathPoint {
                        x: x.clone(),
                        path: q.clone(),
                    });
                }
            }
        }
        level.sort();
        levels.push(level);
    }
    let act = {
        let x = x_obj.clone();
        let exp = exp.clone();
        move |p: &PathPoint, phi: &SimplexMap| PathPoint {
            x: x.eval(&p.x, phi),
            path: exp.act(phi.cod_dim(), &p.path, phi),
        }
    };
    let label = {
        let exp = exp.clone();
        move |p: &PathPoint| {
            format!(
                "w{}.{}",
                code_of_element(&p.x),
                exp.level_index(p.x.dim(), &p.path)
            )
        }
    };
    let skel = Arc::new(skeletonize(levels, act, label));
    let m_obj = skel.sset.clone();

    let mut p0_map = Vec::with_capacity(m_obj.n_cells());
    let mut p1_map = Vec::with_capacity(m_obj.n_cells());
    for c in 0..m_obj.n_cells() {
        let point = skel.origin_of(c);
        p1_map.push(point.x.clone());
        p0_map.push(path_end(&exp, m_obj.dim_of(c), &point.path, 0));
    }
    let p0 = make_morphism(&m_obj, &y_obj, p0_map)?;
    let p1 = make_morphism(&m_obj, &x_obj, p1_map)?;

    let mut r_map = Vec::with_capacity(x_obj.n_cells());
    for c in 0..x_obj.n_cells() {
        let d = x_obj.dim_of(c);
        let prism = &exp.prisms[d as usize];
        let chi = char_morphism(&prism.x, &x_obj, c, d);
        let path = compose_morphisms(f, &compose_morphisms(&chi, &prism.proj_x)?)?;
        r_map.push(skel.form_of(
            d,
            &PathPoint {
                x: Element::nondegenerate(c, d),
                path,
            },
        ));
    }
    let r = make_morphism(&x_obj, &m_obj, r_map)?;

    Ok(MappingPath {
        object: m_obj,
        p0,
        p1,
        r,
        bound,
        skel,
        exp,
    })
}

/// A morphism factored as a weakly invertible cofibration k into the
/// mapping path object followed by the end-0 fibration q, with the
/// weak-inverse data for k and the horn certificate for q.
pub struct Factor2Result {
    pub k: SMorphism,
    pub q: SMorphism,
    pub inverse: WeakInverseData,
    pub certificate: FillerCertificate,
    pub path: MappingPath,
    pub bound: u8,
}

impl Factor2Result {
    /// Line-oriented dump of the path object and the filler table.
    pub fn audit(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        for c in 0..self.path.object.n_cells() {
            let point = self.path.skel.origin_of(c);
            let _ = writeln!(
                s,
                "point {} dim {} x {} path {}",
                c,
                self.path.object.dim_of(c),
                code_of_element(&point.x),
                self.path.exp.level_index(point.x.dim(), &point.path)
            );
        }
        for (key, filler) in &self.certificate.table {
            let _ = writeln!(s, "square {key:?} -> {filler:?}");
        }
        s
    }
}

/// The end-0 filler rule: fill the source horn over the point, assemble
/// the open prism box from the horn paths and both end caps, fill it in
/// the target, and read off the resulting path point.
#[allow(clippy::too_many_arguments)]
fn end0_fill(
    skel: &Skeletonized<PathPoint>,
    exp: &Exponential,
    f: &SMorphism,
    cert_x: &FillerCertificate,
    cert_y: &FillerCertificate,
    key: &SquareKey,
) -> Result<Element> {
    let m = key.dim;
    let l = key.k;
    if m > exp.bound {
        return Err(Error::BoundTooSmall {
            bound: exp.bound,
            need: format!("a path point at level {m}"),
        });
    }
    let y_obj = &f.target;
    let points: Vec<PathPoint> = key
        .top
        .iter()
        .map(|e| skel.apply_action(skel.origin_of(e.cell), &e.epi))
        .collect();
    let top_x: Vec<Element> = points.iter().map(|p| p.x.clone()).collect();
    let pt = Element {
        cell: 0,
        epi: SimplexMap::total_epi(m),
    };
    let x_fill = cert_x.fill(&SquareKey::horn(m, l, top_x, pt))?;

    let prism = &exp.prisms[m as usize];
    let mut assign: Vec<Option<Element>> = vec![None; prism.object.n_cells()];
    let set = |assign: &mut Vec<Option<Element>>, cell: usize, val: Element| -> Result<()> {
        match &assign[cell] {
            Some(old) if *old != val => Err(Error::EquationsFail(
                "horn paths assign inconsistent prism values".into(),
            )),
            _ => {
                assign[cell] = Some(val);
                Ok(())
            }
        }
    };
    let sub = &exp.prisms[m as usize - 1];
    for (pos, &j) in key.facet_indices().iter().enumerate() {
        let inc = product_of_morphisms(
            sub,
            prism,
            &simplex_morphism(&SimplexMap::delta(m, j).unwrap()),
            &identity_morphism(&sub.y),
        )?;
        let path_j = &points[pos].path;
        for c in 0..sub.object.n_cells() {
            let img = &inc.map[c];
            debug_assert!(!img.is_degenerate());
            set(&mut assign, img.cell, path_j.map[c].clone())?;
        }
    }
    let v0 = simplex_map_to_element(1, &SimplexMap::vertex(0, 1)).cell;
    let v1 = simplex_map_to_element(1, &SimplexMap::vertex(1, 1)).cell;
    let fx = f.apply(&x_fill);
    for s in 0..prism.x.n_cells() {
        let d = prism.x.dim_of(s);
        let mono = element_to_simplex_map(m, &Element::nondegenerate(s, d));
        let a = Element::nondegenerate(s, d);
        let end0 = prism.element_pair(
            &a,
            &Element {
                cell: v0,
                epi: SimplexMap::total_epi(d),
            },
        );
        set(&mut assign, end0.cell, y_obj.eval(&key.bottom, &mono))?;
        let end1 = prism.element_pair(
            &a,
            &Element {
                cell: v1,
                epi: SimplexMap::total_epi(d),
            },
        );
        set(&mut assign, end1.cell, y_obj.eval(&fx, &mono))?;
    }
    let known: Vec<bool> = assign.iter().map(|v| v.is_some()).collect();
    let steps = find_fill_program(&prism.object, &known).ok_or(Error::NoFiller)?;
    run_fill_steps(
        &prism.object,
        &steps,
        &mut assign,
        &to_point(&prism.object),
        cert_y,
    )?;
    let vals: Result<Vec<Element>> = assign
        .into_iter()
        .enumerate()
        .map(|(c, v)| v.ok_or(Error::UnassignedCell(c)))
        .collect();
    let path = make_morphism(&prism.object, y_obj, vals?)?;
    let point = PathPoint { x: x_fill, path };
    if skel.level(m).binary_search(&point).is_err() {
        return Err(Error::NoFiller);
    }
    Ok(skel.form_of(m, &point))
}

fn check_kan_evidence(cert: &FillerCertificate, obj: &Arc<FiniteSSet>, role: &str) -> Result<()> {
    if cert.family != FillFamily::Horn {
        return Err(Error::BadEvidence(format!(
            "{role} certificate is not a horn certificate"
        )));
    }
    if cert.morphism != to_point(obj) {
        return Err(Error::BadEvidence(format!(
            "{role} certificate names a different object"
        )));
    }
    Ok(())
}

/// Factors f = q∘k with k a weakly invertible cofibration into the
/// mapping path object and q the end-0 fibration. The path object is
/// materialized at the certificate bound and grown until the retraction
/// homotopy exists; the growth is capped, reporting BoundTooSmall.
pub fn factor_acof_fib(
    f: &SMorphism,
    cert_x: &FillerCertificate,
    cert_y: &FillerCertificate,
    bound: u8,
) -> Result<Factor2Result> {
    check_kan_evidence(cert_x, &f.source, "source")?;
    check_kan_evidence(cert_y, &f.target, "target")?;
    let dim_x = f.source.max_dim().unwrap_or(0);
    let dim_y = f.target.max_dim().unwrap_or(0);
    let mut level = bound.max(1);
    let cap = (dim_x + 2 * dim_y + 4).max(level);
    loop {
        let path = mapping_path_object(f, level)?;
        let cert_p1 =
            certificate_from_rule(&path.p1, FillFamily::Cycle, 0, FillerRule::Search)?;
        match cylinder_homotopy(
            &path.r,
            &path.p1,
            &path.p1,
            &TripleEvidence::AcyclicMiddle(&cert_p1),
        ) {
            Ok(homotopy) => {
                let inverse = WeakInverseData {
                    cofibration: path.r.clone(),
                    retraction: path.p1.clone(),
                    homotopy,
                };
                inverse.validate()?;
                let rule = {
                    let skel = path.skel.clone();
                    let exp = path.exp.clone();
                    let f = f.clone();
                    let cx = Arc::new(cert_x.clone());
                    let cy = Arc::new(cert_y.clone());
                    move |key: &SquareKey| end0_fill(&skel, &exp, &f, &cx, &cy, key)
                };
                let certificate = certificate_from_rule(
                    &path.p0,
                    FillFamily::Horn,
                    bound,
                    FillerRule::Formula(Arc::new(rule)),
                )?;
                let k = path.r.clone();
                let q = path.p0.clone();
                if compose_morphisms(&q, &k)? != *f {
                    return Err(Error::EquationsFail("q∘k = f fails".into()));
                }
                if let CofibrationCheck::No { .. } = is_cofibration(&k) {
                    return Err(Error::NotCofibration(
                        "the constant-path section of the path object".into(),
                    ));
                }
                return Ok(Factor2Result {
                    k,
                    q,
                    inverse,
                    certificate,
                    path,
                    bound,
                });
            }
            Err(Error::NoFiller) | Err(Error::EquationsFail(_)) if level < cap => level += 1,
            Err(Error::NoFiller) | Err(Error::EquationsFail(_)) => {
                return Err(Error::BoundTooSmall {
                    bound: level,
                    need: "a retraction homotopy for the path object".into(),
                })
            }
            Err(e) => return Err(e),
        }
    }
}

/// The verdict of the bounded weak-equivalence decision.
pub enum WeqVerdict {
    Yes {
        inverse: WeakInverseData,
        certificate: FillerCertificate,
    },
    No {
        witness: SquareWitness,
    },
}

pub struct WeqDecision {
    pub bound: u8,
    pub verdict: WeqVerdict,
}

impl WeqDecision {
    pub fn is_yes(&self) -> bool {
        matches!(self.verdict, WeqVerdict::Yes { .. })
    }
}

/// Decides whether f is a weak equivalence at the bound: factor through
/// the path object and test the fibration part for acyclicity.
pub fn weq_decide(
    f: &SMorphism,
    cert_x: &FillerCertificate,
    cert_y: &FillerCertificate,
    bound: u8,
) -> Result<WeqDecision> {
    let fac = factor_acof_fib(f, cert_x, cert_y, bound)?;
    match contractible_certificate(&fac.q, bound) {
        CertificateResult::Certified(certificate) => Ok(WeqDecision {
            bound,
            verdict: WeqVerdict::Yes {
                inverse: fac.inverse,
                certificate,
            },
        }),
        CertificateResult::Failed(witness) => Ok(WeqDecision {
            bound,
            verdict: WeqVerdict::No { witness },
        }),
    }
}
