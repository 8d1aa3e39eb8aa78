//! The simplex category: nondecreasing maps between inhabited initial
//! segments [n] = {0, ..., n}, with composition, classification, and the
//! unique epi-mono factorization.
//!
//! Objects are skeletal, so a map stores only its value sequence and the
//! size of its codomain. The canonical order on maps is lexicographic on
//! values; every deterministic "least" choice downstream refers to it.

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimplexMap {
    values: Vec<u8>,
    codomain: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapClass {
    pub is_mono: bool,
    pub is_epi: bool,
    pub is_iso: bool,
    /// A non-surjective mono, i.e. a proper face inclusion.
    pub is_face: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    All,
    Mono,
    Epi,
}

impl std::fmt::Debug for SimplexMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]->{}", self.cod_dim())
    }
}

impl SimplexMap {
    /// Validates and builds a map [m]→[n] where m+1 = values.len() and
    /// n+1 = codomain_size.
    pub fn new(values: Vec<u8>, codomain_size: u8) -> Result<Self> {
        if values.is_empty() || codomain_size == 0 {
            return Err(Error::EmptyMap);
        }
        for i in 1..values.len() {
            if values[i] < values[i - 1] {
                return Err(Error::NotMonotone {
                    pos: i,
                    prev: values[i - 1],
                    next: values[i],
                });
            }
        }
        if let Some(&v) = values.iter().find(|&&v| v >= codomain_size) {
            return Err(Error::ValueOutOfRange {
                value: v,
                codomain: codomain_size,
            });
        }
        Ok(SimplexMap {
            values,
            codomain: codomain_size,
        })
    }

    pub fn identity(n: u8) -> Self {
        SimplexMap {
            values: (0..=n).collect(),
            codomain: n + 1,
        }
    }

    /// The coface δ_i: [n−1]→[n] skipping i. Requires n ≥ 1 and i ≤ n.
    pub fn delta(n: u8, i: u8) -> Result<Self> {
        if n == 0 || i > n {
            return Err(Error::GeneratorIndex {
                kind: "delta",
                index: i,
                dim: n,
            });
        }
        let values = (0..=n).filter(|&v| v != i).collect();
        Ok(SimplexMap {
            values,
            codomain: n + 1,
        })
    }

    /// The codegeneracy σ_i: [n+1]→[n] repeating i. Requires i ≤ n.
    pub fn sigma(n: u8, i: u8) -> Result<Self> {
        if i > n {
            return Err(Error::GeneratorIndex {
                kind: "sigma",
                index: i,
                dim: n,
            });
        }
        let mut values: Vec<u8> = (0..=n).collect();
        values.insert(i as usize, i);
        Ok(SimplexMap {
            values,
            codomain: n + 1,
        })
    }

    /// The vertex map [0]→[n] hitting i.
    pub fn vertex(i: u8, n: u8) -> Self {
        SimplexMap {
            values: vec![i],
            codomain: n + 1,
        }
    }

    /// The unique epi [m]↠[0].
    pub fn total_epi(m: u8) -> Self {
        SimplexMap {
            values: vec![0; m as usize + 1],
            codomain: 1,
        }
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn at(&self, i: usize) -> u8 {
        self.values[i]
    }

    /// Size of the domain segment (m+1 for a map out of [m]).
    pub fn dom_size(&self) -> usize {
        self.values.len()
    }

    pub fn cod_size(&self) -> u8 {
        self.codomain
    }

    pub fn dom_dim(&self) -> u8 {
        (self.values.len() - 1) as u8
    }

    pub fn cod_dim(&self) -> u8 {
        self.codomain - 1
    }

    pub fn is_identity(&self) -> bool {
        self.dom_size() == self.codomain as usize
            && self.values.iter().enumerate().all(|(i, &v)| v == i as u8)
    }

    pub fn is_mono(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_epi(&self) -> bool {
        // Nondecreasing, so surjectivity means starting at 0, ending at the
        // top, and never jumping by more than one.
        self.values[0] == 0
            && *self.values.last().unwrap() == self.codomain - 1
            && self.values.windows(2).all(|w| w[1] - w[0] <= 1)
    }

    pub fn classify(&self) -> MapClass {
        let is_mono = self.is_mono();
        let is_epi = self.is_epi();
        MapClass {
            is_mono,
            is_epi,
            is_iso: is_mono && is_epi,
            is_face: is_mono && !is_epi,
        }
    }

    /// self ∘ inner, pointwise.
    pub fn compose(&self, inner: &SimplexMap) -> Result<SimplexMap> {
        if inner.codomain as usize != self.dom_size() {
            return Err(Error::ComposeMismatch {
                inner: inner.codomain,
                outer: self.dom_dim() + 1,
            });
        }
        Ok(SimplexMap {
            values: inner.values.iter().map(|&v| self.values[v as usize]).collect(),
            codomain: self.codomain,
        })
    }

    /// The unique factorization self = mono ∘ epi, returned as (mono, epi).
    pub fn epi_mono_factor(&self) -> (SimplexMap, SimplexMap) {
        let mut image: Vec<u8> = self.values.clone();
        image.dedup();
        let mono = SimplexMap {
            values: image.clone(),
            codomain: self.codomain,
        };
        let epi_values = self
            .values
            .iter()
            .map(|v| image.binary_search(v).unwrap() as u8)
            .collect();
        let epi = SimplexMap {
            values: epi_values,
            codomain: image.len() as u8,
        };
        (mono, epi)
    }

    /// For an epi e, the mono picking the least preimage of each point;
    /// e ∘ least_section(e) = id.
    pub fn least_section(&self) -> SimplexMap {
        debug_assert!(self.is_epi());
        let mut section = Vec::with_capacity(self.codomain as usize);
        for target in 0..self.codomain {
            let i = self.values.iter().position(|&v| v == target).unwrap();
            section.push(i as u8);
        }
        SimplexMap {
            values: section,
            codomain: self.dom_size() as u8,
        }
    }

    /// Greedy generator decomposition: a chain g_0, g_1, ..., g_k with
    /// self = g_0 ∘ g_1 ∘ ... ∘ g_k (g_k applied first). Epis decompose
    /// into sigmas, monos into deltas; a general map concatenates the two
    /// chains of its epi-mono factorization.
    pub fn generator_chain(&self) -> Vec<SimplexMap> {
        let (mono, epi) = self.epi_mono_factor();
        let mut chain = Vec::new();
        // Mono chain, outermost first: peel the largest missing value.
        let mut m = mono;
        while !m.is_identity() {
            let n = m.cod_dim();
            let missing = (0..=n).rev().find(|v| !m.values.contains(v)).unwrap();
            let rest: Vec<u8> = m
                .values
                .iter()
                .map(|&v| if v > missing { v - 1 } else { v })
                .collect();
            chain.push(SimplexMap::delta(n, missing).unwrap());
            m = SimplexMap {
                values: rest,
                codomain: m.codomain - 1,
            };
        }
        // Epi chain, innermost last: peel the least repeated position.
        let mut epi_part = Vec::new();
        let mut e = epi;
        while !e.is_identity() {
            let i = (0..e.values.len() - 1)
                .find(|&i| e.values[i] == e.values[i + 1])
                .unwrap();
            let mut rest = e.values.clone();
            rest.remove(i);
            epi_part.push(SimplexMap::sigma(e.dom_dim() - 1, i as u8).unwrap());
            e = SimplexMap {
                values: rest,
                codomain: e.codomain,
            };
        }
        epi_part.reverse();
        chain.extend(epi_part);
        chain
    }
}

/// Composes a chain left to right as function composition: the last map is
/// applied first. Empty chains are rejected since there is no object to
/// take an identity on.
pub fn compose_chain(chain: &[SimplexMap]) -> Result<SimplexMap> {
    let mut iter = chain.iter().rev();
    let first = iter.next().ok_or(Error::EmptyMap)?;
    let mut acc = first.clone();
    for f in iter {
        acc = f.compose(&acc)?;
    }
    Ok(acc)
}

/// All maps [m]→[n] of the given kind, in lexicographic order on values.
pub fn enumerate_maps(m: u8, n: u8, kind: MapKind) -> Vec<SimplexMap> {
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(m as usize + 1);
    gen_maps(m as usize + 1, n, kind, &mut prefix, &mut out);
    out
}

fn gen_maps(len: usize, n: u8, kind: MapKind, prefix: &mut Vec<u8>, out: &mut Vec<SimplexMap>) {
    if prefix.len() == len {
        let map = SimplexMap {
            values: prefix.clone(),
            codomain: n + 1,
        };
        let keep = match kind {
            MapKind::All => true,
            MapKind::Mono => map.is_mono(),
            MapKind::Epi => map.is_epi(),
        };
        if keep {
            out.push(map);
        }
        return;
    }
    let lo = prefix.last().copied().unwrap_or(0);
    for v in lo..=n {
        prefix.push(v);
        gen_maps(len, n, kind, prefix, out);
        prefix.pop();
    }
}
