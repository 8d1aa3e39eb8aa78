//! Line-oriented text serialization for objects, morphisms, and filler
//! certificates.
//!
//! The grammar is canonical on output and diff-friendly. An object is a
//! block of `cell <id> dim <d>` lines in id order followed by
//! `face <id> <i> -> <cell> [epi-values]` lines in (id, i) order; labels
//! are presentation-only and never serialized. A morphism wraps its two
//! objects in `begin sset`/`end sset` sections followed by
//! `map <cell> -> <cell> [epi-values]` lines. Standalone simplex maps
//! print as `[v0,v1,...,vm]->n`. Parsing rejects non-canonical layouts
//! so that serialize ∘ parse is the identity on accepted text.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lifting::{FillFamily, FillerCertificate};
use crate::simplex::SimplexMap;
use crate::sset::{make_morphism, Element, FiniteSSet, SMorphism};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Non-empty, non-comment lines with their 1-based numbers.
pub(crate) struct Cursor<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .collect();
        Cursor { lines, pos: 0 }
    }

    pub(crate) fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.pos).copied()
    }

    pub(crate) fn next_line(&mut self) -> Option<(usize, &'a str)> {
        let l = self.peek();
        if l.is_some() {
            self.pos += 1;
        }
        l
    }

    pub(crate) fn expect(&mut self, want: &str) -> Result<usize> {
        match self.next_line() {
            Some((n, l)) if l == want => Ok(n),
            Some((n, l)) => Err(perr(n, format!("expected `{want}`, found `{l}`"))),
            None => Err(perr(0, format!("expected `{want}`, found end of input"))),
        }
    }
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| perr(line, format!("malformed {what} `{tok}`")))
}

/// `[v0,v1,...,vm]->n` form of a simplex map.
pub fn format_simplex_map(m: &SimplexMap) -> String {
    format!("{}->{}", bracket_values(m.values()), m.cod_dim())
}

pub fn parse_simplex_map(text: &str) -> Result<SimplexMap> {
    let t = text.trim();
    let (vals, cod) = t
        .split_once("]->")
        .ok_or_else(|| perr(0, format!("malformed simplex map `{t}`")))?;
    let values = parse_bracket_values(&format!("{vals}]"), 0)?;
    let n: u8 = parse_num(cod, 0, "codomain dimension")?;
    SimplexMap::new(values, n + 1)
}

fn bracket_values(values: &[u8]) -> String {
    let mut s = String::from("[");
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{v}");
    }
    s.push(']');
    s
}

fn parse_bracket_values(tok: &str, line: usize) -> Result<Vec<u8>> {
    let inner = tok
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| perr(line, format!("malformed value list `{tok}`")))?;
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|v| parse_num(v, line, "value"))
        .collect()
}

pub(crate) fn element_text(e: &Element) -> String {
    format!("{} {}", e.cell, bracket_values(e.epi.values()))
}

/// Parses `<cell> [vals]` given the object the element lives in (the
/// epi codomain is the cell's dimension).
fn parse_element_tokens(
    cell_tok: &str,
    vals_tok: &str,
    line: usize,
    host: &FiniteSSet,
) -> Result<Element> {
    let cell: usize = parse_num(cell_tok, line, "cell id")?;
    if cell >= host.n_cells() {
        return Err(perr(line, format!("cell {cell} out of range")));
    }
    let values = parse_bracket_values(vals_tok, line)?;
    let epi = SimplexMap::new(values, host.dim_of(cell) + 1)
        .map_err(|e| perr(line, format!("bad epi: {e}")))?;
    Ok(Element { cell, epi })
}

pub fn serialize_sset(x: &FiniteSSet) -> String {
    let mut s = String::new();
    for c in 0..x.n_cells() {
        let _ = writeln!(s, "cell {c} dim {}", x.dim_of(c));
    }
    for c in 0..x.n_cells() {
        for (i, e) in x.faces_of(c).iter().enumerate() {
            let _ = writeln!(s, "face {c} {i} -> {}", element_text(e));
        }
    }
    s
}

/// Parses cell/face lines until the terminator (or end of input when
/// none). Cells must appear first, in id order; faces in (id, i) order.
fn parse_sset_body(cur: &mut Cursor, terminator: Option<&str>) -> Result<Arc<FiniteSSet>> {
    let mut dims: Vec<u8> = Vec::new();
    let mut raw_faces: Vec<Vec<(usize, usize, String, String)>> = Vec::new();
    let mut seen_face = false;
    loop {
        match cur.peek() {
            None => {
                if let Some(t) = terminator {
                    return Err(perr(0, format!("missing `{t}`")));
                }
                break;
            }
            Some((_, l)) if Some(l) == terminator => {
                cur.next_line();
                break;
            }
            Some((n, l)) => {
                let toks: Vec<&str> = l.split_whitespace().collect();
                match toks.first().copied() {
                    Some("cell") => {
                        if seen_face {
                            return Err(perr(n, "cell line after face lines"));
                        }
                        if toks.len() != 4 || toks[2] != "dim" {
                            return Err(perr(n, "expected `cell <id> dim <d>`"));
                        }
                        let id: usize = parse_num(toks[1], n, "cell id")?;
                        if id != dims.len() {
                            return Err(perr(n, format!("cell id {id} out of order")));
                        }
                        dims.push(parse_num(toks[3], n, "dimension")?);
                        raw_faces.push(Vec::new());
                    }
                    Some("face") => {
                        seen_face = true;
                        if toks.len() != 6 || toks[3] != "->" {
                            return Err(perr(n, "expected `face <id> <i> -> <cell> [vals]`"));
                        }
                        let id: usize = parse_num(toks[1], n, "cell id")?;
                        let i: usize = parse_num(toks[2], n, "face index")?;
                        if id >= dims.len() {
                            return Err(perr(n, format!("face of unknown cell {id}")));
                        }
                        if i != raw_faces[id].len() {
                            return Err(perr(n, format!("face index {i} out of order")));
                        }
                        raw_faces[id].push((n, i, toks[4].to_string(), toks[5].to_string()));
                    }
                    _ => return Err(perr(n, format!("unrecognized line `{l}`"))),
                }
                cur.next_line();
            }
        }
    }
    // All cells are known before elements resolve, so faces may point
    // forward; dims alone determine each epi codomain.
    let mut faces: Vec<Vec<Element>> = Vec::with_capacity(dims.len());
    for (id, list) in raw_faces.iter().enumerate() {
        let want = if dims[id] == 0 { 0 } else { dims[id] as usize + 1 };
        if list.len() != want {
            let line = list.first().map(|f| f.0).unwrap_or(0);
            return Err(perr(
                line,
                format!("cell {id} has {} faces, expected {want}", list.len()),
            ));
        }
        let mut fl = Vec::with_capacity(list.len());
        for (n, _, cell_tok, vals_tok) in list {
            let cell: usize = parse_num(cell_tok, *n, "cell id")?;
            if cell >= dims.len() {
                return Err(perr(*n, format!("cell {cell} out of range")));
            }
            let values = parse_bracket_values(vals_tok, *n)?;
            let epi = SimplexMap::new(values, dims[cell] + 1)
                .map_err(|e| perr(*n, format!("bad epi: {e}")))?;
            fl.push(Element { cell, epi });
        }
        faces.push(fl);
    }
    FiniteSSet::new(
        dims.clone(),
        faces,
        (0..dims.len()).map(|c| format!("c{c}")).collect(),
    )
}

pub fn parse_sset(text: &str) -> Result<Arc<FiniteSSet>> {
    let mut cur = Cursor::new(text);
    let x = parse_sset_body(&mut cur, None)?;
    if let Some((n, l)) = cur.peek() {
        return Err(perr(n, format!("trailing content `{l}`")));
    }
    Ok(x)
}

pub fn serialize_morphism(f: &SMorphism) -> String {
    let mut s = String::from("begin morphism\n");
    s.push_str("begin sset\n");
    s.push_str(&serialize_sset(&f.source));
    s.push_str("end sset\n");
    s.push_str("begin sset\n");
    s.push_str(&serialize_sset(&f.target));
    s.push_str("end sset\n");
    for (c, e) in f.map.iter().enumerate() {
        let _ = writeln!(s, "map {c} -> {}", element_text(e));
    }
    s.push_str("end morphism\n");
    s
}

pub(crate) fn parse_morphism_body(cur: &mut Cursor) -> Result<SMorphism> {
    cur.expect("begin sset")?;
    let source = parse_sset_body(cur, Some("end sset"))?;
    cur.expect("begin sset")?;
    let target = parse_sset_body(cur, Some("end sset"))?;
    let mut map: Vec<Element> = Vec::new();
    loop {
        match cur.next_line() {
            None => return Err(perr(0, "missing `end morphism`")),
            Some((_, "end morphism")) => break,
            Some((n, l)) => {
                let toks: Vec<&str> = l.split_whitespace().collect();
                if toks.len() != 5 || toks[0] != "map" || toks[2] != "->" {
                    return Err(perr(n, "expected `map <cell> -> <cell> [vals]`"));
                }
                let from: usize = parse_num(toks[1], n, "cell id")?;
                if from != map.len() {
                    return Err(perr(n, format!("map line for cell {from} out of order")));
                }
                map.push(parse_element_tokens(toks[3], toks[4], n, &target)?);
            }
        }
    }
    if map.len() != source.n_cells() {
        return Err(perr(
            0,
            format!("{} map lines for {} cells", map.len(), source.n_cells()),
        ));
    }
    make_morphism(&source, &target, map)
}

pub fn parse_morphism(text: &str) -> Result<SMorphism> {
    let mut cur = Cursor::new(text);
    cur.expect("begin morphism")?;
    let f = parse_morphism_body(&mut cur)?;
    if let Some((n, l)) = cur.peek() {
        return Err(perr(n, format!("trailing content `{l}`")));
    }
    Ok(f)
}

/// A parsed input file: a bare object or a morphism block.
pub enum Input {
    Object(Arc<FiniteSSet>),
    Morphism(SMorphism),
}

pub fn parse_input(text: &str) -> Result<Input> {
    let cur = Cursor::new(text);
    match cur.peek() {
        Some((_, "begin morphism")) => Ok(Input::Morphism(parse_morphism(text)?)),
        _ => Ok(Input::Object(parse_sset(text)?)),
    }
}

fn family_name(f: FillFamily) -> &'static str {
    match f {
        FillFamily::Horn => "horn",
        FillFamily::Cycle => "cycle",
    }
}

/// One-way audit form of a certificate: the certified morphism, the
/// family and bound, and every table entry as
/// `entry <family> <dim> <k> top <elt>;... bottom <elt> fill <elt>`.
pub fn serialize_certificate(cert: &FillerCertificate) -> String {
    let mut s = String::from("begin certificate\n");
    let _ = writeln!(s, "family {}", family_name(cert.family));
    let _ = writeln!(s, "bound {}", cert.bound);
    s.push_str(&serialize_morphism(&cert.morphism));
    for (key, fill) in &cert.table {
        let tops: Vec<String> = key.top.iter().map(element_text).collect();
        let _ = writeln!(
            s,
            "entry {} {} {} top {} bottom {} fill {}",
            family_name(key.family),
            key.dim,
            key.k,
            tops.join(";"),
            element_text(&key.bottom),
            element_text(fill),
        );
    }
    s.push_str("end certificate\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::product;
    use crate::lifting::kan_certificate;
    use crate::simplex::MapKind;
    use crate::sset::{cycle, discrete, horn, simplex, to_point};

    #[test]
    fn golden_triangle() {
        let want = "\
cell 0 dim 0
cell 1 dim 0
cell 2 dim 0
cell 3 dim 1
cell 4 dim 1
cell 5 dim 1
cell 6 dim 2
face 3 0 -> 1 [0]
face 3 1 -> 0 [0]
face 4 0 -> 2 [0]
face 4 1 -> 0 [0]
face 5 0 -> 2 [0]
face 5 1 -> 1 [0]
face 6 0 -> 5 [0,1]
face 6 1 -> 4 [0,1]
face 6 2 -> 3 [0,1]
";
        assert_eq!(serialize_sset(&simplex(2)), want);
    }

    #[test]
    fn sset_round_trip() {
        for x in [
            simplex(3),
            discrete(4),
            cycle(3).0,
            horn(2, 0).unwrap().0,
            product(&simplex(1), &simplex(1)).object,
        ] {
            let text = serialize_sset(&x);
            let back = parse_sset(&text).unwrap();
            assert_eq!(*back, *x);
            assert_eq!(serialize_sset(&back), text, "text fixed point");
        }
    }

    #[test]
    fn morphism_round_trip() {
        let (_, incl) = cycle(2);
        for f in [incl, to_point(&simplex(2)), horn(3, 1).unwrap().1] {
            let text = serialize_morphism(&f);
            let back = parse_morphism(&text).unwrap();
            assert_eq!(back, f);
            assert_eq!(serialize_morphism(&back), text);
        }
    }

    #[test]
    fn simplex_map_round_trip() {
        for m in 0..=3u8 {
            for n in 0..=3u8 {
                for f in crate::simplex::enumerate_maps(m, n, MapKind::All) {
                    let text = format_simplex_map(&f);
                    assert_eq!(parse_simplex_map(&text).unwrap(), f);
                }
            }
        }
    }

    #[test]
    fn malformed_face_reports_line() {
        let text = "cell 0 dim 0\ncell 1 dim 1\nface 1 0 -> 0 [0]\nface 1 1 -> 9 [0]\n";
        match parse_sset(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn incoherent_table_is_semantic_not_parse() {
        // Well-formed text whose face count is wrong for the dimension.
        let text = "cell 0 dim 0\ncell 1 dim 1\nface 1 0 -> 0 [0]\n";
        match parse_sset(text) {
            Err(Error::Parse { .. }) => {}
            other => panic!("face-count mismatch should be caught: {other:?}"),
        }
    }

    #[test]
    fn input_dispatch() {
        let x = simplex(1);
        assert!(matches!(
            parse_input(&serialize_sset(&x)).unwrap(),
            Input::Object(_)
        ));
        assert!(matches!(
            parse_input(&serialize_morphism(&to_point(&x))).unwrap(),
            Input::Morphism(_)
        ));
    }

    #[test]
    fn certificate_serializes_with_entries() {
        let f = to_point(&discrete(2));
        let cert = kan_certificate(&f, 1).certified();
        let text = serialize_certificate(&cert);
        assert!(text.starts_with("begin certificate\nfamily horn\nbound 1\n"));
        assert!(text.contains("entry horn"));
        assert!(text.ends_with("end certificate\n"));
    }
}
