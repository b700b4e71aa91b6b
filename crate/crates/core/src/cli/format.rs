//! Line-oriented text format for ROABP, commutative ROABP and
//! set-multilinear instances.
//!
//! ```text
//! roabp-instance v1
//! kind roabp | commutative | setml
//! prime <p>
//! n <n>
//! # roabp and commutative:
//! d <d>
//! w <w>
//! order <pi(1)> ... <pi(n)>        1-based; layer i reads x_{pi(i)}
//! u <w values>                     commutative only
//! layer <i> <rows> <cols>          i = 1..n
//! deg <e>                          e = 0..d, then <rows> lines of <cols> values
//! t <w values>                     commutative only
//! # setml:
//! k <k>
//! blocks <q>
//! block <j> <vars...>              j = 1..q, 1-based variables
//! form <i> <j> <constant> <coeffs...>   i = 1..k, j = 1..q, coeffs follow block j
//! end
//! ```
//!
//! `#` starts a comment. Values are integers, reduced mod the prime. The
//! serializer emits the canonical form: no comments, every degree block
//! present, values in `[0, p)`.

use std::fmt::Write as _;

use crate::algebra::{FieldElem, Matrix, PrimeField, SparseMultiPoly};
use crate::error::{Error, Result};
use crate::roabp::{AffineForm, Layer, MatrixRoabp, Roabp, SetMultilinearCircuit};

pub const HEADER: &str = "roabp-instance v1";

#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Roabp(Roabp),
    Commutative(MatrixRoabp),
    Setml(SetMultilinearCircuit),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Roabp(_) => "roabp",
            Instance::Commutative(_) => "commutative",
            Instance::Setml(_) => "setml",
        }
    }

    pub fn field(&self) -> PrimeField {
        match self {
            Instance::Roabp(a) => a.field(),
            Instance::Commutative(a) => a.field(),
            Instance::Setml(c) => c.field(),
        }
    }

    pub fn nvars(&self) -> usize {
        match self {
            Instance::Roabp(a) => a.nvars(),
            Instance::Commutative(a) => a.nvars(),
            Instance::Setml(c) => c.nvars(),
        }
    }

    /// Individual degree bound `d`.
    pub fn degree(&self) -> usize {
        match self {
            Instance::Roabp(a) => a.degree(),
            Instance::Commutative(a) => a.degree(),
            Instance::Setml(_) => 1,
        }
    }

    pub fn width(&self) -> usize {
        match self {
            Instance::Roabp(a) => a.width(),
            Instance::Commutative(a) => a.width(),
            Instance::Setml(c) => c.k(),
        }
    }

    pub fn eval(&self, point: &[FieldElem]) -> Result<FieldElem> {
        match self {
            Instance::Roabp(a) => a.eval(point),
            Instance::Commutative(a) => a.eval(point),
            Instance::Setml(c) => c.eval(point),
        }
    }

    pub fn expand(&self, term_cap: usize) -> Result<SparseMultiPoly> {
        match self {
            Instance::Roabp(a) => a.expand(term_cap),
            Instance::Commutative(a) => a.fold()?.expand(term_cap),
            Instance::Setml(c) => Ok(c.expand()),
        }
    }

    /// The folded ROABP. Set-multilinear circuits need singleton blocks.
    pub fn to_roabp(&self) -> Result<Roabp> {
        match self {
            Instance::Roabp(a) => Ok(a.clone()),
            Instance::Commutative(a) => a.fold(),
            Instance::Setml(c) => c.to_roabp()?.fold(),
        }
    }
}

struct Lines<'a> {
    lines: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
    last_line: usize,
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines: Vec<(usize, Vec<&str>)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| {
                (
                    i + 1,
                    l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>(),
                )
            })
            .filter(|(_, toks)| !toks.is_empty())
            .collect();
        let last_line = text.lines().count().max(1);
        Lines {
            lines,
            pos: 0,
            last_line,
        }
    }

    fn next(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        let out = self
            .lines
            .get(self.pos)
            .cloned()
            .ok_or_else(|| err(self.last_line, format!("unexpected end of input, expected {what}")))?;
        self.pos += 1;
        Ok(out)
    }

    /// A line `<keyword> <args...>`; returns the line number and the args.
    fn keyword(&mut self, kw: &str) -> Result<(usize, Vec<&'a str>)> {
        let (line, toks) = self.next(&format!("`{kw}`"))?;
        if toks[0] != kw {
            return Err(err(line, format!("expected `{kw}`, found `{}`", toks[0])));
        }
        Ok((line, toks[1..].to_vec()))
    }

    fn usize_field(&mut self, kw: &str) -> Result<(usize, usize)> {
        let (line, args) = self.keyword(kw)?;
        if args.len() != 1 {
            return Err(err(line, format!("`{kw}` takes one value")));
        }
        Ok((line, parse_usize(line, args[0])?))
    }
}

fn parse_usize(line: usize, tok: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| err(line, format!("expected a non-negative integer, found `{tok}`")))
}

fn parse_value(f: &PrimeField, line: usize, tok: &str) -> Result<FieldElem> {
    let v: i128 = tok
        .parse()
        .map_err(|_| err(line, format!("expected an integer, found `{tok}`")))?;
    let p = f.modulus() as i128;
    Ok(f.elem(v.rem_euclid(p) as u64))
}

fn parse_values(f: &PrimeField, line: usize, toks: &[&str], count: usize, what: &str) -> Result<Vec<FieldElem>> {
    if toks.len() != count {
        return Err(err(
            line,
            format!("{what}: expected {count} values, found {}", toks.len()),
        ));
    }
    toks.iter().map(|t| parse_value(f, line, t)).collect()
}

/// 1-based, space-separated variable indices into 0-based ones.
fn parse_vars(line: usize, toks: &[&str], n: usize) -> Result<Vec<usize>> {
    toks.iter()
        .map(|t| {
            let v = parse_usize(line, t)?;
            if v == 0 || v > n {
                return Err(err(line, format!("variable index {v} outside 1..={n}")));
            }
            Ok(v - 1)
        })
        .collect()
}

fn parse_layer(lines: &mut Lines, f: &PrimeField, index: usize, d: usize) -> Result<(usize, Layer<FieldElem>)> {
    let (line, args) = lines.keyword("layer")?;
    if args.len() != 3 {
        return Err(err(line, "`layer` takes an index, rows and cols"));
    }
    let i = parse_usize(line, args[0])?;
    if i != index + 1 {
        return Err(err(line, format!("expected layer {}, found layer {i}", index + 1)));
    }
    let rows = parse_usize(line, args[1])?;
    let cols = parse_usize(line, args[2])?;
    if rows == 0 || cols == 0 {
        return Err(err(line, "layer dimensions must be positive"));
    }
    let mut coeffs = Vec::with_capacity(d + 1);
    for e in 0..=d {
        let (dl, dargs) = lines.keyword("deg")?;
        if dargs.len() != 1 || parse_usize(dl, dargs[0])? != e {
            return Err(err(dl, format!("expected `deg {e}`")));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let (rl, toks) = lines.next("a matrix row")?;
            data.extend(parse_values(f, rl, &toks, cols, "matrix row")?);
        }
        coeffs.push(Matrix::new(rows, cols, data)?);
    }
    Ok((line, Layer::new(coeffs)?))
}

/// Attaches a line number to library errors raised while assembling.
fn at(line: usize, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => err(line, other.to_string()),
    }
}

/// Parses an instance; `prime_override` replaces the header modulus and all
/// values are reduced modulo it.
pub fn parse(text: &str, prime_override: Option<u64>) -> Result<Instance> {
    let mut lines = Lines::new(text);
    let (hl, toks) = lines.next("the header")?;
    if toks.join(" ") != HEADER {
        return Err(err(hl, format!("expected header `{HEADER}`")));
    }
    let (kl, kind) = lines.keyword("kind")?;
    let kind = match kind.as_slice() {
        [k] => *k,
        _ => return Err(err(kl, "`kind` takes one value")),
    };
    let (pl, p) = lines.usize_field("prime")?;
    let f = PrimeField::new(prime_override.unwrap_or(p as u64)).map_err(|e| at(pl, e))?;
    let (nl, n) = lines.usize_field("n")?;
    if n == 0 {
        return Err(err(nl, "n must be at least 1"));
    }
    let inst = match kind {
        "roabp" | "commutative" => {
            let (_, d) = lines.usize_field("d")?;
            let (wl, w) = lines.usize_field("w")?;
            if w == 0 {
                return Err(err(wl, "w must be at least 1"));
            }
            let (ol, otoks) = lines.keyword("order")?;
            if otoks.len() != n {
                return Err(err(ol, format!("order lists {} variables, expected {n}", otoks.len())));
            }
            let order = parse_vars(ol, &otoks, n)?;
            let mut seen = vec![false; n];
            for &v in &order {
                if std::mem::replace(&mut seen[v], true) {
                    return Err(err(ol, format!("order repeats x{}", v + 1)));
                }
            }
            let u = if kind == "commutative" {
                let (ul, utoks) = lines.keyword("u")?;
                Some(parse_values(&f, ul, &utoks, w, "u")?)
            } else {
                None
            };
            let mut layers = Vec::with_capacity(n);
            let mut first_line = ol;
            for i in 0..n {
                let (line, layer) = parse_layer(&mut lines, &f, i, d)?;
                if i == 0 {
                    first_line = line;
                }
                layers.push(layer);
            }
            match u {
                Some(u) => {
                    let (tl, ttoks) = lines.keyword("t")?;
                    let t = parse_values(&f, tl, &ttoks, w, "t")?;
                    Instance::Commutative(MatrixRoabp::new(f, d, order, u, layers, t).map_err(|e| at(first_line, e))?)
                }
                None => Instance::Roabp(Roabp::new(f, w, d, order, layers).map_err(|e| at(first_line, e))?),
            }
        }
        "setml" => {
            let (kl, k) = lines.usize_field("k")?;
            if k == 0 {
                return Err(err(kl, "k must be at least 1"));
            }
            let (bl, q) = lines.usize_field("blocks")?;
            let mut blocks = Vec::with_capacity(q);
            for j in 0..q {
                let (line, args) = lines.keyword("block")?;
                if args.is_empty() || parse_usize(line, args[0])? != j + 1 {
                    return Err(err(line, format!("expected `block {}`", j + 1)));
                }
                blocks.push(parse_vars(line, &args[1..], n)?);
            }
            let mut forms = Vec::with_capacity(k);
            for i in 0..k {
                let mut row = Vec::with_capacity(q);
                for (j, block) in blocks.iter().enumerate() {
                    let (line, args) = lines.keyword("form")?;
                    if args.len() < 2 || parse_usize(line, args[0])? != i + 1 || parse_usize(line, args[1])? != j + 1 {
                        return Err(err(line, format!("expected `form {} {}`", i + 1, j + 1)));
                    }
                    let vals = parse_values(&f, line, &args[2..], block.len() + 1, "form")?;
                    row.push(AffineForm::new(vals[0], vals[1..].to_vec()));
                }
                forms.push(row);
            }
            Instance::Setml(SetMultilinearCircuit::new(f, n, blocks, forms).map_err(|e| at(bl, e))?)
        }
        other => return Err(err(kl, format!("unknown kind `{other}`"))),
    };
    let (el, toks) = lines.next("`end`")?;
    if toks != ["end"] {
        return Err(err(el, format!("expected `end`, found `{}`", toks.join(" "))));
    }
    if let Ok((line, _)) = lines.next("") {
        return Err(err(line, "content after `end`"));
    }
    Ok(inst)
}

fn join(vals: impl IntoIterator<Item = impl ToString>) -> String {
    vals.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn write_layers(out: &mut String, layers: &[Layer<FieldElem>]) {
    for (i, layer) in layers.iter().enumerate() {
        let (rows, cols) = layer.dims();
        let _ = writeln!(out, "layer {} {rows} {cols}", i + 1);
        for (e, c) in layer.coeffs().iter().enumerate() {
            let _ = writeln!(out, "deg {e}");
            for r in 0..rows {
                let _ = writeln!(out, "{}", join(c.row(r).iter().map(|x| x.value())));
            }
        }
    }
}

fn write_header(out: &mut String, kind: &str, p: u64, n: usize) {
    let _ = writeln!(out, "{HEADER}\nkind {kind}\nprime {p}\nn {n}");
}

pub fn serialize(inst: &Instance) -> String {
    let mut out = String::new();
    write_header(&mut out, inst.kind(), inst.field().modulus(), inst.nvars());
    match inst {
        Instance::Roabp(a) => {
            let _ = writeln!(out, "d {}\nw {}", a.degree(), a.width());
            let _ = writeln!(out, "order {}", join(a.order().iter().map(|v| v + 1)));
            write_layers(&mut out, a.layers());
        }
        Instance::Commutative(a) => {
            let _ = writeln!(out, "d {}\nw {}", a.degree(), a.width());
            let _ = writeln!(out, "order {}", join(a.order().iter().map(|v| v + 1)));
            let _ = writeln!(out, "u {}", join(a.u().iter().map(|x| x.value())));
            write_layers(&mut out, a.layers());
            let _ = writeln!(out, "t {}", join(a.t().iter().map(|x| x.value())));
        }
        Instance::Setml(c) => {
            let _ = writeln!(out, "k {}\nblocks {}", c.k(), c.q());
            for (j, b) in c.blocks().iter().enumerate() {
                let _ = writeln!(out, "block {} {}", j + 1, join(b.iter().map(|v| v + 1)));
            }
            for (i, row) in c.forms().iter().enumerate() {
                for (j, form) in row.iter().enumerate() {
                    let vals = std::iter::once(form.constant).chain(form.coeffs.iter().copied());
                    let _ = writeln!(out, "form {} {} {}", i + 1, j + 1, join(vals.map(|x| x.value())));
                }
            }
        }
    }
    out.push_str("end\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# x1 * x2 over Z_7
roabp-instance v1
kind roabp
prime 7
n 2
d 1
w 1
order 2 1
layer 1 1 1
deg 0
0
deg 1
1   # coefficient of x2
layer 2 1 1
deg 0
0
deg 1
-6
end
";

    #[test]
    fn parses_and_canonicalizes() {
        let inst = parse(SAMPLE, None).unwrap();
        let f = inst.field();
        assert_eq!(inst.eval(&[f.elem(3), f.elem(4)]).unwrap(), f.elem(5));
        let text = serialize(&inst);
        assert!(text.starts_with("roabp-instance v1\nkind roabp\nprime 7\nn 2\nd 1\nw 1\norder 2 1\n"));
        assert!(!text.contains(" -") && !text.contains("\n-"));
        assert_eq!(parse(&text, None).unwrap(), inst);
        assert_eq!(serialize(&parse(&text, None).unwrap()), text);
    }

    #[test]
    fn prime_override_reduces_values() {
        let inst = parse(SAMPLE, Some(5)).unwrap();
        assert_eq!(inst.field().modulus(), 5);
        // -6 mod 5 = 4.
        assert_eq!(inst.eval(&[inst.field().one(), inst.field().one()]).unwrap().value(), 4);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = SAMPLE.replace("-6", "x");
        assert!(matches!(parse(&bad, None), Err(Error::Parse { line: 18, .. })));
        let short = SAMPLE.replace("end\n", "");
        assert!(matches!(parse(&short, None), Err(Error::Parse { .. })));
        let bad_order = SAMPLE.replace("order 2 1", "order 2 2");
        assert!(matches!(parse(&bad_order, None), Err(Error::Parse { line: 8, .. })));
        let not_prime = SAMPLE.replace("prime 7", "prime 8");
        assert!(matches!(parse(&not_prime, None), Err(Error::Parse { line: 4, .. })));
    }
}
