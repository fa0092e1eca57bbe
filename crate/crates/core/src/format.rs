//! Plain-text spec files for block matrices, Toeplitz data and symbols.
//!
//! ```text
//! # comments run to the end of the line
//! kind = dense                 # dense | toeplitz | symbol
//! d = 2
//! N = 3                        # required for dense, optional otherwise
//! structure = upper_triangular # dense only: dense | toeplitz | upper_triangular | banded(lo..hi)
//! block (1,2) = [1+2i, 0; 0, -0.5i]
//!
//! kind = toeplitz
//! d = 1
//! band = -1..2                 # optional; defaults to the span of the coefficients
//! coeff -1 = [0.5]
//! ```
//!
//! Blocks are row-major, rows separated by `;` and entries by `,`. A complex entry is
//! `a`, `bi`, `a+bi` or `a-bi` with `a`, `b` decimal floats (`i` alone means `1i`).
//! Header keys may appear once each and must precede the entries. Positions are
//! 1-based. Unlisted blocks and coefficients are zero. Writers print every float in
//! shortest round-trip form, so write-then-parse reproduces the input exactly.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;

use crate::block::OperatorBlock;
use crate::error::{Error, Result};
use crate::matrix::{BlockMatrix, StructureTag};
use crate::symbol::SymbolPolynomial;
use crate::toeplitz::ToeplitzSpec;

#[derive(Debug, Clone, PartialEq)]
pub enum SpecDocument {
    Dense(BlockMatrix),
    Toeplitz {
        spec: ToeplitzSpec,
        size: Option<usize>,
    },
    Symbol {
        symbol: SymbolPolynomial,
        size: Option<usize>,
    },
}

impl SpecDocument {
    pub fn dim(&self) -> usize {
        match self {
            SpecDocument::Dense(m) => m.dim(),
            SpecDocument::Toeplitz { spec, .. } => spec.dim(),
            SpecDocument::Symbol { symbol, .. } => symbol.dim(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SpecDocument::Dense(_) => "dense",
            SpecDocument::Toeplitz { .. } => "toeplitz",
            SpecDocument::Symbol { .. } => "symbol",
        }
    }

    /// The matrix at truncation size `size`, falling back to the size in the file. A
    /// dense matrix only realizes at its own size.
    pub fn realize(&self, size: Option<usize>) -> Result<BlockMatrix> {
        let pick = |own: Option<usize>| {
            size.or(own)
                .filter(|&n| n >= 1)
                .ok_or_else(|| Error::Precondition("truncation size N is required".into()))
        };
        match self {
            SpecDocument::Dense(m) => match size {
                Some(n) if n != m.size() => Err(Error::SizeMismatch {
                    expected: m.size(),
                    actual: n,
                }),
                _ => Ok(m.clone()),
            },
            SpecDocument::Toeplitz { spec, size: own } => Ok(spec.realize(pick(*own)?)),
            SpecDocument::Symbol { symbol, size: own } => Ok(symbol.to_toeplitz().realize(pick(*own)?)),
        }
    }

    /// The symbol behind a Toeplitz or symbol document.
    pub fn symbol(&self) -> Option<SymbolPolynomial> {
        match self {
            SpecDocument::Dense(_) => None,
            SpecDocument::Toeplitz { spec, .. } => Some(SymbolPolynomial::from_toeplitz(spec)),
            SpecDocument::Symbol { symbol, .. } => Some(symbol.clone()),
        }
    }
}

/// Position-tracking cursor over one line. Columns are 1-based character offsets.
struct Cursor<'a> {
    line: usize,
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(line: usize, src: &'a str) -> Self {
        Self {
            line,
            chars: src.char_indices().collect(),
            pos: 0,
            src,
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::parse(self.line, self.column(), message)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.chars.len()
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.err(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.err(format!("expected `{want}`, found end of line"))),
        }
    }

    fn byte_at(&self, pos: usize) -> usize {
        self.chars.get(pos).map_or(self.src.len(), |&(b, _)| b)
    }

    /// Longest run of characters accepted by `ok`.
    fn take_while(&mut self, ok: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(&ok) {
            self.pos += 1;
        }
        &self.src[self.byte_at(start)..self.byte_at(self.pos)]
    }

    fn word(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let w = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
        if w.is_empty() {
            return Err(self.err("expected a name"));
        }
        Ok(w)
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let col = self.column();
        let start = self.pos;
        if matches!(self.peek(), Some('-' | '+')) {
            self.pos += 1;
        }
        self.take_while(|c| c.is_ascii_digit());
        let text = &self.src[self.byte_at(start)..self.byte_at(self.pos)];
        text.parse()
            .map_err(|_| Error::parse(self.line, col, format!("expected an integer, found `{text}`")))
    }

    fn positive(&mut self, what: &str) -> Result<usize> {
        let col = {
            self.skip_ws();
            self.column()
        };
        let v = self.integer()?;
        if v < 1 {
            return Err(Error::parse(
                self.line,
                col,
                format!("{what} must be positive, got {v}"),
            ));
        }
        Ok(v as usize)
    }

    /// `lo..hi`
    fn range(&mut self) -> Result<(i64, i64)> {
        let col = {
            self.skip_ws();
            self.column()
        };
        let lo = self.integer()?;
        self.expect('.')?;
        self.expect('.')?;
        let hi = self.integer()?;
        if lo > hi {
            return Err(Error::parse(self.line, col, format!("empty range {lo}..{hi}")));
        }
        Ok((lo, hi))
    }

    fn float_text(&mut self) -> &'a str {
        let start = self.pos;
        if matches!(self.peek(), Some('-' | '+')) {
            self.pos += 1;
        }
        self.take_while(|c| c.is_ascii_digit() || c == '.');
        if matches!(self.peek(), Some('e' | 'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some('-' | '+')) {
                self.pos += 1;
            }
            if self.take_while(|c| c.is_ascii_digit()).is_empty() {
                self.pos = save;
            }
        }
        &self.src[self.byte_at(start)..self.byte_at(self.pos)]
    }

    fn number(&self, text: &str, col: usize) -> Result<f64> {
        let v: f64 = text
            .parse()
            .map_err(|_| Error::parse(self.line, col, format!("malformed number `{text}`")))?;
        if !v.is_finite() {
            return Err(Error::parse(self.line, col, format!("non-finite number `{text}`")));
        }
        Ok(v)
    }

    /// `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`.
    fn complex(&mut self) -> Result<Complex64> {
        self.skip_ws();
        let col = self.column();
        let first = self.float_text();
        if self.peek() == Some('i') {
            self.pos += 1;
            return Ok(Complex64::new(0.0, self.imag_coeff(first, col)?));
        }
        if first.is_empty() {
            return Err(self.err("expected a complex number"));
        }
        let re = self.number(first, col)?;
        if matches!(self.peek(), Some('+' | '-')) {
            let icol = self.column();
            let second = self.float_text();
            if self.peek() != Some('i') {
                return Err(self.err("expected `i` after the imaginary part"));
            }
            self.pos += 1;
            return Ok(Complex64::new(re, self.imag_coeff(second, icol)?));
        }
        Ok(Complex64::new(re, 0.0))
    }

    fn imag_coeff(&self, text: &str, col: usize) -> Result<f64> {
        match text {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            t => self.number(t, col),
        }
    }

    /// `[a, b; c, d]` for a `d x d` block.
    fn block(&mut self, d: usize) -> Result<OperatorBlock> {
        self.expect('[')?;
        let open = self.column() - 1;
        let mut rows: Vec<Vec<Complex64>> = vec![Vec::new()];
        loop {
            rows.last_mut().unwrap().push(self.complex()?);
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(';') => {
                    self.pos += 1;
                    rows.push(Vec::new());
                }
                Some(']') => {
                    self.pos += 1;
                    break;
                }
                Some(c) => return Err(self.err(format!("expected `,`, `;` or `]`, found `{c}`"))),
                None => return Err(self.err("unterminated block")),
            }
        }
        let total: usize = rows.iter().map(Vec::len).sum();
        if rows.len() != d || rows.iter().any(|r| r.len() != d) {
            return Err(Error::parse(
                self.line,
                open,
                format!(
                    "a {d}x{d} block needs {d} rows of {d} entries, got {total} entries in {} rows",
                    rows.len()
                ),
            ));
        }
        Ok(OperatorBlock::from_row_major(d, rows.concat()).expect("entries counted and finite"))
    }
}

fn parse_structure(c: &mut Cursor<'_>) -> Result<StructureTag> {
    let col = {
        c.skip_ws();
        c.column()
    };
    match c.word()? {
        "dense" => Ok(StructureTag::Dense),
        "toeplitz" => Ok(StructureTag::Toeplitz),
        "upper_triangular" => Ok(StructureTag::UpperTriangular),
        "banded" => {
            c.expect('(')?;
            let (lo, hi) = c.range()?;
            c.expect(')')?;
            Ok(StructureTag::Banded { lo, hi })
        }
        other => Err(Error::parse(c.line, col, format!("unknown structure `{other}`"))),
    }
}

#[derive(Default)]
struct Header {
    kind: Option<(&'static str, usize)>,
    d: Option<usize>,
    n: Option<usize>,
    structure: Option<(StructureTag, usize)>,
    band: Option<((i64, i64), usize)>,
    seen: BTreeSet<String>,
}

enum Entry {
    Block {
        k: i64,
        j: i64,
        block: OperatorBlock,
        line: usize,
        col: usize,
    },
    Coeff {
        l: i64,
        block: OperatorBlock,
        line: usize,
        col: usize,
    },
}

pub fn parse_document(text: &str) -> Result<SpecDocument> {
    let mut h = Header::default();
    let mut entries = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("");
        let mut c = Cursor::new(line_no, content);
        if c.at_end() {
            continue;
        }
        let key_col = c.column();
        let key = c.word()?;
        match key {
            "block" | "coeff" => {
                let kind = h
                    .kind
                    .map(|k| k.0)
                    .ok_or_else(|| c.err("`kind` must come before entries"))?;
                let d = h.d.ok_or_else(|| c.err("`d` must come before entries"))?;
                if key == "block" {
                    if kind != "dense" {
                        return Err(Error::parse(
                            line_no,
                            key_col,
                            format!("`block` entries need kind = dense, not {kind}"),
                        ));
                    }
                    c.expect('(')?;
                    let k = c.integer()?;
                    c.expect(',')?;
                    let j = c.integer()?;
                    c.expect(')')?;
                    c.expect('=')?;
                    let block = c.block(d)?;
                    entries.push(Entry::Block {
                        k,
                        j,
                        block,
                        line: line_no,
                        col: key_col,
                    });
                } else {
                    if kind == "dense" {
                        return Err(Error::parse(
                            line_no,
                            key_col,
                            "`coeff` entries need kind = toeplitz or symbol",
                        ));
                    }
                    let l = c.integer()?;
                    c.expect('=')?;
                    let block = c.block(d)?;
                    entries.push(Entry::Coeff {
                        l,
                        block,
                        line: line_no,
                        col: key_col,
                    });
                }
            }
            _ => {
                if !entries.is_empty() {
                    return Err(Error::parse(
                        line_no,
                        key_col,
                        format!("header key `{key}` after entries"),
                    ));
                }
                if !h.seen.insert(key.to_string()) {
                    return Err(Error::parse(line_no, key_col, format!("duplicate key `{key}`")));
                }
                c.expect('=')?;
                match key {
                    "kind" => {
                        let vcol = {
                            c.skip_ws();
                            c.column()
                        };
                        let kind = match c.word()? {
                            "dense" => "dense",
                            "toeplitz" => "toeplitz",
                            "symbol" => "symbol",
                            other => return Err(Error::parse(line_no, vcol, format!("unknown kind `{other}`"))),
                        };
                        h.kind = Some((kind, line_no));
                    }
                    "d" => h.d = Some(c.positive("d")?),
                    "N" => h.n = Some(c.positive("N")?),
                    "structure" => h.structure = Some((parse_structure(&mut c)?, line_no)),
                    "band" => h.band = Some((c.range()?, line_no)),
                    other => return Err(Error::parse(line_no, key_col, format!("unknown key `{other}`"))),
                }
            }
        }
        if !c.at_end() {
            return Err(c.err("unexpected trailing input"));
        }
    }

    let (kind, kind_line) = h
        .kind
        .ok_or_else(|| Error::parse(last_line.max(1), 1, "empty input: no `kind` given"))?;
    let d = h.d.ok_or_else(|| Error::parse(kind_line, 1, "missing key `d`"))?;
    match kind {
        "dense" => {
            if let Some((_, line)) = h.band {
                return Err(Error::parse(line, 1, "`band` is not a key of dense documents"));
            }
            let n = h.n.ok_or_else(|| Error::parse(kind_line, 1, "missing key `N`"))?;
            let mut m = BlockMatrix::zeros(d, n);
            let mut seen = BTreeSet::new();
            for e in entries {
                let Entry::Block { k, j, block, line, col } = e else {
                    unreachable!()
                };
                if k < 1 || j < 1 || k as usize > n || j as usize > n {
                    return Err(Error::parse(line, col, format!("position ({k},{j}) outside 1..={n}")));
                }
                if !seen.insert((k, j)) {
                    return Err(Error::parse(line, col, format!("duplicate block ({k},{j})")));
                }
                m.put(k as usize, j as usize, block.entries());
            }
            if let Some((tag, line)) = h.structure {
                m = m
                    .with_structure(tag)
                    .map_err(|e| Error::parse(line, 1, e.to_string()))?;
            }
            Ok(SpecDocument::Dense(m))
        }
        _ => {
            if let Some((_, line)) = h.structure {
                return Err(Error::parse(
                    line,
                    1,
                    format!("`structure` is not a key of {kind} documents"),
                ));
            }
            if kind == "symbol" {
                if let Some((_, line)) = h.band {
                    return Err(Error::parse(line, 1, "`band` is not a key of symbol documents"));
                }
            }
            let mut coeffs = BTreeMap::new();
            for e in entries {
                let Entry::Coeff { l, block, line, col } = e else {
                    unreachable!()
                };
                if let Some(((lo, hi), _)) = h.band {
                    if l < lo || l > hi {
                        return Err(Error::parse(
                            line,
                            col,
                            format!("coefficient {l} outside band {lo}..{hi}"),
                        ));
                    }
                }
                if coeffs.insert(l, block).is_some() {
                    return Err(Error::parse(line, col, format!("duplicate coefficient {l}")));
                }
            }
            if kind == "symbol" {
                return Ok(SpecDocument::Symbol {
                    symbol: SymbolPolynomial::new(d, coeffs)?,
                    size: h.n,
                });
            }
            let spec = match h.band {
                Some(((lo, hi), _)) => ToeplitzSpec::new(d, lo, hi, coeffs)?,
                None => ToeplitzSpec::from_coefficients(d, coeffs)?,
            };
            Ok(SpecDocument::Toeplitz { spec, size: h.n })
        }
    }
}

/// Shortest decimal that parses back to the same `f64`.
fn write_float(out: &mut String, x: f64) {
    out.push_str(&format!("{x:e}"));
}

fn write_complex(out: &mut String, z: Complex64) {
    if z.im == 0.0 && !z.im.is_sign_negative() {
        write_float(out, z.re);
        return;
    }
    write_float(out, z.re);
    if z.im.is_sign_negative() {
        out.push('-');
        write_float(out, -z.im);
    } else {
        out.push('+');
        write_float(out, z.im);
    }
    out.push('i');
}

pub fn write_block(b: &OperatorBlock) -> String {
    let d = b.dim();
    let mut out = String::from("[");
    for r in 0..d {
        if r > 0 {
            out.push_str("; ");
        }
        for c in 0..d {
            if c > 0 {
                out.push_str(", ");
            }
            write_complex(&mut out, b.get(r, c));
        }
    }
    out.push(']');
    out
}

/// Dense document listing every nonzero block.
pub fn write_matrix(m: &BlockMatrix) -> String {
    let n = m.size();
    let mut out = format!(
        "kind = dense\nd = {}\nN = {n}\nstructure = {}\n",
        m.dim(),
        m.structure()
    );
    for k in 1..=n {
        for j in 1..=n {
            if !m.block_is_zero(k, j) {
                out.push_str(&format!("block ({k},{j}) = {}\n", write_block(&m.block(k, j))));
            }
        }
    }
    out
}

pub fn write_toeplitz(spec: &ToeplitzSpec, size: Option<usize>) -> String {
    let (lo, hi) = spec.band();
    let mut out = format!("kind = toeplitz\nd = {}\n", spec.dim());
    if let Some(n) = size {
        out.push_str(&format!("N = {n}\n"));
    }
    out.push_str(&format!("band = {lo}..{hi}\n"));
    for (l, b) in spec.coefficients() {
        out.push_str(&format!("coeff {l} = {}\n", write_block(b)));
    }
    out
}

pub fn write_symbol(f: &SymbolPolynomial, size: Option<usize>) -> String {
    let mut out = format!("kind = symbol\nd = {}\n", f.dim());
    if let Some(n) = size {
        out.push_str(&format!("N = {n}\n"));
    }
    for (l, b) in f.terms() {
        out.push_str(&format!("coeff {l} = {}\n", write_block(b)));
    }
    out
}

pub fn write_document(doc: &SpecDocument) -> String {
    match doc {
        SpecDocument::Dense(m) => write_matrix(m),
        SpecDocument::Toeplitz { spec, size } => write_toeplitz(spec, *size),
        SpecDocument::Symbol { symbol, size } => write_symbol(symbol, *size),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_matrix, random_symbol, random_toeplitz_spec, seeded_rng};

    fn parse_err(text: &str) -> (usize, usize, String) {
        match parse_document(text) {
            Err(Error::Parse { line, column, message }) => (line, column, message),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn parses_a_dense_document() {
        let text = "# sample\nkind = dense\nd = 2\nN = 2\nblock (1,2) = [1+2i, 0; -i, 2.5e-1] # tail\n";
        let SpecDocument::Dense(m) = parse_document(text).unwrap() else {
            panic!()
        };
        let b = m.block(1, 2);
        assert_eq!(b.get(0, 0), Complex64::new(1.0, 2.0));
        assert_eq!(b.get(1, 0), Complex64::new(0.0, -1.0));
        assert_eq!(b.get(1, 1), Complex64::new(0.25, 0.0));
        assert!(m.block_is_zero(1, 1));
    }

    #[test]
    fn complex_literal_forms() {
        let text = "kind = symbol\nd = 1\ncoeff 0 = [3]\ncoeff 1 = [2i]\ncoeff 2 = [i]\ncoeff 3 = [-1-1e-3i]\ncoeff 4 = [+i]\n";
        let SpecDocument::Symbol { symbol, .. } = parse_document(text).unwrap() else {
            panic!()
        };
        let v: Vec<Complex64> = (0..5).map(|l| symbol.fourier_coefficient(l).get(0, 0)).collect();
        assert_eq!(
            v,
            vec![
                Complex64::new(3.0, 0.0),
                Complex64::new(0.0, 2.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(-1.0, -1e-3),
                Complex64::new(0.0, 1.0)
            ]
        );
    }

    #[test]
    fn wrong_entry_count_is_a_parse_error() {
        let (line, col, msg) = parse_err("kind = dense\nd = 2\nN = 2\nblock (1,1) = [1, 2, 3]\n");
        assert_eq!((line, col), (4, 15));
        assert!(msg.contains("2x2"), "{msg}");
    }

    #[test]
    fn strictness() {
        assert_eq!(parse_err("kind = dense\nd = 1\nN = 1\ncolour = red\n").0, 4);
        assert!(parse_err("kind = dense\nkind = dense\n").2.contains("duplicate"));
        assert!(parse_err("").2.contains("empty input"));
        assert!(parse_err("# only a comment\n").2.contains("empty input"));
        assert!(parse_err("kind = dense\nd = 1\nN = 2\nblock (3,1) = [1]\n")
            .2
            .contains("outside"));
        assert!(
            parse_err("kind = dense\nd = 1\nN = 2\nblock (1,1) = [1]\nblock (1,1) = [2]\n")
                .2
                .contains("duplicate")
        );
        assert!(parse_err("kind = toeplitz\nd = 1\nband = 0..1\ncoeff 2 = [1]\n")
            .2
            .contains("outside band"));
        assert!(
            parse_err("kind = dense\nd = 1\nN = 2\nstructure = upper_triangular\nblock (2,1) = [1]\n")
                .2
                .contains("violated")
        );
        assert!(parse_err("kind = dense\nd = 1\nN = 1\nblock (1,1) = [1] extra\n")
            .2
            .contains("trailing"));
        assert!(parse_err("kind = dense\nd = 0\n").2.contains("positive"));
        assert!(parse_err("kind = dense\nd = 1\nN = 1\nblock (1,1) = [nan]\n")
            .2
            .contains("number"));
        assert!(parse_err("kind = symbol\nd = 1\nblock (1,1) = [1]\n")
            .2
            .contains("kind = dense"));
        assert!(parse_err("kind = dense\nd = 1\nN = 1\nblock (1,1) = [1]\nd = 2\n")
            .2
            .contains("after entries"));
    }

    #[test]
    fn round_trips_exactly() {
        let mut rng = seeded_rng(131);
        let a = random_matrix(&mut rng, 3, 4);
        assert_eq!(
            parse_document(&write_matrix(&a)).unwrap(),
            SpecDocument::Dense(a.clone())
        );
        let d2 = a.extract_diagonal(1).unwrap();
        assert_eq!(parse_document(&write_matrix(&d2)).unwrap(), SpecDocument::Dense(d2));
        let spec = random_toeplitz_spec(&mut rng, 2, -2, 1);
        let doc = SpecDocument::Toeplitz { spec, size: Some(9) };
        assert_eq!(parse_document(&write_document(&doc)).unwrap(), doc);
        let doc = SpecDocument::Symbol {
            symbol: random_symbol(&mut rng, 2, 3),
            size: None,
        };
        assert_eq!(parse_document(&write_document(&doc)).unwrap(), doc);
    }

    #[test]
    fn realization_sizes() {
        let doc = parse_document("kind = toeplitz\nd = 1\ncoeff 1 = [1]\n").unwrap();
        assert!(doc.realize(None).is_err());
        assert_eq!(doc.realize(Some(3)).unwrap().size(), 3);
        let dense = parse_document("kind = dense\nd = 1\nN = 2\n").unwrap();
        assert!(dense.realize(Some(3)).is_err());
        assert_eq!(dense.realize(Some(2)).unwrap().size(), 2);
    }
}
