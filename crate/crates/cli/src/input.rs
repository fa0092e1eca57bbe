//! Loading spec documents. An input path is a single spec file, a corpus file holding
//! several documents separated by lines reading `---`, or a directory whose `.spec`
//! files are read in name order.

use std::path::Path;

use schurmult::format::{parse_document, SpecDocument};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct NamedDocument {
    pub id: String,
    pub doc: SpecDocument,
}

pub fn load(path: &Path) -> Result<Vec<NamedDocument>, CliError> {
    if path.is_dir() {
        let mut files: Vec<_> = std::fs::read_dir(path)
            .map_err(|e| CliError::io(path, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "spec"))
            .collect();
        files.sort();
        if files.is_empty() {
            return Err(CliError::precondition(format!("no .spec files in {}", path.display())));
        }
        let mut out = Vec::new();
        for f in files {
            out.extend(load_file(&f)?);
        }
        return Ok(out);
    }
    load_file(path)
}

fn load_file(path: &Path) -> Result<Vec<NamedDocument>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "input".into());
    parse_documents(&text, &stem, path)
}

/// Splits `text` on `---` lines and parses each nonblank chunk. Ids are `stem` for a
/// single document and `stem#i` (1-based) otherwise. Input with no document at all is
/// a parse error.
pub fn parse_documents(text: &str, stem: &str, path: &Path) -> Result<Vec<NamedDocument>, CliError> {
    let mut chunks: Vec<(usize, String)> = vec![(0, String::new())];
    for (i, line) in text.lines().enumerate() {
        if line.trim() == "---" {
            chunks.push((i + 1, String::new()));
        } else {
            let chunk = &mut chunks.last_mut().expect("never empty").1;
            chunk.push_str(line);
            chunk.push('\n');
        }
    }
    let nonblank: Vec<_> = chunks.into_iter().filter(|(_, c)| has_content(c)).collect();
    if nonblank.is_empty() {
        return Err(CliError::from_core_in(parse_document("").unwrap_err(), path, 0));
    }
    let single = nonblank.len() == 1;
    nonblank
        .into_iter()
        .enumerate()
        .map(|(i, (offset, chunk))| {
            let doc = parse_document(&chunk).map_err(|e| CliError::from_core_in(e, path, offset))?;
            let id = if single {
                stem.to_string()
            } else {
                format!("{stem}#{}", i + 1)
            };
            Ok(NamedDocument { id, doc })
        })
        .collect()
}

fn has_content(chunk: &str) -> bool {
    chunk
        .lines()
        .any(|l| !l.split('#').next().unwrap_or("").trim().is_empty())
}
