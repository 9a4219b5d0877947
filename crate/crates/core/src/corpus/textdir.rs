use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::Label;

/// A raw document read from a directory-per-class corpus.
#[derive(Clone, Debug)]
pub struct RawDocument {
    pub id: usize,
    pub class: String,
    pub path: PathBuf,
    pub text: String,
    pub label: Label,
}

fn sorted_entries(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut entries = fs::read_dir(dir)
        .map_err(|e| Error::Layout {
            path: dir.to_path_buf(),
            message: e.to_string(),
        })?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<Vec<_>>>()?;
    entries.sort();
    Ok(entries)
}

/// Reads `root/<class>/<file>` documents.
///
/// `positive` names the +1 class; every other class is -1 (one-vs-rest).
/// When omitted, a two-class corpus takes the lexicographically last class
/// name as positive (`ham`/`spam`, `neg`/`pos`). Ids follow sorted class then
/// sorted file name order.
pub fn load_text_dir(root: &Path, positive: Option<&str>) -> Result<Vec<RawDocument>> {
    let layout_err = |message: String| Error::Layout {
        path: root.to_path_buf(),
        message,
    };
    let classes: Vec<PathBuf> = sorted_entries(root)?.into_iter().filter(|p| p.is_dir()).collect();
    if classes.len() < 2 {
        return Err(layout_err(format!(
            "expected a directory-per-class layout with at least two class directories, found {}",
            classes.len()
        )));
    }
    let names: Vec<String> = classes
        .iter()
        .map(|p| p.file_name().unwrap_or_default().to_string_lossy().into_owned())
        .collect();
    let positive = match positive {
        Some(p) if names.iter().any(|n| n == p) => p.to_string(),
        Some(p) => return Err(layout_err(format!("positive class {p:?} not among {names:?}"))),
        None if names.len() == 2 => names[1].clone(),
        None => {
            return Err(layout_err(format!(
                "{} classes found ({names:?}); name the positive class",
                names.len()
            )))
        }
    };

    let mut docs = Vec::new();
    for (dir, class) in classes.iter().zip(&names) {
        let files: Vec<PathBuf> = sorted_entries(dir)?.into_iter().filter(|p| p.is_file()).collect();
        if files.is_empty() {
            return Err(Error::Layout {
                path: dir.clone(),
                message: "class directory contains no files".into(),
            });
        }
        let label = if *class == positive { Label::Pos } else { Label::Neg };
        for path in files {
            let text = String::from_utf8_lossy(&fs::read(&path)?).into_owned();
            docs.push(RawDocument {
                id: docs.len(),
                class: class.clone(),
                path,
                text,
                label,
            });
        }
    }
    Ok(docs)
}
