//! Directories and archives share one shape: folders (and archive
//! directories) are containers, file names are values, children ordered
//! lexicographically for determinism.

use std::collections::BTreeMap;
use std::io::Cursor;
use std::path::Path;

use crate::config::FacadeOptions;
use crate::error::FxError;
use crate::rdf::{Graph, Literal};
use crate::source::ResolvedSource;
use crate::triplify::builder::{FacadeBuilder, Node};
use crate::triplify::TriplifyContext;

/// One level of a directory tree: name → file or subtree, sorted.
#[derive(Debug, Default)]
struct DirTree {
    children: BTreeMap<String, DirChild>,
}

#[derive(Debug)]
enum DirChild {
    File,
    Dir(DirTree),
}

impl DirTree {
    fn insert_path(&mut self, components: &[String], is_dir: bool) {
        if components.is_empty() {
            return;
        }
        if components.len() == 1 {
            let name = components[0].clone();
            if is_dir {
                self.children.entry(name).or_insert_with(|| DirChild::Dir(DirTree::default()));
            } else {
                self.children.entry(name).or_insert(DirChild::File);
            }
            return;
        }
        let entry = self
            .children
            .entry(components[0].clone())
            .or_insert_with(|| DirChild::Dir(DirTree::default()));
        if let DirChild::Dir(subtree) = entry {
            subtree.insert_path(&components[1..], is_dir);
        }
    }
}

fn emit_tree(builder: &mut FacadeBuilder, node: &Node, tree: &DirTree) {
    for (name, child) in &tree.children {
        match child {
            DirChild::File => builder.next_value(node, Literal::string(name)),
            DirChild::Dir(subtree) => {
                let container = builder.next_container(node);
                emit_tree(builder, &container, subtree);
            }
        }
    }
}

pub fn triplify_directory(
    src: &ResolvedSource,
    opts: &FacadeOptions,
    ctx: &TriplifyContext,
) -> Result<Graph, FxError> {
    let location = src.origin.location().ok_or_else(|| {
        FxError::InvalidConfig("directory sources require a location".into())
    })?;
    let path = Path::new(location.strip_prefix("file://").unwrap_or(location));
    let tree = read_dir_tree(path)?;

    let mut builder = FacadeBuilder::new(opts, &src.origin, &ctx.session, ctx.filter.clone())?;
    let root = builder.root();
    emit_tree(&mut builder, &root, &tree);
    Ok(builder.finish())
}

fn read_dir_tree(path: &Path) -> Result<DirTree, FxError> {
    let mut tree = DirTree::default();
    let io_err = |source: std::io::Error| FxError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut entries: Vec<(String, bool)> = Vec::new();
    for entry in std::fs::read_dir(path).map_err(io_err)? {
        let entry = entry.map_err(io_err)?;
        let name = entry.file_name().to_string_lossy().into_owned();
        // Symlinks are listed as plain names, never followed.
        let file_type = entry.file_type().map_err(io_err)?;
        entries.push((name, file_type.is_dir()));
    }
    entries.sort();
    for (name, is_dir) in entries {
        if is_dir {
            let subtree = read_dir_tree(&path.join(&name))?;
            tree.children.insert(name, DirChild::Dir(subtree));
        } else {
            tree.children.insert(name, DirChild::File);
        }
    }
    Ok(tree)
}

pub fn triplify_zip(
    src: &ResolvedSource,
    opts: &FacadeOptions,
    ctx: &TriplifyContext,
) -> Result<Graph, FxError> {
    let archive_err = |message: String| FxError::SourceSyntax {
        format: "ZIP",
        origin: src.origin_label(),
        message,
    };
    let mut archive = zip::ZipArchive::new(Cursor::new(src.bytes.as_slice()))
        .map_err(|e| archive_err(e.to_string()))?;
    let mut tree = DirTree::default();
    for i in 0..archive.len() {
        let entry = archive
            .by_index_raw(i)
            .map_err(|e| archive_err(e.to_string()))?;
        let name = entry.name().to_owned();
        let is_dir = entry.is_dir();
        insert_entry(&mut tree, &name, is_dir);
    }
    let mut builder = FacadeBuilder::new(opts, &src.origin, &ctx.session, ctx.filter.clone())?;
    let root = builder.root();
    emit_tree(&mut builder, &root, &tree);
    Ok(builder.finish())
}

pub fn triplify_tar(
    src: &ResolvedSource,
    opts: &FacadeOptions,
    ctx: &TriplifyContext,
) -> Result<Graph, FxError> {
    let archive_err = |message: String| FxError::SourceSyntax {
        format: "TAR",
        origin: src.origin_label(),
        message,
    };
    let mut archive = tar::Archive::new(src.bytes.as_slice());
    let mut tree = DirTree::default();
    for entry in archive.entries().map_err(|e| archive_err(e.to_string()))? {
        let mut entry = entry.map_err(|e| archive_err(e.to_string()))?;
        let path = entry
            .path()
            .map_err(|e| archive_err(e.to_string()))?
            .to_string_lossy()
            .into_owned();
        let is_dir = entry.header().entry_type().is_dir();
        insert_entry(&mut tree, &path, is_dir);
        // Skip over file contents without keeping them.
        std::io::copy(&mut entry, &mut std::io::sink())
            .map_err(|e| archive_err(e.to_string()))?;
    }
    let mut builder = FacadeBuilder::new(opts, &src.origin, &ctx.session, ctx.filter.clone())?;
    let root = builder.root();
    emit_tree(&mut builder, &root, &tree);
    Ok(builder.finish())
}

fn insert_entry(tree: &mut DirTree, name: &str, is_dir: bool) {
    let components: Vec<String> = name
        .split('/')
        .filter(|c| !c.is_empty() && *c != ".")
        .map(str::to_owned)
        .collect();
    tree.insert_path(&components, is_dir || name.ends_with('/'));
}
