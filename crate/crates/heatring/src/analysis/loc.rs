//! Source line counting: non-blank, non-comment lines per file, with
//! per-extension comment syntax.
//!
//! Known limitation, by design: comment delimiters inside string literals
//! are read as comment delimiters (`let s = "//";` miscounts). Handling that
//! would need a real lexer per language; the counts here are for effort
//! estimation, where the error is noise.

use std::collections::BTreeMap;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

/// Comment syntax for one file type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommentRules {
    /// Everything from a prefix to the end of the line is comment.
    pub line_prefixes: Vec<String>,
    /// `(open, close)` delimiter pairs for block comments.
    pub blocks: Vec<(String, String)>,
    /// Whether block comments of the same pair nest (Rust yes, C no).
    pub nested_blocks: bool,
}

impl CommentRules {
    pub fn new(line_prefixes: &[&str], blocks: &[(&str, &str)], nested_blocks: bool) -> Self {
        CommentRules {
            line_prefixes: line_prefixes.iter().map(|s| s.to_string()).collect(),
            blocks: blocks
                .iter()
                .map(|(o, c)| (o.to_string(), c.to_string()))
                .collect(),
            nested_blocks,
        }
    }

    /// `//` line comments plus `/* */` blocks.
    pub fn c_style(nested_blocks: bool) -> Self {
        CommentRules::new(&["//"], &[("/*", "*/")], nested_blocks)
    }

    /// `#` line comments only.
    pub fn hash_style() -> Self {
        CommentRules::new(&["#"], &[], false)
    }
}

/// Extension-to-rules table used by [`count_loc`].
#[derive(Debug, Clone)]
pub struct LocConfig {
    rules: BTreeMap<String, CommentRules>,
}

impl Default for LocConfig {
    fn default() -> Self {
        let mut rules = BTreeMap::new();
        let mut add = |exts: &[&str], r: CommentRules| {
            for ext in exts {
                rules.insert(ext.to_string(), r.clone());
            }
        };
        add(&["rs"], CommentRules::c_style(true));
        add(
            &["c", "h", "cc", "cpp", "cxx", "hh", "hpp", "java", "js", "ts", "go", "cs"],
            CommentRules::c_style(false),
        );
        // Chapel and Swift block comments nest.
        add(&["chpl", "swift"], CommentRules::c_style(true));
        add(&["py", "sh", "bash", "toml", "yaml", "yml"], CommentRules::hash_style());
        add(
            &["jl"],
            CommentRules::new(&["#"], &[("#=", "=#")], true),
        );
        LocConfig { rules }
    }
}

impl LocConfig {
    /// A table with no entries; pair with [`LocConfig::insert`].
    pub fn empty() -> Self {
        LocConfig {
            rules: BTreeMap::new(),
        }
    }

    /// Adds or replaces the rules for `extension` (without the dot).
    pub fn insert(&mut self, extension: &str, rules: CommentRules) -> &mut Self {
        self.rules.insert(extension.to_string(), rules);
        self
    }

    pub fn rules_for(&self, extension: &str) -> Option<&CommentRules> {
        self.rules.get(extension)
    }
}

/// Per-file tally. A line with both code and comment counts as code; a line
/// is blank only if nothing but whitespace is on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileCount {
    pub path: PathBuf,
    pub code: u64,
    pub comment: u64,
    pub blank: u64,
}

/// A file the walk found but could not count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedFile {
    pub path: PathBuf,
    pub reason: String,
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct LocReport {
    /// Counted files in deterministic (sorted-path) order.
    pub files: Vec<FileCount>,
    /// Files and directories that could not be read; never fatal.
    pub skipped: Vec<SkippedFile>,
}

impl LocReport {
    pub fn total_code(&self) -> u64 {
        self.files.iter().map(|f| f.code).sum()
    }

    pub fn total_comment(&self) -> u64 {
        self.files.iter().map(|f| f.comment).sum()
    }

    pub fn total_blank(&self) -> u64 {
        self.files.iter().map(|f| f.blank).sum()
    }
}

#[derive(Debug, Error)]
pub enum LocError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: io::Error,
    },
    #[error("{path}: no counting rules for extension `{extension}`")]
    NoRules { path: PathBuf, extension: String },
    #[error("{path}: file has no extension to pick rules by")]
    NoExtension { path: PathBuf },
}

/// Counts `root` (a file, or a directory walked recursively). Directory
/// entries whose names start with `.` and build-output `target` directories
/// are not entered; files with extensions absent from `config` are ignored;
/// unreadable files are reported in the result, not errors.
pub fn count_loc(root: &Path, config: &LocConfig) -> Result<LocReport, LocError> {
    let meta = std::fs::metadata(root).map_err(|source| LocError::Io {
        path: root.to_path_buf(),
        source,
    })?;
    let mut report = LocReport::default();
    if meta.is_dir() {
        walk(root, config, &mut report);
    } else {
        // An explicitly named file must be countable; silently ignoring it
        // would make "count this file" report zero files.
        let extension = root
            .extension()
            .and_then(|e| e.to_str())
            .ok_or_else(|| LocError::NoExtension {
                path: root.to_path_buf(),
            })?;
        let rules = config
            .rules_for(extension)
            .ok_or_else(|| LocError::NoRules {
                path: root.to_path_buf(),
                extension: extension.to_string(),
            })?;
        match count_file(root, rules) {
            Ok(count) => report.files.push(count),
            Err(e) => report.skipped.push(SkippedFile {
                path: root.to_path_buf(),
                reason: e.to_string(),
            }),
        }
    }
    Ok(report)
}

fn walk(dir: &Path, config: &LocConfig, report: &mut LocReport) {
    let entries = match std::fs::read_dir(dir) {
        Ok(entries) => entries,
        Err(e) => {
            report.skipped.push(SkippedFile {
                path: dir.to_path_buf(),
                reason: e.to_string(),
            });
            return;
        }
    };
    let mut paths: Vec<PathBuf> = Vec::new();
    for entry in entries {
        match entry {
            Ok(entry) => paths.push(entry.path()),
            Err(e) => report.skipped.push(SkippedFile {
                path: dir.to_path_buf(),
                reason: e.to_string(),
            }),
        }
    }
    paths.sort();
    for path in paths {
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if name.starts_with('.') || name == "target" {
            continue;
        }
        if path.is_dir() {
            walk(&path, config, report);
            continue;
        }
        let Some(rules) = path
            .extension()
            .and_then(|e| e.to_str())
            .and_then(|e| config.rules_for(e))
        else {
            continue;
        };
        match count_file(&path, rules) {
            Ok(count) => report.files.push(count),
            Err(e) => report.skipped.push(SkippedFile {
                path: path.clone(),
                reason: e.to_string(),
            }),
        }
    }
}

/// Counts one file under the given rules.
pub fn count_file(path: &Path, rules: &CommentRules) -> io::Result<FileCount> {
    let text = std::fs::read_to_string(path)?;
    let (code, comment, blank) = classify_lines(&text, rules);
    Ok(FileCount {
        path: path.to_path_buf(),
        code,
        comment,
        blank,
    })
}

/// The counting core: `(code, comment, blank)` line totals for `text`.
pub fn classify_lines(text: &str, rules: &CommentRules) -> (u64, u64, u64) {
    let mut code = 0u64;
    let mut comment = 0u64;
    let mut blank = 0u64;
    // Inside a block comment this holds (pair index, nesting depth).
    let mut block: Option<(usize, usize)> = None;

    for line in text.lines() {
        let mut has_code = false;
        let mut has_comment = false;
        let mut pos = 0;

        while pos < line.len() {
            let rest = &line[pos..];
            if let Some((pair, depth)) = block {
                has_comment = true;
                let (open, close) = (&rules.blocks[pair].0, &rules.blocks[pair].1);
                let close_at = rest.find(close.as_str());
                let open_at = if rules.nested_blocks {
                    rest.find(open.as_str())
                } else {
                    None
                };
                match (open_at, close_at) {
                    (Some(o), Some(c)) if o < c => {
                        block = Some((pair, depth + 1));
                        pos += o + open.len();
                    }
                    (_, Some(c)) => {
                        block = if depth > 1 { Some((pair, depth - 1)) } else { None };
                        pos += c + close.len();
                    }
                    (Some(o), None) => {
                        block = Some((pair, depth + 1));
                        pos += o + open.len();
                    }
                    (None, None) => pos = line.len(),
                }
                continue;
            }
            // Outside any block: the longest token starting here wins, so a
            // block opener like `#=` beats a line prefix like `#`.
            let mut token: Option<(usize, Option<usize>)> = None; // (len, block pair)
            for prefix in &rules.line_prefixes {
                if rest.starts_with(prefix.as_str())
                    && token.is_none_or(|(len, _)| prefix.len() > len)
                {
                    token = Some((prefix.len(), None));
                }
            }
            for (i, (open, _)) in rules.blocks.iter().enumerate() {
                if rest.starts_with(open.as_str())
                    && token.is_none_or(|(len, _)| open.len() > len)
                {
                    token = Some((open.len(), Some(i)));
                }
            }
            match token {
                Some((_, None)) => {
                    // Line comment swallows the rest of the line.
                    has_comment = true;
                    pos = line.len();
                }
                Some((len, Some(pair))) => {
                    has_comment = true;
                    block = Some((pair, 1));
                    pos += len;
                }
                None => {
                    let ch = rest.chars().next().expect("pos < len");
                    if !ch.is_whitespace() {
                        has_code = true;
                    }
                    pos += ch.len_utf8();
                }
            }
        }

        if has_code {
            code += 1;
        } else if has_comment {
            comment += 1;
        } else {
            blank += 1;
        }
    }
    (code, comment, blank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rust() -> CommentRules {
        CommentRules::c_style(true)
    }

    #[test]
    fn rust_fixture_counts_by_hand() {
        let text = "\
// leading comment
fn main() {
    let x = 1; // trailing comment still makes this a code line

    /* block
       continues */
    println!(\"{x}\");
}
";
        // code: fn main, let x, println, closing brace = 4
        // comment: leading, block open, block close = 3
        // blank: 1
        assert_eq!(classify_lines(text, &rust()), (4, 3, 1));
    }

    #[test]
    fn nested_blocks_stay_comments_until_fully_closed() {
        let text = "\
/* outer
/* inner */
still inside the outer block */
fn after() {}
";
        assert_eq!(classify_lines(text, &rust()), (1, 3, 0));
    }

    #[test]
    fn unnested_rules_close_at_the_first_terminator() {
        let text = "\
/* outer
/* inner */
code_again();
";
        assert_eq!(classify_lines(text, &CommentRules::c_style(false)), (1, 2, 0));
    }

    #[test]
    fn code_after_a_block_close_counts() {
        let text = "/* c */ x += 1;\n";
        assert_eq!(classify_lines(text, &rust()), (1, 0, 0));
    }

    #[test]
    fn inline_block_between_code_counts_once_as_code() {
        let text = "a(); /* note */ b();\n";
        assert_eq!(classify_lines(text, &rust()), (1, 0, 0));
    }

    #[test]
    fn python_fixture() {
        let text = "\
# a comment
def f():

    return 1  # tail
";
        assert_eq!(
            classify_lines(text, &CommentRules::hash_style()),
            (2, 1, 1)
        );
    }

    #[test]
    fn julia_block_opener_outranks_line_prefix() {
        let rules = CommentRules::new(&["#"], &[("#=", "=#")], true);
        let text = "\
#= spans
lines =#
x = 1
# plain
";
        assert_eq!(classify_lines(&text, &rules), (1, 3, 0));
    }

    #[test]
    fn whitespace_only_lines_are_blank() {
        assert_eq!(classify_lines("   \n\t\n", &rust()), (0, 0, 2));
        assert_eq!(classify_lines("", &rust()), (0, 0, 0));
    }

    #[test]
    fn string_literal_limitation_is_what_it_is() {
        // Documented miscount: the delimiter inside the string starts a
        // "comment". Both lines still count as code (code before the token),
        // but the second line shows the block swallowing real code.
        let text = "let s = \"/*\";\nlet t = 1;\nlet u = \"*/\";\n";
        let (code, comment, blank) = classify_lines(text, &rust());
        assert_eq!((code, comment, blank), (2, 1, 0));
    }

    #[test]
    fn walks_directories_deterministically_and_skips_noise() {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path();
        std::fs::create_dir(root.join("sub")).unwrap();
        std::fs::create_dir(root.join(".git")).unwrap();
        std::fs::create_dir(root.join("target")).unwrap();
        std::fs::write(root.join("b.rs"), "fn b() {}\n").unwrap();
        std::fs::write(root.join("a.rs"), "// only comments\n").unwrap();
        std::fs::write(root.join("sub/c.py"), "x = 1\n").unwrap();
        std::fs::write(root.join("notes.txt"), "not counted\n").unwrap();
        std::fs::write(root.join(".hidden.rs"), "fn hidden() {}\n").unwrap();
        std::fs::write(root.join("target/gen.rs"), "fn gen() {}\n").unwrap();

        let report = count_loc(root, &LocConfig::default()).unwrap();
        let names: Vec<_> = report
            .files
            .iter()
            .map(|f| f.path.file_name().unwrap().to_str().unwrap().to_string())
            .collect();
        assert_eq!(names, vec!["a.rs", "b.rs", "c.py"]);
        assert_eq!(report.total_code(), 2);
        assert_eq!(report.total_comment(), 1);
        assert!(report.skipped.is_empty());

        let again = count_loc(root, &LocConfig::default()).unwrap();
        assert_eq!(report, again);
    }

    #[test]
    fn unreadable_files_are_reported_not_fatal() {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path();
        std::fs::write(root.join("good.rs"), "fn ok() {}\n").unwrap();
        // Invalid UTF-8 is unreadable as text.
        std::fs::write(root.join("bad.rs"), [0xFF, 0xFE, 0x00, 0x41]).unwrap();

        let report = count_loc(root, &LocConfig::default()).unwrap();
        assert_eq!(report.files.len(), 1);
        assert_eq!(report.skipped.len(), 1);
        assert!(report.skipped[0].path.ends_with("bad.rs"));
    }

    #[test]
    fn single_file_roots_work_and_unknown_ones_error() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("solo.rs");
        std::fs::write(&file, "fn solo() {}\n// note\n").unwrap();
        let report = count_loc(&file, &LocConfig::default()).unwrap();
        assert_eq!(report.total_code(), 1);
        assert_eq!(report.total_comment(), 1);

        let odd = dir.path().join("data.xyz");
        std::fs::write(&odd, "???\n").unwrap();
        assert!(matches!(
            count_loc(&odd, &LocConfig::default()),
            Err(LocError::NoRules { .. })
        ));
        let bare = dir.path().join("README");
        std::fs::write(&bare, "hi\n").unwrap();
        assert!(matches!(
            count_loc(&bare, &LocConfig::default()),
            Err(LocError::NoExtension { .. })
        ));
    }

    #[test]
    fn custom_rules_can_be_installed() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("q.pseudo");
        std::fs::write(&file, ";; comment\nreal line\n").unwrap();
        let mut config = LocConfig::empty();
        config.insert("pseudo", CommentRules::new(&[";;"], &[], false));
        let report = count_loc(&file, &config).unwrap();
        assert_eq!(report.total_code(), 1);
        assert_eq!(report.total_comment(), 1);
    }
}
