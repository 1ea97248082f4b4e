//! LIBSVM text ingestion, label normalization and the benchmark dataset table.

use crate::error::{Error, Result};
use crate::problems::{DroParams, DroProblem, FeatureMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::io::BufRead;
use std::path::{Path, PathBuf};

/// Environment variable naming the dataset root directory.
pub const DATA_DIR_ENV: &str = "GSMM_DATA_DIR";

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    /// Rows of `(1-based index, value)` with strictly ascending indices.
    pub samples: Vec<Vec<(usize, f64)>>,
    pub labels: Vec<f64>,
    pub n_features: usize,
    /// `(raw label mapped to −1, raw label mapped to +1)` once normalized.
    pub label_map: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatasetInfo {
    pub name: &'static str,
    pub samples: usize,
    pub features: usize,
    /// File name used by the LIBSVM distribution.
    pub file: &'static str,
}

/// The nine binary benchmarks.
pub const BENCHMARKS: [DatasetInfo; 9] = [
    DatasetInfo {
        name: "a9a",
        samples: 32561,
        features: 123,
        file: "a9a",
    },
    DatasetInfo {
        name: "covtype",
        samples: 581012,
        features: 54,
        file: "covtype.libsvm.binary",
    },
    DatasetInfo {
        name: "diabetes",
        samples: 768,
        features: 8,
        file: "diabetes",
    },
    DatasetInfo {
        name: "german",
        samples: 1000,
        features: 24,
        file: "german.numer",
    },
    DatasetInfo {
        name: "gisette",
        samples: 6000,
        features: 5000,
        file: "gisette_scale",
    },
    DatasetInfo {
        name: "ijcnn1",
        samples: 141691,
        features: 22,
        file: "ijcnn1",
    },
    DatasetInfo {
        name: "mushrooms",
        samples: 8124,
        features: 112,
        file: "mushrooms",
    },
    DatasetInfo {
        name: "phishing",
        samples: 11055,
        features: 68,
        file: "phishing",
    },
    DatasetInfo {
        name: "w8a",
        samples: 49749,
        features: 300,
        file: "w8a",
    },
];

pub fn benchmark_info(name: &str) -> Option<&'static DatasetInfo> {
    BENCHMARKS.iter().find(|d| d.name == name || d.file == name)
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

type ParsedLine = (f64, Vec<(usize, f64)>);

fn parse_line(text: &str, lineno: usize) -> Result<Option<ParsedLine>> {
    let body = match text.find('#') {
        Some(k) => &text[..k],
        None => text,
    };
    let base = body.as_ptr() as usize;
    let mut tokens = body
        .split_whitespace()
        .map(|tok| (tok.as_ptr() as usize - base + 1, tok));
    let Some((col, label_tok)) = tokens.next() else {
        return Ok(None);
    };
    let label: f64 = label_tok
        .parse()
        .ok()
        .filter(|v: &f64| v.is_finite())
        .ok_or_else(|| parse_err(lineno, col, format!("non-numeric label '{label_tok}'")))?;

    let mut row = Vec::new();
    let mut last = 0usize;
    for (col, tok) in tokens {
        let (idx, val) = tok
            .split_once(':')
            .ok_or_else(|| parse_err(lineno, col, format!("expected index:value, found '{tok}'")))?;
        let idx: usize = idx
            .parse()
            .map_err(|_| parse_err(lineno, col, format!("invalid feature index '{idx}'")))?;
        if idx == 0 {
            return Err(parse_err(lineno, col, "feature indices start at 1"));
        }
        if idx <= last {
            let what = if idx == last { "duplicate" } else { "non-ascending" };
            return Err(parse_err(
                lineno,
                col,
                format!("{what} feature index {idx} after {last}"),
            ));
        }
        let v: f64 = val
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| parse_err(lineno, col, format!("invalid feature value '{val}'")))?;
        row.push((idx, v));
        last = idx;
    }
    Ok(Some((label, row)))
}

pub fn parse_libsvm<R: BufRead>(reader: R, name: &str) -> Result<Dataset> {
    let mut samples = Vec::new();
    let mut labels = Vec::new();
    let mut n_features = 0;
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        if let Some((label, row)) = parse_line(&line, k + 1)? {
            if let Some(&(j, _)) = row.last() {
                n_features = n_features.max(j);
            }
            labels.push(label);
            samples.push(row);
        }
    }
    Ok(Dataset {
        name: name.to_string(),
        samples,
        labels,
        n_features,
        label_map: None,
    })
}

pub fn parse_libsvm_str(text: &str, name: &str) -> Result<Dataset> {
    parse_libsvm(text.as_bytes(), name)
}

pub fn load_libsvm(path: &Path) -> Result<Dataset> {
    let file = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = benchmark_info(&name).map_or(name, |d| d.name.to_string());
    parse_libsvm(std::io::BufReader::new(file), &name)
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.samples.iter().map(Vec::len).sum()
    }

    /// Declares the feature dimension; it may not be below the largest index present.
    pub fn with_n_features(mut self, n: usize) -> Result<Self> {
        let max = self
            .samples
            .iter()
            .filter_map(|r| r.last().map(|e| e.0))
            .max()
            .unwrap_or(0);
        if n < max {
            return Err(Error::InvalidArgument(format!(
                "declared dimension {n} is below the largest index {max}"
            )));
        }
        self.n_features = n;
        Ok(self)
    }

    /// Distinct labels with their counts, ascending.
    pub fn label_counts(&self) -> Vec<(f64, usize)> {
        let mut sorted = self.labels.clone();
        sorted.sort_by(f64::total_cmp);
        let mut out: Vec<(f64, usize)> = Vec::new();
        for l in sorted {
            match out.last_mut() {
                Some((v, c)) if *v == l => *c += 1,
                _ => out.push((l, 1)),
            }
        }
        out
    }

    /// Deterministic subsample of `take` rows without replacement, kept in file order.
    pub fn subsample(&self, take: usize, seed: u64) -> Self {
        if take >= self.len() {
            return self.clone();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut keep = rand::seq::index::sample(&mut rng, self.len(), take).into_vec();
        keep.sort_unstable();
        Dataset {
            name: self.name.clone(),
            samples: keep.iter().map(|&i| self.samples[i].clone()).collect(),
            labels: keep.iter().map(|&i| self.labels[i]).collect(),
            n_features: self.n_features,
            label_map: self.label_map,
        }
    }

    /// First `take` rows.
    pub fn head(&self, take: usize) -> Self {
        let k = take.min(self.len());
        Dataset {
            name: self.name.clone(),
            samples: self.samples[..k].to_vec(),
            labels: self.labels[..k].to_vec(),
            n_features: self.n_features,
            label_map: self.label_map,
        }
    }

    pub fn features(&self) -> Result<FeatureMatrix> {
        let rows: Vec<Vec<(usize, f64)>> = self
            .samples
            .iter()
            .map(|r| r.iter().map(|&(j, v)| (j - 1, v)).collect())
            .collect();
        FeatureMatrix::from_sparse_rows(&rows, self.n_features)
    }

    /// Builds the robust logistic-regression problem; labels are normalized first if needed.
    pub fn to_dro(&self, params: DroParams) -> Result<DroProblem> {
        let labels = if self.labels.iter().all(|&b| b == 1.0 || b == -1.0) {
            self.labels.clone()
        } else {
            normalize_labels(self)?.labels
        };
        DroProblem::new(self.features()?, labels, params)
    }
}

/// Maps the smaller of exactly two raw labels to −1 and the larger to +1.
pub fn normalize_labels(d: &Dataset) -> Result<Dataset> {
    let counts = d.label_counts();
    if counts.len() != 2 {
        return Err(Error::Labels(format!(
            "expected exactly two distinct labels, found {}",
            counts.len()
        )));
    }
    let (lo, hi) = (counts[0].0, counts[1].0);
    let mut out = d.clone();
    out.labels = d.labels.iter().map(|&l| if l == lo { -1.0 } else { 1.0 }).collect();
    out.label_map = Some((lo, hi));
    Ok(out)
}

/// Serializes to LIBSVM text; values use the shortest exact decimal form.
pub fn to_libsvm(d: &Dataset) -> String {
    let mut out = String::new();
    for (label, row) in d.labels.iter().zip(&d.samples) {
        out.push_str(&label.to_string());
        for (j, v) in row {
            out.push(' ');
            out.push_str(&j.to_string());
            out.push(':');
            out.push_str(&v.to_string());
        }
        out.push('\n');
    }
    out
}

/// Resolves a dataset name or path: an existing path wins, then `$GSMM_DATA_DIR`,
/// then `./data`, each tried with the bare name and the LIBSVM file name.
pub fn resolve_dataset(name: &str) -> Result<PathBuf> {
    let direct = PathBuf::from(name);
    if direct.is_file() {
        return Ok(direct);
    }
    let mut candidates = vec![name.to_string()];
    if let Some(info) = benchmark_info(name) {
        candidates.push(info.file.to_string());
        candidates.push(info.name.to_string());
    }
    let mut roots = Vec::new();
    if let Ok(dir) = std::env::var(DATA_DIR_ENV) {
        roots.push(PathBuf::from(dir));
    }
    roots.push(PathBuf::from("data"));
    for root in &roots {
        for c in &candidates {
            let p = root.join(c);
            if p.is_file() {
                return Ok(p);
            }
        }
    }
    let searched: Vec<String> = roots.iter().map(|r| r.display().to_string()).collect();
    Err(Error::Io(format!(
        "dataset '{name}' not found (searched {}; set {DATA_DIR_ENV})",
        searched.join(", ")
    )))
}

pub fn load_dataset(name: &str) -> Result<Dataset> {
    let path = resolve_dataset(name)?;
    let mut d = load_libsvm(&path)?;
    if let Some(info) = benchmark_info(name) {
        d.name = info.name.to_string();
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_basic_lines() {
        let d = parse_libsvm_str("1 3:0.5 7:1.0\n-1 1:2\n", "t").unwrap();
        assert_eq!(d.labels, vec![1.0, -1.0]);
        assert_eq!(d.samples[0], vec![(3, 0.5), (7, 1.0)]);
        assert_eq!(d.samples[1], vec![(1, 2.0)]);
        assert_eq!(d.n_features, 7);
    }

    #[test]
    fn skips_comments_and_blanks() {
        let d = parse_libsvm_str("# header\n\n+1 2:1 # trailing\n   \n", "t").unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.samples[0], vec![(2, 1.0)]);
    }

    #[test]
    fn reports_line_and_column() {
        let e = parse_libsvm_str("1 1:1\n1 2:1 x\n", "t").unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                line: 2,
                column: 7,
                message: "expected index:value, found 'x'".into()
            }
        );
        assert!(matches!(
            parse_libsvm_str("1 3:1 2:1", "t"),
            Err(Error::Parse { column: 7, .. })
        ));
        assert!(parse_libsvm_str("1 3:1 3:2", "t").is_err());
        assert!(parse_libsvm_str("yes 1:1", "t").is_err());
        assert!(parse_libsvm_str("1 0:1", "t").is_err());
        assert!(parse_libsvm_str("1 1:abc", "t").is_err());
    }

    #[test]
    fn label_normalization() {
        let d = parse_libsvm_str("1 1:1\n2 1:1\n2 1:2\n", "t").unwrap();
        let n = normalize_labels(&d).unwrap();
        assert_eq!(n.labels, vec![-1.0, 1.0, 1.0]);
        assert_eq!(n.label_map, Some((1.0, 2.0)));
        let z = parse_libsvm_str("0 1:1\n1 1:1\n", "t").unwrap();
        assert_eq!(normalize_labels(&z).unwrap().labels, vec![-1.0, 1.0]);
        let c = parse_libsvm_str("-1 1:1\n1 1:1\n", "t").unwrap();
        assert_eq!(normalize_labels(&c).unwrap().labels, c.labels);
        let three = parse_libsvm_str("0 1:1\n1 1:1\n2 1:1\n", "t").unwrap();
        assert!(normalize_labels(&three).is_err());
        let one = parse_libsvm_str("1 1:1\n", "t").unwrap();
        assert!(normalize_labels(&one).is_err());
    }

    #[test]
    fn declared_dimension() {
        let d = parse_libsvm_str("1 3:1\n", "t").unwrap();
        assert_eq!(d.clone().with_n_features(10).unwrap().n_features, 10);
        assert!(d.with_n_features(2).is_err());
    }

    #[test]
    fn subsample_is_deterministic() {
        let text: String = (0..100)
            .map(|i| format!("{} 1:{i}\n", if i % 2 == 0 { 1 } else { -1 }))
            .collect();
        let d = parse_libsvm_str(&text, "t").unwrap();
        let a = d.subsample(10, 3);
        assert_eq!(a, d.subsample(10, 3));
        assert_eq!(a.len(), 10);
        let idx: Vec<f64> = a.samples.iter().map(|r| r[0].1).collect();
        assert!(idx.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn table_lookup() {
        assert_eq!(benchmark_info("german.numer").unwrap().features, 24);
        assert_eq!(benchmark_info("covtype").unwrap().samples, 581012);
        assert!(benchmark_info("iris").is_none());
    }

    proptest! {
        #[test]
        fn round_trip_is_lossless(
            rows in prop::collection::vec(
                (prop::bool::ANY, prop::collection::btree_map(1usize..200, -1e6f64..1e6, 0..12)),
                1..20,
            )
        ) {
            let text: String = rows
                .iter()
                .map(|(pos, m)| {
                    let mut s = if *pos { "1".to_string() } else { "-1".to_string() };
                    for (j, v) in m {
                        s.push_str(&format!(" {j}:{v:e}"));
                    }
                    s + "\n"
                })
                .collect();
            let d = parse_libsvm_str(&text, "p").unwrap();
            let again = parse_libsvm_str(&to_libsvm(&d), "p").unwrap();
            prop_assert_eq!(d, again);
        }
    }
}
