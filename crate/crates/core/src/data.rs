//! Dataset acquisition: a synthetic two-class generator, IDX image-file
//! parsing, area-average downsampling, and amplitude normalization.
//!
//! The library never fetches anything over the network; IDX files come
//! from local paths only.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::real::Real;

/// Big-endian magic of an IDX file of unsigned bytes with 3 dimensions.
pub const IDX_IMAGES_MAGIC: u32 = 0x0000_0803;
/// Big-endian magic of an IDX file of unsigned bytes with 1 dimension.
pub const IDX_LABELS_MAGIC: u32 = 0x0000_0801;

#[derive(Debug, Error, PartialEq)]
pub enum DataError {
    #[error("bad IDX magic at byte 0: got {found:#010x}, expected {expected:#010x}")]
    BadMagic { found: u32, expected: u32 },
    #[error("IDX file truncated: needed {needed} bytes at offset {offset}, file has {len}")]
    Truncated {
        offset: usize,
        needed: usize,
        len: usize,
    },
    #[error("IDX image/label item counts differ: {images} images vs {labels} labels")]
    CountMismatch { images: usize, labels: usize },
    #[error("io error reading {path}: {message}")]
    Io { path: String, message: String },
    #[error("target side {side} squared is not a power of two")]
    BadSide { side: usize },
    #[error("class pair must name two different labels, got ({a}, {b})")]
    SamePair { a: u8, b: u8 },
    #[error("no images left for label {label} after filtering")]
    EmptyClass { label: u8 },
    #[error("vector {index} is zero and cannot be normalized")]
    ZeroVector { index: usize },
    #[error("vectors and labels have different lengths: {vectors} vs {labels}")]
    LengthMismatch { vectors: usize, labels: usize },
}

pub type Result<T> = std::result::Result<T, DataError>;

/// Where a dataset came from; serialized into run configs for
/// reproducibility.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum Provenance {
    Synthetic {
        n_qubits: usize,
        per_class: usize,
        separation: f64,
        seed: u64,
    },
    Idx {
        class_pair: (u8, u8),
        side: usize,
    },
}

/// Raw feature vectors with binary labels; all vectors share one dimension
/// 2^n.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawDataset<T> {
    pub vectors: Vec<Vec<T>>,
    pub labels: Vec<u8>,
    pub provenance: Provenance,
}

impl<T> RawDataset<T> {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

#[derive(Serialize, Deserialize)]
struct CacheRow<T> {
    label: u8,
    vector: Vec<T>,
}

#[derive(Serialize, Deserialize)]
struct DatasetCache<T> {
    provenance: Provenance,
    rows: Vec<CacheRow<T>>,
}

impl<T: Real> RawDataset<T> {
    /// Serialize as a JSON cache of {label, vector} rows plus provenance.
    pub fn to_cache_json(&self) -> String {
        let rows = self
            .labels
            .iter()
            .zip(&self.vectors)
            .map(|(&label, vector)| CacheRow {
                label,
                vector: vector.clone(),
            })
            .collect();
        serde_json::to_string_pretty(&DatasetCache {
            provenance: self.provenance.clone(),
            rows,
        })
        .expect("dataset serialization cannot fail")
    }

    /// Reload a cache written by [`Self::to_cache_json`].
    pub fn from_cache_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        let cache: DatasetCache<T> = serde_json::from_str(text)?;
        let (labels, vectors) = cache
            .rows
            .into_iter()
            .map(|row| (row.label, row.vector))
            .unzip();
        Ok(RawDataset {
            vectors,
            labels,
            provenance: cache.provenance,
        })
    }
}

/// Two unit-norm classes around orthogonal means: class c is
/// normalize(μ_c + g/separation) with standard-normal g. μ₀ and μ₁ are the
/// basis vectors whose indices differ in the first qubit, so the classes
/// are separable by a first-qubit measurement in the noiseless limit.
pub fn generate_synthetic<T: Real>(
    n_qubits: usize,
    per_class: usize,
    separation: T,
    seed: u64,
) -> RawDataset<T> {
    assert!(n_qubits >= 1, "n_qubits must be at least 1");
    assert!(per_class >= 1, "per_class must be at least 1");
    assert!(separation > T::zero(), "separation must be positive");
    let dim = 1usize << n_qubits;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vectors = Vec::with_capacity(2 * per_class);
    let mut labels = Vec::with_capacity(2 * per_class);
    for class in 0..2u8 {
        let mean_index = if class == 0 { 0 } else { dim / 2 };
        for _ in 0..per_class {
            let mut v: Vec<T> = (0..dim)
                .map(|_| T::standard_normal(&mut rng) / separation)
                .collect();
            v[mean_index] += T::one();
            let norm = v.iter().map(|&x| x * x).sum::<T>().sqrt();
            for x in v.iter_mut() {
                *x /= norm;
            }
            vectors.push(v);
            labels.push(class);
        }
    }
    RawDataset {
        vectors,
        labels,
        provenance: Provenance::Synthetic {
            n_qubits,
            per_class,
            separation: separation.to_f64().unwrap_or(f64::NAN),
            seed,
        },
    }
}

/// Grayscale images parsed from an IDX file.
#[derive(Clone, Debug, PartialEq)]
pub struct IdxImages {
    pub rows: usize,
    pub cols: usize,
    /// Row-major pixel bytes, one Vec per image.
    pub images: Vec<Vec<u8>>,
}

fn read_be_u32(bytes: &[u8], offset: usize) -> Result<u32> {
    let end = offset + 4;
    if bytes.len() < end {
        return Err(DataError::Truncated {
            offset,
            needed: 4,
            len: bytes.len(),
        });
    }
    Ok(u32::from_be_bytes([
        bytes[offset],
        bytes[offset + 1],
        bytes[offset + 2],
        bytes[offset + 3],
    ]))
}

/// Parse an images IDX blob: magic, count, rows, cols, then raw bytes.
pub fn parse_idx_images(bytes: &[u8]) -> Result<IdxImages> {
    let magic = read_be_u32(bytes, 0)?;
    if magic != IDX_IMAGES_MAGIC {
        return Err(DataError::BadMagic {
            found: magic,
            expected: IDX_IMAGES_MAGIC,
        });
    }
    let count = read_be_u32(bytes, 4)? as usize;
    let rows = read_be_u32(bytes, 8)? as usize;
    let cols = read_be_u32(bytes, 12)? as usize;
    let pixel_bytes = count
        .checked_mul(rows)
        .and_then(|v| v.checked_mul(cols))
        .ok_or(DataError::Truncated {
            offset: 16,
            needed: usize::MAX,
            len: bytes.len(),
        })?;
    if bytes.len() < 16 + pixel_bytes {
        return Err(DataError::Truncated {
            offset: 16,
            needed: pixel_bytes,
            len: bytes.len(),
        });
    }
    let images = (0..count)
        .map(|i| {
            let start = 16 + i * rows * cols;
            bytes[start..start + rows * cols].to_vec()
        })
        .collect();
    Ok(IdxImages { rows, cols, images })
}

/// Parse a labels IDX blob: magic, count, then one byte per item.
pub fn parse_idx_labels(bytes: &[u8]) -> Result<Vec<u8>> {
    let magic = read_be_u32(bytes, 0)?;
    if magic != IDX_LABELS_MAGIC {
        return Err(DataError::BadMagic {
            found: magic,
            expected: IDX_LABELS_MAGIC,
        });
    }
    let count = read_be_u32(bytes, 4)? as usize;
    if bytes.len() < 8 + count {
        return Err(DataError::Truncated {
            offset: 8,
            needed: count,
            len: bytes.len(),
        });
    }
    Ok(bytes[8..8 + count].to_vec())
}

/// Serialize images back to the IDX byte format.
pub fn write_idx_images(images: &IdxImages) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + images.images.len() * images.rows * images.cols);
    out.extend_from_slice(&IDX_IMAGES_MAGIC.to_be_bytes());
    out.extend_from_slice(&(images.images.len() as u32).to_be_bytes());
    out.extend_from_slice(&(images.rows as u32).to_be_bytes());
    out.extend_from_slice(&(images.cols as u32).to_be_bytes());
    for image in &images.images {
        out.extend_from_slice(image);
    }
    out
}

/// Serialize labels back to the IDX byte format.
pub fn write_idx_labels(labels: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + labels.len());
    out.extend_from_slice(&IDX_LABELS_MAGIC.to_be_bytes());
    out.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    out.extend_from_slice(labels);
    out
}

/// Read and cross-validate an images/labels file pair.
pub fn parse_idx(images_path: &Path, labels_path: &Path) -> Result<(IdxImages, Vec<u8>)> {
    let read = |path: &Path| {
        std::fs::read(path).map_err(|source| DataError::Io {
            path: path.display().to_string(),
            message: source.to_string(),
        })
    };
    let images = parse_idx_images(&read(images_path)?)?;
    let labels = parse_idx_labels(&read(labels_path)?)?;
    if images.images.len() != labels.len() {
        return Err(DataError::CountMismatch {
            images: images.images.len(),
            labels: labels.len(),
        });
    }
    Ok((images, labels))
}

/// Area-average resampling of one row-major image to side×side. Each
/// output cell integrates the source pixels it covers, weighted by
/// fractional overlap, so constants and the image mean are preserved.
fn resample<T: Real>(pixels: &[u8], rows: usize, cols: usize, side: usize) -> Vec<T> {
    let row_scale = rows as f64 / side as f64;
    let col_scale = cols as f64 / side as f64;
    let mut out = Vec::with_capacity(side * side);
    for r in 0..side {
        let y0 = r as f64 * row_scale;
        let y1 = y0 + row_scale;
        for c in 0..side {
            let x0 = c as f64 * col_scale;
            let x1 = x0 + col_scale;
            let mut acc = 0.0f64;
            let mut y = y0;
            while y < y1 - 1e-12 {
                let yi = y.floor() as usize;
                let y_next = (yi as f64 + 1.0).min(y1);
                let wy = y_next - y;
                let mut x = x0;
                while x < x1 - 1e-12 {
                    let xi = x.floor() as usize;
                    let x_next = (xi as f64 + 1.0).min(x1);
                    let wx = x_next - x;
                    acc += wy * wx * pixels[yi.min(rows - 1) * cols + xi.min(cols - 1)] as f64;
                    x = x_next;
                }
                y = y_next;
            }
            out.push(T::of(acc / (row_scale * col_scale)));
        }
    }
    out
}

/// Keep the two requested classes, relabel them 0/1, and downsample every
/// image to side×side flattened row-major. All-zero images are dropped
/// (they cannot be amplitude-encoded); an empty class afterwards is an
/// error.
pub fn downsample_and_filter<T: Real>(
    images: &IdxImages,
    labels: &[u8],
    class_pair: (u8, u8),
    side: usize,
) -> Result<RawDataset<T>> {
    let (a, b) = class_pair;
    if a == b {
        return Err(DataError::SamePair { a, b });
    }
    if !(side * side).is_power_of_two() {
        return Err(DataError::BadSide { side });
    }
    if images.images.len() != labels.len() {
        return Err(DataError::CountMismatch {
            images: images.images.len(),
            labels: labels.len(),
        });
    }
    let mut vectors = Vec::new();
    let mut new_labels = Vec::new();
    for (pixels, &label) in images.images.iter().zip(labels) {
        if label != a && label != b {
            continue;
        }
        if pixels.iter().all(|&p| p == 0) {
            continue;
        }
        vectors.push(resample::<T>(pixels, images.rows, images.cols, side));
        new_labels.push(u8::from(label == b));
    }
    for (class, label) in [(0u8, a), (1u8, b)] {
        if !new_labels.contains(&class) {
            return Err(DataError::EmptyClass { label });
        }
    }
    Ok(RawDataset {
        vectors,
        labels: new_labels,
        provenance: Provenance::Idx { class_pair, side },
    })
}

/// Scale every vector to unit ℓ2 norm. Idempotent; zero vectors are
/// rejected with their index.
pub fn normalize<T: Real>(mut dataset: RawDataset<T>) -> Result<RawDataset<T>> {
    if dataset.vectors.len() != dataset.labels.len() {
        return Err(DataError::LengthMismatch {
            vectors: dataset.vectors.len(),
            labels: dataset.labels.len(),
        });
    }
    for (index, vector) in dataset.vectors.iter_mut().enumerate() {
        let norm = vector.iter().map(|&x| x * x).sum::<T>().sqrt();
        if norm == T::zero() {
            return Err(DataError::ZeroVector { index });
        }
        for x in vector.iter_mut() {
            *x /= norm;
        }
    }
    Ok(dataset)
}
