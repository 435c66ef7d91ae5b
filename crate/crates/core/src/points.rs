//! Deduplicated point sets over Z_n^d, plus the plain-text point-list
//! format used by the CLI (`file:` generator and `--generator file:...`).

use std::collections::HashSet;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::ring::Modulus;

/// Hard cap on materialized point counts (`full_space`, constructions).
pub const MAX_POINTS: u128 = 1 << 24;

/// A set of distinct points in Z_n^d.
///
/// Coordinates are stored flattened row-major; every coordinate is a
/// canonical residue in `[0, n)`. The point order is the construction
/// order, which generators keep deterministic.
#[derive(Debug, Clone)]
pub struct PointSet {
    modulus: Modulus,
    dim: usize,
    coords: Vec<u64>,
}

impl PointSet {
    /// Builds a set from explicit points, rejecting out-of-range
    /// coordinates, dimension mismatches, and duplicates.
    pub fn new<I, P>(modulus: Modulus, dim: usize, points: I) -> Result<Self>
    where
        I: IntoIterator<Item = P>,
        P: AsRef<[u64]>,
    {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        let n = modulus.n();
        let mut coords = Vec::new();
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        for (index, p) in points.into_iter().enumerate() {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: p.len(),
                });
            }
            for &c in p {
                if c >= n {
                    return Err(Error::CoordinateRange { value: c, n });
                }
            }
            if !seen.insert(p.to_vec()) {
                return Err(Error::DuplicatePoint { index });
            }
            coords.extend_from_slice(p);
        }
        Ok(Self {
            modulus,
            dim,
            coords,
        })
    }

    /// All of Z_n^d, in lexicographic order.
    pub fn full_space(modulus: Modulus, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        let total = modulus
            .volume(dim)
            .filter(|&t| t <= MAX_POINTS)
            .ok_or(Error::SizeBound {
                what: "full-space point count",
                got: modulus.volume(dim).unwrap_or(u128::MAX),
                limit: MAX_POINTS,
            })?;
        let n = modulus.n();
        let mut coords = Vec::with_capacity(total as usize * dim);
        let mut point = vec![0u64; dim];
        loop {
            coords.extend_from_slice(&point);
            // odometer increment, least-significant coordinate last
            let mut axis = dim;
            loop {
                if axis == 0 {
                    return Ok(Self {
                        modulus,
                        dim,
                        coords,
                    });
                }
                axis -= 1;
                point[axis] += 1;
                if point[axis] < n {
                    break;
                }
                point[axis] = 0;
            }
        }
    }

    /// Constructor for generators that produce distinct in-range points by
    /// construction; skips the validation pass.
    pub(crate) fn from_parts_unchecked(modulus: Modulus, dim: usize, coords: Vec<u64>) -> Self {
        debug_assert_eq!(coords.len() % dim, 0);
        Self {
            modulus,
            dim,
            coords,
        }
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[u64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u64]> + Clone + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// The set translated by `v` (coordinatewise, mod n). Distinctness is
    /// preserved because translation is a bijection of Z_n^d.
    pub fn translate(&self, v: &[u64]) -> Result<Self> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        let n = self.modulus.n();
        let coords = self
            .coords
            .chunks_exact(self.dim)
            .flat_map(|p| p.iter().zip(v).map(|(&c, &w)| (c + (w % n)) % n))
            .collect();
        Ok(Self {
            modulus: self.modulus.clone(),
            dim: self.dim,
            coords,
        })
    }

    /// Reads the point-list format: a header `n=<int> d=<int>`, then one
    /// point per line as `d` space-separated integers in `[0, n)`.
    /// Duplicate lines are rejected.
    pub fn read_from<R: BufRead>(reader: R) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::PointFile {
            line: 1,
            msg: "missing header".into(),
        })?;
        let header = header?;
        let (n, dim) = parse_header(&header)?;
        let modulus = Modulus::new(n)?;

        let mut points: Vec<Vec<u64>> = Vec::new();
        for (idx, line) in lines {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let mut point = Vec::with_capacity(dim);
            for tok in trimmed.split_whitespace() {
                let c: u64 = tok.parse().map_err(|_| Error::PointFile {
                    line: idx + 1,
                    msg: format!("bad coordinate {tok:?}"),
                })?;
                point.push(c);
            }
            if point.len() != dim {
                return Err(Error::PointFile {
                    line: idx + 1,
                    msg: format!("expected {dim} coordinates, got {}", point.len()),
                });
            }
            points.push(point);
        }
        Self::new(modulus, dim, points).map_err(|e| match e {
            Error::DuplicatePoint { index } => Error::PointFile {
                line: index + 2,
                msg: "duplicate point".into(),
            },
            other => other,
        })
    }

    /// Writes the set back in the point-list format.
    pub fn write_to<W: Write>(&self, mut writer: W) -> std::io::Result<()> {
        writeln!(writer, "n={} d={}", self.modulus.n(), self.dim)?;
        for p in self.iter() {
            let row: Vec<String> = p.iter().map(|c| c.to_string()).collect();
            writeln!(writer, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

fn parse_header(header: &str) -> Result<(u64, usize)> {
    let mut n = None;
    let mut d = None;
    for tok in header.split_whitespace() {
        if let Some(v) = tok.strip_prefix("n=") {
            n = v.parse().ok();
        } else if let Some(v) = tok.strip_prefix("d=") {
            d = v.parse().ok();
        }
    }
    match (n, d) {
        (Some(n), Some(d)) if d >= 1 => Ok((n, d)),
        _ => Err(Error::PointFile {
            line: 1,
            msg: format!("expected header `n=<int> d=<int>`, got {header:?}"),
        }),
    }
}
