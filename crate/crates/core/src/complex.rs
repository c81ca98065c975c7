//! The cubical chain complex of a partial action system.
//!
//! A degree-n basis element is a state together with a strictly increasing
//! tuple of n pairwise independent events whose combined action is defined
//! at that state (an n-cube rooted at the state). The boundary of a cube
//! removes one event at a time, either after applying it to the root or
//! not, with alternating signs:
//!
//! ```text
//! d(x, a_1..a_n) = sum_i (-1)^i (x*a_i, a_1..^a_i..a_n)
//!                - sum_i (-1)^i (x,     a_1..^a_i..a_n)      (i = 1..n)
//! ```
//!
//! Both face tuples stay inside the lower basis because each a_i commutes
//! with the rest of the tuple, so it can be applied first or dropped last.
//! Homology groups are read off the Smith normal forms of the boundary
//! matrices.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::action::{PartialActionSystem, StateId};
use crate::error::{Error, Result};
use crate::smith::{smith_normal_form, SmithDecomposition, SparseIntMatrix};
use crate::trace::{EventId, Word};

/// A state with a clique of independent events whose combined action is
/// defined: one basis element of the chain complex. The tuple is strictly
/// increasing; its length is the degree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cube {
    pub state: StateId,
    pub events: Vec<EventId>,
}

impl Cube {
    pub fn degree(&self) -> usize {
        self.events.len()
    }

    /// Renders the cube with state and event names, e.g. `(s0,a1,a2)`.
    pub fn label(&self, sys: &PartialActionSystem) -> String {
        let mut out = format!("({}", sys.state_name(self.state));
        for &e in &self.events {
            out.push(',');
            out.push_str(sys.alphabet().name(e));
        }
        out.push(')');
        out
    }
}

/// One finitely generated abelian group: free part plus torsion in a
/// divisibility chain (every listed divisor exceeds 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub free_rank: usize,
    #[serde(with = "bigint_decimal_list")]
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    /// Renders as `0`, `Z`, `Z^r`, or `Z^r ⊕ Z/2 ⊕ Z/6`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" ⊕ "))
        }
    }
}

/// Graded bases and boundary matrices of the complex.
///
/// `basis(n)` is ordered by state index, then lexicographically by event
/// tuple, which makes every matrix reproducible across runs.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    bases: Vec<Vec<Cube>>,
    /// `differentials[n]` is the matrix of d_n for n >= 1; index 0 holds
    /// the empty matrix mapping degree 0 to nothing.
    differentials: Vec<SparseIntMatrix>,
}

impl ChainComplex {
    /// Builds the graded bases, leaving the boundary matrices empty.
    ///
    /// Degree 0 is the scope itself; degree n pairs each scope state with
    /// each independence clique of size n whose combined action is defined
    /// and lands back in the scope. Construction stops at the first empty
    /// degree, at the largest clique size, or at `max_dim`.
    ///
    /// Fails if the system does not validate or the scope references
    /// unknown states.
    pub fn build_bases(
        sys: &PartialActionSystem,
        scope: &BTreeSet<StateId>,
        max_dim: Option<usize>,
    ) -> Result<Self> {
        let violations = sys.validate();
        if !violations.is_empty() {
            return Err(Error::Validation(violations));
        }
        if let Some(out) = scope.iter().find(|s| s.0 >= sys.state_count()) {
            return Err(Error::Input(format!(
                "scope state index {} outside 0..{}",
                out.0,
                sys.state_count()
            )));
        }

        let mut bases = Vec::new();
        bases.push(
            scope
                .iter()
                .map(|&s| Cube {
                    state: s,
                    events: Vec::new(),
                })
                .collect::<Vec<_>>(),
        );

        let top = sys.independence().max_clique_size();
        let top = max_dim.map_or(top, |d| d.min(top));
        for degree in 1..=top {
            let cliques = sys.independence().cliques_of_size(degree);
            let mut basis = Vec::new();
            for &state in scope {
                for clique in &cliques {
                    let word = Word(clique.clone());
                    match sys.apply_word(state, &word) {
                        Some(end) if scope.contains(&end) => basis.push(Cube {
                            state,
                            events: clique.clone(),
                        }),
                        _ => {}
                    }
                }
            }
            if basis.is_empty() {
                break;
            }
            bases.push(basis);
        }

        Ok(Self {
            bases,
            differentials: Vec::new(),
        })
    }

    /// Builds bases and all boundary matrices in one go.
    pub fn build(
        sys: &PartialActionSystem,
        scope: &BTreeSet<StateId>,
        max_dim: Option<usize>,
    ) -> Result<Self> {
        let mut complex = Self::build_bases(sys, scope, max_dim)?;
        complex.build_differentials(sys)?;
        Ok(complex)
    }

    /// Fills in the boundary matrix of every positive degree.
    pub fn build_differentials(&mut self, sys: &PartialActionSystem) -> Result<()> {
        let mut differentials = vec![SparseIntMatrix::zero(0, self.bases[0].len())];
        for degree in 1..self.bases.len() {
            differentials.push(self.build_differential(sys, degree)?);
        }
        self.differentials = differentials;
        Ok(())
    }

    /// Boundary matrix of one degree (rows: degree-1 basis, columns:
    /// degree-n basis). Coefficients at coinciding face cubes are summed;
    /// zero sums are not stored.
    pub fn build_differential(
        &self,
        sys: &PartialActionSystem,
        degree: usize,
    ) -> Result<SparseIntMatrix> {
        assert!(
            degree >= 1 && degree < self.bases.len(),
            "degree {degree} has no boundary matrix (bases cover 0..{})",
            self.bases.len()
        );
        let rows = &self.bases[degree - 1];
        let cols = &self.bases[degree];

        let row_index = |face: &Cube, column: &Cube| -> Result<usize> {
            rows.binary_search(face).map_err(|_| Error::MissingBoundaryFace {
                degree,
                column: column.label(sys),
                face: face.label(sys),
            })
        };

        let mut triplets: Vec<(usize, usize, BigInt)> = Vec::new();
        for (c, cube) in cols.iter().enumerate() {
            for i in 1..=degree {
                let sign = if i % 2 == 1 { -1 } else { 1 };
                let removed = cube.events[i - 1];
                let mut rest = cube.events.clone();
                rest.remove(i - 1);

                let moved_state = sys.apply_event(cube.state, removed).ok_or_else(|| {
                    Error::MissingBoundaryFace {
                        degree,
                        column: cube.label(sys),
                        face: format!(
                            "({}·{})",
                            sys.state_name(cube.state),
                            sys.alphabet().name(removed)
                        ),
                    }
                })?;
                let moved = Cube {
                    state: moved_state,
                    events: rest.clone(),
                };
                let kept = Cube {
                    state: cube.state,
                    events: rest,
                };
                triplets.push((row_index(&moved, cube)?, c, BigInt::from(sign)));
                triplets.push((row_index(&kept, cube)?, c, BigInt::from(-sign)));
            }
        }
        SparseIntMatrix::from_triplets(rows.len(), cols.len(), triplets)
    }

    /// Number of graded pieces (top degree + 1).
    pub fn degree_count(&self) -> usize {
        self.bases.len()
    }

    pub fn basis(&self, degree: usize) -> &[Cube] {
        &self.bases[degree]
    }

    pub fn basis_sizes(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    /// The matrix of d_degree. Degree 0 maps to nothing; degrees beyond
    /// the top map from nothing. Requires built differentials.
    pub fn differential(&self, degree: usize) -> SparseIntMatrix {
        assert!(
            self.differentials.len() == self.bases.len(),
            "differentials not built"
        );
        if degree == 0 {
            SparseIntMatrix::zero(0, self.bases[0].len())
        } else if degree < self.bases.len() {
            self.differentials[degree].clone()
        } else if degree == self.bases.len() {
            SparseIntMatrix::zero(self.bases[degree - 1].len(), 0)
        } else {
            SparseIntMatrix::zero(0, 0)
        }
    }

    /// Alternating sum of the basis sizes.
    pub fn euler_characteristic(&self) -> i64 {
        self.bases
            .iter()
            .enumerate()
            .map(|(n, basis)| {
                let size = basis.len() as i64;
                if n % 2 == 0 {
                    size
                } else {
                    -size
                }
            })
            .sum()
    }

    /// Homology groups of the complex, one per degree.
    pub fn homology(&self) -> Vec<HomologyGroup> {
        assert!(
            self.differentials.len() == self.bases.len(),
            "differentials not built"
        );
        let sizes = self.basis_sizes();
        let diffs: Vec<SparseIntMatrix> =
            (1..self.bases.len()).map(|n| self.differentials[n].clone()).collect();
        homology_from_differentials(&sizes, &diffs)
    }
}

/// Assembles homology groups from basis sizes and the boundary matrices
/// `diffs[n-1] = d_n` (so `diffs` is empty for a single-degree complex):
/// the degree-n free rank is `size_n - rank(d_n) - rank(d_{n+1})` and the
/// torsion is the part of the divisor chain of d_{n+1} exceeding 1.
///
/// Shared by the cubical complex and the nerve-based cross-check, which
/// differ in how they produce bases and boundaries but read off groups the
/// same way.
pub fn homology_from_differentials(
    sizes: &[usize],
    diffs: &[SparseIntMatrix],
) -> Vec<HomologyGroup> {
    assert_eq!(
        diffs.len() + 1,
        sizes.len().max(1),
        "expected one boundary matrix per positive degree"
    );
    let decompositions: Vec<SmithDecomposition> = diffs.iter().map(smith_normal_form).collect();
    homology_from_decompositions(sizes, &decompositions)
}

/// Same as [`homology_from_differentials`] with the Smith decompositions
/// already in hand (`decompositions[n-1]` belongs to d_n).
pub fn homology_from_decompositions(
    sizes: &[usize],
    decompositions: &[SmithDecomposition],
) -> Vec<HomologyGroup> {
    let rank_of = |n: usize| -> usize {
        if n == 0 || n > decompositions.len() {
            0
        } else {
            decompositions[n - 1].rank
        }
    };

    let mut groups = Vec::with_capacity(sizes.len());
    for (n, &size) in sizes.iter().enumerate() {
        let killed = rank_of(n) + rank_of(n + 1);
        assert!(
            killed <= size,
            "degree {n}: ranks {killed} exceed basis size {size}; boundary matrices are inconsistent"
        );
        let torsion = if n + 1 <= decompositions.len() {
            decompositions[n]
                .divisors
                .iter()
                .filter(|d| !d.is_one())
                .cloned()
                .collect()
        } else {
            Vec::new()
        };
        groups.push(HomologyGroup {
            free_rank: size - killed,
            torsion,
        });
    }
    groups
}

/// Serialized form of one boundary matrix, used by `--dump-matrices`.
#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixDump {
    pub degree: usize,
    pub rows: usize,
    pub cols: usize,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    /// Triplets `(row, col, value)`.
    pub entries: Vec<(usize, usize, i64)>,
}

impl ChainComplex {
    fn dump_for(&self, sys: &PartialActionSystem, degree: usize) -> MatrixDump {
        let matrix = &self.differentials[degree];
        MatrixDump {
            degree,
            rows: matrix.n_rows(),
            cols: matrix.n_cols(),
            row_labels: self.bases[degree - 1].iter().map(|c| c.label(sys)).collect(),
            col_labels: self.bases[degree].iter().map(|c| c.label(sys)).collect(),
            entries: matrix
                .entries()
                .map(|(r, c, v)| {
                    (r, c, i64::try_from(v).expect("boundary coefficients fit i64"))
                })
                .collect(),
        }
    }

    /// Renders one boundary matrix as labeled plain text.
    pub fn dump_text(&self, sys: &PartialActionSystem, degree: usize) -> String {
        let dump = self.dump_for(sys, degree);
        let dense = self.differentials[degree].to_dense();
        let mut out = format!("d_{} ({} x {})\n", degree, dump.rows, dump.cols);
        out.push_str(&format!("columns: {}\n", dump.col_labels.join(" ")));
        for (r, label) in dump.row_labels.iter().enumerate() {
            let cells: Vec<String> = dense[r].iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("{label}: {}\n", cells.join(" ")));
        }
        out
    }

    /// Writes `d<n>.txt` and `d<n>.json` for every positive degree into
    /// `dir`, returning the created paths.
    pub fn write_dump_files(&self, sys: &PartialActionSystem, dir: &Path) -> Result<Vec<PathBuf>> {
        assert!(
            self.differentials.len() == self.bases.len(),
            "differentials not built"
        );
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for degree in 1..self.bases.len() {
            let text_path = dir.join(format!("d{degree}.txt"));
            let mut file = std::fs::File::create(&text_path)?;
            file.write_all(self.dump_text(sys, degree).as_bytes())?;
            written.push(text_path);

            let json_path = dir.join(format!("d{degree}.json"));
            let file = std::fs::File::create(&json_path)?;
            serde_json::to_writer_pretty(file, &self.dump_for(sys, degree))?;
            written.push(json_path);
        }
        Ok(written)
    }
}

/// Serializes `Vec<BigInt>` as decimal strings so that torsion survives
/// JSON round trips at any magnitude.
mod bigint_decimal_list {
    use num_bigint::BigInt;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[BigInt], ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(values.iter().map(|v| v.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<String>::deserialize(de)?;
        raw.iter()
            .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
            .collect()
    }
}
