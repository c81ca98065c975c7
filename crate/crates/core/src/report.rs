//! End-to-end analysis: validate, pick the scope, build the complex,
//! reduce, and assemble a report.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::action::{PartialActionSystem, StateId};
use crate::complex::{ChainComplex, HomologyGroup};
use crate::error::{Error, Result};
use crate::nerve::nerve_homology;

/// What kind of input produced a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputKind {
    Net,
    Action,
}

impl fmt::Display for InputKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputKind::Net => "net",
            InputKind::Action => "action",
        })
    }
}

/// Which states the analysis runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScopeChoice {
    /// States reachable from the initial state. Requires one.
    ReachableFromInitial,
    /// The whole state set.
    AllStates,
}

/// Analysis options shared by `analyze` and `verify`.
#[derive(Clone, Copy, Debug)]
pub struct AnalyzeOptions {
    pub scope: ScopeChoice,
    /// Report homology only up to this degree. The complex is built one
    /// degree further so every reported group is exact.
    pub max_dim: Option<usize>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            scope: ScopeChoice::AllStates,
            max_dim: None,
        }
    }
}

/// Per-degree sizes: how many basis cubes and the rank of the boundary
/// matrix landing in the degree below (`rank_d` of degree 0 is 0).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeStat {
    pub degree: usize,
    pub basis_size: usize,
    pub rank_d: usize,
}

/// Machine-readable analysis result. The JSON field set is frozen:
/// `kind`, `scope`, `scope_size`, `degrees`, `homology`,
/// `euler_characteristic`, `elapsed_us`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub kind: InputKind,
    pub scope: ScopeChoice,
    pub scope_size: usize,
    /// Covers every built degree; one degree past `homology` when a
    /// `max_dim` cut was applied and the complex continued.
    pub degrees: Vec<DegreeStat>,
    pub homology: Vec<HomologyGroup>,
    /// Alternating sum of basis sizes over the built degrees.
    pub euler_characteristic: i64,
    pub elapsed_us: u64,
}

impl AnalysisReport {
    /// Multi-line human-readable rendering.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "kind: {}\nscope: {} ({} state(s))\n",
            self.kind,
            match self.scope {
                ScopeChoice::ReachableFromInitial => "reachable from initial",
                ScopeChoice::AllStates => "all states",
            },
            self.scope_size
        ));
        out.push_str("degree  basis  rank d\n");
        for d in &self.degrees {
            out.push_str(&format!("{:<7} {:<6} {}\n", d.degree, d.basis_size, d.rank_d));
        }
        out.push_str(&format!("euler characteristic: {}\n", self.euler_characteristic));
        for (n, h) in self.homology.iter().enumerate() {
            out.push_str(&format!("H_{n} = {h}\n"));
        }
        out.push_str(&format!("elapsed: {} us\n", self.elapsed_us));
        out
    }
}

/// A finished analysis: the report plus the artifacts it was read from,
/// kept for matrix dumps and further inspection.
#[derive(Debug)]
pub struct Analysis {
    pub scope: BTreeSet<StateId>,
    pub complex: ChainComplex,
    pub report: AnalysisReport,
}

fn resolve_scope(
    sys: &PartialActionSystem,
    choice: ScopeChoice,
) -> Result<BTreeSet<StateId>> {
    match choice {
        ScopeChoice::AllStates => Ok(sys.all_states()),
        ScopeChoice::ReachableFromInitial => {
            let s0 = sys.initial().ok_or_else(|| {
                Error::Input("reachability scope requested but the system has no initial state".into())
            })?;
            Ok(sys.reachable_states(s0))
        }
    }
}

/// Runs the full pipeline on a system.
pub fn analyze(
    sys: &PartialActionSystem,
    kind: InputKind,
    options: &AnalyzeOptions,
) -> Result<Analysis> {
    let start = Instant::now();
    let scope = resolve_scope(sys, options.scope)?;
    // Build one degree past the cut so reported groups are exact.
    let build_dim = options.max_dim.map(|d| d + 1);
    let complex = ChainComplex::build(sys, &scope, build_dim)?;

    let sizes = complex.basis_sizes();
    let decompositions: Vec<_> = (1..sizes.len())
        .map(|n| crate::smith::smith_normal_form(&complex.differential(n)))
        .collect();
    let degrees: Vec<DegreeStat> = sizes
        .iter()
        .enumerate()
        .map(|(degree, &basis_size)| DegreeStat {
            degree,
            basis_size,
            rank_d: if degree == 0 {
                0
            } else {
                decompositions[degree - 1].rank
            },
        })
        .collect();
    let mut homology =
        crate::complex::homology_from_decompositions(&sizes, &decompositions);
    if let Some(d) = options.max_dim {
        homology.truncate(d + 1);
    }

    let report = AnalysisReport {
        kind,
        scope: options.scope,
        scope_size: scope.len(),
        degrees,
        homology,
        euler_characteristic: complex.euler_characteristic(),
        elapsed_us: start.elapsed().as_micros() as u64,
    };
    Ok(Analysis {
        scope,
        complex,
        report,
    })
}

/// One degree of the pipeline-versus-nerve comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyDegree {
    pub degree: usize,
    pub pipeline: HomologyGroup,
    pub nerve: HomologyGroup,
    pub equal: bool,
}

/// Side-by-side homology of the cubical pipeline and the nerve route.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub scope_size: usize,
    pub degrees: Vec<VerifyDegree>,
    pub all_equal: bool,
    pub elapsed_us: u64,
}

impl VerifyReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("scope: {} state(s)\n", self.scope_size));
        out.push_str("degree  pipeline        nerve           match\n");
        for d in &self.degrees {
            out.push_str(&format!(
                "{:<7} {:<15} {:<15} {}\n",
                d.degree,
                d.pipeline.to_string(),
                d.nerve.to_string(),
                if d.equal { "yes" } else { "NO" }
            ));
        }
        out.push_str(if self.all_equal {
            "verdict: MATCH\n"
        } else {
            "verdict: MISMATCH\n"
        });
        out
    }
}

/// Runs both homology routes and compares them degree by degree, padding
/// the shorter sequence with trivial groups.
pub fn verify(sys: &PartialActionSystem, options: &AnalyzeOptions) -> Result<VerifyReport> {
    let start = Instant::now();
    let analysis = analyze(sys, InputKind::Action, options)?;
    let scope = &analysis.scope;
    let via_nerve = nerve_homology(sys, scope, options.max_dim)?;
    let via_pipeline = analysis.report.homology;

    let count = via_pipeline.len().max(via_nerve.len());
    let group_at = |groups: &[HomologyGroup], n: usize| {
        groups.get(n).cloned().unwrap_or_else(|| HomologyGroup::free(0))
    };
    let degrees: Vec<VerifyDegree> = (0..count)
        .map(|n| {
            let pipeline = group_at(&via_pipeline, n);
            let nerve = group_at(&via_nerve, n);
            let equal = pipeline == nerve;
            VerifyDegree {
                degree: n,
                pipeline,
                nerve,
                equal,
            }
        })
        .collect();
    Ok(VerifyReport {
        scope_size: scope.len(),
        all_equal: degrees.iter().all(|d| d.equal),
        degrees,
        elapsed_us: start.elapsed().as_micros() as u64,
    })
}
