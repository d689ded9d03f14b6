//! Network model: case-file parsing, bus admittance matrix and the
//! Hermitian coefficient matrices of the quadratic measurement map.
//!
//! Every metered quantity is a quadratic form of the state `v`:
//! `h_l(v) = Tr(H_l v v^H)` with `H_l` Hermitian. The builders here produce
//! those matrices from the bus admittance matrix `Y`.

use nalgebra::{DMatrix, DVector};
use serde::Deserialize;

use crate::Complex64;

/// One-based bus index, dense `1..=N` after parsing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BusId(pub usize);

impl BusId {
    /// Zero-based position in vectors and matrices.
    pub fn idx(self) -> usize {
        self.0 - 1
    }
}

impl std::fmt::Display for BusId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Transmission line in the pi-model: series admittance plus a shunt
/// admittance at each end. Shunts may differ per end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub from: BusId,
    pub to: BusId,
    /// Series admittance y_mn = 1/(r + jx).
    pub series: Complex64,
    /// Shunt admittance at the `from` end.
    pub shunt_from: Complex64,
    /// Shunt admittance at the `to` end.
    pub shunt_to: Complex64,
}

/// Which end of a line a flow meter observes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowDirection {
    /// Metered at `line.from`, flowing towards `line.to`.
    FromTo,
    /// Metered at `line.to`, flowing towards `line.from`.
    ToFrom,
}

/// Bus/line topology with admittances, all per-unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub n_buses: usize,
    pub lines: Vec<Line>,
    /// Bus-to-ground shunt admittance per bus (zero-based).
    pub ground_shunts: Vec<Complex64>,
}

#[derive(Debug, thiserror::Error)]
pub enum NetworkError {
    #[error("malformed case file: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("case file must declare at least one bus")]
    NoBuses,
    #[error("line {from}-{to}: self-loop")]
    SelfLoop { from: usize, to: usize },
    #[error("duplicate line between buses {m} and {n}")]
    DuplicateLine { m: usize, n: usize },
    #[error("reference to unknown bus {bus} (network has {n_buses} buses)")]
    UnknownBus { bus: usize, n_buses: usize },
    #[error("line {from}-{to}: zero series impedance")]
    ZeroImpedance { from: usize, to: usize },
    #[error("bus index {bus} out of range (network has {n_buses} buses)")]
    BusOutOfRange { bus: usize, n_buses: usize },
    #[error("line {from}-{to} not present in network")]
    LineNotFound { from: usize, to: usize },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CaseFile {
    n_buses: usize,
    #[serde(default)]
    bus_shunts: Vec<CaseShunt>,
    branches: Vec<CaseBranch>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CaseShunt {
    bus: usize,
    gs: f64,
    bs: f64,
}

// `deny_unknown_fields` rejects transformer records (tap/shift): the model
// here is transformer-free.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CaseBranch {
    from: usize,
    to: usize,
    r: f64,
    x: f64,
    /// Total line charging susceptance, split evenly across both ends
    /// unless `b_from`/`b_to` override it.
    #[serde(default)]
    b: f64,
    #[serde(default)]
    b_from: Option<f64>,
    #[serde(default)]
    b_to: Option<f64>,
}

impl Network {
    /// Parse the JSON case format:
    /// `{"n_buses": N, "bus_shunts": [{"bus", "gs", "bs"}], "branches": [{"from", "to", "r", "x", "b"}]}`.
    pub fn parse_case(text: &str) -> Result<Self, NetworkError> {
        let case: CaseFile = serde_json::from_str(text)?;
        if case.n_buses == 0 {
            return Err(NetworkError::NoBuses);
        }
        let n = case.n_buses;
        let check = |bus: usize| -> Result<BusId, NetworkError> {
            if bus == 0 || bus > n {
                Err(NetworkError::UnknownBus { bus, n_buses: n })
            } else {
                Ok(BusId(bus))
            }
        };

        let mut seen = std::collections::HashSet::new();
        let mut lines = Vec::with_capacity(case.branches.len());
        for br in &case.branches {
            let from = check(br.from)?;
            let to = check(br.to)?;
            if from == to {
                return Err(NetworkError::SelfLoop {
                    from: br.from,
                    to: br.to,
                });
            }
            let key = (from.min(to), from.max(to));
            if !seen.insert(key) {
                return Err(NetworkError::DuplicateLine {
                    m: key.0 .0,
                    n: key.1 .0,
                });
            }
            let z = Complex64::new(br.r, br.x);
            if z.norm() == 0.0 {
                return Err(NetworkError::ZeroImpedance {
                    from: br.from,
                    to: br.to,
                });
            }
            let half = br.b / 2.0;
            lines.push(Line {
                from,
                to,
                series: z.inv(),
                shunt_from: Complex64::new(0.0, br.b_from.unwrap_or(half)),
                shunt_to: Complex64::new(0.0, br.b_to.unwrap_or(half)),
            });
        }

        let mut ground_shunts = vec![Complex64::new(0.0, 0.0); n];
        for sh in &case.bus_shunts {
            let bus = check(sh.bus)?;
            ground_shunts[bus.idx()] += Complex64::new(sh.gs, sh.bs);
        }

        Ok(Network {
            n_buses: n,
            lines,
            ground_shunts,
        })
    }

    /// Whether every bus is reachable from bus 1 through lines.
    pub fn is_connected(&self) -> bool {
        if self.n_buses == 0 {
            return false;
        }
        let mut adj = vec![Vec::new(); self.n_buses];
        for l in &self.lines {
            adj[l.from.idx()].push(l.to.idx());
            adj[l.to.idx()].push(l.from.idx());
        }
        let mut seen = vec![false; self.n_buses];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    pub fn find_line(&self, from: BusId, to: BusId) -> Option<(usize, FlowDirection)> {
        self.lines.iter().enumerate().find_map(|(i, l)| {
            if l.from == from && l.to == to {
                Some((i, FlowDirection::FromTo))
            } else if l.from == to && l.to == from {
                Some((i, FlowDirection::ToFrom))
            } else {
                None
            }
        })
    }

    fn check_bus(&self, n: BusId) -> Result<(), NetworkError> {
        if n.0 == 0 || n.0 > self.n_buses {
            Err(NetworkError::BusOutOfRange {
                bus: n.0,
                n_buses: self.n_buses,
            })
        } else {
            Ok(())
        }
    }
}

/// Symmetric bus admittance matrix, `i = Y v`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmittanceMatrix {
    pub matrix: DMatrix<Complex64>,
}

/// Build `Y`: off-diagonal `-y_mn` on lines, diagonal the ground shunt plus
/// each incident line's series admittance and its shunt at this end. The
/// line-end shunts on the diagonal keep injections consistent with flows:
/// `I_n = sum_m I_nm + y_nn V_n`.
pub fn build_admittance(net: &Network) -> AdmittanceMatrix {
    let n = net.n_buses;
    let mut y = DMatrix::<Complex64>::zeros(n, n);
    for (i, gs) in net.ground_shunts.iter().enumerate() {
        y[(i, i)] += gs;
    }
    for l in &net.lines {
        let (m, k) = (l.from.idx(), l.to.idx());
        y[(m, m)] += l.series + l.shunt_from;
        y[(k, k)] += l.series + l.shunt_to;
        y[(m, k)] -= l.series;
        y[(k, m)] -= l.series;
    }
    AdmittanceMatrix { matrix: y }
}

const J: Complex64 = Complex64::new(0.0, 1.0);

/// `(A + A^H)/2` and `j(A - A^H)/2`. Entry-wise construction keeps the
/// results exactly Hermitian in floating point.
fn hermitian_pair(a: &DMatrix<Complex64>) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let n = a.nrows();
    let mut hp = DMatrix::<Complex64>::zeros(n, n);
    let mut hq = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let s = a[(i, j)] + a[(j, i)].conj();
            let d = a[(i, j)] - a[(j, i)].conj();
            hp[(i, j)] = s * 0.5;
            hq[(i, j)] = J * d * 0.5;
        }
    }
    (hp, hq)
}

/// Hermitian pair `(H_{P,n}, H_{Q,n})` for the power injection at bus `n`,
/// built from `Y_n = e_n e_n^T Y` so that
/// `Tr(H_{P,n} vv^H) + j Tr(H_{Q,n} vv^H) = V_n I_n^H`.
pub fn build_injection_matrices(
    net: &Network,
    y: &AdmittanceMatrix,
    n: BusId,
) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>), NetworkError> {
    net.check_bus(n)?;
    let nn = net.n_buses;
    let mut yn = DMatrix::<Complex64>::zeros(nn, nn);
    for j in 0..nn {
        yn[(n.idx(), j)] = y.matrix[(n.idx(), j)];
    }
    Ok(hermitian_pair(&yn))
}

/// Hermitian pair `(H_{P,mn}, H_{Q,mn})` for the power flow metered at end
/// `m` of `line`, from `Y_mn = (ybar_mn + y_mn) e_m e_m^T - y_mn e_m e_n^T`.
pub fn build_flow_matrices(
    net: &Network,
    line: &Line,
    direction: FlowDirection,
) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>), NetworkError> {
    if !net.lines.iter().any(|l| l == line) {
        return Err(NetworkError::LineNotFound {
            from: line.from.0,
            to: line.to.0,
        });
    }
    let (m, n, shunt) = match direction {
        FlowDirection::FromTo => (line.from.idx(), line.to.idx(), line.shunt_from),
        FlowDirection::ToFrom => (line.to.idx(), line.from.idx(), line.shunt_to),
    };
    let nn = net.n_buses;
    let mut ymn = DMatrix::<Complex64>::zeros(nn, nn);
    ymn[(m, m)] = shunt + line.series;
    ymn[(m, n)] = -line.series;
    Ok(hermitian_pair(&ymn))
}

/// `H_{V,n} = e_n e_n^T`, so `Tr(H_{V,n} vv^H) = |V_n|^2`.
pub fn build_voltage_matrix(net: &Network, n: BusId) -> Result<DMatrix<Complex64>, NetworkError> {
    net.check_bus(n)?;
    let mut h = DMatrix::<Complex64>::zeros(net.n_buses, net.n_buses);
    h[(n.idx(), n.idx())] = Complex64::new(1.0, 0.0);
    Ok(h)
}

/// The per-measurement Hermitian matrices `H_l`, in plan order.
#[derive(Debug, Clone)]
pub struct HermitianCoeffs {
    pub n_buses: usize,
    pub matrices: Vec<DMatrix<Complex64>>,
}

impl HermitianCoeffs {
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// `h_l(v) = Tr(H_l vv^H) = v^H H_l v`, real for Hermitian `H_l`.
    pub fn eval_one(&self, l: usize, v: &DVector<Complex64>) -> f64 {
        let hv = &self.matrices[l] * v;
        v.dotc(&hv).re
    }
}
