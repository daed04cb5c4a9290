//! Pure-state qubit concurrence from W-class pairwise minors and GHZ-class
//! complementary-product differences.

use std::collections::BTreeMap;

use crate::error::{Result, WitnessError};
use crate::states::PureState;
use crate::tensor::C64;

/// Weight on every W-class minor.
pub const W_CLASS_WEIGHT: f64 = 2.0;
/// Weight on every GHZ-class difference.
pub const GHZ_CLASS_WEIGHT: f64 = 1.0;
/// Default overall normalization.
pub const DEFAULT_NORMALIZATION: f64 = 1.0;

/// Per-term audit of a concurrence evaluation. Term values already include
/// their class weight; `total_squared = normalization * sum(terms)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConcurrenceBreakdown {
    /// Keyed `W(r1,r2):<ctx>` where `ctx` writes the fixed labels and `*`
    /// at the contracted positions.
    pub w_terms: BTreeMap<String, f64>,
    /// Keyed `GHZ:<x>.<x~>-<y>.<y~>`.
    pub ghz_terms: BTreeMap<String, f64>,
    pub normalization: f64,
    pub total_squared: f64,
    pub total: f64,
}

impl ConcurrenceBreakdown {
    fn from_terms(
        w_terms: BTreeMap<String, f64>,
        ghz_terms: BTreeMap<String, f64>,
        normalization: f64,
    ) -> Self {
        let raw: f64 = w_terms.values().sum::<f64>() + ghz_terms.values().sum::<f64>();
        let total_squared = normalization * raw;
        Self {
            w_terms,
            ghz_terms,
            normalization,
            total_squared,
            total: total_squared.sqrt(),
        }
    }
}

fn require_qubits(psi: &PureState, min_m: usize) -> Result<()> {
    let shape = psi.shape();
    if !shape.is_qubits() {
        return Err(WitnessError::WrongShape(format!(
            "concurrence is defined for qubits, got dims {:?}",
            shape.dims()
        )));
    }
    if shape.m() < min_m {
        return Err(WitnessError::WrongShape(format!(
            "need at least {min_m} qubits, got {}",
            shape.m()
        )));
    }
    Ok(())
}

fn label_string(labels: &[usize]) -> String {
    labels.iter().map(|l| char::from(b'0' + *l as u8)).collect()
}

/// The twelve-term closed form for three qubits, evaluated term by term.
pub fn three_qubit_concurrence(psi: &PureState) -> Result<ConcurrenceBreakdown> {
    require_qubits(psi, 3)?;
    if psi.shape().m() != 3 {
        return Err(WitnessError::WrongShape(format!(
            "expected exactly 3 qubits, got {}",
            psi.shape().m()
        )));
    }
    let a = |i: usize, j: usize, k: usize| -> C64 {
        psi.amplitude(&[i, j, k]).expect("labels within range")
    };
    let sq = |z: C64| z.norm_sqr();

    let mut w = BTreeMap::new();
    w.insert("W(1,2):**1".to_string(), 2.0 * sq(a(1, 1, 1) * a(2, 2, 1) - a(1, 2, 1) * a(2, 1, 1)));
    w.insert("W(1,2):**2".to_string(), 2.0 * sq(a(1, 1, 2) * a(2, 2, 2) - a(1, 2, 2) * a(2, 1, 2)));
    w.insert("W(1,3):*1*".to_string(), 2.0 * sq(a(1, 1, 1) * a(2, 1, 2) - a(1, 1, 2) * a(2, 1, 1)));
    w.insert("W(1,3):*2*".to_string(), 2.0 * sq(a(1, 2, 1) * a(2, 2, 2) - a(1, 2, 2) * a(2, 2, 1)));
    w.insert("W(2,3):1**".to_string(), 2.0 * sq(a(1, 1, 1) * a(1, 2, 2) - a(1, 1, 2) * a(1, 2, 1)));
    w.insert("W(2,3):2**".to_string(), 2.0 * sq(a(2, 1, 1) * a(2, 2, 2) - a(2, 1, 2) * a(2, 2, 1)));

    let p111 = a(1, 1, 1) * a(2, 2, 2);
    let p112 = a(1, 1, 2) * a(2, 2, 1);
    let p121 = a(1, 2, 1) * a(2, 1, 2);
    let p122 = a(1, 2, 2) * a(2, 1, 1);
    let mut g = BTreeMap::new();
    g.insert("GHZ:111.222-112.221".to_string(), sq(p111 - p112));
    g.insert("GHZ:111.222-121.212".to_string(), sq(p111 - p121));
    g.insert("GHZ:111.222-122.211".to_string(), sq(p111 - p122));
    g.insert("GHZ:112.221-121.212".to_string(), sq(p112 - p121));
    g.insert("GHZ:112.221-122.211".to_string(), sq(p112 - p122));
    g.insert("GHZ:121.212-122.211".to_string(), sq(p121 - p122));

    Ok(ConcurrenceBreakdown::from_terms(w, g, DEFAULT_NORMALIZATION))
}

fn w_class_term_map(psi: &PureState, r1: usize, r2: usize) -> Result<BTreeMap<String, f64>> {
    require_qubits(psi, 2)?;
    let m = psi.shape().m();
    if r1 < 1 || r1 >= r2 || r2 > m {
        return Err(WitnessError::BadPositions { r1, r2, m });
    }
    let others: Vec<usize> = (1..=m).filter(|&j| j != r1 && j != r2).collect();
    let amps = psi.amplitudes();
    let flat = |labels: &[usize]| -> usize { labels.iter().fold(0, |acc, &l| acc * 2 + (l - 1)) };

    let mut out = BTreeMap::new();
    let mut labels = vec![0usize; m];
    for ctx in 0..(1usize << others.len()) {
        for (b, &pos) in others.iter().enumerate() {
            labels[pos - 1] = ((ctx >> (others.len() - 1 - b)) & 1) + 1;
        }
        let mut at = |k: usize, l: usize| {
            labels[r1 - 1] = k;
            labels[r2 - 1] = l;
            amps[flat(&labels)]
        };
        let minor = at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1);
        let mut key_labels: Vec<char> = labels.iter().map(|&l| char::from(b'0' + l as u8)).collect();
        key_labels[r1 - 1] = '*';
        key_labels[r2 - 1] = '*';
        let key = format!("W({r1},{r2}):{}", key_labels.into_iter().collect::<String>());
        out.insert(key, W_CLASS_WEIGHT * minor.norm_sqr());
    }
    Ok(out)
}

/// Weighted sum of squared 2x2 minors on positions `(r1, r2)` over every
/// assignment of the remaining labels.
pub fn w_class_terms(psi: &PureState, r1: usize, r2: usize) -> Result<f64> {
    Ok(w_class_term_map(psi, r1, r2)?.values().sum())
}

fn ghz_class_term_map(psi: &PureState) -> Result<BTreeMap<String, f64>> {
    require_qubits(psi, 2)?;
    let d = psi.dim();
    let amps = psi.amplitudes();
    // Representatives carry label 1 on the first qubit; x~ = d - 1 - x.
    let reps: Vec<(usize, C64)> = (0..d / 2).map(|x| (x, amps[x] * amps[d - 1 - x])).collect();
    let name = |x: usize| -> String {
        let l = psi.shape().labels(x).expect("in range");
        let lb = psi.shape().labels(d - 1 - x).expect("in range");
        format!("{}.{}", label_string(&l), label_string(&lb))
    };
    let mut out = BTreeMap::new();
    for (i, &(x, px)) in reps.iter().enumerate() {
        for &(y, py) in &reps[i + 1..] {
            out.insert(format!("GHZ:{}-{}", name(x), name(y)), GHZ_CLASS_WEIGHT * (px - py).norm_sqr());
        }
    }
    Ok(out)
}

/// Sum over unordered pairs of complementary label pairs of
/// `|a_x a_x~ - a_y a_y~|^2`.
pub fn ghz_class_terms(psi: &PureState) -> Result<f64> {
    Ok(ghz_class_term_map(psi)?.values().sum())
}

/// `normalization * (sum_{r1<r2} W-class + GHZ-class)`.
pub fn concurrence_general(psi: &PureState, normalization: f64) -> Result<ConcurrenceBreakdown> {
    if !(normalization.is_finite() && normalization > 0.0) {
        return Err(WitnessError::InvalidConfig(format!(
            "normalization must be positive, got {normalization}"
        )));
    }
    require_qubits(psi, 2)?;
    let m = psi.shape().m();
    let mut w = BTreeMap::new();
    for r1 in 1..=m {
        for r2 in (r1 + 1)..=m {
            w.extend(w_class_term_map(psi, r1, r2)?);
        }
    }
    let g = ghz_class_term_map(psi)?;
    Ok(ConcurrenceBreakdown::from_terms(w, g, normalization))
}

/// `C^2` under the default normalization.
pub fn concurrence_squared(psi: &PureState) -> Result<f64> {
    Ok(concurrence_general(psi, DEFAULT_NORMALIZATION)?.total_squared)
}
