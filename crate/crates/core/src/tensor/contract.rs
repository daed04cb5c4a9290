use super::matrix::{ComplexMatrix, ComplexVector, ZERO};
use crate::error::{Result, WitnessError};

/// Effective local operator on subsystem `j` (0-based).
///
/// Returns `M[k, l] = <u, k| P |u, l>` where `u` is the product of every
/// local vector except the one at `j` (whose entry in `vectors` is ignored).
pub fn contract_all_but_one(
    p: &ComplexMatrix,
    vectors: &[ComplexVector],
    j: usize,
    dims: &[usize],
) -> Result<ComplexMatrix> {
    let m = dims.len();
    if vectors.len() != m {
        return Err(WitnessError::DimensionMismatch {
            expected: m,
            found: vectors.len(),
        });
    }
    if j >= m {
        return Err(WitnessError::DimensionMismatch {
            expected: m,
            found: j + 1,
        });
    }
    for (i, (v, &n)) in vectors.iter().zip(dims).enumerate() {
        if i != j && v.dim() != n {
            return Err(WitnessError::DimensionMismatch {
                expected: n,
                found: v.dim(),
            });
        }
    }
    let d: usize = dims.iter().product();
    if p.rows() != d || p.cols() != d {
        return Err(WitnessError::DimensionMismatch {
            expected: d,
            found: p.rows().max(p.cols()),
        });
    }

    let nj = dims[j];
    // Weight of every flat index once the j-th label is factored out:
    // amp[x] = prod_{i != j} v_i[x_i], local[x] = x_j.
    let stride_j: usize = dims[j + 1..].iter().product();
    let mut amp = vec![ZERO; d];
    let mut local = vec![0usize; d];
    for (x, slot) in amp.iter_mut().enumerate() {
        let mut rem = x;
        let mut w = super::matrix::ONE;
        for i in (0..m).rev() {
            let label = rem % dims[i];
            rem /= dims[i];
            if i != j {
                w *= vectors[i][label];
            }
        }
        *slot = w;
        local[x] = (x / stride_j) % nj;
    }

    // sums[row * nj + l] = sum_{y : y_j = l} P[row, y] * amp[y]
    let mut sums = vec![ZERO; d * nj];
    for (row, acc) in sums.chunks_mut(nj).enumerate() {
        for (y, (&entry, &a)) in p.row(row).iter().zip(&amp).enumerate() {
            if a != ZERO && entry != ZERO {
                acc[local[y]] += entry * a;
            }
        }
    }
    let mut out = ComplexMatrix::zeros(nj, nj);
    for (x, acc) in sums.chunks(nj).enumerate() {
        if amp[x] == ZERO {
            continue;
        }
        let k = local[x];
        for (l, &val) in acc.iter().enumerate() {
            let cur = out.get(k, l);
            out.set(k, l, cur + amp[x].conj() * val);
        }
    }
    Ok(out)
}
