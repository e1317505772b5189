//! Nullspace of the intertwiner equation `f·M1 = M2·f`.

use crate::CMat;

/// Basis of `{f : f·M1 = M2·f}` for square `M1` (d1×d1) and `M2` (d2×d2);
/// each basis element is a d2×d1 matrix. Empty means only the zero morphism.
///
/// The equation is linearized over the entries of `f` and the nullspace read
/// off an SVD of the resulting (d1·d2)×(d1·d2) operator.
pub fn sylvester_kernel(m1: &CMat, m2: &CMat) -> Vec<CMat> {
    assert_eq!(m1.nrows(), m1.ncols(), "M1 must be square");
    assert_eq!(m2.nrows(), m2.ncols(), "M2 must be square");
    let d1 = m1.nrows();
    let d2 = m2.nrows();
    let n = d1 * d2;
    if n == 0 {
        return Vec::new();
    }

    // Row (i,j) of the operator: coefficient of f_{k,l} in (f·M1 - M2·f)_{i,j}
    // is δ_{ik}·M1_{l,j} - M2_{i,k}·δ_{l,j}, with f indexed row-major (i,j) ↦ i·d1+j.
    let idx = |i: usize, j: usize| i * d1 + j;
    let mut op = CMat::zeros(n, n);
    for i in 0..d2 {
        for j in 0..d1 {
            let row = idx(i, j);
            for l in 0..d1 {
                op[(row, idx(i, l))] += m1[(l, j)];
            }
            for k in 0..d2 {
                op[(row, idx(k, j))] -= m2[(i, k)];
            }
        }
    }

    let svd = op.svd(false, true);
    let v_t = svd.v_t.expect("svd computed with V^T");
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let cut = if smax > 0.0 { smax * 1e-10 } else { 1e-12 };

    let mut basis = Vec::new();
    for (r, &s) in svd.singular_values.iter().enumerate() {
        if s <= cut {
            let mut f = CMat::zeros(d2, d1);
            for i in 0..d2 {
                for j in 0..d1 {
                    f[(i, j)] = v_t[(r, idx(i, j))].conj();
                }
            }
            basis.push(f);
        }
    }
    // Singular vectors with tiny singular values can come in any order; fix a
    // deterministic one by the position of the largest entry.
    basis.sort_by_key(|f| {
        f.iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .map(|(i, _)| i)
            .unwrap_or(0)
    });
    basis
}

/// `‖f·M1 - M2·f‖` (Frobenius), for checking kernel membership.
pub fn sylvester_residual(f: &CMat, m1: &CMat, m2: &CMat) -> f64 {
    (f * m1 - m2 * f).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{nilpotent_exp, NilpotentMatrix};
    use crate::C64;
    use std::f64::consts::TAU;

    #[test]
    fn identity_pair_has_full_kernel() {
        let i3 = CMat::identity(3, 3);
        let basis = sylvester_kernel(&i3, &i3);
        assert_eq!(basis.len(), 9);
        for f in &basis {
            assert!(sylvester_residual(f, &i3, &i3) < 1e-12);
        }
    }

    #[test]
    fn distinct_unit_scalars_give_empty_kernel() {
        // no shared eigenvalues => only the zero morphism
        let m1 = CMat::from_element(1, 1, (-C64::i() * TAU * 0.3).exp());
        let m2 = CMat::identity(1, 1);
        assert!(sylvester_kernel(&m1, &m2).is_empty());
    }

    #[test]
    fn unipotent_jordan_pair_has_dim_two() {
        let j2 = NilpotentMatrix::jordan(2);
        let m = nilpotent_exp(&j2, C64::new(1.0, 0.0));
        let basis = sylvester_kernel(&m, &m);
        // brute-force oracle: nullity of the 4x4 operator f ↦ fM - Mf over a
        // dense sample of f's is 2 (span{I, J2})
        assert_eq!(basis.len(), 2);
        for f in &basis {
            assert!(sylvester_residual(f, &m, &m) < 1e-12);
        }
    }

    #[test]
    fn kernel_matches_commutant_of_nilpotents() {
        // {f : f N1 = N2 f} for J3 vs J3 has dimension 3
        let n = NilpotentMatrix::jordan(3);
        let basis = sylvester_kernel(n.matrix(), n.matrix());
        assert_eq!(basis.len(), 3);
    }
}
