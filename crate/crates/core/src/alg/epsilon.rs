//! Levi-Civita symbols and generalized Kronecker deltas for the index
//! contractions used in the antisymmetrized chart computations.

/// Sign of the permutation sorting `idx`, or 0 on a repeated entry.
fn permutation_sign(idx: &[usize]) -> i32 {
    let n = idx.len();
    let mut sign = 1i32;
    for a in 0..n {
        for b in a + 1..n {
            if idx[a] == idx[b] {
                return 0;
            }
            if idx[a] > idx[b] {
                sign = -sign;
            }
        }
    }
    sign
}

/// ε on 4 chart indices (0-based).
pub fn epsilon4(i: usize, j: usize, k: usize, l: usize) -> i32 {
    debug_assert!(i < 4 && j < 4 && k < 4 && l < 4);
    permutation_sign(&[i, j, k, l])
}

/// ε on 5 ambient indices (0-based).
pub fn epsilon5(i: usize, j: usize, k: usize, l: usize, m: usize) -> i32 {
    debug_assert!(i < 5 && j < 5 && k < 5 && l < 5 && m < 5);
    permutation_sign(&[i, j, k, l, m])
}

/// Generalized Kronecker delta δ^{abc}_{ijk} as the determinant of the 3×3
/// matrix of ordinary deltas.
pub fn gen_delta3(upper: [usize; 3], lower: [usize; 3]) -> i32 {
    let d = |a: usize, i: usize| -> i32 { (a == i) as i32 };
    let m: [[i32; 3]; 3] = [
        [d(upper[0], lower[0]), d(upper[0], lower[1]), d(upper[0], lower[2])],
        [d(upper[1], lower[0]), d(upper[1], lower[1]), d(upper[1], lower[2])],
        [d(upper[2], lower[0]), d(upper[2], lower[1]), d(upper[2], lower[2])],
    ];
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon4_total_antisymmetry() {
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let e = epsilon4(i, j, k, l);
                        assert_eq!(e, -epsilon4(j, i, k, l));
                        assert_eq!(e, -epsilon4(i, j, l, k));
                        if [i, j, k, l] == [0, 1, 2, 3] {
                            assert_eq!(e, 1);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gen_delta3_is_signed_permutation_sum() {
        // δ^{abc}_{ijk} = Σ_σ sgn(σ) δ^a_{σ(i)} δ^b_{σ(j)} δ^c_{σ(k)}
        let perms: [([usize; 3], i32); 6] = [
            ([0, 1, 2], 1),
            ([0, 2, 1], -1),
            ([1, 0, 2], -1),
            ([1, 2, 0], 1),
            ([2, 0, 1], 1),
            ([2, 1, 0], -1),
        ];
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for i in 0..4 {
                        for j in 0..4 {
                            for k in 0..4 {
                                let lower = [i, j, k];
                                let upper = [a, b, c];
                                let mut acc = 0;
                                for (p, sg) in perms {
                                    let permuted = [lower[p[0]], lower[p[1]], lower[p[2]]];
                                    acc += sg
                                        * (upper[0] == permuted[0]) as i32
                                        * (upper[1] == permuted[1]) as i32
                                        * (upper[2] == permuted[2]) as i32;
                                }
                                assert_eq!(gen_delta3(upper, lower), acc);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn epsilon4_pair_contraction() {
        // ε_{ijkl} ε_{mnkl} = 2 (δ_im δ_jn − δ_in δ_jm)
        for i in 0..4 {
            for j in 0..4 {
                for m in 0..4 {
                    for n in 0..4 {
                        let mut acc = 0;
                        for k in 0..4 {
                            for l in 0..4 {
                                acc += epsilon4(i, j, k, l) * epsilon4(m, n, k, l);
                            }
                        }
                        let expect = 2 * ((i == m) as i32 * (j == n) as i32
                            - (i == n) as i32 * (j == m) as i32);
                        assert_eq!(acc, expect);
                    }
                }
            }
        }
    }

    #[test]
    fn epsilon5_normalization() {
        assert_eq!(epsilon5(0, 1, 2, 3, 4), 1);
        assert_eq!(epsilon5(1, 0, 2, 3, 4), -1);
        assert_eq!(epsilon5(0, 0, 2, 3, 4), 0);
    }
}
