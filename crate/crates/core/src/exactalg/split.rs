//! Sections of surjections subject to intertwining constraints.

use super::howell::{howell_form, kernel, HowellTransform};
use super::{AlgebraError, Mat};

/// For `pi: Λ^m -> Λ^n` (an `m x n` matrix acting on row vectors), looks for
/// `s` (`n x m`) with `s * pi = I` and `L * s = s * R` for every constraint
/// `(L, R)`, where `L` is `n x n` and `R` is `m x m`.
pub fn split_test(pi: &Mat, constraints: &[(Mat, Mat)]) -> Result<Option<Mat>, AlgebraError> {
    let ring = pi.ring();
    let (m, n) = (pi.rows(), pi.cols());
    for (l, r) in constraints {
        if l.rows() != n || l.cols() != n || r.rows() != m || r.cols() != m {
            return Err(AlgebraError::Dimension("constraint shapes do not match the surjection".into()));
        }
    }
    if !howell_form(pi).is_full() {
        return Err(AlgebraError::NotSurjection);
    }
    let ht = HowellTransform::new(pi);
    let mut s0 = Mat::zeros(ring, n, m);
    let mut unit = vec![0u32; n];
    for i in 0..n {
        unit[i] = 1;
        let x = ht.solve(&unit).expect("surjective map has preimages");
        s0.row_mut(i).copy_from_slice(&x);
        unit[i] = 0;
    }
    let kb = kernel(pi);
    let k = kb.len();
    let kmat = kb.as_mat();

    let residual = |s: &Mat| -> Vec<u32> {
        let mut out = Vec::new();
        for (l, r) in constraints {
            out.extend_from_slice(s.mul(r).sub(&l.mul(s)).data());
        }
        out
    };
    let rhs: Vec<u32> = residual(&s0).iter().map(|&a| ring.neg(a)).collect();
    if rhs.iter().all(|&a| a == 0) {
        return Ok(Some(s0));
    }
    if k == 0 {
        return Ok(None);
    }
    // Z -> (Z K) R - L (Z K), one row per entry of Z
    let width = n * m * constraints.len();
    let mut sys = Mat::zeros(ring, n * k, width);
    let krs: Vec<Mat> = constraints.iter().map(|(_, r)| kmat.mul(r)).collect();
    for i in 0..n {
        for j in 0..k {
            let row = sys.row_mut(i * k + j);
            for (ci, (l, _)) in constraints.iter().enumerate() {
                let base = ci * n * m;
                for b in 0..m {
                    let v = krs[ci].get(j, b);
                    if v != 0 {
                        row[base + i * m + b] = ring.add(row[base + i * m + b], v);
                    }
                }
                for a in 0..n {
                    let la = l.get(a, i);
                    if la == 0 {
                        continue;
                    }
                    for b in 0..m {
                        let kv = kmat.get(j, b);
                        if kv != 0 {
                            let cell = &mut row[base + a * m + b];
                            *cell = ring.sub(*cell, ring.mul(la, kv));
                        }
                    }
                }
            }
        }
    }
    let Some(z) = HowellTransform::new(&sys).solve(&rhs) else {
        return Ok(None);
    };
    let zmat = Mat::from_vec(ring, n, k, z);
    let s = s0.add(&zmat.mul(&kmat));
    debug_assert!(residual(&s).iter().all(|&a| a == 0));
    Ok(Some(s))
}
