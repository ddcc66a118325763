use nalgebra::{DMatrix, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::word::Word;
use crate::error::{Error, Result};
use crate::mobius::GroupSignature;

#[derive(Clone, Debug, Serialize)]
pub struct AlmostLawReport {
    pub word_length: usize,
    pub level: Option<usize>,
    pub samples: usize,
    pub seed: u64,
    /// max over samples of the distance of w(U, V) to the identity.
    pub sup: f64,
    pub mean: f64,
}

/// Haar-distributed element of O(n): QR of a Gaussian matrix with the
/// signs of R's diagonal moved into Q.
pub fn haar_orthogonal<R: rand::Rng>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| StandardNormal.sample(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// ||Q - I||_2 for orthogonal Q: (Q - I)^T (Q - I) = 2I - Q - Q^T.
pub fn distance_to_identity(q: &DMatrix<f64>) -> f64 {
    let n = q.nrows();
    let m = DMatrix::identity(n, n) * 2.0 - q - q.transpose();
    let ev = SymmetricEigen::new(m).eigenvalues;
    ev.iter().cloned().fold(0.0, f64::max).sqrt()
}

fn eval_orthogonal(w: &Word, u: &DMatrix<f64>, v: &DMatrix<f64>) -> DMatrix<f64> {
    let (ut, vt) = (u.transpose(), v.transpose());
    let mut acc = DMatrix::identity(u.nrows(), u.nrows());
    for &l in w.letters() {
        let m = match l {
            1 => u,
            -1 => &ut,
            2 => v,
            _ => &vt,
        };
        acc = acc * m;
    }
    acc
}

/// Sample pairs (U, V) in (O3)^a x (O4)^b and measure how far w(U, V) is from 1.
pub fn measure_epsilon(w: &Word, sig: GroupSignature, samples: usize, seed: u64) -> Result<AlmostLawReport> {
    if samples == 0 {
        return Err(Error::param("samples must be >= 1"));
    }
    if sig.a + sig.b == 0 {
        return Err(Error::param("a + b must be at least 1"));
    }
    if w.rank() > 2 {
        return Err(Error::param("almost laws are words in two letters"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims: Vec<usize> = std::iter::repeat(3).take(sig.a).chain(std::iter::repeat(4).take(sig.b)).collect();
    let mut sup = 0.0f64;
    let mut total = 0.0;
    for _ in 0..samples {
        let mut d = 0.0f64;
        for &n in &dims {
            let u = haar_orthogonal(n, &mut rng);
            let v = haar_orthogonal(n, &mut rng);
            d = d.max(distance_to_identity(&eval_orthogonal(w, &u, &v)));
        }
        sup = sup.max(d);
        total += d;
    }
    Ok(AlmostLawReport { word_length: w.len(), level: None, samples, seed, sup, mean: total / samples as f64 })
}
