//! Randomized falsification of transversality.
//!
//! Each sample draws `q` factors with independent complex Gaussian entries and
//! evaluates the pairing through the Plücker coordinates, divided by the Gram
//! determinant `Σ|b_J|²` of the factors. An optional refinement pass then
//! minimizes over one factor at a time: with the others orthonormal and the
//! moving factor `f = W y` in their orthogonal complement, the normalized
//! pairing is the Rayleigh quotient of a small Hermitian matrix in `y`, whose
//! smallest eigenpair is the exact minimum along that factor.
//!
//! Samples are split into fixed-size chunks; chunk `k` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` on stream `k`, so results do not depend on
//! the thread count.

use nalgebra::DMatrix;
use num::complex::Complex64;
use num::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::{pairing_matrix, SamplingConfig, TransversalityVerdict, Witness};
use crate::error::{Error, Result};
use crate::exterior::{subsets_of_size, InvariantForm};
use crate::scalar::Scalar;

const CHUNK: usize = 128;

/// Float data shared by all samples.
pub struct PairingModel {
    pub n: usize,
    pub q: usize,
    subsets: Vec<Vec<usize>>,
    /// `Qᵀ`, so that the pairing is `b* Qᵀ b`.
    qt: DMatrix<Complex64>,
}

impl PairingModel {
    pub fn new<S: Scalar>(psi: &InvariantForm<S>, p: usize, eps: f64) -> Result<Self> {
        let n = psi.rank();
        let q = n - p;
        let q_mat = pairing_matrix(psi, p, eps)?;
        let dim = q_mat.len();
        let qt = DMatrix::from_fn(dim, dim, |i, j| q_mat[j][i].to_c64());
        let subsets = subsets_of_size(n, q)
            .into_iter()
            .map(|h| (0..n).filter(|&j| h & (1 << j) != 0).collect())
            .collect();
        Ok(PairingModel { n, q, subsets, qt })
    }

    /// Plücker coordinates of the factor rows.
    pub fn plucker(&self, factors: &[Vec<Complex64>]) -> Vec<Complex64> {
        self.subsets
            .iter()
            .map(|cols| {
                let m = DMatrix::from_fn(self.q, self.q, |r, c| factors[r][cols[c]]);
                if self.q == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    m.determinant()
                }
            })
            .collect()
    }

    fn quad(&self, b: &[Complex64]) -> f64 {
        let v = DMatrix::from_column_slice(b.len(), 1, b);
        (v.adjoint() * &self.qt * &v)[(0, 0)].re
    }

    /// Pairing divided by the Gram determinant; `None` for a zero form.
    pub fn normalized(&self, factors: &[Vec<Complex64>]) -> Option<f64> {
        let b = self.plucker(factors);
        let gram: f64 = b.iter().map(|c| c.norm_sqr()).sum();
        (gram > 1e-300).then(|| self.quad(&b) / gram)
    }

    /// One pass of exact per-factor minimization. Returns the final value.
    pub fn refine(&self, factors: &mut [Vec<Complex64>]) -> Option<f64> {
        let q = self.q;
        if q == 0 {
            return self.normalized(factors);
        }
        let n = self.n;
        let mut value = None;
        for k in 0..q {
            let others: Vec<Vec<Complex64>> = (0..q).filter(|&i| i != k).map(|i| factors[i].clone()).collect();
            let Some(onb) = orthonormalize(&others) else {
                return self.normalized(factors);
            };
            let w = complement(&onb, n);
            // D: column j is the Plücker vector with factor k = e_j
            let mut rows = Vec::with_capacity(q);
            rows.extend(onb.iter().cloned());
            rows.insert(k, vec![Complex64::zero(); n]);
            let dim = self.subsets.len();
            let mut d = DMatrix::<Complex64>::zeros(dim, n);
            for j in 0..n {
                rows[k] = unit(n, j);
                let b = self.plucker(&rows);
                for (r, x) in b.into_iter().enumerate() {
                    d[(r, j)] = x;
                }
            }
            let wm = DMatrix::from_fn(n, w.len(), |r, c| w[c][r]);
            let dw = &d * &wm;
            let m = dw.adjoint() * &self.qt * &dw;
            // symmetrize against rounding before the Hermitian solver
            let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
            let eig = m.symmetric_eigen();
            let (imin, lam) = eig
                .eigenvalues
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite"))
                .map(|(i, l)| (i, *l))?;
            let y = eig.eigenvectors.column(imin);
            let f = &wm * y;
            for (i, row) in onb.into_iter().enumerate() {
                let slot = if i < k { i } else { i + 1 };
                factors[slot] = row;
            }
            factors[k] = f.iter().copied().collect();
            value = Some(lam);
        }
        value
    }
}

fn unit(n: usize, j: usize) -> Vec<Complex64> {
    (0..n)
        .map(|i| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::zero() })
        .collect()
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Gram–Schmidt with one reorthogonalization; `None` if dependent.
fn orthonormalize(vs: &[Vec<Complex64>]) -> Option<Vec<Vec<Complex64>>> {
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(vs.len());
    for v in vs {
        let mut w = v.clone();
        for _ in 0..2 {
            for u in &out {
                let c = dot(u, &w);
                for (x, y) in w.iter_mut().zip(u) {
                    *x -= c * y;
                }
            }
        }
        let norm = dot(&w, &w).re.sqrt();
        if norm < 1e-12 {
            return None;
        }
        out.push(w.into_iter().map(|x| x / norm).collect());
    }
    Some(out)
}

/// Orthonormal basis of the orthogonal complement of an orthonormal set.
fn complement(onb: &[Vec<Complex64>], n: usize) -> Vec<Vec<Complex64>> {
    let mut basis = onb.to_vec();
    let mut out = Vec::new();
    for j in 0..n {
        if basis.len() == n {
            break;
        }
        let mut w = unit(n, j);
        for _ in 0..2 {
            for u in &basis {
                let c = dot(u, &w);
                for (x, y) in w.iter_mut().zip(u) {
                    *x -= c * y;
                }
            }
        }
        let norm = dot(&w, &w).re.sqrt();
        if norm > 1e-8 {
            let w: Vec<Complex64> = w.into_iter().map(|x| x / norm).collect();
            basis.push(w.clone());
            out.push(w);
        }
    }
    out
}

#[derive(Clone, Debug)]
struct Best {
    value: f64,
    index: usize,
    factors: Vec<Vec<Complex64>>,
}

fn better(a: Best, b: Best) -> Best {
    if b.value < a.value || (b.value == a.value && b.index < a.index) {
        b
    } else {
        a
    }
}

/// Samples `cfg.samples` simple forms. Falsifies on any normalized pairing
/// `≤ cfg.tol`; otherwise reports the minimum.
pub fn transversality_sample<S: Scalar>(
    psi: &InvariantForm<S>,
    p: usize,
    cfg: &SamplingConfig,
) -> Result<TransversalityVerdict> {
    if cfg.samples == 0 {
        return Err(Error::Invalid("sample count must be positive".into()));
    }
    let model = PairingModel::new(psi, p, cfg.eps)?;
    let chunks = cfg.samples.div_ceil(CHUNK);
    let best = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(chunk as u64);
            let start = chunk * CHUNK;
            let end = (start + CHUNK).min(cfg.samples);
            let mut best: Option<Best> = None;
            for index in start..end {
                let mut factors: Vec<Vec<Complex64>> = (0..model.q)
                    .map(|_| {
                        (0..model.n)
                            .map(|_| {
                                let re: f64 = StandardNormal.sample(&mut rng);
                                let im: f64 = StandardNormal.sample(&mut rng);
                                Complex64::new(re, im)
                            })
                            .collect()
                    })
                    .collect();
                let mut value = model.normalized(&factors).unwrap_or(0.0);
                let mut witness = factors.clone();
                if cfg.refine && value > cfg.tol {
                    if let Some(v) = model.refine(&mut factors) {
                        // recompute from the refined factors rather than trusting λ
                        let v = model.normalized(&factors).unwrap_or(v);
                        if v < value {
                            value = v;
                            witness = factors;
                        }
                    }
                }
                let cand = Best {
                    value,
                    index,
                    factors: witness,
                };
                best = Some(match best {
                    None => cand,
                    Some(b) => better(b, cand),
                });
            }
            best.expect("nonempty chunk")
        })
        .reduce_with(better)
        .expect("at least one chunk");
    if best.value <= cfg.tol {
        Ok(TransversalityVerdict::Falsified {
            value: best.value,
            exact_value: None,
            witness: Witness::from_c64_factors(&best.factors),
            samples: Some(cfg.samples),
            seed: Some(cfg.seed),
        })
    } else {
        Ok(TransversalityVerdict::NotFalsified {
            samples: cfg.samples,
            min_value: best.value,
            seed: cfg.seed,
        })
    }
}

/// Normalized pairings of `psi` on a fixed list of factor sets; used to compare
/// forms sample by sample.
pub fn normalized_pairings<S: Scalar>(
    psi: &InvariantForm<S>,
    p: usize,
    samples: &[Vec<Vec<Complex64>>],
    eps: f64,
) -> Result<Vec<Option<f64>>> {
    let model = PairingModel::new(psi, p, eps)?;
    Ok(samples.iter().map(|f| model.normalized(f)).collect())
}

/// Draws `count` factor sets with the same generator as the sampler.
pub fn draw_factors(n: usize, q: usize, count: usize, seed: u64) -> Vec<Vec<Vec<Complex64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..q)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            let re: f64 = StandardNormal.sample(&mut rng);
                            let im: f64 = StandardNormal.sample(&mut rng);
                            Complex64::new(re, im)
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::sigma;
    use crate::scalar::{q, GaussRat};

    type F = InvariantForm<GaussRat>;

    fn diag_omega(n: usize) -> F {
        let mut w = F::zero(n);
        for i in 1..=n {
            w = w + F::word(n, &format!("{i}{i}b"), sigma(1)).unwrap();
        }
        w
    }

    #[test]
    fn metric_power_is_not_falsified_and_negation_is() {
        let psi = diag_omega(4).power(2);
        let cfg = SamplingConfig {
            samples: 500,
            seed: 7,
            ..SamplingConfig::default()
        };
        let v = transversality_sample(&psi, 2, &cfg).unwrap();
        let TransversalityVerdict::NotFalsified { min_value, .. } = v else {
            panic!("{v:?}")
        };
        assert!(min_value > 0.0);
        let v = transversality_sample(&(-psi), 2, &cfg).unwrap();
        assert!(v.is_falsified());
    }

    #[test]
    fn refinement_finds_the_minimum_for_q_one() {
        // (1,1)-form (i/2)(φ^{11̄} − φ^{22̄}): minimum −1 along φ²
        let psi = F::from_words(2, [("11b", sigma(1)), ("22b", -sigma::<GaussRat>(1))]).unwrap();
        let model = PairingModel::new(&psi, 1, 0.0).unwrap();
        let mut f = vec![vec![Complex64::new(0.3, 0.1), Complex64::new(0.5, -0.2)]];
        let v = model.refine(&mut f).unwrap();
        assert!((v + 1.0).abs() < 1e-12, "{v}");
        let _ = q(1, 1);
    }

    #[test]
    fn sampling_is_reproducible() {
        let psi = diag_omega(3).power(2);
        let cfg = SamplingConfig {
            samples: 300,
            seed: 99,
            ..SamplingConfig::default()
        };
        let a = transversality_sample(&psi, 2, &cfg).unwrap();
        let b = transversality_sample(&psi, 2, &cfg).unwrap();
        assert_eq!(a, b);
    }
}
