//! Reference implementations used only by the tests. Nothing here calls the
//! library's Hamiltonian builder, eigensolver or concurrence routines.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Dense square matrix, row-major.
#[derive(Clone, Debug)]
pub struct Mat {
    pub n: usize,
    pub a: Vec<C>,
}

impl Mat {
    pub fn zeros(n: usize) -> Mat {
        Mat { n, a: vec![C::default(); n * n] }
    }

    pub fn eye(n: usize) -> Mat {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = c(1.0, 0.0);
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> C {
        self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, z: C) {
        self.a[i * self.n + j] = z;
    }

    pub fn dagger(&self) -> Mat {
        let mut m = Mat::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(j, i, self.at(i, j).conj());
            }
        }
        m
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        let n = self.n;
        let mut m = Mat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.at(i, k);
                if x == C::default() {
                    continue;
                }
                for j in 0..n {
                    m.a[i * n + j] += x * o.at(k, j);
                }
            }
        }
        m
    }

    pub fn add(&self, o: &Mat) -> Mat {
        Mat { n: self.n, a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect() }
    }

    pub fn scale(&self, s: C) -> Mat {
        Mat { n: self.n, a: self.a.iter().map(|x| x * s).collect() }
    }

    pub fn kron(&self, o: &Mat) -> Mat {
        let n = self.n * o.n;
        let mut m = Mat::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..o.n {
                    for l in 0..o.n {
                        m.set(i * o.n + k, j * o.n + l, self.at(i, j) * o.at(k, l));
                    }
                }
            }
        }
        m
    }

    pub fn apply(&self, v: &[C]) -> Vec<C> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.at(i, j) * v[j]).sum())
            .collect()
    }

    pub fn trace(&self) -> C {
        (0..self.n).map(|i| self.at(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn kron_all(ops: &[&Mat]) -> Mat {
    ops[1..].iter().fold(ops[0].clone(), |acc, m| acc.kron(m))
}

/// `|g⟩⟨e|` with the excited level first.
pub fn sigma_minus() -> Mat {
    let mut m = Mat::zeros(2);
    m.set(1, 0, c(1.0, 0.0));
    m
}

pub fn sigma_z() -> Mat {
    let mut m = Mat::zeros(2);
    m.set(0, 0, c(1.0, 0.0));
    m.set(1, 1, c(-1.0, 0.0));
    m
}

/// Truncated creation operator on `0..=n_max`; `bosonic` selects `√(n+1)`
/// entries, otherwise unit entries.
pub fn creation(n_max: usize, bosonic: bool) -> Mat {
    let mut m = Mat::zeros(n_max + 1);
    for n in 0..n_max {
        let amp = if bosonic { ((n + 1) as f64).sqrt() } else { 1.0 };
        m.set(n + 1, n, c(amp, 0.0));
    }
    m
}

pub fn number(n_max: usize) -> Mat {
    let mut m = Mat::zeros(n_max + 1);
    for n in 0..=n_max {
        m.set(n, n, c(n as f64, 0.0));
    }
    m
}

/// Hamiltonian assembled as a sum of Kronecker products on
/// atom A ⊗ atom B ⊗ mode a ⊗ mode b.
pub fn hamiltonian_oracle(
    omega_a: f64,
    omega_b: f64,
    omega_0: f64,
    g: f64,
    dipole: f64,
    n_max: usize,
    bosonic: bool,
) -> Mat {
    let i2 = Mat::eye(2);
    let im = Mat::eye(n_max + 1);
    let sm = sigma_minus();
    let sp = sm.dagger();
    let sz = sigma_z();
    let ad = creation(n_max, bosonic);
    let num = number(n_max);

    let field = kron_all(&[&i2, &i2, &num, &im])
        .scale(c(omega_a, 0.0))
        .add(&kron_all(&[&i2, &i2, &im, &num]).scale(c(omega_b, 0.0)));
    let atoms = kron_all(&[&sz, &i2, &im, &im])
        .add(&kron_all(&[&i2, &sz, &im, &im]))
        .scale(c(0.5 * omega_0, 0.0));
    let pair_lower_a = kron_all(&[&sm, &i2, &ad, &ad]);
    let pair_lower_b = kron_all(&[&i2, &sm, &ad, &ad]);
    let pairs = pair_lower_a.add(&pair_lower_b);
    let coupling = pairs.add(&pairs.dagger()).scale(c(g, 0.0));
    let flip = kron_all(&[&sp, &sm, &im, &im]);
    let dd = flip.add(&flip.dagger()).scale(c(dipole, 0.0));
    field.add(&atoms).add(&coupling).add(&dd)
}

/// Excitation-number operator `a†a + b†b + 2·Σ|e⟩⟨e|`.
pub fn excitation_oracle(n_max: usize) -> Mat {
    let i2 = Mat::eye(2);
    let im = Mat::eye(n_max + 1);
    let num = number(n_max);
    let mut pe = Mat::zeros(2);
    pe.set(0, 0, c(2.0, 0.0));
    kron_all(&[&i2, &i2, &num, &im])
        .add(&kron_all(&[&i2, &i2, &im, &num]))
        .add(&kron_all(&[&pe, &i2, &im, &im]))
        .add(&kron_all(&[&i2, &pe, &im, &im]))
}

/// `exp(−iHt)ψ` by Taylor series over short steps.
pub fn taylor_evolve(h: &Mat, psi0: &[C], t: f64) -> Vec<C> {
    let steps = ((t.abs() / 0.05).ceil() as usize).max(1);
    let dt = t / steps as f64;
    let mut psi = psi0.to_vec();
    for _ in 0..steps {
        let mut term = psi.clone();
        let mut acc = psi.clone();
        for k in 1..80 {
            term = h.apply(&term).into_iter().map(|z| z * c(0.0, -dt / k as f64)).collect();
            let size: f64 = term.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for (a, z) in acc.iter_mut().zip(&term) {
                *a += z;
            }
            if size < 1e-18 {
                break;
            }
        }
        psi = acc;
    }
    psi
}

/// Index in the atom A ⊗ atom B ⊗ mode a ⊗ mode b product, excited first.
pub fn product_index(a_excited: bool, b_excited: bool, na: usize, nb: usize, n_max: usize) -> usize {
    let d = n_max + 1;
    let ia = usize::from(!a_excited);
    let ib = usize::from(!b_excited);
    ((ia * 2 + ib) * d + na) * d + nb
}

/// Atomic reduced density matrix of a product-ordered state vector.
pub fn partial_trace(psi: &[C], n_max: usize) -> Mat {
    let field = (n_max + 1) * (n_max + 1);
    let mut rho = Mat::zeros(4);
    for i in 0..4 {
        for j in 0..4 {
            let z: C = (0..field).map(|f| psi[i * field + f] * psi[j * field + f].conj()).sum();
            rho.set(i, j, z);
        }
    }
    rho
}

/// Concurrence from the eigenvalues of `ρ ρ̃`, found as roots of the
/// characteristic polynomial (Newton's identities + Durand-Kerner). Only
/// reliable when those eigenvalues are well separated.
pub fn concurrence_charpoly(rho: &Mat) -> f64 {
    let mut yy = Mat::zeros(4);
    for (i, j, s) in [(0, 3, -1.0), (1, 2, 1.0), (2, 1, 1.0), (3, 0, -1.0)] {
        yy.set(i, j, c(s, 0.0));
    }
    let conj = Mat { n: 4, a: rho.a.iter().map(|z| z.conj()).collect() };
    let r = rho.mul(&yy).mul(&conj).mul(&yy);

    // power sums p_k = tr(R^k), then elementary symmetric polynomials
    let mut p = [C::default(); 5];
    let mut pow = Mat::eye(4);
    for k in 1..=4 {
        pow = pow.mul(&r);
        p[k] = pow.trace();
    }
    let mut e = [C::default(); 5];
    e[0] = c(1.0, 0.0);
    for k in 1..=4 {
        let mut s = C::default();
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            s += e[k - i] * p[i] * sign;
        }
        e[k] = s / k as f64;
    }
    // x⁴ − e1 x³ + e2 x² − e3 x + e4
    let coeffs = [e[4], -e[3], e[2], -e[1], c(1.0, 0.0)];
    let poly = |x: C| coeffs.iter().rev().fold(C::default(), |acc, &k| acc * x + k);
    let mut roots: Vec<C> = (0..4).map(|k| c(0.4, 0.9).powu(k as u32)).collect();
    for _ in 0..500 {
        for i in 0..4 {
            let mut denom = c(1.0, 0.0);
            for j in 0..4 {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = poly(roots[i]) / denom;
            roots[i] -= step;
        }
    }
    let mut mu: Vec<f64> = roots.iter().map(|z| z.re.max(0.0).sqrt()).collect();
    mu.sort_by(|a, b| b.total_cmp(a));
    (mu[0] - mu[1] - mu[2] - mu[3]).max(0.0)
}

/// Random density matrix `G G† / tr` with Gaussian-ish complex `G`.
pub fn random_density<R: Rng>(rng: &mut R, rank: usize) -> Mat {
    let mut g = Mat::zeros(4);
    for i in 0..4 {
        for j in 0..rank {
            g.set(i, j, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        }
    }
    let m = g.mul(&g.dagger());
    let tr = m.trace();
    m.scale(tr.inv())
}

/// Haar-ish random `n×n` unitary by Gram-Schmidt on random columns.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> Mat {
    let mut cols: Vec<Vec<C>> = Vec::new();
    while cols.len() < n {
        let mut v: Vec<C> = (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        for u in &cols {
            let proj: C = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    let mut m = Mat::zeros(n);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            m.set(i, j, col[i]);
        }
    }
    m
}
