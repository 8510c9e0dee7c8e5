//! Cross-check of the zero-discord decision procedure against a brute-force
//! search over party-A bases, for party-A dimensions 2 and 4.

use dqc1::bipartite::Bipartition;
use dqc1::discord::{blocks, default_discord_tolerance, is_zero_discord, is_zero_discord_commuting, BlockDecomposition};
use dqc1::linalg::{hermitian_eigen, kron, ComplexMatrix};
use dqc1::{haar_random_unitary, DensityMatrix};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        h[(r, r)] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
        for c in r + 1..dim {
            let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            h[(r, c)] = z;
            h[(c, r)] = z.conj();
        }
    }
    h
}

fn traceless(h: &ComplexMatrix) -> ComplexMatrix {
    let shift = h.trace() / h.rows() as f64;
    let mut out = h.clone();
    for i in 0..h.rows() {
        out[(i, i)] -= shift;
    }
    out
}

/// `exp(i H)` through the eigendecomposition.
fn expi(h: &ComplexMatrix) -> ComplexMatrix {
    let eig = hermitian_eigen(h).unwrap();
    let v = &eig.vectors;
    let d = h.rows();
    let ph: Vec<Complex64> = eig.spectrum.values().iter().map(|&l| Complex64::from_polar(1.0, l)).collect();
    ComplexMatrix::from_fn(d, d, |r, c| (0..d).map(|k| v[(r, k)] * ph[k] * v[(c, k)].conj()).sum())
}

fn hermitian_from_params(p: &[f64], d: usize) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(d, d);
    let mut it = p.iter();
    for r in 0..d {
        h[(r, r)] = Complex64::new(*it.next().unwrap(), 0.0);
        for c in r + 1..d {
            let z = Complex64::new(*it.next().unwrap(), *it.next().unwrap());
            h[(r, c)] = z;
            h[(c, r)] = z.conj();
        }
    }
    h
}

/// Off-diagonal block mass of `rho` in the party-A basis given by the columns of `u`.
fn off_diagonal_mass(dec: &BlockDecomposition, u: &ComplexMatrix) -> f64 {
    let (da, db) = (dec.party_a_dim(), dec.party_b_dim());
    let mut mass = 0.0;
    for l in 0..da {
        for m in 0..da {
            if l == m {
                continue;
            }
            let mut c = vec![Complex64::new(0.0, 0.0); db * db];
            for i in 0..da {
                for j in 0..da {
                    let w = u[(i, l)].conj() * u[(j, m)];
                    for (slot, z) in c.iter_mut().zip(dec.block(i, j).as_slice()) {
                        *slot += w * z;
                    }
                }
            }
            mass += c.iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
    }
    mass
}

fn nelder_mead(f: &dyn Fn(&[f64]) -> f64, start: Vec<f64>, scale: f64, iters: usize) -> (Vec<f64>, f64) {
    let n = start.len();
    let mut simplex: Vec<Vec<f64>> = vec![start.clone()];
    for i in 0..n {
        let mut p = start.clone();
        p[i] += scale;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();
    for _ in 0..iters {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();
        let centroid: Vec<f64> = (0..n).map(|k| simplex[..n].iter().map(|p| p[k]).sum::<f64>() / n as f64).collect();
        let along = |t: f64| -> Vec<f64> { (0..n).map(|k| centroid[k] + t * (simplex[n][k] - centroid[k])).collect() };
        let reflected = along(-1.0);
        let fr = f(&reflected);
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
        } else {
            let contracted = along(0.5);
            let fc = f(&contracted);
            if fc < values[n] {
                simplex[n] = contracted;
                values[n] = fc;
            } else {
                for i in 1..=n {
                    simplex[i] = (0..n).map(|k| simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k])).collect();
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }
    let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
    (simplex[best].clone(), values[best])
}

/// Smallest off-diagonal block mass found over party-A unitaries `exp(iH)`.
fn brute_force_min_mass(rho: &DensityMatrix, bp: &Bipartition, seed: u64) -> f64 {
    let dec = blocks(rho, bp).unwrap();
    let d = dec.party_a_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = |p: &[f64]| off_diagonal_mass(&dec, &expi(&hermitian_from_params(p, d)));
    let mut best = f64::INFINITY;
    for _ in 0..3 {
        let start: Vec<f64> = (0..d * d).map(|_| rng.random_range(-3.0..3.0)).collect();
        let (mut x, mut v) = nelder_mead(&f, start, 0.5, 2000);
        // restarts from the incumbent shake the simplex loose
        for round in 0..5 {
            let (x2, v2) = nelder_mead(&f, x.clone(), 0.05 / (round + 1) as f64, 2000);
            x = x2;
            v = v2;
        }
        best = best.min(v);
    }
    best
}

/// `1/d + eps sum_j G_j (x) K_j` with traceless terms; `rho_A` is maximally mixed.
fn twirled_state(
    da: usize,
    db: usize,
    commuting_a: bool,
    rng: &mut ChaCha8Rng,
    seed: u64,
) -> DensityMatrix {
    let d = da * db;
    let basis = haar_random_unitary(da.trailing_zeros() as usize, seed).unwrap();
    let mut m = ComplexMatrix::from_real_diagonal(&vec![1.0 / d as f64; d]);
    for _ in 0..3 {
        let g = if commuting_a {
            let diag: Vec<f64> = (0..da).map(|_| rng.random_range(-1.0..1.0)).collect();
            traceless(&ComplexMatrix::from_real_diagonal(&diag)).conjugate_by(basis.matrix())
        } else {
            traceless(&random_hermitian(da, rng))
        };
        let k = traceless(&random_hermitian(db, rng));
        m = &m + &kron(&g, &k).unwrap().scale_real(0.02 / d as f64);
    }
    DensityMatrix::new(m).unwrap()
}

/// `sum_l p_l |u_l><u_l| (x) sigma_l` with random `sigma_l` and a random basis.
fn classical_quantum(da: usize, db: usize, weights: &[f64], seed: u64) -> DensityMatrix {
    let u = haar_random_unitary(da.trailing_zeros() as usize, seed).unwrap();
    let mut m = ComplexMatrix::zeros(da * db, da * db);
    for (l, &p) in weights.iter().enumerate() {
        let col = u.matrix().column(l);
        let proj = ComplexMatrix::outer(&col);
        let v = haar_random_unitary(db.trailing_zeros() as usize, seed * 31 + l as u64).unwrap();
        let sigma = ComplexMatrix::from_real_diagonal(&(0..db).map(|i| (i + 1) as f64).collect::<Vec<_>>())
            .scale_real(2.0 / (db * (db + 1)) as f64)
            .conjugate_by(v.matrix());
        m = &m + &kron(&proj, &sigma).unwrap().scale_real(p);
    }
    DensityMatrix::new(m).unwrap()
}

fn check(rho: &DensityMatrix, bp: &Bipartition, seed: u64, expect_zero: bool) {
    let tol = default_discord_tolerance(rho.dim());
    let verdict = is_zero_discord(rho, bp, tol).unwrap();
    let commuting = is_zero_discord_commuting(rho, bp, tol).unwrap();
    let mass = brute_force_min_mass(rho, bp, seed);
    assert_eq!(verdict.zero_discord, expect_zero, "{verdict:?} oracle mass {mass:e}");
    assert_eq!(commuting.zero_discord, expect_zero, "{commuting:?} oracle mass {mass:e}");
    if expect_zero {
        assert!(mass < 1e-12, "oracle failed to find the classical basis: {mass:e}");
    } else {
        assert!(mass > 1e-9, "oracle found a classical basis the test rejected: {mass:e}");
    }
}

#[test]
fn procedure_agrees_with_basis_search_qubit_party() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for seed in 0..4 {
        let bp = Bipartition::from_qubits(3, &[0]).unwrap();
        check(&classical_quantum(2, 4, &[0.5, 0.5], seed), &bp, seed, true);
        check(&classical_quantum(2, 4, &[0.7, 0.3], seed), &bp, seed, true);
        check(&twirled_state(2, 4, true, &mut rng, seed), &bp, seed, true);
        check(&twirled_state(2, 4, false, &mut rng, seed), &bp, seed, false);
        let u = haar_random_unitary(3, 100 + seed).unwrap();
        let generic = dqc1::dqc1_state(2, 0.3).unwrap().evolve(u.matrix()).unwrap();
        check(&generic, &bp, seed, false);
    }
}

#[test]
fn procedure_agrees_with_basis_search_two_qubit_party() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for seed in 0..2 {
        let bp = Bipartition::from_qubits(3, &[0, 1]).unwrap();
        check(&classical_quantum(4, 2, &[0.25; 4], seed), &bp, seed, true);
        check(&classical_quantum(4, 2, &[0.4, 0.3, 0.2, 0.1], seed), &bp, seed, true);
        check(&classical_quantum(4, 2, &[0.4, 0.4, 0.1, 0.1], seed), &bp, seed, true);
        check(&twirled_state(4, 2, true, &mut rng, seed), &bp, seed, true);
        check(&twirled_state(4, 2, false, &mut rng, seed), &bp, seed, false);
    }
}
