//! Frame-based results against plain coordinate-tensor calculations.

use clifgeo::catalog;
use clifgeo::expr::eval_jet;
use clifgeo::geometry::{sample_points, structure_coefficients, ConnectionMode, GeometrySample, Sampling};
use clifgeo::spec::Spacetime;
use clifgeo::suite::{run, Command, RunOptions};
use clifgeo::symmetry::{frame_components, kappa_matrix};

const ETA: [f64; 4] = [1.0, -1.0, -1.0, -1.0];
type M4 = [[f64; 4]; 4];
type T3 = [[[f64; 4]; 4]; 4];

fn compile(name: &str) -> Spacetime {
    catalog::builtin(name).unwrap().compile().unwrap()
}

fn points(st: &Spacetime, n: usize) -> Vec<[f64; 4]> {
    sample_points(&st.chart, &st.coframe, &Sampling { count: n, seed: 7 }, |_| true).unwrap()
}

fn inverse(m: &M4) -> M4 {
    let mut a = *m;
    let mut inv: M4 = std::array::from_fn(|i| std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 }));
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        for j in 0..4 {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for i in 0..4 {
            if i != col {
                let f = a[i][col];
                for j in 0..4 {
                    a[i][j] -= f * a[col][j];
                    inv[i][j] -= f * inv[col][j];
                }
            }
        }
    }
    inv
}

/// h^a_μ with first and second coordinate derivatives.
struct Coframe {
    h: M4,
    dh: [[[f64; 4]; 4]; 4],
    ddh: [[[[f64; 4]; 4]; 4]; 4],
}

fn coframe_at(st: &Spacetime, x: &[f64; 4]) -> Coframe {
    let mut cf = Coframe { h: [[0.0; 4]; 4], dh: [[[0.0; 4]; 4]; 4], ddh: [[[[0.0; 4]; 4]; 4]; 4] };
    for a in 0..4 {
        for mu in 0..4 {
            let j = eval_jet(&st.coframe.h[a][mu], x, st.params()).unwrap();
            cf.h[a][mu] = j.value;
            cf.dh[a][mu] = j.grad;
            cf.ddh[a][mu] = j.hessian();
        }
    }
    cf
}

/// g_μν, ∂_ρ g_μν [μ][ν][ρ] and ∂_ρ∂_σ g_μν [μ][ν][ρ][σ].
fn metric(cf: &Coframe) -> (M4, T3, [[[[f64; 4]; 4]; 4]; 4]) {
    let mut g = [[0.0; 4]; 4];
    let mut dg = [[[0.0; 4]; 4]; 4];
    let mut ddg = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for m in 0..4 {
            for n in 0..4 {
                g[m][n] += ETA[a] * cf.h[a][m] * cf.h[a][n];
                for r in 0..4 {
                    dg[m][n][r] += ETA[a] * (cf.dh[a][m][r] * cf.h[a][n] + cf.h[a][m] * cf.dh[a][n][r]);
                    for s in 0..4 {
                        ddg[m][n][r][s] += ETA[a]
                            * (cf.ddh[a][m][r][s] * cf.h[a][n]
                                + cf.dh[a][m][r] * cf.dh[a][n][s]
                                + cf.dh[a][m][s] * cf.dh[a][n][r]
                                + cf.h[a][m] * cf.ddh[a][n][r][s]);
                    }
                }
            }
        }
    }
    (g, dg, ddg)
}

/// Ricci scalar and Kretschmann invariant from Christoffel symbols, with
/// R^ρ_σμν = ∂_μΓ^ρ_νσ − ∂_νΓ^ρ_μσ + Γ^ρ_μλΓ^λ_νσ − Γ^ρ_νλΓ^λ_μσ and R_σν = R^ρ_σρν.
fn coordinate_invariants(st: &Spacetime, x: &[f64; 4]) -> (f64, f64) {
    let (g, dg, ddg) = metric(&coframe_at(st, x));
    let gi = inverse(&g);
    // ∂_ρ g^{λκ} = −g^{λα} ∂_ρ g_αβ g^{βκ}
    let mut dgi = [[[0.0; 4]; 4]; 4];
    for l in 0..4 {
        for k in 0..4 {
            for r in 0..4 {
                let mut s = 0.0;
                for al in 0..4 {
                    for be in 0..4 {
                        s -= gi[l][al] * dg[al][be][r] * gi[be][k];
                    }
                }
                dgi[l][k][r] = s;
            }
        }
    }
    // Γ^l_{mn} and ∂_r Γ^l_{mn}
    let mut gam = [[[0.0; 4]; 4]; 4];
    let mut dgam = [[[[0.0; 4]; 4]; 4]; 4];
    for l in 0..4 {
        for m in 0..4 {
            for n in 0..4 {
                for k in 0..4 {
                    let low = 0.5 * (dg[k][n][m] + dg[k][m][n] - dg[m][n][k]);
                    gam[l][m][n] += gi[l][k] * low;
                    for r in 0..4 {
                        let dlow = 0.5 * (ddg[k][n][m][r] + ddg[k][m][n][r] - ddg[m][n][k][r]);
                        dgam[l][m][n][r] += dgi[l][k][r] * low + gi[l][k] * dlow;
                    }
                }
            }
        }
    }
    let mut riem = [[[[0.0; 4]; 4]; 4]; 4];
    for r in 0..4 {
        for s in 0..4 {
            for m in 0..4 {
                for n in 0..4 {
                    let mut v = dgam[r][n][s][m] - dgam[r][m][s][n];
                    for l in 0..4 {
                        v += gam[r][m][l] * gam[l][n][s] - gam[r][n][l] * gam[l][m][s];
                    }
                    riem[r][s][m][n] = v;
                }
            }
        }
    }
    let mut scalar = 0.0;
    for s in 0..4 {
        for n in 0..4 {
            let ric: f64 = (0..4).map(|r| riem[r][s][r][n]).sum();
            scalar += gi[s][n] * ric;
        }
    }
    // K = R_ρσμν R^ρσμν, lowering the first index and raising the rest.
    let mut k = 0.0;
    let lowered: [[[[f64; 4]; 4]; 4]; 4] =
        std::array::from_fn(|a| std::array::from_fn(|s| std::array::from_fn(|m| std::array::from_fn(|n| (0..4).map(|r| g[a][r] * riem[r][s][m][n]).sum()))));
    for a in 0..4 {
        for s in 0..4 {
            for m in 0..4 {
                for n in 0..4 {
                    let mut raised = 0.0;
                    for b in 0..4 {
                        for c in 0..4 {
                            for d in 0..4 {
                                raised += gi[s][b] * gi[m][c] * gi[n][d] * riem[a][b][c][d];
                            }
                        }
                    }
                    k += lowered[a][s][m][n] * raised;
                }
            }
        }
    }
    (scalar, k)
}

fn frame_kretschmann(s: &GeometrySample) -> f64 {
    let mut k = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let r = s.curvature[a][b][c][d];
                    k += ETA[a] * ETA[b] * ETA[c] * ETA[d] * r * r;
                }
            }
        }
    }
    k
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}

#[test]
fn levi_civita_invariants_match_coordinate_calculation() {
    for name in catalog::NAMES {
        let st = compile(name);
        for x in points(&st, 8) {
            let s = GeometrySample::compute(&st.coframe.at(x).unwrap(), ConnectionMode::LeviCivita);
            let (r, k) = coordinate_invariants(&st, &x);
            assert!(close(s.ricci_scalar, r, 1e-9), "{name} at {x:?}: R frame {} coordinate {r}", s.ricci_scalar);
            assert!(close(frame_kretschmann(&s), k, 1e-9), "{name} at {x:?}: K frame {} coordinate {k}", frame_kretschmann(&s));
        }
    }
}

#[test]
fn schwarzschild_invariants_closed_form() {
    for (name, radius) in [("schwarzschild", None), ("schwarzschild_isotropic", Some(()))] {
        let st = compile(name);
        for x in points(&st, 8) {
            let (r, k) = coordinate_invariants(&st, &x);
            assert!(r.abs() < 1e-10, "{name}: R = {r}");
            let m = match radius {
                None => st.params()["k"] / 2.0,
                Some(()) => st.params()["m"],
            };
            let areal = match radius {
                None => x[1],
                Some(()) => {
                    let rho = (x[1] * x[1] + x[2] * x[2] + x[3] * x[3]).sqrt();
                    rho * (1.0 + m / (2.0 * rho)).powi(2)
                }
            };
            let expected = 48.0 * m * m / areal.powi(6);
            assert!(close(k, expected, 1e-9), "{name}: K = {k}, expected {expected}");
        }
    }
}

#[test]
fn desitter_and_friedmann_ricci_scalar_closed_form() {
    for name in ["desitter_inner", "desitter_outer"] {
        let st = compile(name);
        let alpha = st.params()["alpha"];
        for x in points(&st, 8) {
            let (r, _) = coordinate_invariants(&st, &x);
            assert!(close(r, -12.0 * alpha, 1e-10), "{name}: R = {r}");
        }
    }
    let st = compile("friedmann");
    for x in points(&st, 8) {
        let (r, _) = coordinate_invariants(&st, &x);
        let expected = -4.0 / (3.0 * x[0] * x[0]);
        assert!(close(r, expected, 1e-10), "friedmann at t = {}: R = {r}, expected {expected}", x[0]);
    }
}

/// £_ξ g_μν = ξ^ρ∂_ρg_μν + g_ρν∂_μξ^ρ + g_μρ∂_νξ^ρ, relative to the size of its terms.
fn metric_lie_derivative(st: &Spacetime, xi: &[clifgeo::jet::Jet2; 4], x: &[f64; 4]) -> f64 {
    let (g, dg, _) = metric(&coframe_at(st, x));
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for m in 0..4 {
        for n in 0..4 {
            let mut terms = [0.0; 3];
            for r in 0..4 {
                terms[0] += xi[r].value * dg[m][n][r];
                terms[1] += g[r][n] * xi[r].grad[m];
                terms[2] += g[m][r] * xi[r].grad[n];
            }
            worst = worst.max(terms.iter().sum::<f64>().abs());
            scale = scale.max(terms.iter().fold(0.0, |s, t| s.max(t.abs())));
        }
    }
    worst / scale.max(1e-3)
}

#[test]
fn killing_verdicts_match_metric_lie_derivative() {
    for name in catalog::NAMES {
        let st = compile(name);
        let report = run(Command::Killing, &st, &RunOptions::default()).unwrap();
        let pts = points(&st, 12);
        for (cand, verdict) in st.candidates.iter().zip(&report.candidates) {
            let worst = pts
                .iter()
                .filter_map(|x| cand.coordinate_components(x, st.params()).ok().map(|xi| metric_lie_derivative(&st, &xi, x)))
                .fold(0.0, f64::max);
            assert_eq!(worst < 1e-6, verdict.killing_pass, "{name} {}: coordinate residual {worst:.3e}", cand.name);
        }
    }
}

#[test]
fn kappa_is_lie_derivative_of_coframe() {
    // £_ξθ^a = ϰ^a_bθ^b, with (£_ξθ^a)_μ = ξ^ν∂_νh^a_μ + h^a_ν∂_μξ^ν.
    for name in catalog::NAMES {
        let st = compile(name);
        for x in points(&st, 6) {
            let cf = coframe_at(&st, &x);
            let e = inverse(&cf.h); // e[μ][b] = e_b^μ
            let fp = st.coframe.at(x).unwrap();
            let c = structure_coefficients(&fp);
            for cand in &st.candidates {
                let Ok(xi) = cand.coordinate_components(&x, st.params()) else { continue };
                let (xa, _) = frame_components(&fp, &xi);
                let kappa = kappa_matrix(&fp, &xa, &c);
                for a in 0..4 {
                    let lie: [f64; 4] = std::array::from_fn(|mu| (0..4).map(|nu| xi[nu].value * cf.dh[a][mu][nu] + cf.h[a][nu] * xi[nu].grad[mu]).sum());
                    for b in 0..4 {
                        let expected: f64 = (0..4).map(|mu| e[mu][b] * lie[mu]).sum();
                        let got = kappa[a][b].value;
                        assert!(close(got, expected, 1e-10), "{name} {} ϰ^{a}_{b}: {got} vs {expected}", cand.name);
                    }
                }
            }
        }
    }
}
