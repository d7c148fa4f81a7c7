//! Seeded property suite for the algebra and the expression layer, with a
//! central-difference oracle for jet derivatives.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clifford::{Blade, Multivector, ETA};
use crate::expr::{eval_f64, eval_jet, parse, BinOp, Expr, Func, Params, SymbolTable};
use crate::report::Check;

/// Random coefficients in [−1, 1] on every blade.
pub fn random_multivector(rng: &mut impl Rng) -> Multivector<f64> {
    let mut m = Multivector::zero();
    for c in m.c.iter_mut() {
        *c = rng.gen_range(-1.0..1.0);
    }
    m
}

pub fn random_grade(rng: &mut impl Rng, k: usize) -> Multivector<f64> {
    random_multivector(rng).grade(k)
}

fn rel(diff: f64, scale: f64) -> f64 {
    if diff == 0.0 {
        0.0
    } else {
        diff / scale.max(1e-14)
    }
}

fn rel_mv(a: &Multivector<f64>, b: &Multivector<f64>) -> f64 {
    rel((*a - *b).max_abs(), a.max_abs().max(b.max_abs()))
}

const ALGEBRA_TOL: f64 = 1e-12;
const ALGEBRA_TRIALS: usize = 1000;

pub fn algebra_checks(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let mut gen: f64 = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            let (ta, tb) = (Multivector::<f64>::theta(a), Multivector::<f64>::theta(b));
            let lhs = ta * tb + tb * ta;
            let rhs = Multivector::scalar(if a == b { 2.0 * ETA[a] } else { 0.0 });
            gen = gen.max((lhs - rhs).max_abs());
        }
    }
    out.push(Check::new("generator_relation", "θ^aθ^b + θ^bθ^a = 2η^{ab}", gen, 0.0));

    let mut assoc: f64 = 0.0;
    let mut split: f64 = 0.0;
    let mut sandwich: f64 = 0.0;
    let mut reverse: f64 = 0.0;
    let mut hodge_inv: f64 = 0.0;
    for _ in 0..ALGEBRA_TRIALS {
        let (a, b, c) = (random_multivector(&mut rng), random_multivector(&mut rng), random_multivector(&mut rng));
        assoc = assoc.max(rel_mv(&((a * b) * c), &(a * (b * c))));
        reverse = reverse.max(rel_mv(&(a * b).reverse(), &(b.reverse() * a.reverse())));
        hodge_inv = hodge_inv.max(rel_mv(&a.hodge().hodge_inv(), &a));

        let n = random_grade(&mut rng, 1);
        split = split.max(rel_mv(&(n * b), &(n.left_contract(&b) + n.wedge(&b))));

        let f = random_grade(&mut rng, 2);
        let lhs = (f * n * f.reverse()).scale(0.5);
        let ff = f.scalar_product(&f);
        let rhs = n.left_contract(&f).left_contract(&f) + n.scale(0.5 * ff);
        sandwich = sandwich.max(rel_mv(&lhs, &rhs));
    }
    out.push(Check::new("associativity", "(AB)C = A(BC)", assoc, ALGEBRA_TOL));
    out.push(Check::new("vector_product_split", "aB = a⌟B + a∧B", split, ALGEBRA_TOL));
    out.push(Check::new("vector_sandwich", "½FnF̃ = (n⌟F)⌟F + ½n(F·F)", sandwich, ALGEBRA_TOL));
    out.push(Check::new("reverse_antiautomorphism", "(AB)~ = B̃Ã", reverse, ALGEBRA_TOL));
    out.push(Check::new("hodge_inverse", "⋆⁻¹⋆A = A", hodge_inv, ALGEBRA_TOL));

    // Exhaustive over blade pairs: the top-grade part of B∧⋆A is (B·A)θ^5,
    // and for equal grades B∧⋆A has no other part.
    let mut hodge: f64 = 0.0;
    for i in 0..16u8 {
        for j in 0..16u8 {
            let a = Multivector::<f64>::blade(Blade(i));
            let b = Multivector::<f64>::blade(Blade(j));
            let lhs = Multivector::<f64>::blade(Blade(0b1111)).scale(b.scalar_product(&a));
            let w = b.wedge(&a.hodge());
            let w = if Blade(i).grade() == Blade(j).grade() { w } else { w.grade(4) };
            hodge = hodge.max((lhs - w).max_abs());
        }
    }
    out.push(Check::new("hodge_defining", "(B·A)θ^5 = B∧⋆A, all blade pairs", hodge, ALGEBRA_TOL));
    out
}

/// Coordinates and parameters of the generated corpus.
pub fn corpus_table() -> SymbolTable {
    SymbolTable::new(["t", "x", "y", "z"], ["a", "b"])
}

pub fn corpus_params() -> Params {
    [("a".to_string(), 0.7), ("b".to_string(), 1.3)].into_iter().collect()
}

/// Grammar-directed random expression of depth at most `depth`.
///
/// Every function is applied to an argument kept inside its domain
/// (`ln(1 + u*u)`, `cot(1 + 0.5*sin(u))`, ...), so the whole box
/// [0.5, 1.5]⁴ is a safe region.
pub fn random_expr(rng: &mut impl Rng, depth: usize) -> Expr {
    if depth <= 1 || rng.gen_bool(0.2) {
        return leaf(rng);
    }
    let d = depth - 1;
    match rng.gen_range(0..10) {
        0 => Expr::negate(random_expr(rng, d)),
        1..=3 => {
            let op = [BinOp::Add, BinOp::Sub, BinOp::Mul][rng.gen_range(0..3)];
            Expr::bin(op, random_expr(rng, d), random_expr(rng, d))
        }
        4 if d >= 3 => {
            let num = random_expr(rng, d);
            let den = sub(rng, d, 2);
            Expr::bin(BinOp::Div, num, positive(den))
        }
        5 if d >= 3 => {
            if rng.gen_bool(0.5) {
                let k = rng.gen_range(2..4) as f64;
                Expr::bin(BinOp::Pow, sub(rng, d, 0), Expr::num(k))
            } else {
                let base = positive(sub(rng, d, 2));
                let exp = if rng.gen_bool(0.5) { Expr::num(0.5) } else { Expr::call(Func::Sin, sub(rng, d, 2)) };
                Expr::bin(BinOp::Pow, base, exp)
            }
        }
        _ if d >= 4 => {
            let f = Func::ALL[rng.gen_range(0..Func::ALL.len())];
            Expr::call(f, safe_argument(f, sub(rng, d, 3)))
        }
        _ => {
            let f = [Func::Sin, Func::Cos, Func::Tanh][rng.gen_range(0..3)];
            Expr::call(f, random_expr(rng, d))
        }
    }
}

/// Subexpression of depth at most d − k.
fn sub(rng: &mut impl Rng, d: usize, k: usize) -> Expr {
    if d > k {
        random_expr(rng, d - k)
    } else {
        leaf(rng)
    }
}

fn leaf(rng: &mut impl Rng) -> Expr {
    let names = ["t", "x", "y", "z"];
    match rng.gen_range(0..10) {
        0..=5 => {
            let i = rng.gen_range(0..4);
            Expr::Coord(i, names[i].to_string())
        }
        6 | 7 => Expr::Param(if rng.gen_bool(0.5) { "a" } else { "b" }.to_string()),
        8 => Expr::Pi,
        // two-decimal literals print and reparse exactly
        _ => Expr::num((rng.gen_range(50..200) as f64) / 100.0),
    }
}

/// 1 + u*u, depth + 2.
fn positive(u: Expr) -> Expr {
    Expr::bin(BinOp::Add, Expr::num(1.0), Expr::bin(BinOp::Mul, u.clone(), u))
}

/// Wrap `u` so that `f` is smooth there; adds at most 3 levels.
fn safe_argument(f: Func, u: Expr) -> Expr {
    let sin = Expr::call(Func::Sin, u.clone());
    match f {
        Func::Sin | Func::Cos | Func::Tanh => u,
        Func::Tan | Func::Sinh | Func::Cosh | Func::Exp => sin,
        Func::Cot => Expr::bin(BinOp::Add, Expr::num(1.0), Expr::bin(BinOp::Mul, Expr::num(0.5), sin)),
        Func::Ln | Func::Sqrt => positive(u),
        Func::Abs => Expr::bin(BinOp::Add, Expr::num(2.0), sin),
    }
}

pub const EXPR_COUNT: usize = 500;
pub const EXPR_POINTS: usize = 10;
pub const EXPR_DEPTH: usize = 6;
pub const GRAD_STEP: f64 = 1e-5;
pub const GRAD_TOL: f64 = 1e-5;
pub const HESS_STEP: f64 = 1e-4;
pub const HESS_TOL: f64 = 1e-3;

/// Worst relative gradient and Hessian errors of the jet against central
/// differences at one point, or None when the stencil leaves the domain.
pub fn finite_difference_errors(e: &Expr, x: &[f64; 4], params: &Params) -> Option<(f64, f64)> {
    let jet = eval_jet(e, x, params).ok()?;
    let f = |dx: [f64; 4]| -> Option<f64> {
        let p: [f64; 4] = std::array::from_fn(|i| x[i] + dx[i]);
        eval_f64(e, &p, params).ok()
    };
    let unit = |i: usize, h: f64| -> [f64; 4] { std::array::from_fn(|k| if k == i { h } else { 0.0 }) };
    let add = |a: [f64; 4], b: [f64; 4]| -> [f64; 4] { std::array::from_fn(|k| a[k] + b[k]) };

    let mut g_err: f64 = 0.0;
    let g_scale = jet.grad.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for i in 0..4 {
        let h = GRAD_STEP;
        let fd = (f(unit(i, h))? - f(unit(i, -h))?) / (2.0 * h);
        g_err = g_err.max((fd - jet.grad[i]).abs() / g_scale);
    }

    let hess = jet.hessian();
    let h_scale = hess.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
    let h = HESS_STEP;
    let f0 = f([0.0; 4])?;
    let mut h_err: f64 = 0.0;
    for i in 0..4 {
        for j in i..4 {
            let fd = if i == j {
                (f(unit(i, h))? - 2.0 * f0 + f(unit(i, -h))?) / (h * h)
            } else {
                (f(add(unit(i, h), unit(j, h)))? - f(add(unit(i, h), unit(j, -h)))?
                    - f(add(unit(i, -h), unit(j, h)))?
                    + f(add(unit(i, -h), unit(j, -h)))?)
                    / (4.0 * h * h)
            };
            h_err = h_err.max((fd - hess[i][j]).abs() / h_scale);
        }
    }
    Some((g_err, h_err))
}

/// Generated corpus plus the jet/finite-difference and round-trip checks.
pub fn expression_checks(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6578_7072);
    let table = corpus_table();
    let params = corpus_params();
    let mut g_err: f64 = 0.0;
    let mut h_err: f64 = 0.0;
    let mut skipped = 0usize;
    let mut round_trip_failures = Vec::new();
    let mut max_depth = 0;
    for n in 0..EXPR_COUNT {
        let e = random_expr(&mut rng, EXPR_DEPTH);
        max_depth = max_depth.max(e.depth());
        let printed = e.to_string();
        match parse(&printed, &table) {
            Ok(p) => {
                let again = parse(&p.to_string(), &table);
                if p != e || again.as_ref() != Ok(&p) {
                    round_trip_failures.push(n);
                }
            }
            Err(_) => round_trip_failures.push(n),
        }
        for _ in 0..EXPR_POINTS {
            let x: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.5..1.5));
            match finite_difference_errors(&e, &x, &params) {
                Some((g, h)) => {
                    g_err = g_err.max(g);
                    h_err = h_err.max(h);
                }
                None => skipped += 1,
            }
        }
    }
    let mut grad = Check::new("jet_gradient", "∂f = central difference, h = 1e-5", g_err, GRAD_TOL);
    let mut hess = Check::new("jet_hessian", "∂∂f = central difference, h = 1e-4", h_err, HESS_TOL);
    if skipped > 0 {
        let n = format!("{skipped} of {} points left the domain and were skipped", EXPR_COUNT * EXPR_POINTS);
        grad = grad.note(n.clone());
        hess = hess.note(n);
    }
    grad = grad.note(format!("{EXPR_COUNT} expressions of depth ≤ {max_depth}, {EXPR_POINTS} points each"));
    let mut rt = Check::new("parse_round_trip", "parse(print(e)) = e", round_trip_failures.len() as f64, 0.0);
    if let Some(first) = round_trip_failures.first() {
        rt = rt.note(format!("first failing corpus index {first}"));
    }
    vec![grad, hess, rt]
}

pub fn run_selftest(seed: u64) -> Vec<Check> {
    let mut out = algebra_checks(seed);
    out.extend(expression_checks(seed));
    out
}
