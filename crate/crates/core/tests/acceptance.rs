//! One line per acceptance criterion; exits non-zero if any fails.

use std::sync::Arc;
use std::time::{Duration, Instant};

use heightgap::gaplab::{bianchi, gap_scan, margulis_scan, default_epsilon_grid, GapOptions, GroupClass, Verdict};
use heightgap::generic::{discriminant_decomposition, search_generic, word_eval, SearchOptions, Word};
use heightgap::heights::{height_element, nheight_bounds, NHeightOptions};
use heightgap::matrix::MatrixOverK;
use heightgap::mobius::{classify, displacement, eigenvalue, is_generic, phi_embed, translation_length, BasePoint, Designation, ElementType, GElement};
use heightgap::nfield::{make_field, product_formula_sum, quadratic_field, rationals, FieldElement, NumberField};
use heightgap::poly::Poly;
use heightgap::qalg::{index_bounds_from_generic, make_algebra, max_lattice_covolume, min_covolume, PlaceRef};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rand_rat(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(rng.random_range(-60i64..=60).into(), rng.random_range(1i64..=40).into())
}

fn rand_elem(rng: &mut ChaCha8Rng, k: &Arc<NumberField>) -> FieldElement {
    loop {
        let c = (0..k.degree()).map(|_| rand_rat(rng)).collect();
        let x = FieldElement::new(k, c).unwrap();
        if !x.is_zero() {
            return x;
        }
    }
}

fn c1_product_formula() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let fields = [rationals(), quadratic_field(-1).unwrap(), quadratic_field(-3).unwrap(), quadratic_field(5).unwrap()];
    let mut worst = 0.0f64;
    for k in &fields {
        for _ in 0..200 {
            let x = rand_elem(&mut rng, k);
            worst = worst.max(product_formula_sum(k, &x).map_err(|e| e.to_string())?.abs());
        }
    }
    check(worst < 1e-9, format!("max |sum n_v log|x|_v| = {worst:.2e} over 800 elements"))
}

/// Mahler-measure height of a quadratic or rational number from its
/// primitive integer minimal polynomial, with roots by the quadratic formula.
fn mahler_height(x: &FieldElement) -> f64 {
    let mp = x.minpoly();
    let c: Vec<BigRational> = mp.coeffs().to_vec();
    let den = c.iter().fold(BigInt::from(1), |acc, q| num_integer::lcm(acc, q.denom().clone()));
    let ints: Vec<BigInt> = c.iter().map(|q| (q * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| num_integer::gcd(acc, v.clone()));
    let f: Vec<f64> = ints.iter().map(|v| (v / &g).to_f64().unwrap()).collect();
    let lead = f[f.len() - 1].abs();
    let roots: Vec<Complex64> = match f.len() {
        2 => vec![Complex64::new(-f[0] / f[1], 0.0)],
        3 => {
            let (a, b, cc) = (f[2], f[1], f[0]);
            let s = Complex64::new(b * b - 4.0 * a * cc, 0.0).sqrt();
            vec![(-b + s) / (2.0 * a), (-b - s) / (2.0 * a)]
        }
        _ => unreachable!(),
    };
    let m = lead.ln() + roots.iter().map(|r| r.norm().ln().max(0.0)).sum::<f64>();
    m / roots.len() as f64
}

fn c2_height_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let m = [-1, -2, -3, -5, -7, 2, 3, 5, 6, 7][i % 10];
        let k = quadratic_field(m).unwrap();
        let x = rand_elem(&mut rng, &k);
        let h = height_element(&x).map_err(|e| e.to_string())?;
        let hm = mahler_height(&x);
        let hi = height_element(&x.inv().unwrap()).map_err(|e| e.to_string())?;
        let h2 = height_element(&x.pow(2)).map_err(|e| e.to_string())?;
        worst = worst.max((h - hm).abs()).max((h - hi).abs()).max((h2 - 2.0 * h).abs());
    }
    check(worst < 1e-9, format!("max deviation {worst:.2e} (places vs Mahler, h(1/a), h(a^2))"))
}

fn c3_fibonacci() -> Outcome {
    let q = rationals();
    let f = vec![MatrixOverK::from_ints(&q, [[1, 1], [1, 0]])];
    let r = nheight_bounds(&f, &NHeightOptions { n_max: 12, ..Default::default() }).map_err(|e| e.to_string())?;
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let up12 = r.levels[11].h_n_over_n.ok_or("level 12 incomplete")?;
    check(
        (up12 - phi.ln()).abs() <= 0.02 && r.lower >= 0.24060 - 1e-9,
        format!("h(F^12)/12 = {up12:.5}, log phi = {:.5}, lower = {:.5}", phi.ln(), r.lower),
    )
}

fn l_series(chi: impl Fn(u64) -> f64, period: u64) -> f64 {
    // sum of a periodic mean-zero character over whole periods; tail O(N^-2)
    let n = period * 500_000;
    (1..=n).rev().map(|m| chi(m) / (m as f64 * m as f64)).sum()
}

fn c4_borel() -> Outcome {
    let zeta2_q = std::f64::consts::PI.powi(2) / 6.0;
    let l4 = l_series(|m| [0.0, 1.0, 0.0, -1.0][(m % 4) as usize], 4);
    let l3 = l_series(|m| [0.0, 1.0, -1.0][(m % 3) as usize], 3);
    let pi2 = std::f64::consts::PI.powi(2);
    let mut lines = Vec::new();
    let mut ok = true;
    for (m, disc, l) in [(-1, 4.0f64, l4), (-3, 3.0, l3)] {
        let k = quadratic_field(m).unwrap();
        let alg = make_algebra(&k, &[], &[]).map_err(|e| e.to_string())?;
        let r = min_covolume(&alg, 1_000_000, None).map_err(|e| e.to_string())?;
        let oracle = 2.0 * disc.powf(1.5) * zeta2_q * l / (8.0 * pi2);
        let got = 0.5 * (r.base_lower + r.base_upper);
        let rel = (got - oracle).abs() / oracle;
        let zrel = (r.zeta.mid() - zeta2_q * l).abs() / (zeta2_q * l);
        ok &= rel < 1e-6 && zrel < 1e-8 + (r.zeta.upper - r.zeta.lower) / r.zeta.lower;
        lines.push(format!("Q(sqrt {m}): {got:.7} vs {oracle:.7} (rel {rel:.1e})"));
    }
    check(ok, lines.join("; "))
}

fn c5_formula2() -> Outcome {
    let k = quadratic_field(-1).unwrap();
    let alg = make_algebra(&k, &[], &[]).map_err(|e| e.to_string())?;
    // (1+i) above 2 has norm 2; 3 is inert (norm 9); 5 splits (norm 5)
    let cases: Vec<(Vec<PlaceRef>, i64)> = vec![
        (vec![], 1),
        (vec![PlaceRef { p: 2, index: 0 }], 3),
        (vec![PlaceRef { p: 3, index: 0 }, PlaceRef { p: 5, index: 1 }], 60),
    ];
    let mut ok = true;
    let mut out = Vec::new();
    for (s, prod) in cases {
        let r = max_lattice_covolume(&alg, &s, 1000, None).map_err(|e| e.to_string())?;
        let up = BigRational::from_integer(prod.into());
        let lo = &up / BigRational::from_integer(BigInt::from(2).pow(s.len() as u32));
        ok &= r.multiplier_upper == up && r.multiplier_lower == lo;
        out.push(format!("|S|={}: [{}, {}]", s.len(), r.multiplier_lower, r.multiplier_upper));
    }
    check(ok, out.join(", "))
}

fn bianchi_gens(d: u64) -> Vec<GElement> {
    bianchi(d).unwrap().generators
}

fn c6_search() -> Result<(String, GElement), String> {
    let f = bianchi_gens(1);
    let opts = SearchOptions::default();
    let r = search_generic(&f, &opts).map_err(|e| e.to_string())?;
    let w = r.witness.ok_or("no witness")?;
    let g = word_eval(&w.word, &f).map_err(|e| e.to_string())?;
    let v = is_generic(&g).map_err(|e| e.to_string())?;
    let lox = classify(&g, 0).map_err(|e| e.to_string())? == ElementType::Loxodromic;
    let phi = phi_embed(&g).full();
    let det = (phi - DMatrix::<f64>::identity(4, 4)).determinant();
    let s = g.s_exact().map_err(|e| e.to_string())?.ok_or("s not in k")?;
    let deg = s.degree_over_q();
    // repeated runs and a run inside a busy thread pool
    let again: Vec<String> = (0..4)
        .map(|_| std::thread::spawn(move || search_generic(&bianchi_gens(1), &SearchOptions::default()).unwrap().witness.unwrap().word.to_string()))
        .map(|h| h.join().unwrap())
        .collect();
    let same = again.iter().all(|x| *x == w.word.to_string());
    let ok = w.length <= 8 && v.generic && lox && det.abs() > 1e-9 && deg == 2 && same;
    let msg = format!("witness {} (len {}), loxodromic {lox}, det(Phi-I) = {det:.4}, [Q(s):Q] = {deg}, deterministic {same}", w.word, w.length);
    if ok {
        Ok((msg, g))
    } else {
        Err(msg)
    }
}

fn random_loxodromics(d: u64, count: usize, seed: u64) -> Vec<GElement> {
    let f = bianchi_gens(d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let len = rng.random_range(2..=9);
        let letters: Vec<i32> = (0..len).map(|_| {
            let g = rng.random_range(1..=3);
            if rng.random_bool(0.5) { g } else { -g }
        }).collect();
        let g = word_eval(&Word::new(letters), &f).unwrap();
        if !g.is_identity() && classify(&g, 0).unwrap() == ElementType::Loxodromic {
            out.push(g);
        }
    }
    out
}

fn c7_disc(witness: &GElement) -> Outcome {
    let mut elems = vec![witness.clone()];
    elems.extend(random_loxodromics(1, 20, 7));
    let mut worst_sum = 0.0f64;
    let mut worst_disc = 0.0f64;
    for g in &elems {
        let a = eigenvalue(g).map_err(|e| e.to_string())?;
        let r = discriminant_decomposition(&a, None);
        worst_sum = worst_sum.max((r.s1 + r.s2 + r.sr - r.log_product).abs());
        // oracle: product of differences from the conjugates, scaled by lead^(2d-2)
        let c = a.conjugates();
        let d = c.len();
        let mut lp = 0.0;
        for i in 0..d {
            for j in i + 1..d {
                lp += (c[i] - c[j]).norm().ln();
            }
        }
        let lead = a.leading().to_f64().unwrap().abs();
        let sq = (2.0 * lp + (2 * d - 2) as f64 * lead.ln()).exp();
        let disc = a.minpoly().discriminant().abs();
        let disc_f = disc.to_f64().unwrap();
        worst_disc = worst_disc.max((sq - disc_f).abs() / disc_f);
    }
    check(
        worst_sum < 1e-9 && worst_disc < 1e-9,
        format!("{} elements: |S1+S2+Sr - log prod| <= {worst_sum:.1e}, disc rel err <= {worst_disc:.1e}", elems.len()),
    )
}

fn c8_bounds(witness: &GElement) -> Outcome {
    let k = quadratic_field(-1).unwrap();
    let alg = make_algebra(&k, &[], &[]).map_err(|e| e.to_string())?;
    let mut ok = true;
    let mut out = Vec::new();
    let mut elems = vec![witness.clone()];
    elems.extend(random_loxodromics(1, 10, 8).into_iter().filter(|g| is_generic(g).map(|v| v.generic).unwrap_or(false)));
    for g in &elems {
        let b = match index_bounds_from_generic(g, &alg) {
            Ok(b) => b,
            Err(_) => continue,
        };
        let n = b.norm_beta.abs().to_f64().unwrap();
        let floor_log = n.log2().floor() as u32;
        ok &= b.s_bound == floor_log && b.product_bound == &b.norm_beta * &b.norm_beta;
    }
    out.push(format!("{} witnesses consistent", elems.len()));
    // spot case tr = 2 + i, det 1
    let des = alg.designation().clone();
    let i = FieldElement::theta(&k);
    let two = FieldElement::from_int(&k, 2);
    let m = MatrixOverK::new(&two + &i, FieldElement::from_int(&k, -1), FieldElement::one(&k), FieldElement::zero(&k));
    let g = GElement::new(m, &des).map_err(|e| e.to_string())?;
    let b = index_bounds_from_generic(&g, &alg).map_err(|e| e.to_string())?;
    let one = BigRational::from_integer(1.into());
    let spot = b.norm_beta.abs() == one && b.s_bound == 0;
    out.push(format!("tr = 2+i: N(beta) = {}, #S bound = {}", b.norm_beta, b.s_bound));
    check(ok && spot, out.join("; "))
}

fn c9_translation() -> Outcome {
    let q = rationals();
    let des = Arc::new(Designation::new(&q, &[0]).unwrap());
    let m = MatrixOverK::new(
        FieldElement::from_int(&q, 2),
        FieldElement::zero(&q),
        FieldElement::zero(&q),
        FieldElement::from_rational(&q, BigRational::new(1.into(), 2.into())),
    );
    let g = GElement::new(m, &des).unwrap();
    let l = translation_length(&g).map_err(|e| e.to_string())?.total;
    let d = displacement(&g, &BasePoint::center(des.signature())).map_err(|e| e.to_string())?;
    let spot = (l - 2.0 * 2f64.ln()).abs() < 1e-6 && (d - 4f64.ln()).abs() < 1e-6;

    // 25 Bianchi loxodromics and 25 hyperbolics over Q(sqrt 5) in both real factors
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut elems = random_loxodromics(1, 25, 19);
    let k5 = make_field(&Poly::from_ints(&[-1, -1, 1]), 192).unwrap();
    let des5 = Arc::new(Designation::new(&k5, &[0, 1]).unwrap());
    let phi = FieldElement::theta(&k5);
    let (one, zero) = (FieldElement::one(&k5), FieldElement::zero(&k5));
    let gens = vec![
        GElement::new(MatrixOverK::new(one.clone(), phi.clone(), zero.clone(), one.clone()), &des5).unwrap(),
        GElement::new(MatrixOverK::new(one.clone(), zero.clone(), phi.clone(), one.clone()), &des5).unwrap(),
        GElement::new(MatrixOverK::from_ints(&k5, [[2, 1], [1, 1]]), &des5).unwrap(),
    ];
    while elems.len() < 50 {
        let len = rng.random_range(2..=7);
        let letters: Vec<i32> = (0..len).map(|_| if rng.random_bool(0.5) { rng.random_range(1..=3) } else { -rng.random_range(1..=3) }).collect();
        let g = word_eval(&Word::new(letters), &gens).unwrap();
        if (0..2).all(|f| classify(&g, f).ok() == Some(ElementType::Hyperbolic)) {
            elems.push(g);
        }
    }
    let mut worst_disp = f64::INFINITY;
    let mut worst_cs = f64::INFINITY;
    for g in &elems {
        let sig = g.designation().signature();
        let x = BasePoint {
            h2: (0..sig.a).map(|_| (rng.random_range(-2.0..2.0), rng.random_range(0.2..3.0))).collect(),
            h3: (0..sig.b).map(|_| ([rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)], rng.random_range(0.2..3.0))).collect(),
        };
        let t = translation_length(g).map_err(|e| e.to_string())?;
        let d = displacement(g, &x).map_err(|e| e.to_string())?;
        worst_disp = worst_disp.min(d - t.total);
        worst_cs = worst_cs.min(t.total - t.cauchy_schwarz_bound);
    }
    check(
        spot && worst_disp >= -1e-9 && worst_cs >= -1e-9,
        format!("diag(2,1/2): l = {l:.7}, d = {d:.7}; 50 elements: min d - l = {worst_disp:.2e}, min l - CS = {worst_cs:.2e}"),
    )
}

fn c10_gap_scan() -> Outcome {
    let ds = [1, 2, 3, 7, 11];
    let opts = GapOptions::default();
    let a = gap_scan(&ds, &opts);
    let b = gap_scan(&ds, &opts);
    let ja = serde_json::to_string(&a).unwrap();
    let jb = serde_json::to_string(&b).unwrap();
    let dense = a.rows.iter().all(|r| r.report.as_ref().map(|x| x.verdict) == Some(Verdict::DenseEvidence));
    let rows: Vec<String> = a
        .rows
        .iter()
        .map(|r| match &r.report {
            Some(x) => format!("D={} {:?} r={:.4}", r.d, x.verdict, x.ratio.unwrap_or(f64::NAN)),
            None => format!("D={} error {}", r.d, r.error.as_deref().unwrap_or("")),
        })
        .collect();
    let min = a.min_ratio.unwrap_or(f64::NAN);
    check(dense && min > 0.0 && ja == jb, format!("{}; min r = {min:.4}; byte-stable {}", rows.join(", "), ja == jb))
}

fn c11_margulis() -> Outcome {
    let spec = bianchi(1).unwrap();
    let x = BasePoint::center(spec.algebra.signature());
    let s = margulis_scan(&spec, &x, &default_epsilon_grid(), 8, 100_000).map_err(|e| e.to_string())?;
    let mut bound_ok = true;
    for row in &s.rows {
        for m in &row.members {
            let g = word_eval(&Word::parse(&m.word).map_err(|e| e.to_string())?, &spec.generators).map_err(|e| e.to_string())?;
            let d = displacement(&g, &x).map_err(|e| e.to_string())?;
            bound_ok &= d <= row.radius + 1e-9;
        }
    }
    let classes: Vec<GroupClass> = s.rows.iter().map(|r| r.certificate.class).collect();
    let mut seq: Vec<String> = Vec::new();
    for c in &classes {
        let name = serde_json::to_value(c).unwrap().as_str().unwrap().to_string();
        if seq.last() != Some(&name) {
            seq.push(name);
        }
    }
    check(s.monotone && bound_ok, format!("{} (grid of {}), bound ok {bound_ok}", seq.join(" -> "), classes.len()))
}

fn run(name: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let r = f();
    let el = t.elapsed();
    let in_time = el <= budget;
    let (ok, detail) = match r {
        Ok(d) => (in_time, d),
        Err(d) => (false, d),
    };
    println!("{} {name}: {detail} [{:.2}s / {}s]", if ok { "PASS" } else { "FAIL" }, el.as_secs_f64(), budget.as_secs());
    ok
}

fn main() {
    let s = Duration::from_secs;
    let mut all = true;
    all &= run("1 product formula", s(10), c1_product_formula);
    all &= run("2 height oracle", s(10), c2_height_oracle);
    all &= run("3 normalized-height bracket", s(30), c3_fibonacci);
    all &= run("4 Borel formula", s(60), c4_borel);
    all &= run("5 formula (2) interval", s(60), c5_formula2);
    let mut witness = None;
    all &= run("6 genericity search", s(120), || {
        let (msg, g) = c6_search()?;
        witness = Some(g);
        Ok(msg)
    });
    let w = witness.unwrap_or_else(|| random_loxodromics(1, 1, 1).remove(0));
    all &= run("7 discriminant decomposition", s(60), || c7_disc(&w));
    all &= run("8 index bounds", s(60), || c8_bounds(&w));
    all &= run("9 translation length vs displacement", s(60), c9_translation);
    all &= run("10 gap scan", s(600), c10_gap_scan);
    all &= run("11 Margulis monotonicity", s(600), c11_margulis);
    if !all {
        std::process::exit(1);
    }
}
