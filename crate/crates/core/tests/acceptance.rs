//! Acceptance suite: worked examples, catalog sweeps and property checks at
//! exact arithmetic. Prints one PASS/FAIL line per criterion (with the
//! failing sub-checks underneath) and exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use npcoh_core::closed_form::{report_from_algebra, Dimension};
use npcoh_core::engine::{slice_basis, CohomologyProfile, DivisionMode, TwistedComplex};
use npcoh_core::forms::{self, d_f_p, DifferentialForm, IndexSet};
use npcoh_core::milnor::{milnor_algebra, milnor_number_oracle, poincare_series_oracle};
use npcoh_core::normal_forms::{catalog_sweep, Family, SingularityClass, ALL_FAMILIES};
use npcoh_core::poly::{scalar, Monomial, Polynomial};
use npcoh_core::{parse_polynomial, solve_weights, Execution, Variables, WeightSystem};

/// Collects the outcome of the sub-checks of one criterion.
#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    passed: usize,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failures.push(what());
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, found: T, expected: T) {
        let ok = found == expected;
        self.check(ok, || format!("{what}: found {found:?}, expected {expected:?}"));
    }
}

fn poly(s: &str, n: usize) -> Polynomial {
    parse_polynomial(s, &Variables::standard(n).unwrap()).unwrap()
}

fn mono(s: &str, n: usize) -> Monomial {
    poly(s, n).monomials().next().unwrap().clone()
}

fn finite(dims: &[usize]) -> Vec<Dimension> {
    dims.iter().map(|&d| Dimension::Finite(d)).collect()
}

fn totals(profiles: &[CohomologyProfile]) -> Vec<usize> {
    profiles.iter().map(|p| p.total).collect()
}

/// True if `a` is a non-zero rational multiple of `b`.
fn proportional(a: &DifferentialForm, b: &DifferentialForm) -> bool {
    if a.is_zero() || b.is_zero() || a.degree() != b.degree() {
        return false;
    }
    let (set, pb) = b.components().next().unwrap();
    let (m, cb) = pb.terms().next().unwrap();
    let ca = a.component(*set).coefficient(m);
    if ca == scalar(0) {
        return false;
    }
    b.scale(&(ca / cb)) == *a
}

/// Compares the brute-force profile of every finite closed-form entry, degree by degree.
fn placement_agrees(c: &mut Checks, tag: &str, f: &Polynomial, w: &WeightSystem, p: i64) {
    let a = milnor_algebra(f, w).unwrap();
    let report = report_from_algebra(&a, p);
    let profiles = TwistedComplex::new(f, w, p).unwrap().profiles(None, Execution::available());
    for e in &report.entries {
        if let Dimension::Finite(d) = e.dimension {
            let prof = &profiles[e.k];
            c.eq(&format!("{tag} H^{} total", e.k), prof.total, d);
            c.check(prof.stabilized, || format!("{tag} H^{} not stabilized", e.k));
            c.eq(&format!("{tag} H^{} placement", e.k), prof.per_degree.clone(), e.placement.clone());
        }
    }
}

fn criterion_1() -> Checks {
    let mut c = Checks::default();
    let f = poly("x1^3+x2^2+x3^2", 3);
    let (w, n_deg) = solve_weights(&f).unwrap();
    c.eq("weights", w.weights().to_vec(), vec![2, 3, 3]);
    c.eq("N", n_deg, 6);
    let a = milnor_algebra(&f, &w).unwrap();
    c.eq("basis", a.basis().to_vec(), vec![mono("1", 3), mono("x1", 3)]);
    c.eq("codimension", a.codimension(), 2);
    let report = report_from_algebra(&a, 0);
    c.eq("closed-form dims H^0..H^3", report.dimensions(), finite(&[1, 1, 0, 0]));
    let profiles = TwistedComplex::new(&f, &w, 0).unwrap().profiles(None, Execution::available());
    c.eq("brute-force dims H^0..H^3", totals(&profiles), vec![1, 1, 0, 0]);
    placement_agrees(&mut c, "A2", &f, &w, 0);
    c
}

fn criterion_2() -> Checks {
    let mut c = Checks::default();
    let n = 4;
    let f = poly("x1^2*x2+x2^4+x3^2+x4^2", n);
    let (w, n_deg) = solve_weights(&f).unwrap();
    c.eq("weights", w.weights().to_vec(), vec![3, 2, 4, 4]);
    c.eq("N", n_deg, 8);
    let a = milnor_algebra(&f, &w).unwrap();
    let expected_basis: Vec<Monomial> = ["1", "x1", "x2", "x2^2", "x2^3"].iter().map(|s| mono(s, n)).collect();
    let mut basis = a.basis().to_vec();
    basis.sort();
    let mut sorted_expected = expected_basis.clone();
    sorted_expected.sort();
    c.eq("basis", basis, sorted_expected);
    c.eq("codimension", a.codimension(), 5);
    let cv = a.count_vector(n as i64);
    c.eq("s", cv.s, 0);
    c.eq("r_2", cv.r[&2], 1);
    c.eq("r_3", cv.r[&3], 0);
    let report = report_from_algebra(&a, 0);
    c.eq("closed-form dims", report.dimensions(), finite(&[1, 1, 0, 1, 6]));

    let sigma = DifferentialForm::euler_contraction(&w);
    let displayed = DifferentialForm::from_components(
        n,
        3,
        [
            (IndexSet::from_indices(&[1, 2, 3]), poly("3*x1", n)),
            (IndexSet::from_indices(&[0, 2, 3]), poly("-2*x2", n)),
            (IndexSet::from_indices(&[0, 1, 3]), poly("4*x3", n)),
            (IndexSet::from_indices(&[0, 1, 2]), poly("-4*x4", n)),
        ],
    );
    c.eq("sigma expansion", sigma.clone(), displayed);

    let cx = TwistedComplex::new(&f, &w, 0).unwrap();
    let profiles = cx.profiles(None, Execution::available());
    c.eq("brute-force dims", totals(&profiles), vec![1, 1, 0, 1, 6]);
    c.eq("H^4 brute-force total", profiles[4].total, 6);

    let h3 = &report.entry(3).generators;
    let x1_sigma = sigma.mul_function(&poly("x1", n));
    c.check(h3.len() == 1 && proportional(&h3[0].form, &x1_sigma), || {
        format!(
            "H^3 generator proportional to x1*sigma: closed form gives {}; d_f(x1*sigma) = {}",
            h3.first().map_or("nothing".into(), |g| g.label.clone()),
            d_f_p(&f, 0, &x1_sigma).unwrap()
        )
    });
    let m3 = profiles[3].per_degree.keys().next().copied().unwrap_or(0);
    let witnesses = cx.witness_cocycles(3, m3).unwrap();
    c.check(witnesses.len() == 1 && proportional(&witnesses[0], &x1_sigma), || {
        format!("brute-force H^3 witness at degree {m3} proportional to x1*sigma")
    });
    if let Some(g) = h3.first() {
        c.eq("H^3 closed-form generator certified", cx.certify_classes(3, g.degree, std::slice::from_ref(&g.form)), Ok(1));
    }
    placement_agrees(&mut c, "D5", &f, &w, 0);
    c
}

fn criterion_3() -> Checks {
    let mut c = Checks::default();
    for n in [3usize, 4] {
        let f = Polynomial::from_terms(n, (0..n).map(|i| {
            let mut e = vec![0; n];
            e[i] = 2;
            (Monomial::from_exponents(e), scalar(1))
        }));
        let w = WeightSystem::standard(n).unwrap();
        let cx = TwistedComplex::new(&f, &w, 0).unwrap();
        let profiles = cx.profiles(None, Execution::available());
        let (top_minus, top) = if n % 2 == 1 { (0, 1) } else { (1, 2) };
        c.eq(&format!("n={n} H^{} total", n - 1), profiles[n - 1].total, top_minus);
        c.eq(&format!("n={n} H^{n} total"), profiles[n].total, top);
        let omega = DifferentialForm::volume(n);
        let m_omega = n as i64;
        c.eq(&format!("n={n} omega certified"), cx.certify_classes(n, m_omega, std::slice::from_ref(&omega)), Ok(1));
        let wit = cx.witness_cocycles(n, m_omega).unwrap();
        c.check(wit.len() == 1 && proportional(&wit[0], &omega), || format!("n={n} witness at degree {m_omega} is omega"));
        if n == 4 {
            let f2_omega = omega.mul_function(&f.power(2));
            c.eq("n=4 f^2*omega certified at degree 8", cx.certify_classes(4, 8, &[f2_omega]), Ok(1));
            c.eq("n=4 witnesses at degree 8", cx.witness_cocycles(4, 8).unwrap().len(), 1);
            let f_sigma = DifferentialForm::euler_contraction(&w).mul_function(&f);
            c.eq("n=4 f*sigma certified", cx.certify_classes(3, 6, &[f_sigma]), Ok(1));
        }
        placement_agrees(&mut c, &format!("quadratic n={n}"), &f, &w, 0);
    }
    c
}

fn criterion_4() -> Checks {
    let mut c = Checks::default();
    for n in [3usize, 4, 5] {
        let f = poly("x1", n);
        let w = WeightSystem::standard(n).unwrap();
        let a = milnor_algebra(&f, &w).unwrap();
        let report = report_from_algebra(&a, 0);
        let mut expected = vec![0; n + 1];
        expected[0] = 1;
        expected[1] = 1;
        c.eq(&format!("n={n} closed-form dims"), report.dimensions(), finite(&expected));
        c.eq(&format!("n={n} H^1 generator"), report.entry(1).generators[0].form.clone(), DifferentialForm::dx(n, 0));
        let cx = TwistedComplex::new(&f, &w, 0).unwrap();
        c.eq(&format!("n={n} brute-force dims"), totals(&cx.profiles(None, Execution::available())), expected);
        let wit = cx.witness_cocycles(1, 1).unwrap();
        c.check(wit.len() == 1 && proportional(&wit[0], &DifferentialForm::dx(n, 0)), || {
            format!("n={n} H^1 witness is dx1")
        });
    }
    c
}

fn catalog() -> Vec<SingularityClass> {
    catalog_sweep([3, 4], &ALL_FAMILIES, None)
}

fn criterion_5() -> Checks {
    let mut c = Checks::default();
    for class in catalog() {
        let (f, w, n_deg) = class.standard_polynomial().unwrap();
        for p in -2..=2i64 {
            let tag = format!("{class} n={} p={p}", class.n());
            let (dim, gen) = npcoh_core::closed_form::h0_dimension(&f, p);
            let cx = TwistedComplex::new(&f, &w, p).unwrap();
            let prof = cx.cohomology_profile(0, None, Execution::available()).unwrap();
            c.eq(&format!("{tag} total"), prof.total, dim);
            c.check(prof.stabilized, || format!("{tag} not stabilized"));
            if p <= 0 {
                c.eq(&format!("{tag} placement"), prof.per_degree.clone(), BTreeMap::from([(-p * n_deg, 1)]));
                let g = DifferentialForm::function(gen.unwrap());
                c.eq(&format!("{tag} f^-p certified"), cx.certify_classes(0, -p * n_deg, &[g]), Ok(1));
            }
        }
    }
    c
}

fn criterion_6() -> Checks {
    let mut c = Checks::default();
    let mut classes = catalog_sweep([3, 4], &[Family::A], Some(5));
    classes.extend(catalog_sweep([3, 4], &[Family::D, Family::E], None));
    for class in classes {
        let (f, w, _) = class.standard_polynomial().unwrap();
        let n = class.n();
        let a = milnor_algebra(&f, &w).unwrap();
        for p in [0, n as i64 - 2] {
            let tag = format!("{class} n={n} p={p}");
            let report = report_from_algebra(&a, p);
            let cx = TwistedComplex::new(&f, &w, p).unwrap();
            let hi = cx.default_window().1;
            let profiles = cx.profiles(None, Execution::available());
            for e in &report.entries {
                let prof = &profiles[e.k];
                match &e.dimension {
                    Dimension::Finite(d) => {
                        c.eq(&format!("{tag} H^{} total", e.k), prof.total, *d);
                        c.check(prof.stabilized, || format!("{tag} H^{} not stabilized", e.k));
                    }
                    Dimension::Infinite { .. } => {
                        let late = prof.per_degree.keys().filter(|&&m| 2 * m > hi).count();
                        c.check(late >= 3, || format!("{tag} H^{}: only {late} non-zero degrees above {}", e.k, hi / 2));
                        c.check(!prof.stabilized, || format!("{tag} H^{} stabilized", e.k));
                    }
                    Dimension::NotCovered => {}
                }
            }
        }
    }
    c
}

/// A random quasihomogeneous k-form of degree m with small integer coefficients.
fn random_form(rng: &mut ChaCha8Rng, w: &WeightSystem, k: usize, m: i64) -> DifferentialForm {
    let n = w.nvars();
    let slice = slice_basis(w, k, m);
    let mut out = DifferentialForm::zero(n, k);
    if slice.dim() == 0 {
        return out;
    }
    for _ in 0..rng.gen_range(1..=4) {
        let (mono, set) = &slice.basis()[rng.gen_range(0..slice.dim())];
        let coeff = rng.gen_range(-5i64..=5);
        let piece = DifferentialForm::monomial_form(Polynomial::term(mono.clone(), scalar(coeff)), *set);
        out = out.add(&piece).unwrap();
    }
    out
}

fn random_polynomial(rng: &mut ChaCha8Rng, w: &WeightSystem, d: i64) -> Polynomial {
    random_form(rng, w, 0, d).as_function().unwrap()
}

fn small_catalog() -> Vec<(Polynomial, WeightSystem, i64)> {
    ["A1", "A2", "A3", "D4", "D5", "E6"]
        .iter()
        .flat_map(|name| {
            [3usize, 4].map(|n| SingularityClass::parse(name, n, None).unwrap().standard_polynomial().unwrap())
        })
        .collect()
}

fn criterion_7() -> Checks {
    let mut c = Checks::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cat = small_catalog();
    let mut complex_checks = 0;
    while complex_checks < 600 {
        let (f, w, _) = &cat[rng.gen_range(0..cat.len())];
        let n = w.nvars();
        let k = rng.gen_range(0..=n);
        let m = rng.gen_range(0..=20);
        let p = rng.gen_range(-3..=5);
        let a = random_form(&mut rng, w, k, m);
        if a.is_zero() {
            continue;
        }
        complex_checks += 1;
        let once = d_f_p(f, p, &a).unwrap();
        let twice = d_f_p(f, p, &once).unwrap();
        c.check(twice.is_zero(), || format!("d_f^({p}) o d_f^({p}) != 0 on {a}"));
        let lhs = once.mul_function(f);
        let rhs = d_f_p(f, p - 1, &a.mul_function(f)).unwrap();
        c.check(lhs == rhs, || format!("f d_f^({p})(a) != d_f^({})(f a) on {a}", p - 1));
    }
    for _ in 0..200 {
        let (_, w, _) = &cat[rng.gen_range(0..cat.len())];
        let d = rng.gen_range(0..=20);
        let g = random_polynomial(&mut rng, w, d);
        let sigma = DifferentialForm::euler_contraction(w);
        let lhs = forms::wedge(&forms::differential(&g), &sigma).unwrap();
        let rhs = DifferentialForm::volume(w.nvars()).mul_function(&w.euler_apply(&g));
        c.check(lhs == rhs, || format!("dg ^ sigma != (W.g) omega for g = {g}"));
        let p = rng.gen_range(-3..=25);
        let g: Polynomial = Polynomial::from_terms(
            w.nvars(),
            g.terms().filter(|(m, _)| w.monomial_degree(m) != p).map(|(m, c)| (m.clone(), c.clone())),
        );
        let h = w.homotopy_solve(p, &g).unwrap();
        c.check(&w.euler_apply(&h) - &h.scale(&scalar(p)) == g, || format!("homotopy round trip for p={p}, g={g}"));
    }
    for class in catalog() {
        let (f, w, n_deg) = class.standard_polynomial().unwrap();
        c.eq(&format!("{class} n={} Euler identity", class.n()), w.euler_apply(&f), f.scale(&scalar(n_deg)));
    }
    c.check(complex_checks >= 500, || "fewer than 500 random forms".into());
    c
}

fn criterion_8() -> Checks {
    let mut c = Checks::default();
    for class in catalog() {
        let (f, w, n_deg) = class.standard_polynomial().unwrap();
        let tag = format!("{class} n={}", class.n());
        let a = milnor_algebra(&f, &w).unwrap();
        c.eq(
            &format!("{tag} product formula"),
            milnor_number_oracle(&w, n_deg),
            BigRational::from_integer(BigInt::from(a.codimension())),
        );
        let series = poincare_series_oracle(&w, n_deg).unwrap();
        let mut profile = vec![0i64; series.len()];
        for (&d, &count) in a.degree_profile() {
            if d as usize >= profile.len() {
                profile.resize(d as usize + 1, 0);
            }
            profile[d as usize] = count as i64;
        }
        c.eq(&format!("{tag} Poincare series"), profile, series.clone());
        c.eq(&format!("{tag} series total"), series.iter().sum::<i64>(), a.codimension() as i64);
        c.eq(&format!("{tag} Milnor number"), a.codimension(), class.milnor_number());
    }
    c
}

fn criterion_9() -> Checks {
    let mut c = Checks::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cat = small_catalog();
    for mode in [DivisionMode::Wedge, DivisionMode::WedgeD] {
        let mut done = 0;
        while done < 120 {
            let (f, w, _) = &cat[rng.gen_range(0..cat.len())];
            let n = w.nvars();
            let df = forms::differential(f);
            let (k_lo, shift) = match mode {
                DivisionMode::Wedge => (1, 1),
                DivisionMode::WedgeD => (2, 2),
            };
            let k = rng.gen_range(k_lo..=n - 1);
            let m = rng.gen_range(1..=18);
            let inner = random_form(&mut rng, w, k - shift, m);
            let built = match mode {
                DivisionMode::Wedge => inner,
                DivisionMode::WedgeD => forms::exterior_d(&inner),
            };
            let a = forms::wedge(&df, &built).unwrap();
            if a.is_zero() {
                continue;
            }
            done += 1;
            let cx = TwistedComplex::new(f, w, 0).unwrap();
            match cx.divide_by_df(&a, mode) {
                Ok(sol) => {
                    let back = match mode {
                        DivisionMode::Wedge => forms::wedge(&df, &sol).unwrap(),
                        DivisionMode::WedgeD => forms::wedge(&df, &forms::exterior_d(&sol)).unwrap(),
                    };
                    c.check(back == a, || format!("{mode:?}: re-wedge differs for {a}"));
                }
                Err(e) => c.check(false, || format!("{mode:?}: {e} for {a}")),
            }
        }
    }
    c
}

type Criterion = (&'static str, fn() -> Checks);

fn main() {
    let criteria: [Criterion; 9] = [
        ("A2 worked example", criterion_1),
        ("D5 worked example", criterion_2),
        ("non-degenerate quadratic, n = 3 and 4", criterion_3),
        ("regular model", criterion_4),
        ("H^0 sweep, p in -2..2", criterion_5),
        ("closed form vs brute force on the catalog", criterion_6),
        ("property suites", criterion_7),
        ("Milnor cross-checks", criterion_8),
        ("division by df", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(checks) if checks.failures.is_empty() => {
                println!("criterion {}: PASS  {name} ({} checks, {secs:.1}s)", i + 1, checks.passed);
            }
            Ok(checks) => {
                failed += 1;
                println!(
                    "criterion {}: FAIL  {name} ({} passed, {} failed, {secs:.1}s)",
                    i + 1,
                    checks.passed,
                    checks.failures.len()
                );
                for f in checks.failures.iter().take(20) {
                    println!("    - {f}");
                }
            }
            Err(_) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} (panicked)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
