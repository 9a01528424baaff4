//! Acceptance suite. Run with `cargo test --test acceptance`; prints one line per
//! criterion and exits nonzero if any fails.

mod common;

use std::io::Write;
use std::process::{Command as Process, Stdio};
use std::time::{Duration, Instant};

use common::*;
use cxone::cli::{execute, Command, Options};
use cxone::dh::{circle_density, dh_estimate, opposite_weights_density, GridSpec};
use cxone::lattice::{combine_columns, content, exists_sign_relation, IntMatrix, RationalVector, SignRegime};
use cxone::local_model::{fiber_orbit_check, submersion_sampling, surjectivity_check, LocalModel};
use cxone::rep::SubtorusRep;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn to_i64(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| i64::try_from(x).unwrap()).collect()
}

fn weight_rows(rep: &SubtorusRep) -> Vec<Vec<i64>> {
    rep.weights().row_vecs().iter().map(|r| to_i64(r)).collect()
}

fn kernel_rep(q: &[i64]) -> SubtorusRep {
    SubtorusRep::from_kernel(q.len(), IntMatrix::from_i64_rows(&[q])).unwrap()
}

fn plain_model(rep: SubtorusRep) -> LocalModel {
    let h = rep.h();
    LocalModel::new(h, rep, RationalVector::zeros(h), IntMatrix::zeros(0, h)).unwrap()
}

fn packing(orbit: Value) -> Result<Value, String> {
    let r =
        execute(Command::PackingCheck, &orbit.to_string(), &Options::default()).map_err(|e| e.to_string())?;
    serde_json::from_str(&r.body).map_err(|e| e.to_string())
}

fn strings(v: &Value) -> Vec<Vec<String>> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|p| {
            p.as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_str().map_or(x.to_string(), str::to_string))
                .collect()
        })
        .collect()
}

fn sorted(mut v: Vec<Vec<String>>) -> Vec<Vec<String>> {
    v.sort();
    v
}

fn ss(rows: &[&[&str]]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| r.iter().map(|s| s.to_string()).collect())
        .collect()
}

fn certificate_summary(report: &Value) -> Vec<(Vec<String>, String)> {
    report["certificates"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["valid"] == true)
        .map(|c| {
            let n: Vec<String> = c["normal"]
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.to_string())
                .collect();
            (n, c["side"].as_str().unwrap().to_string())
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let r = packing(json!({"family": "B", "rank": 2, "base_point": [1, 0]}))?;
    let elapsed = t.elapsed();
    check(
        sorted(strings(&r["fixed_points"]))
            == sorted(ss(&[&["1", "0"], &["-1", "0"], &["0", "1"], &["0", "-1"]])),
        format!("fixed points {}", r["fixed_points"]),
    )?;
    let at = r["isotropy_weights"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| strings(&json!([e["point"].clone()]))[0] == ["1", "0"])
        .ok_or("no weights at (1,0)")?;
    let mut w: Vec<Vec<i64>> = serde_json::from_value(at["weights"].clone()).unwrap();
    w.sort();
    check(
        w == vec![vec![-1, -1], vec![-1, 0], vec![-1, 1]],
        format!("weights {w:?}"),
    )?;
    let verts = sorted(strings(&r["polytope"]["vertices"]));
    check(
        verts == sorted(strings(&r["fixed_points"])),
        "polytope vertices are not the four fixed points",
    )?;
    let facets = r["polytope"]["facets"].as_array().unwrap();
    let mut normals: Vec<Vec<i64>> = facets
        .iter()
        .map(|f| serde_json::from_value(f["normal"].clone()).unwrap())
        .collect();
    normals.sort();
    check(
        normals == vec![vec![-1, -1], vec![-1, 1], vec![1, -1], vec![1, 1]]
            && facets.iter().all(|f| f["offset"] == "1"),
        "diamond |x|+|y| ≤ 1 expected",
    )?;
    let certs = certificate_summary(&r);
    check(
        certs.len() == 2
            && certs.contains(&(vec!["1".into(), "0".into()], "+".into()))
            && certs.contains(&(vec!["1".into(), "0".into()], "-".into())),
        format!("certificates {certs:?}"),
    )?;
    check(
        r["packing_found"] == true && r["weyl_element"]["flips"] == json!([0]),
        "pairing is not the flip of x",
    )?;
    check(elapsed < Duration::from_secs(1), format!("runtime {elapsed:?}"))?;
    Ok(format!(
        "4 fixed points, diamond, 2 certificates, flip [0], {:.3} s",
        elapsed.as_secs_f64()
    ))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let r = packing(json!({"family": "D", "rank": 3, "base_point": [1, 0, 0]}))?;
    let elapsed = t.elapsed();
    let fixed = sorted(strings(&r["fixed_points"]));
    let expected = sorted(ss(&[
        &["1", "0", "0"],
        &["-1", "0", "0"],
        &["0", "1", "0"],
        &["0", "-1", "0"],
        &["0", "0", "1"],
        &["0", "0", "-1"],
    ]));
    check(fixed == expected, format!("fixed points {fixed:?}"))?;
    let p = &r["polytope"];
    check(p["dim"] == 3, "polytope not full-dimensional")?;
    check(sorted(strings(&p["vertices"])) == expected, "octahedron vertices")?;
    let facets = p["facets"].as_array().unwrap();
    check(facets.len() == 8, format!("{} facets", facets.len()))?;
    for f in facets {
        let n: Vec<i64> = serde_json::from_value(f["normal"].clone()).unwrap();
        check(
            n.iter().all(|x| x.abs() == 1) && f["offset"] == "1",
            format!("facet {f}"),
        )?;
    }
    let certs = certificate_summary(&r);
    check(
        certs.len() == 2 && certs[0].0 == certs[1].0 && certs[0].1 != certs[1].1,
        format!("certificates {certs:?}"),
    )?;
    let flips: Vec<usize> = serde_json::from_value(r["weyl_element"]["flips"].clone()).unwrap();
    check(
        !flips.is_empty() && flips.len().is_multiple_of(2),
        format!("flips {flips:?}"),
    )?;
    check(elapsed < Duration::from_secs(1), format!("runtime {elapsed:?}"))?;
    Ok(format!(
        "6 fixed points, octahedron 6/8, 2 certificates, flips {flips:?}, {:.3} s",
        elapsed.as_secs_f64()
    ))
}

/// Kernel rows with entries in [−5,5], gcd 1 and one sign, so H is complexity one and non-proper.
fn kernel_suite(count: usize) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(2..=6);
        let sign = if rng.gen::<bool>() { 1 } else { -1 };
        let q: Vec<i64> = (0..n).map(|_| sign * rng.gen_range(0..=5)).collect();
        if q.iter().fold(0i64, |g, x| num_integer::gcd(g, *x)) == 1 {
            out.push(q);
        }
    }
    out
}

fn criterion_3() -> Outcome {
    let suite = kernel_suite(200);
    let mut library_time = Duration::ZERO;
    let mut onto = 0;
    for q in &suite {
        let t = Instant::now();
        let rep = kernel_rep(q);
        let p = rep.defining_polynomial().map_err(|e| format!("{q:?}: {e}"))?;
        let is_onto = rep.is_onto();
        library_time += t.elapsed();

        let xi = to_i64(&p.exponents);
        check(
            combine_columns(rep.weights(), &p.exponents)
                .iter()
                .all(Zero::is_zero),
            format!("{q:?}: Σξη ≠ 0"),
        )?;
        check(content(&p.exponents).is_one(), format!("{q:?}: gcd ≠ 1"))?;
        check(p.is_positive() == is_onto, format!("{q:?}: positivity vs onto"))?;
        let oracle =
            primitive_kernel_generator(&weight_rows(&rep), q.len(), 5).ok_or("oracle found nothing")?;
        // ξ is sign-normalized to be nonnegative, the oracle to a positive leading entry
        let flip = if oracle.iter().any(|x| *x < 0) { -1 } else { 1 };
        let oracle: Vec<i64> = oracle.iter().map(|x| x * flip).collect();
        check(xi == oracle, format!("{q:?}: ξ {xi:?} vs oracle {oracle:?}"))?;
        onto += usize::from(is_onto);
    }
    check(
        library_time < Duration::from_secs(10),
        format!("runtime {library_time:?}"),
    )?;
    Ok(format!(
        "200/200 agree ({onto} onto), {:.3} s",
        library_time.as_secs_f64()
    ))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let mut tested = 0;
    let (mut onto, mut proper) = (0, 0);
    while tested < 500 {
        let h = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=5);
        let rows: Vec<Vec<i64>> = (0..h)
            .map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect())
            .collect();
        let m = IntMatrix::from_rows(n, rows.iter().map(|r| big(r)).collect()).unwrap();
        let Ok(rep) = SubtorusRep::from_weights(m.clone()) else {
            continue;
        };
        tested += 1;
        let nonneg = exists_sign_relation(&m, SignRegime::NonnegNonzero)
            .unwrap()
            .is_feasible();
        check(
            rep.is_proper() != nonneg,
            format!("{rows:?}: proper and nonneg relation not exclusive"),
        )?;
        check(
            rep.is_proper() == !oracle_not_proper(&rows, n),
            format!("{rows:?}: is_proper vs oracle"),
        )?;
        check(
            rep.is_onto() == oracle_onto(&rows, n),
            format!("{rows:?}: is_onto vs oracle"),
        )?;
        onto += usize::from(rep.is_onto());
        proper += usize::from(rep.is_proper());
    }
    Ok(format!("500/500 agree ({onto} onto, {proper} proper)"))
}

fn criterion_5() -> Outcome {
    let mut reps = 0;
    let mut patterns = 0;
    let mut exceptional = 0;
    for q in kernel_suite(200) {
        let rep = kernel_rep(&q);
        if !rep.is_onto() {
            continue;
        }
        reps += 1;
        let xi = to_i64(&rep.defining_polynomial().unwrap().exponents);
        let ann: Vec<Vec<BigInt>> = rep.annihilator().row_vecs();
        let n = q.len();
        for mask in 0u32..(1 << n) {
            let support: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
            let ex = rep.is_exceptional_orbit(&support).map_err(|e| e.to_string())?;
            let st = rep.stabilizer(&support).map_err(|e| e.to_string())?;
            let mut rows = ann.clone();
            for &j in &support {
                let mut e = vec![BigInt::zero(); n];
                e[j] = BigInt::one();
                rows.push(e);
            }
            let trivial = rows_generate_lattice(&rows, n);
            check(
                ex == !trivial,
                format!("{q:?} {support:?}: exceptional {ex}, minors say trivial {trivial}"),
            )?;
            check(
                ex == !st.is_trivial,
                format!("{q:?} {support:?}: exceptional vs stabilizer"),
            )?;
            check(
                trivial == stabilizer_is_trivial_direct(&xi, &support),
                format!("{q:?} {support:?}: direct"),
            )?;
            patterns += 1;
            exceptional += usize::from(ex);
        }
    }
    check(reps > 0, "no onto reps in the suite")?;
    Ok(format!(
        "{reps} reps, {patterns} supports ({exceptional} exceptional), all agree"
    ))
}

fn fiber_models() -> Vec<(&'static str, LocalModel)> {
    let tilted = LocalModel::new(
        2,
        kernel_rep(&[2, 3]),
        RationalVector(vec![big_rat(1, 2), big_rat(-1, 3)]),
        IntMatrix::from_i64_rows(&[&[1, 1]]),
    )
    .unwrap();
    vec![
        ("ξ=(1,1)", plain_model(kernel_rep(&[1, 1]))),
        ("ξ=(1,2,1)", plain_model(kernel_rep(&[1, 2, 1]))),
        ("ξ=(1,1,0)", plain_model(kernel_rep(&[1, 1, 0]))),
        ("ξ=(2,3) in T²", tilted),
        ("ξ=(1,1,1)", plain_model(kernel_rep(&[1, 1, 1]))),
    ]
}

fn big_rat(p: i64, q: i64) -> num_rational::BigRational {
    num_rational::BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn criterion_6() -> Outcome {
    let models = fiber_models();
    let split = kernel_rep(&[1, 1, 0]).split().unwrap();
    check(
        split.h_double_prime() == 1,
        "split model does not have a one-dimensional toric part",
    )?;
    let mut lines = Vec::new();
    for (seed, (name, m)) in models.iter().enumerate() {
        let f = fiber_orbit_check(m, 10_000, seed as u64, 1e-8).map_err(|e| format!("{name}: {e}"))?;
        check(
            f.pass_rate() >= 0.999,
            format!("{name}: fiber pass rate {}", f.pass_rate()),
        )?;
        let s = surjectivity_check(m, 1000, seed as u64, 1e-8).map_err(|e| format!("{name}: {e}"))?;
        check(
            s.successes == s.targets,
            format!("{name}: {}/{} preimages", s.successes, s.targets),
        )?;
        lines.push(format!("{name} {:.2}%", 100.0 * f.pass_rate()));
    }
    Ok(format!("{}; surjectivity 1000/1000 each", lines.join(", ")))
}

fn criterion_7() -> Outcome {
    let mut models: Vec<(&str, LocalModel)> = fiber_models()
        .into_iter()
        .filter(|(_, m)| m.rep().is_onto())
        .collect();
    models.push((
        "H′ of ξ=(1,1,0)",
        plain_model(kernel_rep(&[1, 1, 0]).split().unwrap().surjective),
    ));
    let mut worst = 0f64;
    for (seed, (name, m)) in models.iter().enumerate() {
        let s = submersion_sampling(m, 10_000, seed as u64, 1e-9).map_err(|e| format!("{name}: {e}"))?;
        check(
            s.rank_failures == 0,
            format!("{name}: {} rank failures", s.rank_failures),
        )?;
        check(
            s.witness_failures == 0 && s.max_witness_error < 1e-9,
            format!("{name}: witness error {:e}", s.max_witness_error),
        )?;
        worst = worst.max(s.max_witness_error);
    }
    Ok(format!(
        "{} models, 0 rank failures, max witness error {worst:.1e}",
        models.len()
    ))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn criterion_8() -> Outcome {
    const SAMPLES: usize = 1_000_000;
    let two_pi = 2.0 * std::f64::consts::PI;
    let circle = SubtorusRep::from_weights(IntMatrix::from_i64_rows(&[&[1]])).unwrap();
    let plane = SubtorusRep::from_weights(IntMatrix::from_i64_rows(&[&[1, 0], &[0, 1]])).unwrap();
    let opposite = SubtorusRep::from_weights(IntMatrix::from_i64_rows(&[&[1, -1]])).unwrap();
    let g1 = GridSpec::new(vec![-0.25], vec![1.25], vec![6]).unwrap();
    let g2 = GridSpec::cube(2, 0.0, 1.0, 4).unwrap();
    let g3 = GridSpec::new(vec![-0.5], vec![0.5], vec![10]).unwrap();
    let r = 2f64.sqrt();
    let mut worst = 0f64;
    let mut slowest = Duration::ZERO;
    let mut timed = |f: &dyn Fn() -> cxone::dh::DHEstimate| {
        let t = Instant::now();
        let e = f();
        slowest = slowest.max(t.elapsed());
        e
    };
    for seed in 0..5u64 {
        let e = timed(&|| dh_estimate(&circle, r, &g1, SAMPLES, seed).unwrap());
        for b in 0..6 {
            let c = g1.center(b)[0];
            let exact = circle_density(c, r);
            if exact > 0.0 {
                let err = rel(e.density[b], two_pi);
                worst = worst.max(err);
                check(
                    err < 0.02,
                    format!("circle seed {seed} bin {b}: {}", e.density[b]),
                )?;
            } else {
                check(
                    e.density[b] == 0.0,
                    format!("circle seed {seed} bin {b} outside image is {}", e.density[b]),
                )?;
            }
        }

        let e = timed(&|| dh_estimate(&plane, r, &g2, SAMPLES, seed).unwrap());
        for (b, d) in e.density.iter().enumerate() {
            let err = rel(*d, two_pi * two_pi);
            worst = worst.max(err);
            check(err < 0.02, format!("plane seed {seed} bin {b}: {d}"))?;
        }

        let e = timed(&|| dh_estimate(&opposite, 1.0, &g3, SAMPLES, seed).unwrap());
        for b in 0..10 {
            let c = g3.center(b)[0];
            if c.abs() > 0.25 + 1e-12 {
                continue;
            }
            let err = rel(e.density[b], opposite_weights_density(c, 1.0));
            worst = worst.max(err);
            check(err < 0.02, format!("tent seed {seed} bin {b}: {}", e.density[b]))?;
            let mirror = e.density[9 - b];
            check(
                rel(e.density[b], mirror) < 0.02,
                format!("tent seed {seed} bins {b}/{}: asymmetric", 9 - b),
            )?;
        }
    }
    check(
        slowest < Duration::from_secs(30),
        format!("slowest run {slowest:?}"),
    )?;
    Ok(format!(
        "seeds 0-4, max relative error {:.2}%, slowest run {:.2} s",
        100.0 * worst,
        slowest.as_secs_f64()
    ))
}

fn run_binary(args: &[&str], input: &str) -> (i32, Vec<u8>, Vec<u8>) {
    let mut child = Process::new(env!("CARGO_BIN_EXE_cxone"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    // the process may exit before reading stdin (usage errors)
    let _ = child.stdin.take().unwrap().write_all(input.as_bytes());
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap_or(-1), out.stdout, out.stderr)
}

fn criterion_9() -> Outcome {
    let rep = r#"{"n":3,"presentation":"kernel","matrix":[[1,2,1]]}"#;
    let model =
        r#"{"d":1,"rep":{"n":2,"presentation":"kernel","matrix":[[1,1]]},"alpha":["0"],"h0_basis":[]}"#;
    let dh = r#"{"rep":{"n":2,"presentation":"image","matrix":[[1,-1]]},"radius":1,"grid":{"lower":[-0.5],"upper":[0.5],"bins":[10]}}"#;
    let b2 = r#"{"family":"B","rank":2,"base_point":[1,0]}"#;
    let d3 = r#"{"family":"D","rank":3,"base_point":["1","0","0"]}"#;
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["analyze-rep"], rep),
        (vec!["defining-poly"], rep),
        (
            vec!["split"],
            r#"{"n":3,"presentation":"kernel","matrix":[[1,1,0]]}"#,
        ),
        (vec!["classify-fiber"], model),
        (vec!["exceptional-orbits"], rep),
        (
            vec!["verify-trivialization", "--samples", "300", "--seed", "7"],
            model,
        ),
        (vec!["dh-estimate", "--samples", "50000", "--seed", "3"], dh),
        (vec!["coadjoint-orbit"], d3),
        (vec!["packing-check"], b2),
        (
            vec!["defining-poly"],
            r#"{"n":2,"presentation":"image","matrix":[[1,1]]}"#,
        ),
        (vec!["analyze-rep"], "not json"),
    ];
    for (args, input) in &cases {
        let a = run_binary(args, input);
        let b = run_binary(args, input);
        check(a == b, format!("{args:?} differs between runs"))?;
        check(!a.1.is_empty(), format!("{args:?} printed nothing"))?;
    }
    Ok(format!(
        "{} invocations byte-identical across two runs",
        cases.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("B2 packing certificates", criterion_1),
        ("D3 packing certificates", criterion_2),
        ("defining polynomial suite", criterion_3),
        ("onto/proper suite", criterion_4),
        ("exceptional orbits vs stabilizers", criterion_5),
        ("fiber property", criterion_6),
        ("submersion witnesses", criterion_7),
        ("DH density oracle", criterion_8),
        ("determinism", criterion_9),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str())) {
            continue;
        }
        let t = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("[{}] {name}: PASS ({secs:.2} s) {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[{}] {name}: FAIL ({secs:.2} s) {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
