//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p purcat --test acceptance` (add `--release` for speed).

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use purcat_core::complexes::{hom_complex, homology, is_acyclic, shift, tensor_complex};
use purcat_core::exact_linalg::{smith_normal_form, solve_linear};
use purcat_core::homotopy::{certify_k_pure_injective, hom_dpur, hom_dpur_seeded, hom_k, null_homotopy, KPurityRoute};
use purcat_core::monoidal::{adjunction_iso, check_dpur_adjunction, check_phom_adjunction, check_tensor_descends};
use purcat_core::purity::{contract, is_pure_acyclic, is_pure_acyclic_at, probe_battery};
use purcat_core::random::{self, Bounds};
use purcat_core::resolutions::{
    colimit_tower, injective_step_checks, injective_tower, limit_tower, projective_step_checks, projective_tower,
    required_depth, resolve, resolve_injective_bounded_below, resolve_projective_bounded_above, Side,
};
use purcat_core::{ChainMap, Complex, Error, Int, IntMatrix, Ring};

#[path = "common/cases.rs"]
mod cases;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn small() -> Bounds {
    Bounds { max_generators: 3, max_entry: 6, general: 0.2 }
}

fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det(&minor)
        })
        .sum()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from determinantal divisors: `s_k = d_k / d_(k-1)`, where
/// `d_k` is the gcd of all `k × k` minors.
fn determinantal_factors(a: &[Vec<i128>]) -> Vec<i128> {
    let (r, c) = (a.len(), a.first().map_or(0, Vec::len));
    let mut out = Vec::new();
    let mut prev = 1;
    for k in 1..=r.min(c) {
        let mut d = 0;
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let m: Vec<Vec<i128>> = rows.iter().map(|&i| cols.iter().map(|&j| a[i][j]).collect()).collect();
                d = gcd(d, det(&m));
            }
        }
        out.push(if d == 0 { 0 } else { d / prev });
        if d != 0 {
            prev = d;
        }
    }
    out
}

fn to_i128(m: &IntMatrix) -> Vec<Vec<i128>> {
    m.to_rows().iter().map(|r| r.iter().map(|x| x.to_i64().unwrap() as i128).collect()).collect()
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let v: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
    IntMatrix::from_rows(&v, cols).unwrap()
}

fn criterion_1() -> Outcome {
    let mut rng = random::rng(1);
    let mut snf = 0;
    for k in 0..1000 {
        let ring = if k % 2 == 0 { Ring::Integers } else { Ring::zmod(12) };
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let a = random_matrix(&mut rng, r, c, 10);
        let s = smith_normal_form(&a, &ring);
        ensure!(s.u.mul(&a).mul(&s.v).reduced(&ring) == s.d.reduced(&ring), "U·A·V ≠ D on {a:?}");
        let want = determinantal_factors(&to_i128(&a));
        let got: Vec<i128> = s.diagonal().iter().map(|x| x.to_i64().unwrap() as i128).collect();
        let norm = |x: i128| if ring.is_integers() { x.abs() } else { gcd(x, 12) };
        ensure!(
            got.iter().map(|&x| norm(x)).collect::<Vec<_>>() == want.iter().map(|&x| norm(x)).collect::<Vec<_>>(),
            "invariant factors {got:?} vs oracle {want:?} over {ring}"
        );
        snf += 1;
    }
    let mut solved = 0;
    for k in 0..200 {
        let ring = if k % 2 == 0 { Ring::zmod(12) } else { Ring::Integers };
        let (r, c) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let a = random_matrix(&mut rng, r, c, 6);
        let (box_lo, box_hi) = if ring.is_integers() { (-3i64, 3i64) } else { (0, 11) };
        let b = if rng.gen_bool(0.5) {
            let x: Vec<i64> = (0..c).map(|_| rng.gen_range(box_lo..=box_hi)).collect();
            a.mul(&IntMatrix::column(x.into_iter().map(Int::from).collect())).reduced(&ring)
        } else {
            random_matrix(&mut rng, r, 1, 6).reduced(&ring)
        };
        let mut found = false;
        let total = (box_hi - box_lo + 1).pow(c as u32);
        for code in 0..total {
            let mut rest = code;
            let x: Vec<Int> = (0..c)
                .map(|_| {
                    let v = box_lo + rest % (box_hi - box_lo + 1);
                    rest /= box_hi - box_lo + 1;
                    Int::from(v)
                })
                .collect();
            if a.mul(&IntMatrix::column(x)).reduced(&ring) == b {
                found = true;
                break;
            }
        }
        match solve_linear(&a, &b, &ring).unwrap() {
            Some(x) => ensure!(a.mul(&x).reduced(&ring) == b, "solve_linear returned a non-solution"),
            None => ensure!(!found, "exhaustive search found a solution that solve_linear missed"),
        }
        if !ring.is_integers() {
            // the box is all of (Z/12)^c, so the search is complete
            ensure!(found == solve_linear(&a, &b, &ring).unwrap().is_some(), "solvability disagrees over Z/12");
        }
        solved += 1;
    }
    Ok(format!("{snf} SNF instances, {solved} solve instances"))
}

fn random_complex_mix(ring: &Ring, rng: &mut ChaCha8Rng, k: usize) -> Complex {
    let b = small();
    let lo = rng.gen_range(-2..=0);
    match k % 4 {
        0 => {
            let w = rng.gen_range(0..=3);
            random::complex(ring, rng, lo, lo + w, &b, false)
        }
        1 => random::pure_acyclic(ring, rng, lo, lo + 2, &b, false),
        2 => random::exact_complex(ring, rng, lo, &b, false),
        _ => {
            let c = random::complex(ring, rng, lo, lo + 1, &b, false);
            let e = random::exact_complex(ring, rng, lo, &b, false);
            purcat_core::complexes::direct_sum_complexes(ring, &[c, e]).complex
        }
    }
}

fn criterion_2() -> Outcome {
    let ring = Ring::zmod(12);
    let battery = probe_battery(&ring, 12);
    let mut rng = random::rng(2);
    let (mut pure, mut acyclic) = (0, 0);
    for k in 0..300 {
        let m = random_complex_mix(&ring, &mut rng, k);
        ensure!(m.is_zero() || m.width() <= 4, "window too wide");
        let v = is_pure_acyclic(&m, &battery);
        let ac = is_acyclic(&m);
        let each = ac && m.degrees().all(|n| is_pure_acyclic_at(&m, n, &battery).map(|v| v.is_pure()).unwrap_or(false));
        let contractible = null_homotopy(&ChainMap::identity(&m)).is_some();
        ensure!(v.is_pure() == each, "pure acyclic vs degreewise disagree");
        ensure!(v.is_pure() == contractible, "pure acyclic vs contraction disagree");
        ensure!(contract(&m).is_ok() == contractible, "greedy contraction disagrees with the homotopy solver");
        if v.is_pure() {
            ensure!(v.verify_complex(&m), "witness does not verify");
            for p in &battery.probes {
                let t = tensor_complex(&Complex::concentrated(p, 0), &m).unwrap().complex;
                ensure!(is_acyclic(&t), "pure verdict but N ⊗ M is not exact for N = {p}");
            }
            pure += 1;
        }
        acyclic += ac as usize;
    }
    Ok(format!("300 complexes, {acyclic} acyclic, {pure} pure acyclic"))
}

/// Resamples until the complex is nonzero (at most a few times).
fn nonzero(mut gen: impl FnMut() -> Complex) -> Complex {
    let mut c = gen();
    for _ in 0..8 {
        if !c.is_zero() {
            break;
        }
        c = gen();
    }
    c
}

fn criterion_3() -> Outcome {
    let mut rng = random::rng(3);
    let b = small();
    let mut checked = 0;
    for k in 0..200 {
        let ring = if k % 3 == 0 { Ring::Integers } else { Ring::zmod(12) };
        let bb = Bounds { max_generators: 2, ..b };
        let x = nonzero(|| random::complex(&ring, &mut rng, -1, 0, &bb, false));
        let y = nonzero(|| random::complex(&ring, &mut rng, 0, 1, &bb, false));
        let h = hom_complex(&x, &y).unwrap().complex;
        let (lo, hi) = if h.is_zero() { (0, 0) } else { (h.lo(), h.hi()) };
        for n in lo..=hi {
            let hn = homology(&h, n);
            ensure!(hn.is_isomorphic(&hom_k(&x, &shift(&y, n)).unwrap()), "H^{n} vs Hom_K(B, C[{n}])");
            ensure!(hn.is_isomorphic(&hom_k(&shift(&x, -n), &y).unwrap()), "H^{n} vs Hom_K(B[-{n}], C)");
            checked += 1;
        }
    }
    Ok(format!("200 pairs, {checked} degrees"))
}

fn criterion_4() -> Outcome {
    let ring = Ring::zmod(8);
    let mut rng = random::rng(4);
    let b = small();
    let mut maps = 0;
    for k in 0..200 {
        let (src, tgt) = if k % 2 == 0 {
            (random::pure_acyclic(&ring, &mut rng, -1, 1, &b, false), nonzero(|| random::complex(&ring, &mut rng, -1, 1, &b, false)))
        } else {
            (nonzero(|| random::complex(&ring, &mut rng, -1, 1, &b, false)), random::pure_acyclic(&ring, &mut rng, -1, 1, &b, false))
        };
        let mut f = random::chain_map(&src, &tgt, &mut rng);
        for _ in 0..8 {
            if !f.is_zero() {
                break;
            }
            f = random::chain_map(&src, &tgt, &mut rng);
        }
        maps += !f.is_zero() as usize;
        let s = null_homotopy(&f).ok_or_else(|| format!("no null-homotopy for instance {k}"))?;
        ensure!(s.witnesses(&f, &ChainMap::zero(&src, &tgt)), "homotopy does not witness f ≃ 0");
    }
    Ok(format!("200 pairs ({maps} nonzero maps), all null-homotopic"))
}

fn criterion_5() -> Outcome {
    let ring = Ring::zmod(8);
    let mut rng = random::rng(5);
    let b = small();
    let mut levels = 0;
    for k in 0..100 {
        let lo = rng.gen_range(-2..=1);
        let w = rng.gen_range(0..=3);
        let m = random::complex(&ring, &mut rng, lo, lo + w, &Bounds { max_generators: 2, ..b }, false);
        for side in [Side::Injective, Side::Projective] {
            let depth = required_depth(&m, side) + 1;
            let cert = resolve(&m, side, depth).map_err(|e| format!("instance {k}, {side}: {e}"))?;
            cert.validate().map_err(|e| format!("instance {k}, {side}: {e}"))?;
            ensure!(cert.termwise_flags.iter().all(|f| f.1), "termwise flags");
            let limit = match side {
                Side::Injective => {
                    let (t, fs) = injective_tower(&m, depth).map_err(|e| e.to_string())?;
                    t.validate().map_err(|e| e.to_string())?;
                    ensure!(t.levels.iter().all(|l| l.cone_identity), "cone identity");
                    levels += t.levels.len();
                    limit_tower(&t, &fs)
                }
                Side::Projective => {
                    let (t, fs) = projective_tower(&m, depth).map_err(|e| e.to_string())?;
                    t.validate().map_err(|e| e.to_string())?;
                    ensure!(t.levels.iter().all(|l| l.cone_identity), "cone identity");
                    levels += t.levels.len();
                    colimit_tower(&t, &fs)
                }
            };
            limit.map_err(|e| format!("instance {k}, {side} (co)limit: {e}"))?.validate().map_err(|e| e.to_string())?;
        }
    }
    let mut over_z = 0;
    for k in 0..20 {
        let m = random::complex(&Ring::Integers, &mut rng, -1, 1, &Bounds { max_generators: 2, ..b }, false);
        let cert = resolve(&m, Side::Projective, required_depth(&m, Side::Projective)).map_err(|e| format!("Z instance {k}: {e}"))?;
        cert.validate().map_err(|e| e.to_string())?;
        if !m.degrees().all(|n| m.module(n).is_torsion()) {
            ensure!(matches!(resolve(&m, Side::Injective, 4), Err(Error::UnsupportedRing(_))), "free part over Z must be unsupported");
            over_z += 1;
        }
    }
    Ok(format!("100 complexes on both sides, {levels} tower levels; {over_z} free-part rejections over Z"))
}

fn criterion_6() -> Outcome {
    let ring = Ring::zmod(8);
    let battery = probe_battery(&ring, 8);
    let mut rng = random::rng(6);
    let b = small();
    let mut steps = 0;
    for k in 0..50 {
        let checks = if k % 2 == 0 {
            let m = random::complex(&ring, &mut rng, 0, 2, &b, false);
            injective_step_checks(&resolve_injective_bounded_below(&m).map_err(|e| e.to_string())?, &battery)
        } else {
            let m = random::complex(&ring, &mut rng, -2, 0, &b, false);
            projective_step_checks(&resolve_projective_bounded_above(&m).map_err(|e| e.to_string())?, &battery)
        }
        .map_err(|e| e.to_string())?;
        for c in &checks {
            ensure!(c.passed(), "run {k}: step at degree {} fails for probe {}", c.degree, c.probe);
        }
        steps += checks.len();
    }
    Ok(format!("50 traced runs, {steps} step checks"))
}

fn criterion_7() -> Outcome {
    let mut rng = random::rng(7);
    let b = Bounds { max_generators: 2, ..small() };
    for k in 0..100 {
        let (ring, torsion) = if k % 4 == 3 { (Ring::Integers, true) } else { (Ring::zmod(12), false) };
        let m = random::complex(&ring, &mut rng, -1, 1, &b, torsion);
        let u = random::pure_qis(&m, &mut rng, &b, torsion);
        let a = random::complex(&ring, &mut rng, -1, 0, &b, torsion);
        let battery = purcat_core::purity::battery_for(&ring, &[u.src(), u.tgt(), &a]);
        let rep = check_tensor_descends(&u, &a, &battery).map_err(|e| e.to_string())?;
        ensure!(rep.passed(), "instance {k}: {:?}", rep.failures().collect::<Vec<_>>());
    }
    Ok("100 (u, A) pairs".into())
}

fn criterion_8() -> Outcome {
    let ring = Ring::zmod(12);
    let mut rng = random::rng(8);
    let b = Bounds { max_generators: 2, ..small() };
    let mut links = 0;
    for k in 0..100 {
        let (ha, hb, hc) = (rng.gen_range(-2..=0), rng.gen_range(-2..=0), rng.gen_range(0..=2));
        let a = random::complex(&ring, &mut rng, -2, ha, &b, false);
        let bb = random::complex(&ring, &mut rng, -2, hb, &b, false);
        let c = random::complex(&ring, &mut rng, 0, hc, &b, false);
        let w = adjunction_iso(&a, &bb, &c).map_err(|e| e.to_string())?.validate();
        ensure!(w.passed(), "instance {k}: currying round trip fails");
        let rep = check_dpur_adjunction(&a, &bb, &c, 3).map_err(|e| e.to_string())?;
        for link in &rep.checks {
            ensure!(link.passed, "instance {k}: link `{}` fails ({})", link.name, link.detail);
            links += 1;
        }
        let phom = check_phom_adjunction(&a, &bb, &c, 3).map_err(|e| e.to_string())?;
        ensure!(phom.passed(), "instance {k}: PHom homology differs");
    }
    Ok(format!("100 triples, {links} links"))
}

fn criterion_9() -> Outcome {
    let mut rng = random::rng(9);
    let b = Bounds { max_generators: 2, ..small() };
    for k in 0..100 {
        let (ring, torsion) = if k % 4 == 3 { (Ring::Integers, true) } else { (Ring::zmod(8), false) };
        let x = random::complex(&ring, &mut rng, -1, 1, &b, torsion);
        let y = random::complex(&ring, &mut rng, 0, 2, &b, true);
        let battery = purcat_core::purity::battery_for(&ring, &[&x, &y]);
        let cert = certify_k_pure_injective(&y, &battery, 0, k as u64);
        ensure!(cert.route == KPurityRoute::ByBoundedInjective, "instance {k}: target not certified");
        let d = hom_dpur(&x, &y, 2).map_err(|e| e.to_string())?;
        ensure!(d.is_isomorphic(&hom_k(&x, &y).unwrap()), "instance {k}: Hom_Dpur ≠ Hom_K");
    }
    for k in 0..100 {
        let ring = Ring::zmod(8);
        let x = random::complex(&ring, &mut rng, -1, 1, &b, false);
        let y = random::complex(&ring, &mut rng, -1, 1, &b, false);
        let s1 = hom_dpur_seeded(&x, &y, 2, 2 * k).map_err(|e| e.to_string())?;
        let s2 = hom_dpur_seeded(&x, &y, 2, 2 * k + 1).map_err(|e| e.to_string())?;
        ensure!(s1.is_isomorphic(&s2), "instance {k}: depends on the resolution");
    }
    Ok("100 certified targets, 100 seed pairs".into())
}

fn cli(args: &[&str]) -> (String, i32) {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let out = Command::new(env!("CARGO_BIN_EXE_purcat")).current_dir(root).args(args).arg("--no-timing").output().expect("binary runs");
    (String::from_utf8(out.stdout).expect("utf-8"), out.status.code().unwrap_or(-1))
}

fn criterion_10() -> Outcome {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let fixtures = std::fs::read_dir(root.join("tests/fixtures")).map_err(|e| e.to_string())?.count();
    ensure!(fixtures >= 10, "only {fixtures} fixtures");
    let mut certs = 0;
    for (name, line) in cases::CASES {
        let mut args: Vec<String> = line.split_whitespace().map(String::from).collect();
        let file = args.pop().unwrap();
        args.push(format!("tests/fixtures/{file}"));
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let (out, code) = cli(&a);
        let want = std::fs::read_to_string(root.join(format!("tests/golden/{name}.out"))).map_err(|e| format!("{name}: {e}"))?;
        ensure!(format!("{out}exit: {code}\n") == want, "{name}: report differs from golden file");
        ensure!(cli(&a) == (out.clone(), code), "{name}: report is not byte-stable");
        if line.starts_with("resolve") && code == 0 {
            let mut j = vec!["--json"];
            j.extend(&a);
            let (report, _) = cli(&j);
            let path = std::env::temp_dir().join(format!("purcat-acceptance-{}-{name}.json", std::process::id()));
            std::fs::write(&path, report).map_err(|e| e.to_string())?;
            let (v, c) = cli(&["validate-cert", path.to_str().unwrap()]);
            std::fs::remove_file(&path).ok();
            ensure!(c == 0 && v.contains("resolution: valid"), "{name}: emitted certificate does not validate");
            certs += 1;
        }
    }
    Ok(format!("{} golden reports over {fixtures} fixtures, {certs} certificate round trips", cases::CASES.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("linear-algebra oracles", criterion_1),
        ("pure acyclicity coherence", criterion_2),
        ("Hom complex homology vs Hom_K", criterion_3),
        ("null-homotopies into K-pure targets", criterion_4),
        ("resolution soundness", criterion_5),
        ("resolution step conditions", criterion_6),
        ("tensor and truncation preserve pure qis", criterion_7),
        ("closed monoidal structure", criterion_8),
        ("Hom_Dpur via resolutions", criterion_9),
        ("CLI golden reports and certificates", criterion_10),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != i + 1) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
