//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{combinations, random_instance};
use prfair_core::axioms::{
    check_core, check_core_bruteforce, check_pf, check_pf_against, check_pf_bruteforce, check_prf2,
    check_prf_discrete, check_prf_unconstrained, check_up, midpoint_deviations, PrfMethod,
};
use prfair_core::baselines::{greedy_capture, kmeans_objective};
use prfair_core::evaluation::{
    run_algorithm, run_experiment, Algorithm, ExperimentGrid, MsdMetric, NamedInstance,
};
use prfair_core::io::{generate, parse_params, GeneratorParams, RunRecord};
use prfair_core::{select_prf_centers, Instance, Metric, Mode, Outcome, Point};

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn gen(name: &str, params: &str) -> Instance {
    generate(name, &parse_params(params).unwrap()).unwrap()
}

fn outcome(inst: &Instance, sel: Vec<usize>) -> Outcome {
    Outcome::new(inst, sel).unwrap()
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn center_count() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut bad = 0;
    for t in 0..500 {
        let mode = if t % 2 == 0 {
            Mode::Unconstrained
        } else {
            Mode::Discrete
        };
        let inst = random_instance(&mut rng, 60, 10, mode, t % 4 < 2);
        match select_prf_centers(&inst) {
            Ok((x, _)) if x.len() == inst.k() => {}
            _ => bad += 1,
        }
    }
    let pts: Vec<Point> = {
        use rand::Rng;
        (0..500)
            .map(|_| Point::new(vec![rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)]))
            .collect()
    };
    let big = Instance::unconstrained(pts, 20, Metric::Euclidean).unwrap();
    let start = Instant::now();
    let ok = select_prf_centers(&big)
        .map(|(x, _)| x.len() == 20)
        .unwrap_or(false);
    let took = start.elapsed();
    verdict(
        bad == 0 && ok && took < Duration::from_secs(60),
        format!(
            "500 random instances, {bad} wrong counts; n=500 k=20 in {}",
            secs(took)
        ),
    )
}

fn prf_satisfaction() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut violations = 0;
    for t in 0..200 {
        let mode = if t % 2 == 0 {
            Mode::Unconstrained
        } else {
            Mode::Discrete
        };
        let inst = random_instance(&mut rng, 12, 6, mode, t % 4 < 2);
        let (x, _) = select_prf_centers(&inst).unwrap();
        let report = match mode {
            Mode::Unconstrained => check_prf_unconstrained(&inst, &x, PrfMethod::Exhaustive),
            Mode::Discrete => check_prf_discrete(&inst, &x, PrfMethod::Exhaustive),
        }
        .unwrap();
        if !report.satisfied {
            violations += 1;
        }
    }
    verdict(
        violations == 0,
        format!("200 instances, {violations} violations"),
    )
}

fn up_separation() -> Verdict {
    let inst = gen("two_mass", "a=100,b=10,k=11");
    let (x, _) = select_prf_centers(&inst).unwrap();
    let at_zero = x.selected().iter().filter(|&&c| c < 100).count();
    let up_engine = check_up(&inst, &x).unwrap().satisfied;
    // One center at 0 and ten at 1.
    let swapped = outcome(&inst, std::iter::once(0).chain(100..110).collect());
    let pf = check_pf(&inst, &swapped).unwrap().satisfied;
    let core = check_core(&inst, &swapped).unwrap().satisfied;
    let up = check_up(&inst, &swapped).unwrap().satisfied;
    verdict(
        at_zero == 10 && up_engine && pf && core && !up,
        format!(
            "engine puts {at_zero} at 0 (UP {up_engine}); swapped outcome PF {pf}, CORE {core}, UP {up}"
        ),
    )
}

fn hexagon_pf() -> Verdict {
    let inst = gen("hexagon", "");
    let probes = midpoint_deviations(&inst);
    let start = Instant::now();
    let mut blocked = 0;
    let mut candidate_only_pass = 0;
    let mut oracle_agrees = true;
    for sel in combinations(6, 3) {
        let x = outcome(&inst, sel);
        if !check_pf_against(&inst, &x, &probes).unwrap().satisfied {
            blocked += 1;
        }
        let fast = check_pf(&inst, &x).unwrap().satisfied;
        oracle_agrees &= fast == check_pf_bruteforce(&inst, &x).unwrap().satisfied;
        if fast {
            candidate_only_pass += 1;
        }
    }
    let took = start.elapsed();
    verdict(
        blocked == 20 && oracle_agrees && took < Duration::from_secs(1),
        format!(
            "{blocked}/20 outcomes blocked by a deviation in the plane in {}; \
             with deviations restricted to agent locations {candidate_only_pass}/20 are PF",
            secs(took)
        ),
    )
}

fn three_circles() -> Verdict {
    let start = Instant::now();
    let inst = gen("three_circles", "m=12");
    let circle = |c: usize| c / 12;
    let (x, _) = select_prf_centers(&inst).unwrap();
    let mut circles: Vec<usize> = x.selected().iter().map(|&c| circle(c)).collect();
    circles.sort_unstable();
    let engine_prf = check_prf_unconstrained(&inst, &x, PrfMethod::Clique)
        .unwrap()
        .satisfied;

    let mut best: Option<(f64, Vec<usize>)> = None;
    for sel in combinations(36, 3) {
        let obj = kmeans_objective(&inst, &sel);
        if best.as_ref().is_none_or(|(b, _)| obj < *b) {
            best = Some((obj, sel));
        }
    }
    let (obj, opt) = best.unwrap();
    let on_big = opt.iter().filter(|&&c| circle(c) == 2).count();
    let opt_x = outcome(&inst, opt.clone());
    let opt_prf = check_prf_unconstrained(&inst, &opt_x, PrfMethod::Clique)
        .unwrap()
        .satisfied;
    let took = start.elapsed();
    verdict(
        circles == [0, 1, 2] && engine_prf && on_big == 2 && !opt_prf && took < Duration::from_secs(300),
        format!(
            "engine circles {circles:?} PRF {engine_prf}; k-means optimum {opt:?} (objective {obj:.3}) \
             has {on_big} on the big circle, PRF {opt_prf}; {}",
            secs(took)
        ),
    )
}

fn greedy_underfill() -> Verdict {
    let inst =
        Instance::unconstrained(common::line(&[0.0, 0.0, 1.0]), 3, Metric::Euclidean).unwrap();
    let g = greedy_capture(&inst, false).unwrap();
    let locations: Vec<f64> = g
        .outcome
        .selected()
        .iter()
        .map(|&c| inst.candidates()[c].coords()[0])
        .collect();
    verdict(
        g.outcome.len() == 2 && locations == [0.0, 1.0] && g.underfilled,
        format!(
            "selected {:?} at locations {locations:?}, underfilled {}",
            g.outcome.selected(),
            g.underfilled
        ),
    )
}

fn prf2_nonexistence() -> Verdict {
    let inst = gen("prf2_counterexample", "");
    let failing = combinations(4, 2)
        .into_iter()
        .filter(|sel| {
            !check_prf2(&inst, &outcome(&inst, sel.clone()))
                .unwrap()
                .satisfied
        })
        .count();
    verdict(failing == 6, format!("{failing}/6 pairs violate PRF-II"))
}

fn oracle_equivalence() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut mismatches = 0;
    let mut violations = 0;
    for t in 0..200 {
        use rand::seq::SliceRandom;
        let mode = if t % 2 == 0 {
            Mode::Unconstrained
        } else {
            Mode::Discrete
        };
        let inst = random_instance(&mut rng, 12, 6, mode, t % 4 < 2);
        let mut idx: Vec<usize> = (0..inst.m()).collect();
        idx.shuffle(&mut rng);
        idx.truncate(inst.k());
        let x = outcome(&inst, idx);
        let pf = check_pf(&inst, &x).unwrap().satisfied;
        let core = check_core(&inst, &x).unwrap().satisfied;
        if pf != check_pf_bruteforce(&inst, &x).unwrap().satisfied {
            mismatches += 1;
        }
        if core != check_core_bruteforce(&inst, &x).unwrap().satisfied {
            mismatches += 1;
        }
        violations += usize::from(!pf) + usize::from(!core);
    }
    verdict(
        mismatches == 0,
        format!("400 verdict pairs, {mismatches} mismatches ({violations} violations seen)"),
    )
}

fn scale_invariance() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut changed = 0;
    for t in 0..100 {
        let mode = if t % 2 == 0 {
            Mode::Unconstrained
        } else {
            Mode::Discrete
        };
        let inst = random_instance(&mut rng, 30, 8, mode, false);
        let (x, _) = select_prf_centers(&inst).unwrap();
        for alpha in [0.5, 3.0, 1000.0] {
            let (y, _) = select_prf_centers(&inst.scaled(alpha).unwrap()).unwrap();
            if y.selected() != x.selected() {
                changed += 1;
            }
        }
    }
    verdict(
        changed == 0,
        format!("300 scaled runs, {changed} changed selections"),
    )
}

fn table_pattern() -> Verdict {
    let start = Instant::now();
    let grid = ExperimentGrid {
        datasets: vec![NamedInstance {
            name: "blobs".into(),
            instance: gen("gaussian_blobs", "n=300,seed=7"),
        }],
        algorithms: vec![Algorithm::Prf, Algorithm::KMeansPP],
        k_min: 1,
        k_max: 30,
        metrics: vec![MsdMetric::Closest1, MsdMetric::ClosestK],
        seeds: vec![0, 1, 2, 3, 4],
        squared: true,
        pad_greedy: true,
    };
    let table = run_experiment(&grid).unwrap();
    let pct = |metric| {
        table
            .aggregates()
            .into_iter()
            .find(|a| a.algorithm == Algorithm::Prf && a.metric == metric)
            .and_then(|a| a.percent_vs_kmeanspp)
    };
    let (one, all) = (pct(MsdMetric::Closest1), pct(MsdMetric::ClosestK));
    let took = start.elapsed();
    let pass = matches!((one, all), (Some(a), Some(b)) if a >= 0.0 && b <= 0.0)
        && took < Duration::from_secs(600);
    verdict(
        pass,
        format!(
            "PRF vs k-means++: MSD_1 {:+.1}%, MSD_k {:+.1}%; {}",
            one.unwrap_or(f64::NAN),
            all.unwrap_or(f64::NAN),
            secs(took)
        ),
    )
}

fn determinism() -> Verdict {
    let record = |algo, seed| {
        let inst = gen("gaussian_blobs", "n=60,seed=3,k=5");
        let run = run_algorithm(algo, &inst, seed, true).unwrap();
        let mut rec = RunRecord::new(&inst, algo, seed, &run.outcome);
        rec.trace = run.trace.map(|t| t.rounds);
        rec.reports.push(check_up(&inst, &run.outcome).unwrap());
        rec.to_json().unwrap()
    };
    let mut same = true;
    for algo in [Algorithm::Prf, Algorithm::KMeansPP, Algorithm::Greedy] {
        same &= record(algo, 11) == record(algo, 11);
    }
    let csv = || {
        let grid = ExperimentGrid {
            datasets: vec![NamedInstance {
                name: "blobs".into(),
                instance: generate("two_blobs", &GeneratorParams::new()).unwrap(),
            }],
            algorithms: vec![Algorithm::Prf, Algorithm::KMeansPP, Algorithm::Greedy],
            k_min: 1,
            k_max: 6,
            metrics: MsdMetric::ALL.to_vec(),
            seeds: vec![0, 1],
            squared: true,
            pad_greedy: true,
        };
        let mut buf = Vec::new();
        run_experiment(&grid).unwrap().write_csv(&mut buf).unwrap();
        buf
    };
    let csv_same = csv() == csv();
    verdict(
        same && csv_same,
        format!("run records identical {same}, result CSVs identical {csv_same}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("center count and runtime", center_count),
        ("PRF satisfaction", prf_satisfaction),
        ("UP separates from PF and CORE", up_separation),
        ("no PF outcome on the two triangles", hexagon_pf),
        (
            "k-means optimum violates PRF on three circles",
            three_circles,
        ),
        ("Greedy Capture underfills", greedy_underfill),
        ("PRF-II can be unsatisfiable", prf2_nonexistence),
        ("PF and CORE oracle equivalence", oracle_equivalence),
        ("scale invariance", scale_invariance),
        ("MSD sign pattern against k-means++", table_pattern),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        failed += usize::from(!v.pass);
        println!(
            "criterion {:>2} {}: {name}: {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
