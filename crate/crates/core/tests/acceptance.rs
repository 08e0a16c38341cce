//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Run with `cargo test -p skinrule --test acceptance`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use num_rational::Ratio;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skinrule::report::Cell;
use skinrule::rules::classify_rgb_ratio_float;
use skinrule::{
    build_lut, channel_ranges, classify, classify_kovac, classify_kovac_rewritten, classify_rgb_ratio, compare,
    evaluate_dataset, evaluate_records, load_image, load_mask, pair_dataset, render_mask, save_mask, LabeledRecord,
    MaskMode, Rate, RgbPixel, RuleKind, SkinLabel,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, ok: impl Into<String>, fail: impl Into<String>) -> Outcome {
    if cond {
        Ok(ok.into())
    } else {
        Err(fail.into())
    }
}

/// 1. Every rule is total over the cube and its LUT agrees bit for bit.
fn exhaustive_totality_and_lut_fidelity() -> Outcome {
    const BUDGET: Duration = Duration::from_secs(60);
    let start = Instant::now();
    let mut summary = Vec::new();
    for rule in RuleKind::ALL {
        let lut = build_lut(rule);
        let mismatches = catch_unwind(AssertUnwindSafe(|| {
            RgbPixel::all().filter(|&p| classify(rule, p) != lut.lookup(p)).count()
        }))
        .map_err(|_| format!("{rule}: classification panicked"))?;
        if mismatches != 0 {
            return Err(format!("{rule}: {mismatches} LUT mismatches"));
        }
        summary.push(format!("{rule}={}", lut.count_skin()));
    }
    let elapsed = start.elapsed();
    check(
        elapsed < BUDGET,
        format!("5 x 2^24 pixels, 0 mismatches, {:.1}s ({})", elapsed.as_secs_f64(), summary.join(" ")),
        format!("took {:.1}s, budget {}s", elapsed.as_secs_f64(), BUDGET.as_secs()),
    )
}

/// 2. Kovač and its rewritten form agree wherever R > G and R > B.
fn kovac_rewrite_equivalence() -> Outcome {
    let (mut domain, mut mismatches) = (0u64, 0u64);
    for p in RgbPixel::all().filter(|p| p.r > p.g && p.r > p.b) {
        domain += 1;
        mismatches += (classify_kovac(p) != classify_kovac_rewritten(p)) as u64;
    }
    check(
        mismatches == 0,
        format!("{domain} pixels with R>G, R>B; 0 mismatches"),
        format!("{mismatches} mismatches over {domain} pixels"),
    )
}

/// 3. Exhaustive channel ranges reproduce the published extents exactly.
fn channel_range_reproduction() -> Outcome {
    let kovac = channel_ranges(RuleKind::Kovac);
    let saleh = channel_ranges(RuleKind::Saleh);
    let kovac_ok = !kovac.empty
        && (kovac.r_min, kovac.r_max, kovac.g_min, kovac.g_max, kovac.b_min, kovac.b_max) == (96, 255, 41, 239, 21, 254);
    let saleh_ok = !saleh.empty && (saleh.r_min, saleh.r_max, saleh.g_min, saleh.g_max) == (21, 255, 0, 234);
    check(
        kovac_ok && saleh_ok,
        format!("kovac {kovac}; saleh {saleh}"),
        format!("kovac {kovac}; saleh {saleh}"),
    )
}

/// 4. Integer and floating evaluation of the ratio rule agree on R+G > 0.
fn ratio_integer_float_agreement() -> Outcome {
    let (mut domain, mut mismatches) = (0u64, 0u64);
    for p in RgbPixel::all().filter(|p| p.r as u16 + p.g as u16 > 0) {
        domain += 1;
        mismatches += (classify_rgb_ratio(p) != classify_rgb_ratio_float(p)) as u64;
    }
    check(
        mismatches == 0,
        format!("{domain} pixels, 0 mismatches"),
        format!("{mismatches} mismatches over {domain} pixels"),
    )
}

/// 5. Ratio rule is invariant under exact rational rescaling.
fn ratio_scale_invariance() -> Outcome {
    const CASES: u32 = 100_000;
    let executed = AtomicU64::new(0);
    let strategy = (1u32..=64, 1u32..=64).prop_flat_map(|(m1, m2)| {
        let cap = 255 / m1.max(m2);
        ((0..=cap, 0..=cap, 0..=cap), Just(m1), Just(m2)).prop_filter("R+G > 0", |((r, g, _), _, _)| r + g > 0)
    });
    let mut runner = TestRunner::new(Config {
        cases: CASES,
        max_global_rejects: CASES * 10,
        failure_persistence: None,
        ..Config::default()
    });
    let result = runner.run(&strategy, |((r, g, b), m1, m2)| {
        executed.fetch_add(1, Ordering::Relaxed);
        let scale = |m: u32| RgbPixel::new((r * m) as u8, (g * m) as u8, (b * m) as u8);
        prop_assert_eq!(classify_rgb_ratio(scale(m1)), classify_rgb_ratio(scale(m2)));
        Ok(())
    });
    let n = executed.load(Ordering::Relaxed);
    match result {
        Ok(()) if n >= CASES as u64 => Ok(format!("{n} cases, 100% unchanged")),
        Ok(()) => Err(format!("only {n} cases executed")),
        Err(e) => Err(e.to_string()),
    }
}

/// 6. Unweighted averaging reproduces the published AVERAGE columns.
fn table_averaging_arithmetic() -> Outcome {
    let rows = [
        ("Kovac TP", ["90.46", "81.46", "93.25"], "88.39"),
        ("Kovac FP", ["10.53", "16.76", "24.19"], "17.16"),
        ("Proposed TP", ["96.17", "91.22", "97.33"], "94.91"),
        ("Proposed FP", ["26.27", "37.84", "35.09"], "33.07"),
    ];
    let mut got = Vec::new();
    for (name, values, expected) in rows {
        let rates: Vec<Rate> = values.iter().map(|v| Rate::from_percent_str(v).unwrap()).collect();
        let avg = Rate::mean(&rates).unwrap().percent_2dp();
        if avg != expected {
            return Err(format!("{name}: got {avg}, expected {expected}"));
        }
        got.push(format!("{name} {avg}"));
    }
    Ok(got.join(", "))
}

/// 7. Hand-counted eight-record confusion fixture.
fn eval_fixture() -> Outcome {
    use SkinLabel::{NonSkin, Skin};
    // Saleh: skin iff 20 < R-G < 80
    let records = [
        LabeledRecord::new(150, 100, 0, Skin),
        LabeledRecord::new(130, 100, 0, Skin),
        LabeledRecord::new(179, 100, 0, Skin),
        LabeledRecord::new(100, 100, 0, Skin),
        LabeledRecord::new(140, 100, 0, NonSkin),
        LabeledRecord::new(120, 100, 0, NonSkin),
        LabeledRecord::new(180, 100, 0, NonSkin),
        LabeledRecord::new(0, 255, 0, NonSkin),
    ];
    let res = evaluate_records(RuleKind::Saleh, &records).map_err(|e| e.to_string())?;
    check(
        res.tp_rate == Ratio::new(3, 4) && res.fp_rate == Ratio::new(1, 4),
        "tp_rate 3/4, fp_rate 1/4",
        format!("tp_rate {}, fp_rate {}", res.tp_rate, res.fp_rate),
    )
}

/// Criterion 8: synthetic dataset labelled by the ratio rule evaluates
/// perfectly and re-rendered masks reload under strict mode.
fn pipeline_round_trip() -> Outcome {
    let root = common::fixture_dir();
    let pairs = pair_dataset(&root).map_err(|e| e.to_string())?.pairs;
    let res = evaluate_dataset(RuleKind::RgbRatio, &root, MaskMode::Strict).map_err(|e| e.to_string())?;
    let (tp, fp) = <(Rate, Rate)>::from(&res);
    let pixels = res.counts.total();

    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    for pair in &pairs {
        let img = load_image(&pair.image_path).map_err(|e| e.to_string())?;
        let out = tmp.path().join(format!("{}.png", pair.stem));
        save_mask(&render_mask(RuleKind::RgbRatio, &img), &out).map_err(|e| e.to_string())?;
        let reloaded = load_mask(&out, MaskMode::Strict).map_err(|e| format!("{}: {e}", pair.stem))?;
        let truth = load_mask(&pair.mask_path, MaskMode::Strict).map_err(|e| e.to_string())?;
        if reloaded.non_canonical != 0 || reloaded.mask != truth.mask {
            return Err(format!("{}: re-rendered mask differs from ground truth", pair.stem));
        }
    }
    check(
        pairs.len() >= 3 && pixels >= 10_000 && tp.percent_2dp() == "100.00" && fp.percent_2dp() == "0.00",
        format!("{} images, {pixels} pixels, TP {tp} FP {fp}, masks reload strictly", pairs.len()),
        format!("{} images, {pixels} pixels, TP {tp} FP {fp}", pairs.len()),
    )
}

/// 9. One comparison run yields TP for all four published rules.
fn single_run_comparison() -> Outcome {
    let datasets = vec![("synthetic".to_string(), common::fixture_dir())];
    let table = compare(&RuleKind::COMPARED, &datasets, MaskMode::Strict).map_err(|e| e.to_string())?;
    let mut tps = Vec::new();
    for (rule, row) in table.rules.iter().zip(&table.cells) {
        match &row[0] {
            Cell::Ok(e) => tps.push(format!("{rule} {}", <(Rate, Rate)>::from(e).0)),
            Cell::Failed(m) => return Err(format!("{rule}: {m}")),
        }
    }
    check(tps.len() == 4, format!("TP: {}", tps.join(", ")), "missing rules")
}

/// Criterion 10: LUT throughput over 10^8 lookups, validated against
/// direct classification on a 10^6-pixel sample.
fn lut_throughput() -> Outcome {
    const SAMPLE: usize = 1_000_000;
    const PASSES: usize = 100;
    let mut rng = ChaCha8Rng::seed_from_u64(0x51c1);
    let pixels: Vec<RgbPixel> = (0..SAMPLE).map(|_| RgbPixel::new(rng.gen(), rng.gen(), rng.gen())).collect();
    let lut = build_lut(RuleKind::RgbRatio);

    let mismatches = pixels.iter().filter(|&&p| lut.lookup(p) != classify_rgb_ratio(p)).count();
    if mismatches != 0 {
        return Err(format!("{mismatches} mismatches on the sample"));
    }
    let start = Instant::now();
    let mut skin = 0u64;
    for _ in 0..PASSES {
        skin += pixels.iter().filter(|&&p| lut.lookup(std::hint::black_box(p)).is_skin()).count() as u64;
    }
    let secs = start.elapsed().as_secs_f64();
    let total = (SAMPLE * PASSES) as f64;
    check(
        skin > 0,
        format!("{total:.0} pixels in {secs:.2}s = {:.3e} pixels/s; sample matches", total / secs),
        "no skin pixels classified",
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("C1 exhaustive totality + LUT fidelity", exhaustive_totality_and_lut_fidelity),
        ("C2 Kovac rewrite equivalence", kovac_rewrite_equivalence),
        ("C3 channel-range reproduction", channel_range_reproduction),
        ("C4 ratio integer/float agreement", ratio_integer_float_agreement),
        ("C5 ratio scale invariance", ratio_scale_invariance),
        ("C6 table averaging arithmetic", table_averaging_arithmetic),
        ("C7 TP/FP eight-record fixture", eval_fixture),
        ("C8 synthetic pipeline round trip", pipeline_round_trip),
        ("C9 four-rule comparison in one run", single_run_comparison),
        ("C10 LUT throughput", lut_throughput),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
