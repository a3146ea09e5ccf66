//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test -p braidsig --test acceptance -- --nocapture` to see
//! the per-criterion summary lines.

use std::sync::OnceLock;
use std::time::Instant;

use braidsig::braid::{betti, split_components, BraidWord};
use braidsig::corpus::{generate, CorpusFilters, CorpusMode, CorpusSpec};
use braidsig::diagram::{build_diagram, chessboard, face_census};
use braidsig::goeritz::gl_signature;
use braidsig::proofpipe::{check_final, ProofReport, ReportStatus, VerifyOptions};
use braidsig::seifert::{alexander, oracle_signature_nullity, seifert_matrix, unit_circle_zeros};
use braidsig::sigcore::{
    block_signature, check_tridiagonal_bound, check_trisum_bound, rat, ratio, signature,
    tridiagonal, SymmetricMatrix, TrisumSpec,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

/// Facts about one nonsplit component of a corpus word, computed along both
/// signature routes without reduction.
struct PartFacts {
    word: String,
    gl_sigma: i64,
    oracle_sigma: i64,
    b1: i64,
    parity_even: bool,
    census_ok: bool,
    rank_sum_ok: bool,
    fiber_rank_ok: bool,
    zeros_on_circle: usize,
    zeros_total: usize,
}

struct SweepData {
    parts: Vec<PartFacts>,
    /// (sigma, b1) per corpus word, summed over split components.
    word_totals: Vec<(i64, i64)>,
    reports_exhaustive: Vec<ProofReport>,
    reports_random: Vec<ProofReport>,
    parts_elapsed: f64,
}

fn exhaustive_corpus() -> Vec<BraidWord> {
    generate(&CorpusSpec {
        mode: CorpusMode::Exhaustive {
            max_len: 8,
            max_strands: 4,
        },
        filters: CorpusFilters {
            nonsplit: true,
            ..Default::default()
        },
    })
}

fn random_corpus() -> Vec<BraidWord> {
    generate(&CorpusSpec {
        mode: CorpusMode::Random {
            count: 1000,
            min_len: 1,
            max_len: 40,
            max_strands: 8,
            seed: 1,
        },
        filters: CorpusFilters::default(),
    })
}

fn part_facts(part: &BraidWord) -> PartFacts {
    let diagram = build_diagram(part).expect("nonsplit part builds");
    let census = face_census(&diagram);
    let chess = chessboard(&diagram).expect("chessboard report");
    let rank_sum_ok =
        chess.connected() && chess.h1_black + chess.h1_white == part.crossings();
    let gl = gl_signature(&diagram);
    let parity_even = gl.is_ok();
    let gl_sigma = gl.unwrap_or(i64::MIN);
    let (oracle_sigma, nullity) = oracle_signature_nullity(part).expect("oracle");
    let b1 = betti(part).expect("nonsplit betti");
    let poly = alexander(part).expect("alexander");
    let fiber_rank_ok = seifert_matrix(part).expect("fiber").dim() as i64 == b1
        && (nullity > 0 || poly.degree() as i64 == b1);
    let (zeros_on_circle, zeros_total) = unit_circle_zeros(&poly, TOL).expect("roots resolve");
    PartFacts {
        word: part.to_string(),
        gl_sigma,
        oracle_sigma,
        b1,
        parity_even,
        census_ok: census.is_ok(),
        rank_sum_ok,
        fiber_rank_ok,
        zeros_on_circle,
        zeros_total,
    }
}

fn sweep() -> &'static SweepData {
    static DATA: OnceLock<SweepData> = OnceLock::new();
    DATA.get_or_init(|| {
        let exhaustive = exhaustive_corpus();
        let random = random_corpus();
        let start = Instant::now();
        let mut parts = Vec::new();
        let mut word_totals = Vec::new();
        for word in exhaustive.iter().chain(random.iter()) {
            let mut sigma = 0;
            let mut b1 = 0;
            for part in split_components(word) {
                if part.crossings() == 0 {
                    continue;
                }
                let facts = part_facts(&part);
                sigma += facts.oracle_sigma;
                b1 += facts.b1;
                parts.push(facts);
            }
            word_totals.push((sigma, b1));
        }
        let parts_elapsed = start.elapsed().as_secs_f64();
        let opts = VerifyOptions::default();
        let reports_exhaustive = exhaustive.iter().map(|w| check_final(w, &opts)).collect();
        let reports_random = random.iter().map(|w| check_final(w, &opts)).collect();
        SweepData {
            parts,
            word_totals,
            reports_exhaustive,
            reports_random,
            parts_elapsed,
        }
    })
}

fn verdict(criterion: &str, pass: bool, detail: &str) {
    println!(
        "acceptance {criterion}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_1_cross_oracle_identity() {
    let data = sweep();
    let mut mismatches = 0;
    let mut odd_parity = 0;
    for f in &data.parts {
        if !f.parity_even {
            odd_parity += 1;
            eprintln!("odd signature sum: {}", f.word);
        } else if f.gl_sigma != f.oracle_sigma {
            mismatches += 1;
            eprintln!(
                "mismatch {}: chessboard {} vs fiber {}",
                f.word, f.gl_sigma, f.oracle_sigma
            );
        }
    }
    verdict(
        "1 cross-oracle identity",
        mismatches == 0 && odd_parity == 0,
        &format!(
            "{} nonsplit parts, {} mismatches, {} parity errors, invariants pass in {:.1}s",
            data.parts.len(),
            mismatches,
            odd_parity,
            data.parts_elapsed
        ),
    );
}

#[test]
fn criterion_2_quarter_bound() {
    let data = sweep();
    let mut checked = 0;
    let mut violations = 0;
    for &(sigma, b1) in &data.word_totals {
        if b1 == 0 {
            continue; // unlink
        }
        checked += 1;
        let quarter_ok = rat(sigma) >= ratio(b1, 4) + ratio(1, 2);
        let integral_ok = 4 * sigma >= b1 + 2;
        if !quarter_ok || !integral_ok {
            violations += 1;
        }
    }
    verdict(
        "2 quarter bound",
        violations == 0 && checked > 0,
        &format!("{checked} non-unlink words, {violations} violations"),
    );
}

#[test]
fn criterion_3_torus_family() {
    let mut ok = true;
    for k in 2..=12usize {
        let word = BraidWord::new(2, vec![1; k]).unwrap();
        let diagram = build_diagram(&word).unwrap();
        let gl = gl_signature(&diagram).unwrap();
        let (oracle, _) = oracle_signature_nullity(&word).unwrap();
        let b1 = betti(&word).unwrap();
        if gl != k as i64 - 1 || oracle != k as i64 - 1 || b1 != k as i64 - 1 {
            ok = false;
            eprintln!("torus k={k}: gl {gl} oracle {oracle} b1 {b1}");
        }
    }
    verdict("3 torus family", ok, "k = 2..=12, sigma = b1 = k-1 exactly");
}

#[test]
fn criterion_4_squared_staircase_family() {
    let mut ok = true;
    for n in 2..=6usize {
        let letters: Vec<usize> = (1..=n).chain((1..=n).rev()).collect();
        let word = BraidWord::new(
            n + 1,
            letters.iter().chain(letters.iter()).copied().collect(),
        )
        .unwrap();
        let (sigma, nullity) = oracle_signature_nullity(&word).unwrap();
        let diagram = build_diagram(&word).unwrap();
        let gl = gl_signature(&diagram).unwrap();
        let census = face_census(&diagram).unwrap();
        let cr = word.crossings();
        let census_ok = census.f_count(2) == 4
            && census.f_count(4) == cr - 4
            && census.f.iter().all(|(&i, &c)| i == 2 || i == 4 || c == 0);
        if sigma != 2 * n as i64 + 1 || gl != sigma || nullity != n - 1 || !census_ok {
            ok = false;
            eprintln!("family n={n}: sigma {sigma} gl {gl} nullity {nullity} {census_ok}");
        }
    }
    verdict(
        "4 squared staircase family",
        ok,
        "n = 2..=6: sigma = 2n+1, nullity = n-1, f2 = 4, f4 = cr-4",
    );
}

#[test]
fn criterion_5_matrix_suite() {
    let start = Instant::now();
    let mut ok = true;
    // Definite paths.
    for a in 1..=12usize {
        ok &= signature(&tridiagonal(&vec![2; a])).signature() == a as i64;
        ok &= signature(&tridiagonal(&vec![-2; a])).signature() == -(a as i64);
    }
    // Closed form for blocks.
    for a in 0..=6usize {
        for b in 0..=6usize {
            let mut d = vec![2i64; a];
            d.push(1);
            d.extend(std::iter::repeat(2).take(b));
            ok &= signature(&tridiagonal(&d)).signature() == block_signature(a, b);
        }
    }
    // Exhaustive tridiagonal bound over d in {-2..2}^n, n <= 6.
    fn next_diag(d: &mut [i64]) -> bool {
        for i in (0..d.len()).rev() {
            if d[i] < 2 {
                d[i] += 1;
                for v in d.iter_mut().skip(i + 1) {
                    *v = -2;
                }
                return true;
            }
        }
        false
    }
    let mut tridiag_checked = 0usize;
    for n in 1..=6usize {
        let mut d = vec![-2i64; n];
        loop {
            let check = check_tridiagonal_bound(&d);
            if !check.holds {
                ok = false;
                eprintln!("tridiagonal bound fails for {d:?}");
            }
            tridiag_checked += 1;
            if !next_diag(&mut d) {
                break;
            }
        }
    }
    // The negative-definite witness attains the bound exactly.
    for n in 1..=6usize {
        let mut d = vec![-2i64; n];
        d[0] = -1;
        let check = check_tridiagonal_bound(&d);
        ok &= check.holds && check.slack == rat(0);
    }
    // Zero-heavy witnesses.
    for pairs in 1..=4usize {
        for n_val in [1i64, 3, 7, 20] {
            let mut d = Vec::new();
            for _ in 0..pairs {
                d.push(0);
                d.push(n_val);
            }
            d.push(-1);
            ok &= signature(&tridiagonal(&d)).signature() == -1;
        }
    }
    // Random trisum specs.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut trisum_checked = 0usize;
    while trisum_checked < 10_000 {
        let r = rng.gen_range(1..=6usize);
        let core: Vec<i64> = (0..r).map(|_| rng.gen_range(-5..=5)).collect();
        let nonpos: Vec<usize> = (0..r).filter(|&i| core[i] <= 0).collect();
        let max_blocks = if nonpos.is_empty() { 0 } else { 3 };
        let k = rng.gen_range(0..=max_blocks);
        let blocks: Vec<(usize, usize)> = (0..k)
            .map(|_| (rng.gen_range(0..=3), rng.gen_range(0..=3)))
            .collect();
        let attach: Vec<usize> = (0..k)
            .map(|_| nonpos[rng.gen_range(0..nonpos.len())] + 1)
            .collect();
        let spec = TrisumSpec {
            core,
            blocks,
            attach,
        };
        let check = check_trisum_bound(&spec).unwrap();
        if !check.holds {
            ok = false;
            eprintln!("trisum bound fails for {spec:?}");
        }
        trisum_checked += 1;
    }
    verdict(
        "5 matrix suite",
        ok,
        &format!(
            "{tridiag_checked} tridiagonals, {trisum_checked} trisum specs, witnesses exact, {:.1}s",
            start.elapsed().as_secs_f64()
        ),
    );
}

#[test]
fn criterion_6_pipeline() {
    let data = sweep();
    let mut failures = 0;
    for report in data
        .reports_exhaustive
        .iter()
        .chain(data.reports_random.iter())
    {
        if report.status == ReportStatus::Fail {
            failures += 1;
            eprintln!("pipeline fail {}: {:?}", report.word, report.failures);
        }
        if let Some(pipe) = &report.pipeline {
            assert!(pipe.all_hold(), "{}: bound failed", report.word);
        }
    }
    let random_ran = data
        .reports_random
        .iter()
        .filter(|r| r.pipeline_ran())
        .count();
    let skip_rate = 1.0 - random_ran as f64 / data.reports_random.len() as f64;
    verdict(
        "6 subspace pipeline",
        failures == 0 && random_ran > 0,
        &format!(
            "decompositions certified on every non-skipped word; random skip rate {:.1}%",
            100.0 * skip_rate
        ),
    );
}

#[test]
fn criterion_7_diagram_identities() {
    let data = sweep();
    let mut bad = 0;
    for f in &data.parts {
        if !f.census_ok || !f.rank_sum_ok || !f.fiber_rank_ok {
            bad += 1;
            eprintln!(
                "identities fail for {}: census {} ranks {} fiber {}",
                f.word, f.census_ok, f.rank_sum_ok, f.fiber_rank_ok
            );
        }
    }
    verdict(
        "7 diagram identities",
        bad == 0,
        &format!(
            "face, corner and homology-rank identities on {} diagrams",
            data.parts.len()
        ),
    );
}

#[test]
fn criterion_8_unit_circle_zeros() {
    let data = sweep();
    let mut bad = 0;
    for f in &data.parts {
        let quarter_ok = f.zeros_total == 0 || 4 * f.zeros_on_circle > f.zeros_total;
        let sigma_ok = f.zeros_on_circle as i64 >= f.oracle_sigma;
        if !quarter_ok || !sigma_ok {
            bad += 1;
            eprintln!(
                "zero count fails for {}: {}/{} on circle, sigma {}",
                f.word, f.zeros_on_circle, f.zeros_total, f.oracle_sigma
            );
        }
    }
    verdict(
        "8 unit-circle zeros",
        bad == 0,
        &format!(
            "on-circle count > degree/4 and >= sigma at tolerance {TOL:e} on {} polynomials",
            data.parts.len()
        ),
    );
}

#[test]
fn criterion_9_sylvester_fuzz() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checked = 0;
    let mut ok = true;
    while checked < 1000 {
        let n = rng.gen_range(1..=8usize);
        let mut rows = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i..n {
                let v = rng.gen_range(-3..=3);
                rows[i][j] = v;
                rows[j][i] = v;
            }
        }
        let m = SymmetricMatrix::from_int_rows(&rows).unwrap();
        let before = signature(&m);
        // Apply a random invertible congruence built from elementary moves.
        // Each move rewrites only basis vector i, so the result stays
        // symmetric and can be computed from a snapshot of the old matrix.
        let mut c = m.clone();
        for _ in 0..rng.gen_range(1..=12) {
            let old = c.clone();
            match rng.gen_range(0..3) {
                0 if n > 1 => {
                    // e_i := e_i + lambda e_j
                    let i = rng.gen_range(0..n);
                    let mut j = rng.gen_range(0..n);
                    while j == i {
                        j = rng.gen_range(0..n);
                    }
                    let lambda = rat(rng.gen_range(-2..=2i64));
                    for k in 0..n {
                        if k != i {
                            c.set(i, k, old.get(i, k) + &lambda * old.get(j, k));
                        }
                    }
                    let diag = old.get(i, i)
                        + rat(2) * &lambda * old.get(i, j)
                        + &lambda * &lambda * old.get(j, j);
                    c.set(i, i, diag);
                }
                1 => {
                    // swap basis vectors i and j
                    let i = rng.gen_range(0..n);
                    let j = rng.gen_range(0..n);
                    let map = |k: usize| {
                        if k == i {
                            j
                        } else if k == j {
                            i
                        } else {
                            k
                        }
                    };
                    for a in 0..n {
                        for b in a..n {
                            c.set(a, b, old.get(map(a), map(b)).clone());
                        }
                    }
                }
                _ => {
                    // e_i := s * e_i with s nonzero
                    let i = rng.gen_range(0..n);
                    let scale = ratio([1i64, 2, 3, -1, -2][rng.gen_range(0..5)], 2);
                    for k in 0..n {
                        if k != i {
                            c.set(i, k, old.get(i, k) * &scale);
                        }
                    }
                    c.set(i, i, old.get(i, i) * &scale * &scale);
                }
            }
        }
        let after = signature(&c);
        if before != after {
            ok = false;
            eprintln!("congruence changed inertia: {before:?} -> {after:?}");
        }
        checked += 1;
    }
    verdict(
        "9 Sylvester fuzz",
        ok,
        &format!("{checked} random congruences on dims <= 8, inertia exact"),
    );
}
