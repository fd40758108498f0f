//! The smooth side against exact counts, and report reproducibility.

mod common;

use std::sync::OnceLock;

use common::oracle;
use rough_core::constants::{compute_ledger, ApproxContext, ConstantLedger, Mode};
use rough_core::debruijn::{eta, h_y, main_term, SmoothContext};
use rough_core::numeric::{geomspace, linspace};
use rough_core::sieve::{mertens_product, phi_exact, PrimeTable, RoughCountQuery};
use rough_core::specfun::{default_tables, QuadratureSpec};
use rough_core::verify::{GridSpec, VerificationReport, Verifier};
use rough_core::EXP_EULER_GAMMA;

fn primes() -> &'static PrimeTable {
    static T: OnceLock<PrimeTable> = OnceLock::new();
    T.get_or_init(|| PrimeTable::primes_up_to(10_000_000).unwrap())
}

fn ctx() -> SmoothContext<'static> {
    SmoothContext::new(primes(), &default_tables().omega)
}

#[test]
fn eta_within_first_range_envelope() {
    let approx = ApproxContext::new(Mode::Unconditional, 229.0).unwrap();
    let ledger = compute_ledger(&approx, &QuadratureSpec::default()).unwrap();
    for y in geomspace(229.0, 3000.0, 25) {
        for u in linspace(1.0, 2.0, 21) {
            let x = y.powf(u);
            let phi = phi_exact(&RoughCountQuery::new(x, y).unwrap(), primes()).unwrap();
            let e = eta(x, y, phi, &ctx()).unwrap();
            let bound = EXP_EULER_GAMMA * ledger.eta1 * approx.r(y);
            assert!(e.abs() <= bound, "y={y} u={u}: |eta| {e:e} > {bound:e}");
        }
    }
}

#[test]
fn main_term_on_first_range_is_li_difference() {
    for (x, y) in [(1e4, 1e2), (5e5, 1e3), (3e6, 2e3), (2.5e3, 50.0)] {
        let m = main_term(x, y, &ctx()).unwrap();
        let li = oracle::li_ramanujan(x) - oracle::li_ramanujan(y);
        assert!((m.mu * x / li - 1.0).abs() < 1e-9, "x={x} y={y}");
        assert!((m.main_term - m.lambda * x * m.q).abs() <= 1e-12 * m.main_term);
    }
}

#[test]
fn h_y_against_mertens_ratio() {
    let pt = primes();
    for y in [2.0f64, 10.0, 97.0, 1000.0, 31_623.0] {
        for v in [1.0, 1.3, 2.0, 2.5] {
            if y.powf(v) > 1e7 {
                continue;
            }
            let h = h_y(v, y, pt).unwrap();
            let expect = 1.0 - mertens_product(y.powf(v), pt).unwrap() / mertens_product(y, pt).unwrap();
            assert!((h - expect).abs() <= 1e-12, "y={y} v={v}");
        }
    }
}

fn small_grid() -> GridSpec {
    GridSpec::new(geomspace(2.0, 500.0, 12), linspace(1.05, 4.0, 10), 10_000_000, false).unwrap()
}

fn run(threads: usize) -> Vec<VerificationReport> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let v = Verifier::new(primes(), default_tables());
    pool.install(|| v.verify_de_bruijn_all(&small_grid()).unwrap())
        .iter()
        .map(VerificationReport::without_timing)
        .collect()
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let one = run(1);
    let four = run(4);
    assert_eq!(one, four);
    assert!(one.iter().all(VerificationReport::passed));
}

#[test]
fn reports_and_ledger_round_trip_through_json() {
    for r in run(2) {
        let s = serde_json::to_string(&r).unwrap();
        let back: VerificationReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
    let approx = ApproxContext::new(Mode::Rh, 2657.0).unwrap();
    let ledger = compute_ledger(&approx, &QuadratureSpec::default()).unwrap();
    let back: ConstantLedger = serde_json::from_str(&serde_json::to_string(&ledger).unwrap()).unwrap();
    assert_eq!(back, ledger);
}
