//! Oracle-equivalence suite behind `aprxlik selftest`.

use std::io::Write;
use std::time::Instant;

use aprxlik_core::inference::chi2_quantile;

use crate::oracles;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &'static str, pass: bool, detail: String) -> CheckResult {
    CheckResult { name, pass, detail }
}

/// Run every check in order. Errors from the library count as failures.
pub fn run_checks() -> Vec<CheckResult> {
    type Check = (&'static str, fn() -> Result<(bool, String)>);
    let checks: [Check; 6] = [
        ("transfer-vs-brute", || {
            let w = oracles::transfer_vs_brute()?;
            Ok((w < 1e-10, format!("max relative gap {w:.2e}")))
        }),
        ("kaufman-vs-references", || {
            let (b, t) = oracles::kaufman_vs_references()?;
            Ok((
                b < 1e-8 && t < 1e-8,
                format!("vs brute {b:.2e}, vs transfer 8x8 {t:.2e}"),
            ))
        }),
        ("rda-identity-and-monotone", || {
            let r = oracles::rda_check()?;
            Ok((
                r.identity_gap < 1e-12 && r.monotone(),
                format!(
                    "identity gap {:.2e}, monotone {}",
                    r.identity_gap,
                    r.monotone()
                ),
            ))
        }),
        ("quadrature-vs-simpson", || {
            let cells = oracles::quadrature_vs_simpson(&[0.1, 0.5, 1.0], &[5, 20, 50])?;
            let w = cells.iter().map(|c| c.3).fold(0.0, f64::max);
            Ok((w < 1e-8, format!("theta <= 1, max gap {w:.2e}")))
        }),
        ("quadrature-20-vs-40", || {
            let cells = oracles::quadrature_20_vs_40(&[0.1, 0.5, 1.0], &[5, 20, 50])?;
            let w = cells.iter().map(|c| c.3).fold(0.0, f64::max);
            Ok((w < 1e-9, format!("theta <= 1, max gap {w:.2e}")))
        }),
        ("chi2-quantiles", || {
            let q90 = chi2_quantile(1, 0.9);
            let q95 = chi2_quantile(2, 0.95);
            let gap = (q90 - 2.705_543_454_095_404)
                .abs()
                .max((q95 - 5.991_464_547_107_979).abs());
            Ok((gap < 1e-9, format!("max gap {gap:.2e}")))
        }),
    ];
    checks
        .iter()
        .map(|(name, f)| match f() {
            Ok((pass, detail)) => check(name, pass, detail),
            Err(e) => check(name, false, format!("error: {e}")),
        })
        .collect()
}

/// Run the suite, printing one line per check. Returns whether all passed.
pub fn run(out: &mut impl Write) -> bool {
    let t0 = Instant::now();
    let results = run_checks();
    for r in &results {
        let _ = writeln!(
            out,
            "{:4} {:28} {}",
            if r.pass { "ok" } else { "FAIL" },
            r.name,
            r.detail
        );
    }
    let failed = results.iter().filter(|r| !r.pass).count();
    let _ = writeln!(
        out,
        "selftest: {} passed, {failed} failed in {:.1}s",
        results.len() - failed,
        t0.elapsed().as_secs_f64()
    );
    failed == 0
}
