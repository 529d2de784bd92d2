//! The six subcommands. Each one resolves shared machinery (sieves,
//! weights, the singular series — all N-independent pieces exactly once),
//! pushes rows into the report as they are produced, and leaves error
//! handling to the caller: rows computed before a failure stay in the
//! report, so partial progress is never thrown away.

use std::time::Instant;

use anyhow::Result;
use polyprime::asymptotics::{
    bias_factor_linear_form, euler_factor, gauss_sum, generalized_singular_series,
    main_term_unweighted, main_term_weighted, series_term, singular_series_qsum,
};
use polyprime::counting::{
    count_pairs_linear_form_with, weighted_count_linear_form_with, CountReport,
};
use polyprime::diagnostics::{
    empirical_bias, empirical_form_distribution_with, lambda_hat_with, nu, verify_orthogonality,
    weyl_sum,
};
use polyprime::numeric::{gcd, mobius, scaled_kth_root};
use polyprime::{Complex64, LambdaWeights, PrimeTable};

use crate::config::{CommonArgs, RunConfig};
use crate::output::{
    BiasRow, CountRow, ErrorObject, PredictRow, Report, Row, SeriesRow, Status, SweepRow,
    VerifyRow,
};

/// Resolves the config, runs the command, emits the report. Returns the
/// process exit code: 0 only if everything completed and every check (for
/// `verify`) passed.
pub fn run(command: &'static str, args: &CommonArgs) -> i32 {
    let cfg = match RunConfig::resolve(command, args) {
        Ok(cfg) => cfg,
        Err(err) => {
            // No validated config to honor; fall back to the raw flags so
            // the error still lands where the caller is looking.
            let report = Report::fail(command, format!("{err:#}"));
            let format = args.format.unwrap_or_default();
            if let Err(io_err) = report.emit(format, args.out.as_deref()) {
                eprintln!("error: {io_err:#}");
            }
            return 1;
        }
    };
    if cfg.threads > 0 {
        // A second init in the same process is harmless; the pool is
        // process-wide and first-wins.
        rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build_global().ok();
    }

    let mut report = Report::new(command);
    let outcome = match command {
        "count" => cmd_count(&cfg, &mut report),
        "predict" => cmd_predict(&cfg, &mut report),
        "series" => cmd_series(&cfg, &mut report),
        "bias" => cmd_bias(&cfg, &mut report),
        "verify" => cmd_verify(&cfg, &mut report),
        "sweep" => cmd_sweep(&cfg, &mut report),
        other => unreachable!("unknown command {other}"),
    };
    let ok = match outcome {
        Ok(all_passed) => all_passed,
        Err(err) => {
            report.error = Some(ErrorObject { message: format!("{err:#}") });
            false
        }
    };
    if let Err(io_err) = report.emit_for(&cfg) {
        eprintln!("error: {io_err:#}");
        return 1;
    }
    if ok {
        0
    } else {
        1
    }
}

/// One `(f, form, N)` cell: exact count, weighted count, main terms.
/// The singular series value is passed in — it does not depend on N.
fn compute_cell(
    cfg: &RunConfig,
    n: u64,
    series_value: f64,
    series_tail: f64,
) -> Result<CountReport> {
    let started = Instant::now();
    let table = PrimeTable::build(n)?;
    let weights = LambdaWeights::build(&table)?;
    let exact = count_pairs_linear_form_with(&cfg.poly, cfg.form, &table, cfg.fast_path)?;
    let weighted = weighted_count_linear_form_with(&cfg.poly, cfg.form, &weights, cfg.fast_path)?;
    Ok(CountReport {
        poly: cfg.poly.clone(),
        form: cfg.form,
        n,
        exact,
        weighted,
        main_term_weighted: main_term_weighted(&cfg.poly, cfg.form, n, series_value),
        main_term_unweighted: main_term_unweighted(&cfg.poly, cfg.form, n, series_value),
        series_value,
        series_tail_bound: series_tail,
        elapsed: started.elapsed(),
    })
}

fn cmd_count(cfg: &RunConfig, report: &mut Report) -> Result<bool> {
    let series = generalized_singular_series(&cfg.poly, cfg.form, cfg.truncation_prime)?;
    for &n in &cfg.n_values {
        let cell = compute_cell(cfg, n, series.value, series.tail_bound)?;
        report.rows.push(Row::Count(CountRow {
            poly: cfg.poly.to_string(),
            a1: cfg.form.a1(),
            a2: cfg.form.a2(),
            n,
            exact: cell.exact,
            weighted: cell.weighted,
            main_weighted: cell.main_term_weighted,
            main_unweighted: cell.main_term_unweighted,
            ratio_weighted: cell.ratio_weighted(),
            ratio_unweighted: cell.ratio_unweighted(),
            series_value: series.value,
            series_tail_bound: series.tail_bound,
            elapsed_s: cell.elapsed.as_secs_f64(),
        }));
    }
    Ok(true)
}

fn cmd_sweep(cfg: &RunConfig, report: &mut Report) -> Result<bool> {
    let series = generalized_singular_series(&cfg.poly, cfg.form, cfg.truncation_prime)?;
    for &n in &cfg.n_values {
        let cell = compute_cell(cfg, n, series.value, series.tail_bound)?;
        report.rows.push(Row::Sweep(SweepRow {
            poly: cfg.poly.to_string(),
            a1: cfg.form.a1(),
            a2: cfg.form.a2(),
            n,
            exact: cell.exact,
            weighted: cell.weighted,
            main_weighted: cell.main_term_weighted,
            main_unweighted: cell.main_term_unweighted,
            ratio_weighted: cell.ratio_weighted(),
            ratio_unweighted: cell.ratio_unweighted(),
            series_value: series.value,
            series_tail_bound: series.tail_bound,
        }));
    }
    Ok(true)
}

fn cmd_predict(cfg: &RunConfig, report: &mut Report) -> Result<bool> {
    let series = generalized_singular_series(&cfg.poly, cfg.form, cfg.truncation_prime)?;
    for &n in &cfg.n_values {
        report.rows.push(Row::Predict(PredictRow {
            poly: cfg.poly.to_string(),
            a1: cfg.form.a1(),
            a2: cfg.form.a2(),
            n,
            main_weighted: main_term_weighted(&cfg.poly, cfg.form, n, series.value),
            main_unweighted: main_term_unweighted(&cfg.poly, cfg.form, n, series.value),
            series_value: series.value,
            series_tail_bound: series.tail_bound,
        }));
    }
    Ok(true)
}

fn cmd_series(cfg: &RunConfig, report: &mut Report) -> Result<bool> {
    let euler = generalized_singular_series(&cfg.poly, cfg.form, cfg.truncation_prime)?;
    // The modulus-sum route is defined for the plain difference; for other
    // forms the cross-check column stays null rather than faking agreement.
    let (qsum_value, agreement_delta) = if cfg.form.is_difference() {
        let qsum = singular_series_qsum(&cfg.poly, cfg.truncation_q)?;
        (Some(qsum), Some((euler.value - qsum).abs()))
    } else {
        (None, None)
    };
    report.rows.push(Row::Series(SeriesRow {
        poly: cfg.poly.to_string(),
        a1: cfg.form.a1(),
        a2: cfg.form.a2(),
        trunc_p: cfg.truncation_prime,
        trunc_q: cfg.truncation_q,
        euler_value: euler.value,
        euler_tail_bound: euler.tail_bound,
        qsum_value,
        agreement_delta,
    }));
    Ok(true)
}

fn cmd_bias(cfg: &RunConfig, report: &mut Report) -> Result<bool> {
    let n = *cfg.n_values.last().expect("validated nonempty");
    let table = PrimeTable::build(n)?;
    let small_primes = PrimeTable::build(cfg.max_p)?;
    for p in small_primes.primes() {
        let theoretical = bias_factor_linear_form(&cfg.poly, cfg.form, p)?;
        let empirical = empirical_bias(&cfg.poly, cfg.form, p, &table)?;
        report.rows.push(Row::Bias(BiasRow {
            poly: cfg.poly.to_string(),
            a1: cfg.form.a1(),
            a2: cfg.form.a2(),
            n,
            p,
            theoretical,
            empirical,
            deviation: empirical - theoretical,
        }));
    }
    Ok(true)
}

/// Identity battery: every row is an exact or near-exact equation the rest
/// of the crate relies on, checked two independent ways. Detail strings use
/// semicolons as separators so CSV rows stay unambiguous.
fn cmd_verify(cfg: &RunConfig, report: &mut Report) -> Result<bool> {
    let f = &cfg.poly;
    let poly = f.to_string();
    let mut all = true;
    let mut push = |report: &mut Report, check: &str, n: Option<u64>, detail: String, pass: bool| {
        all &= pass;
        report.rows.push(Row::Verify(VerifyRow {
            check: check.into(),
            poly: poly.clone(),
            n,
            detail,
            status: if pass { Status::Pass } else { Status::Fail },
        }));
    };

    // Parseval-style transfer: the direct weighted count must equal the
    // frequency-side average of |transform|^2 against the target spectrum.
    for &n in &cfg.n_values {
        let ortho = verify_orthogonality(f, n)?;
        let pass = ortho.relative_error < 1e-8;
        push(
            report,
            "orthogonality",
            Some(n),
            format!(
                "lhs={}; rhs={}; rel_err={:.3e}; transform_len={}",
                ortho.lhs, ortho.rhs, ortho.relative_error, ortho.transform_len
            ),
            pass,
        );
    }

    // Root-count identity: summing the complete exponential sums over all
    // nonzero residues recovers p * (roots(f mod p) - 1) exactly.
    {
        let table = PrimeTable::build(500)?;
        let mut worst = 0.0f64;
        let mut worst_p = 0u64;
        for p in table.primes() {
            let roots = f.root_count_mod(p)? as f64;
            let mut sum = Complex64::new(0.0, 0.0);
            for a in 1..p {
                sum += gauss_sum(f, a, p)?;
            }
            let err = (sum - Complex64::new(p as f64 * (roots - 1.0), 0.0)).norm();
            if err > worst {
                worst = err;
                worst_p = p;
            }
        }
        let pass = worst < 1e-6;
        push(
            report,
            "gauss_root_identity",
            None,
            format!("max_abs_err={worst:.3e} at p={worst_p}; primes<=500"),
            pass,
        );
    }

    // Multiplicativity of the local factor over coprime squarefree moduli.
    {
        let mut worst = 0.0f64;
        let mut worst_pair = (2u64, 3u64);
        for q1 in 2..=100u64 {
            if mobius(q1) == 0 {
                continue;
            }
            let f_q1 = series_term(f, q1)?;
            for q2 in (q1 + 1)..=100u64 {
                if mobius(q2) == 0 || gcd(q1, q2) != 1 {
                    continue;
                }
                let f_q2 = series_term(f, q2)?;
                let joint = series_term(f, q1 * q2)?;
                let err = (joint - f_q1 * f_q2).abs();
                if err > worst {
                    worst = err;
                    worst_pair = (q1, q2);
                }
            }
        }
        let pass = worst < 1e-9;
        push(
            report,
            "series_multiplicativity",
            None,
            format!(
                "max_abs_err={worst:.3e} at q1={}; q2={}; coprime squarefree moduli<=100",
                worst_pair.0, worst_pair.1
            ),
            pass,
        );
    }

    // The Euler factor must be exactly 1 + F(p) at every prime.
    {
        let table = PrimeTable::build(1000)?;
        let mut worst = 0.0f64;
        let mut worst_p = 2u64;
        for p in table.primes() {
            let err = (1.0 + series_term(f, p)? - euler_factor(f, p)?).abs();
            if err > worst {
                worst = err;
                worst_p = p;
            }
        }
        let pass = worst < 1e-9;
        push(
            report,
            "euler_factor_consistency",
            None,
            format!("max_abs_err={worst:.3e} at p={worst_p}; primes<=1000"),
            pass,
        );
    }

    // Closed-form geometric kernel against the literal sum.
    {
        let n = 1000u64;
        let mut worst = 0.0f64;
        for &beta in &[0.3, 0.001, 0.749, 1.0 / 3.0, 0.999_999] {
            let closed = nu(n, beta);
            let mut direct = Complex64::new(0.0, 0.0);
            for j in 1..=n {
                direct += Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * j as f64 * beta);
            }
            let err = (closed - direct).norm() / direct.norm().max(1.0);
            worst = worst.max(err);
        }
        let pass = worst < 1e-8;
        push(
            report,
            "nu_closed_form",
            Some(n),
            format!("max_rel_err={worst:.3e} over 5 frequencies"),
            pass,
        );
    }

    // Real inputs force conjugate symmetry of both transforms.
    {
        let n = 500u64;
        let table = PrimeTable::build(n)?;
        let weights = LambdaWeights::build(&table)?;
        let m = scaled_kth_root(n as i64, f.leading_coefficient(), f.degree()).max(1);
        let mut worst = 0.0f64;
        for j in 1..32u64 {
            let alpha = j as f64 / 64.0;
            let lam_err = (lambda_hat_with(&weights, 1.0 - alpha)
                - lambda_hat_with(&weights, alpha).conj())
            .norm();
            let weyl_err =
                (weyl_sum(f, m, 1.0 - alpha)? - weyl_sum(f, m, alpha)?.conj()).norm();
            worst = worst.max(lam_err).max(weyl_err);
        }
        let pass = worst < 1e-9;
        push(
            report,
            "conjugate_symmetry",
            Some(n),
            format!("max_abs_err={worst:.3e} over 31 frequencies"),
            pass,
        );
    }

    // Residue distributions are probability vectors.
    {
        let n = 10_000u64;
        let table = PrimeTable::build(n)?;
        let mut worst = 0.0f64;
        for m in [2u64, 3, 5] {
            let dist = empirical_form_distribution_with(&table, cfg.form, m)?;
            let total: f64 = dist.iter().sum();
            worst = worst.max((total - 1.0).abs());
        }
        let pass = worst < 1e-12;
        push(
            report,
            "distribution_normalization",
            Some(n),
            format!("max_abs_err={worst:.3e} over moduli 2;3;5"),
            pass,
        );
    }

    Ok(all)
}
