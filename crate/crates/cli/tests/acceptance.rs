//! Acceptance battery at full level: one PASS/FAIL line per criterion.
//! Runs without the libtest harness so the lines always reach stdout.

use randcal::suite::{run_criterion, Level, CRITERIA};

/// Headline tolerances, pinned so the battery cannot be loosened silently.
const PINNED: &[(u32, &str, &str)] = &[
    (1, "max |mu5 - (mu1 + mu7)/2|, l <= 50", "== 0/1"),
    (2, "max |kappa5 - (kappa1 + kappa7)/2|, l <= 50", "== 0/1"),
    (2, "gamma(0) - mean", "== 4/289"),
    (3, "max |numeric - exact|, N in {1,5,7}, l <= 20", "<= 1e-8"),
    (3, "sup |R_numeric - R_exact| on [0.01, 1]", "<= 1e-8"),
    (4, "M=3: E_A S^4 - E_B S^4", "!= 0 (exact)"),
    (4, "M=3: mean potential gap at r=0", "> 0 (exact)"),
    (5, "min margin, l <= 20", ">= -1e-7"),
    (7, "lambda_min(Ebar - G_qbar)", ">= -1e-10"),
    (7, "second-order identity residual", "<= 1e-10"),
    (8, "max relative error of qbar", "<= 5e-2"),
    (8, "max relative error of Var", "<= 1e-1"),
    (10, "max |E X^alpha error|, d=2, |alpha| <= 3", "<= 1e-8"),
    (11, "residual, q1 = q2 = q", "<= 0e0"),
    (11, "conductivity residual, proportional pair and harmonic combination", "<= 1e-10"),
    (12, "max relative Frobenius error of C_a", "<= 1.5e-1"),
    (12, "min cosine with grad log(a1/a2)", ">= 9.8e-1"),
    (12, "proportional pair: max |C_a| / min non-proportional |C_a|", "<= 5e-2"),
    (13, "two-atom vs symmetric surrogate gap at xi^-8 plus c3", "== 0/1"),
];

fn tolerance_of(v: &serde_json::Value, label: &str) -> Option<String> {
    let own = v["measured"].as_array().into_iter().flatten().find(|m| m["label"] == label);
    if let Some(m) = own {
        return m["tolerance"].as_str().map(str::to_string);
    }
    v["members"].as_array().into_iter().flatten().find_map(|m| tolerance_of(m, label))
}

fn main() {
    let mut failed = Vec::new();
    for c in CRITERIA.iter() {
        let o = run_criterion(c, Level::Full);
        let json = o.verdict.to_json();
        let mut problems: Vec<String> = o.verdict.first_failure().into_iter().collect();
        if !o.within_budget() {
            problems.push(format!("over budget: {:.1}s > {}s", o.elapsed.as_secs_f64(), o.budget.as_secs()));
        }
        for &(_, label, want) in PINNED.iter().filter(|p| p.0 == c.id) {
            match tolerance_of(&json, label) {
                Some(t) if t == want => {}
                other => problems.push(format!("tolerance for {label:?} is {other:?}, pinned {want}")),
            }
        }
        let ok = problems.is_empty() && !o.verdict.skipped;
        println!(
            "{} {} ({:.2}s, budget {}s){}",
            if ok { "PASS" } else { "FAIL" },
            o.verdict.name,
            o.elapsed.as_secs_f64(),
            o.budget.as_secs(),
            if problems.is_empty() { String::new() } else { format!(": {}", problems.join("; ")) }
        );
        if !ok {
            failed.push(c.id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
