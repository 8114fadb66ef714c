//! The executable acceptance checklist. Each criterion is a standalone
//! function returning a structured outcome, so the integration tests and
//! the command-line `accept` subcommand run exactly the same checks with
//! the same pinned bounds and exact (zero) tolerances.

use serde::Serialize;

use crate::charges::{
    charge_degree, curve_family, enumerate_minimal, is_admissible, moduli_dim, table1,
    table1_euler_check, CohomDefect, CurveFamily, InstantonCharge,
};
use crate::chow::{constants, slope, triple, DivClass};
use crate::cohomology::{chi_f1, chi_rr_general, cohom_f, h0_f1, serre_dual_check};
use crate::cox::basis_f;
use crate::exceptional::{
    right_dual_matrix, verify_exceptional_pairs, verify_right_dual_pattern, verify_strong_dual,
};
use crate::kernel::{
    degenerate_422, h0_twist, minimal_presentation, restrict_to_line, verify_acm, verify_earnest,
    verify_instanton, verify_stability, verify_surjective, weakly_ulrich_window, MinimalCharge,
    TwistValue,
};
use crate::linalg::rat_int;
use crate::monad::{build_shape, kclass};
use crate::Error;

/// Seed pinned for every randomized pass inside the acceptance run.
pub const ACCEPT_SEED: u64 = 0xF1A7;
/// Sample count for the surjectivity sanity pass.
pub const ACCEPT_SAMPLES: usize = 10_000;
/// Polarization window for the aCM check.
pub const ACM_WINDOW: i64 = 3;
/// Window parameter for the weak-Ulrich pattern; the examined twists then
/// cover the same polarization range as the aCM window.
pub const ULRICH_SPAN: i64 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub details: String,
}

fn result(id: u8, name: &'static str, pass: bool, details: String) -> CriterionResult {
    CriterionResult {
        id,
        name,
        pass,
        details,
    }
}

/// Admissible charges in the pinned acceptance grid together with every
/// valid small defect pair.
fn charge_defect_grid() -> Vec<(InstantonCharge, CohomDefect)> {
    let mut out = Vec::new();
    for alpha in 3..=10 {
        for gamma in 2..=10 {
            for beta in -8..=8 {
                let ch = InstantonCharge::new(alpha, beta, gamma);
                if !is_admissible(ch) {
                    continue;
                }
                for delta in 0..=4 {
                    for epsilon in 0..=4 {
                        if let Ok(defect) = CohomDefect::new(ch, delta, epsilon) {
                            out.push((ch, defect));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Criterion 1: the closed-form section counts agree with the Cox monomial
/// enumeration, on the surface grid and on the threefold grid.
pub fn criterion_01_oracle_equivalence() -> CriterionResult {
    let mut cells = 0usize;
    for u in -12..=12 {
        for v in -12..=12 {
            cells += 1;
            let oracle = basis_f(DivClass::new(u, -v, 0)).len() as u64;
            if oracle != h0_f1(u, v) {
                return result(
                    1,
                    "oracle-equivalence",
                    false,
                    format!("surface mismatch at (u,v)=({u},{v})"),
                );
            }
        }
    }
    for l in -6..=6 {
        for e in -6..=6 {
            for xi in -6..=6 {
                cells += 1;
                let d = DivClass::new(l, e, xi);
                if basis_f(d).len() as u64 != cohom_f(d).h0 {
                    return result(
                        1,
                        "oracle-equivalence",
                        false,
                        format!("threefold mismatch at {d}"),
                    );
                }
            }
        }
    }
    result(1, "oracle-equivalence", true, format!("{cells} cells"))
}

/// Criterion 2: Riemann--Roch matches the product-formula Euler
/// characteristic and Serre duality holds on the threefold grid.
pub fn criterion_02_riemann_roch_serre() -> CriterionResult {
    let mut cells = 0usize;
    for l in -8..=8 {
        for e in -8..=8 {
            for xi in -8..=8 {
                cells += 1;
                let d = DivClass::new(l, e, xi);
                let chi = cohom_f(d).chi();
                if rat_int(chi) != chi_rr_general(1, d, crate::chow::CurveClass::ZERO, 0) {
                    return result(
                        2,
                        "riemann-roch-serre",
                        false,
                        format!("chi mismatch at {d}"),
                    );
                }
                if !serre_dual_check(d) {
                    return result(
                        2,
                        "riemann-roch-serre",
                        false,
                        format!("duality fails at {d}"),
                    );
                }
            }
        }
    }
    result(2, "riemann-roch-serre", true, format!("{cells} classes"))
}

/// Criterion 3: the individually pinned scalar values.
pub fn criterion_03_scalars() -> CriterionResult {
    let k = constants();
    let checks: [(&str, bool); 7] = [
        ("chi_f1(-2,0) = 0", chi_f1(-2, 0) == 0),
        ("chi_f1(-1,1) = -1", chi_f1(-1, 1) == -1),
        ("h1(-l+e) = 0", cohom_f(DivClass::new(-1, 1, 0)).h1 == 0),
        ("h1(-l-e) = 1", cohom_f(DivClass::new(-1, -1, 0)).h1 == 1),
        ("deg = 48", triple(k.h, k.h, k.h) == 48),
        (
            "slope(-l-2xi) = -28",
            slope(1, DivClass::new(-1, 0, -2)) == rat_int(-28),
        ),
        (
            "slope(-2l+e) = -20",
            slope(1, DivClass::new(-2, 1, 0)) == rat_int(-20),
        ),
    ];
    let failed: Vec<&str> = checks
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(name, _)| *name)
        .collect();
    result(
        3,
        "pinned-scalars",
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} scalars", checks.len())
        } else {
            format!("failed: {}", failed.join(", "))
        },
    )
}

/// Criterion 4: over the whole admissible grid the K-class Chern data is
/// rank 2, anticanonical determinant, the charge itself, and vanishing
/// third class.
pub fn criterion_04_monad_chern() -> CriterionResult {
    let grid = charge_defect_grid();
    for (ch, defect) in &grid {
        let shape = match build_shape(*ch, defect.delta(), defect.epsilon()) {
            Ok(s) => s,
            Err(e) => {
                return result(
                    4,
                    "monad-chern",
                    false,
                    format!("shape failed at {ch}: {e}"),
                )
            }
        };
        let k = match kclass(&shape) {
            Ok(k) => k,
            Err(e) => {
                return result(
                    4,
                    "monad-chern",
                    false,
                    format!("kclass failed at {ch}: {e}"),
                )
            }
        };
        let cd = k.chern();
        let ok = cd.rank == 2 && cd.c1 == -constants().h && cd.c2 == ch.curve_class() && cd.c3 == 0;
        if !ok {
            return result(
                4,
                "monad-chern",
                false,
                format!("chern mismatch at {ch} with defect {defect:?}: {cd:?}"),
            );
        }
    }
    result(4, "monad-chern", true, format!("{} shapes", grid.len()))
}

/// Criterion 5: the dimension table has no negative entries and every
/// column's alternating sum equals the twisted K-class Euler
/// characteristic, over the same grid.
pub fn criterion_05_table_euler() -> CriterionResult {
    let grid = charge_defect_grid();
    for (ch, defect) in &grid {
        if let Err(e) = table1(*ch, *defect) {
            return result(
                5,
                "table-euler",
                false,
                format!("table failed at {ch}: {e}"),
            );
        }
        match table1_euler_check(*ch, *defect) {
            Ok(check) if check.pass => {}
            Ok(check) => {
                let bad = check
                    .columns
                    .iter()
                    .find(|c| c.table_sum != c.kclass_chi)
                    .expect("failing column");
                return result(
                    5,
                    "table-euler",
                    false,
                    format!(
                        "column p={} at {ch}: table {} vs chi {}",
                        bad.p, bad.table_sum, bad.kclass_chi
                    ),
                );
            }
            Err(e) => {
                return result(
                    5,
                    "table-euler",
                    false,
                    format!("check failed at {ch}: {e}"),
                )
            }
        }
    }
    result(
        5,
        "table-euler",
        true,
        format!("{} shapes x 8 columns", charge_defect_grid().len()),
    )
}

/// Criterion 6: minimality enumeration and moduli dimensions.
pub fn criterion_06_minimality() -> CriterionResult {
    let at14 = enumerate_minimal(14);
    let found: Vec<InstantonCharge> = at14.charges.iter().map(|(c, _)| *c).collect();
    let expected = vec![InstantonCharge::new(3, 1, 3), InstantonCharge::new(4, 2, 2)];
    if found != expected {
        return result(6, "minimality", false, format!("cap 14 gave {found:?}"));
    }
    if !enumerate_minimal(13).charges.is_empty() {
        return result(6, "minimality", false, "cap 13 is not empty".into());
    }
    for ch in &expected {
        match moduli_dim(*ch) {
            Ok(1) => {}
            other => {
                return result(
                    6,
                    "minimality",
                    false,
                    format!("moduli_dim({ch}) = {other:?}"),
                )
            }
        }
    }
    // the closed identity with the degree, across the admissible grid
    for alpha in 3..=10 {
        for gamma in 2..=10 {
            for beta in -8..=(alpha - 2) {
                let ch = InstantonCharge::new(alpha, beta, gamma);
                if is_admissible(ch) && moduli_dim(ch).unwrap() != 2 * charge_degree(ch) - 27 {
                    return result(6, "minimality", false, format!("identity fails at {ch}"));
                }
            }
        }
    }
    // the curve families carry the degrees the enumeration leans on
    let degs: Vec<i64> = [
        CurveFamily::Line,
        CurveFamily::A,
        CurveFamily::B,
        CurveFamily::C,
    ]
    .into_iter()
    .map(|f| curve_family(f).h_degree)
    .collect();
    if degs != vec![1, 3, 2, 2] {
        return result(6, "minimality", false, format!("family degrees {degs:?}"));
    }
    result(
        6,
        "minimality",
        true,
        "two minimal charges, dimension 1".into(),
    )
}

/// Criterion 7: the three collection verifications, with the exact
/// anti-diagonal dual pattern.
pub fn criterion_07_exceptional() -> CriterionResult {
    let a = verify_exceptional_pairs();
    let b = verify_strong_dual();
    let c = verify_right_dual_pattern();
    if !(a.pass && b.pass && c.pass) {
        return result(
            7,
            "exceptional-collection",
            false,
            format!(
                "pairs: {:?}, strong: {:?}, dual: {:?}",
                a.first_failure, b.first_failure, c.first_failure
            ),
        );
    }
    let m = right_dual_matrix();
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v != u64::from(i + j == 7) {
                return result(
                    7,
                    "exceptional-collection",
                    false,
                    format!("pattern matrix has {v} at ({i},{j})"),
                );
            }
        }
    }
    result(
        7,
        "exceptional-collection",
        true,
        format!("{} pairings checked", a.checked + b.checked + c.checked),
    )
}

fn minimal_suite(id: u8, name: &'static str, which: MinimalCharge) -> CriterionResult {
    let pres = minimal_presentation(which);
    let fail = |msg: String| result(id, name, false, msg);

    let cert = match verify_surjective(&pres, ACCEPT_SEED, ACCEPT_SAMPLES) {
        Ok(c) => c,
        Err(e) => return fail(format!("surjectivity: {e}")),
    };
    if !cert.fully_certified {
        return fail("surjectivity certificate incomplete".into());
    }

    let instanton = match verify_instanton(&pres) {
        Ok(r) => r,
        Err(e) => return fail(format!("instanton: {e}")),
    };
    if !instanton.pass {
        return fail(format!(
            "instanton vanishing failed: h0 = {}, h1 = {:?}",
            instanton.h0, instanton.h1.value
        ));
    }

    let earnest = verify_earnest(&pres);
    if earnest.delta.value != TwistValue::Exact(0)
        || earnest.epsilon.value != TwistValue::Exact(0)
        || earnest.doubling_ok != Some(true)
    {
        return fail(format!(
            "earnestness failed: delta {:?}, epsilon {:?}",
            earnest.delta.value, earnest.epsilon.value
        ));
    }

    let acm = verify_acm(&pres, ACM_WINDOW);
    if !acm.all_exact_zero {
        return fail(format!(
            "aCM window not exactly zero ({} inconclusive)",
            acm.inconclusive
        ));
    }

    let ulrich = weakly_ulrich_window(&pres, ULRICH_SPAN);
    if ulrich.undecided != 0 || !ulrich.all_decided_pass {
        return fail(format!(
            "weak-Ulrich window: {} undecided, pass = {}",
            ulrich.undecided, ulrich.all_decided_pass
        ));
    }

    let line = match restrict_to_line(&pres) {
        Ok(r) => r,
        Err(e) => return fail(format!("line restriction: {e}")),
    };
    if (line.a, line.b) != (0, -1) {
        return fail(format!("splitting type ({}, {})", line.a, line.b));
    }

    // the largest section matrix of the whole suite sits at the top of the
    // aCM window
    let h = constants().h;
    let acm_top = crate::kernel::h0_matrix(&pres, h * ACM_WINDOW);
    result(
        id,
        name,
        true,
        format!(
            "surjective ({} cases), instanton, earnest, aCM({}), Ulrich span {}, line (0,-1); {} destabilizer twists, largest matrix {}x{}",
            cert.cases,
            ACM_WINDOW,
            ULRICH_SPAN,
            instanton.stability.checks.len(),
            acm_top.rows,
            acm_top.ncols()
        ),
    )
}

/// Criterion 8: the full certificate suite for the charge-(4,2,2) minimal
/// presentation.
pub fn criterion_08_minimal_422() -> CriterionResult {
    minimal_suite(8, "minimal-instanton-422", MinimalCharge::Charge422)
}

/// Criterion 9: the identical suite for charge (3,1,3).
pub fn criterion_09_minimal_313() -> CriterionResult {
    minimal_suite(9, "minimal-instanton-313", MinimalCharge::Charge313)
}

/// Criterion 10: the negative controls. The degenerate presentation must be
/// reported destabilized and the defect gate must reject the pair that
/// breaks the doubling bound.
pub fn criterion_10_negative_controls() -> CriterionResult {
    let degenerate = verify_stability(&degenerate_422());
    let destabilized = matches!(degenerate, Err(Error::Destabilized { .. }));
    if !destabilized {
        return result(
            10,
            "negative-controls",
            false,
            "degenerate presentation was not destabilized".into(),
        );
    }
    // the degeneration also has sections after the right twist, seen
    // directly
    let bad_twist = DivClass::new(2, -1, 0);
    if h0_twist(&degenerate_422(), bad_twist) == 0 {
        return result(
            10,
            "negative-controls",
            false,
            "degenerate presentation has no destabilizing sections".into(),
        );
    }
    let gate = CohomDefect::new(InstantonCharge::new(3, 1, 3), 0, 1);
    let rejected =
        matches!(gate, Err(Error::DefectInvariant { rule, .. }) if rule == "2*delta >= epsilon");
    if !rejected {
        return result(
            10,
            "negative-controls",
            false,
            format!("defect gate accepted (0,1): {gate:?}"),
        );
    }
    result(
        10,
        "negative-controls",
        true,
        "degeneration destabilized; doubling gate rejects (0,1)".into(),
    )
}

/// Run every criterion in order.
pub fn run_all() -> Vec<CriterionResult> {
    vec![
        criterion_01_oracle_equivalence(),
        criterion_02_riemann_roch_serre(),
        criterion_03_scalars(),
        criterion_04_monad_chern(),
        criterion_05_table_euler(),
        criterion_06_minimality(),
        criterion_07_exceptional(),
        criterion_08_minimal_422(),
        criterion_09_minimal_313(),
        criterion_10_negative_controls(),
    ]
}
