//! The acceptance suite: every published determinant identity checked exactly.
//!
//! Each criterion has a numeric id and a short name usable as a filter. The
//! checks that read path-counting sequences take them from a [`Suite`]'s
//! sequence source, so a deliberately corrupted source can be plugged in to
//! confirm that the checks notice.

use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{Poly, RatSeries, Scalar};
use crate::gx::{chain_holds, fe_equal, orbit, shift_out, FactorChain, OrbitOutcome, OrbitTrace, QuadFE, QuadraticForm, DEFAULT_MAX_STEPS};
use crate::hankel::{build, det_sequence, detect_period, HankelQuery, Period};
use crate::matrix::ExactMatrix;
use crate::pathcount::{delannoy_matrix, f_dp_oracle, f_series, lgv_signed_sum, lgv_tuples, ItConfig, PathParams, DEFAULT_BUDGET};

/// Produces `f(0..=n_max)` for the given parameters.
pub type SeriesSource = fn(&PathParams, usize) -> Vec<Scalar>;

type Check = fn(&Suite) -> CheckResult;
type CheckResult = std::result::Result<String, String>;

pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub title: &'static str,
    check: Check,
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, name: "sequences", title: "path sequences match the published lists", check: sequences },
    Criterion { id: 2, name: "oracle", title: "functional equation agrees with path enumeration", check: oracle },
    Criterion { id: 3, name: "prop1", title: "Motzkin Hankel determinants are 1", check: prop1 },
    Criterion { id: 4, name: "prop2", title: "aerated Schroeder determinants are powers of 1+t", check: prop2 },
    Criterion { id: 5, name: "prop3", title: "l = 3 determinants have period 14", check: prop3 },
    Criterion { id: 6, name: "large-schroeder", title: "large Schroeder determinants (1+t)^(n(n-1)/2)", check: large_schroeder_dets },
    Criterion { id: 7, name: "shifted-motzkin", title: "shifted Motzkin determinants", check: shifted_motzkin_dets },
    Criterion { id: 8, name: "shifted-schroeder", title: "shifted aerated Schroeder determinants", check: shifted_schroeder_dets },
    Criterion { id: 9, name: "lgv", title: "signed tuple sums equal path-weight determinants", check: lgv },
    Criterion { id: 10, name: "delannoy", title: "Delannoy matrix determinants", check: delannoy },
    Criterion { id: 11, name: "engine-ell3", title: "transformation orbit of l = 3", check: engine_ell3 },
    Criterion { id: 12, name: "engine-examples", title: "transformation orbits of the worked examples", check: engine_examples },
    Criterion { id: 13, name: "soundness", title: "every factor chain holds numerically", check: soundness },
    Criterion { id: 14, name: "shifted-ell3", title: "shifted l = 3 determinants, shifts 1 to 3", check: shifted_ell3 },
    Criterion { id: 15, name: "shift4-ell3", title: "shifted l = 3 determinants, shift 4", check: shift4_ell3 },
];

pub fn criteria() -> &'static [Criterion] {
    CRITERIA
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(serialize_with = "millis")]
    pub elapsed: Duration,
}

fn millis<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_millis() as u64)
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "[{status}] {:>2} {:<16} {:>8.2}s  {}: {}",
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.title,
            self.detail
        )
    }
}

pub struct Suite {
    series: SeriesSource,
}

impl Default for Suite {
    fn default() -> Self {
        Suite { series: f_series }
    }
}

impl Suite {
    pub fn with_series(series: SeriesSource) -> Self {
        Suite { series }
    }

    /// Runs every criterion, or the one whose name or id is `only`.
    pub fn run(&self, only: Option<&str>) -> Result<Vec<CriterionReport>> {
        let selected: Vec<&Criterion> = match only {
            None => CRITERIA.iter().collect(),
            Some(key) => {
                let c = CRITERIA
                    .iter()
                    .find(|c| c.name == key || c.id.to_string() == key)
                    .ok_or_else(|| Error::UnknownCriterion(key.to_string()))?;
                vec![c]
            }
        };
        Ok(selected.into_iter().map(|c| self.run_one(c)).collect())
    }

    pub fn run_one(&self, c: &Criterion) -> CriterionReport {
        let start = Instant::now();
        let outcome = (c.check)(self);
        let elapsed = start.elapsed();
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        CriterionReport { id: c.id, name: c.name, title: c.title, passed, detail, elapsed }
    }

    fn seq(&self, ell: usize, t: &str, n_max: usize) -> Vec<Scalar> {
        (self.series)(&params(ell, t), n_max)
    }

    fn dets(&self, ell: usize, t: &str, shift: usize, n_max: usize) -> Vec<Scalar> {
        let f = self.seq(ell, t, 2 * n_max + shift);
        det_sequence(&f, shift, n_max).expect("series long enough")
    }
}

fn params(ell: usize, t: &str) -> PathParams {
    PathParams::new(ell, sc(t)).expect("valid parameters")
}

fn sc(x: &str) -> Scalar {
    x.parse().expect("valid scalar literal")
}

fn ints(v: &[i64]) -> Vec<Scalar> {
    v.iter().map(|&c| Scalar::from_int(c)).collect()
}

/// Compares `got[i]` against `want(i + first)` and names the first mismatch.
fn match_each(what: &str, got: &[Scalar], first: usize, want: impl Fn(usize) -> Scalar) -> std::result::Result<(), String> {
    for (i, g) in got.iter().enumerate() {
        let w = want(i + first);
        if *g != w {
            return Err(format!("{what}: at n = {} got {g}, expected {w}", i + first));
        }
    }
    Ok(())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn one_plus_t_pow(e: usize) -> Scalar {
    sc("1+t").pow(e as i64)
}

fn sequences(s: &Suite) -> CheckResult {
    let lists: [(&str, usize, &str, Vec<i64>); 4] = [
        ("l = 3, t = 1", 3, "1", vec![1, 0, 1, 1, 2, 3, 6, 10, 20, 36, 72, 136, 273, 532]),
        ("Motzkin", 1, "1", vec![1, 1, 2, 4, 9, 21, 51, 127, 323, 835]),
        ("aerated Schroeder", 2, "1", vec![1, 0, 2, 0, 6, 0, 22, 0, 90, 0, 394, 0]),
        ("aerated Catalan", 0, "0", vec![1, 0, 1, 0, 2, 0, 5, 0, 14, 0, 42, 0, 132, 0, 429]),
    ];
    for (what, ell, t, want) in &lists {
        let got = s.seq(*ell, t, want.len() - 1);
        match_each(what, &got, 0, |n| Scalar::from_int(want[n]))?;
    }
    Ok("4 lists reproduced".into())
}

fn oracle(s: &Suite) -> CheckResult {
    let mut count = 0;
    for ell in 1..=4 {
        for t in ["0", "1", "2", "t"] {
            let p = params(ell, t);
            let want = f_dp_oracle(&p, 30);
            match_each(&format!("l = {ell}, t = {t}"), &(s.series)(&p, 30), 0, |n| want[n].clone())?;
            count += 1;
        }
    }
    Ok(format!("{count} parameter pairs agree for n <= 30"))
}

fn prop1(s: &Suite) -> CheckResult {
    match_each("det H_n, l = 1", &s.dets(1, "t", 0, 10), 1, |_| Scalar::one())?;
    Ok("det H_n = 1 for n = 1..10".into())
}

fn prop2(s: &Suite) -> CheckResult {
    let exp = |n: usize| if n % 2 == 0 { n * n / 4 } else { (n - 1) * (n + 1) / 4 };
    match_each("det H_n, l = 2", &s.dets(2, "t", 0, 8), 1, |n| one_plus_t_pow(exp(n)))?;
    Ok("n = 1..8 match".into())
}

const PERIOD14: [i64; 14] = [1, 1, 0, 0, -1, -1, -1, -1, -1, 0, 0, 1, 1, 1];

fn prop3(s: &Suite) -> CheckResult {
    let f = s.seq(3, "1", 84);
    let d = det_sequence(&f, 0, 42).expect("series long enough");
    match_each("det H_n, l = 3", &d, 1, |n| Scalar::from_int(PERIOD14[(n - 1) % 14]))?;
    let period = detect_period(&d, 21);
    ensure(period == Some(Period { period: 14, offset: 0 }), || format!("detect_period gave {period:?}"))?;
    let h0 = build(&HankelQuery::new(&f, 0, 0)).map_err(|e| e.to_string())?.det();
    ensure(h0.is_one(), || format!("det H_0 = {h0}"))?;
    Ok("n = 1..42 follow the pattern, period (14, 0), det H_0 = 1".into())
}

fn large_schroeder_dets(s: &Suite) -> CheckResult {
    // F(x^2) for F = 1 + t x F + x F^2 is the l = 2 series
    let aerated = s.seq(2, "t", 32);
    let g: Vec<Scalar> = aerated.iter().step_by(2).cloned().collect();
    let d = det_sequence(&g, 0, 8).expect("series long enough");
    match_each("det H_n, large Schroeder", &d, 1, |n| one_plus_t_pow(n * (n - 1) / 2))?;
    Ok("n = 1..8 match".into())
}

fn shifted_motzkin_dets(s: &Suite) -> CheckResult {
    let d = s.dets(1, "t", 1, 10);
    ensure(d[0] == sc("t") && d[1] == sc("(t-1)*(t+1)"), || format!("initial values {}, {}", d[0], d[1]))?;
    let t = sc("t");
    match_each("recurrence", &d[2..], 3, |n| &(&t * &d[n - 2]) - &d[n - 3])?;
    let one = s.dets(1, "1", 1, 18);
    match_each("t = 1", &one, 1, |n| Scalar::from_int([1, 0, -1, -1, 0, 1][(n - 1) % 6]))?;
    let p = detect_period(&one, 6);
    ensure(p == Some(Period { period: 6, offset: 0 }), || format!("detect_period gave {p:?}"))?;
    match_each("t = 2", &s.dets(1, "2", 1, 12), 1, |n| Scalar::from_int(n as i64 + 1))?;
    Ok("recurrence n = 3..10, period 6 at t = 1, n + 1 at t = 2".into())
}

fn shifted_schroeder_dets(s: &Suite) -> CheckResult {
    let want = |n: usize| {
        if n % 2 == 1 {
            Scalar::zero()
        } else {
            let sign = if (n / 2) % 2 == 0 { 1 } else { -1 };
            &Scalar::from_int(sign) * &one_plus_t_pow(n * (n + 2) / 4)
        }
    };
    match_each("det H^1_n, l = 2", &s.dets(2, "t", 1, 8), 1, want)?;
    Ok("n = 1..8 match".into())
}

fn lgv_matches(config: &ItConfig, p: &PathParams) -> std::result::Result<Scalar, String> {
    let sum = lgv_signed_sum(config, p, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let det = config.weight_matrix(p).det();
    ensure(sum == det, || format!("{config:?} with l = {}, t = {}: sum {sum}, det {det}", p.ell(), p.t()))?;
    Ok(sum)
}

/// Strictly monotone choices of `m` abscissae from `range`.
fn choose(range: &[i64], m: usize) -> Vec<Vec<i64>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in range.iter().enumerate() {
        for mut rest in choose(&range[i + 1..], m - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

fn lgv(_: &Suite) -> CheckResult {
    let motzkin = params(1, "t");
    let square = lgv_matches(&ItConfig::hankel(4, 0), &motzkin)?;
    ensure(square.is_one(), || format!("order 4: {square}"))?;
    let shifted = ItConfig::hankel(4, 1);
    lgv_matches(&shifted, &motzkin)?;
    let tuples = lgv_tuples(&shifted, &motzkin, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    for w in ["t^4", "-t^2"] {
        ensure(tuples.iter().any(|tp| tp.signed_weight(motzkin.t()) == sc(w)), || format!("no tuple of weight {w}"))?;
    }
    let left: Vec<i64> = (-4..=0).rev().collect();
    let right: Vec<i64> = (0..=4).collect();
    let mut count = 0;
    for (ell, t) in [(0, "0"), (1, "t"), (2, "t"), (3, "t")] {
        let p = params(ell, t);
        for m in 1..=3 {
            for xs in choose(&left, m) {
                for xt in choose(&right, m) {
                    let config = ItConfig::new(xs.iter().map(|&x| (x, 0)).collect(), xt.iter().map(|&x| (x, 0)).collect())
                        .map_err(|e| e.to_string())?;
                    lgv_matches(&config, &p)?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("order 4 Hankel configurations and {count} axis configurations agree"))
}

fn delannoy(_: &Suite) -> CheckResult {
    let t = sc("t");
    for n in 1..=6 {
        let d = delannoy_matrix(n, &t).det();
        ensure(d == one_plus_t_pow(n * (n - 1) / 2), || format!("n = {n}: det {d}"))?;
    }
    let m = delannoy_matrix(4, &Scalar::one());
    let printed = ExactMatrix::from_rows(
        [[1, 1, 1, 1], [1, 3, 5, 7], [1, 5, 13, 25], [1, 7, 25, 63]].iter().map(|r| ints(r)).collect(),
    );
    ensure(m == printed, || format!("t = 1 matrix {:?}", m.rows()))?;
    ensure(m.det() == Scalar::from_int(64), || format!("t = 1 det {}", m.det()))?;
    Ok("n = 1..6 symbolic, 4x4 at t = 1 has det 64".into())
}

fn poly(c: &[i64]) -> RatSeries {
    RatSeries::from_poly(Poly::from_ints(c))
}

/// The solution of `F = num / (den + coef * F)`.
fn cf(num: &[i64], den: &[i64], coef: &[i64]) -> QuadFE {
    QuadraticForm::new(poly(coef), poly(den), -&poly(num)).canonicalize().expect("well-formed example")
}

fn ell3() -> QuadFE {
    QuadFE::path_equation(3, &Scalar::one()).expect("valid")
}

fn run_orbit(fe: &QuadFE) -> std::result::Result<OrbitTrace, String> {
    orbit(fe, DEFAULT_MAX_STEPS).map_err(|e| e.to_string())
}

fn cycle(tr: &OrbitTrace) -> std::result::Result<(usize, usize, &FactorChain, &FactorChain), String> {
    match &tr.outcome {
        OrbitOutcome::Cycle { start, end, prefix, recurrence } => Ok((*start, *end, prefix, recurrence)),
        other => Err(format!("expected a cycle from {}, got {other:?}", tr.initial())),
    }
}

fn engine_ell3(_: &Suite) -> CheckResult {
    let f0 = ell3();
    let tr = run_orbit(&f0)?;
    let (start, end, _, rec) = cycle(&tr)?;
    ensure((start, end) == (0, 5), || format!("cycle closes at F{end} = F{start}"))?;
    ensure(*rec == FactorChain::block(-1, 7), || format!("recurrence {rec}"))?;
    let forms = [
        cf(&[1, 1], &[1, 0, 0, 1], &[0, 0, -1]),
        cf(&[0, 0, 1], &[1, 0, -2, -1], &[0, 0, -1, -1]),
        cf(&[1, 1], &[1, 0, -2, -1], &[0, 0, 0, 0, -1]),
        cf(&[1], &[1, 0, 0, 1], &[0, 0, -1, -1]),
    ];
    for (i, want) in forms.iter().enumerate() {
        ensure(fe_equal(&tr.states[i + 1], want), || format!("F{} = {}, expected {want}", i + 1, tr.states[i + 1]))?;
    }
    ensure(fe_equal(&tr.states[5], &f0), || "F5 differs from F0".into())?;
    Ok(format!("5 steps, {rec}"))
}

fn large_schroeder() -> QuadFE {
    // F = 1 + t x F + x F^2
    QuadFE::new(0, 1, RatSeries::from_poly(Poly::new(vec![Scalar::one(), sc("-t")])), poly(&[-1])).expect("valid")
}

fn shifted_motzkin() -> std::result::Result<QuadFE, String> {
    shift_out(&QuadFE::path_equation(1, &Scalar::one()).expect("valid"), 1).map(|s| s.fe).map_err(|e| e.to_string())
}

fn example_orbits() -> std::result::Result<Vec<(&'static str, OrbitTrace)>, String> {
    Ok(vec![
        ("l = 3", run_orbit(&ell3())?),
        ("Motzkin", run_orbit(&QuadFE::path_equation(1, &Scalar::t()).expect("valid"))?),
        ("aerated Schroeder", run_orbit(&QuadFE::path_equation(2, &Scalar::t()).expect("valid"))?),
        ("large Schroeder", run_orbit(&large_schroeder())?),
        ("shifted Motzkin", run_orbit(&shifted_motzkin()?)?),
    ])
}

fn predicted(tr: &OrbitTrace, what: &str, n_max: usize, want: impl Fn(usize) -> Scalar) -> std::result::Result<(), String> {
    let got: Vec<Scalar> = (1..=n_max).map(|n| tr.predicted_det(n).expect("cycle")).collect();
    match_each(what, &got, 1, want)
}

fn engine_examples(_: &Suite) -> CheckResult {
    let motzkin = run_orbit(&QuadFE::path_equation(1, &Scalar::t()).expect("valid"))?;
    let (start, end, _, rec) = cycle(&motzkin)?;
    ensure((start, end) == (0, 1) && *rec == FactorChain::block(1, 1), || format!("Motzkin: {rec}"))?;
    predicted(&motzkin, "Motzkin", 10, |_| Scalar::one())?;

    let sch = run_orbit(&QuadFE::path_equation(2, &Scalar::t()).expect("valid"))?;
    let (_, _, prefix, rec) = cycle(&sch)?;
    let want = FactorChain::block(1, 1).then(&FactorChain::scaling(sc("1+t"))).then(&FactorChain::block(1, 1));
    ensure(*prefix == FactorChain::identity() && *rec == want, || format!("aerated Schroeder: {rec}"))?;
    predicted(&sch, "aerated Schroeder", 8, |n| one_plus_t_pow(if n % 2 == 0 { n * n / 4 } else { (n * n - 1) / 4 }))?;

    let large = run_orbit(&large_schroeder())?;
    cycle(&large)?;
    predicted(&large, "large Schroeder", 8, |n| one_plus_t_pow(n * (n - 1) / 2))?;

    let shifted = run_orbit(&shifted_motzkin()?)?;
    let (_, _, _, rec) = cycle(&shifted)?;
    ensure(*rec == FactorChain::block(-1, 3), || format!("shifted Motzkin: {rec}"))?;
    predicted(&shifted, "shifted Motzkin", 18, |n| Scalar::from_int([1, 0, -1, -1, 0, 1][(n - 1) % 6]))?;
    Ok("Motzkin fixed point; (1+t)^(n-1) det H_(n-2); (1+t)^(n(n-1)/2); shifted Motzkin period 6".into())
}

fn soundness(_: &Suite) -> CheckResult {
    let mut pairs = 0;
    for (what, tr) in example_orbits()? {
        for i in 0..tr.steps.len() {
            let mut chain = FactorChain::identity();
            for j in i + 1..tr.states.len() {
                chain = chain.then(&tr.steps[j - 1].chain);
                chain_holds(&tr.states[i], &tr.states[j], &chain, 12)
                    .map_err(|n| format!("{what}: F{i} -> F{j} fails at n = {n}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} state pairs hold for n <= 12"))
}

fn shifted_ell3(s: &Suite) -> CheckResult {
    let prefixes: [[i64; 14]; 3] = [
        [0, -1, 0, 1, 1, 0, -1, 0, 1, 0, -1, -1, 0, 1],
        [1, 1, 1, 1, 0, 0, -1, -1, -1, -1, -1, 0, 0, 1],
        [1, -1, -1, 0, 0, 0, -1, -1, 1, 1, 0, 0, 0, 1],
    ];
    for (k, prefix) in (1..).zip(prefixes.iter()) {
        let d = s.dets(3, "1", k, 28);
        match_each(&format!("det H^{k}_n"), &d, 1, |n| Scalar::from_int(prefix[(n - 1) % 14]))?;
    }
    let tr = run_orbit(&shift_out(&ell3(), 1).map_err(|e| e.to_string())?.fe)?;
    let (_, _, _, rec) = cycle(&tr)?;
    ensure(rec.delta == 7 && rec.sign == -1 && rec.factors.is_empty(), || format!("first shift orbit: {rec}"))?;
    Ok(format!("three prefixes repeat through n = 28; first shift orbit {rec}"))
}

fn shift4_ell3(s: &Suite) -> CheckResult {
    let f = s.seq(3, "1", 100);
    let d4 = det_sequence(&f, 4, 40).expect("series long enough");
    let d0 = det_sequence(&f, 0, 40).expect("series long enough");
    let printed = [2, 3, 4, 0, 0, -4, -5, -6, -7, -8, 0, 0, 8, 9, 10, 11, 12, 0, 0, -12, -13, -14, -15, -16, 0, 0, 16];
    match_each("det H^4_n", &d4[..printed.len()], 1, |n| Scalar::from_int(printed[n - 1]))?;
    let four = Scalar::from_int(4);
    match_each("recurrence", &d4[7..], 8, |n| &(&four * &d0[n - 2]) - &d4[n - 8])?;
    let g0 = &f[2..];
    let dg = det_sequence(g0, 0, 20).expect("series long enough");
    match_each("det H_n(G0)", &dg, 1, |n| -&d0[n + 4])?;

    let f0 = ell3();
    let start = shift_out(&f0, 4).map_err(|e| e.to_string())?.fe;
    let tr = orbit(&start, 12).map_err(|e| e.to_string())?;
    ensure(tr.outcome == OrbitOutcome::NoCycle { steps: 12 }, || format!("outcome {:?}", tr.outcome))?;
    let g0_fe = shift_out(&f0, 2).map_err(|e| e.to_string())?.fe;
    let quarter = g0_fe
        .to_form()
        .substitute(&RatSeries::constant(sc("-1/4")), &RatSeries::one())
        .canonicalize()
        .map_err(|e| e.to_string())?;
    ensure(fe_equal(&tr.states[8], &quarter), || format!("eighth state {}", tr.states[8]))?;
    Ok("recurrence n = 8..40, G0 identity n = 1..20, no pure cycle within 12 steps".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_and_ids_are_unique() {
        for (i, c) in CRITERIA.iter().enumerate() {
            assert_eq!(c.id as usize, i + 1);
            assert!(CRITERIA.iter().filter(|d| d.name == c.name).count() == 1);
        }
    }

    #[test]
    fn filter_by_name_or_id() {
        let suite = Suite::default();
        let r = suite.run(Some("prop2")).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].passed, "{}", r[0]);
        assert_eq!(suite.run(Some("4")).unwrap()[0].name, "prop2");
        assert_eq!(suite.run(Some("nope")).unwrap_err(), Error::UnknownCriterion("nope".into()));
    }

    #[test]
    fn choose_is_monotone() {
        assert_eq!(choose(&[3, 2, 1], 2), vec![vec![3, 2], vec![3, 1], vec![2, 1]]);
        assert_eq!(choose(&[0, 1, 2, 3, 4], 3).len(), 10);
    }
}
