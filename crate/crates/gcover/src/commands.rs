//! Subcommand bodies. Each stage records checks, residuals and results into a
//! [`Report`] and returns its product for the next stage, or `None` once a
//! check has failed.

use crate::report::{canonical_basis, complex_json, element_json, fmt_complex, fmt_element, fmt_span, matrix_json, root_json, table, vector_json, Report};
use crate::schema::{Problem, Structure};
use gcover_core::algebra::{image_rank, is_simple, validate, Rep};
use gcover_core::covering::{
    check_unicite_hypotheses, covering_from_graded, equivalent, gcov_dimension_identity, graded_iso_up_to_shift, graded_module_from_covering, is_covering,
    is_graded_simple, is_thin, transport_covering, Classification, Covering, GradedModule,
};
use gcover_core::lattice::IntMatrix;
use gcover_core::linalg::rank;
use gcover_core::multiloop::{build_multiloop, loop_module};
use gcover_core::oracles::{brute_force_is_thin, OracleBudget};
use gcover_core::qtorus::{isotypic_decompose_dim, normal_form, qmatrix_from_operators, verify_normal_form, GammaMap, NormalForm, QTorusSpec};
use gcover_core::rng::SeededRng;
use gcover_core::twisting::{intertwiners_between, stabilizer, twist, twist_system_residual, TwistSystem};
use gcover_core::{ComplexMatrix, Tolerance, C64};
use serde_json::{json, Value};

/// Largest grading group whose dual is enumerated by the stabilizer search.
pub const CHARACTER_BUDGET: u64 = 256;

/// How thin coverings are parametrized on the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum VectorChoice {
    /// Coordinates in the module, or in the simple torus module when the length matches that instead.
    Given(Vec<C64>),
    /// This many seeded random vectors of the simple torus module.
    Sample(usize),
}

/// Marks `key` failed with the error text and returns `None`.
fn fail<T>(r: &mut Report, key: &str, e: impl ToString) -> Option<T> {
    let msg = e.to_string();
    r.check(key, false);
    r.result(&format!("{key}.error"), json!(msg));
    r.line(format!("{key}: {msg}"));
    None
}

fn ok_or_fail<T, E: ToString>(r: &mut Report, key: &str, v: Result<T, E>) -> Option<T> {
    match v {
        Ok(x) => Some(x),
        Err(e) => fail(r, key, e),
    }
}

fn residual_check(r: &mut Report, key: &str, value: f64, tol: &Tolerance, scale: f64) -> bool {
    r.residual(key, value);
    r.check(key, tol.accepts(value, scale))
}

/// The associative module, through the envelope for Lie problems.
pub fn module(p: &Problem, tol: &Tolerance, r: &mut Report) -> Option<Rep> {
    let rep = p.rep(tol);
    if matches!(p.structure, Structure::Lie { .. }) {
        let ok = rep.is_ok();
        r.check("lie.representation", ok);
    }
    ok_or_fail(r, "module", rep)
}

pub fn validate_stage(p: &Problem, tol: &Tolerance, r: &mut Report) -> Option<Rep> {
    if let Structure::Lie { lie, .. } = &p.structure {
        residual_check(r, "lie.axioms", lie.axiom_residual(), tol, 1.0);
    }
    let rep = module(p, tol, r)?;
    let v = validate(&rep, tol);
    for (name, value) in [("associativity", v.associativity), ("unit", v.unit), ("homogeneity", v.homogeneity), ("representation", v.representation)] {
        r.residual(name, value);
        r.check(name, !v.failures.iter().any(|f| f.starts_with(name)));
    }
    let n = rep.module_dim();
    let simple = is_simple(&rep, tol);
    r.result("algebra_dim", json!(rep.algebra().dim()));
    r.result("module_dim", json!(n));
    r.result("group", json!(rep.group().factors()));
    r.result("image_rank", json!(image_rank(&rep, tol)));
    r.result("simple", json!(simple));
    r.line(format!("group Z/{:?}, algebra dim {}, module dim {n}", rep.group().factors(), rep.algebra().dim()));
    r.line(format!("simple (rank of image = {}^2): {simple}", n));
    r.pass().then_some(rep)
}

pub fn stabilizer_stage(rep: &Rep, tol: &Tolerance, r: &mut Report) -> Option<TwistSystem> {
    let sys = ok_or_fail(r, "stabilizer", stabilizer(rep, CHARACTER_BUDGET, tol))?;
    let res = ok_or_fail(r, "stabilizer", twist_system_residual(rep, &sys))?;
    residual_check(r, "stabilizer.twist_system", res, tol, 1.0);
    let h = sys.h_group();
    let psi: Vec<(String, String)> = rep
        .group()
        .elements()
        .iter()
        .map(|g| (fmt_element(g), sys.psi(g).map(|x| fmt_element(&x)).unwrap_or_default()))
        .collect();
    r.result(
        "stabilizer",
        json!({
            "order": sys.subgroup.order(),
            "generators": sys.generators().iter().map(element_json).collect::<Vec<_>>(),
            "orders": sys.orders(),
            "operators": sys.operators.iter().map(matrix_json).collect::<Vec<_>>(),
            "scalars": sys.scalars.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
            "intertwiner_dims": sys.intertwiner_dims.iter().map(|(c, k)| json!({"character": element_json(c), "dim": k})).collect::<Vec<_>>(),
            "h_group": h.factors(),
            "psi": rep.group().elements().iter().map(|g| json!({"g": element_json(g), "psi": sys.psi(g).ok().map(|x| element_json(&x))})).collect::<Vec<_>>(),
        }),
    );
    r.line(format!("stabilizer: order {}, H = Z/{:?}", sys.subgroup.order(), h.factors()));
    let rows: Vec<Vec<String>> = sys
        .intertwiner_dims
        .iter()
        .map(|(c, k)| vec![fmt_element(c), k.to_string(), if *k == 1 { "yes".into() } else { "no".into() }])
        .collect();
    r.table.push_str(&table(&["character", "dim Hom(M, M^sigma)", "stabilizes"], &rows));
    let rows: Vec<Vec<String>> = psi.into_iter().map(|(g, x)| vec![g, x]).collect();
    r.table.push_str(&table(&["g", "psi(g)"], &rows));
    r.pass().then_some(sys)
}

pub fn torus_json(spec: &QTorusSpec) -> Value {
    json!({"L": spec.root_order(), "orders": spec.orders(), "exponents": spec.exponents()})
}

pub fn qtorus_stage(sys: &TwistSystem, tol: &Tolerance, r: &mut Report) -> Option<QTorusSpec> {
    let spec = ok_or_fail(r, "qtorus", qmatrix_from_operators(&sys.operators, sys.orders(), tol))?;
    r.check("qtorus", true);
    describe_torus(&spec, r);
    Some(spec)
}

pub fn describe_torus(spec: &QTorusSpec, r: &mut Report) {
    let gmap = GammaMap::new(spec);
    r.result("qtorus", torus_json(spec));
    r.result("gamma_kernel", json!({"index": gmap.index(), "basis": gmap.kernel.basis_vectors()}));
    r.line(format!("torus: L = {}, orders {:?}", spec.root_order(), spec.orders()));
    for row in spec.exponents() {
        r.line(format!("  {row:?}"));
    }
    r.line(format!("gamma kernel index {}", gmap.index()));
}

pub fn normal_form_stage(spec: &QTorusSpec, r: &mut Report) -> Option<NormalForm> {
    let nf = normal_form(spec);
    let unimodular = IntMatrix::from_i64(&nf.transform).is_unimodular();
    r.check("normal_form.unimodular", unimodular);
    r.check("normal_form.shape", verify_normal_form(spec, &nf));
    r.result(
        "normal_form",
        json!({
            "P": nf.transform,
            "blocks": nf.blocks.iter().map(|b| json!({"d": b.d, "zeta": root_json(b.zeta)})).collect::<Vec<_>>(),
            "block_count": nf.block_count(),
            "central_rank": nf.central_rank,
            "transformed": nf.transformed,
            "simple_dim": nf.simple_dim(),
        }),
    );
    r.line("P =");
    for row in &nf.transform {
        r.line(format!("  {row:?}"));
    }
    let rows: Vec<Vec<String>> = nf.blocks.iter().map(|b| vec![b.d.to_string(), format!("zeta_{}^{}", b.zeta.order(), b.zeta.exponent())]).collect();
    r.line(format!("{} block(s), central rank {}", nf.block_count(), nf.central_rank));
    if !rows.is_empty() {
        r.table.push_str(&table(&["d", "q"], &rows));
    }
    r.pass().then_some(nf)
}

pub fn isotypic_stage(rep: &Rep, sys: TwistSystem, tol: &Tolerance, r: &mut Report) -> Option<Classification> {
    let h_rep = ok_or_fail(r, "isotypic", sys.regrade(rep))?;
    let dec = ok_or_fail(r, "isotypic", isotypic_decompose_dim(rep.module_dim(), &sys.operators, sys.orders(), tol))?;
    residual_check(r, "isotypic.residual", dec.residual, tol, 1.0);
    let total: usize = dec.components.iter().map(|c| c.multiplicity() * dec.simple_dim()).sum();
    r.check("isotypic.dimension", total == rep.module_dim());
    r.result(
        "isotypic",
        json!({
            "simple_dim": dec.simple_dim(),
            "components": dec.components.iter().map(|c| json!({
                "label": element_json(&c.label),
                "multiplicity": c.multiplicity(),
                "central_character": c.central_character.iter().map(|z| root_json(*z)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }),
    );
    r.line(format!("simple torus module of dimension {}", dec.simple_dim()));
    let rows: Vec<Vec<String>> = dec
        .components
        .iter()
        .map(|c| {
            let chi: Vec<String> = c.central_character.iter().map(|z| format!("zeta_{}^{}", z.order(), z.exponent())).collect();
            vec![fmt_element(&c.label), c.multiplicity().to_string(), chi.join(" ")]
        })
        .collect();
    r.table.push_str(&table(&["label", "multiplicity", "central character"], &rows));
    r.pass().then_some(Classification { twist: sys, h_rep, decomposition: dec })
}

/// Stabilizer followed by the isotypic decomposition.
pub fn classify_stage(rep: &Rep, tol: &Tolerance, r: &mut Report) -> Option<Classification> {
    let sys = stabilizer_stage(rep, tol, r)?;
    isotypic_stage(rep, sys, tol, r)
}

fn torus_vectors(cl: &Classification, rep: &Rep, choice: &VectorChoice, tol: &Tolerance, r: &mut Report) -> Option<Vec<Vec<C64>>> {
    let k = cl.decomposition.simple_dim();
    match choice {
        VectorChoice::Given(v) if v.len() == rep.module_dim() => Some(vec![ok_or_fail(r, "thin.vector", cl.simple_coordinates(v, tol))?]),
        VectorChoice::Given(v) if v.len() == k => Some(vec![v.clone()]),
        VectorChoice::Given(v) => fail(r, "thin.vector", format!("expected {} or {k} coordinates, got {}", rep.module_dim(), v.len())),
        VectorChoice::Sample(count) => {
            let mut rng = SeededRng::new(tol.seed);
            Some((0..*count).map(|_| rng.complex_vec(k)).collect())
        }
    }
}

pub fn covering_json(c: &Covering) -> Value {
    Value::Array(
        c.components()
            .map(|(g, q)| json!({"degree": element_json(&g), "dim": q.cols(), "basis": canonical_basis(q).iter().map(|v| vector_json(v)).collect::<Vec<_>>()}))
            .collect(),
    )
}

fn covering_table(c: &Covering) -> String {
    let rows: Vec<Vec<String>> = c.components().map(|(g, q)| vec![fmt_element(&g), q.cols().to_string(), fmt_span(q)]).collect();
    table(&["degree", "dim", "component"], &rows)
}

pub fn thin_stage(cl: &Classification, rep: &Rep, choice: &VectorChoice, tol: &Tolerance, r: &mut Report) -> Option<Vec<Covering>> {
    let vectors = torus_vectors(cl, rep, choice, tol, r)?;
    let mut out = Vec::new();
    let mut listed = Vec::new();
    for (i, n) in vectors.iter().enumerate() {
        let c = ok_or_fail(r, "thin", cl.thin_g(n, tol))?;
        r.check(&format!("thin.{i}.covering"), is_covering(rep, &c, tol));
        r.check(&format!("thin.{i}.thin"), is_thin(rep, &c, tol));
        let sv: Vec<String> = n.iter().map(|z| fmt_complex(*z)).collect();
        r.line(format!("covering {i} from torus vector ({})", sv.join(", ")));
        r.table.push_str(&covering_table(&c));
        listed.push(json!({"torus_vector": vector_json(n), "components": covering_json(&c)}));
        out.push(c);
    }
    // equivalence classes among the produced coverings, first member as representative
    let mut class_of = Vec::with_capacity(out.len());
    let mut reps: Vec<usize> = Vec::new();
    for (i, c) in out.iter().enumerate() {
        match reps.iter().position(|&j| equivalent(&out[j], c, tol).is_some()) {
            Some(k) => class_of.push(k),
            None => {
                class_of.push(reps.len());
                reps.push(i);
            }
        }
    }
    r.result("coverings", Value::Array(listed));
    r.result("equivalence_classes", json!({"count": reps.len(), "class_of": class_of}));
    if out.len() > 1 {
        r.line(format!("{} covering(s) in {} equivalence class(es)", out.len(), reps.len()));
    }
    r.pass().then_some(out)
}

pub fn graded_stage(rep: &Rep, c: &Covering, tol: &Tolerance, r: &mut Report) -> Option<GradedModule> {
    let gm = ok_or_fail(r, "graded_module", graded_module_from_covering(rep, c, tol))?;
    r.check("graded_module.graded_simple", is_graded_simple(&gm, tol));
    let rows: Vec<Vec<String>> = gm.components().iter().map(|(g, d)| vec![fmt_element(g), d.to_string()]).collect();
    r.result(
        "graded_module",
        json!({
            "total_dim": gm.total_dim(),
            "components": gm.components().iter().map(|(g, d)| json!({"degree": element_json(g), "dim": d})).collect::<Vec<_>>(),
        }),
    );
    r.line(format!("graded module of total dimension {}", gm.total_dim()));
    r.table.push_str(&table(&["degree", "dim"], &rows));
    let rec = ok_or_fail(r, "roundtrip.graded", covering_from_graded(&gm, tol))?;
    let back = ok_or_fail(r, "roundtrip.graded", graded_module_from_covering(&rec.rep, &rec.covering, tol))?;
    let iso = graded_iso_up_to_shift(&back, &gm, tol);
    r.check("roundtrip.graded", iso.is_some());
    if let Some((shift, _)) = &iso {
        r.result("roundtrip.graded.shift", element_json(shift));
        r.line(format!("recovered covering regrades to an isomorphic graded module, shift {}", fmt_element(shift)));
    }
    r.pass().then_some(gm)
}

/// The deep checks of `certify`: brute-force thinness, the dimension identity
/// across `psi`, and the covering round trip.
fn deep_stage(rep: &Rep, cl: &Classification, c: &Covering, gm: &GradedModule, tol: &Tolerance, r: &mut Report) {
    match brute_force_is_thin(rep, c, &OracleBudget::default(), tol) {
        Ok(b) => {
            r.check("oracle.thin", b);
        }
        Err(e) => r.result("oracle.thin", json!(format!("skipped: {e}"))),
    }
    if let Some(rows) = ok_or_fail(r, "gcov.dimensions", gcov_dimension_identity(rep, &cl.twist, tol)) {
        r.check("gcov.dimensions", rows.iter().all(|(_, a, b)| a == b));
    }
    let hyp = check_unicite_hypotheses(rep.algebra(), tol);
    r.result("uniqueness_hypotheses", json!(hyp.holds()));
    let Some(rec) = ok_or_fail(r, "roundtrip.covering", covering_from_graded(gm, tol)) else { return };
    let Some(moved) = ok_or_fail(r, "roundtrip.covering", transport_covering(&rec.rep, &rec.covering, rep, tol)) else { return };
    r.check("roundtrip.covering", equivalent(c, &moved, tol).is_some());
}

pub fn validate_cmd(p: &Problem, tol: &Tolerance) -> Report {
    let mut r = Report::default();
    validate_stage(p, tol, &mut r);
    r.check_lines();
    r
}

pub fn stabilizer_cmd(p: &Problem, tol: &Tolerance) -> Report {
    let mut r = Report::default();
    if let Some(rep) = module(p, tol, &mut r) {
        stabilizer_stage(&rep, tol, &mut r);
    }
    r.check_lines();
    r
}

pub fn qtorus_cmd(p: &Problem, tol: &Tolerance) -> Report {
    let mut r = Report::default();
    if let Some(sys) = module(p, tol, &mut r).and_then(|rep| stabilizer_stage(&rep, tol, &mut r)) {
        qtorus_stage(&sys, tol, &mut r);
    }
    r.check_lines();
    r
}

/// Normal form of a torus given directly, or read off a problem's stabilizer.
pub fn normal_form_cmd(input: Result<&QTorusSpec, &Problem>, tol: &Tolerance) -> Report {
    let mut r = Report::default();
    match input {
        Ok(spec) => {
            describe_torus(spec, &mut r);
            normal_form_stage(spec, &mut r);
        }
        Err(p) => {
            let spec = module(p, tol, &mut r)
                .and_then(|rep| stabilizer_stage(&rep, tol, &mut r))
                .and_then(|sys| qtorus_stage(&sys, tol, &mut r));
            if let Some(spec) = spec {
                normal_form_stage(&spec, &mut r);
            }
        }
    }
    r.check_lines();
    r
}

pub fn isotypic_cmd(p: &Problem, tol: &Tolerance) -> Report {
    let mut r = Report::default();
    if let Some(rep) = module(p, tol, &mut r) {
        classify_stage(&rep, tol, &mut r);
    }
    r.check_lines();
    r
}

pub fn thin_cmd(p: &Problem, choice: &VectorChoice, tol: &Tolerance) -> Report {
    let mut r = Report::default();
    if let Some(rep) = module(p, tol, &mut r) {
        let mut scratch = Report::default();
        if let Some(cl) = classify_stage(&rep, tol, &mut scratch) {
            thin_stage(&cl, &rep, choice, tol, &mut r);
        } else {
            r = scratch;
        }
    }
    r.check_lines();
    r
}

pub fn graded_module_cmd(p: &Problem, choice: &VectorChoice, tol: &Tolerance) -> Report {
    let mut r = Report::default();
    if let Some(rep) = module(p, tol, &mut r) {
        let mut scratch = Report::default();
        match classify_stage(&rep, tol, &mut scratch).map(|cl| thin_stage(&cl, &rep, choice, tol, &mut scratch)) {
            Some(Some(covs)) => {
                graded_stage(&rep, &covs[0], tol, &mut r);
            }
            _ => r = scratch,
        }
    }
    r.check_lines();
    r
}

/// Invertible member of a seeded random combination of `homs`, if any.
fn invertible_combination(homs: &[ComplexMatrix], seed: u64, tol: &Tolerance) -> bool {
    let Some(first) = homs.first() else { return false };
    if first.rows() != first.cols() {
        return false;
    }
    let mut rng = SeededRng::new(seed);
    let mut m = ComplexMatrix::zeros(first.rows(), first.cols());
    for h in homs {
        m.axpy(rng.complex(), h);
    }
    rank(&m, tol) == m.rows()
}

/// Module isomorphism, twist relations and graded comparison of two problems
/// over the same graded algebra.
pub fn compare_cmd(a: &Problem, b: &Problem, tol: &Tolerance) -> Result<Report, String> {
    let mut r = Report::default();
    let (Some(ra), Some(rb)) = (module(a, tol, &mut r), module(b, tol, &mut r)) else {
        r.check_lines();
        return Ok(r);
    };
    if ra.algebra() != rb.algebra() {
        return Err("the two problem files describe different graded algebras".into());
    }
    let homs = intertwiners_between(&ra, &rb, tol).map_err(|e| e.to_string())?;
    let iso = invertible_combination(&homs, tol.seed, tol);
    let mut related = Vec::new();
    for sigma in ra.group().characters() {
        let tw = twist(&rb, &sigma).map_err(|e| e.to_string())?;
        let h = intertwiners_between(&ra, &tw, tol).map_err(|e| e.to_string())?;
        if invertible_combination(&h, tol.seed, tol) {
            related.push(sigma.as_element());
        }
    }
    r.result("hom_dim", json!(homs.len()));
    r.result("isomorphic", json!(iso));
    r.result("twists_to_b", Value::Array(related.iter().map(element_json).collect()));
    r.line(format!("dim Hom(a, b) = {}, isomorphic: {iso}", homs.len()));
    let tw: Vec<String> = related.iter().map(fmt_element).collect();
    r.line(format!("characters sigma with a = b^sigma: {}", if tw.is_empty() { "none".to_string() } else { tw.join(" ") }));
    // graded modules of one sampled thin covering on each side
    let choice = VectorChoice::Sample(1);
    let mut graded = Vec::new();
    for (side, rep) in [("a", &ra), ("b", &rb)] {
        let mut scratch = Report::default();
        let gm = classify_stage(rep, tol, &mut scratch)
            .and_then(|cl| thin_stage(&cl, rep, &choice, tol, &mut scratch))
            .and_then(|c| graded_module_from_covering(rep, &c[0], tol).ok());
        if gm.is_none() {
            r.line(format!("{side}: no thin covering (module not simple or classification failed)"));
        }
        graded.push(gm);
    }
    if let [Some(ga), Some(gb)] = &graded[..] {
        let shift = graded_iso_up_to_shift(ga, gb, tol);
        r.result("graded_isomorphic", json!(shift.is_some()));
        r.result("graded_shift", shift.as_ref().map_or(Value::Null, |(s, _)| element_json(s)));
        r.line(format!("graded modules of sampled thin coverings isomorphic up to shift: {}", shift.is_some()));
    }
    r.check_lines();
    Ok(r)
}

pub fn multiloop_cmd(p: &Problem, cutoff: Option<u32>, tol: &Tolerance) -> Result<Report, String> {
    let Structure::Lie { lie, action } = &p.structure else {
        return Err("multiloop needs a problem with \"lie\": true".into());
    };
    let data = p.multiloop.as_ref().ok_or("multiloop needs a \"multiloop\" section with the epimorphism")?;
    let d = cutoff.or(data.cutoff).ok_or("no cutoff: pass --cutoff or set multiloop.cutoff")?;
    let mut r = Report::default();
    let Some(ml) = ok_or_fail(&mut r, "multiloop", build_multiloop(lie, &data.epimorphism, d, tol)) else {
        r.check_lines();
        return Ok(r);
    };
    residual_check(&mut r, "multiloop.axioms", ml.axiom_residual(), tol, 1.0);
    let basis: Vec<Value> = ml
        .basis()
        .iter()
        .enumerate()
        .map(|(k, (i, a))| json!({"index": k, "base": i, "exponent": a, "degree": element_json(&ml.reduce(a))}))
        .collect();
    let mut brackets = Vec::new();
    for p_ in 0..ml.dim() {
        for q in p_ + 1..ml.dim() {
            if let Some(v) = ml.bracket(p_, q) {
                let terms: Vec<Value> = v.iter().enumerate().filter(|(_, z)| z.norm() > tol.eps).map(|(k, z)| json!([k, complex_json(*z)])).collect();
                if !terms.is_empty() {
                    brackets.push(json!({"p": p_, "q": q, "terms": terms}));
                }
            }
        }
    }
    r.result("multiloop", json!({"cutoff": d, "dim": ml.dim(), "basis": basis, "brackets": brackets}));
    r.line(format!("truncated multiloop algebra, cutoff {d}: dimension {}", ml.dim()));
    let rows: Vec<Vec<String>> = ml
        .basis()
        .iter()
        .enumerate()
        .map(|(k, (i, a))| vec![k.to_string(), format!("x_{i} t^{a:?}"), fmt_element(&ml.reduce(a))])
        .collect();
    r.table.push_str(&table(&["index", "element", "degree"], &rows));
    // the loop module of a sampled thin covering, when the envelope module is simple
    let mut scratch = Report::default();
    let cov = module(p, tol, &mut scratch)
        .filter(|rep| is_simple(rep, tol))
        .and_then(|rep| classify_stage(&rep, tol, &mut scratch).map(|cl| (rep, cl)))
        .and_then(|(rep, cl)| thin_stage(&cl, &rep, &VectorChoice::Sample(1), tol, &mut scratch).map(|c| (rep, c)));
    match cov {
        Some((rep, covs)) => {
            if let Some(lm) = ok_or_fail(&mut r, "loop_module", loop_module(&ml, &rep, action, &covs[0], tol)) {
                residual_check(&mut r, "loop_module.commutator", lm.commutator_residual, tol, 1.0);
                residual_check(&mut r, "loop_module.closure", lm.closure_residual, tol, 1.0);
                r.result(
                    "loop_module",
                    json!({
                        "dim": lm.dim(),
                        "components": lm.components.iter().map(|(a, q)| json!({"exponent": a, "dim": q.cols()})).collect::<Vec<_>>(),
                        "action_blocks": lm.action.len(),
                    }),
                );
                r.line(format!("loop module of a sampled thin covering: dimension {}, {} components", lm.dim(), lm.components.len()));
            }
        }
        None => r.line("module is not simple; loop module skipped"),
    }
    r.check_lines();
    Ok(r)
}

/// Every stage in order, stopping at the first failed check.
pub fn certify_cmd(p: &Problem, deep: bool, tol: &Tolerance) -> Report {
    let mut r = Report::default();
    let rep = validate_stage(p, tol, &mut r);
    let rep = rep.filter(|rep| r.check("simple", is_simple(rep, tol)));
    let cl = rep.as_ref().and_then(|rep| {
        let sys = stabilizer_stage(rep, tol, &mut r)?;
        let spec = qtorus_stage(&sys, tol, &mut r)?;
        normal_form_stage(&spec, &mut r)?;
        isotypic_stage(rep, sys, tol, &mut r)
    });
    if let (Some(rep), Some(cl)) = (&rep, &cl) {
        if let Some(covs) = thin_stage(cl, rep, &VectorChoice::Sample(3), tol, &mut r) {
            if let Some(gm) = graded_stage(rep, &covs[0], tol, &mut r) {
                if deep {
                    deep_stage(rep, cl, &covs[0], &gm, tol, &mut r);
                }
            }
        }
    }
    r.table.clear();
    match &r.first_failure {
        Some(f) => r.line(format!("certify: FAILED at {f}")),
        None => r.line(format!("certify{}: all {} checks pass", if deep { " --deep" } else { "" }, r.checks.len())),
    }
    r.check_lines();
    r
}
