//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::collections::BTreeMap;
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;

use rand::Rng;

use toric_dvr::arith::{
    elementary_symmetric, frac, padic_val, rat, Extended, FpMatrix, QMatrix, Rational,
    ValuationConfig,
};
use toric_dvr::buildings::{
    epsilon, link_norm, norms_equal, unlink_norm, AdaptedNorm, OLattice, ResidueValuation,
};
use toric_dvr::bundle::{check_morphism, BundleChart, Character, ToricBundleData};
use toric_dvr::chern::{chern_class, chern_generic, chern_total, epsilon_oracle};
use toric_dvr::cli::InputDocument;
use toric_dvr::polyhedral::{
    build_fan, check_regular_complete, cone_over, recession_fan, slice, Fan, Slice,
};
use toric_dvr::ppoly::{pp_membership, pp_ring, PPClass, PPError, PiecewisePoly, Poly, RingOp};
use toric_dvr::sampling;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

const VALID: [&str; 6] = [
    "p1_rank1",
    "p1_split_rank2",
    "p1_nonsplit_rank2",
    "p1_two_vertex",
    "p2_tangent_rank2",
    "two_vertex_split_rank2",
];
const SPLIT: [&str; 2] = ["p1_split_rank2", "two_vertex_split_rank2"];

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
}

fn load(name: &str) -> ToricBundleData {
    let text = fs::read_to_string(fixture_path(name)).expect("fixture readable");
    InputDocument::parse(&text)
        .expect("fixture parses")
        .to_bundle()
        .expect("fixture builds")
}

fn cfg2() -> ValuationConfig {
    ValuationConfig::new(2).unwrap()
}

/// Same fan and bases, new characters per chart (in chart order).
fn with_characters(e: &ToricBundleData, chars: &[Vec<(Vec<i64>, i64)>]) -> ToricBundleData {
    let r = chars[0].len();
    let charts = e
        .charts()
        .iter()
        .zip(chars)
        .map(|(c, cs)| BundleChart {
            cone: c.cone,
            basis: if r == e.rank() {
                c.basis.clone()
            } else {
                QMatrix::identity(r)
            },
            characters: cs.iter().map(|(u, k)| Character::new(u.clone(), *k)).collect(),
        })
        .collect();
    ToricBundleData::new(e.fan().clone(), r, charts, e.cfg()).unwrap()
}

fn pairing(u: &[i64], y: &[Rational]) -> Rational {
    u.iter().zip(y).map(|(&a, b)| rat(a) * b).sum()
}

fn parts_of(class: &PPClass) -> BTreeMap<Vec<i64>, PiecewisePoly> {
    class
        .vertices()
        .map(|v| (v.clone(), class.part(v).unwrap().clone()))
        .collect()
}

fn oracle_equivalence() -> Outcome {
    let mut checked = 0usize;
    for name in VALID {
        let e = load(name);
        let n = e.fan().n();
        for i in 1..=e.rank() {
            let class = chern_class(&e, i).map_err(|err| format!("{name}: {err}"))?;
            for v in e.fan().sigma1().vertices() {
                let star = class.star(&v).unwrap();
                let part = class.part(&v).unwrap();
                for &c in star.fan().maximal_indices() {
                    let mut rng = sampling::rng(17 + c as u64);
                    let pts = sampling::rational_points(star.fan().cone(c).rays(), n, 100, &mut rng);
                    ensure!(pts.len() == 100, "{name}: only {} sample points", pts.len());
                    for y in pts {
                        let lhs = part.piece(c).unwrap().eval(&y).unwrap();
                        let rhs = epsilon_oracle(&e, &v, i, &y).map_err(|err| err.to_string())?;
                        ensure!(
                            lhs == rhs,
                            "{name}: c_{i} at vertex {v:?}, y = {y:?}: {lhs} != {rhs}"
                        );
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} exact comparisons"))
}

fn perturbed(
    class: &PPClass,
    vertex: &[i64],
    cone: usize,
    delta: &Poly,
) -> BTreeMap<Vec<i64>, PiecewisePoly> {
    let mut parts = parts_of(class);
    let f = &parts[vertex];
    let mut pieces = f.pieces().clone();
    let old = pieces[&cone].clone();
    pieces.insert(cone, &old + delta);
    let g = PiecewisePoly::new(f.fan().clone(), pieces, None).unwrap();
    parts.insert(vertex.to_vec(), g);
    parts
}

fn pp_membership_checks() -> Outcome {
    let mut certified = 0;
    for name in VALID {
        let e = load(name);
        for i in 0..=e.rank() {
            let class = chern_class(&e, i).map_err(|err| format!("{name}: {err}"))?;
            pp_membership(class.complex(), parts_of(&class), class.degree())
                .map_err(|err| format!("{name} c_{i}: {err}"))?;
            certified += 1;
        }
    }

    // a linear coefficient changed on one star cone of P^2 breaks continuity
    let e = load("p2_tangent_rank2");
    let c1 = chern_class(&e, 1).unwrap();
    let v = vec![0, 0];
    let cone = c1.star(&v).unwrap().fan().maximal_indices()[0];
    let bad = perturbed(&c1, &v, cone, &Poly::var(2, 0));
    let r = pp_membership(c1.complex(), bad, Some(1));
    ensure!(
        matches!(r, Err(PPError::ConditionIFailed { .. })),
        "perturbed P^2 class: {r:?}"
    );

    // the same change on a bounded cell seen from only one of its vertices
    let e = load("p1_two_vertex");
    let c1 = chern_class(&e, 1).unwrap();
    let star = c1.star(&[0]).unwrap();
    let cone = star.fan().index_of(&[vec![1]]).unwrap();
    let bad = perturbed(&c1, &[0], cone, &Poly::var(1, 0));
    let r = pp_membership(c1.complex(), bad, Some(1));
    ensure!(
        matches!(r, Err(PPError::ConditionIIFailed { .. })),
        "perturbed two-vertex class: {r:?}"
    );

    // a constant term destroys homogeneity
    let e = load("p1_rank1");
    let c1 = chern_class(&e, 1).unwrap();
    let cone = c1.star(&[0]).unwrap().fan().maximal_indices()[0];
    let bad = perturbed(&c1, &[0], cone, &Poly::one(1));
    let r = pp_membership(c1.complex(), bad, Some(1));
    ensure!(
        matches!(r, Err(PPError::ConditionIFailed { .. })),
        "perturbed rank-1 class: {r:?}"
    );
    Ok(format!("{certified} classes certified, 3 mutations rejected"))
}

fn rank_one_law() -> Outcome {
    let x = Poly::var(1, 0);
    for name in ["p1_rank1", "p1_two_vertex"] {
        let e = load(name);
        let c1 = chern_class(&e, 1).unwrap();
        for v in e.fan().sigma1().vertices() {
            let star = c1.star(&v).unwrap();
            for &c in star.fan().maximal_indices() {
                let cone = e.fan().cone_of_cell(star.cell_of_cone(c));
                let u = &e.chart_for_cone(cone).unwrap().characters[0].u;
                ensure!(
                    c1.part(&v).unwrap().piece(c) == Some(&Poly::linear_form_int(u)),
                    "{name}: piece at {v:?} differs from the chart form {u:?}"
                );
            }
        }
        let g = chern_generic(&e, 1).unwrap();
        let generic = e.restrict_to_generic().unwrap();
        for chart in &generic.charts {
            ensure!(
                g.piece(chart.cone) == Some(&Poly::linear_form_int(&chart.u[0])),
                "{name}: generic piece differs from the chart form"
            );
        }
        // both models of P^1 carry the same generic fiber: x on +, 0 on -
        let plus = g.fan().index_of(&[vec![1]]).unwrap();
        let minus = g.fan().index_of(&[vec![-1]]).unwrap();
        ensure!(
            g.piece(plus) == Some(&x) && g.piece(minus) == Some(&Poly::zero(1)),
            "{name}: generic class is not (x, 0)"
        );
    }
    let e = load("p1_rank1");
    let c1 = chern_class(&e, 1).unwrap();
    let star = c1.star(&[0]).unwrap();
    let plus = star.fan().index_of(&[vec![1]]).unwrap();
    let minus = star.fan().index_of(&[vec![-1]]).unwrap();
    ensure!(
        c1.part(&[0]).unwrap().piece(plus) == Some(&x)
            && c1.part(&[0]).unwrap().piece(minus) == Some(&Poly::zero(1)),
        "rank-1 class is not (x, 0)"
    );
    Ok("rank-1 pieces and generic pieces match the chart forms".into())
}

fn whitney_sum() -> Outcome {
    for name in SPLIT {
        let e = load(name);
        let total = chern_total(&e).unwrap();
        let unit = PPClass::unit(e.fan().sigma1()).unwrap();
        let mut product = unit.clone();
        for j in 0..e.rank() {
            let chars: Vec<Vec<(Vec<i64>, i64)>> = e
                .charts()
                .iter()
                .map(|c| vec![(c.characters[j].u.clone(), c.characters[j].k)])
                .collect();
            let line = with_characters(&e, &chars);
            ensure!(line.validate(0, 8).passed, "{name}: summand {j} does not glue");
            let c1 = chern_class(&line, 1).unwrap();
            let factor = pp_ring(&unit, &c1, RingOp::Add).map_err(|err| err.to_string())?;
            product = pp_ring(&product, &factor, RingOp::Mul).map_err(|err| err.to_string())?;
        }
        for v in total.vertices() {
            ensure!(
                total.part(v).unwrap().pieces() == product.part(v).unwrap().pieces(),
                "{name}: total class differs from the product at vertex {v:?}"
            );
        }
    }
    Ok(format!("{} split fixtures", SPLIT.len()))
}

fn random_invertible_fp<R: Rng>(r: usize, p: u64, rng: &mut R) -> FpMatrix {
    loop {
        let cols: Vec<Vec<u64>> = (0..r)
            .map(|_| (0..r).map(|_| rng.gen_range(0..p)).collect())
            .collect();
        let m = FpMatrix::from_columns(&cols, p);
        if m.is_invertible() {
            return m;
        }
    }
}

fn random_unit_values<R: Rng>(r: usize, rng: &mut R) -> Vec<Rational> {
    (0..r)
        .map(|_| {
            let d = rng.gen_range(1..=6);
            frac(rng.gen_range(0..d), d)
        })
        .collect()
}

fn link_roundtrip() -> Outcome {
    let cfg3 = ValuationConfig::new(3).unwrap();
    let mut lattices = vec![
        OLattice::standard(2, cfg2()),
        OLattice::new(
            QMatrix::from_int_rows(&[vec![1, 1], vec![0, 3]]),
            vec![1, -1],
            cfg2(),
        )
        .unwrap(),
        OLattice::new(
            QMatrix::from_int_rows(&[vec![1, 2, 0], vec![0, 1, 1], vec![1, 0, 3]]),
            vec![0, 2, -1],
            cfg3,
        )
        .unwrap(),
    ];
    for name in ["p1_nonsplit_rank2", "p2_tangent_rank2", "two_vertex_split_rank2"] {
        let e = load(name);
        for v in e.fan().sigma1().vertices() {
            lattices.push(e.restrict_to_vertex(&v).unwrap().lattice);
        }
    }
    let mut rng = sampling::rng(5);
    let mut count = 0;
    for lattice in &lattices {
        let r = lattice.rank();
        let cfg = lattice.cfg();
        let p = cfg.p();
        for _ in 0..50 {
            // residue side first
            let c = random_invertible_fp(r, p, &mut rng);
            let values = random_unit_values(r, &mut rng);
            let rho = ResidueValuation::new(c.clone(), values.clone()).unwrap();
            let w = unlink_norm(lattice, &rho).map_err(|err| err.to_string())?;
            let back = link_norm(lattice, &w).map_err(|err| err.to_string())?;
            ensure!(back == rho, "link(unlink(rho)) != rho");
            for (i, value) in values.iter().enumerate() {
                let expect = Extended::Finite(value.clone());
                ensure!(
                    w.norm_eval(&w.basis().column(i)) == expect,
                    "omega(b_i) != value"
                );
                ensure!(rho.eval(&c.column(i)) == expect, "residue value mismatch");
            }

            // norm side: an O-basis of the lattice changed by GL_r(O)
            let m = loop {
                let rows: Vec<Vec<i64>> = (0..r)
                    .map(|_| (0..r).map(|_| rng.gen_range(-3..=3)).collect())
                    .collect();
                let m = QMatrix::from_int_rows(&rows);
                if FpMatrix::reduce(&m, cfg).is_some_and(|f| f.is_invertible()) {
                    break m;
                }
            };
            let values = random_unit_values(r, &mut rng);
            let w = AdaptedNorm::new(rat(1), lattice.o_basis().mul(&m), values.clone(), cfg)
                .unwrap();
            let rho = link_norm(lattice, &w).map_err(|err| err.to_string())?;
            let again = unlink_norm(lattice, &rho).map_err(|err| err.to_string())?;
            ensure!(
                norms_equal(&again, &w).unwrap(),
                "unlink(link(omega)) != omega"
            );
            for (i, value) in values.iter().enumerate() {
                ensure!(
                    rho.eval(&rho.basis().column(i)) == Extended::Finite(value.clone()),
                    "omega-bar(b-bar_i) != omega(b_i)"
                );
            }
            count += 2;
        }
    }
    Ok(format!("{count} round trips on {} lattices", lattices.len()))
}

fn fixture_norms() -> Vec<AdaptedNorm> {
    let mut norms = Vec::new();
    for name in VALID {
        let e = load(name);
        let ambient = e.fan().n() + 1;
        for v in e.fan().sigma1().vertices() {
            let x: Vec<Rational> = v.iter().map(|&a| rat(a)).chain([rat(1)]).collect();
            norms.push(e.eval_phi(&x).unwrap());
        }
        for &c in e.fan().fan().maximal_indices() {
            let mut rng = sampling::rng(c as u64);
            let rays = e.fan().fan().cone(c).rays().to_vec();
            for x in sampling::rational_points(&rays, ambient, 2, &mut rng) {
                norms.push(e.eval_phi(&x).unwrap());
            }
        }
    }
    norms
}

fn building_axioms() -> Outcome {
    let mut rng = sampling::rng(11);
    let norms = fixture_norms();
    for w in &norms {
        let cfg = w.cfg();
        let r = w.rank();
        let vector = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<Rational> {
            if rng.gen_range(0..10) == 0 {
                vec![rat(0); r]
            } else {
                (0..r)
                    .map(|_| frac(rng.gen_range(-8..=8), rng.gen_range(1..=4)))
                    .collect()
            }
        };
        for _ in 0..1000 {
            let e = vector(&mut rng);
            let e1 = vector(&mut rng);
            let e2 = vector(&mut rng);
            let lambda = if rng.gen_range(0..10) == 0 {
                rat(0)
            } else {
                frac(rng.gen_range(-12..=12), rng.gen_range(1..=12)) * cfg.power(rng.gen_range(-2..=2))
            };
            let scaled: Vec<Rational> = e.iter().map(|c| c * &lambda).collect();
            let expect = match (padic_val(&lambda, cfg), w.norm_eval(&e)) {
                (Extended::Finite(k), Extended::Finite(a)) => {
                    Extended::Finite(w.level() * rat(k) + a)
                }
                _ => Extended::Infinity,
            };
            ensure!(w.norm_eval(&scaled) == expect, "homogeneity fails");
            let sum: Vec<Rational> = e1.iter().zip(&e2).map(|(a, b)| a + b).collect();
            let lower = std::cmp::min(w.norm_eval(&e1), w.norm_eval(&e2));
            ensure!(w.norm_eval(&sum) >= lower, "ultrametric inequality fails");
            let zero = e.iter().all(|c| *c == rat(0));
            ensure!(
                w.norm_eval(&e).is_infinite() == zero,
                "infinite value on a nonzero vector"
            );
        }
    }

    // epsilon by dimension jumps against e_i of the values
    let mut level_zero = 0;
    for name in VALID {
        let e = load(name);
        let n = e.fan().n();
        for v in e.fan().sigma1().vertices() {
            let res = e.restrict_to_vertex(&v).unwrap();
            for &c in res.star.fan().maximal_indices() {
                let mut rng = sampling::rng(c as u64 + 3);
                for y in sampling::rational_points(res.star.fan().cone(c).rays(), n, 10, &mut rng) {
                    let phi = res.phi(&y).unwrap();
                    let sym = elementary_symmetric(phi.values());
                    for i in 1..=e.rank() {
                        ensure!(epsilon(&phi, i).unwrap() == sym[i], "{name}: epsilon mismatch");
                    }
                    level_zero += 1;
                }
            }
        }
        let sigma0 = e.fan().sigma0().clone();
        for &c in sigma0.maximal_indices() {
            let mut rng = sampling::rng(c as u64 + 9);
            for x in sampling::lattice_points(sigma0.cone(c).rays(), n + 1, 5, &mut rng) {
                let w = e.eval_phi(&x).unwrap();
                let sym = elementary_symmetric(w.values());
                for i in 1..=e.rank() {
                    ensure!(epsilon(&w, i).unwrap() == sym[i], "{name}: level-0 epsilon mismatch");
                }
                level_zero += 1;
            }
        }
    }
    Ok(format!(
        "{} norms x 1000 samples, {level_zero} level-zero norms",
        norms.len()
    ))
}

fn combinatorial_round_trips() -> Outcome {
    for name in VALID {
        let e = load(name);
        let cx = e.fan().sigma1();
        let fan = cone_over(cx).map_err(|err| err.to_string())?;
        ensure!(
            slice(&fan, 1).unwrap() == Slice::Complex(cx.clone()),
            "{name}: height-one slice differs"
        );
        let rec = recession_fan(cx).map_err(|err| err.to_string())?;
        ensure!(
            slice(&fan, 0).unwrap() == Slice::Fan(rec),
            "{name}: height-zero slice differs from the recession fan"
        );
        let report = check_regular_complete(e.fan().fan());
        ensure!(report.complete && report.regular, "{name}: {:?}", report.failures);
    }
    let skew = Fan::new(2, &[vec![vec![1, 1], vec![1, -1]]]).unwrap();
    ensure!(!check_regular_complete(&skew).regular, "cone((1,1),(1,-1)) classified regular");
    let upper = build_fan(2, &[vec![vec![1, 1], vec![-1, 1]]]).unwrap();
    let report = check_regular_complete(&upper);
    ensure!(!report.regular && !report.complete, "cone((1,1),(-1,1)): {report:?}");
    let half = build_fan(2, &[vec![vec![0, 1], vec![1, 0]]]).unwrap();
    let report = check_regular_complete(&half);
    ensure!(report.regular && !report.complete, "single cone: {report:?}");
    Ok(format!("{} complexes, 3 classification cases", VALID.len()))
}

fn restriction_compatibility() -> Outcome {
    let half = frac(1, 2);
    let mut count = 0;
    for name in VALID {
        let e = load(name);
        let n = e.fan().n();
        let cx = e.fan().sigma1();
        for v in cx.vertices() {
            let res = e.restrict_to_vertex(&v).unwrap();
            for chart in &res.charts {
                let cell = cx.cell(chart.cell);
                let mut rng = sampling::rng(chart.star_cone as u64 + 101);
                let rays = res.star.fan().cone(chart.star_cone).rays().to_vec();
                for y in sampling::rational_points(&rays, n, 20, &mut rng) {
                    let slopes: Vec<Rational> = chart.u.iter().map(|u| pairing(u, &y)).collect();
                    let steepest = slopes
                        .iter()
                        .map(|s| if *s < rat(0) { -s.clone() } else { s.clone() })
                        .max()
                        .unwrap();
                    let mut t = &half / (rat(1) + steepest);
                    let point = |t: &Rational| -> Vec<Rational> {
                        v.iter().zip(&y).map(|(&a, b)| rat(a) + t * b).collect()
                    };
                    while !cell.contains(&point(&t)) {
                        t /= rat(2);
                    }
                    let mut x = point(&t);
                    x.push(rat(1));
                    let w = e.eval_phi(&x).unwrap().shift(&half);
                    let linked = link_norm(&res.lattice, &w).map_err(|err| err.to_string())?;
                    let predicted = ResidueValuation::new(
                        chart.basis.clone(),
                        slopes.iter().map(|s| &t * s + &half).collect(),
                    )
                    .unwrap();
                    ensure!(
                        linked == predicted,
                        "{name}: vertex {v:?}, y = {y:?}, t = {t}"
                    );
                    count += 1;
                }
            }
        }
    }
    Ok(format!("{count} points"))
}

fn morphism_decisions() -> Outcome {
    let e = load("p1_rank1");
    let trivial = with_characters(&e, &[vec![(vec![0], 0)], vec![(vec![0], 0)]]);
    let id = QMatrix::identity(1);
    ensure!(check_morphism(&trivial, &trivial, &id).unwrap().holds, "identity rejected");
    ensure!(
        check_morphism(&trivial, &trivial, &QMatrix::from_int_rows(&[vec![2]])).unwrap().holds,
        "multiplication by p rejected"
    );
    let r = check_morphism(&e, &trivial, &id).unwrap();
    ensure!(!r.holds, "character drop accepted");
    ensure!(
        r.failures.iter().all(|f| f.cone.contains(&vec![1, 0])),
        "failure outside cone(+)"
    );
    // pointwise oracle at (1,1)
    let x = [rat(1), rat(1)];
    ensure!(
        e.eval_phi(&x).unwrap().norm_eval(&[rat(1)]) == Extended::Finite(rat(1))
            && trivial.eval_phi(&x).unwrap().norm_eval(&[rat(1)]) == Extended::Finite(rat(0)),
        "pointwise values at (1,1)"
    );

    let mut rng = sampling::rng(23);
    let mut scalings = 0;
    for name in VALID {
        let e = load(name);
        let r = e.rank();
        ensure!(
            check_morphism(&e, &e, &QMatrix::identity(r)).unwrap().holds,
            "{name}: identity rejected"
        );
        let p = e.cfg();
        for _ in 0..5 {
            let k = rng.gen_range(0..=4);
            let mut f = QMatrix::identity(r);
            for j in 0..r {
                f.scale_column(j, &p.power(k));
            }
            ensure!(check_morphism(&e, &e, &f).unwrap().holds, "{name}: p^{k} rejected");
            let k = rng.gen_range(-3..=-1);
            let mut f = QMatrix::identity(r);
            for j in 0..r {
                f.scale_column(j, &p.power(k));
            }
            ensure!(!check_morphism(&e, &e, &f).unwrap().holds, "{name}: p^{k} accepted");
            scalings += 2;
        }
    }
    Ok(format!("3 examples, {} identities, {scalings} scalings", VALID.len()))
}

fn run_cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_toric-dvr"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout)
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut runs = 0;
    let names: Vec<&str> = VALID.iter().copied().chain(["p1_mismatched"]).collect();
    for name in names {
        let path = fixture_path(name);
        let path = path.to_str().unwrap();
        let e = load(name);
        let vertex = e.fan().sigma1().vertices()[0]
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(",");
        let commands: Vec<Vec<&str>> = vec![
            vec!["validate"],
            vec!["chern", "--i", "1"],
            vec!["chern", "--total"],
            vec!["chern-generic", "--i", "1"],
            vec!["restrict", "--vertex", &vertex],
        ];
        for cmd in commands {
            let mut args = cmd.clone();
            args.extend(["--seed", "5", path]);
            let first = run_cli(&args);
            let second = run_cli(&args);
            ensure!(first == second, "{name}: {cmd:?} differs between runs");
            ensure!(first.0.is_some(), "{name}: {cmd:?} killed");
            runs += 2;
        }
        let svg = |k: usize| dir.path().join(format!("{name}-{k}.svg"));
        let a = svg(0);
        let b = svg(1);
        run_cli(&["plot", "--out", a.to_str().unwrap(), path]);
        run_cli(&["plot", "--out", b.to_str().unwrap(), path]);
        if a.exists() || b.exists() {
            ensure!(
                fs::read(&a).ok() == fs::read(&b).ok(),
                "{name}: plots differ"
            );
        }
    }
    Ok(format!("{runs} runs byte-identical"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("PP membership", pp_membership_checks),
        ("rank-1 law", rank_one_law),
        ("Whitney sum", whitney_sum),
        ("link round trip", link_roundtrip),
        ("building axioms", building_axioms),
        ("combinatorial round trips", combinatorial_round_trips),
        ("restriction compatibility", restriction_compatibility),
        ("morphism decisions", morphism_decisions),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match result {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", k + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({reason})", k + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
