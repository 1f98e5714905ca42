//! Seeded verification suites over a configured algebra.

use std::collections::HashSet;

use anyhow::{anyhow, Result};
use cherednik::cherednik::{verify_rational_presentation, CherednikAlgebra, CherednikElement};
use cherednik::expr::parse_operator;
use cherednik::padic::{
    certify_cherednik_level, element_gauge, minimal_cap, truncated_multiply, LatticeLevel, TruncatedHElement,
};
use cherednik::refgroup::{ReflectionFunction, ReflectionGroup};
use cherednik::sample::{
    into_lattice, random_basis_element, random_closed_two_form, random_element, random_poly, random_two_form,
    small_int, small_rational,
};
use cherednik::tdo::{extension_obstruction, induced_map_is_multiplicative, twisted_weyl, verify_twist_iso, PolyForm};
use cherednik::{FieldSpec, Monomial, MultiPoly, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::RunConfig;
use crate::report::{Outcome, Recorder};

/// `Variant: message` for a library error.
pub fn describe(e: &cherednik::Error) -> String {
    let dbg = format!("{e:?}");
    let kind: String = dbg.chars().take_while(|c| c.is_alphanumeric()).collect();
    format!("{kind}: {e}")
}

/// Independent stream per suite so adding a suite never shifts another's samples.
fn rng_for(seed: u64, suite: &str) -> ChaCha8Rng {
    let salt = suite
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3));
    ChaCha8Rng::seed_from_u64(seed ^ salt)
}

fn lib<T>(r: cherednik::Result<T>) -> Result<T> {
    r.map_err(|e| anyhow!(describe(&e)))
}

fn sample_element(rng: &mut ChaCha8Rng, alg: &CherednikAlgebra, filt: u32, cdeg: u32) -> CherednikElement {
    random_element(rng, alg, filt, cdeg, 2, small_rational)
}

pub fn reflections(rec: &mut Recorder, cfg: &RunConfig) -> Result<serde_json::Value> {
    let group = cfg.group()?;
    let refls: Vec<_> = group
        .reflections()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            json!({
                "element": r.element,
                "alpha": r.alpha.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                "lambda": r.lambda.to_string(),
                "class": group.class_of(i),
            })
        })
        .collect();
    let data = json!({
        "order": group.order(),
        "rank": group.rank(),
        "hyperplanes": group.hyperplanes().len(),
        "reflections": refls,
        "classes": group.classes(),
        "c": cfg.c.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    });

    rec.check(
        "reflections.eigenvalues",
        "each reflection scales its root by a root of unity lambda != 1",
        || {
            let order = group.order() as i64;
            for r in group.reflections() {
                if r.lambda.is_one() || !r.lambda.pow(order).is_one() {
                    return Ok(Outcome::Fail(format!("element {} has lambda = {}", r.element, r.lambda)));
                }
            }
            Ok(Outcome::Pass)
        },
    );
    rec.check(
        "reflections.hyperplanes",
        "the group permutes the reflection hyperplanes",
        || {
            for g in 0..group.order() {
                let images: HashSet<usize> = (0..group.hyperplanes().len())
                    .map(|y| group.hyperplane_image(g, y).0)
                    .collect();
                if images.len() != group.hyperplanes().len() {
                    return Ok(Outcome::Fail(format!("element {g} does not permute hyperplanes")));
                }
            }
            Ok(Outcome::Pass)
        },
    );
    rec.check(
        "reflections.classes",
        "reflection classes are stable under conjugation",
        || Ok(check_classes(&group)),
    );
    Ok(data)
}

fn check_classes(group: &ReflectionGroup) -> Outcome {
    let by_element: std::collections::HashMap<usize, usize> = group
        .reflections()
        .iter()
        .enumerate()
        .map(|(i, r)| (r.element, i))
        .collect();
    for (i, r) in group.reflections().iter().enumerate() {
        for h in 0..group.order() {
            let conj = group.mul(group.inv(h), group.mul(r.element, h));
            match by_element.get(&conj) {
                Some(&j) if group.class_of(j) == group.class_of(i) => {}
                _ => return Outcome::Fail(format!("conjugate of element {} by {h} leaves its class", r.element)),
            }
        }
    }
    Outcome::Pass
}

pub fn commute(rec: &mut Recorder, alg: &CherednikAlgebra, cfg: &RunConfig) {
    let r = alg.rank();
    let twisted = !alg.twist().is_zero();
    for i in 0..r {
        for j in i + 1..r {
            let name = format!("commute.D{}.D{}", i + 1, j + 1);
            rec.check(&name, "Dunkl operators commute: [D_i, D_j] = t * omega_ij", || {
                if twisted {
                    let skew = alg.skew();
                    let lhs = skew.commutator(alg.dunkl(i), alg.dunkl(j));
                    let rhs = skew.function(&alg.twist().omega(i, j).scale(alg.t()));
                    return Ok(if lhs == rhs {
                        Outcome::Pass
                    } else {
                        Outcome::Fail(format!("[D_i, D_j] = {lhs}"))
                    });
                }
                let (vi, vj) = (alg.basis_vector(i), alg.basis_vector(j));
                for m in Monomial::all_up_to_degree(r, cfg.bounds.degree) {
                    let f = MultiPoly::monomial(r, m, Scalar::one());
                    let ij = lib(alg.dunkl_apply(&vi, &lib(alg.dunkl_apply(&vj, &f))?))?;
                    let ji = lib(alg.dunkl_apply(&vj, &lib(alg.dunkl_apply(&vi, &f))?))?;
                    if ij != ji {
                        return Ok(Outcome::Fail(format!("on x^{}: {}", m.fmt_tuple(r), &ij - &ji)));
                    }
                }
                Ok(Outcome::Pass)
            });
        }
    }
    rec.check(
        "commute.polynomials",
        "Dunkl operators preserve polynomials and lower degree",
        || {
            if twisted {
                return Ok(Outcome::Skip("twisted operators have no function action".into()));
            }
            for m in Monomial::all_up_to_degree(r, cfg.bounds.degree) {
                let f = MultiPoly::monomial(r, m, Scalar::one());
                for i in 0..r {
                    let out = lib(alg.dunkl_apply(&alg.basis_vector(i), &f))?;
                    if out.degree().is_some_and(|d| d >= m.degree().max(1)) {
                        return Ok(Outcome::Fail(format!("D_{} x^{} = {out}", i + 1, m.fmt_tuple(r))));
                    }
                }
            }
            Ok(Outcome::Pass)
        },
    );
}

pub fn pbw(rec: &mut Recorder, alg: &CherednikAlgebra, cfg: &RunConfig, seed: u64, inject: Option<&str>) {
    let mut rng = rng_for(seed, "pbw");
    let b = &cfg.bounds;
    let r = alg.rank();
    rec.check(
        "pbw.products",
        "PBW: products of basis elements normal-form and gr(D^a D^b) = D^(a+b)",
        || {
            for _ in 0..b.samples {
                let x = random_basis_element(&mut rng, alg, b.filtration, b.coeff_degree);
                let y = random_basis_element(&mut rng, alg, b.filtration, b.coeff_degree);
                lib(alg.multiply(&x, &y))?;
                let (&(_, alpha), _) = x.terms().next().unwrap();
                let (&(_, beta), _) = y.terms().next().unwrap();
                let dx = CherednikElement::term(MultiPoly::one(r), 0, alpha);
                let dy = CherednikElement::term(MultiPoly::one(r), 0, beta);
                let top = lib(alg.multiply(&dx, &dy))?.graded_part(alpha.degree() + beta.degree());
                let expect = CherednikElement::term(MultiPoly::one(r), 0, alpha.mul(beta));
                if top != expect {
                    return Ok(Outcome::Fail(format!("{dx} * {dy} has leading part {top}")));
                }
            }
            Ok(Outcome::Pass)
        },
    );
    rec.check("pbw.round_trip", "PBW normal form inverts the embedding", || {
        for _ in 0..b.samples {
            let a = sample_element(&mut rng, alg, b.filtration, b.coeff_degree);
            let back = lib(alg.pbw_normal_form(&alg.embed(&a)))?;
            if back != a {
                return Ok(Outcome::Fail(format!("{a} came back as {back}")));
            }
        }
        Ok(Outcome::Pass)
    });
    rec.check("pbw.associativity", "multiplication in normal form is associative", || {
        for _ in 0..b.samples {
            let x = sample_element(&mut rng, alg, 1, b.coeff_degree);
            let y = sample_element(&mut rng, alg, 1, b.coeff_degree);
            let z = sample_element(&mut rng, alg, 1, b.coeff_degree);
            let left = lib(alg.multiply(&lib(alg.multiply(&x, &y))?, &z))?;
            let right = lib(alg.multiply(&x, &lib(alg.multiply(&y, &z))?))?;
            if left != right {
                return Ok(Outcome::Fail(format!("({x}) ({y}) ({z})")));
            }
        }
        Ok(Outcome::Pass)
    });
    if let Some(src) = inject {
        rec.check(
            "pbw.inject",
            "elements with poles outside the Dunkl combinations are not in the algebra",
            || {
                let op = lib(parse_operator(src, alg))?;
                match alg.pbw_normal_form(&op) {
                    Err(e @ cherednik::Error::NotInAlgebra(_)) => Ok(Outcome::Expected(describe(&e))),
                    Err(e) => Err(anyhow!(describe(&e))),
                    Ok(a) => Ok(Outcome::Fail(format!("expected NotInAlgebra, got normal form {a}"))),
                }
            },
        );
    }
}

pub fn presentation(rec: &mut Recorder, alg: &CherednikAlgebra, cfg: &RunConfig, seed: u64) {
    let mut rng = rng_for(seed, "presentation");
    let b = &cfg.bounds;
    let r = alg.rank();
    match verify_rational_presentation(alg, b.degree.min(3)) {
        Ok(checks) => {
            for c in checks {
                let name = format!("presentation.{}", c.name);
                rec.check(&name, "defining relations of the rational Cherednik algebra", || {
                    Ok(if c.passed {
                        Outcome::Pass
                    } else {
                        Outcome::Fail(c.witness.unwrap_or_default())
                    })
                });
            }
        }
        Err(e) => rec.check(
            "presentation.relations",
            "defining relations of the rational Cherednik algebra",
            || Err(anyhow!(describe(&e))),
        ),
    }
    rec.check(
        "presentation.commutator_formula",
        "[D_v, f] = t v(f) + sum_s c_s v(alpha_s)/alpha_s (s(f) - f) s",
        || {
            let skew = alg.skew();
            for _ in 0..b.samples {
                let v: Vec<Scalar> = (0..r).map(|_| small_int(&mut rng)).collect();
                let f = random_poly(&mut rng, r, b.coeff_degree + 1, 3, small_rational);
                let formula = lib(alg.commutator_with_function(&v, &f))?;
                let direct = skew.commutator(&alg.dunkl_vector(&v), &skew.function(&f));
                if alg.embed(&formula) != direct {
                    return Ok(Outcome::Fail(format!("v = {v:?}, f = {f}")));
                }
                if formula.filtration_degree().is_some_and(|d| d > 0) {
                    return Ok(Outcome::Fail(format!("[D_v, {f}] has positive filtration degree")));
                }
            }
            Ok(Outcome::Pass)
        },
    );
    rec.check(
        "presentation.equivariance",
        "g D_v g^-1 = D_{g(v)}",
        || {
            let skew = alg.skew();
            let group = alg.group();
            for g in 0..group.order() {
                for i in 0..r {
                    let v = alg.basis_vector(i);
                    let lhs = skew.multiply(
                        &skew.multiply(&skew.group_element(g), alg.dunkl(i)),
                        &skew.group_element(group.inv(g)),
                    );
                    if lhs != alg.dunkl_vector(&group.act_on_vector(g, &v)) {
                        return Ok(Outcome::Fail(format!("g<{g}>, D_{}", i + 1)));
                    }
                }
            }
            Ok(Outcome::Pass)
        },
    );
    rec.check(
        "presentation.degeneration",
        "c = 0 gives the twisted Weyl algebra with D_v = t L_v",
        || {
            let group = alg.group().clone();
            let zero = ReflectionFunction::zero(&group);
            let weyl = lib(CherednikAlgebra::new(group, zero, alg.twist().clone()))?;
            for i in 0..r {
                if *weyl.dunkl(i) != weyl.skew().l(i).scale(weyl.t()) {
                    return Ok(Outcome::Fail(format!("D_{} differs from t L_{}", i + 1, i + 1)));
                }
            }
            for _ in 0..b.samples {
                let x = sample_element(&mut rng, &weyl, b.filtration, b.coeff_degree);
                let y = sample_element(&mut rng, &weyl, b.filtration, b.coeff_degree);
                let lhs = weyl.embed(&lib(weyl.multiply(&x, &y))?);
                if lhs != weyl.skew().multiply(&weyl.embed(&x), &weyl.embed(&y)) {
                    return Ok(Outcome::Fail(format!("{x} * {y}")));
                }
            }
            Ok(Outcome::Pass)
        },
    );
    let mut lambdas = vec![("2".to_string(), Some(Scalar::from_int(2)))];
    lambdas.push((
        "inverse_prime".into(),
        cfg.prime.map(|p| Scalar::from_ratio(1, p as i64)),
    ));
    lambdas.push((
        "zeta".into(),
        (cfg.field_order > 2).then(|| Scalar::zeta(cfg.field_order)),
    ));
    for (label, lambda) in lambdas {
        let name = format!("presentation.scaling.{label}");
        rec.check(&name, "rescaling D by lambda identifies H_{t,c,omega} with H_{lambda t, lambda c, lambda omega}", || {
            let Some(lambda) = lambda else {
                return Ok(Outcome::Skip("scalar not available in this configuration".into()));
            };
            let target = lib(alg.scaled_algebra(&lambda))?;
            for _ in 0..b.samples {
                let x = sample_element(&mut rng, alg, 1, b.coeff_degree);
                let y = sample_element(&mut rng, alg, 1, b.coeff_degree);
                let lhs = alg.scale_element(&lib(alg.multiply(&x, &y))?, &lambda);
                let rhs = lib(target.multiply(&alg.scale_element(&x, &lambda), &alg.scale_element(&y, &lambda)))?;
                if lhs != rhs {
                    return Ok(Outcome::Fail(format!("{x} * {y}")));
                }
            }
            Ok(Outcome::Pass)
        });
    }
}

pub fn tdo(rec: &mut Recorder, cfg: &RunConfig, seed: u64) {
    let mut rng = rng_for(seed, "tdo");
    let b = &cfg.bounds;
    let w = cfg.omega_form();
    let r = cfg.rank;
    let t = cfg.t.clone();
    rec.check("tdo.closed", "the twisting 2-form is closed", || {
        if w.is_closed() {
            Ok(Outcome::Pass)
        } else {
            Err(anyhow!(
                "{}; d(omega) = {}",
                describe(&cherednik::Error::NotClosed),
                w.exterior_derivative()
            ))
        }
    });
    rec.check(
        "tdo.twist_iso",
        "phi_eta: D_omega -> D_0 with d(eta) = omega / t is an isomorphism",
        || {
            let eta = match w.poincare_antiderivative() {
                Ok(eta) => eta.scale(&t.inv().unwrap()),
                Err(e) => return Ok(Outcome::Skip(describe(&e))),
            };
            let source = lib(twisted_weyl(&w, t.clone()))?;
            let target = lib(twisted_weyl(&PolyForm::zero(r, 2), t.clone()))?;
            Ok(match lib(verify_twist_iso(&eta, &source, &target, b.word_length))? {
                None => Outcome::Pass,
                Some(witness) => Outcome::Fail(witness),
            })
        },
    );
    rec.check(
        "tdo.random_forms",
        "every closed polynomial 2-form is exact and its twist is trivial",
        || {
            if r < 2 {
                return Ok(Outcome::Skip("no 2-forms in rank 1".into()));
            }
            let target = lib(twisted_weyl(&PolyForm::zero(r, 2), t.clone()))?;
            for _ in 0..b.samples {
                let form = random_closed_two_form(&mut rng, r, 1);
                let eta = lib(form.poincare_antiderivative())?.scale(&t.inv().unwrap());
                let source = lib(twisted_weyl(&form, t.clone()))?;
                if let Some(witness) = lib(verify_twist_iso(&eta, &source, &target, b.word_length))? {
                    return Ok(Outcome::Fail(format!("omega = {form}: {witness}")));
                }
            }
            Ok(Outcome::Pass)
        },
    );
    rec.check(
        "tdo.obstruction",
        "g extends to D_omega iff g preserves omega",
        || {
            if r < 2 {
                return Ok(Outcome::Skip("no 2-forms in rank 1".into()));
            }
            let group = cfg.group()?;
            let mut forms = vec![];
            if w.is_closed() {
                forms.push(w.clone());
            }
            for _ in 0..b.samples {
                forms.push(random_closed_two_form(&mut rng, r, 1));
                if r == 2 {
                    forms.push(random_two_form(&mut rng, r, 1));
                }
            }
            for form in &forms {
                let g = rng.gen_range(0..group.order());
                let invariant = extension_obstruction(&group, g, form).is_zero();
                let multiplicative = lib(induced_map_is_multiplicative(&group, g, form, &t))?;
                if invariant != multiplicative {
                    return Ok(Outcome::Fail(format!(
                        "g<{g}>, omega = {form}: invariant = {invariant}, multiplicative = {multiplicative}"
                    )));
                }
            }
            Ok(Outcome::Pass)
        },
    );
}

fn p_integral_sample(rng: &mut ChaCha8Rng, alg: &CherednikAlgebra, p: u64, filt: u32, cdeg: u32) -> CherednikElement {
    random_element(rng, alg, filt, cdeg, 2, |r| {
        let k = r.gen_range(0..3u32);
        &small_int(r) * &Scalar::from_int((p as i64).pow(k))
    })
}

pub fn norms(rec: &mut Recorder, alg: &CherednikAlgebra, cfg: &RunConfig, seed: u64) {
    let mut rng = rng_for(seed, "norms");
    let b = &cfg.bounds;
    let (n0, m0) = cfg.level;
    let field = cfg.field();
    let field = match field {
        Ok(f) => f,
        Err(e) => {
            rec.check("norms.field", "p-adic field specification", || Err(e));
            return;
        }
    };
    let name = format!("norms.certify.n{n0}.m{m0}");
    rec.check(&name, "the Dunkl lattice at this level is a Cherednik lattice", || {
        certified(alg, &field, n0, m0)
    });
    for n in 0..=b.max_level {
        for m in 0..=b.max_level {
            let name = format!("norms.submultiplicative.n{n}.m{m}");
            rec.check(&name, "the level-n gauge norm is submultiplicative", || {
                if !lib(certify_cherednik_level(alg, &field, LatticeLevel::new(n, m)))? {
                    return Ok(Outcome::Skip("level not certified".into()));
                }
                for _ in 0..b.samples {
                    let x = p_integral_sample(&mut rng, alg, field.prime(), b.filtration.min(2), b.coeff_degree);
                    let y = p_integral_sample(&mut rng, alg, field.prime(), b.filtration.min(2), b.coeff_degree);
                    let gx = lib(element_gauge(&field, &x, n))?;
                    let gy = lib(element_gauge(&field, &y, n))?;
                    let gxy = lib(element_gauge(&field, &lib(alg.multiply(&x, &y))?, n))?;
                    if gxy < gx + gy {
                        return Ok(Outcome::Fail(format!("|{x}| = {gx}, |{y}| = {gy}, product {gxy}")));
                    }
                }
                Ok(Outcome::Pass)
            });
        }
    }
    rec.check(
        "norms.tower_monotone",
        "the gauge decreases along the tower of levels",
        || {
            for _ in 0..b.samples {
                let x = p_integral_sample(&mut rng, alg, field.prime(), b.filtration, b.coeff_degree);
                for n in 0..b.max_level {
                    let (lo, hi) = (lib(element_gauge(&field, &x, n))?, lib(element_gauge(&field, &x, n + 1))?);
                    if lo < hi {
                        return Ok(Outcome::Fail(format!("{x}: level {n} gauge {lo} < level {} gauge {hi}", n + 1)));
                    }
                }
            }
            Ok(Outcome::Pass)
        },
    );
}

fn certified(alg: &CherednikAlgebra, field: &FieldSpec, n: u32, m: u32) -> Result<Outcome> {
    Ok(if lib(certify_cherednik_level(alg, field, LatticeLevel::new(n, m)))? {
        Outcome::Pass
    } else {
        Outcome::Fail(format!(
            "level (n = {n}, m = {m}) fails certification for c = [{}], t = {}",
            alg.c().values().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "),
            alg.t()
        ))
    })
}

pub fn tower(rec: &mut Recorder, alg: &CherednikAlgebra, cfg: &RunConfig, seed: u64) {
    let mut rng = rng_for(seed, "tower");
    let b = &cfg.bounds;
    let (n, m) = cfg.level;
    let field = match cfg.field() {
        Ok(f) => f,
        Err(e) => {
            rec.check("tower.field", "p-adic field specification", || Err(e));
            return;
        }
    };
    let name = format!("tower.certify.n{n}.m{m}");
    rec.check(&name, "the Dunkl lattice at this level is a Cherednik lattice", || {
        certified(alg, &field, n, m)
    });
    if n == 0 {
        rec.check("tower.level", "truncated arithmetic needs level n >= 1", || {
            Err(anyhow!("padic.n must be at least 1"))
        });
        return;
    }
    let p = field.prime();
    let cap = match minimal_cap(n, field.precision()) {
        Ok(c) => c,
        Err(e) => {
            rec.check("tower.cap", "truncation cap", || Err(anyhow!(describe(&e))));
            return;
        }
    };
    let mut triples = vec![];
    let mut build_err = None;
    for _ in 0..b.samples {
        let mut one = || -> Result<(TruncatedHElement, CherednikElement)> {
            let a = into_lattice(&p_integral_sample(&mut rng, alg, p, 1, b.coeff_degree), p, n);
            Ok((lib(TruncatedHElement::from_element(&field, &a, n, cap))?, a))
        };
        match (one(), one(), one()) {
            (Ok(x), Ok(y), Ok(z)) => triples.push((x, y, z)),
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
                build_err = Some(e);
                break;
            }
        }
    }
    if let Some(e) = build_err {
        rec.check("tower.lattice", "sampled elements lie in the level-n lattice", || Err(e));
        return;
    }
    let mul = |x: &TruncatedHElement, y: &TruncatedHElement| lib(truncated_multiply(alg, &field, x, y));
    rec.check(
        "tower.exact_agreement",
        "truncated products agree with exact products reduced mod p^N",
        || {
            for ((tx, x), (ty, y), _) in &triples {
                let exact = lib(TruncatedHElement::from_element(&field, &lib(alg.multiply(x, y))?, n, cap))?;
                if mul(tx, ty)? != exact {
                    return Ok(Outcome::Fail(format!("{x} * {y}")));
                }
            }
            Ok(Outcome::Pass)
        },
    );
    rec.check("tower.associative", "truncated multiplication is associative", || {
        for ((x, _), (y, _), (z, _)) in &triples {
            if mul(&mul(x, y)?, z)? != mul(x, &mul(y, z)?)? {
                return Ok(Outcome::Fail(format!("{x}, {y}, {z}")));
            }
        }
        Ok(Outcome::Pass)
    });
    rec.check("tower.distributive", "truncated multiplication distributes over addition", || {
        for ((x, _), (y, _), (z, _)) in &triples {
            let lhs = mul(x, &lib(y.add(z, &field))?)?;
            let rhs = lib(mul(x, y)?.add(&mul(x, z)?, &field))?;
            if lhs != rhs {
                return Ok(Outcome::Fail(format!("{x}, {y}, {z}")));
            }
        }
        Ok(Outcome::Pass)
    });
    rec.check(
        "tower.map_homomorphism",
        "the transition map to level n - 1 is a ring homomorphism",
        || {
            if n < 2 {
                return Ok(Outcome::Skip("level 1 has no lower truncated level".into()));
            }
            for ((x, _), (y, _), _) in &triples {
                let down = |a: &TruncatedHElement| lib(a.tower_map());
                if down(&mul(x, y)?)? != mul(&down(x)?, &down(y)?)? {
                    return Ok(Outcome::Fail(format!("{x}, {y}")));
                }
            }
            Ok(Outcome::Pass)
        },
    );
}
