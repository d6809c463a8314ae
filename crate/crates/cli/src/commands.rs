use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use paracalc::calculus::{
    bounded_domain_embedding_check, consistency_audit, domain_check, embedding_check, member, receiving_region,
    Context, Membership, Status, Verdict,
};
use paracalc::grid::{io, synthesize};
use paracalc::paraproduct::{decomposition_residual, ProductSetup};
use paracalc::witness::{oracle_norm, suggest_grid, BaseNorms, WitnessSpec};
use paracalc::{limits, Decomposition, GridFunction, LpSystem, NormParams, Spectrum, TorusGrid, Weight};

use crate::args::*;
use crate::report::{ext, Failure, Report};

type Outcome = Result<Report, Failure>;

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Modulus(a) => modulus(a),
        Command::Partition(a) => partition(a),
        Command::Norm(a) => norm(a),
        Command::Paraprod(a) => paraprod(a, cli.seed),
        Command::Witness(a) => witness(a),
        Command::OracleVerify(a) => oracle_verify(a),
        Command::CheckMult(a) => check_mult(a, cli.seed),
        Command::Receiving(a) => receiving(a),
        Command::Embed(a) => {
            let ctx = context(&a.ctx)?;
            a.from.validate()?;
            Ok(verdict_report(embedding_check(&a.from, &a.to, &ctx)))
        }
        Command::DomainEmbed(a) => {
            let ctx = context(&a.ctx)?;
            a.from.validate()?;
            a.to.validate()?;
            Ok(verdict_report(bounded_domain_embedding_check(&a.from, &a.to, &ctx)))
        }
        Command::DemoDivergence(a) => divergence(a),
    }
}

fn weight(m: &Option<Vec<f64>>, dim: usize) -> Result<Weight, Failure> {
    match m {
        Some(m) => Ok(Weight::new(m.clone())?),
        None => Ok(Weight::isotropic(dim)),
    }
}

/// The explicit grid when `--n`/`--L` are given, else `fallback(weight)`.
fn resolve_grid(
    g: &GridArgs,
    fallback: impl FnOnce(&Weight) -> Result<TorusGrid, Failure>,
) -> Result<TorusGrid, Failure> {
    let dim = [g.m.as_ref().map(Vec::len), g.n.as_ref().map(Vec::len), g.periods.as_ref().map(Vec::len)]
        .into_iter()
        .flatten()
        .max()
        .unwrap_or(1);
    let w = weight(&g.m, dim)?;
    let (Some(n), Some(l)) = (&g.n, &g.periods) else { return fallback(&w) };
    let spread = |v: &Vec<f64>| if v.len() == 1 { vec![v[0]; dim] } else { v.clone() };
    let sizes = if n.len() == 1 { vec![n[0]; dim] } else { n.clone() };
    Ok(TorusGrid::new(w, sizes, spread(l))?)
}

fn grid_json(g: &TorusGrid) -> Value {
    json!({ "weight": g.weight().components(), "sizes": g.sizes(), "periods": g.periods() })
}

fn context(c: &ContextArgs) -> Result<Context, Failure> {
    if let Some(m) = &c.m {
        return Ok(Context::from_weight(&Weight::new(m.clone())?));
    }
    let mtot = c.mtot.unwrap_or(1.0);
    // an isotropic weight has integer |M|; |M| = 1 is always isotropic
    let isotropic = !c.anisotropic && mtot.fract() == 0.0 || mtot == 1.0;
    Ok(Context::new(mtot, isotropic)?)
}

fn witness_spec(text: &str, p: &WitnessParams) -> Result<WitnessSpec, Failure> {
    let mut obj: Map<String, Value> = if text.trim_start().starts_with('{') {
        serde_json::from_str(text)?
    } else {
        let mut m = Map::new();
        m.insert("kind".into(), Value::from(text));
        m
    };
    let extra = [
        ("k", p.k.map(Value::from)),
        ("N", p.big_n.map(Value::from)),
        ("l", p.l.map(Value::from)),
        ("t", p.t.map(Value::from)),
    ];
    for (key, v) in extra {
        if let Some(v) = v {
            obj.insert(key.into(), v);
        }
    }
    serde_json::from_value(Value::Object(obj)).map_err(|e| Failure::new(format!("bad witness: {e}")))
}

fn selected_witness(w: &WitnessSelect) -> Result<Option<WitnessSpec>, Failure> {
    w.witness.as_deref().map(|t| witness_spec(t, &w.params)).transpose()
}

fn witness_grid(spec: &WitnessSpec, g: &GridArgs) -> Result<TorusGrid, Failure> {
    resolve_grid(g, |w| Ok(suggest_grid(spec, w)?))
}

fn decomposition(u: &GridFunction, j: Option<i64>) -> Result<Decomposition, Failure> {
    let sys = LpSystem::standard();
    Ok(match j {
        Some(j) => Decomposition::new(u, &sys, j)?,
        None => Decomposition::full(u, &sys)?,
    })
}

fn modulus(a: &ModulusArgs) -> Outcome {
    let w = weight(&a.m, a.x.len())?;
    let mut body = json!({
        "M": w.components(),
        "x": a.x,
        "modulus": w.modulus(&a.x)?,
    });
    if let Some(t) = a.t {
        let y = w.dilate(t, &a.x)?;
        body["t"] = json!(t);
        body["dilated_modulus"] = json!(w.modulus(&y)?);
        body["dilated"] = json!(y);
    }
    Ok(Report::settled(body))
}

fn partition(a: &PartitionArgs) -> Outcome {
    let sys = match a.radii.as_deref() {
        None => LpSystem::standard(),
        Some([lo, hi]) => LpSystem::with_radii(*lo, *hi)?,
        Some(other) => return Err(Failure::new(format!("--radii takes two values, got {}", other.len()))),
    };
    if a.j < 0 {
        return Err(Failure::new(format!("--J must be >= 0, got {}", a.j)));
    }
    if let Some(r) = a.r.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
        return Err(Failure::new(format!("moduli must be finite and >= 0, got {r}")));
    }
    let mut rows = Vec::new();
    for &r in &a.r {
        for j in 0..=a.j {
            let (lo, hi) = sys.band_support(j);
            rows.push(json!({
                "r": r, "j": j, "phi": sys.phi(j, r), "psi": sys.psi(j, r), "support_lo": lo, "support_hi": hi,
            }));
        }
    }
    let defects: Vec<Value> = a.r.iter().map(|&r| json!({ "r": r, "defect": sys.partition_defect(a.j, r) })).collect();
    Ok(Report::settled(json!({
        "inner": sys.inner(), "outer": sys.outer(), "J": a.j, "defects": defects, "rows": rows,
    })))
}

fn norm(a: &NormArgs) -> Outcome {
    let (u, source) = match (&a.input, selected_witness(&a.witness)?) {
        (Some(path), _) => (io::load(path)?, json!({ "file": path })),
        (None, Some(spec)) => (spec.build(&witness_grid(&spec, &a.grid)?)?, serde_json::to_value(&spec)?),
        (None, None) => return Err(Failure::new("give --input FILE or --witness")),
    };
    let np = NormParams::new(a.norm.s, a.norm.p, a.norm.q)?;
    let d = decomposition(&u, a.norm.j)?;
    let value = d.norm(a.norm.scale, &np)?;
    Ok(Report::settled(json!({
        "source": source,
        "grid": grid_json(u.grid()),
        "J": d.j_max(),
        "scale": a.norm.scale.to_string(),
        "s": a.norm.s, "p": ext(a.norm.p), "q": ext(a.norm.q),
        "norm": value,
    })))
}

fn witness(a: &WitnessArgs) -> Outcome {
    let spec = witness_spec(&a.kind, &a.params)?;
    let g = witness_grid(&spec, &a.grid)?;
    let u = spec.build(&g)?;
    if let Some(path) = &a.output {
        io::save(path, &u)?;
    }
    let origin = u.value_at_origin();
    Ok(Report::settled(json!({
        "witness": serde_json::to_value(&spec)?,
        "grid": grid_json(&g),
        "levels": spec.levels()?,
        "outer_radius": spec.outer_radius()?,
        "max_abs": u.max_abs(),
        "l2": u.l2_norm(),
        "origin_re": origin.re, "origin_im": origin.im,
        "output": a.output,
    })))
}

fn base_norms(w: &Weight) -> Result<std::borrow::Cow<'static, BaseNorms>, Failure> {
    if w.dim() == 1 {
        return Ok(std::borrow::Cow::Borrowed(BaseNorms::default_1d()));
    }
    Ok(std::borrow::Cow::Owned(BaseNorms::new(&suggest_grid(&WitnessSpec::Theta, w)?)?))
}

fn oracle_verify(a: &OracleArgs) -> Outcome {
    let spec = selected_witness(&a.witness)?.ok_or_else(|| Failure::new("--witness is required"))?;
    let np = NormParams::new(a.norm.s, a.norm.p, a.norm.q)?;
    let g = witness_grid(&spec, &a.grid)?;
    let base = base_norms(g.weight())?;
    let oracle = oracle_norm(&spec, a.norm.scale, &np, &base)?;
    let d = decomposition(&spec.build(&g)?, a.norm.j)?;
    let computed = d.norm(a.norm.scale, &np)?;
    Ok(Report::settled(json!({
        "witness": serde_json::to_value(&spec)?,
        "grid": grid_json(&g),
        "J": d.j_max(),
        "scale": a.norm.scale.to_string(),
        "s": a.norm.s, "p": ext(a.norm.p), "q": ext(a.norm.q),
        "computed": computed,
        "oracle": oracle,
        "ratio": computed / oracle,
    })))
}

fn random_factor(rng: &mut ChaCha8Rng, g: &TorusGrid, radius: f64) -> Result<GridFunction, Failure> {
    let data = g
        .modulus_table()
        .iter()
        .map(|&r| {
            if r <= radius {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    Ok(synthesize(Spectrum::new(g.clone(), data)?))
}

fn paraprod(a: &ParaprodArgs, seed: u64) -> Outcome {
    let (u, v, source) = if let (Some(pu), Some(pv)) = (&a.u, &a.v) {
        (io::load(pu)?, io::load(pv)?, json!({ "u": pu, "v": pv }))
    } else if let (Some(tu), Some(tv)) = (&a.witness_u, &a.witness_v) {
        let none = WitnessParams { k: None, big_n: None, l: None, t: None };
        let (su, sv) = (witness_spec(tu, &none)?, witness_spec(tv, &none)?);
        let g = resolve_grid(&a.grid, |w| {
            let (gu, gv) = (suggest_grid(&su, w)?, suggest_grid(&sv, w)?);
            // longer period of the two, and at least the finer resolution
            let period = gu.periods()[0].max(gv.periods()[0]);
            let sizes = (0..w.dim())
                .map(|i| {
                    let nyq = gu.nyquist(i).max(gv.nyquist(i));
                    ((nyq * period / std::f64::consts::PI).ceil() as usize).next_power_of_two()
                })
                .collect();
            Ok(TorusGrid::new(w.clone(), sizes, vec![period; w.dim()])?)
        })?;
        (su.build(&g)?, sv.build(&g)?, json!({ "u": su, "v": sv }))
    } else if a.random {
        let g = resolve_grid(&a.grid, |w| Ok(TorusGrid::new(w.clone(), vec![512; w.dim()], vec![2.0 * std::f64::consts::PI; w.dim()])?))?;
        // a quarter of the smallest modulus at which some axis hits Nyquist
        let reach = (0..g.dim()).map(|i| g.nyquist(i).powf(1.0 / g.weight().components()[i])).fold(f64::INFINITY, f64::min);
        let radius = a.radius.unwrap_or(reach / 4.0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_factor(&mut rng, &g, radius)?;
        let v = random_factor(&mut rng, &g, radius)?;
        (u, v, json!({ "random": { "seed": seed, "radius": radius } }))
    } else {
        return Err(Failure::new("give --u/--v files, --witness-u/--witness-v, or --random"));
    };
    let setup = ProductSetup::new(&u, &v, &LpSystem::standard(), a.j)?;
    let (p1, p2, p3, prod) = (setup.pi1(), setup.pi2(), setup.pi3(), setup.truncated_product());
    if let Some(dir) = &a.output_dir {
        std::fs::create_dir_all(dir).map_err(|e| Failure::new(format!("{}: {e}", dir.display())))?;
        for (name, f) in [("pi1", &p1), ("pi2", &p2), ("pi3", &p3), ("product", &prod)] {
            io::save(Path::new(dir).join(format!("{name}.alpg")), f)?;
        }
    }
    let support = setup.spectral_support_report();
    Ok(Report::settled(json!({
        "source": source,
        "grid": grid_json(setup.fine_grid()),
        "input_grid": grid_json(u.grid()),
        "J": setup.j_max(),
        "residual": decomposition_residual(&setup),
        "support_worst": support.worst(),
        "l2": { "pi1": p1.l2_norm(), "pi2": p2.l2_norm(), "pi3": p3.l2_norm(), "product": prod.l2_norm() },
        "rows": serde_json::to_value(&support.levels)?,
    })))
}

fn verdict_report(v: Verdict) -> Report {
    let unsettled = v.status == Status::Open;
    Report { body: json!(v), unsettled }
}

fn check_mult(a: &CheckMultArgs, seed: u64) -> Outcome {
    let ctx = context(&a.ctx)?;
    a.a0.validate()?;
    a.a1.validate()?;
    let v = domain_check(&a.a0, &a.a1, &ctx);
    let Some(samples) = a.audit else { return Ok(verdict_report(v)) };
    let audit = if v.is_bounded() { json!(consistency_audit(&a.a0, &a.a1, &ctx, samples, seed)?) } else { Value::Null };
    let mut report = verdict_report(v);
    report.body["audit"] = audit;
    Ok(report)
}

fn receiving(a: &ReceivingArgs) -> Outcome {
    let ctx = context(&a.ctx)?;
    a.a0.validate()?;
    a.a1.validate()?;
    if let Some(a2) = &a.a2 {
        a2.validate()?;
    }
    let domain = domain_check(&a.a0, &a.a1, &ctx);
    if !domain.is_bounded() {
        // no receiver at all, or none known
        let membership = if domain.status == Status::Open { Membership::Open } else { Membership::No };
        let body = match a.a2 {
            Some(_) => json!({ "membership": membership, "rules": domain.rules }),
            None => json!({ "domain": domain, "pieces": [] }),
        };
        return Ok(Report { body, unsettled: membership == Membership::Open });
    }
    let region = receiving_region(&a.a0, &a.a1, &ctx)?;
    match &a.a2 {
        None => Ok(Report::settled(json!(region))),
        Some(a2) => {
            let j = member(a2, &region)?;
            let unsettled = j.membership == Membership::Open;
            Ok(Report { body: json!(j), unsettled })
        }
    }
}

fn divergence(a: &DivergenceArgs) -> Outcome {
    let r = limits::divergence_demo(a.k, a.phi0)?;
    let rows: Vec<Value> = r.values.iter().map(|&(k, v)| json!({ "k": k, "ln_k": (k as f64).ln(), "pairing": v })).collect();
    Ok(Report::settled(json!({
        "phi0": r.phi0, "K": a.k, "slope": r.slope, "intercept": r.intercept, "rows": rows,
    })))
}
