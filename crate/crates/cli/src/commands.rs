use std::path::Path;

use geowb::catalog::{self, Params};
use geowb::existence::cohomology::{bott_chern_dimensions, invariant_ddbar_lemma_report, DdbarReport};
use geowb::existence::families::{
    fps_report, ft8_report, preset_lambda, st10_report, FpsParams, FPS_LAMBDA, FPS_METRIC, FT8_LAMBDA,
    ST10_LAMBDA,
};
use geowb::existence::holomorphic::{exact_simple_holomorphic_search, verify_simple_holomorphic_certificate};
use geowb::existence::obstruction::{
    certificate_to_json, library_certificate, parse_certificate, search_certificates, verify_obstruction_certificate,
    AnyCertificate, CertificateMode, CertificateReport,
};
use geowb::existence::sweep::formula_oracle_sweep;
use geowb::json::{self, AnyStructure};
use geowb::metric::{classify, HermitianMetric};
use geowb::positivity::quadric::{omega_a_matrix, QuadricConfig};
use geowb::positivity::{quadric_transversality, transversality, SamplingConfig, TransversalityVerdict};
use geowb::{Backend, CFloat, GaussRat, Scalar, StructurePresentation};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::input::{file_backend, load_params, on_backend, read, CliError, CliResult, Loaded};

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// `None` keeps each input's own backend.
    pub backend: Option<Backend>,
    pub epsilon: f64,
    pub samples: usize,
    pub seed: u64,
    pub json: bool,
}

impl RunConfig {
    pub fn check(&self) -> CliResult<()> {
        if self.samples == 0 {
            return Err(CliError::Usage("--samples must be positive".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(CliError::Usage("--epsilon must be positive".into()));
        }
        Ok(())
    }

    /// Scalar tolerance for a backend: exact comparisons ignore it.
    fn eps<S: Scalar>(&self) -> f64 {
        match S::BACKEND {
            Backend::Exact => 0.0,
            Backend::Float => self.epsilon,
        }
    }

    fn sampling(&self) -> SamplingConfig {
        SamplingConfig {
            samples: self.samples,
            seed: self.seed,
            eps: self.epsilon,
            ..SamplingConfig::default()
        }
    }
}

/// Rendered result and exit code.
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub code: i32,
}

fn outcome<T: Serialize>(report: &T, text: String, ok: bool) -> Outcome {
    Outcome {
        text,
        json: serde_json::to_value(report).expect("serializable"),
        code: if ok { 0 } else { 1 },
    }
}

macro_rules! on_loaded {
    ($loaded:expr, |$p:ident| $body:expr) => {
        match $loaded {
            Loaded::Exact($p) => $body,
            Loaded::Float($p) => $body,
        }
    };
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualJson {
    pub generator: usize,
    pub d2: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub structure: String,
    pub backend: Backend,
    pub passed: bool,
    pub integrable: bool,
    pub max_residual: f64,
    pub residuals: Vec<ResidualJson>,
    pub warnings: Vec<String>,
    pub exhaustive_failures: Option<usize>,
}

fn validate_one<S: Scalar>(p: &StructurePresentation<S>, cfg: &RunConfig, exhaustive: bool) -> Outcome {
    let eps = cfg.eps::<S>();
    let r = if exhaustive { p.validate_exhaustive(eps) } else { p.validate(eps) };
    let report = ValidateReport {
        structure: r.name.clone(),
        backend: S::BACKEND,
        passed: r.passed,
        integrable: r.integrable,
        max_residual: r.max_residual,
        residuals: r
            .residuals
            .iter()
            .map(|(i, f)| ResidualJson {
                generator: *i,
                d2: f.to_string(),
            })
            .collect(),
        warnings: r.warnings.clone(),
        exhaustive_failures: r.exhaustive.as_ref().map(|e| e.failures),
    };
    outcome(&report, r.to_string(), r.passed)
}

pub fn validate(s: Loaded, cfg: &RunConfig, exhaustive: bool) -> Outcome {
    on_loaded!(s, |p| validate_one(&p, cfg, exhaustive))
}

fn classify_one<S: Scalar>(p: &StructurePresentation<S>, metric: Option<&Path>, cfg: &RunConfig) -> CliResult<Outcome> {
    let eps = cfg.eps::<S>();
    let m = match metric {
        Some(path) => json::parse_metric::<S>(&read(path)?, eps)?,
        None => HermitianMetric::identity(p.n()),
    };
    let r = classify(p, &m, eps)?;
    Ok(outcome(&r, r.to_string(), true))
}

pub fn classify_metric(s: Loaded, metric: Option<&Path>, cfg: &RunConfig) -> CliResult<Outcome> {
    on_loaded!(s, |p| classify_one(&p, metric, cfg))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransverseReport {
    pub n: usize,
    pub p: usize,
    pub backend: Backend,
    pub verdict: TransversalityVerdict,
}

fn render_transverse(r: &TransverseReport) -> Outcome {
    let text = format!("transversality (n = {}, p = {}, {}): {}\n", r.n, r.p, r.backend, r.verdict);
    outcome(r, text, !r.verdict.is_falsified())
}

fn transverse_form<S: Scalar>(text: &str, p: usize, cfg: &RunConfig) -> CliResult<Outcome> {
    let form = json::parse_form::<S>(text)?;
    let n = form.rank();
    if p > n {
        return Err(CliError::Usage(format!("p = {p} exceeds n = {n}")));
    }
    let verdict = transversality(&form, p, &cfg.sampling())?;
    Ok(render_transverse(&TransverseReport {
        n,
        p,
        backend: S::BACKEND,
        verdict,
    }))
}

pub fn transverse(form: Option<&Path>, p: Option<usize>, omega_a: Option<&str>, cfg: &RunConfig) -> CliResult<Outcome> {
    match (form, omega_a) {
        (Some(path), None) => {
            let p = p.ok_or_else(|| CliError::Usage("--p is required with --form".into()))?;
            let text = read(path)?;
            match cfg.backend.or(file_backend(&text)?).unwrap_or(Backend::Exact) {
                Backend::Exact => transverse_form::<GaussRat>(&text, p, cfg),
                Backend::Float => transverse_form::<CFloat>(&text, p, cfg),
            }
        }
        (None, Some(a)) => {
            let qcfg = QuadricConfig {
                seed: cfg.seed,
                eps: cfg.epsilon,
                ..QuadricConfig::default()
            };
            let verdict = match cfg.backend.unwrap_or(Backend::Exact) {
                Backend::Exact => {
                    let a = GaussRat::parse_parts(a, "0")?;
                    quadric_transversality(&omega_a_matrix(a, (1, 6))?, &qcfg)?
                }
                Backend::Float => {
                    let a = CFloat::parse_parts(a, "0")?;
                    quadric_transversality(&omega_a_matrix(a, (1, 6))?, &qcfg)?
                }
            };
            Ok(render_transverse(&TransverseReport {
                n: 4,
                p: 2,
                backend: cfg.backend.unwrap_or(Backend::Exact),
                verdict,
            }))
        }
        _ => Err(CliError::Usage("give exactly one of --form or --omega-a".into())),
    }
}

fn take<const K: usize>(all: &mut Params, names: &[&str; K], default: impl Fn(usize) -> GaussRat) -> [GaussRat; K] {
    std::array::from_fn(|k| all.remove(names[k]).unwrap_or_else(|| default(k)))
}

pub fn psymplectic(family: &str, params: Option<&Path>, preset: Option<&str>) -> CliResult<Outcome> {
    let entry = catalog::entry(family)?;
    if !["fps6", "ft8", "st10"].contains(&family) {
        return Err(CliError::Usage(format!("{family} is not one of fps6, ft8, st10")));
    }
    let mut all = Params::new();
    if let Some(name) = preset {
        all.extend(entry.preset(name)?);
        all.extend(preset_lambda(family, name).into_iter().map(|(k, v)| (k.to_string(), v)));
    }
    all.extend(load_params(params)?);
    let mut structural = Params::new();
    for s in &entry.params {
        if let Some(v) = all.remove(s.name) {
            structural.insert(s.name.to_string(), v);
        }
    }
    let coeffs = entry.resolve(&structural)?;
    let zero = |_| GaussRat::zero();
    let report = match family {
        "fps6" => {
            let letters = take(&mut all, &FPS_METRIC, |k| if k < 3 { GaussRat::one() } else { GaussRat::zero() });
            let lmn = take(&mut all, &FPS_LAMBDA, zero);
            let p = FpsParams {
                abcde: coeffs.try_into().expect("5 slots"),
                letters,
                lmn,
            };
            leftover(&all)?;
            fps_report(&p, 0.0)?
        }
        "ft8" => {
            let lam = take(&mut all, &FT8_LAMBDA, zero);
            leftover(&all)?;
            ft8_report(&coeffs.try_into().expect("12 slots"), &lam, 0.0)?
        }
        _ => {
            let lam = take(&mut all, &ST10_LAMBDA, zero);
            leftover(&all)?;
            st10_report(&coeffs.try_into().expect("22 slots"), &lam, 0.0)?
        }
    };
    Ok(outcome(&report, report.to_string(), report.psymplectic))
}

fn leftover(all: &Params) -> CliResult<()> {
    match all.keys().next() {
        Some(k) => Err(CliError::Usage(format!("unknown parameter `{k}`"))),
        None => Ok(()),
    }
}

fn verify<S: Scalar>(
    p: &StructurePresentation<S>,
    cert: &geowb::existence::ObstructionCertificate<S>,
    cfg: &RunConfig,
) -> CliResult<Outcome> {
    let r: CertificateReport = verify_obstruction_certificate(p, cert, cfg.eps::<S>())?;
    Ok(outcome(&r, r.to_string(), r.valid))
}

fn float_cert(
    c: &geowb::existence::ObstructionCertificate<GaussRat>,
) -> geowb::existence::ObstructionCertificate<CFloat> {
    let f = |x: &GaussRat| CFloat::from_c64(x.to_c64());
    geowb::existence::ObstructionCertificate {
        name: c.name.clone(),
        beta: c.beta.convert(),
        mode: c.mode,
        p: c.p,
        decomposition: c
            .decomposition
            .iter()
            .map(|(k, s)| {
                let factors = s.factors.iter().map(|r| r.iter().map(f).collect()).collect();
                (f(k), geowb::positivity::SimpleForm::new(factors))
            })
            .collect(),
    }
}

fn verify_any(s: Loaded, cert: AnyCertificate, cfg: &RunConfig) -> CliResult<Outcome> {
    match (s, cert) {
        (Loaded::Exact(p), AnyCertificate::Exact(c)) => verify(&p, &c, cfg),
        (Loaded::Float(p), AnyCertificate::Float(c)) => verify(&p, &c, cfg),
        (Loaded::Exact(p), AnyCertificate::Float(c)) => verify(&p.convert::<CFloat>(), &c, cfg),
        (Loaded::Float(p), AnyCertificate::Exact(c)) => verify(&p, &float_cert(&c), cfg),
    }
}

pub struct ObstructArgs<'a> {
    pub cert: Option<&'a Path>,
    pub search: bool,
    pub budget: usize,
    pub p: Option<usize>,
    pub mode: CertificateMode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub structure: String,
    pub p: usize,
    pub mode: CertificateMode,
    pub budget: usize,
    pub found: Vec<geowb::existence::obstruction::CertificateJson>,
}

fn search_one<S: Scalar>(pres: &StructurePresentation<S>, a: &ObstructArgs, p: usize, cfg: &RunConfig) -> CliResult<Outcome> {
    let found = search_certificates(pres, p, a.mode, a.budget, cfg.eps::<S>())?;
    let report = SearchReport {
        structure: pres.name.clone(),
        p,
        mode: a.mode,
        budget: a.budget,
        found: found.iter().map(|c| certificate_to_json(c, Some(&pres.name))).collect(),
    };
    let mut text = format!(
        "search on {} (p = {p}, mode {}, budget {}): {} certificate(s)\n",
        pres.name,
        a.mode.as_str(),
        a.budget,
        found.len()
    );
    for c in &found {
        text.push_str(&format!("  β = {}\n", c.beta));
    }
    Ok(outcome(&report, text, !found.is_empty()))
}

pub fn obstruct(
    structure: Option<&Path>,
    key: Option<&str>,
    params: Option<&Path>,
    a: ObstructArgs,
    cfg: &RunConfig,
) -> CliResult<Outcome> {
    if a.search {
        let p = a.p.ok_or_else(|| CliError::Usage("--search needs --p".into()))?;
        let s = crate::input::load_structure(structure, key, params, cfg.backend)?;
        return on_loaded!(s, |pres| search_one(&pres, &a, p, cfg));
    }
    match a.cert {
        Some(path) => {
            let (j, cert) = parse_certificate(&read(path)?)?;
            let s = match (structure, key, &j.structure) {
                (None, None, Some(k)) => on_backend(catalog::build(k, &Params::new())?.into(), cfg.backend)?,
                _ => crate::input::load_structure(structure, key, params, cfg.backend)?,
            };
            verify_any(s, cert, cfg)
        }
        None => {
            let k = key.ok_or_else(|| CliError::Usage("give --cert, --search, or a --catalog key with a built-in certificate".into()))?;
            let base = k.split(':').next().unwrap_or(k);
            let cert = library_certificate(base)
                .ok_or_else(|| CliError::Usage(format!("no built-in certificate for {base}")))?;
            let s = crate::input::load_structure(None, Some(k), params, cfg.backend)?;
            verify_any(s, cert, cfg)
        }
    }
}

pub fn bc_dims(s: Loaded, cfg: &RunConfig) -> CliResult<Outcome> {
    on_loaded!(s, |p| {
        let t = bott_chern_dimensions(&p, eps_of(cfg, &p))?;
        Ok(outcome(&t, t.to_string(), true))
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DdbarScan {
    pub structure: String,
    pub holds: bool,
    pub reports: Vec<DdbarReport>,
}

pub fn ddbar_lemma(s: Loaded, p: Option<usize>, q: Option<usize>, cfg: &RunConfig) -> CliResult<Outcome> {
    on_loaded!(s, |pres| {
        let eps = eps_of(cfg, &pres);
        let n = pres.n();
        let pairs: Vec<(usize, usize)> = match (p, q) {
            (Some(p), Some(q)) => vec![(p, q)],
            (None, None) => (0..=n).flat_map(|p| (0..=n).map(move |q| (p, q))).collect(),
            _ => return Err(CliError::Usage("give both --p and --q, or neither to scan every bidegree".into())),
        };
        let reports = pairs
            .into_iter()
            .map(|(p, q)| invariant_ddbar_lemma_report(&pres, p, q, eps))
            .collect::<geowb::Result<Vec<_>>>()?;
        let holds = reports.iter().all(|r| r.holds);
        let text = if reports.len() == 1 {
            reports[0].to_string()
        } else {
            let failing: Vec<String> = reports
                .iter()
                .filter(|r| !r.holds)
                .map(|r| format!("({},{})", r.p, r.q))
                .collect();
            if holds {
                format!("{}: ∂∂̄-lemma (invariant-level) holds at every bidegree\n", pres.name)
            } else {
                format!("{}: ∂∂̄-lemma (invariant-level) fails at {}\n", pres.name, failing.join(", "))
            }
        };
        let scan = DdbarScan {
            structure: pres.name.clone(),
            holds,
            reports,
        };
        Ok(outcome(&scan, text, holds))
    })
}

pub fn simple_holo(s: Loaded, q: usize, cert: Option<&Path>, cfg: &RunConfig) -> CliResult<Outcome> {
    on_loaded!(s, |pres| {
        let eps = eps_of(cfg, &pres);
        if let Some(path) = cert {
            let xi = json::parse_form(&read(path)?)?;
            let ok = verify_simple_holomorphic_certificate(&pres, &xi, q, eps)?;
            let report = json!({"structure": pres.name, "q": q, "certificate": xi.to_string(), "verified": ok});
            let text = format!(
                "{}: ξ = {xi} is {}an exact simple holomorphic {q}-form\n",
                pres.name,
                if ok { "" } else { "not " }
            );
            return Ok(Outcome {
                text,
                json: report,
                code: if ok { 0 } else { 1 },
            });
        }
        let v = exact_simple_holomorphic_search(&pres, q, eps)?;
        let r = v.report(&pres.name, q);
        Ok(outcome(&r, r.to_string(), v.is_obstruction()))
    })
}

fn eps_of<S: Scalar>(cfg: &RunConfig, _p: &StructurePresentation<S>) -> f64 {
    cfg.eps::<S>()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryJson {
    pub key: String,
    pub kind: String,
    pub params: Vec<(String, String)>,
    pub constraint: Option<String>,
    pub provenance: String,
    pub caveat: Option<String>,
    pub presets: Vec<String>,
    pub backend: Backend,
}

fn entry_json(e: &catalog::CatalogEntry) -> EntryJson {
    EntryJson {
        key: e.key.clone(),
        kind: e.kind.as_str().into(),
        params: e.params.iter().map(|p| (p.name.to_string(), p.default.to_string())).collect(),
        constraint: e.constraint.map(str::to_string),
        provenance: e.provenance.clone(),
        caveat: e.caveat.map(str::to_string),
        presets: e.presets.iter().map(|(n, _)| n.to_string()).collect(),
        backend: if e.float { Backend::Float } else { Backend::Exact },
    }
}

pub fn catalog_list() -> Outcome {
    let entries: Vec<EntryJson> = catalog::entries().iter().map(entry_json).collect();
    let mut text = String::new();
    for e in &entries {
        text.push_str(&format!("{:<16} {:<10} {}\n", e.key, e.kind, e.provenance));
    }
    outcome(&entries, text, true)
}

pub fn catalog_show(key: &str, params: Option<&Path>) -> CliResult<Outcome> {
    let base = key.split(':').next().unwrap_or(key);
    let e = catalog::entry(base)?;
    let built: AnyStructure = catalog::build(key, &load_params(params)?)?.into();
    let structure = built.to_json();
    let meta = entry_json(&e);
    let mut text = format!("{} ({})\n  {}\n", meta.key, meta.kind, meta.provenance);
    if let Some(c) = &meta.constraint {
        text.push_str(&format!("  constraint: {c}\n"));
    }
    if let Some(c) = &meta.caveat {
        text.push_str(&format!("  caveat: {c}\n"));
    }
    if !meta.params.is_empty() {
        let ps: Vec<String> = meta.params.iter().map(|(n, d)| format!("{n} = {d}")).collect();
        text.push_str(&format!("  parameters (defaults): {}\n", ps.join(", ")));
    }
    if !meta.presets.is_empty() {
        text.push_str(&format!("  presets: {}\n", meta.presets.join(", ")));
    }
    match &built {
        AnyStructure::Exact(p) => text.push_str(&p.to_string()),
        AnyStructure::Float(p) => text.push_str(&p.to_string()),
    }
    // the JSON form is the structure file itself, so it can be fed back in
    Ok(Outcome {
        text,
        json: serde_json::to_value(&structure).expect("serializable"),
        code: 0,
    })
}

pub fn sweep(family: &str, count: usize, cfg: &RunConfig) -> CliResult<Outcome> {
    let s = formula_oracle_sweep(family, count, cfg.seed)?;
    let text = format!(
        "{}: {} tuples (seed {}), formula zero {}, direct zero {}, disagreements {}, coefficient mismatches {}\n",
        s.family, s.tuples, s.seed, s.formula_zero, s.direct_zero, s.disagreements, s.coefficient_mismatches
    );
    let ok = s.disagreements == 0 && s.coefficient_mismatches == 0;
    Ok(outcome(&s, text, ok))
}

