use std::collections::BTreeMap;
use std::time::Instant;

use carathlab_core::annulus::annulus_distance_bracket;
use carathlab_core::glued::BandRegion;
use carathlab_core::report::{fmt_f64, BracketRecord, ProbeRecord, ReportDocument};
use carathlab_core::verify::{
    verify_final_inequality, verify_lower_bound_lemma, verify_one_over_e_products, verify_two_pi_limit,
    verify_upper_bound_lemma,
};
use carathlab_core::{AnnulusConfig, ComplexPoint, Error, GluedSpace};

use crate::{Cli, Command, Format, GluedCommand, RunConfig};

pub struct Outcome {
    pass: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

/// An error with the exit status it maps to: 2 for bad input, 1 otherwise.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Argument(_) | Error::Domain { .. } => 2,
            Error::EscapedDisk { .. } | Error::InvertedBracket { .. } => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

/// Wall-clock seconds per section, kept only when asked for.
struct Timer {
    enabled: bool,
    sections: BTreeMap<String, f64>,
}

impl Timer {
    fn time<T>(&mut self, name: String, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            self.sections.insert(name, start.elapsed().as_secs_f64());
        }
        out
    }

    fn finish(self) -> Option<BTreeMap<String, f64>> {
        self.enabled.then_some(self.sections)
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let run = &cli.run;
    let mut timer = Timer {
        enabled: run.timings,
        sections: BTreeMap::new(),
    };
    let (name, mut doc) = match &cli.command {
        Command::VerifyLemmas => ("verify-lemmas", verify_lemmas(run, &mut timer)?),
        Command::AnnulusDistance { a, b } => ("annulus-distance", annulus_distance(run, a, b, &mut timer)?),
        Command::Glued(g) => ("glued", glued(run, g, &mut timer)?),
    };
    if run.format == Format::Csv && (!doc.brackets.is_empty() || !doc.probes.is_empty()) {
        return Err(Failure::usage(format!(
            "{name} produces bracket or probe records, which are JSON only"
        )));
    }
    doc.timings = timer.finish();
    let text = match run.format {
        Format::Json => doc.to_json(),
        Format::Csv => doc.sweeps_to_csv(),
    };
    match &run.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure {
            code: 1,
            message: format!("cannot write {}: {e}", path.display()),
        })?,
        None => print!("{text}"),
    }
    Ok(Outcome { pass: doc.pass })
}

fn annulus_config(run: &RunConfig, r: f64) -> Result<AnnulusConfig> {
    Ok(AnnulusConfig::new(r)?
        .with_family_degree(run.family_degree)?
        .with_lift_range(run.lift_range)?
        .with_seed(run.seed))
}

fn config_echo(run: &RunConfig) -> serde_json::Value {
    serde_json::json!({
        "R": run.radii(),
        "N": run.truncation,
        "m_max": run.m_max,
        "n_max": run.n_max,
        "format": run.format,
        "seed": run.seed,
        "family_degree": run.family_degree,
        "chain_degree": run.chain_degree,
        "lift_range": run.lift_range,
    })
}

fn verify_lemmas(run: &RunConfig, timer: &mut Timer) -> Result<ReportDocument> {
    let radii = run.radii();
    let configs: Vec<AnnulusConfig> = radii.iter().map(|&r| annulus_config(run, r)).collect::<Result<_>>()?;
    let mut doc = ReportDocument::new("verify-lemmas", config_echo(run));

    // These two do not depend on R.
    doc.sweeps.push(timer.time("upper-bound-lemma".into(), || verify_upper_bound_lemma(run.m_max))?);
    let m_probe = (run.m_max / 100).clamp(10, 10_000);
    doc.sweeps.push(timer.time("two-pi-limit".into(), || verify_two_pi_limit(m_probe))?);

    for cfg in &configs {
        let r = cfg.outer_radius();
        let tag = fmt_f64(r);
        doc.sweeps.push(timer.time(format!("lower-bound-lemma R={tag}"), || {
            verify_lower_bound_lemma(r, run.m_max)
        })?);
        let chain_cfg = cfg.clone().with_family_degree(run.chain_degree)?;
        doc.sweeps.push(timer.time(format!("final-inequality-chain R={tag}"), || {
            verify_final_inequality(&chain_cfg, run.n_max)
        })?);
        doc.sweeps.push(timer.time(format!("one-over-e-products R={tag}"), || {
            verify_one_over_e_products(r, run.n_max)
        })?);
    }
    doc.pass = doc.sweeps.iter().all(|s| s.pass);

    eprintln!("{:<24} {:>14} {:>10} {:>24} {:>6}", "sweep", "R", "threshold", "worst margin", "pass");
    for s in &doc.sweeps {
        let r = s
            .constants
            .get("R")
            .map(|r| format!("{r}"))
            .unwrap_or_else(|| "any".into());
        let t = s.threshold_found.map(|t| t.to_string()).unwrap_or_else(|| "-".into());
        eprintln!("{:<24} {:>14} {:>10} {:>24} {:>6}", s.name, r, t, fmt_f64(s.worst_margin), s.pass);
    }
    for s in doc.sweeps.iter().filter(|s| !s.pass) {
        eprintln!("FAILED: {}", s.name);
    }
    Ok(doc)
}

fn parse_complex(s: &str) -> Result<ComplexPoint> {
    let bad = || Failure::usage(format!("cannot parse {s:?}; expected re,im"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    Ok(ComplexPoint::new(
        re.trim().parse().map_err(|_| bad())?,
        im.trim().parse().map_err(|_| bad())?,
    ))
}

fn annulus_distance(run: &RunConfig, a: &str, b: &str, timer: &mut Timer) -> Result<ReportDocument> {
    let (za, zb) = (parse_complex(a)?, parse_complex(b)?);
    let mut doc = ReportDocument::new("annulus-distance", config_echo(run));
    for r in run.radii() {
        let cfg = annulus_config(run, r)?;
        let br = timer.time(format!("bracket R={}", fmt_f64(r)), || annulus_distance_bracket(&cfg, za, zb))?;
        eprintln!(
            "R = {r}: mobius [{}, {}]  poincare [{}, {}]",
            fmt_f64(br.lower),
            fmt_f64(br.upper),
            fmt_f64(br.poincare_lower()),
            fmt_f64(br.poincare_upper())
        );
        doc.brackets.push(BracketRecord::new("annulus", r, None, a.into(), b.into(), br));
    }
    Ok(doc)
}

fn glued(run: &RunConfig, cmd: &GluedCommand, timer: &mut Timer) -> Result<ReportDocument> {
    let mut doc = ReportDocument::new(
        match cmd {
            GluedCommand::Distance { .. } => "glued distance",
            GluedCommand::Noncompact => "glued noncompact",
            GluedCommand::Complete { .. } => "glued complete",
            GluedCommand::Ball { .. } => "glued ball",
        },
        config_echo(run),
    );
    for r in run.radii() {
        let space = GluedSpace::new(annulus_config(run, r)?, run.truncation)?;
        let n = run.truncation;
        let tag = fmt_f64(r);
        match cmd {
            GluedCommand::Distance { p, q } => {
                let (pp, qq) = (space.parse_point(p)?, space.parse_point(q)?);
                let br = timer.time(format!("bracket R={tag}"), || space.glued_distance_bracket(&pp, &qq))?;
                eprintln!("R = {r}: mobius [{}, {}]", fmt_f64(br.lower), fmt_f64(br.upper));
                doc.brackets
                    .push(BracketRecord::new("glued", r, Some(n), pp.to_string(), qq.to_string(), br));
            }
            GluedCommand::Noncompact => {
                let n_max = run.n_max.min(n);
                let report = timer.time(format!("noncompact R={tag}"), || space.noncompactness_probe(n_max))?;
                eprintln!(
                    "R = {r}: {} of {} points inside the 2/e ball, pairwise lower floor {}",
                    report.count_inside,
                    report.points.len(),
                    fmt_f64(report.pairwise_lower_floor)
                );
                doc.pass &= report.pass;
                doc.probes.push(ProbeRecord::Noncompactness {
                    outer_radius: r,
                    truncation: n,
                    report,
                });
            }
            GluedCommand::Complete { points } => {
                let seq = points
                    .iter()
                    .map(|p| space.parse_point(p))
                    .collect::<carathlab_core::Result<Vec<_>>>()?;
                let report = timer.time(format!("complete R={tag}"), || space.completeness_probe(&seq))?;
                eprintln!(
                    "R = {r}: bracket-Cauchy {}, converging on one sheet {}",
                    report.bracket_cauchy, report.converges_as_predicted
                );
                doc.probes.push(ProbeRecord::Completeness {
                    outer_radius: r,
                    truncation: n,
                    sequence: seq.iter().map(|p| p.to_string()).collect(),
                    report,
                });
            }
            GluedCommand::Ball {
                z,
                inner,
                outer,
                sheets,
                samples,
            } => {
                let center = space.parse_point(z)?;
                let region = BandRegion {
                    inner: *inner,
                    outer: *outer,
                    sheets: if sheets.is_empty() { (0..=n).collect() } else { sheets.clone() },
                };
                let result = timer.time(format!("ball R={tag}"), || {
                    space.ball_inclusion_radius(&center, &region, *samples)
                })?;
                match result.radius {
                    Some(rad) => eprintln!("R = {r}: radius {} (poincare)", fmt_f64(rad)),
                    None => eprintln!("R = {r}: no dyadic radius down to 2^-40"),
                }
                doc.probes.push(ProbeRecord::Ball {
                    outer_radius: r,
                    truncation: n,
                    center: center.to_string(),
                    region,
                    samples: *samples,
                    result,
                });
            }
        }
    }
    Ok(doc)
}
