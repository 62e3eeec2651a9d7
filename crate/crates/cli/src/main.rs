//! `frobstrat`: batch front end for polygon enumeration, the local pull-back
//! model, slope certificates and the strata table.
//!
//! Exit status: 0 when everything checked passes, 1 when a self-check fails,
//! 2 on bad parameters.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use frobstrat::gfield::{prime_power, FieldSpec};
use frobstrat::localmodel::{check_all_points, stratum_census, ModelSpec, PointReport};
use frobstrat::polygon::{
    enumerate_destabilized_polygons, name_polygon, CurveParams, Label, LatticePolygon,
};
use frobstrat::slopecalc::{
    canonical_filtration_degrees, embedding_certificate, euler_characteristic, pullback_degree,
    pushforward, stability_certificate, BundleData, Certificate,
};
use frobstrat::strata::{dualize_polygon, quot_fiber_dimension, strata_table, StrataTable};
use frobstrat::verify::{brute_force_destabilized_polygons, truncation_stability};

#[derive(Parser)]
#[command(
    name = "frobstrat",
    version,
    about = "Frobenius stratification toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List admissible HN polygons of Frobenius pull-backs.
    Enumerate {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Classify every colength-one submodule over F_q and check the membership claims.
    Localmodel {
        /// Field order, a power of 3.
        #[arg(long, default_value_t = 3)]
        q: u64,
        /// Truncation level: S = k[t]/(t^(3M)).
        #[arg(long = "M", default_value_t = 3)]
        m: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Print the dimension table of the four strata.
    Strata {
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        d: i64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Slope certificates for E inside F_* L.
    Certify {
        #[command(flatten)]
        curve: CurveArgs,
        /// Degree of L (defaults to d - 1).
        #[arg(long, allow_negative_numbers = true)]
        t: Option<i64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Dualize polygons: the enumeration at d, or one polygon given as JSON.
    Dual {
        #[command(flatten)]
        curve: CurveArgs,
        /// Polygon as a JSON array of [rank, degree] pairs.
        #[arg(long)]
        vertices: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long, default_value_t = 3)]
    p: u32,
    #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
    g: i64,
    #[arg(long, default_value_t = 3, allow_negative_numbers = true)]
    r: i64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    d: i64,
}

impl CurveArgs {
    fn params(&self) -> Result<CurveParams, Failure> {
        CurveParams::new(self.p, self.g, self.r, self.d).map_err(usage)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Re-run the independent cross-check and compare.
    #[arg(long)]
    verify: bool,
}

enum Failure {
    Usage(String),
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

/// Rendered output plus whether every check passed.
struct Report {
    body: String,
    ok: bool,
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("report types serialize") + "\n"
}

fn label_for(poly: &LatticePolygon, params: &CurveParams) -> Option<Label> {
    name_polygon(poly, params).ok()
}

#[derive(Serialize)]
struct LabeledPolygon {
    label: Option<Label>,
    vertices: LatticePolygon,
}

#[derive(Serialize)]
struct EnumerateOutput {
    params: CurveParams,
    polygons: Vec<LabeledPolygon>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verify: Option<&'static str>,
}

fn cmd_enumerate(curve: &CurveArgs, out: &OutputArgs) -> Result<Report, Failure> {
    let params = curve.params()?;
    let polys = enumerate_destabilized_polygons(&params).map_err(usage)?;
    let check = out
        .verify
        .then(|| brute_force_destabilized_polygons(&params) == polys);
    let ok = check.unwrap_or(true);
    let body = match out.format {
        Format::Json => to_json(&EnumerateOutput {
            params,
            polygons: polys
                .iter()
                .map(|p| LabeledPolygon {
                    label: label_for(p, &params),
                    vertices: p.clone(),
                })
                .collect(),
            verify: check.map(verdict),
        }),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "p={} g={} r={} d={}: {} destabilized polygon(s)",
                params.p,
                params.g,
                params.r,
                params.d,
                polys.len()
            );
            for p in &polys {
                let label = label_for(p, &params).map_or("-", |l| l.as_str());
                let slopes: Vec<String> = p.slopes().iter().map(|s| s.to_string()).collect();
                let _ = writeln!(s, "{label:<6} {p}  slopes {}", slopes.join(", "));
            }
            if let Some(c) = check {
                let _ = writeln!(s, "verify (brute force): {}", verdict(c));
            }
            s
        }
    };
    Ok(Report { body, ok })
}

#[derive(Serialize)]
struct LocalModelOutput {
    q: u64,
    truncation: usize,
    census: std::collections::BTreeMap<Label, usize>,
    claims: &'static str,
    points: Vec<PointReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verify: Option<&'static str>,
}

fn cmd_localmodel(q: u64, m: usize, out: &OutputArgs) -> Result<Report, Failure> {
    match prime_power(q) {
        Some((3, _)) => {}
        _ => return Err(usage(format!("q = {q} is not a power of 3"))),
    }
    let field = FieldSpec::of_order(q).map_err(usage)?;
    let spec = ModelSpec::new(field, m).map_err(usage)?;
    let census = stratum_census(&spec).map_err(usage)?;
    let points = check_all_points(&spec).map_err(usage)?;
    let claims_ok = points.iter().all(PointReport::all_pass);
    let check = if out.verify {
        let stable = truncation_stability(&spec).map_err(usage)?.is_empty();
        let qs = q as usize;
        let counts = census.get(&Label::Psi2) == Some(&(qs * qs))
            && census.get(&Label::Psi3) == Some(&qs)
            && census.get(&Label::Psi4) == Some(&1);
        Some(stable && counts)
    } else {
        None
    };
    let ok = claims_ok && check.unwrap_or(true);
    let body = match out.format {
        Format::Json => to_json(&LocalModelOutput {
            q,
            truncation: m,
            census,
            claims: verdict(claims_ok),
            points,
            verify: check.map(verdict),
        }),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "local model over F_{q}, S = k[t]/(t^{})", 3 * m);
            let _ = writeln!(
                s,
                "{:<16} {:>8} {:>6}  a b c d",
                "point", "colength", "label"
            );
            for r in &points {
                let mark = |b: bool| if b { '+' } else { '!' };
                let _ = writeln!(
                    s,
                    "{:<16} {:>8} {:>6}  {} {} {} {}",
                    r.point.to_string(),
                    r.colength,
                    r.label.as_str(),
                    mark(r.claim_a),
                    mark(r.claim_b),
                    mark(r.claim_c),
                    mark(r.claim_d)
                );
            }
            let summary: Vec<String> = census.iter().map(|(l, n)| format!("{l}: {n}")).collect();
            let _ = writeln!(s, "census: {}", summary.join(", "));
            let _ = writeln!(s, "claims (a)-(d): {}", verdict(claims_ok));
            if let Some(c) = check {
                let _ = writeln!(
                    s,
                    "verify (M+1 recomputation, census counts): {}",
                    verdict(c)
                );
            }
            s
        }
    };
    Ok(Report { body, ok })
}

/// Fiber dimensions against census exponents over F_3, and the dimension
/// table against its dual at `-d`.
fn verify_strata(table: &StrataTable) -> Result<bool, Failure> {
    let spec = ModelSpec::new(FieldSpec::prime(3).map_err(usage)?, 3).map_err(usage)?;
    let census = stratum_census(&spec).map_err(usage)?;
    let exponents_match = census.iter().all(|(label, &count)| {
        quot_fiber_dimension(*label).is_ok_and(|dim| count == 3usize.pow(dim as u32))
    });
    let dual = strata_table(-table.d);
    let duality = table.strata.iter().all(|s| {
        let image = dualize_polygon(&s.polygon);
        dual.strata
            .iter()
            .any(|t| t.polygon == image && t.stratum_dim == s.stratum_dim)
    });
    Ok(exponents_match && duality)
}

#[derive(Serialize)]
struct StrataOutput<'a> {
    #[serde(flatten)]
    table: &'a StrataTable,
    #[serde(skip_serializing_if = "Option::is_none")]
    verify: Option<&'static str>,
}

fn cmd_strata(d: i64, out: &OutputArgs) -> Result<Report, Failure> {
    let table = strata_table(d);
    let check = if out.verify {
        Some(verify_strata(&table)?)
    } else {
        None
    };
    let body = match out.format {
        Format::Json => to_json(&StrataOutput {
            table: &table,
            verify: check.map(verdict),
        }),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "strata of M^s(3, {d}), genus 2, characteristic 3");
            let _ = writeln!(
                s,
                "{:<6} {:>5} {:>5} {:>7}  polygon",
                "label", "fiber", "quot", "stratum"
            );
            let dash = |v: Option<i64>| v.map_or("-".to_string(), |x| x.to_string());
            for r in &table.strata {
                let _ = writeln!(
                    s,
                    "{:<6} {:>5} {:>5} {:>7}  {}",
                    r.label.as_str(),
                    dash(r.fiber_dim),
                    dash(r.quot_dim),
                    r.stratum_dim,
                    r.polygon
                );
            }
            let _ = writeln!(s, "dim M^s = {}", table.moduli_dimension);
            let _ = writeln!(
                s,
                "codimension of destabilized locus = {}",
                table.codimension
            );
            let _ = writeln!(s, "top-dimensional components = {}", table.top_components);
            if let Some(c) = check {
                let _ = writeln!(s, "verify (census exponents, duality): {}", verdict(c));
            }
            s
        }
    };
    Ok(Report {
        body,
        ok: check.unwrap_or(true),
    })
}

#[derive(Serialize)]
struct CertifyOutput {
    params: CurveParams,
    t: i64,
    certificates: Vec<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verify: Option<&'static str>,
}

fn cmd_certify(curve: &CurveArgs, t: Option<i64>, out: &OutputArgs) -> Result<Report, Failure> {
    let params = curve.params()?;
    let t = t.unwrap_or(params.d - 1);
    let p = params.p as i64;
    let certs = vec![
        embedding_certificate(p, params.g, params.r, params.d, t).map_err(usage)?,
        stability_certificate(p, params.g, params.r, params.d, t).map_err(usage)?,
    ];
    let all = certs.iter().all(|c| c.verdict);
    let check = out.verify.then(|| {
        let line = BundleData { rank: 1, degree: t };
        let push = pushforward(line, p, params.g);
        let chi = euler_characteristic(push, params.g) == euler_characteristic(line, params.g);
        let ladder: i64 = canonical_filtration_degrees(p, params.g, t).iter().sum();
        chi && ladder == pullback_degree(push, p).degree
    });
    let ok = all && check.unwrap_or(true);
    let body = match out.format {
        Format::Json => to_json(&CertifyOutput {
            params,
            t,
            certificates: certs,
            verify: check.map(verdict),
        }),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "E of rank {} degree {} in F_*L, deg L = {t} (p={} g={})",
                params.r, params.d, params.p, params.g
            );
            for c in &certs {
                let _ = writeln!(
                    s,
                    "{:?} certificate, mu(F_*L) = {}: {}",
                    c.kind,
                    c.pushforward_slope,
                    verdict(c.verdict)
                );
                for w in &c.witnesses {
                    let _ = writeln!(
                        s,
                        "  subrank {}: bound {} <= threshold {}  {}",
                        w.subrank,
                        w.bound,
                        w.threshold,
                        verdict(w.verdict)
                    );
                }
            }
            if let Some(c) = check {
                let _ = writeln!(
                    s,
                    "verify (Euler characteristic, filtration degrees): {}",
                    verdict(c)
                );
            }
            s
        }
    };
    Ok(Report { body, ok })
}

#[derive(Serialize)]
struct DualPair {
    label: Option<Label>,
    vertices: LatticePolygon,
    dual_label: Option<Label>,
    dual: LatticePolygon,
}

#[derive(Serialize)]
struct DualOutput {
    pairs: Vec<DualPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verify: Option<&'static str>,
}

fn cmd_dual(
    curve: &CurveArgs,
    vertices: Option<&str>,
    out: &OutputArgs,
) -> Result<Report, Failure> {
    let params = curve.params()?;
    let polys = match vertices {
        Some(json) => vec![serde_json::from_str::<LatticePolygon>(json).map_err(usage)?],
        None => enumerate_destabilized_polygons(&params).map_err(usage)?,
    };
    let pairs: Vec<DualPair> = polys
        .iter()
        .map(|p| {
            let dual = dualize_polygon(p);
            let (r, big_d) = p.endpoint();
            let here = CurveParams {
                r,
                d: big_d / params.p as i64,
                ..params
            };
            let there = CurveParams { d: -here.d, ..here };
            let divisible = big_d % params.p as i64 == 0;
            DualPair {
                label: divisible.then(|| label_for(p, &here)).flatten(),
                dual_label: divisible.then(|| label_for(&dual, &there)).flatten(),
                vertices: p.clone(),
                dual,
            }
        })
        .collect();
    let check = out.verify.then(|| {
        let involution = pairs
            .iter()
            .all(|pr| dualize_polygon(&pr.dual) == pr.vertices);
        if vertices.is_some() {
            return involution;
        }
        let mut image: Vec<LatticePolygon> = pairs.iter().map(|pr| pr.dual.clone()).collect();
        image.sort();
        let target = CurveParams {
            d: -params.d,
            ..params
        };
        involution && enumerate_destabilized_polygons(&target).ok() == Some(image)
    });
    let body = match out.format {
        Format::Json => to_json(&DualOutput {
            pairs,
            verify: check.map(verdict),
        }),
        Format::Text => {
            let mut s = String::new();
            let name = |l: Option<Label>| l.map_or("-", |l| l.as_str());
            for pr in &pairs {
                let _ = writeln!(
                    s,
                    "{:<6} {}  ->  {:<6} {}",
                    name(pr.label),
                    pr.vertices,
                    name(pr.dual_label),
                    pr.dual
                );
            }
            if let Some(c) = check {
                let _ = writeln!(
                    s,
                    "verify (involution, image = enumeration at -d): {}",
                    verdict(c)
                );
            }
            s
        }
    };
    Ok(Report {
        body,
        ok: check.unwrap_or(true),
    })
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Enumerate { curve, out } => cmd_enumerate(curve, out),
        Command::Localmodel { q, m, out } => cmd_localmodel(*q, *m, out),
        Command::Strata { d, out } => cmd_strata(*d, out),
        Command::Certify { curve, t, out } => cmd_certify(curve, *t, out),
        Command::Dual {
            curve,
            vertices,
            out,
        } => cmd_dual(curve, vertices.as_deref(), out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.body);
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
