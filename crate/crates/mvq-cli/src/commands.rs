//! Command implementations.

use std::fs;
use std::path::{Path, PathBuf};

use mvq_core::extension::{chain_radius_check, verify_extension, Extension, ExtensionParams};
use mvq_core::mvf::{self, fixtures, Mesh, SampledMvf};
use mvq_core::nagata::{
    grid_cover, interval_cover, product_cover, s_multiplicity, verify_nagata_bound, ProbeStrategy,
};
use mvq_core::qspace::{self, EXHAUSTIVE_CAP};
use mvq_core::spaces::{linear_bicombing, Norm, Space};

use crate::report::{
    self, ClusterSummaryDoc, CoverConfigDoc, CoverReportDoc, ExtendConfigDoc, ExtendReportDoc,
    MultiplicityDoc,
};
use crate::wire::{CoverDoc, DecompositionDoc, MatchingDoc, MeshDoc, MvfTableDoc, QPointDoc};
use crate::{CliError, NormArg, EXIT_BOUND, EXIT_PASS};

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn metric(
    a_path: &Path,
    b_path: &Path,
    norm: NormArg,
    out: Option<&Path>,
) -> Result<u8, CliError> {
    let a_doc: QPointDoc = read_json(a_path)?;
    let b_doc: QPointDoc = read_json(b_path)?;
    let a = a_doc.to_qpoint()?;
    let b = b_doc.to_qpoint()?;
    let space = resolve_space(&a_doc, &b_doc, norm, a.dim())?;
    let matching = qspace::optimal_permutation(&space, &a, &b)?;
    let solver = if a.q() <= EXHAUSTIVE_CAP {
        let exact = qspace::s_metric_exact(&space, &a, &b)?;
        debug_assert_eq!(exact, matching.value);
        "exact"
    } else {
        "bottleneck"
    };
    println!("value: {}", matching.value);
    println!("sigma: {:?}", matching.sigma);
    println!("solver: {solver}");
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        report::write_json(
            &dir.join("matching.json"),
            &MatchingDoc {
                sigma: matching.sigma.clone(),
                value: matching.value,
            },
        )?;
    }
    Ok(EXIT_PASS)
}

fn resolve_space(
    a: &QPointDoc,
    b: &QPointDoc,
    norm: NormArg,
    dim: usize,
) -> Result<Space, CliError> {
    match (&a.space, &b.space) {
        (Some(sa), Some(sb)) if sa != sb => {
            Err(CliError::input("the two files declare different spaces".into()))
        }
        (Some(s), _) | (None, Some(s)) => s.to_space(),
        (None, None) => {
            let norm = match norm {
                NormArg::Euclidean => Norm::Euclidean,
                NormArg::Sup => Norm::Sup,
                NormArg::One => Norm::One,
            };
            Space::new(dim, norm).map_err(CliError::from)
        }
    }
}

pub struct ExtendArgs {
    pub fixture: Option<String>,
    pub input: Option<PathBuf>,
    pub mesh_n: usize,
    pub pairs: usize,
    pub seed: u64,
    pub tol: f64,
    pub lip_inflation: f64,
    pub lip: Option<f64>,
    pub base_point: Option<String>,
    pub export_table: Option<PathBuf>,
    pub out: PathBuf,
}

/// Stores the map sampled over the mesh as a table file that
/// `extend --input` can load back.
fn export_table(path: &Path, f: &SampledMvf, mesh: &Mesh) -> Result<(), CliError> {
    let values: Vec<QPointDoc> = mesh
        .points()
        .iter()
        .map(|p| f.eval(p).map(|v| QPointDoc::from_qpoint(&v)))
        .collect::<Result<_, _>>()?;
    let doc = MvfTableDoc {
        domain: MeshDoc::from_mesh(mesh),
        values,
    };
    report::write_json(path, &doc)
}

fn load_map(args: &ExtendArgs) -> Result<(SampledMvf, Mesh, Option<String>, Option<String>), CliError> {
    match (&args.fixture, &args.input) {
        (Some(name), None) => {
            let f = fixtures::by_name(name).ok_or_else(|| {
                CliError::input(format!(
                    "unknown fixture {name:?}; available: {}",
                    fixtures::NAMES.join(", ")
                ))
            })?;
            let sphere = mvf::sample_sphere(1, args.mesh_n, args.seed)?;
            Ok((f, sphere, Some(name.clone()), None))
        }
        (None, Some(path)) => {
            let doc: MvfTableDoc = read_json(path)?;
            let f = doc.to_mvf()?;
            let sphere = doc.domain.to_mesh()?;
            Ok((f, sphere, None, Some(path.display().to_string())))
        }
        _ => Err(CliError::input(
            "provide exactly one of --fixture or --input".into(),
        )),
    }
}

fn parse_base_point(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|e| CliError::input(format!("bad base point coordinate {part:?}: {e}")))
        })
        .collect()
}

pub fn extend(args: ExtendArgs) -> Result<u8, CliError> {
    let (f, sphere, fixture, input) = load_map(&args)?;
    if let Some(path) = &args.export_table {
        export_table(path, &f, &sphere)?;
        println!("table: {}", path.display());
    }
    let dim = f.domain().dim();
    let base_point = match &args.base_point {
        Some(text) => parse_base_point(text)?,
        None => {
            let mut e1 = vec![0.0; dim];
            e1[0] = 1.0;
            e1
        }
    };
    let lip_estimate = match args.lip {
        Some(lip) => lip,
        None => mvf::lipschitz_estimate(&f, &sphere, args.pairs, args.seed)?,
    };
    let lip_used = lip_estimate * args.lip_inflation;
    let bicombing = linear_bicombing(*f.target());
    let params = ExtensionParams::from_lip(lip_used, bicombing.gamma(), base_point.clone());
    let d_budget = params.d_budget;
    let ext = Extension::build(&f, &bicombing, params)?;
    let ball = mvf::sample_ball(dim - 1, args.mesh_n, args.seed)?;
    let sweep = verify_extension(&ext, &sphere, &ball, args.pairs, args.seed, args.tol)?;
    let chain = chain_radius_check(f.target(), ext.clusters(), d_budget);

    let doc = ExtendReportDoc {
        version: report::VERSION.to_string(),
        command: "extend".to_string(),
        config: ExtendConfigDoc {
            seed: args.seed,
            mesh_n: args.mesh_n,
            pairs: args.pairs,
            tol: args.tol,
            lip_inflation: args.lip_inflation,
            lip_supplied: args.lip,
            fixture,
            input,
            base_point,
        },
        q: f.q(),
        gamma: sweep.report.gamma,
        lip_estimate,
        lip_used,
        d_budget,
        clusters: ClusterSummaryDoc {
            s: ext.clusters().s(),
            sizes: ext.clusters().clusters.iter().map(|c| c.size()).collect(),
            chain_worst_ratio: chain.worst_ratio,
            chain_pass: chain.pass,
        },
        boundary_error: sweep.report.boundary_error,
        boundary_tol: sweep.report.boundary_tol,
        boundary_pass: sweep.report.boundary_pass,
        empirical_lip: sweep.report.empirical_lip,
        lip_bound: sweep.report.lip_bound,
        lip_pass: sweep.report.lip_pass,
        origin_worst: sweep.report.origin_worst,
        origin_bound: sweep.report.origin_bound,
        origin_pass: sweep.report.origin_pass,
        all_pass: sweep.report.all_pass() && chain.pass,
    };
    fs::create_dir_all(&args.out)?;
    report::write_json(&args.out.join("extend_report.json"), &doc)?;
    report::write_json(
        &args.out.join("decomposition.json"),
        &DecompositionDoc::from_decomposition(ext.clusters(), d_budget),
    )?;
    report::write_pairs_csv(&args.out.join("extend_pairs.csv"), &sweep.pair_samples)?;

    println!("Lip(f) estimate: {lip_estimate}");
    println!("boundary error: {} (tol {})", doc.boundary_error, doc.boundary_tol);
    println!(
        "empirical Lip(F): {} <= bound {}: {}",
        doc.empirical_lip, doc.lip_bound, doc.lip_pass
    );
    println!(
        "near-origin ratio: {} <= bound {}: {}",
        doc.origin_worst, doc.origin_bound, doc.origin_pass
    );
    println!("report: {}", args.out.join("extend_report.json").display());
    Ok(if doc.all_pass { EXIT_PASS } else { EXIT_BOUND })
}

pub struct CoverArgs {
    pub c: f64,
    pub s: f64,
    pub lo: f64,
    pub hi: f64,
    pub dim: usize,
    pub q: usize,
    pub probes: usize,
    pub seed: u64,
    pub out: PathBuf,
}

pub fn cover(args: CoverArgs) -> Result<u8, CliError> {
    let base = if args.dim == 1 {
        interval_cover(args.c, args.s, args.lo, args.hi)?
    } else {
        grid_cover(
            args.c,
            args.s,
            &vec![args.lo; args.dim],
            &vec![args.hi; args.dim],
        )?
    };
    let probes = ProbeStrategy {
        count: args.probes,
        seed: args.seed,
    };
    let base_mult = s_multiplicity(&base, args.s, &probes)?;
    let product = product_cover(&base, args.q)?;
    let (nagata, per_probe) = verify_nagata_bound(&base, base_mult, args.q, args.s, &probes)?;

    let doc = CoverReportDoc {
        version: report::VERSION.to_string(),
        command: "cover".to_string(),
        config: CoverConfigDoc {
            seed: args.seed,
            probes: args.probes,
            c: args.c,
            s: args.s,
            lo: args.lo,
            hi: args.hi,
            dim: args.dim,
            q: args.q,
        },
        base_members: base.members.len(),
        base_multiplicity: MultiplicityDoc {
            value: nagata.base_multiplicity,
            exact: nagata.base_exact,
        },
        product_members: product.index_multisets.len(),
        product_multiplicity: MultiplicityDoc {
            value: nagata.product_multiplicity,
            exact: false,
        },
        bound: nagata.bound,
        pass: nagata.pass,
        non_vacuous: nagata.non_vacuous,
        coverage_ok: nagata.coverage_ok,
    };
    fs::create_dir_all(&args.out)?;
    report::write_json(&args.out.join("cover.json"), &CoverDoc::from_cover(&base))?;
    report::write_json(&args.out.join("cover_report.json"), &doc)?;
    report::write_probes_csv(&args.out.join("cover_probes.csv"), &per_probe)?;

    println!(
        "base multiplicity: {} ({})",
        doc.base_multiplicity.value,
        if doc.base_multiplicity.exact { "exact" } else { "lower bound" }
    );
    println!(
        "product multiplicity: {} (lower bound) <= bound {}: {}",
        doc.product_multiplicity.value, doc.bound, doc.pass
    );
    println!("report: {}", args.out.join("cover_report.json").display());
    Ok(if nagata.pass { EXIT_PASS } else { EXIT_BOUND })
}

fn expected_monodromy(name: &str, q: usize) -> Vec<usize> {
    match name {
        "half-angle" => vec![1, 0],
        _ => (0..q).collect(),
    }
}

pub fn examples(
    name: &str,
    mesh_n: usize,
    pairs: usize,
    seed: u64,
    tol: f64,
    lip_inflation: f64,
) -> Result<u8, CliError> {
    let f = fixtures::by_name(name).ok_or_else(|| {
        CliError::input(format!(
            "unknown fixture {name:?}; available: {}",
            fixtures::NAMES.join(", ")
        ))
    })?;
    println!("mvq {} | fixture {name} | seed {seed}", report::VERSION);
    println!("{}", fixtures::describe(name).unwrap_or(""));

    let monodromy = mvf::branch_monodromy(&f, 360)?;
    let expected = expected_monodromy(name, f.q());
    let monodromy_ok = monodromy == expected;
    println!(
        "monodromy over 360 steps: {monodromy:?} (expected {expected:?}) -> {}",
        if monodromy_ok { "ok" } else { "MISMATCH" }
    );

    let sphere = mvf::sample_sphere(1, mesh_n, seed)?;
    let lip_estimate = mvf::lipschitz_estimate(&f, &sphere, pairs, seed)?;
    println!("Lip(f) estimate: {lip_estimate}");

    let bicombing = linear_bicombing(*f.target());
    let params = ExtensionParams::from_lip(
        lip_estimate * lip_inflation,
        bicombing.gamma(),
        vec![1.0, 0.0],
    );
    let ext = Extension::build(&f, &bicombing, params)?;
    let ball = mvf::sample_ball(f.domain().dim() - 1, mesh_n, seed)?;
    let sweep = verify_extension(&ext, &sphere, &ball, pairs, seed, tol)?;
    println!(
        "extension: boundary {:.3e}, Lip(F) {:.6} <= {:.6}, origin {:.6} <= {:.6} -> {}",
        sweep.report.boundary_error,
        sweep.report.empirical_lip,
        sweep.report.lip_bound,
        sweep.report.origin_worst,
        sweep.report.origin_bound,
        if sweep.report.all_pass() { "ok" } else { "FAIL" }
    );
    Ok(if monodromy_ok && sweep.report.all_pass() {
        EXIT_PASS
    } else {
        EXIT_BOUND
    })
}
