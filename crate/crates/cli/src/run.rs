//! Executes the analyses of a run configuration.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use lightlike_core::catalog;
use lightlike_core::curvature::{curvature_report, weingarten_residuals, CurvatureReport, Flags, Tolerances};
use lightlike_core::graph::{classify_graph, cross_validate_graph, graph_point_data, GraphClass, GraphSurface};
use lightlike_core::grid::Grid;
use lightlike_core::normalized::normalized_report;
use lightlike_core::special::{
    desitter_horosphere_check, embed, lightcone_theorem_check, specialization_check, AmbientSlice, SliceKind,
};
use lightlike_core::surface::{frame_derivatives, SurfacePatch};
use lightlike_core::variation::{
    area, cayley_hamilton_check, first_variation_check, second_variation_check, Profile, ScalarField, VariationResult,
    VariationSpec,
};
use lightlike_core::GeometryError;

use crate::config::{Analysis, RunConfig};
use crate::dump::{Cell, FieldDump};
use crate::error::CliError;
use crate::report::{AnalysisReport, Check, Report};

/// Quadrature resolutions of the convergence study.
pub const CONVERGENCE_GRIDS: [usize; 4] = [11, 21, 41, 81];
/// Stencil steps of the convergence study.
pub const CONVERGENCE_STEPS: [f64; 3] = [4e-2, 2e-2, 1e-2];
/// Differences below this multiple of the value count as exact.
const ROUNDOFF: f64 = 1e-12;

pub const NORMALIZED_FIELDS: [&str; 4] = ["H_tilde_minus", "H_tilde_plus", "K_tilde_minus", "K_tilde_plus"];
pub const GRAPH_FIELDS: [&str; 6] = ["Delta", "graph_mt", "graph_strongly_mt", "mt_quadratic", "phi1", "phi2"];

/// Every field name a dump may request for this surface.
pub fn dump_fields(is_graph: bool) -> Vec<&'static str> {
    let mut v: Vec<&str> = CurvatureReport::SCALAR_NAMES.to_vec();
    v.extend(Flags::NAMES);
    v.extend(NORMALIZED_FIELDS);
    if is_graph {
        v.extend(GRAPH_FIELDS);
    }
    v.sort();
    v
}

/// Results of a run before anything is written.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub dump: Option<FieldDump>,
}

struct Context<'a> {
    cfg: &'a RunConfig,
    patch: SurfacePatch,
    slice: Option<AmbientSlice>,
    graph: Option<GraphSurface>,
    grid: Grid,
    tol: Tolerances,
    reports: Option<Vec<CurvatureReport>>,
}

fn analysis_err(a: Analysis) -> impl Fn(GeometryError) -> CliError {
    move |source| CliError::Analysis { analysis: a.name(), source }
}

fn build_surface(cfg: &RunConfig) -> Result<(SurfacePatch, Option<GraphSurface>), CliError> {
    let s = &cfg.surface;
    let setup = |source| CliError::Analysis { analysis: "surface setup", source };
    Ok(match s.kind.as_str() {
        "expr" => {
            let c = s.coords.as_ref().expect("validated");
            let coords = [c[0].as_str(), c[1].as_str(), c[2].as_str(), c[3].as_str()];
            let patch = SurfacePatch::from_expressions("expr", s.domain().expect("validated"), coords)
                .map_err(|e| CliError::Config(e.to_string()))?;
            (patch, None)
        }
        "graph" => {
            let gs =
                GraphSurface::new(s.f.as_deref().unwrap(), s.g.as_deref().unwrap(), s.domain().expect("validated"))
                    .map_err(|e| CliError::Config(e.to_string()))?;
            (gs.patch(), Some(gs))
        }
        name => {
            let mut patch = catalog::lookup(name, s.param)
                .ok_or_else(|| setup(GeometryError::InvalidInput(format!("unknown catalog surface `{name}`"))))?;
            if let Some(d) = s.domain() {
                patch = patch.with_domain(d);
            }
            (patch, None)
        }
    })
}

impl<'a> Context<'a> {
    fn new(cfg: &'a RunConfig) -> Result<Self, CliError> {
        let (mut patch, graph) = build_surface(cfg)?;
        let slice = match cfg.surface.slice {
            Some(s) => {
                let sl = embed(s.kind(), patch, cfg.grid.n1.max(cfg.grid.n2))
                    .map_err(|source| CliError::Analysis { analysis: "slice embedding", source })?;
                patch = sl.patch.clone();
                Some(sl)
            }
            None => None,
        };
        let grid = Grid::new(patch.domain, cfg.grid.n1, cfg.grid.n2);
        Ok(Context { cfg, patch, slice, graph, grid, tol: cfg.tolerances.classification(), reports: None })
    }

    fn reports(&mut self, a: Analysis) -> Result<&[CurvatureReport], CliError> {
        if self.reports.is_none() {
            let (p, t) = (&self.patch, &self.tol);
            self.reports = Some(self.grid.try_map(|u1, u2| curvature_report(p, u1, u2, t)).map_err(analysis_err(a))?);
        }
        Ok(self.reports.as_deref().unwrap())
    }

    fn variation_spec(&self) -> Result<VariationSpec, CliError> {
        let v = &self.cfg.variation;
        let alpha = match &v.bump {
            Some(b) => ScalarField::bump((b.center[0], b.center[1]), b.radius),
            None => ScalarField::parse(&v.alpha).map_err(|e| CliError::Config(format!("alpha: {e}")))?,
        };
        let mut spec = VariationSpec::new(v.direction.into(), alpha)
            .with_grid(v.grid[0], v.grid[1])
            .with_profile(v.profile.into());
        spec.epsilons = v.epsilons.clone();
        Ok(spec)
    }

    fn run(&mut self, a: Analysis) -> Result<AnalysisReport, CliError> {
        let mut out = AnalysisReport::new(a);
        let err = analysis_err(a);
        let tols = self.cfg.tolerances;
        match a {
            Analysis::Invariants => {
                let reports = self.reports(a)?;
                for name in CurvatureReport::SCALAR_NAMES {
                    let vals = reports.iter().map(|r| r.scalar(name).unwrap());
                    let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
                    out.metric(&format!("{name}_min"), lo);
                    out.metric(&format!("{name}_max"), hi);
                }
                let dm: Vec<f64> = reports.iter().map(|r| r.metric.area_element()).collect();
                let total = self.grid.integrate(&dm).map_err(&err)?;
                out.metric("area", total);
                out.count("nodes", dm.len());
            }
            Analysis::Classify => {
                let reports = self.reports(a)?;
                for (i, name) in Flags::NAMES.iter().enumerate() {
                    out.count(name, reports.iter().filter(|r| r.flags().values()[i]).count());
                }
                let disagree =
                    reports.iter().filter(|r| r.flags().marginally_trapped != r.classification.mt_by_lightcone).count();
                out.count("nodes", reports.len());
                out.checks.push(Check::at_most("mt_verdict_disagreements", disagree as f64, 0.0));
            }
            Analysis::VerifyEgregium => {
                let reports = self.reports(a)?;
                worst(&mut out, reports, "egregium_residual", tols.egregium, |r| r.egregium_residual());
                let routes = reports.iter().map(|r| r.riemann.max_discrepancy()).fold(0.0, f64::max);
                out.metric("riemann_route_discrepancy", routes);
            }
            Analysis::VerifyGaussEq => {
                let reports = self.reports(a)?;
                worst(&mut out, reports, "gauss_equation_residual", tols.gauss_eq, |r| r.gauss_equation_residual());
            }
            Analysis::VerifyWeingarten => {
                let patch = self.patch.clone();
                let reports = self.reports(a)?;
                let res = par_try(reports, |r| weingarten_residuals(&patch, r, tols.fd_step)).map_err(&err)?;
                let plus: Vec<f64> = res.iter().map(|p| p.0).collect();
                let minus: Vec<f64> = res.iter().map(|p| p.1).collect();
                worst_of(&mut out, reports, "weingarten_plus_residual", tols.weingarten, &plus);
                worst_of(&mut out, reports, "weingarten_minus_residual", tols.weingarten, &minus);
            }
            Analysis::CayleyHamilton => {
                let patch = self.patch.clone();
                let reports = self.reports(a)?;
                let ch = par_try(reports, |r| {
                    let d = frame_derivatives(&patch, r.u.0, r.u.1, tols.fd_step)?;
                    Ok(cayley_hamilton_check(r, &d))
                })
                .map_err(&err)?;
                let op: Vec<f64> = ch.iter().map(|c| c.max_operator()).collect();
                let der: Vec<f64> = ch.iter().map(|c| c.max_derivative()).collect();
                worst_of(&mut out, reports, "operator_identity_residual", tols.cayley_hamilton_operator, &op);
                worst_of(&mut out, reports, "derivative_identity_residual", tols.cayley_hamilton_derivative, &der);
            }
            Analysis::Variation1 | Analysis::Variation2 => {
                let spec = self.variation_spec()?;
                let r = if a == Analysis::Variation1 {
                    first_variation_check(&self.patch, &spec)
                } else {
                    second_variation_check(&self.patch, &spec)
                }
                .map_err(&err)?;
                variation_checks(&mut out, &r, a == Analysis::Variation1, tols.variation_rel, tols.variation_abs);
            }
            Analysis::GraphClassify => {
                let gs = self.graph.as_ref().expect("validated");
                let classes = self.grid.try_map(|u1, u2| classify_graph(gs, u1, u2, tols.mt));
                let classes = classes.map_err(&err)?;
                let names = |c: GraphClass| format!("{c:?}");
                let mut counts = BTreeMap::new();
                for c in &classes {
                    *counts.entry(names(*c)).or_insert(0usize) += 1;
                }
                out.verdict = Some(if counts.len() == 1 { names(classes[0]) } else { "Mixed".into() });
                for (k, v) in counts {
                    out.count(&k, v);
                }
                let x = self.grid.try_map(|u1, u2| cross_validate_graph(gs, u1, u2, &self.tol)).map_err(&err)?;
                let vec_res = x.iter().map(|c| c.vector_residual).fold(0.0, f64::max);
                let sq_res = x.iter().map(|c| c.square_residual).fold(0.0, f64::max);
                let mismatch = x.iter().filter(|c| c.graph_class.is_mt() != c.engine_mt).count();
                out.checks.push(Check::at_most("mean_curvature_vector_residual", vec_res, tols.graph));
                out.checks.push(Check::at_most("mean_curvature_square_residual", sq_res, tols.graph));
                out.checks.push(Check::at_most("mt_verdict_mismatches", mismatch as f64, 0.0));
            }
            Analysis::SliceChecks => self.slice_checks(&mut out)?,
            Analysis::Convergence => self.convergence(&mut out)?,
        }
        Ok(out)
    }

    fn slice_checks(&self, out: &mut AnalysisReport) -> Result<(), CliError> {
        let err = analysis_err(Analysis::SliceChecks);
        let slice = self.slice.as_ref().expect("validated");
        let tols = self.cfg.tolerances;
        let (n1, n2) = (self.cfg.grid.n1, self.cfg.grid.n2);
        out.metric("constraint_residual", slice.constraint_residual);
        let spec = specialization_check(slice, n1, n2, &self.tol).map_err(&err)?;
        for (k, v) in &spec.residuals {
            out.checks.push(Check::at_most(k, *v, tols.slice));
        }
        out.count("strongly_mt_nodes", spec.strongly_mt_nodes);
        match slice.kind {
            SliceKind::Lightcone => {
                let t = lightcone_theorem_check(slice, n1, n2, tols.predicate, &self.tol).map_err(&err)?;
                out.checks.push(Check::at_most(
                    "intrinsic_curvature_vs_dual_mean_curvature",
                    t.egregium_residual,
                    tols.slice,
                ));
                out.checks.push(Check::at_most("dual_frame_H_plus_residual", t.h_plus_residual, tols.slice));
                out.checks.push(Check::at_most("dual_frame_H_minus_residual", t.h_minus_residual, tols.slice));
                out.checks.push(Check::at_most("predicate_disagreements", t.predicate_disagreements as f64, 0.0));
                out.metric("dual_frame_H_plus_plus_two", t.h_plus_residual_literal);
                out.metric("dual_frame_H_minus_minus_twice_dual", t.h_minus_residual_literal);
                out.metric("lightcone_product_residual", t.product_residual);
                out.count("mt_nodes", t.mt_nodes);
            }
            SliceKind::DeSitter3 => {
                let h = desitter_horosphere_check(slice, n1, n2, tols.horosphere).map_err(&err)?;
                out.metric("l_plus_deviation", h.deviation[0]);
                out.metric("l_minus_deviation", h.deviation[1]);
                if let Some(r) = h.hyperplane_residual {
                    out.metric("hyperplane_residual", r);
                }
                out.verdict =
                    Some(if h.is_horosphere(tols.horosphere) { "horosphere" } else { "not a horosphere" }.into());
            }
            _ => {}
        }
        Ok(())
    }

    /// Observed orders of the area quadrature and of the first-variation
    /// stencil, each from successive halvings.
    fn convergence(&self, out: &mut AnalysisReport) -> Result<(), CliError> {
        let err = analysis_err(Analysis::Convergence);
        let tols = self.cfg.tolerances;
        let areas: Vec<f64> =
            CONVERGENCE_GRIDS.iter().map(|&n| area(&self.patch, (n, n))).collect::<Result<_, _>>().map_err(&err)?;
        for (n, a) in CONVERGENCE_GRIDS.iter().zip(&areas) {
            out.metric(&format!("area_n{n:03}"), *a);
        }
        let diffs: Vec<f64> = areas.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        order_check(out, "quadrature_order", &diffs, ROUNDOFF * areas[3].abs().max(1.0), tols.quadrature_order);

        let base = self.variation_spec()?.with_profile(Profile::Sine);
        let mut res = Vec::new();
        for h in CONVERGENCE_STEPS {
            let mut spec = base.clone();
            spec.epsilons = vec![-h, 0.0, h];
            let r = first_variation_check(&self.patch, &spec).map_err(&err)?;
            out.metric(&format!("stencil_residual_h{h:e}"), r.residual_d1);
            res.push((r.residual_d1, r.formula_d1));
        }
        let scale = res[0].1.abs().max(1.0) * 1e-10;
        let errs: Vec<f64> = res.iter().map(|r| r.0).collect();
        order_check(out, "stencil_order", &errs, scale, tols.stencil_order);
        Ok(())
    }
}

/// `errs` decrease under halving; the smallest observed order is checked.
/// When every error is below `floor` the scheme is exact on this input.
fn order_check(out: &mut AnalysisReport, name: &str, errs: &[f64], floor: f64, min_order: f64) {
    let orders: Vec<f64> = errs.windows(2).filter(|w| w[1] > floor).map(|w| (w[0] / w[1]).log2()).collect();
    if orders.is_empty() {
        let largest = errs.iter().fold(0.0_f64, |m, v| m.max(*v));
        out.checks.push(Check::at_most(&format!("{name}_exact_defect"), largest, floor));
    } else {
        for (i, o) in orders.iter().enumerate() {
            out.metric(&format!("{name}_{i}"), *o);
        }
        out.checks.push(Check::at_least(name, orders.iter().fold(f64::INFINITY, |m, v| m.min(*v)), min_order));
    }
}

fn par_try<T: Send, F>(reports: &[CurvatureReport], f: F) -> lightlike_core::error::Result<Vec<T>>
where
    F: Fn(&CurvatureReport) -> lightlike_core::error::Result<T> + Sync + Send,
{
    use rayon::prelude::*;
    reports.par_iter().map(f).collect::<Vec<_>>().into_iter().collect()
}

fn worst<F: Fn(&CurvatureReport) -> f64>(
    out: &mut AnalysisReport,
    reports: &[CurvatureReport],
    name: &str,
    tol: f64,
    f: F,
) {
    let vals: Vec<f64> = reports.iter().map(f).collect();
    worst_of(out, reports, name, tol, &vals);
}

/// Records the largest value, with its node, as a check.
fn worst_of(out: &mut AnalysisReport, reports: &[CurvatureReport], name: &str, tol: f64, vals: &[f64]) {
    let mut idx = 0;
    for (i, v) in vals.iter().enumerate() {
        if v.is_nan() || *v > vals[idx] {
            idx = i;
            if v.is_nan() {
                break;
            }
        }
    }
    out.checks.push(Check::at_most(name, vals[idx], tol));
    out.metric(&format!("{name}_u1"), reports[idx].u.0);
    out.metric(&format!("{name}_u2"), reports[idx].u.1);
}

fn variation_checks(out: &mut AnalysisReport, r: &VariationResult, first: bool, rel: f64, abs: f64) {
    let (name, numeric, formula, residual) = if first {
        ("first_variation_residual", r.numeric_d1, r.formula_d1, r.residual_d1)
    } else {
        ("second_variation_residual", r.numeric_d2, r.formula_d2, r.residual_d2)
    };
    out.checks.push(Check::at_most(name, residual, rel * formula.abs() + abs));
    out.metric("numeric", numeric);
    out.metric("formula", formula);
    for (e, a) in &r.area_values {
        out.metric(&format!("area_at_{e:+e}"), *a);
    }
}

impl Context<'_> {
    fn dump(&mut self) -> Result<Option<FieldDump>, CliError> {
        let fields = &self.cfg.output.fields;
        if fields.is_empty() {
            return Ok(None);
        }
        let allowed = dump_fields(self.graph.is_some());
        if let Some(bad) = fields.iter().find(|f| !allowed.contains(&f.as_str())) {
            return Err(CliError::Config(format!("unknown dump field `{bad}`")));
        }
        let nodes = self.grid.nodes();
        let graph = self.graph.clone();
        let want_graph = fields.iter().any(|f| GRAPH_FIELDS.contains(&f.as_str()));
        let graph_rows = match (&graph, want_graph) {
            (Some(gs), true) => {
                let mt = self.tol.mt;
                let rows = self
                    .grid
                    .try_map(|u1, u2| Ok((graph_point_data(gs, u1, u2)?, classify_graph(gs, u1, u2, mt)?)))
                    .map_err(|source| CliError::Analysis { analysis: "field dump", source })?;
                Some(rows)
            }
            _ => None,
        };
        let reports = self.reports(Analysis::Invariants)?;
        let want_norm = fields.iter().any(|f| NORMALIZED_FIELDS.contains(&f.as_str()));
        let norm = if want_norm {
            Some(
                par_try(reports, normalized_report)
                    .map_err(|source| CliError::Analysis { analysis: "field dump", source })?,
            )
        } else {
            None
        };
        FieldDump::build(&nodes, fields, |i, f| {
            let r = &reports[i];
            if let Some(v) = r.scalar(f) {
                return Ok(Cell::Real(v));
            }
            if let Some(b) = r.flags().get(f) {
                return Ok(Cell::Flag(b));
            }
            if let Some(n) = &norm {
                let n = &n[i];
                match f {
                    "H_tilde_minus" => return Ok(Cell::Real(n.h_tilde_minus)),
                    "H_tilde_plus" => return Ok(Cell::Real(n.h_tilde_plus)),
                    "K_tilde_minus" => return Ok(Cell::Real(n.k_tilde_minus)),
                    "K_tilde_plus" => return Ok(Cell::Real(n.k_tilde_plus)),
                    _ => {}
                }
            }
            let (d, class) = &graph_rows.as_ref().expect("graph field on a graph surface")[i];
            Ok(match f {
                "Delta" => Cell::Real(d.delta),
                "graph_mt" => Cell::Flag(class.is_mt()),
                "graph_strongly_mt" => Cell::Flag(*class == GraphClass::StronglyMT),
                "mt_quadratic" => Cell::Real(d.mt_quadratic),
                "phi1" => Cell::Real(d.phi1),
                "phi2" => Cell::Real(d.phi2),
                _ => unreachable!("field names are validated"),
            })
        })
        .map(Some)
    }
}

/// Runs every requested analysis in order inside a pool of `cfg.threads`
/// workers. Results do not depend on the worker count.
pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    pool.install(|| {
        let mut ctx = Context::new(cfg)?;
        let mut analyses: Vec<Analysis> = cfg.analyses.clone();
        analyses.dedup();
        let mut reports = Vec::with_capacity(analyses.len());
        for a in analyses {
            reports.push(ctx.run(a)?);
        }
        let dump = ctx.dump()?;
        let report = Report::new(cfg.surface.clone(), cfg.grid, cfg.tolerances, reports);
        if let Some(name) = report.first_non_finite() {
            return Err(CliError::NonFinite(name));
        }
        Ok(Outcome { report, dump })
    })
}

/// Output locations: `out` overrides the configured directory.
pub fn output_paths(cfg: &RunConfig, out: Option<&Path>) -> (PathBuf, PathBuf) {
    let dir = out.map(Path::to_path_buf).unwrap_or_else(|| cfg.output.dir.clone());
    (dir.join(&cfg.output.report), dir.join(&cfg.output.dump))
}

/// Writes the report and, when present, the dump. Output is produced on
/// the calling thread only.
pub fn write_outputs(outcome: &Outcome, report_path: &Path, dump_path: &Path) -> Result<(), CliError> {
    for p in [report_path, dump_path] {
        if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir.display(), e))?;
        }
    }
    fs::write(report_path, outcome.report.to_json()).map_err(|e| CliError::io(report_path.display(), e))?;
    if let Some(d) = &outcome.dump {
        fs::write(dump_path, d.to_csv()).map_err(|e| CliError::io(dump_path.display(), e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(src: &str) -> RunConfig {
        RunConfig::parse(src).unwrap()
    }

    #[test]
    fn plane_classifies_flat() {
        let c = cfg(
            "analyses = [\"classify\", \"verify-egregium\"]\n[surface]\nkind = \"plane\"\n[grid]\nn1 = 5\nn2 = 5\n",
        );
        let o = execute(&c).unwrap();
        assert!(o.report.passed);
        let cl = &o.report.analyses[0];
        for name in ["marginallyTrapped", "stronglyMarginallyTrapped", "flatPlus", "flatMinus", "intrinsicFlat"] {
            assert_eq!(cl.counts[name], 25, "{name}");
        }
    }

    #[test]
    fn tight_tolerance_fails_cleanly() {
        let mut c = cfg("analyses = [\"verify-egregium\"]\n[surface]\nkind = \"sphere\"\n[grid]\nn1 = 9\nn2 = 9\n");
        c.set_tolerance("egregium=1e-300").unwrap();
        let o = execute(&c).unwrap();
        assert!(!o.report.passed);
        assert!(o.report.analyses[0].checks[0].value > 0.0);
    }

    #[test]
    fn plane_dump_has_zero_intrinsic_curvature() {
        let c = cfg("analyses = [\"invariants\"]\n[surface]\nkind = \"plane\"\n[grid]\nn1 = 3\nn2 = 3\n[output]\nfields = [\"K_I\", \"flatPlus\"]\n");
        let d = execute(&c).unwrap().dump.unwrap();
        assert_eq!(d.header, ["u1", "u2", "K_I", "flatPlus"]);
        assert_eq!(d.rows.len(), 9);
        assert!(d.rows.iter().all(|r| r[2] == Cell::Real(0.0) && r[3] == Cell::Flag(true)));
    }

    #[test]
    fn sphere_normalized_column_is_constant() {
        // On the unit sphere l+- = e0 +- nS has l0 = 1 and H+ = 1.
        let c = cfg("analyses = [\"invariants\"]\n[surface]\nkind = \"sphere\"\n[grid]\nn1 = 5\nn2 = 5\n[output]\nfields = [\"H_tilde_plus\"]\n");
        let d = execute(&c).unwrap().dump.unwrap();
        for r in &d.rows {
            let Cell::Real(v) = r[2] else { panic!() };
            assert!((v - 1.0).abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn graph_mt_column_is_boolean() {
        let src = "analyses = [\"graph-classify\"]\n[surface]\nkind = \"graph\"\nf = \"u1^2\"\ng = \"u1^2\"\ndomain = [-1, 1, -1, 1]\n[grid]\nn1 = 5\nn2 = 5\n[output]\nfields = [\"graph_mt\"]\n";
        let o = execute(&cfg(src)).unwrap();
        assert_eq!(o.report.analyses[0].verdict.as_deref(), Some("MT"));
        assert!(o.dump.unwrap().to_csv().lines().skip(1).all(|l| l.ends_with(",1")));
    }

    #[test]
    fn unknown_dump_field_is_a_config_error() {
        let c = cfg("analyses = [\"invariants\"]\n[surface]\nkind = \"plane\"\n[output]\nfields = [\"phi1\"]\n");
        assert!(matches!(execute(&c), Err(CliError::Config(_))));
    }

    #[test]
    fn hypothesis_violation_is_a_numerical_failure() {
        let c = cfg("analyses = [\"variation-2\"]\n[surface]\nkind = \"sphere\"\n[variation]\ngrid = [9, 9]\n");
        let e = execute(&c).unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let src = "analyses = [\"invariants\", \"verify-weingarten\", \"variation-1\"]\n[surface]\nkind = \"torus\"\n[grid]\nn1 = 9\nn2 = 9\n[variation]\ngrid = [11, 11]\n[output]\nfields = [\"H_plus\"]\n";
        let mut a = cfg(src);
        a.threads = 1;
        let mut b = a.clone();
        b.threads = 3;
        let (x, y) = (execute(&a).unwrap(), execute(&b).unwrap());
        assert_eq!(x.report.to_json(), y.report.to_json());
        assert_eq!(x.dump.unwrap().to_csv(), y.dump.unwrap().to_csv());
    }
}
