//! One handler per job command, all returning a [`Report`].

use std::sync::Arc;

use noether_core::error::{Error, Result};
use noether_core::exterior::{
    grassmann_equations, index_subsets, plucker_coordinates, PluckerPoint,
};
use noether_core::field::Scalar;
use noether_core::groebner::{normal_form, Ideal};
use noether_core::hilbert::{
    graded_dimension, gotzmann_number, hilbert_polynomial, saturate, saturated_equal,
};
use noether_core::hilbscheme::{
    hilbert_scheme_data, ideal_from_point, point_from_ideal, HilbertSchemeData, SchemePoint,
};
use noether_core::monomial::{monomials_of_degree, Monomial};
use noether_core::pairs::{
    conjugacy_class_poly, disjoin_conjugates, emit_chi, emit_minimal_tame, emit_theta,
    lambda_eval, rewrite_lambda_elim, rm_rank, tame_conjoin, tame_eval, tame_to_zariski_on_e,
};
use noether_core::parse::JobSpec;
use noether_core::poly::Polynomial;
use noether_core::ring::Ring;
use noether_core::topology::{degree, rirr_rank, ConstructibleSet, FiniteClosedFamily};

use crate::input::*;
use crate::report::Report;

/// Runs one parsed job and renders its result entries.
pub fn dispatch(job: &JobSpec) -> Result<Report> {
    match job.command.as_str() {
        "poly add" => poly_binary(job, "sum", |a, b| a.add(b)),
        "poly mul" => poly_binary(job, "product", |a, b| a.mul(b)),
        "poly scale" => poly_scale(job),
        "poly equal" => poly_equal(job),
        "poly basis" => poly_basis(job),
        "groebner normal-form" => groebner_normal_form(job),
        "groebner basis" => groebner_basis(job),
        "groebner product" => groebner_product(job),
        "groebner eliminate" => groebner_eliminate(job),
        "hilbert dimension" => hilbert_dimension(job),
        "hilbert polynomial" => hilbert_poly(job),
        "hilbert saturate" => hilbert_saturate(job),
        "hilbert gotzmann" => hilbert_gotzmann(job),
        "hilbert equal" => hilbert_equal(job),
        "grassmann plucker" => grassmann_plucker(job),
        "grassmann contract" => grassmann_contract(job),
        "grassmann equations" => grassmann_eqs(job),
        "grassmann subspace" => grassmann_subspace(job),
        "hilbscheme data" => hilbscheme_report(job),
        "hilbscheme point" => hilbscheme_point(job),
        "hilbscheme ideal" => hilbscheme_ideal(job),
        "hilbscheme member" => hilbscheme_member(job),
        "hilbscheme onscheme" => hilbscheme_onscheme(job),
        "topology" => topology(job),
        "tame eval" => tame_eval_job(job),
        "tame conjoin" => tame_conjoin_job(job),
        "tame zariski" => tame_zariski_job(job),
        "pair rank" => pair_rank(job),
        "pair theta" => pair_theta(job),
        "pair chi" => pair_chi(job),
        "pair minimal" => pair_minimal(job),
        "pair lambda" => pair_lambda(job),
        "pair rewrite" => pair_rewrite(job),
        "pair disjoin" => pair_disjoin(job),
        other => Err(Error::Invalid(format!("unknown job command {other:?}"))),
    }
}

fn basis_strings(i: &Ideal) -> Vec<String> {
    i.basis().elems().iter().map(|g| g.to_string()).collect()
}

// ---------------------------------------------------------------------------
// poly
// ---------------------------------------------------------------------------

fn poly_binary(
    job: &JobSpec,
    key: &str,
    op: impl Fn(&Polynomial, &Polynomial) -> Polynomial,
) -> Result<Report> {
    let ring = job.ring()?;
    let a = poly_line(require_section(job, "left")?, &ring)?;
    let b = poly_line(require_section(job, "right")?, &ring)?;
    let mut r = Report::new();
    r.item(key, op(&a, &b));
    Ok(r)
}

fn poly_scale(job: &JobSpec) -> Result<Report> {
    let ring = job.ring()?;
    let sec = require_section(job, "scalar")?;
    let (line, lno) = single_line(sec)?;
    let c = parse_scalar(ring.field(), line, lno)?;
    let p = poly_line(require_section(job, "poly")?, &ring)?;
    let mut r = Report::new();
    r.item("scaled", p.scale(&c));
    Ok(r)
}

fn poly_equal(job: &JobSpec) -> Result<Report> {
    let ring = job.ring()?;
    let a = poly_line(require_section(job, "left")?, &ring)?;
    let b = poly_line(require_section(job, "right")?, &ring)?;
    let mut r = Report::new();
    r.item("left", &a);
    r.item("right", &b);
    r.item("equal", a == b);
    Ok(r)
}

fn poly_basis(job: &JobSpec) -> Result<Report> {
    let ring = job.ring()?;
    let sec = require_section(job, "degree")?;
    let (line, lno) = single_line(sec)?;
    let d = parse_u32(line, lno, "degree")?;
    let vars: Vec<u32> = (0..ring.num_vars() as u32).collect();
    let monomials = monomials_of_degree(&vars, d, ring.order());
    let mut r = Report::new();
    r.item("count", monomials.len());
    r.list("monomials", monomials.iter().map(|m| ring.format_monomial(m)).collect());
    Ok(r)
}

// ---------------------------------------------------------------------------
// groebner
// ---------------------------------------------------------------------------

fn groebner_normal_form(job: &JobSpec) -> Result<Report> {
    let ring = job.ring()?;
    let gens = poly_lines(require_section(job, "basis")?, &ring)?;
    let ideal = Ideal::new(ring.clone(), gens)?;
    let dividends = poly_lines(require_section(job, "dividends")?, &ring)?;
    let mut items = Vec::new();
    for f in &dividends {
        let nf = normal_form(f, ideal.basis().elems());
        items.push(format!("{f} -> {nf}"));
    }
    let mut r = Report::new();
    r.list("basis", basis_strings(&ideal));
    r.list("remainders", items);
    Ok(r)
}

fn groebner_basis(job: &JobSpec) -> Result<Report> {
    let ring = job.ring()?;
    let gens = poly_lines(require_section(job, "generators")?, &ring)?;
    let ideal = Ideal::new(ring, gens)?;
    let mut r = Report::new();
    r.list("basis", basis_strings(&ideal));
    Ok(r)
}

fn groebner_product(job: &JobSpec) -> Result<Report> {
    let ring = job.ring()?;
    let a = Ideal::new(ring.clone(), poly_lines(require_section(job, "left")?, &ring)?)?;
    let b = Ideal::new(ring.clone(), poly_lines(require_section(job, "right")?, &ring)?)?;
    let mut r = Report::new();
    r.list("basis", basis_strings(&a.product(&b)?));
    Ok(r)
}

fn groebner_eliminate(job: &JobSpec) -> Result<Report> {
    let ring = job.ring()?;
    let gens = poly_lines(require_section(job, "generators")?, &ring)?;
    let ideal = Ideal::new(ring.clone(), gens)?;
    let sec = require_section(job, "drop")?;
    let (line, lno) = single_line(sec)?;
    let toks: Vec<&str> = line.split_whitespace().collect();
    let eliminated = match toks.as_slice() {
        [one] if ring.block_index(one).is_some() => ideal.eliminate_block(one)?,
        _ => {
            let mut drop = Vec::new();
            for t in &toks {
                let v = ring
                    .var_index(t)
                    .ok_or_else(|| perr(lno, format!("{t:?} is not a ring variable")))?;
                drop.push(v);
            }
            ideal.eliminate(&drop)
        }
    };
    let mut r = Report::new();
    r.list("basis", basis_strings(&eliminated));
    Ok(r)
}

// ---------------------------------------------------------------------------
// hilbert
// ---------------------------------------------------------------------------

fn generators_ideal(job: &JobSpec) -> Result<Ideal> {
    let ring = job.ring()?;
    let gens = poly_lines(require_section(job, "generators")?, &ring)?;
    Ideal::new(ring, gens)
}

fn hilbert_dimension(job: &JobSpec) -> Result<Report> {
    let ideal = generators_ideal(job)?;
    let sec = require_section(job, "degree")?;
    let (line, lno) = single_line(sec)?;
    let d = parse_u32(line, lno, "degree")?;
    let mut r = Report::new();
    r.item("dim", graded_dimension(&ideal, d)?);
    Ok(r)
}

fn hilbert_poly(job: &JobSpec) -> Result<Report> {
    let ideal = generators_ideal(job)?;
    let q = hilbert_polynomial(&ideal)?;
    let mut r = Report::new();
    r.item("Q(d)", q);
    Ok(r)
}

fn hilbert_saturate(job: &JobSpec) -> Result<Report> {
    let ideal = generators_ideal(job)?;
    let mut r = Report::new();
    r.list("basis", basis_strings(&saturate(&ideal)?));
    Ok(r)
}

fn hilbert_gotzmann(job: &JobSpec) -> Result<Report> {
    let sec = require_section(job, "q")?;
    let (line, lno) = single_line(sec)?;
    let q = parse_numpoly(line, lno)?;
    let mut r = Report::new();
    r.item("Q(d)", &q);
    r.item("d0", gotzmann_number(&q)?);
    Ok(r)
}

fn hilbert_equal(job: &JobSpec) -> Result<Report> {
    let ring = job.ring()?;
    let a = Ideal::new(ring.clone(), poly_lines(require_section(job, "left")?, &ring)?)?;
    let b = Ideal::new(ring.clone(), poly_lines(require_section(job, "right")?, &ring)?)?;
    let mut r = Report::new();
    r.item("equal", saturated_equal(&a, &b)?);
    Ok(r)
}

// ---------------------------------------------------------------------------
// grassmann
// ---------------------------------------------------------------------------

fn grassmann_plucker(job: &JobSpec) -> Result<Report> {
    let field = job_field(job)?;
    let sec = require_section(job, "vectors")?;
    let mut vectors = Vec::new();
    for (i, line) in sec.lines.iter().enumerate() {
        vectors.push(parse_vector(&field, line, sec.line0 + i)?);
    }
    let point = plucker_coordinates(&field, &vectors)?;
    let (r_grade, s) = (point.grade(), point.dim());
    let subsets = index_subsets(r_grade, s);
    let labels: Vec<String> = subsets.iter().map(|t| wedge_name(t, s)).collect();
    let coords: Vec<Scalar> =
        subsets.iter().map(|t| point.multivector().coord(t)).collect();
    let mut r = Report::new();
    r.item("grade", r_grade);
    r.item("dim", s);
    r.item("basis", labels.join(" "));
    r.item("point", colon_tuple(&coords));
    Ok(r)
}

fn grassmann_contract(job: &JobSpec) -> Result<Report> {
    let field = job_field(job)?;
    let dim_sec = require_section(job, "dim")?;
    let (dline, dlno) = single_line(dim_sec)?;
    let s = parse_u32(dline, dlno, "dimension")?;
    let eta = parse_multivector(&field, require_section(job, "multivector")?, s)?;
    let sec = require_section(job, "covectors")?;
    let mut items = Vec::new();
    for (i, line) in sec.lines.iter().enumerate() {
        let lno = sec.line0 + i;
        let subset = parse_subset(line, lno)?;
        let result = eta.contract(&subset)?;
        let shown = if result.grade() == 1 {
            let coords: Vec<Scalar> = (0..s).map(|v| result.coord(&[v])).collect();
            comma_tuple(&coords)
        } else if result.is_zero() {
            "0".to_string()
        } else {
            let parts: Vec<String> = result
                .coords()
                .iter()
                .map(|(t, c)| format!("{}*{}", c, wedge_name(t, s)))
                .collect();
            parts.join(" + ")
        };
        items.push(format!("{} -> {shown}", if subset.is_empty() { "-".to_string() } else {
            subset.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
        }));
    }
    let mut r = Report::new();
    r.list("contractions", items);
    Ok(r)
}

fn grassmann_eqs(job: &JobSpec) -> Result<Report> {
    let field = job_field(job)?;
    let gsec = require_section(job, "grade")?;
    let (gline, glno) = single_line(gsec)?;
    let grade = parse_u32(gline, glno, "grade")?;
    let dsec = require_section(job, "dim")?;
    let (dline, dlno) = single_line(dsec)?;
    let dim = parse_u32(dline, dlno, "dimension")?;
    let eqs = grassmann_equations(field, grade, dim)?;
    // Deduplicate up to scalar: make each monic, then sort and dedup.
    let mut shown: Vec<String> = eqs
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| {
            let lc = p.leading_coeff().expect("nonzero").clone();
            p.scale(&lc.inv().expect("field scalar")).to_string()
        })
        .collect();
    shown.sort();
    shown.dedup();
    let mut r = Report::new();
    r.item("count", shown.len());
    r.list("equations", shown);
    Ok(r)
}

fn grassmann_subspace(job: &JobSpec) -> Result<Report> {
    let field = job_field(job)?;
    let dim_sec = require_section(job, "dim")?;
    let (dline, dlno) = single_line(dim_sec)?;
    let s = parse_u32(dline, dlno, "dimension")?;
    let eta = parse_multivector(&field, require_section(job, "multivector")?, s)?;
    let point = PluckerPoint::new(eta)?;
    let basis = noether_core::exterior::subspace_from_plucker(&point)?;
    let mut r = Report::new();
    r.list("basis", basis.iter().map(|v| comma_tuple(v)).collect());
    Ok(r)
}

// ---------------------------------------------------------------------------
// hilbscheme
// ---------------------------------------------------------------------------

fn scheme_data_from(job: &JobSpec) -> Result<HilbertSchemeData> {
    let nsec = require_section(job, "n")?;
    let (nline, nlno) = single_line(nsec)?;
    let n = parse_u32(nline, nlno, "n")?;
    let qsec = require_section(job, "q")?;
    let (qline, qlno) = single_line(qsec)?;
    let q = parse_numpoly(qline, qlno)?;
    hilbert_scheme_data(n, &q)
}

fn scheme_summary(r: &mut Report, data: &HilbertSchemeData) {
    let (grade, s) = data.ambient();
    r.item("n", data.n());
    r.item("Q(d)", data.q());
    r.item("d0", data.d0());
    r.item("N0", data.n0());
    let plucker_dim = index_subsets(grade, s).len().saturating_sub(1);
    r.item("ambient", format!("Gr({grade}, {s}) in P^{plucker_dim}"));
    r.item("grassmann relations", data.grassmann_relations().len());
    r.item("rank conditions", data.rank_window().len());
}

fn hilbscheme_report(job: &JobSpec) -> Result<Report> {
    let data = scheme_data_from(job)?;
    let mut r = Report::new();
    scheme_summary(&mut r, &data);
    r.item(
        "frame",
        data.frame()
            .iter()
            .map(|m| data.template_ring().format_monomial(m))
            .collect::<Vec<_>>()
            .join(" "),
    );
    let (grade, s) = data.ambient();
    let covectors = index_subsets(grade.saturating_sub(1), s);
    let templates: Vec<String> = covectors
        .iter()
        .zip(data.s_template())
        .map(|(c, t)| {
            let label: Vec<String> = c.iter().map(|i| i.to_string()).collect();
            format!("S[{}] = {t}", label.join(","))
        })
        .collect();
    r.list("templates", templates);
    Ok(r)
}

/// The point's coordinates on the full subset frame, as a projective tuple.
fn eta_tuple(point: &PluckerPoint) -> String {
    let subsets = index_subsets(point.grade(), point.dim());
    let coords: Vec<Scalar> =
        subsets.iter().map(|t| point.multivector().coord(t)).collect();
    colon_tuple(&coords)
}

fn hilbscheme_point(job: &JobSpec) -> Result<Report> {
    let ideal = generators_ideal(job)?;
    let n = ideal.ring().num_vars() as u32 - 1;
    let q = match job.section("q") {
        Some(sec) => {
            let (line, lno) = single_line(sec)?;
            parse_numpoly(line, lno)?
        }
        None => hilbert_polynomial(&ideal)?,
    };
    let data = hilbert_scheme_data(n, &q)?;
    let point = point_from_ideal(&ideal, &data)?;
    let mut r = Report::new();
    r.item("Q(d)", &q);
    r.item("d0", data.d0());
    r.item("N0", data.n0());
    r.item("eta", eta_tuple(point.plucker()));
    r.item("on_scheme", true);
    Ok(r)
}

/// The ring the recovered ideal lives in: the declared blocks when present,
/// else `x0..xn` over the job field.
fn x_ring_for(job: &JobSpec, n: u32) -> Result<Arc<Ring>> {
    if !job.blocks.is_empty() {
        let ring = job.ring()?;
        if ring.num_vars() as u32 != n + 1 {
            return Err(Error::Invalid(format!(
                "declared ring has {} variables; the scheme needs {}",
                ring.num_vars(),
                n + 1
            )));
        }
        return Ok(ring);
    }
    let names: Vec<String> = (0..=n).map(|i| format!("x{i}")).collect();
    let views: Vec<&str> = names.iter().map(String::as_str).collect();
    Ring::simple(job_field(job)?, &views)
}

fn hilbscheme_ideal(job: &JobSpec) -> Result<Report> {
    let data = scheme_data_from(job)?;
    let (grade, s) = data.ambient();
    let esec = require_section(job, "eta")?;
    let (eline, elno) = single_line(esec)?;
    let eta = parse_eta(&job_field(job)?, eline, elno, grade, s)?;
    let point = SchemePoint::new(eta, &data)?;
    let x_ring = x_ring_for(job, data.n())?;
    let ideal = ideal_from_point(&point, &data, &x_ring)?;
    let mut r = Report::new();
    r.item("eta", eta_tuple(point.plucker()));
    r.list("basis", basis_strings(&ideal));
    Ok(r)
}

fn hilbscheme_member(job: &JobSpec) -> Result<Report> {
    let data = scheme_data_from(job)?;
    let (grade, s) = data.ambient();
    let esec = require_section(job, "eta")?;
    let (eline, elno) = single_line(esec)?;
    let field = job_field(job)?;
    let eta = parse_eta(&field, eline, elno, grade, s)?;
    let x_ring = x_ring_for(job, data.n())?;
    let sec = require_section(job, "forms")?;
    let mut items = Vec::new();
    for (i, line) in sec.lines.iter().enumerate() {
        let lno = sec.line0 + i;
        let f = noether_core::parse::parse_polynomial_at(line, lno, &x_ring)?;
        let d = f
            .total_deg()
            .ok_or_else(|| perr(lno, "the zero form has no degree"))?;
        if f.terms().iter().any(|(m, _)| m.deg() != d) {
            return Err(perr(lno, format!("{f} is not homogeneous")));
        }
        let c = form_coefficients(&f, &data, d);
        let verdict = data.membership_test(&c, &eta, d)?;
        items.push(format!("{f} -> {verdict}"));
    }
    let mut r = Report::new();
    r.list("membership", items);
    Ok(r)
}

/// Coefficients of a degree-`d` form on the scheme's monomial frame.
fn form_coefficients(f: &Polynomial, data: &HilbertSchemeData, d: u32) -> Vec<Scalar> {
    let n = data.n();
    let vars: Vec<u32> = (0..=n).collect();
    let frame: Vec<Monomial> = monomials_of_degree(&vars, d, data.template_ring().order());
    let field = f.ring().field();
    frame
        .iter()
        .map(|m| {
            f.terms()
                .iter()
                .find(|(t, _)| (0..=n).all(|v| t.exp(v) == m.exp(v)))
                .map(|(_, c)| c.clone())
                .unwrap_or_else(|| field.zero())
        })
        .collect()
}

fn hilbscheme_onscheme(job: &JobSpec) -> Result<Report> {
    let data = scheme_data_from(job)?;
    let (grade, s) = data.ambient();
    let esec = require_section(job, "eta")?;
    let (eline, elno) = single_line(esec)?;
    let eta = parse_eta(&job_field(job)?, eline, elno, grade, s)?;
    let mut r = Report::new();
    r.item("on_scheme", data.on_scheme_windowed(&eta, job.window)?);
    Ok(r)
}

// ---------------------------------------------------------------------------
// topology
// ---------------------------------------------------------------------------

fn topology(job: &JobSpec) -> Result<Report> {
    let usec = require_section(job, "universe")?;
    let (uline, _) = single_line(usec)?;
    let labels: Vec<String> = noether_core::parse::parse_labels(uline);
    let views: Vec<&str> = labels.iter().map(String::as_str).collect();
    let csec = require_section(job, "closed")?;
    let mut masks = Vec::new();
    for (i, line) in csec.lines.iter().enumerate() {
        masks.push(noether_core::parse::set_from_labels(line, &labels, csec.line0 + i)?);
    }
    let family = FiniteClosedFamily::from_masks(&views, &masks)?;
    let mut r = Report::new();
    r.item("points", family.universe_size());
    r.item("closed sets", family.members().len());

    let show = |mask: u32| -> String {
        if mask == 0 {
            "-".to_string()
        } else {
            family.labels_of(mask).join(" ")
        }
    };

    if let Some(sec) = job.section("minimal-closed") {
        let mut items = Vec::new();
        for (i, line) in sec.lines.iter().enumerate() {
            let lno = sec.line0 + i;
            let label = line.trim();
            let p = family
                .point_index(label)
                .ok_or_else(|| perr(lno, format!("{label:?} is not a universe point")))?;
            items.push(format!("{label} -> {}", show(family.minimal_closed_containing(p)?)));
        }
        r.list("minimal-closed", items);
    }
    if let Some(sec) = job.section("irreducible") {
        let mut items = Vec::new();
        for (i, line) in sec.lines.iter().enumerate() {
            let mask = noether_core::parse::set_from_labels(line, &labels, sec.line0 + i)?;
            items.push(format!("{} -> {}", show(mask), family.is_irreducible(mask)?));
        }
        r.list("irreducible", items);
    }
    if let Some(sec) = job.section("components") {
        let mut items = Vec::new();
        for (i, line) in sec.lines.iter().enumerate() {
            let mask = noether_core::parse::set_from_labels(line, &labels, sec.line0 + i)?;
            let comps = family.irreducible_components(mask)?;
            let shown = if comps.is_empty() {
                "-".to_string()
            } else {
                comps
                    .iter()
                    .map(|&c| format!("{{{}}}", family.labels_of(c).join(" ")))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            items.push(format!("{} -> {shown}", show(mask)));
        }
        r.list("components", items);
    }
    if let Some(sec) = job.section("rank") {
        let mut items = Vec::new();
        for (i, line) in sec.lines.iter().enumerate() {
            let y = constructible(&family, &labels, line, sec.line0 + i)?;
            items.push(format!("{} -> {}", line.trim(), rirr_rank(&family, &y)));
        }
        r.list("rank", items);
    }
    if let Some(sec) = job.section("degree") {
        let mut items = Vec::new();
        for (i, line) in sec.lines.iter().enumerate() {
            let y = constructible(&family, &labels, line, sec.line0 + i)?;
            items.push(format!("{} -> {}", line.trim(), degree(&family, &y)?));
        }
        r.list("degree", items);
    }
    Ok(r)
}

/// Parses `C [\ B] [| C [\ B]]...` into a constructible set: pieces are
/// topology-closed sets minus optional closed constraints.
fn constructible(
    family: &FiniteClosedFamily,
    labels: &[String],
    line: &str,
    lno: usize,
) -> Result<ConstructibleSet> {
    let mut parts = Vec::new();
    for piece in line.split('|') {
        let (c_text, b_text) = match piece.split_once('\\') {
            Some((c, b)) => (c, Some(b)),
            None => (piece, None),
        };
        let c = noether_core::parse::set_from_labels(c_text, labels, lno)?;
        let b = match b_text {
            Some(b) => noether_core::parse::set_from_labels(b, labels, lno)?,
            None => 0,
        };
        parts.push((c, b));
    }
    ConstructibleSet::build(family, &parts)
}

// ---------------------------------------------------------------------------
// tame formulas
// ---------------------------------------------------------------------------

/// Evaluates a formula on each tuple line of an optional `[points]` section.
fn eval_points(
    r: &mut Report,
    job: &JobSpec,
    ctx: &noether_core::pairs::PairContext,
    phi: &noether_core::pairs::TameFormula,
) -> Result<()> {
    let Some(sec) = job.section("points") else {
        return Ok(());
    };
    let mut items = Vec::new();
    for (i, line) in sec.lines.iter().enumerate() {
        let b = pair_tuple(ctx, line, sec.line0 + i)?;
        items.push(format!("{} -> {}", line.trim(), tame_eval(phi, &b)?));
    }
    r.list("values", items);
    Ok(())
}

fn tame_eval_job(job: &JobSpec) -> Result<Report> {
    let ctx = pair_context(job)?;
    let phi = formula_section(&ctx, job, "formula")?;
    let mut r = Report::new();
    r.lines("formula", &phi);
    eval_points(&mut r, job, &ctx, &phi)?;
    Ok(r)
}

fn tame_conjoin_job(job: &JobSpec) -> Result<Report> {
    let ctx = pair_context(job)?;
    let phi = formula_section(&ctx, job, "left")?;
    let psi = formula_section(&ctx, job, "right")?;
    let merged = tame_conjoin(&phi, &psi)?;
    let mut r = Report::new();
    r.lines("formula", &merged);
    eval_points(&mut r, job, &ctx, &merged)?;
    Ok(r)
}

fn tame_zariski_job(job: &JobSpec) -> Result<Report> {
    let ctx = pair_context(job)?;
    let phi = formula_section(&ctx, job, "formula")?;
    let ideal = tame_to_zariski_on_e(&phi)?;
    let mut r = Report::new();
    r.list("basis", basis_strings(&ideal));
    Ok(r)
}

// ---------------------------------------------------------------------------
// pair-model operations
// ---------------------------------------------------------------------------

fn tuple_and_base(
    job: &JobSpec,
) -> Result<(
    noether_core::pairs::PairContext,
    Vec<noether_core::pairs::PairElement>,
    noether_core::pairs::BaseField,
)> {
    let ctx = pair_context(job)?;
    let tuple = pair_lines(&ctx, require_section(job, "tuple")?)?;
    let base = base_field(&ctx, job)?;
    Ok((ctx, tuple, base))
}

fn pair_rank(job: &JobSpec) -> Result<Report> {
    let (ctx, tuple, base) = tuple_and_base(job)?;
    let mut r = Report::new();
    r.item("rm", rm_rank(&ctx, &tuple, &base)?);
    Ok(r)
}

fn pair_theta(job: &JobSpec) -> Result<Report> {
    let (ctx, tuple, base) = tuple_and_base(job)?;
    let mut r = Report::new();
    r.lines("theta", emit_theta(&ctx, &tuple, &base)?);
    Ok(r)
}

fn pair_chi(job: &JobSpec) -> Result<Report> {
    let (ctx, tuple, base) = tuple_and_base(job)?;
    let mut r = Report::new();
    r.lines("chi", emit_chi(&ctx, &tuple, &base)?);
    Ok(r)
}

fn pair_minimal(job: &JobSpec) -> Result<Report> {
    let (ctx, tuple, base) = tuple_and_base(job)?;
    let mut r = Report::new();
    r.lines("minimal", emit_minimal_tame(&ctx, &tuple, &base)?);
    Ok(r)
}

fn pair_lambda(job: &JobSpec) -> Result<Report> {
    let ctx = pair_context(job)?;
    let a0 = pair_line(&ctx, require_section(job, "a0")?)?;
    let basis = pair_lines(&ctx, require_section(job, "basis")?)?;
    let values = lambda_eval(&ctx, &a0, &basis)?;
    let mut r = Report::new();
    r.list("lambda", values.iter().map(|v| v.to_string()).collect());
    Ok(r)
}

fn pair_rewrite(job: &JobSpec) -> Result<Report> {
    let ctx = pair_context(job)?;
    let phi = formula_section(&ctx, job, "formula")?;
    let designated: Option<String> = match job.section("designated") {
        Some(sec) => Some(single_line(sec)?.0.trim().to_string()),
        None => None,
    };
    let witness = pair_lines(&ctx, require_section(job, "witness")?)?;
    let (a0, basis) = witness
        .split_first()
        .ok_or_else(|| Error::Invalid("the [witness] section needs a0 then the basis".into()))?;
    let rewritten = rewrite_lambda_elim(&phi, designated.as_deref(), a0, basis)?;
    let mut r = Report::new();
    r.lines("formula", rewritten);
    Ok(r)
}

fn pair_disjoin(job: &JobSpec) -> Result<Report> {
    let ctx = pair_context(job)?;
    let shape = formula_section(&ctx, job, "shape")?;
    let psec = require_section(job, "param")?;
    let param = single_line(psec)?.0.trim().to_string();
    let coeffs = match (job.section("class"), job.section("members")) {
        (Some(sec), _) => pair_lines(&ctx, sec)?,
        (None, Some(sec)) => conjugacy_class_poly(&ctx, &pair_lines(&ctx, sec)?)?,
        (None, None) => {
            return Err(Error::Invalid(
                "job `pair disjoin` needs a [class] or [members] section".into(),
            ))
        }
    };
    let merged = disjoin_conjugates(&shape, &param, &coeffs)?;
    let mut r = Report::new();
    r.lines("formula", merged);
    Ok(r)
}
