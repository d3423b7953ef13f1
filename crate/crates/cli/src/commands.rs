//! One function per command. Each writes its artifacts and returns the list of
//! files together with any tolerance failures.

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use pants_core::quotient::{self, symbol_of, OperatorWord, SymbolTriple, TrigPoly};
use pants_core::resolvent::dense::{dense_resolvent_z, dense_resolvent_zzstar};
use pants_core::resolvent::kernels::{self, KernelName, KernelSpec};
use pants_core::resolvent::{self as res, solve_resolvent_z, solve_resolvent_zzstar, GridSpec, ZRegion};
use pants_core::spectral::{self, Classified, SpectralFamily};
use pants_core::{c64, operators, BasisIndex, BasisLabel, CoefficientVector, Complex64, DomainParams, Mode};

use crate::config::{Command, RunConfig};
use crate::output::{self, fmt_f64, Sci};
use crate::CliError;

/// Isolated eigenvalues must be matched to this accuracy.
pub const TOL_SPECTRUM: f64 = 1e-8;
/// Commutator-ideal certificates.
pub const TOL_CERTIFICATE: f64 = 1e-10;
/// Tail compressions of finite-rank differences past their support.
pub const TOL_TAIL: f64 = 1e-10;
/// Symbol homomorphism and star compatibility.
pub const TOL_SYMBOL: f64 = 1e-12;

pub const DEFAULT_GRID: GridSpec = GridSpec { x0: -1.25, x1: 1.25, y0: -1.25, y1: 1.25, res: 41 };

/// Random samples per resolvent region.
const SAMPLES: usize = 20;
/// Support radius of the random right-hand sides.
const SUPPORT: i64 = 8;
/// Largest fraction of a hole radius used for samples.
const HOLE_FRACTION: f64 = 0.7;
/// Bound on the window truncation of the dense oracles.
const ORACLE_CUT: f64 = 1e-13;
const WORD_PAIRS: usize = 30;

#[derive(Debug, Default)]
pub struct Report {
    pub files: Vec<PathBuf>,
    pub failures: Vec<String>,
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let mut report = match cfg.command {
        Command::Spectrum => spectrum(cfg)?,
        Command::Pseudospectrum => pseudospectrum(cfg)?,
        Command::ResolventCheck => resolvent_check(cfg)?,
        Command::CommutatorReport => commutator_report(cfg)?,
        Command::ToeplitzCheck => toeplitz_check(cfg)?,
        Command::Convergence => convergence(cfg)?,
    };
    if let Some(fmt) = cfg.dump {
        let idx = BasisIndex::new(cfg.params, cfg.n())?;
        let (kind, n) = (cfg.kind(), cfg.n());
        let z = operators::build_z(&idx);
        let zz = operators::build_zzstar(&idx, cfg.mode);
        report.files.push(output::dump_matrix(&cfg.output_dir, &format!("matrix_z_{kind}_{n}"), &z, fmt)?);
        report.files.push(output::dump_matrix(
            &cfg.output_dir,
            &format!("matrix_zzstar_{kind}_{n}_{}", cfg.mode),
            &zz,
            fmt,
        )?);
    }
    Ok(report)
}

fn path(cfg: &RunConfig, ext: &str) -> PathBuf {
    cfg.output_dir.join(format!("{}.{ext}", cfg.stem()))
}

// ---------------------------------------------------------------------------
// spectrum

#[derive(Serialize)]
struct SpectrumJson {
    kind: &'static str,
    #[serde(rename = "N")]
    n: usize,
    mode: &'static str,
    source: &'static str,
    band: Option<[Sci; 2]>,
    eigenvalues: Vec<Sci>,
}

fn point_name(params: &DomainParams, family: SpectralFamily) -> &'static str {
    match (family, params) {
        (SpectralFamily::EFamily, _) => "one",
        (SpectralFamily::FFamily, DomainParams::Pants { .. }) => "r1_squared",
        (SpectralFamily::FFamily, _) => "r_squared",
        (SpectralFamily::Simple, DomainParams::Pants { .. }) => "lambda_star",
        (SpectralFamily::Simple, _) => "zero",
    }
}

fn spectrum(cfg: &RunConfig) -> Result<Report, CliError> {
    let idx = BasisIndex::new(cfg.params, cfg.n())?;
    let ev = spectral::truncated_eigenvalues(&operators::build_zzstar(&idx, cfg.mode))?;
    let spec = spectral::closed_form_spectrum(&cfg.params)?;
    let source = if spec.derived_only { "derived" } else { "closed_form" };
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for p in &spec.isolated {
        let nearest = ev.iter().copied().min_by(|x, y| (x - p.value).abs().total_cmp(&(y - p.value).abs())).unwrap();
        let err = (nearest - p.value).abs();
        let name = point_name(&cfg.params, p.family);
        if err > TOL_SPECTRUM {
            failures.push(format!("{name}: nearest eigenvalue off by {err:.3e} (tol {TOL_SPECTRUM:e})"));
        }
        rows.push(vec![
            name.to_string(),
            p.family.as_str().to_string(),
            source.to_string(),
            fmt_f64(p.value),
            fmt_f64(nearest),
            fmt_f64(err),
            spectral::multiplicity(&ev, p.value, TOL_SPECTRUM).to_string(),
        ]);
    }
    if let Some((lo, hi)) = spec.band {
        let band: Vec<f64> = ev.iter().copied().filter(|&x| spectral::classify(&spec, x) == Classified::Band).collect();
        let bmin = band.iter().copied().fold(f64::INFINITY, f64::min);
        let bmax = band.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for (name, want, got) in [("band_lo", lo, bmin), ("band_hi", hi, bmax)] {
            rows.push(vec![
                name.into(),
                "band".into(),
                source.into(),
                fmt_f64(want),
                fmt_f64(got),
                fmt_f64((got - want).abs()),
                band.len().to_string(),
            ]);
        }
    }
    let header = ["point", "family", "source", "value", "nearest_eigenvalue", "err", "multiplicity"];
    let json = SpectrumJson {
        kind: cfg.kind().as_str(),
        n: cfg.n(),
        mode: cfg.mode.as_str(),
        source,
        band: spec.band.map(|(lo, hi)| [Sci(lo), Sci(hi)]),
        eigenvalues: ev.iter().map(|&x| Sci(x)).collect(),
    };
    let files = vec![output::write_csv(&path(cfg, "csv"), &header, &rows)?, output::write_json(&path(cfg, "json"), &json)?];
    Ok(Report { files, failures })
}

// ---------------------------------------------------------------------------
// pseudospectrum

fn pseudospectrum(cfg: &RunConfig) -> Result<Report, CliError> {
    let grid = cfg.grid.unwrap_or(DEFAULT_GRID);
    let points = res::pseudospectrum_grid(&cfg.params, cfg.n(), &grid, cfg.method)?;
    let mut failures = Vec::new();
    let mut rows = Vec::with_capacity(points.len());
    for p in &points {
        // every section is a compression of z, so ‖section‖ ≤ 1
        let floor = p.lambda.norm() - 1.0;
        if !p.smin.is_finite() || p.smin < floor - 1e-12 {
            failures.push(format!("smin({}) = {:e} below |λ| − 1 = {floor:e}", p.lambda, p.smin));
        }
        rows.push(vec![fmt_f64(p.lambda.re), fmt_f64(p.lambda.im), fmt_f64(p.smin), p.region.as_str().to_string()]);
    }
    let svg = output::pseudospectrum_svg(&grid, &points, &cfg.params);
    let files = vec![
        output::write_csv(&path(cfg, "csv"), &["re", "im", "smin", "region"], &rows)?,
        output::write_text(&path(cfg, "svg"), &svg)?,
    ];
    Ok(Report { files, failures })
}

// ---------------------------------------------------------------------------
// resolvent-check

fn random_rhs(idx: &BasisIndex, rng: &mut ChaCha8Rng, real: bool) -> CoefficientVector {
    let mut v = CoefficientVector::zeros(idx);
    for (i, lab) in idx.order.iter().enumerate() {
        if lab.n.abs() <= SUPPORT {
            let im = if real { 0.0 } else { rng.gen_range(-1.0..1.0) };
            v.values[i] = Complex64::new(rng.gen_range(-1.0..1.0), im);
        }
    }
    v
}

fn rel_err(a: &[Complex64], b: &[Complex64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let n: f64 = b.iter().map(|x| x.norm_sqr()).sum();
    (d / n).sqrt()
}

fn in_disk(rng: &mut ChaCha8Rng, centre: f64, radius: f64) -> Complex64 {
    loop {
        let w = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if w.norm() <= 1.0 && w.norm() > 1e-3 {
            return c64(centre) + w * radius;
        }
    }
}

/// Inside a hole the solution decays like `(|λ − c|/ρ)^k` away from the
/// support, so the oracle cut at `N` is below [`ORACLE_CUT`] when the ratio is
/// at most `ORACLE_CUT^{1/(N − SUPPORT)}`.
fn hole_fraction(n: usize) -> f64 {
    HOLE_FRACTION.min(ORACLE_CUT.powf(1.0 / (n as f64 - SUPPORT as f64).max(1.0)))
}

fn sample_z(params: &DomainParams, region: ZRegion, frac: f64, rng: &mut ChaCha8Rng) -> Complex64 {
    match (region, *params) {
        (ZRegion::Zero, _) => c64(0.0),
        (ZRegion::Hole1, DomainParams::Annulus { r }) => in_disk(rng, 0.0, frac * r),
        (ZRegion::Hole1, DomainParams::Pants { r1, .. }) => in_disk(rng, 0.0, frac * r1),
        (ZRegion::Hole2, DomainParams::Pants { a, r2, .. }) => in_disk(rng, a, frac * r2),
        _ => Complex64::from_polar(rng.gen_range(1.05..3.0), rng.gen_range(0.0..std::f64::consts::TAU)),
    }
}

fn z_regions(params: &DomainParams) -> &'static [ZRegion] {
    match params {
        DomainParams::Disk => &[ZRegion::Outside],
        DomainParams::Annulus { .. } => &[ZRegion::Zero, ZRegion::Hole1, ZRegion::Outside],
        DomainParams::Pants { .. } => &[ZRegion::Zero, ZRegion::Hole1, ZRegion::Hole2, ZRegion::Outside],
    }
}

fn z_region_name(r: ZRegion) -> &'static str {
    match r {
        ZRegion::Zero => "zero",
        ZRegion::Hole1 => "hole1",
        ZRegion::Hole2 => "hole2",
        ZRegion::Outside => "outside",
    }
}

/// Real `λ` in `(x0, x1)` away from the isolated eigenvalues.
fn sample_real(rng: &mut ChaCha8Rng, x0: f64, x1: f64, avoid: &[f64]) -> f64 {
    loop {
        let x = rng.gen_range(x0..x1);
        if avoid.iter().all(|e| (x - e).abs() > 1e-3) {
            return x;
        }
    }
}

#[derive(Serialize)]
struct KernelRow {
    kernel: String,
    re: Sci,
    im: Sci,
    bound: Sci,
    measured: Sci,
    slack: Sci,
}

#[derive(Serialize)]
struct ResolventJson {
    kind: &'static str,
    #[serde(rename = "N")]
    n: usize,
    seed: u64,
    tolerance: Sci,
    hole_fraction: Sci,
    max_rel_err: Vec<(String, Sci)>,
    skipped: Vec<String>,
    kernels: Vec<KernelRow>,
}

fn resolvent_check(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.params;
    let n = cfg.n();
    let idx = BasisIndex::new(p, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rows = Vec::new();
    let mut worst = Vec::new();
    let mut skipped = Vec::new();
    let mut failures = Vec::new();
    let record = |op: &str, region: &str, lam: Complex64, e: f64, rows: &mut Vec<Vec<String>>| {
        rows.push(vec![op.into(), region.into(), fmt_f64(lam.re), fmt_f64(lam.im), fmt_f64(e)]);
    };
    let frac = hole_fraction(n);
    for &region in z_regions(&p) {
        let mut w: f64 = 0.0;
        for _ in 0..SAMPLES {
            let lam = sample_z(&p, region, frac, &mut rng);
            let rhs = random_rhs(&idx, &mut rng, false);
            let e = rel_err(&solve_resolvent_z(&p, lam, &rhs)?.values, &dense_resolvent_z(&p, lam, &rhs)?.values);
            record("z", z_region_name(region), lam, e, &mut rows);
            w = w.max(e);
        }
        worst.push((format!("z {}", z_region_name(region)), w));
    }
    let mut kernel_rows = Vec::new();
    if let DomainParams::Pants { a, r1, r2 } = p {
        let (lo, hi) = spectral::band(&p)?;
        let avoid = [spectral::simple_eigenvalue(&p)?, r1 * r1];
        for (name, x0, x1) in [("low", 0.002, lo - 0.01), ("high", hi + 0.01, 0.998)] {
            let mut w: f64 = 0.0;
            let mut k = 0;
            let mut tries = 0;
            while k < SAMPLES && tries < 100 * SAMPLES {
                tries += 1;
                let lam = sample_real(&mut rng, x0, x1, &avoid);
                // the oracle cuts the G block, whose solution decays like |x|^{-k}
                let rd = spectral::characteristic_roots(&p, c64(lam))?;
                let grow = rd.x_plus.norm().max(rd.x_minus.norm());
                if grow.powi(-((n as i64 - SUPPORT) as i32)) > ORACLE_CUT {
                    continue;
                }
                let rhs = random_rhs(&idx, &mut rng, true);
                let e = rel_err(
                    &solve_resolvent_zzstar(&p, lam, &rhs)?.values,
                    &dense_resolvent_zzstar(&p, lam, &rhs)?.values,
                );
                record("zz*", name, c64(lam), e, &mut rows);
                w = w.max(e);
                k += 1;
            }
            if k == 0 {
                skipped.push(format!("zz* {name}: N too small for a negligible oracle truncation"));
            } else {
                worst.push((format!("zz* {name}"), w));
            }
        }
        for kname in KernelName::ALL {
            for _ in 0..3 {
                use KernelName::*;
                let lam = match kname {
                    T1 if rng.gen_bool(0.5) => in_disk(&mut rng, 0.0, 0.95 * r1),
                    T1 => in_disk(&mut rng, a, 0.95 * r2),
                    T2 | T3 | T7 => in_disk(&mut rng, 0.0, 0.95 * r1),
                    T4 | T5 | T6 => in_disk(&mut rng, a, 0.95 * r2),
                    L1 | L2 | Q => c64(sample_real(&mut rng, 0.002, lo - 0.002, &avoid)),
                    L3 | L4 | R => c64(sample_real(&mut rng, hi + 0.002, 0.998, &avoid)),
                };
                let rep = kernels::schur_young_bound_at(&KernelSpec { name: kname, params: p, lambda: lam }, n)?;
                if rep.slack < -1e-9 * rep.schur_young_bound.max(1.0) {
                    failures.push(format!("kernel {kname} at λ = {lam}: measured norm exceeds bound by {:e}", -rep.slack));
                }
                kernel_rows.push(KernelRow {
                    kernel: kname.to_string(),
                    re: Sci(lam.re),
                    im: Sci(lam.im),
                    bound: Sci(rep.schur_young_bound),
                    measured: Sci(rep.measured_norm),
                    slack: Sci(rep.slack),
                });
            }
        }
    }
    for (name, w) in &worst {
        if !(*w <= res::TOL_RESOLVENT) {
            failures.push(format!("{name}: relative error {w:.3e} above {:e}", res::TOL_RESOLVENT));
        }
    }
    let json = ResolventJson {
        kind: cfg.kind().as_str(),
        n,
        seed: cfg.seed,
        tolerance: Sci(res::TOL_RESOLVENT),
        hole_fraction: Sci(frac),
        max_rel_err: worst.iter().map(|(k, w)| (k.clone(), Sci(*w))).collect(),
        skipped,
        kernels: kernel_rows,
    };
    let files = vec![
        output::write_csv(&path(cfg, "csv"), &["operator", "region", "re", "im", "rel_err"], &rows)?,
        output::write_json(&path(cfg, "json"), &json)?,
    ];
    Ok(Report { files, failures })
}

// ---------------------------------------------------------------------------
// commutator-report

#[derive(Serialize)]
struct Entry {
    step: u8,
    identity: String,
    max_deviation: Sci,
}

#[derive(Serialize)]
struct SmallJson {
    name: String,
    char_poly: Vec<Sci>,
    roots: Vec<[Sci; 2]>,
    max_root_residual: Sci,
}

#[derive(Serialize)]
struct CommutatorJson {
    kind: &'static str,
    #[serde(rename = "N")]
    n: usize,
    tolerance: Sci,
    entries: Vec<Entry>,
    small_matrices: Vec<SmallJson>,
}

fn commutator_report(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.params;
    let (entries, small) = match p {
        DomainParams::Pants { .. } => {
            let certs = quotient::commutator_ideal_certificates(&p, cfg.n())?;
            let small = operators::small_matrices(&p)?
                .iter()
                .map(|m| SmallJson {
                    name: m.name(),
                    char_poly: m.char_poly.iter().map(|&c| Sci(c)).collect(),
                    roots: m.roots.iter().map(|r| [Sci(r.re), Sci(r.im)]).collect(),
                    max_root_residual: Sci(m.max_root_residual()),
                })
                .collect();
            let entries =
                certs.into_iter().map(|c| (c.step, c.identity, c.max_deviation)).collect::<Vec<_>>();
            (entries, small)
        }
        _ => {
            // disk and annulus: the commutator is (1 − r²) P_{E_0}
            let idx = BasisIndex::new(p, cfg.n())?;
            let scale = p.f_radius().map_or(1.0, |r| 1.0 - r * r);
            let want = quotient::slice_projection(&idx, |l| *l == BasisLabel::e(0)).scale(c64(scale));
            let got = operators::commutator_exact_sparse(&idx);
            let identity = match p {
                DomainParams::Disk => "[z*,z] = P_E0",
                _ => "[z*,z] = (1 - r^2) P_E0",
            };
            (vec![(1, identity.to_string(), quotient::max_deviation(&got, &want))], Vec::new())
        }
    };
    let failures = entries
        .iter()
        .filter(|e| !(e.2 <= TOL_CERTIFICATE))
        .map(|e| format!("step {} `{}`: deviation {:.3e} above {TOL_CERTIFICATE:e}", e.0, e.1, e.2))
        .collect();
    let json = CommutatorJson {
        kind: p.kind().as_str(),
        n: cfg.n(),
        tolerance: Sci(TOL_CERTIFICATE),
        entries: entries.into_iter().map(|(step, identity, d)| Entry { step, identity, max_deviation: Sci(d) }).collect(),
        small_matrices: small,
    };
    Ok(Report { files: vec![output::write_json(&path(cfg, "json"), &json)?], failures })
}

// ---------------------------------------------------------------------------
// toeplitz-check

const DEFAULT_WORDS: [&str; 3] = ["z", "z*z", "z*z - zz*"];

fn random_word(rng: &mut ChaCha8Rng, max_deg: usize) -> OperatorWord {
    let mut w = OperatorWord::default();
    for _ in 0..rng.gen_range(1..=3) {
        let len = rng.gen_range(0..=max_deg);
        let letters: Vec<quotient::Letter> =
            (0..len).map(|_| if rng.gen_bool(0.5) { quotient::Letter::Z } else { quotient::Letter::ZStar }).collect();
        let c = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        w = w.add(&OperatorWord::letters(&letters).scale(c));
    }
    w
}

fn coeffs(t: &TrigPoly) -> Vec<(i32, Sci, Sci)> {
    t.terms().map(|(k, c)| (k, Sci(c.re), Sci(c.im))).collect()
}

#[derive(Serialize)]
struct SymbolJson {
    word: String,
    degree: usize,
    phi1: Vec<(i32, Sci, Sci)>,
    phi2: Vec<(i32, Sci, Sci)>,
    phi3: Vec<(i32, Sci, Sci)>,
}

#[derive(Serialize)]
struct ToeplitzJson {
    kind: &'static str,
    #[serde(rename = "N")]
    n: usize,
    seed: u64,
    n_list: Vec<usize>,
    m_list: Vec<usize>,
    symbols: Vec<SymbolJson>,
    word_pairs: usize,
    homomorphism_max_dev: Sci,
    star_max_dev: Sci,
}

fn sweep(n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = [n / 4, n / 2, n].into_iter().filter(|&k| k >= 2).collect();
    v.dedup();
    v
}

fn toeplitz_check(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.params;
    let words: Vec<String> = if cfg.words.is_empty() {
        DEFAULT_WORDS.iter().map(|s| s.to_string()).collect()
    } else {
        cfg.words.clone()
    };
    let parsed = words
        .iter()
        .map(|s| s.parse::<OperatorWord>().map_err(|e| CliError::Input(format!("bad value for `word`: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let n_list = sweep(cfg.n());
    let m_list: Vec<usize> = [1, 2, 4, 8, 16, 32, 64, 128].into_iter().filter(|&m| m < cfg.n()).collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut symbols = Vec::new();
    for (text, w) in words.iter().zip(&parsed) {
        let sym: SymbolTriple = symbol_of(w, &p)?;
        for r in quotient::compactness_score(&p, w, &n_list, &m_list)? {
            if r.m >= w.degree() + 2 && !(r.tail_norm <= TOL_TAIL) {
                failures.push(format!("`{text}` N={} M={}: tail norm {:.3e} above {TOL_TAIL:e}", r.n, r.m, r.tail_norm));
            }
            rows.push(vec![
                text.clone(),
                r.n.to_string(),
                r.m.to_string(),
                fmt_f64(r.masked_norm),
                fmt_f64(r.tail_norm),
            ]);
        }
        let [phi1, phi2, phi3] = sym.slots();
        symbols.push(SymbolJson {
            word: text.clone(),
            degree: w.degree(),
            phi1: coeffs(phi1),
            phi2: coeffs(phi2),
            phi3: coeffs(phi3),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut hom, mut star): (f64, f64) = (0.0, 0.0);
    for _ in 0..WORD_PAIRS {
        let (w1, w2) = (random_word(&mut rng, 4), random_word(&mut rng, 4));
        let (s1, s2) = (symbol_of(&w1, &p)?, symbol_of(&w2, &p)?);
        hom = hom.max(symbol_of(&w1.mul(&w2), &p)?.max_deviation(&s1.mul(&s2)));
        star = star.max(symbol_of(&w1.adjoint(), &p)?.max_deviation(&s1.conj()));
    }
    if !(hom <= TOL_SYMBOL) {
        failures.push(format!("symbol map is not multiplicative: deviation {hom:.3e}"));
    }
    if !(star <= TOL_SYMBOL) {
        failures.push(format!("symbol map does not commute with the adjoint: deviation {star:.3e}"));
    }
    let json = ToeplitzJson {
        kind: p.kind().as_str(),
        n: cfg.n(),
        seed: cfg.seed,
        n_list,
        m_list,
        symbols,
        word_pairs: WORD_PAIRS,
        homomorphism_max_dev: Sci(hom),
        star_max_dev: Sci(star),
    };
    let files = vec![
        output::write_csv(&path(cfg, "csv"), &["word", "N", "M", "masked_norm", "tail_norm"], &rows)?,
        output::write_json(&path(cfg, "json"), &json)?,
    ];
    Ok(Report { files, failures })
}

// ---------------------------------------------------------------------------
// convergence

fn convergence(cfg: &RunConfig) -> Result<Report, CliError> {
    let n_list = cfg.n_list.clone().unwrap_or_else(|| sweep(cfg.n()));
    if cfg.mode != Mode::Exact {
        return Err(CliError::Input("bad value for `mode`: convergence is defined for exact mode only".into()));
    }
    let table = spectral::spectrum_convergence_report(&cfg.params, &n_list)?;
    let mut failures = Vec::new();
    let rows: Vec<Vec<String>> = table
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                fmt_f64(r.err_lambda_star),
                fmt_f64(r.err_r1sq),
                fmt_f64(r.err_one),
                fmt_f64(r.band_lo_err),
                fmt_f64(r.band_hi_err),
            ]
        })
        .collect();
    if let Some(last) = table.iter().max_by_key(|r| r.n) {
        for (name, e) in [("lambda_star", last.err_lambda_star), ("r1^2", last.err_r1sq), ("1", last.err_one)] {
            if !(e <= TOL_SPECTRUM) {
                failures.push(format!("N={}: {name} error {e:.3e} above {TOL_SPECTRUM:e}", last.n));
            }
        }
    }
    let header = ["N", "err_lambda_star", "err_r1sq", "err_one", "band_lo_err", "band_hi_err"];
    Ok(Report { files: vec![output::write_csv(&path(cfg, "csv"), &header, &rows)?], failures })
}
