use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde_json::json;

use parapon_core::capacity::{self, PonConfig, SpectralPlan};
use parapon_core::config::{OutputFormat, ToolConfig};
use parapon_core::fiber::{self, FiberProfile};
use parapon_core::gain::{self, PhaseMatchInput};
use parapon_core::ode::{self, OdeConfig, OdeMethod, ThreeWaveState};
use parapon_core::pulse::{self, PumpModulation};
use parapon_core::sweep::{self, Execution, FigureId, SweepSpec};
use parapon_core::{units, Error};

use crate::quantity::fmt_sig;
use crate::{
    exit, CapacityArgs, FiberArgs, GainArgs, MismatchArgs, OdeVerifyArgs, PulseArgs, SweepArgs,
};

const SIG: usize = 6;

fn resolve_fiber(cfg: &ToolConfig, a: &FiberArgs) -> parapon_core::Result<FiberProfile> {
    let mut p = match &a.fiber {
        Some(name) => fiber::profile_by_name(name)?,
        None => cfg.fiber.profile(),
    };
    if let Some(g) = a.gamma.filter(|&g| g != 0.0) {
        p.gamma = g;
    }
    if let Some(sp) = a.sp {
        p.s_p = sp;
    }
    if let Some(l0) = a.lambda0 {
        p.lambda0 = l0;
    }
    if let Some(s) = a.disp_slope {
        p.disp_slope = s;
    }
    p.validate()?;
    // --gamma 0 switches the nonlinearity off, which no stored profile allows
    if a.gamma == Some(0.0) {
        p.gamma = 0.0;
    }
    Ok(p)
}

fn resolve_mismatch(
    profile: &FiberProfile,
    m: &MismatchArgs,
    p_pump: f64,
) -> parapon_core::Result<f64> {
    if let Some(db) = m.delta_beta {
        return Ok(db);
    }
    if let (Some(ls), Some(lp)) = (m.lambda_s, m.lambda_p) {
        for w in capacity::range_warnings(Some(ls), Some(lp), None, None) {
            eprintln!("warning: {w}");
        }
        return gain::phase_mismatch(&PhaseMatchInput {
            lambda0: profile.lambda0,
            lambda_p: lp,
            lambda_s: ls,
            disp_slope: profile.disp_slope,
        });
    }
    Ok(-2.0 * profile.gamma_si() * p_pump)
}

fn interaction_length_m(
    profile: &FiberProfile,
    length_km: f64,
    use_leff: bool,
) -> parapon_core::Result<f64> {
    if !(length_km >= 0.0) {
        return Err(Error::Domain(format!(
            "length must be >= 0 km, got {length_km}"
        )));
    }
    let km = if use_leff {
        fiber::effective_length(profile.alpha_db, length_km)?
    } else {
        length_km
    };
    Ok(units::km_to_m(km))
}

fn print_rows(rows: &[(&str, String)]) {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in rows {
        println!("{k:<width$}  {v}");
    }
}

fn print_json(v: &serde_json::Value) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

pub fn gain(cfg: &ToolConfig, a: &GainArgs) -> anyhow::Result<u8> {
    let profile = resolve_fiber(cfg, &a.fiber)?;
    let p = a.pump_power.unwrap_or(cfg.pump.p0);
    let db = resolve_mismatch(&profile, &a.mismatch, p)?;
    let len = interaction_length_m(&profile, a.length, a.effective_length)?;
    for w in capacity::range_warnings(None, None, None, Some(p)) {
        eprintln!("warning: {w}");
    }
    let g = gain::signal_gain(db, profile.gamma_si(), p, len)?;
    let slope = gain::gain_db_slope_form(p, units::m_to_km(len), profile.s_p).ok();

    if a.json {
        return print_json(&json!({
            "fiber": profile,
            "pump_power_w": p,
            "length_m": len,
            "breakdown": g,
            "slope_form_db": slope,
        }))
        .map(|_| exit::OK);
    }
    print_rows(&[
        (
            "fiber",
            format!(
                "{} (gamma {} 1/(W km), S_p {} dB/(W km))",
                profile.name, profile.gamma, profile.s_p
            ),
        ),
        ("pump power", format!("{} W", fmt_sig(p, SIG))),
        (
            "length",
            format!("{} km", fmt_sig(units::m_to_km(len), SIG)),
        ),
        ("delta_beta", format!("{} 1/m", fmt_sig(g.delta_beta, SIG))),
        ("k", format!("{} 1/m", fmt_sig(g.k, SIG))),
        ("g^2", format!("{} 1/m^2", fmt_sig(g.g_squared, SIG))),
        ("regime", g.regime.as_str().to_string()),
        ("gain", format!("{} (linear)", fmt_sig(g.gain_linear, SIG))),
        ("gain_db", format!("{} dB", fmt_sig(g.gain_db, SIG))),
        (
            "slope form",
            match slope {
                Some(s) => format!("{} dB", fmt_sig(s, SIG)),
                None => "n/a (needs P*L > 0)".to_string(),
            },
        ),
    ]);
    Ok(exit::OK)
}

fn ode_config(cfg: &ToolConfig, a: &OdeVerifyArgs) -> OdeConfig {
    let mut c = cfg.ode;
    if let Some(h) = a.step {
        c.method = OdeMethod::FixedRk4;
        c.step = Some(h);
    }
    if let Some(r) = a.rtol {
        c.method = OdeMethod::Adaptive;
        c.rel_tol = r;
    }
    if let Some(n) = a.max_steps {
        c.max_steps = n;
    }
    c
}

pub fn ode_verify(cfg: &ToolConfig, a: &OdeVerifyArgs) -> anyhow::Result<u8> {
    let profile = resolve_fiber(cfg, &a.fiber)?;
    let p = a.pump_power.unwrap_or(cfg.pump.p0);
    if !(a.seed_ratio > 0.0) {
        return Err(Error::Config(format!("seed ratio must be > 0, got {}", a.seed_ratio)).into());
    }
    if !(a.tolerance > 0.0) {
        return Err(Error::Config(format!("tolerance must be > 0, got {}", a.tolerance)).into());
    }
    let db = resolve_mismatch(&profile, &a.mismatch, p)?;
    let len = interaction_length_m(&profile, a.length, a.effective_length)?;
    let gamma = profile.gamma_si();
    let oc = ode_config(cfg, a);

    let analytic = gain::signal_gain(db, gamma, p, len)?.gain_linear;
    let seed = ThreeWaveState::from_powers(p, a.seed_ratio * p, 0.0);
    let end = ode::propagate(&seed, gamma, db, len, &oc)?;
    let oracle = end.signal_power() / seed.signal_power();
    let rel = (oracle / analytic - 1.0).abs();
    let drift = (end.total_power() / seed.total_power() - 1.0).abs();
    let pass = rel <= a.tolerance;

    if a.json {
        print_json(&json!({
            "analytic_gain": analytic,
            "oracle_gain": oracle,
            "relative_error": rel,
            "tolerance": a.tolerance,
            "power_drift": drift,
            "pass": pass,
        }))?;
    } else {
        print_rows(&[
            (
                "analytic gain",
                format!(
                    "{} ({} dB)",
                    fmt_sig(analytic, 9),
                    fmt_sig(units::to_db(analytic), SIG)
                ),
            ),
            (
                "oracle gain",
                format!(
                    "{} ({} dB)",
                    fmt_sig(oracle, 9),
                    fmt_sig(units::to_db(oracle), SIG)
                ),
            ),
            ("relative error", fmt_sig(rel, 3)),
            ("tolerance", fmt_sig(a.tolerance, 3)),
            ("power drift", fmt_sig(drift, 3)),
            ("result", if pass { "PASS" } else { "FAIL" }.to_string()),
        ]);
    }
    Ok(if pass { exit::OK } else { exit::VERIFY_FAILED })
}

pub fn pulse(cfg: &ToolConfig, a: &PulseArgs) -> anyhow::Result<u8> {
    let profile = resolve_fiber(cfg, &a.fiber)?;
    let modulation = PumpModulation::new(
        a.p0.unwrap_or(cfg.pump.p0),
        a.fm.map(|f| 2.0 * std::f64::consts::PI * f)
            .unwrap_or(cfg.pump.omega_m),
    )?;
    let db = resolve_mismatch(&profile, &a.mismatch, modulation.p0)?;
    let len = interaction_length_m(&profile, a.length, a.effective_length)?;
    let plan = SpectralPlan {
        n_links: a.n_links.unwrap_or(cfg.plan.n_links),
        n_channels: a.n_channels.unwrap_or(cfg.plan.n_channels),
        ..cfg.plan
    };
    plan.validate()?;
    for w in capacity::range_warnings(None, None, Some(plan.n_links), Some(modulation.p0)) {
        eprintln!("warning: {w}");
    }
    let params = pulse::pulse_params(db, profile.gamma_si(), &modulation, len, a.chirp)?;
    let t0_ns = units::s_to_ns(params.t0);
    let ch = capacity::mtdm_bit_rate_channel(t0_ns)?;
    let link = capacity::mtdm_bit_rate_link(t0_ns, plan.n_channels)?;
    let core = capacity::mtdm_bit_rate_core(t0_ns, plan.n_links, plan.n_channels)?;
    let curvature = pulse::pump_curvature(&modulation);

    if a.json {
        return print_json(&json!({
            "delta_beta_per_m": db,
            "pulse": params,
            "t0_ns": t0_ns,
            "fwhm_s": pulse::intensity_fwhm(params.t0),
            "pump_curvature_w_per_s2": curvature,
            "n_links": plan.n_links,
            "n_channels": plan.n_channels,
            "bit_rate_channel_gbps": ch,
            "bit_rate_link_gbps": link,
            "bit_rate_core_mbps": core,
        }))
        .map(|_| exit::OK);
    }
    print_rows(&[
        ("fiber", profile.name.clone()),
        ("delta_beta", format!("{} 1/m", fmt_sig(db, SIG))),
        ("g0", format!("{} 1/m", fmt_sig(params.g0, SIG))),
        ("P0''", format!("{} W/s^2", fmt_sig(curvature, SIG))),
        (
            "T0",
            format!(
                "{} ps ({} ns)",
                fmt_sig(units::s_to_ps(params.t0), SIG),
                fmt_sig(t0_ns, SIG)
            ),
        ),
        (
            "FWHM |A|^2",
            format!(
                "{} ps",
                fmt_sig(units::s_to_ps(pulse::intensity_fwhm(params.t0)), SIG)
            ),
        ),
        ("A0", fmt_sig(params.a0, SIG)),
        ("chirp C", fmt_sig(params.chirp_c, SIG)),
        ("B/channel", format!("{} Gbit/s", fmt_sig(ch, SIG))),
        (
            "B/link",
            format!(
                "{} Gbit/s ({} channels)",
                fmt_sig(link, SIG),
                plan.n_channels
            ),
        ),
        (
            "B/core",
            format!("{} Mbit/s ({} links)", fmt_sig(core, SIG), plan.n_links),
        ),
    ]);
    Ok(exit::OK)
}

pub fn capacity(cfg: &ToolConfig, a: &CapacityArgs) -> anyhow::Result<u8> {
    let base = cfg.pon;
    let pon = PonConfig {
        k_lasers: a.k.unwrap_or(base.k_lasers),
        n_in: a.n.unwrap_or(base.n_in),
        m_out: a.m.unwrap_or(base.m_out),
        w_users: a.w.unwrap_or(base.w_users),
        data_rate_d: a.d.unwrap_or(base.data_rate_d),
        slot_t: a.slot.unwrap_or(base.slot_t),
        t_laser: a.tlaser.unwrap_or(base.t_laser),
        utilization_rho: a.rho.unwrap_or(base.utilization_rho),
        t_tx: a.ttx.unwrap_or(base.t_tx),
    };
    let plan = SpectralPlan {
        n_links: a.n_links.unwrap_or(cfg.plan.n_links),
        n_channels: a.n_channels.unwrap_or(cfg.plan.n_channels),
        ..cfg.plan
    };
    for w in capacity::range_warnings(None, None, Some(plan.n_links), None) {
        eprintln!("warning: {w}");
    }
    let bw = capacity::bandwidth_per_user(&pon)?;
    let window = capacity::service_window(&pon)?;
    let delay = capacity::network_delay(&pon)?;
    let spacing = capacity::channel_spacing(&plan)?;
    let rates = match a.t0 {
        Some(t0) => {
            let ns = units::s_to_ns(t0);
            Some((
                capacity::mtdm_bit_rate_channel(ns)?,
                capacity::mtdm_bit_rate_link(ns, plan.n_channels)?,
                capacity::mtdm_bit_rate_core(ns, plan.n_links, plan.n_channels)?,
            ))
        }
        None => None,
    };

    if a.json {
        return print_json(&json!({
            "pon": pon,
            "plan": plan,
            "bw_per_user_gbps": bw,
            "service_window_s": window,
            "network_delay_s": delay,
            "link_spacing_um": spacing,
            "bit_rate_channel_gbps": rates.map(|r| r.0),
            "bit_rate_link_gbps": rates.map(|r| r.1),
            "bit_rate_core_mbps": rates.map(|r| r.2),
        }))
        .map(|_| exit::OK);
    }
    let mut rows = vec![
        ("BW/user", format!("{} Gbit/s", fmt_sig(bw, SIG))),
        (
            "service window",
            format!("{} ms", fmt_sig(window * 1e3, SIG)),
        ),
        ("network delay", format!("{} ms", fmt_sig(delay * 1e3, SIG))),
        (
            "link spacing",
            format!(
                "{} nm ({} links)",
                fmt_sig(spacing * 1e3, SIG),
                plan.n_links
            ),
        ),
    ];
    if let Some((ch, link, core)) = rates {
        rows.push(("B/channel", format!("{} Gbit/s", fmt_sig(ch, SIG))));
        rows.push(("B/link", format!("{} Gbit/s", fmt_sig(link, SIG))));
        rows.push(("B/core", format!("{} Mbit/s", fmt_sig(core, SIG))));
    }
    print_rows(&rows);
    Ok(exit::OK)
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents)
        .map_err(Error::Io)
        .with_context(|| format!("writing {}", path.display()))
}

pub fn sweep(cfg: &ToolConfig, a: &SweepArgs) -> anyhow::Result<u8> {
    let (spec, name, preset): (SweepSpec, String, Option<String>) = match (&a.preset, &a.spec) {
        (Some(id), _) => {
            let id: FigureId = id.parse()?;
            (
                sweep::figure_preset(id),
                id.to_string(),
                Some(id.to_string()),
            )
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(Error::Io)
                .with_context(|| format!("reading {}", path.display()))?;
            let spec: SweepSpec = serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            let stem = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("sweep")
                .to_string();
            (spec, stem, None)
        }
        (None, None) => unreachable!("clap enforces --preset or --spec"),
    };

    let mut effective = cfg.clone();
    if let Some(dir) = &a.output {
        effective.output.path = dir.clone();
    }
    if let Some(f) = a.format {
        effective.output.format = f.into();
    }

    let execution = if a.serial {
        Execution::Serial
    } else {
        Execution::Parallel
    };
    let mut curves = sweep::run_sweep_with(&spec, execution)?;
    curves.metadata.preset = preset;

    let dir: PathBuf = effective.output.path.clone();
    fs::create_dir_all(&dir)
        .map_err(Error::Io)
        .with_context(|| format!("creating {}", dir.display()))?;
    let (data_path, data) = match effective.output.format {
        OutputFormat::Csv => (dir.join(format!("{name}.csv")), curves.to_csv_string()?),
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&json!({
                "columns": curves.columns,
                "rows": curves.rows,
            }))?;
            s.push('\n');
            (dir.join(format!("{name}.json")), s)
        }
    };
    let meta_path = dir.join(format!("{name}.meta.json"));
    write_file(&data_path, &data)?;
    write_file(&meta_path, &curves.metadata_json(Some(&effective))?)?;

    println!("{} rows", curves.rows.len());
    println!("{}", data_path.display());
    println!("{}", meta_path.display());
    Ok(exit::OK)
}

pub fn presets() -> anyhow::Result<u8> {
    for id in FigureId::all() {
        let spec = sweep::figure_preset(id);
        let series = spec
            .series
            .as_ref()
            .map(|s| {
                let vals: Vec<String> = s.values.iter().map(|v| v.to_string()).collect();
                format!("{} in {{{}}}", s.param, vals.join(", "))
            })
            .unwrap_or_default();
        println!(
            "{:<6} {:<22} {} in [{}, {}] x{}  {}\n       {}",
            id.to_string(),
            spec.target.as_str(),
            spec.swept.param,
            spec.swept.min,
            spec.swept.max,
            spec.swept.steps,
            series,
            id.describe()
        );
    }
    Ok(exit::OK)
}
