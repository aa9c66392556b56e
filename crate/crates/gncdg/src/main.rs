use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gncdg::output::{write_csv, write_json};
use gncdg::report::{convergence, convergence_table, dispersion, ACCURACY_DX};
use gncdg::{scenario, AppError, Overrides, Result, RunConfig};

#[derive(Parser)]
#[command(name = "gncdg", version, about = "Dispersion-enhanced Green-Naghdi solver (central DG on overlapping meshes)")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        k: Option<u8>,
        #[arg(long, requires = "ny")]
        nx: Option<usize>,
        #[arg(long, requires = "nx")]
        ny: Option<usize>,
        #[arg(long)]
        t_final: Option<f64>,
        /// Print a line every this many steps.
        #[arg(long, default_value_t = 100)]
        every: usize,
    },
    /// Mesh-refinement study against the exact solitary wave.
    Convergence {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Cell sizes; defaults to 1, 0.5, 0.25, 0.125.
        #[arg(long, value_delimiter = ',')]
        dx: Option<Vec<f64>>,
    },
    /// Model and Airy dispersion relations.
    Dispersion {
        #[arg(long, value_delimiter = ',', default_value = "1,1.159")]
        alpha: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        h0: f64,
        #[arg(long, default_value_t = 1.0)]
        g: f64,
        #[arg(long, default_value_t = 4.0)]
        k_max: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value = "dispersion.csv")]
        out: PathBuf,
    },
    /// List the scenario catalog.
    Scenarios,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.cmd {
        Command::Run { config, out, alpha, k, nx, ny, t_final, every } => {
            let o = Overrides { out, alpha, k: k.map(usize::from), nx, ny, t_final };
            let cfg = RunConfig::load(&config, &o)?;
            println!("{} k={} {}x{} alpha={} t_final={}", cfg.scenario, cfg.k, cfg.nx, cfg.ny, cfg.alpha, cfg.t_final);
            let out = gncdg::run::run(&cfg, true, |r| {
                if every > 0 && r.step % every == 0 {
                    println!("step {:>7} t={:.6} dt={:.3e} min h={:.3e}", r.step, r.t, r.dt, r.stats.min_mean_depth);
                }
            })?;
            let s = &out.summary;
            println!(
                "done: {} steps, mass drift {:.3e}, min mean depth {:.3e}, {:.1} s",
                s.steps, s.mass_drift, s.min_mean_depth, s.wall_time_s
            );
            for f in &out.files {
                println!("wrote {}", f.display());
            }
        }
        Command::Convergence { config, out, dx } => {
            let cfg = RunConfig::load(&config, &Overrides::default())?;
            let dxs = dx.unwrap_or_else(|| ACCURACY_DX.to_vec());
            let rows = convergence(&cfg, &dxs)?;
            let dir = out.unwrap_or_else(|| cfg.out_dir.clone());
            std::fs::create_dir_all(&dir).map_err(|e| AppError::io(&dir, e))?;
            let (header, data) = convergence_table(&rows);
            write_csv(&dir.join("convergence.csv"), &header, &data)?;
            write_json(&dir.join("convergence.json"), &rows)?;
            println!("{:>8} {:>12} {:>7} {:>12} {:>7}", "dx", "L2(h)", "order", "L2(u)", "order");
            for r in &rows {
                let o = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.2}"));
                println!("{:>8} {:>12.3e} {:>7} {:>12.3e} {:>7}", r.dx, r.l2_h, o(r.order_h), r.l2_u, o(r.order_u));
            }
        }
        Command::Dispersion { alpha, h0, g, k_max, samples, out } => {
            let t = dispersion(&alpha, h0, g, k_max, samples)?;
            let (header, rows) = t.csv();
            write_csv(&out, &header, &rows)?;
            for (a, d) in t.alphas.iter().zip(&t.deviation) {
                println!("alpha={a}: L2 deviation from Airy over (0, {k_max}] = {d:.6e}");
            }
            println!("wrote {}", out.display());
        }
        Command::Scenarios => {
            for name in scenario::NAMES {
                let s = scenario::lookup(name).expect("catalog names resolve");
                let [x0, x1, y0, y1] = s.domain;
                println!(
                    "{:<18} [{x0}, {x1}] x [{y0}, {y1}]  {}x{}  t={}  {}",
                    s.name, s.nx, s.ny, s.t_final, s.summary
                );
            }
        }
    }
    Ok(())
}
