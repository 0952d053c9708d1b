mod args;
mod commands;
mod config;
mod error;
mod manifest;
mod parse;

use args::{Cli, Command};
use clap::Parser;
use error::CliError;
use manifest::Manifest;
use std::ffi::OsString;
use std::process::ExitCode;

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("HRTLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| {
        CliError::Usage(format!(
            "HRTLAB_THREADS must be a non-negative integer, got {v:?}"
        ))
    })?;
    // 0 keeps rayon's automatic choice
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot size thread pool: {e}")))?;
    }
    Ok(())
}

fn execute(argv: Vec<OsString>) -> Result<(), CliError> {
    let argv = match config::config_path(&argv) {
        Some(path) => config::merge_config(argv, &path)?,
        None => argv,
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            // help and version exit 0, everything else 2
            e.exit();
        }
    };
    init_threads()?;

    let (command, seed, mut inputs) = match &cli.command {
        Command::Replay(r) => {
            let m = Manifest::read(&r.manifest)?;
            (m.parameters, m.seed, vec![r.manifest.clone()])
        }
        other => (other.clone(), cli.seed, Vec::new()),
    };
    if let Some(c) = &cli.config {
        inputs.push(c.clone());
    }

    let outcome = commands::run(&command)?;
    inputs.extend(outcome.inputs.iter().cloned());

    std::fs::create_dir_all(&cli.out_dir)?;
    for (name, bytes) in &outcome.files {
        std::fs::write(cli.out_dir.join(name), bytes)?;
    }
    let mut m = Manifest::new(&command, seed);
    for p in &inputs {
        m.input_digests
            .insert(p.display().to_string(), manifest::digest_file(p)?);
    }
    m.outputs = commands::output_digests(&outcome.files);
    m.write(&cli.out_dir)?;
    print!("{}", outcome.stdout);
    Ok(())
}

fn main() -> ExitCode {
    match execute(std::env::args_os().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
