//! Drives the command-line front end in-process: a small amplitude sweep
//! written to a temporary directory.

use nlburgers::app::{cmd_sweep, RunConfig};

pub fn run_example() -> nlburgers::Result<()> {
    let dir = std::env::temp_dir().join(format!("nlburgers-sweep-{}", std::process::id()));
    let mut cfg = RunConfig {
        base_cells: 256,
        output: dir.clone(),
        ..Default::default()
    };
    cfg.sweep.kernels = vec!["exp:k=1".into(), "exp:k=2".into()];
    cfg.sweep.amplitudes = vec![0.5, 1.2, 2.5, 5.0];
    cfg.sweep.log_amplitudes = None;
    let code = cmd_sweep(&cfg)?;
    print!("{}", std::fs::read_to_string(dir.join("sweep.csv"))?);
    println!("exit code {code}");
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> nlburgers::Result<()> {
    run_example()
}
