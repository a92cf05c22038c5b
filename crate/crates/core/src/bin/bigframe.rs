use std::io::{self, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let env_tol = std::env::var("BIGFRAME_TOL").ok();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = bigframe::cli::main_with(std::env::args_os(), env_tol.as_deref(), &mut out, &mut err);
    let _ = out.flush();
    ExitCode::from(code as u8)
}
