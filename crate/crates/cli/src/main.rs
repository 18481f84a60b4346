use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let (mut out, mut err) = (stdout.lock(), stderr.lock());
    if let Err(f) = bohrkit_cli::configure_threads() {
        let _ = writeln!(err, "error: {}", f.message);
        return ExitCode::from(f.code as u8);
    }
    let code = bohrkit_cli::run(std::env::args_os(), &mut out, &mut err);
    let _ = out.flush();
    ExitCode::from(code as u8)
}
