use std::process::ExitCode;

fn main() -> ExitCode {
    let out = std::io::stdout();
    let err = std::io::stderr();
    ExitCode::from(dynaug_cli::run(std::env::args_os(), &mut out.lock(), &mut err.lock()))
}
