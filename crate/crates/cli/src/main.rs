use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let code = wronsk_cli::run_with_args(
        std::env::args_os(),
        &mut io::stdout().lock(),
        &mut io::stderr(),
    );
    ExitCode::from(code)
}
