use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(capmatch::cli::run())
}
