use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(wikirank::cli::run())
}
