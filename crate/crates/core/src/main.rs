use std::process::ExitCode;

fn main() -> ExitCode {
    envyfree::cli::run()
}
