use std::process::ExitCode;

fn main() -> ExitCode {
    nlvp::cli::run(std::env::args_os())
}
