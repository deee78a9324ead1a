use std::process::ExitCode;

fn main() -> ExitCode {
    chirp::cli::main_with_args(std::env::args_os())
}
