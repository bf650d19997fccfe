use std::process::ExitCode;

fn main() -> ExitCode {
    tensor_modes::cli::run(std::env::args_os())
}
