use std::process::ExitCode;

fn main() -> ExitCode {
    gsp_retinex::cli::main_with_args(std::env::args_os())
}
