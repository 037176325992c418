use std::process::ExitCode;

fn main() -> ExitCode {
    rao_fusion_cli::main_with_args(std::env::args_os())
}
