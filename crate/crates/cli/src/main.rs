use clap::Parser;

fn main() {
    let cli = beadiag_cli::Cli::parse();
    match beadiag_cli::run(&cli) {
        Ok(output) => {
            print!("{output}");
        }
        Err(err) => {
            eprintln!("error[{}]: {err}", beadiag_cli::exit_code(&err));
            std::process::exit(beadiag_cli::exit_code(&err));
        }
    }
}
