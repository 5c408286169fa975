use clap::Parser;

use latticeforge_cli::{init_threads, run, Cli};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = init_threads().and_then(|()| run(cli));
    match outcome {
        Ok(text) => {
            if !text.is_empty() {
                println!("{text}");
            }
        }
        Err(e) => {
            eprintln!("latticeforge: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
