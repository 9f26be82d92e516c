use berktrees::cli;

fn main() {
    std::process::exit(cli::run());
}
