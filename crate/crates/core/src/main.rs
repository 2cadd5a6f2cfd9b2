fn main() {
    std::process::exit(rigid_inertia::cli::run(std::env::args_os()));
}
