fn main() {
    // populated as subcommands land
}
