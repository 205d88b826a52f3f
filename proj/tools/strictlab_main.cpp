#include <cstdlib>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "strictlab/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"strictlab - magnetostriction lattice model laboratory"};
    app.require_subcommand(1);

    std::string manifest_path, out_dir;
    std::optional<std::uint64_t> seed;
    int threads = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--manifest", manifest_path, "experiment manifest file")
            ->required();
        sub->add_option("--out", out_dir, "output directory")->required();
        sub->add_option("--seed", seed, "override the manifest seed");
        sub->add_option("--threads", threads,
                        "worker threads (fallback: STRICTLAB_THREADS, else 1)");
    };
    add_common(app.add_subcommand("simulate", "one chain per beta, CSV output"));
    add_common(app.add_subcommand("hysteresis", "beta ramp up then down"));
    add_common(app.add_subcommand("bounds", "rigorous bound report per beta"));
    add_common(app.add_subcommand("oracle", "exact 2x2 oracle and sampler check"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : strictlab::runner::kExitInvalid;
    }

    if (threads <= 0) {
        if (const char* env = std::getenv("STRICTLAB_THREADS"))
            threads = std::atoi(env);
        if (threads <= 0) threads = 1;
    }

    strictlab::runner::Options opt{manifest_path, out_dir, seed, threads};
    return strictlab::runner::dispatch(app.get_subcommands().front()->get_name(),
                                       opt);
}
