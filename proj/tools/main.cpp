#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "cli.hpp"

using qcompact::cli::Format;
using qcompact::cli::RunConfig;
using qcompact::cli::Subcommand;

namespace {

void add_common(CLI::App* sub, RunConfig& cfg, bool with_ordering) {
    static const std::map<std::string, qcompact::LogBase> bases{{"2", qcompact::LogBase::Two},
                                                                {"e", qcompact::LogBase::E}};
    static const std::map<std::string, Format> formats{{"json", Format::Json},
                                                       {"text", Format::Text}};
    sub->add_option("--log-base", cfg.base, "Logarithm base: 2 or e")
        ->transform(CLI::CheckedTransformer(bases));
    sub->add_option("--format", cfg.format, "Output format: json or text")
        ->transform(CLI::CheckedTransformer(formats));
    sub->add_option("--tol", cfg.tol, "Invariant tolerance for exit code 1")
        ->check(CLI::PositiveNumber);
    if (with_ordering) {
        sub->add_option("--ordering", cfg.ordering, "Party ordering, e.g. ABC or A,B,C");
    }
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"Compact Schmidt decomposition and the entanglement measure E^c"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "qcompact 0.1.0");

    auto* decompose = app.add_subcommand("decompose", "Compact decomposition trees and checks");
    auto* measure = app.add_subcommand("measure", "E^c of a pure state");
    auto* classify = app.add_subcommand("classify", "Three-qubit class and standard form");
    auto* verify = app.add_subcommand("verify", "Membership checks for each ordering's sigma");
    auto* roof = app.add_subcommand("roof", "Convex-roof E^c of a density matrix");
    auto* random = app.add_subcommand("random", "Sample a Haar-random state file");
    auto* named = app.add_subcommand("named", "Emit a named state file");

    for (auto* sub : {decompose, measure, classify, verify, roof}) {
        sub->add_option("input", cfg.inputs, "State file")->required();
    }
    add_common(decompose, cfg, true);
    add_common(measure, cfg, true);
    add_common(classify, cfg, true);
    add_common(verify, cfg, true);
    add_common(roof, cfg, false);

    measure->add_flag("--tree", cfg.with_tree, "Include the argmin tree");
    measure->add_flag("--relative-entropy", cfg.relative_entropy,
                      "Add an upper-bound estimate of the relative entropy of entanglement");
    measure->add_option("--seed", cfg.seed, "Seed for the relative-entropy optimizer");

    roof->add_option("--ensemble-size", cfg.ensemble_size, "Ensemble size m (0: twice the rank)")
        ->check(CLI::NonNegativeNumber);
    roof->add_option("--restarts", cfg.restarts, "Restarts, including the eigen-ensemble start")
        ->check(CLI::Range(1, 10000));
    roof->add_option("--max-iters", cfg.max_iters, "Iteration cap per restart")
        ->check(CLI::Range(1, 1000000));
    roof->add_option("--seed", cfg.seed, "Seed for restart starting points");
    // --tol on roof is the optimizer tolerance
    roof->get_option("--tol")->description("Convergence tolerance on the objective");
    roof->add_option("--threads", cfg.threads, "Concurrent restarts")->check(CLI::Range(1, 256));

    random->add_option("--dims", cfg.dims, "Local dimensions, e.g. 2,2,2")
        ->required()
        ->delimiter(',')
        ->check(CLI::Range(1, 64));
    random->add_option("--rank", cfg.rank, "Density-matrix rank (0: pure state)")
        ->check(CLI::NonNegativeNumber);
    random->add_option("--seed", cfg.seed, "Sampler seed");
    random->add_option("-o,--output", cfg.output, "Write to a file instead of stdout");

    named->add_option("name", cfg.name, "ghz, w, eq8_max, product or bell_times_pure")->required();
    named->add_option("--parties", cfg.parties, "Party count for ghz, w, product")
        ->check(CLI::Range(2, 16));
    named->add_option("-o,--output", cfg.output, "Write to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return qcompact::cli::kBadInput;
    }

    const std::map<CLI::App*, Subcommand> which{
        {decompose, Subcommand::Decompose}, {measure, Subcommand::Measure},
        {classify, Subcommand::Classify},   {verify, Subcommand::Verify},
        {roof, Subcommand::Roof},           {random, Subcommand::Random},
        {named, Subcommand::Named}};
    for (const auto& [sub, kind] : which) {
        if (sub->parsed()) cfg.subcommand = kind;
    }
    if (cfg.subcommand == Subcommand::Roof) cfg.roof_tol = cfg.tol;
    return qcompact::cli::run(cfg, std::cout, std::cerr);
}
