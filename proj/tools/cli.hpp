#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qcompact/tensor.hpp"

namespace qcompact::cli {

enum class Subcommand { Decompose, Measure, Classify, Verify, Roof, Random, Named };
enum class Format { Json, Text };

enum ExitCode : int { kOk = 0, kInvariantFailure = 1, kBadInput = 2 };

struct RunConfig {
    Subcommand subcommand = Subcommand::Measure;
    std::vector<std::filesystem::path> inputs;
    std::optional<std::string> ordering;
    LogBase base = LogBase::Two;
    Format format = Format::Json;
    double tol = 1e-8;  // invariant tolerance for exit code 1
    std::uint64_t seed = 1;

    // measure
    bool with_tree = false;
    bool relative_entropy = false;

    // roof
    std::size_t ensemble_size = 0;
    std::size_t restarts = 8;
    std::size_t max_iters = 500;
    double roof_tol = 1e-8;
    std::size_t threads = 1;

    // random / named
    std::vector<std::size_t> dims;
    std::size_t rank = 0;  // 0: pure state
    std::string name;
    std::size_t parties = 3;
    std::optional<std::filesystem::path> output;
};

std::string to_string(Subcommand s);

/// Runs one subcommand. Reports go to `out`, diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace qcompact::cli
