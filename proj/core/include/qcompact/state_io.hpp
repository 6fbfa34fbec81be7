#pragma once

// JSON state files and report serialization.
//
// Pure state:    {"dims": [...], "labels": [...], "amplitudes": [[re, im], ...]}
// Density:       {"dims": [...], "labels": [...], "matrix": [[[re, im], ...], ...]}
//
// "labels" is optional. Non-finite numbers are written as null.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "qcompact/convex_roof.hpp"
#include "qcompact/measures.hpp"
#include "qcompact/schmidt_tree.hpp"
#include "qcompact/tensor.hpp"
#include "qcompact/three_qubit.hpp"

namespace qcompact {

using json = nlohmann::json;

enum class InputErrorKind { FileNotFound, Parse, Malformed };

class InputError : public std::runtime_error {
  public:
    InputError(InputErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    InputErrorKind kind() const { return kind_; }

  private:
    InputErrorKind kind_;
};

using AnyState = std::variant<PureState, DensityMatrix>;

/// Throws InputError(Malformed) for missing fields or shape mismatches.
AnyState state_from_json(const json& doc);
/// Throws InputError(FileNotFound) or InputError(Parse) besides the above.
AnyState load_state(const std::filesystem::path& path);
AnyState parse_state(const std::string& text);

json to_json(const PureState& state);
json to_json(const DensityMatrix& rho);
std::string dump(const json& doc);  // two-space indent, trailing newline

json complex_json(cplx z);
json vector_json(const Vec& v);
json matrix_json(const Mat& m);
json number_json(double x);
std::string to_string(LogBase base);

json to_json(const DecompositionTree& tree);
json to_json(const TreeReport& report);
json to_json(const MembershipReport& report);
json to_json(const PureMeasureResult& result, bool include_tree = false);
json to_json(const StandardForm3Q& sf, const SubsystemLayout& layout);
json to_json(const ThreeQubitClass& cls, const SubsystemLayout& layout);
json to_json(const RoofResult& result);
json to_json(const RelativeEntropyEstimate& estimate);

}  // namespace qcompact
