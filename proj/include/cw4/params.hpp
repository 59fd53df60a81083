#pragma once

#include <array>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cw4/combinatorics.hpp"

namespace cw4 {

// Full variable assignment. Only the y <-> z canonical keys (j <= k) are stored;
// mirrored keys resolve to them.
struct ParameterSet {
  int q = 5;
  double kappa = 0.0;
  double b = 0.0;
  double btilde = 0.0;
  std::array<double, kCanonicalSize> alpha{};
  std::array<std::array<double, kMaxSlots>, kCanonicalSize> g{};  // slot l at g[..][l-1]

  double alpha_of(const TripleIndex& t) const { return alpha[canonical_index(t)]; }
  double& alpha_of(const TripleIndex& t) { return alpha[canonical_index(t)]; }
  double g_of(const TripleIndex& t, int slot) const { return g[canonical_index(t)][slot - 1]; }
  double& g_of(const TripleIndex& t, int slot) { return g[canonical_index(t)][slot - 1]; }

  bool operator==(const ParameterSet&) const = default;
};

// Parameters resolved over all 45 triples of S8 (indexed by s8_index).
struct ExpandedParams {
  int q = 5;
  double kappa = 0.0;
  double b = 0.0;
  double btilde = 0.0;
  std::array<double, kS8Size> alpha{};
  std::array<std::array<double, kMaxSlots>, kS8Size> g{};

  double alpha_of(const TripleIndex& t) const { return alpha[s8_index(t)]; }
  const std::array<double, kMaxSlots>& g_of(const TripleIndex& t) const { return g[s8_index(t)]; }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  // 0 when the error is not tied to a line (e.g. a missing key).
  int line() const { return line_; }

 private:
  int line_;
};

ParameterSet parse_parameters(std::string_view text);
std::string serialize_parameters(const ParameterSet& p);

ParameterSet read_parameter_file(const std::filesystem::path& path);
// `header` lines are written as '#' comments before the body.
void write_parameter_file(const std::filesystem::path& path, const ParameterSet& p,
                          std::string_view header = {});

ExpandedParams expand(const ParameterSet& p);

// Rescales alpha to total mass 1 over S8 and each component's g-slots to
// satisfy the slot normalisation with its multiplicities.
ParameterSet project_c1_d2(const ParameterSet& p);

}  // namespace cw4
