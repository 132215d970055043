#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace jbif {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the acceptance criteria. Results of the fold searches are cached so that
/// the invariant and refinement checks reuse the same branches.
class Verifier {
 public:
  explicit Verifier(std::uint64_t seed = 20240917);
  ~Verifier();
  Verifier(const Verifier&) = delete;
  Verifier& operator=(const Verifier&) = delete;

  CriterionResult orthogonality_and_quadrature();
  CriterionResult endpoint_formulas();
  CriterionResult linearization_signs();
  CriterionResult quartic();
  CriterionResult branch_slope();
  CriterionResult trivial_kernel();
  CriterionResult degenerate_solutions();
  CriterionResult branch_invariants();
  CriterionResult hygiene();

  /// Criterion ids for a suite name; throws invalid-config for unknown names.
  static std::vector<int> suite(std::string_view name);
  static const std::vector<std::string>& suite_names();

  CriterionResult run(int id);
  std::vector<CriterionResult> run_suite(std::string_view name);

 private:
  struct Cache;
  std::uint64_t seed_;
  std::unique_ptr<Cache> cache_;
};

/// "[PASS] 3 linearization signs (0.41 s): detail"
std::string format_result(const CriterionResult& r);

}  // namespace jbif
