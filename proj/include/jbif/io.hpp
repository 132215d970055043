#pragma once

#include <string>

#include "json.hpp"

#include "jbif/continuation.hpp"
#include "jbif/geometry.hpp"
#include "jbif/linearization.hpp"

namespace jbif {

using Json = nlohmann::ordered_json;

Json linearization_to_json(const LinearizationTable& table, const SignReport* report = nullptr);

Json fold_to_json(const FoldRecord& fold);

/// {spec: {alpha, beta, q, N, M}, k, direction, termination, points: [...], folds: [...]}
Json branch_to_json(const Branch& branch, const ProblemSpec& spec);

/// One row per accepted point: s, lambda, u_at_minus1, u_at_plus1, sigma_min, crossings, critical_points.
std::string branch_to_csv(const Branch& branch);

Json sphere_to_json(const SphereContext& ctx, int kmax, const std::optional<Rational>& q);

/// Canonical text form used for files and byte-level comparisons.
std::string dump(const Json& j);

}  // namespace jbif
