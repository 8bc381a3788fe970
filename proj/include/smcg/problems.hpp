#pragma once

// Native test problems with analytic gradients.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smcg/model_core.hpp"

namespace smcg {

struct ProblemSpec {
  std::string name;
  std::size_t default_dim = 0;
  bool scalable = false;
  std::size_t min_dim = 1;
  std::size_t dim_multiple = 1;
  std::string source;            // where the definition comes from
  std::optional<double> f_star;   // known optimal value, when there is one
  std::vector<std::string> tags;  // "illconditioned", "convex", "nonconvex"
  bool table1 = false;            // one of the ill-conditioned reference problems
  std::function<std::unique_ptr<ObjectiveProbe>(std::size_t)> make;
  std::function<Vector(std::size_t)> x0;

  /// Throws DomainError when `n` is not an admissible dimension.
  std::size_t check_dim(std::size_t n) const;
};

const std::vector<ProblemSpec>& registry();

/// Case-insensitive lookup; nullptr when unknown.
const ProblemSpec* find_problem(std::string_view name);

}  // namespace smcg
