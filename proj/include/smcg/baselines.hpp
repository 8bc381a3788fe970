#pragma once

// Classical conjugate-gradient methods d = -g + beta d_prev on the same line search.

#include <span>
#include <string_view>

#include "smcg/solver.hpp"

namespace smcg {

enum class BetaKind { FR, HS, PRP, DY, HZ };

std::string_view to_string(BetaKind kind);
BetaKind beta_kind_from_string(std::string_view s);

/// CG parameter; a vanishing denominator gives 0.
double beta(BetaKind kind, std::span<const double> g_new, std::span<const double> g_old,
            std::span<const double> d_old, std::span<const double> y);

/// Baseline run. Histogram entries for conjugate steps are filed under "hs".
RunOutput run_baseline(const ObjectiveProbe& probe, std::span<const double> x0, BetaKind kind,
                       const SolverParams& params, const RunOptions& opts = {});

}  // namespace smcg
