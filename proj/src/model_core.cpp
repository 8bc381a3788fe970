#include "smcg/model_core.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace smcg {

Vector ObjectiveProbe::eval_grad(std::span<const double> x) const {
  Vector g(dim());
  gradient(x, g);
  return g;
}

FunctionProbe::FunctionProbe(std::string name, std::size_t dim, ValueFn f, GradFn g)
    : name_(std::move(name)), dim_(dim), f_(std::move(f)), g_(std::move(g)) {
  if (dim_ == 0) throw DomainError("FunctionProbe: dimension must be positive");
}

double finite_difference_check(const ObjectiveProbe& probe, std::span<const double> x, double h) {
  if (!(h > 0.0)) throw DomainError("finite_difference_check: step must be positive");
  if (x.size() != probe.dim()) throw DomainError("finite_difference_check: dimension mismatch");

  const double f0 = probe.value(x);
  const Vector g = probe.eval_grad(x);
  if (!std::isfinite(f0) || !all_finite(g)) {
    throw EvaluationError("finite_difference_check: non-finite evaluation for " + probe.name());
  }

  Vector xt(x.begin(), x.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < xt.size(); ++i) {
    const double xi = xt[i];
    const double hi = h * std::max(1.0, std::abs(xi));
    const double xp = xi + hi;
    const double xm = xi - hi;
    xt[i] = xp;
    const ExtendedValue fp = probe.value_extended(xt);
    xt[i] = xm;
    const ExtendedValue fm = probe.value_extended(xt);
    xt[i] = xi;
    const double diff = (fp.hi - fm.hi) + (fp.lo - fm.lo);
    const double fd = diff / (xp - xm);
    if (!std::isfinite(fd)) {
      throw EvaluationError("finite_difference_check: non-finite difference for " + probe.name());
    }
    worst = std::max(worst, std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i])));
  }
  return worst;
}

std::string_view to_string(Variant v) { return v == Variant::PR1 ? "pr1" : "pr2"; }

Variant variant_from_string(std::string_view s) {
  if (s == "pr1" || s == "PR1") return Variant::PR1;
  if (s == "pr2" || s == "PR2") return Variant::PR2;
  throw ConfigError("unknown variant '" + std::string(s) + "' (expected pr1 or pr2)");
}

PairData PairData::make(Vector s, Vector y) {
  PairData pair;
  pair.sty = dot(s, y);
  pair.ss = dot(s, s);
  pair.yy = dot(y, y);
  pair.s = std::move(s);
  pair.y = std::move(y);
  return pair;
}

std::string_view to_string(DirectionKind kind) {
  switch (kind) {
    case DirectionKind::PregHessNorm: return "preg_hessnorm";
    case DirectionKind::PregEuclidNorm: return "preg_euclidnorm";
    case DirectionKind::Quad: return "quad";
    case DirectionKind::HS: return "hs";
    case DirectionKind::NegGrad: return "neggrad";
  }
  return "unknown";
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(std::span<const double> a) {
  return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace smcg
