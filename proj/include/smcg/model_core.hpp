#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace smcg {

using Vector = std::vector<double>;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite objective value or gradient.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Iterative scalar solve failed to converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// 2x2 model matrix is not positive definite.
class IndefiniteModelError : public Error {
 public:
  using Error::Error;
};

/// g and s are (numerically) collinear, so the Euclidean-norm metric E is singular.
class CollinearityError : public Error {
 public:
  using Error::Error;
};

class LineSearchError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class UnsupportedHardCase : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Objective evaluation interface
// ---------------------------------------------------------------------------

/// Unevaluated sum hi + lo carrying roughly twice the precision of a double.
struct ExtendedValue {
  double hi = 0.0;
  double lo = 0.0;
};

/// Evaluation interface for f and its gradient.
///
/// Implementations must be re-entrant: const methods, no shared mutable
/// state, so that several solver runs may evaluate one probe concurrently.
class ObjectiveProbe {
 public:
  virtual ~ObjectiveProbe() = default;

  virtual std::size_t dim() const = 0;
  virtual std::string name() const = 0;
  virtual double value(std::span<const double> x) const = 0;
  virtual void gradient(std::span<const double> x, std::span<double> g) const = 0;

  /// Higher-precision value used by finite-difference validation. Sum-of-terms
  /// problems override this with a compensated accumulation so that terms
  /// untouched by a coordinate perturbation cancel exactly.
  virtual ExtendedValue value_extended(std::span<const double> x) const { return {value(x), 0.0}; }

  Vector eval_grad(std::span<const double> x) const;
};

/// Probe assembled from two callables. Mostly useful in tests and examples.
class FunctionProbe final : public ObjectiveProbe {
 public:
  using ValueFn = std::function<double(std::span<const double>)>;
  using GradFn = std::function<void(std::span<const double>, std::span<double>)>;

  FunctionProbe(std::string name, std::size_t dim, ValueFn f, GradFn g);

  std::size_t dim() const override { return dim_; }
  std::string name() const override { return name_; }
  double value(std::span<const double> x) const override { return f_(x); }
  void gradient(std::span<const double> x, std::span<double> g) const override { g_(x, g); }

 private:
  std::string name_;
  std::size_t dim_;
  ValueFn f_;
  GradFn g_;
};

/// Largest per-coordinate discrepancy between the analytic gradient and a
/// central difference, |fd_i - g_i| / max(1, |g_i|). The step on coordinate i
/// is h * max(1, |x_i|).
double finite_difference_check(const ObjectiveProbe& probe, std::span<const double> x, double h);

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

enum class Variant { PR1, PR2 };

std::string_view to_string(Variant v);
Variant variant_from_string(std::string_view s);

struct SolverParams {
  double eps = 1e-6;
  double delta = 0.0005;
  double sigma = 0.9999;
  double lambda_min = 1e-30;
  double lambda_max = 1e30;
  double gamma = 1e-5;
  double xi1 = 1e-7;
  double xi2 = 1.25e4;
  double xi3 = 1e-5;
  double xi4 = 1e-9;
  double xi5 = 1e-11;
  double c1_quad = 1e-4;
  double c2_quad = 0.080;
  int p = 3;
  long max_iter = 200000;
  int max_restart = 11;
  int min_quad = 3;
  Variant variant = Variant::PR1;
  // Euclidean-norm sigma interpolation divides by ||s||^(p/2); set to use ||s||^p.
  bool euclid_sigma_full_power = false;
};

/// Throws ConfigError when an invariant of SolverParams is violated.
void validate(const SolverParams& params);

/// JSON object text, one key per field, in declaration order.
std::string to_config_text(const SolverParams& params);

/// Applies the keys present in `text` on top of `base`. Unknown keys, wrong
/// value types and invalid resulting parameters raise ConfigError.
SolverParams apply_config(const SolverParams& base, std::string_view text);

SolverParams load_config_file(const SolverParams& base, const std::string& path);

// ---------------------------------------------------------------------------
// Solver state
// ---------------------------------------------------------------------------

/// Previous step s = x_k - x_{k-1} and gradient change y = g_k - g_{k-1}.
struct PairData {
  Vector s;
  Vector y;
  double sty = 0.0;
  double ss = 0.0;
  double yy = 0.0;

  static PairData make(Vector s, Vector y);
};

enum class DirectionKind { PregHessNorm, PregEuclidNorm, Quad, HS, NegGrad };
inline constexpr std::size_t kDirectionKindCount = 5;

std::string_view to_string(DirectionKind kind);

struct SolverState {
  std::size_t k = 0;
  Vector x;
  Vector g;
  double f = 0.0;
  Vector d;
  std::optional<PairData> pair;
  double C = 0.0;
  double Q = 1.0;
  double t_prev = 0.0;
  bool t_prev_valid = false;
  int iter_restart = 0;
  int iter_quad = 0;
  int isnotgra = 0;
  long numgrad = 0;            // cumulative negative-gradient directions
  long numgrad_successive = 0; // current run of consecutive negative-gradient directions
  DirectionKind dir_kind = DirectionKind::NegGrad;
};

// Dense vector kernels shared across modules.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);
bool all_finite(std::span<const double> a);

}  // namespace smcg
