#include "smcg/problems.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>

namespace smcg {

namespace {

// ---------------------------------------------------------------------------
// Term accumulation: plain double for value(), double-double for value_extended().

struct PlainAcc {
  double sum = 0.0;
  void add(double t) { sum += t; }
};

struct TwoSum {
  double s, e;
};

TwoSum two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double e = (a - (s - bb)) + (b - bb);
  return {s, e};
}

struct DDAcc {
  double hi = 0.0;
  double lo = 0.0;
  void add(double t) {
    const TwoSum r = two_sum(hi, t);
    hi = r.s;
    lo += r.e;
  }
};

template <class Derived>
class TermProblem : public ObjectiveProbe {
 public:
  TermProblem(std::string name, std::size_t n) : n_(n), name_(std::move(name)) {}

  std::size_t dim() const override { return n_; }
  std::string name() const override { return name_; }

  double value(std::span<const double> x) const override {
    check(x.size());
    PlainAcc a;
    self().terms(x, a);
    return a.sum;
  }

  ExtendedValue value_extended(std::span<const double> x) const override {
    check(x.size());
    DDAcc a;
    self().terms(x, a);
    const TwoSum r = two_sum(a.hi, a.lo);
    return {r.s, r.e};
  }

  void gradient(std::span<const double> x, std::span<double> g) const override {
    check(x.size());
    if (g.size() != n_) throw DomainError(name_ + ": gradient buffer has the wrong size");
    std::fill(g.begin(), g.end(), 0.0);
    self().grad(x, g);
  }

 protected:
  std::size_t n_;

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }
  void check(std::size_t m) const {
    if (m != n_) throw DomainError(name_ + ": argument has the wrong dimension");
  }
  std::string name_;
};

// ---------------------------------------------------------------------------

class Sphere final : public TermProblem<Sphere> {
 public:
  explicit Sphere(std::size_t n) : TermProblem("SPHERE", n) {}
  template <class A> void terms(std::span<const double> x, A& a) const {
    for (double v : x) a.add(0.5 * v * v);
  }
  void grad(std::span<const double> x, std::span<double> g) const {
    for (std::size_t i = 0; i < n_; ++i) g[i] = x[i];
  }
};

class DiagQuad final : public TermProblem<DiagQuad> {
 public:
  explicit DiagQuad(std::size_t n) : TermProblem("DIAGQUAD", n) {}
  template <class A> void terms(std::span<const double> x, A& a) const {
    for (std::size_t i = 0; i < n_; ++i) a.add(0.5 * (i + 1.0) * x[i] * x[i]);
  }
  void grad(std::span<const double> x, std::span<double> g) const {
    for (std::size_t i = 0; i < n_; ++i) g[i] = (i + 1.0) * x[i];
  }
};

// Separable pairs 100 (x2 - x1^2)^2 + (1 - x1)^2.
class Rosenbrock final : public TermProblem<Rosenbrock> {
 public:
  explicit Rosenbrock(std::size_t n) : TermProblem("ROSENBROCK", n) {}
  template <class A> void terms(std::span<const double> x, A& a) const {
    for (std::size_t i = 0; i + 1 < n_; i += 2) {
      const double t = x[i + 1] - x[i] * x[i];
      const double u = 1.0 - x[i];
      a.add(100.0 * t * t);
      a.add(u * u);
    }
  }
  void grad(std::span<const double> x, std::span<double> g) const {
    for (std::size_t i = 0; i + 1 < n_; i += 2) {
      const double t = x[i + 1] - x[i] * x[i];
      g[i] = -400.0 * x[i] * t - 2.0 * (1.0 - x[i]);
      g[i + 1] = 200.0 * t;
    }
  }
};

// (x1 - 1)^2 + sum_{i>=2} 100 (x_i - x_{i-1}^2)^2
class Extrosnb final : public TermProblem<Extrosnb> {
 public:
  explicit Extrosnb(std::size_t n) : TermProblem("EXTROSNB", n) {}
  template <class A> void terms(std::span<const double> x, A& a) const {
    a.add((x[0] - 1.0) * (x[0] - 1.0));
    for (std::size_t i = 1; i < n_; ++i) {
      const double t = x[i] - x[i - 1] * x[i - 1];
      a.add(100.0 * t * t);
    }
  }
  void grad(std::span<const double> x, std::span<double> g) const {
    g[0] = 2.0 * (x[0] - 1.0);
    for (std::size_t i = 1; i < n_; ++i) {
      const double t = x[i] - x[i - 1] * x[i - 1];
      g[i] += 200.0 * t;
      g[i - 1] -= 400.0 * t * x[i - 1];
    }
  }
};

class Growthls final : public TermProblem<Growthls> {
 public:
  Growthls() : TermProblem("GROWTHLS", 3) {}
  static constexpr std::array<double, 12> kT{8, 9, 10, 11, 12, 13, 14, 15, 16, 18, 20, 25};
  static constexpr std::array<double, 12> kY{8.0,     8.4305,  9.5294,  10.4627, 12.0,  13.0205,
                                             14.5949, 16.1078, 18.0596, 20.4569, 24.25, 32.9863};

  template <class A> void terms(std::span<const double> x, A& a) const {
    for (std::size_t j = 0; j < kT.size(); ++j) {
      const double r = residual(x, j);
      a.add(r * r);
    }
  }
  void grad(std::span<const double> x, std::span<double> g) const {
    for (std::size_t j = 0; j < kT.size(); ++j) {
      const double L = std::log(kT[j]);
      const double e = std::exp((x[1] + x[2] * L) * L);
      const double r = x[0] * e - kY[j];
      g[0] += 2.0 * r * e;
      g[1] += 2.0 * r * x[0] * e * L;
      g[2] += 2.0 * r * x[0] * e * L * L;
    }
  }

 private:
  static double residual(std::span<const double> x, std::size_t j) {
    const double L = std::log(kT[j]);
    return x[0] * std::exp((x[1] + x[2] * L) * L) - kY[j];
  }
};

class Maratosb final : public TermProblem<Maratosb> {
 public:
  Maratosb() : TermProblem("MARATOSB", 2) {}
  template <class A> void terms(std::span<const double> x, A& a) const {
    const double q = x[0] * x[0] + x[1] * x[1] - 1.0;
    a.add(x[0]);
    a.add(1e6 * q * q);
  }
  void grad(std::span<const double> x, std::span<double> g) const {
    const double q = x[0] * x[0] + x[1] * x[1] - 1.0;
    g[0] = 1.0 + 4e6 * q * x[0];
    g[1] = 4e6 * q * x[1];
  }
};

// sum_i V_i^2 + 4 cos V_i with V_i = x_i + x_j + x_k, j = mod(2i-1, n)+1, k = mod(3i-1, n)+1 (1-based).
class Noncvxu2 final : public TermProblem<Noncvxu2> {
 public:
  explicit Noncvxu2(std::size_t n) : TermProblem("NONCVXU2", n) {}
  template <class A> void terms(std::span<const double> x, A& a) const {
    for (std::size_t i = 1; i <= n_; ++i) {
      const double v = V(x, i);
      a.add(v * v + 4.0 * std::cos(v));
    }
  }
  void grad(std::span<const double> x, std::span<double> g) const {
    for (std::size_t i = 1; i <= n_; ++i) {
      const double v = V(x, i);
      const double dv = 2.0 * v - 4.0 * std::sin(v);
      g[i - 1] += dv;
      g[(2 * i - 1) % n_] += dv;
      g[(3 * i - 1) % n_] += dv;
    }
  }

 private:
  double V(std::span<const double> x, std::size_t i) const {
    return x[i - 1] + x[(2 * i - 1) % n_] + x[(3 * i - 1) % n_];
  }
};

// Least-squares fit of y by an even polynomial sum_k c_k x^(2k).
class Palmer final : public TermProblem<Palmer> {
 public:
  Palmer(std::string name, std::vector<double> xs, std::vector<double> ys, std::size_t ncoef)
      : TermProblem(std::move(name), ncoef), xs_(std::move(xs)), ys_(std::move(ys)) {}

  template <class A> void terms(std::span<const double> c, A& a) const {
    for (std::size_t j = 0; j < xs_.size(); ++j) {
      const double r = residual(c, j);
      a.add(r * r);
    }
  }
  void grad(std::span<const double> c, std::span<double> g) const {
    for (std::size_t j = 0; j < xs_.size(); ++j) {
      const double r = residual(c, j);
      const double x2 = xs_[j] * xs_[j];
      double pw = 1.0;
      for (std::size_t k = 0; k < n_; ++k) {
        g[k] -= 2.0 * r * pw;
        pw *= x2;
      }
    }
  }

 private:
  double residual(std::span<const double> c, std::size_t j) const {
    const double x2 = xs_[j] * xs_[j];
    double p = 0.0;
    for (std::size_t k = n_; k-- > 0;) p = p * x2 + c[k];
    return ys_[j] - p;
  }
  std::vector<double> xs_;
  std::vector<double> ys_;
};

// Symmetric data: abscissae +-a_i (descending |a|) and 0, y values shared by +-a_i.
void mirror(const std::vector<double>& a, const std::vector<double>& y_outer, double y_center,
            std::vector<double>& xs, std::vector<double>& ys) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    xs.push_back(-a[i]);
    ys.push_back(y_outer[i]);
  }
  xs.push_back(0.0);
  ys.push_back(y_center);
  for (std::size_t i = 0; i < a.size(); ++i) {
    xs.push_back(a[i]);
    ys.push_back(y_outer[i]);
  }
}

std::unique_ptr<ObjectiveProbe> make_palmer1(const std::string& name, std::size_t ncoef) {
  const std::vector<double> a{1.788963, 1.745329, 1.658063, 1.570796, 1.483530, 1.396263, 1.308997, 1.218612,
                              1.134464, 1.047198, 0.872665, 0.698132, 0.523599, 0.349066, 0.174533};
  const std::vector<double> y{78.596218, 65.77963, 43.96947, 27.038816, 14.6126, 6.2614,  1.538833, 0.0,
                              1.188045,  4.6841,   16.9321,  33.6988,   52.3664, 70.1630, 83.4221};
  std::vector<double> xs, ys;
  mirror(a, y, 88.3995, xs, ys);
  for (double v : {-1.8762289, -1.8325957, 1.8762289, 1.8325957}) xs.push_back(v);
  for (double v : {108.18086, 92.733676, 108.18086, 92.733676}) ys.push_back(v);
  return std::make_unique<Palmer>(name, xs, ys, ncoef);
}

std::unique_ptr<ObjectiveProbe> make_palmer2c() {
  const std::vector<double> a{1.745329, 1.570796, 1.396263, 1.221730, 1.047198, 0.937187,
                              0.872665, 0.698132, 0.523599, 0.349066, 0.174533};
  const std::vector<double> y{72.676767, 40.149455, 18.8548, 6.4762,  0.8596, 0.0,
                              0.2730,    3.2043,    8.1080,  13.4291, 17.7149};
  std::vector<double> xs, ys;
  mirror(a, y, 19.4529, xs, ys);
  return std::make_unique<Palmer>("PALMER2C", xs, ys, 8);
}

std::unique_ptr<ObjectiveProbe> make_palmer4c() {
  const std::vector<double> a{1.658063, 1.570796, 1.396263, 1.221730, 1.047198, 0.872665,
                              0.741119, 0.698132, 0.523599, 0.349066, 0.174533};
  const std::vector<double> y{67.27625, 52.8537, 30.2718,  14.9888,  5.5675,  0.92603,
                              0.0,      0.085108, 1.867422, 5.014768, 8.263520};
  std::vector<double> xs, ys;
  mirror(a, y, 9.8046208, xs, ys);
  return std::make_unique<Palmer>("PALMER4C", xs, ys, 8);
}

std::unique_ptr<ObjectiveProbe> make_palmer6c() {
  std::vector<double> xs{0.0,      1.570796, 1.396263, 1.221730, 1.047198, 0.872665, 0.785398,
                         0.732789, 0.698132, 0.610865, 0.523599, 0.349066, 0.174533};
  std::vector<double> ys{10.678659, 75.414511, 41.513459, 20.104735, 7.432436, 1.298082, 0.171300,
                         0.0,       0.068203,  0.774499,  2.070002,  5.574556, 9.026378};
  return std::make_unique<Palmer>("PALMER6C", xs, ys, 8);
}

std::unique_ptr<ObjectiveProbe> make_palmer7c() {
  std::vector<double> xs{0.0,      0.139626, 0.261799, 0.436332, 0.565487, 0.512389, 0.610865,
                         0.785398, 0.959931, 1.134464, 1.308997, 1.483530, 1.658063};
  std::vector<double> ys{4.419446, 3.564931,  2.139067,  0.404686,   0.0,        0.035152,  0.146813,
                         2.718058, 9.474417,  26.132221, 80.003015,  163.575908, 342.592463};
  return std::make_unique<Palmer>("PALMER7C", xs, ys, 8);
}

class DixonPrice final : public TermProblem<DixonPrice> {
 public:
  explicit DixonPrice(std::size_t n) : TermProblem("DIXONPRICE", n) {}
  template <class A> void terms(std::span<const double> x, A& a) const {
    a.add((x[0] - 1.0) * (x[0] - 1.0));
    for (std::size_t i = 1; i < n_; ++i) {
      const double t = 2.0 * x[i] * x[i] - x[i - 1];
      a.add((i + 1.0) * t * t);
    }
  }
  void grad(std::span<const double> x, std::span<double> g) const {
    g[0] = 2.0 * (x[0] - 1.0);
    for (std::size_t i = 1; i < n_; ++i) {
      const double w = i + 1.0;
      const double t = 2.0 * x[i] * x[i] - x[i - 1];
      g[i] += 8.0 * w * t * x[i];
      g[i - 1] -= 2.0 * w * t;
    }
  }
};

class Trigonometric final : public TermProblem<Trigonometric> {
 public:
  explicit Trigonometric(std::size_t n) : TermProblem("TRIGON", n) {}
  template <class A> void terms(std::span<const double> x, A& a) const {
    const double c = cos_sum(x);
    for (std::size_t i = 0; i < n_; ++i) {
      const double fi = component(x, c, i);
      a.add(fi * fi);
    }
  }
  void grad(std::span<const double> x, std::span<double> g) const {
    const double c = cos_sum(x);
    double fsum = 0.0;
    for (std::size_t i = 0; i < n_; ++i) fsum += component(x, c, i);
    for (std::size_t j = 0; j < n_; ++j) {
      const double fj = component(x, c, j);
      g[j] = 2.0 * std::sin(x[j]) * fsum + 2.0 * fj * ((j + 1.0) * std::sin(x[j]) - std::cos(x[j]));
    }
  }

 private:
  static double cos_sum(std::span<const double> x) {
    double c = 0.0;
    for (double v : x) c += std::cos(v);
    return c;
  }
  double component(std::span<const double> x, double c, std::size_t i) const {
    return static_cast<double>(n_) - c + (i + 1.0) * (1.0 - std::cos(x[i])) - std::sin(x[i]);
  }
};

class Wood final : public TermProblem<Wood> {
 public:
  Wood() : TermProblem("WOOD", 4) {}
  template <class A> void terms(std::span<const double> x, A& a) const {
    const double t1 = x[1] - x[0] * x[0];
    const double t2 = x[3] - x[2] * x[2];
    a.add(100.0 * t1 * t1);
    a.add((1.0 - x[0]) * (1.0 - x[0]));
    a.add(90.0 * t2 * t2);
    a.add((1.0 - x[2]) * (1.0 - x[2]));
    a.add(10.1 * ((x[1] - 1.0) * (x[1] - 1.0) + (x[3] - 1.0) * (x[3] - 1.0)));
    a.add(19.8 * (x[1] - 1.0) * (x[3] - 1.0));
  }
  void grad(std::span<const double> x, std::span<double> g) const {
    const double t1 = x[1] - x[0] * x[0];
    const double t2 = x[3] - x[2] * x[2];
    g[0] = -400.0 * x[0] * t1 - 2.0 * (1.0 - x[0]);
    g[1] = 200.0 * t1 + 20.2 * (x[1] - 1.0) + 19.8 * (x[3] - 1.0);
    g[2] = -360.0 * x[2] * t2 - 2.0 * (1.0 - x[2]);
    g[3] = 180.0 * t2 + 20.2 * (x[3] - 1.0) + 19.8 * (x[1] - 1.0);
  }
};

class Beale final : public TermProblem<Beale> {
 public:
  Beale() : TermProblem("BEALE", 2) {}
  static constexpr std::array<double, 3> kY{1.5, 2.25, 2.625};
  template <class A> void terms(std::span<const double> x, A& a) const {
    double p = 1.0;
    for (std::size_t i = 0; i < 3; ++i) {
      p *= x[1];
      const double r = kY[i] - x[0] * (1.0 - p);
      a.add(r * r);
    }
  }
  void grad(std::span<const double> x, std::span<double> g) const {
    double p = 1.0;  // x2^i
    double pm = 1.0;  // x2^(i-1)
    for (std::size_t i = 0; i < 3; ++i) {
      pm = p;
      p *= x[1];
      const double r = kY[i] - x[0] * (1.0 - p);
      g[0] += -2.0 * r * (1.0 - p);
      g[1] += 2.0 * r * x[0] * (i + 1.0) * pm;
    }
  }
};

class PowellSingular final : public TermProblem<PowellSingular> {
 public:
  explicit PowellSingular(std::size_t n) : TermProblem("POWELLSG", n) {}
  template <class A> void terms(std::span<const double> x, A& a) const {
    for (std::size_t i = 0; i + 3 < n_; i += 4) {
      const double t1 = x[i] + 10.0 * x[i + 1];
      const double t2 = x[i + 2] - x[i + 3];
      const double t3 = x[i + 1] - 2.0 * x[i + 2];
      const double t4 = x[i] - x[i + 3];
      a.add(t1 * t1);
      a.add(5.0 * t2 * t2);
      a.add(t3 * t3 * t3 * t3);
      a.add(10.0 * t4 * t4 * t4 * t4);
    }
  }
  void grad(std::span<const double> x, std::span<double> g) const {
    for (std::size_t i = 0; i + 3 < n_; i += 4) {
      const double t1 = x[i] + 10.0 * x[i + 1];
      const double t2 = x[i + 2] - x[i + 3];
      const double t3 = x[i + 1] - 2.0 * x[i + 2];
      const double t4 = x[i] - x[i + 3];
      g[i] = 2.0 * t1 + 40.0 * t4 * t4 * t4;
      g[i + 1] = 20.0 * t1 + 4.0 * t3 * t3 * t3;
      g[i + 2] = 10.0 * t2 - 8.0 * t3 * t3 * t3;
      g[i + 3] = -10.0 * t2 - 40.0 * t4 * t4 * t4;
    }
  }
};

class ExtFreudensteinRoth final : public TermProblem<ExtFreudensteinRoth> {
 public:
  explicit ExtFreudensteinRoth(std::size_t n) : TermProblem("EXTFREUROTH", n) {}
  template <class A> void terms(std::span<const double> x, A& a) const {
    for (std::size_t i = 0; i + 1 < n_; i += 2) {
      const double u = x[i];
      const double v = x[i + 1];
      const double f1 = -13.0 + u + ((5.0 - v) * v - 2.0) * v;
      const double f2 = -29.0 + u + ((v + 1.0) * v - 14.0) * v;
      a.add(f1 * f1);
      a.add(f2 * f2);
    }
  }
  void grad(std::span<const double> x, std::span<double> g) const {
    for (std::size_t i = 0; i + 1 < n_; i += 2) {
      const double u = x[i];
      const double v = x[i + 1];
      const double f1 = -13.0 + u + ((5.0 - v) * v - 2.0) * v;
      const double f2 = -29.0 + u + ((v + 1.0) * v - 14.0) * v;
      g[i] = 2.0 * f1 + 2.0 * f2;
      g[i + 1] = 2.0 * f1 * (10.0 * v - 3.0 * v * v - 2.0) + 2.0 * f2 * (3.0 * v * v + 2.0 * v - 14.0);
    }
  }
};

class BroydenTridiagonal final : public TermProblem<BroydenTridiagonal> {
 public:
  explicit BroydenTridiagonal(std::size_t n) : TermProblem("BROYDNTRI", n) {}
  template <class A> void terms(std::span<const double> x, A& a) const {
    for (std::size_t i = 0; i < n_; ++i) {
      const double fi = component(x, i);
      a.add(fi * fi);
    }
  }
  void grad(std::span<const double> x, std::span<double> g) const {
    for (std::size_t i = 0; i < n_; ++i) {
      const double fi = component(x, i);
      g[i] += 2.0 * fi * (3.0 - 4.0 * x[i]);
      if (i > 0) g[i - 1] -= 2.0 * fi;
      if (i + 1 < n_) g[i + 1] -= 4.0 * fi;
    }
  }

 private:
  double component(std::span<const double> x, std::size_t i) const {
    const double xm = i > 0 ? x[i - 1] : 0.0;
    const double xp = i + 1 < n_ ? x[i + 1] : 0.0;
    return (3.0 - 2.0 * x[i]) * x[i] - xm - 2.0 * xp + 1.0;
  }
};

class HelicalValley final : public TermProblem<HelicalValley> {
 public:
  HelicalValley() : TermProblem("HELIX", 3) {}
  template <class A> void terms(std::span<const double> x, A& a) const {
    const double r = std::hypot(x[0], x[1]);
    const double t1 = x[2] - 10.0 * theta(x);
    a.add(100.0 * t1 * t1);
    a.add(100.0 * (r - 1.0) * (r - 1.0));
    a.add(x[2] * x[2]);
  }
  void grad(std::span<const double> x, std::span<double> g) const {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    const double r = std::sqrt(r2);
    const double t1 = x[2] - 10.0 * theta(x);
    const double dth1 = -x[1] / (2.0 * std::numbers::pi * r2);
    const double dth2 = x[0] / (2.0 * std::numbers::pi * r2);
    g[0] = -2000.0 * t1 * dth1 + 200.0 * (r - 1.0) * x[0] / r;
    g[1] = -2000.0 * t1 * dth2 + 200.0 * (r - 1.0) * x[1] / r;
    g[2] = 200.0 * t1 + 2.0 * x[2];
  }

 private:
  static double theta(std::span<const double> x) {
    const double two_pi = 2.0 * std::numbers::pi;
    if (x[0] > 0.0) return std::atan(x[1] / x[0]) / two_pi;
    if (x[0] < 0.0) return std::atan(x[1] / x[0]) / two_pi + 0.5;
    return x[1] >= 0.0 ? 0.25 : -0.25;
  }
};

class Arwhead final : public TermProblem<Arwhead> {
 public:
  explicit Arwhead(std::size_t n) : TermProblem("ARWHEAD", n) {}
  template <class A> void terms(std::span<const double> x, A& a) const {
    const double xn2 = x[n_ - 1] * x[n_ - 1];
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      const double q = x[i] * x[i] + xn2;
      a.add(-4.0 * x[i] + 3.0);
      a.add(q * q);
    }
  }
  void grad(std::span<const double> x, std::span<double> g) const {
    const double xn = x[n_ - 1];
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      const double q = x[i] * x[i] + xn * xn;
      g[i] += -4.0 + 4.0 * q * x[i];
      g[n_ - 1] += 4.0 * q * xn;
    }
  }
};

class Dqdrtic final : public TermProblem<Dqdrtic> {
 public:
  explicit Dqdrtic(std::size_t n) : TermProblem("DQDRTIC", n) {}
  template <class A> void terms(std::span<const double> x, A& a) const {
    for (std::size_t i = 0; i + 2 < n_; ++i) {
      a.add(x[i] * x[i]);
      a.add(100.0 * x[i + 1] * x[i + 1]);
      a.add(100.0 * x[i + 2] * x[i + 2]);
    }
  }
  void grad(std::span<const double> x, std::span<double> g) const {
    for (std::size_t i = 0; i + 2 < n_; ++i) {
      g[i] += 2.0 * x[i];
      g[i + 1] += 200.0 * x[i + 1];
      g[i + 2] += 200.0 * x[i + 2];
    }
  }
};

class Tridia final : public TermProblem<Tridia> {
 public:
  explicit Tridia(std::size_t n) : TermProblem("TRIDIA", n) {}
  template <class A> void terms(std::span<const double> x, A& a) const {
    a.add((x[0] - 1.0) * (x[0] - 1.0));
    for (std::size_t i = 1; i < n_; ++i) {
      const double t = 2.0 * x[i] - x[i - 1];
      a.add((i + 1.0) * t * t);
    }
  }
  void grad(std::span<const double> x, std::span<double> g) const {
    g[0] = 2.0 * (x[0] - 1.0);
    for (std::size_t i = 1; i < n_; ++i) {
      const double w = i + 1.0;
      const double t = 2.0 * x[i] - x[i - 1];
      g[i] += 4.0 * w * t;
      g[i - 1] -= 2.0 * w * t;
    }
  }
};

class Engval1 final : public TermProblem<Engval1> {
 public:
  explicit Engval1(std::size_t n) : TermProblem("ENGVAL1", n) {}
  template <class A> void terms(std::span<const double> x, A& a) const {
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      const double q = x[i] * x[i] + x[i + 1] * x[i + 1];
      a.add(q * q);
      a.add(-4.0 * x[i] + 3.0);
    }
  }
  void grad(std::span<const double> x, std::span<double> g) const {
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      const double q = x[i] * x[i] + x[i + 1] * x[i + 1];
      g[i] += 4.0 * q * x[i] - 4.0;
      g[i + 1] += 4.0 * q * x[i + 1];
    }
  }
};

// 1e-5 sum (x_i - 1)^2 + (sum x_i^2 - 1/4)^2
class Penalty1 final : public TermProblem<Penalty1> {
 public:
  explicit Penalty1(std::size_t n) : TermProblem("PENALTY1", n) {}
  template <class A> void terms(std::span<const double> x, A& a) const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      a.add(1e-5 * (x[i] - 1.0) * (x[i] - 1.0));
      s += x[i] * x[i];
    }
    a.add((s - 0.25) * (s - 0.25));
  }
  void grad(std::span<const double> x, std::span<double> g) const {
    double s = 0.0;
    for (double v : x) s += v * v;
    for (std::size_t i = 0; i < n_; ++i) g[i] = 2e-5 * (x[i] - 1.0) + 4.0 * (s - 0.25) * x[i];
  }

  // The coupling term needs its inner sum carried in extended precision too.
  ExtendedValue value_extended(std::span<const double> x) const override {
    DDAcc a;
    DDAcc s;
    for (std::size_t i = 0; i < n_; ++i) {
      a.add(1e-5 * (x[i] - 1.0) * (x[i] - 1.0));
      const double sq = x[i] * x[i];
      s.add(sq);
      s.add(std::fma(x[i], x[i], -sq));
    }
    s.add(-0.25);
    const double hi = s.hi + s.lo;
    const double lo = s.lo - (hi - s.hi);
    const double p = hi * hi;
    a.add(p);
    a.add(std::fma(hi, hi, -p) + 2.0 * hi * lo);
    const TwoSum r = two_sum(a.hi, a.lo);
    return {r.s, r.e};
  }
};

class Liarwhd final : public TermProblem<Liarwhd> {
 public:
  explicit Liarwhd(std::size_t n) : TermProblem("LIARWHD", n) {}
  template <class A> void terms(std::span<const double> x, A& a) const {
    for (std::size_t i = 0; i < n_; ++i) {
      const double t = x[i] * x[i] - x[0];
      a.add(4.0 * t * t);
      a.add((x[i] - 1.0) * (x[i] - 1.0));
    }
  }
  void grad(std::span<const double> x, std::span<double> g) const {
    for (std::size_t i = 0; i < n_; ++i) {
      const double t = x[i] * x[i] - x[0];
      g[i] += 16.0 * t * x[i] + 2.0 * (x[i] - 1.0);
      g[0] -= 8.0 * t;
    }
  }
};

// ---------------------------------------------------------------------------

Vector constant(std::size_t n, double v) { return Vector(n, v); }

Vector pattern(std::size_t n, std::initializer_list<double> p) {
  Vector x(n);
  const std::vector<double> pv(p);
  for (std::size_t i = 0; i < n; ++i) x[i] = pv[i % pv.size()];
  return x;
}

template <class P>
std::function<std::unique_ptr<ObjectiveProbe>(std::size_t)> scalable() {
  return [](std::size_t n) -> std::unique_ptr<ObjectiveProbe> { return std::make_unique<P>(n); };
}

template <class P>
std::function<std::unique_ptr<ObjectiveProbe>(std::size_t)> fixed() {
  return [](std::size_t) -> std::unique_ptr<ObjectiveProbe> { return std::make_unique<P>(); };
}

std::vector<ProblemSpec> build_registry() {
  std::vector<ProblemSpec> r;
  auto add = [&](ProblemSpec s) { r.push_back(std::move(s)); };
  const std::vector<std::string> convex{"convex"};
  const std::vector<std::string> nonconvex{"nonconvex"};
  const std::vector<std::string> ill{"illconditioned", "nonconvex"};
  const std::vector<std::string> ill_convex{"illconditioned", "convex"};

  ProblemSpec s;

  s = {};
  s.name = "SPHERE"; s.default_dim = 10; s.scalable = true;
  s.source = "f = 1/2 ||x||^2";
  s.f_star = 0.0; s.tags = convex;
  s.make = scalable<Sphere>(); s.x0 = [](std::size_t n) { return constant(n, 1.0); };
  add(s);

  s = {};
  s.name = "DIAGQUAD"; s.default_dim = 1000; s.scalable = true;
  s.source = "f = 1/2 sum i x_i^2";
  s.f_star = 0.0; s.tags = convex;
  s.make = scalable<DiagQuad>(); s.x0 = [](std::size_t n) { return constant(n, 1.0); };
  add(s);

  s = {};
  s.name = "ROSENBROCK"; s.default_dim = 1000; s.scalable = true; s.min_dim = 2; s.dim_multiple = 2;
  s.source = "Extended Rosenbrock, More-Garbow-Hillstrom #21 (CUTEr SROSENBR)";
  s.f_star = 0.0; s.tags = nonconvex;
  s.make = scalable<Rosenbrock>(); s.x0 = [](std::size_t n) { return pattern(n, {-1.2, 1.0}); };
  add(s);

  s = {};
  s.name = "EXTROSNB"; s.default_dim = 1000; s.scalable = true; s.min_dim = 2;
  s.source = "CUTEr EXTROSNB.SIF (nonseparable extended Rosenbrock, Toint 1978 #10)";
  s.f_star = 0.0; s.tags = ill; s.table1 = true;
  s.make = scalable<Extrosnb>(); s.x0 = [](std::size_t n) { return constant(n, -1.0); };
  add(s);

  s = {};
  s.name = "GROWTHLS"; s.default_dim = 3;
  s.source = "CUTEr GROWTHLS.SIF (growth-curve least squares, 12 observations)";
  s.tags = ill; s.table1 = true;
  s.make = fixed<Growthls>(); s.x0 = [](std::size_t) { return Vector{100.0, 0.0, 0.0}; };
  add(s);

  s = {};
  s.name = "MARATOSB"; s.default_dim = 2;
  s.source = "CUTEr MARATOSB.SIF (Maratos penalty, weight 1e6)";
  s.tags = ill; s.table1 = true;
  s.make = fixed<Maratosb>(); s.x0 = [](std::size_t) { return Vector{1.1, 0.1}; };
  add(s);

  s = {};
  s.name = "NONCVXU2"; s.default_dim = 5000; s.scalable = true; s.min_dim = 2;
  s.source = "CUTEr NONCVXU2.SIF";
  s.tags = ill; s.table1 = true;
  s.make = scalable<Noncvxu2>();
  s.x0 = [](std::size_t n) {
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = i + 1.0;
    return x;
  };
  add(s);

  struct PalmerDef {
    const char* name;
    std::size_t ncoef;
    std::unique_ptr<ObjectiveProbe> (*make)();
  };
  const PalmerDef palmers[] = {
      {"PALMER1C", 8, [] { return make_palmer1("PALMER1C", 8); }},
      {"PALMER1D", 7, [] { return make_palmer1("PALMER1D", 7); }},
      {"PALMER2C", 8, make_palmer2c},
      {"PALMER4C", 8, make_palmer4c},
      {"PALMER6C", 8, make_palmer6c},
      {"PALMER7C", 8, make_palmer7c},
  };
  for (const auto& pd : palmers) {
    s = {};
    s.name = pd.name; s.default_dim = pd.ncoef;
    s.source = std::string("CUTEr ") + pd.name + ".SIF (even-polynomial least squares fit)";
    s.tags = ill_convex; s.table1 = true;
    auto mk = pd.make;
    s.make = [mk](std::size_t) { return mk(); };
    s.x0 = [](std::size_t n) { return constant(n, 1.0); };
    add(s);
  }

  s = {};
  s.name = "DIXONPRICE"; s.default_dim = 1000; s.scalable = true; s.min_dim = 2;
  s.source = "Dixon-Price function";
  s.f_star = 0.0; s.tags = nonconvex;
  s.make = scalable<DixonPrice>(); s.x0 = [](std::size_t n) { return constant(n, 1.0); };
  add(s);

  s = {};
  s.name = "TRIGON"; s.default_dim = 100; s.scalable = true;
  s.source = "Trigonometric function, More-Garbow-Hillstrom #26";
  s.f_star = 0.0; s.tags = nonconvex;
  s.make = scalable<Trigonometric>();
  s.x0 = [](std::size_t n) { return constant(n, 1.0 / static_cast<double>(n)); };
  add(s);

  s = {};
  s.name = "WOOD"; s.default_dim = 4;
  s.source = "Wood function, More-Garbow-Hillstrom #14";
  s.f_star = 0.0; s.tags = nonconvex;
  s.make = fixed<Wood>(); s.x0 = [](std::size_t) { return Vector{-3.0, -1.0, -3.0, -1.0}; };
  add(s);

  s = {};
  s.name = "BEALE"; s.default_dim = 2;
  s.source = "Beale function, More-Garbow-Hillstrom #5";
  s.f_star = 0.0; s.tags = nonconvex;
  s.make = fixed<Beale>(); s.x0 = [](std::size_t) { return Vector{1.0, 1.0}; };
  add(s);

  s = {};
  s.name = "POWELLSG"; s.default_dim = 1000; s.scalable = true; s.min_dim = 4; s.dim_multiple = 4;
  s.source = "Extended Powell singular function, More-Garbow-Hillstrom #22";
  s.f_star = 0.0; s.tags = convex;
  s.make = scalable<PowellSingular>(); s.x0 = [](std::size_t n) { return pattern(n, {3.0, -1.0, 0.0, 1.0}); };
  add(s);

  s = {};
  s.name = "EXTFREUROTH"; s.default_dim = 1000; s.scalable = true; s.min_dim = 2; s.dim_multiple = 2;
  s.source = "Extended Freudenstein-Roth, More-Garbow-Hillstrom #2 in separable pairs";
  s.tags = nonconvex;
  s.make = scalable<ExtFreudensteinRoth>(); s.x0 = [](std::size_t n) { return pattern(n, {0.5, -2.0}); };
  add(s);

  s = {};
  s.name = "BROYDNTRI"; s.default_dim = 1000; s.scalable = true;
  s.source = "Broyden tridiagonal function, More-Garbow-Hillstrom #30, least squares form";
  s.f_star = 0.0; s.tags = nonconvex;
  s.make = scalable<BroydenTridiagonal>(); s.x0 = [](std::size_t n) { return constant(n, -1.0); };
  add(s);

  s = {};
  s.name = "HELIX"; s.default_dim = 3;
  s.source = "Helical valley function, More-Garbow-Hillstrom #7";
  s.f_star = 0.0; s.tags = nonconvex;
  s.make = fixed<HelicalValley>(); s.x0 = [](std::size_t) { return Vector{-1.0, 0.0, 0.0}; };
  add(s);

  s = {};
  s.name = "ARWHEAD"; s.default_dim = 1000; s.scalable = true; s.min_dim = 2;
  s.source = "CUTEr ARWHEAD.SIF";
  s.f_star = 0.0; s.tags = nonconvex;
  s.make = scalable<Arwhead>(); s.x0 = [](std::size_t n) { return constant(n, 1.0); };
  add(s);

  s = {};
  s.name = "DQDRTIC"; s.default_dim = 1000; s.scalable = true; s.min_dim = 3;
  s.source = "CUTEr DQDRTIC.SIF";
  s.f_star = 0.0; s.tags = convex;
  s.make = scalable<Dqdrtic>(); s.x0 = [](std::size_t n) { return constant(n, 3.0); };
  add(s);

  s = {};
  s.name = "TRIDIA"; s.default_dim = 1000; s.scalable = true; s.min_dim = 2;
  s.source = "CUTEr TRIDIA.SIF (alpha = 2, beta = gamma = delta = 1)";
  s.f_star = 0.0; s.tags = ill_convex;
  s.make = scalable<Tridia>(); s.x0 = [](std::size_t n) { return constant(n, 1.0); };
  add(s);

  s = {};
  s.name = "ENGVAL1"; s.default_dim = 1000; s.scalable = true; s.min_dim = 2;
  s.source = "CUTEr ENGVAL1.SIF";
  s.tags = convex;
  s.make = scalable<Engval1>(); s.x0 = [](std::size_t n) { return constant(n, 2.0); };
  add(s);

  s = {};
  s.name = "PENALTY1"; s.default_dim = 100; s.scalable = true;
  s.source = "Penalty function I, More-Garbow-Hillstrom #23 (a = 1e-5)";
  s.tags = nonconvex;
  s.make = scalable<Penalty1>();
  s.x0 = [](std::size_t n) {
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = i + 1.0;
    return x;
  };
  add(s);

  s = {};
  s.name = "LIARWHD"; s.default_dim = 1000; s.scalable = true;
  s.source = "CUTEr LIARWHD.SIF";
  s.f_star = 0.0; s.tags = nonconvex;
  s.make = scalable<Liarwhd>(); s.x0 = [](std::size_t n) { return constant(n, 4.0); };
  add(s);

  return r;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(a[i])) != std::toupper(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::size_t ProblemSpec::check_dim(std::size_t n) const {
  if (!scalable) {
    if (n != default_dim) throw DomainError(name + " has fixed dimension " + std::to_string(default_dim));
    return n;
  }
  if (n < min_dim || n % dim_multiple != 0) {
    throw DomainError(name + ": dimension must be >= " + std::to_string(min_dim) + " and a multiple of " +
                      std::to_string(dim_multiple));
  }
  return n;
}

const std::vector<ProblemSpec>& registry() {
  static const std::vector<ProblemSpec> reg = build_registry();
  return reg;
}

const ProblemSpec* find_problem(std::string_view name) {
  for (const auto& s : registry()) {
    if (iequals(s.name, name)) return &s;
  }
  return nullptr;
}

}  // namespace smcg
