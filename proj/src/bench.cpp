#include "smcg/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "smcg/baselines.hpp"
#include "smcg/problems.hpp"

namespace smcg {

namespace {

constexpr const char* kRecordHeader = "problem,n,method,status,iters,nf,ng,time_s,final_f,final_gnorm";
constexpr const char* kProfileHeader = "tau,solver,rho";

std::string lower(std::string_view s) {
  std::string r(s);
  for (char& c : r) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return r;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

long parse_long(const std::string& s) {
  long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw DomainError("bad integer field '" + s + "'");
  return v;
}

double metric_value(const RunRecord& r, ProfileMetric m) {
  switch (m) {
    case ProfileMetric::Iters: return static_cast<double>(r.iters);
    case ProfileMetric::NF: return static_cast<double>(r.n_f);
    case ProfileMetric::NG: return static_cast<double>(r.n_g);
    case ProfileMetric::Time: return r.time_s;
  }
  return 0.0;
}

using Json = nlohmann::ordered_json;

Json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double read_number(const Json& j) {
  if (j.is_string()) return parse_double(j.get<std::string>());
  return j.get<double>();
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

double parse_double(std::string_view s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw DomainError("bad numeric field '" + std::string(s) + "'");
  return v;
}

MethodRequest parse_method(std::string_view text, const SolverParams& base) {
  const std::string t = lower(text);
  MethodRequest m;
  m.params = base;
  if (t.rfind("smcg_", 0) == 0) {
    m.smcg = true;
    std::string rest = t.substr(5);
    const auto us = rest.find('_');
    std::string var = rest.substr(0, us);
    if (us != std::string::npos) {
      const std::string ps = rest.substr(us + 1);
      if (ps == "p3") m.params.p = 3;
      else if (ps == "p4") m.params.p = 4;
      else throw ConfigError("unknown method '" + std::string(text) + "'");
    }
    if (var == "pr1") m.params.variant = Variant::PR1;
    else if (var == "pr2") m.params.variant = Variant::PR2;
    else throw ConfigError("unknown method '" + std::string(text) + "'");
    validate(m.params);
    m.name = method_name(m.params);
    return m;
  }
  try {
    m.baseline = static_cast<int>(beta_kind_from_string(t));
  } catch (const ConfigError&) {
    throw ConfigError("unknown method '" + std::string(text) + "'");
  }
  m.name = t;
  return m;
}

std::vector<ProblemRequest> parse_problems(const std::vector<std::string>& items) {
  std::vector<ProblemRequest> out;
  for (const auto& item : items) {
    if (lower(item) == "all") {
      for (const auto& s : registry()) out.push_back({s.name, s.default_dim});
      continue;
    }
    const auto colon = item.find(':');
    const std::string name = item.substr(0, colon);
    const ProblemSpec* spec = find_problem(name);
    if (spec == nullptr) throw ConfigError("unknown problem '" + name + "'");
    std::size_t dim = spec->default_dim;
    if (colon != std::string::npos) {
      try {
        const long d = parse_long(item.substr(colon + 1));
        if (d <= 0) throw DomainError("dimension must be positive");
        dim = spec->check_dim(static_cast<std::size_t>(d));
      } catch (const DomainError& e) {
        throw ConfigError("bad problem request '" + item + "': " + e.what());
      }
    }
    out.push_back({spec->name, dim});
  }
  return out;
}

RunOutput run_method(const MethodRequest& method, const ProblemRequest& problem, bool trace) {
  const ProblemSpec* spec = find_problem(problem.name);
  if (spec == nullptr) throw ConfigError("unknown problem '" + problem.name + "'");
  const auto probe = spec->make(problem.dim);
  const Vector x0 = spec->x0(problem.dim);
  RunOptions opts;
  opts.trace = trace;
  opts.problem = spec->name;
  opts.method = method.name;
  if (method.smcg) return run(*probe, x0, method.params, opts);
  return run_baseline(*probe, x0, static_cast<BetaKind>(method.baseline), method.params, opts);
}

std::vector<SuiteRun> run_suite(const SuiteConfig& config) {
  validate(config.params);
  if (config.methods.empty()) throw ConfigError("no methods requested");
  if (config.problems.empty()) throw ConfigError("no problems requested");
  std::vector<MethodRequest> methods;
  for (const auto& m : config.methods) methods.push_back(parse_method(m, config.params));
  const std::vector<ProblemRequest> problems = parse_problems(config.problems);

  const std::size_t total = problems.size() * methods.size();
  std::vector<SuiteRun> rows(total);
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= total) return;
      const ProblemRequest& pr = problems[idx / methods.size()];
      const MethodRequest& mr = methods[idx % methods.size()];
      SuiteRun& row = rows[idx];
      try {
        RunOutput out = run_method(mr, pr, config.trace);
        row.record = std::move(out.record);
        row.trace = std::move(out.trace);
      } catch (const Error&) {
        row.record = RunRecord{};
        row.record.problem = pr.name;
        row.record.n = pr.dim;
        row.record.method = mr.name;
        row.record.status = RunStatus::EvalFail;
        row.record.final_f = std::numeric_limits<double>::quiet_NaN();
        row.record.final_gnorm_inf = std::numeric_limits<double>::quiet_NaN();
      }
    }
  };

  unsigned jobs = config.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.jobs;
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, total));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rows;
}

std::string_view to_string(ProfileMetric m) {
  switch (m) {
    case ProfileMetric::Iters: return "iters";
    case ProfileMetric::NF: return "nf";
    case ProfileMetric::NG: return "ng";
    case ProfileMetric::Time: return "time";
  }
  return "unknown";
}

ProfileMetric profile_metric_from_string(std::string_view s) {
  const std::string t = lower(s);
  if (t == "iters") return ProfileMetric::Iters;
  if (t == "nf") return ProfileMetric::NF;
  if (t == "ng") return ProfileMetric::NG;
  if (t == "time") return ProfileMetric::Time;
  throw ConfigError("unknown metric '" + std::string(s) + "' (expected iters, nf, ng or time)");
}

ProfileTable performance_profile(const std::vector<RunRecord>& records, ProfileMetric metric) {
  std::set<std::string> solver_set;
  std::vector<std::string> problems;
  std::map<std::string, std::map<std::string, double>> cost;  // problem -> solver -> cost
  const double inf = std::numeric_limits<double>::infinity();
  // count metrics are floored at one unit, time at one microsecond
  const double floor_cost = metric == ProfileMetric::Time ? 1e-6 : 1.0;

  for (const auto& r : records) {
    solver_set.insert(r.method);
    const std::string key = r.problem + ":" + std::to_string(r.n);
    if (!cost.count(key)) problems.push_back(key);
    const double c = r.status == RunStatus::Converged ? std::max(metric_value(r, metric), floor_cost) : inf;
    auto& slot = cost[key];
    if (slot.count(r.method)) throw DomainError("performance_profile: duplicate record for " + key + "/" + r.method);
    slot[r.method] = c;
  }
  if (solver_set.size() < 2) throw DomainError("performance_profile: need at least two solvers");
  if (problems.empty()) throw DomainError("performance_profile: no problems");

  ProfileTable t;
  t.metric = metric;
  t.solvers.assign(solver_set.begin(), solver_set.end());
  t.n_problems = problems.size();

  std::map<std::string, std::vector<double>> ratios;
  std::set<double> grid{1.0};
  for (const auto& p : problems) {
    const auto& row = cost[p];
    double best = inf;
    for (const auto& s : t.solvers) {
      const auto it = row.find(s);
      if (it != row.end()) best = std::min(best, it->second);
    }
    for (const auto& s : t.solvers) {
      const auto it = row.find(s);
      const double c = it == row.end() ? inf : it->second;
      const double ratio = std::isfinite(best) && std::isfinite(c) ? c / best : inf;
      ratios[s].push_back(ratio);
      if (std::isfinite(ratio)) grid.insert(ratio);
    }
  }
  t.tau_grid.assign(grid.begin(), grid.end());
  for (const auto& s : t.solvers) {
    std::vector<double> rs = ratios[s];
    std::sort(rs.begin(), rs.end());
    std::vector<double> curve;
    curve.reserve(t.tau_grid.size());
    for (double tau : t.tau_grid) {
      const auto cnt = std::upper_bound(rs.begin(), rs.end(), tau) - rs.begin();
      curve.push_back(static_cast<double>(cnt) / static_cast<double>(problems.size()));
    }
    t.rho[s] = std::move(curve);
  }
  return t;
}

void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << kRecordHeader << '\n';
  for (const auto& r : records) {
    if (r.problem.find(',') != std::string::npos || r.method.find(',') != std::string::npos) {
      throw DomainError("record names may not contain commas");
    }
    out << r.problem << ',' << r.n << ',' << r.method << ',' << to_string(r.status) << ',' << r.iters << ','
        << r.n_f << ',' << r.n_g << ',' << format_double(r.time_s) << ',' << format_double(r.final_f) << ','
        << format_double(r.final_gnorm_inf) << '\n';
  }
}

std::vector<RunRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DomainError("records csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordHeader) throw DomainError("records csv: unexpected header '" + line + "'");
  std::vector<RunRecord> out;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split(line, ',');
    if (f.size() != 10) throw DomainError("records csv: expected 10 fields in '" + line + "'");
    RunRecord r;
    r.problem = f[0];
    r.n = static_cast<std::size_t>(parse_long(f[1]));
    r.method = f[2];
    r.status = run_status_from_string(f[3]);
    r.iters = parse_long(f[4]);
    r.n_f = parse_long(f[5]);
    r.n_g = parse_long(f[6]);
    r.time_s = parse_double(f[7]);
    r.final_f = parse_double(f[8]);
    r.final_gnorm_inf = parse_double(f[9]);
    out.push_back(std::move(r));
  }
  return out;
}

void write_records_json(std::ostream& out, const std::vector<RunRecord>& records) {
  Json arr = Json::array();
  for (const auto& r : records) {
    Json j;
    j["problem"] = r.problem;
    j["n"] = r.n;
    j["method"] = r.method;
    j["status"] = std::string(to_string(r.status));
    j["iters"] = r.iters;
    j["nf"] = r.n_f;
    j["ng"] = r.n_g;
    j["time_s"] = number_or_string(r.time_s);
    j["final_f"] = number_or_string(r.final_f);
    j["final_gnorm"] = number_or_string(r.final_gnorm_inf);
    Json h;
    for (std::size_t k = 0; k < kDirectionKindCount; ++k) {
      h[std::string(to_string(static_cast<DirectionKind>(k)))] = r.dir_kind_histogram[k];
    }
    j["dir_kind_histogram"] = h;
    j["fallbacks"] = r.fallbacks;
    j["max_Q"] = number_or_string(r.max_Q);
    arr.push_back(j);
  }
  out << arr.dump(2) << '\n';
}

std::vector<RunRecord> read_records_json(std::istream& in) {
  Json arr;
  try {
    arr = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DomainError(std::string("records json: ") + e.what());
  }
  if (!arr.is_array()) throw DomainError("records json: expected an array");
  std::vector<RunRecord> out;
  for (const auto& j : arr) {
    RunRecord r;
    r.problem = j.at("problem").get<std::string>();
    r.n = j.at("n").get<std::size_t>();
    r.method = j.at("method").get<std::string>();
    r.status = run_status_from_string(j.at("status").get<std::string>());
    r.iters = j.at("iters").get<long>();
    r.n_f = j.at("nf").get<long>();
    r.n_g = j.at("ng").get<long>();
    r.time_s = read_number(j.at("time_s"));
    r.final_f = read_number(j.at("final_f"));
    r.final_gnorm_inf = read_number(j.at("final_gnorm"));
    if (j.contains("dir_kind_histogram")) {
      for (std::size_t k = 0; k < kDirectionKindCount; ++k) {
        const std::string key(to_string(static_cast<DirectionKind>(k)));
        if (j["dir_kind_histogram"].contains(key)) r.dir_kind_histogram[k] = j["dir_kind_histogram"][key].get<long>();
      }
    }
    if (j.contains("fallbacks")) r.fallbacks = j["fallbacks"].get<long>();
    if (j.contains("max_Q")) r.max_Q = read_number(j["max_Q"]);
    out.push_back(std::move(r));
  }
  return out;
}

void write_profile_csv(std::ostream& out, const ProfileTable& t) {
  out << kProfileHeader << '\n';
  for (std::size_t i = 0; i < t.tau_grid.size(); ++i) {
    for (const auto& s : t.solvers) {
      out << format_double(t.tau_grid[i]) << ',' << s << ',' << format_double(t.rho.at(s)[i]) << '\n';
    }
  }
}

ProfileTable read_profile_csv(std::istream& in, ProfileMetric metric) {
  std::string line;
  if (!std::getline(in, line)) throw DomainError("profile csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kProfileHeader) throw DomainError("profile csv: unexpected header '" + line + "'");
  ProfileTable t;
  t.metric = metric;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split(line, ',');
    if (f.size() != 3) throw DomainError("profile csv: expected 3 fields in '" + line + "'");
    const double tau = parse_double(f[0]);
    if (t.tau_grid.empty() || t.tau_grid.back() != tau) t.tau_grid.push_back(tau);
    if (seen.insert(f[1]).second) t.solvers.push_back(f[1]);
    t.rho[f[1]].push_back(parse_double(f[2]));
  }
  return t;
}

void write_profile_json(std::ostream& out, const ProfileTable& t) {
  Json j;
  j["metric"] = std::string(to_string(t.metric));
  j["n_problems"] = t.n_problems;
  j["tau"] = t.tau_grid;
  j["solvers"] = t.solvers;
  Json rho;
  for (const auto& s : t.solvers) rho[s] = t.rho.at(s);
  j["rho"] = rho;
  out << j.dump(2) << '\n';
}

void write_trace_csv(std::ostream& out, const std::string& problem, const std::string& method,
                     const std::vector<TraceRow>& trace) {
  for (const auto& r : trace) {
    out << problem << ',' << method << ',' << r.k << ',' << format_double(r.f) << ',' << format_double(r.gnorm_inf)
        << ',' << format_double(r.alpha) << ',' << (r.has_step ? to_string(r.kind) : std::string_view("end")) << ','
        << format_double(r.C) << ',' << format_double(r.Q) << ',' << format_double(r.gtd) << ','
        << format_double(r.d_norm) << '\n';
  }
}

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot open '" + path + "' for writing");
  return out;
}

void finish_out(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw DomainError("write failed for '" + path + "'");
}

}  // namespace

void save_records(const std::string& path, const std::vector<RunRecord>& records) {
  auto out = open_out(path);
  if (ends_with(path, ".json")) write_records_json(out, records);
  else write_records_csv(out, records);
  finish_out(out, path);
}

std::vector<RunRecord> load_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open '" + path + "'");
  try {
    return ends_with(path, ".json") ? read_records_json(in) : read_records_csv(in);
  } catch (const DomainError& e) {
    throw DomainError(path + ": " + e.what());
  }
}

void save_profile(const std::string& path, const ProfileTable& table) {
  auto out = open_out(path);
  if (ends_with(path, ".json")) write_profile_json(out, table);
  else write_profile_csv(out, table);
  finish_out(out, path);
}

bool same_csv_fields(const RunRecord& a, const RunRecord& b) {
  auto same = [](double x, double y) { return (std::isnan(x) && std::isnan(y)) || x == y; };
  return a.problem == b.problem && a.n == b.n && a.method == b.method && a.status == b.status &&
         a.iters == b.iters && a.n_f == b.n_f && a.n_g == b.n_g && same(a.time_s, b.time_s) &&
         same(a.final_f, b.final_f) && same(a.final_gnorm_inf, b.final_gnorm_inf);
}

}  // namespace smcg
