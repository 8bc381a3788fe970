#pragma once

// Suite runner, performance profiles and result files.

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "smcg/solver.hpp"

namespace smcg {

struct SuiteConfig {
  std::vector<std::string> methods;   // smcg_pr1, smcg_pr2 (optionally _p3/_p4), fr, hs, prp, dy, hz
  std::vector<std::string> problems;  // registry names, "NAME:dim", or "all"
  SolverParams params;                // p and variant of smcg_* come from the method name when given
  unsigned jobs = 0;                  // 0 = hardware concurrency
  bool trace = false;
};

struct SuiteRun {
  RunRecord record;
  std::vector<TraceRow> trace;  // empty unless SuiteConfig::trace
};

/// Resolved method or problem request; exposed so callers can validate early.
struct MethodRequest {
  std::string name;  // canonical, e.g. smcg_pr1_p3 or hs
  bool smcg = false;
  SolverParams params;
  int baseline = 0;  // BetaKind value when !smcg
};

struct ProblemRequest {
  std::string name;
  std::size_t dim = 0;
};

MethodRequest parse_method(std::string_view text, const SolverParams& base);
std::vector<ProblemRequest> parse_problems(const std::vector<std::string>& items);

/// Runs every (problem, method) pair. Rows are ordered by problem (as
/// requested) then method. Unknown names raise ConfigError before any run.
std::vector<SuiteRun> run_suite(const SuiteConfig& config);

/// Single run of one resolved method.
RunOutput run_method(const MethodRequest& method, const ProblemRequest& problem, bool trace);

enum class ProfileMetric { Iters, NF, NG, Time };

std::string_view to_string(ProfileMetric m);
ProfileMetric profile_metric_from_string(std::string_view s);

struct ProfileTable {
  ProfileMetric metric = ProfileMetric::Iters;
  std::vector<double> tau_grid;
  std::vector<std::string> solvers;
  std::map<std::string, std::vector<double>> rho;  // per solver, aligned with tau_grid
  std::size_t n_problems = 0;
};

/// Dolan-More profile; failed runs cost +inf. Needs at least two solvers.
ProfileTable performance_profile(const std::vector<RunRecord>& records, ProfileMetric metric);

// Result files.
void write_records_csv(std::ostream& out, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_records_csv(std::istream& in);
void write_records_json(std::ostream& out, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_records_json(std::istream& in);
void write_profile_csv(std::ostream& out, const ProfileTable& table);
ProfileTable read_profile_csv(std::istream& in, ProfileMetric metric);
void write_profile_json(std::ostream& out, const ProfileTable& table);
inline constexpr std::string_view kTraceCsvHeader = "problem,method,k,f,gnorm_inf,alpha,kind,C,Q,gtd,d_norm";

/// Trace rows without a header; see kTraceCsvHeader.
void write_trace_csv(std::ostream& out, const std::string& problem, const std::string& method,
                     const std::vector<TraceRow>& trace);

/// Writes to `path`, choosing JSON when it ends in ".json" and CSV otherwise.
void save_records(const std::string& path, const std::vector<RunRecord>& records);
std::vector<RunRecord> load_records(const std::string& path);
void save_profile(const std::string& path, const ProfileTable& table);

/// Fields that appear in the CSV schema compare equal.
bool same_csv_fields(const RunRecord& a, const RunRecord& b);

std::string format_double(double v);
double parse_double(std::string_view s);

}  // namespace smcg
