#pragma once

// Batch command surface behind the seqiso executable.
//
// Exit status: 0 when every verdict passes, 1 on a mathematical failure,
// 2 on usage, parse or schema errors.

#include <ctime>
#include <iostream>
#include <optional>
#include <string>

#include "seqiso/report.hpp"
#include "seqiso/selftest.hpp"

namespace seqiso {

enum class Command { Gen, Check, Extend, Decompose, Selftest };

inline std::optional<Command> parse_command(std::string_view s) {
  if (s == "gen") return Command::Gen;
  if (s == "check") return Command::Check;
  if (s == "extend") return Command::Extend;
  if (s == "decompose") return Command::Decompose;
  if (s == "selftest") return Command::Selftest;
  return std::nullopt;
}

struct RunConfig {
  Command command = Command::Selftest;
  std::string spec_path, map_path, out_path;
  std::uint64_t seed = 0;
  int trials = 200;
  double tol = 1e-9;
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void validate(const RunConfig& rc) {
  if (!(rc.tol > 0.0)) throw UsageError("--tol must be positive");
  if (rc.trials <= 0) throw UsageError("--trials must be positive");
  if (rc.command == Command::Gen && rc.out_path.empty()) throw UsageError("gen requires --out");
  const bool needs_inputs =
      rc.command == Command::Check || rc.command == Command::Extend || rc.command == Command::Decompose;
  if (needs_inputs && (rc.spec_path.empty() || rc.map_path.empty()))
    throw UsageError("this command requires --spec and --map");
}

inline ToleranceConfig tolerances(const RunConfig& rc) {
  ToleranceConfig cfg;
  cfg.eq_tol = rc.tol;
  cfg.trials = rc.trials;
  cfg.seed = rc.seed;
  return cfg;
}

namespace detail {

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void emit(const RunConfig& rc, Json report, std::ostream& out) {
  report["generated_at"] = utc_timestamp();
  if (rc.out_path.empty())
    out << report.dump(2) << '\n';
  else
    write_json_file(rc.out_path, report);
}

// Spec and map files must describe the same source algebra.
inline std::pair<AlgebraSpec, SequentialMapOracle> load_inputs(const RunConfig& rc) {
  const AlgebraSpec spec = parse_spec_file(rc.spec_path);
  auto [map_spec, descriptor] = parse_descriptor_file(rc.map_path);
  if (!(spec == map_spec))
    throw Error(ErrorCode::InvariantError,
                rc.map_path + ": map acts on " + to_string(map_spec) + " but --spec declares " + to_string(spec));
  return {spec, build_map(descriptor, kFileUnitarityTol)};
}

inline bool usage_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::SchemaError:
    case ErrorCode::InvariantError:
    case ErrorCode::InvalidSpec:
    case ErrorCode::DescriptorInvalid:
    case ErrorCode::BadExponent:
      return true;
    default:
      return false;
  }
}

}  // namespace detail

/// Random spec (at most four blocks of size <= 3) with a random sequential
/// isomorphism on it.
inline Json generate_case(std::uint64_t seed) {
  const AlgebraSpec spec = random_spec(derive_seed(seed, 0));
  return Json{{"spec", to_json(spec)}, {"map", to_json(random_sequential_descriptor(spec, derive_seed(seed, 1)))},
              {"seed", seed}};
}

inline int run(const RunConfig& rc, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    validate(rc);
    const ToleranceConfig cfg = tolerances(rc);
    validate(cfg);
    switch (rc.command) {
      case Command::Gen: {
        detail::emit(rc, generate_case(rc.seed), out);
        return kExitPass;
      }
      case Command::Check: {
        const auto [spec, m] = detail::load_inputs(rc);
        const LemmaReport report = lemma_suite(m, cfg);
        detail::emit(rc, Json{{"spec", to_json(spec)}, {"lemmas", to_json(report)}, {"all_pass", report.all_pass()},
                              {"config", to_json(cfg)}},
                     out);
        return report.all_pass() ? kExitPass : kExitFail;
      }
      case Command::Extend: {
        const auto [spec, m] = detail::load_inputs(rc);
        Json report{{"spec", to_json(spec)}, {"config", to_json(cfg)}};
        int status = kExitPass;
        try {
          const LinearExtension ext = extend_to_linear(m, cfg);
          report["status"] = "extended";
          report["diagnostics"] = to_json(ext.diagnostics());
          Json rows = Json::array();
          for (Eigen::Index i = 0; i < ext.matrix().rows(); ++i) {
            Json row = Json::array();
            for (Eigen::Index j = 0; j < ext.matrix().cols(); ++j) row.push_back(ext.matrix()(i, j));
            rows.push_back(std::move(row));
          }
          report["matrix"] = std::move(rows);
        } catch (const NotEIsomorphismError& e) {
          report["status"] = std::string(to_string(e.code()));
          report["message"] = e.what();
          report["diagnostics"] = to_json(e.diagnostics());
          status = kExitFail;
        }
        detail::emit(rc, std::move(report), out);
        return status;
      }
      case Command::Decompose: {
        const auto [spec, m] = detail::load_inputs(rc);
        const DecompositionReport report = decompose(m, cfg);
        Json j = to_json(report);
        j["spec"] = to_json(spec);
        detail::emit(rc, std::move(j), out);
        return report.verdict == Verdict::Decomposed ? kExitPass : kExitFail;
      }
      case Command::Selftest: {
        const std::vector<CriterionResult> results = run_acceptance(rc.seed);
        Json list = Json::array();
        bool all = true;
        for (const auto& r : results) {
          out << format_result(r) << '\n';
          all = all && r.pass;
          list.push_back(Json{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        }
        if (!rc.out_path.empty()) detail::emit(rc, Json{{"criteria", std::move(list)}, {"all_pass", all}, {"seed", rc.seed}}, out);
        return all ? kExitPass : kExitFail;
      }
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return detail::usage_code(e.code()) ? kExitUsage : kExitFail;
  }
  return kExitUsage;
}

}  // namespace seqiso
