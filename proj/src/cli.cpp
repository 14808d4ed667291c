#include "gaussmom/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gaussmom/coefficients.hpp"
#include "gaussmom/gaussian_spec.hpp"
#include "gaussmom/operator_engine.hpp"
#include "gaussmom/oracles.hpp"
#include "gaussmom/polynomial.hpp"
#include "gaussmom/stein_expansion.hpp"
#include "gaussmom/symbolic.hpp"

namespace gaussmom::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;

/// Raised for bad input that CLI11 cannot see (file contents, dimensions).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string format_double(double value) {
  std::ostringstream os;
  os << std::setprecision(17) << value;
  return os.str();
}

std::uint64_t term_cap_from_env() {
  const char* text = std::getenv("GM_TERM_CAP");
  if (text == nullptr || *text == '\0') return kDefaultTermCap;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(text, &end, 10);
  if (*end != '\0' || value == 0 || text[0] == '-') throw UsageError("GM_TERM_CAP must be a positive integer");
  return value;
}

struct Inputs {
  MultiIndex n;
  std::optional<ExactGaussianSpec> spec;
  std::optional<Polynomial> g;
};

Polynomial g_or_one(const std::optional<Polynomial>& g, std::size_t dimension) {
  if (g) {
    if (g->dimension() != dimension) throw UsageError("polynomial dimension does not match n");
    return *g;
  }
  return Polynomial::constant(dimension, 1);
}

void require_spec_dimension(const ExactGaussianSpec& spec, std::size_t dimension) {
  if (spec.dimension() != dimension) {
    throw UsageError("spec has dimension " + std::to_string(spec.dimension()) + " but " +
                     std::to_string(dimension) + " was expected");
  }
}

struct EngineResult {
  std::string engine;
  std::optional<Rational> exact;
  double value = 0.0;
  std::optional<double> std_error;
};

const std::vector<std::string>& engine_names() {
  static const std::vector<std::string> names{"expand", "song-lee", "stein-reduce", "pairing", "operator", "mc"};
  return names;
}

EngineResult run_engine(const std::string& engine, const MultiIndex& n, const Polynomial& g,
                        const ExactGaussianSpec& exact_spec, bool exact, const ExpandOptions& expand_options,
                        const McOptions& mc_options) {
  EngineResult result{engine, std::nullopt, 0.0, std::nullopt};
  const GaussianSpec spec = to_double(exact_spec);
  const Polynomial integrand = multiply_by_monomial(g, n);
  if (engine == "mc") {
    const McReport report = mc_estimate(g, n, spec, mc_options);
    result.value = report.estimate;
    result.std_error = report.std_error;
    return result;
  }
  if (engine == "pairing" && !exact_spec.has_zero_mean()) {
    throw UsageError("engine 'pairing' needs a zero-mean spec");
  }
  if (exact) {
    Rational v;
    if (engine == "expand") {
      v = expansion_value(stein_expand(n, expand_options), g, exact_spec);
    } else if (engine == "song-lee") {
      v = gaussian_expectation(integrand, exact_spec);
    } else if (engine == "stein-reduce") {
      v = stein_reduce(integrand, exact_spec);
    } else if (engine == "pairing") {
      v = pairing_expectation(integrand, exact_spec);
    } else {
      v = operator_expectation(integrand, exact_spec);
    }
    result.value = v.get_d();
    result.exact = std::move(v);
    return result;
  }
  if (engine == "expand") {
    result.value = expansion_value(stein_expand(n, expand_options), g, spec);
  } else if (engine == "song-lee") {
    result.value = gaussian_expectation(integrand, spec);
  } else if (engine == "stein-reduce") {
    result.value = stein_reduce(integrand, spec);
  } else if (engine == "pairing") {
    result.value = pairing_expectation(integrand, spec);
  } else {
    result.value = operator_expectation(integrand, spec);
  }
  return result;
}

std::vector<std::string> split_engines(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::size_t start = 0;
    while (start <= item.size()) {
      const std::size_t comma = item.find(',', start);
      const std::string name = item.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (std::find(engine_names().begin(), engine_names().end(), name) == engine_names().end()) {
        throw UsageError("unknown engine '" + name + "'");
      }
      out.push_back(name);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian moment expansions and cross-checks", "gaussmom"};
  app.require_subcommand(1);

  std::string n_text;
  std::string spec_path;
  std::string g_path;
  std::string format = "json";
  bool exact = false;
  std::optional<std::uint64_t> term_cap;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));
  };
  auto add_term_cap = [&](CLI::App* sub) {
    sub->add_option("--term-cap", term_cap, "Maximum raw term count (overrides GM_TERM_CAP)")
        ->check(CLI::PositiveNumber);
  };

  auto* expand = app.add_subcommand("expand", "Expand E[g(X) prod X_i^n_i] into E[d^a g] terms");
  expand->add_option("n", n_text, "Exponents, comma separated (e.g. 1,2)")->required();
  auto* zero_mean_flag = expand->add_flag("--zero-mean", "Drop every term carrying a mean factor");
  auto* uncorrelated_flag = expand->add_flag("--uncorrelated", "Assume C_ij = 0 for i != j");
  zero_mean_flag->excludes(uncorrelated_flag);
  add_format(expand);
  add_term_cap(expand);

  auto* moment = app.add_subcommand("moment", "Numeric E[g(X) prod X_i^n_i] from the closed-form product moments");
  moment->add_option("n", n_text, "Exponents, comma separated")->required();
  moment->add_option("--spec", spec_path, "Gaussian spec JSON file")->required();
  moment->add_option("--g", g_path, "Polynomial JSON file (default g = 1)");
  moment->add_flag("--exact", exact, "Print the exact rational value");

  std::size_t isserlis_n = 0;
  auto* isserlis = app.add_subcommand("isserlis", "Pairing sum for E[X_1 ... X_N] with zero mean");
  isserlis->add_option("N", isserlis_n, "Dimension")->required()->check(CLI::PositiveNumber);
  isserlis->add_option("--spec", spec_path, "Gaussian spec JSON file; without it the symbolic sum is printed");
  isserlis->add_flag("--exact", exact, "Print the exact rational value");
  add_format(isserlis);

  std::string family;
  unsigned max_ell = 0;
  auto* coeffs = app.add_subcommand("coeffs", "Print H or G coefficient tables as JSON lines");
  coeffs->add_option("family", family, "H or G")->required()->check(CLI::IsMember({"H", "G"}));
  coeffs->add_option("--max", max_ell, "Largest l")->required();

  std::vector<std::string> engine_args;
  McOptions mc_options;
  double rtol = 1e-9;
  double atol = 1e-12;
  auto* verify = app.add_subcommand("verify", "Evaluate E[g(X) prod X_i^n_i] with several engines and compare");
  verify->add_option("--n", n_text, "Exponents, comma separated")->required();
  verify->add_option("--spec", spec_path, "Gaussian spec JSON file")->required();
  verify->add_option("--g", g_path, "Polynomial JSON file (default g = 1)");
  verify->add_option("--engines,--engine", engine_args,
                     "Engines: expand, song-lee, stein-reduce, pairing, operator, mc");
  verify->add_option("--seed", mc_options.seed, "Monte Carlo seed");
  verify->add_option("--samples", mc_options.samples, "Monte Carlo sample count")->check(CLI::Range(2ULL, ~0ULL));
  verify->add_option("--workers", mc_options.workers, "Monte Carlo worker threads")->check(CLI::PositiveNumber);
  verify->add_option("--rtol", rtol, "Relative tolerance for floating-point agreement");
  verify->add_option("--atol", atol, "Absolute tolerance for floating-point agreement");
  verify->add_flag("--exact", exact, "Compare exact rational results");
  add_term_cap(verify);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    ExpandOptions expand_options;
    expand_options.term_cap = term_cap.value_or(term_cap_from_env());

    if (expand->parsed()) {
      const MultiIndex n = MultiIndex::parse(n_text);
      Expansion e = uncorrelated_flag->count() != 0 ? uncorrelated_expand(n)
                    : zero_mean_flag->count() != 0  ? stein_expand_zero_mean(n, expand_options)
                                                    : stein_expand(n, expand_options);
      out << render(e, format == "text" ? RenderFormat::text : RenderFormat::json);
      return kExitOk;
    }

    if (moment->parsed()) {
      const MultiIndex n = MultiIndex::parse(n_text);
      const ExactGaussianSpec spec = spec_from_json(read_json_file(spec_path));
      require_spec_dimension(spec, n.size());
      std::optional<Polynomial> g;
      if (!g_path.empty()) g = polynomial_from_json(read_json_file(g_path));
      const Polynomial integrand = multiply_by_monomial(g_or_one(g, n.size()), n);
      if (exact) {
        out << to_string(gaussian_expectation(integrand, spec)) << '\n';
      } else {
        out << format_double(gaussian_expectation(integrand, to_double(spec))) << '\n';
      }
      return kExitOk;
    }

    if (isserlis->parsed()) {
      const Expansion e = isserlis_expansion(isserlis_n);
      if (spec_path.empty()) {
        out << render(e, format == "text" ? RenderFormat::text : RenderFormat::json);
        return kExitOk;
      }
      const ExactGaussianSpec spec = spec_from_json(read_json_file(spec_path));
      require_spec_dimension(spec, isserlis_n);
      Rational value = 0;
      for (const auto& t : e.terms()) value += evaluate_term_prefactor(t, spec);
      out << (exact ? to_string(value) : format_double(value.get_d())) << '\n';
      return kExitOk;
    }

    if (coeffs->parsed()) {
      for (unsigned l1 = 0; l1 <= max_ell; ++l1) {
        if (family == "H") {
          nlohmann::ordered_json row;
          row["l"] = l1;
          row["values"] = nlohmann::ordered_json::array();
          for (unsigned k = 0; 2 * k <= l1; ++k) row["values"].push_back(hermite_coeff(l1, static_cast<int>(k)).get_str());
          out << row.dump() << '\n';
          continue;
        }
        for (unsigned l2 = 0; l2 <= max_ell; ++l2) {
          nlohmann::ordered_json row;
          row["l1"] = l1;
          row["l2"] = l2;
          row["values"] = nlohmann::ordered_json::array();
          for (unsigned k = 0; k <= std::min(l1, l2); ++k) {
            row["values"].push_back(glue_coeff(l1, l2, static_cast<int>(k)).get_str());
          }
          out << row.dump() << '\n';
        }
      }
      return kExitOk;
    }

    // verify
    const MultiIndex n = MultiIndex::parse(n_text);
    const ExactGaussianSpec spec = spec_from_json(read_json_file(spec_path));
    require_spec_dimension(spec, n.size());
    std::optional<Polynomial> g_file;
    if (!g_path.empty()) g_file = polynomial_from_json(read_json_file(g_path));
    const Polynomial g = g_or_one(g_file, n.size());

    std::vector<std::string> engines = split_engines(engine_args);
    const bool has_deterministic =
        std::any_of(engines.begin(), engines.end(), [](const std::string& e) { return e != "mc"; });
    if (engines.size() < 2 || !has_deterministic) {
      const std::string reference =
          (!engines.empty() && engines.front() == "expand") ? "song-lee" : "expand";
      engines.insert(engines.begin(), reference);
    }

    std::vector<EngineResult> results;
    for (const auto& engine : engines) {
      results.push_back(run_engine(engine, n, g, spec, exact, expand_options, mc_options));
    }

    const auto reference = std::find_if(results.begin(), results.end(),
                                        [](const EngineResult& r) { return !r.std_error.has_value(); });
    bool agree = true;
    nlohmann::ordered_json report;
    report["n"] = n.entries();
    report["exact"] = exact;
    report["results"] = nlohmann::ordered_json::array();
    for (const auto& r : results) {
      bool ok = true;
      if (r.std_error) {
        ok = std::fabs(r.value - reference->value) <= 5.0 * *r.std_error;
      } else if (exact) {
        ok = *r.exact == *reference->exact;
      } else {
        const double scale = std::max(std::fabs(r.value), std::fabs(reference->value));
        ok = std::fabs(r.value - reference->value) <= rtol * scale + atol;
      }
      agree = agree && ok;
      nlohmann::ordered_json entry;
      entry["engine"] = r.engine;
      if (r.exact) {
        entry["value"] = to_string(*r.exact);
      } else {
        entry["value"] = r.value;
      }
      if (r.std_error) entry["std_error"] = *r.std_error;
      entry["agrees"] = ok;
      report["results"].push_back(std::move(entry));
      if (!ok) {
        err << "mismatch: engine '" << r.engine << "' gave "
            << (r.exact ? to_string(*r.exact) : format_double(r.value)) << ", reference '" << reference->engine
            << "' gave " << (reference->exact ? to_string(*reference->exact) : format_double(reference->value));
        if (r.std_error) err << " (std_error " << format_double(*r.std_error) << ")";
        err << '\n';
      }
    }
    report["agree"] = agree;
    out << report.dump() << '\n';
    return agree ? kExitOk : kExitMismatch;
  } catch (const NotPositiveSemidefinite& e) {
    err << "error: " << e.what() << '\n';
    return kExitMismatch;
  } catch (const TermCapExceeded& e) {
    err << "error: " << e.what() << " (raise it with --term-cap or GM_TERM_CAP)\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace gaussmom::cli
