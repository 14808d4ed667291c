#include "gaussmom/symbolic.hpp"

#include <sstream>
#include <stdexcept>

namespace gaussmom {

std::size_t pair_count(std::size_t dimension) { return dimension * (dimension - 1) / 2; }

std::size_t pair_slot(std::size_t i, std::size_t j, std::size_t dimension) {
  if (i >= j || j >= dimension) throw std::out_of_range("pair_slot needs i < j < N");
  // Rows 0..i-1 hold (N-1) + (N-2) + ... + (N-i) slots.
  return i * (2 * dimension - i - 1) / 2 + (j - i - 1);
}

SymbolicTerm SymbolicTerm::unit(std::size_t dimension) {
  return SymbolicTerm{BigInt(1), MultiIndex(dimension), MultiIndex(dimension),
                      MultiIndex(pair_count(dimension)), MultiIndex(dimension)};
}

unsigned SymbolicTerm::cov(std::size_t i, std::size_t j) const {
  return cov_pow[pair_slot(i, j, dimension())];
}

unsigned& SymbolicTerm::cov(std::size_t i, std::size_t j) {
  return cov_pow[pair_slot(i, j, dimension())];
}

Expansion Expansion::filtered(const std::function<bool(const SymbolicTerm&)>& keep) const {
  Expansion out(dimension_);
  for (const auto& t : terms_) {
    if (keep(t)) out.terms_.push_back(t);
  }
  return out;
}

void ExpansionBuilder::add(const SymbolicTerm& term) {
  const std::size_t n = dimension_;
  if (term.mu_pow.size() != n || term.var_pow.size() != n || term.deriv.size() != n ||
      term.cov_pow.size() != pair_count(n)) {
    throw std::invalid_argument("symbolic term dimension does not match the expansion");
  }
  if (term.coeff == 0) return;
  auto [it, inserted] = merged_.try_emplace(term.signature(), term.coeff);
  if (!inserted) it->second += term.coeff;
}

Expansion ExpansionBuilder::finish() const {
  Expansion out(dimension_);
  for (const auto& [sig, coeff] : merged_) {
    if (coeff == 0) continue;
    const auto& [deriv, mu, var, cov] = sig;
    out.terms_.push_back(SymbolicTerm{coeff, mu, var, cov, deriv});
  }
  return out;
}

Expansion canonicalize(const std::vector<SymbolicTerm>& raw, std::size_t dimension) {
  ExpansionBuilder builder(dimension);
  for (const auto& t : raw) builder.add(t);
  return builder.finish();
}

Expansion canonicalize(const Expansion& expansion) {
  return canonicalize(expansion.terms(), expansion.dimension());
}

namespace {

std::string index_label(std::size_t i, std::size_t j, std::size_t dimension) {
  if (dimension < 10) return std::to_string(i + 1) + std::to_string(j + 1);
  return std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

std::string render_term(const SymbolicTerm& t) {
  const std::size_t n = t.dimension();
  std::ostringstream os;
  os << t.coeff.get_str();
  for (std::size_t i = 0; i < n; ++i) {
    if (t.mu_pow[i] != 0) os << "*m" << i + 1 << '^' << t.mu_pow[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (t.var_pow[i] != 0) os << "*s" << i + 1 << '^' << t.var_pow[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (const unsigned e = t.cov(i, j); e != 0) os << "*C" << index_label(i, j, n) << '^' << e;
    }
  }
  os << "*E[";
  for (std::size_t i = 0; i < n; ++i) {
    if (t.deriv[i] == 0) continue;
    os << 'd' << i + 1;
    if (t.deriv[i] > 1) os << '^' << t.deriv[i];
    os << ' ';
  }
  os << "g]";
  return os.str();
}

nlohmann::ordered_json term_to_json(const SymbolicTerm& t) {
  const std::size_t n = t.dimension();
  nlohmann::ordered_json cov = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (const unsigned e = t.cov(i, j); e != 0) cov.push_back({i + 1, j + 1, e});
    }
  }
  nlohmann::ordered_json out;
  out["coeff"] = t.coeff.get_str();
  out["mu_pow"] = t.mu_pow.entries();
  out["var_pow"] = t.var_pow.entries();
  out["cov_pow"] = std::move(cov);
  out["deriv"] = t.deriv.entries();
  return out;
}

MultiIndex index_from_json(const nlohmann::json& value, std::size_t dimension, const char* field) {
  if (!value.is_array() || value.size() != dimension) {
    throw std::invalid_argument(std::string("expansion term field \"") + field + "\" must have n_dim entries");
  }
  std::vector<unsigned> entries;
  for (const auto& v : value) {
    if (!v.is_number_unsigned()) {
      throw std::invalid_argument(std::string("expansion term field \"") + field + "\" must be nonnegative");
    }
    entries.push_back(v.get<unsigned>());
  }
  return MultiIndex(std::move(entries));
}

}  // namespace

nlohmann::ordered_json to_json(const Expansion& expansion) {
  nlohmann::ordered_json out;
  out["n_dim"] = expansion.dimension();
  out["terms"] = nlohmann::ordered_json::array();
  for (const auto& t : expansion.terms()) out["terms"].push_back(term_to_json(t));
  return out;
}

std::string render(const Expansion& expansion, RenderFormat format) {
  std::ostringstream os;
  if (format == RenderFormat::text) {
    if (expansion.empty()) return "0\n";
    for (const auto& t : expansion.terms()) os << render_term(t) << '\n';
    return os.str();
  }
  // One term per line keeps golden files diffable.
  os << "{\n  \"n_dim\": " << expansion.dimension() << ",\n  \"terms\": [";
  const auto& terms = expansion.terms();
  for (std::size_t k = 0; k < terms.size(); ++k) {
    os << (k == 0 ? "\n    " : ",\n    ") << term_to_json(terms[k]).dump();
  }
  os << (terms.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return os.str();
}

Expansion expansion_from_json(const nlohmann::json& document) {
  if (!document.is_object() || !document.contains("n_dim") || !document["n_dim"].is_number_unsigned() ||
      !document.contains("terms") || !document["terms"].is_array()) {
    throw std::invalid_argument("expansion JSON needs \"n_dim\" and \"terms\"");
  }
  const auto n = document["n_dim"].get<std::size_t>();
  if (n == 0) throw std::invalid_argument("expansion JSON: n_dim must be positive");
  ExpansionBuilder builder(n);
  for (const auto& jt : document["terms"]) {
    SymbolicTerm t = SymbolicTerm::unit(n);
    if (!jt.contains("coeff") || !jt["coeff"].is_string()) {
      throw std::invalid_argument("expansion term needs a decimal-string \"coeff\"");
    }
    if (t.coeff.set_str(jt["coeff"].get<std::string>(), 10) != 0) {
      throw std::invalid_argument("expansion term coefficient is not a decimal integer");
    }
    t.mu_pow = index_from_json(jt.value("mu_pow", nlohmann::json()), n, "mu_pow");
    t.var_pow = index_from_json(jt.value("var_pow", nlohmann::json()), n, "var_pow");
    t.deriv = index_from_json(jt.value("deriv", nlohmann::json()), n, "deriv");
    const auto cov = jt.value("cov_pow", nlohmann::json::array());
    if (!cov.is_array()) throw std::invalid_argument("expansion term \"cov_pow\" must be an array");
    for (const auto& triple : cov) {
      if (!triple.is_array() || triple.size() != 3 || !triple[0].is_number_unsigned() ||
          !triple[1].is_number_unsigned() || !triple[2].is_number_unsigned()) {
        throw std::invalid_argument("cov_pow entries must be [i, j, e] triples");
      }
      const auto i = triple[0].get<std::size_t>();
      const auto j = triple[1].get<std::size_t>();
      if (i < 1 || i >= j || j > n) throw std::invalid_argument("cov_pow indices must satisfy 1 <= i < j <= n_dim");
      t.cov(i - 1, j - 1) += triple[2].get<unsigned>();
    }
    builder.add(t);
  }
  return builder.finish();
}

template <class Scalar>
Scalar evaluate_term_prefactor(const SymbolicTerm& term, const BasicGaussianSpec<Scalar>& spec) {
  const std::size_t n = term.dimension();
  if (spec.dimension() != n) throw std::invalid_argument("term and spec dimensions differ");
  Scalar value = scalar_from<Scalar>(term.coeff);
  for (std::size_t i = 0; i < n; ++i) {
    if (term.mu_pow[i] != 0) value *= ipow(spec.mean(i), term.mu_pow[i]);
    if (term.var_pow[i] != 0) value *= ipow(spec.variance(i), term.var_pow[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (const unsigned e = term.cov(i, j); e != 0) value *= ipow(spec.cov(i, j), e);
    }
  }
  return value;
}

template double evaluate_term_prefactor(const SymbolicTerm&, const GaussianSpec&);
template Rational evaluate_term_prefactor(const SymbolicTerm&, const ExactGaussianSpec&);

}  // namespace gaussmom
