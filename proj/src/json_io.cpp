#include "sepscope/json_io.hpp"

#include <string>

#include "sepscope/errors.hpp"

namespace sepscope {

namespace {

double number_at(const Json& j, const std::string& what) {
  if (!j.is_number()) throw DomainError(what + ": expected a number");
  return j.get<double>();
}

std::size_t dimension_at(const Json& j, const std::string& key,
                         const std::string& what) {
  if (!j.contains(key) || !j[key].is_number_unsigned() || j[key] == 0)
    throw DomainError(what + ": missing or invalid \"" + key + "\"");
  return j[key].get<std::size_t>();
}

const Json& member(const Json& j, const std::string& key,
                   const std::string& what) {
  if (!j.is_object() || !j.contains(key))
    throw DomainError(what + ": missing \"" + key + "\"");
  return j[key];
}

}  // namespace

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j)
      row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty())
    throw DomainError(what + ": expected a non-empty matrix");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty())
    throw DomainError(what + ": expected non-empty matrix rows");
  const std::size_t cols = j[0].size();
  CMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw DomainError(what + ": ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) {
      const Json& entry = j[r][c];
      if (!entry.is_array() || entry.size() != 2)
        throw DomainError(what + ": entries must be [re, im] pairs");
      m(r, c) = Complex(number_at(entry[0], what), number_at(entry[1], what));
    }
  }
  return m;
}

Json state_to_json(const DensityMatrix& rho) {
  Json j;
  j["dim_a"] = rho.dim_a;
  j["dim_b"] = rho.dim_b;
  j["matrix"] = matrix_to_json(rho.matrix);
  return j;
}

DensityMatrix state_from_json(const Json& j) {
  DensityMatrix rho;
  rho.dim_a = dimension_at(j, "dim_a", "state");
  rho.dim_b = dimension_at(j, "dim_b", "state");
  rho.matrix = matrix_from_json(member(j, "matrix", "state"), "state matrix");
  validate_state(rho);
  return rho;
}

Json ensemble_to_json(const Ensemble& e) {
  Json j;
  j["dim_a"] = e.dim_a;
  j["dim_b"] = e.dim_b;
  Json terms = Json::array();
  for (const EnsembleTerm& term : e.terms) {
    Json entry;
    entry["p"] = term.p;
    entry["c"] = matrix_to_json(term.c);
    terms.push_back(std::move(entry));
  }
  j["terms"] = std::move(terms);
  return j;
}

Ensemble ensemble_from_json(const Json& j) {
  Ensemble e;
  e.dim_a = dimension_at(j, "dim_a", "ensemble");
  e.dim_b = dimension_at(j, "dim_b", "ensemble");
  const Json& terms = member(j, "terms", "ensemble");
  if (!terms.is_array() || terms.empty())
    throw DomainError("ensemble: \"terms\" must be a non-empty list");
  for (const Json& entry : terms) {
    EnsembleTerm term;
    term.p = number_at(member(entry, "p", "ensemble term"), "ensemble weight");
    term.c = matrix_from_json(member(entry, "c", "ensemble term"),
                              "ensemble coefficients");
    e.terms.push_back(std::move(term));
  }
  validate_ensemble(e);
  return e;
}

Json kraus_to_json(const KrausSet& k) {
  Json j;
  j["dim_a"] = k.dim_a;
  j["dim_b"] = k.dim_b;
  Json ops = Json::array();
  for (const CMatrix& op : k.ops) ops.push_back(matrix_to_json(op));
  j["ops"] = std::move(ops);
  return j;
}

KrausSet kraus_from_json(const Json& j) {
  KrausSet k;
  k.dim_a = dimension_at(j, "dim_a", "kraus set");
  k.dim_b = dimension_at(j, "dim_b", "kraus set");
  const Json& ops = member(j, "ops", "kraus set");
  if (!ops.is_array() || ops.empty())
    throw DomainError("kraus set: \"ops\" must be a non-empty list");
  for (const Json& op : ops)
    k.ops.push_back(matrix_from_json(op, "kraus operator"));
  validate_kraus(k);
  return k;
}

Json decomposition_to_json(const SeparableDecomposition& dec) {
  Json terms = Json::array();
  for (const SeparableTerm& term : dec.terms) {
    Json entry;
    entry["q"] = term.q;
    entry["a"] = matrix_to_json(term.a_factor);
    entry["b"] = matrix_to_json(term.b_factor);
    terms.push_back(std::move(entry));
  }
  Json j;
  j["terms"] = std::move(terms);
  return j;
}

SeparableDecomposition decomposition_from_json(const Json& j) {
  const Json& terms = member(j, "terms", "decomposition");
  if (!terms.is_array() || terms.empty())
    throw DomainError("decomposition: \"terms\" must be a non-empty list");
  SeparableDecomposition dec;
  for (const Json& entry : terms) {
    SeparableTerm term;
    term.q = number_at(member(entry, "q", "decomposition term"),
                       "decomposition weight");
    term.a_factor =
        matrix_from_json(member(entry, "a", "decomposition term"), "factor a");
    term.b_factor =
        matrix_from_json(member(entry, "b", "decomposition term"), "factor b");
    dec.terms.push_back(std::move(term));
  }
  return dec;
}

Json search_report_to_json(const SearchResult& result) {
  Json j;
  j["found"] = result.found;
  j["residual"] = result.residual;
  j["restarts"] = result.restarts;
  j["seed"] = result.seed;
  j["V"] = matrix_to_json(result.v.v);
  return j;
}

Json verdict_to_json(const Verdict& verdict) {
  Json j;
  j["criterion"] = verdict.criterion;
  j["result"] = to_string(verdict.result);
  Json witness = Json::object();
  for (const auto& [key, value] : verdict.witness) witness[key] = value;
  j["witness"] = std::move(witness);
  if (!verdict.note.empty()) j["note"] = verdict.note;
  return j;
}

Json verification_to_json(const VerificationReport& report) {
  Json j;
  j["pass"] = report.pass;
  j["tol"] = report.tol;
  j["reconstruction_error"] = report.reconstruction_error;
  j["weight_sum_error"] = report.weight_sum_error;
  j["max_second_eigenvalue"] = report.max_second_eigenvalue;
  j["max_trace_error"] = report.max_trace_error;
  j["min_factor_eigenvalue"] = report.min_factor_eigenvalue;
  j["min_weight"] = report.min_weight;
  return j;
}

Json certificate_to_json(const EntanglementCertificate& cert) {
  Json steps = Json::array();
  for (const CertificateStep& step : cert.steps) {
    Json entry;
    entry["claim"] = step.claim;
    entry["combination"] = step.combination;
    entry["zero_residual"] = step.zero_residual;
    entry["residual"] = step.residual;
    steps.push_back(std::move(entry));
  }
  Json j;
  j["passed"] = cert.passed;
  j["steps"] = std::move(steps);
  j["cross_check_points"] = cert.cross_check_points;
  j["cross_check_deviation"] = cert.cross_check_deviation;
  j["conclusion"] = cert.conclusion;
  return j;
}

}  // namespace sepscope
