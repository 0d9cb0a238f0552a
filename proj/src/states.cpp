#include "sepscope/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sepscope/errors.hpp"
#include "sepscope/random.hpp"

namespace sepscope {

namespace {

CMatrix outer(const std::vector<Complex>& v) {
  CMatrix out(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      out(i, j) = v[i] * std::conj(v[j]);
  return out;
}

std::vector<Complex> normalized(std::vector<Complex> v) {
  double s = 0.0;
  for (const Complex& z : v) s += std::norm(z);
  s = std::sqrt(s);
  for (Complex& z : v) z /= s;
  return v;
}

// lexicographic order on (re, im) pairs of the flattened coefficients
bool lex_less(const CMatrix& a, const CMatrix& b) {
  for (std::size_t k = 0; k < a.data().size(); ++k) {
    const Complex& x = a.data()[k];
    const Complex& y = b.data()[k];
    if (std::real(x) != std::real(y)) return std::real(x) < std::real(y);
    if (std::imag(x) != std::imag(y)) return std::imag(x) < std::imag(y);
  }
  return false;
}

CMatrix coefficient_matrix(const std::vector<Complex>& state_vector,
                           std::size_t m, std::size_t n) {
  return matricize(state_vector, m, n);
}

std::vector<Complex> product_vector(const std::vector<Complex>& a,
                                    const std::vector<Complex>& b) {
  std::vector<Complex> out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

std::vector<Complex> basis_vector(std::size_t i, std::size_t d) {
  std::vector<Complex> v(d, 0.0);
  v[i] = 1.0;
  return v;
}

Ensemble two_term_ensemble(std::size_t m, std::size_t n, double p,
                           const std::vector<Complex>& first,
                           const std::vector<Complex>& second) {
  Ensemble e{m, n, {}};
  if (p > 0.0) e.terms.push_back({p, coefficient_matrix(first, m, n)});
  if (p < 1.0) e.terms.push_back({1.0 - p, coefficient_matrix(second, m, n)});
  return e;
}

void require_probability(double p, const char* who) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError(std::string(who) + ": p must lie in [0, 1]");
  }
}

NamedState make_bell_mixture(double p) {
  require_probability(p, "bell-mixture");
  const double inv = 1.0 / std::sqrt(2.0);
  const std::vector<Complex> psi_plus = {0.0, inv, inv, 0.0};
  const std::vector<Complex> phi_minus = {inv, 0.0, 0.0, -inv};
  NamedState out;
  out.name = "bell-mixture";
  out.ensemble = two_term_ensemble(2, 2, p, psi_plus, phi_minus);
  out.state = to_density(out.ensemble);
  out.description =
      "p |psi+><psi+| + (1-p) |phi-><phi-| on two qubits; separable only at "
      "p = 1/2";
  return out;
}

NamedState make_psi_zero_mixture(double p, bool plus) {
  require_probability(p, "psi-zero mixture");
  const double inv = 1.0 / std::sqrt(2.0);
  const std::vector<Complex> psi = {0.0, inv, plus ? inv : -inv, 0.0};
  const std::vector<Complex> zero = {1.0, 0.0, 0.0, 0.0};
  NamedState out;
  out.name = plus ? "psi-plus-zero" : "psi-minus-zero";
  out.ensemble = two_term_ensemble(2, 2, p, psi, zero);
  out.state = to_density(out.ensemble);
  out.description = plus
      ? "p |psi+><psi+| + (1-p) |00><00|; entangled for every p > 0"
      : "p |psi-><psi-| + (1-p) |00><00|; entangled for every p > 0";
  return out;
}

NamedState make_five_by_five() {
  NamedState out;
  out.name = "five-by-five";
  const double r23 = std::sqrt(2.0 / 3.0);
  const double r13 = std::sqrt(1.0 / 3.0);
  CMatrix c1(5, 5), c2(5, 5);
  c1(0, 0) = r23;
  c1(1, 1) = r13;
  c2(2, 2) = r13;
  c2(3, 3) = r13;
  c2(4, 4) = r13;
  out.ensemble = Ensemble{5, 5, {{2.0 / 3.0, c1}, {1.0 / 3.0, c2}}};
  out.state = to_density(out.ensemble);
  out.description =
      "rank-two 5x5 mixture whose entanglement needs the second-eigenvalue "
      "test";
  return out;
}

NamedState make_upb_tiles() {
  const double inv = 1.0 / std::sqrt(2.0);
  auto k0 = basis_vector(0, 3);
  auto k1 = basis_vector(1, 3);
  auto k2 = basis_vector(2, 3);
  auto minus = [&](const std::vector<Complex>& a, const std::vector<Complex>& b) {
    std::vector<Complex> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = inv * (a[i] - b[i]);
    return out;
  };
  auto plus = [&](const std::vector<Complex>& a, const std::vector<Complex>& b) {
    std::vector<Complex> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = inv * (a[i] + b[i]);
    return out;
  };

  // the five tiles states spanning the unextendible product basis
  const std::vector<std::vector<Complex>> tiles = {
      product_vector(k0, minus(k0, k1)), product_vector(k2, minus(k1, k2)),
      product_vector(minus(k0, k1), k2), product_vector(minus(k1, k2), k0)};
  std::vector<Complex> uniform(3, 1.0 / std::sqrt(3.0));
  const std::vector<Complex> stopper = product_vector(uniform, uniform);

  CMatrix rho = CMatrix::identity(9);
  for (const auto& t : tiles) rho -= outer(t);
  rho -= outer(stopper);
  rho *= 0.25;

  // orthonormal rank-space ensemble built from the complementary tiles
  const std::vector<std::vector<Complex>> comp = {
      product_vector(k0, plus(k0, k1)), product_vector(k2, plus(k1, k2)),
      product_vector(plus(k0, k1), k2), product_vector(plus(k1, k2), k0),
      product_vector(k1, k1)};
  auto combine = [&](double w5, double w6, double w7, double w8, double w9) {
    std::vector<Complex> out(9, 0.0);
    const double w[5] = {w5, w6, w7, w8, w9};
    for (int t = 0; t < 5; ++t)
      for (std::size_t i = 0; i < 9; ++i) out[i] += w[t] * comp[t][i];
    return out;
  };
  const double sixth = 1.0 / 6.0;
  const double tail = 2.0 * std::sqrt(2.0) / 3.0;
  const std::vector<std::vector<Complex>> phis = {
      combine(0.5, 0.5, -0.5, -0.5, 0.0), combine(0.5, -0.5, 0.5, -0.5, 0.0),
      combine(0.5, -0.5, -0.5, 0.5, 0.0),
      combine(sixth, sixth, sixth, sixth, -tail)};

  NamedState out;
  out.name = "upb-tiles";
  out.state = DensityMatrix{3, 3, rho};
  out.ensemble.dim_a = 3;
  out.ensemble.dim_b = 3;
  for (const auto& phi : phis)
    out.ensemble.terms.push_back({0.25, coefficient_matrix(phi, 3, 3)});
  out.description =
      "3x3 tiles bound state: positive partial transpose yet entangled";
  return out;
}

}  // namespace

void validate_state(const DensityMatrix& rho) {
  const std::size_t dim = rho.dim_a * rho.dim_b;
  if (rho.dim_a == 0 || rho.dim_b == 0 || rho.matrix.rows() != dim ||
      rho.matrix.cols() != dim) {
    throw NotAState("state: matrix shape does not match dim_a * dim_b");
  }
  if (!rho.matrix.is_hermitian(1e-10)) {
    throw NotAState("state: NotHermitian");
  }
  if (std::abs(rho.matrix.trace() - Complex(1.0)) > 1e-10) {
    throw NotAState("state: TraceNotOne");
  }
  const Spectrum s = hermitian_eig(rho.matrix);
  if (s.eigenvalues.back() < -1e-10) {
    throw NotAState("state: NotPSD");
  }
}

void validate_ensemble(const Ensemble& ensemble) {
  if (ensemble.dim_a == 0 || ensemble.dim_b == 0 || ensemble.terms.empty()) {
    throw DomainError("ensemble: empty or zero-dimensional");
  }
  double total = 0.0;
  for (const EnsembleTerm& t : ensemble.terms) {
    if (!(t.p > 0.0 && t.p <= 1.0)) {
      throw DomainError("ensemble: term weight outside (0, 1]");
    }
    if (t.c.rows() != ensemble.dim_a || t.c.cols() != ensemble.dim_b) {
      throw DomainError("ensemble: coefficient matrix shape mismatch");
    }
    if (std::abs(t.c.frobenius_norm() - 1.0) > 1e-9) {
      throw DomainError("ensemble: coefficient matrix not unit-normalized");
    }
    total += t.p;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw DomainError("ensemble: weights do not sum to one");
  }
}

DensityMatrix to_density(const Ensemble& ensemble) {
  const std::size_t dim = ensemble.dim_a * ensemble.dim_b;
  CMatrix rho(dim, dim);
  for (const EnsembleTerm& t : ensemble.terms) {
    const std::vector<Complex> v = vectorize(t.c);
    for (std::size_t x = 0; x < dim; ++x)
      for (std::size_t y = 0; y < dim; ++y)
        rho(x, y) += t.p * v[x] * std::conj(v[y]);
  }
  return DensityMatrix{ensemble.dim_a, ensemble.dim_b, std::move(rho)};
}

CMatrix partial_trace_a(const CMatrix& rho, std::size_t m, std::size_t n) {
  if (rho.rows() != m * n || rho.cols() != m * n) {
    throw ShapeMismatch("partial_trace_a: shape does not match m*n");
  }
  CMatrix out(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t i = 0; i < m; ++i) out(j, l) += rho(i * n + j, i * n + l);
  return out;
}

CMatrix partial_trace_b(const CMatrix& rho, std::size_t m, std::size_t n) {
  if (rho.rows() != m * n || rho.cols() != m * n) {
    throw ShapeMismatch("partial_trace_b: shape does not match m*n");
  }
  CMatrix out(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t j = 0; j < n; ++j) out(i, k) += rho(i * n + j, k * n + j);
  return out;
}

CMatrix partial_transpose_b(const CMatrix& rho, std::size_t m, std::size_t n) {
  if (rho.rows() != m * n || rho.cols() != m * n) {
    throw ShapeMismatch("partial_transpose_b: shape does not match m*n");
  }
  CMatrix out(m * n, m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < n; ++l)
          out(i * n + j, k * n + l) = rho(i * n + l, k * n + j);
  return out;
}

Ensemble spectral_ensemble(const DensityMatrix& rho, double eig_tol) {
  validate_state(rho);
  const Spectrum s = hermitian_eig(rho.matrix);
  Ensemble out{rho.dim_a, rho.dim_b, {}};
  const std::size_t dim = rho.dim_a * rho.dim_b;
  for (std::size_t k = 0; k < dim; ++k) {
    if (s.eigenvalues[k] <= eig_tol) continue;
    std::vector<Complex> v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = s.eigenvectors(i, k);
    // eigenvalues of a unit-trace PSD matrix; shave off rounding excess
    const double p = std::min(s.eigenvalues[k], 1.0);
    out.terms.push_back({p, matricize(v, rho.dim_a, rho.dim_b)});
  }
  std::stable_sort(out.terms.begin(), out.terms.end(),
                   [](const EnsembleTerm& a, const EnsembleTerm& b) {
                     if (a.p != b.p) return a.p > b.p;
                     return lex_less(a.c, b.c);
                   });
  return out;
}

IsotropicState isotropic(std::size_t d, double alpha) {
  if (d < 2) throw DomainError("isotropic: d must be at least 2");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw DomainError("isotropic: alpha must lie in [0, 1]");
  }
  const double dd = static_cast<double>(d * d);
  const double fidelity = (alpha * (dd - 1.0) + 1.0) / dd;

  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<Complex> max_ent(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) max_ent[i * d + i] = inv_sqrt_d;

  CMatrix rho = outer(max_ent);
  rho *= alpha;
  const double floor_weight = (1.0 - alpha) / dd;
  for (std::size_t i = 0; i < d * d; ++i) rho(i, i) += floor_weight;

  Ensemble ens{d, d, {}};
  const double rest = (1.0 - fidelity) / (dd - 1.0);
  auto push = [&](double p, CMatrix c) {
    if (p > 0.0) ens.terms.push_back({p, std::move(c)});
  };
  for (std::size_t k = 0; k < d; ++k) {
    CMatrix c(d, d);
    for (std::size_t j = 0; j < d; ++j) {
      const double angle =
          2.0 * std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(d);
      c(j, j) = inv_sqrt_d * Complex(std::cos(angle), std::sin(angle));
    }
    push(k == 0 ? fidelity : rest, std::move(c));
  }
  const double inv = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      CMatrix sym(d, d), anti(d, d);
      sym(i, j) = inv;
      sym(j, i) = inv;
      anti(i, j) = inv;
      anti(j, i) = -inv;
      push(rest, std::move(sym));
      push(rest, std::move(anti));
    }

  return IsotropicState{DensityMatrix{d, d, std::move(rho)}, std::move(ens),
                        alpha, fidelity};
}

IsotropicState isotropic_from_fidelity(std::size_t d, double fidelity) {
  if (d < 2) throw DomainError("isotropic: d must be at least 2");
  const double dd = static_cast<double>(d * d);
  const double alpha = (fidelity * dd - 1.0) / (dd - 1.0);
  if (!(alpha >= -1e-12 && alpha <= 1.0 + 1e-12)) {
    throw DomainError("isotropic: fidelity must lie in [1/d^2, 1]");
  }
  return isotropic(d, std::clamp(alpha, 0.0, 1.0));
}

NamedState named_state(const std::string& name, double p) {
  if (name == "bell-mixture") return make_bell_mixture(p);
  if (name == "psi-plus-zero") return make_psi_zero_mixture(p, true);
  if (name == "psi-minus-zero") return make_psi_zero_mixture(p, false);
  if (name == "five-by-five") return make_five_by_five();
  if (name == "upb-tiles") return make_upb_tiles();
  throw UnknownState("named_state: unknown name '" + name + "'");
}

std::vector<NamedStateInfo> list_named_states() {
  return {
      {"bell-mixture", true,
       "p |psi+><psi+| + (1-p) |phi-><phi-|, two qubits"},
      {"psi-plus-zero", true, "p |psi+><psi+| + (1-p) |00><00|, two qubits"},
      {"psi-minus-zero", true, "p |psi-><psi-| + (1-p) |00><00|, two qubits"},
      {"five-by-five", false, "rank-two 5x5 example for the second-eigenvalue test"},
      {"upb-tiles", false, "3x3 tiles bound entangled state"},
  };
}

DensityMatrix random_density(std::size_t m, std::size_t n, std::size_t rank,
                             std::uint64_t seed) {
  if (rank == 0 || rank > m * n) {
    throw DomainError("random_density: rank must lie in [1, m*n]");
  }
  Rng rng(seed);
  const CMatrix g = random_matrix(m * n, rank, rng);
  CMatrix rho = g * g.adjoint();
  rho *= 1.0 / std::real(rho.trace());
  return DensityMatrix{m, n, std::move(rho)};
}

RandomSeparable random_separable(std::size_t m, std::size_t n,
                                 std::size_t term_count, std::uint64_t seed) {
  if (term_count == 0) {
    throw DomainError("random_separable: need at least one term");
  }
  Rng rng(seed);
  std::vector<double> weights(term_count);
  double total = 0.0;
  for (double& w : weights) {
    w = 0.2 + rng.uniform();
    total += w;
  }
  for (double& w : weights) w /= total;

  SeparableDecomposition dec;
  CMatrix rho(m * n, m * n);
  for (std::size_t t = 0; t < term_count; ++t) {
    std::vector<Complex> xi(m), eta(n);
    for (Complex& z : xi) z = rng.complex_gaussian();
    for (Complex& z : eta) z = rng.complex_gaussian();
    CMatrix a = outer(normalized(std::move(xi)));
    CMatrix b = outer(normalized(std::move(eta)));
    rho += weights[t] * kron(a, b);
    dec.terms.push_back({weights[t], std::move(a), std::move(b)});
  }
  return RandomSeparable{DensityMatrix{m, n, std::move(rho)}, std::move(dec)};
}

Ensemble ensemble_from_decomposition(const SeparableDecomposition& dec,
                                     std::size_t m, std::size_t n) {
  Ensemble out{m, n, {}};
  for (const SeparableTerm& term : dec.terms) {
    if (term.q <= 1e-15) continue;
    const Spectrum sa = hermitian_eig(term.a_factor);
    const Spectrum sb = hermitian_eig(term.b_factor);
    CMatrix c(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        c(i, j) = sa.eigenvectors(i, 0) * sb.eigenvectors(j, 0);
    out.terms.push_back({term.q, std::move(c)});
  }
  return out;
}

}  // namespace sepscope
