#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sepscope/decompose.hpp"
#include "sepscope/duality.hpp"
#include "sepscope/errors.hpp"
#include "sepscope/json_io.hpp"
#include "sepscope/random.hpp"
#include "sepscope/states.hpp"

using namespace sepscope;

TEST_CASE("matrix json round trip is exact") {
  Rng rng(11u);
  const CMatrix m = random_matrix(3, 4, rng);
  const CMatrix back = matrix_from_json(matrix_to_json(m), "test");
  REQUIRE(max_abs_diff(m, back) == 0.0);

  REQUIRE_THROWS_AS(matrix_from_json(Json::array(), "test"), DomainError);
  REQUIRE_THROWS_AS(matrix_from_json(Json::parse("[[[0,0]],[[0,0],[0,0]]]"),
                                     "test"),
                    DomainError);
  REQUIRE_THROWS_AS(matrix_from_json(Json::parse("[[[0,0,0]]]"), "test"),
                    DomainError);
  REQUIRE_THROWS_AS(matrix_from_json(Json::parse("[[[0,\"x\"]]]"), "test"),
                    DomainError);
}

TEST_CASE("state json round trip validates on parse") {
  const DensityMatrix rho = random_density(2, 3, 4, 5u);
  const DensityMatrix back = state_from_json(state_to_json(rho));
  REQUIRE(back.dim_a == rho.dim_a);
  REQUIRE(back.dim_b == rho.dim_b);
  REQUIRE(max_abs_diff(back.matrix, rho.matrix) == 0.0);

  Json j = state_to_json(rho);
  j.erase("dim_a");
  REQUIRE_THROWS_AS(state_from_json(j), DomainError);

  Json scaled = state_to_json(rho);
  scaled["matrix"][0][0][0] = 5.0;
  REQUIRE_THROWS_AS(state_from_json(scaled), Error);
}

TEST_CASE("ensemble json round trip preserves terms") {
  const Ensemble e = spectral_ensemble(random_density(2, 2, 3, 9u));
  const Ensemble back = ensemble_from_json(ensemble_to_json(e));
  REQUIRE(back.terms.size() == e.terms.size());
  for (std::size_t a = 0; a < e.terms.size(); ++a) {
    REQUIRE(back.terms[a].p == e.terms[a].p);
    REQUIRE(max_abs_diff(back.terms[a].c, e.terms[a].c) == 0.0);
  }

  Json j = ensemble_to_json(e);
  j["terms"] = Json::array();
  REQUIRE_THROWS_AS(ensemble_from_json(j), DomainError);
}

TEST_CASE("kraus json round trip validates shapes") {
  const KrausSet k =
      kraus_from_ensemble(spectral_ensemble(random_density(2, 3, 2, 4u)));
  const KrausSet back = kraus_from_json(kraus_to_json(k));
  REQUIRE(back.ops.size() == k.ops.size());
  for (std::size_t a = 0; a < k.ops.size(); ++a) {
    REQUIRE(max_abs_diff(back.ops[a], k.ops[a]) == 0.0);
  }

  Json j = kraus_to_json(k);
  j.erase("ops");
  REQUIRE_THROWS_AS(kraus_from_json(j), DomainError);
}

TEST_CASE("decomposition json round trip still verifies") {
  const auto iso = isotropic_from_fidelity(2, 0.4);
  const SeparableDecomposition dec = isotropic_decomposition(0.4);
  const SeparableDecomposition back =
      decomposition_from_json(decomposition_to_json(dec));
  REQUIRE(back.terms.size() == dec.terms.size());
  const auto report = verify_decomposition(iso.state, back, 1e-10);
  REQUIRE(report.pass);
}

TEST_CASE("search report uses the pinned field order") {
  SearchResult result;
  result.found = true;
  result.residual = 1e-12;
  result.restarts = 4;
  result.seed = 7;
  result.v.v = CMatrix::identity(2);
  const Json j = search_report_to_json(result);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  const std::vector<std::string> expected = {"found", "residual", "restarts",
                                             "seed", "V"};
  REQUIRE(keys == expected);
}

TEST_CASE("verdict json carries the note only when present") {
  Verdict v;
  v.criterion = "ppt";
  v.result = VerdictResult::Entangled;
  v.witness["min_eigenvalue"] = -0.1;
  Json j = verdict_to_json(v);
  REQUIRE(j["criterion"] == "ppt");
  REQUIRE(j["result"] == "Entangled");
  REQUIRE(j["witness"]["min_eigenvalue"] == -0.1);
  REQUIRE(!j.contains("note"));

  v.note = "boundary case";
  j = verdict_to_json(v);
  REQUIRE(j["note"] == "boundary case");
}
