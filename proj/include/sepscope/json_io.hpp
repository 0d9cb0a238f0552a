#pragma once

#include <json.hpp>

#include "sepscope/criteria.hpp"
#include "sepscope/decompose.hpp"
#include "sepscope/decomposition.hpp"
#include "sepscope/duality.hpp"
#include "sepscope/linalg.hpp"
#include "sepscope/states.hpp"

namespace sepscope {

// Field order in emitted documents is fixed so identical inputs give
// byte-identical output.
using Json = nlohmann::ordered_json;

// Complex matrices travel as row-major [[re, im], ...] nested lists.
Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j, const std::string& what);

Json state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const Json& j);

Json ensemble_to_json(const Ensemble& e);
Ensemble ensemble_from_json(const Json& j);

Json kraus_to_json(const KrausSet& k);
KrausSet kraus_from_json(const Json& j);

Json decomposition_to_json(const SeparableDecomposition& dec);
SeparableDecomposition decomposition_from_json(const Json& j);

Json search_report_to_json(const SearchResult& result);

Json verdict_to_json(const Verdict& verdict);

Json verification_to_json(const VerificationReport& report);

Json certificate_to_json(const EntanglementCertificate& cert);

}  // namespace sepscope
