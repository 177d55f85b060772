#pragma once

#include <string>
#include <vector>

#include "sepkit/decomp.hpp"
#include "sepkit/linalg.hpp"
#include "sepkit/states.hpp"

namespace sepkit {

// State file: {"dA": int, "dB": int, "matrix": [[{"re":..,"im":..}, ...], ...]},
// row-major. Hermiticity is validated on load.
BipartiteOperator load_state_json(const std::string& path);
void save_state_json(const BipartiteOperator& op, const std::string& path);

// Ensemble file: {"terms": [{"p":.., "psiPrime": [{"re","im"},..], "psi": [..]}]}
std::vector<EnsembleTerm> load_ensemble_json(const std::string& path);
void save_ensemble_json(const std::vector<EnsembleTerm>& ensemble, const std::string& path);

// Decomposition: {"terms": [{"weight":.., "aOperator": [[..]], "bStateVector": [..]}]}
void save_decomposition_json(const SeparableDecomposition& decomp, const std::string& path);

// Bare complex matrix, used for certificate files (extensions, witnesses).
void save_matrix_json(const CMat& m, const std::string& path);
CMat load_matrix_json(const std::string& path);

}  // namespace sepkit
