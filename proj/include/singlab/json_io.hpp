#pragma once

#include <json.hpp>

#include "singlab/bounds.hpp"
#include "singlab/boxcount.hpp"
#include "singlab/diophantine.hpp"
#include "singlab/exponents.hpp"
#include "singlab/fractal.hpp"
#include "singlab/height.hpp"
#include "singlab/lattice.hpp"
#include "singlab/weights.hpp"

namespace singlab {

using Json = nlohmann::ordered_json;

// scalars may be numbers or exact-rational strings like "1/2"
double number_from_json(const Json& j);

Weights weights_from_json(const Json& j);
Json weights_to_json(const Weights& w);

// {"preset": name} or {"c": ..., "w": [...]}
Ifs ifs_from_json(const Json& j);
// {"preset": name} applied to the whole grid, or {"grid": [[entry, ...], ...]}
ProductFractal fractal_from_json(const Json& j, int m, int n);
Json fractal_to_json(const ProductFractal& K);

// null -> standard lattice; {"basis": [[...], ...]} row-major otherwise
Lattice lattice_from_json(const Json& j, int d);
Json lattice_to_json(const Lattice& L);

EtaProfile profile_from_json(const Json& j, const Weights& W);
Json profile_to_json(const EtaProfile& p, const Weights& W);

Eigen::MatrixXd matrix_from_json(const Json& j);
Json matrix_to_json(const Eigen::MatrixXd& m);

Json witness_to_json(const DirichletWitness& w);
Json zeta_to_json(const ZetaEstimate& z);
ZetaEstimate zeta_from_json(const Json& j);
Json bound_report_to_json(const BoundReport& rep);
Json contraction_report_to_json(const ContractionReport& rep);

}  // namespace singlab
