#pragma once

#include <json.hpp>

#include "qtheta/mirror.hpp"
#include "qtheta/theta.hpp"

namespace qtheta::io {

// insertion-ordered so identical inputs serialize to identical bytes
using json = nlohmann::ordered_json;

json backend_to_json(const Backend& b);
Backend backend_from_json(const json& j);

// Scalars: complex {"abs": "...", "turns": "..."} with rational strings for
// exact values; p-adic {"rat": "n/d", "p": p}. Rational turns and p-adic
// rationals round-trip bit-exactly.
json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const json& j, const Backend& b, const char* field = "scalar");
json coeff_to_json(const Coefficient& c);
Coefficient coeff_from_json(const json& j, const Backend& b, const char* field = "coefficient");

json intmat_to_json(const IntMat& m);
IntMat intmat_from_json(const json& j, const char* field = "matrix");

json torus_to_json(const NCTorus& t);
TorusPtr torus_from_json(const json& j, const Backend& b);

json periods_to_json(const PeriodLattice& p);
PeriodsPtr periods_from_json(const json& j, const TorusPtr& torus);

json multiplier_to_json(const ThetaMultiplier& L);
MultiplierPtr multiplier_from_json(const json& j, const TorusPtr& torus, const PeriodsPtr& periods);

json morphism_to_json(const TorusMorphism& F);
TorusMorphism morphism_from_json(const json& j, const TorusPtr& source, const TorusPtr& target);

// self-contained: embeds backend, torus, periods and multiplier
json series_to_json(const ThetaSeries& s);
ThetaSeries series_from_json(const json& j);

json framed_to_json(const FramedTorus& f);
FramedTorus framed_from_json(const json& j, const Backend& b);

json eigen_to_json(const Eigen::MatrixXd& m);
json eigen_cx_to_json(const Eigen::MatrixXcd& m);
json intmat_list_to_json(const std::vector<IntMat>& ms);

// deterministic shortest-faithful double rendering
std::string double_to_string(double x);

// exact rational from a decimal/scientific literal; false if not parseable
bool decimal_to_rational(const std::string& s, mpq_class& out);

}  // namespace qtheta::io
