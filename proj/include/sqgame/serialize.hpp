#pragma once

// JSON encoding. Complex numbers are [re, im]; matrices are
// {"rows", "cols", "data"} with row-major nested data; labelled operators and
// vectors carry their subsystem shape.

#include "json.hpp"

#include "sqgame/certify.hpp"
#include "sqgame/oracle.hpp"
#include "sqgame/swap.hpp"

namespace sqgame {

using json = nlohmann::json;

json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);
json to_json(const Vector& v);
Vector vector_from_json(const json& j);
json to_json(const SubsystemShape& s);
SubsystemShape shape_from_json(const json& j);
json to_json(const Operator& op);
Operator operator_from_json(const json& j);
json to_json(const Ket& k);
Ket ket_from_json(const json& j);

json to_json(const Witness& w);
Witness witness_from_json(const json& j);
json to_json(const InputEnsemble& e);
InputEnsemble ensemble_from_json(const json& j);
json to_json(const ScoreTable& t);
ScoreTable score_table_from_json(const json& j);
json to_json(const SemiQuantumGame& g);
SemiQuantumGame game_from_json(const json& j);

json to_json(const Strategy& s);
Strategy strategy_from_json(const json& j);
json to_json(const EffectiveElement& e);
json to_json(const SeeSawConfig& c);
json to_json(const OptResult& r);
json to_json(const SchmidtForm& s);
json to_json(const CertificationReport& r);

json to_json(const SwapInstance& s);
SwapInstance swap_instance_from_json(const json& j);
json to_json(const SwapOptResult& r);
json to_json(const CorollaryReport& r);

json to_json(const ProbeReport& r);
json to_json(const AppendixDReport& r);

}  // namespace sqgame
