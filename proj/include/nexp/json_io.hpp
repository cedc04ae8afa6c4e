#pragma once

#include "nexp/augmented.hpp"
#include "nexp/chain.hpp"
#include "nexp/expansivity.hpp"
#include "nexp/rational.hpp"
#include "nexp/shadowing.hpp"
#include "nexp/symbolic.hpp"

#include <json.hpp>

namespace nexp {

using Json = nlohmann::json;

// Exact rationals travel as "p/q" strings, never as floats.
void to_json(Json& j, const Rat& r);
void from_json(const Json& j, Rat& r);

void to_json(Json& j, const BiSeq& s);
void from_json(const Json& j, BiSeq& s);

void to_json(Json& j, const AugPoint& p);
void from_json(const Json& j, AugPoint& p);

void to_json(Json& j, const AugSystem& sys);
void from_json(const Json& j, AugSystem& sys);

void to_json(Json& j, const ScheduleEntry& e);
void from_json(const Json& j, ScheduleEntry& e);

void to_json(Json& j, const PseudoOrbit& po);
void from_json(const Json& j, PseudoOrbit& po);
void to_json(Json& j, const LimitPseudoOrbit& lpo);
void from_json(const Json& j, LimitPseudoOrbit& lpo);
void to_json(Json& j, const TwoSidedLimitPseudoOrbit& ts);
void from_json(const Json& j, TwoSidedLimitPseudoOrbit& ts);

void to_json(Json& j, const Exactness& e);
void to_json(Json& j, const DynamicBallReport& r);
void to_json(Json& j, const ExpansivityResult& r);
void to_json(Json& j, const StableClassReport& r);
void to_json(Json& j, const StabilizationReport& r);
void to_json(Json& j, const EpsilonXReport& r);
void to_json(Json& j, const ClassPartition& p);
void to_json(Json& j, const ShadowModulus& m);
void to_json(Json& j, const ShadowReport& r);
void to_json(Json& j, const ShadowResult& r);
void to_json(Json& j, const DecayEntry& e);
void to_json(Json& j, const LimitStage& s);
void to_json(Json& j, const LimitShadowResult& r);
void to_json(Json& j, const TwoSidedResult& r);

}  // namespace nexp
