#include "nexp/json_io.hpp"

#include <stdexcept>

namespace nexp {

namespace {

Json points_json(const std::vector<AugPoint>& pts) {
    Json arr = Json::array();
    for (const auto& p : pts) arr.push_back(p);
    return arr;
}

Json optional_index(const std::optional<std::int64_t>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

void to_json(Json& j, const Rat& r) { j = r.str(); }

void from_json(const Json& j, Rat& r) {
    if (!j.is_string()) throw std::invalid_argument("rational must be a \"p/q\" string");
    r = Rat::parse(j.get<std::string>());
}

void to_json(Json& j, const BiSeq& s) {
    j = Json{{"left", s.left()}, {"core", s.core()}, {"right", s.right()}, {"offset", s.offset()}};
}

void from_json(const Json& j, BiSeq& s) {
    s = BiSeq(j.at("left").get<std::string>(), j.at("core").get<std::string>(), j.at("right").get<std::string>(),
              j.at("offset").get<std::int64_t>());
}

void to_json(Json& j, const AugPoint& p) {
    if (p.is_base()) {
        j = Json{{"type", "base"}, {"seq", p.seq()}};
    } else {
        j = Json{{"type", "extra"}, {"i", p.q().i}, {"k", p.q().k}, {"j", p.q().j}};
    }
}

void from_json(const Json& j, AugPoint& p) {
    const auto type = j.at("type").get<std::string>();
    if (type == "base") {
        p = AugPoint::base(j.at("seq").get<BiSeq>());
    } else if (type == "extra") {
        p = AugPoint::extra(j.at("i").get<std::int64_t>(), j.at("k").get<std::int64_t>(),
                            j.at("j").get<std::int64_t>());
    } else {
        throw std::invalid_argument("unknown point type: " + type);
    }
}

void to_json(Json& j, const AugSystem& sys) {
    j = Json{{"n", sys.n}, {"variant", to_string(sys.variant)}, {"k_max", sys.k_max}};
}

void from_json(const Json& j, AugSystem& sys) {
    if (j.contains("n")) sys.n = j.at("n").get<std::int64_t>();
    if (j.contains("variant")) sys.variant = parse_variant(j.at("variant").get<std::string>());
    if (j.contains("k_max")) sys.k_max = j.at("k_max").get<std::int64_t>();
    sys.validate();
}

void to_json(Json& j, const ScheduleEntry& e) { j = Json{{"k", e.k}, {"bound", e.bound}}; }

void from_json(const Json& j, ScheduleEntry& e) {
    e.k = j.at("k").get<std::int64_t>();
    e.bound = j.at("bound").get<Rat>();
}

void to_json(Json& j, const PseudoOrbit& po) { j = Json{{"delta", po.delta}, {"points", points_json(po.points)}}; }

void from_json(const Json& j, PseudoOrbit& po) {
    po.delta = j.at("delta").get<Rat>();
    po.points = j.at("points").get<std::vector<AugPoint>>();
}

void to_json(Json& j, const LimitPseudoOrbit& lpo) {
    j = Json{{"schedule", lpo.schedule}, {"points", points_json(lpo.points)}};
}

void from_json(const Json& j, LimitPseudoOrbit& lpo) {
    lpo.schedule = j.at("schedule").get<std::vector<ScheduleEntry>>();
    lpo.points = j.at("points").get<std::vector<AugPoint>>();
}

void to_json(Json& j, const TwoSidedLimitPseudoOrbit& ts) {
    j = Json{{"half_width", ts.half_width},
             {"future", ts.future},
             {"past", ts.past},
             {"points", points_json(ts.points)}};
}

void from_json(const Json& j, TwoSidedLimitPseudoOrbit& ts) {
    ts.half_width = j.at("half_width").get<std::int64_t>();
    ts.future = j.at("future").get<std::vector<ScheduleEntry>>();
    ts.past = j.at("past").get<std::vector<ScheduleEntry>>();
    ts.points = j.at("points").get<std::vector<AugPoint>>();
}

void to_json(Json& j, const Exactness& e) {
    j = Json{{"mode", e.exact ? "exact" : "horizon"}, {"k_hi", e.k_hi}};
    if (!e.exact) j["horizon"] = e.horizon;
}

void to_json(Json& j, const DynamicBallReport& r) {
    Json members = Json::array();
    for (const auto& m : r.members) members.push_back(Json{{"point", m.point}, {"sup_distance", m.sup_distance}});
    j = Json{{"center", r.center},
             {"radius", r.radius},
             {"size", r.members.size()},
             {"members", members},
             {"exactness", r.exactness},
             {"universe", r.universe}};
}

void to_json(Json& j, const ExpansivityResult& r) {
    j = Json{{"certified", r.certified},
             {"level", r.level},
             {"constant", r.constant},
             {"centers_checked", r.centers_checked},
             {"max_ball_size", r.max_ball_size},
             {"universe", r.universe}};
    j["falsifier"] = r.falsifier ? Json(*r.falsifier) : Json(nullptr);
}

void to_json(Json& j, const StableClassReport& r) {
    Json classes = Json::array();
    for (const auto& cls : r.classes) classes.push_back(points_json(cls));
    j = Json{{"base_point", r.base_point},
             {"epsilon", r.epsilon},
             {"count", r.count},
             {"representatives", points_json(r.representatives)},
             {"classes", classes},
             {"universe", r.universe}};
}

void to_json(Json& j, const StabilizationReport& r) {
    j = Json{{"index", r.index}, {"value", r.value}, {"counts", r.counts}};
}

void to_json(Json& j, const EpsilonXReport& r) {
    Json seps = Json::array();
    for (const auto& [p, sep] : r.separations) seps.push_back(Json{{"point", p}, {"separation", sep}});
    j = Json{{"value", r.value}, {"stabilization", r.stabilization}, {"classes", r.classes}, {"separations", seps}};
}

void to_json(Json& j, const ClassPartition& p) {
    Json classes = Json::array();
    for (std::size_t i = 0; i < p.classes.size(); ++i) {
        classes.push_back(Json{{"members", p.classes[i]}, {"recurrent", static_cast<bool>(p.recurrent[i])}});
    }
    j = Json{{"epsilon", p.epsilon},
             {"class_count", p.classes.size()},
             {"recurrent_count", p.recurrent_count()},
             {"classes", classes}};
}

void to_json(Json& j, const ShadowModulus& m) {
    j = Json{{"eps", m.eps}, {"base_level", m.base_level}, {"m", m.m}, {"delta", m.delta}};
}

void to_json(Json& j, const ShadowReport& r) {
    j = Json{{"ok", r.ok}, {"worst_index", r.worst_index}, {"worst_distance", r.worst_distance}};
}

void to_json(Json& j, const ShadowResult& r) {
    j = Json{{"point", r.point}, {"self_shadow", r.self_shadow}, {"modulus", r.modulus}, {"report", r.report}};
}

void to_json(Json& j, const DecayEntry& e) { j = Json{{"threshold", e.threshold}, {"index", optional_index(e.index)}}; }

void to_json(Json& j, const LimitStage& s) {
    j = Json{{"j", s.j},
             {"k", s.k},
             {"resolution", s.resolution},
             {"delta", s.delta},
             {"pulled_back", s.pulled_back},
             {"in_local_stable", s.in_local_stable}};
}

void to_json(Json& j, const LimitShadowResult& r) {
    j = Json{{"point", r.point},
             {"decay", r.decay},
             {"stages", r.stages},
             {"stabilization", r.stabilization},
             {"candidates", points_json(r.candidates)}};
}

void to_json(Json& j, const TwoSidedResult& r) {
    j = Json{{"point", r.point},
             {"past_shadow", r.past_shadow},
             {"future_shadow", r.future_shadow},
             {"eps_past", r.eps_past},
             {"eps_future", r.eps_future},
             {"eps", r.eps},
             {"delta", r.delta},
             {"spacing", r.spacing},
             {"glue_index", r.glue_index},
             {"glue_guaranteed", r.glue_guaranteed},
             {"glue_report", r.glue_report},
             {"past_decay", r.past_decay},
             {"future_decay", r.future_decay},
             {"past_unstable", r.past_unstable},
             {"future_stable", r.future_stable}};
}

}  // namespace nexp
