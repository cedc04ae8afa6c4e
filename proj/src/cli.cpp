#include "nexp/cli.hpp"

#include "nexp/chain.hpp"
#include "nexp/expansivity.hpp"
#include "nexp/json_io.hpp"
#include "nexp/shadowing.hpp"
#include "nexp/workloads.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>

namespace nexp::cli {

namespace {

class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Flat parameter set: flags first, then the --config file on top.
class Config {
public:
    explicit Config(Json values) : values_(std::move(values)) {}

    const Json& json() const { return values_; }
    bool has(const std::string& key) const { return values_.contains(key); }

    std::int64_t integer(const std::string& key, std::int64_t fallback) {
        if (!has(key)) return record(key, Json(fallback)), fallback;
        const Json& v = values_[key];
        try {
            const auto parsed = v.is_number_integer() ? v.get<std::int64_t>() : std::stoll(v.get<std::string>());
            values_[key] = parsed;
            return parsed;
        } catch (const std::exception&) {
            throw InvalidInput("--" + key + ": expected an integer");
        }
    }

    std::uint64_t seed() {
        if (!has("seed")) throw InvalidInput("--seed is required for randomized samples");
        return static_cast<std::uint64_t>(integer("seed", 0));
    }

    Rat rational(const std::string& key, const Rat& fallback) {
        if (!has(key)) return record(key, Json(fallback)), fallback;
        try {
            const Json& v = values_[key];
            Rat r = v.is_number_integer() ? Rat(v.get<std::int64_t>()) : Rat::parse(v.get<std::string>());
            values_[key] = r;
            return r;
        } catch (const std::exception&) {
            throw InvalidInput("--" + key + ": expected a rational \"p/q\"");
        }
    }

    std::string text(const std::string& key, const std::string& fallback) {
        if (!has(key)) return record(key, Json(fallback)), fallback;
        return values_[key].get<std::string>();
    }

    AugPoint point(const std::string& key, const AugPoint& fallback) {
        if (!has(key)) return record(key, Json(fallback.text())), fallback;
        try {
            const Json& v = values_[key];
            return v.is_string() ? AugPoint::parse_text(v.get<std::string>()) : v.get<AugPoint>();
        } catch (const std::exception& e) {
            throw InvalidInput("--" + key + ": " + e.what());
        }
    }

    AugSystem system() {
        AugSystem sys;
        sys.n = integer("n", 2);
        sys.variant = parse_variant(text("variant", "standard"));
        sys.k_max = integer("k_max", 64);
        try {
            sys.validate();
        } catch (const std::exception& e) {
            throw InvalidInput(e.what());
        }
        return sys;
    }

private:
    void record(const std::string& key, Json v) { values_[key] = std::move(v); }
    Json values_;
};

struct Outcome {
    bool passed = true;
    Json checks = Json::object();
    Json result;
    std::optional<std::string> csv;

    void check(const std::string& name, bool ok) {
        checks[name] = ok;
        passed = passed && ok;
    }
};

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

template <class T>
T read_input(const std::string& path) {
    try {
        return read_json_file(path).get<T>();
    } catch (const InvalidInput&) {
        throw;
    } catch (const std::exception& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

std::vector<Rat> dyadic_thresholds(std::int64_t count) {
    std::vector<Rat> out;
    for (std::int64_t t = 1; t <= count; ++t) out.push_back(Rat::dyadic(t));
    return out;
}

bool all_achieved(const std::vector<DecayEntry>& decay) {
    return std::all_of(decay.begin(), decay.end(), [](const DecayEntry& e) { return e.index.has_value(); });
}

// --- commands ---------------------------------------------------------------

Outcome cmd_construct(Config& cfg, const AugSystem& sys) {
    const auto k_hi = cfg.integer("k_hi", 12);
    if (k_hi < 1 || k_hi > sys.k_max) throw InvalidInput("--k-hi must lie in [1, k_max]");
    Outcome o;
    const auto extras = enumerate_extra(sys, k_hi);
    o.check("count_matches_closed_form", static_cast<std::int64_t>(extras.size()) == extra_count(sys, k_hi));
    bool periodic = true, anchored = true;
    for (const auto& q : extras) {
        const auto k = q.q().k;
        periodic = periodic && aug_iterate(sys, q, k + 1) == q;
        anchored = anchored && aug_dist(sys, q, AugPoint::base(project(q))) == Rat(BigInt(1), BigInt(k));
    }
    o.check("extra_orbits_have_period_k_plus_1", periodic);
    o.check("extra_points_sit_at_1_over_k", anchored);
    Json per_k = Json::array();
    for (std::int64_t k = 1; k <= k_hi; ++k) per_k.push_back(Json{{"k", k}, {"orbits", sys.multiplicity(k)}});
    o.result = Json{{"extra_points", extras.size()}, {"orbits_per_k", per_k}};
    return o;
}

Outcome cmd_ball(Config& cfg, const AugSystem& sys) {
    const auto center = cfg.point("center", AugPoint::base(periodic_point(3)));
    const auto radius = cfg.rational("radius", Rat(BigInt(1), BigInt(3)));
    const auto k_hi = cfg.integer("k_hi", 12);
    const auto horizon = cfg.integer("horizon", 0);
    if (!sys.contains(center)) throw InvalidInput("--center: point outside the system");
    if (horizon == 0 && !(radius < Rat(BigInt(1), BigInt(2)))) {
        throw InvalidInput("--radius: exact mode needs radius < 1/2; pass --horizon for a bounded search");
    }
    const auto ball = dynamic_ball(sys, center, radius, k_hi, {}, horizon);
    Outcome o;
    o.check("center_is_member", std::any_of(ball.members.begin(), ball.members.end(),
                                            [&](const BallMember& m) { return m.point == center; }));
    if (radius <= Rat(BigInt(1), BigInt(4))) {
        o.check("at_most_n_members", static_cast<std::int64_t>(ball.members.size()) <= sys.n);
    }
    o.result = ball;
    return o;
}

std::vector<AugPoint> expansivity_sample(const AugSystem& sys, std::int64_t k_hi, std::uint64_t seed,
                                         std::int64_t random_count) {
    auto sample = construction_sample(sys, k_hi, std::min<std::int64_t>(k_hi, 12));
    const auto random = random_base_points(seed, static_cast<std::size_t>(random_count));
    sample.insert(sample.end(), random.begin(), random.end());
    for (std::int64_t k = 3; k <= 5; ++k) {
        const auto adv = structured_adversaries(sys, AugPoint::base(periodic_point(k)));
        sample.insert(sample.end(), adv.begin(), adv.end());
    }
    return deduplicate(std::move(sample));
}

Outcome cmd_expansivity(Config& cfg, const AugSystem& sys) {
    const auto c = cfg.rational("c", Rat(BigInt(1), BigInt(4)));
    const auto k_hi = cfg.integer("k_hi", 20);
    const auto seed = cfg.seed();
    const auto random_count = cfg.integer("samples", 200);
    if (!(c < Rat(BigInt(1), BigInt(2))) || c.is_zero()) throw InvalidInput("--c must lie in (0, 1/2)");
    if (k_hi > sys.k_max) throw InvalidInput("--k-hi exceeds k_max");
    const auto sample = expansivity_sample(sys, k_hi, seed, random_count);
    const auto cert = n_expansivity_check(sys, c, sample, k_hi);
    Outcome o;
    o.check("n_expansive_on_sample", cert.certified);
    Json result{{"sample_size", sample.size()}, {"certificate", cert}};
    if (sys.n >= 2) {
        const auto fals = falsify_expansivity(sys, sys.n - 1, c);
        o.check("n_minus_1_falsified", fals.has_value());
        result["falsifier"] = fals ? Json(*fals) : Json(nullptr);
    }
    o.result = result;
    return o;
}

Outcome cmd_shadow(Config& cfg, const AugSystem& sys) {
    const auto eps = cfg.rational("eps", Rat(BigInt(1), BigInt(4)));
    const auto mod = shadow_modulus(eps);
    std::vector<PseudoOrbit> orbits;
    if (cfg.has("input")) {
        orbits.push_back(read_input<PseudoOrbit>(cfg.text("input", "")));
    } else {
        std::mt19937_64 rng(cfg.seed());
        RandomPseudoOrbitConfig gen;
        gen.length = static_cast<std::size_t>(cfg.integer("length", 100));
        const auto count = cfg.integer("count", 20);
        for (std::int64_t i = 0; i < count; ++i) orbits.push_back(random_pseudo_orbit(sys, rng, gen));
    }
    Outcome o;
    Json runs = Json::array();
    bool all_ok = true;
    std::size_t self_shadowed = 0;
    for (const auto& po : orbits) {
        if (po.delta > mod.delta) {
            throw InvalidInput("pseudo-orbit delta " + po.delta.str() + " exceeds the modulus " + mod.delta.str());
        }
        try {
            const auto res = aug_shadow(sys, po, eps);
            all_ok = all_ok && res.report.ok;
            self_shadowed += res.self_shadow ? 1 : 0;
            runs.push_back(Json{{"length", po.points.size()}, {"self_shadow", res.self_shadow}, {"report", res.report}});
        } catch (const GapViolation& e) {
            throw InvalidInput(e.what());
        }
    }
    o.check("every_pseudo_orbit_shadowed", all_ok);
    o.check("modulus_inequality", eps / Rat(2) + mod.delta <= eps);
    o.result = Json{{"modulus", mod}, {"pseudo_orbits", orbits.size()}, {"self_shadowed", self_shadowed}, {"runs", runs}};
    return o;
}

Outcome cmd_classes(Config& cfg, const AugSystem& sys) {
    const auto k_hi = cfg.integer("k_hi", 12);
    const auto eps = cfg.rational("eps", Rat(BigInt(1), BigInt(2 * k_hi)));
    const auto threads = cfg.integer("threads", 1);
    if (k_hi < 1 || k_hi > sys.k_max) throw InvalidInput("--k-hi must lie in [1, k_max]");
    auto sample = construction_sample(sys, k_hi, k_hi);
    if (cfg.has("seed")) {
        const auto random = random_base_points(cfg.seed(), static_cast<std::size_t>(cfg.integer("samples", 50)));
        sample.insert(sample.end(), random.begin(), random.end());
    }
    sample = deduplicate(std::move(sample));
    const auto graph = build_chain_graph(sys, sample, eps, static_cast<unsigned>(std::max<std::int64_t>(1, threads)));
    const auto part = chain_classes(graph);

    // an extra orbit with 1/k > eps must be a class of its own
    std::size_t expected = 0, isolated = 0;
    for (std::int64_t k = 1; k <= k_hi; ++k) {
        if (!(eps < Rat(BigInt(1), BigInt(k)))) continue;
        for (std::int64_t i = 1; i <= sys.multiplicity(k); ++i) {
            ++expected;
            std::vector<std::uint32_t> orbit;
            for (std::uint32_t v = 0; v < graph.nodes.size(); ++v) {
                const auto& p = graph.nodes[v];
                if (p.is_extra() && p.q().i == i && p.q().k == k) orbit.push_back(v);
            }
            if (std::find(part.classes.begin(), part.classes.end(), orbit) != part.classes.end()) ++isolated;
        }
    }
    Outcome o;
    o.check("extra_orbits_are_classes", isolated == expected);
    o.result = Json{{"nodes", graph.nodes.size()},
                    {"edges", graph.edge_count()},
                    {"extra_orbit_classes", isolated},
                    {"expected_extra_orbit_classes", expected},
                    {"partition", part}};
    if (cfg.has("csv")) o.csv = edge_list_csv(graph);
    return o;
}

Outcome cmd_stable_count(Config& cfg, const AugSystem& sys) {
    const auto eps = cfg.rational("eps", Rat(BigInt(1), BigInt(4)));
    const auto k_hi = cfg.integer("k_hi", 12);
    if (!(eps < Rat(BigInt(1), BigInt(2))) || eps.is_zero()) throw InvalidInput("--eps must lie in (0, 1/2)");
    std::vector<AugPoint> centers;
    if (cfg.has("center")) {
        centers.push_back(cfg.point("center", AugPoint()));
    } else {
        centers = construction_sample(sys, std::min<std::int64_t>(k_hi, 8), 8);
        const auto random = random_base_points(cfg.seed(), static_cast<std::size_t>(cfg.integer("samples", 50)));
        centers.insert(centers.end(), random.begin(), random.end());
    }
    Outcome o;
    Json reports = Json::array();
    bool bounded = true, monotone = true;
    for (const auto& x : centers) {
        if (!sys.contains(x)) throw InvalidInput("center outside the system: " + x.text());
        const auto here = stable_count(sys, x, eps, k_hi);
        const auto next = stable_count(sys, aug_map(sys, x), eps, k_hi);
        bounded = bounded && here.count <= sys.n;
        monotone = monotone && here.count <= next.count;
        reports.push_back(centers.size() == 1 ? Json(here) : Json{{"point", x}, {"count", here.count}});
    }
    if (sys.variant == Variant::standard) o.check("count_at_most_n", bounded);
    o.check("count_nondecreasing_along_orbit", monotone);
    o.result = Json{{"centers", centers.size()}, {"reports", reports}};
    return o;
}

Outcome cmd_local_stable(Config& cfg, const AugSystem& sys) {
    const auto center = cfg.point("center", AugPoint::base(periodic_point(3)));
    const auto eps = cfg.rational("eps", Rat(BigInt(1), BigInt(3)));
    const auto k_hi = cfg.integer("k_hi", 12);
    const auto window = cfg.integer("window", 8);
    if (!sys.contains(center)) throw InvalidInput("--center: point outside the system");
    if (!(eps < Rat(BigInt(1), BigInt(2))) || eps.is_zero()) throw InvalidInput("--eps must lie in (0, 1/2)");
    const auto ex = epsilon_x(sys, center, eps, k_hi);
    const auto check = check_local_stable_inclusion(sys, center, ex.value, -window, window, k_hi);
    Outcome o;
    o.check("local_stable_inclusion", check.holds);
    o.result = Json{{"epsilon_x", ex}, {"window", window}};
    if (!check.holds) o.result["failure"] = Json{{"m", *check.failing_m}, {"witness", *check.witness}};
    return o;
}

LimitShadowOptions limit_options(Config& cfg, std::int64_t default_thresholds) {
    LimitShadowOptions opt;
    opt.eps = cfg.rational("eps", opt.eps);
    opt.k_hi = cfg.integer("k_hi", opt.k_hi);
    opt.thresholds = dyadic_thresholds(cfg.integer("thresholds", default_thresholds));
    return opt;
}

Outcome cmd_limit_shadow(Config& cfg, const AugSystem& sys) {
    auto opt = limit_options(cfg, 5);
    LimitPseudoOrbit lpo;
    if (cfg.has("input")) {
        lpo = read_input<LimitPseudoOrbit>(cfg.text("input", ""));
    } else {
        lpo = switching_limit_pseudo_orbit(BiSeq::periodic("0011"), BiSeq::periodic("011"),
                                           cfg.integer("prefix_exp", 11));
    }
    try {
        validate_limit_pseudo_orbit(sys, lpo);
    } catch (const std::invalid_argument& e) {
        throw InvalidInput(e.what());
    }
    Outcome o;
    const auto res = limit_shadow(sys, lpo, opt);
    o.check("decay_thresholds_achieved", all_achieved(res.decay));
    o.result = Json{{"prefix", lpo.points.size()}, {"shadow", res}};
    return o;
}

Outcome cmd_two_sided(Config& cfg, const AugSystem& sys) {
    auto opt = limit_options(cfg, 4);
    TwoSidedLimitPseudoOrbit ts;
    if (cfg.has("input")) {
        ts = read_input<TwoSidedLimitPseudoOrbit>(cfg.text("input", ""));
    } else {
        const BiSeq target = splice(periodic_point(2), 0, "", BiSeq::periodic("011"), 0);
        ts = perturbed_two_sided(target, cfg.integer("half_width", 512));
    }
    try {
        validate_two_sided(sys, ts);
    } catch (const std::invalid_argument& e) {
        throw InvalidInput(e.what());
    }
    Outcome o;
    const auto res = two_sided_limit_shadow(sys, ts, opt);
    o.check("future_decay_achieved", all_achieved(res.future_decay));
    o.check("past_decay_achieved", all_achieved(res.past_decay));
    o.check("glue_verified", res.glue_report.ok);
    o.check("tails_equivalent", res.past_unstable && res.future_stable);
    o.result = res;
    return o;
}

Outcome cmd_metric_axioms(Config& cfg, const AugSystem& sys) {
    const auto triples = cfg.integer("triples", 100000);
    const auto k_hi = std::min(cfg.integer("k_hi", 12), sys.k_max);
    std::mt19937_64 rng(cfg.seed());
    auto pool = construction_sample(sys, k_hi, k_hi);
    const auto random = random_base_points(rng(), 200);
    pool.insert(pool.end(), random.begin(), random.end());
    pool = deduplicate(std::move(pool));
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::int64_t triangle = 0, symmetry = 0, identity = 0;
    for (std::int64_t t = 0; t < triples; ++t) {
        const auto& x = pool[pick(rng)];
        const auto& y = pool[pick(rng)];
        const auto& z = pool[pick(rng)];
        const auto dxy = aug_dist(sys, x, y);
        if (aug_dist(sys, x, z) > dxy + aug_dist(sys, y, z)) ++triangle;
        if (!(dxy == aug_dist(sys, y, x))) ++symmetry;
        if (dxy.is_zero() != (x == y)) ++identity;
    }
    Outcome o;
    o.check("triangle_inequality", triangle == 0);
    o.check("symmetry", symmetry == 0);
    o.check("identity_of_indiscernibles", identity == 0);
    o.result = Json{{"pool_size", pool.size()},
                    {"triples", triples},
                    {"failures", {{"triangle", triangle}, {"symmetry", symmetry}, {"identity", identity}}}};
    return o;
}

using Command = Outcome (*)(Config&, const AugSystem&);

const std::map<std::string, std::pair<Command, std::string>>& commands() {
    static const std::map<std::string, std::pair<Command, std::string>> table{
        {"construct", {cmd_construct, "enumerate the extra points and check their anchoring"}},
        {"ball", {cmd_ball, "dynamic ball around a point"}},
        {"expansivity", {cmd_expansivity, "certify n-expansivity and falsify (n-1)-expansivity"}},
        {"shadow", {cmd_shadow, "shadow pseudo-orbits with the augmented modulus"}},
        {"classes", {cmd_classes, "chain-recurrent classes of a sample"}},
        {"stable-count", {cmd_stable_count, "stable-set class counts n(x, eps)"}},
        {"theorem-a", {cmd_local_stable, "local stable constant along an orbit"}},
        {"limit-shadow", {cmd_limit_shadow, "limit shadowing of a one-sided pseudo-orbit"}},
        {"two-sided", {cmd_two_sided, "two-sided limit shadowing through specification gluing"}},
        {"metric-axioms", {cmd_metric_axioms, "random metric axiom checks"}},
    };
    return table;
}

std::string exactness_of(const std::string& command, const Json& result) {
    if (command == "ball" && result.contains("exactness")) return result["exactness"]["mode"].get<std::string>();
    if (command == "metric-axioms") return "exact (sampled triples)";
    return "exact";
}

std::string universe_of(const Json& result) {
    if (!result.is_object()) return "n/a";
    if (result.contains("universe")) return result["universe"].get<std::string>();
    if (result.contains("certificate")) return result["certificate"]["universe"].get<std::string>();
    if (result.contains("epsilon_x")) return result["epsilon_x"]["classes"]["universe"].get<std::string>();
    return "n/a";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact experiments on an n-expansive system with shadowing over the full 2-shift", "nexp"};
    app.require_subcommand(1);
    std::map<std::string, std::string> flags;
    bool csv = false;
    struct Flag {
        const char* name;
        const char* key;
        const char* help;
    };
    static const Flag flag_table[] = {
        {"--n", "n", "number of points per dynamic ball"},
        {"--variant", "variant", "standard | finite_expansive"},
        {"--k-max", "k_max", "largest k carrying extra orbits"},
        {"--k-hi", "k_hi", "largest k enumerated into samples and universes"},
        {"--c", "c", "expansivity constant"},
        {"--eps", "eps", "epsilon"},
        {"--radius", "radius", "ball radius"},
        {"--center", "center", "point in text form, e.g. extra:1,5,0 or base:0|1|0@0"},
        {"--seed", "seed", "RNG seed"},
        {"--samples", "samples", "random base points in the sample"},
        {"--count", "count", "number of random pseudo-orbits"},
        {"--length", "length", "pseudo-orbit length"},
        {"--horizon", "horizon", "bounded-horizon mode for balls"},
        {"--threads", "threads", "worker threads for graph construction"},
        {"--window", "window", "orbit window for the local stable check"},
        {"--prefix-exp", "prefix_exp", "limit pseudo-orbit prefix length 2^e"},
        {"--half-width", "half_width", "two-sided window [-T, T]"},
        {"--thresholds", "thresholds", "decay thresholds 2^-1 .. 2^-t"},
        {"--triples", "triples", "metric triples"},
        {"--input", "input", "pseudo-orbit JSON file"},
        {"--config", "config", "JSON config overriding flags"},
        {"--out", "out", "directory for report files"},
    };
    for (const auto& [name, entry] : commands()) {
        auto* sub = app.add_subcommand(name, entry.second);
        for (const auto& f : flag_table) sub->add_option(f.name, flags[f.key], f.help);
        sub->add_flag("--csv", csv, "also write the edge list as CSV");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_invalid_input;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        Json values = Json::object();
        for (const auto& [key, value] : flags) {
            if (!value.empty() && key != "config" && key != "out") values[key] = value;
        }
        if (csv) values["csv"] = true;
        if (!flags["config"].empty()) {
            Json file = read_json_file(flags["config"]);
            if (!file.is_object()) throw InvalidInput("--config: expected a JSON object");
            if (file.contains("system")) {
                for (auto& [k, v] : file["system"].items()) values[k] = v;
                file.erase("system");
            }
            values.merge_patch(file);
        }
        Config cfg(std::move(values));
        const AugSystem sys = cfg.system();
        Outcome outcome;
        try {
            outcome = commands().at(command).first(cfg, sys);
        } catch (const InvalidInput&) {
            throw;
        } catch (const GapViolation& e) {
            throw InvalidInput(e.what());
        } catch (const LimitShadowFailure& e) {
            outcome.check("engine_completed", false);
            outcome.result = Json{{"error", e.what()}};
        } catch (const StabilizationError& e) {
            outcome.check("engine_completed", false);
            outcome.result = Json{{"error", e.what()}};
        }

        Json config = cfg.json();
        config.erase("n");
        config.erase("variant");
        config.erase("k_max");
        config["system"] = sys;
        Json report{{"command", command},
                    {"config", config},
                    {"exactness", exactness_of(command, outcome.result)},
                    {"universe", universe_of(outcome.result)},
                    {"checks", outcome.checks},
                    {"passed", outcome.passed},
                    {"result", outcome.result}};
        const std::string text = report.dump(2) + "\n";
        out << text;
        if (!flags["out"].empty()) {
            namespace fs = std::filesystem;
            const fs::path dir(flags["out"]);
            fs::create_directories(dir);
            std::ofstream(dir / (command + ".json")) << text;
            if (outcome.csv) std::ofstream(dir / (command + "_edges.csv")) << *outcome.csv;
        }
        return outcome.passed ? exit_ok : exit_check_failed;
    } catch (const InvalidInput& e) {
        err << "invalid input: " << e.what() << "\n";
        return exit_invalid_input;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << "\n";
        return exit_invalid_input;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_check_failed;
    }
}

}  // namespace nexp::cli
