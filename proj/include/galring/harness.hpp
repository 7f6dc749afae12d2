#ifndef GALRING_HARNESS_HPP
#define GALRING_HARNESS_HPP

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "bounds.hpp"
#include "config_count.hpp"
#include "error.hpp"
#include "io.hpp"
#include "ring.hpp"
#include "sampling.hpp"
#include "suites.hpp"

namespace galring {

using Json = nlohmann::ordered_json;

enum class OutputFormat { Csv, Json };

inline OutputFormat parse_format(std::string_view s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    fail(ErrorCode::ParseError, "format must be csv or json");
}

/// Rings run by `selftest` when the config names none.
inline const std::vector<std::string>& default_selftest_rings() {
    static const std::vector<std::string> rings = {
        "p=2 e=2 k=1",  // Z_4
        "p=2 e=3 k=1",  // Z_8
        "p=3 e=2 k=1",  // Z_9
        "p=2 e=2 k=2",  // GR(4,2)
        "p=2 e=1 k=3",  // F_8
        "p=3 e=2 k=2",  // GR(9,2)
    };
    return rings;
}

inline constexpr u64 kDefaultSelftestCap = 4096;

/// One job, read from a JSON document. Which fields are meaningful depends on
/// the task; unknown keys are rejected at parse time.
struct JobConfig {
    std::string task;
    std::optional<std::string> ring;
    std::optional<unsigned> d;
    std::optional<u64> seed;
    u64 budget = kDefaultWorkBudget;
    std::filesystem::path base_dir = ".";

    // selftest, verify-identities
    std::optional<std::vector<std::string>> rings;
    std::optional<u64> all_rings_up_to;
    u64 cap = kDefaultSelftestCap;
    std::vector<std::string> identities{"orthogonality", "unit-sum", "ideal-reduction"};

    // count
    std::string kind;
    std::optional<std::string> points;
    bool full = false;
    std::optional<std::string> t, alpha, beta;
    std::vector<std::string> alphas, b;
    std::optional<std::string> forest;
    bool distinct = false;
    std::optional<std::string> theorem;

    // bounds
    std::vector<std::string> theorems{"single"};
    std::vector<u64> p_grid, e_grid, k_grid, d_grid, n_grid;

    // census
    std::vector<u64> sizes;
    u64 samples = 1;
    bool spot_check = true;

    std::filesystem::path resolve(const std::string& path) const {
        const std::filesystem::path p(path);
        return p.is_absolute() ? p : base_dir / p;
    }
};

namespace harness_detail {

/// An integer, a list of integers, or an inclusive range string "a..b".
inline std::vector<u64> grid_values(const Json& v, const std::string& key) {
    std::vector<u64> out;
    if (v.is_number_unsigned()) {
        out.push_back(v.get<u64>());
    } else if (v.is_array()) {
        for (const auto& x : v) {
            if (!x.is_number_unsigned()) fail(ErrorCode::ParseError, key + " entries must be nonnegative integers");
            out.push_back(x.get<u64>());
        }
    } else if (v.is_string()) {
        const std::string s = v.get<std::string>();
        const auto dots = s.find("..");
        try {
            if (dots == std::string::npos) fail(ErrorCode::ParseError, key + ": expected a range 'a..b'");
            std::size_t used = 0;
            const u64 lo = std::stoull(s.substr(0, dots), &used);
            if (used != dots) fail(ErrorCode::ParseError, key + ": bad range start");
            const std::string rest = s.substr(dots + 2);
            const u64 hi = std::stoull(rest, &used);
            if (used != rest.size() || lo > hi || hi - lo > 100000) fail(ErrorCode::ParseError, key + ": bad range");
            for (u64 x = lo; x <= hi; ++x) out.push_back(x);
        } catch (const std::logic_error&) {
            fail(ErrorCode::ParseError, key + ": malformed range '" + s + "'");
        }
    } else {
        fail(ErrorCode::ParseError, key + " must be an integer, a list or a range string");
    }
    return out;
}

inline std::vector<std::string> string_list(const Json& v, const std::string& key) {
    if (!v.is_array()) fail(ErrorCode::ParseError, key + " must be a list of strings");
    std::vector<std::string> out;
    for (const auto& x : v) {
        if (!x.is_string()) fail(ErrorCode::ParseError, key + " entries must be strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

template <class T>
T get_as(const Json& v, const std::string& key) {
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception&) {
        fail(ErrorCode::ParseError, "bad value for '" + key + "'");
    }
}

inline std::string format_fixed(double v, int places) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", places, v);
    return buf;
}

}  // namespace harness_detail

inline const std::vector<std::string>& known_tasks() {
    static const std::vector<std::string> tasks = {"selftest", "count", "bounds", "census", "verify-identities"};
    return tasks;
}

inline JobConfig parse_job(const Json& doc, const std::filesystem::path& base_dir = ".") {
    using namespace harness_detail;
    if (!doc.is_object()) fail(ErrorCode::ParseError, "job config must be a JSON object");
    JobConfig cfg;
    cfg.base_dir = base_dir;
    if (!doc.contains("task")) fail(ErrorCode::ParseError, "job config needs a 'task'");
    cfg.task = get_as<std::string>(doc.at("task"), "task");
    if (std::find(known_tasks().begin(), known_tasks().end(), cfg.task) == known_tasks().end())
        fail(ErrorCode::ParseError, "unknown task '" + cfg.task + "'");

    static const std::map<std::string, std::set<std::string>> allowed = {
        {"selftest", {"rings", "cap"}},
        {"verify-identities", {"rings", "all_rings_up_to", "cap", "identities"}},
        {"count", {"kind", "points", "full", "t", "alpha", "beta", "alphas", "b", "forest", "distinct", "theorem"}},
        {"bounds", {"theorems", "p", "e", "k", "n"}},
        {"census", {"sizes", "samples", "spot_check"}},
    };
    const auto& extra = allowed.at(cfg.task);
    for (const auto& [key, value] : doc.items()) {
        if (key == "task") continue;
        if (key == "ring") {
            cfg.ring = get_as<std::string>(value, key);
        } else if (key == "d") {
            if (cfg.task == "bounds") cfg.d_grid = grid_values(value, key);
            else cfg.d = get_as<unsigned>(value, key);
        } else if (key == "seed") {
            cfg.seed = get_as<u64>(value, key);
        } else if (key == "budget") {
            cfg.budget = get_as<u64>(value, key);
        } else if (!extra.count(key)) {
            fail(ErrorCode::ParseError, "unknown key '" + key + "' for task " + cfg.task);
        } else if (key == "rings") {
            cfg.rings = string_list(value, key);
        } else if (key == "all_rings_up_to") {
            cfg.all_rings_up_to = get_as<u64>(value, key);
        } else if (key == "cap") {
            cfg.cap = get_as<u64>(value, key);
        } else if (key == "identities") {
            cfg.identities = string_list(value, key);
        } else if (key == "kind") {
            cfg.kind = get_as<std::string>(value, key);
        } else if (key == "points") {
            cfg.points = get_as<std::string>(value, key);
        } else if (key == "full") {
            cfg.full = get_as<bool>(value, key);
        } else if (key == "t") {
            cfg.t = get_as<std::string>(value, key);
        } else if (key == "alpha") {
            cfg.alpha = get_as<std::string>(value, key);
        } else if (key == "beta") {
            cfg.beta = get_as<std::string>(value, key);
        } else if (key == "alphas") {
            cfg.alphas = string_list(value, key);
        } else if (key == "b") {
            cfg.b = string_list(value, key);
        } else if (key == "forest") {
            cfg.forest = get_as<std::string>(value, key);
        } else if (key == "distinct") {
            cfg.distinct = get_as<bool>(value, key);
        } else if (key == "theorem") {
            cfg.theorem = get_as<std::string>(value, key);
        } else if (key == "theorems") {
            cfg.theorems = string_list(value, key);
        } else if (key == "p") {
            cfg.p_grid = grid_values(value, key);
        } else if (key == "e") {
            cfg.e_grid = grid_values(value, key);
        } else if (key == "k") {
            cfg.k_grid = grid_values(value, key);
        } else if (key == "n") {
            cfg.n_grid = grid_values(value, key);
        } else if (key == "sizes") {
            cfg.sizes = grid_values(value, key);
        } else if (key == "samples") {
            cfg.samples = get_as<u64>(value, key);
        } else if (key == "spot_check") {
            cfg.spot_check = get_as<bool>(value, key);
        }
    }
    if (cfg.task == "census" && !cfg.seed) fail(ErrorCode::ParseError, "census needs a seed");
    return cfg;
}

inline JobConfig parse_job_text(const std::string& text, const std::filesystem::path& base_dir = ".") {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        fail(ErrorCode::ParseError, std::string("config is not valid JSON: ") + err.what());
    }
    return parse_job(doc, base_dir);
}

inline JobConfig load_job(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::ParseError, "cannot open config '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_job_text(ss.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

/// Rendered output plus whether every check in the job passed.
struct JobOutput {
    std::string text;
    bool ok = true;
    std::vector<std::string> warnings;
};

// ---- selftest / verify-identities -------------------------------------

struct RingSuiteRow {
    std::string ring;
    SuiteResult result;
};

inline std::string render_suite_rows(const std::vector<RingSuiteRow>& rows, const std::vector<std::string>& warnings,
                                     bool ok, OutputFormat fmt) {
    if (fmt == OutputFormat::Csv) {
        std::string out = csv_row({"ring", "suite", "status", "cases", "failures", "detail"});
        for (const auto& r : rows)
            out += csv_row({r.ring, r.result.suite, std::string(to_string(r.result.status)), std::to_string(r.result.cases),
                            std::to_string(r.result.failures), r.result.detail});
        return out;
    }
    Json doc;
    doc["ok"] = ok;
    doc["warnings"] = warnings;
    Json results = Json::array();
    for (const auto& r : rows)
        results.push_back({{"ring", r.ring},
                           {"suite", r.result.suite},
                           {"status", std::string(to_string(r.result.status))},
                           {"cases", r.result.cases},
                           {"failures", r.result.failures},
                           {"detail", r.result.detail}});
    doc["results"] = results;
    return doc.dump(2) + "\n";
}

/// Ring construction failures become failed rows rather than aborting the run.
inline std::optional<GaloisRing> build_for_suite(const std::string& desc, u64 cap, std::vector<RingSuiteRow>& rows) {
    GaloisRing ring = [&]() -> GaloisRing {
        try {
            return GaloisRing::parse(desc);
        } catch (const Error& err) {
            SuiteResult r;
            r.suite = "construct";
            r.status = Status::Fail;
            r.cases = 1;
            r.failures = 1;
            r.detail = err.what();
            rows.push_back({desc, r});
            throw;
        }
    }();
    const auto q = ring.size();
    if (!q || *q > cap)
        fail(ErrorCode::CapExceeded, "ring " + ring.descriptor() + " exceeds the self-test cap of " + std::to_string(cap));
    return ring;
}

inline JobOutput run_selftest(const JobConfig& cfg, OutputFormat fmt = OutputFormat::Csv) {
    const std::vector<std::string> rings = cfg.rings.value_or(default_selftest_rings());
    JobOutput out;
    std::vector<RingSuiteRow> rows;
    if (rings.empty()) out.warnings.push_back("empty ring list; nothing to test");
    for (const auto& desc : rings) {
        std::optional<GaloisRing> ring;
        try {
            ring = build_for_suite(desc, cfg.cap, rows);
        } catch (const Error& err) {
            if (err.code() == ErrorCode::CapExceeded) throw;
            out.ok = false;
            continue;
        }
        for (auto& r : run_ring_suites(*ring, cfg.seed.value_or(0))) {
            if (r.status == Status::Fail) out.ok = false;
            rows.push_back({ring->descriptor(), std::move(r)});
        }
    }
    out.text = render_suite_rows(rows, out.warnings, out.ok, fmt);
    return out;
}

inline JobOutput run_verify_identities(const JobConfig& cfg, OutputFormat fmt = OutputFormat::Csv) {
    std::vector<std::string> rings;
    if (cfg.rings) rings = *cfg.rings;
    if (cfg.all_rings_up_to) {
        for (const auto& d : small_rings(*cfg.all_rings_up_to))
            rings.push_back("p=" + std::to_string(d.p) + " e=" + std::to_string(d.e) + " k=" + std::to_string(d.k));
    }
    if (!cfg.rings && !cfg.all_rings_up_to) rings = default_selftest_rings();
    const u64 cap = cfg.all_rings_up_to ? std::max(cfg.cap, *cfg.all_rings_up_to) : cfg.cap;

    JobOutput out;
    std::vector<RingSuiteRow> rows;
    if (rings.empty()) out.warnings.push_back("empty ring list; nothing to verify");
    for (const auto& name : cfg.identities)
        if (name != "orthogonality" && name != "unit-sum" && name != "ideal-reduction")
            fail(ErrorCode::ParseError, "unknown identity '" + name + "'");
    for (const auto& desc : rings) {
        std::optional<GaloisRing> ring;
        try {
            ring = build_for_suite(desc, cap, rows);
        } catch (const Error& err) {
            if (err.code() == ErrorCode::CapExceeded) throw;
            out.ok = false;
            continue;
        }
        for (const auto& name : cfg.identities) {
            SuiteResult r = name == "orthogonality" ? suite_orthogonality(*ring)
                            : name == "unit-sum"    ? suite_unit_sum(*ring)
                                                    : suite_ideal_reduction(*ring);
            if (r.status == Status::Fail) out.ok = false;
            rows.push_back({ring->descriptor(), std::move(r)});
        }
    }
    out.text = render_suite_rows(rows, out.warnings, out.ok, fmt);
    return out;
}

// ---- count ------------------------------------------------------------

inline std::string rational_string(const mpq_class& q) { return q.get_str(); }

inline Json bound_report_json(const BoundReport& rep) {
    return Json{{"theorem", std::string(theorem_name(rep.theorem))},
                {"p", rep.params.p},
                {"e", rep.params.e},
                {"k", rep.params.k},
                {"d", rep.params.d},
                {"n", rep.params.n},
                {"threshold", rep.threshold.to_string()},
                {"threshold_log_p", harness_detail::format_fixed(rep.threshold_log_p, 6)},
                {"set_size", rep.set_size.get_str()},
                {"in_hypothesis", rep.in_hypothesis},
                {"premise_satisfied", rep.premise_satisfied},
                {"premise_satisfiable", rep.premise_satisfiable},
                {"conclusion", rational_string(rep.conclusion)},
                {"literal_conclusion", rep.literal_conclusion ? Json(rational_string(*rep.literal_conclusion)) : Json()},
                {"observed", rep.observed.get_str()},
                {"holds", rep.holds},
                {"holds_literal", rep.holds_literal ? Json(*rep.holds_literal) : Json()},
                {"vacuous", rep.vacuous}};
}

inline JobOutput run_count(const JobConfig& cfg, OutputFormat fmt = OutputFormat::Json) {
    // point set: a file, or the whole of R^d
    std::optional<PointSet> loaded;
    if (cfg.points && cfg.full) fail(ErrorCode::ParseError, "give either 'points' or 'full', not both");
    if (cfg.points) {
        loaded = load_point_set(cfg.resolve(*cfg.points).string());
        if (cfg.ring && !(GaloisRing::parse(*cfg.ring) == loaded->ring()))
            fail(ErrorCode::RingMismatch, "config ring differs from the point-set header");
        if (cfg.d && *cfg.d != loaded->dim()) fail(ErrorCode::DimensionMismatch, "config d differs from the point-set file");
    } else if (cfg.full) {
        if (!cfg.ring || !cfg.d) fail(ErrorCode::ParseError, "'full' needs 'ring' and 'd'");
        const GaloisRing ring = GaloisRing::parse(*cfg.ring);
        const auto total = space_size(ring, *cfg.d);
        if (!total || *total > cfg.budget) fail(ErrorCode::WorkBudgetExceeded, "R^d is larger than the work budget");
        loaded = PointSet::full(ring, *cfg.d);
    } else {
        fail(ErrorCode::ParseError, "count needs 'points' or 'full'");
    }
    const PointSet& E = *loaded;
    const GaloisRing& ring = E.ring();
    const u128 n = E.size();
    auto elem = [&](const std::optional<std::string>& s, const char* key) {
        if (!s) fail(ErrorCode::ParseError, std::string("count kind '") + cfg.kind + "' needs '" + key + "'");
        return ring.parse_element(*s);
    };
    auto elems = [&](const std::vector<std::string>& v) {
        std::vector<Element> out;
        for (const auto& s : v) out.push_back(ring.parse_element(s));
        return out;
    };
    auto pairwise_budget = [&] {
        if (n * n > cfg.budget) fail(ErrorCode::WorkBudgetExceeded, "|E|^2 dot products exceed the work budget");
    };

    Json doc;
    doc["task"] = "count";
    doc["kind"] = cfg.kind;
    doc["ring"] = ring.descriptor();
    doc["d"] = E.dim();
    doc["set_size"] = E.size();
    doc["budget"] = cfg.budget;
    Json params = Json::object();
    Count result = 0;
    ConfigParams bound_params;
    std::optional<Theorem> natural;
    std::string forest_echo;

    if (cfg.kind == "nu") {
        pairwise_budget();
        const Element t = elem(cfg.t, "t");
        params["t"] = ring.format(t);
        result = to_mpz(nu_table(DotTable(E), t));
        bound_params.t = t;
        natural = Theorem::SingleDot;
    } else if (cfg.kind == "nu-decomposition") {
        const Element t = elem(cfg.t, "t");
        params["t"] = ring.format(t);
        const auto dec = nu_char_decomposition(E, t, cfg.budget);
        Json layers = Json::array();
        for (const auto& l : dec.layers) layers.push_back(rational_string(l));
        doc["layers"] = layers;
        doc["discrepancy"] = rational_string(dec.discrepancy);
        if (dec.reconstructed.get_den() != 1) fail(ErrorCode::InternalError, "layers do not sum to an integer");
        result = dec.reconstructed.get_num();
    } else if (cfg.kind == "pair") {
        pairwise_budget();
        const Element a = elem(cfg.alpha, "alpha"), b = elem(cfg.beta, "beta");
        params["alpha"] = ring.format(a);
        params["beta"] = ring.format(b);
        result = pi_pair(E, a, b);
        bound_params.alpha = a;
        bound_params.beta = b;
        natural = Theorem::Pair;
    } else if (cfg.kind == "forest") {
        pairwise_budget();
        if (!cfg.forest) fail(ErrorCode::ParseError, "count kind 'forest' needs 'forest'");
        const ForestSpec forest = load_forest(cfg.resolve(*cfg.forest).string(), ring);
        forest_echo = write_forest(ring, forest);
        params["distinct"] = cfg.distinct;
        result = pi_forest(E, forest, cfg.distinct, cfg.budget);
        bound_params.forest = forest;
        natural = Theorem::Forest;
    } else if (cfg.kind == "chain" || cfg.kind == "star") {
        pairwise_budget();
        const auto alphas = elems(cfg.alphas);
        Json a = Json::array();
        for (const auto& x : alphas) a.push_back(ring.format(x));
        params["alphas"] = a;
        params["distinct"] = cfg.distinct;
        const ForestSpec forest = cfg.kind == "chain" ? ForestSpec::path(alphas) : ForestSpec::star(alphas);
        if (alphas.empty()) fail(ErrorCode::IndexOutOfRange, "alphas must not be empty");
        forest_echo = write_forest(ring, forest);
        result = cfg.kind == "chain" ? k_chain(E, alphas, cfg.distinct, cfg.budget) : star(E, alphas, cfg.distinct, cfg.budget);
        bound_params.forest = forest;
        natural = Theorem::Forest;
    } else if (cfg.kind == "matrix") {
        pairwise_budget();
        const auto b = elems(cfg.b);
        Json bj = Json::array();
        for (const auto& x : b) bj.push_back(ring.format(x));
        params["b"] = bj;
        result = matrix_solutions(E, b);
        bound_params.b = b;
        natural = Theorem::Matrix;
    } else {
        fail(ErrorCode::ParseError, "unknown count kind '" + cfg.kind + "'");
    }
    doc["params"] = params;
    doc["count"] = result.get_str();
    if (cfg.theorem) {
        const Theorem th = parse_theorem(*cfg.theorem);
        if (!natural) fail(ErrorCode::ParseError, "no theorem applies to count kind '" + cfg.kind + "'");
        doc["bound"] = bound_report_json(check_conclusion(E, th, bound_params, cfg.budget));
    }
    doc["point_set"] = write_point_set(E);
    if (!forest_echo.empty()) doc["forest"] = forest_echo;

    JobOutput out;
    if (fmt == OutputFormat::Json) {
        out.text = doc.dump(2) + "\n";
    } else {
        out.text = csv_row({"field", "value"});
        for (const auto& [key, value] : doc.items())
            out.text += csv_row({key, value.is_string() ? value.get<std::string>() : value.dump()});
    }
    return out;
}

// ---- bounds -----------------------------------------------------------

struct BoundsRow {
    Theorem theorem;
    u64 p;
    unsigned e, k, d;
    std::optional<unsigned> n;
    std::optional<double> threshold_log_p;  // absent where the threshold is undefined
    double space_log_p;
    std::optional<unsigned> nontrivial_d;
    bool vacuous;
};

inline bool uses_edge_count(Theorem th) {
    return th == Theorem::Forest || th == Theorem::ForestReduced || th == Theorem::Matrix;
}

inline std::vector<BoundsRow> bounds_table(const JobConfig& cfg) {
    if (cfg.p_grid.empty() || cfg.e_grid.empty() || cfg.k_grid.empty() || cfg.d_grid.empty())
        fail(ErrorCode::ParseError, "bounds needs p, e, k and d");
    std::vector<BoundsRow> rows;
    for (const auto& name : cfg.theorems) {
        const Theorem th = parse_theorem(name);
        std::vector<std::optional<unsigned>> ns;
        if (uses_edge_count(th)) {
            if (cfg.n_grid.empty()) fail(ErrorCode::ParseError, "theorem " + name + " needs n");
            for (u64 n : cfg.n_grid) ns.push_back(static_cast<unsigned>(n));
        } else {
            ns.push_back(std::nullopt);
        }
        for (u64 p : cfg.p_grid) {
            if (!is_prime(p)) fail(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
            for (u64 e : cfg.e_grid)
                for (u64 k : cfg.k_grid)
                    for (const auto& n : ns) {
                        if (e < 1 || k < 1) fail(ErrorCode::DegreeMismatch, "e and k must be at least 1");
                        const auto nd = nontrivial_dimension(th, p, static_cast<unsigned>(e), static_cast<unsigned>(k), n.value_or(0));
                        for (u64 d : cfg.d_grid) {
                            BoundsRow row{th, p, static_cast<unsigned>(e), static_cast<unsigned>(k), static_cast<unsigned>(d), n,
                                          std::nullopt, static_cast<double>(d * e * k), nd.exact, true};
                            const BoundParams bp{p, row.e, row.k, row.d, n.value_or(0)};
                            if (th == Theorem::PairTechnical && d <= 2) {
                                rows.push_back(row);  // G has a zero denominator here
                                continue;
                            }
                            const Threshold thr = premise_threshold(th, bp);
                            row.threshold_log_p = thr.value.log_p();
                            row.vacuous = !less_equal(thr.value, Magnitude::power(p, 2 * static_cast<long long>(d * e * k)));
                            rows.push_back(row);
                        }
                    }
        }
    }
    return rows;
}

inline JobOutput run_bounds(const JobConfig& cfg, OutputFormat fmt = OutputFormat::Csv) {
    using harness_detail::format_fixed;
    const auto rows = bounds_table(cfg);
    JobOutput out;
    if (fmt == OutputFormat::Csv) {
        out.text = csv_row({"theorem", "p", "e", "k", "d", "n", "threshold_log_p", "Rd_log_p", "nontrivial_d", "vacuous"});
        for (const auto& r : rows)
            out.text += csv_row({std::string(theorem_name(r.theorem)), std::to_string(r.p), std::to_string(r.e),
                                 std::to_string(r.k), std::to_string(r.d), r.n ? std::to_string(*r.n) : "",
                                 r.threshold_log_p ? format_fixed(*r.threshold_log_p, 6) : "undefined",
                                 format_fixed(r.space_log_p, 6), r.nontrivial_d ? std::to_string(*r.nontrivial_d) : "",
                                 r.vacuous ? "true" : "false"});
        return out;
    }
    Json arr = Json::array();
    for (const auto& r : rows)
        arr.push_back({{"theorem", std::string(theorem_name(r.theorem))},
                       {"p", r.p},
                       {"e", r.e},
                       {"k", r.k},
                       {"d", r.d},
                       {"n", r.n ? Json(*r.n) : Json()},
                       {"threshold_log_p", r.threshold_log_p ? Json(format_fixed(*r.threshold_log_p, 6)) : Json()},
                       {"Rd_log_p", format_fixed(r.space_log_p, 6)},
                       {"nontrivial_d", r.nontrivial_d ? Json(*r.nontrivial_d) : Json()},
                       {"vacuous", r.vacuous}});
    out.text = arr.dump(2) + "\n";
    return out;
}

// ---- census -----------------------------------------------------------

struct CensusRecord {
    u64 size = 0;
    u64 sample = 0;
    u64 max_nu = 0;
    std::string argmax_t;
    mpq_class ceiling_literal;
    mpq_class ceiling_consistent;
    bool exceeds_literal = false;
    bool exceeds_consistent = false;
    bool vacuous = true;
    std::string spot_check;  // pass, fail or skip
};

struct CensusSummary {
    u64 size = 0;
    u64 samples = 0;
    std::vector<u64> quantiles;  // min, q25, median, q75, max of max_nu
    u64 exceed_literal = 0;
    u64 exceed_consistent = 0;
};

struct CensusResult {
    std::string ring;
    unsigned d = 0;
    u64 seed = 0;
    u64 budget = 0;
    std::string sampling;
    std::vector<CensusRecord> records;
    std::vector<CensusSummary> summary;
    bool spot_checks_ok = true;
};

inline constexpr u64 kSpotCheckLimit = 64;

/// Nearest-rank quantiles at 0, 1/4, 1/2, 3/4, 1.
inline std::vector<u64> quantiles(std::vector<u64> v) {
    if (v.empty()) return {};
    std::sort(v.begin(), v.end());
    std::vector<u64> out;
    for (unsigned q = 0; q <= 4; ++q) {
        const std::size_t rank = q == 0 ? 1 : (q * v.size() + 3) / 4;
        out.push_back(v[rank - 1]);
    }
    return out;
}

inline CensusResult run_census_records(const JobConfig& cfg) {
    if (!cfg.seed) fail(ErrorCode::ParseError, "census needs a seed");
    if (!cfg.ring || !cfg.d) fail(ErrorCode::ParseError, "census needs 'ring' and 'd'");
    if (cfg.sizes.empty()) fail(ErrorCode::ParseError, "census needs 'sizes'");
    const GaloisRing ring = GaloisRing::parse(*cfg.ring);
    const unsigned d = *cfg.d;
    if (!ring.size()) fail(ErrorCode::InfeasibleSampling, "ring too large to index");
    const auto total = space_size(ring, d);

    CensusResult res;
    res.ring = ring.descriptor();
    res.d = d;
    res.seed = *cfg.seed;
    res.budget = cfg.budget;
    res.sampling = std::string(to_string(total ? SamplingMethod::IndexShuffle : SamplingMethod::Rejection));
    const Threshold premise = single_threshold(ring.p(), ring.e(), ring.k(), d);

    for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
        const u64 size = cfg.sizes[si];
        if (total && size > *total) fail(ErrorCode::InfeasibleSampling, "size " + std::to_string(size) + " exceeds |R^d|");
        if (static_cast<u128>(size) * size > cfg.budget)
            fail(ErrorCode::WorkBudgetExceeded, "size " + std::to_string(size) + " needs more than the work budget");
        CensusSummary sum;
        sum.size = size;
        sum.samples = cfg.samples;
        std::vector<u64> maxima;
        for (u64 s = 0; s < cfg.samples; ++s) {
            Rng rng({*cfg.seed, size, s});
            const PointSet E = sample_subset(ring, d, size, rng);
            CensusRecord rec;
            rec.size = size;
            rec.sample = s;
            const auto hist = nu_histogram(E);
            u64 best = 0;
            for (u64 i = 1; i < hist.size(); ++i)
                if (hist[i] > hist[best]) best = i;
            rec.max_nu = hist[best];
            rec.argmax_t = ring.format(ring.element_at(best));
            const auto ceil = single_ceiling(to_mpz(size), ring.p(), ring.e(), ring.k());
            rec.ceiling_literal = ceil.literal;
            rec.ceiling_consistent = ceil.consistent;
            rec.exceeds_literal = mpq_class(to_mpz(rec.max_nu)) > ceil.literal;
            rec.exceeds_consistent = mpq_class(to_mpz(rec.max_nu)) > ceil.consistent;
            rec.vacuous = !premise_met(Theorem::SingleDot, to_mpz(size), premise.value);
            if (cfg.spot_check && size <= kSpotCheckLimit) {
                bool ok = true;
                u64 mass = 0;
                for (u64 i = 0; i < hist.size(); ++i) {
                    mass += hist[i];
                    if (hist[i] != 0 || i == 0) ok = ok && nu(E, ring.element_at(i)) == hist[i];
                }
                ok = ok && mass == size * size;
                rec.spot_check = ok ? "pass" : "fail";
                if (!ok) res.spot_checks_ok = false;
            } else {
                rec.spot_check = "skip";
            }
            sum.exceed_literal += rec.exceeds_literal;
            sum.exceed_consistent += rec.exceeds_consistent;
            maxima.push_back(rec.max_nu);
            res.records.push_back(std::move(rec));
        }
        sum.quantiles = quantiles(std::move(maxima));
        res.summary.push_back(std::move(sum));
    }
    return res;
}

inline JobOutput run_census(const JobConfig& cfg, OutputFormat fmt = OutputFormat::Csv) {
    const CensusResult res = run_census_records(cfg);
    JobOutput out;
    out.ok = res.spot_checks_ok;
    const std::string seed = std::to_string(res.seed), budget = std::to_string(res.budget), d = std::to_string(res.d);
    auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
    if (fmt == OutputFormat::Csv) {
        out.text = csv_row({"ring", "d", "seed", "generator", "budget", "sampling", "size", "sample", "max_nu", "argmax_t",
                            "ceiling_literal", "ceiling_consistent", "exceeds_literal", "exceeds_consistent", "vacuous",
                            "spot_check"});
        for (const auto& r : res.records)
            out.text += csv_row({res.ring, d, seed, std::string(Rng::kName), budget, res.sampling, std::to_string(r.size),
                                 std::to_string(r.sample), std::to_string(r.max_nu), r.argmax_t, r.ceiling_literal.get_str(),
                                 r.ceiling_consistent.get_str(), flag(r.exceeds_literal), flag(r.exceeds_consistent),
                                 flag(r.vacuous), r.spot_check});
        return out;
    }
    Json doc;
    doc["provenance"] = {{"task", "census"},
                         {"ring", res.ring},
                         {"d", res.d},
                         {"seed", res.seed},
                         {"generator", std::string(Rng::kName)},
                         {"stream_key", "seed_seq(seed, size, sample)"},
                         {"sampling", res.sampling},
                         {"budget", res.budget}};
    Json records = Json::array();
    for (const auto& r : res.records)
        records.push_back({{"size", r.size},
                           {"sample", r.sample},
                           {"max_nu", r.max_nu},
                           {"argmax_t", r.argmax_t},
                           {"ceiling_literal", r.ceiling_literal.get_str()},
                           {"ceiling_consistent", r.ceiling_consistent.get_str()},
                           {"exceeds_literal", r.exceeds_literal},
                           {"exceeds_consistent", r.exceeds_consistent},
                           {"vacuous", r.vacuous},
                           {"spot_check", r.spot_check}});
    doc["records"] = records;
    Json summary = Json::array();
    for (const auto& s : res.summary)
        summary.push_back({{"size", s.size},
                           {"samples", s.samples},
                           {"max_nu_quantiles", s.quantiles},
                           {"exceed_literal", s.exceed_literal},
                           {"exceed_consistent", s.exceed_consistent}});
    doc["summary"] = summary;
    out.text = doc.dump(2) + "\n";
    return out;
}

// ---- ring-info --------------------------------------------------------

inline JobOutput run_ring_info(const GaloisRing& ring, OutputFormat fmt = OutputFormat::Json) {
    Json doc;
    doc["descriptor"] = ring.descriptor();
    doc["p"] = ring.p();
    doc["e"] = ring.e();
    doc["k"] = ring.k();
    doc["cardinality"] = ring.cardinality().get_str();
    doc["units"] = ring.unit_count().get_str();
    doc["characteristic"] = std::to_string(ring.modulus());
    Json traces = Json::array();
    for (u64 t : ring.trace_basis()) traces.push_back(t);
    doc["trace_of_basis"] = traces;
    const auto q = checked_pow(ring.p(), ring.k());
    if (q && *q <= (u64{1} << 16)) {
        const auto T = ring.teichmuller_set();
        doc["teichmuller_size"] = T.elements.size();
        doc["teichmuller_generator"] = ring.format(T.beta);
    }
    JobOutput out;
    if (fmt == OutputFormat::Json) {
        out.text = doc.dump(2) + "\n";
    } else {
        out.text = csv_row({"field", "value"});
        for (const auto& [key, value] : doc.items())
            out.text += csv_row({key, value.is_string() ? value.get<std::string>() : value.dump()});
    }
    return out;
}

/// Dispatch on cfg.task.
inline JobOutput run_job(const JobConfig& cfg, OutputFormat fmt) {
    if (cfg.task == "selftest") return run_selftest(cfg, fmt);
    if (cfg.task == "verify-identities") return run_verify_identities(cfg, fmt);
    if (cfg.task == "count") return run_count(cfg, fmt);
    if (cfg.task == "bounds") return run_bounds(cfg, fmt);
    if (cfg.task == "census") return run_census(cfg, fmt);
    fail(ErrorCode::ParseError, "unknown task '" + cfg.task + "'");
}

}  // namespace galring

#endif  // GALRING_HARNESS_HPP
