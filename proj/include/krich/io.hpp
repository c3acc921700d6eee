#pragma once

#include "krich/adelic2d.hpp"
#include "krich/diagram.hpp"
#include "krich/krichever1d.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace krich {

using Json = nlohmann::ordered_json;

/// 0 success, 1 input or usage error, 2 non-stabilization or failed precondition.
inline int exit_status(ErrorCode code) {
    switch (code) {
    case ErrorCode::not_stabilized:
    case ErrorCode::precision_exhausted:
    case ErrorCode::window_too_small:
    case ErrorCode::newton_degenerate:
    case ErrorCode::infinite_cohomology:
    case ErrorCode::infinite_index:
        return 2;
    default:
        return 1;
    }
}

inline Json error_json(const Error& e) {
    return Json{{"error", {{"code", to_string(e.code())}, {"message", e.what()}}}};
}

namespace io_detail {

template <class F>
auto guarded(const std::string& what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::parse, what + ": " + e.what());
    }
}

inline const Json& require(const Json& j, const char* key, const std::string& ctx) {
    if (!j.is_object() || !j.contains(key))
        throw Error(ErrorCode::parse, ctx + ": missing \"" + key + "\"");
    return j.at(key);
}

inline std::string scalar_text(const Json& j) {
    if (j.is_string())
        return j.get<std::string>();
    if (j.is_number_integer())
        return std::to_string(j.get<std::int64_t>());
    throw Error(ErrorCode::parse, "scalar must be a string or an integer");
}

} // namespace io_detail

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::parse, "cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return Json::parse(buf.str());
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::parse, path + ": " + e.what());
    }
}

/// {"kind": "rationals"} or {"kind": "prime_field", "characteristic": p}.
inline FieldSpec field_from_json(const Json& j) {
    return io_detail::guarded("field", [&] {
        const std::string kind = io_detail::require(j, "kind", "field").get<std::string>();
        if (kind == "rationals")
            return FieldSpec::rationals();
        if (kind == "prime_field")
            return FieldSpec::prime(
                io_detail::require(j, "characteristic", "field").get<std::uint64_t>());
        throw Error(ErrorCode::invalid_field, "unknown field kind '" + kind + "'");
    });
}

inline Json field_to_json(const FieldSpec& f) {
    if (f.is_rationals())
        return Json{{"kind", "rationals"}};
    return Json{{"kind", "prime_field"}, {"characteristic", f.characteristic}};
}

/// "rationals", "Q", or "fp:P".
inline FieldSpec parse_field_option(const std::string& text) {
    if (text == "rationals" || text == "Q")
        return FieldSpec::rationals();
    if (text.rfind("fp:", 0) == 0) {
        const std::string p = text.substr(3);
        if (p.empty() || p.find_first_not_of("0123456789") != std::string::npos || p.size() > 12)
            throw Error(ErrorCode::invalid_field, "bad prime in '" + text + "'");
        return FieldSpec::prime(std::stoull(p));
    }
    throw Error(ErrorCode::invalid_field, "field must be rationals or fp:P, got '" + text + "'");
}

/// "LO:HI".
inline std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text) {
    const auto colon = text.find(':', text.empty() ? 0 : 1);
    try {
        if (colon == std::string::npos)
            throw std::invalid_argument(text);
        std::size_t used = 0;
        const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
        const std::int64_t lo = std::stoll(a, &used);
        if (used != a.size())
            throw std::invalid_argument(text);
        const std::int64_t hi = std::stoll(b, &used);
        if (used != b.size())
            throw std::invalid_argument(text);
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::invalid_argument, "range must be LO:HI, got '" + text + "'");
    }
}

inline Json region_to_json(const LatticeRegion& r) {
    Json cs = Json::array();
    for (const auto& k : r.constraints())
        cs.push_back({{"a", k.a},
                      {"b", k.b},
                      {"sense", k.sense == Constraint::Sense::ge ? ">=" : "<="},
                      {"c", k.c}});
    Json out{{"name", r.name()}, {"constraints", cs}};
    if (r.is_empty())
        out["empty"] = true;
    return out;
}

inline LatticeRegion region_from_json(const Json& j) {
    return io_detail::guarded("region", [&] {
        const std::string name = j.value("name", std::string{});
        if (j.value("empty", false))
            return LatticeRegion::empty(name);
        std::vector<Constraint> cs;
        for (const auto& k : io_detail::require(j, "constraints", "region")) {
            Constraint c;
            c.a = k.at("a").get<int>();
            c.b = k.at("b").get<int>();
            const std::string sense = k.at("sense").get<std::string>();
            if (sense != ">=" && sense != "<=")
                throw Error(ErrorCode::parse, "constraint sense must be >= or <=");
            c.sense = sense == ">=" ? Constraint::Sense::ge : Constraint::Sense::le;
            c.c = k.at("c").get<std::int64_t>();
            cs.push_back(c);
        }
        return LatticeRegion::from_constraints(name, cs);
    });
}

inline Json points_json(const std::vector<Order>& v) {
    Json out = Json::array();
    for (Order o : v)
        out.push_back(o);
    return out;
}

// Curve scenarios

struct CurveScenario {
    CurveSpec curve;
    SheafData1 sheaf;
    std::vector<std::vector<std::string>> generator_text;
    OrderWindow window{-16, 16};
    Order slack = kDefaultSlack;
    StabilizationPolicy stabilization;
    std::vector<Order> hilbert_n;
};

/// Sheaf generators: a list of lists is a list of generator vectors; a list of
/// strings is one rank-1 generator each when rank is 1, and the diagonal
/// generators of a direct sum when there are exactly rank of them.
inline std::vector<std::vector<std::string>> generator_vectors(const Json& sheaf) {
    const std::size_t rank = sheaf.value("rank", std::size_t{1});
    const Json& gens = io_detail::require(sheaf, "generators", "sheaf");
    if (!gens.is_array() || gens.empty())
        throw Error(ErrorCode::parse, "sheaf generators must be a nonempty list");
    std::vector<std::vector<std::string>> out;
    if (gens.front().is_array()) {
        for (const auto& g : gens) {
            std::vector<std::string> v;
            for (const auto& e : g)
                v.push_back(io_detail::scalar_text(e));
            if (v.size() != rank)
                throw Error(ErrorCode::dimension_mismatch,
                            "generator vector length differs from rank " + std::to_string(rank));
            out.push_back(std::move(v));
        }
        return out;
    }
    std::vector<std::string> flat;
    for (const auto& g : gens)
        flat.push_back(io_detail::scalar_text(g));
    if (rank == 1) {
        for (auto& g : flat)
            out.push_back({g});
        return out;
    }
    if (flat.size() != rank)
        throw Error(ErrorCode::dimension_mismatch,
                    "a flat generator list for rank " + std::to_string(rank) + " needs " +
                        std::to_string(rank) + " entries");
    for (std::size_t k = 0; k < rank; ++k) {
        std::vector<std::string> v(rank, "0");
        v[k] = flat[k];
        out.push_back(std::move(v));
    }
    return out;
}

inline CurveScenario curve_scenario_from_json(const Json& j) {
    return io_detail::guarded("curve scenario", [&] {
        const FieldSpec field = j.contains("field") ? field_from_json(j.at("field")) : FieldSpec{};
        const Json& c = io_detail::require(j, "curve", "scenario");
        const Json& ansatz = io_detail::require(c, "ansatz", "curve");
        auto term = [&](const char* key) {
            const Json& t = io_detail::require(ansatz, key, "ansatz");
            return AnsatzTerm{t.at("order").get<Order>(),
                              parse_scalar(field, io_detail::scalar_text(t.value("lead", Json("1"))))};
        };
        CurveScenario s{
            CurveSpec::make(c.value("label", std::string("curve")), field,
                            parse_polynomial(field, io_detail::require(c, "f", "curve").get<std::string>()),
                            term("x"), term("y"), c.value("precision", Order{10})),
            {}, {}, {}, kDefaultSlack, {}, {}};
        if (j.contains("sheaf")) {
            s.generator_text = generator_vectors(j.at("sheaf"));
        } else {
            s.generator_text = {{"1"}};
        }
        s.sheaf = SheafData1::from_vectors(s.generator_text);
        if (j.contains("window")) {
            const auto w = j.at("window").get<std::vector<Order>>();
            if (w.size() != 2)
                throw Error(ErrorCode::parse, "window must be [lo, hi]");
            s.window = {w[0], w[1]};
        }
        s.slack = j.value("slack", kDefaultSlack);
        if (j.contains("stabilization")) {
            const Json& st = j.at("stabilization");
            if (st.contains("start")) {
                const auto w = st.at("start").get<std::vector<Order>>();
                if (w.size() != 2)
                    throw Error(ErrorCode::parse, "stabilization start must be [lo, hi]");
                s.stabilization.start_lo = w[0];
                s.stabilization.start_hi = w[1];
            }
            s.stabilization.step = st.value("step", s.stabilization.step);
            s.stabilization.max_enlargements =
                st.value("max_enlargements", s.stabilization.max_enlargements);
        }
        if (j.contains("hilbert"))
            s.hilbert_n = j.at("hilbert").get<std::vector<Order>>();
        return s;
    });
}

inline Json closure_json(const ClosureReport& r) {
    Json out{{"passed", r.passed},
             {"checked_pairs", r.checked_pairs},
             {"skipped_pairs", r.skipped_pairs},
             {"sub_window", {0, r.sub_hi}}};
    if (r.witness)
        out["witness"] = {{"a_row", r.witness->a_row},
                          {"w_row", r.witness->w_row},
                          {"order", r.witness->order},
                          {"component", r.witness->component}};
    else
        out["witness"] = nullptr;
    return out;
}

inline Json report_json(const ComplexReport& r) {
    Json windows = Json::array(), trace = Json::array();
    for (const auto& [lo, hi] : r.windows_used)
        windows.push_back({lo, hi});
    for (const auto& h : r.h_trace)
        trace.push_back(h);
    return Json{{"h", r.h},           {"index", r.index}, {"stable", r.stable},
                {"windows", windows}, {"trace", trace}};
}

/// Full curve pipeline: Phi_1 pivots, cohomology of A and W, index,
/// Hilbert values of A and closure checks. `window` overrides the scenario.
inline Json run_curve(const CurveScenario& input, std::optional<OrderWindow> window = std::nullopt) {
    CurveScenario s = input;
    if (window)
        s.window = *window;
    if (s.window.lo >= s.window.hi)
        throw Error(ErrorCode::window_too_small, "empty window");

    const Phi1Image img = phi1(s.curve, s.sheaf, s.window, s.slack);
    const ComplexReport ha = cohomology1_A(s.curve, s.stabilization, s.slack);
    const ComplexReport hw = cohomology1_W(s.curve, s.sheaf, s.stabilization, s.slack);

    Json config;
    config["field"] = field_to_json(s.curve.field);
    config["curve"] = {{"label", s.curve.label},
                       {"f", s.curve.f.to_string()},
                       {"ansatz",
                        {{"x", {{"order", s.curve.x.order}, {"lead", s.curve.x.lead.to_string()}}},
                         {"y", {{"order", s.curve.y.order}, {"lead", s.curve.y.lead.to_string()}}}}}};
    config["sheaf"] = {{"rank", s.sheaf.rank},
                       {"generators", s.generator_text},
                       {"trivialization", s.sheaf.trivialization}};
    config["window"] = {s.window.lo, s.window.hi};
    config["slack"] = s.slack;
    config["stabilization"] = {{"start", {s.stabilization.start_lo, s.stabilization.start_hi}},
                               {"step", s.stabilization.step},
                               {"max_enlargements", s.stabilization.max_enlargements}};
    config["sign_convention"] = "(a, f) -> a - f";
    config["component_order"] = "(order, component) lexicographic";

    Json out;
    out["config"] = config;
    const CurveExpansion ex = expand_at_infinity(s.curve);
    out["expansion"] = {{"x", ex.x.to_string()}, {"y", ex.y.to_string()},
                        {"newton_steps", ex.newton_steps}};
    out["pivots"] = {{"A", points_json(img.a.pivot_orders())},
                     {"W", points_json(img.w.pivot_orders())}};
    out["h"] = hw.h;
    out["index"] = hw.index;
    out["pivot_gap_index"] = pivot_gap_index(img.w);
    out["cohomology"] = {{"A", report_json(ha)}, {"W", report_json(hw)}};
    Json hilbert = Json::object();
    std::vector<Order> ns = s.hilbert_n;
    if (ns.empty())
        for (Order n = 0; n <= -s.window.lo && n <= 8; ++n)
            ns.push_back(n);
    for (Order n : ns)
        hilbert[std::to_string(n)] = hilbert_function(img.a, n);
    out["hilbert"] = hilbert;
    out["closure"] = {{"A*A", closure_json(verify_closure(img.a, img.a))},
                      {"A*W", closure_json(verify_closure(img.a, img.w))}};
    return out;
}

// Surface scenarios

struct SurfaceConfig {
    SurfaceScenario scenario;
    std::string model = "p2_hyperplane";
    Window window = Window::square(-8, 8);
    std::int64_t n_lo = -2;
    std::int64_t n_hi = 2;
};

inline SurfaceConfig surface_config_from_json(const Json& j) {
    return io_detail::guarded("surface scenario", [&] {
        SurfaceConfig c;
        c.scenario.field = j.contains("field") ? field_from_json(j.at("field")) : FieldSpec{};
        c.model = j.value("model", std::string("p2_hyperplane"));
        if (c.model != "p2_hyperplane")
            throw Error(ErrorCode::invalid_argument, "unknown surface model '" + c.model + "'");
        if (j.contains("twists"))
            c.scenario.twists = RankProfile(j.at("twists").get<std::vector<std::int64_t>>());
        c.scenario.self_intersection = j.value("self_intersection", std::int64_t{1});
        c.scenario.chi_curve = j.value("chi_curve", std::int64_t{1});
        if (j.contains("window")) {
            const auto w = j.at("window").get<std::vector<std::int64_t>>();
            if (w.size() != 2)
                throw Error(ErrorCode::parse, "window must be [lo, hi]");
            c.window = Window::square(w[0], w[1]);
        }
        if (j.contains("n_range")) {
            const auto r = j.at("n_range").get<std::vector<std::int64_t>>();
            if (r.size() != 2)
                throw Error(ErrorCode::parse, "n_range must be [lo, hi]");
            c.n_lo = r[0];
            c.n_hi = r[1];
        }
        return c;
    });
}

inline Json prop2_json(const Prop2Report& r) {
    Json out{{"passed", r.passed}, {"components_checked", r.components_checked}};
    out["witness"] = r.witness ? Json{r.witness->i, r.witness->j} : Json(nullptr);
    return out;
}

inline Json run_surface(const SurfaceConfig& c) {
    if (c.n_lo > c.n_hi)
        throw Error(ErrorCode::invalid_argument, "n_range is empty");
    const SurfaceScenario& s = c.scenario;
    const RestrictedComplex complex = RestrictedComplex::from_scenario(s);
    const ComplexReport lattice = restricted_cohomology(complex);
    const ComplexReport oracle = restricted_cohomology_oracle(complex);

    Json config;
    config["field"] = field_to_json(s.field);
    config["model"] = c.model;
    config["twists"] = s.twists.twists;
    config["self_intersection"] = s.self_intersection;
    config["chi_curve"] = s.chi_curve;
    config["window"] = {c.window.i_lo, c.window.i_hi};
    config["n_range"] = {c.n_lo, c.n_hi};
    config["signs"] = kRestrictedSigns;

    Json out;
    out["config"] = config;
    out["h"] = lattice.h;
    out["h_oracle"] = oracle.h;
    out["oracle_agrees"] = lattice.h == oracle.h;
    Json indices = Json::object(), kernels = Json::object(), oracle_ok = true;
    for (std::int64_t n = c.n_lo; n <= c.n_hi; ++n) {
        const ComplexReport g = graded_fredholm(s, n);
        const ComplexReport go = graded_fredholm_oracle(s, n);
        indices[std::to_string(n)] = g.index;
        kernels[std::to_string(n)] = {{"ker", g.h[0]}, {"coker", g.h[1]}};
        oracle_ok = oracle_ok.get<bool>() && g.h == go.h;
    }
    out["indices"] = indices;
    out["graded"] = kernels;
    out["indices_oracle_agrees"] = oracle_ok;
    out["index_note"] = kIndexConvention;
    out["prop2"] = prop2_check(s).passed;
    Json compat = Json::array();
    for (std::int64_t n = c.n_lo; n <= c.n_hi; ++n)
        compat.push_back({{"n", n}, {"passed", phi_compat(s, n).passed}});
    out["compat"] = compat;
    const Closure2Report cl = closure_check2(s);
    Json checks = Json::array();
    for (const auto& k : cl.checks) {
        Json e{{"label", k.label}, {"passed", k.passed}, {"samples", k.samples}};
        e["witness"] = k.witness ? Json{{k.witness->first.i, k.witness->first.j},
                                        {k.witness->second.i, k.witness->second.j}}
                                 : Json(nullptr);
        checks.push_back(e);
    }
    out["closure"] = {{"passed", cl.passed}, {"checks", checks}};
    Json regions = Json::array();
    const Phi2Image img = phi2(s);
    regions.push_back(region_to_json(img.b));
    for (const auto& w : img.w)
        regions.push_back(region_to_json(w));
    out["phi2"] = regions;
    return out;
}

// Diagrams

struct DiagramConfig {
    std::vector<LatticeRegion> regions;
    std::optional<Window> window;
};

/// Either {"regions": [...]} or a surface scenario, whose first twist gives the
/// six-ring overlay.
inline DiagramConfig diagram_config_from_json(const Json& j) {
    return io_detail::guarded("diagram scenario", [&] {
        DiagramConfig c;
        if (j.contains("regions")) {
            for (const auto& r : j.at("regions"))
                c.regions.push_back(region_from_json(r));
        } else {
            const SurfaceConfig s = surface_config_from_json(j);
            const StandardRings rings = standard_rings(s.scenario.twists.twists.front());
            for (const LatticeRegion* r : rings.all())
                c.regions.push_back(*r);
            c.window = s.window;
        }
        if (j.contains("window")) {
            const auto w = j.at("window").get<std::vector<std::int64_t>>();
            if (w.size() != 2)
                throw Error(ErrorCode::parse, "window must be [lo, hi]");
            c.window = Window::square(w[0], w[1]);
        }
        return c;
    });
}

/// Text rendering of a JSON report: one "key: value" line per top-level entry.
inline std::string to_text(const Json& report) {
    std::string out;
    for (const auto& [k, v] : report.items())
        out += k + ": " + v.dump() + "\n";
    return out;
}

} // namespace krich
