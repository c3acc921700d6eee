#include "krich/krich.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

using namespace krich;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::invalid_argument, "cannot write " + out_path);
    out << text;
}

std::string render(const Json& report, const std::string& format) {
    if (format == "json")
        return report.dump(2) + "\n";
    if (format == "text")
        return to_text(report);
    throw Error(ErrorCode::invalid_argument, "format must be json or text here, got " + format);
}

int run_curve_cmd(const std::string& spec, const std::string& window, const std::string& out,
                  const std::string& format) {
    CurveScenario s = curve_scenario_from_json(read_json_file(spec));
    if (std::getenv("KRICH_MAX_ENLARGE"))
        s.stabilization.max_enlargements = StabilizationPolicy::from_environment().max_enlargements;
    std::optional<OrderWindow> w;
    if (!window.empty()) {
        const auto [lo, hi] = parse_range(window);
        w = OrderWindow{lo, hi};
    }
    emit(render(run_curve(s, w), format), out);
    return 0;
}

int run_surface_cmd(const std::string& spec, std::optional<std::int64_t> twist,
                    const std::string& n_range, const std::string& out, const std::string& format) {
    SurfaceConfig c = surface_config_from_json(read_json_file(spec));
    if (twist)
        c.scenario.twists = RankProfile({*twist});
    if (!n_range.empty()) {
        const auto [lo, hi] = parse_range(n_range);
        c.n_lo = lo;
        c.n_hi = hi;
    }
    emit(render(run_surface(c), format), out);
    return 0;
}

int run_diagram_cmd(const std::string& spec, const std::string& window, const std::string& format,
                    const std::string& out) {
    DiagramConfig c = diagram_config_from_json(read_json_file(spec));
    if (!window.empty()) {
        const auto [lo, hi] = parse_range(window);
        c.window = Window::square(lo, hi);
    }
    if (!c.window)
        throw Error(ErrorCode::invalid_argument, "diagram needs a finite window");
    const DiagramData d = support_diagram(c.regions, *c.window);
    if (format == "ascii")
        emit(to_ascii(d), out);
    else if (format == "svg")
        emit(to_svg(d), out);
    else
        throw Error(ErrorCode::invalid_argument, "diagram format must be svg or ascii");
    return 0;
}

int run_verify_cmd(const std::string& field, const std::string& out) {
    const AcceptanceReport r = run_acceptance(parse_field_option(field));
    emit(r.to_text(), out);
    return r.passed() ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Krichever maps of curves and surfaces in exact arithmetic"};
    app.require_subcommand(1);

    std::string spec, window, out, format = "json", n_range, field = "rationals";
    std::optional<std::int64_t> twist;

    auto* curve = app.add_subcommand("curve", "Phi_1 subspaces, cohomology, Hilbert data, closure");
    curve->add_option("--spec", spec, "curve scenario JSON")->required();
    curve->add_option("--window", window, "basis window LO:HI");
    curve->add_option("--out", out, "output file");
    curve->add_option("--format", format, "json or text");

    auto* surface = app.add_subcommand("surface", "restricted adelic complex on the P^2 model");
    surface->add_option("--spec", spec, "surface scenario JSON")->required();
    surface->add_option("--twist", twist, "single twist d, overrides the scenario");
    surface->add_option("--n-range", n_range, "graded pieces LO:HI");
    surface->add_option("--out", out, "output file");
    surface->add_option("--format", format, "json or text");

    auto* diagram = app.add_subcommand("diagram", "draw lattice regions");
    diagram->add_option("--spec", spec, "regions or surface scenario JSON")->required();
    diagram->add_option("--window", window, "square window LO:HI");
    diagram->add_option("--format", format, "svg or ascii")->required();
    diagram->add_option("--out", out, "output file");

    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->add_option("--field", field, "rationals or fp:P");
    verify->add_option("--out", out, "output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*curve)
            return run_curve_cmd(spec, window, out, format);
        if (*surface)
            return run_surface_cmd(spec, twist, n_range, out, format);
        if (*diagram)
            return run_diagram_cmd(spec, window, format, out);
        return run_verify_cmd(field, out);
    } catch (const Error& e) {
        std::cout << error_json(e).dump(2) << "\n";
        std::cerr << "krich: " << e.what() << "\n";
        return exit_status(e.code());
    }
}
