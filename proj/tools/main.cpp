// Command-line front end: single evaluations, field grids for the cuspoid
// integrals, deformation-geometry dumps and omega sweeps.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pathfinder/engine.hpp"
#include "pathfinder/errors.hpp"
#include "pathfinder/grid.hpp"
#include "pathfinder/oracle.hpp"

using json = nlohmann::json;
using namespace pathfinder;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

double parse_double(const std::string& s) {
    try {
        size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size())
            throw InputError("malformed number: '" + s + "'");
        return v;
    } catch (const InputError&) {
        throw;
    } catch (const std::exception&) {
        throw InputError("malformed number: '" + s + "'");
    }
}

// Complex literal: "1.5", "-2e-3", "1+2i", "-0.5-i", "2i", "i".
Complex parse_complex_literal(std::string s) {
    if (s.empty())
        throw InputError("empty complex literal");
    if (s.back() != 'i' && s.back() != 'I')
        return Complex(parse_double(s), 0.0);
    s.pop_back();
    // Split at the last sign that is not leading and not part of an exponent.
    size_t split = std::string::npos;
    for (size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto imag_of = [](const std::string& t) {
        if (t.empty() || t == "+")
            return 1.0;
        if (t == "-")
            return -1.0;
        return parse_double(t);
    };
    if (split == std::string::npos)
        return Complex(0.0, imag_of(s));
    return Complex(parse_double(s.substr(0, split)), imag_of(s.substr(split)));
}

// Endpoint: "re,im", a single real, or "inf:ANGLE".
Endpoint parse_endpoint(const std::string& s) {
    if (s.rfind("inf:", 0) == 0)
        return Endpoint::infinite(parse_double(s.substr(4)));
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        return Endpoint::finite(Complex(parse_double(s), 0.0));
    return Endpoint::finite(Complex(parse_double(s.substr(0, comma)), parse_double(s.substr(comma + 1))));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos)
            break;
        start = pos + 1;
    }
    return parts;
}

// Coefficients on the command line are highest degree first.
ComplexPolynomial parse_poly_descending(const std::string& s) {
    std::vector<Complex> coeffs;
    for (const auto& tok : split(s, ','))
        coeffs.push_back(parse_complex_literal(tok));
    if (coeffs.empty())
        throw InputError("empty coefficient list");
    return ComplexPolynomial::from_descending(std::move(coeffs));
}

GridAxis parse_axis(const std::string& s) {
    const auto parts = split(s, ':');
    if (parts.size() != 3)
        throw InputError("range must be lo:hi:n");
    GridAxis axis;
    axis.lo = parse_double(parts[0]);
    axis.hi = parse_double(parts[1]);
    axis.count = static_cast<int>(parse_double(parts[2]));
    if (axis.count < 1)
        throw InputError("range count must be >= 1");
    return axis;
}

struct CommonFlags {
    std::string a, b, g;
    double omega = 1.0;
    int n = 0;
    std::string f_name = "one";
    std::string f_poly;
    std::string type2 = "laguerre";
    double c_ball = 2.0 * std::numbers::pi;
    int n_ball = 16;
    double delta_ball = -1.0; // <0: default
    double delta_ode = 0.1;
    double delta_coarse = 1e-2;
    double delta_fine = 1e-13;
    double delta_quad = 1e-16;
    bool verbose = false;
};

void add_parameter_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--omega", flags.omega, "Frequency (> 0)")->required();
    cmd->add_option("--N", flags.n, "Quadrature points per contour")->required();
    cmd->add_option("--f", flags.f_name, "Amplitude: one, sin, cos or exp (default one)");
    cmd->add_option("--f-poly", flags.f_poly, "Polynomial amplitude, descending coefficients");
    cmd->add_option("--type2-rule", flags.type2, "laguerre (default) or legendre");
    cmd->add_option("--c-ball", flags.c_ball, "Oscillation budget per ball");
    cmd->add_option("--n-ball", flags.n_ball, "Rays for the ball radius");
    cmd->add_option("--delta-ball", flags.delta_ball, "Amalgamation threshold");
    cmd->add_option("--delta-ode", flags.delta_ode, "Tracer step factor");
    cmd->add_option("--delta-coarse", flags.delta_coarse, "Coarse Newton tolerance");
    cmd->add_option("--delta-fine", flags.delta_fine, "Fine Newton tolerance");
    cmd->add_option("--delta-quad", flags.delta_quad, "Contribution threshold");
    cmd->add_flag("--verbose", flags.verbose, "Diagnostics on stderr");
}

Amplitude amplitude_from_flags(const CommonFlags& flags) {
    if (!flags.f_poly.empty()) {
        auto poly = parse_poly_descending(flags.f_poly);
        return [poly](Complex z) { return poly.eval(z); };
    }
    if (flags.f_name == "one")
        return unit_amplitude();
    if (flags.f_name == "sin")
        return [](Complex z) { return std::sin(z); };
    if (flags.f_name == "cos")
        return [](Complex z) { return std::cos(z); };
    if (flags.f_name == "exp")
        return [](Complex z) { return std::exp(z); };
    throw InputError("unknown amplitude '" + flags.f_name + "'");
}

Parameters parameters_from_flags(const CommonFlags& flags) {
    Parameters params;
    params.c_ball = flags.c_ball;
    params.n_ball = flags.n_ball;
    if (flags.delta_ball >= 0.0)
        params.delta_ball = flags.delta_ball;
    params.delta_ode = flags.delta_ode;
    params.delta_coarse = flags.delta_coarse;
    params.delta_fine = flags.delta_fine;
    params.delta_quad = flags.delta_quad;
    params.n = flags.n;
    if (flags.type2 == "laguerre")
        params.type2_rule = Type2Rule::Laguerre;
    else if (flags.type2 == "legendre")
        params.type2_rule = Type2Rule::Legendre;
    else
        throw InputError("unknown type2 rule '" + flags.type2 + "'");
    return params;
}

EvaluationRequest request_from_flags(const CommonFlags& flags) {
    EvaluationRequest request;
    request.a = parse_endpoint(flags.a);
    request.b = parse_endpoint(flags.b);
    request.g = parse_poly_descending(flags.g);
    request.omega = flags.omega;
    request.f = amplitude_from_flags(flags);
    request.params = parameters_from_flags(flags);
    return request;
}

const char* branch_name(PipelineBranch branch) {
    switch (branch) {
    case PipelineBranch::SmallOmega:
        return "small-omega";
    case PipelineBranch::LinearPhase:
        return "linear-phase";
    default:
        return "full";
    }
}

void print_diagnostics(const EvaluationResult& result, int n) {
    int skipped = 0;
    for (const auto& c : result.contributions)
        skipped += c.skipped ? 1 : 0;
    std::fprintf(stderr, "branch: %s\n", branch_name(result.diagnostics.branch));
    std::fprintf(stderr, "contours: %zu (%d skipped), N=%d, N_tot=%ld\n", result.contributions.size(),
                 skipped, n, result.n_total);
    for (const auto& t : result.diagnostics.timings)
        std::fprintf(stderr, "time %-18s %.6f s\n", t.step.c_str(), t.seconds);
}

int run_eval(const CommonFlags& flags) {
    const EvaluationResult result = evaluate(request_from_flags(flags));
    std::printf("%.17g %.17g\n", result.value.real(), result.value.imag());
    if (flags.verbose)
        print_diagnostics(result, flags.n);
    return kExitOk;
}

json complex_json(Complex z) {
    return json::array({z.real(), z.imag()});
}

json deformation_document(const EvaluationRequest& request, const EvaluationResult& result) {
    json doc;
    doc["schema"] = "pathfinder-deformation/1";
    doc["omega"] = request.omega;
    json phase = json::array();
    for (const auto& c : request.g.coeffs())
        phase.push_back(complex_json(c));
    doc["phase_ascending"] = phase;
    doc["branch"] = branch_name(result.diagnostics.branch);
    doc["value"] = complex_json(result.value);
    doc["n_total"] = result.n_total;
    doc["valleys"] = result.valley_angles;
    doc["r_star"] = result.r_star;

    json stat = json::array();
    for (const auto& z : result.stationary_points)
        stat.push_back({{"z", complex_json(z)}, {"removed", false}});
    for (const auto& r : result.region.removed) {
        for (auto& entry : stat)
            if (entry["z"] == complex_json(r.point))
                entry["removed"] = true;
    }
    doc["stationary_points"] = stat;

    json balls = json::array();
    for (const auto& b : result.region.balls)
        balls.push_back({{"center", complex_json(b.center)}, {"radius", b.radius}});
    doc["balls"] = balls;

    json removed = json::array();
    for (const auto& r : result.region.removed)
        removed.push_back({{"z", complex_json(r.point)}, {"covering_ball", r.covering_ball}});
    doc["removed_points"] = removed;

    json exits_json = json::array();
    for (const auto& e : result.exit_points)
        exits_json.push_back({{"z", complex_json(e.location)}, {"ball", e.owner}});
    doc["exits"] = exits_json;

    json entrances = json::array();
    json paths = json::array();
    for (const auto& path : result.paths) {
        json p;
        p["origin"] = complex_json(path.origin);
        json pts = json::array();
        for (const auto& z : path.points)
            pts.push_back(complex_json(z));
        p["points"] = pts;
        p["mesh"] = path.mesh;
        if (path.terminal.kind == SDTerminal::Kind::Entrance) {
            p["terminal"] = {{"kind", "entrance"},
                             {"ball", path.terminal.ball},
                             {"z", complex_json(path.terminal.point)}};
            entrances.push_back({{"z", complex_json(path.terminal.point)}, {"ball", path.terminal.ball}});
        } else {
            p["terminal"] = {{"kind", "valley"}, {"angle", path.terminal.valley_angle}};
        }
        paths.push_back(p);
    }
    doc["entrances"] = entrances;
    doc["sd_paths"] = paths;

    json vertices = json::array();
    for (const auto& v : result.graph.vertices) {
        json vj;
        switch (v.kind) {
        case VertexKind::Stationary:
            vj["kind"] = "stationary";
            break;
        case VertexKind::FiniteEndpoint:
            vj["kind"] = "endpoint";
            break;
        case VertexKind::Exit:
            vj["kind"] = "exit";
            break;
        case VertexKind::Entrance:
            vj["kind"] = "entrance";
            break;
        case VertexKind::Valley:
            vj["kind"] = "valley";
            break;
        }
        if (v.kind == VertexKind::Valley)
            vj["angle"] = v.angle;
        else
            vj["z"] = complex_json(v.location);
        if (v.ball >= 0)
            vj["ball"] = v.ball;
        vertices.push_back(vj);
    }
    json edges = json::array();
    for (const auto& e : result.graph.edges)
        edges.push_back({{"kind", e.kind == EdgeKind::BallLine ? "line" : "sd"},
                         {"u", e.u},
                         {"v", e.v},
                         {"path", e.path},
                         {"length", e.length}});
    doc["graph"] = {{"vertices", vertices}, {"edges", edges}};

    json chain = json::array();
    for (const auto& oe : result.deformation.edges)
        chain.push_back({{"edge", oe.edge}, {"sign", oe.sign}});
    doc["shortest_path"] = {{"vertices", result.deformation.vertices}, {"edges", chain}};

    json contours = json::array();
    for (const auto& c : result.contributions) {
        json cj;
        cj["edge"] = c.edge;
        cj["skipped"] = c.skipped;
        cj["value"] = complex_json(c.value);
        cj["nodes_used"] = c.nodes_used;
        json nodes = json::array();
        for (const auto& z : c.nodes)
            nodes.push_back(complex_json(z));
        cj["nodes"] = nodes;
        contours.push_back(cj);
    }
    doc["contours"] = contours;
    return doc;
}

int run_deformation(const CommonFlags& flags, const std::string& out_file) {
    const EvaluationRequest request = request_from_flags(flags);
    const EvaluationResult result = evaluate(request);
    std::ofstream out(out_file);
    if (!out)
        throw InputError("cannot open output file '" + out_file + "'");
    out << deformation_document(request, result).dump(2) << "\n";
    if (flags.verbose)
        print_diagnostics(result, flags.n);
    return kExitOk;
}

struct GridFlags {
    std::string phase_template = "pearcey";
    std::string x_range, y_range;
    std::string out_file;
    double z_slice = -7.5;
    std::string ij = "32";
    int threads = 0;
    // custom template:
    std::string a, b, g;
    double omega = 1.0;
};

int run_grid(const GridFlags& grid, CommonFlags flags) {
    const GridAxis xs = parse_axis(grid.x_range);
    const GridAxis ys = parse_axis(grid.y_range);

    std::function<EvaluationRequest(double, double)> request_at;
    const Parameters params = [&] {
        Parameters p = parameters_from_flags(flags);
        return p;
    }();
    const Amplitude f = amplitude_from_flags(flags);

    if (grid.phase_template == "pearcey") {
        request_at = [=](double x, double y) {
            EvaluationRequest r;
            r.a = Endpoint::infinite(std::numbers::pi);
            r.b = Endpoint::infinite(0.0);
            r.g = ComplexPolynomial::from_descending({1.0, 0.0, y, x, 0.0});
            r.omega = 1.0;
            r.f = f;
            r.params = params;
            return r;
        };
    } else if (grid.phase_template == "swallowtail") {
        const double zs = grid.z_slice;
        request_at = [=](double x, double y) {
            EvaluationRequest r;
            r.a = Endpoint::infinite(std::numbers::pi);
            r.b = Endpoint::infinite(0.0);
            r.g = ComplexPolynomial::from_descending({1.0, 0.0, zs, y, x, 0.0});
            r.omega = 1.0;
            r.f = f;
            r.params = params;
            return r;
        };
    } else if (grid.phase_template == "aij") {
        if (grid.ij.size() != 2 || grid.ij[0] < '1' || grid.ij[0] > '5' || grid.ij[1] < '1' ||
            grid.ij[1] > '5')
            throw InputError("--ij must be two digits in 1..5");
        const double vi = (2.0 * (grid.ij[0] - '1') + 0.5) * std::numbers::pi / 5.0;
        const double vj = (2.0 * (grid.ij[1] - '1') + 0.5) * std::numbers::pi / 5.0;
        request_at = [=](double x, double y) {
            EvaluationRequest r;
            r.a = Endpoint::infinite(vi);
            r.b = Endpoint::infinite(vj);
            r.g = ComplexPolynomial::from_descending({0.4, -0.5 * x, 0.0, -y, 0.0, 0.0});
            r.omega = 1.0;
            r.f = f;
            r.params = params;
            return r;
        };
    } else if (grid.phase_template == "custom") {
        if (grid.g.empty() || grid.a.empty() || grid.b.empty())
            throw InputError("custom template requires --a, --b and --g");
        const ComplexPolynomial base = parse_poly_descending(grid.g);
        const Endpoint a = parse_endpoint(grid.a);
        const Endpoint b = parse_endpoint(grid.b);
        const double omega = grid.omega;
        request_at = [=](double x, double y) {
            std::vector<Complex> c = base.coeffs();
            if (c.size() < 3)
                throw InputError("custom template phase needs degree >= 2");
            c[1] = x; // grid scans the two lowest-order coefficients
            c[2] = y;
            EvaluationRequest r;
            r.a = a;
            r.b = b;
            r.g = ComplexPolynomial(std::move(c));
            r.omega = omega;
            r.f = f;
            r.params = params;
            return r;
        };
    } else {
        throw InputError("unknown template '" + grid.phase_template + "'");
    }

    const int threads =
        grid.threads > 0 ? grid.threads : std::max(1u, std::thread::hardware_concurrency());
    const auto values = evaluate_grid(request_at, xs, ys, threads);

    std::ofstream out(grid.out_file);
    if (!out)
        throw InputError("cannot open output file '" + grid.out_file + "'");
    out << "x,y,re,im\n";
    char line[160];
    for (int iy = 0; iy < ys.count; ++iy)
        for (int ix = 0; ix < xs.count; ++ix) {
            const Complex v = values[static_cast<long>(iy) * xs.count + ix];
            std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n", xs.at(ix), ys.at(iy),
                          v.real(), v.imag());
            out << line;
        }
    return kExitOk;
}

int run_bench(const CommonFlags& flags, const std::string& omega_list, const std::string& n_list,
              int repeats) {
    if (repeats < 1)
        throw InputError("--repeats must be >= 1");
    EvaluationRequest request = request_from_flags(flags);
    for (const auto& omega_tok : split(omega_list, ',')) {
        const double omega = parse_double(omega_tok);
        for (const auto& n_tok : split(n_list, ',')) {
            const int n = static_cast<int>(parse_double(n_tok));
            request.omega = omega;
            request.params.n = n;
            EvaluationResult result;
            const auto start = std::chrono::steady_clock::now();
            for (int r = 0; r < repeats; ++r)
                result = evaluate(request);
            const auto stop = std::chrono::steady_clock::now();
            const double seconds = std::chrono::duration<double>(stop - start).count() / repeats;
            std::printf("%.17g,%d,%.17g,%.17g,%ld,%.6g\n", omega, n, result.value.real(),
                        result.value.imag(), result.n_total, seconds);
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Oscillatory integrals of entire amplitudes against polynomial phases by "
                 "automatic quasi-steepest-descent contour deformation"};
    app.require_subcommand(1);

    CommonFlags eval_flags;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a single integral");
    eval_cmd->add_option("--a", eval_flags.a, "Endpoint: 're,im' or 'inf:ANGLE'")->required();
    eval_cmd->add_option("--b", eval_flags.b, "Endpoint: 're,im' or 'inf:ANGLE'")->required();
    eval_cmd->add_option("--g", eval_flags.g, "Phase coefficients, highest degree first")->required();
    add_parameter_flags(eval_cmd, eval_flags);

    CommonFlags def_flags;
    std::string def_out;
    auto* def_cmd = app.add_subcommand("deformation", "Evaluate and dump the deformation geometry");
    def_cmd->add_option("--a", def_flags.a)->required();
    def_cmd->add_option("--b", def_flags.b)->required();
    def_cmd->add_option("--g", def_flags.g)->required();
    def_cmd->add_option("--out", def_out, "Output JSON file")->required();
    add_parameter_flags(def_cmd, def_flags);

    GridFlags grid_flags;
    CommonFlags grid_common;
    auto* grid_cmd = app.add_subcommand("grid", "Evaluate a field over an (x,y) grid");
    grid_cmd->add_option("--template", grid_flags.phase_template,
                         "pearcey, swallowtail, aij or custom");
    grid_cmd->add_option("--x-range", grid_flags.x_range, "lo:hi:n")->required();
    grid_cmd->add_option("--y-range", grid_flags.y_range, "lo:hi:n")->required();
    grid_cmd->add_option("--out", grid_flags.out_file, "Output CSV file")->required();
    grid_cmd->add_option("--z", grid_flags.z_slice, "Swallowtail slice");
    grid_cmd->add_option("--ij", grid_flags.ij, "Valley pair for the aij template, e.g. 32");
    grid_cmd->add_option("--threads", grid_flags.threads, "Worker threads (default: hardware)");
    grid_cmd->add_option("--a", grid_flags.a, "Custom template endpoint");
    grid_cmd->add_option("--b", grid_flags.b, "Custom template endpoint");
    grid_cmd->add_option("--g", grid_flags.g, "Custom template phase, highest degree first");
    grid_cmd->add_option("--omega", grid_flags.omega, "Custom template frequency");
    grid_cmd->add_option("--N", grid_common.n, "Quadrature points per contour")->required();
    grid_cmd->add_option("--f", grid_common.f_name);
    grid_cmd->add_option("--f-poly", grid_common.f_poly);
    grid_cmd->add_option("--type2-rule", grid_common.type2);
    grid_cmd->add_option("--c-ball", grid_common.c_ball);
    grid_cmd->add_option("--n-ball", grid_common.n_ball);
    grid_cmd->add_option("--delta-ball", grid_common.delta_ball);
    grid_cmd->add_option("--delta-ode", grid_common.delta_ode);
    grid_cmd->add_option("--delta-coarse", grid_common.delta_coarse);
    grid_cmd->add_option("--delta-fine", grid_common.delta_fine);
    grid_cmd->add_option("--delta-quad", grid_common.delta_quad);

    CommonFlags bench_flags;
    std::string omega_list, n_list;
    int repeats = 1;
    auto* bench_cmd = app.add_subcommand("bench", "Sweep omega and N, reporting timings");
    bench_cmd->add_option("--a", bench_flags.a)->required();
    bench_cmd->add_option("--b", bench_flags.b)->required();
    bench_cmd->add_option("--g", bench_flags.g)->required();
    bench_cmd->add_option("--omega-list", omega_list, "Comma-separated omegas")->required();
    bench_cmd->add_option("--n-list", n_list, "Comma-separated N values")->required();
    bench_cmd->add_option("--repeats", repeats, "Timing repetitions per combination");
    bench_cmd->add_option("--f", bench_flags.f_name);
    bench_cmd->add_option("--f-poly", bench_flags.f_poly);
    bench_cmd->add_option("--type2-rule", bench_flags.type2);
    bench_cmd->add_option("--c-ball", bench_flags.c_ball);
    bench_cmd->add_option("--n-ball", bench_flags.n_ball);
    bench_cmd->add_option("--delta-ball", bench_flags.delta_ball);
    bench_cmd->add_option("--delta-ode", bench_flags.delta_ode);
    bench_cmd->add_option("--delta-coarse", bench_flags.delta_coarse);
    bench_cmd->add_option("--delta-fine", bench_flags.delta_fine);
    bench_cmd->add_option("--delta-quad", bench_flags.delta_quad);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (eval_cmd->parsed())
            return run_eval(eval_flags);
        if (def_cmd->parsed())
            return run_deformation(def_flags, def_out);
        if (grid_cmd->parsed())
            return run_grid(grid_flags, grid_common);
        if (bench_cmd->parsed()) {
            bench_flags.omega = 1.0; // overwritten per sweep entry
            bench_flags.n = 1;
            return run_bench(bench_flags, omega_list, n_list, repeats);
        }
    } catch (const InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInput;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerical;
    }
    return kExitInput;
}
