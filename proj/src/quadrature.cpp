#include "pathfinder/quadrature.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "pathfinder/errors.hpp"

namespace pathfinder {

namespace {

// Truncating the rescaled integrand beyond this point is invisible at double
// precision (e^-745 underflows).
constexpr double kMaxTruncation = 745.0;

std::vector<double> tridiagonal_eigenvalues(const std::vector<double>& diag,
                                            const std::vector<double>& offdiag) {
    const int n = static_cast<int>(diag.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        m(i, i) = diag[i];
    for (int i = 0; i + 1 < n; ++i)
        m(i, i + 1) = m(i + 1, i) = offdiag[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericalError("quadrature: tridiagonal eigen-solve failed");
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i)
        ev[i] = solver.eigenvalues()(i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

// Legendre P_n(x) and P_{n-1}(x) by the three-term recurrence. Extended
// precision keeps the refined nodes/weights exact to the 1e-13 gate at
// N = 200.
std::pair<double, double> legendre_pair(int n, double x) {
    long double pm = 1.0L, p = x;
    for (int k = 1; k < n; ++k) {
        const long double next = ((2.0L * k + 1.0L) * x * p - k * pm) / (k + 1.0L);
        pm = p;
        p = next;
    }
    return {static_cast<double>(p), static_cast<double>(pm)};
}

QuadratureRule make_legendre(int n) {
    QuadratureRule rule;
    if (n == 1) {
        rule.nodes = {0.0};
        rule.weights = {2.0};
        return rule;
    }
    std::vector<double> diag(n, 0.0), off(n - 1);
    for (int k = 1; k < n; ++k)
        off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    rule.nodes = tridiagonal_eigenvalues(diag, off);

    for (double& x : rule.nodes) {
        for (int it = 0; it < 2; ++it) {
            const auto [p, pm] = legendre_pair(n, x);
            const double dp = n * (x * p - pm) / (x * x - 1.0);
            if (dp != 0.0)
                x -= p / dp;
        }
    }
    // Enforce exact symmetry of the rule.
    for (int i = 0; i < n / 2; ++i) {
        const double x = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
    }
    if (n % 2 == 1)
        rule.nodes[n / 2] = 0.0;

    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x = rule.nodes[i];
        const auto [p, pm] = legendre_pair(n, x);
        const double dp = n * (x * p - pm) / (x * x - 1.0);
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

// Scaled Laguerre values l_k(x) = L_k(x) e^{-x/2} for k = n and n-1; the
// scaling keeps the recurrence inside floating-point range for all nodes.
std::pair<double, double> laguerre_scaled_pair(int n, double x) {
    const long double s = std::exp(-0.5L * static_cast<long double>(x));
    long double lm = s, l = (1.0L - x) * s;
    for (int k = 1; k < n; ++k) {
        const long double next = ((2.0L * k + 1.0L - x) * l - k * lm) / (k + 1.0L);
        lm = l;
        l = next;
    }
    return {static_cast<double>(l), static_cast<double>(lm)};
}

QuadratureRule make_laguerre(int n) {
    QuadratureRule rule;
    std::vector<double> diag(n), off(std::max(0, n - 1));
    for (int k = 0; k < n; ++k)
        diag[k] = 2.0 * k + 1.0;
    for (int k = 1; k < n; ++k)
        off[k - 1] = k;
    rule.nodes = n == 1 ? std::vector<double>{1.0} : tridiagonal_eigenvalues(diag, off);

    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double& x = rule.nodes[i];
        for (int it = 0; it < 2; ++it) {
            const auto [l, lm] = laguerre_scaled_pair(n, x);
            const double denom = n * (l - lm); // = x L_n'(x) e^{-x/2}
            if (denom != 0.0)
                x -= x * l / denom;
        }
        const auto [lnext, ln] = laguerre_scaled_pair(n + 1, x);
        (void)ln;
        const double np1 = n + 1.0;
        rule.weights[i] = x * std::exp(-x) / (np1 * np1 * lnext * lnext);
    }
    return rule;
}

const QuadratureRule& cached_rule(int n, bool laguerre) {
    if (n < 1)
        throw InputError("quadrature: rule size must be >= 1");
    static std::mutex mutex;
    static std::map<int, QuadratureRule> legendre_cache;
    static std::map<int, QuadratureRule> laguerre_cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& cache = laguerre ? laguerre_cache : legendre_cache;
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, laguerre ? make_laguerre(n) : make_legendre(n)).first;
    return it->second;
}

Complex oscillatory_factor(const PhaseContext& ctx, Complex z) {
    return std::exp(Complex(0.0, 1.0) * ctx.omega * ctx.g.eval(z));
}

double log_magnitude(const PhaseContext& ctx, Complex z) {
    return -ctx.omega * ctx.g.eval(z).imag();
}

Complex sd_integrand(const Amplitude& f, const PhaseContext& ctx, Complex h) {
    const Complex gp = ctx.gp.eval(h);
    if (gp == Complex(0.0))
        throw NumericalError("quadrature: g' vanished on an SD contour");
    return Complex(0.0, 1.0) * f(h) / gp;
}

double truncation_length(const SDPath& path, const PhaseContext& ctx, double delta_quad,
                         double log_m) {
    if (delta_quad <= 0.0)
        return kMaxTruncation;
    const double l = log_magnitude(ctx, path.origin) - log_m - std::log(delta_quad);
    return std::min(l, kMaxTruncation);
}

Complex truncated_legendre(SDPath& path, const Amplitude& f, const RefineEnv& env, int n,
                           double truncation, double delta_fine, std::vector<Complex>* nodes_out) {
    const auto& rule = gauss_legendre(n);
    const double omega = env.ctx.omega;
    const Complex pref = std::exp(Complex(0.0, 1.0) * omega * env.ctx.g.eval(path.origin));
    Complex sum(0.0);
    for (int m = 0; m < n; ++m) {
        const double pt = 0.5 * truncation * (rule.nodes[m] + 1.0);
        const Complex h = refine_point(path, pt / omega, delta_fine, env.ctx, env.stationary, env.trace);
        if (nodes_out)
            nodes_out->push_back(h);
        sum += rule.weights[m] * sd_integrand(f, env.ctx, h) * std::exp(-pt);
    }
    return truncation * pref / (2.0 * omega) * sum;
}

} // namespace

const QuadratureRule& gauss_legendre(int n) {
    return cached_rule(n, false);
}

const QuadratureRule& gauss_laguerre(int n) {
    return cached_rule(n, true);
}

Complex type1(Complex z0, Complex z1, const Amplitude& f, const PhaseContext& ctx, int n,
              std::vector<Complex>* nodes_out) {
    const auto& rule = gauss_legendre(n);
    const Complex mid = 0.5 * (z0 + z1);
    const Complex half = 0.5 * (z1 - z0);
    Complex sum(0.0);
    for (int m = 0; m < n; ++m) {
        const Complex z = half * rule.nodes[m] + mid;
        if (nodes_out)
            nodes_out->push_back(z);
        sum += rule.weights[m] * f(z) * oscillatory_factor(ctx, z);
    }
    return half * sum;
}

Complex type2_laguerre(SDPath& path, const Amplitude& f, const RefineEnv& env, int n,
                       double delta_fine, std::vector<Complex>* nodes_out) {
    const auto& rule = gauss_laguerre(n);
    const double omega = env.ctx.omega;
    const Complex pref = std::exp(Complex(0.0, 1.0) * omega * env.ctx.g.eval(path.origin)) / omega;
    Complex sum(0.0);
    for (int m = 0; m < n; ++m) {
        const Complex h =
            refine_point(path, rule.nodes[m] / omega, delta_fine, env.ctx, env.stationary, env.trace);
        if (nodes_out)
            nodes_out->push_back(h);
        sum += rule.weights[m] * sd_integrand(f, env.ctx, h);
    }
    return pref * sum;
}

Complex type2_legendre(SDPath& path, const Amplitude& f, const RefineEnv& env, int n,
                       double delta_quad, double log_m, double delta_fine,
                       std::vector<Complex>* nodes_out) {
    const double l = truncation_length(path, env.ctx, delta_quad, log_m);
    return truncated_legendre(path, f, env, n, l, delta_fine, nodes_out);
}

Complex type3(SDPath& path, const Amplitude& f, const RefineEnv& env, int n, double delta_quad,
              double log_m, double delta_fine, std::vector<Complex>* nodes_out) {
    const double l = truncation_length(path, env.ctx, delta_quad, log_m);
    const double truncation = std::min(env.ctx.omega * path.p_max(), l);
    return truncated_legendre(path, f, env, n, truncation, delta_fine, nodes_out);
}

double contribution_log_scale(const QuasiSDDeformation& deformation, const Graph& graph,
                              const PhaseContext& ctx) {
    double best = -std::numeric_limits<double>::infinity();
    for (int vi : deformation.vertices) {
        const Vertex& v = graph.vertices[vi];
        if (v.kind == VertexKind::Stationary || v.kind == VertexKind::FiniteEndpoint ||
            v.kind == VertexKind::Exit)
            best = std::max(best, log_magnitude(ctx, v.location));
    }
    if (!std::isfinite(best)) {
        for (int vi : deformation.vertices)
            if (graph.vertices[vi].kind != VertexKind::Valley)
                best = std::max(best, log_magnitude(ctx, graph.vertices[vi].location));
    }
    return std::isfinite(best) ? best : 0.0;
}

double contribution_scale(const QuasiSDDeformation& deformation, const Graph& graph,
                          const PhaseContext& ctx) {
    return std::exp(contribution_log_scale(deformation, graph, ctx));
}

AssembleResult assemble(const QuasiSDDeformation& deformation, const Graph& graph,
                        std::vector<SDPath>& paths, const Amplitude& f, const RefineEnv& env,
                        const QuadratureOptions& options) {
    if (options.n < 1)
        throw InputError("assemble: quadrature size must be >= 1");
    AssembleResult result;
    if (deformation.edges.empty())
        return result;

    const double log_m = contribution_log_scale(deformation, graph, env.ctx);
    const double log_delta = options.delta_quad > 0.0 ? std::log(options.delta_quad)
                                                      : -std::numeric_limits<double>::infinity();
    int active = 0;
    for (const OrientedEdge& oe : deformation.edges) {
        const Edge& e = graph.edges[oe.edge];
        ContourContribution contribution;
        contribution.edge = oe.edge;

        double brightness;
        if (e.kind == EdgeKind::BallLine) {
            brightness = std::max(log_magnitude(env.ctx, graph.vertices[e.u].location),
                                  log_magnitude(env.ctx, graph.vertices[e.v].location));
        } else {
            const SDPath& path = paths[e.path];
            brightness = log_magnitude(env.ctx, path.origin);
            if (path.terminal.kind == SDTerminal::Kind::Entrance)
                brightness = std::max(brightness, log_magnitude(env.ctx, path.terminal.point));
        }

        if (!(brightness - log_m > log_delta)) {
            contribution.skipped = true;
            result.contributions.push_back(std::move(contribution));
            continue;
        }

        std::vector<Complex>* rec = options.record_nodes ? &contribution.nodes : nullptr;
        Complex value;
        if (e.kind == EdgeKind::BallLine) {
            value = type1(graph.vertices[e.u].location, graph.vertices[e.v].location, f, env.ctx,
                          options.n, rec);
        } else if (paths[e.path].terminal.kind == SDTerminal::Kind::Valley) {
            value = options.type2_rule == Type2Rule::Laguerre
                        ? type2_laguerre(paths[e.path], f, env, options.n, options.delta_fine, rec)
                        : type2_legendre(paths[e.path], f, env, options.n, options.delta_quad,
                                         log_m, options.delta_fine, rec);
        } else {
            value = type3(paths[e.path], f, env, options.n, options.delta_quad, log_m,
                          options.delta_fine, rec);
        }
        contribution.value = value;
        contribution.nodes_used = options.n;
        result.value += static_cast<double>(oe.sign) * value;
        ++active;
        result.contributions.push_back(std::move(contribution));
    }
    result.n_total = static_cast<long>(options.n) * active;
    return result;
}

} // namespace pathfinder
