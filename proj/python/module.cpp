// Python bindings for the double-precision operations: CQ weights, Hadamard
// finite-part primitives, smoothed sources, spectral collocation pieces, the
// stepper (scalar mode and the small-scale PDE path) and the oracles.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cqsmooth/oracle.hpp"
#include "cqsmooth/solver.hpp"
#include "cqsmooth/tables.hpp"

namespace py = pybind11;
using namespace cqsmooth;

namespace {

source::SourceDescriptor<double> make_source(const std::string& kind, double mu,
                                             std::function<double(double)> spatial,
                                             bool unit_summand) {
    source::SourceDescriptor<double> d;
    if (kind == "zero") d.kind = source::Kind::zero;
    else if (kind == "power") d.kind = source::Kind::power;
    else if (kind == "convolution") d.kind = source::Kind::convolution;
    else if (kind == "product") d.kind = source::Kind::product;
    else if (kind == "regular") d.kind = source::Kind::regular;
    else throw std::invalid_argument("unknown source kind: " + kind);
    d.mu = mu;
    d.temporal = source::exp_factor<double>();
    if (spatial) d.spatial = [spatial](const double& x) { return spatial(x); };
    d.unit_summand = unit_summand;
    return d;
}

std::vector<std::vector<double>> matrix_to_lists(const Matrix<double>& m) {
    std::vector<std::vector<double>> out(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
    return out;
}

}  // namespace

PYBIND11_MODULE(_cqsmooth, mod) {
    mod.doc() = "convolution-quadrature solver for fractional evolution equations with "
                "hyper-singular sources (double-precision operations)";

    mod.def("bdf_polynomial", [](int k) { return cq::bdf_polynomial<double>(k).coeffs; },
            py::arg("k"), "coefficients of tau*delta_{tau,k}(xi)");
    mod.def(
        "cq_weights",
        [](double order, int k, int n_max) { return cq::cq_weights(order, k, n_max).weights; },
        py::arg("order"), py::arg("k"), py::arg("n_max"),
        "power-series coefficients of delta_k(xi)^order");
    mod.def(
        "discrete_conv_derivative",
        [](double order, int k, const std::vector<double>& values, double tau) {
            auto w = cq::cq_weights(order, k, static_cast<int>(values.size()) - 1);
            return cq::discrete_conv_derivative_scalar(w, values, tau);
        },
        py::arg("order"), py::arg("k"), py::arg("values"), py::arg("tau"),
        "CQ fractional derivative of a scalar history at its last grid point");

    mod.def("hadamard_power_integral", &hadamard::hadamard_power_integral<double>,
            py::arg("beta"), py::arg("t"));
    mod.def("smooth_power_source", &hadamard::smooth_power_source<double>, py::arg("mu"),
            py::arg("m"), py::arg("t"));
    mod.def(
        "finite_part_primitive",
        [](double mu, std::function<double(double)> f, std::function<double(double)> fprime,
           double t, int nodes) {
            return hadamard::finite_part_primitive(
                mu, [&](const double& s) { return f(s); },
                [&](const double& s) { return fprime(s); }, t, nodes);
        },
        py::arg("mu"), py::arg("f"), py::arg("fprime"), py::arg("t"), py::arg("nodes") = 32);
    mod.def(
        "finite_part_convolution",
        [](double mu, std::function<double(double)> f, std::function<double(double)> fprime,
           double t, int nodes) {
            return hadamard::finite_part_convolution(
                mu, [&](const double& s) { return f(s); },
                [&](const double& s) { return fprime(s); }, t, nodes);
        },
        py::arg("mu"), py::arg("f"), py::arg("fprime"), py::arg("t"), py::arg("nodes") = 32);
    mod.def(
        "singular_quadrature",
        [](double alpha, std::function<double(double)> g, double a, double b, int nodes,
           const std::string& side) {
            return quad::singular_quadrature(
                alpha, [&](const double& s) { return g(s); }, a, b, nodes,
                side == "right" ? quad::SingularSide::right : quad::SingularSide::left);
        },
        py::arg("alpha"), py::arg("integrand"), py::arg("a"), py::arg("b"), py::arg("nodes") = 32,
        py::arg("side") = "left");
    mod.def(
        "smoothed_scalar",
        [](const std::string& kind, double mu, int m, double t, bool unit_summand, int nodes) {
            auto d = make_source(kind, mu, nullptr, unit_summand);
            return source::ScalarSmoother<double>(d, m, {nodes, 1, true})(t);
        },
        py::arg("kind"), py::arg("mu"), py::arg("m"), py::arg("t"),
        py::arg("unit_summand") = false, py::arg("nodes") = 32,
        "time-scalar factor of the smoothed source G = J^m g");

    mod.def("cgl_nodes", &spectral::cgl_nodes<double>, py::arg("M"));
    mod.def(
        "differentiation_matrix",
        [](int M) { return matrix_to_lists(spectral::differentiation_matrix<double>(M)); },
        py::arg("M"));
    mod.def(
        "laplacian_dirichlet",
        [](int M) { return matrix_to_lists(spectral::laplacian_dirichlet<double>(M).matrix); },
        py::arg("M"), "interior Dirichlet collocation Laplacian");
    mod.def("clenshaw_curtis_weights", &spectral::clenshaw_curtis_weights<double>, py::arg("M"));

    mod.def("mittag_leffler", &oracle::mittag_leffler, py::arg("a"), py::arg("b"), py::arg("z"));
    mod.def(
        "scalar_exact_solution",
        [](double gamma, double lam, double ups0, double b0, double q0, double mu, double t) {
            oracle::ScalarModeProblem p;
            p.gamma = gamma;
            p.lambda = lam;
            p.ups0 = ups0;
            p.b0 = b0;
            p.q0 = q0;
            p.mu = mu;
            return oracle::scalar_exact_solution(p, t);
        },
        py::arg("gamma"), py::arg("lam"), py::arg("ups0") = 0.0, py::arg("b0") = 0.0,
        py::arg("q0") = 0.0, py::arg("mu") = -1.5, py::arg("t") = 1.0);
    mod.def("convergence_order", &oracle::convergence_order, py::arg("errs"));

    mod.def("stability_gamma_star", &evolve::gamma_star, py::arg("k"));
    mod.def(
        "stability_check",
        [](double gamma, int k) {
            return evolve::stability_check(gamma, k) == evolve::Stability::conditional
                       ? "conditional"
                       : "unconditional";
        },
        py::arg("gamma"), py::arg("k"));
    mod.def(
        "stability_annulus",
        [](double gamma, int k) -> py::object {
            auto a = evolve::stability_annulus(gamma, k);
            if (!a) return py::none();
            return py::make_tuple(a->first, a->second);
        },
        py::arg("gamma"), py::arg("k"));

    mod.def(
        "advance_scalar_mode",
        [](double gamma, int k, int m, double T, int N, double lam, double ups0, double b0,
           const std::string& source_kind, double mu, double q0) {
            auto src = make_source(source_kind, mu, [q0](double) { return q0; }, false);
            if (source_kind == "zero") src.spatial = nullptr;
            auto traj = evolve::advance_scalar_mode<double>(gamma, k, m, T, N, lam, ups0, b0, src);
            std::vector<double> u(traj.states_u.size());
            for (std::size_t n = 0; n < u.size(); ++n) u[n] = traj.states_u[n][0];
            return u;
        },
        py::arg("gamma"), py::arg("k"), py::arg("m"), py::arg("T"), py::arg("N"), py::arg("lam"),
        py::arg("ups0") = 0.0, py::arg("b0") = 0.0, py::arg("source_kind") = "zero",
        py::arg("mu") = -1.5, py::arg("q0") = 0.0,
        "scalar-mode run; returns u^0..u^N");

    mod.def(
        "advance",
        [](double gamma, int k, int m, double T, int N, int M,
           std::function<double(double)> upsilon, std::function<double(double)> b,
           const std::string& source_kind, double mu,
           std::function<double(double)> spatial, bool unit_summand) {
            evolve::ProblemSpec<double> spec;
            spec.gamma = gamma;
            spec.k = k;
            spec.m = m;
            spec.T = T;
            spec.N = N;
            spec.M = M;
            if (upsilon) spec.upsilon = [upsilon](const double& x) { return upsilon(x); };
            if (b) spec.b = [b](const double& x) { return b(x); };
            spec.src = make_source(source_kind, mu, spatial, unit_summand);
            auto traj = evolve::advance(spec);
            py::dict out;
            out["u"] = traj.states_u;
            out["V"] = traj.states_V;
            out["times"] = traj.times;
            out["unstable"] = traj.metadata.unstable;
            return out;
        },
        py::arg("gamma"), py::arg("k"), py::arg("m"), py::arg("T"), py::arg("N"), py::arg("M"),
        py::arg("upsilon") = nullptr, py::arg("b") = nullptr, py::arg("source_kind") = "zero",
        py::arg("mu") = -1.5, py::arg("spatial") = nullptr, py::arg("unit_summand") = false,
        "double-precision PDE run at interior CGL nodes");

    mod.attr("__version__") = "0.1.0";
}
