#include "cqsmooth/tables.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cqsmooth/hadamard.hpp"

namespace cqsmooth::tables {

std::string case_name(CaseId id) {
    switch (id) {
        case CaseId::a: return "a";
        case CaseId::b_conv: return "b-conv";
        case CaseId::b_prod: return "b-prod";
        case CaseId::c_power: return "c-power";
        case CaseId::c_conv: return "c-conv";
        case CaseId::c_prod: return "c-prod";
    }
    return "?";
}

std::optional<CaseId> parse_case(const std::string& name) {
    for (CaseId id : {CaseId::a, CaseId::b_conv, CaseId::b_prod, CaseId::c_power, CaseId::c_conv,
                      CaseId::c_prod})
        if (case_name(id) == name) return id;
    return std::nullopt;
}

bool case_is_subdiffusion(CaseId id) {
    return id == CaseId::c_power || id == CaseId::c_conv || id == CaseId::c_prod;
}

bool case_uses_mu(CaseId id) { return id != CaseId::a; }

std::vector<std::pair<double, double>> default_axes(CaseId id) {
    if (id == CaseId::a) return {{1.3, 0.0}, {1.7, 0.0}};
    if (case_is_subdiffusion(id)) return {{0.3, -1.8}, {0.7, -1.2}};
    return {{1.3, -1.8}, {1.7, -1.2}};
}

void ExperimentPlan::validate() const {
    cq::check_step_number(k);
    if (!(T > 0)) throw std::invalid_argument("plan: horizon T must be positive");
    if (M < 2) throw std::invalid_argument("plan: spatial resolution M must be >= 2");
    if (Ns.size() < 2) throw std::invalid_argument("plan: need at least two N values");
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        if (Ns[i] < 1) throw std::invalid_argument("plan: N values must be positive");
        if (i > 0 && Ns[i] != 2 * Ns[i - 1])
            throw std::invalid_argument("plan: N list must be strictly increasing with each "
                                        "entry double the previous");
    }
    for (int m : ms)
        if (m < 2 || m > k + 1)
            throw std::invalid_argument("plan: smoothing level m must lie in 2..k+1");
    for (double g : gammas) {
        if (g == 1.0) throw std::invalid_argument("plan: gamma = 1 is excluded");
        if (!(g > 0 && g < 2))
            throw std::invalid_argument("plan: gamma must lie in (0,1) or (1,2)");
    }
    for (double mu : mus)
        if (!(mu > -2 && mu < -1))
            throw std::invalid_argument("plan: mu must lie in (-2,-1) for singular cases");
    if (!gammas.empty() && !mus.empty() && gammas.size() != mus.size())
        throw std::invalid_argument("plan: gamma and mu lists pair elementwise and must have "
                                    "equal length");
}

double laplacian_spectral_radius(int M) {
    const auto op = spectral::laplacian_dirichlet<double>(M);
    const std::size_t n = op.matrix.rows();
    std::vector<double> v(n, 1.0);
    double lambda = 0;
    for (int it = 0; it < 600; ++it) {
        auto w = op.matrix.apply(v);
        double norm = 0;
        for (double x : w) norm = std::max(norm, std::abs(x));
        for (double& x : w) x /= norm;
        lambda = norm;
        v = std::move(w);
    }
    return lambda;
}

// Dense-interval spectrum model: the CGL Dirichlet spectrum spreads from
// about pi^2/4 up to the spectral radius, so a run is predicted stable iff
// [lambda_min, lambda_max] misses the annulus (R_lo, R_hi) scaled by
// (N/T)^gamma.
std::vector<int> predicted_stable_Ns(double gamma, int k, int M, const std::vector<int>& Ns,
                                     double T) {
    if (evolve::stability_check(gamma, k) == evolve::Stability::unconditional) return Ns;
    const auto annulus = evolve::stability_annulus(gamma, k);
    if (!annulus) return Ns;
    const double lam_max = laplacian_spectral_radius(M);
    const double lam_min = 2.4674;  // pi^2/4, the smallest Dirichlet eigenvalue
    std::vector<int> stable;
    for (int N : Ns) {
        const double scale = std::pow(N / T, gamma);
        const double lo = annulus->first * scale, hi = annulus->second * scale;
        const bool intersects = lam_max > lo && lam_min < hi;
        if (!intersects) stable.push_back(N);
    }
    return stable;
}

int stable_resolution(double gamma, int k, int M_cap, const std::vector<int>& Ns, double T) {
    const auto annulus = evolve::stability_annulus(gamma, k);
    if (!annulus) return M_cap;
    const int N_min = *std::min_element(Ns.begin(), Ns.end());
    const double limit = 0.8 * annulus->first * std::pow(N_min / T, gamma);
    for (int M = M_cap; M >= 4; --M) {
        if (laplacian_spectral_radius(M) <= limit) return M;
    }
    return 4;
}

// For gamma >= gamma*(k) the requested resolution is overridden by the
// largest one whose spectrum clears the instability annulus at every N of the
// sweep. Runs with eigenvalues merely close to the annulus edge are already
// ruined in practice: the associated root of delta^gamma(xi) = lambda tau^gamma
// sits just outside the unit circle and rings down so slowly that terminal
// values stay polluted far above the temporal error (observed at 1e-6 for
// M=32, gamma=1.7, N=800), so a margin below the lower edge is mandatory.
int plan_resolution(double gamma, int k, int M_requested, const std::vector<int>& Ns, double T,
                    std::string* note) {
    if (evolve::stability_check(gamma, k) == evolve::Stability::unconditional) return M_requested;
    const auto stable = predicted_stable_Ns(gamma, k, M_requested, Ns, T);
    if (stable.size() == Ns.size()) return M_requested;
    const int M_safe = stable_resolution(gamma, k, M_requested, Ns, T);
    if (note)
        *note = "conditionally stable and resolution-limited: M=" +
                std::to_string(M_requested) + " intersects the instability annulus, using M=" +
                std::to_string(M_safe);
    return M_safe;
}

namespace {

std::string format_double(double v, const char* fmt) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

}  // namespace

void emit(const ConvergenceTable& table, Format format, std::ostream& out) {
    if (format == Format::csv) {
        out << "gamma,mu,m,N,diff_norm,order,roundoff_flag\n";
        for (const auto& row : table.rows) {
            if (row.solver_failure) continue;
            for (const auto& cell : row.cells) {
                out << format_double(row.gamma, "%.10g") << ',';
                if (row.has_mu) out << format_double(row.mu, "%.10g");
                out << ',' << row.m << ',' << cell.N << ','
                    << format_double(cell.diff_norm, "%.10e") << ',';
                if (cell.order) out << format_double(*cell.order, "%.6f");
                out << ',' << (cell.roundoff ? 1 : 0) << '\n';
            }
        }
        return;
    }

    // markdown mirroring the published layout: one row per m, one column per
    // N (the entry at column N is ||u^{N/2} - u^N||), trailing Rate
    out << "## case " << case_name(table.case_id) << " (k=" << table.k << ", T=" << table.T
        << ")\n";
    std::pair<double, double> current{-1, -1};
    bool first_group = true;
    for (const auto& row : table.rows) {
        if (std::pair{row.gamma, row.mu} != current) {
            current = {row.gamma, row.mu};
            out << "\n### gamma=" << format_double(row.gamma, "%.4g");
            if (row.has_mu) out << ", mu=" << format_double(row.mu, "%.4g");
            out << " (M=" << row.M_used << ")\n\n";
            out << "| m |";
            for (const auto& cell : row.cells) out << " N=" << cell.N << " |";
            out << " Rate |\n|---|";
            for (std::size_t i = 0; i < row.cells.size(); ++i) out << "---|";
            out << "---|\n";
            first_group = false;
        }
        out << "| " << row.m << " |";
        if (row.solver_failure) {
            out << " solver failure: " << row.note << " |\n";
            continue;
        }
        for (const auto& cell : row.cells) {
            out << ' ' << format_double(cell.diff_norm, "%.4e");
            if (cell.unstable) out << "*";
            else if (cell.roundoff) out << "!";
            out << " |";
        }
        if (row.rate) out << ' ' << format_double(*row.rate, "%.4f") << " |\n";
        else out << " - |\n";
    }
    out << "\n(* unstable run pair, excluded from rates; ! difference below 1e-12, the double"
           "-precision trust floor)\n";
    for (const auto& row : table.rows) {
        if (!row.note.empty()) {
            out << "- m=" << row.m << ", gamma=" << format_double(row.gamma, "%.4g") << ": "
                << row.note << "\n";
        }
    }
    (void)first_group;
}

void emit_file(const ConvergenceTable& table, Format format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    emit(table, format, out);
}

bool run_oracle_validation(std::ostream& out) {
    bool all_pass = true;
    out << "scalar-mode validation against the Mittag-Leffler exact solution\n";
    for (double gamma : {0.7, 1.3}) {
        for (int k : {1, 2}) {
            oracle::ScalarModeProblem p;
            p.gamma = gamma;
            p.lambda = -1.0;
            p.ups0 = 1.0;
            p.b0 = gamma > 1 ? 1.0 : 0.0;
            p.q0 = 1.0;
            p.mu = -1.2;
            const double exact = oracle::scalar_exact_solution(p, 1.0);
            source::SourceDescriptor<double> src;
            src.kind = source::Kind::power;
            src.mu = p.mu;
            src.spatial = [](const double&) { return 1.0; };
            std::vector<double> errs;
            for (int N : {64, 128, 256, 512, 1024}) {
                auto traj = evolve::advance_scalar_mode<double>(gamma, k, 2, 1.0, N, p.lambda,
                                                                p.ups0, p.b0, src);
                errs.push_back(std::abs(traj.states_u.back()[0] - exact));
            }
            bool decreasing = true;
            for (std::size_t i = 1; i < errs.size(); ++i) decreasing &= errs[i] < errs[i - 1];
            const auto orders = oracle::convergence_order(errs);
            const double final_order = orders.back();
            const bool pass = decreasing && final_order >= k - 0.2;
            all_pass &= pass;
            out << "  gamma=" << gamma << " k=" << k << " m=2: err(N=1024)="
                << format_double(errs.back(), "%.3e") << " final order "
                << format_double(final_order, "%.4f") << " (need >= " << k - 0.2 << ") "
                << (pass ? "PASS" : "FAIL") << "\n";
        }
    }
    return all_pass;
}

bool run_seed_check(std::ostream& out) {
    bool all = true;
    auto report = [&](const char* name, bool ok) {
        all &= ok;
        out << "  " << name << ": " << (ok ? "PASS" : "FAIL") << "\n";
    };

    {  // CQ group property
        const int n = 48;
        auto a = cq::cq_weights(0.3, 6, n), b = cq::cq_weights(0.7, 6, n),
             c = cq::cq_weights(1.0, 6, n);
        auto conv = cq::convolve(a.weights, b.weights, n);
        double worst = 0, scale = 0;
        for (int j = 0; j <= n; ++j) {
            worst = std::max(worst, std::abs(conv[j] - c.weights[j]));
            scale = std::max(scale, std::abs(c.weights[j]));
        }
        report("cq weight group property", worst <= 1e-12 * std::max(1.0, scale));
    }
    {  // integer consistency
        auto p = cq::bdf_polynomial<double>(6);
        std::vector<double> ref = {1.0};
        const int n = 28;
        for (int i = 0; i < 4; ++i) ref = cq::convolve(ref, p.coeffs, n);
        auto w = cq::cq_weights(4.0, 6, n);
        double worst = 0, scale = 0;
        for (int j = 0; j <= n; ++j) {
            worst = std::max(worst, std::abs(ref[j] - w.weights[j]));
            scale = std::max(scale, std::abs(ref[j]));
        }
        report("integer-order weight consistency", worst <= 1e-14 * std::max(1.0, scale));
    }
    {  // finite-part closed forms
        auto one = [](const double&) { return 1.0; };
        auto zero = [](const double&) { return 0.0; };
        bool ok = true;
        for (double mu : {-1.2, -1.5, -1.8}) {
            const double got = hadamard::finite_part_primitive(mu, one, zero, 0.7);
            const double expect = hadamard::hadamard_power_integral(-mu, 0.7);
            ok &= std::abs(got - expect) <= 1e-14 * std::abs(expect);
        }
        auto ident = [](const double& s) { return s; };
        const double conv = hadamard::finite_part_convolution(-1.5, ident, one, 1.0);
        ok &= std::abs(conv - (-4.0)) <= 1e-12;
        report("finite-part closed forms", ok);
    }
    {  // G^0 = 0
        source::SourceDescriptor<double> d;
        d.kind = source::Kind::product;
        d.mu = -1.5;
        d.temporal = source::exp_factor<double>();
        auto g = source::smoothed_grid(d, 2, 0.125, 8, {0.0});
        bool ok = true;
        for (double v : g.samples[0]) ok &= v == 0.0;
        report("smoothed source vanishes at t=0", ok);
    }
    {  // spectral polynomial exactness
        auto dmat = spectral::differentiation_matrix<double>(8);
        auto x = spectral::cgl_nodes<double>(8);
        std::vector<double> quint(9);
        for (int j = 0; j <= 8; ++j) quint[j] = std::pow(x[j], 5);
        auto dq = dmat.apply(quint);
        bool ok = true;
        for (int j = 0; j <= 8; ++j) ok &= std::abs(dq[j] - 5 * std::pow(x[j], 4)) < 1e-10;
        report("spectral differentiation exactness", ok);
    }
    {  // solver: zero fixed point and linearity
        evolve::ProblemSpec<double> spec;
        spec.gamma = 0.5;
        spec.k = 2;
        spec.m = 2;
        spec.N = 16;
        spec.M = 8;
        auto traj = evolve::advance(spec);
        bool ok = true;
        for (const auto& v : traj.states_V)
            for (double xv : v) ok &= xv == 0.0;
        report("zero-data fixed point", ok);

        auto run = [](double c_ups, double q0) {
            evolve::ProblemSpec<double> s2;
            s2.gamma = 0.7;
            s2.k = 2;
            s2.m = 2;
            s2.N = 16;
            s2.M = 8;
            s2.upsilon = [c_ups](const double& x) { return c_ups * (1 - x * x); };
            s2.src.kind = source::Kind::power;
            s2.src.mu = -1.5;
            s2.src.spatial = [q0](const double&) { return q0; };
            return evolve::advance(s2);
        };
        auto t1 = run(1.0, 0.0), t2 = run(0.0, 1.0), t12 = run(1.0, 1.0);
        double worst = 0, scale = 0;
        for (std::size_t j = 0; j < t12.states_V[16].size(); ++j) {
            worst = std::max(worst, std::abs(t1.states_V[16][j] + t2.states_V[16][j] -
                                             t12.states_V[16][j]));
            scale = std::max(scale, std::abs(t12.states_V[16][j]));
        }
        report("solver linearity", worst <= 1e-12 * std::max(1.0, scale));
    }
    return all;
}

}  // namespace cqsmooth::tables
