#pragma once

// Fast invariant checks behind `qpat selftest`. The full suites live under tests/.

#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "qpat/qpat.hpp"

namespace qpat {

namespace selftest_detail {

inline double manufactured_error(int n) {
    const Grid2D g(-1.0, 1.0, n);
    const double pi = std::numbers::pi;
    auto exact = [pi](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); };
    const ScalarField f = ScalarField::sample(g, [&](double x, double y) { return (2.0 * pi * pi + 1.0) * exact(x, y); });
    const ScalarField u = solve(EllipticProblem{ScalarField(g, 1.0), ScalarField(g, 1.0), f, ScalarField(g)}, 1e-13);
    return l2_norm_weighted(u - ScalarField::sample(g, exact));
}

inline ReducedProblem disk_problem(int n, double gamma) {
    RunConfig cfg = resolve_config(json{{"case_id", 1},
                                        {"problem", {{"N_coarse", n}, {"N_fine", 2 * n}}},
                                        {"weights", {{"gamma", gamma}}}});
    SyntheticCase sc = synthesize(cfg);
    return reduced_problem(cfg, std::move(sc.data));
}

}  // namespace selftest_detail

inline bool run_selftest(std::ostream& os) {
    using namespace selftest_detail;
    struct Check {
        std::string name;
        std::function<bool()> fn;
    };
    const std::vector<Check> checks = {
        {"forward solver second-order (N=16/32)",
         [] {
             const double r = manufactured_error(16) / manufactured_error(32);
             return r > 3.5 && r < 4.5;
         }},
        {"adjoint directional derivative (N=24)",
         [] {
             const ReducedProblem rp = disk_problem(24, 0.0);
             const Grid2D& g = rp.grid();
             ScalarField D(g, 0.03), s(g, 0.2), dD(g), ds(g);
             for (std::size_t n = 0; n < D.size(); ++n) {
                 dD[n] = 0.01 * rng::normal_at(1, n);
                 ds[n] = 0.1 * rng::normal_at(2, n);
             }
             return directional_check(rp, D, s, dD, ds, 1e-5).relative_mismatch() < 1e-4;
         }},
        {"structured minimizer matches exhaustive search",
         [] {
             PhysicalConstants k;
             SearchGrid sg{AdmissibleBox::defaults_for(k), 41, 41, SearchStrategy::structured};
             SearchGrid ex = sg;
             ex.strategy = SearchStrategy::exhaustive;
             const RegularizationWeights w;
             for (std::uint64_t t = 0; t < 50; ++t) {
                 NodeContext c;
                 for (int i = 0; i < 2; ++i) {
                     c.u[i] = 0.1 + rng::unit(rng::draw(t, 10 * i));
                     c.q[i] = 0.01 * rng::normal_at(t, 10 * i + 1);
                     c.grad_u[i] = {rng::normal_at(t, 10 * i + 2), rng::normal_at(t, 10 * i + 3)};
                     c.grad_q[i] = {0.01 * rng::normal_at(t, 10 * i + 4), 0.01 * rng::normal_at(t, 10 * i + 5)};
                     c.G[i] = 0.3 * rng::unit(rng::draw(t, 10 * i + 6));
                 }
                 c.Dk = sg.d_value(static_cast<int>(t % 41));
                 c.sigmak = sg.sigma_value(static_cast<int>((7 * t) % 41));
                 const Candidate a = minimize_node_candidate(c, 1.0, sg, w, k);
                 const Candidate b = minimize_node_candidate(c, 1.0, ex, w, k);
                 if (a.w != b.w || a.z != b.z) return false;
             }
             return true;
         }},
        {"qgrid round trip is bit-exact",
         [] {
             const Grid2D g(-1.0, 1.0, 7);
             ScalarField f(g);
             for (std::size_t n = 0; n < f.size(); ++n) f[n] = rng::normal_at(9, n) * 1e-7;
             return from_qgrid(to_qgrid(f)) == f;
         }},
        {"noise stream is reproducible",
         [] { return rng::normal_at(42, 12345) == NormalStream(42).at(12345); }},
    };

    bool ok = true;
    for (const Check& c : checks) {
        bool pass = false;
        try {
            pass = c.fn();
        } catch (const std::exception& e) {
            os << "  (" << e.what() << ")\n";
        }
        os << (pass ? "PASS  " : "FAIL  ") << c.name << "\n";
        ok = ok && pass;
    }
    return ok;
}

}  // namespace qpat
