#include "maflow/suites.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <future>
#include <thread>

#include "maflow/errors.hpp"
#include "maflow/io.hpp"

namespace maflow {

NodeSet grid_nodes(int n, Scalar lo, Scalar hi) {
    const Scalar h = (hi - lo) / (n - 1);
    std::vector<Vec2> pts;
    std::vector<bool> bnd;
    pts.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            pts.emplace_back(lo + i * h, lo + j * h);
            bnd.push_back(i == 0 || i == n - 1 || j == 0 || j == n - 1);
        }
    return NodeSet(std::move(pts), std::move(bnd), make_box(Vec2(lo, lo), Vec2(hi, hi)));
}

PLFunction random_convex(const NodeSet& ns, std::mt19937_64& rng, Scalar scale) {
    std::uniform_real_distribution<Scalar> slope(-2.0, 2.0);
    std::uniform_real_distribution<Scalar> offset(-1.0, 1.0);
    std::uniform_real_distribution<Scalar> delta(0.1, 1.0);
    std::uniform_real_distribution<Scalar> unit(0.0, 1.0);
    std::uniform_int_distribution<int> plane_count(3, 6);
    std::uniform_int_distribution<int> quad_count(0, 2);

    struct Quad {
        Vec2 c;
        Scalar d;
    };
    std::vector<Vec2> slopes;
    std::vector<Scalar> offsets;
    const int np = plane_count(rng);
    for (int k = 0; k < np; ++k) {
        slopes.emplace_back(slope(rng), slope(rng));
        offsets.push_back(offset(rng));
    }
    std::vector<Quad> quads;
    const int nq = quad_count(rng);
    Vec2 lo = ns.point(0), hi = ns.point(0);
    for (int i = 1; i < ns.size(); ++i) {
        lo = lo.cwiseMin(ns.point(i));
        hi = hi.cwiseMax(ns.point(i));
    }
    for (int k = 0; k < nq; ++k) {
        Vec2 c(lo.x() + unit(rng) * (hi - lo).x(), lo.y() + unit(rng) * (hi - lo).y());
        quads.push_back({c, delta(rng)});
    }

    VecX values(ns.size());
    for (int i = 0; i < ns.size(); ++i) {
        const Vec2& x = ns.point(i);
        Scalar v = -std::numeric_limits<Scalar>::infinity();
        for (std::size_t k = 0; k < slopes.size(); ++k)
            v = std::max(v, slopes[k].dot(x) + offsets[k]);
        for (const Quad& q : quads) v += q.d * (x - q.c).squaredNorm();
        values[i] = scale * v;
    }
    return PLFunction(ns, std::move(values));
}

std::uint64_t case_seed(std::uint64_t master, int case_id) {
    // splitmix64 over the master seed and case index.
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(case_id) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

CaseVerdict to_case(int id, const ComparisonVerdict& v) {
    return {id, v.holds, v.margin, v.interior_min, v.boundary_min};
}

template <typename MakeCase>
SuiteResult run_suite(const std::string& name, int instances, std::uint64_t seed,
                      MakeCase&& make_case) {
    SuiteResult result;
    result.suite = name;
    result.seed = seed;
    result.cases.resize(static_cast<std::size_t>(instances));
    std::vector<int> retries(static_cast<std::size_t>(instances), 0);

    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::future<void>> futures;
    std::atomic<int> next{0};
    for (unsigned w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&] {
            for (int id = next.fetch_add(1); id < instances; id = next.fetch_add(1))
                result.cases[static_cast<std::size_t>(id)] =
                    make_case(id, retries[static_cast<std::size_t>(id)]);
        }));
    }
    for (auto& f : futures) f.get();
    for (int r : retries) result.generation_retries += r;
    return result;
}

} // namespace

SuiteResult run_comparison_suite(int instances, std::uint64_t seed) {
    const NodeSet ns = grid_nodes(9, 0.0, 1.0);
    return run_suite("comparison", instances, seed, [&](int id, int& retries) {
        std::mt19937_64 rng(case_seed(seed, id));
        std::uniform_real_distribution<Scalar> bump_scale(0.1, 1.0);
        for (;;) {
            try {
                PLFunction phi = random_convex(ns, rng);
                PLFunction bump = random_convex(ns, rng, bump_scale(rng));
                PLFunction psi(ns, phi.values + bump.values);
                return to_case(id, check_comparison(phi, psi, 1e-9));
            } catch (const PreconditionFailedError&) {
                if (++retries > 100) throw;
            }
        }
    });
}

SuiteResult run_strong_suite(int instances, std::uint64_t seed) {
    const NodeSet ns = grid_nodes(9, 0.0, 1.0);
    return run_suite("strong", instances, seed, [&](int id, int& retries) {
        std::mt19937_64 rng(case_seed(seed, id));
        std::uniform_real_distribution<Scalar> bump_scale(0.1, 1.0);
        std::uniform_real_distribution<Scalar> delta_dist(0.01, 1.0);
        std::uniform_real_distribution<Scalar> pos(0.2, 0.8);
        for (;;) {
            try {
                PLFunction phi = random_convex(ns, rng);
                PLFunction bump = random_convex(ns, rng, bump_scale(rng));
                PLFunction psi(ns, phi.values + bump.values);
                const Scalar delta = delta_dist(rng);
                const Vec2 x0(pos(rng), pos(rng));
                return to_case(id, check_strong_comparison(phi, psi, delta, x0, 1e-9));
            } catch (const PreconditionFailedError&) {
                if (++retries > 100) throw;
            }
        }
    });
}

SuiteResult run_generalised_suite(int instances, std::uint64_t seed) {
    const NodeSet ns = grid_nodes(9, 0.0, 1.0);
    const int gn = 24;
    const MaskXX mask = l_shaped_mask(gn, gn);
    return run_suite("generalised", instances, seed, [&](int id, int& retries) {
        std::mt19937_64 rng(case_seed(seed, id));
        std::uniform_real_distribution<Scalar> dpsi_dist(0.5, 2.0);
        std::uniform_real_distribution<Scalar> unit(0.0, 1.0);
        std::uniform_real_distribution<Scalar> sym(-1.0, 1.0);
        for (;;) {
            try {
                // psi: quadratic bowl sampled on the hull grid.
                const Scalar dpsi = dpsi_dist(rng);
                const Vec2 c(unit(rng), unit(rng));
                const Vec2 a(sym(rng), sym(rng));
                VecX psi_vals(ns.size());
                for (int i = 0; i < ns.size(); ++i) {
                    const Vec2& x = ns.point(i);
                    psi_vals[i] = dpsi * (x - c).squaredNorm() + a.dot(x);
                }
                PLFunction psi(ns, std::move(psi_vals));

                // phi: quadratic plus harmonic part plus a small ripple;
                // [M(phi)]^+ stays under M(psi) (checked, retried on failure).
                const Scalar dphi = 0.6 * dpsi * unit(rng);
                const Scalar ah = sym(rng) * (unit(rng) < 0.3 ? 2.0 : 0.3);
                const Scalar bh = 0.3 * sym(rng);
                const Scalar eps = 0.05 * dpsi * unit(rng);
                const Scalar omega = 2.0 + 4.0 * unit(rng);
                const Vec2 c2(unit(rng), unit(rng));
                GridField phi(gn, gn, 1.0 / gn, Vec2::Zero(), mask);
                phi.fill([&](Scalar x, Scalar y) {
                    const Vec2 p(x, y);
                    return dphi * (p - c2).squaredNorm() + ah * (x * x - y * y) + bh * x * y +
                           eps * std::sin(omega * x) * std::sin(omega * y);
                });

                ComparisonVerdict convex_side = check_generalised(phi, psi, 1e-9);

                // Mirror symmetry: the concave variant on the negated pair.
                GridField neg_phi = phi;
                neg_phi.values() = -phi.values();
                PLFunction neg_psi(ns, -psi.values);
                ComparisonVerdict concave_side = check_generalised_concave(neg_phi, neg_psi, 1e-9);

                CaseVerdict cv = to_case(id, convex_side);
                cv.holds = convex_side.holds && concave_side.holds;
                return cv;
            } catch (const PreconditionFailedError&) {
                if (++retries > 200) throw;
            }
        }
    });
}

SuiteResult run_superadditivity_suite(int instances, std::uint64_t seed) {
    const NodeSet ns = grid_nodes(9, 0.0, 1.0);
    return run_suite("superadditivity", instances, seed, [&](int id, int& retries) {
        (void)retries;
        std::mt19937_64 rng(case_seed(seed, id));
        std::uniform_real_distribution<Scalar> delta(0.1, 1.0);
        std::uniform_real_distribution<Scalar> pos(0.1, 0.9);

        PLFunction f = random_convex(ns, rng);
        PLFunction g = [&] {
            if (id % 2 == 0) return random_convex(ns, rng);
            // Quadratic bump instance of the strictness property.
            const Scalar d = delta(rng);
            const Vec2 c(pos(rng), pos(rng));
            VecX vals(ns.size());
            for (int i = 0; i < ns.size(); ++i) vals[i] = d * (ns.point(i) - c).squaredNorm();
            return PLFunction(ns, std::move(vals));
        }();

        const AtomicMeasure mf = ma_measure(f);
        const AtomicMeasure mg = ma_measure(g);
        const AtomicMeasure msum = ma_measure(PLFunction(ns, f.values + g.values));

        Scalar worst = std::numeric_limits<Scalar>::infinity();
        for (int i = 0; i < ns.size(); ++i) {
            if (ns.is_boundary(i)) continue;
            worst = std::min(worst, msum.masses[i] - mf.masses[i] - mg.masses[i]);
        }
        CaseVerdict cv;
        cv.case_id = id;
        cv.margin = worst;
        cv.interior_min = worst;
        cv.boundary_min = 0.0;
        cv.holds = worst >= -1e-9;
        return cv;
    });
}

SuiteResult run_inclusion_suite(int instances, std::uint64_t seed) {
    const NodeSet ns = grid_nodes(9, 0.0, 1.0);
    std::vector<int> interior;
    for (int i = 0; i < ns.size(); ++i)
        if (!ns.is_boundary(i)) interior.push_back(i);

    return run_suite("inclusion", instances, seed, [&](int id, int& retries) {
        (void)retries;
        std::mt19937_64 rng(case_seed(seed, id));
        std::uniform_real_distribution<Scalar> delta(0.5, 2.0);
        std::uniform_real_distribution<Scalar> pos(0.2, 0.8);
        std::uniform_real_distribution<Scalar> unit(0.0, 1.0);

        // f strongly convex; g = f - s * bump with the bump vanishing on the
        // square's boundary, s small enough to keep g convex.
        const Scalar d = delta(rng);
        const Vec2 c(pos(rng), pos(rng));
        const Scalar s = d * unit(rng);
        VecX fv(ns.size()), gv(ns.size());
        for (int i = 0; i < ns.size(); ++i) {
            const Vec2& x = ns.point(i);
            fv[i] = d * (x - c).squaredNorm();
            gv[i] = fv[i] - s * x.x() * (1.0 - x.x()) * x.y() * (1.0 - x.y());
        }
        PLFunction f(ns, std::move(fv));
        PLFunction g(ns, std::move(gv));

        const auto f_polys = normal_mapping_image(f, interior);
        const auto g_polys = normal_mapping_image(g, interior);

        // Area-weighted gradient samples from f's polygons via triangle fans.
        int samples = 0, escaped = 0;
        std::uniform_real_distribution<Scalar> u01(0.0, 1.0);
        const int target = 1200;
        Scalar total_area = 0.0;
        for (const auto& p : f_polys) total_area += polygon_area(p);
        for (const auto& poly : f_polys) {
            if (poly.size() < 3) continue;
            const int quota = std::max(
                1, static_cast<int>(std::lround(target * polygon_area(poly) / total_area)));
            for (int k = 0; k < quota; ++k) {
                // Uniform point in the polygon: pick a fan triangle by area.
                const std::size_t nv = poly.size();
                Scalar pick = u01(rng) * polygon_area(poly);
                Vec2 sample = poly.vertices[0];
                for (std::size_t t = 1; t + 1 < nv; ++t) {
                    const Vec2& a = poly.vertices[0];
                    const Vec2& b = poly.vertices[t];
                    const Vec2& cc = poly.vertices[t + 1];
                    const Scalar area =
                        0.5 * std::abs((b - a).x() * (cc - a).y() - (b - a).y() * (cc - a).x());
                    if (pick <= area || t + 2 == nv) {
                        Scalar r1 = std::sqrt(u01(rng));
                        Scalar r2 = u01(rng);
                        sample = (1 - r1) * a + r1 * (1 - r2) * b + r1 * r2 * cc;
                        break;
                    }
                    pick -= area;
                }
                ++samples;
                bool inside = false;
                for (const auto& gp : g_polys)
                    if (contains(gp, sample, 1e-9)) {
                        inside = true;
                        break;
                    }
                if (!inside) ++escaped;
            }
        }
        CaseVerdict cv;
        cv.case_id = id;
        cv.margin = samples ? -static_cast<Scalar>(escaped) / samples : 0.0;
        cv.interior_min = static_cast<Scalar>(samples);
        cv.boundary_min = static_cast<Scalar>(escaped);
        cv.holds = escaped == 0 && samples >= 1000;
        return cv;
    });
}

void write_verdict_csv(const std::string& path, const SuiteResult& result) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "case_id,holds,margin,interior_min,boundary_min\n";
    for (const CaseVerdict& c : result.cases)
        out << c.case_id << ',' << (c.holds ? 1 : 0) << ',' << format_double(c.margin) << ','
            << format_double(c.interior_min) << ',' << format_double(c.boundary_min) << '\n';
}

} // namespace maflow
