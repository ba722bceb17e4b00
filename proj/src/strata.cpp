#include "hsq/strata.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "hsq/parallel.hpp"

namespace hsq {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 2 * kPi;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(static_cast<std::size_t>(n)) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) {
        while (p[static_cast<std::size_t>(x)] != x) x = p[static_cast<std::size_t>(x)] = p[static_cast<std::size_t>(p[static_cast<std::size_t>(x)])];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) p[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
};

RVec periodic_diff(const RVec& a, const RVec& b, bool periodic) {
    RVec d = b - a;
    if (periodic)
        for (Eigen::Index i = 0; i < d.size(); ++i) d(i) -= kTwoPi * std::round(d(i) / kTwoPi);
    return d;
}

bool lex_less(const RVec& a, const RVec& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) < b(i) - 1e-12) return true;
        if (a(i) > b(i) + 1e-12) return false;
    }
    return false;
}

struct EdgeResult {
    bool connect = false;
    bool scanned = false;
    std::vector<std::pair<RVec, Sample>> walls;
};

double golden_min(const std::function<double(double)>& f, double a, double b, double tol) {
    const double g = 0.6180339887498949;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

bool in_domain(const std::vector<Inequality>& domain, const RVec& eta) {
    for (const auto& q : domain) {
        if (q.coeffs.size() != eta.size()) throw Error(ErrorKind::ValidationError, "domain inequality has wrong length");
        if (q.coeffs.dot(eta) > q.rhs_over_pi * kPi + 1e-9) return false;
    }
    return true;
}

int Stratification::stratum_of_grid(const std::vector<int>& grid) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].grid == grid) return node_stratum[i];
    return -1;
}

Stratification stratify_with(const Labeler& labeler, int rank, const StratifyOptions& opts) {
    Stratification st;
    st.rank = rank;
    st.grid_n = opts.grid_n;
    st.periodic = opts.domain.empty();
    const double h = kTwoPi / opts.grid_n;
    const int sub = 1 << opts.refine_levels;
    st.resolution = h / sub;

    // Grid nodes.
    std::map<std::vector<int>, int> index;
    {
        const int lo = st.periodic ? 0 : -opts.grid_n;
        const int hi = st.periodic ? opts.grid_n - 1 : opts.grid_n;
        std::vector<int> k(static_cast<std::size_t>(rank), lo);
        while (true) {
            RVec eta(rank);
            for (int i = 0; i < rank; ++i) eta(i) = h * k[static_cast<std::size_t>(i)];
            if (st.periodic || in_domain(opts.domain, eta)) {
                index[k] = static_cast<int>(st.nodes.size());
                st.nodes.push_back(StratumNode{eta, k, {}, 0.0});
            }
            int i = 0;
            while (i < rank && ++k[static_cast<std::size_t>(i)] > hi) k[static_cast<std::size_t>(i++)] = lo;
            if (i == rank) break;
        }
    }
    const int ngrid = static_cast<int>(st.nodes.size());
    parallel_for(ngrid, opts.threads, [&](int i) {
        Sample s = labeler(st.nodes[static_cast<std::size_t>(i)].coords);
        st.nodes[static_cast<std::size_t>(i)].label = s.label;
        st.nodes[static_cast<std::size_t>(i)].indicator = s.indicator;
    });

    // Edges to the 3^r - 1 neighbours (each unordered pair once).
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> offsets;
    {
        std::vector<int> d(static_cast<std::size_t>(rank), -1);
        while (rank > 0) {
            int first = 0;
            for (int v : d)
                if (v != 0) {
                    first = v;
                    break;
                }
            if (first > 0) offsets.push_back(d);
            int i = 0;
            while (i < rank && ++d[static_cast<std::size_t>(i)] > 1) d[static_cast<std::size_t>(i++)] = -1;
            if (i == rank) break;
        }
    }
    for (int p = 0; p < ngrid; ++p) {
        for (const auto& d : offsets) {
            std::vector<int> q = st.nodes[static_cast<std::size_t>(p)].grid;
            for (int i = 0; i < rank; ++i) {
                q[static_cast<std::size_t>(i)] += d[static_cast<std::size_t>(i)];
                if (st.periodic) q[static_cast<std::size_t>(i)] = ((q[static_cast<std::size_t>(i)] % opts.grid_n) + opts.grid_n) % opts.grid_n;
            }
            auto it = index.find(q);
            if (it != index.end() && it->second != p) edges.emplace_back(p, it->second);
        }
    }

    std::vector<EdgeResult> results(edges.size());
    parallel_for(static_cast<int>(edges.size()), opts.threads, [&](int e) {
        const StratumNode& a = st.nodes[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].first)];
        const StratumNode& b = st.nodes[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)].second)];
        RVec dir = periodic_diff(a.coords, b.coords, st.periodic);
        auto at = [&](double t) { return RVec(a.coords + t * dir); };
        EdgeResult& res = results[static_cast<std::size_t>(e)];
        Sample mid = labeler(at(0.5));
        bool same = a.label == b.label && mid.label == a.label;
        bool dip = std::isfinite(a.indicator) && std::isfinite(b.indicator) && std::isfinite(mid.indicator) &&
                   mid.indicator < (1 - 1e-3) * 0.5 * (a.indicator + b.indicator);
        bool scan = opts.refine_levels > 0 && (!same || dip);
        if (scan) {
            res.scanned = true;
            std::vector<Sample> ss(static_cast<std::size_t>(sub + 1));
            ss[0] = Sample{a.label, a.indicator};
            ss[static_cast<std::size_t>(sub)] = Sample{b.label, b.indicator};
            for (int i = 1; i < sub; ++i) ss[static_cast<std::size_t>(i)] = i * 2 == sub ? mid : labeler(at(static_cast<double>(i) / sub));
            auto differs = [&](const Label& l) { return l != a.label && l != b.label; };
            for (int i = 1; i < sub; ++i) {
                const Sample& s = ss[static_cast<std::size_t>(i)];
                if (s.label != a.label) same = false;
                if (differs(s.label)) res.walls.emplace_back(at(static_cast<double>(i) / sub), s);
            }
            // Polish the deepest interior local minimum of the indicator.
            int best = -1;
            for (int i = 1; i < sub; ++i) {
                double v = ss[static_cast<std::size_t>(i)].indicator;
                if (!std::isfinite(v)) continue;
                if (v <= ss[static_cast<std::size_t>(i - 1)].indicator && v <= ss[static_cast<std::size_t>(i + 1)].indicator &&
                    (best < 0 || v < ss[static_cast<std::size_t>(best)].indicator))
                    best = i;
            }
            if (best > 0) {
                double t = golden_min([&](double x) { return labeler(at(x)).indicator; }, static_cast<double>(best - 1) / sub,
                                      static_cast<double>(best + 1) / sub, 1e-13);
                Sample s = labeler(at(t));
                if (s.label != a.label) same = false;
                // Keep the polished point only when it sits on a wall between the endpoints.
                if (differs(s.label) && s.label.iso_dim > std::max(a.label.iso_dim, b.label.iso_dim)) {
                    bool dup = false;
                    for (const auto& w : res.walls)
                        if (periodic_diff(w.first, at(t), st.periodic).norm() <= st.resolution) dup = true;
                    if (!dup) res.walls.emplace_back(at(t), s);
                }
            }
        }
        res.connect = same;
    });

    UnionFind uf(ngrid);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (results[e].scanned) ++st.refined_edges;
        if (results[e].connect) uf.unite(edges[e].first, edges[e].second);
    }

    // Refinement nodes off the grid.
    for (const auto& r : results)
        for (const auto& w : r.walls) {
            RVec c = st.periodic ? wrap_angles(w.first) : w.first;
            bool dup = false;
            for (int i = ngrid; i < static_cast<int>(st.nodes.size()); ++i)
                if (periodic_diff(st.nodes[static_cast<std::size_t>(i)].coords, c, st.periodic).norm() <= st.resolution) dup = true;
            if (!dup) st.nodes.push_back(StratumNode{c, {}, w.second.label, w.second.indicator});
        }
    const int ntot = static_cast<int>(st.nodes.size());
    UnionFind uf2(ntot);
    for (int i = 0; i < ngrid; ++i) uf2.unite(i, uf.find(i));
    const double reach = h * std::sqrt(static_cast<double>(std::max(rank, 1))) * 1.01;
    for (int i = ngrid; i < ntot; ++i)
        for (int j = 0; j < ntot; ++j) {
            if (j == i || st.nodes[static_cast<std::size_t>(i)].label != st.nodes[static_cast<std::size_t>(j)].label) continue;
            RVec d = periodic_diff(st.nodes[static_cast<std::size_t>(i)].coords, st.nodes[static_cast<std::size_t>(j)].coords, st.periodic);
            if (d.norm() > reach) continue;
            if (labeler(RVec(st.nodes[static_cast<std::size_t>(i)].coords + 0.5 * d)).label == st.nodes[static_cast<std::size_t>(i)].label) uf2.unite(i, j);
        }

    // Components.
    std::map<int, std::vector<int>> comps;
    for (int i = 0; i < ntot; ++i) comps[uf2.find(i)].push_back(i);
    std::vector<Stratum> strata;
    for (auto& [root, members] : comps) {
        Stratum s;
        s.nodes = members;
        s.isotropy_dim = st.nodes[static_cast<std::size_t>(members.front())].label.iso_dim;
        s.fixers = st.nodes[static_cast<std::size_t>(members.front())].label.tags;
        strata.push_back(std::move(s));
    }
    st.node_stratum.assign(static_cast<std::size_t>(ntot), -1);
    for (std::size_t k = 0; k < strata.size(); ++k)
        for (int i : strata[k].nodes) st.node_stratum[static_cast<std::size_t>(i)] = static_cast<int>(k);

    // Representative: the node farthest from other strata of equal or larger isotropy.
    for (std::size_t k = 0; k < strata.size(); ++k) {
        Stratum& s = strata[k];
        auto farthest = [&](bool restrict) {
            double best = -1;
            int arg = -1;
            for (int i : s.nodes) {
                double dmin = kInf;
                for (int j = 0; j < ntot; ++j) {
                    int sj = st.node_stratum[static_cast<std::size_t>(j)];
                    if (sj == static_cast<int>(k)) continue;
                    if (restrict && strata[static_cast<std::size_t>(sj)].isotropy_dim < s.isotropy_dim) continue;
                    dmin = std::min(dmin, periodic_diff(st.nodes[static_cast<std::size_t>(i)].coords, st.nodes[static_cast<std::size_t>(j)].coords, st.periodic).norm());
                }
                const RVec& c = st.nodes[static_cast<std::size_t>(i)].coords;
                if (arg < 0 || dmin > best + 1e-12 ||
                    (std::abs(dmin - best) <= 1e-12 && lex_less(c, st.nodes[static_cast<std::size_t>(arg)].coords))) {
                    best = dmin;
                    arg = i;
                }
            }
            return arg;
        };
        s.representative = st.nodes[static_cast<std::size_t>(farthest(true))].coords;
    }

    // Deterministic order: isotropy dimension, labels, representative.
    std::vector<int> order(strata.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        const Stratum& a = strata[static_cast<std::size_t>(x)];
        const Stratum& b = strata[static_cast<std::size_t>(y)];
        Label la{a.isotropy_dim, a.fixers}, lb{b.isotropy_dim, b.fixers};
        if (la != lb) return la < lb;
        return lex_less(a.representative, b.representative);
    });
    std::vector<int> newid(strata.size());
    for (std::size_t i = 0; i < order.size(); ++i) newid[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    for (std::size_t i = 0; i < order.size(); ++i) {
        st.strata.push_back(std::move(strata[static_cast<std::size_t>(order[i])]));
        st.strata.back().id = static_cast<int>(i);
    }
    for (int& v : st.node_stratum) v = newid[static_cast<std::size_t>(v)];
    return st;
}

Sample isotropy_sample(const SymmetricSpace& s, const TorusChart& a0, const RVec& eta) {
    Mat u = a0.element(eta);
    const RMat& hb = s.decomposition().h;
    Sample out;
    if (hb.cols() == 0) {
        out.indicator = kInf;
    } else {
        RMat m = (theta_x_map(s, u) - RMat::Identity(s.dim(), s.dim())) * hb;
        Eigen::JacobiSVD<RMat> svd(m);
        const RVec& sv = svd.singularValues();
        const double thr = s.tol().rank * std::max(1.0, sv(0));
        int nonzero = 0;
        while (nonzero < sv.size() && sv(nonzero) > thr) ++nonzero;
        out.label.iso_dim = static_cast<int>(hb.cols()) - nonzero;
        out.indicator = nonzero > 0 ? sv(nonzero - 1) : kInf;
    }
    out.label.tags = fixing_reps(s, u);
    return out;
}

RMat stabilized_subtorus(const SymmetricSpace& s, const TorusChart& a0, const Mat& u) {
    const int r = a0.rank();
    if (r == 0) return RMat(0, 0);
    std::vector<Mat> iso = s.algebra().to_mats(isotropy_algebra(s, u));
    std::vector<int> fix = fixing_reps(s, u);
    const int rows = static_cast<int>(iso.size() + fix.size()) * s.dim();
    RMat a = RMat::Zero(std::max(rows, 1), r);
    for (int j = 0; j < r; ++j) {
        const Mat& x = a0.mats[static_cast<std::size_t>(j)];
        int row = 0;
        for (const Mat& z : iso) {
            a.block(row, j, s.dim(), 1) = s.algebra().project(bracket(z, x));
            row += s.dim();
        }
        for (int i : fix) {
            const Mat& hm = s.spec().component_reps[static_cast<std::size_t>(i)];
            a.block(row, j, s.dim(), 1) = s.algebra().project(hm * x * inverse(hm, s.tol()) - x);
            row += s.dim();
        }
    }
    return nullspace(a, s.tol().rank);
}

Stratification stratify(const SymmetricSpace& s, const TorusChart& a0, const WeylGroupTable& weyl, const StratifyOptions& opts) {
    Stratification st = stratify_with([&](const RVec& eta) { return isotropy_sample(s, a0, eta); }, a0.rank(), opts);
    for (Stratum& sm : st.strata) {
        sm.lie_c = stabilized_subtorus(s, a0, a0.element(sm.representative));
        sm.dimension = static_cast<int>(sm.lie_c.cols());
        for (int w = 0; w < weyl.order(); ++w)
            if (angle_distance(weyl.elements[static_cast<std::size_t>(w)].action.apply(sm.representative), sm.representative) <= 1e-9)
                sm.weyl_stabilizer.push_back(w);
    }
    return st;
}

Stratification weyl_stratify(const WeylGroupTable& weyl, int rank, const StratifyOptions& opts) {
    auto lab = [&](const RVec& eta) {
        Sample s;
        s.indicator = kInf;
        for (int w = 0; w < weyl.order(); ++w) {
            double d = angle_distance(weyl.elements[static_cast<std::size_t>(w)].action.apply(eta), eta);
            if (d <= 1e-9) s.label.tags.push_back(w);
            else s.indicator = std::min(s.indicator, d);
        }
        s.label.iso_dim = static_cast<int>(s.label.tags.size());
        return s;
    };
    Stratification st = stratify_with(lab, rank, opts);
    for (Stratum& sm : st.strata) sm.weyl_stabilizer = sm.fixers;
    return st;
}

bool same_partition(const Stratification& a, const Stratification& b) {
    if (a.strata.size() != b.strata.size()) return false;
    std::map<int, int> ab, ba;
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        if (a.nodes[i].grid.empty()) continue;
        int sb = b.stratum_of_grid(a.nodes[i].grid);
        if (sb < 0) return false;
        int sa = a.node_stratum[i];
        auto [it1, new1] = ab.emplace(sa, sb);
        auto [it2, new2] = ba.emplace(sb, sa);
        if (it1->second != sb || it2->second != sa) return false;
    }
    return ab.size() == a.strata.size();
}

bool refines(const Stratification& fine, const Stratification& coarse) {
    std::map<int, int> to;
    for (std::size_t i = 0; i < fine.nodes.size(); ++i) {
        if (fine.nodes[i].grid.empty()) continue;
        int c = coarse.stratum_of_grid(fine.nodes[i].grid);
        if (c < 0) return false;
        auto [it, fresh] = to.emplace(fine.node_stratum[i], c);
        if (it->second != c) return false;
    }
    return true;
}

std::optional<std::vector<int>> stratum_permutation(const Stratification& st, const ChartAction& act) {
    if (!st.periodic) return std::nullopt;
    const double h = kTwoPi / st.grid_n;
    std::map<std::vector<int>, int> index;
    for (std::size_t i = 0; i < st.nodes.size(); ++i)
        if (!st.nodes[i].grid.empty()) index[st.nodes[i].grid] = st.node_stratum[i];
    auto cell_of = [&](const RVec& eta) {
        std::vector<int> c(static_cast<std::size_t>(st.rank));
        for (int k = 0; k < st.rank; ++k) c[static_cast<std::size_t>(k)] = static_cast<int>(std::floor(eta(k) / h)) % st.grid_n;
        return c;
    };
    std::map<std::vector<int>, std::vector<int>> cells;
    for (std::size_t i = 0; i < st.nodes.size(); ++i) cells[cell_of(wrap_angles(st.nodes[i].coords))].push_back(static_cast<int>(i));
    std::vector<int> perm(st.strata.size(), -1);
    for (std::size_t i = 0; i < st.nodes.size(); ++i) {
        RVec img = wrap_angles(act.apply(st.nodes[i].coords));
        int target = -1;
        if (!st.nodes[i].grid.empty()) {
            std::vector<int> g(static_cast<std::size_t>(st.rank));
            for (int k = 0; k < st.rank; ++k) {
                double x = img(k) / h;
                if (std::abs(x - std::round(x)) > 1e-6) return std::nullopt;
                g[static_cast<std::size_t>(k)] = static_cast<int>(std::lround(x)) % st.grid_n;
            }
            auto it = index.find(g);
            if (it == index.end()) return std::nullopt;
            target = it->second;
        } else {
            // Refinement nodes are deduplicated within the resolution and need not
            // map exactly onto each other; match the nearest node with the same
            // label in the surrounding cells and skip the node when there is none.
            double best = st.resolution * (1 + 1e-9);
            std::vector<int> c0 = cell_of(img);
            std::vector<int> d(static_cast<std::size_t>(st.rank), -1);
            while (true) {
                std::vector<int> c(c0);
                for (int k = 0; k < st.rank; ++k)
                    c[static_cast<std::size_t>(k)] = ((c[static_cast<std::size_t>(k)] + d[static_cast<std::size_t>(k)]) % st.grid_n + st.grid_n) % st.grid_n;
                auto it = cells.find(c);
                if (it != cells.end())
                    for (int j : it->second) {
                        const StratumNode& cand = st.nodes[static_cast<std::size_t>(j)];
                        double dist = angle_distance(cand.coords, img);
                        if (dist <= best && cand.label == st.nodes[i].label) {
                            best = dist;
                            target = st.node_stratum[static_cast<std::size_t>(j)];
                        }
                    }
                int k = 0;
                while (k < st.rank && ++d[static_cast<std::size_t>(k)] > 1) d[static_cast<std::size_t>(k++)] = -1;
                if (k == st.rank) break;
            }
            if (target < 0) continue;
        }
        int& p = perm[static_cast<std::size_t>(st.node_stratum[i])];
        if (p >= 0 && p != target) return std::nullopt;
        p = target;
    }
    std::vector<int> seen(st.strata.size(), 0);
    for (int p : perm) {
        if (p < 0 || seen[static_cast<std::size_t>(p)]++) return std::nullopt;
    }
    return perm;
}

}  // namespace hsq
