#include "d2dsim/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include "d2dsim/radio.hpp"
#include "d2dsim/rng.hpp"

namespace d2dsim {

void ClusterAssignment::validate() const {
    std::vector<int> sizes(static_cast<std::size_t>(std::max(cluster_count, 0)), 0);
    for (int l : labels) {
        if (l == kNoise) continue;
        if (l < 0 || l >= cluster_count) throw std::logic_error("assignment: label " + std::to_string(l) + " out of range");
        ++sizes[static_cast<std::size_t>(l)];
    }
    for (std::size_t c = 0; c < sizes.size(); ++c)
        if (sizes[c] == 0) throw std::logic_error("assignment: cluster " + std::to_string(c) + " is empty");
}

ClusterAssignment compact_labels(std::span<const int> labels) {
    ClusterAssignment out;
    std::map<int, int> remap;
    out.labels.reserve(labels.size());
    for (int l : labels) {
        if (l == kNoise) {
            out.labels.push_back(kNoise);
            continue;
        }
        auto [it, fresh] = remap.try_emplace(l, out.cluster_count);
        if (fresh) ++out.cluster_count;
        out.labels.push_back(it->second);
    }
    return out;
}

void write_assignment_csv(std::ostream& out, const ClusterAssignment& a) {
    out << "device_id,label\n";
    for (std::size_t i = 0; i < a.labels.size(); ++i) out << i << ',' << a.labels[i] << '\n';
}

namespace {
double sq(double v) { return v * v; }
double dist2(const Point& a, const Point& b) { return sq(a.x - b.x) + sq(a.y - b.y); }
}  // namespace

// ---------------------------------------------------------------- K-Means

double inertia(std::span<const Point> points, std::span<const int> labels, std::span<const Point> centroids) {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) s += dist2(points[i], centroids[static_cast<std::size_t>(labels[i])]);
    return s;
}

KMeansResult kmeans(std::span<const Point> points, int k, std::uint64_t seed, int max_iterations) {
    const auto n = points.size();
    if (k < 1 || static_cast<std::size_t>(k) > n)
        throw std::invalid_argument("kmeans: k = " + std::to_string(k) + " must be in [1, " + std::to_string(n) + "]");
    if (max_iterations < 1) throw std::invalid_argument("kmeans: max_iterations must be >= 1");
    const auto uk = static_cast<std::size_t>(k);

    // k-means++ seeding
    Rng rng(seed);
    std::vector<Point> cent;
    cent.reserve(uk);
    cent.push_back(points[rng.below(n)]);
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = dist2(points[i], cent[0]);
    while (cent.size() < uk) {
        const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        std::size_t pick = 0;
        if (total > 0.0) {
            double r = rng.uniform01() * total;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                if (d2[i] > 0.0 && r < d2[i]) {
                    pick = i;
                    break;
                }
                r -= d2[i];
            }
            while (d2[pick] == 0.0) --pick;  // rounding at the tail
        }
        cent.push_back(points[pick]);
        for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], dist2(points[i], cent.back()));
    }

    KMeansResult res;
    std::vector<int> labels(n, -1);
    for (int it = 0; it < max_iterations; ++it) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double bd = dist2(points[i], cent[0]);
            for (std::size_t c = 1; c < uk; ++c) {
                const double d = dist2(points[i], cent[c]);
                if (d < bd) {
                    bd = d;
                    best = static_cast<int>(c);
                }
            }
            if (labels[i] != best) changed = true;
            labels[i] = best;
        }
        res.inertia_history.push_back(inertia(points, labels, cent));
        res.iterations = it + 1;
        if (!changed) break;

        std::vector<Point> sum(uk);
        std::vector<std::size_t> count(uk, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(labels[i]);
            sum[c].x += points[i].x;
            sum[c].y += points[i].y;
            ++count[c];
        }
        for (std::size_t c = 0; c < uk; ++c)
            if (count[c] > 0) cent[c] = {sum[c].x / static_cast<double>(count[c]), sum[c].y / static_cast<double>(count[c])};
        for (std::size_t c = 0; c < uk; ++c) {
            if (count[c] > 0) continue;
            std::size_t far = n;
            double fd = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = dist2(points[i], cent[static_cast<std::size_t>(labels[i])]);
                if (d > fd && count[static_cast<std::size_t>(labels[i])] > 1) {
                    fd = d;
                    far = i;
                }
            }
            if (far == n) continue;  // every point sits on its centroid
            --count[static_cast<std::size_t>(labels[far])];
            labels[far] = static_cast<int>(c);
            count[c] = 1;
            cent[c] = points[far];
        }
    }

    res.assignment = compact_labels(labels);
    std::vector<Point> kept(static_cast<std::size_t>(res.assignment.cluster_count));
    for (std::size_t i = 0; i < n; ++i) kept[static_cast<std::size_t>(res.assignment.labels[i])] = cent[static_cast<std::size_t>(labels[i])];
    res.centroids = std::move(kept);
    return res;
}

// ---------------------------------------------------------------- FuzzyART

Normalizer Normalizer::fit(std::span<const Point> points) {
    Normalizer nm;
    if (points.empty()) return nm;
    double max_x = points[0].x, max_y = points[0].y;
    nm.min_x = points[0].x;
    nm.min_y = points[0].y;
    for (const auto& p : points) {
        nm.min_x = std::min(nm.min_x, p.x);
        nm.min_y = std::min(nm.min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    nm.span_x = max_x - nm.min_x;
    nm.span_y = max_y - nm.min_y;
    return nm;
}

Point Normalizer::forward(const Point& p) const {
    return {span_x > 0.0 ? (p.x - min_x) / span_x : 0.0, span_y > 0.0 ? (p.y - min_y) / span_y : 0.0};
}

Point Normalizer::inverse(const Point& q) const { return {min_x + q.x * span_x, min_y + q.y * span_y}; }

void FuzzyArtConfig::validate() const {
    if (vigilance > 1.0) throw ConfigError("fuzzyart.vigilance must be <= 1 (negative = derived)");
    if (!(choice > 0.0)) throw ConfigError("fuzzyart.choice must be > 0");
    if (!(learning > 0.0 && learning <= 1.0)) throw ConfigError("fuzzyart.learning must be in (0, 1]");
    if (max_clusters == 0 || max_clusters < -1) throw ConfigError("fuzzyart.max_clusters must be -1 or >= 1");
    if (epochs < 1) throw ConfigError("fuzzyart.epochs must be >= 1");
    if (!(category_diameter > 0.0)) throw ConfigError("fuzzyart.category_diameter must be > 0");
}

double calibrated_vigilance(const Normalizer& norm, double diameter) {
    // Match of a box with sides (a, b) in normalized units is 1 - (a + b) / 2.
    const double side = diameter / std::sqrt(2.0);
    const double a = norm.span_x > 0.0 ? side / norm.span_x : 0.0;
    const double b = norm.span_y > 0.0 ? side / norm.span_y : 0.0;
    return std::clamp(1.0 - (std::min(a, 1.0) + std::min(b, 1.0)) / 2.0, 0.0, 1.0);
}

FuzzyArtResult fuzzy_art(std::span<const Point> points, const FuzzyArtConfig& cfg) {
    cfg.validate();
    FuzzyArtResult res;
    const Normalizer norm = Normalizer::fit(points);
    res.vigilance = cfg.vigilance < 0.0 ? calibrated_vigilance(norm, cfg.category_diameter) : cfg.vigilance;

    using Vec = std::array<double, 4>;
    const auto l1 = [](const Vec& v) { return v[0] + v[1] + v[2] + v[3]; };
    const auto meet = [](const Vec& a, const Vec& b) {
        return Vec{std::min(a[0], b[0]), std::min(a[1], b[1]), std::min(a[2], b[2]), std::min(a[3], b[3])};
    };
    std::vector<Vec> inputs;
    inputs.reserve(points.size());
    for (const auto& p : points) {
        const Point q = norm.forward(p);
        inputs.push_back({q.x, q.y, 1.0 - q.x, 1.0 - q.y});
    }

    auto& w = res.weights;
    std::vector<int> labels(points.size(), 0);
    std::vector<std::pair<double, int>> order;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            const Vec& x = inputs[i];
            const double norm_x = l1(x);
            order.clear();
            for (std::size_t c = 0; c < w.size(); ++c)
                order.emplace_back(-l1(meet(x, w[c])) / (cfg.choice + l1(w[c])), static_cast<int>(c));
            std::sort(order.begin(), order.end());

            int chosen = -1;
            for (const auto& [neg_t, c] : order) {
                if (l1(meet(x, w[static_cast<std::size_t>(c)])) / norm_x >= res.vigilance) {
                    chosen = c;
                    break;
                }
            }
            if (chosen < 0 && (cfg.max_clusters < 0 || static_cast<int>(w.size()) < cfg.max_clusters)) {
                w.push_back(x);
                labels[i] = static_cast<int>(w.size()) - 1;
                continue;
            }
            if (chosen < 0) {
                labels[i] = order.front().second;  // full: best choice, no learning
                continue;
            }
            Vec& wc = w[static_cast<std::size_t>(chosen)];
            const Vec m = meet(x, wc);
            for (std::size_t d = 0; d < 4; ++d) wc[d] = cfg.learning * m[d] + (1.0 - cfg.learning) * wc[d];
            labels[i] = chosen;
        }
    }
    // Categories left without members after later epochs are dropped here.
    res.assignment = compact_labels(labels);
    std::vector<Vec> kept(static_cast<std::size_t>(res.assignment.cluster_count));
    for (std::size_t i = 0; i < labels.size(); ++i)
        kept[static_cast<std::size_t>(res.assignment.labels[i])] = w[static_cast<std::size_t>(labels[i])];
    w = std::move(kept);
    return res;
}

// ---------------------------------------------------------------- DBSCAN

void DbscanConfig::validate() const {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("dbscan.eps must be > 0");
    if (min_pts < 1) throw ConfigError("dbscan.min_pts must be >= 1");
}

namespace {

// Neighbors within eps (self included, ascending ids) via a uniform grid.
std::vector<std::vector<int>> eps_neighbors(std::span<const Point> points, double eps) {
    std::map<std::pair<long long, long long>, std::vector<int>> grid;
    const auto cell = [eps](const Point& p) {
        return std::pair{static_cast<long long>(std::floor(p.x / eps)), static_cast<long long>(std::floor(p.y / eps))};
    };
    for (std::size_t i = 0; i < points.size(); ++i) grid[cell(points[i])].push_back(static_cast<int>(i));
    const double eps2 = eps * eps;
    std::vector<std::vector<int>> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto [cx, cy] = cell(points[i]);
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy) {
                const auto it = grid.find({cx + dx, cy + dy});
                if (it == grid.end()) continue;
                for (int j : it->second)
                    if (dist2(points[i], points[static_cast<std::size_t>(j)]) <= eps2) out[i].push_back(j);
            }
        std::sort(out[i].begin(), out[i].end());
    }
    return out;
}

}  // namespace

ClusterAssignment dbscan(std::span<const Point> points, const DbscanConfig& cfg) {
    cfg.validate();
    constexpr int kUnvisited = -2;
    const auto nb = eps_neighbors(points, cfg.eps);
    const auto is_core = [&](std::size_t i) { return static_cast<int>(nb[i].size()) >= cfg.min_pts; };

    ClusterAssignment out;
    out.labels.assign(points.size(), kUnvisited);
    std::vector<int> queue;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (out.labels[i] != kUnvisited) continue;
        if (!is_core(i)) {
            out.labels[i] = kNoise;
            continue;
        }
        const int c = out.cluster_count++;
        out.labels[i] = c;
        queue.assign(nb[i].begin(), nb[i].end());
        for (std::size_t q = 0; q < queue.size(); ++q) {
            const auto k = static_cast<std::size_t>(queue[q]);
            if (out.labels[k] == kNoise) out.labels[k] = c;  // border point
            if (out.labels[k] != kUnvisited) continue;
            out.labels[k] = c;
            if (is_core(k)) queue.insert(queue.end(), nb[k].begin(), nb[k].end());
        }
    }
    return out;
}

// ---------------------------------------------------------------- MEC

void MecConfig::validate() const {
    if (k < 1) throw ConfigError("mec.k must be >= 1");
    if (max_iterations < 1) throw ConfigError("mec.max_iterations must be >= 1");
    if (!(convergence >= 0.0)) throw ConfigError("mec.convergence must be >= 0");
    if (neighbors < 0) throw ConfigError("mec.neighbors must be >= 0");
    if (!(neighbor_radius > 0.0)) throw ConfigError("mec.neighbor_radius must be > 0");
}

namespace {

// For each point: itself, then up to m nearest others within radius
// (ties by id).
std::vector<std::vector<int>> mec_neighborhoods(std::span<const Point> points, const MecConfig& cfg) {
    const auto n = points.size();
    std::vector<std::vector<int>> hood(n);
    std::vector<std::pair<double, int>> cand;
    const double r2 = cfg.neighbor_radius * cfg.neighbor_radius;
    for (std::size_t i = 0; i < n; ++i) {
        cand.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = dist2(points[i], points[j]);
            if (d <= r2) cand.emplace_back(d, static_cast<int>(j));
        }
        std::sort(cand.begin(), cand.end());
        hood[i].push_back(static_cast<int>(i));
        for (std::size_t t = 0; t < cand.size() && t < static_cast<std::size_t>(cfg.neighbors); ++t)
            hood[i].push_back(cand[t].second);
    }
    return hood;
}

// Label histogram of one neighborhood as (label, count) pairs.
using Hist = std::vector<std::pair<int, int>>;

double entropy(const Hist& h) {
    double total = 0.0;
    for (const auto& [l, c] : h) total += c;
    double e = 0.0;
    for (const auto& [l, c] : h)
        if (c > 0) {
            const double p = c / total;
            e -= p * std::log(p);
        }
    return e;
}

void bump(Hist& h, int label, int delta) {
    for (auto& [l, c] : h)
        if (l == label) {
            c += delta;
            return;
        }
    h.emplace_back(label, delta);
}

Hist histogram(const std::vector<int>& hood, std::span<const int> labels) {
    Hist h;
    for (int j : hood) bump(h, labels[static_cast<std::size_t>(j)], 1);
    return h;
}

}  // namespace

double mec_objective(std::span<const Point> points, std::span<const int> labels, const MecConfig& cfg) {
    if (points.empty()) return 0.0;
    const auto hood = mec_neighborhoods(points, cfg);
    double s = 0.0;
    for (const auto& h : hood) s += entropy(histogram(h, labels));
    return s / static_cast<double>(points.size());
}

MecResult mec(std::span<const Point> points, const MecConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    MecResult res;
    const auto n = points.size();
    if (n == 0) return res;
    const int k = std::min<int>(cfg.k, static_cast<int>(n));
    std::vector<int> labels = kmeans(points, k, seed).assignment.labels;

    const auto hood = mec_neighborhoods(points, cfg);
    std::vector<std::vector<int>> members_of(n);  // neighborhoods containing each point
    for (std::size_t i = 0; i < n; ++i)
        for (int j : hood[i]) members_of[static_cast<std::size_t>(j)].push_back(static_cast<int>(i));
    std::vector<Hist> hist(n);
    for (std::size_t i = 0; i < n; ++i) hist[i] = histogram(hood[i], labels);

    const double inv_n = 1.0 / static_cast<double>(n);
    const auto full = [&] {
        double s = 0.0;
        for (const auto& h : hist) s += entropy(h);
        return s * inv_n;
    };
    res.objective_history.push_back(full());

    for (int pass = 0; pass < cfg.max_iterations; ++pass) {
        int moves = 0;
        for (std::size_t p = 0; p < n; ++p) {
            const int from = labels[p];
            std::vector<int> options;
            for (const auto& [l, c] : hist[p])
                if (l != from && c > 0) options.push_back(l);
            std::sort(options.begin(), options.end());

            int best = from;
            double best_delta = -cfg.convergence;
            for (int to : options) {
                double delta = 0.0;
                for (int q : members_of[p]) {
                    Hist h = hist[static_cast<std::size_t>(q)];
                    const double before = entropy(h);
                    bump(h, from, -1);
                    bump(h, to, 1);
                    delta += entropy(h) - before;
                }
                delta *= inv_n;
                if (delta < best_delta) {
                    best_delta = delta;
                    best = to;
                }
            }
            if (best == from) continue;
            for (int q : members_of[p]) {
                bump(hist[static_cast<std::size_t>(q)], from, -1);
                bump(hist[static_cast<std::size_t>(q)], best, 1);
            }
            labels[p] = best;
            ++moves;
        }
        res.iterations = pass + 1;
        res.moves += moves;
        const double obj = full();
        if (obj > res.objective_history.back() + 1e-12)
            throw std::logic_error("mec: objective increased during a pass");
        res.objective_history.push_back(obj);
        if (moves == 0) break;
    }
    res.assignment = compact_labels(labels);
    return res;
}

}  // namespace d2dsim
