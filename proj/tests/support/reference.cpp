#include "reference.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>

namespace ref {

double fspl(double d, double f) { return 20.0 * std::log10(std::max(d, 1.0)) + 20.0 * std::log10(f) - 147.55; }

double noise_dbm(const ChannelConfig& c) { return -174.0 + 10.0 * std::log10(c.bandwidth) + c.noise_figure; }

double snr(double tp_mw, double d, double f, const ChannelConfig& c) {
    const double rx_dbm = 10.0 * std::log10(tp_mw) - fspl(d, f);
    return std::pow(10.0, (rx_dbm - noise_dbm(c)) / 10.0);
}

double se(double tp_mw, double d, double f, const ChannelConfig& c) { return std::log2(1.0 + snr(tp_mw, d, f, c)); }

double trimmed_power(double tp_mw, double d, double f, const ChannelConfig& c) {
    const double full = snr(tp_mw, d, f, c);
    const double want = std::pow(2.0, (1.0 - c.power_control_margin) * std::log2(1.0 + full)) - 1.0;
    return tp_mw * want / full;
}

namespace {

double dist(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::vector<int> region(const std::vector<Point>& pts, std::size_t p, double eps) {
    std::vector<int> out;
    for (std::size_t q = 0; q < pts.size(); ++q)
        if (dist(pts[p], pts[q]) <= eps) out.push_back(static_cast<int>(q));
    return out;
}

}  // namespace

std::vector<int> dbscan(const std::vector<Point>& pts, double eps, int min_pts) {
    constexpr int kUnset = -2;
    std::vector<int> label(pts.size(), kUnset);
    int c = 0;
    for (std::size_t p = 0; p < pts.size(); ++p) {
        if (label[p] != kUnset) continue;
        auto nb = region(pts, p, eps);
        if (static_cast<int>(nb.size()) < min_pts) {
            label[p] = kNoise;
            continue;
        }
        label[p] = c;
        std::deque<int> seeds(nb.begin(), nb.end());
        while (!seeds.empty()) {
            const auto q = static_cast<std::size_t>(seeds.front());
            seeds.pop_front();
            if (label[q] == kNoise) label[q] = c;
            if (label[q] != kUnset) continue;
            label[q] = c;
            auto nq = region(pts, q, eps);
            if (static_cast<int>(nq.size()) >= min_pts) seeds.insert(seeds.end(), nq.begin(), nq.end());
        }
        ++c;
    }
    return label;
}

std::vector<int> best_two_partition(const std::vector<Point>& pts) {
    const std::size_t n = pts.size();
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_labels;
    // bit i set = point i in group 1; point 0 always in group 0
    for (std::uint64_t mask = 1; mask < (1ULL << (n - 1)); ++mask) {
        const std::uint64_t m = mask << 1;
        double sx[2] = {0, 0}, sy[2] = {0, 0}, sq[2] = {0, 0};
        int cnt[2] = {0, 0};
        for (std::size_t i = 0; i < n; ++i) {
            const int g = (m >> i) & 1ULL ? 1 : 0;
            sx[g] += pts[i].x;
            sy[g] += pts[i].y;
            sq[g] += pts[i].x * pts[i].x + pts[i].y * pts[i].y;
            ++cnt[g];
        }
        double sse = 0.0;
        for (int g = 0; g < 2; ++g) sse += sq[g] - (sx[g] * sx[g] + sy[g] * sy[g]) / cnt[g];
        if (sse < best) {
            best = sse;
            best_labels.assign(n, 0);
            for (std::size_t i = 0; i < n; ++i) best_labels[i] = (m >> i) & 1ULL ? 1 : 0;
        }
    }
    return best_labels;
}

bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    std::map<int, int> ab, ba;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((a[i] == kNoise) != (b[i] == kNoise)) return false;
        if (a[i] == kNoise) continue;
        auto [x, fresh_x] = ab.emplace(a[i], b[i]);
        auto [y, fresh_y] = ba.emplace(b[i], a[i]);
        if (x->second != b[i] || y->second != a[i]) return false;
    }
    return true;
}

void for_each_forest(const std::vector<Point>& pts, const ChannelConfig& c, const std::function<void(const Forest&)>& f) {
    const int n = static_cast<int>(pts.size());
    const Point bs{};
    Forest fr;
    fr.parent.assign(static_cast<std::size_t>(n), -1);

    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            for (int s = 0; s < n; ++s) {
                int k = s, steps = 0;
                while (k != -1) {
                    if (++steps > n) return;
                    k = fr.parent[static_cast<std::size_t>(k)];
                }
            }
            std::vector<bool> has_child(static_cast<std::size_t>(n), false);
            for (int p : fr.parent)
                if (p >= 0) has_child[static_cast<std::size_t>(p)] = true;
            std::vector<double> link(static_cast<std::size_t>(n));
            fr.total_pc = 0.0;
            for (int k = 0; k < n; ++k) {
                const int p = fr.parent[static_cast<std::size_t>(k)];
                double tp;
                if (p == -1) {
                    const double d = dist(pts[static_cast<std::size_t>(k)], bs);
                    tp = has_child[static_cast<std::size_t>(k)] ? trimmed_power(c.default_tp, d, c.freq_cellular, c)
                                                                 : c.default_tp;
                    link[static_cast<std::size_t>(k)] = se(tp, d, c.freq_cellular, c);
                } else {
                    const double d = dist(pts[static_cast<std::size_t>(k)], pts[static_cast<std::size_t>(p)]);
                    tp = trimmed_power(c.default_tp, d, c.freq_d2d, c);
                    link[static_cast<std::size_t>(k)] = se(tp, d, c.freq_d2d, c);
                }
                fr.total_pc += tp + c.circuit_power;
            }
            fr.total_se = 0.0;
            fr.wdr_se.assign(static_cast<std::size_t>(n), 0.0);
            for (int s = 0; s < n; ++s) {
                double m = std::numeric_limits<double>::infinity();
                for (int k = s; k != -1; k = fr.parent[static_cast<std::size_t>(k)])
                    m = std::min(m, link[static_cast<std::size_t>(k)]);
                fr.wdr_se[static_cast<std::size_t>(s)] = m;
                fr.total_se += m;
            }
            f(fr);
            return;
        }
        for (int p = -1; p < n; ++p) {
            if (p == i) continue;
            if (p >= 0 && dist(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(p)]) > c.d2d_range) continue;
            fr.parent[static_cast<std::size_t>(i)] = p;
            rec(i + 1);
        }
        fr.parent[static_cast<std::size_t>(i)] = -1;
    };
    rec(0);
}

Forest best_forest(const std::vector<Point>& pts, const ChannelConfig& c) {
    Forest best;
    best.total_se = -1.0;
    for_each_forest(pts, c, [&](const Forest& f) {
        if (f.total_se > best.total_se) best = f;
    });
    return best;
}

double path_bottleneck_total(const d2dsim::NetworkState& s) {
    double total = 0.0;
    for (const auto& d : s.devices()) {
        if (d.mode == d2dsim::TransmissionMode::Unassigned) continue;
        double m = std::numeric_limits<double>::infinity();
        for (int k = d.id; k != d2dsim::kBsId; k = s.device(k).parent) m = std::min(m, s.device(k).link_se);
        total += m;
    }
    return total;
}

std::vector<int> slow_sum_rate(const d2dsim::Topology& topo, const ChannelConfig& c) {
    using namespace d2dsim;
    NetworkState s(topo, c, "slow");
    const auto n = static_cast<int>(topo.size());
    const auto gt = [](double a, double b) { return a > b + 1e-12 * std::max(1.0, std::abs(b)); };

    for (int i = 0; i < n; ++i) {
        NetworkState base = s;
        base.attach(i, TransmissionMode::D2DRelay, kBsId);
        NetworkState best = base;
        double best_total = path_bottleneck_total(base);
        for (int j = 0; j < i; ++j) {
            if (!s.in_d2d_range(i, j)) continue;
            NetworkState t = s;
            attach_as_client(t, i, j);
            const double v = path_bottleneck_total(t);
            if (gt(v, best_total)) {
                best_total = v;
                best = t;
            }
        }
        s = best;
        for (int k = 0; k < i; ++k) {
            if (!s.children(k).empty() || s.parent(k) == i || !s.in_d2d_range(i, k)) continue;
            NetworkState t = s;
            attach_as_client(t, k, i);
            const double v = path_bottleneck_total(t);
            if (gt(v, best_total)) {
                best_total = v;
                s = t;
            }
        }
    }
    std::vector<int> parents;
    for (const auto& d : s.devices()) parents.push_back(d.parent);
    return parents;
}

}  // namespace ref
