#pragma once

// Upper-bound distance oracle: shortest paths on a node grid over every sheet of a Euclidean fan.
// Nodes (i, a, b) sit at x1 = -R + a h, x2 = b h.  Seam nodes of adjacent sheets and the apex are
// merged, so every graph path is an actual path in the space and its length bounds the distance.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <queue>
#include <utility>
#include <vector>

namespace oracle {

class GridDijkstra {
public:
    // n must be odd so that x1 = 0 is a grid column.
    GridDijkstra(int sheets, int n, double R) : k_(sheets), n_(n), R_(R), h_(2.0 * R / (n - 1)) {
        id_.assign(static_cast<size_t>(k_) * n_ * n_, -1);
        const int mid = (n_ - 1) / 2;  // x1 = 0
        int next = 1;                  // node 0 is the apex
        for (int i = 0; i < k_; ++i) {
            id_[index(i, mid, 0)] = 0;
            // (i, x, 0) with x > 0 is (i + 1, -x, 0)
            for (int a = mid + 1; a < n_; ++a) {
                const int id = next++;
                id_[index(i, a, 0)] = id;
                id_[index((i + 1) % k_, 2 * mid - a, 0)] = id;
            }
        }
        for (int i = 0; i < k_; ++i)
            for (int a = 0; a < n_; ++a)
                for (int b = 1; b < n_; ++b) id_[index(i, a, b)] = next++;
        nodes_ = next;
        charts_.resize(static_cast<size_t>(nodes_));
        for (int i = 0; i < k_; ++i)
            for (int a = 0; a < n_; ++a)
                for (int b = 0; b < n_; ++b) charts_[node(i, a, b)].push_back(static_cast<int>(index(i, a, b)));

        for (int dx = -3; dx <= 3; ++dx)
            for (int dy = -3; dy <= 3; ++dy)
                if ((dx || dy) && std::gcd(std::abs(dx), std::abs(dy)) == 1) stencil_.push_back({dx, dy});
    }

    int node_count() const { return nodes_; }
    double spacing() const { return h_; }
    int n() const { return n_; }
    int sheets() const { return k_; }

    // Sheet-local coordinates of grid node (a, b).
    double x1(int a) const { return -R_ + a * h_; }
    double x2(int b) const { return b * h_; }
    int node(int sheet, int a, int b) const { return id_[index(sheet, a, b)]; }

    std::vector<double> distances_from(int sheet, int a, int b) const {
        std::vector<double> dist(static_cast<size_t>(nodes_), INFINITY);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        const int s = node(sheet, a, b);
        dist[s] = 0.0;
        pq.push({0.0, s});
        while (!pq.empty()) {
            const auto [d, u] = pq.top();
            pq.pop();
            if (d > dist[u]) continue;
            // seam nodes and the apex have several charts
            for (int flat : charts_[u]) {
                const int i = flat / (n_ * n_), a0 = (flat / n_) % n_, b0 = flat % n_;
                for (const auto& [dx, dy] : stencil_) {
                    const int a1 = a0 + dx, b1 = b0 + dy;
                    if (a1 < 0 || a1 >= n_ || b1 < 0 || b1 >= n_) continue;
                    const int v = node(i, a1, b1);
                    const double nd = d + h_ * std::hypot(dx, dy);
                    if (nd < dist[v]) {
                        dist[v] = nd;
                        pq.push({nd, v});
                    }
                }
            }
        }
        return dist;
    }

private:
    size_t index(int i, int a, int b) const {
        return (static_cast<size_t>(i) * n_ + static_cast<size_t>(a)) * n_ + static_cast<size_t>(b);
    }

    int k_, n_;
    double R_, h_;
    int nodes_ = 0;
    std::vector<int> id_;
    std::vector<std::vector<int>> charts_;
    std::vector<std::pair<int, int>> stencil_;
};

}  // namespace oracle
