#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "tiletransport/scalar.hpp"

namespace tiletransport {

/// Element of Z[phi] used for flow capacities after denominators are
/// cleared. Addition and exact comparison only; that is all a maximum
/// flow needs, and it keeps arc storage at 16 bytes.
struct GoldenInt {
    std::int64_t a = 0;  // rational coefficient
    std::int64_t b = 0;  // phi coefficient

    friend GoldenInt operator+(GoldenInt x, GoldenInt y) {
        return {x.a + y.a, x.b + y.b};
    }
    friend GoldenInt operator-(GoldenInt x, GoldenInt y) {
        return {x.a - y.a, x.b - y.b};
    }
    GoldenInt& operator+=(GoldenInt y) { a += y.a; b += y.b; return *this; }
    GoldenInt& operator-=(GoldenInt y) { a -= y.a; b -= y.b; return *this; }

    int sign() const {
        // 2(a + b phi) = u + v sqrt5 with u = 2a+b, v = b
        __int128 u = 2 * static_cast<__int128>(a) + b;
        __int128 v = b;
        if (u >= 0 && v >= 0) return (u == 0 && v == 0) ? 0 : 1;
        if (u <= 0 && v <= 0) return -1;
        __int128 disc = u * u - 5 * v * v;
        int cmp = disc > 0 ? 1 : (disc < 0 ? -1 : 0);
        return u > 0 ? cmp : -cmp;
    }
    bool positive() const { return sign() > 0; }
    friend bool operator==(GoldenInt x, GoldenInt y) { return x.a == y.a && x.b == y.b; }
    friend bool operator<(GoldenInt x, GoldenInt y) { return (x - y).sign() < 0; }
    friend bool operator<=(GoldenInt x, GoldenInt y) { return (x - y).sign() <= 0; }

    static GoldenInt min(GoldenInt x, GoldenInt y) { return x <= y ? x : y; }

    Scalar to_scalar(const Rational& denominator_scale) const {
        return Scalar(Rational(BigInt(a)) / denominator_scale,
                      Rational(BigInt(b)) / denominator_scale);
    }
};

/// Dinic maximum flow over the ordered group Z[phi]. The phase bound of
/// Dinic's algorithm does not depend on capacity values, so exact
/// irrational-valued capacities terminate like integer ones.
class MaxFlow {
public:
    explicit MaxFlow(int nodes) : head_(nodes, -1), level_(nodes), iter_(nodes) {}

    int node_count() const { return static_cast<int>(head_.size()); }

    int add_node() {
        head_.push_back(-1);
        level_.push_back(0);
        iter_.push_back(-1);
        return node_count() - 1;
    }

    /// Returns the edge id; the reverse edge is id^1.
    int add_edge(int from, int to, GoldenInt cap) {
        int id = static_cast<int>(edges_.size());
        edges_.push_back({to, head_[from], cap});
        head_[from] = id;
        edges_.push_back({from, head_[to], GoldenInt{0, 0}});
        head_[to] = id + 1;
        return id;
    }

    GoldenInt flow_on(int edge_id) const { return edges_[edge_id ^ 1].cap; }
    GoldenInt residual_on(int edge_id) const { return edges_[edge_id].cap; }

    GoldenInt run(int source, int sink) {
        GoldenInt total{0, 0};
        while (bfs(source, sink)) {
            for (size_t i = 0; i < iter_.size(); ++i) iter_[i] = head_[i];
            while (true) {
                GoldenInt pushed = dfs(source, sink, GoldenInt{0, 0}, true);
                if (!pushed.positive()) break;
                total += pushed;
            }
        }
        return total;
    }

    /// Side of the minimum cut containing `source` after run().
    std::vector<char> source_side(int source) const {
        std::vector<char> seen(node_count(), 0);
        std::vector<int> stack{source};
        seen[source] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int e = head_[u]; e >= 0; e = edges_[e].next) {
                if (edges_[e].cap.positive() && !seen[edges_[e].to]) {
                    seen[edges_[e].to] = 1;
                    stack.push_back(edges_[e].to);
                }
            }
        }
        return seen;
    }

private:
    struct Edge {
        int to;
        int next;
        GoldenInt cap;  // residual capacity
    };

    bool bfs(int source, int sink) {
        std::fill(level_.begin(), level_.end(), -1);
        std::vector<int> queue{source};
        level_[source] = 0;
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            int u = queue[qi];
            for (int e = head_[u]; e >= 0; e = edges_[e].next) {
                if (edges_[e].cap.positive() && level_[edges_[e].to] < 0) {
                    level_[edges_[e].to] = level_[u] + 1;
                    queue.push_back(edges_[e].to);
                }
            }
        }
        return level_[sink] >= 0;
    }

    // unlimited=true at the root: push the bottleneck of the found path
    GoldenInt dfs(int u, int sink, GoldenInt limit, bool unlimited) {
        if (u == sink) return limit;
        for (int& e = iter_[u]; e >= 0; e = edges_[e].next) {
            Edge& edge = edges_[e];
            if (!edge.cap.positive() || level_[edge.to] != level_[u] + 1) continue;
            GoldenInt pass = unlimited ? edge.cap : GoldenInt::min(limit, edge.cap);
            GoldenInt pushed = dfs(edge.to, sink, pass, false);
            if (pushed.positive()) {
                edge.cap -= pushed;
                edges_[e ^ 1].cap += pushed;
                return pushed;
            }
        }
        level_[u] = -2;
        return GoldenInt{0, 0};
    }

    std::vector<int> head_;
    std::vector<Edge> edges_;
    std::vector<int> level_;
    std::vector<int> iter_;
};

} // namespace tiletransport
