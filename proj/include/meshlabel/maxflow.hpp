#pragma once

#include <limits>
#include <queue>
#include <vector>

#include "meshlabel/error.hpp"

namespace meshlabel {

/// Residual capacity below this counts as saturated.
inline constexpr double kFlowEps = 1e-12;

/// Exact s-t max-flow / min-cut (Dinic's algorithm, deterministic given
/// insertion order). Capacities must be non-negative and finite.
class MaxFlow {
public:
    explicit MaxFlow(int num_nodes) : head_(static_cast<size_t>(num_nodes), -1) {}

    int num_nodes() const { return static_cast<int>(head_.size()); }

    int add_node() {
        head_.push_back(-1);
        return num_nodes() - 1;
    }

    /// Adds the arc u->v with the given capacity and its reverse arc v->u
    /// with rev_cap (0 for a purely directed arc).
    void add_edge(int u, int v, double cap, double rev_cap = 0.0) {
        check_invariant(cap >= 0.0 && rev_cap >= 0.0, "max-flow: negative capacity");
        arcs_.push_back({v, head_[u], cap});
        head_[u] = static_cast<int>(arcs_.size()) - 1;
        arcs_.push_back({u, head_[v], rev_cap});
        head_[v] = static_cast<int>(arcs_.size()) - 1;
    }

    /// Computes the max flow from s to t and returns its value (equal to the
    /// min-cut value). Afterwards source_side() identifies the cut partition.
    double solve(int s, int t) {
        source_ = s;
        double flow = 0.0;
        level_.assign(head_.size(), -1);
        iter_.assign(head_.size(), -1);
        while (bfs_level(s, t)) {
            iter_ = head_;
            double pushed;
            while ((pushed = dfs_push(s, t, std::numeric_limits<double>::infinity())) > 0.0)
                flow += pushed;
        }
        // Final level assignment doubles as residual reachability from s.
        bfs_level(s, t);
        solved_ = true;
        return flow;
    }

    /// True when the node is on the source side of the min cut.
    bool source_side(int v) const {
        check_invariant(solved_, "max-flow: solve() not run");
        return level_[v] >= 0;
    }

private:
    struct Arc {
        int to;
        int next;
        double cap;  // residual capacity
    };

    bool bfs_level(int s, int t) {
        level_.assign(head_.size(), -1);
        std::queue<int> q;
        level_[s] = 0;
        q.push(s);
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (int a = head_[u]; a >= 0; a = arcs_[a].next) {
                if (arcs_[a].cap > kFlowEps && level_[arcs_[a].to] < 0) {
                    level_[arcs_[a].to] = level_[u] + 1;
                    q.push(arcs_[a].to);
                }
            }
        }
        return level_[t] >= 0;
    }

    double dfs_push(int u, int t, double limit) {
        if (u == t) return limit;
        for (int& a = iter_[u]; a >= 0; a = arcs_[a].next) {
            const Arc& arc = arcs_[a];
            if (arc.cap > kFlowEps && level_[arc.to] == level_[u] + 1) {
                const double pushed = dfs_push(arc.to, t, std::min(limit, arc.cap));
                if (pushed > 0.0) {
                    arcs_[a].cap -= pushed;
                    arcs_[a ^ 1].cap += pushed;
                    return pushed;
                }
            }
        }
        level_[u] = -1;  // dead end in this phase
        return 0.0;
    }

    std::vector<int> head_;
    std::vector<Arc> arcs_;
    std::vector<int> level_;
    std::vector<int> iter_;
    int source_ = -1;
    bool solved_ = false;
};

}  // namespace meshlabel
