#pragma once

// Small adjacency-list digraph utilities: strongly connected components,
// sink components and the period (gcd of cycle lengths).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

namespace traintrack::detail {

  using Adjacency = std::vector<std::vector<std::size_t>>;

  // Tarjan, iterative. Returns component id per node; ids are in reverse
  // topological order of the condensation (sinks first).
  inline std::vector<std::size_t> strongly_connected_components(
      Adjacency const& adj,
      std::size_t*     component_count = nullptr) {
    std::size_t const        n     = adj.size();
    std::size_t const        unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> index(n, unset), low(n, 0), comp(n, unset);
    std::vector<bool>        on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t              next_index = 0, next_comp = 0;

    struct Frame {
      std::size_t node;
      std::size_t edge;
    };
    std::vector<Frame> call;

    for (std::size_t root = 0; root < n; ++root) {
      if (index[root] != unset) {
        continue;
      }
      call.push_back({root, 0});
      index[root] = low[root] = next_index++;
      stack.push_back(root);
      on_stack[root] = true;
      while (!call.empty()) {
        auto& f = call.back();
        if (f.edge < adj[f.node].size()) {
          std::size_t const w = adj[f.node][f.edge++];
          if (index[w] == unset) {
            index[w] = low[w] = next_index++;
            stack.push_back(w);
            on_stack[w] = true;
            call.push_back({w, 0});
          } else if (on_stack[w]) {
            low[f.node] = std::min(low[f.node], index[w]);
          }
          continue;
        }
        std::size_t const v = f.node;
        call.pop_back();
        if (!call.empty()) {
          low[call.back().node] = std::min(low[call.back().node], low[v]);
        }
        if (low[v] == index[v]) {
          std::size_t w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w]     = next_comp;
          } while (w != v);
          ++next_comp;
        }
      }
    }
    if (component_count) {
      *component_count = next_comp;
    }
    return comp;
  }

  struct Periodicity {
    std::size_t              period = 0;
    std::vector<std::size_t> distance;  // BFS distance from node 0
  };

  // Period of a strongly connected digraph: gcd over edges u->v of
  // dist(u) + 1 - dist(v).
  inline Periodicity period(Adjacency const& adj) {
    std::size_t const n = adj.size();
    Periodicity       p;
    p.distance.assign(n, std::numeric_limits<std::size_t>::max());
    if (n == 0) {
      return p;
    }
    std::vector<std::size_t> queue{0};
    p.distance[0] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      std::size_t const u = queue[head];
      for (std::size_t v : adj[u]) {
        if (p.distance[v] == std::numeric_limits<std::size_t>::max()) {
          p.distance[v] = p.distance[u] + 1;
          queue.push_back(v);
        }
      }
    }
    std::size_t g = 0;
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v : adj[u]) {
        auto const a = static_cast<long long>(p.distance[u]) + 1;
        auto const b = static_cast<long long>(p.distance[v]);
        g = std::gcd(g, static_cast<std::size_t>(a > b ? a - b : b - a));
      }
    }
    p.period = g;
    return p;
  }

}  // namespace traintrack::detail
