#pragma once

// Finite connected graphs with involutive oriented edges. Oriented edge ids
// are Letter codes: edge pair p has orientations 2p and 2p+1, and
// reverse(e) = e ^ 1. On the rose these are exactly the generators.

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "word.hpp"

namespace traintrack {

  using OrientedEdge = Letter;

  class Graph {
   public:
    struct Endpoints {
      std::uint32_t origin;
      std::uint32_t terminus;
    };

    Graph(std::size_t                vertex_count,
          std::vector<Endpoints>     edges,
          std::vector<std::string>   names         = {},
          std::optional<std::size_t> expected_rank = {})
        : vertex_count_(vertex_count),
          edges_(std::move(edges)),
          names_(std::move(names)) {
      if (vertex_count_ == 0) {
        throw InputError("graph needs at least one vertex");
      }
      if (!names_.empty() && names_.size() != edges_.size()) {
        throw InputError("graph: edge name count does not match edge count");
      }
      for (auto const& e : edges_) {
        if (e.origin >= vertex_count_ || e.terminus >= vertex_count_) {
          throw InputError("graph: edge endpoint out of range");
        }
      }
      build_incidence();
      check_connected();
      if (expected_rank && *expected_rank != rank()) {
        throw InputError("graph: first Betti number is "
                         + std::to_string(rank()) + ", expected "
                         + std::to_string(*expected_rank));
      }
    }

    // One vertex, rank loops named a, b, c, ...
    static Graph rose(std::size_t rank) {
      if (rank == 0 || rank > 26) {
        throw InputError("rose rank must be in [1, 26]");
      }
      std::vector<Endpoints> edges(rank, Endpoints{0, 0});
      return Graph(1, std::move(edges));
    }

    [[nodiscard]] std::size_t vertex_count() const noexcept {
      return vertex_count_;
    }
    [[nodiscard]] std::size_t edge_pair_count() const noexcept {
      return edges_.size();
    }
    [[nodiscard]] std::size_t oriented_edge_count() const noexcept {
      return 2 * edges_.size();
    }
    [[nodiscard]] bool is_rose() const noexcept { return vertex_count_ == 1; }

    // First Betti number.
    [[nodiscard]] std::size_t rank() const noexcept {
      return edges_.size() + 1 - vertex_count_;
    }

    [[nodiscard]] std::uint32_t origin(OrientedEdge e) const {
      auto const& p = edges_.at(e.index());
      return e.inverted() ? p.terminus : p.origin;
    }

    [[nodiscard]] std::uint32_t terminus(OrientedEdge e) const {
      return origin(e.inverse());
    }

    // Oriented edges (directions) whose origin is v.
    [[nodiscard]] std::span<OrientedEdge const>
    directions(std::uint32_t v) const {
      return std::span<OrientedEdge const>(incidence_)
          .subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
    }

    [[nodiscard]] std::string edge_name(std::size_t pair) const {
      if (!names_.empty()) {
        return names_[pair];
      }
      if (pair < 26) {
        return std::string(1, static_cast<char>('a' + pair));
      }
      return "e" + std::to_string(pair);
    }

    [[nodiscard]] std::vector<std::string> const& names() const noexcept {
      return names_;
    }

    [[nodiscard]] std::string format(OrientedEdge e) const {
      if (names_.empty() && edges_.size() <= 26) {
        return std::string(1, letter_char(e));
      }
      return (e.inverted() ? "-" : "") + edge_name(e.index());
    }

    // Letter strings on unnamed graphs (roses), space separated names else.
    [[nodiscard]] std::string format(std::span<OrientedEdge const> p) const {
      if (names_.empty() && edges_.size() <= 26) {
        return to_string(p);
      }
      if (p.empty()) {
        return "1";
      }
      std::string out;
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) {
          out.push_back(' ');
        }
        out += format(p[i]);
      }
      return out;
    }

    [[nodiscard]] bool letter_named() const noexcept {
      return names_.empty() && edges_.size() <= 26;
    }

    [[nodiscard]] std::vector<Endpoints> const& edges() const noexcept {
      return edges_;
    }

    [[nodiscard]] bool contains(OrientedEdge e) const noexcept {
      return e.index() < edges_.size();
    }

   private:
    void build_incidence() {
      offsets_.assign(vertex_count_ + 1, 0);
      for (auto const& e : edges_) {
        ++offsets_[e.origin + 1];
        ++offsets_[e.terminus + 1];
      }
      std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
      incidence_.resize(2 * edges_.size());
      std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
      for (std::uint32_t p = 0; p < edges_.size(); ++p) {
        incidence_[fill[edges_[p].origin]++] = OrientedEdge::generator(p);
        incidence_[fill[edges_[p].terminus]++]
            = OrientedEdge::generator(p, true);
      }
    }

    void check_connected() const {
      std::vector<bool>          seen(vertex_count_, false);
      std::vector<std::uint32_t> stack{0};
      seen[0] = true;
      while (!stack.empty()) {
        auto const v = stack.back();
        stack.pop_back();
        for (auto e : directions(v)) {
          auto const w = terminus(e);
          if (!seen[w]) {
            seen[w] = true;
            stack.push_back(w);
          }
        }
      }
      for (bool s : seen) {
        if (!s) {
          throw InputError("graph is not connected");
        }
      }
    }

    std::size_t               vertex_count_;
    std::vector<Endpoints>    edges_;
    std::vector<std::string>  names_;
    std::vector<std::size_t>  offsets_;
    std::vector<OrientedEdge> incidence_;
  };

  // A tight edge path: consecutive edges compose and never backtrack.
  class EdgePath {
   public:
    EdgePath() = default;

    [[nodiscard]] std::span<OrientedEdge const> edges() const noexcept {
      return edges_;
    }
    [[nodiscard]] Letters const& vector() const noexcept { return edges_; }
    [[nodiscard]] std::size_t    size() const noexcept { return edges_.size(); }
    [[nodiscard]] bool           empty() const noexcept { return edges_.empty(); }
    [[nodiscard]] OrientedEdge   operator[](std::size_t i) const {
      return edges_[i];
    }
    [[nodiscard]] auto begin() const noexcept { return edges_.begin(); }
    [[nodiscard]] auto end() const noexcept { return edges_.end(); }

    [[nodiscard]] EdgePath reversed() const {
      return EdgePath(detail::inverse_of(edges_));
    }

    bool operator==(EdgePath const&) const = default;

    // Caller guarantees tightness and composability.
    static EdgePath from_tight(Letters edges) {
      return EdgePath(std::move(edges));
    }

   private:
    explicit EdgePath(Letters edges) : edges_(std::move(edges)) {}
    Letters edges_;
  };

  inline void check_composable(Graph const& g, std::span<OrientedEdge const> p) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!g.contains(p[i])) {
        throw InputError("edge id " + std::to_string(p[i].index())
                         + " not in graph");
      }
      if (i > 0 && g.terminus(p[i - 1]) != g.origin(p[i])) {
        throw InputError("edges at positions " + std::to_string(i - 1)
                         + " and " + std::to_string(i) + " do not compose");
      }
    }
  }

  // Removes backtracking pairs (e, reverse(e)). The input must compose.
  inline EdgePath tighten(Graph const& g, std::span<OrientedEdge const> raw) {
    check_composable(g, raw);
    Letters out;
    out.reserve(raw.size());
    for (auto e : raw) {
      detail::push_reduced(out, e);
    }
    return EdgePath::from_tight(std::move(out));
  }

  // Positive lengths per edge pair.
  class Metric {
   public:
    Metric() = default;

    explicit Metric(std::vector<double> lengths) : lengths_(std::move(lengths)) {
      for (double x : lengths_) {
        if (!(x > 0.0)) {
          throw InputError("metric lengths must be positive");
        }
      }
    }

    static Metric unit(std::size_t pairs) {
      return Metric(std::vector<double>(pairs, 1.0));
    }

    [[nodiscard]] Metric scaled(double s) const {
      auto l = lengths_;
      for (auto& x : l) {
        x *= s;
      }
      return Metric(std::move(l));
    }

    [[nodiscard]] double length(OrientedEdge e) const {
      return lengths_.at(e.index());
    }

    [[nodiscard]] std::vector<double> const& lengths() const noexcept {
      return lengths_;
    }
    [[nodiscard]] std::size_t size() const noexcept { return lengths_.size(); }

   private:
    std::vector<double> lengths_;
  };

  inline double path_length(std::span<OrientedEdge const> p, Metric const& d) {
    double sum = 0.0;
    for (auto e : p) {
      sum += d.length(e);
    }
    return sum;
  }

  inline double path_length(EdgePath const& p, Metric const& d) {
    return path_length(p.edges(), d);
  }

  // The closed edge path of a cyclic word on the rose of matching rank.
  inline EdgePath cyclic_word_to_loop(CyclicWord const& w, Graph const& g) {
    if (!g.is_rose()) {
      throw InputError("cyclic_word_to_loop: graph is not a rose");
    }
    for (Letter x : w.letters()) {
      if (x.index() >= g.edge_pair_count()) {
        throw InputError("cyclic_word_to_loop: rank mismatch");
      }
    }
    auto const l = w.letters();
    return EdgePath::from_tight(Letters(l.begin(), l.end()));
  }

  // A cyclically tight closed path in g, as a cyclic word of oriented edges.
  inline CyclicWord make_loop(Graph const& g, Letters edges) {
    check_composable(g, edges);
    if (!edges.empty() && g.terminus(edges.back()) != g.origin(edges.front())) {
      throw InputError("edge path is not closed");
    }
    return CyclicWord(cyclically_reduced(std::move(edges)));
  }

}  // namespace traintrack
