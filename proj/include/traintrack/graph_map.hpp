#pragma once

// Topological representatives: tight graph self-maps, their transition
// matrices, and the train-track check via turns and the derivative map.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "automorphism.hpp"
#include "detail/digraph.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "word.hpp"

namespace traintrack {

  ////////////////////////////////////////////////////////////////////////
  // TransitionMatrix
  ////////////////////////////////////////////////////////////////////////

  // Square nonnegative integer matrix indexed by edge pairs. Entry (e, f)
  // counts occurrences of e (either orientation) in the image of f.
  class TransitionMatrix {
   public:
    TransitionMatrix() = default;

    explicit TransitionMatrix(std::size_t n) : n_(n), a_(n * n, 0) {}

    TransitionMatrix(std::size_t n, std::vector<std::int64_t> row_major)
        : n_(n), a_(std::move(row_major)) {
      if (a_.size() != n_ * n_) {
        throw InputError("TransitionMatrix: wrong number of entries");
      }
      for (auto x : a_) {
        if (x < 0) {
          throw InputError("TransitionMatrix: negative entry");
        }
      }
    }

    static TransitionMatrix identity(std::size_t n) {
      TransitionMatrix m(n);
      for (std::size_t i = 0; i < n; ++i) {
        m.at(i, i) = 1;
      }
      return m;
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }

    [[nodiscard]] std::int64_t at(std::size_t row, std::size_t col) const {
      return a_[row * n_ + col];
    }
    std::int64_t& at(std::size_t row, std::size_t col) {
      return a_[row * n_ + col];
    }

    [[nodiscard]] std::int64_t column_sum(std::size_t col) const {
      std::int64_t s = 0;
      for (std::size_t r = 0; r < n_; ++r) {
        s += at(r, col);
      }
      return s;
    }

    friend TransitionMatrix operator*(TransitionMatrix const& x,
                                      TransitionMatrix const& y) {
      if (x.n_ != y.n_) {
        throw InputError("TransitionMatrix: size mismatch");
      }
      TransitionMatrix z(x.n_);
      for (std::size_t i = 0; i < x.n_; ++i) {
        for (std::size_t k = 0; k < x.n_; ++k) {
          auto const xik = x.at(i, k);
          if (xik == 0) {
            continue;
          }
          for (std::size_t j = 0; j < x.n_; ++j) {
            z.at(i, j) += xik * y.at(k, j);
          }
        }
      }
      return z;
    }

    [[nodiscard]] TransitionMatrix power(std::size_t m) const {
      TransitionMatrix result = identity(n_);
      TransitionMatrix base   = *this;
      while (m > 0) {
        if (m & 1u) {
          result = result * base;
        }
        m >>= 1;
        if (m > 0) {
          base = base * base;
        }
      }
      return result;
    }

    // Arc f -> e whenever e occurs in the image of f.
    [[nodiscard]] detail::Adjacency occurrence_digraph() const {
      detail::Adjacency adj(n_);
      for (std::size_t f = 0; f < n_; ++f) {
        for (std::size_t e = 0; e < n_; ++e) {
          if (at(e, f) > 0) {
            adj[f].push_back(e);
          }
        }
      }
      return adj;
    }

    [[nodiscard]] std::vector<std::vector<std::int64_t>> rows() const {
      std::vector<std::vector<std::int64_t>> out(n_);
      for (std::size_t r = 0; r < n_; ++r) {
        out[r].assign(a_.begin() + static_cast<std::ptrdiff_t>(r * n_),
                      a_.begin() + static_cast<std::ptrdiff_t>((r + 1) * n_));
      }
      return out;
    }

    bool operator==(TransitionMatrix const&) const = default;

   private:
    std::size_t               n_ = 0;
    std::vector<std::int64_t> a_;
  };

  ////////////////////////////////////////////////////////////////////////
  // GraphMap
  ////////////////////////////////////////////////////////////////////////

  class GraphMap {
   public:
    // Images are given for the positive orientation of each edge pair; the
    // image of the reverse edge is the reversed path. Vertex images are
    // inferred from edge images when not supplied.
    GraphMap(Graph                                     domain,
             std::vector<Letters>                      edge_images,
             std::optional<std::vector<std::uint32_t>> vertex_images = {})
        : domain_(std::move(domain)), images_(std::move(edge_images)) {
      if (images_.size() != domain_.edge_pair_count()) {
        throw InputError("graph map: expected "
                         + std::to_string(domain_.edge_pair_count())
                         + " edge images, got "
                         + std::to_string(images_.size()));
      }
      for (std::size_t p = 0; p < images_.size(); ++p) {
        auto const& img = images_[p];
        if (img.empty()) {
          throw InputError("graph map: image of edge "
                           + domain_.edge_name(p) + " is trivial");
        }
        check_composable(domain_, img);
        if (!detail::is_reduced(img)) {
          throw InputError("graph map: image of edge " + domain_.edge_name(p)
                           + " is not tight");
        }
      }
      std::vector<std::optional<std::uint32_t>> vi(domain_.vertex_count());
      for (std::size_t p = 0; p < images_.size(); ++p) {
        auto const e = OrientedEdge::generator(static_cast<std::uint32_t>(p));
        assign_vertex(vi, domain_.origin(e), domain_.origin(images_[p].front()));
        assign_vertex(vi, domain_.terminus(e),
                      domain_.terminus(images_[p].back()));
      }
      if (vertex_images) {
        if (vertex_images->size() != domain_.vertex_count()) {
          throw InputError("graph map: wrong number of vertex images");
        }
        for (std::uint32_t v = 0; v < vi.size(); ++v) {
          if ((*vertex_images)[v] >= domain_.vertex_count()) {
            throw InputError("graph map: vertex image out of range");
          }
          assign_vertex(vi, v, (*vertex_images)[v]);
        }
      }
      vertex_images_.resize(vi.size());
      for (std::size_t v = 0; v < vi.size(); ++v) {
        if (!vi[v]) {
          throw InputError("graph map: image of isolated vertex undetermined");
        }
        vertex_images_[v] = *vi[v];
      }
    }

    [[nodiscard]] Graph const& domain() const noexcept { return domain_; }

    [[nodiscard]] std::uint32_t vertex_image(std::uint32_t v) const {
      return vertex_images_.at(v);
    }

    [[nodiscard]] std::vector<std::uint32_t> const&
    vertex_images() const noexcept {
      return vertex_images_;
    }

    // Image of the positively oriented edge of pair p.
    [[nodiscard]] Letters const& image(std::size_t pair) const {
      return images_.at(pair);
    }

    [[nodiscard]] std::vector<Letters> const& images() const noexcept {
      return images_;
    }

    [[nodiscard]] Letters image(OrientedEdge e) const {
      auto const& img = images_.at(e.index());
      return e.inverted() ? detail::inverse_of(img) : img;
    }

    [[nodiscard]] std::size_t image_length(OrientedEdge e) const {
      return images_.at(e.index()).size();
    }

    // Letter at position i of the image of e, honouring orientation.
    [[nodiscard]] OrientedEdge image_at(OrientedEdge e, std::size_t i) const {
      auto const& img = images_[e.index()];
      return e.inverted() ? img[img.size() - 1 - i].inverse() : img[i];
    }

    // First edge of the image: the derivative on directions.
    [[nodiscard]] OrientedEdge derivative(OrientedEdge e) const {
      return image_at(e, 0);
    }

    void append_image(OrientedEdge e, Letters& out) const {
      auto const& img = images_[e.index()];
      if (!e.inverted()) {
        for (auto x : img) {
          detail::push_reduced(out, x);
        }
      } else {
        for (auto it = img.rbegin(); it != img.rend(); ++it) {
          detail::push_reduced(out, it->inverse());
        }
      }
    }

    [[nodiscard]] std::size_t max_image_length() const noexcept {
      std::size_t m = 0;
      for (auto const& img : images_) {
        m = std::max(m, img.size());
      }
      return m;
    }

   private:
    static void assign_vertex(std::vector<std::optional<std::uint32_t>>& vi,
                              std::uint32_t                              v,
                              std::uint32_t                              w) {
      if (vi[v] && *vi[v] != w) {
        throw InputError("graph map: edge images disagree on the image of "
                         "vertex "
                         + std::to_string(v));
      }
      vi[v] = w;
    }

    Graph                      domain_;
    std::vector<Letters>       images_;
    std::vector<std::uint32_t> vertex_images_;
  };

  // The rose map whose edge images are the generator images.
  inline GraphMap rose_map(Automorphism const& psi) {
    std::vector<Letters> images;
    images.reserve(psi.rank());
    for (auto const& w : psi.images()) {
      images.push_back(w.vector());
    }
    return GraphMap(Graph::rose(psi.rank()), std::move(images));
  }

  namespace detail {
    // Image of a raw edge sequence, tightened. Throws BudgetExceeded.
    inline Letters map_letters(GraphMap const&               f,
                               std::span<OrientedEdge const> p,
                               std::size_t                   budget) {
      Letters out;
      out.reserve(std::min(budget, p.size() * f.max_image_length()));
      for (auto e : p) {
        f.append_image(e, out);
        if (out.size() > budget) {
          throw BudgetExceeded("map_path: path length exceeds budget of "
                                   + std::to_string(budget) + " edges",
                               0);
        }
      }
      return out;
    }
  }  // namespace detail

  inline EdgePath map_path(GraphMap const& f,
                           EdgePath const& p,
                           std::size_t     budget = kDefaultWordBudget) {
    return EdgePath::from_tight(detail::map_letters(f, p.edges(), budget));
  }

  // f^m applied to a path, tightening after every step.
  inline EdgePath map_path_iterated(GraphMap const& f,
                                    EdgePath        p,
                                    std::size_t     m,
                                    std::size_t     budget = kDefaultWordBudget) {
    for (std::size_t i = 0; i < m; ++i) {
      try {
        p = map_path(f, p, budget);
      } catch (BudgetExceeded const& e) {
        throw BudgetExceeded(e.what(), i);
      }
    }
    return p;
  }

  // g o f: images of f pushed through g and tightened.
  inline GraphMap compose(GraphMap const& g, GraphMap const& f) {
    if (g.domain().edge_pair_count() != f.domain().edge_pair_count()
        || g.domain().vertex_count() != f.domain().vertex_count()) {
      throw InputError("compose: maps live on different graphs");
    }
    std::vector<Letters> images;
    for (auto const& img : f.images()) {
      images.push_back(detail::map_letters(g, img, kDefaultWordBudget));
    }
    std::vector<std::uint32_t> vi(f.domain().vertex_count());
    for (std::uint32_t v = 0; v < vi.size(); ++v) {
      vi[v] = g.vertex_image(f.vertex_image(v));
    }
    return GraphMap(f.domain(), std::move(images), std::move(vi));
  }

  inline GraphMap power(GraphMap const& f, std::size_t m) {
    if (m == 0) {
      throw InputError("power: exponent must be positive");
    }
    GraphMap result = f;
    for (std::size_t i = 1; i < m; ++i) {
      result = compose(f, result);
    }
    return result;
  }

  inline TransitionMatrix transition_matrix(GraphMap const& f) {
    std::size_t const n = f.domain().edge_pair_count();
    TransitionMatrix  a(n);
    for (std::size_t p = 0; p < n; ++p) {
      for (auto e : f.image(p)) {
        ++a.at(e.index(), p);
      }
    }
    return a;
  }

  inline bool is_irreducible(TransitionMatrix const& a) {
    if (a.size() == 0 || (a.size() == 1 && a.at(0, 0) == 0)) {
      return false;
    }
    std::size_t count = 0;
    detail::strongly_connected_components(a.occurrence_digraph(), &count);
    return count == 1;
  }

  // A proper nonempty set of edge pairs closed under the map (a sink
  // component of the occurrence digraph), or nothing when irreducible.
  inline std::optional<std::vector<std::size_t>>
  find_invariant_subgraph(TransitionMatrix const& a) {
    std::size_t count = 0;
    auto const  adj   = a.occurrence_digraph();
    auto const  comp  = detail::strongly_connected_components(adj, &count);
    if (count <= 1) {
      return std::nullopt;
    }
    std::vector<bool> is_sink(count, true);
    for (std::size_t u = 0; u < adj.size(); ++u) {
      for (auto v : adj[u]) {
        if (comp[u] != comp[v]) {
          is_sink[comp[u]] = false;
        }
      }
    }
    for (std::size_t u = 0; u < adj.size(); ++u) {
      if (is_sink[comp[u]]) {
        std::vector<std::size_t> out;
        for (std::size_t v = 0; v < adj.size(); ++v) {
          if (comp[v] == comp[u]) {
            out.push_back(v);
          }
        }
        return out;
      }
    }
    throw ConsistencyError("condensation without a sink component");
  }

  ////////////////////////////////////////////////////////////////////////
  // Turns and the train-track check
  ////////////////////////////////////////////////////////////////////////

  // Unordered pair of directions with a common origin.
  struct Turn {
    OrientedEdge first;
    OrientedEdge second;

    static Turn make(OrientedEdge a, OrientedEdge b) noexcept {
      return a <= b ? Turn{a, b} : Turn{b, a};
    }

    [[nodiscard]] bool degenerate() const noexcept { return first == second; }

    auto operator<=>(Turn const&) const = default;
  };

  inline Turn derivative(GraphMap const& f, Turn t) {
    return Turn::make(f.derivative(t.first), f.derivative(t.second));
  }

  // Turn crossed between consecutive edges x, y of a path.
  inline Turn turn_between(OrientedEdge x, OrientedEdge y) {
    return Turn::make(x.inverse(), y);
  }

  inline std::set<Turn> taken_turns(GraphMap const& f) {
    std::set<Turn> out;
    for (auto const& img : f.images()) {
      for (std::size_t i = 1; i < img.size(); ++i) {
        out.insert(turn_between(img[i - 1], img[i]));
      }
    }
    return out;
  }

  struct TrainTrackWitness {
    OrientedEdge      edge;      // edge whose image takes the first turn
    std::size_t       position;  // junction index inside that image
    std::vector<Turn> orbit;     // taken turn, its derivative images, ...
    std::size_t       iterate;   // first m with f^m(edge) not tight
  };

  struct TrainTrackVerdict {
    bool                             train_track = false;
    std::optional<TrainTrackWitness> witness;
    std::size_t                      closure_size = 0;
  };

  // Closes the taken turns under the derivative; the map is a train track
  // iff no turn in the closure is degenerate. Breadth-first, so the witness
  // has the smallest failing iterate.
  inline TrainTrackVerdict is_train_track(GraphMap const& f) {
    struct Origin {
      OrientedEdge edge;
      std::size_t  position;
    };
    std::map<Turn, std::optional<Turn>> parent;
    std::map<Turn, Origin>              source;
    std::vector<Turn>                   frontier;
    for (std::size_t p = 0; p < f.images().size(); ++p) {
      auto const& img = f.image(p);
      for (std::size_t i = 1; i < img.size(); ++i) {
        auto const t = turn_between(img[i - 1], img[i]);
        if (parent.emplace(t, std::nullopt).second) {
          source.emplace(
              t, Origin{OrientedEdge::generator(static_cast<std::uint32_t>(p)),
                        i});
          frontier.push_back(t);
        }
      }
    }
    TrainTrackVerdict verdict;
    while (!frontier.empty()) {
      std::vector<Turn> next;
      for (auto const& t : frontier) {
        auto const u = derivative(f, t);
        if (u.degenerate()) {
          TrainTrackWitness w;
          w.orbit.push_back(u);
          std::optional<Turn> cur = t;
          while (cur) {
            w.orbit.push_back(*cur);
            if (!parent.at(*cur)) {
              auto const& s = source.at(*cur);
              w.edge        = s.edge;
              w.position    = s.position;
            }
            cur = parent.at(*cur);
          }
          std::reverse(w.orbit.begin(), w.orbit.end());
          w.iterate            = w.orbit.size();
          verdict.witness      = std::move(w);
          verdict.closure_size = parent.size();
          return verdict;
        }
        if (parent.emplace(u, t).second) {
          next.push_back(u);
        }
      }
      frontier = std::move(next);
    }
    verdict.train_track  = true;
    verdict.closure_size = parent.size();
    return verdict;
  }

  // All turns whose derivative orbit eventually degenerates.
  inline std::set<Turn> illegal_turns(GraphMap const& f) {
    auto const&    g = f.domain();
    std::set<Turn> out;
    std::size_t    turn_count = 0;
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
      auto const d = g.directions(v).size();
      turn_count += d * (d + 1) / 2;
    }
    for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
      auto const dirs = g.directions(v);
      for (std::size_t i = 0; i < dirs.size(); ++i) {
        for (std::size_t j = i + 1; j < dirs.size(); ++j) {
          auto t = Turn::make(dirs[i], dirs[j]);
          if (t.degenerate()) {
            continue;
          }
          auto const start = t;
          for (std::size_t s = 0; s <= turn_count; ++s) {
            t = derivative(f, t);
            if (t.degenerate()) {
              out.insert(start);
              break;
            }
          }
        }
      }
    }
    return out;
  }

  inline std::string format_turn(Graph const& g, Turn t) {
    return "{" + g.format(t.first) + ", " + g.format(t.second) + "}";
  }

}  // namespace traintrack
