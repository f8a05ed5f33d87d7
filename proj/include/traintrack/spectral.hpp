#pragma once

// Perron-Frobenius data of irreducible transition matrices: stretch factor,
// normalized left eigenvector (the eigenmetric), cyclic index and blocks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "detail/digraph.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "graph_map.hpp"

namespace traintrack {

  struct CyclicStructure {
    std::size_t                           k = 1;
    std::vector<std::vector<std::size_t>> blocks;    // in cyclic order
    std::vector<std::size_t>              block_of;  // per edge pair
  };

  struct Eigenpair {
    double              lambda = 0.0;
    std::vector<double> nu;
    double              residual   = 0.0;
    std::size_t         iterations = 0;
  };

  struct PFData {
    double                                lambda = 0.0;
    std::vector<double>                   nu;
    std::size_t                           k = 1;
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<std::size_t>              block_of;
    std::vector<bool>                     primitive_first_return;
    double                                residual   = 0.0;
    std::size_t                           iterations = 0;
  };

  struct SpectralOptions {
    double      tol            = 1e-12;
    double      residual_limit = 1e-9;
    std::size_t max_iterations = 1'000'000;
  };

  namespace detail {
    inline void require_irreducible(TransitionMatrix const& a, char const* who) {
      if (!is_irreducible(a)) {
        throw PreconditionError(std::string(who)
                                + ": transition matrix is reducible");
      }
    }

    // Row vector times matrix.
    inline std::vector<double> times(std::vector<double> const& x,
                                     TransitionMatrix const&    a) {
      std::size_t const   n = a.size();
      std::vector<double> y(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        if (x[i] == 0.0) {
          continue;
        }
        for (std::size_t j = 0; j < n; ++j) {
          y[j] += x[i] * static_cast<double>(a.at(i, j));
        }
      }
      return y;
    }

    inline double l1(std::vector<double> const& x) {
      double s = 0.0;
      for (double v : x) {
        s += std::abs(v);
      }
      return s;
    }

    // Support of A^k as a digraph, f -> e when (A^k)[e][f] > 0.
    inline Adjacency support_power(TransitionMatrix const& a, std::size_t k) {
      std::size_t const              n = a.size();
      std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
      for (std::size_t f = 0; f < n; ++f) {
        reach[f][f] = true;
      }
      for (std::size_t step = 0; step < k; ++step) {
        std::vector<std::vector<bool>> next(n, std::vector<bool>(n, false));
        for (std::size_t f = 0; f < n; ++f) {
          for (std::size_t g = 0; g < n; ++g) {
            if (!reach[f][g]) {
              continue;
            }
            for (std::size_t e = 0; e < n; ++e) {
              if (a.at(e, g) > 0) {
                next[f][e] = true;
              }
            }
          }
        }
        reach = std::move(next);
      }
      Adjacency adj(n);
      for (std::size_t f = 0; f < n; ++f) {
        for (std::size_t e = 0; e < n; ++e) {
          if (reach[f][e]) {
            adj[f].push_back(e);
          }
        }
      }
      return adj;
    }
  }  // namespace detail

  // Period of the occurrence digraph and the residue classes of the BFS
  // distance from edge pair 0. The map carries block j into block j+1.
  inline CyclicStructure cyclic_index(TransitionMatrix const& a) {
    detail::require_irreducible(a, "cyclic_index");
    auto const      p = detail::period(a.occurrence_digraph());
    CyclicStructure c;
    c.k = p.period;
    c.blocks.assign(c.k, {});
    c.block_of.resize(a.size());
    for (std::size_t e = 0; e < a.size(); ++e) {
      c.block_of[e] = p.distance[e] % c.k;
      c.blocks[c.block_of[e]].push_back(e);
    }
    return c;
  }

  // Power iteration on x -> x A^k from the all-ones vector. For k > 1 the
  // k phases x A^j / lambda^j are averaged into the eigenvector.
  inline Eigenpair pf_eigen(TransitionMatrix const& a,
                            SpectralOptions const&  opt = {}) {
    detail::require_irreducible(a, "pf_eigen");
    std::size_t const n = a.size();
    Eigenpair         out;
    if (n == 1) {
      out.lambda = static_cast<double>(a.at(0, 0));
      out.nu     = {1.0};
      return out;
    }
    std::size_t const k = cyclic_index(a).k;
    std::vector<double> x(n, 1.0 / static_cast<double>(n));
    double              lambda_k = 0.0;
    bool                done     = false;
    std::size_t         it       = 0;
    for (; it < opt.max_iterations && !done; ++it) {
      std::vector<double> y = x;
      for (std::size_t j = 0; j < k; ++j) {
        y = detail::times(y, a);
      }
      double const s = detail::l1(y);
      double       dx = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        y[i] /= s;
        dx = std::max(dx, std::abs(y[i] - x[i]));
      }
      done     = std::abs(s - lambda_k) < opt.tol * std::max(1.0, s) && dx < opt.tol;
      lambda_k = s;
      x        = std::move(y);
    }
    double const lambda = std::pow(lambda_k, 1.0 / static_cast<double>(k));
    if (!done) {
      throw ConvergenceError("pf_eigen: no convergence within "
                                 + std::to_string(opt.max_iterations)
                                 + " iterations",
                             lambda);
    }
    std::vector<double> nu(n, 0.0), phase = x;
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        nu[i] += phase[i];
      }
      phase = detail::times(phase, a);
      for (auto& v : phase) {
        v /= lambda;
      }
    }
    double const total = detail::l1(nu);
    for (auto& v : nu) {
      v /= total;
    }
    auto const nua = detail::times(nu, a);
    out.lambda     = detail::l1(nua);
    out.residual   = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      out.residual = std::max(out.residual, std::abs(nua[i] - out.lambda * nu[i]));
    }
    out.nu         = std::move(nu);
    out.iterations = it;
    return out;
  }

  inline PFData perron_frobenius(TransitionMatrix const& a,
                                 SpectralOptions const&  opt = {}) {
    auto const e = pf_eigen(a, opt);
    auto const c = cyclic_index(a);
    PFData     pf;
    pf.lambda     = e.lambda;
    pf.nu         = e.nu;
    pf.residual   = e.residual;
    pf.iterations = e.iterations;
    pf.k          = c.k;
    pf.blocks     = c.blocks;
    pf.block_of   = c.block_of;
    if (pf.residual > opt.residual_limit * std::max(1.0, pf.lambda)) {
      throw ConvergenceError("pf_eigen: residual " + std::to_string(pf.residual)
                                 + " above acceptance limit",
                             pf.lambda);
    }
    for (double v : pf.nu) {
      if (!(v > 0.0)) {
        throw ConsistencyError("Perron-Frobenius vector is not positive");
      }
    }
    auto const adj = detail::support_power(a, pf.k);
    for (auto const& block : pf.blocks) {
      std::vector<std::size_t> local(a.size(), 0);
      for (std::size_t i = 0; i < block.size(); ++i) {
        local[block[i]] = i;
      }
      detail::Adjacency sub(block.size());
      bool              closed = true;
      for (std::size_t i = 0; i < block.size(); ++i) {
        for (auto e : adj[block[i]]) {
          if (pf.block_of[e] != pf.block_of[block[i]]) {
            closed = false;
          } else {
            sub[i].push_back(local[e]);
          }
        }
      }
      std::size_t comps = 0;
      detail::strongly_connected_components(sub, &comps);
      pf.primitive_first_return.push_back(closed && comps == 1
                                          && detail::period(sub).period == 1);
    }
    return pf;
  }

  // Edge lengths nu; a train track is then a lambda-homothety on edges.
  inline Metric eigenmetric(PFData const& pf) { return Metric(pf.nu); }

  inline Metric eigenmetric(GraphMap const& f, PFData const& pf) {
    if (pf.nu.size() != f.domain().edge_pair_count()) {
      throw InputError("eigenmetric: PF data does not match the graph");
    }
    return Metric(pf.nu);
  }

  // |path_length(f(e), nu) - lambda nu_e| maximized over edges.
  inline double homothety_defect(GraphMap const& f, PFData const& pf) {
    auto const d   = eigenmetric(f, pf);
    double     out = 0.0;
    for (std::size_t p = 0; p < f.images().size(); ++p) {
      out = std::max(out, std::abs(path_length(f.image(p), d)
                                   - pf.lambda * pf.nu[p]));
    }
    return out;
  }

}  // namespace traintrack
