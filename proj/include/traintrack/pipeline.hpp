#pragma once

// End-to-end analysis of a parsed input into an ordered JSON report. Every
// stage that cannot run records "skipped: <reason>" instead of aborting.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "automorphism.hpp"
#include "cancellation.hpp"
#include "convergence.hpp"
#include "errors.hpp"
#include "graph_map.hpp"
#include "lamination.hpp"
#include "limit_metric.hpp"
#include "parse.hpp"
#include "spectral.hpp"
#include "train_track.hpp"
#include "word.hpp"

namespace traintrack {

  inline constexpr char const* kToolVersion = "0.1.0";

  using Json = nlohmann::ordered_json;

  struct AnalysisConfig {
    std::size_t              max_iter     = 40;
    double                   tol          = 1e-9;
    std::size_t              word_budget  = kDefaultWordBudget;
    std::size_t              leaf_depth   = 12;
    std::size_t              max_word_len = 5;
    std::uint64_t            seed         = 0;
    double                   zero_tol     = 1e-6;
    std::size_t              leaf_radius  = kDefaultLeafRadius;
    std::size_t              probe_iter   = 20;
    std::size_t              samples      = 200;
    std::size_t              convergence_depth = 30;
    std::vector<double>      alt_metric;  // empty: unit lengths
    std::vector<std::string> words;       // empty: sweep
    std::size_t              threads = 1;
  };

  struct Stages {
    bool validation   = true;
    bool train_track  = true;
    bool spectral     = true;
    bool words        = true;
    bool lamination   = true;
    bool cancellation = true;
    bool convergence  = false;

    static Stages all() { return {}; }
    static Stages none() { return {false, false, false, false, false, false, false}; }
  };

  struct PipelineResult {
    Json                     report;
    std::vector<std::string> warnings;
    bool                     consistency_failure = false;
  };

  inline Json to_json(AnalysisConfig const& c) {
    Json j;
    j["max_iter"]          = c.max_iter;
    j["tol"]               = c.tol;
    j["word_budget"]       = c.word_budget;
    j["leaf_depth"]        = c.leaf_depth;
    j["max_word_len"]      = c.max_word_len;
    j["seed"]              = c.seed;
    j["zero_tol"]          = c.zero_tol;
    j["leaf_radius"]       = c.leaf_radius;
    j["probe_iter"]        = c.probe_iter;
    j["samples"]           = c.samples;
    j["convergence_depth"] = c.convergence_depth;
    j["alt_metric"]        = c.alt_metric;
    j["words"]             = c.words;
    j["threads"]           = c.threads;
    return j;
  }

  inline Json to_json(Growth const& g) {
    Json j;
    j["kind"] = g.exponential() ? "Exponential" : "Polynomial";
    if (g.exponential()) {
      j["rate"] = g.rate;
    } else {
      j["degree"] = g.degree;
    }
    j["statistic"]      = g.statistic;
    j["terms"]          = g.terms;
    j["truncated"]      = g.truncated;
    j["low_confidence"] = g.low_confidence;
    return j;
  }

  // All cyclic words of length 1..max_len, one per rotation class, in order
  // of length and then canonical spelling.
  inline std::vector<CyclicWord> cyclic_word_sweep(std::size_t rank,
                                                   std::size_t max_len) {
    std::vector<CyclicWord> out;
    std::size_t const       dirs = 2 * rank;
    for (std::size_t len = 1; len <= max_len; ++len) {
      Letters                               w;
      std::function<void()>                 rec = [&] {
        if (w.size() == len) {
          if (!detail::is_cyclically_reduced(w) || detail::least_rotation(w) != 0) {
            return;
          }
          CyclicWord c(w);
          if (c.canonical() == w) {
            out.push_back(std::move(c));
          }
          return;
        }
        for (std::uint32_t code = 0; code < dirs; ++code) {
          Letter const x = Letter::from_code(code);
          if (!w.empty() && w.back() == x.inverse()) {
            continue;
          }
          w.push_back(x);
          rec();
          w.pop_back();
        }
      };
      rec();
    }
    return out;
  }

  namespace detail {
    inline std::string utc_timestamp() {
      std::time_t const t = std::time(nullptr);
      std::tm           tm{};
      gmtime_r(&t, &tm);
      char buf[32];
      std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
      return buf;
    }

    inline Json skipped(std::string const& reason) {
      Json j;
      j["status"] = "skipped: " + reason;
      return j;
    }

    template <class T, class F>
    std::vector<T> fan_out(std::size_t n, std::size_t threads, F&& f) {
      std::vector<T> out(n);
      threads = std::max<std::size_t>(1, std::min(threads, n));
      if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) {
          out[i] = f(i);
        }
        return out;
      }
      std::vector<std::thread>        pool;
      std::vector<std::exception_ptr> errors(threads);
      for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
          try {
            for (std::size_t i = t; i < n; i += threads) {
              out[i] = f(i);
            }
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      }
      for (auto& th : pool) {
        th.join();
      }
      for (auto& e : errors) {
        if (e) {
          std::rethrow_exception(e);
        }
      }
      return out;
    }

    inline Json turn_json(Graph const& g, Turn t) {
      return Json::array({g.format(t.first), g.format(t.second)});
    }

    struct WordRow {
      Json   json;
      bool   has_limit = false;
      double limit     = 0.0;
      bool   exponential_growth = false;
      std::optional<bool> probe_grows;
      std::string         error;
      bool                consistency = false;
    };
  }  // namespace detail

  inline PipelineResult run_pipeline(AnalysisConfig const& cfg,
                                     ParsedInput const&    in,
                                     std::string const&    source_text,
                                     Stages const&         stages = Stages::all()) {
    PipelineResult res;
    Json&          r  = res.report;
    GraphMap const& f = *in.map;
    Graph const&    g = f.domain();
    auto warn = [&](std::string const& w) { res.warnings.push_back(w); };

    r["tool"]         = {{"name", "traintrack"}, {"version", kToolVersion}};
    r["generated_at"] = detail::utc_timestamp();
    r["config"]       = to_json(cfg);

    Json input;
    input["kind"] = in.graph_input ? "graph-map" : "automorphism";
    input["rank"] = in.rank;
    input["text"] = source_text;
    Json imgs     = Json::object();
    for (std::size_t p = 0; p < g.edge_pair_count(); ++p) {
      imgs[g.edge_name(p)] = g.format(f.image(p));
    }
    input["images"]  = imgs;
    input["notices"] = in.notices;
    for (auto const& n : in.notices) {
      warn(n);
    }
    r["input"] = input;

    std::optional<std::string> blocked;  // reason later stages are skipped

    if (stages.validation) {
      if (in.automorphism) {
        auto const v = validate(*in.automorphism);
        Json       j;
        j["determinant"]          = v.determinant;
        j["determinant_ok"]       = v.determinant_ok;
        j["inverse_supplied"]     = v.inverse_supplied;
        j["inverse_ok"]           = v.inverse_ok;
        j["assumed_automorphism"] = v.assumed_automorphism;
        j["valid"]                = v.valid;
        j["notes"]                = v.notes;
        r["validation"]           = j;
        for (auto const& n : v.notes) {
          warn(n);
        }
        if (!v.valid) {
          blocked = "not an automorphism";
        }
      } else {
        r["validation"] = detail::skipped("graph-map input has no generator images");
      }
    }

    std::optional<TrainTrackVerdict> verdict;
    if (stages.train_track) {
      if (blocked) {
        r["train_track"] = detail::skipped(*blocked);
      } else {
        verdict = is_train_track(f);
        Json j;
        j["verdict"] = verdict->train_track ? "TrainTrack" : "Fails";
        Json turns   = Json::array();
        for (auto const& t : taken_turns(f)) {
          turns.push_back(detail::turn_json(g, t));
        }
        j["taken_turns"]  = turns;
        j["closure_size"] = verdict->closure_size;
        if (verdict->witness) {
          auto const& w = *verdict->witness;
          Json        wj;
          wj["edge"]     = g.format(w.edge);
          wj["position"] = w.position;
          Json orbit     = Json::array();
          for (auto const& t : w.orbit) {
            orbit.push_back(detail::turn_json(g, t));
          }
          wj["orbit"]   = orbit;
          wj["iterate"] = w.iterate;
          j["witness"]  = wj;
        }
        r["train_track"] = j;
      }
    }

    auto const matrix      = transition_matrix(f);
    bool const irreducible = is_irreducible(matrix);
    std::optional<PFData> pf;
    if (stages.spectral) {
      Json m;
      m["rows"]        = matrix.rows();
      m["irreducible"] = irreducible;
      if (auto sub = find_invariant_subgraph(matrix)) {
        Json s = Json::array();
        for (auto e : *sub) {
          s.push_back(g.edge_name(e));
        }
        m["invariant_subgraph"] = s;
      }
      r["transition_matrix"] = m;
      if (blocked) {
        r["spectral"] = detail::skipped(*blocked);
      } else if (!irreducible) {
        r["spectral"] = detail::skipped("transition matrix is reducible");
      } else {
        try {
          pf = perron_frobenius(matrix);
          Json s;
          s["lambda"] = pf->lambda;
          s["nu"]     = pf->nu;
          s["k"]      = pf->k;
          Json blocks = Json::array();
          for (auto const& b : pf->blocks) {
            Json bj = Json::array();
            for (auto e : b) {
              bj.push_back(g.edge_name(e));
            }
            blocks.push_back(bj);
          }
          s["blocks"]                 = blocks;
          s["primitive_first_return"] = pf->primitive_first_return;
          s["residual"]               = pf->residual;
          r["spectral"]               = s;
          Json em;
          em["lengths"] = pf->nu;
          if (verdict && verdict->train_track) {
            em["homothety_defect"] = homothety_defect(f, *pf);
          }
          r["eigenmetric"] = em;
        } catch (Error const& e) {
          r["spectral"] = detail::skipped(e.what());
        }
      }
    }

    // Limit stages need an expanding irreducible train track.
    std::optional<TrainTrackData> tt;
    std::optional<std::string>    limit_block = blocked;
    if (!limit_block) {
      if (!stages.train_track && !verdict) {
        verdict = is_train_track(f);
      }
      if (!verdict->train_track) {
        limit_block = "not a train track";
      } else if (!irreducible) {
        limit_block = "transition matrix is reducible";
      } else {
        try {
          tt.emplace(make_train_track_data(f));
          if (!tt->expanding()) {
            limit_block = "not expanding";
          }
        } catch (Error const& e) {
          limit_block = e.what();
        }
      }
    }

    std::optional<LeafCorpus> corpus;
    if ((stages.lamination || stages.words || stages.convergence) && !limit_block) {
      try {
        corpus.emplace(*tt, LeafCorpusOptions{cfg.leaf_depth, cfg.leaf_radius, 20,
                                              cfg.word_budget});
      } catch (ConsistencyError const& e) {
        res.consistency_failure = true;
        warn(std::string("lamination: ") + e.what());
      } catch (Error const& e) {
        warn(std::string("lamination: ") + e.what());
      }
    }

    if (stages.lamination) {
      if (limit_block) {
        r["lamination"] = detail::skipped(*limit_block);
      } else if (!corpus) {
        r["lamination"] = detail::skipped("leaf corpus could not be built");
      } else {
        Json l;
        Json leaves = Json::array();
        bool aperiodic = true;
        for (std::size_t b = 0; b < corpus->block_count(); ++b) {
          auto const& leaf = corpus->leaf(b);
          Json        lj;
          lj["block"] = b;
          lj["seed"]  = {{"edge", g.edge_name(leaf.seed.edge)},
                        {"power_k", leaf.seed.power_k},
                        {"anchor", leaf.seed.anchor},
                        {"orientation", leaf.seed.positive ? "+" : "-"}};
          lj["depth"]       = leaf.depth;
          lj["full_length"] = leaf.full_length;
          lj["window"]      = leaf.window.size();
          lj["truncated"]   = leaf.truncated;
          lj["excerpt"]     = format_leaf(g, leaf, 30);
          bool const periodic = is_proper_power(leaf.window);
          aperiodic           = aperiodic && !periodic;
          lj["proper_power"]  = periodic;
          leaves.push_back(lj);
        }
        l["leaves"] = leaves;
        try {
          l["leaf_orbits"] = count_leaf_orbits(*tt);
        } catch (Error const& e) {
          l["leaf_orbits"] = std::string("skipped: ") + e.what();
        }
        l["block_permutation_ok"] = block_permutation_check(*tt, *corpus);
        l["aperiodic"]            = aperiodic;
        r["lamination"]           = l;
      }
    }

    std::vector<detail::WordRow> rows;
    std::vector<CyclicWord>      words;
    if (stages.words || stages.convergence) {
      if (blocked) {
        r["words"] = detail::skipped(*blocked);
      } else {
        try {
          if (cfg.words.empty()) {
            if (!g.is_rose()) {
              throw InputError("word sweeps need a rose; pass loops with --words");
            }
            words = cyclic_word_sweep(in.rank, cfg.max_word_len);
          } else {
            for (auto const& w : cfg.words) {
              if (g.is_rose()) {
                words.push_back(to_cyclic(parse_word(w, in.rank)));
              } else {
                std::vector<std::string> toks;
                std::string              cur;
                for (char c : w + " ") {
                  if (c == ' ') {
                    if (!cur.empty()) toks.push_back(cur);
                    cur.clear();
                  } else {
                    cur.push_back(c);
                  }
                }
                Letters path;
                for (auto t : toks) {
                  bool inv = t[0] == '-';
                  if (t[0] == '-' || t[0] == '+') t.erase(0, 1);
                  auto const& nm = g.names();
                  auto it = std::find(nm.begin(), nm.end(), t);
                  if (it == nm.end()) {
                    throw InputError("unknown edge '" + t + "' in loop " + w);
                  }
                  path.push_back(OrientedEdge::generator(
                      static_cast<std::uint32_t>(it - nm.begin()), inv));
                }
                words.push_back(make_loop(g, std::move(path)));
              }
            }
          }
        } catch (Error const& e) {
          r["words"] = detail::skipped(e.what());
          words.clear();
        }
      }
    }

    if (stages.words && !words.empty()) {
      LimitOptions lopt;
      lopt.M                = cfg.max_iter;
      lopt.tol              = cfg.tol;
      lopt.zero_tol         = cfg.zero_tol;
      lopt.classify.M       = cfg.max_iter;
      lopt.classify.budget  = cfg.word_budget;
      ProbeOptions popt{cfg.probe_iter, cfg.word_budget};
      rows = detail::fan_out<detail::WordRow>(words.size(), cfg.threads, [&](std::size_t i) {
        detail::WordRow row;
        auto const&     x = words[i];
        Json            j;
        j["word"]   = g.format(x.canonical());
        Growth const gr = classify_growth(f, x, lopt.classify);
        row.exponential_growth = gr.exponential();
        j["growth"]            = to_json(gr);
        if (limit_block) {
          j["limit"] = "skipped: " + *limit_block;
        } else {
          try {
            auto const lr = limit_length(*tt, x, lopt);
            Json       lj;
            lj["value"]      = lr.limit;
            lj["converged"]  = lr.converged;
            lj["cauchy_gap"] = lr.cauchy_gap;
            lj["stride"]     = lr.stride;
            lj["per_block"]  = lr.per_block;
            lj["classification"] = to_json(lr.classification);
            j["limit"]       = lj;
            row.has_limit    = true;
            row.limit        = lr.limit;
          } catch (ConsistencyError const& e) {
            row.consistency = true;
            row.error       = e.what();
            j["limit"]      = std::string("failed: ") + e.what();
          } catch (Error const& e) {
            row.error  = e.what();
            j["limit"] = std::string("failed: ") + e.what();
          }
          if (corpus) {
            auto const p = weak_limit_probe(f, x, *corpus, popt);
            Json       pj;
            pj["grows"]     = p.grows;
            pj["last"]      = p.lengths.back();
            pj["terms"]     = p.lengths.size() - 1;
            pj["truncated"] = p.truncated;
            j["probe"]      = pj;
            row.probe_grows = p.grows;
          }
        }
        row.json = std::move(j);
        return row;
      });
      Json wj;
      wj["source"] = cfg.words.empty() ? "sweep" : "list";
      wj["count"]  = rows.size();
      if (limit_block) {
        wj["limit_status"] = "skipped: " + *limit_block;
      }
      Json list = Json::array();
      for (auto& row : rows) {
        list.push_back(row.json);
        if (row.consistency) {
          res.consistency_failure = true;
          warn(row.error);
        }
      }
      wj["rows"] = list;
      r["words"] = wj;

      if (limit_block) {
        r["loxodromic_check"] = detail::skipped(*limit_block);
        r["homothety"]        = detail::skipped(*limit_block);
      } else {
        Json        lx;
        std::size_t checked = 0;
        Json        disc    = Json::array();
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (!rows[i].has_limit || !rows[i].probe_grows) {
            continue;
          }
          ++checked;
          bool const a = rows[i].limit > cfg.zero_tol;
          bool const b = rows[i].exponential_growth;
          bool const c = *rows[i].probe_grows;
          if (a != b || b != c) {
            disc.push_back(g.format(words[i].canonical()));
          }
        }
        lx["words"]         = checked;
        lx["discrepancies"] = disc.size();
        lx["list"]          = disc;
        r["loxodromic_check"] = lx;
        if (!disc.empty()) {
          warn("loxodromic cross-check has " + std::to_string(disc.size())
               + " discrepancies");
        }
        std::vector<CyclicWord> expo;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (rows[i].has_limit && rows[i].limit > cfg.zero_tol && words[i].size() <= 4) {
            expo.push_back(words[i]);
          }
        }
        try {
          auto const h = homothety_check(*tt, expo, lopt);
          Json       hj;
          hj["words"]              = h.words_checked;
          hj["max_relative_error"] = h.max_relative_error;
          if (h.words_checked) {
            hj["worst"] = g.format(h.worst.canonical());
          }
          r["homothety"] = hj;
        } catch (Error const& e) {
          r["homothety"] = detail::skipped(e.what());
        }
      }
    }

    if (stages.cancellation) {
      if (blocked) {
        r["cancellation"] = detail::skipped(*blocked);
      } else {
        Metric const d = pf ? Metric(pf->nu) : Metric::unit(g.edge_pair_count());
        std::optional<double> lambda;
        if (pf) {
          lambda = pf->lambda;
        }
        auto b = cancellation_bound(f, d, lambda);
        SampleOptions so;
        so.count = cfg.samples;
        so.seed  = cfg.seed;
        auto const samples = sample_paths(f, so);
        b.measured_max     = measure_cancellation(f, d, samples);
        Json c;
        c["metric"] = pf ? "eigenmetric" : "unit";
        c["lip"]    = b.lip;
        c["vol"]    = b.vol;
        c["bound"]  = b.bound;
        if (b.c_prime) {
          c["c_prime"] = *b.c_prime;
        }
        c["samples"]      = samples.size();
        c["measured_max"] = b.measured_max;
        if (verdict && verdict->train_track) {
          auto const legal = legal_sample_paths(f, so);
          c["legal_samples"]      = legal.size();
          c["legal_measured_max"] = measure_cancellation(f, d, legal);
        }
        c["within_bound"] = b.measured_max <= b.bound;
        r["cancellation"] = c;
        if (b.measured_max > b.bound) {
          warn("measured cancellation exceeds Lip * vol");
        }
      }
    }

    if (stages.convergence) {
      if (limit_block) {
        r["convergence"] = detail::skipped(*limit_block);
      } else if (!corpus) {
        r["convergence"] = detail::skipped("leaf corpus could not be built");
      } else {
        try {
          Metric const alt = cfg.alt_metric.empty()
                                 ? Metric::unit(g.edge_pair_count())
                                 : Metric(cfg.alt_metric);
          ConvergenceOptions co;
          co.depth      = cfg.convergence_depth;
          auto const cc = convergence_constants(*tt, *corpus, alt, co);
          Json       cj;
          cj["alt_metric"] = alt.lengths();
          cj["c"]          = cc.c;
          cj["max_spread"] = cc.max_spread;
          Json segs        = Json::array();
          for (std::size_t b = 0; b < cc.segments.size(); ++b) {
            segs.push_back(cc.segments[b].size());
          }
          cj["segments_per_block"] = segs;
          std::vector<CyclicWord> loops;
          LimitOptions            lopt;
          lopt.M = cfg.max_iter;
          for (auto const& x : words) {
            if (loops.size() >= 12) {
              break;
            }
            if (longest_leaf_segment(x, *corpus).edges >= x.size()) {
              continue;
            }
            if (limit_length(*tt, x, lopt).limit > cfg.zero_tol) {
              loops.push_back(x);
            }
          }
          auto const u = uniform_constant_check(*tt, cc, alt, loops, cfg.max_iter);
          cj["uniform_loops"]     = u.rows.size();
          cj["uniform_max_error"] = u.max_error;
          r["convergence"]        = cj;
        } catch (ConsistencyError const& e) {
          res.consistency_failure = true;
          r["convergence"]        = std::string("failed: ") + e.what();
        } catch (Error const& e) {
          r["convergence"] = detail::skipped(e.what());
        }
      }
    }

    r["warnings"] = res.warnings;
    return res;
  }

}  // namespace traintrack
