// Command-line front end: parse an input file, run the requested stages and
// print a summary (and optionally the JSON report).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "traintrack/pipeline.hpp"

namespace tt = traintrack;

namespace {

  enum Exit { kOk = 0, kIo = 1, kSyntax = 2, kConsistency = 3 };

  std::string num(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
  }

  std::string num_list(tt::Json const& a) {
    std::string s = "(";
    for (std::size_t i = 0; i < a.size(); ++i) {
      s += (i ? ", " : "") + num(a[i].get<double>());
    }
    return s + ")";
  }

  bool is_skip(tt::Json const& j) {
    return j.is_object() && j.contains("status");
  }

  std::string growth_text(tt::Json const& g) {
    if (g["kind"] == "Exponential") {
      return "Exponential(" + num(g["rate"].get<double>()) + ")";
    }
    return "Polynomial(" + std::to_string(g["degree"].get<std::size_t>()) + ")";
  }

  void print_human(tt::Json const& r, std::ostream& os) {
    auto section = [&](char const* key, auto&& body) {
      if (!r.contains(key)) {
        return;
      }
      auto const& j = r[key];
      if (is_skip(j)) {
        os << key << ": " << j["status"].get<std::string>() << "\n";
        return;
      }
      if (j.is_string()) {
        os << key << ": " << j.get<std::string>() << "\n";
        return;
      }
      body(j);
    };

    os << "input: " << r["input"]["kind"].get<std::string>() << ", rank "
       << r["input"]["rank"] << "\n";
    section("validation", [&](auto const& j) {
      os << "validation: " << (j["valid"].template get<bool>() ? "valid" : "rejected")
         << " (det " << j["determinant"] << ")";
      if (j["assumed_automorphism"].template get<bool>()) {
        os << ", assumed automorphism";
      }
      os << "\n";
    });
    section("train_track", [&](auto const& j) {
      os << "train track: " << j["verdict"].template get<std::string>();
      if (j.contains("witness")) {
        auto const& w = j["witness"];
        os << " (edge " << w["edge"].template get<std::string>() << ", iterate "
           << w["iterate"] << ", turn orbit";
        for (auto const& t : w["orbit"]) {
          os << " {" << t[0].template get<std::string>() << ","
             << t[1].template get<std::string>() << "}";
        }
        os << ")";
      }
      os << "\n";
    });
    section("transition_matrix", [&](auto const& j) {
      os << "transition matrix:";
      for (auto const& row : j["rows"]) {
        os << " [";
        for (std::size_t i = 0; i < row.size(); ++i) {
          os << (i ? " " : "") << row[i];
        }
        os << "]";
      }
      os << (j["irreducible"].template get<bool>() ? " irreducible" : " reducible")
         << "\n";
    });
    section("spectral", [&](auto const& j) {
      os << "lambda: " << num(j["lambda"].template get<double>())
         << "  nu: " << num_list(j["nu"]) << "  k: " << j["k"]
         << "  residual: " << num(j["residual"].template get<double>()) << "\n";
    });
    section("lamination", [&](auto const& j) {
      for (auto const& l : j["leaves"]) {
        os << "leaf block " << l["block"] << ": seed "
           << l["seed"]["edge"].template get<std::string>() << " k="
           << l["seed"]["power_k"] << " anchor=" << l["seed"]["anchor"] << "  "
           << l["excerpt"].template get<std::string>() << "\n";
      }
      os << "leaf orbits: " << j["leaf_orbits"]
         << "  block permutation ok: " << j["block_permutation_ok"]
         << "  aperiodic: " << j["aperiodic"] << "\n";
    });
    section("words", [&](auto const& j) {
      if (j.contains("limit_status")) {
        os << "limits: " << j["limit_status"].template get<std::string>() << "\n";
      }
      for (auto const& w : j["rows"]) {
        os << "  " << w["word"].template get<std::string>() << ": "
           << growth_text(w["growth"]);
        if (w["limit"].is_object()) {
          os << "  limit " << num(w["limit"]["value"].template get<double>())
             << "  per-block " << num_list(w["limit"]["per_block"]);
        } else if (w["limit"].is_string() && !j.contains("limit_status")) {
          os << "  limit " << w["limit"].template get<std::string>();
        }
        if (w.contains("probe")) {
          os << "  probe " << (w["probe"]["grows"].template get<bool>() ? "grows" : "bounded");
        }
        os << "\n";
      }
    });
    section("loxodromic_check", [&](auto const& j) {
      os << "loxodromic cross-check: " << j["words"] << " words, "
         << j["discrepancies"] << " discrepancies\n";
    });
    section("homothety", [&](auto const& j) {
      os << "homothety: max relative error "
         << num(j["max_relative_error"].template get<double>()) << " over "
         << j["words"] << " words\n";
    });
    section("cancellation", [&](auto const& j) {
      os << "cancellation (" << j["metric"].template get<std::string>()
         << "): lip " << num(j["lip"].template get<double>()) << "  vol "
         << num(j["vol"].template get<double>()) << "  bound "
         << num(j["bound"].template get<double>());
      if (j.contains("c_prime")) {
        os << "  C' " << num(j["c_prime"].template get<double>());
      }
      os << "  measured " << num(j["measured_max"].template get<double>());
      if (j.contains("legal_measured_max")) {
        os << "  legal " << num(j["legal_measured_max"].template get<double>());
      }
      os << "\n";
    });
    section("convergence", [&](auto const& j) {
      os << "convergence constants: " << num_list(j["c"]) << "  spread "
         << num(j["max_spread"].template get<double>()) << "  uniform check "
         << j["uniform_loops"] << " loops, max error "
         << num(j["uniform_max_error"].template get<double>()) << "\n";
    });
    for (auto const& w : r["warnings"]) {
      os << "warning: " << w.get<std::string>() << "\n";
    }
  }

  std::vector<std::string> split_list(std::string const& s) {
    std::vector<std::string> out;
    std::stringstream        ss(s);
    std::string              item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) {
        out.push_back(item);
      }
    }
    return out;
  }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Train-track analysis of free group automorphisms"};
  app.require_subcommand(1);

  tt::AnalysisConfig cfg;
  std::string        input_path, json_path, words_list, growth_word, alt_metric;
  bool               convergence = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("input", input_path, "Automorphism or graph-map file")->required();
    sub->add_option("--max-iter", cfg.max_iter, "Strided iterations for limits");
    sub->add_option("--tol", cfg.tol, "Convergence tolerance");
    sub->add_option("--json", json_path, "Write the JSON report here ('-' for stdout)");
    sub->add_option("--words", words_list, "Comma separated words (default: sweep)");
    sub->add_option("--sweep-len", cfg.max_word_len, "Longest word in the sweep");
    sub->add_option("--depth", cfg.leaf_depth, "Leaf expansion depth");
    sub->add_option("--seed", cfg.seed, "Seed for cancellation samples");
    sub->add_option("--budget", cfg.word_budget, "Word length budget");
    sub->add_option("--threads", cfg.threads, "Worker threads for word sweeps");
  };

  struct Cmd {
    char const* name;
    char const* help;
    tt::Stages  stages;
  };
  tt::Stages const none = tt::Stages::none();
  auto with = [&](auto... flags) {
    tt::Stages s = none;
    s.validation = true;
    (flags(s), ...);
    return s;
  };
  auto tt_ = [](tt::Stages& s) { s.train_track = true; };
  auto sp  = [](tt::Stages& s) { s.spectral = true; };
  auto wd  = [](tt::Stages& s) { s.words = true; };
  auto lm  = [](tt::Stages& s) { s.lamination = true; };
  auto cn  = [](tt::Stages& s) { s.cancellation = true; };
  auto cv  = [](tt::Stages& s) { s.convergence = true; };

  std::vector<Cmd> cmds = {
      {"verify-tt", "Train-track check with witness", with(tt_)},
      {"spectral", "Transition matrix and Perron-Frobenius data", with(tt_, sp)},
      {"growth", "Growth of a single word", with(tt_, sp, wd)},
      {"lengths", "Limit lengths for words or a sweep", with(tt_, sp, wd)},
      {"leaf", "Stable lamination leaves", with(tt_, sp, lm)},
      {"cancellation", "Bounded cancellation bound and measurement", with(tt_, sp, cn)},
      {"convergence", "Convergence constants", with(tt_, sp, cv)},
      {"analyze", "Run every stage", tt::Stages::all()},
  };
  std::vector<CLI::App*> subs;
  for (auto& c : cmds) {
    auto* sub = app.add_subcommand(c.name, c.help);
    if (std::string(c.name) == "growth") {
      sub->add_option("word", growth_word, "Word to classify")->required();
    }
    common(sub);
    if (std::string(c.name) == "analyze") {
      sub->add_flag("--convergence", convergence, "Also compute convergence constants");
    }
    if (std::string(c.name) == "analyze" || std::string(c.name) == "convergence") {
      sub->add_option("--alt-metric", alt_metric, "Comma separated edge lengths");
    }
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  tt::Stages stages;
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    if (subs[i]->parsed()) {
      stages = cmds[i].stages;
    }
  }
  if (convergence) {
    stages.convergence = true;
  }
  cfg.words = split_list(words_list);
  if (!growth_word.empty()) {
    cfg.words = {growth_word};
  }
  try {
    for (auto const& x : split_list(alt_metric)) {
      cfg.alt_metric.push_back(std::stod(x));
    }
  } catch (std::exception const&) {
    std::cerr << "error: --alt-metric expects comma separated numbers\n";
    return kSyntax;
  }

  std::ifstream file(input_path, std::ios::binary);
  if (!file) {
    std::cerr << "error: cannot read " << input_path << "\n";
    return kIo;
  }
  std::stringstream buf;
  buf << file.rdbuf();
  std::string const text = buf.str();

  tt::ParsedInput in;
  try {
    in = tt::parse_input(text);
  } catch (tt::Error const& e) {
    std::cerr << input_path << ": " << e.what() << "\n";
    return kSyntax;
  }

  tt::PipelineResult res;
  try {
    res = tt::run_pipeline(cfg, in, text, stages);
  } catch (tt::ConsistencyError const& e) {
    std::cerr << "internal consistency error: " << e.what() << "\n";
    return kConsistency;
  } catch (tt::Error const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSyntax;
  }

  if (json_path == "-") {
    std::cout << res.report.dump(2) << "\n";
  } else {
    print_human(res.report, std::cout);
    if (!json_path.empty()) {
      std::ofstream out(json_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write " << json_path << "\n";
        return kIo;
      }
      out << res.report.dump(2) << "\n";
    }
  }
  return res.consistency_failure ? kConsistency : kOk;
}
