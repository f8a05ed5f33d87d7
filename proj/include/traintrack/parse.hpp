#pragma once

// Text input: an automorphism on generators, or a graph map.
//
//   rank: 2
//   a -> a b
//   b -> a
//   inverse:
//   a -> b
//   b -> B a
//
//   graph:
//   vertices: 2
//   x: 0 1
//   y: 1 0
//   map:
//   vertex 0 -> 0
//   x -> x y -x

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "automorphism.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "graph_map.hpp"
#include "word.hpp"

namespace traintrack {

  class ParseError : public InputError {
   public:
    ParseError(std::size_t line, std::size_t column, std::string const& msg)
        : InputError("line " + std::to_string(line) + ", column "
                     + std::to_string(column) + ": " + msg),
          line_(line),
          column_(column) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

   private:
    std::size_t line_, column_;
  };

  struct ParsedInput {
    bool                        graph_input = false;
    std::optional<Automorphism> automorphism;
    std::optional<GraphMap>     map;
    std::size_t                 rank = 0;
    std::vector<std::string>    notices;
  };

  namespace detail {
    struct Line {
      std::size_t      number;
      std::string_view text;    // comment stripped, trimmed
      std::size_t      column;  // 1-based column of text[0]
    };

    inline std::vector<Line> split_lines(std::string_view text) {
      std::vector<Line> out;
      std::size_t       number = 0, pos = 0;
      while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
          end = text.size();
        }
        ++number;
        std::string_view l = text.substr(pos, end - pos);
        if (auto h = l.find('#'); h != std::string_view::npos) {
          l = l.substr(0, h);
        }
        std::size_t b = 0;
        while (b < l.size() && std::isspace(static_cast<unsigned char>(l[b]))) {
          ++b;
        }
        std::size_t e = l.size();
        while (e > b && std::isspace(static_cast<unsigned char>(l[e - 1]))) {
          --e;
        }
        if (e > b) {
          out.push_back({number, l.substr(b, e - b), b + 1});
        }
        pos = end + 1;
      }
      return out;
    }

    inline std::size_t parse_count(Line const& l, std::size_t at, std::string_view s) {
      std::size_t i = 0;
      while (i < s.size() && s[i] == ' ') {
        ++i;
      }
      if (i == s.size()) {
        throw ParseError(l.number, l.column + at + i, "expected a number");
      }
      std::size_t v = 0;
      for (std::size_t j = i; j < s.size(); ++j) {
        char const c = s[j];
        if (c == ' ' || c == '\t') {
          for (std::size_t t = j; t < s.size(); ++t) {
            if (s[t] != ' ' && s[t] != '\t') {
              throw ParseError(l.number, l.column + at + t, "unexpected text");
            }
          }
          break;
        }
        if (c < '0' || c > '9') {
          throw ParseError(l.number, l.column + at + j, "expected a number");
        }
        v = v * 10 + static_cast<std::size_t>(c - '0');
        if (v > 1'000'000) {
          throw ParseError(l.number, l.column + at + i, "number too large");
        }
      }
      return v;
    }

    // Splits "lhs -> rhs"; returns the offset of rhs within the line.
    inline std::optional<std::pair<std::string_view, std::size_t>>
    arrow_rhs(std::string_view s) {
      auto const a = s.find("->");
      if (a == std::string_view::npos) {
        return std::nullopt;
      }
      return std::make_pair(s.substr(a + 2), a + 2);
    }

    inline std::string_view trim(std::string_view s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
      }
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
      }
      return s;
    }

    inline Letters parse_image_letters(Line const& l, std::size_t at,
                                       std::string_view s, std::size_t rank) {
      Letters     out;
      std::size_t non_space = 0;
      for (char c : s) {
        non_space += c != ' ' && c != '\t';
      }
      for (std::size_t i = 0; i < s.size(); ++i) {
        char const c = s[i];
        if (c == ' ' || c == '\t') {
          continue;
        }
        if (c == '1' && non_space == 1) {
          return out;
        }
        bool const lower = c >= 'a' && c <= 'z';
        bool const upper = c >= 'A' && c <= 'Z';
        if (!lower && !upper) {
          throw ParseError(l.number, l.column + at + i,
                           std::string("invalid letter '") + c + "'");
        }
        auto const idx = static_cast<std::uint32_t>(c - (lower ? 'a' : 'A'));
        if (idx >= rank) {
          throw ParseError(l.number, l.column + at + i,
                           std::string("letter '") + c + "' exceeds rank "
                               + std::to_string(rank));
        }
        out.push_back(Letter::generator(idx, upper));
      }
      return out;
    }

    struct RawImage {
      Letters     letters;
      std::size_t line;
      std::size_t column;
    };

    inline Word checked_image(RawImage const&           raw,
                              std::string const&        what,
                              std::vector<std::string>& notices) {
      Word w(raw.letters);
      if (w.empty()) {
        throw ParseError(raw.line, raw.column, what + " reduces to the identity");
      }
      if (w.size() != raw.letters.size()) {
        notices.push_back("line " + std::to_string(raw.line) + ": " + what
                          + " was not reduced; tightened to " + to_string(w));
      }
      return w;
    }
  }  // namespace detail

  inline ParsedInput parse_input(std::string_view text) {
    using detail::Line;
    enum class Section { Images, Inverse, Graph, Map };
    Section                                  section = Section::Images;
    std::optional<std::size_t>               rank;
    std::size_t                              rank_line = 0;
    std::map<std::size_t, detail::RawImage>  images, inverse;
    std::optional<std::size_t>               vertices;
    std::vector<Graph::Endpoints>            edges;
    std::vector<std::string>                 names;
    std::map<std::string, std::size_t>       name_index;
    std::map<std::size_t, std::pair<std::vector<std::pair<std::string, bool>>, Line>> edge_images;
    std::map<std::uint32_t, std::uint32_t>   vertex_map;
    bool                                     graph_mode = false;
    ParsedInput                              out;

    for (auto const& l : detail::split_lines(text)) {
      auto const s = l.text;
      if (s == "inverse:") {
        section = Section::Inverse;
        continue;
      }
      if (s == "graph:") {
        section    = Section::Graph;
        graph_mode = true;
        continue;
      }
      if (s == "map:") {
        if (!graph_mode) {
          throw ParseError(l.number, l.column, "'map:' section without 'graph:'");
        }
        section = Section::Map;
        continue;
      }
      if (s.starts_with("rank:")) {
        if (rank) {
          throw ParseError(l.number, l.column, "duplicate rank line");
        }
        rank      = detail::parse_count(l, 5, s.substr(5));
        rank_line = l.number;
        if (*rank == 0 || *rank > 26) {
          throw ParseError(l.number, l.column + 5, "rank must be in [1, 26]");
        }
        continue;
      }
      switch (section) {
        case Section::Images:
        case Section::Inverse: {
          auto rhs = detail::arrow_rhs(s);
          if (!rhs) {
            throw ParseError(l.number, l.column, "expected 'g -> word'");
          }
          if (!rank) {
            throw ParseError(l.number, l.column, "image before 'rank:' line");
          }
          auto const lhs = detail::trim(s.substr(0, rhs->second - 2));
          if (lhs.size() != 1 || lhs[0] < 'a' || lhs[0] > 'z') {
            throw ParseError(l.number, l.column,
                             "left side must be a single lowercase generator");
          }
          auto const g = static_cast<std::size_t>(lhs[0] - 'a');
          if (g >= *rank) {
            throw ParseError(l.number, l.column, "generator beyond rank");
          }
          auto& target = section == Section::Images ? images : inverse;
          if (target.count(g)) {
            throw ParseError(l.number, l.column,
                             std::string("duplicate image for '") + lhs[0] + "'");
          }
          target[g] = {detail::parse_image_letters(l, rhs->second, rhs->first, *rank),
                       l.number, l.column + rhs->second};
          break;
        }
        case Section::Graph: {
          if (s.starts_with("vertices:")) {
            vertices = detail::parse_count(l, 9, s.substr(9));
            break;
          }
          auto const colon = s.find(':');
          if (colon == std::string_view::npos) {
            throw ParseError(l.number, l.column, "expected 'NAME: U V'");
          }
          std::string name(detail::trim(s.substr(0, colon)));
          if (name.empty() || name[0] == '-' || name[0] == '+'
              || name.find(' ') != std::string::npos) {
            throw ParseError(l.number, l.column, "invalid edge name");
          }
          if (name_index.count(name)) {
            throw ParseError(l.number, l.column, "duplicate edge '" + name + "'");
          }
          auto const rest = detail::trim(s.substr(colon + 1));
          auto const sp   = rest.find(' ');
          if (sp == std::string_view::npos) {
            throw ParseError(l.number, l.column + colon + 1,
                             "expected two endpoints");
          }
          auto const u = detail::parse_count(l, colon + 1, rest.substr(0, sp));
          auto const v = detail::parse_count(l, colon + 1 + sp, rest.substr(sp));
          name_index[name] = edges.size();
          names.push_back(name);
          edges.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)});
          break;
        }
        case Section::Map: {
          auto rhs = detail::arrow_rhs(s);
          if (!rhs) {
            throw ParseError(l.number, l.column, "expected 'NAME -> path'");
          }
          auto const lhs = detail::trim(s.substr(0, rhs->second - 2));
          if (lhs.starts_with("vertex ")) {
            auto const u = detail::parse_count(l, 7, lhs.substr(7));
            auto const v = detail::parse_count(l, rhs->second, rhs->first);
            vertex_map[static_cast<std::uint32_t>(u)] = static_cast<std::uint32_t>(v);
            break;
          }
          auto const it = name_index.find(std::string(lhs));
          if (it == name_index.end()) {
            throw ParseError(l.number, l.column,
                             "unknown edge '" + std::string(lhs) + "'");
          }
          if (edge_images.count(it->second)) {
            throw ParseError(l.number, l.column,
                             "duplicate image for '" + std::string(lhs) + "'");
          }
          std::vector<std::pair<std::string, bool>> path;
          std::string_view                          r = rhs->first;
          std::size_t                               i = 0;
          while (i < r.size()) {
            if (r[i] == ' ' || r[i] == '\t') {
              ++i;
              continue;
            }
            std::size_t j = i;
            while (j < r.size() && r[j] != ' ' && r[j] != '\t') {
              ++j;
            }
            std::string tok(r.substr(i, j - i));
            bool        inv = false;
            if (tok[0] == '-' || tok[0] == '+') {
              inv = tok[0] == '-';
              tok.erase(0, 1);
            }
            if (!name_index.count(tok)) {
              throw ParseError(l.number, l.column + rhs->second + i,
                               "unknown edge '" + tok + "'");
            }
            path.emplace_back(tok, inv);
            i = j;
          }
          edge_images[it->second] = {std::move(path), l};
          break;
        }
      }
    }

    if (!graph_mode) {
      if (!rank) {
        throw ParseError(1, 1, "missing 'rank:' line");
      }
      std::vector<Word> imgs;
      for (std::size_t g = 0; g < *rank; ++g) {
        auto it = images.find(g);
        if (it == images.end()) {
          throw ParseError(rank_line, 1, std::string("missing image for '")
                                             + static_cast<char>('a' + g) + "'");
        }
        imgs.push_back(detail::checked_image(
            it->second, std::string("image of ") + static_cast<char>('a' + g),
            out.notices));
      }
      std::optional<std::vector<Word>> inv;
      if (!inverse.empty()) {
        inv.emplace();
        for (std::size_t g = 0; g < *rank; ++g) {
          auto it = inverse.find(g);
          if (it == inverse.end()) {
            throw ParseError(rank_line, 1,
                             std::string("missing inverse image for '")
                                 + static_cast<char>('a' + g) + "'");
          }
          inv->push_back(detail::checked_image(
              it->second,
              std::string("inverse image of ") + static_cast<char>('a' + g),
              out.notices));
        }
      }
      out.rank         = *rank;
      out.automorphism = Automorphism(*rank, std::move(imgs), std::move(inv));
      out.map          = rose_map(*out.automorphism);
      return out;
    }

    if (!vertices) {
      throw ParseError(1, 1, "graph section lacks 'vertices:'");
    }
    try {
      Graph g(*vertices, edges, names, rank);
      std::vector<Letters> imgs;
      for (std::size_t p = 0; p < edges.size(); ++p) {
        auto it = edge_images.find(p);
        if (it == edge_images.end()) {
          throw ParseError(1, 1, "missing image for edge '" + names[p] + "'");
        }
        Letters raw;
        for (auto const& [tok, inv] : it->second.first) {
          raw.push_back(OrientedEdge::generator(
              static_cast<std::uint32_t>(name_index[tok]), inv));
        }
        Line const& l = it->second.second;
        try {
          check_composable(g, raw);
        } catch (InputError const& e) {
          throw ParseError(l.number, l.column,
                           "image of '" + names[p] + "': " + e.what());
        }
        auto tight = tighten(g, raw);
        if (tight.empty()) {
          throw ParseError(l.number, l.column,
                           "image of '" + names[p] + "' tightens to a point");
        }
        if (tight.size() != raw.size()) {
          out.notices.push_back("line " + std::to_string(l.number) + ": image of '"
                                + names[p] + "' was not tight; tightened to "
                                + g.format(tight.edges()));
        }
        imgs.push_back(tight.vector());
      }
      std::optional<std::vector<std::uint32_t>> vi;
      if (!vertex_map.empty()) {
        vi.emplace(*vertices);
        std::vector<bool> given(*vertices, false);
        for (auto [u, v] : vertex_map) {
          if (u >= *vertices) {
            throw InputError("vertex " + std::to_string(u) + " out of range");
          }
          (*vi)[u] = v;
          given[u] = true;
        }
        for (std::size_t u = 0; u < *vertices; ++u) {
          if (!given[u]) {
            throw InputError("vertex images must be given for all vertices or none");
          }
        }
      }
      out.rank = g.rank();
      out.map  = GraphMap(std::move(g), std::move(imgs), std::move(vi));
    } catch (ParseError const&) {
      throw;
    } catch (InputError const& e) {
      throw ParseError(1, 1, e.what());
    }
    out.graph_input = true;
    return out;
  }

}  // namespace traintrack
