#pragma once

#include <string>
#include <vector>

#include "traintrack/parse.hpp"
#include "traintrack/train_track.hpp"
#include "traintrack/word.hpp"

#include "oracles.hpp"

namespace fx {

  namespace tt = traintrack;

  inline std::string data_path(std::string const& name) {
    return std::string(TRAINTRACK_DATA_DIR) + "/" + name;
  }

  inline tt::ParsedInput load(std::string const& name) {
    return tt::parse_input(oracle::read_file(data_path(name)));
  }

  inline tt::Word word(std::string const& s, std::size_t rank = 2) {
    return tt::parse_word(s, rank);
  }

  inline tt::CyclicWord cyc(std::string const& s, std::size_t rank = 2) {
    return tt::to_cyclic(tt::parse_word(s, rank));
  }

  inline std::string str(tt::Word const& w) { return tt::to_string(w); }

  inline std::string str(tt::Letters const& w) { return tt::to_string(w); }

  // Library-side automorphism from plain image strings.
  inline tt::Automorphism automorphism(oracle::Images const& img) {
    std::vector<tt::Word> w;
    for (auto const& s : img) {
      w.push_back(word(s, img.size()));
    }
    return tt::Automorphism(img.size(), w);
  }

  inline tt::GraphMap rose(oracle::Images const& img) {
    return tt::rose_map(automorphism(img));
  }

  inline oracle::Images const fibonacci{"ab", "a"};
  inline oracle::Images const fibonacci_conj_b{"Babb", "Bab"};
  inline oracle::Images const rank4{"c", "d", "ab", "a"};
  inline oracle::Images const linear{"a", "ba"};
  inline oracle::Images const swap{"b", "a"};
  inline oracle::Images const identity2{"a", "b"};

  inline tt::TrainTrackData data(oracle::Images const& img) {
    return tt::make_train_track_data(rose(img));
  }

  inline std::vector<std::string> all_words(std::vector<tt::CyclicWord> const& ws) {
    std::vector<std::string> out;
    for (auto const& w : ws) {
      out.push_back(tt::to_string(w));
    }
    return out;
  }

}  // namespace fx
