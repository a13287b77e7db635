// Copyright 2026 The Newstrend Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef NEWSTREND_EMBEDDINGS_HPP_
#define NEWSTREND_EMBEDDINGS_HPP_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "newstrend/corpus.hpp"
#include "newstrend/types.hpp"

namespace newstrend {

using TokenStream = std::vector<std::vector<std::string>>;

// Lowercased tokens per sentence with punctuation-only tokens removed.
TokenStream token_streams(const Corpus &corpus);

struct PhraseParams {
  long min_count = 5;
  double threshold = 100.0;
  int max_len = 4;
  int passes = 3;
};

// Collocations joined with '_' into single units. Each pass may join two
// adjacent units as long as the result spans at most max_len source tokens.
class PhraseModel {
 public:
  struct Entry {
    double score = 0.0;
    int length = 0;  // source tokens
    int pass = 0;    // 0-based pass that formed it
  };

  PhraseModel() = default;
  explicit PhraseModel(PhraseParams params) : params_(params) {}

  const PhraseParams &params() const { return params_; }
  const std::map<std::string, Entry> &phrases() const { return phrases_; }
  std::optional<double> score(std::string_view phrase) const;
  int max_length() const;

  void add(std::string phrase, Entry entry);

  // Replays the join passes on one sentence.
  std::vector<std::string> apply(const std::vector<std::string> &tokens) const;
  TokenStream apply(const TokenStream &sentences) const;

  void write(std::ostream &out) const;
  static PhraseModel read(std::istream &in);

 private:
  PhraseParams params_;
  std::map<std::string, Entry> phrases_;
};

// Word2phrase-style scoring:
//   score(a, b) = (count(ab) - min_count) * N / (count(a) * count(b))
// where N is the number of units in the current pass. Pairs whose score
// exceeds the threshold are joined.
double phrase_score(long count_ab, long count_a, long count_b, long total,
                    long min_count);

PhraseModel learn_phrases(const TokenStream &sentences,
                          const PhraseParams &params);

// Dense word index. Words are ordered by count descending, then
// lexicographically.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> words, std::vector<long> counts);

  static Vocabulary build(const TokenStream &sentences, long min_count);

  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::string &word(std::size_t i) const { return words_[i]; }
  long count(std::size_t i) const { return counts_[i]; }
  const std::vector<std::string> &words() const { return words_; }
  const std::vector<long> &counts() const { return counts_; }
  std::optional<std::size_t> find(std::string_view word) const;

 private:
  std::vector<std::string> words_;
  std::vector<long> counts_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Embedding matrix for one time slice, one row per vocabulary word.
struct EmbeddingSlice {
  std::string label;
  Vocabulary vocab;
  Matrix matrix;
  std::optional<std::string> aligned_to;

  int dim() const { return static_cast<int>(matrix.cols()); }
  bool contains(std::string_view word) const {
    return vocab.find(word).has_value();
  }
  // Throws OutOfVocabulary.
  Eigen::Ref<const Vector> row(std::string_view word) const;
};

struct TrainConfig {
  int dim = 100;
  int window = 5;
  int negatives = 5;
  int epochs = 5;
  double initial_lr = 0.025;
  long min_count = 5;
  std::uint64_t seed = 42;
  Exec exec = Exec::kSerial;
  int threads = 0;  // 0 = OpenMP default

  // Throws InvalidArgument.
  void validate() const;
};

struct TrainResult {
  EmbeddingSlice slice;
  // Mean negative-sampling loss over a fixed probe batch after each epoch.
  std::vector<double> epoch_loss;
};

// Skip-gram with negative sampling over already-phrased sentences. The
// serial path is bitwise reproducible for a fixed seed. Throws
// EmptyVocabulary.
TrainResult train_slice(const TokenStream &sentences, std::string label,
                        const TrainConfig &config);
TrainResult train_slice(const Corpus &corpus_slice, const PhraseModel *phrases,
                        const TrainConfig &config);

// Cosine of the two rows; 0 when either row is all zeros. Throws
// OutOfVocabulary.
double cosine(const EmbeddingSlice &slice, std::string_view a,
              std::string_view b);
double cosine(Eigen::Ref<const Vector> a, Eigen::Ref<const Vector> b);

// Text format: header "V d label [aligned_to: anchor]", then one line per
// word: word followed by d decimal values. Values are written in the
// shortest form that reads back exactly.
void write_embedding(const EmbeddingSlice &slice, std::ostream &out);
EmbeddingSlice read_embedding(std::istream &in);
EmbeddingSlice load_embedding(const std::filesystem::path &path);

std::string format_double(double value);

}  // namespace newstrend

#endif  // NEWSTREND_EMBEDDINGS_HPP_
