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
#include "newstrend/embeddings.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <omp.h>

#include "newstrend/errors.hpp"
#include "newstrend/text.hpp"

namespace newstrend {

TokenStream token_streams(const Corpus &corpus) {
  TokenStream out;
  for (const auto &doc : corpus.documents()) {
    for (const auto &sentence : doc.sentences) {
      std::vector<std::string> tokens;
      tokens.reserve(sentence.tokens.size());
      for (const auto &t : sentence.tokens) {
        if (t.empty() || text::is_punctuation(t)) continue;
        tokens.push_back(text::underscore(text::lowercase(t)));
      }
      if (!tokens.empty()) out.push_back(std::move(tokens));
    }
  }
  return out;
}

Vocabulary::Vocabulary(std::vector<std::string> words, std::vector<long> counts)
    : words_(std::move(words)), counts_(std::move(counts)) {
  if (words_.size() != counts_.size()) {
    throw InvalidArgument("vocabulary words/counts size mismatch");
  }
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], i).second) {
      throw InvalidArgument("duplicate vocabulary word '" + words_[i] + "'");
    }
  }
}

Vocabulary Vocabulary::build(const TokenStream &sentences, long min_count) {
  std::unordered_map<std::string, long> counts;
  for (const auto &s : sentences) {
    for (const auto &w : s) ++counts[w];
  }
  std::vector<std::pair<std::string, long>> kept;
  for (auto &[w, c] : counts) {
    if (c >= min_count) kept.emplace_back(w, c);
  }
  std::sort(kept.begin(), kept.end(), [](const auto &a, const auto &b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> words;
  std::vector<long> cs;
  for (auto &[w, c] : kept) {
    words.push_back(w);
    cs.push_back(c);
  }
  return Vocabulary(std::move(words), std::move(cs));
}

std::optional<std::size_t> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Eigen::Ref<const Vector> EmbeddingSlice::row(std::string_view word) const {
  auto i = vocab.find(word);
  if (!i) throw OutOfVocabulary(std::string(word));
  return matrix.row(static_cast<Eigen::Index>(*i)).transpose();
}

void TrainConfig::validate() const {
  if (dim <= 0 || window <= 0 || negatives <= 0 || epochs <= 0 ||
      initial_lr <= 0.0 || min_count <= 0) {
    throw InvalidArgument("training parameters must all be positive");
  }
}

namespace {

// Scalar access for the shared parameter arrays. The parallel path reads
// and writes through relaxed atomics so concurrent workers never observe a
// torn value; the serial path compiles to plain loads and stores.
template <bool kAtomic>
inline double load(const double *p) {
  if constexpr (kAtomic) {
    return std::atomic_ref<double>(*const_cast<double *>(p))
        .load(std::memory_order_relaxed);
  } else {
    return *p;
  }
}

template <bool kAtomic>
inline void store(double *p, double v) {
  if constexpr (kAtomic) {
    std::atomic_ref<double>(*p).store(v, std::memory_order_relaxed);
  } else {
    *p = v;
  }
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double uniform01(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct SgnsModel {
  int dim;
  Matrix input;   // V x d, the published embeddings
  Matrix output;  // V x d, negative-sampling weights
  std::vector<std::uint32_t> table;
};

std::vector<std::uint32_t> unigram_table(const std::vector<long> &counts) {
  const std::size_t size = std::max<std::size_t>(1'000'000, counts.size() * 100);
  std::vector<std::uint32_t> table(size);
  double total = 0.0;
  for (long c : counts) total += std::pow(static_cast<double>(c), 0.75);
  std::size_t w = 0;
  double cumulative = std::pow(static_cast<double>(counts[0]), 0.75) / total;
  for (std::size_t a = 0; a < size; ++a) {
    table[a] = static_cast<std::uint32_t>(w);
    if (static_cast<double>(a) / static_cast<double>(size) > cumulative &&
        w + 1 < counts.size()) {
      ++w;
      cumulative += std::pow(static_cast<double>(counts[w]), 0.75) / total;
    }
  }
  return table;
}

// One skip-gram step: the context word's input vector predicts the center
// word against sampled negatives.
template <bool kAtomic>
void update_pair(SgnsModel &m, std::size_t context, std::size_t center,
                 int negatives, double lr, std::mt19937_64 &rng,
                 std::vector<double> &grad) {
  const int d = m.dim;
  double *in = m.input.data() + context * d;
  std::fill(grad.begin(), grad.end(), 0.0);
  for (int s = 0; s <= negatives; ++s) {
    std::size_t target;
    double label;
    if (s == 0) {
      target = center;
      label = 1.0;
    } else {
      target = m.table[rng() % m.table.size()];
      if (target == center) continue;
      label = 0.0;
    }
    double *out = m.output.data() + target * d;
    double f = 0.0;
    for (int k = 0; k < d; ++k) f += load<kAtomic>(in + k) * load<kAtomic>(out + k);
    const double g = (label - sigmoid(f)) * lr;
    for (int k = 0; k < d; ++k) {
      const double o = load<kAtomic>(out + k);
      grad[k] += g * o;
      store<kAtomic>(out + k, o + g * load<kAtomic>(in + k));
    }
  }
  for (int k = 0; k < d; ++k) store<kAtomic>(in + k, load<kAtomic>(in + k) + grad[k]);
}

template <bool kAtomic>
void train_sentence(SgnsModel &m, const std::vector<std::size_t> &sentence,
                    const TrainConfig &config, double lr, std::mt19937_64 &rng,
                    std::vector<double> &grad) {
  const long len = static_cast<long>(sentence.size());
  for (long pos = 0; pos < len; ++pos) {
    const long reduced = static_cast<long>(rng() % config.window);
    const long radius = config.window - reduced;
    for (long c = pos - radius; c <= pos + radius; ++c) {
      if (c == pos || c < 0 || c >= len) continue;
      update_pair<kAtomic>(m, sentence[c], sentence[pos], config.negatives, lr,
                           rng, grad);
    }
  }
}

struct ProbePair {
  std::size_t context;
  std::size_t center;
  std::vector<std::size_t> negatives;
};

std::vector<ProbePair> probe_batch(const std::vector<std::vector<std::size_t>> &corpus,
                                   const SgnsModel &m, const TrainConfig &config) {
  constexpr std::size_t kProbeSize = 2000;
  std::mt19937_64 rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<ProbePair> batch;
  for (const auto &s : corpus) {
    for (std::size_t pos = 0; pos < s.size() && batch.size() < kProbeSize; ++pos) {
      for (std::size_t c = pos + 1; c < s.size() && c <= pos + config.window; ++c) {
        ProbePair p{s[c], s[pos], {}};
        for (int k = 0; k < config.negatives; ++k) {
          p.negatives.push_back(m.table[rng() % m.table.size()]);
        }
        batch.push_back(std::move(p));
      }
    }
    if (batch.size() >= kProbeSize) break;
  }
  return batch;
}

double probe_loss(const SgnsModel &m, const std::vector<ProbePair> &batch) {
  if (batch.empty()) return 0.0;
  auto log_sigmoid = [](double x) {
    return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
  };
  double loss = 0.0;
  for (const auto &p : batch) {
    const auto in = m.input.row(static_cast<Eigen::Index>(p.context));
    loss -= log_sigmoid(in.dot(m.output.row(static_cast<Eigen::Index>(p.center))));
    for (auto n : p.negatives) {
      loss -= log_sigmoid(-in.dot(m.output.row(static_cast<Eigen::Index>(n))));
    }
  }
  return loss / static_cast<double>(batch.size());
}

}  // namespace

TrainResult train_slice(const TokenStream &sentences, std::string label,
                        const TrainConfig &config) {
  config.validate();
  Vocabulary vocab = Vocabulary::build(sentences, config.min_count);
  if (vocab.empty()) throw EmptyVocabulary();

  std::vector<std::vector<std::size_t>> corpus;
  long total_words = 0;
  for (const auto &s : sentences) {
    std::vector<std::size_t> ids;
    for (const auto &w : s) {
      if (auto i = vocab.find(w)) ids.push_back(*i);
    }
    total_words += static_cast<long>(ids.size());
    if (ids.size() > 1) corpus.push_back(std::move(ids));
  }

  const auto V = static_cast<Eigen::Index>(vocab.size());
  SgnsModel m{config.dim, Matrix(V, config.dim), Matrix::Zero(V, config.dim),
              unigram_table(vocab.counts())};
  std::mt19937_64 init_rng(config.seed);
  for (Eigen::Index i = 0; i < V; ++i) {
    for (int k = 0; k < config.dim; ++k) {
      m.input(i, k) = (uniform01(init_rng) - 0.5) / config.dim;
    }
  }

  const auto probe = probe_batch(corpus, m, config);
  const double planned = static_cast<double>(config.epochs) *
                             static_cast<double>(total_words) + 1.0;
  auto rate = [&](double processed) {
    return config.initial_lr * std::max(1.0 - processed / planned, 1e-4);
  };

  std::vector<double> losses;
  if (config.exec == Exec::kSerial) {
    std::mt19937_64 rng(config.seed + 1);
    std::vector<double> grad(config.dim);
    double processed = 0.0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
      for (const auto &s : corpus) {
        train_sentence<false>(m, s, config, rate(processed), rng, grad);
        processed += static_cast<double>(s.size());
      }
      losses.push_back(probe_loss(m, probe));
    }
  } else {
    const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();
    std::atomic<long> processed{0};
    const long n = static_cast<long>(corpus.size());
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
#pragma omp parallel num_threads(threads)
      {
        const int tid = omp_get_thread_num();
        std::mt19937_64 rng(config.seed + 1 + 7919ULL * (epoch * threads + tid + 1));
        std::vector<double> grad(config.dim);
#pragma omp for schedule(dynamic, 16)
        for (long i = 0; i < n; ++i) {
          const double lr = rate(static_cast<double>(processed.load(std::memory_order_relaxed)));
          train_sentence<true>(m, corpus[i], config, lr, rng, grad);
          processed.fetch_add(static_cast<long>(corpus[i].size()),
                              std::memory_order_relaxed);
        }
      }
      losses.push_back(probe_loss(m, probe));
    }
  }

  return TrainResult{EmbeddingSlice{std::move(label), std::move(vocab),
                                    std::move(m.input), std::nullopt},
                     std::move(losses)};
}

TrainResult train_slice(const Corpus &corpus_slice, const PhraseModel *phrases,
                        const TrainConfig &config) {
  if (corpus_slice.slices().size() != 1) {
    throw InvalidArgument("training expects a corpus restricted to one slice");
  }
  auto streams = token_streams(corpus_slice);
  if (phrases) streams = phrases->apply(streams);
  return train_slice(streams, corpus_slice.slices().front().label, config);
}

double cosine(Eigen::Ref<const Vector> a, Eigen::Ref<const Vector> b) {
  const double denom = a.norm() * b.norm();
  if (denom == 0.0) return 0.0;
  return std::clamp(a.dot(b) / denom, -1.0, 1.0);
}

double cosine(const EmbeddingSlice &slice, std::string_view a,
              std::string_view b) {
  return cosine(slice.row(a), slice.row(b));
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_embedding(const EmbeddingSlice &slice, std::ostream &out) {
  out << slice.vocab.size() << ' ' << slice.dim() << ' ' << slice.label;
  if (slice.aligned_to) out << " aligned_to: " << *slice.aligned_to;
  out << '\n';
  std::string line;
  for (std::size_t i = 0; i < slice.vocab.size(); ++i) {
    line = slice.vocab.word(i);
    for (int k = 0; k < slice.dim(); ++k) {
      line += ' ';
      line += format_double(slice.matrix(static_cast<Eigen::Index>(i), k));
    }
    line += '\n';
    out << line;
  }
}

EmbeddingSlice read_embedding(std::istream &in) {
  std::string header;
  if (!std::getline(in, header)) throw InvalidArgument("embedding file is empty");
  auto fields = text::split_whitespace(header);
  if (fields.size() != 3 && !(fields.size() == 5 && fields[3] == "aligned_to:")) {
    throw InvalidArgument("bad embedding header: " + header);
  }
  EmbeddingSlice slice;
  const long V = std::stol(fields[0]);
  const long d = std::stol(fields[1]);
  if (V < 0 || d <= 0) throw InvalidArgument("bad embedding shape: " + header);
  slice.label = fields[2];
  if (fields.size() == 5) slice.aligned_to = fields[4];
  slice.matrix.resize(V, d);
  std::vector<std::string> words;
  words.reserve(V);
  std::string line;
  for (long i = 0; i < V; ++i) {
    if (!std::getline(in, line)) {
      throw InvalidArgument("embedding file truncated at row " + std::to_string(i));
    }
    const char *p = line.data();
    const char *end = p + line.size();
    const char *space = std::find(p, end, ' ');
    words.emplace_back(p, space);
    p = space;
    for (long k = 0; k < d; ++k) {
      while (p < end && *p == ' ') ++p;
      double v = 0.0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc() || !std::isfinite(v)) {
        throw InvalidArgument("bad value in embedding row " + std::to_string(i));
      }
      slice.matrix(i, k) = v;
      p = next;
    }
    while (p < end && *p == ' ') ++p;
    if (p != end) {
      throw InvalidArgument("extra values in embedding row " + std::to_string(i));
    }
  }
  // Counts are not part of the file; row order already encodes frequency.
  std::vector<long> counts(words.size(), 0);
  slice.vocab = Vocabulary(std::move(words), std::move(counts));
  return slice;
}

EmbeddingSlice load_embedding(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open embedding file " + path.string());
  return read_embedding(in);
}

}  // namespace newstrend
