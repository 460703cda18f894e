#include "arnli/sgns.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "arnli/errors.hpp"
#include "arnli/rng.hpp"

namespace arnli::sgns {

namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double dot(const double* a, const double* b, std::size_t d) {
  double s = 0;
  for (std::size_t i = 0; i < d; ++i) s += a[i] * b[i];
  return s;
}

// One term of the objective for (center, out, label). Adds d/d(center) into
// grad_center and writes d/d(out) into grad_out. Returns the term's loss.
double pair_term(const double* center, const double* out, bool positive, std::size_t d,
                 double* grad_center, double* grad_out) {
  const double score = dot(center, out, d);
  const double s = sigmoid(score);
  const double g = s - (positive ? 1.0 : 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    grad_center[i] += g * out[i];
    grad_out[i] = g * center[i];
  }
  // -log s(x) = log(1 + e^-x), stable form.
  const double x = positive ? score : -score;
  return x >= 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

}  // namespace

void EmbeddingTable::add(const std::string& word, std::span<const double> vec) {
  if (vec.size() != dim_) throw Error("embedding dimension mismatch for '" + word + "'");
  if (index_.count(word)) throw Error("duplicate embedding for '" + word + "'");
  index_.emplace(word, words_.size());
  words_.push_back(word);
  data_.insert(data_.end(), vec.begin(), vec.end());
}

std::span<const double> EmbeddingTable::lookup(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return zero_;
  return {data_.data() + it->second * dim_, dim_};
}

EmbeddingTable EmbeddingTable::load_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open embeddings: " + path.string());
  std::size_t count = 0;
  std::size_t dim = 0;
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  if (!(hs >> count >> dim) || dim == 0) throw FormatError("bad embedding header in " + path.string());
  EmbeddingTable table(dim);
  std::vector<double> vec(dim);
  std::string line;
  for (std::size_t n = 0; n < count; ++n) {
    if (!std::getline(in, line)) throw FormatError("embedding file ends early: " + path.string());
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    for (auto& v : vec) {
      if (!(ls >> v)) throw FormatError("short embedding row for '" + word + "'");
    }
    table.add(word, vec);
  }
  return table;
}

void EmbeddingTable::save_text(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write embeddings: " + path.string());
  out << words_.size() << ' ' << dim_ << '\n';
  out.precision(17);
  for (std::size_t w = 0; w < words_.size(); ++w) {
    out << words_[w];
    for (std::size_t i = 0; i < dim_; ++i) out << ' ' << data_[w * dim_ + i];
    out << '\n';
  }
}

double sample_loss(std::span<const double> params, std::size_t dim) {
  if (params.size() < 2 * dim || params.size() % dim != 0) throw Error("bad SGNS parameter block");
  std::vector<double> gc(dim, 0.0), go(dim);
  const std::size_t outs = params.size() / dim - 1;
  double loss = 0;
  for (std::size_t k = 0; k < outs; ++k) {
    loss += pair_term(params.data(), params.data() + (k + 1) * dim, k == 0, dim, gc.data(),
                      go.data());
  }
  return loss;
}

std::vector<double> sample_gradient(std::span<const double> params, std::size_t dim) {
  if (params.size() < 2 * dim || params.size() % dim != 0) throw Error("bad SGNS parameter block");
  std::vector<double> grad(params.size(), 0.0);
  const std::size_t outs = params.size() / dim - 1;
  for (std::size_t k = 0; k < outs; ++k) {
    pair_term(params.data(), params.data() + (k + 1) * dim, k == 0, dim, grad.data(),
              grad.data() + (k + 1) * dim);
  }
  return grad;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  const double na = std::sqrt(dot(a.data(), a.data(), a.size()));
  const double nb = std::sqrt(dot(b.data(), b.data(), b.size()));
  if (na == 0 || nb == 0) return 0.0;
  return dot(a.data(), b.data(), a.size()) / (na * nb);
}

EmbeddingTable train_sgns(const std::vector<textproc::TokenList>& sentences,
                          const SgnsConfig& cfg) {
  if (cfg.dim == 0 || cfg.window == 0 || cfg.epochs == 0) throw ConfigError("invalid SGNS config");

  // Vocabulary in lexicographic order for determinism.
  std::map<std::string, std::size_t> counts;
  for (const auto& s : sentences) {
    for (const auto& w : s) ++counts[w];
  }
  std::vector<std::string> vocab;
  std::vector<std::size_t> freq;
  for (const auto& [w, c] : counts) {
    if (c >= cfg.min_count) {
      vocab.push_back(w);
      freq.push_back(c);
    }
  }
  if (vocab.empty()) throw Error("no word reaches the SGNS min-count threshold");
  std::unordered_map<std::string, std::size_t> id;
  for (std::size_t i = 0; i < vocab.size(); ++i) id.emplace(vocab[i], i);

  std::vector<std::vector<std::size_t>> corpus;
  std::size_t total_words = 0;
  for (const auto& s : sentences) {
    std::vector<std::size_t> ids;
    for (const auto& w : s) {
      if (auto it = id.find(w); it != id.end()) ids.push_back(it->second);
    }
    total_words += ids.size();
    corpus.push_back(std::move(ids));
  }

  // Negative-sampling distribution: unigram^0.75.
  std::vector<double> cumulative(vocab.size());
  double acc = 0;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    acc += std::pow(static_cast<double>(freq[i]), 0.75);
    cumulative[i] = acc;
  }
  for (auto& c : cumulative) c /= acc;

  const std::size_t d = cfg.dim;
  Rng rng(cfg.seed);
  std::vector<double> in(vocab.size() * d);
  std::vector<double> out(vocab.size() * d, 0.0);
  for (auto& v : in) v = (rng.uniform() - 0.5) / static_cast<double>(d);

  const double threshold = cfg.subsample * static_cast<double>(total_words);
  const double total_steps = static_cast<double>(cfg.epochs * total_words) + 1.0;
  std::size_t processed = 0;
  std::vector<double> grad_center(d), grad_out(d);
  std::vector<std::size_t> kept;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (const auto& sentence : corpus) {
      kept.clear();
      for (std::size_t w : sentence) {
        if (cfg.subsample > 0) {
          const double f = static_cast<double>(freq[w]);
          const double keep = (std::sqrt(f / threshold) + 1.0) * threshold / f;
          if (keep < rng.uniform()) continue;
        }
        kept.push_back(w);
      }
      for (std::size_t pos = 0; pos < kept.size(); ++pos) {
        const double progress = static_cast<double>(processed++) / total_steps;
        const double lr = cfg.learning_rate * std::max(1e-4, 1.0 - progress);
        const std::size_t reduce = static_cast<std::size_t>(rng.below(cfg.window));
        const std::size_t span = cfg.window - reduce;
        const std::size_t lo = pos >= span ? pos - span : 0;
        const std::size_t hi = std::min(kept.size(), pos + span + 1);
        double* center = &in[kept[pos] * d];
        for (std::size_t c = lo; c < hi; ++c) {
          if (c == pos) continue;
          std::fill(grad_center.begin(), grad_center.end(), 0.0);
          for (std::size_t k = 0; k <= cfg.negatives; ++k) {
            std::size_t target;
            if (k == 0) {
              target = kept[c];
            } else {
              const double u = rng.uniform();
              target = static_cast<std::size_t>(
                  std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
              target = std::min(target, vocab.size() - 1);
              if (target == kept[c]) continue;
            }
            double* o = &out[target * d];
            pair_term(center, o, k == 0, d, grad_center.data(), grad_out.data());
            for (std::size_t i = 0; i < d; ++i) o[i] -= lr * grad_out[i];
          }
          for (std::size_t i = 0; i < d; ++i) center[i] -= lr * grad_center[i];
        }
      }
    }
  }

  EmbeddingTable table(d);
  for (std::size_t w = 0; w < vocab.size(); ++w) {
    table.add(vocab[w], std::span<const double>(in.data() + w * d, d));
  }
  return table;
}

}  // namespace arnli::sgns
