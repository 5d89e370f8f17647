#include "xlit/demo_selector.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "xlit/errors.hpp"

namespace xlit {

namespace {

// First k entries of a seeded Fisher-Yates shuffle of [0, n).
std::vector<std::size_t> draw_distinct(SplitMix64& rng, std::size_t n,
                                       std::size_t k) {
  std::vector<std::size_t> indices(n);
  for (std::size_t i = 0; i < n; ++i) indices[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.bounded(n - i));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(k);
  return indices;
}

// Number of distinct labels (tags or class labels) across the chosen demos.
std::size_t label_coverage(const std::vector<Example>& candidates,
                           const std::vector<std::size_t>& chosen) {
  std::set<Tag> tags;
  std::set<std::string> labels;
  for (std::size_t i : chosen) {
    const Example& ex = candidates[i];
    if (ex.is_seqlab()) {
      for (Tag t : ex.seqlab().tags) tags.insert(t);
    } else {
      labels.insert(ex.cls().label);
    }
  }
  return tags.size() + labels.size();
}

std::vector<Example> materialize(const std::vector<Example>& candidates,
                                 const std::vector<std::size_t>& chosen) {
  std::vector<Example> out;
  out.reserve(chosen.size());
  for (std::size_t i : chosen) out.push_back(candidates[i]);
  return out;
}

void check_pool_size(std::size_t k, std::size_t available,
                     const std::string& what) {
  if (k > available) {
    throw ConfigError("k=" + std::to_string(k) + " exceeds " + what + " of " +
                      std::to_string(available));
  }
}

}  // namespace

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::bounded(std::uint64_t n) {
  if (n == 0) throw EvalError("bounded draw from empty range");
  std::uint64_t threshold = (0 - n) % n;
  while (true) {
    std::uint64_t r = next();
    if (r >= threshold) return r % n;
  }
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t derive_stream_seed(std::uint64_t run_seed,
                                 std::string_view query_id) {
  return SplitMix64(run_seed ^ fnv1a64(query_id)).next();
}

void validate_policy(const SelectionPolicy& policy) {
  if (const auto* rc = std::get_if<RandomCoverage>(&policy)) {
    if (rc->k < 1) throw ConfigError("random-coverage k must be >= 1");
    if (rc->attempts < 1) {
      throw ConfigError("random-coverage attempts must be >= 1");
    }
    return;
  }
  if (const auto* fx = std::get_if<Fixed>(&policy)) {
    if (fx->ids.empty()) throw ConfigError("fixed policy needs at least one id");
    std::set<std::string> seen;
    for (const auto& id : fx->ids) {
      if (!seen.insert(id).second) {
        throw ConfigError("fixed policy lists id '" + id + "' twice");
      }
    }
    return;
  }
  const auto& rt = std::get<Retrieve>(policy);
  if (rt.k < 1) throw ConfigError("retrieve k must be >= 1");
  if (rt.pool < rt.k) throw ConfigError("retrieve pool must be >= k");
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.values.size() != b.values.size()) {
    throw EvalError("embedding dimension mismatch: '" + a.example_id + "' has " +
                    std::to_string(a.values.size()) + ", '" + b.example_id +
                    "' has " + std::to_string(b.values.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw EvalError("zero-norm embedding for '" +
                    (na == 0.0 ? a.example_id : b.example_id) + "'");
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<Example> select(
    const SelectionPolicy& policy, const std::string& query_id,
    const std::vector<Example>& candidates,
    const std::map<std::string, EmbeddingVector>& embeddings,
    std::uint64_t seed) {
  validate_policy(policy);
  for (const auto& cand : candidates) {
    if (cand.id == query_id) {
      throw ConfigError("query '" + query_id + "' present among candidates");
    }
  }

  if (const auto* rc = std::get_if<RandomCoverage>(&policy)) {
    std::size_t k = static_cast<std::size_t>(rc->k);
    check_pool_size(k, candidates.size(), "candidate pool");
    SplitMix64 rng(derive_stream_seed(seed, query_id));
    std::vector<std::size_t> best;
    std::size_t best_coverage = 0;
    for (int attempt = 0; attempt < rc->attempts; ++attempt) {
      auto chosen = draw_distinct(rng, candidates.size(), k);
      std::size_t coverage = label_coverage(candidates, chosen);
      if (best.empty() || coverage > best_coverage) {
        best = std::move(chosen);
        best_coverage = coverage;
      }
    }
    return materialize(candidates, best);
  }

  if (const auto* fx = std::get_if<Fixed>(&policy)) {
    std::unordered_map<std::string_view, std::size_t> by_id;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      by_id.emplace(candidates[i].id, i);
    }
    std::vector<std::size_t> chosen;
    for (const auto& id : fx->ids) {
      auto it = by_id.find(id);
      if (it == by_id.end()) {
        throw ConfigError("fixed policy id '" + id + "' not among candidates");
      }
      chosen.push_back(it->second);
    }
    return materialize(candidates, chosen);
  }

  const auto& rt = std::get<Retrieve>(policy);
  auto query_emb = embeddings.find(query_id);
  if (query_emb == embeddings.end()) {
    throw ConfigError("no embedding for query '" + query_id + "'");
  }
  struct Scored {
    double similarity;
    std::size_t index;
  };
  std::vector<Scored> scored;
  scored.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto emb = embeddings.find(candidates[i].id);
    if (emb == embeddings.end()) {
      throw ConfigError("no embedding for candidate '" + candidates[i].id +
                        "'");
    }
    scored.push_back({cosine_similarity(query_emb->second, emb->second), i});
  }
  std::sort(scored.begin(), scored.end(), [&](const Scored& a, const Scored& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return candidates[a.index].id < candidates[b.index].id;
  });

  std::size_t k = static_cast<std::size_t>(rt.k);
  std::size_t pool_size =
      std::min(static_cast<std::size_t>(rt.pool), scored.size());
  check_pool_size(k, pool_size, "retrieval pool");

  SplitMix64 rng(derive_stream_seed(seed, query_id));
  auto picks = draw_distinct(rng, pool_size, k);
  std::vector<std::size_t> chosen;
  chosen.reserve(picks.size());
  for (std::size_t p : picks) chosen.push_back(scored[p].index);
  return materialize(candidates, chosen);
}

}  // namespace xlit
