#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "xlit/corpus.hpp"

namespace xlit {

// Deterministic 64-bit generator (SplitMix64). Chosen over the standard
// engines because its output is identical across platforms and standard
// library implementations, which selection reproducibility depends on.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  // Uniform draw from [0, n) via rejection sampling, so the distribution
  // carries no modulo bias and the consumed stream is platform-independent.
  std::uint64_t bounded(std::uint64_t n);

 private:
  std::uint64_t state_;
};

std::uint64_t fnv1a64(std::string_view s);

// Derives the per-query stream so that changing either the run seed or the
// query id changes every draw.
std::uint64_t derive_stream_seed(std::uint64_t run_seed,
                                 std::string_view query_id);

// Draw k demos at random, redrawing up to `attempts` times and keeping the
// draw whose demos cover the most distinct labels.
struct RandomCoverage {
  int k = 0;
  int attempts = 8;
};

// Use exactly these candidate ids, in the order listed.
struct Fixed {
  std::vector<std::string> ids;
};

// Rank candidates by embedding similarity to the query, keep the top
// `pool`, then draw k of those at random.
struct Retrieve {
  int k = 0;
  int pool = 0;
};

using SelectionPolicy = std::variant<RandomCoverage, Fixed, Retrieve>;

// Throws ConfigError when a policy's parameters are out of range
// (k < 1, attempts < 1, pool < k, empty id list).
void validate_policy(const SelectionPolicy& policy);

// Cosine similarity in [-1, 1]. Throws EvalError on dimension mismatch or
// when either vector has zero norm.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

// Picks demonstrations for one query. Candidates must not contain the query
// itself; k (or the fixed id list) must fit within the candidate pool.
// Retrieve requires embeddings covering the query and every candidate.
// Equal-similarity ties break toward the lexicographically smaller id, so
// the result is deterministic for a given (inputs, seed) pair.
std::vector<Example> select(
    const SelectionPolicy& policy, const std::string& query_id,
    const std::vector<Example>& candidates,
    const std::map<std::string, EmbeddingVector>& embeddings,
    std::uint64_t seed);

}  // namespace xlit
