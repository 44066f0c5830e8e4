// Independent multiplication oracle for small pc groups.  Elements are
// normalized by naive leftmost-violation string rewriting on letter
// sequences (no exponent-vector collection), and right-multiplication maps
// are tabulated for the whole group.  Deliberately implemented with a
// different algorithm and representation than the library collector.
#pragma once

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pgsieve/pcgroup.hpp"

namespace pgsieve_test {

class CayleyOracle {
 public:
  explicit CayleyOracle(const pgsieve::PcPresentation &g) : g_(g) {
    size_ = 1;
    for (int i = 0; i < g.n; ++i) {
      if (size_ > (1u << 26)) throw std::invalid_argument("group too large");
      size_ *= static_cast<uint64_t>(g.p);
    }
    sigma_.assign(g.n, std::vector<uint32_t>(size_, 0));
    for (uint64_t idx = 0; idx < size_; ++idx) {
      std::vector<int> base = letters_of(vector_of(idx));
      for (int i = 0; i < g.n; ++i) {
        std::vector<int> word = base;
        word.push_back(i);
        sigma_[i][idx] = static_cast<uint32_t>(index_of(normalize(word)));
      }
    }
  }

  uint64_t size() const { return size_; }

  uint64_t index_of(const std::vector<uint8_t> &exps) const {
    uint64_t idx = 0;
    for (int i = g_.n - 1; i >= 0; --i) idx = idx * g_.p + exps[i];
    return idx;
  }

  std::vector<uint8_t> vector_of(uint64_t idx) const {
    std::vector<uint8_t> v(g_.n);
    for (int i = 0; i < g_.n; ++i) {
      v[i] = static_cast<uint8_t>(idx % g_.p);
      idx /= g_.p;
    }
    return v;
  }

  // Table-based product: apply b's letters to a.
  uint64_t mul(uint64_t a, uint64_t b) const {
    std::vector<uint8_t> bv = vector_of(b);
    uint64_t cur = a;
    for (int i = 0; i < g_.n; ++i)
      for (int rep = 0; rep < bv[i]; ++rep) cur = sigma_[i][cur];
    return cur;
  }

  uint64_t identity() const { return 0; }

  uint64_t power(uint64_t a, uint64_t k) const {
    uint64_t cur = identity();
    for (uint64_t i = 0; i < k; ++i) cur = mul(cur, a);
    return cur;
  }

  uint64_t element_order(uint64_t a) const {
    uint64_t cur = a, ord = 1;
    while (cur != identity()) {
      cur = mul(cur, a);
      ++ord;
    }
    return ord;
  }

  const std::vector<uint32_t> &sigma(int i) const { return sigma_[i]; }

  // Naive normalization: repeatedly rewrite the leftmost violation, either
  // p equal adjacent letters (power relation) or a descending adjacent pair
  // (commutator relation g_a g_b -> g_b g_a [g_a, g_b] for a > b).
  std::vector<uint8_t> normalize(std::vector<int> word) const {
    long long guard = 0;
    for (;;) {
      if (++guard > 50'000'000) throw std::runtime_error("rewriting diverged");
      int pos = -1, kind = 0;
      int limit = static_cast<int>(word.size());
      for (int k = 0; k < limit; ++k) {
        if (k + g_.p - 1 < limit) {
          bool all_equal = true;
          for (int t = 1; t < g_.p; ++t)
            if (word[k + t] != word[k]) {
              all_equal = false;
              break;
            }
          if (all_equal) {
            pos = k;
            kind = 1;
            break;
          }
        }
        if (k + 1 < limit && word[k] > word[k + 1]) {
          pos = k;
          kind = 2;
          break;
        }
      }
      if (pos < 0) break;
      if (kind == 1) {
        int i = word[pos];
        std::vector<int> repl = letters_of_word(g_.power_words[i]);
        word.erase(word.begin() + pos, word.begin() + pos + g_.p);
        word.insert(word.begin() + pos, repl.begin(), repl.end());
      } else {
        int a = word[pos], b = word[pos + 1];
        std::vector<int> repl = {b, a};
        std::vector<int> c =
            letters_of_word(g_.comm_words[pgsieve::PcPresentation::comm_index(a, b)]);
        repl.insert(repl.end(), c.begin(), c.end());
        word.erase(word.begin() + pos, word.begin() + pos + 2);
        word.insert(word.begin() + pos, repl.begin(), repl.end());
      }
    }
    std::vector<uint8_t> exps(g_.n, 0);
    for (int l : word) ++exps[l];
    for (auto e : exps) assert(e < g_.p);
    return exps;
  }

 private:
  std::vector<int> letters_of(const std::vector<uint8_t> &exps) const {
    std::vector<int> out;
    for (int i = 0; i < g_.n; ++i)
      for (int rep = 0; rep < exps[i]; ++rep) out.push_back(i);
    return out;
  }
  std::vector<int> letters_of_word(const std::vector<uint8_t> &w) const {
    if (w.empty()) return {};
    return letters_of(w);
  }

  const pgsieve::PcPresentation &g_;
  uint64_t size_ = 0;
  std::vector<std::vector<uint32_t>> sigma_;
};

}  // namespace pgsieve_test
