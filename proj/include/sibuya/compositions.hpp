#pragma once

#include <numeric>
#include <stdexcept>
#include <vector>

namespace sibuya {

/// Compositions of n into k positive parts, visited in colexicographic order
/// (the last part varies slowest). The iterator mutates one counter vector in
/// place, so memory stays O(k).
class CompositionIterator {
 public:
  CompositionIterator(unsigned n, unsigned k) : n_(n), parts_(k, 1U) {
    if (k == 0) {
      done_ = n != 0;
      return;
    }
    if (n < k) {
      done_ = true;
      return;
    }
    parts_[0] = n - k + 1;
  }

  bool done() const { return done_; }
  const std::vector<unsigned>& parts() const { return parts_; }
  unsigned total() const { return n_; }

  void next() {
    if (done_) return;
    const std::size_t k = parts_.size();
    // Find the first i > 0 whose prefix carries more than one unit per slot.
    unsigned prefix = parts_[0];
    for (std::size_t i = 1; i < k; ++i) {
      if (prefix > i) {
        ++parts_[i];
        unsigned rest = prefix - 1;
        for (std::size_t j = 1; j < i; ++j) parts_[j] = 1;
        parts_[0] = rest - static_cast<unsigned>(i - 1);
        return;
      }
      prefix += parts_[i];
    }
    done_ = true;
  }

 private:
  unsigned n_;
  std::vector<unsigned> parts_;
  bool done_ = false;
};

template <class F>
void for_each_composition(unsigned n, unsigned k, F&& visit) {
  for (CompositionIterator it(n, k); !it.done(); it.next()) visit(it.parts());
}

}  // namespace sibuya
