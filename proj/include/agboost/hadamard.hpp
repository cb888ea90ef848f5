#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "errors.hpp"

namespace agboost {

/// n x n matrix with entries in {-1, +1} and mutually orthogonal rows.
class HadamardMatrix {
 public:
  /// Sylvester construction: H_1 = [1], H_2k = [[H, H], [H, -H]].
  explicit HadamardMatrix(std::size_t n) : n_(n), entries_(n * n) {
    detail::require(n >= 1 && std::has_single_bit(n),
                    "hadamard_matrix: n must be a power of two, got " + std::to_string(n));
    entries_[0] = 1;
    for (std::size_t k = 1; k < n; k *= 2) {
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
          const std::int8_t v = at(i, j);
          set(i, j + k, v);
          set(i + k, j, v);
          set(i + k, j + k, static_cast<std::int8_t>(-v));
        }
      }
    }
  }

  std::size_t size() const noexcept { return n_; }
  int operator()(std::size_t row, std::size_t col) const noexcept { return at(row, col); }

  /// Exact integer inner product of two rows.
  long long row_dot(std::size_t a, std::size_t b) const noexcept {
    long long acc = 0;
    for (std::size_t j = 0; j < n_; ++j) acc += at(a, j) * at(b, j);
    return acc;
  }

 private:
  std::int8_t at(std::size_t i, std::size_t j) const noexcept { return entries_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, std::int8_t v) noexcept { entries_[i * n_ + j] = v; }

  std::size_t n_;
  std::vector<std::int8_t> entries_;
};

inline HadamardMatrix hadamard_matrix(std::size_t n) { return HadamardMatrix(n); }

/// One block choice of a base-class element: a Hadamard row and a sign.
struct SignedRow {
  std::size_t row = 0;
  int sign = 1;

  /// Position in the per-block tie order: row 0 (+), row 0 (-), row 1 (+), ...
  std::size_t candidate_index() const noexcept { return 2 * row + (sign < 0 ? 1 : 0); }
  static SignedRow from_candidate(std::size_t c) noexcept { return {c / 2, (c % 2 == 0) ? 1 : -1}; }

  friend bool operator==(const SignedRow&, const SignedRow&) = default;
};

/// An element of the base class: one signed row per block.
using BaseElement = std::vector<SignedRow>;

/// The implicit base class of all (2n)^s concatenations of s signed Hadamard
/// rows over the universe [n*s]. Point x lives in block x / n at offset x % n.
class BaseClassHandle {
 public:
  BaseClassHandle(std::size_t n, std::size_t s)
      : matrix_(std::make_shared<const HadamardMatrix>(n)), s_(s) {
    detail::require(s >= 1, "base_class: s must be >= 1");
  }

  std::size_t n() const noexcept { return matrix_->size(); }
  std::size_t s() const noexcept { return s_; }
  std::size_t universe_size() const noexcept { return n() * s_; }
  std::size_t candidates_per_block() const noexcept { return 2 * n(); }
  const HadamardMatrix& matrix() const noexcept { return *matrix_; }

  /// log2 |B| = s * log2(2n), the finite-class surrogate for the VC dimension.
  double log2_size() const noexcept { return static_cast<double>(s_) * std::log2(2.0 * n()); }
  /// |B| = (2n)^s as a double (exact while it fits in 53 bits).
  double size() const noexcept { return std::pow(2.0 * n(), static_cast<double>(s_)); }

  int eval(const BaseElement& element, std::size_t x) const {
    if (x >= universe_size())
      throw ValidationError("base_eval: point " + std::to_string(x) + " outside universe of size " +
                            std::to_string(universe_size()));
    const SignedRow& choice = element[x / n()];
    return choice.sign * (*matrix_)(choice.row, x % n());
  }

  void check_element(const BaseElement& element) const {
    detail::require(element.size() == s_, "base element must have one signed row per block");
    for (const auto& c : element)
      detail::require(c.row < n() && (c.sign == 1 || c.sign == -1), "base element has invalid signed row");
  }

  /// Element with the given mixed-radix index (block 0 most significant).
  BaseElement element_at(std::uint64_t index) const {
    BaseElement e(s_);
    const std::uint64_t radix = candidates_per_block();
    for (std::size_t b = s_; b-- > 0;) {
      e[b] = SignedRow::from_candidate(static_cast<std::size_t>(index % radix));
      index /= radix;
    }
    return e;
  }

 private:
  std::shared_ptr<const HadamardMatrix> matrix_;
  std::size_t s_;
};

inline BaseClassHandle base_class(std::size_t n, std::size_t s) { return BaseClassHandle(n, s); }

inline int base_eval(const BaseClassHandle& handle, const BaseElement& element, std::size_t x) {
  return handle.eval(element, x);
}

}  // namespace agboost
