#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "gfdm/errors.hpp"
#include "gfdm/numerics.hpp"

namespace gfdm {

enum class Domain { Time, Frequency };

inline const char* to_string(Domain d) { return d == Domain::Time ? "td" : "fd"; }

/// Block geometry: K subcarriers by M subsymbols, N = K*M, plus the active
/// subcarrier/subsymbol sets (sorted, unique).
class GfdmParams {
 public:
  GfdmParams(std::size_t K, std::size_t M) : GfdmParams(K, M, iota(K), iota(M)) {}

  GfdmParams(std::size_t K, std::size_t M, std::vector<std::size_t> k_on,
             std::vector<std::size_t> m_on)
      : K_(K), M_(M), k_on_(std::move(k_on)), m_on_(std::move(m_on)) {
    if (!is_power_of_two(K_) || !is_power_of_two(M_)) {
      throw InvalidArgument("GfdmParams: K and M must be powers of two (K=" +
                            std::to_string(K_) + ", M=" + std::to_string(M_) + ")");
    }
    normalize_set(k_on_, K_, "K_on");
    normalize_set(m_on_, M_, "M_on");
  }

  [[nodiscard]] std::size_t K() const noexcept { return K_; }
  [[nodiscard]] std::size_t M() const noexcept { return M_; }
  [[nodiscard]] std::size_t N() const noexcept { return K_ * M_; }
  [[nodiscard]] const std::vector<std::size_t>& k_on() const noexcept { return k_on_; }
  [[nodiscard]] const std::vector<std::size_t>& m_on() const noexcept { return m_on_; }
  [[nodiscard]] std::size_t active_count() const noexcept {
    return k_on_.size() * m_on_.size();
  }
  [[nodiscard]] bool is_active(std::size_t k, std::size_t m) const {
    return std::binary_search(k_on_.begin(), k_on_.end(), k) &&
           std::binary_search(m_on_.begin(), m_on_.end(), m);
  }

  friend bool operator==(const GfdmParams&, const GfdmParams&) = default;

 private:
  static std::vector<std::size_t> iota(std::size_t n) {
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = i;
    return v;
  }

  static void normalize_set(std::vector<std::size_t>& s, std::size_t bound, const char* name) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (s.empty()) throw InvalidArgument(std::string("GfdmParams: ") + name + " is empty");
    if (s.back() >= bound) {
      throw InvalidArgument(std::string("GfdmParams: ") + name + " index " +
                            std::to_string(s.back()) + " out of range");
    }
  }

  std::size_t K_;
  std::size_t M_;
  std::vector<std::size_t> k_on_;
  std::vector<std::size_t> m_on_;
};

inline void require_grid_shape(const ComplexMat& D, std::size_t K, std::size_t M,
                               const char* what) {
  if (D.rows() != K || D.cols() != M) {
    throw InvalidArgument(std::string(what) + ": expected " + std::to_string(K) + "x" +
                          std::to_string(M) + " grid, got " + std::to_string(D.rows()) + "x" +
                          std::to_string(D.cols()));
  }
}

}  // namespace gfdm
