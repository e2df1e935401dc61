#ifndef POLITE_FORACLE_HPP
#define POLITE_FORACLE_HPP

// The bit function fof(F) built from an oracle F with F(1) = 1, its
// counters f0/f1, and recovery of F from fof(F).

#include <bit>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace polite {

using BitOracle = std::function<int(std::uint64_t)>;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace oracles {

inline BitOracle seeded(std::uint64_t seed) {
  return [seed](std::uint64_t n) -> int {
    if (n == 1) return 1;
    return static_cast<int>(splitmix64(seed ^ splitmix64(n)) & 1u);
  };
}

// 1,0,0,0,0,1,0,1 and then a seeded stream.
inline constexpr std::uint64_t kFigureSeed = 0xF16;
inline BitOracle figure() {
  return [tail = seeded(kFigureSeed)](std::uint64_t n) -> int {
    static constexpr int prefix[] = {1, 0, 0, 0, 0, 1, 0, 1};
    if (n >= 1 && n <= 8) return prefix[n - 1];
    return tail(n);
  };
}

inline BitOracle alternating() {
  return [](std::uint64_t n) -> int { return n == 1 ? 1 : static_cast<int>(n % 2); };
}

inline BitOracle parity() {
  return [](std::uint64_t n) -> int { return n == 1 ? 1 : std::popcount(n) % 2; };
}

}  // namespace oracles

// unique k with 2^{k+1}+1 <= n <= 2^{k+2}
inline int kappa(std::uint64_t n) {
  if (n < 3) throw std::invalid_argument("kappa: n must be at least 3");
  return static_cast<int>(std::bit_width(n - 1)) - 2;
}

class FofFunction {
 public:
  explicit FofFunction(BitOracle f, std::string label = "custom") : F_(std::move(f)), label_(std::move(label)) {
    if (F_(1) != 1) throw std::invalid_argument("oracle must satisfy F(1)=1");
    bits_ = {0, 1, 0};  // index 0 unused
    ones_ = {0, 1, 1};
  }

  int bit(std::uint64_t n) const {
    if (n < 1) throw std::invalid_argument("fof: n must be positive");
    std::lock_guard<std::mutex> lock(mu_);
    extend(n);
    return bits_[n];
  }

  // (f1(n), f0(n))
  std::pair<std::uint64_t, std::uint64_t> counts(std::uint64_t n) const {
    if (n < 1) throw std::invalid_argument("f_counts: n must be positive");
    std::lock_guard<std::mutex> lock(mu_);
    extend(n);
    return {ones_[n], n - ones_[n]};
  }
  std::uint64_t f1(std::uint64_t n) const { return counts(n).first; }
  std::uint64_t f0(std::uint64_t n) const { return counts(n).second; }

  int oracle(std::uint64_t n) const { return F_(n); }

  // F(n) read back from fof(F).
  int recover(std::uint64_t n) const {
    if (n < 2) throw std::invalid_argument("recover_F: n must be at least 2");
    if (n == 2) return bit(3);
    return bit(n + (std::uint64_t{1} << (kappa(n) + 1)));
  }

  const std::string& label() const { return label_; }

 private:
  BitOracle F_;
  std::string label_;
  mutable std::mutex mu_;
  mutable std::vector<std::uint8_t> bits_;
  mutable std::vector<std::uint64_t> ones_;

  void extend(std::uint64_t n) const {
    while (bits_.size() <= n) {
      std::uint64_t m = bits_.size();
      int k = kappa(m);
      std::uint64_t lo = std::uint64_t{1} << (k + 1), hi = std::uint64_t{1} << k;
      int b;
      if (m <= lo + hi) {
        b = F_(m - hi);
      } else {
        std::uint64_t cut = (std::uint64_t{1} << (k + 2)) + hi - ones_[lo + hi];
        b = m <= cut ? 1 : 0;
      }
      bits_.push_back(static_cast<std::uint8_t>(b));
      ones_.push_back(ones_.back() + b);
    }
  }
};

using FofPtr = std::shared_ptr<const FofFunction>;

// Oracle spec strings: "fig" (fixed 8-bit prefix), "alt", "parity", or a seed (decimal or 0x hex).
inline FofPtr make_fof(const std::string& spec) {
  if (spec == "fig" || spec == "0xF1G" || spec == "figure") return std::make_shared<FofFunction>(oracles::figure(), "fig");
  if (spec == "alt") return std::make_shared<FofFunction>(oracles::alternating(), "alt");
  if (spec == "parity") return std::make_shared<FofFunction>(oracles::parity(), "parity");
  std::size_t used = 0;
  std::uint64_t seed;
  try {
    seed = std::stoull(spec, &used, 0);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad oracle seed '" + spec + "'");
  }
  if (used != spec.size()) throw std::invalid_argument("bad oracle seed '" + spec + "'");
  return std::make_shared<FofFunction>(oracles::seeded(seed), "seed=" + spec);
}

}  // namespace polite

#endif  // POLITE_FORACLE_HPP
