#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace dfwer {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// A stream is identified by a 64-bit key and a 64-bit stream index; draws
/// within the stream advance a 64-bit block counter. Distinct (key, stream)
/// pairs give independent sequences, so replicate r of a simulation can own
/// stream r without any shared state.
///
/// Satisfies UniformRandomBitGenerator with 64-bit output.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t key, std::uint64_t stream);

  /// One application of the 10-round bijection.
  static Block encrypt(Block counter, Key key);

  result_type operator()();

  /// Uniform double in the open interval (0, 1) with 53 random bits.
  double uniform();

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

 private:
  void refill();

  Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Block buffer_{};
  int used_ = 4;  // 32-bit words consumed from buffer_
};

}  // namespace dfwer
