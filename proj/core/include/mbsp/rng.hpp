#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Core>

namespace mbsp {

// Seedable xoshiro256++ stream. The state is derived from (seed, stream_id)
// through splitmix64, so every pair gives an independent, reproducible
// sequence. All variates are produced with hand-written transforms (no
// <random> distributions) to keep the output identical across standard
// library implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() noexcept;

  // Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform() noexcept;

  // Standard normal (Marsaglia polar method, spare value cached).
  double normal() noexcept;

  // Uniform integer in [0, bound) without modulo bias.
  std::uint64_t below(std::uint64_t bound) noexcept;

  // A child stream keyed by `index`, independent of this stream's position.
  RngStream substream(std::uint64_t index) const;

 private:
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Source of standard-normal noise used by the matrix samplers. Production
// code draws from an RngStream; tests substitute ZeroNoise to expose the
// deterministic conditional-mean maps.
class GaussianNoise {
 public:
  virtual ~GaussianNoise() = default;
  virtual void fill(Eigen::Ref<Eigen::MatrixXd> out) = 0;
};

class StreamNoise final : public GaussianNoise {
 public:
  explicit StreamNoise(RngStream& rng) : rng_(rng) {}
  void fill(Eigen::Ref<Eigen::MatrixXd> out) override;

 private:
  RngStream& rng_;
};

class ZeroNoise final : public GaussianNoise {
 public:
  void fill(Eigen::Ref<Eigen::MatrixXd> out) override { out.setZero(); }
};

}  // namespace mbsp
