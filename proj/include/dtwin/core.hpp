#pragma once

// Shared value types, error types and deterministic random streams.

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dtwin {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised when a physical environment runs out of interaction budget.
struct BudgetExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an operation would expose or mutate hidden physical parameters.
struct AccessDenied : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Finite real vectors with a tag per domain concept
// ---------------------------------------------------------------------------

template <class Tag>
class FiniteVector {
 public:
  FiniteVector() = default;

  explicit FiniteVector(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) {
      if (!std::isfinite(v)) {
        throw InvalidArgument(std::string(Tag::name) + ": non-finite entry");
      }
    }
  }

  FiniteVector(std::initializer_list<double> values)
      : FiniteVector(std::vector<double>(values)) {}

  [[nodiscard]] std::size_t dim() const noexcept { return values_.size(); }
  [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
  [[nodiscard]] std::span<const double> span() const noexcept { return values_; }

  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  friend bool operator==(const FiniteVector&, const FiniteVector&) = default;

 private:
  std::vector<double> values_;
};

struct StateTag {
  static constexpr const char* name = "StateVector";
};
struct ActionTag {
  static constexpr const char* name = "ActionVector";
};
struct ParamTag {
  static constexpr const char* name = "ParamVector";
};

// Observation of the system at one step. Mixed units: turret angles in
// radians, boss coordinates in meters.
using StateVector = FiniteVector<StateTag>;
// Desired turret angles, radians.
using ActionVector = FiniteVector<ActionTag>;
// Environment distribution parameters (turret angular-velocity limits).
using ParamVector = FiniteVector<ParamTag>;

// Fixed-length sequence of states sharing one dimension.
class Trajectory {
 public:
  Trajectory() = default;

  explicit Trajectory(std::vector<StateVector> states) : states_(std::move(states)) {
    for (const auto& s : states_) {
      if (s.dim() != states_.front().dim()) {
        throw InvalidArgument("Trajectory: states differ in dimension");
      }
    }
  }

  void push_back(StateVector s) {
    if (!states_.empty() && s.dim() != states_.front().dim()) {
      throw InvalidArgument("Trajectory: states differ in dimension");
    }
    states_.push_back(std::move(s));
  }

  [[nodiscard]] std::size_t length() const noexcept { return states_.size(); }
  [[nodiscard]] bool empty() const noexcept { return states_.empty(); }
  [[nodiscard]] std::size_t dim() const noexcept {
    return states_.empty() ? 0 : states_.front().dim();
  }
  [[nodiscard]] const StateVector& operator[](std::size_t i) const { return states_[i]; }
  [[nodiscard]] const std::vector<StateVector>& states() const noexcept { return states_; }

  auto begin() const noexcept { return states_.begin(); }
  auto end() const noexcept { return states_.end(); }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;

 private:
  std::vector<StateVector> states_;
};

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

// Counter-based random stream. A draw is a pure function of
// (seed, stream_id, position), so streams are plain values: advancing returns
// a new stream and the same triple yields the same bits on every platform.
class SeedStream {
 public:
  constexpr SeedStream() noexcept = default;
  constexpr SeedStream(std::uint64_t seed, std::uint64_t stream_id,
                       std::uint64_t position = 0) noexcept
      : seed_(seed), stream_id_(stream_id), position_(position) {}

  [[nodiscard]] constexpr std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] constexpr std::uint64_t stream_id() const noexcept { return stream_id_; }
  [[nodiscard]] constexpr std::uint64_t position() const noexcept { return position_; }

  // Independent sub-stream keyed by `key`, starting at position 0.
  [[nodiscard]] constexpr SeedStream child(std::uint64_t key) const noexcept {
    return {seed_, detail::splitmix64(stream_id_ ^ detail::splitmix64(key + 0x632BE59BD9B4E019ULL)), 0};
  }

  [[nodiscard]] constexpr std::uint64_t bits() const noexcept {
    const std::uint64_t key =
        detail::splitmix64(seed_ ^ detail::splitmix64(stream_id_ ^ 0xD1B54A32D192ED03ULL));
    return detail::splitmix64(key + position_ * 0x9E3779B97F4A7C15ULL);
  }

  [[nodiscard]] constexpr SeedStream advanced(std::uint64_t n = 1) const noexcept {
    return {seed_, stream_id_, position_ + n};
  }

  friend constexpr bool operator==(const SeedStream&, const SeedStream&) = default;

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  std::uint64_t position_ = 0;
};

template <class T>
struct Draw {
  T value;
  SeedStream next;
};

// Uniform real in [0, 1) with 53 random bits.
[[nodiscard]] constexpr Draw<double> next_uniform(SeedStream stream) noexcept {
  const double u = static_cast<double>(stream.bits() >> 11) * 0x1.0p-53;
  return {u, stream.advanced()};
}

// Box-Muller on two uniforms; the sine branch is discarded so every draw
// consumes exactly two positions.
[[nodiscard]] inline Draw<double> next_gaussian(SeedStream stream, double mean,
                                                double stddev) {
  if (!(stddev > 0.0) || !std::isfinite(stddev)) {
    throw InvalidArgument("next_gaussian: stddev must be positive");
  }
  auto [u1, s1] = next_uniform(stream);
  auto [u2, s2] = next_uniform(s1);
  const double radius = std::sqrt(-2.0 * std::log1p(-u1));
  const double z = radius * std::cos(2.0 * std::numbers::pi * u2);
  return {mean + stddev * z, s2};
}

// Stateful convenience cursor over a SeedStream for code that draws many
// values in sequence.
class StreamCursor {
 public:
  explicit StreamCursor(SeedStream s) noexcept : stream_(s) {}

  double uniform() noexcept {
    auto d = next_uniform(stream_);
    stream_ = d.next;
    return d.value;
  }

  double gaussian(double mean, double stddev) {
    auto d = next_gaussian(stream_, mean, stddev);
    stream_ = d.next;
    return d.value;
  }

  // Uniform integer in [0, n).
  std::size_t index(std::size_t n) noexcept {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

  [[nodiscard]] SeedStream stream() const noexcept { return stream_; }

 private:
  SeedStream stream_;
};

// Roles for hierarchical stream splitting: root -> role -> iteration -> rollout.
enum class StreamRole : std::uint64_t {
  kEnvironmentNoise = 1,
  kPolicySampling = 2,
  kGaVariation = 3,
  kPolicyInit = 4,
  kGaInit = 5,
};

[[nodiscard]] constexpr SeedStream role_stream(SeedStream root, StreamRole role) noexcept {
  return root.child(static_cast<std::uint64_t>(role));
}

}  // namespace dtwin
