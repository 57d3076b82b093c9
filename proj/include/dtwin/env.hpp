#pragma once

// Parametric tower-defense environment F(s, a; theta) and the physical /
// digital instantiations used for twin calibration.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "dtwin/core.hpp"

namespace dtwin {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) noexcept { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) noexcept { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double k, Vec3 a) noexcept { return {k * a.x, k * a.y, k * a.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;

  [[nodiscard]] double norm() const noexcept { return std::sqrt(x * x + y * y + z * z); }
};

struct Box3 {
  Vec3 lo{0.0, 0.0, 0.0};
  Vec3 hi{100.0, 100.0, 100.0};

  [[nodiscard]] bool contains(Vec3 p) const noexcept {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z &&
           p.z <= hi.z;
  }
  [[nodiscard]] Vec3 clip(Vec3 p) const noexcept {
    return {std::clamp(p.x, lo.x, hi.x), std::clamp(p.y, lo.y, hi.y), std::clamp(p.z, lo.z, hi.z)};
  }
  [[nodiscard]] Vec3 center() const noexcept { return 0.5 * (lo + hi); }
};

// Turret pointing direction.
struct TurretAngles {
  double azimuth = 0.0;  // [-pi, pi)
  double pitch = 0.0;    // [-pi/2, pi/2]
  friend bool operator==(const TurretAngles&, const TurretAngles&) = default;
};

// Wraps an angle into [-pi, pi).
[[nodiscard]] inline double wrap_angle(double a) noexcept {
  if (a >= -std::numbers::pi && a < std::numbers::pi) return a;  // exact when already in range
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(a + std::numbers::pi, two_pi);
  if (r < 0.0) r += two_pi;
  r -= std::numbers::pi;
  return r >= std::numbers::pi ? -std::numbers::pi : r;
}

// Static description of a tower-defense scenario. Everything here is
// observable; only `true_theta` is hidden once wrapped in a PhysicalHandle.
struct TowerDefenseConfig {
  std::size_t bosses = 3;
  std::size_t turrets = 2;
  Box3 bounds{};
  double boss_speed = 1.0;          // meters per step
  double noise_scale = 0.05;        // per-axis stddev of boss motion noise, meters
  double turret_range = 10.0;       // meters
  double aim_tolerance = 0.05;      // radians
  // Bosses head for this point. Defaults to the middle of the bounds' west
  // floor edge (x = lo.x, y = mid, z = lo.z).
  std::optional<Vec3> base;
  // Default layout: turrets on the west floor edge, spread along y and
  // centered on the base, so every target lies at azimuth in [-pi/2, pi/2].
  double turret_spacing = 30.0;
  // Explicit turret positions override the default layout.
  std::vector<Vec3> turret_positions;
  ParamVector true_theta{0.2, 0.7};  // [azimuth rate, pitch rate], rad/step

  [[nodiscard]] std::size_t state_dim() const noexcept { return 2 * turrets + 3 * bosses; }

  [[nodiscard]] Vec3 base_point() const noexcept {
    if (base) return *base;
    return {bounds.lo.x, 0.5 * (bounds.lo.y + bounds.hi.y), bounds.lo.z};
  }

  [[nodiscard]] std::vector<Vec3> turret_layout() const {
    if (!turret_positions.empty()) {
      if (turret_positions.size() != turrets) {
        throw InvalidArgument("TowerDefenseConfig: turret_positions size != turrets");
      }
      return turret_positions;
    }
    std::vector<Vec3> out;
    out.reserve(turrets);
    const Vec3 b = base_point();
    for (std::size_t t = 0; t < turrets; ++t) {
      const double offset = (static_cast<double>(t) - 0.5 * static_cast<double>(turrets - 1)) * turret_spacing;
      out.push_back(bounds.clip({bounds.lo.x, b.y + offset, bounds.lo.z}));
    }
    return out;
  }

  void validate() const {
    if (!(boss_speed > 0.0)) throw InvalidArgument("boss_speed must be positive");
    if (!(noise_scale >= 0.0)) throw InvalidArgument("noise_scale must be non-negative");
    if (!(turret_range >= 0.0)) throw InvalidArgument("turret_range must be non-negative");
    if (!(aim_tolerance >= 0.0)) throw InvalidArgument("aim_tolerance must be non-negative");
    if (bounds.lo.x > bounds.hi.x || bounds.lo.y > bounds.hi.y || bounds.lo.z > bounds.hi.z) {
      throw InvalidArgument("bounds: lo must not exceed hi");
    }
    if (true_theta.dim() != 2 || true_theta[0] <= 0.0 || true_theta[1] <= 0.0) {
      throw InvalidArgument("true_theta must be two strictly positive rates");
    }
    (void)turret_layout();
  }
};

// Copy of `c` with the parameter slot replaced by a neutral placeholder, for
// handing the layout to components that must not see the true parameters.
[[nodiscard]] inline TowerDefenseConfig without_parameters(TowerDefenseConfig c) {
  c.true_theta = ParamVector{1.0, 1.0};
  return c;
}

struct TowerDefenseWorld {
  std::vector<Vec3> boss_positions;
  std::vector<Vec3> boss_destinations;
  std::vector<double> boss_speeds;
  std::vector<bool> boss_alive;
  std::vector<Vec3> turret_positions;
  std::vector<TurretAngles> turret_angles;
  Box3 bounds{};

  friend bool operator==(const TowerDefenseWorld&, const TowerDefenseWorld&) = default;
};

// Layout: all turret (azimuth, pitch) pairs, then all boss (x, y, z) triples.
// Dead bosses encode their last position.
[[nodiscard]] inline StateVector encode_state(const TowerDefenseWorld& world) {
  std::vector<double> v;
  v.reserve(2 * world.turret_angles.size() + 3 * world.boss_positions.size());
  for (const auto& a : world.turret_angles) {
    v.push_back(a.azimuth);
    v.push_back(a.pitch);
  }
  for (const auto& p : world.boss_positions) {
    v.push_back(p.x);
    v.push_back(p.y);
    v.push_back(p.z);
  }
  return StateVector(std::move(v));
}

// Rebuilds the encoded fields of `world` from `state`; unencoded fields
// (destinations, speeds, liveness, turret positions) are kept from `world`.
[[nodiscard]] inline TowerDefenseWorld decode_state(const StateVector& state,
                                                    TowerDefenseWorld world) {
  const std::size_t turrets = world.turret_angles.size();
  const std::size_t bosses = world.boss_positions.size();
  if (state.dim() != 2 * turrets + 3 * bosses) {
    throw InvalidArgument("decode_state: expected dim " + std::to_string(2 * turrets + 3 * bosses) +
                          ", got " + std::to_string(state.dim()));
  }
  for (std::size_t t = 0; t < turrets; ++t) {
    world.turret_angles[t] = {state[2 * t], state[2 * t + 1]};
  }
  const std::size_t off = 2 * turrets;
  for (std::size_t b = 0; b < bosses; ++b) {
    world.boss_positions[b] = {state[off + 3 * b], state[off + 3 * b + 1], state[off + 3 * b + 2]};
  }
  return world;
}

// Decodes against a configuration: turrets at the configured layout, bosses
// alive and heading for the base.
[[nodiscard]] inline TowerDefenseWorld decode_state(const StateVector& state,
                                                    const TowerDefenseConfig& config) {
  TowerDefenseWorld w;
  w.bounds = config.bounds;
  w.turret_positions = config.turret_layout();
  w.turret_angles.assign(config.turrets, {});
  w.boss_positions.assign(config.bosses, {});
  w.boss_destinations.assign(config.bosses, config.base_point());
  w.boss_speeds.assign(config.bosses, config.boss_speed);
  w.boss_alive.assign(config.bosses, true);
  return decode_state(state, std::move(w));
}

// Angle between the pointing direction `a` and the line from `from` to `to`.
[[nodiscard]] inline double aim_error(TurretAngles a, Vec3 from, Vec3 to) noexcept {
  const Vec3 d = to - from;
  const double n = d.norm();
  if (n == 0.0) return 0.0;
  const Vec3 u{std::cos(a.pitch) * std::cos(a.azimuth), std::cos(a.pitch) * std::sin(a.azimuth),
               std::sin(a.pitch)};
  const Vec3 v = (1.0 / n) * d;
  const Vec3 c{u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x};
  const double dot = u.x * v.x + u.y * v.y + u.z * v.z;
  return std::atan2(c.norm(), dot);
}

// One observation handed to the strategy: the encoded state plus the
// liveness mask, which the state layout does not carry.
struct Observation {
  StateVector state;
  std::vector<bool> alive;
};

// Environment contract shared by physical and digital instances.
template <class E>
concept ParametricEnvironment = requires(E env, const E cenv, const StateVector& s,
                                         const ActionVector& a, SeedStream stream) {
  { env.reset(stream) } -> std::same_as<StateVector>;
  { env.step(s, a, stream) } -> std::same_as<StateVector>;
  { cenv.observe() } -> std::same_as<Observation>;
  { cenv.config() } -> std::convertible_to<const TowerDefenseConfig&>;
};

// Tower-defense dynamics with settable angular-velocity limits. This is the
// digital instance; PhysicalHandle wraps one with the hidden parameters.
class TowerDefenseEnv {
 public:
  explicit TowerDefenseEnv(TowerDefenseConfig config)
      : TowerDefenseEnv(std::move(config), std::nullopt) {}

  TowerDefenseEnv(TowerDefenseConfig config, const ParamVector& theta)
      : TowerDefenseEnv(std::move(config), std::optional<ParamVector>(theta)) {}

  void set_params(const ParamVector& theta) {
    check_theta(theta);
    theta_ = theta;
  }

  [[nodiscard]] const ParamVector& params() const noexcept { return theta_; }
  [[nodiscard]] const TowerDefenseConfig& config() const noexcept { return config_; }
  [[nodiscard]] const TowerDefenseWorld& world() const noexcept { return world_; }

  // Draws boss positions uniformly inside the bounds; turret angles zeroed.
  StateVector reset(SeedStream stream) {
    StreamCursor rng(stream);
    const Box3& bx = config_.bounds;
    world_.bounds = bx;
    world_.turret_positions = config_.turret_layout();
    world_.turret_angles.assign(config_.turrets, {});
    world_.boss_positions.clear();
    for (std::size_t b = 0; b < config_.bosses; ++b) {
      const double x = bx.lo.x + (bx.hi.x - bx.lo.x) * rng.uniform();
      const double y = bx.lo.y + (bx.hi.y - bx.lo.y) * rng.uniform();
      const double z = bx.lo.z + (bx.hi.z - bx.lo.z) * rng.uniform();
      world_.boss_positions.push_back({x, y, z});
    }
    world_.boss_destinations.assign(config_.bosses, config_.base_point());
    world_.boss_speeds.assign(config_.bosses, config_.boss_speed);
    world_.boss_alive.assign(config_.bosses, true);
    return encode_state(world_);
  }

  // Advances one step. `s` supplies the encoded fields; liveness and
  // destinations come from the episode in progress. Noise for boss b is drawn
  // from stream.child(b), so liveness changes never shift other bosses' noise.
  StateVector step(const StateVector& s, const ActionVector& a, SeedStream stream) {
    if (a.dim() != 2 * config_.turrets) {
      throw InvalidArgument("step: action dim " + std::to_string(a.dim()) + ", expected " +
                            std::to_string(2 * config_.turrets));
    }
    if (world_.boss_alive.size() != config_.bosses) {
      throw InvalidArgument("step: environment has not been reset");
    }
    world_ = decode_state(s, std::move(world_));

    constexpr double half_pi = std::numbers::pi / 2.0;
    for (std::size_t t = 0; t < config_.turrets; ++t) {
      auto& ang = world_.turret_angles[t];
      const double az_cmd = a[2 * t];
      const double pitch_cmd = std::clamp(a[2 * t + 1], -half_pi, half_pi);
      const double daz = std::clamp(wrap_angle(az_cmd - ang.azimuth), -theta_[0], theta_[0]);
      const double dpitch = std::clamp(pitch_cmd - ang.pitch, -theta_[1], theta_[1]);
      ang.azimuth = wrap_angle(ang.azimuth + daz);
      ang.pitch = std::clamp(ang.pitch + dpitch, -half_pi, half_pi);
    }

    for (std::size_t b = 0; b < config_.bosses; ++b) {
      if (!world_.boss_alive[b]) continue;
      Vec3& p = world_.boss_positions[b];
      const Vec3 to_dest = world_.boss_destinations[b] - p;
      const double dist = to_dest.norm();
      const double speed = world_.boss_speeds[b];
      p = dist <= speed ? world_.boss_destinations[b] : p + (speed / dist) * to_dest;
      if (config_.noise_scale > 0.0) {
        StreamCursor rng(stream.child(b));
        p.x += rng.gaussian(0.0, config_.noise_scale);
        p.y += rng.gaussian(0.0, config_.noise_scale);
        p.z += rng.gaussian(0.0, config_.noise_scale);
      }
      p = world_.bounds.clip(p);
    }

    for (std::size_t b = 0; b < config_.bosses; ++b) {
      if (!world_.boss_alive[b]) continue;
      for (std::size_t t = 0; t < config_.turrets; ++t) {
        const Vec3 from = world_.turret_positions[t];
        const Vec3 to = world_.boss_positions[b];
        if ((to - from).norm() < config_.turret_range &&
            aim_error(world_.turret_angles[t], from, to) < config_.aim_tolerance) {
          world_.boss_alive[b] = false;
          break;
        }
      }
    }
    return encode_state(world_);
  }

  [[nodiscard]] Observation observe() const {
    return {encode_state(world_), world_.boss_alive};
  }

 private:
  TowerDefenseEnv(TowerDefenseConfig config, std::optional<ParamVector> theta)
      : config_(std::move(config)) {
    config_.validate();
    theta_ = theta ? *theta : config_.true_theta;
    check_theta(theta_);
  }

  static void check_theta(const ParamVector& theta) {
    if (theta.dim() != 2) throw InvalidArgument("set_params: theta must have dim 2");
    if (theta[0] <= 0.0 || theta[1] <= 0.0) {
      throw InvalidArgument("set_params: theta entries must be strictly positive");
    }
  }

  TowerDefenseConfig config_;
  ParamVector theta_;
  TowerDefenseWorld world_;
};

// Interaction-only wrapper around the physical system. The wrapped
// parameters cannot be read or replaced through this interface.
class PhysicalHandle {
 public:
  explicit PhysicalHandle(TowerDefenseConfig config,
                          std::optional<std::uint64_t> budget = std::nullopt)
      : env_(without_parameters(config), config.true_theta), budget_(budget) {}

  StateVector reset(SeedStream stream) { return env_.reset(stream); }

  StateVector step(const StateVector& s, const ActionVector& a, SeedStream stream) {
    if (budget_) {
      if (*budget_ == 0) throw BudgetExhausted("physical environment: interaction budget exhausted");
      --*budget_;
    }
    return env_.step(s, a, stream);
  }

  [[noreturn]] void set_params(const ParamVector&) {
    throw AccessDenied("physical environment parameters cannot be set");
  }

  [[nodiscard]] Observation observe() const { return env_.observe(); }
  // The returned configuration carries a placeholder in place of the hidden
  // parameters.
  [[nodiscard]] const TowerDefenseConfig& config() const noexcept { return env_.config(); }
  [[nodiscard]] std::optional<std::uint64_t> remaining_budget() const noexcept { return budget_; }

 private:
  // env_.config() holds the redacted copy; the real parameters live only in
  // env_'s private parameter slot.
  TowerDefenseEnv env_;
  std::optional<std::uint64_t> budget_;
};

static_assert(ParametricEnvironment<TowerDefenseEnv>);
static_assert(ParametricEnvironment<PhysicalHandle>);

}  // namespace dtwin
