#pragma once

#include "dlpad/model.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace dlpad {

/// Occupations of a ring of L sites, at most one particle per site.
class LatticeState {
 public:
  explicit LatticeState(int L);
  LatticeState(std::vector<std::uint8_t> occupation);

  int size() const { return static_cast<int>(occ_.size()); }
  int particles() const { return particles_; }
  Sector parity() const { return particles_ % 2 == 0 ? Sector::even : Sector::odd; }
  bool occupied(int k) const { return occ_[k] != 0; }
  const std::vector<std::uint8_t>& occupation() const { return occ_; }

  /// Flips sites k and k+1 (mod L).
  void flip_bond(int k);
  /// eta_k + eta_{k+1}
  int bond_occupation(int k) const;

 private:
  std::vector<std::uint8_t> occ_;
  int particles_ = 0;
};

/// SplitMix64 finalizer, used to derive replica streams.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of replica i: splitmix64(seed + (i + 1) * 0x9E3779B97F4A7C15).
std::uint64_t replica_seed(std::uint64_t seed, int replica);

/// std::mt19937_64 with hand-written transforms, so streams do not depend on
/// the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// (x >> 11) * 2^-53, in [0, 1).
  double uniform();
  /// -log1p(-u) / rate.
  double exponential(double rate);

 private:
  std::mt19937_64 engine_;
};

enum class EventType { deposition, annihilation, hop };

struct Event {
  int bond = 0;
  EventType type = EventType::deposition;
  bool jump = false;  // counted in the activity
  double dt = 0;
};

struct TrajectoryStats {
  double time = 0;         // length of the measurement window
  double burn_in = 0;      // discarded initial time
  std::uint64_t activity = 0;        // jumps inside the window
  std::uint64_t activity_total = 0;  // jumps including burn-in, A(t_max)
  std::uint64_t steps = 0;
  std::uint64_t depositions = 0;
  std::uint64_t annihilations = 0;
  std::uint64_t hops = 0;
  std::uint64_t silent = 0;
  std::vector<double> occupation_time;  // per site, inside the window
  std::array<double, 3> bond_class_time{};  // bond-time with eta_k + eta_{k+1} = 0, 1, 2
  Sector initial_parity = Sector::even;
  Sector final_parity = Sector::even;

  double density() const;
  /// A / (L t) over the window.
  double activity_rate() const;
  /// Fraction of bond-time in class 0 (empty pair) and 2 (full pair).
  double pair_fraction(int occupation) const;
};

/// Continuous-time Monte Carlo of the untilted process. Bonds are kept in
/// three lists by occupation sum so that an event costs O(1).
class KineticMonteCarlo {
 public:
  KineticMonteCarlo(const ModelParams& p, LatticeState state, std::uint64_t seed);

  /// Draws the waiting time and the firing bond without changing the state.
  Event draw();
  void apply(const Event& ev);
  Event step();

  const LatticeState& state() const { return state_; }
  double total_rate() const;
  /// O(L) recomputation, for bookkeeping checks.
  double recompute_total_rate() const;
  std::array<int, 3> class_sizes() const;
  Rng& rng() { return rng_; }

 private:
  void place(int bond);
  void remove(int bond);

  ModelParams p_;
  LatticeState state_;
  Rng rng_;
  std::array<double, 3> class_rate_;
  std::array<std::vector<int>, 3> members_;
  std::vector<int> class_of_;
  std::vector<int> slot_;
};

/// Bernoulli(rho) product configuration, rho = stationary_density(p).
LatticeState sample_product_state(const ModelParams& p, int L, Rng& rng);

/// One trajectory on [0, t_max]; statistics are taken over [burn_in, t_max].
TrajectoryStats run_trajectory(const ModelParams& p, int L, double t_max, std::uint64_t seed,
                               double burn_in_fraction = 0.1);

struct Estimate {
  double mean = 0;
  double std_error = 0;
};

/// Mean and standard error of independent samples.
Estimate estimate(std::span<const double> samples);

struct SimulationResult {
  std::vector<TrajectoryStats> replicas;
  Estimate density;
  Estimate activity_rate;
};

/// Independent replicas run concurrently and reduced in replica order, so the
/// result depends only on the arguments.
SimulationResult simulate(const ModelParams& p, int L, double t_max, std::uint64_t seed, int replicas,
                          double burn_in_fraction = 0.1);

}  // namespace dlpad
