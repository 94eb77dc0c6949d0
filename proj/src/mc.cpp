#include "dlpad/mc.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>

namespace dlpad {

LatticeState::LatticeState(int L) : occ_(static_cast<std::size_t>(L), 0) { require_even_size(L); }

LatticeState::LatticeState(std::vector<std::uint8_t> occupation) : occ_(std::move(occupation)) {
  require_even_size(size());
  for (auto& v : occ_) {
    if (v > 1) throw std::invalid_argument("LatticeState: occupations must be 0 or 1");
    particles_ += v;
  }
}

void LatticeState::flip_bond(int k) {
  const int k1 = (k + 1) % size();
  for (int site : {k, k1}) {
    particles_ += occ_[site] ? -1 : 1;
    occ_[site] ^= 1u;
  }
}

int LatticeState::bond_occupation(int k) const { return occ_[k] + occ_[(k + 1) % size()]; }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t replica_seed(std::uint64_t seed, int replica) {
  return splitmix64(seed + static_cast<std::uint64_t>(replica + 1) * 0x9E3779B97F4A7C15ull);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::exponential(double rate) { return -std::log1p(-uniform()) / rate; }

double TrajectoryStats::density() const {
  double total = 0.0;
  for (double t : occupation_time) total += t;
  return total / (time * static_cast<double>(occupation_time.size()));
}

double TrajectoryStats::activity_rate() const {
  return static_cast<double>(activity) / (time * static_cast<double>(occupation_time.size()));
}

double TrajectoryStats::pair_fraction(int occupation) const {
  if (occupation < 0 || occupation > 2) throw std::out_of_range("pair_fraction: occupation in {0,1,2}");
  return bond_class_time[occupation] / (time * static_cast<double>(occupation_time.size()));
}

KineticMonteCarlo::KineticMonteCarlo(const ModelParams& p, LatticeState state, std::uint64_t seed)
    : p_(p), state_(std::move(state)), rng_(seed) {
  class_rate_ = {p.mu(), p.mu() + p.w(), p.mu() + 2.0 * p.w()};
  const int L = state_.size();
  class_of_.assign(L, -1);
  slot_.assign(L, -1);
  for (int k = 0; k < L; ++k) place(k);
}

void KineticMonteCarlo::place(int bond) {
  const int c = state_.bond_occupation(bond);
  class_of_[bond] = c;
  slot_[bond] = static_cast<int>(members_[c].size());
  members_[c].push_back(bond);
}

void KineticMonteCarlo::remove(int bond) {
  auto& list = members_[class_of_[bond]];
  const int last = list.back();
  list[slot_[bond]] = last;
  slot_[last] = slot_[bond];
  list.pop_back();
  class_of_[bond] = -1;
}

double KineticMonteCarlo::total_rate() const {
  double total = 0.0;
  for (int c = 0; c < 3; ++c) total += class_rate_[c] * static_cast<double>(members_[c].size());
  return total;
}

double KineticMonteCarlo::recompute_total_rate() const {
  double total = 0.0;
  for (int k = 0; k < state_.size(); ++k) total += p_.mu() + p_.w() * state_.bond_occupation(k);
  return total;
}

std::array<int, 3> KineticMonteCarlo::class_sizes() const {
  return {static_cast<int>(members_[0].size()), static_cast<int>(members_[1].size()),
          static_cast<int>(members_[2].size())};
}

Event KineticMonteCarlo::draw() {
  const double total = total_rate();
  Event ev;
  ev.dt = rng_.exponential(total);

  std::array<double, 3> weight{};
  for (int c = 0; c < 3; ++c) weight[c] = class_rate_[c] * static_cast<double>(members_[c].size());
  double pick = rng_.uniform() * total;
  int cls = 0;
  while (cls < 2 && (pick >= weight[cls] || members_[cls].empty())) {
    pick -= weight[cls];
    ++cls;
  }
  while (members_[cls].empty()) --cls;  // rounding at the top end
  const auto& list = members_[cls];
  const auto idx = std::min(static_cast<std::size_t>(rng_.uniform() * static_cast<double>(list.size())),
                            list.size() - 1);
  ev.bond = list[idx];

  ev.type = cls == 0 ? EventType::deposition : cls == 2 ? EventType::annihilation : EventType::hop;
  // silent with probability mu / w_k
  ev.jump = rng_.uniform() * class_rate_[cls] >= p_.mu();
  return ev;
}

void KineticMonteCarlo::apply(const Event& ev) {
  const int L = state_.size();
  const int k = ev.bond;
  std::array<int, 3> touched{(k + L - 1) % L, k, (k + 1) % L};
  std::sort(touched.begin(), touched.end());
  const auto end = std::unique(touched.begin(), touched.end());
  for (auto it = touched.begin(); it != end; ++it) remove(*it);
  state_.flip_bond(k);
  for (auto it = touched.begin(); it != end; ++it) place(*it);
}

Event KineticMonteCarlo::step() {
  const Event ev = draw();
  apply(ev);
  return ev;
}

LatticeState sample_product_state(const ModelParams& p, int L, Rng& rng) {
  const double rho = stationary_density(p);
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(L));
  for (auto& v : occ) v = rng.uniform() < rho ? 1 : 0;
  return LatticeState(std::move(occ));
}

TrajectoryStats run_trajectory(const ModelParams& p, int L, double t_max, std::uint64_t seed,
                               double burn_in_fraction) {
  require_even_size(L);
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("t_max must be finite and > 0");
  if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0))
    throw std::invalid_argument("burn-in fraction must be in [0, 1)");

  Rng init(seed);
  LatticeState start = sample_product_state(p, L, init);
  KineticMonteCarlo mc(p, start, splitmix64(seed));

  TrajectoryStats st;
  st.burn_in = burn_in_fraction * t_max;
  st.time = t_max - st.burn_in;
  st.occupation_time.assign(L, 0.0);
  st.initial_parity = start.parity();

  // Sites are integrated lazily: a site's occupation is credited up to the
  // time it flips, clipped to the window [burn_in, t_max].
  std::vector<double> last(static_cast<std::size_t>(L), 0.0);
  auto credit = [&](int site, double until) {
    if (mc.state().occupied(site)) {
      const double lo = std::max(last[site], st.burn_in);
      if (until > lo) st.occupation_time[site] += until - lo;
    }
    last[site] = until;
  };

  double t = 0.0;
  while (true) {
    const std::array<int, 3> sizes = mc.class_sizes();
    const Event ev = mc.draw();
    const double t_next = std::min(t + ev.dt, t_max);
    const double lo = std::max(t, st.burn_in);
    if (t_next > lo)
      for (int c = 0; c < 3; ++c) st.bond_class_time[c] += (t_next - lo) * sizes[c];
    if (t + ev.dt >= t_max) break;
    t += ev.dt;
    credit(ev.bond, t);
    credit((ev.bond + 1) % L, t);
    mc.apply(ev);
    ++st.steps;
    switch (ev.type) {
      case EventType::deposition:
        ++st.depositions;
        break;
      case EventType::annihilation:
        ++st.annihilations;
        break;
      case EventType::hop:
        ++st.hops;
        break;
    }
    if (ev.jump) {
      ++st.activity_total;
      if (t >= st.burn_in) ++st.activity;
    } else {
      ++st.silent;
    }
  }
  for (int site = 0; site < L; ++site) credit(site, t_max);
  st.final_parity = mc.state().parity();
  return st;
}

Estimate estimate(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("estimate: no samples");
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= n;
  if (samples.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

SimulationResult simulate(const ModelParams& p, int L, double t_max, std::uint64_t seed, int replicas,
                          double burn_in_fraction) {
  require_even_size(L);
  if (replicas < 1) throw std::invalid_argument("simulate: need at least one replica");
  SimulationResult out;
  out.replicas.resize(replicas);

  const unsigned workers =
      std::max(1u, std::min(static_cast<unsigned>(replicas), std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned wkr = 0; wkr < workers; ++wkr) {
    pool.emplace_back([&, wkr] {
      try {
        for (int i = static_cast<int>(wkr); i < replicas; i += static_cast<int>(workers))
          out.replicas[i] = run_trajectory(p, L, t_max, replica_seed(seed, i), burn_in_fraction);
      } catch (...) {
        errors[wkr] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<double> dens, act;
  for (const TrajectoryStats& st : out.replicas) {
    dens.push_back(st.density());
    act.push_back(st.activity_rate());
  }
  out.density = estimate(dens);
  out.activity_rate = estimate(act);
  return out;
}

}  // namespace dlpad
