#include "edgeoffload/lean_table.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "edgeoffload/reduction.hpp"

namespace edgeoffload {

namespace {

constexpr std::size_t kRegistryCap = 4'000'000;

SystemState truncate_beyond(const SystemState& s, int horizon) {
  if (horizon >= s.size()) return s;
  SystemState out = s;
  for (int d = horizon + 1; d <= s.size(); ++d) out.set(d, 0);
  return out;
}

}  // namespace

LeanTableSolver::LeanTableSolver(ModelParams params, int horizon, int threads)
    : params_(std::move(params)), horizon_(horizon), threads_(threads) {
  params_.validate();
  if (horizon_ < 1) throw std::invalid_argument("horizon must be >= 1");
  if (threads_ <= 0)
    threads_ = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

int LeanTableSolver::intern(const SystemState& s) {
  auto it = index_.find(s);
  if (it != index_.end()) return it->second;
  if (states_.size() >= kRegistryCap)
    throw std::runtime_error("lean state registry exceeded its cap");
  const auto id = static_cast<std::int32_t>(states_.size());
  states_.push_back(s);
  index_.emplace(s, id);
  return id;
}

void LeanTableSolver::add_root(const SystemState& s) {
  if (solved_) throw std::logic_error("roots must be added before solve()");
  roots_.push_back(s);
}

void LeanTableSolver::build_registry() {
  const int n = params_.max_deadline;
  const std::vector<SystemState> reduced = enumerate_reduced(n);
  for (const SystemState& s : reduced) {
    decision_ordinal_.emplace(s, static_cast<std::int32_t>(decision_ordinal_.size()));
    intern(s);
  }
  for (const SystemState& root : roots_) {
    const LeanDecomposition d = to_lean(root, horizon_, params_);
    intern(horizon_ < n ? truncate_beyond(d.lean, horizon_) : d.lean);
  }

  // Closure under most-imminent removal and under next-slot lean rewriting
  // for every horizon class the induction will use.
  std::deque<std::int32_t> queue;
  for (std::size_t i = 0; i < states_.size(); ++i)
    queue.push_back(static_cast<std::int32_t>(i));
  while (!queue.empty()) {
    const SystemState s = states_[static_cast<std::size_t>(queue.front())];
    queue.pop_front();

    const std::size_t before = states_.size();
    for (int count = 1; count <= s.total(); ++count)
      intern(offload_most_imminent(s, count));

    const SystemState shifted = shift_deadlines(s).state;
    for (int k = 0; k <= n; ++k) {
      if (params_.arrival[static_cast<std::size_t>(k)] == 0.0) continue;
      const SystemState arrived = add_arrival(shifted, k);
      for (const SystemState& child : {process_most_imminent(arrived), arrived}) {
        intern(to_lean(child, n, params_).lean);
        for (int h = 1; h < n; ++h)
          intern(truncate_beyond(to_lean(child, h, params_).lean, h));
      }
    }
    for (std::size_t i = before; i < states_.size(); ++i)
      queue.push_back(static_cast<std::int32_t>(i));
  }
}

void LeanTableSolver::build_stationary_transitions() {
  const std::size_t row = 2 * (static_cast<std::size_t>(params_.max_deadline) + 1);
  stationary_.assign(states_.size() * row, NextRef{});
  parallel_for(states_.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      transition_row(static_cast<int>(i), params_.max_deadline, &stationary_[i * row]);
  });

  chain_offset_.assign(states_.size() + 1, 0);
  for (std::size_t i = 0; i < states_.size(); ++i)
    chain_offset_[i + 1] = chain_offset_[i] + states_[i].total() + 1;
  chain_.assign(static_cast<std::size_t>(chain_offset_.back()), -1);
  parallel_for(states_.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const SystemState& s = states_[i];
      for (int count = 0; count <= s.total(); ++count) {
        const auto it = index_.find(offload_most_imminent(s, count));
        chain_[static_cast<std::size_t>(chain_offset_[i]) + static_cast<std::size_t>(count)] =
            it->second;
      }
    }
  });
}

void LeanTableSolver::transition_row(int i, int child_horizon, NextRef* out) const {
  const SystemState& s = states_[static_cast<std::size_t>(i)];
  const SystemState shifted = shift_deadlines(s).state;
  const int n = params_.max_deadline;
  for (int k = 0; k <= n; ++k) {
    NextRef served, unserved;
    if (params_.arrival[static_cast<std::size_t>(k)] != 0.0) {
      const SystemState arrived = add_arrival(shifted, k);
      const SystemState children[2] = {process_most_imminent(arrived), arrived};
      NextRef* refs[2] = {&served, &unserved};
      for (int b = 0; b < 2; ++b) {
        LeanDecomposition d = to_lean(children[b], child_horizon, params_);
        const SystemState key =
            child_horizon < n ? truncate_beyond(d.lean, child_horizon) : d.lean;
        const auto it = index_.find(key);
        if (it == index_.end())
          throw std::logic_error("lean registry is not closed under transitions");
        refs[b]->index = it->second;
        refs[b]->correction = d.correction;
      }
    }
    out[2 * k] = served;
    out[2 * k + 1] = unserved;
  }
}

void LeanTableSolver::parallel_for(
    std::size_t count, const std::function<void(std::size_t, std::size_t)>& body) const {
  const int workers = std::min<int>(threads_, static_cast<int>(count ? count : 1));
  if (workers <= 1) {
    body(0, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const std::size_t chunk = (count + static_cast<std::size_t>(workers) - 1) /
                            static_cast<std::size_t>(workers);
  for (int w = 0; w < workers; ++w) {
    const std::size_t lo = static_cast<std::size_t>(w) * chunk;
    const std::size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, &failure, &failure_mutex, lo, hi] {
      try {
        body(lo, hi);
      } catch (...) {
        std::scoped_lock lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void LeanTableSolver::solve() {
  if (solved_) return;
  build_registry();
  build_stationary_transitions();

  const std::size_t m = states_.size();
  const std::size_t row = 2 * (static_cast<std::size_t>(params_.max_deadline) + 1);
  const int n = params_.max_deadline;
  const double pa = params_.relay_prob;
  const double mu = params_.local_prob;

  decisions_.assign((static_cast<std::size_t>(horizon_) + 1) * decision_ordinal_.size(), 0);
  value_prev_.assign(m, 0.0);
  value_cur_.assign(m, 0.0);
  std::vector<Cost> future(m, 0.0);
  std::vector<NextRef> level_row;

  for (int h = 1; h <= horizon_; ++h) {
    // Expected next-slot cost-to-go of each state when nothing is offloaded.
    if (h == 1) {
      std::fill(future.begin(), future.end(), 0.0);
    } else {
      const bool stationary = (h - 1) >= n;
      if (!stationary) level_row.assign(m * row, NextRef{});
      parallel_for(m, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
          const NextRef* refs;
          if (stationary) {
            refs = &stationary_[i * row];
          } else {
            transition_row(static_cast<int>(i), h - 1, &level_row[i * row]);
            refs = &level_row[i * row];
          }
          Cost acc = 0.0;
          for (int k = 0; k <= n; ++k) {
            const double pk = params_.arrival[static_cast<std::size_t>(k)];
            if (pk == 0.0) continue;
            Cost branch = 0.0;
            if (mu > 0.0) {
              const NextRef& r = refs[2 * k];
              branch += mu * (value_prev_[static_cast<std::size_t>(r.index)] + r.correction);
            }
            if (mu < 1.0) {
              const NextRef& r = refs[2 * k + 1];
              branch += (1.0 - mu) * (value_prev_[static_cast<std::size_t>(r.index)] + r.correction);
            }
            acc += pk * branch;
          }
          future[i] = acc;
        }
      });
    }

    parallel_for(m, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        const SystemState& s = states_[i];
        const int total = s.total();
        const int floor = s.at(1);
        const std::int32_t* chain = &chain_[static_cast<std::size_t>(chain_offset_[i])];
        Cost best = 0.0;
        int best_count = floor;
        bool first = true;
        for (int count = floor; count <= total; ++count) {
          Cost v = params_.offload_cost * count +
                   params_.expiry_penalty * std::max(s.at(1) - count, 0) +
                   future[static_cast<std::size_t>(chain[count])];
          if (first || v <= best) {
            best = v;
            best_count = count;
            first = false;
          }
        }
        const Cost no_relay = params_.expiry_penalty * s.at(1) + future[i];
        value_cur_[i] = pa * best + (1.0 - pa) * no_relay;

        const auto ord = decision_ordinal_.find(s);
        if (ord != decision_ordinal_.end())
          decisions_[static_cast<std::size_t>(h) * decision_ordinal_.size() +
                     static_cast<std::size_t>(ord->second)] =
              static_cast<std::uint8_t>(best_count);
      }
    });
    std::swap(value_prev_, value_cur_);
  }
  solved_ = true;
}

int LeanTableSolver::decision(const SystemState& reduced, int horizon) const {
  if (!solved_) throw std::logic_error("solve() has not run");
  if (horizon < 1 || horizon > horizon_)
    throw std::invalid_argument("horizon outside the solved range");
  const SystemState key = truncate_beyond(reduced, horizon);
  const auto it = decision_ordinal_.find(key);
  if (it == decision_ordinal_.end())
    throw std::invalid_argument("state is not reduced: " + reduced.to_string());
  return decisions_[static_cast<std::size_t>(horizon) * decision_ordinal_.size() +
                    static_cast<std::size_t>(it->second)];
}

Cost LeanTableSolver::value_at_horizon(const SystemState& s) const {
  if (!solved_) throw std::logic_error("solve() has not run");
  LeanDecomposition d = to_lean(s, horizon_, params_);
  const SystemState key =
      horizon_ < params_.max_deadline ? truncate_beyond(d.lean, horizon_) : d.lean;
  const auto it = index_.find(key);
  if (it == index_.end())
    throw std::invalid_argument("state outside the solved registry: " + s.to_string());
  return value_prev_[static_cast<std::size_t>(it->second)] + d.correction;
}

}  // namespace edgeoffload
