#ifndef EDGEOFFLOAD_TYPES_HPP_
#define EDGEOFFLOAD_TYPES_HPP_

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace edgeoffload {

using Cost = double;

// Typed errors so callers and tests can tell contract violations apart.
class InvalidDecisionError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
class InvalidArrivalError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
class CurveDomainError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
class InvalidStatePairError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
class PolicyContractError : public std::logic_error {
  using std::logic_error::logic_error;
};
class InferenceUnavailableError : public std::logic_error {
  using std::logic_error::logic_error;
};
class OracleCapError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Buffer occupancy by residual deadline. Component d (1-based) counts the
// queued tasks that expire after d more slots. Deadlines run 1..size().
class SystemState {
 public:
  static constexpr int kMaxDeadline = 16;

  SystemState() = default;

  // Zero state with `deadlines` buckets.
  explicit SystemState(int deadlines) {
    check_dims(deadlines);
    n_ = static_cast<std::int8_t>(deadlines);
  }

  SystemState(std::initializer_list<int> counts)
      : SystemState(std::span<const int>(counts.begin(), counts.size())) {}

  explicit SystemState(std::span<const int> counts) {
    check_dims(static_cast<int>(counts.size()));
    n_ = static_cast<std::int8_t>(counts.size());
    for (int d = 1; d <= n_; ++d) {
      const int c = counts[static_cast<std::size_t>(d - 1)];
      if (c < 0) throw std::invalid_argument("task count must be non-negative");
      if (c > 0xFFFF) throw std::invalid_argument("task count too large");
      c_[static_cast<std::size_t>(d - 1)] = static_cast<std::uint16_t>(c);
    }
  }

  int size() const { return n_; }

  int at(int deadline) const {
    check_deadline(deadline);
    return c_[static_cast<std::size_t>(deadline - 1)];
  }

  void set(int deadline, int count) {
    check_deadline(deadline);
    if (count < 0) throw std::invalid_argument("task count must be non-negative");
    c_[static_cast<std::size_t>(deadline - 1)] = static_cast<std::uint16_t>(count);
  }

  int total() const {
    int t = 0;
    for (int i = 0; i < n_; ++i) t += c_[static_cast<std::size_t>(i)];
    return t;
  }

  bool empty() const { return total() == 0; }

  // Smallest deadline with a queued task; 0 when the buffer is empty.
  int most_imminent_deadline() const {
    for (int d = 1; d <= n_; ++d)
      if (c_[static_cast<std::size_t>(d - 1)] > 0) return d;
    return 0;
  }

  std::vector<int> counts() const {
    std::vector<int> out(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) out[static_cast<std::size_t>(i)] = c_[static_cast<std::size_t>(i)];
    return out;
  }

  std::string to_string() const {
    std::string s = "(";
    for (int i = 0; i < n_; ++i) {
      if (i) s += ",";
      s += std::to_string(c_[static_cast<std::size_t>(i)]);
    }
    s += ")";
    return s;
  }

  friend bool operator==(const SystemState&, const SystemState&) = default;

  // Componentwise <=; both states must have the same dimension.
  bool dominated_by(const SystemState& other) const {
    if (n_ != other.n_) throw InvalidStatePairError("dimension mismatch");
    for (int i = 0; i < n_; ++i)
      if (c_[static_cast<std::size_t>(i)] > other.c_[static_cast<std::size_t>(i)]) return false;
    return true;
  }

  std::uint64_t hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
      h ^= v;
      h *= 1099511628211ull;
    };
    mix(static_cast<std::uint64_t>(n_));
    for (int i = 0; i < n_; ++i) mix(c_[static_cast<std::size_t>(i)]);
    return h;
  }

 private:
  static void check_dims(int n) {
    if (n < 1 || n > kMaxDeadline)
      throw std::invalid_argument("state dimension must be in [1, 16]");
  }
  void check_deadline(int d) const {
    if (d < 1 || d > n_) throw std::out_of_range("deadline out of range");
  }

  std::array<std::uint16_t, kMaxDeadline> c_{};
  std::int8_t n_ = 0;
};

struct SystemStateHash {
  std::size_t operator()(const SystemState& s) const { return s.hash(); }
};

// Random events realized in one slot. arrival_deadline == 0 means no arrival.
struct SlotOutcome {
  bool relay_present = false;
  int arrival_deadline = 0;
  bool local_service = false;
};

}  // namespace edgeoffload

#endif  // EDGEOFFLOAD_TYPES_HPP_
