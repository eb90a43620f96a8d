#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace degtherm {

using Index = Eigen::Index;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a model or operator.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A property that holds for the exact discrete scheme was observed to fail.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Worker count for window scans. Defaults to DEGTHERM_THREADS or 1.
int thread_count();
/// Overrides the environment; n <= 0 restores the environment default.
void set_thread_count(int n);

/// Runs body(k) for k in [0, n) on thread_count() workers with static
/// contiguous chunks. Each k must write only its own output slot.
template <typename Body>
void parallel_for(Index n, Body&& body) {
  const Index workers = std::min<Index>(std::max(1, thread_count()), n);
  if (workers <= 1) {
    for (Index k = 0; k < n; ++k) body(k);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const Index chunk = (n + workers - 1) / workers;
  for (Index w = 0; w < workers; ++w) {
    const Index lo = w * chunk;
    const Index hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (Index k = lo; k < hi; ++k) body(k);
    });
  }
  for (auto& t : pool) t.join();
}

/// Shortest decimal string that round-trips the double (17 significant digits).
std::string format_double(double v);

}  // namespace degtherm
