#include <algorithm>
#include <exception>
#include <thread>

#include "mills/verify.hpp"

namespace mills {

OracleTable build_oracle_table(std::vector<double> xs, double oracle_tol,
                               unsigned threads) {
  OracleTable table;
  table.tolerance = oracle_tol;
  table.values.resize(xs.size());
  table.error_bounds.resize(xs.size());
  table.xs = std::move(xs);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n = table.xs.size();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));

  auto work = [&table, oracle_tol](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Evaluation e = oracle_v(table.xs[i], oracle_tol);
      table.values[i] = e.value;
      table.error_bounds[i] = e.abs_error_bound;
    }
  };

  if (threads <= 1) {
    work(0, n);
    return table;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = n * t / threads;
      const std::size_t end = n * (t + 1) / threads;
      pool.emplace_back([&, t, begin, end] {
        try {
          work(begin, end);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return table;
}

}  // namespace mills
