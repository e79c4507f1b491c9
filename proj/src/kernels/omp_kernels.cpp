#include "digitlens/kernels.hpp"
#include "tree_walk.hpp"

#include <omp.h>

#include <exception>

namespace digitlens::kernels {

namespace detail {
std::pair<double, double> transform_term(const DigitTable& t, const double* x, double tol, int power);
}

namespace omp {
namespace {

// Fixed chunking keeps floating-point reductions independent of the thread count.
constexpr std::int64_t kChunk = 4096;
constexpr std::size_t kFrontier = 64;

class ErrorSlot {
 public:
  template <class F>
  void run(F&& f) {
    try {
      f();
    } catch (...) {
#pragma omp critical(digitlens_error_slot)
      if (!err_) err_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (err_) std::rethrow_exception(err_);
  }

 private:
  std::exception_ptr err_;
};

}  // namespace

std::vector<double> f_batch(const DigitTable& t, std::span<const double> thetas) {
  const auto n = static_cast<std::size_t>(t.dim);
  const auto count = static_cast<std::int64_t>(thetas.size() / n);
  std::vector<double> out(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = f_eval(t, thetas.data() + static_cast<std::size_t>(i) * n);
  }
  return out;
}

std::vector<FBox> f_box_batch(const DigitTable& t, std::span<const double> centres, double half) {
  const auto n = static_cast<std::size_t>(t.dim);
  const auto count = static_cast<std::int64_t>(centres.size() / n);
  std::vector<FBox> out(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = f_box(t, centres.data() + static_cast<std::size_t>(i) * n, half);
  }
  return out;
}

double grid_max(const DigitTable& t, int m, std::vector<double>& argmax) {
  std::int64_t total = 1;
  for (int a = 0; a < t.dim; ++a) total *= m;
  const std::int64_t chunks = (total + kChunk - 1) / kChunk;
  std::vector<double> best(static_cast<std::size_t>(chunks), -1.0);
  std::vector<std::int64_t> where(static_cast<std::size_t>(chunks), 0);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < chunks; ++c) {
    double th[kMaxDim];
    const std::int64_t end = std::min(total, (c + 1) * kChunk);
    for (std::int64_t i = c * kChunk; i < end; ++i) {
      std::int64_t r = i;
      for (int a = 0; a < t.dim; ++a) {
        th[a] = static_cast<double>(r % m) / m;
        r /= m;
      }
      const double v = f_eval(t, th);
      if (v > best[static_cast<std::size_t>(c)]) {
        best[static_cast<std::size_t>(c)] = v;
        where[static_cast<std::size_t>(c)] = i;
      }
    }
  }
  double b = -1.0;
  std::int64_t bi = 0;
  for (std::size_t c = 0; c < best.size(); ++c) {
    if (best[c] > b) {
      b = best[c];
      bi = where[c];
    }
  }
  argmax.assign(static_cast<std::size_t>(t.dim), 0.0);
  for (int a = 0; a < t.dim; ++a) {
    argmax[static_cast<std::size_t>(a)] = static_cast<double>(bi % m) / m;
    bi /= m;
  }
  return b;
}

TermSum partial_sum(const DigitTable& t, int k, std::span<const double> theta, double term_tol, int power) {
  const std::int64_t side = checked_pow(t.base, k);
  std::int64_t total = 1;
  for (int a = 0; a < t.dim; ++a) total *= side;
  const std::int64_t chunks = (total + kChunk - 1) / kChunk;
  std::vector<double> vals(static_cast<std::size_t>(chunks), 0.0), errs(static_cast<std::size_t>(chunks), 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < chunks; ++c) {
    double x[kMaxDim];
    double v = 0.0, e = 0.0;
    const std::int64_t end = std::min(total, (c + 1) * kChunk);
    for (std::int64_t i = c * kChunk; i < end; ++i) {
      std::int64_t r = i;
      for (int a = 0; a < t.dim; ++a) {
        x[a] = static_cast<double>(r % side) + theta[static_cast<std::size_t>(a)];
        r /= side;
      }
      auto [tv, te] = detail::transform_term(t, x, term_tol, power);
      v += tv;
      e += te;
    }
    vals[static_cast<std::size_t>(c)] = v;
    errs[static_cast<std::size_t>(c)] = e;
  }
  TermSum s;
  s.terms = total;
  for (std::size_t c = 0; c < vals.size(); ++c) {
    s.value += vals[c];
    s.errbar += errs[c];
  }
  return s;
}

CountTally count_tree(const CountQuery& q) {
  std::atomic<std::int64_t> nodes{0};
  detail::CountWalker w(q, nodes);
  CountTally pre;
  auto front = detail::frontier(w.tree(), q.depth, kFrontier, [&](const detail::Node& n) { return w.visit(n, pre); });
  std::vector<CountTally> parts(front.size());
  ErrorSlot err;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(front.size()); ++i) {
    err.run([&] {
      std::vector<detail::Node> kids;
      detail::expand(w.tree(), front[static_cast<std::size_t>(i)], kids);
      for (const auto& k : kids) w.walk(k, parts[static_cast<std::size_t>(i)]);
    });
  }
  err.rethrow();
  for (const auto& p : parts) pre += p;
  return pre;
}

CoverTally cover(const CoverQuery& q) {
  std::atomic<std::int64_t> nodes{0};
  detail::CoverWalker w(q, nodes);
  auto front = detail::frontier(w.tree(), q.depth, kFrontier, [&](const detail::Node& n) { return w.in_target(n); });
  // One hit table per thread, so a subtree prunes against every bin its
  // thread has already certified. Static scheduling keeps witnesses
  // reproducible for a given thread count.
  std::vector<detail::LocalCover> parts(static_cast<std::size_t>(omp_get_max_threads()));
  for (auto& p : parts) p = w.empty_local();
  ErrorSlot err;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(front.size()); ++i) {
    err.run([&] { w.walk(front[static_cast<std::size_t>(i)], parts[static_cast<std::size_t>(omp_get_thread_num())]); });
  }
  err.rethrow();
  std::vector<const detail::LocalCover*> ptrs;
  for (const auto& p : parts) ptrs.push_back(&p);
  return w.finish(ptrs);
}

}  // namespace omp
}  // namespace digitlens::kernels
