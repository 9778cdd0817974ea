#pragma once

#include <cstdint>

namespace rmhmc {

/// Semantic evaluation counts. One dH/dq call is one `dq_evals`, regardless
/// of how many model Hessians the finite-difference metric derivative needed.
struct DerivCounter {
  std::uint64_t grad_calls = 0;
  std::uint64_t hessian_calls = 0;  // raw model Hessian evaluations
  std::uint64_t metric_evals = 0;
  std::uint64_t metric_derivative_evals = 0;
  std::uint64_t dq_evals = 0;  // dH/d(position)
  std::uint64_t dp_evals = 0;  // dH/d(momentum)

  std::uint64_t partial_evals() const { return dq_evals + dp_evals; }

  DerivCounter& operator+=(const DerivCounter& o) {
    grad_calls += o.grad_calls;
    hessian_calls += o.hessian_calls;
    metric_evals += o.metric_evals;
    metric_derivative_evals += o.metric_derivative_evals;
    dq_evals += o.dq_evals;
    dp_evals += o.dp_evals;
    return *this;
  }

  friend DerivCounter operator-(DerivCounter a, const DerivCounter& b) {
    a.grad_calls -= b.grad_calls;
    a.hessian_calls -= b.hessian_calls;
    a.metric_evals -= b.metric_evals;
    a.metric_derivative_evals -= b.metric_derivative_evals;
    a.dq_evals -= b.dq_evals;
    a.dp_evals -= b.dp_evals;
    return a;
  }

  bool operator==(const DerivCounter&) const = default;
};

}  // namespace rmhmc
