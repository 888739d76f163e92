#include "viscoflow/norms.hpp"

#include <cmath>

#include "viscoflow/operators.hpp"
#include "viscoflow/parallel.hpp"

namespace viscoflow {
namespace {

template <int Rank>
double pointwise_sq(const Field<Rank>& f, std::size_t i) {
  double s = 0.0;
  for (int c = 0; c < f.components(); ++c) s += f.comp(c)[i] * f.comp(c)[i];
  return s;
}

template <int Rank>
double lp_norm(const Field<Rank>& f, double p) {
  const double s = deterministic_sum_of(f.size(), [&](std::size_t i) {
    return std::pow(std::sqrt(pointwise_sq(f, i)), p);
  });
  return std::pow(s * f.grid().cell_volume(), 1.0 / p);
}

void check_q(double q) {
  if (!(q > 3.0 && q <= 6.0)) {
    throw PreconditionError("discrete_norm: q must lie in (3, 6], got " + std::to_string(q));
  }
}

}  // namespace

NormKind parse_norm_kind(const std::string& name) {
  if (name == "L1") return NormKind::kL1;
  if (name == "L2") return NormKind::kL2;
  if (name == "Lq") return NormKind::kLq;
  if (name == "Linf") return NormKind::kLinf;
  if (name == "W1q") return NormKind::kW1q;
  throw PreconditionError("unsupported norm kind '" + name + "'");
}

template <int Rank>
double discrete_norm(const Field<Rank>& f, NormKind kind, double q) {
  switch (kind) {
    case NormKind::kL1: {
      const double s =
          deterministic_sum_of(f.size(), [&](std::size_t i) { return std::sqrt(pointwise_sq(f, i)); });
      return s * f.grid().cell_volume();
    }
    case NormKind::kL2: {
      const double s = deterministic_sum_of(f.size(), [&](std::size_t i) { return pointwise_sq(f, i); });
      return std::sqrt(s * f.grid().cell_volume());
    }
    case NormKind::kLq:
      check_q(q);
      return lp_norm(f, q);
    case NormKind::kLinf: {
      double m = 0.0;
      for (int c = 0; c < f.components(); ++c)
        for (double x : f.comp(c)) m = std::max(m, std::abs(x));
      if (f.components() == 1) return m;
      return max_of(f.size(), [&](std::size_t i) { return std::sqrt(pointwise_sq(f, i)); });
    }
    case NormKind::kW1q: {
      check_q(q);
      if constexpr (Rank == 2) {
        // gradient of each tensor component, collected as a Frobenius magnitude
        ScalarField g2(f.grid());
        for (int c = 0; c < f.components(); ++c) {
          ScalarField fc(f.grid());
          std::copy(f.comp(c).begin(), f.comp(c).end(), fc.comp(0).begin());
          const VectorField gc = apply_gradient(fc);
          for (int a = 0; a < f.dim(); ++a)
            for (std::size_t i = 0; i < f.size(); ++i) g2[i] += gc.comp(a)[i] * gc.comp(a)[i];
        }
        for (std::size_t i = 0; i < f.size(); ++i) g2[i] = std::sqrt(g2[i]);
        return lp_norm(f, q) + lp_norm(g2, q);
      } else {
        return lp_norm(f, q) + lp_norm(apply_gradient(f), q);
      }
    }
  }
  throw PreconditionError("unsupported norm kind");
}

double integrate(const ScalarField& f) {
  return deterministic_sum(f.comp(0)) * f.grid().cell_volume();
}

template <int Rank>
double dot(const Field<Rank>& a, const Field<Rank>& b) {
  require_same_grid(a, b, "dot");
  const int nc = a.components();
  return deterministic_sum_of(a.size(), [&](std::size_t i) {
    double s = 0.0;
    for (int c = 0; c < nc; ++c) s += a.comp(c)[i] * b.comp(c)[i];
    return s;
  });
}

template double discrete_norm(const Field<0>&, NormKind, double);
template double discrete_norm(const Field<1>&, NormKind, double);
template double discrete_norm(const Field<2>&, NormKind, double);
template double dot(const Field<0>&, const Field<0>&);
template double dot(const Field<1>&, const Field<1>&);
template double dot(const Field<2>&, const Field<2>&);

}  // namespace viscoflow
