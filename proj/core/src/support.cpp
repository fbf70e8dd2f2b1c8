#include <cmath>

#include "stabgen/error.hpp"
#include "stabgen/pde.hpp"

namespace stabgen {

SupportSet support_of(const InitialCondition& u0) {
  const std::size_t n = u0.axes.size();
  std::vector<double> shift(n, 0.0);
  for (const Modulation& m : u0.modulations) {
    if (m.axis < 0 || static_cast<std::size_t>(m.axis) >= n) {
      throw Error(ErrorKind::kInvalidArgument, "modulation axis out of range");
    }
    shift[static_cast<std::size_t>(m.axis)] += m.b / (2.0 * std::numbers::pi);
  }
  SupportSet s(n);
  for (std::size_t j = 0; j < n; ++j) {
    const AxisBase& base = u0.axes[j];
    switch (base.kind) {
      case AxisFactor::kGaussian:
      case AxisFactor::kDirac: s[j] = AxisSupport::full(); break;
      case AxisFactor::kSinc: {
        if (base.a == 0.0) throw Error(ErrorKind::kInvalidArgument, "sinc with a = 0");
        const double half = std::fabs(base.a) / (2.0 * std::numbers::pi);
        s[j] = AxisSupport::interval(shift[j] - half, shift[j] + half);
        break;
      }
      case AxisFactor::kNone: s[j] = AxisSupport::point(shift[j]); break;
    }
  }
  return s;
}

}  // namespace stabgen
