#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "dicke/error.hpp"
#include "dicke/observables.hpp"
#include "dicke/pipeline.hpp"

namespace dicke {

namespace {

struct Line {
  double center = 0.0;
  double intensity = 0.0;
};

// Coherence lines inside the window, merged when their centers agree within
// `merge_tol`, strongest first.
std::vector<Line> window_lines(const PeakList& peaks, PeakWindow window, double merge_tol) {
  std::vector<Line> lines;
  for (const auto& p : peaks.peaks) {
    if (p.m < 0) continue;
    const double c = p.center();
    if (c < window.lo || c > window.hi) continue;
    const double intensity = peaks.gamma * c / peaks.omega_0 * p.weight.real();
    lines.push_back({c, intensity});
  }
  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.center < b.center; });
  std::vector<Line> merged;
  double weighted = 0.0;
  for (const auto& l : lines) {
    if (!merged.empty() && l.center - merged.back().center <= merge_tol) {
      auto& m = merged.back();
      weighted += l.center * l.intensity;
      m.intensity += l.intensity;
      if (m.intensity > 0.0) m.center = weighted / m.intensity;
    } else {
      merged.push_back(l);
      weighted = l.center * l.intensity;
    }
  }
  std::sort(merged.begin(), merged.end(), [](const Line& a, const Line& b) { return a.intensity > b.intensity; });
  return merged;
}

}  // namespace

ShiftTrack peak_shift_tracker(const ModelParams& params, std::span<const double> Omega_grid,
                              PeakWindow window, const TrackerOptions& options) {
  if (Omega_grid.empty()) throw ConfigError("peak_shift_tracker: empty Omega grid");
  if (!(window.hi > window.lo)) throw ConfigError("peak_shift_tracker: window must satisfy lo < hi");
  if (!(params.g > 0.0)) throw ConfigError("peak_shift_tracker: requires g > 0");
  ShiftTrack track;
  for (double omega_l : Omega_grid) {
    ModelParams p = params;
    p.Omega = omega_l;
    if (options.counterrotating_drive) p.Omega_prime = omega_l;
    const SteadyState s = solve_steady_state(p);
    const Spectrum spec = emission_spectrum(s.output, s.rates, s.populations, {}, p);
    const auto lines = window_lines(spec.peaks, window, options.merge_tol);
    if (lines.empty() || !(lines.front().intensity > 0.0))
      throw NumericalError(fmt::format("peak_shift_tracker: no line in [{}, {}] at Omega = {}", window.lo,
                                       window.hi, omega_l));
    ShiftPoint point;
    point.Omega = omega_l;
    point.center = lines.front().center;
    point.intensity = lines.front().intensity;
    point.runner_up = lines.size() > 1 ? lines[1].intensity : 0.0;
    point.anticrossing = point.runner_up > options.anticrossing_ratio * point.intensity;
    track.points.push_back(point);
  }

  // least squares center = offset + amplitude * s(Omega) over unflagged points
  auto scale = [&](double om) {
    const double k = om / params.g;
    return k < 1.0 ? std::pow(1.0 - k * k, 0.75) : 0.0;
  };
  double s0 = 0, s1 = 0, s2 = 0, y0 = 0, y1 = 0;
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const auto& pt : track.points) {
    if (pt.anticrossing) continue;
    const double x = scale(pt.Omega);
    s0 += 1;
    s1 += x;
    s2 += x * x;
    y0 += pt.center;
    y1 += x * pt.center;
    lo = first ? pt.center : std::min(lo, pt.center);
    hi = first ? pt.center : std::max(hi, pt.center);
    first = false;
  }
  ShiftFit& fit = track.fit;
  const double det = s0 * s2 - s1 * s1;
  if (s0 >= 2 && std::abs(det) > 1e-300) {
    fit.amplitude = (s0 * y1 - s1 * y0) / det;
    fit.offset = (y0 - fit.amplitude * s1) / s0;
  } else if (s0 >= 1) {
    fit.offset = y0 / s0;
  }
  fit.total_shift = hi - lo;
  for (const auto& pt : track.points) {
    const double r = pt.center - (fit.offset + fit.amplitude * scale(pt.Omega));
    fit.residuals.push_back(r);
    if (!pt.anticrossing) fit.max_residual = std::max(fit.max_residual, std::abs(r));
  }
  return track;
}

}  // namespace dicke
