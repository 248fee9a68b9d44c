#include "dicke/bath_master.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "dicke/error.hpp"

namespace dicke {

namespace {

constexpr double kEdgeRatio = 1e-28;

double spectral(double omega, const BathSpec& bath) { return bath.gamma * omega / bath.omega_0; }

// Re Gamma(w) for w > 0: PV int_0^cutoff gamma(w') / (w - w') dw'.
double re_gamma(double w, const BathSpec& bath) {
  const double cutoff = bath.cutoff;
  if (cutoff == 0.0) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  const double gw = spectral(w, bath);
  double err = 0.0;
  if (w <= 0.0) {
    auto f = [&](double x) { return -spectral(x, bath) / (x - w); };
    return gauss_kronrod<double, 61>::integrate(f, 0.0, cutoff, 15, 1e-12, &err);
  }
  if (w == cutoff) throw NumericalError("Lamb shift: transition frequency coincides with the bath cutoff");
  // subtract the singular part gamma(w)/(w - w') and integrate it analytically
  auto smooth = [&](double x) {
    const double d = w - x;
    if (d == 0.0) return -bath.gamma / bath.omega_0;
    return (spectral(x, bath) - gw) / d;
  };
  const double regular = gauss_kronrod<double, 61>::integrate(smooth, 0.0, cutoff, 15, 1e-12, &err);
  if (!(err <= 1e-9 * (std::abs(regular) + bath.gamma)))
    throw NumericalError(fmt::format("Lamb-shift quadrature did not converge at omega = {}", w));
  return regular + gw * std::log(w / std::abs(cutoff - w));
}

}  // namespace

BathSpec BathSpec::from(const ModelParams& params) {
  BathSpec bath;
  bath.gamma = params.gamma;
  bath.T = params.T;
  bath.cutoff = params.cutoff;
  bath.lamb_shift = params.lamb_shift;
  return bath;
}

void BathSpec::validate() const {
  if (!(gamma >= 0.0)) throw ConfigError("bath.gamma must be >= 0");
  if (!(omega_0 > 0.0)) throw ConfigError("bath.omega_0 must be > 0");
  if (!(T >= 0.0)) throw ConfigError("bath.T must be >= 0");
  if (!(cutoff >= 0.0)) throw ConfigError("bath.cutoff must be >= 0");
}

double bose_occupation(double omega, double T) {
  if (T == 0.0) return omega > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return 1.0 / std::expm1(omega / T);
}

double chi(double omega, const BathSpec& bath) {
  const double scale = bath.gamma / bath.omega_0;
  if (omega == 0.0) return scale * bath.T;
  if (bath.T == 0.0) return omega > 0.0 ? scale * omega : 0.0;
  const double x = std::abs(omega) / bath.T;
  if (omega > 0.0) return scale * omega / -std::expm1(-x);
  return scale * -omega / std::expm1(x);
}

double lamb_principal_value(double omega, const BathSpec& bath) {
  if (omega == 0.0) return 0.0;
  const double value = re_gamma(std::abs(omega), bath);
  return omega > 0.0 ? value : -value;
}

double xi(double omega, const BathSpec& bath) {
  if (!bath.lamb_shift) return 0.0;
  // symmetric limit: the (n+1) and n branches diverge with opposite signs
  if (omega == 0.0) return -0.5 * bath.gamma * bath.cutoff / bath.omega_0;
  const double pv = lamb_principal_value(omega, bath);
  if (bath.T == 0.0) return omega > 0.0 ? pv : 0.0;
  const double x = std::abs(omega) / bath.T;
  if (omega > 0.0) return pv / -std::expm1(-x);
  return pv / std::expm1(x);
}

RMatrix pauli_generator(const TransitionTable& table, const BathSpec& bath) {
  const int n = table.n_states;
  RMatrix l = RMatrix::Zero(n, n);
  double largest = 0.0;
  for (const auto& x : table.elements) largest = std::max(largest, x.cwiseAbs2().maxCoeff());
  const double floor = kTransitionNoiseFloor * largest;
  for (int nu = -table.max_offset; nu <= table.max_offset; ++nu) {
    const CMatrix& x = table.offset(nu);
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        if (i == k) continue;
        const double w = std::norm(x(i, k));
        if (w <= floor) continue;
        l(i, k) += chi(table.frequency(k, i, nu), bath) * w;
      }
    }
  }
  for (int k = 0; k < n; ++k) l(k, k) = -(l.col(k).sum() - l(k, k));
  return l;
}

CMatrix offdiag_decay(const TransitionTable& table, const BathSpec& bath) {
  const int n = table.n_states;
  // A_m = 1/2 sum_{k,nu} [chi + i xi](omega_{m k nu}) |X_{k,m,nu}|^2
  CVector a = CVector::Zero(n);
  for (int nu = -table.max_offset; nu <= table.max_offset; ++nu) {
    const CMatrix& x = table.offset(nu);
    for (int m = 0; m < n; ++m) {
      for (int k = 0; k < n; ++k) {
        const double w = std::norm(x(k, m));
        if (w == 0.0) continue;
        const double f = table.frequency(m, k, nu);
        a[m] += 0.5 * cplx(chi(f, bath), xi(f, bath)) * w;
      }
    }
  }
  CMatrix z(n, n);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) z(m, k) = a[m] + std::conj(a[k]);
  for (int nu = -table.max_offset; nu <= table.max_offset; ++nu) {
    const CVector d = table.offset(nu).diagonal();
    const double c = chi(nu * table.omega_d, bath);
    if (c == 0.0) continue;
    z -= c * (d * d.adjoint());
  }
  z.diagonal().setZero();
  return z;
}

RMatrix offdiag_decay_real_regrouped(const TransitionTable& table, const BathSpec& bath) {
  const int n = table.n_states;
  RVector out_rate = RVector::Zero(n);  // 1/2 sum_{k != m, nu} chi(omega_{m k nu}) |X_{k,m,nu}|^2
  RMatrix z = RMatrix::Zero(n, n);
  for (int nu = -table.max_offset; nu <= table.max_offset; ++nu) {
    const CMatrix& x = table.offset(nu);
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k)
        if (k != m) out_rate[m] += 0.5 * chi(table.frequency(m, k, nu), bath) * std::norm(x(k, m));
    const double c = chi(nu * table.omega_d, bath);
    if (c == 0.0) continue;
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k) z(m, k) += 0.5 * c * std::norm(x(m, m) - x(k, k));
  }
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) z(m, k) += out_rate[m] + out_rate[k];
  z.diagonal().setZero();
  return z;
}

RateSet build_rates(const TransitionTable& table, const BathSpec& bath) {
  bath.validate();
  RateSet rates;
  rates.bath = bath;
  rates.pauli = pauli_generator(table, bath);
  rates.Z = offdiag_decay(table, bath);
  const int n = table.n_states;
  for (int m = 0; m < n; ++m)
    for (int k = m + 1; k < n; ++k)
      if (rates.Z(m, k).real() < 1e-12 * bath.gamma) rates.weak_coherences.emplace_back(m, k);
  return rates;
}

std::vector<std::vector<int>> closed_classes(const RMatrix& generator) {
  const int n = static_cast<int>(generator.rows());
  if (generator.cols() != n) throw ConfigError("generator must be square");
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      if (i != k) scale = std::max(scale, std::abs(generator(i, k)));
  const double threshold = kEdgeRatio * scale;
  auto edge = [&](int from, int to) { return from != to && generator(to, from) > threshold; };

  // Tarjan's strongly connected components, iterative
  std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0),
      comp(static_cast<std::size_t>(n), -1);
  std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
  std::vector<int> stack;
  int counter = 0;
  int n_comp = 0;
  for (int root = 0; root < n; ++root) {
    if (index[static_cast<std::size_t>(root)] >= 0) continue;
    std::vector<std::pair<int, int>> call{{root, 0}};
    while (!call.empty()) {
      auto& [v, next] = call.back();
      const auto vs = static_cast<std::size_t>(v);
      if (next == 0 && index[vs] < 0) {
        index[vs] = low[vs] = counter++;
        stack.push_back(v);
        on_stack[vs] = 1;
      }
      bool descended = false;
      while (next < n) {
        const int w = next++;
        if (!edge(v, w)) continue;
        const auto ws = static_cast<std::size_t>(w);
        if (index[ws] < 0) {
          call.emplace_back(w, 0);
          descended = true;
          break;
        }
        if (on_stack[ws]) low[vs] = std::min(low[vs], index[ws]);
      }
      if (descended) continue;
      if (low[vs] == index[vs]) {
        int w = -1;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = 0;
          comp[static_cast<std::size_t>(w)] = n_comp;
        } while (w != v);
        ++n_comp;
      }
      const int finished = v;
      call.pop_back();
      if (!call.empty()) {
        const auto ps = static_cast<std::size_t>(call.back().first);
        low[ps] = std::min(low[ps], low[static_cast<std::size_t>(finished)]);
      }
    }
  }
  std::vector<char> closed(static_cast<std::size_t>(n_comp), 1);
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w)
      if (edge(v, w) && comp[static_cast<std::size_t>(v)] != comp[static_cast<std::size_t>(w)])
        closed[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])] = 0;
  std::vector<std::vector<int>> by_comp(static_cast<std::size_t>(n_comp));
  for (int v = 0; v < n; ++v) by_comp[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])].push_back(v);
  std::vector<std::vector<int>> out;
  for (int c = 0; c < n_comp; ++c)
    if (closed[static_cast<std::size_t>(c)]) out.push_back(std::move(by_comp[static_cast<std::size_t>(c)]));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// GTH state reduction on one irreducible class of the thresholded chain.
RVector gth(const RMatrix& generator, const std::vector<int>& class_states, double threshold) {
  const int m = static_cast<int>(class_states.size());
  // eliminate fast-leaving (weakly populated) states first so the fill-in
  // products of small thermal rates stay in range
  std::vector<int> states = class_states;
  std::stable_sort(states.begin(), states.end(), [&](int a, int b) { return generator(a, a) > generator(b, b); });
  RMatrix p(m, m);  // p(i, j): rate i -> j
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double r = i == j ? 0.0 : generator(states[static_cast<std::size_t>(j)], states[static_cast<std::size_t>(i)]);
      p(i, j) = r > threshold ? r : 0.0;
    }
  for (int k = m - 1; k > 0; --k) {
    const double s = p.row(k).head(k).sum();
    if (!(s > 0.0)) throw NumericalError("stationary_populations: reducible class in GTH elimination");
    p.col(k).head(k) /= s;
    p.topLeftCorner(k, k).noalias() += p.col(k).head(k) * p.row(k).head(k);
  }
  // back substitution in logarithms; population ratios across a class can
  // exceed the double range at low temperature
  RVector log_pi = RVector::Constant(m, -std::numeric_limits<double>::infinity());
  log_pi[0] = 0.0;
  for (int k = 1; k < m; ++k) {
    double top = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i)
      if (p(i, k) > 0.0) top = std::max(top, log_pi[i] + std::log(p(i, k)));
    double sum = 0.0;
    for (int i = 0; i < k; ++i)
      if (p(i, k) > 0.0) sum += std::exp(log_pi[i] + std::log(p(i, k)) - top);
    log_pi[k] = top + std::log(sum);
  }
  const double top = log_pi.maxCoeff();
  const RVector pi = (log_pi.array() - top).exp();
  RVector out(m);
  for (int i = 0; i < m; ++i) {
    const auto pos = std::find(class_states.begin(), class_states.end(), states[static_cast<std::size_t>(i)]);
    out[pos - class_states.begin()] = pi[i];
  }
  return out / out.sum();
}

double edge_threshold(const RMatrix& generator) {
  RMatrix off = generator;
  off.diagonal().setZero();
  return kEdgeRatio * off.cwiseAbs().maxCoeff();
}

}  // namespace

RVector stationary_populations(const RMatrix& generator) {
  const auto classes = closed_classes(generator);
  if (classes.size() != 1)
    throw NumericalError(fmt::format("stationary state is not unique: transition graph has {} closed classes",
                                     classes.size()));
  RVector p = RVector::Zero(generator.rows());
  const RVector pi = gth(generator, classes.front(), edge_threshold(generator));
  for (std::size_t i = 0; i < classes.front().size(); ++i) p[classes.front()[i]] = pi[static_cast<Eigen::Index>(i)];
  return p;
}

RVector stationary_populations(const RMatrix& generator, const RVector& initial) {
  const int n = static_cast<int>(generator.rows());
  if (initial.size() != n) throw ConfigError("initial populations have the wrong size");
  const auto classes = closed_classes(generator);
  if (classes.size() == 1) return stationary_populations(generator);
  const double threshold = edge_threshold(generator);

  std::vector<int> owner(static_cast<std::size_t>(n), -1);
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (int s : classes[c]) owner[static_cast<std::size_t>(s)] = static_cast<int>(c);
  std::vector<int> transient;
  for (int s = 0; s < n; ++s)
    if (owner[static_cast<std::size_t>(s)] < 0) transient.push_back(s);

  RVector mass = RVector::Zero(static_cast<Eigen::Index>(classes.size()));
  for (int s = 0; s < n; ++s)
    if (owner[static_cast<std::size_t>(s)] >= 0) mass[owner[static_cast<std::size_t>(s)]] += initial[s];
  if (!transient.empty()) {
    const int t = static_cast<int>(transient.size());
    RMatrix ltt(t, t);
    RVector p0(t);
    for (int i = 0; i < t; ++i) {
      p0[i] = initial[transient[static_cast<std::size_t>(i)]];
      for (int j = 0; j < t; ++j) ltt(i, j) = generator(transient[static_cast<std::size_t>(i)], transient[static_cast<std::size_t>(j)]);
    }
    // occupation integrals int_0^inf p_T(t) dt = -L_TT^{-1} p0
    const RVector occupation = -ltt.fullPivLu().solve(p0);
    for (int s = 0; s < n; ++s) {
      const int c = owner[static_cast<std::size_t>(s)];
      if (c < 0) continue;
      for (int j = 0; j < t; ++j) {
        const double r = generator(s, transient[static_cast<std::size_t>(j)]);
        if (r > threshold) mass[c] += r * occupation[j];
      }
    }
  }
  const double total = mass.sum();
  if (!(total > 0.0)) throw NumericalError("stationary_populations: initial distribution carries no weight");
  RVector p = RVector::Zero(n);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const RVector pi = gth(generator, classes[c], threshold);
    for (std::size_t i = 0; i < classes[c].size(); ++i)
      p[classes[c][i]] = mass[static_cast<Eigen::Index>(c)] / total * pi[static_cast<Eigen::Index>(i)];
  }
  return p;
}

SecularPropagator::SecularPropagator(RMatrix pauli, CMatrix decay)
    : pauli_(std::move(pauli)), decay_(std::move(decay)) {
  if (pauli_.rows() != pauli_.cols() || decay_.rows() != pauli_.rows() || decay_.cols() != pauli_.cols())
    throw ConfigError("SecularPropagator: generator shapes do not match");
}

RMatrix SecularPropagator::diagonal_map(double tau) const {
  if (!(tau >= 0.0)) throw ConfigError(fmt::format("propagation time must be >= 0, got {}", tau));
  if (tau == 0.0) return RMatrix::Identity(pauli_.rows(), pauli_.cols());
  const RMatrix scaled = pauli_ * tau;
  return scaled.exp();
}

CMatrix SecularPropagator::apply(const CMatrix& state, double tau) const {
  const Eigen::Index n = pauli_.rows();
  if (state.rows() != n || state.cols() != n) throw ConfigError("SecularPropagator: state has the wrong shape");
  const RMatrix diag_map = diagonal_map(tau);
  CMatrix out(n, n);
  for (Eigen::Index m = 0; m < n; ++m)
    for (Eigen::Index k = 0; k < n; ++k)
      if (m != k) out(m, k) = std::exp(-decay_(m, k) * tau) * state(m, k);
  out.diagonal() = diag_map.cast<cplx>() * state.diagonal();
  return out;
}

CMatrix propagate(const CMatrix& state, double tau, const RMatrix& pauli, const CMatrix& decay) {
  return SecularPropagator(pauli, decay).apply(state, tau);
}

}  // namespace dicke
