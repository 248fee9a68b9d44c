#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <unsupported/Eigen/MatrixFunctions>

namespace dicke::oracle {

double bose(double omega, double T) {
  if (T == 0.0) return 0.0;
  return 1.0 / (std::exp(omega / T) - 1.0);
}

double ohmic_chi(double omega, double gamma, double T) {
  if (omega > 0.0) return gamma * omega * (bose(omega, T) + 1.0);
  if (omega < 0.0) return gamma * -omega * bose(-omega, T);
  return gamma * T;
}

RVector gibbs(const RVector& energies, double T) {
  const double e0 = energies.minCoeff();
  std::vector<long double> w(static_cast<std::size_t>(energies.size()));
  long double z = 0.0L;
  for (Eigen::Index i = 0; i < energies.size(); ++i) {
    w[static_cast<std::size_t>(i)] = std::exp(-static_cast<long double>(energies[i] - e0) / T);
    z += w[static_cast<std::size_t>(i)];
  }
  RVector p(energies.size());
  for (Eigen::Index i = 0; i < energies.size(); ++i) p[i] = static_cast<double>(w[static_cast<std::size_t>(i)] / z);
  return p;
}

double pv_ohmic_integral(double w, double cutoff, int points) {
  // symmetric pairs w +- x on (0, min(w, cutoff - w)) cancel the pole
  const double half = std::min(w, cutoff - w);
  const double h = half / points;
  long double sum = 0.0L;
  for (int k = 0; k < points; ++k) {
    const double x = (k + 0.5) * h;
    sum += ((w + x) / -x + (w - x) / x) * h;
  }
  // regular remainder, composite Simpson
  auto f = [w](double v) { return v / (w - v); };
  auto simpson = [&](double a, double b) {
    if (b <= a) return 0.0L;
    const int n = 2 * points;
    const double hh = (b - a) / n;
    long double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0L : 2.0L) * f(a + i * hh);
    return s * hh / 3.0L;
  };
  if (w - half > 0.0) sum += simpson(0.0, w - half);
  if (w + half < cutoff) sum += simpson(w + half, cutoff);
  return static_cast<double>(sum);
}

CMatrix expm_schroedinger(const CMatrix& h, double t) {
  const CMatrix a = cplx(0.0, -t) * h;
  return a.exp();
}

double tc_level(int n, double g, double Omega) {
  const double k = Omega / g;
  return std::sqrt(static_cast<double>(n)) * g * std::pow(1.0 - k * k, 0.75);
}

double fold_zone(double e, double omega_d) {
  double x = std::fmod(e + 0.5 * omega_d, omega_d);
  if (x < 0.0) x += omega_d;
  return x - 0.5 * omega_d;
}

double circular_distance(double a, double b, double omega_d) {
  return std::abs(fold_zone(a - b, omega_d));
}

double wootters_concurrence(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(3, 0) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  const Eigen::Matrix4cd tilde = yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(rho * tilde);
  std::vector<double> l;
  for (int i = 0; i < 4; ++i) l.push_back(std::sqrt(std::max(0.0, es.eigenvalues()[i].real())));
  std::sort(l.rbegin(), l.rend());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

Eigen::Matrix4cd random_x_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::exponential_distribution<double> e(1.0);
  double p[4];
  double s = 0.0;
  for (double& x : p) s += (x = e(rng));
  for (double& x : p) x /= s;
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i) rho(i, i) = p[i];
  const cplx z = std::polar(u(rng) * std::sqrt(p[0] * p[3]), 2.0 * kPi * u(rng));
  const cplx w = std::polar(u(rng) * std::sqrt(p[1] * p[2]), 2.0 * kPi * u(rng));
  rho(0, 3) = z;
  rho(3, 0) = std::conj(z);
  rho(1, 2) = w;
  rho(2, 1) = std::conj(w);
  return rho;
}

Eigen::Matrix4cd random_density(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Matrix4cd a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = cplx(n(rng), n(rng));
  Eigen::Matrix4cd rho = a * a.adjoint();
  return rho / rho.trace().real();
}

CMatrix jc_hamiltonian(double omega_c, double omega_x, double g, double g_prime, int n_ph) {
  // basis |n, s>, index 2n + s, s = 1 excited
  const int dim = 2 * (n_ph + 1);
  CMatrix h = CMatrix::Zero(dim, dim);
  for (int n = 0; n <= n_ph; ++n) {
    h(2 * n, 2 * n) = omega_c * n;
    h(2 * n + 1, 2 * n + 1) = omega_c * n + omega_x;
    if (n < n_ph) {
      const double s = std::sqrt(n + 1.0);
      h(2 * (n + 1), 2 * n + 1) = g * s;  // a^dag sigma_-
      h(2 * n + 1, 2 * (n + 1)) = g * s;
      h(2 * (n + 1) + 1, 2 * n) = g_prime * s;  // a^dag sigma_+
      h(2 * n, 2 * (n + 1) + 1) = g_prime * s;
    }
  }
  return h;
}

CMatrix cavity_x(int n_ph, int emitters) {
  const int spins = 1 << emitters;
  const int dim = (n_ph + 1) * spins;
  CMatrix x = CMatrix::Zero(dim, dim);
  for (int n = 0; n < n_ph; ++n)
    for (int s = 0; s < spins; ++s) {
      const double a = std::sqrt(n + 1.0);
      // X = -i (a - a^dag): <n|X|n+1> = -i sqrt(n+1), <n+1|X|n> = i sqrt(n+1)
      x(n * spins + s, (n + 1) * spins + s) = cplx(0.0, -a);
      x((n + 1) * spins + s, n * spins + s) = cplx(0.0, a);
    }
  return x;
}

std::vector<Line> eigenbasis_lines(const ModelParams& params) {
  CMatrix h;
  if (params.emitters != 1) throw std::invalid_argument("eigenbasis_lines: N = 1 only");
  h = jc_hamiltonian(params.omega_c, params.omega_x, params.g, params.g_prime, params.n_ph);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const RVector e = es.eigenvalues();
  const RVector p = gibbs(e, params.T);
  const CMatrix xm = es.eigenvectors().adjoint() * cavity_x(params.n_ph, 1) * es.eigenvectors();
  std::vector<Line> lines;
  for (Eigen::Index n = 0; n < e.size(); ++n)
    for (Eigen::Index m = 0; m < e.size(); ++m) {
      const double d = e[n] - e[m];
      if (d <= 1e-9) continue;
      lines.push_back({d, d * d * std::norm(xm(m, n)) * p[n]});
    }
  return lines;
}

}  // namespace dicke::oracle
