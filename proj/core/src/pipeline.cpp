#include "dicke/pipeline.hpp"

#include <cmath>

namespace dicke {

RVector gibbs_weights(const RVector& energies, double T) {
  const Eigen::Index n = energies.size();
  RVector w(n);
  const double e0 = energies.minCoeff();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double de = energies[i] - e0;
    if (T == 0.0) w[i] = de < 1e-9 ? 1.0 : 0.0;
    else w[i] = std::exp(-de / T);
  }
  return w / w.sum();
}

SteadyState solve_steady_state(const ModelParams& params) {
  params.validate();
  SteadyState s{params, build_operators(params), {}, {}, {}, {}, {}, BathSpec::from(params), {}, {}, {}, {}};
  s.dicke_h = dicke_hamiltonian(params, s.ops);
  s.system = system_energies(s.dicke_h);
  {
    const PropagatorSeries series = one_cycle_propagator(params, s.ops);
    s.basis = floquet_basis(series, params, s.dicke_h);
  }
  s.labels = label_states(s.basis, s.system);
  s.basis.labels = s.labels.labels;
  s.table = transition_operators(s.basis, s.ops.X);
  s.rates = build_rates(s.table, s.bath);

  const RVector gibbs = gibbs_weights(s.system.energies, params.T);
  const RMatrix overlap = (s.system.vectors.adjoint() * s.basis.initial_states).cwiseAbs2();
  s.initial = overlap.transpose() * gibbs;
  s.populations = stationary_populations(s.rates.pauli, s.initial);
  s.output = output_operator(s.basis, s.table);
  return s;
}

}  // namespace dicke
