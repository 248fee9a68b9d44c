#include "dicke/app/runners.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "dicke/entanglement.hpp"
#include "dicke/error.hpp"
#include "dicke/pipeline.hpp"

#ifndef DICKE_VERSION
#define DICKE_VERSION "unknown"
#endif

namespace dicke::app {

namespace {

using json = nlohmann::ordered_json;

std::string sci(double v) { return fmt::format("{:.12e}", v); }

json params_json(const ModelParams& p) {
  return json{{"N", p.emitters},         {"omega_c", p.omega_c},   {"omega_x", p.omega_x},
              {"omega_d", p.omega_d},    {"g", p.g},               {"g_prime", p.g_prime},
              {"Omega", p.Omega},        {"Omega_prime", p.Omega_prime}, {"n_ph", p.n_ph},
              {"n_fourier", p.n_fourier}, {"n_steps", p.n_steps}, {"gamma", p.gamma},
              {"T", p.T},                {"lamb_shift", p.lamb_shift}, {"cutoff", p.cutoff}};
}

json metadata(const RunConfig& config, std::string_view command) {
  return json{{"command", command},
              {"version", DICKE_VERSION},
              {"params", params_json(config.model)},
              {"tolerances",
               {{"fourier_outside_weight", kMaxOutsideWeight},
                {"quasienergy_cluster", kQuasienergyClusterTol},
                {"peak_prune_ratio", kPeakPruneRatio},
                {"x_form", kXFormTolerance}}}};
}

// Table rendered as CSV or as JSON {metadata, columns, rows}. Cells are
// numbers or strings; floating values print as {:.12e} in CSV.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(std::vector<json> row) { rows_.push_back(std::move(row)); }

  std::string render(OutputFormat format, const json& meta) const {
    if (format == OutputFormat::csv) {
      std::string out;
      for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "," : "") + columns_[i];
      out += "\n";
      for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + field(r[i]);
        out += "\n";
      }
      return out;
    }
    json doc{{"metadata", meta}, {"columns", columns_}, {"rows", json::array()}};
    for (const auto& r : rows_) {
      json row = json::object();
      for (std::size_t i = 0; i < columns_.size(); ++i) row[columns_[i]] = r[i];
      doc["rows"].push_back(std::move(row));
    }
    return doc.dump(2) + "\n";
  }

 private:
  static std::string field(const json& cell) {
    if (cell.is_number_float()) return sci(cell.get<double>());
    if (cell.is_number()) return cell.dump();
    if (cell.is_boolean()) return cell.get<bool>() ? "1" : "0";
    if (cell.is_null()) return "nan";
    const auto s = cell.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }

  std::vector<std::string> columns_;
  std::vector<std::vector<json>> rows_;
};

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

}  // namespace

ModelParams with_coupling(ModelParams params, SweepCoupling coupling) {
  switch (coupling) {
    case SweepCoupling::rwa:
      params.g_prime = 0.0;
      params.Omega_prime = 0.0;
      break;
    case SweepCoupling::full:
      params.g_prime = params.g;
      params.Omega_prime = params.Omega;
      break;
    case SweepCoupling::fixed:
      break;
  }
  return params;
}

namespace {

// CSV tables carry no metadata of their own; it goes to a `.meta.json` sidecar.
Artifacts finish(const Table& table, const RunConfig& config, std::string_view command,
                 std::vector<std::pair<std::string, std::string>> sidecars = {}) {
  const json meta = metadata(config, command);
  Artifacts out{table.render(config.output.format, meta), std::move(sidecars)};
  if (config.output.format == OutputFormat::csv)
    out.sidecars.emplace_back(".meta.json", json{{"metadata", meta}}.dump(2) + "\n");
  return out;
}

}  // namespace

Artifacts run_quasienergies(const RunConfig& config) {
  config.validate();
  const auto& qc = config.quasienergies;
  Table table({"g", "state", "eps", "E", "nu", "E_minus_omega_d", "E_plus_omega_d", "label_residual", "ambiguous"});
  Table crossings({"g", "upper", "lower", "E_upper", "E_lower", "kind"});
  std::vector<double> prev_energies;
  double prev_g = 0.0;
  for (double g : qc.g.values()) {
    ModelParams p = config.model;
    p.g = g;
    p = with_coupling(p, qc.coupling);
    spdlog::debug("quasienergies: g = {}", g);
    const Operators ops = build_operators(p);
    const CMatrix h = dicke_hamiltonian(p, ops);
    const SystemSpectrum sys = system_energies(h);
    const FloquetBasis basis = floquet_basis(one_cycle_propagator(p, ops), p, h);
    const LabelReport labels = label_states(basis, sys);
    for (int n = 0; n < basis.n_states(); ++n) {
      const auto& l = labels.labels[static_cast<std::size_t>(n)];
      table.add({g, n, basis.quasienergy[n], l.energy, l.nu,
                 l.energy - p.omega_d, l.energy + p.omega_d, l.residual, l.ambiguous});
    }
    // crossings of E_n with the first sideband E_n' + omega_d
    const int dim = static_cast<int>(sys.energies.size());
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < a; ++b) {
        const double d = sys.energies[a] - sys.energies[b] - p.omega_d;
        if (std::abs(d) < qc.crossing_tol)
          crossings.add({g, a, b, sys.energies[a], sys.energies[b], "near"});
        if (!prev_energies.empty()) {
          const double d0 = prev_energies[static_cast<std::size_t>(a)] - prev_energies[static_cast<std::size_t>(b)] - p.omega_d;
          if ((d0 < 0.0) != (d < 0.0) && d0 != 0.0) {
            const double gc = prev_g + (g - prev_g) * d0 / (d0 - d);
            crossings.add({gc, a, b, sys.energies[a], sys.energies[b], "sign_change"});
          }
        }
      }
    }
    prev_energies.assign(sys.energies.data(), sys.energies.data() + dim);
    prev_g = g;
  }
  return finish(table, config, "quasienergies",
                {{".crossings." + std::string(to_string(config.output.format)),
                  crossings.render(config.output.format, metadata(config, "quasienergies"))}});
}

Artifacts run_spectrum(const RunConfig& config) {
  config.validate();
  const SteadyState s = solve_steady_state(config.model);
  const auto grid = config.spectrum.omega.values();
  const Spectrum spec = emission_spectrum(s.output, s.rates, s.populations, grid, config.model);
  Table table({"omega", "S"});
  for (std::size_t i = 0; i < grid.size(); ++i) table.add({spec.omega[i], spec.S[i]});

  json peaks = json::array();
  for (const auto& p : spec.peaks.peaks)
    peaks.push_back({{"m", p.m},
                     {"n", p.n},
                     {"nu", p.nu},
                     {"center", p.center()},
                     {"half_width", p.half_width()},
                     {"transition_frequency", p.transition_frequency},
                     {"weight", complex_json(p.weight)}});
  json coherent = json::array();
  for (const auto& c : spec.peaks.coherent) coherent.push_back({{"frequency", c.frequency}, {"weight", c.weight}});
  json sidecar{{"metadata", metadata(config, "spectrum")},
               {"peaks", std::move(peaks)},
               {"coherent_lines", std::move(coherent)},
               {"weak_coherences", s.rates.weak_coherences.size()}};
  return finish(table, config, "spectrum", {{".peaks.json", sidecar.dump(2) + "\n"}});
}

Artifacts run_g2(const RunConfig& config) {
  config.validate();
  const SteadyState s = solve_steady_state(config.model);
  const G2Parts parts = g2_zero(s.output, s.populations);
  if (config.g2.tau.points == 1 && config.g2.tau.min == 0.0) {
    Table table({"g2_0", "numerator", "denominator", "flux"});
    table.add({parts.value(), parts.numerator, parts.denominator,
               output_flux(s.output, s.populations, s.bath)});
    return finish(table, config, "g2");
  }
  const auto taus = config.g2.tau.values();
  const auto curve = g2_tau(s.output, s.rates, s.populations, taus);
  Table table({"tau", "g2"});
  for (std::size_t i = 0; i < taus.size(); ++i) table.add({taus[i], curve[i]});
  return finish(table, config, "g2");
}

Artifacts run_eof(const RunConfig& config) {
  config.validate();
  if (config.model.emitters != 2) throw ConfigError("eof requires model.N = 2");
  const SteadyState s = solve_steady_state(config.model);
  const EmitterState state = reduce_to_emitters(time_averaged_state(s.basis, s.populations), s.ops.space);
  const double c = concurrence(state);
  const double e = entanglement_of_formation(c);
  Table table({"concurrence", "eof", "x_form_residual"});
  table.add({c, e, state.x_form_residual});
  json rho = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int j = 0; j < 4; ++j) row.push_back(complex_json(state.rho(i, j)));
    rho.push_back(std::move(row));
  }
  json sidecar{{"metadata", metadata(config, "eof")},
               {"basis", {"gg", "ge", "eg", "ee"}},
               {"rho", std::move(rho)},
               {"x_form_residual", state.x_form_residual},
               {"concurrence", c},
               {"eof", e}};
  return finish(table, config, "eof", {{".state.json", sidecar.dump(2) + "\n"}});
}

double sweep_point(const ModelParams& params, SweepObservable observable) {
  const SteadyState s = solve_steady_state(params);
  if (observable == SweepObservable::g2) return g2_zero(s.output, s.populations).value();
  if (params.emitters != 2) throw ConfigError("eof sweep requires model.N = 2");
  const EmitterState state = reduce_to_emitters(time_averaged_state(s.basis, s.populations), s.ops.space);
  return entanglement_of_formation(concurrence(state));
}

Artifacts run_sweep(const RunConfig& config, int workers) {
  config.validate();
  const auto temps = config.sweep.T.values();
  const auto couplings = config.sweep.g.values();
  struct Cell {
    ModelParams params;
    double value = std::nan("");
    std::string status = "ok";
    std::string message;
  };
  std::vector<Cell> cells;
  for (double T : temps)
    for (double g : couplings) {
      ModelParams p = config.model;
      p.T = T;
      p.g = g;
      cells.emplace_back().params = with_coupling(p, config.sweep.coupling);
    }

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      Cell& c = cells[i];
      try {
        c.value = sweep_point(c.params, config.sweep.observable);
      } catch (const ConfigError& e) {
        c.status = "config_error";
        c.message = e.what();
      } catch (const NumericalError& e) {
        c.status = "numerical_error";
        c.message = e.what();
      }
      spdlog::debug("sweep point {} (T = {}, g = {}): {}", i, c.params.T, c.params.g, c.status);
    }
  };
  {
    const int n = std::max(1, std::min<int>(workers, static_cast<int>(cells.size())));
    std::vector<std::jthread> pool;
    for (int w = 1; w < n; ++w) pool.emplace_back(work);
    work();
  }

  Table table({"index", "T", "g", "g_prime", "Omega", "Omega_prime", "N", "n_ph", "observable", "value", "status",
               "message"});
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    table.add({i, c.params.T, c.params.g, c.params.g_prime, c.params.Omega,
               c.params.Omega_prime, c.params.emitters, c.params.n_ph,
               std::string(to_string(config.sweep.observable)), c.status == "ok" ? json(c.value) : json(nullptr), c.status,
               c.message});
  }
  return finish(table, config, "sweep");
}

void write_artifacts(const Artifacts& artifacts, const std::string& path) {
  auto write = [](const std::string& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw ConfigError(fmt::format("cannot write \"{}\"", file));
    out << text;
  };
  if (path.empty()) {
    std::cout << artifacts.main;
    return;
  }
  write(path, artifacts.main);
  for (const auto& [suffix, text] : artifacts.sidecars) write(path + suffix, text);
}

}  // namespace dicke::app
