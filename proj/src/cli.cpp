#include "qsl/cli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "qsl/bounds.hpp"
#include "qsl/error.hpp"
#include "qsl/montecarlo.hpp"
#include "qsl/oracle.hpp"

namespace qsl {

namespace {

using nlohmann::json;

std::string num(double x) { return fmt::format("{:.17g}", x); }

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::optional<std::size_t> d;
  std::optional<std::size_t> n;
  double energy = 1.0;
  std::uint64_t samples = kDefaultSamples;
  std::uint64_t seed = 42;
  std::size_t bins = kDefaultBins;
  double tol = 1e-9;
  std::string target = "tilde";
  std::vector<std::string> only;
  std::string out_path;
  std::string format = "text";
  std::string bloch;
  std::optional<double> theta;
  double phi = 0.0;
};

// Writes to --out when given, otherwise to the command's stream.
void emit(const Config& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out_path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + cfg.out_path + "' for writing");
  f << text;
  f.close();
  if (!f) throw IoError("failed writing '" + cfg.out_path + "'");
}

// ---- bounds ---------------------------------------------------------------

int cmd_bounds(const Config& cfg, std::ostream& out) {
  std::size_t d = 0;
  std::optional<std::size_t> qubits;
  if (cfg.n) {
    if (*cfg.n < 1 || *cfg.n > 10) throw UsageError("--n must be in [1, 10]");
    qubits = *cfg.n;
    d = std::size_t{1} << *cfg.n;
    if (cfg.d && *cfg.d != d) throw UsageError("--d and --n disagree");
  } else if (cfg.d) {
    d = *cfg.d;
    if (d >= 2 && (d & (d - 1)) == 0) qubits = static_cast<std::size_t>(std::countr_zero(d));
  } else {
    throw UsageError("bounds needs --d or --n");
  }
  if (d < 2) throw UsageError("--d must be >= 2");

  std::vector<BoundReport> reports = {unbiased_bound(d, cfg.energy)};
  if (d == 2 || d == 3 || d == 4 || d == 6) reports.push_back(general_unbiased_bound(d, cfg.energy));
  if (d == 3) reports.push_back(qutrit_tilde_bound(cfg.energy));
  if (qubits) {
    const auto nq = nqubit_upper_bound(*qubits, cfg.energy);
    reports.push_back(nq.interacting);
    reports.push_back(nq.non_interacting);
  }
  reports.push_back(perm_bound(d, cfg.energy));

  if (cfg.format == "json") {
    json j = {{"d", d}, {"bounds", json::array()}};
    for (const auto& r : reports)
      j["bounds"].push_back({{"value", r.value},
                             {"kind", to_string(r.kind)},
                             {"tight", to_string(r.tight)},
                             {"g", r.g},
                             {"source", r.source}});
    emit(cfg, out, j.dump(2) + "\n");
    return kExitOk;
  }
  std::string text = fmt::format("d = {}, E = {}\n", d, num(cfg.energy));
  for (const auto& r : reports) {
    text += fmt::format("{:<26} {:<5} {:<9} g = {:<22} {}", num(r.value), to_string(r.kind),
                        to_string(r.tight), num(r.g), r.source);
    if (!r.note.empty()) text += " (" + r.note + ")";
    text += "\n";
  }
  emit(cfg, out, text);
  return kExitOk;
}

// ---- sample ---------------------------------------------------------------

int cmd_sample(const Config& cfg, std::ostream& out) {
  if (cfg.target != "plus" && cfg.target != "tilde") throw UsageError("--target must be plus or tilde");
  if (cfg.samples < 1) throw UsageError("--samples must be >= 1");
  if (cfg.bins < 1) throw UsageError("--bins must be >= 1");
  const bool tilde = cfg.target == "tilde";
  const auto h = tilde ? sample_tilde(cfg.samples, cfg.seed, cfg.bins) : sample_plus(cfg.samples, cfg.seed, cfg.bins);
  const double bound = tilde ? 4.0 * kPi / 9.0 : 2.0 * kPi / 9.0;

  std::string body;
  if (cfg.format == "json") {
    json j = {{"target", cfg.target}, {"n_samples", h.n_samples}, {"seed", h.seed},
              {"min_et", h.min_et},   {"bin_edges", h.bin_edges},  {"counts", h.counts}};
    body = j.dump() + "\n";
  } else {
    std::ostringstream csv;
    write_histogram_csv(csv, h);
    body = csv.str();
  }
  emit(cfg, out, body);
  if (!cfg.out_path.empty()) {
    out << fmt::format("target = {}\nn_samples = {}\nseed = {}\nmin_et = {}\nbound = {}\nexcess = {}\n",
                       cfg.target, h.n_samples, h.seed, num(h.min_et), num(bound), num(h.min_et - bound));
  }
  return kExitOk;
}

// ---- coherence ------------------------------------------------------------

BlochVector parse_bloch(const std::string& text) {
  BlochVector b;
  std::stringstream ss(text);
  std::string part;
  int k = 0;
  while (std::getline(ss, part, ',')) {
    if (k >= 3) throw UsageError("--bloch takes exactly three components");
    try {
      std::size_t used = 0;
      b.r[k] = std::stod(part, &used);
      if (used != part.size()) throw UsageError("malformed --bloch component '" + part + "'");
    } catch (const std::logic_error&) {
      throw UsageError("malformed --bloch component '" + part + "'");
    }
    ++k;
  }
  if (k != 3) throw UsageError("--bloch takes exactly three components");
  for (double x : b.r)
    if (!std::isfinite(x)) throw UsageError("--bloch components must be finite");
  if (b.radius() > 1.0 + 1e-12) throw UsageError("--bloch vector must have |r| <= 1");
  if (b.radius() <= 1e-15) throw UsageError("--bloch vector must be nonzero");
  return b;
}

int cmd_coherence(const Config& cfg, std::ostream& out) {
  const bool has_bloch = !cfg.bloch.empty();
  if (has_bloch == cfg.theta.has_value()) throw UsageError("give exactly one of --bloch or --theta");
  ComplexMatrix rho;
  std::optional<StateVector> psi;
  if (has_bloch) {
    rho = state_from_bloch(parse_bloch(cfg.bloch));
  } else {
    psi = qubit_state(*cfg.theta, cfg.phi);
    rho = ComplexMatrix::outer(*psi, *psi);
  }
  const BlochVector r = bloch_from_state(rho);
  if (!psi && std::abs(r.radius() - 1.0) < 1e-12) {
    const auto eig = hermitian_eig(rho, Tolerances{.hermitian = 1e-9});
    psi = eig.eigenvectors().column(1);
  }

  const double tmc = t_mc(rho, cfg.energy);
  const double horizon = tmc > 0.0 ? 1.25 * tmc : kPi / (4.0 * cfg.energy);
  std::vector<std::pair<double, double>> table;
  for (int i = 0; i <= 20; ++i) {
    const double t = horizon * i / 20.0;
    table.emplace_back(t, coherence_max_qubit(rho, cfg.energy, t));
  }
  std::optional<double> mc;
  if (psi) mc = mc_speed_limit(*psi, cfg.energy).value;

  if (cfg.format == "json") {
    json j = {{"bloch", r.r}, {"energy", cfg.energy}, {"t_mc", tmc}, {"c_max", json::array()}};
    for (const auto& [t, c] : table) j["c_max"].push_back({{"t", t}, {"c_max", c}});
    j["mc_speed_limit"] = mc ? json(*mc) : json(nullptr);
    emit(cfg, out, j.dump(2) + "\n");
    return kExitOk;
  }
  std::string text = fmt::format("bloch = ({}, {}, {})\nE = {}\nT_mc = {}\n", num(r.r[0]), num(r.r[1]),
                                 num(r.r[2]), num(cfg.energy), num(tmc));
  text += mc ? fmt::format("mc_speed_limit = {}\n", num(*mc)) : "mc_speed_limit = n/a (mixed state)\n";
  text += "t,c_max\n";
  for (const auto& [t, c] : table) text += fmt::format("{},{}\n", num(t), num(c));
  emit(cfg, out, text);
  return kExitOk;
}

// ---- verify ---------------------------------------------------------------

CheckResult make_check(std::string name, double error, double limit, std::string detail = {}) {
  return CheckResult{std::move(name), error <= limit, error, std::move(detail)};
}

std::vector<CheckResult> check_saturation(double tol) {
  std::vector<CheckResult> out;
  const auto cases = saturation_suite(8);
  for (const auto& c : cases) {
    const std::size_t d = c.hamiltonian.dim();
    const auto res = achieves_transform(c.hamiltonian, c.time, standard_basis(BasisKind::Computational, d),
                                        c.target, tol);
    out.push_back(CheckResult{"saturation/" + c.name, res.achieved, res.max_column_error,
                              "Et = " + num(c.et)});
  }
  return out;
}

std::vector<CheckResult> check_constraint() {
  std::vector<CheckResult> out;
  for (const auto& c : saturation_suite(8)) {
    const auto cc = constraint_check(c.hamiltonian, c.time);
    const double margin = std::abs(cc.value) - std::sqrt(static_cast<double>(c.hamiltonian.dim()));
    out.push_back(CheckResult{"constraint/" + c.name, cc.satisfied, std::max(margin, 0.0),
                              "sum cos = " + num(cc.value)});
  }
  return out;
}

std::vector<CheckResult> check_two_qubit(double tol) {
  const auto h = construct_optimal(OptimalKind::TwoQubit);
  const double spectrum[] = {-1.0, -1.0, -1.0, 3.0};
  double err = 0.0;
  for (std::size_t j = 0; j < 4; ++j) err = std::max(err, std::abs(h.eigenvalues()[j] - spectrum[j]));
  const auto res = achieves_transform(h, kPi / 4, standard_basis(BasisKind::Computational, 4),
                                      two_qubit_unbiased_target(), tol);
  double phase_err = 0.0;
  for (double p : res.recovered_phases) phase_err = std::max(phase_err, std::abs(principal_angle(p - kPi / 4)));
  return {make_check("two_qubit/spectrum", err, 1e-10),
          make_check("two_qubit/mean_energy", std::abs(mean_energy(h) - 1.0), 1e-12),
          CheckResult{"two_qubit/mapping", res.achieved, res.max_column_error, {}},
          make_check("two_qubit/phases", phase_err, 1e-9)};
}

std::vector<CheckResult> check_cos_sum(const std::vector<std::size_t>& dims) {
  std::vector<CheckResult> out;
  std::vector<std::size_t> ds = dims;
  if (ds.empty()) ds = {2, 3, 4, 5, 6, 7};
  for (std::size_t d : ds) {
    const auto r = minimize_cos_sum(RegionSpec{d, theorem4_sum_cap(d)}, kOracleGrid);
    const double margin = r.min_value - std::sqrt(static_cast<double>(d));
    out.push_back(CheckResult{fmt::format("cos_sum/d={}", d), margin > -1e-6, margin,
                              "min sum cos = " + num(r.min_value)});
  }
  return out;
}

std::vector<CheckResult> check_d6() {
  const auto r = minimize_cos_sum(RegionSpec{6, d6_sum_cap()}, kOracleGrid);
  const double margin = r.min_value - std::sqrt(6.0);
  return {CheckResult{"d6/region", margin > -1e-6, margin, "min sum cos = " + num(r.min_value)},
          make_check("d6/constant", std::abs(d6_bound_constant() - 0.227), 2e-3,
                     "constant = " + num(d6_bound_constant()))};
}

std::vector<CheckResult> check_permutation() {
  std::vector<CheckResult> out;
  for (std::size_t d = 2; d <= 8; ++d) {
    const auto u = unitary_eigphases(cyclic_shift(d));
    std::vector<double> expected;
    double total = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double a = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(d);
      total += a;
      double p = principal_angle(-a);
      if (std::abs(p + kPi) < 1e-9) p = kPi;
      expected.push_back(p);
    }
    std::sort(expected.begin(), expected.end());
    double err = 0.0;
    for (std::size_t j = 0; j < d; ++j) err = std::max(err, std::abs(u.eigenphases()[j] - expected[j]));
    err = std::max(err, std::abs(total - kPi * static_cast<double>(d - 1)));
    out.push_back(make_check(fmt::format("permutation/d={}", d), err, 1e-9));
  }
  return out;
}

std::vector<CheckResult> check_root() {
  const auto root = unitary_root(unitary_eigphases(cyclic_shift(3)), 2);
  const ComplexMatrix expected(3, {2.0 / 3, -1.0 / 3, 2.0 / 3,  //
                                   2.0 / 3, 2.0 / 3, -1.0 / 3,  //
                                   -1.0 / 3, 2.0 / 3, 2.0 / 3});
  return {make_check("root/shift_square_root", root.max_diff(expected), 1e-12)};
}

std::vector<CheckResult> check_fidelity() {
  const auto h = construct_optimal(OptimalKind::QutritPlus);
  double err = 0.0, lowest = 1.0;
  for (int i = 0; i < 100; ++i) {
    const double t = 2.0 * kPi * i / 99.0;
    const double f = std::norm(mat_exp(h, t).matrix()(0, 0));
    err = std::max(err, std::abs(f - plus_return_fidelity(t)));
    lowest = std::min(lowest, f);
  }
  return {make_check("fidelity/curve", err, 1e-10),
          CheckResult{"fidelity/never_zero", lowest >= 1.0 / 9.0 - 1e-10, lowest, "grid minimum"}};
}

std::vector<CheckResult> check_coherence() {
  std::mt19937_64 rng(20240601);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double excess = -1.0, attain = 0.0;
  for (int s = 0; s < 10; ++s) {
    BlochVector r{{g(rng), g(rng), g(rng)}};
    const double scale = (0.2 + 0.8 * u(rng)) / r.radius();
    for (auto& c : r.r) c *= scale;
    const auto rho = state_from_bloch(r);
    const double energy = 0.5 + u(rng);
    const double t = u(rng) * t_mc(rho, energy);
    const double bound = coherence_max_qubit(rho, energy, t);
    for (int i = 0; i < 1000; ++i) {
      std::array<double, 3> n{g(rng), g(rng), g(rng)};
      const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
      for (auto& c : n) c /= len;
      const auto uu = mat_exp(qubit_axis_hamiltonian(n, energy), t).matrix();
      const auto out = uu * rho * uu.adjoint();
      excess = std::max(excess, 2.0 * std::abs(out(0, 1)) - bound);
    }
    const auto uu = mat_exp(qubit_axis_hamiltonian(optimal_coherence_axis(rho), energy), t).matrix();
    const auto best = uu * rho * uu.adjoint();
    attain = std::max(attain, std::abs(2.0 * std::abs(best(0, 1)) - bound));
  }
  StateVector zero{1.0, 0.0};
  return {CheckResult{"coherence/no_axis_beats_formula", excess <= 1e-6, std::max(excess, 0.0), {}},
          make_check("coherence/optimal_axis_attains", attain, 1e-9),
          make_check("coherence/mc_limit_qubit", std::abs(mc_speed_limit(zero, 1.0).value - kPi / 4), 1e-12)};
}

std::vector<CheckResult> check_classifier() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  int wrong = 0;
  double err = 0.0;
  for (int i = 0; i < 1000; ++i) {
    QutritClass c;
    c.tag = i % 2 ? QutritClassTag::Plus : QutritClassTag::Tilde;
    c.diagonal_phases = {angle(rng), angle(rng)};
    c.element_phases = {angle(rng), angle(rng), angle(rng)};
    const auto got = classify_qutrit_unbiased(construct_qutrit_basis(c));
    if (got.tag != c.tag) ++wrong;
    for (std::size_t k = 0; k < 2; ++k)
      err = std::max(err, std::abs(principal_angle(got.diagonal_phases[k] - c.diagonal_phases[k])));
    for (std::size_t k = 0; k < 3; ++k)
      err = std::max(err, std::abs(principal_angle(got.element_phases[k] - c.element_phases[k])));
  }
  return {CheckResult{"classifier/round_trip", wrong == 0 && err <= 1e-8, err,
                      fmt::format("{} misclassified", wrong)}};
}

std::vector<CheckResult> check_sampling() {
  std::vector<CheckResult> out;
  for (const bool tilde : {false, true}) {
    const auto h = tilde ? sample_tilde(kDefaultSamples, 42) : sample_plus(kDefaultSamples, 42);
    const double bound = tilde ? 4.0 * kPi / 9.0 : 2.0 * kPi / 9.0;
    const double excess = h.min_et - bound;
    out.push_back(CheckResult{tilde ? "sampling/tilde" : "sampling/plus", excess >= -1e-9 && excess <= 0.01,
                              excess, "min_et = " + num(h.min_et)});
  }
  return out;
}

std::vector<CheckResult> check_transform_search() {
  const double plus = min_et_for_transform(standard_basis(BasisKind::QutritPlus, 3), 32);
  const double tilde = min_et_for_transform(standard_basis(BasisKind::QutritTilde, 3), 32);
  const double two = min_et_for_transform(two_qubit_unbiased_target(), 16);
  const auto in_window = [](double value, double bound) {
    return value >= bound - 1e-6 && value <= bound + 5e-3;
  };
  return {CheckResult{"search/plus", in_window(plus, 2 * kPi / 9), plus - 2 * kPi / 9, {}},
          CheckResult{"search/tilde", in_window(tilde, 4 * kPi / 9), tilde - 4 * kPi / 9, {}},
          CheckResult{"search/two_qubit", in_window(two, kPi / 4), two - kPi / 4, {}}};
}

int cmd_verify(const Config& cfg, std::ostream& out) {
  if (!(cfg.tol > 0.0)) throw UsageError("--tol must be positive");
  const auto names = verify_check_names();
  std::vector<std::string> selected = cfg.only.empty() ? names : cfg.only;
  for (const auto& s : selected)
    if (std::find(names.begin(), names.end(), s) == names.end())
      throw UsageError("unknown check '" + s + "'");
  std::vector<std::size_t> dims;
  if (cfg.d) {
    if (*cfg.d < 2 || *cfg.d > 7) throw UsageError("cos_sum oracle needs --d in [2, 7]");
    dims.push_back(*cfg.d);
  }

  std::vector<CheckResult> results;
  for (const auto& s : selected) {
    auto r = run_verify_check(s, cfg.tol, dims);
    results.insert(results.end(), r.begin(), r.end());
  }
  bool all = true;
  std::string text;
  if (cfg.format == "json") {
    json j = json::array();
    for (const auto& r : results)
      j.push_back({{"name", r.name}, {"pass", r.pass}, {"error", r.error}, {"detail", r.detail}});
    text = j.dump(2) + "\n";
  }
  for (const auto& r : results) {
    all = all && r.pass;
    if (cfg.format != "json") {
      text += fmt::format("{} {} error={}", r.pass ? "PASS" : "FAIL", r.name, num(r.error));
      if (!r.detail.empty()) text += " (" + r.detail + ")";
      text += "\n";
    }
  }
  if (cfg.format != "json")
    text += fmt::format("{} of {} checks passed\n",
                        std::count_if(results.begin(), results.end(), [](const auto& r) { return r.pass; }),
                        results.size());
  emit(cfg, out, text);
  return all ? kExitOk : kExitVerifyFailed;
}

}  // namespace

std::vector<std::string> verify_check_names() {
  return {"saturation", "two_qubit",  "constraint", "cos_sum", "d6",       "permutation",
          "root",       "fidelity",   "coherence",  "classifier", "sampling", "search"};
}

std::vector<CheckResult> run_verify_check(const std::string& name, double tol,
                                          const std::vector<std::size_t>& oracle_dims) {
  if (name == "saturation") return check_saturation(tol);
  if (name == "two_qubit") return check_two_qubit(tol);
  if (name == "constraint") return check_constraint();
  if (name == "cos_sum") return check_cos_sum(oracle_dims);
  if (name == "d6") return check_d6();
  if (name == "permutation") return check_permutation();
  if (name == "root") return check_root();
  if (name == "fidelity") return check_fidelity();
  if (name == "coherence") return check_coherence();
  if (name == "classifier") return check_classifier();
  if (name == "sampling") return check_sampling();
  if (name == "search") return check_transform_search();
  throw Error(Errc::BadKind, "unknown check '" + name + "'");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum speed limits for basis transformations", "qsl"};
  app.require_subcommand(1);
  Config cfg;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--energy", cfg.energy, "Mean energy E above the ground state")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", cfg.out_path, "Write the report to this file");
  };

  auto* bounds = app.add_subcommand("bounds", "Print every applicable bound for a dimension");
  bounds->add_option("--d", cfg.d, "Hilbert-space dimension");
  bounds->add_option("--n", cfg.n, "Number of qubits (d = 2^n)");
  bounds->add_option("--format", cfg.format)->check(CLI::IsMember({"text", "json"}));
  add_common(bounds);

  auto* sample = app.add_subcommand("sample", "Histogram of minimal Et over random-phase unitaries");
  sample->add_option("--target", cfg.target, "plus or tilde qutrit basis")->check(CLI::IsMember({"plus", "tilde"}));
  sample->add_option("--samples", cfg.samples)->check(CLI::PositiveNumber);
  sample->add_option("--seed", cfg.seed);
  sample->add_option("--bins", cfg.bins)->check(CLI::PositiveNumber);
  sample->add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "json"}));
  sample->add_option("--out", cfg.out_path, "Histogram file");

  auto* verify = app.add_subcommand("verify", "Run the numerical checks and report PASS/FAIL");
  verify->add_option("--only", cfg.only, "Restrict to these checks")->delimiter(',');
  verify->add_option("--d", cfg.d, "Dimension for the cos_sum oracle");
  verify->add_option("--tol", cfg.tol, "Column tolerance for transform checks");
  verify->add_option("--format", cfg.format)->check(CLI::IsMember({"text", "json"}));
  verify->add_option("--out", cfg.out_path);

  auto* coherence = app.add_subcommand("coherence", "Maximal qubit coherence over time");
  coherence->add_option("--bloch", cfg.bloch, "Bloch vector rx,ry,rz");
  coherence->add_option("--theta", cfg.theta, "Polar angle of a pure state");
  coherence->add_option("--phi", cfg.phi, "Azimuth of a pure state");
  coherence->add_option("--format", cfg.format)->check(CLI::IsMember({"text", "json"}));
  add_common(coherence);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*bounds) return cmd_bounds(cfg, out);
    if (*sample) {
      if (cfg.format == "text") cfg.format = "csv";
      return cmd_sample(cfg, out);
    }
    if (*verify) return cmd_verify(cfg, out);
    return cmd_coherence(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace qsl
