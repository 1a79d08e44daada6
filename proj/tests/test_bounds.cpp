#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "qsl/bounds.hpp"
#include "qsl/error.hpp"
#include "support.hpp"

using namespace qsl;
using qsl::testing::pure_density;
using qsl::testing::random_hermitian;
using qsl::testing::random_state;

namespace {

template <class F>
Errc error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected qsl::Error");
  return Errc::InvalidArgument;
}

const double kR2 = 1.0 / std::sqrt(2.0);

StateVector ket0(std::size_t d) {
  StateVector v(d);
  v[0] = 1.0;
  return v;
}

ComplexMatrix evolve(const ComplexMatrix& rho, const HermitianOperator& h, double t) {
  const auto u = mat_exp(h, t).matrix();
  return u * rho * u.adjoint();
}

double qubit_coherence(const ComplexMatrix& rho) { return 2.0 * std::abs(rho(0, 1)); }

OrderedBasis rotate(const OrderedBasis& b, std::span<const double> phases) {
  std::vector<cplx> diag;
  for (double p : phases) diag.push_back(std::polar(1.0, p));
  return OrderedBasis(ComplexMatrix::diagonal(diag) * b.columns());
}

}  // namespace

TEST_CASE("mean energy examples") {
  CHECK(mean_energy(construct_optimal(OptimalKind::TwoQubit)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mean_energy(construct_optimal(OptimalKind::QutritPlus)) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(mean_energy(construct_optimal(OptimalKind::QutritTilde)) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("mean energy is additive over independent qubits") {
  std::mt19937_64 rng(7);
  const auto id = ComplexMatrix::identity(2);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_hermitian(rng, 2);
    const auto b = random_hermitian(rng, 2);
    const double joint = mean_energy(hermitian_eig(kron(a, id) + kron(id, b)));
    CHECK(std::abs(joint - mean_energy(hermitian_eig(a)) - mean_energy(hermitian_eig(b))) < 1e-12);
  }
}

TEST_CASE("qubit transition bound") {
  const BlochVector z{{0, 0, 1}}, x{{1, 0, 0}}, mz{{0, 0, -1}};
  const auto r = qubit_transition_bound(z, x, 1.0);
  CHECK(r.value == doctest::Approx(kPi / 4));
  CHECK(r.tight == Tightness::Tight);
  CHECK(r.kind == BoundKind::Lower);
  CHECK(qubit_transition_bound(x, x, 1.0).value == doctest::Approx(0.0));
  CHECK(qubit_transition_bound(z, mz, 1.0).value == doctest::Approx(kPi / 2));
  CHECK(error_of([&] { qubit_transition_bound(BlochVector{}, x, 1.0); }) == Errc::ZeroBlochVector);
  CHECK(error_of([&] { qubit_transition_bound(z, x, 0.0); }) == Errc::InvalidArgument);
}

TEST_CASE("optimal qubit Hamiltonian reaches the target at the bound") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::pair<BlochVector, BlochVector>> pairs = {
      {{{0, 0, 1}}, {{1, 0, 0}}}, {{{0, 0, 1}}, {{0, 0, -1}}}, {{{0.3, 0.4, 0}}, {{-0.3, -0.4, 0}}},
      {{{0.6, 0.0, 0.8}}, {{0.6, 0.0, 0.8}}}};
  for (int i = 0; i < 200; ++i) {
    BlochVector a{{u(rng), u(rng), u(rng)}}, b{{u(rng), u(rng), u(rng)}};
    const double na = a.radius(), nb = b.radius();
    for (auto& c : a.r) c /= na;
    for (auto& c : b.r) c /= nb;
    pairs.push_back({a, b});
  }
  for (const auto& [a, b] : pairs) {
    const double energy = 0.7;
    const auto h = optimal_qubit_hamiltonian(a, b, energy);
    CHECK(mean_energy(h) == doctest::Approx(energy).epsilon(1e-12));
    CHECK(h.ground_energy() == doctest::Approx(0.0).scale(1.0));
    const double t = qubit_transition_bound(a, b, energy).value;
    const auto out = bloch_from_state(evolve(state_from_bloch(a), h, t));
    for (int k = 0; k < 3; ++k) CHECK(std::abs(out.r[k] - b.r[k]) < 1e-9);
  }
}

TEST_CASE("mixed qubit bound") {
  const auto rho0 = pure_density(StateVector{1.0, 0.0});
  const auto rhop = pure_density(StateVector{kR2, kR2});
  CHECK(mixed_qubit_bound(rho0, rhop, 1.0).value == doctest::Approx(kPi / 4));
  CHECK(mixed_qubit_bound(rhop, rhop, 1.0).value == doctest::Approx(0.0).scale(1.0));
  const auto a = state_from_bloch({{0, 0, 0.5}});
  const auto b = state_from_bloch({{0.5, 0, 0}});
  CHECK(mixed_qubit_bound(a, b, 1.0).value == doctest::Approx(kPi / 4));
  CHECK(error_of([] { mixed_qubit_bound(ComplexMatrix::identity(2) * cplx{0.5, 0}, ComplexMatrix::identity(2) * cplx{0.5, 0}, 1.0); }) ==
        Errc::MaximallyMixedInput);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.57, 0.57);
  for (int i = 0; i < 500; ++i) {
    const BlochVector r0{{u(rng), u(rng), u(rng)}}, r1{{u(rng), u(rng), u(rng)}};
    const double lhs = mixed_qubit_bound(state_from_bloch(r0), state_from_bloch(r1), 1.3).value;
    CHECK(std::abs(lhs - qubit_transition_bound(r0, r1, 1.3).value) < 1e-12);
  }
}

TEST_CASE("pure state bound") {
  const StateVector zero{1.0, 0.0}, plus{kR2, kR2}, one{0.0, 1.0};
  CHECK(pure_state_bound(plus, plus, 1.0, PureBoundMode::MeanEnergy).value == doctest::Approx(0.0).scale(1.0));
  const auto r = pure_state_bound(zero, plus, 0.5, PureBoundMode::MeanEnergy);
  CHECK(r.value == doctest::Approx(kPi / 2));
  CHECK(r.tight == Tightness::Tight);
  CHECK(pure_state_bound(zero, one, 1.0, PureBoundMode::Gap).value == doctest::Approx(kPi));
  CHECK(error_of([&] { pure_state_bound(zero, ket0(3), 1.0, PureBoundMode::Gap); }) == Errc::DimMismatch);
}

TEST_CASE("rank-one Hamiltonian saturates the pure-state bound") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const std::size_t d = 2 + i % 5;
    const auto psi0 = random_state(rng, d);
    const auto psi1 = random_state(rng, d);
    const auto h = construct_optimal_pure(psi0, psi1);
    const double energy = mean_energy(h);
    CHECK(energy == doctest::Approx(1.0 / static_cast<double>(d)).epsilon(1e-12));
    const double t = pure_state_bound(psi0, psi1, energy, PureBoundMode::MeanEnergy).value;
    const auto out = mat_exp(h, t).matrix() * std::span<const cplx>(psi0);
    CHECK(std::abs(std::abs(inner(psi1, out)) - 1.0) < 1e-9);
  }
  const auto same = random_state(rng, 3);
  const auto h = construct_optimal_pure(same, same);
  CHECK(mean_energy(h) > 0.0);
}

TEST_CASE("fmin closed form") {
  std::mt19937_64 rng(13);
  const auto h = hermitian_eig(random_hermitian(rng, 4));
  const double gap = h.gap();
  CHECK(fmin(h, 0.0).value == doctest::Approx(1.0));
  CHECK(fmin(h, kPi / gap).value == doctest::Approx(0.0).scale(1.0));
  CHECK(fmin(h, kPi / (2 * gap)).value == doctest::Approx(kR2));
  CHECK(error_of([&] { fmin(h, -0.1); }) == Errc::TimeOutOfRange);
  CHECK(error_of([&] { fmin(h, 1.01 * kPi / gap); }) == Errc::TimeOutOfRange);
}

TEST_CASE("fmin is a minimum over random states") {
  std::mt19937_64 rng(17);
  const auto h = hermitian_eig(random_hermitian(rng, 4));
  const double t = kPi / (2 * h.gap());
  const auto res = fmin(h, t);
  const auto u = mat_exp(h, t).matrix();
  const auto survival = [&](const StateVector& psi) {
    return std::abs(inner(psi, u * std::span<const cplx>(psi)));
  };
  CHECK(std::abs(survival(res.psi_min) - res.value) < 1e-12);
  double best = 1.0;
  for (int i = 0; i < 10000; ++i) best = std::min(best, survival(random_state(rng, 4)));
  CHECK(best >= res.value - 1e-12);
  CHECK(best <= res.value + 0.05);
}

TEST_CASE("unbiased bound table") {
  CHECK(unbiased_bound(2, 1.0).value == doctest::Approx(kPi / 4));
  const auto d3 = unbiased_bound(3, 1.0);
  CHECK(d3.value == doctest::Approx(2 * kPi / 9));
  CHECK(d3.tight == Tightness::Tight);
  CHECK(unbiased_bound(4, 1.0).value == doctest::Approx(kPi / 4));
  CHECK(unbiased_bound(4, 1.0).tight == Tightness::Tight);
  const auto d6 = unbiased_bound(6, 1.0);
  CHECK(std::abs(d6.value - 0.227) < 1e-3);
  CHECK(d6.value == doctest::Approx(0.22789247417633363).epsilon(1e-14));
  CHECK(d6.tight == Tightness::Unknown);
  CHECK(unbiased_bound(5, 2.0).value == doctest::Approx(kPi * 4 / (4 * 5 * 2.0)));
  CHECK(unbiased_bound(5, 2.0).tight == Tightness::Unknown);
  CHECK(unbiased_bound(2, 2.0).value == doctest::Approx(kPi / 8));
  CHECK(error_of([] { unbiased_bound(1, 1.0); }) == Errc::BadDimension);
  for (std::size_t d = 2; d < 40; ++d) {
    const auto r = unbiased_bound(d, 1.7);
    CHECK(r.value == doctest::Approx(r.g / 1.7).epsilon(1e-15));
    CHECK(general_unbiased_bound(d, 1.0).value < kPi / 4);
  }
}

TEST_CASE("tilde, n-qubit and permutation bounds") {
  CHECK(qutrit_tilde_bound(1.0).value == doctest::Approx(4 * kPi / 9));
  CHECK(qutrit_tilde_bound(2.0 / 3.0).value == doctest::Approx(2 * kPi / 3));
  CHECK(qutrit_tilde_bound(1e12).value < 1e-11);
  CHECK(qutrit_tilde_bound(1.0).tight == Tightness::Unknown);

  const auto n1 = nqubit_upper_bound(1, 1.0);
  CHECK(n1.interacting.value == doctest::Approx(kPi / 2));
  CHECK(n1.interacting.kind == BoundKind::Upper);
  CHECK(n1.non_interacting.value == doctest::Approx(kPi / 4));
  const auto n4 = nqubit_upper_bound(4, 1.0);
  CHECK(n4.interacting.value == doctest::Approx(kPi / 2));
  CHECK(n4.non_interacting.value == doctest::Approx(kPi));
  CHECK(unbiased_bound(4, 1.0).value <= nqubit_upper_bound(2, 1.0).interacting.value);

  CHECK(perm_bound(2, 1.0).value == doctest::Approx(kPi / 2));
  CHECK(perm_bound(3, 1.0).value == doctest::Approx(2 * kPi / 3));
  CHECK(perm_bound(100000, 1.0).value == doctest::Approx(kPi).epsilon(1e-4));
  CHECK(perm_bound(3, 1.0).tight == Tightness::Tight);
}

TEST_CASE("cyclic shift eigenphases") {
  for (std::size_t d = 2; d <= 8; ++d) {
    const auto u = unitary_eigphases(cyclic_shift(d));
    std::vector<double> expected;
    double total = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double a = 2 * kPi * static_cast<double>(j) / static_cast<double>(d);
      total += a;
      double p = principal_angle(-a);
      if (std::abs(p + kPi) < 1e-9) p = kPi;
      expected.push_back(p);
    }
    std::sort(expected.begin(), expected.end());
    for (std::size_t j = 0; j < d; ++j) CHECK(std::abs(u.eigenphases()[j] - expected[j]) < 1e-9);
    CHECK(total == doctest::Approx(kPi * (d - 1.0)).epsilon(1e-14));
  }
}

TEST_CASE("constraint check") {
  const auto two = construct_optimal(OptimalKind::TwoQubit);
  const auto c = constraint_check(two, kPi / 4);
  CHECK(c.value == doctest::Approx(std::sqrt(2.0)));
  CHECK(c.satisfied);
  const auto zero = constraint_check(two, 0.0);
  CHECK(zero.value == doctest::Approx(4.0));
  CHECK_FALSE(zero.satisfied);
  const auto plus = constraint_check(construct_optimal(OptimalKind::QutritPlus), 2 * kPi / 3);
  CHECK(plus.value == doctest::Approx(1.5));
  CHECK(plus.satisfied);
}

TEST_CASE("constructed Hamiltonians") {
  const auto two = construct_optimal(OptimalKind::TwoQubit).matrix();
  const ComplexMatrix expected(4, {0, -1, -1, -1,  //
                                   -1, 0, 1, 1,    //
                                   -1, 1, 0, 1,    //
                                   -1, 1, 1, 0});
  CHECK(two.max_diff(expected) < 1e-15);
  const auto two_op = construct_optimal(OptimalKind::TwoQubit);
  const auto eig = two_op.eigenvalues();
  CHECK(eig[0] == doctest::Approx(-1.0));
  CHECK(eig[3] == doctest::Approx(3.0));
  CHECK(construct_optimal(OptimalKind::NQubitHadamard, 1).matrix().max_diff(hadamard()) < 1e-15);
  const auto plus = construct_optimal(OptimalKind::QutritPlus);
  CHECK(std::abs(plus.eigenvalues()[0]) < 1e-12);
  CHECK(std::abs(plus.eigenvalues()[1]) < 1e-12);
  CHECK(plus.eigenvalues()[2] == doctest::Approx(1.0));
  CHECK(parse_optimal_kind("two_qubit") == OptimalKind::TwoQubit);
  CHECK(error_of([] { parse_optimal_kind("three_qubit"); }) == Errc::BadKind);
}

TEST_CASE("achieves transform examples") {
  const auto check = achieves_transform(construct_optimal(OptimalKind::TwoQubit), kPi / 4,
                                        standard_basis(BasisKind::Computational, 4),
                                        two_qubit_unbiased_target());
  CHECK(check.achieved);
  for (double p : check.recovered_phases) CHECK(std::abs(p - kPi / 4) < 1e-9);

  const auto plus = construct_optimal(OptimalKind::QutritPlus);
  const auto comp3 = standard_basis(BasisKind::Computational, 3);
  const auto plus_basis = standard_basis(BasisKind::QutritPlus, 3);
  CHECK(achieves_transform(plus, 2 * kPi / 3, comp3, plus_basis).achieved);
  CHECK_FALSE(achieves_transform(plus, 0.0, comp3, plus_basis).achieved);
  CHECK(error_of([&] { achieves_transform(plus, 1.0, comp3, two_qubit_unbiased_target()); }) ==
        Errc::DimMismatch);
}

TEST_CASE("saturation suite reaches every target at its bound") {
  const auto comp = [](std::size_t d) { return standard_basis(BasisKind::Computational, d); };
  for (const auto& c : saturation_suite()) {
    CAPTURE(c.name);
    const std::size_t d = c.hamiltonian.dim();
    const auto res = achieves_transform(c.hamiltonian, c.time, comp(d), c.target, 1e-9);
    CHECK(res.achieved);
    CHECK(c.time * mean_energy(c.hamiltonian) == doctest::Approx(c.et).epsilon(1e-14));
    CHECK(is_unbiased(comp(d), c.target));
    // Reaching an unbiased basis requires the cosine constraint.
    CHECK(constraint_check(c.hamiltonian, c.time).satisfied);
  }
}

TEST_CASE("saturation survives diagonal rotations") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (const auto& c : saturation_suite(4)) {
    const std::size_t d = c.hamiltonian.dim();
    for (int i = 0; i < 20; ++i) {
      std::vector<double> phases(d);
      for (auto& p : phases) p = angle(rng);
      const auto h = conjugate_hamiltonian(c.hamiltonian, phases);
      CHECK(std::abs(mean_energy(h) - mean_energy(c.hamiltonian)) < 1e-12);
      CHECK(achieves_transform(h, c.time, standard_basis(BasisKind::Computational, d),
                               rotate(c.target, phases), 1e-9)
                .achieved);
    }
  }
}

TEST_CASE("conjugate hamiltonian examples") {
  const auto plus = construct_optimal(OptimalKind::QutritPlus);
  CHECK(conjugate_hamiltonian(plus, ComplexMatrix::identity(3)).matrix().max_diff(plus.matrix()) < 1e-15);
  const std::vector<double> v = {0.0, 0.7, 1.3};
  std::vector<cplx> diag;
  for (double p : v) diag.push_back(std::polar(1.0, p));
  const auto h = conjugate_hamiltonian(plus, ComplexMatrix::diagonal(diag));
  const auto target = rotate(standard_basis(BasisKind::QutritPlus, 3), v);
  CHECK(achieves_transform(h, 2 * kPi / 3, standard_basis(BasisKind::Computational, 3), target).achieved);
  CHECK(error_of([&] { conjugate_hamiltonian(plus, cyclic_shift(3)); }) == Errc::NotDiagonalUnitary);
  CHECK(error_of([&] { conjugate_hamiltonian(plus, ComplexMatrix::identity(3) * cplx{2, 0}); }) ==
        Errc::NotDiagonalUnitary);
}

TEST_CASE("plus return fidelity curve") {
  const auto h = construct_optimal(OptimalKind::QutritPlus);
  double lowest = 1.0;
  for (int i = 0; i < 100; ++i) {
    const double t = 2 * kPi * i / 99.0;
    const double f = std::norm(mat_exp(h, t).matrix()(0, 0));
    CHECK(std::abs(f - plus_return_fidelity(t)) < 1e-10);
    lowest = std::min(lowest, f);
  }
  CHECK(lowest > 0.0);
  CHECK(std::abs(lowest - 1.0 / 9.0) < 1e-2);
  CHECK(plus_return_fidelity(kPi) == doctest::Approx(1.0 / 9.0));
  CHECK(plus_return_fidelity(2 * kPi / 3) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("qubit coherence closed forms") {
  const auto zero = pure_density(StateVector{1.0, 0.0});
  CHECK(coherence_max_qubit(zero, 1.0, kPi / 4) == doctest::Approx(1.0));
  CHECK(t_mc(zero, 1.0) == doctest::Approx(kPi / 4));
  const auto plus = state_from_bloch({{1, 0, 0}});
  CHECK(coherence_max_qubit(plus, 1.0, 0.0) == doctest::Approx(1.0));
  const auto half = state_from_bloch({{0, 0, 0.5}});
  CHECK(t_mc(half, 1.0) == doctest::Approx(kPi / 4));
  CHECK(coherence_max_qubit(half, 1.0, 10.0) == doctest::Approx(0.5));
  CHECK(error_of([] { t_mc(ComplexMatrix::identity(2) * cplx{0.5, 0}, 1.0); }) == Errc::ZeroBlochVector);

  for (double theta : {0.1, 0.7, 1.2, 2.0, 2.9}) {
    const auto rho = pure_density(qubit_state(theta, 0.4));
    for (double t : {0.0, 0.1, 0.3}) {
      const double expected = std::sin(std::min(kPi / 2, std::min(theta, kPi - theta) + 2 * t));
      CHECK(coherence_max_qubit(rho, 1.0, t) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("coherence formula against random rotation axes") {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < 20; ++s) {
    BlochVector r{{g(rng), g(rng), g(rng)}};
    const double scale = (0.2 + 0.8 * u(rng)) / r.radius();
    for (auto& c : r.r) c *= scale;
    const auto rho = state_from_bloch(r);
    const double energy = 0.5 + u(rng);
    const double t = u(rng) * t_mc(rho, energy);
    const double bound = coherence_max_qubit(rho, energy, t);
    for (int i = 0; i < 500; ++i) {
      std::array<double, 3> n{g(rng), g(rng), g(rng)};
      const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
      for (auto& c : n) c /= len;
      const auto out = evolve(rho, qubit_axis_hamiltonian(n, energy), t);
      CHECK(qubit_coherence(out) <= bound + 1e-6);
    }
    const auto best = evolve(rho, qubit_axis_hamiltonian(optimal_coherence_axis(rho), energy), t);
    CHECK(std::abs(qubit_coherence(best) - bound) < 1e-9);
  }
}

TEST_CASE("maximally coherent limit") {
  CHECK(mc_speed_limit(ket0(2), 1.0).value == doctest::Approx(kPi / 4));
  CHECK(mc_speed_limit(max_coherent_state(5), 1.0).value < 1e-7);
  CHECK(mc_speed_limit(ket0(3), 1.0).value == doctest::Approx(0.6368777454163396).epsilon(1e-14));
  CHECK(error_of([] { mc_speed_limit(StateVector{1.0, 1.0}, 1.0); }) == Errc::NotNormalized);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t d = 2 + i % 6;
    const auto psi = random_state(rng, d);
    std::vector<double> phases(d);
    for (auto& p : phases) p = angle(rng);
    const auto target = max_coherent_state(d, phases);
    CHECK(mc_speed_limit(psi, 1.0).value <=
          pure_state_bound(psi, target, 1.0, PureBoundMode::MeanEnergy).value + 1e-12);
  }
}

TEST_CASE("reference mixed-state bound") {
  const StateVector zero{1.0, 0.0}, one{0.0, 1.0}, plus{kR2, kR2};
  const auto sx = hermitian_eig(pauli(0));
  CHECK(reference_mixed_bound(pure_density(plus), pure_density(plus), hermitian_eig(pauli(2))) ==
        doctest::Approx(0.0).scale(1.0));
  CHECK(reference_mixed_bound(pure_density(zero), pure_density(plus), sx) == doctest::Approx(kPi / 4));
  CHECK(reference_mixed_bound(pure_density(zero), pure_density(one), sx) == doctest::Approx(kPi / 2));
  CHECK(error_of([&] { reference_mixed_bound(pure_density(zero), pure_density(one), hermitian_eig(pauli(2))); }) ==
        Errc::ZeroDenominator);

  // Uhlmann fidelity of commuting states is the classical Bhattacharyya overlap.
  const auto a = ComplexMatrix::diagonal(std::vector<cplx>{0.7, 0.3});
  const auto b = ComplexMatrix::diagonal(std::vector<cplx>{0.2, 0.8});
  const double f = std::sqrt(0.7 * 0.2) + std::sqrt(0.3 * 0.8);
  const double spread = 2 * std::sqrt(0.7 * 0.3);
  CHECK(reference_mixed_bound(a, b, hermitian_eig(pauli(2))) ==
        doctest::Approx(std::acos(f) / std::min(spread, 1.4)));
}
