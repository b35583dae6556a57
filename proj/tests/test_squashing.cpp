#include <doctest.h>

#include <cmath>

#include "qkdlab/squashing.hpp"

using namespace qkdlab;

TEST_CASE("identity problem is feasible by construction") {
    auto problem = make_squash_preset(MultiPhotonMeasurement::Bb84Active, 1);
    // cutoff 1: the full space IS the qubit space
    CHECK(problem.full_dim() == 2);
    for (std::size_t i = 0; i < problem.target.outcomes(); ++i)
        CHECK(max_abs(problem.target.elements[i] - problem.full.elements[i]) < 1e-12);

    auto cert = check_feasibility(problem);
    CHECK(cert.verdict == SquashVerdict::Feasible);
    CHECK(cert.min_eigenvalue >= -1e-8);
    CHECK(cert.constraint_residual <= 1e-8);
}

TEST_CASE("inconsistent constraints give an immediate infeasible verdict") {
    // two identical target elements forced onto two different full elements
    Mat half = 0.5 * Mat::Identity(2, 2);
    Povm target(2, {half, half});
    CVec z0(2), z1(2);
    z0 << 1, 0;
    z1 << 0, 1;
    Povm full(2, {z0 * z0.adjoint(), z1 * z1.adjoint()});
    SquashProblem problem(target, full);

    auto slice = build_constraints(problem);
    CHECK_FALSE(slice.consistent);
    CHECK(slice.residual > 1e-6);
    auto cert = check_feasibility(problem);
    CHECK(cert.verdict == SquashVerdict::Infeasible);
}

TEST_CASE("slice dimension matches an independent rank computation") {
    auto problem = make_squash_preset(MultiPhotonMeasurement::Bb84Active, 2);
    auto slice = build_constraints(problem);
    REQUIRE(slice.consistent);

    // rebuild the constraint matrix element-wise and rank it with FullPivLU
    int dq = problem.target_dim(), df = problem.full_dim();
    auto basis = hermitian_basis(dq * df);
    int params = static_cast<int>(basis.size());
    int rows = 2 * df * df * static_cast<int>(problem.target.outcomes());
    Eigen::MatrixXd a(rows, params);
    int row = 0;
    for (std::size_t out = 0; out < problem.target.outcomes(); ++out)
        for (int j = 0; j < df; ++j)
            for (int k = 0; k < df; ++k) {
                for (int p = 0; p < params; ++p) {
                    Cplx acc = 0;
                    for (int i = 0; i < dq; ++i)
                        for (int l = 0; l < dq; ++l)
                            acc += basis[p](j * dq + i, k * dq + l) *
                                   problem.target.elements[out](i, l);
                    a(row, p) = acc.real();
                    a(row + 1, p) = acc.imag();
                }
                row += 2;
            }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-9);
    CHECK(static_cast<int>(slice.basis.size()) == params - static_cast<int>(lu.rank()));

    // every slice point satisfies the constraints
    Mat probe = slice.particular;
    for (std::size_t j = 0; j < std::min<std::size_t>(slice.basis.size(), 4); ++j)
        probe += (0.1 + static_cast<double>(j)) * slice.basis[j];
    SquashProblem copy = problem;
    for (std::size_t i = 0; i < copy.target.outcomes(); ++i) {
        Mat lhs(df, df);
        for (int jj = 0; jj < df; ++jj)
            for (int kk = 0; kk < df; ++kk) {
                Cplx acc = 0;
                for (int ii = 0; ii < dq; ++ii)
                    for (int ll = 0; ll < dq; ++ll)
                        acc += probe(jj * dq + ii, kk * dq + ll) *
                               copy.target.elements[i](ii, ll);
                lhs(jj, kk) = acc;
            }
        CHECK(max_abs(lhs - copy.full.elements[i]) < 1e-8);
    }
}

TEST_CASE("multiphoton POVM construction") {
    // cutoff 1 reproduces the exact qubit POVM
    auto qubit = target_qubit_povm(MultiPhotonMeasurement::Bb84Active);
    auto one = build_multiphoton_povm(MultiPhotonMeasurement::Bb84Active, 1);
    for (std::size_t i = 0; i < qubit.outcomes(); ++i)
        CHECK(max_abs(qubit.elements[i] - one.elements[i]) < 1e-12);

    // two-photon X-basis element against the mode-occupation expansion:
    // |2:+> = (|2,0> + sqrt(2) |1,1> + |0,2>)/2 on the n=2 block
    auto two = build_multiphoton_povm(MultiPhotonMeasurement::Bb84Active, 2);
    CHECK(two.dim == 5);
    CVec plus2(3);
    plus2 << 0.5, std::sqrt(2.0) / 2.0, 0.5;
    CVec minus2(3);
    minus2 << 0.5, -std::sqrt(2.0) / 2.0, 0.5;
    Mat expected = Mat::Zero(3, 3);
    Mat dbl = Mat::Identity(3, 3) - plus2 * plus2.adjoint() - minus2 * minus2.adjoint();
    expected = 0.5 * (plus2 * plus2.adjoint() + 0.5 * dbl);
    // X-bit-0 element is outcome index 2, n=2 block starts at offset 2
    CHECK(max_abs(two.elements[2].block(2, 2, 3, 3) - expected) < 1e-12);

    // completeness per photon-number subspace
    Mat sum = Mat::Zero(5, 5);
    for (const auto& e : two.elements) sum += e;
    CHECK(max_abs(sum.block(0, 0, 2, 2) - Mat::Identity(2, 2)) < 1e-12);
    CHECK(max_abs(sum.block(2, 2, 3, 3) - Mat::Identity(3, 3)) < 1e-12);
}

TEST_CASE("BB84 active measurement at cutoff 2 has a squashing model") {
    auto problem = make_squash_preset(MultiPhotonMeasurement::Bb84Active, 2);
    auto cert = check_feasibility(problem);
    CHECK(cert.verdict == SquashVerdict::Feasible);
    CHECK(cert.min_eigenvalue >= -1e-8);
    CHECK(cert.constraint_residual <= 1e-8);
}

TEST_CASE("six-state at cutoff 2 sits exactly on the PSD boundary") {
    // the six target elements span all of Herm(2), so the map is unique;
    // its two-photon block has eigenvalues {3/2, 3/2, 0, 0, 0, 0}
    auto problem = make_squash_preset(MultiPhotonMeasurement::SixStateActive, 2);
    auto slice = build_constraints(problem);
    REQUIRE(slice.consistent);
    CHECK(slice.basis.empty());
    CHECK(std::abs(min_eigenvalue(slice.particular)) < 1e-10);

    auto cert = check_feasibility(problem);
    CHECK(cert.verdict == SquashVerdict::Feasible);
}

TEST_CASE("six-state active measurement fails to squash at three photons") {
    auto problem = make_squash_preset(MultiPhotonMeasurement::SixStateActive, 3);
    auto cert = check_feasibility(problem);
    CHECK(cert.verdict == SquashVerdict::Infeasible);
    CHECK(cert.slice_max_min_eigenvalue < -1e-6);
    // the unique map's least eigenvalue is exactly -1/4
    CHECK(cert.slice_max_min_eigenvalue == doctest::Approx(-0.25).epsilon(1e-9));

    // BB84 keeps its squashing model at the same cutoff
    auto bb84 = check_feasibility(make_squash_preset(MultiPhotonMeasurement::Bb84Active, 3));
    CHECK(bb84.verdict == SquashVerdict::Feasible);
}

TEST_CASE("feasible squash reproduces full statistics on random states") {
    auto problem = make_squash_preset(MultiPhotonMeasurement::Bb84Active, 2);
    auto cert = check_feasibility(problem);
    REQUIRE(cert.verdict == SquashVerdict::Feasible);
    auto squash = squash_channel_from_witness(cert.witness, 2, 5);

    CounterRng rng(71);
    for (int trial = 0; trial < 50; ++trial) {
        auto rho_full = random_density(rng, 5);
        auto squashed = apply_channel(squash, rho_full);
        auto p_full = measure(problem.full, rho_full);
        auto p_target = measure(problem.target, squashed);
        for (std::size_t i = 0; i < p_full.size(); ++i)
            CHECK(std::abs(p_full[i] - p_target[i]) < 1e-8);
    }
}

TEST_CASE("noise search brackets the six-state feasibility boundary") {
    auto problem = make_squash_preset(MultiPhotonMeasurement::SixStateActive, 3);
    auto res = noise_to_feasibility(problem, 1e-3);
    CHECK_FALSE(res.feasible_without_noise);
    CHECK(res.lambda_high - res.lambda_low <= 1e-3 + 1e-12);
    CHECK(res.lambda_low > 0.0);
    CHECK(res.lambda_high < 1.0);
    CHECK(res.cert_high.verdict == SquashVerdict::Feasible);
    CHECK(res.cert_low.verdict != SquashVerdict::Feasible);

    // unique-map oracle: T(lambda) = (1-lambda) T0 + lambda/2 * 1, so the
    // boundary sits exactly at lambda* = 1/3
    CHECK(res.lambda_low <= 1.0 / 3.0 + 1e-9);
    CHECK(res.lambda_high >= 1.0 / 3.0 - 1e-9);

    // noise keeps feasibility beyond the boundary
    auto beyond = check_feasibility(
        add_depolarizing_noise(problem, std::min(1.0, res.lambda_high + 0.05)));
    CHECK(beyond.verdict == SquashVerdict::Feasible);
}

TEST_CASE("already-feasible problems need no noise") {
    auto problem = make_squash_preset(MultiPhotonMeasurement::Bb84Active, 2);
    auto res = noise_to_feasibility(problem);
    CHECK(res.feasible_without_noise);
    CHECK(res.lambda_high == 0.0);

    // full mixing is always a valid anchor
    auto anchored = check_feasibility(add_depolarizing_noise(problem, 1.0));
    CHECK(anchored.verdict == SquashVerdict::Feasible);
}
