#include "doctest.h"
#include "dualzf/baselines.hpp"

using namespace dualzf;

namespace {

ChannelMatrices random_pair(std::size_t n, SeededRng& rng) {
    return {sample_cn_matrix(n, 2, rng), sample_cn_matrix(n, 2, rng)};
}

}  // namespace

TEST_CASE("transpose null space") {
    SeededRng rng(71, 0);
    for (std::size_t n = 3; n <= 6; ++n) {
        const ComplexMatrix a = sample_cn_matrix(n, 2, rng);
        const ComplexMatrix q = transpose_null_space(a);
        CHECK(q.rows() == n);
        CHECK(q.cols() == n - 2);
        CHECK(max_abs(transpose(a) * q) <= 1e-12);
        CHECK(max_abs(hermitian(q) * q - ComplexMatrix::identity(n - 2)) <= 1e-12);
    }
    ComplexMatrix dep = sample_cn_matrix(4, 2, rng);
    for (std::size_t i = 0; i < 4; ++i) dep(i, 1) = cplx(0.0, 2.0) * dep(i, 0);
    CHECK_THROWS_AS(transpose_null_space(dep), DegenerateChannel);
}

TEST_CASE("block diagonalization precoders") {
    SeededRng rng(72, 0);
    for (int t = 0; t < 100; ++t) {
        const ChannelMatrices h = random_pair(4, rng);
        const BDPrecoders w = bd_precoders(h);
        for (std::size_t k = 0; k < 2; ++k) {
            REQUIRE(fro_norm(transpose(h[1 - k]) * w.W[k]) <= 1e-10);
            REQUIRE(max_abs(hermitian(w.W[k]) * w.W[k] - ComplexMatrix::identity(2)) <= 1e-12);
        }
        // Generic 2 x 4 channels have full row rank, so the null space is
        // exactly 2-dimensional: det(H^T conj(H)) stays away from zero.
        const ComplexMatrix gram = transpose(h[0]) * conjugate(h[0]);
        REQUIRE(std::abs(gram(0, 0) * gram(1, 1) - gram(0, 1) * gram(1, 0)) > 1e-8);
        REQUIRE(transpose_null_space(h[0]).cols() == 2);
    }

    // With spare dimensions the chosen pair still captures all of the own
    // channel's energy inside the other user's null space.
    for (std::size_t n = 5; n <= 6; ++n) {
        const ChannelMatrices h = random_pair(n, rng);
        const BDPrecoders w = bd_precoders(h);
        for (std::size_t k = 0; k < 2; ++k) {
            const ComplexMatrix q = transpose_null_space(h[1 - k]);
            CHECK(fro_norm_sq(transpose(w.W[k]) * h[k]) ==
                  doctest::Approx(fro_norm_sq(transpose(q) * h[k])).epsilon(1e-10));
        }
    }

    CHECK_THROWS_AS(bd_precoders(random_pair(3, rng)), ConfigError);
    CHECK_THROWS_AS(bd_precoders(random_pair(2, rng)), ConfigError);
}

TEST_CASE("block diagonalization rounds") {
    SeededRng rng(73, 0);
    const Constellation& c = Constellation::get(Modulation::qpsk);
    for (int t = 0; t < 10000; ++t) {
        const ChannelMatrices h = random_pair(4, rng);
        UserSymbols s{};
        std::array<std::array<std::size_t, 2>, 2> idx{};
        for (std::size_t k = 0; k < 2; ++k)
            for (std::size_t j = 0; j < 2; ++j) {
                idx[k][j] = rng() % 4;
                s[k][j] = c.point(idx[k][j]);
            }
        // Power large enough that unit noise cannot flip a decision.
        const BDRound r = bd_round(s, h, 1e14, rng);
        for (std::size_t k = 0; k < 2; ++k) {
            REQUIRE(r.users[k].gain == doctest::Approx(std::sqrt(1e14 / 4.0) * fro_norm(r.G_eq[k])).epsilon(1e-12));
            for (std::size_t j = 0; j < 2; ++j) REQUIRE(detect_blind_psk(r.users[k].stats[j], c) == idx[k][j]);
        }
    }
}

TEST_CASE("block diagonalization isolates users and spends P per slot") {
    SeededRng rng(74, 0);
    const Constellation& c = Constellation::get(Modulation::psk8);
    const ChannelMatrices h = random_pair(4, rng);
    const BDPrecoders w = bd_precoders(h);
    const double P = 3.0;
    double power = 0.0;
    double leak = 0.0;
    constexpr int draws = 100000;
    for (int t = 0; t < draws; ++t) {
        std::array<ComplexMatrix, 2> branch;
        for (std::size_t k = 0; k < 2; ++k)
            branch[k] = alamouti_embed(c.point(rng() % 8), c.point(rng() % 8)) * transpose(w.W[k]) *
                        cplx(std::sqrt(P / 4.0));
        power += fro_norm_sq(branch[0] + branch[1]) / 2.0;
        leak = std::max({leak, max_abs(branch[0] * h[1]), max_abs(branch[1] * h[0])});
    }
    CHECK(power / draws == doctest::Approx(P).epsilon(0.01));
    CHECK(leak <= 1e-10);
}

TEST_CASE("TDMA scheduling") {
    SeededRng rng(75, 0);
    const ComplexMatrix h = sample_cn_matrix(3, 2, rng);
    CHECK(tdma_schedule({h * cplx(2.0), h}) == 0);
    CHECK(tdma_schedule({h, h * cplx(2.0)}) == 1);
    CHECK(tdma_schedule({h, h}) == 0);
    // Same norm, different direction: still a tie.
    CHECK(tdma_schedule({h, h * cplx(0.0, 1.0)}) == 0);
}

TEST_CASE("TDMA round delivers the dual Alamouti gain of the stronger user") {
    SeededRng rng(76, 0);
    for (Modulation m : {Modulation::qpsk, Modulation::qam16}) {
        const Constellation& c = Constellation::get(m);
        for (int t = 0; t < 2000; ++t) {
            const ChannelMatrices h = random_pair(2 + t % 3, rng);
            const std::array<std::size_t, 2> idx{rng() % c.size(), rng() % c.size()};
            const double P = 1e12;
            const TdmaRound r = tdma_round({c.point(idx[0]), c.point(idx[1])}, h, P, c, rng);
            const std::size_t best = fro_norm(h[1]) > fro_norm(h[0]) ? 1 : 0;
            REQUIRE(r.user == best);
            REQUIRE(r.decision.gain == doctest::Approx(std::sqrt(P / 2.0) * fro_norm(h[best])).epsilon(1e-12));
            for (std::size_t j = 0; j < 2; ++j) {
                REQUIRE(std::abs(r.decision.stats[j] / r.decision.gain - c.point(idx[j])) <= 1e-4);
                REQUIRE(r.detected[j] == idx[j]);
            }
        }
    }
}
