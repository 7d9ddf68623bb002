#include <algorithm>

#include "doctest.h"
#include "dualzf/channel.hpp"
#include "dualzf/downlink_ic.hpp"
#include "dualzf/p2p.hpp"
#include "helpers.hpp"

using namespace dualzf;

namespace {

const PrecoderKind kKinds[] = {PrecoderKind::matched, PrecoderKind::projection};

ChannelMatrices random_pair(std::size_t n, SeededRng& rng) {
    return {sample_cn_matrix(n, 2, rng), sample_cn_matrix(n, 2, rng)};
}

UserSymbols random_symbols(const Constellation& c, SeededRng& rng, std::array<std::array<std::size_t, 2>, 2>* idx = nullptr) {
    UserSymbols s{};
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t j = 0; j < 2; ++j) {
            const std::size_t i = rng() % c.size();
            if (idx) (*idx)[k][j] = i;
            s[k][j] = c.point(i);
        }
    return s;
}

// Random 2 x 2 unitary with Alamouti structure.
ComplexMatrix random_alamouti_unitary(SeededRng& rng) {
    const cplx a = rng.complex_normal(), b = rng.complex_normal();
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    return alamouti_embed(a / n, b / n);
}

}  // namespace

TEST_CASE("user separating precoder") {
    const ComplexMatrix H{{0.0, 1.0}, {1.0, 0.0}};
    CHECK(max_abs(build_user_sep_precoder(H) - ComplexMatrix{{0.0, -1.0}, {1.0, 0.0}}) <= 1e-15);

    SeededRng rng(51, 0);
    for (std::size_t n = 2; n <= 4; ++n) {
        const ComplexMatrix b = build_user_sep_precoder(sample_cn_matrix(n, 2, rng));
        CHECK(b.rows() == 2 * (n - 1));
        CHECK(b.cols() == n);
    }
    ComplexMatrix dead = sample_cn_matrix(3, 2, rng);
    dead(2, 0) = dead(2, 1) = 0.0;
    CHECK_THROWS_AS(build_user_sep_precoder(dead), DegenerateChannel);
    CHECK_THROWS_AS(build_user_sep_precoder(sample_cn_matrix(1, 2, rng)), ConfigError);
}

TEST_CASE("interference matrices") {
    // Hand expansion for H rows [0, 1] and [1, 0].
    const ComplexMatrix H{{0.0, 1.0}, {1.0, 0.0}};
    const ComplexMatrix ht = build_htilde(H);
    CHECK(ht == ComplexMatrix{{0.0, 1.0}, {-1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
    CHECK(max_abs(build_btilde(H) - ComplexMatrix{{0.0, -1.0, -1.0, 0.0}, {1.0, 0.0, 0.0, -1.0}}) <= 1e-15);

    SeededRng rng(52, 0);
    for (int t = 0; t < 100; ++t) {
        const ChannelMatrices h = random_pair(2 + t % 3, rng);
        for (std::size_t k = 0; k < 2; ++k) {
            const IcMatrices ic = build_ic_matrices(h, k);
            REQUIRE(max_abs(ic.Btilde * build_htilde(h[1 - k])) <= 1e-12);
            REQUIRE(is_block_alamouti(ic.Btilde * ic.Htilde, 1e-10));
            REQUIRE(max_abs(ic.Htilde - alamouti_equivalent(transpose(h[k]))) == 0.0);
        }
    }
    CHECK_THROWS_AS(build_ic_matrices(ChannelMatrices{sample_cn_matrix(3, 2, rng), sample_cn_matrix(2, 2, rng)}, 0),
                    DimensionMismatch);
}

TEST_CASE("symbol separating precoder") {
    SeededRng rng(53, 0);
    for (int t = 0; t < 200; ++t) {
        const ChannelMatrices h = random_pair(2 + t % 3, rng);
        for (std::size_t k = 0; k < 2; ++k) {
            const IcMatrices ic = build_ic_matrices(h, k);
            const ComplexMatrix m = ic.Btilde * ic.Htilde;
            const SymbolSepPrecoder e = build_symbol_sep_precoder(h, k);
            REQUIRE(max_abs(e.E - hermitian(m) * cplx(e.beta)) <= 1e-10);
            REQUIRE(e.beta == doctest::Approx(std::sqrt(2.0) / fro_norm(hermitian(m) * ic.Btilde)).epsilon(1e-12));
            const cplx diag(e.beta / 2.0 * fro_norm_sq(m));
            REQUIRE(max_abs(e.E * m - ComplexMatrix::identity(2) * diag) <= 1e-10);

            // Both kinds follow from the uplink filter with g_ji := h_ij.
            for (PrecoderKind kind : kKinds) {
                const SymbolSepPrecoder d = build_symbol_sep_precoder(h, k, kind);
                const ComplexMatrix zo = build_user_sep(transpose(h[1 - k]));
                const SymbolSepFilter u = build_sym_sep(zo, alamouti_equivalent(transpose(h[k])), kind);
                REQUIRE(max_abs(d.E - u.F) <= 1e-12);
            }
        }
    }
}

TEST_CASE("downlink transmit signal") {
    SeededRng rng(54, 0);
    const Constellation& c = Constellation::get(Modulation::qpsk);
    const ChannelMatrices h = random_pair(3, rng);
    const double P = 3.0;
    const DownlinkPrecoders pre = build_downlink_precoders(h);
    const UserSymbols s = random_symbols(c, rng);

    ComplexMatrix expected = alamouti_embed(s[0][0], s[0][1]) * pre.sym[0].E * pre.Bbar[1];
    expected += alamouti_embed(s[1][0], s[1][1]) * pre.sym[1].E * pre.Bbar[0];
    expected *= cplx(std::sqrt(P / 2.0));
    CHECK(max_abs(downlink_ic_tx(s, pre, P) - expected) <= 1e-12);
    CHECK(max_abs(downlink_ic_tx(s, h, P) - expected) <= 1e-12);

    for (PrecoderKind kind : kKinds) {
        const DownlinkPrecoders p = build_downlink_precoders(h, kind);
        for (const PowerAllocation alloc : {kEqualPower, PowerAllocation{1.7, 0.3}}) {
            double power = 0.0;
            constexpr int draws = 100000;
            for (int t = 0; t < draws; ++t) power += fro_norm_sq(downlink_ic_tx(random_symbols(c, rng), p, P, alloc)) / 2.0;
            CHECK(power / draws == doctest::Approx(P).epsilon(0.01));
        }
    }

    CHECK_THROWS_AS(downlink_ic_tx(s, pre, 0.0), ConfigError);
    CHECK_THROWS_AS(downlink_ic_tx(s, pre, 1.0, PowerAllocation{1.0, 0.5}), ConfigError);
    CHECK_THROWS_AS(downlink_ic_tx(s, pre, 1.0, PowerAllocation{2.5, -0.5}), ConfigError);
}

TEST_CASE("each user's combiner nulls the other user's branch") {
    SeededRng rng(55, 0);
    const Constellation& c = Constellation::get(Modulation::psk8);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const ChannelMatrices h = random_pair(2 + t % 3, rng);
        const DownlinkPrecoders pre = build_downlink_precoders(h, kKinds[t % 2]);
        for (std::size_t kbar = 0; kbar < 2; ++kbar) {
            UserSymbols s = random_symbols(c, rng);
            s[kbar] = {};
            const auto r = downlink_ic_rx(downlink_ic_tx(s, pre, 5.0) * h[kbar]);
            worst = std::max({worst, std::abs(r[0]), std::abs(r[1])});
        }
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("downlink IC noiseless decisions") {
    SeededRng rng(56, 0);
    const Constellation& c = Constellation::get(Modulation::qpsk);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 2 + t % 3;
        const ChannelMatrices h = random_pair(n, rng);
        const PrecoderKind kind = kKinds[t % 2];
        const DownlinkPrecoders pre = build_downlink_precoders(h, kind);
        const double P = std::exp(rng.normal());
        const PowerAllocation alloc = t % 3 ? kEqualPower : optimal_power_alloc(1.0 + t % 5, 2.0);
        std::array<std::array<std::size_t, 2>, 2> idx{};
        const UserSymbols s = random_symbols(c, rng, &idx);
        const ComplexMatrix x = downlink_ic_tx(s, pre, P, alloc);
        for (std::size_t k = 0; k < 2; ++k) {
            const auto r = downlink_ic_rx(x * h[k]);
            const double coef = downlink_signal_coefficient(pre, k, P, alloc.c_sq(k));
            REQUIRE(coef > 0.0);
            for (std::size_t j = 0; j < 2; ++j) {
                REQUIRE(std::abs(r[j] - coef * s[k][j]) <= 1e-10);
                REQUIRE(detect_blind_psk(r[j], c) == idx[k][j]);
            }
            if (kind == PrecoderKind::matched) {
                const IcMatrices& ic = pre.ic[k];
                const double closed =
                    std::sqrt(P / 2.0) * pre.sym[k].beta / 2.0 * std::sqrt(alloc.c_sq(k)) * fro_norm_sq(ic.Btilde * ic.Htilde);
                REQUIRE(coef == doctest::Approx(closed).epsilon(1e-10));
            }

            // Cross-symbol leakage within user k.
            for (std::size_t j = 0; j < 2; ++j) {
                UserSymbols one = s;
                one[k][j] = 0.0;
                const auto rr = downlink_ic_rx(downlink_ic_tx(one, pre, P, alloc) * h[k]);
                REQUIRE(std::abs(rr[j]) <= 1e-10);
            }
        }
    }
}

TEST_CASE("downlink combiner noise has variance 2") {
    SeededRng rng(57, 0);
    ComplexMatrix r(2, 2);
    double v0 = 0.0, v1 = 0.0;
    constexpr int draws = 1000000;
    for (int t = 0; t < draws; ++t) {
        for (auto& x : r.data()) x = rng.complex_normal();
        const auto o = downlink_ic_rx(r);
        v0 += std::norm(o[0]);
        v1 += std::norm(o[1]);
    }
    CHECK(v0 / draws == doctest::Approx(2.0).epsilon(0.01));
    CHECK(v1 / draws == doctest::Approx(2.0).epsilon(0.01));
    CHECK(downlink_ic_rx(r) == downlink_ic_rx(r));
    CHECK_THROWS_AS(downlink_ic_rx(ComplexMatrix(2, 3)), DimensionMismatch);
}

TEST_CASE("SNR statistic forms agree") {
    SeededRng rng(58, 0);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 2 + t % 3;
        const ChannelMatrices h = random_pair(n, rng);
        const double P = std::exp(rng.normal());
        for (PrecoderKind kind : kKinds) {
            const DownlinkPrecoders pre = build_downlink_precoders(h, kind);
            for (std::size_t k = 0; k < 2; ++k) {
                const double b = effective_snr_b(h, k, kind);
                REQUIRE(b > 0.0);
                // Unit-power combiner output: coefficient^2 over noise variance 2.
                const double coef = downlink_signal_coefficient(pre, k, P, 1.0);
                REQUIRE(coef * coef / 2.0 == doctest::Approx(user_snr(P, 1.0, b)).epsilon(1e-9));

                if (kind == PrecoderKind::matched) {
                    // (sqrt(P) beta ||M||^2 / 4)^2; the squared Frobenius norm
                    // is what makes the units work out.
                    const IcMatrices& ic = pre.ic[k];
                    const double m2 = fro_norm_sq(ic.Btilde * ic.Htilde);
                    const double direct = std::pow(std::sqrt(P) * pre.sym[k].beta * m2 / 4.0, 2);
                    REQUIRE(P * b / 8.0 == doctest::Approx(direct).epsilon(1e-9));
                    // The matched precoder reaches the trace form only for N = 2.
                    if (n == 2) REQUIRE(b == doctest::Approx(user_snr_b(h, k)).epsilon(1e-9));
                    else REQUIRE(b <= user_snr_b(h, k) * (1.0 + 1e-12));
                }
            }
        }
    }
}

TEST_CASE("measured downlink SNR matches the statistic") {
    SeededRng rng(59, 0);
    const ChannelMatrices h = random_pair(3, rng);
    const Constellation& c = Constellation::get(Modulation::qpsk);
    const double P = 2.0;
    for (PrecoderKind kind : kKinds) {
        const DownlinkPrecoders pre = build_downlink_precoders(h, kind);
        constexpr int draws = 1000000;
        cplx corr = 0.0;
        std::vector<cplx> out(draws), sym(draws);
        for (int t = 0; t < draws; ++t) {
            const UserSymbols s = random_symbols(c, rng);
            ComplexMatrix r = downlink_ic_tx(s, pre, P) * h[0];
            add_awgn(r, 1.0, rng);
            out[t] = downlink_ic_rx(r)[0];
            sym[t] = s[0][0];
            corr += out[t] * std::conj(sym[t]);
        }
        const cplx a = corr / static_cast<double>(draws);
        double noise = 0.0;
        for (int t = 0; t < draws; ++t) noise += std::norm(out[t] - a * sym[t]);
        noise /= draws;
        const double measured = std::norm(a) / noise;
        CHECK(measured == doctest::Approx(user_snr(P, 1.0, effective_snr_b(h, 0, kind))).epsilon(0.02));
        if (kind == PrecoderKind::projection)
            CHECK(measured == doctest::Approx(user_snr(P, 1.0, user_snr_b(h, 0))).epsilon(0.02));
    }
}

TEST_CASE("SNR statistic is invariant to Alamouti unitary rotations of the receive antennas") {
    SeededRng rng(60, 0);
    for (int t = 0; t < 100; ++t) {
        const ChannelMatrices h = random_pair(2 + t % 3, rng);
        const ComplexMatrix q = random_alamouti_unitary(rng);
        const ChannelMatrices common{h[0] * q, h[1] * q};
        const ChannelMatrices separate{h[0] * random_alamouti_unitary(rng), h[1] * random_alamouti_unitary(rng)};
        for (std::size_t k = 0; k < 2; ++k) {
            const double b = user_snr_b(h, k);
            REQUIRE(user_snr_b(common, k) == doctest::Approx(b).epsilon(1e-10));
            REQUIRE(user_snr_b(separate, k) == doctest::Approx(b).epsilon(1e-10));
        }
    }
}

TEST_CASE("downlink statistic equals the uplink one on transposed channels") {
    SeededRng rng(61, 0);
    for (int t = 0; t < 200; ++t) {
        const ChannelMatrices h = random_pair(2 + t % 3, rng);
        for (std::size_t k = 0; k < 2; ++k) {
            const ComplexMatrix zo = build_user_sep(transpose(h[1 - k]));
            const ComplexMatrix gt = alamouti_equivalent(transpose(h[k]));
            const double b = user_snr_b(h, k);
            REQUIRE(std::abs(projected_gain(zo, gt) - b) <= 1e-10 * b);
            const double bm = effective_snr_b(h, k, PrecoderKind::matched);
            REQUIRE(std::abs(matched_gain(zo, gt) - bm) <= 1e-10 * bm);
        }
    }
}

TEST_CASE("optimal power allocation") {
    const PowerAllocation eq = optimal_power_alloc(2.5, 2.5);
    CHECK(eq.c1_sq == doctest::Approx(1.0));
    CHECK(eq.c2_sq == doctest::Approx(1.0));

    const PowerAllocation a = optimal_power_alloc(1.0, 3.0);
    CHECK(a.c1_sq == doctest::Approx(1.5));
    CHECK(a.c2_sq == doctest::Approx(0.5));
    const double P = 1.0;
    CHECK(std::min(user_snr(P, a.c1_sq, 1.0), user_snr(P, a.c2_sq, 3.0)) == doctest::Approx(3.0 * P / 16.0));

    double best = 0.0, best_c = 0.0;
    for (int i = 0; i <= 20000; ++i) {
        const double c1 = i * 1e-4;
        const double v = std::min(user_snr(P, c1, 1.0), user_snr(P, 2.0 - c1, 3.0));
        if (v > best) {
            best = v;
            best_c = c1;
        }
    }
    CHECK(best_c == doctest::Approx(1.5).epsilon(1e-4));
    CHECK(best == doctest::Approx(3.0 / 16.0).epsilon(1e-4));

    SeededRng rng(62, 0);
    for (int t = 0; t < 10000; ++t) {
        const double b1 = std::exp(2.0 * rng.normal()), b2 = std::exp(2.0 * rng.normal());
        const PowerAllocation o = optimal_power_alloc(b1, b2);
        REQUIRE(std::abs(o.c1_sq + o.c2_sq - 2.0) <= 1e-12);
        REQUIRE(o.c1_sq >= 0.0);
        REQUIRE(o.c2_sq >= 0.0);
        const double s1 = user_snr(P, o.c1_sq, b1), s2 = user_snr(P, o.c2_sq, b2);
        REQUIRE(std::abs(s1 - s2) <= 1e-12 * s1);
        REQUIRE(s1 == doctest::Approx(P * b1 * b2 / (4.0 * (b1 + b2))).epsilon(1e-12));
        REQUIRE(std::min(s1, s2) >= std::min(user_snr(P, 1.0, b1), user_snr(P, 1.0, b2)) * (1.0 - 1e-12));
        const double lo = P * std::min(b1, b2) / 8.0, hi = P * std::min(b1, b2) / 4.0;
        REQUIRE(s1 >= lo * (1.0 - 1e-12));
        REQUIRE(s1 <= hi * (1.0 + 1e-12));
    }

    CHECK_THROWS_AS(optimal_power_alloc(0.0, 1.0), DegenerateChannel);
    CHECK_THROWS_AS(optimal_power_alloc(1.0, -2.0), DegenerateChannel);
}

TEST_CASE("SNR sandwich on sampled channels") {
    SeededRng rng(63, 0);
    for (int t = 0; t < 300; ++t) {
        const ChannelMatrices h = random_pair(2 + t % 3, rng);
        const double b1 = user_snr_b(h, 0), b2 = user_snr_b(h, 1);
        const PowerAllocation o = optimal_power_alloc(b1, b2);
        for (std::size_t k = 0; k < 2; ++k) {
            const double snr = user_snr(1.0, o.c_sq(k), k == 0 ? b1 : b2);
            REQUIRE(snr >= std::min(b1, b2) / 8.0 * (1.0 - 1e-12));
            REQUIRE(snr <= std::min(b1, b2) / 4.0 * (1.0 + 1e-12));
        }
    }
}
