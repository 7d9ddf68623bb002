#include "dualzf/checks.hpp"

#include <algorithm>
#include <cmath>

#include "dualzf/baselines.hpp"
#include "dualzf/channel.hpp"
#include "dualzf/downlink_ic.hpp"
#include "dualzf/duality.hpp"
#include "dualzf/p2p.hpp"
#include "dualzf/uplink_ic.hpp"

namespace dualzf {

namespace {

CheckResult finish(std::string name, double worst, double limit) {
    return {std::move(name), worst, limit, worst <= limit};
}

}  // namespace

CheckResult check_snr_duality(std::size_t trials, std::size_t n, std::uint64_t seed) {
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        SeededRng rng(seed, t);
        const ComplexMatrix G = sample_cn_matrix(2, n, rng);
        const double P = std::exp(rng.normal());
        const AlamoutiExpansion ex = alamouti_real_expansion(G, P);
        const LinearZFSystem dual = dualize(ex.system);
        for (std::size_t k = 0; k < 4; ++k) {
            const double a = snr_original(ex.system, k);
            worst = std::max(worst, std::abs(a - snr_dual(ex.system, k)) / a);
            worst = std::max(worst, std::abs(a - snr_original(dual, k)) / a);
        }
    }
    return finish("snr duality (relative)", worst, 1e-9);
}

CheckResult check_alamouti_zf(std::size_t trials, std::size_t n, std::uint64_t seed) {
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        SeededRng rng(seed, t);
        worst = std::max(worst, check_zf(alamouti_real_expansion(sample_cn_matrix(2, n, rng), 1.0).system));
    }
    return finish("alamouti expansion ZF residual", worst, 1e-10);
}

CheckResult check_uplink_zf(std::size_t trials, std::size_t n, std::uint64_t seed) {
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        SeededRng rng(seed, t);
        const ComplexMatrix G = sample_cn_matrix(2, n, rng);
        worst = std::max(worst, max_abs(build_user_sep(G) * alamouti_equivalent(G)));
    }
    return finish("uplink Zbar Gtilde residual", worst, 1e-10);
}

CheckResult check_downlink_zf(std::size_t trials, std::size_t n, std::uint64_t seed) {
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        SeededRng rng(seed, t);
        const ComplexMatrix H = sample_cn_matrix(n, 2, rng);
        worst = std::max(worst, max_abs(build_btilde(H) * build_htilde(H)));
    }
    return finish("downlink Btilde Htilde residual", worst, 1e-10);
}

CheckResult check_bd_null_space(std::size_t trials, std::size_t n, std::uint64_t seed) {
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        SeededRng rng(seed, t);
        const ChannelPair pair = sample_channel_pair(n, rng);
        const BDPrecoders w = bd_precoders(pair.H);
        for (std::size_t k = 0; k < 2; ++k) worst = std::max(worst, max_abs(transpose(pair.H[1 - k]) * w.W[k]));
    }
    return finish("bd null-space residual", worst, 1e-10);
}

CheckResult check_blind_decoupling(std::size_t trials, std::size_t n, std::uint64_t seed) {
    const Constellation& qpsk = Constellation::get(Modulation::qpsk);
    double worst = 0.0;
    bool all_recovered = true;
    for (std::size_t t = 0; t < trials; ++t) {
        SeededRng rng(seed, t);
        const ChannelPair pair = sample_channel_pair(n, rng);
        const DownlinkPrecoders pre = build_downlink_precoders(pair.H, PrecoderKind::projection);
        const double P = 10.0;
        UserSymbols s;
        std::array<std::array<std::size_t, 2>, 2> idx{};
        for (std::size_t k = 0; k < 2; ++k)
            for (std::size_t j = 0; j < 2; ++j) {
                idx[k][j] = rng() % 4;
                s[k][j] = qpsk.point(idx[k][j]);
            }
        const ComplexMatrix x = downlink_ic_tx(s, pre, P);
        for (std::size_t k = 0; k < 2; ++k) {
            const auto r = downlink_ic_rx(x * pair.H[k]);
            for (std::size_t j = 0; j < 2; ++j) all_recovered &= detect_blind_psk(r[j], qpsk) == idx[k][j];

            // Only the other user's symbols on air.
            UserSymbols other{};
            other[1 - k] = s[1 - k];
            for (const cplx& v : downlink_ic_rx(downlink_ic_tx(other, pre, P) * pair.H[k]))
                worst = std::max(worst, std::abs(v));

            // Only one of user k's own symbols on air at a time.
            for (std::size_t j = 0; j < 2; ++j) {
                UserSymbols single{};
                single[k][j] = s[k][j];
                const auto rr = downlink_ic_rx(downlink_ic_tx(single, pre, P) * pair.H[k]);
                worst = std::max(worst, std::abs(rr[1 - j]));
            }
        }
    }
    CheckResult r = finish("downlink blind decoupling leakage", worst, 1e-10);
    if (!all_recovered) {
        r.name += " (symbol decision error)";
        r.pass = false;
    }
    return r;
}

std::vector<CheckResult> run_duality_suite(std::size_t trials, std::size_t n, std::uint64_t seed) {
    std::vector<CheckResult> out{
        check_snr_duality(trials, n, seed),     check_alamouti_zf(trials, n, seed),
        check_uplink_zf(trials, std::max<std::size_t>(n, 2), seed),
        check_downlink_zf(trials, std::max<std::size_t>(n, 2), seed),
        check_blind_decoupling(trials, std::max<std::size_t>(n, 2), seed),
    };
    if (n >= 4) out.push_back(check_bd_null_space(trials, n, seed));
    return out;
}

}  // namespace dualzf
