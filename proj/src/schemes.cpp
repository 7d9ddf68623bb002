#include "dualzf/schemes.hpp"

#include <cmath>

#include "dualzf/baselines.hpp"
#include "dualzf/p2p.hpp"
#include "dualzf/uplink_ic.hpp"

namespace dualzf {

namespace {

constexpr int kMaxResamples = 64;

double q_function(double x) {
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

struct BitSource {
    const Constellation& c;
    SeededRng& rng;
    std::vector<std::uint8_t> sent;

    cplx next() {
        std::size_t label = 0;
        for (unsigned b = 0; b < c.bits_per_symbol(); ++b) {
            const std::uint8_t bit = rng.bit() ? 1 : 0;
            sent.push_back(bit);
            label = (label << 1) | bit;
        }
        return c.point(label);
    }
};

// Compares the detected point indices with the transmitted bits, symbol by
// symbol in transmission order.
std::uint64_t count_errors(const std::vector<std::uint8_t>& sent, const std::vector<std::size_t>& detected,
                           const Constellation& c) {
    const auto got = demap(detected, c);
    std::uint64_t errors = 0;
    for (std::size_t i = 0; i < sent.size(); ++i) errors += sent[i] != got[i];
    return errors;
}

// Y is 2 x N; returns [y_11, -y_21*, ..., y_1N, -y_2N*].
std::vector<cplx> stack_alamouti(const ComplexMatrix& Y) {
    std::vector<cplx> out(2 * Y.cols());
    for (std::size_t i = 0; i < Y.cols(); ++i) {
        out[2 * i] = Y(0, i);
        out[2 * i + 1] = -std::conj(Y(1, i));
    }
    return out;
}

template <typename Body>
auto with_resampling(SeededRng& rng, std::size_t n_tx, Body&& body) {
    for (int attempt = 0;; ++attempt) {
        ChannelPair pair = sample_channel_pair(n_tx, rng);
        try {
            return body(pair.H);
        } catch (const DegenerateChannel&) {
            if (attempt + 1 >= kMaxResamples) throw;
        }
    }
}

}  // namespace

std::string_view to_string(Scheme s) {
    switch (s) {
        case Scheme::alamouti: return "alamouti";
        case Scheme::dual_alamouti: return "dual-alamouti";
        case Scheme::svd: return "svd";
        case Scheme::uplink_ic: return "uplink-ic";
        case Scheme::downlink_ic: return "downlink-ic";
        case Scheme::downlink_ic_pa: return "downlink-ic-pa";
        case Scheme::bd: return "bd";
        case Scheme::tdma_da: return "tdma-da";
    }
    return "?";
}

Scheme parse_scheme(std::string_view name) {
    for (Scheme s : {Scheme::alamouti, Scheme::dual_alamouti, Scheme::svd, Scheme::uplink_ic, Scheme::downlink_ic,
                     Scheme::downlink_ic_pa, Scheme::bd, Scheme::tdma_da})
        if (name == to_string(s)) return s;
    throw ConfigError("scheme", "unknown scheme '" + std::string(name) + "'");
}

std::string_view to_string(PrecoderKind k) {
    return k == PrecoderKind::matched ? "matched" : "projection";
}

PrecoderKind parse_precoder_kind(std::string_view name) {
    if (name == "matched") return PrecoderKind::matched;
    if (name == "projection") return PrecoderKind::projection;
    throw ConfigError("ic-precoder", "unknown precoder kind '" + std::string(name) + "'");
}

void validate(const SchemeConfig& cfg) {
    if (cfg.n_tx < 2) throw ConfigError("n-tx", "at least 2 antennas are required");
    if (cfg.n_tx > 8) throw ConfigError("n-tx", "at most 8 antennas are supported");
    if (cfg.scheme == Scheme::bd && cfg.n_tx < 4) throw ConfigError("n-tx", "bd requires n_tx >= 4");
    const bool blind = cfg.scheme == Scheme::downlink_ic || cfg.scheme == Scheme::downlink_ic_pa;
    if (blind && cfg.modulation == Modulation::qam16)
        throw ConfigError("constellation", "downlink IC receivers are blind and need a PSK constellation");
}

Modulation constellation_for_rate(Scheme s, unsigned rate) {
    const unsigned bits = s == Scheme::tdma_da ? 2 * rate : rate;
    switch (bits) {
        case 1: return Modulation::bpsk;
        case 2: return Modulation::qpsk;
        case 3: return Modulation::psk8;
        case 4:
            if (s == Scheme::tdma_da) return Modulation::qam16;
            break;
        default: break;
    }
    throw ConfigError("rate", "no supported constellation carries rate " + std::to_string(rate) + " for " +
                                  std::string(to_string(s)));
}

std::size_t symbols_per_trial(Scheme s) {
    switch (s) {
        case Scheme::uplink_ic:
        case Scheme::downlink_ic:
        case Scheme::downlink_ic_pa:
        case Scheme::bd: return 4;
        default: return 2;
    }
}

bool has_conditional_form(Modulation m) {
    return m == Modulation::bpsk || m == Modulation::qpsk;
}

double conditional_bit_error(Modulation m, double gamma) {
    switch (m) {
        case Modulation::bpsk: return q_function(std::sqrt(2.0 * gamma));
        case Modulation::qpsk: return q_function(std::sqrt(gamma));
        default: throw UnsupportedConstellation("no closed-form conditional error rate for " + std::string(to_string(m)));
    }
}

double db_to_power(double snr_db) {
    return std::pow(10.0, snr_db / 10.0);
}

TrialResult run_trial(const SchemeConfig& cfg, double P, std::uint64_t seed, std::uint64_t trial) {
    SeededRng rng(seed, trial);
    const Constellation& c = Constellation::get(cfg.modulation);
    const bool conditional = has_conditional_form(cfg.modulation);
    BitSource src{c, rng, {}};
    std::vector<std::size_t> detected;
    std::vector<double> gammas;

    switch (cfg.scheme) {
        case Scheme::alamouti:
        case Scheme::dual_alamouti: {
            const ComplexMatrix H = with_resampling(rng, cfg.n_tx, [](const ChannelMatrices& h) {
                if (fro_norm_sq(h[0]) < 1e-12) throw DegenerateChannel("zero channel");
                return h[0];
            });
            const cplx s1 = src.next(), s2 = src.next();
            P2PDecision d;
            if (cfg.scheme == Scheme::alamouti) {
                const ComplexMatrix G = hermitian(H);
                ComplexMatrix y = alamouti_tx(s1, s2, P) * G;
                add_awgn(y, 1.0, rng);
                d = alamouti_rx(y, G, P);
            } else {
                ComplexMatrix r = dual_alamouti_tx(s1, s2, H, P) * H;
                add_awgn(r, 1.0, rng);
                d = dual_alamouti_rx(r);
                d.gain = dual_alamouti_gain(H, P);
            }
            for (const cplx& st : d.stats) detected.push_back(detect(st, d.gain, c));
            gammas.assign(2, d.gain * d.gain);
            break;
        }
        case Scheme::svd: {
            const ComplexMatrix H = with_resampling(rng, cfg.n_tx, [](const ChannelMatrices& h) {
                if (fro_norm_sq(h[0]) < 1e-12) throw DegenerateChannel("zero channel");
                return h[0];
            });
            for (int slot = 0; slot < 2; ++slot) {
                const SvdRound r = svd_baseline_round(src.next(), H, P, rng);
                detected.push_back(detect(r.stat, r.gain, c));
                gammas.push_back(r.gain * r.gain);
            }
            break;
        }
        case Scheme::uplink_ic: {
            std::array<ComplexMatrix, 2> G;
            const UplinkFilters f = with_resampling(rng, cfg.n_tx, [&](const ChannelMatrices& h) {
                G = {transpose(h[0]), transpose(h[1])};
                return build_uplink_filters(G[0], G[1], cfg.ic_kind);
            });
            ComplexMatrix y(2, cfg.n_tx);
            const cplx amp(std::sqrt(P / 4.0));
            for (std::size_t k = 0; k < 2; ++k) {
                const cplx s1 = src.next(), s2 = src.next();
                y += alamouti_embed(s1, s2) * G[k] * amp;
            }
            add_awgn(y, 1.0, rng);
            const UplinkDecision d = uplink_ic_receive(stack_alamouti(y), f, P);
            for (std::size_t k = 0; k < 2; ++k)
                for (const cplx& st : d.stats[k]) {
                    detected.push_back(detect(st, d.gain[k], c));
                    gammas.push_back(d.gain[k] * d.gain[k]);
                }
            break;
        }
        case Scheme::downlink_ic:
        case Scheme::downlink_ic_pa: {
            ChannelMatrices H;
            const DownlinkPrecoders pre = with_resampling(rng, cfg.n_tx, [&](const ChannelMatrices& h) {
                H = h;
                return build_downlink_precoders(h, cfg.ic_kind);
            });
            PowerAllocation alloc = kEqualPower;
            if (cfg.scheme == Scheme::downlink_ic_pa) {
                // With unit allocation the coefficient is sqrt(P/2) (E M)_11
                // and SNR = coef^2 / 2 = P b / 8, so b = 2 (E M)_11^2.
                const double e0 = downlink_signal_coefficient(pre, 0, 2.0, 1.0);
                const double e1 = downlink_signal_coefficient(pre, 1, 2.0, 1.0);
                alloc = optimal_power_alloc(2.0 * e0 * e0, 2.0 * e1 * e1);
            }
            UserSymbols s;
            for (auto& user : s) user = {src.next(), src.next()};
            const ComplexMatrix x = downlink_ic_tx(s, pre, P, alloc);
            for (std::size_t k = 0; k < 2; ++k) {
                ComplexMatrix r = x * H[k];
                add_awgn(r, 1.0, rng);
                const auto stats = downlink_ic_rx(r);
                const double coef = downlink_signal_coefficient(pre, k, P, alloc.c_sq(k));
                for (const cplx& st : stats) {
                    detected.push_back(detect(st, coef, c));
                    gammas.push_back(coef * coef / 2.0);
                }
            }
            break;
        }
        case Scheme::bd: {
            ChannelMatrices H;
            const BDPrecoders w = with_resampling(rng, cfg.n_tx, [&](const ChannelMatrices& h) {
                H = h;
                return bd_precoders(h);
            });
            UserSymbols s;
            for (auto& user : s) user = {src.next(), src.next()};
            const BDRound r = bd_round(s, H, w, P, rng);
            for (const auto& u : r.users)
                for (const cplx& st : u.stats) {
                    detected.push_back(detect(st, u.gain, c));
                    gammas.push_back(u.gain * u.gain);
                }
            break;
        }
        case Scheme::tdma_da: {
            const ChannelMatrices H = with_resampling(rng, cfg.n_tx, [](const ChannelMatrices& h) {
                if (fro_norm_sq(h[0]) < 1e-12 || fro_norm_sq(h[1]) < 1e-12) throw DegenerateChannel("zero channel");
                return h;
            });
            const std::array<cplx, 2> s{src.next(), src.next()};
            const TdmaRound r = tdma_round(s, H, P, c, rng);
            detected.assign(r.detected.begin(), r.detected.end());
            gammas.assign(2, r.decision.gain * r.decision.gain);
            break;
        }
    }

    TrialResult out;
    out.bits = src.sent.size();
    out.bit_errors = count_errors(src.sent, detected, c);
    if (conditional)
        for (double g : gammas) out.expected_errors += c.bits_per_symbol() * conditional_bit_error(cfg.modulation, g);
    return out;
}

}  // namespace dualzf
