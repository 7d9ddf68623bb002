#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dualzf/sim.hpp"

namespace dualzf {

namespace {

constexpr std::string_view kHeader =
    "scheme,n_tx,constellation,snr_db,bits,bit_errors,ber,ci95,trials,truncated,estimator";

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc()) throw Error("failed to format number");
    return std::string(buf.data(), ptr);
}

template <typename T>
T parse_field(std::string_view text, std::size_t line) {
    T v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ConfigError("csv", "line " + std::to_string(line) + ": bad field '" + std::string(text) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = line.find(',', pos);
        out.push_back(line.substr(pos, next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

}  // namespace

void write_csv(const BerCurve& curve, std::ostream& out) {
    out << kHeader << '\n';
    for (const BerPoint& p : curve.points) {
        out << curve.scheme << ',' << curve.n_tx << ',' << curve.constellation << ',' << format_double(p.snr_db)
            << ',' << p.bits << ',' << p.bit_errors << ',' << format_double(p.ber) << ',' << format_double(p.ci95)
            << ',' << p.trials << ',' << (p.truncated ? 1 : 0) << ',' << to_string(curve.estimator) << '\n';
    }
}

void write_csv(const BerCurve& curve, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path.string() + "' for writing");
    write_csv(curve, f);
    f.flush();
    if (!f) throw Error("failed writing '" + path.string() + "'");
}

BerCurve read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("csv", "empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader) throw ConfigError("csv", "unexpected header '" + line + "'");

    BerCurve curve;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 11) throw ConfigError("csv", "line " + std::to_string(lineno) + ": expected 11 fields");
        const auto n_tx = parse_field<std::size_t>(f[1], lineno);
        const Estimator est = parse_estimator(f[10]);
        if (curve.points.empty()) {
            curve.scheme = f[0];
            curve.n_tx = n_tx;
            curve.constellation = f[2];
            curve.estimator = est;
        } else if (curve.scheme != f[0] || curve.n_tx != n_tx || curve.constellation != f[2] ||
                   curve.estimator != est) {
            throw ConfigError("csv", "line " + std::to_string(lineno) + ": rows describe different curves");
        }
        BerPoint p;
        p.snr_db = parse_field<double>(f[3], lineno);
        p.bits = parse_field<std::uint64_t>(f[4], lineno);
        p.bit_errors = parse_field<std::uint64_t>(f[5], lineno);
        p.ber = parse_field<double>(f[6], lineno);
        p.ci95 = parse_field<double>(f[7], lineno);
        p.trials = parse_field<std::uint64_t>(f[8], lineno);
        p.truncated = parse_field<int>(f[9], lineno) != 0;
        curve.points.push_back(p);
    }
    return curve;
}

BerCurve read_csv(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path.string() + "' for reading");
    return read_csv(f);
}

}  // namespace dualzf
