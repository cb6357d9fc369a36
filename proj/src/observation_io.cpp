#include "ouocc/observation_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <vector>

#include <unistd.h>

namespace ouocc {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return fields;
}

}  // namespace

double parse_extended_real(std::string_view text) {
    text = trim(text);
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (lower == "inf" || lower == "+inf" || lower == "infinity" || lower == "+infinity")
        return inf;
    if (lower == "-inf" || lower == "-infinity")
        return -inf;

    std::string_view digits = text;
    if (!digits.empty() && digits.front() == '+')
        digits.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (digits.empty() || ec != std::errc() || end != digits.data() + digits.size() ||
        std::isnan(value))
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    return value;
}

std::string format_real(double x) {
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf, static_cast<std::size_t>(n));
}

ObservationSet read_observations(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<Observation> entries;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view content = trim(line);
        if (content.empty())
            continue;
        const auto fields = split_commas(content);
        if (!header_seen) {
            if (fields.size() != 4 || fields[0] != "t_end" || fields[1] != "a" ||
                fields[2] != "b" || fields[3] != "g")
                throw ParseError(line_no, "expected header 't_end,a,b,g'");
            header_seen = true;
            continue;
        }
        if (fields.size() != 4)
            throw ParseError(line_no, "expected 4 fields, got " + std::to_string(fields.size()));
        try {
            const ObservationWindow window(parse_extended_real(fields[0]),
                                           parse_extended_real(fields[1]),
                                           parse_extended_real(fields[2]));
            const double g = parse_extended_real(fields[3]);
            if (!(g >= 0.0 && g <= window.t_end()))
                throw std::invalid_argument("g must lie in [0, t_end]");
            entries.push_back({window, g});
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, e.what());
        }
    }
    if (!header_seen)
        throw ParseError(0, "observation file is empty");
    if (entries.empty())
        throw ParseError(line_no, "observation file has no data rows");
    return ObservationSet(std::move(entries));
}

void write_observations(std::ostream& out, const ObservationSet& observations) {
    out << "t_end,a,b,g\n";
    for (const auto& e : observations.entries())
        out << format_real(e.window.t_end()) << ',' << format_real(e.window.a()) << ','
            << format_real(e.window.b()) << ',' << format_real(e.g) << '\n';
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::filesystem::remove(tmp);
            throw std::runtime_error("failed writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace ouocc
