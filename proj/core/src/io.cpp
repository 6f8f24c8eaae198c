#include "qwalk/io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qwalk {

namespace {

bool is_blank_or_comment(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

[[noreturn]] void parse_fail(const std::string& source, std::size_t line_no,
                             const std::string& what) {
    throw std::runtime_error(source + ":" + std::to_string(line_no) + ": " +
                             what);
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

Profile load_profile(std::istream& in, const std::string& source_name) {
    std::vector<double> knots;
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank_or_comment(line)) continue;
        std::istringstream row(line);
        double x = 0.0;
        double v = 0.0;
        if (!(row >> x >> v))
            parse_fail(source_name, line_no, "expected two numbers: `x value`");
        std::string extra;
        if (row >> extra)
            parse_fail(source_name, line_no, "trailing token `" + extra + "`");
        knots.push_back(x);
        values.push_back(v);
    }
    try {
        return Profile(std::move(knots), std::move(values));
    } catch (const std::invalid_argument& err) {
        throw std::runtime_error(source_name + ": " + err.what());
    }
}

Profile load_profile_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open profile file: " + path);
    return load_profile(in, path);
}

void save_profile(std::ostream& out, const Profile& profile) {
    out << "# profile: x value\n";
    const auto knots = profile.knots();
    const auto values = profile.values();
    for (std::size_t i = 0; i < knots.size(); ++i)
        out << format_double(knots[i]) << ' ' << format_double(values[i])
            << '\n';
}

void save_profile_file(const std::string& path, const Profile& profile) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    save_profile(out, profile);
    if (!out) throw std::runtime_error("write failed: " + path);
}

void save_fields(std::ostream& out, std::span<const OccupationField> fields) {
    if (fields.empty())
        throw std::invalid_argument("save_fields: empty batch");
    const long long n = fields.front().scale_n;
    const long long steps = fields.front().time_steps;
    for (const auto& f : fields)
        if (f.scale_n != n || f.time_steps != steps)
            throw std::invalid_argument(
                "save_fields: fields must share scale and step count");
    out << "# occupation fields: site count\n";
    out << "# n=" << n << " steps=" << steps << " replicas=" << fields.size()
        << '\n';
    for (std::size_t r = 0; r < fields.size(); ++r) {
        out << "# replica " << r << '\n';
        const auto& f = fields[r];
        for (std::size_t i = 0; i < f.counts.size(); ++i)
            if (f.counts[i] != 0)
                out << f.offset + static_cast<long long>(i) << ' '
                    << f.counts[i] << '\n';
    }
}

std::vector<OccupationField> load_fields(std::istream& in,
                                         const std::string& source_name) {
    std::vector<OccupationField> fields;
    long long n = 1;
    long long steps = 0;
    bool seen_meta = false;
    // Rows of the replica currently being read.
    std::vector<std::pair<long long, std::uint64_t>> rows;

    const auto flush = [&]() {
        if (fields.empty()) return;
        OccupationField& f = fields.back();
        if (!rows.empty()) {
            f.offset = rows.front().first;
            f.counts.assign(
                static_cast<std::size_t>(rows.back().first - f.offset + 1), 0);
            for (const auto& [site, count] : rows)
                f.counts[static_cast<std::size_t>(site - f.offset)] = count;
        }
        rows.clear();
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        long long meta_n = 0;
        long long meta_steps = 0;
        unsigned long long meta_reps = 0;
        if (std::sscanf(line.c_str(), "# n=%lld steps=%lld replicas=%llu",
                        &meta_n, &meta_steps, &meta_reps) == 3) {
            if (meta_n < 1 || meta_steps < 0)
                parse_fail(source_name, line_no, "bad field metadata");
            n = meta_n;
            steps = meta_steps;
            seen_meta = true;
            continue;
        }
        unsigned long long replica = 0;
        if (std::sscanf(line.c_str(), "# replica %llu", &replica) == 1) {
            if (!seen_meta)
                parse_fail(source_name, line_no,
                           "replica marker before metadata line");
            flush();
            fields.push_back(OccupationField{0, {}, steps, n});
            continue;
        }
        if (is_blank_or_comment(line)) continue;
        if (fields.empty())
            parse_fail(source_name, line_no, "data row before replica marker");
        std::istringstream row(line);
        long long site = 0;
        long long count = 0;
        if (!(row >> site >> count) || count <= 0)
            parse_fail(source_name, line_no,
                       "expected `site count` with count >= 1");
        if (!rows.empty() && site <= rows.back().first)
            parse_fail(source_name, line_no, "sites must be increasing");
        rows.push_back({site, static_cast<std::uint64_t>(count)});
    }
    flush();
    if (!seen_meta)
        throw std::runtime_error(source_name + ": missing metadata line");
    return fields;
}

void write_csv(std::ostream& out, std::span<const std::string> comments,
               std::span<const std::string> columns,
               const std::vector<std::vector<double>>& rows) {
    for (const auto& c : comments) out << "# " << c << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != columns.size())
            throw std::invalid_argument("write_csv: ragged row");
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
}

} // namespace qwalk
