#include "stpp/io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stpp/error.hpp"
#include "stpp/text.hpp"

namespace stpp::io {

namespace {

using json = nlohmann::json;

constexpr int kGridSchemaVersion = 1;

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return in;
}

// Splits CSV text into rows; validates the header against `expected`
// alternatives and returns the index of the one that matched.
struct CsvRows {
    std::size_t layout = 0;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // (line number, fields)
};

CsvRows read_csv(std::istream& is, const std::string& source, const std::vector<std::vector<std::string>>& layouts) {
    CsvRows out;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (text::trim(line).empty()) continue;
        auto fields = text::split(line, ',');
        if (!have_header) {
            const auto it = std::find(layouts.begin(), layouts.end(), fields);
            if (it == layouts.end()) {
                std::string expected;
                for (const auto& l : layouts) {
                    if (!expected.empty()) expected += "' or '";
                    for (std::size_t i = 0; i < l.size(); ++i) expected += (i ? "," : "") + l[i];
                }
                throw ParseError(source + ": header must be '" + expected + "', got '" + std::string(text::trim(line)) + "'");
            }
            out.layout = static_cast<std::size_t>(it - layouts.begin());
            have_header = true;
            continue;
        }
        if (fields.size() != layouts[out.layout].size())
            throw ParseError(source + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(layouts[out.layout].size()) + " fields, got " +
                             std::to_string(fields.size()));
        out.rows.emplace_back(lineno, std::move(fields));
    }
    if (!have_header) throw ParseError(source + ": missing CSV header");
    return out;
}

SpaceTimePoint row_point(const std::vector<std::string>& f, const std::string& where) {
    const double x = text::parse_double(f[0], where + " x");
    const double y = text::parse_double(f[1], where + " y");
    const double t = text::parse_double(f[2], where + " t");
    try {
        return {x, y, t};
    } catch (const InvalidArgument& e) {
        throw ParseError(where + ": " + e.what());
    }
}

void write_point(std::ostream& os, const SpaceTimePoint& p) {
    os << text::format_double(p.x) << ',' << text::format_double(p.y) << ',' << text::format_double(p.t);
}

json window_json(const Window& w) {
    return {{"x", {w.x().lo(), w.x().hi()}}, {"y", {w.y().lo(), w.y().hi()}}, {"t", {w.t().lo(), w.t().hi()}}};
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << contents;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

PatternTable read_pattern_csv(std::istream& is, const std::string& source) {
    const auto csv = read_csv(is, source, {{"x", "y", "t"}, {"x", "y", "t", "mark"}});
    PatternTable table;
    if (csv.layout == 1) table.marks.emplace();
    for (const auto& [lineno, f] : csv.rows) {
        const auto where = source + ":" + std::to_string(lineno);
        table.points.push_back(row_point(f, where));
        if (table.marks) {
            if (f[3].empty()) throw ParseError(where + ": empty mark");
            table.marks->push_back(f[3]);
        }
    }
    return table;
}

PatternTable read_pattern_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_pattern_csv(in, path.string());
}

void write_pattern_csv(std::ostream& os, const PointPattern& pattern) {
    os << "x,y,t\n";
    for (const auto& p : pattern.points()) {
        write_point(os, p);
        os << '\n';
    }
}

void write_pattern_csv(std::ostream& os, const MarkedPointPattern& pattern) {
    os << "x,y,t,mark\n";
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        write_point(os, pattern.points()[i]);
        os << ',' << pattern.mark(i).label << '\n';
    }
}

Window infer_window(const std::vector<SpaceTimePoint>& points) {
    if (points.empty()) throw InvalidArgument("cannot infer a window from an empty pattern");
    std::array<double, 6> b{points[0].x, points[0].x, points[0].y, points[0].y, points[0].t, points[0].t};
    for (const auto& p : points) {
        for (int a = 0; a < 3; ++a) {
            b[2 * a] = std::min(b[2 * a], p[a]);
            b[2 * a + 1] = std::max(b[2 * a + 1], p[a]);
        }
    }
    return Window::from_bounds(b);
}

std::vector<CovariateSample> read_covariate_samples_csv(std::istream& is, const std::string& source) {
    const auto csv = read_csv(is, source, {{"x", "y", "t", "value"}});
    std::vector<CovariateSample> out;
    for (const auto& [lineno, f] : csv.rows) {
        const auto where = source + ":" + std::to_string(lineno);
        const double v = text::parse_double(f[3], where + " value");
        if (!std::isfinite(v)) throw ParseError(where + ": non-finite covariate value");
        out.push_back({row_point(f, where), v});
    }
    if (out.empty()) throw ParseError(source + ": no covariate samples");
    return out;
}

std::vector<CovariateSample> read_covariate_samples_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_covariate_samples_csv(in, path.string());
}

void write_grid_csv(std::ostream& os, const CovariateGrid& grid) {
    os << "cell_id,x_center,y_center,t_center,value\n";
    for (std::size_t c = 0; c < grid.values().size(); ++c) {
        os << c << ',';
        write_point(os, cell_center(grid.window(), grid.resolution(), c));
        os << ',' << text::format_double(grid.values()[c]) << '\n';
    }
}

std::filesystem::path save_grid(const CovariateGrid& grid, const std::filesystem::path& stem,
                                const std::string& name) {
    auto header_path = stem;
    header_path += ".json";
    auto bin_path = stem;
    bin_path += ".bin";

    std::string bytes(grid.values().size() * 8, '\0');
    for (std::size_t i = 0; i < grid.values().size(); ++i) {
        const auto bits = std::bit_cast<std::uint64_t>(grid.values()[i]);
        for (int b = 0; b < 8; ++b) bytes[i * 8 + b] = static_cast<char>((bits >> (8 * b)) & 0xFF);
    }
    write_file(bin_path, bytes);

    const auto& r = grid.resolution();
    json header = {{"schema", "stpp-covariate-grid"},
                   {"schema_version", kGridSchemaVersion},
                   {"name", name},
                   {"window", window_json(grid.window())},
                   {"resolution", {r.nx, r.ny, r.nt}},
                   {"value_count", grid.values().size()},
                   {"encoding", "float64-le"},
                   {"order", "cube_index (x fastest, then y, then t)"},
                   {"binary_file", bin_path.filename().string()}};
    write_file(header_path, header.dump(2) + "\n");
    return header_path;
}

CovariateGrid load_grid(const std::filesystem::path& header_path) {
    json header;
    try {
        header = json::parse(read_file(header_path));
        if (header.at("schema") != "stpp-covariate-grid" || header.at("schema_version") != kGridSchemaVersion)
            throw ParseError(header_path.string() + ": not a version-1 covariate grid header");
        const auto& w = header.at("window");
        const auto window = Window::from_bounds({w.at("x")[0], w.at("x")[1], w.at("y")[0], w.at("y")[1],
                                                 w.at("t")[0], w.at("t")[1]});
        const auto& r = header.at("resolution");
        const GridResolution res(r.at(0).get<std::size_t>(), r.at(1).get<std::size_t>(), r.at(2).get<std::size_t>());
        const auto count = header.at("value_count").get<std::size_t>();
        const auto bin_path = header_path.parent_path() / header.at("binary_file").get<std::string>();
        const auto bytes = read_file(bin_path);
        if (bytes.size() != count * 8)
            throw ParseError(bin_path.string() + ": expected " + std::to_string(count * 8) + " bytes, found " +
                             std::to_string(bytes.size()));
        std::vector<double> values(count);
        for (std::size_t i = 0; i < count; ++i) {
            std::uint64_t bits = 0;
            for (int b = 0; b < 8; ++b)
                bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i * 8 + b])) << (8 * b);
            values[i] = std::bit_cast<double>(bits);
        }
        return CovariateGrid(window, res, std::move(values));
    } catch (const json::exception& e) {
        throw ParseError(header_path.string() + ": malformed grid header: " + e.what());
    }
}

}  // namespace stpp::io
