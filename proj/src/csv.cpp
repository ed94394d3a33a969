#include "koopguard/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "koopguard/errors.hpp"

namespace koopguard {

namespace {

const char* kHeader = "t,y_true,y_meas,y_pred,u_cmd,u_applied,soc,r_D,det_flag,r_I,iso_flag";

std::string num(double v) { return fmt::format("{:.17g}", v); }

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ','))
        cells.push_back(cell);
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

std::string trim(std::string s)
{
    while (!s.empty() && (s.back() == '\r' || s.back() == ' '))
        s.pop_back();
    size_t i = 0;
    while (i < s.size() && s[i] == ' ')
        ++i;
    return s.substr(i);
}

double parse_num(const std::string& s, size_t line, const std::string& col)
{
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
        throw ParseError(fmt::format("line {}: bad value '{}' in column {}", line, s, col));
    return v;
}

struct Table {
    std::map<std::string, size_t> cols;
    std::vector<std::pair<size_t, std::vector<std::string>>> rows;  // (line number, cells)
};

Table read_table(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open " + path);
    Table tab;
    std::string line;
    size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty())
            continue;
        auto cells = split(line);
        for (auto& c : cells)
            c = trim(c);
        if (!header) {
            for (size_t i = 0; i < cells.size(); ++i)
                tab.cols[cells[i]] = i;
            header = true;
            continue;
        }
        if (cells.size() != tab.cols.size())
            throw ParseError(fmt::format("line {}: expected {} fields, got {}", lineno, tab.cols.size(),
                                         cells.size()));
        tab.rows.emplace_back(lineno, std::move(cells));
    }
    if (!header)
        throw ParseError(path + ": missing header");
    return tab;
}

size_t column(const Table& tab, std::initializer_list<const char*> names)
{
    for (const char* n : names) {
        auto it = tab.cols.find(n);
        if (it != tab.cols.end())
            return it->second;
    }
    throw ParseError(fmt::format("missing column '{}'", *names.begin()));
}

}  // namespace

void write_csv(const std::vector<RunRecord>& records, std::ostream& out)
{
    out << kHeader << '\n';
    for (const auto& r : records) {
        out << num(r.t) << ',' << opt(r.y_true) << ',' << num(r.y_meas) << ',' << opt(r.y_pred) << ','
            << num(r.u_cmd) << ',' << opt(r.u_applied) << ',' << opt(r.soc) << ',' << opt(r.r_D) << ','
            << r.det_flag << ',' << opt(r.r_I) << ',' << r.iso_flag << '\n';
    }
}

void write_csv(const std::vector<RunRecord>& records, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write " + path);
    write_csv(records, out);
    out.flush();
    if (!out)
        throw Error("write failed for " + path);
}

std::vector<RunRecord> read_records(const std::string& path)
{
    Table tab = read_table(path);
    const size_t ct = column(tab, {"t"});
    const size_t cy = column(tab, {"y_meas", "y"});
    const size_t cu = column(tab, {"u_cmd", "u"});

    auto optional_col = [&](const char* name) -> std::optional<size_t> {
        auto it = tab.cols.find(name);
        if (it == tab.cols.end())
            return std::nullopt;
        return it->second;
    };
    auto c_true = optional_col("y_true"), c_pred = optional_col("y_pred"), c_app = optional_col("u_applied"),
         c_soc = optional_col("soc"), c_rd = optional_col("r_D"), c_det = optional_col("det_flag"),
         c_ri = optional_col("r_I"), c_iso = optional_col("iso_flag");

    std::vector<RunRecord> out;
    out.reserve(tab.rows.size());
    for (const auto& [ln, cells] : tab.rows) {
        auto get = [&](std::optional<size_t> c, const char* name) -> std::optional<double> {
            if (!c || cells[*c].empty())
                return std::nullopt;
            return parse_num(cells[*c], ln, name);
        };
        RunRecord r;
        r.t = parse_num(cells[ct], ln, "t");
        r.y_meas = parse_num(cells[cy], ln, "y_meas");
        r.u_cmd = parse_num(cells[cu], ln, "u_cmd");
        r.y_true = get(c_true, "y_true");
        r.y_pred = get(c_pred, "y_pred");
        r.u_applied = get(c_app, "u_applied");
        r.soc = get(c_soc, "soc");
        r.r_D = get(c_rd, "r_D");
        r.r_I = get(c_ri, "r_I");
        r.det_flag = static_cast<int>(get(c_det, "det_flag").value_or(0.0));
        r.iso_flag = static_cast<int>(get(c_iso, "iso_flag").value_or(0.0));
        out.push_back(r);
    }
    return out;
}

std::vector<Frame> ingest_csv(const std::string& path)
{
    Table tab = read_table(path);
    const size_t ct = column(tab, {"t"});
    const size_t cy = column(tab, {"y", "y_meas"});
    const size_t cu = column(tab, {"u", "u_cmd"});

    std::vector<Frame> frames;
    frames.reserve(tab.rows.size());
    double dt = 0.0;
    for (const auto& [ln, cells] : tab.rows) {
        Frame f{parse_num(cells[ct], ln, "t"), parse_num(cells[cy], ln, "y"), parse_num(cells[cu], ln, "u")};
        if (!frames.empty()) {
            double step = f.t - frames.back().t;
            if (!(step > 0.0))
                throw ParseError(fmt::format("line {}: time not increasing ({} after {})", ln, f.t,
                                             frames.back().t));
            if (frames.size() == 1)
                dt = step;
            else if (std::abs(step - dt) > 1e-6 * dt)
                throw ParseError(fmt::format("line {}: sampling gap ({} s, expected {} s)", ln, step, dt));
        }
        frames.push_back(f);
    }
    return frames;
}

}  // namespace koopguard
