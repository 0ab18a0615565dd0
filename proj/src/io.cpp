#include "ladder/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ladder/errors.hpp"

namespace ladder::io {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = line.find(sep, pos);
        out.emplace_back(line.substr(pos, next == std::string_view::npos ? next : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

[[noreturn]] void bad_value(std::string_view text, std::string_view what) {
    throw Error(ErrorKind::InvalidArgument, "cannot parse '" + std::string(text) + "' as " + std::string(what));
}

std::string scalar_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    return format_number(v.get<double>());
}

void dump_to(std::string& out, const json& j, int indent, int depth) {
    const auto newline = [&](int d) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    if (j.is_object() || j.is_array()) {
        const bool object = j.is_object();
        out += object ? '{' : '[';
        if (j.empty()) {
            out += object ? '}' : ']';
            return;
        }
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ',';
            first = false;
            newline(depth + 1);
            if (object) {
                out += json(it.key()).dump();
                out += indent < 0 ? ":" : ": ";
            }
            dump_to(out, *it, indent, depth + 1);
        }
        newline(depth);
        out += object ? '}' : ']';
    } else if (j.is_number_float()) {
        out += format_number(j.get<double>());
    } else {
        out += j.dump();
    }
}

}  // namespace

std::string dump(const json& j, int indent) {
    std::string out;
    dump_to(out, j, indent, 0);
    return out;
}

double parse_number(std::string_view text) {
    const std::string_view t = trim(text);
    double v = 0.0;
    const char* first = t.data();
    if (!t.empty() && t.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        bad_value(text, "a number");
    }
    return v;
}

double parse_angle(std::string_view text) {
    std::string_view t = trim(text);
    if (t.size() >= 2 && t.substr(t.size() - 2) == "pi") {
        t.remove_suffix(2);
        if (!t.empty() && t.back() == '*') t.remove_suffix(1);
        if (t.empty() || t == "+") return pi;
        if (t == "-") return -pi;
        try {
            return parse_number(t) * pi;
        } catch (const Error&) {
            bad_value(text, "an angle");
        }
    }
    try {
        return parse_number(t);
    } catch (const Error&) {
        bad_value(text, "an angle");
    }
}

void write_csv(std::ostream& out, const SweepTable& table) {
    for (const auto& [key, value] : table.metadata) {
        out << "# " << key << ": " << value << '\n';
    }
    out << "# rows: " << table.rows.size() << '\n';
    out << "# skipped: " << table.skips.size() << '\n';
    for (const std::string& col : table.schema) {
        out << col << ',';
    }
    out << "skip_reason\n";

    std::size_t r = 0;
    std::size_t s = 0;
    while (r < table.rows.size() || s < table.skips.size()) {
        const bool take_row =
            s == table.skips.size() || (r < table.rows.size() && table.row_index[r] < table.skips[s].grid_index);
        if (take_row) {
            for (const double v : table.rows[r]) {
                out << format_number(v) << ',';
            }
            out << '\n';
            ++r;
        } else {
            out << format_number(table.skips[s].value);
            for (std::size_t c = 1; c < table.schema.size(); ++c) out << ',';
            out << ',' << error_name(table.skips[s].reason) << '\n';
            ++s;
        }
    }
}

std::string to_csv(const SweepTable& table) {
    std::ostringstream out;
    write_csv(out, table);
    return out.str();
}

std::string CsvFile::meta(std::string_view key) const {
    for (const auto& [k, v] : metadata) {
        if (k == key) return v;
    }
    return {};
}

std::size_t CsvFile::column(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw Error(ErrorKind::InvalidArgument, "CSV has no column '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
}

CsvFile read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open " + path.string());
    }
    CsvFile f;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            const std::string_view body = trim(std::string_view(line).substr(1));
            const std::size_t colon = body.find(':');
            if (colon != std::string_view::npos) {
                f.metadata.emplace_back(std::string(trim(body.substr(0, colon))),
                                        std::string(trim(body.substr(colon + 1))));
            }
            continue;
        }
        if (f.header.empty()) {
            f.header = split(line, ',');
        } else {
            f.rows.push_back(split(line, ','));
        }
    }
    if (f.header.empty()) {
        throw Error(ErrorKind::IoError, path.string() + " has no header row");
    }
    return f;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json complex(cplx z) { return json{{"re", number(z.real())}, {"im", number(z.imag())}}; }

json mode(const Mode& m) {
    json j{{"regime", regime_name(m.regime)}};
    if (m.is_propagating()) {
        j["k"] = number(m.k);
        j["group_velocity"] = number(m.group_velocity);
    } else {
        j["kappa"] = number(m.kappa);
    }
    j["wavevector"] = complex(m.wavevector());
    return j;
}

json params(const LadderParams& p) {
    return json{{"eps", number(p.eps)},
                {"j_left", number(p.j_left)},
                {"j_right", number(p.j_right)},
                {"k_coupling", number(p.k_coupling)},
                {"phi", number(p.phi)}};
}

json flow_rates(const FlowRates& f) {
    return json{{"t_flow_ll", number(f.t_flow_ll)}, {"r_flow_ll", number(f.r_flow_ll)},
                {"t_flow_rl", number(f.t_flow_rl)}, {"r_flow_rl", number(f.r_flow_rl)},
                {"t_raw_rl", number(f.t_raw_rl)},   {"r_raw_rl", number(f.r_raw_rl)},
                {"sum", number(f.sum())}};
}

json scatter_record(const LadderParams& p, double k_l, const ScatteringResult& r, const FlowRates& f) {
    json j;
    j["params"] = params(p);
    j["k_l"] = number(k_l);
    j["derived"] = json{{"xi", number(p.xi())},
                        {"gamma", number(p.gamma())},
                        {"energy", number(incident_energy(p, k_l))},
                        {"band_overlap", overlap_name(band_overlap(p).kind)}};
    j["t_ll"] = complex(r.t_ll);
    j["r_ll"] = complex(r.r_ll);
    j["t_rl"] = complex(r.t_rl);
    j["r_rl"] = complex(r.r_rl);
    j["denominator"] = complex(r.denominator);
    j["flows"] = flow_rates(f);
    j["k_r"] = mode(r.mode_r);
    return j;
}

json table(const SweepTable& t) {
    json meta = json::object();
    for (const auto& [k, v] : t.metadata) meta[k] = v;
    json rows = json::array();
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        json row = json::array();
        for (const double v : t.rows[i]) row.push_back(number(v));
        rows.push_back(std::move(row));
    }
    json skips = json::array();
    for (const SkipRecord& s : t.skips) {
        skips.push_back(json{{"index", s.grid_index},
                             {"value", number(s.value)},
                             {"reason", error_name(s.reason)},
                             {"detail", s.detail}});
    }
    return json{{"name", t.name}, {"metadata", meta}, {"schema", t.schema}, {"rows", rows}, {"skips", skips}};
}

json blockade(const BlockadeSolution& s, const ScatteringResult& check) {
    return json{{"eps", number(s.eps)},
                {"branch", branch_name(s.branch)},
                {"k_l", number(s.k_l)},
                {"params", params(s.params)},
                {"mode_r", mode(s.mode_r)},
                {"abs_t_ll", number(std::abs(check.t_ll))},
                {"abs_r_ll", number(std::abs(check.r_ll))}};
}

json routing(const RoutingPoint& rp, const FlowRates& f) {
    return json{{"phi", number(rp.phi)}, {"xi", number(rp.xi)},   {"k_coupling", number(rp.k_coupling)},
                {"eps", number(rp.eps)}, {"k_l", number(rp.k_l)}, {"k_r", number(rp.k_r)},
                {"params", params(rp.params)}, {"flows", flow_rates(f)}};
}

void write_file(const std::filesystem::path& path, std::string_view text) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::IoError, "cannot write " + path.string());
    }
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) {
        throw Error(ErrorKind::IoError, "write failed for " + path.string());
    }
}

ConfigFile load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot read config file " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    ConfigFile cfg;
    const std::string_view body = trim(text);
    if (!body.empty() && body.front() == '{') {
        cfg.from_json = true;
        json doc;
        try {
            doc = json::parse(body);
        } catch (const json::exception& e) {
            throw Error(ErrorKind::InvalidArgument, "config " + path.string() + ": " + e.what());
        }
        for (const auto& [key, value] : doc.items()) {
            if (value.is_primitive() && !value.is_null()) {
                cfg.entries[key] = scalar_text(value);
            } else if (key == "params" && value.is_object()) {
                for (const auto& [pk, pv] : value.items()) {
                    if (pv.is_primitive() && !pv.is_null()) cfg.entries[pk] = scalar_text(pv);
                }
            }
        }
        return cfg;
    }

    std::istringstream lines(text);
    std::string line;
    int line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        std::string_view l = trim(line);
        if (l.empty() || l.front() == '#') continue;
        const std::size_t eq = l.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::InvalidArgument,
                        "config " + path.string() + " line " + std::to_string(line_no) + ": expected key = value");
        }
        std::string key(trim(l.substr(0, eq)));
        std::string_view value = trim(l.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        cfg.entries[key] = std::string(value);
    }
    return cfg;
}

}  // namespace ladder::io
