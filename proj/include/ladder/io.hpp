#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ladder/conditions.hpp"
#include "ladder/scattering.hpp"
#include "ladder/sweep.hpp"

namespace ladder::io {

using json = nlohmann::ordered_json;

/// Radians, or a decimal followed by "pi" (optionally "*pi") meaning a
/// multiple of pi: "0.25pi", "-pi", "1*pi". Throws InvalidArgument.
double parse_angle(std::string_view text);

/// Plain decimal. Throws InvalidArgument on trailing garbage.
double parse_number(std::string_view text);

/// CSV layout: "# key: value" metadata lines, a header row, then one line
/// per grid point in grid order. Skipped points keep their swept value in the
/// first column, leave the others empty and name the error in the final
/// `skip_reason` column. LF line endings throughout.
void write_csv(std::ostream& out, const SweepTable& table);
std::string to_csv(const SweepTable& table);

struct CsvFile {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string meta(std::string_view key) const;  // empty if absent
    std::size_t column(std::string_view name) const;
};

/// Reads a file written by `write_csv`. Throws IoError.
CsvFile read_csv(const std::filesystem::path& path);

/// JSON text in which every number is written with 17 significant digits.
std::string dump(const json& j, int indent = 2);

/// NaN and infinities become null.
json number(double v);
json complex(cplx z);
json mode(const Mode& m);
json params(const LadderParams& p);
json flow_rates(const FlowRates& f);

json scatter_record(const LadderParams& p, double k_l, const ScatteringResult& r, const FlowRates& f);
json table(const SweepTable& t);
json blockade(const BlockadeSolution& s, const ScatteringResult& check);
json routing(const RoutingPoint& rp, const FlowRates& f);

/// Writes `text` to `path`, creating parent directories. Throws IoError.
void write_file(const std::filesystem::path& path, std::string_view text);

/// Flat key -> value text from a config file. Two layouts are accepted:
/// `key = value` lines (blank lines and '#' comments ignored), or a JSON
/// object whose scalar members, and the members of a nested "params" object,
/// become entries. Throws IoError if the file cannot be read and
/// InvalidArgument if it cannot be parsed.
struct ConfigFile {
    std::map<std::string, std::string> entries;
    bool from_json = false;
};
ConfigFile load_config(const std::filesystem::path& path);

}  // namespace ladder::io
