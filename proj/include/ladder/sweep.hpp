#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ladder/errors.hpp"
#include "ladder/lattice.hpp"
#include "ladder/params.hpp"

namespace ladder {

enum class SweptVariable { KL, Eps, Xi, Phi };

std::string_view swept_name(SweptVariable v) noexcept;
std::optional<SweptVariable> parse_swept(std::string_view name) noexcept;

/// Closed grids include both endpoints; cell-centred grids place n points at
/// the midpoints of n equal cells, so they never touch the endpoints.
enum class GridKind { Closed, CellCentred };

struct SweepRange {
    double start = 0.0;
    double stop = 1.0;
    int n_points = 512;
    GridKind grid = GridKind::Closed;
};

/// Grid values in ascending order. Throws SpecInvalid unless
/// start < stop, both are finite and n_points >= 2.
std::vector<double> grid_values(const SweepRange& range);

/// Column groups a sweep can emit.
namespace output {
inline constexpr unsigned amplitudes = 1u << 0;
inline constexpr unsigned raw_rates = 1u << 1;
inline constexpr unsigned flows = 1u << 2;
inline constexpr unsigned k_r = 1u << 3;
inline constexpr unsigned regime = 1u << 4;
inline constexpr unsigned all = amplitudes | raw_rates | flows | k_r | regime;
}  // namespace output

/// Parses a comma-separated list such as "amplitudes,flows"; "all" selects
/// every group. Throws SpecInvalid on unknown names.
unsigned parse_outputs(std::string_view list);
std::string outputs_to_string(unsigned outputs);

struct SweepSpec {
    std::string name = "sweep";
    SweptVariable swept = SweptVariable::KL;
    SweepRange range;
    /// Everything not swept. The field matching the swept variable is ignored
    /// (for xi sweeps, k_coupling).
    LadderParams fixed;
    double k_l = 0.25 * pi;
    unsigned outputs = output::all;
};

/// Throws SpecInvalid for malformed specs: bad ranges, no outputs, an xi
/// range reaching below zero or a k_L range leaving [0, pi].
void validate_spec(const SweepSpec& spec);

/// A grid point that produced no row.
struct SkipRecord {
    std::size_t grid_index = 0;
    double value = 0.0;
    ErrorKind reason = ErrorKind::InvalidArgument;
    std::string detail;
};

/// Rows of real numbers under a fixed schema, plus the grid points that were
/// skipped. `row_index[i]` is the grid position of `rows[i]`; both rows and
/// skips are in ascending grid order.
struct SweepTable {
    std::string name;
    std::vector<std::string> schema;
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> row_index;
    std::vector<SkipRecord> skips;
    std::vector<std::pair<std::string, std::string>> metadata;

    /// Position of a named column. Throws InvalidArgument if absent.
    std::size_t column(std::string_view name) const;
    bool has_column(std::string_view name) const noexcept;
    /// Values of one column across all rows.
    std::vector<double> column_values(std::string_view name) const;
};

/// Regime codes stored in the `regime` column.
double regime_code(Regime r) noexcept;

/// Evaluates scatter and flows at every grid point. Failing points become
/// skip records; the sweep itself only throws SpecInvalid. The result does
/// not depend on `threads` (0 picks the default worker count).
SweepTable run_sweep(const SweepSpec& spec, unsigned threads = 0);

/// Echo of a parameter set as metadata entries.
std::vector<std::pair<std::string, std::string>> params_metadata(const LadderParams& p);

/// Decimal text with 17 significant digits; "nan", "inf" and "-inf" for
/// non-finite values.
std::string format_number(double v);

}  // namespace ladder
