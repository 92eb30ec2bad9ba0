#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gcnsel/centrality.hpp"
#include "gcnsel/experiment.hpp"
#include "gcnsel/spectral.hpp"

namespace gcnsel {

// 6 significant digits, '.' separator, locale independent; "nan"/"inf" for
// non-finite values.
std::string format_number(double v);

inline constexpr std::string_view kResultHeader =
    "dataset,policy,rate,seed,accuracy,loss,stop_best,stop_halt";

// Header plus one line per row. with_status appends a `status` column.
void write_results_csv(std::ostream& out, std::span<const ResultRow> rows, bool with_status);

void write_spectrum_csv(std::ostream& out, const std::vector<std::pair<std::string, SpectrumStats>>& rows);

void write_centrality_csv(std::ostream& out, const CentralityScores& scores);

// "A:B:STEP" -> A, A+STEP, ..., up to B (inclusive within 1e-9). Throws
// std::invalid_argument on malformed input or rates outside (0, 1].
std::vector<double> parse_rate_range(std::string_view spec);

/// Line chart of seed-mean accuracy against labeling rate, one polyline per
/// policy. Fixed 800x600 viewBox; series colors are assigned in lexicographic
/// order of policy names. Rows with a non-"ok" status are ignored.
std::string render_sweep_svg(std::span<const ResultRow> rows, std::string_view title);

}  // namespace gcnsel
