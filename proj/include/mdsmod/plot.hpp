#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mdsmod {

struct PlotOptions {
    std::string title = "BER vs SNR";
    int width = 860;
    int height = 560;
};

/// Renders BER curves from sweep CSVs into a self-contained SVG with a
/// logarithmic BER axis; one labeled curve per (file, configuration).
/// Rows with zero BER cannot sit on a log axis and are skipped with a
/// warning. Returns the number of curves drawn.
int plot_ber_csv(const std::vector<std::string>& csv_paths, const std::string& out_svg,
                 const PlotOptions& options = {}, std::ostream* warnings = nullptr);

}  // namespace mdsmod
