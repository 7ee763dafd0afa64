#pragma once

// Static SVG line plots of a fields.csv table.

#include <filesystem>
#include <string>
#include <vector>

namespace dwdual {

struct Series {
  std::string label;
  std::vector<double> y;
};

/// One SVG document: every series against the shared abscissa.
std::string render_svg(const std::string& title, const std::string& x_label,
                       const std::vector<double>& x, const std::vector<Series>& series);

/// Writes displacements.svg (u1..u3), dual_fields.svg (zeta1..zeta3) and
/// stress.svg (F, G) into `directory`. Throws Error(Config) for an empty file
/// or missing columns and Error(NumericalFailure) for non-finite entries.
std::vector<std::filesystem::path> emit_profile_plots(const std::filesystem::path& fields_csv,
                                                      const std::filesystem::path& directory);

}  // namespace dwdual
