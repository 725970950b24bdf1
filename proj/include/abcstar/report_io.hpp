#pragma once

#include "abcstar/calibration.hpp"
#include "abcstar/diagnostics.hpp"
#include "abcstar/samplers.hpp"

#include <string>
#include <vector>

namespace abcstar {

/// Shortest round-trip decimal form (17 significant digits).
std::string format_double(double v);

/// Calibration report with every input, replayable bit-for-bit.
void write_calibration_report(const CalibrationReport& report, const std::string& path);
CalibrationReport read_calibration_report(const std::string& path);

/// One row per draw/state: iteration, theta components, z components,
/// accepted flag. `echo` lines are prepended as '#' comments.
void write_draws_csv(const std::vector<Draw>& draws, int theta_dim, int z_dim,
                     const std::string& path, const std::string& echo);

void write_accuracy_report(const AccuracyReport& report, const std::string& path,
                           const std::string& echo);

/// Series and summary sets as CSV, one value per row under a named header.
void write_series_csv(const std::vector<double>& values, const std::string& name,
                      const std::string& path);
std::vector<double> read_series_csv(const std::string& path);

/// Density grid emitted by the oracle command: bin centers and
/// probabilities, with a binning hash that downstream KL runs echo.
void write_density_grid(const std::vector<double>& probs, Interval support0,
                        Interval support1, int bins, int dim, const std::string& path,
                        const std::string& echo);

std::uint64_t binning_hash(Interval support0, Interval support1, int bins, int dim);

} // namespace abcstar
