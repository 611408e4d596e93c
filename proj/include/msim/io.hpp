// io.hpp
// Deterministic CSV / JSON / SVG emission.  Every output file starts with a
// provenance block (tool version, full config echo, master seed); numbers are
// rendered with fixed round-trip formatting so byte-identical reruns are a
// testable property.  Wall-clock information never enters these files; it is
// confined to the run log.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace msim {

inline constexpr const char* kToolVersion = "magicsim 0.1.0";

// Shortest round-trip decimal rendering of a double ("%.17g" trimmed).
std::string format_double(double v);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const nlohmann::json& config_echo,
              std::uint64_t master_seed, const std::vector<std::string>& columns);
    ~CsvWriter();

    void write_row(const std::vector<double>& values);
    void write_row_raw(const std::vector<std::string>& cells);
    void close();

private:
    std::string path_;
    std::string buffer_;
    std::size_t n_columns_;
    bool closed_ = false;
};

// JSON document with the same provenance block, written atomically on save.
void write_json_file(const std::filesystem::path& path, nlohmann::json body,
                     const nlohmann::json& config_echo, std::uint64_t master_seed);

// Appends a line to the (non-deterministic) run log; the only place wall
// clock output is allowed.
void append_run_log(const std::filesystem::path& out_dir, const std::string& line);

// --- SVG scatter -----------------------------------------------------------

struct SvgSeries {
    std::string label;
    std::string color = "#1f77b4";
    bool draw_line = false;  // connect points in x order
    std::vector<double> x, y;
    std::vector<double> y_err;  // optional, empty or same length
    std::vector<double> x_err;  // optional
};

struct SvgPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<SvgSeries> series;
    // optional dashed guide line y = slope * x + intercept
    bool has_guide = false;
    double guide_slope = 0.0;
    double guide_intercept = 0.0;
};

void write_svg_scatter(const std::filesystem::path& path, const SvgPlot& plot);

} // namespace msim
