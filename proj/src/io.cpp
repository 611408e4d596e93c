#include "msim/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace msim {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // try shorter renderings that still round-trip
    for (int prec = 1; prec <= 16; ++prec) {
        char probe[64];
        std::snprintf(probe, sizeof probe, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(probe, "%lf", &back);
        if (back == v || (std::isnan(back) && std::isnan(v))) return probe;
    }
    return buf;
}

namespace {

std::string provenance_block(const nlohmann::json& config_echo,
                             std::uint64_t master_seed, const char* comment) {
    std::string s;
    s += comment;
    s += " tool: ";
    s += kToolVersion;
    s += "\n";
    s += comment;
    s += " config: ";
    s += config_echo.dump();
    s += "\n";
    s += comment;
    s += " master_seed: ";
    s += std::to_string(master_seed);
    s += "\n";
    return s;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

} // namespace

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const nlohmann::json& config_echo, std::uint64_t master_seed,
                     const std::vector<std::string>& columns)
    : path_(path.string()), n_columns_(columns.size()) {
    std::filesystem::create_directories(path.parent_path().empty()
                                            ? std::filesystem::path(".")
                                            : path.parent_path());
    buffer_ = provenance_block(config_echo, master_seed, "#");
    for (std::size_t i = 0; i < columns.size(); ++i) {
        buffer_ += columns[i];
        buffer_ += (i + 1 < columns.size()) ? "," : "\n";
    }
}

CsvWriter::~CsvWriter() {
    if (!closed_) close();
}

void CsvWriter::write_row(const std::vector<double>& values) {
    if (values.size() != n_columns_)
        throw std::invalid_argument("CsvWriter: cell count does not match header");
    for (std::size_t i = 0; i < values.size(); ++i) {
        buffer_ += format_double(values[i]);
        buffer_ += (i + 1 < values.size()) ? "," : "\n";
    }
}

void CsvWriter::write_row_raw(const std::vector<std::string>& cells) {
    if (cells.size() != n_columns_)
        throw std::invalid_argument("CsvWriter: cell count does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        buffer_ += cells[i];
        buffer_ += (i + 1 < cells.size()) ? "," : "\n";
    }
}

void CsvWriter::close() {
    if (closed_) return;
    write_file_atomic(path_, buffer_);
    closed_ = true;
}

void write_json_file(const std::filesystem::path& path, nlohmann::json body,
                     const nlohmann::json& config_echo, std::uint64_t master_seed) {
    body["tool"] = kToolVersion;
    body["config"] = config_echo;
    body["master_seed"] = master_seed;
    if (!path.parent_path().empty())
        std::filesystem::create_directories(path.parent_path());
    write_file_atomic(path.string(), body.dump(2) + "\n");
}

void append_run_log(const std::filesystem::path& out_dir, const std::string& line) {
    std::filesystem::create_directories(out_dir);
    std::ofstream log(out_dir / "run.log", std::ios::app);
    log << line << "\n";
}

// --- SVG -------------------------------------------------------------------

namespace {

struct Range {
    double lo = 0.0, hi = 1.0;
    void expand(double v) {
        if (std::isnan(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
};

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

} // namespace

void write_svg_scatter(const std::filesystem::path& path, const SvgPlot& plot) {
    constexpr double W = 640, H = 480;
    constexpr double ml = 70, mr = 20, mt = 40, mb = 55;

    Range rx, ry;
    bool first = true;
    for (const auto& s : plot.series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (std::isnan(s.x[i]) || std::isnan(s.y[i])) continue;
            if (first) {
                rx.lo = rx.hi = s.x[i];
                ry.lo = ry.hi = s.y[i];
                first = false;
            }
            rx.expand(s.x[i]);
            ry.expand(s.y[i]);
            if (i < s.y_err.size()) {
                ry.expand(s.y[i] - s.y_err[i]);
                ry.expand(s.y[i] + s.y_err[i]);
            }
            if (i < s.x_err.size()) {
                rx.expand(s.x[i] - s.x_err[i]);
                rx.expand(s.x[i] + s.x_err[i]);
            }
        }
    if (rx.hi - rx.lo < 1e-12) rx.hi = rx.lo + 1.0;
    if (ry.hi - ry.lo < 1e-12) ry.hi = ry.lo + 1.0;
    const double padx = 0.06 * (rx.hi - rx.lo), pady = 0.08 * (ry.hi - ry.lo);
    rx.lo -= padx; rx.hi += padx;
    ry.lo -= pady; ry.hi += pady;

    auto px = [&](double x) { return ml + (x - rx.lo) / (rx.hi - rx.lo) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - ry.lo) / (ry.hi - ry.lo) * (H - mt - mb); };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n";
    s += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
    char buf[512];

    // axes
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
                  ml, H - mb, W - mr, H - mb);
    s += buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
                  ml, mt, ml, H - mb);
    s += buf;
    // ticks
    for (int k = 0; k <= 5; ++k) {
        const double xv = rx.lo + (rx.hi - rx.lo) * k / 5.0;
        const double yv = ry.lo + (ry.hi - ry.lo) * k / 5.0;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>"
                      "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" text-anchor=\"middle\">%s</text>\n",
                      px(xv), H - mb, px(xv), H - mb + 5, px(xv), H - mb + 18,
                      fmt_tick(xv).c_str());
        s += buf;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>"
                      "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\" text-anchor=\"end\">%s</text>\n",
                      ml - 5, py(yv), ml, py(yv), ml - 8, py(yv) + 4, fmt_tick(yv).c_str());
        s += buf;
    }
    // labels & title
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" font-size=\"13\" text-anchor=\"middle\">%s</text>\n",
                  (ml + W - mr) / 2, H - 12, plot.x_label.c_str());
    s += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"16\" y=\"%.2f\" font-size=\"13\" text-anchor=\"middle\" "
                  "transform=\"rotate(-90 16 %.2f)\">%s</text>\n",
                  (mt + H - mb) / 2, (mt + H - mb) / 2, plot.y_label.c_str());
    s += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"22\" font-size=\"15\" text-anchor=\"middle\">%s</text>\n",
                  W / 2, plot.title.c_str());
    s += buf;

    if (plot.has_guide) {
        const double y0 = plot.guide_slope * rx.lo + plot.guide_intercept;
        const double y1 = plot.guide_slope * rx.hi + plot.guide_intercept;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                      "stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n",
                      px(rx.lo), py(y0), px(rx.hi), py(y1));
        s += buf;
    }

    double legend_y = mt + 8;
    for (const auto& ser : plot.series) {
        if (ser.draw_line && ser.x.size() > 1) {
            std::string pts;
            for (std::size_t i = 0; i < ser.x.size(); ++i) {
                if (std::isnan(ser.y[i])) continue;
                std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(ser.x[i]), py(ser.y[i]));
                pts += buf;
            }
            std::snprintf(buf, sizeof buf,
                          "<polyline fill=\"none\" stroke=\"%s\" points=\"%s\"/>\n",
                          ser.color.c_str(), pts.c_str());
            s += buf;
        }
        for (std::size_t i = 0; i < ser.x.size(); ++i) {
            if (std::isnan(ser.x[i]) || std::isnan(ser.y[i])) continue;
            if (i < ser.y_err.size() && ser.y_err[i] > 0) {
                std::snprintf(buf, sizeof buf,
                              "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\"/>\n",
                              px(ser.x[i]), py(ser.y[i] - ser.y_err[i]), px(ser.x[i]),
                              py(ser.y[i] + ser.y_err[i]), ser.color.c_str());
                s += buf;
            }
            if (i < ser.x_err.size() && ser.x_err[i] > 0) {
                std::snprintf(buf, sizeof buf,
                              "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\"/>\n",
                              px(ser.x[i] - ser.x_err[i]), py(ser.y[i]),
                              px(ser.x[i] + ser.x_err[i]), py(ser.y[i]), ser.color.c_str());
                s += buf;
            }
            std::snprintf(buf, sizeof buf,
                          "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\"/>\n",
                          px(ser.x[i]), py(ser.y[i]), ser.color.c_str());
            s += buf;
        }
        if (!ser.label.empty()) {
            std::snprintf(buf, sizeof buf,
                          "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\"/>"
                          "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\">%s</text>\n",
                          W - mr - 150.0, legend_y, ser.color.c_str(), W - mr - 140.0,
                          legend_y + 4, ser.label.c_str());
            s += buf;
            legend_y += 18;
        }
    }
    s += "</svg>\n";

    if (!path.parent_path().empty())
        std::filesystem::create_directories(path.parent_path());
    write_file_atomic(path.string(), s);
}

} // namespace msim
