#include "vchain/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vchain/errors.hpp"

namespace vchain {

namespace fs = std::filesystem;

void write_text_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot open for writing: " + tmp.string());
        out << content;
        if (!out) throw ConfigError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string format_sig12(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.11e", value);
    return buf;
}

void write_timeseries_csv(const fs::path& path, const TimeSeries& series) {
    std::ostringstream out;
    if (auto it = series.metadata.find("config_hash"); it != series.metadata.end())
        out << "# config_hash=" << it->second << '\n';
    out << "t_ps";
    for (const auto& name : series.channel_names) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < series.n_samples(); ++i) {
        out << format_sig12(series.t[i]);
        for (const auto& chan : series.channels) out << ',' << format_sig12(chan[i]);
        out << '\n';
    }
    write_text_atomic(path, out.str());
}

TimeSeries read_timeseries_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open: " + path.string());
    TimeSeries series;
    std::string line;
    do {
        if (!std::getline(in, line)) throw ConfigError("empty CSV: " + path.string());
        if (line.rfind("# config_hash=", 0) == 0)
            series.metadata["config_hash"] = line.substr(14);
    } while (!line.empty() && line[0] == '#');
    {
        std::istringstream header(line);
        std::string field;
        bool first = true;
        while (std::getline(header, field, ',')) {
            if (first) {
                if (field != "t_ps") throw ConfigError("CSV missing t_ps column: " + path.string());
                first = false;
            } else {
                series.add_channel(field);
            }
        }
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<double> values;
        bool first = true;
        double t = 0.0;
        while (std::getline(row, field, ',')) {
            const double v = std::stod(field);
            if (first) {
                t = v;
                first = false;
            } else {
                values.push_back(v);
            }
        }
        series.push_sample(t, values);
    }
    return series;
}

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                          "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

} // namespace

std::string render_svg(const TimeSeries& series, const std::vector<std::string>& channels,
                       const std::string& title) {
    const int width = 900, height = 540;
    const int ml = 70, mr = 180, mt = 40, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double t0 = series.t.empty() ? 0.0 : series.t.front();
    double t1 = series.t.empty() ? 1.0 : series.t.back();
    if (t1 <= t0) t1 = t0 + 1.0;
    double y0 = 0.0, y1 = 1.0;
    for (const auto& name : channels) {
        const auto& y = series.channel(name);
        for (double v : y) {
            y0 = std::min(y0, v);
            y1 = std::max(y1, v);
        }
    }
    if (y1 <= y0) y1 = y0 + 1.0;

    auto px = [&](double t) { return ml + pw * (t - t0) / (t1 - t0); };
    auto py = [&](double v) { return mt + ph * (1.0 - (v - y0) / (y1 - y0)); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">"
        << title << "</text>\n";

    // axes and ticks
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
        << mt + ph << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double tv = t0 + (t1 - t0) * i / 5.0;
        const double yv = y0 + (y1 - y0) * i / 5.0;
        svg << "<text x=\"" << px(tv) << "\" y=\"" << mt + ph + 20
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << tv
            << "</text>\n"
            << "<text x=\"" << ml - 8 << "\" y=\"" << py(yv) + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << yv
            << "</text>\n";
    }
    svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 10
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">t (ps)</text>\n";

    // at most ~2000 points per polyline keeps files small on long runs
    const std::size_t n = series.n_samples();
    const std::size_t stride = std::max<std::size_t>(1, n / 2000);
    std::size_t color = 0;
    for (const auto& name : channels) {
        const auto& y = series.channel(name);
        svg << "<polyline fill=\"none\" stroke=\"" << kPalette[color % 10]
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < n; i += stride)
            svg << px(series.t[i]) << ',' << py(y[i]) << ' ';
        if (n > 0 && (n - 1) % stride != 0) svg << px(series.t[n - 1]) << ',' << py(y[n - 1]);
        svg << "\"/>\n";
        const double ly = mt + 16.0 * static_cast<double>(color);
        svg << "<line x1=\"" << ml + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw + 30
            << "\" y2=\"" << ly << "\" stroke=\"" << kPalette[color % 10]
            << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << ml + pw + 36 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << name << "</text>\n";
        ++color;
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace vchain
