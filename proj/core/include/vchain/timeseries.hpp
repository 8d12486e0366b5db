#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

namespace vchain {

// Sampled observables of one run. Channels are stored column-major in sample
// order; names are stable across runs of the same scenario.
struct TimeSeries {
    std::vector<double> t;                                // ps
    std::vector<std::string> channel_names;
    std::vector<std::vector<double>> channels;            // channels[c][sample]
    std::vector<Eigen::MatrixXcd> rho_snapshots;          // optional, aligned with t
    std::map<std::string, std::string> metadata;

    std::size_t n_samples() const { return t.size(); }
    int channel_index(const std::string& name) const;
    const std::vector<double>& channel(const std::string& name) const;
    void add_channel(const std::string& name);
    void push_sample(double time, const std::vector<double>& values);
};

inline std::string format_metadata(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9e", value);
    return buf;
}

} // namespace vchain
