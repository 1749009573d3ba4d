// io.cpp — Serialization helpers and atomic output

#include "qzeno/io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "qzeno/errors.hpp"
#include "qzeno/format.hpp"

namespace qzeno {

namespace fs = std::filesystem;

nlohmann::json to_json(const ReservoirParams& p) {
    return {{"omega0", p.omega0}, {"r", p.r}, {"theta", p.theta}, {"alpha", p.alpha}};
}

ReservoirParams params_from_json(const nlohmann::json& j, ReservoirParams p) {
    p.omega0 = j.value("omega0", p.omega0);
    p.r = j.value("r", p.r);
    p.theta = j.value("theta", p.theta);
    p.alpha = j.value("alpha", p.alpha);
    return p;
}

nlohmann::json to_json(const MarkovianLimits& m) {
    return {{"delta_m", m.delta_m}, {"gamma_m", m.gamma_m}};
}

nlohmann::json to_json(const CoefficientSeries& s) {
    const auto column = [](const Eigen::VectorXd& v) {
        return std::vector<double>(v.data(), v.data() + v.size());
    };
    return {{"params", to_json(s.params)},  {"t", column(s.times)},
            {"delta", column(s.delta)},     {"gamma", column(s.gamma)},
            {"int_delta", column(s.int_delta)}, {"int_gamma", column(s.int_gamma)}};
}

void write_scan_csv(std::ostream& os, const ZenoScan& scan) {
    os << "tau,rate_z,ratio,regime\n";
    for (Eigen::Index i = 0; i < scan.taus.size(); ++i) {
        os << format_double(scan.taus[i]) << ',' << format_double(scan.rate_z[i]) << ',';
        if (scan.aze_divergent)
            os << "inf,AZE-divergent\n";
        else
            os << format_double(scan.ratio[i]) << ','
               << to_string(scan.regimes[static_cast<std::size_t>(i)]) << '\n';
    }
}

nlohmann::json scan_sidecar(const ZenoScan& scan) {
    nlohmann::json j{{"n", scan.n},
                     {"params", to_json(scan.params)},
                     {"markov_rate", scan.markov_rate},
                     {"crossovers", scan.crossovers}};
    if (scan.aze_divergent) j["regime"] = "AZE-divergent";
    return j;
}

nlohmann::json to_json(const ZenoScan& scan) {
    nlohmann::json j = scan_sidecar(scan);
    j["tau"] = std::vector<double>(scan.taus.data(), scan.taus.data() + scan.taus.size());
    j["rate_z"] = std::vector<double>(scan.rate_z.data(), scan.rate_z.data() + scan.rate_z.size());
    if (!scan.aze_divergent) {
        j["ratio"] = std::vector<double>(scan.ratio.data(), scan.ratio.data() + scan.ratio.size());
        std::vector<std::string> regimes;
        for (auto r : scan.regimes) regimes.push_back(to_string(r));
        j["regimes"] = regimes;
    }
    return j;
}

void write_trace_csv(std::ostream& os, const LadderTrace& trace) {
    const Eigen::Index levels = trace.populations.empty() ? 0 : trace.populations.front().size();
    os << 't';
    for (Eigen::Index k = 0; k < levels; ++k) os << ",p" << k;
    os << '\n';
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        os << format_double(trace.times[i]);
        for (Eigen::Index k = 0; k < levels; ++k) os << ',' << format_double(trace.populations[i][k]);
        os << '\n';
    }
}

void write_table(std::ostream& os, const CsvTable& table) {
    const auto line = [&os](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
        os << '\n';
    };
    line(table.header);
    for (const auto& row : table.rows) line(row);
}

void OutputSet::add(std::string name, std::string contents) {
    files_[std::move(name)] = std::move(contents);
}

void OutputSet::add_json(std::string name, const nlohmann::json& j) {
    add(std::move(name), j.dump(2) + "\n");
}

void OutputSet::write_all(const fs::path& directory) const {
    ensure_writable_directory(directory);
    std::vector<std::pair<fs::path, fs::path>> staged;
    for (const auto& [name, contents] : files_) {
        const fs::path final_path = directory / name;
        fs::path temp = final_path;
        temp += ".tmp";
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        out << contents;
        out.close();
        if (!out) {
            for (const auto& s : staged) fs::remove(s.first);
            fs::remove(temp);
            throw Error("failed to write " + temp.string());
        }
        staged.emplace_back(temp, final_path);
    }
    for (const auto& [temp, final_path] : staged) fs::rename(temp, final_path);
}

void ensure_writable_directory(const fs::path& directory) {
    std::error_code ec;
    fs::create_directories(directory, ec);
    if (!fs::is_directory(directory)) throw Error("output directory " + directory.string() + " is not a directory");
    const fs::path probe = directory / ".qzeno_write_probe";
    {
        std::ofstream out(probe);
        if (!out) throw Error("output directory " + directory.string() + " is not writable");
    }
    fs::remove(probe, ec);
}

} // namespace qzeno
