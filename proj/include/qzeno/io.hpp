// io.hpp — CSV/JSON serialization of scans, traces and summaries

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qzeno/coefficients.hpp"
#include "qzeno/dynamics.hpp"
#include "qzeno/zeno.hpp"

namespace qzeno {

nlohmann::json to_json(const ReservoirParams& p);
ReservoirParams params_from_json(const nlohmann::json& j, ReservoirParams defaults = {});
nlohmann::json to_json(const MarkovianLimits& m);
nlohmann::json to_json(const CoefficientSeries& s);

// tau,rate_z,ratio,regime ; the regime column reads AZE-divergent for degenerate scans.
void write_scan_csv(std::ostream& os, const ZenoScan& scan);
// {n, params, markov_rate, crossovers[], regime?} with regime present when AZE-divergent.
nlohmann::json scan_sidecar(const ZenoScan& scan);
nlohmann::json to_json(const ZenoScan& scan);

// t,p0,p1,...,pN_max
void write_trace_csv(std::ostream& os, const LadderTrace& trace);

// Rectangular table with a header row; cells already formatted.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
void write_table(std::ostream& os, const CsvTable& table);

// Files staged in memory and written together: each goes to a temporary sibling and is renamed
// into place, so a failed run leaves no partial outputs.
class OutputSet {
  public:
    void add(std::string name, std::string contents);
    void add_json(std::string name, const nlohmann::json& j);
    void write_all(const std::filesystem::path& directory) const;
    const std::map<std::string, std::string>& files() const { return files_; }

  private:
    std::map<std::string, std::string> files_;
};

// Creates the directory if needed and checks that a file can be created in it.
void ensure_writable_directory(const std::filesystem::path& directory);

} // namespace qzeno
