#pragma once
// Run-configuration ingestion (one flat JSON file per run), canonical
// re-emission, content hashing, and the text artifacts every command writes
// (series/field CSVs, summary/manifest/verdict/report JSON).

#include <optional>
#include <string>
#include <vector>

#include "pmlab/barriers.hpp"
#include "pmlab/classifier.hpp"
#include "pmlab/geometry.hpp"
#include "pmlab/model.hpp"
#include "pmlab/solver.hpp"

namespace pmlab {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunConfig {
  ProblemSpec problem;
  SolverConfig solver;       // defaults apply for any field the file omits
  double layer_depth = 0.0;  // 0 = classifier default (0.2 * inradius)
  std::optional<InitialData> initial_low;   // for the comparison command
  std::optional<InitialData> initial_high;
};

// Throws ConfigError("config_parse", ...) naming the offending key, including
// unknown keys (configs are human-edited; typos must not pass silently).
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);  // ConfigError("config_unreadable")

// Canonical re-emission: keys sorted, doubles shortest-round-trip. Feeding
// the result back through parse_config reproduces the same ValidatedSpec.
std::string dump_config(const RunConfig& rc);

// FNV-1a 64 over the canonical dump, as 16 hex digits. Stable under field
// reordering of the input file; changes iff any field value changes.
std::string config_hash(const RunConfig& rc);

// ------------------------------------------------------------- artifacts ----

std::string series_csv(const std::vector<SeriesSample>& series);
std::string field_csv(const Grid& grid, const GridField& field);

// verdict record as written by the classify command
std::string verdict_json(const RegimeVerdict& v, const RegimeInputs& in);

// run summary: status, horizon, grid, singularity estimate, regime verdict,
// and the consistency cross-check
std::string summary_json(const SimulationOutcome& o, const RegimeVerdict& v,
                         const ConsistencyReport& consistency);

// manifest: config echo + content hash + tool version + duration + outcome
std::string manifest_json(const RunConfig& rc, const std::string& outcome,
                          double duration_seconds);

std::string certify_report_json(const BarrierCheckReport& rep);

std::string compare_report_json(const OrderingReport& rep, double tolerance);

// ------------------------------------------------------------ filesystem ----

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);  // ConfigError("config_unreadable")

}  // namespace pmlab
