#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "funcobs/analysis.hpp"
#include "funcobs/pattern.hpp"
#include "funcobs/types.hpp"

namespace funcobs {

using Json = nlohmann::ordered_json;

/// Numeric system file: dense "A", "C", "F" (and optionally "B") plus
/// optional per-eigenvalue Jordan data for the modal table of a defective A.
struct SystemFile {
  SystemTriple system;
  std::optional<Eigen::MatrixXd> B;
  std::vector<JordanBlockData> jordan;
};

/// Structured system file: 0/1 grids "A", "C", "F" (or "XF", a 1-based list
/// of functional states standing for stacked unit rows), optional "B".
struct PatternFile {
  PatternMatrix A;
  std::optional<PatternMatrix> C;
  std::optional<PatternMatrix> F;
  std::optional<PatternMatrix> B;
  std::vector<int> functionalStates;  // 0-based, filled when "XF" was given
  bool fromXF = false;

  PatternTriple triple() const;
};

SystemFile load_system_file(const std::string& path);
SystemFile parse_system_json(const Json& doc);
PatternFile load_pattern_file(const std::string& path);
PatternFile parse_pattern_json(const Json& doc);

Json matrix_to_json(const Eigen::MatrixXd& m);

/// Options shared by every subcommand; all recorded in the report.
struct ReportOptions {
  RankPolicy policy{};
  double margin = 0.0;
  std::uint64_t seed = 12345;
  bool oracle = false;
};

Json cmd_check_fo(const SystemFile& file, const ReportOptions& options);
Json cmd_check_sfo(const PatternFile& file, const ReportOptions& options);

struct PlaceOptions {
  std::string mode = "fo";  // fo | sfo | fd
  std::vector<int> candidates;  // 1-based sensor rows; empty = all
  bool validateBound = false;
};

Json cmd_place(const SystemFile* systemFile, const PatternFile* patternFile,
               const PlaceOptions& place, const ReportOptions& options);
Json cmd_design_min(const SystemFile& file, const ReportOptions& options);
Json cmd_check_target_ctrl(const PatternFile& file, const std::vector<int>& targets1Based,
                           const ReportOptions& options);

/// Plain-text rendering of a report for terminal use.
std::string render_text(const Json& report);

}  // namespace funcobs
