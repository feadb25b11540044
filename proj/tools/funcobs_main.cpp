#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "funcobs/io.hpp"

namespace {

struct CommonFlags {
  double tolerance = 0.0;
  double margin = 0.0;
  std::uint64_t seed = 12345;
  std::string format = "text";
  bool oracle = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--tolerance", flags.tolerance, "relative SVD rank tolerance (0 = machine default)");
  cmd->add_option("--margin", flags.margin, "stability boundary margin for detectability");
  cmd->add_option("--seed", flags.seed, "seed for randomized cross-checks (recorded in the report)");
  cmd->add_option("--format", flags.format, "output format")
      ->check(CLI::IsMember({"json", "text"}));
  cmd->add_flag("--oracle", flags.oracle, "enable the prime-field cross-check (slower)");
}

funcobs::ReportOptions to_options(const CommonFlags& flags) {
  funcobs::ReportOptions options;
  options.policy.tolerance = flags.tolerance;
  options.margin = flags.margin;
  options.seed = flags.seed;
  options.oracle = flags.oracle;
  return options;
}

void emit(const funcobs::Json& report, const std::string& format) {
  if (format == "json")
    std::cout << report.dump(2) << "\n";
  else
    std::cout << funcobs::render_text(report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analysis and sensor placement for functional observability of linear systems"};
  app.require_subcommand(1);

  CommonFlags foFlags, sfoFlags, placeFlags, designFlags, targetFlags;
  std::string foFile, sfoFile, placeFile, designFile, targetFile;
  funcobs::PlaceOptions placeOptions;
  std::vector<int> targets;

  CLI::App* checkFo = app.add_subcommand("check-fo",
      "functional observability and detectability of a numeric (A, C, F)");
  checkFo->add_option("file", foFile, "system JSON file")->required();
  add_common(checkFo, foFlags);

  CLI::App* checkSfo = app.add_subcommand("check-sfo",
      "structural functional observability of a pattern (A, C, F)");
  checkSfo->add_option("file", sfoFile, "pattern JSON file")->required();
  add_common(checkSfo, sfoFlags);

  CLI::App* place = app.add_subcommand("place", "greedy minimal sensor selection");
  place->add_option("file", placeFile, "system or pattern JSON file")->required();
  place->add_option("--mode", placeOptions.mode, "objective: fo, sfo, or fd")
      ->check(CLI::IsMember({"fo", "sfo", "fd"}));
  place->add_option("--candidates", placeOptions.candidates,
                    "candidate sensor rows (1-based, default all)")
      ->delimiter(',');
  place->add_flag("--validate-bound", placeOptions.validateBound,
                  "certify the greedy size against the exhaustive optimum (needs <= 14 candidates)");
  add_common(place, placeFlags);

  CLI::App* design = app.add_subcommand("design-min",
      "closed-form minimal output matrix for a diagonalizable (A, F)");
  design->add_option("file", designFile, "system JSON file")->required();
  add_common(design, designFlags);

  CLI::App* target = app.add_subcommand("check-target-ctrl",
      "structural target controllability of n-1 states");
  target->add_option("file", targetFile, "pattern JSON file with \"B\"")->required();
  target->add_option("--targets", targets, "target state indices (1-based)")
      ->delimiter(',')
      ->required();
  add_common(target, targetFlags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (checkFo->parsed()) {
      const auto file = funcobs::load_system_file(foFile);
      emit(funcobs::cmd_check_fo(file, to_options(foFlags)), foFlags.format);
    } else if (checkSfo->parsed()) {
      const auto file = funcobs::load_pattern_file(sfoFile);
      emit(funcobs::cmd_check_sfo(file, to_options(sfoFlags)), sfoFlags.format);
    } else if (place->parsed()) {
      if (placeOptions.mode == "sfo") {
        const auto file = funcobs::load_pattern_file(placeFile);
        emit(funcobs::cmd_place(nullptr, &file, placeOptions, to_options(placeFlags)),
             placeFlags.format);
      } else {
        const auto file = funcobs::load_system_file(placeFile);
        emit(funcobs::cmd_place(&file, nullptr, placeOptions, to_options(placeFlags)),
             placeFlags.format);
      }
    } else if (design->parsed()) {
      const auto file = funcobs::load_system_file(designFile);
      emit(funcobs::cmd_design_min(file, to_options(designFlags)), designFlags.format);
    } else if (target->parsed()) {
      const auto file = funcobs::load_pattern_file(targetFile);
      emit(funcobs::cmd_check_target_ctrl(file, targets, to_options(targetFlags)),
           targetFlags.format);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const funcobs::UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
