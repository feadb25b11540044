#include "funcobs/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "funcobs/placement.hpp"
#include "funcobs/rank.hpp"
#include "funcobs/structural.hpp"

namespace funcobs {

namespace {

[[noreturn]] void fail(const std::string& message) { throw std::invalid_argument(message); }

Eigen::MatrixXd parse_matrix(const Json& value, const std::string& name) {
  if (!value.is_array()) fail("field \"" + name + "\" must be a 2-D array");
  const std::size_t rows = value.size();
  std::size_t cols = 0;
  if (rows > 0) {
    if (!value[0].is_array()) fail("field \"" + name + "\" must be a 2-D array");
    cols = value[0].size();
  }
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!value[i].is_array() || value[i].size() != cols)
      fail("field \"" + name + "\" row " + std::to_string(i + 1) + " is not rectangular");
    for (std::size_t j = 0; j < cols; ++j) {
      if (!value[i][j].is_number())
        fail("field \"" + name + "\" entry (" + std::to_string(i + 1) + "," +
             std::to_string(j + 1) + ") is not a number");
      m(i, j) = value[i][j].get<double>();
    }
  }
  return m;
}

PatternMatrix parse_pattern(const Json& value, const std::string& name) {
  const Eigen::MatrixXd grid = parse_matrix(value, name);
  PatternMatrix pm(static_cast<int>(grid.rows()), static_cast<int>(grid.cols()));
  for (int i = 0; i < grid.rows(); ++i)
    for (int j = 0; j < grid.cols(); ++j) {
      const double v = grid(i, j);
      if (v != 0.0 && v != 1.0)
        fail("field \"" + name + "\" entry (" + std::to_string(i + 1) + "," +
             std::to_string(j + 1) + ") must be 0 or 1");
      pm.set(i, j, v == 1.0);
    }
  return pm;
}

Complex parse_complex(const Json& value, const std::string& name) {
  if (value.is_number()) return {value.get<double>(), 0.0};
  if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number())
    return {value[0].get<double>(), value[1].get<double>()};
  fail("field \"" + name + "\" must be a number or an [re, im] pair");
}

Eigen::MatrixXcd parse_complex_matrix(const Json& value, const std::string& name) {
  if (!value.is_array()) fail("field \"" + name + "\" must be a 2-D array");
  const std::size_t rows = value.size();
  const std::size_t cols = rows > 0 && value[0].is_array() ? value[0].size() : 0;
  Eigen::MatrixXcd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!value[i].is_array() || value[i].size() != cols)
      fail("field \"" + name + "\" row " + std::to_string(i + 1) + " is not rectangular");
    for (std::size_t j = 0; j < cols; ++j)
      m(i, j) = parse_complex(value[i][j], name);
  }
  return m;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(path + ": " + e.what());
  }
  if (!doc.is_object()) fail(path + ": top-level value must be an object");
  return doc;
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json tool_header(const ReportOptions& options, const std::string& command) {
  Json j;
  j["tool"] = "funcobs";
  j["version"] = kVersion;
  j["command"] = command;
  j["tolerance"] = options.policy.tolerance;
  j["tolerance_mode"] =
      options.policy.mode == RankPolicy::Mode::SvdAbsolute ? "svd-absolute" : "svd-relative";
  j["margin"] = options.margin;
  j["seed"] = options.seed;
  return j;
}

std::vector<int> to_zero_based(const std::vector<int>& indices, int limit,
                               const std::string& what) {
  std::vector<int> out;
  for (int v : indices) {
    if (v < 1 || v > limit)
      fail(what + " index " + std::to_string(v) + " out of range 1.." + std::to_string(limit));
    out.push_back(v - 1);
  }
  return out;
}

Json one_based(const std::vector<int>& indices) {
  Json arr = Json::array();
  for (int v : indices) arr.push_back(v + 1);
  return arr;
}

}  // namespace

PatternTriple PatternFile::triple() const {
  if (!C) fail("pattern file is missing \"C\"");
  if (!F) fail("pattern file needs \"F\" or \"XF\"");
  PatternTriple t{A, *C, *F};
  t.validate();
  return t;
}

SystemFile parse_system_json(const Json& doc) {
  SystemFile file;
  if (!doc.contains("A")) fail("system file is missing \"A\"");
  file.system.A = parse_matrix(doc.at("A"), "A");
  file.system.C = doc.contains("C") ? parse_matrix(doc.at("C"), "C")
                                    : Eigen::MatrixXd(0, file.system.A.cols());
  if (file.system.C.rows() == 0) file.system.C.resize(0, file.system.A.cols());
  if (!doc.contains("F")) fail("system file is missing \"F\"");
  file.system.F = parse_matrix(doc.at("F"), "F");
  file.system.validate();
  if (doc.contains("B")) {
    file.B = parse_matrix(doc.at("B"), "B");
    if (file.B->rows() != file.system.A.rows()) fail("\"B\" must have as many rows as A");
  }
  if (doc.contains("jordan")) {
    const Json& blocks = doc.at("jordan");
    if (!blocks.is_array()) fail("\"jordan\" must be an array of blocks");
    for (const auto& block : blocks) {
      JordanBlockData data;
      data.eigenvalue = parse_complex(block.at("lambda"), "jordan.lambda");
      data.J = parse_complex_matrix(block.at("J"), "jordan.J");
      data.T = parse_complex_matrix(block.at("T"), "jordan.T");
      file.jordan.push_back(std::move(data));
    }
  }
  return file;
}

SystemFile load_system_file(const std::string& path) {
  return parse_system_json(load_json(path));
}

PatternFile parse_pattern_json(const Json& doc) {
  PatternFile file;
  if (!doc.contains("A")) fail("pattern file is missing \"A\"");
  file.A = parse_pattern(doc.at("A"), "A");
  if (file.A.rows() != file.A.cols()) fail("\"A\" must be square");
  const int n = file.A.cols();
  if (doc.contains("C")) {
    file.C = parse_pattern(doc.at("C"), "C");
    if (file.C->cols() != n && file.C->rows() != 0) fail("\"C\" must have as many columns as A");
  }
  if (doc.contains("F") && doc.contains("XF")) fail("\"F\" and \"XF\" are mutually exclusive");
  if (doc.contains("F")) {
    file.F = parse_pattern(doc.at("F"), "F");
    if (file.F->cols() != n && file.F->rows() != 0) fail("\"F\" must have as many columns as A");
  } else if (doc.contains("XF")) {
    const Json& xf = doc.at("XF");
    if (!xf.is_array()) fail("\"XF\" must be an array of state indices");
    std::vector<int> states;
    for (const auto& v : xf) {
      if (!v.is_number_integer()) fail("\"XF\" entries must be integers");
      states.push_back(v.get<int>());
    }
    file.functionalStates = to_zero_based(states, n, "XF state");
    file.fromXF = true;
    PatternMatrix f(static_cast<int>(file.functionalStates.size()), n);
    for (std::size_t k = 0; k < file.functionalStates.size(); ++k)
      f.set(static_cast<int>(k), file.functionalStates[k]);
    file.F = f;
  }
  if (doc.contains("B")) {
    file.B = parse_pattern(doc.at("B"), "B");
    if (file.B->rows() != n) fail("\"B\" must have as many rows as A");
  }
  return file;
}

PatternFile load_pattern_file(const std::string& path) {
  return parse_pattern_json(load_json(path));
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json cmd_check_fo(const SystemFile& file, const ReportOptions& options) {
  Json report = tool_header(options, "check-fo");
  const SystemTriple& sys = file.system;
  report["n"] = sys.n();
  report["p"] = sys.p();
  report["r"] = sys.r();

  FunctionalReport analysis;
  bool diagonalizable = true;
  if (!file.jordan.empty()) {
    analysis = analyze(sys, std::span<const JordanBlockData>(file.jordan), options.policy,
                       options.margin);
    try {
      eigendecompose_diagonalizable(sys.A, options.policy);
    } catch (const NotDiagonalizableError&) {
      diagonalizable = false;
    }
  } else {
    analysis = analyze(sys, options.policy, options.margin);
    diagonalizable = analysis.modalTable.has_value();
  }

  report["functionally_observable"] = analysis.functionallyObservable;
  report["functionally_detectable"] = analysis.functionallyDetectable;
  report["rank_obs"] = analysis.rankObs;
  report["rank_obs_f"] = analysis.rankObsF;
  report["fo_method"] = method_name(analysis.foMethod);
  report["fd_method"] = method_name(analysis.fdMethod);
  report["diagonalizable"] = diagonalizable;

  if (analysis.modalTable) {
    Json table = Json::array();
    for (const auto& row : *analysis.modalTable) {
      Json entry;
      entry["eigenvalue"] = complex_to_json(row.eigenvalue);
      entry["multiplicity"] = row.multiplicity;
      entry["modal_functionally_observable"] = row.modalFunctionallyObservable;
      entry["unstable"] = row.unstable;
      table.push_back(std::move(entry));
    }
    report["modal_table"] = std::move(table);
    report["modal_source"] = file.jordan.empty() ? "computed" : "user-jordan";
  }

  // PBH table at the distinct eigenvalues of A. The equality is necessary
  // for functional observability but sufficient only when A is
  // diagonalizable, hence the necessary_only flag.
  {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(sys.A);
    std::vector<Complex> distinct;
    const double tol = default_cluster_tolerance(sys.A);
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
      const Complex lambda = solver.eigenvalues()(i);
      bool found = false;
      for (const Complex& seen : distinct)
        if (std::abs(seen - lambda) <= tol) {
          found = true;
          break;
        }
      if (!found) distinct.push_back(lambda);
    }
    std::sort(distinct.begin(), distinct.end(), [](Complex x, Complex y) {
      if (x.real() != y.real()) return x.real() > y.real();
      return x.imag() > y.imag();
    });
    Json pbh;
    pbh["necessary_only"] = !diagonalizable;
    Json entries = Json::array();
    for (const Complex& lambda : distinct) {
      Json entry;
      entry["eigenvalue"] = complex_to_json(lambda);
      entry["holds"] = pbh_functional_check(sys, lambda, options.policy);
      entries.push_back(std::move(entry));
    }
    pbh["entries"] = std::move(entries);
    report["pbh"] = std::move(pbh);
  }
  return report;
}

Json cmd_check_sfo(const PatternFile& file, const ReportOptions& options) {
  Json report = tool_header(options, "check-sfo");
  const PatternTriple triple = file.triple();
  report["n"] = triple.n();
  report["p"] = triple.p();
  report["r"] = triple.r();

  const SfoReport sfo = is_sfo(triple);
  report["sfo"] = sfo.sfo;
  report["generic_rank_obs"] = sfo.genericRankO;
  report["generic_rank_obs_f"] = sfo.genericRankOF;
  report["fast_path_used"] = sfo.fastPathUsed;
  Json table = Json::array();
  for (const auto& row : sfo.perFunctionalState) {
    Json entry;
    entry["state"] = row.stateIndex + 1;
    entry["reached_by_every_max_family"] = row.reachedByEveryMaxFamily;
    entry["output_reachable"] = row.outputReachable;
    table.push_back(std::move(entry));
  }
  report["functional_states"] = std::move(table);

  if (options.oracle) {
    // Exact cross-check: with overwhelming probability a random prime-field
    // realization attains the generic ranks, and sampled real realizations
    // follow the all-or-nothing genericity of functional observability.
    std::mt19937_64 rng(options.seed);
    const PrimeFieldMatrix af = random_field_realization(triple.A, rng);
    const PrimeFieldMatrix cf = random_field_realization(triple.C, rng);
    const PrimeFieldMatrix ff = random_field_realization(triple.F, rng);
    const int fieldRankO = prime_field_rank(field_observability_matrix(af, cf));
    const int fieldRankOF =
        prime_field_rank(field_observability_matrix(af, field_vstack(cf, ff)));
    Json oracle;
    oracle["field_rank_obs"] = fieldRankO;
    oracle["field_rank_obs_f"] = fieldRankOF;
    oracle["agrees"] = fieldRankO == sfo.genericRankO && fieldRankOF == sfo.genericRankOF;
    const int samples = 100;
    int observable = 0;
    for (int s = 0; s < samples; ++s) {
      SystemTriple realization{random_real_realization(triple.A, rng),
                               random_real_realization(triple.C, rng),
                               random_real_realization(triple.F, rng)};
      if (std::get<0>(is_functionally_observable(realization, options.policy))) ++observable;
    }
    oracle["samples"] = samples;
    oracle["functionally_observable_fraction"] = static_cast<double>(observable) / samples;
    report["oracle"] = std::move(oracle);
  }
  return report;
}

Json cmd_place(const SystemFile* systemFile, const PatternFile* patternFile,
               const PlaceOptions& place, const ReportOptions& options) {
  Json report = tool_header(options, "place");
  report["mode"] = place.mode;

  PlacementProblem problem;
  int p = 0;
  if (place.mode == "fo" || place.mode == "fd") {
    if (!systemFile) fail("mode " + place.mode + " needs a numeric system file");
    problem.kind = place.mode == "fo" ? PlacementKind::NumericFo : PlacementKind::NumericFd;
    problem.system = systemFile->system;
    p = static_cast<int>(systemFile->system.p());
  } else if (place.mode == "sfo") {
    if (!patternFile) fail("mode sfo needs a pattern file");
    problem.kind = PlacementKind::StructuralSfo;
    problem.pattern = patternFile->triple();
    p = problem.pattern->p();
  } else {
    fail("unknown placement mode \"" + place.mode + "\"");
  }
  problem.policy = options.policy;
  problem.margin = options.margin;
  if (place.candidates.empty()) {
    problem.candidates.resize(p);
    for (int i = 0; i < p; ++i) problem.candidates[i] = i;
  } else {
    problem.candidates = to_zero_based(place.candidates, p, "candidate sensor");
  }

  const PlacementResult result = greedy_place(problem);
  report["candidates"] = one_based(problem.candidates);
  report["feasible"] = result.feasible;
  report["selected"] = one_based(result.selected);
  Json trace = Json::array();
  for (const auto& step : result.gainTrace) {
    Json entry;
    entry["sensor"] = step.sensor + 1;
    entry["gain"] = step.gain;
    trace.push_back(std::move(entry));
  }
  report["gain_trace"] = std::move(trace);
  report["residual"] = result.residual;

  if (place.validateBound) {
    if (static_cast<int>(problem.candidates.size()) > 14)
      fail("--validate-bound is refused for more than 14 candidate sensors");
    const auto certificate = make_bound_certificate(problem);
    if (certificate) {
      Json cert;
      cert["optimum"] = certificate->optimumSize;
      cert["bound"] = certificate->boundValue;
      cert["greedy_size"] = static_cast<int>(result.selected.size());
      cert["within_bound"] =
          static_cast<double>(result.selected.size()) <= certificate->boundValue + 1e-12;
      report["bound_certificate"] = std::move(cert);
    } else {
      report["bound_certificate"] = nullptr;
    }
  }
  return report;
}

Json cmd_design_min(const SystemFile& file, const ReportOptions& options) {
  Json report = tool_header(options, "design-min");
  const SystemTriple& sys = file.system;
  report["n"] = sys.n();
  report["r"] = sys.r();

  SpectralData spec;
  try {
    spec = eigendecompose_diagonalizable(sys.A, options.policy);
  } catch (const NotDiagonalizableError&) {
    throw UnsupportedError(
        "design-min supports diagonalizable state matrices only; this A is defective "
        "within tolerance");
  }
  Json groups = Json::array();
  for (const auto& g : spec.groups) {
    Json entry;
    entry["eigenvalue"] = complex_to_json(g.eigenvalue);
    entry["multiplicity"] = g.multiplicity;
    groups.push_back(std::move(entry));
  }
  report["eigenvalue_groups"] = std::move(groups);
  report["condition_T"] = spec.conditionT;

  const int pStar = min_sensor_count_diagonalizable(sys.A, sys.F, options.policy);
  const Eigen::MatrixXd c = construct_min_C(sys.A, sys.F, options.policy);
  report["p_star"] = pStar;
  report["C"] = matrix_to_json(c);
  SystemTriple designed{sys.A, c, sys.F};
  auto [fo, rankObs, rankObsF] = is_functionally_observable(designed, options.policy);
  report["fo_verified"] = fo;
  report["rank_obs"] = rankObs;
  report["rank_obs_f"] = rankObsF;
  return report;
}

Json cmd_check_target_ctrl(const PatternFile& file, const std::vector<int>& targets1Based,
                           const ReportOptions& options) {
  Json report = tool_header(options, "check-target-ctrl");
  if (!file.B) fail("check-target-ctrl needs a pattern file with \"B\"");
  const int n = file.A.rows();
  const std::vector<int> targets = to_zero_based(targets1Based, n, "target");
  report["n"] = n;
  report["targets"] = one_based(targets);
  if (static_cast<int>(targets.size()) == n)
    fail("all states selected: use a structural controllability check instead");
  if (static_cast<int>(targets.size()) == n - 1) {
    report["verdict"] = target_controllable_nminus1(file.A, *file.B, targets);
  } else {
    // Below n-1 targets only a generic-rank bracket is decidable.
    const TargetControllabilityBracket bracket =
        target_controllability_bracket(file.A, *file.B, targets);
    Json j;
    j["generic_rank_ctrb"] = bracket.grankCtrb;
    j["target_rank_lo"] = bracket.lo;
    j["target_rank_hi"] = bracket.hi;
    report["bracket"] = std::move(j);
    if (bracket.verdict)
      report["verdict"] = *bracket.verdict;
    else
      report["verdict"] = nullptr;
  }
  return report;
}

namespace {

void render_value(std::ostringstream& out, const std::string& key, const Json& value,
                  int indent) {
  const std::string pad(indent, ' ');
  if (value.is_object()) {
    out << pad << key << ":\n";
    for (const auto& [k, v] : value.items()) render_value(out, k, v, indent + 2);
  } else if (value.is_array() && !value.empty() && value[0].is_object()) {
    out << pad << key << ":\n";
    for (const auto& item : value) {
      out << pad << "  -";
      for (const auto& [k, v] : item.items()) out << " " << k << "=" << v.dump();
      out << "\n";
    }
  } else {
    out << pad << key << ": " << value.dump() << "\n";
  }
}

}  // namespace

std::string render_text(const Json& report) {
  std::ostringstream out;
  for (const auto& [key, value] : report.items()) render_value(out, key, value, 0);
  return out.str();
}

}  // namespace funcobs
