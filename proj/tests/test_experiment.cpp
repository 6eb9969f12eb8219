#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "spinchain/experiment.hpp"
#include "spinchain/svg.hpp"

using namespace spinchain;

namespace {

Table small_table(int rows, int curves) {
  Table t;
  t.name = "test";
  t.t = Eigen::VectorXd::LinSpaced(rows, 0.0, 1.0);
  for (int c = 0; c < curves; ++c) {
    Eigen::VectorXd v(rows);
    for (int i = 0; i < rows; ++i) v[i] = std::sin(0.1 + c + 0.7919 * i) / 3.0;
    t.columns.emplace_back("curve" + std::to_string(c), v);
  }
  return t;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_occurrences(const std::string& text, const std::string& needle) {
  int n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++n;
  return n;
}

// Minimal well-formedness check: angle-bracket tags balance and nest.
bool xml_well_formed(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  if (text.rfind("<?xml", 0) == 0) i = text.find("?>") + 2;
  while (i < text.size()) {
    const std::size_t open = text.find('<', i);
    if (open == std::string::npos) break;
    const std::size_t close = text.find('>', open);
    if (close == std::string::npos) return false;
    std::string tag = text.substr(open + 1, close - open - 1);
    i = close + 1;
    if (tag.empty()) return false;
    if (tag[0] == '!' || tag[0] == '?') continue;
    const bool self_closing = tag.back() == '/';
    if (self_closing) tag.pop_back();
    std::string name = tag.substr(0, tag.find_first_of(" \t\n"));
    if (name.empty()) return false;
    if (name[0] == '/') {
      if (stack.empty() || stack.back() != name.substr(1)) return false;
      stack.pop_back();
    } else if (!self_closing) {
      stack.push_back(name);
    }
  }
  return stack.empty();
}

}  // namespace

TEST_CASE("emit_csv writes header plus one row per sample and round-trips bit-exactly") {
  const Table t = small_table(3, 1);
  const std::string path = "emit_csv_test.csv";
  emit_csv(t, path);

  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++lines;
  CHECK(lines == 4);  // header + 3 rows
  in.close();

  const Table back = parse_csv(path);
  CHECK(back.columns.size() == 1);
  CHECK(back.columns[0].first == "curve0");
  CHECK((back.t - t.t).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.columns[0].second - t.columns[0].second).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());

  Table empty;
  empty.name = "empty";
  empty.columns.emplace_back("x", Eigen::VectorXd());
  CHECK_THROWS_AS(emit_csv(empty, "should_not_exist.csv"), std::invalid_argument);
  CHECK(!std::ifstream("should_not_exist.csv").good());
}

TEST_CASE("emit_svg: one polyline per curve, legend entries, well-formed XML") {
  const std::string path = "emit_svg_test.svg";

  Table one = small_table(5, 1);
  one.columns[0].second.setConstant(0.5);
  emit_svg(one, path);
  std::string text = slurp(path);
  CHECK(count_occurrences(text, "<polyline") == 1);
  CHECK(xml_well_formed(text));

  const Table two = small_table(5, 2);
  emit_svg(two, path, {640, 400, "two curves", "t", "value"});
  text = slurp(path);
  CHECK(count_occurrences(text, "<polyline") == 2);
  CHECK(count_occurrences(text, "class=\"legend\"") == 2);
  CHECK(xml_well_formed(text));
  std::remove(path.c_str());

  Table none;
  none.t = Eigen::VectorXd::LinSpaced(3, 0, 1);
  CHECK_THROWS_AS(emit_svg(none, path), std::invalid_argument);
}

TEST_CASE("config parsing, preset merge, and round-trip") {
  // preset reference with overrides
  const ExperimentConfig cfg =
      parse_config_text(R"({"preset": "xy-entanglement", "n_sites": 4,
                            "noise": {"realizations": 3}})");
  CHECK(cfg.name == "xy-entanglement");
  CHECK(cfg.noise.realizations == 3);   // overridden
  CHECK(cfg.noise.sigma == 2.0);        // inherited
  CHECK(cfg.curves.size() == 5);
  CHECK(cfg.curves[1].n_y.has_value());

  // serialize -> parse -> serialize is a fixed point
  const std::string text = config_to_json_text(cfg);
  const ExperimentConfig cfg2 = parse_config_text(text);
  CHECK(config_to_json_text(cfg2) == text);

  CHECK_THROWS_AS(parse_config_text("{nonsense"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"preset": "no-such-preset"})"), ConfigError);
}

TEST_CASE("validate_config rejects malformed setups") {
  auto base = []() {
    return parse_config_text(R"({"preset": "xy-entanglement"})");
  };

  ExperimentConfig c = base();
  validate_config(c);

  c = base();
  c.initial_state = "000";
  CHECK_THROWS_AS(validate_config(c), ConfigError);

  c = base();
  c.observables[0].pair = {1, 1};
  CHECK_THROWS_AS(validate_config(c), ConfigError);

  c = base();
  c.curves[0].label = c.curves[1].label;
  CHECK_THROWS_AS(validate_config(c), ConfigError);

  c = base();
  c.time.dt = 0.0;
  CHECK_THROWS_AS(validate_config(c), ConfigError);

  // exact path capped at max_dense_sites
  c = base();
  c.n_sites = 13;
  c.initial_state = std::string(13, '0');
  c.observables[0].pair = {1, 13};
  c.observables[1].pair = {2, 3};
  CHECK_THROWS_AS(validate_config(c), ConstraintError);

  // jw constraint: 2 l1 + l2 + l3 = 0
  c = parse_config_text(R"({"preset": "jw-special"})");
  validate_config(c);
  c.couplings.lambda = {2.0, 1.0, 0.0};
  CHECK_THROWS_AS(validate_config(c), ConstraintError);

  // jw requires the fully polarized initial state
  c = parse_config_text(R"({"preset": "jw-special"})");
  c.initial_state = "1011";
  CHECK_THROWS_AS(validate_config(c), ConstraintError);

  // drive closed forms need n_z = n_y - n_x
  c = parse_config_text(R"({"preset": "static-field-drive"})");
  validate_config(c);
  c.control.n_z = 3;
  CHECK_THROWS_AS(validate_config(c), ConstraintError);

  // unknown control variant
  c = base();
  c.control.variant = "pulsed";
  CHECK_THROWS_AS(validate_config(c), ConfigError);
}

TEST_CASE("run_experiment produces matching dense and jw curves and is deterministic") {
  ExperimentConfig cfg = parse_config_text(R"({
    "name": "mini-jw",
    "n_sites": 4,
    "couplings": {"type": "uniform", "lambda": [2.0, 1.0, -5.0]},
    "noise": {"enabled": false, "realizations": 1, "seed": 5},
    "initial_state": "1111",
    "observables": [{"type": "concurrence", "pair": [1, 4]},
                    {"type": "rescaled_concurrence", "pair": [1, 4]},
                    {"type": "purity", "pair": [1, 4]}],
    "time": {"t_max": 1.0, "dt": 0.1},
    "curves": [
      {"label": "dense", "kind": "effective", "variant": "hbar2"},
      {"label": "jw", "kind": "jw", "variant": "hbar2"}
    ]
  })");
  const RunResult r = run_experiment(cfg, 1);
  REQUIRE(r.tables.size() == 3);
  REQUIRE(r.tables[0].columns.size() == 2);
  const auto& dense = r.tables[0].columns[0].second;
  const auto& jw = r.tables[0].columns[1].second;
  CHECK((dense - jw).cwiseAbs().maxCoeff() <= 1e-6);
  // rescaled = (N - 1) * concurrence
  CHECK((r.tables[1].columns[1].second - 3.0 * jw).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("noisy runs are bit-stable across repeats and jobs counts") {
  const std::string text = R"({
    "name": "mini-noise",
    "n_sites": 3,
    "couplings": {"type": "uniform", "lambda": [1.0, 1.0, 0.0]},
    "control": {"variant": "standard", "n_x": 1, "n_y": 2, "t_c": 0.01},
    "noise": {"enabled": true, "sigma": 2.0, "tau": 0.5, "realizations": 4, "seed": 11},
    "initial_state": "000",
    "observables": [{"type": "concurrence", "pair": [1, 3]},
                    {"type": "fidelity", "target": "100"}],
    "time": {"t_max": 0.4, "dt": 0.1},
    "curves": [
      {"label": "exact", "kind": "exact", "control": "on", "noise": true},
      {"label": "effective", "kind": "effective", "variant": "hbar2"}
    ]
  })";
  const ExperimentConfig cfg = parse_config_text(text);
  const RunResult a = run_experiment(cfg, 1);
  const RunResult b = run_experiment(cfg, 2);
  const RunResult c = run_experiment(cfg, 1);
  REQUIRE(a.tables.size() == b.tables.size());
  for (std::size_t i = 0; i < a.tables.size(); ++i)
    for (std::size_t k = 0; k < a.tables[i].columns.size(); ++k) {
      CHECK((a.tables[i].columns[k].second - b.tables[i].columns[k].second)
                .cwiseAbs()
                .maxCoeff() == 0.0);
      CHECK((a.tables[i].columns[k].second - c.tables[i].columns[k].second)
                .cwiseAbs()
                .maxCoeff() == 0.0);
    }

  // different seed -> different noisy curve
  ExperimentConfig cfg2 = parse_config_text(text);
  cfg2.noise.seed = 12;
  const RunResult d = run_experiment(cfg2, 1);
  CHECK((a.tables[0].columns[0].second - d.tables[0].columns[0].second)
            .cwiseAbs()
            .maxCoeff() > 0.0);
}

TEST_CASE("write_outputs emits one CSV per observable plus metadata") {
  ExperimentConfig cfg = parse_config_text(R"({
    "name": "writer",
    "n_sites": 2,
    "couplings": {"type": "uniform", "lambda": [1.0, 0.0, 0.0]},
    "noise": {"enabled": false, "realizations": 1, "seed": 1},
    "initial_state": "10",
    "observables": [{"type": "fidelity", "target": "01"}],
    "time": {"t_max": 0.5, "dt": 0.25},
    "curves": [{"label": "bare", "kind": "exact", "control": "off", "noise": false}]
  })");
  const RunResult r = run_experiment(cfg, 1);
  const auto written = write_outputs(r, "writer_out", cfg.name, true);
  REQUIRE(written.size() == 3);  // csv + svg + meta
  for (const auto& path : written) CHECK(std::ifstream(path).good());
  const std::string meta = slurp("writer_out/writer_meta.json");
  CHECK(meta.find("\"seed\"") != std::string::npos);
  CHECK(meta.find("max_norm_drift") != std::string::npos);
  CHECK(meta.find("wall_ms") != std::string::npos);
  for (const auto& path : written) std::remove(path.c_str());
}

TEST_CASE("preset table is populated and every preset validates") {
  const auto names = preset_names();
  CHECK(names.size() >= 10);
  for (const auto& name : names) {
    const ExperimentConfig cfg = parse_config_text("{\"preset\": \"" + name + "\"}");
    CHECK_NOTHROW(validate_config(cfg));
    CHECK(cfg.name == name);
  }
}
