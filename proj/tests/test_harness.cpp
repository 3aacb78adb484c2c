#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ia/harness.hpp"

using namespace ia;

namespace {

ExperimentSpec tiny_spec() {
  ExperimentSpec spec;
  spec.system.K = 3;
  spec.system.M_t = 8;
  spec.system.M_r = 4;
  spec.system.d = 1;
  spec.system.power_grid_db = {0.0, 40.0};
  spec.algorithms = {Algo::rcrm, Algo::leakage_min};
  spec.iteration_budgets[Algo::rcrm] = 2;
  spec.iteration_budgets[Algo::leakage_min] = 200;
  spec.trials = 3;
  spec.master_seed = 11;
  return spec;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("serial reference and OpenMP trial loop produce identical rows") {
  ExperimentSpec serial = tiny_spec();
  serial.workers = 1;
  ExperimentSpec parallel = tiny_spec();
  parallel.workers = 0;
  const std::string a = results_to_csv(run_experiment(serial));
  const std::string b = results_to_csv(run_experiment(parallel));
  CHECK(a == b);
}

TEST_CASE("repeated runs are byte-identical") {
  const ExperimentSpec spec = tiny_spec();
  const std::string a = results_to_csv(run_experiment(spec));
  const std::string b = results_to_csv(run_experiment(spec));
  CHECK(a == b);
}

TEST_CASE("interference-free channels give full dimensions at every power") {
  ExperimentSpec spec = tiny_spec();
  spec.system.M_t = 4;
  spec.algorithms = {Algo::rcrm};
  spec.trials = 1;
  std::mt19937_64 rng(3);
  SystemConfig gen_cfg = spec.system;
  ChannelSet ch = gen_iid_channels(gen_cfg, rng);
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < 3; ++l) {
      if (l != k) ch.at(k, l).zeros();
    }
  }
  const auto rows = run_experiment_on_channels(spec, {ch});
  REQUIRE(rows.size() == 2);
  for (const ResultRow& r : rows) {
    CHECK(r.mean_user_dims == doctest::Approx(1.0));
    CHECK(r.failures == 0);
  }
}

TEST_CASE("CSV schema and emit/parse round trip") {
  const auto rows = run_experiment(tiny_spec());
  const std::string csv = results_to_csv(rows);
  std::istringstream is(csv);
  std::string header;
  std::getline(is, header);
  CHECK(header == "algorithm,P_db,mean_sum_rate,std_sum_rate,mean_user_dims,trials,failures");

  std::size_t n = 0;
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string algo, p, mean, stdd, dims, trials, failures;
    std::getline(ls, algo, ',');
    std::getline(ls, p, ',');
    std::getline(ls, mean, ',');
    std::getline(ls, stdd, ',');
    std::getline(ls, dims, ',');
    std::getline(ls, trials, ',');
    std::getline(ls, failures, ',');
    CHECK(algo == rows[n].algorithm);
    CHECK(std::stod(p) == doctest::Approx(rows[n].P_db).epsilon(1e-9));
    CHECK(std::stod(mean) == doctest::Approx(rows[n].mean_sum_rate).epsilon(1e-9));
    CHECK(std::stod(dims) == doctest::Approx(rows[n].mean_user_dims).epsilon(1e-9));
    CHECK(std::stoi(trials) == rows[n].trials);
    CHECK(std::stoi(failures) == rows[n].failures);
    ++n;
  }
  CHECK(n == rows.size());

  const nlohmann::json j = results_to_json_doc(rows);
  CHECK(j.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(j[i].at("algorithm").get<std::string>() == rows[i].algorithm);
    CHECK(j[i].at("mean_sum_rate").get<double>() ==
          doctest::Approx(rows[i].mean_sum_rate).epsilon(1e-9));
  }

  CHECK_THROWS_AS(results_to_csv({}), contract_error);
  CHECK_THROWS_AS(results_to_json_doc({}), contract_error);
}

TEST_CASE("config file loading") {
  const std::string path = "test_config_tmp.ini";
  {
    std::ofstream out(path);
    out << "schema = 1\n"
        << "[system]\n"
        << "K = 3\n"
        << "M_t = 8\n"
        << "M_r = 4\n"
        << "d = 1\n"
        << "power_db = 0:20:40\n"
        << "eps = 0.1\n"
        << "# comment line\n"
        << "[experiment]\n"
        << "algorithms = rcrm, leakage_min\n"
        << "trials = 4\n"
        << "rcrm_rounds = 3\n"
        << "seed = 99\n"
        << "format = csv\n";
  }
  const ExperimentSpec spec = load_experiment_file(path);
  CHECK(spec.system.K == 3);
  CHECK(spec.system.power_grid_db == std::vector<double>{0.0, 20.0, 40.0});
  CHECK(spec.algorithms.size() == 2);
  CHECK(spec.trials == 4);
  CHECK(spec.iteration_budgets.at(Algo::rcrm) == 3);
  CHECK(spec.master_seed == 99);
  std::remove(path.c_str());
}

TEST_CASE("config file rejections") {
  const std::string path = "test_config_bad_tmp.ini";
  {
    std::ofstream out(path);
    out << "schema = 1\n[system]\nK = 3\nbogus_key = 1\n";
  }
  CHECK_THROWS_AS(load_experiment_file(path), config_error);
  {
    std::ofstream out(path);
    out << "[system]\nK = 3\n";  // missing schema
  }
  CHECK_THROWS_AS(load_experiment_file(path), config_error);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_experiment_file("does_not_exist.ini"), config_error);
}

TEST_CASE("channel dump and replay reproduce the run") {
  ExperimentSpec spec = tiny_spec();
  spec.trials = 2;
  spec.dump_channels_path = "test_channels_tmp.json";
  const auto rows = run_experiment(spec);

  ExperimentSpec replay = tiny_spec();
  replay.trials = 2;
  replay.load_channels_path = "test_channels_tmp.json";
  const auto rows2 = run_experiment(replay);
  CHECK(results_to_csv(rows) == results_to_csv(rows2));
  std::remove("test_channels_tmp.json");
}

TEST_CASE("cli: validate, run, and error paths") {
  const std::string cfg_path = "test_cli_cfg_tmp.ini";
  {
    std::ofstream out(cfg_path);
    out << "schema = 1\n[system]\nK = 3\nM_t = 8\nM_r = 4\nd = 3\npower_db = 0,40\n"
        << "[experiment]\nalgorithms = leakage_min\ntrials = 2\nleakage_min_iters = 50\n"
        << "seed = 5\nout = test_cli_out_tmp.csv\n";
  }
  {
    const char* argv[] = {"ia_sim", "validate", "--config", cfg_path.c_str()};
    CHECK(cli_main(4, argv) == 0);
  }
  {
    const char* argv[] = {"ia_sim", "run", "--config", cfg_path.c_str()};
    CHECK(cli_main(4, argv) == 0);
    const std::string csv = slurp("test_cli_out_tmp.csv");
    CHECK(csv.find("algorithm,P_db,") == 0);
  }
  {
    // determinism across repeated CLI invocations
    const char* argv[] = {"ia_sim", "run", "--config", cfg_path.c_str(),
                          "--out", "test_cli_out2_tmp.csv"};
    CHECK(cli_main(6, argv) == 0);
    CHECK(slurp("test_cli_out_tmp.csv") == slurp("test_cli_out2_tmp.csv"));
  }
  {
    const char* argv[] = {"ia_sim", "run", "--config", "missing_file.ini"};
    CHECK(cli_main(4, argv) == 1);
  }
  {
    const char* argv[] = {"ia_sim", "run", "--config", cfg_path.c_str(), "--bogus-flag"};
    CHECK(cli_main(5, argv) == 1);
  }
  std::remove(cfg_path.c_str());
  std::remove("test_cli_out_tmp.csv");
  std::remove("test_cli_out2_tmp.csv");
}

TEST_CASE("spec validation failures") {
  ExperimentSpec spec = tiny_spec();
  spec.trials = 0;
  CHECK_THROWS_AS(spec.validate(), config_error);
  spec = tiny_spec();
  spec.algorithms = {Algo::random_bf_zf};  // not a cellular system
  CHECK_THROWS_AS(spec.validate(), config_error);
  spec = tiny_spec();
  spec.format = "xml";
  CHECK_THROWS_AS(spec.validate(), config_error);
}
