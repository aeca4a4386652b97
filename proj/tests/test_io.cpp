#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "lsnet/io.hpp"
#include "lsnet/simulate.hpp"
#include "oracles.hpp"

using namespace lsnet;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("lsnet_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int counter() {
    static int c = 0;
    return c++;
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("edgelist: indices build a path graph") {
  TempDir dir;
  const std::string path = dir.file("edges.csv");
  ioutil::write_text(path, "0,1\n1,2\n");
  const Network net = read_network(path, NetworkFormat::edgelist);
  REQUIRE(net.n() == 3);
  REQUIRE(net.adjacency(0, 1) == 1.0);
  REQUIRE(net.adjacency(1, 2) == 1.0);
  REQUIRE(net.adjacency(0, 2) == 0.0);
  REQUIRE(net.adjacency(1, 0) == 1.0);
}

TEST_CASE("edgelist: self-loops are dropped with a warning count") {
  TempDir dir;
  const std::string path = dir.file("edges.csv");
  ioutil::write_text(path, "0,1\n2,2\n");
  ReadStats stats;
  const Network net = read_network(path, NetworkFormat::edgelist, &stats);
  REQUIRE(stats.self_loops_dropped == 1);
  REQUIRE(net.n() == 3);
  REQUIRE(net.adjacency(2, 2) == 0.0);
}

TEST_CASE("edgelist: labels map in first-seen order and CRLF is accepted") {
  TempDir dir;
  const std::string path = dir.file("edges.csv");
  ioutil::write_text(path, "hh12,hh3\r\nhh3,hh40\r\n");
  const Network net = read_network(path, NetworkFormat::edgelist);
  REQUIRE(net.node_ids == std::vector<std::string>{"hh12", "hh3", "hh40"});
  REQUIRE(net.adjacency(0, 1) == 1.0);
  REQUIRE(net.adjacency(1, 2) == 1.0);
}

TEST_CASE("edgelist parse errors carry line numbers") {
  TempDir dir;
  const std::string path = dir.file("edges.csv");
  ioutil::write_text(path, "0,1\n0,1,2\n");
  try {
    read_network(path, NetworkFormat::edgelist);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    REQUIRE(std::string(e.what()).find(":2") != std::string::npos);
  }
}

TEST_CASE("adjacency round-trip is exact and rejects bad entries") {
  TempDir dir;
  const SimData data = [] {
    SimConfig cfg;
    cfg.n = 20;
    cfg.q = 3;
    cfg.seed = 1;
    return generate(cfg);
  }();
  const std::string path = dir.file("adj.csv");
  write_adjacency(data.network, path);
  const Network back = read_network(path, NetworkFormat::adjacency);
  REQUIRE((back.adjacency - data.network.adjacency).cwiseAbs().maxCoeff() ==
          0.0);

  const std::string bad = dir.file("bad.csv");
  ioutil::write_text(bad, "0,1\n1,2\n");
  REQUIRE_THROWS_AS(read_network(bad, NetworkFormat::adjacency),
                    NonBinaryEntry);
}

TEST_CASE("covariates: header preserved, errors located, round-trip exact") {
  TempDir dir;
  const std::string path = dir.file("cov.csv");
  ioutil::write_text(path, "rooms,beds\n1,0\n0,1\n");
  const CovariateMatrix cov = read_covariates(path);
  REQUIRE(cov.names == std::vector<std::string>{"rooms", "beds"});
  REQUIRE(cov.values(0, 0) == 1.0);
  REQUIRE(cov.values(1, 1) == 1.0);

  const std::string round = dir.file("cov2.csv");
  write_covariates(cov, round);
  const CovariateMatrix back = read_covariates(round);
  REQUIRE(back.names == cov.names);
  REQUIRE((back.values - cov.values).cwiseAbs().maxCoeff() == 0.0);

  const std::string bad = dir.file("bad.csv");
  ioutil::write_text(bad, "a,b\n1,2\n");
  try {
    read_covariates(bad);
    FAIL("expected NonBinaryEntry");
  } catch (const NonBinaryEntry& e) {
    const std::string msg = e.what();
    REQUIRE(msg.find(":2") != std::string::npos);
    REQUIRE(msg.find("'b'") != std::string::npos);
  }

  const std::string headerless = dir.file("nohdr.csv");
  ioutil::write_text(headerless, "1,0\n0,1\n");
  REQUIRE_THROWS_AS(read_covariates(headerless), HeaderMissing);
}

TEST_CASE("node_id column aligns covariate rows against labeled networks") {
  TempDir dir;
  const std::string cov_path = dir.file("cov.csv");
  ioutil::write_text(cov_path, "node_id,x\nb,1\na,0\n");
  std::vector<std::string> row_ids;
  const CovariateMatrix cov = read_covariates(cov_path, &row_ids);
  REQUIRE(row_ids == std::vector<std::string>{"b", "a"});
  const CovariateMatrix aligned = align_rows(cov, row_ids, {"a", "b"});
  REQUIRE(aligned.values(0, 0) == 0.0);
  REQUIRE(aligned.values(1, 0) == 1.0);
  REQUIRE_THROWS_AS(align_rows(cov, row_ids, {"a", "z"}), DimensionMismatch);
}

TEST_CASE("snapshot round-trip is bit-exact") {
  TempDir dir;
  SimConfig cfg;
  cfg.n = 15;
  cfg.q = 4;
  cfg.seed = 2;
  const SimData data = generate(cfg);

  ModelSnapshot snap;
  snap.stage = SnapshotStage::refit;
  snap.seed = 987654321;
  snap.data_checksum = checksum_pair(data.network, data.covariates);
  snap.hyper.lambda_grid = {0.01, 0.1, 1.0 / 3.0};
  snap.hyper.delta_grid = {0.0, 0.25};
  snap.state = oracle::random_state(15, 2, 4, 5);
  ActiveSet active;
  active.indices = {0, 2};
  active.threshold_used = 1e-6;
  snap.active = active;

  const std::string path = dir.file("snap.json");
  write_snapshot(snap, path);
  const ModelSnapshot back = read_snapshot(path);
  REQUIRE(back.stage == SnapshotStage::refit);
  REQUIRE(back.seed == snap.seed);
  REQUIRE(back.data_checksum == snap.data_checksum);
  REQUIRE(back.hyper.lambda_grid == snap.hyper.lambda_grid);
  REQUIRE((back.state.Z - snap.state.Z).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE((back.state.alpha - snap.state.alpha).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE((back.state.beta - snap.state.beta).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE((back.state.gamma - snap.state.gamma).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(back.active->indices == active.indices);
  REQUIRE(verify_checksum(back, data.network, data.covariates));

  // tampered data: checksum verification reports the mismatch, load works
  SimConfig other = cfg;
  other.seed = 3;
  const SimData tampered = generate(other);
  REQUIRE_FALSE(verify_checksum(back, tampered.network, tampered.covariates));
}

TEST_CASE("unknown snapshot versions are rejected") {
  TempDir dir;
  const std::string path = dir.file("future.json");
  ioutil::write_text(path, "{\"format_version\": 99}\n");
  REQUIRE_THROWS_AS(read_snapshot(path), VersionMismatch);
}

TEST_CASE("results export: header-only, counting, determinism") {
  TempDir dir;
  const std::string path = dir.file("results.csv");
  export_results({}, path);
  REQUIRE(slurp(path) == std::string(kResultHeader) + "\n");

  std::vector<ResultRow> rows;
  for (int rep = 0; rep < 2; ++rep)
    for (const char* m : {"network_only", "joint", "lasso", "melasso"}) {
      ResultRow r;
      r.replicate = rep;
      r.method = m;
      r.regime = "less_sparse";
      r.auc_network = 0.5 + 0.01 * rep;
      rows.push_back(r);
    }
  export_results(rows, path);
  const std::string first = slurp(path);
  REQUIRE(std::count(first.begin(), first.end(), '\n') == 9);  // header + 8

  std::reverse(rows.begin(), rows.end());
  const std::string again = dir.file("again.csv");
  export_results(rows, again);
  REQUIRE(slurp(again) == first);
}

TEST_CASE("manifest round-trip and duplicate detection") {
  TempDir dir;
  DatasetManifest m;
  m.entries = {{"v1", "v1_adj.csv", "v1_cov.csv"},
               {"v2", "v2_adj.csv", "v2_cov.csv"}};
  const std::string path = dir.file("manifest.json");
  write_manifest(m, path);
  const DatasetManifest back = read_manifest(path);
  REQUIRE(back.entries.size() == 2);
  REQUIRE(back.entries[1].id == "v2");
  REQUIRE(back.entries[1].covariates_path == "v2_cov.csv");

  m.entries.push_back({"v1", "x.csv", "y.csv"});
  const std::string dup = dir.file("dup.json");
  write_manifest(m, dup);
  REQUIRE_THROWS_AS(read_manifest(dup), ParseError);
}

TEST_CASE("truth files round-trip") {
  TempDir dir;
  SimConfig cfg;
  cfg.n = 12;
  cfg.q = 3;
  cfg.n_noise = 1;
  cfg.seed = 77;
  const SimData data = generate(cfg);
  const std::string path = dir.file("truth.json");
  write_truth(data.truth, path);
  const SimTruth back = read_truth(path);
  REQUIRE((back.Z_true - data.truth.Z_true).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE((back.beta_true - data.truth.beta_true).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(back.active_true.indices == data.truth.active_true.indices);
  REQUIRE(back.cluster_assignment == data.truth.cluster_assignment);
}

TEST_CASE("missing files raise IoError naming the path") {
  try {
    read_network("/nonexistent/net.csv", NetworkFormat::adjacency);
    FAIL("expected IoError");
  } catch (const IoError& e) {
    REQUIRE(std::string(e.what()).find("/nonexistent/net.csv") !=
            std::string::npos);
  }
}
