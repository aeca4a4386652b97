#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lsnet/errors.hpp"
#include "lsnet/objective.hpp"
#include "lsnet/simulate.hpp"
#include "lsnet/types.hpp"

namespace lsnet {

enum class NetworkFormat { edgelist, adjacency };

namespace ioutil {

inline std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(strip(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

// shortest representation that round-trips, for CSV output
inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

// lossless hex-float encoding, for snapshots
inline std::string double_to_hex(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::hex);
  return std::string(buf, res.ptr);
}

inline double hex_to_double(const std::string& s) {
  double x = 0.0;
  const char* begin = s.c_str();
  bool negative = false;
  if (*begin == '-') {
    negative = true;
    ++begin;
  }
  auto res = std::from_chars(begin, s.c_str() + s.size(), x,
                             std::chars_format::hex);
  if (res.ec != std::errc())
    throw ParseError("bad hex float: " + s);
  return negative ? -x : x;
}

inline std::optional<long long> parse_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  long long value = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    return std::nullopt;
  return value;
}

inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(double_to_hex(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
  const int rows = static_cast<int>(j.size());
  if (rows == 0) return Matrix(0, 0);
  const int cols = static_cast<int>(j.at(0).size());
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c)
      m(i, c) = hex_to_double(j.at(i).at(c).get<std::string>());
  return m;
}

inline nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(double_to_hex(v(i)));
  return out;
}

inline Vector vector_from_json(const nlohmann::json& j) {
  Vector v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i)
    v(i) = hex_to_double(j.at(i).get<std::string>());
  return v;
}

inline void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace ioutil

struct ReadStats {
  int self_loops_dropped = 0;
};

// Edge lists are one "i,j" pair per line; blank lines and lines starting
// with '#' are skipped. If every token is a non-negative integer the
// tokens are taken as 0-based node indices (n = max index + 1); otherwise
// they are labels mapped to indices in first-seen order and retained in
// node_ids. Duplicate edges collapse, self-loops are dropped and counted.
inline Network read_edgelist(const std::string& path,
                             ReadStats* stats = nullptr) {
  const std::vector<std::string> lines = ioutil::read_lines(path);
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<int> line_numbers;
  bool all_integer = true;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string stripped = ioutil::strip(lines[ln]);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto fields = ioutil::split_csv(stripped);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
      throw ParseError(path + ":" + std::to_string(ln + 1) +
                       ": expected two comma-separated node tokens");
    const auto a = ioutil::parse_int(fields[0]);
    const auto b = ioutil::parse_int(fields[1]);
    if (!a || !b || *a < 0 || *b < 0) all_integer = false;
    pairs.emplace_back(fields[0], fields[1]);
    line_numbers.push_back(static_cast<int>(ln + 1));
  }
  if (pairs.empty()) throw ParseError(path + ": no edges found");

  Network net;
  std::map<std::string, int> label_index;
  std::vector<std::pair<int, int>> edges;
  int n = 0;
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    int i, j;
    if (all_integer) {
      i = static_cast<int>(*ioutil::parse_int(pairs[e].first));
      j = static_cast<int>(*ioutil::parse_int(pairs[e].second));
      n = std::max(n, std::max(i, j) + 1);
    } else {
      for (const std::string* tok : {&pairs[e].first, &pairs[e].second}) {
        if (label_index.find(*tok) == label_index.end()) {
          label_index[*tok] = static_cast<int>(net.node_ids.size());
          net.node_ids.push_back(*tok);
        }
      }
      i = label_index[pairs[e].first];
      j = label_index[pairs[e].second];
      n = static_cast<int>(net.node_ids.size());
    }
    edges.emplace_back(i, j);
  }

  net.adjacency = Matrix::Zero(n, n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [i, j] = edges[e];
    if (i == j) {
      if (stats != nullptr) stats->self_loops_dropped += 1;
      continue;
    }
    net.adjacency(i, j) = 1.0;
    net.adjacency(j, i) = 1.0;
  }
  return net;
}

inline Network read_adjacency(const std::string& path) {
  const std::vector<std::string> lines = ioutil::read_lines(path);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    if (ioutil::strip(lines[ln]).empty()) continue;
    rows.push_back(ioutil::split_csv(lines[ln]));
  }
  if (rows.empty()) throw ParseError(path + ": empty adjacency file");
  const int n = static_cast<int>(rows.size());
  Network net;
  net.adjacency = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n)
      throw ParseError(path + ":" + std::to_string(i + 1) + ": expected " +
                       std::to_string(n) + " columns, got " +
                       std::to_string(rows[i].size()));
    for (int j = 0; j < n; ++j) {
      if (rows[i][j] == "0")
        net.adjacency(i, j) = 0.0;
      else if (rows[i][j] == "1")
        net.adjacency(i, j) = 1.0;
      else
        throw NonBinaryEntry(path + ":" + std::to_string(i + 1) + ": entry '" +
                             rows[i][j] + "' in column " + std::to_string(j) +
                             " is not 0/1");
    }
  }
  return net;
}

inline Network read_network(const std::string& path, NetworkFormat format,
                            ReadStats* stats = nullptr) {
  return format == NetworkFormat::edgelist ? read_edgelist(path, stats)
                                           : read_adjacency(path);
}

inline void write_adjacency(const Network& net, const std::string& path) {
  std::ostringstream out;
  for (int i = 0; i < net.n(); ++i) {
    for (int j = 0; j < net.n(); ++j) {
      if (j > 0) out << ',';
      out << (net.adjacency(i, j) != 0.0 ? '1' : '0');
    }
    out << '\n';
  }
  ioutil::write_text(path, out.str());
}

inline void write_edgelist(const Network& net, const std::string& path) {
  std::ostringstream out;
  for (int i = 0; i < net.n(); ++i)
    for (int j = i + 1; j < net.n(); ++j)
      if (net.adjacency(i, j) != 0.0) {
        if (net.node_ids.empty())
          out << i << ',' << j << '\n';
        else
          out << net.node_ids[i] << ',' << net.node_ids[j] << '\n';
      }
  ioutil::write_text(path, out.str());
}

// Header row of unique names, then one row of 0/1 per node. A leading
// "node_id" column, when present, carries row labels out through row_ids
// so callers can join against a labeled network.
inline CovariateMatrix read_covariates(
    const std::string& path, std::vector<std::string>* row_ids = nullptr) {
  const std::vector<std::string> lines = ioutil::read_lines(path);
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    if (ioutil::strip(lines[ln]).empty()) continue;
    rows.push_back(ioutil::split_csv(lines[ln]));
    line_numbers.push_back(static_cast<int>(ln + 1));
  }
  if (rows.empty()) throw HeaderMissing(path + ": missing header row");

  std::vector<std::string> header = rows[0];
  bool has_ids = !header.empty() && header[0] == "node_id";
  const int offset = has_ids ? 1 : 0;
  // a header of pure numbers is almost certainly a missing header
  bool numeric_header = !header.empty();
  for (const std::string& h : header)
    if (!ioutil::parse_int(h)) numeric_header = false;
  if (numeric_header) throw HeaderMissing(path + ": first row looks like data");

  CovariateMatrix cov;
  cov.names.assign(header.begin() + offset, header.end());
  const int q = static_cast<int>(cov.names.size());
  const int n = static_cast<int>(rows.size()) - 1;
  cov.values.resize(n, q);
  for (int i = 0; i < n; ++i) {
    const auto& row = rows[i + 1];
    if (static_cast<int>(row.size()) != q + offset)
      throw ParseError(path + ":" + std::to_string(line_numbers[i + 1]) +
                       ": expected " + std::to_string(q + offset) +
                       " fields, got " + std::to_string(row.size()));
    if (has_ids && row_ids != nullptr) row_ids->push_back(row[0]);
    for (int j = 0; j < q; ++j) {
      const std::string& cell = row[j + offset];
      if (cell == "0")
        cov.values(i, j) = 0.0;
      else if (cell == "1")
        cov.values(i, j) = 1.0;
      else
        throw NonBinaryEntry(path + ":" + std::to_string(line_numbers[i + 1]) +
                             ": entry '" + cell + "' in column '" +
                             cov.names[j] + "' is not 0/1");
    }
  }
  return cov;
}

inline void write_covariates(const CovariateMatrix& cov,
                             const std::string& path,
                             const std::vector<std::string>* row_ids = nullptr) {
  std::ostringstream out;
  if (row_ids != nullptr) out << "node_id,";
  for (int j = 0; j < cov.q(); ++j) {
    if (j > 0) out << ',';
    out << cov.names[j];
  }
  out << '\n';
  for (int i = 0; i < cov.n(); ++i) {
    if (row_ids != nullptr) out << (*row_ids)[i] << ',';
    for (int j = 0; j < cov.q(); ++j) {
      if (j > 0) out << ',';
      out << (cov.values(i, j) != 0.0 ? '1' : '0');
    }
    out << '\n';
  }
  ioutil::write_text(path, out.str());
}

// Reorders covariate rows so that row_ids lines up with node_ids.
inline CovariateMatrix align_rows(const CovariateMatrix& cov,
                                  const std::vector<std::string>& row_ids,
                                  const std::vector<std::string>& node_ids) {
  if (row_ids.size() != node_ids.size() ||
      cov.n() != static_cast<int>(row_ids.size()))
    throw DimensionMismatch("row label count does not match node count");
  std::map<std::string, int> where;
  for (std::size_t i = 0; i < row_ids.size(); ++i)
    where[row_ids[i]] = static_cast<int>(i);
  CovariateMatrix out;
  out.names = cov.names;
  out.values.resize(cov.n(), cov.q());
  for (std::size_t i = 0; i < node_ids.size(); ++i) {
    auto it = where.find(node_ids[i]);
    if (it == where.end())
      throw DimensionMismatch("no covariate row for node '" + node_ids[i] +
                              "'");
    out.values.row(static_cast<int>(i)) = cov.values.row(it->second);
  }
  return out;
}

// FNV-1a over the dimensions and raw bytes of A and Y; cheap provenance
// tie between a snapshot and the data it was fit on.
inline std::uint64_t checksum_pair(const Network& net,
                                   const CovariateMatrix& cov) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix_bytes = [&h](const void* data, std::size_t size) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::int64_t dims[3] = {net.n(), cov.n(), cov.q()};
  mix_bytes(dims, sizeof(dims));
  mix_bytes(net.adjacency.data(), sizeof(double) * net.adjacency.size());
  mix_bytes(cov.values.data(), sizeof(double) * cov.values.size());
  return h;
}

enum class SnapshotStage { stage1, refit };

inline std::string to_string(SnapshotStage s) {
  return s == SnapshotStage::stage1 ? "stage1" : "refit";
}

struct ModelSnapshot {
  int format_version = 1;
  SnapshotStage stage = SnapshotStage::stage1;
  std::uint64_t seed = 0;
  std::uint64_t data_checksum = 0;
  Hyperparams hyper;
  LatentState state;
  std::optional<ActiveSet> active;
};

inline constexpr int kSnapshotVersion = 1;

// JSON with hex-float reals: lossless round-trip, byte-stable output.
inline void write_snapshot(const ModelSnapshot& snap, const std::string& path) {
  using nlohmann::json;
  json j;
  j["format_version"] = kSnapshotVersion;
  j["stage"] = to_string(snap.stage);
  j["seed"] = std::to_string(snap.seed);
  j["data_checksum"] = std::to_string(snap.data_checksum);

  json h;
  h["lambda_weight"] = ioutil::double_to_hex(snap.hyper.lambda_weight);
  h["eta0"] = ioutil::double_to_hex(snap.hyper.eta0);
  h["max_iters"] = snap.hyper.max_iters;
  h["stop_tol"] = ioutil::double_to_hex(snap.hyper.stop_tol);
  h["stop_patience"] = snap.hyper.stop_patience;
  h["tau"] = ioutil::double_to_hex(snap.hyper.tau);
  json lg = json::array(), dg = json::array();
  for (double x : snap.hyper.lambda_grid) lg.push_back(ioutil::double_to_hex(x));
  for (double x : snap.hyper.delta_grid) dg.push_back(ioutil::double_to_hex(x));
  h["lambda_grid"] = std::move(lg);
  h["delta_grid"] = std::move(dg);
  h["optimizer_kind"] = to_string(snap.hyper.optimizer_kind);
  h["selection_criterion"] = to_string(snap.hyper.selection_criterion);
  h["seed"] = std::to_string(snap.hyper.seed);
  j["hyper"] = std::move(h);

  json s;
  s["Z"] = ioutil::matrix_to_json(snap.state.Z);
  s["alpha"] = ioutil::vector_to_json(snap.state.alpha);
  s["beta"] = ioutil::matrix_to_json(snap.state.beta);
  s["gamma"] = ioutil::vector_to_json(snap.state.gamma);
  j["state"] = std::move(s);

  if (snap.active.has_value()) {
    json a;
    a["indices"] = snap.active->indices;
    a["threshold_used"] = ioutil::double_to_hex(snap.active->threshold_used);
    j["active"] = std::move(a);
  }
  ioutil::write_text(path, j.dump(2) + "\n");
}

inline ModelSnapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open snapshot: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!j.contains("format_version") || !j["format_version"].is_number_integer())
    throw ParseError(path + ": missing format_version");
  if (j["format_version"].get<int>() != kSnapshotVersion)
    throw VersionMismatch(path + ": unsupported snapshot version " +
                          j["format_version"].dump());

  ModelSnapshot snap;
  snap.format_version = j["format_version"].get<int>();
  snap.stage = j.at("stage").get<std::string>() == "refit"
                   ? SnapshotStage::refit
                   : SnapshotStage::stage1;
  snap.seed = std::stoull(j.at("seed").get<std::string>());
  snap.data_checksum = std::stoull(j.at("data_checksum").get<std::string>());

  const auto& h = j.at("hyper");
  snap.hyper.lambda_weight =
      ioutil::hex_to_double(h.at("lambda_weight").get<std::string>());
  snap.hyper.eta0 = ioutil::hex_to_double(h.at("eta0").get<std::string>());
  snap.hyper.max_iters = h.at("max_iters").get<int>();
  snap.hyper.stop_tol =
      ioutil::hex_to_double(h.at("stop_tol").get<std::string>());
  snap.hyper.stop_patience = h.at("stop_patience").get<int>();
  snap.hyper.tau = ioutil::hex_to_double(h.at("tau").get<std::string>());
  snap.hyper.lambda_grid.clear();
  for (const auto& x : h.at("lambda_grid"))
    snap.hyper.lambda_grid.push_back(
        ioutil::hex_to_double(x.get<std::string>()));
  snap.hyper.delta_grid.clear();
  for (const auto& x : h.at("delta_grid"))
    snap.hyper.delta_grid.push_back(ioutil::hex_to_double(x.get<std::string>()));
  snap.hyper.optimizer_kind = h.at("optimizer_kind").get<std::string>() ==
                                      "adagrad"
                                  ? OptimizerKind::adagrad
                                  : OptimizerKind::adam;
  snap.hyper.selection_criterion =
      h.at("selection_criterion").get<std::string>() == "logloss"
          ? SelectionCriterion::logloss
          : SelectionCriterion::aic;
  snap.hyper.seed = std::stoull(h.at("seed").get<std::string>());

  const auto& s = j.at("state");
  snap.state.Z = ioutil::matrix_from_json(s.at("Z"));
  snap.state.alpha = ioutil::vector_from_json(s.at("alpha"));
  snap.state.beta = ioutil::matrix_from_json(s.at("beta"));
  snap.state.gamma = ioutil::vector_from_json(s.at("gamma"));
  if (snap.state.beta.size() == 0)
    snap.state.beta.resize(snap.state.Z.cols(), 0);

  if (j.contains("active")) {
    ActiveSet a;
    a.indices = j["active"].at("indices").get<std::vector<int>>();
    a.threshold_used =
        ioutil::hex_to_double(j["active"].at("threshold_used").get<std::string>());
    snap.active = std::move(a);
  }
  return snap;
}

// true when the snapshot was produced from exactly this (A, Y) pair
inline bool verify_checksum(const ModelSnapshot& snap, const Network& net,
                            const CovariateMatrix& cov) {
  return snap.data_checksum == checksum_pair(net, cov);
}

struct ManifestEntry {
  std::string id;
  std::string adjacency_path;
  std::string covariates_path;
};

struct DatasetManifest {
  int format_version = 1;
  std::vector<ManifestEntry> entries;
};

inline DatasetManifest read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (j.value("format_version", 0) != 1)
    throw VersionMismatch(path + ": unsupported manifest version");
  DatasetManifest m;
  std::set<std::string> ids;
  for (const auto& e : j.at("entries")) {
    ManifestEntry entry;
    entry.id = e.at("id").get<std::string>();
    entry.adjacency_path = e.at("adjacency_path").get<std::string>();
    entry.covariates_path = e.at("covariates_path").get<std::string>();
    if (entry.adjacency_path.empty() || entry.covariates_path.empty())
      throw ParseError(path + ": empty path for entry '" + entry.id + "'");
    if (!ids.insert(entry.id).second)
      throw ParseError(path + ": duplicate id '" + entry.id + "'");
    m.entries.push_back(std::move(entry));
  }
  return m;
}

inline void write_manifest(const DatasetManifest& m, const std::string& path) {
  nlohmann::json j;
  j["format_version"] = 1;
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : m.entries) {
    nlohmann::json je;
    je["id"] = e.id;
    je["adjacency_path"] = e.adjacency_path;
    je["covariates_path"] = e.covariates_path;
    entries.push_back(std::move(je));
  }
  j["entries"] = std::move(entries);
  ioutil::write_text(path, j.dump(2) + "\n");
}

// One evaluated run; optional fields print as NA.
struct ResultRow {
  int replicate = 0;
  std::string method;
  std::string regime;
  int noise = 0;
  double density = 0.0;
  double auc_network = 0.0;
  std::optional<double> auc_covariates_mean;
  double mean_logloss_A = 0.0;
  std::optional<double> mean_logloss_Y;
  std::optional<double> tn_rate;
  std::optional<double> tp_rate;
  std::optional<int> n_selected;
  std::optional<double> chosen_lambda;
  std::optional<double> chosen_delta;
  int iterations = 0;
  bool ok = true;
  std::string error;
};

inline const char* kResultHeader =
    "replicate,method,regime,noise,density,auc_network,auc_covariates_mean,"
    "mean_logloss_A,mean_logloss_Y,tn_rate,tp_rate,n_selected,chosen_lambda,"
    "chosen_delta,iterations";

// Deterministic table: rows sorted by (replicate, method), stable format.
inline void export_results(std::vector<ResultRow> rows,
                           const std::string& path) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ResultRow& a, const ResultRow& b) {
                     if (a.replicate != b.replicate)
                       return a.replicate < b.replicate;
                     return a.method < b.method;
                   });
  std::ostringstream out;
  out << kResultHeader << '\n';
  auto opt = [](const std::optional<double>& v) {
    return v.has_value() ? ioutil::format_double(*v) : std::string("NA");
  };
  for (const ResultRow& r : rows) {
    if (!r.ok) continue;
    out << r.replicate << ',' << r.method << ',' << r.regime << ',' << r.noise
        << ',' << ioutil::format_double(r.density) << ','
        << ioutil::format_double(r.auc_network) << ','
        << opt(r.auc_covariates_mean) << ','
        << ioutil::format_double(r.mean_logloss_A) << ','
        << opt(r.mean_logloss_Y) << ',' << opt(r.tn_rate) << ','
        << opt(r.tp_rate) << ','
        << (r.n_selected.has_value() ? std::to_string(*r.n_selected)
                                     : std::string("NA"))
        << ',' << opt(r.chosen_lambda) << ',' << opt(r.chosen_delta) << ','
        << r.iterations << '\n';
  }
  ioutil::write_text(path, out.str());
}

inline void write_truth(const SimTruth& truth, const std::string& path) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["Z_true"] = ioutil::matrix_to_json(truth.Z_true);
  j["alpha_true"] = ioutil::vector_to_json(truth.alpha_true);
  j["beta_true"] = ioutil::matrix_to_json(truth.beta_true);
  j["gamma_true"] = ioutil::vector_to_json(truth.gamma_true);
  j["active_true"] = truth.active_true.indices;
  j["cluster_assignment"] = truth.cluster_assignment;
  ioutil::write_text(path, j.dump(2) + "\n");
}

inline SimTruth read_truth(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open truth file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (j.value("format_version", 0) != 1)
    throw VersionMismatch(path + ": unsupported truth version");
  SimTruth truth;
  truth.Z_true = ioutil::matrix_from_json(j.at("Z_true"));
  truth.alpha_true = ioutil::vector_from_json(j.at("alpha_true"));
  truth.beta_true = ioutil::matrix_from_json(j.at("beta_true"));
  truth.gamma_true = ioutil::vector_from_json(j.at("gamma_true"));
  truth.active_true.indices = j.at("active_true").get<std::vector<int>>();
  truth.cluster_assignment =
      j.at("cluster_assignment").get<std::vector<int>>();
  return truth;
}

inline void write_loss_trace(const std::vector<LossBreakdown>& trace,
                             const std::string& path) {
  std::ostringstream out;
  out << "iteration,loss_A,loss_Y,joint,per_param\n";
  for (std::size_t t = 0; t < trace.size(); ++t)
    out << (t + 1) << ',' << ioutil::format_double(trace[t].loss_A) << ','
        << ioutil::format_double(trace[t].loss_Y) << ','
        << ioutil::format_double(trace[t].joint) << ','
        << ioutil::format_double(trace[t].per_param) << '\n';
  ioutil::write_text(path, out.str());
}

}  // namespace lsnet
