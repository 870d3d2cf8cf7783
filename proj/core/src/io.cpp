#include "eposets/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>

namespace eposets {

namespace {

using nlohmann::json;

constexpr const char* kPosetSchema = "eposet-poset-v1";
constexpr const char* kReportSchema = "eposet-report-v1";

json face_to_json(const GradedPoset& poset, int level, const FaceKey& key) {
  if (poset.kind == FamilyKind::QSimplicial) {
    // rows of the RREF basis
    json rows = json::array();
    const int n = poset.ambient;
    const int r = n > 0 ? static_cast<int>(key.size()) / n : 0;
    for (int row = 0; row < r; ++row) {
      json one = json::array();
      for (int c = 0; c < n; ++c) one.push_back(key[static_cast<size_t>(row) * n + c]);
      rows.push_back(std::move(one));
    }
    return rows;
  }
  (void)level;
  json arr = json::array();
  for (std::uint32_t v : key) arr.push_back(v);
  return arr;
}

FaceKey face_from_json(const GradedPoset& poset, const json& j) {
  FaceKey key;
  if (poset.kind == FamilyKind::QSimplicial) {
    for (const auto& row : j)
      for (const auto& v : row) key.push_back(v.get<std::uint32_t>());
  } else {
    for (const auto& v : j) key.push_back(v.get<std::uint32_t>());
  }
  return key;
}

std::string kind_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Simplicial: return "simplicial";
    case FamilyKind::QSimplicial: return "q-simplicial";
    default: return "custom";
  }
}

FamilyKind kind_from_name(const std::string& name) {
  if (name == "simplicial") return FamilyKind::Simplicial;
  if (name == "q-simplicial") return FamilyKind::QSimplicial;
  return FamilyKind::Custom;
}

}  // namespace

void write_poset_json(const std::string& path, const GradedPoset& poset, const Measure& measure) {
  json j;
  j["schema"] = kPosetSchema;
  j["d"] = poset.d;
  j["family"] = poset.family;
  j["kind"] = kind_name(poset.kind);
  j["q"] = poset.q;
  j["ambient"] = poset.ambient;
  json levels = json::array();
  for (int i = 0; i <= poset.d; ++i) {
    json lvl = json::array();
    for (const auto& key : poset.levels[static_cast<size_t>(i)])
      lvl.push_back(face_to_json(poset, i, key));
    levels.push_back(std::move(lvl));
  }
  j["levels"] = std::move(levels);
  json covers = json::array();
  for (int i = 1; i <= poset.d; ++i) covers.push_back(poset.covers[static_cast<size_t>(i)]);
  j["covers"] = std::move(covers);
  std::vector<double> pi_d(measure.pi.back().data(),
                           measure.pi.back().data() + measure.pi.back().size());
  j["pi_d"] = pi_d;

  std::ofstream out(path);
  if (!out) throw IOError("cannot write " + path);
  out << j.dump(1) << "\n";
}

std::pair<GradedPoset, Measure> read_poset_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IOError("cannot read " + path);
  json j;
  in >> j;
  if (j.value("schema", "") != kPosetSchema)
    throw IOError("unexpected poset schema in " + path);

  GradedPoset poset;
  poset.d = j.at("d").get<int>();
  poset.family = j.value("family", "custom");
  poset.kind = kind_from_name(j.value("kind", "custom"));
  poset.q = j.value("q", 0);
  poset.ambient = j.value("ambient", 0);
  poset.levels.assign(static_cast<size_t>(poset.d) + 1, {});
  for (int i = 0; i <= poset.d; ++i)
    for (const auto& face : j.at("levels").at(static_cast<size_t>(i)))
      poset.levels[static_cast<size_t>(i)].push_back(face_from_json(poset, face));
  poset.covers.assign(static_cast<size_t>(poset.d) + 1, {});
  for (int i = 1; i <= poset.d; ++i)
    poset.covers[static_cast<size_t>(i)] =
        j.at("covers").at(static_cast<size_t>(i) - 1).get<std::vector<std::vector<std::uint32_t>>>();
  poset.build_ups();
  poset.validate();

  std::vector<double> pi_raw = j.at("pi_d").get<std::vector<double>>();
  Eigen::VectorXd pi_d(static_cast<long>(pi_raw.size()));
  for (size_t x = 0; x < pi_raw.size(); ++x) pi_d[static_cast<long>(x)] = pi_raw[x];
  Measure measure = induce_measure(poset, pi_d);
  measure.source = "file:" + path;
  return {std::move(poset), std::move(measure)};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Report::Report(std::string name, std::vector<std::string> columns)
    : name_(std::move(name)), columns_(std::move(columns)) {
  meta_.emplace_back("schema", kReportSchema);
  meta_.emplace_back("report", name_);
}

void Report::set_meta(const std::string& key, const std::string& value) {
  meta_.emplace_back(key, value);
}

void Report::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) throw Error("report row width mismatch");
  rows_.push_back(std::move(cells));
}

std::string Report::to_csv() const {
  std::string out;
  for (const auto& [k, v] : meta_) out += "# " + k + "=" + v + "\n";
  for (size_t c = 0; c < columns_.size(); ++c) {
    out += columns_[c];
    out += (c + 1 < columns_.size()) ? ',' : '\n';
  }
  for (const auto& row : rows_)
    for (size_t c = 0; c < row.size(); ++c) {
      out += row[c];
      out += (c + 1 < row.size()) ? ',' : '\n';
    }
  return out;
}

std::string Report::to_json() const {
  nlohmann::ordered_json j;
  for (const auto& [k, v] : meta_) j["meta"][k] = v;
  j["columns"] = columns_;
  j["rows"] = rows_;
  return j.dump(1) + "\n";
}

void Report::write(const std::string& directory, const std::string& format) const {
  std::filesystem::create_directories(directory);
  const std::string ext = format == "json" ? ".json" : ".csv";
  const std::string path = (std::filesystem::path(directory) / (name_ + ext)).string();
  std::ofstream out(path);
  if (!out) throw IOError("cannot write " + path);
  out << (format == "json" ? to_json() : to_csv());
}

}  // namespace eposets
