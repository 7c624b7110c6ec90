#include "cobble/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "cobble/errors.hpp"
#include "json.hpp"

namespace cobble {

namespace {

using nlohmann::json;

json pairs_to_json(const std::vector<std::pair<std::string, std::string>>& pairs) {
  json out = json::array();
  for (const auto& [name, statement] : pairs) {
    out.push_back({{"name", name}, {"statement", statement}});
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> pairs_from_json(
    const json& value, const std::string& field) {
  if (!value.is_array()) throw ManifestError(field + " must be an array");
  std::vector<std::pair<std::string, std::string>> out;
  for (const json& item : value) {
    if (!item.is_object() || !item.contains("name") || !item.contains("statement")) {
      throw ManifestError(field + " entries need name and statement");
    }
    out.emplace_back(item["name"].get<std::string>(),
                     item["statement"].get<std::string>());
  }
  return out;
}

}  // namespace

std::string record_to_json(const BenchmarkRecord& record) {
  json doc;
  doc["id"] = record.id;
  doc["statement"] = record.statement;
  if (!record.definitions.empty()) doc["definitions"] = pairs_to_json(record.definitions);
  if (!record.preceding_lemmas.empty()) {
    doc["preceding_lemmas"] = pairs_to_json(record.preceding_lemmas);
  }
  if (record.reference_proof) doc["reference_proof"] = *record.reference_proof;
  doc["environment"] = json::parse(record.environment, nullptr, false);
  if (doc["environment"].is_discarded()) {
    throw ManifestError("record " + record.id + " has an unserializable environment");
  }
  if (record.oracle_premises) doc["oracle_premises"] = pairs_to_json(*record.oracle_premises);
  if (record.oracle_decomposition) doc["oracle_decomposition"] = *record.oracle_decomposition;
  return doc.dump();
}

BenchmarkRecord record_from_json(const std::string& line) {
  json doc = json::parse(line, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ManifestError("manifest line is not a JSON object: " + line);
  }
  if (!doc.contains("id") || !doc["id"].is_string()) {
    throw ManifestError("manifest record without an id");
  }
  BenchmarkRecord record;
  record.id = doc["id"].get<std::string>();
  if (!doc.contains("statement") || !doc["statement"].is_string()) {
    throw ManifestError("record " + record.id + " has no statement");
  }
  record.statement = doc["statement"].get<std::string>();
  if (doc.contains("definitions")) {
    record.definitions = pairs_from_json(doc["definitions"], "definitions");
  }
  if (doc.contains("preceding_lemmas")) {
    record.preceding_lemmas = pairs_from_json(doc["preceding_lemmas"], "preceding_lemmas");
  }
  if (doc.contains("reference_proof")) {
    record.reference_proof = doc["reference_proof"].get<std::string>();
  }
  if (doc.contains("environment")) {
    if (!doc["environment"].is_object()) {
      throw ManifestError("record " + record.id + ": environment must be an object");
    }
    record.environment = doc["environment"].dump();
  }
  if (doc.contains("oracle_premises")) {
    record.oracle_premises = pairs_from_json(doc["oracle_premises"], "oracle_premises");
  }
  if (doc.contains("oracle_decomposition")) {
    record.oracle_decomposition = doc["oracle_decomposition"].get<std::string>();
  }
  return record;
}

std::vector<BenchmarkRecord> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open manifest: " + path);
  std::vector<BenchmarkRecord> records;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    BenchmarkRecord record;
    try {
      record = record_from_json(line);
    } catch (const ManifestError& e) {
      throw ManifestError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (!seen.insert(record.id).second) {
      throw ManifestError(path + ":" + std::to_string(lineno) +
                          ": duplicate id " + record.id);
    }
    records.push_back(std::move(record));
  }
  return records;
}

void save_manifest(const std::vector<BenchmarkRecord>& records,
                   const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ManifestError("cannot write manifest: " + path);
  for (const BenchmarkRecord& record : records) {
    out << record_to_json(record) << "\n";
  }
}

TheoremMeta meta_of_record(const BenchmarkRecord& record) {
  TheoremMeta meta;
  meta.id = record.id;
  meta.statement = record.statement;
  meta.definitions = record.definitions;
  meta.preceding_lemmas = record.preceding_lemmas;
  return meta;
}

}  // namespace cobble
