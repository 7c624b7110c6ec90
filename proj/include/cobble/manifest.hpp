#ifndef COBBLE_MANIFEST_HPP_
#define COBBLE_MANIFEST_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cobble/generator.hpp"

namespace cobble {

// One benchmark theorem. `environment` is an opaque JSON object handed to
// the prover backend (the mini backend reads atoms/lemmas/hammer knobs out
// of it, see parse_environment). The oracle_* fields are annotations that
// `oracle extract` writes back, so oracle-assisted runs work without the
// reference proofs at hand.
struct BenchmarkRecord {
  std::string id;
  std::string statement;
  std::vector<std::pair<std::string, std::string>> definitions;
  std::vector<std::pair<std::string, std::string>> preceding_lemmas;  // file order
  std::optional<std::string> reference_proof;
  std::string environment = "{}";
  std::optional<std::vector<std::pair<std::string, std::string>>> oracle_premises;
  std::optional<std::string> oracle_decomposition;
};

std::string record_to_json(const BenchmarkRecord& record);
BenchmarkRecord record_from_json(const std::string& line);  // throws ManifestError

// One record per line, blank lines skipped. Throws ManifestError on
// unreadable files, malformed lines, or duplicate ids.
std::vector<BenchmarkRecord> load_manifest(const std::string& path);
void save_manifest(const std::vector<BenchmarkRecord>& records,
                   const std::string& path);

// The prompt-facing slice of a record. oracle_premises stays empty; the
// caller fills it when the premises oracle is switched on.
TheoremMeta meta_of_record(const BenchmarkRecord& record);

}  // namespace cobble

#endif  // COBBLE_MANIFEST_HPP_
